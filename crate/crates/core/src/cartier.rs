//! Cartier modules `(M, κ: F_*M -> M)` and Frobenius modules `(M, τ: M -> F_*M)`.
//!
//! `F_*` is restriction of scalars along the Frobenius, so `F_*(f)` has the
//! same matrix as `f`. A structure map is therefore just a matrix that is
//! `A`-linear for the twisted action on one side.

use std::sync::Arc;

use crate::algebra::{hom_a, AModule, AModuleMap, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::subquotient::Subquotient;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierModule {
    module: AModule,
    kappa: Matrix,
}

impl CartierModule {
    pub fn new(module: AModule, kappa: Matrix) -> Result<Self> {
        let n = module.dim();
        if kappa.rows() != n || kappa.cols() != n || kappa.field() != module.field() {
            return Err(Error::DimensionMismatch {
                op: "cartier structure",
                detail: format!("{}x{} for a module of dimension {n}", kappa.rows(), kappa.cols()),
            });
        }
        if let Some(i) = AModule::linearity_failure(&module.frobenius_twist(), &module, &kappa) {
            return Err(Error::NotSemilinear(module.algebra().labels()[i].clone()));
        }
        Ok(Self { module, kappa })
    }

    pub fn zero(algebra: &Arc<FiniteAlgebra>) -> Self {
        Self { module: AModule::zero(algebra), kappa: Matrix::zeros(algebra.field(), 0, 0) }
    }

    pub fn module(&self) -> &AModule {
        &self.module
    }

    pub fn kappa(&self) -> &Matrix {
        &self.kappa
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        self.module.algebra()
    }

    /// The forgetful functor `U`.
    pub fn forget(&self) -> AModule {
        self.module.clone()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self {
            module: self.module.direct_sum(&other.module),
            kappa: self.kappa.direct_sum(&other.kappa),
        }
    }

    /// The structure induced on a subquotient stable under the action and under `κ`.
    ///
    /// `κ` is restricted to the subspace and descended to the quotient; the
    /// result is revalidated.
    pub fn subquotient(&self, sq: &Subquotient) -> Result<Self> {
        let module = self.module.subquotient(sq)?;
        if !sq.is_stable_under(&self.kappa) {
            return Err(Error::NotStable("not stable under the structure map".into()));
        }
        Self::new(module, sq.induced(&self.kappa, sq))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusModule {
    module: AModule,
    tau: Matrix,
}

impl FrobeniusModule {
    pub fn new(module: AModule, tau: Matrix) -> Result<Self> {
        let n = module.dim();
        if tau.rows() != n || tau.cols() != n || tau.field() != module.field() {
            return Err(Error::DimensionMismatch {
                op: "frobenius structure",
                detail: format!("{}x{} for a module of dimension {n}", tau.rows(), tau.cols()),
            });
        }
        if let Some(i) = AModule::linearity_failure(&module, &module.frobenius_twist(), &tau) {
            return Err(Error::NotSemilinear(module.algebra().labels()[i].clone()));
        }
        Ok(Self { module, tau })
    }

    pub fn module(&self) -> &AModule {
        &self.module
    }

    pub fn tau(&self) -> &Matrix {
        &self.tau
    }
}

/// A morphism of Cartier modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierMorphism {
    source: CartierModule,
    target: CartierModule,
    matrix: Matrix,
}

impl CartierMorphism {
    pub fn new(source: CartierModule, target: CartierModule, matrix: Matrix) -> Result<Self> {
        AModuleMap::new(source.module.clone(), target.module.clone(), matrix.clone())?;
        if &matrix * &source.kappa != &target.kappa * &matrix {
            return Err(Error::NotCompatible);
        }
        Ok(Self { source, target, matrix })
    }

    pub fn identity(m: &CartierModule) -> Self {
        Self { source: m.clone(), target: m.clone(), matrix: Matrix::identity(m.module.field(), m.dim()) }
    }

    pub fn zero(source: &CartierModule, target: &CartierModule) -> Self {
        Self {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zeros(source.module.field(), target.dim(), source.dim()),
        }
    }

    pub fn source(&self) -> &CartierModule {
        &self.source
    }

    pub fn target(&self) -> &CartierModule {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &CartierMorphism) -> Result<Self> {
        if first.target != self.source {
            return Err(Error::DimensionMismatch { op: "compose", detail: "middle objects differ".into() });
        }
        Ok(Self {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: &self.matrix * &first.matrix,
        })
    }

    pub fn forget(&self) -> AModuleMap {
        AModuleMap::new(self.source.forget(), self.target.forget(), self.matrix.clone())
            .expect("cartier morphisms are A-linear")
    }

    pub fn is_isomorphism(&self) -> bool {
        self.matrix.is_invertible()
    }

    /// The inverse in `Cart`, when the underlying matrix is invertible.
    pub fn inverse(&self) -> Option<Self> {
        let inv = self.matrix.inverse()?;
        Self::new(self.target.clone(), self.source.clone(), inv).ok()
    }

    pub fn kernel(&self) -> Result<(CartierModule, CartierMorphism)> {
        let sq = Subquotient::subspace(&self.matrix.kernel_basis());
        let k = self.source.subquotient(&sq)?;
        let inc = Self::new(k.clone(), self.source.clone(), sq.reps().clone())?;
        Ok((k, inc))
    }

    pub fn cokernel(&self) -> Result<(CartierModule, CartierMorphism)> {
        let sq = Subquotient::quotient(self.matrix.field(), self.target.dim(), &self.matrix)?;
        let q = self.target.subquotient(&sq)?;
        let proj = Self::new(self.target.clone(), q.clone(), sq.proj().clone())?;
        Ok((q, proj))
    }

    pub fn image(&self) -> Result<(CartierModule, CartierMorphism)> {
        let sq = Subquotient::subspace(&self.matrix);
        let i = self.target.subquotient(&sq)?;
        let inc = Self::new(i.clone(), self.target.clone(), sq.reps().clone())?;
        Ok((i, inc))
    }

    pub fn coimage(&self) -> Result<(CartierModule, CartierMorphism)> {
        let sq = Subquotient::quotient(self.matrix.field(), self.source.dim(), &self.matrix.kernel_basis())?;
        let c = self.source.subquotient(&sq)?;
        let proj = Self::new(self.source.clone(), c.clone(), sq.proj().clone())?;
        Ok((c, proj))
    }

    /// The canonical map `coim f -> im f` induced by `f`.
    pub fn coimage_to_image(&self) -> Result<CartierMorphism> {
        let src = Subquotient::quotient(self.matrix.field(), self.source.dim(), &self.matrix.kernel_basis())?;
        let tgt = Subquotient::subspace(&self.matrix);
        let (coim, _) = self.coimage()?;
        let (im, _) = self.image()?;
        Self::new(coim, im, src.induced(&self.matrix, &tgt))
    }
}

/// `Δ(f) = κ_n f - f κ_m` on a matrix of the right shape.
pub fn equalizer_defect(m: &CartierModule, n: &CartierModule, f: &Matrix) -> Matrix {
    &(&n.kappa * f) - &(f * &m.kappa)
}

/// An `F_p`-basis of `Hom_Cart(m, n)`: the kernel of `Δ` on `Hom_A(Um, Un)`.
pub fn hom_cart(m: &CartierModule, n: &CartierModule) -> Result<Vec<CartierMorphism>> {
    let basis = hom_a(&m.module, &n.module)?;
    let field = m.module.field();
    let len = m.dim() * n.dim();
    let cols: Vec<Vec<u8>> = basis.iter().map(|f| equalizer_defect(m, n, f.matrix()).flatten()).collect();
    let delta = Matrix::from_columns(field, len, &cols);
    let coefficients = delta.kernel_basis();
    coefficients
        .columns()
        .map(|c| {
            let mut acc = Matrix::zeros(field, n.dim(), m.dim());
            for (coeff, f) in c.iter().zip(&basis) {
                if *coeff != 0 {
                    acc = &acc + &f.matrix().scale(*coeff);
                }
            }
            CartierMorphism::new(m.clone(), n.clone(), acc)
        })
        .collect()
}

/// An object of `Cart(A, F^*)`: `κ: F^*M -> M`, where `F^*` is restriction along `phi^{-1}`.
///
/// Only defined when the Frobenius of the algebra is bijective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackCartierModule {
    module: AModule,
    kappa: Matrix,
}

fn frobenius_inverse(algebra: &FiniteAlgebra) -> Result<Matrix> {
    algebra.frobenius_inverse().ok_or_else(|| Error::FrobeniusNotInvertible(algebra.name().to_string()))
}

/// `F^*M`, restriction of scalars along `phi^{-1}`.
pub fn frobenius_pullback(m: &AModule) -> Result<AModule> {
    Ok(m.restrict_along(&frobenius_inverse(m.algebra())?))
}

impl PullbackCartierModule {
    pub fn new(module: AModule, kappa: Matrix) -> Result<Self> {
        let pulled = frobenius_pullback(&module)?;
        AModuleMap::new(pulled, module.clone(), kappa.clone()).map_err(|e| match e {
            Error::NotLinear(l) => Error::NotSemilinear(l),
            other => other,
        })?;
        Ok(Self { module, kappa })
    }

    pub fn module(&self) -> &AModule {
        &self.module
    }

    pub fn kappa(&self) -> &Matrix {
        &self.kappa
    }
}

/// Unit `M -> F_* F^* M` of `F^* ⊣ F_*`; the identity matrix, checked to be `A`-linear.
pub fn pullback_unit(m: &AModule) -> Result<AModuleMap> {
    let target = frobenius_pullback(m)?.frobenius_twist();
    AModuleMap::new(m.clone(), target, Matrix::identity(m.field(), m.dim()))
}

/// Counit `F^* F_* M -> M`.
pub fn pullback_counit(m: &AModule) -> Result<AModuleMap> {
    let source = frobenius_pullback(&m.frobenius_twist())?;
    AModuleMap::new(source, m.clone(), Matrix::identity(m.field(), m.dim()))
}

/// `Cart(A, F^*) -> Frob(A, F_*)`: `τ = F_*(κ) ∘ η_M`.
pub fn adjoint_swap(m: &PullbackCartierModule) -> Result<FrobeniusModule> {
    let unit = pullback_unit(&m.module)?;
    FrobeniusModule::new(m.module.clone(), &m.kappa * unit.matrix())
}

/// `Frob(A, F_*) -> Cart(A, F^*)`: `κ = ε_M ∘ F^*(τ)`.
pub fn adjoint_swap_inverse(m: &FrobeniusModule) -> Result<PullbackCartierModule> {
    let counit = pullback_counit(&m.module)?;
    PullbackCartierModule::new(m.module.clone(), counit.matrix() * &m.tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn scalar_module(alg: &Arc<FiniteAlgebra>, kappa: i64) -> CartierModule {
        let m = AModule::free(alg, 1);
        let k = Matrix::from_rows(alg.field(), &[vec![kappa]]).unwrap();
        CartierModule::new(m, k).unwrap()
    }

    #[test]
    fn hom_cart_examples() {
        let f2 = Arc::new(catalog::f2());
        let one = scalar_module(&f2, 1);
        let zero = scalar_module(&f2, 0);
        // The candidate maps F_2 -> F_2 are 0 and 1; 1 fails 1*1 = 0*1.
        assert!(hom_cart(&one, &zero).unwrap().is_empty());
        assert_eq!(hom_cart(&zero, &zero).unwrap().len(), 1);
    }

    #[test]
    fn identity_in_span_of_endomorphisms() {
        let alg = Arc::new(catalog::truncated_polynomial(2, 3));
        let m = AModule::regular(&alg);
        let tw = m.frobenius_twist();
        for kappa in hom_a(&tw, &m).unwrap() {
            let c = CartierModule::new(m.clone(), kappa.matrix().clone()).unwrap();
            let basis: Vec<Matrix> = hom_cart(&c, &c).unwrap().iter().map(|f| f.matrix().clone()).collect();
            let span = Matrix::from_columns(alg.field(), 9, &basis.iter().map(Matrix::flatten).collect::<Vec<_>>());
            let id = Matrix::column_vector(alg.field(), &Matrix::identity(alg.field(), 3).flatten());
            assert!(span.spans(&id));
        }
    }

    #[test]
    fn semilinearity_is_checked() {
        let dual = Arc::new(catalog::dual_numbers(2));
        let a = AModule::regular(&dual);
        // κ = identity would need κ(x^2 m) = x κ(m), i.e. 0 = x m.
        let err = CartierModule::new(a.clone(), Matrix::identity(dual.field(), 2)).unwrap_err();
        assert_eq!(err, Error::NotSemilinear("x".into()));
        assert!(FrobeniusModule::new(a, Matrix::identity(dual.field(), 2)).is_err());
    }

    #[test]
    fn kernel_and_cokernel_of_trivial_maps() {
        let dual = Arc::new(catalog::dual_numbers(2));
        let a = AModule::regular(&dual);
        let kappa = hom_a(&a.frobenius_twist(), &a).unwrap()[0].matrix().clone();
        let m = CartierModule::new(a, kappa).unwrap();
        let id = CartierMorphism::identity(&m);
        assert_eq!(id.kernel().unwrap().0.dim(), 0);
        assert_eq!(id.cokernel().unwrap().0.dim(), 0);
        let z = CartierMorphism::zero(&m, &m);
        assert_eq!(z.kernel().unwrap().0, m);
        assert_eq!(z.cokernel().unwrap().0, m);
    }

    #[test]
    fn kernel_of_augmentation() {
        let dual = Arc::new(catalog::dual_numbers(2));
        let a = AModule::regular(&dual);
        let k = AModule::new(dual.clone(), 1, vec![Matrix::identity(dual.field(), 1), Matrix::zeros(dual.field(), 1, 1)])
            .unwrap();
        let target = CartierModule::new(k, Matrix::zeros(dual.field(), 1, 1)).unwrap();
        let aug = Matrix::from_rows(dual.field(), &[vec![1, 0]]).unwrap();
        for kappa in hom_a(&a.frobenius_twist(), &a).unwrap() {
            let source = CartierModule::new(a.clone(), kappa.matrix().clone()).unwrap();
            let Ok(f) = CartierMorphism::new(source, target.clone(), aug.clone()) else {
                continue;
            };
            let (ker, inc) = f.kernel().unwrap();
            assert_eq!(ker.dim(), 1);
            assert_eq!(inc.matrix().column(0), vec![0, 1]);
            assert_eq!(ker.forget(), f.forget().kernel().0);
        }
    }

    #[test]
    fn forget_preserves_identity_and_zero() {
        let f4 = Arc::new(catalog::f4());
        let z = CartierModule::zero(&f4);
        assert!(z.forget().is_zero());
        let m = CartierModule::new(AModule::regular(&f4), f4.frobenius().matrix().clone()).unwrap();
        assert_eq!(CartierMorphism::identity(&m).forget(), AModuleMap::identity(m.module()));
    }

    #[test]
    fn adjoint_swap_examples() {
        let f2 = Arc::new(catalog::f2());
        let v = AModule::free(&f2, 2);
        let kappa = Matrix::from_rows(f2.field(), &[vec![1, 1], vec![0, 1]]).unwrap();
        let m = PullbackCartierModule::new(v, kappa.clone()).unwrap();
        let swapped = adjoint_swap(&m).unwrap();
        assert_eq!(swapped.tau(), &kappa);
        assert_eq!(adjoint_swap_inverse(&swapped).unwrap(), m);

        // On F_4 the Frobenius itself is phi^{-1}-semilinear: phi(phi^{-1}(a) m) = a phi(m).
        let f4 = Arc::new(catalog::f4());
        let a = AModule::regular(&f4);
        let m = PullbackCartierModule::new(a, f4.frobenius().matrix().clone()).unwrap();
        let back = adjoint_swap_inverse(&adjoint_swap(&m).unwrap()).unwrap();
        assert_eq!(back, m);

        let zero = PullbackCartierModule::new(AModule::zero(&f4), Matrix::zeros(f4.field(), 0, 0)).unwrap();
        assert_eq!(adjoint_swap(&zero).unwrap().module().dim(), 0);
    }

    #[test]
    fn adjoint_swap_needs_invertible_frobenius() {
        let dual = Arc::new(catalog::dual_numbers(2));
        let a = AModule::regular(&dual);
        let err = PullbackCartierModule::new(a, Matrix::zeros(dual.field(), 2, 2)).unwrap_err();
        assert!(matches!(err, Error::FrobeniusNotInvertible(_)));
    }
}
