//! Finite-dimensional commutative `F_p`-algebras, their Frobenius, and finite modules.
//!
//! An algebra is given by structure constants `e_i * e_j = sum_k c[i][j][k] e_k`.
//! Modules carry one action matrix per basis element. The Frobenius twist
//! `F_*M` keeps the underlying space and lets `a` act through `a^p`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, PrimeField};
use crate::subquotient::Subquotient;

/// The matrix of `a -> a^p` on a finite algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusEndo {
    matrix: Matrix,
}

impl FrobeniusEndo {
    /// Computes `phi(e_i) = e_i^p` by square-and-multiply and checks the homomorphism laws.
    pub fn compute(algebra: &FiniteAlgebra) -> Result<Self> {
        let d = algebra.dim();
        let p = algebra.field().p() as u32;
        let cols: Vec<Vec<u8>> = (0..d).map(|i| algebra.pow(&algebra.basis_vector(i), p)).collect();
        let endo = Self { matrix: Matrix::from_columns(algebra.field(), d, &cols) };
        endo.check(algebra)?;
        Ok(endo)
    }

    fn check(&self, algebra: &FiniteAlgebra) -> Result<()> {
        let d = algebra.dim();
        let p = algebra.field().p();
        if self.apply(algebra.unit()) != algebra.unit() {
            return Err(Error::InvalidAlgebra("Frobenius does not fix the unit".into()));
        }
        for i in 0..d {
            // Independent recomputation by p-fold multiplication.
            let e = algebra.basis_vector(i);
            let naive = (1..p).fold(e.clone(), |acc, _| algebra.multiply(&acc, &e));
            if naive != self.matrix.column(i) {
                return Err(Error::InvalidAlgebra(format!(
                    "Frobenius of {} disagrees with repeated multiplication",
                    algebra.labels[i]
                )));
            }
            for j in 0..d {
                let lhs = self.apply(&algebra.multiply(&e, &algebra.basis_vector(j)));
                let rhs = algebra.multiply(&self.matrix.column(i), &self.matrix.column(j));
                if lhs != rhs {
                    return Err(Error::InvalidAlgebra(format!(
                        "Frobenius is not multiplicative on ({}, {})",
                        algebra.labels[i], algebra.labels[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, a: &[u8]) -> Vec<u8> {
        (&self.matrix * &Matrix::column_vector(self.matrix.field(), a)).column(0)
    }
}

/// A finite-dimensional commutative, associative, unital `F_p`-algebra.
#[derive(Clone)]
pub struct FiniteAlgebra {
    name: String,
    field: PrimeField,
    labels: Vec<String>,
    constants: Vec<u8>,
    unit: Vec<u8>,
    frobenius: FrobeniusEndo,
}

impl fmt::Debug for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteAlgebra({}, F_{}, basis {:?})", self.name, self.field.p(), self.labels)
    }
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.labels == other.labels
            && self.constants == other.constants
            && self.unit == other.unit
    }
}

impl Eq for FiniteAlgebra {}

impl FiniteAlgebra {
    /// `constants[i][j][k]` is the coefficient of `e_k` in `e_i * e_j`.
    pub fn new(
        name: impl Into<String>,
        field: PrimeField,
        labels: Vec<String>,
        constants: &[Vec<Vec<i64>>],
        unit: &[i64],
    ) -> Result<Self> {
        let d = labels.len();
        if d == 0 {
            return Err(Error::InvalidAlgebra("the zero algebra is not supported".into()));
        }
        let shape_ok = constants.len() == d
            && constants.iter().all(|row| row.len() == d && row.iter().all(|v| v.len() == d));
        if !shape_ok || unit.len() != d {
            return Err(Error::InvalidAlgebra(format!("structure constants must be {d}x{d}x{d}")));
        }
        let flat = constants.iter().flatten().flatten().map(|&x| field.reduce(x)).collect();
        let mut alg = Self {
            name: name.into(),
            field,
            labels,
            constants: flat,
            unit: unit.iter().map(|&x| field.reduce(x)).collect(),
            frobenius: FrobeniusEndo { matrix: Matrix::zeros(field, d, d) },
        };
        alg.check_axioms()?;
        alg.frobenius = FrobeniusEndo::compute(&alg)?;
        Ok(alg)
    }

    fn check_axioms(&self) -> Result<()> {
        let d = self.dim();
        let l = &self.labels;
        for i in 0..d {
            for j in 0..d {
                if self.product(i, j) != self.product(j, i) {
                    return Err(Error::InvalidAlgebra(format!("not commutative: ({}, {})", l[i], l[j])));
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let left = self.multiply(&self.product(i, j), &self.basis_vector(k));
                    let right = self.multiply(&self.basis_vector(i), &self.product(j, k));
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!(
                            "not associative: ({}, {}, {})",
                            l[i], l[j], l[k]
                        )));
                    }
                }
            }
        }
        for i in 0..d {
            if self.multiply(&self.unit, &self.basis_vector(i)) != self.basis_vector(i) {
                return Err(Error::InvalidAlgebra(format!("unit does not fix {}", l[i])));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[u8] {
        &self.unit
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> u8 {
        let d = self.dim();
        self.constants[(i * d + j) * d + k]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u8> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    /// Coordinates of `e_i * e_j`.
    pub fn product(&self, i: usize, j: usize) -> Vec<u8> {
        let d = self.dim();
        self.constants[(i * d + j) * d..(i * d + j + 1) * d].to_vec()
    }

    pub fn multiply(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let d = self.dim();
        let f = self.field;
        let mut out = vec![0u8; d];
        for i in (0..d).filter(|&i| a[i] != 0) {
            for j in (0..d).filter(|&j| b[j] != 0) {
                let coeff = f.mul(a[i], b[j]);
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot = f.add(*slot, f.mul(coeff, self.constant(i, j, k)));
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &[u8], mut e: u32) -> Vec<u8> {
        let mut base = a.to_vec();
        let mut acc = self.unit.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            base = self.multiply(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn add(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        a.iter().zip(b).map(|(&x, &y)| self.field.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        a.iter().zip(b).map(|(&x, &y)| self.field.sub(x, y)).collect()
    }

    /// Matrix of `x -> a * x` (column `j` is `a * e_j`).
    pub fn left_multiplication(&self, a: &[u8]) -> Matrix {
        let d = self.dim();
        let cols: Vec<Vec<u8>> = (0..d).map(|j| self.multiply(a, &self.basis_vector(j))).collect();
        Matrix::from_columns(self.field, d, &cols)
    }

    pub fn frobenius(&self) -> &FrobeniusEndo {
        &self.frobenius
    }

    /// `phi^{-1}` when the Frobenius is bijective (reduced algebras, i.e. products of finite fields).
    pub fn frobenius_inverse(&self) -> Option<Matrix> {
        self.frobenius.matrix.inverse()
    }

    /// Basis (columns) of the nilradical, the kernel of a high power of the Frobenius.
    pub fn nilradical(&self) -> Matrix {
        self.frobenius.matrix.pow(self.dim() as u32).kernel_basis()
    }

    /// The complete set of orthogonal primitive idempotents.
    ///
    /// The fixed points of the Frobenius form the span of the primitive
    /// idempotents; they are separated with `1 - (x - c)^(p-1)`.
    pub fn primitive_idempotents(&self) -> Vec<Vec<u8>> {
        let field = self.field;
        let d = self.dim();
        let fixed = (self.frobenius.matrix() - &Matrix::identity(field, d)).kernel_basis();
        let mut idempotents = vec![self.unit.clone()];
        for x in fixed.columns() {
            let mut refined = Vec::new();
            for e in &idempotents {
                for c in field.elements() {
                    let shifted = self.sub(&x, &self.scalar(c));
                    let indicator = self.sub(&self.unit, &self.pow(&shifted, field.p() as u32 - 1));
                    let part = self.multiply(e, &indicator);
                    if part.iter().any(|&v| v != 0) {
                        refined.push(part);
                    }
                }
            }
            idempotents = refined;
        }
        idempotents.sort_by_key(|e| std::cmp::Reverse(e.clone()));
        idempotents
    }

    /// `c * 1`.
    pub fn scalar(&self, c: u8) -> Vec<u8> {
        self.unit.iter().map(|&u| self.field.mul(u, c)).collect()
    }
}

/// A finite module over a [`FiniteAlgebra`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AModule {
    algebra: Arc<FiniteAlgebra>,
    dim: usize,
    actions: Vec<Matrix>,
}

impl AModule {
    /// `actions[i]` is the matrix of `e_i`.
    pub fn new(algebra: Arc<FiniteAlgebra>, dim: usize, actions: Vec<Matrix>) -> Result<Self> {
        let d = algebra.dim();
        if actions.len() != d {
            return Err(Error::InvalidModule(format!("expected {d} action matrices, got {}", actions.len())));
        }
        for (i, a) in actions.iter().enumerate() {
            if a.rows() != dim || a.cols() != dim || a.field() != algebra.field() {
                return Err(Error::InvalidModule(format!(
                    "action of {} must be a {dim}x{dim} matrix over F_{}",
                    algebra.labels[i],
                    algebra.field().p()
                )));
            }
        }
        let module = Self { algebra, dim, actions };
        module.check_axioms()?;
        Ok(module)
    }

    fn check_axioms(&self) -> Result<()> {
        let alg = &*self.algebra;
        let id = Matrix::identity(alg.field(), self.dim);
        if self.act(alg.unit()) != id {
            return Err(Error::InvalidModule("the unit does not act as the identity".into()));
        }
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let lhs = &self.actions[i] * &self.actions[j];
                if lhs != self.act(&alg.product(i, j)) {
                    return Err(Error::InvalidModule(format!(
                        "action is not multiplicative on ({}, {})",
                        alg.labels[i], alg.labels[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn zero(algebra: &Arc<FiniteAlgebra>) -> Self {
        let f = algebra.field();
        let actions = vec![Matrix::zeros(f, 0, 0); algebra.dim()];
        Self { algebra: algebra.clone(), dim: 0, actions }
    }

    /// `A` as a module over itself.
    pub fn regular(algebra: &Arc<FiniteAlgebra>) -> Self {
        let actions = (0..algebra.dim())
            .map(|i| algebra.left_multiplication(&algebra.basis_vector(i)))
            .collect();
        Self { algebra: algebra.clone(), dim: algebra.dim(), actions }
    }

    /// `A^rank`; basis index `t * dim(A) + i` is `e_i` in summand `t`.
    pub fn free(algebra: &Arc<FiniteAlgebra>, rank: usize) -> Self {
        let reg = Self::regular(algebra);
        (0..rank).fold(Self::zero(algebra), |acc, _| acc.direct_sum(&reg))
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> PrimeField {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.actions
    }

    /// Action matrix of an arbitrary algebra element.
    pub fn act(&self, a: &[u8]) -> Matrix {
        let f = self.field();
        let mut out = Matrix::zeros(f, self.dim, self.dim);
        for (coeff, m) in a.iter().zip(&self.actions) {
            if *coeff != 0 {
                out = &out + &m.scale(*coeff);
            }
        }
        out
    }

    pub fn same_algebra(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let actions = self.actions.iter().zip(&other.actions).map(|(a, b)| a.direct_sum(b)).collect();
        Self { algebra: self.algebra.clone(), dim: self.dim + other.dim, actions }
    }

    /// `F_*M`: `e_i` acts through `phi(e_i)`.
    pub fn frobenius_twist(&self) -> Self {
        let phi = self.algebra.frobenius().matrix();
        let actions = (0..self.algebra.dim()).map(|i| self.act(&phi.column(i))).collect();
        Self { algebra: self.algebra.clone(), dim: self.dim, actions }
    }

    /// `F_*^n M`.
    pub fn frobenius_twist_power(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |m, _| m.frobenius_twist())
    }

    /// Restriction of scalars along an algebra automorphism given by its matrix.
    pub fn restrict_along(&self, automorphism: &Matrix) -> Self {
        let actions = (0..self.algebra.dim()).map(|i| self.act(&automorphism.column(i))).collect();
        Self { algebra: self.algebra.clone(), dim: self.dim, actions }
    }

    /// The module structure on a stable subquotient.
    pub fn subquotient(&self, sq: &Subquotient) -> Result<Self> {
        if sq.ambient() != self.dim {
            return Err(Error::DimensionMismatch {
                op: "subquotient",
                detail: format!("module of dimension {} vs ambient {}", self.dim, sq.ambient()),
            });
        }
        for (i, a) in self.actions.iter().enumerate() {
            if !sq.is_stable_under(a) {
                return Err(Error::NotStable(format!("not a submodule: {}", self.algebra.labels[i])));
            }
        }
        let actions = self.actions.iter().map(|a| sq.induced(a, sq)).collect();
        Self::new(self.algebra.clone(), sq.dim(), actions)
    }

    /// The submodule generated by the given vectors (columns), as a spanning matrix.
    pub fn generated_submodule(&self, vectors: &Matrix) -> Matrix {
        let parts: Vec<Matrix> = self.actions.iter().map(|a| a * vectors).collect();
        Matrix::hstack_all(self.field(), self.dim, &parts).expect("same rows").column_space_basis()
    }

    /// Basis of `rad(A) * M`.
    pub fn radical_submodule(&self) -> Matrix {
        let rad = self.algebra.nilradical();
        let parts: Vec<Matrix> = rad.columns().map(|r| self.act(&r)).collect();
        Matrix::hstack_all(self.field(), self.dim, &parts).expect("same rows").column_space_basis()
    }

    /// Index of a basis element whose action `matrix` fails to intertwine, if any.
    pub fn linearity_failure(source: &AModule, target: &AModule, matrix: &Matrix) -> Option<usize> {
        (0..source.algebra.dim()).find(|&i| &target.actions[i] * matrix != matrix * &source.actions[i])
    }
}

/// An `A`-linear map between finite modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AModuleMap {
    source: AModule,
    target: AModule,
    matrix: Matrix,
}

impl AModuleMap {
    pub fn new(source: AModule, target: AModule, matrix: Matrix) -> Result<Self> {
        source.same_algebra(&target)?;
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch {
                op: "module map",
                detail: format!(
                    "{}x{} matrix for {} -> {}",
                    matrix.rows(),
                    matrix.cols(),
                    source.dim(),
                    target.dim()
                ),
            });
        }
        if let Some(i) = AModule::linearity_failure(&source, &target, &matrix) {
            return Err(Error::NotLinear(source.algebra.labels[i].clone()));
        }
        Ok(Self { source, target, matrix })
    }

    pub fn identity(m: &AModule) -> Self {
        Self { source: m.clone(), target: m.clone(), matrix: Matrix::identity(m.field(), m.dim()) }
    }

    pub fn zero(source: &AModule, target: &AModule) -> Self {
        Self {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zeros(source.field(), target.dim(), source.dim()),
        }
    }

    pub fn source(&self) -> &AModule {
        &self.source
    }

    pub fn target(&self) -> &AModule {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &AModuleMap) -> Result<Self> {
        if first.target != self.source {
            return Err(Error::DimensionMismatch { op: "compose", detail: "middle objects differ".into() });
        }
        Ok(Self {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: &self.matrix * &first.matrix,
        })
    }

    /// `F_*(f)`: same matrix between the twisted modules.
    pub fn frobenius_twist(&self) -> Self {
        Self {
            source: self.source.frobenius_twist(),
            target: self.target.frobenius_twist(),
            matrix: self.matrix.clone(),
        }
    }
}

impl AModuleMap {
    /// Inclusion of `ker f`.
    pub fn kernel(&self) -> (AModule, AModuleMap) {
        let sq = Subquotient::subspace(&self.matrix.kernel_basis());
        let k = self.source.subquotient(&sq).expect("kernels are submodules");
        let inc = sq.reps().clone();
        (k.clone(), AModuleMap { source: k, target: self.source.clone(), matrix: inc })
    }

    /// Projection onto `coker f`.
    pub fn cokernel(&self) -> (AModule, AModuleMap) {
        let sq = Subquotient::quotient(self.target.field(), self.target.dim(), &self.matrix)
            .expect("images are subspaces");
        let q = self.target.subquotient(&sq).expect("images are submodules");
        let proj = sq.proj().clone();
        (q.clone(), AModuleMap { source: self.target.clone(), target: q, matrix: proj })
    }

    /// Inclusion of `im f`.
    pub fn image(&self) -> (AModule, AModuleMap) {
        let sq = Subquotient::subspace(&self.matrix);
        let i = self.target.subquotient(&sq).expect("images are submodules");
        let inc = sq.reps().clone();
        (i.clone(), AModuleMap { source: i, target: self.target.clone(), matrix: inc })
    }

    pub fn is_isomorphism(&self) -> bool {
        self.matrix.is_invertible()
    }
}

/// Row-major vectorisations of `{f : rho_n(e_i) f = f rho_m(e_i)}`, as columns.
pub fn hom_space(m: &AModule, n: &AModule) -> Result<Matrix> {
    m.same_algebra(n)?;
    let f = m.field();
    let (a, b) = (m.dim(), n.dim());
    let im = Matrix::identity(f, a);
    let in_ = Matrix::identity(f, b);
    let blocks: Vec<Matrix> = (0..m.algebra().dim())
        .map(|i| &n.actions()[i].kronecker(&im) - &in_.kronecker(&m.actions()[i].transpose()))
        .collect();
    let constraints = Matrix::vstack_all(f, a * b, &blocks)?;
    Ok(constraints.kernel_basis())
}

/// An `F_p`-basis of `Hom_A(m, n)`.
pub fn hom_a(m: &AModule, n: &AModule) -> Result<Vec<AModuleMap>> {
    let space = hom_space(m, n)?;
    Ok(space
        .columns()
        .map(|v| AModuleMap {
            source: m.clone(),
            target: n.clone(),
            matrix: Matrix::reshape_column(&v, m.field(), n.dim(), m.dim()),
        })
        .collect())
}

/// How generators of each syzygy are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GeneratorChoice {
    /// Minimal generators, block by block, via Nakayama.
    #[default]
    Minimal,
    /// Every standard basis vector is a generator.
    StandardBasis,
}

/// The coordinate vector of the `t`-th free generator of `A^rank`.
pub fn free_generator(algebra: &FiniteAlgebra, t: usize, rank: usize) -> Vec<u8> {
    let d = algebra.dim();
    let mut v = vec![0u8; d * rank];
    v[t * d..(t + 1) * d].copy_from_slice(algebra.unit());
    v
}

/// Matrix of the `A`-linear map `A^rank -> target` sending generator `t` to column `t` of `values`.
pub fn free_map_from_values(target: &AModule, rank: usize, values: &Matrix) -> Matrix {
    let d = target.algebra().dim();
    Matrix::from_fn(target.field(), target.dim(), rank * d, |r, c| {
        let (t, i) = (c / d, c % d);
        let v = &target.actions()[i] * &Matrix::column_vector(target.field(), &values.column(t));
        v.get(r, 0)
    })
}

/// Images of the free generators of `A^rank` under `map` (one column each).
pub fn values_on_generators(map: &Matrix, algebra: &FiniteAlgebra, rank: usize) -> Matrix {
    let cols: Vec<Vec<u8>> = (0..rank)
        .map(|t| (map * &Matrix::column_vector(algebra.field(), &free_generator(algebra, t, rank))).column(0))
        .collect();
    Matrix::from_columns(algebra.field(), map.rows(), &cols)
}

fn generators(m: &AModule, choice: GeneratorChoice) -> Matrix {
    let f = m.field();
    if choice == GeneratorChoice::StandardBasis || m.is_zero() {
        return Matrix::identity(f, m.dim());
    }
    let alg = m.algebra();
    let rad = m.radical_submodule();
    let mut per_block: Vec<Vec<Vec<u8>>> = Vec::new();
    for e in alg.primitive_idempotents() {
        let block = m.act(&e);
        let mut span = rad.clone();
        let mut chosen = Vec::new();
        for v in block.columns() {
            let col = Matrix::column_vector(f, &v);
            if !span.spans(&col) {
                span = span.hstack(&m.generated_submodule(&col)).expect("same rows");
                chosen.push(v);
            }
        }
        per_block.push(chosen);
    }
    let count = per_block.iter().map(Vec::len).max().unwrap_or(0);
    let gens: Vec<Vec<u8>> = (0..count)
        .map(|t| {
            per_block.iter().filter_map(|b| b.get(t)).fold(vec![0u8; m.dim()], |acc, v| {
                acc.iter().zip(v).map(|(&x, &y)| f.add(x, y)).collect()
            })
        })
        .collect();
    Matrix::from_columns(f, m.dim(), &gens)
}

/// A free resolution `P_len -> ... -> P_0 -> M -> 0`.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    module: AModule,
    ranks: Vec<usize>,
    terms: Vec<AModule>,
    differentials: Vec<Matrix>,
    augmentation: Matrix,
}

impl FreeResolution {
    pub fn module(&self) -> &AModule {
        &self.module
    }

    pub fn len(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn term(&self, i: usize) -> &AModule {
        &self.terms[i]
    }

    /// `d_i : P_i -> P_{i-1}` for `1 <= i <= len`.
    pub fn differential(&self, i: usize) -> &Matrix {
        &self.differentials[i - 1]
    }

    pub fn augmentation(&self) -> &Matrix {
        &self.augmentation
    }

    /// Checks `d∘d = 0`, surjectivity of the augmentation and exactness below the top term.
    pub fn is_exact(&self) -> bool {
        let n = self.len();
        if self.augmentation.rank() != self.module.dim() {
            return false;
        }
        for i in 0..=n {
            let out = if i == 0 { &self.augmentation } else { self.differential(i) };
            if i < n {
                let inc = self.differential(i + 1);
                if !(out * inc).is_zero() {
                    return false;
                }
                if out.cols() - out.rank() != inc.rank() {
                    return false;
                }
            }
        }
        true
    }
}

pub fn free_resolution(m: &AModule, length: usize) -> FreeResolution {
    free_resolution_with(m, length, GeneratorChoice::Minimal)
}

pub fn free_resolution_with(m: &AModule, length: usize, choice: GeneratorChoice) -> FreeResolution {
    let alg = m.algebra().clone();
    let f = m.field();
    let mut terms = Vec::new();
    let mut ranks = Vec::new();
    let mut differentials = Vec::new();
    let mut augmentation = None;
    let mut syzygy = m.clone();
    let mut inclusion = Matrix::identity(f, m.dim());
    for i in 0..=length {
        let gens = generators(&syzygy, choice);
        let rank = gens.cols();
        let cover = free_map_from_values(&syzygy, rank, &gens);
        let map = &inclusion * &cover;
        let term = AModule::free(&alg, rank);
        if i == 0 {
            augmentation = Some(map);
        } else {
            differentials.push(map);
        }
        let kernel = cover.kernel_basis();
        syzygy = term
            .subquotient(&Subquotient::subspace(&kernel))
            .expect("kernels of linear maps are submodules");
        inclusion = Subquotient::subspace(&kernel).reps().clone();
        terms.push(term);
        ranks.push(rank);
    }
    FreeResolution {
        module: m.clone(),
        ranks,
        terms,
        differentials,
        augmentation: augmentation.expect("length >= 0"),
    }
}

/// Matrix of `Hom_A(P, N) -> Hom_A(P', N)`, `g -> g ∘ map`, where `P = A^rank_target`,
/// `P' = A^rank_source` and homs out of free modules are identified with tuples in `N`.
pub fn pullback_on_free(map: &Matrix, rank_source: usize, rank_target: usize, n: &AModule) -> Matrix {
    let alg = n.algebra();
    let d = alg.dim();
    let f = n.field();
    let nd = n.dim();
    let mut out = Matrix::zeros(f, nd * rank_source, nd * rank_target);
    for t in 0..rank_source {
        let image = (map * &Matrix::column_vector(f, &free_generator(alg, t, rank_source))).column(0);
        for s in 0..rank_target {
            let block = n.act(&image[s * d..(s + 1) * d]);
            for r in 0..nd {
                for c in 0..nd {
                    out.set(t * nd + r, s * nd + c, block.get(r, c));
                }
            }
        }
    }
    out
}

/// `Ext^i_A(m, n)` with representative cocycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtGroup {
    pub degree: usize,
    pub dimension: usize,
    /// Cocycles in `Hom_A(P_i, N) ≅ N^{rank P_i}` lifting a basis of the group.
    pub cocycles: Matrix,
}

/// The cochain complex `Hom_A(P_•, n)` with `P_•` a free resolution.
#[derive(Clone, Debug)]
pub struct HomCochains {
    /// `delta[i] : Hom(P_i, N) -> Hom(P_{i+1}, N)`.
    pub delta: Vec<Matrix>,
    pub dims: Vec<usize>,
}

impl HomCochains {
    pub fn new(res: &FreeResolution, n: &AModule) -> Self {
        let len = res.len();
        let dims: Vec<usize> = (0..=len).map(|i| res.rank(i) * n.dim()).collect();
        let delta = (0..len)
            .map(|i| pullback_on_free(res.differential(i + 1), res.rank(i + 1), res.rank(i), n))
            .collect();
        Self { delta, dims }
    }

    /// Coboundary into degree `i` (zero map for `i = 0`).
    pub fn incoming(&self, i: usize, field: PrimeField) -> Matrix {
        if i == 0 {
            Matrix::zeros(field, self.dims[0], 0)
        } else {
            self.delta[i - 1].clone()
        }
    }
}

pub fn ext_a(m: &AModule, n: &AModule, degree: usize) -> Result<ExtGroup> {
    ext_a_with(m, n, degree, GeneratorChoice::Minimal)
}

pub fn ext_a_with(m: &AModule, n: &AModule, degree: usize, choice: GeneratorChoice) -> Result<ExtGroup> {
    m.same_algebra(n)?;
    let res = free_resolution_with(m, degree + 1, choice);
    let cochains = HomCochains::new(&res, n);
    let f = m.field();
    let outgoing = &cochains.delta[degree];
    let incoming = cochains.incoming(degree, f);
    let cycles = outgoing.kernel_basis();
    let sq = Subquotient::new(&cycles, &incoming)?;
    Ok(ExtGroup { degree, dimension: sq.dim(), cocycles: sq.reps().clone() })
}

/// `dim Ext^i_A(m, n)` for `i <= max_degree`, from one resolution.
pub fn ext_a_dims(m: &AModule, n: &AModule, max_degree: usize, choice: GeneratorChoice) -> Result<Vec<usize>> {
    m.same_algebra(n)?;
    let res = free_resolution_with(m, max_degree + 1, choice);
    let cochains = HomCochains::new(&res, n);
    let f = m.field();
    (0..=max_degree)
        .map(|i| {
            let cycles = cochains.delta[i].kernel_basis();
            Ok(Subquotient::new(&cycles, &cochains.incoming(i, f))?.dim())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn frobenius_examples() {
        let f2 = catalog::f2();
        assert_eq!(f2.frobenius().matrix(), &Matrix::identity(f2.field(), 1));

        // F_4 = F_2[w]/(w^2+w+1): w^2 = w + 1, so phi swaps w and w + 1.
        let f4 = catalog::f4();
        let phi = f4.frobenius().matrix();
        assert_eq!(phi.column(0), vec![1, 0]);
        assert_eq!(phi.column(1), vec![1, 1]);
        assert_eq!(phi.pow(2), Matrix::identity(f4.field(), 2));

        // F_2[x]/(x^2): x^2 = 0.
        let dual = catalog::dual_numbers(2);
        let phi = dual.frobenius().matrix();
        assert_eq!(phi.column(0), vec![1, 0]);
        assert_eq!(phi.column(1), vec![0, 0]);
    }

    #[test]
    fn rejects_nonassociative_constants() {
        let f = PrimeField::new(2).unwrap();
        // 1, x, y with x*x = y, x*y = 0, y*y = x: (x*x)*x = 0 but x*(x*x) = x*y = 0,
        // (x*x)*y = y*y = x, x*(x*y) = 0.
        let labels = vec!["1".to_string(), "x".into(), "y".into()];
        let mut c = vec![vec![vec![0i64; 3]; 3]; 3];
        for i in 0..3 {
            c[0][i][i] = 1;
            c[i][0][i] = 1;
        }
        c[1][1][2] = 1;
        c[2][2][1] = 1;
        let err = FiniteAlgebra::new("bad", f, labels, &c, &[1, 0, 0]).unwrap_err();
        assert!(matches!(err, Error::InvalidAlgebra(msg) if msg.contains("not associative")));
    }

    #[test]
    fn twist_examples() {
        let f2 = Arc::new(catalog::f2());
        let m = AModule::free(&f2, 2);
        assert_eq!(m.frobenius_twist(), m);

        let dual = Arc::new(catalog::dual_numbers(2));
        let a = AModule::regular(&dual);
        let tw = a.frobenius_twist();
        assert_eq!(tw.dim(), 2);
        assert!(tw.actions()[1].is_zero());

        let f4 = Arc::new(catalog::f4());
        let a = AModule::regular(&f4);
        assert_ne!(a.frobenius_twist(), a);
        assert_eq!(a.frobenius_twist_power(2), a);
    }

    #[test]
    fn twist_preserves_maps() {
        // F_*(f) has the same matrix as f; linearity survives the twist.
        let alg = Arc::new(catalog::truncated_polynomial(2, 3));
        let a = AModule::regular(&alg);
        for f in hom_a(&a, &a).unwrap() {
            let tw = f.frobenius_twist();
            assert_eq!(tw.matrix(), f.matrix());
            assert!(AModuleMap::new(tw.source().clone(), tw.target().clone(), tw.matrix().clone()).is_ok());
        }
    }

    fn residue_field(alg: &Arc<FiniteAlgebra>) -> AModule {
        let top = Subquotient::quotient(alg.field(), alg.dim(), &alg.nilradical()).unwrap();
        AModule::regular(alg).subquotient(&top).unwrap()
    }

    #[test]
    fn hom_examples() {
        let dual = Arc::new(catalog::dual_numbers(2));
        let a = AModule::regular(&dual);
        let k = residue_field(&dual);
        assert_eq!(hom_a(&a, &k).unwrap().len(), k.dim());
        // Of the two linear maps F_2 -> F_2 both commute with x = 0.
        assert_eq!(hom_a(&k, &k).unwrap().len(), 1);
        assert!(hom_a(&a, &AModule::zero(&dual)).unwrap().is_empty());
    }

    #[test]
    fn resolution_of_free_module_stops() {
        for alg in catalog::all() {
            let alg = Arc::new(alg);
            let m = AModule::free(&alg, 2);
            let res = free_resolution(&m, 3);
            assert_eq!(res.ranks(), &[2, 0, 0, 0], "{}", alg.name());
            assert!(res.is_exact());
        }
    }

    #[test]
    fn resolution_of_residue_field_is_periodic() {
        let dual = Arc::new(catalog::dual_numbers(2));
        let k = residue_field(&dual);
        let res = free_resolution(&k, 4);
        assert_eq!(res.ranks(), &[1, 1, 1, 1, 1]);
        let x = dual.left_multiplication(&[0, 1]);
        for i in 1..=4 {
            assert_eq!(res.differential(i), &x);
        }
        assert!(res.is_exact());

        let z = free_resolution(&AModule::zero(&dual), 2);
        assert_eq!(z.ranks(), &[0, 0, 0]);
    }

    #[test]
    fn ext_examples() {
        let dual = Arc::new(catalog::dual_numbers(2));
        let k = residue_field(&dual);
        for i in 0..=4 {
            assert_eq!(ext_a(&k, &k, i).unwrap().dimension, 1, "degree {i}");
        }
        for alg in [catalog::f2(), catalog::f4()] {
            let alg = Arc::new(alg);
            let m = AModule::free(&alg, 1);
            assert_eq!(ext_a(&m, &m, 1).unwrap().dimension, 0);
            assert_eq!(ext_a(&m, &m, 0).unwrap().dimension, hom_a(&m, &m).unwrap().len());
        }
    }

    #[test]
    fn idempotents_of_product() {
        let alg = catalog::f2_times_f2();
        assert_eq!(alg.primitive_idempotents(), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(catalog::f4().primitive_idempotents().len(), 1);
        assert_eq!(catalog::truncated_polynomial(2, 3).primitive_idempotents().len(), 1);
        assert_eq!(catalog::f4_times_dual_numbers().primitive_idempotents().len(), 2);
    }

    #[test]
    fn minimal_generators_for_nonlocal_cyclic_module() {
        let alg = Arc::new(catalog::f2_times_f2());
        let res = free_resolution(&AModule::regular(&alg), 1);
        assert_eq!(res.ranks(), &[1, 0]);
    }
}
