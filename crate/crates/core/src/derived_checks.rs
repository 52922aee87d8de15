//! Verifiers for the fiber sequence of derived Homs and its supporting facts.
//!
//! Every function returns a report; failures are verdicts, never panics.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::algebra::{AModule, AModuleMap, FiniteAlgebra};
use crate::cartier::{frobenius_pullback, pullback_counit, pullback_unit, CartierModule, CartierMorphism};
use crate::complexes::{ComplexMap, ModuleComplex};
use crate::error::Result;
use crate::free_monad::{
    adjunction_backward, adjunction_forward, counit, triangle_free_side, triangle_module_side, FiberComplex,
    FreeToModuleMap,
};
use crate::les::{check_sequence, Node, SequenceVerdict};
use crate::linalg::Matrix;
use crate::oracle;
use crate::sample::{random_chain_map, random_complex, random_module, random_module_map, SampleRng};
use crate::subquotient::Subquotient;

/// `0 -> Ext^0_Cart -> Ext^0_A(UM,UN) -> Ext^0_A(F_*UM,UN) -> Ext^1_Cart -> ...`
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesReport {
    pub max_degree: usize,
    pub ext_cart: Vec<usize>,
    pub ext_source: Vec<usize>,
    pub ext_target: Vec<usize>,
    pub sequence: SequenceVerdict,
    pub hom_cart: usize,
    pub degree0_matches_hom: bool,
    /// `None` when the oracle's size guard rejects the pair.
    pub yoneda: Option<usize>,
}

impl LesReport {
    pub fn exact(&self) -> bool {
        self.sequence.exact()
    }

    pub fn degree1_matches_yoneda(&self) -> Option<bool> {
        self.yoneda.map(|y| self.ext_cart.get(1) == Some(&y))
    }

    pub fn passed(&self) -> bool {
        self.exact() && self.degree0_matches_hom && self.degree1_matches_yoneda().unwrap_or(true)
    }
}

pub fn verify_les(m: &CartierModule, n: &CartierModule, max_degree: usize) -> Result<LesReport> {
    let fib = FiberComplex::new(m, n, max_degree + 1)?;
    let f = m.module().field();
    let x = &fib.source_cochains;
    let y = &fib.target_cochains;
    let mut nodes = Vec::new();
    let mut maps = Vec::new();
    for i in 0..=max_degree + 1 {
        let y_prev = if i == 0 { 0 } else { y.dims[i - 1] };
        if i > 0 {
            // Y^{i-1} -> Fib^i, y -> (0, y).
            let inc = Matrix::zeros(f, x.dims[i], y_prev).vstack(&Matrix::identity(f, y_prev))?;
            maps.push(inc);
        }
        nodes.push(Node::new(format!("Ext{i}_Cart"), fib.differential(i).kernel_basis(), fib.incoming(i)));
        if i > max_degree {
            break;
        }
        let proj = Matrix::identity(f, x.dims[i]).hstack(&Matrix::zeros(f, x.dims[i], y_prev))?;
        maps.push(proj);
        nodes.push(Node::new(format!("Ext{i}_A(UM,UN)"), x.delta[i].kernel_basis(), x.incoming(i, f)));
        maps.push(fib.comparison[i].clone());
        nodes.push(Node::new(format!("Ext{i}_A(F*UM,UN)"), y.delta[i].kernel_basis(), y.incoming(i, f)));
    }
    let sequence = check_sequence(&nodes, &maps);
    let dims = sequence.dims();
    let ext_cart: Vec<usize> = (0..=max_degree).map(|i| dims[3 * i]).collect();
    let ext_source = (0..=max_degree).map(|i| dims[3 * i + 1]).collect();
    let ext_target = (0..=max_degree).map(|i| dims[3 * i + 2]).collect();
    let hom_cart = crate::cartier::hom_cart(m, n)?.len();
    let yoneda = oracle::yoneda_ext1(m, n).ok();
    Ok(LesReport {
        max_degree,
        degree0_matches_hom: ext_cart[0] == hom_cart,
        ext_cart,
        ext_source,
        ext_target,
        sequence,
        hom_cart,
        yoneda,
    })
}

/// Checks on one algebra of the ingredients of monadicity of `U`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonadicityReport {
    pub algebra: String,
    /// A morphism is invertible in `Cart` iff its matrix is, on every sample.
    pub conservative: bool,
    /// The zero map out of a nonzero module is not an isomorphism.
    pub conservativity_witness: bool,
    /// `forward ∘ backward = id` and `backward ∘ forward = id` on samples.
    pub adjunction_inverse: bool,
    pub triangles: bool,
    /// Enumerated counts `|Cart(L X, M)| = |Hom_A(X, UM)|`, where the oracle admits the instance.
    pub adjunction_counts: Option<bool>,
    pub identity_pair: bool,
    pub presentation_pair: bool,
    pub samples: usize,
}

impl MonadicityReport {
    pub fn passed(&self) -> bool {
        self.conservative
            && self.conservativity_witness
            && self.adjunction_inverse
            && self.triangles
            && self.adjunction_counts.unwrap_or(true)
            && self.identity_pair
            && self.presentation_pair
    }
}

/// The coequalizer of `p1, p2 : X -> Y` computed in `Cart`, compared with
/// the split coequalizer `e : Y -> M` in `Mod_A` with sections `s`, `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitCoequalizer {
    pub split_identities: bool,
    pub coequalizes: bool,
    pub comparison_is_cartier_iso: bool,
    pub preserved_by_forget: bool,
}

impl SplitCoequalizer {
    pub fn passed(&self) -> bool {
        self.split_identities && self.coequalizes && self.comparison_is_cartier_iso && self.preserved_by_forget
    }
}

/// Tests a reflexive pair with a `U`-split coequalizer `e`.
pub fn check_split_coequalizer(
    p1: &CartierMorphism,
    p2: &CartierMorphism,
    e: &CartierMorphism,
    s: &Matrix,
    t: &Matrix,
) -> Result<SplitCoequalizer> {
    let id_y = Matrix::identity(e.source().module().field(), e.source().dim());
    let id_m = Matrix::identity(e.source().module().field(), e.target().dim());
    let split_identities = e.matrix() * s == id_m
        && p1.matrix() * t == id_y
        && p2.matrix() * t == s * e.matrix()
        && AModule::linearity_failure(e.target().module(), e.source().module(), s).is_none()
        && AModule::linearity_failure(e.source().module(), p1.source().module(), t).is_none();
    let coequalizes = e.matrix() * p1.matrix() == e.matrix() * p2.matrix();
    let diff = CartierMorphism::new(p1.source().clone(), p1.target().clone(), p1.matrix() - p2.matrix())?;
    let (q, proj) = diff.cokernel()?;
    // e factors through the cokernel; the induced map must be a Cartier isomorphism.
    let sq = Subquotient::quotient(q.module().field(), p1.target().dim(), diff.matrix())?;
    let induced = e.matrix() * sq.reps();
    let comparison_is_cartier_iso = CartierMorphism::new(q.clone(), e.target().clone(), induced.clone())
        .map(|c| c.inverse().is_some())
        .unwrap_or(false)
        && &induced * proj.matrix() == *e.matrix();
    let (uq, _) = diff.forget().cokernel();
    let preserved_by_forget = uq == q.forget();
    Ok(SplitCoequalizer { split_identities, coequalizes, comparison_is_cartier_iso, preserved_by_forget })
}

/// The identity pair `M ⇉ M -> M`.
pub fn identity_pair(m: &CartierModule) -> Result<SplitCoequalizer> {
    let id = CartierMorphism::identity(m);
    let i = Matrix::identity(m.module().field(), m.dim());
    check_split_coequalizer(&id, &id, &id, &i, &i)
}

/// `Y = ⊕_{k<=cutoff} F^k UM` with the shift structure map and `κ_M` on the
/// top summand, together with `ε : Y -> M` (components `κ_M^k`).
pub fn folded_free_cover(m: &CartierModule, cutoff: usize) -> Result<(CartierModule, CartierMorphism)> {
    let um = m.forget();
    let module = (1..=cutoff).fold(um.clone(), |acc, k| acc.direct_sum(&um.frobenius_twist_power(k)));
    let d = um.dim();
    let f = um.field();
    let mut kappa = Matrix::zeros(f, module.dim(), module.dim());
    for k in 0..cutoff {
        for i in 0..d {
            kappa.set((k + 1) * d + i, k * d + i, 1);
        }
    }
    for r in 0..d {
        for c in 0..d {
            kappa.set(cutoff * d + r, cutoff * d + c, m.kappa().get(r, c));
        }
    }
    let y = CartierModule::new(module, kappa)?;
    let e = counit(m).realize(cutoff);
    let eps = CartierMorphism::new(y.clone(), m.clone(), e)?;
    Ok((y, eps))
}

/// The kernel pair of `ε : Y -> M` from [`folded_free_cover`]; its
/// coequalizer in `Cart` must be `M`, split in `Mod_A` by the degree-0 section.
pub fn presentation_pair(m: &CartierModule, cutoff: usize) -> Result<SplitCoequalizer> {
    let (y, eps) = folded_free_cover(m, cutoff)?;
    let f = m.module().field();
    let (yd, md) = (y.dim(), m.dim());
    let both = y.direct_sum(&y);
    let difference = eps.matrix().hstack(&(-eps.matrix()))?;
    let to_m = CartierMorphism::new(both.clone(), m.clone(), difference)?;
    let (x, inc) = to_m.kernel()?;
    let first = Matrix::identity(f, yd).hstack(&Matrix::zeros(f, yd, yd))?;
    let second = Matrix::zeros(f, yd, yd).hstack(&Matrix::identity(f, yd))?;
    let p1 = CartierMorphism::new(x.clone(), y.clone(), &first * inc.matrix())?;
    let p2 = CartierMorphism::new(x.clone(), y.clone(), &second * inc.matrix())?;
    let s = Matrix::identity(f, yd).select_columns(&(0..md).collect::<Vec<_>>());
    // t(y) = (y, s e y), expressed in the coordinates of the kernel.
    let diag = Matrix::identity(f, yd).vstack(&(&s * eps.matrix()))?;
    let sq = Subquotient::subspace(inc.matrix());
    let t = sq.proj() * &diag;
    check_split_coequalizer(&p1, &p2, &eps, &s, &t)
}

pub fn verify_monadicity_ingredients(
    alg: &Arc<FiniteAlgebra>,
    samples: usize,
    cutoff: usize,
    rng: &mut SampleRng,
) -> Result<MonadicityReport> {
    let mut conservative = true;
    let mut adjunction_inverse = true;
    let mut triangles = true;
    let mut identity_ok = true;
    let mut presentation_ok = true;
    for _ in 0..samples {
        let f = crate::sample::random_cartier_morphism(alg, 4, rng);
        conservative &= f.inverse().is_some() == f.matrix().is_invertible();
        if let Some(inv) = f.inverse() {
            conservative &= inv.compose(&f)? == CartierMorphism::identity(f.source());
        }
        let m = crate::sample::random_cartier(alg, 3, rng);
        let x = random_module(alg, 3, rng);
        let seed = random_module_map(&x, m.module(), rng);
        let h = adjunction_backward(&seed, &m)?;
        adjunction_inverse &= adjunction_forward(&h) == seed;
        let again: FreeToModuleMap = adjunction_backward(&adjunction_forward(&h), &m)?;
        adjunction_inverse &= again == h && h.is_cartier_linear(cutoff);
        triangles &= triangle_module_side(&m, cutoff) && triangle_free_side(&x, cutoff);
        identity_ok &= identity_pair(&m)?.passed();
        presentation_ok &= presentation_pair(&m, cutoff)?.passed();
    }
    let nonzero = loop {
        let m = crate::sample::random_cartier(alg, 3, rng);
        if m.dim() > 0 {
            break m;
        }
    };
    let zero = CartierMorphism::zero(&nonzero, &nonzero);
    let conservativity_witness = !zero.matrix().is_invertible() && zero.inverse().is_none();
    let adjunction_counts = if alg.field().p() == 2 {
        let modules = oracle::small_cartier_modules(alg, 2)?;
        let mut all = true;
        let xs = [AModule::zero(alg), AModule::regular(alg)];
        for m in modules.iter().take(12) {
            for x in xs.iter().filter(|x| x.dim() * m.dim() <= 4) {
                let free = oracle::count_free_maps(x, m, 2)?;
                let plain = oracle::count_a_linear_maps(x, m.module())?;
                all &= free == plain;
            }
        }
        Some(all)
    } else {
        None
    };
    Ok(MonadicityReport {
        algebra: alg.name().to_string(),
        conservative,
        conservativity_witness,
        adjunction_inverse,
        triangles,
        adjunction_counts,
        identity_pair: identity_ok,
        presentation_pair: presentation_ok,
        samples,
    })
}

/// `H_n(F_* C) ≅ F_* H_n(C)` in every degree, with the comparison matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiCommutationReport {
    pub degrees: Vec<i32>,
    pub dims: Vec<usize>,
    pub comparison_invertible: bool,
    pub comparison_linear: bool,
}

impl PiCommutationReport {
    pub fn passed(&self) -> bool {
        self.comparison_invertible && self.comparison_linear
    }
}

pub fn verify_pi_commutation(c: &ModuleComplex) -> Result<PiCommutationReport> {
    let twisted = c.frobenius_twist();
    let mut dims = Vec::new();
    let mut comparison_invertible = true;
    let mut comparison_linear = true;
    let degrees: Vec<i32> = c.degrees().collect();
    for &n in &degrees {
        let left = twisted.homology(n)?;
        let right = c.homology(n)?.frobenius_twist();
        let sq_left = twisted.homology_space(n);
        let sq_right = c.homology_space(n);
        let comparison = sq_left.induced(&Matrix::identity(c.field(), c.dim(n)), &sq_right);
        dims.push(left.dim());
        comparison_invertible &= comparison.is_invertible();
        comparison_linear &= AModuleMap::new(left, right, comparison).is_ok();
    }
    Ok(PiCommutationReport { degrees, dims, comparison_invertible, comparison_linear })
}

/// Degreewise `F^* ⊣ F_*` on complexes, for bijective Frobenius.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjointTransportReport {
    pub algebra: String,
    pub unit_is_chain_map: bool,
    pub counit_is_chain_map: bool,
    pub triangles: bool,
    /// `f` quasi-isomorphism iff `F_* f` is, on every sample.
    pub reflects_quasi_isomorphisms: bool,
    pub quasi_isomorphisms_seen: usize,
    pub samples: usize,
}

impl AdjointTransportReport {
    pub fn passed(&self) -> bool {
        self.unit_is_chain_map && self.counit_is_chain_map && self.triangles && self.reflects_quasi_isomorphisms
    }
}

fn pullback_complex(c: &ModuleComplex) -> Result<ModuleComplex> {
    let inv = c.algebra().frobenius_inverse().ok_or_else(|| {
        crate::error::Error::FrobeniusNotInvertible(c.algebra().name().to_string())
    })?;
    Ok(c.restrict_along(&inv))
}

fn twist_map(f: &ComplexMap<AModule>, lowest: i32, highest: i32) -> Result<ComplexMap<AModule>> {
    let comps = (lowest..=highest).map(|n| f.component(n)).collect();
    ComplexMap::new(f.source().frobenius_twist(), f.target().frobenius_twist(), lowest, comps)
}

pub fn verify_adjoint_transport(
    alg: &Arc<FiniteAlgebra>,
    samples: usize,
    rng: &mut SampleRng,
) -> Result<AdjointTransportReport> {
    let mut unit_ok = true;
    let mut counit_ok = true;
    let mut triangles = true;
    let mut reflects = true;
    let mut quasi = 0;
    for _ in 0..samples {
        let c: ModuleComplex = random_complex(alg, 4, 3, rng);
        let pulled = pullback_complex(&c)?;
        let unit_target = pulled.frobenius_twist();
        let counit_source = pullback_complex(&c.frobenius_twist())?;
        let ids: Vec<Matrix> = c.degrees().map(|n| Matrix::identity(c.field(), c.dim(n))).collect();
        unit_ok &= ComplexMap::new(c.clone(), unit_target, c.lowest(), ids.clone()).is_ok();
        counit_ok &= ComplexMap::new(counit_source, c.clone(), c.lowest(), ids).is_ok();
        for n in c.degrees() {
            let o = c.object(n);
            // ε_{F^*} ∘ F^*(η) = id on F^*C_n and F_*(ε) ∘ η_{F_*} = id on F_*C_n.
            let eta = pullback_unit(&o)?;
            let eps_pulled = pullback_counit(&frobenius_pullback(&o)?)?;
            let left = eps_pulled.matrix() * eta.matrix();
            let eta_tw = pullback_unit(&o.frobenius_twist())?;
            let eps = pullback_counit(&o)?;
            let right = eps.matrix() * eta_tw.matrix();
            let id = Matrix::identity(c.field(), o.dim());
            triangles &= left == id && right == id;
        }
        // f: τ_{>=k} C -> C is a quasi-isomorphism iff C has no homology below k.
        let k = rng.gen_range(c.lowest()..=c.highest() + 1);
        let (_, inc) = c.subcomplex(&c.connective_spaces(k))?;
        let mut maps = vec![inc];
        let d: ModuleComplex = random_complex(alg, 3, 3, rng);
        maps.push(random_chain_map(&c, &d, rng));
        maps.push(ComplexMap::identity(&c));
        for f in maps {
            let lo = f.source().lowest().min(f.target().lowest()) - 1;
            let hi = f.source().highest().max(f.target().highest()) + 1;
            let tw = twist_map(&f, lo, hi)?;
            let q = f.is_quasi_isomorphism();
            quasi += usize::from(q);
            reflects &= q == tw.is_quasi_isomorphism();
        }
    }
    Ok(AdjointTransportReport {
        algebra: alg.name().to_string(),
        unit_is_chain_map: unit_ok,
        counit_is_chain_map: counit_ok,
        triangles,
        reflects_quasi_isomorphisms: reflects,
        quasi_isomorphisms_seen: quasi,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::sample::rng;

    fn residue(alg: &Arc<FiniteAlgebra>) -> CartierModule {
        let top = Subquotient::quotient(alg.field(), alg.dim(), &alg.nilradical()).unwrap();
        let k = AModule::regular(alg).subquotient(&top).unwrap();
        let n = k.dim();
        CartierModule::new(k, Matrix::zeros(alg.field(), n, n)).unwrap()
    }

    #[test]
    fn les_over_f2() {
        let f2 = Arc::new(catalog::f2());
        let k = residue(&f2);
        let r = verify_les(&k, &k, 1).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.sequence.dims()[..6], [1, 1, 1, 1, 0, 0]);
        assert_eq!(r.yoneda, Some(1));
    }

    #[test]
    fn les_into_zero() {
        let alg = Arc::new(catalog::dual_numbers(3));
        let k = residue(&alg);
        let z = CartierModule::zero(&alg);
        let r = verify_les(&k, &z, 4).unwrap();
        assert!(r.passed());
        assert!(r.sequence.dims().iter().all(|&d| d == 0));
    }

    #[test]
    fn les_pinned_dual_numbers() {
        let alg = Arc::new(catalog::dual_numbers(2));
        let k = residue(&alg);
        let r = verify_les(&k, &k, 4).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.ext_cart[1], 2);
        assert_eq!(r.yoneda, Some(2));
    }

    #[test]
    fn monadicity_and_transport() {
        let mut r = rng(3);
        for alg in catalog::all() {
            let alg = Arc::new(alg);
            let rep = verify_monadicity_ingredients(&alg, 5, 4, &mut r).unwrap();
            assert!(rep.passed(), "{rep:?}");
            let c: ModuleComplex = random_complex(&alg, 4, 3, &mut r);
            assert!(verify_pi_commutation(&c).unwrap().passed());
            if alg.frobenius_inverse().is_some() {
                let t = verify_adjoint_transport(&alg, 5, &mut r).unwrap();
                assert!(t.passed(), "{t:?}");
            }
        }
    }
}
