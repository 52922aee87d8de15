//! Seeded random instances: modules, Cartier modules, morphisms, complexes.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{hom_a, AModule, AModuleMap, FiniteAlgebra};
use crate::cartier::{hom_cart, CartierModule, CartierMorphism};
use crate::complexes::{chain_maps, BoundedComplex, ComplexMap, ComplexObject};
use crate::linalg::{Matrix, PrimeField};
use crate::subquotient::Subquotient;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for a labelled sub-check, so checks can run in any order.
pub fn substream(seed: u64, label: &str) -> SampleRng {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

pub fn random_matrix(field: PrimeField, rows: usize, cols: usize, rng: &mut SampleRng) -> Matrix {
    Matrix::from_fn(field, rows, cols, |_, _| rng.gen_range(0..field.p()))
}

pub fn random_invertible(field: PrimeField, n: usize, rng: &mut SampleRng) -> Matrix {
    loop {
        let m = random_matrix(field, n, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

/// A uniformly random element of the span of `basis` (all of one shape).
pub fn random_combination(
    field: PrimeField,
    rows: usize,
    cols: usize,
    basis: &[Matrix],
    rng: &mut SampleRng,
) -> Matrix {
    basis
        .iter()
        .fold(Matrix::zeros(field, rows, cols), |acc, b| &acc + &b.scale(rng.gen_range(0..field.p())))
}

/// Conjugates every action by a random change of basis.
fn rebase(m: &AModule, rng: &mut SampleRng) -> (AModule, Matrix) {
    let p = random_invertible(m.field(), m.dim(), rng);
    let inv = p.inverse().expect("invertible");
    let actions = m.actions().iter().map(|a| &(&p * a) * &inv).collect();
    let module = AModule::new(m.algebra().clone(), m.dim(), actions).expect("conjugate of a module");
    (module, p)
}

/// A quotient of `A^g` with dimension at most `max_dim`.
fn random_quotient_of_free(alg: &Arc<FiniteAlgebra>, max_dim: usize, rng: &mut SampleRng) -> Option<AModule> {
    let d = alg.dim();
    let g = rng.gen_range(1..=max_dim.max(1));
    let free = AModule::free(alg, g);
    let relations = rng.gen_range(0..=g * d);
    let vectors = random_matrix(alg.field(), g * d, relations, rng);
    let sub = free.generated_submodule(&vectors);
    let sq = Subquotient::quotient(alg.field(), g * d, &sub).ok()?;
    (sq.dim() <= max_dim).then(|| free.subquotient(&sq).expect("submodule"))
}

pub fn random_module(alg: &Arc<FiniteAlgebra>, max_dim: usize, rng: &mut SampleRng) -> AModule {
    if max_dim == 0 || rng.gen_ratio(1, 12) {
        return AModule::zero(alg);
    }
    let base = match rng.gen_range(0..6) {
        0 if max_dim >= 2 => {
            let a = random_module(alg, max_dim / 2, rng);
            let b = random_module(alg, max_dim - a.dim(), rng);
            a.direct_sum(&b)
        }
        1 => random_module(alg, max_dim, rng).frobenius_twist(),
        _ => (0..40)
            .find_map(|_| random_quotient_of_free(alg, max_dim, rng))
            .unwrap_or_else(|| AModule::zero(alg)),
    };
    rebase(&base, rng).0
}

pub fn random_module_map(m: &AModule, n: &AModule, rng: &mut SampleRng) -> AModuleMap {
    let basis: Vec<Matrix> = hom_a(m, n).expect("same algebra").into_iter().map(|f| f.matrix().clone()).collect();
    let f = random_combination(m.field(), n.dim(), m.dim(), &basis, rng);
    AModuleMap::new(m.clone(), n.clone(), f).expect("combination of linear maps")
}

pub fn random_cartier(alg: &Arc<FiniteAlgebra>, max_dim: usize, rng: &mut SampleRng) -> CartierModule {
    let m = random_module(alg, max_dim, rng);
    let kappa = if rng.gen_ratio(1, 6) {
        Matrix::zeros(alg.field(), m.dim(), m.dim())
    } else {
        random_module_map(&m.frobenius_twist(), &m, rng).matrix().clone()
    };
    CartierModule::new(m, kappa).expect("A-linear map F_*M -> M")
}

pub fn random_cartier_map(m: &CartierModule, n: &CartierModule, rng: &mut SampleRng) -> CartierMorphism {
    let basis: Vec<Matrix> = hom_cart(m, n).expect("same algebra").into_iter().map(|f| f.matrix().clone()).collect();
    let f = random_combination(m.module().field(), n.dim(), m.dim(), &basis, rng);
    CartierMorphism::new(m.clone(), n.clone(), f).expect("combination of Cartier maps")
}

/// A random morphism whose source and target have dimension at most `max_dim`.
pub fn random_cartier_morphism(alg: &Arc<FiniteAlgebra>, max_dim: usize, rng: &mut SampleRng) -> CartierMorphism {
    match rng.gen_range(0..3) {
        0 => {
            let m = random_cartier(alg, max_dim, rng);
            let n = random_cartier(alg, max_dim, rng);
            random_cartier_map(&m, &n, rng)
        }
        1 => {
            let m = random_cartier(alg, max_dim, rng);
            random_cartier_map(&m, &m, rng)
        }
        _ => {
            // m ⊕ n -> n, (x, y) -> h x + g y: surjective-ish with a kernel.
            let m = random_cartier(alg, max_dim / 2, rng);
            let n = random_cartier(alg, max_dim - max_dim / 2, rng);
            let h = random_cartier_map(&m, &n, rng);
            let g = random_cartier_map(&n, &n, rng);
            let sum = m.direct_sum(&n);
            let f = h.matrix().hstack(g.matrix()).expect("same rows");
            CartierMorphism::new(sum, n, f).expect("sum of Cartier maps")
        }
    }
}

/// Objects with a random generator.
pub trait Sampleable: ComplexObject {
    fn sample(alg: &Arc<FiniteAlgebra>, max_dim: usize, rng: &mut SampleRng) -> Self;
}

impl Sampleable for AModule {
    fn sample(alg: &Arc<FiniteAlgebra>, max_dim: usize, rng: &mut SampleRng) -> Self {
        random_module(alg, max_dim, rng)
    }
}

impl Sampleable for CartierModule {
    fn sample(alg: &Arc<FiniteAlgebra>, max_dim: usize, rng: &mut SampleRng) -> Self {
        random_cartier(alg, max_dim, rng)
    }
}

/// A random complex with at most `max_len` stored degrees, each of dimension at most `max_dim`.
///
/// Built from the top degree down. Each differential vanishes on the image of
/// the one above because it factors through the cokernel; half the time the
/// cokernel itself is split off into the lower object, so the differential is
/// rarely zero.
pub fn random_complex<O: Sampleable>(
    alg: &Arc<FiniteAlgebra>,
    max_len: usize,
    max_dim: usize,
    rng: &mut SampleRng,
) -> BoundedComplex<O> {
    let f = alg.field();
    let len = rng.gen_range(1..=max_len.max(1));
    let lowest = rng.gen_range(-1..=1);
    let mut objects = vec![O::sample(alg, max_dim, rng)];
    let mut differentials: Vec<Matrix> = Vec::new();
    for _ in 1..len {
        let top = objects.last().expect("nonempty").clone();
        let above = differentials.last().cloned().unwrap_or_else(|| Matrix::zeros(f, top.dim(), 0));
        let sq = Subquotient::quotient(f, top.dim(), &above).expect("image is a subspace");
        let coker = top.restrict(&sq).expect("cokernel of a morphism");
        let split = coker.dim() <= max_dim && rng.gen_bool(0.5);
        let rest = O::sample(alg, if split { max_dim - coker.dim() } else { max_dim }, rng);
        let basis = O::morphism_basis(&coker, &rest).expect("same algebra");
        let g = &random_combination(f, rest.dim(), coker.dim(), &basis, rng) * sq.proj();
        let (below, d) = if split {
            (rest.sum(&coker), g.vstack(sq.proj()).expect("same columns"))
        } else {
            (rest, g)
        };
        objects.push(below);
        differentials.push(d);
    }
    objects.reverse();
    differentials.reverse();
    BoundedComplex::new(alg, lowest, objects, differentials).expect("differentials square to zero")
}

/// A random chain map `c -> d`.
pub fn random_chain_map<O: ComplexObject>(
    c: &BoundedComplex<O>,
    d: &BoundedComplex<O>,
    rng: &mut SampleRng,
) -> ComplexMap<O> {
    let basis = chain_maps(c, d).expect("same algebra");
    if basis.is_empty() {
        return ComplexMap::zero(c, d);
    }
    let lo = c.lowest().max(d.lowest());
    let hi = c.highest().min(d.highest());
    let comps = (lo..=hi)
        .map(|n| {
            let parts: Vec<Matrix> = basis.iter().map(|b| b.component(n)).collect();
            (n, parts)
        })
        .collect::<Vec<_>>();
    let coeffs: Vec<u8> = basis.iter().map(|_| rng.gen_range(0..c.field().p())).collect();
    let components = comps
        .into_iter()
        .map(|(n, parts)| {
            parts.iter().zip(&coeffs).fold(Matrix::zeros(c.field(), d.dim(n), c.dim(n)), |acc, (m, &k)| &acc + &m.scale(k))
        })
        .collect();
    ComplexMap::new(c.clone(), d.clone(), lo, components).expect("combination of chain maps")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn samples_respect_bounds_and_are_reproducible() {
        for alg in catalog::all() {
            let alg = Arc::new(alg);
            let mut r1 = rng(7);
            let mut r2 = rng(7);
            for _ in 0..20 {
                let a = random_cartier(&alg, 4, &mut r1);
                let b = random_cartier(&alg, 4, &mut r2);
                assert!(a.dim() <= 4);
                assert_eq!(a, b);
                let c: BoundedComplex<CartierModule> = random_complex(&alg, 4, 3, &mut r1);
                assert!(c.len() <= 4 && c.objects().iter().all(|o| o.dim() <= 3));
                let _: BoundedComplex<CartierModule> = random_complex(&alg, 4, 3, &mut r2);
            }
        }
    }

    #[test]
    fn complexes_have_nonzero_differentials_sometimes() {
        let alg = Arc::new(catalog::dual_numbers(2));
        let mut r = rng(1);
        let nonzero = (0..50)
            .filter(|_| {
                let c: BoundedComplex<AModule> = random_complex(&alg, 4, 3, &mut r);
                c.degrees().any(|n| !c.differential(n).is_zero())
            })
            .count();
        assert!(nonzero > 10, "{nonzero}");
    }
}
