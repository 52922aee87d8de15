//! Perverse truncations over finite-dimensional algebras.
//!
//! The spectrum of a finite algebra is the set of its blocks, so a perversity
//! is one integer per primitive idempotent. Blocks are central, every
//! differential respects them, and a perverse truncation is the standard one
//! applied blockwise with the cutoff moved by the block's value. Duality is
//! Matlis duality `Hom_{F_p}(-, F_p)`, realized by transposition.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{AModule, AModuleMap, FiniteAlgebra};
use crate::complexes::{
    truncation_triple, truncation_triple_from, BoundedComplex, CartierComplex, ComplexObject, ModuleComplex,
    TruncationTriple,
};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::sample::{random_complex, rng};

/// The blocks of an algebra.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub idempotents: Vec<Vec<u8>>,
    pub blocks: Vec<FiniteAlgebra>,
}

impl BlockDecomposition {
    pub fn len(&self) -> usize {
        self.idempotents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idempotents.is_empty()
    }
}

pub fn block_decomposition(alg: &FiniteAlgebra) -> Result<BlockDecomposition> {
    let idempotents = alg.primitive_idempotents();
    let blocks = idempotents
        .iter()
        .enumerate()
        .map(|(j, e)| block_algebra(alg, e, j))
        .collect::<Result<_>>()?;
    Ok(BlockDecomposition { idempotents, blocks })
}

/// `eA` with unit `e`, in the canonical basis of the subspace `eA`.
fn block_algebra(alg: &FiniteAlgebra, e: &[u8], j: usize) -> Result<FiniteAlgebra> {
    let f = alg.field();
    let basis = alg.left_multiplication(e).canonical_column_basis();
    let b = basis.cols();
    let coords = |v: &[u8]| -> Result<Vec<u8>> {
        let x = basis
            .solve(&Matrix::column_vector(f, v))?
            .ok_or_else(|| Error::InvalidAlgebra("block is not closed under multiplication".into()))?;
        Ok(x.column(0))
    };
    let mut constants = vec![vec![vec![0i64; b]; b]; b];
    for (u, row) in constants.iter_mut().enumerate() {
        for (v, entry) in row.iter_mut().enumerate() {
            let w = alg.multiply(&basis.column(u), &basis.column(v));
            *entry = coords(&w)?.into_iter().map(i64::from).collect();
        }
    }
    let unit: Vec<i64> = coords(e)?.into_iter().map(i64::from).collect();
    let labels = (0..b).map(|i| format!("b{i}")).collect();
    FiniteAlgebra::new(format!("{}[e{j}]", alg.name()), f, labels, &constants, &unit)
}

/// `Hom_{F_p}(M, F_p)` with `(a f)(m) = f(a m)`.
pub fn matlis_dual(m: &AModule) -> AModule {
    let actions = m.actions().iter().map(Matrix::transpose).collect();
    AModule::new(m.algebra().clone(), m.dim(), actions).expect("transposes of commuting actions")
}

/// `D(f) : D(N) -> D(M)`.
pub fn matlis_dual_map(f: &AModuleMap) -> AModuleMap {
    AModuleMap::new(matlis_dual(f.target()), matlis_dual(f.source()), f.matrix().transpose())
        .expect("transpose of a linear map")
}

/// `M -> DDM`, evaluation; the identity in dual-basis coordinates.
pub fn double_dual_comparison(m: &AModule) -> Result<AModuleMap> {
    AModuleMap::new(m.clone(), matlis_dual(&matlis_dual(m)), Matrix::identity(m.field(), m.dim()))
}

/// `D(C)_n = D(C_{-n})` with differential `d_{1-n}^T`.
pub fn dual_complex(c: &ModuleComplex) -> Result<ModuleComplex> {
    if c.is_empty() {
        return Ok(c.clone());
    }
    let lo = -c.highest();
    let hi = -c.lowest();
    let objects = (lo..=hi).map(|n| matlis_dual(&c.object(-n))).collect();
    let differentials = (lo + 1..=hi).map(|n| c.differential(1 - n).transpose()).collect();
    BoundedComplex::new(c.algebra(), lo, objects, differentials)
}

/// One integer per block, in the order of [`FiniteAlgebra::primitive_idempotents`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Perversity {
    pub values: Vec<i32>,
}

impl Perversity {
    pub fn new(alg: &FiniteAlgebra, values: Vec<i32>) -> Result<Self> {
        let blocks = alg.primitive_idempotents().len();
        if values.len() != blocks {
            return Err(Error::PerversityRejected(format!("{} values for {blocks} blocks", values.len())));
        }
        Ok(Self { values })
    }

    pub fn zero(alg: &FiniteAlgebra) -> Self {
        Self { values: vec![0; alg.primitive_idempotents().len()] }
    }

    /// The perversity whose coconnective part is dual to this one's connective part.
    pub fn dual(&self) -> Self {
        Self { values: self.values.iter().map(|v| -v).collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// Connective part, `τ^p_{>=n}`.
    Geq,
    /// Coconnective part, `τ^p_{<=n}`.
    Leq,
}

/// Subspaces cutting out `τ^p_{>=n}` (for `Geq`) or killed by `τ^p_{<=n}` (for `Leq`):
/// the standard choice at `n - p_j` on block `j`, summed over blocks.
pub fn blockwise_spaces<O: ComplexObject>(c: &BoundedComplex<O>, pv: &Perversity, side: Side, n: i32) -> Vec<Matrix> {
    let f = c.field();
    let idempotents = c.algebra().primitive_idempotents();
    let per_block: Vec<Vec<Matrix>> = idempotents
        .iter()
        .zip(&pv.values)
        .map(|(_, v)| match side {
            Side::Geq => c.connective_spaces(n - v),
            Side::Leq => c.coconnective_kernel_spaces(n - v),
        })
        .collect();
    c.degrees()
        .enumerate()
        .map(|(k, deg)| {
            let o = c.object(deg);
            let parts: Vec<Matrix> = idempotents
                .iter()
                .zip(&per_block)
                .map(|(e, spaces)| &o.underlying().act(e) * &spaces[k])
                .collect();
            Matrix::hstack_all(f, o.dim(), &parts).expect("same rows").canonical_column_basis()
        })
        .collect()
}

fn check_perversity(c_alg: &Arc<FiniteAlgebra>, pv: &Perversity) -> Result<()> {
    Perversity::new(c_alg, pv.values.clone()).map(|_| ())
}

fn truncate_blockwise<O: ComplexObject>(
    c: &BoundedComplex<O>,
    pv: &Perversity,
    side: Side,
    n: i32,
) -> Result<BoundedComplex<O>> {
    check_perversity(c.algebra(), pv)?;
    if c.is_empty() {
        return Ok(c.clone());
    }
    let spaces = blockwise_spaces(c, pv, side, n);
    Ok(match side {
        Side::Geq => c.subcomplex(&spaces)?.0.trimmed(),
        Side::Leq => c.quotient(&spaces)?.0.trimmed(),
    })
}

/// `τ^p_{>=n}` or `τ^p_{<=n}`: on block `j` the standard truncation at `n - p_j`.
pub fn perverse_truncate(c: &ModuleComplex, pv: &Perversity, side: Side, n: i32) -> Result<ModuleComplex> {
    truncate_blockwise(c, pv, side, n)
}

/// The duality-conjugated form: `τ^p_{<=n} = D τ^{-p}_{>=-n} D`, and dually.
pub fn perverse_truncate_via_duality(c: &ModuleComplex, pv: &Perversity, side: Side, n: i32) -> Result<ModuleComplex> {
    let other = match side {
        Side::Geq => Side::Leq,
        Side::Leq => Side::Geq,
    };
    let inner = perverse_truncate(&dual_complex(c)?, &pv.dual(), other, -n)?;
    dual_complex(&inner)
}

/// `dim H_n(e_j C)` for every block and stored degree.
pub fn block_homology(c: &ModuleComplex) -> Vec<Vec<(i32, usize)>> {
    c.algebra()
        .primitive_idempotents()
        .iter()
        .map(|e| {
            c.degrees()
                .map(|n| {
                    let part = |k: i32| c.object(k).act(e);
                    let cycles = &part(n) * &c.cycles(n);
                    let boundaries = &part(n) * &c.boundaries(n);
                    (n, cycles.rank() - boundaries.rank())
                })
                .filter(|&(_, d)| d > 0)
                .collect()
        })
        .collect()
}

/// Whether block `j` has homology only in degrees `>= -p_j` (connective) or `<= -p_j`.
pub fn is_perverse(c: &ModuleComplex, pv: &Perversity, side: Side) -> bool {
    block_homology(c).iter().zip(&pv.values).all(|(hs, &v)| {
        hs.iter().all(|&(n, _)| match side {
            Side::Geq => n >= -v,
            Side::Leq => n <= -v,
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TExactnessReport {
    pub perversity: Vec<i32>,
    pub samples: usize,
    pub connective_preserved: bool,
    pub coconnective_preserved: bool,
    pub commutes_with_truncation: bool,
    pub duality_commutes: bool,
    pub blocks_fixed: bool,
}

impl TExactnessReport {
    pub fn passed(&self) -> bool {
        self.connective_preserved
            && self.coconnective_preserved
            && self.commutes_with_truncation
            && self.duality_commutes
            && self.blocks_fixed
    }
}

/// Checks that `F_*` preserves both halves of the perverse t-structure on the samples.
pub fn check_fstar_perverse_texact(alg: &Arc<FiniteAlgebra>, pv: &Perversity, samples: &[ModuleComplex]) -> Result<TExactnessReport> {
    check_perversity(alg, pv)?;
    let phi = alg.frobenius();
    let blocks_fixed = alg.primitive_idempotents().iter().all(|e| phi.apply(e) == *e);
    let mut connective_preserved = true;
    let mut coconnective_preserved = true;
    let mut commutes_with_truncation = true;
    let mut duality_commutes = true;
    for c in samples {
        let tw = c.frobenius_twist();
        for side in [Side::Geq, Side::Leq] {
            let t = perverse_truncate(c, pv, side, 0)?;
            let twisted_part = t.frobenius_twist();
            let ok = is_perverse(&twisted_part, pv, side);
            match side {
                Side::Geq => connective_preserved &= ok,
                Side::Leq => coconnective_preserved &= ok,
            }
            commutes_with_truncation &= perverse_truncate(&tw, pv, side, 0)? == twisted_part;
        }
        for o in c.objects() {
            let a = matlis_dual(&o.frobenius_twist());
            let b = matlis_dual(o).frobenius_twist();
            duality_commutes &= a == b;
        }
        duality_commutes &= block_homology(&dual_complex(&tw)?) == block_homology(&dual_complex(c)?.frobenius_twist());
    }
    Ok(TExactnessReport {
        perversity: pv.values.clone(),
        samples: samples.len(),
        connective_preserved,
        coconnective_preserved,
        commutes_with_truncation,
        duality_commutes,
        blocks_fixed,
    })
}

/// Fixed complexes the Cartier truncation's precondition is checked on.
pub fn precondition_samples(alg: &Arc<FiniteAlgebra>) -> Vec<ModuleComplex> {
    let mut r = rng(0x5eed);
    (0..8).map(|_| random_complex(alg, 4, 3, &mut r)).collect()
}

/// The perverse truncation of a Cartier complex: the underlying truncation,
/// with `κ` restricted or descended. Rejects `pv` unless `F_*` is perverse t-exact.
pub fn perverse_truncate_cartier(c: &CartierComplex, pv: &Perversity, side: Side, n: i32) -> Result<CartierComplex> {
    let mut samples = precondition_samples(c.algebra());
    samples.push(c.forget());
    let report = check_fstar_perverse_texact(c.algebra(), pv, &samples)?;
    if !report.passed() {
        return Err(Error::PerversityRejected(format!("F_* is not perverse t-exact for {:?}", pv.values)));
    }
    truncate_blockwise(c, pv, side, n)
}

/// The perversities instances ship with: zero, the constants `1` and `-1`, and
/// on algebras with several blocks the two staircases `(0, 1, ...)` and `(1, 0, ...)`.
pub fn shipped_perversities(alg: &FiniteAlgebra) -> Vec<Perversity> {
    let b = alg.primitive_idempotents().len();
    let mut out = vec![Perversity::zero(alg), Perversity { values: vec![1; b] }, Perversity { values: vec![-1; b] }];
    if b > 1 {
        out.push(Perversity { values: (0..b as i32).collect() });
        out.push(Perversity { values: (0..b as i32).rev().collect() });
    }
    out
}

/// The fiber triple `τ^p_{>=n} C -> C -> τ^p_{<=n-1} C`, with the homology
/// condition read blockwise.
pub fn perverse_truncation_triple(c: &ModuleComplex, pv: &Perversity, n: i32) -> Result<TruncationTriple> {
    check_perversity(c.algebra(), pv)?;
    if c.is_empty() {
        return truncation_triple(c, n);
    }
    let connective = blockwise_spaces(c, pv, Side::Geq, n);
    let coconnective = blockwise_spaces(c, pv, Side::Leq, n - 1);
    let mut triple = truncation_triple_from(c, n, &connective, &coconnective)?;
    let upper = perverse_truncate(c, pv, Side::Geq, n)?;
    let lower = perverse_truncate(c, pv, Side::Leq, n - 1)?;
    let sums = block_homology(c).iter().zip(block_homology(&upper)).zip(block_homology(&lower)).all(|((h, u), l)| {
        let total = |v: &[(i32, usize)]| v.iter().map(|&(_, d)| d).sum::<usize>();
        total(h) == total(&u) + total(&l)
    });
    triple.homology_split = sums
        && is_perverse(&upper.shift(-n), pv, Side::Geq)
        && is_perverse(&lower.shift(1 - n), pv, Side::Leq);
    Ok(triple)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::sample::random_complex;

    #[test]
    fn blocks_of_catalog() {
        let counts: Vec<usize> = catalog::all().iter().map(|a| block_decomposition(a).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 1, 1, 1, 2, 2]);
        let b = block_decomposition(&catalog::f2_times_f2()).unwrap();
        let mut ids = b.idempotents.clone();
        ids.sort();
        assert_eq!(ids, vec![vec![0, 1], vec![1, 0]]);
        for alg in catalog::all() {
            for block in block_decomposition(&alg).unwrap().blocks {
                assert_eq!(block.primitive_idempotents().len(), 1);
            }
        }
    }

    #[test]
    fn dual_of_dual_numbers() {
        let alg = Arc::new(catalog::dual_numbers(2));
        let a = AModule::regular(&alg);
        let d = matlis_dual(&a);
        assert_eq!(d.dim(), 2);
        // Socle of A is span(x) = e_1; socle of DA is span(e_0*): x^T kills e_0.
        let x = &a.actions()[1];
        assert_eq!(x.kernel_basis().column(0), vec![0, 1]);
        assert_eq!(d.actions()[1].kernel_basis().column(0), vec![1, 0]);
        assert!(double_dual_comparison(&a).unwrap().is_isomorphism());
        assert!(matlis_dual(&AModule::zero(&alg)).is_zero());
    }

    #[test]
    fn zero_perversity_is_standard() {
        let mut r = rng(11);
        for alg in catalog::all() {
            let alg = Arc::new(alg);
            let pv = Perversity::zero(&alg);
            for _ in 0..10 {
                let c: ModuleComplex = random_complex(&alg, 4, 3, &mut r);
                for n in -2..=3 {
                    assert_eq!(perverse_truncate(&c, &pv, Side::Geq, n).unwrap(), c.truncate_geq(n).unwrap());
                    assert_eq!(perverse_truncate(&c, &pv, Side::Leq, n).unwrap(), c.truncate_leq(n).unwrap());
                }
            }
        }
    }

    #[test]
    fn shifted_single_block() {
        let alg = Arc::new(catalog::dual_numbers(3));
        let mut r = rng(2);
        let c: ModuleComplex = random_complex(&alg, 4, 3, &mut r);
        let pv = Perversity::new(&alg, vec![2]).unwrap();
        assert_eq!(perverse_truncate(&c, &pv, Side::Geq, 1).unwrap(), c.truncate_geq(-1).unwrap());
    }

    #[test]
    fn mixed_perversity_on_product() {
        let alg = Arc::new(catalog::f2_times_f2());
        let e = alg.primitive_idempotents();
        let pv = Perversity::new(&alg, vec![0, 1]).unwrap();
        // A in degrees 0 and -1, zero differential: each block has homology in both.
        let a = AModule::regular(&alg);
        let c = BoundedComplex::new(&alg, -1, vec![a.clone(), a.clone()], vec![Matrix::zeros(alg.field(), 2, 2)]).unwrap();
        let t = perverse_truncate(&c, &pv, Side::Geq, 0).unwrap();
        let h = block_homology(&t);
        assert_eq!(e.len(), 2);
        assert_eq!(h[0], vec![(0, 1)]);
        assert_eq!(h[1], vec![(-1, 1), (0, 1)]);
    }

    #[test]
    fn duality_conjugate_has_same_homology() {
        let mut r = rng(5);
        for alg in catalog::all() {
            let alg = Arc::new(alg);
            let blocks = alg.primitive_idempotents().len();
            let pv = Perversity::new(&alg, (0..blocks as i32).collect()).unwrap();
            for _ in 0..5 {
                let c: ModuleComplex = random_complex(&alg, 4, 3, &mut r);
                for side in [Side::Geq, Side::Leq] {
                    let a = perverse_truncate(&c, &pv, side, 0).unwrap();
                    let b = perverse_truncate_via_duality(&c, &pv, side, 0).unwrap();
                    assert_eq!(block_homology(&a), block_homology(&b));
                }
            }
        }
    }

    #[test]
    fn fstar_texact_on_catalog() {
        for alg in catalog::all() {
            let alg = Arc::new(alg);
            let samples = precondition_samples(&alg);
            let blocks = alg.primitive_idempotents().len();
            for pv in [vec![0; blocks], vec![1; blocks], (0..blocks as i32).collect()] {
                let pv = Perversity::new(&alg, pv).unwrap();
                assert!(check_fstar_perverse_texact(&alg, &pv, &samples).unwrap().passed());
            }
        }
    }

    #[test]
    fn wrong_length_is_rejected() {
        let alg = catalog::f2_times_f2();
        assert!(matches!(Perversity::new(&alg, vec![0]), Err(Error::PerversityRejected(_))));
    }
}
