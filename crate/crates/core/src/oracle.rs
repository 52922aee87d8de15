//! Exhaustive-enumeration oracles, independent of kernels and resolutions.
//!
//! Everything here walks through every matrix of a given shape, so it is
//! only usable on tiny instances; each entry point enforces a size guard.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::algebra::{AModule, FiniteAlgebra};
use crate::cartier::CartierModule;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, PrimeField};

/// Largest number of candidates any oracle will enumerate.
pub const MAX_CANDIDATES: u64 = 1 << 16;

fn candidate_count(field: PrimeField, entries: usize) -> Result<u64> {
    let p = field.p() as u64;
    let mut total: u64 = 1;
    for _ in 0..entries {
        total = total.saturating_mul(p);
        if total > MAX_CANDIDATES {
            return Err(Error::Guard(format!("{entries} free entries over F_{p} is too many to enumerate")));
        }
    }
    Ok(total)
}

/// Every vector of `F_p^len`, in lexicographic order.
fn all_vectors(field: PrimeField, len: usize) -> Result<impl Iterator<Item = Vec<u8>>> {
    let total = candidate_count(field, len)?;
    let p = field.p() as u64;
    Ok((0..total).map(move |mut code| {
        let mut v = vec![0u8; len];
        for x in v.iter_mut() {
            *x = (code % p) as u8;
            code /= p;
        }
        v
    }))
}

/// Every `rows x cols` matrix.
pub fn all_matrices(field: PrimeField, rows: usize, cols: usize) -> Result<impl Iterator<Item = Matrix>> {
    Ok(all_vectors(field, rows * cols)?.map(move |v| Matrix::from_vec(field, rows, cols, v).expect("shape")))
}

fn log_p(field: PrimeField, count: u64) -> usize {
    let p = field.p() as u64;
    let mut k = 0;
    let mut c = count;
    while c > 1 {
        assert_eq!(c % p, 0, "subgroup order must be a power of p");
        c /= p;
        k += 1;
    }
    k
}

fn is_a_linear(source: &AModule, target: &AModule, f: &Matrix) -> bool {
    source.actions().iter().zip(target.actions()).all(|(s, t)| t * f == f * s)
}

/// Number of matrices `f` with `f` A-linear and `κ_n f = f κ_m`.
pub fn count_cartier_maps(m: &CartierModule, n: &CartierModule) -> Result<u64> {
    let field = m.module().field();
    let mut count = 0;
    for f in all_matrices(field, n.dim(), m.dim())? {
        if is_a_linear(m.module(), n.module(), &f) && n.kappa() * &f == &f * m.kappa() {
            count += 1;
        }
    }
    Ok(count)
}

/// `dim Hom_Cart(m, n)` by counting every intertwining matrix.
pub fn hom_cart_dimension(m: &CartierModule, n: &CartierModule) -> Result<usize> {
    Ok(log_p(m.module().field(), count_cartier_maps(m, n)?))
}

/// Number of A-linear matrices `x -> n`.
pub fn count_a_linear_maps(x: &AModule, n: &AModule) -> Result<u64> {
    let mut count = 0;
    for f in all_matrices(x.field(), n.dim(), x.dim())? {
        if is_a_linear(x, n, &f) {
            count += 1;
        }
    }
    Ok(count)
}

/// Number of families `(h_0, ..., h_cutoff)`, `h_k : F^k X -> UM` A-linear,
/// with `h_{k+1} = κ h_k`: Cartier maps `L(X) -> M` seen through degree `cutoff`.
pub fn count_free_maps(x: &AModule, m: &CartierModule, cutoff: usize) -> Result<u64> {
    let field = x.field();
    let (rows, cols) = (m.dim(), x.dim());
    let per = rows * cols;
    candidate_count(field, per * (cutoff + 1))?;
    let twists: Vec<AModule> = (0..=cutoff).map(|k| x.frobenius_twist_power(k)).collect();
    let mut count = 0;
    for v in all_vectors(field, per * (cutoff + 1))? {
        let hs: Vec<Matrix> = (0..=cutoff)
            .map(|k| Matrix::from_vec(field, rows, cols, v[k * per..(k + 1) * per].to_vec()).expect("shape"))
            .collect();
        let linear = hs.iter().zip(&twists).all(|(h, tw)| is_a_linear(tw, m.module(), h));
        let chained = hs.windows(2).all(|w| w[1] == m.kappa() * &w[0]);
        if linear && chained {
            count += 1;
        }
    }
    Ok(count)
}

/// `dim Ext^1_Cart(m, n)` by enumerating extensions `0 -> n -> E -> m -> 0`.
///
/// `E = n ⊕ m` with block upper-triangular actions `[[ρ_n, c_i], [0, ρ_m]]`
/// and structure map `[[κ_n, k], [0, κ_m]]`. Valid `(c, k)` are counted, then
/// divided by the number of data equivalent to the split extension under
/// `[[1, h], [0, 1]]`. Only `F_2` and `dim m + dim n <= 3` are admitted.
pub fn yoneda_ext1(m: &CartierModule, n: &CartierModule) -> Result<usize> {
    let alg = m.algebra().clone();
    let field = alg.field();
    if field.p() != 2 || m.dim() + n.dim() > 3 {
        return Err(Error::Guard(format!(
            "Yoneda enumeration needs F_2 and total dimension <= 3, got F_{} and {}",
            field.p(),
            m.dim() + n.dim()
        )));
    }
    m.module().same_algebra(n.module())?;
    let (nd, md) = (n.dim(), m.dim());
    let block = nd * md;
    let d = alg.dim();
    let mut valid = 0u64;
    for v in all_vectors(field, block * (d + 1))? {
        let piece = |t: usize| Matrix::from_vec(field, nd, md, v[t * block..(t + 1) * block].to_vec()).expect("shape");
        let cs: Vec<Matrix> = (0..d).map(piece).collect();
        if extension(&alg, m, n, &cs, &piece(d)).is_some() {
            valid += 1;
        }
    }
    let mut split_orbit: BTreeSet<Vec<u8>> = BTreeSet::new();
    for h in all_matrices(field, nd, md)? {
        let mut key = Vec::with_capacity(block * (d + 1));
        for (rn, rm) in n.module().actions().iter().zip(m.module().actions()) {
            key.extend((&(&h * rm) - &(rn * &h)).entries());
        }
        key.extend((&(&h * m.kappa()) - &(n.kappa() * &h)).entries());
        split_orbit.insert(key);
    }
    let orbit = split_orbit.len() as u64;
    if !valid.is_multiple_of(orbit) {
        return Err(Error::InvalidModule("extension data do not form a group".into()));
    }
    Ok(log_p(field, valid / orbit))
}

fn extension(
    alg: &Arc<FiniteAlgebra>,
    m: &CartierModule,
    n: &CartierModule,
    cs: &[Matrix],
    k: &Matrix,
) -> Option<CartierModule> {
    let field = alg.field();
    let (nd, md) = (n.dim(), m.dim());
    let glue = |top_left: &Matrix, top_right: &Matrix, bottom_right: &Matrix| {
        let top = top_left.hstack(top_right).expect("rows");
        let bottom = Matrix::zeros(field, md, nd).hstack(bottom_right).expect("rows");
        top.vstack(&bottom).expect("cols")
    };
    let actions: Vec<Matrix> = (0..alg.dim())
        .map(|i| glue(&n.module().actions()[i], &cs[i], &m.module().actions()[i]))
        .collect();
    let module = AModule::new(alg.clone(), nd + md, actions).ok()?;
    CartierModule::new(module, glue(n.kappa(), k, m.kappa())).ok()
}

/// Representatives of every isomorphism class of Cartier modules of
/// dimension `dim` over an algebra over `F_2`.
pub fn cartier_modules_of_dim(alg: &Arc<FiniteAlgebra>, dim: usize) -> Result<Vec<CartierModule>> {
    let field = alg.field();
    if field.p() != 2 || dim > 2 {
        return Err(Error::Guard(format!("module enumeration needs F_2 and dimension <= 2, got F_{} and {dim}", field.p())));
    }
    if dim == 0 {
        return Ok(vec![CartierModule::zero(alg)]);
    }
    let square: Vec<Matrix> = all_matrices(field, dim, dim)?.collect();
    let invertible: Vec<(Matrix, Matrix)> = square
        .iter()
        .filter_map(|g| g.inverse().map(|inv| (g.clone(), inv)))
        .collect();
    let mut structures: Vec<Vec<Matrix>> = Vec::new();
    let mut partial = Vec::with_capacity(alg.dim());
    module_structures(alg, &square, &mut partial, &mut structures);
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut out = Vec::new();
    for actions in structures {
        let module = AModule::new(alg.clone(), dim, actions).expect("checked during search");
        for kappa in &square {
            let Ok(c) = CartierModule::new(module.clone(), kappa.clone()) else {
                continue;
            };
            let canonical = invertible
                .iter()
                .map(|(g, inv)| {
                    let mut key: Vec<u8> = Vec::new();
                    for a in c.module().actions() {
                        key.extend((&(g * a) * inv).entries());
                    }
                    key.extend((&(g * c.kappa()) * inv).entries());
                    key
                })
                .min()
                .expect("GL_n is nonempty");
            if seen.insert(canonical) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Depth-first search over action matrices, pruning on every structure
/// constant relation whose indices are all assigned.
fn module_structures(alg: &FiniteAlgebra, square: &[Matrix], partial: &mut Vec<Matrix>, out: &mut Vec<Vec<Matrix>>) {
    let d = alg.dim();
    let t = partial.len();
    if t == d {
        let unit = alg
            .unit()
            .iter()
            .zip(partial.iter())
            .fold(Matrix::zeros(alg.field(), square[0].rows(), square[0].rows()), |acc, (&u, a)| &acc + &a.scale(u));
        if unit == Matrix::identity(alg.field(), square[0].rows()) {
            out.push(partial.clone());
        }
        return;
    }
    for candidate in square {
        partial.push(candidate.clone());
        let pairs = (0..=t).flat_map(|i| (0..=t).map(move |j| (i, j)));
        let consistent = pairs.clone().all(|(i, j)| {
            let support_assigned = (0..d).all(|k| alg.constant(i, j, k) == 0 || k <= t);
            if !support_assigned {
                return true;
            }
            let lhs = &partial[i] * &partial[j];
            let rhs = (0..=t).fold(Matrix::zeros(alg.field(), lhs.rows(), lhs.cols()), |acc, k| {
                &acc + &partial[k].scale(alg.constant(i, j, k))
            });
            lhs == rhs
        });
        if consistent {
            module_structures(alg, square, partial, out);
        }
        partial.pop();
    }
}

/// All isomorphism classes of dimension `<= max_dim`.
pub fn small_cartier_modules(alg: &Arc<FiniteAlgebra>, max_dim: usize) -> Result<Vec<CartierModule>> {
    let mut out = Vec::new();
    for dim in 0..=max_dim {
        out.extend(cartier_modules_of_dim(alg, dim)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartier::hom_cart;
    use crate::catalog;
    use crate::subquotient::Subquotient;

    fn residue(alg: &Arc<FiniteAlgebra>) -> CartierModule {
        let top = Subquotient::quotient(alg.field(), alg.dim(), &alg.nilradical()).unwrap();
        let k = AModule::regular(alg).subquotient(&top).unwrap();
        let n = k.dim();
        CartierModule::new(k, Matrix::zeros(alg.field(), n, n)).unwrap()
    }

    #[test]
    fn yoneda_on_pinned_instances() {
        let f2 = Arc::new(catalog::f2());
        let k = residue(&f2);
        assert_eq!(yoneda_ext1(&k, &k).unwrap(), 1);
        let dual = Arc::new(catalog::dual_numbers(2));
        let k = residue(&dual);
        assert_eq!(yoneda_ext1(&k, &k).unwrap(), 2);
    }

    #[test]
    fn yoneda_guard() {
        let f3 = Arc::new(catalog::f3());
        let k = residue(&f3);
        assert!(matches!(yoneda_ext1(&k, &k), Err(Error::Guard(_))));
        let f2 = Arc::new(catalog::f2());
        let big = CartierModule::new(AModule::free(&f2, 2), Matrix::zeros(f2.field(), 2, 2)).unwrap();
        assert!(matches!(yoneda_ext1(&big, &big), Err(Error::Guard(_))));
    }

    #[test]
    fn f2_module_classes() {
        // Over F_2 a Cartier module is a vector space with an endomorphism:
        // dimension 1 gives κ = 0, 1; dimension 2 gives the 6 rational canonical forms.
        let f2 = Arc::new(catalog::f2());
        let counts: Vec<usize> = (0..=2).map(|d| cartier_modules_of_dim(&f2, d).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 6]);
    }

    #[test]
    fn brute_force_matches_equalizer_on_f2() {
        let f2 = Arc::new(catalog::f2());
        let all = small_cartier_modules(&f2, 2).unwrap();
        for m in &all {
            for n in &all {
                assert_eq!(hom_cart_dimension(m, n).unwrap(), hom_cart(m, n).unwrap().len());
            }
        }
    }

    #[test]
    fn free_map_count_is_hom_count() {
        let alg = Arc::new(catalog::dual_numbers(2));
        let all = small_cartier_modules(&alg, 2).unwrap();
        let x = AModule::regular(&alg);
        for m in &all {
            assert_eq!(count_free_maps(&x, m, 2).unwrap(), count_a_linear_maps(&x, m.module()).unwrap());
        }
    }
}
