//! Subquotients `S / R` of a coordinate space, with bases chosen canonically.
//!
//! Kernels, images, cokernels, homology and truncations are all built from
//! this one type. The basis of the quotient depends only on the subspaces
//! `R ⊆ S`, never on the spanning vectors used to describe them.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, PrimeField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subquotient {
    ambient: usize,
    sub: Matrix,
    rel: Matrix,
    reps: Matrix,
    proj: Matrix,
}

impl Subquotient {
    /// `sub` and `rel` are spanning sets (columns) of subspaces of `F_p^ambient`.
    pub fn new(sub: &Matrix, rel: &Matrix) -> Result<Self> {
        let field = sub.field();
        let ambient = sub.rows();
        if rel.rows() != ambient {
            return Err(Error::DimensionMismatch {
                op: "subquotient",
                detail: format!("ambient {} vs relations in {}", ambient, rel.rows()),
            });
        }
        let s = sub.canonical_column_basis();
        if !s.spans(rel) {
            return Err(Error::NotStable("relations are not contained in the subspace".into()));
        }
        let left_inverse = left_inverse(&s);
        let rel_coords = (&left_inverse * rel).canonical_column_basis();
        let complement = greedy_complement(field, &rel_coords, s.cols());
        let full = rel_coords.hstack(&complement)?;
        let inv = full.inverse().expect("basis extended to a full basis");
        let q = complement.cols();
        let r = rel_coords.cols();
        let p_rows: Vec<usize> = (r..r + q).collect();
        let proj = &inv.select_rows(&p_rows) * &left_inverse;
        let reps = &s * &complement;
        Ok(Self { ambient, sub: s, rel: rel.canonical_column_basis(), reps, proj })
    }

    /// The whole space `F_p^n`.
    pub fn whole(field: PrimeField, n: usize) -> Self {
        Self::new(&Matrix::identity(field, n), &Matrix::zeros(field, n, 0)).expect("whole space")
    }

    /// A subspace, no relations.
    pub fn subspace(sub: &Matrix) -> Self {
        let rel = Matrix::zeros(sub.field(), sub.rows(), 0);
        Self::new(sub, &rel).expect("subspace")
    }

    /// The whole space modulo `rel`.
    pub fn quotient(field: PrimeField, n: usize, rel: &Matrix) -> Result<Self> {
        Self::new(&Matrix::identity(field, n), rel)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.reps.cols()
    }

    /// Canonical basis of `S`.
    pub fn sub(&self) -> &Matrix {
        &self.sub
    }

    /// Canonical basis of `R`.
    pub fn rel(&self) -> &Matrix {
        &self.rel
    }

    /// Ambient representatives of the quotient basis (`ambient x dim`).
    pub fn reps(&self) -> &Matrix {
        &self.reps
    }

    /// Coordinates in the quotient of a vector of `S` (`dim x ambient`); meaningless off `S`.
    pub fn proj(&self) -> &Matrix {
        &self.proj
    }

    /// Whether `g` maps `S` into `S` and `R` into `R`.
    pub fn is_stable_under(&self, g: &Matrix) -> bool {
        self.sub.spans(&(g * &self.sub)) && self.rel.spans(&(g * &self.rel))
    }

    /// Whether `g` maps this subquotient into `target` (`g S ⊆ S'`, `g R ⊆ R'`).
    pub fn maps_into(&self, g: &Matrix, target: &Subquotient) -> bool {
        target.sub.spans(&(g * &self.sub)) && target.rel.spans(&(g * &self.rel))
    }

    /// Matrix of the map induced by `g` from this subquotient to `target`.
    pub fn induced(&self, g: &Matrix, target: &Subquotient) -> Matrix {
        &(&target.proj * g) * &self.reps
    }
}

/// `L` with `L * s = I` for `s` of full column rank.
fn left_inverse(s: &Matrix) -> Matrix {
    let field = s.field();
    let k = s.cols();
    let rows = s.transpose().rref().pivots;
    let square = s.select_rows(&rows);
    let inv = square.inverse().expect("full column rank");
    let mut l = Matrix::zeros(field, k, s.rows());
    for (j, &r) in rows.iter().enumerate() {
        for i in 0..k {
            l.set(i, r, inv.get(i, j));
        }
    }
    l
}

/// Standard basis vectors completing `basis` (columns) to a basis of `F_p^n`.
fn greedy_complement(field: PrimeField, basis: &Matrix, n: usize) -> Matrix {
    let mut current = basis.clone();
    let mut chosen = Vec::new();
    let mut rank = current.rank();
    for i in 0..n {
        if rank == n {
            break;
        }
        let mut e = vec![0u8; n];
        e[i] = 1;
        let candidate = current.hstack(&Matrix::column_vector(field, &e)).expect("same rows");
        let r = candidate.rank();
        if r > rank {
            rank = r;
            current = candidate;
            chosen.push(e);
        }
    }
    Matrix::from_columns(field, n, &chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_independent_of_spanning_set() {
        let f = PrimeField::new(3).unwrap();
        let a = Matrix::from_rows(f, &[vec![1, 2], vec![1, 0], vec![0, 1]]).unwrap();
        let change = Matrix::from_rows(f, &[vec![1, 1, 2], vec![2, 1, 0]]).unwrap();
        let b = &a * &change;
        let x = Subquotient::subspace(&a);
        let y = Subquotient::subspace(&b);
        assert_eq!(x, y);
    }

    #[test]
    fn projection_inverts_representatives_and_kills_relations() {
        let f = PrimeField::new(2).unwrap();
        let sub = Matrix::from_rows(f, &[vec![1, 0, 1], vec![0, 1, 1], vec![0, 0, 0], vec![1, 1, 0]]).unwrap();
        let rel = Matrix::from_rows(f, &[vec![1], vec![1], vec![0], vec![0]]).unwrap();
        let sq = Subquotient::new(&sub, &rel).unwrap();
        assert_eq!(sq.dim(), 1);
        assert_eq!(&sq.proj * &sq.reps, Matrix::identity(f, 1));
        assert!((&sq.proj * &rel).is_zero());
    }

    #[test]
    fn relations_outside_subspace_are_rejected() {
        let f = PrimeField::new(2).unwrap();
        let sub = Matrix::from_rows(f, &[vec![1], vec![0]]).unwrap();
        let rel = Matrix::from_rows(f, &[vec![0], vec![1]]).unwrap();
        assert!(Subquotient::new(&sub, &rel).is_err());
    }

    #[test]
    fn empty_ambient() {
        let f = PrimeField::new(5).unwrap();
        let sq = Subquotient::whole(f, 0);
        assert_eq!(sq.dim(), 0);
    }
}
