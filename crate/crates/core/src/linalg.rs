//! Dense exact linear algebra over prime fields `F_p`, `p <= 251`.
//!
//! Entries are stored row-major as canonical residues in one byte each.
//! Elimination always pivots on the first nonzero entry in column order, so
//! every result is reproducible bit for bit.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeField {
    p: u8,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=251).contains(&p) || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p: p as u8 })
    }

    pub fn p(self) -> u8 {
        self.p
    }

    /// Canonical residue of an arbitrary integer.
    pub fn reduce(self, x: i64) -> u8 {
        x.rem_euclid(self.p as i64) as u8
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.p as u16 - b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(self, a: u8, mut e: u32) -> u8 {
        let mut base = a % self.p;
        let mut acc = 1u8;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(self, a: u8) -> u8 {
        debug_assert!(!a.is_multiple_of(self.p), "inverse of zero");
        self.pow(a, self.p as u32 - 2)
    }

    /// Every element of the field, in increasing order.
    pub fn elements(self) -> impl Iterator<Item = u8> {
        0..self.p
    }
}

/// Result of row reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// A dense matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<F_{}>{}x{}[", self.field.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

fn mismatch(op: &'static str, a: &Matrix, b: &Matrix) -> Error {
    Error::DimensionMismatch {
        op,
        detail: format!("{}x{} vs {}x{}", a.rows, a.cols, b.rows, b.cols),
    }
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from integer rows, reducing entries mod `p`.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                op: "from_rows",
                detail: "ragged rows".into(),
            });
        }
        let data = rows.iter().flatten().map(|&x| field.reduce(x)).collect();
        Ok(Self { field, rows: rows.len(), cols, data })
    }

    /// Builds a matrix from row-major residues, which must already be canonical.
    pub fn from_vec(field: PrimeField, rows: usize, cols: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "from_vec",
                detail: format!("{} entries for {}x{}", data.len(), rows, cols),
            });
        }
        if let Some(bad) = data.iter().find(|&&e| e >= field.p) {
            return Err(Error::DimensionMismatch {
                op: "from_vec",
                detail: format!("entry {bad} is not a residue mod {}", field.p),
            });
        }
        Ok(Self { field, rows, cols, data })
    }

    pub fn from_fn(field: PrimeField, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c) % field.p);
            }
        }
        Self { field, rows, cols, data }
    }

    /// A single column vector.
    pub fn column_vector(field: PrimeField, entries: &[u8]) -> Self {
        Self::from_fn(field, entries.len(), 1, |r, _| entries[r])
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u8>]) -> Self {
        Self::from_fn(field, rows, columns.len(), |r, c| columns[c][r])
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v % self.field.p;
    }

    pub fn entries(&self) -> &[u8] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        (0..self.cols).map(move |c| self.column(c))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.field, self.rows, idx.len(), |r, c| self.get(r, idx[c]))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.field, idx.len(), self.cols, |r, c| self.get(idx[r], c))
    }

    /// Rows `start..start+len` and columns `cstart..cstart+clen`.
    pub fn block(&self, start: usize, len: usize, cstart: usize, clen: usize) -> Self {
        Self::from_fn(self.field, len, clen, |r, c| self.get(start + r, cstart + c))
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { left: self.field.p, right: other.field.p });
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(mismatch("multiply", self, other));
        }
        let p = self.field.p as u32;
        let mut out = vec![0u8; self.rows * other.cols];
        let mut acc = vec![0u32; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k] as u32;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (slot, &b) in acc.iter_mut().zip(orow) {
                    *slot = (*slot + a * b as u32) % p;
                }
            }
            for c in 0..other.cols {
                out[r * other.cols + c] = acc[c] as u8;
            }
        }
        Ok(Self { field: self.field, rows: self.rows, cols: other.cols, data: out })
    }

    fn zip_with(&self, other: &Self, op: &'static str, f: impl Fn(u8, u8) -> u8) -> Result<Self> {
        self.check_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(mismatch(op, self, other));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { field: self.field, rows: self.rows, cols: self.cols, data })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let f = self.field;
        self.zip_with(other, "add", move |a, b| f.add(a, b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let f = self.field;
        self.zip_with(other, "sub", move |a, b| f.sub(a, b))
    }

    pub fn scale(&self, c: u8) -> Self {
        let f = self.field;
        let c = c % f.p;
        Self { data: self.data.iter().map(|&a| f.mul(a, c)).collect(), ..self.clone() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Block diagonal `diag(self, other)`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_fn(self.field, self.rows + other.rows, self.cols + other.cols, |r, c| {
            match (r < self.rows, c < self.cols) {
                (true, true) => self.get(r, c),
                (false, false) => other.get(r - self.rows, c - self.cols),
                _ => 0,
            }
        })
    }

    pub fn kronecker(&self, other: &Self) -> Self {
        let f = self.field;
        Self::from_fn(f, self.rows * other.rows, self.cols * other.cols, |r, c| {
            f.mul(self.get(r / other.rows, c / other.cols), other.get(r % other.rows, c % other.cols))
        })
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(mismatch("hstack", self, other));
        }
        Ok(Self::from_fn(self.field, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                other.get(r, c - self.cols)
            }
        }))
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(mismatch("vstack", self, other));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self { field: self.field, rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn hstack_all(field: PrimeField, rows: usize, parts: &[Matrix]) -> Result<Self> {
        parts.iter().try_fold(Self::zeros(field, rows, 0), |acc, m| acc.hstack(m))
    }

    pub fn vstack_all(field: PrimeField, cols: usize, parts: &[Matrix]) -> Result<Self> {
        parts.iter().try_fold(Self::zeros(field, 0, cols), |acc, m| acc.vstack(m))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut base = self.clone();
        let mut acc = Self::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col));
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), inv);
                m.data[row * m.cols + c] = v;
            }
            for r in 0..m.rows {
                let factor = m.get(r, col);
                if r == row || factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.data[r * m.cols + c] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        let rank = pivots.len();
        Rref { reduced: m, pivots, rank }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Columns form a basis of the null space `{x : self * x = 0}`.
    pub fn kernel_basis(&self) -> Self {
        let f = self.field;
        let Rref { reduced, pivots, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, f.neg(reduced.get(r, fc)));
            }
        }
        k
    }

    /// Some `x` with `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &Self) -> Result<Option<Self>> {
        self.check_field(b)?;
        if self.rows != b.rows {
            return Err(mismatch("solve", self, b));
        }
        let f = self.field;
        let aug = self.hstack(b)?;
        let Rref { reduced, pivots, .. } = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Self::zeros(f, self.cols, b.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, reduced.get(r, self.cols + j));
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let id = Self::identity(self.field, self.rows);
        if self.rank() != self.rows {
            return None;
        }
        self.solve(&id).ok().flatten()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// A basis of the column space drawn from the columns themselves (pivot columns).
    pub fn column_space_basis(&self) -> Self {
        let pivots = self.rref().pivots;
        self.select_columns(&pivots)
    }

    /// The unique basis of the column space whose transpose is in reduced row echelon form.
    pub fn canonical_column_basis(&self) -> Self {
        let Rref { reduced, rank, .. } = self.transpose().rref();
        reduced.select_rows(&(0..rank).collect::<Vec<_>>()).transpose()
    }

    /// Whether every column of `other` lies in the column space of `self`.
    pub fn spans(&self, other: &Self) -> bool {
        if other.cols == 0 {
            return true;
        }
        let r = self.rank();
        match self.hstack(other) {
            Ok(joined) => joined.rank() == r,
            Err(_) => false,
        }
    }

    /// Whether the column spaces of `self` and `other` agree.
    pub fn same_column_space(&self, other: &Self) -> bool {
        self.rows == other.rows && self.canonical_column_basis() == other.canonical_column_basis()
    }

    /// Reshape a column vector of length `rows * cols` (row-major) into a matrix.
    pub fn reshape_column(v: &[u8], field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: v.to_vec() }
    }

    /// Row-major flattening as a column vector.
    pub fn flatten(&self) -> Vec<u8> {
        self.data.clone()
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;

    /// Panics on a dimension or field mismatch; use [`Matrix::checked_mul`] for untrusted input.
    fn mul(self, rhs: &'a Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix product")
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;

    fn add(self, rhs: &'a Matrix) -> Matrix {
        self.checked_add(rhs).expect("matrix sum")
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &'a Matrix) -> Matrix {
        self.checked_sub(rhs).expect("matrix difference")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        let f = self.field;
        Matrix { data: self.data.iter().map(|&a| f.neg(a)).collect(), ..self.clone() }
    }
}

/// Dimension of `ker(next) / im(prev)` for composable maps `prev: U -> V`, `next: V -> W`.
pub fn homology_dim(prev: &Matrix, next: &Matrix) -> usize {
    next.cols() - next.rank() - prev.rank()
}

/// Rank of the map induced on cohomology by a chain-level map.
///
/// `cycles` spans the cycles of the source, `boundaries` spans the boundaries
/// of the target. The image of `cycles` must consist of target cycles.
pub fn induced_rank(map: &Matrix, cycles: &Matrix, boundaries: &Matrix) -> usize {
    let image = map * cycles;
    let joined = image.hstack(boundaries).expect("induced_rank shapes");
    joined.rank() - boundaries.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    fn m(field: PrimeField, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(field, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rejects_composite_moduli() {
        assert_eq!(PrimeField::new(4), Err(Error::NotPrime(4)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
        assert_eq!(PrimeField::new(256), Err(Error::NotPrime(256)));
        assert!(PrimeField::new(251).is_ok());
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = Matrix::identity(f2(), 2);
        let r = id.rref();
        assert_eq!(r.reduced, id);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.rank, 2);

        let z = Matrix::zeros(f2(), 3, 2);
        let r = z.rref();
        assert_eq!(r.reduced, z);
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn rref_all_ones() {
        // Row operations on [[1,1],[1,1]]: swapping or adding rows; only R2 += R1
        // produces an echelon form, giving [[1,1],[0,0]].
        let a = m(f2(), &[&[1, 1], &[1, 1]]);
        let r = a.rref();
        assert_eq!(r.reduced, m(f2(), &[&[1, 1], &[0, 0]]));
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn kernel_examples() {
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(Matrix::identity(f3, 3).kernel_basis().cols(), 0);
        // Of the 4 vectors in F_2^2 only 00 and 11 are killed by [[1,1],[1,1]].
        let k = m(f2(), &[&[1, 1], &[1, 1]]).kernel_basis();
        assert_eq!(k, m(f2(), &[&[1], &[1]]));
        assert_eq!(Matrix::zeros(f2(), 2, 2).kernel_basis().cols(), 2);
    }

    #[test]
    fn solve_examples() {
        let a = m(f2(), &[&[1, 1], &[1, 1]]);
        assert_eq!(a.solve(&m(f2(), &[&[1], &[0]])).unwrap(), None);
        let x = a.solve(&m(f2(), &[&[1], &[1]])).unwrap().unwrap();
        assert_eq!(f2().add(x.get(0, 0), x.get(1, 0)), 1);

        let b = m(f2(), &[&[1, 0, 1], &[0, 1, 1]]);
        let id = Matrix::identity(f2(), 2);
        assert_eq!(id.solve(&b).unwrap().unwrap(), b);

        let err = id.solve(&Matrix::zeros(f2(), 3, 1)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { op: "solve", .. }));
    }

    #[test]
    fn structural_ops() {
        let f5 = PrimeField::new(5).unwrap();
        let a = m(f5, &[&[1, 2], &[3, 4]]);
        assert_eq!(&a * &Matrix::identity(f5, 2), a);
        let c = m(f5, &[&[3]]);
        assert_eq!(c.kronecker(&a), a.scale(3));
        assert_eq!(m(f5, &[&[2]]).direct_sum(&m(f5, &[&[4]])), m(f5, &[&[2, 0], &[0, 4]]));
        let k = a.kronecker(&Matrix::identity(f5, 3));
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert!(a.checked_mul(&Matrix::zeros(f5, 3, 3)).is_err());
        assert!(a.checked_add(&Matrix::zeros(PrimeField::new(2).unwrap(), 2, 2)).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let f3 = PrimeField::new(3).unwrap();
        let a = m(f3, &[&[1, 2], &[0, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Matrix::identity(f3, 2));
        assert!(m(f3, &[&[1, 2], &[2, 1]]).inverse().is_none());
    }

    fn matrix_strategy(p: u32) -> impl Strategy<Value = Matrix> {
        (0usize..=8, 0usize..=8).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(0u8..p as u8, r * c).prop_map(move |data| {
                Matrix::from_vec(PrimeField::new(p).unwrap(), r, c, data).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(a in prop_oneof![matrix_strategy(2), matrix_strategy(3)]) {
            let k = a.kernel_basis();
            prop_assert_eq!(a.rank() + k.cols(), a.cols());
            prop_assert!((&a * &k).is_zero());
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn rref_idempotent(a in prop_oneof![matrix_strategy(2), matrix_strategy(3)]) {
            let once = a.rref().reduced;
            prop_assert_eq!(once.rref().reduced, once.clone());
        }

        #[test]
        fn solve_is_exact(a in matrix_strategy(3), seed in any::<u64>()) {
            let x0 = Matrix::from_fn(a.field(), a.cols(), 2, |r, c| ((seed >> ((r + c) % 60)) & 3) as u8);
            let b = &a * &x0;
            let x = a.solve(&b).unwrap().expect("consistent by construction");
            prop_assert_eq!(&a * &x, b);
        }
    }
}
