//! The standard algebras every suite runs over.
//!
//! Fields, non-reduced local rings and products, so that both bijective and
//! non-injective Frobenius endomorphisms are covered.

use crate::algebra::FiniteAlgebra;
use crate::linalg::PrimeField;

fn field(p: u32) -> PrimeField {
    PrimeField::new(p).expect("catalog primes are prime")
}

/// `F_p[x]/(x^k)` with basis `1, x, ..., x^(k-1)`.
pub fn truncated_polynomial(p: u32, k: usize) -> FiniteAlgebra {
    let labels: Vec<String> = (0..k)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        })
        .collect();
    let mut c = vec![vec![vec![0i64; k]; k]; k];
    for i in 0..k {
        for j in 0..k {
            if i + j < k {
                c[i][j][i + j] = 1;
            }
        }
    }
    let mut unit = vec![0i64; k];
    unit[0] = 1;
    let name = if k == 1 { format!("F{p}") } else { format!("F{p}[x]/(x^{k})") };
    FiniteAlgebra::new(name, field(p), labels, &c, &unit).expect("truncated polynomial ring")
}

pub fn f2() -> FiniteAlgebra {
    truncated_polynomial(2, 1)
}

pub fn f3() -> FiniteAlgebra {
    truncated_polynomial(3, 1)
}

/// `F_p[x]/(x^2)`.
pub fn dual_numbers(p: u32) -> FiniteAlgebra {
    truncated_polynomial(p, 2)
}

/// `F_4 = F_2[w]/(w^2 + w + 1)` with basis `1, w`.
pub fn f4() -> FiniteAlgebra {
    let c = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 1]]];
    FiniteAlgebra::new("F4", field(2), vec!["1".into(), "w".into()], &c, &[1, 0]).expect("F4")
}

/// Product of two algebras over the same prime field; basis is the disjoint union.
pub fn product(a: &FiniteAlgebra, b: &FiniteAlgebra) -> FiniteAlgebra {
    assert_eq!(a.field(), b.field(), "product over different fields");
    let (da, db) = (a.dim(), b.dim());
    let d = da + db;
    let mut c = vec![vec![vec![0i64; d]; d]; d];
    for i in 0..da {
        for j in 0..da {
            for k in 0..da {
                c[i][j][k] = a.constant(i, j, k) as i64;
            }
        }
    }
    for i in 0..db {
        for j in 0..db {
            for k in 0..db {
                c[da + i][da + j][da + k] = b.constant(i, j, k) as i64;
            }
        }
    }
    let labels = a
        .labels()
        .iter()
        .map(|l| format!("({l},0)"))
        .chain(b.labels().iter().map(|l| format!("(0,{l})")))
        .collect();
    let unit: Vec<i64> = a.unit().iter().chain(b.unit()).map(|&u| u as i64).collect();
    FiniteAlgebra::new(format!("{}x{}", a.name(), b.name()), a.field(), labels, &c, &unit)
        .expect("product of algebras")
}

/// `F_2 x F_2` with basis the two primitive idempotents.
pub fn f2_times_f2() -> FiniteAlgebra {
    let c = vec![vec![vec![1, 0], vec![0, 0]], vec![vec![0, 0], vec![0, 1]]];
    FiniteAlgebra::new("F2xF2", field(2), vec!["e1".into(), "e2".into()], &c, &[1, 1]).expect("F2xF2")
}

pub fn f4_times_dual_numbers() -> FiniteAlgebra {
    product(&f4(), &dual_numbers(2))
}

/// The full catalog, in a fixed order.
pub fn all() -> Vec<FiniteAlgebra> {
    vec![
        f2(),
        f3(),
        f4(),
        dual_numbers(2),
        dual_numbers(3),
        truncated_polynomial(2, 3),
        f2_times_f2(),
        f4_times_dual_numbers(),
    ]
}

/// Catalog entry by name (as printed by [`FiniteAlgebra::name`]).
pub fn by_name(name: &str) -> Option<FiniteAlgebra> {
    all().into_iter().find(|a| a.name() == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_names_are_unique() {
        let names: Vec<String> = all().iter().map(|a| a.name().to_string()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
        assert_eq!(names[3], "F2[x]/(x^2)");
        assert_eq!(by_name("F4x F2").map(|a| a.dim()), None);
        assert_eq!(by_name("F4xF2[x]/(x^2)").map(|a| a.dim()), Some(4));
    }

    #[test]
    fn frobenius_invertibility() {
        let invertible: Vec<bool> = all().iter().map(|a| a.frobenius_inverse().is_some()).collect();
        assert_eq!(invertible, vec![true, true, true, false, false, false, true, false]);
    }
}
