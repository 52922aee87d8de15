//! Monomial-basis quotients `F_p[x, y] / (relations)`.
//!
//! Relations are oriented by degree-lexicographic order and used as rewrite
//! rules. Each variable needs a pure power as some leading term, so that the
//! standard monomials are finite; the resulting multiplication is then
//! validated like any other set of structure constants.

use std::collections::BTreeMap;

use cartier_core::algebra::FiniteAlgebra;
use cartier_core::linalg::PrimeField;

type Monomial = Vec<u32>;
type Poly = BTreeMap<Monomial, u8>;

/// `"2; x; x^2"` or `"2; x, y; x^2, y^2"`.
pub fn parse_presentation(text: &str, name: Option<&str>) -> Result<FiniteAlgebra, String> {
    let parts: Vec<&str> = text.split(';').map(str::trim).collect();
    let [p, gens, rels] = parts[..] else {
        return Err("presentation must read `p; generators; relations`".into());
    };
    let p: u32 = p.parse().map_err(|_| format!("`{p}` is not a prime"))?;
    let field = PrimeField::new(p).map_err(|e| e.to_string())?;
    let vars: Vec<String> = gens.split(',').map(|g| g.trim().to_string()).collect();
    if vars.is_empty() || vars.len() > 2 || vars.iter().any(|v| !is_identifier(v)) {
        return Err(format!("expected one or two generator names, got `{gens}`"));
    }
    if vars[0] == vars.get(1).cloned().unwrap_or_default() {
        return Err("generator names must differ".into());
    }
    let relations: Vec<Poly> = rels
        .split(',')
        .map(|r| parse_poly(r.trim(), &vars, field))
        .collect::<Result<_, _>>()?;
    let rules: Vec<(Monomial, Poly)> = relations.into_iter().filter_map(|r| orient(r, field)).collect();
    let bounds: Vec<u32> = (0..vars.len())
        .map(|v| {
            rules
                .iter()
                .filter(|(lt, _)| lt.iter().enumerate().all(|(i, &e)| i == v || e == 0))
                .map(|(lt, _)| lt[v])
                .min()
                .ok_or_else(|| format!("no relation has a pure power of `{}` as leading term", vars[v]))
        })
        .collect::<Result<_, _>>()?;
    let mut basis: Vec<Monomial> = standard_monomials(&bounds)
        .into_iter()
        .filter(|m| !rules.iter().any(|(lt, _)| divides(lt, m)))
        .collect();
    basis.sort_by(deglex);
    let index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let d = basis.len();
    let mut constants = vec![vec![vec![0i64; d]; d]; d];
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let prod: Monomial = a.iter().zip(b).map(|(x, y)| x + y).collect();
            let nf = normal_form(Poly::from([(prod, 1)]), &rules, field);
            for (m, c) in nf {
                constants[i][j][index[&m]] = c as i64;
            }
        }
    }
    let mut unit = vec![0i64; d];
    unit[0] = 1;
    let labels = basis.iter().map(|m| label(m, &vars)).collect();
    let name = name.map(str::to_string).unwrap_or_else(|| format!("F{p}[{}]/({})", vars.join(","), rels.replace(' ', "")));
    FiniteAlgebra::new(name, field, labels, &constants, &unit)
        .map_err(|e| format!("{e} (relations do not present a monomial-basis quotient)"))
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn deglex(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
    da.cmp(&db).then_with(|| a.cmp(b))
}

fn divides(a: &Monomial, b: &Monomial) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn standard_monomials(bounds: &[u32]) -> Vec<Monomial> {
    bounds.iter().fold(vec![vec![]], |acc, &b| {
        acc.into_iter().flat_map(|m| (0..b).map(move |e| [m.clone(), vec![e]].concat())).collect()
    })
}

fn label(m: &Monomial, vars: &[String]) -> String {
    let factors: Vec<String> = m
        .iter()
        .zip(vars)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect();
    if factors.is_empty() {
        "1".into()
    } else {
        factors.join("*")
    }
}

/// `lt -> -(rest) / lc`, or `None` for the zero relation.
fn orient(r: Poly, field: PrimeField) -> Option<(Monomial, Poly)> {
    let lt = r.keys().max_by(|a, b| deglex(a, b))?.clone();
    let inv = field.inv(r[&lt]);
    let rest = r
        .into_iter()
        .filter(|(m, _)| *m != lt)
        .map(|(m, c)| (m, field.neg(field.mul(c, inv))))
        .collect();
    Some((lt, rest))
}

fn add_term(p: &mut Poly, m: Monomial, c: u8, field: PrimeField) {
    let e = p.entry(m.clone()).or_insert(0);
    *e = field.add(*e, c);
    if *e == 0 {
        p.remove(&m);
    }
}

fn normal_form(mut p: Poly, rules: &[(Monomial, Poly)], field: PrimeField) -> Poly {
    loop {
        let hit = p.iter().find_map(|(m, &c)| rules.iter().find(|(lt, _)| divides(lt, m)).map(|r| (m.clone(), c, r)));
        let Some((m, c, (lt, rest))) = hit else {
            return p;
        };
        p.remove(&m);
        let quotient: Monomial = m.iter().zip(lt).map(|(a, b)| a - b).collect();
        for (r, &k) in rest {
            let shifted = r.iter().zip(&quotient).map(|(a, b)| a + b).collect();
            add_term(&mut p, shifted, field.mul(c, k), field);
        }
    }
}

fn parse_poly(text: &str, vars: &[String], field: PrimeField) -> Result<Poly, String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty relation".into());
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in compact.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);
    let mut poly = Poly::new();
    for term in terms {
        let (sign, body) = match term.as_bytes().first() {
            Some(b'-') => (-1i64, &term[1..]),
            Some(b'+') => (1, &term[1..]),
            _ => (1, term),
        };
        let mut coeff = sign;
        let mut mono = vec![0u32; vars.len()];
        for factor in body.split('*') {
            if let Ok(k) = factor.parse::<i64>() {
                coeff *= k;
                continue;
            }
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (n, e.parse::<u32>().map_err(|_| format!("bad exponent in `{factor}`"))?),
                None => (factor, 1),
            };
            let v = vars
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| format!("unknown generator `{name}` in `{text}`"))?;
            mono[v] += exp;
        }
        add_term(&mut poly, mono, field.reduce(coeff), field);
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cartier_core::catalog;

    #[test]
    fn dual_numbers_match_catalog() {
        let a = parse_presentation("2; x; x^2", Some("F2[x]/(x^2)")).unwrap();
        assert_eq!(a, catalog::dual_numbers(2));
        let b = parse_presentation("2; x; x^3", None).unwrap();
        assert_eq!(b.name(), "F2[x]/(x^3)");
        assert_eq!(b.dim(), 3);
    }

    #[test]
    fn f4_from_an_irreducible_quadratic() {
        let a = parse_presentation("2; w; w^2 + w + 1", Some("F4")).unwrap();
        assert_eq!(a, catalog::f4());
    }

    #[test]
    fn two_variables() {
        let a = parse_presentation("3; x, y; x^2, y^2", None).unwrap();
        assert_eq!(a.labels(), ["1", "y", "x", "x*y"]);
        let b = parse_presentation("2; x, y; x^2 - y, y^2", None).unwrap();
        assert_eq!(b.dim(), 4);
    }

    #[test]
    fn rejects_infinite_or_malformed() {
        assert!(parse_presentation("2; x, y; x^2", None).unwrap_err().contains("pure power of `y`"));
        assert!(parse_presentation("4; x; x^2", None).is_err());
        assert!(parse_presentation("2; x; z^2", None).unwrap_err().contains("unknown generator"));
        assert!(parse_presentation("2; x", None).is_err());
    }
}
