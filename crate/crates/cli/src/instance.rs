//! The plain-text instance format.
//!
//! ```text
//! # comments run to the end of the line
//! [algebra]
//! presentation = 2; x; x^2          # or `catalog = F2xF2`, or structure constants
//!
//! [module k]
//! dim = 1
//! action x = 0
//!
//! [cartier K]
//! module = k
//! kappa = 0
//!
//! [complex C]
//! kind = cartier
//! lowest = 0
//! objects = K K
//! d 1 = 0
//!
//! [perversity p]
//! values = 0
//! ```
//!
//! Matrices are row-major, rows separated by `;`, entries by whitespace;
//! integers are reduced mod p and a matrix with no entries is written `-`.
//! Structure constants use `field = p`, `basis = ...`, `unit = ...` and lines
//! `product a b = <coefficients>`; unlisted products are zero and `b a`
//! defaults to `a b`. In a module, `free = r` replaces `dim` and the actions,
//! and the action of a basis element equal to the unit may be omitted.
//! Missing differentials of a complex are zero.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use cartier_core::algebra::{AModule, FiniteAlgebra};
use cartier_core::cartier::{CartierModule, FrobeniusModule};
use cartier_core::catalog;
use cartier_core::complexes::{BoundedComplex, CartierComplex, ModuleComplex};
use cartier_core::linalg::{Matrix, PrimeField};
use cartier_core::perverse::Perversity;

use crate::polynomial::parse_presentation;

/// A parse error or invariant violation, located in the file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub section: String,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {} in [{}]: {}", self.line, self.section, self.message)
    }
}

impl std::error::Error for InputError {}

#[derive(Clone, Debug)]
pub enum Complex {
    Module(ModuleComplex),
    Cartier(CartierComplex),
}

impl Complex {
    pub fn underlying(&self) -> ModuleComplex {
        match self {
            Complex::Module(c) => c.clone(),
            Complex::Cartier(c) => c.forget(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub algebra: Arc<FiniteAlgebra>,
    pub modules: BTreeMap<String, AModule>,
    pub cartier: BTreeMap<String, CartierModule>,
    pub frobenius: BTreeMap<String, FrobeniusModule>,
    pub complexes: BTreeMap<String, Complex>,
    pub perversities: BTreeMap<String, Perversity>,
}

#[derive(Debug)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

#[derive(Debug)]
struct Section {
    kind: String,
    name: Option<String>,
    line: usize,
    entries: Vec<Entry>,
}

impl Section {
    fn title(&self) -> String {
        match &self.name {
            Some(n) => format!("{} {n}", self.kind),
            None => self.kind.clone(),
        }
    }

    fn err(&self, line: usize, message: impl Into<String>) -> InputError {
        InputError { section: self.title(), line, message: message.into() }
    }

    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    fn require(&self, key: &str) -> Result<&Entry, InputError> {
        self.get(key).ok_or_else(|| self.err(self.line, format!("missing `{key}`")))
    }

    fn name(&self) -> String {
        self.name.clone().unwrap_or_default()
    }
}

const KINDS: [&str; 6] = ["algebra", "module", "cartier", "frobenius", "complex", "perversity"];

fn split_sections(text: &str) -> Result<Vec<Section>, InputError> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(header) = content.strip_prefix('[') {
            let header = header
                .strip_suffix(']')
                .ok_or_else(|| InputError { section: "file".into(), line, message: "unterminated section header".into() })?;
            let mut words = header.split_whitespace();
            let kind = words.next().unwrap_or("").to_string();
            let name = words.next().map(str::to_string);
            if !KINDS.contains(&kind.as_str()) || words.next().is_some() {
                return Err(InputError { section: header.into(), line, message: format!("unknown section `[{header}]`") });
            }
            if kind != "algebra" && name.is_none() {
                return Err(InputError { section: kind, line, message: "section needs a name".into() });
            }
            sections.push(Section { kind, name, line, entries: Vec::new() });
            continue;
        }
        let Some(section) = sections.last_mut() else {
            return Err(InputError { section: "file".into(), line, message: "content before the first section".into() });
        };
        let (key, value) = content.split_once('=').ok_or_else(|| section.err(line, format!("expected `key = value`, got `{content}`")))?;
        let key = key.split_whitespace().collect::<Vec<_>>().join(" ");
        section.entries.push(Entry { key, value: value.trim().to_string(), line });
    }
    Ok(sections)
}

fn parse_int(section: &Section, e: &Entry) -> Result<i64, InputError> {
    e.value.parse().map_err(|_| section.err(e.line, format!("`{}` must be an integer", e.key)))
}

fn parse_matrix(section: &Section, e: &Entry, field: PrimeField, rows: usize, cols: usize) -> Result<Matrix, InputError> {
    let v = e.value.trim();
    if rows * cols == 0 {
        return if v == "-" || v.is_empty() {
            Ok(Matrix::zeros(field, rows, cols))
        } else {
            Err(section.err(e.line, format!("`{}` must be empty (`-`): shape {rows}x{cols}", e.key)))
        };
    }
    let parsed: Vec<Vec<i64>> = v
        .split(';')
        .map(|r| r.split_whitespace().map(|x| x.parse::<i64>()).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()
        .map_err(|_| section.err(e.line, format!("`{}` has a non-integer entry", e.key)))?;
    if parsed.len() != rows || parsed.iter().any(|r| r.len() != cols) {
        let got: Vec<usize> = parsed.iter().map(Vec::len).collect();
        return Err(section.err(e.line, format!("`{}` must be {rows}x{cols}, got rows of lengths {got:?}", e.key)));
    }
    Matrix::from_rows(field, &parsed).map_err(|err| section.err(e.line, err.to_string()))
}

fn parse_vector(section: &Section, e: &Entry, len: usize) -> Result<Vec<i64>, InputError> {
    let v: Vec<i64> = e
        .value
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|_| section.err(e.line, format!("`{}` has a non-integer entry", e.key)))?;
    if v.len() != len {
        return Err(section.err(e.line, format!("`{}` needs {len} coefficients, got {}", e.key, v.len())));
    }
    Ok(v)
}

fn check_keys(section: &Section, allowed: &[&str], prefixes: &[&str]) -> Result<(), InputError> {
    for e in &section.entries {
        let first = e.key.split_whitespace().next().unwrap_or("");
        let ok = allowed.contains(&e.key.as_str()) || (prefixes.contains(&first) && e.key.contains(' '));
        if !ok {
            return Err(section.err(e.line, format!("unexpected key `{}`", e.key)));
        }
    }
    Ok(())
}

fn parse_algebra(s: &Section) -> Result<FiniteAlgebra, InputError> {
    check_keys(s, &["name", "catalog", "presentation", "field", "basis", "unit"], &["product"])?;
    let name = s.get("name").map(|e| e.value.clone());
    if let Some(e) = s.get("catalog") {
        return catalog::by_name(&e.value).ok_or_else(|| {
            let known: Vec<String> = catalog::all().iter().map(|a| a.name().to_string()).collect();
            s.err(e.line, format!("unknown catalog algebra `{}`; known: {}", e.value, known.join(", ")))
        });
    }
    if let Some(e) = s.get("presentation") {
        return parse_presentation(&e.value, name.as_deref()).map_err(|m| s.err(e.line, m));
    }
    let fe = s.require("field")?;
    let p = u32::try_from(parse_int(s, fe)?).map_err(|_| s.err(fe.line, "field must be a prime"))?;
    let field = PrimeField::new(p).map_err(|e| s.err(fe.line, e.to_string()))?;
    let labels: Vec<String> = s.require("basis")?.value.split_whitespace().map(str::to_string).collect();
    let d = labels.len();
    let unit = parse_vector(s, s.require("unit")?, d)?;
    let index = |l: &str, line: usize| labels.iter().position(|x| x == l).ok_or_else(|| s.err(line, format!("unknown basis element `{l}`")));
    let mut constants = vec![vec![vec![0i64; d]; d]; d];
    let mut given = vec![vec![false; d]; d];
    for e in s.entries.iter().filter(|e| e.key.starts_with("product ")) {
        let words: Vec<&str> = e.key.split_whitespace().collect();
        let [_, a, b] = words[..] else {
            return Err(s.err(e.line, "expected `product <a> <b> = <coefficients>`"));
        };
        let (i, j) = (index(a, e.line)?, index(b, e.line)?);
        let v = parse_vector(s, e, d)?;
        constants[i][j] = v.clone();
        given[i][j] = true;
        if !given[j][i] {
            constants[j][i] = v;
        }
    }
    let name = name.unwrap_or_else(|| format!("A({})", labels.join(",")));
    FiniteAlgebra::new(name, field, labels, &constants, &unit).map_err(|e| s.err(s.line, e.to_string()))
}

fn parse_module(s: &Section, alg: &Arc<FiniteAlgebra>) -> Result<AModule, InputError> {
    check_keys(s, &["dim", "free"], &["action"])?;
    if let Some(e) = s.get("free") {
        let r = usize::try_from(parse_int(s, e)?).map_err(|_| s.err(e.line, "rank must be nonnegative"))?;
        return Ok(AModule::free(alg, r));
    }
    let de = s.require("dim")?;
    let dim = usize::try_from(parse_int(s, de)?).map_err(|_| s.err(de.line, "dimension must be nonnegative"))?;
    let f = alg.field();
    let mut actions: Vec<Option<Matrix>> = vec![None; alg.dim()];
    for e in s.entries.iter().filter(|e| e.key.starts_with("action ")) {
        let label = e.key["action ".len()..].trim();
        let i = alg
            .labels()
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| s.err(e.line, format!("`{label}` is not a basis element of {}", alg.name())))?;
        actions[i] = Some(parse_matrix(s, e, f, dim, dim)?);
    }
    let actions = actions
        .into_iter()
        .enumerate()
        .map(|(i, a)| match a {
            Some(m) => Ok(m),
            None if alg.basis_vector(i) == alg.unit() => Ok(Matrix::identity(f, dim)),
            None => Err(s.err(s.line, format!("missing `action {}`", alg.labels()[i]))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    AModule::new(alg.clone(), dim, actions).map_err(|e| s.err(s.line, e.to_string()))
}

fn lookup<'a, T>(s: &Section, e: &Entry, table: &'a BTreeMap<String, T>, what: &str) -> Result<&'a T, InputError> {
    table.get(&e.value).ok_or_else(|| s.err(e.line, format!("no {what} named `{}`", e.value)))
}

fn parse_structured(s: &Section, modules: &BTreeMap<String, AModule>, key: &str) -> Result<(AModule, Matrix), InputError> {
    check_keys(s, &["module", key], &[])?;
    let m = lookup(s, s.require("module")?, modules, "module")?.clone();
    let e = s.require(key)?;
    let k = parse_matrix(s, e, m.field(), m.dim(), m.dim())?;
    Ok((m, k))
}

fn complex_from<O: cartier_core::complexes::ComplexObject>(
    s: &Section,
    alg: &Arc<FiniteAlgebra>,
    table: &BTreeMap<String, O>,
    what: &str,
) -> Result<BoundedComplex<O>, InputError> {
    let le = s.require("lowest")?;
    let lowest = i32::try_from(parse_int(s, le)?).map_err(|_| s.err(le.line, "`lowest` out of range"))?;
    let oe = s.require("objects")?;
    let objects: Vec<O> = oe
        .value
        .split_whitespace()
        .map(|n| table.get(n).cloned().ok_or_else(|| s.err(oe.line, format!("no {what} named `{n}`"))))
        .collect::<Result<_, _>>()?;
    if objects.is_empty() {
        return Ok(BoundedComplex::zero(alg));
    }
    let highest = lowest + objects.len() as i32 - 1;
    let mut diffs: Vec<Option<Matrix>> = vec![None; objects.len() - 1];
    for e in s.entries.iter().filter(|e| e.key.starts_with("d ")) {
        let n: i32 = e.key[2..].trim().parse().map_err(|_| s.err(e.line, format!("bad differential index in `{}`", e.key)))?;
        if n <= lowest || n > highest {
            return Err(s.err(e.line, format!("d {n} is outside the degrees {}..={highest}", lowest + 1)));
        }
        let k = (n - lowest) as usize;
        let (src, tgt) = (objects[k].dim(), objects[k - 1].dim());
        diffs[k - 1] = Some(parse_matrix(s, e, alg.field(), tgt, src)?);
    }
    let diffs = diffs
        .into_iter()
        .enumerate()
        .map(|(k, d)| d.unwrap_or_else(|| Matrix::zeros(alg.field(), objects[k].dim(), objects[k + 1].dim())))
        .collect();
    BoundedComplex::new(alg, lowest, objects, diffs).map_err(|e| s.err(s.line, e.to_string()))
}

/// Parses and validates an instance.
pub fn parse_instance(text: &str) -> Result<Instance, InputError> {
    let sections = split_sections(text)?;
    let algebras: Vec<&Section> = sections.iter().filter(|s| s.kind == "algebra").collect();
    let [alg_section] = algebras[..] else {
        return Err(InputError {
            section: "algebra".into(),
            line: algebras.get(1).map_or(1, |s| s.line),
            message: format!("expected exactly one [algebra] section, found {}", algebras.len()),
        });
    };
    let algebra = Arc::new(parse_algebra(alg_section)?);
    let mut seen: BTreeMap<(String, String), usize> = BTreeMap::new();
    for s in sections.iter().filter(|s| s.kind != "algebra") {
        if let Some(first) = seen.insert((s.kind.clone(), s.name()), s.line) {
            return Err(s.err(s.line, format!("duplicate section, first defined on line {first}")));
        }
    }
    let of_kind = |k: &'static str| sections.iter().filter(move |s| s.kind == k);
    let mut modules = BTreeMap::new();
    for s in of_kind("module") {
        modules.insert(s.name(), parse_module(s, &algebra)?);
    }
    let mut cartier = BTreeMap::new();
    for s in of_kind("cartier") {
        let (m, k) = parse_structured(s, &modules, "kappa")?;
        cartier.insert(s.name(), CartierModule::new(m, k).map_err(|e| s.err(s.require("kappa").map_or(s.line, |e| e.line), e.to_string()))?);
    }
    let mut frobenius = BTreeMap::new();
    for s in of_kind("frobenius") {
        let (m, t) = parse_structured(s, &modules, "tau")?;
        frobenius.insert(s.name(), FrobeniusModule::new(m, t).map_err(|e| s.err(s.require("tau").map_or(s.line, |e| e.line), e.to_string()))?);
    }
    let mut perversities = BTreeMap::new();
    for s in of_kind("perversity") {
        check_keys(s, &["values"], &[])?;
        let e = s.require("values")?;
        let values: Vec<i32> = e
            .value
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| s.err(e.line, "`values` must be integers"))?;
        perversities.insert(s.name(), Perversity::new(&algebra, values).map_err(|err| s.err(e.line, err.to_string()))?);
    }
    let mut complexes = BTreeMap::new();
    for s in of_kind("complex") {
        check_keys(s, &["kind", "lowest", "objects"], &["d"])?;
        let kind = s.get("kind").map_or("module", |e| e.value.as_str());
        let c = match kind {
            "module" => Complex::Module(complex_from(s, &algebra, &modules, "module")?),
            "cartier" => Complex::Cartier(complex_from(s, &algebra, &cartier, "Cartier module")?),
            other => return Err(s.err(s.get("kind").map_or(s.line, |e| e.line), format!("kind must be `module` or `cartier`, got `{other}`"))),
        };
        complexes.insert(s.name(), c);
    }
    Ok(Instance { algebra, modules, cartier, frobenius, complexes, perversities })
}

#[cfg(test)]
mod tests {
    use super::*;

    const DUAL: &str = "
[algebra]
presentation = 2; x; x^2
name = F2[x]/(x^2)

[module k]
dim = 1
action x = 0

[cartier K]
module = k
kappa = 0

[complex C]
kind = cartier
lowest = 0
objects = K K
d 1 = 0

[perversity p]
values = 0
";

    #[test]
    fn parses_the_dual_numbers_example() {
        let inst = parse_instance(DUAL).unwrap();
        assert_eq!(*inst.algebra, catalog::dual_numbers(2));
        assert_eq!(inst.cartier["K"].dim(), 1);
        let Complex::Cartier(c) = &inst.complexes["C"] else { panic!("kind") };
        assert_eq!(c.homology_dims(), vec![(0, 1), (1, 1)]);
        assert_eq!(inst.perversities["p"].values, vec![0]);
    }

    #[test]
    fn structure_constants_and_defaults() {
        let text = "
[algebra]
field = 2
basis = e1 e2
unit = 1 1
product e1 e1 = 1 0
product e2 e2 = 0 1
[module S]
dim = 1
action e1 = 1
action e2 = 0
[module A2]
free = 2
";
        let inst = parse_instance(text).unwrap();
        assert_eq!(*inst.algebra, catalog::f2_times_f2());
        assert_eq!(inst.modules["A2"].dim(), 4);
    }

    #[test]
    fn errors_name_section_and_line() {
        let bad = DUAL.replace("action x = 0", "action x = 1");
        let err = parse_instance(&bad).unwrap_err();
        assert_eq!(err.section, "module k");
        assert!(err.message.contains("multiplicative"), "{err}");

        let bad = DUAL.replace("kappa = 0", "kappa = 1 1");
        let err = parse_instance(&bad).unwrap_err();
        assert_eq!((err.section.as_str(), err.line), ("cartier K", 12));

        let bad = DUAL.replace("objects = K K", "objects = K Q");
        assert!(parse_instance(&bad).unwrap_err().message.contains("`Q`"));
    }

    #[test]
    fn non_associative_constants_name_the_triple() {
        let text = "
[algebra]
field = 2
basis = 1 a b
unit = 1 0 0
product 1 1 = 1 0 0
product 1 a = 0 1 0
product 1 b = 0 0 1
product a a = 0 0 1
product a b = 0 1 0
";
        let err = parse_instance(text).unwrap_err();
        assert_eq!(err.section, "algebra");
        assert!(err.message.contains("not associative: ("), "{err}");
    }
}
