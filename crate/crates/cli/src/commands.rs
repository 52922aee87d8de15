//! One function per verb; each returns a report or an input error.

use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

use cartier_core::algebra::{ext_a_dims, hom_a, AModule, GeneratorChoice};
use cartier_core::cartier::{hom_cart, CartierModule};
use cartier_core::complexes::{truncation_triple, ModuleComplex};
use cartier_core::derived_checks::verify_les;
use cartier_core::free_monad::ext_cart_dims;
use cartier_core::oracle;
use cartier_core::perverse::{
    block_homology, check_fstar_perverse_texact, is_perverse, perverse_truncate, perverse_truncate_cartier,
    perverse_truncate_via_duality, perverse_truncation_triple, precondition_samples, Perversity, Side,
};
use cartier_core::suite::{run_suite, Scope, SuiteConfig};

use crate::instance::{parse_instance, Complex, InputError, Instance};
use crate::report::{Cell, RunReport, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(#[from] InputError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cartier_core::Error),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 3,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub seed: u64,
    pub max_degree: usize,
    pub cutoff: usize,
}

impl Default for Options {
    fn default() -> Self {
        let d = SuiteConfig::default();
        Self { seed: d.seed, max_degree: d.max_degree, cutoff: d.cutoff }
    }
}

/// A parsed instance together with the digest of its bytes.
pub struct Loaded {
    pub instance: Instance,
    pub digest: String,
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Usage(format!("{} is not UTF-8 text", path.display())))?;
    let instance = parse_instance(&text)?;
    Ok(Loaded { instance, digest: hex::encode(Sha256::digest(&bytes)) })
}

fn report(command: &str, loaded: &Loaded, opts: &Options) -> RunReport {
    let mut r = RunReport::new(command, opts.seed);
    r.instance_digest = Some(loaded.digest.clone());
    r.arg("algebra", loaded.instance.algebra.name());
    r
}

enum Pair<'a> {
    Cartier(&'a CartierModule, &'a CartierModule),
    Modules(&'a AModule, &'a AModule),
}

fn pair<'a>(inst: &'a Instance, a: &str, b: &str) -> Result<Pair<'a>, CliError> {
    if let (Some(m), Some(n)) = (inst.cartier.get(a), inst.cartier.get(b)) {
        return Ok(Pair::Cartier(m, n));
    }
    if let (Some(m), Some(n)) = (inst.modules.get(a), inst.modules.get(b)) {
        return Ok(Pair::Modules(m, n));
    }
    let known = |x: &str| inst.cartier.contains_key(x) || inst.modules.contains_key(x);
    Err(CliError::Usage(match (known(a), known(b)) {
        (false, _) => format!("no module or Cartier module named `{a}`"),
        (_, false) => format!("no module or Cartier module named `{b}`"),
        _ => format!("`{a}` and `{b}` must both be modules or both be Cartier modules"),
    }))
}

pub fn validate(loaded: &Loaded, opts: &Options) -> RunReport {
    let inst = &loaded.instance;
    let mut r = report("validate", loaded, opts);
    let alg = &inst.algebra;
    let mut t = Table::new("objects", &["kind", "name", "dimension", "detail"]);
    let frob = if alg.frobenius_inverse().is_some() { "Frobenius bijective" } else { "Frobenius not bijective" };
    t.push(vec!["algebra".into(), alg.name().into(), alg.dim().into(), format!("F_{}, {frob}", alg.field().p()).into()]);
    for (name, m) in &inst.modules {
        t.push(vec!["module".into(), name.as_str().into(), m.dim().into(), "".into()]);
    }
    for (name, m) in &inst.cartier {
        t.push(vec!["cartier".into(), name.as_str().into(), m.dim().into(), format!("rank of kappa {}", m.kappa().rank()).into()]);
    }
    for (name, m) in &inst.frobenius {
        t.push(vec!["frobenius".into(), name.as_str().into(), m.module().dim().into(), format!("rank of tau {}", m.tau().rank()).into()]);
    }
    for (name, c) in &inst.complexes {
        let u = c.underlying();
        let kind = match c {
            Complex::Module(_) => "module complex",
            Complex::Cartier(_) => "cartier complex",
        };
        let total: usize = u.objects().iter().map(AModule::dim).sum();
        t.push(vec![kind.into(), name.as_str().into(), total.into(), format!("degrees {}..={}", u.lowest(), u.highest()).into()]);
    }
    for (name, p) in &inst.perversities {
        let v: Vec<String> = p.values.iter().map(i32::to_string).collect();
        t.push(vec!["perversity".into(), name.as_str().into(), p.values.len().into(), v.join(" ").into()]);
    }
    r.tables.push(t);
    r.verdict("algebra axioms", true, None);
    r.verdict("module axioms", true, None);
    r.verdict("structure maps semilinear", true, None);
    r.verdict("differentials square to zero", true, None);
    r
}

pub fn hom(loaded: &Loaded, a: &str, b: &str, opts: &Options) -> Result<RunReport, CliError> {
    let mut r = report("hom", loaded, opts);
    r.arg("source", a);
    r.arg("target", b);
    let mut t = Table::new("hom dimensions", &["space", "dimension"]);
    match pair(&loaded.instance, a, b)? {
        Pair::Cartier(m, n) => {
            let plain = hom_a(m.module(), n.module())?.len();
            let twisted = hom_a(&m.module().frobenius_twist(), n.module())?.len();
            let cart = hom_cart(m, n)?.len();
            t.push(vec!["Hom_A(UM, UN)".into(), plain.into()]);
            t.push(vec!["Hom_A(F_*UM, UN)".into(), twisted.into()]);
            t.push(vec!["Hom_Cart(M, N)".into(), cart.into()]);
            r.verdict("Hom_Cart is a subspace of Hom_A", cart <= plain, None);
            match oracle::hom_cart_dimension(m, n) {
                Ok(counted) => {
                    t.push(vec!["Hom_Cart by enumeration".into(), counted.into()]);
                    r.verdict("equalizer agrees with enumeration", counted == cart, None);
                }
                Err(e) => r.notes.push(format!("enumeration skipped: {e}")),
            }
        }
        Pair::Modules(m, n) => {
            let plain = hom_a(m, n)?.len();
            t.push(vec!["Hom_A(M, N)".into(), plain.into()]);
            match oracle::count_a_linear_maps(m, n) {
                Ok(count) => {
                    let exact = (m.field().p() as u64).checked_pow(plain as u32) == Some(count);
                    t.push(vec!["maps by enumeration".into(), Cell::Int(count as i64)]);
                    r.verdict("kernel agrees with enumeration", exact, None);
                }
                Err(e) => r.notes.push(format!("enumeration skipped: {e}")),
            }
        }
    }
    r.tables.push(t);
    Ok(r)
}

pub fn ext(loaded: &Loaded, a: &str, b: &str, opts: &Options) -> Result<RunReport, CliError> {
    let mut r = report("ext", loaded, opts);
    r.arg("source", a);
    r.arg("target", b);
    r.arg("max_degree", opts.max_degree);
    let max = opts.max_degree;
    match pair(&loaded.instance, a, b)? {
        Pair::Cartier(m, n) => {
            let cart = ext_cart_dims(m, n, max)?;
            let plain = ext_a_dims(m.module(), n.module(), max, GeneratorChoice::Minimal)?;
            let twisted = ext_a_dims(&m.module().frobenius_twist(), n.module(), max, GeneratorChoice::Minimal)?;
            let mut t = Table::new("ext dimensions", &["degree", "Ext_Cart(M, N)", "Ext_A(UM, UN)", "Ext_A(F_*UM, UN)"]);
            for i in 0..=max {
                t.push(vec![i.into(), cart[i].into(), plain[i].into(), twisted[i].into()]);
            }
            r.tables.push(t);
            let hom = hom_cart(m, n)?.len();
            r.verdict("degree 0 equals Hom_Cart", cart[0] == hom, None);
            let bounded = (0..=max).all(|i| cart[i] <= plain[i] + if i > 0 { twisted[i - 1] } else { 0 });
            r.verdict("Ext_Cart^i bounded by Ext_A^i(UM, UN) + Ext_A^(i-1)(F_*UM, UN)", bounded, None);
        }
        Pair::Modules(m, n) => {
            let plain = ext_a_dims(m, n, max, GeneratorChoice::Minimal)?;
            let mut t = Table::new("ext dimensions", &["degree", "Ext_A(M, N)"]);
            for (i, d) in plain.iter().enumerate() {
                t.push(vec![i.into(), (*d).into()]);
            }
            r.tables.push(t);
            r.verdict("degree 0 equals Hom_A", plain[0] == hom_a(m, n)?.len(), None);
        }
    }
    Ok(r)
}

pub fn les(loaded: &Loaded, a: &str, b: &str, opts: &Options) -> Result<RunReport, CliError> {
    let mut r = report("les", loaded, opts);
    r.arg("source", a);
    r.arg("target", b);
    r.arg("max_degree", opts.max_degree);
    let Pair::Cartier(m, n) = pair(&loaded.instance, a, b)? else {
        return Err(CliError::Usage("les needs two Cartier modules".into()));
    };
    let v = verify_les(m, n, opts.max_degree)?;
    let mut t = Table::new("long exact sequence", &["node", "group", "dimension", "rank in", "rank out", "exact"]);
    for (i, node) in v.sequence.nodes.iter().enumerate() {
        t.push(vec![i.into(), node.label.as_str().into(), node.dim.into(), node.rank_in.into(), node.rank_out.into(), node.exact.into()]);
    }
    r.tables.push(t);
    let mut dims = Table::new("ext dimensions", &["degree", "Ext_Cart(M, N)", "Ext_A(UM, UN)", "Ext_A(F_*UM, UN)"]);
    for i in 0..v.ext_cart.len() {
        dims.push(vec![i.into(), v.ext_cart[i].into(), v.ext_source.get(i).copied().into(), v.ext_target.get(i).copied().into()]);
    }
    r.tables.push(dims);
    r.verdict("exact at every node", v.exact(), None);
    r.verdict("degree 0 equals Hom_Cart", v.degree0_matches_hom, Some(format!("Hom_Cart has dimension {}", v.hom_cart)));
    match v.yoneda {
        Some(y) => r.verdict("degree 1 equals Yoneda enumeration", v.degree1_matches_yoneda() == Some(true), Some(format!("enumerated dimension {y}"))),
        None => {
            if let Err(e) = oracle::yoneda_ext1(m, n) {
                r.notes.push(format!("Yoneda enumeration skipped: {e}"));
            }
        }
    }
    Ok(r)
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Geq => "geq",
        Side::Leq => "leq",
    }
}

pub fn parse_side(s: &str) -> Result<Side, CliError> {
    match s {
        "geq" | ">=" => Ok(Side::Geq),
        "leq" | "<=" => Ok(Side::Leq),
        other => Err(CliError::Usage(format!("side must be `geq` or `leq`, got `{other}`"))),
    }
}

fn complex<'a>(inst: &'a Instance, name: &str) -> Result<&'a Complex, CliError> {
    inst.complexes.get(name).ok_or_else(|| CliError::Usage(format!("no complex named `{name}`")))
}

fn perversity<'a>(inst: &'a Instance, name: &str) -> Result<&'a Perversity, CliError> {
    inst.perversities.get(name).ok_or_else(|| CliError::Usage(format!("no perversity named `{name}`")))
}

fn homology_table(title: &str, before: &ModuleComplex, after: &ModuleComplex) -> Table {
    let mut t = Table::new(title, &["degree", "dim C", "dim H(C)", "dim truncation", "dim H(truncation)"]);
    let lo = before.lowest().min(after.lowest());
    let hi = before.highest().max(after.highest());
    for n in lo..=hi {
        t.push(vec![n.into(), before.dim(n).into(), before.homology_dim(n).into(), after.dim(n).into(), after.homology_dim(n).into()]);
    }
    t
}

/// `τ_{>=n}` or `τ_{<=n}`, standard or perverse.
pub fn truncate(
    loaded: &Loaded,
    name: &str,
    degree: i32,
    side: Side,
    pv: Option<&str>,
    opts: &Options,
) -> Result<RunReport, CliError> {
    let inst = &loaded.instance;
    let mut r = report("truncate", loaded, opts);
    r.arg("complex", name);
    r.arg("degree", degree);
    r.arg("side", side_name(side));
    let c = complex(inst, name)?;
    let pv = match pv {
        Some(p) => {
            r.arg("perversity", p);
            Some(perversity(inst, p)?.clone())
        }
        None => None,
    };
    let u = c.underlying();
    // The fiber triple lives at `n` for `τ_{>=n}` and at `n + 1` for `τ_{<=n}`.
    let at = match side {
        Side::Geq => degree,
        Side::Leq => degree + 1,
    };
    let out = match (&pv, c) {
        (None, Complex::Module(m)) => match side {
            Side::Geq => m.truncate_geq(degree)?,
            Side::Leq => m.truncate_leq(degree)?,
        },
        (None, Complex::Cartier(m)) => {
            let t = match side {
                Side::Geq => m.truncate_geq(degree)?,
                Side::Leq => m.truncate_leq(degree)?,
            };
            let plain = match side {
                Side::Geq => u.truncate_geq(degree)?,
                Side::Leq => u.truncate_leq(degree)?,
            };
            r.verdict("forget commutes with truncation", t.forget() == plain, None);
            t.forget()
        }
        (Some(p), Complex::Module(m)) => perverse_truncate(m, p, side, degree)?,
        (Some(p), Complex::Cartier(m)) => match perverse_truncate_cartier(m, p, side, degree) {
            Ok(t) => {
                r.verdict("forget commutes with truncation", t.forget() == perverse_truncate(&u, p, side, degree)?, None);
                t.forget()
            }
            Err(e @ cartier_core::Error::PerversityRejected(_)) => {
                r.verdict("perversity accepted", false, Some(e.to_string()));
                return Ok(r);
            }
            Err(e) => return Err(e.into()),
        },
    };
    let triple = match &pv {
        None => truncation_triple(&u, at)?,
        Some(p) => perverse_truncation_triple(&u, p, at)?,
    };
    r.tables.push(homology_table("truncation", &u, &out));
    r.verdict("fiber triple is degreewise exact", triple.degreewise_exact, None);
    r.verdict("remainder is the complementary truncation", triple.remainder_quasi_isomorphic, None);
    r.verdict("homology splits between the two parts", triple.homology_split, None);
    r.verdicts.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(r)
}

fn block_table(title: &str, parts: &[(&str, &ModuleComplex)]) -> Table {
    let mut t = Table::new(title, &["part", "block", "degree", "dimension"]);
    for (label, c) in parts {
        for (j, block) in block_homology(c).iter().enumerate() {
            for &(n, d) in block {
                t.push(vec![(*label).into(), j.into(), n.into(), d.into()]);
            }
        }
    }
    t
}

pub fn perverse(loaded: &Loaded, name: &str, pv_name: &str, degree: i32, opts: &Options) -> Result<RunReport, CliError> {
    let inst = &loaded.instance;
    let mut r = report("perverse", loaded, opts);
    r.arg("complex", name);
    r.arg("perversity", pv_name);
    r.arg("degree", degree);
    let c = complex(inst, name)?;
    let pv = perversity(inst, pv_name)?;
    let u = c.underlying();
    let mut samples = precondition_samples(&inst.algebra);
    samples.push(u.clone());
    let tex = check_fstar_perverse_texact(&inst.algebra, pv, &samples)?;
    let failing: Vec<&str> = [
        ("connective part", tex.connective_preserved),
        ("coconnective part", tex.coconnective_preserved),
        ("truncation", tex.commutes_with_truncation),
        ("duality", tex.duality_commutes),
        ("blocks", tex.blocks_fixed),
    ]
    .iter()
    .filter(|(_, ok)| !ok)
    .map(|(n, _)| *n)
    .collect();
    r.verdict(
        "F_* is perverse t-exact on the samples",
        tex.passed(),
        (!failing.is_empty()).then(|| format!("fails on: {}", failing.join(", "))),
    );
    let geq = perverse_truncate(&u, pv, Side::Geq, degree)?;
    let leq = perverse_truncate(&u, pv, Side::Leq, degree - 1)?;
    r.tables.push(block_table("block homology", &[("C", &u), ("geq", &geq), ("leq", &leq)]));
    r.verdict("connective part is perverse-connective", is_perverse(&geq.shift(-degree), pv, Side::Geq), None);
    r.verdict("remainder is perverse-coconnective", is_perverse(&leq.shift(1 - degree), pv, Side::Leq), None);
    let dual_ok = [Side::Geq, Side::Leq].iter().try_fold(true, |acc, &s| {
        Ok::<bool, CliError>(acc && perverse_truncate_via_duality(&u, pv, s, degree)? == perverse_truncate(&u, pv, s, degree)?)
    })?;
    r.verdict("duality-conjugated truncation agrees", dual_ok, None);
    let triple = perverse_truncation_triple(&u, pv, degree)?;
    r.verdict("fiber triple", triple.passed(), None);
    if let Complex::Cartier(cc) = c {
        let mut ok = true;
        for s in [Side::Geq, Side::Leq] {
            match perverse_truncate_cartier(cc, pv, s, degree) {
                Ok(t) => ok &= t.forget() == perverse_truncate(&u, pv, s, degree)?,
                Err(cartier_core::Error::PerversityRejected(_)) => ok = false,
                Err(e) => return Err(e.into()),
            }
        }
        r.verdict("Cartier truncation commutes with forget", ok, None);
    }
    Ok(r)
}

pub fn criterion_title(k: u8) -> &'static str {
    match k {
        1 => "abelian structure",
        2 => "Hom as an equalizer",
        3 => "free/forgetful adjunction",
        4 => "standard presentation",
        5 => "fiber sequence of Ext groups",
        6 => "t-structure",
        7 => "monadicity ingredients",
        8 => "Frobenius pushforward on complexes",
        9 => "perverse t-structure",
        10 => "deterministic reports",
        _ => "",
    }
}

pub fn suite(scope: Option<Scope>, opts: &Options) -> RunReport {
    let config = SuiteConfig { seed: opts.seed, max_degree: opts.max_degree, cutoff: opts.cutoff, scope };
    let s = run_suite(&config);
    let mut r = RunReport::new("suite", opts.seed);
    r.arg("scope", scope.map_or("all".to_string(), |s| s.to_string()));
    r.arg("max_degree", opts.max_degree);
    r.arg("kappa_cutoff", opts.cutoff);
    let mut crit = Table::new("acceptance criteria", &["criterion", "title", "checks", "verdict"]);
    for k in 1..=9u8 {
        if let Some(ok) = s.criterion(k) {
            let n = s.checks.iter().filter(|c| c.criterion == Some(k)).count();
            crit.push(vec![(k as usize).into(), criterion_title(k).into(), n.into(), if ok { "pass" } else { "FAIL" }.into()]);
        }
    }
    r.tables.push(crit);
    let mut checks = Table::new("checks", &["id", "criterion", "cases", "failed"]);
    let mut counts = Table::new("counts", &["id", "quantity", "value"]);
    for c in &s.checks {
        checks.push(vec![c.id.as_str().into(), c.criterion.map(|k| k as usize).into(), c.cases.into(), c.failed.into()]);
        for (k, v) in &c.counts {
            counts.push(vec![c.id.as_str().into(), k.as_str().into(), (*v).into()]);
        }
        r.verdict(c.id.clone(), c.passed, c.failures.first().cloned());
    }
    r.tables.push(checks);
    r.tables.push(counts);
    r
}
