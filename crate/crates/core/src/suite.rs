//! The verification suite: every invariant of the library, run on seeded
//! random and enumerated instances over the catalog.
//!
//! Checks are independent jobs with their own random stream, so they run in
//! parallel and the report does not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{ext_a, ext_a_dims, hom_a, AModule, FiniteAlgebra, GeneratorChoice};
use crate::cartier::{
    adjoint_swap, adjoint_swap_inverse, frobenius_pullback, hom_cart, CartierModule, FrobeniusModule,
    PullbackCartierModule,
};
use crate::catalog;
use crate::complexes::{chain_maps, truncation_triple, CartierComplex, ModuleComplex};
use crate::derived_checks::{verify_adjoint_transport, verify_les, verify_monadicity_ingredients, verify_pi_commutation};
use crate::error::Result;
use crate::free_monad::{
    adjunction_backward, adjunction_forward, counit, ext_cart_dims, standard_presentation, triangle_free_side,
    triangle_module_side, FiberComplex,
};
use crate::linalg::{Matrix, PrimeField};
use crate::oracle;
use crate::perverse::{
    check_fstar_perverse_texact, double_dual_comparison, dual_complex, matlis_dual, matlis_dual_map, perverse_truncate,
    perverse_truncate_cartier, perverse_truncate_via_duality, perverse_truncation_triple, shipped_perversities,
    Perversity, Side,
};
use crate::sample::{
    random_cartier, random_cartier_map, random_cartier_morphism, random_chain_map, random_complex, random_invertible,
    random_matrix, random_module, random_module_map, substream, SampleRng,
};

pub const DEFAULT_SEED: u64 = 20240917;

/// Library areas a check belongs to; `--scope` filters on these.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    LinalgFp,
    Algebra,
    Cartier,
    FreeMonad,
    Complexes,
    DerivedChecks,
    Perverse,
}

impl Scope {
    pub const ALL: [Scope; 7] = [
        Scope::LinalgFp,
        Scope::Algebra,
        Scope::Cartier,
        Scope::FreeMonad,
        Scope::Complexes,
        Scope::DerivedChecks,
        Scope::Perverse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scope::LinalgFp => "linalg_fp",
            Scope::Algebra => "algebra",
            Scope::Cartier => "cartier",
            Scope::FreeMonad => "free_monad",
            Scope::Complexes => "complexes",
            Scope::DerivedChecks => "derived_checks",
            Scope::Perverse => "perverse",
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        let alias = match s.as_str() {
            "linalg" => "linalg_fp",
            "derived" => "derived_checks",
            other => other,
        };
        Scope::ALL
            .into_iter()
            .find(|sc| sc.name() == alias)
            .ok_or_else(|| format!("unknown scope `{s}`; expected one of {}", Scope::ALL.map(Scope::name).join(", ")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub max_degree: usize,
    pub cutoff: usize,
    pub scope: Option<Scope>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, max_degree: 4, cutoff: 4, scope: None }
    }
}

/// The verdict of one check, possibly restricted to one algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub scope: Scope,
    pub algebra: Option<String>,
    /// Acceptance criterion this check contributes to, if any.
    pub criterion: Option<u8>,
    pub cases: usize,
    pub failed: usize,
    pub passed: bool,
    pub counts: BTreeMap<String, usize>,
    /// The first few failing cases.
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// `None` if no check of that criterion ran.
    pub fn criterion(&self, k: u8) -> Option<bool> {
        let mut it = self.checks.iter().filter(|c| c.criterion == Some(k)).peekable();
        it.peek()?;
        Some(it.all(|c| c.passed))
    }

    pub fn failing(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

const MAX_WITNESSES: usize = 5;

#[derive(Default)]
struct Tally {
    cases: usize,
    failed: usize,
    counts: BTreeMap<String, usize>,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_WITNESSES {
                self.failures.push(what());
            }
        }
    }

    fn count(&mut self, key: &str, n: usize) {
        *self.counts.entry(key.to_string()).or_default() += n;
    }
}

type AlgebraCheck = fn(&Arc<FiniteAlgebra>, &SuiteConfig, &mut SampleRng, &mut Tally) -> Result<()>;
type GlobalCheck = fn(&SuiteConfig, &mut SampleRng, &mut Tally) -> Result<()>;

#[derive(Clone, Copy)]
enum Body {
    PerAlgebra(AlgebraCheck, fn(&FiniteAlgebra) -> bool),
    Global(GlobalCheck),
}

#[derive(Clone, Copy)]
struct Entry {
    scope: Scope,
    name: &'static str,
    criterion: Option<u8>,
    body: Body,
}

fn every(_: &FiniteAlgebra) -> bool {
    true
}

fn over_f2(a: &FiniteAlgebra) -> bool {
    a.field().p() == 2
}

fn frobenius_bijective(a: &FiniteAlgebra) -> bool {
    a.frobenius_inverse().is_some()
}

fn reduced(a: &FiniteAlgebra) -> bool {
    a.nilradical().cols() == 0
}

fn entries() -> Vec<Entry> {
    use Body::*;
    use Scope::*;
    let e = |scope, name, criterion, body| Entry { scope, name, criterion, body };
    vec![
        e(LinalgFp, "rank_nullity_rref_solve", None, Global(linalg_properties)),
        e(Algebra, "twist_functorial", None, PerAlgebra(twist_functorial, every)),
        e(Algebra, "twist_exact", None, PerAlgebra(twist_exact, every)),
        e(Algebra, "ext0_is_hom", None, PerAlgebra(ext0_is_hom, every)),
        e(Algebra, "ext_resolution_independent", None, PerAlgebra(ext_resolution_independent, every)),
        e(Cartier, "abelian", Some(1), PerAlgebra(cartier_abelian, every)),
        e(Cartier, "equalizer_hom", Some(2), PerAlgebra(equalizer_hom, over_f2)),
        e(Cartier, "adjoint_swap", Some(9), PerAlgebra(adjoint_swap_round_trip, reduced)),
        e(FreeMonad, "adjunction", Some(3), PerAlgebra(adjunction, every)),
        e(FreeMonad, "adjunction_count", None, PerAlgebra(adjunction_count, over_f2)),
        e(FreeMonad, "presentation", Some(4), PerAlgebra(presentation, every)),
        e(FreeMonad, "free_t_exact", None, PerAlgebra(free_t_exact, every)),
        e(FreeMonad, "ext_cart_yoneda", Some(5), PerAlgebra(ext_cart_yoneda, over_f2)),
        e(FreeMonad, "ext_cart_choice_independent", None, PerAlgebra(ext_cart_choice, every)),
        e(Complexes, "t_structure", Some(6), PerAlgebra(t_structure, every)),
        e(Complexes, "cone_and_orthogonality", None, PerAlgebra(cone_and_orthogonality, every)),
        e(DerivedChecks, "les", Some(5), PerAlgebra(les, every)),
        e(DerivedChecks, "les_pinned", Some(5), Global(les_pinned)),
        e(DerivedChecks, "monadicity", Some(7), PerAlgebra(monadicity, every)),
        e(DerivedChecks, "pi_commutation", Some(8), PerAlgebra(pi_commutation, every)),
        e(DerivedChecks, "adjoint_transport", Some(8), PerAlgebra(adjoint_transport, frobenius_bijective)),
        e(Perverse, "zero_is_standard", Some(9), PerAlgebra(zero_is_standard, every)),
        e(Perverse, "fstar_t_exact", Some(9), PerAlgebra(fstar_t_exact, every)),
        e(Perverse, "cartier_forget", Some(9), PerAlgebra(cartier_forget, every)),
        e(Perverse, "triple", None, PerAlgebra(perverse_triple, every)),
        e(Perverse, "duality", None, PerAlgebra(duality, every)),
    ]
}

/// Runs every check in scope over the catalog.
pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    run_suite_on(config, &catalog::all())
}

/// Runs every check in scope over the given algebras.
pub fn run_suite_on(config: &SuiteConfig, algebras: &[FiniteAlgebra]) -> SuiteReport {
    let algebras: Vec<Arc<FiniteAlgebra>> = algebras.iter().cloned().map(Arc::new).collect();
    let mut jobs: Vec<(Entry, Option<Arc<FiniteAlgebra>>)> = Vec::new();
    for entry in entries().into_iter().filter(|e| config.scope.is_none_or(|s| s == e.scope)) {
        match entry.body {
            Body::Global(_) => jobs.push((entry, None)),
            Body::PerAlgebra(_, applies) => {
                for alg in algebras.iter().filter(|a| applies(a)) {
                    jobs.push((entry, Some(alg.clone())));
                }
            }
        }
    }
    let mut checks: Vec<CheckResult> = jobs.par_iter().map(|(entry, alg)| run_job(config, entry, alg.as_ref())).collect();
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    SuiteReport { config: config.clone(), checks }
}

fn run_job(config: &SuiteConfig, entry: &Entry, alg: Option<&Arc<FiniteAlgebra>>) -> CheckResult {
    let id = match alg {
        Some(a) => format!("{}/{}/{}", entry.scope, entry.name, a.name()),
        None => format!("{}/{}", entry.scope, entry.name),
    };
    let mut rng = substream(config.seed, &id);
    let mut tally = Tally::default();
    let outcome = match (entry.body, alg) {
        (Body::PerAlgebra(f, _), Some(a)) => f(a, config, &mut rng, &mut tally),
        (Body::Global(f), _) => f(config, &mut rng, &mut tally),
        (Body::PerAlgebra(..), None) => Ok(()),
    };
    if let Err(e) = outcome {
        tally.check(false, || format!("error: {e}"));
    }
    CheckResult {
        id,
        scope: entry.scope,
        algebra: alg.map(|a| a.name().to_string()),
        criterion: entry.criterion,
        cases: tally.cases,
        failed: tally.failed,
        passed: tally.failed == 0,
        counts: tally.counts,
        failures: tally.failures,
    }
}

// ---- linalg_fp ----

fn linalg_properties(_: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    for p in [2, 3] {
        let f = PrimeField::new(p)?;
        for _ in 0..150 {
            let (r, c) = (rng.gen_range(0..=8), rng.gen_range(0..=8));
            let m = random_matrix(f, r, c, rng);
            t.check(m.rank() + m.kernel_basis().cols() == c, || format!("rank-nullity over F_{p}: {m:?}"));
            let once = m.rref().reduced;
            t.check(once.rref().reduced == once, || format!("rref not idempotent over F_{p}: {m:?}"));
            let x = random_matrix(f, c, 1, rng);
            let b = &m * &x;
            let ok = matches!(m.solve(&b)?, Some(y) if &m * &y == b);
            t.check(ok, || format!("solve over F_{p}: {m:?}"));
        }
    }
    Ok(())
}

// ---- algebra ----

fn twist_functorial(alg: &Arc<FiniteAlgebra>, _: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    for _ in 0..30 {
        let (m, n, p) = (random_module(alg, 4, rng), random_module(alg, 4, rng), random_module(alg, 4, rng));
        let f = random_module_map(&m, &n, rng);
        let g = random_module_map(&n, &p, rng);
        let left = g.compose(&f)?.frobenius_twist();
        let right = g.frobenius_twist().compose(&f.frobenius_twist())?;
        t.check(left == right && m.frobenius_twist().dim() == m.dim(), || format!("twist of {m:?}"));
    }
    Ok(())
}

fn twist_exact(alg: &Arc<FiniteAlgebra>, _: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    for _ in 0..30 {
        let (m, n) = (random_module(alg, 4, rng), random_module(alg, 4, rng));
        let f = random_module_map(&m, &n, rng);
        let tw = f.frobenius_twist();
        t.check(tw.kernel().0 == f.kernel().0.frobenius_twist(), || format!("kernel of twist of {f:?}"));
        t.check(tw.cokernel().0 == f.cokernel().0.frobenius_twist(), || format!("cokernel of twist of {f:?}"));
        t.check(tw.image().0 == f.image().0.frobenius_twist(), || format!("image of twist of {f:?}"));
    }
    Ok(())
}

fn ext0_is_hom(alg: &Arc<FiniteAlgebra>, _: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    for _ in 0..30 {
        let (m, n) = (random_module(alg, 3, rng), random_module(alg, 3, rng));
        let e = ext_a(&m, &n, 0)?.dimension;
        let h = hom_a(&m, &n)?.len();
        t.check(e == h, || format!("Ext^0 = {e}, Hom = {h} for {m:?}, {n:?}"));
    }
    Ok(())
}

fn rebased(m: &AModule, rng: &mut SampleRng) -> Result<AModule> {
    let p = random_invertible(m.field(), m.dim(), rng);
    let inv = p.inverse().expect("invertible");
    AModule::new(m.algebra().clone(), m.dim(), m.actions().iter().map(|a| &(&p * a) * &inv).collect())
}

fn ext_resolution_independent(alg: &Arc<FiniteAlgebra>, cfg: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    for _ in 0..15 {
        let (m, n) = (random_module(alg, 3, rng), random_module(alg, 3, rng));
        let a = ext_a_dims(&m, &n, cfg.max_degree, GeneratorChoice::Minimal)?;
        let b = ext_a_dims(&rebased(&m, rng)?, &n, cfg.max_degree, GeneratorChoice::Minimal)?;
        t.check(a == b, || format!("Ext dims {a:?} vs {b:?} after change of basis of {m:?}"));
        if m.dim() <= 2 && alg.dim() <= 2 {
            let c = ext_a_dims(&m, &n, 2, GeneratorChoice::StandardBasis)?;
            t.check(a[..=2] == c[..], || format!("Ext dims {a:?} vs non-minimal {c:?} for {m:?}"));
            t.count("non_minimal_resolutions", 1);
        }
    }
    Ok(())
}

// ---- cartier ----

fn valid(m: &CartierModule) -> bool {
    CartierModule::new(m.module().clone(), m.kappa().clone()).is_ok()
}

fn cartier_abelian(alg: &Arc<FiniteAlgebra>, _: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    for _ in 0..200 {
        let f = random_cartier_morphism(alg, 4, rng);
        let (src, tgt) = (f.source().dim(), f.target().dim());
        let rank = f.matrix().rank();
        let (k, i) = f.kernel()?;
        let (q, p) = f.cokernel()?;
        let (im, j) = f.image()?;
        let (coim, _) = f.coimage()?;
        let cmp = f.coimage_to_image()?;
        let ok = valid(&k) && valid(&q) && valid(&im) && valid(&coim);
        t.check(ok, || format!("induced κ invalid for {f:?}"));
        let exact = k.dim() + rank == src
            && i.matrix().rank() == k.dim()
            && (f.matrix() * i.matrix()).is_zero()
            && p.matrix().rank() == q.dim()
            && (p.matrix() * f.matrix()).is_zero()
            && q.dim() + rank == tgt
            && j.matrix().rank() == im.dim()
            && im.dim() == rank;
        t.check(exact, || format!("kernel/cokernel/image of {f:?}"));
        t.check(cmp.inverse().is_some(), || format!("coimage -> image not invertible for {f:?}"));
        let uf = f.forget();
        let forget_ok = k.forget() == uf.kernel().0 && q.forget() == uf.cokernel().0 && im.forget() == uf.image().0;
        t.check(forget_ok, || format!("forget does not commute with kernel/cokernel/image for {f:?}"));
        t.check(f.inverse().is_some() == f.matrix().is_invertible(), || format!("conservativity for {f:?}"));
        let other = random_cartier(alg, 4, rng);
        let g = random_cartier_map(f.target(), &other, rng);
        let gf = g.compose(&f)?;
        t.check(gf.coimage_to_image()?.is_isomorphism(), || format!("coim -> im of a composite {gf:?}"));
        t.count("isomorphisms", usize::from(f.is_isomorphism()));
    }
    Ok(())
}

fn equalizer_hom(alg: &Arc<FiniteAlgebra>, _: &SuiteConfig, _: &mut SampleRng, t: &mut Tally) -> Result<()> {
    let modules = oracle::small_cartier_modules(alg, 2)?;
    t.count("classes", modules.len());
    for m in &modules {
        for n in &modules {
            let computed = hom_cart(m, n)?.len();
            let counted = oracle::hom_cart_dimension(m, n)?;
            t.check(computed == counted, || format!("hom_cart {computed} vs enumeration {counted}: {m:?} -> {n:?}"));
        }
    }
    Ok(())
}

fn adjoint_swap_round_trip(alg: &Arc<FiniteAlgebra>, _: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    for _ in 0..50 {
        let m = random_module(alg, 4, rng);
        let kappa = random_module_map(&frobenius_pullback(&m)?, &m, rng);
        let c = PullbackCartierModule::new(m.clone(), kappa.matrix().clone())?;
        let back = adjoint_swap_inverse(&adjoint_swap(&c)?)?;
        t.check(back == c, || format!("Cart -> Frob -> Cart moved {c:?}"));
        let tau = random_module_map(&m, &m.frobenius_twist(), rng);
        let fr = FrobeniusModule::new(m.clone(), tau.matrix().clone())?;
        let again = adjoint_swap(&adjoint_swap_inverse(&fr)?)?;
        t.check(again == fr, || format!("Frob -> Cart -> Frob moved {fr:?}"));
    }
    Ok(())
}

// ---- free_monad ----

fn adjunction(alg: &Arc<FiniteAlgebra>, cfg: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    for _ in 0..200 {
        let m = random_cartier(alg, 3, rng);
        let x = random_module(alg, 3, rng);
        let seed = random_module_map(&x, m.module(), rng);
        let h = adjunction_backward(&seed, &m)?;
        let round = adjunction_forward(&h) == seed && adjunction_backward(&adjunction_forward(&h), &m)? == h;
        t.check(round && h.is_cartier_linear(cfg.cutoff), || format!("adjunction round trip for {seed:?}"));
        let tri = triangle_module_side(&m, cfg.cutoff) && triangle_free_side(&x, cfg.cutoff);
        t.check(tri, || format!("triangle identities at {m:?}, {x:?}"));
        let eps = counit(&m);
        let ok = eps.component(0) == Matrix::identity(alg.field(), m.dim()) && eps.realize(cfg.cutoff).rank() == m.dim();
        t.check(ok, || format!("counit of {m:?}"));
    }
    Ok(())
}

fn adjunction_count(alg: &Arc<FiniteAlgebra>, _: &SuiteConfig, _: &mut SampleRng, t: &mut Tally) -> Result<()> {
    let modules = oracle::small_cartier_modules(alg, 2)?;
    let plain = oracle::small_cartier_modules(alg, 1)?;
    let xs: Vec<AModule> = [AModule::zero(alg), AModule::regular(alg)]
        .into_iter()
        .chain(plain.iter().map(|m| m.forget()))
        .collect();
    for m in &modules {
        for x in xs.iter().filter(|x| x.dim() * m.dim() <= 4) {
            let free = oracle::count_free_maps(x, m, 2)?;
            let direct = oracle::count_a_linear_maps(x, m.module())?;
            t.check(free == direct, || format!("{free} maps L(X) -> M vs {direct} maps X -> UM for {x:?}, {m:?}"));
        }
    }
    Ok(())
}

fn presentation(alg: &Arc<FiniteAlgebra>, cfg: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    for _ in 0..100 {
        let m = random_cartier(alg, 4, rng);
        let check = standard_presentation(&m).check(cfg.cutoff);
        t.check(check.passed(), || format!("{check:?} for {m:?}"));
    }
    Ok(())
}

fn free_t_exact(alg: &Arc<FiniteAlgebra>, cfg: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    for _ in 0..30 {
        let c: ModuleComplex = random_complex(alg, 4, 3, rng);
        let mut twisted = c.clone();
        for n in 0..=cfg.cutoff {
            for k in c.degrees() {
                let ok = twisted.homology(k)? == c.homology(k)?.frobenius_twist_power(n);
                t.check(ok, || format!("H_{k}(F^{n} C) differs from F^{n} H_{k}(C) for {c:?}"));
            }
            twisted = twisted.frobenius_twist();
        }
    }
    Ok(())
}

fn ext_cart_yoneda(alg: &Arc<FiniteAlgebra>, _: &SuiteConfig, _: &mut SampleRng, t: &mut Tally) -> Result<()> {
    let modules = oracle::small_cartier_modules(alg, 2)?;
    for m in &modules {
        for n in modules.iter().filter(|n| n.dim() + m.dim() <= 3) {
            let dims = ext_cart_dims(m, n, 1)?;
            let hom = hom_cart(m, n)?.len();
            let yoneda = oracle::yoneda_ext1(m, n)?;
            t.check(dims == [hom, yoneda], || format!("Ext_Cart {dims:?} vs hom {hom}, Yoneda {yoneda}: {m:?}, {n:?}"));
        }
    }
    Ok(())
}

fn ext_cart_choice(alg: &Arc<FiniteAlgebra>, cfg: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    for _ in 0..40 {
        let m = random_cartier(alg, 2, rng);
        let n = random_cartier(alg, 2, rng);
        let a = ext_cart_dims(&m, &n, cfg.max_degree)?;
        let p = random_invertible(alg.field(), m.dim(), rng);
        let inv = p.inverse().expect("invertible");
        let module = AModule::new(alg.clone(), m.dim(), m.module().actions().iter().map(|x| &(&p * x) * &inv).collect())?;
        let moved = CartierModule::new(module, &(&p * m.kappa()) * &inv)?;
        let b = ext_cart_dims(&moved, &n, cfg.max_degree)?;
        t.check(a == b, || format!("Ext_Cart {a:?} vs {b:?} after change of basis of {m:?}"));
        if alg.dim() <= 2 {
            let fib = FiberComplex::with_choice(&m, &n, 2, GeneratorChoice::StandardBasis)?;
            let c: Vec<usize> = (0..=1).map(|i| fib.cohomology_dim(i)).collect();
            t.check(a[..=1] == c[..], || format!("Ext_Cart {a:?} vs non-minimal {c:?} for {m:?}, {n:?}"));
        }
    }
    Ok(())
}

// ---- complexes ----

fn t_structure(alg: &Arc<FiniteAlgebra>, _: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    for _ in 0..100 {
        let c: CartierComplex = random_complex(alg, 4, 3, rng);
        let u = c.forget();
        for n in c.lowest() - 1..=c.highest() + 1 {
            let triple = truncation_triple(&c, n)?;
            t.check(triple.passed(), || format!("{triple:?} for {c:?}"));
            let geq = c.truncate_geq(n)?;
            let leq = c.truncate_leq(n)?;
            t.check(geq.forget() == u.truncate_geq(n)?, || format!("forget vs truncate_geq({n}) on {c:?}"));
            t.check(leq.forget() == u.truncate_leq(n)?, || format!("forget vs truncate_leq({n}) on {c:?}"));
            t.check(geq.truncate_geq(n)? == geq, || format!("truncate_geq({n}) not idempotent on {c:?}"));
            t.check(leq.truncate_leq(n)? == leq, || format!("truncate_leq({n}) not idempotent on {c:?}"));
        }
        for n in c.degrees() {
            t.check(c.homology(n)?.forget() == u.homology(n)?, || format!("forget vs H_{n} on {c:?}"));
        }
        let concentrated = c.homology_within(0, 0);
        let heart = c.heart_check()?;
        let ok = match &heart {
            Some(h) => concentrated && valid(h) && *h == c.homology(0)?,
            None => !concentrated,
        };
        t.check(ok, || format!("heart_check on {c:?}"));
        t.count("in_heart", usize::from(heart.is_some()));
    }
    Ok(())
}

fn cone_and_orthogonality(alg: &Arc<FiniteAlgebra>, _: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    for _ in 0..30 {
        let c: CartierComplex = random_complex(alg, 3, 3, rng);
        let d: CartierComplex = random_complex(alg, 3, 3, rng);
        let f = random_chain_map(&c, &d, rng);
        let seq = f.cone_sequence()?;
        t.check(seq.exact(), || format!("cone sequence of {f:?}"));
        let u = f.forget().cone_sequence()?;
        t.check(u.exact() && u.dims() == seq.dims(), || format!("forgotten cone sequence of {f:?}"));
        let (hi, lo) = (c.truncate_geq(0)?, d.truncate_leq(-1)?);
        for g in chain_maps(&hi, &lo)? {
            t.check(g.is_zero_on_homology(), || format!("nonzero on homology: {g:?}"));
            t.count("orthogonality_maps", 1);
        }
    }
    Ok(())
}

// ---- derived_checks ----

fn les(alg: &Arc<FiniteAlgebra>, cfg: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    for _ in 0..100 {
        let m = random_cartier(alg, 3, rng);
        let n = random_cartier(alg, 3, rng);
        let r = verify_les(&m, &n, cfg.max_degree)?;
        t.check(r.exact(), || format!("not exact {:?} for {m:?}, {n:?}", r.sequence.dims()));
        t.check(r.degree0_matches_hom, || format!("Ext^0 {:?} vs hom {} for {m:?}, {n:?}", r.ext_cart, r.hom_cart));
        if let Some(ok) = r.degree1_matches_yoneda() {
            t.check(ok, || format!("Ext^1 {:?} vs Yoneda {:?} for {m:?}, {n:?}", r.ext_cart, r.yoneda));
            t.count("yoneda_compared", 1);
        }
    }
    Ok(())
}

fn les_pinned(cfg: &SuiteConfig, _: &mut SampleRng, t: &mut Tally) -> Result<()> {
    let alg = Arc::new(catalog::dual_numbers(2));
    let residue = AModule::new(alg.clone(), 1, vec![Matrix::identity(alg.field(), 1), Matrix::zeros(alg.field(), 1, 1)])?;
    let k = CartierModule::new(residue, Matrix::zeros(alg.field(), 1, 1))?;
    let r = verify_les(&k, &k, cfg.max_degree)?;
    t.check(r.passed(), || format!("{r:?}"));
    t.check(r.ext_cart.get(1) == Some(&2) && r.yoneda == Some(2), || format!("pinned Ext^1: {r:?}"));
    t.count("ext1", r.ext_cart[1]);
    Ok(())
}

fn monadicity(alg: &Arc<FiniteAlgebra>, cfg: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    let r = verify_monadicity_ingredients(alg, 20, cfg.cutoff, rng)?;
    t.check(r.conservative && r.conservativity_witness, || format!("conservativity: {r:?}"));
    t.check(r.adjunction_inverse && r.triangles && r.adjunction_counts != Some(false), || format!("adjunction: {r:?}"));
    t.check(r.identity_pair && r.presentation_pair, || format!("split coequalizers: {r:?}"));
    Ok(())
}

fn pi_commutation(alg: &Arc<FiniteAlgebra>, _: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    for _ in 0..100 {
        let c: ModuleComplex = random_complex(alg, 4, 3, rng);
        let r = verify_pi_commutation(&c)?;
        t.check(r.passed(), || format!("{r:?} for {c:?}"));
    }
    Ok(())
}

fn adjoint_transport(alg: &Arc<FiniteAlgebra>, _: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    let r = verify_adjoint_transport(alg, 30, rng)?;
    t.check(r.passed(), || format!("{r:?}"));
    t.count("quasi_isomorphisms", r.quasi_isomorphisms_seen);
    Ok(())
}

// ---- perverse ----

fn zero_is_standard(alg: &Arc<FiniteAlgebra>, _: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    let zero = Perversity::zero(alg);
    for _ in 0..100 {
        let c: ModuleComplex = random_complex(alg, 4, 3, rng);
        for n in c.lowest() - 1..=c.highest() + 1 {
            let ok = perverse_truncate(&c, &zero, Side::Geq, n)? == c.truncate_geq(n)?
                && perverse_truncate(&c, &zero, Side::Leq, n)? == c.truncate_leq(n)?;
            t.check(ok, || format!("zero perversity at {n} on {c:?}"));
        }
    }
    Ok(())
}

fn fstar_t_exact(alg: &Arc<FiniteAlgebra>, _: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    let samples: Vec<ModuleComplex> = (0..20).map(|_| random_complex(alg, 4, 3, rng)).collect();
    for pv in shipped_perversities(alg) {
        let r = check_fstar_perverse_texact(alg, &pv, &samples)?;
        t.check(r.passed(), || format!("{r:?}"));
    }
    Ok(())
}

fn cartier_forget(alg: &Arc<FiniteAlgebra>, _: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    let pvs = shipped_perversities(alg);
    for _ in 0..30 {
        let c: CartierComplex = random_complex(alg, 4, 3, rng);
        let u = c.forget();
        for pv in &pvs {
            for side in [Side::Geq, Side::Leq] {
                for n in [-1, 0, 1] {
                    let ok = perverse_truncate_cartier(&c, pv, side, n)?.forget() == perverse_truncate(&u, pv, side, n)?;
                    t.check(ok, || format!("forget vs {side:?} truncation at {n} for {:?} on {c:?}", pv.values));
                }
            }
        }
    }
    Ok(())
}

fn perverse_triple(alg: &Arc<FiniteAlgebra>, _: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    let pvs = shipped_perversities(alg);
    for _ in 0..30 {
        let c: ModuleComplex = random_complex(alg, 4, 3, rng);
        for pv in &pvs {
            for n in [-1, 0, 1] {
                let r = perverse_truncation_triple(&c, pv, n)?;
                t.check(r.passed(), || format!("{r:?} for {:?} on {c:?}", pv.values));
            }
        }
    }
    Ok(())
}

fn duality(alg: &Arc<FiniteAlgebra>, _: &SuiteConfig, rng: &mut SampleRng, t: &mut Tally) -> Result<()> {
    for _ in 0..30 {
        let (m, n) = (random_module(alg, 4, rng), random_module(alg, 4, rng));
        let f = random_module_map(&m, &n, rng);
        let (ev_m, ev_n) = (double_dual_comparison(&m)?, double_dual_comparison(&n)?);
        let ddf = matlis_dual_map(&matlis_dual_map(&f));
        let natural = ev_m.is_isomorphism()
            && ev_n.is_isomorphism()
            && ddf.matrix() * ev_m.matrix() == ev_n.matrix() * f.matrix();
        t.check(natural, || format!("double dual comparison along {f:?}"));
        let df = matlis_dual_map(&f);
        let exact = df.kernel().0.dim() == f.cokernel().0.dim()
            && df.cokernel().0.dim() == f.kernel().0.dim()
            && matlis_dual(&m).dim() == m.dim();
        t.check(exact, || format!("duality not exact on {f:?}"));
    }
    let pvs = shipped_perversities(alg);
    for _ in 0..20 {
        let c: ModuleComplex = random_complex(alg, 4, 3, rng);
        t.check(dual_complex(&dual_complex(&c)?)? == c, || format!("D D C != C for {c:?}"));
        for pv in &pvs {
            for side in [Side::Geq, Side::Leq] {
                let ok = perverse_truncate_via_duality(&c, pv, side, 0)? == perverse_truncate(&c, pv, side, 0)?;
                t.check(ok, || format!("duality-conjugated {side:?} truncation for {:?} on {c:?}", pv.values));
            }
        }
    }
    Ok(())
}
