//! Invariant suites at two scales, shared by the command-line `verify`
//! command and the acceptance tests.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{checked_pow, gcd, lcm};
use crate::characters::{enumerate_regular_orbits, gauss_sum, AddChar, MultChar};
use crate::cuspidal::{char_value_from_class, BesselFunction, CuspidalSpec};
use crate::error::{Error, Result};
use crate::fields::{FieldTower, TowerOptions};
use crate::gamma_finite::{
    check_functional_equation, gamma_bessel, gamma_closed, gamma_n_by_1, FiniteMethod, GammaResult, TauParam,
};
use crate::gamma_local::{gamma_local_bridge, gamma_local_closed, verify_chain, xi_product};
use crate::gln::{enumerate_gl, gl_order, psi_n, random_invertible, random_unipotent, Classifier, MatFq};
use crate::level_zero::{base_change, count_twist_classes, LevelZeroRep, TamePair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Orthogonality,
    Gauss,
    Bessel,
    FunctionalEq,
    FiniteVsClosed,
    Nien,
    Chain,
    Xi,
    BaseChange,
    Determinism,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Orthogonality,
        Suite::Gauss,
        Suite::Bessel,
        Suite::FunctionalEq,
        Suite::FiniteVsClosed,
        Suite::Nien,
        Suite::Chain,
        Suite::Xi,
        Suite::BaseChange,
        Suite::Determinism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Orthogonality => "orthogonality",
            Suite::Gauss => "gauss",
            Suite::Bessel => "bessel",
            Suite::FunctionalEq => "functional-eq",
            Suite::FiniteVsClosed => "finite-vs-closed",
            Suite::Nien => "nien",
            Suite::Chain => "chain",
            Suite::Xi => "xi",
            Suite::BaseChange => "base-change",
            Suite::Determinism => "determinism",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Suite, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SizeClass {
    Quick,
    Full,
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub size: SizeClass,
    pub seed: u64,
    pub tol_rel: f64,
    pub field_limit: u64,
    pub enum_limit: u64,
}

impl SuiteConfig {
    pub fn new(size: SizeClass) -> SuiteConfig {
        SuiteConfig {
            size,
            seed: 0,
            tol_rel: 1e-6,
            field_limit: crate::fields::DEFAULT_FIELD_LIMIT,
            enum_limit: crate::gln::DEFAULT_ENUM_LIMIT,
        }
    }

    fn full(&self) -> bool {
        self.size == SizeClass::Full
    }

    fn tower(&self, q: u64, degree: u32) -> Result<FieldTower> {
        self.tower_ranked(q, degree, 0)
    }

    fn tower_ranked(&self, q: u64, degree: u32, rank: usize) -> Result<FieldTower> {
        let opts = TowerOptions {
            limit: self.field_limit,
            modulus_rank: rank,
        };
        FieldTower::for_q(q, degree, &opts)
    }

    /// Independent stream per case so results do not depend on scheduling.
    fn rng(&self, case: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(case);
        rng
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub case: String,
    pub passed: bool,
    pub checks: u64,
    pub max_error: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub size_class: SizeClass,
    pub seed: u64,
    pub passed: bool,
    pub cases: Vec<CaseReport>,
}

/// Accumulates the worst error over many checks against one tolerance.
struct Tally {
    case: String,
    tolerance: f64,
    checks: u64,
    max_error: f64,
    failed: bool,
    note: Option<String>,
}

impl Tally {
    fn new(case: impl Into<String>, tolerance: f64) -> Tally {
        Tally {
            case: case.into(),
            tolerance,
            checks: 0,
            max_error: 0.0,
            failed: false,
            note: None,
        }
    }

    fn error(&mut self, err: f64) {
        self.checks += 1;
        if err.is_nan() || err >= self.tolerance {
            self.failed = true;
        }
        if err.is_nan() {
            self.max_error = f64::NAN;
        } else if !self.max_error.is_nan() {
            self.max_error = self.max_error.max(err);
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed = true;
            self.note.get_or_insert_with(what);
        }
    }

    fn finish(self) -> CaseReport {
        CaseReport {
            case: self.case,
            passed: !self.failed,
            checks: self.checks,
            max_error: self.max_error,
            tolerance: self.tolerance,
            note: self.note,
        }
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn cusps(q: u64, n: u32) -> Vec<CuspidalSpec> {
    enumerate_regular_orbits(q, n)
        .into_iter()
        .map(|o| CuspidalSpec::new(o).expect("enumerated orbits are regular"))
        .collect()
}

/// Every `τ` of size `m`: all characters of `F_q^×` when `m = 1`.
fn taus(q: u64, m: u32) -> Vec<TauParam> {
    if m == 1 {
        (0..q - 1).map(|k| TauParam::Char(MultChar::new(q, 1, k))).collect()
    } else {
        cusps(q, m).into_iter().map(TauParam::Cusp).collect()
    }
}

fn level_zero(spec: CuspidalSpec) -> LevelZeroRep {
    LevelZeroRep::new(Complex64::new(1.0, 0.0), spec).expect("unit scalar")
}

fn tau_rep(tau: &TauParam) -> LevelZeroRep {
    match tau {
        TauParam::Char(c) => level_zero(CuspidalSpec::new(c.orbit()).expect("level one is regular")),
        TauParam::Cusp(s) => level_zero(s.clone()),
    }
}

/// Finite gamma tuples `(n, m, q)` exercised by the cross-method suites.
pub fn finite_tuples(size: SizeClass) -> Vec<(u32, u32, u64)> {
    match size {
        SizeClass::Quick => vec![(2, 1, 3), (3, 2, 2)],
        SizeClass::Full => vec![
            (2, 1, 2),
            (2, 1, 3),
            (2, 1, 5),
            (3, 1, 2),
            (3, 1, 3),
            (3, 2, 2),
            (3, 2, 3),
            (4, 2, 2),
            (4, 3, 2),
        ],
    }
}

fn group_sizes(size: SizeClass) -> Vec<(u32, u64)> {
    match size {
        SizeClass::Quick => vec![(2, 2), (2, 3), (3, 2)],
        SizeClass::Full => vec![(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3)],
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let cases = match suite {
        Suite::Orthogonality => orthogonality(cfg)?,
        Suite::Gauss => gauss(cfg)?,
        Suite::Bessel => bessel(cfg)?,
        Suite::FunctionalEq => functional_eq(cfg)?,
        Suite::FiniteVsClosed => finite_vs_closed(cfg)?,
        Suite::Nien => nien(cfg)?,
        Suite::Chain => chain(cfg)?,
        Suite::Xi => xi(cfg),
        Suite::BaseChange => base_change_suite(cfg)?,
        Suite::Determinism => determinism(cfg)?,
    };
    Ok(SuiteReport {
        suite,
        size_class: cfg.size,
        seed: cfg.seed,
        passed: cases.iter().all(|c| c.passed),
        cases,
    })
}

fn orthogonality(cfg: &SuiteConfig) -> Result<Vec<CaseReport>> {
    group_sizes(cfg.size)
        .into_par_iter()
        .map(|(n, q)| {
            let tower = cfg.tower(q, n)?;
            let classifier = Classifier::new(&tower, n as usize)?;
            let group = enumerate_gl(&tower, n as usize, cfg.enum_limit)?;
            let order = gl_order(q, n) as f64;
            let classes = group
                .par_iter()
                .map(|g| classifier.classify(g))
                .collect::<Result<Vec<_>>>()?;
            let specs = cusps(q, n);
            let tables: Vec<Vec<Complex64>> = specs
                .iter()
                .map(|s| {
                    let eta = s.parameter();
                    classes
                        .iter()
                        .map(|c| char_value_from_class(&tower, n, &eta, c))
                        .collect()
                })
                .collect();
            let identity = MatFq::identity(&tower, n as usize);
            let mut tally = Tally::new(format!("n={n} q={q}"), cfg.tol_rel);
            tally.check(group.len() as f64 == order, || {
                "group enumeration has the wrong size".into()
            });
            for (i, a) in tables.iter().enumerate() {
                for (j, b) in tables.iter().enumerate().skip(i) {
                    let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
                    let want = if i == j { order } else { 0.0 };
                    tally.error((ip - want).norm() / order);
                }
                let at_identity =
                    char_value_from_class(&tower, n, &specs[i].parameter(), &classifier.classify(&identity)?);
                tally.error((at_identity - specs[i].dimension() as f64).norm() / specs[i].dimension() as f64);
            }
            Ok(tally.finish())
        })
        .collect()
}

fn gauss(cfg: &SuiteConfig) -> Result<Vec<CaseReport>> {
    let qs: &[u64] = if cfg.full() { &[2, 3, 4, 5, 7, 8, 9] } else { &[2, 3, 4] };
    let max_field = if cfg.full() { 81 } else { 27 };
    let mut out = Vec::new();

    let mut trivial = Tally::new("G(1, psi) = -1", 1e-9);
    let mut modulus = Tally::new(format!("|G| = q^(N/2), q^N <= {max_field}"), 1e-9);
    for &q in qs {
        let mut level = 1;
        while q.pow(level) <= max_field {
            let tower = cfg.tower(q, level)?;
            let psi = AddChar::standard(&tower);
            let size = q.pow(level);
            trivial.error((gauss_sum(&tower, &MultChar::trivial(q, level), &psi) + 1.0).norm());
            let want = (size as f64).sqrt();
            for k in 1..size - 1 {
                let g = gauss_sum(&tower, &MultChar::new(q, level, k), &psi);
                modulus.error((g.norm() - want).abs() / want);
            }
            level += 1;
        }
    }
    out.push(trivial.finish());
    out.push(modulus.finish());

    let (max_n, max_q) = if cfg.full() { (4, 5) } else { (3, 3) };
    let mut hd = Tally::new(format!("Hasse-Davenport N <= {max_n}, q <= {max_q}"), 1e-8);
    for q in [2u64, 3, 4, 5].into_iter().filter(|&q| q <= max_q) {
        for big in 1..=max_n {
            let tower = cfg.tower(q, big)?;
            let psi = AddChar::standard(&tower);
            for k in 1..q - 1 {
                let beta = MultChar::new(q, 1, k);
                let lifted = gauss_sum(&tower, &beta.compose_norm(big)?, &psi);
                let base = gauss_sum(&tower, &beta, &psi);
                let want = -(-base).powu(big);
                hd.error(rel(lifted, want));
            }
        }
    }
    out.push(hd.finish());
    Ok(out)
}

fn bessel(cfg: &SuiteConfig) -> Result<Vec<CaseReport>> {
    let triples = if cfg.full() { 100 } else { 20 };
    group_sizes(cfg.size)
        .into_par_iter()
        .enumerate()
        .map(|(idx, (n, q))| {
            let tower = cfg.tower(q, n)?;
            let psi = AddChar::standard(&tower);
            let table = psi.table(&tower);
            let specs = cusps(q, n);
            let js = specs
                .into_iter()
                .map(|s| BesselFunction::new(&tower, s, psi, cfg.enum_limit))
                .collect::<Result<Vec<_>>>()?;
            let mut rng = cfg.rng(idx as u64);
            let mut tally = Tally::new(format!("n={n} q={q}"), 1e-9);
            let identity = MatFq::identity(&tower, n as usize);
            for j in &js {
                tally.error((j.value(&identity)? - 1.0).norm());
            }
            for t in 0..triples {
                let j = &js[t % js.len()];
                let g = random_invertible(&tower, n as usize, &mut rng);
                let u1 = random_unipotent(&tower, n as usize, &mut rng);
                let u2 = random_unipotent(&tower, n as usize, &mut rng);
                let lhs = j.value(&u1.mul(&tower, &g).mul(&tower, &u2))?;
                let rhs = psi_n(&tower, &u1, &table)? * psi_n(&tower, &u2, &table)? * j.value(&g)?;
                tally.error((lhs - rhs).norm());
            }
            Ok(tally.finish())
        })
        .collect()
}

fn functional_eq(cfg: &SuiteConfig) -> Result<Vec<CaseReport>> {
    let cases: Vec<(u32, u32, u64)> = if cfg.full() {
        [(2, 1), (3, 1), (3, 2)]
            .into_iter()
            .flat_map(|(n, m)| [2u64, 3].into_iter().map(move |q| (n, m, q)))
            .collect()
    } else {
        vec![(2, 1, 3), (3, 1, 2)]
    };
    let trials = if cfg.full() { 20 } else { 5 };
    cases
        .into_par_iter()
        .enumerate()
        .map(|(idx, (n, m, q))| {
            let tower = cfg.tower(q, lcm(n, m))?;
            let psi = AddChar::standard(&tower);
            let pis = cusps(q, n);
            let ts = taus(q, m);
            let mut rng = cfg.rng(idx as u64);
            let bound = 1e-6 * (q as f64).powi(n as i32);
            let mut tally = Tally::new(format!("n={n} m={m} q={q}"), bound);
            for k in 0..(n - m) as usize {
                if cfg.full() {
                    for pi in &pis {
                        for tau in &ts {
                            let r =
                                check_functional_equation(&tower, pi, tau, &psi, k, trials, &mut rng, cfg.enum_limit)?;
                            tally.error(r.max_discrepancy);
                        }
                    }
                } else {
                    let pi = &pis[rng.gen_range(0..pis.len())];
                    let tau = &ts[rng.gen_range(0..ts.len())];
                    let r = check_functional_equation(&tower, pi, tau, &psi, k, trials, &mut rng, cfg.enum_limit)?;
                    tally.error(r.max_discrepancy);
                }
            }
            Ok(tally.finish())
        })
        .collect()
}

fn finite_vs_closed(cfg: &SuiteConfig) -> Result<Vec<CaseReport>> {
    finite_tuples(cfg.size)
        .into_par_iter()
        .map(|(n, m, q)| {
            let tower = cfg.tower(q, lcm(n, m))?;
            let psi = AddChar::standard(&tower);
            let mut tally = Tally::new(format!("n={n} m={m} q={q}"), cfg.tol_rel);
            for pi in cusps(q, n) {
                for tau in taus(q, m) {
                    let b = gamma_bessel(&tower, &pi, &tau, &psi, cfg.enum_limit)?;
                    let c = gamma_closed(&tower, &pi, &tau, &psi)?;
                    tally.error(rel(b.value, c.value));
                    tally.error(b.modulus_error());
                }
            }
            Ok(tally.finish())
        })
        .collect()
}

fn nien(cfg: &SuiteConfig) -> Result<Vec<CaseReport>> {
    let cases: Vec<(u32, u64)> = if cfg.full() {
        vec![(2, 3), (2, 5), (3, 2), (3, 3), (4, 2)]
    } else {
        vec![(2, 3), (3, 2)]
    };
    cases
        .into_par_iter()
        .map(|(n, q)| {
            let tower = cfg.tower(q, n)?;
            let psi = AddChar::standard(&tower);
            let mut tally = Tally::new(format!("n={n} q={q}"), cfg.tol_rel);
            for pi in cusps(q, n) {
                for k in 0..q - 1 {
                    let tau = MultChar::new(q, 1, k);
                    let b = gamma_bessel(&tower, &pi, &TauParam::Char(tau), &psi, cfg.enum_limit)?;
                    let c = gamma_n_by_1(&tower, &pi, &tau, &psi)?;
                    tally.error(rel(b.value, c.value));
                }
            }
            Ok(tally.finish())
        })
        .collect()
}

fn chain(cfg: &SuiteConfig) -> Result<Vec<CaseReport>> {
    finite_tuples(cfg.size)
        .into_par_iter()
        .map(|(n, m, q)| {
            let tower = cfg.tower(q, lcm(n, m))?;
            let psi = AddChar::standard(&tower);
            let mut tally = Tally::new(format!("n={n} m={m} q={q}"), cfg.tol_rel);
            for pi in cusps(q, n) {
                let rep_pi = level_zero(pi);
                for tau in taus(q, m) {
                    let rep_tau = tau_rep(&tau);
                    let closed = gamma_local_closed(&tower, &rep_pi, &rep_tau, &psi)?;
                    tally.error(closed.modulus_error());
                    for method in [FiniteMethod::ClosedForm, FiniteMethod::BesselSum] {
                        let bridge = gamma_local_bridge(&tower, &rep_pi, &rep_tau, &psi, method, cfg.enum_limit)?;
                        tally.error(rel(bridge.value, closed.value));
                        tally.error(bridge.modulus_error());
                    }
                    let t_pi = TamePair::new(rep_pi.scalar(), rep_pi.cusp().orbit().clone())?;
                    let t_tau = TamePair::new(rep_tau.scalar(), rep_tau.cusp().orbit().clone())?;
                    let report = verify_chain(&tower, &t_pi, &t_tau, &psi, cfg.field_limit, cfg.tol_rel)?;
                    tally.error(report.discrepancy);
                }
            }
            Ok(tally.finish())
        })
        .collect()
}

fn xi(cfg: &SuiteConfig) -> Vec<CaseReport> {
    let (qs, max_m): (&[u64], u32) = if cfg.full() { (&[2, 3, 5], 8) } else { (&[2, 3], 4) };
    qs.iter()
        .enumerate()
        .map(|(idx, &q)| {
            let mut rng = cfg.rng(idx as u64);
            let mut tally = Tally::new(format!("q={q} m<={max_m}"), 1e-9);
            for m in 1..=max_m {
                tally.error(xi_product(q, m, 1e-9, &mut rng).max_rel_error);
            }
            tally.finish()
        })
        .collect()
}

fn base_change_suite(cfg: &SuiteConfig) -> Result<Vec<CaseReport>> {
    let (qs, max): (&[u64], u32) = if cfg.full() { (&[2, 3], 4) } else { (&[2], 3) };
    let mut out = Vec::new();
    for &q in qs {
        let mut tally = Tally::new(format!("q={q} n,m<={max}"), 0.5);
        for n in 1..=max {
            for orbit in enumerate_regular_orbits(q, n) {
                let t = TamePair::new(Complex64::new(1.0, 0.0), orbit.clone())?;
                for m in 1..=max {
                    let pairs = base_change(&t, m, cfg.field_limit)?;
                    let d = gcd(n, m);
                    tally.check(pairs.len() as u32 == d, || format!("count for n={n} m={m}"));
                    tally.check(pairs.len() == count_twist_classes(&t, m), || {
                        format!("twist classes n={n} m={m}")
                    });
                    for p in &pairs {
                        tally.check(p.orbit().is_regular() && p.degree() == n / d, || {
                            format!("regularity n={n} m={m}")
                        });
                    }
                    if n == m {
                        let mut got: Vec<u64> = pairs.iter().map(|p| p.orbit().canonical()).collect();
                        got.sort_unstable();
                        tally.check(got == orbit.exponents(), || format!("n=m={n} characters"));
                    }
                }
            }
        }
        out.push(tally.finish());
    }

    let mut tally = Tally::new("transitivity (m1,m2) in {(2,3),(3,2)}", 1e-9);
    for &q in qs {
        for (m1, m2) in [(2u32, 3u32), (3, 2)] {
            for n in 1..=max {
                if checked_pow(q, n * m1 * m2).is_none_or(|s| s > cfg.field_limit as u128) {
                    continue;
                }
                for orbit in enumerate_regular_orbits(q, n) {
                    let t = TamePair::new(Complex64::from_polar(1.0, 0.7), orbit)?;
                    let mut direct = base_change(&t, m1 * m2, cfg.field_limit)?;
                    let mut staged = Vec::new();
                    for p in base_change(&t, m1, cfg.field_limit)? {
                        staged.extend(base_change(&p, m2, cfg.field_limit)?);
                    }
                    direct.sort_by(|a, b| a.orbit().cmp(b.orbit()));
                    staged.sort_by(|a, b| a.orbit().cmp(b.orbit()));
                    tally.check(direct.len() == staged.len(), || format!("count q={q} n={n}"));
                    for (a, b) in direct.iter().zip(&staged) {
                        tally.check(a.orbit() == b.orbit(), || format!("orbits q={q} n={n} ({m1},{m2})"));
                        tally.error((a.scalar() - b.scalar()).norm());
                    }
                }
            }
        }
    }
    out.push(tally.finish());
    Ok(out)
}

/// Relabels `(π, τ)` from the canonical generator to a tower built from a
/// different primitive polynomial.
fn relabel_pair(r: u64, pi: &CuspidalSpec, tau: &TauParam) -> (CuspidalSpec, TauParam) {
    let pi2 = CuspidalSpec::new(pi.orbit().relabel(r)).expect("relabeling preserves regularity");
    let tau2 = match tau {
        TauParam::Char(c) => TauParam::Char(c.relabel(r)),
        TauParam::Cusp(s) => TauParam::Cusp(CuspidalSpec::new(s.orbit().relabel(r)).expect("regular")),
    };
    (pi2, tau2)
}

/// Smallest multiple of `degree` whose ambient field admits a second
/// primitive polynomial.
fn two_model_degree(cfg: &SuiteConfig, q: u64, degree: u32) -> Result<(FieldTower, FieldTower)> {
    let mut d = degree;
    loop {
        let a = cfg.tower(q, d)?;
        match cfg.tower_ranked(q, d, 1) {
            Ok(b) => return Ok((a, b)),
            Err(Error::NoPrimitivePolynomial) => d += degree,
            Err(e) => return Err(e),
        }
    }
}

fn determinism(cfg: &SuiteConfig) -> Result<Vec<CaseReport>> {
    finite_tuples(cfg.size)
        .into_par_iter()
        .map(|(n, m, q)| {
            let (a, b) = two_model_degree(cfg, q, lcm(n, m))?;
            let r = b.relabel_log(&a)?;
            let (psi_a, psi_b) = (AddChar::standard(&a), AddChar::standard(&b));
            let mut tally = Tally::new(format!("n={n} m={m} q={q} L={}", a.degree()), 1e-9);
            for pi in cusps(q, n) {
                for tau in taus(q, m) {
                    let (pi_b, tau_b) = relabel_pair(r, &pi, &tau);
                    let compare = |x: GammaResult, y: GammaResult| rel(x.value, y.value);
                    tally.error(compare(
                        gamma_closed(&a, &pi, &tau, &psi_a)?,
                        gamma_closed(&b, &pi_b, &tau_b, &psi_b)?,
                    ));
                    tally.error(compare(
                        gamma_bessel(&a, &pi, &tau, &psi_a, cfg.enum_limit)?,
                        gamma_bessel(&b, &pi_b, &tau_b, &psi_b, cfg.enum_limit)?,
                    ));
                }
            }
            tally.note = Some(format!("moduli {:?} vs {:?}", a.modulus(), b.modulus()));
            Ok(tally.finish())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suites_pass() {
        let cfg = SuiteConfig::new(SizeClass::Quick);
        for suite in Suite::ALL {
            let report = run_suite(suite, &cfg).unwrap();
            assert!(report.passed, "{suite}: {:?}", report.cases);
            assert!(!report.cases.is_empty());
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = SuiteConfig::new(SizeClass::Quick);
        let a = serde_json::to_string(&run_suite(Suite::Bessel, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(Suite::Bessel, &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
