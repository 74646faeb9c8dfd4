//! `cuspgamma`: enumerate cuspidal parameters, compute finite and local gamma
//! factors by several methods, and run the verification suites.

mod output;

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use cuspgamma::arith::{checked_pow, lcm, prime_power};
use cuspgamma::characters::{enumerate_regular_orbits, AddChar, MultChar, RegularOrbit};
use cuspgamma::cuspidal::CuspidalSpec;
use cuspgamma::gamma_finite::{
    gamma_bessel_cached, gamma_closed, gamma_n_by_1, FiniteMethod, GammaInputs, GammaResult, TauParam,
};
use cuspgamma::gamma_local::{bridge_from_finite, gamma_local_closed, tau_param, verify_chain, LocalGamma};
use cuspgamma::level_zero::{base_change, pair_to_rep, TamePair};
use cuspgamma::verify::{run_suite, SizeClass, Suite, SuiteConfig, SuiteReport};
use cuspgamma::{FieldTower, TowerOptions};

use output::{cell, emit_csv, emit_json};

#[derive(Parser)]
#[command(
    name = "cuspgamma",
    version,
    about = "Rankin-Selberg gamma factors of cuspidal representations"
)]
struct Cli {
    /// Directory for tower and Bessel-function caches.
    #[arg(long, global = true, env = "CUSPGAMMA_CACHE")]
    cache_dir: Option<PathBuf>,
    /// Ignore the cache directory.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol_rel: f64,
    /// Largest field size `q^L` that may be built.
    #[arg(long, global = true, default_value_t = cuspgamma::fields::DEFAULT_FIELD_LIMIT)]
    max_field: u64,
    /// Largest enumeration (group elements, cosets) that may be walked.
    #[arg(long, global = true, default_value_t = cuspgamma::gln::DEFAULT_ENUM_LIMIT)]
    max_enum: u64,
    /// Additive character index `s`, meaning `ψ(x) = ζ_p^{Tr(g^{s-1} x)}`.
    #[arg(long, global = true, default_value_t = 1)]
    psi_shift: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    output: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// List Frobenius orbits of regular characters of `F_{q^n}^×`.
    Enumerate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: u64,
    },
    /// Compute a gamma factor by one or all methods.
    Gamma(GammaArgs),
    /// Recompute a local gamma factor through base change and induction.
    VerifyChain(ChainArgs),
    /// Unramified base change of a tame pair to the degree-`m` extension.
    BaseChange {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: u64,
        /// Any exponent in the orbit.
        #[arg(long)]
        orbit: u64,
        #[arg(long)]
        m: u32,
        /// Value at the uniformizer, `re,im`.
        #[arg(long, value_parser = parse_complex, default_value = "1,0")]
        scalar: Complex64,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, value_enum, default_value_t = SizeArg::Quick)]
        size_class: SizeArg,
    },
    /// Inspect, fill or clear the cache directory.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Args)]
struct GammaArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    pi_orbit: u64,
    #[arg(long, conflicts_with = "tau_char", required_unless_present = "tau_char")]
    tau_orbit: Option<u64>,
    /// Exponent of a character of `F_q^×` (only when `m = 1`).
    #[arg(long)]
    tau_char: Option<u64>,
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    method: MethodArg,
    /// Central value of `π` at the uniformizer (local kind), `re,im`.
    #[arg(long, value_parser = parse_complex, default_value = "1,0")]
    pi_scalar: Complex64,
    #[arg(long, value_parser = parse_complex, default_value = "1,0")]
    tau_scalar: Complex64,
}

#[derive(Args)]
struct ChainArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    pi_orbit: u64,
    #[arg(long)]
    tau_orbit: u64,
    #[arg(long, value_parser = parse_complex, default_value = "1,0")]
    pi_scalar: Complex64,
    #[arg(long, value_parser = parse_complex, default_value = "1,0")]
    tau_scalar: Complex64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Finite,
    Local,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Bessel,
    Closed,
    Nien,
    Bridge,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum SizeArg {
    Quick,
    Full,
}

#[derive(Clone, Copy)]
enum SuiteArg {
    All,
    One(Suite),
}

impl std::str::FromStr for SuiteArg {
    type Err = String;

    fn from_str(s: &str) -> Result<SuiteArg, String> {
        if s == "all" {
            return Ok(SuiteArg::All);
        }
        s.parse::<Suite>().map(SuiteArg::One).map_err(|e| e.to_string())
    }
}

#[derive(Subcommand)]
enum CacheAction {
    /// List cached towers and Bessel functions.
    List,
    /// Delete cached towers and Bessel functions.
    Clear,
    /// Compute and store every Bessel function needed for `n × m`, `m < n`.
    Warm {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: u64,
    },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}"));
    let z = Complex64::new(parse(re)?, parse(im)?);
    if !z.is_finite() || z.norm() == 0.0 {
        return Err("scalar must be finite and nonzero".into());
    }
    Ok(z)
}

enum CliError {
    Core(cuspgamma::Error),
    Input(String),
    Io(io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_resource_limit() => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(s) => write!(f, "{s}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<cuspgamma::Error> for CliError {
    fn from(e: cuspgamma::Error) -> CliError {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> CliError {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// Whether every check in a command passed.
enum Outcome {
    Ok,
    CheckFailed,
}

struct RunConfig {
    cache_dir: Option<PathBuf>,
    seed: u64,
    tol_rel: f64,
    max_field: u64,
    max_enum: u64,
    psi_shift: u64,
    output: Format,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> CliResult<RunConfig> {
        if cli.tol_rel.is_nan() || cli.tol_rel <= 0.0 {
            return Err(CliError::Input("--tol-rel must be positive".into()));
        }
        if cli.max_field == 0 || cli.max_enum == 0 {
            return Err(CliError::Input("limits must be positive".into()));
        }
        if cli.psi_shift == 0 {
            return Err(CliError::Input("--psi-shift starts at 1".into()));
        }
        Ok(RunConfig {
            cache_dir: if cli.no_cache { None } else { cli.cache_dir.clone() },
            seed: cli.seed,
            tol_rel: cli.tol_rel,
            max_field: cli.max_field,
            max_enum: cli.max_enum,
            psi_shift: cli.psi_shift,
            output: cli.output,
        })
    }

    fn cache(&self) -> Option<&Path> {
        self.cache_dir.as_deref()
    }

    fn tower(&self, q: u64, degree: u32) -> CliResult<FieldTower> {
        let (p, f) = prime_power(q).ok_or(cuspgamma::Error::NotPrimePower(q))?;
        let opts = TowerOptions {
            limit: self.max_field,
            modulus_rank: 0,
        };
        Ok(FieldTower::build_cached(p, f, degree, &opts, self.cache())?)
    }

    fn psi(&self, tower: &FieldTower) -> CliResult<AddChar> {
        let q = tower.q();
        if self.psi_shift > q - 1 {
            return Err(CliError::Input(format!("--psi-shift must lie in 1..={}", q - 1)));
        }
        let b = tower.pow(tower.subfield_generator(1)?, self.psi_shift as i64 - 1);
        Ok(AddChar::new(tower, 1, b)?)
    }

    fn suite_config(&self, size: SizeClass) -> SuiteConfig {
        SuiteConfig {
            size,
            seed: self.seed,
            tol_rel: self.tol_rel,
            field_limit: self.max_field,
            enum_limit: self.max_enum,
        }
    }

    fn require_json(&self, command: &str) -> CliResult<()> {
        match self.output {
            Format::Json => Ok(()),
            Format::Csv => Err(CliError::Input(format!("{command} has no CSV output"))),
        }
    }
}

fn check_q(q: u64) -> CliResult<()> {
    prime_power(q)
        .map(|_| ())
        .ok_or(CliError::Core(cuspgamma::Error::NotPrimePower(q)))
}

/// `q^n - 1`, refusing fields beyond the configured limit.
fn unit_count(cfg: &RunConfig, q: u64, n: u32) -> CliResult<u64> {
    if n == 0 {
        return Err(CliError::Input("degree must be at least 1".into()));
    }
    match checked_pow(q, n) {
        Some(size) if size <= cfg.max_field as u128 => Ok(size as u64 - 1),
        size => Err(CliError::Core(cuspgamma::Error::FieldTooLarge {
            size: size.unwrap_or(u128::MAX),
            limit: cfg.max_field,
        })),
    }
}

fn exponent_in_range(cfg: &RunConfig, q: u64, level: u32, k: u64, flag: &str) -> CliResult<()> {
    let units = unit_count(cfg, q, level)?;
    if k >= units {
        return Err(CliError::Input(format!(
            "{flag} {k} must be below q^{level} - 1 = {units}"
        )));
    }
    Ok(())
}

fn cuspidal(cfg: &RunConfig, q: u64, n: u32, k: u64, flag: &str) -> CliResult<CuspidalSpec> {
    exponent_in_range(cfg, q, n, k, flag)?;
    Ok(CuspidalSpec::from_exponent(q, n, k)?)
}

fn tame_pair(cfg: &RunConfig, q: u64, n: u32, k: u64, scalar: Complex64, flag: &str) -> CliResult<TamePair> {
    exponent_in_range(cfg, q, n, k, flag)?;
    Ok(TamePair::new(scalar, RegularOrbit::regular(q, n, k)?)?)
}

fn check_sizes(n: u32, m: u32) -> CliResult<()> {
    if m == 0 || n <= m {
        return Err(CliError::Core(cuspgamma::Error::SizeOrder { n, m }));
    }
    Ok(())
}

#[derive(Serialize)]
struct OrbitRow {
    canonical: u64,
    exponents: Vec<u64>,
}

#[derive(Serialize)]
struct EnumerateReport {
    n: u32,
    q: u64,
    count: usize,
    orbits: Vec<OrbitRow>,
}

fn cmd_enumerate(cfg: &RunConfig, n: u32, q: u64) -> CliResult<Outcome> {
    check_q(q)?;
    unit_count(cfg, q, n)?;
    let orbits: Vec<OrbitRow> = enumerate_regular_orbits(q, n)
        .into_iter()
        .map(|o| OrbitRow {
            canonical: o.canonical(),
            exponents: o.exponents().to_vec(),
        })
        .collect();
    match cfg.output {
        Format::Json => emit_json(
            "enumerate",
            &EnumerateReport {
                n,
                q,
                count: orbits.len(),
                orbits,
            },
        )?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = orbits
                .iter()
                .map(|o| {
                    let exps: Vec<String> = o.exponents.iter().map(u64::to_string).collect();
                    vec![n.to_string(), q.to_string(), o.canonical.to_string(), exps.join(" ")]
                })
                .collect();
            emit_csv(&["n", "q", "canonical", "exponents"], &rows)?;
        }
    }
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct MethodValue {
    method: String,
    value: Complex64,
    modulus: f64,
    expected_modulus: f64,
}

impl MethodValue {
    fn new(method: impl Into<String>, value: Complex64, expected_modulus: f64) -> MethodValue {
        MethodValue {
            method: method.into(),
            value,
            modulus: value.norm(),
            expected_modulus,
        }
    }

    fn finite(r: &GammaResult) -> MethodValue {
        MethodValue::new(r.method.as_str(), r.value, r.expected_modulus())
    }

    fn local(r: &LocalGamma) -> MethodValue {
        let name = match r.finite_method {
            Some(f) => format!("bridge/{}", f.as_str()),
            None => "closed_form".into(),
        };
        MethodValue::new(name, r.value, 1.0)
    }
}

#[derive(Serialize)]
struct PairDiff {
    a: String,
    b: String,
    rel_diff: f64,
}

#[derive(Serialize)]
struct GammaReport {
    kind: &'static str,
    inputs: GammaInputs,
    #[serde(skip_serializing_if = "Option::is_none")]
    scalars: Option<[Complex64; 2]>,
    tol_rel: f64,
    results: Vec<MethodValue>,
    pairwise: Vec<PairDiff>,
    agree: bool,
}

fn rel_diff(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

fn finite_methods(method: MethodArg, m: u32) -> CliResult<Vec<FiniteMethod>> {
    Ok(match method {
        MethodArg::Bessel => vec![FiniteMethod::BesselSum],
        MethodArg::Closed => vec![FiniteMethod::ClosedForm],
        MethodArg::Nien if m == 1 => vec![FiniteMethod::NienNBy1],
        MethodArg::Nien => return Err(CliError::Input("--method nien needs --m 1".into())),
        MethodArg::Bridge => return Err(CliError::Input("--method bridge applies to --kind local".into())),
        MethodArg::All if m == 1 => vec![
            FiniteMethod::BesselSum,
            FiniteMethod::ClosedForm,
            FiniteMethod::NienNBy1,
        ],
        MethodArg::All => vec![FiniteMethod::BesselSum, FiniteMethod::ClosedForm],
    })
}

fn finite_gamma(
    cfg: &RunConfig,
    tower: &FieldTower,
    pi: &CuspidalSpec,
    tau: &TauParam,
    psi: &AddChar,
    method: FiniteMethod,
) -> CliResult<GammaResult> {
    Ok(match method {
        FiniteMethod::BesselSum => gamma_bessel_cached(tower, pi, tau, psi, cfg.max_enum, cfg.cache())?,
        FiniteMethod::ClosedForm => gamma_closed(tower, pi, tau, psi)?,
        FiniteMethod::NienNBy1 => match tau {
            TauParam::Char(c) => gamma_n_by_1(tower, pi, c, psi)?,
            TauParam::Cusp(_) => return Err(CliError::Input("the n x 1 formula needs m = 1".into())),
        },
    })
}

fn tau_exponent(args: &GammaArgs) -> CliResult<u64> {
    match (args.tau_orbit, args.tau_char) {
        (Some(k), None) => Ok(k),
        (None, Some(k)) if args.m == 1 => Ok(k),
        (None, Some(_)) => Err(CliError::Input("--tau-char needs --m 1; use --tau-orbit".into())),
        _ => Err(CliError::Input("give exactly one of --tau-orbit, --tau-char".into())),
    }
}

fn cmd_gamma(cfg: &RunConfig, args: &GammaArgs) -> CliResult<Outcome> {
    let (n, m, q) = (args.n, args.m, args.q);
    check_q(q)?;
    check_sizes(n, m)?;
    let k_tau = tau_exponent(args)?;
    let big = lcm(n, m);
    unit_count(cfg, q, big)?;

    let (inputs, scalars, results) = match args.kind {
        Kind::Finite => {
            let pi = cuspidal(cfg, q, n, args.pi_orbit, "--pi-orbit")?;
            let tau = if m == 1 {
                exponent_in_range(cfg, q, 1, k_tau, "--tau-char")?;
                TauParam::Char(MultChar::new(q, 1, k_tau))
            } else {
                TauParam::Cusp(cuspidal(cfg, q, m, k_tau, "--tau-orbit")?)
            };
            let methods = finite_methods(args.method, m)?;
            let tower = cfg.tower(q, big)?;
            let psi = cfg.psi(&tower)?;
            let computed = methods
                .into_iter()
                .map(|meth| finite_gamma(cfg, &tower, &pi, &tau, &psi, meth))
                .collect::<CliResult<Vec<_>>>()?;
            let inputs = computed[0].inputs.clone();
            (
                inputs,
                None,
                computed.iter().map(MethodValue::finite).collect::<Vec<_>>(),
            )
        }
        Kind::Local => {
            let t_pi = tame_pair(cfg, q, n, args.pi_orbit, args.pi_scalar, "--pi-orbit")?;
            let t_tau = tame_pair(cfg, q, m, k_tau, args.tau_scalar, "--tau-orbit")?;
            let (pi, tau) = (pair_to_rep(&t_pi)?, pair_to_rep(&t_tau)?);
            let tower = cfg.tower(q, big)?;
            let psi = cfg.psi(&tower)?;
            let closed = gamma_local_closed(&tower, &pi, &tau, &psi)?;
            let bridge = |meth| -> CliResult<MethodValue> {
                let fin = finite_gamma(cfg, &tower, pi.cusp(), &tau_param(&tau), &psi, meth)?;
                Ok(MethodValue::local(&bridge_from_finite(&tower, &pi, &tau, &psi, &fin)?))
            };
            let mut results = Vec::new();
            match args.method {
                MethodArg::Closed => results.push(MethodValue::local(&closed)),
                MethodArg::Bridge => results.push(bridge(FiniteMethod::ClosedForm)?),
                MethodArg::Bessel => results.push(bridge(FiniteMethod::BesselSum)?),
                MethodArg::Nien if m == 1 => results.push(bridge(FiniteMethod::NienNBy1)?),
                MethodArg::Nien => return Err(CliError::Input("--method nien needs --m 1".into())),
                MethodArg::All => {
                    results.push(MethodValue::local(&closed));
                    results.push(bridge(FiniteMethod::ClosedForm)?);
                    results.push(bridge(FiniteMethod::BesselSum)?);
                    if m == 1 {
                        results.push(bridge(FiniteMethod::NienNBy1)?);
                    }
                    let chain = verify_chain(&tower, &t_pi, &t_tau, &psi, cfg.max_field, cfg.tol_rel)?;
                    results.push(MethodValue::new("chain", chain.chain_value, 1.0));
                }
            }
            (closed.inputs.clone(), Some([args.pi_scalar, args.tau_scalar]), results)
        }
    };

    let mut pairwise = Vec::new();
    for (i, a) in results.iter().enumerate() {
        for b in &results[i + 1..] {
            pairwise.push(PairDiff {
                a: a.method.clone(),
                b: b.method.clone(),
                rel_diff: rel_diff(a.value, b.value),
            });
        }
    }
    let agree = pairwise.iter().all(|d| d.rel_diff < cfg.tol_rel);
    match cfg.output {
        Format::Json => emit_json(
            "gamma",
            &GammaReport {
                kind: match args.kind {
                    Kind::Finite => "finite",
                    Kind::Local => "local",
                },
                inputs,
                scalars,
                tol_rel: cfg.tol_rel,
                results,
                pairwise,
                agree,
            },
        )?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| {
                    vec![
                        r.method.clone(),
                        cell(r.value.re),
                        cell(r.value.im),
                        cell(r.modulus),
                        cell(r.expected_modulus),
                    ]
                })
                .collect();
            emit_csv(&["method", "re", "im", "modulus", "expected_modulus"], &rows)?;
        }
    }
    Ok(if agree { Outcome::Ok } else { Outcome::CheckFailed })
}

fn cmd_chain(cfg: &RunConfig, args: &ChainArgs) -> CliResult<Outcome> {
    cfg.require_json("verify-chain")?;
    let (n, m, q) = (args.n, args.m, args.q);
    check_q(q)?;
    check_sizes(n, m)?;
    let big = lcm(n, m);
    unit_count(cfg, q, big)?;
    let t_pi = tame_pair(cfg, q, n, args.pi_orbit, args.pi_scalar, "--pi-orbit")?;
    let t_tau = tame_pair(cfg, q, m, args.tau_orbit, args.tau_scalar, "--tau-orbit")?;
    let tower = cfg.tower(q, big)?;
    let psi = cfg.psi(&tower)?;
    let report = verify_chain(&tower, &t_pi, &t_tau, &psi, cfg.max_field, cfg.tol_rel)?;
    emit_json("verify-chain", &report)?;
    Ok(if report.passed {
        Outcome::Ok
    } else {
        Outcome::CheckFailed
    })
}

#[derive(Serialize)]
struct BaseChangeReport {
    input: TamePair,
    m: u32,
    count: usize,
    all_regular: bool,
    pairs: Vec<TamePair>,
}

fn cmd_base_change(cfg: &RunConfig, n: u32, q: u64, orbit: u64, m: u32, scalar: Complex64) -> CliResult<Outcome> {
    cfg.require_json("base-change")?;
    check_q(q)?;
    if m == 0 {
        return Err(CliError::Input("--m must be at least 1".into()));
    }
    let t = tame_pair(cfg, q, n, orbit, scalar, "--orbit")?;
    let pairs = base_change(&t, m, cfg.max_field)?;
    let all_regular = pairs.iter().all(|p| p.orbit().is_regular());
    emit_json(
        "base-change",
        &BaseChangeReport {
            input: t,
            m,
            count: pairs.len(),
            all_regular,
            pairs,
        },
    )?;
    Ok(if all_regular { Outcome::Ok } else { Outcome::CheckFailed })
}

#[derive(Serialize)]
struct VerifyReport {
    size_class: SizeClass,
    seed: u64,
    passed: bool,
    suites: Vec<SuiteReport>,
}

fn cmd_verify(cfg: &RunConfig, suite: SuiteArg, size: SizeArg) -> CliResult<Outcome> {
    let size = match size {
        SizeArg::Quick => SizeClass::Quick,
        SizeArg::Full => SizeClass::Full,
    };
    let suites: Vec<Suite> = match suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::One(s) => vec![s],
    };
    let sc = cfg.suite_config(size);
    let reports = suites
        .into_iter()
        .map(|s| run_suite(s, &sc))
        .collect::<cuspgamma::Result<Vec<_>>>()?;
    let passed = reports.iter().all(|r| r.passed);
    match cfg.output {
        Format::Json => emit_json(
            "verify",
            &VerifyReport {
                size_class: size,
                seed: cfg.seed,
                passed,
                suites: reports,
            },
        )?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .flat_map(|r| {
                    r.cases.iter().map(move |c| {
                        vec![
                            r.suite.to_string(),
                            format!("\"{}\"", c.case.replace('"', "\"\"")),
                            c.passed.to_string(),
                            c.checks.to_string(),
                            cell(c.max_error),
                            cell(c.tolerance),
                        ]
                    })
                })
                .collect();
            emit_csv(&["suite", "case", "passed", "checks", "max_error", "tolerance"], &rows)?;
        }
    }
    Ok(if passed { Outcome::Ok } else { Outcome::CheckFailed })
}

#[derive(Serialize)]
struct CacheEntry {
    file: String,
    kind: &'static str,
    bytes: u64,
}

fn cache_kind(name: &str) -> Option<&'static str> {
    if name.ends_with(".tower") {
        Some("tower")
    } else if name.starts_with("bessel_") && name.ends_with(".json") {
        Some("bessel")
    } else {
        None
    }
}

fn cache_entries(dir: &Path) -> CliResult<Vec<CacheEntry>> {
    if !dir.exists() {
        return Ok(Vec::new());
    }
    let mut entries = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if let Some(kind) = cache_kind(&name) {
            entries.push(CacheEntry {
                file: name,
                kind,
                bytes: entry.metadata()?.len(),
            });
        }
    }
    entries.sort_by(|a, b| a.file.cmp(&b.file));
    Ok(entries)
}

#[derive(Serialize)]
struct CacheReport {
    action: &'static str,
    cache_dir: String,
    entries: Vec<CacheEntry>,
}

fn cmd_cache(cfg: &RunConfig, action: &CacheAction) -> CliResult<Outcome> {
    cfg.require_json("cache")?;
    let dir = cfg
        .cache()
        .ok_or_else(|| CliError::Input("cache commands need --cache-dir or CUSPGAMMA_CACHE".into()))?;
    let name = match action {
        CacheAction::List => "list",
        CacheAction::Clear => {
            for e in cache_entries(dir)? {
                fs::remove_file(dir.join(&e.file))?;
            }
            "clear"
        }
        CacheAction::Warm { n, q } => {
            warm(cfg, *n, *q)?;
            "warm"
        }
    };
    emit_json(
        "cache",
        &CacheReport {
            action: name,
            cache_dir: dir.display().to_string(),
            entries: cache_entries(dir)?,
        },
    )?;
    Ok(Outcome::Ok)
}

/// Runs the Bessel-sum gamma factor for every pair at size `n × m`, `m < n`,
/// which stores every Bessel function it touches.
fn warm(cfg: &RunConfig, n: u32, q: u64) -> CliResult<()> {
    check_q(q)?;
    check_sizes(n, 1)?;
    for m in 1..n {
        let big = lcm(n, m);
        unit_count(cfg, q, big)?;
        let tower = cfg.tower(q, big)?;
        let psi = cfg.psi(&tower)?;
        let taus: Vec<TauParam> = if m == 1 {
            (0..q - 1).map(|k| TauParam::Char(MultChar::new(q, 1, k))).collect()
        } else {
            enumerate_regular_orbits(q, m)
                .into_iter()
                .map(|o| CuspidalSpec::new(o).map(TauParam::Cusp))
                .collect::<cuspgamma::Result<_>>()?
        };
        for orbit in enumerate_regular_orbits(q, n) {
            let pi = CuspidalSpec::new(orbit)?;
            for tau in &taus {
                gamma_bessel_cached(&tower, &pi, tau, &psi, cfg.max_enum, cfg.cache())?;
            }
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Input("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    let cfg = RunConfig::from_cli(cli)?;
    match &cli.command {
        Command::Enumerate { n, q } => cmd_enumerate(&cfg, *n, *q),
        Command::Gamma(args) => cmd_gamma(&cfg, args),
        Command::VerifyChain(args) => cmd_chain(&cfg, args),
        Command::BaseChange { n, q, orbit, m, scalar } => cmd_base_change(&cfg, *n, *q, *orbit, *m, *scalar),
        Command::Verify { suite, size_class } => cmd_verify(&cfg, *suite, *size_class),
        Command::Cache { action } => cmd_cache(&cfg, action),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
