//! Rankin–Selberg gamma factors of cuspidal pairs over `F_q`: the Bessel-sum
//! definition, the Gauss-sum product formula, the `n × 1` formula, and a
//! checker for the defining functional equation.

use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{checked_pow, gcd, lcm};
use crate::characters::{gauss_sum, AddChar, MultChar};
use crate::cuspidal::{shift_index, BesselFunction, CuspidalSpec};
use crate::error::{Error, Result};
use crate::fields::{FieldTower, FqElem};
use crate::gln::{coset_reps, random_invertible, MatFq};

/// The `GL_m` side: a character of `F_q^×` when `m = 1`, else a cuspidal
/// representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauParam {
    Char(MultChar),
    Cusp(CuspidalSpec),
}

impl TauParam {
    pub fn m(&self) -> u32 {
        match self {
            TauParam::Char(_) => 1,
            TauParam::Cusp(c) => c.n(),
        }
    }

    /// `η_τ` as a character of `F_{q^m}^×`.
    pub fn parameter(&self) -> MultChar {
        match self {
            TauParam::Char(c) => *c,
            TauParam::Cusp(c) => c.parameter(),
        }
    }

    pub fn labels(&self) -> Vec<u64> {
        match self {
            TauParam::Char(c) => vec![c.exponent()],
            TauParam::Cusp(c) => c.orbit().exponents().to_vec(),
        }
    }

    /// `η_τ(-1)`, which is `±1`.
    pub fn sign_at_minus_one(&self, tower: &FieldTower) -> Result<f64> {
        Ok(self.parameter().eval(tower, tower.from_int(-1))?.re.round())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiniteMethod {
    BesselSum,
    ClosedForm,
    NienNBy1,
}

impl FiniteMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            FiniteMethod::BesselSum => "bessel_sum",
            FiniteMethod::ClosedForm => "closed_form",
            FiniteMethod::NienNBy1 => "nien_n_by_1",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaInputs {
    pub n: u32,
    pub m: u32,
    pub q: u64,
    pub pi_orbit: Vec<u64>,
    pub tau_orbit: Vec<u64>,
    pub psi_shift: u64,
}

impl GammaInputs {
    fn new(tower: &FieldTower, pi: &CuspidalSpec, tau: &TauParam, psi: &AddChar) -> GammaInputs {
        GammaInputs {
            n: pi.n(),
            m: tau.m(),
            q: tower.q(),
            pi_orbit: pi.orbit().exponents().to_vec(),
            tau_orbit: tau.labels(),
            psi_shift: shift_index(tower, psi),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaResult {
    pub value: Complex64,
    pub method: FiniteMethod,
    pub inputs: GammaInputs,
}

impl GammaResult {
    /// `q^{m(m+1-n)/2}`.
    pub fn expected_modulus(&self) -> f64 {
        finite_modulus(self.inputs.q, self.inputs.n, self.inputs.m)
    }

    pub fn modulus_error(&self) -> f64 {
        let e = self.expected_modulus();
        (self.value.norm() - e).abs() / e
    }
}

pub fn finite_modulus(q: u64, n: u32, m: u32) -> f64 {
    (q as f64).powf(m as f64 * (m as f64 + 1.0 - n as f64) / 2.0)
}

fn check_order(n: u32, m: u32) -> Result<()> {
    if n <= m || m == 0 {
        return Err(Error::SizeOrder { n, m });
    }
    Ok(())
}

fn check_level(tower: &FieldTower, level: u32) -> Result<()> {
    if tower.supports(level) {
        Ok(())
    } else {
        Err(Error::BadDivisor {
            inner: level,
            outer: tower.degree(),
        })
    }
}

fn sign(e: i64) -> f64 {
    if e.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `∏_{i=start}^{start+(n,m)-1} G(η_π^{q^i}∘N_{[n,m]:n} · η_τ∘N_{[n,m]:m}, φ)`.
pub fn gauss_product(
    tower: &FieldTower,
    eta_pi: &MultChar,
    eta_tau: &MultChar,
    psi: &AddChar,
    start: u32,
) -> Result<Complex64> {
    let (n, m) = (eta_pi.level(), eta_tau.level());
    let big = lcm(n, m);
    check_level(tower, big)?;
    let tau_part = eta_tau.compose_norm(big)?;
    let mut prod = Complex64::new(1.0, 0.0);
    for i in start..start + gcd(n, m) {
        let beta = eta_pi.frobenius(i as i64).compose_norm(big)?.mul(&tau_part)?;
        prod *= gauss_sum(tower, &beta, psi);
    }
    Ok(prod)
}

/// `(-1)^{nm-(n,m)} η_τ(-1)^{n-1} q^{-mn+(m²+m)/2} ∏_i G(η_π^{q^i}∘N · η_τ∘N, φ)`.
pub fn gamma_closed(tower: &FieldTower, pi: &CuspidalSpec, tau: &TauParam, psi: &AddChar) -> Result<GammaResult> {
    let (n, m) = (pi.n(), tau.m());
    check_order(n, m)?;
    let prod = gauss_product(tower, &pi.parameter(), &tau.parameter(), psi, 0)?;
    let (ni, mi) = (n as i64, m as i64);
    let sgn = sign(ni * mi - gcd(n, m) as i64) * tau.sign_at_minus_one(tower)?.powi(n as i32 - 1);
    let scale = (tower.q() as f64).powf(-(ni * mi) as f64 + (mi * mi + mi) as f64 / 2.0);
    Ok(GammaResult {
        value: prod * (sgn * scale),
        method: FiniteMethod::ClosedForm,
        inputs: GammaInputs::new(tower, pi, tau, psi),
    })
}

/// `(-q^{-1} τ(-1))^{n-1} G(η_π · τ∘N_{n:1}, φ)`.
pub fn gamma_n_by_1(tower: &FieldTower, pi: &CuspidalSpec, tau: &MultChar, psi: &AddChar) -> Result<GammaResult> {
    let n = pi.n();
    if tau.level() != 1 {
        return Err(Error::Shape("character must live on F_q^×".into()));
    }
    check_order(n, 1)?;
    check_level(tower, n)?;
    let beta = pi.parameter().mul(&tau.compose_norm(n)?)?;
    let g = gauss_sum(tower, &beta, psi);
    let tau_minus_one = tau.eval(tower, tower.from_int(-1))?.re.round();
    let factor = -tau_minus_one / tower.q() as f64;
    Ok(GammaResult {
        value: g * factor.powi(n as i32 - 1),
        method: FiniteMethod::NienNBy1,
        inputs: GammaInputs::new(tower, pi, &TauParam::Char(*tau), psi),
    })
}

/// Whittaker function on the `GL_m` side used by the Bessel-sum formula.
pub enum TauWhittaker<'t> {
    Char(MultChar),
    Bessel(BesselFunction<'t>),
}

impl<'t> TauWhittaker<'t> {
    /// `τ` itself for a character, else `J_{τ,ψ^{-1}}`.
    pub fn new(tower: &'t FieldTower, tau: &TauParam, psi: &AddChar, limit: u64) -> Result<TauWhittaker<'t>> {
        Ok(match tau {
            TauParam::Char(c) => TauWhittaker::Char(*c),
            TauParam::Cusp(spec) => {
                TauWhittaker::Bessel(BesselFunction::new(tower, spec.clone(), psi.inverse(tower), limit)?)
            }
        })
    }

    pub fn m(&self) -> usize {
        match self {
            TauWhittaker::Char(_) => 1,
            TauWhittaker::Bessel(j) => j.spec().n() as usize,
        }
    }

    pub fn value(&self, tower: &FieldTower, g: &MatFq) -> Result<Complex64> {
        match self {
            TauWhittaker::Char(c) => {
                if g.size() != 1 {
                    return Err(Error::Shape("character side expects 1x1 matrices".into()));
                }
                let x = g.get(0, 0);
                if x.is_zero() {
                    return Err(Error::SingularMatrix);
                }
                c.eval(tower, x)
            }
            TauWhittaker::Bessel(j) => j.value(g),
        }
    }
}

/// `[[0, I_{n-m}], [g, 0]]`.
pub fn gamma_embedding(tower: &FieldTower, n: usize, g: &MatFq) -> MatFq {
    let m = g.size();
    let mut out = MatFq::zeros(n);
    for i in 0..n - m {
        out.set(i, m + i, tower.one());
    }
    for i in 0..m {
        for j in 0..m {
            out.set(n - m + i, j, g.get(i, j));
        }
    }
    out
}

/// `Σ_{g ∈ U_m\GL_m} J_π([[0, I],[g, 0]]) · W_τ(g)` over the given coset
/// representatives. Terms are computed in parallel and summed in order.
pub fn bessel_sum(jpi: &BesselFunction, jtau: &TauWhittaker, cosets: &[MatFq]) -> Result<Complex64> {
    let tower = jpi.tower();
    let n = jpi.spec().n() as usize;
    let terms = cosets
        .par_iter()
        .map(|g| Ok(jpi.value(&gamma_embedding(tower, n, g))? * jtau.value(tower, g)?))
        .collect::<Result<Vec<Complex64>>>()?;
    Ok(terms.into_iter().sum())
}

/// The defining Bessel-sum formula for `γ(π × τ, ψ)`.
pub fn gamma_bessel(
    tower: &FieldTower,
    pi: &CuspidalSpec,
    tau: &TauParam,
    psi: &AddChar,
    limit: u64,
) -> Result<GammaResult> {
    gamma_bessel_cached(tower, pi, tau, psi, limit, None)
}

/// [`gamma_bessel`] with the Bessel functions of both sides read from and
/// written back to `cache_dir`.
pub fn gamma_bessel_cached(
    tower: &FieldTower,
    pi: &CuspidalSpec,
    tau: &TauParam,
    psi: &AddChar,
    limit: u64,
    cache_dir: Option<&Path>,
) -> Result<GammaResult> {
    let (n, m) = (pi.n(), tau.m());
    check_order(n, m)?;
    check_level(tower, n)?;
    let jpi = BesselFunction::new(tower, pi.clone(), *psi, limit)?;
    let jtau = TauWhittaker::new(tower, tau, psi, limit)?;
    if let Some(dir) = cache_dir {
        jpi.load_from_dir(dir)?;
        if let TauWhittaker::Bessel(j) = &jtau {
            j.load_from_dir(dir)?;
        }
    }
    let cosets = coset_reps(tower, m as usize, limit)?;
    let value = bessel_sum(&jpi, &jtau, &cosets)?;
    if let Some(dir) = cache_dir {
        jpi.save_to_dir(dir)?;
        if let TauWhittaker::Bessel(j) = &jtau {
            j.save_to_dir(dir)?;
        }
    }
    Ok(GammaResult {
        value,
        method: FiniteMethod::BesselSum,
        inputs: GammaInputs::new(tower, pi, tau, psi),
    })
}

/// Both sums of the functional equation for one pair of right translates,
/// `(Σ Σ_x W_π(..) W_τ(g), Σ Σ_y W_π(..) W_τ(g))`; the equation reads
/// `γ q^{km} · lhs = rhs`.
pub fn functional_equation_sides(
    jpi: &BesselFunction,
    jtau: &TauWhittaker,
    cosets: &[MatFq],
    k: usize,
    h_pi: &MatFq,
    h_tau: &MatFq,
    limit: u64,
) -> Result<(Complex64, Complex64)> {
    let tower = jpi.tower();
    let n = jpi.spec().n() as usize;
    let m = jtau.m();
    if k + m >= n {
        return Err(Error::BadK {
            k: k as u32,
            max: (n - m - 1) as u32,
        });
    }
    let xs = all_blocks(tower, (n - m - 1 - k) * m, limit)?;
    let ys = all_blocks(tower, m * k, limit)?;
    let w_pi = |x: &MatFq| jpi.value(&x.mul(tower, h_pi));
    let w_tau = |g: &MatFq| jtau.value(tower, &g.mul(tower, h_tau));

    let per_coset = cosets
        .par_iter()
        .map(|g| {
            let wt = w_tau(g)?;
            let mut lhs = Complex64::new(0.0, 0.0);
            for x in &xs {
                lhs += w_pi(&lhs_matrix(tower, n, k, g, x))?;
            }
            let mut rhs = Complex64::new(0.0, 0.0);
            for y in &ys {
                rhs += w_pi(&rhs_matrix(tower, n, k, g, y))?;
            }
            Ok((lhs * wt, rhs * wt))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_coset
        .into_iter()
        .fold((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)), |a, b| {
            (a.0 + b.0, a.1 + b.1)
        }))
}

/// `[[g,0,0],[x,I_{n-m-1-k},0],[0,0,I_{k+1}]]`, `x` given row-major.
fn lhs_matrix(tower: &FieldTower, n: usize, k: usize, g: &MatFq, x: &[FqElem]) -> MatFq {
    let m = g.size();
    let mut out = MatFq::identity(tower, n);
    for i in 0..m {
        for j in 0..m {
            out.set(i, j, g.get(i, j));
        }
    }
    for i in 0..n - m - 1 - k {
        for j in 0..m {
            out.set(m + i, j, x[i * m + j]);
        }
    }
    out
}

/// `[[0,I_{n-m-k},0],[0,0,I_k],[g,0,y]]`, `y` given row-major.
fn rhs_matrix(tower: &FieldTower, n: usize, k: usize, g: &MatFq, y: &[FqElem]) -> MatFq {
    let m = g.size();
    let mut out = MatFq::zeros(n);
    for i in 0..n - m - k {
        out.set(i, m + i, tower.one());
    }
    for i in 0..k {
        out.set(n - m - k + i, n - k + i, tower.one());
    }
    for i in 0..m {
        for j in 0..m {
            out.set(n - m + i, j, g.get(i, j));
        }
        for j in 0..k {
            out.set(n - m + i, n - k + j, y[i * k + j]);
        }
    }
    out
}

/// Every vector of `len` entries in `F_q`.
fn all_blocks(tower: &FieldTower, len: usize, limit: u64) -> Result<Vec<Vec<FqElem>>> {
    let count = checked_pow(tower.q(), len as u32).unwrap_or(u128::MAX);
    if count > limit as u128 {
        return Err(Error::EnumerationTooLarge { count, limit });
    }
    let field = tower.elements(1)?;
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                field.iter().map(move |&a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctionalEquationReport {
    pub k: usize,
    pub trials: usize,
    pub gamma: Complex64,
    pub max_discrepancy: f64,
    pub bound: f64,
    pub passed: bool,
}

/// Evaluates the functional equation on `trials` random right translates of
/// the Bessel functions, using `γ` from the Bessel-sum formula. The first
/// trial uses the untranslated functions.
pub fn check_functional_equation<R: Rng>(
    tower: &FieldTower,
    pi: &CuspidalSpec,
    tau: &TauParam,
    psi: &AddChar,
    k: usize,
    trials: usize,
    rng: &mut R,
    limit: u64,
) -> Result<FunctionalEquationReport> {
    let (n, m) = (pi.n() as usize, tau.m() as usize);
    check_order(n as u32, m as u32)?;
    if k + m >= n {
        return Err(Error::BadK {
            k: k as u32,
            max: (n - m - 1) as u32,
        });
    }
    let jpi = BesselFunction::new(tower, pi.clone(), *psi, limit)?;
    let jtau = TauWhittaker::new(tower, tau, psi, limit)?;
    let cosets = coset_reps(tower, m, limit)?;
    let gamma = bessel_sum(&jpi, &jtau, &cosets)?;
    let factor = (tower.q() as f64).powi((k * m) as i32);
    let mut max_discrepancy: f64 = 0.0;
    for t in 0..trials {
        let (h_pi, h_tau) = if t == 0 {
            (MatFq::identity(tower, n), MatFq::identity(tower, m))
        } else {
            (random_invertible(tower, n, rng), random_invertible(tower, m, rng))
        };
        let (lhs, rhs) = functional_equation_sides(&jpi, &jtau, &cosets, k, &h_pi, &h_tau, limit)?;
        max_discrepancy = max_discrepancy.max((gamma * factor * lhs - rhs).norm());
    }
    let bound = 1e-6 * (tower.q() as f64).powi(n as i32);
    Ok(FunctionalEquationReport {
        k,
        trials,
        gamma,
        max_discrepancy,
        bound,
        passed: max_discrepancy < bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_regular_orbits;
    use crate::fields::TowerOptions;
    use crate::gln::DEFAULT_ENUM_LIMIT;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tower(q: u64, l: u32) -> FieldTower {
        FieldTower::for_q(q, l, &TowerOptions::default()).unwrap()
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    fn cusps(q: u64, n: u32) -> Vec<CuspidalSpec> {
        enumerate_regular_orbits(q, n)
            .into_iter()
            .map(|o| CuspidalSpec::new(o).unwrap())
            .collect()
    }

    #[test]
    fn nien_matches_bessel_for_all_characters() {
        for (n, q) in [(2u32, 3u64), (2, 5), (3, 2), (3, 3), (4, 2)] {
            let t = tower(q, n);
            let psi = AddChar::standard(&t);
            for pi in cusps(q, n) {
                for k in 0..q - 1 {
                    let tau = MultChar::new(q, 1, k);
                    let b = gamma_bessel(&t, &pi, &TauParam::Char(tau), &psi, DEFAULT_ENUM_LIMIT).unwrap();
                    let c = gamma_n_by_1(&t, &pi, &tau, &psi).unwrap();
                    assert!(
                        rel(b.value, c.value) < 1e-6,
                        "n={n} q={q} {:?} k={k}: {} vs {}",
                        pi.orbit(),
                        b.value,
                        c.value
                    );
                    assert!(b.modulus_error() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn closed_form_reduces_to_nien() {
        for (n, q) in [(2u32, 3u64), (3, 2), (4, 3)] {
            let t = tower(q, n);
            let psi = AddChar::standard(&t);
            for pi in cusps(q, n) {
                for k in 0..q - 1 {
                    let tau = MultChar::new(q, 1, k);
                    let c = gamma_closed(&t, &pi, &TauParam::Char(tau), &psi).unwrap();
                    let nien = gamma_n_by_1(&t, &pi, &tau, &psi).unwrap();
                    assert!(rel(c.value, nien.value) < 1e-9);
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_bessel_sum() {
        for (n, m, q) in [(3u32, 2u32, 2u64), (3, 2, 3), (4, 2, 2), (4, 3, 2)] {
            let t = tower(q, lcm(n, m));
            let psi = AddChar::standard(&t);
            for pi in cusps(q, n) {
                for tau in cusps(q, m) {
                    let tau = TauParam::Cusp(tau);
                    let b = gamma_bessel(&t, &pi, &tau, &psi, DEFAULT_ENUM_LIMIT).unwrap();
                    let c = gamma_closed(&t, &pi, &tau, &psi).unwrap();
                    assert!(
                        rel(b.value, c.value) < 1e-6,
                        "(n,m,q)=({n},{m},{q}) pi={:?} tau={:?}: bessel {} closed {}",
                        pi.orbit().exponents(),
                        tau.labels(),
                        b.value,
                        c.value
                    );
                }
            }
        }
    }

    #[test]
    fn product_index_shift_and_representatives() {
        let t = tower(2, 4);
        let psi = AddChar::standard(&t);
        for pi in cusps(2, 4) {
            for tau in cusps(2, 2) {
                let base = gauss_product(&t, &pi.parameter(), &tau.parameter(), &psi, 0).unwrap();
                let shifted = gauss_product(&t, &pi.parameter(), &tau.parameter(), &psi, 1).unwrap();
                assert!(rel(shifted, base) < 1e-9);
                let twisted = gauss_product(&t, &pi.parameter().frobenius(1), &tau.parameter(), &psi, 0).unwrap();
                assert!(rel(twisted, base) < 1e-9);
            }
        }
    }

    #[test]
    fn modulus_law_and_errors() {
        let t = tower(2, 3);
        let psi = AddChar::standard(&t);
        let pi = cusps(2, 3).remove(0);
        let g = gamma_bessel(
            &t,
            &pi,
            &TauParam::Char(MultChar::trivial(2, 1)),
            &psi,
            DEFAULT_ENUM_LIMIT,
        )
        .unwrap();
        assert!((g.value.norm() - 0.5f64.sqrt()).abs() < 1e-9);
        assert!(g.modulus_error() < 1e-9);
        let small = TauParam::Cusp(CuspidalSpec::from_exponent(2, 3, 1).unwrap());
        assert!(matches!(
            gamma_closed(&t, &pi, &small, &psi),
            Err(Error::SizeOrder { .. })
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let tau = TauParam::Char(MultChar::trivial(2, 1));
        assert!(matches!(
            check_functional_equation(&t, &pi, &tau, &psi, 2, 1, &mut rng, DEFAULT_ENUM_LIMIT),
            Err(Error::BadK { .. })
        ));
    }

    #[test]
    fn functional_equation_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for (n, m, q) in [(2u32, 1u32, 3u64), (3, 1, 2), (3, 2, 2)] {
            let t = tower(q, lcm(n, m));
            let psi = AddChar::standard(&t);
            let pi = cusps(q, n).remove(0);
            let tau = if m == 1 {
                TauParam::Char(MultChar::new(q, 1, 1 % (q - 1)))
            } else {
                TauParam::Cusp(cusps(q, m).remove(0))
            };
            for k in 0..(n - m) as usize {
                let r = check_functional_equation(&t, &pi, &tau, &psi, k, 5, &mut rng, DEFAULT_ENUM_LIMIT).unwrap();
                assert!(r.passed, "({n},{m},{q}) k={k}: {}", r.max_discrepancy);
            }
        }
    }
}
