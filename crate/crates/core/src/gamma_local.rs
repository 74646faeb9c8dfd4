//! Local gamma factors of pairs of level-zero supercuspidal representations:
//! the Gauss-sum formula, the bridge from finite gamma factors, unramified
//! abelian gamma factors in `T = q^{-s}`, and a step-by-step recomputation
//! through base change and automorphic induction.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::arith::{gcd, lcm};
use crate::characters::{gauss_sum, unit_root, AddChar};
use crate::cuspidal::central_char;
use crate::error::{Error, Result};
use crate::fields::FieldTower;
use crate::gamma_finite::{
    gamma_bessel, gamma_closed, gamma_n_by_1, gauss_product, FiniteMethod, GammaInputs, GammaResult, TauParam,
};
use crate::level_zero::{ai_presentation, base_change, pair_to_rep, AiPresentation, LevelZeroRep, TamePair};
use crate::rational::RationalFn;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalMethod {
    ClosedForm,
    Bridge,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalGamma {
    pub value: Complex64,
    pub method: LocalMethod,
    /// Finite-field method behind a bridge value.
    pub finite_method: Option<FiniteMethod>,
    pub inputs: GammaInputs,
}

impl LocalGamma {
    pub fn modulus_error(&self) -> f64 {
        (self.value.norm() - 1.0).abs()
    }
}

fn sign(e: i64) -> f64 {
    if e.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The finite-field side of `τ`: a character when `m = 1`.
pub fn tau_param(tau: &LevelZeroRep) -> TauParam {
    if tau.n() == 1 {
        TauParam::Char(tau.cusp().parameter())
    } else {
        TauParam::Cusp(tau.cusp().clone())
    }
}

fn check_order(n: u32, m: u32) -> Result<()> {
    if n <= m || m == 0 {
        return Err(Error::SizeOrder { n, m });
    }
    Ok(())
}

fn inputs(tower: &FieldTower, pi: &LevelZeroRep, tau: &LevelZeroRep, psi: &AddChar) -> GammaInputs {
    GammaInputs {
        n: pi.n(),
        m: tau.n(),
        q: tower.q(),
        pi_orbit: pi.cusp().orbit().exponents().to_vec(),
        tau_orbit: tau.cusp().orbit().exponents().to_vec(),
        psi_shift: crate::cuspidal::shift_index(tower, psi),
    }
}

/// `(-1)^{nm-(n,m)} q^{-nm/2} ∏_{i<(n,m)} G(η_π^{q^i}∘N · η_τ∘N, ψ̃)`.
pub fn gamma_local_closed(
    tower: &FieldTower,
    pi: &LevelZeroRep,
    tau: &LevelZeroRep,
    psi: &AddChar,
) -> Result<LocalGamma> {
    let (n, m) = (pi.n(), tau.n());
    check_order(n, m)?;
    let prod = gauss_product(tower, &pi.cusp().parameter(), &tau.cusp().parameter(), psi, 0)?;
    let nm = (n * m) as i64;
    let factor = sign(nm - gcd(n, m) as i64) * (tower.q() as f64).powf(-(nm as f64) / 2.0);
    Ok(LocalGamma {
        value: prod * factor,
        method: LocalMethod::ClosedForm,
        finite_method: None,
        inputs: inputs(tower, pi, tau, psi),
    })
}

/// `ω_τ(-1)^{n-1} q^{m(n-m-1)/2} γ(π̃ × τ̃, ψ̃)` with the finite gamma factor
/// computed by `method`.
pub fn gamma_local_bridge(
    tower: &FieldTower,
    pi: &LevelZeroRep,
    tau: &LevelZeroRep,
    psi: &AddChar,
    method: FiniteMethod,
    limit: u64,
) -> Result<LocalGamma> {
    let (n, m) = (pi.n(), tau.n());
    check_order(n, m)?;
    let tau_fin = tau_param(tau);
    let finite = match method {
        FiniteMethod::BesselSum => gamma_bessel(tower, pi.cusp(), &tau_fin, psi, limit)?,
        FiniteMethod::ClosedForm => gamma_closed(tower, pi.cusp(), &tau_fin, psi)?,
        FiniteMethod::NienNBy1 => match &tau_fin {
            TauParam::Char(c) => gamma_n_by_1(tower, pi.cusp(), c, psi)?,
            TauParam::Cusp(_) => return Err(Error::Shape("n x 1 formula needs m = 1".into())),
        },
    };
    bridge_from_finite(tower, pi, tau, psi, &finite)
}

/// Applies `ω_τ(-1)^{n-1} q^{m(n-m-1)/2}` to an already computed finite gamma
/// factor of the residual pair.
pub fn bridge_from_finite(
    tower: &FieldTower,
    pi: &LevelZeroRep,
    tau: &LevelZeroRep,
    psi: &AddChar,
    finite: &GammaResult,
) -> Result<LocalGamma> {
    let (n, m) = (pi.n(), tau.n());
    check_order(n, m)?;
    if (finite.inputs.n, finite.inputs.m) != (n, m) {
        return Err(Error::Shape("finite gamma factor is for a different pair".into()));
    }
    let omega = central_char(tower, tau.cusp(), tower.from_int(-1))?.re.round();
    let exp = (m as f64) * (n as f64 - m as f64 - 1.0) / 2.0;
    let factor = omega.powi(n as i32 - 1) * (tower.q() as f64).powf(exp);
    Ok(LocalGamma {
        value: finite.value * factor,
        method: LocalMethod::Bridge,
        finite_method: Some(finite.method),
        inputs: inputs(tower, pi, tau, psi),
    })
}

/// `γ(s, χ, ψ)` for an unramified character with `χ(ϖ) = c` of a field with
/// residue size `q0 = q^{m_base}` and `ψ` of level one:
/// `q0^{s-1/2} c^{-1} (1 - c q0^{-s})/(1 - c^{-1} q0^{s-1}) = -q0^{1/2} (1 - cT)/(1 - c q0 T)`.
pub fn gamma_unramified_char(q: u64, c: Complex64, m_base: u32) -> Result<RationalFn> {
    if c == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroScalar);
    }
    let q0 = (q as f64).powi(m_base as i32);
    let root = Complex64::new(-q0.sqrt(), 0.0);
    Ok(RationalFn::new(
        vec![root, -c * root],
        vec![Complex64::new(1.0, 0.0), -c * q0],
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct XiReport {
    pub q: u64,
    pub m: u32,
    pub product: RationalFn,
    pub samples: Vec<f64>,
    pub max_rel_error: f64,
    pub passed: bool,
}

/// Checks `∏_{j<m} γ(s, χ_j, ψ) = (-1)^{m-1} γ(s, 1_K, ψ_K)` over the
/// unramified characters with `χ_j(ϖ) = ζ_m^j`, at five random `s ∈ (0,1)`,
/// comparing the `F`-side at `T = q^{-s}` with the `K`-side at `q^{-ms}`.
pub fn xi_product<R: Rng>(q: u64, m: u32, tol: f64, rng: &mut R) -> XiReport {
    let product = (0..m as u64)
        .map(|j| gamma_unramified_char(q, unit_root(m as u64, j), 1).expect("roots of unity are nonzero"))
        .fold(RationalFn::constant(Complex64::new(1.0, 0.0)), |acc, f| acc.mul(&f));
    let target = gamma_unramified_char(q, Complex64::new(1.0, 0.0), m)
        .expect("nonzero")
        .scale(Complex64::new(sign(m as i64 - 1), 0.0));
    let samples: Vec<f64> = (0..5).map(|_| rng.gen_range(0.0..1.0)).collect();
    let qm = (q as f64).powi(m as i32);
    let max_rel_error = samples
        .iter()
        .map(|&s| {
            let s = Complex64::new(s, 0.0);
            let lhs = product.eval_at_s(q as f64, s);
            let rhs = target.eval_at_s(qm, s);
            (lhs - rhs).norm() / rhs.norm()
        })
        .fold(0.0, f64::max);
    XiReport {
        q,
        m,
        product,
        samples,
        max_rel_error,
        passed: max_rel_error < tol,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainFactor {
    pub pair: TamePair,
    pub gauss_sum: Complex64,
    /// `λ(-1)^{n'-1} q_K^{(n'-2)/2}`, the bridge over `K`.
    pub bridge_prefactor: f64,
    /// `(-q_K^{-1} λ(-1))^{n'-1}`, the `n' × 1` formula over `K`.
    pub nien_prefactor: f64,
    pub value: Complex64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub closed: Complex64,
    pub step1_sign: f64,
    pub ai: AiPresentation,
    pub factors: Vec<ChainFactor>,
    pub chain_value: Complex64,
    pub discrepancy: f64,
    pub passed: bool,
}

/// Recomputes the local gamma factor by presenting `τ` as induced from a
/// character `λ` of the degree-`m` extension `K`, base changing `π` to `K`
/// and evaluating each resulting `GL_{n'}(K) × GL_1(K)` factor through the
/// bridge and the `n' × 1` formula over `F_{q^m}`.
pub fn verify_chain(
    tower: &FieldTower,
    t_pi: &TamePair,
    t_tau: &TamePair,
    psi: &AddChar,
    field_limit: u64,
    tol: f64,
) -> Result<ChainReport> {
    let (n, m) = (t_pi.degree(), t_tau.degree());
    check_order(n, m)?;
    let big = lcm(n, m);
    if !tower.supports(big) {
        return Err(Error::BadDivisor {
            inner: big,
            outer: tower.degree(),
        });
    }
    let closed = gamma_local_closed(tower, &pair_to_rep(t_pi)?, &pair_to_rep(t_tau)?, psi)?.value;

    let ai = ai_presentation(t_tau)?;
    let step1_sign = sign((m * n) as i64 - n as i64);

    let lambda = ai.inducing.orbit().representative();
    let lambda_minus_one = lambda.eval(tower, tower.from_int(-1))?.re.round();
    let lambda_lifted = lambda.compose_norm(big)?;
    let q_k = (tower.q() as f64).powi(m as i32);

    let factors = base_change(t_pi, m, field_limit)?
        .into_iter()
        .map(|pair| {
            let n_rel = pair.degree() as i32;
            let beta = pair.orbit().representative().mul(&lambda_lifted)?;
            let g = gauss_sum(tower, &beta, psi);
            let bridge_prefactor = lambda_minus_one.powi(n_rel - 1) * q_k.powf((n_rel as f64 - 2.0) / 2.0);
            let nien_prefactor = (-lambda_minus_one / q_k).powi(n_rel - 1);
            Ok(ChainFactor {
                value: g * (bridge_prefactor * nien_prefactor),
                pair,
                gauss_sum: g,
                bridge_prefactor,
                nien_prefactor,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let chain_value = factors
        .iter()
        .fold(Complex64::new(step1_sign, 0.0), |acc, f| acc * f.value);
    let discrepancy = (chain_value - closed).norm() / closed.norm();
    Ok(ChainReport {
        closed,
        step1_sign,
        ai,
        factors,
        chain_value,
        discrepancy,
        passed: discrepancy < tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{enumerate_regular_orbits, MultChar, RegularOrbit};
    use crate::cuspidal::CuspidalSpec;
    use crate::fields::{TowerOptions, DEFAULT_FIELD_LIMIT};
    use crate::gln::DEFAULT_ENUM_LIMIT;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn reps(q: u64, n: u32) -> Vec<LevelZeroRep> {
        enumerate_regular_orbits(q, n)
            .into_iter()
            .map(|o| LevelZeroRep::new(Complex64::new(1.0, 0.0), CuspidalSpec::new(o).unwrap()).unwrap())
            .collect()
    }

    #[test]
    fn closed_equals_bridge() {
        for (n, m, q) in [(2u32, 1u32, 3u64), (3, 1, 2), (3, 2, 2), (3, 2, 3), (4, 2, 2)] {
            let t = FieldTower::for_q(q, lcm(n, m), &TowerOptions::default()).unwrap();
            let psi = AddChar::standard(&t);
            for pi in reps(q, n) {
                for tau in reps(q, m) {
                    let c = gamma_local_closed(&t, &pi, &tau, &psi).unwrap();
                    assert!(c.modulus_error() < 1e-9);
                    for method in [FiniteMethod::ClosedForm, FiniteMethod::BesselSum] {
                        let b = gamma_local_bridge(&t, &pi, &tau, &psi, method, DEFAULT_ENUM_LIMIT).unwrap();
                        assert!((b.value - c.value).norm() < 1e-6, "({n},{m},{q}) {method:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn closed_special_case() {
        let t = FieldTower::for_q(3, 2, &TowerOptions::default()).unwrap();
        let psi = AddChar::standard(&t);
        for pi in reps(3, 2) {
            for tau in reps(3, 1) {
                let c = gamma_local_closed(&t, &pi, &tau, &psi).unwrap();
                let beta = pi
                    .cusp()
                    .parameter()
                    .mul(&tau.cusp().parameter().compose_norm(2).unwrap())
                    .unwrap();
                let want = -gauss_sum(&t, &beta, &psi) / 3.0;
                assert!((c.value - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn chain_examples() {
        for (n, m, q) in [(2u32, 1u32, 3u64), (3, 2, 2), (4, 2, 3)] {
            let t = FieldTower::for_q(q, lcm(n, m), &TowerOptions::default()).unwrap();
            let psi = AddChar::standard(&t);
            for op in enumerate_regular_orbits(q, n) {
                for ot in enumerate_regular_orbits(q, m) {
                    let tp = TamePair::new(Complex64::new(1.0, 0.0), op.clone()).unwrap();
                    let tt = TamePair::new(Complex64::new(0.0, 1.0), ot).unwrap();
                    let r = verify_chain(&t, &tp, &tt, &psi, DEFAULT_FIELD_LIMIT, 1e-6).unwrap();
                    assert!(r.passed, "({n},{m},{q}): {}", r.discrepancy);
                    assert_eq!(r.factors.len() as u32, gcd(n, m));
                    let reversed = r
                        .factors
                        .iter()
                        .rev()
                        .fold(Complex64::new(r.step1_sign, 0.0), |acc, f| acc * f.value);
                    assert!((reversed - r.chain_value).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn exponent_and_sign_bookkeeping() {
        for n in 2..=12i64 {
            for m in 1..n {
                let d = gcd(n as u32, m as u32) as i64;
                let l = lcm(n as u32, m as u32) as i64;
                // twice the exponent of q in bridge · finite prefactor · |Gauss product|
                assert_eq!(m * (n - m - 1) + (-2 * m * n + m * m + m) + d * l, 0);
            }
        }
        let t = FieldTower::for_q(5, 2, &TowerOptions::default()).unwrap();
        for tau in reps(5, 2) {
            let eta = tau.cusp().parameter().eval(&t, t.from_int(-1)).unwrap();
            let omega = central_char(&t, tau.cusp(), t.from_int(-1)).unwrap();
            assert!((eta * omega - 1.0).norm() < 1e-12);
        }
        for k in 0..4 {
            let chi = MultChar::new(5, 1, k);
            let v = chi.eval(&t, t.from_int(-1)).unwrap();
            assert!((v * v - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn unramified_gamma() {
        let direct = |q0: f64, c: Complex64, s: Complex64| {
            let qs = (s * q0.ln()).exp();
            qs / q0.sqrt() / c * (1.0 - c / qs) / (1.0 - qs / (c * q0))
        };
        for (q, m) in [(3u64, 2u32), (2, 1), (5, 3)] {
            let q0 = (q as f64).powi(m as i32);
            for c in [Complex64::new(1.0, 0.0), unit_root(7, 2), Complex64::new(0.5, -2.0)] {
                let g = gamma_unramified_char(q, c, m).unwrap();
                for s in [
                    Complex64::new(0.5, 0.0),
                    Complex64::new(0.2, 1.3),
                    Complex64::new(2.0, -0.4),
                ] {
                    assert!((g.eval_at_s(q0, s) - direct(q0, c, s)).norm() < 1e-9);
                }
            }
        }
        let g = gamma_unramified_char(3, Complex64::new(1.0, 0.0), 2).unwrap();
        assert!((g.eval_at_s(9.0, Complex64::new(0.5, 0.0)) - 1.0).norm() < 1e-12);

        let c = unit_root(7, 2);
        let g = gamma_unramified_char(2, c, 1).unwrap();
        assert!(g.eval(c.inv()).norm() < 1e-12);
        for t in [0.0, 1.0, 2.5, -3.0, 10.0] {
            let v = g.eval_at_s(2.0, Complex64::new(0.5, t));
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
        assert!(matches!(
            gamma_unramified_char(2, Complex64::new(0.0, 0.0), 1),
            Err(Error::ZeroScalar)
        ));
    }

    #[test]
    fn xi_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for q in [2u64, 3, 5] {
            for m in 1..=8 {
                let r = xi_product(q, m, 1e-9, &mut rng);
                assert!(r.passed, "q={q} m={m}: {}", r.max_rel_error);
            }
        }
    }

    #[test]
    fn size_order_errors() {
        let t = FieldTower::for_q(2, 6, &TowerOptions::default()).unwrap();
        let psi = AddChar::standard(&t);
        let a = reps(2, 2).remove(0);
        let b = reps(2, 3).remove(0);
        assert!(matches!(
            gamma_local_closed(&t, &a, &b, &psi),
            Err(Error::SizeOrder { .. })
        ));
        let pa = TamePair::new(Complex64::new(1.0, 0.0), RegularOrbit::regular(2, 2, 1).unwrap()).unwrap();
        let pb = TamePair::new(Complex64::new(1.0, 0.0), RegularOrbit::regular(2, 3, 1).unwrap()).unwrap();
        assert!(matches!(
            verify_chain(&t, &pa, &pb, &psi, DEFAULT_FIELD_LIMIT, 1e-6),
            Err(Error::SizeOrder { .. })
        ));
    }
}
