//! Residue-level data of level-zero supercuspidal representations and of
//! admissible tame pairs: the scalar at the uniformizer together with a
//! regular character orbit of the residue field.

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{checked_pow, gcd, lcm, pow_mod};
use crate::characters::RegularOrbit;
use crate::cuspidal::CuspidalSpec;
use crate::error::{Error, Result};

/// An unramified tame pair `(E/K, θ)`: `θ(ϖ)` and the orbit of the reduction
/// of `θ`, regular over the residue field of `K = F_{q^base}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TamePair {
    scalar: Complex64,
    orbit: RegularOrbit,
}

impl TamePair {
    pub fn new(scalar: Complex64, orbit: RegularOrbit) -> Result<TamePair> {
        if scalar == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroScalar);
        }
        if !orbit.is_regular() {
            return Err(Error::NotAdmissible {
                level: orbit.level(),
                exponent: orbit.canonical(),
            });
        }
        Ok(TamePair { scalar, orbit })
    }

    /// Degree of `E` over the base field.
    pub fn degree(&self) -> u32 {
        self.orbit.relative_degree()
    }

    /// Degree of the base field's residue field over `F_q`.
    pub fn base(&self) -> u32 {
        self.orbit.base()
    }

    pub fn q(&self) -> u64 {
        self.orbit.q()
    }

    pub fn scalar(&self) -> Complex64 {
        self.scalar
    }

    pub fn orbit(&self) -> &RegularOrbit {
        &self.orbit
    }

    pub fn approx_eq(&self, other: &TamePair, tol: f64) -> bool {
        self.orbit == other.orbit && (self.scalar - other.scalar).norm() <= tol
    }
}

/// A level-zero supercuspidal representation of `GL_n(F)`: `ω_π(ϖ)` and the
/// cuspidal representation of `GL_n(F_q)` it is induced from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelZeroRep {
    scalar: Complex64,
    cusp: CuspidalSpec,
}

impl LevelZeroRep {
    pub fn new(scalar: Complex64, cusp: CuspidalSpec) -> Result<LevelZeroRep> {
        if scalar == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroScalar);
        }
        Ok(LevelZeroRep { scalar, cusp })
    }

    pub fn n(&self) -> u32 {
        self.cusp.n()
    }

    pub fn scalar(&self) -> Complex64 {
        self.scalar
    }

    pub fn cusp(&self) -> &CuspidalSpec {
        &self.cusp
    }
}

/// The bijection from admissible pairs over `F` to level-zero representations;
/// the orbit label passes through unchanged.
pub fn pair_to_rep(t: &TamePair) -> Result<LevelZeroRep> {
    if t.base() != 1 {
        return Err(Error::NotAdmissible {
            level: t.orbit.level(),
            exponent: t.orbit.canonical(),
        });
    }
    LevelZeroRep::new(t.scalar, CuspidalSpec::new(t.orbit.clone())?)
}

pub fn rep_to_pair(r: &LevelZeroRep) -> TamePair {
    TamePair {
        scalar: r.scalar,
        orbit: r.cusp.orbit().clone(),
    }
}

/// Twist by the `k`-th power of the unramified quadratic character, which is
/// trivial on units and `-1` at `ϖ`.
pub fn llc_twist(t: &TamePair, k: i64) -> TamePair {
    let scalar = if k.rem_euclid(2) == 0 { t.scalar } else { -t.scalar };
    TamePair {
        scalar,
        orbit: t.orbit.clone(),
    }
}

fn minus_one_pow(e: u32) -> f64 {
    if e.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Unramified base change to the degree-`m` extension `K` of the base field.
///
/// Returns `ς_1, .., ς_{(n,m)}`: the orbit of `θ̃^{Q^i}∘N` under `x ↦ x^{Q^m}`
/// at level `[n,m]` relative to the old base (`Q` the old residue size), with
/// scalar `(-1)^{n/(n,m)-1} ((-1)^{n-1} θ(ϖ))^{m/(n,m)}`.
pub fn base_change(t: &TamePair, m: u32, field_limit: u64) -> Result<Vec<TamePair>> {
    assert!(m >= 1, "base change degree must be positive");
    let (q, b, n) = (t.q(), t.base(), t.degree());
    let d = gcd(n, m);
    let old_level = b * n;
    let new_level = b * lcm(n, m);
    let size = checked_pow(q, new_level).unwrap_or(u128::MAX);
    if size > field_limit as u128 {
        return Err(Error::FieldTooLarge {
            size,
            limit: field_limit,
        });
    }
    let old_mod = q.pow(old_level) - 1;
    let new_mod = q.pow(new_level) - 1;
    let norm_factor = new_mod / old_mod;
    let big_q = q.pow(b);

    let inner = Complex64::new(minus_one_pow(n - 1), 0.0) * t.scalar;
    let scalar = minus_one_pow(n / d - 1) * inner.powu(m / d);

    (1..=d)
        .map(|i| {
            let twisted =
                (t.orbit.canonical() as u128 * pow_mod(big_q, i as u64, old_mod) as u128 % old_mod as u128) as u64;
            let lifted = (twisted as u128 * norm_factor as u128 % new_mod as u128) as u64;
            let orbit = RegularOrbit::generated(q, new_level, b * m, lifted);
            TamePair::new(scalar, orbit)
        })
        .collect()
}

/// Number of classes among `θ̃^{Q^i}∘N`, `i ∈ Z`, under `x ↦ x^{Q^m}`, by
/// listing every twist.
pub fn count_twist_classes(t: &TamePair, m: u32) -> usize {
    let (q, b, n) = (t.q(), t.base(), t.degree());
    let old_mod = q.pow(b * n) - 1;
    let new_level = b * lcm(n, m);
    let new_mod = q.pow(new_level) - 1;
    let mut seen: Vec<RegularOrbit> = Vec::new();
    for &k in t.orbit.exponents() {
        let lifted = (k as u128 * (new_mod / old_mod) as u128 % new_mod as u128) as u64;
        let orbit = RegularOrbit::generated(q, new_level, b * m, lifted);
        if !seen.contains(&orbit) {
            seen.push(orbit);
        }
    }
    seen.len()
}

/// A pair presented as automorphically induced from a character of the
/// degree-`m` unramified extension: `π_m(λ) = (Δ^{m-1} λ)^{K/F}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AiPresentation {
    pub degree: u32,
    pub inducing: TamePair,
}

pub fn ai_presentation(t: &TamePair) -> Result<AiPresentation> {
    if !t.orbit.is_regular() {
        return Err(Error::NotAdmissible {
            level: t.orbit.level(),
            exponent: t.orbit.canonical(),
        });
    }
    let m = t.degree();
    Ok(AiPresentation {
        degree: m,
        inducing: llc_twist(t, m as i64 - 1),
    })
}
