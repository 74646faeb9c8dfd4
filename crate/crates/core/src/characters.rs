//! Multiplicative and additive characters of the tower fields, Frobenius
//! orbits of regular characters, and Gauss sums.
//!
//! A multiplicative character of `F_{q^d}^×` is an exponent `k` modulo
//! `q^d - 1`: `χ(g_d^j) = ζ^{kj}` with `ζ = exp(2πi/(q^d - 1))` and `g_d` the
//! canonical subfield generator. Twisting, norm composition and products are
//! integer congruences; complex numbers only appear at evaluation.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, inv_mod, pow_mod};
use crate::error::{Error, Result};
use crate::fields::{FieldTower, FqElem};

/// `exp(2πi r/m)` with `r` reduced first.
pub fn unit_root(m: u64, r: u64) -> Complex64 {
    let r = r % m;
    let angle = 2.0 * PI * (r as f64) / (m as f64);
    Complex64::new(angle.cos(), angle.sin())
}

/// Precomputed `ζ_m^j` for `j in 0..m`.
#[derive(Clone, Debug)]
pub struct RootTable {
    m: u64,
    values: Vec<Complex64>,
}

impl RootTable {
    pub fn new(m: u64) -> RootTable {
        RootTable {
            m,
            values: (0..m).map(|r| unit_root(m, r)).collect(),
        }
    }

    pub fn get(&self, r: u64) -> Complex64 {
        self.values[(r % self.m) as usize]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultChar {
    q: u64,
    level: u32,
    exponent: u64,
}

impl MultChar {
    pub fn new(q: u64, level: u32, exponent: u64) -> MultChar {
        let modulus = q.pow(level) - 1;
        MultChar {
            q,
            level,
            exponent: exponent % modulus.max(1),
        }
    }

    pub fn trivial(q: u64, level: u32) -> MultChar {
        MultChar::new(q, level, 0)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// `q^d - 1`, the order of the character group.
    pub fn modulus(&self) -> u64 {
        self.q.pow(self.level) - 1
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    pub fn eval(&self, tower: &FieldTower, x: FqElem) -> Result<Complex64> {
        if x.is_zero() {
            return Err(Error::EvalAtZero);
        }
        let j = tower.subfield_log(x, self.level).ok_or(Error::NotInSubfield {
            index: x.index(),
            degree: self.level,
        })?;
        let m = self.modulus();
        Ok(unit_root(m, mul_mod(self.exponent, j, m)))
    }

    /// `χ^e`.
    pub fn pow(&self, e: i64) -> MultChar {
        let m = self.modulus();
        let e = e.rem_euclid(m as i64) as u64;
        MultChar::new(self.q, self.level, mul_mod(self.exponent, e, m))
    }

    pub fn inverse(&self) -> MultChar {
        self.pow(-1)
    }

    /// The Frobenius twist `χ^{q^i}`.
    pub fn frobenius(&self, i: i64) -> MultChar {
        let m = self.modulus();
        let shift = i.rem_euclid(self.level as i64) as u64;
        MultChar::new(self.q, self.level, mul_mod(self.exponent, pow_mod(self.q, shift, m), m))
    }

    /// Pointwise product of two characters of the same group.
    pub fn mul(&self, other: &MultChar) -> Result<MultChar> {
        if other.level != self.level || other.q != self.q {
            return Err(Error::BadDivisor {
                inner: other.level,
                outer: self.level,
            });
        }
        Ok(MultChar::new(self.q, self.level, self.exponent + other.exponent))
    }

    /// `χ ∘ N_{F_{q^D}/F_{q^e}}` as a character at level `D`.
    pub fn compose_norm(&self, target: u32) -> Result<MultChar> {
        if !target.is_multiple_of(self.level) {
            return Err(Error::BadDivisor {
                inner: self.level,
                outer: target,
            });
        }
        let big = self.q.pow(target) - 1;
        let c = big / self.modulus();
        Ok(MultChar::new(self.q, target, mul_mod(self.exponent, c, big)))
    }

    /// Regular iff the conjugates `χ^{q^i}`, `0 <= i < d`, are pairwise distinct.
    pub fn is_regular_by_orbit(&self) -> bool {
        (1..self.level).all(|i| self.frobenius(i as i64).exponent != self.exponent)
    }

    /// Regular iff `χ` factors through no norm to a proper subfield.
    pub fn is_regular_by_norm(&self) -> bool {
        let m = self.modulus();
        divisors(self.level)
            .into_iter()
            .filter(|&e| e < self.level)
            .all(|e| !self.exponent.is_multiple_of(m / (self.q.pow(e) - 1)))
    }

    pub fn is_regular(&self) -> bool {
        let by_orbit = self.is_regular_by_orbit();
        debug_assert_eq!(by_orbit, self.is_regular_by_norm());
        by_orbit
    }

    pub fn orbit(&self) -> RegularOrbit {
        RegularOrbit::generated(self.q, self.level, 1, self.exponent)
    }

    /// The same character written relative to a generator `g' = g^r` with
    /// `r` a unit mod `q^L - 1`: the exponent becomes `k·r^{-1}`.
    pub fn relabel(&self, r: u64) -> MultChar {
        let m = self.modulus();
        let inv = inv_mod(r % m.max(1), m).expect("relabeling exponent must be a unit");
        MultChar::new(self.q, self.level, mul_mod(self.exponent, inv, m))
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m <= 1 {
        return 0;
    }
    (a as u128 * b as u128 % m as u128) as u64
}

/// A Frobenius orbit of characters of `F_{q^level}^×` under `χ ↦ χ^{q^base}`,
/// stored as its sorted exponents. `base = 1` is the usual Galois orbit over
/// `F_q`; larger `base` describes characters relative to `F_{q^base}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RegularOrbit {
    q: u64,
    level: u32,
    base: u32,
    exponents: Vec<u64>,
}

impl RegularOrbit {
    /// Orbit of exponent `k` at `level` under multiplication by `q^base`.
    pub fn generated(q: u64, level: u32, base: u32, k: u64) -> RegularOrbit {
        let m = q.pow(level) - 1;
        let step = pow_mod(q, base as u64, m);
        let start = k % m.max(1);
        let mut exponents = vec![start];
        let mut cur = mul_mod(start, step, m);
        while cur != start {
            exponents.push(cur);
            cur = mul_mod(cur, step, m);
        }
        exponents.sort_unstable();
        RegularOrbit {
            q,
            level,
            base,
            exponents,
        }
    }

    /// The orbit of a regular exponent over `F_q`; errors if not regular.
    pub fn regular(q: u64, level: u32, k: u64) -> Result<RegularOrbit> {
        let orbit = RegularOrbit::generated(q, level, 1, k);
        if orbit.is_regular() {
            Ok(orbit)
        } else {
            Err(Error::NotAdmissible { level, exponent: k })
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Degree of `F_{q^level}` over the base field `F_{q^base}`.
    pub fn relative_degree(&self) -> u32 {
        self.level / self.base
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn canonical(&self) -> u64 {
        self.exponents[0]
    }

    pub fn contains(&self, k: u64) -> bool {
        self.exponents.binary_search(&k).is_ok()
    }

    pub fn is_regular(&self) -> bool {
        self.base >= 1 && self.level.is_multiple_of(self.base) && self.exponents.len() as u32 == self.relative_degree()
    }

    /// The character given by the canonical exponent.
    pub fn representative(&self) -> MultChar {
        MultChar::new(self.q, self.level, self.canonical())
    }

    pub fn relabel(&self, r: u64) -> RegularOrbit {
        let k = self.representative().relabel(r).exponent();
        RegularOrbit::generated(self.q, self.level, self.base, k)
    }

    pub fn members(&self) -> impl Iterator<Item = MultChar> + '_ {
        self.exponents
            .iter()
            .map(move |&k| MultChar::new(self.q, self.level, k))
    }
}

/// Every Frobenius orbit of `F_q`-regular characters of `F_{q^d}^×`, sorted by
/// canonical exponent.
pub fn enumerate_regular_orbits(q: u64, level: u32) -> Vec<RegularOrbit> {
    let m = q.pow(level) - 1;
    (0..m.max(1))
        .filter_map(|k| {
            let orbit = RegularOrbit::generated(q, level, 1, k);
            (orbit.canonical() == k && orbit.is_regular()).then_some(orbit)
        })
        .collect()
}

/// `ψ_b(x) = ζ_p^{Tr(b·x)}` on `F_{q^level}`, the trace taken down to `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AddChar {
    level: u32,
    shift: FqElem,
}

impl AddChar {
    pub fn new(tower: &FieldTower, level: u32, shift: FqElem) -> Result<AddChar> {
        if !tower.supports(level) {
            return Err(Error::BadDivisor {
                inner: level,
                outer: tower.degree(),
            });
        }
        if shift.is_zero() {
            return Err(Error::ZeroScalar);
        }
        if !tower.in_subfield(shift, level) {
            return Err(Error::NotInSubfield {
                index: shift.index(),
                degree: level,
            });
        }
        Ok(AddChar { level, shift })
    }

    /// The standard character of `F_q` (shift `b = 1`).
    pub fn standard(tower: &FieldTower) -> AddChar {
        AddChar {
            level: 1,
            shift: tower.one(),
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn shift(&self) -> FqElem {
        self.shift
    }

    /// `ψ^{-1} = ψ_{-b}`.
    pub fn inverse(&self, tower: &FieldTower) -> AddChar {
        AddChar {
            level: self.level,
            shift: tower.neg(self.shift),
        }
    }

    /// Character of `F_{q^d}` obtained by composing with `Tr_{d:level}`.
    pub fn lift(&self, tower: &FieldTower, level: u32) -> Result<AddChar> {
        if !level.is_multiple_of(self.level) || !tower.supports(level) {
            return Err(Error::BadDivisor {
                inner: self.level,
                outer: level,
            });
        }
        Ok(AddChar {
            level,
            shift: self.shift,
        })
    }

    pub fn eval(&self, tower: &FieldTower, x: FqElem) -> Complex64 {
        let t = tower.absolute_trace(tower.mul(self.shift, x), self.level);
        unit_root(tower.p(), t)
    }

    /// Table of values on `F_{q^level}` for repeated evaluation.
    pub fn table(&self, tower: &FieldTower) -> AddTable {
        let cof = tower.cofactor(self.level);
        let count = tower.field_size(self.level) - 1;
        let values = (0..count)
            .map(|j| self.eval(tower, tower.from_index(j * cof)))
            .collect();
        AddTable { cof, values }
    }
}

/// Values of an additive character indexed by subfield logarithm.
#[derive(Clone, Debug)]
pub struct AddTable {
    cof: u64,
    values: Vec<Complex64>,
}

impl AddTable {
    pub fn get(&self, x: FqElem) -> Complex64 {
        match x.index() {
            None => Complex64::new(1.0, 0.0),
            Some(k) => self.values[(k / self.cof) as usize],
        }
    }
}

/// `G(β, φ) = Σ_{a ∈ F_{q^N}^×} β^{-1}(a) φ(Tr_{N:1} a)`.
pub fn gauss_sum(tower: &FieldTower, beta: &MultChar, phi: &AddChar) -> Complex64 {
    gauss_sum_with(tower, beta, phi, false)
}

/// The equivalent form `Σ_a β(a) φ(Tr_{N:1} a^{-1})`.
pub fn gauss_sum_inverted(tower: &FieldTower, beta: &MultChar, phi: &AddChar) -> Complex64 {
    gauss_sum_with(tower, beta, phi, true)
}

fn gauss_sum_with(tower: &FieldTower, beta: &MultChar, phi: &AddChar, inverted: bool) -> Complex64 {
    let level = beta.level();
    let big = phi
        .lift(tower, level)
        .expect("gauss sum level must be a multiple of the additive character level");
    let m = beta.modulus();
    let roots = RootTable::new(m);
    let g = tower.subfield_generator(level).expect("level supported by tower");
    let step = g.index().unwrap();
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..m {
        let a = tower.from_index(j * step);
        let (chi_exp, arg) = if inverted {
            (mul_mod(beta.exponent(), j, m), tower.inv(a).unwrap())
        } else {
            (mul_mod(m - beta.exponent(), j, m), a)
        };
        sum += roots.get(chi_exp) * big.eval(tower, arg);
    }
    sum
}
