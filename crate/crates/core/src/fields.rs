//! Towers of finite fields `F_q ⊆ F_{q^d} ⊆ F_{q^L}` realized inside one
//! ambient field.
//!
//! Every element of the ambient field is stored as a discrete logarithm with
//! respect to a fixed primitive root `g`; addition goes through a Zech
//! logarithm table. Subfields are the images of powers of `g`, so norms,
//! traces and Frobenius twists reduce to index arithmetic.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::arith::{checked_pow, divisors, is_prime, pow_mod, prime_factors, prime_power};
use crate::error::{Error, Result};

/// Default cap on `q^L`.
pub const DEFAULT_FIELD_LIMIT: u64 = 1 << 20;

const CACHE_MAGIC: &[u8; 5] = b"GTWR1";
const ZECH_NONE: u32 = u32::MAX;

/// An element of the ambient field: zero, or `g^k` with `k` reduced mod `q^L - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FqElem(u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(u32::MAX);

    pub fn is_zero(self) -> bool {
        self.0 == u32::MAX
    }

    /// Discrete log with respect to the tower generator, `None` for zero.
    pub fn index(self) -> Option<u64> {
        (!self.is_zero()).then_some(self.0 as u64)
    }

    /// Raw encoding, stable across runs for a fixed tower; used as hash key.
    pub fn raw(self) -> u32 {
        self.0
    }
}

/// Construction knobs for [`FieldTower::build`].
#[derive(Clone, Debug)]
pub struct TowerOptions {
    /// Upper bound on `q^L`.
    pub limit: u64,
    /// Which primitive polynomial to use, counted in search order. Zero is the
    /// canonical choice; other values exist so tests can check that results do
    /// not depend on the modulus.
    pub modulus_rank: usize,
}

impl Default for TowerOptions {
    fn default() -> Self {
        TowerOptions {
            limit: DEFAULT_FIELD_LIMIT,
            modulus_rank: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FieldTower {
    p: u64,
    f: u32,
    degree: u32,
    q: u64,
    /// `q^L - 1`, the order of the multiplicative group.
    order: u64,
    /// Monic modulus over `F_p`, coefficients `c_0..=c_{fL}`.
    modulus: Vec<u64>,
    zech: Vec<u32>,
    /// Discrete logs of `1, 2, .., p-1` as elements of the prime field.
    prime_logs: Vec<u64>,
}

impl FieldTower {
    /// Builds the tower with `q = p^f` and ambient field `F_{q^L}`.
    pub fn build(p: u64, f: u32, degree: u32, opts: &TowerOptions) -> Result<FieldTower> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        assert!(f >= 1 && degree >= 1, "tower degrees must be positive");
        let dim = f * degree;
        let size = checked_pow(p, dim).unwrap_or(u128::MAX);
        if size > opts.limit as u128 {
            return Err(Error::FieldTooLarge {
                size,
                limit: opts.limit,
            });
        }
        let size = size as u64;
        let order = size - 1;
        let modulus = find_primitive_modulus(p, dim, opts.modulus_rank)?;
        let zech = build_zech(p, &modulus, order);
        Ok(Self::assemble(p, f, degree, modulus, zech))
    }

    /// Like [`FieldTower::build`], but reads and writes
    /// `p{p}_f{f}_L{L}.tower` in `cache_dir` for the canonical modulus.
    pub fn build_cached(
        p: u64,
        f: u32,
        degree: u32,
        opts: &TowerOptions,
        cache_dir: Option<&Path>,
    ) -> Result<FieldTower> {
        let dir = match cache_dir {
            Some(d) if opts.modulus_rank == 0 => d,
            _ => return Self::build(p, f, degree, opts),
        };
        let path = dir.join(Self::cache_file_name(p, f, degree));
        if path.exists() {
            let tower = Self::read_cache(&path)?;
            if tower.p == p && tower.f == f && tower.degree == degree {
                return Ok(tower);
            }
            return Err(Error::CacheFormat {
                path: path.display().to_string(),
                reason: "header does not match requested tower".into(),
            });
        }
        let tower = Self::build(p, f, degree, opts)?;
        fs::create_dir_all(dir)?;
        tower.write_cache(&path)?;
        Ok(tower)
    }

    /// Tower for a prime power `q` with ambient field `F_{q^L}`.
    pub fn for_q(q: u64, degree: u32, opts: &TowerOptions) -> Result<FieldTower> {
        let (p, f) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::build(p, f, degree, opts)
    }

    /// Least `r` such that the generator of `reference` corresponds to
    /// `g^r` here, i.e. `g^r` is a root of the reference modulus. A character
    /// with exponent `k` relative to `reference` has exponent `k·r^{-1}` here.
    pub fn relabel_log(&self, reference: &FieldTower) -> Result<u64> {
        if (reference.p, reference.f, reference.degree) != (self.p, self.f, self.degree) {
            return Err(Error::Shape("towers describe different fields".into()));
        }
        let coeffs: Vec<FqElem> = reference.modulus.iter().map(|&c| self.from_int(c as i64)).collect();
        (1..self.order)
            .filter(|&r| num_integer::gcd(r, self.order) == 1)
            .find(|&r| {
                let x = self.from_index(r);
                coeffs
                    .iter()
                    .rev()
                    .fold(self.zero(), |acc, &c| self.add(self.mul(acc, x), c))
                    .is_zero()
            })
            .ok_or(Error::NoPrimitivePolynomial)
    }

    pub fn cache_file_name(p: u64, f: u32, degree: u32) -> PathBuf {
        PathBuf::from(format!("p{p}_f{f}_L{degree}.tower"))
    }

    fn assemble(p: u64, f: u32, degree: u32, modulus: Vec<u64>, zech: Vec<u32>) -> FieldTower {
        let q = p.pow(f);
        let order = (zech.len() as u64).max(1);
        let mut tower = FieldTower {
            p,
            f,
            degree,
            q,
            order,
            modulus,
            zech,
            prime_logs: Vec::new(),
        };
        let mut logs = Vec::with_capacity(p as usize - 1);
        let mut acc = tower.one();
        for _ in 1..p {
            logs.push(acc.0 as u64);
            acc = tower.add(acc, tower.one());
        }
        debug_assert!(acc.is_zero());
        tower.prime_logs = logs;
        tower
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    /// Ambient degree `L` over `F_q`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Order of the ambient multiplicative group, `q^L - 1`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zech_table(&self) -> &[u32] {
        &self.zech
    }

    /// `q^d` for a level `d` of the tower.
    pub fn field_size(&self, level: u32) -> u64 {
        self.q.pow(level)
    }

    pub fn supports(&self, level: u32) -> bool {
        level >= 1 && self.degree.is_multiple_of(level)
    }

    fn check_level(&self, level: u32) -> Result<()> {
        if self.supports(level) {
            Ok(())
        } else {
            Err(Error::BadDivisor {
                inner: level,
                outer: self.degree,
            })
        }
    }

    /// Exponent `c_d = (q^L - 1)/(q^d - 1)` mapping level-`d` logs to ambient logs.
    pub fn cofactor(&self, level: u32) -> u64 {
        self.order / (self.field_size(level) - 1)
    }

    pub fn zero(&self) -> FqElem {
        FqElem::ZERO
    }

    pub fn one(&self) -> FqElem {
        FqElem(0)
    }

    /// The primitive root `g`.
    pub fn generator(&self) -> FqElem {
        self.from_index(1)
    }

    pub fn from_index(&self, k: u64) -> FqElem {
        FqElem((k % self.order) as u32)
    }

    /// Canonical generator `g_d = g^{(q^L-1)/(q^d-1)}` of `F_{q^d}^×`.
    pub fn subfield_generator(&self, level: u32) -> Result<FqElem> {
        self.check_level(level)?;
        Ok(self.from_index(self.cofactor(level)))
    }

    /// The integer `k mod p` as a field element.
    pub fn from_int(&self, k: i64) -> FqElem {
        let r = k.rem_euclid(self.p as i64) as usize;
        if r == 0 {
            FqElem::ZERO
        } else {
            FqElem(self.prime_logs[r - 1] as u32)
        }
    }

    /// Inverse of [`FieldTower::from_int`] on the prime field.
    pub fn lift_prime(&self, x: FqElem) -> Option<u64> {
        if x.is_zero() {
            return Some(0);
        }
        let k = x.0 as u64;
        self.prime_logs.iter().position(|&l| l == k).map(|i| i as u64 + 1)
    }

    /// Discrete log of `x` with respect to `g_d`; `None` if zero or outside `F_{q^d}`.
    pub fn subfield_log(&self, x: FqElem, level: u32) -> Option<u64> {
        let k = x.index()?;
        let c = self.cofactor(level);
        (k % c == 0).then_some(k / c)
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.is_zero() || b.is_zero() {
            return FqElem::ZERO;
        }
        FqElem(((a.0 as u64 + b.0 as u64) % self.order) as u32)
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let (i, j) = (a.0 as u64, b.0 as u64);
        let d = (j + self.order - i) % self.order;
        match self.zech[d as usize] {
            ZECH_NONE => FqElem::ZERO,
            z => FqElem(((i + z as u64) % self.order) as u32),
        }
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        if a.is_zero() || self.p == 2 {
            return a;
        }
        FqElem(((a.0 as u64 + self.order / 2) % self.order) as u32)
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        a.index().map(|k| FqElem(((self.order - k) % self.order) as u32))
    }

    /// `a / b`; panics when `b` is zero.
    pub fn div(&self, a: FqElem, b: FqElem) -> FqElem {
        self.mul(a, self.inv(b).expect("division by zero"))
    }

    pub fn pow(&self, a: FqElem, e: i64) -> FqElem {
        match a.index() {
            None if e == 0 => self.one(),
            None => FqElem::ZERO,
            Some(k) => {
                let e = e.rem_euclid(self.order as i64) as u128;
                FqElem((k as u128 * e % self.order as u128) as u32)
            }
        }
    }

    /// `x ↦ x^{q^i}`; negative `i` applies the inverse automorphism.
    pub fn frobenius(&self, x: FqElem, i: i64) -> FqElem {
        let Some(k) = x.index() else {
            return x;
        };
        let shift = i.rem_euclid(self.degree as i64) as u64;
        let e = pow_mod(self.q, shift, self.order);
        FqElem((k as u128 * e as u128 % self.order as u128) as u32)
    }

    fn frobenius_p(&self, x: FqElem, i: u32) -> FqElem {
        let Some(k) = x.index() else {
            return x;
        };
        let e = pow_mod(self.p, i as u64, self.order);
        FqElem((k as u128 * e as u128 % self.order as u128) as u32)
    }

    pub fn in_subfield(&self, x: FqElem, level: u32) -> bool {
        match x.index() {
            None => true,
            Some(k) => self.supports(level) && k % self.cofactor(level) == 0,
        }
    }

    /// Smallest `d | L` with `x ∈ F_{q^d}`.
    pub fn subfield_level(&self, x: FqElem) -> u32 {
        divisors(self.degree)
            .into_iter()
            .find(|&d| self.in_subfield(x, d))
            .unwrap_or(self.degree)
    }

    /// All elements of `F_{q^d}`: zero first, then `g_d^0, g_d^1, ..`.
    pub fn elements(&self, level: u32) -> Result<Vec<FqElem>> {
        let g = self.subfield_generator(level)?;
        let count = self.field_size(level) - 1;
        let mut out = Vec::with_capacity(count as usize + 1);
        out.push(FqElem::ZERO);
        let step = g.0 as u64;
        out.extend((0..count).map(|j| FqElem((j * step % self.order) as u32)));
        Ok(out)
    }

    /// Nonzero elements of `F_{q^d}` in log order.
    pub fn units(&self, level: u32) -> Result<Vec<FqElem>> {
        let mut all = self.elements(level)?;
        all.remove(0);
        Ok(all)
    }

    fn check_pair(&self, x: FqElem, from: u32, to: u32) -> Result<()> {
        self.check_level(from)?;
        if to == 0 || !from.is_multiple_of(to) {
            return Err(Error::BadDivisor { inner: to, outer: from });
        }
        if !self.in_subfield(x, from) {
            return Err(Error::NotInSubfield {
                index: x.index(),
                degree: from,
            });
        }
        Ok(())
    }

    /// `N_{F_{q^from}/F_{q^to}}(x) = x^{(q^from - 1)/(q^to - 1)}`.
    pub fn norm(&self, x: FqElem, from: u32, to: u32) -> Result<FqElem> {
        self.check_pair(x, from, to)?;
        let e = (self.field_size(from) - 1) / (self.field_size(to) - 1);
        Ok(self.pow(x, e as i64))
    }

    /// `Tr_{F_{q^from}/F_{q^to}}(x) = Σ_{i<from/to} x^{q^{to·i}}`.
    pub fn trace(&self, x: FqElem, from: u32, to: u32) -> Result<FqElem> {
        self.check_pair(x, from, to)?;
        let r = from / to;
        Ok((0..r).fold(FqElem::ZERO, |acc, i| self.add(acc, self.frobenius(x, (to * i) as i64))))
    }

    /// Absolute trace to `F_p`, lifted to `0..p`.
    pub fn absolute_trace(&self, x: FqElem, level: u32) -> u64 {
        let steps = self.f * level;
        let t = (0..steps).fold(FqElem::ZERO, |acc, i| self.add(acc, self.frobenius_p(x, i)));
        self.lift_prime(t).expect("absolute trace lies in the prime field")
    }

    /// Coefficient vector over `F_p` (length `fL`, constant term first).
    pub fn to_poly(&self, x: FqElem) -> Vec<u64> {
        let dim = self.modulus.len() - 1;
        match x.index() {
            None => vec![0; dim],
            Some(k) => {
                let mut xpoly = vec![0; dim];
                if dim == 1 {
                    xpoly[0] = (self.p - self.modulus[0]) % self.p;
                } else {
                    xpoly[1] = 1;
                }
                poly_pow_mod(&xpoly, k, &self.modulus, self.p)
            }
        }
    }

    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::with_capacity(64 + 8 * self.zech.len());
        buf.extend_from_slice(CACHE_MAGIC);
        for v in [self.p, self.f as u64, self.degree as u64, self.modulus.len() as u64] {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        for &c in &self.modulus {
            buf.extend_from_slice(&c.to_le_bytes());
        }
        buf.extend_from_slice(&(self.zech.len() as u64).to_le_bytes());
        for &z in &self.zech {
            let v = if z == ZECH_NONE { u64::MAX } else { z as u64 };
            buf.extend_from_slice(&v.to_le_bytes());
        }
        let tmp = path.with_extension("tower.tmp");
        fs::File::create(&tmp)?.write_all(&buf)?;
        fs::rename(tmp, path)?;
        Ok(())
    }

    pub fn read_cache(path: &Path) -> Result<FieldTower> {
        let bad = |reason: &str| Error::CacheFormat {
            path: path.display().to_string(),
            reason: reason.to_string(),
        };
        let mut buf = Vec::new();
        fs::File::open(path)?.read_to_end(&mut buf)?;
        if buf.len() < 5 || &buf[..5] != CACHE_MAGIC {
            return Err(bad("bad magic"));
        }
        let mut words = buf[5..].chunks_exact(8).map(|c| {
            let mut w = [0u8; 8];
            w.copy_from_slice(c);
            u64::from_le_bytes(w)
        });
        let mut next = || words.next().ok_or_else(|| bad("truncated"));
        let p = next()?;
        let f = next()? as u32;
        let degree = next()? as u32;
        let ncoef = next()? as usize;
        if !is_prime(p) || f == 0 || degree == 0 || ncoef != (f * degree) as usize + 1 {
            return Err(bad("inconsistent header"));
        }
        let modulus = (0..ncoef).map(|_| next()).collect::<Result<Vec<_>>>()?;
        let nzech = next()?;
        let expected = checked_pow(p, f * degree).map(|s| s - 1);
        if expected != Some(nzech as u128) || modulus[ncoef - 1] != 1 {
            return Err(bad("inconsistent modulus or table length"));
        }
        let zech = (0..nzech)
            .map(|_| {
                next().and_then(|v| match v {
                    u64::MAX => Ok(ZECH_NONE),
                    v if v < nzech => Ok(v as u32),
                    _ => Err(bad("zech entry out of range")),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(p, f, degree, modulus, zech))
    }
}

fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let dim = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * dim];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (dim..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &m) in modulus[..dim].iter().enumerate() {
            let idx = k - dim + i;
            prod[idx] = (prod[idx] + (p - c) * m) % p;
        }
    }
    prod.truncate(dim);
    prod
}

fn poly_pow_mod(base: &[u64], mut e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let dim = modulus.len() - 1;
    let mut acc = vec![0u64; dim];
    acc[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, modulus, p);
        }
        b = poly_mul_mod(&b, &b, modulus, p);
        e >>= 1;
    }
    acc
}

/// Monic degree-`dim` polynomials with `x` a primitive root, in the order of
/// the integer `Σ c_i p^i` built from the lower coefficients.
fn find_primitive_modulus(p: u64, dim: u32, rank: usize) -> Result<Vec<u64>> {
    let d = dim as usize;
    let order = p.pow(dim) - 1;
    let factors = prime_factors(order);
    let mut seen = 0usize;
    for code in 0..p.pow(dim) {
        let mut modulus = vec![0u64; d + 1];
        let mut c = code;
        for coef in modulus.iter_mut().take(d) {
            *coef = c % p;
            c /= p;
        }
        modulus[d] = 1;
        if modulus[0] == 0 {
            continue;
        }
        let mut x = vec![0u64; d];
        if d == 1 {
            x[0] = (p - modulus[0]) % p;
        } else {
            x[1] = 1;
        }
        let is_one = |v: &[u64]| v[0] == 1 && v[1..].iter().all(|&c| c == 0);
        let primitive = is_one(&poly_pow_mod(&x, order, &modulus, p))
            && factors
                .iter()
                .all(|&r| !is_one(&poly_pow_mod(&x, order / r, &modulus, p)));
        if primitive {
            if seen == rank {
                return Ok(modulus);
            }
            seen += 1;
        }
    }
    Err(Error::NoPrimitivePolynomial)
}

fn build_zech(p: u64, modulus: &[u64], order: u64) -> Vec<u32> {
    let dim = modulus.len() - 1;
    let size = order as usize + 1;
    let encode = |v: &[u64]| v.iter().rev().fold(0u64, |acc, &c| acc * p + c) as usize;
    let mut log_of = vec![ZECH_NONE; size];
    let mut code_of = vec![0usize; order as usize];
    let mut cur = vec![0u64; dim];
    cur[0] = 1;
    let mut x = vec![0u64; dim];
    if dim == 1 {
        x[0] = (p - modulus[0]) % p;
    } else {
        x[1] = 1;
    }
    for j in 0..order as usize {
        let code = encode(&cur);
        code_of[j] = code;
        log_of[code] = j as u32;
        cur = poly_mul_mod(&cur, &x, modulus, p);
    }
    code_of
        .iter()
        .map(|&code| {
            let d0 = code as u64 % p;
            let plus_one = code - d0 as usize + ((d0 + 1) % p) as usize;
            if plus_one == 0 {
                ZECH_NONE
            } else {
                log_of[plus_one]
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tower(p: u64, f: u32, l: u32) -> FieldTower {
        FieldTower::build(p, f, l, &TowerOptions::default()).unwrap()
    }

    fn add_polys(t: &FieldTower, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % t.p()).collect()
    }

    #[test]
    fn f9_unit_group() {
        let t = tower(3, 1, 2);
        assert_eq!(t.order(), 8);
        assert_eq!(t.pow(t.generator(), 8), t.one());
        assert_ne!(t.pow(t.generator(), 4), t.one());
    }

    #[test]
    fn f4096_supports_all_divisors() {
        let t = tower(2, 1, 12);
        assert_eq!(t.order(), 4095);
        for d in [1, 2, 3, 4, 6, 12] {
            let elems = t.elements(d).unwrap();
            assert_eq!(elems.len() as u64, 1 << d);
            let sample: Vec<_> = elems.iter().step_by(1.max(elems.len() / 40)).collect();
            for &&a in &sample {
                for &&b in &sample {
                    assert!(t.in_subfield(t.add(a, b), d));
                    assert!(t.in_subfield(t.mul(a, b), d));
                }
            }
        }
        assert!(!t.supports(5));
    }

    #[test]
    fn too_large_and_not_prime() {
        let opts = TowerOptions::default();
        assert!(matches!(
            FieldTower::build(3, 1, 21, &opts),
            Err(Error::FieldTooLarge { .. })
        ));
        assert!(matches!(FieldTower::build(6, 1, 2, &opts), Err(Error::NotPrime(6))));
    }

    #[test]
    fn zech_matches_polynomial_addition() {
        for (p, f, l) in [(2, 1, 12), (3, 1, 5), (5, 2, 2), (7, 1, 3)] {
            let t = tower(p, f, l);
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..10_000 {
                let a = t.from_index(rng.gen_range(0..t.order()));
                let b = t.from_index(rng.gen_range(0..t.order()));
                let expected = add_polys(&t, &t.to_poly(a), &t.to_poly(b));
                assert_eq!(t.to_poly(t.add(a, b)), expected);
            }
        }
    }

    #[test]
    fn norm_examples() {
        let t = tower(3, 1, 2);
        let g = t.generator();
        assert_eq!(t.norm(g, 2, 1).unwrap(), t.pow(g, 4));
        assert_eq!(t.norm(t.one(), 2, 1).unwrap(), t.one());
        assert_eq!(t.norm(t.zero(), 2, 1).unwrap(), t.zero());
        assert!(matches!(t.norm(g, 1, 1), Err(Error::NotInSubfield { .. })));
        assert!(matches!(t.norm(g, 2, 3), Err(Error::BadDivisor { .. })));

        // F_4 -> F_2 is onto {1}
        let t2 = tower(2, 1, 2);
        for x in t2.units(2).unwrap() {
            assert_eq!(t2.norm(x, 2, 1).unwrap(), t2.one());
        }
    }

    #[test]
    fn trace_examples() {
        let t = tower(2, 1, 2);
        let g = t.generator();
        // g^2 + g + 1 = 0 in F_4
        assert_eq!(t.add(t.add(t.mul(g, g), g), t.one()), t.zero());
        assert_eq!(t.trace(g, 2, 1).unwrap(), t.one());
        assert_eq!(t.trace(t.zero(), 2, 1).unwrap(), t.zero());

        let t3 = tower(3, 1, 2);
        let mut fibers = std::collections::HashMap::new();
        for x in t3.elements(2).unwrap() {
            *fibers.entry(t3.trace(x, 2, 1).unwrap()).or_insert(0) += 1;
        }
        assert_eq!(fibers.len(), 3);
        assert!(fibers.values().all(|&c| c == 3));
    }

    #[test]
    fn frobenius_examples() {
        let t = tower(3, 1, 2);
        let g = t.generator();
        assert_eq!(t.frobenius(g, 0), g);
        assert_eq!(t.frobenius(g, 1), t.pow(g, 3));
        assert_eq!(t.frobenius(t.frobenius(g, 1), -1), g);
        for a in t.elements(1).unwrap() {
            assert_eq!(t.frobenius(a, 1), a);
        }
        let t4 = tower(2, 2, 3);
        for x in t4.elements(3).unwrap() {
            let mut y = x;
            for _ in 0..t4.f() * t4.degree() {
                y = t4.frobenius(y, 1);
            }
            assert_eq!(y, x);
        }
    }

    #[test]
    fn multiplicativity_and_additivity_exhaustive() {
        for (p, f, l) in [(2, 1, 4), (3, 1, 4), (2, 2, 2), (3, 1, 2)] {
            let t = tower(p, f, l);
            let all = t.elements(l).unwrap();
            for d in divisors(l) {
                for &x in &all {
                    for &y in &all {
                        assert_eq!(
                            t.norm(t.mul(x, y), l, d).unwrap(),
                            t.mul(t.norm(x, l, d).unwrap(), t.norm(y, l, d).unwrap())
                        );
                        assert_eq!(
                            t.trace(t.add(x, y), l, d).unwrap(),
                            t.add(t.trace(x, l, d).unwrap(), t.trace(y, l, d).unwrap())
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn transitivity_and_orbit_sizes() {
        let t = tower(2, 1, 12);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let x = t.from_index(rng.gen_range(0..t.order()));
            for (a, b, c) in [(12, 6, 3), (12, 4, 2), (12, 6, 1), (12, 4, 1)] {
                let two_step = t.norm(t.norm(x, a, b).unwrap(), b, c).unwrap();
                assert_eq!(two_step, t.norm(x, a, c).unwrap());
                let two_step = t.trace(t.trace(x, a, b).unwrap(), b, c).unwrap();
                assert_eq!(two_step, t.trace(x, a, c).unwrap());
            }
            let level = t.subfield_level(x);
            let mut orbit = std::collections::BTreeSet::new();
            for i in 0..12 {
                orbit.insert(t.frobenius(x, i));
            }
            assert_eq!(orbit.len() as u32, level);
        }
        for d in divisors(12) {
            assert_eq!(t.norm(t.generator(), 12, d).unwrap(), t.subfield_generator(d).unwrap());
        }
    }

    #[test]
    fn prime_field_lift() {
        let t = tower(5, 1, 2);
        for k in 0..5 {
            assert_eq!(t.lift_prime(t.from_int(k)), Some(k as u64));
        }
        assert_eq!(t.from_int(-1), t.neg(t.one()));
        assert_eq!(t.lift_prime(t.generator()), None);
    }

    #[test]
    fn alternative_modulus_differs() {
        let a = tower(2, 1, 6);
        let b = FieldTower::build(
            2,
            1,
            6,
            &TowerOptions {
                modulus_rank: 1,
                ..Default::default()
            },
        )
        .unwrap();
        assert_ne!(a.modulus(), b.modulus());
        assert_eq!(b.pow(b.generator(), 63), b.one());
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let built = FieldTower::build_cached(3, 1, 4, &TowerOptions::default(), Some(dir.path())).unwrap();
        let path = dir.path().join("p3_f1_L4.tower");
        assert!(path.exists());
        let bytes = fs::read(&path).unwrap();
        assert_eq!(&bytes[..5], b"GTWR1");
        let loaded = FieldTower::build_cached(3, 1, 4, &TowerOptions::default(), Some(dir.path())).unwrap();
        assert_eq!(built.modulus(), loaded.modulus());
        assert_eq!(built.zech_table(), loaded.zech_table());

        fs::write(&path, b"GTWR0junk").unwrap();
        assert!(matches!(FieldTower::read_cache(&path), Err(Error::CacheFormat { .. })));
    }

    #[test]
    fn relabeling_is_a_field_isomorphism() {
        let opts = TowerOptions {
            modulus_rank: 1,
            ..TowerOptions::default()
        };
        for (q, l) in [(3u64, 2u32), (2, 4), (4, 2)] {
            let a = FieldTower::for_q(q, l, &TowerOptions::default()).unwrap();
            let b = FieldTower::for_q(q, l, &opts).unwrap();
            let r = b.relabel_log(&a).unwrap();
            let map = |x: FqElem| match x.index() {
                None => b.zero(),
                Some(j) => b.from_index(j * r % b.order()),
            };
            let elems = a.elements(l).unwrap();
            for &x in &elems {
                for &y in &elems {
                    assert_eq!(map(a.add(x, y)), b.add(map(x), map(y)));
                }
            }
        }
        assert!(matches!(
            FieldTower::for_q(6, 1, &TowerOptions::default()),
            Err(Error::NotPrimePower(6))
        ));
    }
}
