//! Cuspidal representations of `GL_n(F_q)` labelled by Frobenius orbits of
//! regular characters of `F_{q^n}^×`, their trace characters, and their
//! normalized Bessel functions.

use std::fs;
use std::path::{Path, PathBuf};

use dashmap::DashMap;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::characters::{AddChar, MultChar, RegularOrbit};
use crate::error::{Error, Result};
use crate::fields::{FieldTower, FqElem};
use crate::gln::{enumerate_unipotent, psi_n, ClassData, Classifier, MatFq};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CuspidalSpec {
    n: u32,
    orbit: RegularOrbit,
}

impl CuspidalSpec {
    pub fn new(orbit: RegularOrbit) -> Result<CuspidalSpec> {
        if orbit.base() != 1 || !orbit.is_regular() {
            return Err(Error::NotAdmissible {
                level: orbit.level(),
                exponent: orbit.canonical(),
            });
        }
        Ok(CuspidalSpec {
            n: orbit.level(),
            orbit,
        })
    }

    /// The representation attached to the orbit of exponent `k` at level `n`.
    pub fn from_exponent(q: u64, n: u32, k: u64) -> Result<CuspidalSpec> {
        Self::new(RegularOrbit::regular(q, n, k)?)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.orbit.q()
    }

    pub fn orbit(&self) -> &RegularOrbit {
        &self.orbit
    }

    /// The canonical member of the orbit.
    pub fn parameter(&self) -> MultChar {
        self.orbit.representative()
    }

    /// `∏_{j=1}^{n-1} (q^j - 1)`.
    pub fn dimension(&self) -> u128 {
        let q = self.q() as u128;
        (1..self.n).map(|j| q.pow(j) - 1).product()
    }
}

/// Character value on a class, using `eta` as the orbit member.
///
/// Zero off primary classes; on a primary class with eigenvalue `α` of degree
/// `d` and unipotent Jordan type `λ` it is
/// `(-1)^{n-1} Σ_{i<d} η(α^{q^i}) ∏_{j=1}^{ℓ(λ)-1} (1 - q^{dj})`.
pub fn char_value_from_class(tower: &FieldTower, n: u32, eta: &MultChar, class: &ClassData) -> Complex64 {
    let ClassData::Primary { d, alpha, lambda } = class else {
        return Complex64::new(0.0, 0.0);
    };
    if !n.is_multiple_of(*d) {
        return Complex64::new(0.0, 0.0);
    }
    let orbit_sum: Complex64 = (0..*d)
        .map(|i| {
            eta.eval(tower, tower.frobenius(*alpha, i as i64))
                .expect("eigenvalue lies in F_{q^n}")
        })
        .sum();
    let qd = (tower.q() as f64).powi(*d as i32);
    let green: f64 = (1..lambda.len()).map(|j| 1.0 - qd.powi(j as i32)).product();
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    orbit_sum * (sign * green)
}

/// `χ_ρ(A)` for a single matrix.
pub fn char_value(tower: &FieldTower, rho: &CuspidalSpec, a: &MatFq) -> Result<Complex64> {
    let class = Classifier::new(tower, rho.n as usize)?.classify(a)?;
    Ok(char_value_from_class(tower, rho.n, &rho.parameter(), &class))
}

/// Central character `ω_ρ(a) = η(a)` for `a ∈ F_q^×`.
pub fn central_char(tower: &FieldTower, rho: &CuspidalSpec, a: FqElem) -> Result<Complex64> {
    if a.is_zero() {
        return Err(Error::EvalAtZero);
    }
    if !tower.in_subfield(a, 1) {
        return Err(Error::NotInSubfield {
            index: a.index(),
            degree: 1,
        });
    }
    rho.parameter().eval(tower, a)
}

/// Trace character of a cuspidal representation with memoized classification.
pub struct CuspidalCharacter<'t> {
    spec: CuspidalSpec,
    eta: MultChar,
    classifier: Classifier<'t>,
}

impl<'t> CuspidalCharacter<'t> {
    pub fn new(tower: &'t FieldTower, spec: CuspidalSpec) -> Result<CuspidalCharacter<'t>> {
        let classifier = Classifier::new(tower, spec.n as usize)?;
        Ok(CuspidalCharacter {
            eta: spec.parameter(),
            spec,
            classifier,
        })
    }

    pub fn spec(&self) -> &CuspidalSpec {
        &self.spec
    }

    pub fn tower(&self) -> &'t FieldTower {
        self.classifier.tower()
    }

    pub fn value(&self, a: &MatFq) -> Result<Complex64> {
        let class = self.classifier.classify(a)?;
        Ok(char_value_from_class(self.tower(), self.spec.n, &self.eta, &class))
    }
}

/// Serialized form of a Bessel memo table.
#[derive(Debug, Serialize, Deserialize)]
pub struct BesselCache {
    pub n: u32,
    pub q: u64,
    pub orbit: Vec<u64>,
    pub psi_shift: u64,
    pub tower: TowerTag,
    pub values: Vec<BesselEntry>,
}

/// Identifies the tower a cache was computed in; matrix entries are stored
/// as discrete logs and are only meaningful relative to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerTag {
    pub p: u64,
    pub f: u32,
    #[serde(rename = "L")]
    pub degree: u32,
    pub modulus: Vec<u64>,
}

impl TowerTag {
    pub fn of(tower: &FieldTower) -> TowerTag {
        TowerTag {
            p: tower.p(),
            f: tower.f(),
            degree: tower.degree(),
            modulus: tower.modulus().to_vec(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BesselEntry {
    /// Discrete logs of the entries, `-1` for zero.
    pub matrix: Vec<i64>,
    pub re: f64,
    pub im: f64,
}

/// Index of an additive character shift `b = g_1^{s-1}` as used on the
/// command line (`s = 1` is `b = 1`).
pub fn shift_index(tower: &FieldTower, psi: &AddChar) -> u64 {
    tower.subfield_log(psi.shift(), 1).expect("shift lies in F_q^×") + 1
}

/// `J_{ρ,ψ_n}(g) = |U_n|^{-1} Σ_{u ∈ U_n} χ_ρ(gu) ψ_n(u^{-1})`, memoized per
/// matrix. Concurrent callers see identical values.
pub struct BesselFunction<'t> {
    character: CuspidalCharacter<'t>,
    psi: AddChar,
    unipotents: Vec<(MatFq, Complex64)>,
    memo: DashMap<Vec<u32>, Complex64>,
}

impl<'t> BesselFunction<'t> {
    pub fn new(tower: &'t FieldTower, spec: CuspidalSpec, psi: AddChar, limit: u64) -> Result<BesselFunction<'t>> {
        let n = spec.n as usize;
        let table = psi.table(tower);
        let unipotents = enumerate_unipotent(tower, n, limit)?
            .map(|u| {
                let inv = u.inverse(tower).expect("unipotent is invertible");
                let weight = psi_n(tower, &inv, &table)?;
                Ok((u, weight))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BesselFunction {
            character: CuspidalCharacter::new(tower, spec)?,
            psi,
            unipotents,
            memo: DashMap::new(),
        })
    }

    pub fn spec(&self) -> &CuspidalSpec {
        self.character.spec()
    }

    pub fn psi(&self) -> &AddChar {
        &self.psi
    }

    pub fn tower(&self) -> &'t FieldTower {
        self.character.tower()
    }

    pub fn value(&self, g: &MatFq) -> Result<Complex64> {
        let key = g.key();
        if let Some(v) = self.memo.get(&key) {
            return Ok(*v);
        }
        let v = self.compute(g)?;
        self.memo.insert(key, v);
        Ok(v)
    }

    fn compute(&self, g: &MatFq) -> Result<Complex64> {
        if !g.is_invertible(self.tower()) {
            return Err(Error::SingularMatrix);
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for (u, weight) in &self.unipotents {
            let chi = self.character.value(&g.mul(self.tower(), u))?;
            sum += chi * weight;
        }
        Ok(sum / self.unipotents.len() as f64)
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// `bessel_{key}.json` naming the representation, character and tower.
    pub fn cache_path(&self, dir: &Path) -> PathBuf {
        let t = self.tower();
        let modcode = t
            .modulus()
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * t.p() as u128 + c as u128);
        let spec = self.spec();
        dir.join(format!(
            "bessel_n{}_p{}_f{}_L{}_m{}_o{}_s{}.json",
            spec.n,
            t.p(),
            t.f(),
            t.degree(),
            modcode,
            spec.orbit.canonical(),
            shift_index(t, &self.psi)
        ))
    }

    pub fn to_cache(&self) -> BesselCache {
        let mut values: Vec<BesselEntry> = self
            .memo
            .iter()
            .map(|e| BesselEntry {
                matrix: e
                    .key()
                    .iter()
                    .map(|&r| if r == u32::MAX { -1 } else { r as i64 })
                    .collect(),
                re: e.value().re,
                im: e.value().im,
            })
            .collect();
        values.sort_by(|a, b| a.matrix.cmp(&b.matrix));
        let spec = self.spec();
        BesselCache {
            n: spec.n,
            q: spec.q(),
            orbit: spec.orbit.exponents().to_vec(),
            psi_shift: shift_index(self.tower(), &self.psi),
            tower: TowerTag::of(self.tower()),
            values,
        }
    }

    /// Merges cached values; rejects caches for a different setup.
    pub fn load_cache(&self, cache: &BesselCache) -> Result<()> {
        let spec = self.spec();
        let matches = cache.n == spec.n
            && cache.q == spec.q()
            && cache.orbit == spec.orbit.exponents()
            && cache.psi_shift == shift_index(self.tower(), &self.psi)
            && cache.tower == TowerTag::of(self.tower());
        if !matches {
            return Err(Error::CacheFormat {
                path: "<bessel cache>".into(),
                reason: "cache describes a different representation or tower".into(),
            });
        }
        let nn = (spec.n * spec.n) as usize;
        for entry in &cache.values {
            if entry.matrix.len() != nn {
                return Err(Error::CacheFormat {
                    path: "<bessel cache>".into(),
                    reason: "matrix of wrong size".into(),
                });
            }
            let key = entry
                .matrix
                .iter()
                .map(|&r| if r < 0 { u32::MAX } else { r as u32 })
                .collect();
            self.memo.insert(key, Complex64::new(entry.re, entry.im));
        }
        Ok(())
    }

    pub fn load_from_dir(&self, dir: &Path) -> Result<bool> {
        let path = self.cache_path(dir);
        if !path.exists() {
            return Ok(false);
        }
        let cache: BesselCache = serde_json::from_slice(&fs::read(&path)?)?;
        self.load_cache(&cache).map_err(|e| match e {
            Error::CacheFormat { reason, .. } => Error::CacheFormat {
                path: path.display().to_string(),
                reason,
            },
            other => other,
        })?;
        Ok(true)
    }

    pub fn save_to_dir(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = self.cache_path(dir);
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_vec(&self.to_cache())?)?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }
}
