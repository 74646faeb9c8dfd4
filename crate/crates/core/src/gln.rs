//! Matrices over `F_q`: unipotent enumeration, `U_m \ GL_m` coset
//! representatives, the character `ψ_n` on `U_n`, and the conjugacy data of a
//! matrix needed to evaluate cuspidal characters.

use dashmap::DashMap;
use num_complex::Complex64;
use rand::Rng;

use crate::characters::AddTable;
use crate::error::{Error, Result};
use crate::fields::{FieldTower, FqElem};

/// Default cap on the size of any matrix enumeration.
pub const DEFAULT_ENUM_LIMIT: u64 = 10_000_000;

/// Square matrix with entries in `F_q`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatFq {
    n: usize,
    entries: Vec<FqElem>,
}

impl MatFq {
    pub fn zeros(n: usize) -> MatFq {
        MatFq {
            n,
            entries: vec![FqElem::ZERO; n * n],
        }
    }

    pub fn identity(tower: &FieldTower, n: usize) -> MatFq {
        let mut m = MatFq::zeros(n);
        for i in 0..n {
            m.set(i, i, tower.one());
        }
        m
    }

    pub fn scalar(n: usize, a: FqElem) -> MatFq {
        let mut m = MatFq::zeros(n);
        for i in 0..n {
            m.set(i, i, a);
        }
        m
    }

    /// Row-major matrix from entries; all entries must lie in `F_q`.
    pub fn from_entries(tower: &FieldTower, n: usize, entries: Vec<FqElem>) -> Result<MatFq> {
        if entries.len() != n * n {
            return Err(Error::Shape(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&x| !tower.in_subfield(x, 1)) {
            return Err(Error::NotInSubfield {
                index: bad.index(),
                degree: 1,
            });
        }
        Ok(MatFq { n, entries })
    }

    /// Row-major matrix from integers mod `p`.
    pub fn from_ints(tower: &FieldTower, n: usize, values: &[i64]) -> Result<MatFq> {
        Self::from_entries(tower, n, values.iter().map(|&v| tower.from_int(v)).collect())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> FqElem {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FqElem) {
        self.entries[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[FqElem] {
        &self.entries
    }

    /// Compact key for memo tables.
    pub fn key(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.raw()).collect()
    }

    pub fn mul(&self, tower: &FieldTower, other: &MatFq) -> MatFq {
        assert_eq!(self.n, other.n, "matrix sizes differ");
        let n = self.n;
        let mut out = MatFq::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    out.entries[idx] = tower.add(out.entries[idx], tower.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn add(&self, tower: &FieldTower, other: &MatFq) -> MatFq {
        MatFq {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| tower.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, tower: &FieldTower, c: FqElem) -> MatFq {
        MatFq {
            n: self.n,
            entries: self.entries.iter().map(|&a| tower.mul(a, c)).collect(),
        }
    }

    pub fn rank(&self, tower: &FieldTower) -> usize {
        let mut rows: Vec<Vec<FqElem>> = self.entries.chunks(self.n).map(|r| r.to_vec()).collect();
        row_reduce(tower, &mut rows)
    }

    pub fn is_invertible(&self, tower: &FieldTower) -> bool {
        self.rank(tower) == self.n
    }

    pub fn inverse(&self, tower: &FieldTower) -> Option<MatFq> {
        let n = self.n;
        let mut rows: Vec<Vec<FqElem>> = (0..n)
            .map(|i| {
                let mut r = self.entries[i * n..(i + 1) * n].to_vec();
                r.extend((0..n).map(|j| if i == j { tower.one() } else { FqElem::ZERO }));
                r
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !rows[r][col].is_zero())?;
            rows.swap(col, pivot);
            let inv = tower.inv(rows[col][col]).unwrap();
            for x in rows[col].iter_mut() {
                *x = tower.mul(*x, inv);
            }
            let pivot_row = rows[col].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let c = tower.neg(row[col]);
                for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                    *x = tower.add(*x, tower.mul(c, pv));
                }
            }
        }
        let entries = rows.into_iter().flat_map(|r| r[n..].to_vec()).collect();
        Some(MatFq { n, entries })
    }

    pub fn is_upper_unitriangular(&self, tower: &FieldTower) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => self.get(i, j) == tower.one(),
                std::cmp::Ordering::Greater => self.get(i, j).is_zero(),
                std::cmp::Ordering::Less => true,
            })
        })
    }
}

/// Gaussian elimination in place; returns the rank.
fn row_reduce(tower: &FieldTower, rows: &mut [Vec<FqElem>]) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = tower.inv(rows[rank][col]).unwrap();
        let pivot_row: Vec<FqElem> = rows[rank].iter().map(|&x| tower.mul(x, inv)).collect();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let c = tower.neg(row[col]);
            for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                *x = tower.add(*x, tower.mul(c, pv));
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// `|GL_n(F_q)|`.
pub fn gl_order(q: u64, n: u32) -> u128 {
    let qn = (q as u128).pow(n);
    (0..n).map(|i| qn - (q as u128).pow(i)).product()
}

/// `|U_n(F_q)| = q^{n(n-1)/2}`.
pub fn unipotent_order(q: u64, n: u32) -> u128 {
    (q as u128).pow(n * (n.saturating_sub(1)) / 2)
}

fn check_limit(count: u128, limit: u64) -> Result<()> {
    if count > limit as u128 {
        Err(Error::EnumerationTooLarge { count, limit })
    } else {
        Ok(())
    }
}

/// Iterator over all upper unitriangular matrices of size `n`.
pub struct UnipotentIter<'t> {
    tower: &'t FieldTower,
    n: usize,
    field: Vec<FqElem>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for UnipotentIter<'_> {
    type Item = MatFq;

    fn next(&mut self) -> Option<MatFq> {
        if self.done {
            return None;
        }
        let mut m = MatFq::identity(self.tower, self.n);
        let mut slot = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                m.set(i, j, self.field[self.digits[slot]]);
                slot += 1;
            }
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == self.digits.len() {
                self.done = true;
                break;
            }
            self.digits[pos] += 1;
            if self.digits[pos] < self.field.len() {
                break;
            }
            self.digits[pos] = 0;
            pos += 1;
        }
        Some(m)
    }
}

pub fn enumerate_unipotent(tower: &FieldTower, n: usize, limit: u64) -> Result<UnipotentIter<'_>> {
    check_limit(unipotent_order(tower.q(), n as u32), limit)?;
    Ok(UnipotentIter {
        tower,
        n,
        field: tower.elements(1)?,
        digits: vec![0; n * n.saturating_sub(1) / 2],
        done: false,
    })
}

/// `ψ_n(u) = ψ(Σ u_{i,i+1})`.
pub fn psi_n(tower: &FieldTower, u: &MatFq, psi: &AddTable) -> Result<Complex64> {
    if !u.is_upper_unitriangular(tower) {
        return Err(Error::NotUnipotent);
    }
    Ok(psi.get(superdiagonal_sum(tower, u)))
}

pub(crate) fn superdiagonal_sum(tower: &FieldTower, u: &MatFq) -> FqElem {
    (0..u.n.saturating_sub(1)).fold(FqElem::ZERO, |acc, i| tower.add(acc, u.get(i, i + 1)))
}

/// Leftmost nonzero column.
fn pivot(row: &[FqElem]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

/// Normal form of the right coset `U_m g`: processing rows bottom-up, each row
/// is cleared at the pivot columns of every row below it.
pub fn coset_normal_form(tower: &FieldTower, g: &MatFq) -> MatFq {
    let n = g.n;
    let mut rows: Vec<Vec<FqElem>> = g.entries.chunks(n).map(|r| r.to_vec()).collect();
    for i in (0..n).rev() {
        for l in (i + 1..n).rev() {
            let Some(pc) = pivot(&rows[l]) else { continue };
            let v = rows[i][pc];
            if v.is_zero() {
                continue;
            }
            let c = tower.neg(tower.div(v, rows[l][pc]));
            let lower = rows[l].clone();
            for (x, &w) in rows[i].iter_mut().zip(&lower) {
                *x = tower.add(*x, tower.mul(c, w));
            }
        }
    }
    MatFq {
        n,
        entries: rows.concat(),
    }
}

/// One representative per right coset `U_m g` of `GL_m(F_q)`, each in
/// [`coset_normal_form`].
pub fn coset_reps(tower: &FieldTower, m: usize, limit: u64) -> Result<Vec<MatFq>> {
    let q = tower.q();
    check_limit(gl_order(q, m as u32) / unipotent_order(q, m as u32), limit)?;
    let field = tower.elements(1)?;
    let mut out = Vec::new();
    let mut rows: Vec<Vec<FqElem>> = Vec::new();
    build_rows(m, &field, &mut rows, &mut out);
    Ok(out)
}

fn build_rows(m: usize, field: &[FqElem], below: &mut Vec<Vec<FqElem>>, out: &mut Vec<MatFq>) {
    if below.len() == m {
        let entries = below.iter().rev().flatten().copied().collect();
        out.push(MatFq { n: m, entries });
        return;
    }
    let blocked: Vec<usize> = below.iter().filter_map(|r| pivot(r)).collect();
    let free: Vec<usize> = (0..m).filter(|c| !blocked.contains(c)).collect();
    let total = field.len().pow(free.len() as u32);
    for code in 1..total {
        let mut row = vec![FqElem::ZERO; m];
        let mut c = code;
        for &col in &free {
            row[col] = field[c % field.len()];
            c /= field.len();
        }
        below.push(row);
        build_rows(m, field, below, out);
        below.pop();
    }
}

/// Every invertible `n × n` matrix over `F_q`.
pub fn enumerate_gl(tower: &FieldTower, n: usize, limit: u64) -> Result<Vec<MatFq>> {
    let q = tower.q();
    check_limit((q as u128).pow((n * n) as u32), limit)?;
    let field = tower.elements(1)?;
    let total = field.len().pow((n * n) as u32);
    Ok((0..total)
        .filter_map(|code| {
            let mut c = code;
            let entries = (0..n * n)
                .map(|_| {
                    let e = field[c % field.len()];
                    c /= field.len();
                    e
                })
                .collect();
            let m = MatFq { n, entries };
            m.is_invertible(tower).then_some(m)
        })
        .collect())
}

pub fn random_unipotent<R: Rng>(tower: &FieldTower, n: usize, rng: &mut R) -> MatFq {
    let field = tower.elements(1).expect("level 1 always exists");
    let mut m = MatFq::identity(tower, n);
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, field[rng.gen_range(0..field.len())]);
        }
    }
    m
}

pub fn random_matrix<R: Rng>(tower: &FieldTower, n: usize, rng: &mut R) -> MatFq {
    let field = tower.elements(1).expect("level 1 always exists");
    MatFq {
        n,
        entries: (0..n * n).map(|_| field[rng.gen_range(0..field.len())]).collect(),
    }
}

pub fn random_invertible<R: Rng>(tower: &FieldTower, n: usize, rng: &mut R) -> MatFq {
    loop {
        let m = random_matrix(tower, n, rng);
        if m.is_invertible(tower) {
            return m;
        }
    }
}

type Poly = Vec<FqElem>;

fn poly_mul(tower: &FieldTower, a: &[FqElem], b: &[FqElem]) -> Poly {
    let mut out = vec![FqElem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = tower.add(out[i + j], tower.mul(x, y));
        }
    }
    out
}

fn poly_eval(tower: &FieldTower, c: &[FqElem], x: FqElem) -> FqElem {
    c.iter()
        .rev()
        .fold(FqElem::ZERO, |acc, &a| tower.add(tower.mul(acc, x), a))
}

/// Characteristic polynomial `det(xI - A)`, coefficients constant term
/// first, via reduction to Hessenberg form.
pub fn char_poly(tower: &FieldTower, a: &MatFq) -> Poly {
    let n = a.n;
    let mut h: Vec<Vec<FqElem>> = a.entries.chunks(n).map(|r| r.to_vec()).collect();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| !h[i][m - 1].is_zero()) else {
            continue;
        };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        for i in m + 1..n {
            if h[i][m - 1].is_zero() {
                continue;
            }
            let u = tower.div(h[i][m - 1], h[m][m - 1]);
            let neg_u = tower.neg(u);
            for j in 0..n {
                let v = tower.add(h[i][j], tower.mul(neg_u, h[m][j]));
                h[i][j] = v;
            }
            for row in h.iter_mut() {
                row[m] = tower.add(row[m], tower.mul(u, row[i]));
            }
        }
    }
    let one = tower.one();
    let mut polys: Vec<Poly> = vec![vec![one]];
    for m in 1..=n {
        let lin = vec![tower.neg(h[m - 1][m - 1]), one];
        let mut pm = poly_mul(tower, &lin, &polys[m - 1]);
        let mut t = one;
        for i in 1..m {
            t = tower.mul(t, h[m - i][m - i - 1]);
            let coef = tower.neg(tower.mul(t, h[m - i - 1][m - 1]));
            if coef.is_zero() {
                continue;
            }
            for (k, &c) in polys[m - i - 1].iter().enumerate() {
                pm[k] = tower.add(pm[k], tower.mul(coef, c));
            }
        }
        polys.push(pm);
    }
    polys.pop().unwrap()
}

/// Conjugacy data relevant to cuspidal characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassData {
    /// Characteristic polynomial has at least two distinct irreducible factors.
    Split,
    /// Characteristic polynomial is `h^{n/d}` with `h` irreducible of degree `d`.
    Primary {
        d: u32,
        /// Root of `h` in `F_{q^d}` with the least discrete log.
        alpha: FqElem,
        /// Jordan type of the unipotent part over `F_{q^d}`, weakly decreasing.
        lambda: Vec<u32>,
    },
}

impl ClassData {
    pub fn parts(&self) -> usize {
        match self {
            ClassData::Split => 0,
            ClassData::Primary { lambda, .. } => lambda.len(),
        }
    }
}

#[derive(Clone, Debug)]
struct PrimaryRoot {
    d: u32,
    alpha: FqElem,
    h: Poly,
}

/// Computes [`ClassData`] for `n × n` matrices, memoizing the factorization
/// step per characteristic polynomial. Safe to share between threads.
pub struct Classifier<'t> {
    tower: &'t FieldTower,
    n: usize,
    roots: DashMap<Poly, Option<PrimaryRoot>>,
}

impl<'t> Classifier<'t> {
    /// Requires `F_{q^n}` inside the tower.
    pub fn new(tower: &'t FieldTower, n: usize) -> Result<Classifier<'t>> {
        if !tower.supports(n as u32) {
            return Err(Error::BadDivisor {
                inner: n as u32,
                outer: tower.degree(),
            });
        }
        Ok(Classifier {
            tower,
            n,
            roots: DashMap::new(),
        })
    }

    pub fn tower(&self) -> &'t FieldTower {
        self.tower
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn classify(&self, a: &MatFq) -> Result<ClassData> {
        if a.n != self.n {
            return Err(Error::Shape(format!("expected {0}x{0} matrix", self.n)));
        }
        let t = self.tower;
        let cp = char_poly(t, a);
        if cp[0].is_zero() {
            return Err(Error::SingularMatrix);
        }
        let root = match self.roots.get(&cp) {
            Some(r) => r.clone(),
            None => {
                let r = self.primary_root(&cp);
                self.roots.insert(cp, r.clone());
                r
            }
        };
        let Some(PrimaryRoot { d, alpha, h }) = root else {
            return Ok(ClassData::Split);
        };
        // nullities of h(A)^k give the conjugate partition
        let mut ha = MatFq::zeros(self.n);
        for &c in h.iter().rev() {
            ha = ha.mul(t, a).add(t, &MatFq::scalar(self.n, c));
        }
        let mut power = ha.clone();
        let mut prev_null = 0usize;
        let mut conjugate = Vec::new();
        loop {
            let null = self.n - power.rank(t);
            if null == prev_null {
                break;
            }
            conjugate.push(((null - prev_null) / d as usize) as u32);
            if null == self.n {
                break;
            }
            prev_null = null;
            power = power.mul(t, &ha);
        }
        let lambda = (1..=conjugate[0])
            .map(|i| conjugate.iter().filter(|&&c| c >= i).count() as u32)
            .collect();
        Ok(ClassData::Primary { d, alpha, lambda })
    }

    fn primary_root(&self, cp: &[FqElem]) -> Option<PrimaryRoot> {
        let t = self.tower;
        let n = self.n as u32;
        let root = t.units(n).ok()?.into_iter().find(|&x| poly_eval(t, cp, x).is_zero())?;
        let d = t.subfield_level(root);
        let conjugates: Vec<FqElem> = (0..d).map(|i| t.frobenius(root, i as i64)).collect();
        let h = conjugates
            .iter()
            .fold(vec![t.one()], |acc, &r| poly_mul(t, &acc, &[t.neg(r), t.one()]));
        debug_assert!(h.iter().all(|&c| t.in_subfield(c, 1)));
        if !n.is_multiple_of(d) {
            return None;
        }
        let power = (0..n / d).fold(vec![t.one()], |acc, _| poly_mul(t, &acc, &h));
        if power != cp {
            return None;
        }
        let alpha = *conjugates.iter().min_by_key(|c| c.index()).unwrap();
        Some(PrimaryRoot { d, alpha, h })
    }
}

/// One-off classification; prefer a shared [`Classifier`] in loops.
pub fn class_data(tower: &FieldTower, a: &MatFq) -> Result<ClassData> {
    Classifier::new(tower, a.n)?.classify(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::AddChar;
    use crate::fields::TowerOptions;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tower(p: u64, f: u32, l: u32) -> FieldTower {
        FieldTower::build(p, f, l, &TowerOptions::default()).unwrap()
    }

    /// det via elimination, for checking char_poly pointwise.
    fn det(t: &FieldTower, a: &[Vec<FqElem>]) -> FqElem {
        let n = a.len();
        let mut rows = a.to_vec();
        let mut acc = t.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
                return FqElem::ZERO;
            };
            if p != col {
                rows.swap(p, col);
                acc = t.neg(acc);
            }
            acc = t.mul(acc, rows[col][col]);
            for r in col + 1..n {
                let c = t.neg(t.div(rows[r][col], rows[col][col]));
                let pr = rows[col].clone();
                for (x, &y) in rows[r].iter_mut().zip(&pr) {
                    *x = t.add(*x, t.mul(c, y));
                }
            }
        }
        acc
    }

    #[test]
    fn char_poly_matches_determinant() {
        let t = tower(3, 1, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=4 {
            for _ in 0..30 {
                let a = random_matrix(&t, n, &mut rng);
                let cp = char_poly(&t, &a);
                assert_eq!(cp.len(), n + 1);
                for x in t.elements(4).unwrap().into_iter().step_by(7) {
                    let m: Vec<Vec<FqElem>> = (0..n)
                        .map(|i| {
                            (0..n)
                                .map(|j| {
                                    let diag = if i == j { x } else { FqElem::ZERO };
                                    t.sub(diag, a.get(i, j))
                                })
                                .collect()
                        })
                        .collect();
                    assert_eq!(poly_eval(&t, &cp, x), det(&t, &m));
                }
            }
        }
    }

    #[test]
    fn unipotent_enumeration() {
        let t = tower(3, 1, 2);
        let all: Vec<_> = enumerate_unipotent(&t, 1, DEFAULT_ENUM_LIMIT).unwrap().collect();
        assert_eq!(all, vec![MatFq::identity(&t, 1)]);
        assert_eq!(enumerate_unipotent(&t, 2, DEFAULT_ENUM_LIMIT).unwrap().count(), 3);
        let t2 = tower(2, 1, 3);
        let all: Vec<_> = enumerate_unipotent(&t2, 3, DEFAULT_ENUM_LIMIT).unwrap().collect();
        assert_eq!(all.len(), 8);
        let distinct: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 8);
        assert!(all
            .iter()
            .all(|u| u.is_invertible(&t2) && u.is_upper_unitriangular(&t2)));
        assert!(matches!(
            enumerate_unipotent(&t2, 3, 4),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn psi_n_examples() {
        let t = tower(3, 1, 2);
        let table = AddChar::standard(&t).table(&t);
        let id = MatFq::identity(&t, 2);
        assert!((psi_n(&t, &id, &table).unwrap() - 1.0).norm() < 1e-12);
        let u = MatFq::from_ints(&t, 2, &[1, 1, 0, 1]).unwrap();
        let zeta3 = crate::characters::unit_root(3, 1);
        assert!((psi_n(&t, &u, &table).unwrap() - zeta3).norm() < 1e-12);
        let bad = MatFq::from_ints(&t, 2, &[1, 1, 1, 1]).unwrap();
        assert!(matches!(psi_n(&t, &bad, &table), Err(Error::NotUnipotent)));

        let t3 = tower(3, 1, 3);
        let table = AddChar::standard(&t3).table(&t3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let u = random_unipotent(&t3, 3, &mut rng);
            let v = random_unipotent(&t3, 3, &mut rng);
            let uv = psi_n(&t3, &u.mul(&t3, &v), &table).unwrap();
            let prod = psi_n(&t3, &u, &table).unwrap() * psi_n(&t3, &v, &table).unwrap();
            assert!((uv - prod).norm() < 1e-12);
            let inv = psi_n(&t3, &u.inverse(&t3).unwrap(), &table).unwrap();
            assert!((inv - psi_n(&t3, &u, &table).unwrap().conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn coset_rep_counts() {
        let t = tower(3, 1, 2);
        let reps = coset_reps(&t, 1, DEFAULT_ENUM_LIMIT).unwrap();
        assert_eq!(reps.len(), 2);
        assert_eq!(coset_reps(&t, 2, DEFAULT_ENUM_LIMIT).unwrap().len(), 16);
        let t2 = tower(2, 1, 6);
        assert_eq!(coset_reps(&t2, 2, DEFAULT_ENUM_LIMIT).unwrap().len(), 3);
        assert_eq!(coset_reps(&t2, 3, DEFAULT_ENUM_LIMIT).unwrap().len(), 21);
    }

    #[test]
    fn coset_reps_are_distinct_cosets() {
        for (p, f) in [(2, 1), (3, 1), (2, 2)] {
            let t = tower(p, f, 2);
            let reps = coset_reps(&t, 2, DEFAULT_ENUM_LIMIT).unwrap();
            for r in &reps {
                assert_eq!(&coset_normal_form(&t, r), r);
                for s in &reps {
                    if r != s {
                        let x = r.mul(&t, &s.inverse(&t).unwrap());
                        assert!(!x.is_upper_unitriangular(&t));
                    }
                }
            }
            // every invertible matrix normalizes to some representative
            let set: std::collections::HashSet<_> = reps.iter().cloned().collect();
            for g in enumerate_gl(&t, 2, DEFAULT_ENUM_LIMIT).unwrap() {
                assert!(set.contains(&coset_normal_form(&t, &g)));
            }
        }
        let t = tower(3, 1, 3);
        let reps = coset_reps(&t, 3, DEFAULT_ENUM_LIMIT).unwrap();
        assert_eq!(reps.len() as u128, gl_order(3, 3) / 27);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let r = &reps[rng.gen_range(0..reps.len())];
            let s = &reps[rng.gen_range(0..reps.len())];
            if r != s {
                assert!(!r.mul(&t, &s.inverse(&t).unwrap()).is_upper_unitriangular(&t));
            }
            let u = random_unipotent(&t, 3, &mut rng);
            assert_eq!(&coset_normal_form(&t, &u.mul(&t, r)), r);
        }
    }

    #[test]
    fn class_data_examples() {
        let t = tower(3, 1, 2);
        let two = t.from_int(2);
        assert_eq!(
            class_data(&t, &MatFq::scalar(2, two)).unwrap(),
            ClassData::Primary {
                d: 1,
                alpha: two,
                lambda: vec![1, 1]
            }
        );
        let diag = MatFq::from_ints(&t, 2, &[1, 0, 0, 2]).unwrap();
        assert_eq!(class_data(&t, &diag).unwrap(), ClassData::Split);
        // x^2 + 1 is irreducible over F_3: companion [[0, -1], [1, 0]]
        let comp = MatFq::from_ints(&t, 2, &[0, -1, 1, 0]).unwrap();
        match class_data(&t, &comp).unwrap() {
            ClassData::Primary { d, alpha, lambda } => {
                assert_eq!(d, 2);
                assert_eq!(lambda, vec![1]);
                assert_eq!(t.add(t.mul(alpha, alpha), t.one()), t.zero());
            }
            other => panic!("unexpected {other:?}"),
        }
        let jordan = MatFq::from_ints(&t, 2, &[2, 1, 0, 2]).unwrap();
        assert_eq!(
            class_data(&t, &jordan).unwrap(),
            ClassData::Primary {
                d: 1,
                alpha: two,
                lambda: vec![2]
            }
        );
        let singular = MatFq::from_ints(&t, 2, &[1, 1, 1, 1]).unwrap();
        assert!(matches!(class_data(&t, &singular), Err(Error::SingularMatrix)));
    }

    #[test]
    fn class_data_is_conjugation_invariant() {
        let t = tower(2, 1, 12);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2usize, 3, 4] {
            let cls = Classifier::new(&t, n).unwrap();
            for _ in 0..8 {
                let a = random_invertible(&t, n, &mut rng);
                let base = cls.classify(&a).unwrap();
                if let ClassData::Primary { d, lambda, .. } = &base {
                    assert_eq!(lambda.iter().sum::<u32>() * d, n as u32);
                    assert!(lambda.windows(2).all(|w| w[0] >= w[1]));
                }
                for _ in 0..100 {
                    let p = random_invertible(&t, n, &mut rng);
                    let conj = p.mul(&t, &a).mul(&t, &p.inverse(&t).unwrap());
                    assert_eq!(cls.classify(&conj).unwrap(), base);
                }
            }
        }
    }

    #[test]
    fn primary_types_cover_gl2() {
        // over F_q, GL_2 has q-1 central, q-1 non-semisimple primary and
        // (q^2-q)/2 elliptic conjugacy types by characteristic polynomial
        let t = tower(5, 1, 2);
        let cls = Classifier::new(&t, 2).unwrap();
        let mut counts = std::collections::HashMap::new();
        for g in enumerate_gl(&t, 2, DEFAULT_ENUM_LIMIT).unwrap() {
            let key = match cls.classify(&g).unwrap() {
                ClassData::Split => "split",
                ClassData::Primary { d: 2, .. } => "elliptic",
                ClassData::Primary { lambda, .. } if lambda.len() == 2 => "central",
                ClassData::Primary { .. } => "jordan",
            };
            *counts.entry(key).or_insert(0u64) += 1;
        }
        // class sizes: central 1, jordan q^2-1, elliptic q^2-q, split q^2+q
        assert_eq!(counts["central"], 4);
        assert_eq!(counts["jordan"], 4 * 24);
        assert_eq!(counts["elliptic"], 10 * 20);
        assert_eq!(counts["split"], 6 * 30);
    }
}
