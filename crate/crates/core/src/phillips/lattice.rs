//! Vectors of `l2(ℤ, N)` with a finite part and exact geometric tails.
//!
//! A left tail `(s, b, r)` contributes `b·r^(s−j)` at every `j ≤ s`; a right
//! tail contributes `b·r^(j−s)` at every `j ≥ s`. With `|r| < 1` every inner
//! product is a finite sum plus geometric series, so nothing is truncated.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, C64, ONE};

#[derive(Debug, Clone, PartialEq)]
pub struct Tail {
    pub start: i64,
    pub base: CVec,
    pub ratio: C64,
}

impl Tail {
    fn left_entry(&self, j: i64) -> Option<CVec> {
        (j <= self.start).then(|| &self.base * pow(self.ratio, self.start - j))
    }

    fn right_entry(&self, j: i64) -> Option<CVec> {
        (j >= self.start).then(|| &self.base * pow(self.ratio, j - self.start))
    }

    fn is_zero(&self) -> bool {
        self.base.iter().all(|z| *z == C64::from(0.0))
    }
}

#[inline]
fn pow(r: C64, k: i64) -> C64 {
    debug_assert!(k >= 0);
    if k == 0 {
        ONE
    } else {
        r.powi(k as i32)
    }
}

/// `(x, y)`, linear in `x`.
#[inline]
fn ip(x: &CVec, y: &CVec) -> C64 {
    y.dotc(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeVector {
    dim: usize,
    support: BTreeMap<i64, CVec>,
    left: Vec<Tail>,
    right: Vec<Tail>,
}

impl LatticeVector {
    pub fn zero(dim: usize) -> Self {
        LatticeVector {
            dim,
            support: BTreeMap::new(),
            left: Vec::new(),
            right: Vec::new(),
        }
    }

    /// `x` placed at position `j`.
    pub fn point(j: i64, x: CVec) -> Self {
        let mut v = Self::zero(x.len());
        v.support.insert(j, x);
        v
    }

    pub fn from_entries<I: IntoIterator<Item = (i64, CVec)>>(dim: usize, entries: I) -> Result<Self> {
        let mut v = Self::zero(dim);
        for (j, x) in entries {
            v.add_entry(j, x)?;
        }
        Ok(v)
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: len,
            })
        }
    }

    fn check_ratio(ratio: C64) -> Result<()> {
        if ratio.norm() < 1.0 && ratio.is_finite() {
            Ok(())
        } else {
            Err(Error::RatioOutsideDisk(format!("{ratio}")))
        }
    }

    pub fn add_entry(&mut self, j: i64, x: CVec) -> Result<()> {
        self.check_dim(x.len())?;
        match self.support.get_mut(&j) {
            Some(e) => *e += x,
            None => {
                self.support.insert(j, x);
            }
        }
        Ok(())
    }

    pub fn with_entry(mut self, j: i64, x: CVec) -> Result<Self> {
        self.add_entry(j, x)?;
        Ok(self)
    }

    pub fn with_left_tail(mut self, start: i64, base: CVec, ratio: C64) -> Result<Self> {
        self.check_dim(base.len())?;
        Self::check_ratio(ratio)?;
        self.left.push(Tail { start, base, ratio });
        Ok(self)
    }

    pub fn with_right_tail(mut self, start: i64, base: CVec, ratio: C64) -> Result<Self> {
        self.check_dim(base.len())?;
        Self::check_ratio(ratio)?;
        self.right.push(Tail { start, base, ratio });
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> &BTreeMap<i64, CVec> {
        &self.support
    }

    pub fn left_tails(&self) -> &[Tail] {
        &self.left
    }

    pub fn right_tails(&self) -> &[Tail] {
        &self.right
    }

    pub fn has_tails(&self) -> bool {
        !(self.left.is_empty() && self.right.is_empty())
    }

    pub fn entry(&self, j: i64) -> CVec {
        let mut e = self.support.get(&j).cloned().unwrap_or_else(|| CVec::zeros(self.dim));
        for t in &self.left {
            if let Some(x) = t.left_entry(j) {
                e += x;
            }
        }
        for t in &self.right {
            if let Some(x) = t.right_entry(j) {
                e += x;
            }
        }
        e
    }

    /// `(Sᵏv)_j = v_{j−k}`: every index moves `k` places to the right.
    pub fn shift(&self, k: i64) -> Self {
        let move_tail = |t: &Tail| Tail {
            start: t.start + k,
            ..t.clone()
        };
        LatticeVector {
            dim: self.dim,
            support: self.support.iter().map(|(j, x)| (j + k, x.clone())).collect(),
            left: self.left.iter().map(move_tail).collect(),
            right: self.right.iter().map(move_tail).collect(),
        }
    }

    pub fn scaled(&self, c: C64) -> Self {
        let scale_tail = |t: &Tail| Tail {
            base: &t.base * c,
            ..t.clone()
        };
        LatticeVector {
            dim: self.dim,
            support: self.support.iter().map(|(j, x)| (*j, x * c)).collect(),
            left: self.left.iter().map(scale_tail).collect(),
            right: self.right.iter().map(scale_tail).collect(),
        }
    }

    pub fn plus(&self, other: &LatticeVector) -> Self {
        assert_eq!(self.dim, other.dim, "fiber dimension mismatch");
        let mut out = self.clone();
        for (j, x) in &other.support {
            out.add_entry(*j, x.clone()).expect("dimension checked");
        }
        out.left.extend(other.left.iter().cloned());
        out.right.extend(other.right.iter().cloned());
        out
    }

    /// Applies the same fiber matrix at every position.
    pub fn map_fiber(&self, m: &CMat) -> Self {
        let map_tail = |t: &Tail| Tail {
            base: m * &t.base,
            ..t.clone()
        };
        LatticeVector {
            dim: m.nrows(),
            support: self.support.iter().map(|(j, x)| (*j, m * x)).collect(),
            left: self.left.iter().map(map_tail).collect(),
            right: self.right.iter().map(map_tail).collect(),
        }
    }

    /// Applies `minus` at positions `≤ 0` and `plus` at positions `≥ 1`.
    pub fn map_blocks(&self, minus: &CMat, plus: &CMat) -> Self {
        let c = self.normalized(Some((0, 1)));
        let map_tail = |m: &CMat, t: &Tail| Tail {
            base: m * &t.base,
            ..t.clone()
        };
        LatticeVector {
            dim: minus.nrows(),
            support: c
                .support
                .iter()
                .map(|(j, x)| (*j, if *j <= 0 { minus * x } else { plus * x }))
                .collect(),
            left: c.left.iter().map(|t| map_tail(minus, t)).collect(),
            right: c.right.iter().map(|t| map_tail(plus, t)).collect(),
        }
    }

    /// Index window `[lo, hi]` of the canonical form (possibly empty, `lo = hi + 1`).
    fn canonical_window(&self, cover: Option<(i64, i64)>) -> Option<(i64, i64)> {
        let mut lo: Option<i64> = None;
        let mut hi: Option<i64> = None;
        let mut widen = |l: i64, h: i64| {
            lo = Some(lo.map_or(l, |x| x.min(l)));
            hi = Some(hi.map_or(h, |x| x.max(h)));
        };
        for j in self.support.keys() {
            widen(*j, *j);
        }
        for t in &self.left {
            widen(t.start + 1, t.start);
        }
        for t in &self.right {
            widen(t.start, t.start - 1);
        }
        if let Some((a, b)) = cover {
            widen(a, b);
        }
        lo.zip(hi)
    }

    /// Canonical form: finite entries on a window `[lo, hi]`, every left tail
    /// anchored at `lo − 1`, every right tail at `hi + 1`, tails with equal
    /// ratio merged. Cancellation then happens coefficient by coefficient,
    /// which keeps closed-form norms of differences at rounding level.
    pub fn canonical(&self) -> Self {
        self.normalized(None)
    }

    fn normalized(&self, cover: Option<(i64, i64)>) -> Self {
        let Some((lo, hi)) = self.canonical_window(cover) else {
            return Self::zero(self.dim);
        };
        let mut support: BTreeMap<i64, CVec> = BTreeMap::new();
        for (j, x) in &self.support {
            *support.entry(*j).or_insert_with(|| CVec::zeros(self.dim)) += x;
        }
        let mut left: Vec<Tail> = Vec::new();
        for t in &self.left {
            for j in lo..=t.start {
                *support.entry(j).or_insert_with(|| CVec::zeros(self.dim)) +=
                    &t.base * pow(t.ratio, t.start - j);
            }
            merge_tail(
                &mut left,
                Tail {
                    start: lo - 1,
                    base: &t.base * pow(t.ratio, t.start - (lo - 1)),
                    ratio: t.ratio,
                },
            );
        }
        let mut right: Vec<Tail> = Vec::new();
        for t in &self.right {
            for j in t.start..=hi {
                *support.entry(j).or_insert_with(|| CVec::zeros(self.dim)) +=
                    &t.base * pow(t.ratio, j - t.start);
            }
            merge_tail(
                &mut right,
                Tail {
                    start: hi + 1,
                    base: &t.base * pow(t.ratio, hi + 1 - t.start),
                    ratio: t.ratio,
                },
            );
        }
        left.retain(|t| !t.is_zero());
        right.retain(|t| !t.is_zero());
        LatticeVector {
            dim: self.dim,
            support,
            left,
            right,
        }
    }

    /// Closed-form `(self, other)`, linear in `self`.
    pub fn inner(&self, other: &LatticeVector) -> C64 {
        assert_eq!(self.dim, other.dim, "fiber dimension mismatch");
        let a = self.canonical();
        let b = other.canonical();
        a.raw_inner(&b)
    }

    fn raw_inner(&self, other: &LatticeVector) -> C64 {
        let mut acc = C64::from(0.0);
        for (j, x) in &self.support {
            if let Some(y) = other.support.get(j) {
                acc += ip(x, y);
            }
            for t in &other.left {
                if let Some(y) = t.left_entry(*j) {
                    acc += ip(x, &y);
                }
            }
            for t in &other.right {
                if let Some(y) = t.right_entry(*j) {
                    acc += ip(x, &y);
                }
            }
        }
        for (j, y) in &other.support {
            for t in &self.left {
                if let Some(x) = t.left_entry(*j) {
                    acc += ip(&x, y);
                }
            }
            for t in &self.right {
                if let Some(x) = t.right_entry(*j) {
                    acc += ip(&x, y);
                }
            }
        }
        for t1 in &self.right {
            for t2 in &other.right {
                let m = t1.start.max(t2.start);
                acc += ip(&t1.base, &t2.base) * pow(t1.ratio, m - t1.start) * pow(t2.ratio.conj(), m - t2.start)
                    / (ONE - t1.ratio * t2.ratio.conj());
            }
            for t2 in &other.left {
                acc += overlap(t2, t1, false);
            }
        }
        for t1 in &self.left {
            for t2 in &other.left {
                let m = t1.start.min(t2.start);
                acc += ip(&t1.base, &t2.base) * pow(t1.ratio, t1.start - m) * pow(t2.ratio.conj(), t2.start - m)
                    / (ONE - t1.ratio * t2.ratio.conj());
            }
            for t2 in &other.right {
                acc += overlap(t1, t2, true);
            }
        }
        acc
    }

    pub fn norm_sq(&self) -> f64 {
        let c = self.canonical();
        c.raw_inner(&c).re.max(0.0)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Entries on `[−l, l]`, for brute-force cross-checks.
    pub fn materialize(&self, l: i64) -> Vec<(i64, CVec)> {
        (-l..=l).map(|j| (j, self.entry(j))).collect()
    }

    /// `(self, other)` summed over the window `[−l, l]` only.
    pub fn window_inner(&self, other: &LatticeVector, l: i64) -> C64 {
        (-l..=l).map(|j| ip(&self.entry(j), &other.entry(j))).sum()
    }
}

fn merge_tail(tails: &mut Vec<Tail>, t: Tail) {
    match tails.iter_mut().find(|u| u.ratio == t.ratio && u.start == t.start) {
        Some(u) => u.base += t.base,
        None => tails.push(t),
    }
}

/// Finite overlap of a left tail with a right tail. `left_first` says which
/// one sits in the linear slot of the inner product.
fn overlap(l: &Tail, r: &Tail, left_first: bool) -> C64 {
    let mut acc = C64::from(0.0);
    if r.start > l.start {
        return acc;
    }
    for j in r.start..=l.start {
        let x = &l.base * pow(l.ratio, l.start - j);
        let y = &r.base * pow(r.ratio, j - r.start);
        acc += if left_first { ip(&x, &y) } else { ip(&y, &x) };
    }
    acc
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        self.plus(rhs)
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        self.plus(&rhs.scaled(-ONE))
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        self.scaled(-ONE)
    }
}

impl Mul<C64> for &LatticeVector {
    type Output = LatticeVector;
    fn mul(self, rhs: C64) -> LatticeVector {
        self.scaled(rhs)
    }
}
