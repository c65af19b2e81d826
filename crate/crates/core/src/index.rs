//! Canonical fiber keys for ⊙^p ℂ⁴ ⊗ ∧^q ℂ⁴.
//!
//! Indices are 0-based (`0..4`) inside the library; file formats and
//! human-readable output shift to `1..4`.

use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;

/// Number of symmetric subscripts and antisymmetric superscripts.
///
/// A level-`l` fiber of spin `k` is `IndexProfile::level(k, l)`, with
/// `sym = k - l` and `alt = l`. Intermediate spaces such as the target of a
/// contraction are described by the same type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexProfile {
    pub sym: usize,
    pub alt: usize,
}

impl IndexProfile {
    pub fn new(sym: usize, alt: usize) -> Result<Self, Error> {
        if alt > 4 {
            return Err(Error::InvalidProfile { sym, alt });
        }
        Ok(IndexProfile { sym, alt })
    }

    /// The fiber `V_l` of the spin-`k` complex.
    pub fn level(k: usize, l: usize) -> Result<Self, Error> {
        if k == 0 || l > 4 || l > k {
            return Err(Error::InvalidProfile { sym: k.saturating_sub(l), alt: l });
        }
        Ok(IndexProfile { sym: k - l, alt: l })
    }

    pub fn k(&self) -> usize {
        self.sym + self.alt
    }

    pub fn l(&self) -> usize {
        self.alt
    }

    pub fn rank(&self) -> usize {
        self.sym + self.alt
    }

    /// `C(sym+3, 3) · C(4, alt)`.
    pub fn dim(&self) -> usize {
        binomial(self.sym + 3, 3) * binomial(4, self.alt)
    }

    /// Target profile of the contraction.
    pub fn contracted(&self) -> Result<Self, Error> {
        if self.sym == 0 || self.alt == 0 {
            return Err(Error::InvalidProfile { sym: self.sym, alt: self.alt });
        }
        Ok(IndexProfile { sym: self.sym - 1, alt: self.alt - 1 })
    }

    /// All canonical keys, in `FiberKey` order.
    pub fn keys(&self) -> Vec<FiberKey> {
        let mut out = Vec::with_capacity(self.dim());
        let masks: Vec<u8> = (0u8..16).filter(|m| m.count_ones() as usize == self.alt).collect();
        let s = self.sym as u8;
        for a in 0..=s {
            for b in 0..=s - a {
                for c in 0..=s - a - b {
                    let d = s - a - b - c;
                    for &m in &masks {
                        out.push(FiberKey { counts: [a, b, c, d], mask: m });
                    }
                }
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for IndexProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(sym {}, alt {})", self.sym, self.alt)
    }
}

pub fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc = 1usize;
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Canonical key: subscript multiplicities and a superscript bitmask.
///
/// `counts[c]` is how often index `c` occurs among the subscripts; bit `a`
/// of `mask` is set when `a` is one of the superscripts. Superscripts are
/// read in increasing order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FiberKey {
    pub counts: [u8; 4],
    pub mask: u8,
}

impl FiberKey {
    pub fn from_lists(lower: &[u8], upper: &[u8]) -> Option<(FiberKey, i8)> {
        let counts = counts_of(lower);
        let (mask, sign) = mask_sign(upper)?;
        Some((FiberKey { counts, mask }, sign))
    }

    pub fn profile(&self) -> IndexProfile {
        IndexProfile { sym: self.sym_len(), alt: self.mask.count_ones() as usize }
    }

    pub fn sym_len(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn lower(&self) -> Vec<u8> {
        let mut v = Vec::with_capacity(self.sym_len());
        for (c, &n) in self.counts.iter().enumerate() {
            for _ in 0..n {
                v.push(c as u8);
            }
        }
        v
    }

    pub fn upper(&self) -> Vec<u8> {
        (0u8..4).filter(|a| self.mask & (1 << a) != 0).collect()
    }

    /// Number of index tuples represented by this key:
    /// the multinomial of the subscript counts times `alt!`.
    pub fn weight(&self) -> u128 {
        let mut w = factorial(self.sym_len());
        for &c in &self.counts {
            w /= factorial(c as usize);
        }
        w * factorial(self.mask.count_ones() as usize)
    }

    pub fn with_lower_removed(&self, c: u8) -> Option<FiberKey> {
        let mut k = *self;
        if k.counts[c as usize] == 0 {
            return None;
        }
        k.counts[c as usize] -= 1;
        Some(k)
    }

    pub fn with_lower_added(&self, c: u8) -> FiberKey {
        let mut k = *self;
        k.counts[c as usize] += 1;
        k
    }
}

impl fmt::Debug for FiberKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "^")?;
        for a in self.upper() {
            write!(f, "{}", a + 1)?;
        }
        write!(f, "_")?;
        for b in self.lower() {
            write!(f, "{}", b + 1)?;
        }
        Ok(())
    }
}

pub fn counts_of(lower: &[u8]) -> [u8; 4] {
    let mut counts = [0u8; 4];
    for &b in lower {
        counts[b as usize] += 1;
    }
    counts
}

/// Bitmask and permutation sign of a superscript list; `None` on a repeat.
pub fn mask_sign(upper: &[u8]) -> Option<(u8, i8)> {
    let mut mask = 0u8;
    let mut inversions = 0usize;
    for (i, &a) in upper.iter().enumerate() {
        let bit = 1u8 << a;
        if mask & bit != 0 {
            return None;
        }
        mask |= bit;
        inversions += upper[..i].iter().filter(|&&b| b > a).count();
    }
    Some((mask, if inversions % 2 == 0 { 1 } else { -1 }))
}

/// Sign of a permutation of `0..n` given as a slice.
pub fn perm_sign(p: &[usize]) -> i8 {
    let mut inv = 0usize;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Kronecker delta.
pub fn delta(a: u8, b: u8) -> i64 {
    (a == b) as i64
}

/// Levi-Civita symbol with `ε_{0123} = 1`; raised and lowered forms
/// coincide numerically.
pub fn epsilon(a: u8, b: u8, c: u8, d: u8) -> i64 {
    match mask_sign(&[a, b, c, d]) {
        Some((_, s)) => s as i64,
        None => 0,
    }
}
