//! Fiber tensors: canonical storage, full-index expansion, contraction,
//! the projections onto the contraction part, and the Hermitian pairing.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::index::{epsilon, permutations, perm_sign, FiberKey, IndexProfile};
use crate::linalg::FractionFreeRref;
use crate::scalar::{Cx, Rational};

/// 4×4 coefficient table indexed `[row][col]`.
pub type Mat4 = [[Cx; 4]; 4];

pub fn mat4_zero() -> Mat4 {
    core::array::from_fn(|_| core::array::from_fn(|_| Cx::ZERO))
}

/// An element of ⊙^sym ℂ⁴ ⊗ ∧^alt ℂ⁴ stored on canonical keys; zeros are
/// never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalTensor {
    profile: IndexProfile,
    entries: BTreeMap<FiberKey, Cx>,
}

impl CanonicalTensor {
    pub fn zero(profile: IndexProfile) -> Self {
        CanonicalTensor { profile, entries: BTreeMap::new() }
    }

    pub fn unit(profile: IndexProfile, key: FiberKey) -> Self {
        let mut t = Self::zero(profile);
        t.set(key, Cx::ONE);
        t
    }

    /// δ^A_B as a one-subscript, one-superscript tensor.
    pub fn delta() -> Self {
        let p = IndexProfile { sym: 1, alt: 1 };
        let mut t = Self::zero(p);
        for a in 0..4u8 {
            t.set(FiberKey { counts: one_hot(a), mask: 1 << a }, Cx::ONE);
        }
        t
    }

    pub fn profile(&self) -> IndexProfile {
        self.profile
    }

    pub fn get(&self, key: &FiberKey) -> Cx {
        self.entries.get(key).cloned().unwrap_or(Cx::ZERO)
    }

    pub fn set(&mut self, key: FiberKey, value: Cx) {
        debug_assert_eq!(key.profile(), self.profile);
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
    }

    pub fn add_at(&mut self, key: FiberKey, value: &Cx) {
        debug_assert_eq!(key.profile(), self.profile);
        if value.is_zero() {
            return;
        }
        match self.entries.get_mut(&key) {
            Some(v) => {
                *v += value;
                if v.is_zero() {
                    self.entries.remove(&key);
                }
            }
            None => {
                self.entries.insert(key, value.clone());
            }
        }
    }

    /// Component at arbitrary index lists (0-based); repeated superscripts
    /// read as zero.
    pub fn component(&self, upper: &[u8], lower: &[u8]) -> Cx {
        assert_eq!(upper.len(), self.profile.alt);
        assert_eq!(lower.len(), self.profile.sym);
        match FiberKey::from_lists(lower, upper) {
            Some((key, 1)) => self.get(&key),
            Some((key, _)) => -self.get(&key),
            None => Cx::ZERO,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FiberKey, &Cx)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, c: &Cx) -> Self {
        let mut out = Self::zero(self.profile);
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.entries {
            out.entries.insert(*k, v * c);
        }
        out
    }

    pub fn add_scaled(&mut self, other: &CanonicalTensor, c: &Cx) {
        assert_eq!(self.profile, other.profile);
        for (k, v) in &other.entries {
            self.add_at(*k, &(v * c));
        }
    }

    pub fn sub(&self, other: &CanonicalTensor) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Cx::int(-1, 0));
        out
    }

    pub fn add(&self, other: &CanonicalTensor) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Cx::ONE);
        out
    }

    pub fn conj(&self) -> Self {
        CanonicalTensor {
            profile: self.profile,
            entries: self.entries.iter().map(|(k, v)| (*k, v.conj())).collect(),
        }
    }

    /// 𝒞(f)^{A…}_{B…} = Σ_C f^{C A…}_{B… C}.
    pub fn contract(&self) -> Result<Self, Error> {
        let target = self.profile.contracted()?;
        let mut out = Self::zero(target);
        for (key, v) in &self.entries {
            for c in 0..4u8 {
                let bit = 1u8 << c;
                if key.mask & bit == 0 || key.counts[c as usize] == 0 {
                    continue;
                }
                let below = (key.mask & (bit - 1)).count_ones();
                let mut k2 = *key;
                k2.counts[c as usize] -= 1;
                k2.mask &= !bit;
                if below % 2 == 0 {
                    out.add_at(k2, v);
                } else {
                    out.add_at(k2, &-v);
                }
            }
        }
        Ok(out)
    }

    /// The projection 𝒫 onto the part determined by the contraction, for one
    /// or two superscripts.
    pub fn project(&self) -> Result<Self, Error> {
        match self.profile.alt {
            1 => self.project_p1(),
            2 => self.project_p2(),
            _ => Err(Error::InvalidProfile { sym: self.profile.sym, alt: self.profile.alt }),
        }
    }

    /// 𝒫₁(f)^A_{B₁…} = ((k−1)/(k+2)) δ^A_{(B₁} 𝒞(f)_{B₂…)}.
    pub fn project_p1(&self) -> Result<Self, Error> {
        if self.profile.alt != 1 || self.profile.sym == 0 {
            return Err(Error::InvalidProfile { sym: self.profile.sym, alt: self.profile.alt });
        }
        let k = self.profile.k() as i64;
        let cf = self.contract()?;
        Ok(delta_wedge(&cf, self.profile, &Rational::new(1, k + 2)))
    }

    /// 𝒫₂(f)^{A₁A₂}_{B₁…} = (2(k−2)/k) δ^{[A₁}_{(B₁} 𝒞(f)^{A₂]}_{B₂…)}.
    pub fn project_p2(&self) -> Result<Self, Error> {
        if self.profile.alt != 2 || self.profile.sym == 0 {
            return Err(Error::InvalidProfile { sym: self.profile.sym, alt: self.profile.alt });
        }
        let k = self.profile.k() as i64;
        let cf = self.contract()?;
        Ok(delta_wedge(&cf, self.profile, &Rational::new(1, k)))
    }

    /// Full-index Hermitian pairing Σ s·conj(t), linear in `self`.
    pub fn inner(&self, other: &CanonicalTensor) -> Result<Cx, Error> {
        if self.profile != other.profile {
            return Err(Error::ProfileMismatch { expected: self.profile, found: other.profile });
        }
        let mut acc = Cx::ZERO;
        for (k, a) in &self.entries {
            if let Some(b) = other.entries.get(k) {
                let w = Rational::from_int(k.weight() as i64);
                acc += &(a * &b.conj()).scale(&w);
            }
        }
        Ok(acc)
    }

    pub fn norm_sq(&self) -> Rational {
        let mut acc = Rational::ZERO;
        for (k, a) in &self.entries {
            acc += &(a.norm_sqr() * Rational::from_int(k.weight() as i64));
        }
        acc
    }

    /// Expansion over all index tuples; superscripts occupy the leading
    /// slots, subscripts the trailing ones.
    pub fn to_full(&self) -> FullTensor {
        let (q, p) = (self.profile.alt, self.profile.sym);
        let mut full = FullTensor::zeros(p + q);
        for idx in 0..full.data.len() {
            let tuple = full.tuple(idx);
            full.data[idx] = self.component(&tuple[..q], &tuple[q..]);
        }
        full
    }

    /// Reads the canonical positions of a full tensor; only meaningful when
    /// the input already has the matching symmetries.
    pub fn from_full(full: &FullTensor, profile: IndexProfile) -> Self {
        assert_eq!(full.rank, profile.rank());
        let mut t = Self::zero(profile);
        for key in profile.keys() {
            let mut tuple = key.upper();
            tuple.extend(key.lower());
            t.set(key, full.get(&tuple).clone());
        }
        t
    }
}

fn one_hot(a: u8) -> [u8; 4] {
    let mut c = [0u8; 4];
    c[a as usize] = 1;
    c
}

/// coef · Σ_s (−1)^s mult_S(A_s) g^{A without A_s}_{S without A_s}, the
/// expanded form of δ^{[A₁}_{(B₁} g^{…]}_{…)} up to the scalar.
fn delta_wedge(g: &CanonicalTensor, target: IndexProfile, coef: &Rational) -> CanonicalTensor {
    let mut out = CanonicalTensor::zero(target);
    for (key, v) in g.iter() {
        for a in 0..4u8 {
            let bit = 1u8 << a;
            if key.mask & bit != 0 {
                continue;
            }
            let s = (key.mask & (bit - 1)).count_ones();
            let mut k2 = key.with_lower_added(a);
            k2.mask |= bit;
            let mult = Rational::from_int(k2.counts[a as usize] as i64);
            let mut c = v.scale(&(&mult * coef));
            if s % 2 == 1 {
                c = -c;
            }
            out.add_at(k2, &c);
        }
    }
    out
}

/// Σ_{B} mat[B][A₁ …] f^{A₂…]}_{B …}, antisymmetrized over the new
/// superscript: maps (p, q) to (p−1, q+1).
pub fn wedge_apply(mat: &Mat4, f: &CanonicalTensor) -> Result<CanonicalTensor, Error> {
    let prof = f.profile();
    if prof.sym == 0 || prof.alt >= 4 {
        return Err(Error::InvalidProfile { sym: prof.sym, alt: prof.alt });
    }
    let target = IndexProfile { sym: prof.sym - 1, alt: prof.alt + 1 };
    let scale = Rational::new(1, prof.alt as i64 + 1);
    let mut out = CanonicalTensor::zero(target);
    for (key, v) in f.iter() {
        let v = v.scale(&scale);
        for b in 0..4u8 {
            let Some(rest) = key.with_lower_removed(b) else { continue };
            for a in 0..4u8 {
                let bit = 1u8 << a;
                if key.mask & bit != 0 || mat[b as usize][a as usize].is_zero() {
                    continue;
                }
                let s = (key.mask & (bit - 1)).count_ones();
                let mut c = &v * &mat[b as usize][a as usize];
                if s % 2 == 1 {
                    c = -c;
                }
                out.add_at(FiberKey { counts: rest.counts, mask: key.mask | bit }, &c);
            }
        }
    }
    Ok(out)
}

/// Position of the contracted superscript in `sym_contract_apply`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    First,
    Last,
}

/// Σ_E mat[E][(B₁] f^{E A…}_{B₂…)} (or with E as the last superscript):
/// maps (p, q) to (p+1, q−1).
pub fn sym_contract_apply(mat: &Mat4, f: &CanonicalTensor, slot: Slot) -> Result<CanonicalTensor, Error> {
    let prof = f.profile();
    if prof.alt == 0 {
        return Err(Error::InvalidProfile { sym: prof.sym, alt: prof.alt });
    }
    let target = IndexProfile { sym: prof.sym + 1, alt: prof.alt - 1 };
    let scale = Rational::new(1, prof.sym as i64 + 1);
    let mut out = CanonicalTensor::zero(target);
    for (key, v) in f.iter() {
        let v = v.scale(&scale);
        for e in 0..4u8 {
            let bit = 1u8 << e;
            if key.mask & bit == 0 {
                continue;
            }
            let crossed = match slot {
                Slot::First => (key.mask & (bit - 1)).count_ones(),
                Slot::Last => (key.mask & !((bit << 1) - 1) & 0xf).count_ones(),
            };
            let ve = if crossed % 2 == 1 { -&v } else { v.clone() };
            for b in 0..4u8 {
                let m = &mat[e as usize][b as usize];
                if m.is_zero() {
                    continue;
                }
                let mut k2 = key.with_lower_added(b);
                k2.mask &= !bit;
                let mult = Rational::from_int(k2.counts[b as usize] as i64);
                out.add_at(k2, &(&ve * m).scale(&mult));
            }
        }
    }
    Ok(out)
}

/// Dense tensor over all index tuples in `{0..4}^rank`, first slot most
/// significant.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FullTensor {
    rank: usize,
    data: Vec<Cx>,
}

impl FullTensor {
    pub fn zeros(rank: usize) -> Self {
        FullTensor { rank, data: vec![Cx::ZERO; 1 << (2 * rank)] }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn offset(&self, tuple: &[u8]) -> usize {
        assert_eq!(tuple.len(), self.rank);
        tuple.iter().fold(0usize, |acc, &i| acc * 4 + i as usize)
    }

    pub fn tuple(&self, mut idx: usize) -> Vec<u8> {
        let mut t = vec![0u8; self.rank];
        for slot in (0..self.rank).rev() {
            t[slot] = (idx % 4) as u8;
            idx /= 4;
        }
        t
    }

    pub fn get(&self, tuple: &[u8]) -> &Cx {
        &self.data[self.offset(tuple)]
    }

    pub fn set(&mut self, tuple: &[u8], v: Cx) {
        let o = self.offset(tuple);
        self.data[o] = v;
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn values(&self) -> &[Cx] {
        &self.data
    }

    pub fn symmetrize(&self) -> Self {
        self.symmetrize_slots(0, self.rank)
    }

    pub fn antisymmetrize(&self) -> Self {
        self.antisymmetrize_slots(0, self.rank)
    }

    /// Average over permutations of the slots `start..end`.
    pub fn symmetrize_slots(&self, start: usize, end: usize) -> Self {
        self.average_slots(start, end, false)
    }

    /// Signed average over permutations of the slots `start..end`.
    pub fn antisymmetrize_slots(&self, start: usize, end: usize) -> Self {
        self.average_slots(start, end, true)
    }

    fn average_slots(&self, start: usize, end: usize, signed: bool) -> Self {
        assert!(start <= end && end <= self.rank);
        let perms = permutations(end - start);
        let norm = Rational::new(1, perms.len() as i64);
        let mut out = FullTensor::zeros(self.rank);
        let mut src = vec![0u8; self.rank];
        for idx in 0..self.data.len() {
            let t = self.tuple(idx);
            let mut acc = Cx::ZERO;
            for p in &perms {
                src.copy_from_slice(&t);
                for (i, &pi) in p.iter().enumerate() {
                    src[start + i] = t[start + pi];
                }
                let v = self.get(&src);
                if signed && perm_sign(p) < 0 {
                    acc -= v;
                } else {
                    acc += v;
                }
            }
            out.data[idx] = acc.scale(&norm);
        }
        out
    }

    /// Σ self·conj(other) over all tuples.
    pub fn inner(&self, other: &FullTensor) -> Cx {
        assert_eq!(self.rank, other.rank);
        let mut acc = Cx::ZERO;
        for (a, b) in self.data.iter().zip(&other.data) {
            if !a.is_zero() && !b.is_zero() {
                acc += &(a * &b.conj());
            }
        }
        acc
    }
}

/// ε_{ABCD} as a full rank-4 table.
pub fn epsilon_tensor() -> FullTensor {
    let mut t = FullTensor::zeros(4);
    for idx in 0..t.len() {
        let tu = t.tuple(idx);
        t.data[idx] = Cx::from(epsilon(tu[0], tu[1], tu[2], tu[3]));
    }
    t
}

/// A basis of `V` or of the contraction kernel, in reduced form: vector
/// `i` has coordinate 1 at `pivots[i]` and 0 at every other pivot key.
#[derive(Clone, Debug)]
pub struct FiberBasis {
    profile: IndexProfile,
    vectors: Vec<CanonicalTensor>,
    pivots: Vec<FiberKey>,
}

impl FiberBasis {
    /// Canonical monomial basis of the whole fiber.
    pub fn full(profile: IndexProfile) -> Self {
        let keys = profile.keys();
        FiberBasis {
            profile,
            vectors: keys.iter().map(|&k| CanonicalTensor::unit(profile, k)).collect(),
            pivots: keys,
        }
    }

    /// Exact basis of ker 𝒞 by fraction-free elimination on the
    /// contraction matrix.
    pub fn contraction_kernel(profile: IndexProfile) -> Self {
        if profile.alt == 4 {
            // the complex stops at level 3; with k = 4 there is no
            // contraction to impose and the top fiber is declared zero
            return FiberBasis { profile, vectors: Vec::new(), pivots: Vec::new() };
        }
        if profile.alt == 0 || profile.sym == 0 {
            return Self::full(profile);
        }
        let cols = profile.keys();
        let target = profile.contracted().expect("checked above");
        let row_index: BTreeMap<FiberKey, usize> =
            target.keys().into_iter().enumerate().map(|(i, k)| (k, i)).collect();
        let mut rows: Vec<Vec<(usize, Cx)>> = vec![Vec::new(); row_index.len()];
        for (j, &key) in cols.iter().enumerate() {
            let image = CanonicalTensor::unit(profile, key).contract().expect("checked above");
            for (rk, v) in image.iter() {
                rows[row_index[rk]].push((j, v.clone()));
            }
        }
        let rref = FractionFreeRref::new(rows, cols.len());
        let mut vectors = Vec::new();
        let mut pivots = Vec::new();
        for (free, vec) in rref.nullspace() {
            let mut t = CanonicalTensor::zero(profile);
            for (j, v) in vec {
                t.set(cols[j], v);
            }
            vectors.push(t);
            pivots.push(cols[free]);
        }
        FiberBasis { profile, vectors, pivots }
    }

    pub fn profile(&self) -> IndexProfile {
        self.profile
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[CanonicalTensor] {
        &self.vectors
    }

    pub fn pivots(&self) -> &[FiberKey] {
        &self.pivots
    }

    /// Coordinates of an element of the span.
    pub fn coords(&self, t: &CanonicalTensor) -> Vec<Cx> {
        self.pivots.iter().map(|k| t.get(k)).collect()
    }

    pub fn combine(&self, coeffs: &[Cx]) -> CanonicalTensor {
        assert_eq!(coeffs.len(), self.vectors.len());
        let mut t = CanonicalTensor::zero(self.profile);
        for (c, v) in coeffs.iter().zip(&self.vectors) {
            if !c.is_zero() {
                t.add_scaled(v, c);
            }
        }
        t
    }

    /// Whether `t` lies in the span (reconstruction from pivot coordinates).
    pub fn contains(&self, t: &CanonicalTensor) -> bool {
        t.profile() == self.profile && self.combine(&self.coords(t)) == *t
    }
}

/// ker 𝒞 on the level-`l` fiber of spin `k`.
pub fn nullspace_basis(profile: IndexProfile) -> FiberBasis {
    FiberBasis::contraction_kernel(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::exact_rank;

    fn lcg_tensor(profile: IndexProfile, seed: u64) -> CanonicalTensor {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut t = CanonicalTensor::zero(profile);
        for key in profile.keys() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let re = ((s >> 33) % 7) as i64 - 3;
            let im = ((s >> 45) % 7) as i64 - 3;
            t.set(key, Cx::int(re, im));
        }
        t
    }

    // Full-index oracle for the contraction.
    fn contract_oracle(t: &CanonicalTensor) -> CanonicalTensor {
        let p = t.profile();
        let target = p.contracted().unwrap();
        let mut out = CanonicalTensor::zero(target);
        for key in target.keys() {
            let mut acc = Cx::ZERO;
            for c in 0..4u8 {
                let mut up = vec![c];
                up.extend(key.upper());
                let mut low = key.lower();
                low.push(c);
                acc += &t.component(&up, &low);
            }
            out.set(key, acc);
        }
        out
    }

    #[test]
    fn contraction_of_identity_is_trace() {
        let c = CanonicalTensor::delta().contract().unwrap();
        assert_eq!(c.get(&FiberKey::default()), Cx::from(4));
        assert_eq!(CanonicalTensor::delta().inner(&CanonicalTensor::delta()).unwrap(), Cx::from(4));
    }

    #[test]
    fn contraction_matches_oracle() {
        for (sym, alt) in [(4, 2), (3, 1), (2, 3), (5, 4)] {
            let p = IndexProfile::new(sym, alt).unwrap();
            for seed in 0..3 {
                let t = lcg_tensor(p, seed);
                assert_eq!(t.contract().unwrap(), contract_oracle(&t));
            }
        }
    }

    #[test]
    fn p1_of_delta_is_delta() {
        assert_eq!(CanonicalTensor::delta().project_p1().unwrap(), CanonicalTensor::delta());
    }

    #[test]
    fn projections_match_full_index_expansion() {
        // δ^{[A₁}_{(B₁} 𝒞f^{…]}_{…)} built by brute-force averaging
        for (k, l) in [(5, 1), (6, 2), (4, 2)] {
            let p = IndexProfile::level(k, l).unwrap();
            let f = lcg_tensor(p, 11);
            let cf = f.contract().unwrap();
            let cf_full = cf.to_full();
            let mut raw = FullTensor::zeros(k);
            for idx in 0..raw.len() {
                let t = raw.tuple(idx);
                // slots: A₁..A_l, B₁..B_{k−l}
                let a1 = t[0];
                let b1 = t[l];
                if a1 != b1 {
                    continue;
                }
                let mut rest: Vec<u8> = t[1..l].to_vec();
                rest.extend_from_slice(&t[l + 1..]);
                raw.set(&t, cf_full.get(&rest).clone());
            }
            let sym = raw.symmetrize_slots(l, k).antisymmetrize_slots(0, l);
            let coef = if l == 1 {
                Rational::new(k as i64 - 1, k as i64 + 2)
            } else {
                Rational::new(2 * (k as i64 - 2), k as i64)
            };
            let expect = CanonicalTensor::from_full(&sym, p).scale(&Cx::real(coef));
            assert_eq!(f.project().unwrap(), expect);
        }
    }

    #[test]
    fn wedge_apply_matches_full_index_expansion() {
        let p = IndexProfile::new(3, 1).unwrap();
        let f = lcg_tensor(p, 5);
        let mut m = mat4_zero();
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = Cx::int(i as i64 - j as i64, (i * j) as i64 % 3);
            }
        }
        let out = wedge_apply(&m, &f).unwrap();
        let mut raw = FullTensor::zeros(4);
        for idx in 0..raw.len() {
            let t = raw.tuple(idx);
            // slots A₁ A₂ B₂ B₃
            let mut acc = Cx::ZERO;
            for b in 0..4u8 {
                acc += &(&m[b as usize][t[0] as usize] * &f.component(&[t[1]], &[b, t[2], t[3]]));
            }
            raw.set(&t, acc);
        }
        let expect = CanonicalTensor::from_full(&raw.antisymmetrize_slots(0, 2), out.profile());
        assert_eq!(out, expect);
    }

    #[test]
    fn sym_contract_apply_matches_full_index_expansion() {
        let p = IndexProfile::new(2, 3).unwrap();
        let f = lcg_tensor(p, 9);
        let mut m = mat4_zero();
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = Cx::int((i + 2 * j) as i64 % 5 - 2, i as i64 - 1);
            }
        }
        for slot in [Slot::First, Slot::Last] {
            let out = sym_contract_apply(&m, &f, slot).unwrap();
            let mut raw = FullTensor::zeros(5);
            for idx in 0..raw.len() {
                let t = raw.tuple(idx);
                // slots A₁ A₂ B₁ B₂ B₃
                let mut acc = Cx::ZERO;
                for e in 0..4u8 {
                    let up = match slot {
                        Slot::First => [e, t[0], t[1]],
                        Slot::Last => [t[0], t[1], e],
                    };
                    acc += &(&m[e as usize][t[2] as usize] * &f.component(&up, &[t[3], t[4]]));
                }
                raw.set(&t, acc);
            }
            let expect = CanonicalTensor::from_full(&raw.symmetrize_slots(2, 5), out.profile());
            assert_eq!(out, expect);
        }
    }

    #[test]
    fn inner_matches_full_pairing() {
        let p = IndexProfile::new(3, 2).unwrap();
        let s = lcg_tensor(p, 1);
        let t = lcg_tensor(p, 2);
        assert_eq!(s.inner(&t).unwrap(), s.to_full().inner(&t.to_full()));
        assert_eq!(s.inner(&t).unwrap(), t.inner(&s).unwrap().conj());
        assert!(s.inner(&lcg_tensor(IndexProfile::new(4, 1).unwrap(), 0)).is_err());
    }

    #[test]
    fn kernel_dimensions_k6() {
        let dims: Vec<usize> =
            (0..=4).map(|l| nullspace_basis(IndexProfile::level(6, l).unwrap()).dim()).collect();
        assert_eq!(dims, [84, 189, 140, 35, 0]);
        for l in 1..=3 {
            let b = nullspace_basis(IndexProfile::level(6, l).unwrap());
            for v in b.vectors() {
                assert!(v.contract().unwrap().is_zero());
            }
            let rows: Vec<Vec<Cx>> = b
                .vectors()
                .iter()
                .map(|v| v.profile().keys().iter().map(|k| v.get(k)).collect())
                .collect();
            assert_eq!(exact_rank(&rows), b.dim());
        }
    }

    #[test]
    fn epsilon_table_is_antisymmetric() {
        let e = epsilon_tensor();
        assert_eq!(e.antisymmetrize(), e);
    }
}
