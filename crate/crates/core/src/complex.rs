//! Tensor-valued polynomial sections and the operators of the complex:
//! 𝒟ₗ, the full adjoints 𝒟ₗ*, the restricted adjoints Θₗ, the Laplacians
//! □ₗ, and the L² estimate checker.
//!
//! Every operator is first order with constant fiber coefficients, so it is
//! stored as a list of `(scalar operator, fiber map)` pairs: 𝒟ₗ = Σ_j ∂_j∘T_j
//! and 𝒟ₗ* = Σ_j (−∂_j + 2x^j)∘U_j.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::Error;
use crate::index::{FiberKey, IndexProfile};
use crate::poly::{gaussian_inner, monomials_up_to, total_degree, embedding, Exponent, NablaTable, Poly6};
use crate::scalar::{Cx, Rational};
use crate::tensor::{mat4_zero, sym_contract_apply, wedge_apply, CanonicalTensor, FiberBasis, Mat4, Slot};

/// Which fiber a section is declared to take values in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tag {
    /// The whole fiber Vₗ.
    V,
    /// The contraction kernel 𝒱ₗ.
    ScriptV,
}

/// A polynomial field with values in a fiber; zero components are never
/// stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    profile: IndexProfile,
    tag: Tag,
    comps: BTreeMap<FiberKey, Poly6>,
}

impl Section {
    pub fn zero(profile: IndexProfile, tag: Tag) -> Self {
        Section { profile, tag, comps: BTreeMap::new() }
    }

    /// `t ⊗ p`.
    pub fn from_tensor(t: &CanonicalTensor, p: &Poly6, tag: Tag) -> Self {
        let mut s = Section::zero(t.profile(), tag);
        for (k, v) in t.iter() {
            s.add_poly(*k, &p.scale(v));
        }
        s
    }

    pub fn profile(&self) -> IndexProfile {
        self.profile
    }

    pub fn level(&self) -> usize {
        self.profile.alt
    }

    pub fn tag(&self) -> Tag {
        self.tag
    }

    pub fn with_tag(mut self, tag: Tag) -> Self {
        self.tag = tag;
        self
    }

    pub fn components(&self) -> impl Iterator<Item = (&FiberKey, &Poly6)> {
        self.comps.iter()
    }

    pub fn component(&self, key: &FiberKey) -> Option<&Poly6> {
        self.comps.get(key)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add_poly(&mut self, key: FiberKey, p: &Poly6) {
        debug_assert_eq!(key.profile(), self.profile);
        if p.is_zero() {
            return;
        }
        let entry = self.comps.entry(key).or_default();
        entry.add_scaled(p, &Cx::ONE);
        if entry.is_zero() {
            self.comps.remove(&key);
        }
    }

    pub fn add_term(&mut self, key: FiberKey, e: Exponent, c: &Cx) {
        if c.is_zero() {
            return;
        }
        let entry = self.comps.entry(key).or_default();
        entry.add_term(e, c);
        if entry.is_zero() {
            self.comps.remove(&key);
        }
    }

    /// Maximum component degree; `None` for the zero section.
    pub fn degree(&self) -> Option<usize> {
        self.comps.values().filter_map(|p| p.degree()).max()
    }

    pub fn term_count(&self) -> usize {
        self.comps.values().map(|p| p.len()).sum()
    }

    pub fn scale(&self, c: &Cx) -> Section {
        let mut out = Section::zero(self.profile, self.tag);
        if c.is_zero() {
            return out;
        }
        for (k, p) in &self.comps {
            out.comps.insert(*k, p.scale(c));
        }
        out
    }

    pub fn add_scaled(&mut self, other: &Section, c: &Cx) {
        assert_eq!(self.profile, other.profile, "profile mismatch");
        for (k, p) in &other.comps {
            self.add_poly(*k, &p.scale(c));
        }
    }

    pub fn add(&self, other: &Section) -> Section {
        let mut out = self.clone();
        out.add_scaled(other, &Cx::ONE);
        out
    }

    pub fn sub(&self, other: &Section) -> Section {
        let mut out = self.clone();
        out.add_scaled(other, &Cx::int(-1, 0));
        out
    }

    /// Every exponent vector with a nonzero coefficient somewhere.
    pub fn monomials(&self) -> Vec<Exponent> {
        let mut all: Vec<Exponent> = self.comps.values().flat_map(|p| p.terms().map(|(e, _)| *e)).collect();
        all.sort();
        all.dedup();
        all
    }

    /// The fiber coefficient of one monomial.
    pub fn fiber_at(&self, e: &Exponent) -> CanonicalTensor {
        let mut t = CanonicalTensor::zero(self.profile);
        for (k, p) in &self.comps {
            t.set(*k, p.coeff(e));
        }
        t
    }

    /// Contraction applied coefficient-wise.
    pub fn contract(&self) -> Result<Section, Error> {
        let target = self.profile.contracted()?;
        let map = FiberMap::build(self.profile, target, |t| t.contract().expect("profile checked"));
        let mut out = Section::zero(target, Tag::V);
        map.apply_into(self, |p| p.clone(), &mut out);
        Ok(out)
    }

    pub fn is_contraction_free(&self) -> bool {
        if self.profile.alt == 0 || self.profile.sym == 0 {
            return true;
        }
        self.contract().map(|c| c.is_zero()).unwrap_or(false)
    }

    /// ⟨f, h⟩_φ: fiber pairing with multiplicity weights, Gaussian pairing of
    /// the coefficient polynomials.
    pub fn inner(&self, other: &Section) -> Result<Cx, Error> {
        if self.profile != other.profile {
            return Err(Error::ProfileMismatch { expected: self.profile, found: other.profile });
        }
        let mut acc = Cx::ZERO;
        for (k, p) in &self.comps {
            if let Some(q) = other.comps.get(k) {
                let w = Rational::from_int(k.weight() as i64);
                acc += &gaussian_inner(p, q).scale(&w);
            }
        }
        Ok(acc)
    }

    pub fn norm_sq(&self) -> Rational {
        self.inner(self).expect("same profile").re
    }
}

/// A linear map between fibers stored column-wise: the image of each
/// canonical unit tensor.
#[derive(Clone, Debug)]
pub struct FiberMap {
    from: IndexProfile,
    to: IndexProfile,
    cols: BTreeMap<FiberKey, Vec<(FiberKey, Cx)>>,
}

impl FiberMap {
    pub fn build(from: IndexProfile, to: IndexProfile, f: impl Fn(&CanonicalTensor) -> CanonicalTensor) -> Self {
        let mut cols = BTreeMap::new();
        for key in from.keys() {
            let img = f(&CanonicalTensor::unit(from, key));
            debug_assert!(img.is_zero() || img.profile() == to);
            let col: Vec<(FiberKey, Cx)> = img.iter().map(|(k, v)| (*k, v.clone())).collect();
            if !col.is_empty() {
                cols.insert(key, col);
            }
        }
        FiberMap { from, to, cols }
    }

    pub fn from_profile(&self) -> IndexProfile {
        self.from
    }

    pub fn to_profile(&self) -> IndexProfile {
        self.to
    }

    pub fn apply(&self, t: &CanonicalTensor) -> CanonicalTensor {
        let mut out = CanonicalTensor::zero(self.to);
        for (k, v) in t.iter() {
            if let Some(col) = self.cols.get(k) {
                for (k2, c) in col {
                    out.add_at(*k2, &(v * c));
                }
            }
        }
        out
    }

    /// Accumulates Σ_key map(unit_key) ⊗ op(section[key]) into `out`.
    fn apply_into(&self, s: &Section, op: impl Fn(&Poly6) -> Poly6, out: &mut Section) {
        for (k, p) in s.components() {
            let Some(col) = self.cols.get(k) else { continue };
            let q = op(p);
            if q.is_zero() {
                continue;
            }
            for (k2, c) in col {
                out.add_poly(*k2, &q.scale(c));
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.is_empty()
    }
}

/// Scalar part of one term of a first-order operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarOp {
    Identity,
    /// ∂_j
    Deriv(usize),
    /// −∂_j + 2x^j
    Raise(usize),
}

impl ScalarOp {
    pub fn apply(&self, p: &Poly6) -> Poly6 {
        match *self {
            ScalarOp::Identity => p.clone(),
            ScalarOp::Deriv(j) => p.deriv(j),
            ScalarOp::Raise(j) => p.raise(j),
        }
    }
}

/// Σ_terms op ∘ map.
#[derive(Clone, Debug)]
pub struct DiffOp {
    from: IndexProfile,
    to: IndexProfile,
    terms: Vec<(ScalarOp, FiberMap)>,
}

impl DiffOp {
    pub fn apply(&self, s: &Section, tag: Tag) -> Section {
        assert_eq!(s.profile(), self.from, "operator applied at the wrong level");
        let mut out = Section::zero(self.to, tag);
        for (op, map) in &self.terms {
            map.apply_into(s, |p| op.apply(p), &mut out);
        }
        out
    }

    pub fn terms(&self) -> &[(ScalarOp, FiberMap)] {
        &self.terms
    }
}

/// Fiber coefficient table of ∂_j inside ∇^{BA}: `[B][A]`.
pub fn nabla_coefficients(j: usize) -> Mat4 {
    let mut m = mat4_zero();
    for (b, row) in m.iter_mut().enumerate() {
        for (a, e) in row.iter_mut().enumerate() {
            *e = embedding(b, a)[j].clone();
        }
    }
    m
}

/// Whether a theorem precondition on `k` is enforced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Strict,
    /// Runs below k = 6 and flags the output as outside the hypothesis.
    Exploratory,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EstimateReport {
    pub k: usize,
    pub l: usize,
    pub norm_sq: Rational,
    /// ‖Θ_{l−1}f‖²_φ
    pub adjoint_norm_sq: Rational,
    /// ‖𝒟ₗf‖²_φ; zero and unused for l = 3
    pub d_norm_sq: Rational,
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
    pub outside_hypothesis: bool,
}

/// The constants (c_adjoint, c_D) of the L² estimate at level l.
pub fn estimate_constants(k: usize, l: usize) -> Option<(Rational, Rational)> {
    let k = k as i64;
    match l {
        1 => Some((Rational::new(k, 4 * (k - 1)), Rational::new(1, 2))),
        2 if k > 2 => Some((Rational::new(k - 1, 4 * (k - 2)), Rational::new(3, 8))),
        3 if k > 3 => Some((Rational::new(k - 2, 4 * (k - 3)), Rational::ZERO)),
        _ => None,
    }
}

/// Per-spin context: fiber bases and the fiber maps of every operator.
#[derive(Clone, Debug)]
pub struct MonogenicComplex {
    k: usize,
    top: usize,
    bases: Vec<FiberBasis>,
    d_ops: Vec<DiffOp>,
    dstar_ops: Vec<DiffOp>,
    theta_ops: Vec<DiffOp>,
    nabla: NablaTable,
}

impl MonogenicComplex {
    /// Builds the context; levels run over `0..=min(4, k)`.
    pub fn new(k: usize) -> Result<Self, Error> {
        if k == 0 {
            return Err(Error::SpinTooSmall { k, min: 1 });
        }
        let top = k.min(4);
        let profiles: Vec<IndexProfile> = (0..=top).map(|l| IndexProfile::level(k, l)).collect::<Result<_, _>>()?;
        let bases: Vec<FiberBasis> = profiles.iter().map(|&p| FiberBasis::contraction_kernel(p)).collect();
        let nabla = NablaTable::new();
        let mut d_ops = Vec::new();
        let mut dstar_ops = Vec::new();
        let mut theta_ops = Vec::new();
        for l in 0..top {
            let (from, to) = (profiles[l], profiles[l + 1]);
            let mut d_terms = Vec::new();
            let mut s_terms = Vec::new();
            let mut t_terms = Vec::new();
            for j in 0..6 {
                let nj = nabla_coefficients(j);
                let t_j = FiberMap::build(from, to, |t| wedge_apply(&nj, t).expect("valid level"));
                if !t_j.is_zero() {
                    d_terms.push((ScalarOp::Deriv(j), t_j));
                }
                // −Σ_E Θ_{E(B₁} f^{E…}_{…)} with Θ_{EB} = Σ_j ∇_{EB}[j]·(−∂_j + 2x^j)
                let mut lj = mat4_zero();
                for (e, row) in lj.iter_mut().enumerate() {
                    for (b, v) in row.iter_mut().enumerate() {
                        *v = -&nabla.lower[e][b].0[j];
                    }
                }
                let u_j = FiberMap::build(to, from, |t| sym_contract_apply(&lj, t, Slot::First).expect("valid level"));
                let restricted = FiberMap::build(to, from, |t| {
                    let u = sym_contract_apply(&lj, t, Slot::First).expect("valid level");
                    if l == 1 || l == 2 {
                        u.sub(&u.project().expect("levels 1 and 2 carry a projection"))
                    } else {
                        u
                    }
                });
                if !u_j.is_zero() {
                    s_terms.push((ScalarOp::Raise(j), u_j));
                }
                if !restricted.is_zero() {
                    t_terms.push((ScalarOp::Raise(j), restricted));
                }
            }
            d_ops.push(DiffOp { from, to, terms: d_terms });
            dstar_ops.push(DiffOp { from: to, to: from, terms: s_terms });
            theta_ops.push(DiffOp { from: to, to: from, terms: t_terms });
        }
        Ok(MonogenicComplex { k, top, bases, d_ops, dstar_ops, theta_ops, nabla })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Highest level with a fiber, `min(4, k)`.
    pub fn top_level(&self) -> usize {
        self.top
    }

    pub fn profile(&self, l: usize) -> Result<IndexProfile, Error> {
        IndexProfile::level(self.k, l)
    }

    /// Basis of 𝒱ₗ.
    pub fn basis(&self, l: usize) -> Result<&FiberBasis, Error> {
        self.bases.get(l).ok_or(Error::LevelOutOfRange { level: l, k: self.k })
    }

    pub fn nabla(&self) -> &NablaTable {
        &self.nabla
    }

    pub fn d_op(&self, l: usize) -> Result<&DiffOp, Error> {
        self.d_ops.get(l).ok_or(Error::LevelOutOfRange { level: l, k: self.k })
    }

    fn check_level(&self, f: &Section, l: usize) -> Result<(), Error> {
        let expected = self.profile(l)?;
        if f.profile() != expected {
            return Err(Error::ProfileMismatch { expected, found: f.profile() });
        }
        Ok(())
    }

    /// 𝒟ₗf; the tag of `f` carries over.
    pub fn d(&self, l: usize, f: &Section) -> Result<Section, Error> {
        if l > 3 {
            return Err(Error::LevelOutOfRange { level: l, k: self.k });
        }
        let op = self.d_op(l)?;
        self.check_level(f, l)?;
        Ok(op.apply(f, f.tag()))
    }

    /// The unrestricted adjoint 𝒟ₗ*: level l+1 to Vₗ.
    pub fn d_star_full(&self, l: usize, f: &Section) -> Result<Section, Error> {
        if l > 2 {
            return Err(Error::LevelOutOfRange { level: l, k: self.k });
        }
        let op = self.dstar_ops.get(l).ok_or(Error::LevelOutOfRange { level: l, k: self.k })?;
        self.check_level(f, l + 1)?;
        Ok(op.apply(f, Tag::V))
    }

    /// Θₗ = (I − 𝒫)𝒟ₗ*, defined on contraction-free sections.
    pub fn theta_restricted(&self, l: usize, f: &Section) -> Result<Section, Error> {
        if l > 2 {
            return Err(Error::LevelOutOfRange { level: l, k: self.k });
        }
        if f.tag() != Tag::ScriptV {
            return Err(Error::NotContractionFree);
        }
        let op = self.theta_ops.get(l).ok_or(Error::LevelOutOfRange { level: l, k: self.k })?;
        self.check_level(f, l + 1)?;
        Ok(op.apply(f, Tag::ScriptV))
    }

    /// □ₗ = 𝒟_{l−1}Θ_{l−1} + Θₗ𝒟ₗ (the second term is absent at l = 3).
    pub fn box_op(&self, l: usize, f: &Section) -> Result<Section, Error> {
        if !(1..=3).contains(&l) {
            return Err(Error::LevelOutOfRange { level: l, k: self.k });
        }
        if f.tag() != Tag::ScriptV {
            return Err(Error::NotContractionFree);
        }
        let mut out = self.d(l - 1, &self.theta_restricted(l - 1, f)?)?;
        if l < 3 {
            out = out.add(&self.theta_restricted(l, &self.d(l, f)?)?);
        }
        Ok(out.with_tag(Tag::ScriptV))
    }

    /// Exact comparison of ‖f‖² against the right-hand side of the L²
    /// estimate with its explicit constants.
    pub fn estimate_check(&self, l: usize, f: &Section, mode: Mode) -> Result<EstimateReport, Error> {
        let outside = self.k < 6;
        if outside && mode == Mode::Strict {
            return Err(Error::OutsideHypothesis { k: self.k });
        }
        let (ca, cd) = estimate_constants(self.k, l).ok_or(Error::LevelOutOfRange { level: l, k: self.k })?;
        if self.k <= l {
            return Err(Error::LevelOutOfRange { level: l, k: self.k });
        }
        let adjoint = self.theta_restricted(l - 1, f)?.norm_sq();
        let dn = if l < 3 { self.d(l, f)?.norm_sq() } else { Rational::ZERO };
        let lhs = f.norm_sq();
        let rhs = &ca * &adjoint + &cd * &dn;
        Ok(EstimateReport {
            k: self.k,
            l,
            holds: lhs <= rhs,
            norm_sq: lhs.clone(),
            adjoint_norm_sq: adjoint,
            d_norm_sq: dn,
            lhs,
            rhs,
            outside_hypothesis: outside,
        })
    }

    /// Principal symbol of Θₗ at v: Σ_j i·v_j·(I − 𝒫)U_j, from level l+1 to l.
    pub fn theta_symbol_map(&self, l: usize, v: &[Rational; 6]) -> Result<FiberMap, Error> {
        let op = self.theta_ops.get(l).ok_or(Error::LevelOutOfRange { level: l, k: self.k })?;
        Ok(FiberMap::build(op.from, op.to, |t| {
            let mut acc = CanonicalTensor::zero(op.to);
            for (sop, map) in &op.terms {
                if let ScalarOp::Raise(j) = sop {
                    acc.add_scaled(&map.apply(t), &Cx::new(Rational::ZERO, v[*j].clone()));
                }
            }
            acc
        }))
    }

    /// Random contraction-free section of exact total degree `degree`:
    /// small Gaussian-integer coefficients on Vₗ ⊗ (monomials ≤ degree),
    /// then (I − 𝒫) at levels 1, 2; at level 3 the draw is made directly
    /// in basis coordinates of 𝒱₃.
    pub fn random_section<R: Rng + ?Sized>(&self, l: usize, degree: usize, rng: &mut R) -> Result<Section, Error> {
        let prof = self.profile(l)?;
        let basis = self.basis(l)?;
        if basis.dim() == 0 {
            return Ok(Section::zero(prof, Tag::ScriptV));
        }
        let mons = monomials_up_to(degree);
        let draw = |rng: &mut R| Cx::int(rng.random_range(-3..=3), rng.random_range(-3..=3));
        loop {
            let mut s = Section::zero(prof, Tag::ScriptV);
            for e in &mons {
                let t = match l {
                    0 => {
                        let mut t = CanonicalTensor::zero(prof);
                        for key in prof.keys() {
                            t.set(key, draw(rng));
                        }
                        t
                    }
                    1 | 2 => {
                        let mut t = CanonicalTensor::zero(prof);
                        for key in prof.keys() {
                            t.set(key, draw(rng));
                        }
                        t.sub(&t.project()?)
                    }
                    _ => {
                        let coeffs: Vec<Cx> = (0..basis.dim()).map(|_| draw(rng)).collect();
                        basis.combine(&coeffs)
                    }
                };
                for (k, v) in t.iter() {
                    s.add_term(*k, *e, v);
                }
            }
            if s.degree() == Some(degree) {
                return Ok(s);
            }
        }
    }

    /// Random section with values in the whole fiber Vₗ.
    pub fn random_v_section<R: Rng + ?Sized>(&self, l: usize, degree: usize, rng: &mut R) -> Result<Section, Error> {
        let prof = self.profile(l)?;
        let mut s = Section::zero(prof, Tag::V);
        for e in monomials_up_to(degree) {
            for key in prof.keys() {
                s.add_term(key, e, &Cx::int(rng.random_range(-3..=3), rng.random_range(-3..=3)));
            }
        }
        Ok(s)
    }
}

/// All monomials of exactly the given degree.
pub fn monomials_of_degree(d: usize) -> Vec<Exponent> {
    monomials_up_to(d).into_iter().filter(|e| total_degree(e) == d).collect()
}
