//! Symbols of the complex at a covector v: the matrix M(v), the maps σₗ(v)
//! on contraction-free fibers, exactness certificates, and constructive
//! preimages.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::complex::MonogenicComplex;
use crate::error::Error;
use crate::index::{FiberKey, IndexProfile};
use crate::linalg::{exact_rank, gauss_primes, FractionFreeRref};
use crate::poly::embedding;
use crate::scalar::{Cx, Rational};
use crate::tensor::{mat4_zero, sym_contract_apply, wedge_apply, CanonicalTensor, FiberBasis, Mat4, Slot};

/// M(v) = (1/i)·z(v) and its inverse conj(M)ᵀ/|v|².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CovectorM {
    v: [Rational; 6],
    m: Mat4,
    minv: Mat4,
}

impl CovectorM {
    pub fn new(v: [Rational; 6]) -> Result<Self, Error> {
        let n2 = v.iter().fold(Rational::ZERO, |acc, x| &acc + &(x * x));
        if n2.is_zero() {
            return Err(Error::DegenerateCovector);
        }
        let mut m = mat4_zero();
        for (a, row) in m.iter_mut().enumerate() {
            for (b, e) in row.iter_mut().enumerate() {
                let emb = embedding(a, b);
                let mut acc = Cx::ZERO;
                for j in 0..6 {
                    acc += &emb[j].scale(&v[j]);
                }
                // divide by i
                *e = Cx::new(acc.im.clone(), -&acc.re);
            }
        }
        let inv_n2 = n2.recip();
        let minv: Mat4 = core::array::from_fn(|a| core::array::from_fn(|b| m[b][a].conj().scale(&inv_n2)));
        Ok(CovectorM { v, m, minv })
    }

    pub fn from_ints(v: [i64; 6]) -> Result<Self, Error> {
        Self::new(v.map(Rational::from_int))
    }

    pub fn v(&self) -> &[Rational; 6] {
        &self.v
    }

    pub fn m(&self) -> &Mat4 {
        &self.m
    }

    pub fn minv(&self) -> &Mat4 {
        &self.minv
    }

    pub fn norm_sq(&self) -> Rational {
        self.v.iter().fold(Rational::ZERO, |acc, x| &acc + &(x * x))
    }
}

pub fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    core::array::from_fn(|i| {
        core::array::from_fn(|j| {
            let mut acc = Cx::ZERO;
            for k in 0..4 {
                acc += &(&a[i][k] * &b[k][j]);
            }
            acc
        })
    })
}

pub fn mat4_conj_transpose(a: &Mat4) -> Mat4 {
    core::array::from_fn(|i| core::array::from_fn(|j| a[j][i].conj()))
}

pub fn mat4_scalar(c: &Cx) -> Mat4 {
    core::array::from_fn(|i| core::array::from_fn(|j| if i == j { c.clone() } else { Cx::ZERO }))
}

/// Inverse by Gauss–Jordan elimination; `None` if singular.
pub fn mat4_inverse(a: &Mat4) -> Option<Mat4> {
    let mut m: Vec<Vec<Cx>> = (0..4)
        .map(|i| {
            let mut row = a[i].to_vec();
            row.extend((0..4).map(|j| if i == j { Cx::ONE } else { Cx::ZERO }));
            row
        })
        .collect();
    for col in 0..4 {
        let piv = (col..4).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                *x -= &(&f * p);
            }
        }
    }
    Some(core::array::from_fn(|i| core::array::from_fn(|j| m[i][4 + j].clone())))
}

/// Random nonzero integer covector in [−5, 5]⁶.
pub fn random_covector<R: Rng + ?Sized>(rng: &mut R) -> [i64; 6] {
    loop {
        let v: [i64; 6] = core::array::from_fn(|_| rng.random_range(-5..=5));
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

/// A nonzero covector with small rational entries p/q, q ≤ 3.
pub fn random_rational_covector<R: Rng + ?Sized>(rng: &mut R) -> [Rational; 6] {
    loop {
        let v: [Rational; 6] = core::array::from_fn(|_| Rational::new(rng.random_range(-4..=4), rng.random_range(1..=3)));
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// σₗ(v) on fiber tensors: Σ_{B₁} M^{B₁[A₁} f^{A₂…]}_{B₁…}.
pub fn sigma_tensor(m: &CovectorM, f: &CanonicalTensor) -> Result<CanonicalTensor, Error> {
    wedge_apply(&m.m, f)
}

/// σ̃: ⊙^{k−1}⊗∧³ → ⊙^{k−2}⊗∧⁴, the same formula one level up.
pub fn lifted_symbol_tilde(m: &CovectorM, xi_tilde: &CanonicalTensor) -> Result<CanonicalTensor, Error> {
    if xi_tilde.profile().alt != 3 {
        let p = xi_tilde.profile();
        return Err(Error::InvalidProfile { sym: p.sym, alt: p.alt });
    }
    wedge_apply(&m.m, xi_tilde)
}

/// σₗ(v) as a matrix from basis coordinates of 𝒱ₗ to basis coordinates of
/// 𝒱ₗ₊₁.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolMatrix {
    pub level: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Cx>>,
}

impl SymbolMatrix {
    pub fn apply(&self, x: &[Cx]) -> Vec<Cx> {
        crate::linalg::mat_vec(&self.entries, x)
    }
}

pub fn sigma_matrix(cx: &MonogenicComplex, l: usize, m: &CovectorM) -> Result<SymbolMatrix, Error> {
    if l > 2 || l + 1 > cx.top_level() {
        return Err(Error::LevelOutOfRange { level: l, k: cx.k() });
    }
    let bin = cx.basis(l)?;
    let bout = cx.basis(l + 1)?;
    let mut entries = vec![vec![Cx::ZERO; bin.dim()]; bout.dim()];
    for (c, b) in bin.vectors().iter().enumerate() {
        let img = sigma_tensor(m, b)?;
        for (r, x) in bout.coords(&img).into_iter().enumerate() {
            entries[r][c] = x;
        }
    }
    Ok(SymbolMatrix { level: l, rows: bout.dim(), cols: bin.dim(), entries })
}

/// Exact rank given a known upper bound: modular ranks are lower bounds, so
/// reaching the bound settles the rank; otherwise the exact fraction-free
/// rank decides.
pub fn certified_rank(entries: &[Vec<Cx>], upper_bound: usize) -> usize {
    if entries.is_empty() || upper_bound == 0 {
        return 0;
    }
    for gp in gauss_primes(2) {
        if gp.rank(entries) == Some(upper_bound) {
            return upper_bound;
        }
    }
    exact_rank(entries)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub k: usize,
    /// dim 𝒱ₗ for l = 0..=4
    pub dims: [usize; 5],
    /// rank σₗ for l = 0, 1, 2
    pub ranks: [usize; 3],
    pub composition_zero: bool,
    pub injective_0: bool,
    pub exact_1: bool,
    pub exact_2: bool,
    pub surjective_2: bool,
    pub euler_zero: bool,
}

impl ExactnessReport {
    pub fn all_hold(&self) -> bool {
        self.composition_zero && self.injective_0 && self.exact_1 && self.exact_2 && self.surjective_2 && self.euler_zero
    }
}

/// σₗ₊₁σₗ = 0 checked on every basis vector of 𝒱ₗ.
pub fn composition_vanishes(cx: &MonogenicComplex, l: usize, m: &CovectorM) -> Result<bool, Error> {
    for b in cx.basis(l)?.vectors() {
        let s = sigma_tensor(m, b)?;
        if !sigma_tensor(m, &s)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn exactness_report(cx: &MonogenicComplex, m: &CovectorM) -> Result<ExactnessReport, Error> {
    if cx.k() < 4 {
        return Err(Error::SpinTooSmall { k: cx.k(), min: 4 });
    }
    let mut dims = [0usize; 5];
    for (l, d) in dims.iter_mut().enumerate() {
        *d = cx.basis(l)?.dim();
    }
    let composition_zero = composition_vanishes(cx, 0, m)? && composition_vanishes(cx, 1, m)?;
    let s0 = sigma_matrix(cx, 0, m)?;
    let s1 = sigma_matrix(cx, 1, m)?;
    let s2 = sigma_matrix(cx, 2, m)?;
    // With σ₁σ₀ = 0 and σ₂σ₁ = 0, rank σ₁ ≤ dim 𝒱₁ − rank σ₀ and so on.
    let r0 = certified_rank(&s0.entries, dims[0].min(dims[1]));
    let r1 = certified_rank(&s1.entries, (dims[1] - r0.min(dims[1])).min(dims[2]));
    let r2 = certified_rank(&s2.entries, (dims[2] - r1.min(dims[2])).min(dims[3]));
    let euler = dims[0] as i64 - dims[1] as i64 + dims[2] as i64 - dims[3] as i64 + dims[4] as i64;
    Ok(ExactnessReport {
        k: cx.k(),
        dims,
        ranks: [r0, r1, r2],
        composition_zero,
        injective_0: r0 == dims[0],
        exact_1: composition_zero && dims[1] - r1 == r0,
        exact_2: composition_zero && dims[2] - r2 == r1,
        surjective_2: r2 == dims[3],
        euler_zero: euler == 0,
    })
}

/// Draws random elements of ker σₗ(v) inside 𝒱ₗ. The symbol matrix is
/// eliminated once; at the top level every element of 𝒱₃ qualifies.
#[derive(Clone, Debug)]
pub struct KernelSampler {
    basis: FiberBasis,
    rref: Option<FractionFreeRref>,
}

impl KernelSampler {
    pub fn new(cx: &MonogenicComplex, l: usize, m: &CovectorM) -> Result<Self, Error> {
        let basis = cx.basis(l)?.clone();
        if l == 3 {
            return Ok(KernelSampler { basis, rref: None });
        }
        let s = sigma_matrix(cx, l, m)?;
        let rows = s
            .entries
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect())
            .collect();
        Ok(KernelSampler { basis, rref: Some(FractionFreeRref::new(rows, s.cols)) })
    }

    pub fn kernel_dim(&self) -> usize {
        match &self.rref {
            Some(r) => r.ncols() - r.rank(),
            None => self.basis.dim(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> CanonicalTensor {
        let mut draw = || Cx::int(rng.random_range(-3..=3), rng.random_range(-3..=3));
        match &self.rref {
            None => {
                let coeffs: Vec<Cx> = (0..self.basis.dim()).map(|_| draw()).collect();
                self.basis.combine(&coeffs)
            }
            Some(rref) => {
                let free: Vec<(usize, Cx)> = rref.free_cols().into_iter().map(|c| (c, draw())).collect();
                self.basis.combine(&rref.kernel_vector(&free))
            }
        }
    }
}

fn require_level(cx: &MonogenicComplex, xi: &CanonicalTensor, l: usize) -> Result<(), Error> {
    let expected = IndexProfile::level(cx.k(), l)?;
    if xi.profile() != expected {
        return Err(Error::ProfileMismatch { expected, found: xi.profile() });
    }
    if !xi.contract()?.is_zero() {
        return Err(Error::NotContractionFree);
    }
    Ok(())
}

/// Ξ_{B₁…B_k} = Σ_E M^{−1}_{E(B₁} ξ^E_{B₂…)}, a preimage under σ₀ of any ξ
/// in ker σ₁.
pub fn preimage_sigma0(cx: &MonogenicComplex, m: &CovectorM, xi: &CanonicalTensor) -> Result<CanonicalTensor, Error> {
    require_level(cx, xi, 1)?;
    if !sigma_tensor(m, xi)?.is_zero() {
        return Err(Error::NotInKernel);
    }
    sym_contract_apply(&m.minv, xi, Slot::First)
}

/// (−2(k−1)/k)·Ξ with Ξ^A_{B₁…} = Σ_E M^{−1}_{E(B₁} ξ^{AE}_{B₂…)}.
pub fn preimage_sigma1(cx: &MonogenicComplex, m: &CovectorM, xi: &CanonicalTensor) -> Result<CanonicalTensor, Error> {
    require_level(cx, xi, 2)?;
    if !sigma_tensor(m, xi)?.is_zero() {
        return Err(Error::NotInKernel);
    }
    let k = cx.k() as i64;
    let big = sym_contract_apply(&m.minv, xi, Slot::Last)?;
    Ok(big.scale(&Cx::ratio(-2 * (k - 1), k)))
}

/// The lift of ξ ∈ 𝒱₃ to ⊙^{k−2}⊗∧⁴ with 𝒞(ξ̃) = ξ: on the key with
/// subscripts S the value is ±ξ^{{1234}∖a}_{S∖a}, a the smallest subscript.
pub fn lift_to_top(xi: &CanonicalTensor) -> Result<CanonicalTensor, Error> {
    let p = xi.profile();
    if p.alt != 3 {
        return Err(Error::InvalidProfile { sym: p.sym, alt: p.alt });
    }
    let target = IndexProfile { sym: p.sym + 1, alt: 4 };
    let mut out = CanonicalTensor::zero(target);
    for key in target.keys() {
        let a = (0..4u8).find(|&c| key.counts[c as usize] > 0).expect("at least one subscript");
        let src = FiberKey { counts: key.with_lower_removed(a).unwrap().counts, mask: 0xf & !(1 << a) };
        let v = xi.get(&src);
        out.set(key, if a % 2 == 0 { v } else { -v });
    }
    Ok(out)
}

/// (3(k−1)/(k+2))·𝒞(Ξ̃) with Ξ̃^{E₂A₁A₂}_{B₁…} = Σ_{E₁} M^{−1}_{E₁(B₁} ξ̃^{E₂A₁A₂E₁}_{B₂…)}.
pub fn preimage_sigma2(cx: &MonogenicComplex, m: &CovectorM, xi: &CanonicalTensor) -> Result<CanonicalTensor, Error> {
    require_level(cx, xi, 3)?;
    let k = cx.k() as i64;
    let lifted = lift_to_top(xi)?;
    let big = sym_contract_apply(&m.minv, &lifted, Slot::Last)?;
    // σ₂𝒞(Ξ̃) = ((k+2)/(3(k−1)))·ξ with these index conventions
    Ok(big.contract()?.scale(&Cx::ratio(3 * (k - 1), k + 2)))
}

/// Injectivity of the principal symbol of □ₗ on 𝒱ₗ, via the stacked map
/// [σₗ(v); σ(Θₗ₋₁)(v)] where σ(Θₗ₋₁) = Σ_j i·v_j·(I − 𝒫)U_j.
pub fn box_symbol_injective(cx: &MonogenicComplex, l: usize, m: &CovectorM) -> Result<bool, Error> {
    if !(1..=3).contains(&l) {
        return Err(Error::LevelOutOfRange { level: l, k: cx.k() });
    }
    let bin = cx.basis(l)?;
    let bdown = cx.basis(l - 1)?;
    let theta = cx.theta_symbol_map(l - 1, m.v())?;
    let up = if l < cx.top_level() { Some(cx.basis(l + 1)?) } else { None };
    let rows_up = up.map(|b| b.dim()).unwrap_or(0);
    let mut entries = vec![vec![Cx::ZERO; bin.dim()]; rows_up + bdown.dim()];
    for (c, b) in bin.vectors().iter().enumerate() {
        if let Some(bu) = up {
            for (r, x) in bu.coords(&sigma_tensor(m, b)?).into_iter().enumerate() {
                entries[r][c] = x;
            }
        }
        for (r, x) in bdown.coords(&theta.apply(b)).into_iter().enumerate() {
            entries[rows_up + r][c] = x;
        }
    }
    Ok(certified_rank(&entries, bin.dim()) == bin.dim())
}
