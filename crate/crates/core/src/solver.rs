//! Polynomial solutions of 𝒟ₗu = f.
//!
//! The solver works with A = 𝒟ₗΘₗ on 𝒱ₗ₊₁-valued polynomials. A is
//! self-adjoint and nonnegative for the Gaussian pairing and maps
//! polynomials of degree ≤ L to themselves. The Krylov vectors f, Af, A²f, …
//! (each rescaled to primitive Gaussian-integer coefficients) become
//! dependent after a few steps; the dependence is the minimal polynomial of
//! A on f, whose constant term is nonzero exactly when f is in the range.
//! Dividing it out gives g with Ag = f, and u = Θₗg. Since u lies in the
//! range of Θₗ, which is orthogonal to ker 𝒟ₗ, it is the solution of least
//! weighted norm, and deg u ≤ deg f + 1.
//!
//! `assemble` writes 𝒟ₗ out as an explicit sparse matrix on a degree-capped
//! space; it is used to sample compatible right-hand sides and as an
//! independent check on the iterative solver.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::complex::{Mode, MonogenicComplex, ScalarOp, Section, Tag};
use crate::error::Error;
use crate::index::IndexProfile;
use crate::linalg::FractionFreeRref;
use crate::poly::{monomials_up_to, Exponent};
use crate::scalar::{Cx, Rational};
use crate::tensor::FiberBasis;

/// 𝒱ₗ-valued polynomials of degree at most a cap, with basis
/// (basis vector of 𝒱ₗ) × (monomial). Coordinate `m · dim 𝒱ₗ + b` belongs
/// to basis vector `b` times monomial number `m`.
#[derive(Clone, Debug)]
pub struct DegreeCappedSpace {
    basis: FiberBasis,
    degree_cap: Option<usize>,
    monomials: Vec<Exponent>,
    index: BTreeMap<Exponent, usize>,
}

impl DegreeCappedSpace {
    /// Polynomials of degree ≤ `cap`; `None` is the zero space.
    pub fn new(basis: FiberBasis, cap: Option<usize>) -> Self {
        let monomials = cap.map(monomials_up_to).unwrap_or_default();
        let index = monomials.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        DegreeCappedSpace { basis, degree_cap: cap, monomials, index }
    }

    pub fn profile(&self) -> IndexProfile {
        self.basis.profile()
    }

    pub fn degree_cap(&self) -> Option<usize> {
        self.degree_cap
    }

    pub fn fiber_basis(&self) -> &FiberBasis {
        &self.basis
    }

    pub fn monomials(&self) -> &[Exponent] {
        &self.monomials
    }

    pub fn dim(&self) -> usize {
        self.basis.dim() * self.monomials.len()
    }

    pub fn position(&self, b: usize, e: &Exponent) -> Option<usize> {
        self.index.get(e).map(|m| m * self.basis.dim() + b)
    }

    /// Coordinates of a section in this space.
    pub fn coords(&self, s: &Section) -> Result<Vec<Cx>, Error> {
        if s.profile() != self.profile() {
            return Err(Error::ProfileMismatch { expected: self.profile(), found: s.profile() });
        }
        let n = self.basis.dim();
        let mut out = vec![Cx::ZERO; self.dim()];
        for e in s.monomials() {
            let Some(&m) = self.index.get(&e) else {
                return Err(Error::DimensionMismatch {
                    expected: self.degree_cap.unwrap_or(0),
                    found: s.degree().unwrap_or(0),
                });
            };
            let fiber = s.fiber_at(&e);
            if !self.basis.contains(&fiber) {
                return Err(Error::NotContractionFree);
            }
            for (b, c) in self.basis.coords(&fiber).into_iter().enumerate() {
                out[m * n + b] = c;
            }
        }
        Ok(out)
    }

    pub fn section(&self, coords: &[Cx]) -> Section {
        assert_eq!(coords.len(), self.dim());
        let n = self.basis.dim();
        let mut s = Section::zero(self.profile(), Tag::ScriptV);
        for (m, e) in self.monomials.iter().enumerate() {
            let block = &coords[m * n..(m + 1) * n];
            if block.iter().all(|c| c.is_zero()) {
                continue;
            }
            for (key, v) in self.basis.combine(block).iter() {
                s.add_term(*key, *e, v);
            }
        }
        s
    }
}

/// 𝒟ₗ as a sparse matrix from (𝒱ₗ, deg ≤ D) to (𝒱ₗ₊₁, deg ≤ D − 1).
#[derive(Clone, Debug)]
pub struct AssembledOperator {
    pub level: usize,
    pub domain: DegreeCappedSpace,
    pub codomain: DegreeCappedSpace,
    rows: Vec<Vec<(usize, Cx)>>,
}

impl AssembledOperator {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.domain.dim()
    }

    pub fn rows(&self) -> &[Vec<(usize, Cx)>] {
        &self.rows
    }

    pub fn apply(&self, x: &[Cx]) -> Vec<Cx> {
        assert_eq!(x.len(), self.ncols());
        self.rows
            .iter()
            .map(|row| {
                let mut acc = Cx::ZERO;
                for (j, v) in row {
                    if !x[*j].is_zero() {
                        acc += &(v * &x[*j]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn rref(&self) -> FractionFreeRref {
        FractionFreeRref::new(self.rows.clone(), self.ncols())
    }
}

/// Matrix of 𝒟ₗ on 𝒱ₗ-valued polynomials of degree ≤ `cap`.
pub fn assemble(cx: &MonogenicComplex, l: usize, cap: usize) -> Result<AssembledOperator, Error> {
    if cx.k() < 4 {
        return Err(Error::SpinTooSmall { k: cx.k(), min: 4 });
    }
    if l > 2 {
        return Err(Error::LevelOutOfRange { level: l, k: cx.k() });
    }
    let domain = DegreeCappedSpace::new(cx.basis(l)?.clone(), Some(cap));
    let codomain = DegreeCappedSpace::new(cx.basis(l + 1)?.clone(), cap.checked_sub(1));
    let op = cx.d_op(l)?;
    // images[b][j] = coordinates of T_j applied to basis vector b
    let images: Vec<Vec<(usize, Vec<Cx>)>> = domain
        .fiber_basis()
        .vectors()
        .iter()
        .map(|v| {
            op.terms()
                .iter()
                .filter_map(|(sop, map)| match sop {
                    ScalarOp::Deriv(j) => Some((*j, codomain.fiber_basis().coords(&map.apply(v)))),
                    _ => None,
                })
                .collect()
        })
        .collect();
    let mut rows: Vec<Vec<(usize, Cx)>> = vec![Vec::new(); codomain.dim()];
    for e in domain.monomials() {
        for (b, imgs) in images.iter().enumerate() {
            let col = domain.position(b, e).expect("own monomial");
            for (j, coords) in imgs {
                if e[*j] == 0 {
                    continue;
                }
                let mut lowered = *e;
                lowered[*j] -= 1;
                let factor = Rational::from_int(e[*j] as i64);
                for (c, v) in coords.iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    let row = codomain.position(c, &lowered).expect("degree drops by one");
                    rows[row].push((col, v.scale(&factor)));
                }
            }
        }
    }
    for row in &mut rows {
        row.sort_by_key(|e| e.0);
        let mut merged: Vec<(usize, Cx)> = Vec::with_capacity(row.len());
        for (j, v) in row.drain(..) {
            match merged.last_mut() {
                Some((lj, lv)) if *lj == j => *lv += &v,
                _ => merged.push((j, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        *row = merged;
    }
    Ok(AssembledOperator { level: l, domain, codomain, rows })
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub u: Section,
    pub residual_zero: bool,
    pub compatibility_checked: bool,
    pub min_norm_selected: bool,
    /// Degree of the returned solution; always deg f + 1 for f ≠ 0, since
    /// 𝒟ₗ lowers degree by exactly one.
    pub u_degree: Option<usize>,
    pub norm_sq: Rational,
    pub iterations: usize,
    pub outside_hypothesis: bool,
}

/// Solves 𝒟ₗu = f for a contraction-free polynomial f at level l + 1.
pub fn solve(cx: &MonogenicComplex, l: usize, f: &Section, mode: Mode) -> Result<SolveResult, Error> {
    let k = cx.k();
    if k < 4 {
        return Err(Error::SpinTooSmall { k, min: 4 });
    }
    let outside = k < 6;
    if outside && mode == Mode::Strict {
        return Err(Error::OutsideHypothesis { k });
    }
    if l > 2 {
        return Err(Error::LevelOutOfRange { level: l, k });
    }
    let expected = cx.profile(l + 1)?;
    if f.profile() != expected {
        return Err(Error::ProfileMismatch { expected, found: f.profile() });
    }
    if !f.is_contraction_free() {
        return Err(Error::NotContractionFree);
    }
    let f = f.clone().with_tag(Tag::ScriptV);
    if l < 2 {
        let residual = cx.d(l + 1, &f)?;
        if !residual.is_zero() {
            return Err(Error::Incompatible { residual: Box::new(residual) });
        }
    }

    let (u, iterations) = if f.is_zero() {
        (Section::zero(cx.profile(l)?, Tag::ScriptV), 0)
    } else {
        krylov_solve(cx, l, &f)?
    };

    let residual_zero = cx.d(l, &u)?.sub(&f).is_zero();
    if !residual_zero {
        return Err(Error::Unsolvable);
    }
    Ok(SolveResult {
        u_degree: u.degree(),
        norm_sq: u.norm_sq(),
        u,
        residual_zero,
        compatibility_checked: l < 2,
        min_norm_selected: true,
        iterations,
        outside_hypothesis: outside,
    })
}

/// Minimal polynomial of A = 𝒟ₗΘₗ on the Krylov space of a nonzero f.
fn krylov_solve(cx: &MonogenicComplex, l: usize, f: &Section) -> Result<(Section, usize), Error> {
    let bound = f.degree().map(|d| cx.basis(l + 1).map(|b| b.dim()).unwrap_or(0) * monomials_up_to(d).len());
    let t0 = primitive_scale(f);
    let mut qs = vec![f.scale(&Cx::from(t0.clone()))];
    // τᵢ with qᵢ = τᵢ·Aⁱf
    let mut taus = vec![t0];
    let mut thetas: Vec<Section> = Vec::new();
    let mut gram = vec![vec![qs[0].norm_sq()]];
    loop {
        let j = qs.len() - 1;
        if Some(j) > bound {
            return Err(Error::Unsolvable);
        }
        let theta = cx.theta_restricted(l, &qs[j])?;
        let w = cx.d(l, &theta)?;
        thetas.push(theta);
        let t = if w.is_zero() { Rational::ONE } else { primitive_scale(&w) };
        let q = w.scale(&Cx::from(t.clone()));
        let h: Vec<Rational> = qs.iter().map(|qi| qi.inner(&q).map(|z| z.re)).collect::<Result<_, _>>()?;
        let y = solve_dense(&gram, &h);
        let schur = &q.norm_sq() - &dot(&h, &y);
        let tau = &taus[j] * &t;
        if !schur.is_zero() {
            for (row, hi) in gram.iter_mut().zip(&h) {
                row.push(hi.clone());
            }
            let mut last = h;
            last.push(q.norm_sq());
            gram.push(last);
            qs.push(q);
            taus.push(tau);
            continue;
        }
        // τ_d·A^d f = Σ yᵢτᵢ·Aⁱf with d = j + 1
        let d = j + 1;
        let mut c: Vec<Rational> = y.iter().zip(&taus).map(|(yi, ti)| -(yi * ti)).collect();
        c.push(tau);
        if c[0].is_zero() {
            return Err(Error::Unsolvable);
        }
        let mut u = Section::zero(cx.profile(l)?, Tag::ScriptV);
        for m in 1..=d {
            let coeff = -(&c[m] / &(&c[0] * &taus[m - 1]));
            if !coeff.is_zero() {
                u.add_scaled(&thetas[m - 1], &Cx::from(coeff));
            }
        }
        return Ok((u, d));
    }
}

/// Positive rational t making t·s primitive over ℤ[i].
fn primitive_scale(s: &Section) -> Rational {
    let mut lcm = BigInt::one();
    for (_, p) in s.components() {
        for (_, c) in p.terms() {
            lcm = lcm.lcm(&c.denom_lcm());
        }
    }
    let mut gcd = BigInt::zero();
    for (_, p) in s.components() {
        for (_, c) in p.terms() {
            for part in [&c.re, &c.im] {
                if !part.is_zero() {
                    gcd = gcd.gcd(&(part.numer() * (&lcm / part.denom())));
                }
            }
        }
    }
    if gcd.is_zero() {
        return Rational::ONE;
    }
    Rational::from_big(BigRational::new(lcm, gcd))
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::ZERO, |acc, (x, y)| &acc + &(x * y))
}

/// Solves a small nonsingular system by Gaussian elimination.
fn solve_dense(a: &[Vec<Rational>], b: &[Rational]) -> Vec<Rational> {
    let n = b.len();
    let mut m: Vec<Vec<Rational>> = a.iter().zip(b).map(|(row, bi)| {
        let mut r = row.clone();
        r.push(bi.clone());
        r
    }).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero()).expect("Gram matrix of independent vectors");
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=n {
                    let v = &m[r][c] - &(&factor * &m[col][c]);
                    m[r][c] = v;
                }
            }
        }
    }
    m.into_iter().map(|mut r| r.pop().unwrap()).collect()
}

/// A random 𝒱ₗ₊₁-valued polynomial of degree ≤ `degree` with 𝒟ₗ₊₁f = 0,
/// drawn from the kernel of the assembled matrix (any contraction-free f at
/// l = 2).
pub fn sample_compatible<R: Rng + ?Sized>(
    cx: &MonogenicComplex,
    l: usize,
    degree: usize,
    rng: &mut R,
) -> Result<Section, Error> {
    if l > 2 {
        return Err(Error::LevelOutOfRange { level: l, k: cx.k() });
    }
    if l == 2 {
        return cx.random_section(3, degree, rng);
    }
    let op = assemble(cx, l + 1, degree)?;
    let rref = op.rref();
    let free: Vec<(usize, Cx)> = rref
        .free_cols()
        .into_iter()
        .map(|c| (c, Cx::int(rng.random_range(-3..=3), rng.random_range(-3..=3))))
        .collect();
    Ok(op.domain.section(&rref.kernel_vector(&free)))
}
