//! Polynomials on ℝ⁶ over ℚ(i), the vector fields ∇^{AB} and ∇_{AB}, the
//! coordinates z^{AB}, the weighted adjoint Θ_{AB}, and the Gaussian pairing.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::index::epsilon;
use crate::scalar::{Cx, Rational};

pub type Exponent = [u8; 6];

/// Sparse polynomial in x⁰,…,x⁵; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly6 {
    terms: BTreeMap<Exponent, Cx>,
}

pub fn total_degree(e: &Exponent) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

impl Poly6 {
    pub fn zero() -> Self {
        Poly6 { terms: BTreeMap::new() }
    }

    pub fn constant(c: Cx) -> Self {
        Self::monomial([0; 6], c)
    }

    pub fn one() -> Self {
        Self::constant(Cx::ONE)
    }

    pub fn monomial(e: Exponent, c: Cx) -> Self {
        let mut p = Self::zero();
        p.add_term(e, &c);
        p
    }

    /// The coordinate function x^j.
    pub fn x(j: usize) -> Self {
        let mut e = [0u8; 6];
        e[j] = 1;
        Self::monomial(e, Cx::ONE)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Cx)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponent) -> Cx {
        self.terms.get(e).cloned().unwrap_or(Cx::ZERO)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(total_degree).max()
    }

    pub fn add_term(&mut self, e: Exponent, c: &Cx) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Poly6, c: &Cx) {
        if c.is_zero() {
            return;
        }
        let unit = *c == Cx::ONE;
        for (e, v) in &other.terms {
            if unit {
                self.add_term(*e, v);
            } else {
                self.add_term(*e, &(v * c));
            }
        }
    }

    pub fn add(&self, other: &Poly6) -> Poly6 {
        let mut out = self.clone();
        out.add_scaled(other, &Cx::ONE);
        out
    }

    pub fn sub(&self, other: &Poly6) -> Poly6 {
        let mut out = self.clone();
        out.add_scaled(other, &Cx::int(-1, 0));
        out
    }

    pub fn neg(&self) -> Poly6 {
        self.scale(&Cx::int(-1, 0))
    }

    pub fn scale(&self, c: &Cx) -> Poly6 {
        if c.is_zero() {
            return Poly6::zero();
        }
        Poly6 { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn mul(&self, other: &Poly6) -> Poly6 {
        let mut out = Poly6::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let mut e = *e1;
                for j in 0..6 {
                    e[j] += e2[j];
                }
                out.add_term(e, &(c1 * c2));
            }
        }
        out
    }

    /// Coefficient-wise conjugation (x is real).
    pub fn conj(&self) -> Poly6 {
        Poly6 { terms: self.terms.iter().map(|(e, v)| (*e, v.conj())).collect() }
    }

    /// ∂/∂x^j.
    pub fn deriv(&self, j: usize) -> Poly6 {
        let mut out = Poly6::zero();
        for (e, c) in &self.terms {
            if e[j] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[j] -= 1;
            out.terms.insert(e2, c.scale(&Rational::from_int(e[j] as i64)));
        }
        out
    }

    /// x^j · p.
    pub fn mul_x(&self, j: usize) -> Poly6 {
        let mut out = Poly6::zero();
        for (e, c) in &self.terms {
            let mut e2 = *e;
            e2[j] += 1;
            out.terms.insert(e2, c.clone());
        }
        out
    }

    /// The raising operator −∂_j + 2x^j, the Gaussian-weighted adjoint of ∂_j.
    pub fn raise(&self, j: usize) -> Poly6 {
        let mut out = self.mul_x(j).scale(&Cx::from(2));
        out.add_scaled(&self.deriv(j), &Cx::int(-1, 0));
        out
    }

    pub fn laplacian(&self) -> Poly6 {
        let mut out = Poly6::zero();
        for j in 0..6 {
            out.add_scaled(&self.deriv(j).deriv(j), &Cx::ONE);
        }
        out
    }

    /// |x|².
    pub fn phi() -> Poly6 {
        let mut p = Poly6::zero();
        for j in 0..6 {
            let mut e = [0u8; 6];
            e[j] = 2;
            p.add_term(e, &Cx::ONE);
        }
        p
    }
}

impl fmt::Debug for Poly6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (j, &n) in e.iter().enumerate() {
                match n {
                    0 => {}
                    1 => write!(f, "·x{j}")?,
                    _ => write!(f, "·x{j}^{n}")?,
                }
            }
        }
        Ok(())
    }
}

/// Constant-coefficient first-order operator Σ_j c_j ∂_j.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField(pub [Cx; 6]);

impl VectorField {
    pub fn zero() -> Self {
        VectorField(core::array::from_fn(|_| Cx::ZERO))
    }

    pub fn apply(&self, p: &Poly6) -> Poly6 {
        let mut out = Poly6::zero();
        for (j, c) in self.0.iter().enumerate() {
            if !c.is_zero() {
                out.add_scaled(&p.deriv(j), c);
            }
        }
        out
    }

    /// The linear polynomial Σ_j c_j x^j obtained by the substitution ∂_j → x^j.
    pub fn as_linear_poly(&self) -> Poly6 {
        let mut out = Poly6::zero();
        for (j, c) in self.0.iter().enumerate() {
            out.add_scaled(&Poly6::x(j), c);
        }
        out
    }

    pub fn conj(&self) -> Self {
        VectorField(core::array::from_fn(|j| self.0[j].conj()))
    }

    pub fn neg(&self) -> Self {
        VectorField(core::array::from_fn(|j| -&self.0[j]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
}

/// Embedding coefficients: entry `[A][B]` of the 4×4 matrix of ℝ⁶ as a
/// list of `(j, coefficient)` pairs, upper triangle only.
fn upper_entry(a: usize, b: usize) -> [(usize, Cx); 2] {
    let i = Cx::I;
    let one = Cx::ONE;
    match (a, b) {
        (0, 1) => [(0, i), (5, one)],
        (0, 2) => [(3, one), (4, i)],
        (0, 3) => [(1, one), (2, i)],
        (1, 2) => [(1, one), (2, -i)],
        (1, 3) => [(3, -one), (4, i)],
        (2, 3) => [(0, -i), (5, one)],
        _ => unreachable!("upper triangle only"),
    }
}

/// Coefficients of the antisymmetric embedding ℝ⁶ → ∧²ℂ⁴ at `[A][B]`,
/// as a 6-vector (the same table gives ∇^{AB} with x^j ↦ ∂_j).
pub fn embedding(a: usize, b: usize) -> [Cx; 6] {
    let mut out: [Cx; 6] = core::array::from_fn(|_| Cx::ZERO);
    if a == b {
        return out;
    }
    let (lo, hi, sign) = if a < b { (a, b, 1) } else { (b, a, -1) };
    for (j, c) in upper_entry(lo, hi) {
        out[j] = if sign > 0 { c } else { -c };
    }
    out
}

/// ∇^{AB}, ∇_{AB} and z^{AB}.
#[derive(Clone, Debug)]
pub struct NablaTable {
    pub upper: [[VectorField; 4]; 4],
    pub lower: [[VectorField; 4]; 4],
    pub zmat: [[Poly6; 4]; 4],
}

impl NablaTable {
    pub fn new() -> Self {
        let upper: [[VectorField; 4]; 4] =
            core::array::from_fn(|a| core::array::from_fn(|b| VectorField(embedding(a, b))));
        let lower: [[VectorField; 4]; 4] = core::array::from_fn(|a| {
            core::array::from_fn(|b| {
                let mut acc: [Cx; 6] = core::array::from_fn(|_| Cx::ZERO);
                for c in 0..4 {
                    for d in 0..4 {
                        let e = epsilon(a as u8, b as u8, c as u8, d as u8);
                        if e == 0 {
                            continue;
                        }
                        for j in 0..6 {
                            acc[j] += &upper[c][d].0[j].scale(&Rational::new(e, 2));
                        }
                    }
                }
                VectorField(acc)
            })
        });
        let zmat = core::array::from_fn(|a| core::array::from_fn(|b| upper[a][b].as_linear_poly()));
        NablaTable { upper, lower, zmat }
    }

    pub fn nabla_upper(&self, a: usize, b: usize, p: &Poly6) -> Poly6 {
        self.upper[a][b].apply(p)
    }

    pub fn nabla_lower(&self, a: usize, b: usize, p: &Poly6) -> Poly6 {
        self.lower[a][b].apply(p)
    }

    /// Θ_{AB}p = −∇_{AB}p + (∇_{AB}φ)p, with ∇_{AB}φ = 2·conj(z^{AB}).
    pub fn theta(&self, a: usize, b: usize, p: &Poly6) -> Poly6 {
        let mut out = self.nabla_lower(a, b, p).neg();
        let w = self.zmat[a][b].conj().scale(&Cx::from(2));
        out.add_scaled(&w.mul(p), &Cx::ONE);
        out
    }

    /// [∇^{AB}, Θ_{CD}] applied to `p`.
    pub fn commutator(&self, a: usize, b: usize, c: usize, d: usize, p: &Poly6) -> Poly6 {
        let lhs = self.nabla_upper(a, b, &self.theta(c, d, p));
        let rhs = self.theta(c, d, &self.nabla_upper(a, b, p));
        lhs.sub(&rhs)
    }
}

impl Default for NablaTable {
    fn default() -> Self {
        Self::new()
    }
}

/// ∇^{AB}p for 0-based indices.
pub fn apply_nabla_upper(a: usize, b: usize, p: &Poly6) -> Poly6 {
    VectorField(embedding(a, b)).apply(p)
}

/// Θ_{AB}p for 0-based indices.
pub fn theta(a: usize, b: usize, p: &Poly6) -> Poly6 {
    NablaTable::new().theta(a, b, p)
}

/// (∇^{AB}Θ_{CD} − Θ_{CD}∇^{AB})(p).
pub fn commutator_check(a: usize, b: usize, c: usize, d: usize, p: &Poly6) -> Poly6 {
    NablaTable::new().commutator(a, b, c, d, p)
}

/// The value the commutator must take: 4(δ^A_Cδ^B_D − δ^A_Dδ^B_C).
pub fn commutator_constant(a: usize, b: usize, c: usize, d: usize) -> i64 {
    let dl = |x: usize, y: usize| (x == y) as i64;
    4 * (dl(a, c) * dl(b, d) - dl(a, d) * dl(b, c))
}

/// π^{−1/2}∫ x^n e^{−x²} dx: zero for odd n, (n−1)!!/2^{n/2} for even n.
pub fn moment(n: usize) -> Rational {
    if n % 2 == 1 {
        return Rational::ZERO;
    }
    let mut num = 1i64;
    let mut k = 1;
    while k < n {
        num *= k as i64;
        k += 2;
    }
    Rational::new(num, 1i64 << (n / 2))
}

fn parity_class(e: &Exponent) -> u8 {
    e.iter().enumerate().fold(0u8, |m, (j, &x)| m | ((x & 1) << j))
}

/// π^{−3}∫_{ℝ⁶} f·conj(h)·e^{−|x|²} dx.
pub fn gaussian_inner(f: &Poly6, h: &Poly6) -> Cx {
    if f.is_zero() || h.is_zero() {
        return Cx::ZERO;
    }
    // Only monomial pairs with matching parity in every coordinate survive.
    let mut by_class: BTreeMap<u8, Vec<(&Exponent, Cx)>> = BTreeMap::new();
    for (e, c) in h.terms() {
        by_class.entry(parity_class(e)).or_default().push((e, c.conj()));
    }
    let mut cache: BTreeMap<[u8; 6], Rational> = BTreeMap::new();
    let mut acc = Cx::ZERO;
    for (e1, c1) in f.terms() {
        let Some(list) = by_class.get(&parity_class(e1)) else { continue };
        for (e2, c2) in list {
            let mut sum = [0u8; 6];
            for j in 0..6 {
                sum[j] = e1[j] + e2[j];
            }
            let w = cache
                .entry(sum)
                .or_insert_with(|| sum.iter().fold(Rational::ONE, |acc, &n| &acc * &moment(n as usize)));
            acc += &(c1 * c2).scale(w);
        }
    }
    acc
}

pub fn gaussian_norm_sq(f: &Poly6) -> Rational {
    gaussian_inner(f, f).re
}

/// All exponent vectors of total degree ≤ `d`, sorted.
pub fn monomials_up_to(d: usize) -> Vec<Exponent> {
    let mut out = Vec::new();
    let mut e = [0u8; 6];
    fn rec(j: usize, left: usize, e: &mut Exponent, out: &mut Vec<Exponent>) {
        if j == 6 {
            out.push(*e);
            return;
        }
        for n in 0..=left {
            e[j] = n as u8;
            rec(j + 1, left - n, e, out);
        }
        e[j] = 0;
    }
    rec(0, d, &mut e, &mut out);
    out.sort();
    out
}
