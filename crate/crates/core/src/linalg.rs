//! Exact linear algebra over ℚ(i).
//!
//! Elimination runs fraction-free over the Gaussian integers: rows are
//! cleared of denominators once, after which every division is exact
//! (Bareiss). Large rank questions can also be answered modulo primes
//! `p ≡ 1 (mod 4)`, where `i` has a square root; such ranks are lower
//! bounds for the rank over ℚ(i).

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::scalar::{Cx, Rational};

/// Gaussian integer.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn one() -> Self {
        GaussInt { re: BigInt::one(), im: BigInt::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn mul(&self, o: &GaussInt) -> GaussInt {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussInt { re: &self.re * &o.re, im: BigInt::zero() };
        }
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn neg(&self) -> GaussInt {
        GaussInt { re: -&self.re, im: -&self.im }
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn div_exact(&self, d: &GaussInt) -> GaussInt {
        if d.im.is_zero() {
            let (qr, rr) = self.re.div_rem(&d.re);
            let (qi, ri) = self.im.div_rem(&d.re);
            assert!(rr.is_zero() && ri.is_zero(), "inexact Gaussian division");
            return GaussInt { re: qr, im: qi };
        }
        let n = &d.re * &d.re + &d.im * &d.im;
        let num = self.mul(&GaussInt { re: d.re.clone(), im: -&d.im });
        let (qr, rr) = num.re.div_rem(&n);
        let (qi, ri) = num.im.div_rem(&n);
        assert!(rr.is_zero() && ri.is_zero(), "inexact Gaussian division");
        GaussInt { re: qr, im: qi }
    }

    pub fn to_cx(&self) -> Cx {
        Cx::new(Rational::from(self.re.clone()), Rational::from(self.im.clone()))
    }
}

type Row = Vec<(usize, GaussInt)>;

fn row_get(row: &Row, col: usize) -> Option<&GaussInt> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|i| &row[i].1)
}

/// `(p·a − c·b) / prev` on sparse rows.
fn combine(a: &Row, p: &GaussInt, b: &Row, c: &GaussInt, prev: &GaussInt) -> Row {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    let (mut i, mut j) = (0, 0);
    let unit_prev = prev.re.is_one() && prev.im.is_zero();
    let fin = |v: GaussInt| if unit_prev { v } else { v.div_exact(prev) };
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cb = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        let (col, v) = if ca < cb {
            i += 1;
            (ca, a[i - 1].1.mul(p))
        } else if cb < ca {
            j += 1;
            (cb, b[j - 1].1.mul(c).neg())
        } else {
            i += 1;
            j += 1;
            (ca, a[i - 1].1.mul(p).sub(&b[j - 1].1.mul(c)))
        };
        if !v.is_zero() {
            out.push((col, fin(v)));
        }
    }
    out
}

fn clear_denominators(row: &[(usize, Cx)]) -> Row {
    let mut l = BigInt::one();
    for (_, v) in row {
        l = l.lcm(&v.denom_lcm());
    }
    let lr = Rational::from(l);
    let mut out: Row = row
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| {
            let s = v.scale(&lr);
            (*c, GaussInt { re: s.re.numer(), im: s.im.numer() })
        })
        .collect();
    out.sort_by_key(|e| e.0);
    out
}

/// Reduced row echelon form computed fraction-free over ℤ[i]. Every pivot
/// row ends with the same pivot value `d`.
#[derive(Clone, Debug)]
pub struct FractionFreeRref {
    ncols: usize,
    rows: Vec<Row>,
    pivot_cols: Vec<usize>,
    d: GaussInt,
}

impl FractionFreeRref {
    /// Rows are sparse `(column, value)` lists over ℚ(i).
    pub fn new(rows: Vec<Vec<(usize, Cx)>>, ncols: usize) -> Self {
        let mut work: Vec<Row> = rows.iter().map(|r| clear_denominators(r)).collect();
        work.retain(|r| !r.is_empty());
        let mut is_pivot = vec![false; work.len()];
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut prev = GaussInt::one();
        for col in 0..ncols {
            let pick = (0..work.len())
                .filter(|&i| !is_pivot[i] && row_get(&work[i], col).is_some())
                .min_by_key(|&i| work[i].len());
            let Some(r) = pick else { continue };
            let p = row_get(&work[r], col).unwrap().clone();
            let pivot_row = work[r].clone();
            let same_scale = p == prev;
            for i in 0..work.len() {
                if i == r {
                    continue;
                }
                match row_get(&work[i], col).cloned() {
                    Some(c) => work[i] = combine(&work[i], &p, &pivot_row, &c, &prev),
                    None if !same_scale => {
                        let scaled: Row = work[i]
                            .iter()
                            .map(|(j, v)| (*j, v.mul(&p).div_exact(&prev)))
                            .collect();
                        work[i] = scaled;
                    }
                    None => {}
                }
            }
            is_pivot[r] = true;
            pivots.push((col, r));
            prev = p;
        }
        let rows = pivots.iter().map(|&(_, r)| work[r].clone()).collect();
        FractionFreeRref { ncols, rows, pivot_cols: pivots.iter().map(|p| p.0).collect(), d: prev }
    }

    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    pub fn free_cols(&self) -> Vec<usize> {
        let mut is_p = vec![false; self.ncols];
        for &c in &self.pivot_cols {
            is_p[c] = true;
        }
        (0..self.ncols).filter(|&c| !is_p[c]).collect()
    }

    /// One kernel vector per free column `f`, normalized to 1 at `f`; sparse
    /// `(column, value)` pairs sorted by column.
    pub fn nullspace(&self) -> Vec<(usize, Vec<(usize, Cx)>)> {
        let d = self.d.to_cx();
        let mut out = Vec::new();
        for f in self.free_cols() {
            let mut v = vec![(f, Cx::ONE)];
            for (row, &pc) in self.rows.iter().zip(&self.pivot_cols) {
                if let Some(x) = row_get(row, f) {
                    v.push((pc, -(&x.to_cx() / &d)));
                }
            }
            v.sort_by_key(|e| e.0);
            out.push((f, v));
        }
        out
    }

    /// The kernel vector with prescribed values on the free columns
    /// (columns absent from `free_values` are zero).
    pub fn kernel_vector(&self, free_values: &[(usize, Cx)]) -> Vec<Cx> {
        let mut x = vec![Cx::ZERO; self.ncols];
        for (c, v) in free_values {
            x[*c] = v.clone();
        }
        let d = self.d.to_cx();
        for (row, &pc) in self.rows.iter().zip(&self.pivot_cols) {
            let mut acc = Cx::ZERO;
            for (j, v) in row {
                if *j != pc && !x[*j].is_zero() {
                    acc += &(&v.to_cx() * &x[*j]);
                }
            }
            x[pc] = -(&acc / &d);
        }
        x
    }
}

/// Exact rank of a dense matrix over ℚ(i).
pub fn exact_rank(rows: &[Vec<Cx>]) -> usize {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let sparse = rows
        .iter()
        .map(|r| r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect())
        .collect();
    FractionFreeRref::new(sparse, ncols).rank()
}

/// Dense matrix–vector product.
pub fn mat_vec(m: &[Vec<Cx>], x: &[Cx]) -> Vec<Cx> {
    m.iter()
        .map(|row| {
            let mut acc = Cx::ZERO;
            for (a, b) in row.iter().zip(x) {
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
            acc
        })
        .collect()
}

/// Dense matrix product.
pub fn mat_mul(a: &[Vec<Cx>], b: &[Vec<Cx>]) -> Vec<Vec<Cx>> {
    let n = b.first().map(|r| r.len()).unwrap_or(0);
    a.iter()
        .map(|row| {
            let mut out = vec![Cx::ZERO; n];
            for (k, a_ik) in row.iter().enumerate() {
                if a_ik.is_zero() {
                    continue;
                }
                for (j, b_kj) in b[k].iter().enumerate() {
                    if !b_kj.is_zero() {
                        out[j] += &(a_ik * b_kj);
                    }
                }
            }
            out
        })
        .collect()
}

/// A prime `p ≡ 1 (mod 4)` together with a square root of −1 modulo `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaussPrime {
    pub p: u64,
    pub sqrt_neg1: u64,
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes `p ≡ 1 (mod 4)` below 2⁶².
pub fn gauss_primes(count: usize) -> Vec<GaussPrime> {
    let mut out = Vec::new();
    let mut n = (1u64 << 62) - 3; // ≡ 1 mod 4
    while out.len() < count {
        if is_prime(n) {
            let g = (2..).find(|&g| pow_mod(g, (n - 1) / 2, n) == n - 1).unwrap();
            out.push(GaussPrime { p: n, sqrt_neg1: pow_mod(g, (n - 1) / 4, n) });
        }
        n -= 4;
    }
    out
}

impl GaussPrime {
    fn reduce_int(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = n.mod_floor(&p);
        r.to_u64().unwrap()
    }

    fn reduce_rational(&self, r: &Rational) -> Option<u64> {
        if let Some((n, d)) = r.as_small() {
            let nm = (n as i128).rem_euclid(self.p as i128) as u64;
            let dm = (d as u64) % self.p;
            if dm == 0 {
                return None;
            }
            return Some(mul_mod(nm, pow_mod(dm, self.p - 2, self.p), self.p));
        }
        let dm = self.reduce_int(&r.denom());
        if dm == 0 {
            return None;
        }
        let nm = self.reduce_int(&r.numer());
        Some(mul_mod(nm, pow_mod(dm, self.p - 2, self.p), self.p))
    }

    /// Image of `re + i·im` under `i ↦ sqrt_neg1`; `None` if a denominator
    /// vanishes modulo `p`.
    pub fn reduce(&self, z: &Cx) -> Option<u64> {
        let re = self.reduce_rational(&z.re)?;
        let im = self.reduce_rational(&z.im)?;
        Some((re + mul_mod(im, self.sqrt_neg1, self.p)) % self.p)
    }

    /// Rank modulo `p` of a dense matrix; `None` if some entry has a
    /// denominator divisible by `p`.
    pub fn rank(&self, rows: &[Vec<Cx>]) -> Option<usize> {
        let p = self.p;
        let mut m: Vec<Vec<u64>> = Vec::with_capacity(rows.len());
        for r in rows {
            let mut out = Vec::with_capacity(r.len());
            for z in r {
                out.push(if z.is_zero() { 0 } else { self.reduce(z)? });
            }
            m.push(out);
        }
        let ncols = m.first().map(|r| r.len()).unwrap_or(0);
        let mut rank = 0;
        for col in 0..ncols {
            let Some(piv) = (rank..m.len()).find(|&i| m[i][col] != 0) else { continue };
            m.swap(rank, piv);
            let inv = pow_mod(m[rank][col], p - 2, p);
            for j in col..ncols {
                m[rank][j] = mul_mod(m[rank][j], inv, p);
            }
            let pivot_row = m[rank].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == rank || row[col] == 0 {
                    continue;
                }
                let f = row[col];
                for j in col..ncols {
                    if pivot_row[j] != 0 {
                        row[j] = (row[j] + p - mul_mod(f, pivot_row[j], p)) % p;
                    }
                }
            }
            rank += 1;
        }
        Some(rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: i64, im: i64) -> Cx {
        Cx::int(re, im)
    }

    #[test]
    fn rank_of_small_matrices() {
        let m = vec![vec![cx(1, 0), cx(2, 0)], vec![cx(2, 0), cx(4, 0)]];
        assert_eq!(exact_rank(&m), 1);
        let m = vec![vec![cx(1, 1), cx(2, 0)], vec![cx(1, -1), cx(0, 2)]];
        // det = (1+i)(2i) - 2(1-i) = 2i - 2 - 2 + 2i = -4 + 4i
        assert_eq!(exact_rank(&m), 2);
        let m = vec![vec![cx(1, 0), cx(0, 1)], vec![cx(0, 1), cx(-1, 0)]];
        assert_eq!(exact_rank(&m), 1);
        let h = vec![vec![Cx::ratio(1, 2), Cx::ratio(1, 3)], vec![Cx::ratio(1, 3), Cx::ratio(1, 4)]];
        assert_eq!(exact_rank(&h), 2);
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let rows = vec![
            vec![cx(1, 0), cx(2, 1), cx(0, 0), cx(3, 0)],
            vec![cx(0, 2), cx(1, 0), cx(1, 1), cx(0, 0)],
            vec![cx(1, 2), cx(3, 1), cx(1, 1), cx(3, 0)],
        ];
        let sparse: Vec<Vec<(usize, Cx)>> =
            rows.iter().map(|r| r.iter().cloned().enumerate().filter(|(_, v)| !v.is_zero()).collect()).collect();
        let rref = FractionFreeRref::new(sparse, 4);
        assert_eq!(rref.rank(), 2);
        let ns = rref.nullspace();
        assert_eq!(ns.len(), 2);
        for (_, v) in &ns {
            let mut dense = vec![Cx::ZERO; 4];
            for (j, x) in v {
                dense[*j] = x.clone();
            }
            assert!(mat_vec(&rows, &dense).iter().all(|z| z.is_zero()));
        }
        let free = rref.free_cols();
        let kv = rref.kernel_vector(&[(free[0], cx(2, -1)), (free[1], Cx::ratio(1, 3))]);
        assert!(mat_vec(&rows, &kv).iter().all(|z| z.is_zero()));
    }

    #[test]
    fn primes_have_square_roots_of_minus_one() {
        for gp in gauss_primes(3) {
            assert_eq!(gp.p % 4, 1);
            assert!(is_prime(gp.p));
            assert_eq!(mul_mod(gp.sqrt_neg1, gp.sqrt_neg1, gp.p), gp.p - 1);
        }
        assert!(!is_prime(561));
        assert!(is_prime(1_000_000_007));
    }

    #[test]
    fn modular_rank_agrees_on_small_cases() {
        let gp = gauss_primes(1)[0];
        let m = vec![vec![cx(1, 0), cx(0, 1)], vec![cx(0, 1), cx(-1, 0)]];
        assert_eq!(gp.rank(&m), Some(1));
        let h = vec![vec![Cx::ratio(1, 2), Cx::ratio(-1, 3)], vec![Cx::ratio(1, 3), Cx::ratio(1, 4)]];
        assert_eq!(gp.rank(&h), Some(exact_rank(&h)));
        assert_eq!(gp.reduce(&Cx::ratio(-1, 1)), Some(gp.p - 1));
    }
}
