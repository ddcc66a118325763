//! Dense univariate polynomials over Q, coefficients low to high.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{gcd_all, lcm_all, rat_to_f64};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| rat(x)).collect())
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        Poly::new(c.iter().map(|x| BigRational::from_integer(x.clone())).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn x() -> Self {
        Poly::from_ints(&[0, 1])
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    /// x^k
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + rat_to_f64(c))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = d.degree();
        if self.is_zero() || self.degree() < dd {
            return (Poly::zero(), self.clone());
        }
        let lead_inv = d.lead().recip();
        let mut quot = vec![BigRational::zero(); self.degree() - dd + 1];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> Poly {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == 0
    }

    /// p(q(x))
    pub fn compose(&self, q: &Poly) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * q) + &Poly::constant(c.clone()))
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// x^deg * p(1/x)
    pub fn reversed(&self) -> Poly {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly::new(c)
    }

    /// True when x^d p(1/x) = +-p(x) with nonzero constant term.
    pub fn is_reciprocal(&self) -> bool {
        if self.is_zero() || self.coeff(0).is_zero() {
            return false;
        }
        let r = self.reversed();
        r == *self || r == -self.clone()
    }

    /// Resultant over Q via the Euclidean algorithm.
    pub fn resultant(&self, other: &Poly) -> BigRational {
        if self.is_zero() || other.is_zero() {
            return BigRational::zero();
        }
        let mut f = self.clone();
        let mut g = other.clone();
        let mut acc = BigRational::one();
        loop {
            let df = f.degree();
            let dg = g.degree();
            if dg == 0 {
                return acc * num_traits::pow(g.lead(), df);
            }
            let r = f.rem(&g);
            if r.is_zero() {
                return BigRational::zero();
            }
            if (df * dg) % 2 == 1 {
                acc = -acc;
            }
            acc *= num_traits::pow(g.lead(), df - r.degree());
            f = g;
            g = r;
        }
    }

    /// Discriminant (-1)^{n(n-1)/2} Res(f, f') / lc(f).
    pub fn discriminant(&self) -> BigRational {
        let n = self.degree();
        if n == 0 {
            return BigRational::one();
        }
        let r = self.resultant(&self.derivative()) / self.lead();
        if (n * (n - 1) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    /// Content-free integer polynomial with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let den = lcm_all(self.coeffs.iter().map(|c| c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let g = gcd_all(ints.iter());
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }

    pub fn is_integral_monic(&self) -> bool {
        self.lead().is_one() && self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Inverse of `self` modulo `m` when the two are coprime.
    pub fn inverse_mod(&self, m: &Poly) -> Option<Poly> {
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let t = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        if r0.degree() != 0 {
            return None;
        }
        Some(t0.scale(&r0.lead().recip()).rem(m))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rat_to_f64).collect()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Characteristic polynomial det(xI - M) of a rational matrix (Faddeev-LeVerrier).
pub fn charpoly(m: &[Vec<BigRational>]) -> Poly {
    let n = m.len();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut mk: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // mk <- M * (mk + c_{n-k+1} I)
        let mut tmp = mk.clone();
        for (i, row) in tmp.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        let mut prod = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for l in 0..n {
                if m[i][l].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if !tmp[l][j].is_zero() {
                        prod[i][j] += &m[i][l] * &tmp[l][j];
                    }
                }
            }
        }
        let trace: BigRational = (0..n).map(|i| prod[i][i].clone()).sum();
        coeffs[n - k] = -trace / rat(k as i64);
        mk = prod;
    }
    Poly::new(coeffs)
}

/// Content of an integer coefficient vector.
pub fn int_content(c: &[BigInt]) -> BigInt {
    gcd_all(c.iter())
}

/// Exact division test over Z[x]: returns the quotient when `d` divides `f`.
pub fn int_divides(f: &[BigInt], d: &[BigInt]) -> Option<Vec<BigInt>> {
    let fp = Poly::from_bigints(f);
    let dp = Poly::from_bigints(d);
    let (q, r) = fp.div_rem(&dp);
    if !r.is_zero() || !q.coeffs().iter().all(|c| c.is_integer()) {
        return None;
    }
    Some(q.coeffs().iter().map(|c| c.to_integer()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let p = Poly::from_ints(&[-1, -1, 1]);
        assert_eq!(p.to_string(), "x^2 - x - 1");
        let q = &p * &p;
        assert_eq!(q.div_rem(&p).0, p);
        assert!(q.div_rem(&p).1.is_zero());
        assert_eq!(q.squarefree_part(), p);
    }

    #[test]
    fn discriminants() {
        assert_eq!(Poly::from_ints(&[1, 0, 1]).discriminant(), rat(-4));
        assert_eq!(Poly::from_ints(&[-1, -1, 1]).discriminant(), rat(5));
        assert_eq!(Poly::from_ints(&[1, -3, 1]).discriminant(), rat(5));
        // x^3 - 2: -27 * 4 = -108
        assert_eq!(Poly::from_ints(&[-2, 0, 0, 1]).discriminant(), rat(-108));
    }

    #[test]
    fn resultant_matches_root_products() {
        // Res(x^2+1, x-2) = 2^2 + 1
        let r = Poly::from_ints(&[1, 0, 1]).resultant(&Poly::from_ints(&[-2, 1]));
        assert_eq!(r, rat(5));
    }

    #[test]
    fn charpoly_companion() {
        // companion of x^2 - 3x + 1
        let m = vec![vec![rat(0), rat(-1)], vec![rat(1), rat(3)]];
        assert_eq!(charpoly(&m), Poly::from_ints(&[1, -3, 1]));
    }

    #[test]
    fn reciprocal() {
        assert!(Poly::from_ints(&[1, -3, 1]).is_reciprocal());
        assert!(Poly::from_ints(&[1, 0, 1]).is_reciprocal());
        assert!(!Poly::from_ints(&[-1, -1, 1]).is_reciprocal());
    }

    #[test]
    fn primitive_form() {
        let p = Poly::new(vec![BigRational::new(1.into(), 2.into()), rat(0), rat(-3)]);
        assert_eq!(p.primitive_integer(), vec![BigInt::from(-1), BigInt::from(0), BigInt::from(6)]);
    }
}
