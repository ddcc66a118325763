//! Certified isolation of the complex roots of a squarefree rational polynomial.
//!
//! Approximations come from Aberth iteration (first in f64, then in
//! fixed-point big-integer arithmetic at the working precision). They are
//! certified with the Weierstrass inclusion theorem: with
//! `W_i = p(z_i) / (lc * prod_{j != i} (z_i - z_j))`, the discs
//! `D(z_i, n |W_i|)` cover all roots and every connected component holding
//! `m` discs holds exactly `m` roots. Pairwise disjoint discs therefore
//! isolate one root each. `p(z_i)` and the products are computed exactly.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Upper limit on the working precision.
pub const MAX_BITS: u32 = 480;
/// Lower limit on the working precision.
pub const MIN_BITS: u32 = 64;

/// Exact Gaussian dyadic number `(re + i im) / 2^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussDyadic {
    pub re: BigInt,
    pub im: BigInt,
    pub exp: u32,
}

impl GaussDyadic {
    pub fn zero() -> Self {
        GaussDyadic { re: BigInt::zero(), im: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(n: &BigInt) -> Self {
        GaussDyadic { re: n.clone(), im: BigInt::zero(), exp: 0 }
    }

    fn align(&self, exp: u32) -> (BigInt, BigInt) {
        let s = exp - self.exp;
        (&self.re << s, &self.im << s)
    }

    pub fn add(&self, o: &GaussDyadic) -> GaussDyadic {
        let e = self.exp.max(o.exp);
        let (a, b) = self.align(e);
        let (c, d) = o.align(e);
        GaussDyadic { re: a + c, im: b + d, exp: e }
    }

    pub fn sub(&self, o: &GaussDyadic) -> GaussDyadic {
        let e = self.exp.max(o.exp);
        let (a, b) = self.align(e);
        let (c, d) = o.align(e);
        GaussDyadic { re: a - c, im: b - d, exp: e }
    }

    pub fn mul(&self, o: &GaussDyadic) -> GaussDyadic {
        GaussDyadic {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
            exp: self.exp + o.exp,
        }
    }

    pub fn conj(&self) -> GaussDyadic {
        GaussDyadic { re: self.re.clone(), im: -&self.im, exp: self.exp }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// log2 of |z|^2, `-inf` for zero.
    pub fn log2_norm_sqr(&self) -> f64 {
        let n = &self.re * &self.re + &self.im * &self.im;
        if n.is_zero() {
            return f64::NEG_INFINITY;
        }
        log2_int(&n) - 2.0 * self.exp as f64
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(dyadic_to_f64(&self.re, self.exp), dyadic_to_f64(&self.im, self.exp))
    }

    /// Drop low bits so that at most `bits` fractional bits remain (truncation).
    pub fn truncate(&self, bits: u32) -> GaussDyadic {
        if self.exp <= bits {
            return self.clone();
        }
        let s = self.exp - bits;
        GaussDyadic { re: &self.re >> s, im: &self.im >> s, exp: bits }
    }
}

/// log2 |n| for a nonzero integer.
pub fn log2_int(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    (n.abs() >> shift).to_f64().unwrap().log2() + shift as f64
}

pub fn dyadic_to_f64(m: &BigInt, exp: u32) -> f64 {
    if m.is_zero() {
        return 0.0;
    }
    let bits = m.bits();
    if bits <= 1000 && exp <= 1000 {
        return m.to_f64().unwrap() * 2f64.powi(-(exp as i32));
    }
    let shift = bits.saturating_sub(60);
    let top = (m >> shift).to_f64().unwrap();
    top * 2f64.powf(shift as f64 - exp as f64)
}

/// A certified root: the disc with the given centre and radius holds exactly one root.
#[derive(Clone, Debug)]
pub struct RootBall {
    pub center: GaussDyadic,
    pub radius: f64,
}

impl RootBall {
    pub fn center_c64(&self) -> Complex64 {
        self.center.to_c64()
    }
}

/// All roots of a squarefree polynomial, isolated and paired under conjugation.
#[derive(Clone, Debug)]
pub struct RootSet {
    poly: Poly,
    int_coeffs: Vec<BigInt>,
    balls: Vec<RootBall>,
    conj: Vec<usize>,
    bits: u32,
}

fn c_abs(z: Complex64) -> f64 {
    z.norm()
}

/// f64 Aberth iteration; returns approximations (not certified).
fn aberth_f64(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    // Fujiwara-type radius for the starting circle.
    let mut radius: f64 = 0.0;
    for (k, c) in monic.iter().enumerate().take(n) {
        radius = radius.max(2.0 * c.abs().powf(1.0 / (n - k) as f64));
    }
    let radius = radius.max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    let deriv: Vec<f64> = (1..=n).map(|k| monic[k] * k as f64).collect();
    let eval = |c: &[f64], x: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |a, &b| a * x + b);
    for _ in 0..2000 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let p = eval(&monic, z[i]);
            let dp = eval(&deriv, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

/// Fixed-point complex number with `s` fractional bits.
#[derive(Clone, Debug)]
struct Fx {
    re: BigInt,
    im: BigInt,
}

impl Fx {
    fn from_c64(z: Complex64, s: u32) -> Fx {
        let scale = 2f64.powi(52);
        let to = |x: f64| -> BigInt {
            let m = BigInt::from((x * scale).round() as i128);
            if s >= 52 {
                m << (s - 52)
            } else {
                m >> (52 - s)
            }
        };
        Fx { re: to(z.re), im: to(z.im) }
    }

    fn mul(&self, o: &Fx, s: u32) -> Fx {
        Fx {
            re: (&self.re * &o.re - &self.im * &o.im) >> s,
            im: (&self.re * &o.im + &self.im * &o.re) >> s,
        }
    }

    fn div(&self, o: &Fx, s: u32) -> Option<Fx> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        let nr = &self.re * &o.re + &self.im * &o.im;
        let ni = &self.im * &o.re - &self.re * &o.im;
        Some(Fx { re: (nr << s) / &den, im: (ni << s) / &den })
    }

    fn sub(&self, o: &Fx) -> Fx {
        Fx { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn add(&self, o: &Fx) -> Fx {
        Fx { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn one(s: u32) -> Fx {
        Fx { re: BigInt::one() << s, im: BigInt::zero() }
    }

    fn magnitude_bits(&self) -> u64 {
        self.re.bits().max(self.im.bits())
    }
}

fn horner_fx(coeffs: &[BigInt], z: &Fx, s: u32) -> Fx {
    let mut acc = Fx { re: BigInt::zero(), im: BigInt::zero() };
    for c in coeffs.iter().rev() {
        acc = acc.mul(z, s);
        acc.re += c << s;
    }
    acc
}

/// Aberth refinement in fixed point.
fn aberth_fixed(coeffs: &[BigInt], start: &[Complex64], s: u32) -> Vec<Fx> {
    let n = start.len();
    let deriv: Vec<BigInt> = (1..coeffs.len()).map(|k| &coeffs[k] * BigInt::from(k)).collect();
    let mut z: Vec<Fx> = start.iter().map(|&c| Fx::from_c64(c, s)).collect();
    let tol_bits = 8u64;
    for _ in 0..200 {
        let mut max_bits = 0u64;
        for i in 0..n {
            let p = horner_fx(coeffs, &z[i], s);
            if p.re.is_zero() && p.im.is_zero() {
                continue;
            }
            let dp = horner_fx(&deriv, &z[i], s);
            let Some(ratio) = p.div(&dp, s) else { continue };
            let mut sum = Fx { re: BigInt::zero(), im: BigInt::zero() };
            for j in 0..n {
                if j != i {
                    if let Some(inv) = Fx::one(s).div(&z[i].sub(&z[j]), s) {
                        sum = sum.add(&inv);
                    }
                }
            }
            let den = Fx::one(s).sub(&ratio.mul(&sum, s));
            let Some(step) = ratio.div(&den, s) else { continue };
            max_bits = max_bits.max(step.magnitude_bits());
            z[i] = z[i].sub(&step);
        }
        if max_bits <= tol_bits {
            break;
        }
    }
    z
}

impl RootSet {
    /// Isolate all roots of `p` (squarefree, degree >= 1) at `bits` of precision.
    pub fn isolate(p: &Poly, bits: u32) -> Result<RootSet> {
        if p.degree() == 0 || p.is_zero() {
            return Err(Error::param("root isolation needs degree >= 1"));
        }
        if !p.is_squarefree() {
            return Err(Error::param(format!("polynomial {p} is not squarefree")));
        }
        let bits = bits.clamp(MIN_BITS, MAX_BITS);
        let int_coeffs = p.primitive_integer();
        let mut attempt_bits = bits;
        loop {
            match Self::try_isolate(p, &int_coeffs, attempt_bits) {
                Ok(rs) => return Ok(rs),
                Err(e) => {
                    if attempt_bits >= MAX_BITS {
                        return Err(e);
                    }
                    attempt_bits = (attempt_bits * 2).min(MAX_BITS);
                }
            }
        }
    }

    fn try_isolate(p: &Poly, int_coeffs: &[BigInt], bits: u32) -> Result<RootSet> {
        let n = p.degree();
        let f64_coeffs: Vec<f64> = int_coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::MAX)).collect();
        let approx = if n == 1 {
            vec![Complex64::new(-f64_coeffs[0] / f64_coeffs[1], 0.0)]
        } else {
            aberth_f64(&f64_coeffs)
        };
        let guard = 32;
        let s = bits + guard;
        let fixed = aberth_fixed(int_coeffs, &approx, s);
        let centers: Vec<GaussDyadic> = fixed
            .into_iter()
            .map(|z| GaussDyadic { re: z.re, im: z.im, exp: s }.truncate(bits))
            .collect();
        let radii = certify(int_coeffs, &centers).map_err(|reason| Error::Precision { bits, reason })?;
        let mut balls: Vec<RootBall> = centers
            .into_iter()
            .zip(radii)
            .map(|(center, radius)| RootBall { center, radius })
            .collect();
        // Conjugate partners.
        let conj = pair_conjugates(&balls).ok_or_else(|| Error::Precision {
            bits,
            reason: "conjugate pairing ambiguous".into(),
        })?;
        // Canonical order: real roots ascending, then complex by (re, im).
        let is_real: Vec<bool> = (0..n).map(|i| conj[i] == i).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            let za = balls[a].center_c64();
            let zb = balls[b].center_c64();
            is_real[b]
                .cmp(&is_real[a])
                .then(za.re.partial_cmp(&zb.re).unwrap())
                .then(za.im.partial_cmp(&zb.im).unwrap())
        });
        let mut pos = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let conj: Vec<usize> = order.iter().map(|&old| pos[conj[old]]).collect();
        balls = order.iter().map(|&old| balls[old].clone()).collect();
        Ok(RootSet { poly: p.clone(), int_coeffs: int_coeffs.to_vec(), balls, conj, bits })
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn int_coeffs(&self) -> &[BigInt] {
        &self.int_coeffs
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn ball(&self, i: usize) -> &RootBall {
        &self.balls[i]
    }

    pub fn balls(&self) -> &[RootBall] {
        &self.balls
    }

    pub fn approx(&self, i: usize) -> Complex64 {
        self.balls[i].center_c64()
    }

    pub fn approximations(&self) -> Vec<Complex64> {
        self.balls.iter().map(RootBall::center_c64).collect()
    }

    /// Index of the complex-conjugate root.
    pub fn conjugate_of(&self, i: usize) -> usize {
        self.conj[i]
    }

    pub fn is_real(&self, i: usize) -> bool {
        self.conj[i] == i
    }

    pub fn real_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_real(i)).collect()
    }

    /// Non-real roots with positive imaginary part, one per conjugate pair.
    pub fn upper_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| !self.is_real(i) && self.approx(i).im > 0.0)
            .collect()
    }

    /// The unique root whose disc meets the disc `D(z, r)`, if unique.
    pub fn locate(&self, z: Complex64, r: f64) -> Option<usize> {
        let hits: Vec<usize> = (0..self.len())
            .filter(|&i| c_abs(self.approx(i) - z) <= (r + self.balls[i].radius) * (1.0 + 1e-12) + 1e-300)
            .collect();
        (hits.len() == 1).then(|| hits[0])
    }

    /// Decide |root_i| against 1. `Some(Ordering)` when certified.
    ///
    /// Unit modulus is decided exactly: for an irreducible non-reciprocal
    /// polynomial no root lies on the unit circle; otherwise |a| = 1 holds iff
    /// 1/a and conj(a) are the same isolated root.
    pub fn compare_modulus_one(&self, i: usize, irreducible: bool) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering;
        let z = self.approx(i);
        let r = self.balls[i].radius;
        let m = z.norm();
        let slack = m * 4e-16;
        if m - r - slack > 1.0 {
            return Some(Ordering::Greater);
        }
        if m + r + slack < 1.0 {
            return Some(Ordering::Less);
        }
        if irreducible && !self.poly.is_reciprocal() {
            return None;
        }
        if self.poly.is_reciprocal() && m > r {
            let inv = z.inv();
            let inv_r = r / (m * (m - r)) + inv.norm() * 4e-16;
            let recip = self.locate(inv, inv_r)?;
            return if recip == self.conj[i] {
                Some(Ordering::Equal)
            } else {
                None
            };
        }
        None
    }
}

/// Radii of the Weierstrass inclusion discs; fails unless they are pairwise disjoint.
fn certify(coeffs: &[BigInt], centers: &[GaussDyadic]) -> std::result::Result<Vec<f64>, String> {
    let n = centers.len();
    let lead = coeffs.last().unwrap();
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let mut p = GaussDyadic::zero();
        for c in coeffs.iter().rev() {
            p = p.mul(&centers[i]).add(&GaussDyadic::from_int(c));
        }
        if p.is_zero() {
            radii.push(0.0);
            continue;
        }
        let mut q = GaussDyadic::from_int(lead);
        for j in 0..n {
            if j != i {
                q = q.mul(&centers[i].sub(&centers[j]));
            }
        }
        if q.is_zero() {
            return Err("coincident approximations".into());
        }
        let log2_w = 0.5 * (p.log2_norm_sqr() - q.log2_norm_sqr());
        let r = n as f64 * 2f64.powf(log2_w) * (1.0 + 1e-9);
        radii.push(r);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = centers[i].sub(&centers[j]);
            let dist = 2f64.powf(0.5 * d.log2_norm_sqr());
            if dist * (1.0 - 1e-9) <= radii[i] + radii[j] {
                return Err(format!("discs {i} and {j} overlap"));
            }
        }
    }
    Ok(radii)
}

fn pair_conjugates(balls: &[RootBall]) -> Option<Vec<usize>> {
    let n = balls.len();
    let mut conj = vec![usize::MAX; n];
    for i in 0..n {
        let zc = balls[i].center_c64().conj();
        let hits: Vec<usize> = (0..n)
            .filter(|&j| {
                let zj = balls[j].center_c64();
                (zc - zj).norm() <= (balls[i].radius + balls[j].radius) * (1.0 + 1e-9) + 4e-16 * zj.norm()
            })
            .collect();
        if hits.len() != 1 {
            return None;
        }
        conj[i] = hits[0];
    }
    (0..n).all(|i| conj[conj[i]] == i).then_some(conj)
}

/// Evaluate a rational polynomial at a certified root; returns a centre and an error radius.
pub fn eval_at_root(q: &Poly, ball: &RootBall) -> (Complex64, f64) {
    if q.is_zero() {
        return (Complex64::new(0.0, 0.0), 0.0);
    }
    let den = crate::arith::lcm_all(q.coeffs().iter().map(|c| c.denom()));
    let ints: Vec<BigInt> = q
        .coeffs()
        .iter()
        .map(|c| (c * num_rational::BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let mut acc = GaussDyadic::zero();
    for c in ints.iter().rev() {
        acc = acc.mul(&ball.center).add(&GaussDyadic::from_int(c));
    }
    let den_f = crate::arith::ln_abs_int(&den).exp();
    let center = acc.to_c64() / den_f;
    // |q(z) - q(c)| <= sum |q_k| k (|c| + r)^(k-1) r
    let m = ball.center_c64().norm();
    let r = ball.radius;
    let mut bound = 0.0;
    let mut pow = 1.0;
    for (k, c) in q.coeffs().iter().enumerate().skip(1) {
        bound += crate::arith::rat_to_f64(c).abs() * k as f64 * pow * r;
        pow *= m + r;
    }
    let rad = bound * (1.0 + 1e-9) + center.norm() * 4e-16;
    (center, rad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ratio_roots() {
        let p = Poly::from_ints(&[-1, -1, 1]);
        let rs = RootSet::isolate(&p, 192).unwrap();
        assert_eq!(rs.real_indices(), vec![0, 1]);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((rs.approx(1).re - phi).abs() < 1e-15);
        assert!(rs.ball(1).radius < 1e-50);
    }

    #[test]
    fn gaussian_roots_pair() {
        let p = Poly::from_ints(&[1, 0, 1]);
        let rs = RootSet::isolate(&p, 192).unwrap();
        assert!(rs.real_indices().is_empty());
        assert_eq!(rs.upper_indices().len(), 1);
        let i = rs.upper_indices()[0];
        assert_eq!(rs.conjugate_of(rs.conjugate_of(i)), i);
        assert_eq!(rs.compare_modulus_one(i, true), Some(std::cmp::Ordering::Equal));
    }

    #[test]
    fn higher_degree_and_close_roots() {
        // (x^2 - 2)(x^2 - 2.0001) scaled: 10000x^4 - 40001x^2 + 40002
        let p = Poly::from_ints(&[40002, 0, -40001, 0, 10000]);
        let rs = RootSet::isolate(&p, 192).unwrap();
        assert_eq!(rs.real_indices().len(), 4);
        // Cyclotomic-like x^4 + x^3 + x^2 + x + 1: all on unit circle.
        let c5 = Poly::from_ints(&[1, 1, 1, 1, 1]);
        let rs = RootSet::isolate(&c5, 128).unwrap();
        for i in 0..4 {
            assert_eq!(rs.compare_modulus_one(i, true), Some(std::cmp::Ordering::Equal));
        }
    }

    #[test]
    fn evaluation_ball() {
        let p = Poly::from_ints(&[-2, 0, 1]);
        let rs = RootSet::isolate(&p, 192).unwrap();
        let (v, r) = eval_at_root(&Poly::from_ints(&[0, 0, 1]), rs.ball(1));
        assert!((v.re - 2.0).abs() <= r + 1e-15);
    }

    #[test]
    fn rejects_non_squarefree() {
        assert!(RootSet::isolate(&Poly::from_ints(&[1, 2, 1]), 128).is_err());
    }
}
