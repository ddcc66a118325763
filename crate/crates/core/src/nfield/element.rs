use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::NumberField;
use crate::error::{Error, Result};
use crate::poly::{charpoly, Poly};
use crate::roots::eval_at_root;

/// Exact element of K in the power basis 1, theta, ..., theta^(d-1).
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<NumberField>,
    c: Vec<BigRational>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && (Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field)
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = Poly::new(self.c.clone()).to_string();
        write!(f, "{}", s.replace('x', "t"))
    }
}

impl FieldElement {
    pub fn new(field: &Arc<NumberField>, mut coeffs: Vec<BigRational>) -> Result<Self> {
        let d = field.degree();
        if coeffs.len() > d {
            if coeffs[d..].iter().any(|c| !c.is_zero()) {
                return Err(Error::param(format!("element has {} coordinates, field degree is {d}", coeffs.len())));
            }
            coeffs.truncate(d);
        }
        coeffs.resize(d, BigRational::zero());
        Ok(FieldElement { field: field.clone(), c: coeffs })
    }

    /// Element from a polynomial in theta of any degree (reduced mod the minpoly).
    pub fn from_poly(field: &Arc<NumberField>, p: &Poly) -> Self {
        let r = p.rem(field.minpoly());
        let mut c = r.coeffs().to_vec();
        c.resize(field.degree(), BigRational::zero());
        FieldElement { field: field.clone(), c }
    }

    pub fn from_rational(field: &Arc<NumberField>, q: BigRational) -> Self {
        let mut c = vec![BigRational::zero(); field.degree()];
        c[0] = q;
        FieldElement { field: field.clone(), c }
    }

    pub fn from_int(field: &Arc<NumberField>, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 1)
    }

    /// The generator theta (for Q this is the rational root of the minpoly).
    pub fn theta(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, &Poly::x())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn as_poly(&self) -> Poly {
        Poly::new(self.c.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// `Some(q)` when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.c[1..].iter().all(Zero::is_zero).then(|| self.c[0].clone())
    }

    fn check(&self, other: &FieldElement) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field,
            "arithmetic between elements of different fields"
        );
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        FieldElement { field: self.field.clone(), c: self.c.iter().map(|x| x * q).collect() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::param("inverse of zero"));
        }
        let p = self.as_poly();
        let inv = p
            .inverse_mod(self.field.minpoly())
            .ok_or_else(|| Error::param("element not invertible (minpoly reducible?)"))?;
        Ok(Self::from_poly(&self.field, &inv))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }

    /// Matrix of multiplication by self on the power basis (column j = self * theta^j).
    pub fn mult_matrix(&self) -> Vec<Vec<BigRational>> {
        let d = self.field.degree();
        let mut m = vec![vec![BigRational::zero(); d]; d];
        let mut col = self.clone();
        let theta = Self::theta(&self.field);
        for j in 0..d {
            for i in 0..d {
                m[i][j] = col.c[i].clone();
            }
            col = &col * &theta;
        }
        m
    }

    /// Characteristic polynomial over Q of multiplication by self.
    pub fn charpoly(&self) -> Poly {
        charpoly(&self.mult_matrix())
    }

    /// Minimal polynomial over Q (monic).
    pub fn minpoly(&self) -> Poly {
        self.charpoly().squarefree_part().monic()
    }

    /// Degree of Q(self) over Q.
    pub fn degree_over_q(&self) -> usize {
        self.minpoly().degree()
    }

    pub fn norm(&self) -> BigRational {
        if self.field.degree() == 1 {
            return self.c[0].clone();
        }
        self.field.minpoly().resultant(&self.as_poly())
    }

    pub fn trace(&self) -> BigRational {
        let m = self.mult_matrix();
        (0..m.len()).map(|i| m[i][i].clone()).sum()
    }

    /// Image under the embedding given by root `root` of the minpoly, with an error radius.
    pub fn embed(&self, root: usize) -> (Complex64, f64) {
        eval_at_root(&self.as_poly(), self.field.roots().ball(root))
    }

    pub fn embed_c64(&self, root: usize) -> Complex64 {
        self.embed(root).0
    }

    /// Coordinates (A, B) with self = A + B omega in the integral basis of a quadratic field.
    pub fn omega_coords(&self) -> Option<(BigRational, BigRational)> {
        let q = self.field.quadratic()?;
        let two = BigRational::from_integer(BigInt::from(2));
        let b = BigRational::from_integer(q.b.clone());
        let s = BigRational::from_integer(q.s.clone());
        // theta = (-b + s sqrt D) / 2
        let a0 = &self.c[0] - &self.c[1] * &b / &two;
        let b0 = &self.c[1] * &s / &two;
        if q.half_omega {
            Some((a0 - &b0, b0 * two))
        } else {
            Some((a0, b0))
        }
    }

    /// Exact square root in K when it exists. Degree <= 2 is decided exactly;
    /// higher degree tries the candidates read off from the embeddings.
    pub fn sqrt(&self) -> Result<Option<Self>> {
        if self.is_zero() {
            return Ok(Some(self.clone()));
        }
        if let Some(q) = self.as_rational() {
            if let Some(r) = crate::arith::rat_sqrt_exact(&q) {
                return Ok(Some(Self::from_rational(&self.field, r)));
            }
            if self.field.degree() == 1 {
                return Ok(None);
            }
        }
        let d = self.field.degree();
        if d == 2 {
            // (u + v t)^2 = x, solve via the norm: N(sqrt x) = +-sqrt(N x)
            let n = self.norm();
            let Some(rn) = crate::arith::rat_sqrt_exact(&n.abs()) else {
                return Ok(None);
            };
            for sign in [1i64, -1] {
                let nr = if n.is_negative() { continue } else { &rn * BigRational::from_integer(sign.into()) };
                // y = sqrt(x): y^2 - T y + N = 0 with T^2 = Tr(x) + 2 N(y)
                let t2 = self.trace() + &nr * BigRational::from_integer(2.into());
                let Some(t) = crate::arith::rat_sqrt_exact(&t2) else { continue };
                if t.is_zero() {
                    continue;
                }
                // y = (x + N(y)) / T
                let y = (self + &Self::from_rational(&self.field, nr.clone())).scale(&t.recip());
                if &(&y * &y) == self {
                    return Ok(Some(y));
                }
            }
            // purely "imaginary" roots: y = v t' with trace 0
            return Ok(self.sqrt_trace_zero());
        }
        Err(Error::Unsupported(format!("square roots in degree {d} fields")))
    }

    fn sqrt_trace_zero(&self) -> Option<Self> {
        // y with Tr(y) = 0 satisfies y^2 = -N(y) rational; x = y^2 must be rational then
        let q = self.as_rational()?;
        let qd = self.field.quadratic()?;
        // sqrt(q) = r sqrt(D) with r^2 = q / D
        let dd = BigRational::from_integer(qd.d.clone());
        let r = crate::arith::rat_sqrt_exact(&(&q / &dd))?;
        // sqrt D = (2 theta + b) / s
        let two = BigRational::from_integer(BigInt::from(2));
        let sqrt_d = Self::new(
            &self.field,
            vec![
                BigRational::from_integer(qd.b.clone()) / BigRational::from_integer(qd.s.clone()),
                two / BigRational::from_integer(qd.s.clone()),
            ],
        )
        .ok()?;
        Some(sqrt_d.scale(&r))
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.check(rhs);
        FieldElement { field: self.field.clone(), c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.check(rhs);
        FieldElement { field: self.field.clone(), c: self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field.clone(), c: self.c.iter().map(|a| -a).collect() }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.check(rhs);
        let d = self.field.degree();
        if d == 1 {
            return FieldElement { field: self.field.clone(), c: vec![&self.c[0] * &rhs.c[0]] };
        }
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let red = self.field.reductions();
        let mut out: Vec<BigRational> = prod[..d].to_vec();
        for (k, coef) in prod[d..].iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            for i in 0..d {
                out[i] += coef * &red[k][i];
            }
        }
        FieldElement { field: self.field.clone(), c: out }
    }
}
