//! 2x2 matrices over a number field.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::nfield::{FieldElement, NumberField};

/// Entries [a, b, c, d] of [[a, b], [c, d]].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixOverK {
    pub e: [FieldElement; 4],
}

impl fmt::Debug for MatrixOverK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.e[0], self.e[1], self.e[2], self.e[3])
    }
}

impl fmt::Display for MatrixOverK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl MatrixOverK {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Self {
        MatrixOverK { e: [a, b, c, d] }
    }

    pub fn from_rationals(field: &Arc<NumberField>, m: [[BigRational; 2]; 2]) -> Self {
        let [[a, b], [c, d]] = m;
        MatrixOverK::new(
            FieldElement::from_rational(field, a),
            FieldElement::from_rational(field, b),
            FieldElement::from_rational(field, c),
            FieldElement::from_rational(field, d),
        )
    }

    pub fn from_ints(field: &Arc<NumberField>, m: [[i64; 2]; 2]) -> Self {
        MatrixOverK::new(
            FieldElement::from_int(field, m[0][0]),
            FieldElement::from_int(field, m[0][1]),
            FieldElement::from_int(field, m[1][0]),
            FieldElement::from_int(field, m[1][1]),
        )
    }

    pub fn identity(field: &Arc<NumberField>) -> Self {
        Self::from_ints(field, [[1, 0], [0, 1]])
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.e[0].field()
    }

    pub fn det(&self) -> FieldElement {
        &(&self.e[0] * &self.e[3]) - &(&self.e[1] * &self.e[2])
    }

    pub fn trace(&self) -> FieldElement {
        &self.e[0] + &self.e[3]
    }

    pub fn mul(&self, o: &MatrixOverK) -> MatrixOverK {
        let [a, b, c, d] = &self.e;
        let [p, q, r, s] = &o.e;
        MatrixOverK::new(
            &(a * p) + &(b * r),
            &(a * q) + &(b * s),
            &(c * p) + &(d * r),
            &(c * q) + &(d * s),
        )
    }

    /// Adjugate [[d, -b], [-c, a]]: the inverse up to the scalar det.
    pub fn adjugate(&self) -> MatrixOverK {
        let [a, b, c, d] = &self.e;
        MatrixOverK::new(d.clone(), -b, -c, a.clone())
    }

    pub fn inv(&self) -> Result<MatrixOverK> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let di = det.inv()?;
        let adj = self.adjugate();
        Ok(MatrixOverK::new(&adj.e[0] * &di, &adj.e[1] * &di, &adj.e[2] * &di, &adj.e[3] * &di))
    }

    pub fn scale(&self, s: &FieldElement) -> MatrixOverK {
        MatrixOverK::new(&self.e[0] * s, &self.e[1] * s, &self.e[2] * s, &self.e[3] * s)
    }

    pub fn neg(&self) -> MatrixOverK {
        MatrixOverK::new(-&self.e[0], -&self.e[1], -&self.e[2], -&self.e[3])
    }

    pub fn pow(&self, mut n: u32) -> MatrixOverK {
        let mut acc = Self::identity(self.field());
        let mut b = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            n >>= 1;
        }
        acc
    }

    /// Scalar matrix (identity in PGL2).
    pub fn is_scalar(&self) -> bool {
        self.e[1].is_zero() && self.e[2].is_zero() && self.e[0] == self.e[3]
    }

    /// Representative of {A, -A}: the one whose first nonzero coordinate is positive.
    pub fn sign_normalized(&self) -> MatrixOverK {
        for x in &self.e {
            for c in x.coeffs() {
                if !c.is_zero() {
                    return if *c < BigRational::zero() { self.neg() } else { self.clone() };
                }
            }
        }
        self.clone()
    }

    /// Representative of the projective class: first nonzero entry scaled to 1.
    pub fn projective_normalized(&self) -> Result<MatrixOverK> {
        let first = self.e.iter().find(|x| !x.is_zero()).ok_or(Error::Singular)?;
        Ok(self.scale(&first.inv()?))
    }

    /// Equality in PGL2(K).
    pub fn projectively_equal(&self, o: &MatrixOverK) -> bool {
        match (self.projective_normalized(), o.projective_normalized()) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    /// Entries embedded at root `root` of the field's minpoly.
    pub fn embed(&self, root: usize) -> [Complex64; 4] {
        [
            self.e[0].embed_c64(root),
            self.e[1].embed_c64(root),
            self.e[2].embed_c64(root),
            self.e[3].embed_c64(root),
        ]
    }

    /// Rational 2d x 2d matrix of the Q-linear map v -> A v on K^2.
    pub fn rational_matrix(&self) -> Vec<Vec<BigRational>> {
        let [a, b, c, d] = &self.e;
        rational_block(&[vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]])
    }
}

/// Rational nd x nd matrix of an n x n matrix over K acting Q-linearly on K^n.
/// Its characteristic polynomial is the norm to Q of the one over K.
pub fn rational_block(m: &[Vec<FieldElement>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let d = m[0][0].field().degree();
    let mut out = vec![vec![BigRational::zero(); n * d]; n * d];
    for bi in 0..n {
        for bj in 0..n {
            let mm = m[bi][bj].mult_matrix();
            for i in 0..d {
                for j in 0..d {
                    out[bi * d + i][bj * d + j] = mm[i][j].clone();
                }
            }
        }
    }
    out
}

/// Largest singular value of a complex 2x2 matrix.
pub fn operator_norm(m: &[Complex64; 4]) -> f64 {
    // largest eigenvalue of the Hermitian M*M = [[p, q], [q*, r]]
    let p = m[0].norm_sqr() + m[2].norm_sqr();
    let r = m[1].norm_sqr() + m[3].norm_sqr();
    let q = (m[0].conj() * m[1] + m[2].conj() * m[3]).norm();
    ((p + r) / 2.0 + ((p - r) / 2.0).hypot(q)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfield::make_field;
    use crate::poly::Poly;

    #[test]
    fn products_and_inverse() {
        let k = make_field(&Poly::from_ints(&[1, 0, 1]), 192).unwrap();
        let i = FieldElement::theta(&k);
        let one = FieldElement::one(&k);
        let m = MatrixOverK::new(&one + &i, one.clone(), i.clone(), one.clone());
        assert!(m.det().is_one());
        assert_eq!(m.trace(), &FieldElement::from_int(&k, 2) + &i);
        assert!(m.mul(&m.inv().unwrap()).is_scalar());
        let t = MatrixOverK::from_ints(&k, [[1, 1], [0, 1]]);
        assert_eq!(t.pow(2), MatrixOverK::from_ints(&k, [[1, 2], [0, 1]]));
        assert!(m.projectively_equal(&m.scale(&i)));
        assert_eq!(m.neg().sign_normalized(), m.sign_normalized());
    }

    #[test]
    fn golden_operator_norm() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let z = |x: f64| Complex64::new(x, 0.0);
        assert!((operator_norm(&[z(1.0), z(1.0), z(1.0), z(0.0)]) - phi).abs() < 1e-14);
        assert!((operator_norm(&[z(1.0), z(0.0), z(0.0), z(1.0)]) - 1.0).abs() < 1e-15);
    }
}
