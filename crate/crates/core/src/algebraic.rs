//! Algebraic numbers given by an irreducible polynomial over Q and a
//! certified root, with the Mahler-measure form of the Weil height.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::ln_abs_int;
use crate::error::{Error, Result};
use crate::factor::factor;
use crate::poly::{charpoly, Poly};
use crate::roots::RootSet;

#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    /// Content-free integer polynomial with positive leading coefficient.
    minpoly: Poly,
    roots: Arc<RootSet>,
    index: usize,
}

/// log M(f) for a nonzero integer polynomial; the roots are certified.
pub fn log_mahler(f: &Poly, bits: u32) -> Result<f64> {
    let ints = f.primitive_integer();
    let lead = ints.last().cloned().ok_or_else(|| Error::param("zero polynomial"))?;
    if f.degree() == 0 {
        return Ok(ln_abs_int(&lead));
    }
    let mut total = ln_abs_int(&lead);
    for (g, mult) in crate::factor::squarefree_decomposition(f) {
        let rs = RootSet::isolate(&g, bits)?;
        let s: f64 = rs.approximations().iter().map(|z| z.norm().ln().max(0.0)).sum();
        total += mult as f64 * s;
    }
    Ok(total)
}

/// Index of the root whose certified disc is closest to `z`, provided the
/// choice is unambiguous (nearest distance well below the runner-up).
fn nearest_root(rs: &RootSet, z: Complex64) -> Option<(usize, f64, f64)> {
    let mut best = (usize::MAX, f64::INFINITY, f64::INFINITY);
    for i in 0..rs.len() {
        let d = (rs.approx(i) - z).norm();
        if d < best.1 {
            best = (i, d, best.1);
        } else if d < best.2 {
            best.2 = d;
        }
    }
    (best.0 != usize::MAX).then_some(best)
}

impl AlgebraicNumber {
    /// The root of the irreducible polynomial `p` nearest to `approx`.
    pub fn new(p: &Poly, approx: Complex64, bits: u32) -> Result<Self> {
        if p.degree() == 0 {
            return Err(Error::param("constant polynomial has no roots"));
        }
        let minpoly = Poly::from_bigints(&p.primitive_integer());
        if let Some(w) = crate::factor::irreducibility_witness(&minpoly, bits)? {
            return Err(Error::Reducible { factor: w.to_string() });
        }
        let roots = Arc::new(RootSet::isolate(&minpoly, bits)?);
        let (index, d1, d2) = nearest_root(&roots, approx).unwrap();
        if d2.is_finite() && d1 * 4.0 > d2 {
            return Err(Error::Precision { bits, reason: format!("approximation {approx} does not single out a root") });
        }
        Ok(AlgebraicNumber { minpoly, roots, index })
    }

    /// Root number `index` (in the canonical root order) of an irreducible polynomial.
    pub fn from_root_index(p: &Poly, index: usize, bits: u32) -> Result<Self> {
        let minpoly = Poly::from_bigints(&p.primitive_integer());
        let roots = Arc::new(RootSet::isolate(&minpoly, bits)?);
        if index >= roots.len() {
            return Err(Error::param("root index out of range"));
        }
        Ok(AlgebraicNumber { minpoly, roots, index })
    }

    pub fn from_rational(q: &BigRational) -> Self {
        let p = Poly::new(vec![-q.clone(), BigRational::from_integer(1.into())]);
        Self::from_root_index(&p, 0, 64).expect("linear polynomial")
    }

    /// Identify the number close to `approx` among the roots of an arbitrary
    /// nonzero rational polynomial `p` (factored over Q first).
    pub fn identify(p: &Poly, approx: Complex64, bits: u32) -> Result<Self> {
        let mut best: Option<(Poly, usize, f64)> = None;
        let mut second = f64::INFINITY;
        for (f, _) in factor(p, bits)? {
            let rs = RootSet::isolate(&f, bits)?;
            for i in 0..rs.len() {
                let d = (rs.approx(i) - approx).norm();
                match &best {
                    Some((_, _, bd)) if d >= *bd => second = second.min(d),
                    _ => {
                        if let Some((_, _, bd)) = &best {
                            second = second.min(*bd);
                        }
                        best = Some((f.clone(), i, d));
                    }
                }
            }
        }
        let (f, i, d) = best.ok_or_else(|| Error::param("polynomial has no roots"))?;
        if second.is_finite() && d * 4.0 > second {
            return Err(Error::Precision { bits, reason: format!("approximation {approx} does not single out a root") });
        }
        Self::from_root_index(&f, i, bits)
    }

    pub fn minpoly(&self) -> &Poly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }

    pub fn roots(&self) -> &RootSet {
        &self.roots
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn value(&self) -> Complex64 {
        self.roots.approx(self.index)
    }

    pub fn radius(&self) -> f64 {
        self.roots.ball(self.index).radius
    }

    pub fn conjugates(&self) -> Vec<Complex64> {
        self.roots.approximations()
    }

    pub fn leading(&self) -> BigInt {
        self.minpoly.lead().to_integer()
    }

    /// Weil height (1/d)(log|a_d| + sum log+ |alpha_i|).
    pub fn height(&self) -> f64 {
        let d = self.degree() as f64;
        let s: f64 = self.conjugates().iter().map(|z| z.norm().ln().max(0.0)).sum();
        (ln_abs_int(&self.leading()) + s) / d
    }

    /// 1 / alpha.
    pub fn inverse(&self) -> Result<Self> {
        if self.minpoly.coeff(0).is_zero() {
            return Err(Error::param("inverse of zero"));
        }
        let z = self.value().inv();
        AlgebraicNumber::new(&self.minpoly.reversed(), z, self.roots.bits())
    }

    /// alpha^m for m >= 1.
    pub fn pow(&self, m: u32) -> Result<Self> {
        let monic = self.minpoly.monic();
        let d = monic.degree();
        // companion matrix, then charpoly of its m-th power
        let mut c = vec![vec![BigRational::zero(); d]; d];
        for i in 1..d {
            c[i][i - 1] = BigRational::from_integer(1.into());
        }
        for i in 0..d {
            c[i][d - 1] = -monic.coeff(i);
        }
        let mut acc = c.clone();
        for _ in 1..m {
            acc = matmul(&acc, &c);
        }
        let cp = charpoly(&acc);
        AlgebraicNumber::identify(&cp, self.value().powu(m), self.roots.bits())
    }

    pub fn is_real(&self) -> bool {
        self.roots.is_real(self.index)
    }

    pub fn abs_cmp_one(&self) -> Option<std::cmp::Ordering> {
        self.roots.compare_modulus_one(self.index, true)
    }
}

fn matmul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// Largest value of h over the roots of `p`: max over irreducible factors f of log M(f) / deg f.
pub fn max_root_height(p: &Poly, bits: u32) -> Result<f64> {
    let mut best = 0.0f64;
    for (f, _) in factor(p, bits)? {
        if f.degree() == 0 {
            continue;
        }
        let h = log_mahler(&f, bits)? / f.degree() as f64;
        best = best.max(h);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn golden_height() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let a = AlgebraicNumber::new(&Poly::from_ints(&[-1, -1, 1]), Complex64::new(phi, 0.0), 192).unwrap();
        assert!((a.height() - 0.5 * phi.ln()).abs() < 1e-12);
        let b = a.inverse().unwrap();
        assert!((b.height() - a.height()).abs() < 1e-12);
        let sq = a.pow(2).unwrap();
        assert_eq!(*sq.minpoly(), Poly::from_ints(&[1, -3, 1]));
        assert!((sq.height() - phi.ln()).abs() < 1e-12);
    }

    #[test]
    fn rationals_and_units() {
        let two = AlgebraicNumber::from_rational(&BigRational::from_integer(2.into()));
        assert!((two.height() - 2f64.ln()).abs() < 1e-15);
        let half = two.inverse().unwrap();
        assert!((half.height() - 2f64.ln()).abs() < 1e-15);
        let one = AlgebraicNumber::from_rational(&BigRational::from_integer(1.into()));
        assert_eq!(one.height(), 0.0);
        assert!(half.minpoly().lead().is_positive());
    }

    #[test]
    fn identify_picks_factor() {
        // (x^2 + 1)(x - 3): the root near i has minpoly x^2 + 1
        let p = &Poly::from_ints(&[1, 0, 1]) * &Poly::from_ints(&[-3, 1]);
        let a = AlgebraicNumber::identify(&p, Complex64::new(0.0, 1.0), 192).unwrap();
        assert_eq!(*a.minpoly(), Poly::from_ints(&[1, 0, 1]));
        assert!((max_root_height(&p, 192).unwrap() - 3f64.ln()).abs() < 1e-14);
    }
}
