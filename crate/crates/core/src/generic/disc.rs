use std::cmp::Ordering;

use num_traits::Signed;
use serde::Serialize;

use crate::algebraic::AlgebraicNumber;
use crate::arith::ln_abs_rat;
use crate::mobius::GroupSignature;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairClass {
    /// Some |alpha_i| > 1.
    S1,
    /// Both moduli <= 1, one strictly.
    S2,
    /// Both on the unit circle.
    Sr,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairEntry {
    pub i: usize,
    pub j: usize,
    pub class: PairClass,
    pub log_dist: f64,
    /// The modulus comparison with 1 was not certified for i or j.
    pub boundary_unresolved: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscriminantDecomposition {
    pub degree: usize,
    pub conjugates: Vec<[f64; 2]>,
    pub moduli: Vec<f64>,
    pub pairs: Vec<PairEntry>,
    pub s1: f64,
    pub s2: f64,
    pub sr: f64,
    pub counts: [usize; 3],
    /// sum_{i<j} log |alpha_i - alpha_j|.
    pub log_product: f64,
    /// |disc(minpoly)| of the primitive integer minpoly, exact.
    pub disc_minpoly: String,
    /// |(2 log_product + (2d - 2) log|lead|) - log|disc|| / max(1, log|disc|).
    pub disc_relative_error: f64,
    pub log_alpha: f64,
    /// log|alpha| / ((1/(4d)) log_product).
    pub ratio_disc: Option<f64>,
    /// log|alpha| / (d - 4), for d > 4.
    pub ratio_deg: Option<f64>,
    /// d0 = 2a + 4b + 1 when a signature is given.
    pub d0: Option<usize>,
    pub any_unresolved: bool,
}

/// Split log prod_{i<j} |alpha_i - alpha_j| by the position of the conjugates relative to the unit circle.
pub fn discriminant_decomposition(alpha: &AlgebraicNumber, sig: Option<GroupSignature>) -> DiscriminantDecomposition {
    let rs = alpha.roots();
    let d = alpha.degree();
    let conj = alpha.conjugates();
    let cmp: Vec<Option<Ordering>> = (0..d).map(|i| rs.compare_modulus_one(i, true)).collect();
    let moduli: Vec<f64> = conj.iter().map(|z| z.norm()).collect();
    // numeric fallback for uncertified comparisons
    let side = |i: usize| cmp[i].unwrap_or_else(|| moduli[i].partial_cmp(&1.0).unwrap());
    let mut pairs = Vec::new();
    let (mut s1, mut s2, mut sr) = (0.0, 0.0, 0.0);
    let mut counts = [0usize; 3];
    for i in 0..d {
        for j in i + 1..d {
            let ld = (conj[i] - conj[j]).norm().ln();
            let (a, b) = (side(i), side(j));
            let class = if a == Ordering::Greater || b == Ordering::Greater {
                PairClass::S1
            } else if a == Ordering::Equal && b == Ordering::Equal {
                PairClass::Sr
            } else {
                PairClass::S2
            };
            match class {
                PairClass::S1 => {
                    s1 += ld;
                    counts[0] += 1
                }
                PairClass::S2 => {
                    s2 += ld;
                    counts[1] += 1
                }
                PairClass::Sr => {
                    sr += ld;
                    counts[2] += 1
                }
            }
            pairs.push(PairEntry { i, j, class, log_dist: ld, boundary_unresolved: cmp[i].is_none() || cmp[j].is_none() });
        }
    }
    let log_product: f64 = pairs.iter().map(|p| p.log_dist).sum();
    let disc = alpha.minpoly().discriminant().abs();
    let log_disc = ln_abs_rat(&disc);
    let lead = alpha.leading();
    let lhs = 2.0 * log_product + (2 * d - 2) as f64 * crate::arith::ln_abs_int(&lead);
    let disc_relative_error = if d < 2 { 0.0 } else { (lhs - log_disc).abs() / log_disc.abs().max(1.0) };
    let log_alpha = alpha.value().norm().ln();
    let ratio_disc = (log_product != 0.0).then(|| log_alpha / (log_product / (4.0 * d as f64)));
    let ratio_deg = (d > 4).then(|| log_alpha / (d as f64 - 4.0));
    DiscriminantDecomposition {
        degree: d,
        conjugates: conj.iter().map(|z| [z.re, z.im]).collect(),
        moduli,
        any_unresolved: pairs.iter().any(|p| p.boundary_unresolved),
        pairs,
        s1,
        s2,
        sr,
        counts,
        log_product,
        disc_minpoly: disc.to_integer().to_string(),
        disc_relative_error,
        log_alpha,
        ratio_disc,
        ratio_deg,
        d0: sig.map(|s| 2 * s.a + 4 * s.b + 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use num_complex::Complex64;

    #[test]
    fn golden_square() {
        let a = AlgebraicNumber::new(&Poly::from_ints(&[1, -3, 1]), Complex64::new(2.618, 0.0), 192).unwrap();
        let r = discriminant_decomposition(&a, None);
        assert_eq!(r.counts, [1, 0, 0]);
        assert!((r.s1 - 0.5 * 5f64.ln()).abs() < 1e-12);
        assert_eq!(r.disc_minpoly, "5");
        assert!(r.disc_relative_error < 1e-12);
    }

    #[test]
    fn gaussian_unit() {
        let a = AlgebraicNumber::new(&Poly::from_ints(&[1, 0, 1]), Complex64::new(0.0, 1.0), 192).unwrap();
        let r = discriminant_decomposition(&a, None);
        assert_eq!(r.counts, [0, 0, 1]);
        assert!((r.sr - 2f64.ln()).abs() < 1e-12);
        assert!(!r.any_unresolved);
    }

    #[test]
    fn non_monic() {
        // 2x^2 - 1: roots +-1/sqrt 2, disc 8
        let a = AlgebraicNumber::new(&Poly::from_ints(&[-1, 0, 2]), Complex64::new(0.7, 0.0), 192).unwrap();
        let r = discriminant_decomposition(&a, None);
        assert_eq!(r.counts, [0, 1, 0]);
        assert_eq!(r.disc_minpoly, "8");
        assert!(r.disc_relative_error < 1e-12);
    }
}
