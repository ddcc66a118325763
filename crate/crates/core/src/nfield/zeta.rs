use num_bigint::BigInt;
use serde::Serialize;

use super::{places_above, NumberField};
use crate::arith::{kronecker_prime, primes_up_to};
use crate::error::{Error, Result};
use crate::modp::{Fp, ModPoly};

/// Certified enclosure of zeta_K(2).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZetaValue {
    pub lower: f64,
    pub upper: f64,
    pub prime_bound: u64,
}

impl ZetaValue {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Residue degrees of the places above `p`, each with multiplicity one per place.
fn residue_degrees(field: &NumberField, p: u64, disc_poly: &BigInt) -> Result<Vec<u32>> {
    match field.degree() {
        1 => Ok(vec![1]),
        2 => Ok(match kronecker_prime(field.disc(), p) {
            1 => vec![1, 1],
            -1 => vec![2],
            _ => vec![1],
        }),
        _ => {
            if (disc_poly % BigInt::from(p)) != BigInt::from(0) {
                let fp = Fp::new(p);
                let f = ModPoly::from_int_poly(field.minpoly(), p);
                Ok(fp.degree_pattern(&f).into_iter().map(|d| d as u32).collect())
            } else {
                Ok(places_above(field, p)?.iter().map(|v| v.f).collect())
            }
        }
    }
}

/// Euler product for zeta_K(2) over primes up to `prime_bound` with a tail bound.
///
/// Each local factor above p is at most (1 - p^-2)^-d, and
/// sum_{p > B} p^-2 <= 2 * 1.25506 / (B ln B) from pi(x) < 1.25506 x / ln x.
pub fn zeta2(field: &NumberField, prime_bound: u64) -> Result<ZetaValue> {
    if prime_bound < 2 {
        return Err(Error::param("zeta prime bound must be >= 2"));
    }
    let disc_poly = field.minpoly().discriminant().to_integer();
    let primes = primes_up_to(prime_bound);
    let mut log_sum = 0.0f64;
    let mut comp = 0.0f64;
    for &p in &primes {
        for f in residue_degrees(field, p, &disc_poly)? {
            let q = (p as f64).powi(-2 * f as i32);
            let term = -(-q).ln_1p();
            // compensated summation
            let y = term - comp;
            let t = log_sum + y;
            comp = (t - log_sum) - y;
            log_sum = t;
        }
    }
    let b = prime_bound as f64;
    let d = field.degree() as f64;
    let tail = d / (1.0 - b.powi(-2)) * 2.51012 / (b * b.ln());
    let slack = 1e-15 * (primes.len() as f64 * d + 10.0) * log_sum.max(1e-3);
    Ok(ZetaValue {
        lower: (log_sum - slack).exp() * (1.0 - 4e-16),
        upper: (log_sum + tail + slack).exp() * (1.0 + 4e-16),
        prime_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::super::make_field;
    use super::*;
    use crate::poly::Poly;

    #[test]
    fn basel() {
        let q = make_field(&Poly::from_ints(&[-1, 1]), 192).unwrap();
        let z = zeta2(&q, 100_000).unwrap();
        let basel = std::f64::consts::PI.powi(2) / 6.0;
        assert!(z.contains(basel), "{z:?}");
        assert!(z.upper - z.lower < 1e-5);
    }

    #[test]
    fn refinement_stays_inside() {
        let k = make_field(&Poly::from_ints(&[1, 0, 1]), 192).unwrap();
        let coarse = zeta2(&k, 1_000).unwrap();
        let fine = zeta2(&k, 20_000).unwrap();
        assert!(coarse.lower <= fine.lower && fine.upper <= coarse.upper);
    }

    #[test]
    fn cubic_pattern_matches_places() {
        let k = make_field(&Poly::from_ints(&[-2, 0, 0, 1]), 192).unwrap();
        let z = zeta2(&k, 2_000).unwrap();
        assert!(z.lower > 1.0 && z.upper < (std::f64::consts::PI.powi(2) / 6.0).powi(3));
        assert!(zeta2(&k, 1).is_err());
    }
}
