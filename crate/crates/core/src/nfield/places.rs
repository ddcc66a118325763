use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{FieldElement, NumberField};
use crate::arith::{int_valuation, is_prime_u64, lcm_all, prime_divisors_u64, rat_valuation};
use crate::error::{Error, Result};
use crate::modp::{Fp, ModPoly};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlaceKind {
    Real,
    Complex,
    Finite,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Local {
    Archimedean,
    Rational,
    /// Split prime of a quadratic field: omega = r mod P.
    QuadSplit(u64),
    QuadInert,
    QuadRamified,
    /// Higher degree, p not dividing the index: the place corresponds to the
    /// factor g^e of the minpoly mod p.
    Dedekind(ModPoly),
}

/// A place of a number field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Place {
    pub kind: PlaceKind,
    /// Root index for archimedean places.
    pub root: usize,
    /// Rational prime below a finite place (0 for archimedean).
    pub p: u64,
    /// Position among the places above `p` (or among places of the same kind).
    pub index: usize,
    pub e: u32,
    pub f: u32,
    local: Local,
}

impl Place {
    /// Local degree n_v.
    pub fn local_degree(&self) -> u32 {
        match self.kind {
            PlaceKind::Real => 1,
            PlaceKind::Complex => 2,
            PlaceKind::Finite => self.e * self.f,
        }
    }

    /// Absolute norm N(P) = p^f of a finite place.
    pub fn norm(&self) -> BigUint {
        BigUint::from(self.p).pow(self.f)
    }

    pub fn is_archimedean(&self) -> bool {
        self.kind != PlaceKind::Finite
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PlaceKind::Real => write!(f, "real{}", self.index),
            PlaceKind::Complex => write!(f, "complex{}", self.index),
            PlaceKind::Finite => write!(f, "p{}.{}", self.p, self.index),
        }
    }
}

/// Real places first, then complex places, in root order.
pub fn archimedean_places(field: &NumberField) -> Vec<Place> {
    let mut out = Vec::new();
    for (i, &r) in field.real_places().iter().enumerate() {
        out.push(Place { kind: PlaceKind::Real, root: r, p: 0, index: i, e: 1, f: 1, local: Local::Archimedean });
    }
    for (i, &r) in field.complex_places().iter().enumerate() {
        out.push(Place { kind: PlaceKind::Complex, root: r, p: 0, index: i, e: 1, f: 1, local: Local::Archimedean });
    }
    out
}

fn finite(p: u64, index: usize, e: u32, f: u32, local: Local) -> Place {
    Place { kind: PlaceKind::Finite, root: 0, p, index, e, f, local }
}

/// Minimal polynomial of omega for a quadratic field.
fn omega_minpoly(field: &NumberField) -> Poly {
    let q = field.quadratic().expect("quadratic field");
    if q.half_omega {
        // x^2 - x + (1 - D)/4
        let c = (BigInt::one() - &q.d) / BigInt::from(4);
        Poly::from_bigints(&[c, BigInt::from(-1), BigInt::one()])
    } else {
        Poly::from_bigints(&[-q.d.clone(), BigInt::zero(), BigInt::one()])
    }
}

/// The finite places above a rational prime `p`.
pub fn places_above(field: &NumberField, p: u64) -> Result<Vec<Place>> {
    if !is_prime_u64(p) {
        return Err(Error::param(format!("{p} is not prime")));
    }
    match field.degree() {
        1 => Ok(vec![finite(p, 0, 1, 1, Local::Rational)]),
        2 => {
            let disc = field.disc();
            match crate::arith::kronecker_prime(disc, p) {
                0 => Ok(vec![finite(p, 0, 2, 1, Local::QuadRamified)]),
                -1 => Ok(vec![finite(p, 0, 1, 2, Local::QuadInert)]),
                _ => {
                    if p >= 1 << 32 {
                        return Err(Error::UnsupportedPrime { p, reason: "split prime above 2^32".into() });
                    }
                    let fp = Fp::new(p);
                    let g = ModPoly::from_int_poly(&omega_minpoly(field), p);
                    let mut roots: Vec<u64> = fp
                        .factor(&g)
                        .into_iter()
                        .map(|(h, _)| (p - h.0[0]) % p)
                        .collect();
                    roots.sort();
                    Ok(roots
                        .into_iter()
                        .enumerate()
                        .map(|(i, r)| finite(p, i, 1, 1, Local::QuadSplit(r)))
                        .collect())
                }
            }
        }
        _ => higher_degree_places(field, p),
    }
}

fn higher_degree_places(field: &NumberField, p: u64) -> Result<Vec<Place>> {
    if p >= 1 << 32 {
        return Err(Error::UnsupportedPrime { p, reason: "prime above 2^32".into() });
    }
    let fp = Fp::new(p);
    let f = field.minpoly();
    let fbar = ModPoly::from_int_poly(f, p);
    let fac = fp.factor(&fbar);
    if fac.iter().any(|(_, e)| *e > 1) {
        // Dedekind criterion: p divides the index iff gcd(g, h, F) != 1 mod p
        let g = fac.iter().fold(ModPoly::one(), |acc, (q, _)| fp.mul(&acc, q));
        let h = fp.div_rem(&fbar, &g).0;
        let lift = |m: &ModPoly| m.to_poly();
        let prod = fac.iter().fold(Poly::one(), |acc, (q, e)| &acc * &lift(q).pow(*e));
        let diff = f - &prod;
        let bp = BigRational::from_integer(BigInt::from(p));
        let big_f = Poly::new(diff.coeffs().iter().map(|c| c / &bp).collect());
        let big_f = ModPoly::from_int_poly(&big_f, p);
        let gg = fp.gcd(&fp.gcd(&g, &h), &big_f);
        if gg.degree() > 0 || (big_f.is_zero() && fp.gcd(&g, &h).degree() > 0) {
            return Err(Error::UnsupportedPrime {
                p,
                reason: "p divides the index of Z[theta]; the monogenic model does not see the places".into(),
            });
        }
    }
    Ok(fac
        .into_iter()
        .enumerate()
        .map(|(i, (q, e))| finite(p, i, e, q.degree() as u32, Local::Dedekind(q)))
        .collect())
}

/// Lift the factor g^e of f mod p to a monic factor of f mod p^prec.
fn hensel_factor(f: &Poly, g: &ModPoly, e: u32, p: u64, prec: u32) -> Poly {
    let fp = Fp::new(p);
    let fbar = ModPoly::from_int_poly(f, p);
    let mut gk = (0..e).fold(ModPoly::one(), |acc, _| fp.mul(&acc, g)).to_poly();
    let hbar = fp.div_rem(&fbar, &ModPoly::from_int_poly(&gk, p)).0;
    if hbar.degree() == 0 {
        return f.clone();
    }
    let mut hk = hbar.to_poly();
    let (s, t) = fp
        .xgcd(&ModPoly::from_int_poly(&gk, p), &hbar)
        .expect("coprime factors mod p");
    let bp = BigInt::from(p);
    let mut m = bp.clone();
    for _ in 1..prec {
        let diff = f - &(&gk * &hk);
        let mr = BigRational::from_integer(m.clone());
        let err = ModPoly::from_int_poly(&Poly::new(diff.coeffs().iter().map(|c| c / &mr).collect()), p);
        let g_mod = ModPoly::from_int_poly(&gk, p);
        let h_mod = ModPoly::from_int_poly(&hk, p);
        let (q, r) = fp.div_rem(&fp.mul(&err, &t), &g_mod);
        let dg = r;
        let dh = fp.add(&fp.mul(&err, &s), &fp.mul(&q, &h_mod));
        gk = &gk + &dg.to_poly().scale(&mr);
        hk = &hk + &dh.to_poly().scale(&mr);
        m *= &bp;
    }
    gk
}

fn clear_denominators(a: &BigRational, b: &BigRational) -> (BigInt, BigInt, BigInt) {
    let c = a.denom().lcm(b.denom());
    let ca = (a * BigRational::from_integer(c.clone())).to_integer();
    let cb = (b * BigRational::from_integer(c.clone())).to_integer();
    (ca, cb, c)
}

/// P-adic valuation v_P(x) of a nonzero element at a finite place.
pub fn valuation(x: &FieldElement, place: &Place) -> Result<i64> {
    if place.kind != PlaceKind::Finite {
        return Err(Error::param("valuation needs a finite place"));
    }
    if x.is_zero() {
        return Err(Error::InfiniteValuation);
    }
    let p = place.p;
    match &place.local {
        Local::Rational => Ok(rat_valuation(&x.coeffs()[0], p)),
        Local::QuadInert => Ok(rat_valuation(&x.norm(), p) / 2),
        Local::QuadRamified => Ok(rat_valuation(&x.norm(), p)),
        Local::QuadSplit(r) => {
            let (a, b) = x.omega_coords().unwrap();
            let (ca, cb, c) = clear_denominators(&a, &b);
            let k = match (ca.is_zero(), cb.is_zero()) {
                (true, _) => int_valuation(&cb, p),
                (_, true) => int_valuation(&ca, p),
                _ => int_valuation(&ca, p).min(int_valuation(&cb, p)),
            };
            let pk = BigInt::from(p).pow(k);
            let a1 = &ca / &pk;
            let b1 = &cb / &pk;
            let bp = BigInt::from(p);
            let at_place = (&a1 + &b1 * BigInt::from(*r)).mod_floor(&bp).is_zero();
            let extra = if at_place {
                let q = x.field().quadratic().unwrap();
                let n = if q.half_omega {
                    &a1 * &a1 + &a1 * &b1 + &b1 * &b1 * ((BigInt::one() - &q.d) / BigInt::from(4))
                } else {
                    &a1 * &a1 - &q.d * &b1 * &b1
                };
                int_valuation(&n, p) as i64
            } else {
                0
            };
            Ok(k as i64 + extra - int_valuation(&c, p) as i64)
        }
        Local::Dedekind(g) => {
            let f = x.field().minpoly();
            let den = lcm_all(x.coeffs().iter().map(|c| c.denom()));
            let a = x.as_poly().scale(&BigRational::from_integer(den.clone()));
            let vn = rat_valuation(&x.norm(), p) + f.degree() as i64 * int_valuation(&den, p) as i64;
            // v_P(a) <= v_p(N(a)) / f, so precision p^(vn + 1) suffices
            let prec = (vn.max(0) + 1) as u32;
            let local = hensel_factor(f, g, place.e, p, prec);
            let res = local.resultant(&a);
            let v = rat_valuation(&res, p) / place.f as i64;
            Ok(v - place.e as i64 * int_valuation(&den, p) as i64)
        }
        Local::Archimedean => unreachable!(),
    }
}

impl Place {
    /// log |x|_v, normalised so that sum_v n_v log|x|_v = 0.
    pub fn log_abs(&self, x: &FieldElement) -> Result<f64> {
        match self.kind {
            PlaceKind::Finite => {
                let v = valuation(x, self)?;
                Ok(-(v as f64) * (self.p as f64).ln() / self.e as f64)
            }
            _ => {
                if x.is_zero() {
                    return Ok(f64::NEG_INFINITY);
                }
                Ok(x.embed_c64(self.root).norm().ln())
            }
        }
    }
}

/// Primes p at which some place may have |x|_v != 1: the primes dividing the
/// power-basis denominators or the numerator/denominator of the norm.
pub fn finite_support(x: &FieldElement) -> Vec<u64> {
    let mut primes = Vec::new();
    let den = lcm_all(x.coeffs().iter().map(|c| c.denom()));
    let n = x.norm();
    for m in [den, n.numer().abs(), n.denom().clone()] {
        if m > BigInt::one() {
            primes.extend(prime_divisors_u64(&m.to_biguint().unwrap()));
        }
    }
    primes.sort();
    primes.dedup();
    primes
}

/// Sum over all places of n_v log|x|_v (zero by the product formula).
pub fn product_formula_sum(field: &Arc<NumberField>, x: &FieldElement) -> Result<f64> {
    let mut total = 0.0;
    for v in archimedean_places(field) {
        total += v.local_degree() as f64 * v.log_abs(x)?;
    }
    for p in finite_support(x) {
        for v in places_above(field, p)? {
            total += v.local_degree() as f64 * v.log_abs(x)?;
        }
    }
    Ok(total)
}

impl Place {
    pub fn p_as_u64(&self) -> Option<u64> {
        (self.kind == PlaceKind::Finite).then_some(self.p)
    }

    pub fn norm_u64(&self) -> u64 {
        self.norm().to_u64().unwrap_or(u64::MAX)
    }
}
