//! Quaternion algebra data (k, Ram_f, designated real places), Borel's
//! covolume formula for the minimal and maximal lattices of a class, and
//! the index bounds read off from a generic element.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::rat_to_f64;
use crate::error::{Error, Result};
use crate::mobius::{eigenvalue, is_generic, Designation, GElement, GroupSignature};
use crate::nfield::{places_above, zeta2, FieldElement, NumberField, Place, ZetaValue};

/// A finite place named by its rational prime and its position among the places above it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, serde::Deserialize)]
pub struct PlaceRef {
    pub p: u64,
    #[serde(default)]
    pub index: usize,
}

pub fn resolve_place(field: &NumberField, r: PlaceRef) -> Result<Place> {
    let ps = places_above(field, r.p)?;
    let n = ps.len();
    ps.into_iter()
        .nth(r.index)
        .ok_or_else(|| Error::param(format!("there are {n} places above {}, index {} requested", r.p, r.index)))
}

#[derive(Clone, Debug)]
pub struct QuaternionAlgebraData {
    field: Arc<NumberField>,
    ram_f: Vec<Place>,
    designation: Arc<Designation>,
}

/// Validate (k, Ram_f, split real places): |Ram| = (r1 - a) + |Ram_f| must be even.
pub fn make_algebra(field: &Arc<NumberField>, ram_f: &[PlaceRef], split_real_places: &[usize]) -> Result<QuaternionAlgebraData> {
    let mut places = Vec::new();
    for (i, r) in ram_f.iter().enumerate() {
        if ram_f[..i].contains(r) {
            return Err(Error::Algebra(format!("ramified place p{}.{} listed twice", r.p, r.index)));
        }
        places.push(resolve_place(field, *r)?);
    }
    let designation = Arc::new(Designation::new(field, split_real_places)?);
    let a = split_real_places.len();
    let total = (field.r1() - a) + places.len();
    if total % 2 == 1 {
        return Err(Error::Algebra(format!(
            "total ramification {total} is odd ({} ramified real places + {} finite places)",
            field.r1() - a,
            places.len()
        )));
    }
    Ok(QuaternionAlgebraData { field: field.clone(), ram_f: places, designation })
}

impl QuaternionAlgebraData {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn ram_f(&self) -> &[Place] {
        &self.ram_f
    }

    pub fn designation(&self) -> &Arc<Designation> {
        &self.designation
    }

    pub fn signature(&self) -> GroupSignature {
        self.designation.signature()
    }

    /// Norm of the discriminant ideal, prod N(P) over Ram_f.
    pub fn disc_norm(&self) -> BigUint {
        self.ram_f.iter().map(|v| v.norm()).product()
    }

    /// Ram(A) is empty: the algebra is M2(k).
    pub fn is_matrix_algebra(&self) -> bool {
        self.ram_f.is_empty() && self.designation.signature().a == self.field.r1()
    }
}

/// An explicit lattice: the algebra, the places S of the enclosing maximal
/// lattice, and matrix generators of the subgroup under study.
#[derive(Clone, Debug)]
pub struct LatticeSpec {
    pub id: String,
    pub algebra: QuaternionAlgebraData,
    pub s: Vec<PlaceRef>,
    pub generators: Vec<GElement>,
    pub index_hint: Option<BigRational>,
}

impl LatticeSpec {
    pub fn new(
        id: impl Into<String>,
        algebra: QuaternionAlgebraData,
        s: Vec<PlaceRef>,
        generators: Vec<GElement>,
        index_hint: Option<BigRational>,
    ) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::param("lattice spec needs at least one generator"));
        }
        for g in &generators {
            if !g.matrix().field().same_as(algebra.field()) {
                return Err(Error::FieldMismatch("generator over a different field than the algebra".into()));
            }
        }
        for r in &s {
            let v = resolve_place(algebra.field(), *r)?;
            if algebra.ram_f.contains(&v) {
                return Err(Error::Algebra(format!("S contains the ramified place {v}")));
            }
        }
        if let Some(h) = &index_hint {
            if *h < BigRational::one() {
                return Err(Error::param(format!("index hint {h} must be >= 1")));
            }
        }
        Ok(LatticeSpec { id: id.into(), algebra, s, generators, index_hint })
    }

    pub fn matrices(&self) -> Vec<crate::matrix::MatrixOverK> {
        self.generators.iter().map(|g| g.matrix().clone()).collect()
    }
}

fn ratio_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn ser_rat<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&ratio_string(q))
}

fn ser_opt_rat<S: serde::Serializer>(q: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&ratio_string(q)),
        None => s.serialize_none(),
    }
}

fn ser_big<S: serde::Serializer>(q: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct CovolumeReport {
    pub field_disc: String,
    /// False when |disc| is only that of the defining polynomial.
    pub disc_exact: bool,
    pub disc_pow: f64,
    pub zeta: ZetaValue,
    /// prod (N(P) - 1) over Ram_f.
    #[serde(serialize_with = "ser_big")]
    pub ram_factor: BigUint,
    pub two_power: u32,
    pub pi_power: u32,
    #[serde(serialize_with = "ser_opt_rat")]
    pub index_hint: Option<BigRational>,
    /// Formula (1) with the given index (1 if absent).
    pub base_lower: f64,
    pub base_upper: f64,
    pub s_places: Vec<String>,
    /// prod (N(P) + 1) over S.
    #[serde(serialize_with = "ser_big")]
    pub s_product: BigUint,
    #[serde(serialize_with = "ser_rat")]
    pub multiplier_lower: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub multiplier_upper: BigRational,
    pub covol_lower: f64,
    pub covol_upper: f64,
    /// Without an index hint the minimal covolume is at most the index-1 value.
    pub index_one_is_upper_bound: bool,
}

const ROUND: f64 = 1e-14;

/// Borel's formula for the minimal covolume in the class of the algebra:
/// 2 |D_k|^{3/2} zeta_k(2) prod (N(P) - 1) / (2^{2r1+3r2-2a} pi^{2r1+2r2-a} [index]).
pub fn min_covolume(alg: &QuaternionAlgebraData, zeta_prime_bound: u64, index_hint: Option<BigRational>) -> Result<CovolumeReport> {
    max_lattice_covolume(alg, &[], zeta_prime_bound, index_hint)
}

/// Covolume of the maximal lattice Gamma_S: the minimal one times
/// [Gamma_D : Gamma_S] = 2^-m prod_S (N(P) + 1), 0 <= m <= |S|.
pub fn max_lattice_covolume(
    alg: &QuaternionAlgebraData,
    s: &[PlaceRef],
    zeta_prime_bound: u64,
    index_hint: Option<BigRational>,
) -> Result<CovolumeReport> {
    let field = alg.field();
    if let Some(h) = &index_hint {
        if *h < BigRational::one() {
            return Err(Error::param(format!("index hint {h} must be >= 1")));
        }
    }
    let mut s_places = Vec::new();
    for (i, r) in s.iter().enumerate() {
        if s[..i].contains(r) {
            return Err(Error::param(format!("place p{}.{} listed twice in S", r.p, r.index)));
        }
        let v = resolve_place(field, *r)?;
        if alg.ram_f.contains(&v) {
            return Err(Error::Algebra(format!("S contains the ramified place {v}")));
        }
        s_places.push(v);
    }
    let sig = alg.signature();
    let (r1, r2) = (field.r1() as u32, field.r2() as u32);
    let two_power = 2 * r1 + 3 * r2 - 2 * sig.a as u32;
    let pi_power = 2 * r1 + 2 * r2 - sig.a as u32;
    let zeta = zeta2(field, zeta_prime_bound)?;
    let disc = field.disc().abs();
    let disc_pow = disc.to_f64().unwrap().powf(1.5);
    let ram_factor: BigUint = alg.ram_f.iter().map(|v| v.norm() - 1u32).product();
    let ram_f64 = ram_factor.to_f64().unwrap();
    let index = index_hint.as_ref().map(rat_to_f64).unwrap_or(1.0);
    let scale = 2.0 * disc_pow * ram_f64 / (2f64.powi(two_power as i32) * std::f64::consts::PI.powi(pi_power as i32) * index);
    let base_lower = scale * zeta.lower * (1.0 - ROUND);
    let base_upper = scale * zeta.upper * (1.0 + ROUND);
    let s_product: BigUint = s_places.iter().map(|v| v.norm() + 1u32).product();
    let multiplier_upper = BigRational::from_integer(BigInt::from(s_product.clone()));
    let multiplier_lower = &multiplier_upper / BigRational::from_integer(BigInt::from(2).pow(s_places.len() as u32));
    let covol_lower = base_lower * rat_to_f64(&multiplier_lower) * (1.0 - ROUND);
    let covol_upper = base_upper * rat_to_f64(&multiplier_upper) * (1.0 + ROUND);
    Ok(CovolumeReport {
        field_disc: field.disc().to_string(),
        disc_exact: field.disc_exact(),
        disc_pow,
        zeta,
        ram_factor,
        two_power,
        pi_power,
        index_one_is_upper_bound: index_hint.is_none(),
        index_hint,
        base_lower,
        base_upper,
        s_places: s_places.iter().map(|v| v.label()).collect(),
        s_product,
        multiplier_lower,
        multiplier_upper,
        covol_lower,
        covol_upper,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexBounds {
    /// beta = s - 2 with s = alpha + 1/alpha in k, as power-basis coordinates.
    pub beta: Vec<String>,
    #[serde(serialize_with = "ser_rat")]
    pub norm_beta: BigRational,
    /// #S <= floor(log2 |N(beta)|).
    pub s_bound: u32,
    /// prod_S (N(P) + 1) <= N(beta)^2.
    #[serde(serialize_with = "ser_rat")]
    pub product_bound: BigRational,
    /// False if beta is not integral (then the bounds above are not implied).
    pub beta_integral: bool,
    pub generic: bool,
    pub alpha_abs: f64,
    /// |N(beta)| <= c |alpha|^(a+2b): the measured c.
    pub measured_c: f64,
    pub alpha_exponent: u32,
    /// Exponent 3(a+2b) in the bound [Gamma_1 : Gamma(I)] <= c |alpha|^e.
    pub congruence_exponent: u32,
    pub constant_note: String,
}

/// beta = alpha + 1/alpha - 2 for the normalized eigenvalue alpha of W and
/// the resulting bounds on the places S of a maximal lattice containing W.
pub fn index_bounds_from_generic(w: &GElement, alg: &QuaternionAlgebraData) -> Result<IndexBounds> {
    if !w.matrix().field().same_as(alg.field()) {
        return Err(Error::FieldMismatch("element and algebra over different fields".into()));
    }
    let field = w.matrix().field();
    let s = w
        .s_exact()?
        .ok_or_else(|| Error::param("det W is not a square in k: alpha + 1/alpha is not in k"))?;
    let alpha = eigenvalue(w)?;
    let av = alpha.value();
    let target = av + av.inv();
    let root = w.designation().factors()[0].root;
    let s = if (s.embed_c64(root) - target).norm() <= (s.embed_c64(root) + target).norm() { s } else { -&s };
    let beta = &s - &FieldElement::from_int(field, 2);
    if beta.is_zero() {
        return Err(Error::param("trace 2: unipotent-like, not generic"));
    }
    let norm_beta = beta.norm();
    let beta_integral = beta.charpoly().coeffs().iter().all(|c| c.is_integer());
    let abs_n = norm_beta.abs();
    let s_bound = if abs_n.is_integer() {
        (abs_n.to_integer().bits() - 1) as u32
    } else {
        rat_to_f64(&abs_n).log2().floor().max(0.0) as u32
    };
    let product_bound = &norm_beta * &norm_beta;
    let sig = alg.signature();
    let alpha_exponent = (sig.a + 2 * sig.b) as u32;
    let measured_c = rat_to_f64(&abs_n) / av.norm().powi(alpha_exponent as i32);
    let generic = is_generic(w)?.generic;
    Ok(IndexBounds {
        beta: beta.coeffs().iter().map(ratio_string).collect(),
        norm_beta,
        s_bound,
        product_bound,
        beta_integral,
        generic,
        alpha_abs: av.norm(),
        measured_c,
        alpha_exponent,
        congruence_exponent: 3 * alpha_exponent,
        constant_note: "constant not pinned".into(),
    })
}

/// Places S compatible with the bounds: all finite places P not in Ram_f
/// dividing beta (tr W = 2 mod P), as a certificate list.
pub fn places_dividing_beta(beta_norm: &BigRational) -> Vec<u64> {
    if beta_norm.is_zero() || !beta_norm.is_integer() {
        return Vec::new();
    }
    crate::arith::prime_divisors_u64(&beta_norm.abs().to_integer().to_biguint().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::MatrixOverK;
    use crate::nfield::{make_field, rationals};
    use crate::poly::Poly;

    fn gauss_alg() -> QuaternionAlgebraData {
        let k = make_field(&Poly::from_ints(&[1, 0, 1]), 192).unwrap();
        make_algebra(&k, &[], &[]).unwrap()
    }

    #[test]
    fn parity() {
        let alg = gauss_alg();
        assert_eq!(alg.signature(), GroupSignature { a: 0, b: 1 });
        assert!(alg.is_matrix_algebra());
        let q = rationals();
        let pr = |p| PlaceRef { p, index: 0 };
        let h = make_algebra(&q, &[pr(2), pr(3)], &[0]).unwrap();
        assert_eq!(h.signature(), GroupSignature { a: 1, b: 0 });
        assert_eq!(h.disc_norm(), BigUint::from(6u32));
        assert!(matches!(make_algebra(&q, &[pr(2)], &[0]), Err(Error::Algebra(_))));
        assert!(matches!(make_algebra(&q, &[pr(2), pr(2)], &[0]), Err(Error::Algebra(_))));
        // definite algebra: no factor left to act on
        assert!(make_algebra(&q, &[pr(2)], &[]).is_err());
    }

    #[test]
    fn formula_one_bianchi() {
        let r = min_covolume(&gauss_alg(), 100_000, None).unwrap();
        assert_eq!((r.two_power, r.pi_power), (3, 2));
        // zeta_{Q(i)}(2) = zeta(2) * Catalan
        let oracle = 16.0 * (std::f64::consts::PI.powi(2) / 6.0) * 0.915_965_594_177_219 / (8.0 * std::f64::consts::PI.powi(2));
        assert!(r.base_lower <= oracle && oracle <= r.base_upper, "{r:?}");
        assert!(r.index_one_is_upper_bound);
        let k = make_field(&Poly::from_ints(&[1, 1, 1]), 192).unwrap();
        let r = min_covolume(&make_algebra(&k, &[], &[]).unwrap(), 100_000, None).unwrap();
        assert!(r.base_lower < 0.16917 && 0.16915 < r.base_upper, "{r:?}");
    }

    #[test]
    fn formula_two_multipliers() {
        let alg = gauss_alg();
        let r = max_lattice_covolume(&alg, &[PlaceRef { p: 5, index: 0 }], 1000, None).unwrap();
        assert_eq!(r.multiplier_lower, BigRational::from_integer(3.into()));
        assert_eq!(r.multiplier_upper, BigRational::from_integer(6.into()));
        let r = max_lattice_covolume(&alg, &[PlaceRef { p: 5, index: 0 }, PlaceRef { p: 13, index: 1 }], 1000, None).unwrap();
        assert_eq!(r.multiplier_lower, BigRational::from_integer(21.into()));
        assert_eq!(r.multiplier_upper, BigRational::from_integer(84.into()));
        let base = min_covolume(&alg, 1000, None).unwrap();
        assert!((r.covol_upper / base.covol_upper - 84.0).abs() < 1e-9);
    }

    #[test]
    fn ramified_prime_scales_by_norm_minus_one() {
        // Q(sqrt 5) split at both real places, ramified at the two places above 11
        let k = make_field(&Poly::from_ints(&[-1, -1, 1]), 192).unwrap();
        let a = make_algebra(&k, &[], &[0, 1]).unwrap();
        let b = make_algebra(&k, &[PlaceRef { p: 11, index: 0 }, PlaceRef { p: 11, index: 1 }], &[0, 1]).unwrap();
        let ra = min_covolume(&a, 1000, None).unwrap();
        let rb = min_covolume(&b, 1000, None).unwrap();
        assert!((rb.base_upper / ra.base_upper - 100.0).abs() < 1e-9);
        let s = [PlaceRef { p: 11, index: 0 }];
        assert!(matches!(max_lattice_covolume(&b, &s, 1000, None), Err(Error::Algebra(_))));
    }

    #[test]
    fn index_bound_examples() {
        let alg = gauss_alg();
        let k = alg.field().clone();
        let i = FieldElement::theta(&k);
        let one = FieldElement::one(&k);
        let w = GElement::new(MatrixOverK::new(&one + &i, one.clone(), i, one), alg.designation()).unwrap();
        let b = index_bounds_from_generic(&w, &alg).unwrap();
        assert_eq!(b.norm_beta, BigRational::one());
        assert_eq!((b.s_bound, b.product_bound.clone()), (0, BigRational::one()));
        assert_eq!(b.congruence_exponent, 6);

        let q = rationals();
        let alg = make_algebra(&q, &[], &[0]).unwrap();
        let w4 = GElement::new(MatrixOverK::from_ints(&q, [[3, 2], [1, 1]]), alg.designation()).unwrap();
        let b = index_bounds_from_generic(&w4, &alg).unwrap();
        assert_eq!(b.norm_beta, BigRational::from_integer(2.into()));
        assert_eq!((b.s_bound, b.product_bound), (1, BigRational::from_integer(4.into())));
        let f = MatrixOverK::from_ints(&q, [[1, 1], [1, 0]]);
        let g = GElement::new(f.mul(&f), alg.designation()).unwrap();
        let b = index_bounds_from_generic(&g, &alg).unwrap();
        assert_eq!((b.norm_beta.clone(), b.s_bound), (BigRational::one(), 0));
        assert!(b.generic);
        let t = GElement::new(MatrixOverK::from_ints(&q, [[1, 1], [0, 1]]), alg.designation()).unwrap();
        assert!(index_bounds_from_generic(&t, &alg).is_err());
    }
}
