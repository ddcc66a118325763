//! Number fields K = Q[x]/(f) with certified archimedean embeddings,
//! finite places, valuations and Dedekind zeta values at 2.

mod element;
mod places;
mod zeta;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::square_decompose;
use crate::error::{Error, Result};
use crate::factor::irreducibility_witness;
use crate::poly::Poly;
use crate::roots::RootSet;

pub use element::FieldElement;
pub use places::{archimedean_places, finite_support, places_above, product_formula_sum, valuation, Place, PlaceKind};
pub use zeta::{zeta2, ZetaValue};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 192;

/// Data of a quadratic field x^2 + b x + c with b^2 - 4c = s^2 D, D squarefree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadratic {
    pub b: BigInt,
    pub s: BigInt,
    /// Squarefree D with K = Q(sqrt D).
    pub d: BigInt,
    /// True when the ring of integers is Z[(1 + sqrt D) / 2].
    pub half_omega: bool,
}

pub struct NumberField {
    minpoly: Poly,
    degree: usize,
    roots: RootSet,
    real_places: Vec<usize>,
    complex_places: Vec<usize>,
    disc: BigInt,
    disc_exact: bool,
    quad: Option<Quadratic>,
    precision_bits: u32,
    // theta^k reduced, for k = d .. 2d-2
    reductions: Vec<Vec<BigRational>>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({})", self.minpoly)
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly
    }
}

/// Build the field defined by a monic irreducible integer polynomial.
pub fn make_field(minpoly: &Poly, precision_bits: u32) -> Result<Arc<NumberField>> {
    if minpoly.is_zero() || minpoly.degree() == 0 {
        return Err(Error::param("defining polynomial must have degree >= 1"));
    }
    if !minpoly.is_integral_monic() {
        return Err(Error::param(format!("defining polynomial {minpoly} must be monic with integer coefficients")));
    }
    let degree = minpoly.degree();
    if let Some(w) = irreducibility_witness(minpoly, precision_bits)? {
        return Err(Error::Reducible { factor: w.to_string() });
    }
    let roots = RootSet::isolate(minpoly, precision_bits)?;
    let real_places = roots.real_indices();
    let complex_places = roots.upper_indices();
    debug_assert_eq!(real_places.len() + 2 * complex_places.len(), degree);

    let (disc, disc_exact, quad) = match degree {
        1 => (BigInt::one(), true, None),
        2 => {
            let b = minpoly.coeff(1).to_integer();
            let c = minpoly.coeff(0).to_integer();
            let delta = &b * &b - BigInt::from(4) * &c;
            let (s, d) = square_decompose(&delta);
            let four = BigInt::from(4);
            let half_omega = ((&d % &four) + &four) % &four == BigInt::one();
            let disc = if half_omega { d.clone() } else { &d * 4 };
            (disc, true, Some(Quadratic { b, s, d, half_omega }))
        }
        _ => (minpoly.discriminant().to_integer().abs(), false, None),
    };

    let mut reductions = Vec::new();
    if degree >= 2 {
        // theta^d = -sum c_i theta^i
        let mut cur: Vec<BigRational> = (0..degree).map(|i| -minpoly.coeff(i)).collect();
        reductions.push(cur.clone());
        for _ in degree + 1..=2 * degree - 2 {
            let top = cur[degree - 1].clone();
            let mut next = vec![BigRational::zero(); degree];
            for i in 1..degree {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..degree {
                next[i] += &top * &reductions[0][i];
            }
            cur = next;
            reductions.push(cur.clone());
        }
    }

    Ok(Arc::new(NumberField {
        minpoly: minpoly.clone(),
        degree,
        roots,
        real_places,
        complex_places,
        disc,
        disc_exact,
        quad,
        precision_bits,
        reductions,
    }))
}

/// The rational field Q = Q[x]/(x - 1).
pub fn rationals() -> Arc<NumberField> {
    make_field(&Poly::from_ints(&[-1, 1]), DEFAULT_PRECISION).expect("Q is a field")
}

/// Q(sqrt(m)) for a squarefree integer m != 1, defined by x^2 - m.
pub fn quadratic_field(m: i64) -> Result<Arc<NumberField>> {
    make_field(&Poly::from_ints(&[-m, 0, 1]), DEFAULT_PRECISION)
}

impl NumberField {
    pub fn minpoly(&self) -> &Poly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn roots(&self) -> &RootSet {
        &self.roots
    }

    /// Root indices of the real embeddings, ascending.
    pub fn real_places(&self) -> &[usize] {
        &self.real_places
    }

    /// Root indices (upper half plane) of the complex embeddings.
    pub fn complex_places(&self) -> &[usize] {
        &self.complex_places
    }

    pub fn r1(&self) -> usize {
        self.real_places.len()
    }

    pub fn r2(&self) -> usize {
        self.complex_places.len()
    }

    /// Field discriminant (exact for degree <= 2), else |disc(minpoly)|.
    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    /// False when `disc` is only the order discriminant, which may exceed the field's.
    pub fn disc_exact(&self) -> bool {
        self.disc_exact
    }

    pub fn quadratic(&self) -> Option<&Quadratic> {
        self.quad.as_ref()
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub(crate) fn reductions(&self) -> &[Vec<BigRational>] {
        &self.reductions
    }

    pub fn same_as(&self, other: &NumberField) -> bool {
        self == other
    }

    /// Minimal polynomial coefficients as integers (low to high).
    pub fn minpoly_ints(&self) -> Vec<BigInt> {
        self.minpoly.coeffs().iter().map(|c| c.to_integer()).collect()
    }
}
