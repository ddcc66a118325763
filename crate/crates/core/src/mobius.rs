//! Elements of PGL2(R)^a x PGL2(C)^b given by matrices over a number field
//! and a choice of archimedean places: classification, eigenvalues, the
//! Lorentz-group embedding, genericity, translation lengths, displacements.

use std::cmp::Ordering;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use crate::algebraic::AlgebraicNumber;
use crate::error::{Error, Result};
use crate::matrix::{rational_block, MatrixOverK};
use crate::nfield::{FieldElement, NumberField, PlaceKind};
use crate::poly::charpoly;
use crate::roots::RootSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSignature {
    pub a: usize,
    pub b: usize,
}

/// One designated archimedean place: a root index of the field's minpoly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub kind: PlaceKind,
    pub root: usize,
}

/// The archimedean places through which k-matrices act on the symmetric
/// space: `a` chosen real places followed by all complex places.
#[derive(Clone, Debug)]
pub struct Designation {
    field: Arc<NumberField>,
    factors: Vec<Factor>,
}

impl Designation {
    pub fn new(field: &Arc<NumberField>, real_roots: &[usize]) -> Result<Self> {
        let mut factors = Vec::new();
        for &r in real_roots {
            if !field.real_places().contains(&r) {
                return Err(Error::param(format!("root {r} is not a real place of {}", field.minpoly())));
            }
            if factors.iter().any(|f: &Factor| f.root == r) {
                return Err(Error::param(format!("real place {r} listed twice")));
            }
            factors.push(Factor { kind: PlaceKind::Real, root: r });
        }
        for &r in field.complex_places() {
            factors.push(Factor { kind: PlaceKind::Complex, root: r });
        }
        if factors.is_empty() {
            return Err(Error::param("a + b must be at least 1"));
        }
        Ok(Designation { field: field.clone(), factors })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn signature(&self) -> GroupSignature {
        let a = self.factors.iter().filter(|f| f.kind == PlaceKind::Real).count();
        GroupSignature { a, b: self.factors.len() - a }
    }

    /// Dimension 3a + 4b of the Lorentz embedding.
    pub fn phi_dim(&self) -> usize {
        let s = self.signature();
        3 * s.a + 4 * s.b
    }
}

/// Factor image: a real or complex 2x2 matrix scaled to |det| = 1.
#[derive(Clone, Debug)]
pub enum Image {
    Real([f64; 4]),
    Complex([Complex64; 4]),
}

#[derive(Clone, Debug)]
pub struct GElement {
    m: MatrixOverK,
    des: Arc<Designation>,
}

impl PartialEq for GElement {
    fn eq(&self, other: &Self) -> bool {
        self.m.projectively_equal(&other.m)
    }
}

impl GElement {
    pub fn new(m: MatrixOverK, des: &Arc<Designation>) -> Result<Self> {
        if !m.field().same_as(des.field()) {
            return Err(Error::FieldMismatch(format!("matrix over {} but places of {}", m.field().minpoly(), des.field().minpoly())));
        }
        if m.det().is_zero() {
            return Err(Error::Singular);
        }
        Ok(GElement { m, des: des.clone() })
    }

    pub fn identity(des: &Arc<Designation>) -> Self {
        GElement { m: MatrixOverK::identity(des.field()), des: des.clone() }
    }

    pub fn matrix(&self) -> &MatrixOverK {
        &self.m
    }

    pub fn designation(&self) -> &Arc<Designation> {
        &self.des
    }

    pub fn mul(&self, o: &GElement) -> GElement {
        GElement { m: self.m.mul(&o.m), des: self.des.clone() }
    }

    pub fn inv(&self) -> GElement {
        // the adjugate is the inverse in PGL2
        GElement { m: self.m.adjugate(), des: self.des.clone() }
    }

    pub fn is_identity(&self) -> bool {
        self.m.is_scalar()
    }

    /// tr^2 / det, the projective invariant (s^2 where s = tr/sqrt(det)).
    pub fn s2(&self) -> FieldElement {
        let t = self.m.trace();
        &(&t * &t) * &self.m.det().inv().expect("nonsingular")
    }

    /// s = tr/sqrt(det) when det is a square in k.
    pub fn s_exact(&self) -> Result<Option<FieldElement>> {
        Ok(self.m.det().sqrt()?.map(|r| &self.m.trace() * &r.inv().expect("nonzero")))
    }

    pub fn image(&self, f: usize) -> Image {
        let fac = self.des.factors[f];
        let e = self.m.embed(fac.root);
        let det = e[0] * e[3] - e[1] * e[2];
        match fac.kind {
            PlaceKind::Real => {
                let k = det.re.abs().sqrt();
                Image::Real([e[0].re / k, e[1].re / k, e[2].re / k, e[3].re / k])
            }
            _ => {
                let k = det.sqrt();
                Image::Complex([e[0] / k, e[1] / k, e[2] / k, e[3] / k])
            }
        }
    }

    pub fn images(&self) -> Vec<Image> {
        (0..self.des.factors.len()).map(|f| self.image(f)).collect()
    }

    /// s = tr/sqrt(det) at factor f (sign ambiguous).
    pub fn s_at(&self, f: usize) -> Complex64 {
        let e = self.m.embed(self.des.factors[f].root);
        let det = e[0] * e[3] - e[1] * e[2];
        (e[0] + e[3]) / det.sqrt()
    }

    /// Eigenvalue at factor f of the det-normalized lift, with |lambda| >= 1.
    pub fn lambda_at(&self, f: usize) -> Complex64 {
        big_root(self.s_at(f))
    }
}

/// Root of x^2 - s x + 1 of modulus >= 1.
fn big_root(s: Complex64) -> Complex64 {
    let disc = (s * s - 4.0).sqrt();
    let l1 = (s + disc) / 2.0;
    let l2 = (s - disc) / 2.0;
    if l1.norm() >= l2.norm() {
        l1
    } else {
        l2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElementType {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
    Loxodromic,
    OrientationReversing,
}

/// Whether x is real at root `root` of its field, decided exactly.
pub fn real_at(x: &FieldElement, root: usize) -> Result<bool> {
    let field = x.field();
    if field.roots().is_real(root) || x.as_rational().is_some() {
        return Ok(true);
    }
    let mp = x.minpoly();
    let rs = RootSet::isolate(&mp, field.precision_bits())?;
    let (z, r) = x.embed(root);
    let i = rs
        .locate(z, r)
        .ok_or_else(|| Error::Indeterminate(format!("cannot locate the image of {x} among the roots of {mp}")))?;
    Ok(rs.is_real(i))
}

/// Sign of a real value x at root `root`; x must be real there.
pub fn sign_at(x: &FieldElement, root: usize) -> Result<Ordering> {
    if let Some(q) = x.as_rational() {
        return Ok(q.cmp(&BigRational::from_integer(0.into())));
    }
    if x.is_zero() {
        return Ok(Ordering::Equal);
    }
    let (z, r) = x.embed(root);
    let slack = r + z.norm() * 4e-16;
    if z.re > slack {
        Ok(Ordering::Greater)
    } else if z.re < -slack {
        Ok(Ordering::Less)
    } else {
        Err(Error::Indeterminate(format!("sign of {x} at root {root}")))
    }
}

/// Trace classification on the det-normalized lift at factor f.
pub fn classify(g: &GElement, f: usize) -> Result<ElementType> {
    let fac = *g
        .des
        .factors
        .get(f)
        .ok_or_else(|| Error::param(format!("factor {f} out of range")))?;
    if g.is_identity() {
        return Ok(ElementType::Identity);
    }
    let field = g.des.field();
    if fac.kind == PlaceKind::Real && sign_at(&g.m.det(), fac.root)? == Ordering::Less {
        return Ok(ElementType::OrientationReversing);
    }
    let s2 = g.s2();
    let four = FieldElement::from_int(field, 4);
    if s2 == four {
        return Ok(ElementType::Parabolic);
    }
    if !real_at(&s2, fac.root)? {
        return Ok(ElementType::Loxodromic);
    }
    if sign_at(&s2, fac.root)? == Ordering::Less {
        // only possible at a complex place: tr purely imaginary
        return Ok(ElementType::Loxodromic);
    }
    Ok(match sign_at(&(&s2 - &four), fac.root)? {
        Ordering::Less => ElementType::Elliptic,
        _ => ElementType::Hyperbolic,
    })
}

/// N_{k/Q}(x^4 - (s^2 - 2) x^2 + 1): every eigenvalue +-lambda^{+-1} of
/// every conjugate of the det-normalized lift is a root.
fn eigen_norm_poly(g: &GElement) -> crate::poly::Poly {
    let field = g.des.field();
    let zero = FieldElement::zero(field);
    let one = FieldElement::one(field);
    let c2 = &g.s2() - &FieldElement::from_int(field, 2);
    // companion matrix of x^4 + 0 x^3 - c2 x^2 + 0 x + 1
    let mut m = vec![vec![zero.clone(); 4]; 4];
    for i in 1..4 {
        m[i][i - 1] = one.clone();
    }
    m[0][3] = -&one;
    m[2][3] = c2;
    charpoly(&rational_block(&m))
}

/// Sign convention: Re >= 0, ties broken by Im > 0.
fn normalize_sign(z: Complex64) -> Complex64 {
    let tol = 1e-12 * z.norm().max(1.0);
    if z.re < -tol || (z.re.abs() <= tol && z.im < 0.0) {
        -z
    } else {
        z
    }
}

/// The eigenvalue alpha at the first designated factor, |alpha| >= 1,
/// Re(alpha) >= 0, as an exact algebraic number.
pub fn eigenvalue(g: &GElement) -> Result<AlgebraicNumber> {
    if g.is_identity() {
        return Err(Error::DegenerateEigenvalue("identity".into()));
    }
    let field = g.des.field();
    if g.s2() == FieldElement::from_int(field, 4) {
        return Err(Error::DegenerateEigenvalue("parabolic element (tr^2 = 4 det)".into()));
    }
    let mut lam = normalize_sign(g.lambda_at(0));
    let s = g.s_at(0);
    if (lam.norm() - 1.0).abs() < 1e-12 {
        // both eigenvalues on the unit circle: take the one in the upper half plane
        let other = normalize_sign(big_root(-s).inv());
        let cands = [lam, normalize_sign(lam.inv()), other];
        lam = cands.iter().cloned().fold(lam, |a, b| if b.im > a.im { b } else { a });
    }
    AlgebraicNumber::identify(&eigen_norm_poly(g), lam, field.precision_bits())
}

/// The exact eigenvalue at factor f (in whichever normalization the
/// embedding gives), used for the exact fixed-point test of Phi.
fn eigenvalue_at(g: &GElement, f: usize) -> Result<AlgebraicNumber> {
    let field = g.des.field();
    AlgebraicNumber::identify(&eigen_norm_poly(g), g.lambda_at(f), field.precision_bits())
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiEmbedding {
    /// One 3x3 (real factor) or 4x4 (complex factor) block per factor, row-major.
    pub blocks: Vec<Vec<Vec<f64>>>,
    /// max |Phi^T J Phi - J| over all blocks.
    pub lorentz_residual: f64,
}

impl PhiEmbedding {
    /// Block-diagonal matrix of size 3a + 4b.
    pub fn full(&self) -> DMatrix<f64> {
        let n: usize = self.blocks.iter().map(|b| b.len()).sum();
        let mut out = DMatrix::zeros(n, n);
        let mut off = 0;
        for b in &self.blocks {
            for (i, row) in b.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    out[(off + i, off + j)] = *v;
                }
            }
            off += b.len();
        }
        out
    }
}

fn lorentz(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::identity(n, n) * -1.0;
    j[(0, 0)] = 1.0;
    j
}

/// gXg^T on X = [[t+x, y], [y, t-x]].
fn phi_real(g: &[f64; 4]) -> DMatrix<f64> {
    let basis = [[1.0, 0.0, 0.0, 1.0], [1.0, 0.0, 0.0, -1.0], [0.0, 1.0, 1.0, 0.0]];
    let mut m = DMatrix::zeros(3, 3);
    for (j, x) in basis.iter().enumerate() {
        // g X
        let gx = [g[0] * x[0] + g[1] * x[2], g[0] * x[1] + g[1] * x[3], g[2] * x[0] + g[3] * x[2], g[2] * x[1] + g[3] * x[3]];
        // (g X) g^T
        let y = [
            gx[0] * g[0] + gx[1] * g[1],
            gx[0] * g[2] + gx[1] * g[3],
            gx[2] * g[0] + gx[3] * g[1],
            gx[2] * g[2] + gx[3] * g[3],
        ];
        m[(0, j)] = (y[0] + y[3]) / 2.0;
        m[(1, j)] = (y[0] - y[3]) / 2.0;
        m[(2, j)] = y[1];
    }
    m
}

/// gXg* on X = [[t+z, x+iy], [x-iy, t-z]], coordinates (t, x, y, z).
fn phi_complex(g: &[Complex64; 4]) -> DMatrix<f64> {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let basis = [[l, o, o, l], [o, l, l, o], [o, i, -i, o], [l, o, o, -l]];
    let mut m = DMatrix::zeros(4, 4);
    for (j, x) in basis.iter().enumerate() {
        let gx = [g[0] * x[0] + g[1] * x[2], g[0] * x[1] + g[1] * x[3], g[2] * x[0] + g[3] * x[2], g[2] * x[1] + g[3] * x[3]];
        let h = [g[0].conj(), g[2].conj(), g[1].conj(), g[3].conj()];
        let y = [
            gx[0] * h[0] + gx[1] * h[2],
            gx[0] * h[1] + gx[1] * h[3],
            gx[2] * h[0] + gx[3] * h[2],
            gx[2] * h[1] + gx[3] * h[3],
        ];
        m[(0, j)] = (y[0] + y[3]).re / 2.0;
        m[(1, j)] = y[1].re;
        m[(2, j)] = y[1].im;
        m[(3, j)] = (y[0] - y[3]).re / 2.0;
    }
    m
}

pub fn phi_block(img: &Image) -> DMatrix<f64> {
    match img {
        Image::Real(g) => phi_real(g),
        Image::Complex(g) => phi_complex(g),
    }
}

/// The embedding into SO(2,1)^a x SO(3,1)^b.
pub fn phi_embed(g: &GElement) -> PhiEmbedding {
    let mut blocks = Vec::new();
    let mut residual = 0.0f64;
    for img in g.images() {
        let m = phi_block(&img);
        let j = lorentz(m.nrows());
        let r = (m.transpose() * &j * &m - &j).amax();
        residual = residual.max(r);
        blocks.push((0..m.nrows()).map(|i| (0..m.ncols()).map(|k| m[(i, k)]).collect()).collect());
    }
    PhiEmbedding { blocks, lorentz_residual: residual }
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorCheck {
    pub factor: usize,
    pub kind: PlaceKind,
    pub trace_class: ElementType,
    /// Complex factors: det(Phi - I) = 0, decided exactly from the eigenvalue.
    pub phi_has_fixed_vector: Option<bool>,
    /// Numerical det(Phi - I) of the block.
    pub det_phi_minus_id: f64,
    /// Real factors: sign of the Lorentz norm of the fixed vector of Phi.
    pub fixed_vector_sign: Option<i8>,
    /// Residual |Phi v - v| / |v| of that fixed vector.
    pub fixed_vector_residual: Option<f64>,
    pub agree: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenericityVerdict {
    pub factors: Vec<FactorCheck>,
    pub types_ok: bool,
    pub criteria_agree: bool,
    /// s = tr/sqrt(det) lies in k.
    pub s_in_k: bool,
    pub trace_field_degree: Option<usize>,
    pub field_degree: usize,
    pub generic: bool,
}

fn check_factor(g: &GElement, f: usize) -> Result<FactorCheck> {
    let fac = g.des.factors[f];
    let class = classify(g, f)?;
    let img = g.image(f);
    let phi = phi_block(&img);
    let n = phi.nrows();
    let det_pm = (&phi - DMatrix::identity(n, n)).determinant();
    let mut out = FactorCheck {
        factor: f,
        kind: fac.kind,
        trace_class: class,
        phi_has_fixed_vector: None,
        det_phi_minus_id: det_pm,
        fixed_vector_sign: None,
        fixed_vector_residual: None,
        agree: true,
        ok: false,
    };
    match fac.kind {
        PlaceKind::Real => {
            out.ok = class == ElementType::Hyperbolic;
            if class == ElementType::OrientationReversing {
                out.agree = true;
                return Ok(out);
            }
            // Fixed vector of X -> gXg^T: X = (g - tr/2) E, Lorentz norm det X = (4 det - tr^2)/4
            let [a, b, c, d] = &g.m.e;
            let x_t = (c - b).scale(&BigRational::new(1.into(), 2.into()));
            let x_x = (&(-b) - c).scale(&BigRational::new(1.into(), 2.into()));
            let x_y = (a - d).scale(&BigRational::new(1.into(), 2.into()));
            let t = g.m.trace();
            let q = (&g.m.det().scale(&BigRational::from_integer(4.into())) - &(&t * &t)).scale(&BigRational::new(1.into(), 4.into()));
            let sign = if q.is_zero() {
                0
            } else {
                match sign_at(&q, fac.root)? {
                    Ordering::Less => -1,
                    Ordering::Equal => 0,
                    Ordering::Greater => 1,
                }
            };
            out.fixed_vector_sign = Some(sign);
            if !(x_t.is_zero() && x_x.is_zero() && x_y.is_zero()) {
                let v = nalgebra::DVector::from_vec(vec![
                    x_t.embed_c64(fac.root).re,
                    x_x.embed_c64(fac.root).re,
                    x_y.embed_c64(fac.root).re,
                ]);
                out.fixed_vector_residual = Some((&phi * &v - &v).norm() / v.norm());
            }
            let expected = match class {
                ElementType::Hyperbolic => -1,
                ElementType::Elliptic => 1,
                _ => 0,
            };
            out.agree = sign == expected;
        }
        _ => {
            out.ok = class == ElementType::Loxodromic;
            // eigenvalues of the block: |l|^2, |l|^-2, l/conj(l), conj(l)/l
            let fixed = match class {
                ElementType::Identity | ElementType::Parabolic => true,
                _ => {
                    let lam = eigenvalue_at(g, f)?;
                    let unit = lam
                        .abs_cmp_one()
                        .ok_or_else(|| Error::Indeterminate(format!("|lambda| vs 1 at factor {f}")))?;
                    unit == Ordering::Equal || lam.is_real()
                }
            };
            out.phi_has_fixed_vector = Some(fixed);
            out.agree = fixed != (class == ElementType::Loxodromic);
        }
    }
    Ok(out)
}

/// Genericity: every real factor hyperbolic, every complex factor
/// loxodromic (checked by the trace and by the Lorentz embedding), and the
/// trace of the SL2 lift generates k.
pub fn is_generic(w: &GElement) -> Result<GenericityVerdict> {
    let nf = w.des.factors.len();
    let factors = (0..nf).map(|f| check_factor(w, f)).collect::<Result<Vec<_>>>()?;
    let types_ok = factors.iter().all(|c| c.ok);
    let criteria_agree = factors.iter().all(|c| c.agree);
    let field_degree = w.des.field().degree();
    let s = if w.is_identity() { None } else { w.s_exact()? };
    let trace_field_degree = s.as_ref().map(|s| s.degree_over_q());
    let generic = types_ok && criteria_agree && trace_field_degree == Some(field_degree);
    Ok(GenericityVerdict { factors, types_ok, criteria_agree, s_in_k: s.is_some(), trace_field_degree, field_degree, generic })
}

#[derive(Clone, Debug, Serialize)]
pub struct TranslationLength {
    pub per_factor: Vec<f64>,
    pub parabolic: Vec<bool>,
    pub total: f64,
    /// (1/sqrt n) sum_v l_v with n the number of factors.
    pub cauchy_schwarz_bound: f64,
}

/// l_v = 2 log+ |lambda_v| + 2 log+ |1/lambda_v| and l = sqrt(sum l_v^2).
pub fn translation_length(g: &GElement) -> Result<TranslationLength> {
    let n = g.des.factors.len();
    let mut per_factor = Vec::with_capacity(n);
    let mut parabolic = Vec::with_capacity(n);
    for f in 0..n {
        let c = classify(g, f)?;
        let is_par = c == ElementType::Parabolic;
        parabolic.push(is_par);
        let l = match c {
            ElementType::Identity | ElementType::Parabolic | ElementType::Elliptic => 0.0,
            _ => 2.0 * g.lambda_at(f).norm().ln().abs(),
        };
        per_factor.push(l);
    }
    let total = per_factor.iter().map(|l| l * l).sum::<f64>().sqrt();
    let cs = per_factor.iter().sum::<f64>() / (n as f64).sqrt();
    Ok(TranslationLength { per_factor, parabolic, total, cauchy_schwarz_bound: cs })
}

/// A point of (H^2)^a x (H^3)^b: (x, y) in the upper half plane for real
/// factors, (z, t) in the upper half space for complex ones.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasePoint {
    pub h2: Vec<(f64, f64)>,
    pub h3: Vec<([f64; 2], f64)>,
}

impl BasePoint {
    /// (i, ..., i, j, ..., j).
    pub fn center(sig: GroupSignature) -> Self {
        BasePoint { h2: vec![(0.0, 1.0); sig.a], h3: vec![([0.0, 0.0], 1.0); sig.b] }
    }

    pub fn validate(&self, sig: GroupSignature) -> Result<()> {
        if self.h2.len() != sig.a || self.h3.len() != sig.b {
            return Err(Error::param(format!("base point has {}+{} coordinates, signature is ({}, {})", self.h2.len(), self.h3.len(), sig.a, sig.b)));
        }
        if self.h2.iter().any(|p| !(p.1 > 0.0)) || self.h3.iter().any(|p| !(p.1 > 0.0)) {
            return Err(Error::param("base point heights must be positive"));
        }
        Ok(())
    }
}

pub fn dist_h2(z: Complex64, w: Complex64) -> f64 {
    2.0 * ((z - w).norm() / (2.0 * (z.im * w.im).sqrt())).asinh()
}

pub fn dist_h3(z: Complex64, t: f64, w: Complex64, s: f64) -> f64 {
    let num = ((z - w).norm_sqr() + (t - s) * (t - s)).sqrt();
    2.0 * (num / (2.0 * (t * s).sqrt())).asinh()
}

/// Image of z under a real matrix with det = +-1 (det -1 acts through conj z).
pub fn act_h2(g: &[f64; 4], z: Complex64) -> Complex64 {
    let det = g[0] * g[3] - g[1] * g[2];
    let z = if det < 0.0 { z.conj() } else { z };
    (z * g[0] + g[1]) / (z * g[2] + g[3])
}

/// Image of z + t j under a complex matrix with det 1.
pub fn act_h3(g: &[Complex64; 4], z: Complex64, t: f64) -> (Complex64, f64) {
    let [a, b, c, d] = *g;
    let czd = c * z + d;
    let den = czd.norm_sqr() + c.norm_sqr() * t * t;
    let z2 = ((a * z + b) * czd.conj() + a * c.conj() * t * t) / den;
    (z2, t / den)
}

/// d(x, g x) = sqrt(sum of squared factor distances).
pub fn displacement(g: &GElement, x: &BasePoint) -> Result<f64> {
    x.validate(g.des.signature())?;
    let (mut i2, mut i3) = (0, 0);
    let mut total = 0.0;
    for img in g.images() {
        let d = match img {
            Image::Real(m) => {
                let (px, py) = x.h2[i2];
                i2 += 1;
                let z = Complex64::new(px, py);
                dist_h2(z, act_h2(&m, z))
            }
            Image::Complex(m) => {
                let (pz, t) = x.h3[i3];
                i3 += 1;
                let z = Complex64::new(pz[0], pz[1]);
                let (z2, t2) = act_h3(&m, z, t);
                dist_h3(z, t, z2, t2)
            }
        };
        total += d * d;
    }
    Ok(total.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfield::{make_field, rationals};
    use crate::poly::Poly;

    fn gauss() -> (Arc<NumberField>, Arc<Designation>) {
        let k = make_field(&Poly::from_ints(&[1, 0, 1]), 192).unwrap();
        let des = Arc::new(Designation::new(&k, &[]).unwrap());
        (k, des)
    }

    fn real_q() -> (Arc<NumberField>, Arc<Designation>) {
        let k = rationals();
        let des = Arc::new(Designation::new(&k, &[0]).unwrap());
        (k, des)
    }

    fn lox(k: &Arc<NumberField>, des: &Arc<Designation>) -> GElement {
        let i = FieldElement::theta(k);
        let one = FieldElement::one(k);
        GElement::new(MatrixOverK::new(&one + &i, one.clone(), i, one), des).unwrap()
    }

    #[test]
    fn classification_examples() {
        let (k, des) = gauss();
        assert_eq!(classify(&GElement::identity(&des), 0).unwrap(), ElementType::Identity);
        let t = GElement::new(MatrixOverK::from_ints(&k, [[1, 1], [0, 1]]), &des).unwrap();
        assert_eq!(classify(&t, 0).unwrap(), ElementType::Parabolic);
        assert_eq!(classify(&lox(&k, &des), 0).unwrap(), ElementType::Loxodromic);
        let s = GElement::new(MatrixOverK::from_ints(&k, [[0, -1], [1, 0]]), &des).unwrap();
        assert_eq!(classify(&s, 0).unwrap(), ElementType::Elliptic);
        let (q, rdes) = real_q();
        let h = GElement::new(MatrixOverK::from_ints(&q, [[2, 1], [1, 1]]), &rdes).unwrap();
        assert_eq!(classify(&h, 0).unwrap(), ElementType::Hyperbolic);
        let r = GElement::new(MatrixOverK::from_ints(&q, [[1, 0], [0, -1]]), &rdes).unwrap();
        assert_eq!(classify(&r, 0).unwrap(), ElementType::OrientationReversing);
    }

    #[test]
    fn eigenvalue_examples() {
        let (q, rdes) = real_q();
        let half = BigRational::new(1.into(), 2.into());
        let zero = BigRational::from_integer(0.into());
        let two = BigRational::from_integer(2.into());
        let d = GElement::new(MatrixOverK::from_rationals(&q, [[two, zero.clone()], [zero, half]]), &rdes).unwrap();
        assert_eq!(*eigenvalue(&d).unwrap().minpoly(), Poly::from_ints(&[-2, 1]));
        let f = MatrixOverK::from_ints(&q, [[1, 1], [1, 0]]);
        let f2 = GElement::new(f.mul(&f), &rdes).unwrap();
        assert_eq!(*eigenvalue(&f2).unwrap().minpoly(), Poly::from_ints(&[1, -3, 1]));
        let (k, des) = gauss();
        let a = eigenvalue(&lox(&k, &des)).unwrap();
        assert_eq!(a.degree(), 4);
        let v = a.value();
        assert!(((v + v.inv()) - Complex64::new(2.0, 1.0)).norm() < 1e-12);
        assert!(v.norm() >= 1.0 && v.re >= 0.0);
        let t = GElement::new(MatrixOverK::from_ints(&k, [[1, 1], [0, 1]]), &des).unwrap();
        assert!(matches!(eigenvalue(&t), Err(Error::DegenerateEigenvalue(_))));
    }

    #[test]
    fn phi_examples() {
        let (q, rdes) = real_q();
        let e = phi_embed(&GElement::identity(&rdes));
        assert!((e.full() - DMatrix::identity(3, 3)).amax() < 1e-15);
        let half = BigRational::new(1.into(), 2.into());
        let zero = BigRational::from_integer(0.into());
        let two = BigRational::from_integer(2.into());
        let d = GElement::new(MatrixOverK::from_rationals(&q, [[two, zero.clone()], [zero, half]]), &rdes).unwrap();
        let m = phi_embed(&d).full();
        let mut ev: Vec<f64> = m.complex_eigenvalues().iter().map(|z| z.re).collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ev[0] - 0.25).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12 && (ev[2] - 4.0).abs() < 1e-12);
        let (k, des) = gauss();
        let t = GElement::new(MatrixOverK::from_ints(&k, [[1, 1], [0, 1]]), &des).unwrap();
        let m = phi_embed(&t).full();
        // unipotent: (Phi - I)^3 = 0
        let n = &m - DMatrix::identity(4, 4);
        assert!((&n * &n * &n).amax() < 1e-12);
        let l = phi_embed(&lox(&k, &des));
        assert!(l.lorentz_residual < 1e-12);
        assert!((l.full().determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn genericity_examples() {
        let (k, des) = gauss();
        let t = GElement::new(MatrixOverK::from_ints(&k, [[1, 1], [0, 1]]), &des).unwrap();
        assert!(!is_generic(&t).unwrap().generic);
        let s = GElement::new(MatrixOverK::from_ints(&k, [[0, -1], [1, 0]]), &des).unwrap();
        let v = is_generic(&s).unwrap();
        assert!(!v.generic && v.criteria_agree);
        let w = lox(&k, &des);
        let w2 = w.mul(&w);
        let v = is_generic(&w2).unwrap();
        assert!(v.generic, "{v:?}");
        assert_eq!(v.trace_field_degree, Some(2));
        // tr = 2 + i^2 ... an element with rational trace is loxodromic but not generic
        let h = GElement::new(MatrixOverK::from_ints(&k, [[2, 1], [1, 1]]), &des).unwrap();
        let v = is_generic(&h).unwrap();
        assert_eq!(v.factors[0].trace_class, ElementType::Hyperbolic);
        assert!(v.criteria_agree && !v.generic);
    }

    #[test]
    fn real_fixed_vector_criterion() {
        let (q, rdes) = real_q();
        for (m, sign) in [([[2, 1], [1, 1]], -1i8), ([[0, -1], [1, 0]], 1), ([[1, 1], [0, 1]], 0)] {
            let g = GElement::new(MatrixOverK::from_ints(&q, m), &rdes).unwrap();
            let c = &is_generic(&g).unwrap().factors[0];
            assert_eq!(c.fixed_vector_sign, Some(sign));
            assert!(c.agree);
            assert!(c.fixed_vector_residual.unwrap() < 1e-12);
        }
    }

    #[test]
    fn lengths_and_displacement() {
        let (q, rdes) = real_q();
        let half = BigRational::new(1.into(), 2.into());
        let zero = BigRational::from_integer(0.into());
        let two = BigRational::from_integer(2.into());
        let d = GElement::new(MatrixOverK::from_rationals(&q, [[two, zero.clone()], [zero, half]]), &rdes).unwrap();
        let tl = translation_length(&d).unwrap();
        assert!((tl.total - 4f64.ln()).abs() < 1e-12);
        let x = BasePoint::center(rdes.signature());
        assert!((displacement(&d, &x).unwrap() - 4f64.ln()).abs() < 1e-12);
        assert_eq!(displacement(&GElement::identity(&rdes), &x).unwrap(), 0.0);
        let (k, des) = gauss();
        let t = GElement::new(MatrixOverK::from_ints(&k, [[1, 1], [0, 1]]), &des).unwrap();
        let d1 = displacement(&t, &BasePoint::center(des.signature())).unwrap();
        assert!((d1 - 1.5f64.acosh()).abs() < 1e-12);
        let mut prev = d1;
        for h in [2.0, 4.0, 8.0] {
            let x = BasePoint { h2: vec![], h3: vec![([0.0, 0.0], h)] };
            let dh = displacement(&t, &x).unwrap();
            assert!(dh < prev);
            prev = dh;
        }
        let tl = translation_length(&t).unwrap();
        assert_eq!(tl.per_factor, vec![0.0]);
        assert!(tl.parabolic[0]);
    }
}
