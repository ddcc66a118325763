//! End-to-end harnesses: the height-gap check over explicit lattices, the
//! Margulis-lemma scan, and the Bianchi catalog.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_squarefree, rat_to_f64};
use crate::error::{Error, Result};
use crate::generic::{search_generic, SearchMode, SearchOptions, Word};
use crate::heights::{nheight_bounds, NHeightOptions};
use crate::matrix::MatrixOverK;
use crate::mobius::{classify, displacement, is_generic, real_at, BasePoint, ElementType, GElement, Image};
use crate::nfield::{make_field, FieldElement, DEFAULT_PRECISION};
use crate::poly::Poly;
use crate::qalg::{index_bounds_from_generic, make_algebra, max_lattice_covolume, IndexBounds, LatticeSpec};

/// PSL2 of the integers of Q(sqrt -D) with generators T, T_omega, S.
pub fn bianchi_catalog(ds: &[u64]) -> Result<Vec<LatticeSpec>> {
    ds.iter().map(|&d| bianchi(d)).collect()
}

pub fn bianchi(d: u64) -> Result<LatticeSpec> {
    bianchi_at(d, DEFAULT_PRECISION)
}

pub fn bianchi_at(d: u64, precision_bits: u32) -> Result<LatticeSpec> {
    if d == 0 || !is_squarefree(&BigInt::from(d)) {
        return Err(Error::param(format!("D = {d} is not a squarefree positive integer")));
    }
    let k = make_field(&Poly::from_ints(&[d as i64, 0, 1]), precision_bits)?;
    let theta = FieldElement::theta(&k);
    let one = FieldElement::one(&k);
    let zero = FieldElement::zero(&k);
    let omega = if d % 4 == 3 {
        (&one + &theta).scale(&BigRational::new(1.into(), 2.into()))
    } else {
        theta
    };
    let alg = make_algebra(&k, &[], &[])?;
    let des = alg.designation().clone();
    let gens = vec![
        GElement::new(MatrixOverK::from_ints(&k, [[1, 1], [0, 1]]), &des)?,
        GElement::new(MatrixOverK::new(one.clone(), omega, zero, one), &des)?,
        GElement::new(MatrixOverK::from_ints(&k, [[0, -1], [1, 0]]), &des)?,
    ];
    LatticeSpec::new(format!("bianchi-{d}"), alg, vec![], gens, None)
}

// ---- structural classification ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupClass {
    Trivial,
    FiniteEvidence,
    VirtuallyAbelianEvidence,
    RealTrace,
    Inconclusive,
    DenseEvidence,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructuralCertificate {
    pub class: GroupClass,
    pub detail: String,
    /// Two loxodromic elements with tr[W, V] != 2 (as words), when found.
    pub non_commuting_pair: Option<(String, String)>,
}

/// Point of the boundary of one factor; None is infinity.
type BPoint = Option<Complex64>;

fn image_entries(img: &Image) -> [Complex64; 4] {
    match img {
        Image::Real(m) => [m[0], m[1], m[2], m[3]].map(|x| Complex64::new(x, 0.0)),
        Image::Complex(m) => *m,
    }
}

const TOL: f64 = 1e-9;

fn apply(m: &[Complex64; 4], p: BPoint) -> BPoint {
    let [a, b, c, d] = *m;
    match p {
        None => {
            if c.norm() <= TOL * a.norm().max(1.0) {
                None
            } else {
                Some(a / c)
            }
        }
        Some(z) => {
            let den = c * z + d;
            if den.norm() <= TOL * (a * z + b).norm().max(1.0) {
                None
            } else {
                Some((a * z + b) / den)
            }
        }
    }
}

fn same_point(p: BPoint, q: BPoint) -> bool {
    match (p, q) {
        (None, None) => true,
        (Some(a), Some(b)) => (a - b).norm() <= 1e-7 * (1.0 + a.norm()),
        _ => false,
    }
}

/// Boundary fixed points of a non-identity element at factor f.
fn fixed_points(g: &GElement, f: usize) -> Vec<BPoint> {
    let m = image_entries(&g.image(f));
    let [a, b, c, d] = m;
    if g.matrix().e[2].is_zero() {
        let mut out = vec![None];
        if !(&g.matrix().e[0] - &g.matrix().e[3]).is_zero() {
            out.push(Some(b / (d - a)));
        }
        return out;
    }
    // c z^2 + (d - a) z - b = 0
    let disc = ((d - a) * (d - a) + 4.0 * b * c).sqrt();
    let z1 = (a - d + disc) / (2.0 * c);
    let z2 = (a - d - disc) / (2.0 * c);
    if (z1 - z2).norm() <= 1e-7 * (1.0 + z1.norm()) {
        vec![Some(z1)]
    } else {
        vec![Some(z1), Some(z2)]
    }
}

fn fully_loxodromic(g: &GElement) -> bool {
    let n = g.designation().factors().len();
    (0..n).all(|f| matches!(classify(g, f), Ok(ElementType::Hyperbolic) | Ok(ElementType::Loxodromic)))
}

fn commute_projectively(g: &GElement, h: &GElement) -> bool {
    let c = g.mul(h).mul(&g.inv()).mul(&h.inv());
    c.is_identity() || c.s2() == FieldElement::from_int(c.matrix().field(), 4)
}

/// Classify the group generated by `elems` by the lowest certificate that holds:
/// trivial < finite (all fix x) < virtually abelian (common boundary fixed
/// point or invariant pair in every factor) < real trace (tr^2/det real for
/// the elements and their pairwise products) < inconclusive < dense (two
/// loxodromics with tr[W, V] != 2).
pub fn classify_set(elems: &[(Word, GElement)], x: &BasePoint) -> Result<StructuralCertificate> {
    let nontriv: Vec<&(Word, GElement)> = elems.iter().filter(|(_, g)| !g.is_identity()).collect();
    if nontriv.is_empty() {
        return Ok(StructuralCertificate { class: GroupClass::Trivial, detail: "all elements are the identity".into(), non_commuting_pair: None });
    }
    let mut all_fix = true;
    for (_, g) in &nontriv {
        if displacement(g, x)? > TOL {
            all_fix = false;
            break;
        }
    }
    if all_fix {
        return Ok(StructuralCertificate {
            class: GroupClass::FiniteEvidence,
            detail: format!("{} elements all fix the base point", nontriv.len()),
            non_commuting_pair: None,
        });
    }
    let nf = nontriv[0].1.designation().factors().len();
    let mut va = true;
    let mut details = Vec::new();
    for f in 0..nf {
        let imgs: Vec<[Complex64; 4]> = nontriv.iter().map(|(_, g)| image_entries(&g.image(f))).collect();
        let fps: Vec<Vec<BPoint>> = nontriv.iter().map(|(_, g)| fixed_points(g, f)).collect();
        let common = fps.iter().flatten().find(|p| imgs.iter().all(|m| same_point(apply(m, **p), **p)));
        if let Some(p) = common {
            details.push(format!("factor {f}: common fixed point {}", fmt_point(*p)));
            continue;
        }
        let pair = fps.iter().filter(|v| v.len() == 2).find(|v| {
            imgs.iter().all(|m| {
                let (p, q) = (v[0], v[1]);
                let (mp, mq) = (apply(m, p), apply(m, q));
                (same_point(mp, p) && same_point(mq, q)) || (same_point(mp, q) && same_point(mq, p))
            })
        });
        match pair {
            Some(v) => details.push(format!("factor {f}: invariant pair {{{}, {}}}", fmt_point(v[0]), fmt_point(v[1]))),
            None => {
                va = false;
                break;
            }
        }
    }
    if va {
        return Ok(StructuralCertificate { class: GroupClass::VirtuallyAbelianEvidence, detail: details.join("; "), non_commuting_pair: None });
    }
    // real traces on the elements and pairwise products
    let mut real = true;
    'outer: for (i, (_, g)) in nontriv.iter().enumerate() {
        for (j, (_, h)) in nontriv.iter().enumerate().skip(i) {
            let p = if i == j { g.clone() } else { g.mul(h) };
            let s2 = p.s2();
            for fac in p.designation().factors() {
                if !real_at(&s2, fac.root)? {
                    real = false;
                    break 'outer;
                }
            }
        }
    }
    // non-commuting loxodromics among the elements, then pairwise products
    let mut lox: Vec<(String, GElement)> = nontriv.iter().filter(|(_, g)| fully_loxodromic(g)).map(|(w, g)| (w.to_string(), g.clone())).collect();
    let mut pair = find_pair(&lox);
    if pair.is_none() {
        'prod: for (i, (wi, g)) in nontriv.iter().enumerate() {
            for (wj, h) in nontriv.iter().skip(i) {
                let p = g.mul(h);
                if fully_loxodromic(&p) {
                    lox.push((format!("{wi}.{wj}"), p));
                    pair = find_pair(&lox);
                    if pair.is_some() {
                        break 'prod;
                    }
                }
            }
        }
    }
    if real {
        return Ok(StructuralCertificate {
            class: GroupClass::RealTrace,
            detail: "tr^2/det is real at every designated place for all elements and pairwise products".into(),
            non_commuting_pair: pair,
        });
    }
    Ok(match pair {
        Some(p) => StructuralCertificate {
            class: GroupClass::DenseEvidence,
            detail: "two loxodromic elements without a common fixed point and non-real traces".into(),
            non_commuting_pair: Some(p),
        },
        None => StructuralCertificate { class: GroupClass::Inconclusive, detail: "no certificate applies".into(), non_commuting_pair: None },
    })
}

fn find_pair(lox: &[(String, GElement)]) -> Option<(String, String)> {
    for i in 0..lox.len() {
        for j in i + 1..lox.len() {
            if !commute_projectively(&lox[i].1, &lox[j].1) {
                return Some((lox[i].0.clone(), lox[j].0.clone()));
            }
        }
    }
    None
}

fn fmt_point(p: BPoint) -> String {
    match p {
        None => "inf".into(),
        Some(z) => format!("{:.6}{:+.6}i", z.re, z.im),
    }
}

// ---- gap check ----

#[derive(Clone, Debug)]
pub struct GapOptions {
    pub n_max: usize,
    pub nheight_n_max: usize,
    pub zeta_prime_bound: u64,
    pub max_candidates: usize,
    pub mode: SearchMode,
    pub nheight: NHeightOptions,
}

impl Default for GapOptions {
    fn default() -> Self {
        GapOptions {
            n_max: 8,
            nheight_n_max: 8,
            zeta_prime_bound: 100_000,
            max_candidates: 2_000_000,
            mode: SearchMode::Direct,
            nheight: NHeightOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    DenseEvidence,
    NonDenseEvidence,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessSummary {
    pub word: String,
    pub length: usize,
    pub alpha_minpoly: String,
    pub alpha_degree: usize,
    pub relative_degree: f64,
    /// tr^2/det is non-real at some complex place.
    pub non_real_trace: bool,
    /// A conjugate V = g W g^-1 with tr[W, V] != 2.
    pub non_elementary_with: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub lattice: String,
    pub degree: usize,
    pub hhat_lower: f64,
    pub hhat_upper: f64,
    pub hhat_lower_word: String,
    pub nheight_truncated: bool,
    pub covol_lower: Option<f64>,
    pub covol_upper: Option<f64>,
    pub log_covol_upper: Option<f64>,
    /// hhat_lower [k:Q]^2 / max(log covol_upper, 1).
    pub ratio: Option<f64>,
    /// hhat_lower / max(log covol_upper / [k:Q]^2, 1).
    pub ratio_bounded_degree: Option<f64>,
    pub witness: Option<WitnessSummary>,
    pub index_bounds: Option<IndexBounds>,
    pub structure: Option<StructuralCertificate>,
    pub search_note: String,
    pub verdict: Verdict,
}

fn non_elementary_partner(w: &GElement, gens: &[GElement]) -> Option<String> {
    for (i, g) in gens.iter().enumerate() {
        let v = g.mul(w).mul(&g.inv());
        if !commute_projectively(w, &v) {
            return Some(format!("{} W {}", Word::generator(i as i32 + 1), Word::generator(-(i as i32 + 1))));
        }
    }
    None
}

pub fn gap_check(spec: &LatticeSpec, opts: &GapOptions) -> Result<GapReport> {
    let gens = &spec.generators;
    let field = spec.algebra.field();
    let d = field.degree();
    let search = search_generic(gens, &SearchOptions { n_max: opts.n_max, mode: opts.mode, max_candidates: opts.max_candidates, ..Default::default() })?;
    let nh = nheight_bounds(&spec.matrices(), &NHeightOptions { n_max: opts.nheight_n_max, ..opts.nheight.clone() })?;
    let mut report = GapReport {
        lattice: spec.id.clone(),
        degree: d,
        hhat_lower: nh.lower,
        hhat_upper: nh.upper,
        hhat_lower_word: nh.lower_word.iter().map(|&i| Word::generator(i as i32).to_string()).collect(),
        nheight_truncated: nh.budget_truncated,
        covol_lower: None,
        covol_upper: None,
        log_covol_upper: None,
        ratio: None,
        ratio_bounded_degree: None,
        witness: None,
        index_bounds: None,
        structure: None,
        search_note: search.note.clone(),
        verdict: Verdict::Inconclusive,
    };
    if search.truncated {
        return Ok(report);
    }
    if let Some(wit) = &search.witness {
        let w = wit.element.clone().expect("witness element");
        let bounds = index_bounds_from_generic(&w, &spec.algebra)?;
        let base = max_lattice_covolume(&spec.algebra, &spec.s, opts.zeta_prime_bound, spec.index_hint.clone())?;
        // Gamma_1 = Gamma_S with prod_S (N(P) + 1) <= N(beta)^2
        let covol_upper = base.covol_upper * rat_to_f64(&bounds.product_bound).max(1.0);
        let log_up = covol_upper.ln();
        let ratio = nh.lower * (d * d) as f64 / log_up.max(1.0);
        let ratio_b = nh.lower / (log_up / (d * d) as f64).max(1.0);
        let s2 = w.s2();
        let mut non_real = false;
        for fac in w.designation().factors() {
            if !real_at(&s2, fac.root)? {
                non_real = true;
            }
        }
        let partner = non_elementary_partner(&w, gens);
        report.covol_lower = Some(base.covol_lower);
        report.covol_upper = Some(covol_upper);
        report.log_covol_upper = Some(log_up);
        report.ratio = Some(ratio);
        report.ratio_bounded_degree = Some(ratio_b);
        report.verdict = if partner.is_some() && nh.lower > 0.0 { Verdict::DenseEvidence } else { Verdict::Inconclusive };
        report.witness = Some(WitnessSummary {
            word: wit.word.to_string(),
            length: wit.length,
            alpha_minpoly: wit.alpha_minpoly.clone(),
            alpha_degree: wit.alpha_degree,
            relative_degree: wit.relative_degree,
            non_real_trace: non_real,
            non_elementary_with: partner,
        });
        report.index_bounds = Some(bounds);
        return Ok(report);
    }
    // exhausted: look for a structural certificate on F itself
    let x = BasePoint::center(spec.algebra.signature());
    let elems: Vec<(Word, GElement)> = gens.iter().enumerate().map(|(i, g)| (Word::generator(i as i32 + 1), g.clone())).collect();
    let cert = classify_set(&elems, &x)?;
    report.verdict = if cert.class < GroupClass::Inconclusive { Verdict::NonDenseEvidence } else { Verdict::Inconclusive };
    report.structure = Some(cert);
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct GapRow {
    pub d: u64,
    pub report: Option<GapReport>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapScan {
    pub rows: Vec<GapRow>,
    /// Smallest ratio over dense-evidence rows; None (undefined) when there are none.
    pub min_ratio: Option<f64>,
    pub undefined: bool,
    /// (log covol_upper, hhat_lower [k:Q]^2) per dense-evidence row.
    pub trend: Vec<(f64, f64)>,
}

pub fn gap_scan(ds: &[u64], opts: &GapOptions) -> GapScan {
    gap_scan_at(ds, opts, DEFAULT_PRECISION)
}

pub fn gap_scan_at(ds: &[u64], opts: &GapOptions, precision_bits: u32) -> GapScan {
    let rows: Vec<GapRow> = ds
        .par_iter()
        .map(|&d| match bianchi_at(d, precision_bits).and_then(|s| gap_check(&s, opts)) {
            Ok(r) => GapRow { d, report: Some(r), error: None },
            Err(e) => GapRow { d, report: None, error: Some(e.to_string()) },
        })
        .collect();
    let dense: Vec<&GapReport> = rows
        .iter()
        .filter_map(|r| r.report.as_ref())
        .filter(|r| r.verdict == Verdict::DenseEvidence)
        .collect();
    let min_ratio = dense.iter().filter_map(|r| r.ratio).reduce(f64::min);
    let trend = dense
        .iter()
        .filter_map(|r| Some((r.log_covol_upper?, r.hhat_lower * (r.degree * r.degree) as f64)))
        .collect();
    GapScan { undefined: min_ratio.is_none(), rows, min_ratio, trend }
}

// ---- Margulis scan ----

#[derive(Clone, Debug, Serialize)]
pub struct MargulisMember {
    pub word: String,
    pub displacement: f64,
    pub class: Vec<ElementType>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MargulisReport {
    pub epsilon: f64,
    pub radius: f64,
    pub members: Vec<MargulisMember>,
    pub certificate: StructuralCertificate,
    /// Words longer than word_radius were not enumerated.
    pub within_radius_only: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MargulisScan {
    pub base_point: BasePoint,
    pub covol_lower: f64,
    pub word_radius: usize,
    pub rows: Vec<MargulisReport>,
    pub monotone: bool,
}

pub fn default_epsilon_grid() -> Vec<f64> {
    (1..=20).map(|i| i as f64 / 20.0).collect()
}

fn mul_img(a: &[Image], b: &[Image]) -> Vec<Image> {
    a.iter()
        .zip(b)
        .map(|(x, y)| match (x, y) {
            (Image::Real(p), Image::Real(q)) => Image::Real([
                p[0] * q[0] + p[1] * q[2],
                p[0] * q[1] + p[1] * q[3],
                p[2] * q[0] + p[3] * q[2],
                p[2] * q[1] + p[3] * q[3],
            ]),
            (Image::Complex(p), Image::Complex(q)) => Image::Complex([
                p[0] * q[0] + p[1] * q[2],
                p[0] * q[1] + p[1] * q[3],
                p[2] * q[0] + p[3] * q[2],
                p[2] * q[1] + p[3] * q[3],
            ]),
            _ => unreachable!("factor kinds agree"),
        })
        .collect()
}

fn img_displacement(imgs: &[Image], x: &BasePoint) -> f64 {
    use crate::mobius::{act_h2, act_h3, dist_h2, dist_h3};
    let (mut i2, mut i3) = (0, 0);
    let mut total = 0.0;
    for img in imgs {
        let d = match img {
            Image::Real(m) => {
                let (px, py) = x.h2[i2];
                i2 += 1;
                let z = Complex64::new(px, py);
                dist_h2(z, act_h2(m, z))
            }
            Image::Complex(m) => {
                let (pz, t) = x.h3[i3];
                i3 += 1;
                let z = Complex64::new(pz[0], pz[1]);
                let (z2, t2) = act_h3(m, z, t);
                dist_h3(z, t, z2, t2)
            }
        };
        total += d * d;
    }
    total.sqrt()
}

/// Enumerate reduced words up to `word_radius` once (numerically), keep
/// those moving x by at most the largest radius, evaluate them exactly,
/// then classify the subsets cut out by each epsilon.
pub fn margulis_scan(spec: &LatticeSpec, x: &BasePoint, eps_grid: &[f64], word_radius: usize, zeta_prime_bound: u64) -> Result<MargulisScan> {
    x.validate(spec.algebra.signature())?;
    if eps_grid.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::param("epsilon values must be positive"));
    }
    let mut grid = eps_grid.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let cov = max_lattice_covolume(&spec.algebra, &spec.s, zeta_prime_bound, spec.index_hint.clone())?;
    let covol_lower = cov.covol_lower;
    let scale = covol_lower.ln().max(1.0).sqrt();
    let r_max = grid.last().copied().unwrap_or(0.0) * scale;

    let gens = &spec.generators;
    let n = gens.len();
    let letters: Vec<i32> = (1..=n as i32).chain((1..=n as i32).map(|k| -k)).collect();
    let elem_imgs: HashMap<i32, Vec<Image>> = letters
        .iter()
        .map(|&l| {
            let g = if l > 0 { gens[l as usize - 1].clone() } else { gens[(-l) as usize - 1].inv() };
            (l, g.images())
        })
        .collect();
    // numeric enumeration, parallel over first letters
    let near: Vec<Vec<(Vec<i32>, f64)>> = letters
        .par_iter()
        .map(|&l0| {
            let mut out = Vec::new();
            let mut stack: Vec<(Vec<i32>, Vec<Image>)> = vec![(vec![l0], elem_imgs[&l0].clone())];
            while let Some((w, img)) = stack.pop() {
                let dx = img_displacement(&img, x);
                if dx <= r_max + 1e-6 {
                    out.push((w.clone(), dx));
                }
                if w.len() < word_radius {
                    for &l in letters.iter().rev() {
                        if *w.last().unwrap() != -l {
                            let mut w2 = w.clone();
                            w2.push(l);
                            let im2 = mul_img(&img, &elem_imgs[&l]);
                            stack.push((w2, im2));
                        }
                    }
                }
            }
            out
        })
        .collect();
    let mut cands: Vec<(Word, f64)> = near.into_iter().flatten().map(|(w, dx)| (Word::new(w), dx)).collect();
    cands.push((Word::empty(), 0.0));
    cands.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    // exact evaluation; one representative (shortest word) per element of PGL2(k)
    let mut seen: HashMap<MatrixOverK, usize> = HashMap::new();
    let mut members: Vec<(Word, GElement, f64)> = Vec::new();
    for (w, _) in cands {
        let g = crate::generic::word_eval(&w, gens)?;
        let key = g.matrix().projective_normalized()?;
        if seen.contains_key(&key) {
            continue;
        }
        let dx = displacement(&g, x)?;
        if dx <= r_max + TOL {
            seen.insert(key, members.len());
            members.push((w, g, dx));
        }
    }
    members.sort_by(|a, b| a.2.partial_cmp(&b.2).unwrap().then_with(|| a.0.len().cmp(&b.0.len())).then_with(|| a.0.cmp(&b.0)));

    let mut rows = Vec::new();
    for &eps in &grid {
        let radius = eps * scale;
        let sel: Vec<(Word, GElement)> = members.iter().filter(|m| m.2 <= radius + TOL).map(|m| (m.0.clone(), m.1.clone())).collect();
        let certificate = classify_set(&sel, x)?;
        let mem = members
            .iter()
            .filter(|m| m.2 <= radius + TOL)
            .map(|m| {
                let nf = m.1.designation().factors().len();
                MargulisMember {
                    word: m.0.to_string(),
                    displacement: m.2,
                    class: (0..nf).map(|f| classify(&m.1, f).unwrap_or(ElementType::Identity)).collect(),
                }
            })
            .collect();
        rows.push(MargulisReport { epsilon: eps, radius, members: mem, certificate, within_radius_only: true });
    }
    let monotone = rows.windows(2).all(|w| w[0].certificate.class <= w[1].certificate.class);
    Ok(MargulisScan { base_point: x.clone(), covol_lower, word_radius, rows, monotone })
}

/// Generic element check reused by reports: recompute the verdict exactly.
pub fn reverify(w: &GElement) -> Result<bool> {
    Ok(is_generic(w)?.generic)
}

/// Base point at the center of the product space for a spec.
pub fn center(spec: &LatticeSpec) -> BasePoint {
    BasePoint::center(spec.algebra.signature())
}

pub fn designation_of(spec: &LatticeSpec) -> Arc<crate::mobius::Designation> {
    spec.algebra.designation().clone()
}
