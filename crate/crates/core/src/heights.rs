//! Weil heights of field elements and matrices, set heights, and a two-sided
//! bracket for the normalized height of a finite matrix set.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebraic::max_root_height;
use crate::arith::{lcm_all, prime_divisors_u64};
use crate::error::{Error, Result};
use crate::matrix::{operator_norm, MatrixOverK};
use crate::nfield::{archimedean_places, finite_support, places_above, FieldElement, Place, PlaceKind};
use crate::poly::{charpoly, Poly};

/// Local operator norm ||A||_v.
pub fn local_norm(a: &MatrixOverK, v: &Place) -> Result<f64> {
    match v.kind {
        PlaceKind::Finite => {
            let mut best = 0.0f64;
            for x in &a.e {
                if !x.is_zero() {
                    best = best.max(v.log_abs(x)?.exp());
                }
            }
            Ok(best)
        }
        _ => Ok(operator_norm(&a.embed(v.root))),
    }
}

fn log_plus_local(a: &MatrixOverK, v: &Place) -> Result<f64> {
    match v.kind {
        PlaceKind::Finite => {
            let mut best = 0.0f64;
            for x in &a.e {
                if !x.is_zero() {
                    best = best.max(v.log_abs(x)?);
                }
            }
            Ok(best)
        }
        _ => Ok(operator_norm(&a.embed(v.root)).ln().max(0.0)),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HeightRow {
    pub place: String,
    pub n_v: u32,
    pub log_plus: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeightReport {
    pub rows: Vec<HeightRow>,
    pub total: f64,
    pub degree: usize,
}

impl HeightReport {
    /// Recompute the total from the rows.
    pub fn reconstruct(&self) -> f64 {
        self.rows.iter().map(|r| r.n_v as f64 * r.log_plus).sum::<f64>() / self.degree as f64
    }
}

/// Primes at which some entry has a denominator (the only finite places with |a|_v > 1).
fn denominator_primes(a: &MatrixOverK) -> Vec<u64> {
    let den = lcm_all(a.e.iter().flat_map(|x| x.coeffs().iter().map(|c| c.denom())));
    if den > num_bigint::BigInt::from(1) {
        prime_divisors_u64(&den.to_biguint().unwrap())
    } else {
        Vec::new()
    }
}

/// h(A) = (1/[K:Q]) sum_v n_v log+ ||A||_v with per-place rows.
pub fn height_matrix(a: &MatrixOverK) -> Result<HeightReport> {
    if a.det().is_zero() {
        return Err(Error::Singular);
    }
    let field = a.field();
    let mut rows = Vec::new();
    for v in archimedean_places(field) {
        rows.push(HeightRow { place: v.label(), n_v: v.local_degree(), log_plus: log_plus_local(a, &v)? });
    }
    for p in denominator_primes(a) {
        for v in places_above(field, p)? {
            let lp = log_plus_local(a, &v)?;
            if lp > 0.0 {
                rows.push(HeightRow { place: v.label(), n_v: v.local_degree(), log_plus: lp });
            }
        }
    }
    let degree = field.degree();
    let total = rows.iter().map(|r| r.n_v as f64 * r.log_plus).sum::<f64>() / degree as f64;
    Ok(HeightReport { rows, total, degree })
}

/// Weil height of a field element computed place by place.
pub fn height_element(x: &FieldElement) -> Result<f64> {
    if x.is_zero() {
        return Ok(0.0);
    }
    let field = x.field();
    let mut total = 0.0;
    for v in archimedean_places(field) {
        total += v.local_degree() as f64 * v.log_abs(x)?.max(0.0);
    }
    for p in finite_support(x) {
        for v in places_above(field, p)? {
            total += v.local_degree() as f64 * v.log_abs(x)?.max(0.0);
        }
    }
    Ok(total / field.degree() as f64)
}

/// h(F) = max over A in F of h(A).
pub fn height_set(f: &[MatrixOverK]) -> Result<f64> {
    if f.is_empty() {
        return Err(Error::param("height of an empty set"));
    }
    let mut best = f64::NEG_INFINITY;
    for a in f {
        best = best.max(height_matrix(a)?.total);
    }
    Ok(best)
}

/// Largest height of an eigenvalue of A: the eigenvalues of A and of its
/// Galois conjugates are the roots of N_{K/Q}(charpoly A), which is the
/// characteristic polynomial of A acting Q-linearly on K^2.
pub fn eigenvalue_height(a: &MatrixOverK, bits: u32) -> Result<f64> {
    let cp = charpoly(&a.rational_matrix());
    max_root_height(&cp, bits)
}

#[derive(Clone, Debug)]
pub struct NHeightOptions {
    pub n_max: usize,
    /// Cap on the number of distinct products kept per level.
    pub max_products: usize,
    /// Cap on the number of words per level used for the eigenvalue bound.
    pub eig_words: usize,
    pub bits: u32,
}

impl Default for NHeightOptions {
    fn default() -> Self {
        NHeightOptions { n_max: 8, max_products: 50_000, eig_words: 2_000, bits: 192 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelRow {
    pub n: usize,
    pub distinct: usize,
    pub complete: bool,
    /// h(F^n), only for complete levels.
    pub h_n: Option<f64>,
    pub h_n_over_n: Option<f64>,
    /// Best eigenvalue bound h(lambda)/n seen at this level.
    pub lower_n: f64,
    pub eig_words: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct NHeightReport {
    pub upper: f64,
    pub lower: f64,
    pub upper_level: usize,
    /// Word (generator indices, 1-based) attaining the lower bound.
    pub lower_word: Vec<usize>,
    pub levels: Vec<LevelRow>,
    pub budget_truncated: bool,
}

/// Bracket the normalized height: upper = min_n h(F^n)/n over complete
/// levels (subadditivity), lower = max h(lambda(W))/n over words W in F^n.
/// Products equal up to sign are merged (the height does not see the sign).
pub fn nheight_bounds(f: &[MatrixOverK], opts: &NHeightOptions) -> Result<NHeightReport> {
    if f.is_empty() {
        return Err(Error::param("normalized height of an empty set"));
    }
    if opts.n_max == 0 {
        return Err(Error::param("n_max must be >= 1"));
    }
    for a in f {
        if a.det().is_zero() {
            return Err(Error::Singular);
        }
    }
    let mut level: Vec<(MatrixOverK, Vec<usize>)> = Vec::new();
    let mut seen: HashMap<MatrixOverK, ()> = HashMap::new();
    for (i, a) in f.iter().enumerate() {
        let key = a.sign_normalized();
        if seen.insert(key.clone(), ()).is_none() {
            level.push((key, vec![i + 1]));
        }
    }
    let mut complete = true;
    let mut upper = f64::INFINITY;
    let mut upper_level = 0;
    let mut lower = 0.0f64;
    let mut lower_word = Vec::new();
    let mut levels = Vec::new();
    let mut eig_cache: BTreeMap<String, f64> = BTreeMap::new();

    for n in 1..=opts.n_max {
        if n > 1 {
            let mut next = Vec::new();
            let mut seen: HashMap<MatrixOverK, ()> = HashMap::new();
            'outer: for (a, w) in &level {
                for (i, g) in f.iter().enumerate() {
                    let key = a.mul(g).sign_normalized();
                    if seen.contains_key(&key) {
                        continue;
                    }
                    if next.len() >= opts.max_products {
                        complete = false;
                        break 'outer;
                    }
                    seen.insert(key.clone(), ());
                    let mut w2 = w.clone();
                    w2.push(i + 1);
                    next.push((key, w2));
                }
            }
            level = next;
        }
        let heights: Vec<f64> = level
            .par_iter()
            .map(|(a, _)| height_matrix(a).map(|r| r.total))
            .collect::<Result<_>>()?;
        let h_n = complete.then(|| heights.iter().cloned().fold(0.0, f64::max));
        if let Some(h) = h_n {
            let u = h / n as f64;
            if u < upper {
                upper = u;
                upper_level = n;
            }
        }
        // eigenvalue bound on the first eig_words products of this level
        let take = level.len().min(opts.eig_words);
        let polys: Vec<Poly> = level[..take].par_iter().map(|(a, _)| charpoly(&a.rational_matrix())).collect();
        let mut fresh: Vec<String> = Vec::new();
        for p in &polys {
            let key = p.to_string();
            if !eig_cache.contains_key(&key) && !fresh.contains(&key) {
                fresh.push(key);
            }
        }
        let fresh_polys: Vec<(String, Poly)> = fresh
            .into_iter()
            .map(|k| {
                let p = polys.iter().find(|p| p.to_string() == k).unwrap().clone();
                (k, p)
            })
            .collect();
        let fresh_h: Vec<(String, f64)> = fresh_polys
            .par_iter()
            .map(|(k, p)| max_root_height(p, opts.bits).map(|h| (k.clone(), h)))
            .collect::<Result<_>>()?;
        eig_cache.extend(fresh_h);
        let mut lower_n = 0.0f64;
        for (idx, p) in polys.iter().enumerate() {
            let h = eig_cache[&p.to_string()] / n as f64;
            if h > lower_n {
                lower_n = h;
            }
            if h > lower + 1e-15 {
                lower = h;
                lower_word = level[idx].1.clone();
            }
        }
        levels.push(LevelRow {
            n,
            distinct: level.len(),
            complete,
            h_n,
            h_n_over_n: h_n.map(|h| h / n as f64),
            lower_n,
            eig_words: take,
        });
    }
    let budget_truncated = !complete || levels.iter().any(|l| l.eig_words < l.distinct);
    Ok(NHeightReport { upper, lower, upper_level, lower_word, levels, budget_truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfield::{make_field, rationals};
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn basic_heights() {
        let k = rationals();
        let id = MatrixOverK::identity(&k);
        assert_eq!(height_matrix(&id).unwrap().total, 0.0);
        let two = MatrixOverK::from_ints(&k, [[2, 0], [0, 1]]);
        assert!((height_matrix(&two).unwrap().total - 2f64.ln()).abs() < 1e-15);
        let half = MatrixOverK::from_rationals(&k, [[q(1, 2), q(0, 1)], [q(0, 1), q(1, 1)]]);
        let r = height_matrix(&half).unwrap();
        assert!((r.total - 2f64.ln()).abs() < 1e-15);
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.rows[1].place, "p2.0");
        let v2 = &places_above(&k, 2).unwrap()[0];
        assert!((local_norm(&half, v2).unwrap() - 2.0).abs() < 1e-15);
        let fib = MatrixOverK::from_ints(&k, [[1, 1], [1, 0]]);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((height_matrix(&fib).unwrap().total - phi.ln()).abs() < 1e-14);
        assert!((height_set(&[fib, half]).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(height_set(&[]).is_err());
    }

    #[test]
    fn gaussian_rows_reconstruct() {
        let k = make_field(&Poly::from_ints(&[1, 0, 1]), 192).unwrap();
        let i = FieldElement::theta(&k);
        let a = MatrixOverK::new(
            i.scale(&q(1, 5)),
            FieldElement::from_int(&k, 3),
            FieldElement::one(&k),
            &i + &FieldElement::one(&k),
        );
        let r = height_matrix(&a).unwrap();
        assert!((r.reconstruct() - r.total).abs() < 1e-12);
        // both places above 5 see the denominator
        assert_eq!(r.rows.iter().filter(|row| row.place.starts_with("p5")).count(), 2);
    }

    #[test]
    fn fibonacci_bracket() {
        let k = rationals();
        let fib = MatrixOverK::from_ints(&k, [[1, 1], [1, 0]]);
        let opts = NHeightOptions { n_max: 12, ..Default::default() };
        let r = nheight_bounds(&[fib], &opts).unwrap();
        let lphi = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((r.upper - lphi).abs() < 0.02);
        assert!(r.lower >= 0.5 * lphi - 1e-9);
        assert!(r.lower <= r.upper + 1e-9);
    }

    #[test]
    fn diagonal_bracket_is_tight() {
        let k = rationals();
        let a = MatrixOverK::from_ints(&k, [[2, 0], [0, 1]]);
        let r = nheight_bounds(&[a], &NHeightOptions { n_max: 3, ..Default::default() }).unwrap();
        assert!((r.upper - 2f64.ln()).abs() < 1e-12);
        assert!((r.lower - 2f64.ln()).abs() < 1e-12);
        let id = MatrixOverK::identity(&k);
        let r = nheight_bounds(&[id], &NHeightOptions { n_max: 3, ..Default::default() }).unwrap();
        assert_eq!((r.upper, r.lower), (0.0, 0.0));
    }
}
