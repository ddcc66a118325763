//! Factorisation over Q by recombining certified complex roots.
//!
//! A factor of a primitive `F` in Z[x] has the form `c * prod_{i in S} (x - a_i)`
//! and `lc(F) * prod_{i in S} (x - a_i)` has integer coefficients. Subsets
//! closed under conjugation are enumerated by increasing size; the product
//! is formed exactly at the certified centres, a subset is rejected only when
//! some coefficient disc provably misses every integer, and every candidate
//! is confirmed by exact division. The first factor found at the smallest
//! size is irreducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::poly::{int_divides, Poly};
use crate::roots::{dyadic_to_f64, GaussDyadic, RootSet};

/// An irreducible factor together with the indices (into the root set of the
/// squarefree input) of its roots.
#[derive(Clone, Debug)]
pub struct RootedFactor {
    pub poly: Poly,
    pub roots: Vec<usize>,
}

/// Split the squarefree polynomial behind `rs` into irreducible factors over Q.
pub fn factor_squarefree(rs: &RootSet) -> Result<Vec<RootedFactor>> {
    let n = rs.len();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut current = rs.int_coeffs().to_vec();
    let mut out = Vec::new();
    'outer: while remaining.len() > 1 {
        // conjugation orbits among the remaining roots
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        let mut seen = vec![false; n];
        for &i in &remaining {
            if seen[i] {
                continue;
            }
            let j = rs.conjugate_of(i);
            seen[i] = true;
            seen[j] = true;
            orbits.push(if i == j { vec![i] } else { vec![i, j] });
        }
        let total = remaining.len();
        let lead = current.last().unwrap().clone();
        for size in 1..=total / 2 {
            let mut found: Option<(Vec<usize>, Vec<BigInt>)> = None;
            subsets_of_size(&orbits, size, &mut |subset: &[usize]| {
                if found.is_some() {
                    return;
                }
                if let Some(candidate) = integer_candidate(rs, subset, &lead) {
                    if let Some(g) = primitive(&candidate) {
                        if g.len() > 1 && int_divides(&current, &g).is_some() {
                            found = Some((subset.to_vec(), g));
                        }
                    }
                }
            });
            if let Some((subset, g)) = found {
                current = int_divides(&current, &g).unwrap();
                remaining.retain(|i| !subset.contains(i));
                out.push(RootedFactor { poly: Poly::from_bigints(&g), roots: subset });
                continue 'outer;
            }
        }
        break;
    }
    if !remaining.is_empty() {
        out.push(RootedFactor { poly: Poly::from_bigints(&current), roots: remaining });
    }
    for f in &mut out {
        f.poly = f.poly.monic();
        f.roots.sort();
    }
    Ok(out)
}

fn subsets_of_size(orbits: &[Vec<usize>], size: usize, visit: &mut dyn FnMut(&[usize])) {
    fn rec(
        orbits: &[Vec<usize>],
        start: usize,
        left: usize,
        acc: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if left == 0 {
            visit(acc);
            return;
        }
        for k in start..orbits.len() {
            let o = &orbits[k];
            if o.len() > left {
                continue;
            }
            acc.extend_from_slice(o);
            rec(orbits, k + 1, left - o.len(), acc, visit);
            acc.truncate(acc.len() - o.len());
        }
    }
    rec(orbits, 0, size, &mut Vec::new(), visit);
}

/// lead * prod (x - z_i) rounded to integers when every coefficient disc can hold one.
fn integer_candidate(rs: &RootSet, subset: &[usize], lead: &BigInt) -> Option<Vec<BigInt>> {
    // exact product at the centres
    let mut coeffs: Vec<GaussDyadic> = vec![GaussDyadic::from_int(lead)];
    for &i in subset {
        let z = &rs.ball(i).center;
        let mut next = vec![GaussDyadic::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].sub(&c.mul(z));
        }
        coeffs = next;
    }
    // error bound from the radii: |lead| * (e_k(|z|+r) - e_k(|z|)) <= |lead| * (prod(1+|z|+r) - prod(1+|z|))
    // prod(1+m+r) - prod(1+m) <= prod(1+m) * (exp(sum r/(1+m)) - 1)
    let mut base = 1.0f64;
    let mut rel = 0.0f64;
    for &i in subset {
        let m = rs.approx(i).norm();
        base *= 1.0 + m;
        rel += rs.ball(i).radius / (1.0 + m);
    }
    let lead_f = crate::arith::ln_abs_int(lead).exp();
    let err = lead_f * base * rel.exp_m1() * 1.01 + 1e-30;
    let mut out = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        let rounded = round_dyadic(&c.re, c.exp);
        let frac_re = dyadic_to_f64(&(&c.re - (&rounded << c.exp)), c.exp).abs();
        let im = dyadic_to_f64(&c.im, c.exp).abs();
        if frac_re > err || im > err {
            return None;
        }
        out.push(rounded);
    }
    Some(out)
}

fn round_dyadic(m: &BigInt, exp: u32) -> BigInt {
    if exp == 0 {
        return m.clone();
    }
    let half = BigInt::one() << (exp - 1);
    (m + half).div_floor(&(BigInt::one() << exp))
}

fn primitive(c: &[BigInt]) -> Option<Vec<BigInt>> {
    let g = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return None;
    }
    let sign = if c.last()?.is_negative() { -BigInt::one() } else { BigInt::one() };
    Some(c.iter().map(|x| x / &g * &sign).collect())
}

/// Squarefree decomposition (Yun): monic `f_i` with `p = lc * prod f_i^i`.
pub fn squarefree_decomposition(p: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if p.degree() == 0 {
        return out;
    }
    let f = p.monic();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_rem(&a0).0;
    let mut c = df.div_rem(&a0).0;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    loop {
        let a = b.gcd(&d);
        if a.degree() > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_rem(&a).0;
        if b.degree() == 0 {
            break;
        }
        c = d.div_rem(&a).0;
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

/// Full factorisation over Q into monic irreducibles with multiplicities.
pub fn factor(p: &Poly, bits: u32) -> Result<Vec<(Poly, u32)>> {
    let mut out = Vec::new();
    for (sq, mult) in squarefree_decomposition(p) {
        let rs = RootSet::isolate(&sq, bits)?;
        for f in factor_squarefree(&rs)? {
            out.push((f.poly, mult));
        }
    }
    out.sort_by_key(|(f, m)| (f.degree(), *m, f.to_string()));
    Ok(out)
}

/// Irreducibility over Q; on failure returns a proper factor as witness.
pub fn irreducibility_witness(p: &Poly, bits: u32) -> Result<Option<Poly>> {
    if p.degree() <= 1 {
        return Ok(None);
    }
    let fs = factor(p, bits)?;
    if fs.len() == 1 && fs[0].1 == 1 {
        Ok(None)
    } else {
        Ok(Some(fs[0].0.clone()))
    }
}

/// Rational roots of `p` (used as a quick exact pre-check).
pub fn rational_roots(p: &Poly) -> Vec<BigRational> {
    let mut out = Vec::new();
    if let Ok(fs) = factor(p, 128) {
        for (f, _) in fs {
            if f.degree() == 1 {
                out.push(-f.coeff(0));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn factors_x4_plus_1_is_irreducible() {
        assert!(irreducibility_witness(&p(&[1, 0, 0, 0, 1]), 192).unwrap().is_none());
    }

    #[test]
    fn splits_products() {
        // (x^2 + 1)(x^2 - x - 1)
        let f = &p(&[1, 0, 1]) * &p(&[-1, -1, 1]);
        let fs = factor(&f, 192).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().any(|(g, _)| *g == p(&[1, 0, 1])));
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2)
        let fs = factor(&p(&[4, 0, 0, 0, 1]), 192).unwrap();
        assert_eq!(fs.len(), 2);
    }

    #[test]
    fn squarefree_and_multiplicity() {
        let f = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[2, 1]);
        let fs = factor(&f, 128).unwrap();
        assert_eq!(fs, vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]);
    }

    #[test]
    fn non_monic_rational_roots() {
        let roots = rational_roots(&p(&[-1, 0, 4]));
        assert_eq!(roots.len(), 2);
    }

    #[test]
    fn degree_eight_swinnerton_dyer() {
        // minimal polynomial of sqrt2 + sqrt3 + sqrt5 (degree 8) is irreducible
        let f = p(&[576, 0, -960, 0, 352, 0, -40, 0, 1]);
        assert!(irreducibility_witness(&f, 192).unwrap().is_none());
        // (x^2-2)(x^2-3) splits into two quadratics
        let g = &p(&[-2, 0, 1]) * &p(&[-3, 0, 1]);
        assert_eq!(factor(&g, 192).unwrap().len(), 2);
    }
}
