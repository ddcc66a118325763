//! Polynomials over the prime field F_p (p < 2^32), enough to factor a
//! defining polynomial modulo p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::poly::Poly;

/// Coefficients low to high, reduced mod `p`, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModPoly(pub Vec<u64>);

fn trim(mut v: Vec<u64>) -> ModPoly {
    while v.last() == Some(&0) {
        v.pop();
    }
    ModPoly(v)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    crate::arith::pow_mod(a, p - 2, p)
}

impl ModPoly {
    /// Reduce an integer-coefficient polynomial mod p.
    pub fn from_int_poly(f: &Poly, p: u64) -> ModPoly {
        let bp = BigInt::from(p);
        trim(
            f.coeffs()
                .iter()
                .map(|c| {
                    assert!(c.is_integer(), "non-integral coefficient reduced mod p");
                    c.numer().mod_floor(&bp).to_u64().unwrap()
                })
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn x() -> ModPoly {
        ModPoly(vec![0, 1])
    }

    pub fn one() -> ModPoly {
        ModPoly(vec![1])
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_ints(&self.0.iter().map(|&c| c as i64).collect::<Vec<_>>())
    }
}

/// Arithmetic in F_p[x].
#[derive(Clone, Copy, Debug)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 32));
        Fp { p }
    }

    fn mulc(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn add(&self, a: &ModPoly, b: &ModPoly) -> ModPoly {
        let n = a.0.len().max(b.0.len());
        trim(
            (0..n)
                .map(|i| (a.0.get(i).copied().unwrap_or(0) + b.0.get(i).copied().unwrap_or(0)) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, a: &ModPoly, b: &ModPoly) -> ModPoly {
        let n = a.0.len().max(b.0.len());
        trim(
            (0..n)
                .map(|i| (a.0.get(i).copied().unwrap_or(0) + self.p - b.0.get(i).copied().unwrap_or(0)) % self.p)
                .collect(),
        )
    }

    pub fn mul(&self, a: &ModPoly, b: &ModPoly) -> ModPoly {
        if a.is_zero() || b.is_zero() {
            return ModPoly(Vec::new());
        }
        let mut out = vec![0u64; a.0.len() + b.0.len() - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                out[i + j] = (out[i + j] + self.mulc(x, y)) % self.p;
            }
        }
        trim(out)
    }

    pub fn div_rem(&self, a: &ModPoly, d: &ModPoly) -> (ModPoly, ModPoly) {
        assert!(!d.is_zero());
        let dd = d.degree();
        if a.is_zero() || a.degree() < dd {
            return (ModPoly(Vec::new()), a.clone());
        }
        let inv = inv_mod(*d.0.last().unwrap(), self.p);
        let mut rem = a.0.clone();
        let mut q = vec![0u64; a.degree() - dd + 1];
        for i in (0..q.len()).rev() {
            let c = self.mulc(rem[i + dd], inv);
            if c != 0 {
                for (j, &dc) in d.0.iter().enumerate() {
                    rem[i + j] = (rem[i + j] + self.p - self.mulc(c, dc)) % self.p;
                }
            }
            q[i] = c;
        }
        rem.truncate(dd);
        (trim(q), trim(rem))
    }

    pub fn rem(&self, a: &ModPoly, d: &ModPoly) -> ModPoly {
        self.div_rem(a, d).1
    }

    pub fn monic(&self, a: &ModPoly) -> ModPoly {
        match a.0.last() {
            None => a.clone(),
            Some(&l) => {
                let inv = inv_mod(l, self.p);
                trim(a.0.iter().map(|&c| self.mulc(c, inv)).collect())
            }
        }
    }

    pub fn gcd(&self, a: &ModPoly, b: &ModPoly) -> ModPoly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// Bezout coefficients (s, t) with s a + t b = 1, for coprime a, b.
    pub fn xgcd(&self, a: &ModPoly, b: &ModPoly) -> Option<(ModPoly, ModPoly)> {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (ModPoly::one(), ModPoly(Vec::new()));
        let (mut t0, mut t1) = (ModPoly(Vec::new()), ModPoly::one());
        while !r1.is_zero() {
            let (q, r) = self.div_rem(&r0, &r1);
            let s = self.sub(&s0, &self.mul(&q, &s1));
            let t = self.sub(&t0, &self.mul(&q, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.degree() != 0 || r0.is_zero() {
            return None;
        }
        let inv = ModPoly(vec![inv_mod(r0.0[0], self.p)]);
        Some((self.mul(&s0, &inv), self.mul(&t0, &inv)))
    }

    pub fn derivative(&self, a: &ModPoly) -> ModPoly {
        trim(a.0.iter().enumerate().skip(1).map(|(i, &c)| self.mulc(c, i as u64 % self.p)).collect())
    }

    pub fn pow_mod(&self, base: &ModPoly, mut e: u128, m: &ModPoly) -> ModPoly {
        let mut acc = self.rem(&ModPoly::one(), m);
        let mut b = self.rem(base, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.rem(&self.mul(&acc, &b), m);
            }
            b = self.rem(&self.mul(&b, &b), m);
            e >>= 1;
        }
        acc
    }

    /// p-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self, a: &ModPoly) -> ModPoly {
        let p = self.p as usize;
        trim(a.0.iter().step_by(p).copied().collect())
    }

    /// Squarefree factorisation of a monic polynomial: (factor, multiplicity).
    pub fn squarefree(&self, f: &ModPoly) -> Vec<(ModPoly, u32)> {
        let mut out = Vec::new();
        self.squarefree_rec(&self.monic(f), 1, &mut out);
        out.sort();
        out
    }

    fn squarefree_rec(&self, f: &ModPoly, mult: u32, out: &mut Vec<(ModPoly, u32)>) {
        if f.degree() == 0 {
            return;
        }
        let df = self.derivative(f);
        if df.is_zero() {
            self.squarefree_rec(&self.pth_root(f), mult * self.p as u32, out);
            return;
        }
        let mut c = self.gcd(f, &df);
        let mut w = self.div_rem(f, &c).0;
        let mut i = 1;
        while w.degree() > 0 {
            let y = self.gcd(&w, &c);
            let z = self.div_rem(&w, &y).0;
            if z.degree() > 0 {
                out.push((self.monic(&z), i * mult));
            }
            i += 1;
            w = y;
            c = self.div_rem(&c, &w).0;
        }
        if c.degree() > 0 {
            self.squarefree_rec(&self.pth_root(&c), mult * self.p as u32, out);
        }
    }

    /// Distinct-degree factorisation of a squarefree monic polynomial:
    /// returns (degree, product of all irreducible factors of that degree).
    pub fn distinct_degree(&self, f: &ModPoly) -> Vec<(usize, ModPoly)> {
        let mut out = Vec::new();
        let mut rest = self.monic(f);
        let mut h = self.rem(&ModPoly::x(), &rest);
        let mut d = 0;
        while rest.degree() >= 2 * (d + 1) {
            d += 1;
            h = self.pow_mod(&h, self.p as u128, &rest);
            let g = self.gcd(&rest, &self.sub(&h, &ModPoly::x()));
            if g.degree() > 0 {
                rest = self.div_rem(&rest, &g).0;
                h = self.rem(&h, &rest);
                out.push((d, g));
            }
        }
        if rest.degree() > 0 {
            out.push((rest.degree(), rest));
        }
        out
    }

    /// Split a product of distinct irreducibles of common degree `d`.
    pub fn equal_degree(&self, f: &ModPoly, d: usize) -> Vec<ModPoly> {
        let f = self.monic(f);
        if f.degree() == d {
            return vec![f];
        }
        let mut seed: u64 = 0x9e37_79b9_7f4a_7c15;
        loop {
            // deterministic pseudo-random element of degree < deg f
            let a: Vec<u64> = (0..f.degree())
                .map(|_| {
                    seed ^= seed << 13;
                    seed ^= seed >> 7;
                    seed ^= seed << 17;
                    seed % self.p
                })
                .collect();
            let a = trim(a);
            if a.degree() == 0 {
                continue;
            }
            let b = if self.p == 2 {
                // trace map a + a^2 + ... + a^(2^(d-1))
                let mut acc = a.clone();
                let mut t = a.clone();
                for _ in 1..d {
                    t = self.rem(&self.mul(&t, &t), &f);
                    acc = self.add(&acc, &t);
                }
                acc
            } else {
                let e = ((self.p as u128).pow(d as u32) - 1) / 2;
                self.sub(&self.pow_mod(&a, e, &f), &ModPoly::one())
            };
            let g = self.gcd(&f, &b);
            if g.degree() > 0 && g.degree() < f.degree() {
                let h = self.div_rem(&f, &g).0;
                let mut out = self.equal_degree(&g, d);
                out.extend(self.equal_degree(&h, d));
                out.sort();
                return out;
            }
        }
    }

    /// Complete factorisation into monic irreducibles with multiplicities.
    pub fn factor(&self, f: &ModPoly) -> Vec<(ModPoly, u32)> {
        let mut out = Vec::new();
        for (sq, mult) in self.squarefree(f) {
            for (d, g) in self.distinct_degree(&sq) {
                for irr in self.equal_degree(&g, d) {
                    out.push((irr, mult));
                }
            }
        }
        out.sort();
        out
    }

    /// Residue degrees of the irreducible factors of a squarefree polynomial.
    pub fn degree_pattern(&self, f: &ModPoly) -> Vec<usize> {
        let mut out = Vec::new();
        for (d, g) in self.distinct_degree(f) {
            for _ in 0..g.degree() / d {
                out.push(d);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integers_mod_small_primes() {
        let f = Poly::from_ints(&[1, 0, 1]);
        let f5 = Fp::new(5);
        let fac = f5.factor(&ModPoly::from_int_poly(&f, 5));
        assert_eq!(fac, vec![(ModPoly(vec![2, 1]), 1), (ModPoly(vec![3, 1]), 1)]);
        let f3 = Fp::new(3);
        assert_eq!(f3.factor(&ModPoly::from_int_poly(&f, 3)).len(), 1);
        let f2 = Fp::new(2);
        assert_eq!(f2.factor(&ModPoly::from_int_poly(&f, 2)), vec![(ModPoly(vec![1, 1]), 2)]);
    }

    #[test]
    fn x4_plus_1_splits_mod_every_small_prime() {
        let f = Poly::from_ints(&[1, 0, 0, 0, 1]);
        for p in [3u64, 5, 7, 11, 13, 17] {
            let fp = Fp::new(p);
            let fac = fp.factor(&ModPoly::from_int_poly(&f, p));
            assert!(fac.len() >= 2, "p = {p}");
            let prod = fac.iter().fold(ModPoly::one(), |acc, (g, m)| {
                (0..*m).fold(acc, |a, _| fp.mul(&a, g))
            });
            assert_eq!(prod, ModPoly::from_int_poly(&f, p));
        }
    }

    #[test]
    fn char_two_equal_degree() {
        // x^4 + x mod 2 = x (x+1) (x^2+x+1)
        let f2 = Fp::new(2);
        let fac = f2.factor(&ModPoly(vec![0, 1, 0, 0, 1]));
        assert_eq!(fac.len(), 3);
        // x^6 + x^5 + x^4 + x^3 + x^2 + x + 1 = product of two cubics mod 2
        let fac = f2.factor(&ModPoly(vec![1, 1, 1, 1, 1, 1, 1]));
        assert_eq!(fac.iter().map(|(g, _)| g.degree()).collect::<Vec<_>>(), vec![3, 3]);
    }
}
