//! Integer and rational helpers: primes, factorisation, square roots,
//! p-adic valuations and logarithms of big numbers.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// All primes `<= n` (sieve of Eratosthenes).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn is_probable_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let two = &one + &one;
    if n.is_even() {
        return false;
    }
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = one.clone();
        while d == one {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
    }
    unreachable!()
}

/// Prime factorisation of a positive integer, primes ascending.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut rest = n.clone();
    for p in primes_up_to(10_000) {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
    }
    let mut stack = vec![rest];
    let mut big: Vec<BigUint> = Vec::new();
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime_big(&m) {
            big.push(m);
        } else {
            let d = pollard_rho(&m);
            stack.push(&m / &d);
            stack.push(d);
        }
    }
    big.sort();
    for p in big {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out.sort();
    out
}

/// Distinct primes dividing `n` (as u64; panics never, skips primes above u64).
pub fn prime_divisors_u64(n: &BigUint) -> Vec<u64> {
    factorize(n).into_iter().filter_map(|(p, _)| p.to_u64()).collect()
}

/// Exponent of `p` in a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero());
    let bp = BigInt::from(p);
    let mut m = n.clone();
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(&bp);
        if !r.is_zero() {
            return e;
        }
        m = q;
        e += 1;
    }
}

/// Exponent of `p` in a nonzero rational.
pub fn rat_valuation(q: &BigRational, p: u64) -> i64 {
    int_valuation(q.numer(), p) as i64 - int_valuation(q.denom(), p) as i64
}

/// Exact square root of a nonnegative integer, if it exists.
pub fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact square root of a rational, if it exists.
pub fn rat_sqrt_exact(q: &BigRational) -> Option<BigRational> {
    let n = int_sqrt_exact(q.numer())?;
    let d = int_sqrt_exact(q.denom())?;
    Some(BigRational::new(n, d))
}

/// Natural logarithm of |x| for an arbitrarily large integer.
pub fn ln_abs_int(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of |q| for a nonzero rational.
pub fn ln_abs_rat(q: &BigRational) -> f64 {
    ln_abs_int(q.numer()) - ln_abs_int(q.denom())
}

/// Rational to f64 that survives huge numerators and denominators.
pub fn rat_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    if q.numer().bits() < 1000 && q.denom().bits() < 1000 {
        return q.numer().to_f64().unwrap() / q.denom().to_f64().unwrap();
    }
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    sign * ln_abs_rat(q).exp()
}

/// Squarefree test for a nonzero integer.
pub fn is_squarefree(n: &BigInt) -> bool {
    if n.is_zero() {
        return false;
    }
    factorize(&n.abs().to_biguint().unwrap()).iter().all(|(_, e)| *e == 1)
}

/// Write `n = s^2 * m` with `m` squarefree (sign kept in `m`). Returns `(s, m)`.
pub fn square_decompose(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero());
    let mut s = BigInt::one();
    let mut m = if n.sign() == Sign::Minus { -BigInt::one() } else { BigInt::one() };
    for (p, e) in factorize(&n.abs().to_biguint().unwrap()) {
        let p = BigInt::from(p);
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            m *= p;
        }
    }
    (s, m)
}

/// Kronecker symbol (D / p) for a prime `p` and a discriminant `D`.
pub fn kronecker_prime(d: &BigInt, p: u64) -> i32 {
    let bp = BigInt::from(p);
    if (d % &bp).is_zero() {
        return 0;
    }
    if p == 2 {
        let r = d.mod_floor(&BigInt::from(8)).to_u64().unwrap();
        return if r == 1 || r == 7 { 1 } else { -1 };
    }
    let a = d.mod_floor(&bp).to_u64().unwrap();
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// gcd of a list of integers (nonnegative result).
pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// lcm of a list of integers (positive result, 1 for empty input).
pub fn lcm_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |l, x| if x.is_zero() { l } else { l.lcm(x) })
}

/// Parse "3/2", "-7" or "0" into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let mut parts = s.split('/');
    let num: BigInt = parts.next()?.trim().parse().ok()?;
    let den: BigInt = match parts.next() {
        Some(d) => d.trim().parse().ok()?,
        None => BigInt::one(),
    };
    if parts.next().is_some() || den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_small() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(primes_up_to(1_000_000).len(), 78_498);
    }

    #[test]
    fn factor_products() {
        let n = BigUint::from(2u32).pow(5) * BigUint::from(1_000_003u64) * BigUint::from(999_983u64);
        let f = factorize(&n);
        assert_eq!(f[0], (BigUint::from(2u32), 5));
        assert_eq!(f.len(), 3);
        let big = BigUint::from(4_294_967_311u64) * BigUint::from(4_294_967_357u64);
        assert_eq!(factorize(&big).len(), 2);
    }

    #[test]
    fn kronecker_values() {
        let m4 = BigInt::from(-4);
        assert_eq!(kronecker_prime(&m4, 5), 1);
        assert_eq!(kronecker_prime(&m4, 3), -1);
        assert_eq!(kronecker_prime(&m4, 2), 0);
        assert_eq!(kronecker_prime(&BigInt::from(5), 2), -1);
        assert_eq!(kronecker_prime(&BigInt::from(-7), 2), 1);
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/2"), Some(BigRational::new(3.into(), 2.into())));
        assert_eq!(parse_rational("3//2"), None);
        assert_eq!(parse_rational("1/0"), None);
        let q = parse_rational("9/4").unwrap();
        assert_eq!(rat_sqrt_exact(&q), Some(BigRational::new(3.into(), 2.into())));
        assert_eq!(square_decompose(&BigInt::from(-12)), (BigInt::from(2), BigInt::from(-3)));
    }

    #[test]
    fn big_logs() {
        let x = BigInt::from(10).pow(400);
        assert!((ln_abs_int(&x) - 400.0 * 10f64.ln()).abs() < 1e-9);
    }
}
