//! Exact rational scalars and small number-theoretic helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `a/b` or an integer literal. Decimal literals are rejected.
pub fn parse_exact(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Domain(format!("`{s}` is not an exact rational (use num/den)"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Domain(format!("zero denominator in `{s}`")));
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}

/// Parses an exact literal or a decimal with optional exponent; decimals
/// become the exact value of their digits.
pub fn parse_lenient(s: &str) -> Result<Rational> {
    if let Ok(r) = parse_exact(s) {
        return Ok(r);
    }
    let t = s.trim();
    if let Some((mant, exp)) = t.split_once(['e', 'E']) {
        let e: i32 = exp.parse().map_err(|_| Error::Domain(format!("`{t}` is not a number")))?;
        let m = if mant.contains('.') { parse_lenient(mant)? } else { parse_exact(mant)? };
        return Ok(m * pow(&BigRational::from_integer(BigInt::from(10)), e));
    }
    let bad = || Error::Domain(format!("`{t}` is not a number"));
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (ip, fp) = body.split_once('.').ok_or_else(bad)?;
    if !ip.chars().all(|c| c.is_ascii_digit()) || !fp.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{ip}{fp}");
    let n: BigInt = if digits.is_empty() { return Err(bad()) } else { digits.parse().map_err(|_| bad())? };
    let d = num_traits::pow(BigInt::from(10), fp.len());
    let r = BigRational::new(n, d);
    Ok(if neg { -r } else { r })
}

pub fn to_f64(x: &Rational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Fall back to scaling for huge numerators or denominators.
    let n = x.numer();
    let d = x.denom();
    let shift = n.bits() as i64 - d.bits() as i64;
    let (n2, d2) = if shift > 0 { (n.clone(), d << (shift as usize)) } else { (n << ((-shift) as usize), d.clone()) };
    let q = n2.to_f64().unwrap_or(0.0) / d2.to_f64().unwrap_or(1.0);
    q * 2f64.powi(shift as i32)
}

/// Exact rational value of a finite double.
pub fn from_f64(x: f64) -> Result<Rational> {
    BigRational::from_float(x).ok_or_else(|| Error::Domain(format!("{x} is not finite")))
}

pub fn pow(x: &Rational, e: i32) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

pub fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut k = 2u64;
    while BigInt::from(k) * BigInt::from(k) <= m {
        let bk = BigInt::from(k);
        if (&m % &bk).is_zero() {
            out.push(k);
            while (&m % &bk).is_zero() {
                m /= &bk;
            }
        }
        k += 1;
    }
    if m > BigInt::one() {
        out.push(m.to_u64().expect("prime factor exceeds u64"));
    }
    out
}

/// p-adic valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let bp = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&bp);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn valuation(x: &Rational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(int_valuation(x.numer(), p) as i64 - int_valuation(x.denom(), p) as i64)
}

pub fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// True iff every prime dividing the denominator lies in `primes`.
pub fn in_localization(x: &Rational, primes: &[u64]) -> bool {
    prime_factors(x.denom()).iter().all(|q| primes.contains(q))
}

/// True iff x is a unit of the ring obtained by inverting `primes`.
pub fn is_s_unit(x: &Rational, primes: &[u64]) -> bool {
    !x.is_zero() && in_localization(x, primes) && prime_factors(x.numer()).iter().all(|q| primes.contains(q))
}

pub fn floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

pub fn gcd_all(xs: &[BigInt]) -> BigInt {
    xs.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn gcd_i64(xs: &[i64]) -> i64 {
    xs.iter().fold(0i64, |g, &x| g.gcd(&x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_exact("2/3").unwrap(), rat(2, 3));
        assert_eq!(parse_exact(" -4 ").unwrap(), int(-4));
        assert!(parse_exact("0.666").is_err());
        assert_eq!(parse_lenient("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_lenient("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_lenient("1e-6").unwrap(), rat(1, 1_000_000));
        assert_eq!(parse_lenient("2.5E2").unwrap(), int(250));
        assert!(parse_lenient("1e").is_err());
        assert!(parse_exact("1/0").is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&rat(1, 9), 3), Some(-2));
        assert_eq!(valuation(&int(12), 2), Some(2));
        assert_eq!(valuation(&int(0), 2), None);
        assert_eq!(prime_factors(&BigInt::from(360)), vec![2, 3, 5]);
        assert!(is_s_unit(&rat(9, 4), &[2, 3]));
        assert!(!is_s_unit(&rat(5, 4), &[2, 3]));
    }

    #[test]
    fn f64_roundtrip() {
        assert_eq!(to_f64(&rat(1, 4)), 0.25);
        let huge = pow(&rat(1, 5), 600);
        assert!(to_f64(&huge) == 0.0 || to_f64(&huge) < 1e-300);
        let big = pow(&int(7), 200) / pow(&int(7), 199);
        assert_eq!(to_f64(&big), 7.0);
        assert_eq!(from_f64(0.375).unwrap(), rat(3, 8));
    }
}
