//! Exact rational points with a shared 128-bit denominator.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::rational::Rational;

/// Largest allowed magnitude of numerators and the denominator.
pub const POINT_LIMIT: i128 = 1 << 98;

/// Largest denominator `q` for which residuals `q·x − p` cannot overflow.
pub const MAX_Q: i128 = 1 << 27;

/// `x = num/den` coordinatewise with `den > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatPoint {
    pub num: Vec<i128>,
    pub den: i128,
}

impl RatPoint {
    pub fn new(num: Vec<i128>, den: i128) -> Result<Self> {
        if den <= 0 {
            return domain("denominator must be positive");
        }
        if den > POINT_LIMIT || num.iter().any(|n| n.abs() > POINT_LIMIT) {
            return domain("point exceeds the 2^98 precision limit");
        }
        let g = num.iter().fold(den, |g, n| g.gcd(n));
        Ok(Self { num: num.into_iter().map(|n| n / g).collect(), den: den / g })
    }

    /// Nearest point on the grid `2^{-64}ℤ^d`.
    pub fn from_f64(x: &[f64]) -> Result<Self> {
        let scale = 2f64.powi(64);
        let mut num = Vec::with_capacity(x.len());
        for &v in x {
            if !v.is_finite() || v.abs() > 2f64.powi(30) {
                return domain(format!("coordinate {v} out of range"));
            }
            num.push((v * scale).round() as i128);
        }
        Self::new(num, 1i128 << 64)
    }

    pub fn from_rationals(x: &[Rational]) -> Result<Self> {
        let l = x.iter().fold(BigInt::from(1), |acc, v| acc.lcm(v.denom()));
        let den = l.to_i128().ok_or_else(|| Error::Domain("denominator too large".into()))?;
        let num = x
            .iter()
            .map(|v| (v.numer() * (&l / v.denom())).to_i128())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Domain("numerator too large".into()))?;
        Self::new(num, den)
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.num.iter().map(|&n| n as f64 / self.den as f64).collect()
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.num.iter().map(|&n| BigRational::new(n.into(), self.den.into())).collect()
    }

    /// `q·num_i − p·den`, which is `den·(q·x_i − p)`.
    pub fn residual(&self, i: usize, p: i128, q: i128) -> Option<i128> {
        q.checked_mul(self.num[i])?.checked_sub(p.checked_mul(self.den)?)
    }

    fn residual_big(&self, i: usize, p: i128, q: i128) -> BigInt {
        BigInt::from(q) * self.num[i] - BigInt::from(p) * self.den
    }

    /// Nearest integer to `q·x_i`.
    pub fn round_multiple(&self, i: usize, q: i128) -> i128 {
        let two = BigInt::from(2);
        let n = BigInt::from(q) * self.num[i] * &two + self.den;
        n.div_floor(&(two * self.den)).to_i128().expect("rounded multiple fits")
    }

    /// `max_i |q·x_i − p_i|` as a double.
    pub fn sup_err_f64(&self, p: &[i128], q: i128) -> f64 {
        (0..self.dim())
            .map(|i| match self.residual(i, p[i], q) {
                Some(r) => (r as f64).abs() / self.den as f64,
                None => self.residual_big(i, p[i], q).abs().to_f64().unwrap_or(f64::INFINITY) / self.den as f64,
            })
            .fold(0.0, f64::max)
    }

    fn sup_residual(&self, p: &[i128], q: i128) -> BigInt {
        (0..self.dim()).map(|i| self.residual_big(i, p[i], q).abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Compares `max_i |q_1 x_i − p_{1,i}|` against the same quantity for `(p_2, q_2)`.
    pub fn err_cmp(&self, p1: &[i128], q1: i128, p2: &[i128], q2: i128) -> Ordering {
        self.sup_residual(p1, q1).cmp(&self.sup_residual(p2, q2))
    }

    /// Exact test of `max_i |q·x_i − p_i| < thr` for the double `thr`.
    pub fn err_below(&self, p: &[i128], q: i128, thr: f64) -> bool {
        let approx = self.sup_err_f64(p, q);
        if approx < thr * (1.0 - 1e-12) {
            return true;
        }
        if approx > thr * (1.0 + 1e-12) {
            return false;
        }
        let t = BigRational::from_float(thr).expect("finite threshold");
        let lhs = BigRational::new(self.sup_residual(p, q), BigInt::from(self.den));
        lhs < t
    }

    /// Exact `x_i·q` as a rational, used for integer range computations.
    pub fn scaled(&self, i: usize, q: i128) -> Rational {
        BigRational::new(BigInt::from(q) * self.num[i], BigInt::from(self.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn construction_reduces() {
        let p = RatPoint::new(vec![2, 4], 6).unwrap();
        assert_eq!((p.num.clone(), p.den), (vec![1, 2], 3));
        assert!(RatPoint::new(vec![1], 0).is_err());
        let q = RatPoint::from_f64(&[0.375]).unwrap();
        assert_eq!((q.num.clone(), q.den), (vec![3], 8));
        let r = RatPoint::from_rationals(&[rat(1, 6), rat(3, 4)]).unwrap();
        assert_eq!((r.num.clone(), r.den), (vec![2, 9], 12));
    }

    #[test]
    fn residual_arithmetic() {
        let x = RatPoint::new(vec![1], 3).unwrap();
        assert_eq!(x.residual(0, 1, 3), Some(0));
        assert_eq!(x.round_multiple(0, 5), 2);
        assert!(x.err_below(&[1], 3, 1e-300));
        assert!(!x.err_below(&[2], 5, 1.0 / 3.0));
        assert!(x.err_below(&[2], 5, 1.0 / 3.0 + 1e-9));
        assert_eq!(x.err_cmp(&[1], 3, &[0], 1), Ordering::Less);
    }
}
