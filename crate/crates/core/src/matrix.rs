//! Dense exact rational matrices.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};
use crate::rational::{int, lcm_of_denominators, to_f64, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<Rational> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut s = Rational::zero();
                for (j, vj) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !vj.is_zero() {
                        s += a * vj;
                    }
                }
                s
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    /// Determinant by Gaussian elimination over the rationals.
    pub fn det(&self) -> Rational {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv = a.get(c, c).clone();
            det *= &piv;
            for r in c + 1..n {
                let f = a.get(r, c) / &piv;
                if f.is_zero() {
                    continue;
                }
                for k in c..n {
                    let v = a.get(r, k) - &f * a.get(c, k);
                    a.set(r, k, v);
                }
            }
        }
        det
    }

    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !a.get(r, c).is_zero()) else {
                continue;
            };
            a.swap_rows(p, rank);
            let piv = a.get(rank, c).clone();
            for r in rank + 1..self.rows {
                let f = a.get(r, c) / &piv;
                if f.is_zero() {
                    continue;
                }
                for k in c..self.cols {
                    let v = a.get(r, k) - &f * a.get(rank, k);
                    a.set(r, k, v);
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return domain("inverse of a non-square matrix");
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return domain("singular matrix");
            };
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let piv = a.get(c, c).recip();
            for k in 0..n {
                a.set(c, k, a.get(c, k) * &piv);
                inv.set(c, k, inv.get(c, k) * &piv);
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = a.get(r, c).clone();
                if f.is_zero() {
                    continue;
                }
                for k in 0..n {
                    let v = a.get(r, k) - &f * a.get(c, k);
                    a.set(r, k, v);
                    let w = inv.get(r, k) - &f * inv.get(c, k);
                    inv.set(r, k, w);
                }
            }
        }
        Ok(inv)
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// Integer matrix `c·M` with `c` the least common denominator.
    pub fn clear_denominators(&self) -> (BigInt, Vec<BigInt>) {
        let l = lcm_of_denominators(self.data.iter());
        let ints = self.data.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
        (l, ints)
    }

    /// Canonical representative of the line through M: integral, content one,
    /// first nonzero entry positive. Two matrices are equal modulo scalars iff
    /// their normal forms coincide.
    pub fn projective_normal_form(&self) -> Vec<BigInt> {
        let (_, mut ints) = self.clear_denominators();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            return ints;
        }
        let neg = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
        for x in ints.iter_mut() {
            *x = &*x / &g;
            if neg {
                *x = -&*x;
            }
        }
        ints
    }

    pub fn projective_eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.projective_normal_form() == other.projective_normal_form()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| to_f64(self.get(i, j))).collect()).collect()
    }

    /// Block matrix `[[A, v],[0, c]]`.
    pub fn affine_block(a: &Self, v: &[Rational], c: Rational) -> Self {
        let d = a.rows;
        assert!(a.is_square() && v.len() == d);
        let mut m = Self::zeros(d + 1, d + 1);
        for (i, vi) in v.iter().enumerate() {
            for j in 0..d {
                m.set(i, j, a.get(i, j).clone());
            }
            m.set(i, d, vi.clone());
        }
        m.set(d, d, c);
        m
    }

    /// `u(x) = [[Id, x],[0, 1]]`.
    pub fn unipotent(x: &[Rational]) -> Self {
        Self::affine_block(&Self::identity(x.len()), x, Rational::one())
    }

    /// `a(t) = diag(t·Id_d, 1)`.
    pub fn dilation(d: usize, t: &Rational) -> Self {
        let mut e = vec![t.clone(); d];
        e.push(Rational::one());
        Self::diagonal(&e)
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;

    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = RationalMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + a * b;
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

impl Mul for RationalMatrix {
    type Output = RationalMatrix;

    fn mul(self, rhs: RationalMatrix) -> RationalMatrix {
        &self * &rhs
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn det_and_inverse() {
        let m = RationalMatrix::from_rows(vec![vec![rat(1, 3), rat(-2, 3)], vec![int(0), int(1)]]);
        assert_eq!(m.det(), rat(1, 3));
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        assert_eq!(inv, RationalMatrix::from_rows(vec![vec![int(3), int(2)], vec![int(0), int(1)]]));
        let s = RationalMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(s.inverse().is_err());
        assert_eq!(s.det(), int(0));
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn projective_forms() {
        let m = RationalMatrix::from_rows(vec![vec![rat(1, 3), rat(-2, 3)], vec![int(0), int(1)]]);
        let nf = m.projective_normal_form();
        let expect: Vec<BigInt> = [1, -2, 0, 3].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(nf, expect);
        assert!(m.projective_eq(&m.scale(&rat(-7, 5))));
        assert!(!m.projective_eq(&RationalMatrix::identity(2)));
    }

    #[test]
    fn det_of_permuted_rows() {
        let m = RationalMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]]);
        assert_eq!(m.det(), int(-5));
    }
}
