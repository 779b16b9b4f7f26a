//! Lattices in ℝ^{d+1}: flows, shortest vectors, cusp sets, Siegel counts and
//! the dyadic approximation events.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::matrix::RationalMatrix;
use crate::point::{RatPoint, MAX_Q};
use crate::rational::{ceil, floor, gcd_all, pow, to_f64, Rational};
use crate::transform::{dyadic_profile, ApproxFunction};

/// Norm on ℝ^d extended by `max{‖x_{1..d}‖, |x_{d+1}|}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseNorm {
    Max,
    Euclidean,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormSpec {
    pub d: usize,
    pub base: BaseNorm,
}

impl NormSpec {
    pub fn max(d: usize) -> Self {
        Self { d, base: BaseNorm::Max }
    }

    pub fn euclidean(d: usize) -> Self {
        Self { d, base: BaseNorm::Euclidean }
    }

    /// Volume of the unit ball in ℝ^{d+1}.
    pub fn unit_ball_volume(&self) -> f64 {
        let d = self.d as f64;
        match self.base {
            BaseNorm::Max => 2f64.powi(self.d as i32 + 1),
            BaseNorm::Euclidean => 2.0 * PI.powf(d / 2.0) / gamma_half_int(self.d + 2),
        }
    }

    /// Squared norm, exact.
    pub fn key(&self, v: &[Rational]) -> Rational {
        let last = &v[self.d] * &v[self.d];
        let head = match self.base {
            BaseNorm::Max => v[..self.d].iter().map(|x| x * x).max().unwrap_or_else(Rational::zero),
            BaseNorm::Euclidean => v[..self.d].iter().map(|x| x * x).sum(),
        };
        if head > last {
            head
        } else {
            last
        }
    }

    pub fn norm_f64(&self, v: &[f64]) -> f64 {
        let head = match self.base {
            BaseNorm::Max => v[..self.d].iter().fold(0.0f64, |m, x| m.max(x.abs())),
            BaseNorm::Euclidean => v[..self.d].iter().map(|x| x * x).sum::<f64>().sqrt(),
        };
        head.max(v[self.d].abs())
    }
}

/// `Γ(k/2)` for a positive integer k.
fn gamma_half_int(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        (1..k / 2).map(|i| i as f64).product()
    } else {
        let mut g = PI.sqrt();
        let mut x = 0.5;
        while x < k as f64 / 2.0 - 0.25 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

/// Riemann zeta at an integer `s ≥ 2` by a direct sum with an Euler–Maclaurin tail.
pub fn zeta(s: u32) -> f64 {
    assert!(s >= 2);
    let n = 1000usize;
    let sf = s as f64;
    let head: f64 = (1..n).rev().map(|k| (k as f64).powf(-sf)).sum();
    let nf = n as f64;
    head + nf.powf(1.0 - sf) / (sf - 1.0) + 0.5 * nf.powf(-sf) + sf / 12.0 * nf.powf(-sf - 1.0)
        - sf * (sf + 1.0) * (sf + 2.0) / 720.0 * nf.powf(-sf - 3.0)
}

/// `C_d = 𝔠_{d+1}/(2ζ(d+1))`.
pub fn cusp_constant(norm: &NormSpec) -> f64 {
    norm.unit_ball_volume() / (2.0 * zeta(norm.d as u32 + 1))
}

/// `(C_d ε^{d+1} − C′ ε^{2(d+1)}, C_d ε^{d+1})`.
pub fn cusp_haar_bracket(eps: f64, norm: &NormSpec, c_prime: f64) -> Result<(f64, f64)> {
    if !(eps > 0.0 && eps < 1.0) {
        return domain("cusp radius must lie in (0,1)");
    }
    if c_prime < 0.0 {
        return domain("C' must be nonnegative");
    }
    let k = norm.d as i32 + 1;
    let hi = cusp_constant(norm) * eps.powi(k);
    Ok((hi - c_prime * eps.powi(2 * k), hi))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Translate {
    /// `g_t = diag(e^{t/d} Id, e^{−t})`.
    Flow { d: usize, t: f64 },
    /// `g_t` with `e^{t/d} = scale` rational.
    FlowExact { d: usize, scale: Rational },
    /// `u(x)`.
    Horosphere(Vec<Rational>),
    /// `a(t) = diag(t Id, 1)`.
    Dilation { d: usize, t: Rational },
}

#[derive(Clone, Debug, PartialEq)]
pub enum TranslateMatrix {
    Exact(RationalMatrix),
    Float(Vec<Vec<f64>>),
}

pub fn translate_matrix(kind: &Translate) -> Result<TranslateMatrix> {
    Ok(match kind {
        Translate::Flow { d, t } => TranslateMatrix::Float(flow_f64(*d, *t)),
        Translate::FlowExact { d, scale } => {
            if !scale.is_positive() {
                return domain("flow scale must be positive");
            }
            let mut e = vec![scale.clone(); *d];
            e.push(pow(scale, -(*d as i32)));
            TranslateMatrix::Exact(RationalMatrix::diagonal(&e))
        }
        Translate::Horosphere(x) => TranslateMatrix::Exact(RationalMatrix::unipotent(x)),
        Translate::Dilation { d, t } => {
            if t.is_zero() {
                return domain("dilation parameter must be nonzero");
            }
            TranslateMatrix::Exact(RationalMatrix::dilation(*d, t))
        }
    })
}

pub fn flow_f64(d: usize, t: f64) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; d + 1]; d + 1];
    for (i, row) in m.iter_mut().enumerate().take(d) {
        row[i] = (t / d as f64).exp();
    }
    m[d][d] = (-t).exp();
    m
}

/// Shortest nonzero vector with respect to a [`NormSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct ShortestVector {
    /// Coefficients in the input basis.
    pub coeffs: Vec<BigInt>,
    pub vector: Vec<Rational>,
    /// Squared norm.
    pub key: Rational,
    pub length: f64,
    pub d1: f64,
}

fn columns(b: &RationalMatrix) -> Vec<Vec<Rational>> {
    (0..b.cols()).map(|j| b.column(j)).collect()
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn round_half_up(x: &Rational) -> BigInt {
    floor(&(x + Rational::new(1.into(), 2.into())))
}

/// Gram–Schmidt coefficients `μ` and squared lengths `‖b*_i‖²`.
fn gso(b: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let n = b.len();
    let mut star: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![Rational::zero(); n]; n];
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = b[i].clone();
        for j in 0..i {
            mu[i][j] = dot(&b[i], &star[j]) / &norms[j];
            for (vk, sk) in v.iter_mut().zip(&star[j]) {
                *vk -= &mu[i][j] * sk;
            }
        }
        norms.push(dot(&v, &v));
        star.push(v);
    }
    (mu, norms)
}

/// Exact LLL with `δ = 3/4`. Returns the reduced columns and, for each, its
/// integer coefficients in the input basis.
pub fn lll_exact(mut b: Vec<Vec<Rational>>) -> (Vec<Vec<Rational>>, Vec<Vec<BigInt>>) {
    let n = b.len();
    let mut tr: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let delta = Rational::new(3.into(), 4.into());
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gso(&b);
            let q = round_half_up(&mu[k][j]);
            if !q.is_zero() {
                let qr = Rational::from_integer(q.clone());
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &qr * y;
                }
                let tj = tr[j].clone();
                for (x, y) in tr[k].iter_mut().zip(&tj) {
                    *x -= &q * y;
                }
            }
        }
        let (mu, norms) = gso(&b);
        let m = &mu[k][k - 1];
        if norms[k] >= (&delta - m * m) * &norms[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            tr.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    (b, tr)
}

/// Exact shortest nonzero vector by LLL followed by enumeration inside the
/// coefficient box `|c_i| ≤ Σ_j |B⁻¹_{ij}|·‖v‖_∞`.
pub fn shortest_vector(basis: &RationalMatrix, norm: &NormSpec) -> Result<ShortestVector> {
    let n = basis.cols();
    if !basis.is_square() || n != norm.d + 1 {
        return domain("basis must be square of size d+1");
    }
    if n > 4 {
        return Err(Error::UnsupportedDimension(norm.d));
    }
    if basis.det().is_zero() {
        return domain("singular basis");
    }
    let (red, tr) = lll_exact(columns(basis));
    let mut rm = RationalMatrix::zeros(n, n);
    for (j, col) in red.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            rm.set(i, j, x.clone());
        }
    }
    let inv = rm.inverse()?;
    let rowsum_sq: Vec<Rational> = (0..n)
        .map(|i| {
            let s: Rational = (0..n).map(|j| inv.get(i, j).abs()).sum();
            &s * &s
        })
        .collect();
    let (mut best_idx, mut best_key) = (0usize, norm.key(&red[0]));
    for (j, col) in red.iter().enumerate().skip(1) {
        let k = norm.key(col);
        if k < best_key {
            best_idx = j;
            best_key = k;
        }
    }
    let mut best_c: Vec<BigInt> = (0..n).map(|j| if j == best_idx { BigInt::one() } else { BigInt::zero() }).collect();
    let mut c = vec![BigInt::zero(); n];
    enumerate_exact(&red, norm, &rowsum_sq, 0, &mut c, &mut best_key, &mut best_c);
    let coeffs: Vec<BigInt> =
        (0..n).map(|i| (0..n).map(|j| &best_c[j] * &tr[j][i]).fold(BigInt::zero(), |a, b| a + b)).collect();
    let vector = basis.mul_vec(&coeffs.iter().map(|x| Rational::from_integer(x.clone())).collect::<Vec<_>>());
    debug_assert_eq!(norm.key(&vector), best_key);
    let length = to_f64(&best_key).sqrt();
    Ok(ShortestVector { coeffs, vector, key: best_key, length, d1: 1.0 / length })
}

fn enumerate_exact(
    red: &[Vec<Rational>],
    norm: &NormSpec,
    rowsum_sq: &[Rational],
    level: usize,
    c: &mut Vec<BigInt>,
    best_key: &mut Rational,
    best_c: &mut Vec<BigInt>,
) {
    let n = red.len();
    if level == n {
        if c.iter().all(Zero::is_zero) {
            return;
        }
        let mut v = vec![Rational::zero(); n];
        for (cj, col) in c.iter().zip(red) {
            if cj.is_zero() {
                continue;
            }
            let cr = Rational::from_integer(cj.clone());
            for (vi, x) in v.iter_mut().zip(col) {
                *vi += &cr * x;
            }
        }
        let k = norm.key(&v);
        if k < *best_key {
            *best_key = k;
            *best_c = c.clone();
        }
        return;
    }
    let bound = floor(&(&rowsum_sq[level] * &*best_key)).sqrt();
    let mut x = -bound.clone();
    while x <= bound {
        c[level] = x.clone();
        enumerate_exact(red, norm, rowsum_sq, level + 1, c, best_key, best_c);
        // the bound may have shrunk
        let nb = floor(&(&rowsum_sq[level] * &*best_key)).sqrt();
        if x >= nb {
            break;
        }
        x += 1;
    }
    c[level] = BigInt::zero();
}

/// Floating-point LLL with `δ = 0.99`; returns reduced columns and integer transforms.
fn lll_f64(mut b: Vec<Vec<f64>>) -> (Vec<Vec<f64>>, Vec<Vec<i64>>) {
    let n = b.len();
    let mut tr: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let dotf = |a: &[f64], c: &[f64]| a.iter().zip(c).map(|(x, y)| x * y).sum::<f64>();
    let gsof = |b: &[Vec<f64>]| {
        let mut star: Vec<Vec<f64>> = Vec::new();
        let mut mu = vec![vec![0.0; n]; n];
        let mut nr = Vec::new();
        for i in 0..n {
            let mut v = b[i].clone();
            for j in 0..i {
                mu[i][j] = dotf(&b[i], &star[j]) / nr[j];
                for (vk, sk) in v.iter_mut().zip(&star[j]) {
                    *vk -= mu[i][j] * sk;
                }
            }
            nr.push(dotf(&v, &v));
            star.push(v);
        }
        (mu, nr)
    };
    let mut k = 1;
    let mut guard = 0;
    while k < n && guard < 10_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (mu, _) = gsof(&b);
            let q = mu[k][j].round();
            if q != 0.0 {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
                let tj = tr[j].clone();
                for (x, y) in tr[k].iter_mut().zip(&tj) {
                    *x -= q as i64 * y;
                }
            }
        }
        let (mu, nr) = gsof(&b);
        if nr[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * nr[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            tr.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    (b, tr)
}

/// Floating-point shortest vector of the lattice spanned by the columns of `rows`.
/// Returns the coefficients in the input basis and the length.
pub fn shortest_vector_f64(rows: &[Vec<f64>], norm: &NormSpec) -> Result<(Vec<i64>, f64)> {
    let n = rows.len();
    if n != norm.d + 1 || rows.iter().any(|r| r.len() != n) {
        return domain("basis must be square of size d+1");
    }
    let cols: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| rows[i][j]).collect()).collect();
    let (red, tr) = lll_f64(cols);
    let m = DMatrix::from_fn(n, n, |i, j| red[j][i]);
    let inv = m.try_inverse().ok_or_else(|| Error::Domain("singular basis".into()))?;
    let rowsum: Vec<f64> = (0..n).map(|i| (0..n).map(|j| inv[(i, j)].abs()).sum()).collect();
    let mut best_len = f64::INFINITY;
    let mut best_c = vec![0i64; n];
    for (j, col) in red.iter().enumerate() {
        let l = norm.norm_f64(col);
        if l < best_len {
            best_len = l;
            best_c = (0..n).map(|i| i64::from(i == j)).collect();
        }
    }
    let mut c = vec![0i64; n];
    let mut v = vec![0.0; n];
    enumerate_f64(&red, norm, &rowsum, 0, &mut c, &mut v, &mut best_len, &mut best_c);
    let coeffs = (0..n).map(|i| (0..n).map(|j| best_c[j] * tr[j][i]).sum()).collect();
    Ok((coeffs, best_len))
}

#[allow(clippy::too_many_arguments)]
fn enumerate_f64(
    red: &[Vec<f64>],
    norm: &NormSpec,
    rowsum: &[f64],
    level: usize,
    c: &mut Vec<i64>,
    v: &mut Vec<f64>,
    best_len: &mut f64,
    best_c: &mut Vec<i64>,
) {
    let n = red.len();
    if level == n {
        if c.iter().all(|&x| x == 0) {
            return;
        }
        let l = norm.norm_f64(v);
        if l < *best_len {
            *best_len = l;
            *best_c = c.clone();
        }
        return;
    }
    let bound = |b: f64| (rowsum[level] * b * (1.0 + 1e-9)).floor() as i64;
    let mut x = -bound(*best_len);
    while x <= bound(*best_len) {
        c[level] = x;
        for (vi, col) in v.iter_mut().zip(&red[level]) {
            *vi += x as f64 * col;
        }
        enumerate_f64(red, norm, rowsum, level + 1, c, v, best_len, best_c);
        for (vi, col) in v.iter_mut().zip(&red[level]) {
            *vi -= x as f64 * col;
        }
        x += 1;
    }
    c[level] = 0;
}

/// The lattice `c·Bℤ^{d+1}` with `c^{d+1}·|det B| = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnimodularLattice {
    pub basis: RationalMatrix,
    pub det_abs: Rational,
}

impl UnimodularLattice {
    pub fn new(basis: RationalMatrix) -> Result<Self> {
        let det = basis.det();
        if det.is_zero() {
            return domain("singular basis");
        }
        Ok(Self { basis, det_abs: det.abs() })
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// The normalizing scale `c`.
    pub fn scale(&self) -> f64 {
        to_f64(&self.det_abs).powf(-1.0 / self.dim() as f64)
    }

    /// Exact test of `c·λ₁ < ε`, i.e. `λ₁^{d+1} < ε^{d+1}·|det|`.
    pub fn in_cusp(&self, eps: &Rational, norm: &NormSpec) -> Result<bool> {
        let sv = shortest_vector(&self.basis, norm)?;
        Ok(Self::cusp_from_key(&sv.key, &self.det_abs, eps, self.dim()))
    }

    pub fn cusp_from_key(key: &Rational, det_abs: &Rational, eps: &Rational, k: usize) -> bool {
        // squares of both sides of λ^k < ε^k |det|
        let lhs = num_traits::pow(key.clone(), k);
        let e2 = eps * eps;
        let rhs = num_traits::pow(e2, k) * det_abs * det_abs;
        lhs < rhs
    }

    pub fn d1(&self, norm: &NormSpec) -> Result<f64> {
        let sv = shortest_vector(&self.basis, norm)?;
        Ok(1.0 / (self.scale() * sv.length))
    }

    /// Float rows of the normalized basis `c·B`.
    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        let c = self.scale();
        self.basis.to_f64().into_iter().map(|r| r.into_iter().map(|x| x * c).collect()).collect()
    }
}

/// Number of primitive lattice vectors `Bc` (gcd of `c` equal to one) inside
/// the open box `∏(−h_i, h_i)`; `None` marks an unbounded side.
pub fn siegel_count(basis: &RationalMatrix, half_widths: &[Option<Rational>]) -> Result<u64> {
    let n = basis.cols();
    if !basis.is_square() || half_widths.len() != n {
        return domain("box and basis dimensions differ");
    }
    if n > 4 {
        return Err(Error::UnsupportedDimension(n - 1));
    }
    let h: Vec<Rational> = half_widths
        .iter()
        .map(|x| x.clone().ok_or_else(|| Error::Domain("unbounded box".into())))
        .collect::<Result<_>>()?;
    if h.iter().any(|x| !x.is_positive()) {
        return Ok(0);
    }
    let inv = basis.inverse()?;
    let bounds: Vec<BigInt> =
        (0..n).map(|i| floor(&(0..n).map(|j| inv.get(i, j).abs() * &h[j]).sum::<Rational>())).collect();
    let mut count = 0u64;
    let mut c: Vec<BigInt> = bounds.iter().map(|b| -b.clone()).collect();
    loop {
        if gcd_all(&c).is_one() {
            let v = basis.mul_vec(&c.iter().map(|x| Rational::from_integer(x.clone())).collect::<Vec<_>>());
            if v.iter().zip(&h).all(|(x, w)| x.abs() < *w) {
                count += 1;
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(count);
            }
            if c[i] < bounds[i] {
                c[i] += 1;
                break;
            }
            c[i] = -bounds[i].clone();
            i += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnStarMode {
    Direct,
    Lattice,
}

/// A primitive `(p, q)` with `2^{n−1} ≤ q < 2^n` and `‖q·x − p‖_∞ < ψ(2^n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub p: Vec<i128>,
    pub q: i128,
}

/// Membership of `x` in the dyadic approximation event of level `n`.
pub fn an_star_test(x: &RatPoint, psi: &ApproxFunction, n: u32, mode: AnStarMode) -> Result<Option<Witness>> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    if (1i128 << n) > MAX_Q {
        return domain("n exceeds the exact-arithmetic range of rational points");
    }
    if x.dim() != psi.d {
        return domain("point and psi dimensions differ");
    }
    match mode {
        AnStarMode::Direct => an_star_direct(x, psi, n),
        AnStarMode::Lattice => an_star_lattice(x, psi, n),
    }
}

fn an_star_direct(x: &RatPoint, psi: &ApproxFunction, n: u32) -> Result<Option<Witness>> {
    let thr = psi.eval(2f64.powi(n as i32));
    let (lo, hi) = (1i128 << (n - 1), 1i128 << n);
    if x.dim() == 1 && thr * (hi - 1) as f64 <= 1.0 {
        // any hit satisfies |x − p/q| < 1/q², so p/q is a convergent or an intermediate fraction
        let best = crate::transform::convergents_and_semiconvergents(x.num[0], x.den, hi)
            .into_iter()
            .filter(|c| c.q >= lo)
            .min_by(|a, b| x.err_cmp(&[a.p], a.q, &[b.p], b.q));
        return Ok(best.filter(|c| x.err_below(&[c.p], c.q, thr)).map(|c| Witness { p: vec![c.p], q: c.q }));
    }
    Ok(brute_force_block(x, thr, lo, hi))
}

/// First primitive hit with `lo ≤ q < hi`, scanning all `q`.
pub fn brute_force_block(x: &RatPoint, thr: f64, lo: i128, hi: i128) -> Option<Witness> {
    let xf = x.to_f64();
    for q in lo..hi {
        let mut cands: Vec<Vec<i128>> = Vec::with_capacity(x.dim());
        for (i, xi) in xf.iter().enumerate() {
            let c = xi * q as f64;
            let a = (c - thr).floor() as i128 - 1;
            let b = (c + thr).ceil() as i128 + 1;
            let ok: Vec<i128> = (a..=b).filter(|&p| coord_below(x, i, p, q, thr)).collect();
            if ok.is_empty() {
                break;
            }
            cands.push(ok);
        }
        if cands.len() < x.dim() {
            continue;
        }
        if let Some(p) = first_primitive(&cands, q) {
            return Some(Witness { p, q });
        }
    }
    None
}

fn coord_below(x: &RatPoint, i: usize, p: i128, q: i128, thr: f64) -> bool {
    let single = RatPoint { num: vec![x.num[i]], den: x.den };
    single.err_below(&[p], q, thr)
}

fn first_primitive(cands: &[Vec<i128>], q: i128) -> Option<Vec<i128>> {
    let mut idx = vec![0usize; cands.len()];
    loop {
        let p: Vec<i128> = idx.iter().zip(cands).map(|(&k, c)| c[k]).collect();
        if p.iter().fold(q, |g, v| g.gcd(v)) == 1 {
            return Some(p);
        }
        let mut i = 0;
        loop {
            if i == cands.len() {
                return None;
            }
            idx[i] += 1;
            if idx[i] < cands[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Primitive vectors `w` of `g_{t_n}u(x)ℤ^{d+1}` with `‖w_{1..d}‖ < e^{−r}` and
/// `e^{−r}/2 ≤ |w_{d+1}| < e^{−r}`, found by triangular enumeration. Floating
/// decisions within relative `1e−9` of a boundary are settled exactly.
fn an_star_lattice(x: &RatPoint, psi: &ApproxFunction, n: u32) -> Result<Option<Witness>> {
    let prof = dyadic_profile(psi, n)?;
    let d = x.dim();
    let s = (prof.t / d as f64).exp();
    let et = (-prof.t).exp();
    let er = (-prof.r).exp();
    let exact_thr = psi.eval(2f64.powi(n as i32));
    let near = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs();
    let top = (er / et * (1.0 + 1e-9)).ceil() as i128 + 1;
    let bottom = ((er / 2.0 / et) * (1.0 - 1e-9)).floor() as i128 - 1;
    let xf = x.to_f64();
    let box_half = er / s;
    for c_last in bottom.max(1)..=top {
        let w_last = c_last as f64 * et;
        let lower_ok = if near(w_last, er / 2.0) { c_last >= 1i128 << (n - 1) } else { w_last > er / 2.0 };
        let upper_ok = if near(w_last, er) { c_last < 1i128 << n } else { w_last < er };
        if !(lower_ok && upper_ok) {
            continue;
        }
        let mut cands: Vec<Vec<i128>> = Vec::with_capacity(d);
        for (i, xi) in xf.iter().enumerate() {
            let centre = -xi * c_last as f64;
            let a = (centre - box_half).floor() as i128 - 1;
            let b = (centre + box_half).ceil() as i128 + 1;
            let mut ok = Vec::new();
            for ci in a..=b {
                // w_i = s·(c_i + x_i·c_last) = s·(q·x_i − p) with p = −c_i, q = c_last
                let Some(res) = x.residual(i, -ci, c_last) else { continue };
                let wi = s * (res as f64 / x.den as f64).abs();
                let inside = if near(wi, er) { coord_below(x, i, -ci, c_last, exact_thr) } else { wi < er };
                if inside {
                    ok.push(ci);
                }
            }
            if ok.is_empty() {
                break;
            }
            cands.push(ok);
        }
        if cands.len() < d {
            continue;
        }
        if let Some(c) = first_primitive(&cands, c_last) {
            return Ok(Some(Witness { p: c.into_iter().map(|v| -v).collect(), q: c_last }));
        }
    }
    Ok(None)
}

/// `⌈x⌉` and `⌊x⌋` re-exported for enumeration helpers in other modules.
pub fn int_range(lo: &Rational, hi: &Rational) -> (BigInt, BigInt) {
    (ceil(lo), floor(hi))
}

/// Convert small exact integer coefficients to `i64`.
pub fn coeffs_i64(c: &[BigInt]) -> Option<Vec<i64>> {
    c.iter().map(|x| x.to_i64()).collect()
}
