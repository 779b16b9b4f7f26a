//! Monte-Carlo and exhaustive experiments on orbits in the space of lattices.
//!
//! Trial `i` draws from a ChaCha8 stream keyed by `(seed, i)`, so results do
//! not depend on the number of worker threads.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::ifs::{compose_word, point_of_word, LetterSampler, RationalIfs, Word, ENUMERATION_CAP};
use crate::lattice::{
    an_star_test, cusp_constant, cusp_haar_bracket, flow_f64, shortest_vector_f64, AnStarMode, NormSpec,
    UnimodularLattice,
};
use crate::matrix::RationalMatrix;
use crate::point::RatPoint;
use crate::rational::{pow, to_f64, Rational};
use crate::transform::{dyadic_profile, ApproxFunction};

pub const MIN_SAMPLES: usize = 100;
pub const DEFAULT_FRACTAL_DEPTH: usize = 40;

/// Existential constants of the bracket formulas, supplied by the user.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketConstants {
    pub c_f: f64,
    pub kappa_star: f64,
    pub delta: f64,
    pub c_prime: f64,
}

impl Default for BracketConstants {
    fn default() -> Self {
        Self { c_f: 1.0, kappa_star: 0.05, delta: 0.05, c_prime: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub samples: usize,
    pub seed: u64,
    pub eps: Vec<f64>,
    pub alpha: Word,
    pub norm: NormSpec,
    /// Word length of fractal samples.
    pub depth: usize,
    pub constants: BracketConstants,
}

impl ExperimentConfig {
    pub fn new(d: usize, samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            eps: Vec::new(),
            alpha: Word::empty(),
            norm: NormSpec::max(d),
            depth: DEFAULT_FRACTAL_DEPTH,
            constants: BracketConstants::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < MIN_SAMPLES {
            return domain(format!("sample count must be at least {MIN_SAMPLES}"));
        }
        if self.depth == 0 {
            return domain("sample depth must be positive");
        }
        if self.eps.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
            return domain("cusp radii must lie in (0,1)");
        }
        Ok(())
    }
}

/// Where sample points `x` come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    /// The self-similar measure of the IFS.
    Fractal,
    /// Lebesgue measure on `[0,1)^d`, on the grid `2^{-64}ℤ^d`.
    Lebesgue,
}

fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn draw_word(ifs: &RationalIfs, sampler: &LetterSampler, depth: usize, rng: &mut ChaCha8Rng) -> Word {
    Word((0..depth).map(|_| ifs.labels()[sampler.draw(rng)]).collect())
}

struct FloatMap {
    rho: f64,
    rot: Vec<Vec<f64>>,
    shift: Vec<f64>,
}

fn float_maps(ifs: &RationalIfs) -> Vec<FloatMap> {
    ifs.maps()
        .iter()
        .map(|m| FloatMap {
            rho: to_f64(m.rho()),
            rot: m.rot().to_f64(),
            shift: m.shift().iter().map(to_f64).collect(),
        })
        .collect()
}

fn sample_f64(
    ifs: &RationalIfs,
    maps: &[FloatMap],
    sampler: &LetterSampler,
    source: Source,
    depth: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    let d = ifs.dim();
    match source {
        Source::Lebesgue => (0..d).map(|_| rng.random::<u64>() as f64 * 2f64.powi(-64)).collect(),
        Source::Fractal => {
            let idx: Vec<usize> = (0..depth).map(|_| sampler.draw(rng)).collect();
            let mut y = vec![0.0; d];
            for &i in idx.iter().rev() {
                let m = &maps[i];
                y = (0..d).map(|r| m.rho * (0..d).map(|c| m.rot[r][c] * y[c]).sum::<f64>() + m.shift[r]).collect();
            }
            y
        }
    }
}

fn sample_exact(
    ifs: &RationalIfs,
    sampler: &LetterSampler,
    source: Source,
    depth: usize,
    rng: &mut ChaCha8Rng,
) -> Result<RatPoint> {
    match source {
        Source::Lebesgue => RatPoint::new((0..ifs.dim()).map(|_| rng.random::<u64>() as i128).collect(), 1i128 << 64),
        Source::Fractal => RatPoint::from_rationals(&point_of_word(ifs, &draw_word(ifs, sampler, depth, rng))?.point),
    }
}

/// The lattice `k_α⁻¹ a(1/ρ_α) u(b_α) ℤ^{d+1}`; normalized, it is `k_α⁻¹ g_{−t_α} u(b_α)ℤ^{d+1}`.
pub fn basepoint(ifs: &RationalIfs, alpha: &Word) -> Result<UnimodularLattice> {
    let d = ifs.dim();
    let f = compose_word(ifs, alpha)?;
    let kinv = f.rot().inverse()?;
    let k_block = RationalMatrix::affine_block(&kinv, &vec![Rational::zero(); d], Rational::one());
    let a = RationalMatrix::dilation(d, &f.rho().recip());
    let u = RationalMatrix::unipotent(f.shift());
    let basis = &(&k_block * &a) * &u;
    let lat = UnimodularLattice::new(basis)?;
    assert_eq!(lat.det_abs, pow(f.rho(), -(d as i32)), "basepoint normalization is not unimodular");
    Ok(lat)
}

fn mat_mul_f64(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn unipotent_f64(x: &[f64]) -> Vec<Vec<f64>> {
    let n = x.len() + 1;
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    for (i, &xi) in x.iter().enumerate() {
        m[i][n - 1] = xi;
    }
    m
}

/// `λ₁(g_t u(x) · base)` for each `t`, with `base` already normalized.
fn orbit_lengths(base: &[Vec<f64>], x: &[f64], times: &[f64], norm: &NormSpec) -> Result<Vec<f64>> {
    let ux = mat_mul_f64(&unipotent_f64(x), base);
    times.iter().map(|&t| Ok(shortest_vector_f64(&mat_mul_f64(&flow_f64(norm.d, t), &ux), norm)?.1)).collect()
}

fn binomial_stderr(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquidistRow {
    pub t: f64,
    pub eps: f64,
    pub hits: usize,
    pub estimate: f64,
    pub stderr: f64,
    pub haar_lo: f64,
    pub haar_hi: f64,
}

impl EquidistRow {
    /// Whether the estimate lies in the bracket widened by `k` standard errors
    /// and a relative slack.
    pub fn within(&self, k: f64, rel_slack: f64) -> bool {
        let lo = self.haar_lo * (1.0 - rel_slack) - k * self.stderr;
        let hi = self.haar_hi * (1.0 + rel_slack) + k * self.stderr;
        self.estimate >= lo && self.estimate <= hi
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitTable {
    pub rows: Vec<EquidistRow>,
    /// `(t, [q10, q50, q90])` of the height `d₁`.
    pub height_quantiles: Vec<(f64, [f64; 3])>,
    pub samples: usize,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let i = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[i]
}

fn all_lengths(ifs: &RationalIfs, source: Source, cfg: &ExperimentConfig, times: &[f64]) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    if times.is_empty() {
        return domain("time list is empty");
    }
    if cfg.norm.d != ifs.dim() {
        return domain("norm and IFS dimensions differ");
    }
    let base = basepoint(ifs, &cfg.alpha)?.to_f64_rows();
    let maps = float_maps(ifs);
    let sampler = LetterSampler::new(ifs);
    (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, i);
            let x = sample_f64(ifs, &maps, &sampler, source, cfg.depth, &mut rng);
            orbit_lengths(&base, &x, times, &cfg.norm)
        })
        .collect()
}

/// Empirical `∫χ_{𝒞(ε)}(g_t u(x) x_α) dμ(x)` for each `t` and `ε`.
pub fn orbit_statistic(ifs: &RationalIfs, source: Source, cfg: &ExperimentConfig, times: &[f64]) -> Result<OrbitTable> {
    if cfg.eps.is_empty() {
        return domain("cusp radius list is empty");
    }
    let lengths = all_lengths(ifs, source, cfg, times)?;
    let n = cfg.samples;
    let mut rows = Vec::new();
    let mut height_quantiles = Vec::new();
    for (ti, &t) in times.iter().enumerate() {
        for &eps in &cfg.eps {
            let hits = lengths.iter().filter(|l| l[ti] < eps).count();
            let p = hits as f64 / n as f64;
            let (haar_lo, haar_hi) = cusp_haar_bracket(eps, &cfg.norm, cfg.constants.c_prime)?;
            rows.push(EquidistRow { t, eps, hits, estimate: p, stderr: binomial_stderr(p, n), haar_lo, haar_hi });
        }
        let mut h: Vec<f64> = lengths.iter().map(|l| 1.0 / l[ti]).collect();
        h.sort_by(f64::total_cmp);
        height_quantiles.push((t, [quantile(&h, 0.1), quantile(&h, 0.5), quantile(&h, 0.9)]));
    }
    Ok(OrbitTable { rows, height_quantiles, samples: n })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Correlation {
    pub t: f64,
    pub s: f64,
    pub joint: f64,
    pub product: f64,
    /// `joint − product`.
    pub gap: f64,
    pub stderr: f64,
}

/// Two-time correlation of cusp indicators along one sample.
pub fn double_correlation(
    ifs: &RationalIfs,
    source: Source,
    cfg: &ExperimentConfig,
    t: f64,
    s: f64,
    eps1: f64,
    eps2: f64,
) -> Result<Correlation> {
    if t < s {
        return domain("need t ≥ s");
    }
    let lengths = all_lengths(ifs, source, cfg, &[t, s])?;
    let n = cfg.samples as f64;
    let xs: Vec<(f64, f64)> =
        lengths.iter().map(|l| (f64::from(u8::from(l[0] < eps1)), f64::from(u8::from(l[1] < eps2)))).collect();
    let mx = xs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xs.iter().map(|p| p.1).sum::<f64>() / n;
    let joint = xs.iter().map(|p| p.0 * p.1).sum::<f64>() / n;
    let gap = joint - mx * my;
    let var = xs.iter().map(|p| ((p.0 - mx) * (p.1 - my) - gap).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(Correlation { t, s, joint, product: mx * my, gap, stderr: (var / n).sqrt() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct KhintchineRow {
    pub n: u32,
    pub t_n: f64,
    pub r_tn: f64,
    pub mu_an_hat: f64,
    pub stderr: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub in_g0: bool,
    pub cum_hit: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KhintchineScan {
    pub rows: Vec<KhintchineRow>,
    /// `ψ^d(2^n) ≤ 2^{−n}` on the whole range.
    pub dirichlet_normalized: bool,
    /// `ψ^d(2^n) ≥ 1/(2^n (n ln 2)^{1.1})` on the range, from `n = 2` on.
    pub lower_growth: bool,
}

/// Empirical `μ(A_n*)` for `n_lo ≤ n ≤ n_hi` with bracket values.
pub fn khintchine_scan(
    ifs: &RationalIfs,
    source: Source,
    psi: &ApproxFunction,
    cfg: &ExperimentConfig,
    n_lo: u32,
    n_hi: u32,
) -> Result<KhintchineScan> {
    cfg.validate()?;
    if n_lo == 0 || n_lo > n_hi {
        return domain("need 1 ≤ n_lo ≤ n_hi");
    }
    if n_hi > 26 {
        return domain("n above 26 exceeds the exact-arithmetic range");
    }
    if psi.d != ifs.dim() {
        return domain("psi and IFS dimensions differ");
    }
    if !psi.is_monotone() {
        return domain("psi must be non-increasing");
    }
    let d = psi.d as f64;
    let dirichlet_normalized =
        (n_lo..=n_hi).all(|n| d * psi.ln_eval(2f64.powi(n as i32)) <= -(n as f64) * std::f64::consts::LN_2 + 1e-12);
    // only where log q > 1, so that the comparison function decreases
    let lower_growth = (n_lo.max(2)..=n_hi).all(|n| {
        let q = 2f64.powi(n as i32);
        d * psi.ln_eval(q) >= -(q.ln() + 1.1 * q.ln().ln()) - 1e-12
    });
    let sampler = LetterSampler::new(ifs);
    let masks: Vec<u64> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, i);
            let x = sample_exact(ifs, &sampler, source, cfg.depth, &mut rng)?;
            let mut m = 0u64;
            for n in n_lo..=n_hi {
                if an_star_test(&x, psi, n, AnStarMode::Direct)?.is_some() {
                    m |= 1 << n;
                }
            }
            Ok(m)
        })
        .collect::<Result<_>>()?;
    let cd = cusp_constant(&cfg.norm);
    let c = &cfg.constants;
    let total = cfg.samples as f64;
    let mut rows = Vec::new();
    let mut cum = 0u64;
    for n in n_lo..=n_hi {
        cum |= 1 << n;
        let p = masks.iter().filter(|&&m| m >> n & 1 == 1).count() as f64 / total;
        let cum_hit = masks.iter().filter(|&&m| m & cum != 0).count() as f64 / total;
        let prof = dyadic_profile(psi, n)?;
        let main = cd * (-(d + 1.0) * prof.r).exp();
        let second = c.c_prime * (-2.0 * (d + 1.0) * prof.r).exp();
        let equi = c.c_f * (-c.kappa_star * prof.t).exp();
        let decay = c.c_f * (-c.delta * n as f64).exp();
        rows.push(KhintchineRow {
            n,
            t_n: prof.t,
            r_tn: prof.r,
            mu_an_hat: p,
            stderr: binomial_stderr(p, cfg.samples),
            bracket_lo: main / 6.0 - second - equi,
            bracket_hi: 4.0 * main,
            in_g0: main / 12.0 >= second + equi + decay,
            cum_hit,
        });
    }
    Ok(KhintchineScan { rows, dirichlet_normalized, lower_growth })
}

/// Test functions on lattices.
#[derive(Clone, Debug, PartialEq)]
pub enum TestFn {
    One,
    /// Indicator of `λ₁ < ε`.
    Cusp(Rational),
    /// `d₁ = 1/λ₁`.
    Height,
}

impl TestFn {
    fn eval(&self, lat: &UnimodularLattice, norm: &NormSpec) -> Result<(f64, Option<Rational>)> {
        Ok(match self {
            TestFn::One => (1.0, Some(Rational::one())),
            TestFn::Cusp(eps) => {
                let hit = lat.in_cusp(eps, norm)?;
                (f64::from(u8::from(hit)), Some(Rational::from_integer(BigInt::from(u8::from(hit)))))
            }
            TestFn::Height => (lat.d1(norm)?, None),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkMode {
    Exact,
    Sampled,
}

impl WalkMode {
    pub fn label(self) -> &'static str {
        match self {
            WalkMode::Exact => "exact",
            WalkMode::Sampled => "sampled",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkAverage {
    pub n: usize,
    pub value: f64,
    /// Exact value for rational-valued tests in exact mode.
    pub exact: Option<Rational>,
    pub mode: WalkMode,
}

/// `Σ_{ω∈Λ^n} λ_ω φ(a(ρ^{−n}) u(b_ω) x_α)` for an IFS with one common ratio and
/// no rotations; sampled with `samples` words when `|Λ|^n` exceeds the cap.
pub fn walk_average(
    ifs: &RationalIfs,
    n: usize,
    test: &TestFn,
    alpha: &Word,
    norm: &NormSpec,
    samples: usize,
    seed: u64,
) -> Result<WalkAverage> {
    let rho = ifs.maps()[0].rho().clone();
    if ifs.maps().iter().any(|m| *m.rho() != rho || !m.rot().is_identity()) {
        return domain("walk averages need a common contraction ratio and trivial rotations");
    }
    let d = ifs.dim();
    let x = basepoint(ifs, alpha)?;
    let a = RationalMatrix::dilation(d, &pow(&rho, -(n as i32)));
    let term = |w: &Word| -> Result<(f64, Option<Rational>)> {
        let f = compose_word(ifs, w)?;
        let m = &(&a * &RationalMatrix::unipotent(f.shift())) * &x.basis;
        test.eval(&UnimodularLattice::new(m)?, norm)
    };
    let count = (ifs.len() as f64).powi(n as i32);
    if count <= ENUMERATION_CAP as f64 {
        let words = ifs.words(n);
        let parts: Vec<(Rational, (f64, Option<Rational>))> =
            words.par_iter().map(|w| Ok((crate::ifs::cylinder_measure(ifs, w)?, term(w)?))).collect::<Result<_>>()?;
        let value = parts.iter().map(|(l, v)| to_f64(l) * v.0).sum();
        let exact = parts.iter().map(|(l, v)| v.1.as_ref().map(|e| l * e)).sum::<Option<Rational>>();
        return Ok(WalkAverage { n, value: exact.as_ref().map_or(value, to_f64), exact, mode: WalkMode::Exact });
    }
    if samples < MIN_SAMPLES {
        return domain(format!("sample count must be at least {MIN_SAMPLES}"));
    }
    let sampler = LetterSampler::new(ifs);
    let vals: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            Ok(term(&draw_word(ifs, &sampler, n, &mut rng))?.0)
        })
        .collect::<Result<_>>()?;
    Ok(WalkAverage { n, value: vals.iter().sum::<f64>() / samples as f64, exact: None, mode: WalkMode::Sampled })
}

/// `p^{−m} Σ_{0≤k<p^m} φ(a(p^m) u(k p^{−m}) x)` for `d = 1`.
pub fn rational_points_average(
    p: u64,
    m: u32,
    test: &TestFn,
    x: &UnimodularLattice,
    norm: &NormSpec,
) -> Result<(f64, Option<Rational>)> {
    if x.dim() != 2 || norm.d != 1 {
        return Err(Error::UnsupportedDimension(x.dim().saturating_sub(1)));
    }
    if p < 2 {
        return domain("p must be at least 2");
    }
    let pm = (p as u128).checked_pow(m).filter(|&v| v <= ENUMERATION_CAP as u128);
    let Some(pm) = pm else { return domain("p^m exceeds the enumeration cap") };
    let pm_r = Rational::from_integer(BigInt::from(pm));
    let a = RationalMatrix::dilation(1, &pm_r);
    let terms: Vec<(f64, Option<Rational>)> = (0..pm)
        .into_par_iter()
        .map(|k| {
            let u = RationalMatrix::unipotent(&[Rational::new(BigInt::from(k), BigInt::from(pm))]);
            test.eval(&UnimodularLattice::new(&(&a * &u) * &x.basis)?, norm)
        })
        .collect::<Result<_>>()?;
    let value = terms.iter().map(|v| v.0).sum::<f64>() / pm as f64;
    let exact = terms.iter().map(|v| v.1.clone()).sum::<Option<Rational>>().map(|s| s / &pm_r);
    Ok((exact.as_ref().map_or(value, to_f64), exact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn cantor3() -> RationalIfs {
        RationalIfs::missing_digit(3, &[0, 2]).unwrap()
    }

    #[test]
    fn basepoint_is_exact() {
        let ifs = cantor3();
        let lat = basepoint(&ifs, &Word(vec![2])).unwrap();
        let expect = RationalMatrix::from_rows(vec![vec![int(3), int(2)], vec![int(0), int(1)]]);
        assert_eq!(lat.basis, expect);
        assert_eq!(lat.det_abs, int(3));
        assert_eq!(basepoint(&ifs, &Word::empty()).unwrap().basis, RationalMatrix::identity(2));
    }

    #[test]
    fn rational_average_nine_terms() {
        let x = UnimodularLattice::new(RationalMatrix::identity(2)).unwrap();
        let norm = NormSpec::max(1);
        let (v, e) = rational_points_average(3, 2, &TestFn::Cusp(rat(1, 2)), &x, &norm).unwrap();
        assert_eq!(e, Some(rat(1, 3)));
        assert_eq!(v, 1.0 / 3.0);
        // brute force over small coefficient vectors
        let mut hits = 0;
        for k in 0..9i64 {
            let short = (-2i64..=2)
                .any(|a| (-2i64..=2).any(|b| (a, b) != (0, 0) && 2 * (9 * a + k * b).abs() < 3 && 2 * b.abs() < 3));
            hits += i32::from(short);
        }
        assert_eq!(hits, 3);
        let (_, e0) = rational_points_average(3, 0, &TestFn::Cusp(rat(1, 2)), &x, &norm).unwrap();
        assert_eq!(e0, Some(int(0)));
    }

    #[test]
    fn walk_conserves_probability() {
        let ifs = cantor3();
        let norm = NormSpec::max(1);
        for n in 0..4 {
            let w = walk_average(&ifs, n, &TestFn::One, &Word::empty(), &norm, 100, 1).unwrap();
            assert_eq!(w.exact, Some(int(1)));
            assert_eq!(w.mode, WalkMode::Exact);
        }
        let w0 = walk_average(&ifs, 0, &TestFn::Height, &Word::empty(), &norm, 100, 1).unwrap();
        assert_eq!(w0.value, 1.0);
    }

    #[test]
    fn walk_height_four_words() {
        let ifs = cantor3();
        let norm = NormSpec::max(1);
        let w = walk_average(&ifs, 2, &TestFn::Height, &Word::empty(), &norm, 100, 1).unwrap();
        // lattices [[9, b],[0,1]]/3 with b = 9·b_ω ∈ {0, 2, 6, 8}
        let mut total = 0.0;
        for b in [0i64, 2, 6, 8] {
            let mut best = f64::INFINITY;
            for p in -3i64..=3 {
                for q in -3i64..=3 {
                    if (p, q) != (0, 0) {
                        best = best.min(((9 * p + b * q).abs().max(q.abs())) as f64 / 3.0);
                    }
                }
            }
            total += 0.25 / best;
        }
        assert!((w.value - total).abs() < 1e-12);
    }

    #[test]
    fn orbit_at_time_zero_matches_direct_count() {
        let ifs = RationalIfs::missing_digit(2, &[0, 1]).unwrap();
        let mut cfg = ExperimentConfig::new(1, 400, 7);
        cfg.eps = vec![0.3, 0.5];
        let table = orbit_statistic(&ifs, Source::Lebesgue, &cfg, &[0.0]).unwrap();
        // u(x)ℤ² has a vector (p + qx, q) of sup norm < ε < 1 only with q = 0, so λ₁ = 1
        assert!(table.rows.iter().all(|r| r.hits == 0));
        let again = orbit_statistic(&ifs, Source::Lebesgue, &cfg, &[0.0, 1.5]).unwrap();
        assert_eq!(again.rows[..2], table.rows[..]);
        // monotone coupling in ε
        assert!(again.rows[2].hits <= again.rows[3].hits);
    }

    #[test]
    fn correlation_diagonal_is_mean() {
        let ifs = cantor3();
        let mut cfg = ExperimentConfig::new(1, 500, 3);
        cfg.eps = vec![0.4];
        let c = double_correlation(&ifs, Source::Fractal, &cfg, 2.0, 2.0, 0.4, 0.4).unwrap();
        let t = orbit_statistic(&ifs, Source::Fractal, &cfg, &[2.0]).unwrap();
        assert!((c.joint - t.rows[0].estimate).abs() < 1e-15);
        assert!(double_correlation(&ifs, Source::Fractal, &cfg, 1.0, 2.0, 0.4, 0.4).is_err());
    }

    #[test]
    fn khintchine_scan_is_deterministic() {
        let ifs = RationalIfs::missing_digit(2, &[0, 1]).unwrap();
        let cfg = ExperimentConfig::new(1, 200, 11);
        let psi = ApproxFunction::recip(1);
        let a = khintchine_scan(&ifs, Source::Lebesgue, &psi, &cfg, 1, 10).unwrap();
        let b = khintchine_scan(&ifs, Source::Lebesgue, &psi, &cfg, 1, 10).unwrap();
        assert_eq!(a, b);
        assert!(a.dirichlet_normalized);
        assert!(a.rows.windows(2).all(|w| w[0].cum_hit <= w[1].cum_hit));
        assert!(ExperimentConfig::new(1, 99, 0).validate().is_err());
    }
}
