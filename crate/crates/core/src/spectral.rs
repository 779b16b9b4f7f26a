//! Explicit constants of the spectral-gap argument: structural and rate
//! constants, hypothesis checks, thresholds, Cantor gap sums and schedules.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Result};
use crate::ifs::{moran_dimension, RationalIfs};
use crate::rational::{pow, rat, to_f64, Rational};
use crate::sarith::index_exponents;

/// Shared slack `ε` used when none is given.
pub const DEFAULT_SLACK: f64 = 1e-6;

/// Largest pair count enumerated by the brute-force gap sum.
pub const GAP_SUM_BRUTE_CAP: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralConstants {
    pub d: u32,
    pub ell: u32,
    pub eps_d: Rational,
    pub v_d: u32,
    pub p: u32,
    pub kappa_prime: Rational,
    pub kappa: Rational,
    pub cap: u32,
}

fn kappa_prime(d: u32) -> Rational {
    if d == 1 {
        rat(25, 64)
    } else {
        rat(1, 2)
    }
}

fn build(d: u32, eps: &Rational) -> StructuralConstants {
    let ell = d * (d + 1) / 2;
    let eps_d = if d == 1 { rat(1, 2) } else { Rational::one() };
    let v_d = crate::sarith::v_of_d(d);
    let kp = kappa_prime(d);
    let denom = 2 + 2 * d + 6 * ell + d * d;
    let kappa = (&kp - eps) / Rational::from_integer(BigInt::from(denom));
    StructuralConstants { d, ell, eps_d, v_d, p: 2 * v_d, kappa_prime: kp, kappa, cap: d * (d + 1) }
}

/// Requires `0 < ε < κ′`.
pub fn structural_constants(d: u32, eps: &Rational) -> Result<StructuralConstants> {
    if d == 0 {
        return domain("d must be positive");
    }
    if !eps.is_positive() || *eps >= kappa_prime(d) {
        return domain(format!("slack {eps} must lie in (0, {})", kappa_prime(d)));
    }
    Ok(build(d, eps))
}

/// The `ε → 0` limit.
pub fn structural_limit(d: u32) -> Result<StructuralConstants> {
    if d == 0 {
        return domain("d must be positive");
    }
    Ok(build(d, &Rational::zero()))
}

impl StructuralConstants {
    /// `θ` solving `1/θ + ε(d)/(p+ε) = 1`.
    pub fn theta(&self, eps: f64) -> f64 {
        let pe = self.p as f64 + eps;
        pe / (pe - to_f64(&self.eps_d))
    }

    /// `q_ε = 2θ/(θ+1)`.
    pub fn q_eps(&self, eps: f64) -> f64 {
        let th = self.theta(eps);
        2.0 * th / (th + 1.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateConstants {
    pub r: f64,
    pub sigma: f64,
    pub o_eps: f64,
    pub upsilon: f64,
    pub q_eps: f64,
    pub theta: f64,
    pub big_l: f64,
    pub big_a: f64,
}

pub fn rate_constants(ifs: &RationalIfs, eps: f64) -> Result<RateConstants> {
    if ifs.len() < 2 {
        return domain("rate constants need at least two maps");
    }
    let d = ifs.dim() as u32;
    let sc = structural_limit(d)?;
    let theta = sc.theta(eps);
    let q = sc.q_eps(eps);
    let lam: Vec<f64> = ifs.lambda().iter().map(to_f64).collect();
    let rho: Vec<f64> = ifs.maps().iter().map(|m| to_f64(m.rho())).collect();
    let r: f64 = lam.iter().zip(&rho).map(|(l, p)| l * p).sum();
    let ln_inv_r = -r.ln();
    let second: f64 = lam.iter().zip(&rho).map(|(l, p)| l * l * p.powi(-(d as i32))).sum();
    let sigma = 0.5 * second.ln() / ln_inv_r;
    let o_eps = lam.iter().map(|l| l.powf(q)).sum::<f64>().ln() / (q * r.ln());
    let idx = index_exponents(ifs)?;
    let rho_min = to_f64(&ifs.rho_min());
    let up: f64 = lam.iter().zip(&rho).map(|(l, p)| l * p.powi(-(sc.ell as i32))).sum();
    let upsilon = (-idx.l / 4.0 * rho_min.ln() + up.ln()) / ln_inv_r;
    Ok(RateConstants { r, sigma, o_eps, upsilon, q_eps: q, theta, big_l: idx.l, big_a: idx.a })
}

/// Exact `Σλ_i²ρ_i^{−d}`, which is at least one.
pub fn second_moment(ifs: &RationalIfs) -> Rational {
    let d = ifs.dim() as i32;
    ifs.lambda().iter().zip(ifs.maps()).map(|(l, m)| l * l * pow(m.rho(), -d)).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Threshold {
    pub eps0: Rational,
    /// Dimension threshold `1/(1+ε₀)` for uniform missing-digit sets.
    pub s_star: Rational,
}

/// `ε₀ = min{1, κε(d)/(dε(d) + (4ℓ+L)p)}`; `eps = 0` gives the limit.
pub fn threshold_main(d: u32, big_l: &Rational, eps: &Rational) -> Result<Threshold> {
    if !big_l.is_positive() {
        return domain("L must be positive");
    }
    if eps.is_negative() || *eps >= kappa_prime(d.max(1)) {
        return domain("slack out of range");
    }
    let sc = structural_limit(d)?;
    let sc = build(sc.d, eps);
    let dd = Rational::from_integer(BigInt::from(d));
    let four_ell = Rational::from_integer(BigInt::from(4 * sc.ell));
    let p = Rational::from_integer(BigInt::from(sc.p));
    let raw = &sc.kappa * &sc.eps_d / (&dd * &sc.eps_d + (four_ell + big_l) * p);
    let eps0 = if raw > Rational::one() { Rational::one() } else { raw };
    let s_star = (Rational::one() + &eps0).recip();
    Ok(Threshold { eps0, s_star })
}

/// The dimension stated as sufficient for uniform missing-digit sets.
pub const STATED_DIMENSION: f64 = 0.9992;

#[derive(Clone, Debug, PartialEq)]
pub struct GapReport {
    pub lhs: f64,
    pub kappa: f64,
    pub margin: f64,
    pub passed: bool,
    pub dimension: f64,
    /// `(d·logρ_min/logλ_max − 1)·logλ_min/(s·logρ_max)`.
    pub dimension_lhs: f64,
    pub eps0: f64,
    pub dimension_passed: bool,
}

pub fn gap_hypothesis(ifs: &RationalIfs, eps: f64) -> Result<GapReport> {
    let rc = rate_constants(ifs, eps)?;
    let d = ifs.dim() as u32;
    let eps_r = Rational::from_float(eps).ok_or_else(|| crate::Error::Domain("slack must be finite".into()))?;
    let sc = structural_constants(d, &eps_r)?;
    let kappa = to_f64(&sc.kappa);
    let lhs = if rc.sigma == 0.0 { 0.0 } else { 2.0 * rc.sigma * (rc.o_eps + rc.upsilon) / (rc.o_eps + rc.sigma) };
    let s = moran_dimension(ifs);
    let lam_max = ifs.lambda().iter().map(to_f64).fold(0.0, f64::max);
    let lam_min = ifs.lambda().iter().map(to_f64).fold(1.0, f64::min);
    let rho_min = to_f64(&ifs.rho_min());
    let rho_max = to_f64(&ifs.rho_max());
    let dimension_lhs = (d as f64 * rho_min.ln() / lam_max.ln() - 1.0) * lam_min.ln() / (s * rho_max.ln());
    let big_l = Rational::from_float(rc.big_l).expect("finite L");
    let eps0 = to_f64(&threshold_main(d, &big_l, &eps_r)?.eps0);
    Ok(GapReport {
        lhs,
        kappa,
        margin: kappa - lhs,
        passed: lhs < kappa,
        dimension: s,
        dimension_lhs,
        eps0,
        dimension_passed: dimension_lhs < eps0,
    })
}

/// Exponent `δ` of the gap sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GapDelta {
    Int(u32),
    Real(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CantorGapSum {
    pub exact: Option<Rational>,
    pub value: f64,
    pub brute: Option<f64>,
    pub brute_exact: Option<Rational>,
    /// Set when the brute-force enumeration exceeds [`GAP_SUM_BRUTE_CAP`].
    pub brute_skipped: bool,
}

impl CantorGapSum {
    pub fn agrees(&self) -> Option<bool> {
        match (&self.exact, &self.brute_exact, self.brute) {
            (Some(a), Some(b), _) => Some(a == b),
            (_, _, Some(b)) => Some((b - self.value).abs() <= 1e-12 * self.value.abs().max(1e-300)),
            _ => None,
        }
    }
}

/// `Σ_{η≠ω∈Λ^n} |Λ|^{−2n}·p^{−δ·d(η,ω)}` with `d(η,ω)` the last differing index.
pub fn cantor_gap_sum(p: u64, digits: &[u64], n: u32, delta: GapDelta, brute: bool) -> Result<CantorGapSum> {
    if !crate::rational::is_prime(p) {
        return domain("p must be prime");
    }
    let mut set = digits.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.len() < 2 || set.len() != digits.len() || set.iter().any(|&x| x >= p) {
        return domain("need at least two distinct digits below p");
    }
    if n == 0 {
        return domain("n must be positive");
    }
    let k = set.len() as u64;
    let kb = BigInt::from(k);
    let (exact, value) = match delta {
        GapDelta::Int(dl) => {
            let mut s = Rational::zero();
            for j in 1..=n {
                let term = Rational::new(
                    num_traits::pow(kb.clone(), (n + j - 1) as usize) * (&kb - 1),
                    num_traits::pow(BigInt::from(p), (dl * j) as usize),
                );
                s += term;
            }
            let s = s / Rational::from_integer(num_traits::pow(kb.clone(), 2 * n as usize));
            let v = to_f64(&s);
            (Some(s), v)
        }
        GapDelta::Real(dl) => {
            let kf = k as f64;
            let v: f64 = (1..=n)
                .map(|j| {
                    (-(dl * j as f64) * (p as f64).ln() + (j as f64 - 1.0 - n as f64) * kf.ln()).exp() * (kf - 1.0)
                })
                .sum();
            (None, v)
        }
    };
    let pairs = k.checked_pow(2 * n);
    let mut out = CantorGapSum { exact, value, brute: None, brute_exact: None, brute_skipped: false };
    if brute {
        if pairs.is_none_or(|c| c > GAP_SUM_BRUTE_CAP) {
            out.brute_skipped = true;
        } else {
            let counts = distance_counts(p, &set, n);
            match delta {
                GapDelta::Int(dl) => {
                    let s: Rational = counts
                        .iter()
                        .enumerate()
                        .map(|(j, &c)| {
                            Rational::new(BigInt::from(c), num_traits::pow(BigInt::from(p), dl as usize * j))
                        })
                        .sum::<Rational>()
                        / Rational::from_integer(num_traits::pow(kb, 2 * n as usize));
                    out.brute = Some(to_f64(&s));
                    out.brute_exact = Some(s);
                }
                GapDelta::Real(dl) => {
                    let tot = (k as f64).powi(2 * n as i32);
                    let s: f64 = counts
                        .iter()
                        .enumerate()
                        .map(|(j, &c)| c as f64 * (p as f64).powf(-dl * j as f64))
                        .sum::<f64>()
                        / tot;
                    out.brute = Some(s);
                }
            }
        }
    }
    Ok(out)
}

/// `counts[j]` is the number of ordered pairs at distance `j`, read off as
/// `n − v_p(B_η − B_ω)` with `B_η = Σ η_i p^{n−i}`.
fn distance_counts(p: u64, digits: &[u64], n: u32) -> Vec<u64> {
    let mut vals: Vec<i128> = vec![0];
    for _ in 0..n {
        vals = vals.iter().flat_map(|&v| digits.iter().map(move |&x| v * p as i128 + x as i128)).collect();
    }
    let mut counts = vec![0u64; n as usize + 1];
    for &a in &vals {
        for &b in &vals {
            if a == b {
                continue;
            }
            let mut diff = (a - b).abs();
            let mut v = 0;
            while diff % p as i128 == 0 {
                diff /= p as i128;
                v += 1;
            }
            counts[n as usize - v] += 1;
        }
    }
    counts
}

#[derive(Clone, Debug, PartialEq)]
pub struct CantorCutoffs {
    pub delta_eps: Rational,
    pub o_eps: Rational,
    pub kappa: Rational,
    /// Solves `(1−s)(o+3/2) = 2κo`.
    pub dimension_cutoff: Rational,
    pub bq: Option<BqRate>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BqRate {
    pub o_prime: f64,
    pub eps: f64,
    pub rho0: f64,
}

/// `o′ = 3ℓ+2+σ′`, `ε = (o′ − √(o′² − 4σ′))/2`, `ϱ₀ = (1/2−ε)ε/(1−ε)`.
pub fn bq_rate(sigma_prime: f64, ell: u32) -> Result<BqRate> {
    if !(sigma_prime > 0.0 && sigma_prime.is_finite()) {
        return domain("sigma' must be positive");
    }
    let o = 3.0 * ell as f64 + 2.0 + sigma_prime;
    let disc = o * o - 4.0 * sigma_prime;
    // stable form of the smaller root
    let eps = 2.0 * sigma_prime / (o + disc.sqrt());
    Ok(BqRate { o_prime: o, eps, rho0: (0.5 - eps) * eps / (1.0 - eps) })
}

pub fn cantor_cutoffs(eps: &Rational, sigma_prime: Option<f64>) -> Result<CantorCutoffs> {
    if eps.is_negative() {
        return domain("slack must be nonnegative");
    }
    let delta_eps = rat(25, 32) - eps * Rational::from_integer(2.into());
    let o = (rat(25, 32) - eps) / Rational::from_integer(2.into());
    if !o.is_positive() {
        return domain("slack too large");
    }
    let kappa = rat(25, 64);
    let cutoff = Rational::one() - Rational::from_integer(2.into()) * &kappa * &o / (&o + rat(3, 2));
    let bq = sigma_prime.map(|s| bq_rate(s, 1)).transpose()?;
    Ok(CantorCutoffs { delta_eps, o_eps: o, kappa, dimension_cutoff: cutoff, bq })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub tau: f64,
    pub n: u64,
    pub m: u64,
    pub delta: f64,
    pub hypothesis_ok: bool,
}

/// `τ = log t/log(1/r)`, `n = ⌊κτ/(2(o+υ))⌋`, `m = ⌊(τ + (o−1)n)/(1+σ)⌋`.
pub fn balancing_schedule(sigma: f64, o: f64, upsilon: f64, kappa: f64, r: f64, t: f64) -> Result<Schedule> {
    if !(r > 0.0 && r < 1.0) || t < 1.0 {
        return domain("need 0 < r < 1 and t ≥ 1");
    }
    let tau = t.ln() / -r.ln();
    let a = kappa / (2.0 * (o + upsilon));
    let n = (a * tau).floor().max(0.0);
    let m = ((tau + (o - 1.0) * n) / (1.0 + sigma)).floor().max(0.0);
    let delta = a + (1.0 + (o - 1.0) * a) / (1.0 + sigma) - 1.0;
    Ok(Schedule {
        tau,
        n: n.to_u64().unwrap_or(u64::MAX),
        m: m.to_u64().unwrap_or(u64::MAX),
        delta,
        hypothesis_ok: delta > 0.0,
    })
}

/// Computable factor `(Σλ_i^{q_ε})^{2k/q_ε}` of the general spectral bound; the
/// remaining finite constant is not evaluated.
pub fn spectral_factor(ifs: &RationalIfs, eps: f64, k: u32) -> Result<f64> {
    let sc = structural_limit(ifs.dim() as u32)?;
    let q = sc.q_eps(eps);
    let s: f64 = ifs.lambda().iter().map(|l| to_f64(l).powf(q)).sum();
    Ok(s.powf(2.0 * k as f64 / q))
}

/// Rows `(name, value, exact)` for the constants report.
pub fn constants_table(d: u32, eps: &Rational, big_l: &Rational) -> Result<Vec<(String, f64, Option<String>)>> {
    let sc = if eps.is_zero() { structural_limit(d)? } else { structural_constants(d, eps)? };
    let th = threshold_main(d, big_l, eps)?;
    let cut = cantor_cutoffs(eps, None)?;
    let e = to_f64(eps);
    let exact = |x: &Rational| (to_f64(x), Some(x.to_string()));
    let mut rows = vec![
        ("d".to_string(), d as f64, Some(d.to_string())),
        ("ell".into(), sc.ell as f64, Some(sc.ell.to_string())),
        ("v_d".into(), sc.v_d as f64, Some(sc.v_d.to_string())),
        ("p".into(), sc.p as f64, Some(sc.p.to_string())),
        ("cap".into(), sc.cap as f64, Some(sc.cap.to_string())),
    ];
    for (name, v) in [
        ("eps_d", &sc.eps_d),
        ("kappa_prime", &sc.kappa_prime),
        ("kappa", &sc.kappa),
        ("L", big_l),
        ("eps0", &th.eps0),
        ("s_star", &th.s_star),
        ("cantor_cutoff", &cut.dimension_cutoff),
    ] {
        let (f, s) = exact(v);
        rows.push((name.to_string(), f, s));
    }
    rows.push(("theta".into(), sc.theta(e), None));
    rows.push(("q_eps".into(), sc.q_eps(e), None));
    rows.push(("stated_dimension".into(), STATED_DIMENSION, Some("0.9992".into())));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn structural_examples() {
        let c = structural_limit(1).unwrap();
        assert_eq!((c.ell, c.v_d, c.p), (1, 1, 2));
        assert_eq!((c.eps_d.clone(), c.kappa_prime.clone(), c.kappa.clone()), (rat(1, 2), rat(25, 64), rat(25, 704)));
        let c = structural_limit(2).unwrap();
        assert_eq!((c.ell, c.v_d, c.p), (3, 2, 4));
        assert_eq!((c.eps_d.clone(), c.kappa.clone()), (int(1), rat(1, 56)));
        for d in 1..=5 {
            let c = structural_limit(d).unwrap();
            assert!(c.kappa <= Rational::from_integer(c.cap.into()));
        }
        assert!(structural_constants(1, &int(0)).is_err());
        assert!(structural_constants(1, &rat(25, 64)).is_err());
        let a = structural_constants(1, &rat(1, 100)).unwrap();
        let b = structural_constants(1, &rat(1, 50)).unwrap();
        assert!(b.kappa < a.kappa);
    }

    #[test]
    fn q_eps_limit() {
        let c = structural_limit(1).unwrap();
        assert!((c.theta(0.0) - 4.0 / 3.0).abs() < 1e-15);
        assert!((c.q_eps(0.0) - 8.0 / 7.0).abs() < 1e-15);
        let q = c.q_eps(1e-3);
        assert!(q > 1.0 && q < 2.0);
    }

    #[test]
    fn rate_examples() {
        let ifs = RationalIfs::missing_digit(5, &[0, 1, 2, 3]).unwrap();
        let rc = rate_constants(&ifs, 0.0).unwrap();
        let s = 4f64.ln() / 5f64.ln();
        assert!((rc.sigma - (1.0 - s) / 2.0).abs() < 1e-12);
        assert!((rc.sigma - 0.069324).abs() < 1e-6);
        assert!((rc.o_eps - s / 8.0).abs() < 1e-12);
        assert!((rc.upsilon - (3.0 / 4.0 + 1.0)).abs() < 1e-12);
        let half =
            crate::ifs::affine_1d(&[(rat(1, 2), int(0)), (rat(1, 2), rat(1, 2))], vec![rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(rate_constants(&half, 0.0).unwrap().sigma, 0.0);
        assert_eq!(second_moment(&half), int(1));
        assert!(second_moment(&ifs) > int(1));
    }

    #[test]
    fn threshold_examples() {
        let t = threshold_main(1, &int(3), &int(0)).unwrap();
        assert_eq!(t.eps0, rat(25, 20416));
        assert_eq!(t.s_star, rat(20416, 20441));
        assert!((to_f64(&t.s_star) - 0.998777).abs() < 1e-6);
        // the stated 0.9992 bound holds for slack up to about 0.1352 only
        for k in 1..25 {
            let e = rat(k, 128);
            let t = threshold_main(1, &int(3), &e).unwrap();
            assert_eq!(to_f64(&t.s_star) <= STATED_DIMENSION, k <= 17, "k = {k}");
        }
        let near = threshold_main(1, &int(3), &(rat(25, 64) - rat(1, 1_000_000_000))).unwrap();
        assert!(to_f64(&near.eps0) < 1e-10);
    }

    #[test]
    fn gap_examples() {
        let cantor = RationalIfs::missing_digit(3, &[0, 2]).unwrap();
        let r = gap_hypothesis(&cantor, DEFAULT_SLACK).unwrap();
        assert!(!r.passed && r.margin < 0.0);
        let fat = RationalIfs::missing_digit(1009, &(0..1008).collect::<Vec<_>>()).unwrap();
        let r = gap_hypothesis(&fat, DEFAULT_SLACK).unwrap();
        assert!(r.passed, "{r:?}");
        let s = r.dimension;
        assert!((r.dimension_lhs - (1.0 / s - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn gap_sum_examples() {
        let g = cantor_gap_sum(3, &[0, 2], 2, GapDelta::Int(1), true).unwrap();
        assert_eq!(g.exact, Some(rat(5, 36)));
        assert_eq!(g.agrees(), Some(true));
        let g = cantor_gap_sum(3, &[0, 2], 1, GapDelta::Int(1), true).unwrap();
        assert_eq!(g.exact, Some(rat(1, 6)));
        let g = cantor_gap_sum(5, &[0, 1, 3], 3, GapDelta::Int(0), true).unwrap();
        assert_eq!(g.exact, Some(int(1) - rat(1, 27)));
        assert_eq!(g.agrees(), Some(true));
        let g = cantor_gap_sum(3, &[0, 2], 3, GapDelta::Real(0.7), true).unwrap();
        assert_eq!(g.agrees(), Some(true));
        let g = cantor_gap_sum(3, &[0, 1, 2], 20, GapDelta::Int(1), true).unwrap();
        assert!(g.brute_skipped);
    }

    #[test]
    fn cutoff_examples() {
        let c = cantor_cutoffs(&int(0), None).unwrap();
        assert_eq!(c.dimension_cutoff, rat(3247, 3872));
        let c = cantor_cutoffs(&rat(1, 100), Some(0.01)).unwrap();
        assert!((to_f64(&c.delta_eps) - 0.76125).abs() < 1e-15);
        let bq = c.bq.unwrap();
        // oracle: textbook quadratic formula
        let o: f64 = 5.01;
        let root = (o - (o * o - 0.04).sqrt()) / 2.0;
        assert!((bq.eps - root).abs() < 1e-15);
        assert!((bq.eps - 0.0019975).abs() < 1e-6);
        assert!((bq.rho0 - 0.0009965).abs() < 1e-6);
        assert!(cantor_cutoffs(&int(0), Some(0.0)).is_err());
        assert!(cantor_cutoffs(&rat(1, 100), None).unwrap().dimension_cutoff > rat(3247, 3872));
    }

    #[test]
    fn schedule_examples() {
        let s = balancing_schedule(0.1, 0.1, 1.75, 25.0 / 704.0, 0.2, 2.0).unwrap();
        assert_eq!(s.n, 0);
        let a = balancing_schedule(0.001, 0.12, 1.75, 25.0 / 704.0, 0.2, 1e6).unwrap();
        let b = balancing_schedule(0.001, 0.12, 1.75, 25.0 / 704.0, 0.2, 1e12).unwrap();
        assert!(b.m > a.m);
        assert!(a.hypothesis_ok);
    }
}
