//! Approximation functions and their dynamical profile `(t, r, λ, L)`.

use std::f64::consts::LN_2;

use crate::error::{domain, Error, Result};
use crate::point::RatPoint;

/// Values of ψ below this are treated as underflow.
pub const PSI_FLOOR: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq)]
pub enum PsiKind {
    /// `q^{−τ−1/d}`.
    Power { tau: f64 },
    /// `1/q`.
    Recip,
    /// `1/(q·max(ln q, 1)^a)`.
    Log { a: f64 },
    /// Linear interpolation through `(q, ψ(q))`, constant outside the table.
    Table { q: Vec<f64>, psi: Vec<f64> },
}

/// A positive function ψ on `[1, ∞)` together with the dimension d.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxFunction {
    pub d: usize,
    pub kind: PsiKind,
}

impl ApproxFunction {
    pub fn power(d: usize, tau: f64) -> Self {
        Self { d, kind: PsiKind::Power { tau } }
    }

    pub fn recip(d: usize) -> Self {
        Self { d, kind: PsiKind::Recip }
    }

    pub fn log(d: usize, a: f64) -> Self {
        Self { d, kind: PsiKind::Log { a } }
    }

    /// Table points must have strictly increasing abscissae and positive values.
    pub fn table(d: usize, q: Vec<f64>, psi: Vec<f64>) -> Result<Self> {
        if q.is_empty() || q.len() != psi.len() {
            return domain("table needs matching nonempty columns");
        }
        if q.windows(2).any(|w| w[0] >= w[1]) {
            return domain("table abscissae must increase strictly");
        }
        if psi.iter().any(|&v| v.is_nan() || v <= 0.0) {
            return domain("table values must be positive");
        }
        Ok(Self { d, kind: PsiKind::Table { q, psi } })
    }

    /// Parses `power:tau=<v>`, `recip`, `log:a=<v>`; tables go through [`ApproxFunction::parse_table`].
    pub fn parse(d: usize, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let param = |key: &str| -> Result<f64> {
            let (k, v) =
                rest.split_once('=').ok_or_else(|| Error::Domain(format!("`{spec}`: expected {key}=<value>")))?;
            if k.trim() != key {
                return domain(format!("`{spec}`: expected key `{key}`"));
            }
            v.trim().parse().map_err(|_| Error::Domain(format!("`{spec}`: bad number")))
        };
        match head {
            "power" => Ok(Self::power(d, param("tau")?)),
            "recip" if rest.is_empty() => Ok(Self::recip(d)),
            "log" => Ok(Self::log(d, param("a")?)),
            _ => domain(format!("unknown psi specification `{spec}`")),
        }
    }

    /// Two whitespace-separated columns `q ψ(q)`; `#` starts a comment.
    pub fn parse_table(d: usize, text: &str) -> Result<Self> {
        let mut q = Vec::new();
        let mut v = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> =
                line.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).collect();
            let bad = || Error::Parse { line: i + 1, msg: format!("expected two numbers, got `{line}`") };
            if cols.len() != 2 {
                return Err(bad());
            }
            q.push(cols[0].parse::<f64>().map_err(|_| bad())?);
            v.push(cols[1].parse::<f64>().map_err(|_| bad())?);
        }
        Self::table(d, q, v)
    }

    /// `ln ψ(q)` for `q ≥ 1`.
    pub fn ln_eval(&self, q: f64) -> f64 {
        self.ln_eval_log(q.max(1.0).ln())
    }

    /// `ln ψ(e^{lq})`, avoiding the `exp`/`ln` round trip for closed forms.
    pub fn ln_eval_log(&self, lq: f64) -> f64 {
        let lq = lq.max(0.0);
        match &self.kind {
            PsiKind::Power { tau } => -(tau + 1.0 / self.d as f64) * lq,
            PsiKind::Recip => -lq,
            PsiKind::Log { a } => -lq - a * lq.max(1.0).ln(),
            PsiKind::Table { .. } => self.eval(lq.exp()).ln(),
        }
    }

    pub fn eval(&self, q: f64) -> f64 {
        let q = q.max(1.0);
        match &self.kind {
            PsiKind::Power { tau } => q.powf(-(tau + 1.0 / self.d as f64)),
            PsiKind::Recip => 1.0 / q,
            PsiKind::Log { a } => 1.0 / (q * q.ln().max(1.0).powf(*a)),
            PsiKind::Table { q: xs, psi } => {
                if q <= xs[0] {
                    return psi[0];
                }
                let last = xs.len() - 1;
                if q >= xs[last] {
                    return psi[last];
                }
                let i = xs.partition_point(|&x| x <= q) - 1;
                let w = (q - xs[i]) / (xs[i + 1] - xs[i]);
                psi[i] + w * (psi[i + 1] - psi[i])
            }
        }
    }

    /// Non-increasing check for tables; built-in families are monotone by construction.
    pub fn is_monotone(&self) -> bool {
        match &self.kind {
            PsiKind::Table { psi, .. } => psi.windows(2).all(|w| w[1] <= w[0]),
            PsiKind::Power { tau } => *tau + 1.0 / self.d as f64 >= 0.0,
            PsiKind::Log { a } => *a >= 0.0,
            PsiKind::Recip => true,
        }
    }

    /// `t₀ = −(d/(d+1))·ln ψ(1)`.
    pub fn t0(&self) -> f64 {
        let d = self.d as f64;
        -(d / (d + 1.0)) * self.ln_eval(1.0)
    }

    fn checked_ln(&self, q: f64) -> Result<f64> {
        let l = self.ln_eval(q);
        if !l.is_finite() || l < PSI_FLOOR.ln() {
            return domain(format!("psi({q}) underflows"));
        }
        Ok(l)
    }

    /// `ψ(2^n)^d · 2^n`, the dyadic block mass.
    pub fn dyadic_mass(&self, n: u32) -> f64 {
        (n as f64 * LN_2 + self.d as f64 * self.ln_eval(2f64.powi(n as i32))).exp()
    }
}

/// `r`, `λ = t − r` and `L = t + d·r` at time `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DynamicalProfile {
    pub t: f64,
    pub r: f64,
    pub lam: f64,
    pub big_l: f64,
}

impl DynamicalProfile {
    fn from_tr(d: usize, t: f64, r: f64) -> Self {
        Self { t, r, lam: t - r, big_l: t + d as f64 * r }
    }

    /// `|ψ^d(e^λ) − e^{−L}|`.
    pub fn residual(&self, psi: &ApproxFunction) -> f64 {
        let d = psi.d as f64;
        ((d * psi.ln_eval(self.lam.exp())).exp() - (-self.big_l).exp()).abs()
    }
}

/// Closed form at the dyadic time where `e^{λ} = 2^n`.
pub fn dyadic_profile(psi: &ApproxFunction, n: u32) -> Result<DynamicalProfile> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    let lam = n as f64 * LN_2;
    let lnpsi = psi.checked_ln(2f64.powi(n as i32))?;
    let d = psi.d as f64;
    // adding zero maps −0 to +0
    let r = -(lam + d * lnpsi) / (d + 1.0) + 0.0;
    Ok(DynamicalProfile::from_tr(psi.d, lam + r, r))
}

/// Solves `d·ln ψ(e^{t−r}) + t + d·r = 0` for `r` by bisection.
pub fn r_of_t(psi: &ApproxFunction, t: f64) -> Result<DynamicalProfile> {
    let t0 = psi.t0();
    if t < t0 - 1e-12 {
        return domain(format!("t = {t} is below t0 = {t0}"));
    }
    let d = psi.d as f64;
    let h = |r: f64| d * psi.ln_eval_log(t - r) + t + d * r;
    let mut lo = -t / d - psi.ln_eval(1.0);
    let mut hi = t;
    if lo > hi {
        lo = hi;
    }
    for _ in 0..2200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = h(mid);
        if v == 0.0 {
            return Ok(DynamicalProfile::from_tr(psi.d, t, mid + 0.0));
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    Ok(DynamicalProfile::from_tr(psi.d, t, r))
}

#[derive(Clone, Debug, PartialEq)]
pub enum GrowthViolation {
    NotMonotone { q1: f64, q2: f64 },
    RDecay { t1: f64, t2: f64, diff: f64 },
    LambdaGrowth { t1: f64, t2: f64, diff: f64 },
    DyadicTime { n: u32, t_n: f64, bound: f64 },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GrowthReport {
    pub pairs_checked: usize,
    pub violations: Vec<GrowthViolation>,
}

impl GrowthReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the weak-monotonicity inequalities for `r` and `λ` on every ordered
/// pair of grid times, and the lower bound on dyadic times for `n` in `dyadic`.
pub fn growth_checks(
    psi: &ApproxFunction,
    times: &[f64],
    dyadic: std::ops::RangeInclusive<u32>,
) -> Result<GrowthReport> {
    let tol = 1e-9;
    let d = psi.d as f64;
    let mut rep = GrowthReport::default();
    let profiles = times.iter().map(|&t| r_of_t(psi, t)).collect::<Result<Vec<_>>>()?;
    let mut qs: Vec<f64> = profiles.iter().map(|p| p.lam.exp()).collect();
    if let PsiKind::Table { q, .. } = &psi.kind {
        qs.extend(q.iter().copied());
    }
    qs.sort_by(f64::total_cmp);
    for w in qs.windows(2) {
        if psi.eval(w[1]) > psi.eval(w[0]) * (1.0 + 1e-12) {
            rep.violations.push(GrowthViolation::NotMonotone { q1: w[0], q2: w[1] });
        }
    }
    for a in &profiles {
        for b in &profiles {
            if b.t <= a.t {
                continue;
            }
            rep.pairs_checked += 1;
            let dt = b.t - a.t;
            let dr = b.r - a.r;
            if dr < -dt / d - tol {
                rep.violations.push(GrowthViolation::RDecay { t1: a.t, t2: b.t, diff: dr });
            }
            let dl = b.lam - a.lam;
            if dl > (d + 1.0) / d * dt + tol {
                rep.violations.push(GrowthViolation::LambdaGrowth { t1: a.t, t2: b.t, diff: dl });
            }
        }
    }
    let t0 = psi.t0();
    for n in dyadic {
        let p = dyadic_profile(psi, n)?;
        let bound = t0 + n as f64 * d * LN_2 / (d + 1.0);
        if p.t < bound - tol {
            rep.violations.push(GrowthViolation::DyadicTime { n, t_n: p.t, bound });
        }
    }
    Ok(rep)
}

/// Continued-fraction data of a rational `num/den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub p: i128,
    pub q: i128,
}

/// All convergents and intermediate fractions of `num/den` (den > 0) with
/// denominator below `q_cap`, in increasing denominator order.
pub fn convergents_and_semiconvergents(num: i128, den: i128, q_cap: i128) -> Vec<Convergent> {
    assert!(den > 0);
    let mut out = Vec::new();
    let (mut a, mut b) = (num, den);
    // p_{-2}/q_{-2} = 0/1, p_{-1}/q_{-1} = 1/0.
    let (mut p2, mut q2, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    loop {
        let ak = a.div_euclid(b);
        let rem = a.rem_euclid(b);
        // intermediate fractions (p2 + j p1)/(q2 + j q1); j = ak is the convergent
        let first = if q1 == 0 { ak } else { 1 };
        for j in first..=ak {
            let Some(q) = q1.checked_mul(j).and_then(|x| x.checked_add(q2)) else { return out };
            if q >= q_cap {
                break;
            }
            let p = p1 * j + p2;
            out.push(Convergent { p, q });
        }
        let Some(q) = q1.checked_mul(ak).and_then(|x| x.checked_add(q2)) else { return out };
        let p = p1 * ak + p2;
        if q >= q_cap || rem == 0 {
            return out;
        }
        p2 = p1;
        q2 = q1;
        p1 = p;
        q1 = q;
        a = b;
        b = rem;
    }
}

/// Dirichlet witness `(p, q)` with `1 ≤ q ≤ 2^n` and `‖q·x − p‖_∞ ≤ 2^{−n/d}`.
pub fn dirichlet_witness(x: &RatPoint, n: u32) -> Result<(Vec<i128>, i128)> {
    let d = x.dim();
    if n == 0 {
        return domain("n must be at least 1");
    }
    if d == 0 || d > 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    let cap = 1i128 << n;
    if d == 1 {
        let c = convergents_and_semiconvergents(x.num[0], x.den, cap + 1);
        // the last convergent below the cap is the best approximation
        let best = c
            .iter()
            .filter(|c| c.q <= cap)
            .min_by(|a, b| x.err_cmp(&[a.p], a.q, &[b.p], b.q))
            .cloned()
            .unwrap_or(Convergent { p: x.round_multiple(0, 1), q: 1 });
        return Ok((vec![best.p], best.q));
    }
    let target = 2f64.powf(-(n as f64) / d as f64);
    for q in 1..=cap {
        let p: Vec<i128> = (0..d).map(|i| x.round_multiple(i, q)).collect();
        if x.sup_err_f64(&p, q) <= target * (1.0 + 1e-12) {
            return Ok((p, q));
        }
    }
    domain("no witness found, which contradicts Dirichlet's theorem")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_examples() {
        let psi = ApproxFunction::recip(1);
        for n in 1..20 {
            let p = dyadic_profile(&psi, n).unwrap();
            assert_eq!(p.r, 0.0);
            assert!((p.t - n as f64 * LN_2).abs() < 1e-12);
        }
        let p = dyadic_profile(&ApproxFunction::power(1, 0.1), 10).unwrap();
        assert!((p.r - LN_2 / 2.0).abs() < 1e-12);
        assert!((p.t - 10.5 * LN_2).abs() < 1e-12);
        assert!((p.t - 7.27805).abs() < 1e-5);
        let p = dyadic_profile(&ApproxFunction::log(1, 2.0), 4).unwrap();
        assert!((p.r - (4.0 * LN_2).ln()).abs() < 1e-12);
        assert!((p.r - 1.01979).abs() < 1e-5);
        assert!((p.t - 3.79238).abs() < 1e-5);
        assert!(dyadic_profile(&psi, 0).is_err());
        assert!(dyadic_profile(&ApproxFunction::power(1, 1e6), 10).is_err());
    }

    #[test]
    fn recip_profile_is_zero() {
        let psi = ApproxFunction::recip(1);
        for t in [0.0, 0.5, 3.0, 17.0] {
            assert_eq!(r_of_t(&psi, t).unwrap().r, 0.0);
        }
    }

    #[test]
    fn bisection_matches_newton_oracle() {
        // ψ(q) = q^{-2}, d = 1: Newton iteration on h(r) = −2(t − r) + t + r.
        let psi = ApproxFunction::power(1, 1.0);
        let t = 3.0 * LN_2;
        let mut r = 0.0f64;
        for _ in 0..50 {
            let h = -2.0 * (t - r) + t + r;
            r -= h / 3.0;
        }
        let p = r_of_t(&psi, t).unwrap();
        assert!((p.r - r).abs() < 1e-10);
        assert!(p.residual(&psi) < 1e-9);
    }

    #[test]
    fn below_t0_rejected() {
        let psi = ApproxFunction::table(1, vec![1.0, 10.0], vec![4.0, 0.1]).unwrap();
        assert!(psi.t0() < 0.0);
        assert!(r_of_t(&psi, psi.t0() - 1.0).is_err());
        assert!(r_of_t(&psi, psi.t0()).is_ok());
    }

    #[test]
    fn table_interpolation_and_extension() {
        let psi = ApproxFunction::table(1, vec![2.0, 4.0], vec![0.5, 0.25]).unwrap();
        assert_eq!(psi.eval(1.0), 0.5);
        assert_eq!(psi.eval(3.0), 0.375);
        assert_eq!(psi.eval(100.0), 0.25);
        let text = "# q psi\n1 1.0\n2 0.5\n\n4 0.25 # tail\n";
        let t = ApproxFunction::parse_table(1, text).unwrap();
        assert_eq!(t.eval(3.0), 0.375);
        assert!(matches!(ApproxFunction::parse_table(1, "1 2 3"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn parse_specs() {
        assert_eq!(ApproxFunction::parse(1, "power:tau=0.1").unwrap(), ApproxFunction::power(1, 0.1));
        assert_eq!(ApproxFunction::parse(2, "recip").unwrap(), ApproxFunction::recip(2));
        assert_eq!(ApproxFunction::parse(1, "log:a=2").unwrap(), ApproxFunction::log(1, 2.0));
        assert!(ApproxFunction::parse(1, "power:a=1").is_err());
        assert!(ApproxFunction::parse(1, "exp").is_err());
    }

    #[test]
    fn growth_examples() {
        let grid: Vec<f64> = (1..=20).map(|n| dyadic_profile(&ApproxFunction::power(1, 0.1), n).unwrap().t).collect();
        let rep = growth_checks(&ApproxFunction::power(1, 0.1), &grid, 1..=20).unwrap();
        assert!(rep.passed(), "{:?}", rep.violations);
        assert_eq!(rep.pairs_checked, 190);
        let rep = growth_checks(&ApproxFunction::recip(1), &[1.0, 2.0, 5.0], 1..=10).unwrap();
        assert!(rep.passed());
        let bad = ApproxFunction::table(1, vec![1.0, 4.0, 16.0, 64.0], vec![0.01, 0.02, 0.2, 0.9]).unwrap();
        let rep = growth_checks(&bad, &[3.0, 4.0, 5.0], 1..=4).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn semiconvergents_of_simple_fraction() {
        // 3/7 = [0; 2, 3]
        let c = convergents_and_semiconvergents(3, 7, 100);
        let qs: Vec<i128> = c.iter().map(|c| c.q).collect();
        assert_eq!(qs, vec![1, 1, 2, 3, 5, 7]);
        let c = convergents_and_semiconvergents(0, 1, 100);
        assert_eq!(c, vec![Convergent { p: 0, q: 1 }]);
    }

    #[test]
    fn dirichlet_examples() {
        let third = RatPoint::new(vec![1], 3).unwrap();
        for n in 2..10 {
            let (p, q) = dirichlet_witness(&third, n).unwrap();
            assert_eq!((p, q), (vec![1], 3));
        }
        let x = RatPoint::from_f64(&[2f64.sqrt() - 1.0]).unwrap();
        let (p, q) = dirichlet_witness(&x, 5).unwrap();
        assert_eq!((p[0], q), (12, 29));
        assert!(((29.0 * (2f64.sqrt() - 1.0)) - 12.0).abs() < 2f64.powi(-5));
        let zero = RatPoint::new(vec![0], 1).unwrap();
        assert_eq!(dirichlet_witness(&zero, 4).unwrap(), (vec![0], 1));
        let y = RatPoint::new(vec![1, 2], 7).unwrap();
        let (p, q) = dirichlet_witness(&y, 6).unwrap();
        assert!(y.sup_err_f64(&p, q) <= 2f64.powf(-3.0));
        assert!(matches!(
            dirichlet_witness(&RatPoint::new(vec![0, 0, 0, 0], 1).unwrap(), 3),
            Err(Error::UnsupportedDimension(4))
        ));
    }
}
