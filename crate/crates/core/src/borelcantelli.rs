//! Converse Borel–Cantelli machinery: Chung–Erdős bounds, sparse index
//! selection, hypothesis verification and the simplex lemma.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::matrix::RationalMatrix;
use crate::rational::{ceil, floor, to_f64, Rational};

/// Events `E_n`, `n ≥ 1`, given through their measures and pair measures.
pub trait EventFamily: Sync {
    fn measure(&self, n: u64) -> Rational;
    fn pair(&self, m: u64, n: u64) -> Rational;
    /// Exact `μ(∪_{n∈idx} E_n)` when the backend can compute it.
    fn union_measure(&self, _idx: &[u64]) -> Option<Rational> {
        None
    }
}

type MeasureFn = Box<dyn Fn(u64) -> Rational + Send + Sync>;
type PairFn = Box<dyn Fn(u64, u64) -> Rational + Send + Sync>;

/// Mutually independent events with the given measures.
pub struct IndependentFamily {
    mu: MeasureFn,
}

impl IndependentFamily {
    pub fn new(mu: impl Fn(u64) -> Rational + Send + Sync + 'static) -> Self {
        Self { mu: Box::new(mu) }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(move |_| c.clone())
    }

    /// `μ(E_n) = 1/n`.
    pub fn harmonic() -> Self {
        Self::new(|n| Rational::new(BigInt::one(), BigInt::from(n.max(1))))
    }

    pub fn table(values: Vec<Rational>) -> Self {
        Self::new(move |n| values.get(n as usize - 1).cloned().unwrap_or_else(Rational::zero))
    }
}

impl EventFamily for IndependentFamily {
    fn measure(&self, n: u64) -> Rational {
        (self.mu)(n)
    }

    fn pair(&self, m: u64, n: u64) -> Rational {
        if m == n {
            self.measure(m)
        } else {
            self.measure(m) * self.measure(n)
        }
    }

    fn union_measure(&self, idx: &[u64]) -> Option<Rational> {
        let set: BTreeSet<u64> = idx.iter().copied().collect();
        let miss = set.iter().fold(Rational::one(), |acc, &n| acc * (Rational::one() - self.measure(n)));
        Some(Rational::one() - miss)
    }
}

/// Events given by arbitrary measure and pair-measure closures.
pub struct ClosureFamily {
    mu: MeasureFn,
    pair: PairFn,
}

impl ClosureFamily {
    pub fn new(
        mu: impl Fn(u64) -> Rational + Send + Sync + 'static,
        pair: impl Fn(u64, u64) -> Rational + Send + Sync + 'static,
    ) -> Self {
        Self { mu: Box::new(mu), pair: Box::new(pair) }
    }
}

impl EventFamily for ClosureFamily {
    fn measure(&self, n: u64) -> Rational {
        (self.mu)(n)
    }

    fn pair(&self, m: u64, n: u64) -> Rational {
        if m == n {
            self.measure(m)
        } else {
            (self.pair)(m.min(n), m.max(n))
        }
    }
}

/// Cylinder events `E_n = {ω_j = 1 for all j ∈ C_n}` on a product of
/// Bernoulli coordinates with success probabilities `probs`.
pub struct CylinderFamily {
    pub probs: Vec<Rational>,
    /// `cylinders[n-1]` is `C_n`.
    pub cylinders: Vec<Vec<usize>>,
}

impl CylinderFamily {
    fn coords(&self, n: u64) -> &[usize] {
        self.cylinders.get(n as usize - 1).map_or(&[], |c| c.as_slice())
    }

    fn prod(&self, coords: impl IntoIterator<Item = usize>) -> Rational {
        coords.into_iter().fold(Rational::one(), |acc, j| acc * &self.probs[j])
    }
}

/// Largest number of coordinates enumerated for an exact cylinder union.
pub const CYLINDER_UNION_CAP: usize = 22;

impl EventFamily for CylinderFamily {
    fn measure(&self, n: u64) -> Rational {
        self.prod(self.coords(n).iter().copied())
    }

    fn pair(&self, m: u64, n: u64) -> Rational {
        let u: BTreeSet<usize> = self.coords(m).iter().chain(self.coords(n)).copied().collect();
        self.prod(u)
    }

    fn union_measure(&self, idx: &[u64]) -> Option<Rational> {
        let coords: Vec<usize> =
            idx.iter().flat_map(|&n| self.coords(n).iter().copied()).collect::<BTreeSet<_>>().into_iter().collect();
        if coords.len() > CYLINDER_UNION_CAP {
            return None;
        }
        let pos = |j: usize| coords.iter().position(|&c| c == j).expect("coordinate present");
        let masks: Vec<u64> =
            idx.iter().map(|&n| self.coords(n).iter().fold(0u64, |m, &j| m | (1 << pos(j)))).collect();
        let mut total = Rational::zero();
        for state in 0u64..(1 << coords.len()) {
            if masks.iter().any(|&m| m & !state == 0) {
                let w = coords.iter().enumerate().fold(Rational::one(), |acc, (i, &j)| {
                    if state >> i & 1 == 1 {
                        acc * &self.probs[j]
                    } else {
                        acc * (Rational::one() - &self.probs[j])
                    }
                });
                total += w;
            }
        }
        Some(total)
    }
}

/// Checks `0 ≤ μ ≤ 1`, `pair ≤ min μ` and symmetry on `[lo, hi]`.
pub fn validate_family(f: &dyn EventFamily, lo: u64, hi: u64) -> Result<()> {
    for m in lo..=hi {
        let a = f.measure(m);
        if a.is_negative() || a > Rational::one() {
            return domain(format!("measure of E_{m} outside [0,1]"));
        }
        for n in m + 1..=hi {
            let p = f.pair(m, n);
            if p != f.pair(n, m) {
                return domain(format!("pair measure not symmetric at ({m},{n})"));
            }
            if p > a || p > f.measure(n) || p.is_negative() {
                return domain(format!("pair measure at ({m},{n}) exceeds a marginal"));
            }
        }
    }
    Ok(())
}

/// `(Σμ(F_r))² / Σ_{r,s} μ(F_r∩F_s)`, diagonal included.
pub fn chung_erdos(f: &dyn EventFamily, idx: &[u64]) -> Result<Rational> {
    let mu: Vec<Rational> = idx.iter().map(|&n| f.measure(n)).collect();
    let s: Rational = mu.iter().sum();
    let denom: Rational = (0..idx.len())
        .into_par_iter()
        .map(|i| {
            let mut row = mu[i].clone();
            for j in i + 1..idx.len() {
                row += f.pair(idx[i], idx[j]) * Rational::from_integer(2.into());
            }
            row
        })
        .reduce(Rational::zero, |a, b| a + b);
    if denom.is_zero() {
        return domain("all events have measure zero");
    }
    Ok(&s * &s / denom)
}

pub fn chung_erdos_range(f: &dyn EventFamily, m: u64, n: u64) -> Result<Rational> {
    chung_erdos(f, &(m..=n).collect::<Vec<_>>())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BcConstants {
    pub c_sharp: f64,
    pub c_star: Rational,
    pub eps_star: Rational,
    pub d: f64,
    pub sigma: f64,
    pub a: f64,
}

impl BcConstants {
    pub fn validate(&self) -> Result<()> {
        if self.c_sharp < 1.0 || self.c_star < Rational::one() || !self.eps_star.is_positive() || self.d < 1.0 {
            return domain("need C_# ≥ 1, C_* ≥ 1, ε_* > 0, D ≥ 1");
        }
        if !(self.sigma > 0.0 && self.sigma < 1.0) || !(self.a > 0.0 && self.a <= 1.0 / self.sigma) {
            return domain("need 0 < σ < 1 and 0 < a ≤ 1/σ");
        }
        Ok(())
    }

    /// Smallest `ℓ_*` with `(1+ε_*)^{ℓ_*} ≥ C_*`, and the rounded `C_*`.
    pub fn rounded_c_star(&self) -> (u32, Rational) {
        let base = Rational::one() + &self.eps_star;
        let mut l = 0u32;
        let mut c = Rational::one();
        while c < self.c_star || l == 0 {
            c *= &base;
            l += 1;
        }
        (l, c)
    }

    /// `K = ⌈1/(aσ)⌉`.
    pub fn k_schedule(&self) -> u64 {
        (1.0 / (self.a * self.sigma)).ceil() as u64
    }

    /// `f(m) = ⌈−a·log μ(E_m)⌉`.
    pub fn f_schedule(&self, mu: f64) -> u64 {
        (-self.a * mu.ln()).ceil().max(0.0) as u64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub k: u32,
    pub ell: u32,
    pub q: Rational,
    /// Half-open index range `[lo, hi)`, truncated at the selection horizon.
    pub lo: u64,
    pub hi: u64,
    pub sum: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Selection {
    pub ell_star: u32,
    pub c_star: Rational,
    /// The maximizing sub-block of each `C_*`-adic block, `k ≥ 1`.
    pub blocks: Vec<Block>,
    /// Sum over all sub-blocks of every `C_*`-adic block.
    pub covered_sum: Rational,
    pub parity: Parity,
    pub indices: Vec<u64>,
}

impl Selection {
    pub fn chosen_blocks(&self) -> impl Iterator<Item = &Block> {
        let want = if self.parity == Parity::Even { 0 } else { 1 };
        self.blocks.iter().filter(move |b| b.k % 2 == want)
    }

    pub fn selected_sum(&self) -> Rational {
        self.chosen_blocks().map(|b| b.sum.clone()).sum()
    }

    pub fn both_parities_sum(&self) -> Rational {
        self.blocks.iter().map(|b| b.sum.clone()).sum()
    }

    /// `n ≥ C_*·m` across chosen blocks and `q < n < (1+ε_*)q` within one.
    pub fn separation_holds(&self, eps_star: &Rational) -> (bool, bool) {
        let chosen: Vec<&Block> = self.chosen_blocks().collect();
        let mut across = true;
        let mut within = true;
        for (i, a) in chosen.iter().enumerate() {
            for b in &chosen[i + 1..] {
                if b.lo < a.hi && a.hi > a.lo && b.hi > b.lo {
                    let m = Rational::from_integer(BigInt::from(a.hi - 1));
                    if Rational::from_integer(BigInt::from(b.lo)) < &self.c_star * m {
                        across = false;
                    }
                } else if b.hi > b.lo && a.hi > a.lo {
                    // the smallest n against the largest m
                    let m = Rational::from_integer(BigInt::from(a.hi - 1));
                    if Rational::from_integer(BigInt::from(b.lo)) < &self.c_star * m {
                        across = false;
                    }
                }
            }
            if a.hi > a.lo + 1 {
                let top = Rational::from_integer(BigInt::from(a.hi - 1));
                let q = Rational::from_integer(BigInt::from(a.lo));
                if top >= (Rational::one() + eps_star) * q {
                    within = false;
                }
            }
        }
        (across, within)
    }
}

/// Pigeonhole selection of one `(1+ε_*)`-adic sub-block per `C_*`-adic block.
pub fn sparse_select(f: &dyn EventFamily, c: &BcConstants, n_max: u64) -> Result<Selection> {
    c.validate()?;
    let (ell_star, c_star) = c.rounded_c_star();
    let base = Rational::one() + &c.eps_star;
    let horizon = Rational::from_integer(BigInt::from(n_max));
    let mut blocks = Vec::new();
    let mut covered_sum = Rational::zero();
    let mut ck = c_star.clone();
    let mut k = 1u32;
    while ck <= horizon {
        let mut best: Option<Block> = None;
        let mut x = ck.clone();
        for ell in 0..ell_star {
            let lo = ceil(&x).to_u64().unwrap_or(u64::MAX);
            let hi_raw = floor(&(&x * &base)).to_u64().unwrap_or(u64::MAX);
            let hi = hi_raw.min(n_max + 1);
            let sum: Rational = (lo..hi.max(lo)).map(|n| f.measure(n)).sum();
            covered_sum += &sum;
            if best.as_ref().is_none_or(|b| sum > b.sum) {
                best = Some(Block { k, ell, q: x.clone(), lo, hi: hi.max(lo), sum });
            }
            x *= &base;
        }
        blocks.push(best.expect("ell_star ≥ 1"));
        ck *= &c_star;
        k += 1;
    }
    let even: Rational = blocks.iter().filter(|b| b.k % 2 == 0).map(|b| b.sum.clone()).sum();
    let odd: Rational = blocks.iter().filter(|b| b.k % 2 == 1).map(|b| b.sum.clone()).sum();
    if even.is_zero() && odd.is_zero() {
        return domain("all selected measures vanish");
    }
    let parity = if even >= odd { Parity::Even } else { Parity::Odd };
    let mut sel = Selection { ell_star, c_star, blocks, covered_sum, parity, indices: Vec::new() };
    sel.indices = sel.chosen_blocks().flat_map(|b| b.lo..b.hi).collect();
    Ok(sel)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisRow {
    pub name: String,
    pub range: (u64, u64),
    pub holds: bool,
    pub worst_pair: (u64, u64),
    /// Smallest `rhs − lhs` over the checked pairs.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BcReport {
    pub rows: Vec<HypothesisRow>,
    pub selection: Selection,
    pub k_schedule: u64,
    /// Restricted `Σ*μ(E_m∩E_n) / (Σ*μ)²`.
    pub double_sum_ratio: f64,
    /// Chung–Erdős lower bound on `μ(∪_{n∈𝒥, M≤n≤N} E_n)`.
    pub bound: Rational,
    pub union_exact: Option<Rational>,
    /// The bound recomputed with later starting indices.
    pub start_sensitivity: Vec<(u64, f64)>,
}

impl BcReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

const REL_TOL: f64 = 1e-12;

fn worst<I: ParallelIterator<Item = ((u64, u64), f64, f64)>>(it: I) -> (bool, (u64, u64), f64) {
    let (pair, margin, ok) =
        it.map(|(p, lhs, rhs)| (p, rhs - lhs, lhs <= rhs * (1.0 + REL_TOL) + f64::MIN_POSITIVE)).reduce(
            || ((0, 0), f64::INFINITY, true),
            |a, b| {
                let ok = a.2 && b.2;
                if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) {
                    (b.0, b.1, ok)
                } else {
                    (a.0, a.1, ok)
                }
            },
        );
    (ok, pair, margin)
}

/// Checks hypotheses (1)–(4) on `[M, N]`, selects `𝒥` and bounds the union.
pub fn bc_verify_and_bound(f: &dyn EventFamily, c: &BcConstants, m0: u64, n0: u64) -> Result<BcReport> {
    c.validate()?;
    if m0 == 0 || m0 > n0 {
        return domain("need 1 ≤ M ≤ N");
    }
    let mu: Vec<f64> = (m0..=n0).map(|n| to_f64(&f.measure(n))).collect();
    let at = |n: u64| mu[(n - m0) as usize];
    let mut rows = Vec::new();
    let (pos_n, pos_min) =
        (m0..=n0).map(|n| (n, at(n))).fold((m0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    rows.push(HypothesisRow {
        name: "positive measures".into(),
        range: (m0, n0),
        holds: pos_min > 0.0,
        worst_pair: (pos_n, pos_n),
        margin: pos_min,
    });
    let eps1 = 1.0 + to_f64(&c.eps_star);
    let cs = to_f64(&c.c_star);
    let pairs = || (m0..=n0).into_par_iter().flat_map_iter(move |m| (m..=n0).map(move |n| (m, n)));
    let (ok, wp, mg) =
        worst(pairs().filter(|&(m, n)| n as f64 >= cs * m as f64 || n as f64 <= eps1 * m as f64).map(|(m, n)| {
            let lhs = to_f64(&f.pair(m, n));
            let rhs = c.c_sharp * at(m) * at(n)
                + c.d * ((-c.sigma * m as f64).exp() * at(n) + (-c.sigma * (n - m) as f64).exp());
            ((m, n), lhs, rhs)
        }));
    rows.push(HypothesisRow { name: "long range".into(), range: (m0, n0), holds: ok, worst_pair: wp, margin: mg });
    let (ok, wp, mg) = worst(pairs().map(|(m, n)| {
        let lhs = to_f64(&f.pair(m, n));
        let rhs = c.d * at(m) * at(n).powf(c.sigma).max(2f64.powf(-c.sigma * (n - m) as f64));
        ((m, n), lhs, rhs)
    }));
    rows.push(HypothesisRow { name: "short range".into(), range: (m0, n0), holds: ok, worst_pair: wp, margin: mg });
    let (ok, wp, mg) = worst(
        (m0..=n0)
            .into_par_iter()
            .flat_map_iter(move |m| {
                let reach = if at(m) > 0.0 { c.f_schedule(at(m)) } else { 0 };
                (m..=n0.min(m.saturating_add(reach))).map(move |n| (m, n))
            })
            .map(|(m, n)| ((m, n), at(n), c.d * at(m).powf(c.sigma))),
    );
    rows.push(HypothesisRow {
        name: "weak monotonicity".into(),
        range: (m0, n0),
        holds: ok,
        worst_pair: wp,
        margin: mg,
    });

    let selection = sparse_select(f, c, n0)?;
    let restricted: Vec<u64> = selection.indices.iter().copied().filter(|&n| n >= m0).collect();
    if restricted.is_empty() {
        return domain("no selected indices in range");
    }
    let bound = chung_erdos(f, &restricted)?;
    let double_sum_ratio = 1.0 / to_f64(&bound);
    let union_exact = f.union_measure(&restricted);
    let mut start_sensitivity = Vec::new();
    let mut m = m0;
    for _ in 0..3 {
        m *= 2;
        let idx: Vec<u64> = restricted.iter().copied().filter(|&n| n >= m).collect();
        if idx.is_empty() {
            break;
        }
        start_sensitivity.push((m, to_f64(&chung_erdos(f, &idx)?)));
    }
    Ok(BcReport {
        rows,
        selection,
        k_schedule: c.k_schedule(),
        double_sum_ratio,
        bound,
        union_exact,
        start_sensitivity,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplexReport {
    pub precondition: bool,
    /// Distinct points `p/q ∈ B` with `0 < q < N`.
    pub points: Vec<Vec<Rational>>,
    /// `(a, c)` with `a·x = c` on every point.
    pub hyperplane: Option<(Vec<Rational>, Rational)>,
    /// `d+1` affinely independent points, which refute the lemma.
    pub counterexample: Option<Vec<Vec<Rational>>>,
}

/// Rationals with denominator below `N` inside the closed sup-norm ball, and
/// an affine hyperplane through all of them.
pub fn simplex_check(center: &[Rational], radius: &Rational, n_bound: u64) -> Result<SimplexReport> {
    let d = center.len();
    if d == 0 || !radius.is_positive() || n_bound == 0 {
        return domain("need d ≥ 1, positive radius and N ≥ 1");
    }
    let two_r = radius * Rational::from_integer(2.into());
    let vol = num_traits::pow(two_r, d);
    let fact: BigInt = (1..=d as u64).map(BigInt::from).product();
    let limit = Rational::new(BigInt::one(), fact * num_traits::pow(BigInt::from(n_bound), d + 1));
    let precondition = vol < limit;
    let mut set: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for q in 1..n_bound {
        let qr = Rational::from_integer(BigInt::from(q));
        let ranges: Vec<(BigInt, BigInt)> =
            center.iter().map(|c| (ceil(&((c - radius) * &qr)), floor(&((c + radius) * &qr)))).collect();
        if ranges.iter().any(|(a, b)| a > b) {
            continue;
        }
        let mut cur: Vec<BigInt> = ranges.iter().map(|r| r.0.clone()).collect();
        loop {
            set.insert(cur.iter().map(|p| Rational::new(p.clone(), BigInt::from(q))).collect());
            let mut i = 0;
            loop {
                if i == d {
                    break;
                }
                if cur[i] < ranges[i].1 {
                    cur[i] += 1;
                    break;
                }
                cur[i] = ranges[i].0.clone();
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    let points: Vec<Vec<Rational>> = set.into_iter().collect();
    let (hyperplane, counterexample) = affine_hull(&points, center);
    Ok(SimplexReport { precondition, points, hyperplane, counterexample })
}

type Hyperplane = (Vec<Rational>, Rational);

fn affine_hull(points: &[Vec<Rational>], center: &[Rational]) -> (Option<Hyperplane>, Option<Vec<Vec<Rational>>>) {
    let d = center.len();
    if points.is_empty() {
        let mut a = vec![Rational::zero(); d];
        a[0] = Rational::one();
        return (Some((a, center[0].clone())), None);
    }
    let rows: Vec<Vec<Rational>> =
        points.iter().map(|p| std::iter::once(Rational::one()).chain(p.iter().cloned()).collect()).collect();
    let m = RationalMatrix::from_rows(rows.clone());
    if m.rank() > d {
        // greedily collect d+1 independent rows as the certificate
        let mut chosen: Vec<Vec<Rational>> = Vec::new();
        let mut pts = Vec::new();
        for (r, p) in rows.iter().zip(points) {
            let mut trial = chosen.clone();
            trial.push(r.clone());
            if RationalMatrix::from_rows(trial.clone()).rank() == trial.len() {
                chosen = trial;
                pts.push(p.clone());
                if chosen.len() == d + 1 {
                    break;
                }
            }
        }
        return (None, Some(pts));
    }
    let v = null_vector(&m);
    let a: Vec<Rational> = v[1..].to_vec();
    let c = -v[0].clone();
    if a.iter().all(Zero::is_zero) {
        // the kernel is the constant row only when there are no points
        let mut a = vec![Rational::zero(); d];
        a[0] = Rational::one();
        return (Some((a, points[0][0].clone())), None);
    }
    (Some((a, c)), None)
}

/// A nonzero kernel vector of a rank-deficient matrix whose kernel avoids `e_0`.
fn null_vector(m: &RationalMatrix) -> Vec<Rational> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else { continue };
        a.swap_rows(p, r);
        let inv = a.get(r, c).recip();
        for k in 0..cols {
            a.set(r, k, a.get(r, k) * &inv);
        }
        for i in 0..rows {
            if i != r && !a.get(i, c).is_zero() {
                let f = a.get(i, c).clone();
                for k in 0..cols {
                    let v = a.get(i, k) - &f * a.get(r, k);
                    a.set(i, k, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free = (0..cols).find(|c| !pivots.contains(c)).expect("rank deficient");
    let mut v = vec![Rational::zero(); cols];
    v[free] = Rational::one();
    for (i, &pc) in pivots.iter().enumerate() {
        v[pc] = -a.get(i, free).clone();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn chung_erdos_examples() {
        let single = IndependentFamily::constant(rat(1, 3));
        assert_eq!(chung_erdos(&single, &[1]).unwrap(), rat(1, 3));
        let half = IndependentFamily::constant(rat(1, 2));
        assert_eq!(chung_erdos(&half, &[1, 2]).unwrap(), rat(2, 3));
        assert_eq!(chung_erdos(&half, &[1, 2, 3]).unwrap(), rat(3, 4));
        assert_eq!(half.union_measure(&[1, 2, 3]), Some(rat(7, 8)));
        let zero = IndependentFamily::constant(int(0));
        assert!(chung_erdos(&zero, &[1, 2]).is_err());
    }

    #[test]
    fn cylinder_backend_matches_independent_closed_form() {
        // E_n uses its own coordinate: independent events
        let fam =
            CylinderFamily { probs: vec![rat(1, 2), rat(1, 3), rat(1, 5)], cylinders: vec![vec![0], vec![1], vec![2]] };
        let ind = IndependentFamily::table(vec![rat(1, 2), rat(1, 3), rat(1, 5)]);
        assert_eq!(fam.union_measure(&[1, 2, 3]), ind.union_measure(&[1, 2, 3]));
        // overlapping cylinders
        let fam = CylinderFamily { probs: vec![rat(1, 2), rat(1, 2)], cylinders: vec![vec![0], vec![0, 1]] };
        assert_eq!(fam.pair(1, 2), rat(1, 4));
        assert_eq!(fam.union_measure(&[1, 2]), Some(rat(1, 2)));
        validate_family(&fam, 1, 2).unwrap();
    }

    fn constants() -> BcConstants {
        BcConstants { c_sharp: 1.0 + 1e-9, c_star: int(2), eps_star: int(1), d: 1.0, sigma: 0.5, a: 1.0 }
    }

    #[test]
    fn selection_properties() {
        let half = IndependentFamily::constant(rat(1, 2));
        let c = constants();
        let sel = sparse_select(&half, &c, 500).unwrap();
        assert_eq!(sel.ell_star, 1);
        assert_eq!(sel.separation_holds(&c.eps_star), (true, true));
        let total: Rational = (1..=500u64).filter(|&n| n >= 2).map(|n| half.measure(n)).sum();
        assert!(sel.both_parities_sum() * Rational::from_integer(sel.ell_star.into()) >= sel.covered_sum);
        assert!(sel.selected_sum() * Rational::from_integer((2 * sel.ell_star).into()) >= total);
        let c3 = BcConstants { c_star: int(3), eps_star: rat(1, 5), ..constants() };
        let (l, cs) = c3.rounded_c_star();
        assert_eq!(l, 7);
        assert!(cs >= int(3) && cs < int(3) * rat(6, 5));
        let sel = sparse_select(&half, &c3, 2000).unwrap();
        assert_eq!(sel.separation_holds(&c3.eps_star), (true, true));
    }

    #[test]
    fn verify_independent_half() {
        let half = IndependentFamily::constant(rat(1, 2));
        let r = bc_verify_and_bound(&half, &constants(), 1, 250).unwrap();
        assert!(r.all_hold(), "{:?}", r.rows);
        assert!(to_f64(&r.bound) >= 0.99);
        assert!(r.bound <= r.union_exact.clone().unwrap());
    }

    #[test]
    fn spike_flags_weak_monotonicity() {
        let mut t = vec![rat(1, 2); 20];
        t[9] = rat(1, 1_000_000);
        t[10] = int(1);
        let fam = IndependentFamily::table(t);
        let r = bc_verify_and_bound(&fam, &constants(), 1, 20).unwrap();
        let wm = r.rows.iter().find(|x| x.name == "weak monotonicity").unwrap();
        assert!(!wm.holds);
        assert_eq!(wm.worst_pair, (10, 11));
    }

    #[test]
    fn simplex_examples() {
        let r = simplex_check(&[rat(1, 2)], &rat(1, 20), 3).unwrap();
        assert!(r.precondition);
        assert!(r.points.len() <= 1 && r.hyperplane.is_some());
        let r = simplex_check(&[rat(1, 3), rat(1, 3)], &rat(1, 20), 3).unwrap();
        assert!(r.precondition);
        assert!(r.points.is_empty());
        assert!(r.hyperplane.is_some());
        // two points determine a line in the plane
        let r = simplex_check(&[rat(1, 2), rat(1, 2)], &rat(1, 2), 3).unwrap();
        assert!(!r.precondition);
        assert!(r.counterexample.is_some());
        let line = simplex_check(&[rat(1, 2), int(0)], &rat(1, 100), 5).unwrap();
        let (a, c) = line.hyperplane.unwrap();
        for p in &line.points {
            assert_eq!(&a[0] * &p[0] + &a[1] * &p[1], c);
        }
    }
}
