//! Rational iterated function systems, words, cylinders and prefix sets.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::matrix::RationalMatrix;
use crate::rational::{int, prime_factors, rat, to_f64, Rational};

/// Enumeration cap for exhaustive word sums.
pub const ENUMERATION_CAP: u64 = 10_000_000;

/// Default truncation depth for sampled points.
pub const DEFAULT_DEPTH: usize = 64;

/// `x ↦ rho·rot·x + shift`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimilarityMap {
    rho: Rational,
    rot: RationalMatrix,
    shift: Vec<Rational>,
}

impl SimilarityMap {
    /// Requires `0 < rho < 1` and `rot` exactly orthogonal with determinant one.
    pub fn new(rho: Rational, rot: RationalMatrix, shift: Vec<Rational>) -> Result<Self> {
        if !rho.is_positive() || rho >= Rational::one() {
            return domain(format!("contraction ratio {rho} must lie in (0,1)"));
        }
        Self::unchecked_ratio(rho, rot, shift)
    }

    fn unchecked_ratio(rho: Rational, rot: RationalMatrix, shift: Vec<Rational>) -> Result<Self> {
        let d = shift.len();
        if rot.rows() != d || rot.cols() != d {
            return domain("rotation and shift dimensions differ");
        }
        if !(&rot.transpose() * &rot).is_identity() {
            return domain("rotation is not orthogonal");
        }
        if rot.det() != Rational::one() {
            return domain("rotation determinant is not 1");
        }
        Ok(Self { rho, rot, shift })
    }

    pub fn identity(d: usize) -> Self {
        Self { rho: Rational::one(), rot: RationalMatrix::identity(d), shift: vec![Rational::zero(); d] }
    }

    /// `x ↦ rho·x + shift` in dimension one.
    pub fn scalar(rho: Rational, shift: Rational) -> Result<Self> {
        Self::new(rho, RationalMatrix::identity(1), vec![shift])
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn rho(&self) -> &Rational {
        &self.rho
    }

    pub fn rot(&self) -> &RationalMatrix {
        &self.rot
    }

    pub fn shift(&self) -> &[Rational] {
        &self.shift
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.rot.mul_vec(x).into_iter().zip(&self.shift).map(|(y, b)| &self.rho * y + b).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { rho: &self.rho * &other.rho, rot: &self.rot * &other.rot, shift: self.apply(&other.shift) }
    }

    /// The linear part `rho·rot`.
    pub fn linear(&self) -> RationalMatrix {
        self.rot.scale(&self.rho)
    }
}

/// A finite word over the alphabet, stored as letter labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// True when `self` is a (non-strict) prefix of `other`.
    pub fn is_prefix_of(&self, other: &Word) -> bool {
        self.len() <= other.len() && other.0[..self.len()] == self.0[..]
    }
}

impl From<&[usize]> for Word {
    fn from(v: &[usize]) -> Self {
        Word(v.to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MissingDigit {
    pub base: u64,
    pub digits: Vec<u64>,
}

/// A rational IFS with a probability vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalIfs {
    labels: Vec<usize>,
    maps: Vec<SimilarityMap>,
    lambda: Vec<Rational>,
    primes: Vec<u64>,
    missing: Option<MissingDigit>,
}

impl RationalIfs {
    /// Maps are keyed by `labels`; weights must be positive and sum to one exactly.
    pub fn new(labels: Vec<usize>, maps: Vec<SimilarityMap>, lambda: Vec<Rational>) -> Result<Self> {
        if maps.is_empty() || maps.len() != labels.len() || maps.len() != lambda.len() {
            return domain("labels, maps and weights must be nonempty and of equal length");
        }
        let d = maps[0].dim();
        if d == 0 || maps.iter().any(|m| m.dim() != d) {
            return domain("maps must share a positive dimension");
        }
        if labels.iter().collect::<BTreeSet<_>>().len() != labels.len() {
            return domain("duplicate letter labels");
        }
        if lambda.iter().any(|l| !l.is_positive()) {
            return domain("weights must be positive");
        }
        if lambda.iter().sum::<Rational>() != Rational::one() {
            return domain("weights must sum to 1");
        }
        let primes = s_primes(&maps);
        Ok(Self { labels, maps, lambda, primes, missing: None })
    }

    pub fn uniform(maps: Vec<SimilarityMap>) -> Result<Self> {
        let k = maps.len() as i64;
        let labels = (0..maps.len()).collect();
        Self::new(labels, maps, vec![rat(1, k.max(1)); k as usize])
    }

    /// `f_i(x) = (x + i)/base` for each retained digit, uniform weights.
    pub fn missing_digit(base: u64, digits: &[u64]) -> Result<Self> {
        if base < 2 {
            return domain("base must be at least 2");
        }
        let set: BTreeSet<u64> = digits.iter().copied().collect();
        if set.len() < 2 || set.len() != digits.len() || set.iter().any(|&i| i >= base) {
            return domain("need at least two distinct digits below the base");
        }
        let rho = rat(1, base as i64);
        let maps = set
            .iter()
            .map(|&i| SimilarityMap::scalar(rho.clone(), rat(i as i64, base as i64)))
            .collect::<Result<Vec<_>>>()?;
        let k = set.len() as i64;
        let labels = set.iter().map(|&i| i as usize).collect();
        let mut ifs = Self::new(labels, maps, vec![rat(1, k); k as usize])?;
        ifs.missing = Some(MissingDigit { base, digits: set.into_iter().collect() });
        Ok(ifs)
    }

    pub fn dim(&self) -> usize {
        self.maps[0].dim()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn maps(&self) -> &[SimilarityMap] {
        &self.maps
    }

    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn missing_digit_data(&self) -> Option<&MissingDigit> {
        self.missing.as_ref()
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn index_of(&self, letter: usize) -> Result<usize> {
        self.labels.iter().position(|&l| l == letter).ok_or(Error::Alphabet(letter))
    }

    pub fn map(&self, letter: usize) -> Result<&SimilarityMap> {
        Ok(&self.maps[self.index_of(letter)?])
    }

    pub fn weight(&self, letter: usize) -> Result<&Rational> {
        Ok(&self.lambda[self.index_of(letter)?])
    }

    pub fn rho_min(&self) -> Rational {
        self.maps.iter().map(|m| m.rho.clone()).min().expect("nonempty")
    }

    pub fn rho_max(&self) -> Rational {
        self.maps.iter().map(|m| m.rho.clone()).max().expect("nonempty")
    }

    /// Replaces the weights, keeping the maps.
    pub fn with_weights(&self, lambda: Vec<Rational>) -> Result<Self> {
        let mut out = Self::new(self.labels.clone(), self.maps.clone(), lambda)?;
        out.missing = if out.lambda.iter().all(|l| *l == out.lambda[0]) { self.missing.clone() } else { None };
        Ok(out)
    }

    /// All words of length `n` in lexicographic label order.
    pub fn words(&self, n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w| {
                    self.labels.iter().map(move |&l| {
                        let mut v = w.0.clone();
                        v.push(l);
                        Word(v)
                    })
                })
                .collect();
        }
        out
    }
}

/// Smallest prime set making every ratio a unit and every shift or rotation entry integral.
fn s_primes(maps: &[SimilarityMap]) -> Vec<u64> {
    let mut set = BTreeSet::new();
    for m in maps {
        set.extend(prime_factors(m.rho.numer()));
        set.extend(prime_factors(m.rho.denom()));
        for b in &m.shift {
            set.extend(prime_factors(b.denom()));
        }
        for x in m.rot.entries() {
            set.extend(prime_factors(x.denom()));
        }
    }
    set.into_iter().collect()
}

/// `f_w = f_{w_1} ∘ ⋯ ∘ f_{w_k}`; the empty word gives the identity.
pub fn compose_word(ifs: &RationalIfs, w: &Word) -> Result<SimilarityMap> {
    let mut acc = SimilarityMap::identity(ifs.dim());
    for &l in &w.0 {
        acc = acc.compose(ifs.map(l)?);
    }
    Ok(acc)
}

/// `λ_w`, the measure of the cylinder of `w` under null overlaps.
pub fn cylinder_measure(ifs: &RationalIfs, w: &Word) -> Result<Rational> {
    let mut acc = Rational::one();
    for &l in &w.0 {
        acc *= ifs.weight(l)?;
    }
    Ok(acc)
}

/// `P_λ^k f (x) = Σ_{|w|=k} λ_w f(f_w x)`, exact.
pub fn markov_iterate(
    ifs: &RationalIfs,
    f: &dyn Fn(&[Rational]) -> Rational,
    x: &[Rational],
    k: usize,
) -> Result<Rational> {
    if (ifs.len() as f64).powi(k as i32) > ENUMERATION_CAP as f64 {
        return domain(format!("|Λ|^{k} terms exceed the enumeration cap; use sampled mode"));
    }
    fn rec(ifs: &RationalIfs, f: &dyn Fn(&[Rational]) -> Rational, x: &[Rational], k: usize) -> Rational {
        if k == 0 {
            return f(x);
        }
        ifs.maps.iter().zip(&ifs.lambda).map(|(m, l)| l * rec(ifs, f, &m.apply(x), k - 1)).sum()
    }
    Ok(rec(ifs, f, x, k))
}

/// Sampled estimate of `P_λ^k f (x)` with its standard error.
pub fn markov_iterate_sampled(
    ifs: &RationalIfs,
    f: &dyn Fn(&[f64]) -> f64,
    x: &[f64],
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if samples < 2 {
        return domain("need at least two samples");
    }
    let sampler = LetterSampler::new(ifs);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lin: Vec<(f64, Vec<Vec<f64>>, Vec<f64>)> =
        ifs.maps.iter().map(|m| (to_f64(&m.rho), m.rot.to_f64(), m.shift.iter().map(to_f64).collect())).collect();
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..samples {
        let mut y = x.to_vec();
        for _ in 0..k {
            let (rho, rot, b) = &lin[sampler.draw(&mut rng)];
            y = (0..y.len()).map(|i| rho * rot[i].iter().zip(&y).map(|(a, v)| a * v).sum::<f64>() + b[i]).collect();
        }
        let v = f(&y);
        s += v;
        s2 += v * v;
    }
    let n = samples as f64;
    let mean = s / n;
    let var = ((s2 / n - mean * mean) * n / (n - 1.0)).max(0.0);
    Ok((mean, (var / n).sqrt()))
}

/// Draws letter indices (not labels) according to λ.
#[derive(Clone, Debug)]
pub struct LetterSampler {
    dist: WeightedIndex<f64>,
}

impl LetterSampler {
    pub fn new(ifs: &RationalIfs) -> Self {
        let w: Vec<f64> = ifs.lambda.iter().map(to_f64).collect();
        Self { dist: WeightedIndex::new(w).expect("positive weights") }
    }

    pub fn draw<R: rand::Rng>(&self, rng: &mut R) -> usize {
        self.dist.sample(rng)
    }
}

/// A truncated sample `f_{α|k}(0)` of the self-similar measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplePoint {
    pub word: Word,
    pub point: Vec<Rational>,
    /// Sup-norm distance to every point of the cylinder of `word`.
    pub bound: Rational,
}

/// `ρ_max^k · B/(1−ρ_max)` with `B` the largest ℓ¹ norm of a shift. It dominates
/// `|f_{α|k}(0) − f_{α|k+j}(0)|` for all `j` and all `α`.
pub fn truncation_bound(ifs: &RationalIfs, depth: usize) -> Rational {
    let rmax = ifs.rho_max();
    let b =
        ifs.maps.iter().map(|m| m.shift.iter().map(|x| x.abs()).sum::<Rational>()).max().unwrap_or_else(Rational::zero);
    num_traits::pow(rmax.clone(), depth) * b / (Rational::one() - rmax)
}

/// Point at the end of a given word, with the truncation bound.
pub fn point_of_word(ifs: &RationalIfs, w: &Word) -> Result<SamplePoint> {
    let f = compose_word(ifs, w)?;
    Ok(SamplePoint { word: w.clone(), point: f.shift, bound: truncation_bound(ifs, w.len()) })
}

pub fn sample_point(ifs: &RationalIfs, depth: usize, seed: u64) -> Result<SamplePoint> {
    if depth == 0 {
        return domain("depth must be at least 1");
    }
    let sampler = LetterSampler::new(ifs);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = Word((0..depth).map(|_| ifs.labels[sampler.draw(&mut rng)]).collect());
    point_of_word(ifs, &w)
}

/// Finite antichain of words whose cylinders partition the attractor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixSet {
    pub eps: Rational,
    pub words: Vec<Word>,
}

/// Minimal words with `ε·ρ_min ≤ ρ_w < ε`.
pub fn prefix_set(ifs: &RationalIfs, eps: &Rational) -> Result<PrefixSet> {
    if !eps.is_positive() || *eps > Rational::one() {
        return domain("prefix threshold must lie in (0,1]");
    }
    let lo = eps * ifs.rho_min();
    let mut out = Vec::new();
    let mut frontier: Vec<(Word, Rational)> = vec![(Word::empty(), Rational::one())];
    while let Some((w, r)) = frontier.pop() {
        for (&l, m) in ifs.labels.iter().zip(&ifs.maps) {
            let rw = &r * &m.rho;
            let mut v = w.0.clone();
            v.push(l);
            if rw < *eps {
                debug_assert!(rw >= lo);
                out.push(Word(v));
            } else {
                frontier.push((Word(v), rw));
            }
        }
    }
    out.sort();
    Ok(PrefixSet { eps: eps.clone(), words: out })
}

impl PrefixSet {
    /// Checks the partition property: weights sum to one, no word is a prefix
    /// of another, ratios in range, and each word of maximal length has exactly one prefix.
    pub fn verify(&self, ifs: &RationalIfs) -> Result<bool> {
        let total: Rational = self.words.iter().map(|w| cylinder_measure(ifs, w)).sum::<Result<Rational>>()?;
        if total != Rational::one() {
            return Ok(false);
        }
        let lo = &self.eps * ifs.rho_min();
        for w in &self.words {
            let r = compose_word(ifs, w)?.rho;
            if r < lo || r >= self.eps {
                return Ok(false);
            }
        }
        for (i, a) in self.words.iter().enumerate() {
            for (j, b) in self.words.iter().enumerate() {
                if i != j && a.is_prefix_of(b) {
                    return Ok(false);
                }
            }
        }
        let depth = self.words.iter().map(Word::len).max().unwrap_or(0);
        if (ifs.len() as f64).powi(depth as i32) <= 1e6 {
            for w in ifs.words(depth) {
                if self.words.iter().filter(|p| p.is_prefix_of(&w)).count() != 1 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Solution of `Σ ρ_i^s = 1` by bisection.
pub fn moran_dimension(ifs: &RationalIfs) -> f64 {
    let rhos: Vec<f64> = ifs.maps.iter().map(|m| to_f64(&m.rho)).collect();
    let f = |s: f64| rhos.iter().map(|r| r.powf(s)).sum::<f64>() - 1.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `(Σ λ_i τ_i)^n`. With `verify`, also sums `λ_w τ_w` over all words and checks equality.
pub fn cocycle_average(lambda: &[Rational], tau: &[Rational], n: usize, verify: bool) -> Result<Rational> {
    if lambda.len() != tau.len() {
        return domain("weights and cocycle values have different index sets");
    }
    let base: Rational = lambda.iter().zip(tau).map(|(l, t)| l * t).sum();
    let closed = num_traits::pow(base, n);
    if verify {
        if (lambda.len() as f64).powi(n as i32) > ENUMERATION_CAP as f64 {
            return domain("verification would exceed the enumeration cap");
        }
        let mut terms = vec![Rational::one()];
        for _ in 0..n {
            terms = terms.iter().flat_map(|acc| lambda.iter().zip(tau).map(move |(l, t)| acc * l * t)).collect();
        }
        let brute: Rational = terms.into_iter().sum();
        if brute != closed {
            return Err(Error::Domain(format!("cocycle mismatch: {brute} vs {closed}")));
        }
    }
    Ok(closed)
}

/// Open set condition for an open box, using exact images. Rotations are
/// handled through axis-aligned hulls, which makes the answer conservative
/// unless every rotation is a signed permutation.
pub fn verify_osc(ifs: &RationalIfs, lo: &[Rational], hi: &[Rational]) -> Result<bool> {
    let d = ifs.dim();
    if lo.len() != d || hi.len() != d || lo.iter().zip(hi).any(|(a, b)| a >= b) {
        return domain("box must be nonempty with matching dimension");
    }
    let images: Vec<(Vec<Rational>, Vec<Rational>)> = ifs.maps.iter().map(|m| image_hull(m, lo, hi)).collect();
    for (a, b) in &images {
        for i in 0..d {
            if a[i] < lo[i] || b[i] > hi[i] {
                return Ok(false);
            }
        }
    }
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let (a, b) = (&images[i], &images[j]);
            let separated = (0..d).any(|k| a.1[k] <= b.0[k] || b.1[k] <= a.0[k]);
            if !separated {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn image_hull(m: &SimilarityMap, lo: &[Rational], hi: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let lin = m.linear();
    let d = lo.len();
    let mut a = m.shift.clone();
    let mut b = m.shift.clone();
    for i in 0..d {
        for j in 0..d {
            let c = lin.get(i, j);
            let (x, y) = (c * &lo[j], c * &hi[j]);
            let (mn, mx) = if x <= y { (x, y) } else { (y, x) };
            a[i] += mn;
            b[i] += mx;
        }
    }
    (a, b)
}

/// Empirical `μ(A ∩ K_w)/μ(K_w)` with its binomial standard error.
pub fn cylinder_density(
    ifs: &RationalIfs,
    w: &Word,
    predicate: &dyn Fn(&[f64]) -> bool,
    samples: usize,
    depth: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if samples == 0 {
        return domain("zero samples");
    }
    let fw = compose_word(ifs, w)?;
    let sampler = LetterSampler::new(ifs);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lin: Vec<(f64, Vec<Vec<f64>>, Vec<f64>)> =
        ifs.maps.iter().map(|m| (to_f64(&m.rho), m.rot.to_f64(), m.shift.iter().map(to_f64).collect())).collect();
    let outer = (to_f64(&fw.rho), fw.rot.to_f64(), fw.shift.iter().map(to_f64).collect::<Vec<f64>>());
    let apply = |(rho, rot, b): &(f64, Vec<Vec<f64>>, Vec<f64>), y: &[f64]| -> Vec<f64> {
        (0..y.len()).map(|i| rho * rot[i].iter().zip(y).map(|(a, v)| a * v).sum::<f64>() + b[i]).collect()
    };
    let d = ifs.dim();
    let mut hits = 0usize;
    for _ in 0..samples {
        let letters: Vec<usize> = (0..depth).map(|_| sampler.draw(&mut rng)).collect();
        let mut y = vec![0.0; d];
        for &i in letters.iter().rev() {
            y = apply(&lin[i], &y);
        }
        let y = apply(&outer, &y);
        if predicate(&y) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    Ok((p, (p * (1.0 - p) / samples as f64).sqrt()))
}

/// Base-`p` integer `Σ w_i p^{n−i}` of a missing-digit word; `b_w` is this over `p^n`.
pub fn digit_numerator(base: u64, w: &Word) -> BigInt {
    w.0.iter().fold(BigInt::zero(), |acc, &l| acc * base + l)
}

/// One-dimensional IFS `x ↦ ρ_i x + b_i` with given weights.
pub fn affine_1d(params: &[(Rational, Rational)], lambda: Vec<Rational>) -> Result<RationalIfs> {
    let maps = params.iter().map(|(r, b)| SimilarityMap::scalar(r.clone(), b.clone())).collect::<Result<Vec<_>>>()?;
    RationalIfs::new((0..maps.len()).collect(), maps, lambda)
}

/// Convenience: the two-map system `x/2`, `x/4 + 3/4` with uniform weights.
pub fn mixed_ratio_example() -> RationalIfs {
    affine_1d(&[(rat(1, 2), int(0)), (rat(1, 4), rat(3, 4))], vec![rat(1, 2), rat(1, 2)]).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ternary_full() -> RationalIfs {
        RationalIfs::missing_digit(3, &[0, 1, 2]).unwrap()
    }

    fn middle_third() -> RationalIfs {
        RationalIfs::missing_digit(3, &[0, 2]).unwrap()
    }

    #[test]
    fn composition_order() {
        let ifs = ternary_full();
        let e = compose_word(&ifs, &Word::empty()).unwrap();
        assert_eq!(e.rho(), &Rational::one());
        assert_eq!(e.shift(), &[Rational::zero()]);
        let f = compose_word(&ifs, &Word(vec![2, 0])).unwrap();
        assert_eq!((f.rho().clone(), f.shift()[0].clone()), (rat(1, 9), rat(2, 3)));
        let g = compose_word(&ifs, &Word(vec![0, 2])).unwrap();
        assert_eq!((g.rho().clone(), g.shift()[0].clone()), (rat(1, 9), rat(2, 9)));
        assert_eq!(compose_word(&ifs, &Word(vec![7])), Err(Error::Alphabet(7)));
    }

    #[test]
    fn cylinder_weights() {
        let ifs = middle_third();
        assert_eq!(cylinder_measure(&ifs, &Word::empty()).unwrap(), Rational::one());
        assert_eq!(cylinder_measure(&ifs, &Word(vec![0, 2, 2])).unwrap(), rat(1, 8));
        let w = ternary_full().with_weights(vec![rat(1, 3), rat(2, 3), int(0)]);
        assert!(w.is_err());
        let two = affine_1d(&[(rat(1, 3), int(0)), (rat(1, 3), rat(2, 3))], vec![rat(1, 3), rat(2, 3)]).unwrap();
        assert_eq!(cylinder_measure(&two, &Word(vec![1, 0])).unwrap(), rat(2, 9));
    }

    #[test]
    fn markov_examples() {
        let ifs = middle_third();
        let id = |x: &[Rational]| x[0].clone();
        let c = |_: &[Rational]| rat(5, 7);
        assert_eq!(markov_iterate(&ifs, &c, &[int(0)], 4).unwrap(), rat(5, 7));
        assert_eq!(markov_iterate(&ifs, &id, &[int(0)], 1).unwrap(), rat(1, 3));
        assert_eq!(markov_iterate(&ifs, &id, &[int(0)], 2).unwrap(), rat(4, 9));
    }

    #[test]
    fn sampled_markov_close_to_exact() {
        let ifs = middle_third();
        let (m, se) = markov_iterate_sampled(&ifs, &|x| x[0], &[0.0], 2, 20_000, 7).unwrap();
        assert!((m - 4.0 / 9.0).abs() < 4.0 * se + 1e-12);
    }

    #[test]
    fn sample_point_examples() {
        let single = RationalIfs::uniform(vec![SimilarityMap::scalar(rat(1, 2), int(0)).unwrap()]).unwrap();
        let s = sample_point(&single, 10, 3).unwrap();
        assert_eq!(s.point, vec![int(0)]);
        assert_eq!(s.bound, int(0));
        let ifs = middle_third();
        let p = point_of_word(&ifs, &Word(vec![2, 2, 2])).unwrap();
        assert_eq!(p.point, vec![rat(26, 27)]);
        // (1/3)^3 · (2/3) / (2/3)
        assert_eq!(p.bound, rat(1, 27));
        assert!(sample_point(&ifs, 0, 1).is_err());
    }

    #[test]
    fn prefix_examples() {
        let eq = ternary_full();
        let p = prefix_set(&eq, &rat(1, 4)).unwrap();
        assert_eq!(p.words, eq.words(2));
        assert!(p.verify(&eq).unwrap());
        let mixed = affine_1d(&[(rat(1, 2), int(0)), (rat(1, 4), rat(1, 2))], vec![rat(1, 2), rat(1, 2)]).unwrap();
        let p = prefix_set(&mixed, &rat(1, 4)).unwrap();
        let mut expect: Vec<Word> =
            [vec![0, 1], vec![1, 0], vec![1, 1], vec![0, 0, 0], vec![0, 0, 1]].into_iter().map(Word).collect();
        expect.sort();
        assert_eq!(p.words, expect);
        assert!(p.verify(&mixed).unwrap());
        assert_eq!(prefix_set(&eq, &int(1)).unwrap().words, eq.words(1));
        assert!(prefix_set(&eq, &int(0)).is_err());
    }

    #[test]
    fn moran_examples() {
        let s = moran_dimension(&middle_third());
        assert!((s - 2f64.ln() / 3f64.ln()).abs() < 1e-12);
        let mixed = mixed_ratio_example();
        let s = moran_dimension(&mixed);
        // 2^{-s} solves x + x^2 = 1.
        let x = (5f64.sqrt() - 1.0) / 2.0;
        assert!((s - (-x.log2())).abs() < 1e-12);
        assert!((0.5f64.powf(s) + 0.25f64.powf(s) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cocycle_examples() {
        let l = [rat(3, 10), rat(7, 10)];
        assert_eq!(cocycle_average(&l, &[int(2), int(5)], 0, true).unwrap(), int(1));
        assert_eq!(cocycle_average(&l, &[int(2), int(5)], 2, true).unwrap(), rat(1681, 100));
        assert_eq!(cocycle_average(&l, &[int(1), int(1)], 6, true).unwrap(), int(1));
        assert!(cocycle_average(&l, &[int(1)], 1, false).is_err());
    }

    #[test]
    fn osc_examples() {
        let (lo, hi) = ([int(0)], [int(1)]);
        assert!(verify_osc(&RationalIfs::missing_digit(5, &[0, 1, 2, 3]).unwrap(), &lo, &hi).unwrap());
        let m = SimilarityMap::scalar(rat(1, 2), int(0)).unwrap();
        let dup = RationalIfs::uniform(vec![m.clone(), m]).unwrap();
        assert!(!verify_osc(&dup, &lo, &hi).unwrap());
        let overlap = affine_1d(&[(rat(1, 2), int(0)), (rat(1, 2), rat(1, 4))], vec![rat(1, 2), rat(1, 2)]).unwrap();
        assert!(!verify_osc(&overlap, &lo, &hi).unwrap());
    }

    #[test]
    fn density_examples() {
        let ifs = middle_third();
        let w = Word(vec![0]);
        assert_eq!(cylinder_density(&ifs, &w, &|_| true, 100, 20, 1).unwrap(), (1.0, 0.0));
        assert_eq!(cylinder_density(&ifs, &w, &|_| false, 100, 20, 1).unwrap(), (0.0, 0.0));
        let (p, se) = cylinder_density(&ifs, &w, &|x| x[0] < 1.0 / 3.0 + 1e-12, 1000, 30, 1).unwrap();
        assert!((p - 1.0).abs() <= 3.0 * se + 1e-12);
        assert!(cylinder_density(&ifs, &w, &|_| true, 0, 20, 1).is_err());
    }

    #[test]
    fn rotation_validation() {
        let rot = RationalMatrix::from_rows(vec![vec![rat(3, 5), rat(-4, 5)], vec![rat(4, 5), rat(3, 5)]]);
        assert!(SimilarityMap::new(rat(1, 2), rot, vec![int(0), int(0)]).is_ok());
        let refl = RationalMatrix::from_i64(&[&[1, 0], &[0, -1]]);
        assert!(SimilarityMap::new(rat(1, 2), refl, vec![int(0), int(0)]).is_err());
        let shear = RationalMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        assert!(SimilarityMap::new(rat(1, 2), shear, vec![int(0), int(0)]).is_err());
        assert!(SimilarityMap::scalar(int(1), int(0)).is_err());
    }

    #[test]
    fn prime_sets() {
        let rot = RationalMatrix::from_rows(vec![vec![rat(3, 5), rat(-4, 5)], vec![rat(4, 5), rat(3, 5)]]);
        let m = SimilarityMap::new(rat(2, 3), rot, vec![rat(1, 7), int(0)]).unwrap();
        let ifs = RationalIfs::uniform(vec![m]).unwrap();
        assert_eq!(ifs.primes(), &[2, 3, 5, 7]);
        assert_eq!(middle_third().primes(), &[3]);
    }
}
