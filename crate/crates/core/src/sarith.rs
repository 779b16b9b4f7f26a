//! S-arithmetic toolkit: p-adic norms, KAK exponents, the γ semigroup and
//! congruence-index formulas.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::ifs::{compose_word, RationalIfs, Word};
use crate::matrix::RationalMatrix;
use crate::rational::{is_prime, pow, prime_factors, to_f64, valuation, Rational};

/// The exact p-power `p^exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PPower {
    pub p: u64,
    pub exp: i64,
}

impl PPower {
    pub fn value(&self) -> Rational {
        pow(&Rational::from_integer(BigInt::from(self.p)), self.exp as i32)
    }

    pub fn to_f64(&self) -> f64 {
        (self.p as f64).powi(self.exp as i32)
    }
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        domain(format!("{p} is not prime"))
    }
}

/// `|x|_p`; `None` is the `+∞` sentinel returned for zero.
pub fn padic_norm(x: &Rational, p: u64) -> Result<Option<PPower>> {
    check_prime(p)?;
    Ok(valuation(x, p).map(|v| PPower { p, exp: -v }))
}

/// Entrywise maximum of `|x_ij|_p`.
pub fn padic_norm_matrix(m: &RationalMatrix, p: u64) -> Result<PPower> {
    check_prime(p)?;
    let v = m
        .entries()
        .iter()
        .filter_map(|x| valuation(x, p))
        .min()
        .ok_or_else(|| Error::Domain("zero matrix has no p-adic norm".into()))?;
    Ok(PPower { p, exp: -v })
}

/// Non-increasing exponents `n₁ ≥ … ≥ n_{d+1} = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KakExponents {
    pub exps: Vec<i64>,
}

/// p-valuations of the elementary divisors of `M` over the localization at `p`,
/// in pivot order.
pub fn elementary_divisor_valuations(m: &RationalMatrix, p: u64) -> Result<Vec<i64>> {
    check_prime(p)?;
    if !m.is_square() {
        return domain("matrix must be square");
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                if let Some(v) = valuation(a.get(i, j), p) {
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, i, j)) = best else {
            return domain("singular matrix");
        };
        a.swap_rows(k, i);
        a.swap_cols(k, j);
        let piv = a.get(k, k).clone();
        for r in k + 1..n {
            let f = a.get(r, k) / &piv;
            if f.is_zero() {
                continue;
            }
            for c in k..n {
                let x = a.get(r, c) - &f * a.get(k, c);
                a.set(r, c, x);
            }
        }
        for c in k + 1..n {
            let f = a.get(k, c) / &piv;
            if f.is_zero() {
                continue;
            }
            for r in k..n {
                let x = a.get(r, c) - &f * a.get(r, k);
                a.set(r, c, x);
            }
        }
        out.push(v);
    }
    Ok(out)
}

pub fn kak_exponents(m: &RationalMatrix, p: u64) -> Result<KakExponents> {
    let e = elementary_divisor_valuations(m, p)?;
    let top = *e.iter().max().expect("nonempty");
    let mut exps: Vec<i64> = e.iter().map(|x| top - x).collect();
    exps.sort_unstable_by(|a, b| b.cmp(a));
    Ok(KakExponents { exps })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Place {
    Finite(u64),
    Infinite,
}

/// Exact `‖Ad_M‖_p = p^{n₁}`.
pub fn adjoint_norm_p(m: &RationalMatrix, p: u64) -> Result<PPower> {
    let k = kak_exponents(m, p)?;
    Ok(PPower { p, exp: k.exps[0] })
}

/// Operator norm of `X ↦ MXM⁻¹` on trace-zero matrices.
pub fn adjoint_norm(m: &RationalMatrix, place: Place) -> Result<f64> {
    match place {
        Place::Finite(p) => Ok(adjoint_norm_p(m, p)?.to_f64()),
        Place::Infinite => adjoint_norm_arch(m),
    }
}

fn adjoint_norm_arch(m: &RationalMatrix) -> Result<f64> {
    let inv = m.inverse()?;
    let n = m.rows();
    let mf = DMatrix::from_fn(n, n, |i, j| to_f64(m.get(i, j)));
    let invf = DMatrix::from_fn(n, n, |i, j| to_f64(inv.get(i, j)));
    let basis = trace_zero_basis(n);
    let k = basis.len();
    let ad = DMatrix::from_fn(k, k, |i, j| {
        let img = &mf * &basis[j] * &invf;
        img.dot(&basis[i])
    });
    let svd = ad.svd(false, false);
    Ok(svd.singular_values.iter().cloned().fold(0.0, f64::max))
}

/// Frobenius-orthonormal basis of trace-zero `n×n` matrices.
fn trace_zero_basis(n: usize) -> Vec<DMatrix<f64>> {
    let mut out = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut e = DMatrix::zeros(n, n);
                e[(i, j)] = 1.0;
                out.push(e);
            }
        }
    }
    let mut diag: Vec<DMatrix<f64>> = Vec::new();
    for i in 0..n - 1 {
        let mut h = DMatrix::zeros(n, n);
        h[(i, i)] = 1.0;
        h[(i + 1, i + 1)] = -1.0;
        for b in &diag {
            let c = h.dot(b);
            h -= b * c;
        }
        let norm = h.norm();
        diag.push(h / norm);
    }
    out.extend(diag);
    out
}

/// A pair (Archimedean, finite) of invertible matrices, compared modulo scalars.
#[derive(Clone, Debug)]
pub struct SElement {
    pub arch: RationalMatrix,
    pub fin: RationalMatrix,
    pub primes: Vec<u64>,
}

impl SElement {
    pub fn new(arch: RationalMatrix, fin: RationalMatrix, primes: Vec<u64>) -> Result<Self> {
        if !arch.is_square() || arch.rows() != fin.rows() || !fin.is_square() {
            return domain("components must be square of equal size");
        }
        if arch.det().is_zero() || fin.det().is_zero() {
            return domain("components must be invertible");
        }
        Ok(Self { arch, fin, primes })
    }

    pub fn identity(n: usize, primes: Vec<u64>) -> Self {
        Self { arch: RationalMatrix::identity(n), fin: RationalMatrix::identity(n), primes }
    }

    /// `(u(x), Id)`.
    pub fn horosphere_arch(x: &[Rational], primes: Vec<u64>) -> Self {
        Self { arch: RationalMatrix::unipotent(x), fin: RationalMatrix::identity(x.len() + 1), primes }
    }

    /// `(u(x), u(y))`.
    pub fn horosphere(x: &[Rational], y: &[Rational], primes: Vec<u64>) -> Self {
        Self { arch: RationalMatrix::unipotent(x), fin: RationalMatrix::unipotent(y), primes }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { arch: &self.arch * &other.arch, fin: &self.fin * &other.fin, primes: self.primes.clone() }
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Self { arch: self.arch.inverse()?, fin: self.fin.inverse()?, primes: self.primes.clone() })
    }

    pub fn projective_eq(&self, other: &Self) -> bool {
        self.arch.projective_eq(&other.arch) && self.fin.projective_eq(&other.fin)
    }

    /// Two row-major matrices, one per line, entries separated by spaces.
    pub fn serialize(&self) -> String {
        let line = |m: &RationalMatrix| m.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        format!("{}\n{}", line(&self.arch), line(&self.fin))
    }
}

impl PartialEq for SElement {
    fn eq(&self, other: &Self) -> bool {
        self.projective_eq(other)
    }
}

/// `γ_w`: Archimedean part `diag(ρ_w O_w, 1)`, finite part `[[ρ_w O_w, −b_w],[0, 1]]`.
pub fn gamma_element(ifs: &RationalIfs, w: &Word) -> Result<SElement> {
    let f = compose_word(ifs, w)?;
    let lin = f.linear();
    let d = ifs.dim();
    let arch = RationalMatrix::affine_block(&lin, &vec![Rational::zero(); d], Rational::one());
    let neg: Vec<Rational> = f.shift().iter().map(|b| -b).collect();
    let fin = RationalMatrix::affine_block(&lin, &neg, Rational::one());
    Ok(SElement { arch, fin, primes: ifs.primes().to_vec() })
}

/// `γ̃_w = u(−b_w, 0)γ_w`; both components equal `[[ρ_w O_w, −b_w],[0, 1]]`.
pub fn gamma_tilde(ifs: &RationalIfs, w: &Word) -> Result<SElement> {
    let g = gamma_element(ifs, w)?;
    let f = compose_word(ifs, w)?;
    let neg: Vec<Rational> = f.shift().iter().map(|b| -b).collect();
    let u = SElement::horosphere_arch(&neg, ifs.primes().to_vec());
    Ok(u.mul(&g))
}

/// Checks `γ_w u(x,0) γ_w⁻¹ u(b_w,0) = u(f_w(x),0)` exactly.
pub fn verify_key_identity(ifs: &RationalIfs, w: &Word, x: &[Rational]) -> Result<bool> {
    if x.len() != ifs.dim() {
        return domain("point dimension differs from the IFS");
    }
    let f = compose_word(ifs, w)?;
    let g = gamma_element(ifs, w)?;
    let primes = ifs.primes().to_vec();
    let lhs = g
        .mul(&SElement::horosphere_arch(x, primes.clone()))
        .mul(&g.inverse()?)
        .mul(&SElement::horosphere_arch(f.shift(), primes.clone()));
    let rhs = SElement::horosphere_arch(&f.apply(x), primes);
    Ok(lhs.projective_eq(&rhs))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityAudit {
    pub checks: usize,
    pub failures: Vec<(Word, Vec<Rational>)>,
}

impl IdentityAudit {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Random points with numerators in `[−1000, 1000]` and denominators in `[1, 1000]`.
pub fn random_rational_points(d: usize, count: usize, seed: u64) -> Vec<Vec<Rational>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..d)
                .map(|_| {
                    Rational::new(
                        BigInt::from(rng.random_range(-1000i64..=1000)),
                        BigInt::from(rng.random_range(1i64..=1000)),
                    )
                })
                .collect()
        })
        .collect()
}

/// The key identity on every word of length at most `max_len` at `points` random points.
pub fn audit_key_identities(ifs: &RationalIfs, max_len: usize, points: usize, seed: u64) -> Result<IdentityAudit> {
    let xs = random_rational_points(ifs.dim(), points, seed);
    let words: Vec<Word> = (0..=max_len).flat_map(|n| ifs.words(n)).collect();
    let failures: Vec<Vec<(Word, Vec<Rational>)>> = words
        .par_iter()
        .map(|w| {
            let mut bad = Vec::new();
            for x in &xs {
                if !verify_key_identity(ifs, w, x)? {
                    bad.push((w.clone(), x.clone()));
                }
            }
            Ok(bad)
        })
        .collect::<Result<_>>()?;
    Ok(IdentityAudit { checks: words.len() * xs.len(), failures: failures.into_iter().flatten().collect() })
}

/// True iff `M` has a projective representative in `GL(ℤ[S⁻¹])`.
pub fn in_gamma_s(m: &RationalMatrix, primes: &[u64]) -> bool {
    let nf = m.projective_normal_form();
    let n = m.rows();
    let int = RationalMatrix::from_rows(
        (0..n).map(|i| (0..n).map(|j| Rational::from_integer(nf[i * n + j].clone())).collect()).collect(),
    );
    let det = int.det();
    !det.is_zero() && prime_factors(det.numer()).iter().all(|q| primes.contains(q))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    pub words_checked: usize,
    pub non_members: Vec<Word>,
    pub collisions: Vec<(Word, Word)>,
}

impl MembershipReport {
    pub fn members(&self) -> bool {
        self.non_members.is_empty()
    }

    pub fn injective(&self) -> bool {
        self.collisions.is_empty()
    }
}

/// Membership of `γ̃_ω` in `Γ_S` for `|ω| ≤ n` and injectivity of `ω ↦ γ̃_ω` on words of length `n`.
pub fn lattice_membership_and_freeness(ifs: &RationalIfs, n: usize) -> Result<MembershipReport> {
    let k = ifs.len() as f64;
    let total: f64 = (0..=n).map(|j| k.powi(j as i32)).sum();
    if total > 1e6 {
        return domain("too many words for an exhaustive sweep");
    }
    let primes = ifs.primes().to_vec();
    let mut words_checked = 0;
    let mut non_members = Vec::new();
    let mut collisions = Vec::new();
    for len in 0..=n {
        let words = ifs.words(len);
        let forms: Vec<(Word, bool, Vec<BigInt>)> = words
            .into_par_iter()
            .map(|w| {
                let g = gamma_tilde(ifs, &w)?;
                let ok = g.arch.projective_eq(&g.fin) && in_gamma_s(&g.arch, &primes);
                let nf = g.arch.projective_normal_form();
                Ok((w, ok, nf))
            })
            .collect::<Result<_>>()?;
        words_checked += forms.len();
        let mut seen: HashMap<Vec<BigInt>, Word> = HashMap::new();
        for (w, ok, nf) in forms {
            if !ok {
                non_members.push(w.clone());
            }
            if len == n {
                if let Some(prev) = seen.get(&nf) {
                    collisions.push((prev.clone(), w));
                } else {
                    seen.insert(nf, w);
                }
            }
        }
    }
    Ok(MembershipReport { words_checked, non_members, collisions })
}

/// `max_i ‖γ_i‖_p` over the letters.
pub fn letter_norm(ifs: &RationalIfs, p: u64) -> Result<PPower> {
    let mut best = PPower { p, exp: 0 };
    for &l in ifs.labels() {
        let g = gamma_element(ifs, &Word(vec![l]))?;
        let a = adjoint_norm_p(&g.fin, p)?;
        if a.exp > best.exp {
            best = a;
        }
    }
    Ok(best)
}

/// Exponents `(A, L)` of the congruence index bound.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexExponents {
    pub a: f64,
    pub l: f64,
    /// Integer exponents when available.
    pub exact: Option<(u32, u32)>,
}

pub fn index_exponents(ifs: &RationalIfs) -> Result<IndexExponents> {
    let d = ifs.dim() as f64;
    if ifs.missing_digit_data().is_some() {
        return Ok(IndexExponents { a: 6.0, l: 3.0, exact: Some((6, 3)) });
    }
    let ln_min = to_f64(&ifs.rho_min()).ln();
    let ln_max = to_f64(&ifs.rho_max()).ln();
    let (mut sl, mut sa) = (0.0, 0.0);
    for &p in ifs.primes() {
        let c = letter_norm(ifs, p)?;
        let lc = c.to_f64().ln();
        sl += lc / -ln_min;
        sa += lc / -ln_max;
    }
    Ok(IndexExponents { a: 2.0 * (d * d + 2.0 * d) * sa, l: (d * d + 2.0 * d) * sl, exact: None })
}

/// The factor `ρ_w^{−A}·ρ_min^{−nL}`, valid up to an absolute constant.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexBound {
    pub exponents: IndexExponents,
    pub value: f64,
    pub exact: Option<Rational>,
}

pub fn index_bound(ifs: &RationalIfs, w: &Word, n: u32) -> Result<IndexBound> {
    let e = index_exponents(ifs)?;
    let rho_w = compose_word(ifs, w)?.rho().clone();
    let rho_min = ifs.rho_min();
    let exact = e.exact.map(|(a, l)| pow(&rho_w, -(a as i32)) * pow(&rho_min, -((n * l) as i32)));
    let value = match &exact {
        Some(x) => to_f64(x),
        None => (-e.a * to_f64(&rho_w).ln() - n as f64 * e.l * to_f64(&rho_min).ln()).exp(),
    };
    Ok(IndexBound { exponents: e, value, exact })
}

/// `|SL_{d+1}(ℤ/p^νℤ)| = p^{(d²+2d)ν}·∏_{k=2}^{d+1}(1 − p^{−k})`.
pub fn sl_order(d: u32, p: u64, nu: i64) -> Result<BigUint> {
    check_prime(p)?;
    if nu < 0 {
        return domain("nu must be nonnegative");
    }
    if nu == 0 {
        return Ok(BigUint::one());
    }
    let bp = BigUint::from(p);
    let top = (d * d + 2 * d) as u64 * nu as u64;
    let shed: u64 = (2..=d as u64 + 1).sum();
    let mut out = num_traits::pow(bp.clone(), (top - shed) as usize);
    for k in 2..=d as usize + 1 {
        out *= num_traits::pow(bp.clone(), k) - BigUint::one();
    }
    Ok(out)
}

/// `v(d) = (⌊d/2⌋ + 1)·⌈d/2⌉`.
pub fn v_of_d(d: u32) -> u32 {
    (d / 2 + 1) * d.div_ceil(2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShellReport {
    /// Each `𝐧 ∈ I_n^d` with `δ_B(a_𝐧)`.
    pub terms: Vec<(Vec<u32>, Rational)>,
    pub sum: Rational,
    pub lower: Rational,
    pub upper: Rational,
}

impl ShellReport {
    pub fn in_bracket(&self) -> bool {
        self.lower <= self.sum && self.sum <= self.upper
    }
}

/// Shell `I_n^d = {n = n₁ ≥ … ≥ n_d ≥ 0}` with `δ_B = p^{Σ n_i(d+2−2i)}`.
pub fn shell_and_modular(p: u64, n: u32, d: u32) -> Result<ShellReport> {
    check_prime(p)?;
    if d == 0 {
        return domain("d must be positive");
    }
    let mut tuples = vec![vec![n]];
    for _ in 1..d {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                let last = *t.last().expect("nonempty");
                (0..=last).map(move |k| {
                    let mut u = t.clone();
                    u.push(k);
                    u
                })
            })
            .collect();
    }
    let bp = Rational::from_integer(BigInt::from(p));
    let terms: Vec<(Vec<u32>, Rational)> = tuples
        .into_iter()
        .map(|t| {
            let e: i64 = t.iter().enumerate().map(|(i, &ni)| ni as i64 * (d as i64 + 2 - 2 * (i as i64 + 1))).sum();
            let v = pow(&bp, e as i32);
            (t, v)
        })
        .collect();
    let sum: Rational = terms.iter().map(|(_, v)| v.clone()).sum();
    let lower = pow(&bp, (v_of_d(d) * n) as i32);
    let upper = &lower * Rational::from_integer(binomial(n + d - 1, d - 1));
    Ok(ShellReport { terms, sum, lower, upper })
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut out = BigInt::one();
    for i in 0..k {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

/// `∏_{p ∈ S} ‖γ_w‖_p`, exact.
pub fn gamma_norm_product(ifs: &RationalIfs, w: &Word) -> Result<Rational> {
    let g = gamma_element(ifs, w)?;
    let mut out = Rational::one();
    for &p in ifs.primes() {
        out *= adjoint_norm_p(&g.fin, p)?.value();
    }
    Ok(out.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn digit_fin() -> RationalMatrix {
        RationalMatrix::from_rows(vec![vec![rat(1, 3), rat(-2, 3)], vec![int(0), int(1)]])
    }

    #[test]
    fn padic_norm_examples() {
        assert_eq!(padic_norm(&rat(1, 9), 3).unwrap().unwrap().value(), int(9));
        assert_eq!(padic_norm(&int(12), 2).unwrap().unwrap().value(), rat(1, 4));
        assert_eq!(padic_norm(&int(0), 2).unwrap(), None);
        assert!(padic_norm(&int(3), 4).is_err());
        assert_eq!(padic_norm_matrix(&digit_fin(), 3).unwrap().value(), int(3));
    }

    #[test]
    fn kak_examples() {
        assert_eq!(kak_exponents(&RationalMatrix::identity(3), 5).unwrap().exps, vec![0, 0, 0]);
        let m = RationalMatrix::diagonal(&[rat(1, 9), int(1)]);
        assert_eq!(kak_exponents(&m, 3).unwrap().exps, vec![2, 0]);
        assert_eq!(kak_exponents(&digit_fin(), 3).unwrap().exps, vec![1, 0]);
        assert!(kak_exponents(&RationalMatrix::from_i64(&[&[1, 2], &[2, 4]]), 3).is_err());
    }

    #[test]
    fn adjoint_examples() {
        let m = RationalMatrix::diagonal(&[rat(1, 9), int(1)]);
        assert_eq!(adjoint_norm(&m, Place::Finite(3)).unwrap(), 9.0);
        let u = RationalMatrix::unipotent(&[rat(1, 9)]);
        assert_eq!(adjoint_norm(&u, Place::Finite(3)).unwrap(), 81.0);
        let id = RationalMatrix::identity(3);
        assert_eq!(adjoint_norm(&id, Place::Finite(2)).unwrap(), 1.0);
        assert!((adjoint_norm(&id, Place::Infinite).unwrap() - 1.0).abs() < 1e-10);
        for t in [int(5), rat(1, 7)] {
            let a = RationalMatrix::dilation(1, &t);
            let want = to_f64(&t).max(1.0 / to_f64(&t));
            assert!((adjoint_norm(&a, Place::Infinite).unwrap() - want).abs() < 1e-10);
        }
    }

    #[test]
    fn gamma_examples() {
        let ifs = RationalIfs::missing_digit(3, &[0, 2]).unwrap();
        let g = gamma_element(&ifs, &Word::empty()).unwrap();
        assert!(g.projective_eq(&SElement::identity(2, vec![3])));
        let g = gamma_element(&ifs, &Word(vec![2])).unwrap();
        assert_eq!(g.arch, RationalMatrix::diagonal(&[rat(1, 3), int(1)]));
        assert_eq!(g.fin, digit_fin());
        let g = gamma_element(&ifs, &Word(vec![2, 2])).unwrap();
        assert_eq!(g.fin, RationalMatrix::from_rows(vec![vec![rat(1, 9), rat(-8, 9)], vec![int(0), int(1)]]));
    }

    #[test]
    fn key_identity_examples() {
        let ifs = RationalIfs::missing_digit(3, &[0, 2]).unwrap();
        assert!(verify_key_identity(&ifs, &Word::empty(), &[rat(3, 7)]).unwrap());
        assert!(verify_key_identity(&ifs, &Word(vec![2]), &[rat(1, 5)]).unwrap());
        let lhs = &(&(&RationalMatrix::diagonal(&[rat(1, 3), int(1)]) * &RationalMatrix::unipotent(&[rat(1, 5)]))
            * &RationalMatrix::diagonal(&[int(3), int(1)]))
            * &RationalMatrix::unipotent(&[rat(2, 3)]);
        assert_eq!(lhs, RationalMatrix::unipotent(&[rat(1, 15) + rat(2, 3)]));
        let five = RationalIfs::missing_digit(5, &[0, 1, 2, 3]).unwrap();
        assert!(verify_key_identity(&five, &Word(vec![3, 1]), &[int(0)]).unwrap());
    }

    #[test]
    fn membership_examples() {
        let ifs = RationalIfs::missing_digit(3, &[0, 2]).unwrap();
        let g = gamma_tilde(&ifs, &Word(vec![2])).unwrap();
        let rep: Vec<BigInt> = [1, -2, 0, 3].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(g.arch.projective_normal_form(), rep);
        assert!(in_gamma_s(&g.arch, &[3]));
        assert!(!in_gamma_s(&g.arch, &[2]));
        let five = RationalIfs::missing_digit(5, &[0, 1, 2, 3]).unwrap();
        let r = lattice_membership_and_freeness(&five, 3).unwrap();
        assert!(r.members() && r.injective());
        assert_eq!(r.words_checked, 1 + 4 + 16 + 64);
        let m = crate::ifs::SimilarityMap::scalar(rat(1, 2), int(0)).unwrap();
        let dup = RationalIfs::uniform(vec![m.clone(), m]).unwrap();
        let r = lattice_membership_and_freeness(&dup, 1).unwrap();
        assert!(!r.injective());
    }

    #[test]
    fn index_and_order_examples() {
        assert_eq!(sl_order(1, 3, 1).unwrap(), BigUint::from(24u32));
        assert_eq!(sl_order(1, 2, 1).unwrap(), BigUint::from(6u32));
        assert_eq!(sl_order(2, 2, 0).unwrap(), BigUint::one());
        assert!(sl_order(1, 3, -1).is_err());
        // |SL_3(F_2)| = 168
        assert_eq!(sl_order(2, 2, 1).unwrap(), BigUint::from(168u32));
        let ifs = RationalIfs::missing_digit(3, &[0, 2]).unwrap();
        let b = index_bound(&ifs, &Word::empty(), 2).unwrap();
        assert_eq!(b.exact, Some(int(729)));
        // general path reproduces (A, L) = (6, 3) for a prime base
        let plain = ifs.with_weights(vec![rat(1, 3), rat(2, 3)]).unwrap();
        let e = index_exponents(&plain).unwrap();
        assert!((e.a - 6.0).abs() < 1e-12 && (e.l - 3.0).abs() < 1e-12);
    }

    #[test]
    fn shell_examples() {
        let r = shell_and_modular(3, 0, 2).unwrap();
        assert_eq!((r.sum.clone(), r.lower.clone(), r.upper.clone()), (int(1), int(1), int(1)));
        let r = shell_and_modular(5, 3, 1).unwrap();
        assert_eq!((r.sum.clone(), r.lower.clone(), r.upper.clone()), (int(125), int(125), int(125)));
        let r = shell_and_modular(7, 1, 2).unwrap();
        assert_eq!(r.terms.iter().map(|t| t.1.clone()).collect::<Vec<_>>(), vec![int(49), int(49)]);
        assert_eq!((r.sum.clone(), r.lower.clone(), r.upper.clone()), (int(98), int(49), int(98)));
        assert_eq!(v_of_d(1), 1);
        assert_eq!(v_of_d(2), 2);
        assert_eq!(v_of_d(3), 4);
        assert_eq!(v_of_d(4), 6);
    }

    /// 2×2 pivoting oracle: bring the entry of least valuation to the corner
    /// and read the exponents off `e₁ = min v`, `e₂ = v(det) − e₁`.
    fn two_by_two_oracle(m: &RationalMatrix, p: u64) -> Vec<i64> {
        let e1 = m.entries().iter().filter_map(|x| valuation(x, p)).min().unwrap();
        let e2 = valuation(&m.det(), p).unwrap() - e1;
        let top = e1.max(e2);
        let mut v = vec![top - e1, top - e2];
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    #[test]
    fn kak_matches_pivoting_oracle() {
        let cases = [
            RationalMatrix::from_rows(vec![vec![rat(2, 9), rat(5, 3)], vec![rat(7, 27), int(4)]]),
            RationalMatrix::from_rows(vec![vec![int(9), int(3)], vec![int(1), rat(1, 3)]]),
            digit_fin(),
            RationalMatrix::unipotent(&[rat(1, 81)]),
        ];
        for m in &cases {
            if m.det().is_zero() {
                continue;
            }
            assert_eq!(kak_exponents(m, 3).unwrap().exps, two_by_two_oracle(m, 3), "{m}");
        }
    }
}
