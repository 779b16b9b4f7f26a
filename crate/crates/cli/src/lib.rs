//! Command-line frontend: argument parsing, configuration files and CSV output.

pub mod config;
pub mod family;
pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use dioph::borelcantelli::{bc_verify_and_bound, simplex_check, BcConstants};
use dioph::experiments::{
    basepoint, double_correlation, khintchine_scan, orbit_statistic, rational_points_average, walk_average, TestFn,
};
use dioph::rational::{parse_exact, parse_lenient, to_f64};
use dioph::sarith::{audit_key_identities, lattice_membership_and_freeness};
use dioph::spectral::{bq_rate, cantor_gap_sum, constants_table, gap_hypothesis, rate_constants, GapDelta};
use dioph::transform::{dyadic_profile, growth_checks, r_of_t};
use dioph::{Error, Result, Word};

use crate::config::{load_ifs, load_psi, parse_config, parse_test, RunSpec};
use crate::output::{real, write_csv};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "dioph", version, about = "Diophantine approximation on self-similar fractals")]
pub struct Cli {
    /// Output directory for CSV files.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Master seed; overrides a configured seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structural constants, thresholds and cutoffs.
    Constants {
        #[arg(long, default_value_t = 1)]
        d: u32,
        /// Slack; `0` gives the limiting values.
        #[arg(long, default_value = "0")]
        eps: String,
        /// Index exponent `L`.
        #[arg(long = "big-l", default_value = "3")]
        big_l: String,
        /// Rate parameter of the boundedness-quotient root.
        #[arg(long = "sigma-prime")]
        sigma_prime: Option<f64>,
    },
    /// Spectral-gap hypothesis for an IFS.
    CheckHypothesis {
        #[arg(long)]
        ifs: String,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
    },
    /// Closed form and brute force of the missing-digit gap sum.
    GapSum {
        #[arg(long)]
        base: u64,
        #[arg(long, value_delimiter = ',')]
        digits: Vec<u64>,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "1")]
        delta: String,
        #[arg(long = "brute-force")]
        brute_force: bool,
    },
    /// Key identity, lattice membership and injectivity on short words.
    IdentityAudit {
        #[arg(long)]
        ifs: String,
        #[arg(long = "max-word", default_value_t = 4)]
        max_word: usize,
        #[arg(long, default_value_t = 20)]
        points: usize,
        /// Word length of the injectivity check.
        #[arg(long = "free-depth", default_value_t = 5)]
        free_depth: usize,
    },
    /// Cusp frequencies along expanding translates.
    Equidist {
        #[command(flatten)]
        exp: ExpArgs,
        /// Earlier time `s` for two-time correlations against every `t ≥ s`.
        #[arg(long = "corr-s")]
        corr_s: Option<f64>,
    },
    /// Dyadic approximation events and cumulative hits.
    Khintchine {
        #[command(flatten)]
        exp: ExpArgs,
    },
    /// Random-walk averages through the key identity.
    Walk {
        #[command(flatten)]
        exp: ExpArgs,
    },
    /// Average over rationals with denominator `p^m`.
    RationalAvg {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value = "cusp:1/2")]
        test: String,
        #[arg(long, default_value = "max")]
        norm: String,
    },
    /// Converse Borel–Cantelli hypotheses and union bound.
    BcVerify {
        /// `const:<num/den>`, `harmonic`, or a family file.
        #[arg(long)]
        family: String,
        #[arg(long = "m-start", default_value_t = 1)]
        m_start: u64,
        #[arg(long = "n-max", default_value_t = 500)]
        n_max: u64,
        #[arg(long = "c-sharp", default_value_t = 1.0 + 1e-9)]
        c_sharp: f64,
        #[arg(long = "c-star", default_value = "2")]
        c_star: String,
        #[arg(long = "eps-star", default_value = "1")]
        eps_star: String,
        #[arg(long = "big-d", default_value_t = 1.0)]
        big_d: f64,
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
    /// Rationals of bounded denominator in a small ball.
    Simplex {
        #[arg(long, value_delimiter = ',')]
        center: Vec<String>,
        #[arg(long)]
        radius: String,
        #[arg(long)]
        n: u64,
    },
    /// Dynamical profile `r(t)` and growth checks.
    Profile {
        #[arg(long)]
        psi: String,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        #[arg(long = "n-min", default_value_t = 1)]
        n_min: u32,
        #[arg(long = "n-max", default_value_t = 30)]
        n_max: u32,
    },
}

/// Options shared by the experiment subcommands; they override `--config`.
#[derive(Args, Debug, Default)]
pub struct ExpArgs {
    /// `key = value` run file; flags override it
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `missing:base=5,digits=0,1,2,3` or an IFS file
    #[arg(long)]
    pub ifs: Option<String>,
    /// `recip`, `power:tau=<v>`, `log:a=<v>` or `table:<path>`
    #[arg(long)]
    pub psi: Option<String>,
    /// `fractal` or `lebesgue`
    #[arg(long)]
    pub source: Option<String>,
    /// Sample count, at least 100
    #[arg(long, allow_hyphen_values = true)]
    pub samples: Option<String>,
    /// Comma-separated flow times
    #[arg(long)]
    pub t: Option<String>,
    /// Comma-separated cusp radii in (0,1)
    #[arg(long)]
    pub eps: Option<String>,
    /// First dyadic level
    #[arg(long = "n-min")]
    pub n_min: Option<String>,
    /// Last dyadic level, at most 26
    #[arg(long = "n-max")]
    pub n_max: Option<String>,
    /// Basepoint word, comma-separated letters
    #[arg(long)]
    pub alpha: Option<String>,
    /// Word length of fractal samples
    #[arg(long)]
    pub depth: Option<String>,
    /// `max` or `euclidean`
    #[arg(long)]
    pub norm: Option<String>,
    /// `one`, `height` or `cusp:<radius>`
    #[arg(long)]
    pub test: Option<String>,
    /// Equidistribution rate constant
    #[arg(long = "c-f")]
    pub c_f: Option<String>,
    /// Equidistribution rate exponent
    #[arg(long = "kappa-star")]
    pub kappa_star: Option<String>,
    /// Decay exponent of the bracket error
    #[arg(long)]
    pub delta: Option<String>,
    /// Second-order Haar bracket constant
    #[arg(long = "c-prime")]
    pub c_prime: Option<String>,
}

impl ExpArgs {
    fn spec(&self, seed: Option<u64>) -> Result<RunSpec> {
        let base = match &self.config {
            Some(p) => parse_config(p)?,
            None => RunSpec::default(),
        };
        let mut over = RunSpec::default();
        let pairs = [
            ("ifs", &self.ifs),
            ("psi", &self.psi),
            ("source", &self.source),
            ("samples", &self.samples),
            ("t", &self.t),
            ("eps", &self.eps),
            ("n_min", &self.n_min),
            ("n_max", &self.n_max),
            ("alpha", &self.alpha),
            ("depth", &self.depth),
            ("norm", &self.norm),
            ("test", &self.test),
            ("c_f", &self.c_f),
            ("kappa_star", &self.kappa_star),
            ("delta", &self.delta),
            ("c_prime", &self.c_prime),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                over.set(k, v)?;
            }
        }
        over.seed = seed;
        let merged = base.merge(over);
        if let (Some(a), Some(b)) = (merged.n_min, merged.n_max) {
            if a == 0 || a > b {
                return Err(Error::Domain("need 1 ≤ n_min ≤ n_max".into()));
            }
        }
        Ok(merged)
    }
}

/// Result of a successful subcommand.
enum Outcome {
    Ok,
    HypothesisFailed,
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                ErrorKind::InvalidSubcommand
                | ErrorKind::MissingSubcommand
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
                | ErrorKind::UnknownArgument => EXIT_USAGE,
                _ => EXIT_DOMAIN,
            };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("error: cannot configure {n} worker threads");
            return EXIT_DOMAIN;
        }
    }
    match execute(&cli) {
        Ok(Outcome::Ok) => EXIT_OK,
        Ok(Outcome::HypothesisFailed) => EXIT_HYPOTHESIS,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_DOMAIN
        }
    }
}

fn flag(ok: bool) -> Outcome {
    if ok {
        Outcome::Ok
    } else {
        Outcome::HypothesisFailed
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let out = cli.out.as_path();
    let seed = cli.seed.unwrap_or(0);
    match &cli.cmd {
        Command::Constants { d, eps, big_l, sigma_prime } => constants(out, seed, *d, eps, big_l, *sigma_prime),
        Command::CheckHypothesis { ifs, eps } => check_hypothesis(out, seed, ifs, *eps),
        Command::GapSum { base, digits, n, delta, brute_force } => gap_sum(*base, digits, *n, delta, *brute_force),
        Command::IdentityAudit { ifs, max_word, points, free_depth } => {
            identity_audit(ifs, *max_word, *points, *free_depth, seed)
        }
        Command::Equidist { exp, corr_s } => equidist(out, &exp.spec(cli.seed)?, *corr_s),
        Command::Khintchine { exp } => khintchine(out, &exp.spec(cli.seed)?),
        Command::Walk { exp } => walk(out, &exp.spec(cli.seed)?),
        Command::RationalAvg { p, m, test, norm } => rational_avg(out, seed, *p, *m, test, norm),
        Command::BcVerify { family, m_start, n_max, c_sharp, c_star, eps_star, big_d, sigma, a } => {
            let c = BcConstants {
                c_sharp: *c_sharp,
                c_star: parse_exact(c_star)?,
                eps_star: parse_exact(eps_star)?,
                d: *big_d,
                sigma: *sigma,
                a: *a,
            };
            bc_verify(out, seed, family, &c, *m_start, *n_max)
        }
        Command::Simplex { center, radius, n } => simplex(out, seed, center, radius, *n),
        Command::Profile { psi, d, t, n_min, n_max } => profile(out, seed, psi, *d, t, *n_min, *n_max),
    }
}

fn constants(out: &Path, seed: u64, d: u32, eps: &str, big_l: &str, sigma_prime: Option<f64>) -> Result<Outcome> {
    let eps = parse_lenient(eps)?;
    let big_l = parse_lenient(big_l)?;
    let mut rows = constants_table(d, &eps, &big_l)?;
    if let Some(s) = sigma_prime {
        let bq = bq_rate(s, d * (d + 1) / 2)?;
        rows.push(("bq_eps".into(), bq.eps, None));
        rows.push(("bq_rho0".into(), bq.rho0, None));
    }
    println!("{:<18} {:>24}  exact", "name", "value");
    for (name, v, ex) in &rows {
        println!("{name:<18} {v:>24.15}  {}", ex.as_deref().unwrap_or("-"));
    }
    let csv: Vec<Vec<String>> = rows.into_iter().map(|(n, v, e)| vec![n, real(v), e.unwrap_or_default()]).collect();
    write_csv(out, "constants.csv", &["name", "value", "exact"], &csv, seed)?;
    Ok(Outcome::Ok)
}

fn check_hypothesis(out: &Path, seed: u64, ifs: &str, eps: f64) -> Result<Outcome> {
    let ifs = load_ifs(ifs)?;
    let rc = rate_constants(&ifs, eps)?;
    let g = gap_hypothesis(&ifs, eps)?;
    let rows = vec![
        ("r", rc.r),
        ("sigma", rc.sigma),
        ("o_eps", rc.o_eps),
        ("upsilon", rc.upsilon),
        ("L", rc.big_l),
        ("A", rc.big_a),
        ("gap_lhs", g.lhs),
        ("kappa", g.kappa),
        ("margin", g.margin),
        ("dimension", g.dimension),
        ("dimension_lhs", g.dimension_lhs),
        ("eps0", g.eps0),
    ];
    for (k, v) in &rows {
        println!("{k:<12} {v}");
    }
    println!("gap hypothesis: {}", if g.passed { "holds" } else { "fails" });
    println!("dimension condition: {}", if g.dimension_passed { "holds" } else { "fails" });
    let mut csv: Vec<Vec<String>> = rows.iter().map(|(k, v)| vec![k.to_string(), real(*v)]).collect();
    csv.push(vec!["gap_holds".into(), g.passed.to_string()]);
    csv.push(vec!["dimension_holds".into(), g.dimension_passed.to_string()]);
    write_csv(out, "hypothesis.csv", &["quantity", "value"], &csv, seed)?;
    Ok(flag(g.passed))
}

fn gap_sum(base: u64, digits: &[u64], n: u32, delta: &str, brute: bool) -> Result<Outcome> {
    let delta = match delta.parse::<u32>() {
        Ok(k) => GapDelta::Int(k),
        Err(_) => GapDelta::Real(delta.parse().map_err(|_| Error::Domain(format!("bad delta `{delta}`")))?),
    };
    let g = cantor_gap_sum(base, digits, n, delta, brute)?;
    let show = |e: &Option<dioph::Rational>, v: f64| e.as_ref().map_or(real(v), ToString::to_string);
    println!("closed form: {}", show(&g.exact, g.value));
    if let Some(b) = g.brute {
        println!("brute force: {}", show(&g.brute_exact, b));
    } else if g.brute_skipped {
        println!("brute force: skipped (enumeration too large)");
    }
    Ok(flag(g.agrees().unwrap_or(true)))
}

fn identity_audit(ifs: &str, max_word: usize, points: usize, depth: usize, seed: u64) -> Result<Outcome> {
    let ifs = load_ifs(ifs)?;
    let audit = audit_key_identities(&ifs, max_word, points, seed)?;
    let mem = lattice_membership_and_freeness(&ifs, depth)?;
    println!("identity checks: {} ({} failures)", audit.checks, audit.failures.len());
    for (w, x) in audit.failures.iter().take(10) {
        println!("  failure at word {:?}, point {:?}", w.0, x.iter().map(ToString::to_string).collect::<Vec<_>>());
    }
    println!("membership: {} words, {} outside the lattice", mem.words_checked, mem.non_members.len());
    println!("injectivity at depth {depth}: {} collisions", mem.collisions.len());
    let ok = audit.passed() && mem.members() && mem.injective();
    if ok {
        println!("all identities verified");
    }
    Ok(flag(ok))
}

fn equidist(out: &Path, spec: &RunSpec, corr_s: Option<f64>) -> Result<Outcome> {
    let ifs = spec.ifs()?;
    let cfg = spec.experiment(ifs.dim(), 10_000)?;
    let times = spec.t.clone().ok_or_else(|| Error::Domain("missing `t`".into()))?;
    let source = spec.source.unwrap_or(dioph::experiments::Source::Fractal);
    let table = orbit_statistic(&ifs, source, &cfg, &times)?;
    let rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| vec![real(r.t), real(r.eps), real(r.estimate), real(r.stderr), real(r.haar_lo), real(r.haar_hi)])
        .collect();
    for r in &table.rows {
        println!(
            "t={} eps={} estimate={:.6} ± {:.6} haar=[{:.6}, {:.6}]",
            r.t, r.eps, r.estimate, r.stderr, r.haar_lo, r.haar_hi
        );
    }
    for (t, q) in &table.height_quantiles {
        println!("t={t} height quantiles 10/50/90%: {:.4} {:.4} {:.4}", q[0], q[1], q[2]);
    }
    write_csv(out, "equidist.csv", &["t", "eps", "estimate", "stderr", "haar_lo", "haar_hi"], &rows, cfg.seed)?;
    if let Some(s) = corr_s {
        let eps = cfg.eps[0];
        let mut crow = Vec::new();
        for &t in times.iter().filter(|&&t| t >= s) {
            let c = double_correlation(&ifs, source, &cfg, t, s, eps, eps)?;
            crow.push(vec![real(c.t), real(c.s), real(c.joint), real(c.product), real(c.gap), real(c.stderr)]);
        }
        write_csv(out, "correlation.csv", &["t", "s", "joint", "product", "gap", "stderr"], &crow, cfg.seed)?;
    }
    Ok(Outcome::Ok)
}

fn khintchine(out: &Path, spec: &RunSpec) -> Result<Outcome> {
    let ifs = spec.ifs()?;
    let cfg = spec.experiment(ifs.dim(), 10_000)?;
    let psi = spec.psi(ifs.dim())?;
    let (lo, hi) = spec.n_range()?;
    let source = spec.source.unwrap_or(dioph::experiments::Source::Lebesgue);
    let scan = khintchine_scan(&ifs, source, &psi, &cfg, lo, hi)?;
    println!("psi^d(2^n) <= 2^-n on range: {}", scan.dirichlet_normalized);
    println!("psi^d(q) >= 1/(q log^1.1 q) on range: {}", scan.lower_growth);
    println!("bracket columns are conditional on the supplied constants");
    let rows: Vec<Vec<String>> = scan
        .rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                real(r.t_n),
                real(r.r_tn),
                real(r.mu_an_hat),
                real(r.stderr),
                real(r.bracket_lo),
                real(r.bracket_hi),
                r.in_g0.to_string(),
                real(r.cum_hit),
            ]
        })
        .collect();
    if let Some(last) = scan.rows.last() {
        println!("cumulative hit fraction over n in [{lo}, {hi}]: {}", last.cum_hit);
    }
    let header = ["n", "t_n", "r_tn", "mu_an_hat", "stderr", "bracket_lo", "bracket_hi", "in_g0", "cum_hit"];
    write_csv(out, "khintchine.csv", &header, &rows, cfg.seed)?;
    Ok(Outcome::Ok)
}

fn walk(out: &Path, spec: &RunSpec) -> Result<Outcome> {
    let ifs = spec.ifs()?;
    let d = ifs.dim();
    let norm = spec.norm_spec(d);
    let n_max = spec.n_max.ok_or_else(|| Error::Domain("missing `n_max`".into()))? as usize;
    let test = spec.test.clone().unwrap_or(TestFn::Height);
    let alpha = Word(spec.alpha.clone().unwrap_or_default());
    let samples = spec.samples.unwrap_or(1000);
    let seed = spec.seed.unwrap_or(0);
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let w = walk_average(&ifs, n, &test, &alpha, &norm, samples, seed)?;
        let shown = w.exact.as_ref().map_or(real(w.value), ToString::to_string);
        println!("n={n} value={shown} mode={}", w.mode.label());
        rows.push(vec![n.to_string(), real(w.value), w.mode.label().to_string()]);
    }
    if let (Some(md), 1) = (ifs.missing_digit_data(), d) {
        let x = basepoint(&ifs, &alpha)?;
        for m in 0..=n_max as u32 {
            match rational_points_average(md.base, m, &test, &x, &norm) {
                Ok((v, _)) => rows.push(vec![m.to_string(), real(v), "rational-points".into()]),
                Err(_) => break,
            }
        }
    }
    write_csv(out, "walk.csv", &["n", "value", "mode"], &rows, seed)?;
    Ok(Outcome::Ok)
}

fn rational_avg(out: &Path, seed: u64, p: u64, m: u32, test: &str, norm: &str) -> Result<Outcome> {
    let test = parse_test(test)?;
    let mut spec = RunSpec::default();
    spec.set("norm", norm)?;
    let norm = spec.norm_spec(1);
    let x = dioph::UnimodularLattice::new(dioph::RationalMatrix::identity(2))?;
    let (v, exact) = rational_points_average(p, m, &test, &x, &norm)?;
    let shown = exact.as_ref().map_or(real(v), ToString::to_string);
    println!("average: {shown}");
    let row = vec![m.to_string(), real(v), exact.map(|e| e.to_string()).unwrap_or_default()];
    write_csv(out, "rational_avg.csv", &["m", "value", "exact"], &[row], seed)?;
    Ok(Outcome::Ok)
}

fn bc_verify(out: &Path, seed: u64, family: &str, c: &BcConstants, m: u64, n: u64) -> Result<Outcome> {
    let fam = family::load_family(family, n)?;
    let r = bc_verify_and_bound(fam.as_ref(), c, m, n)?;
    let rows: Vec<Vec<String>> = r
        .rows
        .iter()
        .map(|h| {
            vec![
                h.name.clone(),
                format!("{}..{}", h.range.0, h.range.1),
                h.holds.to_string(),
                format!("{}:{}", h.worst_pair.0, h.worst_pair.1),
                real(h.margin),
            ]
        })
        .collect();
    for h in &r.rows {
        println!(
            "{:<18} {:<6} worst ({}, {}) margin {:e}",
            h.name,
            if h.holds { "holds" } else { "FAILS" },
            h.worst_pair.0,
            h.worst_pair.1,
            h.margin
        );
    }
    let (across, within) = r.selection.separation_holds(&c.eps_star);
    println!(
        "selection: {} indices, parity {:?}, separation across/within: {across}/{within}",
        r.selection.indices.len(),
        r.selection.parity
    );
    println!("K = {}", r.k_schedule);
    println!("union lower bound: {:.9}", to_f64(&r.bound));
    if let Some(u) = &r.union_exact {
        println!("exact union: {:.9}", to_f64(u));
    }
    for (start, b) in &r.start_sensitivity {
        println!("bound from index {start}: {b:.9}");
    }
    write_csv(out, "bc_report.csv", &["hypothesis", "range", "holds", "worst_pair", "margin"], &rows, seed)?;
    let sel: Vec<Vec<String>> = r
        .selection
        .blocks
        .iter()
        .map(|b| {
            vec![
                b.k.to_string(),
                b.ell.to_string(),
                b.q.to_string(),
                b.lo.to_string(),
                b.hi.to_string(),
                real(to_f64(&b.sum)),
            ]
        })
        .collect();
    write_csv(out, "bc_selection.csv", &["k", "ell", "q", "lo", "hi", "sum"], &sel, seed)?;
    Ok(flag(r.all_hold() && across && within))
}

fn simplex(out: &Path, seed: u64, center: &[String], radius: &str, n: u64) -> Result<Outcome> {
    let c = center.iter().map(|s| parse_exact(s)).collect::<Result<Vec<_>>>()?;
    let r = simplex_check(&c, &parse_exact(radius)?, n)?;
    println!("volume precondition: {}", if r.precondition { "holds" } else { "fails" });
    println!("rational points: {}", r.points.len());
    if let Some((a, b)) = &r.hyperplane {
        let terms: Vec<String> = a.iter().enumerate().map(|(i, ai)| format!("({ai})·x{}", i + 1)).collect();
        println!("hyperplane: {} = {b}", terms.join(" + "));
    }
    if let Some(pts) = &r.counterexample {
        println!("counterexample: {} affinely independent points", pts.len());
    }
    let rows: Vec<Vec<String>> =
        r.points.iter().map(|p| vec![p.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")]).collect();
    write_csv(out, "simplex_points.csv", &["point"], &rows, seed)?;
    Ok(flag(r.precondition && r.counterexample.is_none()))
}

fn profile(out: &Path, seed: u64, psi: &str, d: usize, t: &[f64], n_min: u32, n_max: u32) -> Result<Outcome> {
    let psi = load_psi(psi, d)?;
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        let p = dyadic_profile(&psi, n)?;
        rows.push(vec!["dyadic".into(), n.to_string(), real(p.t), real(p.r), real(p.lam), real(p.big_l)]);
    }
    for (i, &ti) in t.iter().enumerate() {
        let p = r_of_t(&psi, ti)?;
        rows.push(vec!["time".into(), i.to_string(), real(p.t), real(p.r), real(p.lam), real(p.big_l)]);
    }
    let times: Vec<f64> =
        if t.is_empty() { rows.iter().map(|r| r[2].parse().unwrap_or(0.0)).collect() } else { t.to_vec() };
    let g = growth_checks(&psi, &times, n_min.max(1)..=n_max)?;
    println!("profile rows: {}", rows.len());
    println!("growth checks: {} pairs, {} violations", g.pairs_checked, g.violations.len());
    write_csv(out, "profile.csv", &["kind", "index", "t", "r", "lambda", "big_l"], &rows, seed)?;
    Ok(flag(g.passed()))
}
