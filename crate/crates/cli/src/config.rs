//! `key = value` run configurations for the experiment subcommands.
//!
//! Exact rationals are written `num/den`; reals use the shortest decimal that
//! round-trips. Unknown keys are errors.

use std::path::Path;

use dioph::experiments::{BracketConstants, ExperimentConfig, Source, TestFn, MIN_SAMPLES};
use dioph::ifs_text::{parse_ifs, parse_missing_digit};
use dioph::lattice::NormSpec;
use dioph::rational::parse_exact;
use dioph::{ApproxFunction, Error, RationalIfs, Result, Word};

pub const KEYS: &[&str] = &[
    "subcommand",
    "ifs",
    "psi",
    "source",
    "samples",
    "seed",
    "t",
    "eps",
    "n_min",
    "n_max",
    "alpha",
    "depth",
    "norm",
    "test",
    "c_f",
    "kappa_star",
    "delta",
    "c_prime",
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunSpec {
    pub subcommand: Option<String>,
    pub ifs: Option<String>,
    pub psi: Option<String>,
    pub source: Option<Source>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub t: Option<Vec<f64>>,
    pub eps: Option<Vec<f64>>,
    pub n_min: Option<u32>,
    pub n_max: Option<u32>,
    pub alpha: Option<Vec<usize>>,
    pub depth: Option<usize>,
    pub norm: Option<String>,
    pub test: Option<TestFn>,
    pub c_f: Option<f64>,
    pub kappa_star: Option<f64>,
    pub delta: Option<f64>,
    pub c_prime: Option<f64>,
}

fn reals(key: &str, v: &str) -> Result<Vec<f64>> {
    let out: Vec<f64> = v
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Domain(format!("`{key}`: `{s}` is not a number"))))
        .collect::<Result<_>>()?;
    if out.is_empty() || out.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain(format!("`{key}` must be a nonempty list of finite numbers")));
    }
    Ok(out)
}

fn real(key: &str, v: &str) -> Result<f64> {
    match reals(key, v)?.as_slice() {
        [x] => Ok(*x),
        _ => Err(Error::Domain(format!("`{key}` takes a single number"))),
    }
}

fn integer<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| Error::Domain(format!("`{key}`: `{v}` is not a nonnegative integer")))
}

pub fn parse_test(v: &str) -> Result<TestFn> {
    match v.trim() {
        "one" => Ok(TestFn::One),
        "height" => Ok(TestFn::Height),
        s => match s.strip_prefix("cusp:") {
            Some(e) => {
                let eps = parse_exact(e)?;
                Ok(TestFn::Cusp(eps))
            }
            None => Err(Error::Domain(format!("unknown test `{s}` (one, height, cusp:<num/den>)"))),
        },
    }
}

fn render_test(t: &TestFn) -> String {
    match t {
        TestFn::One => "one".into(),
        TestFn::Height => "height".into(),
        TestFn::Cusp(e) => format!("cusp:{e}"),
    }
}

pub fn parse_source(v: &str) -> Result<Source> {
    match v.trim() {
        "fractal" => Ok(Source::Fractal),
        "lebesgue" => Ok(Source::Lebesgue),
        s => Err(Error::Domain(format!("unknown source `{s}` (fractal, lebesgue)"))),
    }
}

fn render_source(s: Source) -> &'static str {
    match s {
        Source::Fractal => "fractal",
        Source::Lebesgue => "lebesgue",
    }
}

fn check_ifs_ref(v: &str) -> Result<()> {
    if let Some(rest) = v.strip_prefix("missing:") {
        parse_missing_digit(rest).map(|_| ())
    } else if Path::new(v).is_file() {
        Ok(())
    } else {
        Err(Error::Domain(format!("IFS file `{v}` does not exist")))
    }
}

fn check_psi_ref(v: &str) -> Result<()> {
    match v.strip_prefix("table:") {
        Some(p) if Path::new(p).is_file() => Ok(()),
        Some(p) => Err(Error::Domain(format!("psi table `{p}` does not exist"))),
        None => ApproxFunction::parse(1, v).map(|_| ()),
    }
}

impl RunSpec {
    /// Sets one key from its textual value, validating it.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        let named = |e: Error| match e {
            Error::Domain(m) if !m.contains(&format!("`{key}`")) => Error::Domain(format!("`{key}`: {m}")),
            other => other,
        };
        match key {
            "subcommand" => self.subcommand = Some(v.to_string()),
            "ifs" => {
                check_ifs_ref(v).map_err(named)?;
                self.ifs = Some(v.to_string());
            }
            "psi" => {
                check_psi_ref(v).map_err(named)?;
                self.psi = Some(v.to_string());
            }
            "source" => self.source = Some(parse_source(v).map_err(named)?),
            "samples" => {
                let n: i64 = v.parse().map_err(|_| Error::Domain(format!("`samples`: `{v}` is not an integer")))?;
                if n < MIN_SAMPLES as i64 {
                    return Err(Error::Domain(format!("`samples` must be at least {MIN_SAMPLES}, got {n}")));
                }
                self.samples = Some(n as usize);
            }
            "seed" => self.seed = Some(integer(key, v)?),
            "t" => self.t = Some(reals(key, v)?),
            "eps" => {
                let e = reals(key, v)?;
                if e.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
                    return Err(Error::Domain("`eps` entries must lie in (0,1)".into()));
                }
                self.eps = Some(e);
            }
            "n_min" => self.n_min = Some(integer(key, v)?),
            "n_max" => self.n_max = Some(integer(key, v)?),
            "alpha" => {
                self.alpha = Some(if v.is_empty() {
                    Vec::new()
                } else {
                    v.split(',').map(|s| integer(key, s)).collect::<Result<_>>()?
                })
            }
            "depth" => self.depth = Some(integer(key, v)?),
            "norm" => {
                if !matches!(v, "max" | "euclidean") {
                    return Err(Error::Domain(format!("`norm`: unknown norm `{v}` (max, euclidean)")));
                }
                self.norm = Some(v.to_string());
            }
            "test" => self.test = Some(parse_test(v).map_err(named)?),
            "c_f" => self.c_f = Some(real(key, v)?),
            "kappa_star" => self.kappa_star = Some(real(key, v)?),
            "delta" => self.delta = Some(real(key, v)?),
            "c_prime" => self.c_prime = Some(real(key, v)?),
            other => return Err(Error::Domain(format!("unknown key `{other}`"))),
        }
        if let (Some(a), Some(b)) = (self.n_min, self.n_max) {
            if a > b || a == 0 {
                return Err(Error::Domain("need 1 ≤ n_min ≤ n_max".into()));
            }
        }
        Ok(())
    }

    /// Later values win.
    pub fn merge(mut self, over: RunSpec) -> RunSpec {
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f; } )* };
        }
        take!(
            subcommand, ifs, psi, source, samples, seed, t, eps, n_min, n_max, alpha, depth, norm, test, c_f,
            kappa_star, delta, c_prime
        );
        self
    }

    pub fn emit(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        let mut out = String::new();
        let mut line = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                out += &format!("{k} = {v}\n");
            }
        };
        line("subcommand", self.subcommand.clone());
        line("ifs", self.ifs.clone());
        line("psi", self.psi.clone());
        line("source", self.source.map(|s| render_source(s).to_string()));
        line("samples", self.samples.map(|x| x.to_string()));
        line("seed", self.seed.map(|x| x.to_string()));
        line("t", self.t.as_deref().map(join));
        line("eps", self.eps.as_deref().map(join));
        line("n_min", self.n_min.map(|x| x.to_string()));
        line("n_max", self.n_max.map(|x| x.to_string()));
        line("alpha", self.alpha.as_ref().map(|a| a.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")));
        line("depth", self.depth.map(|x| x.to_string()));
        line("norm", self.norm.clone());
        line("test", self.test.as_ref().map(render_test));
        line("c_f", self.c_f.map(|x| format!("{x:?}")));
        line("kappa_star", self.kappa_star.map(|x| format!("{x:?}")));
        line("delta", self.delta.map(|x| format!("{x:?}")));
        line("c_prime", self.c_prime.map(|x| format!("{x:?}")));
        out
    }

    pub fn ifs(&self) -> Result<RationalIfs> {
        let v = self.ifs.as_deref().ok_or_else(|| Error::Domain("missing `ifs`".into()))?;
        load_ifs(v)
    }

    pub fn psi(&self, d: usize) -> Result<ApproxFunction> {
        let v = self.psi.as_deref().ok_or_else(|| Error::Domain("missing `psi`".into()))?;
        load_psi(v, d)
    }

    pub fn n_range(&self) -> Result<(u32, u32)> {
        match (self.n_min, self.n_max) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::Domain("missing `n_min` or `n_max`".into())),
        }
    }

    pub fn norm_spec(&self, d: usize) -> NormSpec {
        match self.norm.as_deref() {
            Some("euclidean") => NormSpec::euclidean(d),
            _ => NormSpec::max(d),
        }
    }

    pub fn experiment(&self, d: usize, default_samples: usize) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::new(d, self.samples.unwrap_or(default_samples), self.seed.unwrap_or(0));
        cfg.eps = self.eps.clone().unwrap_or_default();
        cfg.alpha = Word(self.alpha.clone().unwrap_or_default());
        cfg.norm = self.norm_spec(d);
        if let Some(depth) = self.depth {
            cfg.depth = depth;
        }
        let def = BracketConstants::default();
        cfg.constants = BracketConstants {
            c_f: self.c_f.unwrap_or(def.c_f),
            kappa_star: self.kappa_star.unwrap_or(def.kappa_star),
            delta: self.delta.unwrap_or(def.delta),
            c_prime: self.c_prime.unwrap_or(def.c_prime),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn load_ifs(v: &str) -> Result<RationalIfs> {
    if let Some(rest) = v.strip_prefix("missing:") {
        return parse_missing_digit(rest);
    }
    let text = std::fs::read_to_string(v).map_err(|e| Error::Domain(format!("cannot read IFS file `{v}`: {e}")))?;
    parse_ifs(&text)
}

pub fn load_psi(v: &str, d: usize) -> Result<ApproxFunction> {
    match v.strip_prefix("table:") {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Domain(format!("cannot read `{p}`: {e}")))?;
            ApproxFunction::parse_table(d, &text)
        }
        None => ApproxFunction::parse(d, v),
    }
}

/// Parses configuration text; errors carry the line number.
pub fn parse_config_text(text: &str) -> Result<RunSpec> {
    let mut spec = RunSpec::default();
    let mut seen = std::collections::HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: i + 1, msg };
        let (k, v) = line.split_once('=').ok_or_else(|| err(format!("expected key = value, got `{line}`")))?;
        let k = k.trim();
        if !seen.insert(k.to_string()) {
            return Err(err(format!("duplicate key `{k}`")));
        }
        spec.set(k, v).map_err(|e| err(e.to_string()))?;
    }
    Ok(spec)
}

pub fn parse_config(path: &Path) -> Result<RunSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read config `{}`: {e}", path.display())))?;
    parse_config_text(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use dioph::rational::rat;

    const MINIMAL: &str = "subcommand = khintchine\nifs = missing:base=5,digits=0,1,2,3\npsi = recip\nn_min = 15\nn_max = 25\nsamples = 10000\nseed = 7\n";

    #[test]
    fn minimal_config_is_valid() {
        let s = parse_config_text(MINIMAL).unwrap();
        assert_eq!(s.n_range().unwrap(), (15, 25));
        assert_eq!(s.samples, Some(10000));
        assert_eq!(s.ifs().unwrap().len(), 4);
    }

    #[test]
    fn negative_samples_name_the_key() {
        let e = parse_config_text("samples = -5\n").unwrap_err();
        assert!(e.to_string().contains("samples"), "{e}");
        assert!(matches!(e, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn exact_literals() {
        let s = parse_config_text("test = cusp:2/3\n").unwrap();
        assert_eq!(s.test, Some(TestFn::Cusp(rat(2, 3))));
        assert!(parse_config_text("test = cusp:0.666\n").is_err());
        assert!(parse_config_text("colour = red\n").is_err());
    }

    #[test]
    fn round_trip() {
        let mut s = parse_config_text(MINIMAL).unwrap();
        s.set("t", "5,7.25,0.1").unwrap();
        s.set("eps", "0.2,0.3").unwrap();
        s.set("alpha", "2,0").unwrap();
        s.set("test", "cusp:1/3").unwrap();
        s.set("c_prime", "0.30000000000000004").unwrap();
        s.set("source", "lebesgue").unwrap();
        assert_eq!(parse_config_text(&s.emit()).unwrap(), s);
    }
}
