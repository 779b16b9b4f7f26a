//! Event families for `bc-verify`.
//!
//! Built-ins `const:<num/den>` and `harmonic` are exact. Files hold
//! `mu = <expr in n>` and `pair = independent | <expr in m, n>`; expressions
//! are evaluated in double precision and converted to rationals exactly.

use std::path::Path;

use dioph::borelcantelli::{ClosureFamily, EventFamily, IndependentFamily};
use dioph::rational::{from_f64, int, parse_exact};
use dioph::{Error, Rational, Result};
use fasteval::{Evaler, ExpressionI, Parser, Slab};

struct Expr {
    source: String,
    slab: Slab,
    root: ExpressionI,
}

impl Expr {
    fn parse(text: &str) -> Result<Self> {
        let mut slab = Slab::new();
        let root = Parser::new()
            .parse(text, &mut slab.ps)
            .map_err(|e| Error::Domain(format!("bad expression `{text}`: {e:?}")))?;
        Ok(Self { source: text.to_string(), slab, root })
    }

    fn eval(&self, vars: &[(&str, f64)]) -> Result<f64> {
        let mut ns = |name: &str, args: Vec<f64>| -> Option<f64> {
            if !args.is_empty() {
                return None;
            }
            vars.iter().find(|(k, _)| *k == name).map(|(_, v)| *v)
        };
        let v = self
            .slab
            .ps
            .get_expr(self.root)
            .eval(&self.slab, &mut ns)
            .map_err(|e| Error::Domain(format!("cannot evaluate `{}`: {e:?}", self.source)))?;
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain(format!("`{}` gives {v}, outside [0,1]", self.source)));
        }
        Ok(v)
    }
}

/// Parses a family description, validating it on `1..=n_max`.
pub fn load_family(spec: &str, n_max: u64) -> Result<Box<dyn EventFamily>> {
    if let Some(c) = spec.strip_prefix("const:") {
        return Ok(Box::new(IndependentFamily::constant(parse_exact(c)?)));
    }
    if spec == "harmonic" {
        return Ok(Box::new(IndependentFamily::harmonic()));
    }
    let text = std::fs::read_to_string(Path::new(spec))
        .map_err(|e| Error::Domain(format!("cannot read family file `{spec}`: {e}")))?;
    parse_family(&text, n_max)
}

pub fn parse_family(text: &str, n_max: u64) -> Result<Box<dyn EventFamily>> {
    let mut mu = None;
    let mut pair = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: i + 1, msg };
        let (k, v) = line.split_once('=').ok_or_else(|| err(format!("expected key = value, got `{line}`")))?;
        match k.trim() {
            "mu" => mu = Some(Expr::parse(v.trim()).map_err(|e| err(e.to_string()))?),
            "pair" if v.trim() == "independent" => pair = None,
            "pair" => pair = Some(Expr::parse(v.trim()).map_err(|e| err(e.to_string()))?),
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }
    let mu = mu.ok_or_else(|| Error::Parse { line: 0, msg: "missing key `mu`".into() })?;
    let table: Vec<Rational> = (1..=n_max).map(|n| from_f64(mu.eval(&[("n", n as f64)])?)).collect::<Result<_>>()?;
    let Some(pair) = pair else {
        return Ok(Box::new(IndependentFamily::table(table)));
    };
    for m in 1..=n_max {
        for n in m + 1..=n_max {
            pair.eval(&[("m", m as f64), ("n", n as f64)])?;
        }
    }
    let t2 = table.clone();
    Ok(Box::new(ClosureFamily::new(
        move |n| t2.get(n as usize - 1).cloned().unwrap_or_else(|| int(0)),
        move |m, n| {
            // validated on the whole range above
            from_f64(pair.eval(&[("m", m as f64), ("n", n as f64)]).unwrap_or(0.0)).unwrap_or_else(|_| int(0))
        },
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use dioph::rational::rat;

    #[test]
    fn file_families() {
        let f = parse_family("mu = 1/2\npair = independent\n", 10).unwrap();
        assert_eq!(f.measure(3), rat(1, 2));
        assert_eq!(f.pair(2, 5), rat(1, 4));
        let g = parse_family("# overlapping\nmu = 1/2\npair = 1/4 + 1/2^(n-m+2)\n", 10).unwrap();
        assert_eq!(g.pair(1, 2), rat(3, 8));
        assert!(parse_family("mu = 2\n", 5).is_err());
        assert!(matches!(parse_family("nu = 1\n", 5), Err(Error::Parse { line: 1, .. })));
    }
}
