//! Plain-text IFS descriptions.
//!
//! Either one shorthand line `missing_digit: base=<p> digits=<list>`, or
//! `key = value` lines with keys `dim`, `alphabet`, and per-letter `rho.<i>`,
//! `shift.<i>`, optional `rot.<i>` (row-major) and optional `lambda.<i>`.
//! All numbers are exact rationals `num/den`; `#` starts a comment.

use std::collections::BTreeMap;

use num_traits::One;

use crate::error::{Error, Result};
use crate::ifs::{RationalIfs, SimilarityMap};
use crate::matrix::RationalMatrix;
use crate::rational::{parse_exact, Rational};

fn list<T>(s: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(f).collect()
}

fn parse_u64(s: &str) -> Result<u64> {
    s.trim().parse().map_err(|_| Error::Domain(format!("`{s}` is not a nonnegative integer")))
}

/// Parses `base=<p> digits=<list>` with either spaces or commas between fields.
pub fn parse_missing_digit(spec: &str) -> Result<RationalIfs> {
    let bad = || Error::Domain(format!("`{spec}`: expected base=<p> digits=<list>"));
    let rest = spec.trim();
    let b = rest.find("base=").ok_or_else(bad)?;
    let g = rest.find("digits=").ok_or_else(bad)?;
    let (base_part, digit_part) =
        if b < g { (&rest[b + 5..g], &rest[g + 7..]) } else { (&rest[b + 5..], &rest[g + 7..b]) };
    let base = parse_u64(base_part.trim_matches(|c: char| c == ',' || c.is_whitespace()))?;
    let digits = list(digit_part, parse_u64)?;
    RationalIfs::missing_digit(base, &digits)
}

pub fn parse_ifs(text: &str) -> Result<RationalIfs> {
    let mut kv: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("missing_digit:") {
            return parse_missing_digit(rest).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() });
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: i + 1, msg: format!("expected key = value, got `{line}`") })?;
        if kv.insert(k.trim().to_string(), (i + 1, v.trim().to_string())).is_some() {
            return Err(Error::Parse { line: i + 1, msg: format!("duplicate key `{}`", k.trim()) });
        }
    }
    let get = |k: &str| kv.get(k).ok_or_else(|| Error::Parse { line: 0, msg: format!("missing key `{k}`") });
    let at = |k: &str, e: Error| Error::Parse { line: kv.get(k).map_or(0, |x| x.0), msg: e.to_string() };
    let dim = parse_u64(&get("dim")?.1).map_err(|e| at("dim", e))? as usize;
    let labels: Vec<usize> =
        list(&get("alphabet")?.1, |s| parse_u64(s).map(|x| x as usize)).map_err(|e| at("alphabet", e))?;
    let mut maps = Vec::new();
    let mut lambda = Vec::new();
    let explicit_weights = labels.iter().any(|l| kv.contains_key(&format!("lambda.{l}")));
    for l in &labels {
        let key = |name: &str| format!("{name}.{l}");
        let rho = parse_exact(&get(&key("rho"))?.1).map_err(|e| at(&key("rho"), e))?;
        let shift = list(&get(&key("shift"))?.1, parse_exact).map_err(|e| at(&key("shift"), e))?;
        let rot = match kv.get(&key("rot")) {
            None => RationalMatrix::identity(dim),
            Some((_, v)) => {
                let e = list(v, parse_exact).map_err(|e| at(&key("rot"), e))?;
                if e.len() != dim * dim {
                    return Err(at(&key("rot"), Error::Domain(format!("expected {} entries", dim * dim))));
                }
                RationalMatrix::from_rows(e.chunks(dim).map(<[Rational]>::to_vec).collect())
            }
        };
        if shift.len() != dim {
            return Err(at(&key("shift"), Error::Domain(format!("expected {dim} entries"))));
        }
        maps.push(SimilarityMap::new(rho, rot, shift).map_err(|e| at(&key("rho"), e))?);
        if explicit_weights {
            lambda.push(parse_exact(&get(&key("lambda"))?.1).map_err(|e| at(&key("lambda"), e))?);
        } else {
            lambda.push(Rational::one() / Rational::from_integer((labels.len() as i64).into()));
        }
    }
    for k in kv.keys() {
        let base = k.split('.').next().unwrap_or("");
        let known = matches!(k.as_str(), "dim" | "alphabet")
            || (matches!(base, "rho" | "shift" | "rot" | "lambda")
                && k.split_once('.').is_some_and(|(_, l)| labels.iter().any(|x| x.to_string() == l)));
        if !known {
            return Err(Error::Parse { line: kv[k].0, msg: format!("unknown key `{k}`") });
        }
    }
    RationalIfs::new(labels, maps, lambda)
}

/// Inverse of [`parse_ifs`] in the explicit key-value form.
pub fn render_ifs(ifs: &RationalIfs) -> String {
    let d = ifs.dim();
    let join = |v: &[Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
    let mut out = format!(
        "dim = {d}\nalphabet = {}\n",
        ifs.labels().iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    );
    for ((l, m), w) in ifs.labels().iter().zip(ifs.maps()).zip(ifs.lambda()) {
        out += &format!("rho.{l} = {}\nshift.{l} = {}\n", m.rho(), join(m.shift()));
        if !m.rot().is_identity() {
            out += &format!("rot.{l} = {}\n", join(m.rot().entries()));
        }
        out += &format!("lambda.{l} = {w}\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::mixed_ratio_example;

    #[test]
    fn shorthand_forms() {
        let a = parse_ifs("missing_digit: base=5 digits=0,1,2,3\n").unwrap();
        assert_eq!(a, RationalIfs::missing_digit(5, &[0, 1, 2, 3]).unwrap());
        let b = parse_missing_digit("base=5,digits=0,1,2,3").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn round_trip() {
        let ifs = mixed_ratio_example();
        let again = parse_ifs(&render_ifs(&ifs)).unwrap();
        assert_eq!(again.maps(), ifs.maps());
        assert_eq!(again.lambda(), ifs.lambda());
        let rot = "dim = 2\nalphabet = 0,1\nrho.0 = 1/5\nshift.0 = 0,0\nrot.0 = 3/5,-4/5,4/5,3/5\nrho.1 = 1/5\nshift.1 = 1/2,1/2\n";
        let r = parse_ifs(rot).unwrap();
        assert_eq!(parse_ifs(&render_ifs(&r)).unwrap().maps(), r.maps());
    }

    #[test]
    fn errors_carry_lines() {
        let e =
            parse_ifs("dim = 1\nalphabet = 0,1\nrho.0 = 0.5\nshift.0 = 0\nrho.1 = 1/2\nshift.1 = 1/2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e:?}");
        let e = parse_ifs("dim = 1\nalphabet = 0\nrho.0 = 1/2\nshift.0 = 0\ncolour = red\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 5, .. }), "{e:?}");
    }
}
