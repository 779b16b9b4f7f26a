//! CSV emission: a header row, data rows, and a trailing `#` metadata line.

use std::path::{Path, PathBuf};

use dioph::{Error, Result};

pub fn metadata_line(seed: u64) -> String {
    format!("# seed={seed} version={}\n", env!("CARGO_PKG_VERSION"))
}

pub fn write_csv(dir: &Path, name: &str, header: &[&str], rows: &[Vec<String>], seed: u64) -> Result<PathBuf> {
    let io = |e: std::io::Error| Error::Domain(format!("cannot write {name}: {e}"));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let cs = |e: csv::Error| Error::Domain(format!("cannot encode {name}: {e}"));
    w.write_record(header).map_err(cs)?;
    for r in rows {
        w.write_record(r).map_err(cs)?;
    }
    let mut bytes = w.into_inner().map_err(|e| Error::Domain(format!("cannot encode {name}: {e}")))?;
    bytes.extend_from_slice(metadata_line(seed).as_bytes());
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(io)?;
    Ok(path)
}

/// Shortest round-trip decimal.
pub fn real(x: f64) -> String {
    format!("{x:?}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_trailer() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_csv(dir.path(), "x.csv", &["a", "b"], &[vec!["1".into(), real(0.1)]], 9).unwrap();
        let text = std::fs::read_to_string(p).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "a,b");
        assert_eq!(lines[1], "1,0.1");
        assert!(lines[2].starts_with("# seed=9 version="));
    }
}
