use std::io::{self, Write};
use std::path::Path;

use dissipspec_core::spectrum::SpectrumReport;
use tempfile::NamedTempFile;

pub const CSV_HEADER: [&str; 8] =
    ["gamma", "n", "re_w", "im_w", "re_lambda", "im_lambda", "multiplicity", "residual"];

/// 17 significant digits, locale independent.
pub fn full(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn spectrum_csv(report: &SpectrumReport) -> io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for e in &report.eigenvalues {
        w.write_record([
            full(report.gamma),
            e.mode_n.to_string(),
            full(e.w_root.re),
            full(e.w_root.im),
            full(e.lambda.re),
            full(e.lambda.im),
            e.multiplicity.to_string(),
            full(e.residual),
        ])?;
    }
    w.into_inner().map_err(|e| e.into_error())
}

pub fn to_json<T: serde::Serialize>(value: &T) -> io::Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Sends bytes to `path` when given, otherwise to `stdout`.
pub fn emit(path: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> io::Result<()> {
    match path {
        Some(p) => write_atomic(p, bytes),
        None => stdout.write_all(bytes),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dissipspec_core::spectrum::full_spectrum;

    #[test]
    fn full_precision_round_trips() {
        for x in [std::f64::consts::SQRT_2, -1.0 / 3.0, 1e-300, 0.1] {
            assert_eq!(full(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(full(-1.0), "-1.0000000000000000e0");
    }

    #[test]
    fn csv_has_header_and_one_row_per_eigenvalue() {
        let report = full_spectrum(2.0, 2).unwrap();
        let text = String::from_utf8(spectrum_csv(&report).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER.join(","));
        assert_eq!(lines.len(), 1 + report.eigenvalues.len());
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.txt");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"second");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
