//! CSV artifacts.
//!
//! Files are assembled in memory and written in one go; if the write fails
//! the partial file is removed. Lines starting with `#` carry metadata and
//! are skipped by the readers.

use std::fs;
use std::path::Path;

use opuc_core::sumrule::EquivalenceRow;
use opuc_core::{Complex64, VerblunskySequence};

use crate::error::{CliError, Result};

/// Formats a float so it parses back to the same value, switching to
/// exponent notation outside `[1e−4, 1e15)`.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// An in-memory CSV document with `#` metadata lines.
#[derive(Debug, Default)]
pub struct CsvDocument {
    bytes: Vec<u8>,
}

impl CsvDocument {
    /// Starts a document whose first line names the producing version.
    pub fn new(kind: &str) -> Self {
        let mut doc = Self::default();
        doc.comment(&format!("opuc {} {kind}", env!("CARGO_PKG_VERSION")));
        doc
    }

    /// Appends `# text`, or `text` if it already starts with `#`.
    pub fn comment(&mut self, text: &str) {
        if !text.starts_with('#') {
            self.bytes.extend_from_slice(b"# ");
        }
        self.bytes.extend_from_slice(text.as_bytes());
        self.bytes.push(b'\n');
    }

    /// Appends CSV records, the first of which is the header.
    pub fn records<I, R>(&mut self, rows: I) -> Result<()>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator,
        R::Item: AsRef<[u8]>,
    {
        let mut writer = csv::Writer::from_writer(&mut self.bytes);
        for row in rows {
            writer.write_record(row).map_err(|e| CliError::Format {
                path: "<memory>".into(),
                reason: e.to_string(),
            })?;
        }
        writer.flush().map_err(|e| CliError::io("<memory>", e))?;
        Ok(())
    }

    /// The document text.
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Writes the document to `path`, removing the file if the write fails.
    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, &self.bytes).map_err(|e| {
            let _ = fs::remove_file(path);
            CliError::io(path, e)
        })
    }
}

fn read_records(path: &Path, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let format = |reason: String| CliError::Format {
        path: path.into(),
        reason,
    };
    let text = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_slice());
    let found = reader.headers().map_err(|e| format(e.to_string()))?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(format(format!("expected header `{}`, found `{}`", header.join(","), found.iter().collect::<Vec<_>>().join(","))));
    }
    reader
        .records()
        .map(|r| r.map_err(|e| format(e.to_string())))
        .collect()
}

fn parse<T: std::str::FromStr>(path: &Path, field: &str, line: usize) -> Result<T> {
    field.trim().parse().map_err(|_| CliError::Format {
        path: path.into(),
        reason: format!("record {line}: cannot parse `{field}`"),
    })
}

/// Writes `n,re,im`, one row per coefficient.
pub fn write_sequence(path: &Path, seq: &VerblunskySequence) -> Result<()> {
    let mut doc = CsvDocument::new("sequence");
    let header = vec!["n".to_string(), "re".to_string(), "im".to_string()];
    let rows = seq
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, a)| vec![n.to_string(), fmt_f64(a.re), fmt_f64(a.im)]);
    doc.records(std::iter::once(header).chain(rows))?;
    doc.write(path)
}

/// Reads an `n,re,im` file; rows must be numbered `0, 1, 2, …`.
pub fn read_sequence(path: &Path) -> Result<VerblunskySequence> {
    let records = read_records(path, &["n", "re", "im"])?;
    let mut coeffs = Vec::with_capacity(records.len());
    for (line, record) in records.iter().enumerate() {
        let n: usize = parse(path, &record[0], line)?;
        if n != line {
            return Err(CliError::Format {
                path: path.into(),
                reason: format!("record {line}: expected n = {line}, found {n}"),
            });
        }
        coeffs.push(Complex64::new(parse(path, &record[1], line)?, parse(path, &record[2], line)?));
    }
    Ok(VerblunskySequence::new(coeffs)?)
}

/// Writes `theta,w` for the Bernstein–Szegő density of `seq` on the uniform
/// grid `θ_j = 2πj/points`.
pub fn write_density_dump(path: &Path, seq: &VerblunskySequence, points: usize) -> Result<()> {
    if points == 0 {
        return Err(CliError::config("grid-points", "must be >= 1"));
    }
    let mut doc = CsvDocument::new("density");
    let header = vec!["theta".to_string(), "w".to_string()];
    let rows = (0..points).map(|j| {
        let theta = std::f64::consts::TAU * j as f64 / points as f64;
        vec![fmt_f64(theta), fmt_f64(opuc_core::szego::bernstein_szego_density(seq, theta))]
    });
    doc.records(std::iter::once(header).chain(rows))?;
    doc.write(path)
}

/// One `eta,log_w,fluctuation` row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDensityRow {
    /// Spectral angle.
    pub eta: f64,
    /// `log w(η)`.
    pub log_w: f64,
    /// Tail fluctuation of `log r_n`.
    pub fluctuation: f64,
}

/// Appends `eta,log_w,fluctuation` records.
pub fn log_density_records(doc: &mut CsvDocument, rows: &[LogDensityRow]) -> Result<()> {
    let header = vec!["eta".to_string(), "log_w".to_string(), "fluctuation".to_string()];
    let body = rows
        .iter()
        .map(|r| vec![fmt_f64(r.eta), fmt_f64(r.log_w), fmt_f64(r.fluctuation)]);
    doc.records(std::iter::once(header).chain(body))
}

/// Reads an `eta,log_w,fluctuation` file.
pub fn read_log_density(path: &Path) -> Result<Vec<LogDensityRow>> {
    read_records(path, &["eta", "log_w", "fluctuation"])?
        .iter()
        .enumerate()
        .map(|(line, r)| {
            Ok(LogDensityRow {
                eta: parse(path, &r[0], line)?,
                log_w: parse(path, &r[1], line)?,
                fluctuation: parse(path, &r[2], line)?,
            })
        })
        .collect()
}

/// Appends `m,beta,N,Z,lp_partial_norm,classification` records.
pub fn report_records(doc: &mut CsvDocument, rows: &[EquivalenceRow]) -> Result<()> {
    let header: Vec<String> = ["m", "beta", "N", "Z", "lp_partial_norm", "classification"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let body = rows.iter().map(|r| {
        vec![
            r.m.to_string(),
            fmt_f64(r.beta),
            r.n.to_string(),
            fmt_f64(r.z.value),
            fmt_f64(r.lp_partial_norm),
            r.classification.to_string(),
        ]
    });
    doc.records(std::iter::once(header).chain(body))
}

/// A parsed report row.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    /// Order.
    pub m: u32,
    /// Decay exponent.
    pub beta: f64,
    /// Truncation length.
    pub n: usize,
    /// `Z_m`.
    pub z: f64,
    /// `ℓ^{2m+2}` partial norm.
    pub lp_partial_norm: f64,
    /// `BOUNDED`, `DIVERGING` or `INCONCLUSIVE`.
    pub classification: String,
}

/// Reads a scan report.
pub fn read_report(path: &Path) -> Result<Vec<ReportRow>> {
    read_records(path, &["m", "beta", "N", "Z", "lp_partial_norm", "classification"])?
        .iter()
        .enumerate()
        .map(|(line, r)| {
            Ok(ReportRow {
                m: parse(path, &r[0], line)?,
                beta: parse(path, &r[1], line)?,
                n: parse(path, &r[2], line)?,
                z: parse(path, &r[3], line)?,
                lp_partial_norm: parse(path, &r[4], line)?,
                classification: r[5].to_string(),
            })
        })
        .collect()
}

/// One `suite,trial,key,index,re,im` replay row.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplayRecord {
    /// Suite name.
    pub suite: String,
    /// Trial number within the suite.
    pub trial: usize,
    /// Which input the value belongs to.
    pub key: String,
    /// Position within that input.
    pub index: usize,
    /// Real part (or the scalar value).
    pub re: f64,
    /// Imaginary part.
    pub im: f64,
}

/// Writes replay records.
pub fn write_replay(path: &Path, records: &[ReplayRecord]) -> Result<()> {
    let mut doc = CsvDocument::new("replay");
    let header: Vec<String> = ["suite", "trial", "key", "index", "re", "im"].iter().map(|s| s.to_string()).collect();
    let body = records.iter().map(|r| {
        vec![
            r.suite.clone(),
            r.trial.to_string(),
            r.key.clone(),
            r.index.to_string(),
            format!("{:e}", r.re),
            format!("{:e}", r.im),
        ]
    });
    doc.records(std::iter::once(header).chain(body))?;
    doc.write(path)
}

/// Reads replay records.
pub fn read_replay(path: &Path) -> Result<Vec<ReplayRecord>> {
    read_records(path, &["suite", "trial", "key", "index", "re", "im"])?
        .iter()
        .enumerate()
        .map(|(line, r)| {
            Ok(ReplayRecord {
                suite: r[0].to_string(),
                trial: parse(path, &r[1], line)?,
                key: r[2].to_string(),
                index: parse(path, &r[3], line)?,
                re: parse(path, &r[4], line)?,
                im: parse(path, &r[5], line)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.0, -0.0, 1.0, 0.1, 1e-5, -3.25e-300, 123456.789, 1e20, f64::MIN_POSITIVE] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            assert!(s.len() < 30, "{s}");
        }
    }

    #[test]
    fn sequence_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("seq.csv");
        let seq = VerblunskySequence::new(vec![Complex64::new(0.5, -0.25), Complex64::new(1e-7, 0.3)]).unwrap();
        write_sequence(&path, &seq).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# opuc "));
        assert!(text.contains("n,re,im\n0,0.5,-0.25\n"));
        assert_eq!(read_sequence(&path).unwrap(), seq);
    }

    #[test]
    fn malformed_files_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        fs::write(&path, "n,re\n0,0.5\n").unwrap();
        assert!(matches!(read_sequence(&path), Err(CliError::Format { .. })));
        fs::write(&path, "n,re,im\n1,0.5,0\n").unwrap();
        assert!(matches!(read_sequence(&path), Err(CliError::Format { .. })));
        fs::write(&path, "n,re,im\n0,1.5,0\n").unwrap();
        assert!(matches!(read_sequence(&path), Err(CliError::Numeric(_))));
        assert!(matches!(read_sequence(&dir.path().join("missing.csv")), Err(CliError::Io { .. })));
    }

    #[test]
    fn density_dump_has_uniform_grid() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.csv");
        write_density_dump(&path, &VerblunskySequence::from_real(&[0.5]).unwrap(), 4).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(lines[0], "theta,w");
        assert_eq!(lines.len(), 5);
        let w0: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
        assert!((w0 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn failed_write_leaves_nothing_behind() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("no-such-dir").join("out.csv");
        let doc = CsvDocument::new("x");
        assert!(matches!(doc.write(&path), Err(CliError::Io { .. })));
        assert!(!path.exists());
    }

    #[test]
    fn replay_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("replay.csv");
        let records = vec![
            ReplayRecord {
                suite: "power_mean".into(),
                trial: 7,
                key: "z".into(),
                index: 0,
                re: 0.1 + 0.2,
                im: -1e-300,
            },
            ReplayRecord {
                suite: "power_mean".into(),
                trial: 7,
                key: "z".into(),
                index: 1,
                re: 0.999999,
                im: 0.0,
            },
        ];
        write_replay(&path, &records).unwrap();
        assert_eq!(read_replay(&path).unwrap(), records);
    }
}
