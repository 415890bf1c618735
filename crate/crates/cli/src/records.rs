//! Sweep records and their CSV encoding.
//!
//! A sweep CSV starts with one comment line carrying the run metadata, e.g.
//! `# family=werner param=phi dim=3 functional=chsh`, followed by the fixed
//! header and one row per parameter value. Reals are written with 17
//! significant digits.

use std::fs;
use std::io::Write;
use std::path::Path;

use tomobell_core::bell::Functional;
use tomobell_core::states::StateFamily;

use crate::error::{CliError, Result};

pub const HEADER: [&str; 15] = [
    "param",
    "bell_max",
    "classical_bound",
    "purity",
    "theta_a",
    "phi_a",
    "theta_b",
    "phi_b",
    "theta_c",
    "phi_c",
    "theta_d",
    "phi_d",
    "partition_1",
    "partition_2",
    "separable_flag",
];

/// What a sweep file describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepMeta {
    pub family: StateFamily,
    pub dim: usize,
    pub functional: Functional,
}

impl SweepMeta {
    pub fn comment_line(&self) -> String {
        format!(
            "# family={} param={} dim={} functional={}",
            self.family,
            self.family.parameter_symbol(),
            self.dim,
            self.functional
        )
    }

    fn parse_comment(line: &str) -> Option<Self> {
        let body = line.strip_prefix('#')?;
        let mut family = None;
        let mut dim = None;
        let mut functional = None;
        for field in body.split_whitespace() {
            match field.split_once('=')? {
                ("family", v) => family = v.parse().ok(),
                ("dim", v) => dim = v.parse().ok(),
                ("functional", v) => functional = v.parse().ok(),
                _ => {}
            }
        }
        Some(Self {
            family: family?,
            dim: dim?,
            functional: functional?,
        })
    }
}

/// One evaluated sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub param: f64,
    pub bell_max: f64,
    pub classical_bound: f64,
    pub purity: f64,
    /// `theta, phi` of directions a, b, c, d.
    pub angles: [f64; 8],
    /// Portrait partitions, empty for `I3`.
    pub partition1: String,
    pub partition2: String,
    pub separable: bool,
}

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders metadata, header and records as CSV text.
pub fn to_csv_string(meta: &SweepMeta, records: &[SweepRecord]) -> String {
    let mut out = meta.comment_line().into_bytes();
    out.push(b'\n');
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(HEADER).expect("in-memory write");
        for r in records {
            let mut row = vec![
                real(r.param),
                real(r.bell_max),
                real(r.classical_bound),
                real(r.purity),
            ];
            row.extend(r.angles.iter().map(|&a| real(a)));
            row.push(r.partition1.clone());
            row.push(r.partition2.clone());
            row.push(r.separable.to_string());
            w.write_record(&row).expect("in-memory write");
        }
        w.flush().expect("in-memory write");
    }
    String::from_utf8(out).expect("CSV output is UTF-8")
}

pub fn write_csv(path: &Path, meta: &SweepMeta, records: &[SweepRecord]) -> Result<()> {
    let mut file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    file.write_all(to_csv_string(meta, records).as_bytes())
        .map_err(|e| CliError::io(path, e))
}

/// Parses CSV text produced by [`to_csv_string`]. Metadata is `None` when
/// the comment line is missing or incomplete.
pub fn parse_csv(path: &Path, text: &str) -> Result<(Option<SweepMeta>, Vec<SweepRecord>)> {
    let meta = text.lines().next().and_then(SweepMeta::parse_comment);
    let csv_error = |line: u64, message: String| CliError::Csv {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| csv_error(e.position().map_or(1, |p| p.line()), e.to_string()))?
        .clone();
    if header.iter().ne(HEADER.iter().copied()) {
        let line = text.lines().position(|l| !l.starts_with('#')).unwrap_or(0) as u64 + 1;
        return Err(csv_error(line, format!("unexpected header '{}'", header.iter().collect::<Vec<_>>().join(","))));
    }

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_error(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = row.position().map_or(0, |p| p.line());
        let num = |i: usize| -> Result<f64> {
            row[i]
                .trim()
                .parse::<f64>()
                .map_err(|_| csv_error(line, format!("column '{}': invalid number '{}'", HEADER[i], &row[i])))
        };
        let mut angles = [0.0; 8];
        for (k, a) in angles.iter_mut().enumerate() {
            *a = num(4 + k)?;
        }
        let separable = match row[14].trim() {
            "true" => true,
            "false" => false,
            other => return Err(csv_error(line, format!("column 'separable_flag': invalid boolean '{other}'"))),
        };
        records.push(SweepRecord {
            param: num(0)?,
            bell_max: num(1)?,
            classical_bound: num(2)?,
            purity: num(3)?,
            angles,
            partition1: row[12].to_string(),
            partition2: row[13].to_string(),
            separable,
        });
    }
    Ok((meta, records))
}

pub fn read_csv(path: &Path) -> Result<(Option<SweepMeta>, Vec<SweepRecord>)> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_csv(path, &text)
}
