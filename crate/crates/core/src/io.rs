//! Text formats: matrix dumps, sweep CSV, eigenvector sidecars, and the
//! kernel and overlay reports.

use std::io::{BufRead, Write};

use crate::builder::MatrixKind;
use crate::error::{Error, Result};
use crate::experiments::{FitSample, SpectrumKind, SweepRecord, EIG_SLOTS};
use crate::linalg::SpectrumResult;
use crate::matrix::DenseMatrix;

pub const VERSION_LINE: &str = concat!("# version: mertens-spectra ", env!("CARGO_PKG_VERSION"));

pub const SWEEP_HEADER: &str = "k,n,kind,eig1,eig2,eig3,eig4,eig5,eig6,eig7,eig8,spectral_norm,frobenius_norm,mertens_n,w_norm_sq,bound_rhs,norm_over_sqrt_n,norm_over_log_n,status";

pub const KERNEL_HEADER: &str = "epsilon,delta,hs_norm,bound,two_grid_error";

pub const FIT_HEADER: &str = "n,overlay,reference_term";

const NA: &str = "NA";

/// Shortest decimal that parses back to exactly `x`.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| NA.to_string(), fmt_f64)
}

/// `# config:` and `# version:` lines that open every CSV output.
pub fn provenance(config: &str) -> String {
    format!("# config: {config}\n{VERSION_LINE}\n")
}

pub fn write_matrix_dump<W: Write>(out: &mut W, kind: MatrixKind, n: u64, m: &DenseMatrix<f64>) -> Result<()> {
    writeln!(out, "# mertens-matrix v1 kind={kind} n={n} dim={}", m.dim())?;
    for row in m.rows().take(m.dim()) {
        let cells: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDump {
    pub kind: MatrixKind,
    pub n: u64,
    pub matrix: DenseMatrix<f64>,
}

fn header_field<'a>(fields: &[&'a str], key: &str) -> Result<&'a str> {
    fields
        .iter()
        .find_map(|f| f.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .ok_or_else(|| Error::Parse(format!("header is missing {key}=")))
}

pub fn read_matrix_dump<R: BufRead>(input: R) -> Result<MatrixDump> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix dump".into()))??;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 3 || fields[0] != "#" || fields[1] != "mertens-matrix" || fields[2] != "v1" {
        return Err(Error::Parse(format!("unrecognized header {header:?}")));
    }
    let kind: MatrixKind = header_field(&fields, "kind")?.parse()?;
    let n: u64 = header_field(&fields, "n")?.parse().map_err(|e| Error::Parse(format!("n: {e}")))?;
    let dim: usize = header_field(&fields, "dim")?.parse().map_err(|e| Error::Parse(format!("dim: {e}")))?;
    let mut data = Vec::with_capacity(dim * dim);
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>().map_err(|e| Error::Parse(format!("row {}: {e}", i + 1))))
            .collect::<Result<_>>()?;
        if row.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
        }
        data.extend(row);
    }
    Ok(MatrixDump { kind, n, matrix: DenseMatrix::from_row_major(dim, data)? })
}

pub fn sweep_row(r: &SweepRecord) -> String {
    let mut cells = vec![r.k.to_string(), r.n.to_string(), r.kind.to_string()];
    match &r.values {
        Some(v) => {
            cells.extend((0..EIG_SLOTS).map(|i| fmt_opt(v.eig.get(i).copied())));
            cells.push(fmt_f64(v.spectral_norm));
            cells.push(fmt_f64(v.frobenius_norm));
            cells.push(v.mertens_n.to_string());
            cells.push(fmt_f64(v.w_norm_sq));
            cells.push(fmt_opt(v.bound_rhs));
            cells.push(fmt_f64(v.norm_over_sqrt_n));
            cells.push(fmt_f64(v.norm_over_log_n));
        }
        None => cells.extend(std::iter::repeat_n(NA.to_string(), EIG_SLOTS + 7)),
    }
    cells.push(r.status());
    cells.join(",")
}

pub fn write_sweep_csv<W: Write>(out: &mut W, config: &str, records: &[SweepRecord]) -> Result<()> {
    out.write_all(provenance(config).as_bytes())?;
    writeln!(out, "{SWEEP_HEADER}")?;
    for r in records {
        writeln!(out, "{}", sweep_row(r))?;
    }
    Ok(())
}

pub fn write_eigvec_sidecar<W: Write>(
    out: &mut W,
    n: u64,
    kind: SpectrumKind,
    spectrum: &SpectrumResult<f64>,
) -> Result<()> {
    writeln!(
        out,
        "# mertens-eigvecs v1 n={n} kind={kind} dim={} count={}",
        spectrum.dim,
        spectrum.eigenvectors.len()
    )?;
    for v in &spectrum.eigenvectors {
        let cells: Vec<String> = v.iter().map(|&x| fmt_f64(x)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

/// One row of the kernel report. `delta = None` marks a full-domain norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelRow {
    pub epsilon: f64,
    pub delta: Option<f64>,
    pub hs_norm: f64,
    pub bound: Option<f64>,
    pub two_grid_error: f64,
}

pub fn write_kernel_csv<W: Write>(out: &mut W, config: &str, rows: &[KernelRow]) -> Result<()> {
    out.write_all(provenance(config).as_bytes())?;
    writeln!(out, "{KERNEL_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(r.epsilon),
            fmt_opt(r.delta),
            fmt_f64(r.hs_norm),
            fmt_opt(r.bound),
            fmt_f64(r.two_grid_error)
        )?;
    }
    Ok(())
}

pub fn write_fit_csv<W: Write>(out: &mut W, config: &str, samples: &[FitSample]) -> Result<()> {
    out.write_all(provenance(config).as_bytes())?;
    writeln!(out, "{FIT_HEADER}")?;
    for s in samples {
        writeln!(out, "{},{},{}", fmt_f64(s.n), fmt_f64(s.overlay), fmt_f64(s.reference))?;
    }
    Ok(())
}
