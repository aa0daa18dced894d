//! CSV and JSON emission, the on-disk expansion cache, SVG plots and the
//! figure drivers.

pub mod figures;
pub mod svg;

use rug::Integer;
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::analysis::{MomentResult, ZeroReport};
use crate::basis::{EvalResult, SolverMeta};
use crate::error::{Error, Result};
use crate::modular::expansions::{g_expansion, IntSeries};
use crate::modular::HalfIntSeries;

/// 17 significant digits, the round-trip width of a double.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        // keep the sign of negative zero out of the files
        return "0".to_string();
    }
    format!("{v:.16e}")
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    Ok(BufWriter::new(fs::File::create(path)?))
}

/// Writes a header line and comma-joined rows; returns the number of data rows.
pub fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> Result<usize>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = create(path)?;
    writeln!(w, "{}", header.join(","))?;
    let mut count = 0;
    for row in rows {
        writeln!(w, "{}", row.join(","))?;
        count += 1;
    }
    w.flush()?;
    Ok(count)
}

/// `n,x,value,method,err`
pub fn write_table(path: &Path, rows: &[EvalResult]) -> Result<usize> {
    write_csv(
        path,
        &["n", "x", "value", "method", "err"],
        rows.iter().map(|r| {
            vec![r.n.to_string(), fmt_f64(r.x.re), fmt_f64(r.value.re), r.method.name().to_string(), fmt_f64(r.err)]
        }),
    )
}

/// `n,kind,a,b,count`
pub fn write_zero_counts(path: &Path, reports: &[ZeroReport]) -> Result<usize> {
    write_csv(
        path,
        &["n", "kind", "a", "b", "count"],
        reports.iter().map(|r| {
            let (a, b) = r.window.bounds();
            vec![r.n.to_string(), r.window.kind().to_string(), fmt_f64(a), fmt_f64(b), r.count.to_string()]
        }),
    )
}

/// `n,zero`
pub fn write_real_zeros(path: &Path, report: &ZeroReport) -> Result<usize> {
    write_csv(path, &["n", "zero"], report.real_zeros.iter().map(|z| vec![report.n.to_string(), fmt_f64(*z)]))
}

/// `n,a,b,value,err`
pub fn write_moments(path: &Path, rows: &[MomentResult]) -> Result<usize> {
    write_csv(
        path,
        &["n", "a", "b", "value", "err"],
        rows.iter().map(|m| vec![m.n.to_string(), fmt_f64(m.a), fmt_f64(m.b), fmt_f64(m.value), fmt_f64(m.err)]),
    )
}

/// `bin_lo,bin_hi,count`
pub fn write_histogram(path: &Path, bins: &[(f64, f64, usize)]) -> Result<usize> {
    write_csv(
        path,
        &["bin_lo", "bin_hi", "count"],
        bins.iter().map(|(lo, hi, c)| vec![fmt_f64(*lo), fmt_f64(*hi), c.to_string()]),
    )
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn write_solver_meta(path: &Path, meta: &SolverMeta) -> Result<()> {
    write_json(path, meta)
}

/// Cached expansion file. Coefficients are exact integers stored as decimal
/// strings: they outgrow the double range for moderate `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionFile {
    pub n: usize,
    pub order: i64,
    /// `[k, re, im]` for the coefficient of `q^{k/8}`.
    pub entries: Vec<(i64, String, String)>,
}

impl ExpansionFile {
    pub fn from_series(n: usize, s: &IntSeries) -> Self {
        let entries = s.terms().map(|(k, c)| (k, c.to_string(), "0".to_string())).collect();
        ExpansionFile { n, order: s.order(), entries }
    }

    pub fn to_series(&self) -> Result<IntSeries> {
        let terms = self
            .entries
            .iter()
            .map(|(k, re, im)| {
                if im != "0" {
                    return Err(Error::invalid(format!("coefficient of q^{k}/8 has imaginary part {im}")));
                }
                let c = re
                    .parse::<Integer>()
                    .map_err(|e| Error::invalid(format!("coefficient of q^{k}/8: {e}")))?;
                Ok((*k, c))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HalfIntSeries::from_terms(terms, self.order))
    }
}

pub fn expansion_path(dir: &Path, n: usize, order: i64) -> PathBuf {
    dir.join(format!("g_expansion_{n}_{order}.json"))
}

/// `g_n` below `q^{order/8}`, read from `dir` when present and written there otherwise.
pub fn cached_g_expansion(dir: &Path, n: usize, order: i64) -> Result<IntSeries> {
    let path = expansion_path(dir, n, order);
    if path.exists() {
        let file: ExpansionFile = read_json(&path)?;
        if file.n == n && file.order == order {
            return file.to_series();
        }
    }
    let s = g_expansion(n, order)?;
    write_json(&path, &ExpansionFile::from_series(n, &s))?;
    Ok(s)
}
