//! Drivers that regenerate the data behind the published plots: `f_500` against
//! its Φ approximation, the family `n = 100..150` on `[0, 2]`, the histogram
//! of `n^{1/4} f_n(0.63)`, and the full-line L² norms against `0.6 log n`.

use num_complex::Complex64;
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::svg::{histogram_plot, line_plot, Series};
use super::{fmt_f64, write_csv, write_histogram, write_json};
use crate::analysis::{default_cut, histogram_values, moments_to_cut};
use crate::basis::{eval_phi_approx, ApproxParams, CollocationSolver};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureId {
    F500,
    Bulk,
    Histogram,
    L2norms,
}

impl FigureId {
    pub fn name(self) -> &'static str {
        match self {
            FigureId::F500 => "f500",
            FigureId::Bulk => "bulk",
            FigureId::Histogram => "histogram",
            FigureId::L2norms => "l2norms",
        }
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f500" => Ok(FigureId::F500),
            "bulk" => Ok(FigureId::Bulk),
            "histogram" => Ok(FigureId::Histogram),
            "l2norms" => Ok(FigureId::L2norms),
            other => Err(Error::invalid(format!("unknown figure {other:?} (f500, bulk, histogram, l2norms)"))),
        }
    }
}

/// Grid and range parameters; unused fields are ignored by a given figure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FigureParams {
    pub n_min: usize,
    pub n_max: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub step: f64,
    pub x0: f64,
    pub bins: usize,
}

impl FigureParams {
    pub fn defaults(id: FigureId) -> Self {
        match id {
            FigureId::F500 => {
                FigureParams { n_min: 500, n_max: 500, x_min: 300.0, x_max: 700.0, step: 0.25, x0: 0.0, bins: 0 }
            }
            FigureId::Bulk => {
                FigureParams { n_min: 100, n_max: 150, x_min: 0.0, x_max: 2.0, step: 0.01, x0: 0.0, bins: 0 }
            }
            FigureId::Histogram => {
                FigureParams { n_min: 1, n_max: 2000, x_min: 0.0, x_max: 0.0, step: 0.0, x0: 0.63, bins: 60 }
            }
            FigureId::L2norms => {
                FigureParams { n_min: 1, n_max: 300, x_min: 0.0, x_max: 0.0, step: 0.0, x0: 0.0, bins: 0 }
            }
        }
    }

    /// `x_min + k·step` for `k = 0..=K`, `K = round((x_max − x_min)/step)`.
    pub fn grid(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0 && self.x_max >= self.x_min && self.x_min >= 0.0) {
            return Err(Error::invalid(format!(
                "bad grid [{}, {}] step {}",
                self.x_min, self.x_max, self.step
            )));
        }
        let k = ((self.x_max - self.x_min) / self.step).round() as usize;
        Ok((0..=k).map(|j| self.x_min + j as f64 * self.step).collect())
    }
}

#[derive(Clone, Debug)]
pub struct FigureSpec {
    pub id: FigureId,
    pub params: FigureParams,
    pub out_dir: PathBuf,
}

impl FigureSpec {
    pub fn new(id: FigureId, out_dir: impl Into<PathBuf>) -> Self {
        FigureSpec { id, params: FigureParams::defaults(id), out_dir: out_dir.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FigureOutput {
    pub csv: PathBuf,
    pub svg: PathBuf,
    pub extra: Vec<PathBuf>,
    /// Data rows written to `csv`; for histograms, the values in `extra[0]` before binning.
    pub rows: usize,
    /// Rows implied by the grid in the `FigureSpec`.
    pub declared_rows: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BulkSummary {
    pub n_min: usize,
    pub n_max: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub step: f64,
    pub max_abs: f64,
    pub argmax_n: usize,
    pub argmax_x: f64,
}

pub fn emit_figure(spec: &FigureSpec) -> Result<FigureOutput> {
    fs::create_dir_all(&spec.out_dir)
        .map_err(|e| Error::invalid(format!("cannot create {}: {e}", spec.out_dir.display())))?;
    match spec.id {
        FigureId::F500 => f500(spec),
        FigureId::Bulk => bulk(spec),
        FigureId::Histogram => histogram(spec),
        FigureId::L2norms => l2norms(spec),
    }
}

fn paths(spec: &FigureSpec) -> (PathBuf, PathBuf) {
    let name = spec.id.name();
    (spec.out_dir.join(format!("{name}.csv")), spec.out_dir.join(format!("{name}.svg")))
}

fn write_svg(path: &Path, svg: String) -> Result<()> {
    fs::write(path, svg)?;
    Ok(())
}

fn f500(spec: &FigureSpec) -> Result<FigureOutput> {
    let p = &spec.params;
    let n = p.n_min;
    let xs = p.grid()?;
    let solver = CollocationSolver::new(CollocationSolver::recommended_size(n, p.x_max))?;
    let cols = solver.eval_batch(&xs)?;
    let params = ApproxParams::default();
    let rows: Vec<(f64, f64, f64)> = xs
        .iter()
        .zip(&cols)
        .map(|(&x, col)| {
            let approx = eval_phi_approx(n, Complex64::new(x, 0.0), &params).map_or(f64::NAN, |r| r.value.re);
            (x, col[n].value.re, approx)
        })
        .collect();
    let (csv, svg) = paths(spec);
    let written = write_csv(
        &csv,
        &["x", "f", "phi_approx"],
        rows.iter().map(|(x, f, a)| vec![fmt_f64(*x), fmt_f64(*f), fmt_f64(*a)]),
    )?;
    let series = vec![
        Series { label: format!("f_{n}"), points: rows.iter().map(|r| (r.0, r.1)).collect() },
        Series { label: "Φ approximation".into(), points: rows.iter().map(|r| (r.0, r.2)).collect() },
    ];
    write_svg(&svg, line_plot(&format!("f_{n}(x)"), "x", "value", &series))?;
    Ok(FigureOutput { csv, svg, extra: vec![], rows: written, declared_rows: xs.len() })
}

fn bulk(spec: &FigureSpec) -> Result<FigureOutput> {
    let p = &spec.params;
    if p.n_max < p.n_min {
        return Err(Error::invalid(format!("empty index range {}..{}", p.n_min, p.n_max)));
    }
    let xs = p.grid()?;
    let solver = CollocationSolver::new(CollocationSolver::recommended_size(p.n_max, p.x_max))?;
    let cols = solver.eval_batch(&xs)?;
    let ns: Vec<usize> = (p.n_min..=p.n_max).collect();
    let mut header = vec!["x".to_string()];
    header.extend(ns.iter().map(|n| format!("f_{n}")));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut summary = BulkSummary {
        n_min: p.n_min,
        n_max: p.n_max,
        x_min: p.x_min,
        x_max: p.x_max,
        step: p.step,
        max_abs: 0.0,
        argmax_n: p.n_min,
        argmax_x: p.x_min,
    };
    for (&x, col) in xs.iter().zip(&cols) {
        for &n in &ns {
            let v = col[n].value.re.abs();
            if v > summary.max_abs {
                summary.max_abs = v;
                summary.argmax_n = n;
                summary.argmax_x = x;
            }
        }
    }
    let (csv, svg) = paths(spec);
    let written = write_csv(
        &csv,
        &header_refs,
        xs.iter().zip(&cols).map(|(&x, col)| {
            let mut row = vec![fmt_f64(x)];
            row.extend(ns.iter().map(|&n| fmt_f64(col[n].value.re)));
            row
        }),
    )?;
    let series: Vec<Series> = ns
        .iter()
        .map(|&n| Series {
            label: String::new(),
            points: xs.iter().zip(&cols).map(|(&x, col)| (x, col[n].value.re)).collect(),
        })
        .collect();
    write_svg(&svg, line_plot(&format!("f_n(x), {} ≤ n ≤ {}", p.n_min, p.n_max), "x", "value", &series))?;
    let sidecar = spec.out_dir.join("bulk_max.json");
    write_json(&sidecar, &summary)?;
    Ok(FigureOutput { csv, svg, extra: vec![sidecar], rows: written, declared_rows: xs.len() })
}

fn histogram(spec: &FigureSpec) -> Result<FigureOutput> {
    let p = &spec.params;
    let h = histogram_values(p.x0, p.n_max, p.bins.max(1))?;
    let (csv, svg) = paths(spec);
    let values = spec.out_dir.join("histogram_values.csv");
    let written = write_csv(
        &values,
        &["n", "value"],
        h.values.iter().enumerate().map(|(i, v)| vec![(i + 1).to_string(), fmt_f64(*v)]),
    )?;
    write_histogram(&csv, &h.bins)?;
    write_svg(&svg, histogram_plot(&format!("n^(1/4) f_n({}), n ≤ {}", p.x0, p.n_max), "value", &h.bins))?;
    let summary = spec.out_dir.join("histogram_summary.json");
    write_json(
        &summary,
        &serde_json::json!({
            "x0": h.x0, "n_max": p.n_max, "mean": h.mean, "stdev": h.stdev,
            "max_abs": h.max_abs, "argmax": h.argmax, "solver_size": h.solver_size,
        }),
    )?;
    Ok(FigureOutput { csv, svg, extra: vec![values, summary], rows: written, declared_rows: p.n_max })
}

fn l2norms(spec: &FigureSpec) -> Result<FigureOutput> {
    let p = &spec.params;
    let ns: Vec<usize> = (p.n_min.max(1)..=p.n_max).collect();
    let (moments, _) = moments_to_cut(&ns, default_cut)?;
    let (csv, svg) = paths(spec);
    let written = write_csv(
        &csv,
        &["n", "integral", "0.6*log(n)"],
        moments.iter().map(|m| vec![m.n.to_string(), fmt_f64(m.value), fmt_f64(0.6 * (m.n as f64).ln())]),
    )?;
    let series = vec![
        Series { label: "∫ f_n²".into(), points: moments.iter().map(|m| (m.n as f64, m.value)).collect() },
        Series {
            label: "0.6 log n".into(),
            points: moments.iter().map(|m| (m.n as f64, 0.6 * (m.n as f64).ln())).collect(),
        },
    ];
    write_svg(&svg, line_plot("L² norms of f_n", "n", "integral", &series))?;
    Ok(FigureOutput { csv, svg, extra: vec![], rows: written, declared_rows: ns.len() })
}
