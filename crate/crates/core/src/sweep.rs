//! N-sweeps of [`FisherReport`]s, figure data, and the cross-family summary.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fisher::FisherReport;
use crate::format::{csv_table, format_g12, format_opt};
use crate::phasedist::{uncertainty_product, PhaseDistribution};
use crate::states::{Family, StateSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub n_min: usize,
    pub n_max: usize,
    /// Stride; `None` uses the family's parity stride.
    pub step: Option<usize>,
    pub tol: f64,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
}

impl SweepOptions {
    pub fn for_family(family: Family, tol: f64) -> SweepOptions {
        let (n_min, n_max) = family.default_range();
        SweepOptions {
            n_min,
            n_max,
            step: None,
            tol,
            jobs: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFailure {
    pub n: usize,
    pub error: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub family: Family,
    pub rows: Vec<FisherReport>,
    pub mean_rel_diff_percent: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<SweepFailure>,
    /// Least-squares fit `F_Q ≈ prefactor · N^exponent`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<PowerLawFit>,
}

impl SweepTable {
    pub fn csv(&self, with_reference: bool) -> String {
        let header = if with_reference {
            format!("{},reference", FisherReport::CSV_HEADER)
        } else {
            FisherReport::CSV_HEADER.to_string()
        };
        csv_table(
            &header,
            self.rows.iter().map(|r| {
                let row = r.csv_row();
                if with_reference {
                    let reference = self.family.reference_curve(r.n_total as f64);
                    format!("{row},{}", format_opt(reference))
                } else {
                    row
                }
            }),
        )
    }

    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Photon numbers visited by a sweep; every one must be valid for `family`.
pub fn sweep_points(family: Family, opts: &SweepOptions) -> Result<Vec<usize>> {
    let step = opts.step.unwrap_or_else(|| family.n_step());
    if step == 0 {
        return Err(Error::InvalidArgument("sweep step must be positive".into()));
    }
    if opts.n_min > opts.n_max {
        return Err(Error::InvalidArgument(format!(
            "empty sweep range {}..{}",
            opts.n_min, opts.n_max
        )));
    }
    let points: Vec<usize> = (opts.n_min..=opts.n_max).step_by(step).collect();
    if let Some(bad) = points.iter().find(|&&n| !family.is_valid_n(n)) {
        return Err(Error::InvalidArgument(format!(
            "N = {bad} is not valid for family {family}"
        )));
    }
    Ok(points)
}

fn with_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(work))
}

/// Sweeps `make_spec(n)` over the points of `opts`; rows come back ordered
/// by `n` whatever the completion order. Failing points are recorded in
/// `failures` and skipped.
pub fn run_sweep<F>(family: Family, opts: &SweepOptions, make_spec: F) -> Result<SweepTable>
where
    F: Fn(usize) -> StateSpec + Sync,
{
    let points = sweep_points(family, opts)?;
    let tol = opts.tol;
    let results: Vec<(usize, Result<FisherReport>)> = with_pool(opts.jobs, || {
        points
            .par_iter()
            .map(|&n| (n, FisherReport::for_spec(&make_spec(n), tol)))
            .collect()
    })?;
    let mut rows = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (n, r) in results {
        match r {
            Ok(report) => rows.push(report),
            Err(e) => failures.push(SweepFailure {
                n,
                error: e.to_string(),
            }),
        }
    }
    let mean_rel_diff_percent = if rows.is_empty() {
        f64::NAN
    } else {
        100.0 * rows.iter().map(|r| r.rel_diff).sum::<f64>() / rows.len() as f64
    };
    let fit = fit_power_law(rows.iter().map(|r| (r.n_total as f64, r.f_q)));
    Ok(SweepTable {
        family,
        rows,
        mean_rel_diff_percent,
        failures,
        fit,
    })
}

pub fn run_family_sweep(family: Family, opts: &SweepOptions) -> Result<SweepTable> {
    run_sweep(family, opts, |n| family.spec(n))
}

/// Ordinary least squares of `ln y` on `ln x` over points with `x, y > 0`.
/// `None` with fewer than two usable points or identical abscissae.
pub fn fit_power_law<I>(points: I) -> Option<PowerLawFit>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let logs: Vec<(f64, f64)> = points
        .into_iter()
        .filter(|&(x, y)| x > 0.0 && y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let exponent = sxy / sxx;
    Some(PowerLawFit {
        exponent,
        prefactor: (my - exponent * mx).exp(),
    })
}

/// Data behind the three panels drawn for one family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureBundle {
    pub family: Family,
    /// Photon number of the coefficient and distribution panels.
    pub n: usize,
    /// `(k, |A_k|²)`.
    pub coefficients: Vec<(usize, f64)>,
    /// `(φ, P(φ))` on a uniform grid over `[−π, π)`.
    pub distribution: Vec<(f64, f64)>,
    pub sweep: SweepTable,
}

impl FigureBundle {
    pub fn build(family: Family, m_points: usize, sweep: SweepTable) -> Result<FigureBundle> {
        let n = family.figure_n();
        let state = family.spec(n).build()?;
        let coefficients = state.probabilities().into_iter().enumerate().collect();
        let distribution = PhaseDistribution::new(&state)
            .sample_grid(m_points)?
            .into_iter()
            .map(|s| (s.phi, s.p))
            .collect();
        Ok(FigureBundle {
            family,
            n,
            coefficients,
            distribution,
            sweep,
        })
    }

    pub fn coefficients_csv(&self) -> String {
        csv_table(
            "k,prob",
            self.coefficients
                .iter()
                .map(|&(k, p)| format!("{k},{}", format_g12(p))),
        )
    }

    pub fn distribution_csv(&self) -> String {
        csv_table(
            "phi,p",
            self.distribution
                .iter()
                .map(|&(phi, p)| format!("{},{}", format_g12(phi), format_g12(p))),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub family: Family,
    pub n_min: usize,
    pub n_max: usize,
    pub mean_rel_diff_percent: f64,
    /// Smallest `Δφ · Δn_a` over the swept states.
    pub min_uncertainty_product: f64,
}

impl SummaryRow {
    pub const CSV_HEADER: &'static str =
        "family,n_min,n_max,mean_rel_diff_percent,min_uncertainty_product";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.family,
            self.n_min,
            self.n_max,
            format_g12(self.mean_rel_diff_percent),
            format_g12(self.min_uncertainty_product),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub summary: Vec<SummaryRow>,
    pub bundles: Vec<FigureBundle>,
}

impl Comparison {
    pub fn summary_csv(&self) -> String {
        csv_table(
            SummaryRow::CSV_HEADER,
            self.summary.iter().map(SummaryRow::csv_row),
        )
    }

    pub fn failures(&self) -> impl Iterator<Item = (Family, &SweepFailure)> {
        self.bundles
            .iter()
            .flat_map(|b| b.sweep.failures.iter().map(move |f| (b.family, f)))
    }

    /// Writes per-family bundle files into `dir` and returns their paths.
    /// CSV output gives `<family>_coefficients.csv`, `<family>_distribution.csv`
    /// and `<family>_sweep.csv`; JSON gives one `<family>.json` per family.
    pub fn write_bundles(&self, dir: &Path, json: bool) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for b in &self.bundles {
            let files = if json {
                vec![(
                    format!("{}.json", b.family),
                    serde_json::to_string_pretty(b)? + "\n",
                )]
            } else {
                vec![
                    (
                        format!("{}_coefficients.csv", b.family),
                        b.coefficients_csv(),
                    ),
                    (
                        format!("{}_distribution.csv", b.family),
                        b.distribution_csv(),
                    ),
                    (format!("{}_sweep.csv", b.family), b.sweep.csv(true)),
                ]
            };
            for (name, text) in files {
                let path = dir.join(name);
                std::fs::write(&path, text)?;
                written.push(path);
            }
        }
        Ok(written)
    }
}

/// Grid size of the distribution panels.
pub const FIGURE_GRID_POINTS: usize = 1024;

/// Sweeps every family over its default range and collects the summary.
pub fn compare_all(tol: f64, jobs: usize) -> Result<Comparison> {
    let mut summary = Vec::with_capacity(Family::ALL.len());
    let mut bundles = Vec::with_capacity(Family::ALL.len());
    for family in Family::ALL {
        let opts = SweepOptions {
            jobs,
            ..SweepOptions::for_family(family, tol)
        };
        let sweep = run_family_sweep(family, &opts)?;
        let points = sweep_points(family, &opts)?;
        let products: Vec<f64> = with_pool(jobs, || {
            points
                .par_iter()
                .filter_map(|&n| family.spec(n).build().ok())
                .map(|s| uncertainty_product(&s))
                .collect()
        })?;
        summary.push(SummaryRow {
            family,
            n_min: opts.n_min,
            n_max: opts.n_max,
            mean_rel_diff_percent: sweep.mean_rel_diff_percent,
            min_uncertainty_product: products.into_iter().fold(f64::INFINITY, f64::min),
        });
        bundles.push(FigureBundle::build(family, FIGURE_GRID_POINTS, sweep)?);
    }
    Ok(Comparison { summary, bundles })
}
