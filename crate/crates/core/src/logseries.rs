//! Displacement-sandwiched logarithm series
//! `φ̂ = −(i/2) D(χ) [ln(1 + â/χ) − ln(1 + â†/χ)] D†(χ)`, evaluated in a
//! padded working space and compared with the coherent-state phase
//! operator.

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::fock::{annihilation_real, displacement_matrix};
use crate::format::round_sig;
use crate::matrix::RMatrix;
use crate::operator::{Meta, Method, OperatorMatrix};
use crate::{PhaseError, Result};

/// Largest accepted `‖(â/χ)^K‖_max / K`.
pub const MAX_SERIES_TAIL: f64 = 1e-3;
pub const DEFAULT_SERIES_ORDER: usize = 64;
pub const DEFAULT_WORK_FACTOR: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct LogSeriesConfig {
    pub chi: f64,
    pub series_order: usize,
    pub dim_report: usize,
    pub dim_work: usize,
    /// Return the operator even when the series tail exceeds
    /// [`MAX_SERIES_TAIL`]; the tail is still recorded.
    pub allow_unconverged: bool,
}

impl LogSeriesConfig {
    /// Defaults: `dim_work = 8·dim_report`, `χ = 4√dim_work`, `K = 64`.
    pub fn for_report(dim_report: usize) -> Self {
        let dim_work = DEFAULT_WORK_FACTOR * dim_report;
        LogSeriesConfig {
            chi: 4.0 * (dim_work as f64).sqrt(),
            series_order: DEFAULT_SERIES_ORDER,
            dim_report,
            dim_work,
            allow_unconverged: false,
        }
    }

    /// Rejects invalid configurations and returns advisory warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        if !(self.chi.is_finite() && self.chi > 0.0) {
            return Err(PhaseError::validation(format!(
                "chi must be positive and finite, got {}",
                self.chi
            )));
        }
        if self.series_order == 0 {
            return Err(PhaseError::validation("series order must be at least 1"));
        }
        if self.dim_report == 0 {
            return Err(PhaseError::validation(
                "report dimension must be at least 1",
            ));
        }
        if self.dim_work < self.dim_report {
            return Err(PhaseError::dimension(format!(
                "working dimension {} is smaller than report dimension {}",
                self.dim_work, self.dim_report
            )));
        }
        let mut warnings = Vec::new();
        if self.dim_work < 4 * self.dim_report {
            warnings.push(format!(
                "dim_work={} is below 4 x dim_report={}; truncation edges may reach the report block",
                self.dim_work,
                4 * self.dim_report
            ));
        }
        let a_norm = ((self.dim_work - 1) as f64).sqrt();
        if self.chi <= a_norm {
            warnings.push(format!(
                "chi={} does not exceed the ladder norm {a_norm:.4} on dim_work={}; the series may diverge",
                self.chi, self.dim_work
            ));
        }
        Ok(warnings)
    }
}

/// Builds the log-series phase operator and returns its top-left
/// `dim_report` block.
///
/// The metadata records the series tail `‖(â/χ)^K‖_max / K`, the largest
/// term norm seen, and the displacement unitarity defect.
pub fn build_log_series_operator(cfg: &LogSeriesConfig) -> Result<OperatorMatrix> {
    let mut warnings = cfg.validate()?;
    let dim = cfg.dim_work;
    let a = annihilation_real(dim);

    // L = Σ (−1)^{k−1}/k (â/χ)^k, with â applied to the previous power as a
    // row shift: (âP)_{m,n} = √(m+1) P_{m+1,n}.
    let mut power = a.scale(1.0 / cfg.chi);
    let mut series = power.clone();
    let mut largest_term = power.max_abs();
    let mut tail = largest_term;
    for k in 2..=cfg.series_order {
        let prev = power;
        power = RMatrix::from_fn(dim, |m, n| {
            if m + 1 < dim {
                ((m + 1) as f64).sqrt() / cfg.chi * prev[(m + 1, n)]
            } else {
                0.0
            }
        });
        let norm = power.max_abs();
        if !norm.is_finite() {
            return Err(PhaseError::convergence(format!(
                "series term {k} is not finite"
            )));
        }
        let coeff = if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
        series = &series + &power.scale(coeff);
        tail = norm / k as f64;
        largest_term = largest_term.max(tail);
    }
    if tail > MAX_SERIES_TAIL && !cfg.allow_unconverged {
        return Err(PhaseError::convergence(format!(
            "log series tail {tail:.3e} exceeds {MAX_SERIES_TAIL:e} at K={}; increase the series order or chi",
            cfg.series_order
        )));
    }

    let displacement = displacement_matrix(cfg.chi, dim)?;
    let d = displacement.entries.map(|z| z.re);
    let skew = &series - &series.transpose();
    let sandwich = d.matmul(&skew).matmul(&d.transpose());
    let block = sandwich.top_left(cfg.dim_report);
    let entries = block.map(|x| Complex64::new(0.0, -0.5 * x));
    if !entries.is_finite() {
        return Err(PhaseError::convergence(
            "log-series operator has non-finite entries",
        ));
    }

    let mut meta = Meta::new()
        .with("chi", cfg.chi)
        .with("series_order", cfg.series_order)
        .with("dim_report", cfg.dim_report)
        .with("dim_work", cfg.dim_work)
        .with("series_tail", tail)
        .with("largest_term", largest_term)
        .with("hermiticity_defect", entries.hermiticity_defect());
    if let Some(defect) = displacement.meta.real("unitarity_defect") {
        meta.set("displacement_unitarity_defect", defect);
    }
    if tail > MAX_SERIES_TAIL {
        warnings.push(format!(
            "series tail {tail:.3e} exceeds {MAX_SERIES_TAIL:e}; result is unconverged"
        ));
    }
    if let Some(crate::operator::MetaValue::Text(w)) = displacement.meta.get("warning") {
        warnings.push(w.clone());
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    if !warnings.is_empty() {
        meta.set("warning", warnings.join("; "));
    }
    Ok(OperatorMatrix::new(entries, Method::LogSeries, meta))
}

fn sig<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*v))
}

/// One entry of an equivalence comparison.
#[derive(Clone, Debug, Serialize)]
pub struct EntryDeviation {
    pub m: usize,
    pub n: usize,
    #[serde(serialize_with = "sig")]
    pub candidate_re: f64,
    #[serde(serialize_with = "sig")]
    pub candidate_im: f64,
    #[serde(serialize_with = "sig")]
    pub reference_re: f64,
    #[serde(serialize_with = "sig")]
    pub reference_im: f64,
    #[serde(serialize_with = "sig")]
    pub abs_dev: f64,
}

/// Deviation of a candidate operator from a reference on a leading block.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub block: usize,
    pub candidate: Method,
    pub reference: Method,
    #[serde(serialize_with = "sig")]
    pub max_abs_dev: f64,
    #[serde(serialize_with = "sig")]
    pub fro_dev: f64,
    /// Largest diagonal magnitude of the candidate block.
    #[serde(serialize_with = "sig")]
    pub candidate_diagonal: f64,
    pub entries: Vec<EntryDeviation>,
}

/// Compares the top-left `block` of two operators entry by entry.
pub fn equivalence_report(
    candidate: &OperatorMatrix,
    reference: &OperatorMatrix,
    block: usize,
) -> Result<EquivalenceReport> {
    if block == 0 || block > candidate.dim() || block > reference.dim() {
        return Err(PhaseError::dimension(format!(
            "comparison block {block} must be in 1..={}",
            candidate.dim().min(reference.dim())
        )));
    }
    let mut entries = Vec::with_capacity(block * block);
    let mut max_abs_dev: f64 = 0.0;
    let mut fro: f64 = 0.0;
    let mut candidate_diagonal: f64 = 0.0;
    for m in 0..block {
        for n in 0..block {
            let c = candidate.element(m, n);
            let r = reference.element(m, n);
            let dev = (c - r).norm();
            max_abs_dev = max_abs_dev.max(dev);
            fro += dev * dev;
            if m == n {
                candidate_diagonal = candidate_diagonal.max(c.norm());
            }
            entries.push(EntryDeviation {
                m,
                n,
                candidate_re: c.re,
                candidate_im: c.im,
                reference_re: r.re,
                reference_im: r.im,
                abs_dev: dev,
            });
        }
    }
    Ok(EquivalenceReport {
        block,
        candidate: candidate.method,
        reference: reference.method,
        max_abs_dev,
        fro_dev: fro.sqrt(),
        candidate_diagonal,
        entries,
    })
}
