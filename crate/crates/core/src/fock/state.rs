use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::special::ln_factorial;
use crate::{PhaseError, Result};

/// Minimum probability a coherent state must keep inside the truncation.
pub const COHERENT_CAPTURE_THRESHOLD: f64 = 1.0 - 1e-10;
/// Largest dimension derived automatically from a state description.
pub const MAX_DIM: usize = 4096;

const FILE_NORM_TOLERANCE: f64 = 1e-6;

/// A normalized pure state in the Fock basis `|0⟩ … |dim−1⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedState {
    amplitudes: Vec<Complex64>,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct JsonComplex {
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dim: usize,
    amplitudes: Vec<JsonComplex>,
}

fn squared_norm(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|c| c.norm_sqr()).sum()
}

impl TruncatedState {
    /// Normalizes `amplitudes` to unit length.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(PhaseError::validation("state dimension must be at least 1"));
        }
        if amplitudes
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(PhaseError::validation("state amplitudes must be finite"));
        }
        let norm = squared_norm(&amplitudes).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(PhaseError::validation("state has zero or non-finite norm"));
        }
        let amplitudes = amplitudes.into_iter().map(|c| c / norm).collect();
        Ok(TruncatedState {
            amplitudes,
            label: label.into(),
        })
    }

    /// Number state `|n⟩` in dimension `dim`.
    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(PhaseError::validation("dimension must be at least 1"));
        }
        if n >= dim {
            return Err(PhaseError::dimension(format!(
                "number state |{n}> does not fit in dimension {dim}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Ok(TruncatedState {
            amplitudes,
            label: format!("fock:{n}"),
        })
    }

    /// Coherent state `|α⟩`, refusing truncations that lose more than 1e-10
    /// of the probability.
    pub fn coherent(alpha: Complex64, dim: usize) -> Result<Self> {
        Self::coherent_with(alpha, dim, false)
    }

    /// As [`TruncatedState::coherent`]; `force` accepts a lossy truncation.
    pub fn coherent_with(alpha: Complex64, dim: usize, force: bool) -> Result<Self> {
        if dim == 0 {
            return Err(PhaseError::validation("dimension must be at least 1"));
        }
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(PhaseError::validation("coherent amplitude must be finite"));
        }
        let captured = coherent_capture(alpha.norm_sqr(), dim);
        if captured < COHERENT_CAPTURE_THRESHOLD && !force {
            return Err(PhaseError::Truncation {
                dim,
                captured,
                required: COHERENT_CAPTURE_THRESHOLD,
            });
        }
        let amplitudes = (0..dim).map(|n| coherent_amplitude(alpha, n)).collect();
        Self::from_amplitudes(
            amplitudes,
            format!("coherent:{}", crate::statespec::format_complex(alpha)),
        )
    }

    /// Parses the JSON state file format `{"dim": N, "amplitudes": [{"re","im"}…]}`.
    ///
    /// States whose norm is within 1e-6 of one are renormalized; anything
    /// further off is rejected.
    pub fn from_json_str(text: &str, label: impl Into<String>) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text)
            .map_err(|e| PhaseError::parse(e.column(), format!("state file: {e}")))?;
        if file.dim == 0 {
            return Err(PhaseError::validation("state file: dim must be at least 1"));
        }
        if file.amplitudes.len() != file.dim {
            return Err(PhaseError::dimension(format!(
                "state file: dim is {} but {} amplitudes were given",
                file.dim,
                file.amplitudes.len()
            )));
        }
        let amplitudes: Vec<Complex64> = file
            .amplitudes
            .iter()
            .map(|c| Complex64::new(c.re, c.im))
            .collect();
        if amplitudes
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(PhaseError::validation(
                "state file: amplitudes must be finite",
            ));
        }
        let norm = squared_norm(&amplitudes).sqrt();
        if (norm - 1.0).abs() > FILE_NORM_TOLERANCE {
            return Err(PhaseError::validation(format!(
                "state file: norm {norm} is not within {FILE_NORM_TOLERANCE} of 1"
            )));
        }
        Self::from_amplitudes(amplitudes, label)
    }

    pub fn to_json_string(&self) -> String {
        let file = StateFile {
            dim: self.dim(),
            amplitudes: self
                .amplitudes
                .iter()
                .map(|c| JsonComplex { re: c.re, im: c.im })
                .collect(),
        };
        serde_json::to_string(&file).expect("state serialization cannot fail")
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn norm_defect(&self) -> f64 {
        (squared_norm(&self.amplitudes) - 1.0).abs()
    }

    /// Zero-pads into a larger dimension.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(PhaseError::dimension(format!(
                "cannot embed a dimension-{} state into dimension {dim}",
                self.dim()
            )));
        }
        let mut amplitudes = self.amplitudes.clone();
        amplitudes.resize(dim, Complex64::new(0.0, 0.0));
        Ok(TruncatedState {
            amplitudes,
            label: self.label.clone(),
        })
    }

    /// Applies `e^{iδn̂}`, which rotates the phase-space picture by `δ`.
    pub fn rotated(&self, delta: f64) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(n, &c)| c * Complex64::from_polar(1.0, delta * n as f64))
            .collect();
        TruncatedState {
            amplitudes,
            label: format!("{}@rot{delta}", self.label),
        }
    }

    pub(crate) fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// `⟨n|α⟩ = e^{−|α|²/2} αⁿ / √n!`, evaluated in log space.
pub fn coherent_amplitude(alpha: Complex64, n: usize) -> Complex64 {
    let r = alpha.norm();
    if r == 0.0 {
        return if n == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let ln_mag = -0.5 * r * r + n as f64 * r.ln() - 0.5 * ln_factorial(n);
    Complex64::from_polar(ln_mag.exp(), n as f64 * alpha.arg())
}

/// Poisson probability `e^{−x} Σ_{n<dim} xⁿ/n!` kept by a truncation.
pub fn coherent_capture(mean_photons: f64, dim: usize) -> f64 {
    if mean_photons == 0.0 {
        return 1.0;
    }
    let ln_x = mean_photons.ln();
    // Sum the tail when the head is close to one so the result keeps precision.
    let term = |n: usize| (-mean_photons + n as f64 * ln_x - ln_factorial(n)).exp();
    if (dim as f64) > mean_photons {
        let mut tail = 0.0;
        let mut n = dim;
        loop {
            let t = term(n);
            tail += t;
            if t < 1e-18 * tail.max(1e-300) || n > dim + 100_000 {
                break;
            }
            n += 1;
        }
        (1.0 - tail).max(0.0)
    } else {
        (0..dim).map(term).sum::<f64>().min(1.0)
    }
}

/// Smallest dimension whose coherent truncation keeps at least `threshold`,
/// or `None` if more than [`MAX_DIM`] levels are needed.
pub fn min_coherent_dim(alpha: Complex64, threshold: f64) -> Option<usize> {
    let x = alpha.norm_sqr();
    if !x.is_finite() || x > MAX_DIM as f64 || coherent_capture(x, MAX_DIM) < threshold {
        return None;
    }
    let (mut lo, mut hi) = (1, MAX_DIM);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if coherent_capture(x, mid) >= threshold {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(lo)
}

/// `⟨α|ψ⟩`.
pub fn coherent_overlap(state: &TruncatedState, alpha: Complex64) -> Complex64 {
    state
        .amplitudes
        .iter()
        .enumerate()
        .fold(Complex64::new(0.0, 0.0), |acc, (n, &c)| {
            acc + coherent_amplitude(alpha, n).conj() * c
        })
}

/// Husimi function `Q(α) = |⟨α|ψ⟩|² / π`.
pub fn q_function(state: &TruncatedState, alpha: Complex64) -> f64 {
    coherent_overlap(state, alpha).norm_sqr() / PI
}
