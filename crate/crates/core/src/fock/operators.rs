use num_complex::Complex64;

use crate::matrix::{CMatrix, RMatrix};
use crate::operator::{Meta, Method, OperatorMatrix};
use crate::{PhaseError, Result};

pub struct ElementaryOperators {
    pub annihilation: OperatorMatrix,
    pub creation: OperatorMatrix,
    pub number: OperatorMatrix,
}

pub(crate) fn annihilation_real(dim: usize) -> RMatrix {
    RMatrix::from_fn(dim, |m, n| if n == m + 1 { (n as f64).sqrt() } else { 0.0 })
}

/// `â`, `â†` and `n̂` on `dim` levels. `[â, â†]` is the identity except for
/// the last diagonal entry, which is `−(dim − 1)`.
pub fn elementary_operators(dim: usize) -> Result<ElementaryOperators> {
    if dim == 0 {
        return Err(PhaseError::validation("dimension must be at least 1"));
    }
    let a = annihilation_real(dim).to_complex();
    let adag = a.adjoint();
    let number = CMatrix::from_fn(dim, |m, n| {
        if m == n {
            Complex64::new(m as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let meta = |name: &str| Meta::new().with("operator", name).with("dim", dim);
    Ok(ElementaryOperators {
        annihilation: OperatorMatrix::new(a, Method::Elementary, meta("annihilation")),
        creation: OperatorMatrix::new(adag, Method::Elementary, meta("creation")),
        number: OperatorMatrix::new(number, Method::Elementary, meta("number")),
    })
}

const TAYLOR_SCALE_TARGET: f64 = 0.5;
const TAYLOR_MAX_TERMS: usize = 40;

/// Matrix exponential by scaling and squaring with a Taylor core.
///
/// The argument is scaled by `2^-s` until its 1-norm is at most 1/2, the
/// Taylor series is summed until terms drop below round-off, and the result
/// is squared `s` times.
pub fn expm_real(a: &RMatrix) -> RMatrix {
    let n = a.dim();
    let norm = a.norm_one();
    let squarings = if norm > TAYLOR_SCALE_TARGET {
        (norm / TAYLOR_SCALE_TARGET).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.scale(0.5f64.powi(squarings));

    let mut sum = RMatrix::identity(n);
    let mut term = RMatrix::identity(n);
    for k in 1..=TAYLOR_MAX_TERMS {
        term = term.matmul(&scaled).scale(1.0 / k as f64);
        sum = &sum + &term;
        if term.max_abs() <= f64::EPSILON * 1e-3 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    sum
}

/// `D(χ) = exp(χ(â† − â))` computed in `dim_work` levels.
///
/// The measured unitarity defect `max |D†D − I|` is stored in the metadata.
/// A warning is attached when `dim_work < χ² + 8χ + 16`, where the truncated
/// exponential stops resembling the true displacement.
pub fn displacement_matrix(chi: f64, dim_work: usize) -> Result<OperatorMatrix> {
    if dim_work == 0 {
        return Err(PhaseError::validation(
            "working dimension must be at least 1",
        ));
    }
    if !chi.is_finite() {
        return Err(PhaseError::validation(
            "displacement parameter must be finite",
        ));
    }
    let a = annihilation_real(dim_work);
    let generator = (&a.transpose() - &a).scale(chi);
    let d = expm_real(&generator);

    let defect = (&d.transpose().matmul(&d) - &RMatrix::identity(dim_work)).max_abs();
    let mut meta = Meta::new()
        .with("operator", "displacement")
        .with("chi", chi)
        .with("dim_work", dim_work)
        .with("unitarity_defect", defect);
    let needed = chi * chi + 8.0 * chi.abs() + 16.0;
    if (dim_work as f64) < needed {
        let msg = format!(
            "displacement chi={chi} in dim_work={dim_work} is truncation-dominated \
             (dim_work < chi^2 + 8 chi + 16 = {needed:.1}); unitarity defect {defect:.3e}"
        );
        log::warn!("{msg}");
        meta.set("warning", msg);
    }
    Ok(OperatorMatrix::new(
        d.to_complex(),
        Method::Elementary,
        meta,
    ))
}
