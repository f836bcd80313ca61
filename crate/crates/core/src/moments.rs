use std::fmt;

use serde::{Serialize, Serializer};

use crate::format::round_sig;
use crate::operator::Meta;
use crate::quadrature::angular::binomial;
use crate::{PhaseError, Result};

/// Highest phase moment any report computes.
pub const MAX_MOMENT_ORDER: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentMethod {
    QIntegral,
    OperatorExpectation,
    PeggBarnett,
}

impl fmt::Display for MomentMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MomentMethod::QIntegral => "q-integral",
            MomentMethod::OperatorExpectation => "operator-expectation",
            MomentMethod::PeggBarnett => "pegg-barnett",
        })
    }
}

impl Serialize for MomentMethod {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn sig<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*v))
}

fn sig_vec<S: Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| round_sig(*x)))
}

/// Discretization that produced a report.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GridInfo {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_radial: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_angular: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pb_s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(serialize_with = "sig")]
    pub theta0: f64,
}

/// Phase moments of one state under one method.
///
/// `moments[k-1]` is the raw absolute moment `⟨θ^k⟩`; `centered[k-1]` the
/// same moment measured from the window center. `variance` is always
/// computed from the centered moments.
#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub method: MomentMethod,
    #[serde(serialize_with = "sig")]
    pub mean: f64,
    #[serde(serialize_with = "sig")]
    pub second_moment: f64,
    #[serde(serialize_with = "sig")]
    pub variance: f64,
    #[serde(serialize_with = "sig")]
    pub norm_defect: f64,
    #[serde(serialize_with = "sig_vec")]
    pub moments: Vec<f64>,
    #[serde(serialize_with = "sig_vec")]
    pub centered: Vec<f64>,
    pub grid: GridInfo,
    pub meta: Meta,
}

pub(crate) fn check_k_max(k_max: u32) -> Result<()> {
    if !(1..=MAX_MOMENT_ORDER).contains(&k_max) {
        return Err(PhaseError::validation(format!(
            "moment order must be in 1..={MAX_MOMENT_ORDER}, got {k_max}"
        )));
    }
    Ok(())
}

impl MomentReport {
    /// Builds a report from centered moments `c_1..c_kmax` of a unit-mass
    /// distribution about `center`.
    pub(crate) fn from_centered(
        method: MomentMethod,
        center: f64,
        centered: Vec<f64>,
        norm_defect: f64,
        grid: GridInfo,
        meta: Meta,
    ) -> Self {
        let moment = |k: usize| if k == 0 { 1.0 } else { centered[k - 1] };
        let moments: Vec<f64> = (1..=centered.len() as u32)
            .map(|k| {
                (0..=k)
                    .map(|l| binomial(k, l) * center.powi((k - l) as i32) * moment(l as usize))
                    .sum()
            })
            .collect();
        let c1 = centered[0];
        let c2 = centered.get(1).copied().unwrap_or(f64::NAN);
        let variance = c2 - c1 * c1;
        MomentReport {
            method,
            mean: center + c1,
            second_moment: moments.get(1).copied().unwrap_or(f64::NAN),
            variance,
            norm_defect,
            moments,
            centered,
            grid,
            meta,
        }
    }
}
