use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// Branch window `(center − π, center + π]` on which phases are single-valued.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseWindow {
    center: f64,
}

impl Default for PhaseWindow {
    fn default() -> Self {
        PhaseWindow { center: 0.0 }
    }
}

impl PhaseWindow {
    pub fn new(center: f64) -> crate::Result<Self> {
        if !center.is_finite() {
            return Err(crate::PhaseError::validation(
                "phase window center must be finite",
            ));
        }
        Ok(PhaseWindow { center })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn lower(&self) -> f64 {
        self.center - PI
    }

    pub fn upper(&self) -> f64 {
        self.center + PI
    }

    pub fn contains(&self, theta: f64) -> bool {
        theta > self.lower() && theta <= self.upper()
    }

    /// Maps an angle into the window.
    pub fn wrap(&self, theta: f64) -> f64 {
        let offset = theta - self.center;
        let mut wrapped = offset - 2.0 * PI * (offset / (2.0 * PI)).round();
        if wrapped <= -PI {
            wrapped += 2.0 * PI;
        }
        self.center + wrapped
    }
}
