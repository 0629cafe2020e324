//! NOON-type two-photon input `sinθ |2⟩_r|0⟩_s + cosθ |0⟩_r|2⟩_s` and its
//! concurrence `|sin 2θ|`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two photons sharing cavity `r` or cavity `s` in superposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoonInput {
    theta: f64,
    site_r: usize,
    site_s: usize,
}

impl NoonInput {
    /// `theta ∈ [0, π/2]`; sites are 1-based and must differ. Range against
    /// the chain length is checked where a lattice is at hand.
    pub fn new(theta: f64, site_r: usize, site_s: usize) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidInput(format!(
                "theta must lie in [0, π/2], got {theta}"
            )));
        }
        if site_r == 0 || site_s == 0 {
            return Err(Error::InvalidInput("cavity indices are 1-based".into()));
        }
        if site_r == site_s {
            return Err(Error::InvalidInput(format!(
                "the two input cavities must differ, both are {site_r}"
            )));
        }
        Ok(Self {
            theta,
            site_r,
            site_s,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn site_r(&self) -> usize {
        self.site_r
    }

    pub fn site_s(&self) -> usize {
        self.site_s
    }

    /// Amplitude on the doubly occupied cavity `r`.
    pub fn amplitude_r(&self) -> f64 {
        self.theta.sin()
    }

    /// Amplitude on the doubly occupied cavity `s`.
    pub fn amplitude_s(&self) -> f64 {
        self.theta.cos()
    }

    pub fn concurrence(&self) -> f64 {
        concurrence(self.theta)
    }
}

/// `C(θ) = |sin 2θ|`.
pub fn concurrence(theta: f64) -> f64 {
    (2.0 * theta).sin().abs()
}

/// Which of the two angles in `[0, π/2]` sharing a concurrence to pick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `θ ∈ [0, π/4]`
    #[default]
    Low,
    /// `θ ∈ [π/4, π/2]`
    High,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Low => "low",
            Branch::High => "high",
        })
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "low" => Ok(Branch::Low),
            "high" => Ok(Branch::High),
            other => Err(Error::InvalidInput(format!(
                "branch must be \"low\" or \"high\", got {other:?}"
            ))),
        }
    }
}

/// Inverts [`concurrence`] on the requested branch.
pub fn theta_for_concurrence(c: f64, branch: Branch) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::InvalidInput(format!(
            "concurrence must lie in [0, 1], got {c}"
        )));
    }
    let half = c.asin() / 2.0;
    Ok(match branch {
        Branch::Low => half,
        Branch::High => FRAC_PI_2 - half,
    })
}
