//! Uniform open chain of identical single-mode cavities.

use crate::error::{Error, Result};

/// Cavity count, bare mode frequency and nearest-neighbour hopping of a
/// uniform open chain (ħ = 1, ω and J share one energy unit).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    num_cavities: usize,
    omega: f64,
    hopping: f64,
}

impl LatticeSpec {
    pub fn new(num_cavities: usize, omega: f64, hopping: f64) -> Result<Self> {
        if num_cavities < 2 {
            return Err(Error::InvalidLattice(format!(
                "need at least 2 cavities, got {num_cavities}"
            )));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidLattice(format!(
                "mode frequency must be positive and finite, got {omega}"
            )));
        }
        if !(hopping.is_finite() && hopping >= 0.0) {
            return Err(Error::InvalidLattice(format!(
                "hopping must be non-negative and finite, got {hopping}"
            )));
        }
        Ok(Self {
            num_cavities,
            omega,
            hopping,
        })
    }

    pub fn num_cavities(&self) -> usize {
        self.num_cavities
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn hopping(&self) -> f64 {
        self.hopping
    }

    /// Checks a 1-based cavity index.
    pub fn check_site(&self, site: usize) -> Result<()> {
        if site == 0 || site > self.num_cavities {
            Err(Error::SiteOutOfRange {
                site,
                num_cavities: self.num_cavities,
            })
        } else {
            Ok(())
        }
    }

    /// Mirror image of a 1-based site about the chain centre.
    pub fn mirror(&self, site: usize) -> usize {
        self.num_cavities + 1 - site
    }
}
