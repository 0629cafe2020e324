//! Two-photon coincidence matrix and delocalization degree for a NOON input.
//!
//! Propagating `sinθ|2⟩_r + cosθ|2⟩_s` through `a_j(t) = Σ_l G_jl a_l(0)`
//! gives
//!
//! ```text
//! P_mn(t) = ⟨a_n† a_m† a_m a_n⟩ = 2 |sinθ G_mr G_nr + cosθ G_ms G_ns|²
//! η(t)    = 1 − ½ Σ_n P_nn(t)
//! ```
//!
//! so only columns `r` and `s` of the propagator are ever needed.

use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::{ColumnKernel, SpectralDecomposition};
use crate::state::NoonInput;

/// Magnitude below which a negative probability is treated as rounding.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

/// Which input amplitude multiplies the cavity-`r` pair term.
///
/// [`Pairing::SinOnR`] is what the NOON state `sinθ|2⟩_r + cosθ|2⟩_s`
/// produces. [`Pairing::CosOnR`] swaps the two amplitudes; it equals the
/// physical result for `(π/2 − θ)` and is kept so the verifier can show
/// the oracle tells the two apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pairing {
    #[default]
    SinOnR,
    CosOnR,
}

impl Pairing {
    fn amplitudes(self, input: &NoonInput) -> (f64, f64) {
        match self {
            Pairing::SinOnR => (input.amplitude_r(), input.amplitude_s()),
            Pairing::CosOnR => (input.amplitude_s(), input.amplitude_r()),
        }
    }
}

/// `P_mn(t)` for all cavity pairs, symmetric, summing to 2.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    time: f64,
    num_cavities: usize,
    entries: Vec<f64>,
}

impl CorrelationMatrix {
    /// Wraps row-major entries, clamping rounding-level negatives to zero.
    pub fn from_entries(time: f64, num_cavities: usize, mut entries: Vec<f64>) -> Result<Self> {
        if entries.len() != num_cavities * num_cavities {
            return Err(Error::DimensionMismatch {
                expected: num_cavities * num_cavities,
                found: entries.len(),
            });
        }
        for (idx, value) in entries.iter_mut().enumerate() {
            *value = clamp_probability(*value).ok_or(Error::NegativeProbability {
                m: idx / num_cavities + 1,
                n: idx % num_cavities + 1,
                value: *value,
            })?;
        }
        Ok(Self {
            time,
            num_cavities,
            entries,
        })
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn num_cavities(&self) -> usize {
        self.num_cavities
    }

    /// `P_mn`, 1-based.
    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.entries[(m - 1) * self.num_cavities + (n - 1)]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `Σ_{m,n} P_mn`; equals 2 for any two-photon state.
    pub fn total(&self) -> f64 {
        self.entries.iter().sum()
    }

    /// Probability that both photons share a cavity, `½ Σ_n P_nn`.
    pub fn diagonal_mass(&self) -> f64 {
        0.5 * (1..=self.num_cavities).map(|n| self.get(n, n)).sum::<f64>()
    }

    /// `η = 1 − ½ Σ_n P_nn`.
    pub fn tpd_degree(&self) -> f64 {
        1.0 - self.diagonal_mass()
    }

    /// Largest `|P_mn − other_mn|`.
    pub fn max_deviation(&self, other: &CorrelationMatrix) -> Result<f64> {
        if other.num_cavities != self.num_cavities {
            return Err(Error::DimensionMismatch {
                expected: self.num_cavities,
                found: other.num_cavities,
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

fn clamp_probability(value: f64) -> Option<f64> {
    if value > 0.0 {
        Some(value)
    } else if value >= -NEGATIVE_CLAMP {
        // also maps -0.0 to +0.0
        Some(0.0)
    } else {
        None
    }
}

/// Columns `r` and `s` of `G`, precomputed for evaluation at many times.
#[derive(Debug, Clone)]
pub struct NoonPropagation<'a> {
    decomp: &'a SpectralDecomposition,
    input: NoonInput,
    pairing: Pairing,
    column_r: ColumnKernel,
    column_s: ColumnKernel,
}

impl<'a> NoonPropagation<'a> {
    pub fn new(decomp: &'a SpectralDecomposition, input: NoonInput) -> Result<Self> {
        Self::with_pairing(decomp, input, Pairing::SinOnR)
    }

    pub fn with_pairing(
        decomp: &'a SpectralDecomposition,
        input: NoonInput,
        pairing: Pairing,
    ) -> Result<Self> {
        Ok(Self {
            decomp,
            column_r: ColumnKernel::new(decomp, input.site_r())?,
            column_s: ColumnKernel::new(decomp, input.site_s())?,
            input,
            pairing,
        })
    }

    pub fn input(&self) -> &NoonInput {
        &self.input
    }

    fn columns(&self, t: f64) -> (Vec<Complex64>, Vec<Complex64>) {
        let phases = self.decomp.mode_phases(t);
        (
            self.column_r.evaluate(&phases),
            self.column_s.evaluate(&phases),
        )
    }

    pub fn correlation_at(&self, t: f64) -> Result<CorrelationMatrix> {
        let n = self.decomp.num_modes();
        let (gr, gs) = self.columns(t);
        let (ar, as_) = self.pairing.amplitudes(&self.input);
        let mut entries = vec![0.0; n * n];
        for m in 0..n {
            for k in m..n {
                let p = 2.0 * (ar * gr[m] * gr[k] + as_ * gs[m] * gs[k]).norm_sqr();
                entries[m * n + k] = p;
                entries[k * n + m] = p;
            }
        }
        CorrelationMatrix::from_entries(t, n, entries)
    }

    /// `η(t)` from the diagonal alone.
    pub fn tpd_degree_at(&self, t: f64) -> f64 {
        let (gr, gs) = self.columns(t);
        let (ar, as_) = self.pairing.amplitudes(&self.input);
        let same_cavity: f64 = gr
            .iter()
            .zip(&gs)
            .map(|(&r, &s)| (ar * r * r + as_ * s * s).norm_sqr())
            .sum();
        1.0 - same_cavity
    }
}

/// `P_mn(t)` for the NOON input.
pub fn correlation_matrix(
    decomp: &SpectralDecomposition,
    input: &NoonInput,
    t: f64,
) -> Result<CorrelationMatrix> {
    NoonPropagation::new(decomp, *input)?.correlation_at(t)
}

/// `η(t)` for the NOON input.
pub fn tpd_degree(decomp: &SpectralDecomposition, input: &NoonInput, t: f64) -> Result<f64> {
    Ok(NoonPropagation::new(decomp, *input)?.tpd_degree_at(t))
}

/// `η` sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TpdSeries {
    pub times: Vec<f64>,
    pub eta: Vec<f64>,
}

impl TpdSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// First sampled time with `η ≥ level`.
    pub fn first_crossing(&self, level: f64) -> Option<f64> {
        self.times
            .iter()
            .zip(&self.eta)
            .find(|(_, &e)| e >= level)
            .map(|(&t, _)| t)
    }
}

/// Evaluates `η` at every grid point. The grid must be non-empty, strictly
/// increasing and non-negative.
pub fn tpd_series(
    decomp: &SpectralDecomposition,
    input: &NoonInput,
    t_grid: &[f64],
) -> Result<TpdSeries> {
    validate_grid(t_grid)?;
    let propagation = NoonPropagation::new(decomp, *input)?;

    #[cfg(feature = "parallel")]
    let eta = t_grid
        .par_iter()
        .map(|&t| propagation.tpd_degree_at(t))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let eta = t_grid
        .iter()
        .map(|&t| propagation.tpd_degree_at(t))
        .collect();

    Ok(TpdSeries {
        times: t_grid.to_vec(),
        eta,
    })
}

fn validate_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::InvalidTimeGrid("grid is empty".into()));
    }
    if let Some(&t) = t_grid.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::InvalidTimeGrid(format!(
            "times must be finite and non-negative, got {t}"
        )));
    }
    if let Some(w) = t_grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidTimeGrid(format!(
            "times must strictly increase, got {} then {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// `steps + 1` evenly spaced samples covering `[0, t_max]` inclusive.
pub fn uniform_time_grid(t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::InvalidTimeGrid("steps must be positive".into()));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::InvalidTimeGrid(format!(
            "t_max must be positive and finite, got {t_max}"
        )));
    }
    let mut grid: Vec<f64> = (0..=steps)
        .map(|i| t_max * i as f64 / steps as f64)
        .collect();
    grid[steps] = t_max;
    Ok(grid)
}
