//! Normal modes of the open chain and the single-photon Green's function.
//!
//! The chain Hamiltonian is diagonalized by the discrete sine transform
//!
//! ```text
//! S(j,k) = sqrt(2/(N+1)) sin(π j k / (N+1)),    Ω_k = ω + 2J cos(π k / (N+1))
//! ```
//!
//! and the Heisenberg-picture propagator `a_j(t) = Σ_l G_jl(t) a_l(0)` is the
//! mode sum `G_jl(t) = Σ_k e^{-iΩ_k t} S(j,k) S(l,k)`. `S` is symmetric and
//! its own inverse, so `G` is symmetric and unitary.
//!
//! All cavity and mode indices taken by public methods are 1-based.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::lattice::LatticeSpec;

/// Sine-transform matrix and mode frequencies of a [`LatticeSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    lattice: LatticeSpec,
    /// Row-major `N×N`, entry `[(j-1)*N + (k-1)] = S(j,k)`.
    transform: Vec<f64>,
    frequencies: Vec<f64>,
}

/// Builds the normal-mode decomposition of the chain.
pub fn decompose(lattice: &LatticeSpec) -> Result<SpectralDecomposition> {
    let n = lattice.num_cavities();
    // LatticeSpec already refuses n < 2; recheck in case the invariant moves.
    LatticeSpec::new(n, lattice.omega(), lattice.hopping())?;

    let period = 2 * (n + 1);
    let norm = (2.0 / (n + 1) as f64).sqrt();
    let mut transform = vec![0.0; n * n];
    for j in 1..=n {
        for k in 1..=n {
            // sin(π m/(N+1)) is 2(N+1)-periodic in m; reduce before scaling so
            // the argument stays in [0, 2π).
            let m = (j * k) % period;
            transform[(j - 1) * n + (k - 1)] = norm * (PI * m as f64 / (n + 1) as f64).sin();
        }
    }

    let frequencies = (1..=n)
        .map(|k| lattice.omega() + 2.0 * lattice.hopping() * (PI * k as f64 / (n + 1) as f64).cos())
        .collect();

    Ok(SpectralDecomposition {
        lattice: *lattice,
        transform,
        frequencies,
    })
}

impl SpectralDecomposition {
    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn num_modes(&self) -> usize {
        self.frequencies.len()
    }

    /// `S(j,k)`, 1-based.
    pub fn transform_entry(&self, j: usize, k: usize) -> f64 {
        let n = self.num_modes();
        self.transform[(j - 1) * n + (k - 1)]
    }

    /// Row-major transform matrix.
    pub fn transform(&self) -> &[f64] {
        &self.transform
    }

    /// `Ω_k` for `k = 1..=N`, stored at index `k-1`.
    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    fn transform_row(&self, j: usize) -> &[f64] {
        let n = self.num_modes();
        &self.transform[(j - 1) * n..j * n]
    }

    /// `e^{-iΩ_k t}` for every mode.
    pub fn mode_phases(&self, t: f64) -> Vec<Complex64> {
        self.frequencies
            .iter()
            .map(|&w| Complex64::from_polar(1.0, -w * t))
            .collect()
    }

    /// Full `G(t)`. Negative times are evaluated by the same mode sum
    /// (backward evolution).
    pub fn propagator_matrix(&self, t: f64) -> PropagatorMatrix {
        let n = self.num_modes();
        let phases = self.mode_phases(t);
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 1..=n {
            let row_j = self.transform_row(j);
            for l in j..=n {
                let g = mode_sum(&phases, row_j, self.transform_row(l));
                entries[(j - 1) * n + (l - 1)] = g;
                entries[(l - 1) * n + (j - 1)] = g;
            }
        }
        PropagatorMatrix {
            time: t,
            num_cavities: n,
            entries,
        }
    }

    /// Columns `G_{·,site}(t)` only, `O(N²)` each.
    pub fn propagator_columns(&self, t: f64, sites: &[usize]) -> Result<Vec<PropagatorColumn>> {
        let kernels = sites
            .iter()
            .map(|&site| ColumnKernel::new(self, site))
            .collect::<Result<Vec<_>>>()?;
        let phases = self.mode_phases(t);
        Ok(kernels
            .iter()
            .map(|kernel| PropagatorColumn {
                site: kernel.site,
                time: t,
                values: kernel.evaluate(&phases),
            })
            .collect())
    }
}

fn mode_sum(phases: &[Complex64], row_a: &[f64], row_b: &[f64]) -> Complex64 {
    phases
        .iter()
        .zip(row_a.iter().zip(row_b))
        .fold(Complex64::new(0.0, 0.0), |acc, (&p, (&a, &b))| {
            acc + p * (a * b)
        })
}

/// Precomputed weights `S(j,k)·S(site,k)` for one column of `G`, so the
/// column at many times costs one phase vector plus `N²` multiply-adds each.
///
/// Evaluations are bit-identical to the corresponding column of
/// [`SpectralDecomposition::propagator_matrix`].
#[derive(Debug, Clone)]
pub struct ColumnKernel {
    site: usize,
    num_cavities: usize,
    weights: Vec<f64>,
}

impl ColumnKernel {
    pub fn new(decomp: &SpectralDecomposition, site: usize) -> Result<Self> {
        decomp.lattice.check_site(site)?;
        let n = decomp.num_modes();
        let source = decomp.transform_row(site);
        let mut weights = Vec::with_capacity(n * n);
        for j in 1..=n {
            weights.extend(
                decomp
                    .transform_row(j)
                    .iter()
                    .zip(source)
                    .map(|(&a, &b)| a * b),
            );
        }
        Ok(Self {
            site,
            num_cavities: n,
            weights,
        })
    }

    pub fn site(&self) -> usize {
        self.site
    }

    /// `G_{j,site}` for `j = 1..=N` given the phases from
    /// [`SpectralDecomposition::mode_phases`].
    pub fn evaluate(&self, phases: &[Complex64]) -> Vec<Complex64> {
        self.weights
            .chunks_exact(self.num_cavities)
            .map(|w| {
                phases
                    .iter()
                    .zip(w)
                    .fold(Complex64::new(0.0, 0.0), |acc, (&p, &x)| acc + p * x)
            })
            .collect()
    }
}

/// `G_{jl}(t)` for every pair of cavities.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorMatrix {
    time: f64,
    num_cavities: usize,
    entries: Vec<Complex64>,
}

impl PropagatorMatrix {
    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn num_cavities(&self) -> usize {
        self.num_cavities
    }

    /// `G_{jl}`, 1-based.
    pub fn at(&self, j: usize, l: usize) -> Complex64 {
        self.entries[(j - 1) * self.num_cavities + (l - 1)]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// `max_{j,j'} |Σ_l G_jl conj(G_j'l) − δ_jj'|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.num_cavities;
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for jp in 0..n {
                let dot: Complex64 = (0..n)
                    .map(|l| self.entries[j * n + l] * self.entries[jp * n + l].conj())
                    .sum();
                let target = if j == jp { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }
}

/// One column `G_{·,site}(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorColumn {
    site: usize,
    time: f64,
    values: Vec<Complex64>,
}

impl PropagatorColumn {
    pub fn site(&self) -> usize {
        self.site
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// `G_{j,site}` at index `j-1`.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `G_{j,site}`, 1-based.
    pub fn at(&self, j: usize) -> Complex64 {
        self.values[j - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use nalgebra::DMatrix;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn chain(n: usize, omega: f64, hopping: f64) -> SpectralDecomposition {
        decompose(&LatticeSpec::new(n, omega, hopping).unwrap()).unwrap()
    }

    /// Numerical eigenvalues of the one-photon tridiagonal Hamiltonian,
    /// sorted descending to line up with Ω_k.
    fn tridiagonal_eigenvalues(n: usize, omega: f64, hopping: f64) -> Vec<f64> {
        let h = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                omega
            } else if i.abs_diff(j) == 1 {
                hopping
            } else {
                0.0
            }
        });
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    #[test]
    fn single_site_sine_transform_formula() {
        // N = 1 is rejected as a lattice; the formula itself gives 1.
        assert!((2.0f64 / 2.0).sqrt() * (PI / 2.0).sin() == 1.0);
        assert!(matches!(
            LatticeSpec::new(1, 1.0, 1.0),
            Err(Error::InvalidLattice(_))
        ));
    }

    #[test]
    fn midband_frequency_is_bare_mode() {
        let d = chain(3, 1.0, 0.5);
        assert!((d.frequencies()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn band_edges_for_29_cavities_match_tridiagonal_eigenvalues() {
        let d = chain(29, 1.0, 1.0);
        let expected_top = 1.0 + 2.0 * (PI / 30.0).cos();
        assert!((d.frequencies()[0] - expected_top).abs() < 1e-14);
        assert!((d.frequencies()[0] - 2.989_043).abs() < 1e-5);
        assert!((d.frequencies()[28] + 0.989_043).abs() < 1e-5);

        let numeric = tridiagonal_eigenvalues(29, 1.0, 1.0);
        for (a, b) in d.frequencies().iter().zip(&numeric) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn two_site_transform() {
        let d = chain(2, 1.0, 1.0);
        let eps = 1e-15;
        assert!((d.transform_entry(1, 1) - FRAC_1_SQRT_2).abs() < eps);
        assert!((d.transform_entry(1, 2) - FRAC_1_SQRT_2).abs() < eps);
        assert!((d.transform_entry(2, 1) - FRAC_1_SQRT_2).abs() < eps);
        assert!((d.transform_entry(2, 2) + FRAC_1_SQRT_2).abs() < eps);
    }

    #[test]
    fn transform_is_symmetric_and_involutory() {
        for n in [2, 3, 7, 29, 64] {
            let d = chain(n, 1.0, 0.3);
            for j in 1..=n {
                for l in 1..=n {
                    assert_eq!(d.transform_entry(j, l), d.transform_entry(l, j));
                    let ss: f64 = (1..=n)
                        .map(|k| d.transform_entry(j, k) * d.transform_entry(k, l))
                        .sum();
                    let target = if j == l { 1.0 } else { 0.0 };
                    assert!((ss - target).abs() < 1e-12, "n={n} ({j},{l}) {ss}");
                }
            }
        }
    }

    #[test]
    fn frequencies_decrease_inside_band() {
        let d = chain(17, 2.0, 0.4);
        for w in d.frequencies().windows(2) {
            assert!(w[1] < w[0]);
        }
        for &w in d.frequencies() {
            assert!((2.0 - 0.8..=2.0 + 0.8).contains(&w));
        }
    }

    #[test]
    fn propagator_at_zero_is_identity() {
        let d = chain(29, 1.0, 1.0);
        let g = d.propagator_matrix(0.0);
        for j in 1..=29 {
            for l in 1..=29 {
                let target = if j == l { 1.0 } else { 0.0 };
                assert!((g.at(j, l) - target).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn two_site_closed_form_propagator() {
        let d = chain(2, 1.0, 1.0);
        let i = Complex64::i();
        for t in [0.3, 1.0, FRAC_PI_2, 7.25, 40.0] {
            let g = d.propagator_matrix(t);
            let phase = (-i * t).exp();
            let g11 = phase * t.cos();
            let g12 = -i * phase * t.sin();
            assert!((g.at(1, 1) - g11).norm() < 1e-14);
            assert!((g.at(1, 2) - g12).norm() < 1e-14);
            assert!((g.at(2, 2) - g11).norm() < 1e-14);
        }
    }

    #[test]
    fn two_site_column_at_quarter_period() {
        let d = chain(2, 1.0, 1.0);
        let cols = d.propagator_columns(FRAC_PI_2, &[1]).unwrap();
        assert!(cols[0].at(1).norm() < 1e-15);
        assert!((cols[0].at(2) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn columns_match_full_matrix() {
        let d = chain(29, 1.0, 1.0);
        let g = d.propagator_matrix(83.57);
        let cols = d.propagator_columns(83.57, &[15, 16, 1, 29]).unwrap();
        for col in &cols {
            for j in 1..=29 {
                assert!((col.at(j) - g.at(j, col.site())).norm() < 1e-14);
            }
        }
        let at_zero = d.propagator_columns(0.0, &[15]).unwrap();
        for j in 1..=29 {
            let target = if j == 15 { 1.0 } else { 0.0 };
            assert!((at_zero[0].at(j) - target).norm() < 1e-12);
        }
    }

    #[test]
    fn out_of_range_columns_are_rejected() {
        let d = chain(5, 1.0, 1.0);
        assert!(matches!(
            d.propagator_columns(1.0, &[2, 6]),
            Err(Error::SiteOutOfRange { site: 6, .. })
        ));
        assert!(d.propagator_columns(1.0, &[0]).is_err());
    }

    #[test]
    fn negative_time_inverts_evolution() {
        let d = chain(9, 1.0, 0.7);
        let forward = d.propagator_matrix(3.1);
        let backward = d.propagator_matrix(-3.1);
        for j in 1..=9 {
            for l in 1..=9 {
                let prod: Complex64 = (1..=9).map(|m| backward.at(j, m) * forward.at(m, l)).sum();
                let target = if j == l { 1.0 } else { 0.0 };
                assert!((prod - target).norm() < 1e-12);
            }
        }
    }
}
