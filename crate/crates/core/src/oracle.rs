//! Brute-force reference for the closed-form pipeline.
//!
//! The two-photon sector of the chain Hamiltonian is built explicitly in
//! the occupation basis, diagonalized densely, and `⟨a_n† a_m† a_m a_n⟩` is
//! read off the evolved amplitudes. Nothing here uses the sine transform or
//! the Green's function, so agreement with [`crate::observables`] is an
//! independent check.
//!
//! Basis label `(m, n)` with `m ≤ n` is the normalized state with one photon
//! in each of `m` and `n`, or `(a_m†)²/√2 |0⟩` when `m = n`. Bosonic `√2`
//! factors therefore appear in the hopping elements touching a doubly
//! occupied label, and as the factor 2 on `P_mm`.

use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::observables::CorrelationMatrix;
use crate::state::NoonInput;

/// Largest two-photon sector dimension built densely.
pub const MAX_DIMENSION: usize = 5000;

const NORM_TOLERANCE: f64 = 1e-12;
const EVOLVED_NORM_TOLERANCE: f64 = 1e-10;

/// Labels `(m, n)`, `1 ≤ m ≤ n ≤ N`, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoPhotonBasis {
    num_sites: usize,
    labels: Vec<(usize, usize)>,
}

impl TwoPhotonBasis {
    pub fn new(num_sites: usize) -> Self {
        let labels = (1..=num_sites)
            .flat_map(|m| (m..=num_sites).map(move |n| (m, n)))
            .collect();
        Self { num_sites, labels }
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    /// `N(N+1)/2`.
    pub fn dimension(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[(usize, usize)] {
        &self.labels
    }

    /// Position of the label for photons at `a` and `b`, in either order.
    pub fn index_of(&self, a: usize, b: usize) -> Option<usize> {
        let (m, n) = if a <= b { (a, b) } else { (b, a) };
        if m == 0 || n > self.num_sites {
            return None;
        }
        // labels with first site < m come first: Σ_{i<m} (N - i + 1)
        let before = (m - 1) * (2 * self.num_sites + 2 - m) / 2;
        Some(before + (n - m))
    }
}

/// Normalized amplitudes over a [`TwoPhotonBasis`], tagged with the
/// evolution time they correspond to.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonStateVector {
    basis: TwoPhotonBasis,
    amplitudes: Vec<Complex64>,
    time: f64,
}

impl TwoPhotonStateVector {
    pub fn new(basis: TwoPhotonBasis, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.dimension() {
            return Err(Error::DimensionMismatch {
                expected: basis.dimension(),
                found: amplitudes.len(),
            });
        }
        let norm = norm_sqr(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            basis,
            amplitudes,
            time: 0.0,
        })
    }

    /// `sinθ |2⟩_r + cosθ |2⟩_s` on an `num_sites`-cavity chain.
    pub fn noon(num_sites: usize, input: &NoonInput) -> Result<Self> {
        let basis = TwoPhotonBasis::new(num_sites);
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); basis.dimension()];
        for site in [input.site_r(), input.site_s()] {
            if site > num_sites {
                return Err(Error::SiteOutOfRange {
                    site,
                    num_cavities: num_sites,
                });
            }
        }
        let r = basis.index_of(input.site_r(), input.site_r()).unwrap();
        let s = basis.index_of(input.site_s(), input.site_s()).unwrap();
        amplitudes[r] = Complex64::new(input.amplitude_r(), 0.0);
        amplitudes[s] = Complex64::new(input.amplitude_s(), 0.0);
        Self::new(basis, amplitudes)
    }

    pub fn basis(&self) -> &TwoPhotonBasis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn amplitude(&self, m: usize, n: usize) -> Option<Complex64> {
        self.basis.index_of(m, n).map(|i| self.amplitudes[i])
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }
}

fn norm_sqr(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum()
}

/// Dense two-photon Hamiltonian with a lazily cached eigendecomposition.
#[derive(Debug)]
pub struct TwoPhotonHamiltonian {
    basis: TwoPhotonBasis,
    matrix: DMatrix<f64>,
    eigen: OnceLock<SymmetricEigen<f64, nalgebra::Dyn>>,
}

impl TwoPhotonHamiltonian {
    pub fn build(lattice: &LatticeSpec) -> Result<Self> {
        let n = lattice.num_cavities();
        let dimension = n * (n + 1) / 2;
        if dimension > MAX_DIMENSION {
            return Err(Error::SizeGuard {
                dimension,
                limit: MAX_DIMENSION,
            });
        }
        let basis = TwoPhotonBasis::new(n);
        let mut matrix = DMatrix::zeros(dimension, dimension);
        let hopping = lattice.hopping();

        for (col, &(m, k)) in basis.labels().iter().enumerate() {
            matrix[(col, col)] = 2.0 * lattice.omega();
            let mut occupation = vec![0u32; n + 1];
            occupation[m] += 1;
            occupation[k] += 1;

            // a_to† a_from for every bond, both directions
            for bond in 1..n {
                for (from, to) in [(bond + 1, bond), (bond, bond + 1)] {
                    if occupation[from] == 0 {
                        continue;
                    }
                    let n_from = occupation[from] as f64;
                    let n_to = occupation[to] as f64;
                    let factor = (n_from * (n_to + 1.0)).sqrt();
                    let (a, b) = if from == m { (to, k) } else { (m, to) };
                    let row = basis.index_of(a, b).expect("hop stays in the chain");
                    matrix[(row, col)] += hopping * factor;
                }
            }
        }

        Ok(Self {
            basis,
            matrix,
            eigen: OnceLock::new(),
        })
    }

    pub fn basis(&self) -> &TwoPhotonBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    fn eigen(&self) -> &SymmetricEigen<f64, nalgebra::Dyn> {
        self.eigen
            .get_or_init(|| SymmetricEigen::new(self.matrix.clone()))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// `e^{-iHt} |state⟩`.
    pub fn evolve(&self, state: &TwoPhotonStateVector, t: f64) -> Result<TwoPhotonStateVector> {
        let dim = self.basis.dimension();
        if state.basis != self.basis {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: state.basis.dimension(),
            });
        }
        let eigen = self.eigen();
        let vectors = &eigen.eigenvectors;

        let mut modes = vec![Complex64::new(0.0, 0.0); dim];
        for (k, mode) in modes.iter_mut().enumerate() {
            let overlap: Complex64 = vectors
                .column(k)
                .iter()
                .zip(&state.amplitudes)
                .map(|(&v, &a)| a * v)
                .sum();
            *mode = overlap * Complex64::from_polar(1.0, -eigen.eigenvalues[k] * t);
        }

        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        for (k, &mode) in modes.iter().enumerate() {
            for (amp, &v) in amplitudes.iter_mut().zip(vectors.column(k).iter()) {
                *amp += mode * v;
            }
        }

        Ok(TwoPhotonStateVector {
            basis: self.basis.clone(),
            amplitudes,
            time: state.time + t,
        })
    }
}

/// `P_mn = ⟨a_n† a_m† a_m a_n⟩` read directly from the amplitudes.
pub fn oracle_correlation(state: &TwoPhotonStateVector) -> Result<CorrelationMatrix> {
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > EVOLVED_NORM_TOLERANCE {
        return Err(Error::NotNormalized(norm));
    }
    let n = state.basis.num_sites();
    let mut entries = vec![0.0; n * n];
    for (&(m, k), amp) in state.basis.labels().iter().zip(&state.amplitudes) {
        let p = amp.norm_sqr();
        if m == k {
            entries[(m - 1) * n + (m - 1)] = 2.0 * p;
        } else {
            entries[(m - 1) * n + (k - 1)] = p;
            entries[(k - 1) * n + (m - 1)] = p;
        }
    }
    CorrelationMatrix::from_entries(state.time, n, entries)
}

fn one_photon_hamiltonian(lattice: &LatticeSpec) -> DMatrix<f64> {
    let n = lattice.num_cavities();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            lattice.omega()
        } else if i.abs_diff(j) == 1 {
            lattice.hopping()
        } else {
            0.0
        }
    })
}

/// Numerical eigenvalues of the tridiagonal one-photon Hamiltonian, in
/// solver order.
pub fn one_photon_levels(lattice: &LatticeSpec) -> Vec<f64> {
    one_photon_hamiltonian(lattice)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect()
}

/// Single-photon propagator `e^{-iH₁t}` of the chain from a numerical
/// eigendecomposition of the tridiagonal one-photon Hamiltonian; row-major.
pub fn one_photon_propagator(lattice: &LatticeSpec, t: f64) -> Vec<Complex64> {
    let n = lattice.num_cavities();
    let h = one_photon_hamiltonian(lattice);
    let eigen = SymmetricEigen::new(h);
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 0..n {
        let phase = Complex64::from_polar(1.0, -eigen.eigenvalues[k] * t);
        let v = eigen.eigenvectors.column(k);
        for j in 0..n {
            for l in 0..n {
                out[j * n + l] += phase * (v[j] * v[l]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, SQRT_2};

    fn lattice(n: usize, omega: f64, hopping: f64) -> LatticeSpec {
        LatticeSpec::new(n, omega, hopping).unwrap()
    }

    #[test]
    fn basis_labels_and_indexing() {
        let b = TwoPhotonBasis::new(4);
        assert_eq!(b.dimension(), 10);
        assert_eq!(&b.labels()[..5], &[(1, 1), (1, 2), (1, 3), (1, 4), (2, 2)]);
        for w in b.labels().windows(2) {
            assert!(w[0] < w[1]);
        }
        for (i, &(m, n)) in b.labels().iter().enumerate() {
            assert_eq!(b.index_of(m, n), Some(i));
            assert_eq!(b.index_of(n, m), Some(i));
        }
        assert_eq!(b.index_of(0, 2), None);
        assert_eq!(b.index_of(2, 5), None);
    }

    #[test]
    fn two_site_hamiltonian_by_hand() {
        let (w, j) = (1.3, 0.7);
        let h = TwoPhotonHamiltonian::build(&lattice(2, w, j)).unwrap();
        let s = SQRT_2 * j;
        let expected =
            DMatrix::from_row_slice(3, 3, &[2.0 * w, s, 0.0, s, 2.0 * w, s, 0.0, s, 2.0 * w]);
        assert!((h.matrix() - &expected).abs().max() < 1e-15);
        let ev = h.eigenvalues();
        let want = [2.0 * w - 2.0 * j, 2.0 * w, 2.0 * w + 2.0 * j];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_hopping_is_scalar() {
        let h = TwoPhotonHamiltonian::build(&lattice(5, 0.8, 0.0)).unwrap();
        let expected = DMatrix::identity(15, 15) * 1.6;
        assert_eq!(h.matrix(), &expected);
    }

    #[test]
    fn hamiltonian_is_symmetric() {
        let h = TwoPhotonHamiltonian::build(&lattice(6, 1.0, 0.45)).unwrap();
        assert_eq!(h.matrix(), &h.matrix().transpose());
    }

    #[test]
    fn three_site_spectrum_is_sum_of_mode_pairs() {
        use std::f64::consts::PI;
        let (w, j) = (1.0, 0.6);
        let h = TwoPhotonHamiltonian::build(&lattice(3, w, j)).unwrap();
        let modes: Vec<f64> = (1..=3)
            .map(|k| w + 2.0 * j * (PI * k as f64 / 4.0).cos())
            .collect();
        let mut pairs = Vec::new();
        for a in 0..3 {
            for b in a..3 {
                pairs.push(modes[a] + modes[b]);
            }
        }
        pairs.sort_by(f64::total_cmp);
        for (x, y) in h.eigenvalues().iter().zip(&pairs) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn size_guard() {
        // N = 100 gives D = 5050
        assert!(matches!(
            TwoPhotonHamiltonian::build(&lattice(100, 1.0, 1.0)),
            Err(Error::SizeGuard {
                dimension: 5050,
                limit: 5000
            })
        ));
    }

    #[test]
    fn evolve_at_zero_and_without_hopping() {
        let input = NoonInput::new(0.4, 2, 4).unwrap();
        let psi = TwoPhotonStateVector::noon(5, &input).unwrap();

        let h = TwoPhotonHamiltonian::build(&lattice(5, 1.0, 0.8)).unwrap();
        let same = h.evolve(&psi, 0.0).unwrap();
        for (a, b) in same.amplitudes().iter().zip(psi.amplitudes()) {
            assert!((a - b).norm() < 1e-13);
        }

        let frozen = TwoPhotonHamiltonian::build(&lattice(5, 1.0, 0.0)).unwrap();
        let t = 3.7;
        let out = frozen.evolve(&psi, t).unwrap();
        let phase = Complex64::from_polar(1.0, -2.0 * t);
        for (a, b) in out.amplitudes().iter().zip(psi.amplitudes()) {
            assert!((a - b * phase).norm() < 1e-13);
        }
        assert_eq!(out.time(), t);
    }

    #[test]
    fn evolve_checks_dimension() {
        let h = TwoPhotonHamiltonian::build(&lattice(4, 1.0, 1.0)).unwrap();
        let input = NoonInput::new(0.4, 1, 2).unwrap();
        let psi = TwoPhotonStateVector::noon(3, &input).unwrap();
        assert!(matches!(
            h.evolve(&psi, 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn state_construction_validates() {
        let b = TwoPhotonBasis::new(3);
        assert!(matches!(
            TwoPhotonStateVector::new(b.clone(), vec![Complex64::new(1.0, 0.0); 5]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            TwoPhotonStateVector::new(b, vec![Complex64::new(0.5, 0.0); 6]),
            Err(Error::NotNormalized(_))
        ));
        let input = NoonInput::new(0.4, 1, 9).unwrap();
        assert!(TwoPhotonStateVector::noon(5, &input).is_err());
    }

    #[test]
    fn noon_state_correlation_at_start() {
        let input = NoonInput::new(FRAC_PI_4, 2, 3).unwrap();
        let psi = TwoPhotonStateVector::noon(4, &input).unwrap();
        assert!((psi.amplitude(2, 2).unwrap().re - FRAC_1_SQRT_2).abs() < 1e-15);
        let p = oracle_correlation(&psi).unwrap();
        for m in 1..=4 {
            for n in 1..=4 {
                let expected = if m == n && (m == 2 || m == 3) {
                    1.0
                } else {
                    0.0
                };
                assert!((p.get(m, n) - expected).abs() < 1e-15);
            }
        }
        assert!(p.tpd_degree().abs() < 1e-15);
    }

    #[test]
    fn uniform_distinct_pair_state_is_fully_delocalized() {
        let b = TwoPhotonBasis::new(3);
        let amp = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
        let amps = b
            .labels()
            .iter()
            .map(|&(m, n)| if m < n { amp } else { Complex64::new(0.0, 0.0) })
            .collect();
        let p = oracle_correlation(&TwoPhotonStateVector::new(b, amps).unwrap()).unwrap();
        for m in 1..=3 {
            for n in 1..=3 {
                let expected = if m == n { 0.0 } else { 1.0 / 3.0 };
                assert!((p.get(m, n) - expected).abs() < 1e-15);
            }
        }
        assert!((p.tpd_degree() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn oracle_correlation_rejects_unnormalized() {
        let b = TwoPhotonBasis::new(2);
        let state = TwoPhotonStateVector {
            basis: b,
            amplitudes: vec![Complex64::new(0.9, 0.0); 3],
            time: 0.0,
        };
        assert!(matches!(
            oracle_correlation(&state),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn one_photon_propagator_two_sites() {
        let g = one_photon_propagator(&lattice(2, 1.0, 1.0), 0.9);
        let phase = Complex64::from_polar(1.0, -0.9);
        assert!((g[0] - phase * 0.9f64.cos()).norm() < 1e-14);
        assert!((g[1] + Complex64::i() * phase * 0.9f64.sin()).norm() < 1e-14);
    }
}
