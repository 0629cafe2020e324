//! Two-photon transport in a uniform coupled-cavity array.
//!
//! Two photons are injected as a NOON-type superposition
//! `sinθ |2⟩_r|0⟩_s + cosθ |0⟩_r|2⟩_s` into a chain of identical cavities
//! with nearest-neighbour hopping. The chain is solved exactly by its
//! sine-transform normal modes ([`spectral`]); the two-photon coincidence
//! matrix `P_mn(t)` and the delocalization degree `η(t)` follow from two
//! columns of the single-photon propagator ([`observables`]). The
//! [`oracle`] module recomputes the same quantities by brute-force
//! evolution in the two-photon Fock sector.
//!
//! Units: ħ = 1; `ω` and `J` share an arbitrary energy unit and times are in
//! its inverse. Cavity indices in the public API are 1-based.

pub mod cli;
pub mod error;
pub mod lattice;
pub mod observables;
pub mod oracle;
pub mod spectral;
pub mod state;

pub use error::{Error, Result};
pub use lattice::LatticeSpec;
pub use observables::{
    correlation_matrix, tpd_degree, tpd_series, uniform_time_grid, CorrelationMatrix,
    NoonPropagation, Pairing, TpdSeries,
};
pub use oracle::{oracle_correlation, TwoPhotonBasis, TwoPhotonHamiltonian, TwoPhotonStateVector};
pub use spectral::{decompose, PropagatorColumn, PropagatorMatrix, SpectralDecomposition};
pub use state::{concurrence, theta_for_concurrence, Branch, NoonInput};

/// Crate version, embedded in every output header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
