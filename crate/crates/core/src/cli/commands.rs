//! The five `cca` subcommands, as functions from a validated config to a
//! table (or verification report).

use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use super::config::{Scenario, ScenarioConfig};
use super::output::{Cell, Table};
use crate::error::Result;
use crate::lattice::LatticeSpec;
use crate::observables::{tpd_series, NoonPropagation, Pairing};
use crate::oracle::{
    one_photon_propagator, oracle_correlation, TwoPhotonHamiltonian, TwoPhotonStateVector,
};
use crate::spectral::decompose;
use crate::state::{concurrence, NoonInput};

fn describe_input(table: &mut Table, scenario: &Scenario) {
    table.note("theta", scenario.input.theta());
    table.note("concurrence", scenario.input.concurrence());
    table.note("t_max_absolute", scenario.t_max);
}

/// `k, frequency` for every normal mode.
pub fn spectrum(config: &ScenarioConfig) -> Result<Table> {
    let scenario = config.resolve()?;
    let decomp = decompose(&scenario.lattice)?;
    let mut table = Table::new("spectrum", vec!["k", "frequency"]);
    for (k, &w) in decomp.frequencies().iter().enumerate() {
        table.push(vec![Cell::Int(k + 1), Cell::Float(w)]);
    }
    Ok(table)
}

/// Full `P_mn` at the end of the configured time window, as row-major
/// `(m, n, p_mn)` triples.
pub fn correlation(config: &ScenarioConfig) -> Result<Table> {
    let scenario = config.resolve()?;
    let decomp = decompose(&scenario.lattice)?;
    let p = NoonPropagation::new(&decomp, scenario.input)?.correlation_at(scenario.t_max)?;

    let mut table = Table::new("correlation", vec!["m", "n", "p_mn"]);
    describe_input(&mut table, &scenario);
    table.note("t", p.time());
    table.note("omega_t", scenario.lattice.omega() * p.time());
    table.note("J_t", scenario.lattice.hopping() * p.time());
    table.note("diagonal_mass", p.diagonal_mass());
    table.note("eta", p.tpd_degree());
    let n = p.num_cavities();
    for m in 1..=n {
        for k in 1..=n {
            table.push(vec![Cell::Int(m), Cell::Int(k), Cell::Float(p.get(m, k))]);
        }
    }
    Ok(table)
}

fn time_cells(lattice: &LatticeSpec, t: f64) -> [Cell; 3] {
    [
        Cell::Float(t),
        Cell::Float(lattice.omega() * t),
        Cell::Float(lattice.hopping() * t),
    ]
}

/// `t, omega_t, J_t, eta` over the configured grid.
pub fn tpd(config: &ScenarioConfig) -> Result<Table> {
    let scenario = config.resolve()?;
    let decomp = decompose(&scenario.lattice)?;
    let series = tpd_series(&decomp, &scenario.input, &scenario.time_grid()?)?;

    let mut table = Table::new("tpd", vec!["t", "omega_t", "J_t", "eta"]);
    describe_input(&mut table, &scenario);
    for (&t, &eta) in series.times.iter().zip(&series.eta) {
        let mut row = time_cells(&scenario.lattice, t).to_vec();
        row.push(Cell::Float(eta));
        table.push(row);
    }
    Ok(table)
}

/// One `η` series per angle, long format, angle-major then time.
pub fn sweep(config: &ScenarioConfig, thetas: &[f64]) -> Result<Table> {
    let scenario = config.resolve()?;
    let decomp = decompose(&scenario.lattice)?;
    let grid = scenario.time_grid()?;
    let inputs = thetas
        .iter()
        .map(|&theta| NoonInput::new(theta, scenario.input.site_r(), scenario.input.site_s()))
        .collect::<Result<Vec<_>>>()?;

    #[cfg(feature = "parallel")]
    let iter = inputs.par_iter();
    #[cfg(not(feature = "parallel"))]
    let iter = inputs.iter();
    let all = iter
        .map(|input| tpd_series(&decomp, input, &grid))
        .collect::<Result<Vec<_>>>()?;

    let mut table = Table::new(
        "sweep",
        vec!["theta", "concurrence", "t", "omega_t", "J_t", "eta"],
    );
    table.note("t_max_absolute", scenario.t_max);
    for (input, series) in inputs.iter().zip(&all) {
        for (&t, &eta) in series.times.iter().zip(&series.eta) {
            let mut row = vec![
                Cell::Float(input.theta()),
                Cell::Float(concurrence(input.theta())),
            ];
            row.extend(time_cells(&scenario.lattice, t));
            row.push(Cell::Float(eta));
            table.push(row);
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Chain length used for the oracle comparison (the configured chain is
    /// shrunk to this when longer).
    pub oracle_sites: usize,
    /// Evenly spaced comparison times over `[0, t_max]`.
    pub samples: usize,
    pub pairing: Pairing,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            oracle_sites: 8,
            samples: 16,
            pairing: Pairing::SinOnR,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub num_cavities: usize,
    pub original_num_cavities: usize,
    pub site_r: usize,
    pub site_s: usize,
    pub theta: f64,
    pub omega: f64,
    pub hopping: f64,
    pub pairing: &'static str,
    pub times: Vec<f64>,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# cca-core {} verify\n# N={} (configured {}), omega={}, hopping={}, r={}, s={}, theta={}, pairing={}, samples={}\n",
            crate::VERSION,
            self.num_cavities,
            self.original_num_cavities,
            self.omega,
            self.hopping,
            self.site_r,
            self.site_s,
            self.theta,
            self.pairing,
            self.times.len(),
        );
        out.push_str(&format!(
            "{:<44} {:>12} {:>10}  status\n",
            "check", "max_dev", "tol"
        ));
        for c in &self.checks {
            out.push_str(&format!(
                "{:<44} {:>12.3e} {:>10.0e}  {}\n",
                c.name,
                c.max_deviation,
                c.tolerance,
                if c.passed { "PASS" } else { "FAIL" }
            ));
        }
        out.push_str(if self.passed() {
            "overall: PASS\n"
        } else {
            "overall: FAIL\n"
        });
        out
    }
}

/// Places two sites inside an `n`-cavity chain, keeping them unchanged when
/// they already fit and otherwise centring them with their separation
/// (capped at `n − 1`) and order preserved.
fn shrink_sites(r: usize, s: usize, n: usize) -> (usize, usize) {
    if r <= n && s <= n {
        return (r, s);
    }
    let gap = r.abs_diff(s).min(n - 1);
    let lo = (n - gap) / 2 + 1;
    let hi = lo + gap;
    if r < s {
        (lo, hi)
    } else {
        (hi, lo)
    }
}

pub const CHECK_TRANSFORM: &str = "sine transform is involutory";
pub const CHECK_FREQUENCIES: &str = "mode frequencies vs numerical eigenvalues";
pub const CHECK_UNITARITY: &str = "propagator unitarity";
pub const CHECK_ONE_PHOTON: &str = "propagator vs one-photon oracle";
pub const CHECK_TWO_PHOTON_SPECTRUM: &str = "two-photon spectrum vs mode-pair sums";
pub const CHECK_ORACLE: &str = "coincidence matrix vs Fock-space oracle";
pub const CHECK_NORMALIZATION: &str = "pair normalization sum P = 2";
pub const CHECK_ETA_START: &str = "eta(0) = 0";
pub const CHECK_ETA_RANGE: &str = "eta within [0, 1]";

/// Runs the closed-form pipeline against the brute-force oracle on the
/// configured scenario, shrunk to at most `oracle_sites` cavities.
pub fn verify(config: &ScenarioConfig, options: &VerifyOptions) -> Result<VerifyReport> {
    let scenario = config.resolve()?;
    let n_full = scenario.lattice.num_cavities();
    let n = n_full.min(options.oracle_sites.max(2));
    let lattice = LatticeSpec::new(n, scenario.lattice.omega(), scenario.lattice.hopping())?;
    let (r, s) = shrink_sites(scenario.input.site_r(), scenario.input.site_s(), n);
    let input = NoonInput::new(scenario.input.theta(), r, s)?;

    let hamiltonian = TwoPhotonHamiltonian::build(&lattice)?;
    let decomp = decompose(&lattice)?;
    let samples = options.samples.max(1);
    let times: Vec<f64> = (0..=samples)
        .map(|i| scenario.t_max * i as f64 / samples as f64)
        .collect();

    let mut checks = Vec::new();
    let mut push = |name, max_deviation: f64, tolerance| {
        checks.push(CheckResult {
            name,
            max_deviation,
            tolerance,
            passed: max_deviation < tolerance,
        })
    };

    let mut transform_dev: f64 = 0.0;
    for j in 1..=n {
        for l in 1..=n {
            let ss: f64 = (1..=n)
                .map(|k| decomp.transform_entry(j, k) * decomp.transform_entry(k, l))
                .sum();
            let target = if j == l { 1.0 } else { 0.0 };
            transform_dev = transform_dev.max((ss - target).abs());
        }
    }
    push(CHECK_TRANSFORM, transform_dev, 1e-12);

    let mut modes = decomp.frequencies().to_vec();
    modes.sort_by(f64::total_cmp);
    let one_photon_levels = {
        let mut ev: Vec<f64> = crate::oracle::one_photon_levels(&lattice);
        ev.sort_by(f64::total_cmp);
        ev
    };
    push(
        CHECK_FREQUENCIES,
        max_abs_diff(&modes, &one_photon_levels),
        1e-10,
    );

    let mut pair_sums = Vec::with_capacity(n * (n + 1) / 2);
    for a in 0..n {
        for b in a..n {
            pair_sums.push(modes[a] + modes[b]);
        }
    }
    pair_sums.sort_by(f64::total_cmp);
    push(
        CHECK_TWO_PHOTON_SPECTRUM,
        max_abs_diff(&pair_sums, &hamiltonian.eigenvalues()),
        1e-10,
    );

    let propagation = NoonPropagation::with_pairing(&decomp, input, options.pairing)?;
    let start = TwoPhotonStateVector::noon(n, &input)?;
    let mut unitarity: f64 = 0.0;
    let mut one_photon: f64 = 0.0;
    let mut oracle_dev: f64 = 0.0;
    let mut normalization: f64 = 0.0;
    let mut eta_range: f64 = 0.0;
    for &t in &times {
        let g = decomp.propagator_matrix(t);
        unitarity = unitarity.max(g.unitarity_deviation());
        let reference = one_photon_propagator(&lattice, t);
        one_photon = one_photon.max(max_complex_diff(g.entries(), &reference));

        let closed = propagation.correlation_at(t)?;
        let brute = oracle_correlation(&hamiltonian.evolve(&start, t)?)?;
        oracle_dev = oracle_dev.max(closed.max_deviation(&brute)?);
        normalization = normalization.max((closed.total() - 2.0).abs());

        let eta = propagation.tpd_degree_at(t);
        eta_range = eta_range.max((-eta).max(eta - 1.0).max(0.0));
    }
    push(CHECK_UNITARITY, unitarity, 1e-10);
    push(CHECK_ONE_PHOTON, one_photon, 1e-9);
    push(CHECK_ORACLE, oracle_dev, 1e-8);
    push(CHECK_NORMALIZATION, normalization, 1e-9);
    push(CHECK_ETA_START, propagation.tpd_degree_at(0.0).abs(), 1e-12);
    push(CHECK_ETA_RANGE, eta_range, 1e-9);

    Ok(VerifyReport {
        num_cavities: n,
        original_num_cavities: n_full,
        site_r: r,
        site_s: s,
        theta: input.theta(),
        omega: lattice.omega(),
        hopping: lattice.hopping(),
        pairing: match options.pairing {
            Pairing::SinOnR => "sin-on-r",
            Pairing::CosOnR => "cos-on-r",
        },
        times,
        checks,
    })
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn max_complex_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
