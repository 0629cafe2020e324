//! Browser bindings for the coupled-cavity demo page.
//!
//! Three operations are exposed: the normal-mode spectrum, the coincidence
//! matrix at one instant, and delocalization curves for several input
//! concurrences. Results cross the boundary as flat `Float64Array`s.

use wasm_bindgen::prelude::*;

pub mod compute {
    use cca_core::{
        correlation_matrix, decompose, theta_for_concurrence, tpd_series, uniform_time_grid,
        Branch, LatticeSpec, NoonInput, Result,
    };

    /// `Ω_k` for `k = 1..=N`.
    pub fn spectrum(num_cavities: usize, omega: f64, hopping: f64) -> Result<Vec<f64>> {
        let lattice = LatticeSpec::new(num_cavities, omega, hopping)?;
        Ok(decompose(&lattice)?.frequencies().to_vec())
    }

    /// Row-major `P_mn` followed by `η` as the last element.
    #[allow(clippy::too_many_arguments)]
    pub fn correlation(
        num_cavities: usize,
        omega: f64,
        hopping: f64,
        site_r: usize,
        site_s: usize,
        theta: f64,
        t: f64,
    ) -> Result<Vec<f64>> {
        let lattice = LatticeSpec::new(num_cavities, omega, hopping)?;
        let decomp = decompose(&lattice)?;
        let input = NoonInput::new(theta, site_r, site_s)?;
        let p = correlation_matrix(&decomp, &input, t)?;
        let mut out = p.entries().to_vec();
        out.push(p.tpd_degree());
        Ok(out)
    }

    /// `steps + 1` times on `[0, t_max]`, then one `η` series of the same
    /// length per concurrence (low branch), concatenated.
    #[allow(clippy::too_many_arguments)]
    pub fn tpd_curves(
        num_cavities: usize,
        omega: f64,
        hopping: f64,
        site_r: usize,
        site_s: usize,
        concurrences: &[f64],
        t_max: f64,
        steps: usize,
    ) -> Result<Vec<f64>> {
        let lattice = LatticeSpec::new(num_cavities, omega, hopping)?;
        let decomp = decompose(&lattice)?;
        let grid = uniform_time_grid(t_max, steps)?;
        let mut out = grid.clone();
        for &c in concurrences {
            let theta = theta_for_concurrence(c, Branch::Low)?;
            let input = NoonInput::new(theta, site_r, site_s)?;
            out.extend(tpd_series(&decomp, &input, &grid)?.eta);
        }
        Ok(out)
    }
}

fn js_err(e: cca_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn spectrum(num_cavities: usize, omega: f64, hopping: f64) -> Result<Vec<f64>, JsError> {
    compute::spectrum(num_cavities, omega, hopping).map_err(js_err)
}

#[wasm_bindgen]
pub fn correlation(
    num_cavities: usize,
    omega: f64,
    hopping: f64,
    site_r: usize,
    site_s: usize,
    theta: f64,
    t: f64,
) -> Result<Vec<f64>, JsError> {
    compute::correlation(num_cavities, omega, hopping, site_r, site_s, theta, t).map_err(js_err)
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn tpd_curves(
    num_cavities: usize,
    omega: f64,
    hopping: f64,
    site_r: usize,
    site_s: usize,
    concurrences: Vec<f64>,
    t_max: f64,
    steps: usize,
) -> Result<Vec<f64>, JsError> {
    compute::tpd_curves(
        num_cavities,
        omega,
        hopping,
        site_r,
        site_s,
        &concurrences,
        t_max,
        steps,
    )
    .map_err(js_err)
}
