//! Canned parameter sets for the two headline numerical experiments: the
//! exponential-decay table of the coarse-grained disagreement weight, and
//! the macrofraction sweep of the central-spin model. Shared by the CLI and
//! the acceptance suite so both run identical grids.

use crate::coarsegrain::cg_avector;
use crate::error::Result;
use crate::fit::{fit_exponential, FitResult};
use crate::prob::AVector;
use crate::spinstar::{lcg_sweep, thermal_pointer, SweepRow};

/// Near-maximally-mixed trace vector `{1/d + 0.1, rest uniform}` used for the
/// decay-table runs.
pub fn decay_table_avector(d_s: usize) -> Result<AVector> {
    let d = d_s as f64;
    let mut v = vec![1.0 / d - 0.1 / (d - 1.0); d_s];
    v[0] = 1.0 / d + 0.1;
    AVector::with_tolerance(v, 1e-12)
}

/// Macrofraction grid for the decay table. The first entry is always
/// `l_cg = 1` (excluded from the fit); the rest sample a fixed residue
/// `l_cg = 1 (mod d_S)` so the tie-assignment phase of the multinomial
/// grouping stays constant along the grid (for two outcomes this is the
/// classic odd-`l` grid 3, 5, ..., 121).
pub fn decay_table_grid(d_s: usize) -> Vec<u32> {
    let mut grid = vec![1u32];
    if d_s == 2 {
        grid.extend((3..=121).step_by(2));
    } else {
        let d = d_s as u32;
        grid.extend((1..=60 / d).map(|k| 1 + k * d));
    }
    grid
}

/// `(l_cg, 1 - a_0^(l_cg))` along the decay-table grid.
pub fn decay_table_dataset(d_s: usize) -> Result<Vec<(f64, f64)>> {
    let a = decay_table_avector(d_s)?;
    decay_table_grid(d_s)
        .into_iter()
        .map(|l| {
            let cg = cg_avector(&a, l)?;
            Ok((l as f64, 1.0 - cg[0]))
        })
        .collect()
}

/// Exponential fit of the decay table for one outcome count, first point
/// (`l_cg = 1`) excluded.
pub fn decay_table_fit(d_s: usize) -> Result<FitResult> {
    fit_exponential(&decay_table_dataset(d_s)?, 1)
}

/// Uniform grid of `steps` points on `[0, t_max]`, both endpoints included.
pub fn uniform_grid(t_max: f64, steps: usize) -> Vec<f64> {
    assert!(steps >= 2);
    (0..steps)
        .map(|i| t_max * i as f64 / (steps - 1) as f64)
        .collect()
}

/// Configuration of the macrofraction sweep of the central-spin model.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub n_total: u64,
    pub beta: f64,
    pub p0: f64,
    pub g: f64,
    pub t_max: f64,
    pub t_steps: usize,
    pub lcg_list: Vec<u32>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_total: 1024,
            beta: 1.0,
            p0: 0.2,
            g: 1.0,
            t_max: 6.0,
            t_steps: 240,
            lcg_list: vec![1, 2, 4, 8, 16, 32, 64],
        }
    }
}

/// Run the sweep.
pub fn spin_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let pt = thermal_pointer(cfg.beta)?;
    let grid = uniform_grid(cfg.t_max, cfg.t_steps);
    lcg_sweep(&pt, cfg.n_total, cfg.p0, cfg.g, &grid, &cfg.lcg_list)
}
