//! Seeded fixtures shared by the benchmarks.

use epdiff_core::dynamics::{EPDiffState, SWState};
use epdiff_core::spectral::random_smooth;
use epdiff_core::{Grid, OperatorParams, VectorField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn square_grid(n: usize) -> Grid {
    Grid::new_2d(n, n, 2.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI).expect("valid grid")
}

fn velocity(grid: &Grid, rng: &mut ChaCha8Rng, scale: f64) -> VectorField {
    let components = (0..grid.dim())
        .map(|_| random_smooth(grid, 4, rng).scale(scale))
        .collect();
    VectorField::new(components).expect("one component per axis")
}

/// Smooth shallow-water state with mean depth 1.
pub fn sw_state(grid: &Grid, seed: u64) -> SWState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = velocity(grid, &mut rng, 0.1);
    let eta = random_smooth(grid, 4, &mut rng).scale(0.1).map(|v| 1.0 + v);
    SWState::new(u, eta, 9.81).expect("positive depth")
}

pub fn epdiff_state(grid: &Grid, alpha: f64, nu: f64, seed: u64) -> EPDiffState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let op = OperatorParams::new(alpha, nu, grid.dim()).expect("valid operator");
    EPDiffState::new(velocity(grid, &mut rng, 1.0), op).expect("matching dimension")
}
