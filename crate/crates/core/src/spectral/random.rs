use std::f64::consts::PI;

use rand::Rng;

use super::{Grid, ScalarField};

/// Random band-limited field: a sum of Fourier modes with signed index
/// `|j| <= max_index` on every axis, uniform random amplitudes and phases,
/// scaled so that its max-norm is 1.
///
/// The mean mode is included. Only the upper half-plane of 2-D modes is drawn
/// since each cosine already covers `±k`.
pub fn random_smooth(grid: &Grid, max_index: i64, rng: &mut impl Rng) -> ScalarField {
    let dim = grid.dim();
    let lengths = grid.lengths().to_vec();
    let mut modes = Vec::new();
    for kx in 0..=max_index {
        let ky_range = if dim == 2 {
            -max_index..=max_index
        } else {
            0..=0
        };
        for ky in ky_range {
            if kx == 0 && ky < 0 {
                continue;
            }
            let amp: f64 = rng.gen_range(-1.0..1.0);
            let phase: f64 = rng.gen_range(0.0..2.0 * PI);
            let wx = 2.0 * PI * kx as f64 / lengths[0];
            let wy = if dim == 2 {
                2.0 * PI * ky as f64 / lengths[1]
            } else {
                0.0
            };
            modes.push((wx, wy, amp, phase));
        }
    }
    let f = ScalarField::from_fn(grid, |x| {
        modes
            .iter()
            .map(|&(wx, wy, a, ph)| a * (wx * x[0] + wy * x[1] + ph).cos())
            .sum()
    });
    let peak = f.max_abs();
    if peak > 0.0 {
        f.scale(1.0 / peak)
    } else {
        f
    }
}
