use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// A periodic tensor-product grid on `[0, L_0) x [0, L_1)`.
///
/// Cloning is cheap: the point layout, wavenumber tables and FFT plans are
/// shared behind an `Arc`.
#[derive(Clone)]
pub struct Grid(Arc<GridInner>);

struct GridInner {
    sizes: Vec<usize>,
    lengths: Vec<f64>,
    spacings: Vec<f64>,
    wavenumbers: Vec<Vec<f64>>,
    /// Per-axis derivative multipliers: the wavenumber, with the Nyquist entry zeroed.
    deriv_wavenumbers: Vec<Vec<f64>>,
    /// |k|² per flat mode index.
    k_sq: Vec<f64>,
    /// 2/3-rule mask per flat mode index.
    retained: Vec<bool>,
    plans: Vec<AxisPlan>,
}

#[derive(Clone)]
pub(crate) struct AxisPlan {
    pub(crate) forward: Arc<dyn Fft<f64>>,
    pub(crate) inverse: Arc<dyn Fft<f64>>,
}

/// Signed DFT frequency of lattice position `j` on an axis of `n` points:
/// `0, 1, …, n/2 - 1, -n/2, …, -1`.
pub(crate) fn signed_index(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

impl Grid {
    /// Builds a grid with `sizes[i]` points spanning `lengths[i]` on each axis.
    pub fn new(dim: usize, sizes: &[usize], lengths: &[f64]) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidGrid(format!(
                "dimension must be 1 or 2, got {dim}"
            )));
        }
        if sizes.len() != dim || lengths.len() != dim {
            return Err(Error::InvalidGrid(format!(
                "expected {dim} sizes and lengths, got {} and {}",
                sizes.len(),
                lengths.len()
            )));
        }
        for (axis, &n) in sizes.iter().enumerate() {
            if n < 4 || n % 2 != 0 {
                return Err(Error::InvalidGrid(format!(
                    "axis {axis}: size must be even and at least 4, got {n}"
                )));
            }
        }
        for (axis, &l) in lengths.iter().enumerate() {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidGrid(format!(
                    "axis {axis}: length must be positive, got {l}"
                )));
            }
        }

        let spacings: Vec<f64> = sizes
            .iter()
            .zip(lengths)
            .map(|(&n, &l)| l / n as f64)
            .collect();
        let wavenumbers: Vec<Vec<f64>> = sizes
            .iter()
            .zip(lengths)
            .map(|(&n, &l)| {
                (0..n)
                    .map(|j| 2.0 * PI * signed_index(j, n) as f64 / l)
                    .collect()
            })
            .collect();
        let deriv_wavenumbers = sizes
            .iter()
            .zip(&wavenumbers)
            .map(|(&n, ks)| {
                let mut ks = ks.clone();
                ks[n / 2] = 0.0;
                ks
            })
            .collect();

        let total: usize = sizes.iter().product();
        let mut k_sq = Vec::with_capacity(total);
        let mut retained = Vec::with_capacity(total);
        let cutoffs: Vec<i64> = sizes.iter().map(|&n| (n / 3) as i64).collect();
        for flat in 0..total {
            let idx = unflatten(flat, sizes);
            let mut ksq = 0.0;
            let mut keep = true;
            for axis in 0..dim {
                let k = wavenumbers[axis][idx[axis]];
                ksq += k * k;
                keep &= signed_index(idx[axis], sizes[axis]).abs() <= cutoffs[axis];
            }
            k_sq.push(ksq);
            retained.push(keep);
        }

        let mut planner = FftPlanner::new();
        let plans = sizes
            .iter()
            .map(|&n| AxisPlan {
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            })
            .collect();

        Ok(Grid(Arc::new(GridInner {
            sizes: sizes.to_vec(),
            lengths: lengths.to_vec(),
            spacings,
            wavenumbers,
            deriv_wavenumbers,
            k_sq,
            retained,
            plans,
        })))
    }

    pub fn new_1d(n: usize, length: f64) -> Result<Self> {
        Self::new(1, &[n], &[length])
    }

    pub fn new_2d(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        Self::new(2, &[nx, ny], &[lx, ly])
    }

    pub fn dim(&self) -> usize {
        self.0.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0.sizes
    }

    pub fn lengths(&self) -> &[f64] {
        &self.0.lengths
    }

    pub fn spacings(&self) -> &[f64] {
        &self.0.spacings
    }

    /// Angular wavenumbers `2π·j/L` along `axis`, in FFT order.
    pub fn wavenumbers(&self, axis: usize) -> &[f64] {
        &self.0.wavenumbers[axis]
    }

    pub(crate) fn deriv_wavenumbers(&self, axis: usize) -> &[f64] {
        &self.0.deriv_wavenumbers[axis]
    }

    /// Squared wavenumber magnitude of every mode, in flat spectral order.
    pub fn k_sq(&self) -> &[f64] {
        &self.0.k_sq
    }

    pub(crate) fn retained(&self) -> &[bool] {
        &self.0.retained
    }

    pub(crate) fn plan(&self, axis: usize) -> &AxisPlan {
        &self.0.plans[axis]
    }

    /// Total number of grid points.
    pub fn len(&self) -> usize {
        self.0.k_sq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Measure of one grid cell.
    pub fn cell_volume(&self) -> f64 {
        self.0.spacings.iter().product()
    }

    /// Measure of the whole box.
    pub fn volume(&self) -> f64 {
        self.0.lengths.iter().product()
    }

    /// Coordinates `j·dx` of the points along `axis`.
    pub fn axis_coordinates(&self, axis: usize) -> Vec<f64> {
        let dx = self.0.spacings[axis];
        (0..self.0.sizes[axis]).map(|j| j as f64 * dx).collect()
    }

    /// Per-axis lattice index of the point with the given flat index.
    pub fn multi_index(&self, flat: usize) -> [usize; 2] {
        unflatten(flat, &self.0.sizes)
    }

    /// Physical coordinates of the point with the given flat index. Unused
    /// trailing entries are zero.
    pub fn point(&self, flat: usize) -> [f64; 2] {
        let idx = self.multi_index(flat);
        let mut x = [0.0; 2];
        for axis in 0..self.dim() {
            x[axis] = idx[axis] as f64 * self.0.spacings[axis];
        }
        x
    }

    /// Minimum-image distance between two positions along `axis`.
    pub fn periodic_offset(&self, axis: usize, a: f64, b: f64) -> f64 {
        let l = self.0.lengths[axis];
        let d = (a - b).rem_euclid(l);
        d.min(l - d)
    }
}

fn unflatten(flat: usize, sizes: &[usize]) -> [usize; 2] {
    match sizes.len() {
        1 => [flat, 0],
        _ => [flat / sizes[1], flat % sizes[1]],
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.sizes == other.0.sizes && self.0.lengths == other.0.lengths)
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("sizes", &self.0.sizes)
            .field("lengths", &self.0.lengths)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_of_eight_points_on_two_pi() {
        let g = Grid::new_1d(8, 2.0 * PI).unwrap();
        assert!((g.spacings()[0] - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn wavenumbers_follow_dft_order() {
        let g = Grid::new_1d(4, 2.0 * PI).unwrap();
        let k = g.wavenumbers(0);
        let expected = [0.0, 1.0, -2.0, -1.0];
        for (a, b) in k.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14, "{k:?}");
        }
    }

    #[test]
    fn two_d_grid_layout() {
        let g = Grid::new(2, &[4, 8], &[1.0, 2.0]).unwrap();
        assert_eq!(g.len(), 32);
        let k0 = g.wavenumbers(0);
        assert!((k0[1] - 2.0 * PI).abs() < 1e-14);
        assert!((k0[2] + 4.0 * PI).abs() < 1e-14);
        let k1 = g.wavenumbers(1);
        assert!((k1[1] - PI).abs() < 1e-14);
        assert_eq!(g.multi_index(9), [1, 1]);
        for axis in 0..2 {
            let rel = (g.spacings()[axis] * g.sizes()[axis] as f64 - g.lengths()[axis]).abs()
                / g.lengths()[axis];
            assert!(rel < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_sizes_and_lengths() {
        assert!(Grid::new_1d(7, 1.0).is_err());
        assert!(Grid::new_1d(2, 1.0).is_err());
        assert!(Grid::new_1d(8, 0.0).is_err());
        assert!(Grid::new_1d(8, -1.0).is_err());
        assert!(Grid::new(3, &[4, 4, 4], &[1.0, 1.0, 1.0]).is_err());
        assert!(Grid::new(2, &[4], &[1.0]).is_err());
    }

    #[test]
    fn dealias_mask_keeps_low_third() {
        let g = Grid::new_1d(12, 1.0).unwrap();
        let kept: Vec<i64> = (0..12)
            .filter(|&j| g.retained()[j])
            .map(|j| signed_index(j, 12))
            .collect();
        assert_eq!(kept, vec![0, 1, 2, 3, 4, -4, -3, -2, -1]);
    }

    #[test]
    fn periodic_offset_wraps() {
        let g = Grid::new_1d(8, 10.0).unwrap();
        assert!((g.periodic_offset(0, 9.5, 0.5) - 1.0).abs() < 1e-14);
        assert!((g.periodic_offset(0, 2.0, 7.0) - 5.0).abs() < 1e-14);
    }
}
