//! Binned probability measures on `[-1, 1]`.

use alloc::vec;
use alloc::vec::Vec;

use crate::{fmath, Error, Result};

/// Default bins per half window (`B`); a window has `2B` bins.
pub const DEFAULT_BINS: usize = 256;

/// `2B` equal bins over `[-1, 1]`; bin `j` covers `[-1 + j/B, -1 + (j+1)/B)`,
/// the last one closed.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowMeasure {
    masses: Vec<f64>,
    zero_in_support: bool,
}

/// Bin of `v` in `[-1, 1]`.
#[inline]
pub fn bin_index(v: f64, half_bins: usize) -> usize {
    let j = fmath::floor((v + 1.0) * half_bins as f64);
    (j.max(0.0) as usize).min(2 * half_bins - 1)
}

impl WindowMeasure {
    /// Normalizes nonnegative bin weights.
    pub fn from_masses(mut masses: Vec<f64>) -> Result<Self> {
        assert!(!masses.is_empty() && masses.len() % 2 == 0, "need 2B bins");
        assert!(masses.iter().all(|&m| m >= 0.0));
        let total: f64 = masses.iter().sum();
        if total <= 0.0 {
            return Err(Error::EmptyWindow);
        }
        for m in &mut masses {
            *m /= total;
        }
        Ok(Self { masses, zero_in_support: false })
    }

    /// The scenery fixed point `delta_0`.
    pub fn point_mass(half_bins: usize) -> Self {
        let mut masses = vec![0.0; 2 * half_bins];
        masses[half_bins] = 1.0;
        Self { masses, zero_in_support: true }
    }

    pub(crate) fn centered(masses: Vec<f64>) -> Result<Self> {
        let mut w = Self::from_masses(masses)?;
        w.zero_in_support = true;
        Ok(w)
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// `B`.
    pub fn half_bins(&self) -> usize {
        self.masses.len() / 2
    }

    /// Set for measures produced by centering at a point of the support.
    pub fn zero_in_support(&self) -> bool {
        self.zero_in_support
    }

    pub fn bin_center(&self, j: usize) -> f64 {
        let b = self.half_bins() as f64;
        -1.0 + (j as f64 + 0.5) / b
    }

    /// Image under `y -> -y`. An involution on bins.
    pub fn reflect(&self) -> Self {
        let mut masses = self.masses.clone();
        masses.reverse();
        Self { masses, zero_in_support: self.zero_in_support }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.masses.len() != other.masses.len() {
            return Err(Error::BinningMismatch { left: self.half_bins(), right: other.half_bins() });
        }
        Ok(())
    }

    pub fn l1_distance(&self, other: &Self) -> Result<f64> {
        self.check(other)?;
        Ok(self.masses.iter().zip(&other.masses).map(|(a, b)| (a - b).abs()).sum())
    }

    /// Largest difference of the cumulative bin masses.
    pub fn ks_distance(&self, other: &Self) -> Result<f64> {
        self.check(other)?;
        let (mut a, mut b, mut d) = (0.0, 0.0, 0.0f64);
        for (x, y) in self.masses.iter().zip(&other.masses) {
            a += x;
            b += y;
            d = d.max((a - b).abs());
        }
        Ok(d)
    }
}

/// `S_t` of the measure `sum w_k delta_{y_k}` centered at `focus`:
/// translate by `-focus`, scale by `e^t`, condition on `[-1, 1]`, bin.
pub fn center_and_window(points: &[(f64, f64)], focus: f64, t: f64, half_bins: usize) -> Result<WindowMeasure> {
    let s = fmath::exp(t);
    let mut masses = vec![0.0; 2 * half_bins];
    for &(y, w) in points {
        let v = (y - focus) * s;
        if (-1.0..=1.0).contains(&v) {
            masses[bin_index(v, half_bins)] += w;
        }
    }
    WindowMeasure::centered(masses)
}
