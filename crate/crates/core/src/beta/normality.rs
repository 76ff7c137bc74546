//! Digit frequencies and a discrepancy proxy against the Parry measure.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;

use super::orbit::{beta_orbit, OrbitInput, OrbitRecord};
use super::parry::{parry_density, ParryDensity, DEFAULT_TRUNCATION};
use super::pushforward::reduce_mod1;
use super::BetaBase;
use crate::algebraics::FieldElem;
use crate::Result;

/// The CDF difference is evaluated at `j / GRID_POINTS`, `j = 0..=GRID_POINTS`.
pub const GRID_POINTS: usize = 1024;

/// Statistics of one orbit. A small discrepancy is evidence, never a proof,
/// of normality.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalityStat {
    pub n: usize,
    /// Frequency of each digit `0..=floor(beta)` among `d_1 .. d_n`.
    pub digit_freqs: Vec<f64>,
    /// `max_j |#{k < n : x_k < j/1024} / n - F(j/1024)|`, `F` the Parry CDF.
    pub discrepancy: f64,
    pub precision_used: u32,
    /// The input was outside `[0, 1)` and was reduced mod 1.
    pub reduced_mod1: bool,
}

impl NormalityStat {
    /// Statistics of the first `n` steps of `rec`.
    pub fn from_orbit(rec: &OrbitRecord, parry: &ParryDensity, max_digit: u32, n: usize) -> Self {
        assert!(n >= 1 && n <= rec.len());
        let mut counts = vec![0usize; max_digit as usize + 1];
        for &d in &rec.digits()[..n] {
            counts[d as usize] += 1;
        }
        let digit_freqs = counts.iter().map(|&c| c as f64 / n as f64).collect();
        let mut xs: Vec<f64> = rec.orbit()[..n].iter().map(|x| x.to_f64()).collect();
        xs.sort_by(f64::total_cmp);
        let discrepancy = discrepancy_sorted(&xs, |g| parry.cdf(g));
        Self { n, digit_freqs, discrepancy, precision_used: rec.precision_used(), reduced_mod1: false }
    }
}

/// Grid discrepancy of sorted points against `cdf`.
pub(crate) fn discrepancy_sorted(xs: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = xs.len() as f64;
    (0..=GRID_POINTS)
        .map(|j| {
            let g = j as f64 / GRID_POINTS as f64;
            let emp = xs.partition_point(|&x| x < g) as f64 / n;
            (emp - cdf(g)).abs()
        })
        .fold(0.0, f64::max)
}

/// Runs `n` steps from `x` (reduced mod 1 first if needed) and reports the
/// statistics against the Parry density with default truncation.
pub fn normality_statistic(b: &BetaBase, x: &OrbitInput, n: usize) -> Result<NormalityStat> {
    let parry = parry_density(b, DEFAULT_TRUNCATION)?;
    Ok(normality_profile(b, &parry, x, &[n])?.remove(0))
}

/// Statistics of the prefixes of one orbit, one per entry of `lengths`.
pub fn normality_profile(b: &BetaBase, parry: &ParryDensity, x: &OrbitInput, lengths: &[usize]) -> Result<Vec<NormalityStat>> {
    let n = lengths.iter().copied().max().expect("at least one length");
    let (x, reduced) = reduce_input(x)?;
    let rec = beta_orbit(b, &x, n)?;
    Ok(lengths
        .iter()
        .map(|&k| {
            let mut s = NormalityStat::from_orbit(&rec, parry, b.max_digit(), k);
            s.reduced_mod1 = reduced;
            s
        })
        .collect())
}

/// `x mod 1`, and whether it changed.
pub(crate) fn reduce_input(x: &OrbitInput) -> Result<(OrbitInput, bool)> {
    Ok(match x {
        OrbitInput::Exact(e) => {
            let f = e.floor();
            if f == 0.into() {
                (x.clone(), false)
            } else {
                let y = e - &FieldElem::from_rational(e.field(), BigRational::from_integer(f));
                (OrbitInput::Exact(y), true)
            }
        }
        OrbitInput::Ball(r) => {
            let (y, changed) = reduce_mod1(r)?;
            (OrbitInput::Ball(y), changed)
        }
    })
}
