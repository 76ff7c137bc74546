//! A fixed panel of bounded test functionals on window measures, and the
//! comparison of orbit time averages with `Q` averages.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use super::window::WindowMeasure;
use crate::{fmath, Error, Result};

/// Panel identifier, echoed in reports.
pub const PANEL_VERSION: &str = "v1";

/// Number of functionals in the panel.
pub const PANEL_SIZE: usize = 32;

/// Evaluates functional `k` against bin centers.
fn integrate(w: &WindowMeasure, f: impl Fn(f64) -> f64) -> f64 {
    w.masses().iter().enumerate().map(|(j, m)| m * f(w.bin_center(j))).sum()
}

/// Mass of bins whose centers lie in `[a, b]`.
fn mass_in(w: &WindowMeasure, a: f64, b: f64) -> f64 {
    integrate(w, |y| if y >= a && y <= b { 1.0 } else { 0.0 })
}

/// Names of the panel, in evaluation order.
pub fn panel_names() -> Vec<String> {
    let mut n = vec![String::from("mass")];
    n.extend((1..=8).map(|k| format!("moment_{k}")));
    n.extend((1..=7).map(|k| format!("central_mass_2^-{k}")));
    n.extend((1..=8).map(|k| format!("cos_{k}")));
    n.extend((1..=4).map(|k| format!("sin_{k}")));
    n.extend(["symmetry_1", "symmetry_1/2", "symmetry_1/4"].map(String::from));
    n.push(String::from("reflection_defect"));
    n
}

/// All 32 functionals of `w`; each lies in `[-1, 1]`.
pub fn evaluate_panel(w: &WindowMeasure) -> Vec<f64> {
    let pi = core::f64::consts::PI;
    let mut out = Vec::with_capacity(PANEL_SIZE);
    out.push(w.masses().iter().sum());
    for k in 1..=8 {
        out.push(integrate(w, |y| fmath::powi(y, k)));
    }
    for k in 1..=7 {
        let h = fmath::powi(0.5, k);
        out.push(mass_in(w, -h, h));
    }
    for k in 1..=8 {
        out.push(integrate(w, |y| fmath::cos(pi * k as f64 * y)));
    }
    for k in 1..=4 {
        out.push(integrate(w, |y| fmath::sin(pi * k as f64 * y)));
    }
    for h in [1.0, 0.5, 0.25] {
        out.push(mass_in(w, 0.0, h) - mass_in(w, -h, 0.0));
    }
    out.push(w.l1_distance(&w.reflect()).expect("same binning") / 2.0);
    out
}

/// One row of a comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalEntry {
    pub name: String,
    pub orbit_mean: f64,
    pub q_mean: f64,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub panel: &'static str,
    pub entries: Vec<FunctionalEntry>,
    pub max_distance: f64,
}

/// Panel averages over a list of windows.
pub fn panel_mean(ws: &[WindowMeasure]) -> Vec<f64> {
    let mut acc = vec![0.0; PANEL_SIZE];
    for w in ws {
        for (a, v) in acc.iter_mut().zip(evaluate_panel(w)) {
            *a += v;
        }
    }
    acc.iter().map(|a| a / ws.len() as f64).collect()
}

/// Max over the panel of `|time average - Q average|`.
#[allow(non_snake_case)]
pub fn compare_scenery_to_Q(orbit: &[WindowMeasure], q: &[WindowMeasure]) -> Result<ComparisonReport> {
    let first = orbit.first().or(q.first()).ok_or(Error::EmptyWindow)?;
    if let Some(w) = orbit.iter().chain(q).find(|w| w.half_bins() != first.half_bins()) {
        return Err(Error::BinningMismatch { left: first.half_bins(), right: w.half_bins() });
    }
    if orbit.is_empty() || q.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let (a, b) = (panel_mean(orbit), panel_mean(q));
    let entries: Vec<FunctionalEntry> = panel_names()
        .into_iter()
        .zip(a.iter().zip(&b))
        .map(|(name, (&x, &y))| FunctionalEntry { name, orbit_mean: x, q_mean: y, distance: (x - y).abs() })
        .collect();
    let max_distance = entries.iter().map(|e| e.distance).fold(0.0, f64::max);
    Ok(ComparisonReport { panel: PANEL_VERSION, entries, max_distance })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(b: usize) -> WindowMeasure {
        WindowMeasure::from_masses(vec![1.0; 2 * b]).unwrap()
    }

    #[test]
    fn panel_shape() {
        assert_eq!(panel_names().len(), PANEL_SIZE);
        let v = evaluate_panel(&uniform(64));
        assert_eq!(v.len(), PANEL_SIZE);
        assert!(v.iter().all(|x| x.abs() <= 1.0 + 1e-12));
    }

    #[test]
    fn point_mass_values() {
        let v = evaluate_panel(&WindowMeasure::point_mass(256));
        // the mass sits in the bin just right of 0
        assert!((v[1] - 1.0 / 512.0).abs() < 1e-12);
        assert!(v[9..16].iter().all(|&m| m == 1.0));
        assert_eq!(v[31], 1.0);
    }

    #[test]
    fn constant_functional_exact() {
        let r = compare_scenery_to_Q(&[uniform(8), WindowMeasure::point_mass(8)], &[uniform(8)]).unwrap();
        assert_eq!(r.entries[0].distance, 0.0);
    }

    #[test]
    fn binning_checked() {
        let e = compare_scenery_to_Q(&[uniform(8)], &[uniform(16)]).unwrap_err();
        assert_eq!(e, Error::BinningMismatch { left: 8, right: 16 });
    }

    #[test]
    fn uniform_is_symmetric() {
        let v = evaluate_panel(&uniform(256));
        for k in [1usize, 3, 5, 7] {
            assert!(v[k].abs() < 1e-12);
        }
        assert!(v[28..].iter().all(|x| x.abs() < 1e-12));
    }
}
