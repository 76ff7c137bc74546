//! Scenery flow of the model measures.
//!
//! A window is `S_t` of a measure centered at a point of its support,
//! conditioned on `[-1, 1]` and binned. Windows of `eta_{omega,u,a}` are
//! never produced by magnifying a fixed sample cloud: after each full roof
//! the focus moves to the shifted coding, so the sample budget is spent at
//! the current scale. [`build_extended_chain`] and [`sample_Q`] give the
//! suspension distribution the orbits equidistribute for, and
//! [`spectrum_obstruction`] decides the arithmetic condition on its
//! eigenvalues.

mod chain;
mod flow;
mod functionals;
mod spectrum;
mod window;

pub use chain::{build_extended_chain, ChainState, ExtendedChain};
pub use flow::{
    coded_window, q_window, rescale_model_for_gap, sample_Q, sample_suspension, scenery_orbit, suspension_state_law,
    CodedFocus, OrbitPlan, SceneryOrbit, SuspensionPoint, WindowParams, DEFAULT_MARGIN,
};
pub use functionals::{
    compare_scenery_to_Q, evaluate_panel, panel_mean, panel_names, ComparisonReport, FunctionalEntry, PANEL_SIZE,
    PANEL_VERSION,
};
pub use spectrum::{spectrum_obstruction, Independence, SpectrumVerdict};
pub use window::{bin_index, center_and_window, WindowMeasure, DEFAULT_BINS};

#[cfg(test)]
pub(crate) mod tests {
    use alloc::vec;
    use alloc::vec::Vec;
    use std::sync::Arc;

    use num_rational::BigRational;
    use rand_core::RngCore;

    use super::*;
    use crate::algebraics::{FieldElem, NumberField};
    use crate::model::{build_model, Model, OmegaWord};
    use crate::rng::{self, Label};
    use crate::selfsimilar::{SimilarityIFS, SimilarityMap};
    use crate::stats::ks_two_sample;

    pub(crate) fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn rational_ifs(maps: &[((i64, i64), (i64, i64))]) -> SimilarityIFS {
        let k = NumberField::rationals();
        let e = |x: (i64, i64)| FieldElem::from_rational(&k, q(x.0, x.1));
        SimilarityIFS::uniform(maps.iter().map(|&(r, t)| SimilarityMap::new(e(r), e(t)).unwrap()).collect()).unwrap()
    }

    pub(crate) fn cantor() -> SimilarityIFS {
        rational_ifs(&[((1, 3), (0, 1)), ((1, 3), (2, 3))])
    }

    pub(crate) fn flipped_cantor() -> SimilarityIFS {
        rational_ifs(&[((1, 3), (0, 1)), ((-1, 3), (1, 1))])
    }

    pub(crate) fn mixed() -> SimilarityIFS {
        rational_ifs(&[((1, 2), (0, 1)), ((1, 3), (2, 3))])
    }

    pub(crate) fn halves() -> SimilarityIFS {
        rational_ifs(&[((1, 2), (0, 1)), ((1, 2), (1, 2))])
    }

    /// Ratio `sqrt2 / 4`, so `|r|^2 = 2^-3`.
    pub(crate) fn sqrt_eighth() -> SimilarityIFS {
        let k: Arc<NumberField> = NumberField::named("sqrt2").unwrap();
        let r = FieldElem::parse(&k, "sqrt2/4").unwrap();
        let maps = vec![
            SimilarityMap::new(r.clone(), FieldElem::parse(&k, "0").unwrap()).unwrap(),
            SimilarityMap::new(r, FieldElem::parse(&k, "1 - sqrt2/4").unwrap()).unwrap(),
        ];
        SimilarityIFS::uniform(maps).unwrap()
    }

    fn rescaled(ifs: &SimilarityIFS) -> Model {
        let m = build_model(ifs, 8).unwrap();
        rescale_model_for_gap(&m, &q(1, 2)).unwrap().0
    }

    #[test]
    fn rescale_cantor() {
        let m = build_model(&cantor(), 8).unwrap();
        let (r, c) = rescale_model_for_gap(&m, &q(1, 2)).unwrap();
        assert_eq!(c.as_rational().unwrap(), &q(15, 2));
        let g = crate::model::verify_ssc(&r).unwrap().min_gap.unwrap();
        assert_eq!(g.as_rational().unwrap(), &q(5, 2));
        let (h0, h1) = (m.hull(), r.hull());
        assert_eq!(&h1.lo, &(&h0.lo * &c));
        assert_eq!(&h1.hi, &(&h0.hi * &c));
        let (_, c2) = rescale_model_for_gap(&r, &q(1, 2)).unwrap();
        assert_eq!(c2, FieldElem::one(r.field()));
    }

    /// The shift identity: zooming by one roof equals the window of the
    /// shifted coding at time 0, reflected when the first ratio is negative.
    fn shift_identity(ifs: SimilarityIFS, starts: u64, samples: usize) -> f64 {
        let m = rescaled(&ifs);
        let p = WindowParams { samples, ..WindowParams::for_model(&m) };
        let mut worst = 0.0f64;
        for s in 0..starts {
            let w = OmegaWord::streamed(90 + s, 0).symbols(&m, p.depth + 80);
            let u = crate::model::draw_digits(&m, &w, 90 + s, 0);
            let flip = rng::stream(90, Label::Test, s).next_u64() & 1 == 1;
            let i0 = &m.indices()[w[0]];
            let f0 = CodedFocus { omega: &w, digits: &u, flip };
            let zoomed = coded_window(&m, f0, i0.roof(), &p, &mut rng::stream(s, Label::Window, 0)).unwrap();
            let f1 = CodedFocus { omega: &w[1..], digits: &u[1..], flip: flip ^ (i0.ratio_f64() < 0.0) };
            let fresh = coded_window(&m, f1, 0.0, &p, &mut rng::stream(s, Label::Window, 1)).unwrap();
            worst = worst.max(zoomed.l1_distance(&fresh).unwrap());
        }
        worst
    }

    #[test]
    fn shift_identity_preserving() {
        let d = shift_identity(cantor(), 5, 20_000);
        assert!(d < 0.05, "{d}");
    }

    #[test]
    fn shift_identity_reversing() {
        let d = shift_identity(flipped_cantor(), 5, 20_000);
        assert!(d < 0.05, "{d}");
    }

    #[test]
    fn window_matches_direct_magnification() {
        // coded windows against S_t of a sampled eta cloud at small t
        let m = rescaled(&mixed());
        let p = WindowParams { samples: 50_000, ..WindowParams::for_model(&m) };
        let w = OmegaWord::streamed(4, 0).symbols(&m, p.depth + 40);
        let u = crate::model::draw_digits(&m, &w, 4, 0);
        let (x, _) = crate::model::coded_value(&m, &w, &u);
        let scale = m.hull().diam().to_f64() / 2.0;
        let t = 0.7;
        let coded = coded_window(&m, CodedFocus { omega: &w, digits: &u, flip: false }, t, &WindowParams { radius: scale, ..p }, &mut rng::stream(4, Label::Test, 1)).unwrap();
        let cloud: Vec<(f64, f64)> = (0..200_000u64)
            .map(|k| {
                let d = crate::model::draw_digits(&m, &w, 5, k);
                (crate::model::coded_value(&m, &w, &d).0 / scale, 1.0)
            })
            .collect();
        let direct = center_and_window(&cloud, x / scale, t, DEFAULT_BINS).unwrap();
        let d = coded.ks_distance(&direct).unwrap();
        assert!(d < 0.02, "{d}");
    }

    #[test]
    fn orbit_is_seed_deterministic() {
        let m = rescaled(&flipped_cantor());
        let p = WindowParams { samples: 512, ..WindowParams::for_model(&m) };
        let a = scenery_orbit(&m, &OmegaWord::streamed(1, 2), true, 5.0, 0.5, &p, 3).unwrap();
        let b = scenery_orbit(&m, &OmegaWord::streamed(1, 2), true, 5.0, 0.5, &p, 3).unwrap();
        assert_eq!(a.windows, b.windows);
        assert_eq!(a.times.len(), 11);
        assert!(a.windows.iter().all(|w| w.zero_in_support()));
    }

    #[test]
    fn plan_windows_in_any_order() {
        let m = rescaled(&mixed());
        let p = WindowParams { samples: 256, ..WindowParams::for_model(&m) };
        let plan = OrbitPlan::new(&m, &OmegaWord::streamed(8, 0), false, 4.0, 1.0, &p, 8);
        let fwd: Vec<_> = (0..plan.len()).map(|j| plan.window(&m, j, &p).unwrap()).collect();
        let rev: Vec<_> = (0..plan.len()).rev().map(|j| plan.window(&m, j, &p).unwrap()).collect();
        assert!(fwd.iter().eq(rev.iter().rev()));
    }

    #[test]
    fn single_map_gives_point_mass() {
        let k = NumberField::rationals();
        let e = |a, b| FieldElem::from_rational(&k, q(a, b));
        let idx = crate::model::ModelIndex::new("0", e(1, 3), vec![e(1, 5)], vec![q(1, 1)], q(1, 1)).unwrap();
        let m = Model::new(vec![idx]).unwrap();
        let chain = build_extended_chain(&m).unwrap();
        let p = WindowParams { samples: 64, ..WindowParams::for_model(&m) };
        for w in sample_Q(&m, &chain, 20, &p, 1).unwrap() {
            assert_eq!(w, WindowMeasure::point_mass(DEFAULT_BINS));
        }
    }

    #[test]
    fn suspension_time_uniform_for_constant_roof() {
        let m = build_model(&cantor(), 8).unwrap();
        let c = build_extended_chain(&m).unwrap();
        let roof = m.indices()[0].roof();
        let ts: Vec<f64> = sample_suspension(&c, 10_000, 5).iter().map(|p| p.t).collect();
        let mut r = rng::stream(5, Label::Test, 0);
        let us: Vec<f64> = (0..10_000).map(|_| roof * rng::unit_f64(r.next_u64())).collect();
        assert!(ks_two_sample(&ts, &us) < 0.02);
        assert!(ts.iter().all(|&t| (0.0..roof).contains(&t)));
    }

    #[test]
    fn suspension_state_marginal() {
        let m = build_model(&mixed(), 8).unwrap();
        let c = build_extended_chain(&m).unwrap();
        let law = suspension_state_law(&c);
        let n = 100_000;
        let mut counts = vec![0usize; c.len()];
        for p in sample_suspension(&c, n, 6) {
            counts[p.state] += 1;
        }
        for (k, l) in counts.iter().zip(&law) {
            assert!((*k as f64 / n as f64 - l).abs() < 0.01 * l.max(0.01), "{k} {l}");
        }
    }

    #[test]
    fn mean_roof_matches_chain() {
        for ifs in [cantor(), flipped_cantor(), mixed()] {
            let m = build_model(&ifs, 8).unwrap();
            let c = build_extended_chain(&m).unwrap();
            assert!((c.mean_roof() - m.mean_roof()).abs() < 1e-12);
        }
    }

    #[test]
    fn q_panel_seed_invariant() {
        let m = rescaled(&cantor());
        let c = build_extended_chain(&m).unwrap();
        let p = WindowParams { samples: 256, bins: 64, ..WindowParams::for_model(&m) };
        let n = 2000;
        let a = sample_Q(&m, &c, n, &p, 1).unwrap();
        let b = sample_Q(&m, &c, n, &p, 2).unwrap();
        // central mass at 1/4 is a bounded functional; 3 sigma with sigma <= 1/(2 sqrt n) per side
        let (ma, mb) = (panel_mean(&a), panel_mean(&b));
        let tol = 3.0 * (0.5f64 / (n as f64).sqrt()) * 2f64.sqrt();
        for k in [10usize, 11, 12, 29] {
            assert!((ma[k] - mb[k]).abs() < tol, "{k}: {} {}", ma[k], mb[k]);
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]

        #[test]
        fn bins_in_range(v in -1.0f64..=1.0, b in 1usize..512) {
            proptest::prop_assert!(bin_index(v, b) < 2 * b);
        }

        #[test]
        fn windows_are_probability_measures(seed in 0u64..1000, t in 0.0f64..3.0, flip: bool) {
            let m = rescaled(&flipped_cantor());
            let p = WindowParams { samples: 256, bins: 32, ..WindowParams::for_model(&m) };
            let w = OmegaWord::streamed(seed, 0).symbols(&m, p.depth + 40);
            let u = crate::model::draw_digits(&m, &w, seed, 0);
            let win = coded_window(&m, CodedFocus { omega: &w, digits: &u, flip }, t, &p, &mut rng::stream(seed, Label::Test, 0)).unwrap();
            let total: f64 = win.masses().iter().sum();
            proptest::prop_assert!((total - 1.0).abs() < 1e-12);
            proptest::prop_assert!(win.zero_in_support());
            proptest::prop_assert_eq!(win.reflect().reflect(), win.clone());
            // flipping the focus reflects the window exactly, except that a
            // sample at 0 stays in bin B instead of moving to B - 1
            let mirrored = coded_window(&m, CodedFocus { omega: &w, digits: &u, flip: !flip }, t, &p, &mut rng::stream(seed, Label::Test, 0)).unwrap();
            let r = win.reflect();
            for (j, (a, b)) in mirrored.masses().iter().zip(r.masses()).enumerate() {
                if j + 1 != p.bins && j != p.bins {
                    proptest::prop_assert!((a - b).abs() < 1e-9);
                }
            }
        }

        #[test]
        fn rescale_scales_hull(n in 1i64..20, d in 1i64..20) {
            let m = build_model(&mixed(), 8).unwrap();
            let c = FieldElem::from_rational(m.field(), q(n, d));
            let r = m.rescaled(&c).unwrap();
            proptest::prop_assert_eq!(&r.hull().lo, &(&m.hull().lo * &c));
            proptest::prop_assert_eq!(&r.hull().hi, &(&m.hull().hi * &c));
        }
    }

    #[test]
    fn nontrivial_against_point_mass() {
        let m = rescaled(&cantor());
        let c = build_extended_chain(&m).unwrap();
        let p = WindowParams { samples: 512, ..WindowParams::for_model(&m) };
        let qs = sample_Q(&m, &c, 200, &p, 3).unwrap();
        let r = compare_scenery_to_Q(&qs, &[WindowMeasure::point_mass(DEFAULT_BINS)]).unwrap();
        assert!(r.max_distance > 0.2, "{}", r.max_distance);
    }
}
