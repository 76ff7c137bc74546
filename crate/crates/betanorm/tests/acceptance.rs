//! Acceptance criteria, one PASS/FAIL line each. Runs in release-like
//! settings under `cargo test`; exits nonzero when any criterion fails.

use std::collections::VecDeque;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use betanorm::config::SceneryArgs;
use betanorm::formats::Source;
use betanorm::run::{certified_depth, disintegration_ks, point_statistics, scenery_run};
use betanorm_core::algebraics::FieldElem;
use betanorm_core::beta::{beta_orbit, parry_density, BetaBase, OrbitInput};
use betanorm_core::model::{draw_digits, Model, OmegaWord};
use betanorm_core::rng::{self, Label};
use betanorm_core::scenery::{
    build_extended_chain, coded_window, rescale_model_for_gap, spectrum_obstruction, CodedFocus, Independence,
    SpectrumVerdict, WindowMeasure, WindowParams,
};
use betanorm_core::Error;
use num_rational::BigRational;
use num_traits::{One, Zero};

type Outcome = Result<String, String>;
/// Name, check and runtime limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn model(name: &str) -> Model {
    Source::load(name).unwrap().default_model().unwrap()
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn parry_golden() -> Outcome {
    let p = parry_density(&BetaBase::golden(), 256).map_err(|e| e.to_string())?;
    let s5 = 5f64.sqrt();
    let want = [(5.0 + 3.0 * s5) / 10.0, (5.0 + s5) / 10.0];
    let bp = p.breakpoints_f64();
    let inv_phi = (s5 - 1.0) / 2.0;
    let err = p.values().iter().zip(want).map(|(v, w)| (v - w).abs()).fold(0.0, f64::max);
    let shape = p.values().len() == 2 && bp.len() == 3 && (bp[1] - inv_phi).abs() < 1e-15;
    ensure(shape && err < 1e-9, format!("values {:?}, max error {err:.1e}", p.values()))
}

fn disintegration() -> Outcome {
    let mut ds = Vec::new();
    for name in ["cantor", "mixed"] {
        let src = Source::load(name).unwrap();
        let ifs = src.ifs().unwrap();
        let m = src.default_model().unwrap();
        // 40 maps of ratio <= 1/2 put the sampling error below 1e-12
        ds.push(disintegration_ks(ifs, &m, 100_000, 40, 0));
    }
    ensure(ds.iter().all(|&d| d < 0.01), format!("KS cantor {:.4}, mixed {:.4} (< 0.01)", ds[0], ds[1]))
}

/// L1 distance with the two bins next to 0 merged: an atom exactly at 0
/// sits in bin `B` and its reflection in bin `B - 1`.
fn l1_merged_center(a: &WindowMeasure, b: &WindowMeasure) -> f64 {
    let (a, b) = (a.masses(), b.masses());
    let c = a.len() / 2;
    let outer: f64 = (0..a.len()).filter(|&j| j != c - 1 && j != c).map(|j| (a[j] - b[j]).abs()).sum();
    outer + (a[c - 1] + a[c] - b[c - 1] - b[c]).abs()
}

/// Worst L1 distance between the window zoomed by one roof and the fresh
/// window of the shifted coding, and between flipped and reflected windows.
fn shift_identity(name: &str) -> (f64, f64) {
    let m = rescale_model_for_gap(&model(name), &q(1, 2)).unwrap().0;
    let p = WindowParams { samples: 100_000, ..WindowParams::for_model(&m) };
    let (mut shift, mut reflect) = (0.0f64, 0.0f64);
    for s in 0..50u64 {
        let w = OmegaWord::streamed(1000 + s, 0).symbols(&m, p.depth + 80);
        let u = draw_digits(&m, &w, 1000 + s, 0);
        let flip = rng::value_at(1000, Label::Test, s, 0) & 1 == 1;
        let i0 = &m.indices()[w[0]];
        let win = |f: CodedFocus<'_>, t: f64, k: u64| coded_window(&m, f, t, &p, &mut rng::stream(s, Label::Window, k)).unwrap();
        let zoomed = win(CodedFocus { omega: &w, digits: &u, flip }, i0.roof(), 0);
        let f1 = CodedFocus { omega: &w[1..], digits: &u[1..], flip: flip ^ (i0.ratio_f64() < 0.0) };
        shift = shift.max(zoomed.l1_distance(&win(f1, 0.0, 1)).unwrap());
        let other = win(CodedFocus { omega: &w, digits: &u, flip: !flip }, i0.roof(), 2);
        reflect = reflect.max(l1_merged_center(&zoomed, &other.reflect()));
    }
    (shift, reflect)
}

fn self_similarity() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["cantor", "flipped-cantor", "mixed"] {
        let (s, r) = shift_identity(name);
        ok &= s < 0.02 && r < 0.02;
        parts.push(format!("{name} shift {s:.4} reflect {r:.4}"));
    }
    ensure(ok, format!("{} (< 0.02)", parts.join(", ")))
}

/// Longest shortest path in the transition graph, by breadth-first search.
fn graph_diameter(t: &[Vec<BigRational>]) -> Option<usize> {
    let n = t.len();
    let mut worst = 0;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::from([s]);
        dist[s] = 0;
        while let Some(i) = queue.pop_front() {
            for j in (0..n).filter(|&j| !t[i][j].is_zero()) {
                if dist[j] == usize::MAX {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        // returning to s itself needs at least one step
        let back = (0..n).filter(|&i| dist[i] != usize::MAX && !t[i][s].is_zero()).map(|i| dist[i] + 1).min()?;
        worst = worst.max(back).max(*dist.iter().max().unwrap());
    }
    (worst != usize::MAX).then_some(worst)
}

fn markov_chain() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["flipped-cantor", "mixed", "cantor"] {
        let c = build_extended_chain(&model(name)).map_err(|e| e.to_string())?;
        let (pi, t) = (c.stationary(), c.transition());
        let pi_p: Vec<BigRational> =
            (0..pi.len()).map(|j| pi.iter().zip(t).fold(BigRational::zero(), |acc, (p, row)| acc + p * &row[j])).collect();
        let rows_ok = t.iter().all(|r| r.iter().fold(BigRational::zero(), |a, x| a + x).is_one());
        let stationary = pi_p == pi && rows_ok && pi.iter().fold(BigRational::zero(), |a, x| a + x).is_one();
        let half: BigRational = c.states().iter().zip(pi).filter(|(s, _)| s.flip == Some(true)).map(|(_, p)| p.clone()).sum();
        let marginal = !c.is_extended() || half == q(1, 2);
        let diam = graph_diameter(t);
        ok &= stationary && marginal && diam.is_some_and(|d| d <= 2) && diam == c.diameter();
        parts.push(format!("{name}: {} states, piP=pi {stationary}, a-marginal 1/2 {marginal}, diameter {diam:?}", c.len()));
    }
    ensure(ok, parts.join("; "))
}

fn cassels_schmidt() -> Outcome {
    let m = model("cantor");
    let (b2, b3) = (BetaBase::integer(2).unwrap(), BetaBase::integer(3).unwrap());
    // the same points serve both bases, so certify for the larger one
    let (depth, prec) = certified_depth(&m, &b3, 2000);
    let s2 = point_statistics(&m, &b2, 100, &[2000], depth, prec, 0).map_err(|e| e.to_string())?;
    let s3 = point_statistics(&m, &b3, 100, &[2000], depth, prec, 0).map_err(|e| e.to_string())?;
    let f1 = s2.iter().map(|s| s[0].digit_freqs[1]).sum::<f64>() / 100.0;
    let f3 = s3.iter().map(|s| s[0].digit_freqs[1]).fold(0.0, f64::max);
    ensure(
        (0.48..=0.52).contains(&f1) && f3 < 0.01,
        format!("base 2 mean digit-1 freq {f1:.4} (in [0.48, 0.52]); base 3 max digit-1 freq {f3} (< 0.01)"),
    )
}

fn golden_normality() -> Outcome {
    let m = model("cantor");
    let b = BetaBase::golden();
    let lengths = [250, 500, 1000, 2000];
    let (depth, prec) = certified_depth(&m, &b, 2000);
    let stats = point_statistics(&m, &b, 100, &lengths, depth, prec, 0).map_err(|e| e.to_string())?;
    let mut means = Vec::new();
    let mut ses = Vec::new();
    for i in 0..lengths.len() {
        let d: Vec<f64> = stats.iter().map(|s| s[i].discrepancy).collect();
        let mean = d.iter().sum::<f64>() / d.len() as f64;
        let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (d.len() - 1) as f64;
        means.push(mean);
        ses.push((var / d.len() as f64).sqrt());
    }
    // each step may rise by at most two standard errors of the later mean
    let monotone = (1..means.len()).all(|i| means[i] <= means[i - 1] + 2.0 * ses[i]);
    let fmt: Vec<String> = lengths.iter().zip(&means).map(|(l, d)| format!("{l}: {d:.4}")).collect();
    ensure(means[3] < 0.05 && monotone, format!("mean discrepancy {} (< 0.05 at 2000, non-increasing within 2 SE)", fmt.join(", ")))
}

fn scenery() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["cantor", "flipped-cantor"] {
        let a = SceneryArgs { source: name.into(), ..Default::default() };
        let r = scenery_run(&model(name), &a, 0).map_err(|e| e.to_string())?;
        let (d, c) = (r.comparison.max_distance, r.contrast.max_distance);
        ok &= d < a.tolerance && c > a.contrast;
        parts.push(format!("{name} vs Q {d:.4} (< 0.05), vs delta_0 {c:.3} (> 0.2)"));
    }
    ensure(ok, format!("seed 0: {}", parts.join("; ")))
}

fn spectrum_table() -> Outcome {
    let phi = || BetaBase::golden();
    let int = |n| BetaBase::integer(n).unwrap();
    let rows: [(&str, BetaBase, Option<Independence>); 5] = [
        ("cantor", int(2), Some(Independence::Certified)),
        ("cantor", int(3), None),
        ("halves", phi(), Some(Independence::Certified)),
        ("sqrt-eighth", int(2), None),
        ("sqrt-eighth", phi(), Some(Independence::UpTo(64))),
    ];
    let mut bad = Vec::new();
    for (name, b, want) in rows {
        let got = match spectrum_obstruction(&model(name), &b, 64).map_err(|e| e.to_string())? {
            SpectrumVerdict::NormalityImplied { independence, .. } => Some(independence),
            SpectrumVerdict::Inconclusive(_) => None,
        };
        if got != want {
            bad.push(format!("{name}/{}: {got:?} != {want:?}", b.label()));
        }
    }
    let non_pisot: BetaBase = "x^2 - 3".parse().unwrap();
    if !matches!(spectrum_obstruction(&model("cantor"), &non_pisot, 64), Err(Error::NotPisot)) {
        bad.push("x^2 - 3 not rejected".into());
    }
    ensure(bad.is_empty(), if bad.is_empty() { "6 of 6 rows match".into() } else { bad.join("; ") })
}

/// A uniform rational in `[0, 1)` with denominator `2^20 + 7`.
fn unit_rational(seed: u64, k: u64, pos: u64) -> BigRational {
    let d = (1i64 << 20) + 7;
    q((rng::value_at(seed, Label::Test, k, pos) % d as u64) as i64, d)
}

/// The first `n` greedy digits by exact field arithmetic.
fn exact_digits(b: &BetaBase, x: &FieldElem, n: usize) -> Vec<u32> {
    let beta = match b.field().is_rational() {
        true => FieldElem::from_i64(b.field(), i64::from(b.max_digit()) + 1),
        false => FieldElem::generator(b.field()),
    };
    let mut x = x.clone();
    (0..n)
        .map(|_| {
            let y = &beta * &x;
            let d = y.floor();
            x = &y - &FieldElem::from_rational(b.field(), BigRational::from_integer(d.clone()));
            u32::try_from(d).unwrap()
        })
        .collect()
}

fn precision_contract() -> Outcome {
    let bases = [BetaBase::golden(), BetaBase::named("tribonacci").unwrap(), BetaBase::integer(3).unwrap()];
    // digit words forbidden by the Parry condition
    let forbidden = ["11", "111", ""];
    let bound = BigRational::from_float(2f64.powi(-64)).unwrap();
    let (mut worst, mut reported, mut wrong) = (0.0f64, 0usize, Vec::new());
    for k in 0..1000u64 {
        let bi = (k % 3) as usize;
        let b = &bases[bi];
        let f = b.field();
        // a random field element reduced into [0, 1)
        let c: Vec<BigRational> = (0..f.degree() as u64).map(|i| unit_rational(9, k, i) * q(7, 1)).collect();
        let e = FieldElem::from_coeffs(f, c);
        let x = &e - &FieldElem::from_rational(f, BigRational::from_integer(e.floor()));
        match beta_orbit(b, &OrbitInput::Exact(x.clone()), 1000) {
            Ok(rec) => {
                let err = rec.reconstruction_error(b);
                worst = worst.max(num_traits::ToPrimitive::to_f64(&err).unwrap_or(f64::INFINITY));
                let word: String = rec.digits().iter().map(|d| char::from_digit(*d, 10).unwrap()).collect();
                let admissible = forbidden[bi].is_empty() || !word.contains(forbidden[bi]);
                let checked = exact_digits(b, &x, 1000) == rec.digits();
                if err >= bound || !admissible || !checked || rec.digits().iter().any(|&d| d > b.max_digit()) {
                    wrong.push(k);
                }
            }
            Err(Error::OrbitUndecidable { .. }) => reported += 1,
            Err(e) => return Err(format!("input {k}: {e}")),
        }
    }
    ensure(
        wrong.is_empty(),
        format!(
            "1000 exact inputs over phi, tribonacci, 3 at n = 1000: max relative error {worst:.1e} (< 2^-64), {reported} reported ambiguities, {} silent errors, all replayed by exact field arithmetic",
            wrong.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("parry density of the golden mean", parry_golden, 1),
        ("disintegration sampling", disintegration, 30),
        ("dynamical self-similarity", self_similarity, 120),
        ("extended Markov chain", markov_chain, 1),
        ("bases 2 and 3 on the Cantor measure", cassels_schmidt, 120),
        ("golden base normality", golden_normality, 300),
        ("scenery equidistribution", scenery, 300),
        ("spectrum obstruction table", spectrum_table, 1),
        ("precision contract", precision_contract, 60),
    ];
    // `cargo test --test acceptance -- 3 9` runs only criteria 3 and 9
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (i, (name, f, limit)) in criteria.into_iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let out = f();
        let el = start.elapsed();
        let in_time = el <= Duration::from_secs(limit);
        let (ok, detail) = match out {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        failed += usize::from(!ok);
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("{verdict} [{}] {name}: {detail} ({:.2}s, limit {limit}s)", i + 1, el.as_secs_f64());
    }
    println!("{} of {ran} criteria passed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
