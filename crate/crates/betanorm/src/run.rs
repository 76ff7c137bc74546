//! One runner per subcommand. Runners are pure apart from the returned
//! files: the same config gives byte-identical output at any thread count.

use anyhow::{bail, Context, Result};
use betanorm_core::algebraics::{isolate_real_roots, multiplicative_relation, FieldElem, Relation};
use betanorm_core::beta::{
    beta_orbit, normality_profile, parry_density, BetaBase, NormalityStat, OrbitInput, OrbitOfOne,
};
use betanorm_core::model::{disintegration_point, sample_disintegration, verify_ssc, Model, OmegaWord};
use betanorm_core::scenery::{
    build_extended_chain, compare_scenery_to_Q, q_window, rescale_model_for_gap, ComparisonReport, OrbitPlan,
    SpectrumVerdict, WindowMeasure, WindowParams, PANEL_VERSION,
};
use betanorm_core::selfsimilar::{attractor_hull, sample_measure, SimilarityIFS};
use betanorm_core::stats::ks_two_sample;
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::json;

use crate::config::*;
use crate::formats::{ModelSpec, Source};
use crate::report::{csv_text, Check, OutputFile, RunOutput, RunReport};

/// Gap margin used when rescaling a model for the scenery flow.
pub const GAP_MARGIN: (i64, i64) = (1, 2);

/// Runs `cfg`. Tolerance failures show up in the report's checks; errors
/// are reserved for bad input and undecidable computations.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let seed = cfg.seed;
    let mut echo = cfg.clone();
    let out = match &mut echo.command {
        Command::Pisot(a) => pisot(a)?,
        Command::Model(a) => model(a, seed)?,
        Command::Sample(a) => sample(a, seed)?,
        Command::Expand(a) => expand(a)?,
        Command::Parry(a) => parry(a, seed)?,
        Command::Normality(a) => normality(a, seed)?,
        Command::Scenery(a) => scenery(a, seed)?,
        Command::Disintegration(a) => disintegration(a, seed)?,
        Command::Spectrum(a) => spectrum(a)?,
    };
    let mut report = RunReport::new(echo, out.results);
    report.checks = out.checks;
    report.warnings = out.warnings;
    Ok(RunOutput { report, files: out.files })
}

#[derive(Default)]
struct Partial {
    results: serde_json::Value,
    checks: Vec<Check>,
    warnings: Vec<String>,
    files: Vec<OutputFile>,
}

impl Partial {
    fn new(results: serde_json::Value) -> Self {
        Self { results, ..Default::default() }
    }
}

fn pisot_warning(b: &BetaBase) -> Vec<String> {
    if b.is_pisot() {
        vec![]
    } else {
        vec![format!("base {} is not a Pisot number", b.label())]
    }
}

fn pisot(a: &PisotArgs) -> Result<Partial> {
    let b: BetaBase = a.value.parse().with_context(|| format!("parsing '{}'", a.value))?;
    let p = b.beta().min_poly();
    let mut conjugates = Vec::new();
    if b.beta().degree() > 1 {
        let iso = isolate_real_roots(p, 64)?;
        let x = b.to_f64();
        for r in &iso.real {
            let v = r.approx();
            // skip beta itself
            if (v - x).abs() > 1e-9 * x.abs().max(1.0) {
                conjugates.push(json!({ "re": v, "im": 0.0, "modulus": v.abs() }));
            }
        }
        for c in &iso.complex {
            let z = c.disk.approx();
            let (lo, hi) = (c.modulus_lo.to_string(), c.modulus_hi.to_string());
            for im in [z.im, -z.im] {
                conjugates.push(json!({ "re": z.re, "im": im, "modulus": z.norm(), "modulus_lo": lo, "modulus_hi": hi }));
            }
        }
    }
    Ok(Partial::new(json!({
        "value": b.label(),
        "approx": b.to_f64(),
        "min_poly": p.to_string(),
        "pisot": b.is_pisot(),
        "conjugates": conjugates,
    })))
}

fn relation_text(r: &Relation) -> String {
    match r {
        Relation::Dependent { p, q } => format!("dependent: |r|^{q} = beta^{p}"),
        Relation::IndependentCertified => "independent (certified)".into(),
        Relation::IndependentUpTo(n) => format!("independent up to exponent {n}"),
    }
}

fn model(a: &ModelArgs, seed: u64) -> Result<Partial> {
    let src = Source::load(&a.source)?;
    let m = src.model(a.max_m)?;
    let ssc = verify_ssc(&m)?;
    let base = a.beta.as_deref().map(str::parse::<BetaBase>).transpose()?;
    let mut indices = Vec::new();
    for (i, idx) in m.indices().iter().enumerate() {
        let relation = match &base {
            Some(b) => Some(relation_text(&multiplicative_relation(&idx.ratio().abs().to_algebraic(), b.beta(), a.search_bound)?)),
            None => None,
        };
        indices.push(json!({
            "label": idx.label(),
            "ratio": idx.ratio().to_string(),
            "maps": idx.len(),
            "q": idx.q().to_string(),
            "orientation_preserving": idx.ratio_f64() > 0.0,
            "gap": ssc.gaps[i].as_ref().map(|g| g.to_string()),
            "relation_to_beta": relation,
        }));
    }
    // the model must reproduce the hull of the attractor it came from
    let mut preserved = serde_json::Value::Null;
    if let Source::Ifs(ifs) = &src {
        let h = attractor_hull(ifs);
        preserved = json!({ "hull": h.lo == m.hull().lo && h.hi == m.hull().hi });
    }
    let spec = ModelSpec::from_model(&m);
    let mut out = Partial::new(json!({
        "indices": indices,
        "separated_pair": spec.separated_pair,
        "min_gap": ssc.min_gap.as_ref().map(|g| g.to_string()),
        "min_gap_approx": ssc.min_gap.as_ref().map(FieldElem::to_f64),
        "mean_roof": m.mean_roof(),
        "preservation": preserved,
    }));
    let gap = ssc.min_gap.as_ref().map_or(f64::INFINITY, FieldElem::to_f64);
    out.checks.push(Check::above("ssc_min_gap", gap, 0.0, seed));
    if let Some(b) = &base {
        out.warnings = pisot_warning(b);
    }
    out.files.push(OutputFile { name: "model.json".into(), contents: serde_json::to_string_pretty(&spec)? + "\n" });
    Ok(out)
}

/// Smallest depth with `max_ratio^d * diam < 1e-12`.
fn auto_depth(max_ratio: f64, diam: f64) -> usize {
    let mut d = 0;
    let mut e = diam;
    while e >= 1e-12 {
        e *= max_ratio;
        d += 1;
    }
    d
}

fn ifs_depth(ifs: &SimilarityIFS) -> usize {
    let h = attractor_hull(ifs);
    auto_depth(ifs.max_ratio(), h.hi_f64() - h.lo_f64())
}

fn sample(a: &mut SampleArgs, seed: u64) -> Result<Partial> {
    let src = Source::load(&a.source)?;
    let ifs = src.ifs()?;
    let depth = *a.depth.get_or_insert_with(|| ifs_depth(ifs));
    let s = sample_measure(ifs, a.count, depth, seed);
    let eb = s.error_bound.to_string();
    let rows = s.points.iter().enumerate().map(|(k, x)| vec![k.to_string(), x.to_string(), eb.clone()]);
    let csv = csv_text(&["point_id".into(), "value".into(), "error_bound".into()], rows)?;
    let mean = s.points.iter().sum::<f64>() / s.points.len().max(1) as f64;
    let mut out = Partial::new(json!({ "count": a.count, "depth": depth, "error_bound": s.error_bound, "mean": mean }));
    out.files.push(OutputFile { name: "sample.csv".into(), contents: csv });
    Ok(out)
}

fn parse_point(b: &BetaBase, s: &str) -> Result<FieldElem> {
    FieldElem::parse(b.field(), s).with_context(|| format!("'{s}' is not an element of Q({})", b.label()))
}

fn expand(a: &ExpandArgs) -> Result<Partial> {
    let b: BetaBase = a.beta.parse()?;
    let x = parse_point(&b, &a.x)?;
    let rec = beta_orbit(&b, &OrbitInput::Exact(x), a.digits)?;
    let err = rec.reconstruction_error(&b);
    let digits: String = rec.digits().iter().map(|d| char::from_digit(*d, 36).unwrap_or('?')).collect();
    let rows = rec.orbit_f64().into_iter().enumerate().map(|(k, x)| {
        let d = rec.digits().get(k).map_or(String::new(), u32::to_string);
        vec![k.to_string(), d, x.to_string()]
    });
    let csv = csv_text(&["k".into(), "digit".into(), "x_k".into()], rows)?;
    let mut out = Partial::new(json!({
        "beta": b.label(),
        "x": a.x,
        "digits": digits,
        "reconstruction_error": num_traits::ToPrimitive::to_f64(&err),
        "precision_used": rec.precision_used(),
        "exact": rec.is_exact(),
    }));
    out.warnings = pisot_warning(&b);
    out.files.push(OutputFile { name: "expand.csv".into(), contents: csv });
    Ok(out)
}

fn orbit_of_one_json(o: OrbitOfOne) -> serde_json::Value {
    match o {
        OrbitOfOne::Finite { len } => json!({ "kind": "finite", "len": len }),
        OrbitOfOne::Periodic { pre, period } => json!({ "kind": "periodic", "pre": pre, "period": period }),
        OrbitOfOne::Truncated { terms } => json!({ "kind": "truncated", "terms": terms }),
    }
}

fn parry(a: &ParryArgs, seed: u64) -> Result<Partial> {
    let b: BetaBase = a.beta.parse()?;
    let p = parry_density(&b, a.truncation)?;
    let mut out = Partial::new(json!({
        "beta": b.label(),
        "breakpoints": p.breakpoints().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "breakpoints_approx": p.breakpoints_f64(),
        "values": p.values(),
        "normalization": p.normalization(),
        "error_bound": p.error_bound(),
        "orbit_of_one": orbit_of_one_json(p.orbit_of_one()),
    }));
    out.checks.push(Check::below("integral_minus_one", (p.integral() - 1.0).abs(), 1e-9, seed));
    out.warnings = pisot_warning(&b);
    if a.grid > 0 {
        let rows = (0..a.grid).map(|j| {
            let x = (j as f64 + 0.5) / a.grid as f64;
            vec![x.to_string(), p.density(x).to_string()]
        });
        out.files.push(OutputFile { name: "parry.csv".into(), contents: csv_text(&["x".into(), "density".into()], rows)? });
    }
    Ok(out)
}

/// Coding depth and ball precision that certify `n` digits in base `b`
/// for points of `m`.
pub fn certified_depth(m: &Model, b: &BetaBase, n: usize) -> (usize, u32) {
    let rho_max = m.max_ratio();
    let rho_min = m.indices().iter().map(|i| i.ratio_f64().abs()).fold(1.0, f64::min);
    let half_diam = (m.hull().hi_f64() - m.hull().lo_f64()) / 2.0;
    // radius * beta^n must sit well below the digit boundaries
    let need = n as f64 * b.log2() + 64.0 + half_diam.max(1e-300).log2();
    let depth = (need / -rho_max.log2()).ceil().max(0.0) as usize + 8;
    let prec = (depth as f64 * -rho_min.log2()).ceil() as u32 + 64;
    (depth, prec.max((n as f64 * b.log2()) as u32 + 128))
}

/// Per-point statistics at `lengths` (the last is the full length).
pub fn point_statistics(
    m: &Model,
    b: &BetaBase,
    points: usize,
    lengths: &[usize],
    depth: usize,
    prec: u32,
    seed: u64,
) -> Result<Vec<Vec<NormalityStat>>> {
    let parry = parry_density(b, betanorm_core::beta::DEFAULT_TRUNCATION)?;
    (0..points as u64)
        .into_par_iter()
        .map(|k| {
            let (w, p) = disintegration_point(m, depth, seed, k);
            let x = OrbitInput::Ball(p.certified_ball(m, &w, prec));
            normality_profile(b, &parry, &x, lengths).with_context(|| format!("point {k}"))
        })
        .collect()
}

fn normality(a: &mut NormalityArgs, seed: u64) -> Result<Partial> {
    let m = Source::load(&a.source)?.model(a.max_m)?;
    let b: BetaBase = a.beta.parse()?;
    let (auto, prec) = certified_depth(&m, &b, a.digits);
    let depth = *a.depth.get_or_insert(auto);
    let mut lengths: Vec<usize> = a.lengths.iter().copied().filter(|&l| l < a.digits).collect();
    lengths.sort_unstable();
    lengths.dedup();
    lengths.push(a.digits);
    let stats = point_statistics(&m, &b, a.points, &lengths, depth, prec, seed)?;
    let nd = b.max_digit() as usize + 1;
    let mut header = vec!["point_id".to_string(), "beta".into(), "n".into()];
    header.extend((0..nd).map(|d| format!("digit_{d}_freq")));
    header.extend(["discrepancy".into(), "precision_used".into()]);
    let rows = stats.iter().enumerate().map(|(k, s)| {
        let s = s.last().unwrap();
        let mut r = vec![k.to_string(), b.label().to_string(), s.n.to_string()];
        r.extend(s.digit_freqs.iter().map(f64::to_string));
        r.extend([s.discrepancy.to_string(), s.precision_used.to_string()]);
        r
    });
    let csv = csv_text(&header, rows)?;
    let n = stats.len().max(1) as f64;
    let mean_freqs: Vec<f64> =
        (0..nd).map(|d| stats.iter().map(|s| s.last().unwrap().digit_freqs[d]).sum::<f64>() / n).collect();
    let by_length: Vec<serde_json::Value> = lengths
        .iter()
        .enumerate()
        .map(|(i, &l)| json!({ "n": l, "mean_discrepancy": stats.iter().map(|s| s[i].discrepancy).sum::<f64>() / n }))
        .collect();
    let mean_disc = stats.iter().map(|s| s.last().unwrap().discrepancy).sum::<f64>() / n;
    let reduced = stats.iter().filter(|s| s[0].reduced_mod1).count();
    let mut out = Partial::new(json!({
        "beta": b.label(),
        "points": a.points,
        "digits": a.digits,
        "depth": depth,
        "precision_bits": prec,
        "mean_digit_freqs": mean_freqs,
        "mean_discrepancy": mean_disc,
        "by_length": by_length,
        "reduced_mod1": reduced,
    }));
    if let Some(band) = &a.digit_band {
        let [d, lo, hi] = band[..] else { bail!("--digit-band takes digit,lo,hi") };
        let f = mean_freqs.get(d as usize).copied().unwrap_or(0.0);
        out.checks.push(Check::within(&format!("mean_digit_{d}_freq"), f, lo, hi, seed));
    }
    if let Some(t) = a.max_mean_discrepancy {
        out.checks.push(Check::below("mean_discrepancy", mean_disc, t, seed));
    }
    out.warnings = pisot_warning(&b);
    out.files.push(OutputFile { name: "normality.csv".into(), contents: csv });
    Ok(out)
}

/// Everything the scenery check needs, kept for reuse by tests.
pub struct SceneryRun {
    pub orbit: Vec<WindowMeasure>,
    pub times: Vec<f64>,
    pub q: Vec<WindowMeasure>,
    pub comparison: ComparisonReport,
    pub contrast: ComparisonReport,
    pub gap_rescale: String,
    pub mean_roof: f64,
}

pub fn scenery_run(m: &Model, a: &SceneryArgs, seed: u64) -> Result<SceneryRun> {
    let (m, c, radius) = match a.radius {
        Some(r) => (m.clone(), FieldElem::one(m.field()), r),
        None => {
            let margin = BigRational::new(GAP_MARGIN.0.into(), GAP_MARGIN.1.into());
            let (m, c) = rescale_model_for_gap(m, &margin)?;
            (m, c, 1.0)
        }
    };
    let chain = build_extended_chain(&m)?;
    let p = WindowParams { bins: a.bins, samples: a.window_samples, depth: m.default_depth(), radius };
    let q = (0..a.q_samples as u64)
        .into_par_iter()
        .map(|k| q_window(&m, &chain, k, &p, seed))
        .collect::<betanorm_core::Result<Vec<_>>>()?;
    let horizon = a.roofs * chain.mean_roof();
    let plan = OrbitPlan::new(&m, &OmegaWord::streamed(seed, 0), a.flip, horizon, a.dt, &p, seed);
    let orbit = (0..plan.len()).into_par_iter().map(|j| plan.window(&m, j, &p)).collect::<betanorm_core::Result<Vec<_>>>()?;
    let comparison = compare_scenery_to_Q(&orbit, &q)?;
    let contrast = compare_scenery_to_Q(&orbit, &[WindowMeasure::point_mass(a.bins)])?;
    Ok(SceneryRun {
        times: plan.times().to_vec(),
        orbit,
        q,
        comparison,
        contrast,
        gap_rescale: c.to_string(),
        mean_roof: chain.mean_roof(),
    })
}

fn scenery(a: &SceneryArgs, seed: u64) -> Result<Partial> {
    let m = Source::load(&a.source)?.model(a.max_m)?;
    let r = scenery_run(&m, a, seed)?;
    let entries: Vec<serde_json::Value> = r
        .comparison
        .entries
        .iter()
        .zip(&r.contrast.entries)
        .map(|(e, c)| {
            json!({ "name": e.name, "orbit_mean": e.orbit_mean, "q_mean": e.q_mean, "distance": e.distance, "delta0_distance": c.distance })
        })
        .collect();
    let mut out = Partial::new(json!({
        "panel": PANEL_VERSION,
        "gap_rescale": r.gap_rescale,
        "mean_roof": r.mean_roof,
        "horizon": a.roofs * r.mean_roof,
        "orbit_windows": r.orbit.len(),
        "q_windows": r.q.len(),
        "max_distance": r.comparison.max_distance,
        "delta0_max_distance": r.contrast.max_distance,
        "functionals": entries,
    }));
    out.checks.push(Check::below("orbit_vs_q_max_distance", r.comparison.max_distance, a.tolerance, seed));
    out.checks.push(Check::above("orbit_vs_delta0_max_distance", r.contrast.max_distance, a.contrast, seed));
    if a.export_windows {
        let mut rows = Vec::new();
        for (j, (w, t)) in r.orbit.iter().zip(&r.times).enumerate() {
            for (i, mass) in w.masses().iter().enumerate() {
                rows.push(vec![j.to_string(), t.to_string(), i.to_string(), w.bin_center(i).to_string(), mass.to_string()]);
            }
        }
        let header = ["window", "time", "bin", "center", "mass"].map(String::from);
        out.files.push(OutputFile { name: "windows.csv".into(), contents: csv_text(&header, rows)? });
    }
    Ok(out)
}

/// KS distance between direct sampling of the measure and sampling
/// through the model disintegration.
pub fn disintegration_ks(ifs: &SimilarityIFS, m: &Model, count: usize, depth: usize, seed: u64) -> f64 {
    let direct = sample_measure(ifs, count, depth, seed).points;
    let model = sample_disintegration(m, count, m.default_depth().max(1), seed);
    ks_two_sample(&direct, &model)
}

fn disintegration(a: &mut DisintegrationArgs, seed: u64) -> Result<Partial> {
    let src = Source::load(&a.source)?;
    let ifs = src.ifs()?;
    let m = src.model(a.max_m)?;
    let depth = *a.depth.get_or_insert_with(|| ifs_depth(ifs));
    let ks = disintegration_ks(ifs, &m, a.count, depth, seed);
    let mut out = Partial::new(json!({ "count": a.count, "depth": depth, "model_depth": m.default_depth(), "ks": ks }));
    out.checks.push(Check::below("ks_direct_vs_disintegration", ks, a.tolerance, seed));
    Ok(out)
}

fn spectrum(a: &SpectrumArgs) -> Result<Partial> {
    let m = Source::load(&a.source)?.model(a.max_m)?;
    let b: BetaBase = a.beta.parse()?;
    let v = betanorm_core::scenery::spectrum_obstruction(&m, &b, a.search_bound)?;
    let results = match v {
        SpectrumVerdict::NormalityImplied { index, independence, evidence } => json!({
            "verdict": "normality_implied",
            "index": m.indices()[index].label(),
            "independence": format!("{independence:?}"),
            "evidence": evidence,
        }),
        SpectrumVerdict::Inconclusive(reason) => json!({ "verdict": "inconclusive", "reason": reason }),
    };
    Ok(Partial::new(results))
}
