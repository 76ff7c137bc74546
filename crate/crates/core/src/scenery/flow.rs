//! Windows of `S_t eta_{omega,u,a}`, scenery orbits by shift replay, and
//! samples of the suspension distribution `Q`.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;

use super::chain::ExtendedChain;
use super::window::{bin_index, WindowMeasure, DEFAULT_BINS};
use crate::algebraics::FieldElem;
use crate::model::{draw_digits, verify_ssc, Model, OmegaWord};
use crate::rng::{self, Categorical, Label};
use crate::{fmath, Result};

/// Extra room left above 2 when rescaling gaps.
pub const DEFAULT_MARGIN: (i64, i64) = (1, 2);

/// Multiplies all translations by `c = (2 + margin) / g`, `g` the SSC gap,
/// so gaps become `2 + margin`. Returns `c = 1` when the gaps already
/// exceed `2 + margin` or when the model has no gaps at all.
pub fn rescale_model_for_gap(m: &Model, margin: &BigRational) -> Result<(Model, FieldElem)> {
    let report = verify_ssc(m)?;
    let f = m.field();
    let target = FieldElem::from_rational(f, BigRational::from_integer(2.into()) + margin);
    let c = match report.min_gap {
        Some(g) if g < target => &target / &g,
        _ => FieldElem::one(f),
    };
    Ok((m.rescaled(&c)?, c))
}

/// Resolution and budget of one window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowParams {
    /// `B`.
    pub bins: usize,
    /// Sample budget per window.
    pub samples: usize,
    /// Levels coded below the forced cylinder.
    pub depth: usize,
    /// Half-width of the conditioning interval in model coordinates; 1 for
    /// the rescaling device, `t_0` when conditioning on `[-t_0, t_0]`.
    pub radius: f64,
}

impl WindowParams {
    pub fn for_model(m: &Model) -> Self {
        Self { bins: DEFAULT_BINS, samples: 4096, depth: m.default_depth(), radius: 1.0 }
    }
}

/// A coded focus: `omega` and `u` prefixes, and the flip `a`.
#[derive(Clone, Copy, Debug)]
pub struct CodedFocus<'a> {
    pub omega: &'a [usize],
    pub digits: &'a [u8],
    pub flip: bool,
}

struct Cylinder {
    rel: f64,
    p: f64,
    w: f64,
}

/// The window of `S_t eta_{omega,u,a}`.
///
/// Levels whose sibling cylinders all miss the window are forced to follow
/// `u`; below them the remaining cylinders are enumerated with their exact
/// weights while the budget allows, and each is filled with random tails.
/// Positions are accumulated relative to the focus, so nothing cancels.
pub fn coded_window(m: &Model, focus: CodedFocus<'_>, t: f64, p: &WindowParams, rng: &mut ChaCha8Rng) -> Result<WindowMeasure> {
    let n = focus.omega.len().min(focus.digits.len());
    let idx = m.indices();
    let (klo, khi) = (m.hull().lo_f64(), m.hull().hi_f64());
    // x[j]: position of the focus inside Y^(sigma^j omega)
    let mut x = vec![0.5 * (klo + khi); n + 1];
    for j in (0..n).rev() {
        let i = &idx[focus.omega[j]];
        x[j] = i.translations_f64()[focus.digits[j] as usize] + i.ratio_f64() * x[j + 1];
    }
    let radius = p.radius * fmath::exp(-t);
    // forced levels
    let mut scale = 1.0;
    let mut level = 0;
    let cap = n.saturating_sub(p.depth.min(n));
    while level < cap {
        let i = &idx[focus.omega[level]];
        let (r, ts) = (i.ratio_f64(), i.translations_f64());
        let tu = ts[focus.digits[level] as usize];
        let clear = ts.iter().enumerate().all(|(v, &tv)| {
            if v == focus.digits[level] as usize {
                return true;
            }
            let a = scale * (r * (klo - x[level + 1]) + tv - tu);
            let b = scale * (r * (khi - x[level + 1]) + tv - tu);
            a.min(b) > radius * (1.0 + 1e-9) || a.max(b) < -radius * (1.0 + 1e-9)
        });
        if !clear {
            break;
        }
        scale *= r;
        level += 1;
    }
    // tails past depth move points by less than rho^depth of the window
    let n = n.min(level + p.depth);
    // window coordinate v = c (z - x_L), z in Y^(sigma^L omega)
    let mut c = scale / radius;
    if focus.flip {
        c = -c;
    }
    let bin_w = 1.0 / p.bins as f64;
    let diam = khi - klo;
    let mut cyl = vec![Cylinder { rel: 0.0, p: 1.0, w: 1.0 }];
    while level < n {
        let i = &idx[focus.omega[level]];
        let k = i.len();
        let (r, ts) = (i.ratio_f64(), i.translations_f64());
        let tu = ts[focus.digits[level] as usize];
        if k == 1 {
            for cy in &mut cyl {
                cy.p *= r;
            }
            level += 1;
            continue;
        }
        if cyl.len() * k > p.samples || cyl.iter().all(|cy| (c * cy.p).abs() * diam < bin_w / 16.0) {
            break;
        }
        let mut next = Vec::with_capacity(cyl.len() * k);
        for cy in &cyl {
            for (v, (&tv, pv)) in ts.iter().zip(i.weights()).enumerate() {
                let _ = v;
                let rel = cy.rel + cy.p * (tv - tu);
                let pp = cy.p * r;
                let (a, b) = (c * (rel + pp * (klo - x[level + 1])), c * (rel + pp * (khi - x[level + 1])));
                if a.max(b) < -1.0 || a.min(b) > 1.0 {
                    continue;
                }
                next.push(Cylinder { rel, p: pp, w: cy.w * pv.to_f64().unwrap() });
            }
        }
        cyl = next;
        level += 1;
    }
    let per = (p.samples / cyl.len()).max(1);
    let mut masses = vec![0.0; 2 * p.bins];
    for cy in &cyl {
        let w = cy.w / per as f64;
        for _ in 0..per {
            let mut rel = cy.rel;
            let mut pp = cy.p;
            for j in level..n {
                let i = &idx[focus.omega[j]];
                let ts = i.translations_f64();
                if i.len() > 1 {
                    let v = i.digit_law().sample(rng.next_u64());
                    rel += pp * (ts[v] - ts[focus.digits[j] as usize]);
                }
                pp *= i.ratio_f64();
            }
            let v = c * rel;
            if (-1.0..=1.0).contains(&v) {
                masses[bin_index(v, p.bins)] += w;
            }
        }
    }
    WindowMeasure::centered(masses)
}

/// Times, windows and bookkeeping of one scenery orbit.
#[derive(Clone, Debug)]
pub struct SceneryOrbit {
    pub times: Vec<f64>,
    pub windows: Vec<WindowMeasure>,
    /// Translation factor applied before zooming (1 if none).
    pub gap_rescale: f64,
}

/// Precomputed coding of an orbit start; windows can be computed in any
/// order.
#[derive(Clone, Debug)]
pub struct OrbitPlan {
    omega: Vec<usize>,
    digits: Vec<u8>,
    /// `tau[k] = sum_{j<k} roof(omega_j)`.
    tau: Vec<f64>,
    /// Flip after `k` shifts.
    flips: Vec<bool>,
    times: Vec<f64>,
    seed: u64,
}

const ORBIT_WINDOW_STREAMS: u64 = 1 << 47;

impl OrbitPlan {
    /// Orbit of `(omega, u, a)` with `u ~ eta-bar^(omega)` drawn from
    /// `(seed, Digits, 0)`, sampled at `0, dt, 2dt, .. <= horizon`.
    pub fn new(m: &Model, omega: &OmegaWord, flip: bool, horizon: f64, dt: f64, p: &WindowParams, seed: u64) -> Self {
        assert!(dt > 0.0 && horizon >= 0.0);
        let min_roof = m.indices().iter().map(|i| i.roof()).fold(f64::INFINITY, f64::min);
        let shifts = fmath::ceil(horizon / min_roof) as usize + 2;
        let len = shifts + p.depth + 64;
        let w = omega.symbols(m, len);
        let digits = draw_digits(m, &w, seed, 0);
        let mut tau = Vec::with_capacity(shifts + 1);
        let mut flips = Vec::with_capacity(shifts + 1);
        let (mut acc, mut a) = (0.0, flip);
        for &s in &w[..=shifts] {
            tau.push(acc);
            flips.push(a);
            acc += m.indices()[s].roof();
            a ^= m.indices()[s].ratio_f64() < 0.0;
        }
        let count = fmath::floor(horizon / dt) as usize + 1;
        let times = (0..count).map(|j| j as f64 * dt).collect();
        Self { omega: w, digits, tau, flips, times, seed }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Window `j` via `M'^k`: shift `k` times, where `tau_k <= t < tau_{k+1}`,
    /// then zoom by `t - tau_k`, less than one roof.
    pub fn window(&self, m: &Model, j: usize, p: &WindowParams) -> Result<WindowMeasure> {
        let t = self.times[j];
        let k = self.tau.partition_point(|&s| s <= t) - 1;
        let focus = CodedFocus { omega: &self.omega[k..], digits: &self.digits[k..], flip: self.flips[k] };
        let mut r = rng::stream(self.seed, Label::Window, ORBIT_WINDOW_STREAMS | j as u64);
        coded_window(m, focus, t - self.tau[k], p, &mut r)
    }
}

/// Windows along `S_t eta_{omega,u,a}` for `t = 0, dt, .., horizon`.
pub fn scenery_orbit(
    m: &Model,
    omega: &OmegaWord,
    flip: bool,
    horizon: f64,
    dt: f64,
    p: &WindowParams,
    seed: u64,
) -> Result<SceneryOrbit> {
    let plan = OrbitPlan::new(m, omega, flip, horizon, dt, p, seed);
    let windows = (0..plan.len()).map(|j| plan.window(m, j, p)).collect::<Result<Vec<_>>>()?;
    Ok(SceneryOrbit { times: plan.times.clone(), windows, gap_rescale: 1.0 })
}

/// A point of the suspension: chain state and time under its roof.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuspensionPoint {
    pub state: usize,
    pub t: f64,
}

/// Law of the state under the suspension measure, `pi_s roof_s / E[roof]`.
pub fn suspension_state_law(chain: &ExtendedChain) -> Vec<f64> {
    let w: Vec<f64> = chain.stationary().iter().zip(chain.roofs()).map(|(p, r)| p.to_f64().unwrap() * r).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

fn suspension_sampler(chain: &ExtendedChain) -> Categorical {
    Categorical::from_f64(&suspension_state_law(chain))
}

fn draw_point(chain: &ExtendedChain, law: &Categorical, r: &mut ChaCha8Rng) -> SuspensionPoint {
    let state = law.sample(r.next_u64());
    let t = chain.roofs()[state] * rng::unit_f64(r.next_u64());
    SuspensionPoint { state, t }
}

/// `n` points of the suspension measure, by inverse CDF on the state and
/// a uniform time under the roof.
pub fn sample_suspension(chain: &ExtendedChain, n: usize, seed: u64) -> Vec<SuspensionPoint> {
    let law = suspension_sampler(chain);
    (0..n as u64).map(|k| draw_point(chain, &law, &mut rng::stream(seed, Label::Suspension, k))).collect()
}

/// The `k`-th sample of `Q`: a suspension point, then `omega` and `u`
/// continued i.i.d., then the window of `S_t eta_{omega,u,a}`.
pub fn q_window(m: &Model, chain: &ExtendedChain, k: u64, p: &WindowParams, seed: u64) -> Result<WindowMeasure> {
    let law = suspension_sampler(chain);
    q_window_with(m, chain, &law, k, p, seed)
}

fn q_window_with(m: &Model, chain: &ExtendedChain, law: &Categorical, k: u64, p: &WindowParams, seed: u64) -> Result<WindowMeasure> {
    let mut r = rng::stream(seed, Label::Suspension, k);
    let sp = draw_point(chain, law, &mut r);
    let s = chain.states()[sp.state];
    let len = p.depth + 32;
    let mut omega = Vec::with_capacity(len);
    let mut digits = Vec::with_capacity(len);
    omega.push(s.index);
    digits.push(s.digit as u8);
    for _ in 1..len {
        let i = m.selection_law().sample(r.next_u64());
        let idx = &m.indices()[i];
        omega.push(i);
        digits.push(if idx.is_degenerate() { 0 } else { idx.digit_law().sample(r.next_u64()) as u8 });
    }
    let focus = CodedFocus { omega: &omega, digits: &digits, flip: s.flip.unwrap_or(false) };
    coded_window(m, focus, sp.t, p, &mut rng::stream(seed, Label::Window, k))
}

/// `n` windows drawn from `Q`.
#[allow(non_snake_case)]
pub fn sample_Q(m: &Model, chain: &ExtendedChain, n: usize, p: &WindowParams, seed: u64) -> Result<Vec<WindowMeasure>> {
    let law = suspension_sampler(chain);
    (0..n as u64).map(|k| q_window_with(m, chain, &law, k, p, seed)).collect()
}
