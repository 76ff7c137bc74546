//! The Parry density `h(x) ~ sum_{n: x < T^n(1)} beta^-n`.

use alloc::vec::Vec;

use super::orbit::{Engine, State, STORED_BITS};
use super::BetaBase;
use crate::algebraics::roots::rat_to_f64;
use crate::algebraics::{BigReal, FieldElem};
use crate::Result;

/// Default number of series terms when the orbit of 1 neither ends nor cycles.
pub const DEFAULT_TRUNCATION: usize = 256;

const SUM_BITS: u32 = 160;

/// How the orbit of 1 behaved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitOfOne {
    /// `T^len(1) = 0`; the series is a finite sum.
    Finite { len: usize },
    /// `T^(pre + period)(1) = T^pre(1)`; summed as a geometric series.
    Periodic { pre: usize, period: usize },
    /// Truncated after `terms` terms.
    Truncated { terms: usize },
}

/// Piecewise constant normalized density of the Parry measure.
#[derive(Clone, Debug)]
pub struct ParryDensity {
    breakpoints: Vec<FieldElem>,
    bp: Vec<f64>,
    values: Vec<f64>,
    cdf_at: Vec<f64>,
    normalization: f64,
    error_bound: f64,
    kind: OrbitOfOne,
}

impl ParryDensity {
    /// `0 = b_0 < b_1 < ... < b_m = 1`.
    pub fn breakpoints(&self) -> &[FieldElem] {
        &self.breakpoints
    }

    pub fn breakpoints_f64(&self) -> &[f64] {
        &self.bp
    }

    /// Density on `[b_j, b_{j+1})`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `integral of the unnormalized series`.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Bound on the error of every value: series tail plus rounding.
    pub fn error_bound(&self) -> f64 {
        self.error_bound
    }

    pub fn orbit_of_one(&self) -> OrbitOfOne {
        self.kind
    }

    pub fn density(&self, x: f64) -> f64 {
        if !(0.0..1.0).contains(&x) {
            return 0.0;
        }
        let j = self.bp.partition_point(|&b| b <= x) - 1;
        self.values[j]
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        let j = self.bp.partition_point(|&b| b <= x) - 1;
        self.cdf_at[j] + self.values[j] * (x - self.bp[j])
    }

    /// `sum_j h_j (b_{j+1} - b_j)`.
    pub fn integral(&self) -> f64 {
        self.values.iter().zip(self.bp.windows(2)).map(|(v, w)| v * (w[1] - w[0])).sum()
    }
}

/// Parry density from the orbit of 1, exact up to `truncation` terms.
pub fn parry_density(b: &BetaBase, truncation: usize) -> Result<ParryDensity> {
    let mut eng = Engine::new(b);
    let f = b.field();
    let mut s = eng.state_of(&FieldElem::one(f))?;
    // t_0 = 1, t_1, ...; stops at 0, at a repeat, or after `truncation` terms
    let mut states: Vec<State> = Vec::new();
    let mut seen = alloc::collections::BTreeMap::new();
    let kind = loop {
        if s.is_zero() {
            break OrbitOfOne::Finite { len: states.len() };
        }
        if let Some(&pre) = seen.get(&s) {
            break OrbitOfOne::Periodic { pre, period: states.len() - pre };
        }
        if states.len() == truncation {
            break OrbitOfOne::Truncated { terms: truncation };
        }
        seen.insert(s.clone(), states.len());
        states.push(s.clone());
        eng.mul_beta(&mut s);
        let (m, _) = eng.floor(&s, states.len())?;
        eng.sub_int(&mut s, &m);
    };
    let p = SUM_BITS;
    let inv = b.beta().ball(p + 8).recip(p).expect("beta > 1");
    let mut w: Vec<BigReal> = Vec::with_capacity(states.len());
    let mut pw = BigReal::from_i64(1);
    for _ in 0..states.len() {
        w.push(pw.clone());
        pw = pw.mul(&inv, p);
    }
    // pw = beta^-len now
    if let OrbitOfOne::Periodic { pre, period } = kind {
        let g = BigReal::from_i64(1).sub(&inv.powu(period as u64, p), p).recip(p).expect("beta > 1");
        for x in &mut w[pre..] {
            *x = x.mul(&g, p);
        }
    }
    let t: Vec<FieldElem> = states.iter().map(|s| eng.to_field(s)).collect();
    let tb: Vec<BigReal> = states.iter().map(|s| eng.ball(s, STORED_BITS)).collect();
    let mut bps: Vec<FieldElem> = t.clone();
    bps.push(FieldElem::zero(f));
    bps.sort();
    bps.dedup();
    // value on [b_j, b_{j+1}) sums the weights of every t_n > b_j
    let mut norm = BigReal::zero();
    for (wn, tn) in w.iter().zip(&tb) {
        norm = norm.add(&wn.mul(tn, p), p);
    }
    let tail = match kind {
        OrbitOfOne::Truncated { .. } => {
            // beta^-N / (1 - 1/beta)
            let one = BigReal::from_i64(1);
            rat_to_f64(&pw.mul(&one.sub(&inv, p).recip(p).unwrap(), p).upper())
        }
        _ => 0.0,
    };
    let normalization = norm.to_f64();
    let mut values = Vec::with_capacity(bps.len() - 1);
    for bj in &bps[..bps.len() - 1] {
        let mut acc = BigReal::zero();
        for (wn, tn) in w.iter().zip(&t) {
            if tn > bj {
                acc = acc.add(wn, p);
            }
        }
        values.push(acc.div(&norm, p).unwrap().to_f64());
    }
    let bp: Vec<f64> = bps.iter().map(|x| x.to_f64()).collect();
    let mut cdf_at = Vec::with_capacity(values.len());
    let mut c = 0.0;
    for (v, wnd) in values.iter().zip(bp.windows(2)) {
        cdf_at.push(c);
        c += v * (wnd[1] - wnd[0]);
    }
    let vmax = values.iter().cloned().fold(0.0, f64::max);
    let error_bound = tail / normalization * (1.0 + vmax) + 4.0 * f64::EPSILON * vmax;
    Ok(ParryDensity { breakpoints: bps, bp, values, cdf_at, normalization, error_bound, kind })
}
