//! Similarity IFSs on the line with exact coefficients.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand_core::RngCore;

use crate::algebraics::{FieldElem, NumberField};
use crate::rng::{self, Categorical, Label};
use crate::{fmath, Error, Result};

/// Default bound on the number of maps produced by [`iterate_ifs`].
pub const DEFAULT_SIZE_CAP: usize = 1 << 16;

/// Default largest word length tried by [`find_separated_pair`].
pub const DEFAULT_MAX_M: u32 = 8;

/// `x -> s x + t` with `0 < |s| < 1`.
#[derive(Clone)]
pub struct SimilarityMap {
    ratio: FieldElem,
    translation: FieldElem,
    s: f64,
    t: f64,
}

impl SimilarityMap {
    pub fn new(ratio: FieldElem, translation: FieldElem) -> Result<Self> {
        let (ratio, translation) = FieldElem::unify(&ratio, &translation)?;
        let one = FieldElem::one(ratio.field());
        let a = ratio.abs();
        if ratio.is_zero() || a >= one {
            return Err(Error::InvalidIfs(format!("ratio {ratio} is not in (-1, 0) or (0, 1)")));
        }
        Ok(Self::from_parts(ratio, translation))
    }

    fn from_parts(ratio: FieldElem, translation: FieldElem) -> Self {
        let s = ratio.to_f64();
        let t = translation.to_f64();
        Self { ratio, translation, s, t }
    }

    pub fn ratio(&self) -> &FieldElem {
        &self.ratio
    }

    pub fn translation(&self) -> &FieldElem {
        &self.translation
    }

    pub fn ratio_f64(&self) -> f64 {
        self.s
    }

    pub fn translation_f64(&self) -> f64 {
        self.t
    }

    pub fn apply(&self, x: &FieldElem) -> FieldElem {
        &(&self.ratio * x) + &self.translation
    }

    #[inline]
    pub fn apply_f64(&self, x: f64) -> f64 {
        self.s * x + self.t
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let ratio = &self.ratio * &other.ratio;
        let translation = &(&self.ratio * &other.translation) + &self.translation;
        Self::from_parts(ratio, translation)
    }

    /// `x -> c x` conjugation: `c f(x/c)`, i.e. translations scaled by `c`.
    pub fn scale_translation(&self, c: &FieldElem) -> Self {
        Self::from_parts(self.ratio.clone(), &self.translation * c)
    }

    pub fn fixed_point(&self) -> FieldElem {
        let one = FieldElem::one(self.ratio.field());
        &self.translation / &(&one - &self.ratio)
    }

    pub fn is_orientation_preserving(&self) -> bool {
        self.ratio.signum() == Ordering::Greater
    }

    pub fn image(&self, j: &Interval) -> Interval {
        let a = self.apply(&j.lo);
        let b = self.apply(&j.hi);
        if self.is_orientation_preserving() {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }
}

impl PartialEq for SimilarityMap {
    fn eq(&self, other: &Self) -> bool {
        self.ratio == other.ratio && self.translation == other.translation
    }
}

impl Eq for SimilarityMap {}

impl fmt::Debug for SimilarityMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})x + ({})", self.ratio, self.translation)
    }
}

/// Closed interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: FieldElem,
    pub hi: FieldElem,
}

impl Interval {
    pub fn new(lo: FieldElem, hi: FieldElem) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn diam(&self) -> FieldElem {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> FieldElem {
        let half = FieldElem::from_rational(self.lo.field(), BigRational::new(1.into(), 2.into()));
        &(&self.lo + &self.hi) * &half
    }

    pub fn hull(&self, other: &Self) -> Self {
        let lo = if self.lo <= other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi >= other.hi { self.hi.clone() } else { other.hi.clone() };
        Self { lo, hi }
    }

    /// Empty intersection; touching endpoints count as intersecting.
    pub fn disjoint(&self, other: &Self) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    /// Signed distance between the intervals; non-positive when they meet.
    pub fn gap(&self, other: &Self) -> FieldElem {
        if self.lo <= other.lo {
            &other.lo - &self.hi
        } else {
            &self.lo - &other.hi
        }
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64()
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64()
    }
}

/// A finite family of similarities with positive rational weights summing to one.
#[derive(Clone, Debug)]
pub struct SimilarityIFS {
    maps: Vec<SimilarityMap>,
    weights: Vec<BigRational>,
}

impl SimilarityIFS {
    /// Validates weights and requires an infinite attractor.
    pub fn new(maps: Vec<SimilarityMap>, weights: Vec<BigRational>) -> Result<Self> {
        let ifs = Self::new_allow_degenerate(maps, weights)?;
        let f0 = ifs.maps[0].fixed_point();
        if ifs.maps.iter().all(|m| m.fixed_point() == f0) {
            return Err(Error::InvalidIfs("all maps share a fixed point; the attractor is a single point".into()));
        }
        Ok(ifs)
    }

    /// Like [`SimilarityIFS::new`] but accepts a single-point attractor.
    pub fn new_allow_degenerate(maps: Vec<SimilarityMap>, weights: Vec<BigRational>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::InvalidIfs("no maps".into()));
        }
        if maps.len() != weights.len() {
            return Err(Error::InvalidIfs(format!("{} maps but {} weights", maps.len(), weights.len())));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::InvalidIfs("weights must be strictly positive".into()));
        }
        let total: BigRational = weights.iter().fold(BigRational::zero(), |a, b| a + b);
        if !total.is_one() {
            return Err(Error::InvalidIfs(format!("weights sum to {total}, not 1")));
        }
        let field = common_field(maps.iter().flat_map(|m| [&m.ratio, &m.translation]))?;
        let maps = maps
            .into_iter()
            .map(|m| {
                Ok(SimilarityMap::from_parts(m.ratio.lift(&field)?, m.translation.lift(&field)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { maps, weights })
    }

    /// Uniform weights.
    pub fn uniform(maps: Vec<SimilarityMap>) -> Result<Self> {
        let n = maps.len().max(1);
        let w = (0..maps.len()).map(|_| BigRational::new(1.into(), (n as i64).into())).collect();
        Self::new(maps, w)
    }

    pub fn maps(&self) -> &[SimilarityMap] {
        &self.maps
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.maps[0].ratio.field()
    }

    /// `max |s_i|` in floating point.
    pub fn max_ratio(&self) -> f64 {
        self.maps.iter().map(|m| fmath::abs(m.s)).fold(0.0, f64::max)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.maps.iter().all(|m| m.ratio == self.maps[0].ratio)
    }
}

/// The field shared by a collection of elements (rationals lift into any field).
pub(crate) fn common_field<'a>(xs: impl IntoIterator<Item = &'a FieldElem>) -> Result<Arc<NumberField>> {
    let mut field: Option<Arc<NumberField>> = None;
    for x in xs {
        if x.field().is_rational() && x.as_rational().is_some() {
            if field.is_none() {
                field = Some(x.field().clone());
            }
            continue;
        }
        match &field {
            Some(f) if !f.is_rational() => {
                x.lift(f)?;
            }
            _ => field = Some(x.field().clone()),
        }
    }
    Ok(field.unwrap_or_else(NumberField::rationals))
}

/// Convex hull of the attractor of `maps` (the attractor need not be infinite).
pub fn hull_of_maps(maps: &[SimilarityMap]) -> Interval {
    let field = maps[0].ratio.field().clone();
    let zero = FieldElem::zero(&field);
    let one = FieldElem::one(&field);
    for fi in maps {
        for fj in maps {
            // a = lower end of f_i(J), b = upper end of f_j(J)
            let (a1, b1) = if fi.is_orientation_preserving() {
                (&one - &fi.ratio, zero.clone())
            } else {
                (one.clone(), -&fi.ratio)
            };
            let (a2, b2) = if fj.is_orientation_preserving() {
                (zero.clone(), &one - &fj.ratio)
            } else {
                (-&fj.ratio, one.clone())
            };
            // a1 a + b1 b = t_i ; a2 a + b2 b = t_j
            let det = &(&a1 * &b2) - &(&b1 * &a2);
            if det.is_zero() {
                continue;
            }
            let a = &(&(&fi.translation * &b2) - &(&b1 * &fj.translation)) / &det;
            let b = &(&(&a1 * &fj.translation) - &(&fi.translation * &a2)) / &det;
            if a > b {
                continue;
            }
            let j = Interval { lo: a, hi: b };
            let mut h = maps[0].image(&j);
            for m in &maps[1..] {
                h = h.hull(&m.image(&j));
            }
            if h == j {
                return j;
            }
        }
    }
    unreachable!("the hull map of a contracting IFS has a fixed interval")
}

/// Smallest interval `J` with `J = Conv(∪ f_i(J))`.
pub fn attractor_hull(ifs: &SimilarityIFS) -> Interval {
    hull_of_maps(&ifs.maps)
}

/// Samples with a uniform error bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Samples {
    pub points: Vec<f64>,
    /// Every point is within this distance of a point distributed exactly
    /// according to the measure (truncation plus float rounding).
    pub error_bound: f64,
}

/// Digit word of the `index`-th sample, drawn i.i.d. from the weights.
pub fn sample_word(cat: &Categorical, depth: usize, seed: u64, index: u64) -> Vec<usize> {
    let mut s = rng::stream(seed, Label::Sample, index);
    (0..depth).map(|_| cat.sample(s.next_u64())).collect()
}

/// `f_{i_1} ∘ … ∘ f_{i_d}(x0)` for i.i.d. digit words, `x0` the hull midpoint.
pub fn sample_measure(ifs: &SimilarityIFS, count: usize, depth: usize, seed: u64) -> Samples {
    let cat = Categorical::from_rationals(&ifs.weights);
    let hull = attractor_hull(ifs);
    let x0 = hull.midpoint().to_f64();
    let points = (0..count as u64)
        .map(|i| {
            let w = sample_word(&cat, depth, seed, i);
            w.iter().rev().fold(x0, |x, &k| ifs.maps[k].apply_f64(x))
        })
        .collect();
    Samples { points, error_bound: sample_error_bound(ifs, &hull, depth) }
}

/// `diam · ρ^d` plus a bound on accumulated rounding.
pub fn sample_error_bound(ifs: &SimilarityIFS, hull: &Interval, depth: usize) -> f64 {
    let rho = ifs.max_ratio();
    let diam = hull.diam().to_f64();
    let reach = hull.lo_f64().abs().max(hull.hi_f64().abs()) + diam;
    diam * fmath::powi(rho, depth as i32) + 4.0 * (depth as f64 + 1.0) * f64::EPSILON * reach
}

/// Exact value of the sample built from `word` (same construction as
/// [`sample_measure`]).
pub fn exact_point(ifs: &SimilarityIFS, word: &[usize]) -> FieldElem {
    let x0 = attractor_hull(ifs).midpoint();
    word.iter().rev().fold(x0, |x, &k| ifs.maps[k].apply(&x))
}

/// Words of length `m` over `n` symbols in lexicographic order.
pub fn words(n: usize, m: u32) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(m);
    (0..total).map(move |mut k| {
        let mut w = alloc::vec![0; m as usize];
        for slot in w.iter_mut().rev() {
            *slot = k % n;
            k /= n;
        }
        w
    })
}

/// `Φ^M`: compositions over all words of length `M` in lexicographic order
/// with product weights.
pub fn iterate_ifs(ifs: &SimilarityIFS, m: u32, cap: usize) -> Result<SimilarityIFS> {
    assert!(m >= 1);
    let n = ifs.len();
    let required = n.checked_pow(m).unwrap_or(usize::MAX);
    if required > cap {
        return Err(Error::SizeCapExceeded { required, cap });
    }
    let mut maps = ifs.maps.clone();
    let mut weights = ifs.weights.clone();
    for _ in 1..m {
        let mut nm = Vec::with_capacity(maps.len() * n);
        let mut nw = Vec::with_capacity(maps.len() * n);
        for (f, w) in maps.iter().zip(&weights) {
            for (g, v) in ifs.maps.iter().zip(&ifs.weights) {
                nm.push(f.compose(g));
                nw.push(w * v);
            }
        }
        maps = nm;
        weights = nw;
    }
    Ok(SimilarityIFS { maps, weights })
}

/// A pair of distinct words of length `m` with equal ratios and disjoint
/// hull images (0-based symbols).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatedPair {
    pub m: u32,
    pub i: Vec<usize>,
    pub j: Vec<usize>,
}

/// Breadth-first in `M`, then lexicographic in `(I, J)`.
pub fn find_separated_pair(ifs: &SimilarityIFS, max_m: u32) -> Result<SeparatedPair> {
    let hull = attractor_hull(ifs);
    let n = ifs.len();
    let mut maps = ifs.maps.clone();
    for m in 1..=max_m {
        if m > 1 {
            if maps.len().saturating_mul(n) > DEFAULT_SIZE_CAP {
                return Err(Error::SeparationExhausted { reached: m - 1 });
            }
            maps = maps.iter().flat_map(|f| ifs.maps.iter().map(move |g| f.compose(g))).collect();
        }
        let images: Vec<Interval> = maps.iter().map(|f| f.image(&hull)).collect();
        let mut by_ratio: BTreeMap<&FieldElem, Vec<usize>> = BTreeMap::new();
        for (k, f) in maps.iter().enumerate() {
            by_ratio.entry(&f.ratio).or_default().push(k);
        }
        let mut best: Option<(usize, usize)> = None;
        for group in by_ratio.values() {
            'outer: for (a, &x) in group.iter().enumerate() {
                if best.is_some_and(|(bi, _)| bi < x) {
                    break;
                }
                for &y in &group[a + 1..] {
                    if images[x].disjoint(&images[y]) {
                        if best.map_or(true, |b| (x, y) < b) {
                            best = Some((x, y));
                        }
                        break 'outer;
                    }
                }
            }
        }
        if let Some((x, y)) = best {
            let mut all = words(n, m);
            let i = all.nth(x).unwrap();
            let j = words(n, m).nth(y).unwrap();
            return Ok(SeparatedPair { m, i, j });
        }
    }
    Err(Error::SeparationExhausted { reached: max_m })
}
