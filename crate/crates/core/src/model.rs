//! Bernoulli models of homogeneous IFSs and their random measures.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_core::RngCore;

use crate::algebraics::{BigReal, FieldElem, NumberField};
use crate::rng::{self, Categorical, Label};
use crate::selfsimilar::{
    common_field, find_separated_pair, hull_of_maps, iterate_ifs, Interval, SeparatedPair, SimilarityIFS,
    SimilarityMap, DEFAULT_SIZE_CAP,
};
use crate::{fmath, Error, Result};

/// One homogeneous IFS of a model: maps `x -> r x + t_u`.
#[derive(Clone, Debug)]
pub struct ModelIndex {
    label: String,
    ratio: FieldElem,
    translations: Vec<FieldElem>,
    weights: Vec<BigRational>,
    q: BigRational,
    r: f64,
    t: Vec<f64>,
    cat: Categorical,
}

impl ModelIndex {
    pub fn new(
        label: &str,
        ratio: FieldElem,
        translations: Vec<FieldElem>,
        weights: Vec<BigRational>,
        q: BigRational,
    ) -> Result<Self> {
        if translations.is_empty() || translations.len() != weights.len() {
            return Err(Error::InvalidModel(format!("index {label}: translations and weights differ in length")));
        }
        if weights.iter().any(|w| !w.is_positive()) || !q.is_positive() {
            return Err(Error::InvalidModel(format!("index {label}: weights must be positive")));
        }
        if !weights.iter().fold(BigRational::zero(), |a, b| a + b).is_one() {
            return Err(Error::InvalidModel(format!("index {label}: weights do not sum to 1")));
        }
        let one = FieldElem::one(ratio.field());
        if ratio.is_zero() || ratio.abs() >= one {
            return Err(Error::InvalidModel(format!("index {label}: ratio {ratio} is not a contraction")));
        }
        let r = ratio.to_f64();
        let t = translations.iter().map(|x| x.to_f64()).collect();
        let cat = Categorical::from_rationals(&weights);
        Ok(Self { label: label.to_string(), ratio, translations, weights, q, r, t, cat })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ratio(&self) -> &FieldElem {
        &self.ratio
    }

    pub fn translations(&self) -> &[FieldElem] {
        &self.translations
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    /// Selection probability of this index.
    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn ratio_f64(&self) -> f64 {
        self.r
    }

    pub fn translations_f64(&self) -> &[f64] {
        &self.t
    }

    pub fn digit_law(&self) -> &Categorical {
        &self.cat
    }

    /// Number of maps `k_i`.
    pub fn len(&self) -> usize {
        self.translations.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_degenerate(&self) -> bool {
        self.translations.len() == 1
    }

    pub fn maps(&self) -> Vec<SimilarityMap> {
        self.translations
            .iter()
            .map(|t| SimilarityMap::new(self.ratio.clone(), t.clone()).expect("validated"))
            .collect()
    }

    /// `-log |r|`.
    pub fn roof(&self) -> f64 {
        -fmath::ln(fmath::abs(self.r))
    }
}

/// A finite list of homogeneous IFSs with a Bernoulli selection law.
#[derive(Clone, Debug)]
pub struct Model {
    indices: Vec<ModelIndex>,
    q_cat: Categorical,
    hull: Interval,
    pair: Option<SeparatedPair>,
}

impl Model {
    pub fn new(indices: Vec<ModelIndex>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidModel("no indices".into()));
        }
        let total = indices.iter().fold(BigRational::zero(), |a, i| a + &i.q);
        if !total.is_one() {
            return Err(Error::InvalidModel(format!("selection law sums to {total}, not 1")));
        }
        let field = common_field(indices.iter().flat_map(|i| core::iter::once(&i.ratio).chain(&i.translations)))?;
        let indices = indices
            .into_iter()
            .map(|i| {
                let ratio = i.ratio.lift(&field)?;
                let ts = i.translations.iter().map(|t| t.lift(&field)).collect::<Result<Vec<_>>>()?;
                ModelIndex::new(&i.label, ratio, ts, i.weights, i.q)
            })
            .collect::<Result<Vec<_>>>()?;
        let maps: Vec<SimilarityMap> = indices.iter().flat_map(|i| i.maps()).collect();
        let hull = hull_of_maps(&maps);
        let q: Vec<BigRational> = indices.iter().map(|i| i.q.clone()).collect();
        Ok(Self { indices, q_cat: Categorical::from_rationals(&q), hull, pair: None })
    }

    pub fn indices(&self) -> &[ModelIndex] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.indices[0].ratio.field()
    }

    /// Convex hull of the attractor of all maps of all indices. Every
    /// random set `Y^(omega)` lies inside it.
    pub fn hull(&self) -> &Interval {
        &self.hull
    }

    /// The separated pair the model was built from, if any.
    /// Records the pair the model was built from; used when loading saved
    /// models.
    pub fn with_separated_pair(mut self, pair: Option<SeparatedPair>) -> Self {
        self.pair = pair;
        self
    }

    pub fn separated_pair(&self) -> Option<&SeparatedPair> {
        self.pair.as_ref()
    }

    pub fn selection_law(&self) -> &Categorical {
        &self.q_cat
    }

    pub fn max_ratio(&self) -> f64 {
        self.indices.iter().map(|i| fmath::abs(i.r)).fold(0.0, f64::max)
    }

    pub fn orientation_preserving(&self) -> bool {
        self.indices.iter().all(|i| i.r > 0.0)
    }

    /// `sum_i q_i (-log |r_i|)`.
    pub fn mean_roof(&self) -> f64 {
        self.indices.iter().map(|i| i.q.to_f64().unwrap() * i.roof()).sum()
    }

    /// Smallest `d` with `max|r|^d diam(K) < 1e-12`.
    pub fn default_depth(&self) -> usize {
        let diam = self.hull.diam().to_f64();
        if diam <= 0.0 {
            return 1;
        }
        let rho = self.max_ratio();
        let (mut d, mut x) = (1, rho * diam);
        while x >= 1e-12 {
            d += 1;
            x *= rho;
        }
        d
    }

    /// Same model with all translations multiplied by `c`.
    pub fn rescaled(&self, c: &FieldElem) -> Result<Self> {
        let idx = self
            .indices
            .iter()
            .map(|i| {
                let ts = i.translations.iter().map(|t| t * c).collect();
                ModelIndex::new(&i.label, i.ratio.clone(), ts, i.weights.clone(), i.q.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        let mut m = Self::new(idx)?;
        m.pair = self.pair.clone();
        Ok(m)
    }
}

/// Label for an iterated word, 1-based symbols.
fn word_label(w: &[usize], n: usize) -> String {
    let parts: Vec<String> = w.iter().map(|c| (c + 1).to_string()).collect();
    if n < 10 {
        parts.concat()
    } else {
        parts.join(".")
    }
}

/// Builds the Bernoulli model from an IFS via a separated pair of words.
pub fn build_model(ifs: &SimilarityIFS, max_m: u32) -> Result<Model> {
    let pair = find_separated_pair(ifs, max_m)?;
    let it = iterate_ifs(ifs, pair.m, DEFAULT_SIZE_CAP)?;
    let n = ifs.len();
    let pos = |w: &[usize]| w.iter().fold(0usize, |a, &c| a * n + c);
    let (a, b) = (pos(&pair.i), pos(&pair.j));
    let (fa, fb) = (&it.maps()[a], &it.maps()[b]);
    let (pa, pb) = (&it.weights()[a], &it.weights()[b]);
    let q0 = pa + pb;
    let mut indices = vec![ModelIndex::new(
        "0",
        fa.ratio().clone(),
        vec![fa.translation().clone(), fb.translation().clone()],
        vec![pa / &q0, pb / &q0],
        q0,
    )?];
    for (k, w) in crate::selfsimilar::words(n, pair.m).enumerate() {
        if k == a || k == b {
            continue;
        }
        let f = &it.maps()[k];
        indices.push(ModelIndex::new(
            &word_label(&w, n),
            f.ratio().clone(),
            vec![f.translation().clone()],
            vec![BigRational::one()],
            it.weights()[k].clone(),
        )?);
    }
    let mut m = Model::new(indices)?;
    m.pair = Some(pair);
    Ok(m)
}

/// Result of [`verify_ssc`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SscReport {
    /// Smallest gap over all indices; `None` when every index has a single
    /// map (vacuously separated).
    pub min_gap: Option<FieldElem>,
    /// Gap per index, `None` for single-map indices.
    pub gaps: Vec<Option<FieldElem>>,
}

/// Minimum gap between the images `f_u(Conv K)` within each index.
pub fn verify_ssc(m: &Model) -> Result<SscReport> {
    let k = m.hull();
    let mut gaps = Vec::with_capacity(m.len());
    let mut min_gap: Option<FieldElem> = None;
    for (idx, i) in m.indices().iter().enumerate() {
        if i.is_degenerate() {
            gaps.push(None);
            continue;
        }
        let mut images: Vec<Interval> = i.maps().iter().map(|f| f.image(k)).collect();
        images.sort_by(|a, b| a.lo.cmp(&b.lo));
        let g = images.windows(2).map(|w| &w[1].lo - &w[0].hi).min().unwrap();
        if g.signum() != Ordering::Greater {
            return Err(Error::SscViolated { index: idx });
        }
        if min_gap.as_ref().map_or(true, |x| &g < x) {
            min_gap = Some(g.clone());
        }
        gaps.push(Some(g));
    }
    Ok(SscReport { min_gap, gaps })
}

/// An infinite selection word `omega`, read lazily.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaWord {
    source: OmegaSource,
    offset: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum OmegaSource {
    /// i.i.d. symbols from the selection law, stream `(seed, Omega, stream)`.
    Streamed { seed: u64, stream: u64 },
    /// A fixed word repeated forever.
    Periodic(Arc<[usize]>),
}

impl OmegaWord {
    pub fn streamed(seed: u64, stream: u64) -> Self {
        Self { source: OmegaSource::Streamed { seed, stream }, offset: 0 }
    }

    /// The periodic word `ppp...`.
    pub fn periodic(p: Vec<usize>) -> Self {
        assert!(!p.is_empty());
        Self { source: OmegaSource::Periodic(p.into()), offset: 0 }
    }

    /// `sigma^k omega`.
    pub fn shift(&self, k: u64) -> Self {
        Self { source: self.source.clone(), offset: self.offset + k }
    }

    /// The first `n` symbols.
    pub fn symbols(&self, m: &Model, n: usize) -> Vec<usize> {
        match &self.source {
            OmegaSource::Streamed { seed, stream } => {
                let mut s = rng::stream(*seed, Label::Omega, *stream);
                s.set_word_pos(2 * self.offset as u128);
                (0..n).map(|_| m.q_cat.sample(s.next_u64())).collect()
            }
            OmegaSource::Periodic(p) => {
                let l = p.len() as u64;
                (0..n as u64).map(|k| p[((self.offset + k) % l) as usize]).collect()
            }
        }
    }
}

/// A point `Pi_omega(u)` from a truncated digit word.
#[derive(Clone, Debug, PartialEq)]
pub struct CodedPoint {
    pub value: f64,
    /// Distance bound to the exact coded point (truncation and rounding).
    pub error: f64,
    /// `u_1 .. u_n`, 0-based.
    pub digits: Vec<u8>,
}

impl CodedPoint {
    /// Exact value of the truncated sum plus `P_n mid(K)`.
    pub fn exact(&self, m: &Model, omega: &[usize]) -> FieldElem {
        let mid = m.hull().midpoint();
        let mut acc = mid;
        for (k, &u) in self.digits.iter().enumerate().rev() {
            let i = &m.indices[omega[k]];
            acc = &(&i.ratio * &acc) + &i.translations[u as usize];
        }
        acc
    }

    /// A ball certified to contain `Pi_omega(u)` for every continuation of
    /// the digits: the prefix image of the hull, evaluated in ball
    /// arithmetic at `prec` bits.
    pub fn certified_ball(&self, m: &Model, omega: &[usize], prec: u32) -> BigReal {
        let wp = prec + 16;
        let maps: Vec<(BigReal, Vec<BigReal>)> = m
            .indices
            .iter()
            .map(|i| (i.ratio.ball(wp), i.translations.iter().map(|t| t.ball(wp)).collect()))
            .collect();
        let mut acc = m.hull().midpoint().ball(wp);
        let mut scale = m.hull().diam().ball(64).mul_pow2(-1);
        for (k, &u) in self.digits.iter().enumerate().rev() {
            let (r, ts) = &maps[omega[k]];
            acc = r.mul(&acc, wp).add(&ts[u as usize], wp);
            scale = scale.mul(&r.abs(), 64);
        }
        acc.widen(&scale.upper())
    }
}

/// `sum_{k<=n} (prod_{j<k} r_{omega_j}) t_{u_k}`, the tail replaced by the
/// image of the hull midpoint, with its error bound.
pub fn coded_value(m: &Model, omega: &[usize], digits: &[u8]) -> (f64, f64) {
    let mut x = 0.0;
    let mut p = 1.0;
    let mut reach = 0.0f64;
    for (k, &u) in digits.iter().enumerate() {
        let i = &m.indices[omega[k]];
        let term = p * i.t[u as usize];
        x += term;
        reach = reach.max(fmath::abs(x)) + fmath::abs(term);
        p *= i.r;
    }
    let mid = 0.5 * (m.hull.lo_f64() + m.hull.hi_f64());
    let diam = m.hull.hi_f64() - m.hull.lo_f64();
    x += p * mid;
    let n = digits.len() as f64;
    let err = fmath::abs(p) * diam * 0.5 + 4.0 * (n + 2.0) * f64::EPSILON * (reach + fmath::abs(mid));
    (x, err)
}

/// Digits `u_k ~ p_{omega_k}` for one point, from stream `(seed, Digits, index)`.
pub fn draw_digits(m: &Model, omega: &[usize], seed: u64, index: u64) -> Vec<u8> {
    let mut s = rng::stream(seed, Label::Digits, index);
    omega
        .iter()
        .map(|&i| {
            let idx = &m.indices[i];
            if idx.is_degenerate() {
                0
            } else {
                idx.cat.sample(s.next_u64()) as u8
            }
        })
        .collect()
}

/// `count` points of `eta^(omega)` at truncation `depth`.
pub fn sample_eta(m: &Model, omega: &OmegaWord, count: usize, depth: usize, seed: u64) -> Vec<CodedPoint> {
    let w = omega.symbols(m, depth);
    (0..count as u64)
        .map(|k| {
            let digits = draw_digits(m, &w, seed, k);
            let (value, error) = coded_value(m, &w, &digits);
            CodedPoint { value, error, digits }
        })
        .collect()
}

/// Joint sampling of `omega ~ q^N` (fresh per point) and `u ~ eta-bar^(omega)`.
pub fn sample_disintegration(m: &Model, count: usize, depth: usize, seed: u64) -> Vec<f64> {
    (0..count as u64).map(|k| disintegration_point(m, depth, seed, k).1.value).collect()
}

/// Point `k` of [`sample_disintegration`] with its coding `omega`.
pub fn disintegration_point(m: &Model, depth: usize, seed: u64, k: u64) -> (Vec<usize>, CodedPoint) {
    let w = OmegaWord::streamed(seed, k).symbols(m, depth);
    let digits = draw_digits(m, &w, seed, k);
    let (value, error) = coded_value(m, &w, &digits);
    (w, CodedPoint { value, error, digits })
}

/// `prod_k max_u p_u^(omega_k)`, an upper bound for the mass of any
/// cylinder of length `n` under `eta^(omega)`.
pub fn atom_mass_bound(m: &Model, omega_prefix: &[usize]) -> BigRational {
    omega_prefix.iter().fold(BigRational::one(), |acc, &i| {
        let mx = m.indices[i].weights.iter().max().unwrap();
        acc * mx
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfsimilar::sample_measure;
    use crate::stats::ks_two_sample;
    use proptest::prelude::*;
    use rand_core::RngCore;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn fq(n: i64, d: i64) -> FieldElem {
        FieldElem::from_rational(&NumberField::rationals(), q(n, d))
    }

    fn map(s: (i64, i64), t: (i64, i64)) -> SimilarityMap {
        SimilarityMap::new(fq(s.0, s.1), fq(t.0, t.1)).unwrap()
    }

    fn cantor() -> SimilarityIFS {
        SimilarityIFS::uniform(vec![map((1, 3), (0, 1)), map((1, 3), (2, 3))]).unwrap()
    }

    fn three() -> SimilarityIFS {
        SimilarityIFS::uniform(vec![map((1, 3), (0, 1)), map((1, 3), (1, 3)), map((1, 3), (2, 3))]).unwrap()
    }

    fn mixed() -> SimilarityIFS {
        SimilarityIFS::uniform(vec![map((1, 2), (0, 1)), map((1, 3), (2, 3))]).unwrap()
    }

    #[test]
    fn cantor_model() {
        let m = build_model(&cantor(), 8).unwrap();
        assert_eq!(m.len(), 1);
        let i = &m.indices()[0];
        assert_eq!(i.q(), &q(1, 1));
        assert_eq!(i.ratio(), &fq(1, 3));
        assert_eq!(i.translations(), [fq(0, 1), fq(2, 3)]);
        assert_eq!(i.weights(), [q(1, 2), q(1, 2)]);
        assert_eq!(verify_ssc(&m).unwrap().min_gap, Some(fq(1, 3)));
    }

    #[test]
    fn three_map_model() {
        let m = build_model(&three(), 8).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.indices()[0].q(), &q(2, 3));
        assert_eq!(m.indices()[0].translations(), [fq(0, 1), fq(2, 3)]);
        assert_eq!(m.indices()[0].weights(), [q(1, 2), q(1, 2)]);
        assert_eq!(m.indices()[1].q(), &q(1, 3));
        assert_eq!(m.indices()[1].translations(), [fq(1, 3)]);
        assert_eq!(m.indices()[1].label(), "2");
        // q_0 p_0(1) = p_1 exactly
        assert_eq!(m.indices()[0].q() * &m.indices()[0].weights()[0], q(1, 3));
    }

    #[test]
    fn mixed_model_gap() {
        let m = build_model(&mixed(), 8).unwrap();
        assert_eq!(verify_ssc(&m).unwrap().min_gap, Some(fq(1, 6)));
        assert_eq!(m.indices()[0].ratio(), &fq(1, 6));
        let labels: Vec<&str> = m.indices().iter().map(|i| i.label()).collect();
        assert_eq!(labels, ["0", "11", "22"]);
    }

    #[test]
    fn vacuous_ssc() {
        let idx = ModelIndex::new("a", fq(1, 2), vec![fq(1, 2)], vec![q(1, 1)], q(1, 1)).unwrap();
        let m = Model::new(vec![idx]).unwrap();
        let r = verify_ssc(&m).unwrap();
        assert_eq!(r.min_gap, None);
        // a single atom: every sample sits at the fixed point 1
        let pts = sample_eta(&m, &OmegaWord::periodic(vec![0]), 10, 40, 1);
        for p in pts {
            assert!((p.value - 1.0).abs() <= p.error + 1e-15);
        }
    }

    #[test]
    fn ssc_violation_detected() {
        let idx = ModelIndex::new("a", fq(1, 2), vec![fq(0, 1), fq(1, 2)], vec![q(1, 2), q(1, 2)], q(1, 1)).unwrap();
        let m = Model::new(vec![idx]).unwrap();
        assert_eq!(verify_ssc(&m).unwrap_err(), Error::SscViolated { index: 0 });
    }

    #[test]
    fn degenerate_omega_gives_atom() {
        let m = build_model(&three(), 8).unwrap();
        let pts = sample_eta(&m, &OmegaWord::periodic(vec![1]), 20, 30, 4);
        // omega = 1111...: the forced point is the fixed point 1/2 of x/3 + 1/3
        for p in &pts {
            assert!((p.value - 0.5).abs() <= p.error + 1e-15);
        }
    }

    #[test]
    fn cantor_samples_in_cantor_set() {
        let m = build_model(&cantor(), 8).unwrap();
        let depth = 30;
        let omega = OmegaWord::streamed(2, 0);
        let w = omega.symbols(&m, depth);
        for p in sample_eta(&m, &omega, 200, depth, 3) {
            let x = p.exact(&m, &w);
            // ternary digits of the truncated point: only 0 and 2 up to depth
            let mut y = x.as_rational().unwrap().clone();
            for _ in 0..depth {
                y *= BigRational::from_integer(3.into());
                let d = y.floor();
                assert!(d != BigRational::one(), "digit 1 found");
                y -= d;
            }
            assert!((x.to_f64() - p.value).abs() <= p.error);
        }
    }

    #[test]
    fn disintegration_matches_measure() {
        for ifs in [cantor(), mixed()] {
            let m = build_model(&ifs, 8).unwrap();
            let a = sample_measure(&ifs, 100_000, 40, 1).points;
            let b = sample_disintegration(&m, 100_000, m.default_depth(), 2);
            let d = ks_two_sample(&a, &b);
            assert!(d < 0.01, "{d}");
        }
    }

    #[test]
    fn dynamical_self_similarity() {
        // eta^omega = sum_u p_u f_u eta^(sigma omega), for several shifts
        let m = build_model(&three(), 8).unwrap();
        let n = 100_000;
        let depth = m.default_depth();
        for k in [0u64, 3, 10] {
            let omega = OmegaWord::streamed(5, 0).shift(k);
            let i = &m.indices()[omega.symbols(&m, 1)[0]];
            let lhs: Vec<f64> = sample_eta(&m, &omega, n, depth, 6).iter().map(|p| p.value).collect();
            let shifted = sample_eta(&m, &omega.shift(1), n, depth, 7);
            let mut s = rng::stream(8, Label::Test, k);
            let rhs: Vec<f64> = shifted
                .iter()
                .map(|p| {
                    let u = i.digit_law().sample(s.next_u64());
                    i.ratio_f64() * p.value + i.translations_f64()[u]
                })
                .collect();
            let d = ks_two_sample(&lhs, &rhs);
            assert!(d < 3.0 / libm::sqrt(n as f64), "shift {k}: {d}");
        }
    }

    #[test]
    fn atom_bounds() {
        let m = build_model(&cantor(), 8).unwrap();
        assert_eq!(atom_mass_bound(&m, &[0; 5]), q(1, 32));
        let m3 = build_model(&three(), 8).unwrap();
        assert_eq!(atom_mass_bound(&m3, &[1, 1]), q(1, 1));
        let idx = ModelIndex::new("0", fq(1, 3), vec![fq(0, 1), fq(2, 3)], vec![q(1, 3), q(2, 3)], q(1, 1)).unwrap();
        let m = Model::new(vec![idx]).unwrap();
        assert_eq!(atom_mass_bound(&m, &[0, 0, 0]), q(8, 27));
    }

    #[test]
    fn depth_default() {
        let m = build_model(&cantor(), 8).unwrap();
        let d = m.default_depth();
        assert!(libm::pow(1.0 / 3.0, d as f64) < 1e-12);
        assert!(libm::pow(1.0 / 3.0, (d - 1) as f64) >= 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn atom_bound_monotone(seed in 0u64..1_000_000, n in 1usize..40) {
            let m = build_model(&three(), 8).unwrap();
            let w = OmegaWord::streamed(seed, 0).symbols(&m, n + 1);
            prop_assert!(atom_mass_bound(&m, &w[..n + 1]) <= atom_mass_bound(&m, &w[..n]));
        }

        #[test]
        fn weight_bookkeeping(a in 1i64..20, b in 1i64..20, c in 1i64..20) {
            let tot = a + b + c;
            let ifs = SimilarityIFS::new(three().maps().to_vec(), vec![q(a, tot), q(b, tot), q(c, tot)]).unwrap();
            let m = build_model(&ifs, 8).unwrap();
            let i0 = &m.indices()[0];
            prop_assert_eq!(i0.q() * &i0.weights()[0], q(a, tot));
            prop_assert_eq!(i0.q() * &i0.weights()[1], q(c, tot));
            prop_assert_eq!(m.indices()[1].q(), &q(b, tot));
        }
    }

    #[test]
    fn certified_ball_contains_deeper_points() {
        let m = build_model(&cantor(), 8).unwrap();
        for k in 0..20 {
            let (w, p) = disintegration_point(&m, 30, 11, k);
            let ball = p.certified_ball(&m, &w, 128);
            let deep = CodedPoint { digits: [p.digits.clone(), vec![1; 10]].concat(), ..p.clone() };
            let w2 = [w.clone(), vec![0; 10]].concat();
            assert!(ball.contains(deep.exact(&m, &w2).as_rational().unwrap()));
            assert!(ball.radius() < q(1, 1 << 40));
        }
    }
}
