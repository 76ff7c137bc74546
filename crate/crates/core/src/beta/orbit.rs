//! Orbits of `T_beta(x) = beta x mod 1`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::BetaBase;
use crate::algebraics::{BigReal, FieldElem};
use crate::{fmath, Error, Result};

/// Guard bits on top of `ceil(n log2 beta)` for ball inputs.
pub const GUARD_BITS: u32 = 64;
/// Mantissa bits kept for each stored orbit value.
pub const STORED_BITS: u32 = 128;
const MAX_MARGIN: u32 = 1 << 16;

/// Starting point of an orbit.
#[derive(Clone, Debug)]
pub enum OrbitInput {
    /// A rational or an element of `Q(beta)`.
    Exact(FieldElem),
    /// A point known only up to a ball.
    Ball(BigReal),
}

impl OrbitInput {
    pub fn rational(q: BigRational) -> Self {
        Self::Exact(FieldElem::from_rational(&crate::algebraics::NumberField::rationals(), q))
    }
}

/// Digits and orbit values `x_0 .. x_n` of a greedy expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitRecord {
    digits: Vec<u32>,
    orbit: Vec<BigReal>,
    precision_used: u32,
    exact: bool,
}

impl OrbitRecord {
    /// `d_1 .. d_n`.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// `x_0 .. x_n`, as balls of at most [`STORED_BITS`] bits.
    pub fn orbit(&self) -> &[BigReal] {
        &self.orbit
    }

    pub fn x0(&self) -> &BigReal {
        &self.orbit[0]
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Largest working precision (bits) needed by any floor decision.
    pub fn precision_used(&self) -> u32 {
        self.precision_used
    }

    /// Whether the orbit ran in exact arithmetic.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn orbit_f64(&self) -> Vec<f64> {
        self.orbit.iter().map(|x| x.to_f64()).collect()
    }

    /// `sum_k d_k beta^-k + beta^-n x_n` by Horner's rule.
    pub fn reconstruct(&self, b: &BetaBase) -> BigReal {
        let p = self.precision_used.max(STORED_BITS) + 64;
        let inv = b.beta().ball(p + 8).recip(p).expect("beta > 1");
        let mut v = self.orbit.last().unwrap().clone();
        for &d in self.digits.iter().rev() {
            v = v.add(&BigReal::from_i64(d as i64), p).mul(&inv, p);
        }
        v
    }

    /// Upper bound for `|reconstruct - x_0| / |x_0|` (absolute when `x_0`
    /// may be zero).
    pub fn reconstruction_error(&self, b: &BetaBase) -> BigRational {
        let p = self.precision_used.max(STORED_BITS) + 64;
        let diff = self.reconstruct(b).sub(self.x0(), p);
        let err = diff.lower().abs().max(diff.upper().abs());
        let x0 = self.x0();
        if x0.contains_zero() {
            err
        } else {
            err / x0.lower().abs().min(x0.upper().abs())
        }
    }
}

/// `n` steps of the greedy expansion of `x`.
///
/// An orbit value with `beta x_k` exactly an integer `m` gets digit `m` and
/// remainder zero.
pub fn beta_orbit(b: &BetaBase, x: &OrbitInput, n: usize) -> Result<OrbitRecord> {
    match x {
        OrbitInput::Exact(e) => exact_orbit(b, e, n),
        OrbitInput::Ball(r) => ball_orbit(b, r, n),
    }
}

/// `sum_i c_i beta^i / d`, numerators in the power basis of `Q(beta)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct State {
    pub c: Vec<BigInt>,
    pub d: BigInt,
}

impl State {
    fn normalize(&mut self) {
        let g = self.c.iter().fold(self.d.clone(), |g, c| g.gcd(c));
        if !g.is_one() {
            for c in &mut self.c {
                *c /= &g;
            }
            self.d /= &g;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|c| c.is_zero())
    }

    fn max_bits(&self) -> u64 {
        self.c.iter().map(|c| c.bits()).max().unwrap_or(0).max(self.d.bits())
    }
}

/// Exact multiply-and-floor engine for one base.
pub(crate) struct Engine<'a> {
    base: &'a BetaBase,
    /// Minimal polynomial coefficients, lowest first.
    a: Vec<BigInt>,
    pow: Vec<BigReal>,
    pow_prec: u32,
    pub max_prec: u32,
}

impl<'a> Engine<'a> {
    pub fn new(base: &'a BetaBase) -> Self {
        let a = base.beta().min_poly().coeffs().to_vec();
        Self { base, a, pow: Vec::new(), pow_prec: 0, max_prec: 0 }
    }

    fn degree(&self) -> usize {
        self.a.len() - 1
    }

    pub fn state_of(&self, x: &FieldElem) -> Result<State> {
        let n = self.degree();
        let coeffs: Vec<BigRational> = if let Some(q) = x.as_rational() {
            let mut v = vec![BigRational::zero(); n];
            v[0] = q.clone();
            v
        } else if x.field().generator().same_value(self.base.beta()) {
            x.coeffs().to_vec()
        } else {
            return Err(Error::FieldMismatch);
        };
        let d = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let c = coeffs.iter().map(|q| q.numer() * (&d / q.denom())).collect();
        let mut s = State { c, d };
        s.normalize();
        Ok(s)
    }

    pub fn to_field(&self, s: &State) -> FieldElem {
        let d = BigRational::from_integer(s.d.clone());
        let c = s.c.iter().map(|c| BigRational::from_integer(c.clone()) / &d).collect();
        FieldElem::from_coeffs(self.base.field(), c)
    }

    pub fn mul_beta(&self, s: &mut State) {
        let n = self.degree();
        let lc = &self.a[n];
        let top = s.c[n - 1].clone();
        for i in (1..n).rev() {
            s.c[i] = lc * &s.c[i - 1] - &top * &self.a[i];
        }
        s.c[0] = -(&top * &self.a[0]);
        if !lc.is_one() {
            s.d *= lc;
            s.normalize();
        }
    }

    pub fn sub_int(&self, s: &mut State, m: &BigInt) {
        s.c[0] -= m * &s.d;
    }

    fn exact_integer(&self, s: &State) -> Option<BigInt> {
        if s.c[1..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        let (q, r) = s.c[0].div_rem(&s.d);
        r.is_zero().then_some(q)
    }

    fn powers(&mut self, prec: u32) {
        if self.pow_prec >= prec {
            return;
        }
        let p = prec.max(2 * self.pow_prec);
        let b = self.base.beta().ball(p + 8);
        let mut acc = BigReal::from_i64(1);
        self.pow = (0..self.degree())
            .map(|_| {
                let cur = acc.clone();
                acc = acc.mul(&b, p + 8);
                cur
            })
            .collect();
        self.pow_prec = p;
    }

    /// A ball around the value with absolute error about `2^-margin`.
    pub fn ball(&mut self, s: &State, margin: u32) -> BigReal {
        if self.degree() == 1 {
            // [m, m + 1] 2^-e with m = floor(c 2^e / d)
            let e = margin + 8;
            let (m, r) = (&s.c[0] << e).div_mod_floor(&s.d);
            return if r.is_zero() {
                BigReal::from_dyadic(m, -(e as i64))
            } else {
                BigReal::from_parts((m << 1u32) + 1, BigUint::one(), -(e as i64) - 1)
            };
        }
        let p = s.max_bits() as u32 + margin + 8;
        self.powers(p);
        self.max_prec = self.max_prec.max(p);
        let mut acc = BigReal::zero();
        for (c, w) in s.c.iter().zip(&self.pow) {
            if !c.is_zero() {
                acc = acc.add(&w.mul_int(c, p), p);
            }
        }
        acc.div_int(&s.d, p)
    }

    /// The floor and a ball of the value (about [`STORED_BITS`] accurate).
    pub fn floor(&mut self, s: &State, step: usize) -> Result<(BigInt, BigReal)> {
        if let Some(m) = self.exact_integer(s) {
            return Ok((m.clone(), BigReal::from_integer(m)));
        }
        let mut margin = STORED_BITS;
        loop {
            let y = self.ball(s, margin);
            if let Some(f) = y.floor() {
                return Ok((f, y));
            }
            if margin >= MAX_MARGIN {
                return Err(Error::OrbitUndecidable { step });
            }
            margin *= 2;
        }
    }
}

fn exact_orbit(b: &BetaBase, x: &FieldElem, n: usize) -> Result<OrbitRecord> {
    let mut eng = Engine::new(b);
    let mut s = eng.state_of(x)?;
    let (f, x0) = eng.floor(&s, 0)?;
    if !f.is_zero() {
        return Err(Error::OutOfUnitInterval);
    }
    let mut digits = Vec::with_capacity(n);
    let mut orbit = Vec::with_capacity(n + 1);
    orbit.push(x0.round(STORED_BITS));
    for k in 1..=n {
        eng.mul_beta(&mut s);
        let (m, y) = eng.floor(&s, k)?;
        eng.sub_int(&mut s, &m);
        digits.push(m.to_u32().expect("digit fits"));
        orbit.push(y.sub_int(&m).round(STORED_BITS));
    }
    Ok(OrbitRecord { digits, orbit, precision_used: eng.max_prec.max(STORED_BITS), exact: true })
}

fn ball_orbit(b: &BetaBase, x: &BigReal, n: usize) -> Result<OrbitRecord> {
    match x.floor() {
        Some(f) if f.is_zero() => {}
        Some(_) => return Err(Error::OutOfUnitInterval),
        None => return Err(Error::OrbitUndecidable { step: 0 }),
    }
    let start = fmath::ceil(n as f64 * b.log2()) as u32 + GUARD_BITS;
    let cap = (4 * start).max(1024);
    let mut wp = start;
    loop {
        match ball_attempt(b, x, n, wp) {
            Ok(r) => return Ok(r),
            Err(step) if 2 * wp > cap => return Err(Error::OrbitUndecidable { step }),
            Err(_) => wp *= 2,
        }
    }
}

fn ball_attempt(b: &BetaBase, x0: &BigReal, n: usize, wp: u32) -> core::result::Result<OrbitRecord, usize> {
    let beta = b.beta().ball(wp + 8);
    let mut x = x0.clone();
    let mut digits = Vec::with_capacity(n);
    let mut orbit = Vec::with_capacity(n + 1);
    orbit.push(x0.clone().round(STORED_BITS));
    for k in 1..=n {
        let y = beta.mul(&x, wp);
        let m = y.floor().ok_or(k)?;
        x = y.sub_int(&m);
        digits.push(m.to_u32().expect("digit fits"));
        orbit.push(x.clone().round(STORED_BITS));
    }
    Ok(OrbitRecord { digits, orbit, precision_used: wp, exact: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraics::NumberField;
    use crate::rng::{self, Label};
    use proptest::prelude::*;
    use rand_core::RngCore;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn rat(n: i64, d: i64) -> OrbitInput {
        OrbitInput::rational(q(n, d))
    }

    #[test]
    fn binary_three_eighths() {
        let b = BetaBase::integer(2).unwrap();
        let r = beta_orbit(&b, &rat(3, 8), 6).unwrap();
        assert_eq!(r.digits(), [0, 1, 1, 0, 0, 0]);
        assert!(r.orbit()[6].is_exact() && r.orbit()[6].mid().is_zero());
    }

    #[test]
    fn binary_third_alternates() {
        let b = BetaBase::integer(2).unwrap();
        let r = beta_orbit(&b, &rat(1, 3), 8).unwrap();
        assert_eq!(r.digits(), [0, 1, 0, 1, 0, 1, 0, 1]);
        for (k, x) in r.orbit().iter().enumerate() {
            let want = if k % 2 == 0 { q(1, 3) } else { q(2, 3) };
            assert!(x.contains(&want));
        }
    }

    #[test]
    fn golden_boundary() {
        let b = BetaBase::golden();
        let x = FieldElem::generator(b.field()).recip().unwrap();
        let r = beta_orbit(&b, &OrbitInput::Exact(x), 5).unwrap();
        assert_eq!(r.digits(), [1, 0, 0, 0, 0]);
        assert!(r.orbit()[1].is_exact() && r.orbit()[1].mid().is_zero());
    }

    #[test]
    fn named_field_input() {
        // an element of the separately built field of phi
        let f = NumberField::named("phi").unwrap();
        let x = FieldElem::parse(&f, "phi - 1").unwrap();
        let r = beta_orbit(&BetaBase::golden(), &OrbitInput::Exact(x), 3).unwrap();
        assert_eq!(r.digits(), [1, 0, 0]);
        let s2 = FieldElem::parse(&NumberField::named("sqrt2").unwrap(), "sqrt2 - 1").unwrap();
        assert_eq!(beta_orbit(&BetaBase::golden(), &OrbitInput::Exact(s2), 3).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn rejects_outside() {
        let b = BetaBase::integer(3).unwrap();
        assert_eq!(beta_orbit(&b, &rat(1, 1), 3).unwrap_err(), Error::OutOfUnitInterval);
        assert_eq!(beta_orbit(&b, &rat(-1, 5), 3).unwrap_err(), Error::OutOfUnitInterval);
    }

    #[test]
    fn ambiguous_ball_reported() {
        let b = BetaBase::integer(2).unwrap();
        let x = BigReal::from_rational(&q(1, 2), 200).widen(&q(1, 1 << 20));
        assert_eq!(beta_orbit(&b, &OrbitInput::Ball(x), 10).unwrap_err(), Error::OrbitUndecidable { step: 1 });
        let near0 = BigReal::zero().widen(&q(1, 1 << 20));
        assert_eq!(beta_orbit(&b, &OrbitInput::Ball(near0), 10).unwrap_err(), Error::OrbitUndecidable { step: 0 });
    }

    #[test]
    fn ball_matches_exact() {
        for b in [BetaBase::golden(), BetaBase::named("tribonacci").unwrap(), "5/2".parse().unwrap()] {
            let x = q(5, 17);
            let n = 300;
            let p = (n as f64 * b.log2()) as u32 + 200;
            let e = beta_orbit(&b, &OrbitInput::rational(x.clone()), n).unwrap();
            let r = beta_orbit(&b, &OrbitInput::Ball(BigReal::from_rational(&x, p)), n).unwrap();
            assert_eq!(e.digits(), r.digits());
            assert!(!r.is_exact() && r.precision_used() >= (n as f64 * b.log2()) as u32 + GUARD_BITS);
        }
    }

    /// Binary digits by integer arithmetic.
    #[test]
    fn integer_base_oracle() {
        let mut s = rng::stream(1, Label::Test, 0);
        for _ in 0..50 {
            let den = (s.next_u64() % 100_000 + 2) as i64;
            let num = (s.next_u64() % den as u64) as i64;
            for base in [2i64, 3, 10] {
                let r = beta_orbit(&BetaBase::integer(base as u64).unwrap(), &rat(num, den), 100).unwrap();
                let mut x = num;
                for &d in r.digits() {
                    x *= base;
                    assert_eq!(d as i64, x / den);
                    x %= den;
                }
            }
        }
    }

    /// Greedy property checked in field arithmetic, independent of the engine.
    #[test]
    fn greedy_in_field() {
        for name in ["golden", "tribonacci", "plastic"] {
            let b = BetaBase::named(name).unwrap();
            let f = b.field().clone();
            let x0 = FieldElem::parse(&f, &alloc::format!("2/7*{0}^2 - 1/3*{0} + 1/5", b.label())).unwrap();
            let x0 = &x0 - &FieldElem::from_rational(&f, BigRational::from_integer(x0.floor()));
            let r = beta_orbit(&b, &OrbitInput::Exact(x0.clone()), 150).unwrap();
            let g = FieldElem::generator(&f);
            let one = FieldElem::one(&f);
            let mut x = x0;
            for (k, &d) in r.digits().iter().enumerate() {
                let y = &g * &x;
                x = &y - &FieldElem::from_i64(&f, d as i64);
                assert!(x.signum() != core::cmp::Ordering::Less, "{name} step {k}");
                // digit + 1 would leave a negative remainder
                assert!(x < one);
                assert!(r.orbit()[k + 1].overlaps(&x.ball(300)));
            }
        }
    }

    #[test]
    fn reconstruction_small() {
        let b = BetaBase::golden();
        let r = beta_orbit(&b, &rat(3, 11), 1000).unwrap();
        assert!(r.reconstruction_error(&b) <= q(1, 1) / BigRational::from_integer(BigInt::one() << 64u32));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn reconstruction_identity(num in 0u64..1_000_000, den in 1u64..1_000_000, which in 0usize..5, n in 1usize..400) {
            let bases = ["2", "3", "golden", "tribonacci", "5/2"];
            let b: BetaBase = bases[which].parse().unwrap();
            let x = q((num % den) as i64, den as i64);
            let r = beta_orbit(&b, &OrbitInput::rational(x), n).unwrap();
            prop_assert_eq!(r.len(), n);
            prop_assert!(r.digits().iter().all(|&d| d <= b.max_digit()));
            let tol = q(1, 1) / BigRational::from_integer(BigInt::one() << 64u32);
            prop_assert!(r.reconstruction_error(&b) <= tol);
        }
    }
}
