//! Greedy beta-expansions, the Parry density and normality statistics.
//!
//! Orbits of exact inputs (rationals, or elements of `Q(beta)`) run in exact
//! integer arithmetic; floors are decided on balls and the precision grows
//! until the decision is certain. Ball inputs run at
//! `ceil(n log2 beta) + 64` bits and restart at higher precision on an
//! ambiguous floor, failing with [`Error::OrbitUndecidable`] once the cap is
//! reached.

mod normality;
mod orbit;
mod parry;
mod pushforward;

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::algebraics::{is_pisot, AlgebraicNumber, IntPolynomial, NumberField};
use crate::{fmath, Error, Result};

pub use normality::{normality_profile, normality_statistic, NormalityStat, GRID_POINTS};
pub use orbit::{beta_orbit, OrbitInput, OrbitRecord, GUARD_BITS, STORED_BITS};
pub use parry::{parry_density, OrbitOfOne, ParryDensity, DEFAULT_TRUNCATION};
pub use pushforward::{pushforward_samples, reduce_mod1, SmoothMap};

/// A base `beta > 1` with its Pisot flag.
#[derive(Clone)]
pub struct BetaBase {
    beta: AlgebraicNumber,
    pisot: bool,
    field: Arc<NumberField>,
    label: String,
    log2: f64,
    max_digit: u32,
}

impl BetaBase {
    pub fn new(beta: AlgebraicNumber) -> Result<Self> {
        let label = beta.to_string();
        Self::with_label(beta, &label)
    }

    pub fn with_label(beta: AlgebraicNumber, label: &str) -> Result<Self> {
        let pisot = is_pisot(&beta)?;
        let field = if beta.degree() == 1 { NumberField::rationals() } else { NumberField::new(label, beta.clone()) };
        let log2 = fmath::ln(beta.to_f64()) / core::f64::consts::LN_2;
        let max_digit = max_digit(&beta);
        Ok(Self { beta, pisot, field, label: label.to_string(), log2, max_digit })
    }

    pub fn integer(n: u64) -> Result<Self> {
        Self::new(AlgebraicNumber::from_integer(BigInt::from(n)))
    }

    /// The largest real root of `x^2 - x - 1`.
    pub fn golden() -> Self {
        Self::named("golden").unwrap()
    }

    /// `golden`/`phi`, `tribonacci`, `plastic`, `sqrt2`, or `None`.
    pub fn named(name: &str) -> Option<Self> {
        let (poly, label): (&[i64], &str) = match name {
            "golden" | "phi" => (&[-1, -1, 1], "phi"),
            "tribonacci" => (&[-1, -1, -1, 1], "tribonacci"),
            "plastic" => (&[-1, -1, 0, 1], "plastic"),
            "sqrt2" => (&[-2, 0, 1], "sqrt2"),
            _ => return None,
        };
        let b = AlgebraicNumber::largest_real_root(&IntPolynomial::from_i64s(poly)).ok()?;
        Self::with_label(b, label).ok()
    }

    pub fn beta(&self) -> &AlgebraicNumber {
        &self.beta
    }

    pub fn is_pisot(&self) -> bool {
        self.pisot
    }

    /// `Q(beta)`, generated by `beta` itself.
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn log2(&self) -> f64 {
        self.log2
    }

    pub fn to_f64(&self) -> f64 {
        self.beta.to_f64()
    }

    /// The largest digit that occurs, `ceil(beta) - 1`. This is `floor(beta)`
    /// unless `beta` is an integer.
    pub fn max_digit(&self) -> u32 {
        self.max_digit
    }
}

fn max_digit(beta: &AlgebraicNumber) -> u32 {
    if let Some(q) = beta.as_rational() {
        return (q.ceil().to_integer() - 1u32).to_u32().expect("base too large");
    }
    // an irrational ball eventually clears every integer
    let mut prec = 64;
    loop {
        if let Some(f) = beta.ball(prec).floor() {
            return f.to_u32().expect("base too large");
        }
        prec *= 2;
    }
}

impl fmt::Debug for BetaBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BetaBase({}, pisot={})", self.label, self.pisot)
    }
}

impl FromStr for BetaBase {
    type Err = Error;

    /// An integer, a rational `p/q`, a known name, or an integer polynomial
    /// in `x` (its largest real root).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(b) = Self::named(s) {
            return Ok(b);
        }
        if let Ok(q) = BigRational::from_str(s) {
            return Self::with_label(AlgebraicNumber::from_rational(q), s);
        }
        let p: IntPolynomial = s.parse()?;
        let b = AlgebraicNumber::largest_real_root(&p)?;
        Self::with_label(b, s)
    }
}
