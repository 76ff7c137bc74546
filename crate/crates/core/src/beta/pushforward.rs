//! Images of samples under `C^1` diffeomorphisms.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::orbit::OrbitInput;
use crate::algebraics::{BigReal, FieldElem, IntPolynomial, SturmChain};
use crate::{Error, Result};

/// A smooth map `g` given symbolically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmoothMap {
    Identity,
    /// `a x + b`.
    Affine { a: BigRational, b: BigRational },
    /// `sum c_k x^k`, lowest degree first.
    Polynomial(Vec<BigRational>),
    Exp,
}

impl SmoothMap {
    /// Rejects `g` unless `g'` has no zero on `[lo, hi]`. Exact for affine
    /// and polynomial maps.
    pub fn check_diffeomorphism(&self, lo: &BigRational, hi: &BigRational) -> Result<()> {
        match self {
            Self::Identity | Self::Exp => Ok(()),
            Self::Affine { a, .. } if a.is_zero() => Err(Error::NotDiffeomorphism("slope is zero".into())),
            Self::Affine { .. } => Ok(()),
            Self::Polynomial(c) => {
                let dc: Vec<BigRational> =
                    c.iter().enumerate().skip(1).map(|(k, x)| x * BigRational::from_integer(BigInt::from(k))).collect();
                let l = dc.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
                let d = IntPolynomial::new(dc.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect());
                if d.is_zero() {
                    return Err(Error::NotDiffeomorphism("constant map".into()));
                }
                if d.degree() == Some(0) {
                    return Ok(());
                }
                let d = d.square_free_part();
                if d.sign_at(lo).is_eq() || SturmChain::new(&d).count(lo, hi) > 0 {
                    return Err(Error::NotDiffeomorphism(alloc::format!("derivative vanishes on [{lo}, {hi}]")));
                }
                Ok(())
            }
        }
    }

    /// Exact image, when `g` maps the field into itself.
    pub fn apply_exact(&self, x: &FieldElem) -> Option<FieldElem> {
        let f = x.field();
        let c = |q: &BigRational| FieldElem::from_rational(f, q.clone());
        match self {
            Self::Identity => Some(x.clone()),
            Self::Affine { a, b } => Some(&(&c(a) * x) + &c(b)),
            Self::Polynomial(k) => Some(k.iter().rev().fold(FieldElem::zero(f), |acc, ck| &(&acc * x) + &c(ck))),
            Self::Exp => None,
        }
    }

    pub fn apply_ball(&self, x: &BigReal, prec: u32) -> BigReal {
        let c = |q: &BigRational| BigReal::from_rational(q, prec + 8);
        match self {
            Self::Identity => x.clone(),
            Self::Affine { a, b } => c(a).mul(x, prec).add(&c(b), prec),
            Self::Polynomial(k) => k.iter().rev().fold(BigReal::zero(), |acc, ck| acc.mul(x, prec).add(&c(ck), prec)),
            Self::Exp => x.exp(prec),
        }
    }
}

impl fmt::Display for SmoothMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Identity => f.write_str("identity"),
            Self::Exp => f.write_str("exp"),
            Self::Affine { a, b } => write!(f, "affine:{a},{b}"),
            Self::Polynomial(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for SmoothMap {
    type Err = Error;

    /// `identity`, `exp`, `affine:a,b` or `poly:c0,c1,...`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let rats = |t: &str| -> Result<Vec<BigRational>> {
            t.split(',')
                .map(|x| BigRational::from_str(x.trim()).map_err(|_| Error::Parse(alloc::format!("bad coefficient {x:?}"))))
                .collect()
        };
        match s.split_once(':') {
            None if s == "identity" || s == "id" => Ok(Self::Identity),
            None if s == "exp" => Ok(Self::Exp),
            Some(("affine", rest)) => match rats(rest)?.as_slice() {
                [a, b] => Ok(Self::Affine { a: a.clone(), b: b.clone() }),
                _ => Err(Error::Parse("affine takes two coefficients".into())),
            },
            Some(("poly", rest)) => Ok(Self::Polynomial(rats(rest)?)),
            _ => Err(Error::Parse(alloc::format!("unknown map {s:?}"))),
        }
    }
}

/// `x mod 1` for a ball, and whether it changed. Fails if the ball
/// straddles an integer.
pub fn reduce_mod1(x: &BigReal) -> Result<(BigReal, bool)> {
    let f = x.floor().ok_or(Error::OrbitUndecidable { step: 0 })?;
    if f.is_zero() {
        Ok((x.clone(), false))
    } else {
        Ok((x.sub_int(&f), true))
    }
}

/// `g(x)` for each point after checking `g` on `[lo, hi]`, which must
/// contain all points. Exact points stay exact when possible; others become
/// balls of `prec` bits.
pub fn pushforward_samples(
    points: &[OrbitInput],
    g: &SmoothMap,
    lo: &BigRational,
    hi: &BigRational,
    prec: u32,
) -> Result<Vec<OrbitInput>> {
    g.check_diffeomorphism(lo, hi)?;
    Ok(points
        .iter()
        .map(|x| match x {
            OrbitInput::Exact(e) => match g.apply_exact(e) {
                Some(y) => OrbitInput::Exact(y),
                None => OrbitInput::Ball(g.apply_ball(&e.ball(prec + 16), prec)),
            },
            OrbitInput::Ball(b) => OrbitInput::Ball(g.apply_ball(b, prec)),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraics::NumberField;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ex(n: i64, d: i64) -> OrbitInput {
        OrbitInput::rational(q(n, d))
    }

    fn value(x: &OrbitInput) -> BigRational {
        match x {
            OrbitInput::Exact(e) => e.as_rational().unwrap().clone(),
            OrbitInput::Ball(b) => b.midpoint(),
        }
    }

    #[test]
    fn identity_unchanged() {
        let pts = [ex(1, 3), ex(2, 9)];
        let out = pushforward_samples(&pts, &SmoothMap::Identity, &q(0, 1), &q(1, 1), 128).unwrap();
        assert_eq!(value(&out[0]), q(1, 3));
        assert_eq!(value(&out[1]), q(2, 9));
    }

    #[test]
    fn affine_shift() {
        let g: SmoothMap = "affine:2,5".parse().unwrap();
        let out = pushforward_samples(&[ex(0, 1), ex(1, 1), ex(2, 3)], &g, &q(0, 1), &q(1, 1), 128).unwrap();
        assert_eq!(out.iter().map(value).collect::<Vec<_>>(), [q(5, 1), q(7, 1), q(19, 3)]);
        let (y, changed) = super::super::normality::reduce_input(&out[2]).unwrap();
        assert!(changed);
        assert_eq!(value(&y), q(1, 3));
    }

    #[test]
    fn polynomial_checks() {
        let g: SmoothMap = "poly:0,1,1/10".parse().unwrap();
        assert!(g.check_diffeomorphism(&q(0, 1), &q(1, 1)).is_ok());
        // derivative 1 + x/5 vanishes at -5
        assert!(matches!(g.check_diffeomorphism(&q(-6, 1), &q(0, 1)), Err(Error::NotDiffeomorphism(_))));
        assert!(matches!(g.check_diffeomorphism(&q(-5, 1), &q(0, 1)), Err(Error::NotDiffeomorphism(_))));
        let sq: SmoothMap = "poly:0,0,1".parse().unwrap();
        assert!(sq.check_diffeomorphism(&q(1, 10), &q(1, 1)).is_ok());
        assert!(sq.check_diffeomorphism(&q(0, 1), &q(1, 1)).is_err());
        assert!("poly:3".parse::<SmoothMap>().unwrap().check_diffeomorphism(&q(0, 1), &q(1, 1)).is_err());
        assert!("affine:0,1".parse::<SmoothMap>().unwrap().check_diffeomorphism(&q(0, 1), &q(1, 1)).is_err());
    }

    #[test]
    fn exp_ball() {
        let out = pushforward_samples(&[ex(1, 1)], &SmoothMap::Exp, &q(0, 1), &q(1, 1), 200).unwrap();
        let OrbitInput::Ball(b) = &out[0] else { panic!() };
        assert!(b.accuracy_bits() > 190);
        assert!((b.to_f64() - core::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn field_inputs_stay_exact() {
        let f = NumberField::named("sqrt2").unwrap();
        let x = FieldElem::parse(&f, "sqrt2 - 1").unwrap();
        let g: SmoothMap = "poly:1,0,1".parse().unwrap();
        let y = g.apply_exact(&x).unwrap();
        assert_eq!(y, FieldElem::parse(&f, "4 - 2*sqrt2").unwrap());
    }

    #[test]
    fn display_round_trip() {
        for s in ["identity", "exp", "affine:2,5", "poly:0,1,1/10"] {
            assert_eq!(s.parse::<SmoothMap>().unwrap().to_string(), s);
        }
    }
}
