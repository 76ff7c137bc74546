//! Arbitrary-precision midpoint-radius balls.

use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::fmath;

/// The closed ball `[(mid - rad) 2^exp, (mid + rad) 2^exp]`.
///
/// Every operation returns a ball that contains the exact result of the
/// operation applied to any points of the operand balls. `prec` arguments
/// are the number of mantissa bits retained in the midpoint.
#[derive(Clone, PartialEq, Eq)]
pub struct BigReal {
    mid: BigInt,
    rad: BigUint,
    exp: i64,
}

fn shl(x: &BigInt, k: u64) -> BigInt {
    x << k
}

/// `floor(x / 2^k)`.
fn shr_floor(x: &BigInt, k: u64) -> BigInt {
    x.div_floor(&(BigInt::one() << k))
}

/// `ceil(x / 2^k)` for non-negative `x`.
fn shr_ceil(x: &BigUint, k: u64) -> BigUint {
    let d = BigUint::one() << k;
    (x + &d - 1u32) / d
}

fn bits(x: &BigInt) -> u64 {
    x.bits()
}

impl BigReal {
    pub fn zero() -> Self {
        Self { mid: BigInt::zero(), rad: BigUint::zero(), exp: 0 }
    }

    pub fn from_integer(n: BigInt) -> Self {
        Self { mid: n, rad: BigUint::zero(), exp: 0 }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_integer(BigInt::from(n))
    }

    /// Exact dyadic `m * 2^e`.
    pub fn from_dyadic(m: BigInt, e: i64) -> Self {
        Self { mid: m, rad: BigUint::zero(), exp: e }
    }

    /// Builds a ball from raw parts.
    pub fn from_parts(mid: BigInt, rad: BigUint, exp: i64) -> Self {
        Self { mid, rad, exp }
    }

    pub fn mid(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad(&self) -> &BigUint {
        &self.rad
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Ball around `q` with about `prec` significant bits.
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        if q.is_integer() {
            return Self::from_integer(q.to_integer());
        }
        let (n, d) = (q.numer(), q.denom());
        let e = prec as i64 - (n.bits() as i64 - d.bits() as i64) + 1;
        let (num, den) = if e >= 0 {
            (shl(n, e as u64), d.clone())
        } else {
            (n.clone(), shl(d, (-e) as u64))
        };
        let (m, r) = num.div_mod_floor(&den);
        let rad = if r.is_zero() { BigUint::zero() } else { BigUint::one() };
        // floor(num/den) <= value < floor + 1; centre the ball on floor + 1/2
        if rad.is_zero() {
            Self { mid: m, rad, exp: -e }
        } else {
            Self { mid: (m << 1u32) + 1, rad, exp: -e - 1 }
        }
    }

    pub fn from_f64_exact(x: f64) -> Self {
        assert!(x.is_finite());
        if x == 0.0 {
            return Self::zero();
        }
        let b = x.to_bits();
        let sign = if b >> 63 == 1 { -1i64 } else { 1 };
        let e = ((b >> 52) & 0x7ff) as i64;
        let frac = b & ((1u64 << 52) - 1);
        let (m, e) = if e == 0 { (frac, -1074) } else { (frac | (1u64 << 52), e - 1075) };
        Self::from_dyadic(BigInt::from(sign) * BigInt::from(m), e)
    }

    /// Drops low mantissa bits so at most `prec` remain, widening the radius.
    pub fn round(mut self, prec: u32) -> Self {
        let b = bits(&self.mid).max(self.rad.bits());
        if b > prec as u64 {
            let k = b - prec as u64;
            self.mid = shr_floor(&self.mid, k);
            self.rad = shr_ceil(&self.rad, k) + 1u32;
            self.exp += k as i64;
        }
        self
    }

    pub fn neg(&self) -> Self {
        Self { mid: -&self.mid, rad: self.rad.clone(), exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        if self.mid.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    fn align(&self, other: &Self) -> (BigInt, BigUint, BigInt, BigUint, i64) {
        let e = self.exp.min(other.exp);
        let s1 = (self.exp - e) as u64;
        let s2 = (other.exp - e) as u64;
        (
            &self.mid << s1,
            &self.rad << s1,
            &other.mid << s2,
            &other.rad << s2,
            e,
        )
    }

    pub fn add(&self, other: &Self, prec: u32) -> Self {
        let (m1, r1, m2, r2, e) = self.align(other);
        Self { mid: m1 + m2, rad: r1 + r2, exp: e }.round(prec)
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: u32) -> Self {
        let a1 = self.mid.magnitude();
        let a2 = other.mid.magnitude();
        let rad = a1 * &other.rad + a2 * &self.rad + &self.rad * &other.rad;
        Self { mid: &self.mid * &other.mid, rad, exp: self.exp + other.exp }.round(prec)
    }

    pub fn mul_int(&self, k: &BigInt, prec: u32) -> Self {
        Self { mid: &self.mid * k, rad: &self.rad * k.magnitude(), exp: self.exp }.round(prec)
    }

    /// Multiplication by `2^k`; exact.
    pub fn mul_pow2(&self, k: i64) -> Self {
        Self { mid: self.mid.clone(), rad: self.rad.clone(), exp: self.exp + k }
    }

    /// Division by a nonzero integer.
    pub fn div_int(&self, k: &BigInt, prec: u32) -> Self {
        assert!(!k.is_zero());
        // make room for prec bits in the quotient
        let extra = (prec as u64 + k.bits()).saturating_sub(bits(&self.mid)) + 2;
        let m = &self.mid << extra;
        let r = &self.rad << extra;
        let ka = k.magnitude();
        let mut q = m.div_floor(&BigInt::from(ka.clone()));
        if k.is_negative() {
            q = -q;
        }
        let rad = (r + ka - 1u32) / ka + 1u32;
        Self { mid: q, rad, exp: self.exp - extra as i64 }.round(prec)
    }

    /// Certified sign, `None` when the ball contains zero (and is not exactly zero).
    pub fn sign(&self) -> Option<Ordering> {
        let m = self.mid.magnitude();
        if self.rad.is_zero() && m.is_zero() {
            return Some(Ordering::Equal);
        }
        if m <= &self.rad {
            return None;
        }
        Some(if self.mid.is_positive() { Ordering::Greater } else { Ordering::Less })
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.magnitude() <= &self.rad
    }

    /// Reciprocal; `None` if the ball contains zero.
    pub fn recip(&self, prec: u32) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        if self.mid.is_negative() {
            return self.neg().recip(prec).map(|r| r.neg());
        }
        let m = self.mid.magnitude();
        let lo = m - &self.rad;
        let hi = m + &self.rad;
        // 1/x * 2^E with E - exp = prec + bits(m) + 2
        let k = prec as u64 + m.bits() + 2;
        let n = BigUint::one() << k;
        let q_lo = &n / &hi;
        let q_hi = (&n + &lo - 1u32) / &lo;
        let mid2 = &q_lo + &q_hi;
        // centre (q_lo + q_hi)/2 at one extra bit
        let rad2 = &q_hi - &q_lo;
        Some(
            Self {
                mid: BigInt::from_biguint(Sign::Plus, mid2),
                rad: rad2,
                exp: -(k as i64) - self.exp - 1,
            }
            .round(prec),
        )
    }

    pub fn div(&self, other: &Self, prec: u32) -> Option<Self> {
        let r = other.recip(prec + 8)?;
        Some(self.mul(&r, prec))
    }

    pub fn square(&self, prec: u32) -> Self {
        self.mul(self, prec)
    }

    pub fn powu(&self, mut n: u64, prec: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::from_i64(1);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            n >>= 1;
            if n > 0 {
                base = base.square(prec);
            }
        }
        acc
    }

    /// `x^n` for signed `n`; `None` if `n < 0` and the ball contains zero.
    pub fn powi(&self, n: i64, prec: u32) -> Option<Self> {
        let p = self.powu(n.unsigned_abs(), prec + 8);
        if n < 0 {
            p.recip(prec)
        } else {
            Some(p.round(prec))
        }
    }

    pub fn lower(&self) -> BigRational {
        dyadic(&self.mid - BigInt::from(self.rad.clone()), self.exp)
    }

    pub fn upper(&self) -> BigRational {
        dyadic(&self.mid + BigInt::from(self.rad.clone()), self.exp)
    }

    pub fn midpoint(&self) -> BigRational {
        dyadic(self.mid.clone(), self.exp)
    }

    /// Upper bound of the radius as a rational.
    pub fn radius(&self) -> BigRational {
        dyadic(BigInt::from(self.rad.clone()), self.exp)
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lower() <= q && q <= &self.upper()
    }

    /// True when the two balls intersect.
    pub fn overlaps(&self, other: &Self) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// `other` lies inside `self`.
    pub fn contains_ball(&self, other: &Self) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    fn floor_dyadic(m: &BigInt, e: i64) -> BigInt {
        if e >= 0 {
            m << e as u64
        } else {
            shr_floor(m, (-e) as u64)
        }
    }

    /// `floor` of every point of the ball if they all agree.
    pub fn floor(&self) -> Option<BigInt> {
        let r = BigInt::from(self.rad.clone());
        let lo = Self::floor_dyadic(&(&self.mid - &r), self.exp);
        let hi = Self::floor_dyadic(&(&self.mid + &r), self.exp);
        (lo == hi).then_some(lo)
    }

    /// Ball with the integer `k` subtracted; exact.
    pub fn sub_int(&self, k: &BigInt) -> Self {
        self.sub(&Self::from_integer(k.clone()), u32::MAX)
    }

    /// Width of the ball in bits below the binary point: `-log2(2 rad 2^exp)`.
    pub fn accuracy_bits(&self) -> i64 {
        if self.rad.is_zero() {
            return i64::MAX;
        }
        -(self.exp + self.rad.bits() as i64 + 1)
    }

    pub fn to_f64(&self) -> f64 {
        let b = self.mid.bits();
        let (m, e) = if b > 62 {
            let k = b - 62;
            (shr_floor(&self.mid, k), self.exp + k as i64)
        } else {
            (self.mid.clone(), self.exp)
        };
        let mf = m.to_i64().unwrap() as f64;
        let e = e.clamp(-5000, 5000) as i32;
        libm::scalbn(mf, e)
    }

    /// `exp(x)`. Argument reduction by halving, Taylor series with a
    /// bounded remainder, then repeated squaring.
    pub fn exp(&self, prec: u32) -> Self {
        let w = prec + 32;
        let mag = self.abs().upper();
        // smallest k with |x| / 2^k <= 1/2
        let mut k = 0i64;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut m = mag;
        while m > half {
            m /= BigInt::from(2);
            k += 1;
        }
        let w = w + k as u32;
        let y = self.mul_pow2(-k);
        let mut sum = Self::from_i64(1);
        let mut term = Self::from_i64(1);
        let mut j = 1u64;
        // |y| <= 1/2 so terms shrink by at least a factor 2 per step
        loop {
            term = term.mul(&y, w).div_int(&BigInt::from(j), w);
            sum = sum.add(&term, w);
            j += 1;
            if term.abs().upper() < dyadic(BigInt::one(), -(w as i64) - 2) {
                break;
            }
        }
        // remainder sum_{i>=j} |y|^i / i! <= 2 |term| bound
        let tail = term.abs().upper() * BigInt::from(2);
        let mut s = sum.widen(&tail);
        for _ in 0..k {
            s = s.square(w);
        }
        s.round(prec)
    }

    /// Adds `e >= 0` to the radius.
    pub fn widen(&self, e: &BigRational) -> Self {
        if e.is_zero() {
            return self.clone();
        }
        // express e on the scale 2^exp, rounding up
        let sc = if self.exp >= 0 {
            e / BigRational::from_integer(BigInt::one() << self.exp as u64)
        } else {
            e * BigRational::from_integer(BigInt::one() << (-self.exp) as u64)
        };
        let up = sc.ceil().to_integer();
        Self { mid: self.mid.clone(), rad: &self.rad + up.magnitude(), exp: self.exp }
    }
}

/// `m * 2^e` as a rational.
pub(crate) fn dyadic(m: BigInt, e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(m << e as u64)
    } else {
        BigRational::new(m, BigInt::one() << (-e) as u64)
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({} +/- {:e})", self.to_f64(), fmath::abs(self.radius_f64()))
    }
}

impl BigReal {
    fn radius_f64(&self) -> f64 {
        let r = BigReal::from_dyadic(BigInt::from(self.rad.clone()), self.exp);
        r.to_f64()
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}
