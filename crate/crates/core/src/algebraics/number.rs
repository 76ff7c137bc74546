//! Real algebraic numbers given by a minimal polynomial and an isolating
//! interval.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::bigreal::{dyadic, BigReal};
use super::poly::{IntPolynomial, SturmChain};
use super::roots::{certified_roots, real_roots, refine, RealRoot, RootDisk};
use crate::{Error, Result};

/// Largest degree accepted by the irreducibility test.
pub const MAX_DEGREE: usize = 16;

/// A real algebraic number.
///
/// `poly` is primitive, irreducible over the rationals and has a positive
/// leading coefficient. For degree one the interval collapses to the exact
/// value; otherwise `poly` changes sign strictly between `lo` and `hi` and has
/// no other root in `[lo, hi]`.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraicNumber {
    poly: IntPolynomial,
    lo: BigRational,
    hi: BigRational,
}

impl AlgebraicNumber {
    pub fn from_rational(q: BigRational) -> Self {
        Self { poly: IntPolynomial::linear_with_root(&q).primitive(), lo: q.clone(), hi: q }
    }

    pub fn from_integer(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_integer(BigInt::from(n))
    }

    /// The unique root of `poly` in `[lo, hi]`. `poly` must be irreducible.
    pub fn new(poly: &IntPolynomial, lo: BigRational, hi: BigRational) -> Result<Self> {
        let poly = poly.primitive();
        if poly.deg() == 0 {
            return Err(Error::ZeroPolynomial);
        }
        if !is_irreducible(&poly)? {
            return Err(Error::Reducible);
        }
        if poly.deg() == 1 {
            let q = root_of_linear(&poly);
            if q < lo || q > hi {
                return Err(Error::BadIsolation { found: 0 });
            }
            return Ok(Self::from_rational(q));
        }
        let s = SturmChain::new(&poly);
        let at_lo = usize::from(poly.sign_at(&lo) == Ordering::Equal);
        let found = s.count(&lo, &hi) + at_lo;
        if found != 1 {
            return Err(Error::BadIsolation { found });
        }
        // irreducible of degree >= 2: no rational roots, endpoints are not roots
        Ok(Self { poly, lo, hi })
    }

    /// Largest real root of an irreducible polynomial.
    pub fn largest_real_root(poly: &IntPolynomial) -> Result<Self> {
        Self::nth_real_root(poly, usize::MAX)
    }

    /// The real root of `poly` closest to `approx`.
    pub fn real_root_near(poly: &IntPolynomial, approx: f64) -> Result<Self> {
        let p = poly.primitive();
        let roots = real_roots(&p, 53)?;
        let k = roots
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.approx() - approx).abs().total_cmp(&(b.1.approx() - approx).abs()))
            .map(|(k, _)| k)
            .ok_or(Error::BadIsolation { found: 0 })?;
        Self::nth_real_root(&p, k)
    }

    /// The `k`-th real root in increasing order (`usize::MAX` for the largest).
    pub fn nth_real_root(poly: &IntPolynomial, k: usize) -> Result<Self> {
        let p = poly.primitive();
        if !is_irreducible(&p)? {
            return Err(Error::Reducible);
        }
        let roots = real_roots(&p, 8)?;
        if roots.is_empty() {
            return Err(Error::BadIsolation { found: 0 });
        }
        let k = k.min(roots.len() - 1);
        Ok(match &roots[k] {
            RealRoot::Exact(q) => Self::from_rational(q.clone()),
            RealRoot::Open { lo, hi } => Self { poly: p, lo: lo.clone(), hi: hi.clone() },
        })
    }

    /// Builds the number without re-running the irreducibility test. The
    /// caller guarantees the invariants.
    pub(crate) fn from_parts_unchecked(poly: IntPolynomial, lo: BigRational, hi: BigRational) -> Self {
        Self { poly, lo, hi }
    }

    pub fn min_poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.deg()
    }

    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.poly.deg() == 1).then_some(&self.lo)
    }

    pub fn is_integer(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_integer())
    }

    pub fn is_algebraic_integer(&self) -> bool {
        self.poly.is_monic()
    }

    /// Same number with isolating interval of width at most `2^-bits`.
    pub fn refine(&self, bits: u32) -> Self {
        if self.degree() == 1 {
            return self.clone();
        }
        let tol = dyadic(BigInt::one(), -(bits as i64));
        match refine(&self.poly, RealRoot::Open { lo: self.lo.clone(), hi: self.hi.clone() }, &tol) {
            // an irreducible polynomial of degree >= 2 has no rational roots
            RealRoot::Exact(_) => unreachable!("rational root of irreducible polynomial"),
            RealRoot::Open { lo, hi } => Self { poly: self.poly.clone(), lo, hi },
        }
    }

    /// A ball of about `prec` significant bits around the number.
    pub fn ball(&self, prec: u32) -> BigReal {
        if let Some(q) = self.as_rational() {
            return BigReal::from_rational(q, prec);
        }
        let r = self.refine(prec + 4);
        let two = BigInt::from(2);
        let mid = (&r.lo + &r.hi) / &two;
        let half = (&r.hi - &r.lo) / &two;
        BigReal::from_rational(&mid, prec + 8).widen(&half).round(prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.ball(64).to_f64()
    }

    /// Equality of values, independent of the isolating intervals.
    pub fn same_value(&self, other: &Self) -> bool {
        if self.poly != other.poly {
            return false;
        }
        if self.degree() == 1 {
            return self.lo == other.lo;
        }
        let lo = (&self.lo).max(&other.lo);
        let hi = (&self.hi).min(&other.hi);
        // both intervals isolate a single root, and there are no rational roots
        lo < hi && SturmChain::new(&self.poly).count(lo, hi) == 1
    }

    /// Sign of the number; never ambiguous.
    pub fn signum(&self) -> Ordering {
        let mut x = self.clone();
        let mut bits = 8;
        loop {
            if x.lo.is_positive() || (x.lo.is_zero() && x.hi.is_positive() && x.degree() > 1) {
                return Ordering::Greater;
            }
            if x.hi.is_negative() || (x.hi.is_zero() && x.lo.is_negative() && x.degree() > 1) {
                return Ordering::Less;
            }
            if x.degree() == 1 {
                return x.lo.cmp(&BigRational::zero());
            }
            bits *= 2;
            x = x.refine(bits);
        }
    }

    /// Compares with a rational; exact.
    pub fn cmp_rational(&self, q: &BigRational) -> Ordering {
        if let Some(v) = self.as_rational() {
            return v.cmp(q);
        }
        // q is not a root, so refinement terminates
        let mut x = self.clone();
        let mut bits = 8;
        loop {
            if &x.lo >= q {
                return Ordering::Greater;
            }
            if &x.hi <= q {
                return Ordering::Less;
            }
            bits *= 2;
            x = x.refine(bits);
        }
    }

    pub fn neg(&self) -> Self {
        Self { poly: self.poly.negate_variable().primitive(), lo: -&self.hi, hi: -&self.lo }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// `1/x`; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if let Some(q) = self.as_rational() {
            return (!q.is_zero()).then(|| Self::from_rational(q.recip()));
        }
        let mut x = self.clone();
        let mut bits = 8;
        while !(x.lo.is_positive() || x.hi.is_negative()) {
            bits *= 2;
            x = x.refine(bits);
        }
        Some(Self { poly: x.poly.reversed().primitive(), lo: x.hi.recip(), hi: x.lo.recip() })
    }

    /// True when `self > 1` (certified).
    pub fn greater_than_one(&self) -> bool {
        self.cmp_rational(&BigRational::one()) == Ordering::Greater
    }
}

fn root_of_linear(p: &IntPolynomial) -> BigRational {
    BigRational::new(-p.coeffs()[0].clone(), p.coeffs()[1].clone())
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraicNumber({}, root in [{}, {}] ~ {})", self.poly, self.lo, self.hi, self.to_f64())
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "root of {} near {}", self.poly, self.to_f64()),
        }
    }
}

fn upper_sqrt(n: &num_bigint::BigUint) -> num_bigint::BigUint {
    let s = n.sqrt();
    if &(&s * &s) == n {
        s
    } else {
        s + 1u32
    }
}

/// Upper bound for `|z| + r` of a disk as a rational.
fn disk_reach(d: &RootDisk) -> BigRational {
    let n2 = (&d.re * &d.re + &d.im * &d.im).to_biguint().unwrap();
    dyadic(BigInt::from(upper_sqrt(&n2)), -(d.scale as i64)) + &d.radius
}

/// Positive divisors of `n`, found by trial division.
fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs();
    let Some(v) = n.to_u64() else {
        return Err(Error::DegreeTooLarge(0));
    };
    let mut out = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= v {
        if v % d == 0 {
            out.push(BigInt::from(d));
            if d != v / d {
                out.push(BigInt::from(v / d));
            }
        }
        d += 1;
        if d > 10_000_000 {
            return Err(Error::DegreeTooLarge(0));
        }
    }
    out.sort();
    Ok(out)
}

/// Decides irreducibility over the rationals of a primitive polynomial.
///
/// Any factor of degree `k <= n/2` has as roots a conjugation-closed set of
/// `k` roots of `p`, and its primitive form has a leading coefficient
/// dividing the leading coefficient of `p`. Each candidate is rebuilt from
/// certified root disks, rounded to integers once the coefficient error is
/// below `1/4`, and tested by exact division.
pub fn is_irreducible(p: &IntPolynomial) -> Result<bool> {
    let p = p.primitive();
    let n = p.deg();
    if n == 0 {
        return Err(Error::ZeroPolynomial);
    }
    if n == 1 {
        return Ok(true);
    }
    if n > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(n));
    }
    if !p.is_square_free() {
        return Ok(false);
    }
    if p.coeffs()[0].is_zero() {
        return Ok(false);
    }
    let divs = divisors(p.leading().unwrap())?;
    let mut prec = 64u32;
    'outer: loop {
        let disks = certified_roots(&p, prec)?;
        // groups: single real roots and conjugate pairs (upper root index)
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, d) in disks.iter().enumerate() {
            if d.im.is_zero() {
                groups.push(vec![i]);
            } else if d.im.is_positive() {
                let j = disks
                    .iter()
                    .position(|e| e.re == d.re && e.im == -&d.im)
                    .expect("conjugate disks");
                groups.push(vec![i, j]);
            }
        }
        let g = groups.len();
        for mask in 1u64..(1u64 << g) {
            let members: Vec<usize> =
                (0..g).filter(|k| mask >> k & 1 == 1).flat_map(|k| groups[k].iter().copied()).collect();
            let k = members.len();
            if k > n / 2 {
                continue;
            }
            let scale = disks[0].scale;
            // prod (2^P x - z) with Gaussian integer coefficients
            let mut re = vec![BigInt::one()];
            let mut im = vec![BigInt::zero()];
            for &m in &members {
                let d = &disks[m];
                let one = BigInt::one() << scale;
                let mut nre = vec![BigInt::zero(); re.len() + 1];
                let mut nim = vec![BigInt::zero(); im.len() + 1];
                for t in 0..re.len() {
                    nre[t + 1] += &re[t] * &one;
                    nim[t + 1] += &im[t] * &one;
                    nre[t] -= &re[t] * &d.re - &im[t] * &d.im;
                    nim[t] -= &re[t] * &d.im + &im[t] * &d.re;
                }
                re = nre;
                im = nim;
            }
            debug_assert!(im.iter().all(|c| c.is_zero()));
            let mut with_r = BigRational::one();
            let mut without_r = BigRational::one();
            for &m in &members {
                let reach = disk_reach(&disks[m]);
                with_r *= BigRational::one() + &reach;
                without_r *= BigRational::one() + reach - &disks[m].radius;
            }
            let err = with_r - without_r;
            let den = BigInt::one() << (scale * k as u64);
            for b in &divs {
                if BigRational::from_integer(b.clone()) * &err * BigInt::from(4) >= BigRational::one() {
                    prec *= 2;
                    if prec > 1 << 14 {
                        return Err(Error::PrecisionExhausted(prec));
                    }
                    continue 'outer;
                }
                let coeffs: Vec<BigInt> = re
                    .iter()
                    .map(|c| {
                        let v = BigRational::new(c * b, den.clone());
                        (v + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
                    })
                    .collect();
                let f = IntPolynomial::new(coeffs);
                if f.deg() == k && p.div_exact(&f).is_some() {
                    return Ok(false);
                }
            }
        }
        return Ok(true);
    }
}

/// Decides whether `x` is a Pisot number.
pub fn is_pisot(x: &AlgebraicNumber) -> Result<bool> {
    if !x.greater_than_one() {
        return Err(Error::NotGreaterThanOne);
    }
    if x.degree() == 1 {
        return Ok(x.is_integer());
    }
    let p = x.min_poly();
    if !p.is_monic() {
        return Ok(false);
    }
    // Roots of a reciprocal polynomial are closed under z -> 1/z, so beyond
    // degree two some conjugate other than x has modulus >= 1. Excluding them
    // also rules out roots on the unit circle, which keeps the loop below
    // finite.
    if p.is_reciprocal() && p.deg() > 2 {
        return Ok(false);
    }
    let sturm = SturmChain::new(p);
    let n_real = sturm.count_all();
    let minus_one = -BigRational::one();
    let inside = sturm.count(&minus_one, &BigRational::one());
    if inside + 1 != n_real {
        return Ok(false);
    }
    if n_real == p.deg() {
        return Ok(true);
    }
    let one = BigRational::one();
    let mut prec = 128;
    loop {
        let disks = certified_roots(p, prec)?;
        let mut undecided = false;
        for d in disks.iter().filter(|d| !d.im.is_zero()) {
            let (lo, hi) = d.modulus_bounds();
            if lo > one {
                return Ok(false);
            }
            if hi >= one {
                undecided = true;
            }
        }
        if !undecided {
            return Ok(true);
        }
        prec *= 2;
        if prec > 1 << 14 {
            return Err(Error::PrecisionExhausted(prec));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn golden() -> AlgebraicNumber {
        AlgebraicNumber::largest_real_root(&poly(&[-1, -1, 1])).unwrap()
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&poly(&[-1, -1, 1])).unwrap());
        assert!(is_irreducible(&poly(&[-2, 0, 1])).unwrap());
        assert!(is_irreducible(&poly(&[-1, -1, 0, 1])).unwrap());
        assert!(is_irreducible(&poly(&[1, 1, 1, 1, 1])).unwrap());
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2)
        assert!(!is_irreducible(&poly(&[4, 0, 0, 0, 1])).unwrap());
        // (2x - 1)(x^2 + 1)
        assert!(!is_irreducible(&poly(&[-1, 2, -1, 2])).unwrap());
        // x^4 - 10x^2 + 1, minimal polynomial of sqrt2 + sqrt3
        assert!(is_irreducible(&poly(&[1, 0, -10, 0, 1])).unwrap());
        // (x^2 - 2)(x^2 - 3)
        assert!(!is_irreducible(&poly(&[6, 0, -5, 0, 1])).unwrap());
        assert!(!is_irreducible(&poly(&[0, 1, 1])).unwrap());
    }

    #[test]
    fn pisot_examples() {
        assert!(is_pisot(&AlgebraicNumber::from_i64(2)).unwrap());
        assert!(is_pisot(&golden()).unwrap());
        let sqrt2 = AlgebraicNumber::largest_real_root(&poly(&[-2, 0, 1])).unwrap();
        assert!(!is_pisot(&sqrt2).unwrap());
        let plastic = AlgebraicNumber::largest_real_root(&poly(&[-1, -1, 0, 1])).unwrap();
        assert!(is_pisot(&plastic).unwrap());
        let trib = AlgebraicNumber::largest_real_root(&poly(&[-1, -1, -1, 1])).unwrap();
        assert!(is_pisot(&trib).unwrap());
        // Lehmer's polynomial: Salem, reciprocal
        let lehmer = AlgebraicNumber::largest_real_root(&poly(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])).unwrap();
        assert!(!is_pisot(&lehmer).unwrap());
        // 3/2 is not an algebraic integer
        let q = AlgebraicNumber::from_rational(BigRational::new(3.into(), 2.into()));
        assert!(!is_pisot(&q).unwrap());
        assert_eq!(is_pisot(&AlgebraicNumber::from_i64(1)).unwrap_err(), Error::NotGreaterThanOne);
        // x^3 - 2: real cube root of 2, complex conjugates have modulus 2^(1/3) > 1
        let c = AlgebraicNumber::largest_real_root(&poly(&[-2, 0, 0, 1])).unwrap();
        assert!(!is_pisot(&c).unwrap());
        // x^2 - 3x + 1 (phi^2) is Pisot; 2x^2 - 3x - 1 is not monic
        assert!(is_pisot(&AlgebraicNumber::largest_real_root(&poly(&[1, -3, 1])).unwrap()).unwrap());
        assert!(!is_pisot(&AlgebraicNumber::largest_real_root(&poly(&[-1, -3, 2])).unwrap()).unwrap());
    }

    #[test]
    fn reducible_rejected() {
        assert_eq!(AlgebraicNumber::largest_real_root(&poly(&[6, 0, -5, 0, 1])).unwrap_err(), Error::Reducible);
    }

    #[test]
    fn recip_and_abs() {
        let g = golden();
        let r = g.recip().unwrap();
        assert_eq!(r.min_poly(), &poly(&[-1, 1, 1]));
        assert!((r.to_f64() - 0.6180339887498949).abs() < 1e-15);
        let n = AlgebraicNumber::nth_real_root(&poly(&[-1, -1, 1]), 0).unwrap();
        assert_eq!(n.signum(), Ordering::Less);
        assert!((n.abs().to_f64() - 0.6180339887498949).abs() < 1e-15);
    }

    #[test]
    fn ball_is_tight() {
        let g = golden();
        let b = g.ball(200);
        assert!(b.radius() < dyadic(BigInt::one(), -190));
        // phi^2 - phi - 1 contains 0
        let v = b.mul(&b, 220).sub(&b, 220).sub(&BigReal::from_i64(1), 220);
        assert!(v.contains_zero());
    }

    proptest! {
        #[test]
        fn pisot_for_all_integers(n in 2i64..100_000) {
            prop_assert!(is_pisot(&AlgebraicNumber::from_i64(n)).unwrap());
        }

        #[test]
        fn refinement_keeps_root(bits in 1u32..200) {
            let g = golden();
            let r = g.refine(bits);
            prop_assert!(g.interval().0 <= r.interval().0 && r.interval().1 <= g.interval().1);
            let rr = r.refine(bits + 10);
            prop_assert!(r.interval().0 <= rr.interval().0 && rr.interval().1 <= r.interval().1);
        }

        #[test]
        fn products_of_linears_are_reducible(a in -20i64..20, b in 1i64..5, c in -20i64..20) {
            // (b x - a)(x^2 + c^2 + 1)
            let p = poly(&[-a, b]).mul(&poly(&[c * c + 1, 0, 1]));
            prop_assert!(!is_irreducible(&p).unwrap());
        }
    }
}
