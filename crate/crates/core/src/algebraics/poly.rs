//! Dense univariate polynomials with integer coefficients.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Integer polynomial, coefficients lowest degree first.
///
/// The representation is trimmed: the last coefficient is never zero. The
/// zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `x - r` scaled to integer coefficients.
    pub fn linear_with_root(r: &BigRational) -> Self {
        Self::new(vec![-r.numer().clone(), r.denom().clone()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, with zero mapped to 0.
    pub(crate) fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().unwrap().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// `p(-x)`.
    pub fn negate_variable(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `x^n p(1/x)` with `n` the degree.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// True when `p` equals `±x^n p(1/x)`: roots are closed under `z -> 1/z`.
    pub fn is_reciprocal(&self) -> bool {
        if self.coeffs.first().map_or(true, |c| c.is_zero()) {
            return false;
        }
        let r = self.reversed();
        r == *self || r == self.neg()
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigInt::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Homogenised value `d^n p(n/d)` for `x = n/d`, `d > 0`; same sign as `p(x)`.
    pub(crate) fn eval_homogeneous(&self, num: &BigInt, den: &BigInt) -> BigInt {
        let Some(deg) = self.degree() else {
            return BigInt::zero();
        };
        let mut acc = self.coeffs[deg].clone();
        let mut dp = den.clone();
        for i in (0..deg).rev() {
            acc = acc * num + &self.coeffs[i] * &dp;
            dp *= den;
        }
        acc
    }

    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        self.eval_homogeneous(x.numer(), x.denom()).sign_cmp()
    }

    pub(crate) fn to_rational(&self) -> Vec<BigRational> {
        self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect()
    }

    /// Clears denominators with a positive factor and divides by the content.
    /// The sign of the polynomial function is preserved.
    pub(crate) fn from_rational_positive(c: &[BigRational]) -> Self {
        let l = c.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let p = Self::new(c.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        let g = p.content();
        if g.is_zero() || g.is_one() {
            p
        } else {
            Self::new(p.coeffs.iter().map(|x| x / &g).collect())
        }
    }

    /// Exact quotient over the integers, if `other` divides `self` in `Z[x]`.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        let (q, r) = rat_divrem(&self.to_rational(), &other.to_rational());
        if !r.is_empty() {
            return None;
        }
        if q.iter().all(|c| c.is_integer()) {
            Some(Self::new(q.into_iter().map(|c| c.to_integer()).collect()))
        } else {
            None
        }
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let g = rat_gcd(&self.to_rational(), &other.to_rational());
        Self::from_rational_positive(&g).primitive()
    }

    pub fn is_square_free(&self) -> bool {
        self.gcd(&self.derivative()).deg() == 0
    }

    pub fn square_free_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.deg() == 0 {
            return self.primitive();
        }
        let (q, _) = rat_divrem(&self.to_rational(), &g.to_rational());
        Self::from_rational_positive(&q).primitive()
    }

    /// Integer bound `B` with every root in `(-B, B)` (Cauchy).
    pub(crate) fn root_bound(&self) -> BigInt {
        let lc = self.leading().expect("nonzero").abs();
        let m = self.coeffs[..self.deg()].iter().map(|c| c.abs()).max().unwrap_or_default();
        BigInt::from(2) + m.div_ceil(&lc)
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

fn rat_trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Euclidean division over Q; both results are trimmed.
pub(crate) fn rat_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut b = b.to_vec();
    rat_trim(&mut b);
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = a.to_vec();
    rat_trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let f = &r[r.len() - 1] / &lb;
        for (i, bc) in b.iter().enumerate() {
            let t = &f * bc;
            r[k + i] -= t;
        }
        q[k] = f;
        r.pop();
        rat_trim(&mut r);
    }
    rat_trim(&mut q);
    (q, r)
}

/// Monic gcd over Q.
pub(crate) fn rat_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    rat_trim(&mut x);
    rat_trim(&mut y);
    while !y.is_empty() {
        let (_, r) = rat_divrem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        for c in &mut x {
            *c = &*c / &l;
        }
    }
    x
}

/// Sturm sequence of a square-free polynomial, stored with positive scalings
/// so sign patterns are those of the true sequence.
#[derive(Clone, Debug)]
pub struct SturmChain {
    seq: Vec<IntPolynomial>,
}

impl SturmChain {
    pub fn new(p: &IntPolynomial) -> Self {
        let mut seq = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            seq.push(d);
        }
        while seq.len() >= 2 {
            let n = seq.len();
            let (_, r) = rat_divrem(&seq[n - 2].to_rational(), &seq[n - 1].to_rational());
            if r.is_empty() {
                break;
            }
            let neg: Vec<BigRational> = r.into_iter().map(|c| -c).collect();
            seq.push(IntPolynomial::from_rational_positive(&neg));
        }
        Self { seq }
    }

    fn variations<I: Iterator<Item = Ordering>>(signs: I) -> usize {
        let mut last = Ordering::Equal;
        let mut v = 0;
        for s in signs {
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations(self.seq.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.seq.iter().map(|p| {
            let lc = p.leading().unwrap().sign_cmp();
            if !positive && p.deg() % 2 == 1 {
                lc.reverse()
            } else {
                lc
            }
        }))
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    pub fn count_all(&self) -> usize {
        self.variations_at_infinity(false).saturating_sub(self.variations_at_infinity(true))
    }
}

/// Characteristic polynomial of `alpha^k` where `alpha` runs over the roots of
/// `p`, computed exactly through Newton's identities.
pub fn power_polynomial(p: &IntPolynomial, k: u32) -> IntPolynomial {
    let d = p.deg();
    assert!(d >= 1 && k >= 1);
    let lc = BigRational::from_integer(p.leading().unwrap().clone());
    // monic coefficients a_0..a_{d-1}
    let a: Vec<BigRational> = p.coeffs()[..d]
        .iter()
        .map(|c| BigRational::from_integer(c.clone()) / &lc)
        .collect();
    let kk = k as usize;
    let top = d * kk;
    let mut s = vec![BigRational::zero(); top + 1];
    s[0] = BigRational::from_integer(BigInt::from(d));
    for m in 1..=top {
        let mut acc = BigRational::zero();
        for i in 1..=d.min(m) {
            if i < m {
                acc += &a[d - i] * &s[m - i];
            } else {
                acc += &a[d - i] * BigRational::from_integer(BigInt::from(m));
            }
        }
        s[m] = -acc;
    }
    // power sums of the k-th powers
    let ps: Vec<BigRational> = (0..=d).map(|j| s[j * kk].clone()).collect();
    let mut e = vec![BigRational::zero(); d + 1];
    e[0] = BigRational::one();
    for j in 1..=d {
        let mut acc = BigRational::zero();
        for i in 1..=j {
            let t = &e[j - i] * &ps[i];
            if i % 2 == 1 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        e[j] = acc / BigRational::from_integer(BigInt::from(j));
    }
    let mut coeffs = vec![BigRational::zero(); d + 1];
    for (j, ej) in e.iter().enumerate() {
        coeffs[d - j] = if j % 2 == 0 { ej.clone() } else { -ej.clone() };
    }
    IntPolynomial::from_rational_positive(&coeffs).primitive()
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    /// Parses forms such as `"x^2 - x - 1"`, `"3*x^3 + 2x - 7"` or `"5"`.
    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace("**", "^");
        let err = |m: &str| Error::Parse(alloc::format!("{m} in polynomial '{s}'"));
        if text.is_empty() {
            return Err(err("empty input"));
        }
        let b = text.as_bytes();
        let mut pos = 0;
        let mut coeffs: Vec<BigInt> = Vec::new();
        while pos < b.len() {
            let mut negative = false;
            if b[pos] == b'+' || b[pos] == b'-' {
                negative = b[pos] == b'-';
                pos += 1;
            } else if pos != 0 {
                return Err(err("expected '+' or '-'"));
            }
            let start = pos;
            while pos < b.len() && b[pos].is_ascii_digit() {
                pos += 1;
            }
            let coeff: Option<BigInt> = if pos > start {
                Some(text[start..pos].parse().map_err(|_| err("bad coefficient"))?)
            } else {
                None
            };
            if pos < b.len() && b[pos] == b'*' {
                if coeff.is_none() {
                    return Err(err("dangling '*'"));
                }
                pos += 1;
                if pos >= b.len() || b[pos] != b'x' {
                    return Err(err("expected 'x' after '*'"));
                }
            }
            let mut power = 0usize;
            if pos < b.len() && b[pos] == b'x' {
                pos += 1;
                power = 1;
                if pos < b.len() && b[pos] == b'^' {
                    pos += 1;
                    let ps = pos;
                    while pos < b.len() && b[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    if ps == pos {
                        return Err(err("missing exponent"));
                    }
                    power = text[ps..pos].parse().map_err(|_| err("bad exponent"))?;
                }
            } else if coeff.is_none() {
                return Err(err("empty term"));
            }
            let mut c = coeff.unwrap_or_else(BigInt::one);
            if negative {
                c = -c;
            }
            if coeffs.len() <= power {
                coeffs.resize(power + 1, BigInt::zero());
            }
            coeffs[power] += c;
        }
        Ok(Self::new(coeffs))
    }
}

impl IntPolynomial {
    /// Round-trips through [`fmt::Display`].
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}
