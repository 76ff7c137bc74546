//! Arithmetic in a simple number field `Q(alpha)` with `alpha` a real
//! algebraic number.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::bigreal::BigReal;
use super::number::AlgebraicNumber;
use super::poly::{rat_divrem, IntPolynomial};
use super::roots::{real_roots, RealRoot};
use crate::{Error, Result};

/// `Q(alpha)` with a display name for the generator.
pub struct NumberField {
    name: String,
    generator: AlgebraicNumber,
    /// Monic minimal polynomial of the generator, lowest degree first.
    modulus: Vec<BigRational>,
    gen_ball: BigReal,
}

const CACHED_BITS: u32 = 256;

impl NumberField {
    pub fn new(name: &str, generator: AlgebraicNumber) -> Arc<Self> {
        let p = generator.min_poly();
        let lc = BigRational::from_integer(p.leading().unwrap().clone());
        let modulus = p.coeffs().iter().map(|c| BigRational::from_integer(c.clone()) / &lc).collect();
        let gen_ball = generator.ball(CACHED_BITS);
        Arc::new(Self { name: name.to_string(), generator, modulus, gen_ball })
    }

    /// The rationals, as the field generated by `0`.
    pub fn rationals() -> Arc<Self> {
        Self::new("q", AlgebraicNumber::from_i64(0))
    }

    /// Fields for a few constants by name: `phi` (or `golden`), `sqrt2`,
    /// `sqrt3`, `sqrt5`, `plastic`, `tribonacci`.
    pub fn named(name: &str) -> Option<Arc<Self>> {
        let (poly, canonical): (&[i64], &str) = match name {
            "phi" | "golden" => (&[-1, -1, 1], "phi"),
            "sqrt2" => (&[-2, 0, 1], "sqrt2"),
            "sqrt3" => (&[-3, 0, 1], "sqrt3"),
            "sqrt5" => (&[-5, 0, 1], "sqrt5"),
            "plastic" => (&[-1, -1, 0, 1], "plastic"),
            "tribonacci" => (&[-1, -1, -1, 1], "tribonacci"),
            _ => return None,
        };
        let g = AlgebraicNumber::largest_real_root(&IntPolynomial::from_i64s(poly)).ok()?;
        Some(Self::new(canonical, g))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generator(&self) -> &AlgebraicNumber {
        &self.generator
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    fn same(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.generator == other.generator
    }

    fn generator_ball(&self, prec: u32) -> BigReal {
        if prec <= CACHED_BITS - 8 {
            self.gen_ball.clone()
        } else {
            self.generator.ball(prec + 8)
        }
    }

    fn reduce(&self, mut c: Vec<BigRational>) -> Vec<BigRational> {
        let d = self.degree();
        while c.len() > d {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let k = c.len() - d;
            for (i, m) in self.modulus[..d].iter().enumerate() {
                c[k + i] -= &top * m;
            }
        }
        c.resize(d, BigRational::zero());
        c
    }

    /// Power sums `sum alpha_i^k`, `k = 0..=top`, over the conjugates.
    fn power_sums(&self, top: usize) -> Vec<BigRational> {
        let d = self.degree();
        let a = &self.modulus;
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
        s
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({} = {:?})", self.name, self.generator)
    }
}

/// An element `sum c_i alpha^i` of a [`NumberField`].
#[derive(Clone)]
pub struct FieldElem {
    field: Arc<NumberField>,
    c: Vec<BigRational>,
}

impl FieldElem {
    pub fn from_rational(field: &Arc<NumberField>, q: BigRational) -> Self {
        let mut c = vec![BigRational::zero(); field.degree()];
        c[0] = q;
        Self { field: field.clone(), c }
    }

    pub fn from_i64(field: &Arc<NumberField>, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(n.into()))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_i64(field, 0)
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_i64(field, 1)
    }

    /// The generator of the field.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        if field.is_rational() {
            return Self::from_rational(field, field.generator.as_rational().unwrap().clone());
        }
        let mut c = vec![BigRational::zero(); field.degree()];
        c[1] = BigRational::one();
        Self { field: field.clone(), c }
    }

    pub fn from_coeffs(field: &Arc<NumberField>, c: Vec<BigRational>) -> Self {
        Self { field: field.clone(), c: field.reduce(c) }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.c[1..].iter().all(|x| x.is_zero()).then_some(&self.c[0])
    }

    /// Moves a rational element into `field`.
    pub fn lift(&self, field: &Arc<NumberField>) -> Result<Self> {
        if self.field.same(field) {
            return Ok(Self { field: field.clone(), c: self.c.clone() });
        }
        match self.as_rational() {
            Some(q) => Ok(Self::from_rational(field, q.clone())),
            None => Err(Error::FieldMismatch),
        }
    }

    /// Brings two elements into a common field.
    pub fn unify(a: &Self, b: &Self) -> Result<(Self, Self)> {
        if a.field.same(&b.field) {
            return Ok((a.clone(), b.clone()));
        }
        if a.as_rational().is_some() {
            return Ok((a.lift(&b.field)?, b.clone()));
        }
        Ok((a.clone(), b.lift(&a.field)?))
    }

    fn pair(&self, other: &Self) -> (Self, Self) {
        Self::unify(self, other).expect("elements of different number fields")
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Self::from_rational(&self.field, q.recip()));
        }
        // extended Euclid: s a + t m = 1
        let m = self.field.modulus.clone();
        let (mut r0, mut r1) = (m, trim(self.c.clone()));
        let (mut s0, mut s1) = (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = rat_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        // r0 is a nonzero constant
        let k = r0[0].clone();
        let s: Vec<BigRational> = s0.into_iter().map(|x| x / &k).collect();
        Some(Self::from_coeffs(&self.field, s))
    }

    pub fn pow(&self, n: i64) -> Option<Self> {
        let mut base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Some(acc)
    }

    /// Ball around the value with about `prec` bits.
    pub fn ball(&self, prec: u32) -> BigReal {
        if let Some(q) = self.as_rational() {
            return BigReal::from_rational(q, prec);
        }
        let w = prec + 16;
        let g = self.field.generator_ball(w);
        let mut acc = BigReal::zero();
        for c in self.c.iter().rev() {
            acc = acc.mul(&g, w).add(&BigReal::from_rational(c, w), w);
        }
        acc.round(prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.ball(64).to_f64()
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        if let Some(q) = self.as_rational() {
            return q.cmp(&BigRational::zero());
        }
        if self.is_zero() {
            return Ordering::Equal;
        }
        let mut prec = 64;
        loop {
            if let Some(s) = self.ball(prec).sign() {
                return s;
            }
            prec *= 2;
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        if let Some(q) = self.as_rational() {
            return q.floor().to_integer();
        }
        // irrational: the ball eventually avoids every integer
        let mut prec = 64;
        loop {
            if let Some(f) = self.ball(prec).floor() {
                return f;
            }
            prec *= 2;
        }
    }

    /// Trace of `self^k` for `k = 0..=d`, from power sums of the generator.
    fn characteristic_polynomial(&self) -> Vec<BigRational> {
        let d = self.field.degree();
        let s = self.field.power_sums(d);
        let mut p = vec![BigRational::zero(); d + 1];
        let mut e = Self::one(&self.field);
        for slot in p.iter_mut().skip(1) {
            e = &e * self;
            *slot = e.c.iter().zip(&s).map(|(a, b)| a * b).fold(BigRational::zero(), |x, y| x + y);
        }
        // Newton: elementary symmetric functions from power sums
        let mut el = vec![BigRational::zero(); d + 1];
        el[0] = BigRational::one();
        for j in 1..=d {
            let mut acc = BigRational::zero();
            for i in 1..=j {
                let t = &el[j - i] * &p[i];
                if i % 2 == 1 {
                    acc += t;
                } else {
                    acc -= t;
                }
            }
            el[j] = acc / BigRational::from_integer(BigInt::from(j));
        }
        let mut out = vec![BigRational::zero(); d + 1];
        for (j, e) in el.into_iter().enumerate() {
            out[d - j] = if j % 2 == 0 { e } else { -e };
        }
        out
    }

    /// The element as a standalone real algebraic number.
    pub fn to_algebraic(&self) -> AlgebraicNumber {
        if let Some(q) = self.as_rational() {
            return AlgebraicNumber::from_rational(q.clone());
        }
        let cp = IntPolynomial::from_rational_positive(&self.characteristic_polynomial());
        // the characteristic polynomial is a power of the minimal polynomial
        let m = cp.square_free_part();
        if m.deg() == 1 {
            let q = BigRational::new(-m.coeffs()[0].clone(), m.coeffs()[1].clone());
            return AlgebraicNumber::from_rational(q);
        }
        let mut prec = 32;
        loop {
            let b = self.ball(prec);
            let roots = real_roots(&m, prec).expect("square-free");
            let hits: Vec<&RealRoot> =
                roots.iter().filter(|r| r.lo() <= &b.upper() && &b.lower() <= r.hi()).collect();
            if let [r] = hits[..] {
                let (lo, hi) = (r.lo().clone(), r.hi().clone());
                return AlgebraicNumber::from_parts_unchecked(m, lo, hi);
            }
            prec *= 2;
        }
    }

    /// Parses an arithmetic expression over rationals and the generator name,
    /// e.g. `"1/3"`, `"phi - 1"`, `"(1 + sqrt2)/4"`, `"phi^-2"`.
    pub fn parse(field: &Arc<NumberField>, s: &str) -> Result<Self> {
        let toks = tokenize(s)?;
        let mut p = Parser { toks: &toks, pos: 0, field, src: s };
        let v = p.expr()?;
        if p.pos != toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(v)
    }
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        match Self::unify(self, other) {
            Ok((a, b)) => a.c == b.c,
            Err(_) => false,
        }
    }
}

impl Eq for FieldElem {}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElem {
    /// Order by value. Panics for elements of unrelated fields.
    fn cmp(&self, other: &Self) -> Ordering {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return a.cmp(b);
        }
        (self - other).signum()
    }
}

impl<'a> Add for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, o: &'a FieldElem) -> FieldElem {
        let (a, b) = self.pair(o);
        let c = a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect();
        FieldElem { field: a.field, c }
    }
}

impl<'a> Sub for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &'a FieldElem) -> FieldElem {
        let (a, b) = self.pair(o);
        let c = a.c.iter().zip(&b.c).map(|(x, y)| x - y).collect();
        FieldElem { field: a.field, c }
    }
}

impl<'a> Mul for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &'a FieldElem) -> FieldElem {
        let (a, b) = self.pair(o);
        if let Some(q) = b.as_rational() {
            let c = a.c.iter().map(|x| x * q).collect();
            return FieldElem { field: a.field, c };
        }
        if let Some(q) = a.as_rational() {
            let c = b.c.iter().map(|x| x * q).collect();
            return FieldElem { field: b.field, c };
        }
        let mut out = vec![BigRational::zero(); 2 * a.c.len() - 1];
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        let c = a.field.reduce(out);
        FieldElem { field: a.field, c }
    }
}

impl<'a> Div for &'a FieldElem {
    type Output = FieldElem;
    /// Panics on division by zero.
    fn div(self, o: &'a FieldElem) -> FieldElem {
        self * &o.recip().expect("division by zero")
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { field: self.field.clone(), c: self.c.iter().map(|x| -x).collect() }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElem {
    /// Prints the canonical polynomial in the generator, e.g. `1/2*phi - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let name = &self.field.name;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "{name}")?;
                    } else {
                        write!(f, "{name}^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let b: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = b[st..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| Error::Parse(t.clone()))?));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && (b[i].is_alphanumeric() || b[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(b[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(alloc::format!("unexpected '{c}' in '{s}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    field: &'a Arc<NumberField>,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, m: &str) -> Error {
        Error::Parse(alloc::format!("{m} in '{}'", self.src))
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<FieldElem> {
        let mut v = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let r = self.term()?;
            v = if c == '+' { &v + &r } else { &v - &r };
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<FieldElem> {
        let mut v = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let r = self.unary()?;
            v = if c == '*' {
                &v * &r
            } else {
                let inv = r.recip().ok_or_else(|| self.err("division by zero"))?;
                &v * &inv
            };
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<FieldElem> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<FieldElem> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let mut neg = false;
            if self.peek_op() == Some('-') {
                neg = true;
                self.pos += 1;
            }
            let Some(Tok::Num(n)) = self.toks.get(self.pos) else {
                return Err(self.err("expected integer exponent"));
            };
            self.pos += 1;
            let n: i64 = i64::try_from(n.clone()).map_err(|_| self.err("exponent too large"))?;
            return base.pow(if neg { -n } else { n }).ok_or_else(|| self.err("zero to a negative power"));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FieldElem> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(FieldElem::from_rational(self.field, BigRational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == self.field.name || NumberField::named(&name).is_some_and(|f| f.same(self.field)) {
                    Ok(FieldElem::generator(self.field))
                } else {
                    Err(self.err(&alloc::format!("unknown constant '{name}'")))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.err("missing ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err("expected a number, constant or '('")),
        }
    }
}
