//! Certified isolation of real and complex roots.
//!
//! Real roots come from a Sturm sequence and bisection with exact rational
//! arithmetic. Complex roots are approximated by Aberth iteration (first in
//! `f64`, then in fixed point) and certified with Gerschgorin disks of the
//! Weierstrass matrix: if the disks `D(z_i, n |W_i|)` are pairwise disjoint,
//! each holds exactly one root.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::bigreal::dyadic;
use super::poly::{IntPolynomial, SturmChain};
use crate::{fmath, Error, Result};

/// An isolated real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealRoot {
    /// The root is this rational.
    Exact(BigRational),
    /// The only root in `(lo, hi)`; the polynomial changes sign strictly
    /// between the endpoints.
    Open { lo: BigRational, hi: BigRational },
}

impl RealRoot {
    pub fn lo(&self) -> &BigRational {
        match self {
            RealRoot::Exact(q) => q,
            RealRoot::Open { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &BigRational {
        match self {
            RealRoot::Exact(q) => q,
            RealRoot::Open { hi, .. } => hi,
        }
    }

    pub fn width(&self) -> BigRational {
        self.hi() - self.lo()
    }

    pub fn approx(&self) -> f64 {
        let m = (self.lo() + self.hi()) / BigInt::from(2);
        rat_to_f64(&m)
    }
}

/// A certified disk holding one root.
#[derive(Clone, Debug)]
pub struct RootDisk {
    /// Centre `(re + i im) / 2^scale`.
    pub re: BigInt,
    pub im: BigInt,
    pub scale: u64,
    /// Upper bound on the distance from the centre to the root.
    pub radius: BigRational,
}

impl RootDisk {
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn center_re(&self) -> BigRational {
        dyadic(self.re.clone(), -(self.scale as i64))
    }

    pub fn center_im(&self) -> BigRational {
        dyadic(self.im.clone(), -(self.scale as i64))
    }

    /// Certified `[lo, hi]` for the modulus of the root.
    pub fn modulus_bounds(&self) -> (BigRational, BigRational) {
        let n2 = (&self.re * &self.re + &self.im * &self.im).to_biguint().unwrap();
        let s = n2.sqrt();
        let exact = &s * &s == n2;
        let lo = dyadic(BigInt::from(s.clone()), -(self.scale as i64)) - &self.radius;
        let up = if exact { s } else { s + 1u32 };
        let hi = dyadic(BigInt::from(up), -(self.scale as i64)) + &self.radius;
        (if lo.is_negative() { BigRational::zero() } else { lo }, hi)
    }

    pub fn approx(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.center_re()), rat_to_f64(&self.center_im()))
    }
}

/// A conjugate pair of non-real roots, reported through the root with
/// positive imaginary part.
#[derive(Clone, Debug)]
pub struct ComplexPair {
    pub disk: RootDisk,
    pub modulus_lo: BigRational,
    pub modulus_hi: BigRational,
}

/// All roots of a square-free polynomial.
#[derive(Clone, Debug)]
pub struct RootIsolation {
    pub real: Vec<RealRoot>,
    pub complex: Vec<ComplexPair>,
}

pub(crate) fn rat_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // very large or tiny values: go through a ball
        super::BigReal::from_rational(q, 64).to_f64()
    })
}

/// Isolates every root of `p` to width (real) or radius (complex) at most
/// `2^-precision`.
pub fn isolate_real_roots(p: &IntPolynomial, precision: u32) -> Result<RootIsolation> {
    let real = real_roots(p, precision)?;
    let mut complex = Vec::new();
    if real.len() < p.deg() {
        let disks = certified_roots(p, precision)?;
        for d in disks {
            if d.im.is_positive() {
                let (modulus_lo, modulus_hi) = d.modulus_bounds();
                complex.push(ComplexPair { disk: d, modulus_lo, modulus_hi });
            }
        }
    }
    Ok(RootIsolation { real, complex })
}

fn check_input(p: &IntPolynomial) -> Result<()> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_square_free() {
        return Err(Error::RepeatedRoots);
    }
    Ok(())
}

/// Real roots in increasing order, each isolated to width `<= 2^-precision`.
pub fn real_roots(p: &IntPolynomial, precision: u32) -> Result<Vec<RealRoot>> {
    check_input(p)?;
    if p.deg() == 0 {
        return Ok(Vec::new());
    }
    let sturm = SturmChain::new(p);
    let b = BigRational::from_integer(p.root_bound());
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((a, c)) = stack.pop() {
        let n = sturm.count(&a, &c);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(separate(p, &sturm, a, c));
            continue;
        }
        let m = (&a + &c) / BigInt::from(2);
        // push right half first so roots pop out left to right
        stack.push((m.clone(), c));
        stack.push((a, m));
    }
    out.sort_by(|x, y| x.lo().cmp(y.lo()));
    let tol = dyadic(BigInt::one(), -(precision as i64));
    Ok(out.into_iter().map(|r| refine(p, r, &tol)).collect())
}

/// Shrinks `(a, b]` holding exactly one root until its endpoints are not roots.
fn separate(p: &IntPolynomial, sturm: &SturmChain, mut a: BigRational, mut b: BigRational) -> RealRoot {
    loop {
        if p.sign_at(&b) == Ordering::Equal {
            return RealRoot::Exact(b);
        }
        if p.sign_at(&a) != Ordering::Equal {
            return RealRoot::Open { lo: a, hi: b };
        }
        let m = (&a + &b) / BigInt::from(2);
        if sturm.count(&a, &m) == 1 {
            b = m;
        } else {
            a = m;
        }
    }
}

/// Bisects an isolating interval until its width is at most `tol`.
pub(crate) fn refine(p: &IntPolynomial, r: RealRoot, tol: &BigRational) -> RealRoot {
    let RealRoot::Open { mut lo, mut hi } = r else {
        return r;
    };
    let s_lo = p.sign_at(&lo);
    let two = BigInt::from(2);
    while &(&hi - &lo) > tol {
        let m = (&lo + &hi) / &two;
        match p.sign_at(&m) {
            Ordering::Equal => return RealRoot::Exact(m),
            s if s == s_lo => lo = m,
            _ => hi = m,
        }
    }
    RealRoot::Open { lo, hi }
}

fn f64_aberth(p: &IntPolynomial) -> Vec<Complex64> {
    let n = p.deg();
    let c: Vec<f64> = p.coeffs().iter().map(|x| x.to_f64().unwrap_or(f64::MAX)).collect();
    let lc = c[n];
    let bound = 1.0 + c[..n].iter().map(|x| fmath::abs(*x / lc)).fold(0.0, f64::max);
    let r0 = bound.min(1e8) * 0.7;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, core::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(c[n], 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for i in (0..n).rev() {
            d = d * x + v;
            v = v * x + c[i];
        }
        (v, d)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, d) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        s += diff.inv();
                    }
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Gaussian fixed-point value `(re + i im) / 2^P`.
#[derive(Clone, Debug, PartialEq)]
struct Fx {
    re: BigInt,
    im: BigInt,
}

impl Fx {
    fn from_c64(z: Complex64, p: u64) -> Self {
        let s = libm::scalbn(1.0, 52);
        let conv = |x: f64| -> BigInt {
            let m = BigInt::from((x * s) as i128);
            if p >= 52 {
                m << (p - 52)
            } else {
                m >> (52 - p)
            }
        };
        Self { re: conv(z.re), im: conv(z.im) }
    }

    fn rescale(&self, from: u64, to: u64) -> Self {
        if to >= from {
            Self { re: &self.re << (to - from), im: &self.im << (to - from) }
        } else {
            Self { re: &self.re >> (from - to), im: &self.im >> (from - to) }
        }
    }

    fn add(&self, o: &Self) -> Self {
        Self { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub(&self, o: &Self) -> Self {
        Self { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul(&self, o: &Self, p: u64) -> Self {
        Self {
            re: (&self.re * &o.re - &self.im * &o.im) >> p,
            im: (&self.re * &o.im + &self.im * &o.re) >> p,
        }
    }

    fn div(&self, o: &Self, p: u64) -> Option<Self> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        let nr = (&self.re * &o.re + &self.im * &o.im) << p;
        let ni = (&self.im * &o.re - &self.re * &o.im) << p;
        Some(Self { re: nr / &den, im: ni / &den })
    }

    fn norm_bits(&self) -> u64 {
        self.re.bits().max(self.im.bits())
    }

    fn to_c64(&self, p: u64) -> Complex64 {
        let f = |x: &BigInt| super::BigReal::from_dyadic(x.clone(), -(p as i64)).to_f64();
        Complex64::new(f(&self.re), f(&self.im))
    }
}

fn fx_aberth(p: &IntPolynomial, z: &mut [Fx], prec: u64) {
    let n = z.len();
    let coeffs: Vec<Fx> = p
        .coeffs()
        .iter()
        .map(|c| Fx { re: c << prec, im: BigInt::zero() })
        .collect();
    let one = Fx { re: BigInt::one() << prec, im: BigInt::zero() };
    for _ in 0..80 {
        let mut small = true;
        for i in 0..n {
            let mut v = coeffs[n].clone();
            let mut d = Fx { re: BigInt::zero(), im: BigInt::zero() };
            for c in coeffs[..n].iter().rev() {
                d = d.mul(&z[i], prec).add(&v);
                v = v.mul(&z[i], prec).add(c);
            }
            if v.re.is_zero() && v.im.is_zero() {
                continue;
            }
            let Some(ratio) = v.div(&d, prec) else { continue };
            let mut s = Fx { re: BigInt::zero(), im: BigInt::zero() };
            for j in 0..n {
                if j != i {
                    if let Some(inv) = one.div(&z[i].sub(&z[j]), prec) {
                        s = s.add(&inv);
                    }
                }
            }
            let den = one.sub(&ratio.mul(&s, prec));
            let Some(w) = ratio.div(&den, prec) else { continue };
            if w.norm_bits() > 4 {
                small = false;
            }
            z[i] = z[i].sub(&w);
        }
        if small {
            break;
        }
    }
}

fn sqrt_up(n: &BigUint) -> BigUint {
    let s = n.sqrt();
    if &(&s * &s) == n {
        s
    } else {
        s + 1u32
    }
}

/// Certified disks for all roots of a square-free polynomial, each of radius
/// at most `2^-precision`. Real roots get disks with real centres; non-real
/// roots come in exactly conjugate pairs.
pub fn certified_roots(p: &IntPolynomial, precision: u32) -> Result<Vec<RootDisk>> {
    check_input(p)?;
    let n = p.deg();
    if n == 0 {
        return Ok(Vec::new());
    }
    let n_real = SturmChain::new(p).count_all();
    let approx = f64_aberth(p);
    let mut prec: u64 = (precision as u64 + 32).max(96);
    let mut z: Vec<Fx> = approx.iter().map(|&c| Fx::from_c64(c, prec)).collect();
    let tol = dyadic(BigInt::one(), -(precision as i64));
    loop {
        fx_aberth(p, &mut z, prec);
        if let Some(disks) = certify(p, &z, prec, n_real) {
            if disks.iter().all(|d| d.radius <= tol) {
                return Ok(disks);
            }
        }
        if prec > 1 << 16 {
            return Err(Error::PrecisionExhausted(prec as u32));
        }
        let next = prec * 2;
        z = z.iter().map(|x| x.rescale(prec, next)).collect();
        prec = next;
    }
}

fn certify(p: &IntPolynomial, z: &[Fx], prec: u64, n_real: usize) -> Option<Vec<RootDisk>> {
    let n = z.len();
    // the n_real approximations closest to the axis are declared real
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| z[a].im.magnitude().cmp(z[b].im.magnitude()));
    let mut centers: Vec<Fx> = z.to_vec();
    for &i in &order[..n_real] {
        centers[i].im = BigInt::zero();
    }
    // pair the rest: each upper root with the nearest conjugate of a lower one
    let upper: Vec<usize> = order[n_real..].iter().copied().filter(|&i| z[i].im.is_positive()).collect();
    let mut lower: Vec<usize> = order[n_real..].iter().copied().filter(|&i| !z[i].im.is_positive()).collect();
    if upper.len() != lower.len() {
        return None;
    }
    for &u in &upper {
        let cu = z[u].to_c64(prec);
        let (k, _) = lower
            .iter()
            .enumerate()
            .map(|(k, &l)| (k, (z[l].to_c64(prec).conj() - cu).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        let l = lower.swap_remove(k);
        centers[l] = Fx { re: centers[u].re.clone(), im: -centers[u].im.clone() };
    }

    let lc = p.leading().unwrap().abs();
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        // H = 2^{Pn} p(z_i), G = 2^{P(n-1)} prod (z_i - z_j)
        let mut h = Fx { re: p.coeffs()[n].clone(), im: BigInt::zero() };
        let mut scale = BigInt::one();
        for c in p.coeffs()[..n].iter().rev() {
            scale <<= prec;
            let re = &h.re * &centers[i].re - &h.im * &centers[i].im + c * &scale;
            let im = &h.re * &centers[i].im + &h.im * &centers[i].re;
            h = Fx { re, im };
        }
        let mut g = Fx { re: BigInt::one(), im: BigInt::zero() };
        for j in 0..n {
            if j != i {
                let d = centers[i].sub(&centers[j]);
                g = Fx { re: &g.re * &d.re - &g.im * &d.im, im: &g.re * &d.im + &g.im * &d.re };
            }
        }
        let h2 = (&h.re * &h.re + &h.im * &h.im).to_biguint().unwrap();
        let g2 = (&g.re * &g.re + &g.im * &g.im).to_biguint().unwrap();
        let gs = g2.sqrt();
        if gs.is_zero() {
            return None;
        }
        let num = BigInt::from(sqrt_up(&h2)) * BigInt::from(n);
        let den = (&lc * BigInt::from(gs)) << prec;
        radii.push(BigRational::new(num, den));
    }
    let scale2 = BigRational::from_integer(BigInt::one() << (2 * prec));
    for i in 0..n {
        // non-real centres need disks clear of the axis
        if !centers[i].im.is_zero() {
            let im = dyadic(centers[i].im.abs(), -(prec as i64));
            if im <= radii[i] {
                return None;
            }
        }
        for j in i + 1..n {
            let d = centers[i].sub(&centers[j]);
            let d2 = BigRational::from_integer(&d.re * &d.re + &d.im * &d.im) / &scale2;
            let r = &radii[i] + &radii[j];
            if d2 <= &r * &r {
                return None;
            }
        }
    }
    Some(
        centers
            .into_iter()
            .zip(radii)
            .map(|(c, radius)| RootDisk { re: c.re, im: c.im, scale: prec, radius })
            .collect(),
    )
}
