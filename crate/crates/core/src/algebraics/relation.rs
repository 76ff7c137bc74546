//! Multiplicative dependence of two real algebraic numbers.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::bigreal::BigReal;
use super::number::AlgebraicNumber;
use super::poly::{power_polynomial, rat_divrem, IntPolynomial};
use super::roots::real_roots;
use crate::{Error, Result};

/// Default search bound for the algebraic-versus-algebraic case.
pub const DEFAULT_SEARCH_BOUND: u32 = 64;

/// Outcome of [`multiplicative_relation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `|a|^q = |b|^p` with `q > 0` and `gcd(p, q) = 1`.
    Dependent { p: i64, q: i64 },
    /// No relation exists.
    IndependentCertified,
    /// No relation with `|p|, |q| <= bound`.
    IndependentUpTo(u32),
}

impl Relation {
    pub fn is_dependent(&self) -> bool {
        matches!(self, Relation::Dependent { .. })
    }

    /// The same relation read with the arguments swapped.
    pub fn swapped(self) -> Self {
        match self {
            Relation::Dependent { p, q } => {
                let (p, q) = if p < 0 { (-q, -p) } else { (q, p) };
                Relation::Dependent { p, q }
            }
            other => other,
        }
    }
}

/// Decides whether `|a|^q = |b|^p` for some integers `(p, q) != (0, 0)`.
///
/// Rational pairs are settled by factoring over a coprime base. A rational
/// and an irrational number are dependent only if every conjugate of the
/// irrational one has the same modulus, which reduces to a divisibility
/// test and then to the rational case. Two irrational numbers are compared
/// for each exponent pair up to `search_bound`: balls exclude most pairs and
/// the rest are decided exactly through the minimal polynomials of the
/// powers.
pub fn multiplicative_relation(a: &AlgebraicNumber, b: &AlgebraicNumber, search_bound: u32) -> Result<Relation> {
    let a = a.abs();
    let b = b.abs();
    let one = BigRational::one();
    for x in [&a, &b] {
        match x.as_rational() {
            Some(q) if q.is_zero() || *q == one => return Err(Error::DegenerateRelation),
            _ => {}
        }
    }
    match (a.as_rational(), b.as_rational()) {
        (Some(x), Some(y)) => Ok(rational_relation(x, y)),
        (Some(x), None) => rational_vs_algebraic(x, &b),
        (None, Some(y)) => Ok(rational_vs_algebraic(y, &a)?.swapped()),
        (None, None) => algebraic_relation(&a, &b, search_bound),
    }
}

/// Pairwise coprime integers `> 1` whose products give every input.
fn coprime_base(nums: &[BigInt]) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = nums.iter().filter(|n| n > &&BigInt::one()).cloned().collect();
    'again: loop {
        base.sort();
        base.dedup();
        for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = base[i].gcd(&base[j]);
                if !g.is_one() {
                    let (x, y) = (base[i].clone(), base[j].clone());
                    base.swap_remove(j);
                    base.swap_remove(i);
                    for v in [&x / &g, &y / &g, g] {
                        if v > BigInt::one() {
                            base.push(v);
                        }
                    }
                    continue 'again;
                }
            }
        }
        return base;
    }
}

fn exponents(mut n: BigInt, base: &[BigInt]) -> Vec<i64> {
    base.iter()
        .map(|b| {
            let mut e = 0;
            while (&n % b).is_zero() {
                n /= b;
                e += 1;
            }
            e
        })
        .collect()
}

/// Exact answer for positive rationals `x, y != 1`.
fn rational_relation(x: &BigRational, y: &BigRational) -> Relation {
    let base = coprime_base(&[x.numer().clone(), x.denom().clone(), y.numer().clone(), y.denom().clone()]);
    let ex: Vec<i64> = exponents(x.numer().clone(), &base)
        .into_iter()
        .zip(exponents(x.denom().clone(), &base))
        .map(|(a, b)| a - b)
        .collect();
    let ey: Vec<i64> = exponents(y.numer().clone(), &base)
        .into_iter()
        .zip(exponents(y.denom().clone(), &base))
        .map(|(a, b)| a - b)
        .collect();
    // need q ex = p ey
    let k = ey.iter().position(|&v| v != 0).expect("y != 1");
    let (mut p, mut q) = (ex[k], ey[k]);
    let g = p.gcd(&q);
    p /= g;
    q /= g;
    if q < 0 {
        p = -p;
        q = -q;
    }
    if ex.iter().zip(&ey).all(|(&a, &b)| q * a == p * b) {
        Relation::Dependent { p, q }
    } else {
        Relation::IndependentCertified
    }
}

/// `x` rational, `b` irrational of degree `d`.
fn rational_vs_algebraic(x: &BigRational, b: &AlgebraicNumber) -> Result<Relation> {
    let m = b.min_poly();
    let d = m.deg();
    // |N(b)| = |a_0 / a_d|
    let c = BigRational::new(m.coeffs()[0].abs(), m.leading().unwrap().clone());
    // |b|^d = c iff m divides x^{2d} - c^2
    let mut target = vec![BigRational::zero(); 2 * d + 1];
    target[0] = -(&c * &c);
    target[2 * d] = BigRational::one();
    let (_, r) = rat_divrem(&target, &m.to_rational());
    if !r.is_empty() {
        return Ok(Relation::IndependentCertified);
    }
    if c.is_one() {
        return Err(Error::DegenerateRelation);
    }
    // |x|^{q'} = c^{p'}; then |x|^q = |b|^p with q = q'/g, p = p' d/g
    Ok(match rational_relation(x, &c) {
        Relation::Dependent { p: pp, q: qq } => {
            let dd = d as i64;
            let g = dd.gcd(&qq);
            Relation::Dependent { p: pp * dd / g, q: qq / g }
        }
        other => other,
    })
}

/// Minimal polynomial and root of `|a|^k` for `k != 0`.
fn power_of(a: &AlgebraicNumber, k: i64) -> (IntPolynomial, BigReal) {
    let base = if k < 0 { a.recip().expect("nonzero") } else { a.clone() };
    let p = power_polynomial(base.min_poly(), k.unsigned_abs() as u32);
    (p, base.ball(256).powu(k.unsigned_abs(), 256))
}

/// Exact test of `|a|^q == |b|^p` for irrational `a, b > 0`.
fn powers_equal(a: &AlgebraicNumber, q: i64, b: &AlgebraicNumber, p: i64) -> bool {
    let (pa, _) = power_of(a, q);
    let (pb, _) = power_of(b, p);
    let g = pa.gcd(&pb);
    if g.deg() == 0 {
        return false;
    }
    // both values are roots of the square-free product; locate each
    let h = pa.mul(&pb).square_free_part();
    let mut prec = 64;
    loop {
        let roots = real_roots(&h, prec).expect("square-free");
        let locate = |x: &AlgebraicNumber, e: i64| -> Option<usize> {
            let v = x.ball(prec + 32).powi(e, prec + 16)?;
            let hits: Vec<usize> = roots
                .iter()
                .enumerate()
                .filter(|(_, r)| r.lo() <= &v.upper() && &v.lower() <= r.hi())
                .map(|(i, _)| i)
                .collect();
            (hits.len() == 1).then(|| hits[0])
        };
        if let (Some(i), Some(j)) = (locate(a, q), locate(b, p)) {
            return i == j;
        }
        prec *= 2;
    }
}

fn algebraic_relation(a: &AlgebraicNumber, b: &AlgebraicNumber, bound: u32) -> Result<Relation> {
    const PREC: u32 = 128;
    let ba = a.ball(PREC + 64);
    let bb = b.ball(PREC + 64);
    // |a|^q for q = 1..bound and |b|^p for p = -bound..bound
    let mut pa = Vec::with_capacity(bound as usize);
    let mut acc = BigReal::from_i64(1);
    for _ in 0..bound {
        acc = acc.mul(&ba, PREC + 32);
        pa.push(acc.clone());
    }
    let binv = bb.recip(PREC + 64).ok_or(Error::DegenerateRelation)?;
    let mut pos = Vec::with_capacity(bound as usize);
    let mut neg = Vec::with_capacity(bound as usize);
    let (mut x, mut y) = (BigReal::from_i64(1), BigReal::from_i64(1));
    for _ in 0..bound {
        x = x.mul(&bb, PREC + 32);
        y = y.mul(&binv, PREC + 32);
        pos.push(x.clone());
        neg.push(y.clone());
    }
    for q in 1..=bound as i64 {
        for p in -(bound as i64)..=bound as i64 {
            if p == 0 || p.gcd(&q) != 1 {
                continue;
            }
            let rhs = if p > 0 { &pos[(p - 1) as usize] } else { &neg[(-p - 1) as usize] };
            if pa[(q - 1) as usize].overlaps(rhs) && powers_equal(a, q, b, p) {
                return Ok(Relation::Dependent { p, q });
            }
        }
    }
    Ok(Relation::IndependentUpTo(bound))
}

/// `log|a| / log|b|` in floating point, for reports.
pub fn log_ratio(a: &AlgebraicNumber, b: &AlgebraicNumber) -> f64 {
    libm::log(a.to_f64().abs()) / libm::log(b.to_f64().abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> AlgebraicNumber {
        AlgebraicNumber::from_rational(BigRational::new(n.into(), d.into()))
    }

    fn root(c: &[i64]) -> AlgebraicNumber {
        AlgebraicNumber::largest_real_root(&IntPolynomial::from_i64s(c)).unwrap()
    }

    fn golden() -> AlgebraicNumber {
        root(&[-1, -1, 1])
    }

    #[test]
    fn rational_examples() {
        assert_eq!(multiplicative_relation(&q(1, 3), &q(3, 1), 64).unwrap(), Relation::Dependent { p: -1, q: 1 });
        assert_eq!(multiplicative_relation(&q(1, 9), &q(3, 1), 64).unwrap(), Relation::Dependent { p: -2, q: 1 });
        assert_eq!(multiplicative_relation(&q(1, 2), &q(3, 1), 64).unwrap(), Relation::IndependentCertified);
        assert_eq!(multiplicative_relation(&q(8, 1), &q(4, 1), 64).unwrap(), Relation::Dependent { p: 3, q: 2 });
        assert_eq!(multiplicative_relation(&q(-27, 8), &q(4, 9), 64).unwrap(), Relation::Dependent { p: -3, q: 2 });
        assert_eq!(multiplicative_relation(&q(6, 1), &q(12, 1), 64).unwrap(), Relation::IndependentCertified);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(multiplicative_relation(&q(1, 1), &q(3, 1), 64).unwrap_err(), Error::DegenerateRelation);
        assert_eq!(multiplicative_relation(&q(-1, 1), &q(3, 1), 64).unwrap_err(), Error::DegenerateRelation);
        assert_eq!(multiplicative_relation(&q(0, 1), &q(3, 1), 64).unwrap_err(), Error::DegenerateRelation);
    }

    #[test]
    fn rational_vs_irrational() {
        assert_eq!(multiplicative_relation(&q(1, 2), &golden(), 64).unwrap(), Relation::IndependentCertified);
        let sqrt2 = root(&[-2, 0, 1]);
        // (1/2)^1 = sqrt2^-2
        assert_eq!(multiplicative_relation(&q(1, 2), &sqrt2, 64).unwrap(), Relation::Dependent { p: -2, q: 1 });
        // 8^1 = sqrt2^6 ; 4^q = sqrt2^p -> p = 4, q = 1
        assert_eq!(multiplicative_relation(&q(4, 1), &sqrt2, 64).unwrap(), Relation::Dependent { p: 4, q: 1 });
        assert_eq!(multiplicative_relation(&sqrt2, &q(4, 1), 64).unwrap(), Relation::Dependent { p: 1, q: 4 });
        // cube root of 4 vs 2: |c|^3 = 2^2
        let c4 = root(&[-4, 0, 0, 1]);
        assert_eq!(multiplicative_relation(&c4, &q(2, 1), 64).unwrap(), Relation::Dependent { p: 2, q: 3 });
        assert_eq!(multiplicative_relation(&q(3, 1), &sqrt2, 64).unwrap(), Relation::IndependentCertified);
    }

    #[test]
    fn algebraic_pairs() {
        let phi = golden();
        let phi2 = root(&[1, -3, 1]);
        assert_eq!(multiplicative_relation(&phi2, &phi, 64).unwrap(), Relation::Dependent { p: 2, q: 1 });
        assert_eq!(multiplicative_relation(&phi, &phi2, 64).unwrap(), Relation::Dependent { p: 1, q: 2 });
        // 1/phi = phi - 1
        let inv = phi.recip().unwrap();
        assert_eq!(multiplicative_relation(&inv, &phi, 64).unwrap(), Relation::Dependent { p: -1, q: 1 });
        let sqrt2 = root(&[-2, 0, 1]);
        assert_eq!(multiplicative_relation(&sqrt2, &phi, 16).unwrap(), Relation::IndependentUpTo(16));
        // 1 + sqrt2 and (1 + sqrt2)^3 = 7 + 5 sqrt2
        let silver = root(&[-1, -2, 1]);
        let cube = root(&[-1, -14, 1]);
        assert_eq!(multiplicative_relation(&cube, &silver, 64).unwrap(), Relation::Dependent { p: 3, q: 1 });
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn symmetric_on_rationals(a in 2i64..200, b in 1i64..50, c in 2i64..200, d in 1i64..50) {
            let (x, y) = (q(a, b), q(c, d));
            prop_assume!(a != b && c != d);
            let r1 = multiplicative_relation(&x, &y, 64).unwrap();
            let r2 = multiplicative_relation(&y, &x, 64).unwrap();
            prop_assert_eq!(r1.swapped(), r2);
        }

        #[test]
        fn powers_of_golden(e1 in 1i64..6, e2 in 1i64..6) {
            // phi^e1 and phi^e2 via their minimal polynomials
            let k = crate::algebraics::NumberField::named("phi").unwrap();
            let g = crate::algebraics::FieldElem::generator(&k);
            let x = g.pow(e1).unwrap().to_algebraic();
            let y = g.pow(e2).unwrap().to_algebraic();
            let r = multiplicative_relation(&x, &y, 64).unwrap();
            let gg = e1.gcd(&e2);
            prop_assert_eq!(r, Relation::Dependent { p: e1 / gg, q: e2 / gg });
            prop_assert_eq!(multiplicative_relation(&y, &x, 64).unwrap(), r.swapped());
        }
    }
}
