//! Counter-based random streams.
//!
//! Every random quantity is drawn from a ChaCha8 stream keyed by the master
//! seed. The stream id is derived from a label and an index,
//!
//! ```text
//! stream_id = (label << 48) | (index mod 2^48)
//! ```
//!
//! and positions inside a stream are addressable, so a sequence such as the
//! selection word omega can be read at any offset without storing it. Work
//! split across threads therefore never changes a result.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Purpose of a random stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Label {
    Omega = 1,
    Digits = 2,
    Sample = 3,
    Tail = 4,
    Suspension = 5,
    Window = 6,
    Start = 7,
    Test = 15,
}

const INDEX_MASK: u64 = (1 << 48) - 1;

/// Opens the stream `(seed, label, index)` at position zero.
pub fn stream(seed: u64, label: Label, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((label as u64) << 48) | (index & INDEX_MASK));
    rng
}

/// The `position`-th 64-bit draw of a stream.
pub fn value_at(seed: u64, label: Label, index: u64, position: u64) -> u64 {
    let mut rng = stream(seed, label, index);
    rng.set_word_pos(2 * position as u128);
    rng.next_u64()
}

/// Uniform double in `[0, 1)` from the top 53 bits.
#[inline]
pub fn unit_f64(u: u64) -> f64 {
    (u >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Categorical law over `0..k` driven by raw 64-bit draws.
///
/// Cumulative thresholds are `floor(F_i * 2^64)`, computed exactly when the
/// weights are rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Categorical {
    thresholds: Vec<u64>,
}

impl Categorical {
    pub fn from_rationals(weights: &[BigRational]) -> Self {
        assert!(!weights.is_empty());
        let scale = BigInt::from(1u8) << 64;
        let mut cum = BigRational::zero();
        let mut thresholds = Vec::with_capacity(weights.len() - 1);
        for w in &weights[..weights.len() - 1] {
            cum += w;
            let t: BigInt = (cum.numer() * &scale) / cum.denom();
            thresholds.push(t.to_u64().unwrap_or(u64::MAX));
        }
        Self { thresholds }
    }

    pub fn from_f64(weights: &[f64]) -> Self {
        assert!(!weights.is_empty());
        let total: f64 = weights.iter().sum();
        let mut cum = 0.0;
        let mut thresholds = Vec::with_capacity(weights.len() - 1);
        for w in &weights[..weights.len() - 1] {
            cum += w / total;
            let t = cum * 18446744073709551616.0;
            thresholds.push(if t >= 18446744073709551615.0 { u64::MAX } else { t as u64 });
        }
        Self { thresholds }
    }

    pub fn len(&self) -> usize {
        self.thresholds.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn sample(&self, u: u64) -> usize {
        // k is small in practice; linear scan beats a binary search.
        for (i, &t) in self.thresholds.iter().enumerate() {
            if u < t {
                return i;
            }
        }
        self.thresholds.len()
    }
}
