//! The Markov chain on `(i, u, a)` behind the suspension.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::model::Model;
use crate::{Error, Result};

/// A state `(i, u)` or, when the model has an orientation-reversing index,
/// `(i, u, a)` with `a` in `Z_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainState {
    pub index: usize,
    pub digit: usize,
    pub flip: Option<bool>,
}

/// Transition matrix, stationary law and roof of the chain, all exact
/// except the roof.
#[derive(Clone, Debug)]
pub struct ExtendedChain {
    states: Vec<ChainState>,
    transition: Vec<Vec<BigRational>>,
    stationary: Vec<BigRational>,
    roofs: Vec<f64>,
}

impl ExtendedChain {
    pub fn states(&self) -> &[ChainState] {
        &self.states
    }

    pub fn transition(&self) -> &[Vec<BigRational>] {
        &self.transition
    }

    pub fn stationary(&self) -> &[BigRational] {
        &self.stationary
    }

    /// `-log |r_i|` per state.
    pub fn roofs(&self) -> &[f64] {
        &self.roofs
    }

    pub fn is_extended(&self) -> bool {
        self.states.first().is_some_and(|s| s.flip.is_some())
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `pi P`, exactly.
    pub fn stationary_image(&self) -> Vec<BigRational> {
        let n = self.len();
        let mut out = vec![BigRational::zero(); n];
        for (pi, row) in self.stationary.iter().zip(&self.transition) {
            if pi.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(row) {
                if !p.is_zero() {
                    *o += pi * p;
                }
            }
        }
        out
    }

    /// Stationary mass of `a = 0` and `a = 1`.
    pub fn flip_marginal(&self) -> Option<(BigRational, BigRational)> {
        if !self.is_extended() {
            return None;
        }
        let mut m = (BigRational::zero(), BigRational::zero());
        for (s, p) in self.states.iter().zip(&self.stationary) {
            if s.flip == Some(true) {
                m.1 += p;
            } else {
                m.0 += p;
            }
        }
        Some(m)
    }

    /// Largest number of steps needed to go from one state to another, or
    /// `None` if some state is unreachable.
    pub fn diameter(&self) -> Option<usize> {
        let n = self.len();
        let mut worst = 0;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut frontier = vec![s];
            let mut d = 0;
            while !frontier.is_empty() {
                d += 1;
                let mut next = Vec::new();
                for &x in &frontier {
                    for (y, p) in self.transition[x].iter().enumerate() {
                        if p.is_positive() && dist[y] == usize::MAX {
                            dist[y] = d;
                            next.push(y);
                        }
                    }
                }
                frontier = next;
            }
            worst = worst.max(*dist.iter().max().unwrap());
        }
        (worst != usize::MAX).then_some(worst)
    }

    /// Expected roof under the stationary law.
    pub fn mean_roof(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.stationary.iter().zip(&self.roofs).map(|(p, r)| p.to_f64().unwrap() * r).sum()
    }
}

/// Builds the chain of a model. Without orientation-reversing indices the
/// `a` coordinate is dropped and the chain is the Bernoulli product.
pub fn build_extended_chain(m: &Model) -> Result<ExtendedChain> {
    let extended = !m.orientation_preserving();
    let flips: &[Option<bool>] = if extended { &[Some(false), Some(true)] } else { &[None] };
    let mut states = Vec::new();
    let mut base = Vec::new();
    for (i, idx) in m.indices().iter().enumerate() {
        for (u, p) in idx.weights().iter().enumerate() {
            for &flip in flips {
                states.push(ChainState { index: i, digit: u, flip });
                base.push(idx.q() * p);
            }
        }
    }
    let half = BigRational::new(1.into(), 2.into());
    let stationary: Vec<BigRational> = if extended { base.iter().map(|b| b * &half).collect() } else { base.clone() };
    let transition: Vec<Vec<BigRational>> = states
        .iter()
        .map(|s| {
            let reverses = m.indices()[s.index].ratio_f64() < 0.0;
            states
                .iter()
                .zip(&base)
                .map(|(t, b)| {
                    let allowed = match (s.flip, t.flip) {
                        (Some(a), Some(a2)) => (a == a2) != reverses,
                        _ => true,
                    };
                    if allowed {
                        b.clone()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let roofs = states.iter().map(|s| m.indices()[s.index].roof()).collect();
    let chain = ExtendedChain { states, transition, stationary, roofs };
    if chain.transition.iter().any(|row| row.iter().fold(BigRational::zero(), |a, b| a + b) != BigRational::one()) {
        return Err(Error::InvalidModel("transition rows do not sum to 1".into()));
    }
    if chain.stationary_image() != chain.stationary {
        return Err(Error::InvalidModel("stationary vector is not invariant".into()));
    }
    if chain.diameter().is_none() {
        return Err(Error::ReducibleChain);
    }
    Ok(chain)
}
