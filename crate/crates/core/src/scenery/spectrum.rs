//! The arithmetic obstruction: an eigenvalue `k / log beta` of the scenery
//! flow would force `2 (k / log beta) log |r_j|` to be an integer for every
//! index `j`, hence `|r_j| ~ beta`. One index with `|r_j|` independent of
//! `beta` rules all of them out.

use alloc::format;
use alloc::string::String;

use crate::algebraics::{multiplicative_relation, Relation};
use crate::beta::BetaBase;
use crate::model::Model;
use crate::{Error, Result};

/// How the independence of `|r_j|` and `beta` was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Independence {
    Certified,
    /// No relation `|r|^q = beta^p` with `|p|, |q|` up to the bound.
    UpTo(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpectrumVerdict {
    NormalityImplied { index: usize, independence: Independence, evidence: String },
    Inconclusive(String),
}

impl SpectrumVerdict {
    pub fn is_implied(&self) -> bool {
        matches!(self, SpectrumVerdict::NormalityImplied { .. })
    }
}

/// Looks for an index whose ratio is multiplicatively independent of
/// `beta`. A certified witness wins over a bounded one.
pub fn spectrum_obstruction(m: &Model, b: &BetaBase, search_bound: u32) -> Result<SpectrumVerdict> {
    if !b.is_pisot() {
        return Err(Error::NotPisot);
    }
    let mut bounded = None;
    let mut relations = String::new();
    for (j, idx) in m.indices().iter().enumerate() {
        let r = idx.ratio().abs().to_algebraic();
        match multiplicative_relation(&r, b.beta(), search_bound)? {
            Relation::IndependentCertified => {
                return Ok(implied(m, b, j, Independence::Certified));
            }
            Relation::IndependentUpTo(_) => {
                bounded.get_or_insert(j);
            }
            Relation::Dependent { p, q } => {
                relations.push_str(&format!(" |r_{}|^{q} = beta^{p};", idx.label()));
            }
        }
    }
    if let Some(j) = bounded {
        return Ok(implied(m, b, j, Independence::UpTo(search_bound)));
    }
    Ok(SpectrumVerdict::Inconclusive(format!("all ratios ~ beta:{}", relations.trim_end_matches(';'))))
}

fn implied(m: &Model, b: &BetaBase, j: usize, ind: Independence) -> SpectrumVerdict {
    let idx = &m.indices()[j];
    let how = match ind {
        Independence::Certified => String::from("certified"),
        Independence::UpTo(n) => format!("no relation with exponents up to {n}"),
    };
    let evidence = format!(
        "|r_{}| = {} and beta = {} are multiplicatively independent ({how}); \
         an eigenvalue k/log beta with k != 0 would need 2k log|r_{}|/log beta in Z, \
         forcing |r_{}| ~ beta",
        idx.label(),
        idx.ratio().abs(),
        b.label(),
        idx.label(),
        idx.label(),
    );
    SpectrumVerdict::NormalityImplied { index: j, independence: ind, evidence }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraics::DEFAULT_SEARCH_BOUND;
    use crate::model::build_model;
    use crate::scenery::tests::{cantor, halves, sqrt_eighth};

    fn verdict(ifs: crate::selfsimilar::SimilarityIFS, b: BetaBase) -> SpectrumVerdict {
        let m = build_model(&ifs, 8).unwrap();
        spectrum_obstruction(&m, &b, DEFAULT_SEARCH_BOUND).unwrap()
    }

    #[test]
    fn thirds_base_two_certified() {
        let v = verdict(cantor(), BetaBase::integer(2).unwrap());
        assert!(matches!(v, SpectrumVerdict::NormalityImplied { independence: Independence::Certified, .. }));
    }

    #[test]
    fn thirds_base_three_inconclusive() {
        let v = verdict(cantor(), BetaBase::integer(3).unwrap());
        assert!(matches!(v, SpectrumVerdict::Inconclusive(ref s) if s.starts_with("all ratios ~ beta")), "{v:?}");
    }

    #[test]
    fn halves_golden_certified() {
        let v = verdict(halves(), BetaBase::golden());
        assert!(matches!(v, SpectrumVerdict::NormalityImplied { independence: Independence::Certified, .. }));
    }

    #[test]
    fn sqrt_eighth_base_two_inconclusive() {
        // (sqrt2/4)^2 = 2^-3
        let v = verdict(sqrt_eighth(), BetaBase::integer(2).unwrap());
        assert!(!v.is_implied(), "{v:?}");
    }

    #[test]
    fn sqrt_eighth_golden_bounded() {
        let v = verdict(sqrt_eighth(), BetaBase::golden());
        assert_eq!(
            match v {
                SpectrumVerdict::NormalityImplied { independence, .. } => Some(independence),
                _ => None,
            },
            Some(Independence::UpTo(DEFAULT_SEARCH_BOUND))
        );
    }

    #[test]
    fn non_pisot_rejected() {
        let m = build_model(&cantor(), 8).unwrap();
        // conjugate -sqrt 3
        let b: BetaBase = "x^2 - 3".parse().unwrap();
        assert_eq!(spectrum_obstruction(&m, &b, 8).unwrap_err(), Error::NotPisot);
    }
}
