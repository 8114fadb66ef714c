//! Input-dependent failure modes. Internal consistency defects (formula
//! transcription bugs, disagreeing computation routes) are *not* errors:
//! they panic, so they can never be silently clamped away downstream.

use thiserror::Error;

use crate::charges::InstantonCharge;
use crate::chow::DivClass;
use crate::cox::CoxPoint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("charge ({0}, {1}, {2}) violates the admissibility inequalities")]
    NotAdmissible(i64, i64, i64),

    #[error("defect (delta={delta}, epsilon={epsilon}) violates `{rule}` for charge ({}, {}, {})", charge.alpha, charge.beta, charge.gamma)]
    DefectInvariant {
        charge: InstantonCharge,
        delta: i64,
        epsilon: i64,
        rule: &'static str,
    },

    #[error("monad term {term} has negative multiplicity {value}")]
    NegativeMultiplicity { term: String, value: i64 },

    #[error("K-class has rank {0}, expected rank 2")]
    RankMismatch(i64),

    #[error("dimension table entry e^({p},{q}) = {value} is negative")]
    NegativeEntry { p: i64, q: i64, value: i64 },

    #[error("destabilizer candidate region is unbounded")]
    NonFiniteRegion,

    #[error("entry sections share a zero at the Cox point {witness}")]
    NotSurjective { witness: Box<CoxPoint> },

    #[error("destabilizing twist {twist}: h0 of the twisted kernel bundle is {h0}")]
    Destabilized { twist: DivClass, h0: usize },

    #[error("every line parameter tried ({tried} of them) meets the degeneracy locus")]
    SpecialLine { tried: usize },

    #[error("Fano index {0} is outside 1..=4")]
    InvalidIndex(i64),

    #[error("section has class {got}, expected {expected}")]
    ClassMismatch { expected: DivClass, got: DivClass },

    #[error("cannot parse class expression {input:?}: {msg}")]
    Parse { input: String, msg: String },
}
