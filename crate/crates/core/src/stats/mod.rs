//! Aggregate measures over detections and the significance tests run on them.

pub mod dist;
mod measures;
pub mod ttest;

pub use dist::{ln_gamma, regularized_incomplete_beta, t_cdf};
pub use measures::{
    asymmetry_shares, coding_crosstab, female_share, group_shares, personhood_shift,
    transition_table, AsymmetryBreakdown, AsymmetryCell, AsymmetryGenderRow, AsymmetryShares,
    AsymmetrySubjectRow, CodingCrosstab, CodingRow, DenominatorPolicy, FlipCounts, GroupShareRow,
    MarkingShares, PersonhoodShift, ProbeIndex, Ratio, Share, TransitionRow, TransitionTable,
};
pub use ttest::{t_test_one_sided, Alternative, BinarySample, TTestResult};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("no detections to aggregate ({0})")]
    Empty(&'static str),
    #[error("detection refers to unknown probe {0:?}")]
    UnknownProbe(String),
    #[error("probe {probe:?} is missing slot {slot:?}")]
    MissingSlot { probe: String, slot: &'static str },
    #[error("probe {probe:?} has invalid slot {slot:?}: {value:?}")]
    BadSlot {
        probe: String,
        slot: &'static str,
        value: String,
    },
    #[error("adjective {0:?} is not in the lexicon")]
    UnknownAdjective(String),
    #[error("occupation {0:?} is not in the corpus")]
    UnknownOccupation(String),
    #[error("more than one detection for {0}")]
    Duplicate(String),
    #[error("sample {0:?} contains values other than 0 and 1")]
    NonBinary(String),
    #[error("sample {label:?} has {n} values; at least 2 are required")]
    TooFewValues { label: String, n: usize },
    #[error("pooled variance is zero; both samples are constant")]
    ZeroVariance,
}
