//! Small bundled input set for demos, tests and the default CLI run.

use crate::corpus::{
    match_occupations, parse_adjective_lexicon, parse_predicates, parse_raw_tr, parse_raw_us,
    parse_subjects, parse_workforce_stats, Adjective, LoadError, MatchAudit, MatchError,
    MatchRules, OccupationCorpus, Predicate, SubjectWord, WorkforceTable,
};

pub const WORKFORCE_CSV: &str = include_str!("../data/sample/workforce.csv");
pub const RAW_TR_CSV: &str = include_str!("../data/sample/raw_tr.csv");
pub const RAW_US_CSV: &str = include_str!("../data/sample/raw_us.csv");
pub const MATCH_RULES_TOML: &str = include_str!("../data/sample/match_rules.toml");
pub const ADJECTIVES_CSV: &str = include_str!("../data/sample/adjectives.csv");
pub const SUBJECTS_CSV: &str = include_str!("../data/sample/subjects.csv");
pub const PREDICATES_CSV: &str = include_str!("../data/sample/predicates.csv");

/// Every bundled file as (file name, contents).
pub const FILES: [(&str, &str); 7] = [
    ("workforce.csv", WORKFORCE_CSV),
    ("raw_tr.csv", RAW_TR_CSV),
    ("raw_us.csv", RAW_US_CSV),
    ("match_rules.toml", MATCH_RULES_TOML),
    ("adjectives.csv", ADJECTIVES_CSV),
    ("subjects.csv", SUBJECTS_CSV),
    ("predicates.csv", PREDICATES_CSV),
];

#[derive(Debug, thiserror::Error)]
pub enum SampleError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Match(#[from] MatchError),
}

#[derive(Debug, Clone)]
pub struct SampleInputs {
    pub corpus: OccupationCorpus,
    pub audit: MatchAudit,
    pub workforce: WorkforceTable,
    pub lexicon: Vec<Adjective>,
    pub subjects: Vec<SubjectWord>,
    pub predicates: Vec<Predicate>,
}

pub fn load() -> Result<SampleInputs, SampleError> {
    let rules = MatchRules::from_toml(MATCH_RULES_TOML)?;
    let tr = parse_raw_tr(RAW_TR_CSV, "sample/raw_tr.csv")?;
    let us = parse_raw_us(RAW_US_CSV, "sample/raw_us.csv")?;
    let (corpus, audit) = match_occupations(&tr, &us, &rules)?;
    Ok(SampleInputs {
        corpus,
        audit,
        workforce: parse_workforce_stats(WORKFORCE_CSV, "sample/workforce.csv")?,
        lexicon: parse_adjective_lexicon(ADJECTIVES_CSV, "sample/adjectives.csv")?,
        subjects: parse_subjects(SUBJECTS_CSV, "sample/subjects.csv")?,
        predicates: parse_predicates(PREDICATES_CSV, "sample/predicates.csv")?,
    })
}
