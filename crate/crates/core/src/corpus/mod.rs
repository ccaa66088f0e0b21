//! Occupation corpus, adjective lexicon, asymmetry lexicon and workforce
//! statistics, with their validating loaders and the occupation crosswalk.

mod load;
mod matching;
pub mod taxonomy;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use load::{
    load_adjective_lexicon, load_asymmetry_lexicon, load_occupation_corpus, load_workforce_stats,
    parse_adjective_lexicon, parse_occupation_corpus, parse_predicates, parse_subjects,
    parse_workforce_stats, save_adjective_lexicon, save_occupation_corpus, save_predicates,
    save_subjects, save_workforce_stats, LoadError, RowError,
};
pub use matching::{
    match_occupations, parse_raw_tr, parse_raw_us, AuditEntry, AuditOutcome, ExclusionRule,
    MatchAudit, MatchError, MatchRules, RawTrTitle, RawUsTitle, SimilarityRule, TitleSide,
};
pub use taxonomy::{IscoMajor, MajorGroup, SocMajor, Taxonomy};

/// A matched Turkish/English job title.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Occupation {
    pub id: String,
    pub title_en: String,
    pub title_tr: String,
    pub isco_major: IscoMajor,
    pub soc_major: SocMajor,
    pub female_pct_tr: f64,
    pub female_pct_us: f64,
}

impl Occupation {
    pub fn group(&self, taxonomy: Taxonomy) -> MajorGroup {
        match taxonomy {
            Taxonomy::Isco => MajorGroup::Isco(self.isco_major),
            Taxonomy::Soc => MajorGroup::Soc(self.soc_major),
        }
    }

    pub(crate) fn validate(&self) -> Result<(), String> {
        if self.id.trim().is_empty() {
            return Err("id must be non-empty".into());
        }
        if self.title_en.trim().is_empty() || self.title_tr.trim().is_empty() {
            return Err("titles must be non-empty".into());
        }
        check_pct("female_pct_tr", self.female_pct_tr)?;
        check_pct("female_pct_us", self.female_pct_us)
    }
}

/// Ordered occupation list with unique ids.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OccupationCorpus {
    occupations: Vec<Occupation>,
}

impl OccupationCorpus {
    /// Builds a corpus, rejecting duplicate ids.
    pub fn new(occupations: Vec<Occupation>) -> Result<Self, String> {
        let mut seen = BTreeMap::new();
        for occ in &occupations {
            if let Some(prev) = seen.insert(occ.id.as_str(), occ.title_en.as_str()) {
                return Err(format!(
                    "duplicate occupation id {:?} ({:?} and {:?})",
                    occ.id, prev, occ.title_en
                ));
            }
        }
        Ok(Self { occupations })
    }

    pub fn occupations(&self) -> &[Occupation] {
        &self.occupations
    }

    pub fn len(&self) -> usize {
        self.occupations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupations.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Occupation> {
        self.occupations.iter().find(|o| o.id == id)
    }

    /// Id-keyed view for repeated lookups.
    pub fn index(&self) -> BTreeMap<&str, &Occupation> {
        self.occupations
            .iter()
            .map(|o| (o.id.as_str(), o))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coding {
    Masculine,
    Feminine,
    Neutral,
}

impl Coding {
    pub const ALL: [Coding; 3] = [Coding::Masculine, Coding::Feminine, Coding::Neutral];

    pub fn as_str(self) -> &'static str {
        match self {
            Coding::Masculine => "masculine",
            Coding::Feminine => "feminine",
            Coding::Neutral => "neutral",
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{field} = {value} is outside [0, 100]")]
pub struct PercentOutOfRange {
    pub field: &'static str,
    pub value: f64,
}

/// Share above which an adjective counts as coded for one gender.
pub const CODING_THRESHOLD_PCT: f64 = 60.0;

/// Labels an adjective from the share of stereotype-study uses describing men
/// and women. Strictly above the threshold codes it; exactly 60 is neutral.
pub fn code_adjective(pct_male: f64, pct_female: f64) -> Result<Coding, PercentOutOfRange> {
    for (field, value) in [("pct_male", pct_male), ("pct_female", pct_female)] {
        if !(0.0..=100.0).contains(&value) {
            return Err(PercentOutOfRange { field, value });
        }
    }
    Ok(if pct_male > CODING_THRESHOLD_PCT {
        Coding::Masculine
    } else if pct_female > CODING_THRESHOLD_PCT {
        Coding::Feminine
    } else {
        Coding::Neutral
    })
}

/// Stereotype-study adjective. `coding` is always derived from the shares.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Adjective {
    pub surface_tr: String,
    pub gloss_en: String,
    pub pct_male: f64,
    pub pct_female: f64,
    coding: Coding,
}

impl Adjective {
    pub fn new(
        surface_tr: impl Into<String>,
        gloss_en: impl Into<String>,
        pct_male: f64,
        pct_female: f64,
    ) -> Result<Self, String> {
        let adj = Adjective {
            surface_tr: surface_tr.into(),
            gloss_en: gloss_en.into(),
            pct_male,
            pct_female,
            coding: code_adjective(pct_male, pct_female).map_err(|e| e.to_string())?,
        };
        if adj.surface_tr.trim().is_empty() || adj.gloss_en.trim().is_empty() {
            return Err("surface_tr and gloss_en must be non-empty".into());
        }
        if pct_male + pct_female > 100.0 {
            return Err(format!(
                "pct_male + pct_female = {} exceeds 100",
                pct_male + pct_female
            ));
        }
        Ok(adj)
    }

    pub fn coding(&self) -> Coding {
        self.coding
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Male,
    Female,
}

impl Gender {
    pub const BOTH: [Gender; 2] = [Gender::Male, Gender::Female];

    pub fn as_str(self) -> &'static str {
        match self {
            Gender::Male => "male",
            Gender::Female => "female",
        }
    }

    pub fn opposite(self) -> Gender {
        match self {
            Gender::Male => Gender::Female,
            Gender::Female => Gender::Male,
        }
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Gender {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "male" => Ok(Gender::Male),
            "female" => Ok(Gender::Female),
            other => Err(format!("unknown gender {other:?}")),
        }
    }
}

/// English kin term that is gender-neutral in Turkish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubjectWord {
    pub lemma_tr: String,
    pub surface_en_male: String,
    pub surface_en_female: String,
    pub marker_male: String,
    pub marker_female: String,
}

impl SubjectWord {
    pub fn surface_en(&self, gender: Gender) -> &str {
        match gender {
            Gender::Male => &self.surface_en_male,
            Gender::Female => &self.surface_en_female,
        }
    }

    pub fn marker(&self, gender: Gender) -> &str {
        match gender {
            Gender::Male => &self.marker_male,
            Gender::Female => &self.marker_female,
        }
    }

    pub(crate) fn validate(&self) -> Result<(), String> {
        let fields = [
            &self.lemma_tr,
            &self.surface_en_male,
            &self.surface_en_female,
            &self.marker_male,
            &self.marker_female,
        ];
        if fields.iter().any(|f| f.trim().is_empty()) {
            return Err("all subject fields must be non-empty".into());
        }
        if self.marker_male == self.marker_female {
            return Err(format!(
                "marker_male and marker_female are both {:?}",
                self.marker_male
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PredicateCategory {
    Occupation,
    Description,
    Activity,
}

impl PredicateCategory {
    pub const ALL: [PredicateCategory; 3] = [
        PredicateCategory::Occupation,
        PredicateCategory::Description,
        PredicateCategory::Activity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PredicateCategory::Occupation => "occupation",
            PredicateCategory::Description => "description",
            PredicateCategory::Activity => "activity",
        }
    }
}

impl FromStr for PredicateCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PredicateCategory::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown predicate category {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stereotype {
    Masculine,
    Feminine,
}

impl Stereotype {
    pub const BOTH: [Stereotype; 2] = [Stereotype::Masculine, Stereotype::Feminine];

    pub fn as_str(self) -> &'static str {
        match self {
            Stereotype::Masculine => "masculine",
            Stereotype::Feminine => "feminine",
        }
    }
}

impl FromStr for Stereotype {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Stereotype::BOTH
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown stereotype {s:?}"))
    }
}

/// Gender-stereotyped predicate completing "<subject> is <predicate>".
///
/// `surface_tr` is an optional Turkish rendering, used only by the mock
/// backend to produce readable output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Predicate {
    pub category: PredicateCategory,
    pub stereotype: Stereotype,
    pub surface_en: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface_tr: Option<String>,
}

/// Masculine and feminine predicates required per category.
pub const PREDICATES_PER_STEREOTYPE: usize = 5;

/// Checks the 5 + 5 per category design of a predicate lexicon.
pub fn check_predicate_design(predicates: &[Predicate]) -> Result<(), String> {
    let mut problems = Vec::new();
    for category in PredicateCategory::ALL {
        for stereotype in Stereotype::BOTH {
            let n = predicates
                .iter()
                .filter(|p| p.category == category && p.stereotype == stereotype)
                .count();
            if n != PREDICATES_PER_STEREOTYPE {
                problems.push(format!(
                    "{} {} predicates: {n} (expected {PREDICATES_PER_STEREOTYPE})",
                    category.as_str(),
                    stereotype.as_str()
                ));
            }
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(problems.join("; "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Country {
    #[serde(rename = "TR")]
    Turkey,
    #[serde(rename = "US")]
    UnitedStates,
}

impl Country {
    pub fn code(self) -> &'static str {
        match self {
            Country::Turkey => "TR",
            Country::UnitedStates => "US",
        }
    }
}

/// Female labour-force participation per taxonomy group, plus national totals.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WorkforceTable {
    pub groups: BTreeMap<MajorGroup, f64>,
    pub national: BTreeMap<Country, f64>,
}

impl WorkforceTable {
    pub fn group_pct(&self, group: MajorGroup) -> Option<f64> {
        self.groups.get(&group).copied()
    }

    pub fn national_pct(&self, country: Country) -> Option<f64> {
        self.national.get(&country).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty() && self.national.is_empty()
    }
}

pub(crate) fn check_pct(field: &str, value: f64) -> Result<(), String> {
    if (0.0..=100.0).contains(&value) {
        Ok(())
    } else {
        Err(format!("{field} = {value} is outside [0, 100]"))
    }
}
