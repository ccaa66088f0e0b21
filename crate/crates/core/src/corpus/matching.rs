//! Deterministic occupation crosswalk between a Turkish and a US title list.
//!
//! Similarity judgements are not computed: they arrive as curated maps in the
//! rule configuration. The matcher applies modifications, then exclusions,
//! then admission rules, and records the decision for every input title.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::load::{LoadError, RowError};
use super::{check_pct, IscoMajor, Occupation, OccupationCorpus, SocMajor};
use crate::detect::fold_turkish;
use crate::util::slug;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum MatchError {
    #[error("{0} title list is empty")]
    EmptyInput(TitleSide),
    #[error("unknown rule identifier {0:?} in match configuration")]
    UnknownRule(String),
    #[error("invalid match configuration: {0}")]
    Config(String),
    #[error("duplicate occupation id {id:?} produced by titles {titles:?}")]
    DuplicateId { id: String, titles: Vec<String> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TitleSide {
    Tr,
    Us,
}

impl std::fmt::Display for TitleSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TitleSide::Tr => "Turkish",
            TitleSide::Us => "US",
        })
    }
}

/// Non-exact admission rules, tried in this order after an exact match fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimilarityRule {
    BroaderNarrower,
    AlternateTitle,
    EducationLevel,
}

impl SimilarityRule {
    pub const ALL: [SimilarityRule; 3] = [
        SimilarityRule::BroaderNarrower,
        SimilarityRule::AlternateTitle,
        SimilarityRule::EducationLevel,
    ];

    pub fn key(self) -> &'static str {
        match self {
            SimilarityRule::BroaderNarrower => "broader_narrower",
            SimilarityRule::AlternateTitle => "alternate_title",
            SimilarityRule::EducationLevel => "education_level",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionRule {
    Religious,
    Gendered,
    Military,
}

impl ExclusionRule {
    pub const ALL: [ExclusionRule; 3] = [
        ExclusionRule::Religious,
        ExclusionRule::Gendered,
        ExclusionRule::Military,
    ];

    /// 1-based position in the exclusion list.
    pub fn number(self) -> u8 {
        match self {
            ExclusionRule::Religious => 1,
            ExclusionRule::Gendered => 2,
            ExclusionRule::Military => 3,
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            ExclusionRule::Religious => "religious",
            ExclusionRule::Gendered => "gendered",
            ExclusionRule::Military => "military",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MatchRules {
    /// English gloss of a Turkish title → US title.
    pub similar: BTreeMap<SimilarityRule, BTreeMap<String, String>>,
    pub retitle: BTreeMap<String, String>,
    pub split: BTreeMap<String, Vec<String>>,
    pub strip_detail: BTreeMap<String, String>,
    pub exclusions: BTreeMap<ExclusionRule, Vec<String>>,
}

fn string_map(value: &toml::Value, ctx: &str) -> Result<BTreeMap<String, String>, MatchError> {
    let table = value
        .as_table()
        .ok_or_else(|| MatchError::Config(format!("{ctx} must be a table")))?;
    table
        .iter()
        .map(|(k, v)| match v.as_str() {
            Some(s) => Ok((k.clone(), s.to_string())),
            None => Err(MatchError::Config(format!("{ctx}.{k:?} must be a string"))),
        })
        .collect()
}

fn string_list(value: &toml::Value, ctx: &str) -> Result<Vec<String>, MatchError> {
    let arr = value
        .as_array()
        .ok_or_else(|| MatchError::Config(format!("{ctx} must be an array of strings")))?;
    arr.iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| MatchError::Config(format!("{ctx} must contain only strings")))
        })
        .collect()
}

impl MatchRules {
    /// Parses the TOML rule file. Sections are `similar.<rule>`, `modify.<rule>`
    /// and `exclude.<rule>`; anything else is an unknown rule identifier.
    pub fn from_toml(text: &str) -> Result<Self, MatchError> {
        let root: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| MatchError::Config(e.to_string()))?;
        let mut rules = MatchRules::default();
        for (section, body) in &root {
            let body = body
                .as_table()
                .ok_or_else(|| MatchError::UnknownRule(section.clone()))?;
            for (name, value) in body {
                let id = format!("{section}.{name}");
                match section.as_str() {
                    "similar" => {
                        let rule = SimilarityRule::ALL
                            .into_iter()
                            .find(|r| r.key() == name)
                            .ok_or_else(|| MatchError::UnknownRule(id.clone()))?;
                        rules.similar.insert(rule, string_map(value, &id)?);
                    }
                    "modify" => match name.as_str() {
                        "retitle" => rules.retitle = string_map(value, &id)?,
                        "strip_detail" => rules.strip_detail = string_map(value, &id)?,
                        "split" => {
                            let table = value.as_table().ok_or_else(|| {
                                MatchError::Config(format!("{id} must be a table"))
                            })?;
                            for (k, v) in table {
                                let parts = string_list(v, &format!("{id}.{k:?}"))?;
                                if parts.is_empty() {
                                    return Err(MatchError::Config(format!(
                                        "{id}.{k:?} splits into nothing"
                                    )));
                                }
                                rules.split.insert(k.clone(), parts);
                            }
                        }
                        _ => return Err(MatchError::UnknownRule(id)),
                    },
                    "exclude" => {
                        let rule = ExclusionRule::ALL
                            .into_iter()
                            .find(|r| r.key() == name)
                            .ok_or_else(|| MatchError::UnknownRule(id.clone()))?;
                        let table = value
                            .as_table()
                            .ok_or_else(|| MatchError::Config(format!("{id} must be a table")))?;
                        for key in table.keys() {
                            if key != "terms" {
                                return Err(MatchError::Config(format!(
                                    "{id} has unexpected key {key:?}"
                                )));
                            }
                        }
                        let terms = match table.get("terms") {
                            Some(v) => string_list(v, &format!("{id}.terms"))?,
                            None => Vec::new(),
                        };
                        rules.exclusions.insert(rule, terms);
                    }
                    _ => return Err(MatchError::UnknownRule(id)),
                }
            }
        }
        Ok(rules)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawTrTitle {
    pub title_tr: String,
    /// English gloss used for matching against the US list.
    pub title_en: String,
    pub isco_major: IscoMajor,
    pub female_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawUsTitle {
    pub title: String,
    pub soc_major: SocMajor,
    pub female_pct: Option<f64>,
}

fn parse_raw<T: serde::de::DeserializeOwned>(
    text: &str,
    source_name: &str,
    header: &[&str],
    pct: impl Fn(&T) -> Option<f64>,
) -> Result<Vec<T>, LoadError> {
    let mut out = Vec::new();
    let mut errors = Vec::new();
    if text.trim().is_empty() {
        return Ok(out);
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().cloned().map_err(|e| LoadError::Invalid {
        source_name: source_name.into(),
        errors: vec![RowError {
            line: 1,
            message: e.to_string(),
        }],
    })?;
    if headers.iter().collect::<Vec<_>>() != header {
        return Err(LoadError::Invalid {
            source_name: source_name.into(),
            errors: vec![RowError {
                line: 1,
                message: format!("header does not match schema {:?}", header.join(",")),
            }],
        });
    }
    for record in reader.records() {
        match record {
            Ok(rec) => {
                let line = rec.position().map(|p| p.line()).unwrap_or(0);
                match rec.deserialize::<T>(Some(&headers)) {
                    Ok(row) => match pct(&row).map(|p| check_pct("female_pct", p)) {
                        Some(Err(message)) => errors.push(RowError { line, message }),
                        _ => out.push(row),
                    },
                    Err(e) => errors.push(RowError {
                        line,
                        message: e.to_string(),
                    }),
                }
            }
            Err(e) => errors.push(RowError {
                line: e.position().map(|p| p.line()).unwrap_or(0),
                message: e.to_string(),
            }),
        }
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(LoadError::Invalid {
            source_name: source_name.into(),
            errors,
        })
    }
}

/// Turkish list CSV: `title_tr,title_en,isco_major,female_pct`.
pub fn parse_raw_tr(text: &str, source_name: &str) -> Result<Vec<RawTrTitle>, LoadError> {
    parse_raw(
        text,
        source_name,
        &["title_tr", "title_en", "isco_major", "female_pct"],
        |r: &RawTrTitle| r.female_pct,
    )
}

/// US list CSV: `title,soc_major,female_pct`. An empty share means no census data.
pub fn parse_raw_us(text: &str, source_name: &str) -> Result<Vec<RawUsTitle>, LoadError> {
    parse_raw(
        text,
        source_name,
        &["title", "soc_major", "female_pct"],
        |r: &RawUsTitle| r.female_pct,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum AuditOutcome {
    Admitted {
        rule: String,
        occupation_id: String,
        partner: String,
    },
    Excluded {
        rule: ExclusionRule,
        rule_number: u8,
        term: String,
    },
    NoCensusData,
    Unmatched,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub side: TitleSide,
    pub input_title: String,
    /// Title after modification rules.
    pub title: String,
    pub modifications: Vec<String>,
    #[serde(flatten)]
    pub outcome: AuditOutcome,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MatchAudit {
    pub entries: Vec<AuditEntry>,
}

impl MatchAudit {
    pub fn for_title(&self, side: TitleSide, input_title: &str) -> Vec<&AuditEntry> {
        self.entries
            .iter()
            .filter(|e| e.side == side && e.input_title == input_title)
            .collect()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&serde_json::to_string(e).expect("audit entries serialize"));
            out.push('\n');
        }
        out
    }
}

fn normalize(s: &str) -> String {
    s.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

fn tokens(folded: &str) -> Vec<&str> {
    folded
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .collect()
}

fn contains_term(title_tokens: &[&str], term_tokens: &[&str]) -> bool {
    !term_tokens.is_empty()
        && title_tokens
            .windows(term_tokens.len())
            .any(|w| w == term_tokens)
}

impl MatchRules {
    /// First exclusion rule whose term list hits any of the titles, as whole words.
    fn exclusion(&self, titles_tr: &[&str], titles_en: &[&str]) -> Option<(ExclusionRule, String)> {
        let folded: Vec<String> = titles_tr
            .iter()
            .map(|t| fold_turkish(t))
            .chain(titles_en.iter().map(|t| t.to_lowercase()))
            .collect();
        for (rule, terms) in &self.exclusions {
            for term in terms {
                let variants = [fold_turkish(term), term.to_lowercase()];
                for title in &folded {
                    let tt = tokens(title);
                    if variants.iter().any(|v| contains_term(&tt, &tokens(v))) {
                        return Some((*rule, term.clone()));
                    }
                }
            }
        }
        None
    }

    fn modify(&self, title: &str, log: &mut Vec<String>) -> String {
        let mut t = title.to_string();
        if let Some(new) = self.retitle.get(&t) {
            log.push(format!("modify.retitle: {new}"));
            t = new.clone();
        }
        if let Some(new) = self.strip_detail.get(&t) {
            log.push(format!("modify.strip_detail: {new}"));
            t = new.clone();
        }
        t
    }
}

struct UsCandidate {
    entry: usize,
    title: String,
    soc: SocMajor,
    pct: f64,
}

/// Crosswalks the two lists. Returns the matched corpus plus an audit entry
/// for every input title (one per part for split US titles).
pub fn match_occupations(
    tr_list: &[RawTrTitle],
    us_list: &[RawUsTitle],
    rules: &MatchRules,
) -> Result<(OccupationCorpus, MatchAudit), MatchError> {
    if tr_list.is_empty() {
        return Err(MatchError::EmptyInput(TitleSide::Tr));
    }
    if us_list.is_empty() {
        return Err(MatchError::EmptyInput(TitleSide::Us));
    }

    let mut us_entries = Vec::new();
    let mut us_candidates: Vec<UsCandidate> = Vec::new();
    for raw in us_list {
        let (parts, split_note) = match rules.split.get(&raw.title) {
            Some(parts) => (
                parts.clone(),
                Some(format!("modify.split: {}", parts.join(" | "))),
            ),
            None => (vec![raw.title.clone()], None),
        };
        for part in parts {
            let mut mods: Vec<String> = split_note.iter().cloned().collect();
            let title = rules.modify(&part, &mut mods);
            let outcome = if let Some((rule, term)) =
                rules.exclusion(&[], &[raw.title.as_str(), title.as_str()])
            {
                Some(AuditOutcome::Excluded {
                    rule,
                    rule_number: rule.number(),
                    term,
                })
            } else if raw.female_pct.is_none() {
                Some(AuditOutcome::NoCensusData)
            } else {
                None
            };
            let entry = us_entries.len();
            if outcome.is_none() {
                us_candidates.push(UsCandidate {
                    entry,
                    title: title.clone(),
                    soc: raw.soc_major,
                    pct: raw.female_pct.unwrap_or_default(),
                });
            }
            us_entries.push(AuditEntry {
                side: TitleSide::Us,
                input_title: raw.title.clone(),
                title,
                modifications: mods,
                outcome: outcome.unwrap_or(AuditOutcome::Unmatched),
            });
        }
    }

    let mut us_index: BTreeMap<String, usize> = BTreeMap::new();
    for (i, c) in us_candidates.iter().enumerate() {
        us_index.entry(normalize(&c.title)).or_insert(i);
    }

    let mut tr_entries = Vec::with_capacity(tr_list.len());
    let mut occupations = Vec::new();
    let mut id_sources: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for raw in tr_list {
        let mut mods = Vec::new();
        let title_tr = rules.modify(&raw.title_tr, &mut mods);
        let gloss = rules.modify(&raw.title_en, &mut mods);
        let outcome = if let Some((rule, term)) = rules.exclusion(
            &[raw.title_tr.as_str(), title_tr.as_str()],
            &[raw.title_en.as_str(), gloss.as_str()],
        ) {
            AuditOutcome::Excluded {
                rule,
                rule_number: rule.number(),
                term,
            }
        } else if raw.female_pct.is_none() {
            AuditOutcome::NoCensusData
        } else {
            let key = normalize(&gloss);
            let admitted = us_index
                .get(&key)
                .map(|&i| ("exact".to_string(), i))
                .or_else(|| {
                    SimilarityRule::ALL.into_iter().find_map(|rule| {
                        let map = rules.similar.get(&rule)?;
                        let target = map
                            .iter()
                            .find(|(k, _)| normalize(k) == key)
                            .map(|(_, v)| normalize(v))?;
                        us_index
                            .get(&target)
                            .map(|&i| (format!("similar.{}", rule.key()), i))
                    })
                });
            match admitted {
                Some((rule, i)) => {
                    let us = &us_candidates[i];
                    let id = format!("occ-{}", slug(&us.title));
                    id_sources
                        .entry(id.clone())
                        .or_default()
                        .push(raw.title_tr.clone());
                    occupations.push(Occupation {
                        id: id.clone(),
                        title_en: us.title.clone(),
                        title_tr: title_tr.clone(),
                        isco_major: raw.isco_major,
                        soc_major: us.soc,
                        female_pct_tr: raw.female_pct.unwrap_or_default(),
                        female_pct_us: us.pct,
                    });
                    us_entries[us.entry].outcome = AuditOutcome::Admitted {
                        rule: rule.clone(),
                        occupation_id: id.clone(),
                        partner: title_tr.clone(),
                    };
                    AuditOutcome::Admitted {
                        rule,
                        occupation_id: id,
                        partner: us.title.clone(),
                    }
                }
                None => AuditOutcome::Unmatched,
            }
        };
        tr_entries.push(AuditEntry {
            side: TitleSide::Tr,
            input_title: raw.title_tr.clone(),
            title: title_tr,
            modifications: mods,
            outcome,
        });
    }

    if let Some((id, titles)) = id_sources.into_iter().find(|(_, t)| t.len() > 1) {
        return Err(MatchError::DuplicateId { id, titles });
    }
    let corpus = OccupationCorpus::new(occupations).map_err(MatchError::Config)?;
    let mut entries = tr_entries;
    entries.extend(us_entries);
    Ok((corpus, MatchAudit { entries }))
}
