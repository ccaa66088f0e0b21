//! Template instantiation: occupation and adjective probes in Turkish, and the
//! English kin-term sentences of the asymmetry experiment.

pub mod morphology;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{
    check_predicate_design, Adjective, Gender, OccupationCorpus, Predicate, PredicateCategory,
    SubjectWord,
};
pub use morphology::{attach_copula_suffix, MorphError};

/// Slot keys used in [`Probe::slots`].
pub mod slot {
    pub const OCCUPATION_ID: &str = "occupation_id";
    pub const OCCUPATION_TR: &str = "occupation_tr";
    pub const QUALITY: &str = "quality";
    pub const ADJECTIVE: &str = "adjective";
    pub const SUBJECT_LEMMA: &str = "subject_lemma";
    pub const SUBJECT_EN: &str = "subject_en";
    pub const SUBJECT_GENDER: &str = "subject_gender";
    pub const PREDICATE: &str = "predicate";
    pub const PREDICATE_CATEGORY: &str = "predicate_category";
    pub const PREDICATE_STEREOTYPE: &str = "predicate_stereotype";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    OccupationBase,
    OccupationAdjective,
    AdjectiveBase,
    AdjectivePersonhood,
    Asymmetry,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::OccupationBase,
        Experiment::OccupationAdjective,
        Experiment::AdjectiveBase,
        Experiment::AdjectivePersonhood,
        Experiment::Asymmetry,
    ];

    pub fn direction(self) -> Direction {
        match self {
            Experiment::Asymmetry => Direction::EnTr,
            _ => Direction::TrEn,
        }
    }

    pub fn required_slots(self) -> &'static [&'static str] {
        match self {
            Experiment::OccupationBase => &[slot::OCCUPATION_ID, slot::OCCUPATION_TR],
            Experiment::OccupationAdjective => {
                &[slot::OCCUPATION_ID, slot::OCCUPATION_TR, slot::QUALITY]
            }
            Experiment::AdjectiveBase | Experiment::AdjectivePersonhood => &[slot::ADJECTIVE],
            Experiment::Asymmetry => &[
                slot::SUBJECT_LEMMA,
                slot::SUBJECT_EN,
                slot::SUBJECT_GENDER,
                slot::PREDICATE,
                slot::PREDICATE_CATEGORY,
                slot::PREDICATE_STEREOTYPE,
            ],
        }
    }

    /// Slots whose values appear verbatim in the source sentence.
    pub fn text_slots(self) -> &'static [&'static str] {
        match self {
            Experiment::OccupationBase => &[slot::OCCUPATION_TR],
            Experiment::OccupationAdjective => &[slot::OCCUPATION_TR, slot::QUALITY],
            Experiment::AdjectiveBase | Experiment::AdjectivePersonhood => &[slot::ADJECTIVE],
            Experiment::Asymmetry => &[slot::SUBJECT_EN, slot::PREDICATE],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "tr-en")]
    TrEn,
    #[serde(rename = "en-tr")]
    EnTr,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::TrEn => "tr-en",
            Direction::EnTr => "en-tr",
        }
    }

    pub fn source_lang(self) -> &'static str {
        match self {
            Direction::TrEn => "tr",
            Direction::EnTr => "en",
        }
    }

    pub fn target_lang(self) -> &'static str {
        match self {
            Direction::TrEn => "en",
            Direction::EnTr => "tr",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Attributive quality adjective in the qualified occupation template.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QualityAdjective {
    VeryGood,
    Good,
    Bad,
    VeryBad,
}

impl QualityAdjective {
    pub const ALL: [QualityAdjective; 4] = [
        QualityAdjective::VeryGood,
        QualityAdjective::Good,
        QualityAdjective::Bad,
        QualityAdjective::VeryBad,
    ];

    pub fn surface_tr(self) -> &'static str {
        match self {
            QualityAdjective::VeryGood => "çok iyi",
            QualityAdjective::Good => "iyi",
            QualityAdjective::Bad => "kötü",
            QualityAdjective::VeryBad => "çok kötü",
        }
    }

    pub fn gloss(self) -> &'static str {
        match self {
            QualityAdjective::VeryGood => "very good",
            QualityAdjective::Good => "good",
            QualityAdjective::Bad => "bad",
            QualityAdjective::VeryBad => "very bad",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            QualityAdjective::VeryGood => "very-good",
            QualityAdjective::Good => "good",
            QualityAdjective::Bad => "bad",
            QualityAdjective::VeryBad => "very-bad",
        }
    }

    pub fn from_surface(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|q| q.surface_tr() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probe {
    pub id: String,
    pub experiment: Experiment,
    pub direction: Direction,
    pub source_text: String,
    pub slots: BTreeMap<String, String>,
}

impl Probe {
    pub fn slot(&self, key: &str) -> Option<&str> {
        self.slots.get(key).map(String::as_str)
    }

    /// Checks the structural invariants of a probe.
    pub fn validate(&self) -> Result<(), String> {
        if self.source_text.is_empty() || self.source_text.trim_end() != self.source_text {
            return Err(format!(
                "probe {}: empty or trailing-whitespace source",
                self.id
            ));
        }
        if self.direction != self.experiment.direction() {
            return Err(format!(
                "probe {}: wrong direction {}",
                self.id, self.direction
            ));
        }
        let want: BTreeSet<&str> = self.experiment.required_slots().iter().copied().collect();
        let got: BTreeSet<&str> = self.slots.keys().map(String::as_str).collect();
        if want != got {
            return Err(format!(
                "probe {}: slots {:?} do not match {:?}",
                self.id, got, want
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProbeError {
    #[error("cannot attach copula to adjective {adjective:?}: {source}")]
    Morphology {
        adjective: String,
        #[source]
        source: MorphError,
    },
    #[error("asymmetry lexicon cardinality: {0}")]
    Cardinality(String),
}

fn slots<const N: usize>(pairs: [(&str, &str); N]) -> BTreeMap<String, String> {
    pairs
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// One base and four qualified probes per occupation, in corpus order.
pub fn gen_occupation_probes(corpus: &OccupationCorpus) -> Vec<Probe> {
    let mut probes = Vec::with_capacity(corpus.len() * (1 + QualityAdjective::ALL.len()));
    for occ in corpus.occupations() {
        probes.push(Probe {
            id: format!("occ:{}:base", occ.id),
            experiment: Experiment::OccupationBase,
            direction: Direction::TrEn,
            source_text: format!("O bir {}", occ.title_tr),
            slots: slots([
                (slot::OCCUPATION_ID, &occ.id),
                (slot::OCCUPATION_TR, &occ.title_tr),
            ]),
        });
        for q in QualityAdjective::ALL {
            probes.push(Probe {
                id: format!("occ:{}:{}", occ.id, q.key()),
                experiment: Experiment::OccupationAdjective,
                direction: Direction::TrEn,
                source_text: format!("O {} bir {}", q.surface_tr(), occ.title_tr),
                slots: slots([
                    (slot::OCCUPATION_ID, &occ.id),
                    (slot::OCCUPATION_TR, &occ.title_tr),
                    (slot::QUALITY, q.surface_tr()),
                ]),
            });
        }
    }
    probes
}

/// "O <adj+copula>" and "O <adj> birisidir" per adjective.
pub fn gen_adjective_probes(lexicon: &[Adjective]) -> Result<Vec<Probe>, ProbeError> {
    let mut probes = Vec::with_capacity(lexicon.len() * 2);
    for adj in lexicon {
        let suffixed =
            attach_copula_suffix(&adj.surface_tr).map_err(|source| ProbeError::Morphology {
                adjective: adj.surface_tr.clone(),
                source,
            })?;
        probes.push(Probe {
            id: format!("adj:{}:base", adj.surface_tr),
            experiment: Experiment::AdjectiveBase,
            direction: Direction::TrEn,
            source_text: format!("O {suffixed}"),
            slots: slots([(slot::ADJECTIVE, &adj.surface_tr)]),
        });
        probes.push(Probe {
            id: format!("adj:{}:personhood", adj.surface_tr),
            experiment: Experiment::AdjectivePersonhood,
            direction: Direction::TrEn,
            source_text: format!("O {} birisidir", adj.surface_tr),
            slots: slots([(slot::ADJECTIVE, &adj.surface_tr)]),
        });
    }
    Ok(probes)
}

/// Number of subject words the asymmetry design calls for.
pub const ASYMMETRY_SUBJECTS: usize = 4;

/// English sentence grammar per subject word. Subjects listed in
/// `plural_subjects` (by Turkish lemma) use "The <subject> are <predicate>";
/// everyone else uses "My <subject> is <predicate>".
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsymmetryScheme {
    #[serde(default)]
    pub plural_subjects: BTreeSet<String>,
}

fn pluralize_noun_phrase(predicate: &str) -> String {
    let bare = predicate
        .strip_prefix("a ")
        .or_else(|| predicate.strip_prefix("an "))
        .unwrap_or(predicate);
    let (head, last) = match bare.rsplit_once(' ') {
        Some((h, l)) => (format!("{h} "), l),
        None => (String::new(), bare),
    };
    let plural = if ["s", "x", "z", "ch", "sh"]
        .iter()
        .any(|e| last.ends_with(e))
    {
        format!("{last}es")
    } else if last.ends_with('y')
        && !last
            .chars()
            .rev()
            .nth(1)
            .is_some_and(|c| "aeiou".contains(c))
    {
        format!("{}ies", &last[..last.len() - 1])
    } else {
        format!("{last}s")
    };
    format!("{head}{plural}")
}

/// Renders the English sentence for one subject/predicate pair.
pub fn asymmetry_sentence(
    subject_en: &str,
    predicate: &Predicate,
    plural: bool,
) -> (String, String) {
    if plural {
        let pred = match predicate.category {
            PredicateCategory::Occupation => pluralize_noun_phrase(&predicate.surface_en),
            _ => predicate.surface_en.clone(),
        };
        (format!("The {subject_en} are {pred}"), pred)
    } else {
        (
            format!("My {subject_en} is {}", predicate.surface_en),
            predicate.surface_en.clone(),
        )
    }
}

/// Every subject × gender × predicate sentence; 240 for the full design.
pub fn gen_asymmetry_probes(
    subjects: &[SubjectWord],
    predicates: &[Predicate],
    scheme: &AsymmetryScheme,
) -> Result<Vec<Probe>, ProbeError> {
    if subjects.len() != ASYMMETRY_SUBJECTS {
        return Err(ProbeError::Cardinality(format!(
            "{} subject words (expected {ASYMMETRY_SUBJECTS})",
            subjects.len()
        )));
    }
    check_predicate_design(predicates).map_err(ProbeError::Cardinality)?;
    if let Some(unknown) = scheme
        .plural_subjects
        .iter()
        .find(|l| !subjects.iter().any(|s| &s.lemma_tr == *l))
    {
        return Err(ProbeError::Cardinality(format!(
            "plural scheme names unknown subject {unknown:?}"
        )));
    }

    let mut probes = Vec::with_capacity(subjects.len() * 2 * predicates.len());
    for subject in subjects {
        let plural = scheme.plural_subjects.contains(&subject.lemma_tr);
        for gender in Gender::BOTH {
            let subject_en = subject.surface_en(gender);
            for predicate in predicates {
                let (text, rendered) = asymmetry_sentence(subject_en, predicate, plural);
                probes.push(Probe {
                    id: format!(
                        "asym:{}:{}:{}:{}",
                        subject.lemma_tr,
                        gender.as_str(),
                        predicate.category.as_str(),
                        crate::util::slug(&predicate.surface_en)
                    ),
                    experiment: Experiment::Asymmetry,
                    direction: Direction::EnTr,
                    source_text: text,
                    slots: slots([
                        (slot::SUBJECT_LEMMA, &subject.lemma_tr),
                        (slot::SUBJECT_EN, subject_en),
                        (slot::SUBJECT_GENDER, gender.as_str()),
                        (slot::PREDICATE, &rendered),
                        (slot::PREDICATE_CATEGORY, predicate.category.as_str()),
                        (slot::PREDICATE_STEREOTYPE, predicate.stereotype.as_str()),
                    ]),
                });
            }
        }
    }
    Ok(probes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{IscoMajor, Occupation, SocMajor, Stereotype};
    use proptest::prelude::*;

    fn occupation(id: &str, title_tr: &str) -> Occupation {
        Occupation {
            id: id.into(),
            title_en: "Intensive Care Unit Nurse".into(),
            title_tr: title_tr.into(),
            isco_major: IscoMajor::Professionals,
            soc_major: SocMajor::Healthcare,
            female_pct_tr: 44.6,
            female_pct_us: 91.0,
        }
    }

    pub(crate) fn design_predicates() -> Vec<Predicate> {
        let mut out = Vec::new();
        for category in PredicateCategory::ALL {
            for stereotype in Stereotype::BOTH {
                for i in 0..5 {
                    out.push(Predicate {
                        category,
                        stereotype,
                        surface_en: format!("a {}-{}-{i}", category.as_str(), stereotype.as_str()),
                        surface_tr: None,
                    });
                }
            }
        }
        out
    }

    fn subjects() -> Vec<SubjectWord> {
        ["kardeş", "yeğen", "çocuk", "torun"]
            .iter()
            .enumerate()
            .map(|(i, lemma)| SubjectWord {
                lemma_tr: lemma.to_string(),
                surface_en_male: format!("m{i}"),
                surface_en_female: format!("f{i}"),
                marker_male: "erkek".into(),
                marker_female: "kız".into(),
            })
            .collect()
    }

    #[test]
    fn one_occupation_gives_five_probes() {
        let corpus =
            OccupationCorpus::new(vec![occupation("occ-icu-nurse", "Yoğun Bakım Hemşiresi")])
                .unwrap();
        let probes = gen_occupation_probes(&corpus);
        assert_eq!(probes.len(), 5);
        assert_eq!(probes[0].source_text, "O bir Yoğun Bakım Hemşiresi");
        assert_eq!(
            probes[4].source_text,
            "O çok kötü bir Yoğun Bakım Hemşiresi"
        );
        assert_eq!(probes[4].slot(slot::QUALITY), Some("çok kötü"));
        let qualities: Vec<_> = probes[1..]
            .iter()
            .map(|p| p.slot(slot::QUALITY).unwrap())
            .collect();
        assert_eq!(qualities, ["çok iyi", "iyi", "kötü", "çok kötü"]);
        for p in &probes {
            p.validate().unwrap();
        }
    }

    #[test]
    fn adjective_probes() {
        let lex = vec![Adjective::new("güçsüz", "weak", 15.0, 75.0).unwrap()];
        let probes = gen_adjective_probes(&lex).unwrap();
        assert_eq!(probes.len(), 2);
        assert_eq!(probes[0].source_text, "O güçsüzdür");
        assert_eq!(probes[1].source_text, "O güçsüz birisidir");
        assert!(gen_adjective_probes(&[]).unwrap().is_empty());
    }

    #[test]
    fn adjective_without_vowel_names_it() {
        let lex = vec![Adjective::new("xyz", "?", 10.0, 10.0).unwrap()];
        match gen_adjective_probes(&lex).unwrap_err() {
            ProbeError::Morphology { adjective, .. } => assert_eq!(adjective, "xyz"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn asymmetry_counts_and_sentence() {
        let mut subs = subjects();
        subs[0].surface_en_male = "brother".into();
        subs[0].surface_en_female = "sister".into();
        let mut preds = design_predicates();
        preds[1].surface_en = "a soccer player".into();
        let probes = gen_asymmetry_probes(&subs, &preds, &AsymmetryScheme::default()).unwrap();
        assert_eq!(probes.len(), 240);
        let female = probes
            .iter()
            .filter(|p| p.slot(slot::SUBJECT_GENDER) == Some("female"))
            .count();
        assert_eq!(female, 120);
        let texts: Vec<&str> = probes.iter().map(|p| p.source_text.as_str()).collect();
        assert!(texts.contains(&"My sister is a soccer player"));
        assert!(texts.contains(&"My brother is a soccer player"));
    }

    #[test]
    fn asymmetry_cardinality_errors() {
        let err = gen_asymmetry_probes(&subjects(), &[], &AsymmetryScheme::default()).unwrap_err();
        assert!(matches!(err, ProbeError::Cardinality(_)));
        let err = gen_asymmetry_probes(&subjects()[..3], &design_predicates(), &Default::default());
        assert!(err.is_err());
    }

    #[test]
    fn plural_scheme() {
        let mut subs = subjects();
        subs[0].surface_en_male = "young men".into();
        subs[0].surface_en_female = "young women".into();
        let mut preds = design_predicates();
        preds[0].surface_en = "a soccer player".into();
        preds[1].surface_en = "a secretary".into();
        let scheme = AsymmetryScheme {
            plural_subjects: ["kardeş".to_string()].into(),
        };
        let probes = gen_asymmetry_probes(&subs, &preds, &scheme).unwrap();
        assert_eq!(probes[0].source_text, "The young men are soccer players");
        assert_eq!(probes[1].source_text, "The young men are secretaries");
        assert!(probes[30 * 2].source_text.starts_with("My "));
    }

    #[test]
    fn ids_unique_and_generation_stable() {
        let corpus =
            OccupationCorpus::new(vec![occupation("a", "Hemşire"), occupation("b", "Cerrah")])
                .unwrap();
        let mut probes = gen_occupation_probes(&corpus);
        probes.extend(
            gen_asymmetry_probes(&subjects(), &design_predicates(), &Default::default()).unwrap(),
        );
        let ids: BTreeSet<_> = probes.iter().map(|p| p.id.clone()).collect();
        assert_eq!(ids.len(), probes.len());
        assert_eq!(
            gen_occupation_probes(&corpus),
            gen_occupation_probes(&corpus)
        );
    }

    fn harmony_class(v: char) -> &'static str {
        match v {
            'a' | 'ı' => "ı",
            'e' | 'i' => "i",
            'o' | 'u' => "u",
            _ => "ü",
        }
    }

    proptest! {
        #[test]
        fn copula_shape(word in "[bcçdfgğhjklmnprsştvyz]{0,2}[aeıioöuü][bcçdfgğhjklmnprsştvyzaeıioöuü]{0,6}") {
            let out = attach_copula_suffix(&word).unwrap();
            prop_assert_eq!(out.chars().count(), word.chars().count() + 3);
            prop_assert!(out.starts_with(&word));
            let suffix: Vec<char> = out.chars().skip(word.chars().count()).collect();
            let last_v = word.chars().rev().find(|c| "aeıioöuü".contains(*c)).unwrap();
            prop_assert_eq!(suffix[1].to_string(), harmony_class(last_v));
            let voiceless = word.chars().last().is_some_and(|c| "fstkçşhp".contains(c));
            prop_assert_eq!(suffix[0] == 't', voiceless);
            prop_assert_eq!(suffix[2], 'r');
        }

        #[test]
        fn text_slots_appear_once(title in "[A-ZÇĞİÖŞÜ][a-zçğıöşü]{3,10}( [A-ZÇĞİÖŞÜ][a-zçğıöşü]{3,10}){0,2}") {
            // titles are capitalized so they cannot collide with the lowercase template words
            let corpus = OccupationCorpus::new(vec![occupation("x", &title)]).unwrap();
            for p in gen_occupation_probes(&corpus) {
                for key in p.experiment.text_slots() {
                    let v = p.slot(key).unwrap();
                    prop_assert_eq!(p.source_text.matches(v).count(), 1, "{} in {}", v, p.source_text);
                }
                prop_assert!(p.validate().is_ok());
            }
        }
    }
}
