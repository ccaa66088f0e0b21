//! Gender-signal extraction from translations: English subject pronouns and
//! overt gender markers on Turkish kin terms.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::corpus::{Gender, SubjectWord};
use crate::exec;
use crate::probegen::{slot, Experiment, Probe};
use crate::translate::TranslationRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PronounClass {
    Male,
    Female,
    NeutralThey,
    None,
}

impl PronounClass {
    pub fn is_gendered(self) -> bool {
        matches!(self, PronounClass::Male | PronounClass::Female)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkingClass {
    Neutral,
    MarkedMatching,
    MarkedOpposite,
    SubjectNotFound,
}

/// Turkish case folding: dotted capital İ → i, dotless capital I → ı,
/// everything else by the default Unicode lowercase mapping.
pub fn fold_turkish(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            'İ' => out.push('i'),
            'I' => out.push('ı'),
            other => out.extend(other.to_lowercase()),
        }
    }
    out
}

fn words(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
}

const SUBJECT_PRONOUNS: [(&str, PronounClass); 3] = [
    ("he", PronounClass::Male),
    ("she", PronounClass::Female),
    ("they", PronounClass::NeutralThey),
];

/// Class and surface form of the first subject pronoun, if any.
pub fn find_pronoun(english_text: &str) -> (PronounClass, Option<&str>) {
    for token in words(english_text) {
        for (pronoun, class) in SUBJECT_PRONOUNS {
            if token.eq_ignore_ascii_case(pronoun) {
                return (class, Some(token));
            }
        }
    }
    (PronounClass::None, None)
}

pub fn classify_pronoun(english_text: &str) -> PronounClass {
    find_pronoun(english_text).0
}

/// Gender words recognised in front of any subject, beyond its own markers.
pub const GLOBAL_MARKERS: [(&str, Gender); 7] = [
    ("kız", Gender::Female),
    ("erkek", Gender::Male),
    ("kadın", Gender::Female),
    ("adam", Gender::Male),
    ("bayan", Gender::Female),
    ("bay", Gender::Male),
    ("hanım", Gender::Female),
];

/// Tokens searched before the subject noun.
pub const MARKER_WINDOW: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkingMatch {
    pub class: MarkingClass,
    pub matched_token: Option<String>,
    pub marker_token: Option<String>,
}

const VOWELS: &str = "aeıioöuüâîû";

/// Prefixes under which the lemma can surface: the lemma itself and, for
/// polysyllabic stems, the form with its final stop softened before a
/// vowel-initial suffix (çocuk → çocuğum).
fn lemma_prefixes(lemma: &str) -> Vec<String> {
    let folded = fold_turkish(lemma);
    let mut out = vec![folded.clone()];
    let vowel_count = folded.chars().filter(|c| VOWELS.contains(*c)).count();
    if vowel_count >= 2 {
        let mut chars: Vec<char> = folded.chars().collect();
        let soft = match chars.last() {
            Some('k') => Some('ğ'),
            Some('p') => Some('b'),
            Some('ç') => Some('c'),
            Some('t') => Some('d'),
            _ => None,
        };
        if let Some(s) = soft {
            *chars.last_mut().expect("non-empty") = s;
            out.push(chars.into_iter().collect());
        }
    }
    out
}

pub fn detect_gender_marking_detail(
    turkish_text: &str,
    subject: &SubjectWord,
    subject_gender: Gender,
) -> MarkingMatch {
    let folded = fold_turkish(turkish_text);
    let tokens: Vec<&str> = words(&folded).collect();
    let prefixes = lemma_prefixes(&subject.lemma_tr);
    let Some(pos) = tokens.iter().position(|t| {
        prefixes
            .iter()
            .any(|p| !p.is_empty() && t.starts_with(p.as_str()))
    }) else {
        return MarkingMatch {
            class: MarkingClass::SubjectNotFound,
            matched_token: None,
            marker_token: None,
        };
    };

    let own = [
        (fold_turkish(&subject.marker_male), Gender::Male),
        (fold_turkish(&subject.marker_female), Gender::Female),
    ];
    let marker_gender = |token: &str| -> Option<Gender> {
        own.iter()
            .find(|(m, _)| m == token)
            .map(|(_, g)| *g)
            .or_else(|| {
                GLOBAL_MARKERS
                    .iter()
                    .find(|(m, _)| *m == token)
                    .map(|(_, g)| *g)
            })
    };

    let start = pos.saturating_sub(MARKER_WINDOW);
    let marker = tokens[start..pos]
        .iter()
        .rev()
        .find_map(|t| marker_gender(t).map(|g| (*t, g)));

    let (class, marker_token) = match marker {
        None => (MarkingClass::Neutral, None),
        Some((tok, g)) if g == subject_gender => (MarkingClass::MarkedMatching, Some(tok)),
        Some((tok, _)) => (MarkingClass::MarkedOpposite, Some(tok)),
    };
    MarkingMatch {
        class,
        matched_token: Some(tokens[pos].to_string()),
        marker_token: marker_token.map(str::to_string),
    }
}

pub fn detect_gender_marking(
    turkish_text: &str,
    subject: &SubjectWord,
    subject_gender: Gender,
) -> MarkingClass {
    detect_gender_marking_detail(turkish_text, subject, subject_gender).class
}

/// The gender signal read from one translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Signal {
    Pronoun(PronounClass),
    Marking(MarkingClass),
    /// The translation request failed; kept so denominators stay explicit.
    Untranslated,
}

impl Signal {
    pub fn as_str(self) -> &'static str {
        match self {
            Signal::Pronoun(PronounClass::Male) => "male",
            Signal::Pronoun(PronounClass::Female) => "female",
            Signal::Pronoun(PronounClass::NeutralThey) => "neutral_they",
            Signal::Pronoun(PronounClass::None) => "none",
            Signal::Marking(MarkingClass::Neutral) => "neutral",
            Signal::Marking(MarkingClass::MarkedMatching) => "marked_matching",
            Signal::Marking(MarkingClass::MarkedOpposite) => "marked_opposite",
            Signal::Marking(MarkingClass::SubjectNotFound) => "subject_not_found",
            Signal::Untranslated => "untranslated",
        }
    }

    pub fn parse(s: &str) -> Option<Signal> {
        Some(match s {
            "male" => Signal::Pronoun(PronounClass::Male),
            "female" => Signal::Pronoun(PronounClass::Female),
            "neutral_they" => Signal::Pronoun(PronounClass::NeutralThey),
            "none" => Signal::Pronoun(PronounClass::None),
            "neutral" => Signal::Marking(MarkingClass::Neutral),
            "marked_matching" => Signal::Marking(MarkingClass::MarkedMatching),
            "marked_opposite" => Signal::Marking(MarkingClass::MarkedOpposite),
            "subject_not_found" => Signal::Marking(MarkingClass::SubjectNotFound),
            "untranslated" => Signal::Untranslated,
            _ => return None,
        })
    }

    pub fn pronoun(self) -> Option<PronounClass> {
        match self {
            Signal::Pronoun(p) => Some(p),
            _ => None,
        }
    }

    pub fn marking(self) -> Option<MarkingClass> {
        match self {
            Signal::Marking(m) => Some(m),
            _ => None,
        }
    }
}

/// One detection. Serializes as
/// `{probe_id, backend, class, matched_token, marker_token}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "DetectionRow", try_from = "DetectionRow")]
pub struct Detection {
    pub probe_id: String,
    pub backend: String,
    pub signal: Signal,
    pub matched_token: Option<String>,
    pub marker_token: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct DetectionRow {
    probe_id: String,
    backend: String,
    class: String,
    matched_token: Option<String>,
    marker_token: Option<String>,
}

impl From<Detection> for DetectionRow {
    fn from(d: Detection) -> Self {
        DetectionRow {
            probe_id: d.probe_id,
            backend: d.backend,
            class: d.signal.as_str().to_string(),
            matched_token: d.matched_token,
            marker_token: d.marker_token,
        }
    }
}

impl TryFrom<DetectionRow> for Detection {
    type Error = String;

    fn try_from(r: DetectionRow) -> Result<Self, Self::Error> {
        let signal =
            Signal::parse(&r.class).ok_or_else(|| format!("unknown class {:?}", r.class))?;
        Ok(Detection {
            probe_id: r.probe_id,
            backend: r.backend,
            signal,
            matched_token: r.matched_token,
            marker_token: r.marker_token,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DetectError {
    #[error("translation record refers to unknown probe {0:?}")]
    UnknownProbe(String),
    #[error("probe {probe:?} names subject lemma {lemma:?} which is not in the lexicon")]
    UnknownSubject { probe: String, lemma: String },
    #[error("probe {probe:?} is missing slot {slot:?}")]
    MissingSlot { probe: String, slot: &'static str },
}

/// Runs the matching detector over every record. Order follows `records`.
pub fn detect_records(
    records: &[TranslationRecord],
    probes: &[Probe],
    subjects: &[SubjectWord],
    parallelism: usize,
) -> Result<Vec<Detection>, DetectError> {
    let by_id: HashMap<&str, &Probe> = probes.iter().map(|p| (p.id.as_str(), p)).collect();
    let by_lemma: BTreeMap<&str, &SubjectWord> =
        subjects.iter().map(|s| (s.lemma_tr.as_str(), s)).collect();
    exec::ordered_map(records, parallelism, |record| {
        let probe = by_id
            .get(record.probe_id.as_str())
            .ok_or_else(|| DetectError::UnknownProbe(record.probe_id.clone()))?;
        detect_one(record, probe, &by_lemma)
    })
    .into_iter()
    .collect()
}

fn detect_one(
    record: &TranslationRecord,
    probe: &Probe,
    subjects: &BTreeMap<&str, &SubjectWord>,
) -> Result<Detection, DetectError> {
    let mut d = Detection {
        probe_id: record.probe_id.clone(),
        backend: record.backend_id.clone(),
        signal: Signal::Untranslated,
        matched_token: None,
        marker_token: None,
    };
    let missing = |slot: &'static str| DetectError::MissingSlot {
        probe: probe.id.clone(),
        slot,
    };
    if probe.experiment == Experiment::Asymmetry {
        let lemma = probe
            .slot(slot::SUBJECT_LEMMA)
            .ok_or_else(|| missing(slot::SUBJECT_LEMMA))?;
        let subject = subjects
            .get(lemma)
            .ok_or_else(|| DetectError::UnknownSubject {
                probe: probe.id.clone(),
                lemma: lemma.to_string(),
            })?;
        let gender: Gender = probe
            .slot(slot::SUBJECT_GENDER)
            .and_then(|g| g.parse().ok())
            .ok_or_else(|| missing(slot::SUBJECT_GENDER))?;
        if let Some(text) = &record.target_text {
            let m = detect_gender_marking_detail(text, subject, gender);
            d.signal = Signal::Marking(m.class);
            d.matched_token = m.matched_token;
            d.marker_token = m.marker_token;
        }
    } else if let Some(text) = &record.target_text {
        let (class, token) = find_pronoun(text);
        d.signal = Signal::Pronoun(class);
        d.matched_token = token.map(str::to_string);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kardes() -> SubjectWord {
        SubjectWord {
            lemma_tr: "kardeş".into(),
            surface_en_male: "brother".into(),
            surface_en_female: "sister".into(),
            marker_male: "erkek".into(),
            marker_female: "kız".into(),
        }
    }

    #[test]
    fn pronoun_examples() {
        assert_eq!(
            classify_pronoun("She is an intensive care unit nurse"),
            PronounClass::Female
        );
        assert_eq!(
            classify_pronoun("He is a very bad intensive care unit nurse"),
            PronounClass::Male
        );
        assert_eq!(classify_pronoun(""), PronounClass::None);
        assert_eq!(classify_pronoun("The nurse arrived."), PronounClass::None);
        assert_eq!(classify_pronoun("It is a nurse."), PronounClass::None);
        assert_eq!(classify_pronoun("They are kind"), PronounClass::NeutralThey);
        assert_eq!(
            classify_pronoun("She's a doctor, he said"),
            PronounClass::Female
        );
        assert_eq!(classify_pronoun("Shepherd is here"), PronounClass::None);
    }

    #[test]
    fn marking_examples() {
        let s = kardes();
        assert_eq!(
            detect_gender_marking("Kız kardeşim bir futbolcu.", &s, Gender::Female),
            MarkingClass::MarkedMatching
        );
        assert_eq!(
            detect_gender_marking("Kardeşim bir futbolcu.", &s, Gender::Male),
            MarkingClass::Neutral
        );
        assert_eq!(
            detect_gender_marking("Erkek kardeşim sekreter.", &s, Gender::Female),
            MarkingClass::MarkedOpposite
        );
        assert_eq!(
            detect_gender_marking("Bir futbolcu geldi.", &s, Gender::Male),
            MarkingClass::SubjectNotFound
        );
    }

    #[test]
    fn marking_detail_tokens() {
        let m = detect_gender_marking_detail("KIZ KARDEŞİM hemşire", &kardes(), Gender::Female);
        assert_eq!(m.class, MarkingClass::MarkedMatching);
        assert_eq!(m.matched_token.as_deref(), Some("kardeşim"));
        assert_eq!(m.marker_token.as_deref(), Some("kız"));
    }

    #[test]
    fn marker_outside_window_is_ignored() {
        let text = "Kız arkadaşımın bir kardeşi var";
        // "kız" is three tokens before the subject noun
        assert_eq!(
            detect_gender_marking(text, &kardes(), Gender::Female),
            MarkingClass::Neutral
        );
        assert_eq!(
            detect_gender_marking("Benim kadın kardeşim", &kardes(), Gender::Male),
            MarkingClass::MarkedOpposite
        );
    }

    #[test]
    fn softened_stem_is_found() {
        let cocuk = SubjectWord {
            lemma_tr: "çocuk".into(),
            surface_en_male: "son".into(),
            surface_en_female: "daughter".into(),
            marker_male: "erkek".into(),
            marker_female: "kız".into(),
        };
        assert_eq!(
            detect_gender_marking("Kız çocuğum bir hemşire.", &cocuk, Gender::Female),
            MarkingClass::MarkedMatching
        );
        assert_eq!(
            detect_gender_marking("Çocuklarım çok güçlü.", &cocuk, Gender::Male),
            MarkingClass::Neutral
        );
    }

    #[test]
    fn fold_examples() {
        assert_eq!(fold_turkish("KIZ"), "kız");
        assert_eq!(fold_turkish("İyi"), "iyi");
        assert_eq!(fold_turkish("abc"), "abc");
        assert_eq!(fold_turkish("ÇOCUĞU"), "çocuğu");
    }

    #[test]
    fn detection_json_shape() {
        let d = Detection {
            probe_id: "p".into(),
            backend: "b".into(),
            signal: Signal::Pronoun(PronounClass::Female),
            matched_token: Some("She".into()),
            marker_token: None,
        };
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(
            json,
            r#"{"probe_id":"p","backend":"b","class":"female","matched_token":"She","marker_token":null}"#
        );
        let back: Detection = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
    }

    proptest! {
        #[test]
        fn fold_is_idempotent(s in "\\PC{0,40}") {
            let once = fold_turkish(&s);
            prop_assert_eq!(fold_turkish(&once), once);
        }

        #[test]
        fn pronoun_ignores_case_and_padding(
            words in proptest::collection::vec("[a-zA-Z]{1,8}", 0..8),
            pad in "[ \\t]{0,3}",
            punct in "[.!?]{0,2}",
        ) {
            let text = words.join(" ");
            let base = classify_pronoun(&text);
            prop_assert_eq!(classify_pronoun(&text.to_uppercase()), base);
            prop_assert_eq!(classify_pronoun(&text.to_lowercase()), base);
            let padded = format!("{pad}{text}{punct}{pad}");
            prop_assert_eq!(classify_pronoun(&padded), base);
        }

        #[test]
        fn marker_swap_flips_matching(
            before in proptest::collection::vec("[a-zçğıöşü]{2,6}", 0..3),
            after in proptest::collection::vec("[a-zçğıöşü]{2,6}", 0..3),
            gender_female in any::<bool>(),
        ) {
            let s = kardes();
            let gender = if gender_female { Gender::Female } else { Gender::Male };
            let filler = |ws: &[String]| ws.iter()
                .filter(|w| !w.starts_with("kardeş") && GLOBAL_MARKERS.iter().all(|(m, _)| m != w))
                .cloned().collect::<Vec<_>>().join(" ");
            let with = |marker: &str| format!("{} {} kardeşim {}", filler(&before), marker, filler(&after));
            let female = detect_gender_marking(&with("kız"), &s, gender);
            let male = detect_gender_marking(&with("erkek"), &s, gender);
            let flipped = match female {
                MarkingClass::MarkedMatching => MarkingClass::MarkedOpposite,
                MarkingClass::MarkedOpposite => MarkingClass::MarkedMatching,
                other => other,
            };
            prop_assert_eq!(male, flipped);
            prop_assert!(matches!(female, MarkingClass::MarkedMatching | MarkingClass::MarkedOpposite));
        }
    }
}
