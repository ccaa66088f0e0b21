//! Deterministic stereotype-emulating backend for offline runs.
//!
//! Every random decision is drawn from a ChaCha8 stream seeded with
//! sha256(seed, backend id, probe id), so an outcome depends only on the
//! policy and the probe, never on batch order or thread count.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{
    Adjective, Coding, Gender, Occupation, OccupationCorpus, Predicate, PredicateCategory,
    Stereotype, SubjectWord,
};
use crate::probegen::morphology::{capitalize_turkish, plural, possessive_1sg};
use crate::probegen::{
    asymmetry_sentence, slot, AsymmetryScheme, Experiment, Probe, QualityAdjective,
};
use crate::translate::{Backend, Failure, FailureKind, Origin};

/// Which workforce share drives occupation pronoun choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShareSource {
    Tr,
    #[default]
    Us,
    Mean,
}

/// Occupations whose female share exceeds `above_pct` get a female
/// pronoun with probability `p_female`. The highest matching band wins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShareBand {
    pub above_pct: f64,
    pub p_female: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FlipRates {
    pub she_to_he: f64,
    pub he_to_she: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QualityRule {
    pub quality: QualityAdjective,
    #[serde(flatten)]
    pub rates: FlipRates,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodingRates {
    pub masculine: f64,
    pub feminine: f64,
    pub neutral: f64,
}

impl CodingRates {
    fn get(&self, coding: Coding) -> f64 {
        match coding {
            Coding::Masculine => self.masculine,
            Coding::Feminine => self.feminine,
            Coding::Neutral => self.neutral,
        }
    }
}

/// Marking outcome for one (subject gender, predicate stereotype) cell.
/// The remainder after `p_neutral + p_opposite` is a matching marker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkingRule {
    pub subject_gender: Gender,
    pub stereotype: Stereotype,
    pub p_neutral: f64,
    #[serde(default)]
    pub p_opposite: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MockPolicy {
    pub seed: u64,
    pub share_source: ShareSource,
    pub occupation_bands: Vec<ShareBand>,
    pub quality_flips: Vec<QualityRule>,
    pub adjective_p_female: CodingRates,
    pub personhood: FlipRates,
    pub marking: Vec<MarkingRule>,
    /// Subject lemmas that are never given a marker.
    pub never_marked: BTreeSet<String>,
    /// Chance that a TR→EN base sentence comes back with "They".
    pub p_they: f64,
}

impl Default for MockPolicy {
    fn default() -> Self {
        let band = |above_pct, p_female| ShareBand {
            above_pct,
            p_female,
        };
        let q = |quality, she_to_he, he_to_she| QualityRule {
            quality,
            rates: FlipRates {
                she_to_he,
                he_to_she,
            },
        };
        let m = |subject_gender, stereotype, p_neutral| MarkingRule {
            subject_gender,
            stereotype,
            p_neutral,
            p_opposite: 0.0,
        };
        MockPolicy {
            seed: 0,
            share_source: ShareSource::Us,
            occupation_bands: vec![
                band(90.0, 0.95),
                band(75.0, 0.6),
                band(60.0, 0.25),
                band(40.0, 0.05),
                band(-1.0, 0.005),
            ],
            quality_flips: vec![
                q(QualityAdjective::VeryGood, 0.1272, 0.0044),
                q(QualityAdjective::Good, 0.1503, 0.0039),
                q(QualityAdjective::Bad, 0.3353, 0.0005),
                q(QualityAdjective::VeryBad, 0.3815, 0.0010),
            ],
            adjective_p_female: CodingRates {
                masculine: 0.02,
                feminine: 0.45,
                neutral: 0.08,
            },
            personhood: FlipRates {
                she_to_he: 0.7407,
                he_to_she: 0.0276,
            },
            marking: vec![
                m(Gender::Male, Stereotype::Masculine, 0.36),
                m(Gender::Male, Stereotype::Feminine, 0.245),
                m(Gender::Female, Stereotype::Masculine, 0.0),
                m(Gender::Female, Stereotype::Feminine, 0.0),
            ],
            never_marked: BTreeSet::from(["yeğen".to_string()]),
            p_they: 0.0,
        }
    }
}

impl MockPolicy {
    pub fn with_seed(seed: u64) -> Self {
        MockPolicy {
            seed,
            ..MockPolicy::default()
        }
    }

    /// Every probability must lie in [0, 1]; marking cells must not exceed 1.
    pub fn validate(&self) -> Result<(), String> {
        let mut bad = Vec::new();
        let mut check = |name: String, p: f64| {
            if !(0.0..=1.0).contains(&p) {
                bad.push(format!("{name} = {p}"));
            }
        };
        for b in &self.occupation_bands {
            check(format!("band above {}", b.above_pct), b.p_female);
        }
        for q in &self.quality_flips {
            check(format!("{} she_to_he", q.quality.key()), q.rates.she_to_he);
            check(format!("{} he_to_she", q.quality.key()), q.rates.he_to_she);
        }
        check(
            "adjective masculine".into(),
            self.adjective_p_female.masculine,
        );
        check(
            "adjective feminine".into(),
            self.adjective_p_female.feminine,
        );
        check("adjective neutral".into(), self.adjective_p_female.neutral);
        check("personhood she_to_he".into(), self.personhood.she_to_he);
        check("personhood he_to_she".into(), self.personhood.he_to_she);
        check("p_they".into(), self.p_they);
        for r in &self.marking {
            let cell = format!("marking {}/{}", r.subject_gender, r.stereotype.as_str());
            check(format!("{cell} p_neutral"), r.p_neutral);
            check(format!("{cell} p_opposite"), r.p_opposite);
            check(format!("{cell} total"), r.p_neutral + r.p_opposite);
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(format!("probabilities outside [0, 1]: {}", bad.join(", ")))
        }
    }

    fn p_female_for_share(&self, share: f64) -> f64 {
        self.occupation_bands
            .iter()
            .filter(|b| share > b.above_pct)
            .max_by(|a, b| a.above_pct.total_cmp(&b.above_pct))
            .map_or(0.0, |b| b.p_female)
    }

    fn quality_rates(&self, q: QualityAdjective) -> FlipRates {
        self.quality_flips
            .iter()
            .find(|r| r.quality == q)
            .map(|r| r.rates)
            .unwrap_or_default()
    }

    fn marking_rule(&self, gender: Gender, stereotype: Stereotype) -> (f64, f64) {
        self.marking
            .iter()
            .find(|r| r.subject_gender == gender && r.stereotype == stereotype)
            .map_or((1.0, 0.0), |r| (r.p_neutral, r.p_opposite))
    }
}

/// Lexical data the mock needs to render outputs.
#[derive(Debug, Clone, Default)]
pub struct MockContext {
    occupations: HashMap<String, Occupation>,
    adjectives: HashMap<String, Adjective>,
    subjects: BTreeMap<String, SubjectWord>,
    predicates: Vec<Predicate>,
    scheme: AsymmetryScheme,
}

impl MockContext {
    pub fn new(
        corpus: &OccupationCorpus,
        adjectives: &[Adjective],
        subjects: &[SubjectWord],
        predicates: &[Predicate],
        scheme: &AsymmetryScheme,
    ) -> Self {
        MockContext {
            occupations: corpus
                .occupations()
                .iter()
                .map(|o| (o.id.clone(), o.clone()))
                .collect(),
            adjectives: adjectives
                .iter()
                .map(|a| (a.surface_tr.clone(), a.clone()))
                .collect(),
            subjects: subjects
                .iter()
                .map(|s| (s.lemma_tr.clone(), s.clone()))
                .collect(),
            predicates: predicates.to_vec(),
            scheme: scheme.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pronoun {
    He,
    She,
    They,
}

impl Pronoun {
    fn flipped(self) -> Pronoun {
        match self {
            Pronoun::He => Pronoun::She,
            Pronoun::She => Pronoun::He,
            Pronoun::They => Pronoun::They,
        }
    }

    fn copula(self) -> &'static str {
        match self {
            Pronoun::He => "He is",
            Pronoun::She => "She is",
            Pronoun::They => "They are",
        }
    }
}

fn stream(seed: u64, backend: &str, key: &str) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(backend.as_bytes());
    h.update([0]);
    h.update(key.as_bytes());
    ChaCha8Rng::from_seed(h.finalize().into())
}

fn with_article(phrase: &str) -> String {
    let article = match phrase.chars().next() {
        Some(c) if "aeiouAEIOU".contains(c) => "an",
        _ => "a",
    };
    format!("{article} {phrase}")
}

fn schema(probe: &Probe, what: impl std::fmt::Display) -> Failure {
    Failure::new(FailureKind::Schema, format!("probe {}: {what}", probe.id))
}

fn need<'a>(probe: &'a Probe, key: &'static str) -> Result<&'a str, Failure> {
    probe
        .slot(key)
        .ok_or_else(|| schema(probe, format!("missing slot {key}")))
}

#[derive(Debug, Clone)]
pub struct MockBackend {
    id: String,
    policy: MockPolicy,
    ctx: std::sync::Arc<MockContext>,
}

impl MockBackend {
    pub fn new(
        id: impl Into<String>,
        policy: MockPolicy,
        ctx: std::sync::Arc<MockContext>,
    ) -> Result<Self, String> {
        policy.validate()?;
        Ok(MockBackend {
            id: id.into(),
            policy,
            ctx,
        })
    }

    pub fn policy(&self) -> &MockPolicy {
        &self.policy
    }

    fn rng(&self, key: &str) -> ChaCha8Rng {
        stream(self.policy.seed, &self.id, key)
    }

    fn base_pronoun(&self, key: &str, p_female: f64) -> Pronoun {
        let mut rng = self.rng(key);
        let female = rng.random::<f64>() < p_female;
        let they = rng.random::<f64>() < self.policy.p_they;
        match (they, female) {
            (true, _) => Pronoun::They,
            (false, true) => Pronoun::She,
            (false, false) => Pronoun::He,
        }
    }

    fn maybe_flip(&self, key: &str, base: Pronoun, rates: FlipRates) -> Pronoun {
        let p = match base {
            Pronoun::She => rates.she_to_he,
            Pronoun::He => rates.he_to_she,
            Pronoun::They => 0.0,
        };
        if self.rng(key).random::<f64>() < p {
            base.flipped()
        } else {
            base
        }
    }

    fn occupation(&self, probe: &Probe) -> Result<&Occupation, Failure> {
        let id = need(probe, slot::OCCUPATION_ID)?;
        self.ctx
            .occupations
            .get(id)
            .ok_or_else(|| schema(probe, format!("unknown occupation {id:?}")))
    }

    fn occupation_pronoun(&self, occ: &Occupation) -> Pronoun {
        let share = match self.policy.share_source {
            ShareSource::Tr => occ.female_pct_tr,
            ShareSource::Us => occ.female_pct_us,
            ShareSource::Mean => (occ.female_pct_tr + occ.female_pct_us) / 2.0,
        };
        self.base_pronoun(
            &format!("occ:{}:base", occ.id),
            self.policy.p_female_for_share(share),
        )
    }

    fn adjective(&self, probe: &Probe) -> Result<&Adjective, Failure> {
        let surface = need(probe, slot::ADJECTIVE)?;
        self.ctx
            .adjectives
            .get(surface)
            .ok_or_else(|| schema(probe, format!("unknown adjective {surface:?}")))
    }

    fn adjective_pronoun(&self, adj: &Adjective) -> Pronoun {
        self.base_pronoun(
            &format!("adj:{}:base", adj.surface_tr),
            self.policy.adjective_p_female.get(adj.coding()),
        )
    }

    fn asymmetry(&self, probe: &Probe) -> Result<String, Failure> {
        let lemma = need(probe, slot::SUBJECT_LEMMA)?;
        let subject = self
            .ctx
            .subjects
            .get(lemma)
            .ok_or_else(|| schema(probe, format!("unknown subject {lemma:?}")))?;
        let gender: Gender = need(probe, slot::SUBJECT_GENDER)?
            .parse()
            .map_err(|e| schema(probe, e))?;
        let category: PredicateCategory = need(probe, slot::PREDICATE_CATEGORY)?
            .parse()
            .map_err(|e| schema(probe, e))?;
        let stereotype: Stereotype = need(probe, slot::PREDICATE_STEREOTYPE)?
            .parse()
            .map_err(|e| schema(probe, e))?;
        let rendered = need(probe, slot::PREDICATE)?;
        let is_plural = self.ctx.scheme.plural_subjects.contains(lemma);
        let predicate = self
            .ctx
            .predicates
            .iter()
            .filter(|p| p.category == category && p.stereotype == stereotype)
            .find(|p| asymmetry_sentence(subject.surface_en(gender), p, is_plural).1 == rendered)
            .ok_or_else(|| schema(probe, format!("unknown predicate {rendered:?}")))?;

        let marker = if self.policy.never_marked.contains(lemma) {
            None
        } else {
            let (p_neutral, p_opposite) = self.policy.marking_rule(gender, stereotype);
            let u = self.rng(&probe.id).random::<f64>();
            if u < p_neutral {
                None
            } else if u < p_neutral + p_opposite {
                Some(subject.marker(gender.opposite()))
            } else {
                Some(subject.marker(gender))
            }
        };

        let morph = |e: crate::probegen::MorphError| schema(probe, e);
        let noun = if is_plural {
            possessive_1sg(&plural(lemma).map_err(morph)?).map_err(morph)?
        } else {
            possessive_1sg(lemma).map_err(morph)?
        };
        let pred_tr = predicate.surface_tr.clone().unwrap_or_else(|| {
            let en = predicate.surface_en.as_str();
            en.strip_prefix("a ")
                .or_else(|| en.strip_prefix("an "))
                .unwrap_or(en)
                .to_string()
        });
        let article = if category == PredicateCategory::Occupation && !is_plural {
            "bir "
        } else {
            ""
        };
        let subject_np = match marker {
            Some(m) => format!("{m} {noun}"),
            None => noun,
        };
        Ok(format!(
            "{} {article}{pred_tr}.",
            capitalize_turkish(&subject_np)
        ))
    }
}

/// Renders the mock translation of `probe`.
pub fn mock_translate(backend: &MockBackend, probe: &Probe) -> Result<String, Failure> {
    match probe.experiment {
        Experiment::OccupationBase => {
            let occ = backend.occupation(probe)?;
            let p = backend.occupation_pronoun(occ);
            Ok(format!(
                "{} {}",
                p.copula(),
                with_article(&occ.title_en.to_lowercase())
            ))
        }
        Experiment::OccupationAdjective => {
            let occ = backend.occupation(probe)?;
            let q_surface = need(probe, slot::QUALITY)?;
            let q = QualityAdjective::from_surface(q_surface)
                .ok_or_else(|| schema(probe, format!("unknown quality {q_surface:?}")))?;
            let base = backend.occupation_pronoun(occ);
            let p = backend.maybe_flip(&probe.id, base, backend.policy.quality_rates(q));
            Ok(format!(
                "{} {}",
                p.copula(),
                with_article(&format!("{} {}", q.gloss(), occ.title_en.to_lowercase()))
            ))
        }
        Experiment::AdjectiveBase => {
            let adj = backend.adjective(probe)?;
            Ok(format!(
                "{} {}",
                backend.adjective_pronoun(adj).copula(),
                adj.gloss_en
            ))
        }
        Experiment::AdjectivePersonhood => {
            let adj = backend.adjective(probe)?;
            let base = backend.adjective_pronoun(adj);
            let p = backend.maybe_flip(&probe.id, base, backend.policy.personhood);
            let noun = if p == Pronoun::They {
                "people"
            } else {
                "person"
            };
            let phrase = format!("{} {noun}", adj.gloss_en);
            let phrase = if p == Pronoun::They {
                phrase
            } else {
                with_article(&phrase)
            };
            Ok(format!("{} {phrase}", p.copula()))
        }
        Experiment::Asymmetry => backend.asymmetry(probe),
    }
}

impl Backend for MockBackend {
    fn id(&self) -> &str {
        &self.id
    }

    fn origin(&self) -> Origin {
        Origin::Mock
    }

    fn translate(&self, probe: &Probe) -> Result<String, Failure> {
        mock_translate(self, probe)
    }
}
