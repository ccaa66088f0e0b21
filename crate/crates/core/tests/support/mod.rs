//! Fixtures and oracles shared by the integration and acceptance suites.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use mtbias_core::analysis::{aggregate, analyze, AnalysisInputs, AnalysisOptions, AnalysisReport};
use mtbias_core::corpus::{
    Adjective, Gender, IscoMajor, Occupation, OccupationCorpus, Predicate, SocMajor, SubjectWord,
};
use mtbias_core::detect::{detect_records, Detection};
use mtbias_core::probegen::morphology::{capitalize_turkish, possessive_1sg};
use mtbias_core::probegen::{
    gen_adjective_probes, gen_asymmetry_probes, gen_occupation_probes, slot, AsymmetryScheme,
    Experiment, Probe, QualityAdjective,
};
use mtbias_core::sample;
use mtbias_core::stats::DenominatorPolicy;
use mtbias_core::stats::{
    asymmetry_shares, coding_crosstab, personhood_shift, transition_table, AsymmetryShares,
    BinarySample, CodingCrosstab, PersonhoodShift, ProbeIndex, TransitionTable,
};
use mtbias_core::translate::mock::{MockBackend, MockContext, MockPolicy};
use mtbias_core::translate::{run_batch, BatchOptions, Origin, TranslationRecord};

pub const PRONOUNS_TSV: &str = include_str!("../fixtures/pronouns.tsv");
pub const MARKING_TSV: &str = include_str!("../fixtures/marking.tsv");
pub const COPULA_TSV: &str = include_str!("../fixtures/copula.tsv");
pub const FOLD_TSV: &str = include_str!("../fixtures/fold.tsv");

/// Rows of a tab-separated fixture, skipping `#` comments. Fields are not trimmed.
pub fn tsv(text: &str) -> Vec<Vec<&str>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split('\t').collect())
        .collect()
}

// ---------------------------------------------------------------------------
// Student t CDF by quadrature.

/// One Simpson panel: endpoints, sampled values and its estimate.
#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
}

impl Panel {
    fn estimate(&self) -> f64 {
        (self.b - self.a) / 6.0 * (self.fa + 4.0 * self.fm + self.fb)
    }
}

fn adaptive(f: &dyn Fn(f64) -> f64, p: Panel, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (p.a + p.b);
    let left = Panel {
        a: p.a,
        b: m,
        fa: p.fa,
        fm: f(0.5 * (p.a + m)),
        fb: p.fm,
    };
    let right = Panel {
        a: m,
        b: p.b,
        fa: p.fm,
        fm: f(0.5 * (m + p.b)),
        fb: p.fb,
    };
    let (l, r) = (left.estimate(), right.estimate());
    let delta = l + r - p.estimate();
    if depth == 0 || delta.abs() <= 15.0 * tol || delta.abs() <= 1e-15 * (l + r).abs() {
        l + r + delta / 15.0
    } else {
        adaptive(f, left, tol / 2.0, depth - 1) + adaptive(f, right, tol / 2.0, depth - 1)
    }
}

/// Adaptive Simpson quadrature of `f` over [a, b].
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    // Start from a fixed split so narrow peaks are not missed.
    let pieces = 64;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let (x0, x1) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let panel = Panel {
                a: x0,
                b: x1,
                fa: f(x0),
                fm: f(0.5 * (x0 + x1)),
                fb: f(x1),
            };
            adaptive(f, panel, tol / pieces as f64, 30)
        })
        .sum()
}

/// P(T <= t) for `df` degrees of freedom, from the angle substitution
/// t = sqrt(df) tan(theta), under which the density is proportional to
/// cos^(df-1)(theta) on (-pi/2, pi/2).
pub fn t_cdf_by_quadrature(t: f64, df: u64) -> f64 {
    let k = (df - 1) as i32;
    let f = move |theta: f64| theta.cos().max(0.0).powi(k);
    let tol = 1e-12;
    let total = integrate(&f, -FRAC_PI_2, FRAC_PI_2, tol);
    let theta = (t / (df as f64).sqrt()).atan();
    if t <= 0.0 {
        integrate(&f, -FRAC_PI_2, theta, tol) / total
    } else {
        1.0 - integrate(&f, theta, FRAC_PI_2, tol) / total
    }
}

// ---------------------------------------------------------------------------
// Synthetic corpora of a given size.

pub fn synthetic_corpus(n: usize) -> OccupationCorpus {
    let occs = (0..n)
        .map(|i| Occupation {
            id: format!("occ{i:04}"),
            title_en: format!("worker {i}"),
            title_tr: format!("çalışan {i}"),
            isco_major: IscoMajor::ALL[i % IscoMajor::ALL.len()],
            soc_major: SocMajor::ALL[i % SocMajor::ALL.len()],
            female_pct_tr: (i % 100) as f64,
            female_pct_us: ((i * 7) % 100) as f64,
        })
        .collect();
    OccupationCorpus::new(occs).expect("distinct ids")
}

const SYLLABLES: [&str; 10] = ["ba", "ce", "di", "fo", "gu", "ha", "ke", "lö", "mü", "nı"];

/// `n` adjectives (n <= 100): the first third masculine-coded, the second
/// third feminine-coded, the rest neutral.
pub fn synthetic_lexicon(n: usize) -> Vec<Adjective> {
    assert!(n <= 100);
    (0..n)
        .map(|i| {
            let surface = format!("{}{}", SYLLABLES[i / 10], SYLLABLES[i % 10]);
            let (m, f) = match i * 3 / n {
                0 => (80.0, 10.0),
                1 => (10.0, 80.0),
                _ => (45.0, 45.0),
            };
            Adjective::new(surface, format!("adjective {i}"), m, f).expect("valid adjective")
        })
        .collect()
}

pub fn sample_asymmetry_lexicon() -> (Vec<SubjectWord>, Vec<Predicate>) {
    static LEXICON: OnceLock<(Vec<SubjectWord>, Vec<Predicate>)> = OnceLock::new();
    LEXICON
        .get_or_init(|| {
            let s = sample::load().expect("bundled sample loads");
            (s.subjects, s.predicates)
        })
        .clone()
}

// ---------------------------------------------------------------------------
// Planted translation sets.

pub const BACKENDS: [&str; 4] = ["alpha", "beta", "gamma", "delta"];

fn record(probe: &Probe, backend: &str, target: String) -> TranslationRecord {
    TranslationRecord {
        probe_id: probe.id.clone(),
        backend_id: backend.to_string(),
        direction: probe.direction,
        source_text: probe.source_text.clone(),
        target_text: Some(target),
        retrieved_at: None,
        origin: Origin::Mock,
        error: None,
    }
}

fn english(g: Option<Gender>, rest: &str) -> String {
    match g {
        Some(Gender::Male) => format!("He is {rest}"),
        Some(Gender::Female) => format!("She is {rest}"),
        None => format!("It is {rest}"),
    }
}

pub struct Planted {
    pub probes: Vec<Probe>,
    pub records: Vec<TranslationRecord>,
    pub subjects: Vec<SubjectWord>,
}

impl Planted {
    pub fn detections(&self) -> Vec<Detection> {
        detect_records(&self.records, &self.probes, &self.subjects, 4).expect("detections")
    }
}

/// Base pronoun for the k-th (occupation, backend) pair, and whether a
/// given quality flips it, so that flip counts land on fixed numerators.
pub struct FlipPlan {
    pub base_female: usize,
    pub base_male: usize,
    /// Per quality (very good, good, bad, very bad): flips among female
    /// bases, flips among male bases.
    pub flips: [(usize, usize); 4],
}

/// Occupation flip fixture: 1,617 occupations x 4 backends, with
/// she-to-he rates .1272/.1503/.3353/.3815 and he-to-she rates
/// .0044/.0039/.0005/.0010.
pub fn table1_plan() -> FlipPlan {
    let base_male = 5848;
    let m = |p: f64| (p * base_male as f64).round() as usize;
    FlipPlan {
        base_female: 173,
        base_male,
        flips: [
            (22, m(0.0044)),
            (26, m(0.0039)),
            (58, m(0.0005)),
            (66, m(0.0010)),
        ],
    }
}

pub fn planted_occupations(n_occupations: usize, plan: &FlipPlan) -> Planted {
    let corpus = synthetic_corpus(n_occupations);
    let probes = gen_occupation_probes(&corpus);
    let mut records = Vec::new();
    let mut k = 0usize;
    // One base probe followed by one probe per quality, per occupation.
    for of_occ in probes.chunks(1 + QualityAdjective::ALL.len()) {
        for b in BACKENDS {
            let (base, rank) = if k < plan.base_female {
                (Some(Gender::Female), k)
            } else if k < plan.base_female + plan.base_male {
                (Some(Gender::Male), k - plan.base_female)
            } else {
                (None, 0)
            };
            k += 1;
            for p in of_occ {
                let g = match p.experiment {
                    Experiment::OccupationBase => base,
                    _ => {
                        let q =
                            QualityAdjective::from_surface(p.slot(slot::QUALITY).unwrap()).unwrap();
                        let qi = QualityAdjective::ALL.iter().position(|x| *x == q).unwrap();
                        let (ff, mf) = plan.flips[qi];
                        match base {
                            Some(Gender::Female) if rank < ff => Some(Gender::Male),
                            Some(Gender::Male) if rank < mf => Some(Gender::Female),
                            other => other,
                        }
                    }
                };
                let title = p.slot(slot::OCCUPATION_TR).unwrap();
                records.push(record(p, b, english(g, &format!("a {title}"))));
            }
        }
    }
    Planted {
        probes,
        records,
        subjects: Vec::new(),
    }
}

/// Personhood shift: 97 adjectives x 4 backends; 27 she bases of which 20
/// become he, 361 he bases of which 10 become she.
pub fn planted_personhood() -> Planted {
    let lexicon = synthetic_lexicon(97);
    let probes = gen_adjective_probes(&lexicon).unwrap();
    let mut records = Vec::new();
    let mut k = 0usize;
    for adj in &lexicon {
        for b in BACKENDS {
            let (base, flipped) = if k < 27 {
                (Gender::Female, k < 20)
            } else {
                (Gender::Male, k - 27 < 10)
            };
            k += 1;
            let after = if flipped { base.opposite() } else { base };
            for p in probes
                .iter()
                .filter(|p| p.slot(slot::ADJECTIVE) == Some(&adj.surface_tr))
            {
                let g = match p.experiment {
                    Experiment::AdjectiveBase => base,
                    _ => after,
                };
                records.push(record(p, b, english(Some(g), &adj.gloss_en)));
            }
        }
    }
    Planted {
        probes,
        records,
        subjects: Vec::new(),
    }
}

/// Coding crosstab: 6 she outputs (5 feminine-coded) and 15 he outputs
/// (7 masculine-coded), from a 21-adjective lexicon and one backend.
pub fn planted_crosstab() -> (Planted, Vec<Adjective>) {
    let lexicon = synthetic_lexicon(21);
    let probes: Vec<Probe> = gen_adjective_probes(&lexicon)
        .unwrap()
        .into_iter()
        .filter(|p| p.experiment == Experiment::AdjectiveBase)
        .collect();
    // Lexicon thirds: 0..7 masculine, 7..14 feminine, 14..21 neutral.
    let she: Vec<usize> = vec![7, 8, 9, 10, 11, 14];
    let records = probes
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let g = if she.contains(&i) {
                Gender::Female
            } else {
                Gender::Male
            };
            record(p, "alpha", english(Some(g), "fine"))
        })
        .collect();
    (
        Planted {
            probes,
            records,
            subjects: Vec::new(),
        },
        lexicon,
    )
}

fn turkish(subject: &SubjectWord, marker: Option<&str>, found: bool) -> String {
    if !found {
        return "Bir futbolcu geldi.".to_string();
    }
    let head = capitalize_turkish(&possessive_1sg(&subject.lemma_tr).unwrap());
    match marker {
        Some(m) => format!(
            "{} {} bir futbolcu.",
            capitalize_turkish(m),
            head.to_lowercase()
        ),
        None => format!("{head} bir futbolcu."),
    }
}

/// Planted neutral-case outcomes per (subject gender, predicate stereotype)
/// cell, each counted across all subjects, predicates and backends.
pub struct MarkingPlan {
    /// (subject gender, stereotype) -> (neutral, marked, not located)
    pub cells: Vec<(Gender, &'static str, usize, usize, usize)>,
}

/// Male subjects: 112 of 215 located left neutral with masculine predicates,
/// 125 of 221 marked with feminine ones (47.7% neutral overall); female
/// subjects: 120 of 480 neutral (25.0%).
pub fn asymmetry_plan() -> MarkingPlan {
    MarkingPlan {
        cells: vec![
            (Gender::Male, "masculine", 112, 103, 25),
            (Gender::Male, "feminine", 96, 125, 19),
            (Gender::Female, "masculine", 60, 180, 0),
            (Gender::Female, "feminine", 60, 180, 0),
        ],
    }
}

pub fn planted_asymmetry(plan: &MarkingPlan) -> Planted {
    let (subjects, predicates) = sample_asymmetry_lexicon();
    let probes = gen_asymmetry_probes(&subjects, &predicates, &AsymmetryScheme::default()).unwrap();
    let mut records = Vec::new();
    for &(gender, stereotype, neutral, marked, missing) in &plan.cells {
        let cell: Vec<&Probe> = probes
            .iter()
            .filter(|p| {
                p.slot(slot::SUBJECT_GENDER) == Some(gender.as_str())
                    && p.slot(slot::PREDICATE_STEREOTYPE) == Some(stereotype)
            })
            .collect();
        assert_eq!(cell.len() * BACKENDS.len(), neutral + marked + missing);
        let mut k = 0;
        for b in BACKENDS {
            for p in &cell {
                let subject = subjects
                    .iter()
                    .find(|s| Some(s.lemma_tr.as_str()) == p.slot(slot::SUBJECT_LEMMA))
                    .unwrap();
                let text = if k < neutral {
                    turkish(subject, None, true)
                } else if k < neutral + marked {
                    turkish(subject, Some(subject.marker(gender)), true)
                } else {
                    turkish(subject, None, false)
                };
                k += 1;
                records.push(record(p, b, text));
            }
        }
    }
    Planted {
        probes,
        records,
        subjects,
    }
}

// ---------------------------------------------------------------------------
// Planted sets pushed through detection and aggregation.

fn split(planted: &Planted, a: Experiment, b: Experiment) -> (Vec<Detection>, Vec<Detection>) {
    let idx = ProbeIndex::new(&planted.probes);
    let (mut xa, mut xb) = (Vec::new(), Vec::new());
    for d in planted.detections() {
        match idx.get(&d.probe_id).unwrap().experiment {
            e if e == a => xa.push(d),
            e if e == b => xb.push(d),
            _ => {}
        }
    }
    (xa, xb)
}

pub fn observed_transitions() -> TransitionTable {
    let planted = planted_occupations(1617, &table1_plan());
    let (base, qual) = split(
        &planted,
        Experiment::OccupationBase,
        Experiment::OccupationAdjective,
    );
    transition_table(&base, &qual, &ProbeIndex::new(&planted.probes)).unwrap()
}

pub fn observed_personhood() -> PersonhoodShift {
    let planted = planted_personhood();
    let (base, person) = split(
        &planted,
        Experiment::AdjectiveBase,
        Experiment::AdjectivePersonhood,
    );
    personhood_shift(&base, &person, &ProbeIndex::new(&planted.probes)).unwrap()
}

pub fn observed_asymmetry() -> AsymmetryShares {
    let planted = planted_asymmetry(&asymmetry_plan());
    let dets = planted.detections();
    asymmetry_shares(&dets, &ProbeIndex::new(&planted.probes)).unwrap()
}

pub fn observed_crosstab() -> CodingCrosstab {
    let (planted, lexicon) = planted_crosstab();
    let dets = planted.detections();
    coding_crosstab(&dets, &ProbeIndex::new(&planted.probes), &lexicon).unwrap()
}

/// Indicator sample with `ones` ones among `n`, ones first.
pub fn indicator(label: &str, ones: usize, n: usize) -> BinarySample {
    let values = (0..n).map(|i| u8::from(i < ones)).collect();
    BinarySample::new(label, values).unwrap()
}

// ---------------------------------------------------------------------------
// Full runs over the bundled sample.

pub struct SampleRun {
    pub inputs: sample::SampleInputs,
    pub probes: Vec<Probe>,
    pub records: Vec<TranslationRecord>,
}

pub fn sample_probes(inputs: &sample::SampleInputs) -> Vec<Probe> {
    let mut probes = gen_occupation_probes(&inputs.corpus);
    probes.extend(gen_adjective_probes(&inputs.lexicon).unwrap());
    probes.extend(
        gen_asymmetry_probes(
            &inputs.subjects,
            &inputs.predicates,
            &AsymmetryScheme::default(),
        )
        .unwrap(),
    );
    probes
}

pub fn mock_backends(inputs: &sample::SampleInputs, ids: &[&str], seed: u64) -> Vec<MockBackend> {
    let ctx = std::sync::Arc::new(MockContext::new(
        &inputs.corpus,
        &inputs.lexicon,
        &inputs.subjects,
        &inputs.predicates,
        &AsymmetryScheme::default(),
    ));
    ids.iter()
        .map(|id| MockBackend::new(*id, MockPolicy::with_seed(seed), ctx.clone()).unwrap())
        .collect()
}

pub fn mock_run(ids: &[&str], seed: u64, parallelism: usize) -> SampleRun {
    let inputs = sample::load().unwrap();
    let probes = sample_probes(&inputs);
    let opts = BatchOptions {
        parallelism,
        cache_only: false,
    };
    let records = mock_backends(&inputs, ids, seed)
        .iter()
        .flat_map(|b| run_batch(&probes, b, None, opts))
        .collect();
    SampleRun {
        inputs,
        probes,
        records,
    }
}

impl SampleRun {
    pub fn report(&self) -> AnalysisReport {
        let inputs = AnalysisInputs {
            corpus: &self.inputs.corpus,
            lexicon: &self.inputs.lexicon,
            subjects: &self.inputs.subjects,
            workforce: &self.inputs.workforce,
            probes: &self.probes,
            records: &self.records,
            input_hashes: Default::default(),
            seed: Some(7),
        };
        analyze(&inputs, AnalysisOptions::default()).unwrap().0
    }
}

/// Report whose only section is the planted asymmetry set.
pub fn planted_asymmetry_report() -> AnalysisReport {
    let planted = planted_asymmetry(&asymmetry_plan());
    let inputs = sample::load().unwrap();
    let a = AnalysisInputs {
        corpus: &inputs.corpus,
        lexicon: &inputs.lexicon,
        subjects: &planted.subjects,
        workforce: &inputs.workforce,
        probes: &planted.probes,
        records: &planted.records,
        input_hashes: Default::default(),
        seed: None,
    };
    aggregate(&a, &planted.detections(), DenominatorPolicy::GenderedOnly).unwrap()
}
