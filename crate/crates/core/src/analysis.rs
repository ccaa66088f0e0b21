//! Assembles every aggregate and significance test into one report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{
    Adjective, Coding, Country, Gender, OccupationCorpus, Stereotype, SubjectWord, Taxonomy,
    WorkforceTable,
};
use crate::detect::{detect_records, DetectError, Detection};
use crate::probegen::{Experiment, Probe, QualityAdjective};
use crate::stats::{
    asymmetry_shares, coding_crosstab, female_share, group_shares, personhood_shift,
    t_test_one_sided, transition_table, Alternative, AsymmetryShares, BinarySample, CodingCrosstab,
    DenominatorPolicy, GroupShareRow, PersonhoodShift, ProbeIndex, Share, StatsError, TTestResult,
    TransitionTable,
};
use crate::translate::TranslationRecord;

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub tool_version: String,
    pub backends: Vec<String>,
    pub seed: Option<u64>,
    pub denominator: DenominatorPolicy,
    /// Input name → sha256 of its bytes.
    pub input_hashes: BTreeMap<String, String>,
    pub probes: u64,
    pub records: u64,
    pub failed_records: u64,
    pub failures_by_kind: BTreeMap<String, u64>,
}

/// Female share under both denominator choices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharePair {
    pub gendered: Share,
    pub all: Share,
}

fn share_pair<'a>(
    dets: impl IntoIterator<Item = &'a Detection> + Clone,
) -> Result<SharePair, StatsError> {
    Ok(SharePair {
        gendered: female_share(dets.clone(), DenominatorPolicy::GenderedOnly)?,
        all: female_share(dets, DenominatorPolicy::AllProbes)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupationSection {
    pub female_share: BTreeMap<String, SharePair>,
    pub female_share_pooled: SharePair,
    pub national_female_pct: BTreeMap<Country, f64>,
    pub groups_isco: Vec<GroupShareRow>,
    pub groups_soc: Vec<GroupShareRow>,
    pub transitions: Option<TransitionTable>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjectiveSection {
    pub female_share: BTreeMap<String, SharePair>,
    pub female_share_pooled: SharePair,
    pub crosstab: CodingCrosstab,
    pub personhood: Option<PersonhoodShift>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleDescriptor {
    pub label: String,
    pub n: u64,
    pub ones: u64,
}

/// One significance test and exactly how its two samples were built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub claim: String,
    pub construction: String,
    pub sample_a: SampleDescriptor,
    pub sample_b: SampleDescriptor,
    pub direction: Alternative,
    pub result: Option<TTestResult>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub meta: RunMeta,
    pub occupation: Option<OccupationSection>,
    pub adjective: Option<AdjectiveSection>,
    pub asymmetry: Option<AsymmetryShares>,
    pub tests: Vec<TestOutcome>,
}

impl AnalysisReport {
    pub fn is_empty(&self) -> bool {
        self.occupation.is_none() && self.adjective.is_none() && self.asymmetry.is_none()
    }
}

pub struct AnalysisInputs<'a> {
    pub corpus: &'a OccupationCorpus,
    pub lexicon: &'a [Adjective],
    pub subjects: &'a [SubjectWord],
    pub workforce: &'a WorkforceTable,
    pub probes: &'a [Probe],
    pub records: &'a [TranslationRecord],
    pub input_hashes: BTreeMap<String, String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub denominator: DenominatorPolicy,
    pub parallelism: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            denominator: DenominatorPolicy::GenderedOnly,
            parallelism: 1,
        }
    }
}

/// Runs detection over the records and aggregates the result.
pub fn analyze(
    inputs: &AnalysisInputs<'_>,
    opts: AnalysisOptions,
) -> Result<(AnalysisReport, Vec<Detection>), AnalysisError> {
    let detections = detect_records(
        inputs.records,
        inputs.probes,
        inputs.subjects,
        opts.parallelism,
    )?;
    let report = aggregate(inputs, &detections, opts.denominator)?;
    Ok((report, detections))
}

fn per_backend(dets: &[&Detection]) -> Result<BTreeMap<String, SharePair>, StatsError> {
    let mut by: BTreeMap<String, Vec<&Detection>> = BTreeMap::new();
    for d in dets {
        by.entry(d.backend.clone()).or_default().push(d);
    }
    by.into_iter()
        .map(|(b, v)| Ok((b, share_pair(v.iter().copied())?)))
        .collect()
}

/// Aggregates already-computed detections.
pub fn aggregate(
    inputs: &AnalysisInputs<'_>,
    detections: &[Detection],
    denominator: DenominatorPolicy,
) -> Result<AnalysisReport, AnalysisError> {
    let probes = ProbeIndex::new(inputs.probes);
    let mut by_exp: BTreeMap<Experiment, Vec<&Detection>> = BTreeMap::new();
    for d in detections {
        by_exp
            .entry(probes.get(&d.probe_id)?.experiment)
            .or_default()
            .push(d);
    }
    let get = |e: Experiment| by_exp.get(&e).map(Vec::as_slice).unwrap_or(&[]);

    let mut backends: Vec<String> = inputs
        .records
        .iter()
        .map(|r| r.backend_id.clone())
        .collect();
    backends.sort();
    backends.dedup();
    let mut failures_by_kind = BTreeMap::new();
    for r in inputs.records {
        if let Some(f) = &r.error {
            let kind = serde_json::to_value(f.kind)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default();
            *failures_by_kind.entry(kind).or_insert(0u64) += 1;
        }
    }
    let meta = RunMeta {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        backends,
        seed: inputs.seed,
        denominator,
        input_hashes: inputs.input_hashes.clone(),
        probes: inputs.probes.len() as u64,
        records: inputs.records.len() as u64,
        failed_records: failures_by_kind.values().sum(),
        failures_by_kind,
    };

    let occ_base = get(Experiment::OccupationBase);
    let occ_qual = get(Experiment::OccupationAdjective);
    let occupation = if occ_base.is_empty() {
        None
    } else {
        let groups = |t: Taxonomy| {
            group_shares(
                occ_base.iter().copied(),
                &probes,
                inputs.corpus,
                inputs.workforce,
                t,
                denominator,
            )
        };
        Some(OccupationSection {
            female_share: per_backend(occ_base)?,
            female_share_pooled: share_pair(occ_base.iter().copied())?,
            national_female_pct: inputs.workforce.national.clone(),
            groups_isco: groups(Taxonomy::Isco)?,
            groups_soc: groups(Taxonomy::Soc)?,
            transitions: if occ_qual.is_empty() {
                None
            } else {
                Some(transition_table(
                    occ_base.iter().copied(),
                    occ_qual.iter().copied(),
                    &probes,
                )?)
            },
        })
    };

    let adj_base = get(Experiment::AdjectiveBase);
    let adj_person = get(Experiment::AdjectivePersonhood);
    let adjective = if adj_base.is_empty() {
        None
    } else {
        Some(AdjectiveSection {
            female_share: per_backend(adj_base)?,
            female_share_pooled: share_pair(adj_base.iter().copied())?,
            crosstab: coding_crosstab(adj_base.iter().copied(), &probes, inputs.lexicon)?,
            personhood: if adj_person.is_empty() {
                None
            } else {
                Some(personhood_shift(
                    adj_base.iter().copied(),
                    adj_person.iter().copied(),
                    &probes,
                )?)
            },
        })
    };

    let asym = get(Experiment::Asymmetry);
    let asymmetry = if asym.is_empty() {
        None
    } else {
        Some(asymmetry_shares(asym.iter().copied(), &probes)?)
    };

    let mut report = AnalysisReport {
        meta,
        occupation,
        adjective,
        asymmetry,
        tests: Vec::new(),
    };
    report.tests = significance_tests(&report);
    Ok(report)
}

fn run_test(
    claim: &str,
    construction: &str,
    a: (&str, u64, u64),
    b: (&str, u64, u64),
    direction: Alternative,
) -> TestOutcome {
    let sample = |(label, ones, n): (&str, u64, u64)| {
        BinarySample::from_counts(label, ones as usize, n as usize)
    };
    let (sa, sb) = (sample(a), sample(b));
    let (result, error) = match t_test_one_sided(&sa, &sb, direction) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let desc = |(label, ones, n): (&str, u64, u64)| SampleDescriptor {
        label: label.to_string(),
        n,
        ones,
    };
    TestOutcome {
        claim: claim.to_string(),
        construction: construction.to_string(),
        sample_a: desc(a),
        sample_b: desc(b),
        direction,
        result,
        error,
    }
}

/// Builds the per-claim indicator samples. Every sample is a run of 0/1
/// outcomes, one per probe (or probe pair), so it is fully described by
/// its size and number of ones.
pub fn significance_tests(report: &AnalysisReport) -> Vec<TestOutcome> {
    let mut tests = Vec::new();
    if let Some(occ) = &report.occupation {
        let s = occ.female_share_pooled.gendered;
        for (country, pct) in &occ.national_female_pct {
            let n = s.denominator;
            let expected = ((pct / 100.0) * n as f64).round() as u64;
            tests.push(run_test(
                &format!(
                    "occupation_female_below_{}_workforce",
                    country.code().to_lowercase()
                ),
                "a: one indicator per he/she occupation translation (1 = she), all backends; \
                 b: the same number of indicators with ones at the national female workforce rate",
                ("translations assigned she", s.numerator, n),
                ("workforce expectation", expected.min(n), n),
                Alternative::Less,
            ));
        }
        if let Some(t) = &occ.transitions {
            let pick = |qs: [QualityAdjective; 2]| {
                let rows = t.rows.iter().filter(|r| qs.contains(&r.quality));
                rows.fold((0, 0), |(k, n), r| {
                    (
                        k + r.counts.she_to_he.numerator,
                        n + r.counts.she_to_he.denominator,
                    )
                })
            };
            let (kn, nn) = pick([QualityAdjective::Bad, QualityAdjective::VeryBad]);
            let (kp, np) = pick([QualityAdjective::VeryGood, QualityAdjective::Good]);
            tests.push(run_test(
                "negative_qualifiers_flip_she_to_he_more",
                "a: one indicator per base-she occupation pair under bad/very bad (1 = became he); \
                 b: the same under good/very good",
                ("she to he, negative qualifier", kn, nn),
                ("she to he, positive qualifier", kp, np),
                Alternative::Greater,
            ));
        }
    }
    if let Some(adj) = &report.adjective {
        let row = |c: Coding| {
            let r = adj.crosstab.rows.iter().find(|r| r.coding == c).copied();
            r.map_or((0, 0), |r| (r.female, r.male + r.female))
        };
        let (kf, nf) = row(Coding::Feminine);
        let (km, nm) = row(Coding::Masculine);
        tests.push(run_test(
            "feminine_coded_adjectives_get_she_more",
            "a: one indicator per he/she translation of a feminine-coded adjective (1 = she); \
             b: the same for masculine-coded adjectives",
            ("feminine-coded assigned she", kf, nf),
            ("masculine-coded assigned she", km, nm),
            Alternative::Greater,
        ));
        if let Some(p) = &adj.personhood {
            tests.push(run_test(
                "personhood_moves_she_to_he_more_than_he_to_she",
                "a: one indicator per base-she adjective pair (1 = became he with birisidir); \
                 b: one indicator per base-he pair (1 = became she)",
                (
                    "she to he",
                    p.counts.she_to_he.numerator,
                    p.counts.she_to_he.denominator,
                ),
                (
                    "he to she",
                    p.counts.he_to_she.numerator,
                    p.counts.he_to_she.denominator,
                ),
                Alternative::Greater,
            ));
        }
    }
    if let Some(a) = &report.asymmetry {
        let g = |gender: Gender| {
            let r = a
                .pooled
                .by_gender
                .iter()
                .find(|r| r.subject_gender == gender);
            r.map_or((0, 0), |r| {
                (r.shares.neutral.numerator, r.shares.neutral.denominator)
            })
        };
        let (km, nm) = g(Gender::Male);
        let (kf, nf) = g(Gender::Female);
        tests.push(run_test(
            "male_subjects_left_neutral_more",
            "a: one indicator per male-subject translation with the subject located (1 = neutral case); \
             b: the same for female subjects; all backends",
            ("male subject neutral", km, nm),
            ("female subject neutral", kf, nf),
            Alternative::Greater,
        ));
        let cell = |s: Stereotype| {
            let r = a
                .pooled
                .by_cell
                .iter()
                .find(|r| r.subject_gender == Gender::Male && r.stereotype == s);
            r.map_or((0, 0), |r| {
                (r.shares.marked.numerator, r.shares.marked.denominator)
            })
        };
        let (kf, nf) = cell(Stereotype::Feminine);
        let (km, nm) = cell(Stereotype::Masculine);
        tests.push(run_test(
            "male_subjects_marked_more_with_feminine_predicates",
            "a: one indicator per located male-subject translation with a feminine predicate (1 = overtly marked); \
             b: the same with a masculine predicate",
            ("male subject, feminine predicate, marked", kf, nf),
            ("male subject, masculine predicate, marked", km, nm),
            Alternative::Greater,
        ));
    }
    tests
}
