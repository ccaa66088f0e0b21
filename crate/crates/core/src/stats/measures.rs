use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::StatsError;
use crate::corpus::{
    Adjective, Coding, Gender, MajorGroup, OccupationCorpus, Stereotype, Taxonomy, WorkforceTable,
};
use crate::detect::{Detection, MarkingClass, PronounClass, Signal};
use crate::probegen::{slot, Probe, QualityAdjective};

/// A proportion in [0, 1] with its counts. `value` is null when the
/// denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ratio {
    pub numerator: u64,
    pub denominator: u64,
    pub value: Option<f64>,
}

impl Ratio {
    pub fn new(numerator: u64, denominator: u64) -> Self {
        Ratio {
            numerator,
            denominator,
            value: (denominator > 0).then(|| numerator as f64 / denominator as f64),
        }
    }
}

/// A percentage with its counts: `pct = 100 * numerator / denominator`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Share {
    pub numerator: u64,
    pub denominator: u64,
    pub pct: Option<f64>,
}

impl Share {
    pub fn new(numerator: u64, denominator: u64) -> Self {
        Share {
            numerator,
            denominator,
            pct: (denominator > 0).then(|| 100.0 * numerator as f64 / denominator as f64),
        }
    }
}

/// Which detections count toward a female-share denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DenominatorPolicy {
    /// Only he/she outputs.
    #[default]
    #[serde(rename = "gendered")]
    GenderedOnly,
    /// Every probe, including they, no pronoun and failed translations.
    #[serde(rename = "all")]
    AllProbes,
}

/// Probes by id.
#[derive(Debug, Clone, Default)]
pub struct ProbeIndex<'a>(HashMap<&'a str, &'a Probe>);

impl<'a> ProbeIndex<'a> {
    pub fn new(probes: &'a [Probe]) -> Self {
        ProbeIndex(probes.iter().map(|p| (p.id.as_str(), p)).collect())
    }

    pub fn get(&self, id: &str) -> Result<&'a Probe, StatsError> {
        self.0
            .get(id)
            .copied()
            .ok_or_else(|| StatsError::UnknownProbe(id.to_string()))
    }

    pub fn slot(&self, d: &Detection, key: &'static str) -> Result<&'a str, StatsError> {
        let p = self.get(&d.probe_id)?;
        p.slot(key).ok_or_else(|| StatsError::MissingSlot {
            probe: p.id.clone(),
            slot: key,
        })
    }

    fn parsed<T: std::str::FromStr>(
        &self,
        d: &Detection,
        key: &'static str,
    ) -> Result<T, StatsError> {
        let v = self.slot(d, key)?;
        v.parse().map_err(|_| StatsError::BadSlot {
            probe: d.probe_id.clone(),
            slot: key,
            value: v.to_string(),
        })
    }
}

fn gendered(d: &Detection) -> Option<Gender> {
    match d.signal.pronoun() {
        Some(PronounClass::Male) => Some(Gender::Male),
        Some(PronounClass::Female) => Some(Gender::Female),
        _ => None,
    }
}

pub fn female_share<'a>(
    detections: impl IntoIterator<Item = &'a Detection>,
    policy: DenominatorPolicy,
) -> Result<Share, StatsError> {
    let (mut female, mut gendered_n, mut all) = (0u64, 0u64, 0u64);
    for d in detections {
        all += 1;
        match gendered(d) {
            Some(Gender::Female) => {
                female += 1;
                gendered_n += 1;
            }
            Some(Gender::Male) => gendered_n += 1,
            None => {}
        }
    }
    if all == 0 {
        return Err(StatsError::Empty("female share"));
    }
    Ok(Share::new(
        female,
        match policy {
            DenominatorPolicy::GenderedOnly => gendered_n,
            DenominatorPolicy::AllProbes => all,
        },
    ))
}

/// Pronoun changes between a base sentence and a variant of it.
/// Pairs where either side lacks a he/she pronoun are excluded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlipCounts {
    pub she_to_he: Ratio,
    pub he_to_she: Ratio,
    pub excluded_pairs: u64,
}

impl FlipCounts {
    fn from_pairs(pairs: impl IntoIterator<Item = (Option<Gender>, Option<Gender>)>) -> Self {
        let (mut f, mut f_to_m, mut m, mut m_to_f, mut excluded) = (0, 0, 0, 0, 0);
        for pair in pairs {
            match pair {
                (Some(Gender::Female), Some(after)) => {
                    f += 1;
                    f_to_m += u64::from(after == Gender::Male);
                }
                (Some(Gender::Male), Some(after)) => {
                    m += 1;
                    m_to_f += u64::from(after == Gender::Female);
                }
                _ => excluded += 1,
            }
        }
        FlipCounts {
            she_to_he: Ratio::new(f_to_m, f),
            he_to_she: Ratio::new(m_to_f, m),
            excluded_pairs: excluded,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionRow {
    pub quality: QualityAdjective,
    #[serde(flatten)]
    pub counts: FlipCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionTable {
    pub rows: Vec<TransitionRow>,
    /// Base or variant detections without a partner, sorted.
    pub unmatched: Vec<String>,
}

type PairKey = (String, String);

fn keyed<'a>(
    detections: impl IntoIterator<Item = &'a Detection>,
    probes: &ProbeIndex<'_>,
    key_slot: &'static str,
) -> Result<BTreeMap<PairKey, Option<Gender>>, StatsError> {
    let mut out = BTreeMap::new();
    for d in detections {
        let key = (probes.slot(d, key_slot)?.to_string(), d.backend.clone());
        if out.insert(key.clone(), gendered(d)).is_some() {
            return Err(StatsError::Duplicate(format!("{} / {}", key.0, key.1)));
        }
    }
    Ok(out)
}

fn pair_up(
    base: &BTreeMap<PairKey, Option<Gender>>,
    variant: &BTreeMap<PairKey, Option<Gender>>,
    variant_name: &str,
    unmatched: &mut Vec<String>,
) -> FlipCounts {
    let mut pairs = Vec::new();
    for (key, after) in variant {
        match base.get(key) {
            Some(before) => pairs.push((*before, *after)),
            None => unmatched.push(format!(
                "{} / {}: {variant_name} without base",
                key.0, key.1
            )),
        }
    }
    for key in base.keys().filter(|k| !variant.contains_key(*k)) {
        unmatched.push(format!(
            "{} / {}: base without {variant_name}",
            key.0, key.1
        ));
    }
    FlipCounts::from_pairs(pairs)
}

/// She→He and He→She proportions per quality adjective, pooled over backends.
pub fn transition_table<'a>(
    base: impl IntoIterator<Item = &'a Detection>,
    qualified: impl IntoIterator<Item = &'a Detection>,
    probes: &ProbeIndex<'_>,
) -> Result<TransitionTable, StatsError> {
    let base = keyed(base, probes, slot::OCCUPATION_ID)?;
    let mut by_quality: BTreeMap<QualityAdjective, Vec<&Detection>> = BTreeMap::new();
    for d in qualified {
        let q_surface = probes.slot(d, slot::QUALITY)?;
        let q = QualityAdjective::from_surface(q_surface).ok_or_else(|| StatsError::BadSlot {
            probe: d.probe_id.clone(),
            slot: slot::QUALITY,
            value: q_surface.to_string(),
        })?;
        by_quality.entry(q).or_default().push(d);
    }
    let mut unmatched = Vec::new();
    let mut rows = Vec::new();
    for q in QualityAdjective::ALL {
        let variant = keyed(
            by_quality.get(&q).into_iter().flatten().copied(),
            probes,
            slot::OCCUPATION_ID,
        )?;
        rows.push(TransitionRow {
            quality: q,
            counts: pair_up(&base, &variant, q.key(), &mut unmatched),
        });
    }
    unmatched.sort();
    Ok(TransitionTable { rows, unmatched })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersonhoodShift {
    #[serde(flatten)]
    pub counts: FlipCounts,
    pub unmatched: Vec<String>,
}

/// Pronoun changes from "O <adj>" to "O <adj> birisidir", pooled over backends.
pub fn personhood_shift<'a>(
    base: impl IntoIterator<Item = &'a Detection>,
    personhood: impl IntoIterator<Item = &'a Detection>,
    probes: &ProbeIndex<'_>,
) -> Result<PersonhoodShift, StatsError> {
    let base = keyed(base, probes, slot::ADJECTIVE)?;
    let variant = keyed(personhood, probes, slot::ADJECTIVE)?;
    let mut unmatched = Vec::new();
    let counts = pair_up(&base, &variant, "personhood", &mut unmatched);
    unmatched.sort();
    Ok(PersonhoodShift { counts, unmatched })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodingRow {
    pub coding: Coding,
    pub male: u64,
    pub female: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodingCrosstab {
    pub rows: Vec<CodingRow>,
    /// Feminine-coded among female-assigned.
    pub female_feminine: Share,
    /// Masculine-coded among male-assigned.
    pub male_masculine: Share,
}

/// Adjective coding against assigned pronoun, pooled over backends.
pub fn coding_crosstab<'a>(
    detections: impl IntoIterator<Item = &'a Detection>,
    probes: &ProbeIndex<'_>,
    lexicon: &[Adjective],
) -> Result<CodingCrosstab, StatsError> {
    let codings: HashMap<&str, Coding> = lexicon
        .iter()
        .map(|a| (a.surface_tr.as_str(), a.coding()))
        .collect();
    let mut counts: BTreeMap<Coding, (u64, u64)> = BTreeMap::new();
    for d in detections {
        let surface = probes.slot(d, slot::ADJECTIVE)?;
        let coding = *codings
            .get(surface)
            .ok_or_else(|| StatsError::UnknownAdjective(surface.to_string()))?;
        let cell = counts.entry(coding).or_default();
        match gendered(d) {
            Some(Gender::Male) => cell.0 += 1,
            Some(Gender::Female) => cell.1 += 1,
            None => {}
        }
    }
    let rows: Vec<CodingRow> = Coding::ALL
        .iter()
        .map(|&coding| {
            let (male, female) = counts.get(&coding).copied().unwrap_or_default();
            CodingRow {
                coding,
                male,
                female,
            }
        })
        .collect();
    let total_male: u64 = rows.iter().map(|r| r.male).sum();
    let total_female: u64 = rows.iter().map(|r| r.female).sum();
    let cell = |c: Coding| {
        rows.iter()
            .find(|r| r.coding == c)
            .copied()
            .expect("all codings present")
    };
    Ok(CodingCrosstab {
        female_feminine: Share::new(cell(Coding::Feminine).female, total_female),
        male_masculine: Share::new(cell(Coding::Masculine).male, total_male),
        rows,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct MarkingTally {
    neutral: u64,
    matching: u64,
    opposite: u64,
    not_found: u64,
    untranslated: u64,
}

impl MarkingTally {
    fn add(&mut self, signal: Signal) {
        match signal {
            Signal::Marking(MarkingClass::Neutral) => self.neutral += 1,
            Signal::Marking(MarkingClass::MarkedMatching) => self.matching += 1,
            Signal::Marking(MarkingClass::MarkedOpposite) => self.opposite += 1,
            Signal::Marking(MarkingClass::SubjectNotFound) => self.not_found += 1,
            _ => self.untranslated += 1,
        }
    }

    fn merge(&mut self, o: &MarkingTally) {
        self.neutral += o.neutral;
        self.matching += o.matching;
        self.opposite += o.opposite;
        self.not_found += o.not_found;
        self.untranslated += o.untranslated;
    }

    fn shares(&self) -> MarkingShares {
        let located = self.neutral + self.matching + self.opposite;
        MarkingShares {
            neutral: Share::new(self.neutral, located),
            marked: Share::new(self.matching + self.opposite, located),
            preserved: Share::new(self.matching, located),
            subject_not_found: self.not_found,
            untranslated: self.untranslated,
        }
    }
}

/// Shares over translations in which the subject noun was located.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkingShares {
    /// Neutral case: gender left unmarked (and so not preserved).
    pub neutral: Share,
    /// Any overt marker.
    pub marked: Share,
    /// Marker matching the English subject's gender.
    pub preserved: Share,
    pub subject_not_found: u64,
    pub untranslated: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryGenderRow {
    pub subject_gender: Gender,
    #[serde(flatten)]
    pub shares: MarkingShares,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryCell {
    pub subject_gender: Gender,
    pub stereotype: Stereotype,
    #[serde(flatten)]
    pub shares: MarkingShares,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetrySubjectRow {
    pub subject_lemma: String,
    pub subject_gender: Gender,
    #[serde(flatten)]
    pub shares: MarkingShares,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryBreakdown {
    pub by_gender: Vec<AsymmetryGenderRow>,
    pub by_cell: Vec<AsymmetryCell>,
    pub by_subject: Vec<AsymmetrySubjectRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryShares {
    pub per_backend: BTreeMap<String, AsymmetryBreakdown>,
    /// All backends' translations counted together.
    pub pooled: AsymmetryBreakdown,
}

type CellKey = (String, Gender, Stereotype);

fn breakdown(tallies: &BTreeMap<CellKey, MarkingTally>) -> AsymmetryBreakdown {
    let sum = |pred: &dyn Fn(&CellKey) -> bool| {
        let mut t = MarkingTally::default();
        for (_, v) in tallies.iter().filter(|(k, _)| pred(k)) {
            t.merge(v);
        }
        t
    };
    let lemmas: BTreeSet<&str> = tallies.keys().map(|k| k.0.as_str()).collect();
    AsymmetryBreakdown {
        by_gender: Gender::BOTH
            .iter()
            .map(|&g| AsymmetryGenderRow {
                subject_gender: g,
                shares: sum(&|k| k.1 == g).shares(),
            })
            .collect(),
        by_cell: Gender::BOTH
            .iter()
            .flat_map(|&g| Stereotype::BOTH.iter().map(move |&s| (g, s)))
            .map(|(g, s)| AsymmetryCell {
                subject_gender: g,
                stereotype: s,
                shares: sum(&|k| k.1 == g && k.2 == s).shares(),
            })
            .collect(),
        by_subject: lemmas
            .iter()
            .flat_map(|l| Gender::BOTH.iter().map(move |&g| (*l, g)))
            .map(|(l, g)| AsymmetrySubjectRow {
                subject_lemma: l.to_string(),
                subject_gender: g,
                shares: sum(&|k| k.0 == l && k.1 == g).shares(),
            })
            .collect(),
    }
}

/// Neutral-case and marking shares by subject gender and predicate
/// stereotype, per backend and pooled.
pub fn asymmetry_shares<'a>(
    detections: impl IntoIterator<Item = &'a Detection>,
    probes: &ProbeIndex<'_>,
) -> Result<AsymmetryShares, StatsError> {
    let mut per_backend: BTreeMap<String, BTreeMap<CellKey, MarkingTally>> = BTreeMap::new();
    let mut pooled: BTreeMap<CellKey, MarkingTally> = BTreeMap::new();
    for d in detections {
        let lemma = probes.slot(d, slot::SUBJECT_LEMMA)?.to_string();
        let gender: Gender = probes.parsed(d, slot::SUBJECT_GENDER)?;
        let stereotype: Stereotype = probes.parsed(d, slot::PREDICATE_STEREOTYPE)?;
        let key = (lemma, gender, stereotype);
        per_backend
            .entry(d.backend.clone())
            .or_default()
            .entry(key.clone())
            .or_default()
            .add(d.signal);
        pooled.entry(key).or_default().add(d.signal);
    }
    Ok(AsymmetryShares {
        per_backend: per_backend
            .iter()
            .map(|(b, t)| (b.clone(), breakdown(t)))
            .collect(),
        pooled: breakdown(&pooled),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupShareRow {
    pub taxonomy: Taxonomy,
    pub group: String,
    pub title: String,
    pub occupations: u64,
    pub per_backend: BTreeMap<String, Share>,
    /// All backends counted together.
    pub average: Share,
    pub workforce_female_pct: Option<f64>,
}

/// Female-translation share per major group. Groups with no occupations in
/// the corpus are omitted.
pub fn group_shares<'a>(
    detections: impl IntoIterator<Item = &'a Detection>,
    probes: &ProbeIndex<'_>,
    corpus: &OccupationCorpus,
    workforce: &WorkforceTable,
    taxonomy: Taxonomy,
    policy: DenominatorPolicy,
) -> Result<Vec<GroupShareRow>, StatsError> {
    let index = corpus.index();
    let mut by_group: BTreeMap<MajorGroup, BTreeMap<String, Vec<&Detection>>> = BTreeMap::new();
    let mut backends = BTreeSet::new();
    for d in detections {
        let id = probes.slot(d, slot::OCCUPATION_ID)?;
        let occ = index
            .get(id)
            .ok_or_else(|| StatsError::UnknownOccupation(id.to_string()))?;
        backends.insert(d.backend.clone());
        by_group
            .entry(occ.group(taxonomy))
            .or_default()
            .entry(d.backend.clone())
            .or_default()
            .push(d);
    }
    let mut occupations: BTreeMap<MajorGroup, u64> = BTreeMap::new();
    for o in corpus.occupations() {
        *occupations.entry(o.group(taxonomy)).or_default() += 1;
    }
    let share = |dets: &[&Detection]| {
        female_share(dets.iter().copied(), policy).unwrap_or_else(|_| Share::new(0, 0))
    };
    let mut rows = Vec::new();
    for group in MajorGroup::all(taxonomy) {
        let Some(&n) = occupations.get(&group) else {
            continue;
        };
        let dets = by_group.get(&group);
        let per_backend: BTreeMap<String, Share> = backends
            .iter()
            .map(|b| {
                let v = dets
                    .and_then(|m| m.get(b))
                    .map(Vec::as_slice)
                    .unwrap_or(&[]);
                (b.clone(), share(v))
            })
            .collect();
        let all: Vec<&Detection> = dets
            .into_iter()
            .flat_map(|m| m.values().flatten().copied())
            .collect();
        rows.push(GroupShareRow {
            taxonomy,
            group: group.short().to_string(),
            title: group.title().to_string(),
            occupations: n,
            per_backend,
            average: share(&all),
            workforce_female_pct: workforce.group_pct(group),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probegen::Experiment;

    fn det(probe: &str, backend: &str, signal: Signal) -> Detection {
        Detection {
            probe_id: probe.into(),
            backend: backend.into(),
            signal,
            matched_token: None,
            marker_token: None,
        }
    }

    fn probe(id: &str, experiment: Experiment, slots: &[(&str, &str)]) -> Probe {
        Probe {
            id: id.into(),
            experiment,
            direction: experiment.direction(),
            source_text: "x".into(),
            slots: slots
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        }
    }

    const F: Signal = Signal::Pronoun(PronounClass::Female);
    const M: Signal = Signal::Pronoun(PronounClass::Male);
    const NONE: Signal = Signal::Pronoun(PronounClass::None);

    #[test]
    fn female_share_policies() {
        let d = [
            det("a", "b", F),
            det("b", "b", F),
            det("c", "b", M),
            det("d", "b", M),
        ];
        assert_eq!(
            female_share(&d, DenominatorPolicy::GenderedOnly)
                .unwrap()
                .pct,
            Some(50.0)
        );
        let d = [det("a", "b", F), det("b", "b", NONE)];
        assert_eq!(
            female_share(&d, DenominatorPolicy::AllProbes).unwrap().pct,
            Some(50.0)
        );
        assert_eq!(
            female_share(&d, DenominatorPolicy::GenderedOnly)
                .unwrap()
                .pct,
            Some(100.0)
        );
        assert_eq!(
            female_share(&[], DenominatorPolicy::AllProbes).unwrap_err(),
            StatsError::Empty("female share")
        );
    }

    fn occ_probes(n: usize) -> Vec<Probe> {
        let mut out = Vec::new();
        for i in 0..n {
            let id = format!("o{i}");
            out.push(probe(
                &format!("{id}:base"),
                Experiment::OccupationBase,
                &[(slot::OCCUPATION_ID, &id)],
            ));
            for q in QualityAdjective::ALL {
                out.push(probe(
                    &format!("{id}:{}", q.key()),
                    Experiment::OccupationAdjective,
                    &[(slot::OCCUPATION_ID, &id), (slot::QUALITY, q.surface_tr())],
                ));
            }
        }
        out
    }

    #[test]
    fn all_male_base_gives_null_she_to_he() {
        let probes = occ_probes(3);
        let idx = ProbeIndex::new(&probes);
        let base: Vec<_> = (0..3).map(|i| det(&format!("o{i}:base"), "b", M)).collect();
        let qual: Vec<_> = (0..3)
            .flat_map(|i| QualityAdjective::ALL.map(|q| det(&format!("o{i}:{}", q.key()), "b", M)))
            .collect();
        let t = transition_table(&base, &qual, &idx).unwrap();
        for row in &t.rows {
            assert_eq!(row.counts.she_to_he.value, None);
            assert_eq!(row.counts.he_to_she.value, Some(0.0));
        }
        assert!(t.unmatched.is_empty());
    }

    #[test]
    fn unmatched_pairs_reported_and_excluded() {
        let probes = occ_probes(2);
        let idx = ProbeIndex::new(&probes);
        let base = vec![det("o0:base", "b", F)];
        let qual = vec![det("o0:very-good", "b", M), det("o1:very-good", "b", M)];
        let t = transition_table(&base, &qual, &idx).unwrap();
        assert_eq!(t.rows[0].counts.she_to_he, Ratio::new(1, 1));
        assert!(t
            .unmatched
            .iter()
            .any(|u| u.starts_with("o1 / b: very-good without base")));
        assert!(t
            .unmatched
            .iter()
            .any(|u| u.starts_with("o0 / b: base without bad")));
    }

    #[test]
    fn duplicate_detection_rejected() {
        let probes = occ_probes(1);
        let idx = ProbeIndex::new(&probes);
        let base = vec![det("o0:base", "b", F), det("o0:base", "b", M)];
        assert!(matches!(
            transition_table(&base, &[], &idx),
            Err(StatsError::Duplicate(_))
        ));
    }

    #[test]
    fn crosstab_requires_known_adjective() {
        let probes = vec![probe(
            "x",
            Experiment::AdjectiveBase,
            &[(slot::ADJECTIVE, "yok")],
        )];
        let idx = ProbeIndex::new(&probes);
        let err = coding_crosstab(&[det("x", "b", F)], &idx, &[]).unwrap_err();
        assert_eq!(err, StatsError::UnknownAdjective("yok".into()));
        let ct = coding_crosstab(&[], &idx, &[]).unwrap();
        assert_eq!(ct.female_feminine.pct, None);
    }

    #[test]
    fn asymmetry_all_matching_gives_zero_neutral() {
        let probes: Vec<Probe> = ["male", "female"]
            .iter()
            .map(|g| {
                probe(
                    g,
                    Experiment::Asymmetry,
                    &[
                        (slot::SUBJECT_LEMMA, "kardeş"),
                        (slot::SUBJECT_GENDER, g),
                        (slot::PREDICATE_STEREOTYPE, "masculine"),
                    ],
                )
            })
            .collect();
        let idx = ProbeIndex::new(&probes);
        let d = [
            det("male", "b", Signal::Marking(MarkingClass::MarkedMatching)),
            det("female", "b", Signal::Marking(MarkingClass::MarkedMatching)),
        ];
        let s = asymmetry_shares(&d, &idx).unwrap();
        for row in &s.pooled.by_gender {
            assert_eq!(row.shares.neutral.pct, Some(0.0));
        }
    }
}
