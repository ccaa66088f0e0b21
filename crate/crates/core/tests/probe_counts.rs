mod support;

use std::collections::BTreeSet;

use mtbias_core::corpus::Gender;
use mtbias_core::probegen::{
    gen_adjective_probes, gen_asymmetry_probes, gen_occupation_probes, slot, AsymmetryScheme,
    Experiment,
};
use support::*;

fn count(probes: &[mtbias_core::probegen::Probe], e: Experiment) -> usize {
    probes.iter().filter(|p| p.experiment == e).count()
}

#[test]
fn full_design_sizes() {
    let occ = gen_occupation_probes(&synthetic_corpus(1617));
    assert_eq!(occ.len(), 8085);
    assert_eq!(count(&occ, Experiment::OccupationBase), 1617);
    assert_eq!(count(&occ, Experiment::OccupationAdjective), 4 * 1617);

    let adj = gen_adjective_probes(&synthetic_lexicon(97)).unwrap();
    assert_eq!(adj.len(), 194);
    assert_eq!(count(&adj, Experiment::AdjectiveBase), 97);

    let (subjects, predicates) = sample_asymmetry_lexicon();
    let asym = gen_asymmetry_probes(&subjects, &predicates, &AsymmetryScheme::default()).unwrap();
    assert_eq!(asym.len(), 240);
    for g in Gender::BOTH {
        let n = asym
            .iter()
            .filter(|p| p.slot(slot::SUBJECT_GENDER) == Some(g.as_str()))
            .count();
        assert_eq!(n, 120, "{g}");
    }
}

#[test]
fn sample_sizes_follow_the_formulas() {
    let inputs = mtbias_core::sample::load().unwrap();
    let probes = sample_probes(&inputs);
    let n = inputs.corpus.occupations().len();
    let m = inputs.lexicon.len();
    assert_eq!(probes.len(), 5 * n + 2 * m + 240);
    let ids: BTreeSet<&str> = probes.iter().map(|p| p.id.as_str()).collect();
    assert_eq!(ids.len(), probes.len());
    for p in &probes {
        p.validate().unwrap();
    }
}

#[test]
fn generation_is_deterministic() {
    let corpus = synthetic_corpus(40);
    assert_eq!(
        gen_occupation_probes(&corpus),
        gen_occupation_probes(&corpus)
    );
    let lex = synthetic_lexicon(30);
    assert_eq!(
        gen_adjective_probes(&lex).unwrap(),
        gen_adjective_probes(&lex).unwrap()
    );
}
