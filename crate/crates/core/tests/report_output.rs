mod support;

use std::fs;
use std::path::Path;

use mtbias_core::analysis::{AnalysisReport, RunMeta};
use mtbias_core::report::{bar_chart_svg, emit_all, summary};
use mtbias_core::stats::DenominatorPolicy;
use support::*;

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.push((rel, fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

/// Pulls `data-value` for every bar in `series`, keyed by group.
fn bars(svg: &str, series: &str) -> Vec<(String, f64)> {
    let attr = |tag: &str, name: &str| -> Option<String> {
        let start = tag.find(&format!("{name}=\""))? + name.len() + 2;
        let len = tag[start..].find('"')?;
        Some(tag[start..start + len].to_string())
    };
    svg.split("<rect")
        .skip(1)
        .filter_map(|t| {
            let tag = &t[..t.find('>').unwrap()];
            (attr(tag, "data-series")? == series).then(|| {
                Some((
                    attr(tag, "data-group")?,
                    attr(tag, "data-value")?.parse().ok()?,
                ))
            })?
        })
        .collect()
}

#[test]
fn mock_report_emits_identically_twice() {
    let report = mock_run(&["mock-1", "mock-2"], 7, 4).report();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    emit_all(&report, a.path()).unwrap();
    emit_all(&report, b.path()).unwrap();
    let fa = files(a.path());
    assert_eq!(fa, files(b.path()));
    let names: Vec<&str> = fa.iter().map(|(n, _)| n.as_str()).collect();
    for want in [
        "report.json",
        "summary.md",
        "tables/transitions.csv",
        "tables/significance_tests.csv",
        "figures/neutral_case.svg",
    ] {
        assert!(names.contains(&want), "{want} missing from {names:?}");
    }
    let back: AnalysisReport =
        serde_json::from_slice(&fs::read(a.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(back, report);
}

#[test]
fn mock_runs_do_not_depend_on_thread_count() {
    let one = mock_run(&["mock-1"], 3, 1);
    let many = mock_run(&["mock-1"], 3, 8);
    assert_eq!(one.records, many.records);
}

#[test]
fn empty_report_still_has_metadata() {
    let report = AnalysisReport {
        meta: RunMeta {
            tool_version: "0.0.0".into(),
            backends: vec![],
            seed: Some(1),
            denominator: DenominatorPolicy::GenderedOnly,
            input_hashes: Default::default(),
            probes: 0,
            records: 0,
            failed_records: 0,
            failures_by_kind: Default::default(),
        },
        occupation: None,
        adjective: None,
        asymmetry: None,
        tests: vec![],
    };
    assert!(report.is_empty());
    let md = summary(&report);
    assert!(md.contains("No detections were available"), "{md}");
    let dir = tempfile::tempdir().unwrap();
    let emitted = emit_all(&report, dir.path()).unwrap();
    assert!(dir.path().join("summary.md").is_file());
    assert!(!emitted.skipped.is_empty());
    assert!(!dir.path().join("figures/neutral_case.svg").exists());
}

#[test]
fn single_backend_gives_single_series() {
    let report = mock_run(&["only"], 5, 2).report();
    let dir = tempfile::tempdir().unwrap();
    emit_all(&report, dir.path()).unwrap();
    let svg = fs::read_to_string(dir.path().join("figures/neutral_case.svg")).unwrap();
    assert_eq!(bars(&svg, "only").len(), 2);
    assert!(bars(&svg, "pooled").is_empty());
    assert!(bars(&svg, "average").is_empty());
}

#[test]
fn neutral_case_figure_carries_planted_values() {
    let report = planted_asymmetry_report();
    let dir = tempfile::tempdir().unwrap();
    emit_all(&report, dir.path()).unwrap();
    let svg = fs::read_to_string(dir.path().join("figures/neutral_case.svg")).unwrap();
    let pooled = bars(&svg, "pooled");
    assert_eq!(pooled.len(), 2, "{svg}");
    assert_eq!(pooled[0].0, "male subject");
    assert!((pooled[0].1 - 47.7).abs() <= 0.05);
    assert_eq!(pooled[1].0, "female subject");
    assert!((pooled[1].1 - 25.0).abs() <= 0.05);
}

#[test]
fn chart_escapes_text_and_skips_nulls() {
    let svg = bar_chart_svg(
        "a < b & c",
        &["x".into(), "y\"z".into()],
        &[("s".into(), vec![Some(12.5), None])],
    );
    assert!(svg.contains("a &lt; b &amp; c"));
    assert!(svg.contains("y&quot;z"));
    assert_eq!(bars(&svg, "s"), vec![("x".to_string(), 12.5)]);
}
