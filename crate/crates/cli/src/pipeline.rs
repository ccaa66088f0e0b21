//! The five pipeline stages. Each reads files, writes files and a manifest.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::Utc;
use mtbias_core::analysis::{analyze, AnalysisInputs, AnalysisOptions, AnalysisReport};
use mtbias_core::corpus::{
    load_adjective_lexicon, load_asymmetry_lexicon, load_occupation_corpus, load_workforce_stats,
    match_occupations, parse_adjective_lexicon, parse_occupation_corpus, parse_predicates,
    parse_raw_tr, parse_raw_us, parse_subjects, parse_workforce_stats, save_adjective_lexicon,
    save_occupation_corpus, save_predicates, save_subjects, save_workforce_stats, MatchAudit,
    MatchRules,
};
use mtbias_core::probegen::{
    gen_adjective_probes, gen_asymmetry_probes, gen_occupation_probes, AsymmetryScheme, Probe,
};
use mtbias_core::report::{emit_figures, emit_tables};
use mtbias_core::sample;
use mtbias_core::translate::{
    read_jsonl, run_batch, write_jsonl, Backend, BatchOptions, Failure, FailureKind, MockBackend,
    MockContext, Origin, RemoteBackend, TranslationCache, TranslationRecord,
};
use mtbias_core::util::sha256_hex;
use serde_json::json;

use crate::config::{Mode, RunConfig};
use crate::manifest::{
    all_manifests, digest_file, display_path, read_manifest, verify_chain, write_manifest,
    FileDigest, Manifest,
};
use crate::{data, internal, CliError};

pub const STAGES: [&str; 5] = ["corpus-build", "probes", "translate", "analyze", "report"];

pub const CORPUS_DIR: &str = "corpus";
pub const PROBES_FILE: &str = "probes.jsonl";
pub const RECORDS_FILE: &str = "records.jsonl";
pub const DETECTIONS_FILE: &str = "detections.jsonl";
pub const REPORT_FILE: &str = "report.json";
pub const SUMMARY_FILE: &str = "summary.md";

/// Text input: a file on disk or a bundled sample file.
enum Source {
    File(PathBuf),
    Bundled(&'static str, &'static str),
}

impl Source {
    fn pick(path: &Option<PathBuf>, bundled: &'static str, text: &'static str) -> Source {
        match path {
            Some(p) => Source::File(p.clone()),
            None => Source::Bundled(bundled, text),
        }
    }

    fn read(&self) -> Result<String, CliError> {
        match self {
            Source::File(p) => fs::read_to_string(p)
                .map_err(|e| CliError::Data(format!("cannot read {}: {e}", p.display()))),
            Source::Bundled(_, text) => Ok(text.to_string()),
        }
    }

    fn name(&self) -> String {
        match self {
            Source::File(p) => p.display().to_string(),
            Source::Bundled(name, _) => format!("<sample>/{name}"),
        }
    }

    fn digest(&self, out: &Path) -> Result<FileDigest, CliError> {
        match self {
            Source::File(p) => digest_file(out, p),
            Source::Bundled(_, text) => Ok(FileDigest {
                path: self.name(),
                sha256: sha256_hex(text.as_bytes()),
            }),
        }
    }
}

/// Result of running (or skipping) one stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StageStatus {
    Ran,
    UpToDate,
}

pub struct Pipeline {
    pub cfg: RunConfig,
}

struct Corpus {
    occupations: PathBuf,
    adjectives: PathBuf,
    subjects: PathBuf,
    predicates: PathBuf,
    workforce: PathBuf,
    audit: PathBuf,
}

impl Pipeline {
    pub fn new(cfg: RunConfig) -> Self {
        Pipeline { cfg }
    }

    fn out(&self) -> &Path {
        &self.cfg.out
    }

    fn corpus_paths(&self) -> Corpus {
        let d = self.out().join(CORPUS_DIR);
        Corpus {
            occupations: d.join("occupations.csv"),
            adjectives: d.join("adjectives.csv"),
            subjects: d.join("subjects.csv"),
            predicates: d.join("predicates.csv"),
            workforce: d.join("workforce.csv"),
            audit: d.join("match_audit.jsonl"),
        }
    }

    fn digests(&self, files: &[(&str, &Path)]) -> Result<BTreeMap<String, FileDigest>, CliError> {
        files
            .iter()
            .map(|(k, p)| Ok((k.to_string(), digest_file(self.out(), p)?)))
            .collect()
    }

    /// Shared stage protocol: hash inputs, verify the chain, honor
    /// `--resume`, run, then record outputs.
    fn stage(
        &self,
        stage: &str,
        inputs: BTreeMap<String, FileDigest>,
        params: serde_json::Value,
        body: impl FnOnce() -> Result<(Vec<(String, PathBuf)>, bool), CliError>,
    ) -> Result<StageStatus, CliError> {
        let run = || -> Result<StageStatus, CliError> {
            let manifests = all_manifests(self.out(), &STAGES)?;
            verify_chain(self.out(), &manifests, &inputs)?;
            if self.cfg.resume && self.up_to_date(stage, &inputs, &params)? {
                log::info!("{stage}: inputs unchanged, skipping");
                return Ok(StageStatus::UpToDate);
            }
            let created_at = Utc::now();
            let (outputs, complete) = body()?;
            let outputs = outputs
                .iter()
                .map(|(k, p)| Ok((k.clone(), digest_file(self.out(), p).map_err(internal)?)))
                .collect::<Result<_, CliError>>()?;
            write_manifest(
                self.out(),
                &Manifest {
                    stage: stage.to_string(),
                    tool_version: env!("CARGO_PKG_VERSION").to_string(),
                    created_at,
                    params,
                    inputs,
                    outputs,
                    complete,
                },
            )?;
            Ok(StageStatus::Ran)
        };
        run().map_err(|e| e.in_stage(stage))
    }

    fn up_to_date(
        &self,
        stage: &str,
        inputs: &BTreeMap<String, FileDigest>,
        params: &serde_json::Value,
    ) -> Result<bool, CliError> {
        let Some(m) = read_manifest(self.out(), stage)? else {
            return Ok(false);
        };
        if !m.complete || &m.inputs != inputs || &m.params != params {
            return Ok(false);
        }
        for d in m.outputs.values() {
            match digest_file(self.out(), &self.out().join(&d.path)) {
                Ok(now) if now.sha256 == d.sha256 => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }

    pub fn corpus_build(&self) -> Result<StageStatus, CliError> {
        let i = &self.cfg.inputs;
        let occupations = match &i.corpus {
            Some(p) => vec![("corpus", Source::File(p.clone()))],
            None => vec![
                (
                    "raw_tr",
                    Source::pick(&i.raw_tr, "raw_tr.csv", sample::RAW_TR_CSV),
                ),
                (
                    "raw_us",
                    Source::pick(&i.raw_us, "raw_us.csv", sample::RAW_US_CSV),
                ),
                (
                    "match_rules",
                    Source::pick(&i.match_rules, "match_rules.toml", sample::MATCH_RULES_TOML),
                ),
            ],
        };
        let others = [
            (
                "adjectives",
                Source::pick(&i.adjectives, "adjectives.csv", sample::ADJECTIVES_CSV),
            ),
            (
                "subjects",
                Source::pick(&i.subjects, "subjects.csv", sample::SUBJECTS_CSV),
            ),
            (
                "predicates",
                Source::pick(&i.predicates, "predicates.csv", sample::PREDICATES_CSV),
            ),
            (
                "workforce",
                Source::pick(&i.workforce, "workforce.csv", sample::WORKFORCE_CSV),
            ),
        ];
        let mut digests = BTreeMap::new();
        for (k, s) in occupations.iter().chain(others.iter()) {
            digests.insert(k.to_string(), s.digest(self.out())?);
        }
        let out = self.corpus_paths();
        self.stage("corpus-build", digests, json!({}), || {
            let (corpus, audit) = match occupations.as_slice() {
                [(_, src)] => (
                    parse_occupation_corpus(&src.read()?, &src.name()).map_err(data)?,
                    MatchAudit::default(),
                ),
                [(_, tr), (_, us), (_, rules)] => {
                    let rules = MatchRules::from_toml(&rules.read()?).map_err(data)?;
                    let tr = parse_raw_tr(&tr.read()?, &tr.name()).map_err(data)?;
                    let us = parse_raw_us(&us.read()?, &us.name()).map_err(data)?;
                    match_occupations(&tr, &us, &rules).map_err(data)?
                }
                _ => unreachable!("occupation sources are one corpus or three raw inputs"),
            };
            let [adj, subj, pred, wf] = &others;
            let lexicon = parse_adjective_lexicon(&adj.1.read()?, &adj.1.name()).map_err(data)?;
            let subjects = parse_subjects(&subj.1.read()?, &subj.1.name()).map_err(data)?;
            let predicates = parse_predicates(&pred.1.read()?, &pred.1.name()).map_err(data)?;
            let workforce = parse_workforce_stats(&wf.1.read()?, &wf.1.name()).map_err(data)?;
            log::info!(
                "corpus: {} occupations, {} adjectives, {} subjects, {} predicates",
                corpus.len(),
                lexicon.len(),
                subjects.len(),
                predicates.len()
            );

            fs::create_dir_all(out.occupations.parent().expect("corpus dir")).map_err(internal)?;
            let create = |p: &Path| {
                fs::File::create(p)
                    .map(BufWriter::new)
                    .map_err(|e| internal(format!("cannot write {}: {e}", p.display())))
            };
            save_occupation_corpus(&corpus, create(&out.occupations)?).map_err(internal)?;
            save_adjective_lexicon(&lexicon, create(&out.adjectives)?).map_err(internal)?;
            save_subjects(&subjects, create(&out.subjects)?).map_err(internal)?;
            save_predicates(&predicates, create(&out.predicates)?).map_err(internal)?;
            save_workforce_stats(&workforce, create(&out.workforce)?).map_err(internal)?;
            fs::write(&out.audit, audit.to_jsonl()).map_err(internal)?;
            Ok((
                vec![
                    ("occupations".into(), out.occupations.clone()),
                    ("adjectives".into(), out.adjectives.clone()),
                    ("subjects".into(), out.subjects.clone()),
                    ("predicates".into(), out.predicates.clone()),
                    ("workforce".into(), out.workforce.clone()),
                    ("match_audit".into(), out.audit.clone()),
                ],
                true,
            ))
        })
    }

    fn scheme(&self) -> AsymmetryScheme {
        AsymmetryScheme {
            plural_subjects: self.cfg.plural_subjects.clone(),
        }
    }

    pub fn probes(&self) -> Result<StageStatus, CliError> {
        let c = self.corpus_paths();
        let inputs = self.digests(&[
            ("occupations", &c.occupations),
            ("adjectives", &c.adjectives),
            ("subjects", &c.subjects),
            ("predicates", &c.predicates),
        ])?;
        let params = json!({ "plural_subjects": self.cfg.plural_subjects });
        let path = self.out().join(PROBES_FILE);
        self.stage("probes", inputs, params, || {
            let corpus = load_occupation_corpus(&c.occupations).map_err(data)?;
            let lexicon = load_adjective_lexicon(&c.adjectives).map_err(data)?;
            let (subjects, predicates) =
                load_asymmetry_lexicon(&c.subjects, &c.predicates).map_err(data)?;
            let mut probes = gen_occupation_probes(&corpus);
            probes.extend(gen_adjective_probes(&lexicon).map_err(data)?);
            probes.extend(
                gen_asymmetry_probes(&subjects, &predicates, &self.scheme()).map_err(data)?,
            );
            log::info!("probes: {}", probes.len());
            write_jsonl_file(&path, &probes)?;
            Ok((vec![("probes".into(), path.clone())], true))
        })
    }

    pub fn translate(&self) -> Result<StageStatus, CliError> {
        let mode = self.cfg.mode().map_err(|e| e.in_stage("translate"))?;
        let c = self.corpus_paths();
        let probes_path = self.out().join(PROBES_FILE);
        let mut files: Vec<(&str, &Path)> = vec![("probes", &probes_path)];
        if matches!(mode, Mode::Mock { .. }) {
            files.extend([
                ("occupations", c.occupations.as_path()),
                ("adjectives", &c.adjectives),
                ("subjects", &c.subjects),
                ("predicates", &c.predicates),
            ]);
        }
        let inputs = self.digests(&files).map_err(|e| e.in_stage("translate"))?;
        let cache_path = self.cfg.cache_path(&mode);
        let params = match &mode {
            Mode::Mock { backends, policy } => json!({
                "mode": "mock", "backends": backends, "seed": policy.seed, "policy": policy,
                "plural_subjects": self.cfg.plural_subjects,
            }),
            Mode::Live(d) => json!({ "mode": "live", "backends": d }),
            Mode::CacheOnly(ids) => json!({ "mode": "cache-only", "backends": ids }),
        };
        let out_path = self.out().join(RECORDS_FILE);
        self.stage("translate", inputs, params, || {
            let probes: Vec<Probe> = read_jsonl_file(&probes_path)?;
            let backends = self.backends(&mode, &c)?;
            let cache = match &cache_path {
                Some(p) => {
                    let cache = TranslationCache::open(p).map_err(data)?;
                    if cache.corrupt_lines() > 0 {
                        log::warn!(
                            "{}: skipped {} corrupt lines",
                            p.display(),
                            cache.corrupt_lines()
                        );
                    }
                    Some(cache)
                }
                None => None,
            };
            let opts = BatchOptions {
                parallelism: self.cfg.parallelism,
                cache_only: matches!(mode, Mode::CacheOnly(_)),
            };
            let mut records = Vec::new();
            for b in &backends {
                records.extend(run_batch(&probes, b.as_ref(), cache.as_ref(), opts));
            }
            write_jsonl_file(&out_path, &records)?;
            let failed: Vec<&TranslationRecord> =
                records.iter().filter(|r| r.error.is_some()).collect();
            if let Some(first) = failed.first() {
                log::error!(
                    "{} of {} translations failed; first: {} on {}: {}",
                    failed.len(),
                    records.len(),
                    first.probe_id,
                    first.backend_id,
                    first.error.as_ref().expect("failed record has an error")
                );
            }
            Ok((
                vec![("records".into(), out_path.clone())],
                failed.is_empty(),
            ))
        })?;
        self.check_translate_complete()
    }

    fn check_translate_complete(&self) -> Result<StageStatus, CliError> {
        match read_manifest(self.out(), "translate")? {
            Some(m) if !m.complete => {
                let records: Vec<TranslationRecord> =
                    read_jsonl_file(&self.out().join(RECORDS_FILE))?;
                let failed = records.iter().filter(|r| r.error.is_some()).count();
                Err(CliError::Backend(format!(
                    "stage translate failed: {failed} of {} translations failed (records kept in {})",
                    records.len(),
                    self.out().join(RECORDS_FILE).display()
                )))
            }
            _ => Ok(StageStatus::Ran),
        }
    }

    fn backends(&self, mode: &Mode, c: &Corpus) -> Result<Vec<Box<dyn Backend>>, CliError> {
        match mode {
            Mode::Mock { backends, policy } => {
                let corpus = load_occupation_corpus(&c.occupations).map_err(data)?;
                let lexicon = load_adjective_lexicon(&c.adjectives).map_err(data)?;
                let (subjects, predicates) =
                    load_asymmetry_lexicon(&c.subjects, &c.predicates).map_err(data)?;
                let ctx = Arc::new(MockContext::new(
                    &corpus,
                    &lexicon,
                    &subjects,
                    &predicates,
                    &self.scheme(),
                ));
                backends
                    .iter()
                    .map(|id| {
                        MockBackend::new(id.clone(), policy.clone(), ctx.clone())
                            .map(|b| Box::new(b) as Box<dyn Backend>)
                            .map_err(CliError::Usage)
                    })
                    .collect()
            }
            Mode::Live(descriptors) => descriptors
                .iter()
                .map(|d| {
                    RemoteBackend::from_env(d.clone())
                        .map(|b| Box::new(b) as Box<dyn Backend>)
                        .map_err(|e| CliError::Usage(e.to_string()))
                })
                .collect(),
            Mode::CacheOnly(ids) => Ok(ids
                .iter()
                .map(|id| Box::new(CacheOnlyBackend(id.clone())) as Box<dyn Backend>)
                .collect()),
        }
    }

    pub fn analyze(&self) -> Result<StageStatus, CliError> {
        let c = self.corpus_paths();
        let records_path = self.out().join(RECORDS_FILE);
        if !records_path.is_file() {
            return Err(CliError::Data(format!(
                "stage analyze failed: translation records not found: {} (run `mtbias translate` first)",
                records_path.display()
            )));
        }
        let probes_path = self.out().join(PROBES_FILE);
        let files: [(&str, &Path); 7] = [
            ("records", &records_path),
            ("probes", &probes_path),
            ("occupations", &c.occupations),
            ("adjectives", &c.adjectives),
            ("subjects", &c.subjects),
            ("predicates", &c.predicates),
            ("workforce", &c.workforce),
        ];
        let inputs = self.digests(&files).map_err(|e| e.in_stage("analyze"))?;
        let params = json!({ "denominator": self.cfg.denominator });
        let report_path = self.out().join(REPORT_FILE);
        let det_path = self.out().join(DETECTIONS_FILE);
        let hashes: BTreeMap<String, String> = inputs
            .iter()
            .map(|(k, d)| (k.clone(), d.sha256.clone()))
            .collect();
        self.stage("analyze", inputs, params, || {
            let records: Vec<TranslationRecord> = read_jsonl_file(&records_path)?;
            let probes: Vec<Probe> = read_jsonl_file(&probes_path)?;
            let corpus = load_occupation_corpus(&c.occupations).map_err(data)?;
            let lexicon = load_adjective_lexicon(&c.adjectives).map_err(data)?;
            let (subjects, _) = load_asymmetry_lexicon(&c.subjects, &c.predicates).map_err(data)?;
            let workforce = load_workforce_stats(&c.workforce).map_err(data)?;
            let seed = read_manifest(self.out(), "translate")?
                .and_then(|m| m.params.get("seed").and_then(|v| v.as_u64()));
            let inputs = AnalysisInputs {
                corpus: &corpus,
                lexicon: &lexicon,
                subjects: &subjects,
                workforce: &workforce,
                probes: &probes,
                records: &records,
                input_hashes: hashes,
                seed,
            };
            let (report, detections) = analyze(
                &inputs,
                AnalysisOptions {
                    denominator: self.cfg.denominator,
                    parallelism: self.cfg.parallelism,
                },
            )
            .map_err(data)?;
            mtbias_core::report::emit_json(&report, &report_path).map_err(internal)?;
            write_jsonl_file(&det_path, &detections)?;
            Ok((
                vec![
                    ("report".into(), report_path.clone()),
                    ("detections".into(), det_path.clone()),
                ],
                true,
            ))
        })
    }

    pub fn report(&self) -> Result<StageStatus, CliError> {
        let report_path = self.out().join(REPORT_FILE);
        if !report_path.is_file() {
            return Err(CliError::Data(format!(
                "stage report failed: analysis report not found: {} (run `mtbias analyze` first)",
                report_path.display()
            )));
        }
        let inputs = self
            .digests(&[("report", &report_path)])
            .map_err(|e| e.in_stage("report"))?;
        self.stage("report", inputs, json!({}), || {
            let text = fs::read_to_string(&report_path).map_err(internal)?;
            let report: AnalysisReport = serde_json::from_str(&text)
                .map_err(|e| data(format!("{}: {e}", report_path.display())))?;
            for dir in ["tables", "figures"] {
                let d = self.out().join(dir);
                if d.exists() {
                    fs::remove_dir_all(&d).map_err(internal)?;
                }
            }
            let mut emitted = emit_tables(&report, self.out()).map_err(internal)?;
            let figs = emit_figures(&report, self.out()).map_err(internal)?;
            emitted.written.extend(figs.written);
            for notice in emitted.skipped.iter().chain(&figs.skipped) {
                log::info!("not emitted: {notice}");
            }
            emitted.written.sort();
            let outputs = emitted
                .written
                .into_iter()
                .map(|p| (display_path(self.out(), &p), p))
                .collect();
            Ok((outputs, true))
        })
    }

    /// Every stage in order; stops at the first failure.
    pub fn run_all(&self) -> Result<(), CliError> {
        self.corpus_build()?;
        self.probes()?;
        self.translate()?;
        self.analyze()?;
        self.report()?;
        Ok(())
    }
}

/// Stands in for a configured backend when only the cache may be used.
struct CacheOnlyBackend(String);

impl Backend for CacheOnlyBackend {
    fn id(&self) -> &str {
        &self.0
    }

    fn origin(&self) -> Origin {
        Origin::Cache
    }

    fn translate(&self, probe: &Probe) -> Result<String, Failure> {
        Err(Failure::new(
            FailureKind::CacheMiss,
            format!("no cache entry for {} / {}", self.0, probe.id),
        ))
    }
}

fn write_jsonl_file<T: serde::Serialize>(path: &Path, items: &[T]) -> Result<(), CliError> {
    if let Some(d) = path.parent() {
        fs::create_dir_all(d).map_err(internal)?;
    }
    let f = fs::File::create(path)
        .map_err(|e| internal(format!("cannot write {}: {e}", path.display())))?;
    write_jsonl(items, BufWriter::new(f)).map_err(internal)
}

fn read_jsonl_file<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>, CliError> {
    let f = fs::File::open(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    read_jsonl(BufReader::new(f)).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}
