//! Run configuration: an optional TOML file overlaid by command-line flags.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use mtbias_core::stats::DenominatorPolicy;
use mtbias_core::translate::{EndpointDescriptor, MockPolicy};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_MOCK_BACKENDS: [&str; 4] = ["mock-1", "mock-2", "mock-3", "mock-4"];

/// Input files. Anything unset falls back to the bundled sample data.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputPaths {
    /// Already matched corpus; when set the raw lists are not used.
    pub corpus: Option<PathBuf>,
    pub raw_tr: Option<PathBuf>,
    pub raw_us: Option<PathBuf>,
    pub match_rules: Option<PathBuf>,
    pub adjectives: Option<PathBuf>,
    pub subjects: Option<PathBuf>,
    pub predicates: Option<PathBuf>,
    pub workforce: Option<PathBuf>,
}

impl InputPaths {
    fn resolve(&mut self, base: &Path) {
        for p in [
            &mut self.corpus,
            &mut self.raw_tr,
            &mut self.raw_us,
            &mut self.match_rules,
            &mut self.adjectives,
            &mut self.subjects,
            &mut self.predicates,
            &mut self.workforce,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct MockSection {
    pub backends: Vec<String>,
    pub policy: MockPolicy,
}

impl Default for MockSection {
    fn default() -> Self {
        MockSection {
            backends: DEFAULT_MOCK_BACKENDS
                .iter()
                .map(|s| s.to_string())
                .collect(),
            policy: MockPolicy::default(),
        }
    }
}

/// Contents of the `--config` file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub inputs: InputPaths,
    /// Subjects (Turkish lemma) rendered as "The <subject> are ...".
    pub plural_subjects: BTreeSet<String>,
    pub mock: MockSection,
    pub backends: Vec<EndpointDescriptor>,
    pub cache: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub denominator: Option<DenominatorPolicy>,
    pub seed: Option<u64>,
    pub parallelism: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: FileConfig = toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.inputs.resolve(base);
        for p in [&mut cfg.cache, &mut cfg.out].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

/// Command-line overrides.
#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub config: Option<PathBuf>,
    pub mock: bool,
    pub seed: Option<u64>,
    pub cache: Option<PathBuf>,
    pub cache_only: bool,
    pub parallelism: Option<usize>,
    pub out: Option<PathBuf>,
    pub resume: bool,
    pub denominator: Option<DenominatorPolicy>,
}

/// Where translations come from. Exactly one per run.
#[derive(Debug, Clone, PartialEq)]
pub enum Mode {
    Mock {
        backends: Vec<String>,
        policy: MockPolicy,
    },
    Live(Vec<EndpointDescriptor>),
    CacheOnly(Vec<String>),
}

impl Mode {
    pub fn backend_ids(&self) -> Vec<String> {
        match self {
            Mode::Mock { backends, .. } => backends.clone(),
            Mode::Live(d) => d.iter().map(|d| d.id.clone()).collect(),
            Mode::CacheOnly(ids) => ids.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub inputs: InputPaths,
    pub plural_subjects: BTreeSet<String>,
    pub out: PathBuf,
    pub cache: Option<PathBuf>,
    pub denominator: DenominatorPolicy,
    pub seed: Option<u64>,
    pub parallelism: usize,
    pub resume: bool,
    mock: bool,
    cache_only: bool,
    mock_section: MockSection,
    backends: Vec<EndpointDescriptor>,
}

impl RunConfig {
    pub fn from_flags(flags: Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let parallelism = flags
            .parallelism
            .or(file.parallelism)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, usize::from));
        if parallelism == 0 {
            return Err(CliError::Usage("--parallelism must be at least 1".into()));
        }
        let mut ids = BTreeSet::new();
        for d in &file.backends {
            if !ids.insert(d.id.as_str()) {
                return Err(CliError::Usage(format!("duplicate backend id {:?}", d.id)));
            }
        }
        let mut mock_ids = BTreeSet::new();
        if file.mock.backends.is_empty()
            || !file
                .mock
                .backends
                .iter()
                .all(|b| mock_ids.insert(b.as_str()))
        {
            return Err(CliError::Usage(
                "mock.backends must list at least one distinct id".into(),
            ));
        }
        Ok(RunConfig {
            inputs: file.inputs,
            plural_subjects: file.plural_subjects,
            out: flags
                .out
                .or(file.out)
                .unwrap_or_else(|| PathBuf::from("out")),
            cache: flags.cache.or(file.cache),
            denominator: flags.denominator.or(file.denominator).unwrap_or_default(),
            seed: flags.seed.or(file.seed),
            parallelism,
            resume: flags.resume,
            mock: flags.mock,
            cache_only: flags.cache_only,
            mock_section: file.mock,
            backends: file.backends,
        })
    }

    /// Picks the translation source; invalid combinations are usage errors.
    pub fn mode(&self) -> Result<Mode, CliError> {
        if self.mock && self.cache_only {
            return Err(CliError::Usage(
                "--mock and --cache-only are mutually exclusive".into(),
            ));
        }
        if self.mock {
            let seed = self
                .seed
                .ok_or_else(|| CliError::Usage("mock runs require --seed N".into()))?;
            let mut policy = self.mock_section.policy.clone();
            policy.seed = seed;
            policy
                .validate()
                .map_err(|e| CliError::Usage(format!("invalid mock policy: {e}")))?;
            return Ok(Mode::Mock {
                backends: self.mock_section.backends.clone(),
                policy,
            });
        }
        if self.backends.is_empty() {
            return Err(CliError::Usage(
                "no translation backend: pass --mock --seed N or list [[backends]] in --config"
                    .into(),
            ));
        }
        if self.cache_only {
            if self.cache.is_none() {
                return Err(CliError::Usage("--cache-only needs --cache PATH".into()));
            }
            return Ok(Mode::CacheOnly(
                self.backends.iter().map(|d| d.id.clone()).collect(),
            ));
        }
        Ok(Mode::Live(self.backends.clone()))
    }

    /// Explicit cache, or `<out>/cache.jsonl` for live runs.
    pub fn cache_path(&self, mode: &Mode) -> Option<PathBuf> {
        match (&self.cache, mode) {
            (Some(p), _) => Some(p.clone()),
            (None, Mode::Live(_)) => Some(self.out.join("cache.jsonl")),
            _ => None,
        }
    }
}
