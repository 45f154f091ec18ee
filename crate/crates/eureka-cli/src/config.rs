//! Run configuration: a single TOML or JSON document describing the dataset,
//! the judge, and per-command settings. All randomness flows from `seed`.

use crate::error::CliError;
use eureka::judge::{
    CachedJudge, ComparisonCache, Judge, LiveJudge, LiveJudgeConfig, MockJudge, PreferenceMatrix,
    SymmetrizingJudge, PROMPT_TEMPLATE_VERSION,
};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::time::Duration;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Master seed; every random decision in a run derives from it.
    #[serde(default)]
    pub seed: u64,
    /// Shown verbatim to the judge, e.g. "Predict whether a room is occupied".
    pub task_description: String,
    pub dataset: DatasetConfig,
    pub judge: JudgeConfig,
    #[serde(default)]
    pub ranking: RankingConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub baselines: BaselinesConfig,
    #[serde(default)]
    pub rankbench: RankbenchConfig,
    #[serde(default)]
    pub stability: StabilityConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub path: PathBuf,
    /// Optional schema JSON; without it the last CSV column is the label and
    /// feature kinds are inferred.
    #[serde(default)]
    pub schema: Option<PathBuf>,
    #[serde(default = "default_test_fraction")]
    pub test_fraction: f64,
    /// Cell values treated as missing, in addition to the empty string.
    #[serde(default)]
    pub missing_sentinels: Option<Vec<String>>,
}

fn default_test_fraction() -> f64 {
    0.2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JudgeMode {
    Mock,
    Live,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JudgeConfig {
    pub mode: JudgeMode,
    /// Mock: path to a preference-matrix JSON {names, p}.
    #[serde(default)]
    pub preference_matrix: Option<PathBuf>,
    /// Mock alternative: a dominance order (earlier always beats later).
    #[serde(default)]
    pub dominance: Option<Vec<String>>,
    /// Mock direct-ranking noise: adjacent-swap probability per position.
    #[serde(default)]
    pub direct_swap_probability: f64,
    /// Live: chat-completions endpoint URL.
    #[serde(default)]
    pub endpoint: Option<String>,
    #[serde(default = "default_model")]
    pub model: String,
    /// Name of the environment variable holding the bearer token.
    #[serde(default = "default_credential_env")]
    pub credential_env: String,
    /// Maximum concurrent comparisons for live runs.
    #[serde(default = "default_in_flight")]
    pub in_flight: usize,
    /// Optional append-only comparison cache (JSON lines). Cached pairs are
    /// replayed instead of re-queried, which makes live runs resumable.
    #[serde(default)]
    pub cache: Option<PathBuf>,
    /// Query both pair orders and coin-flip disagreements.
    #[serde(default)]
    pub symmetrize: bool,
    #[serde(default = "default_max_attempts")]
    pub max_attempts: u32,
    #[serde(default = "default_backoff_ms")]
    pub initial_backoff_ms: u64,
    #[serde(default = "default_timeout_s")]
    pub request_timeout_s: u64,
}

fn default_model() -> String {
    "gpt-5-nano".into()
}

fn default_credential_env() -> String {
    "EUREKA_API_KEY".into()
}

fn default_in_flight() -> usize {
    4
}

fn default_max_attempts() -> u32 {
    3
}

fn default_backoff_ms() -> u64 {
    1000
}

fn default_timeout_s() -> u64 {
    60
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankingMethod {
    Pairwise,
    Active,
    Direct,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankingConfig {
    #[serde(default = "default_method")]
    pub method: RankingMethod,
    #[serde(default = "default_n_comparisons")]
    pub n_comparisons: u64,
    /// Active ranking budget; defaults to `n_comparisons`.
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default = "default_delta")]
    pub delta: f64,
}

fn default_method() -> RankingMethod {
    RankingMethod::Pairwise
}

fn default_n_comparisons() -> u64 {
    4096
}

fn default_delta() -> f64 {
    0.1
}

impl Default for RankingConfig {
    fn default() -> Self {
        Self {
            method: default_method(),
            n_comparisons: default_n_comparisons(),
            budget: None,
            delta: default_delta(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Defaults to the number of features.
    #[serde(default)]
    pub k_max: Option<usize>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
}

fn default_alpha() -> f64 {
    0.05
}

fn default_lambda() -> f64 {
    1e-4
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            k_max: None,
            alpha: default_alpha(),
            lambda: default_lambda(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselinesConfig {
    #[serde(default = "default_validation_fraction")]
    pub validation_fraction: f64,
    /// Penalty for the single-feature validation fits.
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    /// Penalty for the all-features weight-norm fit.
    #[serde(default = "default_lr_lambda")]
    pub lr_lambda: f64,
}

fn default_validation_fraction() -> f64 {
    0.25
}

fn default_lr_lambda() -> f64 {
    1e-2
}

impl Default for BaselinesConfig {
    fn default() -> Self {
        Self {
            validation_fraction: default_validation_fraction(),
            lambda: default_lambda(),
            lr_lambda: default_lr_lambda(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TruthKind {
    Analytic,
    Sampled,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankbenchConfig {
    #[serde(default = "default_ns")]
    pub ns: Vec<u64>,
    #[serde(default = "default_truth")]
    pub truth: TruthKind,
    /// Surrogate-truth budget when `truth = "sampled"`.
    #[serde(default = "default_n_comparisons")]
    pub truth_n: u64,
    #[serde(default = "default_repeats")]
    pub repeats: u32,
}

fn default_ns() -> Vec<u64> {
    vec![8, 16, 32, 64, 128, 256]
}

fn default_truth() -> TruthKind {
    TruthKind::Sampled
}

fn default_repeats() -> u32 {
    20
}

impl Default for RankbenchConfig {
    fn default() -> Self {
        Self {
            ns: default_ns(),
            truth: default_truth(),
            truth_n: default_n_comparisons(),
            repeats: default_repeats(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityConfig {
    #[serde(default = "default_runs")]
    pub runs: u32,
    /// Comparisons per pairwise run; defaults to `ranking.n_comparisons`.
    #[serde(default)]
    pub n_comparisons: Option<u64>,
}

fn default_runs() -> u32 {
    20
}

impl Default for StabilityConfig {
    fn default() -> Self {
        Self {
            runs: default_runs(),
            n_comparisons: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_out_dir")]
    pub dir: PathBuf,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("runs")
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: default_out_dir(),
        }
    }
}

impl RunConfig {
    /// Reads a config file, dispatching on extension (`.toml` or `.json`).
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let config: RunConfig = match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => toml::from_str(&text)
                .map_err(|e| CliError::Config(format!("invalid TOML config: {e}")))?,
            Some("json") => serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("invalid JSON config: {e}")))?,
            other => {
                return Err(CliError::Config(format!(
                    "config must be .toml or .json, got {other:?}"
                )))
            }
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.task_description.is_empty() {
            return Err(CliError::Config(
                "task_description must be non-empty".into(),
            ));
        }
        if !(self.dataset.test_fraction > 0.0 && self.dataset.test_fraction < 1.0) {
            return Err(CliError::Config(format!(
                "dataset.test_fraction must lie in (0, 1), got {}",
                self.dataset.test_fraction
            )));
        }
        match self.judge.mode {
            JudgeMode::Mock => match (&self.judge.preference_matrix, &self.judge.dominance) {
                (None, None) => {
                    return Err(CliError::Config(
                        "judge.mode = \"mock\" requires judge.preference_matrix or judge.dominance"
                            .into(),
                    ))
                }
                (Some(_), Some(_)) => {
                    return Err(CliError::Config(
                        "judge.preference_matrix and judge.dominance are mutually exclusive".into(),
                    ))
                }
                _ => {}
            },
            JudgeMode::Live => {
                if self.judge.endpoint.as_deref().unwrap_or("").is_empty() {
                    return Err(CliError::Config(
                        "judge.mode = \"live\" requires judge.endpoint".into(),
                    ));
                }
                if self.judge.in_flight == 0 {
                    return Err(CliError::Config(
                        "judge.in_flight must be at least 1".into(),
                    ));
                }
            }
        }
        if !(self.sweep.alpha > 0.0 && self.sweep.alpha < 1.0) {
            return Err(CliError::Config(format!(
                "sweep.alpha must lie in (0, 1), got {}",
                self.sweep.alpha
            )));
        }
        if !(self.ranking.delta > 0.0 && self.ranking.delta < 1.0) {
            return Err(CliError::Config(format!(
                "ranking.delta must lie in (0, 1), got {}",
                self.ranking.delta
            )));
        }
        Ok(())
    }

    /// Builds the configured judge. For the mock judge, every name in
    /// `required_features` must be covered by the preference matrix.
    pub fn build_judge(&self, required_features: &[String]) -> Result<Box<dyn Judge>, CliError> {
        let judge: Box<dyn Judge> = match self.judge.mode {
            JudgeMode::Mock => {
                let matrix = match (&self.judge.preference_matrix, &self.judge.dominance) {
                    (Some(path), None) => PreferenceMatrix::from_json_file(path)
                        .map_err(|e| CliError::Config(e.to_string()))?,
                    (None, Some(order)) => PreferenceMatrix::from_dominance(order.clone())
                        .map_err(|e| CliError::Config(e.to_string()))?,
                    _ => unreachable!("checked by validate"),
                };
                for feature in required_features {
                    if matrix.index(feature).is_none() {
                        return Err(CliError::Config(format!(
                            "feature {feature:?} is not covered by the mock preference matrix"
                        )));
                    }
                }
                let mock = MockJudge::new(matrix, self.seed)
                    .with_swap_probability(self.judge.direct_swap_probability);
                self.maybe_cache(Box::new(mock), "mock")?
            }
            JudgeMode::Live => {
                let api_key = std::env::var(&self.judge.credential_env).map_err(|_| {
                    CliError::Config(format!(
                        "environment variable {} (judge.credential_env) is not set",
                        self.judge.credential_env
                    ))
                })?;
                let live = LiveJudge::new(LiveJudgeConfig {
                    endpoint: self.judge.endpoint.clone().expect("checked by validate"),
                    model: self.judge.model.clone(),
                    api_key,
                    max_attempts: self.judge.max_attempts,
                    initial_backoff: Duration::from_millis(self.judge.initial_backoff_ms),
                    request_timeout: Duration::from_secs(self.judge.request_timeout_s),
                })?;
                self.maybe_cache(Box::new(live), &self.judge.model.clone())?
            }
        };
        if self.judge.symmetrize {
            Ok(Box::new(SymmetrizingJudge::new(judge, self.seed)))
        } else {
            Ok(judge)
        }
    }

    fn maybe_cache(
        &self,
        inner: Box<dyn Judge>,
        model_id: &str,
    ) -> Result<Box<dyn Judge>, CliError> {
        match &self.judge.cache {
            Some(path) => {
                let cache = ComparisonCache::open(path)?;
                Ok(Box::new(CachedJudge::new(
                    inner,
                    cache,
                    PROMPT_TEMPLATE_VERSION,
                    model_id,
                )))
            }
            None => Ok(inner),
        }
    }
}
