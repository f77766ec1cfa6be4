//! Experiment spec files: a flat TOML document whose tables mirror the model
//! types. Probabilities have no defaults; only engine knobs and output paths do.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use trustfusion::sim::{Method, ScenarioConfig};
use trustfusion::{AttackModel, SensorModel, TrustModel};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub scenario: ScenarioSection,
    pub sensor: SensorSection,
    pub trust: TrustSection,
    pub attack: AttackSection,
    pub methods: MethodsSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mstar: Option<MstarSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsSection>,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub n: usize,
    pub malicious_count: usize,
    pub seed: u64,
    pub trials: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorSection {
    pub p_fa: f64,
    pub p_md: f64,
    pub prior_h0: f64,
    pub prior_h1: f64,
}

/// Trust-symbol pmfs over a shared alphabet, indexed by symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrustSection {
    pub legit: Vec<f64>,
    pub malicious: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackSection {
    pub p_f: f64,
    pub pre_fa: f64,
    pub pre_md: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodsSection {
    /// Any of `oracle`, `oblivious`, `two_stage`, `aglrt`, `aglrt_prior`,
    /// `aglrt_constrained`, `baseline1`, `baseline5`, `reputation`.
    pub list: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_stage_m_bar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aglrt_prior_p_legit: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aglrt_constrained_m_bar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reputation_window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reputation_eta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub proportions: Vec<f64>,
}

/// Critical-proportion study under noiseless legitimate sensors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MstarSection {
    pub n: usize,
    pub p_trust_l: Vec<f64>,
    /// Defaults to `1 - p_trust_l` elementwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_trust_m: Option<Vec<f64>>,
    #[serde(default = "default_step")]
    pub delta_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSection {
    pub n: Vec<usize>,
    pub m_bar: f64,
    /// Region split points; both default to the midpoints of the optimized
    /// trust probabilities.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_m: Option<f64>,
    #[serde(default = "default_step")]
    pub delta_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: default_dir() }
    }
}

fn default_step() -> f64 {
    0.01
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

/// A spec whose models passed validation.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub file: SpecFile,
    pub scenario: ScenarioConfig<f64>,
    pub methods: Vec<Method<f64>>,
}

fn invalid(field: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Invalid {
        field: field.to_string(),
        message: e.to_string(),
    }
}

fn check_unit(field: &str, v: f64) -> Result<(), CliError> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(invalid(field, format!("{v} is outside [0, 1]")))
    }
}

/// Reads and validates a spec file.
pub fn parse_spec(path: &Path) -> Result<ExperimentSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Missing {
        path: path.to_path_buf(),
        source,
    })?;
    parse_spec_str(&text, &path.display().to_string())
}

/// Run manifest written next to every output. Its `spec` table is the
/// effective spec, so a manifest can be passed back as `--spec`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub outputs: Vec<String>,
    pub spec: SpecFile,
}

/// Parses spec text, or a manifest's embedded spec; `origin` only labels
/// error messages.
pub fn parse_spec_str(text: &str, origin: &str) -> Result<ExperimentSpec, CliError> {
    let malformed = |e: toml::de::Error| CliError::Malformed {
        origin: origin.to_string(),
        message: e.to_string(),
    };
    let is_manifest = text
        .parse::<toml::Table>()
        .map(|t| t.contains_key("tool"))
        .unwrap_or(false);
    let file = if is_manifest {
        toml::from_str::<Manifest>(text).map_err(malformed)?.spec
    } else {
        toml::from_str::<SpecFile>(text).map_err(malformed)?
    };
    validate(file)
}

pub fn validate(file: SpecFile) -> Result<ExperimentSpec, CliError> {
    let s = &file.sensor;
    let sensor = SensorModel::new(s.p_fa, s.p_md, s.prior_h0, s.prior_h1).map_err(|e| invalid("sensor", e))?;
    let trust = TrustModel::new(file.trust.legit.clone(), file.trust.malicious.clone()).map_err(|e| invalid("trust", e))?;
    let a = &file.attack;
    let attack = AttackModel::new(a.p_f, a.pre_fa, a.pre_md).map_err(|e| invalid("attack", e))?;
    let sc = &file.scenario;
    let scenario =
        ScenarioConfig::new(sc.n, sc.malicious_count, sensor, trust, attack, sc.seed).map_err(|e| invalid("scenario", e))?;
    if sc.trials == 0 {
        return Err(invalid("scenario.trials", "must be at least 1"));
    }
    let methods = resolve_methods(&file.methods)?;

    if let Some(sw) = &file.sweep {
        if sw.proportions.is_empty() {
            return Err(invalid("sweep.proportions", "must not be empty"));
        }
        for (i, &p) in sw.proportions.iter().enumerate() {
            check_unit(&format!("sweep.proportions[{i}]"), p)?;
        }
    }
    if let Some(ms) = &file.mstar {
        if ms.n == 0 {
            return Err(invalid("mstar.n", "must be at least 1"));
        }
        if !(ms.delta_m > 0.0 && ms.delta_m <= 1.0) {
            return Err(invalid("mstar.delta_m", format!("{} is outside (0, 1]", ms.delta_m)));
        }
        for (i, &p) in ms.p_trust_l.iter().enumerate() {
            check_unit(&format!("mstar.p_trust_l[{i}]"), p)?;
        }
        if let Some(pm) = &ms.p_trust_m {
            if pm.len() != ms.p_trust_l.len() {
                return Err(invalid(
                    "mstar.p_trust_m",
                    format!("has {} entries but p_trust_l has {}", pm.len(), ms.p_trust_l.len()),
                ));
            }
            for (i, &p) in pm.iter().enumerate() {
                check_unit(&format!("mstar.p_trust_m[{i}]"), p)?;
            }
        }
    }
    if let Some(b) = &file.bounds {
        check_unit("bounds.m_bar", b.m_bar)?;
        if b.n.iter().any(|&n| n == 0) {
            return Err(invalid("bounds.n", "every network size must be at least 1"));
        }
        if !(b.delta_p > 0.0 && b.delta_p <= 1.0) {
            return Err(invalid("bounds.delta_p", format!("{} is outside (0, 1]", b.delta_p)));
        }
        if b.beta_l.is_some() != b.beta_m.is_some() {
            return Err(invalid("bounds", "beta_l and beta_m must be given together"));
        }
    }
    Ok(ExperimentSpec {
        file,
        scenario,
        methods,
    })
}

fn resolve_methods(m: &MethodsSection) -> Result<Vec<Method<f64>>, CliError> {
    if m.list.is_empty() {
        return Err(invalid("methods.list", "must name at least one method"));
    }
    for (field, v) in [
        ("methods.two_stage_m_bar", m.two_stage_m_bar),
        ("methods.aglrt_prior_p_legit", m.aglrt_prior_p_legit),
        ("methods.aglrt_constrained_m_bar", m.aglrt_constrained_m_bar),
    ] {
        if let Some(v) = v {
            check_unit(field, v)?;
        }
    }
    let mut out = Vec::with_capacity(m.list.len());
    for (i, name) in m.list.iter().enumerate() {
        let method = match name.as_str() {
            "oracle" => Method::Oracle,
            "oblivious" => Method::Oblivious,
            "two_stage" => Method::TwoStage {
                m_bar: m.two_stage_m_bar,
            },
            "aglrt" => Method::Aglrt,
            "aglrt_prior" => {
                if let Some(p) = m.aglrt_prior_p_legit {
                    trustfusion::aglrt::RobotPrior::new(p).map_err(|e| invalid("methods.aglrt_prior_p_legit", e))?;
                }
                Method::AglrtWithPrior {
                    p_legit: m.aglrt_prior_p_legit,
                }
            }
            "aglrt_constrained" => Method::AglrtConstrained {
                m_bar: m.aglrt_constrained_m_bar,
            },
            "baseline1" => Method::baseline1(),
            "baseline5" => Method::baseline5(),
            "reputation" => {
                let (Some(window), Some(eta)) = (m.reputation_window, m.reputation_eta) else {
                    return Err(invalid(
                        "methods",
                        "`reputation` needs reputation_window and reputation_eta",
                    ));
                };
                trustfusion::baselines::ReputationState::new(1, window, eta)
                    .map_err(|e| invalid("methods.reputation_window", e))?;
                Method::Reputation { window, eta }
            }
            other => return Err(invalid(&format!("methods.list[{i}]"), format!("unknown method `{other}`"))),
        };
        if out.iter().any(|m: &Method<f64>| m.name() == method.name()) {
            return Err(invalid(&format!("methods.list[{i}]"), format!("duplicate method `{name}`")));
        }
        out.push(method);
    }
    Ok(out)
}
