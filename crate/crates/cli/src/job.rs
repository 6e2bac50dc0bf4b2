//! Job files: a presentation plus optional schedule, tolerance, seed and budgets.

use std::path::{Path, PathBuf};

use folrank::groupring::RingMatrix;
use folrank::groups::GroupSpec;
use folrank::ranks::EngineConfig;
use folrank::rational::{parse_rational, Rational};
use num_traits::Signed;
use serde::Deserialize;
use serde_json::Value;

use crate::Failure;

/// On-disk job. `matrix` is either an inline matrix object or a path to one,
/// resolved relative to the job file. A bare matrix object is also accepted.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobFile {
    /// Informational; the subcommand on the command line decides what runs.
    #[serde(default, rename = "command")]
    _command: Option<String>,
    #[serde(default)]
    group: Option<GroupSpec>,
    matrix: Value,
    #[serde(default)]
    schedule: Option<Vec<u64>>,
    #[serde(default)]
    tolerance: Option<String>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    epsilon: Option<Vec<String>>,
    #[serde(default)]
    max_window_elements: Option<usize>,
    #[serde(default)]
    max_primes: Option<usize>,
    #[serde(default)]
    max_samples: Option<usize>,
    #[serde(default)]
    erank_max_steps: Option<usize>,
}

#[derive(Debug)]
pub struct Job {
    pub matrix: RingMatrix,
    pub schedule: Option<Vec<u64>>,
    pub tolerance: Option<Rational>,
    pub seed: Option<u64>,
    pub epsilon: Option<Vec<Rational>>,
    pub config: EngineConfig,
}

fn input_error(path: &Path, msg: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("{}: {msg}", path.display()))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error(path, e))
}

fn parse_matrix(value: Value, path: &Path, field: &str) -> Result<RingMatrix, Failure> {
    serde_json::from_value(value).map_err(|e| input_error(path, format!("field `{field}`: {e}")))
}

pub fn parse_tolerance(text: &str) -> Result<Rational, Failure> {
    let t = parse_rational(text).map_err(|e| Failure::Input(format!("tolerance: {e}")))?;
    if !t.is_positive() {
        return Err(Failure::Input(format!("tolerance must be positive, got {text}")));
    }
    Ok(t)
}

pub fn parse_epsilons(items: &[String]) -> Result<Vec<Rational>, Failure> {
    items.iter().map(|s| parse_rational(s).map_err(|e| Failure::Input(format!("epsilon: {e}")))).collect()
}

pub fn load(path: &Path) -> Result<Job, Failure> {
    let text = read_text(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| input_error(path, e))?;
    if value.get("entries").is_some() && value.get("matrix").is_none() {
        let matrix = serde_json::from_str(&text).map_err(|e| input_error(path, e))?;
        return Ok(Job {
            matrix,
            schedule: None,
            tolerance: None,
            seed: None,
            epsilon: None,
            config: EngineConfig::default(),
        });
    }
    let file: JobFile = serde_json::from_str(&text).map_err(|e| input_error(path, e))?;
    let matrix = match file.matrix {
        Value::String(rel) => {
            let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
            let target: PathBuf = base.join(rel);
            serde_json::from_str(&read_text(&target)?).map_err(|e| input_error(&target, e))?
        }
        other => parse_matrix(other, path, "matrix")?,
    };
    if let Some(group) = &file.group {
        if group != matrix.group() {
            return Err(input_error(
                path,
                format!("field `group` is {group:?} but the matrix is over {:?}", matrix.group()),
            ));
        }
    }
    let mut config = EngineConfig::default();
    if let Some(v) = file.max_window_elements {
        config.max_window_elements = v;
    }
    if let Some(v) = file.max_primes {
        config.max_primes = v;
    }
    if let Some(v) = file.max_samples {
        config.max_samples = v;
    }
    if let Some(v) = file.erank_max_steps {
        config.erank_max_steps = v;
    }
    Ok(Job {
        matrix,
        schedule: file.schedule,
        tolerance: file.tolerance.as_deref().map(parse_tolerance).transpose()?,
        seed: file.seed,
        epsilon: file.epsilon.as_deref().map(parse_epsilons).transpose()?,
        config,
    })
}

/// Doubling schedules sized so each default run stays well inside the budget.
pub fn default_schedule(group: &GroupSpec) -> Vec<u64> {
    match group {
        g if g.is_finite() => vec![1],
        GroupSpec::Heisenberg => vec![1, 2, 4],
        g => match g.free_rank() {
            1 if g.finite_orders().is_empty() => vec![4, 8, 16, 32, 64, 128, 256],
            1 => vec![4, 8, 16, 32, 64],
            2 => vec![4, 8, 16, 32],
            _ => vec![2, 4, 8],
        },
    }
}

pub fn default_mmdim_schedule(group: &GroupSpec) -> Vec<u64> {
    match group {
        g if g.is_finite() => vec![1],
        GroupSpec::Heisenberg => vec![1, 2],
        g => match g.free_rank() {
            1 => vec![4, 8],
            2 => vec![2, 4],
            _ => vec![1, 2],
        },
    }
}

/// `2⁻³, …, 2⁻⁸`.
pub fn default_epsilons() -> Vec<Rational> {
    (3..=8).map(|k| folrank::rational::ratio(1, 1 << k)).collect()
}
