//! Model selection from command-line names and custom-model files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use bandforge_core::{validate_model, Asymptotics, CoefficientModel, CustomModel};
use serde::Deserialize;

/// Builtin families accepted by `--model`. The short `eqNN` spellings are
/// accepted as aliases.
pub const MODEL_NAMES: &[(&str, &str)] = &[
    ("single-band", "eq14"),
    ("two-band", "eq17"),
    ("three-band", "eq19"),
    ("unbounded-two-band", "eq21"),
];

/// Default `(alpha, beta, gamma)` for the parameterized families.
pub fn default_params(name: &str) -> Option<(f64, f64, f64)> {
    match name {
        "single-band" => Some((0.7, 0.5, -0.7)),
        "two-band" => Some((0.7, 0.8, 0.3)),
        "unbounded-two-band" => Some((1.0, 0.2, 0.8)),
        _ => None,
    }
}

fn canonical(name: &str) -> Option<&'static str> {
    MODEL_NAMES
        .iter()
        .find(|(long, short)| *long == name || *short == name)
        .map(|(long, _)| *long)
}

/// Builds a builtin model, filling unspecified parameters with the defaults.
pub fn builtin(
    name: &str,
    alpha: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
) -> Result<CoefficientModel> {
    let Some(name) = canonical(name) else {
        let known: Vec<_> = MODEL_NAMES.iter().map(|(l, _)| *l).collect();
        bail!(
            "unknown model '{name}' (expected one of {})",
            known.join(", ")
        );
    };
    if name == "three-band" {
        if alpha.is_some() || beta.is_some() || gamma.is_some() {
            bail!("the three-band model takes no parameters");
        }
        return Ok(CoefficientModel::ThreeBand);
    }
    let (a0, b0, g0) = default_params(name).expect("parameterized family");
    let (alpha, beta, gamma) = (alpha.unwrap_or(a0), beta.unwrap_or(b0), gamma.unwrap_or(g0));
    Ok(match name {
        "single-band" => CoefficientModel::SingleBand { alpha, beta, gamma },
        "two-band" => CoefficientModel::TwoBand { alpha, beta, gamma },
        _ => CoefficientModel::UnboundedTwoBand { alpha, beta, gamma },
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TailSpec {
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "A")]
    a: Vec<f64>,
    #[serde(rename = "B")]
    b: Vec<f64>,
}

/// On-disk model description.
///
/// ```json
/// {"kind": "custom", "head": [[0.3, 0.2]], "tail": {"K": 1, "A": [0.0], "B": [0.5]}}
/// ```
///
/// `kind` may also name a builtin, in which case `params` may carry `alpha`,
/// `beta`, `gamma` and `head`/`tail` must be absent. For custom models
/// `params` is free-form metadata.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    kind: String,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    #[serde(default)]
    head: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    tail: Option<TailSpec>,
}

pub fn parse_model_file(text: &str) -> Result<CoefficientModel> {
    let file: ModelFile = serde_json::from_str(text).context("malformed model file")?;
    if file.kind != "custom" {
        if file.head.is_some() || file.tail.is_some() {
            bail!("'head' and 'tail' are only allowed for kind \"custom\"");
        }
        if let Some(key) = file
            .params
            .keys()
            .find(|k| !matches!(k.as_str(), "alpha" | "beta" | "gamma"))
        {
            bail!("unknown parameter '{key}'");
        }
        let p = |k: &str| file.params.get(k).copied();
        return builtin(&file.kind, p("alpha"), p("beta"), p("gamma"));
    }
    let tail = file.tail.context("custom model needs a 'tail'")?;
    if tail.a.len() != tail.k || tail.b.len() != tail.k {
        bail!(
            "tail: K = {} but A has {} and B has {} entries",
            tail.k,
            tail.a.len(),
            tail.b.len()
        );
    }
    let tail = Asymptotics::new(tail.a, tail.b)?;
    let head = file
        .head
        .unwrap_or_default()
        .into_iter()
        .map(|[a, b]| (a, b))
        .collect();
    Ok(CoefficientModel::Custom(CustomModel::new(head, tail)))
}

pub fn load_model_file(path: &Path) -> Result<CoefficientModel> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_model_file(&text).with_context(|| format!("in {}", path.display()))
}

/// Validates the first `prefix` coefficients and returns any notes.
pub fn check(model: &CoefficientModel, prefix: usize) -> Result<Vec<&'static str>> {
    Ok(validate_model(model, prefix)?.notes)
}

/// Parses one component of a second-kind seed: a number, optionally followed
/// by `a0` (meaning "times a_0"), e.g. `-0.5`, `3a0`, `-a0`.
fn seed_component(text: &str, a0: f64) -> Result<f64> {
    let text = text.trim();
    match text.strip_suffix("a0") {
        Some(coef) => {
            let c = match coef.trim() {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c
                    .trim_end_matches('*')
                    .parse::<f64>()
                    .with_context(|| format!("bad seed component '{text}'"))?,
            };
            Ok(c * a0)
        }
        None => text
            .parse()
            .with_context(|| format!("bad seed component '{text}'")),
    }
}

/// Parses `s,t` for the seed `P̂_1 = (s E + t)/b_0`.
pub fn parse_seed(text: &str, a0: f64) -> Result<(f64, f64)> {
    let Some((s, t)) = text.split_once(',') else {
        bail!("second-kind seed must be 's,t', got '{text}'");
    };
    Ok((seed_component(s, a0)?, seed_component(t, a0)?))
}
