//! Model specification files.
//!
//! ```json
//! {"k": 2, "components": [
//!   {"family": "pareto", "params": {"p": 2}, "scale": 3.0, "repeat": 100},
//!   {"family": "atomic", "params": {"atoms": [[1, 0.5], [2, 0.5]]}}
//! ]}
//! ```

use ordstat_core::{Distribution, OrderStatModel};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::CliError;

pub const KNOWN_FAMILIES: [&str; 6] = [
    "uniform01",
    "pareto",
    "exponential",
    "half_gaussian",
    "piecewise_linear",
    "atomic",
];

/// Guard against specs that would expand beyond memory.
pub const MAX_COMPONENTS: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub k: usize,
    pub components: Vec<ComponentSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub family: String,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default = "unit_scale")]
    pub scale: f64,
    #[serde(default = "single")]
    pub repeat: usize,
}

fn unit_scale() -> f64 {
    1.0
}

fn single() -> usize {
    1
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

struct Params<'a> {
    family: &'a str,
    map: &'a Map<String, Value>,
}

impl Params<'_> {
    fn expect_only(&self, allowed: &[&str]) -> Result<(), CliError> {
        match self.map.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(usage(format!(
                "{}: unknown parameter {k:?}, expected {allowed:?}",
                self.family
            ))),
            None => Ok(()),
        }
    }

    fn real(&self, name: &str) -> Result<f64, CliError> {
        self.map
            .get(name)
            .and_then(Value::as_f64)
            .ok_or_else(|| usage(format!("{}: parameter {name:?} must be a number", self.family)))
    }

    fn pairs(&self, name: &str) -> Result<Vec<(f64, f64)>, CliError> {
        let bad = || usage(format!("{}: parameter {name:?} must be a list of [x, y] pairs", self.family));
        let list = self.map.get(name).and_then(Value::as_array).ok_or_else(bad)?;
        list.iter()
            .map(|pair| match pair.as_array().map(Vec::as_slice) {
                Some([a, b]) => Ok((a.as_f64().ok_or_else(bad)?, b.as_f64().ok_or_else(bad)?)),
                _ => Err(bad()),
            })
            .collect()
    }
}

/// Builds one law from a family name, its parameters and a scale.
pub fn law(family: &str, params: &Map<String, Value>, scale: f64) -> Result<Distribution, CliError> {
    let p = Params { family, map: params };
    let base = match family {
        "uniform01" => {
            p.expect_only(&[])?;
            Distribution::uniform01()
        }
        "pareto" => {
            p.expect_only(&["p"])?;
            Distribution::pareto(p.real("p")?)?
        }
        "exponential" => {
            p.expect_only(&["rate"])?;
            Distribution::exponential(p.real("rate")?)?
        }
        "half_gaussian" => {
            p.expect_only(&["sigma"])?;
            Distribution::half_gaussian(p.real("sigma")?)?
        }
        "piecewise_linear" => {
            p.expect_only(&["knots"])?;
            Distribution::piecewise_linear(p.pairs("knots")?)?
        }
        "atomic" => {
            p.expect_only(&["atoms"])?;
            Distribution::atomic(p.pairs("atoms")?)?
        }
        other => {
            return Err(usage(format!(
                "unknown family {other:?}; known families: {}",
                KNOWN_FAMILIES.join(", ")
            )))
        }
    };
    Ok(base.scaled(scale)?)
}

impl ComponentSpec {
    pub fn law(&self) -> Result<Distribution, CliError> {
        law(&self.family, &self.params, self.scale)
    }
}

impl ModelSpec {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| usage(format!("model spec: {e}")))
    }

    pub fn model(&self) -> Result<OrderStatModel, CliError> {
        if let Some(c) = self.components.iter().find(|c| c.repeat == 0) {
            return Err(usage(format!("{}: repeat must be at least 1", c.family)));
        }
        let n = self
            .components
            .iter()
            .try_fold(0usize, |acc, c| acc.checked_add(c.repeat))
            .filter(|&n| n <= MAX_COMPONENTS)
            .ok_or_else(|| usage(format!("model expands to more than {MAX_COMPONENTS} components")))?;
        let mut laws = Vec::with_capacity(n);
        for c in &self.components {
            let d = c.law()?;
            laws.extend(std::iter::repeat_n(d, c.repeat));
        }
        Ok(OrderStatModel::new(laws, self.k)?)
    }
}
