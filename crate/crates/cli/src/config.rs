//! Scenario files: one JSON object per scenario.
//!
//! Parsing goes field by field so every diagnostic names the field at fault.

use serde_json::{Map, Value};
use steerlab::criteria::{Bound, Scenario};
use steerlab::io::DensityJson;
use steerlab::solvers::{StateSource, SweepScenario};
use steerlab::{EtaScaling, StateFamilySpec, Weights};

const FIELDS: &[&str] = &["scenario", "state", "xi", "weights", "basis", "seed", "bound", "eta_scaling"];

#[derive(Debug)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "field `{}`: {}", self.field, self.message)
    }
}

fn fail<T>(field: &str, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        field: field.to_owned(),
        message: message.into(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisChoice {
    GellMann,
    Pauli,
}

#[derive(Debug)]
pub struct ScenarioConfig {
    pub scenario: SweepScenario<f64>,
    pub basis: BasisChoice,
    pub seed: u64,
}

fn scenario_tag(tag: &str) -> Option<Scenario> {
    Some(match tag {
        "bipartite_A_to_B" => Scenario::AToB,
        "bipartite_B_to_A" => Scenario::BToA,
        "tripartite_A_to_BC" => Scenario::AToBC,
        "tripartite_BC_to_A" => Scenario::BCToA,
        _ => return None,
    })
}

fn string_field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<Option<&'a str>, ConfigError> {
    match obj.get(name) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(other) => fail(name, format!("expected a string, got {other}")),
    }
}

fn parse_state(value: &Value) -> Result<(StateSource<f64>, Vec<usize>), ConfigError> {
    if let Some(density) = value.get("density") {
        if value.as_object().map_or(0, Map::len) != 1 {
            return fail("state", "an inline density takes no other keys");
        }
        let json: DensityJson = serde_json::from_value(density.clone())
            .or_else(|e| fail("state.density", e.to_string()))?;
        let rho = json.to_state::<f64>().or_else(|e| fail("state.density", e.to_string()))?;
        let parts = rho.dims().parts().to_vec();
        return Ok((StateSource::Fixed(rho), parts));
    }
    let spec: StateFamilySpec = serde_json::from_value(value.clone()).or_else(|e| fail("state", e.to_string()))?;
    // build once up front so parameter errors surface here
    let rho = spec.build::<f64>().or_else(|e| fail("state", e.to_string()))?;
    Ok((StateSource::Family(spec), rho.dims().parts().to_vec()))
}

pub fn parse(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let root: Value = serde_json::from_str(text).or_else(|e| fail("<root>", format!("malformed JSON: {e}")))?;
    let Value::Object(obj) = root else {
        return fail("<root>", "expected a JSON object");
    };
    if let Some(unknown) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
        return fail(unknown, "unknown field");
    }

    let Some(tag) = string_field(&obj, "scenario")? else {
        return fail("scenario", "missing");
    };
    let Some(scenario) = scenario_tag(tag) else {
        return fail(
            "scenario",
            format!("`{tag}` is not one of bipartite_A_to_B, bipartite_B_to_A, tripartite_A_to_BC, tripartite_BC_to_A"),
        );
    };

    let Some(state_value) = obj.get("state") else {
        return fail("state", "missing");
    };
    let (state, parts) = parse_state(state_value)?;
    if parts.len() != scenario.parties() {
        return fail(
            "scenario",
            format!("{tag} needs {} subsystems but the state has dims {parts:?}", scenario.parties()),
        );
    }

    let xi = match obj.get("xi") {
        None => return fail("xi", "missing"),
        Some(v) => match v.as_f64() {
            Some(x) if x.is_finite() && x >= 0.0 => x,
            Some(x) => return fail("xi", format!("must be finite and non-negative, got {x}")),
            None => return fail("xi", format!("expected a number, got {v}")),
        },
    };

    let basis = match string_field(&obj, "basis")?.unwrap_or("gell_mann") {
        "gell_mann" => BasisChoice::GellMann,
        "pauli" => {
            if parts.iter().any(|&d| d != 2) {
                return fail("basis", format!("pauli needs qubits, state has dims {parts:?}"));
            }
            BasisChoice::Pauli
        }
        other => return fail("basis", format!("`{other}` is not gell_mann or pauli")),
    };

    let seed = match obj.get("seed") {
        None => 0,
        Some(v) => match v.as_u64() {
            Some(s) => s,
            None => return fail("seed", format!("expected a non-negative integer, got {v}")),
        },
    };

    let bound = match string_field(&obj, "bound")? {
        None => Bound::default(),
        Some(s) => s.parse::<Bound>().or_else(|e| fail("bound", e))?,
    };
    let scaling = match string_field(&obj, "eta_scaling")? {
        None => EtaScaling::default(),
        Some(s) => s.parse::<EtaScaling>().or_else(|e| fail("eta_scaling", e))?,
    };

    let weights = match obj.get("weights") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let values: Vec<f64> = serde_json::from_value(v.clone())
                .or_else(|_| fail("weights", format!("expected an array of numbers, got {v}")))?;
            if bound != Bound::Weighted {
                return fail("weights", "weights are only used with \"bound\": \"weighted\"");
            }
            let d = match scenario {
                Scenario::BToA => parts[1],
                _ => parts[0],
            };
            if values.len() != d * d {
                return fail(
                    "weights",
                    format!("expected {} weights (one per observable), got {}", d * d, values.len()),
                );
            }
            Some(Weights::new(values).or_else(|e| fail("weights", e.to_string()))?)
        }
    };
    if bound == Bound::Weighted && scenario.parties() != 2 {
        return fail("bound", "the weighted bound is bipartite only");
    }

    let mut sweep = SweepScenario::new(scenario, state);
    sweep.xi = xi;
    sweep.bound = bound;
    sweep.scaling = scaling;
    sweep.weights = weights;
    Ok(ScenarioConfig {
        scenario: sweep,
        basis,
        seed,
    })
}
