//! Machine- and human-readable run reports.
//!
//! The JSON rendering is stable: struct field order is fixed, sets are
//! sorted, and nothing time-dependent is included, so identical inputs and
//! flags produce byte-identical output.

use serde::{Deserialize, Serialize};

use crate::graded::{GradedGroup, GradedValue};
use crate::spectrum::{AxiomCheck, SpecSubset};

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<String>,
    pub result: ResultPayload,
    pub unrepresentable: Vec<String>,
    pub properties: Vec<PropertyOutcome>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(untagged)]
pub enum ResultPayload {
    Graded { deg0: String, deg1: String },
    Set { set: SetPayload },
    Bool { bool: bool },
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(untagged)]
pub enum SetPayload {
    All(String),
    Points(Vec<u64>),
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct PropertyOutcome {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl From<&SpecSubset> for SetPayload {
    fn from(s: &SpecSubset) -> Self {
        match s {
            SpecSubset::All => SetPayload::All("all".to_string()),
            SpecSubset::Fin(points) => {
                SetPayload::Points(points.iter().map(|p| p.as_u64()).collect())
            }
        }
    }
}

impl From<&AxiomCheck> for PropertyOutcome {
    fn from(c: &AxiomCheck) -> Self {
        PropertyOutcome {
            name: c.name.clone(),
            pass: c.pass,
            witness: c.counterexample.clone(),
        }
    }
}

impl RunReport {
    pub fn new(command: &str, inputs: Vec<String>, result: ResultPayload) -> Self {
        RunReport {
            command: command.to_string(),
            inputs,
            result,
            unrepresentable: Vec::new(),
            properties: Vec::new(),
        }
    }

    pub fn graded_value(command: &str, inputs: Vec<String>, v: &GradedValue) -> Self {
        let mut r = RunReport::new(
            command,
            inputs,
            ResultPayload::Graded {
                deg0: v.deg0.to_string(),
                deg1: v.deg1.to_string(),
            },
        );
        r.unrepresentable = v.unrepresentable_tags();
        r
    }

    pub fn graded_group(command: &str, inputs: Vec<String>, g: &GradedGroup) -> Self {
        RunReport::new(
            command,
            inputs,
            ResultPayload::Graded {
                deg0: g.deg0.to_string(),
                deg1: g.deg1.to_string(),
            },
        )
    }

    pub fn set(command: &str, inputs: Vec<String>, s: &SpecSubset) -> Self {
        RunReport::new(command, inputs, ResultPayload::Set { set: s.into() })
    }

    pub fn boolean(command: &str, inputs: Vec<String>, b: bool) -> Self {
        RunReport::new(command, inputs, ResultPayload::Bool { bool: b })
    }

    pub fn with_properties(mut self, checks: &[AxiomCheck]) -> Self {
        self.properties.extend(checks.iter().map(Into::into));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Human rendering with the same content as the JSON.
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        if self.inputs.is_empty() {
            out.push_str(&format!("{}\n", self.command));
        } else {
            out.push_str(&format!("{}({})\n", self.command, self.inputs.join(", ")));
        }
        match &self.result {
            ResultPayload::Graded { deg0, deg1 } => {
                out.push_str(&format!("deg 0: {deg0}\ndeg 1: {deg1}\n"));
            }
            ResultPayload::Set { set } => match set {
                SetPayload::All(_) => out.push_str("all\n"),
                SetPayload::Points(ps) => {
                    let rendered: Vec<String> = ps.iter().map(u64::to_string).collect();
                    out.push_str(&format!("{{{}}}\n", rendered.join(", ")));
                }
            },
            ResultPayload::Bool { bool: b } => out.push_str(&format!("{b}\n")),
        }
        if !self.unrepresentable.is_empty() {
            out.push_str(&format!(
                "unrepresentable: {}\n",
                self.unrepresentable.join(", ")
            ));
        }
        for p in &self.properties {
            let status = if p.pass { "pass" } else { "FAIL" };
            match &p.witness {
                Some(w) => out.push_str(&format!("[{status}] {} ({w})\n", p.name)),
                None => out.push_str(&format!("[{status}] {}\n", p.name)),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::SpecPoint;

    #[test]
    fn json_round_trips() {
        let report = RunReport::set(
            "support",
            vec!["moore(12)".to_string()],
            &SpecSubset::points(&[SpecPoint::prime(2), SpecPoint::prime(3)]),
        );
        let json = report.to_json();
        let back: RunReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn all_set_payload() {
        let report = RunReport::set("support", vec!["unit".into()], &SpecSubset::All);
        assert!(report.to_json().contains("\"set\":\"all\""));
    }
}
