//! JSON description files for modules over the Steenrod algebra.
//!
//! ```json
//! {
//!   "prime": 2,
//!   "generators": [{"name": "a", "degree": 0}, {"name": "b", "degree": 2}],
//!   "actions": [{"op": "Sq^2", "src": "a", "dst": {"b": 1}}],
//!   "window": [0, 10]
//! }
//! ```
//!
//! `dst` is either a single name or an object of name to integer
//! coefficient (reduced mod p, negatives allowed). Repeated `(op, src)`
//! entries are summed. `window` is optional and marks the module as a
//! truncation known only on that degree range.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::amodule::{AModule, ModuleBuilder};
use crate::error::{Error, Result};
use crate::gf::Prime;
use crate::steenrod::Gen;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDescription {
    pub prime: u32,
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub actions: Vec<ActionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub name: String,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionEntry {
    pub op: String,
    pub src: String,
    pub dst: Target,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Target {
    Name(String),
    Combination(BTreeMap<String, i64>),
}

impl ModuleDescription {
    pub fn from_json(text: &str) -> Result<ModuleDescription> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Builds the module. Bad names, operations that do not exist at the
    /// given prime and degree mismatches are reported as parse errors; the
    /// Adem relations are not checked here.
    pub fn build(&self) -> Result<AModule> {
        let p = Prime::new(self.prime).map_err(|e| Error::Parse(e.to_string()))?;
        let mut b = ModuleBuilder::new(p);
        for g in &self.generators {
            b = b.element(&g.name, g.degree);
        }
        for (k, a) in self.actions.iter().enumerate() {
            let g = Gen::parse(&a.op).ok_or_else(|| Error::Parse(format!("actions[{k}]: unknown operation {:?}", a.op)))?;
            if g.is_identity() || !g.valid_for(p) {
                return Err(Error::Parse(format!("actions[{k}]: {g} is not an operation at p = {p}")));
            }
            let dst: Vec<(&str, u32)> = match &a.dst {
                Target::Name(n) => vec![(n.as_str(), 1)],
                Target::Combination(c) => c.iter().map(|(n, &v)| (n.as_str(), p.reduce(v))).collect(),
            };
            b = b.action(g, &a.src, &dst);
        }
        if let Some((lo, hi)) = self.window {
            b = b.window(lo, hi);
        }
        b.build().map_err(|e| Error::Parse(e.to_string()))
    }

    /// Description of an existing module, listing every nonzero generator action.
    pub fn of_module(m: &AModule) -> ModuleDescription {
        let generators =
            (0..m.dim()).map(|i| GeneratorEntry { name: m.name_of(i).to_string(), degree: m.degree_of(i) }).collect();
        let actions = m
            .action_table()
            .iter()
            .map(|((g, i), v)| ActionEntry {
                op: g.to_string(),
                src: m.name_of(*i).to_string(),
                dst: Target::Combination(v.iter().map(|(j, c)| (m.name_of(*j).to_string(), c as i64)).collect()),
            })
            .collect();
        ModuleDescription {
            prime: m.prime().value(),
            generators,
            actions,
            window: m.is_truncated().then(|| m.window()),
        }
    }
}

pub fn parse_module(text: &str) -> Result<AModule> {
    ModuleDescription::from_json(text)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture_modules;

    #[test]
    fn round_trip() {
        for p in [2, 3, 5] {
            for (name, m) in fixture_modules(Prime::new(p).unwrap(), 3, 3) {
                let text = ModuleDescription::of_module(&m).to_json();
                assert_eq!(parse_module(&text).unwrap(), m, "{name}");
            }
        }
    }

    #[test]
    fn errors() {
        let e = parse_module("{\"prime\": 2,\n \"generators\": [}").unwrap_err();
        assert!(e.to_string().contains("line 2 column"), "{e}");
        let bad_op = r#"{"prime": 2, "generators": [{"name": "a", "degree": 0}, {"name": "b", "degree": 4}],
            "actions": [{"op": "P^1", "src": "a", "dst": "b"}]}"#;
        assert!(matches!(parse_module(bad_op), Err(Error::Parse(_))));
        let bad_name = r#"{"prime": 3, "generators": [{"name": "a", "degree": 0}],
            "actions": [{"op": "beta", "src": "a", "dst": {"c": 2}}]}"#;
        assert!(matches!(parse_module(bad_name), Err(Error::Parse(_))));
        let ok = r#"{"prime": 3, "generators": [{"name": "a", "degree": 0}, {"name": "b", "degree": 1}],
            "actions": [{"op": "beta", "src": "a", "dst": {"b": -1}}]}"#;
        let m = parse_module(ok).unwrap();
        assert_eq!(m.render(m.action_table().values().next().unwrap()), "2*b");
    }
}
