//! JSON automaton files.
//!
//! ```json
//! {
//!   "alphabet": ["a", "b"],
//!   "states": ["p"],
//!   "initial": { "p": 0 },
//!   "final": { "p": 0 },
//!   "transitions": [{ "from": "p", "letter": "a", "weight": 1, "to": "p" }]
//! }
//! ```
//!
//! States missing from `initial` / `final` get weight `-∞`. Repeated
//! `(from, letter, to)` entries keep the largest weight.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::automaton::{AutomatonBuilder, MaxPlusAutomaton};
use crate::error::{Error, Result};
use crate::semiring::NmaxValue;
use crate::word::Alphabet;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomatonFile {
    alphabet: Vec<String>,
    states: Vec<String>,
    #[serde(default)]
    initial: BTreeMap<String, u64>,
    #[serde(default, rename = "final")]
    finals: BTreeMap<String, u64>,
    #[serde(default)]
    transitions: Vec<TransitionEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionEntry {
    from: String,
    letter: String,
    weight: u64,
    to: String,
}

pub fn from_json(text: &str) -> Result<MaxPlusAutomaton> {
    let file: AutomatonFile = serde_json::from_str(text)?;
    let alphabet = Alphabet::new(file.alphabet)?;
    let mut b = AutomatonBuilder::new(alphabet, file.states);
    for (q, w) in &file.initial {
        b = b.initial(q, *w)?;
    }
    for (q, w) in &file.finals {
        b = b.final_weight(q, *w)?;
    }
    for t in &file.transitions {
        b = b.transition(&t.from, &t.letter, t.weight, &t.to)?;
    }
    b.build()
}

pub fn load(path: impl AsRef<Path>) -> Result<MaxPlusAutomaton> {
    from_json(&std::fs::read_to_string(path)?)
}

fn weight(v: &NmaxValue) -> Result<Option<u64>> {
    match v {
        NmaxValue::NegInf => Ok(None),
        NmaxValue::Finite(x) => u64::try_from(x)
            .map(Some)
            .map_err(|_| Error::Overflow("writing a weight larger than 2^64")),
    }
}

pub fn to_json(aut: &MaxPlusAutomaton) -> Result<String> {
    let name = |q: usize| aut.state_name(q).to_string();
    let mut file = AutomatonFile {
        alphabet: aut.alphabet().names().to_vec(),
        states: aut.states().to_vec(),
        initial: BTreeMap::new(),
        finals: BTreeMap::new(),
        transitions: Vec::new(),
    };
    for q in 0..aut.num_states() {
        if let Some(w) = weight(&aut.initial()[q])? {
            file.initial.insert(name(q), w);
        }
        if let Some(w) = weight(&aut.finals()[q])? {
            file.finals.insert(name(q), w);
        }
    }
    for a in aut.alphabet().letters() {
        for (p, q, v) in aut.trans(a).entries() {
            if let Some(w) = weight(v)? {
                file.transitions.push(TransitionEntry {
                    from: name(p),
                    letter: aut.alphabet().name(a).to_string(),
                    weight: w,
                    to: name(q),
                });
            }
        }
    }
    Ok(serde_json::to_string_pretty(&file)?)
}

pub fn save(aut: &MaxPlusAutomaton, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json(aut)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{running_a, running_b};

    #[test]
    fn shipped_files_match_fixtures() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/automata");
        assert_eq!(load(format!("{dir}/running_a.json")).unwrap(), running_a());
        assert_eq!(load(format!("{dir}/running_b.json")).unwrap(), running_b());
    }

    #[test]
    fn round_trip() {
        for aut in [running_a(), running_b()] {
            assert_eq!(from_json(&to_json(&aut).unwrap()).unwrap(), aut);
        }
    }

    #[test]
    fn duplicates_are_max_merged() {
        let aut = from_json(
            r#"{"alphabet":["a"],"states":["p"],"initial":{"p":0},
                "transitions":[{"from":"p","letter":"a","weight":2,"to":"p"},
                               {"from":"p","letter":"a","weight":5,"to":"p"}]}"#,
        )
        .unwrap();
        assert_eq!(*aut.trans(0).get(0, 0), NmaxValue::from(5));
        assert!(aut.final_states().next().is_none());
    }

    #[test]
    fn rejects_bad_files() {
        assert!(from_json("{}").is_err());
        assert!(matches!(
            from_json(r#"{"alphabet":["a"],"states":["p"],"initial":{"x":0}}"#),
            Err(Error::InvalidAutomaton(_))
        ));
        assert!(matches!(
            from_json(r#"{"alphabet":["a"],"states":["p"],
                "transitions":[{"from":"p","letter":"z","weight":0,"to":"p"}]}"#),
            Err(Error::UnknownLetter(_))
        ));
        assert!(from_json(r#"{"alphabet":["a"],"states":["p"],"initial":{"p":-1}}"#).is_err());
    }
}
