//! JSON problem files: an architecture plus a list of LTL conjuncts.
//!
//! ```json
//! {"processes": [{"name": "p", "inputs": ["i"], "outputs": ["o"]}],
//!  "env_outputs": ["i"],
//!  "conjuncts": ["G (X o <-> i)"]}
//! ```

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::architecture::{Architecture, Process};
use crate::logic::{parse_ltl, ConjunctiveSpec, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub processes: Vec<Process>,
    pub env_outputs: BTreeSet<String>,
    pub conjuncts: Vec<String>,
}

#[derive(Debug, Error)]
pub enum SpecFileError {
    #[error("cannot read or write `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed specification file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("conjunct {index}: {source}")]
    Formula {
        index: usize,
        #[source]
        source: ParseError,
    },
}

impl SpecFile {
    pub fn new(arch: &Architecture, spec: &ConjunctiveSpec) -> Self {
        SpecFile {
            processes: arch.processes.clone(),
            env_outputs: arch.env_outputs.clone(),
            conjuncts: spec.conjuncts.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, SpecFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data") + "\n"
    }

    pub fn load(path: &Path) -> Result<Self, SpecFileError> {
        let text = fs::read_to_string(path).map_err(|source| SpecFileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<(), SpecFileError> {
        fs::write(path, self.to_json()).map_err(|source| SpecFileError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn architecture(&self) -> Architecture {
        Architecture {
            processes: self.processes.clone(),
            env_outputs: self.env_outputs.clone(),
        }
    }

    pub fn spec(&self) -> Result<ConjunctiveSpec, SpecFileError> {
        let conjuncts = self
            .conjuncts
            .iter()
            .enumerate()
            .map(|(index, text)| parse_ltl(text).map_err(|source| SpecFileError::Formula { index, source }))
            .collect::<Result<_, _>>()?;
        Ok(ConjunctiveSpec::new(conjuncts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ROBOTS: &str = r#"{
  "processes": [
    {"name": "r_1", "inputs": ["at_crossing_1", "at_crossing_2", "go_2"], "outputs": ["go_1", "m_1"]},
    {"name": "r_2", "inputs": ["at_crossing_1", "at_crossing_2", "go_1"], "outputs": ["go_2", "m_2"]}
  ],
  "env_outputs": ["at_crossing_1", "at_crossing_2"],
  "conjuncts": ["G !((at_crossing_1 && X go_1) && (at_crossing_2 && X go_2))"]
}"#;

    #[test]
    fn load_save_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("robots.json");
        let first = SpecFile::from_json(ROBOTS).unwrap();
        first.save(&path).unwrap();
        let second = SpecFile::load(&path).unwrap();
        assert_eq!(first, second);
        assert_eq!(second.architecture().len(), 2);
        assert_eq!(second.spec().unwrap().len(), 1);
    }

    #[test]
    fn rebuilt_from_parsed_parts() {
        let file = SpecFile::from_json(ROBOTS).unwrap();
        let again = SpecFile::new(&file.architecture(), &file.spec().unwrap());
        assert_eq!(again.spec().unwrap(), file.spec().unwrap());
    }

    #[test]
    fn errors_name_their_cause() {
        assert!(matches!(SpecFile::from_json("{"), Err(SpecFileError::Json(_))));
        assert!(matches!(
            SpecFile::from_json(r#"{"processes": [], "env_outputs": [], "conjuncts": [], "extra": 1}"#),
            Err(SpecFileError::Json(_))
        ));
        let bad = SpecFile::from_json(r#"{"processes": [], "env_outputs": [], "conjuncts": ["G x", "x &&"]}"#).unwrap();
        assert!(matches!(bad.spec(), Err(SpecFileError::Formula { index: 1, .. })));
        assert!(matches!(
            SpecFile::load(Path::new("/nonexistent/spec.json")),
            Err(SpecFileError::Io { .. })
        ));
    }
}
