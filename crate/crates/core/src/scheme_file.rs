//! JSON persistence for generated schemes.
//!
//! Output is compact with a fixed key order, so loading and saving again
//! reproduces the file byte for byte.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{BigIndex, Modulus};
use crate::evaluator::{eval_auto, eval_linear, seq_auto, seq_linear};
use crate::expr::{default_vars, format_mod, parse_with_vars, validate_vars};
use crate::laurent::ModLaurentPoly;
use crate::scheme_auto::{AutoScheme, Target};
use crate::scheme_linear::LinearScheme;

pub const FORMAT_TAG: &str = "ct-scheme";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SchemeFileError {
    #[error("I/O error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("not a scheme file (format tag {0:?})")]
    Format(String),
    #[error("unsupported scheme file version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error("invalid scheme: {0}")]
    Invalid(String),
}

/// Either kind of generated scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scheme {
    Auto(AutoScheme),
    Linear(LinearScheme),
}

impl Scheme {
    pub fn modulus(&self) -> Modulus {
        match self {
            Scheme::Auto(s) => s.modulus(),
            Scheme::Linear(s) => s.modulus(),
        }
    }

    pub fn state_count(&self) -> usize {
        match self {
            Scheme::Auto(s) => s.state_count(),
            Scheme::Linear(s) => s.state_count(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Scheme::Auto(_) => "auto",
            Scheme::Linear(_) => "linear",
        }
    }

    pub fn defs(&self) -> Option<&[(ModLaurentPoly, ModLaurentPoly)]> {
        match self {
            Scheme::Auto(s) => s.defs(),
            Scheme::Linear(s) => s.defs(),
        }
    }

    pub fn eval(&self, n: &BigIndex) -> u64 {
        match self {
            Scheme::Auto(s) => eval_auto(s, n),
            Scheme::Linear(s) => eval_linear(s, n),
        }
    }

    pub fn seq(&self, count: usize) -> Vec<u64> {
        match self {
            Scheme::Auto(s) => seq_auto(s, count),
            Scheme::Linear(s) => seq_linear(s, count),
        }
    }
}

impl From<AutoScheme> for Scheme {
    fn from(s: AutoScheme) -> Self {
        Scheme::Auto(s)
    }
}

impl From<LinearScheme> for Scheme {
    fn from(s: LinearScheme) -> Self {
        Scheme::Linear(s)
    }
}

/// The definition a scheme was generated from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Source {
    #[serde(rename = "P")]
    pub p: String,
    #[serde(rename = "Q")]
    pub q: String,
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Defs {
    vars: Vec<String>,
    pairs: Vec<(String, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    format: String,
    version: u32,
    kind: String,
    p: u64,
    a: u32,
    modulus: u64,
    states: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    transitions: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrices: Option<Vec<Vec<Vec<u64>>>>,
    initial: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    defs: Option<Defs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source: Option<Source>,
}

/// A scheme together with the variable names for its definitions and,
/// optionally, the definition it was generated from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeFile {
    pub scheme: Scheme,
    pub vars: Vec<String>,
    pub source: Option<Source>,
}

impl SchemeFile {
    pub fn new(scheme: Scheme, source: Option<Source>) -> Self {
        let arity = scheme.defs().and_then(|d| d.first()).map_or(1, |(p, _)| p.arity());
        let vars = match &source {
            Some(s) if s.vars.len() == arity => s.vars.clone(),
            _ => default_vars(arity),
        };
        SchemeFile { scheme, vars, source }
    }

    pub fn to_json(&self) -> String {
        let m = self.scheme.modulus();
        let (transitions, matrices, initial) = match &self.scheme {
            Scheme::Auto(s) => (Some(s.encoded_transitions()), None, s.initial().to_vec()),
            Scheme::Linear(s) => (None, Some(s.matrices().to_vec()), s.initial().to_vec()),
        };
        let defs = self.scheme.defs().map(|d| Defs {
            vars: self.vars.clone(),
            pairs: d
                .iter()
                .map(|(p, q)| (format_mod(p, &self.vars), format_mod(q, &self.vars)))
                .collect(),
        });
        let doc = Document {
            format: FORMAT_TAG.into(),
            version: FORMAT_VERSION,
            kind: self.scheme.kind().into(),
            p: m.p(),
            a: m.a(),
            modulus: m.value(),
            states: self.scheme.state_count(),
            transitions,
            matrices,
            initial,
            defs,
            source: self.source.clone(),
        };
        let mut text = serde_json::to_string(&doc).expect("scheme documents serialize");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, SchemeFileError> {
        let doc: Document = serde_json::from_str(text).map_err(|e| SchemeFileError::Parse {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })?;
        if doc.format != FORMAT_TAG {
            return Err(SchemeFileError::Format(doc.format));
        }
        if doc.version != FORMAT_VERSION {
            return Err(SchemeFileError::Version(doc.version));
        }
        let invalid = |msg: String| SchemeFileError::Invalid(msg);
        let m = Modulus::new(doc.p, doc.a).map_err(|e| invalid(e.to_string()))?;
        if m.value() != doc.modulus {
            return Err(invalid(format!("modulus {} is not {}^{}", doc.modulus, doc.p, doc.a)));
        }
        if doc.initial.len() != doc.states {
            return Err(invalid(format!("{} initial values for {} states", doc.initial.len(), doc.states)));
        }
        let (defs, vars) = match doc.defs {
            None => (None, None),
            Some(d) => {
                validate_vars(&d.vars).map_err(|e| invalid(e.to_string()))?;
                let mut pairs = Vec::with_capacity(d.pairs.len());
                for (i, (p, q)) in d.pairs.iter().enumerate() {
                    let parse = |s: &str| {
                        parse_with_vars(s, &d.vars)
                            .map(|poly| poly.reduce_mod(m))
                            .map_err(|e| invalid(format!("definition of state {}: {e}", i + 1)))
                    };
                    pairs.push((parse(p)?, parse(q)?));
                }
                (Some(pairs), Some(d.vars))
            }
        };
        let scheme = match (doc.kind.as_str(), doc.transitions, doc.matrices) {
            ("auto", Some(t), None) => {
                let transitions = t
                    .into_iter()
                    .map(|row| row.into_iter().map(Target::decode).collect())
                    .collect();
                Scheme::Auto(AutoScheme::new(m, transitions, doc.initial, defs).map_err(|e| invalid(e.0))?)
            }
            ("linear", None, Some(mats)) => {
                Scheme::Linear(LinearScheme::new(m, mats, doc.initial, defs).map_err(|e| invalid(e.0))?)
            }
            ("auto", ..) => return Err(invalid("an automatic scheme needs transitions and no matrices".into())),
            ("linear", ..) => return Err(invalid("a linear scheme needs matrices and no transitions".into())),
            (other, ..) => return Err(invalid(format!("unknown scheme kind {other:?}"))),
        };
        if scheme.state_count() != doc.states {
            return Err(invalid(format!("{} states declared, {} present", doc.states, scheme.state_count())));
        }
        let mut file = SchemeFile::new(scheme, doc.source);
        if let Some(v) = vars {
            file.vars = v;
        }
        Ok(file)
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> SchemeFileError + '_ {
    move |source| SchemeFileError::Io { path: path.display().to_string(), source }
}

/// Writes the file atomically: a temporary sibling is renamed into place.
pub fn save_scheme(file: &SchemeFile, path: &Path) -> Result<(), SchemeFileError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_error(path))?;
    tmp.write_all(file.to_json().as_bytes()).map_err(io_error(path))?;
    tmp.persist(path).map_err(|e| io_error(path)(e.error))?;
    Ok(())
}

pub fn load_scheme(path: &Path) -> Result<SchemeFile, SchemeFileError> {
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    SchemeFile::from_json(&text)
}
