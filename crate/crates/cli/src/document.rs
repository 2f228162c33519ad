//! The JSON result document, schema version "1".

use binoc_core::fiber::MonoidPrime;
use binoc_core::mesoprimary::{mesoprime, Component};
use binoc_core::parse::IdealFile;
use binoc_core::poly::{monomial_string, Exponent};
use binoc_core::{Field, Ideal, Polynomial, Result};
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "1";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ResultDocument {
    pub schema: String,
    pub tool: Tool,
    pub input: InputEcho,
    pub mode: String,
    pub pruned: bool,
    pub components: Vec<ComponentDoc>,
    pub certificate: CertificateDoc,
    pub failures: Vec<FailureDoc>,
    pub skipped_primes: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ReportDoc>,
    pub timing: Timing,
}

/// Search for a decomposition into binomial irreducible ideals.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ReportDoc {
    pub verdict: String,
    /// Witnesses of the components with socle of dimension above one.
    pub bad: Vec<String>,
    pub omittable: Vec<bool>,
    pub decomposition: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

impl Default for Tool {
    fn default() -> Self {
        Tool {
            name: "binoc".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct InputEcho {
    pub ring: Vec<String>,
    pub characteristic: u64,
    pub generators: Vec<String>,
}

impl InputEcho {
    pub fn new(file: &IdealFile) -> Self {
        InputEcho {
            ring: file.names.clone(),
            characteristic: file.characteristic,
            generators: file.generators.iter().map(|g| g.to_string_with(&file.names)).collect(),
        }
    }

    /// Text in the ideal file format.
    pub fn to_text(&self) -> String {
        format!(
            "ring {}\nchar {}\nideal\n{}\n",
            self.ring.join(" "),
            self.characteristic,
            self.generators.join(",\n")
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComponentDoc {
    pub kind: String,
    pub prime: Vec<String>,
    pub witness: String,
    pub witness_kind: String,
    pub generators: Vec<String>,
    pub mesoprime: Vec<String>,
    pub flags: Flags,
    pub socle_dim: Option<usize>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct Flags {
    pub primary: Option<bool>,
    pub mesoprimary: Option<bool>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct CertificateDoc {
    pub criterion: String,
    pub verdict: bool,
    pub socle_injectivity: Option<bool>,
    pub socle_failures: Vec<SocleFailureDoc>,
    pub mesoprimary: Option<bool>,
    pub combinatorial: Option<bool>,
    pub bounds: Option<Vec<u32>>,
    pub counterexample: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SocleFailureDoc {
    pub prime: Vec<String>,
    pub element: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FailureDoc {
    pub prime: Vec<String>,
    pub witness: String,
    pub error: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct Timing {
    pub elapsed_ms: u64,
    pub jobs: usize,
}

pub fn prime_names(p: &MonoidPrime, names: &[String]) -> Vec<String> {
    p.names(names)
}

pub fn monomial(e: &Exponent, names: &[String]) -> String {
    monomial_string(e, names)
}

pub fn ideal_strings<F: Field>(i: &Ideal<F>, names: &[String]) -> Result<Vec<String>> {
    i.canonical_strings(names)
}

pub fn polynomial_string<F: Field>(p: &Polynomial<F>, names: &[String]) -> String {
    p.to_string_with(names)
}

pub fn component_doc<F: Field>(c: &Component<F>, names: &[String], mesoprimary: Option<bool>) -> Result<ComponentDoc> {
    Ok(ComponentDoc {
        kind: c.kind.as_str().into(),
        prime: prime_names(&c.prime, names),
        witness: monomial(&c.witness, names),
        witness_kind: c.witness_kind.as_str().into(),
        generators: ideal_strings(&c.generators, names)?,
        mesoprime: ideal_strings(&mesoprime(&c.mesoprime, &c.generators.one())?, names)?,
        flags: Flags {
            primary: c.is_primary,
            mesoprimary,
        },
        socle_dim: c.socle_dim,
    })
}
