//! Certificate records.

use serde::Serialize;
use serde_json::Value;

use crate::algebra::Submodule;
use crate::forms::Form;
use crate::ring::modular::failure_bound_log2;
use crate::ring::{Coefficient, DEFAULT_PRIME};

pub const CERT_SCHEMA_VERSION: u32 = 1;

/// Exact expansion or randomized evaluation in `F_p`, `p = 2^61 - 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Exact,
    Modular { trials: u32, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModeRecord {
    Exact,
    Modular {
        label: &'static str,
        prime: u64,
        trials: u32,
        seed: u64,
        failure_bound_log2: f64,
    },
}

impl ModeRecord {
    pub fn new(mode: Mode, degree: usize) -> Self {
        match mode {
            Mode::Exact => ModeRecord::Exact,
            Mode::Modular { trials, seed } => ModeRecord::Modular {
                label: "probabilistic",
                prime: DEFAULT_PRIME,
                trials,
                seed,
                failure_bound_log2: failure_bound_log2(degree.max(1) as u32, DEFAULT_PRIME, trials),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertKind {
    NilBound,
    NilDegree,
    WeakNil,
    Solv,
}

/// A nonzero term of an expanded product.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    /// Factor power or component tuple that produced the term.
    pub factors: Vec<String>,
    pub tree: String,
    pub monomial: Vec<usize>,
    pub basis_index: usize,
    pub basis: String,
    /// Polynomial (exact) or field element (modular).
    pub coeff: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<u32>,
}

impl Witness {
    pub(crate) fn from_form<C: Coefficient>(
        f: &Form<C>,
        factors: Vec<String>,
        tree: String,
        trial: Option<u32>,
    ) -> Option<Witness> {
        let ((m, i), c) = f.first_term()?;
        Some(Witness {
            factors,
            tree,
            monomial: m.indices(),
            basis_index: *i,
            basis: f.algebra().label(*i).to_string(),
            coeff: c.to_json(),
            trial,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Refuted { witness: Box<Witness> },
    /// The span condition of a decomposition fails.
    SpanFailure { missing: Vec<String> },
    Degenerate,
    /// No certified bound up to the requested maximum.
    Exceeded { s_max: usize, witness: Box<Witness> },
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified)
    }

    pub fn is_refutation(&self) -> bool {
        matches!(
            self,
            Verdict::Refuted { .. } | Verdict::SpanFailure { .. } | Verdict::Exceeded { .. }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Subject {
    pub algebra: String,
    pub fingerprint: String,
    pub dim: usize,
    pub basis: Value,
}

impl Subject {
    pub fn of(v: &Submodule) -> Self {
        Subject {
            algebra: v.parent().display_name(),
            fingerprint: v.parent().fingerprint(),
            dim: v.dim(),
            basis: v.to_json(),
        }
    }
}

/// Verdict for one product shape in a weak nilpotency check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentVerdict {
    pub components: Vec<String>,
    pub tree: String,
    pub vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NilCertificate {
    pub schema_version: u32,
    pub engine_version: &'static str,
    pub kind: CertKind,
    pub subject: Subject,
    pub k: usize,
    pub s: usize,
    pub generators: usize,
    pub mode: ModeRecord,
    pub verdict: Verdict,
    pub paren_trees: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annotation: Option<&'static str>,
    /// Exact degree for `nil_degree`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    /// Nonzero term of the power `s` for `nil_degree`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonvanishing_witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<ComponentVerdict>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<NilCertificate>,
}

impl NilCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict.is_certified()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("certificate serializes")
    }
}
