//! Exhaustive verification of the φ-prime results over families of contexts.
//!
//! Wherever a statement depends on φ only through the value `φ(P)`, the
//! verifier ranges over every admissible value (the empty set and every
//! submodule of `P`), which covers all φ functions at once.

mod classify;
mod hunt;
mod suite;
mod sweep;
mod verifiers;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::module::ModuleCtx;

pub use classify::classify_all;
pub use hunt::{hunt_counterexamples, HuntFamily, HuntQuestion};
pub use suite::{block_suite, product_suite, regular_suite, standard_suite};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    T2_1,
    C2_2,
    C2_3,
    C2_4,
    C2_5,
    P2_6,
    T2_7,
    C2_8,
    P2_9,
    T2_10,
    T2_11,
    T2_12i,
    T2_12ii,
    T2_13,
    RemarkA,
    Chain,
}

impl TheoremId {
    pub const ALL: [TheoremId; 16] = [
        TheoremId::T2_1,
        TheoremId::C2_2,
        TheoremId::C2_3,
        TheoremId::C2_4,
        TheoremId::C2_5,
        TheoremId::P2_6,
        TheoremId::T2_7,
        TheoremId::C2_8,
        TheoremId::P2_9,
        TheoremId::T2_10,
        TheoremId::T2_11,
        TheoremId::T2_12i,
        TheoremId::T2_12ii,
        TheoremId::T2_13,
        TheoremId::RemarkA,
        TheoremId::Chain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::T2_1 => "T2.1",
            TheoremId::C2_2 => "C2.2",
            TheoremId::C2_3 => "C2.3",
            TheoremId::C2_4 => "C2.4",
            TheoremId::C2_5 => "C2.5",
            TheoremId::P2_6 => "P2.6",
            TheoremId::T2_7 => "T2.7",
            TheoremId::C2_8 => "C2.8",
            TheoremId::P2_9 => "P2.9",
            TheoremId::T2_10 => "T2.10",
            TheoremId::T2_11 => "T2.11",
            TheoremId::T2_12i => "T2.12i",
            TheoremId::T2_12ii => "T2.12ii",
            TheoremId::T2_13 => "T2.13",
            TheoremId::RemarkA => "RemarkA",
            TheoremId::Chain => "Chain",
        }
    }

    /// The implication being checked, in one line.
    pub fn schema(self) -> &'static str {
        match self {
            TheoremId::T2_1 => "P φ-prime and (P:M)P ⊄ φ(P) ⇒ P prime",
            TheoremId::C2_2 => "P weak prime and (P:M)P ≠ 0 ⇒ P prime",
            TheoremId::C2_3 => "P φ-prime and φ(P) ⊆ (P:M)²P ⇒ P φ_ω-prime",
            TheoremId::C2_4 => "P φ-prime ⇒ (P:M) and √(φ(P):M) are comparable, with the stated consequences",
            TheoremId::C2_5 => "P1 weak prime and 0×M2 ⊆ φ(P1×M2) ⇒ P1×M2 φ-prime",
            TheoremId::P2_6 => "φ_ω ≤ φ and P1 weak prime ⇒ P1×M2 φ-prime",
            TheoremId::T2_7 => "(0:x) = 0, Rx ≠ M, Rx not prime ⇒ Rx not φ_1-prime",
            TheoremId::C2_8 => "(0:x) = 0, Rx ≠ M ⇒ (Rx prime ⇔ Rx φ_1-prime)",
            TheoremId::P2_9 => "P φ_1-prime ⇒ aP ⊆ (P:M)P for zero divisors a on M/P, and JP = (P:M)P",
            TheoremId::T2_10 => "aM ≠ M, (0:_M a) ⊆ aM ⇒ (aM φ_1-prime ⇔ aM prime)",
            TheoremId::T2_11 => "the four characterizations of φ-prime agree",
            TheoremId::T2_12i => "P φ-prime, L ⊆ P ⇒ P/L φ_L-prime",
            TheoremId::T2_12ii => "P φ-prime, S⁻¹P ≠ S⁻¹M, S⁻¹φ(P) ⊆ (S⁻¹φ)(S⁻¹P) ⇒ S⁻¹P (S⁻¹φ)-prime, and P(S) = P when S⁻¹P ≠ S⁻¹φ(P)",
            TheoremId::T2_13 => "forms (i)-(v) are (ψ1×ψ2)-prime",
            TheoremId::RemarkA => "P φ-prime, not prime, φ(P) ⊆ (P:M)P (resp. (P:M)²P) ⇒ equality",
            TheoremId::Chain => "prime ⇒ φ_ω ⇒ φ_4 ⇒ φ_3 ⇒ φ_2 ⇒ φ_1 and prime ⇒ weak ⇒ φ_1",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<TheoremId> {
        TheoremId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown theorem id `{s}`")))
    }
}

/// A failed instance, with enough detail to replay it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub context: String,
    pub submodule: String,
    pub phi: String,
    pub elements: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContextTally {
    pub context: String,
    pub instances: u64,
    pub violations: usize,
}

/// The outcome of a verifier or a hunt. Empty violations means pass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub subject: String,
    pub schema: String,
    pub instances_checked: u64,
    pub contexts: Vec<ContextTally>,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn merge(
        subject: String,
        schema: String,
        parts: Vec<(String, u64, Vec<Violation>)>,
    ) -> VerificationReport {
        let mut report = VerificationReport {
            subject,
            schema,
            instances_checked: 0,
            contexts: Vec::new(),
            violations: Vec::new(),
        };
        for (context, instances, violations) in parts {
            report.instances_checked += instances;
            report.contexts.push(ContextTally {
                context,
                instances,
                violations: violations.len(),
            });
            report.violations.extend(violations);
        }
        report
    }
}

/// Runs one verifier over every context in parallel; results keep context order.
pub fn verify_theorem(
    id: TheoremId,
    contexts: &[ModuleCtx],
    cap: usize,
) -> Result<VerificationReport> {
    let parts: Result<Vec<_>> = contexts
        .par_iter()
        .map(|ctx| {
            let (instances, violations) = verifiers::run(id, ctx, cap)?;
            Ok((ctx.descriptor(), instances, violations))
        })
        .collect();
    Ok(VerificationReport::merge(
        id.name().to_string(),
        id.schema().to_string(),
        parts?,
    ))
}

#[cfg(test)]
mod tests;
