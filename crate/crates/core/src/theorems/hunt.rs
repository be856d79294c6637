use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::suite::{product_suite, standard_suite};
use super::{VerificationReport, Violation};
use crate::error::{Error, Result};
use crate::module::{ModuleCtx, MultSet, Submodule};
use crate::phi::{is_phi_prime, phi_eval, phi_localize_transport, PhiSpec, Witness};

/// The open questions a hunt can search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HuntQuestion {
    /// `S⁻¹P` is `(S⁻¹φ)`-prime while `P` is not φ-prime.
    Converse212ii,
    /// A φ-prime (or prime) submodule of a product matching none of the
    /// listed product forms.
    ProductForms213,
}

impl HuntQuestion {
    pub fn name(self) -> &'static str {
        match self {
            HuntQuestion::Converse212ii => "converse_2_12ii",
            HuntQuestion::ProductForms213 => "product_forms_2_13",
        }
    }

    fn schema(self) -> &'static str {
        match self {
            HuntQuestion::Converse212ii => "S⁻¹P (S⁻¹φ)-prime and P not φ-prime",
            HuntQuestion::ProductForms213 => {
                "N (ψ1×ψ2)-prime, or N prime, yet N matches none of forms (i)-(v)"
            }
        }
    }
}

impl fmt::Display for HuntQuestion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HuntQuestion {
    type Err = Error;

    fn from_str(s: &str) -> Result<HuntQuestion> {
        [HuntQuestion::Converse212ii, HuntQuestion::ProductForms213]
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown hunt question `{s}`")))
    }
}

/// The search space of a hunt.
#[derive(Clone, Debug)]
pub struct HuntFamily {
    pub contexts: Vec<ModuleCtx>,
    /// φ functions for the converse hunt; `ψ` choices for the product hunt.
    pub phis: Vec<PhiSpec>,
    /// Explicit multiplicative sets; `None` means every cyclic one. Sets over
    /// a different ring than a context are skipped for that context.
    pub mult_sets: Option<Vec<MultSet>>,
    /// Only report `P` with `P(S) = P`.
    pub saturated_only: bool,
}

impl HuntFamily {
    /// The built-in family for a question.
    pub fn default_for(question: HuntQuestion) -> HuntFamily {
        let contexts = match question {
            HuntQuestion::Converse212ii => standard_suite(),
            HuntQuestion::ProductForms213 => product_suite(),
        };
        HuntFamily {
            contexts,
            phis: PhiSpec::standard_family(),
            mult_sets: None,
            saturated_only: false,
        }
    }
}

pub fn hunt_counterexamples(
    question: HuntQuestion,
    family: &HuntFamily,
    cap: usize,
) -> Result<VerificationReport> {
    let parts: Result<Vec<_>> = family
        .contexts
        .par_iter()
        .map(|ctx| {
            let (instances, findings) = match question {
                HuntQuestion::Converse212ii => converse(ctx, family, cap)?,
                HuntQuestion::ProductForms213 => product_forms(ctx, family, cap)?,
            };
            Ok((ctx.descriptor(), instances, findings))
        })
        .collect();
    Ok(VerificationReport::merge(
        question.name().to_string(),
        question.schema().to_string(),
        parts?,
    ))
}

fn witness_elements(ctx: &ModuleCtx, w: Option<Witness>) -> Vec<String> {
    w.map(|w| vec![ctx.ring().fmt_elem(w.scalar), ctx.fmt_elem(w.element)])
        .unwrap_or_default()
}

fn converse(ctx: &ModuleCtx, family: &HuntFamily, cap: usize) -> Result<(u64, Vec<Violation>)> {
    let ring = ctx.ring();
    let sets: Vec<MultSet> = match &family.mult_sets {
        Some(sets) => sets.iter().filter(|s| s.ring() == ring).cloned().collect(),
        None => ring
            .elements()
            .map(|s| MultSet::cyclic(ring, s))
            .collect::<Result<_>>()?,
    };
    let lattice = ctx.enumerate_submodules(cap)?;
    let mut instances = 0;
    let mut findings = Vec::new();
    for set in &sets {
        let loc = ctx.localize(set)?;
        for phi in &family.phis {
            let table = phi_localize_transport(phi, &loc, cap)?;
            for p in lattice.iter().filter(|p| p.is_proper()) {
                instances += 1;
                let sp = loc.image(p)?;
                if sp.is_whole() || !is_phi_prime(&sp, &table)?.holds {
                    continue;
                }
                let own = is_phi_prime(p, phi)?;
                if own.holds {
                    continue;
                }
                let saturated = &ctx.saturation(p, set)? == p;
                if family.saturated_only && !saturated {
                    continue;
                }
                findings.push(Violation {
                    context: ctx.descriptor(),
                    submodule: p.label(),
                    phi: format!("{phi} {}", set.label()),
                    elements: witness_elements(ctx, own.witness),
                    detail: format!(
                        "S⁻¹P = {} is (S⁻¹φ)-prime; P(S) = P: {}",
                        sp.label(),
                        if saturated { "yes" } else { "no" }
                    ),
                });
            }
        }
    }
    Ok((instances, findings))
}

/// Which of forms (i)-(v) `N = N1 × N2` matches, if any.
fn matching_form(
    ctx: &ModuleCtx,
    n: &Submodule,
    psi1: &PhiSpec,
    psi2: &PhiSpec,
) -> Result<Option<&'static str>> {
    let (n1, n2) = ctx.split_submodule(n)?;
    let fixed = |psi: &PhiSpec, x: &Submodule| -> Result<bool> {
        Ok(phi_eval(psi, x)?.as_ref() == Some(x))
    };
    if n1.is_proper() && n2.is_proper() && fixed(psi1, &n1)? && fixed(psi2, &n2)? {
        return Ok(Some("i"));
    }
    if n2.is_whole() && n1.is_proper() {
        if is_phi_prime(&n1, &PhiSpec::Empty)?.holds {
            return Ok(Some("ii"));
        }
        if is_phi_prime(&n1, psi1)?.holds && fixed(psi2, &n2)? {
            return Ok(Some("iii"));
        }
    }
    if n1.is_whole() && n2.is_proper() {
        if is_phi_prime(&n2, &PhiSpec::Empty)?.holds {
            return Ok(Some("iv"));
        }
        if is_phi_prime(&n2, psi2)?.holds && fixed(psi1, &n1)? {
            return Ok(Some("v"));
        }
    }
    Ok(None)
}

fn product_forms(
    ctx: &ModuleCtx,
    family: &HuntFamily,
    cap: usize,
) -> Result<(u64, Vec<Violation>)> {
    if ctx.parts().is_none() {
        return Ok((0, Vec::new()));
    }
    let lattice = ctx.enumerate_submodules(cap)?;
    let mut instances = 0;
    let mut findings = Vec::new();
    for psi1 in &family.phis {
        for psi2 in &family.phis {
            let phi = PhiSpec::product(psi1.clone(), psi2.clone());
            // the product reading, then the literal "prime submodule" reading
            for (reading, target) in [("phi", &phi), ("prime", &PhiSpec::Empty)] {
                for n in lattice.iter().filter(|n| n.is_proper()) {
                    instances += 1;
                    if !is_phi_prime(n, target)?.holds {
                        continue;
                    }
                    if matching_form(ctx, n, psi1, psi2)?.is_none() {
                        findings.push(Violation {
                            context: ctx.descriptor(),
                            submodule: n.label(),
                            phi: format!("{reading}: {phi}"),
                            elements: Vec::new(),
                            detail: "matches none of forms (i)-(v)".into(),
                        });
                    }
                }
            }
        }
    }
    Ok((instances, findings))
}
