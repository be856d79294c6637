use super::{phi_eval, PhiSpec, PhiTable};
use crate::error::Result;
use crate::module::{Localization, QuotientMap};

/// `φ_L(N/L) = (φ(N) + L)/L`, and empty where `φ(N)` is empty.
pub fn phi_quotient_transport(phi: &PhiSpec, q: &QuotientMap, cap: usize) -> Result<PhiSpec> {
    let target = q.target();
    let mut entries = Vec::new();
    for nbar in target.enumerate_submodules(cap)? {
        let n = q.preimage(&nbar)?;
        let value = match phi_eval(phi, &n)? {
            Some(v) => Some(q.image(&v)?),
            None => None,
        };
        entries.push((nbar, value));
    }
    Ok(PhiSpec::Table(PhiTable::new(target, entries)?))
}

/// `(S⁻¹φ)(S⁻¹N) = S⁻¹(φ(N(S)))`, and empty where `φ(N(S))` is empty.
///
/// Each localized submodule `T` is reached from its preimage `N`, and the
/// value only depends on `N(S)`.
pub fn phi_localize_transport(phi: &PhiSpec, loc: &Localization, cap: usize) -> Result<PhiSpec> {
    let source = loc.source();
    let target = loc.target();
    let mut entries = Vec::new();
    for t in target.enumerate_submodules(cap)? {
        let n = loc.preimage(&t)?;
        let saturated = source.saturation(&n, loc.mult_set())?;
        let value = match phi_eval(phi, &saturated)? {
            Some(v) => Some(loc.image(&v)?),
            None => None,
        };
        entries.push((t, value));
    }
    Ok(PhiSpec::Table(PhiTable::new(target, entries)?))
}
