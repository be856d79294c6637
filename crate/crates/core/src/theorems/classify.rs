use rayon::prelude::*;

use crate::error::Result;
use crate::module::ModuleCtx;
use crate::phi::{is_phi_prime, PhiFlag, PhiSpec, PrimenessReport};

/// Flags every proper submodule as prime, weak prime and `φ`-prime for each
/// requested `φ`, in lattice order.
pub fn classify_all(ctx: &ModuleCtx, phis: &[PhiSpec], cap: usize) -> Result<Vec<PrimenessReport>> {
    let mut columns = vec![PhiSpec::Empty, PhiSpec::Zero];
    for phi in phis {
        if !columns.contains(phi) {
            columns.push(phi.clone());
        }
    }
    let lattice = ctx.enumerate_submodules(cap)?;
    lattice
        .into_par_iter()
        .filter(|p| p.is_proper())
        .map(|p| {
            let flags = columns
                .iter()
                .map(|phi| {
                    let v = is_phi_prime(&p, phi)?;
                    Ok(PhiFlag {
                        phi: phi.clone(),
                        holds: v.holds,
                        witness: v.witness,
                    })
                })
                .collect::<Result<_>>()?;
            Ok(PrimenessReport {
                submodule: p,
                flags,
            })
        })
        .collect()
}
