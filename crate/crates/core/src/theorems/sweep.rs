use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::Result;
use crate::module::{ModuleCtx, Submodule};
use crate::phi::{obstruction, obstruction_allows, omega_chain};
use crate::ring::Ideal;

/// Per-submodule data reused by every verifier.
pub(crate) struct Info {
    pub colon: Ideal,
    /// `(P:M)P`.
    pub colon_p: Submodule,
    /// `(P:M)^2 P`.
    pub colon2_p: Submodule,
    pub omega: Submodule,
    /// Products `ax ∈ P` with `a ∉ (P:M)`, `x ∉ P`; empty for `M`.
    pub obstruction: FixedBitSet,
    /// Indices of the submodules contained in this one.
    pub below: Vec<usize>,
}

/// A context with its lattice and per-submodule invariants.
pub(crate) struct Sweep {
    pub ctx: ModuleCtx,
    pub lattice: Vec<Submodule>,
    index: HashMap<Submodule, usize>,
    pub info: Vec<Info>,
}

impl Sweep {
    pub fn new(ctx: &ModuleCtx, cap: usize) -> Result<Sweep> {
        let lattice = ctx.enumerate_submodules(cap)?;
        let index = lattice
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, n)| (n, i))
            .collect();
        let mut info = Vec::with_capacity(lattice.len());
        for n in &lattice {
            let colon = ctx.colon(n)?;
            let colon_p = ctx.ideal_apply(&colon, n)?;
            let colon2_p = ctx.ideal_apply(&colon, &colon_p)?;
            let omega = omega_chain(n)?.pop().expect("chain is nonempty");
            let obstruction = if n.is_proper() {
                obstruction(n)?
            } else {
                FixedBitSet::with_capacity(ctx.size())
            };
            let below = lattice
                .iter()
                .enumerate()
                .filter(|(_, q)| q.is_subset(n))
                .map(|(i, _)| i)
                .collect();
            info.push(Info {
                colon,
                colon_p,
                colon2_p,
                omega,
                obstruction,
                below,
            });
        }
        Ok(Sweep {
            ctx: ctx.clone(),
            lattice,
            index,
            info,
        })
    }

    pub fn descriptor(&self) -> String {
        self.ctx.descriptor()
    }

    pub fn index_of(&self, n: &Submodule) -> usize {
        self.index[n]
    }

    /// Proper submodules with their indices.
    pub fn proper(&self) -> impl Iterator<Item = (usize, &Submodule, &Info)> {
        self.lattice
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_proper())
            .map(|(i, p)| (i, p, &self.info[i]))
    }

    /// Every admissible value of `φ(N)`: empty, then each submodule of `N`.
    pub fn values(&self, i: usize) -> impl Iterator<Item = Option<&Submodule>> {
        std::iter::once(None).chain(self.info[i].below.iter().map(|&j| Some(&self.lattice[j])))
    }

    pub fn phi_prime_at(&self, i: usize, value: Option<&Submodule>) -> bool {
        obstruction_allows(&self.info[i].obstruction, value)
    }

    pub fn is_prime(&self, i: usize) -> bool {
        self.info[i].obstruction.is_clear()
    }
}
