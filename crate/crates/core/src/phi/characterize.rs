use fixedbitset::FixedBitSet;

use super::{is_phi_prime_at, phi_eval, PhiSpec, Witness};
use crate::error::{Error, Result};
use crate::module::{ModElem, ModuleCtx, Submodule};
use crate::ring::{Ideal, RingElem};

/// Largest product table kept in memory, in bits.
const PRODUCT_TABLE_BITS: usize = 1 << 28;

/// An element `x ∉ P` at which a colon condition fails, with a scalar in
/// `(P:x)` lying outside both `(P:M)` and `(φ(P):x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElementWitness {
    pub element: ModElem,
    pub scalar: Option<RingElem>,
}

/// The four equivalent forms of φ-primeness, each evaluated on its own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Characterizations {
    /// The defining condition.
    pub definition: bool,
    /// `(P:x) = (P:M) ∪ (φ(P):x)` for every `x ∉ P`.
    pub ii: bool,
    /// `(P:x) = (P:M)` or `(P:x) = (φ(P):x)` for every `x ∉ P`.
    pub iii: bool,
    /// `IL ⊆ P`, `IL ⊄ φ(P)` imply `I ⊆ (P:M)` or `L ⊆ P`.
    pub iv: bool,
    pub definition_witness: Option<Witness>,
    pub ii_witness: Option<ElementWitness>,
    pub iii_witness: Option<ElementWitness>,
    pub iv_witness: Option<(Ideal, Submodule)>,
}

impl Characterizations {
    pub fn agree(&self) -> bool {
        self.definition == self.ii && self.ii == self.iii && self.iii == self.iv
    }
}

/// Caches the lattice, the ideals and every product `IL` of one context.
pub struct Characterizer {
    ctx: ModuleCtx,
    lattice: Vec<Submodule>,
    ideals: Vec<Ideal>,
    /// `products[i][l]` is the member set of `ideals[i] · lattice[l]`.
    products: Option<Vec<Vec<FixedBitSet>>>,
}

impl Characterizer {
    pub fn new(ctx: &ModuleCtx, cap: usize) -> Result<Characterizer> {
        let lattice = ctx.enumerate_submodules(cap)?;
        let ideals = Ideal::all(ctx.ring());
        let bits = ideals.len() * lattice.len() * ctx.size();
        let products = if bits <= PRODUCT_TABLE_BITS {
            let mut table = Vec::with_capacity(ideals.len());
            for i in &ideals {
                let row: Result<Vec<FixedBitSet>> = lattice
                    .iter()
                    .map(|l| Ok(ctx.ideal_apply(i, l)?.members().clone()))
                    .collect();
                table.push(row?);
            }
            Some(table)
        } else {
            None
        };
        Ok(Characterizer {
            ctx: ctx.clone(),
            lattice,
            ideals,
            products,
        })
    }

    pub fn ctx(&self) -> &ModuleCtx {
        &self.ctx
    }

    /// The enumerated lattice, sorted.
    pub fn lattice(&self) -> &[Submodule] {
        &self.lattice
    }

    pub fn ideals(&self) -> &[Ideal] {
        &self.ideals
    }

    /// Evaluates all four forms against `φ(P) = value`.
    pub fn characterize_at(
        &self,
        p: &Submodule,
        value: Option<&Submodule>,
    ) -> Result<Characterizations> {
        self.ctx.check_same(p.ctx(), "characterization")?;
        let def = is_phi_prime_at(p, value)?;
        let (ii_witness, iii_witness) = self.colon_forms(p, value)?;
        let iv_witness = self.ideal_form(p, value)?;
        Ok(Characterizations {
            definition: def.holds,
            ii: ii_witness.is_none(),
            iii: iii_witness.is_none(),
            iv: iv_witness.is_none(),
            definition_witness: def.witness,
            ii_witness,
            iii_witness,
            iv_witness,
        })
    }

    pub fn characterize(&self, p: &Submodule, phi: &PhiSpec) -> Result<Characterizations> {
        let value = phi_eval(phi, p)?;
        self.characterize_at(p, value.as_ref())
    }

    /// Forms (ii) and (iii), as ring subsets compared element by element.
    fn colon_forms(
        &self,
        p: &Submodule,
        value: Option<&Submodule>,
    ) -> Result<(Option<ElementWitness>, Option<ElementWitness>)> {
        let ctx = &self.ctx;
        let ring = ctx.ring();
        let colon = ctx.colon(p)?;
        let colon_set = ring_set(ring.size(), ring.elements().filter(|&a| colon.contains(a)));
        let mut ii_fail = Vec::new();
        let mut iii_fail = Vec::new();
        for x in ctx.elements().filter(|&x| !p.contains(x)) {
            let p_x = ring_set(
                ring.size(),
                ring.elements().filter(|&a| p.contains(ctx.scale(a, x))),
            );
            // (∅ : x) is empty
            let phi_x = match value {
                Some(v) => ring_set(
                    ring.size(),
                    ring.elements().filter(|&a| v.contains(ctx.scale(a, x))),
                ),
                None => FixedBitSet::with_capacity(ring.size()),
            };
            let mut union = colon_set.clone();
            union.union_with(&phi_x);
            if p_x != union {
                ii_fail.push((x, p_x.clone(), phi_x.clone()));
            }
            if p_x != colon_set && p_x != phi_x {
                iii_fail.push((x, p_x, phi_x));
            }
        }
        let pick = |fails: &[(ModElem, FixedBitSet, FixedBitSet)]| -> Option<ElementWitness> {
            let first = fails.first()?;
            // least (scalar, element) pair separating (P:x) from both alternatives
            for a in ring.elements() {
                for (x, p_x, phi_x) in fails {
                    let i = a.index();
                    if p_x.contains(i) && !colon_set.contains(i) && !phi_x.contains(i) {
                        return Some(ElementWitness {
                            element: *x,
                            scalar: Some(a),
                        });
                    }
                }
            }
            Some(ElementWitness {
                element: first.0,
                scalar: None,
            })
        };
        Ok((pick(&ii_fail), pick(&iii_fail)))
    }

    /// Form (iv) over every ideal and every enumerated submodule.
    fn ideal_form(
        &self,
        p: &Submodule,
        value: Option<&Submodule>,
    ) -> Result<Option<(Ideal, Submodule)>> {
        let colon = self.ctx.colon(p)?;
        for (i, ideal) in self.ideals.iter().enumerate() {
            let ideal_inside = ideal.is_subset(&colon);
            for (l, sub) in self.lattice.iter().enumerate() {
                let computed;
                let il: &FixedBitSet = match &self.products {
                    Some(t) => &t[i][l],
                    None => {
                        computed = self.ctx.ideal_apply(ideal, sub)?;
                        computed.members()
                    }
                };
                let in_p = il.is_subset(p.members());
                let in_phi = value.is_some_and(|v| il.is_subset(v.members()));
                if in_p && !in_phi && !ideal_inside && !sub.is_subset(p) {
                    return Ok(Some((ideal.clone(), sub.clone())));
                }
            }
        }
        Ok(None)
    }
}

fn ring_set(size: usize, members: impl Iterator<Item = RingElem>) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(size);
    for a in members {
        s.insert(a.index());
    }
    s
}

/// One-shot evaluation of the four forms for `(P, φ)`.
pub fn phi_prime_characterizations(
    p: &Submodule,
    phi: &PhiSpec,
    cap: usize,
) -> Result<Characterizations> {
    if p.is_whole() {
        return Err(Error::InvalidArgument(
            "characterizations need a proper submodule".into(),
        ));
    }
    Characterizer::new(p.ctx(), cap)?.characterize(p, phi)
}
