use std::collections::BTreeSet;

use num_integer::Integer;

use super::{ModElem, ModuleCtx, Submodule};
use crate::error::Result;
use crate::ring::{FiniteRing, RingElem};

/// A multiplicatively closed subset of a ring containing `1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultSet {
    ring: FiniteRing,
    generators: Vec<RingElem>,
    elements: Vec<RingElem>,
}

impl MultSet {
    /// Closes `gens ∪ {1}` under multiplication.
    pub fn generate(ring: &FiniteRing, gens: &[RingElem]) -> Result<MultSet> {
        for &g in gens {
            ring.elem_at(g.index())?;
        }
        let mut set = BTreeSet::from([ring.one()]);
        let mut frontier = vec![ring.one()];
        while let Some(a) = frontier.pop() {
            for &g in gens {
                let p = ring.mul(a, g);
                if set.insert(p) {
                    frontier.push(p);
                }
            }
        }
        Ok(MultSet {
            ring: ring.clone(),
            generators: gens.to_vec(),
            elements: set.into_iter().collect(),
        })
    }

    /// `{1, s, s^2, ...}`.
    pub fn cyclic(ring: &FiniteRing, s: RingElem) -> Result<MultSet> {
        Self::generate(ring, &[s])
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn generators(&self) -> &[RingElem] {
        &self.generators
    }

    /// Members in ascending order.
    pub fn elements(&self) -> &[RingElem] {
        &self.elements
    }

    pub fn contains(&self, a: RingElem) -> bool {
        self.elements.binary_search(&a).is_ok()
    }

    /// The product of the idempotent powers of the generators.
    ///
    /// `S^{-1}R` is canonically `eR` with identity `e`.
    pub fn idempotent(&self) -> RingElem {
        self.generators
            .iter()
            .map(|&g| self.ring.idempotent_power(g))
            .fold(self.ring.one(), |acc, e| self.ring.mul(acc, e))
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .generators
            .iter()
            .map(|&g| self.ring.fmt_elem(g))
            .collect();
        format!("S<{}>", parts.join(";"))
    }
}

/// `S^{-1}M` realised as `eM`, written in block form over the original ring.
///
/// For an idempotent `e ≡ 1 (mod a)`, `e ≡ 0 (mod n/a)` in `Z_n`, the summand
/// `eZ_m` is cyclic of order `gcd(m, a)` and `x ↦ ex` reads as reduction of
/// each coordinate modulo that order.
#[derive(Clone, Debug)]
pub struct Localization {
    source: ModuleCtx,
    target: ModuleCtx,
    mult_set: MultSet,
    idempotent: RingElem,
    table: Vec<ModElem>,
}

impl Localization {
    pub fn source(&self) -> &ModuleCtx {
        &self.source
    }

    pub fn target(&self) -> &ModuleCtx {
        &self.target
    }

    pub fn mult_set(&self) -> &MultSet {
        &self.mult_set
    }

    pub fn idempotent(&self) -> RingElem {
        self.idempotent
    }

    pub fn map(&self, x: ModElem) -> ModElem {
        self.table[x.index()]
    }

    /// `S^{-1}N`.
    pub fn image(&self, n: &Submodule) -> Result<Submodule> {
        self.source.check_same(n.ctx(), "localized image")?;
        Ok(Submodule::from_elements(
            &self.target,
            n.elements().map(|x| self.map(x)),
        ))
    }

    /// The largest submodule of `M` whose localization is `n`.
    pub fn preimage(&self, n: &Submodule) -> Result<Submodule> {
        self.target.check_same(n.ctx(), "localized preimage")?;
        Ok(Submodule::from_elements(
            &self.source,
            self.source.elements().filter(|&x| n.contains(self.map(x))),
        ))
    }

    /// True when multiplication by `s` permutes the localized module.
    pub fn acts_invertibly(&self, s: RingElem) -> bool {
        let t = &self.target;
        let mut hit = vec![false; t.size()];
        for x in t.elements() {
            let y = t.scale(s, x).index();
            if hit[y] {
                return false;
            }
            hit[y] = true;
        }
        true
    }

    /// True when `es` has an inverse in `eR`, i.e. `(es)t = e` for some `t`.
    pub fn is_unit_in_localized_ring(&self, s: RingElem) -> bool {
        let ring = self.mult_set.ring();
        let e = self.idempotent;
        let es = ring.mul(e, s);
        ring.elements().any(|t| ring.mul(es, t) == e)
    }
}

impl ModuleCtx {
    pub fn localize(&self, s: &MultSet) -> Result<Localization> {
        self.check_ring(s.ring(), "localization")?;
        let ring = self.ring();
        let e = s.idempotent();
        let mut blocks = Vec::new();
        let mut kept: Vec<(usize, u64)> = Vec::new();
        for (i, group) in self.blocks().iter().enumerate() {
            let n = ring.moduli()[i];
            let unit_part = n / ring.residue(e, i).gcd(&n);
            let coords: Vec<usize> = self.factor_coords(i).collect();
            let mut orders = Vec::new();
            for (&m, &j) in group.iter().zip(&coords) {
                let g = m.gcd(&unit_part);
                if g > 1 {
                    orders.push(g);
                    kept.push((j, g));
                }
            }
            blocks.push(orders);
        }
        let target = match self.split() {
            Some(k) => ModuleCtx::new(ring, blocks)?.with_split(k)?,
            None => ModuleCtx::new(ring, blocks)?,
        };
        let table = self
            .elements()
            .map(|x| target.elem_from_coords(kept.iter().map(|&(j, g)| self.coord(x, j) % g)))
            .collect();
        Ok(Localization {
            source: self.clone(),
            target,
            mult_set: s.clone(),
            idempotent: e,
            table,
        })
    }
}
