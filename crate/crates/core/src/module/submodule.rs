use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;

use super::{ModElem, ModuleCtx};
use crate::error::{Error, Result};

/// A submodule, stored as its member set.
///
/// Equality is set equality within the same context. The generating set is a
/// canonical greedy one: scan elements in order and keep each element not yet
/// in the span of those kept so far.
#[derive(Clone)]
pub struct Submodule {
    ctx: ModuleCtx,
    members: FixedBitSet,
    gens: OnceLock<Vec<ModElem>>,
}

impl Submodule {
    /// Wraps a member set that is already known to be a submodule.
    pub(crate) fn from_members(ctx: &ModuleCtx, members: FixedBitSet) -> Submodule {
        debug_assert_eq!(members.len(), ctx.size());
        Submodule {
            ctx: ctx.clone(),
            members,
            gens: OnceLock::new(),
        }
    }

    pub(crate) fn from_elements(
        ctx: &ModuleCtx,
        elems: impl Iterator<Item = ModElem>,
    ) -> Submodule {
        let mut members = FixedBitSet::with_capacity(ctx.size());
        for x in elems {
            members.insert(x.index());
        }
        Self::from_members(ctx, members)
    }

    pub fn ctx(&self) -> &ModuleCtx {
        &self.ctx
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn contains(&self, x: ModElem) -> bool {
        self.members.contains(x.index())
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Members in ascending element order.
    pub fn elements(&self) -> impl Iterator<Item = ModElem> + '_ {
        self.members.ones().map(|i| ModElem(i as u32))
    }

    pub fn is_zero(&self) -> bool {
        self.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.len() == self.ctx.size()
    }

    pub fn is_proper(&self) -> bool {
        !self.is_whole()
    }

    pub fn is_subset(&self, other: &Submodule) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Subset test that also confirms both sides live in the same context.
    pub fn try_is_subset(&self, other: &Submodule) -> Result<bool> {
        self.ctx.check_same(&other.ctx, "submodule comparison")?;
        Ok(self.is_subset(other))
    }

    pub fn intersection(&self, other: &Submodule) -> Submodule {
        let mut members = self.members.clone();
        members.intersect_with(&other.members);
        Submodule::from_members(&self.ctx, members)
    }

    /// `N + K`, built coset by coset.
    pub fn sum(&self, other: &Submodule) -> Submodule {
        let ctx = &self.ctx;
        let mut members = self.members.clone();
        for c in other.elements() {
            if members.contains(c.index()) {
                continue;
            }
            for n in self.elements() {
                members.insert(ctx.add(n, c).index());
            }
        }
        Submodule::from_members(ctx, members)
    }

    /// The canonical generating set.
    pub fn generators(&self) -> &[ModElem] {
        self.gens.get_or_init(|| {
            let mut span = self.ctx.zero_submodule();
            let mut gens = Vec::new();
            for x in self.elements() {
                if !span.contains(x) {
                    span = span.sum(&self.ctx.cyclic(x));
                    gens.push(x);
                }
            }
            gens
        })
    }

    /// A label such as `<(0,1)>`, or `0` for the zero submodule.
    pub fn label(&self) -> String {
        let gens = self.generators();
        if gens.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = gens.iter().map(|&g| self.ctx.fmt_elem(g)).collect();
        format!("<{}>", parts.join(";"))
    }

    /// The member list written as grouped element tuples.
    pub fn fmt_members(&self) -> String {
        let parts: Vec<String> = self.elements().map(|x| self.ctx.fmt_elem(x)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl PartialEq for Submodule {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && self.ctx == other.ctx
    }
}

impl Eq for Submodule {}

impl Hash for Submodule {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

/// Orders by size, then lexicographically by sorted member list.
impl Ord for Submodule {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.members.ones().cmp(other.members.ones()))
    }
}

impl PartialOrd for Submodule {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_members())
    }
}

impl ModuleCtx {
    pub fn zero_submodule(&self) -> Submodule {
        Submodule::from_elements(self, std::iter::once(self.zero()))
    }

    pub fn whole(&self) -> Submodule {
        let mut members = FixedBitSet::with_capacity(self.size());
        members.insert_range(..);
        Submodule::from_members(self, members)
    }

    /// `Rx`.
    pub fn cyclic(&self, x: ModElem) -> Submodule {
        Submodule::from_elements(self, self.ring().elements().map(|r| self.scale(r, x)))
    }

    /// The smallest submodule containing `gens`.
    pub fn generate(&self, gens: &[ModElem]) -> Result<Submodule> {
        let mut span = self.zero_submodule();
        for &g in gens {
            if g.index() >= self.size() {
                return Err(Error::InvalidElement(format!(
                    "module element index {} out of range",
                    g.index()
                )));
            }
            if !span.contains(g) {
                span = span.sum(&self.cyclic(g));
            }
        }
        Ok(span)
    }
}
