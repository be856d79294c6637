//! Finite modules over [`FiniteRing`]s.
//!
//! A module is a direct sum of cyclic groups grouped by ring factor: the
//! `i`-th ring coordinate acts by multiplication on the summands of block `i`,
//! and every summand order divides the factor modulus.

mod lattice;
mod localize;
mod quotient;
mod submodule;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::{mixed_radix_strides, FiniteRing, Ideal, RingElem};

pub use localize::{Localization, MultSet};
pub use quotient::QuotientMap;
pub use submodule::Submodule;

/// Default bound on `|M|` for anything that enumerates the submodule lattice.
pub const DEFAULT_CAP: usize = 4096;

// Precomputed scalar-action table is only built below this many entries.
const SCALE_TABLE_LIMIT: usize = 1 << 22;

/// An element of a [`ModuleCtx`], identified by its lexicographic rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModElem(pub(crate) u32);

impl ModElem {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

struct CtxData {
    ring: FiniteRing,
    blocks: Vec<Vec<u64>>,
    split: Option<usize>,
    parts: Option<(ModuleCtx, ModuleCtx)>,
    orders: Vec<u64>,
    factor_of: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
    scale_table: Option<Vec<u32>>,
}

/// A finite module over a product of residue rings.
#[derive(Clone)]
pub struct ModuleCtx(Arc<CtxData>);

impl PartialEq for ModuleCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.ring == other.0.ring
                && self.0.blocks == other.0.blocks
                && self.0.split == other.0.split)
    }
}

impl Eq for ModuleCtx {}

impl fmt::Debug for ModuleCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleCtx({})", self.descriptor())
    }
}

impl ModuleCtx {
    /// Builds the module with the given cyclic orders per ring factor.
    pub fn new(ring: &FiniteRing, blocks: Vec<Vec<u64>>) -> Result<ModuleCtx> {
        Self::build(ring, blocks, None, None)
    }

    /// The regular module `R` over itself.
    pub fn regular(ring: &FiniteRing) -> ModuleCtx {
        let blocks = ring.moduli().iter().map(|&n| vec![n]).collect();
        Self::build(ring, blocks, None, None).expect("regular module is well formed")
    }

    fn build(
        ring: &FiniteRing,
        blocks: Vec<Vec<u64>>,
        split: Option<usize>,
        parts: Option<(ModuleCtx, ModuleCtx)>,
    ) -> Result<ModuleCtx> {
        if blocks.len() != ring.num_factors() {
            return Err(Error::InvalidModule(format!(
                "{} block groups for a ring with {} factors",
                blocks.len(),
                ring.num_factors()
            )));
        }
        let mut orders = Vec::new();
        let mut factor_of = Vec::new();
        for (i, (group, &n)) in blocks.iter().zip(ring.moduli()).enumerate() {
            for &m in group {
                if m == 0 || n % m != 0 {
                    return Err(Error::InvalidModule(format!(
                        "block order {m} does not divide modulus {n}"
                    )));
                }
                orders.push(m);
                factor_of.push(i);
            }
        }
        let (strides, size) = mixed_radix_strides(&orders)
            .ok_or_else(|| Error::InvalidModule("module is too large to index".into()))?;
        let parts = match split {
            Some(_) if parts.is_some() => parts,
            Some(k) => {
                if k == 0 || k >= ring.num_factors() {
                    return Err(Error::InvalidArgument(format!(
                        "split point {k} must lie strictly inside 1..{}",
                        ring.num_factors()
                    )));
                }
                let left_ring = FiniteRing::new(&ring.moduli()[..k])?;
                let right_ring = FiniteRing::new(&ring.moduli()[k..])?;
                Some((
                    ModuleCtx::new(&left_ring, blocks[..k].to_vec())?,
                    ModuleCtx::new(&right_ring, blocks[k..].to_vec())?,
                ))
            }
            None => None,
        };
        let mut data = CtxData {
            ring: ring.clone(),
            blocks,
            split,
            parts,
            orders,
            factor_of,
            strides,
            size,
            scale_table: None,
        };
        if ring.size().saturating_mul(size) <= SCALE_TABLE_LIMIT {
            let mut table = Vec::with_capacity(ring.size() * size);
            for r in ring.elements() {
                for x in 0..size {
                    table.push(scale_raw(&data, r, ModElem(x as u32)).0);
                }
            }
            data.scale_table = Some(table);
        }
        Ok(ModuleCtx(Arc::new(data)))
    }

    /// The same module viewed as `M_1 x M_2`, where the first `k` ring
    /// factors carry `M_1`.
    pub fn with_split(&self, k: usize) -> Result<ModuleCtx> {
        Self::build(&self.0.ring, self.0.blocks.clone(), Some(k), None)
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.0.ring
    }

    pub fn blocks(&self) -> &[Vec<u64>] {
        &self.0.blocks
    }

    pub fn split(&self) -> Option<usize> {
        self.0.split
    }

    /// The factor modules `(M_1, M_2)` of a product context.
    pub fn parts(&self) -> Option<&(ModuleCtx, ModuleCtx)> {
        self.0.parts.as_ref()
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn num_coords(&self) -> usize {
        self.0.orders.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = ModElem> {
        (0..self.size() as u32).map(ModElem)
    }

    #[inline]
    pub fn coord(&self, x: ModElem, j: usize) -> u64 {
        (x.index() / self.0.strides[j]) as u64 % self.0.orders[j]
    }

    pub fn coords(&self, x: ModElem) -> Vec<u64> {
        (0..self.num_coords()).map(|j| self.coord(x, j)).collect()
    }

    /// Coordinates indices belonging to ring factor `i`.
    pub fn factor_coords(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_coords()).filter(move |&j| self.0.factor_of[j] == i)
    }

    pub(crate) fn elem_from_coords(&self, coords: impl Iterator<Item = u64>) -> ModElem {
        let idx: usize = coords
            .zip(&self.0.strides)
            .map(|(c, &s)| c as usize * s)
            .sum();
        ModElem(idx as u32)
    }

    /// Builds an element from flattened coordinates.
    pub fn elem(&self, coords: &[u64]) -> Result<ModElem> {
        if coords.len() != self.num_coords() {
            return Err(Error::InvalidElement(format!(
                "expected {} coordinates, got {}",
                self.num_coords(),
                coords.len()
            )));
        }
        for (&c, &m) in coords.iter().zip(&self.0.orders) {
            if c >= m {
                return Err(Error::InvalidElement(format!(
                    "coordinate {c} is not below {m}"
                )));
            }
        }
        Ok(self.elem_from_coords(coords.iter().copied()))
    }

    /// Builds an element from coordinates grouped by ring factor.
    pub fn elem_grouped(&self, groups: &[Vec<u64>]) -> Result<ModElem> {
        if groups.len() != self.0.blocks.len() {
            return Err(Error::InvalidElement(format!(
                "expected {} coordinate groups, got {}",
                self.0.blocks.len(),
                groups.len()
            )));
        }
        for (i, (g, b)) in groups.iter().zip(&self.0.blocks).enumerate() {
            if g.len() != b.len() {
                return Err(Error::InvalidElement(format!(
                    "factor {} expects {} coordinates, got {}",
                    i + 1,
                    b.len(),
                    g.len()
                )));
            }
        }
        let flat: Vec<u64> = groups.iter().flatten().copied().collect();
        self.elem(&flat)
    }

    pub fn elem_at(&self, index: usize) -> Result<ModElem> {
        if index < self.size() {
            Ok(ModElem(index as u32))
        } else {
            Err(Error::InvalidElement(format!(
                "module element index {index} out of range"
            )))
        }
    }

    pub fn zero(&self) -> ModElem {
        ModElem(0)
    }

    pub fn add(&self, x: ModElem, y: ModElem) -> ModElem {
        self.elem_from_coords(
            (0..self.num_coords())
                .map(|j| (self.coord(x, j) + self.coord(y, j)) % self.0.orders[j]),
        )
    }

    pub fn neg(&self, x: ModElem) -> ModElem {
        self.elem_from_coords(
            (0..self.num_coords())
                .map(|j| (self.0.orders[j] - self.coord(x, j)) % self.0.orders[j]),
        )
    }

    pub fn sub(&self, x: ModElem, y: ModElem) -> ModElem {
        self.add(x, self.neg(y))
    }

    /// Scalar action `r·x`.
    #[inline]
    pub fn scale(&self, r: RingElem, x: ModElem) -> ModElem {
        match &self.0.scale_table {
            Some(t) => ModElem(t[r.index() * self.size() + x.index()]),
            None => scale_raw(&self.0, r, x),
        }
    }

    /// Flattened coordinate tuple such as `(3,1)`.
    pub fn fmt_elem(&self, x: ModElem) -> String {
        let parts: Vec<String> = self.coords(x).iter().map(|c| c.to_string()).collect();
        format!("({})", parts.join(","))
    }

    /// Coordinates grouped by ring factor, such as `(3,0|2)`.
    pub fn fmt_elem_grouped(&self, x: ModElem) -> String {
        let coords = self.coords(x);
        let mut groups = vec![Vec::new(); self.0.blocks.len()];
        for (j, c) in coords.into_iter().enumerate() {
            groups[self.0.factor_of[j]].push(c.to_string());
        }
        let groups: Vec<String> = groups.into_iter().map(|g| g.join(",")).collect();
        format!("({})", groups.join("|"))
    }

    /// Short description such as `Z6xZ6:[6]x[6]`.
    pub fn descriptor(&self) -> String {
        let blocks: Vec<String> = self
            .0
            .blocks
            .iter()
            .map(|b| {
                format!(
                    "[{}]",
                    b.iter()
                        .map(|m| m.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        format!("{}:{}", self.ring().descriptor(), blocks.join("x"))
    }

    pub(crate) fn check_same(&self, other: &ModuleCtx, what: &str) -> Result<()> {
        if self != other {
            return Err(Error::ContextMismatch(format!(
                "{what}: {} versus {}",
                self.descriptor(),
                other.descriptor()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_ring(&self, ring: &FiniteRing, what: &str) -> Result<()> {
        if self.ring() != ring {
            return Err(Error::ContextMismatch(format!(
                "{what}: ring {} versus {}",
                ring.descriptor(),
                self.ring().descriptor()
            )));
        }
        Ok(())
    }

    /// The ring element with residue `t` at factor `i` and zero elsewhere.
    fn factor_scalar(&self, i: usize, t: u64) -> RingElem {
        let ring = self.ring();
        ring.elem_from_residues((0..ring.num_factors()).map(|k| if k == i { t } else { 0 }))
    }

    /// The basis vector with a single `1` at coordinate `j` (zero when the
    /// block at `j` is trivial).
    fn unit_vector(&self, j: usize) -> ModElem {
        self.elem_from_coords((0..self.num_coords()).map(|k| u64::from(k == j) % self.0.orders[k]))
    }

    /// Smallest positive `t` (a divisor of `n_i`) such that `t` placed at
    /// factor `i` sends every element of `xs` into `n`.
    fn factor_divisor(&self, n: &Submodule, i: usize, xs: &[ModElem]) -> u64 {
        let modulus = self.ring().moduli()[i];
        (1..modulus)
            .filter(|t| modulus.is_multiple_of(*t))
            .find(|&t| {
                let s = self.factor_scalar(i, t);
                xs.iter().all(|&x| n.contains(self.scale(s, x)))
            })
            .unwrap_or(modulus)
    }

    /// The colon ideal `(N :_R M) = {r : rM ⊆ N}`.
    pub fn colon(&self, n: &Submodule) -> Result<Ideal> {
        self.check_same(n.ctx(), "colon ideal")?;
        let divisors: Vec<u64> = (0..self.ring().num_factors())
            .map(|i| {
                let basis: Vec<ModElem> =
                    self.factor_coords(i).map(|j| self.unit_vector(j)).collect();
                self.factor_divisor(n, i, &basis)
            })
            .collect();
        Ideal::from_divisors(self.ring(), &divisors)
    }

    /// `(N :_R x) = {r : rx ∈ N}`.
    pub fn colon_elem(&self, n: &Submodule, x: ModElem) -> Result<Ideal> {
        self.check_same(n.ctx(), "element colon ideal")?;
        self.elem_at(x.index())?;
        let divisors: Vec<u64> = (0..self.ring().num_factors())
            .map(|i| {
                let part = self.factor_part(x, i);
                self.factor_divisor(n, i, &[part])
            })
            .collect();
        Ideal::from_divisors(self.ring(), &divisors)
    }

    /// The component of `x` living on ring factor `i`.
    fn factor_part(&self, x: ModElem, i: usize) -> ModElem {
        self.elem_from_coords((0..self.num_coords()).map(|j| {
            if self.0.factor_of[j] == i {
                self.coord(x, j)
            } else {
                0
            }
        }))
    }

    /// The annihilator `(0 :_R x)`.
    pub fn ann_elem(&self, x: ModElem) -> Result<Ideal> {
        self.colon_elem(&self.zero_submodule(), x)
    }

    /// `IN`, the submodule spanned by `a·x` for `a ∈ I`, `x ∈ N`.
    ///
    /// Ideals are principal, so this is the image of `N` under the canonical generator.
    pub fn ideal_apply(&self, ideal: &Ideal, n: &Submodule) -> Result<Submodule> {
        self.check_same(n.ctx(), "ideal action")?;
        self.check_ring(ideal.ring(), "ideal action")?;
        let g = ideal.generator();
        Ok(Submodule::from_elements(
            self,
            n.elements().map(|x| self.scale(g, x)),
        ))
    }

    /// `(0 :_M a) = {x : ax = 0}`.
    pub fn torsion_kernel(&self, a: RingElem) -> Result<Submodule> {
        self.ring().elem_at(a.index())?;
        let zero = self.zero();
        Ok(Submodule::from_elements(
            self,
            self.elements().filter(|&x| self.scale(a, x) == zero),
        ))
    }

    /// `aM`.
    pub fn scaled_module(&self, a: RingElem) -> Result<Submodule> {
        self.ring().elem_at(a.index())?;
        Ok(Submodule::from_elements(
            self,
            self.elements().map(|x| self.scale(a, x)),
        ))
    }

    /// The zero divisors on `M/P`: scalars `a` with `ax ∈ P` for some `x ∉ P`.
    pub fn zero_divisors_on_quotient(&self, p: &Submodule) -> Result<Vec<RingElem>> {
        self.check_same(p.ctx(), "zero divisors")?;
        if p.is_whole() {
            return Err(Error::InvalidArgument(
                "zero divisors on M/P need a proper submodule P".into(),
            ));
        }
        let outside: Vec<ModElem> = self.elements().filter(|&x| !p.contains(x)).collect();
        Ok(self
            .ring()
            .elements()
            .filter(|&a| outside.iter().any(|&x| p.contains(self.scale(a, x))))
            .collect())
    }

    /// `N(S) = {x : sx ∈ N for some s ∈ S}`.
    pub fn saturation(&self, n: &Submodule, s: &MultSet) -> Result<Submodule> {
        self.check_same(n.ctx(), "saturation")?;
        self.check_ring(s.ring(), "saturation")?;
        Ok(Submodule::from_elements(
            self,
            self.elements()
                .filter(|&x| s.elements().iter().any(|&t| n.contains(self.scale(t, x)))),
        ))
    }

    /// Splits a submodule of a product context into its factor projections.
    pub fn split_submodule(&self, n: &Submodule) -> Result<(Submodule, Submodule)> {
        self.check_same(n.ctx(), "split")?;
        let (left, right) = self.parts().ok_or_else(|| {
            Error::ContextMismatch(format!("{} is not a product context", self.descriptor()))
        })?;
        let width = right.size();
        let n1 = Submodule::from_elements(
            left,
            left.elements()
                .filter(|x| n.contains(ModElem((x.index() * width) as u32))),
        );
        let n2 = Submodule::from_elements(
            right,
            right.elements().filter(|&x| n.contains(ModElem(x.0))),
        );
        Ok((n1, n2))
    }

    /// `N_1 x N_2` inside a product context.
    pub fn combine(&self, n1: &Submodule, n2: &Submodule) -> Result<Submodule> {
        let (left, right) = self.parts().ok_or_else(|| {
            Error::ContextMismatch(format!("{} is not a product context", self.descriptor()))
        })?;
        left.check_same(n1.ctx(), "left factor")?;
        right.check_same(n2.ctx(), "right factor")?;
        let width = right.size();
        let members: Vec<ModElem> = n1
            .elements()
            .flat_map(|a| {
                n2.elements()
                    .map(move |b| ModElem((a.index() * width + b.index()) as u32))
            })
            .collect();
        Ok(Submodule::from_elements(self, members.into_iter()))
    }

    /// `N_1 x M_2`.
    pub fn embed_left(&self, n1: &Submodule) -> Result<Submodule> {
        let right = self.parts().map(|p| p.1.whole()).ok_or_else(|| {
            Error::ContextMismatch(format!("{} is not a product context", self.descriptor()))
        })?;
        self.combine(n1, &right)
    }

    /// `M_1 x N_2`.
    pub fn embed_right(&self, n2: &Submodule) -> Result<Submodule> {
        let left = self.parts().map(|p| p.0.whole()).ok_or_else(|| {
            Error::ContextMismatch(format!("{} is not a product context", self.descriptor()))
        })?;
        self.combine(&left, n2)
    }
}

fn scale_raw(data: &CtxData, r: RingElem, x: ModElem) -> ModElem {
    let mut idx = 0usize;
    for j in 0..data.orders.len() {
        let m = data.orders[j];
        let c = (x.index() / data.strides[j]) as u64 % m;
        let s = data.ring.residue(r, data.factor_of[j]) % m;
        idx += ((c * s) % m) as usize * data.strides[j];
    }
    ModElem(idx as u32)
}

/// `M_1 x M_2` over `R_1 x R_2`.
pub fn product_context(a: &ModuleCtx, b: &ModuleCtx) -> Result<ModuleCtx> {
    let moduli: Vec<u64> = a
        .ring()
        .moduli()
        .iter()
        .chain(b.ring().moduli())
        .copied()
        .collect();
    let ring = FiniteRing::new(&moduli)?;
    let blocks: Vec<Vec<u64>> = a.blocks().iter().chain(b.blocks()).cloned().collect();
    ModuleCtx::build(
        &ring,
        blocks,
        Some(a.ring().num_factors()),
        Some((a.clone(), b.clone())),
    )
}

#[cfg(test)]
mod tests;
