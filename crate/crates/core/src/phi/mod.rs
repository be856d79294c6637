//! φ functions on the submodule lattice and the φ-prime predicates.
//!
//! A φ function sends each submodule `N` to a submodule or to the empty set.
//! A proper `P` is φ-prime when `ax ∈ P \ φ(P)` forces `a ∈ (P:M)` or `x ∈ P`.
//! Values are always normalised so that `φ(N) ⊆ N`.

mod characterize;
mod transport;

use std::collections::BTreeMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::module::{ModElem, ModuleCtx, Submodule};
use crate::ring::RingElem;

pub use characterize::{phi_prime_characterizations, Characterizations, Characterizer};
pub use transport::{phi_localize_transport, phi_quotient_transport};

/// The value of a φ function: a submodule, or `None` for the empty set.
pub type PhiValue = Option<Submodule>;

/// An explicit φ table over one context. Missing entries map to the empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiTable {
    ctx: ModuleCtx,
    entries: BTreeMap<Submodule, PhiValue>,
}

impl PhiTable {
    /// Builds a table; each value is intersected with its key.
    pub fn new(
        ctx: &ModuleCtx,
        entries: impl IntoIterator<Item = (Submodule, PhiValue)>,
    ) -> Result<PhiTable> {
        let mut map = BTreeMap::new();
        for (key, value) in entries {
            ctx.check_same(key.ctx(), "phi table key")?;
            let value = match value {
                Some(v) => {
                    ctx.check_same(v.ctx(), "phi table value")?;
                    Some(v.intersection(&key))
                }
                None => None,
            };
            map.insert(key, value);
        }
        Ok(PhiTable {
            ctx: ctx.clone(),
            entries: map,
        })
    }

    pub fn ctx(&self) -> &ModuleCtx {
        &self.ctx
    }

    pub fn entries(&self) -> &BTreeMap<Submodule, PhiValue> {
        &self.entries
    }

    pub fn get(&self, n: &Submodule) -> Result<PhiValue> {
        self.ctx.check_same(n.ctx(), "phi table lookup")?;
        Ok(self.entries.get(n).cloned().flatten())
    }
}

/// A φ function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiSpec {
    /// `φ_∅`; φ-prime is prime.
    Empty,
    /// `φ_0 = {0}`; φ-prime is weak prime.
    Zero,
    /// `φ_n(N) = (N:M)^n N`; `n = 1` is almost prime.
    PhiN(u32),
    /// `φ_ω(N) = ∩_i (N:M)^i N`.
    Omega,
    /// `ψ_1 x ψ_2` on a product context.
    Product(Box<PhiSpec>, Box<PhiSpec>),
    Table(PhiTable),
}

impl PhiSpec {
    pub fn product(left: PhiSpec, right: PhiSpec) -> PhiSpec {
        PhiSpec::Product(Box::new(left), Box::new(right))
    }

    /// Column name used in reports.
    pub fn column(&self) -> String {
        match self {
            PhiSpec::Empty => "prime".into(),
            PhiSpec::Zero => "weak_prime".into(),
            PhiSpec::PhiN(n) => format!("phi_{n}"),
            PhiSpec::Omega => "phi_omega".into(),
            PhiSpec::Product(a, b) => format!("product({},{})", a.column(), b.column()),
            PhiSpec::Table(_) => "table".into(),
        }
    }

    /// The standard named family `φ_∅, φ_0, φ_1, φ_2, φ_ω`.
    pub fn standard_family() -> Vec<PhiSpec> {
        vec![
            PhiSpec::Empty,
            PhiSpec::Zero,
            PhiSpec::PhiN(1),
            PhiSpec::PhiN(2),
            PhiSpec::Omega,
        ]
    }
}

impl fmt::Display for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiSpec::Empty => write!(f, "empty"),
            PhiSpec::Zero => write!(f, "zero"),
            PhiSpec::PhiN(n) => write!(f, "phin {n}"),
            PhiSpec::Omega => write!(f, "omega"),
            PhiSpec::Product(a, b) => write!(f, "product({a}, {b})"),
            PhiSpec::Table(t) => write!(f, "table[{} entries]", t.entries.len()),
        }
    }
}

/// The descending chain `(N:M)N ⊇ (N:M)^2 N ⊇ ...` up to its first repeat.
pub fn omega_chain(n: &Submodule) -> Result<Vec<Submodule>> {
    let ctx = n.ctx();
    let colon = ctx.colon(n)?;
    let mut chain = vec![ctx.ideal_apply(&colon, n)?];
    loop {
        let last = chain.last().expect("chain is nonempty");
        let next = ctx.ideal_apply(&colon, last)?;
        if &next == last {
            return Ok(chain);
        }
        chain.push(next);
    }
}

/// Evaluates `φ(N)`.
pub fn phi_eval(phi: &PhiSpec, n: &Submodule) -> Result<PhiValue> {
    let ctx = n.ctx();
    match phi {
        PhiSpec::Empty => Ok(None),
        PhiSpec::Zero => Ok(Some(ctx.zero_submodule())),
        PhiSpec::PhiN(k) => {
            let colon = ctx.colon(n)?;
            Ok(Some(ctx.ideal_apply(&colon.power(*k), n)?))
        }
        PhiSpec::Omega => Ok(omega_chain(n)?.pop()),
        PhiSpec::Product(left, right) => {
            if ctx.parts().is_none() {
                return Err(Error::ContextMismatch(format!(
                    "product phi needs a product context, got {}",
                    ctx.descriptor()
                )));
            }
            let (n1, n2) = ctx.split_submodule(n)?;
            match (phi_eval(left, &n1)?, phi_eval(right, &n2)?) {
                (Some(a), Some(b)) => Ok(Some(ctx.combine(&a, &b)?)),
                _ => Ok(None),
            }
        }
        PhiSpec::Table(t) => Ok(t.get(n)?.map(|v| v.intersection(n))),
    }
}

/// `a ⊆ b` for φ values, with the empty set below everything.
pub fn value_subset(a: Option<&Submodule>, b: Option<&Submodule>) -> bool {
    match (a, b) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(a), Some(b)) => a.is_subset(b),
    }
}

/// Outcome of comparing two φ functions over a whole lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeqOutcome {
    pub holds: bool,
    /// The first submodule (in lattice order) where `φ(N) ⊄ ψ(N)`.
    pub witness: Option<Submodule>,
}

/// `φ ≤ ψ`: `φ(N) ⊆ ψ(N)` for every submodule `N`.
pub fn phi_leq(phi: &PhiSpec, psi: &PhiSpec, ctx: &ModuleCtx, cap: usize) -> Result<LeqOutcome> {
    for n in ctx.enumerate_submodules(cap)? {
        let a = phi_eval(phi, &n)?;
        let b = phi_eval(psi, &n)?;
        if !value_subset(a.as_ref(), b.as_ref()) {
            return Ok(LeqOutcome {
                holds: false,
                witness: Some(n),
            });
        }
    }
    Ok(LeqOutcome {
        holds: true,
        witness: None,
    })
}

/// A pair `(a, x)` with `ax ∈ P \ φ(P)`, `a ∉ (P:M)` and `x ∉ P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Witness {
    pub scalar: RingElem,
    pub element: ModElem,
    pub product: ModElem,
}

impl Witness {
    /// Re-checks the witness against the raw definition.
    pub fn replays(&self, p: &Submodule, value: Option<&Submodule>) -> bool {
        let ctx = p.ctx();
        let Ok(colon) = ctx.colon(p) else {
            return false;
        };
        let product = ctx.scale(self.scalar, self.element);
        product == self.product
            && p.contains(product)
            && value.is_none_or(|v| !v.contains(product))
            && !colon.contains(self.scalar)
            && !p.contains(self.element)
    }

    /// `(a);(x)` with flattened coordinates.
    pub fn render(&self, ctx: &ModuleCtx) -> String {
        format!(
            "{};{}",
            ctx.ring().fmt_elem(self.scalar),
            ctx.fmt_elem(self.element)
        )
    }
}

/// A yes/no answer with a witness for "no".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn from_witness(witness: Option<Witness>) -> Verdict {
        Verdict {
            holds: witness.is_none(),
            witness,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimeMethod {
    /// Scan every pair `(r, x)`.
    Direct,
    /// `(P:M)` is a prime ideal and `M/P` is torsion free over `R/(P:M)`.
    TorsionFree,
}

fn require_proper(p: &Submodule) -> Result<()> {
    if p.is_whole() {
        return Err(Error::InvalidArgument(
            "primeness is only defined for proper submodules".into(),
        ));
    }
    Ok(())
}

/// The raw φ-prime test against a given value of `φ(P)`.
///
/// The witness is the least failing pair, scalar first.
pub fn is_phi_prime_at(p: &Submodule, value: Option<&Submodule>) -> Result<Verdict> {
    require_proper(p)?;
    let ctx = p.ctx();
    if let Some(v) = value {
        ctx.check_same(v.ctx(), "phi value")?;
    }
    let colon = ctx.colon(p)?;
    let outside: Vec<ModElem> = ctx.elements().filter(|&x| !p.contains(x)).collect();
    for a in ctx.ring().elements() {
        if colon.contains(a) {
            continue;
        }
        for &x in &outside {
            let ax = ctx.scale(a, x);
            if p.contains(ax) && value.is_none_or(|v| !v.contains(ax)) {
                return Ok(Verdict::from_witness(Some(Witness {
                    scalar: a,
                    element: x,
                    product: ax,
                })));
            }
        }
    }
    Ok(Verdict::from_witness(None))
}

pub fn is_phi_prime(p: &Submodule, phi: &PhiSpec) -> Result<Verdict> {
    require_proper(p)?;
    let value = phi_eval(phi, p)?;
    is_phi_prime_at(p, value.as_ref())
}

pub fn is_prime(p: &Submodule, method: PrimeMethod) -> Result<Verdict> {
    match method {
        PrimeMethod::Direct => is_phi_prime_at(p, None),
        PrimeMethod::TorsionFree => is_prime_torsion_free(p),
    }
}

pub fn is_weak_prime(p: &Submodule) -> Result<Verdict> {
    is_phi_prime(p, &PhiSpec::Zero)
}

fn is_prime_torsion_free(p: &Submodule) -> Result<Verdict> {
    require_proper(p)?;
    let ctx = p.ctx();
    let ring = ctx.ring();
    let colon = ctx.colon(p)?;
    if let Some((a, b)) = colon.prime_witness() {
        // b ∉ (P:M) gives some x with bx ∉ P; then a·(bx) ∈ P.
        let x = ctx
            .elements()
            .find(|&x| !p.contains(ctx.scale(b, x)))
            .expect("b lies outside the colon ideal");
        let element = ctx.scale(b, x);
        return Ok(Verdict::from_witness(Some(Witness {
            scalar: a,
            element,
            product: ctx.scale(a, element),
        })));
    }
    debug_assert!(
        colon.is_prime(),
        "a proper ideal without a failing pair is prime"
    );
    let q = ctx.quotient(p)?;
    let target = q.target();
    for class in target.elements().filter(|&c| c != target.zero()) {
        let ann = target.ann_elem(class)?;
        if ann != colon {
            let a = ring
                .elements()
                .find(|&a| ann.contains(a) && !colon.contains(a))
                .expect("annihilator strictly contains the colon ideal");
            let x = ctx
                .elements()
                .find(|&x| q.project(x) == class)
                .expect("projection is onto");
            return Ok(Verdict::from_witness(Some(Witness {
                scalar: a,
                element: x,
                product: ctx.scale(a, x),
            })));
        }
    }
    Ok(Verdict::from_witness(None))
}

/// The products `ax ∈ P` with `a ∉ (P:M)` and `x ∉ P`.
///
/// `P` is φ-prime exactly when this set lies inside `φ(P)`; with `φ(P)`
/// empty, exactly when it is empty.
pub fn obstruction(p: &Submodule) -> Result<FixedBitSet> {
    let ctx = p.ctx();
    let colon = ctx.colon(p)?;
    let outside: Vec<ModElem> = ctx.elements().filter(|&x| !p.contains(x)).collect();
    let mut out = FixedBitSet::with_capacity(ctx.size());
    for a in ctx.ring().elements().filter(|&a| !colon.contains(a)) {
        for &x in &outside {
            let ax = ctx.scale(a, x);
            if p.contains(ax) {
                out.insert(ax.index());
            }
        }
    }
    Ok(out)
}

/// φ-primeness from a precomputed obstruction set.
pub fn obstruction_allows(obstruction: &FixedBitSet, value: Option<&Submodule>) -> bool {
    match value {
        None => obstruction.is_clear(),
        Some(v) => obstruction.is_subset(v.members()),
    }
}

/// One flag of a [`PrimenessReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiFlag {
    pub phi: PhiSpec,
    pub holds: bool,
    pub witness: Option<Witness>,
}

/// Primeness flags of one submodule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimenessReport {
    pub submodule: Submodule,
    /// Prime, weak prime, then each requested φ in order.
    pub flags: Vec<PhiFlag>,
}

impl PrimenessReport {
    pub fn flag(&self, phi: &PhiSpec) -> Option<&PhiFlag> {
        self.flags.iter().find(|f| &f.phi == phi)
    }
}

#[cfg(test)]
mod tests;
