//! Finite commutative rings `Z_{n_1} x ... x Z_{n_k}` and their ideals.
//!
//! Elements are residue vectors. Internally an element is its index in the
//! lexicographic order of residue vectors (first factor most significant), so
//! comparing [`RingElem`]s compares residue vectors lexicographically.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};

/// An element of a [`FiniteRing`], identified by its lexicographic rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RingElem(pub(crate) u32);

impl RingElem {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug)]
struct RingData {
    moduli: Vec<u64>,
    strides: Vec<usize>,
    size: usize,
}

/// A product of residue rings with componentwise arithmetic.
#[derive(Clone, Debug)]
pub struct FiniteRing(Arc<RingData>);

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.moduli == other.0.moduli
    }
}

impl Eq for FiniteRing {}

pub(crate) fn mixed_radix_strides(radices: &[u64]) -> Option<(Vec<usize>, usize)> {
    let mut strides = vec![0usize; radices.len()];
    let mut acc: usize = 1;
    for (i, &r) in radices.iter().enumerate().rev() {
        strides[i] = acc;
        acc = acc.checked_mul(usize::try_from(r).ok()?)?;
    }
    if acc > u32::MAX as usize {
        return None;
    }
    Some((strides, acc))
}

impl FiniteRing {
    pub fn new(moduli: &[u64]) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidRing(
                "a ring needs at least one factor".into(),
            ));
        }
        if let Some(&m) = moduli.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidRing(format!("modulus {m} is below 2")));
        }
        let (strides, size) = mixed_radix_strides(moduli)
            .ok_or_else(|| Error::InvalidRing("ring is too large to index".into()))?;
        Ok(FiniteRing(Arc::new(RingData {
            moduli: moduli.to_vec(),
            strides,
            size,
        })))
    }

    pub fn moduli(&self) -> &[u64] {
        &self.0.moduli
    }

    pub fn num_factors(&self) -> usize {
        self.0.moduli.len()
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElem> {
        (0..self.size() as u32).map(RingElem)
    }

    #[inline]
    pub fn residue(&self, a: RingElem, factor: usize) -> u64 {
        (a.index() / self.0.strides[factor]) as u64 % self.0.moduli[factor]
    }

    pub fn residues(&self, a: RingElem) -> Vec<u64> {
        (0..self.num_factors())
            .map(|i| self.residue(a, i))
            .collect()
    }

    /// Builds an element from its residues, rejecting wrong arity or out-of-range values.
    pub fn elem(&self, residues: &[u64]) -> Result<RingElem> {
        if residues.len() != self.num_factors() {
            return Err(Error::InvalidElement(format!(
                "expected {} residues, got {}",
                self.num_factors(),
                residues.len()
            )));
        }
        for (&r, &n) in residues.iter().zip(self.moduli()) {
            if r >= n {
                return Err(Error::InvalidElement(format!(
                    "residue {r} is not below {n}"
                )));
            }
        }
        Ok(self.elem_from_residues(residues.iter().copied()))
    }

    /// Index lookup for a raw index; errors when out of range.
    pub fn elem_at(&self, index: usize) -> Result<RingElem> {
        if index < self.size() {
            Ok(RingElem(index as u32))
        } else {
            Err(Error::InvalidElement(format!(
                "ring element index {index} out of range"
            )))
        }
    }

    pub(crate) fn elem_from_residues(&self, residues: impl Iterator<Item = u64>) -> RingElem {
        let idx: usize = residues
            .zip(&self.0.strides)
            .map(|(r, &s)| r as usize * s)
            .sum();
        RingElem(idx as u32)
    }

    fn zip_with(&self, a: RingElem, b: RingElem, f: impl Fn(u64, u64, u64) -> u64) -> RingElem {
        self.elem_from_residues(
            (0..self.num_factors())
                .map(|i| f(self.residue(a, i), self.residue(b, i), self.0.moduli[i])),
        )
    }

    pub fn zero(&self) -> RingElem {
        RingElem(0)
    }

    pub fn one(&self) -> RingElem {
        self.elem_from_residues(std::iter::repeat_n(1, self.num_factors()))
    }

    pub fn add(&self, a: RingElem, b: RingElem) -> RingElem {
        self.zip_with(a, b, |x, y, n| (x + y) % n)
    }

    pub fn neg(&self, a: RingElem) -> RingElem {
        self.zip_with(a, a, |x, _, n| (n - x) % n)
    }

    pub fn sub(&self, a: RingElem, b: RingElem) -> RingElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: RingElem, b: RingElem) -> RingElem {
        self.zip_with(a, b, |x, y, n| ((x as u128 * y as u128) % n as u128) as u64)
    }

    pub fn pow(&self, a: RingElem, mut k: u64) -> RingElem {
        let mut base = a;
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: RingElem) -> bool {
        (0..self.num_factors()).all(|i| self.residue(a, i).gcd(&self.0.moduli[i]) == 1)
    }

    pub fn is_idempotent(&self, a: RingElem) -> bool {
        self.mul(a, a) == a
    }

    /// The idempotent reached by the powers of `a`.
    ///
    /// The sequence `a, a^2, ...` is eventually periodic in a finite ring, and
    /// some power in the periodic part is idempotent.
    pub fn idempotent_power(&self, a: RingElem) -> RingElem {
        let mut p = a;
        for _ in 0..=self.size() {
            if self.is_idempotent(p) {
                return p;
            }
            p = self.mul(p, a);
        }
        unreachable!("powers in a finite ring always reach an idempotent")
    }

    /// Formats an element as a residue tuple such as `(2,1)`.
    pub fn fmt_elem(&self, a: RingElem) -> String {
        let parts: Vec<String> = self.residues(a).iter().map(|r| r.to_string()).collect();
        format!("({})", parts.join(","))
    }

    /// Short description such as `Z6xZ6`.
    pub fn descriptor(&self) -> String {
        self.moduli()
            .iter()
            .map(|n| format!("Z{n}"))
            .collect::<Vec<_>>()
            .join("x")
    }
}

/// An ideal of a [`FiniteRing`], stored as one canonical divisor `d_i | n_i`
/// per factor; the ideal is `d_1 Z_{n_1} x ... x d_k Z_{n_k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    ring: FiniteRing,
    divisors: Vec<u64>,
}

impl std::hash::Hash for Ideal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.divisors.hash(state);
    }
}

impl Ideal {
    /// The smallest ideal containing `gens`.
    pub fn from_generators(ring: &FiniteRing, gens: &[RingElem]) -> Result<Ideal> {
        let mut divisors = ring.moduli().to_vec();
        for &g in gens {
            if g.index() >= ring.size() {
                return Err(Error::InvalidElement(format!(
                    "ring element index {} out of range",
                    g.index()
                )));
            }
            for (i, d) in divisors.iter_mut().enumerate() {
                *d = d.gcd(&ring.residue(g, i));
            }
        }
        Ok(Ideal {
            ring: ring.clone(),
            divisors,
        })
    }

    /// The ideal `d_1 Z x ... x d_k Z`; each `d_i` is reduced to `gcd(d_i, n_i)`.
    pub fn from_divisors(ring: &FiniteRing, divisors: &[u64]) -> Result<Ideal> {
        if divisors.len() != ring.num_factors() {
            return Err(Error::InvalidArgument(format!(
                "expected {} divisors, got {}",
                ring.num_factors(),
                divisors.len()
            )));
        }
        Ok(Ideal {
            ring: ring.clone(),
            divisors: divisors
                .iter()
                .zip(ring.moduli())
                .map(|(&d, &n)| d.gcd(&n))
                .collect(),
        })
    }

    pub fn zero(ring: &FiniteRing) -> Ideal {
        Ideal {
            ring: ring.clone(),
            divisors: ring.moduli().to_vec(),
        }
    }

    pub fn whole(ring: &FiniteRing) -> Ideal {
        Ideal {
            ring: ring.clone(),
            divisors: vec![1; ring.num_factors()],
        }
    }

    /// Every ideal of `ring`, ordered lexicographically by divisor vector.
    pub fn all(ring: &FiniteRing) -> Vec<Ideal> {
        let per_factor: Vec<Vec<u64>> = ring.moduli().iter().map(|&n| divisors_of(n)).collect();
        let mut out = vec![Vec::new()];
        for divs in &per_factor {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u64>| {
                    divs.iter().map(move |&d| {
                        let mut v = prefix.clone();
                        v.push(d);
                        v
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(|divisors| Ideal {
                ring: ring.clone(),
                divisors,
            })
            .collect()
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    /// The canonical generator `(d_1 mod n_1, ..., d_k mod n_k)`.
    pub fn generator(&self) -> RingElem {
        self.ring.elem_from_residues(
            self.divisors
                .iter()
                .zip(self.ring.moduli())
                .map(|(&d, &n)| d % n),
        )
    }

    pub fn contains(&self, a: RingElem) -> bool {
        self.divisors
            .iter()
            .enumerate()
            .all(|(i, &d)| self.ring.residue(a, i).is_multiple_of(d))
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.divisors
            .iter()
            .zip(&other.divisors)
            .all(|(&d, &e)| d % e == 0)
    }

    pub fn is_proper(&self) -> bool {
        self.divisors.iter().any(|&d| d != 1)
    }

    pub fn is_whole(&self) -> bool {
        !self.is_proper()
    }

    pub fn is_zero(&self) -> bool {
        self.divisors == self.ring.moduli()
    }

    pub fn len(&self) -> usize {
        self.divisors
            .iter()
            .zip(self.ring.moduli())
            .map(|(&d, &n)| (n / d) as usize)
            .product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn members(&self) -> Vec<RingElem> {
        self.ring.elements().filter(|&a| self.contains(a)).collect()
    }

    fn check_ring(&self, other: &Ideal) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::ContextMismatch(format!(
                "ideals over {} and {}",
                self.ring.descriptor(),
                other.ring.descriptor()
            )));
        }
        Ok(())
    }

    /// The ideal generated by all products `ab` with `a` in `self` and `b` in `other`.
    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let divisors = self
            .divisors
            .iter()
            .zip(&other.divisors)
            .zip(self.ring.moduli())
            .map(|((&d, &e), &n)| ((d as u128 * e as u128) % n as u128) as u64)
            .zip(self.ring.moduli())
            .map(|(p, &n)| p.gcd(&n))
            .collect();
        Ok(Ideal {
            ring: self.ring.clone(),
            divisors,
        })
    }

    /// `self^k`, with `self^0` the whole ring.
    pub fn power(&self, k: u32) -> Ideal {
        let mut acc = Ideal::whole(&self.ring);
        for _ in 0..k {
            acc = acc.product(self).expect("same ring");
        }
        acc
    }

    pub fn intersection(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        Ok(Ideal {
            ring: self.ring.clone(),
            divisors: self
                .divisors
                .iter()
                .zip(&other.divisors)
                .map(|(&d, &e)| d.lcm(&e))
                .collect(),
        })
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        Ok(Ideal {
            ring: self.ring.clone(),
            divisors: self
                .divisors
                .iter()
                .zip(&other.divisors)
                .map(|(&d, &e)| d.gcd(&e))
                .collect(),
        })
    }

    /// `{r : r^k in self for some k >= 1}`.
    ///
    /// Per factor, `r^k` is divisible by `d` for some `k` exactly when the
    /// squarefree kernel of `d` divides `r`.
    pub fn radical(&self) -> Ideal {
        Ideal {
            ring: self.ring.clone(),
            divisors: self
                .divisors
                .iter()
                .map(|&d| squarefree_kernel(d))
                .collect(),
        }
    }

    pub fn is_radical(&self) -> bool {
        self.radical() == *self
    }

    /// Proper, and `ab` in the ideal forces `a` or `b` into it.
    ///
    /// The quotient is `Z_{d_1} x ... x Z_{d_k}`, a domain exactly when one
    /// factor survives and its order is prime.
    pub fn is_prime(&self) -> bool {
        let mut nontrivial = self.divisors.iter().filter(|&&d| d != 1);
        match (nontrivial.next(), nontrivial.next()) {
            (Some(&d), None) => is_prime_number(d),
            _ => false,
        }
    }

    /// The lexicographically least pair `(a, b)` with `ab` in the ideal and
    /// neither factor in it. `None` when no such pair exists.
    pub fn prime_witness(&self) -> Option<(RingElem, RingElem)> {
        let outside: Vec<RingElem> = self
            .ring
            .elements()
            .filter(|&a| !self.contains(a))
            .collect();
        for &a in &outside {
            for &b in &outside {
                if self.contains(self.ring.mul(a, b)) {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.ring.fmt_elem(self.generator()))
    }
}

pub(crate) fn divisors_of(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

pub(crate) fn is_prime_number(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|p| p * p <= n)
            .all(|p| !n.is_multiple_of(p))
}

pub(crate) fn squarefree_kernel(mut n: u64) -> u64 {
    let mut out = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out *= p;
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out *= n;
    }
    out
}
