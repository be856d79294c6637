use std::collections::BTreeSet;

use super::sweep::Sweep;
use super::{TheoremId, Violation};
use crate::error::Result;
use crate::module::{ModuleCtx, MultSet, Submodule};
use crate::phi::{
    is_phi_prime, is_prime, obstruction, obstruction_allows, phi_eval, phi_localize_transport,
    phi_quotient_transport, value_subset, Characterizer, PhiSpec, PrimeMethod,
};
use crate::ring::Ideal;

pub(crate) fn run(id: TheoremId, ctx: &ModuleCtx, cap: usize) -> Result<(u64, Vec<Violation>)> {
    let sweep = Sweep::new(ctx, cap)?;
    let mut t = Tally::new(&sweep);
    match id {
        TheoremId::T2_1 => t2_1(&mut t),
        TheoremId::C2_2 => c2_2(&mut t),
        TheoremId::C2_3 => c2_3(&mut t),
        TheoremId::C2_4 => c2_4(&mut t)?,
        TheoremId::C2_5 => c2_5(&mut t, cap)?,
        TheoremId::P2_6 => p2_6(&mut t, cap)?,
        TheoremId::T2_7 => cyclic_phi1(&mut t, false)?,
        TheoremId::C2_8 => cyclic_phi1(&mut t, true)?,
        TheoremId::P2_9 => p2_9(&mut t)?,
        TheoremId::T2_10 => t2_10(&mut t)?,
        TheoremId::T2_11 => t2_11(&mut t, cap)?,
        TheoremId::T2_12i => t2_12i(&mut t, cap)?,
        TheoremId::T2_12ii => t2_12ii(&mut t, cap)?,
        TheoremId::T2_13 => t2_13(&mut t, cap)?,
        TheoremId::RemarkA => remark_a(&mut t),
        TheoremId::Chain => chain(&mut t)?,
    }
    Ok((t.instances, t.violations))
}

pub(crate) struct Tally<'a> {
    pub sweep: &'a Sweep,
    pub instances: u64,
    pub violations: Vec<Violation>,
}

impl<'a> Tally<'a> {
    pub fn new(sweep: &'a Sweep) -> Tally<'a> {
        Tally {
            sweep,
            instances: 0,
            violations: Vec::new(),
        }
    }

    /// Counts one instance; records a violation when `ok` is false.
    pub fn check(
        &mut self,
        ok: bool,
        p: &Submodule,
        phi: impl FnOnce() -> String,
        detail: impl FnOnce() -> String,
    ) {
        self.instances += 1;
        if !ok {
            let elements = prime_failure(p);
            self.violations.push(Violation {
                context: self.sweep.descriptor(),
                submodule: p.label(),
                phi: phi(),
                elements,
                detail: detail(),
            });
        }
    }
}

/// The least pair showing `P` is not prime, rendered; empty when `P` is prime.
fn prime_failure(p: &Submodule) -> Vec<String> {
    if !p.is_proper() {
        return Vec::new();
    }
    match is_prime(p, PrimeMethod::Direct) {
        Ok(v) => v
            .witness
            .map(|w| {
                vec![
                    p.ctx().ring().fmt_elem(w.scalar),
                    p.ctx().fmt_elem(w.element),
                ]
            })
            .unwrap_or_default(),
        Err(_) => Vec::new(),
    }
}

pub(crate) fn value_label(v: Option<&Submodule>) -> String {
    match v {
        None => "phi(P)=empty".into(),
        Some(v) => format!("phi(P)={}", v.label()),
    }
}

fn t2_1(t: &mut Tally) {
    let s = t.sweep;
    for (i, p, info) in s.proper() {
        for v in s.values(i) {
            let hyp = s.phi_prime_at(i, v) && !value_subset(Some(&info.colon_p), v);
            t.check(
                !hyp || s.is_prime(i),
                p,
                || value_label(v),
                || "not prime".into(),
            );
        }
    }
}

fn c2_2(t: &mut Tally) {
    let s = t.sweep;
    let zero = s.ctx.zero_submodule();
    for (i, p, info) in s.proper() {
        let hyp = s.phi_prime_at(i, Some(&zero)) && !info.colon_p.is_zero();
        t.check(
            !hyp || s.is_prime(i),
            p,
            || "zero".into(),
            || "weak prime with (P:M)P ≠ 0 but not prime".into(),
        );
    }
}

fn c2_3(t: &mut Tally) {
    let s = t.sweep;
    for (i, p, info) in s.proper() {
        let omega_prime = s.phi_prime_at(i, Some(&info.omega));
        for v in s.values(i) {
            let hyp = s.phi_prime_at(i, v) && value_subset(v, Some(&info.colon2_p));
            t.check(
                !hyp || omega_prime,
                p,
                || value_label(v),
                || "not phi_omega-prime".into(),
            );
        }
    }
}

/// Ring subsets for `√(φ(P):M)`, where the empty value gives the empty set.
fn radical_of_value(ctx: &ModuleCtx, v: Option<&Submodule>) -> Result<Option<(Ideal, Ideal)>> {
    match v {
        None => Ok(None),
        Some(v) => {
            let c = ctx.colon(v)?;
            let r = c.radical();
            Ok(Some((c, r)))
        }
    }
}

fn c2_4(t: &mut Tally) -> Result<()> {
    let s = t.sweep;
    for (i, p, info) in s.proper() {
        let prime = s.is_prime(i);
        for v in s.values(i) {
            if !s.phi_prime_at(i, v) {
                t.check(true, p, String::new, String::new);
                continue;
            }
            let colon = &info.colon;
            let rad = radical_of_value(&s.ctx, v)?;
            // with the empty set: ∅ ⊆ (P:M), and ∅ ⊊ (P:M) since 0 ∈ (P:M)
            let (rad_in_colon, colon_in_rad) = match &rad {
                None => (true, false),
                Some((_, r)) => (r.is_subset(colon), colon.is_subset(r)),
            };
            let label = || value_label(v);
            t.check(rad_in_colon || colon_in_rad, p, label, || {
                "incomparable radical".into()
            });
            let strict_up = colon_in_rad && !rad_in_colon;
            t.check(!strict_up || !prime, p, label, || {
                "(P:M) ⊊ √(φ(P):M) but P prime".into()
            });
            let strict_down = rad_in_colon && !colon_in_rad;
            t.check(!strict_down || prime, p, label, || {
                "√(φ(P):M) ⊊ (P:M) but P not prime".into()
            });
            if let Some((c, r)) = &rad {
                let radical = c == r;
                t.check(!radical || c == colon || prime, p, label, || {
                    "radical φ(P) with (P:M) ≠ (φ(P):M) and P not prime".into()
                });
            }
        }
    }
    Ok(())
}

fn remark_a(t: &mut Tally) {
    let s = t.sweep;
    let zero = s.ctx.zero_submodule();
    for (i, p, info) in s.proper() {
        let prime = s.is_prime(i);
        for v in s.values(i) {
            let hyp = s.phi_prime_at(i, v) && !prime;
            let label = || value_label(v);
            let below1 = value_subset(v, Some(&info.colon_p));
            t.check(
                !(hyp && below1) || v == Some(&info.colon_p),
                p,
                label,
                || "φ(P) ⊆ (P:M)P without equality".into(),
            );
            let below2 = value_subset(v, Some(&info.colon2_p));
            t.check(
                !(hyp && below2) || v == Some(&info.colon2_p),
                p,
                label,
                || "φ(P) ⊆ (P:M)²P without equality".into(),
            );
        }
        let weak = s.phi_prime_at(i, Some(&zero));
        t.check(
            !(weak && !prime) || info.colon_p.is_zero(),
            p,
            || "zero".into(),
            || "(P:M)P ≠ 0".into(),
        );
        let phi2 = s.phi_prime_at(i, Some(&info.colon2_p));
        t.check(
            !(phi2 && !prime) || info.colon_p == info.colon2_p,
            p,
            || "phin 2".into(),
            || "(P:M)P ≠ (P:M)²P".into(),
        );
    }
}

fn chain(t: &mut Tally) -> Result<()> {
    let s = t.sweep;
    let zero = s.ctx.zero_submodule();
    for (i, p, info) in s.proper() {
        // index k holds (P:M)^k P; k = 0 is P itself
        let phi_n: Vec<Submodule> = (0..=4)
            .map(|n| s.ctx.ideal_apply(&info.colon.power(n), p))
            .collect::<Result<_>>()?;
        let prime = s.is_prime(i);
        let weak = s.phi_prime_at(i, Some(&zero));
        let omega = s.phi_prime_at(i, Some(&info.omega));
        let n_prime: Vec<bool> = phi_n.iter().map(|v| s.phi_prime_at(i, Some(v))).collect();
        let steps = [
            (prime, omega, "prime", "omega"),
            (omega, n_prime[4], "omega", "phin 4"),
            (n_prime[4], n_prime[3], "phin 4", "phin 3"),
            (n_prime[3], n_prime[2], "phin 3", "phin 2"),
            (n_prime[2], n_prime[1], "phin 2", "phin 1"),
            (n_prime[1], n_prime[0], "phin 1", "phin 0"),
            (prime, weak, "prime", "zero"),
            (weak, n_prime[1], "zero", "phin 1"),
        ];
        for (from, to, a, b) in steps {
            t.check(
                !from || to,
                p,
                || format!("{a} => {b}"),
                || format!("{a}-prime but not {b}-prime"),
            );
        }
        // pointwise φ(P) ⊆ ψ(P) transfers φ-primeness to ψ-primeness
        let named: Vec<(String, Option<&Submodule>)> = [
            ("empty".to_string(), None),
            ("zero".to_string(), Some(&zero)),
            ("omega".to_string(), Some(&info.omega)),
        ]
        .into_iter()
        .chain(
            phi_n
                .iter()
                .enumerate()
                .map(|(k, v)| (format!("phin {k}"), Some(v))),
        )
        .collect();
        for (a, va) in &named {
            for (b, vb) in &named {
                if value_subset(*va, *vb) {
                    let ok = !s.phi_prime_at(i, *va) || s.phi_prime_at(i, *vb);
                    t.check(
                        ok,
                        p,
                        || format!("{a} <= {b}"),
                        || "monotone transfer failed".into(),
                    );
                }
            }
        }
    }
    Ok(())
}

fn cyclic_phi1(t: &mut Tally, both_ways: bool) -> Result<()> {
    let s = t.sweep;
    let ctx = &s.ctx;
    for x in ctx.elements().filter(|&x| x != ctx.zero()) {
        let rx = ctx.cyclic(x);
        if rx.is_whole() || !ctx.ann_elem(x)?.is_zero() {
            continue;
        }
        let prime = is_prime(&rx, PrimeMethod::Direct)?.holds;
        let phi1 = is_phi_prime(&rx, &PhiSpec::PhiN(1))?.holds;
        let ok = if both_ways {
            prime == phi1
        } else {
            prime || !phi1
        };
        t.check(
            ok,
            &rx,
            || "phin 1".into(),
            || format!("x = {}", ctx.fmt_elem(x)),
        );
    }
    Ok(())
}

fn p2_9(t: &mut Tally) -> Result<()> {
    let s = t.sweep;
    let ctx = &s.ctx;
    let ring = ctx.ring();
    let ideals = Ideal::all(ring);
    for (i, p, info) in s.proper() {
        if !s.phi_prime_at(i, Some(&info.colon_p)) {
            continue;
        }
        let zd = ctx.zero_divisors_on_quotient(p)?;
        for &a in &zd {
            let ap = Submodule::from_elements(ctx, p.elements().map(|x| ctx.scale(a, x)));
            t.check(
                ap.is_subset(&info.colon_p),
                p,
                || "phin 1".into(),
                || format!("aP ⊄ (P:M)P for a = {}", ring.fmt_elem(a)),
            );
        }
        for j in &ideals {
            let inside = info.colon.is_subset(j) && j.members().iter().all(|a| zd.contains(a));
            if inside {
                let jp = ctx.ideal_apply(j, p)?;
                t.check(
                    jp == info.colon_p,
                    p,
                    || "phin 1".into(),
                    || format!("JP ≠ (P:M)P for J = {j}"),
                );
            }
        }
    }
    Ok(())
}

fn t2_10(t: &mut Tally) -> Result<()> {
    let s = t.sweep;
    let ctx = &s.ctx;
    for a in ctx.ring().elements() {
        let am = ctx.scaled_module(a)?;
        if am.is_whole() || !ctx.torsion_kernel(a)?.is_subset(&am) {
            continue;
        }
        let prime = is_prime(&am, PrimeMethod::Direct)?.holds;
        let phi1 = is_phi_prime(&am, &PhiSpec::PhiN(1))?.holds;
        t.check(
            prime == phi1,
            &am,
            || "phin 1".into(),
            || format!("a = {}", ctx.ring().fmt_elem(a)),
        );
    }
    Ok(())
}

fn t2_11(t: &mut Tally, cap: usize) -> Result<()> {
    let s = t.sweep;
    let ch = Characterizer::new(&s.ctx, cap)?;
    for (_, p, _) in s.proper() {
        for phi in PhiSpec::standard_family() {
            let r = ch.characterize(p, &phi)?;
            t.check(
                r.agree(),
                p,
                || phi.to_string(),
                || format!("def={} ii={} iii={} iv={}", r.definition, r.ii, r.iii, r.iv),
            );
        }
    }
    Ok(())
}

fn t2_12i(t: &mut Tally, cap: usize) -> Result<()> {
    let s = t.sweep;
    let family = PhiSpec::standard_family();
    for l in &s.lattice {
        let q = s.ctx.quotient(l)?;
        let tables: Vec<PhiSpec> = family
            .iter()
            .map(|phi| phi_quotient_transport(phi, &q, cap))
            .collect::<Result<_>>()?;
        for (i, p, _) in s.proper().filter(|(_, p, _)| l.is_subset(p)) {
            let pbar = q.image(p)?;
            let d = obstruction(&pbar)?;
            for v in s.values(i) {
                if !s.phi_prime_at(i, v) {
                    t.check(true, p, String::new, String::new);
                    continue;
                }
                let w = v.map(|v| q.image(v)).transpose()?;
                t.check(
                    obstruction_allows(&d, w.as_ref()),
                    p,
                    || value_label(v),
                    || format!("P/L not φ_L-prime for L = {}", l.label()),
                );
            }
            for (phi, table) in family.iter().zip(&tables) {
                if is_phi_prime(p, phi)?.holds {
                    let w = phi_eval(table, &pbar)?;
                    t.check(
                        obstruction_allows(&d, w.as_ref()),
                        p,
                        || phi.to_string(),
                        || format!("P/L not φ_L-prime for L = {}", l.label()),
                    );
                }
            }
        }
    }
    Ok(())
}

fn t2_12ii(t: &mut Tally, cap: usize) -> Result<()> {
    let s = t.sweep;
    let ctx = &s.ctx;
    let ring = ctx.ring();
    let family = PhiSpec::standard_family();
    for gen in ring.elements() {
        let set = MultSet::cyclic(ring, gen)?;
        let loc = ctx.localize(&set)?;
        for &u in set.elements() {
            t.check(
                loc.acts_invertibly(u),
                &ctx.zero_submodule(),
                || set.label(),
                || format!("{} does not act invertibly", ring.fmt_elem(u)),
            );
        }
        let tables: Vec<PhiSpec> = family
            .iter()
            .map(|phi| phi_localize_transport(phi, &loc, cap))
            .collect::<Result<_>>()?;
        for (i, p, _) in s.proper() {
            let sp = loc.image(p)?;
            if sp.is_whole() {
                t.check(true, p, String::new, String::new);
                continue;
            }
            let saturated = ctx.saturation(p, &set)?;
            let sat_equal = &saturated == p;
            let d = obstruction(&sp)?;
            let images = |v: Option<&Submodule>| v.map(|v| loc.image(v)).transpose();
            let label = |a: &Option<Submodule>, b: &Option<Submodule>| {
                format!(
                    "{} S⁻¹φ(P)={} (S⁻¹φ)(S⁻¹P)={}",
                    set.label(),
                    a.as_ref().map_or("empty".into(), Submodule::label),
                    b.as_ref().map_or("empty".into(), Submodule::label)
                )
            };
            // φ(P) and φ(P(S)) coincide when P(S) = P and are free otherwise
            let first: BTreeSet<Option<Submodule>> = s
                .values(i)
                .filter(|&v| s.phi_prime_at(i, v))
                .map(images)
                .collect::<Result<_>>()?;
            let second: BTreeSet<Option<Submodule>> = if sat_equal {
                BTreeSet::new()
            } else {
                s.values(s.index_of(&saturated))
                    .map(images)
                    .collect::<Result<_>>()?
            };
            for a in &first {
                let seconds: Vec<&Option<Submodule>> = if sat_equal {
                    vec![a]
                } else {
                    second.iter().collect()
                };
                for b in seconds {
                    if !value_subset(a.as_ref(), b.as_ref()) {
                        t.check(true, p, String::new, String::new);
                        continue;
                    }
                    t.check(
                        obstruction_allows(&d, b.as_ref()),
                        p,
                        || label(a, b),
                        || "S⁻¹P not (S⁻¹φ)-prime".into(),
                    );
                    if a.as_ref() != Some(&sp) {
                        t.check(sat_equal, p, || label(a, b), || "P(S) ≠ P".into());
                    }
                }
            }
            for (phi, table) in family.iter().zip(&tables) {
                if !is_phi_prime(p, phi)?.holds {
                    continue;
                }
                let a = images(phi_eval(phi, p)?.as_ref())?;
                let b = phi_eval(table, &sp)?;
                if !value_subset(a.as_ref(), b.as_ref()) {
                    continue;
                }
                t.check(
                    obstruction_allows(&d, b.as_ref()),
                    p,
                    || format!("{phi} {}", set.label()),
                    || "S⁻¹P not (S⁻¹φ)-prime".into(),
                );
                if a.as_ref() != Some(&sp) {
                    t.check(
                        sat_equal,
                        p,
                        || format!("{phi} {}", set.label()),
                        || "P(S) ≠ P".into(),
                    );
                }
            }
        }
    }
    Ok(())
}

/// Distinct values `ψ1(N1) × ψ2(N2)` over the given value ranges.
fn product_values(
    ctx: &ModuleCtx,
    left: &[Option<&Submodule>],
    right: &[Option<&Submodule>],
) -> Result<BTreeSet<Option<Submodule>>> {
    let mut out = BTreeSet::new();
    for a in left {
        for b in right {
            out.insert(match (a, b) {
                (Some(a), Some(b)) => Some(ctx.combine(a, b)?),
                _ => None,
            });
        }
    }
    Ok(out)
}

fn c2_5(t: &mut Tally, cap: usize) -> Result<()> {
    product_weak_prime(t, cap, false)
}

fn p2_6(t: &mut Tally, cap: usize) -> Result<()> {
    product_weak_prime(t, cap, true)
}

/// `P1 × M2` with `P1` weak prime, against every value above the bound.
fn product_weak_prime(t: &mut Tally, cap: usize, omega_bound: bool) -> Result<()> {
    let s = t.sweep;
    let ctx = &s.ctx;
    let Some((m1, m2)) = ctx.parts() else {
        return Ok(());
    };
    let zero_m2 = ctx.combine(&m1.zero_submodule(), &m2.whole())?;
    for p1 in m1
        .enumerate_submodules(cap)?
        .into_iter()
        .filter(Submodule::is_proper)
    {
        if !is_phi_prime(&p1, &PhiSpec::Zero)?.holds {
            continue;
        }
        let p = ctx.combine(&p1, &m2.whole())?;
        let i = s.index_of(&p);
        let bound = if omega_bound {
            s.info[i].omega.clone()
        } else {
            zero_m2.clone()
        };
        for v in s.values(i).flatten().filter(|v| bound.is_subset(v)) {
            t.check(
                s.phi_prime_at(i, Some(v)),
                &p,
                || value_label(Some(v)),
                || format!("P1 = {} weak prime", p1.label()),
            );
        }
    }
    Ok(())
}

fn t2_13(t: &mut Tally, cap: usize) -> Result<()> {
    let s = t.sweep;
    let ctx = &s.ctx;
    let Some((m1, m2)) = ctx.parts() else {
        return Ok(());
    };
    let s1 = Sweep::new(m1, cap)?;
    let s2 = Sweep::new(m2, cap)?;
    let all_values = |sw: &Sweep| -> Vec<Option<Submodule>> {
        std::iter::once(None)
            .chain(sw.lattice.iter().cloned().map(Some))
            .collect()
    };
    let check_value = |t: &mut Tally, p: &Submodule, v: &Option<Submodule>, form: &str| {
        let i = s.index_of(p);
        t.check(
            s.phi_prime_at(i, v.as_ref()),
            p,
            || value_label(v.as_ref()),
            || format!("form ({form}) not φ-prime"),
        );
    };
    // (i): ψi(Ni) = Ni
    for (_, n1, _) in s1.proper() {
        for (_, n2, _) in s2.proper() {
            let p = ctx.combine(n1, n2)?;
            check_value(t, &p, &Some(p.clone()), "i");
        }
    }
    for (left, (own, other)) in [(true, (&s1, &s2)), (false, (&s2, &s1))] {
        let other_values = all_values(other);
        let other_refs: Vec<Option<&Submodule>> = other_values.iter().map(Option::as_ref).collect();
        let whole_other = other.ctx.whole();
        for (i, p1, _) in own.proper() {
            let p = if left {
                ctx.combine(p1, &whole_other)?
            } else {
                ctx.combine(&whole_other, p1)?
            };
            let own_values: Vec<Option<&Submodule>> = own.values(i).collect();
            // (ii)/(iv): P1 prime, any ψ
            if own.is_prime(i) {
                let vals = if left {
                    product_values(ctx, &own_values, &other_refs)?
                } else {
                    product_values(ctx, &other_refs, &own_values)?
                };
                for v in &vals {
                    check_value(t, &p, v, if left { "ii" } else { "iv" });
                }
            }
            // (iii)/(v): P1 ψ-prime at its value, ψ(M_other) = M_other
            for u in own_values.iter().filter(|&&u| own.phi_prime_at(i, u)) {
                let v = match u {
                    Some(u) if left => Some(ctx.combine(u, &whole_other)?),
                    Some(u) => Some(ctx.combine(&whole_other, u)?),
                    None => None,
                };
                check_value(t, &p, &v, if left { "iii" } else { "v" });
            }
        }
    }
    Ok(())
}
