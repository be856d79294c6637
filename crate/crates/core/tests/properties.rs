//! Randomised checks of lattice, colon and φ-prime invariants against brute
//! force over small modules.

use proptest::prelude::*;
use proptest::sample::Index;

use phiprime::phi::{
    is_phi_prime, is_phi_prime_at, is_prime, obstruction, obstruction_allows, phi_eval,
    value_subset, PhiSpec, PrimeMethod,
};
use phiprime::{FiniteRing, ModuleCtx, Submodule};

const CAP: usize = 4096;

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Modules with between 2 and 64 elements, over rings with one or two factors.
fn arb_ctx() -> impl Strategy<Value = ModuleCtx> {
    prop::collection::vec(2u64..=8, 1..=2)
        .prop_flat_map(|moduli| {
            let blocks: Vec<_> = moduli
                .iter()
                .map(|&n| prop::collection::vec(prop::sample::select(divisors(n)), 0..=2))
                .collect();
            (Just(moduli), blocks)
        })
        .prop_filter_map("module too large or trivial", |(moduli, blocks)| {
            let size: u64 = blocks.iter().flatten().product();
            if !(2..=64).contains(&size) {
                return None;
            }
            ModuleCtx::new(&FiniteRing::new(&moduli).ok()?, blocks).ok()
        })
}

fn pick(lattice: &[Submodule], i: &Index) -> Submodule {
    lattice[i.index(lattice.len())].clone()
}

fn proper(lattice: &[Submodule], i: &Index) -> Option<Submodule> {
    let proper: Vec<&Submodule> = lattice.iter().filter(|p| p.is_proper()).collect();
    (!proper.is_empty()).then(|| proper[i.index(proper.len())].clone())
}

/// The defining condition, scanned over every scalar and element.
fn raw_phi_prime(p: &Submodule, value: Option<&Submodule>) -> bool {
    let ctx = p.ctx();
    let ring = ctx.ring();
    ring.elements().all(|a| {
        let in_colon = ctx.elements().all(|m| p.contains(ctx.scale(a, m)));
        ctx.elements().all(|x| {
            let ax = ctx.scale(a, x);
            let hyp = p.contains(ax) && value.is_none_or(|v| !v.contains(ax));
            !hyp || in_colon || p.contains(x)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn lattice_is_closed(ctx in arb_ctx(), i in any::<Index>(), j in any::<Index>()) {
        let lattice = ctx.enumerate_submodules(CAP).unwrap();
        prop_assert!(lattice.windows(2).all(|w| w[0] != w[1]));
        for n in &lattice {
            prop_assert!(n.contains(ctx.zero()));
            for x in n.elements() {
                for y in n.elements() {
                    prop_assert!(n.contains(ctx.add(x, y)));
                }
                for r in ctx.ring().elements() {
                    prop_assert!(n.contains(ctx.scale(r, x)));
                }
            }
        }
        let (a, b) = (pick(&lattice, &i), pick(&lattice, &j));
        prop_assert!(lattice.contains(&a.sum(&b)));
        prop_assert!(lattice.contains(&a.intersection(&b)));
    }

    #[test]
    fn colon_matches_brute_force(ctx in arb_ctx(), i in any::<Index>()) {
        let lattice = ctx.enumerate_submodules(CAP).unwrap();
        let p = pick(&lattice, &i);
        let colon = ctx.colon(&p).unwrap();
        for a in ctx.ring().elements() {
            let kills = ctx.elements().all(|m| p.contains(ctx.scale(a, m)));
            prop_assert_eq!(colon.contains(a), kills);
        }
    }

    #[test]
    fn obstruction_matches_definition(ctx in arb_ctx(), i in any::<Index>(), j in any::<Index>(), empty in any::<bool>()) {
        let lattice = ctx.enumerate_submodules(CAP).unwrap();
        let Some(p) = proper(&lattice, &i) else { return Ok(()) };
        let below: Vec<&Submodule> = lattice.iter().filter(|q| q.is_subset(&p)).collect();
        let value = (!empty).then(|| below[j.index(below.len())].clone());
        let verdict = is_phi_prime_at(&p, value.as_ref()).unwrap();
        prop_assert_eq!(verdict.holds, raw_phi_prime(&p, value.as_ref()));
        prop_assert_eq!(verdict.holds, obstruction_allows(&obstruction(&p).unwrap(), value.as_ref()));
        if let Some(w) = verdict.witness {
            prop_assert!(!verdict.holds);
            prop_assert!(w.replays(&p, value.as_ref()));
        }
    }

    #[test]
    fn phi_values_shrink_along_the_family(ctx in arb_ctx(), i in any::<Index>()) {
        let lattice = ctx.enumerate_submodules(CAP).unwrap();
        let n = pick(&lattice, &i);
        let v = |phi: PhiSpec| phi_eval(&phi, &n).unwrap();
        let (one, two, omega) = (v(PhiSpec::PhiN(1)), v(PhiSpec::PhiN(2)), v(PhiSpec::Omega));
        prop_assert!(value_subset(one.as_ref(), Some(&n)));
        prop_assert!(value_subset(two.as_ref(), one.as_ref()));
        prop_assert!(value_subset(omega.as_ref(), two.as_ref()));
        prop_assert!(v(PhiSpec::Zero).unwrap().is_zero());
        prop_assert!(v(PhiSpec::Empty).is_none());
    }

    #[test]
    fn primeness_implications(ctx in arb_ctx(), i in any::<Index>()) {
        let lattice = ctx.enumerate_submodules(CAP).unwrap();
        let Some(p) = proper(&lattice, &i) else { return Ok(()) };
        let holds = |phi: PhiSpec| is_phi_prime(&p, &phi).unwrap().holds;
        let direct = is_prime(&p, PrimeMethod::Direct).unwrap().holds;
        prop_assert_eq!(direct, is_prime(&p, PrimeMethod::TorsionFree).unwrap().holds);
        prop_assert_eq!(direct, holds(PhiSpec::Empty));
        let chain = [
            holds(PhiSpec::Empty),
            holds(PhiSpec::Omega),
            holds(PhiSpec::PhiN(4)),
            holds(PhiSpec::PhiN(3)),
            holds(PhiSpec::PhiN(2)),
            holds(PhiSpec::PhiN(1)),
        ];
        prop_assert!(chain.windows(2).all(|w| !w[0] || w[1]), "{:?}", chain);
        let weak = holds(PhiSpec::Zero);
        prop_assert!(!direct || weak);
        prop_assert!(!weak || holds(PhiSpec::PhiN(1)));
    }
}
