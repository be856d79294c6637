use std::collections::BTreeSet;

use super::*;
use crate::module::{product_context, MultSet};
use crate::ring::{FiniteRing, Ideal};

fn ctx(moduli: &[u64], blocks: &[&[u64]]) -> ModuleCtx {
    let ring = FiniteRing::new(moduli).unwrap();
    ModuleCtx::new(&ring, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
}

fn regular(moduli: &[u64]) -> ModuleCtx {
    ModuleCtx::regular(&FiniteRing::new(moduli).unwrap())
}

fn gen(c: &ModuleCtx, gens: &[&[u64]]) -> Submodule {
    let g: Vec<ModElem> = gens.iter().map(|v| c.elem(v).unwrap()).collect();
    c.generate(&g).unwrap()
}

fn re(c: &ModuleCtx, residues: &[u64]) -> RingElem {
    c.ring().elem(residues).unwrap()
}

fn sample_contexts() -> Vec<ModuleCtx> {
    vec![
        regular(&[4]),
        regular(&[8]),
        regular(&[12]),
        regular(&[6, 6]),
        regular(&[2, 4]),
        ctx(&[4], &[&[4, 2]]),
        ctx(&[12], &[&[6, 2]]),
        ctx(&[2, 3], &[&[2, 2], &[3]]),
        ctx(&[9], &[&[9, 3]]),
    ]
}

fn set_of(n: &Submodule) -> BTreeSet<ModElem> {
    n.elements().collect()
}

fn close(c: &ModuleCtx, seed: BTreeSet<ModElem>) -> BTreeSet<ModElem> {
    let mut s = seed;
    s.insert(c.zero());
    loop {
        let cur: Vec<_> = s.iter().copied().collect();
        let before = s.len();
        for &x in &cur {
            for &y in &cur {
                s.insert(c.add(x, y));
            }
        }
        if s.len() == before {
            return s;
        }
    }
}

fn colon_oracle(p: &Submodule) -> BTreeSet<RingElem> {
    let c = p.ctx();
    c.ring()
        .elements()
        .filter(|&r| c.elements().all(|x| p.contains(c.scale(r, x))))
        .collect()
}

/// Span of `r_1 ... r_k x` with `r_i ∈ (N:M)` and `x ∈ N`.
fn phi_n_oracle(n: &Submodule, k: u32) -> BTreeSet<ModElem> {
    let c = n.ctx();
    let colon = colon_oracle(n);
    let mut cur: BTreeSet<ModElem> = n.elements().collect();
    for _ in 0..k {
        let next = cur
            .iter()
            .flat_map(|&x| colon.iter().map(move |&r| c.scale(r, x)))
            .collect();
        cur = close(c, next);
    }
    cur
}

fn phi_omega_oracle(n: &Submodule) -> BTreeSet<ModElem> {
    let mut k = 1;
    loop {
        let a = phi_n_oracle(n, k);
        if a == phi_n_oracle(n, k + 1) {
            return a;
        }
        k += 1;
    }
}

fn naive_phi_prime(p: &Submodule, value: Option<&BTreeSet<ModElem>>) -> bool {
    let c = p.ctx();
    let colon = colon_oracle(p);
    c.ring().elements().all(|r| {
        c.elements().all(|x| {
            let rx = c.scale(r, x);
            let in_diff = p.contains(rx) && value.is_none_or(|v| !v.contains(&rx));
            !in_diff || colon.contains(&r) || p.contains(x)
        })
    })
}

fn proper(c: &ModuleCtx) -> Vec<Submodule> {
    c.enumerate_submodules(DEFAULT_CAP_FOR_TESTS)
        .unwrap()
        .into_iter()
        .filter(|p| p.is_proper())
        .collect()
}

const DEFAULT_CAP_FOR_TESTS: usize = crate::module::DEFAULT_CAP;

#[test]
fn phi_one_of_four_z12() {
    let c = regular(&[12]);
    let n = gen(&c, &[&[4]]);
    assert_eq!(phi_eval(&PhiSpec::PhiN(1), &n).unwrap(), Some(n.clone()));
    assert_eq!(
        phi_eval(&PhiSpec::Zero, &n).unwrap(),
        Some(c.zero_submodule())
    );
    assert_eq!(phi_eval(&PhiSpec::Empty, &n).unwrap(), None);
}

#[test]
fn phi_omega_of_zero_times_z6() {
    let c = regular(&[6, 6]);
    let p = gen(&c, &[&[0, 1]]);
    assert_eq!(phi_eval(&PhiSpec::Omega, &p).unwrap(), Some(p.clone()));
    assert_eq!(omega_chain(&p).unwrap().len(), 1);
}

#[test]
fn phi_values_match_span_oracle() {
    for c in sample_contexts() {
        for n in c.enumerate_submodules(DEFAULT_CAP_FOR_TESTS).unwrap() {
            for k in 1..=3 {
                let v = phi_eval(&PhiSpec::PhiN(k), &n).unwrap().unwrap();
                assert_eq!(set_of(&v), phi_n_oracle(&n, k), "{} phi_{k}", n.label());
                assert!(v.is_subset(&n));
            }
            let w = phi_eval(&PhiSpec::Omega, &n).unwrap().unwrap();
            assert_eq!(set_of(&w), phi_omega_oracle(&n));
            let chain = omega_chain(&n).unwrap();
            let meet = chain.iter().fold(n.clone(), |acc, m| acc.intersection(m));
            assert_eq!(&meet, chain.last().unwrap());
        }
    }
}

#[test]
fn leq_examples() {
    let c = regular(&[12]);
    let cap = DEFAULT_CAP_FOR_TESTS;
    assert!(
        phi_leq(&PhiSpec::Empty, &PhiSpec::Zero, &c, cap)
            .unwrap()
            .holds
    );
    assert!(
        phi_leq(&PhiSpec::Omega, &PhiSpec::PhiN(2), &c, cap)
            .unwrap()
            .holds
    );
    assert!(
        phi_leq(&PhiSpec::PhiN(2), &PhiSpec::PhiN(1), &c, cap)
            .unwrap()
            .holds
    );
    let out = phi_leq(&PhiSpec::PhiN(1), &PhiSpec::Zero, &c, cap).unwrap();
    assert!(!out.holds);
    assert_eq!(out.witness, Some(gen(&c, &[&[4]])));
}

#[test]
fn prime_examples() {
    let c = regular(&[12]);
    for method in [PrimeMethod::Direct, PrimeMethod::TorsionFree] {
        assert!(is_prime(&gen(&c, &[&[2]]), method).unwrap().holds);
    }
    let z7 = regular(&[7]);
    assert!(
        is_prime(&z7.zero_submodule(), PrimeMethod::TorsionFree)
            .unwrap()
            .holds
    );
    assert!(
        is_prime(&z7.zero_submodule(), PrimeMethod::Direct)
            .unwrap()
            .holds
    );
    assert!(matches!(
        is_prime(&c.whole(), PrimeMethod::Direct),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn weak_prime_witness_in_z6_squared() {
    let c = regular(&[6, 6]);
    let p = gen(&c, &[&[0, 1]]);
    let expected = Witness {
        scalar: re(&c, &[2, 1]),
        element: c.elem(&[3, 1]).unwrap(),
        product: c.elem(&[0, 1]).unwrap(),
    };
    // without φ the least failing pair has a zero product
    let prime = is_prime(&p, PrimeMethod::Direct).unwrap().witness.unwrap();
    assert_eq!(prime.render(&c), "(2,0);(3,0)");
    assert_eq!(prime.product, c.zero());
    let weak = is_weak_prime(&p).unwrap();
    assert!(!weak.holds);
    let w = weak.witness.unwrap();
    assert_eq!(w, expected);
    assert_eq!(w.render(&c), "(2,1);(3,1)");
    assert!(w.replays(&p, Some(&c.zero_submodule())));
}

#[test]
fn phi_prime_examples() {
    let z4 = regular(&[4]);
    assert!(is_weak_prime(&z4.zero_submodule()).unwrap().holds);
    assert!(
        !is_prime(&z4.zero_submodule(), PrimeMethod::Direct)
            .unwrap()
            .holds
    );

    let c = regular(&[12]);
    let four = gen(&c, &[&[4]]);
    assert!(is_phi_prime(&four, &PhiSpec::PhiN(1)).unwrap().holds);
    let weak = is_weak_prime(&four).unwrap();
    assert!(!weak.holds);
    let w = weak.witness.unwrap();
    assert_eq!((w.scalar, w.element), (re(&c, &[2]), c.elem(&[2]).unwrap()));

    let six = gen(&c, &[&[6]]);
    let v = is_phi_prime(&six, &PhiSpec::PhiN(1)).unwrap();
    assert!(!v.holds);
    let w = v.witness.unwrap();
    assert_eq!(product_string(&c, w), "2*3=6");
}

fn product_string(c: &ModuleCtx, w: Witness) -> String {
    let bare = |s: String| s.trim_matches(|ch| ch == '(' || ch == ')').to_string();
    format!(
        "{}*{}={}",
        bare(c.ring().fmt_elem(w.scalar)),
        bare(c.fmt_elem(w.element)),
        bare(c.fmt_elem(w.product))
    )
}

#[test]
fn predicates_match_naive_definition() {
    for c in sample_contexts() {
        for p in proper(&c) {
            for phi in PhiSpec::standard_family() {
                let value = phi_eval(&phi, &p).unwrap();
                let oracle_value = value.as_ref().map(set_of);
                let v = is_phi_prime(&p, &phi).unwrap();
                assert_eq!(v.holds, naive_phi_prime(&p, oracle_value.as_ref()));
                if let Some(w) = v.witness {
                    assert!(w.replays(&p, value.as_ref()));
                }
            }
            let direct = is_prime(&p, PrimeMethod::Direct).unwrap();
            let tf = is_prime(&p, PrimeMethod::TorsionFree).unwrap();
            assert_eq!(
                direct.holds,
                tf.holds,
                "{} in {}",
                p.label(),
                c.descriptor()
            );
            if let Some(w) = tf.witness {
                assert!(w.replays(&p, None));
            }
        }
    }
}

#[test]
fn obstruction_decides_every_value() {
    for c in sample_contexts() {
        let lattice = c.enumerate_submodules(DEFAULT_CAP_FOR_TESTS).unwrap();
        for p in lattice.iter().filter(|p| p.is_proper()) {
            let d = obstruction(p).unwrap();
            let values =
                std::iter::once(None).chain(lattice.iter().filter(|q| q.is_subset(p)).map(Some));
            for v in values {
                assert_eq!(
                    obstruction_allows(&d, v),
                    is_phi_prime_at(p, v).unwrap().holds
                );
            }
        }
    }
}

#[test]
fn characterization_examples() {
    let c = regular(&[12]);
    let cap = DEFAULT_CAP_FOR_TESTS;
    let r = phi_prime_characterizations(&gen(&c, &[&[4]]), &PhiSpec::PhiN(1), cap).unwrap();
    assert!(r.definition && r.ii && r.iii && r.iv);
    let r = phi_prime_characterizations(&gen(&c, &[&[2]]), &PhiSpec::Empty, cap).unwrap();
    assert!(r.definition && r.ii && r.iii && r.iv);

    let c = regular(&[6, 6]);
    let p = gen(&c, &[&[0, 1]]);
    let r = phi_prime_characterizations(&p, &PhiSpec::Zero, cap).unwrap();
    assert!(!r.definition && !r.ii && !r.iii && !r.iv);
    let w = r.iii_witness.unwrap();
    assert_eq!(w.element, c.elem(&[3, 1]).unwrap());
    assert_eq!(w.scalar, Some(re(&c, &[2, 1])));
    let p_x: BTreeSet<_> = c
        .ring()
        .elements()
        .filter(|&a| p.contains(c.scale(a, w.element)))
        .map(|a| c.ring().residues(a))
        .collect();
    let expected: BTreeSet<_> = [0, 2, 4]
        .iter()
        .flat_map(|&a| (0..6).map(move |b| vec![a, b]))
        .collect();
    assert_eq!(p_x, expected);
    let (ideal, l) = r.iv_witness.unwrap();
    let il = c.ideal_apply(&ideal, &l).unwrap();
    assert!(il.is_subset(&p) && !il.is_zero());
}

#[test]
fn characterizations_agree_on_samples() {
    for c in sample_contexts() {
        let ch = Characterizer::new(&c, DEFAULT_CAP_FOR_TESTS).unwrap();
        let lattice = ch.lattice().to_vec();
        for p in lattice.iter().filter(|p| p.is_proper()) {
            let values =
                std::iter::once(None).chain(lattice.iter().filter(|q| q.is_subset(p)).map(Some));
            for v in values {
                let r = ch.characterize_at(p, v).unwrap();
                assert!(r.agree(), "{} in {}", p.label(), c.descriptor());
            }
        }
    }
}

#[test]
fn product_phi_on_product_context() {
    let z6 = regular(&[6]);
    let c = product_context(&z6, &z6).unwrap();
    let p = c.combine(&z6.zero_submodule(), &z6.whole()).unwrap();
    let phi = PhiSpec::product(PhiSpec::Zero, PhiSpec::PhiN(1));
    let v = phi_eval(&phi, &p).unwrap().unwrap();
    assert_eq!(v, c.combine(&z6.zero_submodule(), &z6.whole()).unwrap());
    let empty = PhiSpec::product(PhiSpec::Empty, PhiSpec::Zero);
    assert_eq!(phi_eval(&empty, &p).unwrap(), None);
    assert!(matches!(
        phi_eval(&phi, &regular(&[6]).zero_submodule()),
        Err(Error::ContextMismatch(_))
    ));
}

#[test]
fn table_values_are_normalised() {
    let c = regular(&[12]);
    let four = gen(&c, &[&[4]]);
    let two = gen(&c, &[&[2]]);
    let six = gen(&c, &[&[6]]);
    let t = PhiTable::new(&c, [(four.clone(), Some(six.clone())), (two.clone(), None)]).unwrap();
    let phi = PhiSpec::Table(t);
    assert_eq!(phi_eval(&phi, &four).unwrap(), Some(c.zero_submodule()));
    assert_eq!(phi_eval(&phi, &two).unwrap(), None);
    assert_eq!(phi_eval(&phi, &six).unwrap(), None);
}

#[test]
fn quotient_transport_examples() {
    let cap = DEFAULT_CAP_FOR_TESTS;
    let c = regular(&[12]);
    let l = gen(&c, &[&[4]]);
    let q = c.quotient(&l).unwrap();
    assert_eq!(q.target().size(), 4);
    let PhiSpec::Table(t) = phi_quotient_transport(&PhiSpec::PhiN(1), &q, cap).unwrap() else {
        panic!("transport yields a table");
    };
    let pbar = q.image(&l).unwrap();
    assert!(pbar.is_zero());
    assert_eq!(t.get(&pbar).unwrap(), Some(q.target().zero_submodule()));

    let PhiSpec::Table(t) = phi_quotient_transport(&PhiSpec::Empty, &q, cap).unwrap() else {
        panic!("transport yields a table");
    };
    assert!(t.entries().values().all(Option::is_none));

    // L = 0: the transported table is φ itself
    let q0 = c.quotient(&c.zero_submodule()).unwrap();
    let phi = PhiSpec::PhiN(1);
    let t = phi_quotient_transport(&phi, &q0, cap).unwrap();
    for n in c.enumerate_submodules(cap).unwrap() {
        let direct = phi_eval(&phi, &n).unwrap().map(|v| q0.image(&v).unwrap());
        assert_eq!(phi_eval(&t, &q0.image(&n).unwrap()).unwrap(), direct);
    }
}

#[test]
fn localize_transport_examples() {
    let cap = DEFAULT_CAP_FOR_TESTS;
    let c = regular(&[6]);
    let s = MultSet::cyclic(c.ring(), re(&c, &[3])).unwrap();
    let loc = c.localize(&s).unwrap();
    assert_eq!(loc.target().size(), 2);
    let zero = c.zero_submodule();
    assert_eq!(c.saturation(&zero, &s).unwrap(), gen(&c, &[&[2]]));
    let t = phi_localize_transport(&PhiSpec::PhiN(1), &loc, cap).unwrap();
    let image = loc.image(&zero).unwrap();
    assert_eq!(
        phi_eval(&t, &image).unwrap(),
        Some(loc.target().zero_submodule())
    );

    for phi in [PhiSpec::Empty, PhiSpec::Zero] {
        let t = phi_localize_transport(&phi, &loc, cap).unwrap();
        for n in loc.target().enumerate_submodules(cap).unwrap() {
            assert_eq!(phi_eval(&t, &n).unwrap(), phi_eval(&phi, &n).unwrap());
        }
    }

    let one = MultSet::cyclic(c.ring(), c.ring().one()).unwrap();
    let id = c.localize(&one).unwrap();
    let phi = PhiSpec::PhiN(1);
    let t = phi_localize_transport(&phi, &id, cap).unwrap();
    for n in c.enumerate_submodules(cap).unwrap() {
        let direct = phi_eval(&phi, &n).unwrap().map(|v| id.image(&v).unwrap());
        assert_eq!(phi_eval(&t, &id.image(&n).unwrap()).unwrap(), direct);
    }
}

#[test]
fn ideal_set_is_complete_for_regular_rings() {
    // every ideal of a regular module appears as a submodule and vice versa
    for moduli in [&[12][..], &[6, 4][..]] {
        let c = regular(moduli);
        assert_eq!(
            Ideal::all(c.ring()).len(),
            c.enumerate_submodules(DEFAULT_CAP_FOR_TESTS).unwrap().len()
        );
    }
}

#[test]
fn phin_zero_is_the_identity() {
    let c = regular(&[12]);
    for p in c.enumerate_submodules(crate::module::DEFAULT_CAP).unwrap() {
        assert_eq!(phi_eval(&PhiSpec::PhiN(0), &p).unwrap(), Some(p.clone()));
        if p.is_proper() {
            assert!(is_phi_prime(&p, &PhiSpec::PhiN(0)).unwrap().holds);
        }
    }
}
