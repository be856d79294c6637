use std::collections::BTreeSet;

use super::*;
use crate::ring::Ideal;

fn ctx(moduli: &[u64], blocks: &[&[u64]]) -> ModuleCtx {
    let ring = FiniteRing::new(moduli).unwrap();
    ModuleCtx::new(&ring, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
}

fn regular(n: u64) -> ModuleCtx {
    ModuleCtx::regular(&FiniteRing::new(&[n]).unwrap())
}

fn el(c: &ModuleCtx, coords: &[u64]) -> ModElem {
    c.elem(coords).unwrap()
}

fn re(c: &ModuleCtx, residues: &[u64]) -> RingElem {
    c.ring().elem(residues).unwrap()
}

fn set(c: &ModuleCtx, coords: &[&[u64]]) -> BTreeSet<ModElem> {
    coords.iter().map(|v| el(c, v)).collect()
}

fn members(n: &Submodule) -> BTreeSet<ModElem> {
    n.elements().collect()
}

/// Naive fixpoint closure under addition and scalar action.
fn closure_oracle(c: &ModuleCtx, seed: &BTreeSet<ModElem>) -> BTreeSet<ModElem> {
    let mut s = seed.clone();
    s.insert(c.zero());
    loop {
        let before = s.len();
        let cur: Vec<_> = s.iter().copied().collect();
        for &x in &cur {
            for &y in &cur {
                s.insert(c.add(x, y));
            }
            for r in c.ring().elements() {
                s.insert(c.scale(r, x));
            }
        }
        if s.len() == before {
            return s;
        }
    }
}

/// Every closed subset, found by include/exclude search over elements in
/// order with closure propagation.
fn subset_closure_oracle(c: &ModuleCtx) -> BTreeSet<BTreeSet<ModElem>> {
    fn go(
        c: &ModuleCtx,
        cur: BTreeSet<ModElem>,
        excluded: &mut Vec<ModElem>,
        next: usize,
        out: &mut BTreeSet<BTreeSet<ModElem>>,
    ) {
        let Some(x) = (next..c.size())
            .map(|i| ModElem(i as u32))
            .find(|x| !cur.contains(x) && !excluded.contains(x))
        else {
            out.insert(cur);
            return;
        };
        let mut with = cur.clone();
        with.insert(x);
        let with = closure_oracle(c, &with);
        if excluded.iter().all(|e| !with.contains(e)) {
            go(c, with, excluded, x.index() + 1, out);
        }
        excluded.push(x);
        go(c, cur, excluded, x.index() + 1, out);
        excluded.pop();
    }
    let mut out = BTreeSet::new();
    let zero = closure_oracle(c, &BTreeSet::new());
    go(c, zero, &mut Vec::new(), 0, &mut out);
    out
}

fn colon_oracle(c: &ModuleCtx, n: &Submodule) -> Vec<RingElem> {
    c.ring()
        .elements()
        .filter(|&r| c.elements().all(|x| n.contains(c.scale(r, x))))
        .collect()
}

#[test]
fn module_make_examples() {
    let z6 = regular(6);
    assert_eq!(z6.size(), 6);
    let p = ctx(&[6, 6], &[&[6], &[6]]);
    assert_eq!(p.size(), 36);
    let ring = FiniteRing::new(&[6]).unwrap();
    assert!(matches!(
        ModuleCtx::new(&ring, vec![vec![4]]),
        Err(Error::InvalidModule(_))
    ));
    assert!(matches!(
        ModuleCtx::new(&ring, vec![vec![6], vec![2]]),
        Err(Error::InvalidModule(_))
    ));
}

#[test]
fn scalar_action_distributes() {
    let c = ctx(&[12, 4], &[&[6, 4], &[2, 4]]);
    for r in c.ring().elements().step_by(7) {
        for x in c.elements().step_by(13) {
            for y in c.elements().step_by(29) {
                assert_eq!(c.scale(r, c.add(x, y)), c.add(c.scale(r, x), c.scale(r, y)));
            }
        }
    }
    assert_eq!(c.fmt_elem_grouped(el(&c, &[3, 1, 0, 2])), "(3,1|0,2)");
}

#[test]
fn submodule_generate_examples() {
    let z6 = regular(6);
    let n = z6.generate(&[el(&z6, &[2])]).unwrap();
    assert_eq!(members(&n), set(&z6, &[&[0], &[2], &[4]]));
    assert!(z6.generate(&[]).unwrap().is_zero());
    let p = ctx(&[6, 6], &[&[6], &[6]]);
    let n = p.generate(&[el(&p, &[0, 1])]).unwrap();
    let expected: BTreeSet<_> = (0..6).map(|b| el(&p, &[0, b])).collect();
    assert_eq!(members(&n), expected);
    assert!(matches!(
        z6.generate(&[ModElem(6)]),
        Err(Error::InvalidElement(_))
    ));
}

#[test]
fn generate_matches_closure_oracle() {
    let c = ctx(&[12, 4], &[&[6, 4], &[2]]);
    for a in c.elements().step_by(11) {
        for b in c.elements().step_by(17) {
            let n = c.generate(&[a, b]).unwrap();
            assert_eq!(members(&n), closure_oracle(&c, &BTreeSet::from([a, b])));
            let regen = c.generate(n.generators()).unwrap();
            assert_eq!(regen, n);
        }
    }
}

#[test]
fn enumerate_examples() {
    let v4 = ctx(&[2], &[&[2, 2]]);
    assert_eq!(v4.enumerate_submodules(DEFAULT_CAP).unwrap().len(), 5);
    let z6 = regular(6);
    let subs = z6.enumerate_submodules(DEFAULT_CAP).unwrap();
    assert_eq!(subs.len(), 4);
    let sizes: Vec<usize> = subs.iter().map(|s| s.len()).collect();
    assert_eq!(sizes, vec![1, 2, 3, 6]);
    assert_eq!(
        regular(7).enumerate_submodules(DEFAULT_CAP).unwrap().len(),
        2
    );
    assert!(matches!(
        regular(12).enumerate_submodules(10),
        Err(Error::SizeLimit { size: 12, cap: 10 })
    ));
}

#[test]
fn enumerate_matches_subset_closure_oracle() {
    let cases: Vec<ModuleCtx> = vec![
        regular(12),
        ctx(&[2], &[&[2, 2, 2]]),
        ctx(&[4], &[&[4, 2]]),
        ctx(&[6], &[&[6, 3]]),
        ctx(&[12], &[&[4, 2]]),
        ctx(&[6, 4], &[&[6], &[2, 2]]),
        ctx(&[2, 3], &[&[2], &[3]]),
        ctx(&[9], &[&[3, 3]]),
    ];
    for c in cases {
        let ours: BTreeSet<BTreeSet<ModElem>> = c
            .enumerate_submodules(DEFAULT_CAP)
            .unwrap()
            .iter()
            .map(members)
            .collect();
        assert_eq!(ours, subset_closure_oracle(&c), "{}", c.descriptor());
    }
}

#[test]
fn lattice_closed_under_meet_and_join() {
    let c = ctx(&[12, 2], &[&[4, 2], &[2]]);
    let subs = c.enumerate_submodules(DEFAULT_CAP).unwrap();
    let all: BTreeSet<_> = subs.iter().cloned().collect();
    for a in &subs {
        for b in &subs {
            assert!(all.contains(&a.intersection(b)));
            assert!(all.contains(&a.sum(b)));
        }
    }
}

#[test]
fn product_lattice_is_cartesian() {
    let m1 = regular(4);
    let m2 = ctx(&[6], &[&[6, 2]]);
    let p = product_context(&m1, &m2).unwrap();
    let subs = p.enumerate_submodules(DEFAULT_CAP).unwrap();
    let n1 = m1.enumerate_submodules(DEFAULT_CAP).unwrap().len();
    let n2 = m2.enumerate_submodules(DEFAULT_CAP).unwrap().len();
    assert_eq!(subs.len(), n1 * n2);
    for s in &subs {
        let (a, b) = p.split_submodule(s).unwrap();
        assert_eq!(&p.combine(&a, &b).unwrap(), s);
    }
}

#[test]
fn colon_examples() {
    let z6 = regular(6);
    assert!(z6.colon(&z6.zero_submodule()).unwrap().is_zero());
    let p = ctx(&[6, 6], &[&[6], &[6]]).with_split(1).unwrap();
    let p1 = p.parts().unwrap().0.zero_submodule();
    let n = p.embed_left(&p1).unwrap();
    let col = p.colon(&n).unwrap();
    assert_eq!(col.divisors(), &[6, 1]);
    let z12 = regular(12);
    let four = z12.generate(&[el(&z12, &[4])]).unwrap();
    assert_eq!(z12.colon(&four).unwrap().divisors(), &[4]);
    assert!(matches!(
        z12.colon(&z6.whole()),
        Err(Error::ContextMismatch(_))
    ));
}

#[test]
fn colon_and_element_colon_match_scan() {
    for c in [
        ctx(&[12, 4], &[&[6, 4], &[2]]),
        ctx(&[8], &[&[8, 4, 2]]),
        regular(30),
    ] {
        for n in c.enumerate_submodules(DEFAULT_CAP).unwrap() {
            let col = c.colon(&n).unwrap();
            assert_eq!(col.members(), colon_oracle(&c, &n));
            // (N:M)M ⊆ N
            assert!(c.ideal_apply(&col, &c.whole()).unwrap().is_subset(&n));
            for x in c.elements().step_by(5) {
                let cx = c.colon_elem(&n, x).unwrap();
                let scan: Vec<_> = c
                    .ring()
                    .elements()
                    .filter(|&r| n.contains(c.scale(r, x)))
                    .collect();
                assert_eq!(cx.members(), scan);
            }
        }
    }
}

#[test]
fn colon_is_monotone() {
    let c = ctx(&[12], &[&[12, 2]]);
    let subs = c.enumerate_submodules(DEFAULT_CAP).unwrap();
    for a in &subs {
        for b in &subs {
            if a.is_subset(b) {
                assert!(c.colon(a).unwrap().is_subset(&c.colon(b).unwrap()));
            }
        }
    }
}

#[test]
fn ideal_apply_examples() {
    let z12 = regular(12);
    let four = z12.generate(&[el(&z12, &[4])]).unwrap();
    let i4 = Ideal::from_divisors(z12.ring(), &[4]).unwrap();
    assert_eq!(z12.ideal_apply(&i4, &four).unwrap(), four);
    assert!(z12
        .ideal_apply(&i4, &z12.zero_submodule())
        .unwrap()
        .is_zero());
    let z6 = regular(6);
    let i2 = Ideal::from_divisors(z6.ring(), &[2]).unwrap();
    let three = z6.generate(&[el(&z6, &[3])]).unwrap();
    assert!(z6.ideal_apply(&i2, &three).unwrap().is_zero());
}

#[test]
fn ideal_apply_matches_span_oracle() {
    let c = ctx(&[12, 4], &[&[6, 4], &[2]]);
    let subs = c.enumerate_submodules(DEFAULT_CAP).unwrap();
    for i in Ideal::all(c.ring()) {
        for n in subs.iter().step_by(3) {
            let seed: BTreeSet<ModElem> = i
                .members()
                .into_iter()
                .flat_map(|a| n.elements().map(move |x| (a, x)))
                .map(|(a, x)| c.scale(a, x))
                .collect();
            assert_eq!(
                members(&c.ideal_apply(&i, n).unwrap()),
                closure_oracle(&c, &seed)
            );
        }
    }
}

#[test]
fn ann_and_torsion_examples() {
    let z6 = regular(6);
    let ann = z6.ann_elem(el(&z6, &[2])).unwrap();
    assert_eq!(ann.members(), vec![re(&z6, &[0]), re(&z6, &[3])]);
    assert!(z6.ann_elem(el(&z6, &[1])).unwrap().is_zero());
    assert!(z6.ann_elem(z6.zero()).unwrap().is_whole());
    let k = z6.torsion_kernel(re(&z6, &[2])).unwrap();
    assert_eq!(members(&k), set(&z6, &[&[0], &[3]]));
    assert!(z6.torsion_kernel(re(&z6, &[1])).unwrap().is_zero());
    assert!(z6.torsion_kernel(re(&z6, &[0])).unwrap().is_whole());
}

#[test]
fn quotient_examples() {
    let z12 = regular(12);
    let four = z12.generate(&[el(&z12, &[4])]).unwrap();
    let q = z12.quotient(&four).unwrap();
    assert_eq!(q.target().blocks(), &[vec![4]]);
    let id = z12.quotient(&z12.zero_submodule()).unwrap();
    assert_eq!(id.target().size(), 12);
    assert!(z12.elements().all(|x| id.project(x).index() == x.index()));
    let all = z12.quotient(&z12.whole()).unwrap();
    assert_eq!(all.target().size(), 1);
}

#[test]
fn quotient_is_a_surjective_module_map_with_kernel_l() {
    for c in [
        ctx(&[12, 4], &[&[6, 4], &[2, 4]]),
        ctx(&[8], &[&[8, 4, 2]]),
        ctx(&[6, 6], &[&[6], &[6]]),
    ] {
        for l in c
            .enumerate_submodules(DEFAULT_CAP)
            .unwrap()
            .iter()
            .step_by(3)
        {
            let q = c.quotient(l).unwrap();
            let t = q.target();
            // coset count oracle
            let mut cosets: BTreeSet<BTreeSet<ModElem>> = BTreeSet::new();
            for x in c.elements() {
                cosets.insert(l.elements().map(|y| c.add(x, y)).collect());
            }
            assert_eq!(t.size(), cosets.len());
            let image: BTreeSet<_> = c.elements().map(|x| q.project(x)).collect();
            assert_eq!(image.len(), t.size());
            for x in c.elements() {
                assert_eq!(q.project(x) == t.zero(), l.contains(x));
            }
            for x in c.elements().step_by(7) {
                for y in c.elements().step_by(11) {
                    assert_eq!(q.project(c.add(x, y)), t.add(q.project(x), q.project(y)));
                }
                for r in c.ring().elements().step_by(5) {
                    assert_eq!(q.project(c.scale(r, x)), t.scale(r, q.project(x)));
                }
            }
        }
    }
}

#[test]
fn product_context_examples() {
    let z6 = regular(6);
    let p = product_context(&z6, &z6).unwrap();
    assert_eq!(p.size(), 36);
    assert_eq!(p.ring().moduli(), &[6, 6]);
    let zero_mod = ModuleCtx::new(&FiniteRing::new(&[5]).unwrap(), vec![vec![]]).unwrap();
    let q = product_context(&z6, &zero_mod).unwrap();
    assert_eq!(q.size(), 6);
    assert_eq!(q.ring().num_factors(), 2);
    let r = product_context(&regular(2), &regular(3)).unwrap();
    assert_eq!(r.size(), 6);
    let n2 = regular(3).zero_submodule();
    let emb = r.embed_right(&n2).unwrap();
    assert_eq!(emb.len(), 2);
}

#[test]
fn saturation_examples() {
    let z6 = regular(6);
    let s = MultSet::cyclic(z6.ring(), re(&z6, &[3])).unwrap();
    assert_eq!(s.elements(), &[re(&z6, &[1]), re(&z6, &[3])]);
    let sat = z6.saturation(&z6.zero_submodule(), &s).unwrap();
    assert_eq!(members(&sat), set(&z6, &[&[0], &[2], &[4]]));
    let one = MultSet::generate(z6.ring(), &[]).unwrap();
    let two = z6.generate(&[el(&z6, &[2])]).unwrap();
    assert_eq!(z6.saturation(&two, &one).unwrap(), two);
    let units = MultSet::cyclic(z6.ring(), re(&z6, &[5])).unwrap();
    assert_eq!(units.elements().len(), 2);
    assert_eq!(z6.saturation(&two, &units).unwrap(), two);
}

#[test]
fn saturation_is_extensive_and_idempotent() {
    let c = ctx(&[12, 4], &[&[6, 4], &[2]]);
    let subs = c.enumerate_submodules(DEFAULT_CAP).unwrap();
    for s in c.ring().elements().step_by(5) {
        let ms = MultSet::cyclic(c.ring(), s).unwrap();
        let loc = c.localize(&ms).unwrap();
        for n in &subs {
            let sat = c.saturation(n, &ms).unwrap();
            assert!(n.is_subset(&sat));
            assert_eq!(c.saturation(&sat, &ms).unwrap(), sat);
            assert_eq!(loc.preimage(&loc.image(n).unwrap()).unwrap(), sat);
        }
    }
}

#[test]
fn localize_examples() {
    let z6 = regular(6);
    let s = MultSet::cyclic(z6.ring(), re(&z6, &[3])).unwrap();
    let loc = z6.localize(&s).unwrap();
    assert_eq!(loc.idempotent(), re(&z6, &[3]));
    assert_eq!(loc.target().size(), 2);
    for &t in s.elements() {
        assert!(loc.acts_invertibly(t));
        assert!(loc.is_unit_in_localized_ring(t));
    }
    let id = z6
        .localize(&MultSet::generate(z6.ring(), &[]).unwrap())
        .unwrap();
    assert_eq!(id.target().size(), 6);
    let zero = z6
        .localize(&MultSet::cyclic(z6.ring(), re(&z6, &[0])).unwrap())
        .unwrap();
    assert_eq!(zero.target().size(), 1);
}

#[test]
fn localization_map_is_multiplication_by_the_idempotent() {
    let c = ctx(&[12, 10], &[&[12, 4], &[10, 5]]);
    for s in c.ring().elements().step_by(9) {
        let ms = MultSet::cyclic(c.ring(), s).unwrap();
        let loc = c.localize(&ms).unwrap();
        let e = loc.idempotent();
        // x and y have the same image exactly when ex = ey
        for x in c.elements().step_by(13) {
            for y in c.elements().step_by(17) {
                assert_eq!(loc.map(x) == loc.map(y), c.scale(e, x) == c.scale(e, y));
            }
        }
        for &t in ms.elements() {
            assert!(loc.acts_invertibly(t));
            assert!(loc.is_unit_in_localized_ring(t));
        }
    }
}

#[test]
fn zero_divisors_examples() {
    let z12 = regular(12);
    let four = z12.generate(&[el(&z12, &[4])]).unwrap();
    let zd: Vec<u64> = z12
        .zero_divisors_on_quotient(&four)
        .unwrap()
        .into_iter()
        .map(|a| z12.ring().residue(a, 0))
        .collect();
    assert_eq!(zd, vec![0, 2, 4, 6, 8, 10]);
    let z6 = regular(6);
    let zd: Vec<u64> = z6
        .zero_divisors_on_quotient(&z6.zero_submodule())
        .unwrap()
        .into_iter()
        .map(|a| z6.ring().residue(a, 0))
        .collect();
    assert_eq!(zd, vec![0, 2, 3, 4]);
    let z5 = regular(5);
    assert_eq!(
        z5.zero_divisors_on_quotient(&z5.zero_submodule())
            .unwrap()
            .len(),
        1
    );
    assert!(matches!(
        z5.zero_divisors_on_quotient(&z5.whole()),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn trivial_blocks_are_harmless() {
    let ring = FiniteRing::new(&[6]).unwrap();
    let c = ModuleCtx::new(&ring, vec![vec![6, 1]]).unwrap();
    assert_eq!(c.size(), 6);
    assert!(c.colon(&c.zero_submodule()).unwrap().is_zero());
    assert!(c.colon(&c.whole()).unwrap().is_whole());
    assert_eq!(c.enumerate_submodules(DEFAULT_CAP).unwrap().len(), 4);
}
