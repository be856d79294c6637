use super::*;
use crate::module::{product_context, MultSet, DEFAULT_CAP};
use crate::phi::{PhiSpec, PrimenessReport};
use crate::ring::FiniteRing;

fn regular(moduli: &[u64]) -> ModuleCtx {
    ModuleCtx::regular(&FiniteRing::new(moduli).unwrap())
}

fn z6_squared() -> ModuleCtx {
    let z6 = regular(&[6]);
    product_context(&z6, &z6).unwrap()
}

fn flag(r: &PrimenessReport, phi: &PhiSpec) -> bool {
    r.flag(phi).unwrap().holds
}

#[test]
fn theorem_ids_round_trip() {
    for id in TheoremId::ALL {
        assert_eq!(id.name().parse::<TheoremId>().unwrap(), id);
    }
    assert!("T9.9".parse::<TheoremId>().is_err());
}

#[test]
fn suite_shapes() {
    let blocks = block_suite();
    assert!(blocks
        .iter()
        .all(|c| c.size() <= 200 && c.blocks()[0].len() <= 3));
    assert!(blocks
        .iter()
        .all(|c| c.blocks()[0] != vec![c.ring().moduli()[0]]));
    assert_eq!(regular_suite().len(), 15);
    assert_eq!(product_suite().len(), 25);
    assert!(product_suite().iter().all(|c| c.parts().is_some()));
}

#[test]
fn classify_z12() {
    let c = regular(&[12]);
    let reports = classify_all(&c, &[PhiSpec::PhiN(1)], DEFAULT_CAP).unwrap();
    assert_eq!(reports.len(), 5);
    let by = |g: u64| {
        let n = c.generate(&[c.elem(&[g]).unwrap()]).unwrap();
        reports.iter().find(|r| r.submodule == n).unwrap().clone()
    };
    let zero = by(0);
    assert!(flag(&zero, &PhiSpec::Zero) && !flag(&zero, &PhiSpec::Empty));
    assert!(flag(&by(2), &PhiSpec::Empty) && flag(&by(3), &PhiSpec::Empty));
    let four = by(4);
    assert!(flag(&four, &PhiSpec::PhiN(1)) && !flag(&four, &PhiSpec::Zero));
    let six = by(6);
    let f = six.flag(&PhiSpec::PhiN(1)).unwrap();
    assert!(!f.holds);
    let w = f.witness.unwrap();
    assert_eq!(
        (
            c.ring().fmt_elem(w.scalar),
            c.fmt_elem(w.element),
            c.fmt_elem(w.product)
        ),
        ("(2)".into(), "(3)".into(), "(6)".into())
    );
    for r in &reports {
        for f in &r.flags {
            if let Some(w) = f.witness {
                let v = crate::phi::phi_eval(&f.phi, &r.submodule).unwrap();
                assert!(w.replays(&r.submodule, v.as_ref()));
            }
        }
    }
}

#[test]
fn classify_prime_field_and_z6_squared() {
    let reports = classify_all(&regular(&[5]), &[], DEFAULT_CAP).unwrap();
    assert_eq!(reports.len(), 1);
    assert!(flag(&reports[0], &PhiSpec::Empty));

    let c = z6_squared();
    let p = c.generate(&[c.elem(&[0, 1]).unwrap()]).unwrap();
    let reports = classify_all(&c, &[], DEFAULT_CAP).unwrap();
    let r = reports.iter().find(|r| r.submodule == p).unwrap();
    let weak = r.flag(&PhiSpec::Zero).unwrap();
    assert!(!weak.holds);
    assert_eq!(weak.witness.unwrap().render(&c), "(2,1);(3,1)");
}

#[test]
fn spec_verifier_examples() {
    let r = verify_theorem(TheoremId::RemarkA, &[regular(&[4])], DEFAULT_CAP).unwrap();
    assert!(r.passed() && r.instances_checked > 0);
    let r = verify_theorem(TheoremId::T2_11, &[z6_squared()], DEFAULT_CAP).unwrap();
    assert!(r.passed());
    // one instance per proper submodule and φ
    let proper = z6_squared()
        .enumerate_submodules(DEFAULT_CAP)
        .unwrap()
        .len() as u64
        - 1;
    assert_eq!(r.instances_checked, proper * 5);
    let r = verify_theorem(TheoremId::C2_8, &[regular(&[12])], DEFAULT_CAP).unwrap();
    assert!(r.passed());
}

#[test]
fn every_verifier_passes_on_small_contexts() {
    let contexts = vec![
        regular(&[4]),
        regular(&[12]),
        ModuleCtx::new(&FiniteRing::new(&[8]).unwrap(), vec![vec![4, 2]]).unwrap(),
        ModuleCtx::new(&FiniteRing::new(&[4]).unwrap(), vec![vec![4, 2]]).unwrap(),
        z6_squared(),
        product_context(&regular(&[2]), &regular(&[4])).unwrap(),
    ];
    for id in TheoremId::ALL {
        let r = verify_theorem(id, &contexts, DEFAULT_CAP).unwrap();
        assert!(r.passed(), "{id}: {:?}", r.violations.first());
        assert!(r.instances_checked > 0, "{id} checked nothing");
    }
}

#[test]
fn hunt_examples() {
    let family = HuntFamily {
        contexts: vec![z6_squared()],
        phis: vec![PhiSpec::Zero],
        mult_sets: None,
        saturated_only: false,
    };
    let r = hunt_counterexamples(HuntQuestion::ProductForms213, &family, DEFAULT_CAP).unwrap();
    assert!(r.passed() && r.instances_checked > 0);

    let z2 = regular(&[2]);
    let family = HuntFamily {
        contexts: vec![product_context(&z2, &z2).unwrap()],
        phis: vec![PhiSpec::Empty],
        mult_sets: None,
        saturated_only: false,
    };
    let r = hunt_counterexamples(HuntQuestion::ProductForms213, &family, DEFAULT_CAP).unwrap();
    assert!(r.passed());

    let z6 = regular(&[6]);
    let family = HuntFamily {
        contexts: vec![z6.clone()],
        phis: PhiSpec::standard_family(),
        mult_sets: Some(vec![MultSet::cyclic(z6.ring(), z6.ring().one()).unwrap()]),
        saturated_only: false,
    };
    let r = hunt_counterexamples(HuntQuestion::Converse212ii, &family, DEFAULT_CAP).unwrap();
    assert!(r.passed() && r.instances_checked > 0);
}
