use elabsub_core::classify::{classify, descriptor_order, existence_check, ClassRecord, Kind};
use elabsub_core::oracle::{self, compare_with_classifier, enumerate_group, GROUP_CAP};
use elabsub_core::projmat::{closure, Form, GroupSpec};
use elabsub_core::Error;
use std::collections::BTreeMap;

fn assert_matches(n: usize, q: u64, p: u32, form: Form) {
    let report = compare_with_classifier(n, q, p, form, GROUP_CAP).unwrap();
    assert!(
        report.passed(),
        "{form} n = {n} q = {q} p = {p}: {:?}\noracle {:?}\nclassifier {:?}",
        report.mismatches,
        report.oracle,
        report.classifier
    );
}

#[test]
fn linear_two_dimensional_groups() {
    for q in [3, 5, 7, 9, 11, 13] {
        assert_matches(2, q, 2, Form::Linear);
    }
    assert_matches(2, 5, 3, Form::Linear);
    assert_matches(2, 7, 3, Form::Linear);
}

#[test]
fn odd_characteristic_three() {
    assert_matches(3, 4, 3, Form::Linear);
    assert_matches(3, 5, 3, Form::Linear);
    assert_matches(3, 3, 2, Form::Linear);
}

#[test]
fn unitary_groups() {
    for q in [3, 5, 7] {
        assert_matches(2, q, 2, Form::Unitary);
    }
    assert_matches(3, 2, 3, Form::Unitary);
    assert_matches(2, 4, 5, Form::Unitary);
}

#[test]
fn documented_small_cases() {
    let rank2 = |n, q, p, form| -> Vec<u64> {
        let mut v: Vec<u64> = classify(n, q, p, form)
            .unwrap()
            .iter()
            .filter(|r| r.rank == 2)
            .map(|r| r.normalizer.order.clone().try_into().unwrap())
            .collect();
        v.sort();
        v
    };
    assert_eq!(rank2(2, 5, 2, Form::Linear), vec![8, 24]);
    assert_eq!(rank2(2, 7, 2, Form::Linear), vec![8, 24]);
    let pgu = classify(3, 2, 3, Form::Unitary).unwrap();
    assert!(pgu.iter().any(|r| r.rank == 2 && r.normalizer.order == 216u32.into()));
    assert!(classify(3, 5, 3, Form::Linear).unwrap().iter().all(|r| r.kind == Kind::Toral));
}

#[test]
fn existence_examples() {
    assert_eq!(existence_check(15, 11, 5, Form::Linear).unwrap(), vec![1]);
    assert_eq!(existence_check(8, 5, 2, Form::Linear).unwrap(), vec![1, 2, 3]);
    assert_eq!(existence_check(6, 2, 3, Form::Unitary).unwrap(), vec![1]);
    assert!(existence_check(6, 4, 3, Form::Unitary).unwrap().is_empty());
    assert!(matches!(existence_check(4, 9, 3, Form::Linear), Err(Error::DefiningCharacteristic { .. })));
}

fn families(recs: &[ClassRecord]) -> BTreeMap<(u32, Vec<Vec<u32>>), Vec<&ClassRecord>> {
    let mut m: BTreeMap<(u32, Vec<Vec<u32>>), Vec<&ClassRecord>> = BTreeMap::new();
    for r in recs.iter().filter(|r| r.kind == Kind::Nontoral) {
        m.entry((r.r, r.lambda_w.weights.clone())).or_default().push(r);
    }
    m
}

#[test]
fn nontoral_families_split_into_two_or_three() {
    for (n, q, p, form) in [
        (4, 5, 2, Form::Linear),
        (4, 3, 2, Form::Linear),
        (4, 3, 2, Form::Unitary),
        (4, 5, 2, Form::Unitary),
        (6, 7, 3, Form::Linear),
        (6, 5, 3, Form::Unitary),
        (8, 5, 2, Form::Linear),
    ] {
        let recs = classify(n, q, p, form).unwrap();
        for ((r, _), fam) in families(&recs) {
            let disconnected = fam[0].lambda_w.d > 0 && elabsub_core::toral::translation_stabilizer(&fam[0].lambda_w).len() > 1;
            let want = if disconnected { 3 } else { 2 };
            assert_eq!(fam.len(), want, "{form} n = {n} q = {q} p = {p} r = {r}");
            assert_eq!(fam.iter().filter(|x| x.is_principal()).count(), 1);
        }
    }
}

#[test]
fn principal_representatives_are_fixed_and_have_full_rank() {
    for (n, q, p, form) in [
        (4, 5, 2, Form::Linear),
        (4, 3, 2, Form::Linear),
        (3, 4, 3, Form::Linear),
        (3, 2, 3, Form::Unitary),
        (4, 3, 2, Form::Unitary),
        (6, 7, 3, Form::Linear),
    ] {
        let spec = GroupSpec::new(form, n, q).unwrap();
        for rec in classify(n, q, p, form).unwrap().iter().filter(|r| r.is_principal()) {
            assert!(rec.generators.iter().all(|g| spec.contains(g.mat()) && spec.is_steinberg_fixed(g)));
            let order = closure(&rec.generators, n, &spec.mfield, 1 << 16).unwrap().len();
            assert_eq!(order, (p as usize).pow(rec.rank as u32));
        }
    }
}

#[test]
fn descriptors_evaluate_to_orders() {
    for (n, q, p, form) in [(4, 5, 2, Form::Linear), (4, 3, 2, Form::Linear), (6, 7, 3, Form::Linear), (4, 3, 2, Form::Unitary)] {
        for rec in classify(n, q, p, form).unwrap() {
            assert_eq!(descriptor_order(&rec.centralizer.descriptor).unwrap(), rec.centralizer.order);
            assert_eq!(descriptor_order(&rec.normalizer.descriptor).unwrap(), rec.normalizer.order);
            assert!(&rec.normalizer.order % &rec.centralizer.order == 0u32.into());
        }
    }
    assert_eq!(descriptor_order("2^2 · Sp_2(2)").unwrap(), 24u32.into());
    assert_eq!(descriptor_order("PGL_2(5)").unwrap(), 120u32.into());
    assert_eq!(descriptor_order("PGU_3(2)").unwrap(), 216u32.into());
}

#[test]
fn maximal_shapes_for_powers_of_two() {
    let recs = classify(4, 5, 2, Form::Linear).unwrap();
    let principal = |r: u32, d: usize| {
        recs.iter()
            .find(|x| x.kind == Kind::Nontoral && x.is_principal() && x.r == r && x.lambda_w.d == d && x.rank == 2 * r as usize + d)
            .unwrap()
            .centralizer
            .descriptor
            .clone()
    };
    assert_eq!(principal(2, 0), "(Gamma_2(2))");
    assert_eq!(principal(1, 1), "(Gamma_1(2) × (GL_1(5)^2)/4).2");
    assert_eq!(principal(1, 0), "(Gamma_1(2) × PGL_2(5))");
}

#[test]
fn json_is_byte_stable() {
    let a = serde_json::to_string(&classify(4, 5, 2, Form::Linear).unwrap()).unwrap();
    let b = serde_json::to_string(&classify(4, 5, 2, Form::Linear).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn oracle_invariants() {
    let t = enumerate_group(&GroupSpec::linear(2, 7).unwrap(), GROUP_CAP).unwrap();
    for c in oracle::elem_abelian_classes(&t, 2) {
        let cen = oracle::brute_centralizer(&t, &c.generators);
        let nor = oracle::brute_normalizer(&t, &c.representative, &c.generators);
        assert!(cen.iter().all(|x| nor.binary_search(x).is_ok()));
        assert_eq!(c.size() * nor.len(), t.order());
    }
    assert!(matches!(
        enumerate_group(&GroupSpec::linear(4, 5).unwrap(), GROUP_CAP),
        Err(Error::CapExceeded { .. })
    ));
}
