use elabsub_core::classify::classify;
use elabsub_core::gfq::Fe;
use elabsub_core::localstruct::{intertwiner_basis, normalizer_via_aut, projective_centralizer, Budget, Status};
use elabsub_core::oracle::{self, enumerate_group, GROUP_CAP};
use elabsub_core::order::gl_order;
use elabsub_core::projmat::{Form, GroupSpec, ProjMat};
use num_bigint::BigUint;

/// Exact local orders agree with brute force for every oracle class.
fn check_group(n: usize, q: u64, p: u32, form: Form) {
    let spec = GroupSpec::new(form, n, q).unwrap();
    let t = enumerate_group(&spec, GROUP_CAP).unwrap();
    for c in oracle::elem_abelian_classes(&t, p) {
        let gens: Vec<ProjMat> = c.generators.iter().map(|&g| t.element(g).clone()).collect();
        let cen = projective_centralizer(&gens, &spec, Budget::default(), None).unwrap();
        let nor = normalizer_via_aut(&gens, &spec, Budget::default(), None).unwrap();
        assert_eq!(cen.status, Status::Exact);
        assert_eq!(nor.status, Status::Exact);
        let brute_c = oracle::brute_centralizer(&t, &c.generators).len();
        let brute_n = oracle::brute_normalizer(&t, &c.representative, &c.generators).len();
        assert_eq!(cen.order, BigUint::from(brute_c), "{form} n = {n} q = {q}: C of rank {}", c.rank);
        assert_eq!(nor.order, BigUint::from(brute_n), "{form} n = {n} q = {q}: N of rank {}", c.rank);
        let index = &nor.order / &cen.order;
        assert_eq!(&nor.order % &cen.order, BigUint::from(0u32));
        assert_eq!(gl_order(c.rank as u32, p as u64) % index, BigUint::from(0u32));
    }
}

#[test]
fn agrees_with_brute_force() {
    check_group(2, 5, 2, Form::Linear);
    check_group(2, 7, 2, Form::Linear);
    check_group(2, 9, 2, Form::Linear);
    check_group(3, 4, 3, Form::Linear);
    check_group(2, 5, 2, Form::Unitary);
    check_group(3, 2, 3, Form::Unitary);
}

#[test]
fn character_spaces_sum_to_centralizer() {
    // ⟨diag(1,−1)⟩ in PGL_2(5): trivial and sign characters each give a
    // 2-dimensional space with 16 invertible matrices.
    let spec = GroupSpec::linear(2, 5).unwrap();
    let f = &spec.mfield;
    let e = [ProjMat::new(elabsub_core::projmat::Mat::diag(&[Fe::ONE, f.from_int(-1)]), f).unwrap()];
    let mut total = 0;
    for chi in f.pth_roots(Fe::ONE, 2) {
        let space = intertwiner_basis(&e, &[chi], f).unwrap();
        assert_eq!(space.dim(), 2);
        let mut count = 0;
        for a in f.elements() {
            for b in f.elements() {
                let x = space.combine(&[a, b], f);
                if !x.det(f).is_zero() {
                    count += 1;
                }
            }
        }
        total += count;
    }
    let c = projective_centralizer(&e, &spec, Budget::default(), None).unwrap();
    assert_eq!(BigUint::from(total / (f.q() as usize - 1)), c.order);
}

#[test]
fn sampled_orders_reach_predictions() {
    let spec = GroupSpec::linear(4, 5).unwrap();
    let budget = Budget { subspace: 4, ..Budget::default() };
    for rec in classify(4, 5, 2, Form::Linear).unwrap().iter().filter(|r| r.is_principal() && r.r > 0) {
        let c = projective_centralizer(&rec.generators, &spec, budget, Some(&rec.centralizer.order)).unwrap();
        let n = normalizer_via_aut(&rec.generators, &spec, budget, Some(&rec.normalizer.order)).unwrap();
        assert_eq!((c.order.clone(), c.status), (rec.centralizer.order.clone(), Status::MatchedPrediction));
        assert_eq!((n.order.clone(), n.status), (rec.normalizer.order.clone(), Status::MatchedPrediction));
    }
}

#[test]
fn twisted_rank_two_matches_exactly() {
    let spec = GroupSpec::linear(4, 3).unwrap();
    let rec = classify(4, 3, 2, Form::Linear)
        .unwrap()
        .into_iter()
        .find(|r| r.is_principal() && r.r == 2)
        .unwrap();
    let c = projective_centralizer(&rec.generators, &spec, Budget::default(), None).unwrap();
    let n = normalizer_via_aut(&rec.generators, &spec, Budget::default(), None).unwrap();
    assert_eq!(c.status, Status::Exact);
    assert_eq!(c.order, BigUint::from(16u32));
    assert_eq!(n.order, BigUint::from(1152u32));
}
