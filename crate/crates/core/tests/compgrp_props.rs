use elabsub_core::compgrp::{
    self, closure_order_f2, f_twisted_classes, is_symplectic, so_generators, so_order_by_filter, sp_closure_order,
    ActionSpace, QuadForm,
};
use elabsub_core::fp;
use elabsub_core::order::{so2_order, sp_order};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn space(p: u32, r: usize, r1: usize, twist: Option<bool>, shears: bool) -> ActionSpace {
    let mut s = ActionSpace::new(p, r, r1).unwrap();
    s.add_symplectic(twist.map(|plus| QuadForm::new(r, plus)));
    if r1 > 0 {
        s.add_translation_linear(&fp::gl_generators(r1, p));
    }
    if shears {
        s.add_shears();
    }
    s
}

fn sizes(s: &ActionSpace) -> Vec<usize> {
    f_twisted_classes(s).iter().map(|c| c.size).collect()
}

#[test]
fn untwisted_connected_case_has_two_classes() {
    for p in [2, 3] {
        for r in 1..=2 {
            let s = space(p, r, 0, None, false);
            let z = sizes(&s);
            assert_eq!(z.len(), 2, "p = {p}, r = {r}");
            assert_eq!(z.iter().sum::<usize>(), s.num_points());
            assert_eq!(z[0], 1);
        }
    }
}

#[test]
fn fusion_shears_give_three_classes() {
    for p in [2, 3] {
        for r in 1..=2 {
            for r1 in 1..=2 {
                let s = space(p, r, r1, None, true);
                let z = sizes(&s);
                assert_eq!(z.len(), 3, "p = {p}, r = {r}, r1 = {r1}");
                assert_eq!(z.iter().sum::<usize>(), s.num_points());
            }
        }
    }
}

#[test]
fn orthogonal_twist_gives_two_classes() {
    for r in 1..=2 {
        for plus in [true, false] {
            let s = space(2, r, 0, Some(plus), false);
            let z = sizes(&s);
            assert_eq!(z.len(), 2);
            let q = QuadForm::new(r, plus);
            // Points are the forms Q + B(a, ·); the class of 0 has the Witt type of Q.
            let same_type = (0..s.num_points()).filter(|&i| {
                let a = s.point(i);
                let shifted = |x: &[u32]| (q.eval(x) + compgrp::symplectic_form(&a, x, 2)) % 2;
                let singular = (0..s.num_points()).filter(|&j| shifted(&s.point(j)) == 0).count();
                singular == q.singular_count()
            });
            assert_eq!(z[0], same_type.count());
        }
    }
}

#[test]
fn twisted_case_with_translations_fuses_to_three() {
    for r in 1..=2 {
        for r1 in 1..=2 {
            let s = space(2, r, r1, Some(true), true);
            let z = sizes(&s);
            assert_eq!(z.len(), 3, "r = {r}, r1 = {r1}");
            assert_eq!(z.iter().sum::<usize>(), s.num_points());
        }
    }
}

#[test]
fn orthogonal_orders_match_filtering() {
    for r in 1..=3 {
        for plus in [true, false] {
            let g = so_generators(r, plus).unwrap();
            let closed = closure_order_f2(&g.generators, 2 * r);
            assert_eq!(closed, g.order);
            assert_eq!(closed, so_order_by_filter(r, plus), "r = {r}, plus = {plus}");
            assert_eq!(Some(closed as u64), so2_order(r as u32, plus).to_u64());
        }
    }
    let known = [(1, true, 2), (1, false, 6), (2, true, 72), (2, false, 120)];
    for (r, plus, order) in known {
        assert_eq!(so_generators(r, plus).unwrap().order, order);
    }
}

#[test]
fn symplectic_closure_orders() {
    for (r, p) in [(1, 2), (2, 2), (1, 3), (1, 5)] {
        let got = sp_closure_order(r, p, 1 << 20).unwrap();
        assert_eq!(Some(got as u64), sp_order(r as u32, p as u64).to_u64());
    }
}

proptest! {
    #[test]
    fn orbits_partition_and_are_invariant(p in prop::sample::select(vec![2u32, 3]), r in 1usize..=2, r1 in 0usize..=2, shears: bool) {
        let s = space(p, r, r1, None, shears && r1 > 0);
        let classes = f_twisted_classes(&s);
        let mut owner = vec![usize::MAX; s.num_points()];
        let all = compgrp::orbits(s.num_points(), &s.generators);
        for (k, o) in all.iter().enumerate() {
            for &x in o {
                prop_assert_eq!(owner[x], usize::MAX);
                owner[x] = k;
            }
        }
        prop_assert!(owner.iter().all(|&o| o != usize::MAX));
        for g in &s.generators {
            for x in 0..s.num_points() {
                prop_assert_eq!(owner[x], owner[g[x] as usize]);
            }
        }
        prop_assert_eq!(classes.len(), all.len());
    }

    #[test]
    fn symplectic_generators_preserve_form(r in 1usize..=3, p in prop::sample::select(vec![2u32, 3, 5])) {
        for g in compgrp::sp_generators(r, p) {
            prop_assert!(is_symplectic(&g, p));
        }
    }
}
