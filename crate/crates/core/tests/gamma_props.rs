use elabsub_core::gamma::{self, check_relations, gamma_generators, xy_generators};
use elabsub_core::gfq::FieldSpec;
use elabsub_core::localstruct::{conjugating_element, Budget};
use elabsub_core::projmat::{closure, GroupSpec, ProjMat};

/// Least q with p | q − 1.
fn least_field(p: u32) -> u64 {
    (2..).find(|&q| elabsub_core::gfq::prime_power(q).is_some() && (q - 1) % p as u64 == 0).unwrap()
}

#[test]
fn relations_hold_over_least_fields() {
    for (p, r) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)] {
        let f = FieldSpec::of_order(least_field(p)).unwrap();
        let g = gamma_generators(p, r, 1, &f).unwrap();
        assert!(check_relations(&g), "p = {p}, r = {r}");
        for x in g.interleaved() {
            assert_eq!(x.elem_order(p as u64 + 1, &f).unwrap(), p as u64);
        }
        let all = closure(&g.interleaved(), g.n(), &f, 1 << 16).unwrap();
        assert_eq!(all.len(), (p as usize).pow(2 * r));
    }
}

#[test]
fn block_copies_keep_relations() {
    let f = FieldSpec::of_order(5).unwrap();
    let g = gamma_generators(2, 1, 2, &f).unwrap();
    assert_eq!(g.n(), 4);
    assert!(check_relations(&g));
}

fn conj(x: &ProjMat, a: &ProjMat, f: &FieldSpec) -> ProjMat {
    x.mul(a, f).mul(&x.inv(f), f)
}

#[test]
fn xy_action_table() {
    for (p, r, m) in [(2, 1, 1), (2, 2, 1), (2, 1, 2), (3, 1, 1)] {
        let f = FieldSpec::of_order(least_field(p)).unwrap();
        let xy = xy_generators(p, r, m, &f).unwrap();
        let a = &xy.gamma.a_list;
        let b = &xy.gamma.b_list;
        for i in 0..m {
            let g = &xy.toral[i];
            let g_inv = g.inv(&f);
            for j in 0..r as usize {
                let (x, y) = (&xy.x[i][j], &xy.y[i][j]);
                for s in 0..r as usize {
                    let hit = s == j;
                    let times = |h: &ProjMat, t: &ProjMat| if hit { h.mul(t, &f) } else { h.clone() };
                    assert_eq!(conj(x, &a[s], &f), times(&a[s], g), "x A p={p} r={r} m={m}");
                    if p == 2 {
                        assert_eq!(conj(y, &a[s], &f), a[s], "y fixes A");
                        assert_eq!(conj(x, &b[s], &f), times(&b[s], g));
                        assert_eq!(conj(y, &b[s], &f), times(&b[s], g));
                    } else {
                        assert_eq!(conj(y, &b[s], &f), times(&b[s], &g_inv), "y B odd p");
                    }
                }
                for t in &xy.toral {
                    assert_eq!(&conj(x, t, &f), t);
                    assert_eq!(&conj(y, t, &f), t);
                }
            }
        }
    }
}

#[test]
fn diagonal_and_permutation_parts_are_conjugate() {
    for (p, r) in [(2, 1), (2, 2), (3, 1)] {
        let q = least_field(p);
        let spec = GroupSpec::linear((p as usize).pow(r), q).unwrap();
        let g = gamma_generators(p, r, 1, &spec.mfield).unwrap();
        let x = conjugating_element(g.d_group(), g.b_group(), &spec, Budget::default())
            .unwrap()
            .expect("conjugating element exists");
        let f = &spec.mfield;
        let image: Vec<ProjMat> = g.d_group().iter().map(|a| conj(&x, a, f)).collect();
        let target = closure(g.b_group(), spec.n, f, 1 << 12).unwrap();
        assert!(image.iter().all(|y| target.contains(y)), "p = {p}, r = {r}");
    }
}

#[test]
fn toral_generators_span_expected_order() {
    let f = FieldSpec::of_order(7).unwrap();
    let beta = f.root_of_unity(3).unwrap();
    let g = gamma::toral_generators(3, 2, 3, beta, &f).unwrap();
    assert_eq!(closure(&g, 3, &f, 100).unwrap().len(), 9);
}

#[test]
fn unitary_gamma_is_steinberg_fixed() {
    let spec = GroupSpec::unitary(3, 2).unwrap();
    let beta = elabsub_core::toral::diagonal_root(3, &spec).unwrap();
    let g = gamma::gamma_generators_with_root(3, 1, 1, beta, &spec.mfield).unwrap();
    for x in g.interleaved() {
        assert!(spec.contains(x.mat()));
        assert!(spec.is_steinberg_fixed(&x));
    }
}
