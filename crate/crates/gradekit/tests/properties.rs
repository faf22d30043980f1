//! Algebraic invariants as property tests.

use gradekit::coh::{self, ClassCoords, Cocycle2};
use gradekit::ffield::{FieldSpec, FqElem};
use gradekit::gralg::{graded_product, suspend, twist_algebra, twist_module, twisted_group_algebra, GradedModule};
use gradekit::grend;
use gradekit::grp::{self, klein4, quaternion8, symmetric3, FiniteGroup};
use gradekit::linalg::{self, charpoly, poly_eval_mat, Mat};
use gradekit::mackey;
use gradekit::selftest::q8_sign_instance;
use proptest::prelude::*;

fn fields() -> Vec<FieldSpec> {
    vec![
        FieldSpec::prime(2).unwrap(),
        FieldSpec::new(2, 2, None).unwrap(),
        FieldSpec::new(3, 2, None).unwrap(),
        FieldSpec::prime(7).unwrap(),
        FieldSpec::new(5, 2, None).unwrap(),
    ]
}

/// (group, q) pairs small enough for quick H² computations.
fn coh_cases() -> Vec<(FiniteGroup, FieldSpec)> {
    vec![
        (klein4(), FieldSpec::prime(5).unwrap()),
        (grp::cyclic(4).unwrap(), FieldSpec::prime(5).unwrap()),
        (symmetric3(), FieldSpec::prime(7).unwrap()),
        (quaternion8(), FieldSpec::new(3, 2, None).unwrap()),
    ]
}

fn random_coboundary(g: &FiniteGroup, f: &FieldSpec, seeds: &[u32]) -> Cocycle2 {
    let units = f.units();
    let lambda: Vec<FqElem> =
        g.elements().map(|x| if x == g.identity() { f.one() } else { f.exp(seeds[x % seeds.len()] as u64 % units as u64) }).collect();
    coh::coboundary(g, f, &lambda).unwrap()
}

fn random_class(h: &coh::CohomologyGroup, raw: &[u64]) -> ClassCoords {
    ClassCoords(h.invariant_factors.iter().enumerate().map(|(i, &d)| raw[i % raw.len()] % d).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(fi in 0usize..5, a in 0u32..25, b in 0u32..25, c in 0u32..25) {
        let f = &fields()[fi];
        let (a, b, c) = (FqElem(a % f.q()), FqElem(b % f.q()), FqElem(c % f.q()));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        prop_assert_eq!(f.parse(&f.format(a)).unwrap(), a);
        if a.0 != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            prop_assert_eq!(f.exp(f.dlog(a).unwrap() as u64), a);
        } else {
            prop_assert!(f.inv(a).is_err());
        }
    }

    #[test]
    fn class_map_is_additive(ci in 0usize..4, x in prop::collection::vec(0u64..12, 3), y in prop::collection::vec(0u64..12, 3), s in prop::collection::vec(1u32..24, 8)) {
        let (g, f) = &coh_cases()[ci];
        let h = coh::h2(g, f);
        let (cx, cy) = (random_class(&h, &x), random_class(&h, &y));
        let a = h.cocycle_for(&cx).unwrap().product(&random_coboundary(g, f, &s)).unwrap();
        let b = h.cocycle_for(&cy).unwrap();
        prop_assert_eq!(h.class_of(&a).unwrap(), cx.clone());
        prop_assert_eq!(h.class_of(&a.product(&b).unwrap()).unwrap(), h.add(&cx, &cy));
        prop_assert_eq!(h.class_of(&a.inverse()).unwrap(), h.neg(&cx));
    }

    #[test]
    fn cohomologous_iff_same_class(ci in 0usize..4, x in prop::collection::vec(0u64..12, 3), y in prop::collection::vec(0u64..12, 3), s in prop::collection::vec(1u32..24, 8)) {
        let (g, f) = &coh_cases()[ci];
        let h = coh::h2(g, f);
        let a = h.cocycle_for(&random_class(&h, &x)).unwrap();
        let b = h.cocycle_for(&random_class(&h, &y)).unwrap().product(&random_coboundary(g, f, &s)).unwrap();
        let same = h.class_of(&a).unwrap() == h.class_of(&b).unwrap();
        match coh::cohomologous(&a, &b).unwrap() {
            Some(lambda) => {
                prop_assert!(same);
                prop_assert_eq!(a.product(&coh::coboundary(g, f, &lambda).unwrap()).unwrap(), b);
            }
            None => prop_assert!(!same),
        }
    }

    #[test]
    fn normalization_keeps_class(s in prop::collection::vec(1u32..4, 16), k in 1u32..4) {
        let f = FieldSpec::prime(5).unwrap();
        let g = klein4();
        let p = coh::klein4_pauli(&f);
        let c = f.exp(k as u64);
        let scaled: Vec<Vec<FqElem>> = p.table().iter().map(|r| r.iter().map(|&v| f.mul(v, c)).collect()).collect();
        let (n, _) = Cocycle2::from_table(&g, &f, &scaled).unwrap();
        let h = coh::h2(&g, &f);
        let perturbed = n.product(&random_coboundary(&g, &f, &s)).unwrap();
        prop_assert_eq!(h.class_of(&perturbed).unwrap(), h.class_of(&p).unwrap());
    }

    #[test]
    fn inflate_and_restrict_respect_products(x in prop::collection::vec(0u64..4, 3), y in prop::collection::vec(0u64..4, 3)) {
        let f = FieldSpec::prime(5).unwrap();
        let q8 = quaternion8();
        let (k4, pi) = q8.quotient(&q8.center()).unwrap();
        let h = coh::h2(&k4, &f);
        let (a, b) = (h.cocycle_for(&random_class(&h, &x)).unwrap(), h.cocycle_for(&random_class(&h, &y)).unwrap());
        prop_assert_eq!(a.product(&b).unwrap().inflate(&pi).unwrap(), a.inflate(&pi).unwrap().product(&b.inflate(&pi).unwrap()).unwrap());
        let (_, emb) = k4.subgroup(&[1]).unwrap();
        prop_assert_eq!(a.product(&b).unwrap().restrict(&emb).unwrap(), a.restrict(&emb).unwrap().product(&b.restrict(&emb).unwrap()).unwrap());
    }

    #[test]
    fn twisting_is_a_monoid_action(x in prop::collection::vec(0u64..4, 3), y in prop::collection::vec(0u64..4, 3)) {
        let f = FieldSpec::prime(5).unwrap();
        let (a, _) = q8_sign_instance(&f).unwrap();
        let h = coh::h2(a.group(), &f);
        let (al, be) = (h.cocycle_for(&random_class(&h, &x)).unwrap(), h.cocycle_for(&random_class(&h, &y)).unwrap());
        let tw = twist_algebra(&al, &twist_algebra(&be, &a).unwrap()).unwrap();
        prop_assert_eq!(&tw, &twist_algebra(&al.product(&be).unwrap(), &a).unwrap());
        prop_assert_eq!(tw.base_algebra(), a.base_algebra());
        prop_assert!(tw.validate().is_ok());
        let p = graded_product(&twisted_group_algebra(&al), &twisted_group_algebra(&be)).unwrap();
        prop_assert_eq!(p, twisted_group_algebra(&al.product(&be).unwrap()));
    }

    #[test]
    fn twisted_modules_stay_modules(x in prop::collection::vec(0u64..4, 3)) {
        let f = FieldSpec::prime(5).unwrap();
        let (a, m) = q8_sign_instance(&f).unwrap();
        let h = coh::h2(a.group(), &f);
        let al = h.cocycle_for(&random_class(&h, &x)).unwrap();
        let w = mackey::associated(&a, &m).unwrap();
        let tw = twist_module(&al, &w).unwrap();
        prop_assert!(tw.validate().is_ok());
        prop_assert_eq!(grend::inertia(&tw).unwrap(), grend::inertia(&w).unwrap());
    }

    #[test]
    fn suspension_composes(h1 in 0usize..4, h2 in 0usize..4) {
        let f = FieldSpec::prime(5).unwrap();
        let w = GradedModule::regular(&twisted_group_algebra(&coh::klein4_pauli(&f)));
        let g = w.group().clone();
        prop_assert_eq!(suspend(&suspend(&w, h1), h2), suspend(&w, g.mul(h2, h1)));
        prop_assert!(suspend(&w, h1).validate().is_ok());
    }

    #[test]
    fn linear_algebra_identities(fi in 0usize..5, n in 1usize..6, cells in prop::collection::vec(0u32..25, 36)) {
        let f = &fields()[fi];
        let rows: Vec<Vec<FqElem>> = (0..n).map(|r| (0..n).map(|c| FqElem(cells[r * 6 + c] % f.q())).collect()).collect();
        let m = Mat::from_rows(&rows, n);
        prop_assert_eq!(linalg::rank(f, &m) + linalg::nullspace(f, &m).len(), n);
        prop_assert!(poly_eval_mat(f, &charpoly(f, &m), &m).is_zero());
        if let Some(inv) = linalg::inverse(f, &m) {
            prop_assert_eq!(inv.mul(f, &m), Mat::identity(n));
        } else {
            prop_assert!(linalg::rank(f, &m) < n);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn census_does_not_depend_on_seed(seed in any::<u64>()) {
        let f = FieldSpec::prime(5).unwrap();
        let dims: Vec<usize> = grend::simple_modules(&gradekit::gralg::group_algebra(&quaternion8(), &f), seed)
            .unwrap().iter().map(|(s, _)| s.dim()).collect();
        prop_assert_eq!(dims, vec![1, 1, 1, 1, 2]);
    }
}
