//! Implementation against independent brute-force oracles, with the oracle
//! outputs frozen.

mod common;

use gradekit::coh::{self, Cocycle2};
use gradekit::ffield::FieldSpec;
use gradekit::gralg::{self, elementary_matrix_algebra, graded_product, group_algebra, twist_algebra, twisted_group_algebra, GradedModule};
use gradekit::grend;
use gradekit::grp::{self, klein4, quaternion8, symmetric3};
use gradekit::mackey::{self, ExtendOutcome};
use gradekit::selftest::{q8_sign_instance, trivial_base_module};

fn check_h2(g: &grp::FiniteGroup, q: u64, oracle: common::H2Oracle, frozen: (usize, usize, &[u64])) {
    assert_eq!((oracle.cocycles, oracle.coboundaries, oracle.invariant_factors.as_slice()), frozen);
    let h = coh::h2(g, &FieldSpec::prime(q).unwrap());
    assert_eq!(h.order, oracle.order);
    assert_eq!(h.invariant_factors, oracle.invariant_factors);
}

#[test]
fn h2_z2_gf3() {
    let g = grp::cyclic(2).unwrap();
    check_h2(&g, 3, common::h2_exhaustive(&g, 2), (2, 1, &[2]));
}

#[test]
fn h2_z4_gf5() {
    let g = grp::cyclic(4).unwrap();
    check_h2(&g, 5, common::h2_exhaustive(&g, 4), (64, 16, &[4]));
}

#[test]
fn h2_klein4_gf5() {
    let g = klein4();
    check_h2(&g, 5, common::h2_exhaustive(&g, 4), (128, 16, &[2, 2, 2]));
}

#[test]
fn h2_s3_gf7() {
    let g = symmetric3();
    check_h2(&g, 7, common::h2_backtrack(&g, 6), (7776, 3888, &[2]));
}

#[test]
fn backtracking_agrees_with_exhaustive() {
    let g = klein4();
    let a = common::h2_exhaustive(&g, 4);
    let b = common::h2_backtrack(&g, 4);
    assert_eq!((a.cocycles, a.invariant_factors), (b.cocycles, b.invariant_factors));
}

#[test]
fn q8_extension_matches_brute_force() {
    let f = FieldSpec::prime(5).unwrap();
    let (a, m) = q8_sign_instance(&f).unwrap();
    let h = coh::h2(a.group(), &f);
    let omega = mackey::obstruction(&a, &m).unwrap().omega_class;
    for c in h.all_classes() {
        let b = twist_algebra(&h.cocycle_for(&c).unwrap().inverse(), &a).unwrap();
        let brute = common::extension_exists(&b, &m);
        assert_eq!(brute, c == omega, "class {:?}", c.0);
        assert_eq!(mackey::extend(&b, &m).unwrap().is_extended(), brute);
    }
}

#[test]
fn q8_inertia_matches_character_oracle() {
    let f = FieldSpec::prime(5).unwrap();
    let q8 = quaternion8();
    let (a, m) = q8_sign_instance(&f).unwrap();
    let sign = |n: usize| if n == 0 { 1 } else { 4 };
    let oracle = common::character_inertia(&q8, &q8.center(), &sign);
    assert_eq!(oracle.len(), 8);
    // All of Γ fixes the character, so the inertia in Γ/N is everything.
    assert_eq!(mackey::inertia_of_base(&a, &m).unwrap(), vec![0, 1, 2, 3]);
}

#[test]
fn elementary_inertia_is_trivial() {
    let f = FieldSpec::prime(5).unwrap();
    let z2 = grp::cyclic(2).unwrap();
    let a = elementary_matrix_algebra(&f, &z2, &[0, 1]).unwrap();
    let base = a.base_algebra();
    let (ideal, _) = grend::minimal_graded_ideal(&base).unwrap();
    let m = gralg::UngradedModule::new(&base, ideal.act).unwrap();
    assert_eq!(mackey::inertia_of_base(&a, &m).unwrap(), vec![0]);
    // Not strongly graded with this M, so the radical at e is nonzero.
    let ind = mackey::induced_graded(&a, &m).unwrap();
    assert!(ind.dim() >= mackey::associated(&a, &m).unwrap().dim());
}

#[test]
fn trivial_grading_gives_m_back() {
    let f = FieldSpec::prime(5).unwrap();
    let a = group_algebra(&quaternion8(), &f);
    let (t, _) = gralg::quotient_grading(&a, &(0..8).collect::<Vec<_>>()).unwrap();
    let m = trivial_base_module(&t).unwrap();
    let w = mackey::induced_graded(&t, &m).unwrap();
    assert_eq!(w.dim(), 1);
    assert_eq!(mackey::inertia_of_base(&t, &m).unwrap(), vec![0]);
}

#[test]
fn regular_base_module_induces_a() {
    let f = FieldSpec::prime(5).unwrap();
    let (a, _) = q8_sign_instance(&f).unwrap();
    let m = gralg::UngradedModule::regular(&a.base_algebra());
    let w = mackey::induced_graded(&a, &m).unwrap();
    assert_eq!(w.dim(), a.dim());
    for g in a.group().elements() {
        assert_eq!(w.component(g).len(), a.component(g).len());
    }
}

#[test]
fn strongly_graded_radical_vanishes() {
    let f = FieldSpec::prime(5).unwrap();
    let (a, m) = q8_sign_instance(&f).unwrap();
    let w = mackey::induced_graded(&a, &m).unwrap();
    for g in a.group().elements() {
        assert_eq!(mackey::localizing_radical(&w, g).dim(), 0);
    }
    assert_eq!(mackey::associated(&a, &m).unwrap(), w);
}

#[test]
fn coboundary_twist_preserves_extendability_both_ways() {
    let f = FieldSpec::prime(5).unwrap();
    let (a, m) = q8_sign_instance(&f).unwrap();
    let g = a.group();
    let omega = mackey::obstruction(&a, &m).unwrap().omega;
    let b = twist_algebra(&Cocycle2::new(g, &f, &omega.inverse().table()).unwrap(), &a).unwrap();
    let lambda: Vec<_> = [1, 2, 3, 4].iter().map(|&x| f.from_int(x)).collect();
    let beta = coh::coboundary(g, &f, &lambda).unwrap();
    for base in [&a, &b] {
        let before = mackey::extend(base, &m).unwrap().is_extended();
        let after = mackey::extend(&twist_algebra(&beta, base).unwrap(), &m).unwrap().is_extended();
        assert_eq!(before, after);
        assert_eq!(after, common::extension_exists(&twist_algebra(&beta, base).unwrap(), &m));
    }
}

#[test]
fn extendable_module_has_trivial_class_only() {
    let f = FieldSpec::prime(5).unwrap();
    let (a, _) = q8_sign_instance(&f).unwrap();
    let m = trivial_base_module(&a).unwrap();
    let t = mackey::verify_theorem_a(&a, &m, None).unwrap();
    assert!(t.all_consistent());
    let ext: Vec<_> = t.rows.iter().filter(|r| r.extended).collect();
    assert_eq!(ext.len(), 1);
    assert!(ext[0].class.is_zero());
}

#[test]
fn trivial_h2_always_extends() {
    // H²(Z3, GF(5)*) = 1.
    let f = FieldSpec::prime(5).unwrap();
    let z3 = grp::cyclic(3).unwrap();
    let a = group_algebra(&z3, &f);
    let m = trivial_base_module(&a).unwrap();
    let t = mackey::verify_theorem_a(&a, &m, None).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert!(t.rows[0].extended && t.all_consistent());
}

#[test]
fn wedderburn_product_case() {
    // M_2 with the elementary (e, x) grading on K4, and the Pauli algebra.
    let f = FieldSpec::prime(5).unwrap();
    let k4 = klein4();
    let e = elementary_matrix_algebra(&f, &k4, &[0, 1]).unwrap();
    let p = twisted_group_algebra(&coh::klein4_pauli(&f));

    // The graded product with F^ωG is the twist ω(E), still of type M_2 ⊗ F.
    let twisted = graded_product(&e, &p).unwrap();
    let r = mackey::wedderburn(&twisted).unwrap();
    assert_eq!((r.n, r.inertia.clone()), (2, vec![0]));

    // E ⊗_F F^ωG graded through the multiplication map has fine part F^ωK4.
    let k4k4 = grp::direct_product(&k4, &k4).unwrap();
    let mult = grp::GroupHom::new(k4k4.clone(), k4.clone(), k4k4.elements().map(|x| k4.mul(x % 4, x / 4)).collect()).unwrap();
    let full = gralg::regrade(&gralg::tensor_algebra(&e, &p).unwrap(), &mult).unwrap();
    let r = mackey::wedderburn(&full).unwrap();
    assert_eq!(r.n, 2);
    assert_eq!(r.inertia, vec![0, 1, 2, 3]);
    assert_eq!(r.kernel_dim, 0);
    assert!(r.certificate.is_some());
    let h = coh::h2(&k4, &f);
    assert_eq!(h.class_of(&Cocycle2::new(&k4, &f, &r.omega.table()).unwrap()).unwrap(), h.class_of(&coh::klein4_pauli(&f)).unwrap());
}

#[test]
fn free_module_end_recovers_cocycle() {
    let f = FieldSpec::prime(5).unwrap();
    let k4 = klein4();
    let h = coh::h2(&k4, &f);
    for c in h.all_classes() {
        let alpha = h.cocycle_for(&c).unwrap();
        let e = grend::end_graded(&GradedModule::regular(&twisted_group_algebra(&alpha))).unwrap();
        let x = grend::extract_twisted_cocycle(&e).unwrap();
        assert!(coh::cohomologous(&alpha, &x.cocycle).unwrap().is_some());
    }
}

#[test]
fn extend_outcome_is_exact_restriction() {
    let f = FieldSpec::prime(5).unwrap();
    let (a, m) = q8_sign_instance(&f).unwrap();
    let omega = mackey::obstruction(&a, &m).unwrap().omega;
    let b = twist_algebra(&omega.inverse(), &a).unwrap();
    let ExtendOutcome::Extended(x) = mackey::extend(&b, &m).unwrap() else { panic!("extends") };
    let base = b.base_indices();
    for (p, &i) in base.iter().enumerate() {
        assert_eq!(x.module.act[i], m.act[p]);
    }
    assert!(x.module.validate().is_ok());
}
