//! Built-in property suites run by `gradekit selftest`, plus the standard
//! small instances they use.

use crate::coh::{self, klein4_pauli, ClassCoords, Cocycle2};
use crate::error::Result;
use crate::ffield::FieldSpec;
use crate::gralg::{
    elementary_matrix_algebra, group_algebra, module_product, quotient_grading, suspend, twist_algebra,
    twisted_group_algebra, GradedAlgebra, GradedModule, UngradedModule,
};
use crate::grp::{self, klein4, quaternion8};
use crate::linalg::Mat;
use crate::mackey::{self, ExtendOutcome};

/// FQ8 graded by Q8/Z(Q8) ≅ K4, with the sign module of the centre.
pub fn q8_sign_instance(f: &FieldSpec) -> Result<(GradedAlgebra, UngradedModule)> {
    let (a, _) = quotient_grading(&group_algebra(&quaternion8(), f), &quaternion8().center())?;
    let base = a.base_algebra();
    let minus = Mat::identity(1).scale(f, f.neg(f.one()));
    let m = UngradedModule::new(&base, vec![Mat::identity(1), minus])?;
    Ok((a, m))
}

/// The trivial character of a base algebra spanned by group elements: every
/// basis element acts as 1.
pub fn trivial_base_module(a: &GradedAlgebra) -> Result<UngradedModule> {
    let base = a.base_algebra();
    let act = (0..base.dim()).map(|_| Mat::identity(1)).collect();
    UngradedModule::new(&base, act)
}

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn suite(name: &str, run: impl FnOnce() -> Result<(bool, String)>) -> SuiteResult {
    let (passed, detail) = match run() {
        Ok(x) => x,
        Err(e) => (false, format!("error: {e}")),
    };
    SuiteResult { name: name.into(), passed, detail }
}

pub fn run_all(seed: u64) -> Vec<SuiteResult> {
    let f = FieldSpec::prime(5).expect("GF(5)");
    let k4 = klein4();
    let mut out = Vec::new();

    out.push(suite("field-axioms", || {
        let g4 = FieldSpec::new(2, 2, None)?;
        let mut ok = true;
        for a in g4.elements() {
            for b in g4.elements() {
                ok &= g4.mul(a, b) == g4.mul(b, a);
                for c in g4.elements() {
                    ok &= g4.mul(a, g4.add(b, c)) == g4.add(g4.mul(a, b), g4.mul(a, c));
                }
            }
            if a.0 != 0 {
                ok &= g4.mul(a, g4.inv(a)?) == g4.one();
            }
        }
        Ok((ok, "GF(4) ring axioms and inverses".into()))
    }));

    out.push(suite("class-homomorphism", || {
        let h = coh::h2(&k4, &f);
        let mut ok = true;
        for x in h.all_classes() {
            for y in h.all_classes() {
                let p = h.cocycle_for(&x)?.product(&h.cocycle_for(&y)?)?;
                ok &= h.class_of(&p)? == h.add(&x, &y);
            }
        }
        Ok((ok, format!("H² of order {} over K4/GF(5)", h.order)))
    }));

    out.push(suite("twist-monoid-law", || {
        let (a, _) = q8_sign_instance(&f)?;
        let h = coh::h2(a.group(), &f);
        let p = h.cocycle_for(&ClassCoords(vec![0, 1, 1]))?;
        let mut ok = true;
        for c in h.all_classes() {
            let beta = h.cocycle_for(&c)?;
            let left = twist_algebra(&p, &twist_algebra(&beta, &a)?)?;
            let right = twist_algebra(&p.product(&beta)?, &a)?;
            ok &= left == right;
        }
        Ok((ok, "α(β(A)) = (αβ)(A) on the Q8 instance".into()))
    }));

    out.push(suite("q8-obstruction", || {
        let (a, m) = q8_sign_instance(&f)?;
        let obs = mackey::obstruction(&a, &m)?;
        let refused = mackey::extend(&a, &m)?.is_refuted();
        let b = twist_algebra(&obs.omega.inverse(), &a)?;
        let extended = matches!(mackey::extend(&b, &m)?, ExtendOutcome::Extended(_));
        let ok = obs.invariant && obs.h2.class_order(&obs.omega_class) == 2 && refused && extended;
        Ok((ok, format!("ω class {:?}", obs.omega_class.0)))
    }));

    out.push(suite("wedderburn-elementary", || {
        let z2 = grp::cyclic(2)?;
        let r = mackey::wedderburn(&elementary_matrix_algebra(&f, &z2, &[0, 1])?)?;
        let ok = r.n == 2 && r.inertia == vec![0] && r.kernel_dim == 0 && r.certificate.is_some();
        Ok((ok, r.decomposition()))
    }));

    out.push(suite("end-twist-coherence", || {
        let p = klein4_pauli(&f);
        let w = GradedModule::regular(&twisted_group_algebra(&p));
        let mut ok = true;
        let h = coh::h2(&k4, &f);
        for c in h.all_classes() {
            let (a, b, s) = mackey::end_twist_coherence(&h.cocycle_for(&c)?, &w)?;
            ok &= a && b && s;
        }
        Ok((ok, "regular module of the Pauli algebra".into()))
    }));

    out.push(suite("suspension-product", || {
        let (a, m) = q8_sign_instance(&f)?;
        let w = mackey::associated(&a, &m)?;
        let mut ok = true;
        for h in k4.elements() {
            ok &= suspend(&module_product(&w, &w)?, h) == module_product(&suspend(&w, h), &suspend(&w, h))?;
        }
        Ok((ok, "h(W ⊗ W) = h(W) ⊗ h(W)".into()))
    }));

    out.push(suite("simple-census", || {
        let q8 = group_algebra(&quaternion8(), &f);
        let dims: Vec<usize> = crate::grend::simple_modules(&q8, seed)?.iter().map(|(s, _)| s.dim()).collect();
        Ok((dims == vec![1, 1, 1, 1, 2], format!("simple dimensions {dims:?}")))
    }));

    out.push(suite("coboundary-invariance", || {
        let (a, m) = q8_sign_instance(&f)?;
        let lambda: Vec<_> = (1..=4).map(|x| f.from_int(x)).collect();
        let beta: Cocycle2 = coh::coboundary(a.group(), &f, &lambda)?;
        let ok = mackey::extend(&twist_algebra(&beta, &a)?, &m)?.is_refuted();
        Ok((ok, "coboundary twist keeps the refusal".into()))
    }));

    out
}
