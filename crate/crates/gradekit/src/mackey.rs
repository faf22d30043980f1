//! Induced and associated graded modules, the obstruction map, extension of
//! base modules, the graded Wedderburn decomposition and the correspondence
//! of simple modules.

use crate::coh::{self, ClassCoords, Cocycle2, CohomologyGroup};
use crate::error::{Error, Result};
use crate::ffield::{FieldSpec, FqElem};
use crate::gralg::{
    self, classify, component_size, graded_product, module_pairs, module_product, product_pairs, scan_component,
    tensor_algebra, tensor_module, twist_algebra, twisted_group_algebra, GradedAlgebra, GradedModule, UngradedModule,
    SCAN_CAP,
};
use crate::grend::{self, end_graded, extract_twisted_cocycle, GradedEndAlgebra, TwistedExtraction};
use crate::grp::{self, FiniteGroup};
use crate::linalg::{self, rank, spin, unit_vec, Mat, QuotientBasis, Subspace};

fn check_base_module(a: &GradedAlgebra, m: &UngradedModule) -> Result<()> {
    if m.algebra != a.base_algebra() || m.validate().is_err() {
        return Err(Error::NotBaseModule);
    }
    Ok(())
}

/// A ⊗_{A_e} M with components A_g ⊗_{A_e} M. The first dim M basis vectors
/// are 1 ⊗ m_j, so the e-component is M on the nose.
pub fn induced_graded(a: &GradedAlgebra, m: &UngradedModule) -> Result<GradedModule> {
    check_base_module(a, m)?;
    let f = a.field();
    let (d, k) = (a.dim(), m.dim());
    let n = d * k;
    let base = a.base_indices();
    let base_alg = m.algebra.clone();
    let mut rel = Subspace::new(n);
    for &p in base_alg.generators() {
        let x = base[p];
        for i in 0..d {
            for j in 0..k {
                // (e_i x) ⊗ m_j − e_i ⊗ (x m_j)
                let mut v = vec![FqElem(0); n];
                for &(l, c) in a.basis_mul(i, x) {
                    v[l * k + j] = f.add(v[l * k + j], c);
                }
                let xm = m.act[p].col(j);
                for (jj, &c) in xm.iter().enumerate() {
                    v[i * k + jj] = f.sub(v[i * k + jj], c);
                }
                rel.insert(f, &v);
            }
        }
    }
    let unit = a.unit();
    let preferred: Vec<Vec<FqElem>> = (0..k)
        .map(|j| {
            let mut v = vec![FqElem(0); n];
            for (i, &c) in unit.iter().enumerate() {
                v[i * k + j] = c;
            }
            v
        })
        .collect();
    let qb = QuotientBasis::new(f, rel, &preferred);
    let mdeg: Vec<usize> = qb.reps.iter().map(|r| a.deg(r.iter().position(|c| c.0 != 0).unwrap() / k)).collect();
    let act = (0..d)
        .map(|i| {
            let cols: Vec<Vec<FqElem>> = qb
                .reps
                .iter()
                .map(|r| {
                    let mut out = vec![FqElem(0); n];
                    for (ix, &c) in r.iter().enumerate() {
                        if c.0 == 0 {
                            continue;
                        }
                        let (l, j) = (ix / k, ix % k);
                        for &(t, s) in a.basis_mul(i, l) {
                            out[t * k + j] = f.add(out[t * k + j], f.mul(c, s));
                        }
                    }
                    qb.coords(f, &out)
                })
                .collect();
            Mat::from_cols(&cols, qb.dim())
        })
        .collect();
    Ok(GradedModule { algebra: a.clone(), mdeg, act })
}

/// The largest graded submodule with zero g-component: its h-component is
/// {w ∈ W_h : A_{g h⁻¹} w = 0}.
pub fn localizing_radical(w: &GradedModule, g: usize) -> Subspace {
    let f = w.field();
    let grp = w.group();
    let m = w.dim();
    let mut out = Subspace::new(m);
    for h in w.support() {
        let idx = w.component(h);
        let kdeg = grp.mul(g, grp.inv(h));
        let comp = w.algebra.component(kdeg);
        let mut rows: Vec<Vec<FqElem>> = Vec::new();
        for &i in &comp {
            for r in 0..m {
                rows.push(idx.iter().map(|&c| w.act[i].get(r, c)).collect());
            }
        }
        let kernel = if rows.is_empty() {
            (0..idx.len()).map(|t| unit_vec(idx.len(), t)).collect()
        } else {
            linalg::nullspace(f, &Mat::from_rows(&rows, idx.len()))
        };
        for v in kernel {
            let mut full = vec![FqElem(0); m];
            for (t, &c) in v.iter().enumerate() {
                full[idx[t]] = c;
            }
            out.insert(f, &full);
        }
    }
    out
}

/// Induced module modulo its localizing radical at e.
pub fn associated(a: &GradedAlgebra, m: &UngradedModule) -> Result<GradedModule> {
    let ind = induced_graded(a, m)?;
    let t = localizing_radical(&ind, a.group().identity());
    let w = if t.dim() == 0 { ind } else { ind.quotient(&t) };
    debug_assert!(base_component_is(&w, m));
    Ok(w)
}

/// The e-component of W is spanned by its first dim M basis vectors and the
/// A_e-action there equals M's action exactly.
fn base_component_is(w: &GradedModule, m: &UngradedModule) -> bool {
    let e = w.group().identity();
    let k = m.dim();
    if w.component(e) != (0..k).collect::<Vec<_>>() {
        return false;
    }
    let base = w.algebra.base_indices();
    base.iter().enumerate().all(|(p, &i)| (0..k).all(|r| (0..k).all(|c| w.act[i].get(r, c) == m.act[p].get(r, c))))
}

/// Inertia of a base module: that of its associated graded module.
pub fn inertia_of_base(a: &GradedAlgebra, m: &UngradedModule) -> Result<Vec<usize>> {
    let w = associated(a, m)?;
    if grend::is_graded_simple(&w)? {
        grend::inertia(&w)
    } else {
        grend::inertia_bruteforce(&w)
    }
}

/// The A_e-action on the e-component read from an A-action.
fn base_restriction(a: &GradedAlgebra, act: &[Mat]) -> UngradedModule {
    UngradedModule { algebra: a.base_algebra(), act: a.base_indices().iter().map(|&i| act[i].clone()).collect() }
}

#[derive(Clone, Debug)]
pub struct ObstructionReport {
    pub inertia: Vec<usize>,
    pub extraction: TwistedExtraction,
    /// ω on the inertia subgroup.
    pub omega: Cocycle2,
    pub h2: CohomologyGroup,
    pub omega_class: ClassCoords,
    pub invariant: bool,
    pub end_algebra: GradedEndAlgebra,
    pub module: GradedModule,
}

impl ObstructionReport {
    /// ω as a cocycle on G; only available when M is G-invariant.
    pub fn omega_on_g(&self) -> Option<&Cocycle2> {
        self.invariant.then_some(&self.omega)
    }
}

fn check_abs_simple(m: &UngradedModule) -> Result<()> {
    let e = grend::hom_ungraded(m, m)?.len();
    if e != 1 {
        return Err(Error::NotAbsolutelySimple(e));
    }
    Ok(())
}

pub fn obstruction(a: &GradedAlgebra, m: &UngradedModule) -> Result<ObstructionReport> {
    check_base_module(a, m)?;
    check_abs_simple(m)?;
    let w = associated(a, m)?;
    let e = end_graded(&w)?;
    let ext = extract_twisted_cocycle(&e)?;
    let invariant = ext.support.len() == a.group().order();
    let h2 = coh::h2(&ext.subgroup, a.field());
    let omega = ext.cocycle.clone();
    let omega_class = h2.class_of(&omega)?;
    Ok(ObstructionReport { inertia: ext.support.clone(), extraction: ext, omega, h2, omega_class, invariant, end_algebra: e, module: w })
}

/// An A-module structure on M restricting to the given A_e-action.
#[derive(Clone, Debug)]
pub struct Extension {
    pub module: UngradedModule,
    /// Skew system u_g on the associated module (u_g∘u_h = u_{gh}).
    pub skew: Vec<Mat>,
}

#[derive(Clone, Debug)]
pub enum ExtendOutcome {
    Extended(Extension),
    /// Not extendable, with the reason. Only produced for strongly graded A.
    Refuted(String),
    Undetermined(String),
}

impl ExtendOutcome {
    pub fn is_extended(&self) -> bool {
        matches!(self, ExtendOutcome::Extended(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, ExtendOutcome::Refuted(_))
    }
}

/// Build a ⋆ w = (a w)u_g⁻¹ on the e-component and verify it.
fn extension_from_skew(a: &GradedAlgebra, w: &GradedModule, m: &UngradedModule, skew: &[Mat]) -> Result<Option<Extension>> {
    let f = a.field();
    let k = m.dim();
    let inv: Vec<Mat> = skew.iter().map(|u| linalg::inverse(f, u).expect("skew system of units")).collect();
    let act: Vec<Mat> = (0..a.dim())
        .map(|i| {
            let full = inv[a.deg(i)].mul(f, &w.act[i]);
            let mut out = Mat::zeros(k, k);
            for r in 0..k {
                for c in 0..k {
                    out.set(r, c, full.get(r, c));
                }
            }
            out
        })
        .collect();
    let Ok(module) = UngradedModule::new(a, act) else { return Ok(None) };
    let restricted = base_restriction(a, &module.act);
    if restricted.act != m.act {
        return Ok(None);
    }
    Ok(Some(Extension { module, skew: skew.to_vec() }))
}

fn is_skew_system(f: &FieldSpec, g: &FiniteGroup, u: &[Mat]) -> bool {
    g.elements().all(|x| g.elements().all(|y| u[y].mul(f, &u[x]) == u[g.mul(x, y)]))
}

/// Exhaustive search for a skew system among homogeneous units of End(W):
/// images of a generating set are chosen, the rest follows by products.
fn search_skew_system(e: &GradedEndAlgebra) -> Result<Option<Vec<Mat>>> {
    let a = &e.algebra;
    let f = a.field();
    let g = a.group();
    let gens = grp::generators(g);
    let mut cands: Vec<Vec<Mat>> = Vec::new();
    let mut total: u64 = 1;
    for &s in &gens {
        let comp = a.component(s);
        if comp.is_empty() {
            return Ok(None);
        }
        if component_size(f, comp.len()) > SCAN_CAP {
            return Err(Error::CapExceededUndetermined);
        }
        let mats: Vec<Mat> = comp.iter().map(|&i| e.matrices[i].clone()).collect();
        let idx: Vec<usize> = (0..comp.len()).collect();
        let mut list = Vec::new();
        scan_component(f, comp.len(), &idx, |v| {
            let mut acc = Mat::zeros(mats[0].rows, mats[0].cols);
            for (c, x) in v.iter().zip(&mats) {
                acc.axpy(f, *c, x);
            }
            if linalg::is_invertible(f, &acc) {
                list.push(acc);
            }
            false
        });
        total = total.saturating_mul(list.len() as u64);
        cands.push(list);
    }
    if total > SCAN_CAP {
        return Err(Error::CapExceededUndetermined);
    }
    let mdim = e.module.dim();
    let mut choice = vec![0usize; gens.len()];
    loop {
        if cands.iter().all(|c| !c.is_empty()) {
            // Closure from the identity along generators.
            let mut u: Vec<Option<Mat>> = vec![None; g.order()];
            u[g.identity()] = Some(Mat::identity(mdim));
            let mut queue = vec![g.identity()];
            let mut ok = true;
            while let Some(x) = queue.pop() {
                for (t, &s) in gens.iter().enumerate() {
                    let ux = u[x].clone().unwrap();
                    let next = cands[t][choice[t]].mul(f, &ux);
                    let xs = g.mul(x, s);
                    match &u[xs] {
                        None => {
                            u[xs] = Some(next);
                            queue.push(xs);
                        }
                        Some(prev) if *prev != next => ok = false,
                        _ => {}
                    }
                }
            }
            if ok {
                let u: Vec<Mat> = u.into_iter().map(|x| x.unwrap()).collect();
                if is_skew_system(f, g, &u) {
                    return Ok(Some(u));
                }
            }
        }
        // Next choice (odometer).
        let mut t = 0;
        loop {
            if t == gens.len() {
                return Ok(None);
            }
            choice[t] += 1;
            if choice[t] < cands[t].len() {
                break;
            }
            choice[t] = 0;
            t += 1;
        }
    }
}

/// Decide whether M extends to an A-module, constructively when possible.
pub fn extend(a: &GradedAlgebra, m: &UngradedModule) -> Result<ExtendOutcome> {
    check_base_module(a, m)?;
    let strongly = classify(a)?.is_strongly_graded;
    let w = associated(a, m)?;
    let e = end_graded(&w)?;
    let abs_simple = grend::hom_ungraded(m, m)?.len() == 1;
    if abs_simple {
        if let Ok(ext) = extract_twisted_cocycle(&e) {
            let g = a.group();
            if ext.support.len() != g.order() {
                if strongly {
                    return Ok(ExtendOutcome::Refuted("M is not G-invariant".into()));
                }
            } else {
                let omega = Cocycle2::new(g, a.field(), &ext.cocycle.table())?;
                match coh::cohomologous(&Cocycle2::trivial(g, a.field()), &omega)? {
                    Some(lambda) => {
                        let f = a.field();
                        let skew: Vec<Mat> = (0..g.order()).map(|x| ext.basis[x].scale(f, f.inv_nz(lambda[x]))).collect();
                        debug_assert!(is_skew_system(f, g, &skew));
                        if let Some(x) = extension_from_skew(a, &w, m, &skew)? {
                            return Ok(ExtendOutcome::Extended(x));
                        }
                    }
                    None if strongly => {
                        return Ok(ExtendOutcome::Refuted("obstruction class is nontrivial".into()));
                    }
                    None => {}
                }
            }
        }
    }
    match search_skew_system(&e) {
        Ok(Some(skew)) => {
            if let Some(x) = extension_from_skew(a, &w, m, &skew)? {
                return Ok(ExtendOutcome::Extended(x));
            }
            Ok(ExtendOutcome::Undetermined("skew system found but the induced action failed verification".into()))
        }
        Ok(None) if strongly => Ok(ExtendOutcome::Refuted("no skew system among homogeneous units of End(W)".into())),
        Ok(None) => Ok(ExtendOutcome::Undetermined("no skew system on the associated module; other graded modules are not searched".into())),
        Err(Error::CapExceededUndetermined) => Ok(ExtendOutcome::Undetermined("skew-system search exceeds caps".into())),
        Err(err) => Err(err),
    }
}

#[derive(Clone, Debug)]
pub struct TheoremARow {
    pub class: ClassCoords,
    pub is_omega: bool,
    pub outcome: String,
    pub extended: bool,
    pub consistent: bool,
}

#[derive(Clone, Debug)]
pub struct TheoremATable {
    pub omega_class: ClassCoords,
    pub strongly_graded: bool,
    pub rows: Vec<TheoremARow>,
}

impl TheoremATable {
    pub fn all_consistent(&self) -> bool {
        self.rows.iter().all(|r| r.consistent)
    }
}

/// Without an explicit class list every class is tested only up to this order.
pub const THEOREM_A_CLASS_CAP: u64 = 8;

/// For each class [α] (all classes unless a list is given), run extend on α⁻¹(A).
pub fn verify_theorem_a(a: &GradedAlgebra, m: &UngradedModule, classes: Option<&[ClassCoords]>) -> Result<TheoremATable> {
    let obs = obstruction(a, m)?;
    if !obs.invariant {
        return Err(Error::CapExceeded);
    }
    let strongly = classify(a)?.is_strongly_graded;
    let h = &obs.h2;
    let classes = match classes {
        Some(c) => c.to_vec(),
        None if h.order > THEOREM_A_CLASS_CAP => return Err(Error::CapExceeded),
        None => h.all_classes(),
    };
    let mut rows = Vec::new();
    for c in classes {
        let alpha = h.cocycle_for(&c)?;
        let b = twist_algebra(&alpha.inverse(), a)?;
        let out = extend(&b, m)?;
        let is_omega = c == obs.omega_class;
        let extended = out.is_extended();
        let consistent = if strongly { extended == is_omega && !matches!(out, ExtendOutcome::Undetermined(_)) } else { !is_omega || extended };
        let outcome = match &out {
            ExtendOutcome::Extended(_) => "extended".to_string(),
            ExtendOutcome::Refuted(r) => format!("refuted: {r}"),
            ExtendOutcome::Undetermined(r) => format!("undetermined: {r}"),
        };
        rows.push(TheoremARow { class: c, is_omega, outcome, extended, consistent });
    }
    Ok(TheoremATable { omega_class: obs.omega_class.clone(), strongly_graded: strongly, rows })
}

// ---------------------------------------------------------------------------
// Graded Wedderburn

#[derive(Clone, Debug)]
pub struct WedderburnReport {
    /// Basis of the chosen minimal left ideal M of A_e, in A_e coordinates.
    pub minimal_ideal: Vec<Vec<FqElem>>,
    pub base_module: UngradedModule,
    pub module: GradedModule,
    pub extraction: TwistedExtraction,
    pub inertia: Vec<usize>,
    pub omega: Cocycle2,
    pub n: usize,
    /// Degrees g_i of the homogeneous D-basis w_i of W.
    pub basis_degrees: Vec<usize>,
    pub centralizer_dim: usize,
    pub surjective: bool,
    pub kernel_dim: usize,
    pub graded_simple: Option<bool>,
    /// For graded simple A: coordinates of each basis element of A in the
    /// basis θ_{ij,x} of M_n(F) ⊗ F^ω I (index (i·n + j)·|I| + x).
    pub certificate: Option<Vec<Vec<FqElem>>>,
}

impl WedderburnReport {
    pub fn decomposition(&self) -> String {
        let g = self.module.group();
        let labels: Vec<&str> = self.inertia.iter().map(|&x| g.label(x)).collect();
        format!("A ≅ M_{n}(F) ⊗ F^ω I with n = {n}, I = {{{}}}", labels.join(", "), n = self.n)
    }
}

/// Graded simplicity of A: every nonzero homogeneous element generates A
/// as a two-sided ideal (projective scan under the cap).
pub fn is_graded_simple_algebra(a: &GradedAlgebra) -> Result<bool> {
    let f = a.field();
    let d = a.dim();
    let left: Vec<Mat> = a.generators().iter().map(|&i| a.left_matrix(&unit_vec(d, i))).collect();
    let right: Vec<Mat> = a.generators().iter().map(|&i| a.right_matrix(&unit_vec(d, i))).collect();
    let both: Vec<Mat> = left.into_iter().chain(right).collect();
    for g in a.support() {
        let idx = a.component(g);
        if component_size(f, idx.len()) > SCAN_CAP {
            return Err(Error::CapExceeded);
        }
        let hit = scan_component(f, d, &idx, |v| {
            let first = idx.iter().map(|&i| v[i]).find(|c| c.0 != 0);
            first == Some(FqElem(1)) && spin(f, d, &[v.to_vec()], &both).dim() < d
        });
        if hit.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn wedderburn(a: &GradedAlgebra) -> Result<WedderburnReport> {
    let f = a.field();
    let base = a.base_algebra();
    let (ideal, embed) = grend::minimal_graded_ideal(&base)?;
    let m = UngradedModule { algebra: base.clone(), act: ideal.act.clone() };
    let end_m = grend::hom_ungraded(&m, &m)?.len();
    if end_m != 1 {
        return Err(Error::SplittingFails(end_m));
    }
    let w = associated(a, &m)?;
    let e = end_graded(&w)?;
    let ext = extract_twisted_cocycle(&e)?;
    let isize_ = ext.support.len();
    let dim_w = w.dim();
    if dim_w % isize_ != 0 {
        return Err(Error::NotGradedSimple);
    }
    let n = dim_w / isize_;
    let sub = &ext.subgroup;
    // Homogeneous D-basis of W.
    let mut span = Subspace::new(dim_w);
    let mut ws: Vec<usize> = Vec::new();
    for j in 0..dim_w {
        let v = unit_vec(dim_w, j);
        if span.contains(f, &v) {
            continue;
        }
        ws.push(j);
        for vy in &ext.basis {
            span.insert(f, &vy.mul_vec(f, &v));
        }
    }
    if ws.len() != n || !span.is_full() {
        return Err(Error::NotGradedSimple);
    }
    // Columns w_k v_y in order (k, y).
    let mut cols = Vec::new();
    for &k in &ws {
        for vy in &ext.basis {
            cols.push(vy.col(k));
        }
    }
    let bmat = Mat::from_cols(&cols, dim_w);
    let binv = linalg::inverse(f, &bmat).ok_or(Error::NotGradedSimple)?;
    let ni = sub.order();
    let omega = &ext.cocycle;
    let mut thetas = Vec::with_capacity(n * n * ni);
    for i in 0..n {
        for j in 0..n {
            for x in 0..ni {
                let mut img = Mat::zeros(dim_w, dim_w);
                for y in 0..ni {
                    let c = omega.get(x, y);
                    let target = ext.basis[sub.mul(x, y)].col(ws[i]);
                    for r in 0..dim_w {
                        img.set(r, j * ni + y, f.mul(c, target[r]));
                    }
                }
                thetas.push(img.mul(f, &binv));
            }
        }
    }
    // θ_{ij,x} θ_{kl,y} = δ_jk ω(x,y) θ_{il,xy}
    let tix = |i: usize, j: usize, x: usize| (i * n + j) * ni + x;
    for i in 0..n {
        for j in 0..n {
            for x in 0..ni {
                for k in 0..n {
                    for l in 0..n {
                        for y in 0..ni {
                            let prod = thetas[tix(i, j, x)].mul(f, &thetas[tix(k, l, y)]);
                            let want = if j == k { thetas[tix(i, l, sub.mul(x, y))].scale(f, omega.get(x, y)) } else { Mat::zeros(dim_w, dim_w) };
                            if prod != want {
                                return Err(Error::InvalidAlgebra("matrix-unit law fails".into()));
                            }
                        }
                    }
                }
            }
        }
    }
    let centralizer = grend::intertwiners(f, &ext.basis, &ext.basis, dim_w, dim_w, &|_, _| true);
    let centralizer_dim = centralizer.len();
    debug_assert_eq!(centralizer_dim, n * n * ni);
    let rep = grend::left_rep(&w);
    let image_rank = a.dim() - rep.kernel.len();
    let surjective = image_rank == centralizer_dim;
    let kernel_dim = rep.kernel.len();
    let graded_simple = match is_graded_simple_algebra(a) {
        Ok(b) => Some(b),
        Err(Error::CapExceeded) => None,
        Err(err) => return Err(err),
    };
    let certificate = if graded_simple == Some(true) && kernel_dim == 0 && surjective {
        let coordz = linalg::Coordinatizer::new(f, &thetas.iter().map(|t| t.data.clone()).collect::<Vec<_>>());
        let coords: Vec<Vec<FqElem>> = rep.matrices.iter().map(|x| coordz.coords(f, &x.data)).collect();
        // Transport the structure constants of A and compare with the θ law.
        let p = Mat::from_cols(&coords, thetas.len());
        let pinv = linalg::inverse(f, &p).ok_or(Error::NotGradedSimple)?;
        for s in 0..thetas.len() {
            for t in 0..thetas.len() {
                let (i, j, x) = (s / ni / n, (s / ni) % n, s % ni);
                let (k, l, y) = (t / ni / n, (t / ni) % n, t % ni);
                let a_s = pinv.col(s);
                let a_t = pinv.col(t);
                let got = p.mul_vec(f, &a.mul(&a_s, &a_t));
                let mut want = vec![FqElem(0); thetas.len()];
                if j == k {
                    want[tix(i, l, sub.mul(x, y))] = omega.get(x, y);
                }
                if got != want {
                    return Err(Error::InvalidAlgebra("transported structure constants differ".into()));
                }
            }
        }
        Some(coords)
    } else {
        None
    };
    let basis_degrees = ws.iter().map(|&j| w.mdeg[j]).collect();
    Ok(WedderburnReport {
        minimal_ideal: embed,
        base_module: m,
        module: w,
        inertia: ext.support.clone(),
        omega: ext.cocycle.clone(),
        extraction: ext,
        n,
        basis_degrees,
        centralizer_dim,
        surjective,
        kernel_dim,
        graded_simple,
        certificate,
    })
}

// ---------------------------------------------------------------------------
// Correspondence of simple modules

#[derive(Clone, Debug)]
pub struct CorrespondenceReport {
    pub source_dims: Vec<usize>,
    pub image_dims: Vec<usize>,
    pub target_dims: Vec<usize>,
    /// For each source U, the index of the matching target module.
    pub matching: Vec<Option<usize>>,
    pub images_simple: bool,
    pub images_above_m: bool,
    pub bijective: bool,
}

/// Hom_{A_e}(M, X|_{A_e}) ≠ 0.
fn lies_above(a: &GradedAlgebra, x: &UngradedModule, m: &UngradedModule) -> Result<bool> {
    let r = base_restriction(a, &x.act);
    Ok(!grend::hom_ungraded(m, &r)?.is_empty())
}

pub fn correspondence(a: &GradedAlgebra, m: &UngradedModule, alpha: &Cocycle2, mtilde: &UngradedModule, seed: u64) -> Result<CorrespondenceReport> {
    if !classify(a)?.is_strongly_graded {
        return Err(Error::NotStronglyGraded);
    }
    check_base_module(a, m)?;
    let b = twist_algebra(&alpha.inverse(), a)?;
    if mtilde.algebra != b || mtilde.validate().is_err() {
        return Err(Error::AlgebraMismatch);
    }
    let f = a.field();
    let t = twisted_group_algebra(alpha);
    let ua = a.ungraded();
    let sources = grend::simple_modules(&t, seed)?;
    let mut images = Vec::new();
    for (u, _) in &sources {
        let act: Vec<Mat> = (0..a.dim()).map(|i| u.act[a.deg(i)].kron(f, &mtilde.act[i])).collect();
        images.push(UngradedModule::new(&ua, act)?);
    }
    let mut images_simple = true;
    let mut images_above_m = true;
    for x in &images {
        images_simple &= grend::is_simple(x, seed)?;
        images_above_m &= lies_above(a, x, m)?;
    }
    let mut targets = Vec::new();
    for (s, _) in grend::simple_modules(a, seed)? {
        if lies_above(a, &s, m)? {
            targets.push(s);
        }
    }
    let mut matching = Vec::new();
    for x in &images {
        let mut hit = None;
        for (k, s) in targets.iter().enumerate() {
            if grend::simple_isomorphic(x, s)? {
                hit = Some(k);
                break;
            }
        }
        matching.push(hit);
    }
    let mut seen = vec![false; targets.len()];
    let mut injective = true;
    for k in matching.iter().flatten() {
        injective &= !seen[*k];
        seen[*k] = true;
    }
    let bijective = images_simple && matching.iter().all(|x| x.is_some()) && injective && seen.iter().all(|&s| s);
    Ok(CorrespondenceReport {
        source_dims: sources.iter().map(|(u, _)| u.dim()).collect(),
        image_dims: images.iter().map(|x| x.dim()).collect(),
        target_dims: targets.iter().map(|x| x.dim()).collect(),
        matching,
        images_simple,
        images_above_m,
        bijective,
    })
}

// ---------------------------------------------------------------------------
// ω as a monoid homomorphism and twist equivariance

/// Class of ω for (A, M) in H²(G, F*), requiring invariance.
pub fn omega_class_on_g(a: &GradedAlgebra, m: &UngradedModule, h: &CohomologyGroup) -> Result<ClassCoords> {
    let obs = obstruction(a, m)?;
    if !obs.invariant {
        return Err(Error::CapExceeded);
    }
    let omega = Cocycle2::new(a.group(), a.field(), &obs.omega.table())?;
    h.class_of(&omega)
}

/// ω of W ⊗^G W′ for associated modules, by direct End computation.
pub fn omega_of_module(w: &GradedModule, h: &CohomologyGroup) -> Result<ClassCoords> {
    let e = end_graded(w)?;
    let ext = extract_twisted_cocycle(&e)?;
    if ext.support.len() != w.group().order() {
        return Err(Error::CapExceeded);
    }
    let omega = Cocycle2::new(w.group(), w.field(), &ext.cocycle.table())?;
    h.class_of(&omega)
}

#[derive(Clone, Debug)]
pub struct MonoidCheck {
    pub left: ClassCoords,
    pub right: ClassCoords,
    pub product: ClassCoords,
    pub holds: bool,
}

/// ω(W ⊗^G W′) = ω(W)·ω(W′) for the associated modules of two base modules.
pub fn omega_product_check(a: &GradedAlgebra, m: &UngradedModule, a2: &GradedAlgebra, m2: &UngradedModule) -> Result<MonoidCheck> {
    let h = coh::h2(a.group(), a.field());
    let left = omega_class_on_g(a, m, &h)?;
    let right = omega_class_on_g(a2, m2, &h)?;
    let w = associated(a, m)?;
    let w2 = associated(a2, m2)?;
    let p = module_product(&w, &w2)?;
    let product = omega_of_module(&p, &h)?;
    let holds = product == h.add(&left, &right);
    Ok(MonoidCheck { left, right, product, holds })
}

/// ω(α(A), M) = [α] + ω(A, M).
pub fn twist_equivariance(a: &GradedAlgebra, m: &UngradedModule, alpha: &Cocycle2) -> Result<bool> {
    let h = coh::h2(a.group(), a.field());
    let base = omega_class_on_g(a, m, &h)?;
    let twisted = omega_class_on_g(&twist_algebra(alpha, a)?, m, &h)?;
    Ok(twisted == h.add(&h.class_of(alpha)?, &base))
}

/// For every class θ, twisting by θ·ω⁻¹ attains θ. Returns (θ, attained).
pub fn omega_surjectivity(a: &GradedAlgebra, m: &UngradedModule) -> Result<Vec<(ClassCoords, ClassCoords)>> {
    let h = coh::h2(a.group(), a.field());
    let w = omega_class_on_g(a, m, &h)?;
    let mut out = Vec::new();
    for theta in h.all_classes() {
        let alpha = h.cocycle_for(&h.add(&theta, &h.neg(&w)))?;
        let got = omega_class_on_g(&twist_algebra(&alpha, a)?, m, &h)?;
        out.push((theta, got));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Hom-Tensor identities

fn require_strong(a: &GradedAlgebra) -> Result<()> {
    if !classify(a)?.is_strongly_graded {
        return Err(Error::NotStronglyGraded);
    }
    Ok(())
}

/// (W ⊗^G W′) induced up to A ⊗ A′ is isomorphic to W ⊗ W′ via c ⊗ w ↦ c·w.
/// Returns (dim of the induced module, dim W ⊗ W′, rank of the map).
pub fn induction_identity(w: &GradedModule, w2: &GradedModule) -> Result<(usize, usize, usize)> {
    require_strong(&w.algebra)?;
    require_strong(&w2.algebra)?;
    let f = w.field();
    let p = module_product(w, w2)?;
    let t = tensor_algebra(&w.algebra, &w2.algebra)?;
    let tm = tensor_module(w, w2)?;
    let db = w2.algebra.dim();
    let apairs = product_pairs(&w.algebra, &w2.algebra);
    let mpairs = module_pairs(w, w2);
    let (dt, dp) = (t.dim(), p.dim());
    let n = dt * dp;
    // Relations (x·p) ⊗ v − x ⊗ (p·v) for generators p of the graded product.
    let mut rel = Subspace::new(n);
    for &pg in p.algebra.generators() {
        let (i, i2) = apairs[pg];
        let tp = i * db + i2;
        for x in 0..dt {
            for v in 0..dp {
                let mut vec = vec![FqElem(0); n];
                for &(k, c) in t.basis_mul(x, tp) {
                    vec[k * dp + v] = f.add(vec[k * dp + v], c);
                }
                let pv = p.act[pg].col(v);
                for (r, &c) in pv.iter().enumerate() {
                    vec[x * dp + r] = f.sub(vec[x * dp + r], c);
                }
                rel.insert(f, &vec);
            }
        }
    }
    let induced_dim = n - rel.dim();
    // Ψ(x ⊗ v) = x·ι(v), ι(w_j ⊗^G w′_j′) = w_j ⊗ w′_j′.
    let m2 = w2.dim();
    let mut cols = Vec::with_capacity(n);
    for x in 0..dt {
        for &(j, j2) in &mpairs {
            cols.push(tm.act[x].col(j * m2 + j2));
        }
    }
    let psi = Mat::from_cols(&cols, tm.dim());
    for r in rel.basis() {
        if !psi.mul_vec(f, r).iter().all(|c| c.0 == 0) {
            return Err(Error::InvalidModule("balancing relation not killed".into()));
        }
    }
    Ok((induced_dim, tm.dim(), rank(f, &psi)))
}

/// End(W) ⊗^G End(W′) → End(W ⊗^G W′) by restricted Kronecker products.
/// Returns (source dim, target dim, rank, multiplicative).
pub fn end_tensor_identity(w: &GradedModule, w2: &GradedModule) -> Result<(usize, usize, usize, bool)> {
    require_strong(&w.algebra)?;
    require_strong(&w2.algebra)?;
    let f = w.field();
    let e1 = end_graded(w)?;
    let e2 = end_graded(w2)?;
    let p = module_product(w, w2)?;
    let ep = end_graded(&p)?;
    let src = graded_product(&e1.algebra, &e2.algebra)?;
    let spairs = product_pairs(&e1.algebra, &e2.algebra);
    let mpairs = module_pairs(w, w2);
    let m2 = w2.dim();
    let restrict = |x: &Mat| {
        let mut out = Mat::zeros(mpairs.len(), mpairs.len());
        for (r, &(a, a2)) in mpairs.iter().enumerate() {
            for (c, &(b, b2)) in mpairs.iter().enumerate() {
                out.set(r, c, x.get(a * m2 + a2, b * m2 + b2));
            }
        }
        out
    };
    let images: Vec<Mat> = spairs.iter().map(|&(s, t)| restrict(&e1.matrices[s].kron(f, &e2.matrices[t]))).collect();
    let target_space = Subspace::from_vectors(f, p.dim() * p.dim(), &ep.matrices.iter().map(|x| x.data.clone()).collect::<Vec<_>>());
    if images.iter().any(|x| !target_space.contains(f, &x.data)) {
        return Err(Error::InvalidModule("image is not an endomorphism".into()));
    }
    let r = gralg::span_dim(f, p.dim() * p.dim(), &images.iter().map(|x| x.data.clone()).collect::<Vec<_>>());
    // Product s·t in the source is φ_s∘φ_t, whose matrix is M_t M_s.
    let mut mult = true;
    for s in 0..src.dim() {
        for t in 0..src.dim() {
            let mut want = Mat::zeros(p.dim(), p.dim());
            for &(k, c) in src.basis_mul(s, t) {
                want.axpy(f, c, &images[k]);
            }
            mult &= images[t].mul(f, &images[s]) == want;
        }
    }
    Ok((src.dim(), ep.algebra.dim(), r, mult))
}

/// α(Φ) for a degree-g endomorphism: column j scaled by α(mdeg j, g).
pub fn twist_endomorphism(alpha: &Cocycle2, w: &GradedModule, phi: &Mat, g: usize) -> Mat {
    let f = w.field();
    let mut out = phi.clone();
    for c in 0..w.dim() {
        let s = alpha.get(w.mdeg[c], g);
        for r in 0..w.dim() {
            out.set(r, c, f.mul(s, phi.get(r, c)));
        }
    }
    out
}

/// End(α(W)) over α(A) against α(End(W)) under φ ↦ α(φ): returns
/// (every α(φ) intertwines α(W), structure constants agree, scalar law holds).
pub fn end_twist_coherence(alpha: &Cocycle2, w: &GradedModule) -> Result<(bool, bool, bool)> {
    let f = w.field();
    let e = end_graded(w)?;
    let tw = gralg::twist_module(alpha, w)?;
    let te = end_graded(&tw)?;
    let twisted_end = twist_algebra(alpha, &e.algebra)?;
    let mapped: Vec<Mat> = e.matrices.iter().enumerate().map(|(s, x)| twist_endomorphism(alpha, w, x, e.algebra.deg(s))).collect();
    let space = Subspace::from_vectors(f, w.dim() * w.dim(), &te.matrices.iter().map(|x| x.data.clone()).collect::<Vec<_>>());
    let intertwine = mapped.iter().all(|x| space.contains(f, &x.data)) && space.dim() == mapped.len();
    let mut sc_ok = true;
    let mut scalar_ok = true;
    for s in 0..mapped.len() {
        for t in 0..mapped.len() {
            let comp = mapped[t].mul(f, &mapped[s]);
            let mut want = Mat::zeros(w.dim(), w.dim());
            for &(k, c) in twisted_end.basis_mul(s, t) {
                want.axpy(f, c, &mapped[k]);
            }
            sc_ok &= comp == want;
            // α(φ_s)∘α(φ_t) = α(g,h)·α(φ_s∘φ_t)
            let (g, h) = (e.algebra.deg(s), e.algebra.deg(t));
            let inner = e.matrices[t].mul(f, &e.matrices[s]);
            let rhs = twist_endomorphism(alpha, w, &inner, w.group().mul(g, h)).scale(f, alpha.get(g, h));
            scalar_ok &= comp == rhs;
        }
    }
    Ok((intertwine, sc_ok, scalar_ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gralg::{elementary_matrix_algebra, group_algebra, quotient_grading};
    use crate::grp::{cyclic, quaternion8};

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    fn q8_instance() -> (GradedAlgebra, UngradedModule) {
        let f = f5();
        let (a, _) = quotient_grading(&group_algebra(&quaternion8(), &f), &[1]).unwrap();
        let base = a.base_algebra();
        let m = UngradedModule::new(&base, vec![Mat::identity(1), Mat::identity(1).scale(&f, f.neg(f.one()))]).unwrap();
        (a, m)
    }

    #[test]
    fn q8_obstruction_is_order_two() {
        let (a, m) = q8_instance();
        let obs = obstruction(&a, &m).unwrap();
        assert!(obs.invariant);
        assert_eq!(obs.inertia, vec![0, 1, 2, 3]);
        assert!(!obs.omega_class.is_zero());
        assert_eq!(obs.h2.class_order(&obs.omega_class), 2);
        assert!(extend(&a, &m).unwrap().is_refuted());
        let b = twist_algebra(&obs.omega.inverse(), &a).unwrap();
        assert!(extend(&b, &m).unwrap().is_extended());
    }

    #[test]
    fn theorem_a_table() {
        let (a, m) = q8_instance();
        let t = verify_theorem_a(&a, &m, None).unwrap();
        assert!(t.all_consistent());
        assert_eq!(t.rows.iter().filter(|r| r.extended).count(), 1);
    }

    #[test]
    fn elementary_wedderburn() {
        let z2 = cyclic(2).unwrap();
        let a = elementary_matrix_algebra(&f5(), &z2, &[0, 1]).unwrap();
        let r = wedderburn(&a).unwrap();
        assert_eq!(r.n, 2);
        assert_eq!(r.inertia, vec![0]);
        assert_eq!(r.kernel_dim, 0);
        assert!(r.surjective);
        assert!(r.certificate.is_some());
        assert!(r.decomposition().contains("n = 2, I = {e}"));
    }

    #[test]
    fn q8_wedderburn_has_kernel() {
        let (a, _) = q8_instance();
        let r = wedderburn(&a).unwrap();
        assert!(r.kernel_dim > 0);
        assert_eq!(r.graded_simple, Some(false));
    }

    #[test]
    fn q8_correspondence() {
        let (a, m) = q8_instance();
        let obs = obstruction(&a, &m).unwrap();
        let alpha = obs.omega.clone();
        let b = twist_algebra(&alpha.inverse(), &a).unwrap();
        let ExtendOutcome::Extended(x) = extend(&b, &m).unwrap() else { panic!("extends") };
        let r = correspondence(&a, &m, &alpha, &x.module, 3).unwrap();
        assert!(r.bijective);
        assert_eq!(r.source_dims, vec![2]);
        assert_eq!(r.target_dims, vec![2]);
    }

    #[test]
    fn hom_tensor_on_q8() {
        let (a, m) = q8_instance();
        let w = associated(&a, &m).unwrap();
        let (ind, tens, rk) = induction_identity(&w, &w).unwrap();
        assert_eq!((ind, tens), (rk, rk));
        let (s, t, r, mult) = end_tensor_identity(&w, &w).unwrap();
        assert!(s == t && t == r && mult);
    }
}
