//! Graded Hom and End by exact linear algebra, graded simplicity, inertia,
//! minimal graded ideals and simple-module splitting.
//!
//! Endomorphisms act on the right: a matrix Φ represents w ↦ (w)φ = Φw, and
//! the matrix of φ∘ψ (first φ, then ψ) is ΨΦ. A degree-h endomorphism maps
//! W_g into W_{gh}.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coh::Cocycle2;
use crate::error::{Error, Result};
use crate::ffield::{FieldSpec, FqElem};
use crate::gralg::{self, component_size, scan_component, GradedAlgebra, GradedModule, UngradedModule, SCAN_CAP};
use crate::grp::{FiniteGroup, GroupHom};
use crate::linalg::{
    self, charpoly, nullspace, poly_deg, poly_divrem, poly_eval_mat, poly_gcd, poly_powmod, poly_sub, spin, unit_vec,
    Coordinatizer, Mat, Subspace,
};

/// Basis of the matrices Φ (m2×m) supported on `allowed` positions with
/// Φ·L_s = L′_s·Φ for every s.
pub(crate) fn intertwiners(f: &FieldSpec, gens: &[Mat], gens2: &[Mat], m: usize, m2: usize, allowed: &dyn Fn(usize, usize) -> bool) -> Vec<Mat> {
    let positions: Vec<(usize, usize)> = (0..m2).flat_map(|r| (0..m).map(move |c| (r, c))).filter(|&(r, c)| allowed(r, c)).collect();
    let mut basis: Vec<Mat> = positions
        .iter()
        .map(|&(r, c)| {
            let mut x = Mat::zeros(m2, m);
            x.set(r, c, FqElem(1));
            x
        })
        .collect();
    for (l, l2) in gens.iter().zip(gens2) {
        if basis.is_empty() {
            break;
        }
        let cols: Vec<Vec<FqElem>> = basis.iter().map(|phi| phi.mul(f, l).sub(f, &l2.mul(f, phi)).data).collect();
        if cols.iter().all(|c| c.iter().all(|x| x.0 == 0)) {
            continue;
        }
        let sys = Mat::from_cols(&cols, m2 * m);
        let ns = nullspace(f, &sys);
        basis = ns
            .iter()
            .map(|coef| {
                let mut acc = Mat::zeros(m2, m);
                for (c, b) in coef.iter().zip(&basis) {
                    acc.axpy(f, *c, b);
                }
                acc
            })
            .collect();
    }
    basis
}

fn check_same_algebra(w: &GradedModule, w2: &GradedModule) -> Result<()> {
    if w.algebra != w2.algebra {
        return Err(Error::AlgebraMismatch);
    }
    Ok(())
}

fn gen_mats(a: &GradedAlgebra, act: &[Mat]) -> Vec<Mat> {
    a.generators().iter().map(|&i| act[i].clone()).collect()
}

/// Basis of Hom^{r(h)}_A(W, W′): maps W_g → W′_{gh} commuting with A.
pub fn hom_graded(w: &GradedModule, w2: &GradedModule, h: usize) -> Result<Vec<Mat>> {
    check_same_algebra(w, w2)?;
    let g = w.group();
    let allowed = |r: usize, c: usize| w2.mdeg[r] == g.mul(w.mdeg[c], h);
    Ok(intertwiners(w.field(), &gen_mats(&w.algebra, &w.act), &gen_mats(&w.algebra, &w2.act), w.dim(), w2.dim(), &allowed))
}

/// Basis of Hom_A(M, M′) for ungraded modules.
pub fn hom_ungraded(m: &UngradedModule, m2: &UngradedModule) -> Result<Vec<Mat>> {
    if m.algebra != m2.algebra {
        return Err(Error::AlgebraMismatch);
    }
    Ok(intertwiners(m.field(), &m.generator_matrices(), &m2.generator_matrices(), m.dim(), m2.dim(), &|_, _| true))
}

/// End^{r(G)}_A(W) with its chosen homogeneous basis.
#[derive(Clone, Debug)]
pub struct GradedEndAlgebra {
    pub module: GradedModule,
    pub algebra: GradedAlgebra,
    /// Matrix of each basis endomorphism (w ↦ Φw).
    pub matrices: Vec<Mat>,
}

impl GradedEndAlgebra {
    pub fn support(&self) -> Vec<usize> {
        self.algebra.support()
    }

    /// Matrix of an element given by coordinates.
    pub fn matrix_of(&self, v: &[FqElem]) -> Mat {
        let f = self.algebra.field();
        let m = self.module.dim();
        let mut acc = Mat::zeros(m, m);
        for (c, x) in v.iter().zip(&self.matrices) {
            acc.axpy(f, *c, x);
        }
        acc
    }
}

/// Build the algebra on a list of homogeneous endomorphisms closed under
/// composition, with product s·t = φ_s∘φ_t (matrix M_t M_s).
pub(crate) fn algebra_of_endomorphisms(f: &FieldSpec, group: &FiniteGroup, degs: &[usize], mats: &[Mat]) -> Result<GradedAlgebra> {
    let k = mats.len();
    let m = mats.first().map_or(0, |x| x.rows);
    let mut coord = std::collections::BTreeMap::new();
    for h in group.elements() {
        let idx: Vec<usize> = (0..k).filter(|&s| degs[s] == h).collect();
        if idx.is_empty() {
            continue;
        }
        let vecs: Vec<Vec<FqElem>> = idx.iter().map(|&s| mats[s].data.clone()).collect();
        coord.insert(h, (idx, Coordinatizer::new(f, &vecs)));
    }
    let mut sc = Vec::with_capacity(k * k);
    for s in 0..k {
        for t in 0..k {
            let prod = mats[t].mul(f, &mats[s]);
            let h = group.mul(degs[s], degs[t]);
            let mut entry = Vec::new();
            if let Some((idx, c)) = coord.get(&h) {
                for (p, x) in idx.iter().zip(c.coords(f, &prod.data)) {
                    if x.0 != 0 {
                        entry.push((*p, x));
                    }
                }
            } else if !prod.is_zero() {
                return Err(Error::InvalidAlgebra("endomorphisms are not closed under composition".into()));
            }
            sc.push(entry);
        }
    }
    let e = group.identity();
    let mut unit = vec![FqElem(0); k];
    if let Some((idx, c)) = coord.get(&e) {
        for (p, x) in idx.iter().zip(c.coords(f, &Mat::identity(m).data)) {
            unit[*p] = x;
        }
    }
    GradedAlgebra::build(f, group, degs.to_vec(), sc, unit)
}

pub fn end_graded(w: &GradedModule) -> Result<GradedEndAlgebra> {
    if w.dim() == 0 {
        return Err(Error::ZeroModule);
    }
    let g = w.group();
    let mut mats = Vec::new();
    let mut degs = Vec::new();
    for h in g.elements() {
        for x in hom_graded(w, w, h)? {
            mats.push(x);
            degs.push(h);
        }
    }
    let algebra = algebra_of_endomorphisms(w.field(), g, &degs, &mats)?;
    Ok(GradedEndAlgebra { module: w.clone(), algebra, matrices: mats })
}

/// The representation A → End^{l}(W) and its kernel.
#[derive(Clone, Debug)]
pub struct LeftRep {
    pub matrices: Vec<Mat>,
    /// Basis of the kernel as coefficient vectors over A.
    pub kernel: Vec<Vec<FqElem>>,
}

pub fn left_rep(w: &GradedModule) -> LeftRep {
    let m = w.dim();
    let cols: Vec<Vec<FqElem>> = w.act.iter().map(|x| x.data.clone()).collect();
    let kernel = if m == 0 {
        (0..w.algebra.dim()).map(|i| unit_vec(w.algebra.dim(), i)).collect()
    } else {
        nullspace(w.field(), &Mat::from_cols(&cols, m * m))
    };
    LeftRep { matrices: w.act.clone(), kernel }
}

fn graded_spin(w: &GradedModule, seed: &[FqElem]) -> Subspace {
    spin(w.field(), w.dim(), &[seed.to_vec()], &gen_mats(&w.algebra, &w.act))
}

fn projective_scan<F: FnMut(&[FqElem]) -> bool>(f: &FieldSpec, dim: usize, idx: &[usize], mut visit: F) -> Option<Vec<FqElem>> {
    // Only vectors whose first nonzero coordinate is 1.
    scan_component(f, dim, idx, |v| {
        let first = idx.iter().map(|&i| v[i]).find(|c| c.0 != 0);
        first == Some(FqElem(1)) && visit(v)
    })
}

/// None when W is graded simple, otherwise a proper nonzero graded submodule.
pub fn graded_simple_witness(w: &GradedModule) -> Result<Option<Subspace>> {
    if w.dim() == 0 {
        return Err(Error::ZeroModule);
    }
    let f = w.field();
    let m = w.dim();
    let proper = |s: &Subspace| s.dim() < m;
    for j in 0..m {
        let s = graded_spin(w, &unit_vec(m, j));
        if proper(&s) {
            return Ok(Some(s));
        }
    }
    let support = w.support();
    let under_cap = support.iter().all(|&g| component_size(f, w.component(g).len()) <= SCAN_CAP);
    if under_cap {
        for &g in &support {
            let idx = w.component(g);
            let mut found = None;
            projective_scan(f, m, &idx, |v| {
                let s = graded_spin(w, v);
                if proper(&s) {
                    found = Some(s);
                    true
                } else {
                    false
                }
            });
            if found.is_some() {
                return Ok(found);
            }
        }
        return Ok(None);
    }
    // Above the cap: W is graded simple iff each W_g is a simple A_e-module
    // generating W. The split search below is exact when it terminates.
    let base = w.algebra.base_indices();
    let base_alg = w.algebra.base_algebra();
    for &g in &support {
        let idx = w.component(g);
        let basis: Vec<Vec<FqElem>> = idx.iter().map(|&j| unit_vec(m, j)).collect();
        let comp = UngradedModule { algebra: base_alg.clone(), act: base.iter().map(|&i| restrict_square(&w.act[i], &idx)).collect() };
        match split(&comp, 0)? {
            Some(sub) => {
                let seeds: Vec<Vec<FqElem>> = sub
                    .basis()
                    .iter()
                    .map(|v| {
                        let mut out = vec![FqElem(0); m];
                        for (k, &c) in v.iter().enumerate() {
                            linalg::axpy(f, &mut out, c, &basis[k]);
                        }
                        out
                    })
                    .collect();
                return Ok(Some(spin(f, m, &seeds, &gen_mats(&w.algebra, &w.act))));
            }
            None => {
                let s = spin(f, m, &basis, &gen_mats(&w.algebra, &w.act));
                if proper(&s) {
                    return Ok(Some(s));
                }
            }
        }
    }
    Ok(None)
}

fn restrict_square(x: &Mat, idx: &[usize]) -> Mat {
    let k = idx.len();
    let mut out = Mat::zeros(k, k);
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            out.set(r, c, x.get(i, j));
        }
    }
    out
}

pub fn is_graded_simple(w: &GradedModule) -> Result<bool> {
    Ok(graded_simple_witness(w)?.is_none())
}

/// Graded simple with End^{r(e)} = F.
pub fn is_abs_graded_simple(w: &GradedModule) -> Result<bool> {
    if !is_graded_simple(w)? {
        return Err(Error::NotGradedSimple);
    }
    Ok(hom_graded(w, w, w.group().identity())?.len() == 1)
}

/// A twisted group algebra structure read off a graded endomorphism algebra.
#[derive(Clone, Debug)]
pub struct TwistedExtraction {
    /// Support as a sorted list of elements of G.
    pub support: Vec<usize>,
    pub subgroup: FiniteGroup,
    pub embedding: GroupHom,
    /// Normalized cocycle on the support subgroup.
    pub cocycle: Cocycle2,
    /// Basis matrices v_x (indexed like `support`) with v_e = Id and
    /// v_x∘v_y = cocycle(x, y)·v_{xy}.
    pub basis: Vec<Mat>,
}

pub fn extract_twisted_cocycle(e: &GradedEndAlgebra) -> Result<TwistedExtraction> {
    let a = &e.algebra;
    let f = a.field();
    let g = a.group();
    let support = a.support();
    let mut pick = vec![usize::MAX; g.order()];
    for &h in &support {
        let comp = a.component(h);
        if comp.len() != 1 {
            return Err(Error::ComponentNotLine(h, comp.len()));
        }
        if !linalg::is_invertible(f, &e.matrices[comp[0]]) {
            return Err(Error::NotInvertible(h));
        }
        pick[h] = comp[0];
    }
    if !g.is_subgroup(&support) {
        return Err(Error::SupportNotSubgroup);
    }
    let (sub, emb) = g.subgroup_on(&support);
    let n = sub.order();
    let table: Vec<Vec<FqElem>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let (gx, gy) = (emb.apply(x), emb.apply(y));
                    let prod = a.basis_mul(pick[gx], pick[gy]);
                    debug_assert_eq!(prod.len(), 1);
                    prod[0].1
                })
                .collect()
        })
        .collect();
    let (cocycle, lambda) = Cocycle2::from_table(&sub, f, &table)?;
    let basis = (0..n).map(|x| e.matrices[pick[emb.apply(x)]].scale(f, lambda[x])).collect();
    Ok(TwistedExtraction { support, subgroup: sub, embedding: emb, cocycle, basis })
}

/// One unit per component, or the first component without one.
pub fn detect_crossed_product(a: &GradedAlgebra) -> Result<Vec<Vec<FqElem>>> {
    let mut out = Vec::new();
    for g in a.group().elements() {
        match gralg::find_unit(a, g)? {
            Some(u) => out.push(u),
            None => return Err(Error::NoUnitInComponent(g)),
        }
    }
    Ok(out)
}

/// Inertia of a graded simple module: the support of its graded End.
pub fn inertia(w: &GradedModule) -> Result<Vec<usize>> {
    if !is_graded_simple(w)? {
        return Err(Error::NotGradedSimple);
    }
    let e = end_graded(w)?;
    let s = e.support();
    if !w.group().is_subgroup(&s) {
        return Err(Error::SupportNotSubgroup);
    }
    Ok(s)
}

/// Some invertible matrix in the span of `basis`, by lexicographic scan of
/// coefficient vectors under the cap.
pub(crate) fn find_invertible_combination(f: &FieldSpec, basis: &[Mat]) -> Result<Option<Mat>> {
    let k = basis.len();
    if k == 0 || basis[0].rows != basis[0].cols {
        return Ok(None);
    }
    let combine = |v: &[FqElem]| {
        let mut acc = Mat::zeros(basis[0].rows, basis[0].cols);
        for (c, b) in v.iter().zip(basis) {
            acc.axpy(f, *c, b);
        }
        acc
    };
    if let Some(b) = basis.iter().find(|b| linalg::is_invertible(f, b)) {
        return Ok(Some(b.clone()));
    }
    let idx: Vec<usize> = (0..k).collect();
    if component_size(f, k) <= SCAN_CAP {
        return Ok(scan_component(f, k, &idx, |v| linalg::is_invertible(f, &combine(v))).map(|v| combine(&v)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
    for _ in 0..256 {
        let v: Vec<FqElem> = (0..k).map(|_| FqElem(rng.gen_range(0..f.q()))).collect();
        let x = combine(&v);
        if linalg::is_invertible(f, &x) {
            return Ok(Some(x));
        }
    }
    Err(Error::CapExceededUndetermined)
}

/// {g : W ≅ g(W)} decided directly by searching invertible degree-e maps
/// g(W) → W.
pub fn inertia_bruteforce(w: &GradedModule) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for g in w.group().elements() {
        let s = gralg::suspend(w, g);
        let homs = hom_graded(&s, w, w.group().identity())?;
        if find_invertible_combination(w.field(), &homs)?.is_some() {
            out.push(g);
        }
    }
    Ok(out)
}

/// A minimal graded left ideal, as a module together with its basis inside A.
pub fn minimal_graded_ideal(a: &GradedAlgebra) -> Result<(GradedModule, Vec<Vec<FqElem>>)> {
    let f = a.field();
    let mut w = GradedModule::regular(a);
    let mut embed: Vec<Vec<FqElem>> = (0..a.dim()).map(|i| unit_vec(a.dim(), i)).collect();
    while let Some(sub) = graded_simple_witness(&w)? {
        let basis = sub.basis().to_vec();
        let degrees: Vec<usize> = basis.iter().map(|v| w.mdeg[v.iter().position(|c| c.0 != 0).unwrap()]).collect();
        embed = basis
            .iter()
            .map(|v| {
                let mut out = vec![FqElem(0); a.dim()];
                for (k, &c) in v.iter().enumerate() {
                    linalg::axpy(f, &mut out, c, &embed[k]);
                }
                out
            })
            .collect();
        w = w.submodule(&basis, &degrees);
    }
    Ok((w, embed))
}

// ---------------------------------------------------------------------------
// Ungraded simple modules (seeded MeatAxe)

const SPLIT_BUDGET: usize = 64;

/// Split a squarefree product of degree-d irreducibles into its factors
/// (Cantor–Zassenhaus, seeded).
fn equal_degree_split(f: &FieldSpec, p: &[FqElem], d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Vec<FqElem>>) {
    let n = poly_deg(p).unwrap_or(0);
    if n == d {
        out.push(p.to_vec());
        return;
    }
    let q = f.q() as u64;
    loop {
        let a: Vec<FqElem> = linalg::poly_trim((0..n).map(|_| FqElem(rng.gen_range(0..f.q()))).collect());
        if poly_deg(&a).unwrap_or(0) == 0 {
            continue;
        }
        let b = if q % 2 == 1 {
            // a^((q^d − 1)/2) − 1, computed as (Π_i a^(q^i))^((q − 1)/2).
            let mut norm = vec![FqElem(1)];
            let mut cur = poly_divrem(f, &a, p).1;
            for _ in 0..d {
                norm = poly_divrem(f, &linalg::poly_mul(f, &norm, &cur), p).1;
                cur = poly_powmod(f, &cur, q, p);
            }
            poly_sub(f, &poly_powmod(f, &norm, (q - 1) / 2, p), &[FqElem(1)])
        } else {
            // Absolute trace a + a² + … + a^(2^(kd−1)).
            let bits = f.k() as usize * d;
            let mut acc = vec![];
            let mut cur = poly_divrem(f, &a, p).1;
            for _ in 0..bits {
                acc = linalg::poly_trim(poly_sub(f, &acc, &cur.iter().map(|&c| f.neg(c)).collect::<Vec<_>>()));
                cur = poly_powmod(f, &cur, 2, p);
            }
            acc
        };
        let g = poly_gcd(f, p, &b);
        let dg = poly_deg(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            equal_degree_split(f, &g, d, rng, out);
            equal_degree_split(f, &poly_divrem(f, p, &g).0, d, rng, out);
            return;
        }
    }
}

/// Distinct monic irreducible factors of `c`, by increasing degree.
fn irreducible_factors(f: &FieldSpec, c: &[FqElem], rng: &mut ChaCha8Rng) -> Vec<Vec<FqElem>> {
    let q = f.q() as u64;
    let Some(n) = poly_deg(c) else { return vec![] };
    let t = vec![FqElem(0), FqElem(1)];
    let mut found: Vec<(usize, Vec<FqElem>)> = Vec::new();
    let mut out = Vec::new();
    let mut frob = t.clone();
    for d in 1..=n {
        frob = poly_powmod(f, &frob, q, c);
        let mut pd = poly_gcd(f, c, &poly_sub(f, &frob, &t));
        for (dd, p) in &found {
            if d % dd == 0 {
                pd = poly_divrem(f, &pd, p).0;
            }
        }
        if poly_deg(&pd).unwrap_or(0) > 0 {
            equal_degree_split(f, &pd, d, rng, &mut out);
            found.push((d, pd));
        }
    }
    out
}

/// A proper nonzero submodule of M, or None when M is simple. Exact when it
/// returns; fails with SplitBudgetExceeded if no decisive element is found.
pub fn split(m: &UngradedModule, seed: u64) -> Result<Option<Subspace>> {
    let f = m.field();
    let n = m.dim();
    if n == 0 {
        return Err(Error::ZeroModule);
    }
    if n == 1 {
        return Ok(None);
    }
    let gens = m.generator_matrices();
    let gens_t: Vec<Mat> = gens.iter().map(|x| x.transpose()).collect();
    let d = m.algebra.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..SPLIT_BUDGET {
        let coef: Vec<FqElem> = if attempt < d.min(4) {
            // Cheap first tries: basis elements.
            unit_vec(d, (attempt * 7919) % d)
        } else {
            (0..d).map(|_| FqElem(rng.gen_range(0..f.q()))).collect()
        };
        let x = m.act_elem(&coef);
        let c = charpoly(f, &x);
        for p in irreducible_factors(f, &c, &mut rng) {
            let theta = poly_eval_mat(f, &p, &x);
            let ker = nullspace(f, &theta);
            if ker.is_empty() {
                continue;
            }
            let s = spin(f, n, &[ker[0].clone()], &gens);
            if s.dim() < n {
                return Ok(Some(s));
            }
            if ker.len() != poly_deg(&p).unwrap() {
                continue;
            }
            let ker_t = nullspace(f, &theta.transpose());
            let st = spin(f, n, &[ker_t[0].clone()], &gens_t);
            if st.dim() < n {
                // The annihilator of a proper submodule of the dual.
                let ann = nullspace(f, &Mat::from_rows(st.basis(), n));
                return Ok(Some(Subspace::from_vectors(f, n, &ann)));
            }
            return Ok(None);
        }
    }
    Err(Error::SplitBudgetExceeded)
}

pub fn is_simple(m: &UngradedModule, seed: u64) -> Result<bool> {
    Ok(split(m, seed)?.is_none())
}

fn composition_factors(m: &UngradedModule, seed: u64, out: &mut Vec<UngradedModule>) -> Result<()> {
    match split(m, seed)? {
        None => out.push(m.clone()),
        Some(sub) => {
            let s = m.submodule(sub.basis());
            let q = m.quotient(&sub);
            composition_factors(&s, seed.wrapping_add(1), out)?;
            composition_factors(&q, seed.wrapping_add(2), out)?;
        }
    }
    Ok(())
}

/// Isomorphism of simple modules: a nonzero intertwiner exists.
pub fn simple_isomorphic(a: &UngradedModule, b: &UngradedModule) -> Result<bool> {
    Ok(a.dim() == b.dim() && !hom_ungraded(a, b)?.is_empty())
}

/// Simple modules of a semisimple algebra (grading ignored), one per
/// isomorphism class, with their multiplicity in the regular module.
pub fn simple_modules(a: &GradedAlgebra, seed: u64) -> Result<Vec<(UngradedModule, usize)>> {
    let reg = UngradedModule::regular(&a.ungraded());
    let mut factors = Vec::new();
    composition_factors(&reg, seed, &mut factors)?;
    let mut classes: Vec<(UngradedModule, usize)> = Vec::new();
    for s in factors {
        let mut hit = false;
        for (rep, mult) in classes.iter_mut() {
            if simple_isomorphic(rep, &s)? {
                *mult += 1;
                hit = true;
                break;
            }
        }
        if !hit {
            classes.push((s, 1));
        }
    }
    // Semisimple iff dim A = Σ dim(S)² / dim End(S).
    let mut total = 0;
    for (s, mult) in &classes {
        let e = hom_ungraded(s, s)?.len();
        total += s.dim() * s.dim() / e;
        if *mult * e != s.dim() {
            return Err(Error::NotSemisimple);
        }
    }
    if total != a.dim() {
        return Err(Error::NotSemisimple);
    }
    classes.sort_by_key(|(s, _)| s.dim());
    Ok(classes)
}
