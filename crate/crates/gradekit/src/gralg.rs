//! Graded algebras and modules as degree-tagged structure constants.
//!
//! Basis elements are always homogeneous. Module actions are stored as one
//! dense matrix per algebra basis element, acting on column vectors.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coh::Cocycle2;
use crate::error::{Error, Result};
use crate::ffield::{FieldSpec, FqElem};
use crate::grp::{self, FiniteGroup, GroupHom};
use crate::linalg::{self, rank, spin, unit_vec, Mat, Subspace};

pub const DIM_CAP: usize = 256;
/// Exhaustive scans of a component are allowed while q^dim stays below this.
pub const SCAN_CAP: u64 = 1 << 20;
const RANDOM_TRIES: usize = 256;

/// Sparse product e_i·e_j as (k, coefficient) pairs sorted by k.
pub type SparseVec = Vec<(usize, FqElem)>;

struct AlgData {
    field: FieldSpec,
    group: FiniteGroup,
    deg: Vec<usize>,
    sc: Vec<SparseVec>,
    unit: Vec<FqElem>,
    gens: OnceLock<Vec<usize>>,
}

/// A G-graded associative unital algebra over a finite field.
#[derive(Clone)]
pub struct GradedAlgebra(Arc<AlgData>);

impl PartialEq for GradedAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field
                && self.0.group == other.0.group
                && self.0.deg == other.0.deg
                && self.0.sc == other.0.sc
                && self.0.unit == other.0.unit)
    }
}
impl Eq for GradedAlgebra {}

impl fmt::Debug for GradedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedAlgebra(dim {}, {}, |G| = {})", self.dim(), self.field().name(), self.group().order())
    }
}

fn normalize_sparse(f: &FieldSpec, mut v: SparseVec) -> SparseVec {
    v.sort_by_key(|&(k, _)| k);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (k, c) in v {
        match out.last_mut() {
            Some((lk, lc)) if *lk == k => *lc = f.add(*lc, c),
            _ => out.push((k, c)),
        }
    }
    out.retain(|&(_, c)| c.0 != 0);
    out
}

impl GradedAlgebra {
    /// Validated constructor: grading, unit and associativity are checked on
    /// every basis tuple.
    pub fn new(field: &FieldSpec, group: &FiniteGroup, deg: Vec<usize>, sc: Vec<SparseVec>, unit: Vec<FqElem>) -> Result<Self> {
        let a = Self::build(field, group, deg, sc, unit)?;
        a.validate()?;
        Ok(a)
    }

    /// Shape-checked constructor for algebras that are valid by construction.
    pub(crate) fn build(field: &FieldSpec, group: &FiniteGroup, deg: Vec<usize>, sc: Vec<SparseVec>, unit: Vec<FqElem>) -> Result<Self> {
        let d = deg.len();
        if d > DIM_CAP {
            return Err(Error::DimensionTooLarge(d));
        }
        if d == 0 {
            return Err(Error::InvalidAlgebra("zero-dimensional algebra".into()));
        }
        if sc.len() != d * d || unit.len() != d {
            return Err(Error::InvalidAlgebra("structure constant shape".into()));
        }
        if let Some(&g) = deg.iter().find(|&&g| g >= group.order()) {
            return Err(Error::BadElement(g));
        }
        if unit.iter().any(|&c| !field.contains(c)) {
            return Err(Error::FieldMismatch);
        }
        let mut clean = Vec::with_capacity(sc.len());
        for v in sc {
            if v.iter().any(|&(k, c)| k >= d || !field.contains(c)) {
                return Err(Error::InvalidAlgebra("structure constant out of range".into()));
            }
            clean.push(normalize_sparse(field, v));
        }
        Ok(GradedAlgebra(Arc::new(AlgData {
            field: field.clone(),
            group: group.clone(),
            deg,
            sc: clean,
            unit,
            gens: OnceLock::new(),
        })))
    }

    /// Exhaustive check of grading, unit and associativity.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        let f = self.field();
        let g = self.group();
        let e = g.identity();
        for i in 0..d {
            for j in 0..d {
                let want = g.mul(self.deg(i), self.deg(j));
                if let Some(&(k, _)) = self.basis_mul(i, j).iter().find(|&&(k, _)| self.deg(k) != want) {
                    return Err(Error::InvalidAlgebra(format!("e{i}·e{j} has a term e{k} of the wrong degree")));
                }
            }
        }
        if self.unit().iter().enumerate().any(|(i, c)| c.0 != 0 && self.deg(i) != e) {
            return Err(Error::InvalidAlgebra("unit is not in the identity component".into()));
        }
        for i in 0..d {
            let ei = unit_vec(d, i);
            if self.mul(self.unit(), &ei) != ei || self.mul(&ei, self.unit()) != ei {
                return Err(Error::InvalidAlgebra(format!("unit fails on e{i}")));
            }
        }
        for i in 0..d {
            for j in 0..d {
                let ij = self.basis_mul(i, j);
                for k in 0..d {
                    let mut lhs = vec![FqElem(0); d];
                    for &(l, c) in ij {
                        for &(m, c2) in self.basis_mul(l, k) {
                            lhs[m] = f.add(lhs[m], f.mul(c, c2));
                        }
                    }
                    let mut rhs = vec![FqElem(0); d];
                    for &(l, c) in self.basis_mul(j, k) {
                        for &(m, c2) in self.basis_mul(i, l) {
                            rhs[m] = f.add(rhs[m], f.mul(c, c2));
                        }
                    }
                    if lhs != rhs {
                        return Err(Error::InvalidAlgebra(format!("not associative at (e{i}, e{j}, e{k})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.0.field
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.0.group
    }

    pub fn dim(&self) -> usize {
        self.0.deg.len()
    }

    #[inline]
    pub fn deg(&self, i: usize) -> usize {
        self.0.deg[i]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.0.deg
    }

    #[inline]
    pub fn basis_mul(&self, i: usize, j: usize) -> &[(usize, FqElem)] {
        &self.0.sc[i * self.dim() + j]
    }

    pub fn structure_constants(&self) -> &[SparseVec] {
        &self.0.sc
    }

    pub fn unit(&self) -> &[FqElem] {
        &self.0.unit
    }

    /// Basis indices of degree g, ascending.
    pub fn component(&self, g: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.deg(i) == g).collect()
    }

    pub fn base_indices(&self) -> Vec<usize> {
        self.component(self.group().identity())
    }

    pub fn support(&self) -> Vec<usize> {
        self.group().elements().filter(|&g| self.0.deg.contains(&g)).collect()
    }

    pub fn mul(&self, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
        let f = self.field();
        let d = self.dim();
        let mut out = vec![FqElem(0); d];
        for (i, &x) in a.iter().enumerate() {
            if x.0 == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y.0 == 0 {
                    continue;
                }
                let xy = f.mul(x, y);
                for &(k, c) in self.basis_mul(i, j) {
                    out[k] = f.add(out[k], f.mul(xy, c));
                }
            }
        }
        out
    }

    /// Matrix of v ↦ a·v on the regular representation.
    pub fn left_matrix(&self, a: &[FqElem]) -> Mat {
        let d = self.dim();
        let cols: Vec<Vec<FqElem>> = (0..d).map(|j| self.mul(a, &unit_vec(d, j))).collect();
        Mat::from_cols(&cols, d)
    }

    /// Matrix of v ↦ v·a.
    pub fn right_matrix(&self, a: &[FqElem]) -> Mat {
        let d = self.dim();
        let cols: Vec<Vec<FqElem>> = (0..d).map(|j| self.mul(&unit_vec(d, j), a)).collect();
        Mat::from_cols(&cols, d)
    }

    pub fn is_unit_element(&self, a: &[FqElem]) -> bool {
        linalg::is_invertible(self.field(), &self.left_matrix(a))
    }

    /// Two-sided inverse of a unit.
    pub fn inverse_of(&self, a: &[FqElem]) -> Option<Vec<FqElem>> {
        let f = self.field();
        linalg::solve(f, &self.left_matrix(a), self.unit())
    }

    /// A set of basis indices generating the algebra, chosen greedily in
    /// index order.
    pub fn generators(&self) -> &[usize] {
        self.0.gens.get_or_init(|| {
            let f = self.field();
            let d = self.dim();
            let mut gens = Vec::new();
            let mut mats: Vec<Mat> = Vec::new();
            let mut span = spin(f, d, &[self.unit().to_vec()], &mats);
            for i in 0..d {
                if span.is_full() {
                    break;
                }
                if !span.contains(f, &unit_vec(d, i)) {
                    gens.push(i);
                    mats.push(self.left_matrix(&unit_vec(d, i)));
                    span = spin(f, d, &[self.unit().to_vec()], &mats);
                }
            }
            gens
        })
    }

    /// A_e as an algebra over the trivial group; its basis is `base_indices`.
    pub fn base_algebra(&self) -> GradedAlgebra {
        let idx = self.base_indices();
        let mut pos = vec![usize::MAX; self.dim()];
        for (p, &i) in idx.iter().enumerate() {
            pos[i] = p;
        }
        let b = idx.len();
        let mut sc = Vec::with_capacity(b * b);
        for &i in &idx {
            for &j in &idx {
                sc.push(self.basis_mul(i, j).iter().map(|&(k, c)| (pos[k], c)).collect());
            }
        }
        let unit = idx.iter().map(|&i| self.unit()[i]).collect();
        GradedAlgebra::build(self.field(), &grp::trivial(), vec![0; b], sc, unit).expect("base algebra shape")
    }

    /// Forget the grading: same algebra over the trivial group.
    pub fn ungraded(&self) -> GradedAlgebra {
        GradedAlgebra::build(self.field(), &grp::trivial(), vec![0; self.dim()], self.0.sc.clone(), self.unit().to_vec())
            .expect("same shape")
    }

    /// Span of all products A_g·A_h as a subspace of A.
    pub fn product_span(&self, g: usize, h: usize) -> Subspace {
        let f = self.field();
        let mut s = Subspace::new(self.dim());
        for i in self.component(g) {
            for j in self.component(h) {
                let mut v = vec![FqElem(0); self.dim()];
                for &(k, c) in self.basis_mul(i, j) {
                    v[k] = c;
                }
                s.insert(f, &v);
            }
        }
        s
    }

    /// A_{g⁻¹}A_g = A_e.
    pub fn is_strong_component(&self, g: usize) -> bool {
        let gi = self.group().inv(g);
        self.product_span(gi, g).dim() == self.base_indices().len()
    }

    pub fn is_homogeneous_of(&self, v: &[FqElem], g: usize) -> bool {
        v.iter().enumerate().all(|(i, c)| c.0 == 0 || self.deg(i) == g)
    }
}

/// Enumerate the nonzero vectors supported on `idx` in lexicographic order of
/// their coefficients on `idx`, calling `visit` until it returns true.
pub(crate) fn scan_component<F: FnMut(&[FqElem]) -> bool>(f: &FieldSpec, dim: usize, idx: &[usize], mut visit: F) -> Option<Vec<FqElem>> {
    let q = f.q() as u64;
    let k = idx.len();
    let mut digits = vec![0u32; k];
    let mut v = vec![FqElem(0); dim];
    loop {
        // Increment from the last coordinate so that the first coordinate is
        // the most significant.
        let mut pos = k;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] as u64 == q {
                digits[pos] = 0;
                v[idx[pos]] = FqElem(0);
            } else {
                v[idx[pos]] = FqElem(digits[pos]);
                break;
            }
        }
        if visit(&v) {
            return Some(v);
        }
    }
}

/// Size of a component as a set, saturating.
pub(crate) fn component_size(f: &FieldSpec, k: usize) -> u64 {
    (f.q() as u64).checked_pow(k as u32).unwrap_or(u64::MAX)
}

/// Find a unit in the component A_g: lexicographic scan under the cap,
/// seeded random search above it.
pub fn find_unit(a: &GradedAlgebra, g: usize) -> Result<Option<Vec<FqElem>>> {
    let idx = a.component(g);
    if idx.is_empty() {
        return Ok(None);
    }
    let f = a.field();
    if component_size(f, idx.len()) <= SCAN_CAP {
        return Ok(scan_component(f, a.dim(), &idx, |v| a.is_unit_element(v)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(g as u64);
    for _ in 0..RANDOM_TRIES {
        let mut v = vec![FqElem(0); a.dim()];
        for &i in &idx {
            v[i] = FqElem(rng.gen_range(0..f.q()));
        }
        if a.is_unit_element(&v) {
            return Ok(Some(v));
        }
    }
    Err(Error::Undetermined)
}

/// Structural summary of a graded algebra.
#[derive(Clone, Debug)]
pub struct Classification {
    pub support: Vec<usize>,
    pub strong: Vec<usize>,
    pub invertible: Vec<usize>,
    pub is_strongly_graded: bool,
    pub is_crossed_product: bool,
    pub is_twisted_group_algebra: bool,
    pub is_graded_division: bool,
    /// One unit per invertible component.
    pub units: Vec<(usize, Vec<FqElem>)>,
    /// For each strong component g, pairs (x_i, y_i) with x_i ∈ A_{g⁻¹},
    /// y_i ∈ A_g and Σ x_i y_i = 1.
    pub unit_decompositions: Vec<(usize, Vec<(Vec<FqElem>, Vec<FqElem>)>)>,
}

fn unit_decomposition(a: &GradedAlgebra, g: usize) -> Option<Vec<(Vec<FqElem>, Vec<FqElem>)>> {
    let f = a.field();
    let d = a.dim();
    let gi = a.group().inv(g);
    let mut pairs = Vec::new();
    let mut cols = Vec::new();
    for x in a.component(gi) {
        for y in a.component(g) {
            let mut v = vec![FqElem(0); d];
            for &(k, c) in a.basis_mul(x, y) {
                v[k] = c;
            }
            pairs.push((x, y));
            cols.push(v);
        }
    }
    if cols.is_empty() {
        return None;
    }
    let sol = linalg::solve(f, &Mat::from_cols(&cols, d), a.unit())?;
    Some(
        pairs
            .iter()
            .zip(sol)
            .filter(|(_, c)| c.0 != 0)
            .map(|(&(x, y), c)| {
                let mut xv = vec![FqElem(0); d];
                xv[x] = c;
                (xv, unit_vec(d, y))
            })
            .collect(),
    )
}

pub fn classify(a: &GradedAlgebra) -> Result<Classification> {
    let g = a.group();
    let support = a.support();
    let strong: Vec<usize> = g.elements().filter(|&x| a.is_strong_component(x)).collect();
    let mut units = Vec::new();
    for &x in &support {
        if let Some(u) = find_unit(a, x)? {
            units.push((x, u));
        }
    }
    let invertible: Vec<usize> = units.iter().map(|(x, _)| *x).collect();
    let is_strongly_graded = strong.len() == g.order();
    let is_crossed_product = invertible.len() == g.order();
    let is_twisted_group_algebra = is_crossed_product && g.elements().all(|x| a.component(x).len() == 1);
    let mut is_graded_division = invertible.len() == support.len();
    if is_graded_division {
        let f = a.field();
        for &x in &support {
            let idx = a.component(x);
            if idx.len() == 1 {
                continue;
            }
            if component_size(f, idx.len()) > SCAN_CAP {
                return Err(Error::Undetermined);
            }
            if scan_component(f, a.dim(), &idx, |v| !a.is_unit_element(v)).is_some() {
                is_graded_division = false;
                break;
            }
        }
    }
    let unit_decompositions = strong.iter().filter_map(|&x| unit_decomposition(a, x).map(|w| (x, w))).collect();
    Ok(Classification {
        support,
        strong,
        invertible,
        is_strongly_graded,
        is_crossed_product,
        is_twisted_group_algebra,
        is_graded_division,
        units,
        unit_decompositions,
    })
}

// ---------------------------------------------------------------------------
// Constructors

pub fn twisted_group_algebra(alpha: &Cocycle2) -> GradedAlgebra {
    let g = alpha.group();
    let n = g.order();
    let mut sc = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            sc.push(vec![(g.mul(x, y), alpha.get(x, y))]);
        }
    }
    let unit = unit_vec(n, g.identity());
    GradedAlgebra::build(alpha.field(), g, (0..n).collect(), sc, unit).expect("twisted group algebra shape")
}

pub fn group_algebra(g: &FiniteGroup, f: &FieldSpec) -> GradedAlgebra {
    twisted_group_algebra(&Cocycle2::trivial(g, f))
}

/// Full matrix algebra M_n(F) with E_ij in degree g_i g_j⁻¹; E_ij has index i·n + j.
pub fn elementary_matrix_algebra(f: &FieldSpec, g: &FiniteGroup, degrees: &[usize]) -> Result<GradedAlgebra> {
    let n = degrees.len();
    if n == 0 {
        return Err(Error::InvalidAlgebra("empty degree tuple".into()));
    }
    if n * n > DIM_CAP {
        return Err(Error::DimensionTooLarge(n * n));
    }
    if let Some(&x) = degrees.iter().find(|&&x| x >= g.order()) {
        return Err(Error::BadElement(x));
    }
    let d = n * n;
    let deg = (0..d).map(|ix| g.mul(degrees[ix / n], g.inv(degrees[ix % n]))).collect();
    let mut sc = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let (i, j) = (a / n, a % n);
            let (k, l) = (b / n, b % n);
            sc.push(if j == k { vec![(i * n + l, FqElem(1))] } else { vec![] });
        }
    }
    let mut unit = vec![FqElem(0); d];
    for i in 0..n {
        unit[i * n + i] = FqElem(1);
    }
    GradedAlgebra::build(f, g, deg, sc, unit)
}

/// Regrade by Γ/N. Returns the new algebra and the projection Γ → Γ/N.
pub fn quotient_grading(a: &GradedAlgebra, normal: &[usize]) -> Result<(GradedAlgebra, GroupHom)> {
    let (q, pi) = a.group().quotient(normal)?;
    let deg = a.degrees().iter().map(|&x| pi.apply(x)).collect();
    let b = GradedAlgebra::build(a.field(), &q, deg, a.structure_constants().to_vec(), a.unit().to_vec())?;
    Ok((b, pi))
}

/// Push the grading forward along a group homomorphism.
pub fn regrade(a: &GradedAlgebra, pi: &GroupHom) -> Result<GradedAlgebra> {
    if &pi.source != a.group() {
        return Err(Error::GroupOrFieldMismatch);
    }
    let deg = a.degrees().iter().map(|&x| pi.apply(x)).collect();
    GradedAlgebra::build(a.field(), &pi.target, deg, a.structure_constants().to_vec(), a.unit().to_vec())
}

/// F^c Γ ⊗^G F^c′ Γ′ (graded along π, π′) against F^{c×c′}(Γ ×_G Γ′) graded
/// along π∘pr1. Both bases are the lexicographically ordered pairs (γ, γ′)
/// with π(γ) = π′(γ′), so the canonical pairing is the identity on indices.
pub fn pullback_product_agrees(c: &Cocycle2, pi: &GroupHom, c2: &Cocycle2, pi2: &GroupHom) -> Result<bool> {
    let prod = graded_product(&regrade(&twisted_group_algebra(c), pi)?, &regrade(&twisted_group_algebra(c2), pi2)?)?;
    let (_, pr1, pr2) = crate::grp::pullback(pi, pi2)?;
    let pc = crate::coh::pullback_cocycle(c, c2, &pr1, &pr2)?;
    let direct = regrade(&twisted_group_algebra(&pc), &pr1.compose(pi))?;
    Ok(prod == direct)
}

fn check_compatible(a: &GradedAlgebra, b: &GradedAlgebra) -> Result<()> {
    if a.group() != b.group() || a.field() != b.field() {
        return Err(Error::GroupOrFieldMismatch);
    }
    Ok(())
}

/// Basis of A ⊗^G A′: degree-matched pairs in lexicographic order.
pub fn product_pairs(a: &GradedAlgebra, b: &GradedAlgebra) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..a.dim() {
        for j in 0..b.dim() {
            if a.deg(i) == b.deg(j) {
                out.push((i, j));
            }
        }
    }
    out
}

fn pair_index(pairs: &[(usize, usize)]) -> impl Fn(usize, usize) -> usize + '_ {
    move |i, j| pairs.binary_search(&(i, j)).expect("degree-matched pair")
}

pub fn graded_product(a: &GradedAlgebra, b: &GradedAlgebra) -> Result<GradedAlgebra> {
    check_compatible(a, b)?;
    let f = a.field();
    let pairs = product_pairs(a, b);
    let idx = pair_index(&pairs);
    let mut sc = Vec::with_capacity(pairs.len() * pairs.len());
    for &(i, i2) in &pairs {
        for &(j, j2) in &pairs {
            let mut v = Vec::new();
            for &(k, c) in a.basis_mul(i, j) {
                for &(k2, c2) in b.basis_mul(i2, j2) {
                    v.push((idx(k, k2), f.mul(c, c2)));
                }
            }
            sc.push(v);
        }
    }
    let mut unit = vec![FqElem(0); pairs.len()];
    for (p, &(i, i2)) in pairs.iter().enumerate() {
        unit[p] = f.mul(a.unit()[i], b.unit()[i2]);
    }
    let deg = pairs.iter().map(|&(i, _)| a.deg(i)).collect();
    GradedAlgebra::build(f, a.group(), deg, sc, unit)
}

/// α(A): the graded product F^αG ⊗^G A relabeled by the basis of A, so the
/// base algebra is literally A_e.
pub fn twist_algebra(alpha: &Cocycle2, a: &GradedAlgebra) -> Result<GradedAlgebra> {
    if alpha.group() != a.group() || alpha.field() != a.field() {
        return Err(Error::GroupOrFieldMismatch);
    }
    let f = a.field();
    let d = a.dim();
    let mut sc = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let s = alpha.get(a.deg(i), a.deg(j));
            sc.push(a.basis_mul(i, j).iter().map(|&(k, c)| (k, f.mul(s, c))).collect());
        }
    }
    GradedAlgebra::build(f, a.group(), a.degrees().to_vec(), sc, a.unit().to_vec())
}

/// A ⊗_F A′ graded by G × G (index of (g, h) is g + |G|·h); basis (i, i′) has
/// index i·dim A′ + i′.
pub fn tensor_algebra(a: &GradedAlgebra, b: &GradedAlgebra) -> Result<GradedAlgebra> {
    if a.field() != b.field() {
        return Err(Error::GroupOrFieldMismatch);
    }
    let f = a.field();
    let g = grp::direct_product(a.group(), b.group())?;
    let (da, db) = (a.dim(), b.dim());
    let d = da * db;
    if d > DIM_CAP {
        return Err(Error::DimensionTooLarge(d));
    }
    let n = a.group().order();
    let deg = (0..d).map(|ix| a.deg(ix / db) + n * b.deg(ix % db)).collect();
    let mut sc = Vec::with_capacity(d * d);
    for x in 0..d {
        for y in 0..d {
            let mut v = Vec::new();
            for &(k, c) in a.basis_mul(x / db, y / db) {
                for &(k2, c2) in b.basis_mul(x % db, y % db) {
                    v.push((k * db + k2, f.mul(c, c2)));
                }
            }
            sc.push(v);
        }
    }
    let mut unit = vec![FqElem(0); d];
    for i in 0..da {
        for j in 0..db {
            unit[i * db + j] = f.mul(a.unit()[i], b.unit()[j]);
        }
    }
    GradedAlgebra::build(f, &g, deg, sc, unit)
}

// ---------------------------------------------------------------------------
// Modules

/// A G-graded left module with homogeneous basis.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedModule {
    pub algebra: GradedAlgebra,
    pub mdeg: Vec<usize>,
    /// act[i] is the matrix of w ↦ e_i·w.
    pub act: Vec<Mat>,
}

impl fmt::Debug for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedModule(dim {}, degrees {:?})", self.dim(), self.mdeg)
    }
}

/// Module-law check shared by graded and ungraded modules.
fn check_module_law(a: &GradedAlgebra, act: &[Mat], m: usize) -> Result<()> {
    let f = a.field();
    let d = a.dim();
    if act.len() != d || act.iter().any(|x| x.rows != m || x.cols != m) {
        return Err(Error::InvalidModule("action shape".into()));
    }
    if act.iter().any(|x| x.data.iter().any(|&c| !f.contains(c))) {
        return Err(Error::FieldMismatch);
    }
    let mut one = Mat::zeros(m, m);
    for (i, &c) in a.unit().iter().enumerate() {
        one.axpy(f, c, &act[i]);
    }
    if one != Mat::identity(m) {
        return Err(Error::InvalidModule("unit does not act as the identity".into()));
    }
    for i in 0..d {
        for j in 0..d {
            let lhs = act[i].mul(f, &act[j]);
            let mut rhs = Mat::zeros(m, m);
            for &(k, c) in a.basis_mul(i, j) {
                rhs.axpy(f, c, &act[k]);
            }
            if lhs != rhs {
                return Err(Error::InvalidModule(format!("module law fails for (e{i}, e{j})")));
            }
        }
    }
    Ok(())
}

/// Matrix of the action of an arbitrary algebra element.
pub(crate) fn act_of(f: &FieldSpec, act: &[Mat], m: usize, a: &[FqElem]) -> Mat {
    let mut out = Mat::zeros(m, m);
    for (i, &c) in a.iter().enumerate() {
        out.axpy(f, c, &act[i]);
    }
    out
}

impl GradedModule {
    pub fn new(algebra: &GradedAlgebra, mdeg: Vec<usize>, act: Vec<Mat>) -> Result<Self> {
        let w = GradedModule { algebra: algebra.clone(), mdeg, act };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let a = &self.algebra;
        let g = a.group();
        let m = self.dim();
        if let Some(&x) = self.mdeg.iter().find(|&&x| x >= g.order()) {
            return Err(Error::BadElement(x));
        }
        check_module_law(a, &self.act, m)?;
        for (i, l) in self.act.iter().enumerate() {
            for r in 0..m {
                for c in 0..m {
                    if l.get(r, c).0 != 0 && self.mdeg[r] != g.mul(a.deg(i), self.mdeg[c]) {
                        return Err(Error::InvalidModule(format!("e{i}·w{c} leaves its degree")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.mdeg.len()
    }

    pub fn field(&self) -> &FieldSpec {
        self.algebra.field()
    }

    pub fn group(&self) -> &FiniteGroup {
        self.algebra.group()
    }

    pub fn component(&self, g: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&j| self.mdeg[j] == g).collect()
    }

    pub fn support(&self) -> Vec<usize> {
        self.group().elements().filter(|&g| self.mdeg.contains(&g)).collect()
    }

    pub fn act_elem(&self, a: &[FqElem]) -> Mat {
        act_of(self.field(), &self.act, self.dim(), a)
    }

    /// A as a left module over itself.
    pub fn regular(a: &GradedAlgebra) -> Self {
        let d = a.dim();
        let act = (0..d).map(|i| a.left_matrix(&unit_vec(d, i))).collect();
        GradedModule { algebra: a.clone(), mdeg: a.degrees().to_vec(), act }
    }

    pub fn zero(a: &GradedAlgebra) -> Self {
        GradedModule { algebra: a.clone(), mdeg: vec![], act: vec![Mat::zeros(0, 0); a.dim()] }
    }

    pub fn to_ungraded(&self) -> UngradedModule {
        UngradedModule { algebra: self.algebra.ungraded(), act: self.act.clone() }
    }

    /// Submodule spanned by homogeneous basis vectors `basis`; the result's
    /// basis is exactly `basis` (columns), each of the given degree.
    pub fn submodule(&self, basis: &[Vec<FqElem>], degrees: &[usize]) -> GradedModule {
        let f = self.field();
        let k = basis.len();
        let b = Mat::from_cols(basis, self.dim());
        let mut act = Vec::with_capacity(self.act.len());
        for l in &self.act {
            let img = l.mul(f, &b);
            let cols: Vec<Vec<FqElem>> = (0..k).map(|j| linalg::solve(f, &b, &img.col(j)).expect("stable subspace")).collect();
            act.push(Mat::from_cols(&cols, k));
        }
        GradedModule { algebra: self.algebra.clone(), mdeg: degrees.to_vec(), act }
    }

    /// Quotient by a graded submodule spanned by homogeneous vectors.
    pub fn quotient(&self, sub: &Subspace) -> GradedModule {
        let f = self.field();
        let m = self.dim();
        let pref: Vec<Vec<FqElem>> = (0..m).map(|j| unit_vec(m, j)).collect();
        let qb = linalg::QuotientBasis::new(f, sub.clone(), &pref);
        let mdeg: Vec<usize> = qb.reps.iter().map(|r| self.mdeg[r.iter().position(|c| c.0 != 0).unwrap()]).collect();
        let act = self
            .act
            .iter()
            .map(|l| {
                let cols: Vec<Vec<FqElem>> = qb.reps.iter().map(|r| qb.coords(f, &l.mul_vec(f, r))).collect();
                Mat::from_cols(&cols, qb.dim())
            })
            .collect();
        GradedModule { algebra: self.algebra.clone(), mdeg, act }
    }

    pub fn direct_sum(&self, other: &GradedModule) -> Result<GradedModule> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let (m, n) = (self.dim(), other.dim());
        let act = self
            .act
            .iter()
            .zip(&other.act)
            .map(|(x, y)| {
                let mut z = Mat::zeros(m + n, m + n);
                for r in 0..m {
                    for c in 0..m {
                        z.set(r, c, x.get(r, c));
                    }
                }
                for r in 0..n {
                    for c in 0..n {
                        z.set(m + r, m + c, y.get(r, c));
                    }
                }
                z
            })
            .collect();
        let mut mdeg = self.mdeg.clone();
        mdeg.extend_from_slice(&other.mdeg);
        Ok(GradedModule { algebra: self.algebra.clone(), mdeg, act })
    }
}

/// Degree-matched pairs of module basis vectors.
pub fn module_pairs(w: &GradedModule, w2: &GradedModule) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..w.dim() {
        for j2 in 0..w2.dim() {
            if w.mdeg[j] == w2.mdeg[j2] {
                out.push((j, j2));
            }
        }
    }
    out
}

/// W ⊗^G W′ over A ⊗^G A′.
pub fn module_product(w: &GradedModule, w2: &GradedModule) -> Result<GradedModule> {
    let p = graded_product(&w.algebra, &w2.algebra)?;
    let f = p.field();
    let apairs = product_pairs(&w.algebra, &w2.algebra);
    let mpairs = module_pairs(w, w2);
    let n = mpairs.len();
    let mut act = Vec::with_capacity(apairs.len());
    for &(i, i2) in &apairs {
        let (l, l2) = (&w.act[i], &w2.act[i2]);
        let mut mat = Mat::zeros(n, n);
        for (c, &(j, j2)) in mpairs.iter().enumerate() {
            for (r, &(k, k2)) in mpairs.iter().enumerate() {
                let x = l.get(k, j);
                if x.0 == 0 {
                    continue;
                }
                let y = l2.get(k2, j2);
                if y.0 != 0 {
                    mat.set(r, c, f.mul(x, y));
                }
            }
        }
        act.push(mat);
    }
    let mdeg = mpairs.iter().map(|&(j, _)| w.mdeg[j]).collect();
    Ok(GradedModule { algebra: p, mdeg, act })
}

/// α(W) over α(A), with the basis of W.
pub fn twist_module(alpha: &Cocycle2, w: &GradedModule) -> Result<GradedModule> {
    let b = twist_algebra(alpha, &w.algebra)?;
    let f = b.field();
    let act = w
        .act
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let mut out = l.clone();
            for c in 0..w.dim() {
                let s = alpha.get(b.deg(i), w.mdeg[c]);
                for r in 0..w.dim() {
                    out.set(r, c, f.mul(s, l.get(r, c)));
                }
            }
            out
        })
        .collect();
    Ok(GradedModule { algebra: b, mdeg: w.mdeg.clone(), act })
}

/// h(W): the component at g is W_{gh}.
pub fn suspend(w: &GradedModule, h: usize) -> GradedModule {
    let g = w.group();
    let hi = g.inv(h);
    GradedModule { algebra: w.algebra.clone(), mdeg: w.mdeg.iter().map(|&x| g.mul(x, hi)).collect(), act: w.act.clone() }
}

/// W ⊗_F W′ over the G×G-graded tensor algebra.
pub fn tensor_module(w: &GradedModule, w2: &GradedModule) -> Result<GradedModule> {
    let t = tensor_algebra(&w.algebra, &w2.algebra)?;
    let f = t.field();
    let db = w2.algebra.dim();
    let act = (0..t.dim()).map(|x| w.act[x / db].kron(f, &w2.act[x % db])).collect();
    let n = w.group().order();
    let m2 = w2.dim();
    let mdeg = (0..w.dim() * m2).map(|ix| w.mdeg[ix / m2] + n * w2.mdeg[ix % m2]).collect();
    Ok(GradedModule { algebra: t, mdeg, act })
}

/// A module over an algebra whose grading is ignored.
#[derive(Clone, PartialEq, Eq)]
pub struct UngradedModule {
    pub algebra: GradedAlgebra,
    pub act: Vec<Mat>,
}

impl fmt::Debug for UngradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UngradedModule(dim {})", self.dim())
    }
}

impl UngradedModule {
    pub fn new(algebra: &GradedAlgebra, act: Vec<Mat>) -> Result<Self> {
        let m = act.first().map_or(0, |x| x.rows);
        check_module_law(algebra, &act, m)?;
        Ok(UngradedModule { algebra: algebra.clone(), act })
    }

    pub fn validate(&self) -> Result<()> {
        check_module_law(&self.algebra, &self.act, self.dim())
    }

    pub fn dim(&self) -> usize {
        self.act.first().map_or(0, |x| x.rows)
    }

    pub fn field(&self) -> &FieldSpec {
        self.algebra.field()
    }

    pub fn regular(a: &GradedAlgebra) -> Self {
        let d = a.dim();
        UngradedModule { algebra: a.clone(), act: (0..d).map(|i| a.left_matrix(&unit_vec(d, i))).collect() }
    }

    pub fn act_elem(&self, a: &[FqElem]) -> Mat {
        act_of(self.field(), &self.act, self.dim(), a)
    }

    /// Matrices of the algebra generators.
    pub fn generator_matrices(&self) -> Vec<Mat> {
        self.algebra.generators().iter().map(|&i| self.act[i].clone()).collect()
    }

    /// Submodule on a basis of a stable subspace (columns as given).
    pub fn submodule(&self, basis: &[Vec<FqElem>]) -> UngradedModule {
        let f = self.field();
        let k = basis.len();
        let b = Mat::from_cols(basis, self.dim());
        let act = self
            .act
            .iter()
            .map(|l| {
                let img = l.mul(f, &b);
                let cols: Vec<Vec<FqElem>> = (0..k).map(|j| linalg::solve(f, &b, &img.col(j)).expect("stable subspace")).collect();
                Mat::from_cols(&cols, k)
            })
            .collect();
        UngradedModule { algebra: self.algebra.clone(), act }
    }

    pub fn quotient(&self, sub: &Subspace) -> UngradedModule {
        let f = self.field();
        let m = self.dim();
        let pref: Vec<Vec<FqElem>> = (0..m).map(|j| unit_vec(m, j)).collect();
        let qb = linalg::QuotientBasis::new(f, sub.clone(), &pref);
        let act = self
            .act
            .iter()
            .map(|l| {
                let cols: Vec<Vec<FqElem>> = qb.reps.iter().map(|r| qb.coords(f, &l.mul_vec(f, r))).collect();
                Mat::from_cols(&cols, qb.dim())
            })
            .collect();
        UngradedModule { algebra: self.algebra.clone(), act }
    }

    /// Restriction along an algebra map given by images of basis elements.
    pub fn restrict_along(&self, sub: &GradedAlgebra, images: &[Vec<FqElem>]) -> UngradedModule {
        let act = images.iter().map(|v| self.act_elem(v)).collect();
        UngradedModule { algebra: sub.clone(), act }
    }

    /// Restriction to A_e (basis order of `base_indices`).
    pub fn restrict_to_base(&self) -> UngradedModule {
        let base = self.algebra.base_algebra();
        let act = self.algebra.base_indices().iter().map(|&i| self.act[i].clone()).collect();
        UngradedModule { algebra: base, act }
    }
}

/// Smallest submodule containing `seeds`.
pub fn spin_module(f: &FieldSpec, m: usize, gens: &[Mat], seeds: &[Vec<FqElem>]) -> Subspace {
    spin(f, m, seeds, gens)
}

/// Dimension of the span of a list of vectors.
pub fn span_dim(f: &FieldSpec, n: usize, vs: &[Vec<FqElem>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    rank(f, &Mat::from_cols(vs, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coh::klein4_pauli;
    use crate::grp::{cyclic, klein4, quaternion8};

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    #[test]
    fn group_algebra_validates() {
        let a = group_algebra(&quaternion8(), &f5());
        a.validate().unwrap();
        assert!(classify(&a).unwrap().is_strongly_graded);
    }

    #[test]
    fn pauli_anticommutes() {
        let f = f5();
        let a = twisted_group_algebra(&klein4_pauli(&f));
        a.validate().unwrap();
        // v_a v_b = v_ab, v_b v_a = -v_ab
        assert_eq!(a.basis_mul(1, 2), &[(3, FqElem(1))]);
        assert_eq!(a.basis_mul(2, 1), &[(3, FqElem(4))]);
        let c = classify(&a).unwrap();
        assert!(c.is_twisted_group_algebra && c.is_graded_division && c.is_crossed_product);
    }

    #[test]
    fn elementary_grading() {
        let z2 = cyclic(2).unwrap();
        let a = elementary_matrix_algebra(&f5(), &z2, &[0, 1]).unwrap();
        a.validate().unwrap();
        assert_eq!(a.degrees(), &[0, 1, 1, 0]);
        let c = classify(&a).unwrap();
        assert!(c.is_strongly_graded);
        assert!(!c.is_graded_division);
    }

    #[test]
    fn quotient_grading_of_q8() {
        let a = group_algebra(&quaternion8(), &f5());
        let (b, _) = quotient_grading(&a, &[1]).unwrap();
        b.validate().unwrap();
        assert_eq!(b.group().order(), 4);
        assert_eq!(b.base_indices().len(), 2);
        for g in b.group().elements() {
            assert_eq!(b.component(g).len(), 2);
        }
        let c = classify(&b).unwrap();
        assert!(c.is_strongly_graded && c.is_crossed_product);
        assert!(crate::grp::iso_search(b.group(), &klein4()).unwrap().is_some());
    }

    #[test]
    fn twist_validates_and_products() {
        let f = f5();
        let p = klein4_pauli(&f);
        let a = group_algebra(&klein4(), &f);
        let t = twist_algebra(&p, &a).unwrap();
        t.validate().unwrap();
        let prod = graded_product(&t, &t).unwrap();
        prod.validate().unwrap();
        assert_eq!(prod.dim(), 4);
        let w = GradedModule::regular(&a);
        let tw = twist_module(&p, &w).unwrap();
        tw.validate().unwrap();
        let mp = module_product(&tw, &w).unwrap();
        mp.validate().unwrap();
        let s = suspend(&w, 1);
        s.validate().unwrap();
    }

    #[test]
    fn tensor_module_validates() {
        let f = f5();
        let a = group_algebra(&cyclic(2).unwrap(), &f);
        let w = GradedModule::regular(&a);
        let t = tensor_module(&w, &w).unwrap();
        t.validate().unwrap();
        assert_eq!(t.dim(), 4);
    }

    #[test]
    fn lexicographic_scan_order() {
        let f = FieldSpec::prime(3).unwrap();
        let mut seen = Vec::new();
        scan_component(&f, 2, &[0, 1], |v| {
            seen.push((v[0].0, v[1].0));
            false
        });
        assert_eq!(seen[..4], [(0, 1), (0, 2), (1, 0), (1, 1)]);
        assert_eq!(seen.len(), 8);
    }
}
