//! Dense linear algebra over a finite field and Smith normal form over Z/m.

use crate::ffield::{FieldSpec, FqElem};

/// Row-major dense matrix over some field (passed explicitly to every op).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<FqElem>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![FqElem(0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FqElem(1));
        }
        m
    }

    pub fn from_rows(rows: &[Vec<FqElem>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Mat { rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<FqElem>], rows: usize) -> Self {
        let mut m = Mat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m.set(i, j, c[i]);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FqElem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FqElem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FqElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<FqElem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.0 == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, f: &FieldSpec, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.0 == 0 {
                    continue;
                }
                let orow = other.row(k);
                let base = i * out.cols;
                for (j, &b) in orow.iter().enumerate() {
                    if b.0 != 0 {
                        out.data[base + j] = f.add(out.data[base + j], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &FieldSpec, v: &[FqElem]) -> Vec<FqElem> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut s = FqElem(0);
                for (j, &x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if a.0 != 0 && x.0 != 0 {
                        s = f.add(s, f.mul(a, x));
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, f: &FieldSpec, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, f: &FieldSpec, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, f: &FieldSpec, c: FqElem) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    /// `self += c · other`.
    pub fn axpy(&mut self, f: &FieldSpec, c: FqElem, other: &Mat) {
        if c.0 == 0 {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            if b.0 != 0 {
                *a = f.add(*a, f.mul(c, b));
            }
        }
    }

    /// Kronecker product; index of (i, i') is `i * other.rows + i'`.
    pub fn kron(&self, f: &FieldSpec, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.0 == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if b.0 != 0 {
                            out.set(i * other.rows + k, j * other.cols + l, f.mul(a, b));
                        }
                    }
                }
            }
        }
        out
    }

    /// Flatten to a vector (row-major).
    pub fn to_vec(&self) -> Vec<FqElem> {
        self.data.clone()
    }
}

/// Standard basis vector e_i of F^n.
pub fn unit_vec(n: usize, i: usize) -> Vec<FqElem> {
    let mut v = vec![FqElem(0); n];
    v[i] = FqElem(1);
    v
}

/// y += c·x
pub fn axpy(f: &FieldSpec, y: &mut [FqElem], c: FqElem, x: &[FqElem]) {
    if c.0 == 0 {
        return;
    }
    for (a, &b) in y.iter_mut().zip(x) {
        if b.0 != 0 {
            *a = f.add(*a, f.mul(c, b));
        }
    }
}

pub fn is_zero_vec(v: &[FqElem]) -> bool {
    v.iter().all(|x| x.0 == 0)
}

/// In-place reduced row echelon form; returns pivot columns.
pub fn rref(f: &FieldSpec, m: &mut Mat) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| m.get(i, c).0 != 0) else { continue };
        if p != r {
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, r * m.cols + j);
            }
        }
        let inv = f.inv_nz(m.get(r, c));
        for j in c..m.cols {
            let v = m.get(r, j);
            m.set(r, j, f.mul(v, inv));
        }
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c);
            if factor.0 == 0 {
                continue;
            }
            let nf = f.neg(factor);
            for j in c..m.cols {
                let v = m.get(r, j);
                if v.0 != 0 {
                    let cur = m.get(i, j);
                    m.set(i, j, f.add(cur, f.mul(nf, v)));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(f: &FieldSpec, m: &Mat) -> usize {
    let mut a = m.clone();
    rref(f, &mut a).len()
}

/// Basis of `{x : m x = 0}`, one vector per free column, in column order.
pub fn nullspace(f: &FieldSpec, m: &Mat) -> Vec<Vec<FqElem>> {
    let mut a = m.clone();
    let pivots = rref(f, &mut a);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![FqElem(0); m.cols];
        v[free] = FqElem(1);
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = f.neg(a.get(r, free));
        }
        out.push(v);
    }
    out
}

/// Some solution of `m x = b`, if one exists.
pub fn solve(f: &FieldSpec, m: &Mat, b: &[FqElem]) -> Option<Vec<FqElem>> {
    let mut aug = Mat::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug.set(i, j, m.get(i, j));
        }
        aug.set(i, m.cols, b[i]);
    }
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![FqElem(0); m.cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug.get(r, m.cols);
    }
    Some(x)
}

pub fn inverse(f: &FieldSpec, m: &Mat) -> Option<Mat> {
    if m.rows != m.cols {
        return None;
    }
    let n = m.rows;
    let mut aug = Mat::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j));
        }
        aug.set(i, n + i, FqElem(1));
    }
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut inv = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, aug.get(i, n + j));
        }
    }
    Some(inv)
}

pub fn is_invertible(f: &FieldSpec, m: &Mat) -> bool {
    m.rows == m.cols && rank(f, m) == m.rows
}

/// A subspace of F^n kept in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub n: usize,
    rows: Vec<Vec<FqElem>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(n: usize) -> Self {
        Subspace { n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_vectors(f: &FieldSpec, n: usize, vs: &[Vec<FqElem>]) -> Self {
        let mut s = Subspace::new(n);
        for v in vs {
            s.insert(f, v);
        }
        s
    }

    pub fn full(n: usize) -> Self {
        let mut s = Subspace::new(n);
        for i in 0..n {
            let mut v = vec![FqElem(0); n];
            v[i] = FqElem(1);
            s.rows.push(v);
            s.pivots.push(i);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<FqElem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` against the basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, f: &FieldSpec, v: &[FqElem]) -> Vec<FqElem> {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = w[p];
            if c.0 != 0 {
                let nc = f.neg(c);
                for (x, &r) in w.iter_mut().zip(row) {
                    if r.0 != 0 {
                        *x = f.add(*x, f.mul(nc, r));
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, f: &FieldSpec, v: &[FqElem]) -> bool {
        self.reduce(f, v).iter().all(|x| x.0 == 0)
    }

    /// Add a vector; returns true when the dimension grew.
    pub fn insert(&mut self, f: &FieldSpec, v: &[FqElem]) -> bool {
        let mut w = self.reduce(f, v);
        let Some(p) = w.iter().position(|x| x.0 != 0) else { return false };
        let inv = f.inv_nz(w[p]);
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c.0 != 0 {
                let nc = f.neg(c);
                for (x, &r) in row.iter_mut().zip(&w) {
                    if r.0 != 0 {
                        *x = f.add(*x, f.mul(nc, r));
                    }
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(pos, w);
        self.pivots.insert(pos, p);
        true
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.n
    }

    /// Intersection with another subspace of the same ambient space.
    pub fn intersect(&self, f: &FieldSpec, other: &Subspace) -> Subspace {
        // x = Σ a_i u_i = Σ b_j w_j; solve [U | -W] (a, b) = 0.
        let (du, dw) = (self.dim(), other.dim());
        if du == 0 || dw == 0 {
            return Subspace::new(self.n);
        }
        let mut m = Mat::zeros(self.n, du + dw);
        for (i, u) in self.rows.iter().enumerate() {
            for r in 0..self.n {
                m.set(r, i, u[r]);
            }
        }
        for (j, w) in other.rows.iter().enumerate() {
            for r in 0..self.n {
                m.set(r, du + j, f.neg(w[r]));
            }
        }
        let mut out = Subspace::new(self.n);
        for sol in nullspace(f, &m) {
            let mut x = vec![FqElem(0); self.n];
            for (i, u) in self.rows.iter().enumerate() {
                if sol[i].0 != 0 {
                    for r in 0..self.n {
                        x[r] = f.add(x[r], f.mul(sol[i], u[r]));
                    }
                }
            }
            out.insert(f, &x);
        }
        out
    }
}

/// Smallest subspace containing `seeds` and stable under every matrix in `gens`.
pub fn spin(f: &FieldSpec, n: usize, seeds: &[Vec<FqElem>], gens: &[Mat]) -> Subspace {
    let mut space = Subspace::new(n);
    let mut queue: Vec<Vec<FqElem>> = Vec::new();
    for s in seeds {
        if space.insert(f, s) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for g in gens {
            let w = g.mul_vec(f, &v);
            if space.insert(f, &w) {
                queue.push(w);
            }
            if space.is_full() {
                return space;
            }
        }
    }
    space
}

/// Coordinates in a chosen basis of a quotient space `V / R`.
///
/// The basis of the quotient is picked greedily from `preferred` vectors, in
/// order, keeping those independent modulo `R`.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    pub n: usize,
    relations: Subspace,
    /// Representatives in V of the chosen quotient basis.
    pub reps: Vec<Vec<FqElem>>,
    free_cols: Vec<usize>,
    coord_inv: Mat,
}

impl QuotientBasis {
    pub fn new(f: &FieldSpec, relations: Subspace, preferred: &[Vec<FqElem>]) -> Self {
        let n = relations.n;
        let mut is_pivot = vec![false; n];
        for &p in relations.pivots() {
            is_pivot[p] = true;
        }
        let free_cols: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut chosen = Subspace::new(free_cols.len());
        let mut reps = Vec::new();
        let mut reduced_cols = Vec::new();
        let std_basis = (0..n).map(|i| {
            let mut v = vec![FqElem(0); n];
            v[i] = FqElem(1);
            v
        });
        for v in preferred.iter().cloned().chain(std_basis) {
            if chosen.is_full() {
                break;
            }
            let r = relations.reduce(f, &v);
            let red: Vec<FqElem> = free_cols.iter().map(|&c| r[c]).collect();
            if chosen.insert(f, &red) {
                reps.push(v);
                reduced_cols.push(red);
            }
        }
        let k = free_cols.len();
        let coord_inv = inverse(f, &Mat::from_cols(&reduced_cols, k)).unwrap_or_else(|| Mat::zeros(0, 0));
        QuotientBasis { n, relations, reps, free_cols, coord_inv }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of the class of `v` in the chosen basis.
    pub fn coords(&self, f: &FieldSpec, v: &[FqElem]) -> Vec<FqElem> {
        let r = self.relations.reduce(f, v);
        let red: Vec<FqElem> = self.free_cols.iter().map(|&c| r[c]).collect();
        if red.is_empty() {
            return red;
        }
        self.coord_inv.mul_vec(f, &red)
    }

    pub fn relations(&self) -> &Subspace {
        &self.relations
    }
}

/// Coordinates with respect to a fixed list of independent vectors.
#[derive(Clone, Debug)]
pub struct Coordinatizer {
    pivots: Vec<usize>,
    inv: Mat,
}

impl Coordinatizer {
    /// `basis` must be linearly independent.
    pub fn new(f: &FieldSpec, basis: &[Vec<FqElem>]) -> Self {
        let k = basis.len();
        if k == 0 {
            return Coordinatizer { pivots: vec![], inv: Mat::zeros(0, 0) };
        }
        let n = basis[0].len();
        let mut rows = Mat::from_rows(basis, n);
        let pivots = rref(f, &mut rows);
        assert_eq!(pivots.len(), k, "basis is dependent");
        // Column s of `sub` holds basis vector s restricted to the pivots.
        let mut sub = Mat::zeros(k, k);
        for (s, b) in basis.iter().enumerate() {
            for (r, &p) in pivots.iter().enumerate() {
                sub.set(r, s, b[p]);
            }
        }
        let inv = inverse(f, &sub).expect("pivot minor is invertible");
        Coordinatizer { pivots, inv }
    }

    /// Coefficients of `v`, assuming it lies in the span.
    pub fn coords(&self, f: &FieldSpec, v: &[FqElem]) -> Vec<FqElem> {
        let r: Vec<FqElem> = self.pivots.iter().map(|&p| v[p]).collect();
        if r.is_empty() {
            return r;
        }
        self.inv.mul_vec(f, &r)
    }
}

// ---------------------------------------------------------------------------
// Univariate polynomials over F_q, coefficients from the constant term up.

pub type Poly = Vec<FqElem>;

pub fn poly_trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.0 == 0) {
        p.pop();
    }
    p
}

pub fn poly_deg(p: &[FqElem]) -> Option<usize> {
    p.iter().rposition(|c| c.0 != 0)
}

pub fn poly_mul(f: &FieldSpec, a: &[FqElem], b: &[FqElem]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![FqElem(0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.0 == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    poly_trim(out)
}

pub fn poly_sub(f: &FieldSpec, a: &[FqElem], b: &[FqElem]) -> Poly {
    let n = a.len().max(b.len());
    poly_trim((0..n).map(|i| f.sub(*a.get(i).unwrap_or(&FqElem(0)), *b.get(i).unwrap_or(&FqElem(0)))).collect())
}

/// Quotient and remainder; `b` must be nonzero.
pub fn poly_divrem(f: &FieldSpec, a: &[FqElem], b: &[FqElem]) -> (Poly, Poly) {
    let db = poly_deg(b).expect("division by the zero polynomial");
    let lead_inv = f.inv_nz(b[db]);
    let mut r = poly_trim(a.to_vec());
    let mut q = vec![FqElem(0); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = poly_deg(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        q[dr - db] = c;
        for (i, &bc) in b.iter().enumerate().take(db + 1) {
            r[dr - db + i] = f.sub(r[dr - db + i], f.mul(c, bc));
        }
        r = poly_trim(r);
    }
    (poly_trim(q), r)
}

pub fn poly_monic(f: &FieldSpec, a: &[FqElem]) -> Poly {
    match poly_deg(a) {
        None => vec![],
        Some(d) => {
            let inv = f.inv_nz(a[d]);
            a[..=d].iter().map(|&c| f.mul(c, inv)).collect()
        }
    }
}

pub fn poly_gcd(f: &FieldSpec, a: &[FqElem], b: &[FqElem]) -> Poly {
    let (mut x, mut y) = (poly_trim(a.to_vec()), poly_trim(b.to_vec()));
    while poly_deg(&y).is_some() {
        let r = poly_divrem(f, &x, &y).1;
        x = y;
        y = r;
    }
    poly_monic(f, &x)
}

/// base^e mod m.
pub fn poly_powmod(f: &FieldSpec, base: &[FqElem], mut e: u64, m: &[FqElem]) -> Poly {
    let mut result = vec![FqElem(1)];
    let mut b = poly_divrem(f, base, m).1;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_divrem(f, &poly_mul(f, &result, &b), m).1;
        }
        b = poly_divrem(f, &poly_mul(f, &b, &b), m).1;
        e >>= 1;
    }
    poly_divrem(f, &result, m).1
}

/// p(X) by Horner's rule.
pub fn poly_eval_mat(f: &FieldSpec, p: &[FqElem], x: &Mat) -> Mat {
    let n = x.rows;
    let mut acc = Mat::zeros(n, n);
    for &c in p.iter().rev() {
        acc = acc.mul(f, x);
        for i in 0..n {
            let v = acc.get(i, i);
            acc.set(i, i, f.add(v, c));
        }
    }
    acc
}

/// Characteristic polynomial via reduction to upper Hessenberg form.
pub fn charpoly(f: &FieldSpec, x: &Mat) -> Poly {
    let n = x.rows;
    let mut h = x.clone();
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| h.get(i, j).0 != 0) else { continue };
        if piv != j + 1 {
            for c in 0..n {
                h.data.swap(piv * n + c, (j + 1) * n + c);
            }
            for r in 0..n {
                h.data.swap(r * n + piv, r * n + j + 1);
            }
        }
        let pinv = f.inv_nz(h.get(j + 1, j));
        for k in j + 2..n {
            let u = f.mul(h.get(k, j), pinv);
            if u.0 == 0 {
                continue;
            }
            // row_k -= u·row_{j+1}; col_{j+1} += u·col_k
            for c in 0..n {
                let v = f.sub(h.get(k, c), f.mul(u, h.get(j + 1, c)));
                h.set(k, c, v);
            }
            for r in 0..n {
                let v = f.add(h.get(r, j + 1), f.mul(u, h.get(r, k)));
                h.set(r, j + 1, v);
            }
        }
    }
    // p_m = (t − h_mm) p_{m−1} − Σ_i h_{m−i,m} (Π h_{k,k−1}) p_{m−i−1}, 1-indexed.
    let mut ps: Vec<Poly> = vec![vec![FqElem(1)]];
    for m in 1..=n {
        let hm = |r: usize, c: usize| h.get(r - 1, c - 1);
        let mut p = poly_mul(f, &[f.neg(hm(m, m)), FqElem(1)], &ps[m - 1]);
        let mut prod = FqElem(1);
        for i in 1..m {
            prod = f.mul(prod, hm(m - i + 1, m - i));
            let c = f.mul(hm(m - i, m), prod);
            if c.0 != 0 {
                let term: Poly = ps[m - i - 1].iter().map(|&a| f.mul(a, c)).collect();
                p = poly_sub(f, &p, &term);
            }
        }
        ps.push(poly_trim(p));
    }
    ps.pop().unwrap()
}

// ---------------------------------------------------------------------------
// Smith normal form over Z/m.
//
// The integer system is lifted and augmented by m·I; since every multiple of m
// lies in the row lattice, all entries may be kept reduced mod m throughout.
// Row and column operations are unimodular over Z, hence invertible mod m.

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

pub(crate) fn gcd_i(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd_i(b, a % b)
    }
}

/// Result of `U · A · V = D` over Z/m with `D` diagonal.
#[derive(Clone, Debug)]
pub struct SnfMod {
    pub m: i64,
    pub rows: usize,
    pub cols: usize,
    /// Diagonal entries, reduced mod m; length min(rows, cols).
    pub diag: Vec<i64>,
    pub u: Vec<Vec<i64>>,
    pub u_inv: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
    pub v_inv: Vec<Vec<i64>>,
}

fn ident(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn md(x: i64, m: i64) -> i64 {
    x.rem_euclid(m)
}

/// Apply the unimodular 2x2 transform [[s, t], [c, d]] to rows i, j of `a`.
fn row_combine(a: &mut [Vec<i64>], i: usize, j: usize, s: i64, t: i64, c: i64, d: i64, m: i64) {
    let (ri, rj) = (a[i].clone(), a[j].clone());
    for k in 0..ri.len() {
        a[i][k] = md(s * ri[k] + t * rj[k], m);
        a[j][k] = md(c * ri[k] + d * rj[k], m);
    }
}

fn col_combine(a: &mut [Vec<i64>], i: usize, j: usize, s: i64, t: i64, c: i64, d: i64, m: i64) {
    for row in a.iter_mut() {
        let (x, y) = (row[i], row[j]);
        row[i] = md(s * x + t * y, m);
        row[j] = md(c * x + d * y, m);
    }
}

impl SnfMod {
    pub fn compute(a: &[Vec<i64>], rows: usize, cols: usize, m: i64) -> Self {
        assert!(m >= 1);
        let mut a: Vec<Vec<i64>> = a.iter().map(|r| r.iter().map(|&x| md(x, m)).collect()).collect();
        let mut u = ident(rows);
        let mut u_inv = ident(rows);
        let mut v = ident(cols);
        let mut v_inv = ident(cols);
        // Row transform T on rows (i,j): A <- T A, U <- T U, U^{-1} <- U^{-1} T^{-1}.
        let rowop = |a: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, u_inv: &mut Vec<Vec<i64>>, i, j, s, t, c, d| {
            row_combine(a, i, j, s, t, c, d, m);
            row_combine(u, i, j, s, t, c, d, m);
            // T^{-1} = [[d, -t], [-c, s]] acting on columns of U^{-1}.
            col_combine(u_inv, i, j, d, -c, -t, s, m);
        };
        // Column transform: A <- A T^T-style; tracked so that U A V = D.
        let colop = |a: &mut Vec<Vec<i64>>, v: &mut Vec<Vec<i64>>, v_inv: &mut Vec<Vec<i64>>, i, j, s, t, c, d| {
            col_combine(a, i, j, s, t, c, d, m);
            col_combine(v, i, j, s, t, c, d, m);
            row_combine(v_inv, i, j, d, -c, -t, s, m);
        };
        let size = rows.min(cols);
        let mut diag = Vec::with_capacity(size);
        for t in 0..size {
            // Pivot: nonzero entry with the smallest gcd with m.
            let mut best: Option<(i64, usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0 {
                        let g = gcd_i(a[i][j], m);
                        if best.map_or(true, |(bg, _, _)| g < bg) {
                            best = Some((g, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                diag.extend(std::iter::repeat(0).take(size - t));
                break;
            };
            if pi != t {
                rowop(&mut a, &mut u, &mut u_inv, t, pi, 0, 1, -1, 0);
            }
            if pj != t {
                colop(&mut a, &mut v, &mut v_inv, t, pj, 0, 1, -1, 0);
            }
            loop {
                let mut changed = false;
                for i in t + 1..rows {
                    let (p, b) = (a[t][t], a[i][t]);
                    if b == 0 {
                        continue;
                    }
                    changed = true;
                    if p != 0 && b % p == 0 {
                        rowop(&mut a, &mut u, &mut u_inv, t, i, 1, 0, -(b / p), 1);
                    } else {
                        let (g, s, tt) = ext_gcd(p, b);
                        rowop(&mut a, &mut u, &mut u_inv, t, i, s, tt, -(b / g), p / g);
                    }
                }
                for j in t + 1..cols {
                    let (p, b) = (a[t][t], a[t][j]);
                    if b == 0 {
                        continue;
                    }
                    changed = true;
                    if p != 0 && b % p == 0 {
                        colop(&mut a, &mut v, &mut v_inv, t, j, 1, 0, -(b / p), 1);
                    } else {
                        let (g, s, tt) = ext_gcd(p, b);
                        colop(&mut a, &mut v, &mut v_inv, t, j, s, tt, -(b / g), p / g);
                    }
                }
                if !changed {
                    // Enforce the divisibility chain: gcd(pivot, m) must divide every
                    // remaining entry.
                    let g = gcd_i(a[t][t], m);
                    let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % g != 0));
                    match bad {
                        Some(i) => rowop(&mut a, &mut u, &mut u_inv, t, i, 1, 1, 0, 1),
                        None => break,
                    }
                }
            }
            diag.push(a[t][t]);
        }
        SnfMod { m, rows, cols, diag, u, u_inv, v, v_inv }
    }

    /// gcd(d_i, m) for each diagonal slot, with m for zero entries and for
    /// columns beyond the diagonal.
    pub fn col_orders(&self) -> Vec<i64> {
        (0..self.cols)
            .map(|j| if j < self.diag.len() { gcd_i(self.diag[j], self.m) } else { self.m })
            .map(|g| if g == 0 { self.m } else { g })
            .collect()
    }

    pub fn row_orders(&self) -> Vec<i64> {
        (0..self.rows)
            .map(|i| if i < self.diag.len() { gcd_i(self.diag[i], self.m) } else { self.m })
            .map(|g| if g == 0 { self.m } else { g })
            .collect()
    }

    /// Generators of `{x : A x ≡ 0 mod m}` paired with their additive orders;
    /// generators of order 1 are omitted.
    pub fn kernel(&self) -> Vec<(Vec<i64>, i64)> {
        let m = self.m;
        let mut out = Vec::new();
        for (j, g) in self.col_orders().into_iter().enumerate() {
            // y_j must be a multiple of m / g_j, where g_j = gcd(d_j, m).
            let step = m / g;
            let order = g;
            if order == 1 {
                continue;
            }
            let x: Vec<i64> = (0..self.cols).map(|r| md(self.v[r][j] * step, m)).collect();
            out.push((x, order));
        }
        out
    }

    /// Some `x` with `A x ≡ b mod m`, or None.
    pub fn solve(&self, b: &[i64]) -> Option<Vec<i64>> {
        let m = self.m;
        let ub: Vec<i64> = (0..self.rows)
            .map(|i| md((0..self.rows).map(|k| self.u[i][k] * b[k] % m).sum::<i64>(), m))
            .collect();
        let mut y = vec![0i64; self.cols];
        for i in 0..self.rows {
            let d = if i < self.diag.len() { self.diag[i] } else { 0 };
            if d == 0 {
                if ub[i] != 0 {
                    return None;
                }
                continue;
            }
            let g = gcd_i(d, m);
            if ub[i] % g != 0 {
                return None;
            }
            let mm = m / g;
            let inv = if mm == 1 { 0 } else { md(ext_gcd(d / g, mm).1, mm) };
            y[i] = md((ub[i] / g) * inv, mm);
        }
        Some((0..self.cols).map(|r| md((0..self.cols).map(|k| self.v[r][k] * y[k] % m).sum::<i64>(), m)).collect())
    }

    /// `V^{-1} x`.
    pub fn v_inv_apply(&self, x: &[i64]) -> Vec<i64> {
        let m = self.m;
        (0..self.cols).map(|r| md((0..self.cols).map(|k| self.v_inv[r][k] * x[k] % m).sum::<i64>(), m)).collect()
    }

    /// `U x`.
    pub fn u_apply(&self, x: &[i64]) -> Vec<i64> {
        let m = self.m;
        (0..self.rows).map(|r| md((0..self.rows).map(|k| self.u[r][k] * x[k] % m).sum::<i64>(), m)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    fn e(v: &[u32]) -> Vec<FqElem> {
        v.iter().map(|&x| FqElem(x)).collect()
    }

    #[test]
    fn nullspace_and_solve() {
        let f = f5();
        let m = Mat::from_rows(&[e(&[1, 2, 3]), e(&[2, 4, 2])], 3);
        let ns = nullspace(&f, &m);
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&f, &ns[0]).iter().all(|x| x.0 == 0));
        let x = solve(&f, &m, &e(&[1, 0])).unwrap();
        assert_eq!(m.mul_vec(&f, &x), e(&[1, 0]));
    }

    #[test]
    fn charpoly_of_companion() {
        let f = f5();
        // companion matrix of t^3 + 2t + 3
        let m = Mat::from_rows(&[e(&[0, 0, 2]), e(&[1, 0, 3]), e(&[0, 1, 0])], 3);
        assert_eq!(charpoly(&f, &m), e(&[3, 2, 0, 1]));
        assert!(poly_eval_mat(&f, &e(&[3, 2, 0, 1]), &m).is_zero());
        let g = poly_gcd(&f, &e(&[4, 0, 1]), &e(&[1, 1]));
        assert_eq!(g, e(&[1, 1]));
    }

    #[test]
    fn inverse_round_trip() {
        let f = f5();
        let m = Mat::from_rows(&[e(&[1, 2]), e(&[3, 4])], 2);
        let inv = inverse(&f, &m).unwrap();
        assert_eq!(m.mul(&f, &inv), Mat::identity(2));
        assert!(inverse(&f, &Mat::from_rows(&[e(&[1, 2]), e(&[2, 4])], 2)).is_none());
    }

    #[test]
    fn subspace_intersection() {
        let f = f5();
        let a = Subspace::from_vectors(&f, 3, &[e(&[1, 0, 0]), e(&[0, 1, 0])]);
        let b = Subspace::from_vectors(&f, 3, &[e(&[0, 1, 0]), e(&[0, 0, 1])]);
        let c = a.intersect(&f, &b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&f, &e(&[0, 3, 0])));
    }

    #[test]
    fn snf_reconstructs_diagonal() {
        let m = 12;
        let a = vec![vec![2, 4, 6], vec![4, 3, 0], vec![6, 0, 9]];
        let s = SnfMod::compute(&a, 3, 3, m);
        // U A V = D
        let mul = |x: &Vec<Vec<i64>>, y: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
            (0..x.len())
                .map(|i| (0..y[0].len()).map(|j| (0..y.len()).map(|k| x[i][k] * y[k][j]).sum::<i64>().rem_euclid(m)).collect())
                .collect()
        };
        let d = mul(&mul(&s.u, &a), &s.v);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { s.diag[i] } else { 0 };
                assert_eq!(d[i][j], want.rem_euclid(m));
            }
        }
        assert_eq!(mul(&s.u, &s.u_inv), ident(3));
        assert_eq!(mul(&s.v, &s.v_inv), ident(3));
        let orders = s.row_orders();
        for w in orders.windows(2) {
            assert_eq!(w[1] % w[0], 0, "divisibility chain {orders:?}");
        }
    }

    #[test]
    fn snf_kernel_mod_m() {
        // 2x ≡ 0 mod 4 has kernel {0, 2}.
        let s = SnfMod::compute(&[vec![2]], 1, 1, 4);
        let k = s.kernel();
        assert_eq!(k, vec![(vec![2], 2)]);
        assert_eq!(s.solve(&[2]).map(|x| (2 * x[0]) % 4), Some(2));
        assert!(s.solve(&[1]).is_none());
    }
}
