//! Normalized 2-cocycles G×G → F* with trivial action, and H²(G, F*).
//!
//! Everything is transported by the discrete logarithm to Z/(q−1) and solved
//! with [`SnfMod`]: the cocycle kernel Z², the coboundary image B², the
//! invariant factors of Z²/B², generator cocycles, witness solves for
//! cohomologous pairs and class coordinates all come from the same routine.

use std::fmt;

use crate::error::{Error, Result};
use crate::ffield::{FieldSpec, FqElem};
use crate::grp::{FiniteGroup, GroupHom};
use crate::linalg::SnfMod;

/// A normalized 2-cocycle stored as a full n×n table.
#[derive(Clone, PartialEq, Eq)]
pub struct Cocycle2 {
    group: FiniteGroup,
    field: FieldSpec,
    table: Vec<FqElem>,
}

impl fmt::Debug for Cocycle2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.group.order();
        write!(f, "Cocycle2[")?;
        for g in 0..n {
            if g > 0 {
                write!(f, "; ")?;
            }
            for h in 0..n {
                write!(f, "{}{}", if h > 0 { " " } else { "" }, self.field.format(self.get(g, h)))?;
            }
        }
        write!(f, "]")
    }
}

/// First triple (g, h, k) at which the cocycle identity fails, if any.
pub fn is_cocycle(group: &FiniteGroup, field: &FieldSpec, table: &[Vec<FqElem>]) -> Result<Option<(usize, usize, usize)>> {
    let n = group.order();
    if table.len() != n || table.iter().any(|r| r.len() != n) {
        return Err(Error::GroupOrFieldMismatch);
    }
    for (g, row) in table.iter().enumerate() {
        for (h, &v) in row.iter().enumerate() {
            if v.0 == 0 {
                return Err(Error::ZeroEntry(g, h));
            }
            if !field.contains(v) {
                return Err(Error::FieldMismatch);
            }
        }
    }
    for g in 0..n {
        for h in 0..n {
            let gh = group.mul(g, h);
            for k in 0..n {
                let lhs = field.mul(table[g][h], table[gh][k]);
                let rhs = field.mul(table[h][k], table[g][group.mul(h, k)]);
                if lhs != rhs {
                    return Ok(Some((g, h, k)));
                }
            }
        }
    }
    Ok(None)
}

impl Cocycle2 {
    pub fn trivial(group: &FiniteGroup, field: &FieldSpec) -> Self {
        let n = group.order();
        Cocycle2 { group: group.clone(), field: field.clone(), table: vec![FqElem(1); n * n] }
    }

    /// Validate a table and normalize it. Returns the cocycle together with the
    /// constant cochain λ used, so that `result = input · δλ`.
    pub fn from_table(group: &FiniteGroup, field: &FieldSpec, table: &[Vec<FqElem>]) -> Result<(Self, Vec<FqElem>)> {
        if let Some((g, h, k)) = is_cocycle(group, field, table)? {
            return Err(Error::NotACocycle(g, h, k));
        }
        let e = group.identity();
        // For any cocycle α(e, ·) = α(·, e) = α(e, e); rescale by its inverse.
        let mu = field.inv_nz(table[e][e]);
        let n = group.order();
        let mut flat = Vec::with_capacity(n * n);
        for row in table {
            flat.extend(row.iter().map(|&v| field.mul(v, mu)));
        }
        let lambda = vec![mu; n];
        Ok((Cocycle2 { group: group.clone(), field: field.clone(), table: flat }, lambda))
    }

    /// Build from a table that must already be a normalized cocycle.
    pub fn new(group: &FiniteGroup, field: &FieldSpec, table: &[Vec<FqElem>]) -> Result<Self> {
        let e = group.identity();
        if table.len() == group.order() && table.iter().all(|r| r.len() == group.order()) {
            let normalized = (0..group.order()).all(|g| table[e][g] == FqElem(1) && table[g][e] == FqElem(1));
            if !normalized {
                if let Some((g, h, k)) = is_cocycle(group, field, table)? {
                    return Err(Error::NotACocycle(g, h, k));
                }
                return Err(Error::NotNormalized);
            }
        }
        Ok(Self::from_table(group, field, table)?.0)
    }

    /// Rebuild from exponents of the primitive root (a Z/(q−1) cochain).
    pub fn from_log(group: &FiniteGroup, field: &FieldSpec, logs: &[i64]) -> Result<Self> {
        let n = group.order();
        let table: Vec<Vec<FqElem>> = (0..n)
            .map(|g| (0..n).map(|h| field.exp(logs[g * n + h].rem_euclid(field.units().max(1) as i64) as u64)).collect())
            .collect();
        Self::new(group, field, &table)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn get(&self, g: usize, h: usize) -> FqElem {
        self.table[g * self.group.order() + h]
    }

    pub fn table(&self) -> Vec<Vec<FqElem>> {
        let n = self.group.order();
        (0..n).map(|g| (0..n).map(|h| self.get(g, h)).collect()).collect()
    }

    pub fn is_trivial_table(&self) -> bool {
        self.table.iter().all(|&v| v == FqElem(1))
    }

    /// Discrete logs of all n² entries.
    pub fn logs(&self) -> Vec<i64> {
        self.table.iter().map(|&v| self.field.dlog(v).expect("units") as i64).collect()
    }

    fn check_same(&self, other: &Cocycle2) -> Result<()> {
        if self.group != other.group || self.field != other.field {
            return Err(Error::GroupOrFieldMismatch);
        }
        Ok(())
    }

    pub fn product(&self, other: &Cocycle2) -> Result<Cocycle2> {
        self.check_same(other)?;
        let f = &self.field;
        let table = self.table.iter().zip(&other.table).map(|(&a, &b)| f.mul(a, b)).collect();
        Ok(Cocycle2 { group: self.group.clone(), field: self.field.clone(), table })
    }

    pub fn inverse(&self) -> Cocycle2 {
        let f = &self.field;
        Cocycle2 { group: self.group.clone(), field: self.field.clone(), table: self.table.iter().map(|&a| f.inv_nz(a)).collect() }
    }

    pub fn pow(&self, k: i64) -> Cocycle2 {
        let f = &self.field;
        let m = f.units().max(1) as i64;
        let e = k.rem_euclid(m) as u64;
        Cocycle2 { group: self.group.clone(), field: self.field.clone(), table: self.table.iter().map(|&a| f.pow(a, e)).collect() }
    }

    /// Pull back along a surjection Γ → G.
    pub fn inflate(&self, pi: &GroupHom) -> Result<Cocycle2> {
        if pi.target != self.group {
            return Err(Error::GroupOrFieldMismatch);
        }
        if !pi.is_surjective() {
            return Err(Error::NotSurjective);
        }
        let src = &pi.source;
        let n = src.order();
        let table = (0..n * n).map(|ix| self.get(pi.map[ix / n], pi.map[ix % n])).collect();
        Ok(Cocycle2 { group: src.clone(), field: self.field.clone(), table })
    }

    /// Restrict along an embedding N → Γ.
    pub fn restrict(&self, emb: &GroupHom) -> Result<Cocycle2> {
        if emb.target != self.group {
            return Err(Error::GroupOrFieldMismatch);
        }
        let src = &emb.source;
        let n = src.order();
        let table = (0..n * n).map(|ix| self.get(emb.map[ix / n], emb.map[ix % n])).collect();
        Ok(Cocycle2 { group: src.clone(), field: self.field.clone(), table })
    }

    /// Transport along a group isomorphism θ: H → H′, giving
    /// (θα)(x, y) = α(θ⁻¹x, θ⁻¹y) on H′.
    pub fn transport(&self, theta: &GroupHom) -> Result<Cocycle2> {
        if theta.source != self.group || !theta.is_injective() || !theta.is_surjective() {
            return Err(Error::GroupOrFieldMismatch);
        }
        let tgt = &theta.target;
        let n = tgt.order();
        let mut inv = vec![0; n];
        for (x, &y) in theta.map.iter().enumerate() {
            inv[y] = x;
        }
        let table = (0..n * n).map(|ix| self.get(inv[ix / n], inv[ix % n])).collect();
        Ok(Cocycle2 { group: tgt.clone(), field: self.field.clone(), table })
    }
}

/// δλ: (g, h) ↦ λ(g)λ(h)λ(gh)⁻¹. Requires λ(e) = 1.
pub fn coboundary(group: &FiniteGroup, field: &FieldSpec, lambda: &[FqElem]) -> Result<Cocycle2> {
    let n = group.order();
    if lambda.len() != n {
        return Err(Error::GroupOrFieldMismatch);
    }
    if let Some(i) = lambda.iter().position(|v| v.0 == 0) {
        return Err(Error::ZeroValue(i));
    }
    if lambda[group.identity()] != FqElem(1) {
        return Err(Error::NotNormalized);
    }
    let table = (0..n * n)
        .map(|ix| {
            let (g, h) = (ix / n, ix % n);
            field.mul(field.mul(lambda[g], lambda[h]), field.inv_nz(lambda[group.mul(g, h)]))
        })
        .collect();
    Ok(Cocycle2 { group: group.clone(), field: field.clone(), table })
}

/// The cocycle c ×_G c′ on a pullback Γ ×_G Γ′ given its two projections.
pub fn pullback_cocycle(c: &Cocycle2, c2: &Cocycle2, pr1: &GroupHom, pr2: &GroupHom) -> Result<Cocycle2> {
    if pr1.source != pr2.source || pr1.target != c.group || pr2.target != c2.group || c.field != c2.field {
        return Err(Error::IncompatiblePullback);
    }
    let grp = &pr1.source;
    let n = grp.order();
    let f = &c.field;
    let table = (0..n * n)
        .map(|ix| {
            let (s, t) = (ix / n, ix % n);
            f.mul(c.get(pr1.map[s], pr1.map[t]), c2.get(pr2.map[s], pr2.map[t]))
        })
        .collect();
    Ok(Cocycle2 { group: grp.clone(), field: f.clone(), table })
}

// ---------------------------------------------------------------------------
// Linear systems over Z/m, m = q − 1. Unknowns are the log-entries x(g, h)
// with g, h ≠ e; normalized entries are zero.

struct Layout {
    n: usize,
    /// Position among non-identity elements.
    pos: Vec<Option<usize>>,
    nonid: Vec<usize>,
}

impl Layout {
    fn new(g: &FiniteGroup) -> Self {
        let e = g.identity();
        let nonid: Vec<usize> = g.elements().filter(|&x| x != e).collect();
        let mut pos = vec![None; g.order()];
        for (i, &x) in nonid.iter().enumerate() {
            pos[x] = Some(i);
        }
        Layout { n: g.order(), pos, nonid }
    }

    fn unknowns(&self) -> usize {
        self.nonid.len() * self.nonid.len()
    }

    fn var(&self, g: usize, h: usize) -> Option<usize> {
        Some(self.pos[g]? * self.nonid.len() + self.pos[h]?)
    }

    /// Reduced unknown vector of a full log table.
    fn compress(&self, logs: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.unknowns()];
        for &g in &self.nonid {
            for &h in &self.nonid {
                out[self.var(g, h).unwrap()] = logs[g * self.n + h];
            }
        }
        out
    }

    fn expand(&self, x: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.n * self.n];
        for &g in &self.nonid {
            for &h in &self.nonid {
                out[g * self.n + h] = x[self.var(g, h).unwrap()];
            }
        }
        out
    }
}

/// Echelon accumulator over Z/m keeping at most one row per pivot column.
struct ModEchelon {
    m: i64,
    rows: Vec<Option<Vec<i64>>>,
}

impl ModEchelon {
    fn new(m: i64, width: usize) -> Self {
        ModEchelon { m, rows: vec![None; width] }
    }

    fn insert(&mut self, mut r: Vec<i64>) {
        let m = self.m;
        for x in r.iter_mut() {
            *x = x.rem_euclid(m);
        }
        loop {
            let Some(c) = r.iter().position(|&x| x != 0) else { return };
            match &mut self.rows[c] {
                slot @ None => {
                    *slot = Some(r);
                    return;
                }
                Some(p) => {
                    let (a, b) = (p[c], r[c]);
                    if b % a == 0 {
                        let k = b / a;
                        for (x, &y) in r.iter_mut().zip(p.iter()) {
                            *x = (*x - k * y).rem_euclid(m);
                        }
                    } else {
                        let (g, s, t) = ext_gcd(a, b);
                        let (ag, bg) = (a / g, b / g);
                        let newp: Vec<i64> = p.iter().zip(&r).map(|(&x, &y)| (s * x + t * y).rem_euclid(m)).collect();
                        let newr: Vec<i64> = p.iter().zip(&r).map(|(&x, &y)| (-bg * x + ag * y).rem_euclid(m)).collect();
                        *p = newp;
                        r = newr;
                    }
                }
            }
        }
    }

    fn matrix(&self) -> Vec<Vec<i64>> {
        self.rows.iter().flatten().cloned().collect()
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Coboundary map Z/m^{n−1} → Z/m^{(n−1)²}, as a dense matrix.
fn coboundary_matrix(g: &FiniteGroup, lay: &Layout) -> Vec<Vec<i64>> {
    let nn = lay.unknowns();
    let k = lay.nonid.len();
    let mut d = vec![vec![0i64; k]; nn];
    for &a in &lay.nonid {
        for &b in &lay.nonid {
            let row = lay.var(a, b).unwrap();
            d[row][lay.pos[a].unwrap()] += 1;
            d[row][lay.pos[b].unwrap()] += 1;
            if let Some(p) = lay.pos[g.mul(a, b)] {
                d[row][p] -= 1;
            }
        }
    }
    d
}

fn lambda_from_logs(g: &FiniteGroup, f: &FieldSpec, lay: &Layout, l: &[i64]) -> Vec<FqElem> {
    let mut out = vec![FqElem(1); g.order()];
    for (i, &x) in lay.nonid.iter().enumerate() {
        out[x] = f.exp(l[i].rem_euclid(f.units().max(1) as i64) as u64);
    }
    out
}

/// A witness λ with `beta = alpha · δλ`, or None when the classes differ.
pub fn cohomologous(alpha: &Cocycle2, beta: &Cocycle2) -> Result<Option<Vec<FqElem>>> {
    alpha.check_same(beta)?;
    let g = &alpha.group;
    let f = &alpha.field;
    let m = f.units() as i64;
    let lay = Layout::new(g);
    if m == 1 || lay.nonid.is_empty() {
        return Ok(Some(vec![FqElem(1); g.order()]));
    }
    let quotient = beta.product(&alpha.inverse())?;
    let t = lay.compress(&quotient.logs());
    let d = coboundary_matrix(g, &lay);
    let snf = SnfMod::compute(&d, d.len(), lay.nonid.len(), m);
    Ok(snf.solve(&t).map(|l| lambda_from_logs(g, f, &lay, &l)))
}

/// Coordinates of a class with respect to the generators of an H².
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct ClassCoords(pub Vec<u64>);

impl ClassCoords {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

/// The computed structure of H²(G, F*).
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub group: FiniteGroup,
    pub field: FieldSpec,
    pub invariant_factors: Vec<u64>,
    pub generator_cocycles: Vec<Cocycle2>,
    pub order: u64,
    solver: Option<Solver>,
}

#[derive(Clone, Debug)]
struct Solver {
    m: i64,
    /// SNF of the cocycle-condition system.
    z: SnfMod,
    /// Columns of z with order > 1, i.e. the cyclic summands of Z².
    z_cols: Vec<usize>,
    z_orders: Vec<i64>,
    /// SNF of the presentation of Z²/B².
    h: SnfMod,
    /// Rows of h that carry invariant factors > 1.
    h_rows: Vec<usize>,
}

impl Solver {
    /// Z²-coordinates of a reduced cocycle vector.
    fn z_coords(&self, x: &[i64]) -> Result<Vec<i64>> {
        let y = self.z.v_inv_apply(x);
        let orders = self.z.col_orders();
        let mut out = Vec::with_capacity(self.z_cols.len());
        for (j, &o) in orders.iter().enumerate() {
            let step = self.m / o;
            if y[j] % step != 0 {
                return Err(Error::NotACocycle(0, 0, 0));
            }
            if o > 1 {
                out.push(y[j] / step);
            }
        }
        Ok(out)
    }
}

/// Compute H²(G, F*) with invariant factors and generator cocycles.
pub fn h2(group: &FiniteGroup, field: &FieldSpec) -> CohomologyGroup {
    let m = field.units() as i64;
    let lay = Layout::new(group);
    let trivial = CohomologyGroup {
        group: group.clone(),
        field: field.clone(),
        invariant_factors: vec![],
        generator_cocycles: vec![],
        order: 1,
        solver: None,
    };
    if m == 1 || lay.nonid.is_empty() {
        return trivial;
    }
    let nn = lay.unknowns();
    let mut ech = ModEchelon::new(m, nn);
    for &a in &lay.nonid {
        for &b in &lay.nonid {
            let ab = group.mul(a, b);
            for &c in &lay.nonid {
                let bc = group.mul(b, c);
                let mut row = vec![0i64; nn];
                // x(a,b) + x(ab,c) − x(b,c) − x(a,bc)
                row[lay.var(a, b).unwrap()] += 1;
                if let Some(v) = lay.var(ab, c) {
                    row[v] += 1;
                }
                row[lay.var(b, c).unwrap()] -= 1;
                if let Some(v) = lay.var(a, bc) {
                    row[v] -= 1;
                }
                ech.insert(row);
            }
        }
    }
    let cmat = ech.matrix();
    let z = SnfMod::compute(&cmat, cmat.len(), nn, m);
    let orders = z.col_orders();
    let z_cols: Vec<usize> = (0..nn).filter(|&j| orders[j] > 1).collect();
    let z_orders: Vec<i64> = z_cols.iter().map(|&j| orders[j]).collect();
    let kernel = z.kernel();
    let r = z_cols.len();
    let mut solver = Solver {
        m,
        z,
        z_cols: z_cols.clone(),
        z_orders: z_orders.clone(),
        h: SnfMod::compute(&[], 0, 0, m),
        h_rows: vec![],
    };
    // Presentation of Z²/B²: columns are coboundary images and order relations.
    let d = coboundary_matrix(group, &lay);
    let k = lay.nonid.len();
    let mut pres = vec![vec![0i64; k + r]; r];
    for j in 0..k {
        let col: Vec<i64> = d.iter().map(|row| row[j]).collect();
        let c = solver.z_coords(&col).expect("coboundaries are cocycles");
        for i in 0..r {
            pres[i][j] = c[i];
        }
    }
    for i in 0..r {
        pres[i][k + i] = z_orders[i];
    }
    let h = SnfMod::compute(&pres, r, k + r, m);
    let row_orders = h.row_orders();
    let h_rows: Vec<usize> = (0..r).filter(|&i| row_orders[i] > 1).collect();
    let invariant_factors: Vec<u64> = h_rows.iter().map(|&i| row_orders[i] as u64).collect();
    let mut generator_cocycles = Vec::new();
    for &i in &h_rows {
        // Class with u = e_i corresponds to c = U⁻¹ e_i in Z² coordinates.
        let c: Vec<i64> = (0..r).map(|row| h.u_inv[row][i]).collect();
        let mut x = vec![0i64; nn];
        for (slot, &ck) in c.iter().enumerate() {
            if ck == 0 {
                continue;
            }
            let z_vec = &kernel[slot].0;
            for (xv, &zv) in x.iter_mut().zip(z_vec) {
                *xv = (*xv + ck * zv).rem_euclid(m);
            }
        }
        let full = lay.expand(&x);
        generator_cocycles.push(Cocycle2::from_log(group, field, &full).expect("kernel vectors are cocycles"));
    }
    solver.h = h;
    solver.h_rows = h_rows;
    let order = invariant_factors.iter().product();
    CohomologyGroup { invariant_factors, generator_cocycles, order, solver: Some(solver), ..trivial }
}

impl CohomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Coordinates of `[alpha]` relative to the generator classes.
    pub fn class_of(&self, alpha: &Cocycle2) -> Result<ClassCoords> {
        if alpha.group != self.group || alpha.field != self.field {
            return Err(Error::GroupOrFieldMismatch);
        }
        let Some(s) = &self.solver else { return Ok(ClassCoords(vec![])) };
        let lay = Layout::new(&self.group);
        let x = lay.compress(&alpha.logs());
        let c = s.z_coords(&x)?;
        let u = s.h.u_apply(&c);
        let coords = s
            .h_rows
            .iter()
            .zip(&self.invariant_factors)
            .map(|(&i, &d)| u[i].rem_euclid(d as i64) as u64)
            .collect();
        Ok(ClassCoords(coords))
    }

    /// A cocycle in the class with the given coordinates.
    pub fn cocycle_for(&self, coords: &ClassCoords) -> Result<Cocycle2> {
        if coords.0.len() != self.invariant_factors.len() {
            return Err(Error::GroupOrFieldMismatch);
        }
        let mut acc = Cocycle2::trivial(&self.group, &self.field);
        for (gen, &k) in self.generator_cocycles.iter().zip(&coords.0) {
            acc = acc.product(&gen.pow(k as i64))?;
        }
        Ok(acc)
    }

    /// Every class, in lexicographic order of coordinates.
    pub fn all_classes(&self) -> Vec<ClassCoords> {
        let mut out = vec![ClassCoords(vec![])];
        for &d in &self.invariant_factors {
            out = out
                .into_iter()
                .flat_map(|c| {
                    (0..d).map(move |k| {
                        let mut v = c.0.clone();
                        v.push(k);
                        ClassCoords(v)
                    })
                })
                .collect();
        }
        out
    }

    pub fn add(&self, a: &ClassCoords, b: &ClassCoords) -> ClassCoords {
        ClassCoords(a.0.iter().zip(&b.0).zip(&self.invariant_factors).map(|((x, y), d)| (x + y) % d).collect())
    }

    pub fn neg(&self, a: &ClassCoords) -> ClassCoords {
        ClassCoords(a.0.iter().zip(&self.invariant_factors).map(|(x, d)| (d - x % d) % d).collect())
    }

    pub fn zero(&self) -> ClassCoords {
        ClassCoords(vec![0; self.invariant_factors.len()])
    }

    /// Additive order of a class.
    pub fn class_order(&self, a: &ClassCoords) -> u64 {
        a.0.iter()
            .zip(&self.invariant_factors)
            .map(|(&x, &d)| d / crate::ffield::gcd(d as u32, x as u32) as u64)
            .fold(1, |acc, o| acc / crate::ffield::gcd(acc as u32, o as u32) as u64 * o)
    }

    /// Number of elements in the Z² summand decomposition (diagnostics).
    pub fn cocycle_rank(&self) -> usize {
        self.solver.as_ref().map_or(0, |s| s.z_orders.len())
    }
}

/// Klein four-group cocycle α(aⁱbʲ, aᵏbˡ) = (−1)^{jk}.
pub fn klein4_pauli(field: &FieldSpec) -> Cocycle2 {
    let g = crate::grp::klein4();
    let minus = field.neg(field.one());
    let table: Vec<Vec<FqElem>> = (0..4)
        .map(|x| (0..4).map(|y| if (x >> 1) & 1 == 1 && y & 1 == 1 { minus } else { field.one() }).collect())
        .collect();
    Cocycle2::new(&g, field, &table).expect("Pauli table is a normalized cocycle")
}
