//! Brute-force oracles shared by the integration tests. They use only group
//! tables, field arithmetic and matrix products, never the library's
//! cohomology or extension machinery.

#![allow(dead_code)]

use std::collections::HashSet;

use gradekit::ffield::{FieldSpec, FqElem};
use gradekit::gralg::{GradedAlgebra, UngradedModule};
use gradekit::grp::FiniteGroup;
use gradekit::linalg::Mat;

/// Order and invariant factors of Z²/B² with coefficients in Z/m, from the
/// list of normalized cocycles (as log tables over the non-identity pairs).
pub struct H2Oracle {
    pub cocycles: usize,
    pub coboundaries: usize,
    pub order: u64,
    pub invariant_factors: Vec<u64>,
}

fn nonid(g: &FiniteGroup) -> Vec<usize> {
    g.elements().filter(|&x| x != g.identity()).collect()
}

/// Value of a normalized log table at (x, y); `pos` maps non-identity
/// elements to 0..n-1.
fn at(t: &[u64], pos: &[usize], n1: usize, e: usize, x: usize, y: usize) -> u64 {
    if x == e || y == e {
        0
    } else {
        t[pos[x] * n1 + pos[y]]
    }
}

fn is_cocycle_log(g: &FiniteGroup, m: u64, t: &[u64], pos: &[usize]) -> bool {
    let e = g.identity();
    let n1 = g.order() - 1;
    for x in g.elements() {
        for y in g.elements() {
            for z in g.elements() {
                let l = at(t, pos, n1, e, x, y) + at(t, pos, n1, e, g.mul(x, y), z);
                let r = at(t, pos, n1, e, y, z) + at(t, pos, n1, e, x, g.mul(y, z));
                if l % m != r % m {
                    return false;
                }
            }
        }
    }
    true
}

fn positions(g: &FiniteGroup) -> Vec<usize> {
    let mut pos = vec![usize::MAX; g.order()];
    for (i, x) in nonid(g).into_iter().enumerate() {
        pos[x] = i;
    }
    pos
}

/// All normalized coboundaries δλ, λ(e) = 0.
fn coboundaries(g: &FiniteGroup, m: u64) -> HashSet<Vec<u64>> {
    let ne = nonid(g);
    let n1 = ne.len();
    let mut out = HashSet::new();
    let mut lam = vec![0u64; g.order()];
    let total = m.pow(n1 as u32);
    for code in 0..total {
        let mut c = code;
        for &x in &ne {
            lam[x] = c % m;
            c /= m;
        }
        let mut t = vec![0u64; n1 * n1];
        for (i, &x) in ne.iter().enumerate() {
            for (j, &y) in ne.iter().enumerate() {
                t[i * n1 + j] = (lam[x] + lam[y] + m - lam[g.mul(x, y)]) % m;
            }
        }
        out.insert(t);
    }
    out
}

/// Every normalized table is tested, as in the exhaustive definition.
pub fn h2_exhaustive(g: &FiniteGroup, m: u64) -> H2Oracle {
    let pos = positions(g);
    let n1 = g.order() - 1;
    let cells = n1 * n1;
    let total = m.pow(cells as u32);
    let mut cocycles = Vec::new();
    let mut t = vec![0u64; cells];
    for code in 0..total {
        let mut c = code;
        for v in t.iter_mut() {
            *v = c % m;
            c /= m;
        }
        if is_cocycle_log(g, m, &t, &pos) {
            cocycles.push(t.clone());
        }
    }
    finish(g, m, cocycles)
}

/// Same count by backtracking: a triple's identity is checked as soon as the
/// last of its four cells is assigned.
pub fn h2_backtrack(g: &FiniteGroup, m: u64) -> H2Oracle {
    let pos = positions(g);
    let e = g.identity();
    let n1 = g.order() - 1;
    let cells = n1 * n1;
    let cell = |x: usize, y: usize| if x == e || y == e { None } else { Some(pos[x] * n1 + pos[y]) };
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); cells];
    for x in g.elements() {
        for y in g.elements() {
            for z in g.elements() {
                let used = [cell(x, y), cell(g.mul(x, y), z), cell(y, z), cell(x, g.mul(y, z))];
                if let Some(last) = used.iter().flatten().max() {
                    checks[*last].push((x, y, z));
                }
            }
        }
    }
    let mut cocycles = Vec::new();
    let mut t = vec![0u64; cells];
    fn rec(
        i: usize,
        t: &mut Vec<u64>,
        g: &FiniteGroup,
        m: u64,
        pos: &[usize],
        checks: &[Vec<(usize, usize, usize)>],
        out: &mut Vec<Vec<u64>>,
    ) {
        if i == t.len() {
            out.push(t.clone());
            return;
        }
        let e = g.identity();
        let n1 = g.order() - 1;
        for v in 0..m {
            t[i] = v;
            let ok = checks[i].iter().all(|&(x, y, z)| {
                let l = at(t, pos, n1, e, x, y) + at(t, pos, n1, e, g.mul(x, y), z);
                let r = at(t, pos, n1, e, y, z) + at(t, pos, n1, e, x, g.mul(y, z));
                l % m == r % m
            });
            if ok {
                rec(i + 1, t, g, m, pos, checks, out);
            }
        }
        t[i] = 0;
    }
    rec(0, &mut t, g, m, &pos, &checks, &mut cocycles);
    finish(g, m, cocycles)
}

fn finish(g: &FiniteGroup, m: u64, cocycles: Vec<Vec<u64>>) -> H2Oracle {
    let b = coboundaries(g, m);
    let order = (cocycles.len() / b.len()) as u64;
    // For each d | order, count classes killed by d.
    let mut killed = std::collections::BTreeMap::new();
    for d in (1..=order).filter(|d| order % d == 0) {
        let mut count = 0usize;
        for z in &cocycles {
            let dz: Vec<u64> = z.iter().map(|&v| (v * d) % m).collect();
            if b.contains(&dz) {
                count += 1;
            }
        }
        killed.insert(d, (count / b.len()) as u64);
    }
    let invariant_factors = matching_factors(order, &killed);
    H2Oracle { cocycles: cocycles.len(), coboundaries: b.len(), order, invariant_factors }
}

/// The unique chain d1 | d2 | ... (all > 1) with product `order` whose
/// d-torsion counts match.
fn matching_factors(order: u64, killed: &std::collections::BTreeMap<u64, u64>) -> Vec<u64> {
    fn chains(n: u64, min: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 1 {
            out.push(acc.clone());
            return;
        }
        for d in (2..=n).filter(|d| n % d == 0 && d % min == 0) {
            acc.push(d);
            chains(n / d, d, acc, out);
            acc.pop();
        }
    }
    let mut all = Vec::new();
    chains(order, 1, &mut Vec::new(), &mut all);
    let gcd = |mut a: u64, mut b: u64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let hits: Vec<Vec<u64>> = all
        .into_iter()
        .filter(|c| killed.iter().all(|(&d, &k)| c.iter().map(|&x| gcd(d, x)).product::<u64>() == k))
        .collect();
    assert_eq!(hits.len(), 1, "torsion counts determine the group");
    hits[0].clone()
}

/// Search every assignment of matrices to the non-base basis elements for an
/// A-module structure on M extending the given A_e-action.
pub fn extension_exists(a: &GradedAlgebra, m: &UngradedModule) -> bool {
    let f = a.field();
    let k = m.dim();
    let d = a.dim();
    let base = a.base_indices();
    let free: Vec<usize> = (0..d).filter(|i| !base.contains(i)).collect();
    let q = f.q() as u64;
    let per = k * k;
    let total = q.checked_pow((per * free.len()) as u32).expect("search space fits");
    assert!(total <= 1 << 22, "oracle search space too large");
    let mut act: Vec<Mat> = vec![Mat::zeros(k, k); d];
    for (p, &i) in base.iter().enumerate() {
        act[i] = m.act[p].clone();
    }
    for code in 0..total {
        let mut c = code;
        for &i in &free {
            for r in 0..k {
                for s in 0..k {
                    act[i].set(r, s, FqElem((c % q) as u32));
                    c /= q;
                }
            }
        }
        if module_law(f, a, &act) {
            return true;
        }
    }
    false
}

fn module_law(f: &FieldSpec, a: &GradedAlgebra, act: &[Mat]) -> bool {
    let d = a.dim();
    let k = act[0].rows;
    let mut unit = Mat::zeros(k, k);
    for (i, &c) in a.unit().iter().enumerate() {
        unit.axpy(f, c, &act[i]);
    }
    if unit != Mat::identity(k) {
        return false;
    }
    for i in 0..d {
        for j in 0..d {
            let mut want = Mat::zeros(k, k);
            for &(l, c) in a.basis_mul(i, j) {
                want.axpy(f, c, &act[l]);
            }
            if act[i].mul(f, &act[j]) != want {
                return false;
            }
        }
    }
    true
}

/// Inertia of a linear character χ of N in Γ: {g : χ(g⁻¹ n g) = χ(n) for all n}.
pub fn character_inertia(gamma: &FiniteGroup, normal: &[usize], chi: &dyn Fn(usize) -> u32) -> Vec<usize> {
    gamma
        .elements()
        .filter(|&g| normal.iter().all(|&n| chi(gamma.mul(gamma.inv(g), gamma.mul(n, g))) == chi(n)))
        .collect()
}
