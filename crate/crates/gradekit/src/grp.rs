//! Finite groups as explicit multiplication tables (order ≤ 64).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 64;
pub const MAX_ISO_ORDER: usize = 16;

#[derive(Debug, PartialEq, Eq)]
struct GroupData {
    labels: Vec<String>,
    table: Vec<usize>,
    e: usize,
    inv: Vec<usize>,
}

/// A validated finite group. Cheap to clone.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup(Arc<GroupData>);

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group[{}]", self.0.labels.join(","))
    }
}

/// A homomorphism between two groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub source: FiniteGroup,
    pub target: FiniteGroup,
    pub map: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: FiniteGroup, target: FiniteGroup, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.order() || map.iter().any(|&x| x >= target.order()) {
            return Err(Error::NotAHomomorphism);
        }
        for x in source.elements() {
            for y in source.elements() {
                if map[source.mul(x, y)] != target.mul(map[x], map[y]) {
                    return Err(Error::NotAHomomorphism);
                }
            }
        }
        Ok(GroupHom { source, target, map })
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), map: g.elements().collect() }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_surjective(&self) -> bool {
        let img: BTreeSet<usize> = self.map.iter().copied().collect();
        img.len() == self.target.order()
    }

    pub fn is_injective(&self) -> bool {
        let img: BTreeSet<usize> = self.map.iter().copied().collect();
        img.len() == self.source.order()
    }

    pub fn kernel(&self) -> Vec<usize> {
        let e = self.target.identity();
        self.source.elements().filter(|&x| self.map[x] == e).collect()
    }

    pub fn compose(&self, after: &GroupHom) -> GroupHom {
        GroupHom {
            source: self.source.clone(),
            target: after.target.clone(),
            map: self.map.iter().map(|&x| after.map[x]).collect(),
        }
    }
}

impl FiniteGroup {
    /// Validate a multiplication table: Latin square, identity, associativity.
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NoIdentity);
        }
        if n > MAX_ORDER {
            return Err(Error::OrderTooLarge(n));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotLatinSquare(i));
            }
            if row.iter().any(|&x| x >= n) {
                return Err(Error::NotLatinSquare(i));
            }
        }
        for i in 0..n {
            let mut seen_r = vec![false; n];
            let mut seen_c = vec![false; n];
            for j in 0..n {
                if std::mem::replace(&mut seen_r[table[i][j]], true) {
                    return Err(Error::NotLatinSquare(i));
                }
                if std::mem::replace(&mut seen_c[table[j][i]], true) {
                    return Err(Error::NotLatinSquare(i));
                }
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(Error::NoIdentity)?;
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let inv = (0..n).map(|a| (0..n).find(|&b| table[a][b] == e).expect("Latin square")).collect();
        let labels = if labels.len() == n { labels } else { (0..n).map(|i| i.to_string()).collect() };
        Ok(FiniteGroup(Arc::new(GroupData { labels, table: table.concat(), e, inv })))
    }

    fn from_mul(labels: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let n = labels.len();
        if n > MAX_ORDER {
            return Err(Error::OrderTooLarge(n));
        }
        let table = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
        Self::from_table(labels, table)
    }

    pub fn order(&self) -> usize {
        self.0.labels.len()
    }

    pub fn identity(&self) -> usize {
        self.0.e
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.table[a * self.order() + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.0.inv[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.0.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect()
    }

    pub fn find_label(&self, s: &str) -> Option<usize> {
        self.0.labels.iter().position(|l| l == s)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.0.e {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        self.elements().filter(|&a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a))).collect()
    }

    /// `g x g⁻¹`.
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Closure of a set of elements, sorted ascending.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([self.0.e]);
        let mut frontier: Vec<usize> = vec![self.0.e];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        set.contains(&self.0.e) && elems.iter().all(|&a| elems.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    pub fn is_normal(&self, elems: &[usize]) -> bool {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        self.elements().all(|g| elems.iter().all(|&n| set.contains(&self.conj(g, n))))
    }

    /// Subgroup on a closed, sorted element set, with its embedding.
    pub fn subgroup_on(&self, elems: &[usize]) -> (FiniteGroup, GroupHom) {
        let idx = |x: usize| elems.binary_search(&x).expect("closed subset");
        let labels = elems.iter().map(|&x| self.label(x).to_string()).collect();
        let sub = FiniteGroup::from_mul(labels, |a, b| idx(self.mul(elems[a], elems[b])))
            .expect("closure of a subgroup is a group");
        let emb = GroupHom { source: sub.clone(), target: self.clone(), map: elems.to_vec() };
        (sub, emb)
    }

    /// Subgroup generated by `gens`; elements keep ascending parent order.
    pub fn subgroup(&self, gens: &[usize]) -> Result<(FiniteGroup, GroupHom)> {
        if let Some(&g) = gens.iter().find(|&&g| g >= self.order()) {
            return Err(Error::BadElement(g));
        }
        Ok(self.subgroup_on(&self.closure(gens)))
    }

    /// Quotient by the normal subgroup generated by `normal`. Cosets are ordered
    /// and labelled by their smallest element.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FiniteGroup, GroupHom)> {
        if let Some(&g) = normal.iter().find(|&&g| g >= self.order()) {
            return Err(Error::BadElement(g));
        }
        let n_set = self.closure(normal);
        if !self.is_normal(&n_set) {
            return Err(Error::NotNormal);
        }
        let mut rep_of = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for g in self.elements() {
            if rep_of[g] != usize::MAX {
                continue;
            }
            let k = reps.len();
            reps.push(g);
            for &x in &n_set {
                rep_of[self.mul(g, x)] = k;
            }
        }
        let labels = if reps.len() == 1 {
            vec!["e".to_string()]
        } else {
            reps.iter().map(|&r| format!("[{}]", self.label(r))).collect()
        };
        let quo = FiniteGroup::from_mul(labels, |a, b| rep_of[self.mul(reps[a], reps[b])])?;
        let proj = GroupHom { source: self.clone(), target: quo.clone(), map: rep_of };
        Ok((quo, proj))
    }

    /// Permutation x ↦ g x g⁻¹.
    pub fn inner_aut(&self, g: usize) -> Vec<usize> {
        self.elements().map(|x| self.conj(g, x)).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }
}

// ---------------------------------------------------------------------------
// Builtins. Element orderings:
//   cyclic(n):       a^i at index i, labels "e", "a", "a^2", ...
//   klein4:          a^i b^j at index i + 2j, labels e, a, b, ab
//   dihedral(n):     r^i s^j at index i + n j (order 2n), s r s = r^-1
//   quaternion8:     1, -1, i, -i, j, -j, k, -k
//   symmetric(3):    permutations of {1,2,3} in lexicographic order of images
//   direct(G, H):    (g, h) at index g + |G| h

pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::NoIdentity);
    }
    if n > MAX_ORDER {
        return Err(Error::OrderTooLarge(n));
    }
    let labels = (0..n)
        .map(|i| match i {
            0 => "e".to_string(),
            1 => "a".to_string(),
            _ => format!("a^{i}"),
        })
        .collect();
    FiniteGroup::from_mul(labels, |a, b| (a + b) % n)
}

pub fn klein4() -> FiniteGroup {
    let labels = ["e", "a", "b", "ab"].iter().map(|s| s.to_string()).collect();
    FiniteGroup::from_mul(labels, |x, y| x ^ y).expect("klein four-group")
}

pub fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::NoIdentity);
    }
    if 2 * n > MAX_ORDER {
        return Err(Error::OrderTooLarge(2 * n));
    }
    let labels = (0..2 * n)
        .map(|x| {
            let (i, j) = (x % n, x / n);
            let r = match i {
                0 => String::new(),
                1 => "r".to_string(),
                _ => format!("r^{i}"),
            };
            match (r.is_empty(), j) {
                (true, 0) => "e".to_string(),
                (false, 0) => r,
                (_, _) => format!("{r}s"),
            }
        })
        .collect();
    // (r^i s^j)(r^k s^l) = r^{i + (-1)^j k} s^{j+l}
    FiniteGroup::from_mul(labels, |x, y| {
        let (i, j, k, l) = (x % n, x / n, y % n, y / n);
        let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
        rot + n * ((j + l) % 2)
    })
}

pub fn quaternion8() -> FiniteGroup {
    let labels: Vec<String> = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].iter().map(|s| s.to_string()).collect();
    // Index 2u + s encodes (-1)^s · u with u ∈ {1, i, j, k}.
    let unit_mul = |u: usize, v: usize| -> (usize, usize) {
        match (u, v) {
            (0, x) | (x, 0) => (x, 0),
            (a, b) if a == b => (0, 1),
            (1, 2) => (3, 0),
            (2, 3) => (1, 0),
            (3, 1) => (2, 0),
            (2, 1) => (3, 1),
            (3, 2) => (1, 1),
            (1, 3) => (2, 1),
            _ => unreachable!(),
        }
    };
    FiniteGroup::from_mul(labels, |x, y| {
        let (u, s) = (x / 2, x % 2);
        let (v, t) = (y / 2, y % 2);
        let (w, sign) = unit_mul(u, v);
        2 * w + (s + t + sign) % 2
    })
    .expect("quaternion group")
}

pub fn symmetric3() -> FiniteGroup {
    let perms: Vec<[usize; 3]> =
        vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let labels = perms
        .iter()
        .map(|p| if *p == [0, 1, 2] { "e".to_string() } else { format!("[{}{}{}]", p[0] + 1, p[1] + 1, p[2] + 1) })
        .collect();
    // (σ τ)(x) = σ(τ(x)).
    FiniteGroup::from_mul(labels, |a, b| {
        let (s, t) = (perms[a], perms[b]);
        let c = [s[t[0]], s[t[1]], s[t[2]]];
        perms.iter().position(|p| *p == c).expect("closed")
    })
    .expect("symmetric group")
}

pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
    let (m, n) = (g.order(), h.order());
    if m * n > MAX_ORDER {
        return Err(Error::OrderTooLarge(m * n));
    }
    let labels = (0..m * n).map(|x| format!("({},{})", g.label(x % m), h.label(x / m))).collect();
    FiniteGroup::from_mul(labels, |x, y| g.mul(x % m, y % m) + m * h.mul(x / m, y / m))
}

pub fn trivial() -> FiniteGroup {
    cyclic(1).expect("trivial group")
}

/// The pullback Γ ×_G Γ′ with both coordinate projections. Elements are pairs
/// ordered lexicographically by (γ, γ′).
pub fn pullback(pi: &GroupHom, pi2: &GroupHom) -> Result<(FiniteGroup, GroupHom, GroupHom)> {
    if pi.target != pi2.target {
        return Err(Error::TargetMismatch);
    }
    if !pi.is_surjective() || !pi2.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let (a, b) = (&pi.source, &pi2.source);
    let pairs: Vec<(usize, usize)> = a
        .elements()
        .flat_map(|x| b.elements().map(move |y| (x, y)))
        .filter(|&(x, y)| pi.map[x] == pi2.map[y])
        .collect();
    if pairs.len() > MAX_ORDER {
        return Err(Error::OrderTooLarge(pairs.len()));
    }
    let idx = |p: (usize, usize)| pairs.binary_search(&p).expect("pullback is closed");
    let labels = pairs.iter().map(|&(x, y)| format!("({},{})", a.label(x), b.label(y))).collect();
    let grp = FiniteGroup::from_mul(labels, |s, t| {
        let (p, q) = (pairs[s], pairs[t]);
        idx((a.mul(p.0, q.0), b.mul(p.1, q.1)))
    })?;
    let pr1 = GroupHom { source: grp.clone(), target: a.clone(), map: pairs.iter().map(|p| p.0).collect() };
    let pr2 = GroupHom { source: grp.clone(), target: b.clone(), map: pairs.iter().map(|p| p.1).collect() };
    Ok((grp, pr1, pr2))
}

/// A small generating set chosen greedily in index order.
pub fn generators(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = g.closure(&[]);
    // Prefer high-order elements first: fewer generators, smaller search.
    let mut cands: Vec<usize> = g.elements().collect();
    cands.sort_by_key(|&x| (std::cmp::Reverse(g.element_order(x)), x));
    for x in cands {
        if span.len() == g.order() {
            break;
        }
        if span.binary_search(&x).is_err() {
            gens.push(x);
            span = g.closure(&gens);
        }
    }
    gens
}

/// Backtracking isomorphism search over images of a generating set.
pub fn iso_search(g: &FiniteGroup, h: &FiniteGroup) -> Result<Option<GroupHom>> {
    if g.order() > MAX_ISO_ORDER || h.order() > MAX_ISO_ORDER {
        return Err(Error::OrderTooLargeForIsoSearch(g.order().max(h.order())));
    }
    if g.order() != h.order() {
        return Ok(None);
    }
    let mut og: Vec<usize> = g.elements().map(|x| g.element_order(x)).collect();
    let mut oh: Vec<usize> = h.elements().map(|x| h.element_order(x)).collect();
    og.sort_unstable();
    oh.sort_unstable();
    if og != oh {
        return Ok(None);
    }
    let gens = generators(g);
    let mut images = Vec::new();
    Ok(iso_rec(g, h, &gens, &mut images))
}

fn extend_by_words(g: &FiniteGroup, h: &FiniteGroup, gens: &[usize], imgs: &[usize]) -> Option<Vec<usize>> {
    let n = g.order();
    let mut map = vec![usize::MAX; n];
    map[g.identity()] = h.identity();
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for (&s, &t) in gens.iter().zip(imgs) {
            let y = g.mul(x, s);
            let img = h.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = img;
                frontier.push(y);
            } else if map[y] != img {
                return None;
            }
        }
    }
    Some(map)
}

fn iso_rec(g: &FiniteGroup, h: &FiniteGroup, gens: &[usize], imgs: &mut Vec<usize>) -> Option<GroupHom> {
    if imgs.len() == gens.len() {
        let map = extend_by_words(g, h, gens, imgs)?;
        if map.iter().any(|&x| x == usize::MAX) {
            return None;
        }
        let hom = GroupHom::new(g.clone(), h.clone(), map).ok()?;
        return hom.is_injective().then_some(hom);
    }
    let want = g.element_order(gens[imgs.len()]);
    for t in h.elements().filter(|&t| h.element_order(t) == want) {
        imgs.push(t);
        if let Some(hom) = iso_rec(g, h, gens, imgs) {
            return Some(hom);
        }
        imgs.pop();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn broken_table_is_rejected() {
        let bad = vec![vec![0, 1], vec![0, 1]];
        assert!(matches!(FiniteGroup::from_table(vec![], bad), Err(Error::NotLatinSquare(_))));
    }

    #[test]
    fn quaternion_relations() {
        let q = quaternion8();
        let (m1, i, j, k) = (1, 2, 4, 6);
        assert_eq!(q.mul(i, i), m1);
        assert_eq!(q.mul(j, j), m1);
        assert_eq!(q.mul(k, k), m1);
        assert_eq!(q.mul(q.mul(i, j), k), m1);
        assert_eq!(q.center(), vec![0, 1]);
    }

    #[test]
    fn quaternion_conjugation_by_i() {
        let q = quaternion8();
        let perm = q.inner_aut(2);
        assert_eq!(perm, vec![0, 1, 2, 3, 5, 4, 7, 6]);
    }

    #[test]
    fn quotient_labels_use_smallest_representative() {
        let z4 = cyclic(4).unwrap();
        let (q, proj) = z4.quotient(&[0, 2]).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(q.labels(), &["[e]".to_string(), "[a]".to_string()]);
        assert_eq!(proj.kernel(), vec![0, 2]);
        let (t, _) = z4.quotient(&[1]).unwrap();
        assert!(t.is_trivial());
        let s3 = symmetric3();
        assert_eq!(s3.quotient(&[1]).unwrap_err(), Error::NotNormal);
    }

    #[test]
    fn pullback_of_identity_is_diagonal() {
        let z2 = cyclic(2).unwrap();
        let id = GroupHom::identity(&z2);
        let (p, pr1, pr2) = pullback(&id, &id).unwrap();
        assert_eq!(p.order(), 2);
        assert_eq!(pr1.map, pr2.map);
    }

    #[test]
    fn iso_search_examples() {
        let z4 = cyclic(4).unwrap();
        assert!(iso_search(&z4, &klein4()).unwrap().is_none());
        let q = quaternion8();
        let (quo, _) = q.quotient(&[1]).unwrap();
        assert!(iso_search(&quo, &klein4()).unwrap().is_some());
        let id = iso_search(&q, &q).unwrap().unwrap();
        assert!(id.is_injective());
        assert!(matches!(iso_search(&cyclic(17).unwrap(), &cyclic(17).unwrap()), Err(Error::OrderTooLargeForIsoSearch(17))));
    }

    #[test]
    fn direct_square_of_z2_is_klein() {
        let z2 = cyclic(2).unwrap();
        let v = direct_product(&z2, &z2).unwrap();
        assert!(iso_search(&v, &klein4()).unwrap().is_some());
        assert_eq!(v.table(), klein4().table());
    }
}
