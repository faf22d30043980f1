//! Problem documents, command dispatch and report rendering.
//!
//! A document is one JSON object. Keys: `schema` (must be
//! [`DOCUMENT_SCHEMA`]), `seed`, `field`, `modulus`, `group`, `cocycle`,
//! `cocycle2`, `algebra`, `algebra2`, `module`, `options`. Only the keys a
//! command needs are read.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::coh::{self, ClassCoords, Cocycle2};
use crate::error::{Error, Result};
use crate::ffield::{FieldSpec, FqElem};
use crate::gralg::{self, classify, GradedAlgebra, GradedModule, UngradedModule};
use crate::grend;
use crate::grp::{self, FiniteGroup, GroupHom};
use crate::linalg::Mat;
use crate::mackey::{self, ExtendOutcome};
use crate::selftest;

pub const DOCUMENT_SCHEMA: &str = "gradekit/1";
pub const REPORT_SCHEMA: &str = "gradekit-report/1";

pub const COMMANDS: &[&str] =
    &["h2", "cocycle", "algebra", "module", "obstruction", "extend", "theorem-a", "wedderburn", "correspond", "selftest"];

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    /// The answer is a negative one ("not extendable", "not a cocycle").
    Refuted,
    Undetermined,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub inputs_digest: String,
    pub seed: u64,
    pub status: Status,
    pub results: Value,
    pub certificates: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Refuted => 2,
            _ => 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Structured,
}

/// A parsed JSON document; the typed objects are read on demand.
#[derive(Clone, Debug)]
pub struct Document {
    pub raw: Value,
}

impl Document {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: Value = serde_json::from_str(text)
            .map_err(|e| Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
        let root = Node::root(&raw);
        if !raw.is_object() {
            return Err(Error::parse("$", "document must be an object"));
        }
        let schema = root.get("schema")?;
        if schema.str()? != DOCUMENT_SCHEMA {
            return Err(Error::parse(schema.path, format!("unsupported schema, expected {DOCUMENT_SCHEMA:?}")));
        }
        if let Some(s) = root.opt("seed") {
            s.u64()?;
        }
        Ok(Document { raw })
    }

    pub fn seed(&self) -> Option<u64> {
        self.raw.get("seed").and_then(Value::as_u64)
    }

    /// SHA-256 of the command and the canonical (key-sorted) document.
    pub fn digest(&self, command: &str) -> String {
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        h.update(b"\n");
        h.update(serde_json::to_string(&self.raw).expect("serializable").as_bytes());
        format!("{:x}", h.finalize())
    }

    fn root(&self) -> Node<'_> {
        Node::root(&self.raw)
    }
}

/// Seed precedence: explicit flag, then `GRADEKIT_SEED`, then the document.
pub fn resolve_seed(flag: Option<u64>, doc: &Document) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Ok(v) = std::env::var("GRADEKIT_SEED") {
        return v.trim().parse().map_err(|_| Error::parse("GRADEKIT_SEED", "not an unsigned integer"));
    }
    Ok(doc.seed().unwrap_or(0))
}

// ---------------------------------------------------------------------------
// Path-tracking JSON access

#[derive(Clone)]
struct Node<'a> {
    v: &'a Value,
    path: String,
}

impl<'a> Node<'a> {
    fn root(v: &'a Value) -> Self {
        Node { v, path: "$".into() }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.path.clone(), msg)
    }

    fn opt(&self, key: &str) -> Option<Node<'a>> {
        self.v.get(key).filter(|x| !x.is_null()).map(|v| Node { v, path: format!("{}.{key}", self.path) })
    }

    fn get(&self, key: &str) -> Result<Node<'a>> {
        self.opt(key).ok_or_else(|| self.err(format!("missing key {key:?}")))
    }

    fn arr(&self) -> Result<Vec<Node<'a>>> {
        let a = self.v.as_array().ok_or_else(|| self.err("expected an array"))?;
        Ok(a.iter().enumerate().map(|(i, v)| Node { v, path: format!("{}[{i}]", self.path) }).collect())
    }

    fn str(&self) -> Result<&'a str> {
        self.v.as_str().ok_or_else(|| self.err("expected a string"))
    }

    fn u64(&self) -> Result<u64> {
        self.v.as_u64().ok_or_else(|| self.err("expected an unsigned integer"))
    }

    fn usize(&self) -> Result<usize> {
        Ok(self.u64()? as usize)
    }

    fn elem(&self, f: &FieldSpec) -> Result<FqElem> {
        match self.v {
            Value::Number(n) => n.as_i64().map(|x| f.from_int(x)).ok_or_else(|| self.err("expected an integer")),
            Value::String(s) => f.parse(s).map_err(|_| self.err(format!("{s:?} is not an element of {}", f.name()))),
            _ => self.err_value("expected a field element"),
        }
    }

    fn err_value<T>(&self, msg: &str) -> Result<T> {
        Err(self.err(msg))
    }

    fn group_elem(&self, g: &FiniteGroup) -> Result<usize> {
        match self.v {
            Value::Number(_) => {
                let x = self.usize()?;
                if x >= g.order() {
                    return Err(self.err(format!("element index {x} out of range")));
                }
                Ok(x)
            }
            Value::String(s) => g.find_label(s).ok_or_else(|| self.err(format!("unknown group element {s:?}"))),
            _ => self.err_value("expected a group element (index or label)"),
        }
    }

    /// A rectangular table; errors carry the row and column.
    fn table<T>(&self, rows: usize, cols: usize, mut cell: impl FnMut(&Node<'a>) -> Result<T>) -> Result<Vec<Vec<T>>> {
        let r = self.arr()?;
        if r.len() != rows {
            return Err(self.err(format!("expected {rows} rows, found {}", r.len())));
        }
        let mut out = Vec::with_capacity(rows);
        for (i, row) in r.iter().enumerate() {
            let cells = row.arr()?;
            if cells.len() != cols {
                return Err(Error::parse(format!("{} row {i}", self.path), format!("expected {cols} columns, found {}", cells.len())));
            }
            let mut line = Vec::with_capacity(cols);
            for (j, c) in cells.iter().enumerate() {
                let at = Node { v: c.v, path: format!("{} row {i}, col {j}", self.path) };
                line.push(cell(&at)?);
            }
            out.push(line);
        }
        Ok(out)
    }

    fn matrix(&self, f: &FieldSpec, n: usize) -> Result<Mat> {
        let rows = self.table(n, n, |c| c.elem(f))?;
        Ok(Mat::from_rows(&rows, n))
    }
}

// ---------------------------------------------------------------------------
// Typed readers

fn parse_field(doc: &Document) -> Result<FieldSpec> {
    let root = doc.root();
    let node = root.get("field")?;
    let s = node.str()?.replace(' ', "");
    let inner = s
        .strip_prefix("GF(")
        .and_then(|x| x.strip_suffix(')'))
        .ok_or_else(|| node.err("expected \"GF(p)\" or \"GF(p^k)\""))?;
    let (p, k) = match inner.split_once('^') {
        Some((p, k)) => (p, k),
        None => (inner, "1"),
    };
    let p: u64 = p.parse().map_err(|_| node.err("bad characteristic"))?;
    let k: u32 = k.parse().map_err(|_| node.err("bad degree"))?;
    let modulus = match root.opt("modulus") {
        Some(m) => Some(m.arr()?.iter().map(|c| Ok(c.u64()? as u32)).collect::<Result<Vec<u32>>>()?),
        None => None,
    };
    FieldSpec::new(p, k, modulus.as_deref())
}

fn parse_group(node: &Node) -> Result<FiniteGroup> {
    if let Some(b) = node.opt("builtin") {
        let n = || node.get("n").and_then(|x| x.usize());
        return match b.str()? {
            "trivial" => Ok(grp::trivial()),
            "cyclic" => grp::cyclic(n()?),
            "klein4" => Ok(grp::klein4()),
            "dihedral" => grp::dihedral(n()?),
            "quaternion8" => Ok(grp::quaternion8()),
            "symmetric3" => Ok(grp::symmetric3()),
            other => Err(b.err(format!("unknown builtin group {other:?}"))),
        };
    }
    let labels: Vec<String> = node.get("labels")?.arr()?.iter().map(|l| l.str().map(String::from)).collect::<Result<_>>()?;
    let n = labels.len();
    let table = node.get("table")?.table(n, n, |c| match c.v {
        Value::String(s) => labels.iter().position(|l| l == s).ok_or_else(|| c.err(format!("unknown label {s:?}"))),
        _ => {
            let x = c.usize()?;
            if x >= n {
                return Err(c.err("index out of range"));
            }
            Ok(x)
        }
    })?;
    FiniteGroup::from_table(labels, table)
}

fn doc_group(doc: &Document) -> Result<FiniteGroup> {
    parse_group(&doc.root().get("group")?)
}

fn unit_table(node: &Node, g: &FiniteGroup, f: &FieldSpec) -> Result<Vec<Vec<FqElem>>> {
    let n = g.order();
    node.table(n, n, |c| c.elem(f))
}

/// Cocycle spec; tables are normalized automatically.
fn parse_cocycle(node: &Node, g: &FiniteGroup, f: &FieldSpec) -> Result<Cocycle2> {
    let kind = node.get("type")?;
    match kind.str()? {
        "table" => Ok(Cocycle2::from_table(g, f, &unit_table(&node.get("values")?, g, f)?)?.0),
        "coboundary" => {
            let l = node.get("lambda")?;
            let vals: Vec<FqElem> = l.arr()?.iter().map(|c| c.elem(f)).collect::<Result<_>>()?;
            if vals.len() != g.order() {
                return Err(l.err(format!("expected {} values", g.order())));
            }
            coh::coboundary(g, f, &vals)
        }
        "builtin" => match node.get("name")?.str()? {
            "klein4-pauli" => match grp::iso_search(&grp::klein4(), g)? {
                Some(theta) => coh::klein4_pauli(f).transport(&theta),
                None => Err(node.err("klein4-pauli needs a group isomorphic to klein4")),
            },
            "trivial" => Ok(Cocycle2::trivial(g, f)),
            other => Err(node.err(format!("unknown builtin cocycle {other:?} for this group"))),
        },
        "class" => {
            let h = coh::h2(g, f);
            let c = node.get("coords")?;
            let coords: Vec<u64> = c.arr()?.iter().map(|x| x.u64()).collect::<Result<_>>()?;
            if coords.len() != h.invariant_factors.len() {
                return Err(c.err(format!("expected {} coordinates", h.invariant_factors.len())));
            }
            h.cocycle_for(&ClassCoords(coords))
        }
        other => Err(kind.err(format!("unknown cocycle type {other:?}"))),
    }
}

fn parse_algebra(node: &Node, doc: &Document, f: &FieldSpec) -> Result<GradedAlgebra> {
    let g = match node.opt("group") {
        Some(gn) => parse_group(&gn)?,
        None => doc_group(doc)?,
    };
    let Some(c) = node.opt("construct") else {
        return parse_raw_algebra(node, &g, f);
    };
    match c.str()? {
        "group_algebra" => Ok(gralg::group_algebra(&g, f)),
        "twisted_group_algebra" => Ok(gralg::twisted_group_algebra(&parse_cocycle(&node.get("cocycle")?, &g, f)?)),
        "elementary" => {
            let degs: Vec<usize> = node.get("degrees")?.arr()?.iter().map(|x| x.group_elem(&g)).collect::<Result<_>>()?;
            gralg::elementary_matrix_algebra(f, &g, &degs)
        }
        "quotient_grading" => {
            let inner = parse_algebra(&node.get("of")?, doc, f)?;
            let normal: Vec<usize> =
                node.get("normal")?.arr()?.iter().map(|x| x.group_elem(inner.group())).collect::<Result<_>>()?;
            Ok(gralg::quotient_grading(&inner, &normal)?.0)
        }
        "graded_product" => gralg::graded_product(&parse_algebra(&node.get("left")?, doc, f)?, &parse_algebra(&node.get("right")?, doc, f)?),
        "twist" => {
            let inner = parse_algebra(&node.get("of")?, doc, f)?;
            let alpha = parse_cocycle(&node.get("cocycle")?, inner.group(), f)?;
            gralg::twist_algebra(&alpha, &inner)
        }
        other => Err(c.err(format!("unknown algebra construct {other:?}"))),
    }
}

/// `{"deg": [...], "sc": [[[k, c], ...] for each (i, j) in row-major order], "unit": [...]}`
fn parse_raw_algebra(node: &Node, g: &FiniteGroup, f: &FieldSpec) -> Result<GradedAlgebra> {
    let deg: Vec<usize> = node.get("deg")?.arr()?.iter().map(|x| x.group_elem(g)).collect::<Result<_>>()?;
    let d = deg.len();
    let scn = node.get("sc")?;
    let entries = scn.arr()?;
    if entries.len() != d * d {
        return Err(scn.err(format!("expected {} products", d * d)));
    }
    let mut sc = Vec::with_capacity(d * d);
    for e in &entries {
        let mut terms = Vec::new();
        for t in e.arr()? {
            let pair = t.arr()?;
            if pair.len() != 2 {
                return Err(t.err("expected [index, coefficient]"));
            }
            let k = pair[0].usize()?;
            if k >= d {
                return Err(pair[0].err("basis index out of range"));
            }
            terms.push((k, pair[1].elem(f)?));
        }
        sc.push(terms);
    }
    let un = node.get("unit")?;
    let unit: Vec<FqElem> = un.arr()?.iter().map(|x| x.elem(f)).collect::<Result<_>>()?;
    if unit.len() != d {
        return Err(un.err(format!("expected {d} coordinates")));
    }
    GradedAlgebra::new(f, g, deg, sc, unit)
}

/// A module over the base algebra of `a`.
fn parse_module(node: &Node, a: &GradedAlgebra) -> Result<UngradedModule> {
    let base = a.base_algebra();
    let f = a.field();
    if let Some(c) = node.opt("construct") {
        return match c.str()? {
            "regular" => Ok(UngradedModule::regular(&base)),
            "minimal_ideal" => {
                let (w, _) = grend::minimal_graded_ideal(&base)?;
                UngradedModule::new(&base, w.act)
            }
            "sign" | "character" => {
                // One scalar per base basis element.
                let vals = node.get("values")?;
                let v: Vec<FqElem> = vals.arr()?.iter().map(|x| x.elem(f)).collect::<Result<_>>()?;
                if v.len() != base.dim() {
                    return Err(vals.err(format!("expected {} values", base.dim())));
                }
                UngradedModule::new(&base, v.iter().map(|&x| Mat::from_rows(&[vec![x]], 1)).collect())
            }
            other => Err(c.err(format!("unknown module construct {other:?}"))),
        };
    }
    let actn = node.get("act")?;
    let mats = actn.arr()?;
    if mats.len() != base.dim() {
        return Err(actn.err(format!("expected {} matrices (one per base basis element)", base.dim())));
    }
    let n = mats[0].arr()?.len();
    let act = mats.iter().map(|m| m.matrix(f, n)).collect::<Result<Vec<_>>>()?;
    UngradedModule::new(&base, act).map_err(|e| actn.err(e.to_string()))
}

struct Inputs {
    field: FieldSpec,
    algebra: GradedAlgebra,
    module: UngradedModule,
}

fn algebra_and_module(doc: &Document) -> Result<Inputs> {
    let field = parse_field(doc)?;
    let root = doc.root();
    let algebra = parse_algebra(&root.get("algebra")?, doc, &field)?;
    let module = parse_module(&root.get("module")?, &algebra)?;
    Ok(Inputs { field, algebra, module })
}

fn options<'a>(doc: &'a Document) -> Option<Node<'a>> {
    doc.root().opt("options")
}

fn opt_str<'a>(doc: &'a Document, key: &str, default: &'a str) -> Result<&'a str> {
    match options(doc).and_then(|o| o.opt(key)) {
        Some(n) => n.str(),
        None => Ok(default),
    }
}

// ---------------------------------------------------------------------------
// Rendering helpers

fn fmt_table(f: &FieldSpec, t: &[Vec<FqElem>]) -> Value {
    Value::Array(t.iter().map(|r| Value::Array(r.iter().map(|&c| Value::String(f.format(c))).collect())).collect())
}

fn fmt_vec(f: &FieldSpec, v: &[FqElem]) -> Value {
    Value::Array(v.iter().map(|&c| Value::String(f.format(c))).collect())
}

fn fmt_mat(f: &FieldSpec, m: &Mat) -> Value {
    let rows: Vec<Vec<FqElem>> = (0..m.rows).map(|r| m.row(r).to_vec()).collect();
    fmt_table(f, &rows)
}

fn labels(g: &FiniteGroup, xs: &[usize]) -> Value {
    Value::Array(xs.iter().map(|&x| Value::String(g.label(x).to_string())).collect())
}

fn cocycle_value(c: &Cocycle2) -> Value {
    fmt_table(c.field(), &c.table())
}

fn algebra_summary(a: &GradedAlgebra) -> Value {
    let g = a.group();
    let dims: Map<String, Value> = g.elements().map(|x| (g.label(x).to_string(), json!(a.component(x).len()))).collect();
    json!({
        "dim": a.dim(),
        "group_order": g.order(),
        "degrees": labels(g, a.degrees()),
        "support": labels(g, &a.support()),
        "component_dims": dims,
    })
}

fn classification_value(a: &GradedAlgebra) -> Result<Value> {
    let c = classify(a)?;
    let g = a.group();
    Ok(json!({
        "support": labels(g, &c.support),
        "strong_components": labels(g, &c.strong),
        "invertible_components": labels(g, &c.invertible),
        "strongly_graded": c.is_strongly_graded,
        "crossed_product": c.is_crossed_product,
        "twisted_group_algebra": c.is_twisted_group_algebra,
        "graded_division": c.is_graded_division,
    }))
}

fn module_summary(w: &GradedModule) -> Value {
    let g = w.group();
    let dims: Map<String, Value> = g.elements().map(|x| (g.label(x).to_string(), json!(w.component(x).len()))).collect();
    json!({ "dim": w.dim(), "support": labels(g, &w.support()), "component_dims": dims })
}

// ---------------------------------------------------------------------------
// Dispatch

struct Out {
    status: Status,
    results: Value,
    certificates: Value,
}

impl Out {
    fn ok(results: Value, certificates: Value) -> Self {
        Out { status: Status::Ok, results, certificates }
    }
}

/// Optional cap overrides: `classes` raises the class cap for `theorem-a`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Caps {
    pub classes: Option<u64>,
}

impl Caps {
    /// Parse `key=value[,key=value]`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut caps = Caps::default();
        for part in s.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| Error::parse("--caps", format!("{part:?} is not key=value")))?;
            let v: u64 = v.parse().map_err(|_| Error::parse("--caps", format!("{v:?} is not a number")))?;
            match k {
                "classes" => caps.classes = Some(v),
                _ => return Err(Error::parse("--caps", format!("unknown cap {k:?}"))),
            }
        }
        Ok(caps)
    }
}

pub fn run(command: &str, doc: &Document, seed: u64, caps: Caps) -> Result<Report> {
    let out = match command {
        "h2" => cmd_h2(doc)?,
        "cocycle" => cmd_cocycle(doc)?,
        "algebra" => cmd_algebra(doc)?,
        "module" => cmd_module(doc)?,
        "obstruction" => cmd_obstruction(doc)?,
        "extend" => cmd_extend(doc)?,
        "theorem-a" => cmd_theorem_a(doc, caps)?,
        "wedderburn" => cmd_wedderburn(doc)?,
        "correspond" => cmd_correspond(doc, seed)?,
        "selftest" => cmd_selftest(seed),
        other => return Err(Error::parse("command", format!("unknown command {other:?}"))),
    };
    Ok(Report {
        schema: REPORT_SCHEMA.into(),
        command: command.into(),
        inputs_digest: doc.digest(command),
        seed,
        status: out.status,
        results: out.results,
        certificates: out.certificates,
        timing_ms: None,
    })
}

fn cmd_h2(doc: &Document) -> Result<Out> {
    let f = parse_field(doc)?;
    let g = doc_group(doc)?;
    let h = coh::h2(&g, &f);
    Ok(Out::ok(
        json!({ "field": f.name(), "group_order": g.order(), "order": h.order, "invariant_factors": h.invariant_factors }),
        json!({ "generators": h.generator_cocycles.iter().map(cocycle_value).collect::<Vec<_>>() }),
    ))
}

fn cmd_cocycle(doc: &Document) -> Result<Out> {
    let f = parse_field(doc)?;
    let g = doc_group(doc)?;
    let root = doc.root();
    let op = opt_str(doc, "op", "class")?;
    match op {
        "check" => {
            let node = root.get("cocycle")?;
            let t = unit_table(&node.get("values")?, &g, &f)?;
            match coh::is_cocycle(&g, &f, &t)? {
                None => Ok(Out::ok(json!({ "cocycle": true }), Value::Null)),
                Some((x, y, z)) => Ok(Out {
                    status: Status::Refuted,
                    results: json!({ "cocycle": false }),
                    certificates: json!({ "failing_triple": labels(&g, &[x, y, z]) }),
                }),
            }
        }
        "normalize" => {
            let node = root.get("cocycle")?;
            let t = unit_table(&node.get("values")?, &g, &f)?;
            let (c, lambda) = Cocycle2::from_table(&g, &f, &t)?;
            Ok(Out::ok(json!({ "normalized": cocycle_value(&c) }), json!({ "lambda": fmt_vec(&f, &lambda) })))
        }
        "compare" => {
            let a = parse_cocycle(&root.get("cocycle")?, &g, &f)?;
            let b = parse_cocycle(&root.get("cocycle2")?, &g, &f)?;
            match coh::cohomologous(&a, &b)? {
                Some(l) => Ok(Out::ok(json!({ "cohomologous": true }), json!({ "lambda": fmt_vec(&f, &l) }))),
                None => Ok(Out { status: Status::Refuted, results: json!({ "cohomologous": false }), certificates: Value::Null }),
            }
        }
        "class" => {
            let a = parse_cocycle(&root.get("cocycle")?, &g, &f)?;
            let h = coh::h2(&g, &f);
            let c = h.class_of(&a)?;
            Ok(Out::ok(
                json!({ "class": c.0, "invariant_factors": h.invariant_factors, "class_order": h.class_order(&c) }),
                json!({ "normalized": cocycle_value(&a) }),
            ))
        }
        other => Err(Error::parse("$.options.op", format!("unknown cocycle op {other:?}"))),
    }
}

fn cmd_algebra(doc: &Document) -> Result<Out> {
    let f = parse_field(doc)?;
    let root = doc.root();
    let op = opt_str(doc, "op", "build")?;
    if op == "pullback" {
        return cmd_pullback(doc, &f);
    }
    let a = parse_algebra(&root.get("algebra")?, doc, &f)?;
    match op {
        "build" => Ok(Out::ok(algebra_summary(&a), Value::Null)),
        "classify" => Ok(Out::ok(json!({ "algebra": algebra_summary(&a), "classification": classification_value(&a)? }), Value::Null)),
        "twist" => {
            let alpha = parse_cocycle(&root.get("cocycle")?, a.group(), &f)?;
            let b = gralg::twist_algebra(&alpha, &a)?;
            Ok(Out::ok(
                json!({ "algebra": algebra_summary(&b), "classification": classification_value(&b)?, "same_base": b.base_algebra() == a.base_algebra() }),
                json!({ "cocycle": cocycle_value(&alpha) }),
            ))
        }
        "product" => {
            let b = parse_algebra(&root.get("algebra2")?, doc, &f)?;
            let p = gralg::graded_product(&a, &b)?;
            Ok(Out::ok(json!({ "algebra": algebra_summary(&p), "classification": classification_value(&p)? }), Value::Null))
        }
        "quotient" => {
            let on = options(doc).ok_or_else(|| Error::parse("$", "missing key \"options\""))?.get("normal")?;
            let normal: Vec<usize> = on.arr()?.iter().map(|x| x.group_elem(a.group())).collect::<Result<_>>()?;
            let (q, pi) = gralg::quotient_grading(&a, &normal)?;
            Ok(Out::ok(json!({ "algebra": algebra_summary(&q) }), json!({ "projection": labels(q.group(), &pi.map) })))
        }
        other => Err(Error::parse("$.options.op", format!("unknown algebra op {other:?}"))),
    }
}

/// `options.pullback = {"left": {"group", "map", "cocycle"}, "right": {...}}`,
/// maps given as images of each element in the document group.
fn cmd_pullback(doc: &Document, f: &FieldSpec) -> Result<Out> {
    let g = doc_group(doc)?;
    let pb = options(doc).ok_or_else(|| Error::parse("$", "missing key \"options\""))?.get("pullback")?;
    let side = |key: &str| -> Result<(Cocycle2, GroupHom)> {
        let s = pb.get(key)?;
        let src = parse_group(&s.get("group")?)?;
        let mn = s.get("map")?;
        let map: Vec<usize> = mn.arr()?.iter().map(|x| x.group_elem(&g)).collect::<Result<_>>()?;
        let hom = GroupHom::new(src.clone(), g.clone(), map).map_err(|e| mn.err(e.to_string()))?;
        let c = match s.opt("cocycle") {
            Some(cn) => parse_cocycle(&cn, &src, f)?,
            None => Cocycle2::trivial(&src, f),
        };
        Ok((c, hom))
    };
    let (c, pi) = side("left")?;
    let (c2, pi2) = side("right")?;
    let agrees = gralg::pullback_product_agrees(&c, &pi, &c2, &pi2)?;
    let (pg, _, _) = grp::pullback(&pi, &pi2)?;
    Ok(Out {
        status: if agrees { Status::Ok } else { Status::Refuted },
        results: json!({ "pullback_order": pg.order(), "structure_constants_agree": agrees }),
        certificates: json!({ "pairing": pg.labels() }),
    })
}

fn cmd_module(doc: &Document) -> Result<Out> {
    let inp = algebra_and_module(doc)?;
    let a = &inp.algebra;
    let w = mackey::associated(a, &inp.module)?;
    match opt_str(doc, "op", "associate")? {
        "associate" => {
            let ind = mackey::induced_graded(a, &inp.module)?;
            Ok(Out::ok(
                json!({ "associated": module_summary(&w), "induced": module_summary(&ind), "graded_simple": grend::is_graded_simple(&w)? }),
                Value::Null,
            ))
        }
        "suspend" => {
            let h = options(doc).ok_or_else(|| Error::parse("$", "missing key \"options\""))?.get("h")?.group_elem(a.group())?;
            Ok(Out::ok(json!({ "suspended": module_summary(&gralg::suspend(&w, h)) }), Value::Null))
        }
        "end" => {
            let e = grend::end_graded(&w)?;
            let g = a.group();
            let dims: Map<String, Value> = g.elements().map(|x| (g.label(x).to_string(), json!(e.algebra.component(x).len()))).collect();
            let mut res = json!({ "dim": e.algebra.dim(), "support": labels(g, &e.support()), "component_dims": dims });
            let mut cert = Value::Null;
            if let Ok(ext) = grend::extract_twisted_cocycle(&e) {
                res["twisted_group_algebra"] = json!(true);
                cert = json!({ "cocycle": cocycle_value(&ext.cocycle), "subgroup": labels(g, &ext.support) });
            } else {
                res["twisted_group_algebra"] = json!(false);
            }
            Ok(Out::ok(res, cert))
        }
        "inertia" => {
            let simple = grend::is_graded_simple(&w)?;
            let i = mackey::inertia_of_base(a, &inp.module)?;
            Ok(Out::ok(json!({ "inertia": labels(a.group(), &i), "graded_simple": simple }), Value::Null))
        }
        other => Err(Error::parse("$.options.op", format!("unknown module op {other:?}"))),
    }
}

fn extension_value(f: &FieldSpec, ext: &mackey::Extension) -> Value {
    json!({
        "act": ext.module.act.iter().map(|m| fmt_mat(f, m)).collect::<Vec<_>>(),
        "skew_system": ext.skew.iter().map(|m| fmt_mat(f, m)).collect::<Vec<_>>(),
    })
}

fn cmd_obstruction(doc: &Document) -> Result<Out> {
    let inp = algebra_and_module(doc)?;
    let (a, f) = (&inp.algebra, &inp.field);
    let obs = mackey::obstruction(a, &inp.module)?;
    let g = a.group();
    let outcome = mackey::extend(a, &inp.module)?;
    let mut results = json!({
        "inertia": labels(g, &obs.inertia),
        "invariant": obs.invariant,
        "omega_class": obs.omega_class.0,
        "h2_invariant_factors": obs.h2.invariant_factors,
        "class_order": obs.h2.class_order(&obs.omega_class),
        "omega": cocycle_value(&obs.omega),
    });
    let mut certs = json!({ "end_support": labels(g, &obs.end_algebra.support()) });
    match &outcome {
        ExtendOutcome::Extended(x) => {
            results["extension"] = json!("extended");
            certs["extension"] = extension_value(f, x);
        }
        ExtendOutcome::Refuted(r) => results["extension"] = json!(format!("refuted: {r}")),
        ExtendOutcome::Undetermined(r) => results["extension"] = json!(format!("undetermined: {r}")),
    }
    Ok(Out::ok(results, certs))
}

fn cmd_extend(doc: &Document) -> Result<Out> {
    let inp = algebra_and_module(doc)?;
    Ok(match mackey::extend(&inp.algebra, &inp.module)? {
        ExtendOutcome::Extended(x) => Out::ok(json!({ "extendable": true }), extension_value(&inp.field, &x)),
        ExtendOutcome::Refuted(r) => Out { status: Status::Refuted, results: json!({ "extendable": false, "reason": r }), certificates: Value::Null },
        ExtendOutcome::Undetermined(r) => Out { status: Status::Undetermined, results: json!({ "extendable": null, "reason": r }), certificates: Value::Null },
    })
}

fn cmd_theorem_a(doc: &Document, caps: Caps) -> Result<Out> {
    let inp = algebra_and_module(doc)?;
    let a = &inp.algebra;
    let listed = match options(doc).and_then(|o| o.opt("classes")) {
        Some(n) => Some(
            n.arr()?
                .iter()
                .map(|c| Ok(ClassCoords(c.arr()?.iter().map(|x| x.u64()).collect::<Result<_>>()?)))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => match caps.classes {
            Some(cap) => {
                let h = coh::h2(a.group(), a.field());
                if h.order > cap {
                    return Err(Error::CapExceeded);
                }
                Some(h.all_classes())
            }
            None => None,
        },
    };
    let t = mackey::verify_theorem_a(a, &inp.module, listed.as_deref())?;
    let rows: Vec<Value> = t
        .rows
        .iter()
        .map(|r| json!({ "class": r.class.0, "is_omega": r.is_omega, "outcome": r.outcome, "extended": r.extended, "consistent": r.consistent }))
        .collect();
    Ok(Out {
        status: if t.all_consistent() { Status::Ok } else { Status::Refuted },
        results: json!({ "omega_class": t.omega_class.0, "strongly_graded": t.strongly_graded, "consistent": t.all_consistent(), "table": rows }),
        certificates: Value::Null,
    })
}

fn cmd_wedderburn(doc: &Document) -> Result<Out> {
    let f = parse_field(doc)?;
    let a = parse_algebra(&doc.root().get("algebra")?, doc, &f)?;
    let r = mackey::wedderburn(&a)?;
    let g = a.group();
    Ok(Out::ok(
        json!({
            "decomposition": r.decomposition(),
            "n": r.n,
            "inertia": labels(g, &r.inertia),
            "omega_table": cocycle_value(&r.omega),
            "module_dim": r.module.dim(),
            "basis_degrees": labels(g, &r.basis_degrees),
            "centralizer_dim": r.centralizer_dim,
            "surjective": r.surjective,
            "kernel_dim": r.kernel_dim,
            "graded_simple": r.graded_simple,
        }),
        json!({
            "minimal_ideal": r.minimal_ideal.iter().map(|v| fmt_vec(&f, v)).collect::<Vec<_>>(),
            "isomorphism": r.certificate.as_ref().map(|c| c.iter().map(|v| fmt_vec(&f, v)).collect::<Vec<_>>()),
        }),
    ))
}

fn cmd_correspond(doc: &Document, seed: u64) -> Result<Out> {
    let inp = algebra_and_module(doc)?;
    let a = &inp.algebra;
    let alpha = match doc.root().opt("cocycle") {
        Some(n) => parse_cocycle(&n, a.group(), &inp.field)?,
        None => {
            let obs = mackey::obstruction(a, &inp.module)?;
            if !obs.invariant {
                return Err(Error::CapExceeded);
            }
            Cocycle2::new(a.group(), a.field(), &obs.omega.table())?
        }
    };
    let b = gralg::twist_algebra(&alpha.inverse(), a)?;
    let mtilde = match mackey::extend(&b, &inp.module)? {
        ExtendOutcome::Extended(x) => x.module,
        ExtendOutcome::Refuted(r) | ExtendOutcome::Undetermined(r) => {
            return Ok(Out { status: Status::Refuted, results: json!({ "bijective": false, "reason": r }), certificates: Value::Null })
        }
    };
    let r = mackey::correspondence(a, &inp.module, &alpha, &mtilde, seed)?;
    Ok(Out {
        status: if r.bijective { Status::Ok } else { Status::Refuted },
        results: json!({
            "source_dims": r.source_dims,
            "image_dims": r.image_dims,
            "target_dims": r.target_dims,
            "matching": r.matching,
            "images_simple": r.images_simple,
            "images_above_module": r.images_above_m,
            "bijective": r.bijective,
        }),
        certificates: json!({ "cocycle": cocycle_value(&alpha) }),
    })
}

fn cmd_selftest(seed: u64) -> Out {
    let suites = selftest::run_all(seed);
    let all = suites.iter().all(|s| s.passed);
    Out {
        status: if all { Status::Ok } else { Status::Refuted },
        results: json!({ "all_passed": all, "suites": suites }),
        certificates: Value::Null,
    }
}

// ---------------------------------------------------------------------------
// Rendering

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Structured => serde_json::to_string_pretty(report).expect("serializable") + "\n",
        Format::Human => render_human(report),
    }
}

pub fn parse_report(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(|e| Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string()))
}

/// Structured form of an error, for `--format structured`.
pub fn error_value(e: &Error) -> Value {
    json!({ "schema": REPORT_SCHEMA, "error": { "module": e.module(), "kind": e.kind(), "message": e.to_string() } })
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "none".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_value(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Array(a) if a.is_empty() => writeln!(out, "{pad}{key}: none").unwrap(),
        Value::Object(o) if o.is_empty() => writeln!(out, "{pad}{key}: none").unwrap(),
        Value::Array(a) if a.iter().all(is_scalar) => {
            writeln!(out, "{pad}{key}: [{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", ")).unwrap()
        }
        Value::Array(a) if a.iter().all(|r| r.as_array().is_some_and(|r| r.iter().all(is_scalar))) => {
            writeln!(out, "{pad}{key}:").unwrap();
            for r in a {
                let cells: Vec<String> = r.as_array().unwrap().iter().map(scalar).collect();
                writeln!(out, "{pad}  {}", cells.join(" ")).unwrap();
            }
        }
        Value::Array(a) => {
            writeln!(out, "{pad}{key}:").unwrap();
            for (i, x) in a.iter().enumerate() {
                render_value(out, &format!("[{i}]"), x, indent + 1);
            }
        }
        Value::Object(o) => {
            writeln!(out, "{pad}{key}:").unwrap();
            for (k, x) in o {
                render_value(out, k, x, indent + 1);
            }
        }
        s => writeln!(out, "{pad}{key}: {}", scalar(s)).unwrap(),
    }
}

fn render_human(r: &Report) -> String {
    let mut out = String::new();
    writeln!(out, "command: {}", r.command).unwrap();
    writeln!(out, "status: {}", serde_json::to_value(r.status).unwrap().as_str().unwrap()).unwrap();
    writeln!(out, "seed: {}", r.seed).unwrap();
    writeln!(out, "inputs: {}", r.inputs_digest).unwrap();
    if let Some(t) = r.timing_ms {
        writeln!(out, "timing_ms: {t}").unwrap();
    }
    if let Some(d) = r.results.get("decomposition").and_then(Value::as_str) {
        writeln!(out, "{d}").unwrap();
    }
    render_value(&mut out, "results", &r.results, 0);
    render_value(&mut out, "certificates", &r.certificates, 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(s: &str) -> Document {
        Document::parse(s).unwrap()
    }

    #[test]
    fn h2_klein4() {
        let d = doc(r#"{"schema":"gradekit/1","field":"GF(5)","group":{"builtin":"klein4"}}"#);
        let r = run("h2", &d, 0, Caps::default()).unwrap();
        assert_eq!(r.results["order"], json!(8));
        assert_eq!(parse_report(&render(&r, Format::Structured)).unwrap(), r);
    }

    #[test]
    fn malformed_table_reports_row_and_col() {
        let d = doc(
            r#"{"schema":"gradekit/1","field":"GF(3)","group":{"builtin":"cyclic","n":2},
                "cocycle":{"type":"table","values":[[1,1],[1,"y"]]},"options":{"op":"class"}}"#,
        );
        match run("cocycle", &d, 0, Caps::default()) {
            Err(Error::ParseError { at, .. }) => assert!(at.contains("row 1, col 1"), "{at}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_renders_none() {
        let d = doc(r#"{"schema":"gradekit/1","field":"GF(5)","group":{"builtin":"klein4"}}"#);
        let mut r = run("h2", &d, 0, Caps::default()).unwrap();
        r.certificates = Value::Null;
        assert!(render(&r, Format::Human).contains("certificates: none"));
    }
}
