//! JSON documents: one tagged value per file, rationals as `"p/q"` strings.
//!
//! Matrices are arrays of rows. Their shapes always follow from dimensions
//! stored next to them, so `[]` is a fine `0 × n` matrix and a `3 × 0` one is
//! `[[], [], []]`. Differentials, components and edges that are left out are
//! zero.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::chain::{ChainComplex, ChainHomotopy, ChainMap};
use crate::doldkan::SimplicialVS;
use crate::exactlin::{format_rational, parse_rational, Matrix, Rational};
use crate::koszul::FdAlgebra;
use crate::laxmat::{Delta1ChainMatrix, FinPoset, IntMatrix};
use crate::multicplx::MultiComplex;
use crate::perverse::{EncodingKind, LocalStar, PervCube, PervDisk, PervFlag, SheafEncoding};
use crate::simplex::{CatCochain2, Cc2Level0, Cc2Level1};
use crate::{Error, Report, Result, Violation};

pub const DEFAULT_MAX_DIM: usize = 512;
pub const MAX_DIM_VAR: &str = "CATCX_MAX_DIM";

/// Input for the Koszul complex `K(λ_0, …)` over `algebra`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulData {
    pub algebra: FdAlgebra,
    pub lambdas: Vec<Vec<Rational>>,
}

/// Free-form output of a command. `fields` keep their order.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultDoc {
    pub command: String,
    pub fields: Map<String, Value>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    ChainComplex(ChainComplex),
    ChainMap(ChainMap),
    ChainHomotopy(ChainHomotopy),
    MultiComplex(MultiComplex),
    FdAlgebra(FdAlgebra),
    Koszul(KoszulData),
    PervDisk(PervDisk),
    PervFlag(PervFlag),
    PervCube(PervCube),
    LocalStar(LocalStar),
    SheafEncoding(SheafEncoding),
    FinPoset(FinPoset),
    IntMatrix(IntMatrix),
    Delta1ChainMatrix(Delta1ChainMatrix),
    /// An object of the arrow category; kept as a bare map so that invalid
    /// arrows can still be loaded and reported on.
    Arrow(ChainMap),
    SimplicialVS(SimplicialVS),
    CatCochain2(CatCochain2),
    Report(Report),
    Result(ResultDoc),
}

impl Document {
    pub fn type_tag(&self) -> &'static str {
        match self {
            Document::ChainComplex(_) => "chain_complex",
            Document::ChainMap(_) => "chain_map",
            Document::ChainHomotopy(_) => "chain_homotopy",
            Document::MultiComplex(_) => "multicomplex",
            Document::FdAlgebra(_) => "fd_algebra",
            Document::Koszul(_) => "koszul_data",
            Document::PervDisk(_) => "perv_disk",
            Document::PervFlag(_) => "perv_flag",
            Document::PervCube(_) => "perv_cube",
            Document::LocalStar(_) => "local_star",
            Document::SheafEncoding(_) => "sheaf_encoding",
            Document::FinPoset(_) => "fin_poset",
            Document::IntMatrix(_) => "int_matrix",
            Document::Delta1ChainMatrix(_) => "delta1_chain_matrix",
            Document::Arrow(_) => "arrow",
            Document::SimplicialVS(_) => "simplicial_vs",
            Document::CatCochain2(_) => "cat_cochain2",
            Document::Report(_) => "report",
            Document::Result(_) => "result",
        }
    }
}

pub const TYPE_TAGS: &[&str] = &[
    "chain_complex",
    "chain_map",
    "chain_homotopy",
    "multicomplex",
    "fd_algebra",
    "koszul_data",
    "perv_disk",
    "perv_flag",
    "perv_cube",
    "local_star",
    "sheaf_encoding",
    "fin_poset",
    "int_matrix",
    "delta1_chain_matrix",
    "arrow",
    "simplicial_vs",
    "cat_cochain2",
    "report",
    "result",
];

// ---------------------------------------------------------------------------
// Serialization

pub fn rational_value(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

pub fn vector_value(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_value).collect())
}

pub fn matrix_value(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_value(m.row(i))).collect())
}

/// A matrix that carries its own shape, for places without context.
pub fn sized_matrix_value(m: &Matrix) -> Value {
    json!({"rows": m.rows(), "cols": m.cols(), "entries": matrix_value(m)})
}

fn degree_map<'a>(items: impl Iterator<Item = (i64, &'a Matrix)>) -> Value {
    Value::Object(items.map(|(k, m)| (k.to_string(), matrix_value(m))).collect())
}

pub fn complex_value(c: &ChainComplex) -> Value {
    json!({
        "type": "chain_complex",
        "lo": c.lo(),
        "hi": c.hi(),
        "dims": c.dims(),
        "differentials": degree_map(c.differentials()),
    })
}

pub fn map_value(f: &ChainMap) -> Value {
    json!({
        "type": "chain_map",
        "source": complex_value(f.source()),
        "target": complex_value(f.target()),
        "components": degree_map(f.components()),
    })
}

pub fn homotopy_value(h: &ChainHomotopy) -> Value {
    json!({
        "type": "chain_homotopy",
        "source": complex_value(h.source()),
        "target": complex_value(h.target()),
        "components": degree_map(h.components()),
    })
}

pub fn report_value(r: &Report) -> Value {
    let violations: Vec<Value> = r
        .violations
        .iter()
        .map(|v| {
            json!({
                "code": v.code,
                "at": v.at,
                "detail": v.detail,
                "witness": v.witness.as_ref().map_or(Value::Null, sized_matrix_value),
            })
        })
        .collect();
    json!({"type": "report", "valid": r.is_valid(), "violations": violations})
}

pub fn int_matrix_value(m: &IntMatrix) -> Value {
    let rows: Vec<Vec<i64>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
        .collect();
    json!({"type": "int_matrix", "rows": m.rows(), "cols": m.cols(), "entries": rows})
}

fn point_key(a: &[i64]) -> String {
    a.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn multicomplex_value(m: &MultiComplex) -> Value {
    let hi = m.hi();
    let support: Vec<[i64; 2]> = m.lo().iter().zip(&hi).map(|(&l, &h)| [l, h]).collect();
    let dims: Map<String, Value> = m.points().map(|a| (point_key(&a), json!(m.dim(&a)))).collect();
    let diffs: Map<String, Value> = (0..m.n())
        .map(|j| {
            let family: Map<String, Value> = m
                .points()
                .filter_map(|a| {
                    let d = m.d(j, &a);
                    (!d.is_zero()).then(|| (point_key(&a), matrix_value(&d)))
                })
                .collect();
            (j.to_string(), Value::Object(family))
        })
        .collect();
    json!({
        "type": "multicomplex",
        "n": m.n(),
        "support": support,
        "dims": dims,
        "differentials": diffs,
    })
}

fn algebra_value(a: &FdAlgebra) -> Value {
    let structure: Vec<Value> = a
        .structure()
        .iter()
        .map(|row| Value::Array(row.iter().map(|v| vector_value(v)).collect()))
        .collect();
    json!({
        "type": "fd_algebra",
        "dim": a.dim(),
        "structure": structure,
        "unit": vector_value(a.unit()),
    })
}

fn edge_key(i: usize, j: usize) -> String {
    format!("{i}@{j}")
}

fn cube_value(c: &PervCube) -> Value {
    let mut f = Map::new();
    let mut g = Map::new();
    for i in 0..c.n() {
        for j in (0..1usize << c.n()).filter(|j| j & (1 << i) == 0) {
            f.insert(edge_key(i, j), matrix_value(c.f(i, j)));
            g.insert(edge_key(i, j), matrix_value(c.g(i, j)));
        }
    }
    json!({"type": "perv_cube", "n": c.n(), "dims": c.dims(), "f": f, "g": g})
}

fn simplicial_value(x: &SimplicialVS) -> Value {
    let top = x.top();
    let faces: Map<String, Value> = (1..=top)
        .map(|n| {
            let ms: Vec<Value> = (0..=n).map(|i| matrix_value(x.face(n, i))).collect();
            (n.to_string(), Value::Array(ms))
        })
        .collect();
    let degens: Map<String, Value> = (0..top)
        .map(|n| {
            let ms: Vec<Value> = (0..=n).map(|i| matrix_value(x.degeneracy(n, i))).collect();
            (n.to_string(), Value::Array(ms))
        })
        .collect();
    json!({
        "type": "simplicial_vs",
        "N": top,
        "dims": x.dims(),
        "faces": faces,
        "degeneracies": degens,
    })
}

pub fn to_value(doc: &Document) -> Value {
    match doc {
        Document::ChainComplex(c) => complex_value(c),
        Document::ChainMap(f) => map_value(f),
        Document::ChainHomotopy(h) => homotopy_value(h),
        Document::MultiComplex(m) => multicomplex_value(m),
        Document::FdAlgebra(a) => algebra_value(a),
        Document::Koszul(k) => {
            let lambdas: Vec<Value> = k.lambdas.iter().map(|l| vector_value(l)).collect();
            json!({"type": "koszul_data", "algebra": algebra_value(&k.algebra), "lambdas": lambdas})
        }
        Document::PervDisk(p) => json!({
            "type": "perv_disk",
            "dim_phi": p.dim_phi(),
            "dim_psi": p.dim_psi(),
            "f": matrix_value(p.f()),
            "g": matrix_value(p.g()),
        }),
        Document::PervFlag(p) => {
            let d: Vec<Value> = (0..p.n()).map(|k| matrix_value(p.d(k))).collect();
            let delta: Vec<Value> = (0..p.n()).map(|k| matrix_value(p.delta(k))).collect();
            json!({"type": "perv_flag", "dims": p.dims(), "d": d, "delta": delta})
        }
        Document::PervCube(c) => cube_value(c),
        Document::LocalStar(s) => {
            let f: Vec<Value> = (0..s.n()).map(|i| matrix_value(s.f(i))).collect();
            let g: Vec<Value> = (0..s.n()).map(|i| matrix_value(s.g(i))).collect();
            json!({
                "type": "local_star",
                "dim_phi": s.dim_phi(),
                "dims_psi": s.dims_psi(),
                "f": f,
                "g": g,
            })
        }
        Document::SheafEncoding(e) => json!({
            "type": "sheaf_encoding",
            "kind": match e.kind {
                EncodingKind::Sheaf => "sheaf",
                EncodingKind::Cosheaf => "cosheaf",
            },
            "stalks": e.stalks.iter().map(complex_value).collect::<Vec<_>>(),
            "restrictions": e.restrictions.iter().map(map_value).collect::<Vec<_>>(),
            "monodromies": e.monodromies.iter().map(map_value).collect::<Vec<_>>(),
            "homotopies": e.homotopies.iter().map(homotopy_value).collect::<Vec<_>>(),
        }),
        Document::FinPoset(p) => {
            let le: Vec<Vec<u8>> = (0..p.len())
                .map(|i| (0..p.len()).map(|j| p.le(i, j) as u8).collect())
                .collect();
            json!({"type": "fin_poset", "labels": p.labels(), "le": le})
        }
        Document::IntMatrix(m) => int_matrix_value(m),
        Document::Delta1ChainMatrix(m) => json!({
            "type": "delta1_chain_matrix",
            "g_src": complex_value(m.g_src()),
            "g_tgt": complex_value(m.g_tgt()),
            "entries": [
                [complex_value(m.entry(0, 0)), complex_value(m.entry(0, 1))],
                [complex_value(m.entry(1, 0)), complex_value(m.entry(1, 1))],
            ],
            "right": [map_value(m.right(0)), map_value(m.right(1))],
            "left": [map_value(m.left(0)), map_value(m.left(1))],
        }),
        Document::Arrow(f) => json!({"type": "arrow", "map": map_value(f)}),
        Document::SimplicialVS(x) => simplicial_value(x),
        Document::CatCochain2(c) => json!({
            "type": "cat_cochain2",
            "u": map_value(&c.level0.u),
            "v": map_value(&c.level0.v),
            "y01": complex_value(&c.level1.y01),
            "y02": complex_value(&c.level1.y02),
            "y12": complex_value(&c.level1.y12),
            "alpha": map_value(&c.level1.alpha),
            "beta": map_value(&c.level1.beta),
            "h": homotopy_value(&c.level1.h),
            "level2": complex_value(&c.level2),
        }),
        Document::Report(r) => report_value(r),
        Document::Result(r) => {
            let mut o = Map::new();
            o.insert("type".into(), json!("result"));
            o.insert("command".into(), json!(r.command));
            o.extend(r.fields.iter().map(|(k, v)| (k.clone(), v.clone())));
            Value::Object(o)
        }
    }
}

/// Serialized text, newline-terminated.
pub fn to_string(doc: &Document, pretty: bool) -> String {
    value_to_string(&to_value(doc), pretty)
}

pub fn value_to_string(v: &Value, pretty: bool) -> String {
    let mut s = if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    }
    .expect("JSON values always serialize");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseOptions {
    /// Reject non-canonical rationals such as `"4/6"` instead of normalizing.
    pub strict: bool,
    /// Upper bound on every dimension, degree count and matrix side.
    pub max_dim: usize,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self {
            strict: false,
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}

impl ParseOptions {
    /// Defaults, with the cap taken from `CATCX_MAX_DIM` when it is set.
    pub fn from_env() -> Self {
        let max_dim = std::env::var(MAX_DIM_VAR)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_DIM);
        Self {
            max_dim,
            ..Self::default()
        }
    }

    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Parsed {
    pub document: Document,
    /// One line per normalized rational.
    pub warnings: Vec<String>,
}

pub fn parse_document(text: &str, opts: &ParseOptions) -> Result<Parsed> {
    let value: Value = serde_json::from_str(text).map_err(|e| json_error(text, &e))?;
    from_value(&value, opts)
}

pub fn from_value(value: &Value, opts: &ParseOptions) -> Result<Parsed> {
    let mut r = Reader {
        opts,
        warnings: Vec::new(),
    };
    let document = r.document(value, "$")?;
    Ok(Parsed {
        document,
        warnings: r.warnings,
    })
}

fn json_error(text: &str, e: &serde_json::Error) -> Error {
    let offset = if e.is_eof() {
        text.len()
    } else {
        // serde_json counts columns in bytes, starting at 1
        let line_start: usize = text
            .split_inclusive('\n')
            .take(e.line().saturating_sub(1))
            .map(str::len)
            .sum();
        (line_start + e.column().saturating_sub(1)).min(text.len())
    };
    let full = e.to_string();
    let message = match full.rfind(" at line ") {
        Some(i) => full[..i].to_string(),
        None => full,
    };
    Error::Parse { offset, message }
}

struct Reader<'o> {
    opts: &'o ParseOptions,
    warnings: Vec<String>,
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

/// Shape errors from constructors become schema errors at `path`.
fn at(path: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Dimension(m) | Error::Domain(m) => schema(path, m),
        other => other,
    }
}

fn sub(path: &str, key: impl std::fmt::Display) -> String {
    format!("{path}.{key}")
}

fn idx(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

impl Reader<'_> {
    fn object<'v>(&self, v: &'v Value, path: &str) -> Result<&'v Map<String, Value>> {
        v.as_object().ok_or_else(|| schema(path, "expected an object"))
    }

    fn field<'v>(&self, o: &'v Map<String, Value>, key: &str, path: &str) -> Result<&'v Value> {
        o.get(key)
            .ok_or_else(|| schema(path, format!("missing field {key:?}")))
    }

    fn array<'v>(&self, v: &'v Value, path: &str) -> Result<&'v Vec<Value>> {
        v.as_array().ok_or_else(|| schema(path, "expected an array"))
    }

    fn array_of_len<'v>(&self, v: &'v Value, len: usize, path: &str) -> Result<&'v Vec<Value>> {
        let a = self.array(v, path)?;
        if a.len() != len {
            return Err(schema(path, format!("expected {len} items, found {}", a.len())));
        }
        Ok(a)
    }

    fn int(&self, v: &Value, path: &str) -> Result<i64> {
        v.as_i64().ok_or_else(|| schema(path, "expected an integer"))
    }

    /// A dimension or count, bounded by the cap.
    fn count(&self, v: &Value, path: &str) -> Result<usize> {
        let n = v
            .as_u64()
            .ok_or_else(|| schema(path, "expected a non-negative integer"))?;
        if n > self.opts.max_dim as u64 {
            return Err(schema(
                path,
                format!("{n} exceeds the dimension cap {} ({MAX_DIM_VAR})", self.opts.max_dim),
            ));
        }
        Ok(n as usize)
    }

    fn counts(&self, v: &Value, path: &str) -> Result<Vec<usize>> {
        let a = self.array(v, path)?;
        self.cap_len(a.len(), path)?;
        a.iter()
            .enumerate()
            .map(|(i, x)| self.count(x, &idx(path, i)))
            .collect()
    }

    fn cap_len(&self, len: usize, path: &str) -> Result<()> {
        if len > self.opts.max_dim {
            return Err(schema(path, format!("{len} items exceed the dimension cap {}", self.opts.max_dim)));
        }
        Ok(())
    }

    fn string(&self, v: &Value, path: &str) -> Result<String> {
        v.as_str()
            .map(str::to_string)
            .ok_or_else(|| schema(path, "expected a string"))
    }

    fn rational(&mut self, v: &Value, path: &str) -> Result<Rational> {
        let text = match v {
            Value::String(s) => s.clone(),
            Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
            _ => return Err(schema(path, "expected a rational string \"p/q\"")),
        };
        let parsed = parse_rational(&text).map_err(|m| schema(path, m))?;
        if !parsed.canonical {
            let canon = format_rational(&parsed.value);
            if self.opts.strict {
                return Err(schema(path, format!("{text:?} is not in lowest terms (expected {canon:?})")));
            }
            self.warnings.push(format!("{path}: normalized {text:?} to {canon:?}"));
        }
        Ok(parsed.value)
    }

    fn vector(&mut self, v: &Value, len: usize, path: &str) -> Result<Vec<Rational>> {
        let a = self.array_of_len(v, len, path)?;
        a.iter()
            .enumerate()
            .map(|(i, x)| self.rational(x, &idx(path, i)))
            .collect()
    }

    fn matrix(&mut self, v: &Value, rows: usize, cols: usize, path: &str) -> Result<Matrix> {
        let a = self.array_of_len(v, rows, path)?;
        let mut data = Vec::with_capacity(rows * cols);
        for (i, row) in a.iter().enumerate() {
            data.extend(self.vector(row, cols, &idx(path, i))?);
        }
        Matrix::from_vec(rows, cols, data).map_err(at(path))
    }

    fn sized_matrix(&mut self, v: &Value, path: &str) -> Result<Matrix> {
        let o = self.object(v, path)?;
        let rows = self.count(self.field(o, "rows", path)?, &sub(path, "rows"))?;
        let cols = self.count(self.field(o, "cols", path)?, &sub(path, "cols"))?;
        self.matrix(self.field(o, "entries", path)?, rows, cols, &sub(path, "entries"))
    }

    fn matrices(
        &mut self,
        v: &Value,
        shapes: &[(usize, usize)],
        path: &str,
    ) -> Result<Vec<Matrix>> {
        let a = self.array_of_len(v, shapes.len(), path)?;
        a.iter()
            .zip(shapes)
            .enumerate()
            .map(|(i, (x, &(r, c)))| self.matrix(x, r, c, &idx(path, i)))
            .collect()
    }

    /// Nested documents may omit their tag; if present it must match.
    fn check_tag(&self, o: &Map<String, Value>, tag: &str, path: &str) -> Result<()> {
        match o.get("type") {
            None => Ok(()),
            Some(Value::String(t)) if t == tag => Ok(()),
            Some(t) => Err(schema(path, format!("expected type {tag:?}, found {t}"))),
        }
    }

    /// `{"k": matrix}` keyed by integers in `range`, shapes from `shape(k)`.
    fn keyed_matrices(
        &mut self,
        v: Option<&Value>,
        range: std::ops::RangeInclusive<i64>,
        shape: impl Fn(i64) -> (usize, usize),
        path: &str,
    ) -> Result<BTreeMap<i64, Matrix>> {
        let mut out = BTreeMap::new();
        let Some(v) = v else { return Ok(out) };
        let o = self.object(v, path)?;
        for (key, m) in o {
            let p = sub(path, key);
            let k: i64 = key
                .parse()
                .map_err(|_| schema(&p, "keys must be integer degrees"))?;
            if !range.contains(&k) {
                return Err(schema(&p, format!("degree {k} outside {}..={}", range.start(), range.end())));
            }
            let (r, c) = shape(k);
            out.insert(k, self.matrix(m, r, c, &p)?);
        }
        Ok(out)
    }

    fn complex(&mut self, v: &Value, path: &str) -> Result<ChainComplex> {
        let o = self.object(v, path)?;
        self.check_tag(o, "chain_complex", path)?;
        let lo = self.int(self.field(o, "lo", path)?, &sub(path, "lo"))?;
        let dims = self.counts(self.field(o, "dims", path)?, &sub(path, "dims"))?;
        if dims.is_empty() {
            return Err(schema(&sub(path, "dims"), "a complex needs at least one degree"));
        }
        let hi = lo + dims.len() as i64 - 1;
        if let Some(h) = o.get("hi") {
            let h = self.int(h, &sub(path, "hi"))?;
            if h != hi {
                return Err(schema(&sub(path, "hi"), format!("hi = {h} but dims cover {lo}..={hi}")));
            }
        }
        let dim = |k: i64| dims[(k - lo) as usize];
        let diffs = self.keyed_matrices(
            o.get("differentials"),
            lo + 1..=hi,
            |k| (dim(k - 1), dim(k)),
            &sub(path, "differentials"),
        )?;
        ChainComplex::from_map(lo, dims.clone(), &diffs).map_err(at(path))
    }

    fn ends(&mut self, o: &Map<String, Value>, path: &str) -> Result<(ChainComplex, ChainComplex)> {
        let s = self.complex(self.field(o, "source", path)?, &sub(path, "source"))?;
        let t = self.complex(self.field(o, "target", path)?, &sub(path, "target"))?;
        Ok((s, t))
    }

    fn components(
        &mut self,
        o: &Map<String, Value>,
        s: &ChainComplex,
        shape: impl Fn(i64) -> (usize, usize),
        path: &str,
    ) -> Result<Vec<Matrix>> {
        let given = self.keyed_matrices(o.get("components"), s.degrees(), &shape, &sub(path, "components"))?;
        Ok(s.degrees()
            .map(|k| {
                given.get(&k).cloned().unwrap_or_else(|| {
                    let (r, c) = shape(k);
                    Matrix::zeros(r, c)
                })
            })
            .collect())
    }

    fn chain_map(&mut self, v: &Value, path: &str) -> Result<ChainMap> {
        let o = self.object(v, path)?;
        self.check_tag(o, "chain_map", path)?;
        let (s, t) = self.ends(o, path)?;
        let comps = self.components(o, &s, |k| (t.dim(k), s.dim(k)), path)?;
        ChainMap::new(s, t, comps).map_err(at(path))
    }

    fn homotopy(&mut self, v: &Value, path: &str) -> Result<ChainHomotopy> {
        let o = self.object(v, path)?;
        self.check_tag(o, "chain_homotopy", path)?;
        let (s, t) = self.ends(o, path)?;
        let comps = self.components(o, &s, |k| (t.dim(k + 1), s.dim(k)), path)?;
        ChainHomotopy::new(s, t, comps).map_err(at(path))
    }

    fn list<T>(
        &mut self,
        v: &Value,
        path: &str,
        mut item: impl FnMut(&mut Self, &Value, &str) -> Result<T>,
    ) -> Result<Vec<T>> {
        let a = self.array(v, path)?;
        self.cap_len(a.len(), path)?;
        a.iter()
            .enumerate()
            .map(|(i, x)| item(self, x, &idx(path, i)))
            .collect()
    }

    fn point(&self, key: &str, n: usize, path: &str) -> Result<Vec<i64>> {
        let a: Vec<i64> = key
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| schema(path, "keys must be comma-separated integers"))?;
        if a.len() != n {
            return Err(schema(path, format!("expected {n} coordinates")));
        }
        Ok(a)
    }

    fn multicomplex(&mut self, o: &Map<String, Value>, path: &str) -> Result<MultiComplex> {
        let n = self.count(self.field(o, "n", path)?, &sub(path, "n"))?;
        let sp = sub(path, "support");
        let support = self.array_of_len(self.field(o, "support", path)?, n, &sp)?;
        let mut lo = Vec::with_capacity(n);
        let mut shape = Vec::with_capacity(n);
        for (j, s) in support.iter().enumerate() {
            let p = idx(&sp, j);
            let pair = self.array_of_len(s, 2, &p)?;
            let (l, h) = (self.int(&pair[0], &p)?, self.int(&pair[1], &p)?);
            if h < l || (h - l) as u64 >= self.opts.max_dim as u64 {
                return Err(schema(&p, format!("bad support {l}..={h}")));
            }
            lo.push(l);
            shape.push((h - l + 1) as usize);
        }
        if shape.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s)).map_or(true, |t| t > self.opts.max_dim) {
            return Err(schema(&sp, "support exceeds the dimension cap"));
        }
        let inside = |a: &[i64]| a.iter().zip(&lo).zip(&shape).all(|((&x, &l), &s)| x >= l && x < l + s as i64);

        let dp = sub(path, "dims");
        let mut dims = BTreeMap::new();
        for (key, d) in self.object(self.field(o, "dims", path)?, &dp)? {
            let p = sub(&dp, key);
            let a = self.point(key, n, &p)?;
            if !inside(&a) {
                return Err(schema(&p, "point outside the support"));
            }
            dims.insert(a, self.count(d, &p)?);
        }
        let dim = |a: &[i64]| dims.get(a).copied().unwrap_or(0);

        let mut diffs: BTreeMap<(usize, Vec<i64>), Matrix> = BTreeMap::new();
        if let Some(v) = o.get("differentials") {
            let fp = sub(path, "differentials");
            for (axis, family) in self.object(v, &fp)? {
                let ap = sub(&fp, axis);
                let j: usize = axis
                    .parse()
                    .ok()
                    .filter(|&j| j < n)
                    .ok_or_else(|| schema(&ap, format!("axis must be below {n}")))?;
                for (key, m) in self.object(family, &ap)? {
                    let p = sub(&ap, key);
                    let a = self.point(key, n, &p)?;
                    if !inside(&a) {
                        return Err(schema(&p, "point outside the support"));
                    }
                    let mut b = a.clone();
                    b[j] -= 1;
                    let rows = if inside(&b) { dim(&b) } else { 0 };
                    let mat = self.matrix(m, rows, dim(&a), &p)?;
                    diffs.insert((j, a), mat);
                }
            }
        }
        MultiComplex::from_fn(lo, shape, dim, |j, a| diffs.get(&(j, a.to_vec())).cloned()).map_err(at(path))
    }

    fn algebra(&mut self, v: &Value, path: &str) -> Result<FdAlgebra> {
        let o = self.object(v, path)?;
        self.check_tag(o, "fd_algebra", path)?;
        let dim = self.count(self.field(o, "dim", path)?, &sub(path, "dim"))?;
        let sp = sub(path, "structure");
        let mut structure = Vec::with_capacity(dim);
        for (i, row) in self.array_of_len(self.field(o, "structure", path)?, dim, &sp)?.iter().enumerate() {
            let rp = idx(&sp, i);
            let mut out = Vec::with_capacity(dim);
            for (j, x) in self.array_of_len(row, dim, &rp)?.iter().enumerate() {
                out.push(self.vector(x, dim, &idx(&rp, j))?);
            }
            structure.push(out);
        }
        let unit = self.vector(self.field(o, "unit", path)?, dim, &sub(path, "unit"))?;
        FdAlgebra::new(dim, structure, unit).map_err(at(path))
    }

    fn cube(&mut self, o: &Map<String, Value>, path: &str) -> Result<PervCube> {
        let n = self.count(self.field(o, "n", path)?, &sub(path, "n"))?;
        if n >= usize::BITS as usize || (1usize << n) > self.opts.max_dim {
            return Err(schema(&sub(path, "n"), "cube too large for the dimension cap"));
        }
        let dims = self.counts(self.field(o, "dims", path)?, &sub(path, "dims"))?;
        if dims.len() != 1 << n {
            return Err(schema(&sub(path, "dims"), format!("a {n}-cube has {} vertices", 1 << n)));
        }
        let edges = |this: &mut Self, key: &str, up: bool| -> Result<BTreeMap<(usize, usize), Matrix>> {
            let mut out = BTreeMap::new();
            let Some(v) = o.get(key) else { return Ok(out) };
            let kp = sub(path, key);
            for (k, m) in this.object(v, &kp)? {
                let p = sub(&kp, k);
                let (i, j) = k
                    .split_once('@')
                    .and_then(|(i, j)| Some((i.parse::<usize>().ok()?, j.parse::<usize>().ok()?)))
                    .filter(|&(i, j)| i < n && j < 1 << n && j & (1 << i) == 0)
                    .ok_or_else(|| schema(&p, "edge keys are \"axis@vertex\" with the axis bit clear"))?;
                let (a, b) = (dims[j], dims[j | (1 << i)]);
                let shape = if up { (b, a) } else { (a, b) };
                out.insert((i, j), this.matrix(m, shape.0, shape.1, &p)?);
            }
            Ok(out)
        };
        let f = edges(self, "f", false)?;
        let g = edges(self, "g", true)?;
        PervCube::from_fn(n, dims, |i, j| f.get(&(i, j)).cloned(), |i, j| g.get(&(i, j)).cloned())
            .map_err(at(path))
    }

    fn poset(&mut self, o: &Map<String, Value>, path: &str) -> Result<FinPoset> {
        let lp = sub(path, "le");
        let rows = self.array(self.field(o, "le", path)?, &lp)?;
        let n = rows.len();
        self.cap_len(n, &lp)?;
        let labels = match o.get("labels") {
            Some(v) => {
                let p = sub(path, "labels");
                let a = self.array_of_len(v, n, &p)?;
                a.iter()
                    .enumerate()
                    .map(|(i, x)| self.string(x, &idx(&p, i)))
                    .collect::<Result<Vec<_>>>()?
            }
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        let mut le = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            let rp = idx(&lp, i);
            let cells = self.array_of_len(row, n, &rp)?;
            le.push(
                cells
                    .iter()
                    .enumerate()
                    .map(|(j, c)| match c {
                        Value::Bool(b) => Ok(*b),
                        Value::Number(x) if x.as_u64() == Some(0) => Ok(false),
                        Value::Number(x) if x.as_u64() == Some(1) => Ok(true),
                        _ => Err(schema(&idx(&rp, j), "expected 0, 1 or a boolean")),
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        FinPoset::new(labels, le).map_err(at(path))
    }

    fn int_matrix(&mut self, o: &Map<String, Value>, path: &str) -> Result<IntMatrix> {
        let rows = self.count(self.field(o, "rows", path)?, &sub(path, "rows"))?;
        let cols = self.count(self.field(o, "cols", path)?, &sub(path, "cols"))?;
        let ep = sub(path, "entries");
        let mut data = Vec::with_capacity(rows * cols);
        for (i, row) in self.array_of_len(self.field(o, "entries", path)?, rows, &ep)?.iter().enumerate() {
            let rp = idx(&ep, i);
            for (j, x) in self.array_of_len(row, cols, &rp)?.iter().enumerate() {
                data.push(self.int(x, &idx(&rp, j))?);
            }
        }
        IntMatrix::new(rows, cols, data).map_err(at(path))
    }

    fn delta1(&mut self, o: &Map<String, Value>, path: &str) -> Result<Delta1ChainMatrix> {
        let g_src = self.complex(self.field(o, "g_src", path)?, &sub(path, "g_src"))?;
        let g_tgt = self.complex(self.field(o, "g_tgt", path)?, &sub(path, "g_tgt"))?;
        let ep = sub(path, "entries");
        let rows = self.array_of_len(self.field(o, "entries", path)?, 2, &ep)?;
        let mut entries = Vec::with_capacity(2);
        for (t, row) in rows.iter().enumerate() {
            let rp = idx(&ep, t);
            let cells = self.array_of_len(row, 2, &rp)?;
            entries.push([self.complex(&cells[0], &idx(&rp, 0))?, self.complex(&cells[1], &idx(&rp, 1))?]);
        }
        let pair = |this: &mut Self, key: &str| -> Result<[ChainMap; 2]> {
            let p = sub(path, key);
            let a = this.array_of_len(this.field(o, key, path)?, 2, &p)?;
            Ok([this.chain_map(&a[0], &idx(&p, 0))?, this.chain_map(&a[1], &idx(&p, 1))?])
        };
        let right = pair(self, "right")?;
        let left = pair(self, "left")?;
        let [e0, e1]: [[ChainComplex; 2]; 2] = entries.try_into().expect("two rows");
        Delta1ChainMatrix::new(g_src, g_tgt, [e0, e1], right, left).map_err(at(path))
    }

    fn simplicial(&mut self, o: &Map<String, Value>, path: &str) -> Result<SimplicialVS> {
        let top = self.count(self.field(o, "N", path)?, &sub(path, "N"))?;
        let dims = self.counts(self.field(o, "dims", path)?, &sub(path, "dims"))?;
        if dims.len() != top + 1 {
            return Err(schema(&sub(path, "dims"), format!("N = {top} needs {} dimensions", top + 1)));
        }
        let fp = sub(path, "faces");
        let faces_o = self.object(self.field(o, "faces", path)?, &fp)?;
        let dp = sub(path, "degeneracies");
        let degens_o = self.object(self.field(o, "degeneracies", path)?, &dp)?;
        let face_level = |n: usize| (1..=top).contains(&n);
        let degen_level = |n: usize| n < top;
        for (obj, p, ok) in [(faces_o, &fp, &face_level as &dyn Fn(usize) -> bool), (degens_o, &dp, &degen_level)] {
            if let Some(k) = obj.keys().find(|k| !k.parse::<usize>().is_ok_and(ok)) {
                return Err(schema(&sub(p, k), "level out of range"));
            }
        }
        let mut faces = Vec::with_capacity(top);
        for n in 1..=top {
            let p = sub(&fp, n);
            let v = faces_o.get(&n.to_string()).ok_or_else(|| schema(&p, "missing level"))?;
            faces.push(self.matrices(v, &vec![(dims[n - 1], dims[n]); n + 1], &p)?);
        }
        let mut degens = Vec::with_capacity(top);
        for n in 0..top {
            let p = sub(&dp, n);
            let v = degens_o.get(&n.to_string()).ok_or_else(|| schema(&p, "missing level"))?;
            degens.push(self.matrices(v, &vec![(dims[n + 1], dims[n]); n + 1], &p)?);
        }
        SimplicialVS::new(dims, faces, degens).map_err(at(path))
    }

    fn report(&mut self, o: &Map<String, Value>, path: &str) -> Result<Report> {
        let vp = sub(path, "violations");
        let items = self.array(self.field(o, "violations", path)?, &vp)?;
        let mut report = Report::new();
        for (i, item) in items.iter().enumerate() {
            let p = idx(&vp, i);
            let v = self.object(item, &p)?;
            let witness = match v.get("witness") {
                None | Some(Value::Null) => None,
                Some(w) => Some(self.sized_matrix(w, &sub(&p, "witness"))?),
            };
            report.violations.push(Violation {
                code: self.string(self.field(v, "code", &p)?, &sub(&p, "code"))?,
                at: self.string(self.field(v, "at", &p)?, &sub(&p, "at"))?,
                detail: self.string(self.field(v, "detail", &p)?, &sub(&p, "detail"))?,
                witness,
            });
        }
        if let Some(valid) = o.get("valid") {
            if valid.as_bool() != Some(report.is_valid()) {
                return Err(schema(&sub(path, "valid"), "disagrees with the violation list"));
            }
        }
        Ok(report)
    }

    fn document(&mut self, v: &Value, path: &str) -> Result<Document> {
        let o = self.object(v, path)?;
        let tag = self.string(self.field(o, "type", path)?, &sub(path, "type"))?;
        let field = |key: &str| o.get(key).ok_or_else(|| schema(path, format!("missing field {key:?}")));
        let doc = match tag.as_str() {
            "chain_complex" => Document::ChainComplex(self.complex(v, path)?),
            "chain_map" => Document::ChainMap(self.chain_map(v, path)?),
            "chain_homotopy" => Document::ChainHomotopy(self.homotopy(v, path)?),
            "multicomplex" => Document::MultiComplex(self.multicomplex(o, path)?),
            "fd_algebra" => Document::FdAlgebra(self.algebra(v, path)?),
            "koszul_data" => {
                let algebra = self.algebra(field("algebra")?, &sub(path, "algebra"))?;
                let dim = algebra.dim();
                let lambdas = self.list(field("lambdas")?, &sub(path, "lambdas"), |r, x, p| r.vector(x, dim, p))?;
                Document::Koszul(KoszulData { algebra, lambdas })
            }
            "perv_disk" => {
                let phi = self.count(field("dim_phi")?, &sub(path, "dim_phi"))?;
                let psi = self.count(field("dim_psi")?, &sub(path, "dim_psi"))?;
                let f = self.matrix(field("f")?, psi, phi, &sub(path, "f"))?;
                let g = self.matrix(field("g")?, phi, psi, &sub(path, "g"))?;
                Document::PervDisk(PervDisk::new(phi, psi, f, g).map_err(at(path))?)
            }
            "perv_flag" => {
                let dims = self.counts(field("dims")?, &sub(path, "dims"))?;
                if dims.is_empty() {
                    return Err(schema(&sub(path, "dims"), "a flag needs at least A_0"));
                }
                let up: Vec<_> = dims.windows(2).map(|w| (w[1], w[0])).collect();
                let down: Vec<_> = dims.windows(2).map(|w| (w[0], w[1])).collect();
                let d = self.matrices(field("d")?, &up, &sub(path, "d"))?;
                let delta = self.matrices(field("delta")?, &down, &sub(path, "delta"))?;
                Document::PervFlag(PervFlag::new(dims, d, delta).map_err(at(path))?)
            }
            "perv_cube" => Document::PervCube(self.cube(o, path)?),
            "local_star" => {
                let phi = self.count(field("dim_phi")?, &sub(path, "dim_phi"))?;
                let psi = self.counts(field("dims_psi")?, &sub(path, "dims_psi"))?;
                let fs: Vec<_> = psi.iter().map(|&d| (d, phi)).collect();
                let gs: Vec<_> = psi.iter().map(|&d| (phi, d)).collect();
                let f = self.matrices(field("f")?, &fs, &sub(path, "f"))?;
                let g = self.matrices(field("g")?, &gs, &sub(path, "g"))?;
                Document::LocalStar(LocalStar::new(phi, psi, f, g).map_err(at(path))?)
            }
            "sheaf_encoding" => {
                let kp = sub(path, "kind");
                let kind = match self.string(field("kind")?, &kp)?.as_str() {
                    "sheaf" => EncodingKind::Sheaf,
                    "cosheaf" => EncodingKind::Cosheaf,
                    other => return Err(schema(&kp, format!("unknown kind {other:?}"))),
                };
                let stalks = self.list(field("stalks")?, &sub(path, "stalks"), |r, x, p| r.complex(x, p))?;
                let restrictions =
                    self.list(field("restrictions")?, &sub(path, "restrictions"), |r, x, p| r.chain_map(x, p))?;
                let monodromies =
                    self.list(field("monodromies")?, &sub(path, "monodromies"), |r, x, p| r.chain_map(x, p))?;
                let homotopies =
                    self.list(field("homotopies")?, &sub(path, "homotopies"), |r, x, p| r.homotopy(x, p))?;
                Document::SheafEncoding(SheafEncoding {
                    kind,
                    stalks,
                    restrictions,
                    monodromies,
                    homotopies,
                })
            }
            "fin_poset" => Document::FinPoset(self.poset(o, path)?),
            "int_matrix" => Document::IntMatrix(self.int_matrix(o, path)?),
            "delta1_chain_matrix" => Document::Delta1ChainMatrix(self.delta1(o, path)?),
            "arrow" => Document::Arrow(self.chain_map(field("map")?, &sub(path, "map"))?),
            "simplicial_vs" => Document::SimplicialVS(self.simplicial(o, path)?),
            "cat_cochain2" => {
                let m = |r: &mut Self, k: &str| r.chain_map(field(k)?, &sub(path, k));
                let u = m(self, "u")?;
                let v = m(self, "v")?;
                let alpha = m(self, "alpha")?;
                let beta = m(self, "beta")?;
                let c = |r: &mut Self, k: &str| r.complex(field(k)?, &sub(path, k));
                let y01 = c(self, "y01")?;
                let y02 = c(self, "y02")?;
                let y12 = c(self, "y12")?;
                let level2 = c(self, "level2")?;
                let h = self.homotopy(field("h")?, &sub(path, "h"))?;
                Document::CatCochain2(CatCochain2 {
                    level0: Cc2Level0 { u, v },
                    level1: Cc2Level1 {
                        y01,
                        y02,
                        y12,
                        alpha,
                        beta,
                        h,
                    },
                    level2,
                })
            }
            "report" => Document::Report(self.report(o, path)?),
            "result" => {
                let command = self.string(field("command")?, &sub(path, "command"))?;
                let fields = o
                    .iter()
                    .filter(|(k, _)| *k != "type" && *k != "command")
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect();
                Document::Result(ResultDoc { command, fields })
            }
            other => {
                return Err(schema(
                    &sub(path, "type"),
                    format!("unknown type tag {other:?}; expected one of {}", TYPE_TAGS.join(", ")),
                ))
            }
        };
        Ok(doc)
    }
}
