//! Command dispatch for the `catcx` binary.
//!
//! Every command reads one or more documents and produces a `result`
//! document. Commands that build a new object put it under `"output"`;
//! such results can be fed back in as input, the loader unwraps them.
//!
//! Exit codes: 0 success or valid, 1 validation failure, 2 malformed input.

use std::path::Path;

use catcx_core::chain::{self, ChainComplex, ChainMap};
use catcx_core::doc::{
    self, complex_value, int_matrix_value, map_value, matrix_value, report_value, Document, ParseOptions,
    ResultDoc,
};
use catcx_core::koszul::{duality_iso, koszul};
use catcx_core::laxmat::{
    cof_action, fib_action, k0_compose, k0_delta1_compose, lax_compose_delta1, mobius, zeta, ArrowObject,
    FinPoset, IntMatrix,
};
use catcx_core::perverse::{
    amalgamate, encode_sheaf, encode_sheaf_flag, flag_embed_cube, flag_factorization, flag_monodromies,
    t_phi_inverse_formula, verify_encoding,
};
use catcx_core::{doldkan, simplex, Error, Report};
use serde_json::{json, Map, Value};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_MALFORMED: u8 = 2;

/// Subcommand names with the documents each expects.
pub const COMMANDS: &[(&str, &str)] = &[
    ("validate", "<any document>"),
    ("homology", "<chain_complex | multicomplex>"),
    ("cone", "<chain_map | arrow>"),
    ("tensor", "<chain_complex> <chain_complex> | <chain_map> <chain_map>"),
    ("hom-complex", "<chain_complex> <chain_complex>"),
    ("totalize", "<multicomplex>"),
    ("koszul", "<koszul_data>"),
    ("koszul-dual", "<koszul_data>"),
    ("monodromy", "<perv_disk | perv_flag>"),
    ("amalgamate", "<perv_disk> <perv_disk>"),
    ("embed-cube", "<perv_flag>"),
    ("encode-sheaf", "<perv_disk | perv_flag> [--dual]"),
    ("verify-encoding", "<sheaf_encoding>"),
    ("dk-normalize", "<simplicial_vs>"),
    ("dk-gamma", "<chain_complex> [--top N]"),
    ("zeta", "<fin_poset>"),
    ("mobius", "<fin_poset>"),
    ("k0-compose", "<int_matrix> <int_matrix> [<fin_poset>]"),
    ("lax-compose", "<delta1_chain_matrix> <delta1_chain_matrix>"),
    ("cof", "<arrow | chain_map>"),
    ("fib", "<arrow | chain_map>"),
    ("cc2", "<chain_map u> <chain_map v>"),
];

/// Options that only some commands read.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    /// `encode-sheaf`: the cosheaf encoding instead of the sheaf one.
    pub dual: bool,
    /// `dk-gamma`: truncation level; defaults to the top degree of the input.
    pub top: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub result: ResultDoc,
    pub exit: u8,
}

impl Outcome {
    pub fn document(&self) -> Document {
        Document::Result(self.result.clone())
    }
}

/// Reads one document. A `result` carrying an `"output"` is replaced by that
/// output, so results chain into further commands.
pub fn load(path: &Path, opts: &ParseOptions) -> catcx_core::Result<doc::Parsed> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        offset: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    load_str(&text, opts)
}

pub fn load_str(text: &str, opts: &ParseOptions) -> catcx_core::Result<doc::Parsed> {
    let parsed = doc::parse_document(text, opts)?;
    if let Document::Result(r) = &parsed.document {
        if let Some(out) = r.fields.get("output") {
            let mut inner = doc::from_value(out, opts)?;
            inner.warnings.splice(0..0, parsed.warnings);
            return Ok(inner);
        }
    }
    Ok(parsed)
}

/// Result document for an error that happened before dispatch.
pub fn error_outcome(command: &str, e: &Error) -> Outcome {
    let mut fields = Map::new();
    match e {
        Error::Invalid(r) => {
            fields.insert("status".into(), json!("invalid"));
            fields.insert("report".into(), report_value(r));
            return Outcome {
                result: ResultDoc {
                    command: command.into(),
                    fields,
                },
                exit: EXIT_INVALID,
            };
        }
        Error::Parse { offset, message } => {
            fields.insert("status".into(), json!("error"));
            fields.insert(
                "error".into(),
                json!({"kind": "parse", "offset": offset, "message": message}),
            );
        }
        Error::Schema { path, message } => {
            fields.insert("status".into(), json!("error"));
            fields.insert(
                "error".into(),
                json!({"kind": "schema", "path": path, "message": message}),
            );
        }
        Error::Dimension(m) => {
            fields.insert("status".into(), json!("error"));
            fields.insert("error".into(), json!({"kind": "dimension", "message": m}));
        }
        Error::Domain(m) => {
            fields.insert("status".into(), json!("error"));
            fields.insert("error".into(), json!({"kind": "domain", "message": m}));
        }
    }
    Outcome {
        result: ResultDoc {
            command: command.into(),
            fields,
        },
        exit: EXIT_MALFORMED,
    }
}

pub fn dispatch(command: &str, flags: &Flags, docs: &[Document]) -> Outcome {
    match run(command, flags, docs) {
        Ok((fields, valid)) => Outcome {
            result: ResultDoc {
                command: command.into(),
                fields,
            },
            exit: if valid { EXIT_OK } else { EXIT_INVALID },
        },
        Err(e) => error_outcome(command, &e),
    }
}

type Fields = Map<String, Value>;
type Res<T> = catcx_core::Result<T>;

fn malformed(message: impl Into<String>) -> Error {
    Error::Schema {
        path: "$".into(),
        message: message.into(),
    }
}

fn arity(docs: &[Document], allowed: &[usize]) -> Res<()> {
    if allowed.contains(&docs.len()) {
        Ok(())
    } else {
        let want: Vec<String> = allowed.iter().map(usize::to_string).collect();
        Err(malformed(format!("expected {} input documents, got {}", want.join(" or "), docs.len())))
    }
}

fn wrong(doc: &Document, wanted: &str) -> Error {
    malformed(format!("expected {wanted}, got {}", doc.type_tag()))
}

fn complex(d: &Document) -> Res<&ChainComplex> {
    match d {
        Document::ChainComplex(c) => Ok(c),
        other => Err(wrong(other, "chain_complex")),
    }
}

fn chain_map(d: &Document) -> Res<&ChainMap> {
    match d {
        Document::ChainMap(f) | Document::Arrow(f) => Ok(f),
        other => Err(wrong(other, "chain_map or arrow")),
    }
}

fn poset(d: &Document) -> Res<&FinPoset> {
    match d {
        Document::FinPoset(p) => Ok(p),
        other => Err(wrong(other, "fin_poset")),
    }
}

fn int_matrix(d: &Document) -> Res<&IntMatrix> {
    match d {
        Document::IntMatrix(m) => Ok(m),
        other => Err(wrong(other, "int_matrix")),
    }
}

fn map_report(f: &ChainMap) -> Report {
    let mut r = Report::new();
    r.absorb("source", f.source().validate());
    r.absorb("target", f.target().validate());
    r.absorb("map", f.validate());
    r
}

fn homology_value(c: &ChainComplex) -> Res<Value> {
    let h = c.homology_dims()?;
    Ok(Value::Object(h.into_iter().map(|(k, d)| (k.to_string(), json!(d))).collect()))
}

fn fields(entries: impl IntoIterator<Item = (&'static str, Value)>) -> Fields {
    let mut f = Map::new();
    f.insert("status".into(), json!("ok"));
    for (k, v) in entries {
        f.insert(k.into(), v);
    }
    f
}

fn output(doc: Document) -> Value {
    doc::to_value(&doc)
}

/// `(fields, valid)`; errors become exit 1 or 2.
fn run(command: &str, flags: &Flags, docs: &[Document]) -> Res<(Fields, bool)> {
    if flags.dual && command != "encode-sheaf" {
        return Err(malformed("--dual only applies to encode-sheaf"));
    }
    if flags.top.is_some() && command != "dk-gamma" {
        return Err(malformed("--top only applies to dk-gamma"));
    }
    let ok = |f: Fields| Ok((f, true));
    match command {
        "validate" => {
            arity(docs, &[1])?;
            validate(&docs[0])
        }
        "homology" => {
            arity(docs, &[1])?;
            let c = match &docs[0] {
                Document::ChainComplex(c) => c.clone(),
                Document::MultiComplex(m) => {
                    m.ensure_valid()?;
                    m.totalize()?
                }
                other => return Err(wrong(other, "chain_complex or multicomplex")),
            };
            c.ensure_valid()?;
            ok(fields([
                ("homology", homology_value(&c)?),
                ("euler_characteristic", json!(c.euler_characteristic())),
            ]))
        }
        "cone" => {
            arity(docs, &[1])?;
            let f = chain_map(&docs[0])?;
            map_report(f).into_result()?;
            let c = chain::cone(f)?;
            ok(fields([
                ("output", complex_value(&c.complex)),
                ("quasi_isomorphism", json!(c.complex.is_acyclic()?)),
            ]))
        }
        "tensor" => {
            arity(docs, &[2])?;
            match (&docs[0], &docs[1]) {
                (Document::ChainComplex(a), Document::ChainComplex(b)) => {
                    a.ensure_valid()?;
                    b.ensure_valid()?;
                    ok(fields([("output", complex_value(&chain::tensor(a, b)))]))
                }
                (a, b) => {
                    let (f, g) = (chain_map(a)?, chain_map(b)?);
                    map_report(f).into_result()?;
                    map_report(g).into_result()?;
                    ok(fields([("output", map_value(&chain::tensor_maps(f, g)))]))
                }
            }
        }
        "hom-complex" => {
            arity(docs, &[2])?;
            let (a, b) = (complex(&docs[0])?, complex(&docs[1])?);
            a.ensure_valid()?;
            b.ensure_valid()?;
            let h = chain::hom_complex(a, b);
            ok(fields([("output", complex_value(&h)), ("homology", homology_value(&h)?)]))
        }
        "totalize" => {
            arity(docs, &[1])?;
            let Document::MultiComplex(m) = &docs[0] else {
                return Err(wrong(&docs[0], "multicomplex"));
            };
            m.ensure_valid()?;
            let t = m.totalize()?;
            ok(fields([("output", complex_value(&t)), ("homology", homology_value(&t)?)]))
        }
        "koszul" | "koszul-dual" => {
            arity(docs, &[1])?;
            let Document::Koszul(k) = &docs[0] else {
                return Err(wrong(&docs[0], "koszul_data"));
            };
            let kz = koszul(&k.algebra, &k.lambdas)?;
            if command == "koszul" {
                let c = kz.realize();
                return ok(fields([
                    ("ranks", json!(kz.free().ranks)),
                    ("output", complex_value(&c)),
                    ("homology", homology_value(&c)?),
                ]));
            }
            let iso = duality_iso(&kz)?;
            let report = iso.verify();
            let valid = report.is_valid();
            let mut f = fields([("report", report_value(&report))]);
            if valid {
                f.insert("output".into(), map_value(&iso.realize()?));
            } else {
                f.insert("status".into(), json!("invalid"));
            }
            Ok((f, valid))
        }
        "monodromy" => {
            arity(docs, &[1])?;
            match &docs[0] {
                Document::PervDisk(p) => {
                    p.ensure_valid()?;
                    let inv = t_phi_inverse_formula(p)?.map_or(Value::Null, |m| matrix_value(&m));
                    ok(fields([
                        ("T", matrix_value(&p.t_psi())),
                        ("T_phi", matrix_value(&p.t_phi())),
                        ("T_phi_inverse", inv),
                    ]))
                }
                Document::PervFlag(p) => {
                    p.ensure_valid()?;
                    let ts: Vec<Value> = flag_monodromies(p)?.iter().map(matrix_value).collect();
                    let report = flag_factorization(p);
                    let valid = report.is_valid();
                    Ok((fields([("T", Value::Array(ts)), ("factorization", report_value(&report))]), valid))
                }
                other => Err(wrong(other, "perv_disk or perv_flag")),
            }
        }
        "amalgamate" => {
            arity(docs, &[2])?;
            let (Document::PervDisk(p), Document::PervDisk(q)) = (&docs[0], &docs[1]) else {
                return Err(malformed("expected two perv_disk documents"));
            };
            let a = amalgamate(p, q)?;
            let t = a.t_psi();
            ok(fields([("output", output(Document::PervDisk(a))), ("monodromy", matrix_value(&t))]))
        }
        "embed-cube" => {
            arity(docs, &[1])?;
            let Document::PervFlag(p) = &docs[0] else {
                return Err(wrong(&docs[0], "perv_flag"));
            };
            let c = flag_embed_cube(p)?;
            let report = c.validate();
            let valid = report.is_valid();
            Ok((fields([("output", output(Document::PervCube(c))), ("report", report_value(&report))]), valid))
        }
        "encode-sheaf" => {
            arity(docs, &[1])?;
            let e = match &docs[0] {
                Document::PervDisk(p) => encode_sheaf(p, flags.dual)?,
                Document::PervFlag(_) if flags.dual => {
                    return Err(malformed("flags only have the sheaf encoding"))
                }
                Document::PervFlag(p) => encode_sheaf_flag(p)?,
                other => return Err(wrong(other, "perv_disk or perv_flag")),
            };
            let report = verify_encoding(&e);
            let valid = report.is_valid();
            Ok((fields([("output", output(Document::SheafEncoding(e))), ("report", report_value(&report))]), valid))
        }
        "verify-encoding" => {
            arity(docs, &[1])?;
            let Document::SheafEncoding(e) = &docs[0] else {
                return Err(wrong(&docs[0], "sheaf_encoding"));
            };
            report_only(verify_encoding(e))
        }
        "dk-normalize" => {
            arity(docs, &[1])?;
            let Document::SimplicialVS(x) = &docs[0] else {
                return Err(wrong(&docs[0], "simplicial_vs"));
            };
            let c = doldkan::normalize(x)?;
            ok(fields([("output", complex_value(&c)), ("homology", homology_value(&c)?)]))
        }
        "dk-gamma" => {
            arity(docs, &[1])?;
            let c = complex(&docs[0])?;
            let top = flags.top.unwrap_or(c.hi().max(0) as usize);
            let x = doldkan::gamma(c, top)?;
            ok(fields([("output", output(Document::SimplicialVS(x)))]))
        }
        "zeta" | "mobius" => {
            arity(docs, &[1])?;
            let p = poset(&docs[0])?;
            p.ensure_valid()?;
            let m = if command == "zeta" { zeta(p) } else { mobius(p)? };
            ok(fields([("output", int_matrix_value(&m))]))
        }
        "k0-compose" => {
            arity(docs, &[2, 3])?;
            let (n, m) = (int_matrix(&docs[0])?, int_matrix(&docs[1])?);
            let middle = match docs.get(2) {
                Some(d) => poset(d)?.clone(),
                None => FinPoset::chain(n.cols()),
            };
            let c = k0_compose(n, m, &middle)?;
            let mut f = fields([("output", int_matrix_value(&c))]);
            if (c.rows(), c.cols()) == (1, 1) {
                f.insert("value".into(), json!(c.get(0, 0).to_string()));
            }
            ok(f)
        }
        "lax-compose" => {
            arity(docs, &[2])?;
            let (Document::Delta1ChainMatrix(n), Document::Delta1ChainMatrix(m)) = (&docs[0], &docs[1]) else {
                return Err(malformed("expected two delta1_chain_matrix documents"));
            };
            let c = lax_compose_delta1(n, m)?;
            let chi = c.euler_matrix();
            let expected = k0_delta1_compose(&n.euler_matrix(), &m.euler_matrix(), m.g_tgt().euler_characteristic())?;
            let agrees = chi == expected;
            Ok((
                fields([
                    ("output", output(Document::Delta1ChainMatrix(c))),
                    ("euler", int_matrix_value(&chi)),
                    ("euler_matches_k0", json!(agrees)),
                ]),
                agrees,
            ))
        }
        "cof" | "fib" => {
            arity(docs, &[1])?;
            let x = ArrowObject::new(chain_map(&docs[0])?.clone())?;
            let y = if command == "cof" { cof_action(&x)? } else { fib_action(&x)? };
            ok(fields([("output", output(Document::Arrow(y.map().clone())))]))
        }
        "cc2" => {
            arity(docs, &[2])?;
            let (u, v) = (chain_map(&docs[0])?, chain_map(&docs[1])?);
            let c = simplex::cc2(u, v)?;
            let h = homology_value(&c.level2)?;
            let acyclic = c.level2.is_acyclic()?;
            Ok((
                fields([
                    ("output", output(Document::CatCochain2(c))),
                    ("level2_homology", h),
                    ("acyclic", json!(acyclic)),
                ]),
                acyclic,
            ))
        }
        other => {
            let names: Vec<&str> = COMMANDS.iter().map(|c| c.0).collect();
            Err(malformed(format!("unknown command {other:?}; expected one of {}", names.join(", "))))
        }
    }
}

fn report_only(report: Report) -> Res<(Fields, bool)> {
    let valid = report.is_valid();
    let mut f = Map::new();
    f.insert("status".into(), json!(if valid { "valid" } else { "invalid" }));
    f.insert("report".into(), report_value(&report));
    Ok((f, valid))
}

fn validate(d: &Document) -> Res<(Fields, bool)> {
    let mut extra: Vec<(&str, Value)> = Vec::new();
    let report = match d {
        Document::ChainComplex(c) => c.validate(),
        Document::ChainMap(f) | Document::Arrow(f) => map_report(f),
        Document::ChainHomotopy(h) => {
            let mut r = Report::new();
            r.absorb("source", h.source().validate());
            r.absorb("target", h.target().validate());
            r
        }
        Document::MultiComplex(m) => m.validate(),
        Document::FdAlgebra(a) => a.validate(),
        Document::Koszul(k) => {
            let r = k.algebra.validate();
            if r.is_valid() {
                match koszul(&k.algebra, &k.lambdas) {
                    Err(Error::Invalid(r)) => r,
                    Err(e) => return Err(e),
                    Ok(_) => r,
                }
            } else {
                r
            }
        }
        Document::PervDisk(p) => {
            extra.push(("T", matrix_value(&p.t_psi())));
            extra.push(("T_phi", matrix_value(&p.t_phi())));
            p.validate()
        }
        Document::PervFlag(p) => {
            let mut r = p.validate();
            if r.is_valid() {
                r.absorb("factorization", flag_factorization(p));
            }
            extra.push(("T", Value::Array((0..=p.n()).map(|k| matrix_value(&p.monodromy(k))).collect())));
            r
        }
        Document::PervCube(c) => c.validate(),
        Document::LocalStar(s) => s.validate(),
        Document::SheafEncoding(e) => verify_encoding(e),
        Document::FinPoset(p) => p.validate(),
        Document::IntMatrix(_) | Document::Result(_) => Report::new(),
        Document::Delta1ChainMatrix(m) => m.validate(),
        Document::SimplicialVS(x) => x.validate(),
        Document::CatCochain2(c) => {
            let mut r = Report::new();
            r.absorb("u", map_report(&c.level0.u));
            r.absorb("v", map_report(&c.level0.v));
            r.absorb("alpha", map_report(&c.level1.alpha));
            r.absorb("beta", map_report(&c.level1.beta));
            r.absorb("level2", c.level2.validate());
            if r.is_valid() {
                let ba = c.level1.beta.after(&c.level1.alpha)?;
                let zero = ChainMap::zero(ba.source(), ba.target());
                if !chain::check_homotopy(&zero, &ba, &c.level1.h)? {
                    r.push("homotopy", "h", "βα ≠ dh + hd");
                }
            }
            r
        }
        Document::Report(r) => r.clone(),
    };
    let valid = report.is_valid();
    let mut f = Map::new();
    f.insert("input".into(), json!(d.type_tag()));
    f.insert("status".into(), json!(if valid { "valid" } else { "invalid" }));
    f.insert("report".into(), report_value(&report));
    for (k, v) in extra {
        f.insert(k.into(), v);
    }
    Ok((f, valid))
}
