//! JSON forms of words, decompositions, decisions and elementary
//! automorphisms.
//!
//! Syntax errors carry a line and column; schema errors carry the JSON path
//! of the offending value.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::elementary::{self, EdgeEnd, ElementaryAut, ElementaryKind, EndSide};
use crate::forking::{ComponentReport, Evidence, IndependenceVerdict, JsjEvidence, Route, Verdict};
use crate::freewords::{Letter, Word};
use crate::graphofgroups::{
    Edge, MarkedGraphOfGroups, MinimalSubgraph, NormalForm, Subgraph, SurfaceData, ValidationReport, Vertex,
    VertexKind,
};
use crate::whitehead::{FnAutomorphism, ForksCertificate, Side, SplitDecision, SplitWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("at {path}: {message}")]
    Schema { path: String, message: String },
}

fn schema(path: &str, message: impl Into<String>) -> IoError {
    IoError::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

pub fn parse_json(text: &str) -> Result<Value, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, IoError> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, IoError> {
    m.get(key).ok_or_else(|| schema(path, format!("missing field {key:?}")))
}

fn opt_field<'a>(m: &'a Map<String, Value>, key: &str) -> Option<&'a Value> {
    m.get(key).filter(|v| !v.is_null())
}

fn as_u32(v: &Value, path: &str) -> Result<u32, IoError> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn as_bool(v: &Value, path: &str) -> Result<bool, IoError> {
    v.as_bool().ok_or_else(|| schema(path, "expected a boolean"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str, IoError> {
    v.as_str().ok_or_else(|| schema(path, "expected a string"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, IoError> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn u32_set(v: &Value, path: &str) -> Result<BTreeSet<u32>, IoError> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_u32(x, &format!("{path}[{i}]")))
        .collect()
}

/// A word given as a letter string or an array of nonzero integers.
pub fn word_from_json(rank: u32, v: &Value, path: &str) -> Result<Word, IoError> {
    let bad = |e: crate::freewords::WordError| schema(path, e.to_string());
    match v {
        Value::String(s) => {
            if !s.chars().all(|c| c.is_ascii_alphabetic()) && s != "1" {
                return Err(schema(path, format!("malformed word {s:?}")));
            }
            Word::parse(rank, s).map_err(bad)
        }
        Value::Array(xs) => {
            let mut letters = Vec::with_capacity(xs.len());
            for (i, x) in xs.iter().enumerate() {
                let l = x
                    .as_i64()
                    .and_then(|l| Letter::try_from(l).ok())
                    .filter(|&l| l != 0)
                    .ok_or_else(|| schema(&format!("{path}[{i}]"), "expected a nonzero integer"))?;
                letters.push(l);
            }
            Word::from_letters(rank, letters).map_err(bad)
        }
        _ => Err(schema(path, "expected a word (string or integer array)")),
    }
}

/// Letter string up to rank 26, integer array beyond.
pub fn word_to_json(w: &Word) -> Value {
    if w.rank() <= 26 {
        Value::String(w.letters().iter().map(|&x| letter_char(x)).collect())
    } else {
        json!(w.letters())
    }
}

fn letter_char(x: Letter) -> char {
    if x > 0 {
        (b'a' + (x - 1) as u8) as char
    } else {
        (b'A' + (-x - 1) as u8) as char
    }
}

pub fn tuple_from_json(rank: u32, v: &Value, path: &str) -> Result<Vec<Word>, IoError> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| word_from_json(rank, x, &format!("{path}[{i}]")))
        .collect()
}

pub fn tuple_to_json(t: &[Word]) -> Value {
    Value::Array(t.iter().map(word_to_json).collect())
}

fn kind_from_json(m: &Map<String, Value>, path: &str) -> Result<VertexKind, IoError> {
    let kpath = format!("{path}.kind");
    let name = as_str(field(m, "kind", path)?, &kpath)?.to_ascii_lowercase();
    match name.as_str() {
        "rigid" => Ok(VertexKind::Rigid),
        "ztype" | "z_type" | "z" => Ok(VertexKind::ZType),
        "basepoint" => Ok(VertexKind::Basepoint),
        "surface" => {
            let spath = format!("{path}.surface");
            let s = obj(field(m, "surface", path)?, &spath)?;
            Ok(VertexKind::Surface(SurfaceData {
                genus: as_u32(field(s, "genus", &spath)?, &format!("{spath}.genus"))?,
                orientable: as_bool(field(s, "orientable", &spath)?, &format!("{spath}.orientable"))?,
                boundary: as_u32(field(s, "boundary", &spath)?, &format!("{spath}.boundary"))?,
            }))
        }
        other => Err(schema(&kpath, format!("unknown vertex kind {other:?}"))),
    }
}

pub fn graph_from_json(v: &Value) -> Result<MarkedGraphOfGroups, IoError> {
    let m = obj(v, "$")?;
    let rank = as_u32(field(m, "rank", "$")?, "$.rank")?;
    if rank == 0 {
        return Err(schema("$.rank", "rank must be at least 1"));
    }
    let mut vertices = Vec::new();
    for (i, x) in as_array(field(m, "vertices", "$")?, "$.vertices")?.iter().enumerate() {
        let path = format!("$.vertices[{i}]");
        let vm = obj(x, &path)?;
        vertices.push(Vertex {
            id: as_u32(field(vm, "id", &path)?, &format!("{path}.id"))?,
            kind: kind_from_json(vm, &path)?,
            generators: tuple_from_json(rank, field(vm, "generators", &path)?, &format!("{path}.generators"))?,
        });
    }
    let mut edges = Vec::new();
    for (i, x) in as_array(field(m, "edges", "$")?, "$.edges")?.iter().enumerate() {
        let path = format!("$.edges[{i}]");
        let em = obj(x, &path)?;
        let word = |key: &str| word_from_json(rank, field(em, key, &path)?, &format!("{path}.{key}"));
        edges.push(Edge {
            id: as_u32(field(em, "id", &path)?, &format!("{path}.id"))?,
            from: as_u32(field(em, "from", &path)?, &format!("{path}.from"))?,
            to: as_u32(field(em, "to", &path)?, &format!("{path}.to"))?,
            edge_generator: word("edge_generator")?,
            image_from: word("image_from")?,
            image_to: word("image_to")?,
            tree: as_bool(field(em, "tree", &path)?, &format!("{path}.tree"))?,
            stable_letter: opt_field(em, "stable_letter")
                .map(|s| word_from_json(rank, s, &format!("{path}.stable_letter")))
                .transpose()?,
        });
    }
    let basepoint = opt_field(m, "basepoint")
        .map(|b| as_u32(b, "$.basepoint"))
        .transpose()?;
    Ok(MarkedGraphOfGroups {
        rank,
        vertices,
        edges,
        basepoint,
    })
}

pub fn graph_from_str(text: &str) -> Result<MarkedGraphOfGroups, IoError> {
    graph_from_json(&parse_json(text)?)
}

pub fn graph_to_json(g: &MarkedGraphOfGroups) -> Value {
    let vertices: Vec<Value> = g
        .vertices
        .iter()
        .map(|v| {
            let mut o = json!({
                "id": v.id,
                "kind": v.kind.name(),
                "generators": tuple_to_json(&v.generators),
            });
            if let VertexKind::Surface(s) = &v.kind {
                o["surface"] = json!({
                    "genus": s.genus,
                    "orientable": s.orientable,
                    "boundary": s.boundary,
                });
            }
            o
        })
        .collect();
    let edges: Vec<Value> = g
        .edges
        .iter()
        .map(|e| {
            let mut o = json!({
                "id": e.id,
                "from": e.from,
                "to": e.to,
                "edge_generator": word_to_json(&e.edge_generator),
                "image_from": word_to_json(&e.image_from),
                "image_to": word_to_json(&e.image_to),
                "tree": e.tree,
            });
            if let Some(t) = &e.stable_letter {
                o["stable_letter"] = word_to_json(t);
            }
            o
        })
        .collect();
    let mut out = json!({ "rank": g.rank, "vertices": vertices, "edges": edges });
    if let Some(b) = g.basepoint {
        out["basepoint"] = json!(b);
    }
    out
}

pub fn report_to_json(r: &ValidationReport) -> Value {
    json!({
        "all_passed": r.all_passed(),
        "checks": r.checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    })
}

pub fn syllables_to_json(nf: &NormalForm) -> Value {
    json!({
        "start": nf.start,
        "elements": tuple_to_json(&nf.elements),
        "crossings": nf.crossings.iter().map(|c| json!({"edge": c.edge, "forward": c.forward})).collect::<Vec<_>>(),
    })
}

pub fn subgraph_to_json(s: &Subgraph) -> Value {
    json!({ "vertices": s.vertices, "edges": s.edges })
}

fn subgraph_from_json(v: &Value, path: &str) -> Result<Subgraph, IoError> {
    let m = obj(v, path)?;
    Ok(Subgraph {
        vertices: u32_set(field(m, "vertices", path)?, &format!("{path}.vertices"))?,
        edges: u32_set(field(m, "edges", path)?, &format!("{path}.edges"))?,
    })
}

pub fn minimal_subgraph_to_json(m: &MinimalSubgraph) -> Value {
    json!({
        "vertices": m.subgraph.vertices,
        "edges": m.subgraph.edges,
        "base": m.base,
        "conjugator": word_to_json(&m.conjugator),
    })
}

pub fn automorphism_to_json(phi: &FnAutomorphism) -> Value {
    tuple_to_json(phi.images())
}

pub fn automorphism_from_json(rank: u32, v: &Value, path: &str) -> Result<FnAutomorphism, IoError> {
    let images = tuple_from_json(rank, v, path)?;
    FnAutomorphism::new(rank, images).map_err(|e| schema(path, e.to_string()))
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::B => "b",
        Side::C => "c",
    }
}

pub fn split_decision_to_json(d: &SplitDecision, depth: u32) -> Value {
    let witness = match d {
        SplitDecision::Independent(w) => json!({
            "phi": automorphism_to_json(&w.phi),
            "i_f": w.i_f,
            "i_a": w.i_a,
            "i_f_prime": w.i_f_prime,
        }),
        SplitDecision::Forks(ForksCertificate::Intersection { witness }) => json!({
            "certificate": "intersection",
            "element": word_to_json(witness),
        }),
        SplitDecision::Forks(ForksCertificate::Filling { filling_side, escaping }) => json!({
            "certificate": "filling",
            "filling_side": side_name(*filling_side),
            "element": word_to_json(escaping),
        }),
        SplitDecision::Unknown(explored) => json!({ "explored": explored }),
    };
    json!({ "verdict": d.verdict(), "witness": witness, "depth": depth })
}

pub fn split_decision_from_json(rank: u32, v: &Value, path: &str) -> Result<(SplitDecision, u32), IoError> {
    let m = obj(v, path)?;
    let depth = as_u32(field(m, "depth", path)?, &format!("{path}.depth"))?;
    let wpath = format!("{path}.witness");
    let w = obj(field(m, "witness", path)?, &wpath)?;
    let idx = |key: &str| -> Result<Vec<u32>, IoError> {
        Ok(u32_set(field(w, key, &wpath)?, &format!("{wpath}.{key}"))?.into_iter().collect())
    };
    let element = || word_from_json(rank, field(w, "element", &wpath)?, &format!("{wpath}.element"));
    let decision = match as_str(field(m, "verdict", path)?, &format!("{path}.verdict"))? {
        "independent" => SplitDecision::Independent(SplitWitness {
            phi: automorphism_from_json(rank, field(w, "phi", &wpath)?, &format!("{wpath}.phi"))?,
            i_f: idx("i_f")?,
            i_a: idx("i_a")?,
            i_f_prime: idx("i_f_prime")?,
        }),
        "forks" => match as_str(field(w, "certificate", &wpath)?, &format!("{wpath}.certificate"))? {
            "intersection" => SplitDecision::Forks(ForksCertificate::Intersection { witness: element()? }),
            "filling" => {
                let spath = format!("{wpath}.filling_side");
                let side = match as_str(field(w, "filling_side", &wpath)?, &spath)? {
                    "b" => Side::B,
                    "c" => Side::C,
                    other => return Err(schema(&spath, format!("unknown side {other:?}"))),
                };
                SplitDecision::Forks(ForksCertificate::Filling {
                    filling_side: side,
                    escaping: element()?,
                })
            }
            other => return Err(schema(&wpath, format!("unknown certificate {other:?}"))),
        },
        "unknown" => SplitDecision::Unknown(as_u32(field(w, "explored", &wpath)?, &format!("{wpath}.explored"))?),
        other => return Err(schema(&format!("{path}.verdict"), format!("unknown verdict {other:?}"))),
    };
    Ok((decision, depth))
}

pub fn verdict_to_json(v: &IndependenceVerdict) -> Value {
    let evidence = match &v.evidence {
        Evidence::Split(d) => {
            let depth = v
                .assumptions
                .iter()
                .find_map(|a| a.strip_prefix("search depth ")?.parse().ok())
                .unwrap_or(0);
            split_decision_to_json(d, depth)
        }
        Evidence::Jsj(e) => json!({
            "lambda_b": subgraph_to_json(&e.lambda_b),
            "lambda_c": subgraph_to_json(&e.lambda_c),
            "components": e.components.iter().map(|c| json!({
                "vertices": c.vertices,
                "edges": c.edges,
                "non_z": c.non_z.iter().map(|(id, k)| json!({"id": id, "kind": k})).collect::<Vec<_>>(),
                "ok": c.ok,
            })).collect::<Vec<_>>(),
            "decomposition_hash": e.decomposition_hash,
        }),
    };
    json!({
        "verdict": v.verdict.as_str(),
        "route": v.route.as_str(),
        "assumptions": v.assumptions,
        "evidence": evidence,
    })
}

fn static_kind(name: &str, path: &str) -> Result<&'static str, IoError> {
    ["Rigid", "Surface", "ZType", "Basepoint"]
        .into_iter()
        .find(|k| k.eq_ignore_ascii_case(name))
        .ok_or_else(|| schema(path, format!("unknown vertex kind {name:?}")))
}

pub fn verdict_from_json(rank: u32, v: &Value) -> Result<IndependenceVerdict, IoError> {
    let m = obj(v, "$")?;
    let verdict = match as_str(field(m, "verdict", "$")?, "$.verdict")? {
        "independent" => Verdict::Independent,
        "forks" => Verdict::Forks,
        "unknown" => Verdict::Unknown,
        other => return Err(schema("$.verdict", format!("unknown verdict {other:?}"))),
    };
    let route = match as_str(field(m, "route", "$")?, "$.route")? {
        "free_factor" => Route::FreeFactor,
        "jsj" => Route::Jsj,
        other => return Err(schema("$.route", format!("unknown route {other:?}"))),
    };
    let assumptions = as_array(field(m, "assumptions", "$")?, "$.assumptions")?
        .iter()
        .enumerate()
        .map(|(i, a)| as_str(a, &format!("$.assumptions[{i}]")).map(str::to_string))
        .collect::<Result<Vec<_>, _>>()?;
    let ev = field(m, "evidence", "$")?;
    let evidence = match route {
        Route::FreeFactor => Evidence::Split(split_decision_from_json(rank, ev, "$.evidence")?.0),
        Route::Jsj => {
            let e = obj(ev, "$.evidence")?;
            let mut components = Vec::new();
            let cpath = "$.evidence.components";
            for (i, c) in as_array(field(e, "components", "$.evidence")?, cpath)?.iter().enumerate() {
                let path = format!("{cpath}[{i}]");
                let cm = obj(c, &path)?;
                let mut non_z = Vec::new();
                for (j, n) in as_array(field(cm, "non_z", &path)?, &format!("{path}.non_z"))?.iter().enumerate() {
                    let npath = format!("{path}.non_z[{j}]");
                    let nm = obj(n, &npath)?;
                    let kind = as_str(field(nm, "kind", &npath)?, &format!("{npath}.kind"))?;
                    non_z.push((
                        as_u32(field(nm, "id", &npath)?, &format!("{npath}.id"))?,
                        static_kind(kind, &format!("{npath}.kind"))?,
                    ));
                }
                components.push(ComponentReport {
                    vertices: u32_set(field(cm, "vertices", &path)?, &format!("{path}.vertices"))?,
                    edges: u32_set(field(cm, "edges", &path)?, &format!("{path}.edges"))?,
                    non_z,
                    ok: as_bool(field(cm, "ok", &path)?, &format!("{path}.ok"))?,
                });
            }
            Evidence::Jsj(JsjEvidence {
                lambda_b: subgraph_from_json(field(e, "lambda_b", "$.evidence")?, "$.evidence.lambda_b")?,
                lambda_c: subgraph_from_json(field(e, "lambda_c", "$.evidence")?, "$.evidence.lambda_c")?,
                components,
                decomposition_hash: as_str(
                    field(e, "decomposition_hash", "$.evidence")?,
                    "$.evidence.decomposition_hash",
                )?
                .to_string(),
            })
        }
    };
    Ok(IndependenceVerdict {
        verdict,
        route,
        assumptions,
        evidence,
    })
}

fn end_side_name(s: EndSide) -> &'static str {
    match s {
        EndSide::From => "from",
        EndSide::To => "to",
    }
}

fn end_side_from_json(v: &Value, path: &str) -> Result<EndSide, IoError> {
    match as_str(v, path)? {
        "from" => Ok(EndSide::From),
        "to" => Ok(EndSide::To),
        other => Err(schema(path, format!("unknown edge end {other:?}"))),
    }
}

/// Twists also carry `fixed` and `lift`; vertex automorphisms carry their
/// per-end `conjugators`.
pub fn elementary_to_json(a: &ElementaryAut) -> Value {
    match a.kind() {
        ElementaryKind::DehnTwist { edge, twister, fixed, lift } => json!({
            "kind": "dehn_twist",
            "edge": edge,
            "twister": word_to_json(twister),
            "fixed": end_side_name(*fixed),
            "lift": word_to_json(lift),
        }),
        ElementaryKind::VertexAut { vertex, images, conjugators } => json!({
            "kind": "vertex_aut",
            "vertex": vertex,
            "images": tuple_to_json(images),
            "conjugators": conjugators.iter().map(|(end, w)| json!({
                "edge": end.edge,
                "side": end_side_name(end.side),
                "word": word_to_json(w),
            })).collect::<Vec<_>>(),
        }),
        ElementaryKind::Inner { conjugator } => json!({
            "kind": "inner",
            "conjugator": word_to_json(conjugator),
        }),
    }
}

pub fn elementary_from_json(g: &MarkedGraphOfGroups, v: &Value, path: &str) -> Result<ElementaryAut, IoError> {
    let rank = g.rank;
    let m = obj(v, path)?;
    let word = |key: &str| word_from_json(rank, field(m, key, path)?, &format!("{path}.{key}"));
    let built = match as_str(field(m, "kind", path)?, &format!("{path}.kind"))? {
        "dehn_twist" => {
            let edge = as_u32(field(m, "edge", path)?, &format!("{path}.edge"))?;
            let fixed = opt_field(m, "fixed")
                .map(|f| end_side_from_json(f, &format!("{path}.fixed")))
                .transpose()?
                .unwrap_or(EndSide::From);
            let lift = opt_field(m, "lift")
                .map(|l| word_from_json(rank, l, &format!("{path}.lift")))
                .transpose()?
                .unwrap_or_else(|| Word::identity(rank));
            elementary::dehn_twist_oriented(g, edge, &word("twister")?, fixed, &lift)
        }
        "vertex_aut" => {
            let vertex = as_u32(field(m, "vertex", path)?, &format!("{path}.vertex"))?;
            let images = tuple_from_json(rank, field(m, "images", path)?, &format!("{path}.images"))?;
            let mut conj = BTreeMap::new();
            if let Some(cs) = opt_field(m, "conjugators") {
                for (i, c) in as_array(cs, &format!("{path}.conjugators"))?.iter().enumerate() {
                    let cpath = format!("{path}.conjugators[{i}]");
                    let cm = obj(c, &cpath)?;
                    let end = EdgeEnd {
                        edge: as_u32(field(cm, "edge", &cpath)?, &format!("{cpath}.edge"))?,
                        side: end_side_from_json(field(cm, "side", &cpath)?, &format!("{cpath}.side"))?,
                    };
                    conj.insert(end, word_from_json(rank, field(cm, "word", &cpath)?, &format!("{cpath}.word"))?);
                }
            }
            elementary::vertex_aut(g, vertex, &images, &conj)
        }
        "inner" => Ok(elementary::inner(&word("conjugator")?)),
        other => return Err(schema(&format!("{path}.kind"), format!("unknown automorphism kind {other:?}"))),
    };
    built.map_err(|e| schema(path, e.to_string()))
}

/// A list of elementary automorphisms: a bare array or `{"auts": [...]}`.
pub fn elementary_list_from_json(g: &MarkedGraphOfGroups, v: &Value) -> Result<Vec<ElementaryAut>, IoError> {
    let (list, path) = match v {
        Value::Object(m) => (field(m, "auts", "$")?, "$.auts"),
        _ => (v, "$"),
    };
    as_array(list, path)?
        .iter()
        .enumerate()
        .map(|(i, a)| elementary_from_json(g, a, &format!("{path}[{i}]")))
        .collect()
}

pub fn normal_form_to_json(z: &Word, factors: &[ElementaryAut]) -> Value {
    json!({
        "conjugator": word_to_json(z),
        "factors": factors.iter().map(elementary_to_json).collect::<Vec<_>>(),
    })
}
