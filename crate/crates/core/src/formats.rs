//! JSON and DOT encodings of diagrams, functors, tensors and networks.
//! JSON objects come out with sorted keys since `serde_json` keeps maps
//! ordered.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::hypergraph::{HyperDiagram, Port};
use crate::monoidal::{Diagram, DiagramBox};
use crate::rigid::{RBox, RDiagram, RKind, RigidOb, RigidTy};
use crate::tensor::{tensor_functor, Dim, Semiring, Tensor, TensorFunctor, TensorNet};

/// Reads JSON text, locating syntax errors by line and column.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Pretty-printed JSON followed by a newline.
pub fn write_json(v: &Value) -> String {
    let mut out = serde_json::to_string_pretty(v).expect("values serialize");
    out.push('\n');
    out
}

fn malformed(what: &str) -> Error {
    Error::IllTyped(format!("malformed {what}"))
}

fn ty_to_json(t: &RigidTy) -> Value {
    Value::Array(t.iter().map(|x| Value::String(x.to_string())).collect())
}

fn ty_from_json(v: &Value) -> Result<RigidTy> {
    v.as_array()
        .ok_or_else(|| malformed("type"))?
        .iter()
        .map(|x| {
            x.as_str()
                .and_then(RigidOb::parse)
                .ok_or_else(|| malformed(&format!("object {x}")))
        })
        .collect()
}

fn kind_name(k: &RKind) -> &'static str {
    match k {
        RKind::Gen(_) => "gen",
        RKind::Cup => "cup",
        RKind::Cap => "cap",
        RKind::Spider => "spider",
        RKind::Swap => "swap",
    }
}

/// `{"dom", "cod", "boxes", "offsets"}`, each box carrying its kind and,
/// for generators, its name.
pub fn diagram_to_json(d: &RDiagram) -> Value {
    let boxes: Vec<Value> = d
        .boxes()
        .iter()
        .map(|b| {
            let mut m = Map::new();
            m.insert("kind".into(), kind_name(b.kind()).into());
            if let RKind::Gen(name) = b.kind() {
                m.insert("name".into(), name.clone().into());
            }
            m.insert("dom".into(), ty_to_json(b.dom()));
            m.insert("cod".into(), ty_to_json(b.cod()));
            Value::Object(m)
        })
        .collect();
    json!({
        "dom": ty_to_json(d.dom()),
        "cod": ty_to_json(d.cod()),
        "boxes": boxes,
        "offsets": d.offsets(),
    })
}

pub fn diagram_from_json(v: &Value) -> Result<RDiagram> {
    let field = |k: &str| {
        v.get(k)
            .ok_or_else(|| malformed(&format!("diagram: no field {k:?}")))
    };
    let boxes = field("boxes")?
        .as_array()
        .ok_or_else(|| malformed("box list"))?
        .iter()
        .map(|b| {
            let get = |k: &str| {
                b.get(k)
                    .ok_or_else(|| malformed(&format!("box: no field {k:?}")))
            };
            let kind = match get("kind")?.as_str() {
                Some("gen") => RKind::Gen(
                    get("name")?
                        .as_str()
                        .ok_or_else(|| malformed("box name"))?
                        .into(),
                ),
                Some("cup") => RKind::Cup,
                Some("cap") => RKind::Cap,
                Some("spider") => RKind::Spider,
                Some("swap") => RKind::Swap,
                _ => return Err(malformed(&format!("box kind in {b}"))),
            };
            RBox::from_parts(kind, ty_from_json(get("dom")?)?, ty_from_json(get("cod")?)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let offsets = field("offsets")?
        .as_array()
        .ok_or_else(|| malformed("offset list"))?
        .iter()
        .map(|o| match o.as_i64() {
            Some(n) if n < 0 => Err(Error::NegativeOffset(n)),
            Some(n) => Ok(n as usize),
            None => Err(malformed("offset")),
        })
        .collect::<Result<Vec<_>>>()?;
    Diagram::new(
        ty_from_json(field("dom")?)?,
        ty_from_json(field("cod")?)?,
        boxes,
        offsets,
    )
}

/// Scalars that can be read from and written to JSON.
pub trait JsonScalar: Semiring {
    fn from_json(v: &Value) -> Result<Self>;
    fn to_json(self) -> Value;
}

impl JsonScalar for bool {
    /// Accepts `true`/`false` as well as `0`/`1`.
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Bool(b) => Ok(*b),
            Value::Number(n) if n.as_f64() == Some(0.0) => Ok(false),
            Value::Number(n) if n.as_f64() == Some(1.0) => Ok(true),
            _ => Err(Error::Value(format!("{v} is not a boolean"))),
        }
    }

    fn to_json(self) -> Value {
        Value::Bool(self)
    }
}

impl JsonScalar for u64 {
    fn from_json(v: &Value) -> Result<Self> {
        v.as_u64()
            .ok_or_else(|| Error::Value(format!("{v} is not a natural number")))
    }

    fn to_json(self) -> Value {
        self.into()
    }
}

impl JsonScalar for f64 {
    fn from_json(v: &Value) -> Result<Self> {
        v.as_f64()
            .ok_or_else(|| Error::Value(format!("{v} is not a number")))
    }

    fn to_json(self) -> Value {
        self.into()
    }
}

impl JsonScalar for Complex64 {
    /// A plain number, or a pair `[re, im]`.
    fn from_json(v: &Value) -> Result<Self> {
        if let Some(re) = v.as_f64() {
            return Ok(Complex64::new(re, 0.0));
        }
        match v.as_array().map(Vec::as_slice) {
            Some([re, im]) => match (re.as_f64(), im.as_f64()) {
                (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
                _ => Err(Error::Value(format!("{v} is not a complex number"))),
            },
            _ => Err(Error::Value(format!("{v} is not a complex number"))),
        }
    }

    fn to_json(self) -> Value {
        json!([self.re, self.im])
    }
}

fn array_from_json<S: JsonScalar>(v: &Value) -> Result<Vec<S>> {
    v.as_array()
        .ok_or_else(|| Error::Value(format!("{v} is not an array")))?
        .iter()
        .map(S::from_json)
        .collect()
}

fn dim_from_json(v: &Value) -> Result<Dim> {
    let dims: Vec<usize> = match v {
        Value::Number(_) => vec![v.as_u64().ok_or_else(|| malformed("dimension"))? as usize],
        Value::Array(xs) => xs
            .iter()
            .map(|x| {
                x.as_u64()
                    .map(|n| n as usize)
                    .ok_or_else(|| malformed("dimension"))
            })
            .collect::<Result<_>>()?,
        _ => return Err(malformed("dimension")),
    };
    Dim::try_new(&dims)
}

/// The semiring named by a functor or net file, `real` by default.
pub fn semiring_of(v: &Value) -> &str {
    v.get("semiring").and_then(Value::as_str).unwrap_or("real")
}

/// A tensor functor from `{"ob": {name: dims}, "ar": {name: flat array}}`.
pub fn functor_from_json<S: JsonScalar>(v: &Value) -> Result<TensorFunctor<S>> {
    let map = |k: &str| {
        v.get(k)
            .and_then(Value::as_object)
            .ok_or_else(|| malformed(&format!("functor: no object {k:?}")))
    };
    let ob = map("ob")?
        .iter()
        .map(|(k, d)| Ok((k.clone(), dim_from_json(d)?)))
        .collect::<Result<HashMap<_, _>>>()?;
    let ar = map("ar")?
        .iter()
        .map(|(k, a)| Ok((k.clone(), array_from_json(a)?)))
        .collect::<Result<HashMap<_, _>>>()?;
    Ok(tensor_functor(ob, ar))
}

pub fn tensor_to_json<S: JsonScalar>(t: &Tensor<S>) -> Value {
    json!({
        "dom": t.dom().dims(),
        "cod": t.cod().dims(),
        "data": t.data().iter().map(|&x| x.to_json()).collect::<Vec<_>>(),
        "semiring": S::NAME,
    })
}

pub fn net_to_json<S: JsonScalar>(n: &TensorNet<S>) -> Value {
    json!({
        "vertices": n.vertices(),
        "edges": n.edges().iter().map(|&(u, v, d)| json!([u, v, d])).collect::<Vec<_>>(),
        "tensors": n
            .tensors()
            .iter()
            .map(|t| t.data().iter().map(|&x| x.to_json()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "semiring": S::NAME,
    })
}

pub fn net_from_json<S: JsonScalar>(v: &Value) -> Result<TensorNet<S>> {
    let list = |k: &str| {
        v.get(k)
            .and_then(Value::as_array)
            .ok_or_else(|| malformed(&format!("net: no list {k:?}")))
    };
    let vertices = list("vertices")?
        .iter()
        .map(|x| {
            x.as_str()
                .map(String::from)
                .ok_or_else(|| malformed("vertex name"))
        })
        .collect::<Result<Vec<_>>>()?;
    let edges = list("edges")?
        .iter()
        .map(|e| {
            let xs: Vec<usize> = e
                .as_array()
                .ok_or_else(|| malformed("edge"))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|n| n as usize)
                        .ok_or_else(|| malformed("edge"))
                })
                .collect::<Result<_>>()?;
            match xs[..] {
                [u, v, d] => Ok((u, v, d)),
                _ => Err(malformed("edge")),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut tensors = Vec::new();
    for (v, data) in list("tensors")?.iter().enumerate() {
        let shape: Vec<usize> = edges
            .iter()
            .flat_map(|&(a, b, d)| [(a == v).then_some(d), (b == v).then_some(d)])
            .flatten()
            .collect();
        tensors.push(Tensor::state(
            Dim::try_new(&shape)?,
            array_from_json(data)?,
        )?);
    }
    TensorNet::new(vertices, edges, tensors)
}

pub fn hyper_to_json(h: &HyperDiagram) -> Value {
    let names =
        |t: &crate::monoidal::Ty| t.iter().map(|x| x.name().to_string()).collect::<Vec<_>>();
    json!({
        "dom": names(h.dom()),
        "cod": names(h.cod()),
        "boxes": h
            .boxes()
            .iter()
            .map(|b| json!({"name": b.name, "dom": names(&b.dom), "cod": names(&b.cod)}))
            .collect::<Vec<_>>(),
        "wires": h.wires(),
        "spider_types": h.spider_types().iter().map(|x| x.name().to_string()).collect::<Vec<_>>(),
    })
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// A directed graph with a node per box and an edge per wire segment,
/// labelled by its type.
pub fn diagram_to_dot(d: &RDiagram) -> String {
    let mut out = String::from("digraph {\n  rankdir=TB;\n  node [shape=box];\n");
    let mut open: Vec<(String, String)> = Vec::new();
    for (i, x) in d.dom().iter().enumerate() {
        let _ = writeln!(out, "  in{i} [shape=point, label=\"\"];");
        open.push((format!("in{i}"), x.to_string()));
    }
    for (i, (b, &off)) in d.boxes().iter().zip(d.offsets()).enumerate() {
        let node = format!("b{i}");
        match b.kind() {
            RKind::Gen(name) => {
                let _ = writeln!(out, "  {node} [label={}];", quote(name));
            }
            k => {
                let _ = writeln!(
                    out,
                    "  {node} [shape=point, xlabel={}];",
                    quote(kind_name(k))
                );
            }
        }
        for (src, label) in open.drain(off..off + b.dom().len()) {
            let _ = writeln!(out, "  {src} -> {node} [label={}];", quote(&label));
        }
        let produced: Vec<(String, String)> = b
            .cod()
            .iter()
            .map(|x| (node.clone(), x.to_string()))
            .collect();
        open.splice(off..off, produced);
    }
    for (i, (src, label)) in open.into_iter().enumerate() {
        let _ = writeln!(out, "  out{i} [shape=point, label=\"\"];");
        let _ = writeln!(out, "  {src} -> out{i} [label={}];", quote(&label));
    }
    out.push_str("}\n");
    out
}

/// An undirected graph joining every port to its spider.
pub fn hyper_to_dot(h: &HyperDiagram) -> String {
    let mut out = String::from("graph {\n  node [shape=box];\n");
    for (s, x) in h.spider_types().iter().enumerate() {
        let _ = writeln!(out, "  s{s} [shape=circle, label={}];", quote(x.name()));
    }
    for (i, b) in h.boxes().iter().enumerate() {
        let _ = writeln!(out, "  b{i} [label={}];", quote(&b.name));
    }
    for (port, &s) in h.ports().iter().zip(h.wires()) {
        let end = match port {
            Port::Dom(i) => {
                let _ = writeln!(out, "  in{i} [shape=point, label=\"\"];");
                format!("in{i}")
            }
            Port::Cod(i) => {
                let _ = writeln!(out, "  out{i} [shape=point, label=\"\"];");
                format!("out{i}")
            }
            Port::BoxIn(b, _) | Port::BoxOut(b, _) => format!("b{b}"),
        };
        let _ = writeln!(out, "  {end} -- s{s};");
    }
    out.push_str("}\n");
    out
}

/// An undirected graph with the edges labelled by their dimension.
pub fn net_to_dot<S: Semiring>(n: &TensorNet<S>) -> String {
    let mut out = String::from("graph {\n");
    for (i, v) in n.vertices().iter().enumerate() {
        let _ = writeln!(out, "  v{i} [label={}];", quote(v));
    }
    for &(u, v, d) in n.edges() {
        let _ = writeln!(out, "  v{u} -- v{v} [label=\"{d}\"];");
    }
    out.push_str("}\n");
    out
}
