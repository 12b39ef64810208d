//! JSON documents for diagrams, circuits, tensor networks, parameters and
//! shot counts.

use std::collections::BTreeMap;

use qnlp_core::ansatz::{Angle, Circuit, Endpoint, Gate, NodeKind, TensorNetwork, TnNode};
use qnlp_core::backends::{Counts, ParameterStore};
use qnlp_core::{AtomicType, Diagram, Generator, Layer, PType, TypeSeq};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TypeRef {
    base: String,
    z: i32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum BoxRef {
    Word { token: String, dom: Vec<TypeRef>, cod: Vec<TypeRef> },
    Cup { base: String, z: i32 },
    Cap { base: String, z: i32 },
    Spider { base: String, z: i32, n_in: usize, n_out: usize },
    Swap { left: TypeRef, right: TypeRef },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerRef {
    #[serde(rename = "box")]
    generator: BoxRef,
    offset: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramDoc {
    dom: Vec<TypeRef>,
    cod: Vec<TypeRef>,
    layers: Vec<LayerRef>,
}

fn type_ref(t: &PType) -> TypeRef {
    TypeRef { base: t.base.name().to_string(), z: t.z }
}

fn seq_ref(ts: &TypeSeq) -> Vec<TypeRef> {
    ts.iter().map(type_ref).collect()
}

fn ptype(r: &TypeRef) -> PType {
    PType::new(AtomicType::new(r.base.clone()), r.z)
}

fn seq(rs: &[TypeRef]) -> TypeSeq {
    TypeSeq(rs.iter().map(ptype).collect())
}

fn box_ref(g: &Generator) -> BoxRef {
    match g {
        Generator::Word { token, dom, cod } => {
            BoxRef::Word { token: token.clone(), dom: seq_ref(dom), cod: seq_ref(cod) }
        }
        Generator::Cup { base, z } => BoxRef::Cup { base: base.name().to_string(), z: *z },
        Generator::Cap { base, z } => BoxRef::Cap { base: base.name().to_string(), z: *z },
        Generator::Spider { base, z, n_in, n_out } => {
            BoxRef::Spider { base: base.name().to_string(), z: *z, n_in: *n_in, n_out: *n_out }
        }
        Generator::Swap { left, right } => BoxRef::Swap { left: type_ref(left), right: type_ref(right) },
    }
}

fn generator(b: &BoxRef) -> Generator {
    match b {
        BoxRef::Word { token, dom, cod } => Generator::Word { token: token.clone(), dom: seq(dom), cod: seq(cod) },
        BoxRef::Cup { base, z } => Generator::cup(AtomicType::new(base.clone()), *z),
        BoxRef::Cap { base, z } => Generator::cap(AtomicType::new(base.clone()), *z),
        BoxRef::Spider { base, z, n_in, n_out } => {
            Generator::Spider { base: AtomicType::new(base.clone()), z: *z, n_in: *n_in, n_out: *n_out }
        }
        BoxRef::Swap { left, right } => Generator::Swap { left: ptype(left), right: ptype(right) },
    }
}

/// Byte offset of a 1-based line and column.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    (start + column.saturating_sub(1)).min(text.len())
}

fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        offset: byte_offset(text, e.line(), e.column()),
        reason: e.to_string(),
    })
}

fn write<T: Serialize>(doc: &T) -> String {
    serde_json::to_string(doc).expect("documents serialize")
}

pub fn diagram_to_json(d: &Diagram) -> String {
    write(&DiagramDoc {
        dom: seq_ref(d.dom()),
        cod: seq_ref(d.cod()),
        layers: d.layers().iter().map(|l| LayerRef { generator: box_ref(&l.generator), offset: l.offset }).collect(),
    })
}

/// Parses and type-checks a diagram document.
pub fn diagram_from_json(text: &str) -> Result<Diagram> {
    let doc: DiagramDoc = parse(text)?;
    let layers = doc.layers.iter().map(|l| Layer::new(generator(&l.generator), l.offset)).collect();
    Ok(Diagram::new(seq(&doc.dom), seq(&doc.cod), layers)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum AngleRef {
    Const(f64),
    Sym(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OpRef {
    g: String,
    q: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<AngleRef>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitDoc {
    n_qubits: usize,
    ops: Vec<OpRef>,
    postselect: Vec<(usize, u8)>,
    open: Vec<usize>,
}

fn op_ref(g: &Gate) -> OpRef {
    let p = g.angle().map(|a| match a {
        Angle::Sym(s) => AngleRef::Sym(s.clone()),
        Angle::Const(x) => AngleRef::Const(*x),
    });
    OpRef { g: g.name().to_string(), q: g.qubits(), p }
}

fn gate(op: &OpRef) -> std::result::Result<Gate, String> {
    let angle = || match &op.p {
        Some(AngleRef::Sym(s)) => Ok(Angle::Sym(s.clone())),
        Some(AngleRef::Const(x)) => Ok(Angle::Const(*x)),
        None => Err(format!("gate {} needs a parameter", op.g)),
    };
    let arity = if matches!(op.g.as_str(), "CRz" | "CX") { 2 } else { 1 };
    if op.q.len() != arity {
        return Err(format!("gate {} acts on {arity} qubit(s), got {}", op.g, op.q.len()));
    }
    if matches!(op.g.as_str(), "H" | "CX") && op.p.is_some() {
        return Err(format!("gate {} takes no parameter", op.g));
    }
    Ok(match op.g.as_str() {
        "H" => Gate::H(op.q[0]),
        "Rx" => Gate::Rx(op.q[0], angle()?),
        "Rz" => Gate::Rz(op.q[0], angle()?),
        "CRz" => Gate::CRz(op.q[0], op.q[1], angle()?),
        "CX" => Gate::CX(op.q[0], op.q[1]),
        other => return Err(format!("unknown gate `{other}`")),
    })
}

pub fn circuit_to_json(c: &Circuit) -> String {
    write(&CircuitDoc {
        n_qubits: c.n_qubits,
        ops: c.ops.iter().map(op_ref).collect(),
        postselect: c.postselect.clone(),
        open: c.open.clone(),
    })
}

/// Parses and validates a circuit document.
pub fn circuit_from_json(text: &str) -> Result<Circuit> {
    let doc: CircuitDoc = parse(text)?;
    let ops = doc
        .ops
        .iter()
        .map(gate)
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|reason| Error::Parse { offset: 0, reason })?;
    let c = Circuit { n_qubits: doc.n_qubits, ops, postselect: doc.postselect, open: doc.open };
    c.validate()?;
    Ok(c)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum NodeRef {
    Param { symbol: String, shape: Vec<usize> },
    Delta { shape: Vec<usize> },
    Copy { shape: Vec<usize> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkDoc {
    nodes: Vec<NodeRef>,
    edges: Vec<((usize, usize), (usize, usize))>,
    open: Vec<(usize, usize)>,
}

fn pair(e: &Endpoint) -> (usize, usize) {
    (e.node, e.leg)
}

fn endpoint((node, leg): (usize, usize)) -> Endpoint {
    Endpoint::new(node, leg)
}

/// Nodes are tagged `param`, `delta` or `copy`; legs are `[node, leg]`.
pub fn network_to_json(tn: &TensorNetwork) -> String {
    let nodes = tn
        .nodes
        .iter()
        .map(|n| match &n.kind {
            NodeKind::Param(s) => NodeRef::Param { symbol: s.clone(), shape: n.shape.clone() },
            NodeKind::Delta => NodeRef::Delta { shape: n.shape.clone() },
            NodeKind::Copy => NodeRef::Copy { shape: n.shape.clone() },
        })
        .collect();
    write(&NetworkDoc {
        nodes,
        edges: tn.edges.iter().map(|(a, b)| (pair(a), pair(b))).collect(),
        open: tn.open.iter().map(pair).collect(),
    })
}

pub fn network_from_json(text: &str) -> Result<TensorNetwork> {
    let doc: NetworkDoc = parse(text)?;
    let nodes = doc
        .nodes
        .into_iter()
        .map(|n| match n {
            NodeRef::Param { symbol, shape } => TnNode { kind: NodeKind::Param(symbol), shape },
            NodeRef::Delta { shape } => TnNode { kind: NodeKind::Delta, shape },
            NodeRef::Copy { shape } => TnNode { kind: NodeKind::Copy, shape },
        })
        .collect();
    let tn = TensorNetwork {
        nodes,
        edges: doc.edges.into_iter().map(|(a, b)| (endpoint(a), endpoint(b))).collect(),
        open: doc.open.into_iter().map(endpoint).collect(),
    };
    tn.validate()?;
    Ok(tn)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamRef {
    name: String,
    shape: Vec<usize>,
    values: Vec<f64>,
}

/// Parameters as a list of `{name, shape, values}` in store order.
pub fn params_to_json(ps: &ParameterStore) -> String {
    let doc: Vec<ParamRef> = ps
        .symbols()
        .map(|s| ParamRef {
            values: ps.get(&s.name).expect("listed symbol").to_vec(),
            name: s.name,
            shape: s.shape,
        })
        .collect();
    serde_json::to_string_pretty(&doc).expect("documents serialize")
}

pub fn params_from_json(text: &str) -> Result<ParameterStore> {
    let doc: Vec<ParamRef> = parse(text)?;
    let mut ps = ParameterStore::new();
    for p in doc {
        ps.insert(&p.name, p.shape, p.values)?;
    }
    Ok(ps)
}

/// Kept shots keyed by bitstring.
pub fn counts_to_json(c: &Counts) -> String {
    write(&c.to_map())
}

pub fn counts_from_json(text: &str) -> Result<BTreeMap<String, u64>> {
    parse(text)
}
