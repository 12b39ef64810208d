use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{symbol_name, DimMap, Symbol};
use crate::diagram::{Diagram, Generator};
use crate::error::{Error, Result};
use crate::pregroup::{PType, TypeSeq};

pub const DEFAULT_BOND_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    /// Trainable tensor named by a symbol.
    Param(String),
    /// Identity matrix: cups, caps and input wires.
    Delta,
    /// Generalised Kronecker delta over all legs.
    Copy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TnNode {
    pub kind: NodeKind,
    pub shape: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Endpoint {
    pub node: usize,
    pub leg: usize,
}

impl Endpoint {
    pub fn new(node: usize, leg: usize) -> Self {
        Endpoint { node, leg }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorNetwork {
    pub nodes: Vec<TnNode>,
    pub edges: Vec<(Endpoint, Endpoint)>,
    pub open: Vec<Endpoint>,
}

impl TensorNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, kind: NodeKind, shape: Vec<usize>) -> usize {
        self.nodes.push(TnNode { kind, shape });
        self.nodes.len() - 1
    }

    pub fn dim(&self, e: Endpoint) -> Option<usize> {
        self.nodes.get(e.node)?.shape.get(e.leg).copied()
    }

    pub fn connect(&mut self, a: Endpoint, b: Endpoint) -> Result<()> {
        match (self.dim(a), self.dim(b)) {
            (Some(x), Some(y)) if x == y => {
                self.edges.push((a, b));
                Ok(())
            }
            (x, y) => Err(Error::ShapeMismatch(format!(
                "cannot join {a:?} (dim {x:?}) with {b:?} (dim {y:?})"
            ))),
        }
    }

    /// Dimensions of the open legs, in order.
    pub fn open_shape(&self) -> Vec<usize> {
        self.open.iter().map(|&e| self.dim(e).unwrap_or(0)).collect()
    }

    /// Every leg is used exactly once, joined legs agree in dimension and no
    /// edge loops back onto its own node.
    pub fn validate(&self) -> Result<()> {
        let mut used = BTreeSet::new();
        let mut claim = |e: Endpoint| -> Result<()> {
            if self.dim(e).is_none() {
                return Err(Error::ShapeMismatch(format!("{e:?} does not exist")));
            }
            if !used.insert(e) {
                return Err(Error::ShapeMismatch(format!("{e:?} is used twice")));
            }
            Ok(())
        };
        for &(a, b) in &self.edges {
            claim(a)?;
            claim(b)?;
            if a.node == b.node {
                return Err(Error::ShapeMismatch(format!("edge {a:?}-{b:?} is a self-loop")));
            }
            if self.dim(a) != self.dim(b) {
                return Err(Error::ShapeMismatch(format!("edge {a:?}-{b:?} joins unequal dimensions")));
            }
        }
        for &e in &self.open {
            claim(e)?;
        }
        let legs: usize = self.nodes.iter().map(|n| n.shape.len()).sum();
        if used.len() != legs {
            return Err(Error::ShapeMismatch(format!("{} of {legs} legs are dangling", legs - used.len())));
        }
        Ok(())
    }

    /// Distinct parameter symbols in order of first use.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for n in &self.nodes {
            if let NodeKind::Param(name) = &n.kind {
                if seen.insert(name.clone()) {
                    out.push(Symbol { name: name.clone(), shape: n.shape.clone() });
                }
            }
        }
        out
    }

    pub fn count(&self, pred: impl Fn(&NodeKind) -> bool) -> usize {
        self.nodes.iter().filter(|n| pred(&n.kind)).count()
    }
}

#[derive(Clone, Copy)]
enum Split {
    Whole,
    Mps { bond: usize, max: usize },
    Spider { max: usize },
}

/// Every word becomes one tensor.
pub fn tensor_ansatz(d: &Diagram, dm: &DimMap) -> Result<TensorNetwork> {
    build(d, dm, Split::Whole)
}

/// Words of order above `max_order` become matrix-product chains with bond
/// dimension `bond_dim`.
pub fn mps_ansatz(d: &Diagram, dm: &DimMap, bond_dim: usize, max_order: usize) -> Result<TensorNetwork> {
    if max_order < 3 {
        return Err(Error::InvalidConfig(format!("MPS maximum order must be at least 3, got {max_order}")));
    }
    if bond_dim == 0 {
        return Err(Error::InvalidConfig("bond dimension must be at least 1".into()));
    }
    build(d, dm, Split::Mps { bond: bond_dim, max: max_order })
}

/// Words of order above `max_order` become overlapping chunks joined by
/// copy spiders.
pub fn spider_ansatz(d: &Diagram, dm: &DimMap, max_order: usize) -> Result<TensorNetwork> {
    if max_order < 2 {
        return Err(Error::InvalidConfig(format!("spider maximum order must be at least 2, got {max_order}")));
    }
    build(d, dm, Split::Spider { max: max_order })
}

fn build(d: &Diagram, dm: &DimMap, split: Split) -> Result<TensorNetwork> {
    let mut tn = TensorNetwork::new();
    let mut wires: Vec<Endpoint> = Vec::new();
    let mut inputs = Vec::new();
    for t in d.dom().iter() {
        let dim = dm.get(t)?;
        let id = tn.add(NodeKind::Delta, alloc::vec![dim, dim]);
        inputs.push(Endpoint::new(id, 0));
        wires.push(Endpoint::new(id, 1));
    }

    for layer in d.layers() {
        let off = layer.offset;
        match &layer.generator {
            Generator::Word { token, dom, cod } if dom.is_empty() => {
                let legs = word_state(&mut tn, token, cod, &dm.sizes(cod)?, split);
                wires.splice(off..off, legs);
            }
            Generator::Word { token, dom, cod } => {
                let mut shape = dm.sizes(dom)?;
                shape.extend(dm.sizes(cod)?);
                let name = symbol_name(token, &TypeSeq(dom.iter().chain(cod.iter()).cloned().collect()), 0);
                let id = tn.add(NodeKind::Param(name), shape);
                let ins: Vec<Endpoint> = wires.drain(off..off + dom.len()).collect();
                for (i, w) in ins.into_iter().enumerate() {
                    tn.connect(w, Endpoint::new(id, i))?;
                }
                let outs = (0..cod.len()).map(|j| Endpoint::new(id, dom.len() + j));
                wires.splice(off..off, outs);
            }
            Generator::Cup { base, z } => {
                let dim = dm.get(&PType::new(base.clone(), *z))?;
                let id = tn.add(NodeKind::Delta, alloc::vec![dim, dim]);
                let left = wires.remove(off);
                let right = wires.remove(off);
                tn.connect(left, Endpoint::new(id, 0))?;
                tn.connect(right, Endpoint::new(id, 1))?;
            }
            Generator::Cap { base, z } => {
                let dim = dm.get(&PType::new(base.clone(), *z))?;
                let id = tn.add(NodeKind::Delta, alloc::vec![dim, dim]);
                wires.splice(off..off, [Endpoint::new(id, 0), Endpoint::new(id, 1)]);
            }
            Generator::Spider { base, z, n_in, n_out } => {
                let dim = dm.get(&PType::new(base.clone(), *z))?;
                let id = tn.add(NodeKind::Copy, alloc::vec![dim; n_in + n_out]);
                let ins: Vec<Endpoint> = wires.drain(off..off + n_in).collect();
                for (i, w) in ins.into_iter().enumerate() {
                    tn.connect(w, Endpoint::new(id, i))?;
                }
                wires.splice(off..off, (0..*n_out).map(|j| Endpoint::new(id, n_in + j)));
            }
            Generator::Swap { .. } => wires.swap(off, off + 1),
        }
    }
    wires.extend(inputs);
    tn.open = wires;
    Ok(tn)
}

/// Adds the nodes realising one word state and returns its outgoing legs.
fn word_state(tn: &mut TensorNetwork, token: &str, cod: &TypeSeq, dims: &[usize], split: Split) -> Vec<Endpoint> {
    let k = dims.len();
    let name = |i: usize| NodeKind::Param(symbol_name(token, cod, i));
    match split {
        Split::Mps { bond, max } if k > max => {
            let mut legs = Vec::with_capacity(k);
            let first = &dims[..max - 1];
            let mut shape = first.to_vec();
            shape.push(bond);
            let mut prev = tn.add(name(0), shape);
            legs.extend((0..max - 1).map(|j| Endpoint::new(prev, j)));
            let mut at = max - 1;
            let mut index = 1;
            while k - at > max - 1 {
                let chunk = &dims[at..at + max - 2];
                let mut shape = alloc::vec![bond];
                shape.extend_from_slice(chunk);
                shape.push(bond);
                let id = tn.add(name(index), shape);
                let prev_bond = Endpoint::new(prev, tn.nodes[prev].shape.len() - 1);
                tn.edges.push((prev_bond, Endpoint::new(id, 0)));
                legs.extend((1..=chunk.len()).map(|j| Endpoint::new(id, j)));
                prev = id;
                at += max - 2;
                index += 1;
            }
            let mut shape = alloc::vec![bond];
            shape.extend_from_slice(&dims[at..]);
            let id = tn.add(name(index), shape);
            let prev_bond = Endpoint::new(prev, tn.nodes[prev].shape.len() - 1);
            tn.edges.push((prev_bond, Endpoint::new(id, 0)));
            legs.extend((1..=k - at).map(|j| Endpoint::new(id, j)));
            legs
        }
        Split::Spider { max } if k > max => {
            let n_chunks = (k - 1).div_ceil(max - 1);
            let mut legs: Vec<Endpoint> = Vec::with_capacity(k);
            let mut prev_last: Option<Endpoint> = None;
            for c in 0..n_chunks {
                let start = c * (max - 1);
                let end = (start + max).min(k);
                let id = tn.add(name(c), dims[start..end].to_vec());
                let chunk = |j: usize| Endpoint::new(id, j);
                match prev_last {
                    None => legs.push(chunk(0)),
                    Some(p) => {
                        let copy = tn.add(NodeKind::Copy, alloc::vec![dims[start]; 3]);
                        tn.edges.push((p, Endpoint::new(copy, 0)));
                        tn.edges.push((chunk(0), Endpoint::new(copy, 1)));
                        legs.push(Endpoint::new(copy, 2));
                    }
                }
                let len = end - start;
                let shared = c + 1 < n_chunks;
                let inner = if shared { len - 1 } else { len };
                legs.extend((1..inner).map(chunk));
                prev_last = shared.then(|| chunk(len - 1));
            }
            legs
        }
        _ => {
            let id = tn.add(name(0), dims.to_vec());
            (0..k).map(|j| Endpoint::new(id, j)).collect()
        }
    }
}
