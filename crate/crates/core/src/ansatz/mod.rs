//! Ansätze: from abstract diagrams to parameterised circuits and tensor
//! networks.

mod circuit;
mod network;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::pregroup::{AtomicType, PType, TypeSeq};

pub use circuit::{iqp_ansatz, Angle, Circuit, Gate};
pub use network::{
    mps_ansatz, spider_ansatz, tensor_ansatz, Endpoint, NodeKind, TensorNetwork, TnNode,
    DEFAULT_BOND_DIM,
};

/// Per-atomic-type size: qubit counts for circuits, dimensions for tensors.
/// Adjoints share the size of their base type.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TypeSizes(BTreeMap<AtomicType, usize>);

/// Qubits per atomic type.
pub type QubitMap = TypeSizes;
/// Vector-space dimension per atomic type.
pub type DimMap = TypeSizes;

impl TypeSizes {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sizes must be at least 1.
    pub fn with(mut self, base: AtomicType, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidConfig(format!("size of `{base}` must be at least 1")));
        }
        self.0.insert(base, size);
        Ok(self)
    }

    /// `{n: n_size, s: s_size}`.
    pub fn ns(n: usize, s: usize) -> Result<Self> {
        TypeSizes::new().with(AtomicType::n(), n)?.with(AtomicType::s(), s)
    }

    pub fn get(&self, t: &PType) -> Result<usize> {
        self.0
            .get(&t.base)
            .copied()
            .ok_or_else(|| Error::InvalidConfig(format!("no size assigned to type `{}`", t.base)))
    }

    pub fn sizes(&self, ty: &TypeSeq) -> Result<Vec<usize>> {
        ty.iter().map(|t| self.get(t)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AtomicType, &usize)> {
        self.0.iter()
    }
}

/// A trainable parameter: a scalar angle (empty shape) or a tensor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub name: String,
    pub shape: Vec<usize>,
}

impl Symbol {
    pub fn size(&self) -> usize {
        self.shape.iter().product()
    }
}

/// `<token>__<type>__<index>`; equal (token, type) pairs share a family.
pub fn symbol_name(token: &str, ty: &TypeSeq, index: usize) -> String {
    format!("{token}__{ty}__{index}")
}

/// Which ansatz to apply, with its sizes.
#[derive(Debug, Clone, PartialEq)]
pub enum AnsatzConfig {
    Iqp { qubits: QubitMap, layers: usize },
    Tensor { dims: DimMap },
    Mps { dims: DimMap, bond_dim: usize, max_order: usize },
    Spider { dims: DimMap, max_order: usize },
}

impl AnsatzConfig {
    pub fn is_circuit(&self) -> bool {
        matches!(self, AnsatzConfig::Iqp { .. })
    }

    /// Checks layer counts, bond dimensions and maximum orders.
    pub fn validate(&self) -> Result<()> {
        compile(&crate::Diagram::empty(), self).map(|_| ())
    }
}

/// A compiled sentence.
#[derive(Debug, Clone, PartialEq)]
pub enum Compiled {
    Circuit(Circuit),
    Network(TensorNetwork),
}

impl Compiled {
    pub fn symbols(&self) -> Vec<Symbol> {
        match self {
            Compiled::Circuit(c) => c.symbols(),
            Compiled::Network(tn) => tn.symbols(),
        }
    }
}

pub fn compile(d: &crate::Diagram, config: &AnsatzConfig) -> Result<Compiled> {
    Ok(match config {
        AnsatzConfig::Iqp { qubits, layers } => Compiled::Circuit(iqp_ansatz(d, qubits, *layers)?),
        AnsatzConfig::Tensor { dims } => Compiled::Network(tensor_ansatz(d, dims)?),
        AnsatzConfig::Mps { dims, bond_dim, max_order } => {
            Compiled::Network(mps_ansatz(d, dims, *bond_dim, *max_order)?)
        }
        AnsatzConfig::Spider { dims, max_order } => Compiled::Network(spider_ansatz(d, dims, *max_order)?),
    })
}
