use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{symbol_name, QubitMap, Symbol};
use crate::diagram::{Diagram, Generator};
use crate::error::{Error, Result};

/// A gate parameter: a named symbol or a fixed angle.
#[derive(Debug, Clone, PartialEq)]
pub enum Angle {
    Sym(String),
    Const(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    H(usize),
    Rx(usize, Angle),
    Rz(usize, Angle),
    CRz(usize, usize, Angle),
    CX(usize, usize),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::Rx(..) => "Rx",
            Gate::Rz(..) => "Rz",
            Gate::CRz(..) => "CRz",
            Gate::CX(..) => "CX",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::Rx(q, _) | Gate::Rz(q, _) => alloc::vec![q],
            Gate::CRz(c, t, _) | Gate::CX(c, t) => alloc::vec![c, t],
        }
    }

    pub fn angle(&self) -> Option<&Angle> {
        match self {
            Gate::Rx(_, a) | Gate::Rz(_, a) | Gate::CRz(_, _, a) => Some(a),
            _ => None,
        }
    }
}

/// Gates applied to `|0…0⟩`, then postselection of ancillas on 0.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub n_qubits: usize,
    pub ops: Vec<Gate>,
    pub postselect: Vec<(usize, u8)>,
    pub open: Vec<usize>,
}

impl Circuit {
    /// Checks qubit bounds and that every qubit is either open or
    /// postselected, never both.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        for g in &self.ops {
            let qs = g.qubits();
            if qs.iter().any(|&q| q >= self.n_qubits) {
                return bad(format!("gate {} acts outside {} qubits", g.name(), self.n_qubits));
            }
            if qs.len() == 2 && qs[0] == qs[1] {
                return bad(format!("gate {} uses qubit {} twice", g.name(), qs[0]));
            }
        }
        let mut seen = alloc::vec![false; self.n_qubits];
        let post = self.postselect.iter().map(|&(q, _)| q);
        for q in post.chain(self.open.iter().copied()) {
            if q >= self.n_qubits || seen[q] {
                return bad(format!("qubit {q} is out of range or listed twice"));
            }
            seen[q] = true;
        }
        if seen.iter().any(|s| !s) {
            return bad("every qubit must be open or postselected".into());
        }
        Ok(())
    }

    /// Distinct symbols in order of first use.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for g in &self.ops {
            if let Some(Angle::Sym(name)) = g.angle() {
                if seen.insert(name.clone()) {
                    out.push(Symbol { name: name.clone(), shape: Vec::new() });
                }
            }
        }
        out
    }

    pub fn two_qubit_gates(&self) -> usize {
        self.ops.iter().filter(|g| g.qubits().len() == 2).count()
    }
}

/// Compiles a diagram into an IQP-style circuit.
pub fn iqp_ansatz(d: &Diagram, qm: &QubitMap, n_layers: usize) -> Result<Circuit> {
    if n_layers == 0 {
        return Err(Error::InvalidConfig("IQP circuits need at least one layer".into()));
    }
    let mut c = Circuit::default();
    let fresh = |c: &mut Circuit, k: usize| -> Vec<usize> {
        let start = c.n_qubits;
        c.n_qubits += k;
        (start..start + k).collect()
    };
    // qubits carried by each wire, left to right; input wires start in |0⟩
    let mut wires: Vec<Vec<usize>> = Vec::new();
    for t in d.dom().iter() {
        let m = qm.get(t)?;
        wires.push(fresh(&mut c, m));
    }

    for layer in d.layers() {
        let off = layer.offset;
        match &layer.generator {
            Generator::Word { token, dom, cod } => {
                if !dom.is_empty() {
                    return Err(Error::UnsupportedBox(format!("word `{token}` has inputs")));
                }
                let sizes = qm.sizes(cod)?;
                let k: usize = sizes.iter().sum();
                let qs = fresh(&mut c, k);
                let sym = |i: usize| Angle::Sym(symbol_name(token, cod, i));
                if k == 1 {
                    let q = qs[0];
                    c.ops.push(Gate::Rx(q, sym(0)));
                    c.ops.push(Gate::Rz(q, sym(1)));
                    c.ops.push(Gate::Rx(q, sym(2)));
                } else if k >= 2 {
                    for l in 0..n_layers {
                        c.ops.extend(qs.iter().map(|&q| Gate::H(q)));
                        for i in 0..k - 1 {
                            c.ops.push(Gate::CRz(qs[i], qs[i + 1], sym(l * (k - 1) + i)));
                        }
                    }
                }
                let mut at = 0;
                let new: Vec<Vec<usize>> = sizes
                    .iter()
                    .map(|&m| {
                        at += m;
                        qs[at - m..at].to_vec()
                    })
                    .collect();
                wires.splice(off..off, new);
            }
            Generator::Cup { .. } => {
                let left = wires.remove(off);
                let right = wires.remove(off);
                for (&a, &b) in left.iter().zip(right.iter().rev()) {
                    c.ops.push(Gate::CX(a, b));
                    c.ops.push(Gate::H(a));
                    c.postselect.push((a, 0));
                    c.postselect.push((b, 0));
                }
            }
            Generator::Cap { base, z } => {
                let m = qm.get(&crate::pregroup::PType::new(base.clone(), *z))?;
                let left = fresh(&mut c, m);
                let right = fresh(&mut c, m);
                for (&a, &b) in left.iter().zip(right.iter().rev()) {
                    c.ops.push(Gate::H(a));
                    c.ops.push(Gate::CX(a, b));
                }
                wires.splice(off..off, [left, right]);
            }
            g @ (Generator::Spider { .. } | Generator::Swap { .. }) => {
                return Err(Error::UnsupportedBox(format!(
                    "{} boxes cannot be compiled to circuits",
                    g.kind()
                )));
            }
        }
    }
    c.open = wires.into_iter().flatten().collect();
    Ok(c)
}
