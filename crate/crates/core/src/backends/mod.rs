//! Numerical evaluation of compiled artefacts: tensor-network contraction
//! with gradients, and a statevector simulator.

mod contract;
mod sim;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ansatz::Symbol;
use crate::error::{Error, Result};

pub use contract::{contract, contract_grad, contract_ordered, Order, Tensor};
pub use sim::{evaluate, sample, statevector, Counts, Distribution, StateVector};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Slot {
    offset: usize,
    shape: Vec<usize>,
}

/// Named parameter tensors packed into one flat vector.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParameterStore {
    slots: BTreeMap<String, Slot>,
    order: Vec<String>,
    values: Vec<f64>,
}

impl ParameterStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds every symbol not yet present, filling it with `init`.
    pub fn extend_with<I, F>(&mut self, symbols: I, mut init: F) -> Result<()>
    where
        I: IntoIterator<Item = Symbol>,
        F: FnMut(&Symbol) -> Vec<f64>,
    {
        for sym in symbols {
            if let Some(slot) = self.slots.get(&sym.name) {
                if slot.shape != sym.shape {
                    return Err(Error::ShapeMismatch(format!(
                        "symbol `{}` has shape {:?} but {:?} was requested",
                        sym.name, slot.shape, sym.shape
                    )));
                }
                continue;
            }
            let values = init(&sym);
            self.insert(&sym.name, sym.shape.clone(), values)?;
        }
        Ok(())
    }

    /// Adds or overwrites one symbol; a scalar has an empty shape.
    pub fn insert(&mut self, name: &str, shape: Vec<usize>, values: Vec<f64>) -> Result<()> {
        let size: usize = shape.iter().product();
        if values.len() != size {
            return Err(Error::ShapeMismatch(format!(
                "symbol `{name}` of shape {shape:?} needs {size} values, got {}",
                values.len()
            )));
        }
        match self.slots.get(name) {
            Some(slot) if slot.shape == shape => {
                self.values[slot.offset..slot.offset + size].copy_from_slice(&values);
            }
            Some(slot) => {
                return Err(Error::ShapeMismatch(format!(
                    "symbol `{name}` already has shape {:?}",
                    slot.shape
                )))
            }
            None => {
                let offset = self.values.len();
                self.values.extend(values);
                self.slots.insert(name.into(), Slot { offset, shape });
                self.order.push(name.into());
            }
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&[f64]> {
        let slot = self.slot(name)?;
        let size: usize = slot.shape.iter().product();
        Ok(&self.values[slot.offset..slot.offset + size])
    }

    /// A scalar (angle) parameter.
    pub fn scalar(&self, name: &str) -> Result<f64> {
        match self.get(name)? {
            [x] => Ok(*x),
            v => Err(Error::ShapeMismatch(format!("symbol `{name}` holds {} values, not one", v.len()))),
        }
    }

    pub fn shape(&self, name: &str) -> Result<&[usize]> {
        Ok(&self.slot(name)?.shape)
    }

    pub fn offset(&self, name: &str) -> Result<usize> {
        Ok(self.slot(name)?.offset)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.slots.contains_key(name)
    }

    fn slot(&self, name: &str) -> Result<&Slot> {
        self.slots.get(name).ok_or_else(|| Error::UnboundSymbol(name.into()))
    }

    /// Symbol names in insertion order, matching the flat layout.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.order.iter().map(String::as_str)
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.order.iter().map(|n| Symbol { name: n.clone(), shape: self.slots[n].shape.clone() })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// A copy with the flat vector replaced.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} values, got {}",
                self.values.len(),
                values.len()
            )));
        }
        Ok(ParameterStore { values, ..self.clone() })
    }
}
