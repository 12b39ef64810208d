//! String diagrams as a list of layers, one generator per layer.
//!
//! Each layer places a single generator at an offset: the number of wires to
//! its left at that point of the diagram. Wires not touched by the generator
//! pass through unchanged.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::pregroup::{AtomicType, PType, TypeSeq};

/// The boxes a diagram is built from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Generator {
    Word {
        token: String,
        dom: TypeSeq,
        cod: TypeSeq,
    },
    /// `a^(z) · a^(z+1) -> 1`
    Cup { base: AtomicType, z: i32 },
    /// `1 -> a^(z+1) · a^(z)`
    Cap { base: AtomicType, z: i32 },
    /// `n_in` copies of `a^(z)` merged into `n_out` copies.
    Spider {
        base: AtomicType,
        z: i32,
        n_in: usize,
        n_out: usize,
    },
    /// `left · right -> right · left`
    Swap { left: PType, right: PType },
}

impl Generator {
    /// A word state `1 -> cod`.
    pub fn word(token: impl Into<String>, cod: TypeSeq) -> Self {
        Generator::Word {
            token: token.into(),
            dom: TypeSeq::unit(),
            cod,
        }
    }

    pub fn cup(base: AtomicType, z: i32) -> Self {
        Generator::Cup { base, z }
    }

    pub fn cap(base: AtomicType, z: i32) -> Self {
        Generator::Cap { base, z }
    }

    /// Cup whose left leg is `left`.
    pub fn cup_on(left: &PType) -> Self {
        Generator::cup(left.base.clone(), left.z)
    }

    /// Cap whose right leg is `right`.
    pub fn cap_on(right: &PType) -> Self {
        Generator::cap(right.base.clone(), right.z)
    }

    pub fn dom(&self) -> TypeSeq {
        match self {
            Generator::Word { dom, .. } => dom.clone(),
            Generator::Cup { base, z } => {
                let t = PType::new(base.clone(), *z);
                TypeSeq(alloc::vec![t.clone(), t.r()])
            }
            Generator::Cap { .. } => TypeSeq::unit(),
            Generator::Spider { base, z, n_in, .. } => {
                TypeSeq(alloc::vec![PType::new(base.clone(), *z); *n_in])
            }
            Generator::Swap { left, right } => TypeSeq(alloc::vec![left.clone(), right.clone()]),
        }
    }

    pub fn cod(&self) -> TypeSeq {
        match self {
            Generator::Word { cod, .. } => cod.clone(),
            Generator::Cup { .. } => TypeSeq::unit(),
            Generator::Cap { base, z } => {
                let t = PType::new(base.clone(), *z);
                TypeSeq(alloc::vec![t.r(), t])
            }
            Generator::Spider { base, z, n_out, .. } => {
                TypeSeq(alloc::vec![PType::new(base.clone(), *z); *n_out])
            }
            Generator::Swap { left, right } => TypeSeq(alloc::vec![right.clone(), left.clone()]),
        }
    }

    pub fn dom_len(&self) -> usize {
        match self {
            Generator::Word { dom, .. } => dom.len(),
            Generator::Cup { .. } | Generator::Swap { .. } => 2,
            Generator::Cap { .. } => 0,
            Generator::Spider { n_in, .. } => *n_in,
        }
    }

    pub fn cod_len(&self) -> usize {
        match self {
            Generator::Word { cod, .. } => cod.len(),
            Generator::Cap { .. } | Generator::Swap { .. } => 2,
            Generator::Cup { .. } => 0,
            Generator::Spider { n_out, .. } => *n_out,
        }
    }

    pub fn is_word(&self) -> bool {
        matches!(self, Generator::Word { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Generator::Word { .. } => "word",
            Generator::Cup { .. } => "cup",
            Generator::Cap { .. } => "cap",
            Generator::Spider { .. } => "spider",
            Generator::Swap { .. } => "swap",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Layer {
    pub generator: Generator,
    pub offset: usize,
}

impl Layer {
    pub fn new(generator: Generator, offset: usize) -> Self {
        Layer { generator, offset }
    }
}

/// A type-checked string diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    dom: TypeSeq,
    cod: TypeSeq,
    layers: Vec<Layer>,
}

impl Diagram {
    /// Builds a diagram and type-checks it.
    pub fn new(dom: TypeSeq, cod: TypeSeq, layers: Vec<Layer>) -> Result<Self> {
        let d = Diagram { dom, cod, layers };
        d.check()?;
        Ok(d)
    }

    pub fn id(ty: TypeSeq) -> Self {
        Diagram {
            dom: ty.clone(),
            cod: ty,
            layers: Vec::new(),
        }
    }

    pub fn empty() -> Self {
        Diagram::id(TypeSeq::unit())
    }

    /// A single generator as a diagram.
    pub fn generator(generator: Generator) -> Self {
        Diagram {
            dom: generator.dom(),
            cod: generator.cod(),
            layers: alloc::vec![Layer::new(generator, 0)],
        }
    }

    pub fn dom(&self) -> &TypeSeq {
        &self.dom
    }

    pub fn cod(&self) -> &TypeSeq {
        &self.cod
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn into_layers(self) -> Vec<Layer> {
        self.layers
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    /// Appends a generator at `offset`, updating the codomain.
    pub fn push(&mut self, generator: Generator, offset: usize) -> Result<()> {
        let next = apply_layer(&self.cod, &generator, offset, self.layers.len())?;
        self.cod = next;
        self.layers.push(Layer::new(generator, offset));
        Ok(())
    }

    /// Wire types above each layer, followed by the final wire types.
    pub fn wire_types(&self) -> Result<Vec<TypeSeq>> {
        let mut out = Vec::with_capacity(self.layers.len() + 1);
        let mut wires = self.dom.clone();
        for (i, layer) in self.layers.iter().enumerate() {
            let next = apply_layer(&wires, &layer.generator, layer.offset, i)?;
            out.push(wires);
            wires = next;
        }
        out.push(wires);
        Ok(out)
    }

    /// Scans the layers from the domain and confirms the codomain.
    pub fn check(&self) -> Result<()> {
        let mut wires = self.dom.clone();
        for (i, layer) in self.layers.iter().enumerate() {
            wires = apply_layer(&wires, &layer.generator, layer.offset, i)?;
        }
        if wires != self.cod {
            return Err(Error::TypeMismatch {
                expected: self.cod.clone(),
                found: wires,
            });
        }
        Ok(())
    }

    /// Sequential composition: `self` then `bottom`.
    pub fn compose(&self, bottom: &Diagram) -> Result<Diagram> {
        if self.cod != bottom.dom {
            return Err(Error::TypeMismatch {
                expected: self.cod.clone(),
                found: bottom.dom.clone(),
            });
        }
        let mut layers = self.layers.clone();
        layers.extend(bottom.layers.iter().cloned());
        Ok(Diagram {
            dom: self.dom.clone(),
            cod: bottom.cod.clone(),
            layers,
        })
    }

    /// Parallel composition: `self` to the left of `right`.
    pub fn tensor(&self, right: &Diagram) -> Diagram {
        let shift = self.cod.len();
        let mut layers = self.layers.clone();
        layers.extend(
            right
                .layers
                .iter()
                .map(|l| Layer::new(l.generator.clone(), l.offset + shift)),
        );
        Diagram {
            dom: self.dom.concat(&right.dom),
            cod: self.cod.concat(&right.cod),
            layers,
        }
    }

    /// Removes cap/cup snakes until none is left.
    pub fn normal_form(&self) -> Diagram {
        let mut current = self.clone();
        while let Some(next) = current.yank_once() {
            current = next;
        }
        current
    }

    fn yank_once(&self) -> Option<Diagram> {
        for (i, layer) in self.layers.iter().enumerate() {
            if matches!(layer.generator, Generator::Cap { .. }) {
                if let Some(d) = self.yank_at(i) {
                    return Some(d);
                }
            }
        }
        None
    }

    /// Yanks the cap at layer `i` if its first consumer is a cup that bends
    /// one of its legs back against an outside neighbour.
    fn yank_at(&self, i: usize) -> Option<Diagram> {
        let mut a = self.layers[i].offset;
        let mut b = a + 1;
        let mut shifted = Vec::new();
        for j in i + 1..self.layers.len() {
            let Layer { generator, offset } = &self.layers[j];
            let (q, m, r) = (*offset, generator.dom_len(), generator.cod_len());
            let left_of = q + m <= a;
            let right_of = q > b;
            if left_of {
                a = a + r - m;
                b = b + r - m;
                shifted.push(Layer::new(generator.clone(), q));
                continue;
            }
            if right_of {
                shifted.push(Layer::new(generator.clone(), q - 2));
                continue;
            }
            // first generator touching a leg of the cap, or sitting between them
            let bends = matches!(generator, Generator::Cup { .. })
                && b == a + 1
                && (q + 1 == a || q == b);
            if !bends {
                return None;
            }
            let mut layers = self.layers[..i].to_vec();
            layers.extend(shifted);
            layers.extend(self.layers[j + 1..].iter().cloned());
            let d = Diagram {
                dom: self.dom.clone(),
                cod: self.cod.clone(),
                layers,
            };
            debug_assert!(d.check().is_ok());
            return Some(d);
        }
        None
    }

    /// All word generators in layer order.
    pub fn words(&self) -> impl Iterator<Item = &Generator> {
        self.layers
            .iter()
            .map(|l| &l.generator)
            .filter(|g| g.is_word())
    }

    pub fn count_kind(&self, kind: &str) -> usize {
        self.layers
            .iter()
            .filter(|l| l.generator.kind() == kind)
            .count()
    }
}

fn apply_layer(wires: &TypeSeq, g: &Generator, offset: usize, layer: usize) -> Result<TypeSeq> {
    let dom = g.dom();
    if offset + dom.len() > wires.len() {
        return Err(Error::IllTyped {
            layer,
            reason: format!(
                "offset {offset} + arity {} exceeds {} wires",
                dom.len(),
                wires.len()
            ),
        });
    }
    let window = &wires.0[offset..offset + dom.len()];
    if window != dom.as_slice() {
        return Err(Error::IllTyped {
            layer,
            reason: format!(
                "{} expects {dom}, found {}",
                g.kind(),
                TypeSeq(window.to_vec())
            ),
        });
    }
    if let Generator::Spider { n_in, n_out, .. } = g {
        if n_in + n_out == 0 {
            return Err(Error::IllTyped {
                layer,
                reason: "spider without legs".into(),
            });
        }
    }
    let mut next = wires.0[..offset].to_vec();
    next.extend(g.cod().0);
    next.extend_from_slice(&wires.0[offset + dom.len()..]);
    Ok(TypeSeq(next))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn n(z: i32) -> PType {
        PType::new(AtomicType::n(), z)
    }

    fn word(tok: &str, cod: Vec<PType>) -> Diagram {
        Diagram::generator(Generator::word(tok, TypeSeq(cod)))
    }

    #[test]
    fn identity_laws() {
        let d = word("john", vec![n(0)]);
        assert_eq!(d.compose(&Diagram::id(d.cod().clone())).unwrap(), d);
        assert_eq!(Diagram::id(d.dom().clone()).compose(&d).unwrap(), d);
    }

    #[test]
    fn compose_mismatch_reports_both() {
        let john = word("john", vec![n(0)]);
        let cup = Diagram::generator(Generator::cup(AtomicType::n(), 0));
        match john.compose(&cup) {
            Err(Error::TypeMismatch { expected, found }) => {
                assert_eq!(expected, TypeSeq(vec![n(0)]));
                assert_eq!(found, TypeSeq(vec![n(0), n(1)]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tensor_unit_and_cod() {
        let a = word("a", vec![n(0)]);
        let b = word("b", vec![n(0)]);
        assert_eq!(Diagram::empty().tensor(&a), a);
        let ab = a.tensor(&b);
        assert_eq!(ab.cod(), &TypeSeq(vec![n(0), n(0)]));
        assert!(ab.check().is_ok());
    }

    #[test]
    fn snake_yanks_to_identity() {
        // (cap ⊗ id_n) ; (id_n ⊗ cup) on [n]
        let mut d = Diagram::id(TypeSeq(vec![n(0)]));
        d.push(Generator::cap(AtomicType::n(), -1), 0).unwrap();
        d.push(Generator::cup(AtomicType::n(), -1), 1).unwrap();
        assert_eq!(d.cod(), &TypeSeq(vec![n(0)]));
        assert_eq!(d.normal_form(), Diagram::id(TypeSeq(vec![n(0)])));
    }

    #[test]
    fn both_snakes_for_all_windings() {
        for base in [AtomicType::n(), AtomicType::s()] {
            for z in -2..=2 {
                let t = PType::new(base.clone(), z);
                // id ⊗ cap, then cup ⊗ id
                let mut left = Diagram::id(TypeSeq(vec![t.clone()]));
                left.push(Generator::cap(base.clone(), z), 1).unwrap();
                left.push(Generator::cup(base.clone(), z), 0).unwrap();
                assert_eq!(left.cod(), &TypeSeq(vec![t.clone()]));
                assert_eq!(left.normal_form(), Diagram::id(TypeSeq(vec![t.clone()])));
                // cap ⊗ id, then id ⊗ cup, on t.r()
                let tr = t.r();
                let mut right = Diagram::id(TypeSeq(vec![tr.clone()]));
                right.push(Generator::cap(base.clone(), z), 0).unwrap();
                right.push(Generator::cup(base.clone(), z), 1).unwrap();
                assert_eq!(right.cod(), &TypeSeq(vec![tr.clone()]));
                assert_eq!(right.normal_form(), Diagram::id(TypeSeq(vec![tr])));
            }
        }
    }

    #[test]
    fn normal_form_without_caps_is_fixed_point() {
        let mut d = word("a", vec![n(0), n(-1)]).tensor(&word("flower", vec![n(0)]));
        d.push(Generator::cup(AtomicType::n(), -1), 1).unwrap();
        assert_eq!(d.normal_form(), d);
    }

    #[test]
    fn determiner_cap_yanks_away() {
        // cap producing [n, n.l], then a noun, then the cup
        let mut d = Diagram::empty();
        d.push(Generator::cap(AtomicType::n(), -1), 0).unwrap();
        d.push(Generator::word("flower", TypeSeq(vec![n(0)])), 2).unwrap();
        d.push(Generator::cup(AtomicType::n(), -1), 1).unwrap();
        let nf = d.normal_form();
        assert_eq!(nf, word("flower", vec![n(0)]));
    }

    #[test]
    fn cap_feeding_a_spider_stays() {
        let mut d = Diagram::empty();
        d.push(Generator::cap(AtomicType::n(), -1), 0).unwrap();
        let spider = Generator::Spider { base: AtomicType::n(), z: -1, n_in: 1, n_out: 0 };
        d.push(spider, 1).unwrap();
        assert_eq!(d.cod(), &TypeSeq(vec![n(0)]));
        assert_eq!(d.normal_form(), d);
    }

    #[test]
    fn ill_typed_layers_are_rejected() {
        let layers = vec![
            Layer::new(Generator::word("john", TypeSeq(vec![n(0)])), 0),
            Layer::new(Generator::cup(AtomicType::n(), 0), 0),
        ];
        assert!(matches!(
            Diagram::new(TypeSeq::unit(), TypeSeq::unit(), layers),
            Err(Error::IllTyped { layer: 1, .. })
        ));
        let layers = vec![Layer::new(Generator::word("john", TypeSeq(vec![n(0)])), 1)];
        assert!(Diagram::new(TypeSeq::unit(), TypeSeq(vec![n(0)]), layers).is_err());
    }
}
