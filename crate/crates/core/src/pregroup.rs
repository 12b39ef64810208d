//! Pregroup types and adjoint reductions.
//!
//! A [`PType`] is an atomic type together with an integer winding: `0` is the
//! base type, `-1` its left adjoint `p^l`, `+1` its right adjoint `p^r`, and
//! larger magnitudes are iterated adjoints. Two adjacent types `a^(z)` and
//! `a^(z+1)` cancel to the unit.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Name of an atomic pregroup type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomicType(String);

impl AtomicType {
    pub fn new(name: impl Into<String>) -> Self {
        AtomicType(name.into())
    }

    /// Noun (phrase) type.
    pub fn n() -> Self {
        AtomicType::new("n")
    }

    /// Sentence type.
    pub fn s() -> Self {
        AtomicType::new("s")
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AtomicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Set of known atomic types. `n` and `s` are always registered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeRegistry {
    names: BTreeSet<String>,
}

impl Default for TypeRegistry {
    fn default() -> Self {
        let mut names = BTreeSet::new();
        names.insert("n".to_string());
        names.insert("s".to_string());
        TypeRegistry { names }
    }
}

impl TypeRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers `name`, returning the atomic type. Registering a name twice
    /// yields the same type.
    pub fn register(&mut self, name: &str) -> AtomicType {
        self.names.insert(name.to_string());
        AtomicType::new(name)
    }

    pub fn get(&self, name: &str) -> Option<AtomicType> {
        self.names.contains(name).then(|| AtomicType::new(name))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }
}

/// An atomic type raised to an adjoint winding.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PType {
    pub base: AtomicType,
    pub z: i32,
}

impl PType {
    pub fn new(base: AtomicType, z: i32) -> Self {
        PType { base, z }
    }

    pub fn base(base: AtomicType) -> Self {
        PType { base, z: 0 }
    }

    pub fn n() -> Self {
        PType::base(AtomicType::n())
    }

    pub fn s() -> Self {
        PType::base(AtomicType::s())
    }

    pub fn l(&self) -> Self {
        PType::new(self.base.clone(), self.z - 1)
    }

    pub fn r(&self) -> Self {
        PType::new(self.base.clone(), self.z + 1)
    }

    /// True when `self · next` contracts to the unit.
    pub fn cancels_with(&self, next: &PType) -> bool {
        self.base == next.base && self.z + 1 == next.z
    }
}

impl fmt::Display for PType {
    /// `n`, `n.l`, `n.r.r`, ...
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.base.name())?;
        let suffix = if self.z < 0 { ".l" } else { ".r" };
        for _ in 0..self.z.unsigned_abs() {
            f.write_str(suffix)?;
        }
        Ok(())
    }
}

/// Ordered sequence of pregroup types; the empty sequence is the unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeSeq(pub Vec<PType>);

impl TypeSeq {
    pub fn unit() -> Self {
        TypeSeq(Vec::new())
    }

    pub fn of(item: PType) -> Self {
        TypeSeq(vec![item])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, PType> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[PType] {
        &self.0
    }

    pub fn concat(&self, other: &TypeSeq) -> TypeSeq {
        let mut items = self.0.clone();
        items.extend(other.0.iter().cloned());
        TypeSeq(items)
    }

    /// Left adjoint of the product: reversed, each winding decremented.
    pub fn l(&self) -> TypeSeq {
        TypeSeq(self.0.iter().rev().map(PType::l).collect())
    }

    /// Right adjoint of the product: reversed, each winding incremented.
    pub fn r(&self) -> TypeSeq {
        TypeSeq(self.0.iter().rev().map(PType::r).collect())
    }

    /// Irreducible form found by a left-to-right stack scan.
    ///
    /// Adjacent-pair deletion is not confluent once three consecutive windings
    /// of one base meet (`n · n^r · n^rr` reduces to `n` or to `n^rr`); the
    /// scan returns the leftmost-first choice. Use [`TypeSeq::reduces_to`] to
    /// ask whether a particular target is reachable.
    pub fn reduce(&self) -> TypeSeq {
        let mut stack: Vec<PType> = Vec::with_capacity(self.len());
        for t in &self.0 {
            match stack.last() {
                Some(top) if top.cancels_with(t) => {
                    stack.pop();
                }
                _ => stack.push(t.clone()),
            }
        }
        TypeSeq(stack)
    }

    /// Whether some order of adjacent-pair deletions turns `self` into `target`.
    ///
    /// Deletion sequences correspond to non-crossing matchings, so this is an
    /// interval dynamic program rather than a search over orders.
    pub fn reduces_to(&self, target: &TypeSeq) -> bool {
        let s = &self.0;
        let n = s.len();
        let m = target.len();
        if m > n || !(n - m).is_multiple_of(2) {
            return false;
        }
        let empty = vanishing_intervals(s);
        // reach[i][j]: prefix s[..i] reduces to target[..j]
        let mut reach = vec![vec![false; m + 1]; n + 1];
        reach[0][0] = true;
        for i in 0..=n {
            for j in 0..=m {
                if !reach[i][j] {
                    continue;
                }
                if j < m {
                    // keep s[k] as target[j] after deleting s[i..k]
                    for k in i..n {
                        if s[k] == target.0[j] && empty.get(i, k) {
                            reach[k + 1][j + 1] = true;
                        }
                    }
                }
                // delete a trailing block s[i..k] entirely
                for k in (i + 2..=n).step_by(2) {
                    if empty.get(i, k) {
                        reach[k][j] = true;
                    }
                }
            }
        }
        reach[n][m]
    }
}

/// Table of half-open intervals `[i, j)` that reduce to the unit.
struct Vanishing {
    n: usize,
    table: Vec<bool>,
}

impl Vanishing {
    fn get(&self, i: usize, j: usize) -> bool {
        self.table[i * (self.n + 1) + j]
    }
}

fn vanishing_intervals(s: &[PType]) -> Vanishing {
    let n = s.len();
    let mut table = vec![false; (n + 1) * (n + 1)];
    let idx = |i: usize, j: usize| i * (n + 1) + j;
    for i in 0..=n {
        table[idx(i, i)] = true;
    }
    for len in (2..=n).step_by(2) {
        for i in 0..=n - len {
            let j = i + len;
            // s[i] pairs with some s[k]; inside and remainder both vanish
            let mut ok = false;
            for k in (i + 1..j).step_by(2) {
                if s[i].cancels_with(&s[k]) && table[idx(i + 1, k)] && table[idx(k + 1, j)] {
                    ok = true;
                    break;
                }
            }
            table[idx(i, j)] = ok;
        }
    }
    Vanishing { n, table }
}

impl fmt::Display for TypeSeq {
    /// Types joined by `@`; the unit prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("@")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl From<Vec<PType>> for TypeSeq {
    fn from(items: Vec<PType>) -> Self {
        TypeSeq(items)
    }
}

impl FromIterator<PType> for TypeSeq {
    fn from_iter<I: IntoIterator<Item = PType>>(iter: I) -> Self {
        TypeSeq(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a TypeSeq {
    type Item = &'a PType;
    type IntoIter = core::slice::Iter<'a, PType>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}
