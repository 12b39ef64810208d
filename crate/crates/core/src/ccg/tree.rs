use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::category::Category;
use crate::error::{Error, Result};

/// Combinator tags. `TR`, `LEX` and `UNARY` are unary; the rest binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Forward application `X/Y Y -> X`.
    FA,
    /// Backward application `Y X\Y -> X`.
    BA,
    /// Forward (generalised) composition `X/Y Y/Z -> X/Z`.
    FC,
    /// Backward (generalised) composition `Y\Z X\Y -> X\Z`.
    BC,
    /// Forward crossed composition `X/Y Y\Z -> X\Z`.
    FX,
    /// Backward crossed composition `Y/Z X\Y -> X/Z`.
    BX,
    /// Type raising `X -> T/(T\X)` or `X -> T\(T/X)`.
    TR,
    /// Type-changing unary rule such as `S\NP -> NP\NP`.
    LEX,
    /// Coordination.
    CONJ,
    /// Unary rule that keeps the category (up to features), e.g. `N -> NP`.
    UNARY,
}

impl Rule {
    pub fn is_unary(self) -> bool {
        matches!(self, Rule::TR | Rule::LEX | Rule::UNARY)
    }

    pub fn name(self) -> &'static str {
        match self {
            Rule::FA => "FA",
            Rule::BA => "BA",
            Rule::FC => "FC",
            Rule::BC => "BC",
            Rule::FX => "FX",
            Rule::BX => "BX",
            Rule::TR => "TR",
            Rule::LEX => "LEX",
            Rule::CONJ => "CONJ",
            Rule::UNARY => "UNARY",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CcgTree {
    Leaf {
        token: String,
        category: Category,
    },
    Node {
        category: Category,
        rule: Rule,
        children: Vec<CcgTree>,
    },
}

impl CcgTree {
    pub fn leaf(token: &str, category: Category) -> Self {
        CcgTree::Leaf {
            token: token.to_string(),
            category,
        }
    }

    /// Builds an internal node, inferring the combinator from the categories.
    pub fn node(category: Category, children: Vec<CcgTree>) -> Result<Self> {
        let rule = match children.as_slice() {
            [child] => infer_unary(&category, child.category()),
            [left, right] => infer_binary(&category, left, right)?,
            _ => {
                return Err(Error::Derivation(format!(
                    "node {category} has {} children",
                    children.len()
                )))
            }
        };
        Ok(CcgTree::Node {
            category,
            rule,
            children,
        })
    }

    /// Builds a node with an explicit rule, checking only its arity.
    pub fn with_rule(category: Category, rule: Rule, children: Vec<CcgTree>) -> Result<Self> {
        let arity = if rule.is_unary() { 1 } else { 2 };
        if children.len() != arity {
            return Err(Error::Derivation(format!(
                "rule {rule} takes {arity} children, got {}",
                children.len()
            )));
        }
        Ok(CcgTree::Node {
            category,
            rule,
            children,
        })
    }

    pub fn category(&self) -> &Category {
        match self {
            CcgTree::Leaf { category, .. } | CcgTree::Node { category, .. } => category,
        }
    }

    /// Leaves in sentence order.
    pub fn leaves(&self) -> Vec<(&str, &Category)> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<(&'a str, &'a Category)>) {
        match self {
            CcgTree::Leaf { token, category } => out.push((token, category)),
            CcgTree::Node { children, .. } => {
                for c in children {
                    c.collect_leaves(out);
                }
            }
        }
    }

    pub fn tokens(&self) -> Vec<&str> {
        self.leaves().into_iter().map(|(t, _)| t).collect()
    }
}

fn infer_unary(parent: &Category, child: &Category) -> Rule {
    if parent.matches(child) || matches!((parent, child), (Category::Atomic { .. }, Category::Atomic { .. }) if is_nominal(parent) && is_nominal(child))
    {
        return Rule::UNARY;
    }
    // T/(T\X) or T\(T/X)
    match parent {
        Category::Forward(t, inner) => {
            if let Category::Backward(t2, x) = inner.as_ref() {
                if t.matches(t2) && x.matches(child) {
                    return Rule::TR;
                }
            }
        }
        Category::Backward(t, inner) => {
            if let Category::Forward(t2, x) = inner.as_ref() {
                if t.matches(t2) && x.matches(child) {
                    return Rule::TR;
                }
            }
        }
        _ => {}
    }
    Rule::LEX
}

fn is_nominal(c: &Category) -> bool {
    matches!(c, Category::Atomic { name, .. } if name == "N" || name == "NP")
}

fn infer_binary(parent: &Category, left: &CcgTree, right: &CcgTree) -> Result<Rule> {
    let (l, r) = (left.category(), right.category());
    if let Category::Conj(_) = parent {
        return Ok(Rule::CONJ);
    }
    if let Category::Conj(inner) = r {
        if inner.matches(l) || inner.matches(parent) {
            return Ok(Rule::CONJ);
        }
    }
    // punctuation absorbed as a modifier of its neighbour
    if r.is_punctuation_like() && !l.is_punctuation_like() {
        return Ok(Rule::BA);
    }
    if l.is_punctuation_like() && !r.is_punctuation_like() {
        return Ok(Rule::FA);
    }
    if let Category::Forward(x, y) = l {
        if y.matches(r) && x.matches(parent) {
            return Ok(Rule::FA);
        }
        if let Some(first_slash_forward) = composes(x, y, r, parent) {
            return Ok(if first_slash_forward { Rule::FC } else { Rule::FX });
        }
    }
    if let Category::Backward(x, y) = r {
        if y.matches(l) && x.matches(parent) {
            return Ok(Rule::BA);
        }
        if let Some(first_slash_forward) = composes(x, y, l, parent) {
            return Ok(if first_slash_forward { Rule::BX } else { Rule::BC });
        }
    }
    Err(Error::Derivation(format!(
        "no combinator derives {parent} from {l} {r}"
    )))
}

/// Checks `functor = X|Y` composing with `other = (Y|Z1)..|Zk` into
/// `parent = (X|Z1)..|Zk`. Returns whether the innermost argument slash is
/// forward.
fn composes(x: &Category, y: &Category, other: &Category, parent: &Category) -> Option<bool> {
    let mut args: Vec<(bool, &Category)> = Vec::new();
    let mut cur = other;
    loop {
        match cur {
            Category::Forward(res, arg) => {
                args.push((true, arg));
                cur = res;
            }
            Category::Backward(res, arg) => {
                args.push((false, arg));
                cur = res;
            }
            _ => return None,
        }
        if cur.matches(y) {
            break;
        }
    }
    let mut expected = x.clone();
    for (forward, arg) in args.iter().rev() {
        expected = if *forward {
            Category::Forward(Box::new(expected), Box::new((*arg).clone()))
        } else {
            Category::Backward(Box::new(expected), Box::new((*arg).clone()))
        };
    }
    expected.matches(parent).then(|| args.last().map(|a| a.0).unwrap_or(true))
}
