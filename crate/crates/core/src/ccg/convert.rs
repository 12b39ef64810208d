//! From CCG derivations to pregroup diagrams.
//!
//! Words are laid out left to right on the first layers; each combinator then
//! adds cups (application, composition, coordination), swaps (crossed
//! composition) or caps (type raising) on the span of its constituent.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::category::Category;
use super::tree::{CcgTree, Rule};
use crate::diagram::{Diagram, Generator};
use crate::error::{Error, Result};
use crate::pregroup::{PType, TypeSeq};

/// Token given to the re-typing state inserted for type-changing unary rules.
pub const LEX_TOKEN: &str = "<lex>";

/// Pregroup image of a category: `X/Y -> X · Y^l`, `X\Y -> Y^r · X`.
pub fn cat_to_typeseq(cat: &Category) -> Result<TypeSeq> {
    match cat {
        Category::Atomic { name, .. } => match name.as_str() {
            "N" | "NP" | "PP" => Ok(TypeSeq::of(PType::n())),
            "S" => Ok(TypeSeq::of(PType::s())),
            _ => Err(Error::UnknownCategory(cat.to_string())),
        },
        Category::Forward(res, arg) => Ok(cat_to_typeseq(res)?.concat(&cat_to_typeseq(arg)?.l())),
        Category::Backward(res, arg) => Ok(cat_to_typeseq(arg)?.r().concat(&cat_to_typeseq(res)?)),
        Category::Conj(inner) => {
            let t = cat_to_typeseq(inner)?;
            Ok(t.r().concat(&t))
        }
    }
}

/// Converts a derivation into a diagram with domain `1` and codomain the
/// image of the root category.
pub fn tree_to_diagram(tree: &CcgTree) -> Result<Diagram> {
    let plan = plan(tree, None)?;
    let mut words = Vec::new();
    plan.collect_words(&mut words);
    let mut d = Diagram::empty();
    for (token, ty) in words {
        let offset = d.cod().len();
        d.push(Generator::word(token, ty), offset)?;
    }
    plan.emit(&mut d, 0)?;
    Ok(d)
}

/// Constituent annotated with its pregroup type and the wiring that builds it.
#[derive(Debug)]
struct Plan {
    ty: TypeSeq,
    step: Step,
}

#[derive(Debug)]
enum Step {
    Word(String),
    /// Cancel `cups` wire pairs across the boundary of the two children.
    Cancel { cups: usize, children: [alloc::boxed::Box<Plan>; 2] },
    /// `X/Y Y\Z`: move the `Z^r` block to the front, then cancel `Y`.
    CrossForward { moved: usize, cups: usize, children: [alloc::boxed::Box<Plan>; 2] },
    /// `Y/Z X\Y`: move the `Z^l` block to the back, then cancel `Y`.
    CrossBackward { moved: usize, cups: usize, children: [alloc::boxed::Box<Plan>; 2] },
    /// Caps placed around the child: `left · child · right`.
    Raise { left: TypeSeq, right: TypeSeq, child: alloc::boxed::Box<Plan> },
    Keep(alloc::boxed::Box<Plan>),
}

impl Plan {
    fn collect_words(&self, out: &mut Vec<(String, TypeSeq)>) {
        match &self.step {
            Step::Word(token) => out.push((token.clone(), self.ty.clone())),
            Step::Cancel { children, .. }
            | Step::CrossForward { children, .. }
            | Step::CrossBackward { children, .. } => {
                children[0].collect_words(out);
                children[1].collect_words(out);
            }
            Step::Raise { child, .. } | Step::Keep(child) => child.collect_words(out),
        }
    }

    /// Emits the wiring of this constituent whose wires start at `start`.
    fn emit(&self, d: &mut Diagram, start: usize) -> Result<()> {
        match &self.step {
            Step::Word(_) => Ok(()),
            Step::Keep(child) => child.emit(d, start),
            Step::Cancel { cups, children } => {
                children[0].emit(d, start)?;
                let boundary = start + children[0].ty.len();
                children[1].emit(d, boundary)?;
                emit_cups(d, boundary, *cups)
            }
            Step::CrossForward { moved, cups, children } => {
                children[0].emit(d, start)?;
                let boundary = start + children[0].ty.len();
                children[1].emit(d, boundary)?;
                // bubble each moved wire leftwards to the front of the span
                for k in 0..*moved {
                    let mut pos = boundary + k;
                    while pos > start + k {
                        let wires = d.cod().as_slice();
                        let g = Generator::Swap {
                            left: wires[pos - 1].clone(),
                            right: wires[pos].clone(),
                        };
                        d.push(g, pos - 1)?;
                        pos -= 1;
                    }
                }
                emit_cups(d, boundary + moved, *cups)
            }
            Step::CrossBackward { moved, cups, children } => {
                children[0].emit(d, start)?;
                let boundary = start + children[0].ty.len();
                children[1].emit(d, boundary)?;
                let end = boundary + children[1].ty.len();
                // bubble each moved wire rightwards to the back of the span
                for k in 0..*moved {
                    let mut pos = boundary - 1 - k;
                    while pos + 1 < end - k {
                        let wires = d.cod().as_slice();
                        let g = Generator::Swap {
                            left: wires[pos].clone(),
                            right: wires[pos + 1].clone(),
                        };
                        d.push(g, pos)?;
                        pos += 1;
                    }
                }
                emit_cups(d, boundary - moved, *cups)
            }
            Step::Raise { left, right, child } => {
                emit_caps(d, start, left)?;
                child.emit(d, start + left.len())?;
                emit_caps(d, start + left.len() + child.ty.len(), right)
            }
        }
    }
}

/// Nested cups across `boundary`, innermost pair first.
fn emit_cups(d: &mut Diagram, boundary: usize, cups: usize) -> Result<()> {
    for i in 0..cups {
        let pos = boundary - 1 - i;
        let g = Generator::cup_on(&d.cod().as_slice()[pos]);
        d.push(g, pos)?;
    }
    Ok(())
}

/// Pairs of positions matched by caps, or `None` if `seq` cannot be produced
/// from the unit by caps alone.
fn cap_matching(seq: &TypeSeq) -> Option<Vec<(usize, usize)>> {
    let mut stack: Vec<usize> = Vec::new();
    let mut pairs = Vec::new();
    for (i, t) in seq.iter().enumerate() {
        match stack.last() {
            Some(&j) if seq.as_slice()[j] == t.r() => {
                stack.pop();
                pairs.push((j, i));
            }
            _ => stack.push(i),
        }
    }
    if !stack.is_empty() {
        return None;
    }
    pairs.sort_unstable();
    Some(pairs)
}

fn emit_caps(d: &mut Diagram, start: usize, seq: &TypeSeq) -> Result<()> {
    let pairs = cap_matching(seq)
        .ok_or_else(|| Error::Derivation(format!("{seq} cannot be produced by caps")))?;
    let mut placed: Vec<usize> = Vec::new();
    for (i, j) in pairs {
        let offset = start + placed.iter().filter(|&&p| p < i).count();
        d.push(Generator::cap_on(&seq.as_slice()[j]), offset)?;
        placed.push(i);
        placed.push(j);
    }
    Ok(())
}

fn cancel_count(left: &TypeSeq, right: &TypeSeq, target: &TypeSeq) -> Option<usize> {
    let total = left.len() + right.len();
    if total < target.len() || !(total - target.len()).is_multiple_of(2) {
        return None;
    }
    let k = (total - target.len()) / 2;
    if k > left.len() || k > right.len() {
        return None;
    }
    let l = left.as_slice();
    let r = right.as_slice();
    for i in 0..k {
        if !l[l.len() - 1 - i].cancels_with(&r[i]) {
            return None;
        }
    }
    let rest: TypeSeq = l[..l.len() - k].iter().chain(&r[k..]).cloned().collect();
    (rest == *target).then_some(k)
}

fn mismatch(rule: Rule, parent: &Category, left: &TypeSeq, right: &TypeSeq) -> Error {
    Error::Derivation(format!(
        "{rule} cannot combine {left} and {right} into {parent}"
    ))
}

/// `attach` types a punctuation-like leaf from its neighbour:
/// `Some((neighbour, parent_type, neighbour_on_left))`.
fn plan(tree: &CcgTree, attach: Option<(&TypeSeq, &TypeSeq, bool)>) -> Result<Plan> {
    match tree {
        CcgTree::Leaf { token, category } => {
            let ty = match attach {
                // X punct -> P: punct : X^r · P ;  punct X -> P: punct : P · X^l
                Some((nb, parent, true)) => nb.r().concat(parent),
                Some((nb, parent, false)) => parent.concat(&nb.l()),
                None => cat_to_typeseq(category)?,
            };
            Ok(Plan {
                ty,
                step: Step::Word(token.clone()),
            })
        }
        CcgTree::Node {
            category,
            rule,
            children,
        } => {
            let target = cat_to_typeseq(category)?;
            if rule.is_unary() {
                let [child] = children.as_slice() else {
                    return Err(Error::Derivation(format!("{rule} node needs one child")));
                };
                return plan_unary(child, target);
            }
            let [left, right] = children.as_slice() else {
                return Err(Error::Derivation(format!("{rule} node needs two children")));
            };
            let (lp, rp) = plan_pair(left, right, category, &target)?;
            let boxed = |p: Plan| alloc::boxed::Box::new(p);
            match rule {
                Rule::FX | Rule::BX => {
                    let forward = *rule == Rule::FX;
                    plan_crossed(forward, category, target, lp, rp)
                }
                _ => {
                    let cups = cancel_count(&lp.ty, &rp.ty, &target)
                        .ok_or_else(|| mismatch(*rule, category, &lp.ty, &rp.ty))?;
                    Ok(Plan {
                        ty: target,
                        step: Step::Cancel {
                            cups,
                            children: [boxed(lp), boxed(rp)],
                        },
                    })
                }
            }
        }
    }
}

fn plan_pair(left: &CcgTree, right: &CcgTree, parent: &Category, target: &TypeSeq) -> Result<(Plan, Plan)> {
    let lpunct = matches!(left, CcgTree::Leaf { category, .. } if category.is_punctuation_like());
    let rpunct = matches!(right, CcgTree::Leaf { category, .. } if category.is_punctuation_like());
    if lpunct && rpunct {
        return Err(Error::Derivation(format!(
            "{parent} built from two punctuation leaves"
        )));
    }
    if lpunct {
        let rp = plan(right, None)?;
        // inside X[conj] this gives the conjunction X^r · X · X^l
        let lp = plan(left, Some((&rp.ty, target, false)))?;
        return Ok((lp, rp));
    }
    if rpunct {
        let lp = plan(left, None)?;
        let rp = plan(right, Some((&lp.ty, target, true)))?;
        return Ok((lp, rp));
    }
    Ok((plan(left, None)?, plan(right, None)?))
}

fn plan_crossed(forward: bool, parent: &Category, target: TypeSeq, lp: Plan, rp: Plan) -> Result<Plan> {
    let rule = if forward { Rule::FX } else { Rule::BX };
    let err = || mismatch(rule, parent, &lp.ty, &rp.ty);
    // the moved block is the image of the parent's outermost argument Z
    let z_len = match parent {
        Category::Backward(_, z) | Category::Forward(_, z) => cat_to_typeseq(z)?.len(),
        _ => return Err(err()),
    };
    let (l, r) = (lp.ty.as_slice(), rp.ty.as_slice());
    if z_len > target.len() || (forward && z_len > r.len()) || (!forward && z_len > l.len()) {
        return Err(err());
    }
    // forward: X·Y^l  Z^r·Y -> Z^r·X ; backward: Y·Z^l  Y^r·X -> X·Z^l
    let (moved, rest_left, rest_right, rest_target) = if forward {
        (&r[..z_len], l, &r[z_len..], &target.as_slice()[z_len..])
    } else {
        (
            &l[l.len() - z_len..],
            &l[..l.len() - z_len],
            r,
            &target.as_slice()[..target.len() - z_len],
        )
    };
    let rest_target = TypeSeq(rest_target.to_vec());
    let cups = cancel_count(&TypeSeq(rest_left.to_vec()), &TypeSeq(rest_right.to_vec()), &rest_target)
        .ok_or_else(err)?;
    let moved = TypeSeq(moved.to_vec());
    let result = if forward {
        moved.concat(&rest_target)
    } else {
        rest_target.concat(&moved)
    };
    if result != target {
        return Err(err());
    }
    let children = [alloc::boxed::Box::new(lp), alloc::boxed::Box::new(rp)];
    let step = if forward {
        Step::CrossForward { moved: z_len, cups, children }
    } else {
        Step::CrossBackward { moved: z_len, cups, children }
    };
    Ok(Plan { ty: target, step })
}

fn plan_unary(child: &CcgTree, target: TypeSeq) -> Result<Plan> {
    let cp = plan(child, None)?;
    if cp.ty == target {
        return Ok(Plan {
            ty: target,
            step: Step::Keep(alloc::boxed::Box::new(cp)),
        });
    }
    // target = left · child · right with both sides producible by caps
    let t = target.as_slice();
    let c = cp.ty.len();
    if c <= t.len() {
        for at in 0..=t.len() - c {
            if t[at..at + c] != *cp.ty.as_slice() {
                continue;
            }
            let left = TypeSeq(t[..at].to_vec());
            let right = TypeSeq(t[at + c..].to_vec());
            if cap_matching(&left).is_some() && cap_matching(&right).is_some() {
                return Ok(Plan {
                    ty: target,
                    step: Step::Raise {
                        left,
                        right,
                        child: alloc::boxed::Box::new(cp),
                    },
                });
            }
        }
    }
    // otherwise a re-typing state child^r · target absorbs the child
    let bridge = Plan {
        ty: cp.ty.r().concat(&target),
        step: Step::Word(LEX_TOKEN.to_string()),
    };
    let cups = cp.ty.len();
    Ok(Plan {
        ty: target,
        step: Step::Cancel {
            cups,
            children: [alloc::boxed::Box::new(cp), alloc::boxed::Box::new(bridge)],
        },
    })
}
