//! CCGBank AUTO notation.
//!
//! ```text
//! ID=wsj_0001.1 PARSER=GOLD NUMPARSE=1
//! (<T S[dcl] 0 2> (<L NP NNP NNP John NP>) (<L S[dcl]\NP VBZ VBZ walks S[dcl]\NP>) )
//! ```
//!
//! Internal nodes are `(<T cat head ndtrs> child...)`, leaves are
//! `(<L cat pos pos token pred-arg-cat>)`. Combinators are not written in the
//! notation and are inferred from the categories.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::category::Category;
use super::tree::CcgTree;
use crate::error::{Error, Result};

/// One derivation line together with its identifier.
#[derive(Debug, Clone, PartialEq)]
pub struct AutoEntry {
    pub id: String,
    /// 1-based line number of the derivation.
    pub line: usize,
    pub result: Result<CcgTree>,
}

/// Parses every derivation, keeping failures per entry.
pub fn parse_auto_entries(text: &str) -> Vec<AutoEntry> {
    let mut out = Vec::new();
    let mut pending_id: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("ID=") {
            pending_id = Some(rest.split_whitespace().next().unwrap_or("").to_string());
            continue;
        }
        let id = pending_id
            .take()
            .unwrap_or_else(|| format!("line{}", idx + 1));
        out.push(AutoEntry {
            id,
            line: idx + 1,
            result: parse_derivation(raw, idx + 1),
        });
    }
    out
}

/// Parses all derivations, failing on the first malformed one.
pub fn parse_auto(text: &str) -> Result<Vec<CcgTree>> {
    parse_auto_entries(text)
        .into_iter()
        .map(|e| e.result)
        .collect()
}

/// Parses a single derivation line.
pub fn parse_derivation(line: &str, line_no: usize) -> Result<CcgTree> {
    let mut p = AutoParser {
        src: line,
        pos: 0,
        line: line_no,
    };
    p.skip_ws();
    let tree = p.node()?;
    p.skip_ws();
    if p.pos != line.len() {
        return Err(p.err("trailing input after derivation"));
    }
    Ok(tree)
}

struct AutoParser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
}

impl AutoParser<'_> {
    fn err(&self, reason: &str) -> Error {
        Error::Parse {
            line: self.line,
            column: self.src[..self.pos.min(self.src.len())].chars().count() + 1,
            reason: reason.to_string(),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            Ok(())
        } else {
            Err(self.err(&format!("expected `{lit}`")))
        }
    }

    fn node(&mut self) -> Result<CcgTree> {
        if self.rest().starts_with("(<L") {
            self.leaf()
        } else if self.rest().starts_with("(<T") {
            self.internal()
        } else {
            Err(self.err("expected `(<L` or `(<T`"))
        }
    }

    fn leaf(&mut self) -> Result<CcgTree> {
        self.expect("(<L")?;
        let start = self.pos;
        // tokens may contain `>`, so the leaf ends at the first `>)`
        let end = self
            .rest()
            .find(">)")
            .map(|i| self.pos + i)
            .ok_or_else(|| self.err("unterminated leaf"))?;
        let fields: Vec<&str> = self.src[start..end].split_whitespace().collect();
        if fields.len() < 4 {
            return Err(self.err("leaf needs category, tags and token"));
        }
        let category = Category::parse(fields[0])?;
        let token = fields[3];
        self.pos = end + 2;
        Ok(CcgTree::leaf(token, category))
    }

    fn internal(&mut self) -> Result<CcgTree> {
        self.expect("(<T")?;
        let start = self.pos;
        let end = self
            .rest()
            .find('>')
            .map(|i| self.pos + i)
            .ok_or_else(|| self.err("unterminated node header"))?;
        let fields: Vec<&str> = self.src[start..end].split_whitespace().collect();
        if fields.len() != 3 {
            return Err(self.err("node header needs category, head and daughter count"));
        }
        let category = Category::parse(fields[0])?;
        let arity: usize = fields[2]
            .parse()
            .map_err(|_| self.err("daughter count is not a number"))?;
        self.pos = end + 1;
        let mut children = Vec::with_capacity(arity);
        loop {
            self.skip_ws();
            if self.rest().starts_with(')') {
                self.pos += 1;
                break;
            }
            if self.rest().is_empty() {
                return Err(self.err("unterminated node"));
            }
            children.push(self.node()?);
        }
        if children.len() != arity || !(1..=2).contains(&arity) {
            return Err(self.err(&format!(
                "node declares {arity} daughters, found {}",
                children.len()
            )));
        }
        CcgTree::node(category, children)
    }
}

/// Writes a derivation in AUTO notation (without an ID line).
pub fn to_auto(tree: &CcgTree) -> String {
    let mut out = String::new();
    write_node(tree, &mut out);
    out
}

fn write_node(tree: &CcgTree, out: &mut String) {
    match tree {
        CcgTree::Leaf { token, category } => {
            let _ = write!(out, "(<L {category} XX XX {token} {category}>)");
        }
        CcgTree::Node {
            category, children, ..
        } => {
            let _ = write!(out, "(<T {category} 0 {}>", children.len());
            for c in children {
                out.push(' ');
                write_node(c, out);
            }
            out.push_str(" )");
        }
    }
}
