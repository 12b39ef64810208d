use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;

use crate::error::{Error, Result};

/// A CCG category. `X/Y` seeks `Y` on its right, `X\Y` on its left.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Category {
    Atomic {
        name: String,
        feature: Option<String>,
    },
    Forward(Box<Category>, Box<Category>),
    Backward(Box<Category>, Box<Category>),
    /// `X[conj]`: a conjunction that has consumed its right conjunct.
    Conj(Box<Category>),
}

const PUNCTUATION: &[&str] = &[
    ",", ".", ":", ";", "LRB", "RRB", "LQU", "RQU", "-LRB-", "-RRB-", "``", "''", "?", "!",
];

impl Category {
    pub fn atom(name: &str) -> Self {
        Category::Atomic {
            name: name.to_string(),
            feature: None,
        }
    }

    pub fn atom_with(name: &str, feature: &str) -> Self {
        Category::Atomic {
            name: name.to_string(),
            feature: Some(feature.to_string()),
        }
    }

    pub fn fwd(result: Category, argument: Category) -> Self {
        Category::Forward(Box::new(result), Box::new(argument))
    }

    pub fn bwd(result: Category, argument: Category) -> Self {
        Category::Backward(Box::new(result), Box::new(argument))
    }

    pub fn parse(text: &str) -> Result<Category> {
        let mut p = CatParser {
            src: text,
            pos: 0,
        };
        let cat = p.category()?;
        if p.pos != text.len() {
            return Err(Error::UnknownCategory(text.to_string()));
        }
        Ok(cat)
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, Category::Forward(..) | Category::Backward(..))
    }

    /// Punctuation marks and bare `conj`: leaves that attach to a neighbour.
    pub fn is_punctuation_like(&self) -> bool {
        match self {
            Category::Atomic { name, .. } => name == "conj" || PUNCTUATION.contains(&name.as_str()),
            _ => false,
        }
    }

    /// Structural equality ignoring atomic features (`S[dcl]` ~ `S`).
    pub fn matches(&self, other: &Category) -> bool {
        match (self, other) {
            (Category::Atomic { name: a, .. }, Category::Atomic { name: b, .. }) => a == b,
            (Category::Forward(r1, a1), Category::Forward(r2, a2))
            | (Category::Backward(r1, a1), Category::Backward(r2, a2)) => {
                r1.matches(r2) && a1.matches(a2)
            }
            (Category::Conj(a), Category::Conj(b)) => a.matches(b),
            _ => false,
        }
    }

    fn fmt_arg(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_complex() {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Category::Atomic { name, feature } => {
                f.write_str(name)?;
                if let Some(feat) = feature {
                    write!(f, "[{feat}]")?;
                }
                Ok(())
            }
            Category::Forward(res, arg) => {
                res.fmt_arg(f)?;
                f.write_str("/")?;
                arg.fmt_arg(f)
            }
            Category::Backward(res, arg) => {
                res.fmt_arg(f)?;
                f.write_str("\\")?;
                arg.fmt_arg(f)
            }
            Category::Conj(inner) => {
                inner.fmt_arg(f)?;
                f.write_str("[conj]")
            }
        }
    }
}

impl core::str::FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Category::parse(s)
    }
}

struct CatParser<'a> {
    src: &'a str,
    pos: usize,
}

impl CatParser<'_> {
    fn err(&self) -> Error {
        Error::UnknownCategory(self.src.to_string())
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    // category := primary (('/' | '\') primary)*, left associative
    fn category(&mut self) -> Result<Category> {
        let mut left = self.primary()?;
        while let Some(c) = self.peek() {
            match c {
                b'/' => {
                    self.pos += 1;
                    let right = self.primary()?;
                    left = Category::fwd(left, right);
                }
                b'\\' => {
                    self.pos += 1;
                    let right = self.primary()?;
                    left = Category::bwd(left, right);
                }
                _ => break,
            }
        }
        Ok(left)
    }

    fn primary(&mut self) -> Result<Category> {
        let cat = if self.peek() == Some(b'(') {
            self.pos += 1;
            let inner = self.category()?;
            if self.peek() != Some(b')') {
                return Err(self.err());
            }
            self.pos += 1;
            inner
        } else {
            let start = self.pos;
            while let Some(c) = self.peek() {
                if matches!(c, b'(' | b')' | b'[' | b']' | b'/' | b'\\') || c.is_ascii_whitespace() {
                    break;
                }
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err());
            }
            Category::atom(&self.src[start..self.pos])
        };
        if self.peek() != Some(b'[') {
            return Ok(cat);
        }
        let start = self.pos + 1;
        let end = self.src[start..]
            .find(']')
            .map(|i| start + i)
            .ok_or_else(|| self.err())?;
        let feature = &self.src[start..end];
        self.pos = end + 1;
        match cat {
            _ if feature == "conj" => Ok(Category::Conj(Box::new(cat))),
            Category::Atomic { name, feature: None } => Ok(Category::Atomic {
                name,
                feature: Some(feature.to_string()),
            }),
            _ => Err(Error::UnknownCategory(format!(
                "{}: feature on complex category",
                self.src
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_ccgbank_categories() {
        for s in [
            "N",
            "NP/N",
            "S[dcl]",
            "(S[dcl]\\NP)/NP",
            "((S\\NP)\\(S\\NP))/NP",
            "((S[dcl]\\NP)/NP)/NP",
            "NP[conj]",
            "(S[dcl]\\NP)[conj]",
            ",",
            "conj",
            "S/(S\\NP)",
        ] {
            let c = Category::parse(s).unwrap();
            assert_eq!(c.to_string(), s);
        }
    }

    #[test]
    fn slashes_associate_left() {
        let c = Category::parse("S\\NP/NP").unwrap();
        assert_eq!(
            c,
            Category::fwd(
                Category::bwd(Category::atom("S"), Category::atom("NP")),
                Category::atom("NP")
            )
        );
    }

    #[test]
    fn rejects_malformed() {
        for s in ["", "(NP", "NP)", "NP/", "S[dcl", "/N"] {
            assert!(Category::parse(s).is_err(), "{s}");
        }
    }

    #[test]
    fn loose_matching_ignores_features() {
        let a = Category::parse("S[dcl]\\NP").unwrap();
        let b = Category::parse("S[b]\\NP").unwrap();
        assert!(a.matches(&b));
        assert!(!a.matches(&Category::parse("S/NP").unwrap()));
    }
}
