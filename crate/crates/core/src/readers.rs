//! Syntax-free readers: bag-of-words spiders and left-to-right cups.

use alloc::string::String;
use alloc::vec::Vec;

use crate::diagram::{Diagram, Generator};
use crate::error::{Error, Result};
use crate::pregroup::{AtomicType, PType, TypeSeq};

/// A tokenised sentence with at least one token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    tokens: Vec<String>,
}

impl Sentence {
    /// Splits on whitespace, strips ASCII punctuation and lowercases.
    pub fn parse(text: &str) -> Result<Self> {
        let tokens: Vec<String> = text
            .split_whitespace()
            .map(|t| {
                t.chars()
                    .filter(|c| !c.is_ascii_punctuation())
                    .flat_map(char::to_lowercase)
                    .collect::<String>()
            })
            .filter(|t| !t.is_empty())
            .collect();
        Sentence::from_tokens(tokens)
    }

    pub fn from_tokens(tokens: Vec<String>) -> Result<Self> {
        if tokens.is_empty() || tokens.iter().any(String::is_empty) {
            return Err(Error::InvalidConfig("a sentence needs at least one non-empty token".into()));
        }
        Ok(Sentence { tokens })
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Every word is an `s` state; one spider merges them all.
pub fn spiders_read(sentence: &Sentence) -> Diagram {
    let mut d = Diagram::empty();
    for tok in sentence.tokens() {
        let offset = d.cod().len();
        d.push(Generator::word(tok.clone(), TypeSeq::of(PType::s())), offset)
            .expect("states always type-check");
    }
    let spider = Generator::Spider {
        base: AtomicType::s(),
        z: 0,
        n_in: sentence.len(),
        n_out: 1,
    };
    d.push(spider, 0).expect("spider spans all word wires");
    d
}

/// Words `s · s^l` chained by cups into the final `s` word.
pub fn cups_read(sentence: &Sentence) -> Diagram {
    let s = PType::s();
    let link = TypeSeq(alloc::vec![s.clone(), s.l()]);
    let k = sentence.len();
    let mut d = Diagram::empty();
    for (i, tok) in sentence.tokens().iter().enumerate() {
        let ty = if i + 1 == k { TypeSeq::of(s.clone()) } else { link.clone() };
        let offset = d.cod().len();
        d.push(Generator::word(tok.clone(), ty), offset)
            .expect("states always type-check");
    }
    for _ in 1..k {
        d.push(Generator::cup(AtomicType::s(), -1), 1)
            .expect("cup joins s.l with the next s");
    }
    d
}
