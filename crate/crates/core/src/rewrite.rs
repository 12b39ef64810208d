//! Rewrite rules that replace function words by cap wirings.
//!
//! A rule matches a word state by token and type and replaces it in place by
//! a fragment with the same codomain. Running [`Diagram::normal_form`]
//! afterwards yanks the new caps against the cups that consumed the word.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::diagram::{Diagram, Generator, Layer};
use crate::error::{Error, Result};
use crate::pregroup::{AtomicType, PType, TypeSeq};

pub const AUXILIARY_WORDS: &str = include_str!("../data/auxiliary.txt");
pub const CONNECTOR_WORDS: &str = include_str!("../data/connector.txt");
pub const DETERMINER_WORDS: &str = include_str!("../data/determiner.txt");
pub const PREPOSITION_WORDS: &str = include_str!("../data/preposition.txt");

/// Names of the built-in rules, in their default order.
pub const RULE_NAMES: [&str; 6] = [
    "auxiliary",
    "connector",
    "determiner",
    "postadverb",
    "preadverb",
    "prepositional_phrase",
];

type Matcher = Box<dyn Fn(&str, &TypeSeq) -> bool + Send + Sync>;
type Transformer = Box<dyn Fn(&str, &TypeSeq) -> Vec<Layer> + Send + Sync>;

/// A named word-level rewrite.
pub struct RewriteRule {
    name: String,
    matcher: Matcher,
    transformer: Transformer,
}

impl core::fmt::Debug for RewriteRule {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("RewriteRule").field("name", &self.name).finish()
    }
}

impl RewriteRule {
    /// `transformer` returns the layers of a fragment from `1` to the word's
    /// codomain, with offsets relative to the word.
    pub fn new(
        name: impl Into<String>,
        matcher: impl Fn(&str, &TypeSeq) -> bool + Send + Sync + 'static,
        transformer: impl Fn(&str, &TypeSeq) -> Vec<Layer> + Send + Sync + 'static,
    ) -> Self {
        RewriteRule {
            name: name.into(),
            matcher: Box::new(matcher),
            transformer: Box::new(transformer),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matches(&self, token: &str, cod: &TypeSeq) -> bool {
        (self.matcher)(token, cod)
    }

    /// Replacement fragment for a matched word state.
    pub fn fragment(&self, token: &str, cod: &TypeSeq) -> Result<Diagram> {
        Diagram::new(TypeSeq::unit(), cod.clone(), (self.transformer)(token, cod))
    }
}

/// Word list parsed from a one-token-per-line file; blank lines and `#`
/// comments are ignored.
pub fn parse_word_list(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_lowercase())
        .collect()
}

fn in_list(list: &Option<BTreeSet<String>>, token: &str) -> bool {
    match list {
        Some(words) => words.contains(&token.to_lowercase()),
        None => true,
    }
}

fn n(z: i32) -> PType {
    PType::new(AtomicType::n(), z)
}

fn s(z: i32) -> PType {
    PType::new(AtomicType::s(), z)
}

/// True when `cod` pairs wire `i` with wire `len - 1 - i` through caps.
fn nested_cap_shape(cod: &TypeSeq) -> bool {
    let c = cod.as_slice();
    !c.is_empty() && c.len().is_multiple_of(2) && (0..c.len() / 2).all(|i| c[i] == c[c.len() - 1 - i].r())
}

fn nested_caps(cod: &TypeSeq) -> Vec<Layer> {
    let c = cod.as_slice();
    (0..c.len() / 2)
        .map(|i| Layer::new(Generator::cap_on(&c[c.len() - 1 - i]), i))
        .collect()
}

/// Replaces auxiliary verbs of modifier shape by nested caps.
pub fn auxiliary(words: BTreeSet<String>) -> RewriteRule {
    let words = Some(words);
    RewriteRule::new(
        "auxiliary",
        move |tok, cod| in_list(&words, tok) && nested_cap_shape(cod),
        |_, cod| nested_caps(cod),
    )
}

/// Replaces sentence connectors of modifier shape by nested caps.
pub fn connector(words: BTreeSet<String>) -> RewriteRule {
    let words = Some(words);
    RewriteRule::new(
        "connector",
        move |tok, cod| in_list(&words, tok) && nested_cap_shape(cod),
        |_, cod| nested_caps(cod),
    )
}

/// Replaces a determiner `n · n^l` by a cap.
pub fn determiner(words: BTreeSet<String>) -> RewriteRule {
    let words = Some(words);
    RewriteRule::new(
        "determiner",
        move |tok, cod| in_list(&words, tok) && cod.as_slice() == [n(0), n(-1)],
        |_, _| vec![Layer::new(Generator::cap(AtomicType::n(), -1), 0)],
    )
}

/// Verb-phrase post-modifier `s^r · n^rr · n^r · s`: the word keeps
/// `s^r · s` and a cap carries the subject wire through.
pub fn postadverb(words: Option<BTreeSet<String>>) -> RewriteRule {
    RewriteRule::new(
        "postadverb",
        move |tok, cod| in_list(&words, tok) && cod.as_slice() == [s(1), n(2), n(1), s(0)],
        |tok, _| {
            vec![
                Layer::new(Generator::word(tok, TypeSeq(vec![s(1), s(0)])), 0),
                Layer::new(Generator::cap(AtomicType::n(), 1), 1),
            ]
        },
    )
}

/// Verb-phrase pre-modifier `n^r · s · s^l · n`: a cap around the word's
/// `s · s^l` carries the subject wire.
pub fn preadverb(words: Option<BTreeSet<String>>) -> RewriteRule {
    RewriteRule::new(
        "preadverb",
        move |tok, cod| in_list(&words, tok) && cod.as_slice() == [n(1), s(0), s(-1), n(0)],
        |tok, _| {
            vec![
                Layer::new(Generator::cap(AtomicType::n(), 0), 0),
                Layer::new(Generator::word(tok, TypeSeq(vec![s(0), s(-1)])), 1),
            ]
        },
    )
}

/// Post-verbal preposition `s^r · n^rr · n^r · s · n^l`: the word keeps
/// `s^r · s · n^l` and a cap carries the subject wire.
pub fn prepositional_phrase(words: Option<BTreeSet<String>>) -> RewriteRule {
    RewriteRule::new(
        "prepositional_phrase",
        move |tok, cod| in_list(&words, tok) && cod.as_slice() == [s(1), n(2), n(1), s(0), n(-1)],
        |tok, _| {
            vec![
                Layer::new(Generator::word(tok, TypeSeq(vec![s(1), s(0), n(-1)])), 0),
                Layer::new(Generator::cap(AtomicType::n(), 1), 1),
            ]
        },
    )
}

/// Word lists used by the built-in rules. `None` for the adverb and
/// preposition lists matches on type shape alone.
#[derive(Debug, Clone)]
pub struct WordLists {
    pub auxiliary: BTreeSet<String>,
    pub connector: BTreeSet<String>,
    pub determiner: BTreeSet<String>,
    pub adverb: Option<BTreeSet<String>>,
    pub preposition: Option<BTreeSet<String>>,
}

impl Default for WordLists {
    fn default() -> Self {
        WordLists {
            auxiliary: parse_word_list(AUXILIARY_WORDS),
            connector: parse_word_list(CONNECTOR_WORDS),
            determiner: parse_word_list(DETERMINER_WORDS),
            adverb: None,
            preposition: None,
        }
    }
}

/// Built-in rule by name.
pub fn builtin(name: &str, lists: &WordLists) -> Result<RewriteRule> {
    Ok(match name {
        "auxiliary" => auxiliary(lists.auxiliary.clone()),
        "connector" => connector(lists.connector.clone()),
        "determiner" => determiner(lists.determiner.clone()),
        "postadverb" => postadverb(lists.adverb.clone()),
        "preadverb" => preadverb(lists.adverb.clone()),
        "prepositional_phrase" => prepositional_phrase(lists.preposition.clone()),
        other => return Err(Error::InvalidConfig(format!("unknown rewrite rule `{other}`"))),
    })
}

/// Ordered rule set; the first matching rule rewrites a word.
#[derive(Debug, Default)]
pub struct Rewriter {
    rules: Vec<RewriteRule>,
}

impl Rewriter {
    pub fn new(rules: Vec<RewriteRule>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for r in &rules {
            if !seen.insert(r.name.clone()) {
                return Err(Error::InvalidConfig(format!("duplicate rewrite rule `{}`", r.name)));
            }
        }
        Ok(Rewriter { rules })
    }

    pub fn from_names<S: AsRef<str>>(names: &[S], lists: &WordLists) -> Result<Self> {
        let rules = names
            .iter()
            .map(|n| builtin(n.as_ref(), lists))
            .collect::<Result<Vec<_>>>()?;
        Rewriter::new(rules)
    }

    pub fn rule_names(&self) -> Vec<String> {
        self.rules.iter().map(|r| r.name.to_string()).collect()
    }

    /// Rewrites every matching word state in place.
    pub fn apply(&self, d: &Diagram) -> Diagram {
        if self.rules.is_empty() {
            return d.clone();
        }
        let mut layers = Vec::with_capacity(d.len());
        for layer in d.layers() {
            match self.rewrite_layer(layer) {
                Some(fragment) => layers.extend(fragment),
                None => layers.push(layer.clone()),
            }
        }
        Diagram::new(d.dom().clone(), d.cod().clone(), layers)
            .expect("fragments preserve the word's type")
    }

    /// Rewrite followed by snake removal.
    pub fn apply_normalized(&self, d: &Diagram) -> Diagram {
        self.apply(d).normal_form()
    }

    fn rewrite_layer(&self, layer: &Layer) -> Option<Vec<Layer>> {
        let Generator::Word { token, dom, cod } = &layer.generator else {
            return None;
        };
        if !dom.is_empty() {
            return None;
        }
        let rule = self.rules.iter().find(|r| r.matches(token, cod))?;
        match rule.fragment(token, cod) {
            Ok(fragment) => Some(
                fragment
                    .into_layers()
                    .into_iter()
                    .map(|l| Layer::new(l.generator, l.offset + layer.offset))
                    .collect(),
            ),
            Err(e) => {
                log::warn!("rule {} produced an ill-typed fragment for {token}: {e}", rule.name);
                None
            }
        }
    }
}
