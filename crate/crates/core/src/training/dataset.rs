use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ccg::{Category, CcgTree};
use crate::error::{Error, Result};

/// Sentences with binary labels and disjoint train/dev/test index sets.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabeledDataset {
    pub items: Vec<(String, u8)>,
    pub train: Vec<usize>,
    pub dev: Vec<usize>,
    pub test: Vec<usize>,
}

impl LabeledDataset {
    /// Checks labels are binary and splits are disjoint and in range.
    pub fn validate(&self) -> Result<()> {
        if let Some((s, y)) = self.items.iter().find(|(_, y)| *y > 1) {
            return Err(Error::InvalidConfig(format!("label {y} of `{s}` is not 0 or 1")));
        }
        let mut seen = vec![false; self.items.len()];
        for &i in self.train.iter().chain(&self.dev).chain(&self.test) {
            if i >= self.items.len() || seen[i] {
                return Err(Error::InvalidConfig(format!("split index {i} is out of range or repeated")));
            }
            seen[i] = true;
        }
        Ok(())
    }

    pub fn label(&self, i: usize) -> u8 {
        self.items[i].1
    }

    pub fn text(&self, i: usize) -> &str {
        &self.items[i].0
    }
}

/// Number of generated sentences.
pub const DATASET_SIZE: usize = 130;
/// Per-class sizes of the train, dev and test splits.
pub const SPLIT_PER_CLASS: [usize; 3] = [35, 15, 15];

/// Label 0.
pub const FOOD: Topic = Topic {
    subjects: &["chef", "cook", "baker"],
    subject_adjectives: &["talented", "patient"],
    verbs: &["prepares", "cooks", "bakes"],
    objects: &["meal", "dinner", "sauce", "soup", "bread"],
    object_adjectives: &["delicious", "tasty", "fresh"],
};

/// Label 1.
pub const IT: Topic = Topic {
    subjects: &["programmer", "developer", "engineer"],
    subject_adjectives: &["skillful", "clever"],
    verbs: &["creates", "writes", "debugs"],
    objects: &["software", "code", "application", "program", "website"],
    object_adjectives: &["useful", "efficient", "new"],
};

/// Always part of the generated data.
pub const SEED_SENTENCES: [(&str, u8); 2] = [("chef prepares delicious meal", 0), ("skillful programmer creates software", 1)];

/// Vocabulary of one class.
#[derive(Debug, Clone, Copy)]
pub struct Topic {
    pub subjects: &'static [&'static str],
    pub subject_adjectives: &'static [&'static str],
    pub verbs: &'static [&'static str],
    pub objects: &'static [&'static str],
    pub object_adjectives: &'static [&'static str],
}

impl Topic {
    /// Every sentence `[ADJ] NOUN VERB [ADJ] NOUN` of this topic.
    pub fn sentences(&self) -> Vec<String> {
        let with_adj = |adjs: &[&str], nouns: &[&str]| -> Vec<String> {
            let mut out = Vec::new();
            for n in nouns {
                out.push(n.to_string());
                out.extend(adjs.iter().map(|a| format!("{a} {n}")));
            }
            out
        };
        let subjects = with_adj(self.subject_adjectives, self.subjects);
        let objects = with_adj(self.object_adjectives, self.objects);
        let mut out = Vec::new();
        for s in &subjects {
            for v in self.verbs {
                for o in &objects {
                    out.push(format!("{s} {v} {o}"));
                }
            }
        }
        out
    }
}

/// 130 distinct sentences, half per topic, split 70/30/30 with balanced
/// labels. The same seed always gives the same dataset.
pub fn generate_dataset(seed: u64) -> LabeledDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_class = DATASET_SIZE / 2;
    let mut items: Vec<(String, u8)> = Vec::with_capacity(DATASET_SIZE);
    for (label, topic) in [(0u8, FOOD), (1u8, IT)] {
        let mut pool = topic.sentences();
        pool.shuffle(&mut rng);
        let mut chosen: Vec<String> =
            SEED_SENTENCES.iter().filter(|(_, y)| *y == label).map(|(s, _)| s.to_string()).collect();
        for s in pool {
            if chosen.len() == per_class {
                break;
            }
            if !chosen.contains(&s) {
                chosen.push(s);
            }
        }
        items.extend(chosen.into_iter().map(|s| (s, label)));
    }
    items.shuffle(&mut rng);
    LabeledDataset::with_balanced_splits(items)
}

impl LabeledDataset {
    /// Splits each class 7:3:3 into train, dev and test, in item order.
    /// A class of 65 items gives [`SPLIT_PER_CLASS`].
    pub fn with_balanced_splits(items: Vec<(String, u8)>) -> Self {
        let mut quota = [[0usize; 3]; 2];
        for (y, q) in quota.iter_mut().enumerate() {
            let n = items.iter().filter(|(_, l)| *l as usize == y).count();
            let train = (n * 7 + 6) / 13;
            let dev = ((n * 3 + 6) / 13).min(n - train);
            *q = [train, dev, n - train - dev];
        }
        let mut ds = LabeledDataset { items, ..Default::default() };
        let mut taken = [[0usize; 3]; 2];
        for i in 0..ds.items.len() {
            let y = (ds.items[i].1 as usize).min(1);
            let Some(split) = (0..3).find(|&k| taken[y][k] < quota[y][k]) else { continue };
            taken[y][split] += 1;
            match split {
                0 => ds.train.push(i),
                1 => ds.dev.push(i),
                _ => ds.test.push(i),
            }
        }
        ds
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Adjective,
    Noun,
    Verb,
}

fn role(token: &str) -> Option<Role> {
    [FOOD, IT].iter().find_map(|t| {
        if t.subjects.contains(&token) || t.objects.contains(&token) {
            Some(Role::Noun)
        } else if t.subject_adjectives.contains(&token) || t.object_adjectives.contains(&token) {
            Some(Role::Adjective)
        } else if t.verbs.contains(&token) {
            Some(Role::Verb)
        } else {
            None
        }
    })
}

fn cat(text: &str) -> Category {
    Category::parse(text).expect("fixed category")
}

fn noun_phrase(tokens: &[&str]) -> Result<CcgTree> {
    let noun = |t: &str| CcgTree::leaf(t, cat("N"));
    let n = match tokens {
        [n] => noun(n),
        [a, n] => CcgTree::node(cat("N"), vec![CcgTree::leaf(a, cat("N/N")), noun(n)])?,
        _ => return Err(Error::Derivation(format!("`{}` is not a noun phrase", tokens.join(" ")))),
    };
    CcgTree::node(cat("NP"), vec![n])
}

/// The CCG derivation of a sentence over the generator's vocabulary.
pub fn dataset_derivation(text: &str) -> Result<CcgTree> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let mut roles = Vec::with_capacity(tokens.len());
    for t in &tokens {
        roles.push(role(t).ok_or_else(|| Error::Derivation(format!("`{t}` is not in the dataset vocabulary")))?);
    }
    let verb = roles
        .iter()
        .position(|r| *r == Role::Verb)
        .ok_or_else(|| Error::Derivation(format!("no verb in `{text}`")))?;
    let subject = noun_phrase(&tokens[..verb])?;
    let object = noun_phrase(&tokens[verb + 1..])?;
    for (part, rs) in [(&tokens[..verb], &roles[..verb]), (&tokens[verb + 1..], &roles[verb + 1..])] {
        let ok = matches!(rs, [Role::Noun] | [Role::Adjective, Role::Noun]);
        if !ok {
            return Err(Error::Derivation(format!("`{}` is not [ADJ] NOUN", part.join(" "))));
        }
    }
    let vp = CcgTree::node(
        cat("S[dcl]\\NP"),
        vec![CcgTree::leaf(tokens[verb], cat("(S[dcl]\\NP)/NP")), object],
    )?;
    CcgTree::node(cat("S[dcl]"), vec![subject, vp])
}
