//! Dataset, history and metrics files.

use std::path::Path;

use qnlp_core::training::{LabeledDataset, Record};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Parses `label<TAB>sentence` lines; blank lines are skipped. Splits are
/// assigned per class in file order, see
/// [`LabeledDataset::with_balanced_splits`].
pub fn parse_dataset(text: &str) -> Result<LabeledDataset> {
    let mut items = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let start = offset;
        offset += line.len();
        let line = line.trim_end_matches(['\n', '\r']);
        if line.trim().is_empty() {
            continue;
        }
        let bad = |reason: &str| Error::Parse { offset: start, reason: format!("{reason} in `{line}`") };
        let (label, sentence) = line.split_once('\t').ok_or_else(|| bad("missing tab"))?;
        let label = match label.trim() {
            "0" => 0,
            "1" => 1,
            _ => return Err(bad("label is not 0 or 1")),
        };
        if sentence.trim().is_empty() {
            return Err(bad("empty sentence"));
        }
        items.push((sentence.trim().to_string(), label));
    }
    Ok(LabeledDataset::with_balanced_splits(items))
}

pub fn dataset_to_tsv(ds: &LabeledDataset) -> String {
    ds.items.iter().map(|(s, y)| format!("{y}\t{s}\n")).collect()
}

#[derive(Serialize)]
struct Row {
    iter: usize,
    train_loss: f64,
    train_acc: f64,
    dev_loss: f64,
    dev_acc: f64,
}

/// CSV with header `iter,train_loss,train_acc,dev_loss,dev_acc`.
pub fn history_csv(history: &[Record]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if history.is_empty() {
        w.write_record(["iter", "train_loss", "train_acc", "dev_loss", "dev_acc"]).expect("in memory");
    }
    for r in history {
        w.serialize(Row {
            iter: r.iter,
            train_loss: r.train_loss,
            train_acc: r.train_acc,
            dev_loss: r.dev_loss,
            dev_acc: r.dev_acc,
        })
        .expect("in memory");
    }
    String::from_utf8(w.into_inner().expect("in memory")).expect("utf-8")
}

/// Final scores written by `train` and `eval`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub iterations: usize,
    pub test_loss: f64,
    pub test_accuracy: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_dev_accuracy: Option<f64>,
}
