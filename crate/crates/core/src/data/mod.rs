//! Datasets, gold-score normalization and the on-disk embedding-pair formats.

mod embp;
mod manifest;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::GoldScore;
use crate::metrics::DenseVector;

pub use embp::{
    read_embedding_bytes, read_embedding_file, read_header, sha256_file, write_embedding_file,
    write_embedding_pairs, EmbpHeader, EmbpReader, HEADER_LEN, MAGIC, VERSION,
};
pub use manifest::{load_manifest, parse_manifest, DatasetManifest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Task {
    #[serde(rename = "STS")]
    Sts,
    Paraphrase,
    #[serde(rename = "NLI")]
    Nli,
}

/// How a dataset's native label becomes a gold score in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GoldRule {
    /// Graded 0–5 similarity, divided by 5.
    ZeroToFive,
    /// Graded 1–5 relatedness, mapped by (raw − 1) / 4.
    OneToFive,
    /// Binary 0/1 label, passed through.
    Binary,
    /// Entailment maps to 1, neutral and contradiction to 0.
    Entailment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DatasetKind {
    #[serde(rename = "GLUE-STSB")]
    GlueStsb,
    #[serde(rename = "SICK")]
    Sick,
    #[serde(rename = "STS16")]
    Sts16,
    #[serde(rename = "PAWS")]
    Paws,
    #[serde(rename = "QuoraQP")]
    QuoraQp,
    #[serde(rename = "SNLI")]
    Snli,
    #[serde(rename = "MultiNLI")]
    MultiNli,
}

impl DatasetKind {
    pub const ALL: [DatasetKind; 7] = [
        DatasetKind::GlueStsb,
        DatasetKind::Sick,
        DatasetKind::Sts16,
        DatasetKind::Paws,
        DatasetKind::QuoraQp,
        DatasetKind::Snli,
        DatasetKind::MultiNli,
    ];

    pub fn id(self) -> &'static str {
        match self {
            DatasetKind::GlueStsb => "GLUE-STSB",
            DatasetKind::Sick => "SICK",
            DatasetKind::Sts16 => "STS16",
            DatasetKind::Paws => "PAWS",
            DatasetKind::QuoraQp => "QuoraQP",
            DatasetKind::Snli => "SNLI",
            DatasetKind::MultiNli => "MultiNLI",
        }
    }

    pub fn task(self) -> Task {
        match self {
            DatasetKind::GlueStsb | DatasetKind::Sick | DatasetKind::Sts16 => Task::Sts,
            DatasetKind::Paws | DatasetKind::QuoraQp => Task::Paraphrase,
            DatasetKind::Snli | DatasetKind::MultiNli => Task::Nli,
        }
    }

    pub fn gold_rule(self) -> GoldRule {
        match self {
            DatasetKind::GlueStsb | DatasetKind::Sts16 => GoldRule::ZeroToFive,
            DatasetKind::Sick => GoldRule::OneToFive,
            DatasetKind::Paws | DatasetKind::QuoraQp => GoldRule::Binary,
            DatasetKind::Snli | DatasetKind::MultiNli => GoldRule::Entailment,
        }
    }
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for DatasetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim();
        DatasetKind::ALL
            .into_iter()
            .find(|d| d.id().eq_ignore_ascii_case(key))
            .or(match key.to_ascii_lowercase().as_str() {
                "stsb" | "sts-b" | "glue-sts-b" => Some(DatasetKind::GlueStsb),
                "quora" | "qqp" => Some(DatasetKind::QuoraQp),
                "mnli" => Some(DatasetKind::MultiNli),
                _ => None,
            })
            .ok_or_else(|| Error::Label(format!("unknown dataset id `{key}`")))
    }
}

/// A dataset-native label: a numeric score or a class name.
#[derive(Debug, Clone, PartialEq)]
pub enum RawGold {
    Score(f64),
    Label(String),
}

impl From<f64> for RawGold {
    fn from(v: f64) -> Self {
        RawGold::Score(v)
    }
}

impl From<&str> for RawGold {
    fn from(s: &str) -> Self {
        RawGold::Label(s.to_owned())
    }
}

fn in_range(raw: f64, lo: f64, hi: f64, dataset: DatasetKind) -> Result<f64> {
    if raw.is_finite() && (lo..=hi).contains(&raw) {
        Ok(raw)
    } else {
        Err(Error::Range(format!("{dataset} score {raw} outside [{lo}, {hi}]")))
    }
}

/// Maps a dataset-native label onto [0, 1].
pub fn normalize_gold(raw: impl Into<RawGold>, dataset: DatasetKind) -> Result<GoldScore> {
    let raw = raw.into();
    let value = match (dataset.gold_rule(), raw) {
        (GoldRule::ZeroToFive, RawGold::Score(s)) => in_range(s, 0.0, 5.0, dataset)? / 5.0,
        (GoldRule::OneToFive, RawGold::Score(s)) => (in_range(s, 1.0, 5.0, dataset)? - 1.0) / 4.0,
        (GoldRule::Binary, RawGold::Score(s)) => {
            if s == 0.0 || s == 1.0 {
                s
            } else {
                return Err(Error::Range(format!("{dataset} label {s} is not 0 or 1")));
            }
        }
        (GoldRule::Binary, RawGold::Label(l)) => match l.trim() {
            "0" => 0.0,
            "1" => 1.0,
            other => return Err(Error::Label(format!("{dataset} label `{other}`"))),
        },
        (GoldRule::Entailment, RawGold::Label(l)) => match l.trim().to_ascii_lowercase().as_str() {
            "entailment" => 1.0,
            "neutral" | "contradiction" => 0.0,
            other => return Err(Error::Label(format!("{dataset} label `{other}`"))),
        },
        (_, RawGold::Label(l)) => {
            return Err(Error::Label(format!("{dataset} expects a numeric score, got `{l}`")))
        }
        (GoldRule::Entailment, RawGold::Score(s)) => {
            return Err(Error::Label(format!("{dataset} expects a class label, got {s}")))
        }
    };
    GoldScore::new(value)
}

/// Two embeddings of equal dimension plus a normalized gold score.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingPair {
    pub x: DenseVector,
    pub y: DenseVector,
    pub gold: GoldScore,
}

impl EmbeddingPair {
    pub fn new(x: DenseVector, y: DenseVector, gold: f64) -> Result<Self> {
        if x.dim() != y.dim() {
            return Err(Error::Dimension { expected: x.dim(), found: y.dim() });
        }
        Ok(EmbeddingPair { x, y, gold: GoldScore::new(gold)? })
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }
}
