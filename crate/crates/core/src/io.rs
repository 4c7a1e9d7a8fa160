//! JSON formats for classes, aggregators, trees, covers and staircase
//! instances.
//!
//! ```text
//! class       {"domain_size": m, "labels": [..]?, "hypotheses": ["0101", ..]}
//! aggregator  {"arity": k, "truth_table": "0111"} | {"named": "OR", "arity": k}
//! tree        {"depth": n, "kind": "points" | "bits", "values": [..]}
//! cover       {"depth": n, "trees": [[0, 1, ..], ..]}
//! instance    {"points": [..], "witnesses": [[..], ..],
//!              "classes": ["path.json" | {class}, ..], "aggregator": {..}}
//! ```
//!
//! Class paths inside an instance are resolved relative to the instance file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::aggregator::BooleanAggregator;
use crate::class::HypothesisClass;
use crate::error::{Error, Result};
use crate::ramsey::StaircaseInstance;
use crate::trees::{CoverSet, LabeledTree, TreeKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFile {
    pub domain_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub hypotheses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AggregatorFile {
    Table { arity: usize, truth_table: String },
    Named { named: String, arity: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeFile {
    pub depth: usize,
    pub kind: String,
    pub values: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverFile {
    pub depth: usize,
    pub trees: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassRef {
    Path(String),
    Inline(ClassFile),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub points: Vec<usize>,
    pub witnesses: Vec<Vec<usize>>,
    pub classes: Vec<ClassRef>,
    pub aggregator: AggregatorFile,
}

impl From<&HypothesisClass> for ClassFile {
    fn from(c: &HypothesisClass) -> Self {
        ClassFile {
            domain_size: c.domain_size(),
            labels: c.labels().map(<[String]>::to_vec),
            hypotheses: c.to_bitstrings(),
        }
    }
}

impl TryFrom<ClassFile> for HypothesisClass {
    type Error = Error;

    fn try_from(f: ClassFile) -> Result<Self> {
        let class = HypothesisClass::from_bitstrings(f.domain_size, &f.hypotheses)?;
        match f.labels {
            Some(labels) => class.with_labels(labels),
            None => Ok(class),
        }
    }
}

impl From<&BooleanAggregator> for AggregatorFile {
    fn from(g: &BooleanAggregator) -> Self {
        AggregatorFile::Table {
            arity: g.arity(),
            truth_table: g.to_bitstring(),
        }
    }
}

impl TryFrom<AggregatorFile> for BooleanAggregator {
    type Error = Error;

    fn try_from(f: AggregatorFile) -> Result<Self> {
        match f {
            AggregatorFile::Table { arity, truth_table } => {
                BooleanAggregator::from_bitstring(arity, &truth_table)
            }
            AggregatorFile::Named { named, arity } => {
                BooleanAggregator::named(named.parse()?, arity)
            }
        }
    }
}

impl From<&LabeledTree> for TreeFile {
    fn from(t: &LabeledTree) -> Self {
        TreeFile {
            depth: t.depth(),
            kind: t.kind().name().to_string(),
            values: t.values().to_vec(),
        }
    }
}

impl TryFrom<TreeFile> for LabeledTree {
    type Error = Error;

    fn try_from(f: TreeFile) -> Result<Self> {
        let kind = match f.kind.as_str() {
            "points" => TreeKind::Points,
            "bits" => TreeKind::Bits,
            other => return Err(Error::input(format!("unknown tree kind {other:?}"))),
        };
        LabeledTree::new(f.depth, kind, f.values)
    }
}

impl From<&CoverSet> for CoverFile {
    fn from(c: &CoverSet) -> Self {
        CoverFile {
            depth: c.depth(),
            trees: c.trees().iter().map(|t| t.values().to_vec()).collect(),
        }
    }
}

impl TryFrom<CoverFile> for CoverSet {
    type Error = Error;

    fn try_from(f: CoverFile) -> Result<Self> {
        CoverSet::from_bit_vectors(f.depth, f.trees)
    }
}

impl InstanceFile {
    /// Inlines every class.
    pub fn from_instance(inst: &StaircaseInstance) -> Self {
        InstanceFile {
            points: inst.points.clone(),
            witnesses: inst.witnesses.clone(),
            classes: inst
                .classes
                .iter()
                .map(|c| ClassRef::Inline(c.into()))
                .collect(),
            aggregator: (&inst.aggregator).into(),
        }
    }

    /// Resolves class paths against `base` and checks the instance shape (not
    /// the staircase invariant).
    pub fn resolve(self, base: &Path) -> Result<StaircaseInstance> {
        let classes = self
            .classes
            .into_iter()
            .map(|r| match r {
                ClassRef::Inline(f) => f.try_into(),
                ClassRef::Path(p) => read_class(&base.join(p)),
            })
            .collect::<Result<Vec<_>>>()?;
        StaircaseInstance::new(
            self.points,
            self.witnesses,
            classes,
            self.aggregator.try_into()?,
        )
    }
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::input(format!("malformed JSON: {e}")))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data always serializes")
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    parse_json(&read_text(path)?).map_err(|e| match e {
        Error::Input(msg) => Error::input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = to_json(value);
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

pub fn read_class(path: &Path) -> Result<HypothesisClass> {
    read_json::<ClassFile>(path)?.try_into()
}

pub fn read_aggregator(path: &Path) -> Result<BooleanAggregator> {
    read_json::<AggregatorFile>(path)?.try_into()
}

pub fn read_tree(path: &Path) -> Result<LabeledTree> {
    read_json::<TreeFile>(path)?.try_into()
}

pub fn read_cover(path: &Path) -> Result<CoverSet> {
    read_json::<CoverFile>(path)?.try_into()
}

pub fn read_instance(path: &Path) -> Result<StaircaseInstance> {
    let base: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
    read_json::<InstanceFile>(path)?.resolve(&base)
}
