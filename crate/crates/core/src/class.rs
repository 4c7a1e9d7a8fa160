//! Finite hypothesis classes over an indexed domain `0..m`.
//!
//! A class stores each hypothesis as a row bitset (bit `x` is `f(x)`) and
//! keeps the transposed column bitsets (bit `h` of column `x` is `f_h(x)`),
//! so version-space splits are a single bitset intersection.

use std::collections::HashSet;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct HypothesisClass {
    domain_size: usize,
    rows: Vec<FixedBitSet>,
    columns: Vec<FixedBitSet>,
    labels: Option<Vec<String>>,
    duplicates_dropped: usize,
}

impl PartialEq for HypothesisClass {
    fn eq(&self, other: &Self) -> bool {
        self.domain_size == other.domain_size && self.rows == other.rows
    }
}

impl Eq for HypothesisClass {}

impl HypothesisClass {
    /// Builds a class from row bitsets, dropping duplicates while keeping the
    /// first occurrence of each.
    pub fn new(domain_size: usize, rows: impl IntoIterator<Item = FixedBitSet>) -> Result<Self> {
        let class = Self::new_allow_empty(domain_size, rows)?;
        if class.is_empty() {
            return Err(Error::EmptyClass);
        }
        Ok(class)
    }

    /// Like [`HypothesisClass::new`] but an empty row list is accepted. Only
    /// version-space recursions should need this.
    pub fn new_allow_empty(
        domain_size: usize,
        rows: impl IntoIterator<Item = FixedBitSet>,
    ) -> Result<Self> {
        if domain_size == 0 {
            return Err(Error::input("domain_size must be at least 1"));
        }
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        let mut duplicates_dropped = 0;
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != domain_size {
                return Err(Error::input(format!(
                    "row {i} has length {}, expected {domain_size}",
                    row.len()
                )));
            }
            if seen.insert(row.clone()) {
                kept.push(row);
            } else {
                duplicates_dropped += 1;
            }
        }
        Ok(Self::from_distinct_rows(
            domain_size,
            kept,
            duplicates_dropped,
        ))
    }

    fn from_distinct_rows(domain_size: usize, rows: Vec<FixedBitSet>, dropped: usize) -> Self {
        let mut columns = vec![FixedBitSet::with_capacity(rows.len()); domain_size];
        for (h, row) in rows.iter().enumerate() {
            for x in row.ones() {
                columns[x].insert(h);
            }
        }
        HypothesisClass {
            domain_size,
            rows,
            columns,
            labels: None,
            duplicates_dropped: dropped,
        }
    }

    /// Parses rows written as `0`/`1` strings, character `x` giving `f(x)`.
    pub fn from_bitstrings<S: AsRef<str>>(domain_size: usize, rows: &[S]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyClass);
        }
        let parsed = rows
            .iter()
            .enumerate()
            .map(|(i, s)| parse_row(i, s.as_ref(), domain_size))
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain_size, parsed)
    }

    /// Builds `count` hypotheses from a predicate `f(h, x)`.
    pub fn from_fn(
        domain_size: usize,
        count: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        let rows = (0..count).map(|h| {
            let mut row = FixedBitSet::with_capacity(domain_size);
            for x in 0..domain_size {
                row.set(x, f(h, x));
            }
            row
        });
        Self::new(domain_size, rows)
    }

    /// Every function `{0..m} -> {0,1}`, in binary counting order with point 0
    /// as the least significant bit.
    pub fn full(domain_size: usize) -> Result<Self> {
        if domain_size > 20 {
            return Err(Error::input(format!(
                "full class on {domain_size} points is too large"
            )));
        }
        Self::from_fn(domain_size, 1 << domain_size, |h, x| (h >> x) & 1 == 1)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.domain_size {
            return Err(Error::input(format!(
                "{} labels supplied for {} points",
                labels.len(),
                self.domain_size
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Rows discarded as duplicates when the class was built.
    pub fn duplicates_dropped(&self) -> usize {
        self.duplicates_dropped
    }

    #[inline]
    pub fn eval(&self, h: usize, x: usize) -> bool {
        self.rows[h].contains(x)
    }

    pub fn row(&self, h: usize) -> &FixedBitSet {
        &self.rows[h]
    }

    pub fn rows(&self) -> &[FixedBitSet] {
        &self.rows
    }

    /// Hypotheses (by index) that output 1 on `x`.
    pub fn column(&self, x: usize) -> &FixedBitSet {
        &self.columns[x]
    }

    pub fn bitstring(&self, h: usize) -> String {
        (0..self.domain_size)
            .map(|x| if self.eval(h, x) { '1' } else { '0' })
            .collect()
    }

    pub fn to_bitstrings(&self) -> Vec<String> {
        (0..self.len()).map(|h| self.bitstring(h)).collect()
    }

    /// The set of all hypothesis indices, the root version space.
    pub fn all(&self) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.len());
        set.insert_range(..);
        set
    }

    pub fn position(&self, row: &FixedBitSet) -> Option<usize> {
        self.rows.iter().position(|r| r == row)
    }

    pub fn check_point(&self, x: usize) -> Result<()> {
        if x >= self.domain_size {
            return Err(Error::PointOutOfRange {
                point: x,
                domain_size: self.domain_size,
            });
        }
        Ok(())
    }

    pub fn check_hypothesis(&self, h: usize) -> Result<()> {
        if h >= self.len() {
            return Err(Error::HypothesisOutOfRange {
                index: h,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// Splits a version space on the label at `x`.
    pub fn split(&self, version_space: &FixedBitSet, x: usize, bit: bool) -> FixedBitSet {
        let mut out = version_space.clone();
        if bit {
            out.intersect_with(&self.columns[x]);
        } else {
            out.difference_with(&self.columns[x]);
        }
        out
    }

    /// Materializes a version space as a stand-alone class (possibly empty),
    /// keeping the relative order of the hypotheses.
    pub fn subclass(&self, members: &FixedBitSet) -> HypothesisClass {
        let rows = members.ones().map(|h| self.rows[h].clone()).collect();
        let mut class = Self::from_distinct_rows(self.domain_size, rows, 0);
        class.labels = self.labels.clone();
        class
    }

    /// `{f in self : f(point) = bit}`; may be empty.
    pub fn restrict(&self, point: usize, bit: bool) -> Result<HypothesisClass> {
        self.check_point(point)?;
        Ok(self.subclass(&self.split(&self.all(), point, bit)))
    }

    /// Equality as sets of functions, ignoring order.
    pub fn set_eq(&self, other: &HypothesisClass) -> bool {
        self.domain_size == other.domain_size
            && self.len() == other.len()
            && self.is_subset_of(other)
    }

    pub fn is_subset_of(&self, other: &HypothesisClass) -> bool {
        if self.domain_size != other.domain_size {
            return false;
        }
        let theirs: HashSet<&FixedBitSet> = other.rows.iter().collect();
        self.rows.iter().all(|r| theirs.contains(r))
    }
}

impl fmt::Display for HypothesisClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_bitstrings().join(","))
    }
}

fn parse_row(index: usize, s: &str, domain_size: usize) -> Result<FixedBitSet> {
    let s = s.trim();
    if s.chars().count() != domain_size {
        return Err(Error::input(format!(
            "row {index} ({s:?}) has length {}, expected {domain_size}",
            s.chars().count()
        )));
    }
    let mut row = FixedBitSet::with_capacity(domain_size);
    for (x, c) in s.chars().enumerate() {
        match c {
            '0' => {}
            '1' => row.insert(x),
            _ => {
                return Err(Error::input(format!(
                    "row {index} ({s:?}) contains non-binary character {c:?}"
                )))
            }
        }
    }
    Ok(row)
}

/// Builds a class from bit-strings, dropping duplicate rows.
pub fn make_class<S: AsRef<str>>(domain_size: usize, rows: &[S]) -> Result<HypothesisClass> {
    HypothesisClass::from_bitstrings(domain_size, rows)
}

/// `{f in class : f(point) = bit}`.
pub fn restrict(class: &HypothesisClass, point: usize, bit: bool) -> Result<HypothesisClass> {
    class.restrict(point, bit)
}
