//! k-ary Boolean aggregation rules stored as explicit truth tables.
//!
//! Input `(y_1, ..., y_k)` reads the table at `sum_j y_j * 2^(k-j)`, so `y_1`
//! is the most significant index bit.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Hard cap on materialized truth tables, independent of [`crate::Limits`].
pub const MAX_ARITY: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BooleanAggregator {
    arity: usize,
    table: FixedBitSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedRule {
    And,
    Or,
    Maj,
    Xor,
    Not,
    Identity,
}

impl NamedRule {
    pub fn name(self) -> &'static str {
        match self {
            NamedRule::And => "AND",
            NamedRule::Or => "OR",
            NamedRule::Maj => "MAJ",
            NamedRule::Xor => "XOR",
            NamedRule::Not => "NOT",
            NamedRule::Identity => "IDENTITY",
        }
    }
}

impl FromStr for NamedRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AND" => Ok(NamedRule::And),
            "OR" => Ok(NamedRule::Or),
            "MAJ" | "MAJORITY" => Ok(NamedRule::Maj),
            "XOR" | "PARITY" => Ok(NamedRule::Xor),
            "NOT" => Ok(NamedRule::Not),
            "IDENTITY" | "ID" => Ok(NamedRule::Identity),
            _ => Err(Error::input(format!("unknown aggregator name {s:?}"))),
        }
    }
}

impl BooleanAggregator {
    pub fn from_table(arity: usize, table: FixedBitSet) -> Result<Self> {
        if arity == 0 || arity > MAX_ARITY {
            return Err(Error::input(format!("arity {arity} is out of range")));
        }
        if table.len() != 1 << arity {
            return Err(Error::input(format!(
                "truth table has {} entries, arity {arity} needs {}",
                table.len(),
                1usize << arity
            )));
        }
        Ok(BooleanAggregator { arity, table })
    }

    /// Parses a `0`/`1` string whose character `i` is the output at index `i`.
    pub fn from_bitstring(arity: usize, bits: &str) -> Result<Self> {
        let mut table = FixedBitSet::with_capacity(bits.len());
        for (i, c) in bits.chars().enumerate() {
            match c {
                '0' => {}
                '1' => table.insert(i),
                _ => return Err(Error::input(format!("bad truth-table character {c:?}"))),
            }
        }
        Self::from_table(arity, table)
    }

    /// Fills the table by evaluating `f` on every input, `inputs[0]` being `y_1`.
    pub fn from_fn(arity: usize, mut f: impl FnMut(&[bool]) -> bool) -> Result<Self> {
        if arity == 0 || arity > MAX_ARITY {
            return Err(Error::input(format!("arity {arity} is out of range")));
        }
        let mut table = FixedBitSet::with_capacity(1 << arity);
        let mut inputs = vec![false; arity];
        for index in 0..1usize << arity {
            for (j, y) in inputs.iter_mut().enumerate() {
                *y = (index >> (arity - 1 - j)) & 1 == 1;
            }
            table.set(index, f(&inputs));
        }
        Self::from_table(arity, table)
    }

    pub fn named(rule: NamedRule, arity: usize) -> Result<Self> {
        let unsupported = || Error::UnsupportedAggregator {
            name: rule.name().to_string(),
            arity,
        };
        if arity == 0 {
            return Err(unsupported());
        }
        match rule {
            NamedRule::And => Self::from_fn(arity, |y| y.iter().all(|&b| b)),
            NamedRule::Or => Self::from_fn(arity, |y| y.iter().any(|&b| b)),
            NamedRule::Xor => Self::from_fn(arity, |y| y.iter().filter(|&&b| b).count() % 2 == 1),
            NamedRule::Maj if arity % 2 == 1 => {
                Self::from_fn(arity, |y| 2 * y.iter().filter(|&&b| b).count() > arity)
            }
            NamedRule::Not if arity == 1 => Self::from_fn(1, |y| !y[0]),
            NamedRule::Identity if arity == 1 => Self::from_fn(1, |y| y[0]),
            _ => Err(unsupported()),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &FixedBitSet {
        &self.table
    }

    #[inline]
    pub fn eval_index(&self, index: usize) -> bool {
        self.table.contains(index)
    }

    pub fn eval(&self, inputs: &[bool]) -> Result<bool> {
        if inputs.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: inputs.len(),
            });
        }
        Ok(self.eval_index(input_index(inputs)))
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.table.len())
            .map(|i| if self.table.contains(i) { '1' } else { '0' })
            .collect()
    }
}

/// Table index of an input vector, `inputs[0]` most significant.
pub fn input_index(inputs: &[bool]) -> usize {
    inputs.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

impl fmt::Display for BooleanAggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "arity {} table {}", self.arity, self.to_bitstring())
    }
}

/// Aggregator from a name such as `OR` and an arity.
pub fn named_aggregator(rule: NamedRule, arity: usize) -> Result<BooleanAggregator> {
    BooleanAggregator::named(rule, arity)
}
