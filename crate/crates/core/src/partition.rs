use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing vector of positive integers.
///
/// Zero parts are accepted by [`Partition::new`] and stripped, so `(2,0)`
/// and `(2)` name the same partition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!(
                "partition parts must be weakly decreasing: {parts:?}"
            )));
        }
        Ok(Partition(parts.into_iter().filter(|&p| p > 0).collect()))
    }

    /// Sorts arbitrary parts into a partition.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts.retain(|&p| p > 0);
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Parts padded with zeros to `len`.
    pub fn padded(&self, len: usize) -> Vec<u32> {
        let mut v = self.0.clone();
        v.resize(len.max(v.len()), 0);
        v
    }

    /// Dominance order: `self ⊵ other` iff every prefix sum of `self` is at
    /// least the corresponding prefix sum of `other`.
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.weight() != other.weight() {
            return false;
        }
        let len = self.len().max(other.len());
        let (a, b) = (self.padded(len), other.padded(len));
        let (mut sa, mut sb) = (0, 0);
        for i in 0..len {
            sa += a[i];
            sb += b[i];
            if sa < sb {
                return false;
            }
        }
        true
    }

    /// Parses `2,1,1` (blank-separated or comma-separated).
    pub fn parse(text: &str) -> Result<Self> {
        let parts = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<u32>()
                    .map_err(|_| Error::InvalidInput(format!("bad partition part `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `weight` with at most `max_len` parts, each part at most
/// `max_part`, in reverse lexicographic order.
pub fn partitions(weight: u32, max_len: usize, max_part: u32) -> Vec<Partition> {
    fn rec(rest: u32, max_part: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=max_part.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(weight, max_part, max_len, &mut Vec::new(), &mut out);
    out
}
