//! Finite outcome spaces. The sigma-field is always the full power set, so a
//! space is nothing but an ordered list of distinct point labels; the order
//! is canonical for the lifetime of the space and fixes every matrix and
//! serialization layout built on top of it.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    labels: Vec<String>,
}

impl FiniteSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptySpace);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self { labels })
    }

    /// Space with points labeled `0..n-1`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    /// The two-point space `{0, 1}`.
    pub fn binary() -> Self {
        Self::numbered(2).expect("two points")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by construction
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, idx: usize) -> &str {
        &self.labels[idx]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.labels.len()
    }

    /// Product space with pair labels, ordered lexicographically in the
    /// factors' canonical orders (left factor major).
    pub fn product(&self, other: &FiniteSpace) -> FiniteSpace {
        let mut labels = Vec::with_capacity(self.len() * other.len());
        for l in &self.labels {
            for r in &other.labels {
                labels.push(format!("({l},{r})"));
            }
        }
        FiniteSpace { labels }
    }
}

impl fmt::Display for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels.join(", "))
    }
}

/// Index of the pair `(left, right)` in a product space built by
/// [`FiniteSpace::product`].
pub fn pair_index(right_len: usize, left: usize, right: usize) -> usize {
    left * right_len + right
}

/// Inverse of [`pair_index`].
pub fn unpair_index(right_len: usize, idx: usize) -> (usize, usize) {
    (idx / right_len, idx % right_len)
}
