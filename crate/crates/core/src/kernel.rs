//! Markov kernels between finite spaces: one exact probability row per
//! source point. A kernel generalizes both a random variable (deterministic
//! rows) and a marginal law (constant rows).

use std::fmt;

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::rational::{exact_str, Rat};
use crate::space::FiniteSpace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovKernel {
    source: FiniteSpace,
    target: FiniteSpace,
    rows: Vec<Distribution>,
}

impl MarkovKernel {
    /// Builds a kernel from raw row entries, validating that every row is an
    /// exact probability vector on `target`.
    pub fn from_rows(source: FiniteSpace, target: FiniteSpace, rows: Vec<Vec<Rat>>) -> Result<Self> {
        if rows.len() != source.len() {
            return Err(Error::InvalidKernelRow {
                row: format!("{} rows", rows.len()),
                reason: format!("source has {} points", source.len()),
            });
        }
        let mut dists = Vec::with_capacity(rows.len());
        for (i, row) in rows.into_iter().enumerate() {
            let d = Distribution::new(target.clone(), row).map_err(|e| Error::InvalidKernelRow {
                row: source.label(i).to_string(),
                reason: e.to_string(),
            })?;
            dists.push(d);
        }
        Ok(Self { source, target, rows: dists })
    }

    /// Builds a kernel from per-point distributions, all on the same target.
    pub fn from_distributions(source: FiniteSpace, rows: Vec<Distribution>) -> Result<Self> {
        if rows.is_empty() || rows.len() != source.len() {
            return Err(Error::InvalidKernelRow {
                row: format!("{} rows", rows.len()),
                reason: format!("source has {} points", source.len()),
            });
        }
        let target = rows[0].space().clone();
        for (i, d) in rows.iter().enumerate() {
            if d.space() != &target {
                return Err(Error::SpaceMismatch {
                    context: "kernel rows must share one target space",
                    left: target.to_string(),
                    right: format!("{} (row `{}`)", d.space(), source.label(i)),
                });
            }
        }
        Ok(Self { source, target, rows })
    }

    /// The kernel that leaves every point where it is.
    pub fn identity(space: FiniteSpace) -> Self {
        let rows = space
            .points()
            .map(|i| Distribution::point_mass(space.clone(), i))
            .collect();
        Self { source: space.clone(), target: space, rows }
    }

    /// The kernel that ignores its input and always emits `row`.
    pub fn constant(source: FiniteSpace, row: Distribution) -> Self {
        let target = row.space().clone();
        let rows = vec![row; source.len()];
        Self { source, target, rows }
    }

    /// Kernel of a function: source point `i` maps to target point `map[i]`
    /// with probability one.
    pub fn deterministic(source: FiniteSpace, target: FiniteSpace, map: &[usize]) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::InvalidKernelRow {
                row: format!("{} assignments", map.len()),
                reason: format!("source has {} points", source.len()),
            });
        }
        for (i, &t) in map.iter().enumerate() {
            if t >= target.len() {
                return Err(Error::InvalidKernelRow {
                    row: source.label(i).to_string(),
                    reason: format!("target index {t} out of range"),
                });
            }
        }
        let rows = map
            .iter()
            .map(|&t| Distribution::point_mass(target.clone(), t))
            .collect();
        Ok(Self { source, target, rows })
    }

    pub fn source(&self) -> &FiniteSpace {
        &self.source
    }

    pub fn target(&self) -> &FiniteSpace {
        &self.target
    }

    /// The probability row attached to a source point.
    pub fn row(&self, src: usize) -> &Distribution {
        &self.rows[src]
    }

    /// Single entry: probability of reaching `tgt` from `src`.
    pub fn prob(&self, src: usize, tgt: usize) -> &Rat {
        self.rows[src].mass(tgt)
    }
}

impl fmt::Display for MarkovKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kernel {} -> {}", self.source, self.target)?;
        for (i, row) in self.rows.iter().enumerate() {
            let entries: Vec<String> =
                row.masses().iter().map(exact_str).collect();
            writeln!(f, "  {}: [{}]", self.source.label(i), entries.join(", "))?;
        }
        Ok(())
    }
}
