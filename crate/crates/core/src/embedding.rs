//! Identification of a finite space with finitely many points of `Q^n`,
//! assigning each point a rational coordinate vector. This is what turns a
//! kernel row into something with a mean.

use std::fmt;

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::rational::{exact_str, rat_int, Rat};
use crate::space::FiniteSpace;
use crate::vecops;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    space: FiniteSpace,
    dim: usize,
    values: Vec<Vec<Rat>>,
}

impl Embedding {
    pub fn new(space: FiniteSpace, dim: usize, values: Vec<Vec<Rat>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidEmbedding("dimension must be positive".into()));
        }
        if values.len() != space.len() {
            return Err(Error::InvalidEmbedding(format!(
                "{} vectors for {} points",
                values.len(),
                space.len()
            )));
        }
        for (i, v) in values.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::InvalidEmbedding(format!(
                    "point `{}` has {} coordinates, expected {dim}",
                    space.label(i),
                    v.len()
                )));
            }
        }
        Ok(Self { space, dim, values })
    }

    /// One-dimensional embedding sending the point at index `i` to `i`.
    /// On `{0, 1}` this is the identity inclusion into the reals.
    pub fn point_index(space: FiniteSpace) -> Self {
        let values = space.points().map(|i| vec![rat_int(i as i64)]).collect();
        Self { space, dim: 1, values }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, idx: usize) -> &[Rat] {
        &self.values[idx]
    }

    /// Mean vector of a distribution on the embedded space.
    pub fn mean(&self, d: &Distribution) -> Result<Vec<Rat>> {
        if d.space() != &self.space {
            return Err(Error::SpaceMismatch {
                context: "mean of a distribution under an embedding",
                left: d.space().to_string(),
                right: self.space.to_string(),
            });
        }
        let mut acc = vecops::zero_vec(self.dim);
        for i in self.space.points() {
            vecops::add_scaled(&mut acc, &self.values[i], d.mass(i));
        }
        Ok(acc)
    }
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .space
            .labels()
            .iter()
            .zip(&self.values)
            .map(|(l, v)| {
                let coords: Vec<String> = v.iter().map(exact_str).collect();
                format!("{l} -> ({})", coords.join(", "))
            })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
