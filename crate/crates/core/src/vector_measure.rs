//! Signed vector-valued measures on a finite space, additive by construction:
//! the value on a set is the sum of its atom values.

use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::space::FiniteSpace;
use crate::vecops;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorMeasure {
    space: FiniteSpace,
    dim: usize,
    atoms: Vec<Vec<Rat>>,
}

impl VectorMeasure {
    pub fn new(space: FiniteSpace, dim: usize, atoms: Vec<Vec<Rat>>) -> Result<Self> {
        if atoms.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                got: atoms.len(),
            });
        }
        for a in &atoms {
            if a.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: a.len() });
            }
        }
        Ok(Self { space, dim, atoms })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atom(&self, idx: usize) -> &[Rat] {
        &self.atoms[idx]
    }

    /// Value on a set of points.
    pub fn of_set<I: IntoIterator<Item = usize>>(&self, points: I) -> Vec<Rat> {
        let mut acc = vecops::zero_vec(self.dim);
        for i in points {
            for (a, x) in acc.iter_mut().zip(&self.atoms[i]) {
                *a += x;
            }
        }
        acc
    }

    /// Value on the whole space.
    pub fn total(&self) -> Vec<Rat> {
        self.of_set(self.space.points())
    }
}
