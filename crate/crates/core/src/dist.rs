//! Probability distributions with exact rational masses.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{exact_str, Rat};
use crate::space::FiniteSpace;

/// Exact probability vector over a [`FiniteSpace`]. Masses are non-negative
/// and sum to exactly one; both facts are enforced at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    space: FiniteSpace,
    mass: Vec<Rat>,
}

impl Distribution {
    pub fn new(space: FiniteSpace, mass: Vec<Rat>) -> Result<Self> {
        if mass.len() != space.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} masses for {} points",
                mass.len(),
                space.len()
            )));
        }
        for (i, m) in mass.iter().enumerate() {
            if m.is_negative() {
                return Err(Error::InvalidDistribution(format!(
                    "negative mass {} at point `{}`",
                    exact_str(m),
                    space.label(i)
                )));
            }
        }
        let total: Rat = mass.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "total mass is {}, not 1",
                exact_str(&total)
            )));
        }
        Ok(Self { space, mass })
    }

    /// All mass on a single point.
    pub fn point_mass(space: FiniteSpace, idx: usize) -> Self {
        let mut mass = vec![Rat::zero(); space.len()];
        mass[idx] = Rat::one();
        Self { space, mass }
    }

    pub fn uniform(space: FiniteSpace) -> Self {
        let n = space.len();
        let mass = vec![Rat::new(1.into(), (n as u64).into()); n];
        Self { space, mass }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn mass(&self, idx: usize) -> &Rat {
        &self.mass[idx]
    }

    pub fn masses(&self) -> &[Rat] {
        &self.mass
    }

    /// Indices of points with strictly positive mass.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.mass
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(i, _)| i)
    }

    pub fn is_charged(&self, idx: usize) -> bool {
        !self.mass[idx].is_zero()
    }

    /// Probability of a set of points.
    pub fn mass_of<I: IntoIterator<Item = usize>>(&self, points: I) -> Rat {
        points.into_iter().map(|i| self.mass[i].clone()).sum()
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .space
            .labels()
            .iter()
            .zip(&self.mass)
            .map(|(l, m)| format!("{l}: {}", exact_str(m)))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
