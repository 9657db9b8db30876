//! Vector-valued functions defined only on part of a space. The defined mask
//! stands for an almost-sure equivalence class: values off the support of the
//! relevant law do not exist, and are never compared.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{exact_str, Rat};
use crate::space::FiniteSpace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialVectorFunction {
    space: FiniteSpace,
    dim: usize,
    slots: Vec<Option<Vec<Rat>>>,
}

impl PartialVectorFunction {
    pub fn new(space: FiniteSpace, dim: usize, slots: Vec<Option<Vec<Rat>>>) -> Result<Self> {
        if slots.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                got: slots.len(),
            });
        }
        for s in slots.iter().flatten() {
            if s.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: s.len() });
            }
        }
        Ok(Self { space, dim, slots })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_defined(&self, idx: usize) -> bool {
        self.slots[idx].is_some()
    }

    pub fn value(&self, idx: usize) -> Option<&[Rat]> {
        self.slots[idx].as_deref()
    }

    /// Points where the function is defined.
    pub fn defined_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_some())
            .map(|(i, _)| i)
    }
}

impl fmt::Display for PartialVectorFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .space
            .labels()
            .iter()
            .zip(&self.slots)
            .map(|(l, s)| match s {
                Some(v) => {
                    let coords: Vec<String> = v.iter().map(exact_str).collect();
                    format!("{l}: ({})", coords.join(", "))
                }
                None => format!("{l}: masked"),
            })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn mask_and_values() {
        let s = FiniteSpace::binary();
        let p =
            PartialVectorFunction::new(s, 1, vec![Some(vec![rat(1, 2)]), None]).unwrap();
        assert!(p.is_defined(0));
        assert!(!p.is_defined(1));
        assert_eq!(p.value(0).unwrap(), &[rat(1, 2)]);
        assert_eq!(p.value(1), None);
        assert_eq!(p.defined_points().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn wrong_dimension_rejected() {
        let s = FiniteSpace::binary();
        assert!(PartialVectorFunction::new(
            s,
            2,
            vec![Some(vec![rat(1, 2)]), None]
        )
        .is_err());
    }
}
