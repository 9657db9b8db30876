//! Small helpers for vectors of rationals.

use num_traits::Zero;

use crate::rational::Rat;

pub(crate) fn zero_vec(dim: usize) -> Vec<Rat> {
    vec![Rat::zero(); dim]
}

pub(crate) fn add_scaled(acc: &mut [Rat], v: &[Rat], w: &Rat) {
    debug_assert_eq!(acc.len(), v.len());
    if w.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        *a += x * w;
    }
}

pub(crate) fn scale(v: &[Rat], w: &Rat) -> Vec<Rat> {
    v.iter().map(|x| x * w).collect()
}

pub(crate) fn div_by(v: &[Rat], d: &Rat) -> Vec<Rat> {
    debug_assert!(!d.is_zero());
    v.iter().map(|x| x / d).collect()
}
