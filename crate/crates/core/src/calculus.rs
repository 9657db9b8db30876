//! The kernel calculus: diagonal products, image laws, expectations, the
//! mean measure, conditional expectation of one kernel given another, and
//! independence of kernels — all in exact rational arithmetic.

use std::fmt;

use num_traits::Zero;

use crate::dist::Distribution;
use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::kernel::MarkovKernel;
use crate::partial::PartialVectorFunction;
use crate::rational::Rat;
use crate::space::{pair_index, unpair_index, FiniteSpace};
use crate::vector_measure::VectorMeasure;
use crate::vecops;

fn check_same_space(context: &'static str, a: &FiniteSpace, b: &FiniteSpace) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch {
            context,
            left: a.to_string(),
            right: b.to_string(),
        })
    }
}

/// Diagonal product of two kernels on a common source: the same source point
/// feeds both factors, and the output row on the product space multiplies
/// entrywise. Not a composition.
pub fn diagonal_product(m1: &MarkovKernel, m2: &MarkovKernel) -> Result<MarkovKernel> {
    check_same_space("diagonal product needs a common source", m1.source(), m2.source())?;
    let target = m1.target().product(m2.target());
    let right_len = m2.target().len();
    let rows = m1
        .source()
        .points()
        .map(|w| {
            let mut row = vec![Rat::zero(); target.len()];
            for a in m1.target().points() {
                let pa = m1.prob(w, a);
                if pa.is_zero() {
                    continue;
                }
                for b in m2.target().points() {
                    row[pair_index(right_len, a, b)] = pa * m2.prob(w, b);
                }
            }
            row
        })
        .collect();
    MarkovKernel::from_rows(m1.source().clone(), target, rows)
}

/// Law of "draw a source point from `p`, then draw from that row of `m`".
pub fn image_distribution(p: &Distribution, m: &MarkovKernel) -> Result<Distribution> {
    check_same_space("image distribution needs p on the kernel source", p.space(), m.source())?;
    let mut mass = vec![Rat::zero(); m.target().len()];
    for w in p.support() {
        let pw = p.mass(w);
        for t in m.target().points() {
            let mt = m.prob(w, t);
            if !mt.is_zero() {
                mass[t] += pw * mt;
            }
        }
    }
    Distribution::new(m.target().clone(), mass)
}

/// Mean vector of the row of `m` at one source point, under `e`.
fn row_mean(m: &MarkovKernel, e: &Embedding, w: usize) -> Vec<Rat> {
    let mut acc = vecops::zero_vec(e.dim());
    for t in m.target().points() {
        vecops::add_scaled(&mut acc, e.value(t), m.prob(w, t));
    }
    acc
}

/// Expectation of an embedded kernel: the p-average of its row means. Equals
/// the mean of [`image_distribution`] under the same embedding; the two
/// routes are asserted against each other in the invariant suite.
pub fn expectation(p: &Distribution, m: &MarkovKernel, e: &Embedding) -> Result<Vec<Rat>> {
    check_same_space("expectation needs p on the kernel source", p.space(), m.source())?;
    check_same_space("expectation needs the embedding on the kernel target", e.space(), m.target())?;
    let mut acc = vecops::zero_vec(e.dim());
    for w in p.support() {
        vecops::add_scaled(&mut acc, &row_mean(m, e, w), p.mass(w));
    }
    Ok(acc)
}

/// The vector measure whose atom at a source point is that point's mass
/// times the row mean there. Its total over the whole space is
/// [`expectation`].
pub fn mean_measure(p: &Distribution, m: &MarkovKernel, e: &Embedding) -> Result<VectorMeasure> {
    check_same_space("mean measure needs p on the kernel source", p.space(), m.source())?;
    check_same_space("mean measure needs the embedding on the kernel target", e.space(), m.target())?;
    let atoms = p
        .space()
        .points()
        .map(|w| {
            if p.is_charged(w) {
                vecops::scale(&row_mean(m, e, w), p.mass(w))
            } else {
                vecops::zero_vec(e.dim())
            }
        })
        .collect();
    VectorMeasure::new(p.space().clone(), e.dim(), atoms)
}

/// Conditional expectation of the embedded kernel `m` given the kernel
/// `cond`, as a function on the target of `cond`.
///
/// At each target point charged by the image of `p` under `cond`, the value
/// is the ratio of two mixture sums:
/// sum over source of cond-row mass times p times row mean of `m`, divided
/// by the image mass. Target points with zero image mass are masked, not
/// errors: the result is a representative of an almost-sure equivalence
/// class and has no value off the support.
pub fn conditional_expectation(
    p: &Distribution,
    m: &MarkovKernel,
    e: &Embedding,
    cond: &MarkovKernel,
) -> Result<PartialVectorFunction> {
    check_same_space("conditional expectation needs p on the kernel source", p.space(), m.source())?;
    check_same_space(
        "conditional expectation needs the embedding on the kernel target",
        e.space(),
        m.target(),
    )?;
    check_same_space(
        "conditional expectation needs both kernels on one source",
        m.source(),
        cond.source(),
    )?;

    let means: Vec<Option<Vec<Rat>>> = p
        .space()
        .points()
        .map(|w| p.is_charged(w).then(|| row_mean(m, e, w)))
        .collect();

    let slots = cond
        .target()
        .points()
        .map(|t| {
            let mut num = vecops::zero_vec(e.dim());
            let mut den = Rat::zero();
            for w in p.support() {
                let weight = cond.prob(w, t) * p.mass(w);
                if weight.is_zero() {
                    continue;
                }
                vecops::add_scaled(&mut num, means[w].as_ref().expect("charged"), &weight);
                den += weight;
            }
            (!den.is_zero()).then(|| vecops::div_by(&num, &den))
        })
        .collect();
    PartialVectorFunction::new(cond.target().clone(), e.dim(), slots)
}

/// Distribution-level independence of two kernels under `p`: the image of
/// their diagonal product factorizes as the product of the images, with
/// exact equality at every pair of target points.
pub fn are_independent(p: &Distribution, a: &MarkovKernel, b: &MarkovKernel) -> Result<bool> {
    check_same_space("independence needs both kernels on one source", a.source(), b.source())?;
    let joint = image_distribution(p, &diagonal_product(a, b)?)?;
    let img_a = image_distribution(p, a)?;
    let img_b = image_distribution(p, b)?;
    let right_len = b.target().len();
    for x in a.target().points() {
        for y in b.target().points() {
            if joint.mass(pair_index(right_len, x, y)) != &(img_a.mass(x) * img_b.mass(y)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// How [`independence_via_functionals`] enumerates test functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionalCheckMode {
    /// Indicators of single points on each side. On a finite space every
    /// bounded function is a finite linear combination of these, and both
    /// sides of the checked identity are bilinear in the pair of test
    /// functions, so singleton pairs decide the general case.
    Singletons,
    /// Paranoia mode: indicators of every subset on each side, re-verifying
    /// the bilinearity reduction at runtime. Only allowed for small targets.
    AllSubsets,
}

#[derive(Clone, Copy, Debug)]
pub struct FunctionalCheckOptions {
    pub mode: FunctionalCheckMode,
    /// Upper bound on the number of (function, function) pairs that may be
    /// enumerated before the check refuses to run.
    pub budget: u64,
}

impl Default for FunctionalCheckOptions {
    fn default() -> Self {
        Self { mode: FunctionalCheckMode::Singletons, budget: 1 << 20 }
    }
}

/// Most points per side for [`FunctionalCheckMode::AllSubsets`].
pub const MAX_SUBSET_POINTS: usize = 12;

/// Functional characterization of the independence `m2` vs the pair
/// `(m, m1)`: for every bounded test function on the product target of `m`
/// and `m1` and every bounded test function on the target of `m2`, the
/// p-integral of their product against the triple row measure must equal the
/// product of the separate p-integrals.
///
/// This is a second, independent route to the same answer as
/// [`are_independent`] applied to the diagonal product: it never builds
/// product kernels or image distributions, it integrates test functions.
pub fn independence_via_functionals(
    p: &Distribution,
    m: &MarkovKernel,
    m1: &MarkovKernel,
    m2: &MarkovKernel,
    opts: FunctionalCheckOptions,
) -> Result<bool> {
    check_same_space("functional check needs p on the kernel source", p.space(), m.source())?;
    check_same_space("functional check needs a common source", m.source(), m1.source())?;
    check_same_space("functional check needs a common source", m.source(), m2.source())?;

    let t_pair = m.target().len() * m1.target().len();
    let t2 = m2.target().len();

    // Per-source-point atom masses of the pair measure and of m2's row.
    // The row measure of the triple at a source point is the product measure
    // of the three rows, so integrating a product of test functions
    // factorizes pointwise in the source.
    let pair_atoms: Vec<Vec<Rat>> = p
        .space()
        .points()
        .map(|w| {
            let mut v = Vec::with_capacity(t_pair);
            for x in m.target().points() {
                for a in m1.target().points() {
                    v.push(m.prob(w, x) * m1.prob(w, a));
                }
            }
            v
        })
        .collect();

    match opts.mode {
        FunctionalCheckMode::Singletons => {
            let required = t_pair as u128 * t2 as u128;
            if required > opts.budget as u128 {
                return Err(Error::BudgetExceeded { required, budget: opts.budget as u128 });
            }
            // Integrals of the singleton indicators on each side.
            let lhs_pair: Vec<Rat> = (0..t_pair)
                .map(|s| p.support().map(|w| p.mass(w) * &pair_atoms[w][s]).sum())
                .collect();
            let lhs_m2: Vec<Rat> = (0..t2)
                .map(|t| p.support().map(|w| p.mass(w) * m2.prob(w, t)).sum())
                .collect();
            for (s, int_pair) in lhs_pair.iter().enumerate() {
                for (t, int_m2) in lhs_m2.iter().enumerate() {
                    let joint: Rat = p
                        .support()
                        .map(|w| p.mass(w) * &pair_atoms[w][s] * m2.prob(w, t))
                        .sum();
                    if joint != int_pair * int_m2 {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        FunctionalCheckMode::AllSubsets => {
            if t_pair > MAX_SUBSET_POINTS {
                return Err(Error::SubsetEnumerationTooLarge { max: MAX_SUBSET_POINTS, got: t_pair });
            }
            if t2 > MAX_SUBSET_POINTS {
                return Err(Error::SubsetEnumerationTooLarge { max: MAX_SUBSET_POINTS, got: t2 });
            }
            let n_pair_subsets = 1u128 << t_pair;
            let n_m2_subsets = 1u128 << t2;
            let required = n_pair_subsets * n_m2_subsets;
            if required > opts.budget as u128 {
                return Err(Error::BudgetExceeded { required, budget: opts.budget as u128 });
            }

            // Mass of every subset, per source point. Subset masses are sums
            // of atom masses; that is the definition of a measure on a
            // finite space, not the bilinearity this mode re-verifies.
            fn subset_mass_table(atoms: &[Rat]) -> Vec<Rat> {
                let n = 1usize << atoms.len();
                let mut out = Vec::with_capacity(n);
                out.push(Rat::zero());
                for mask in 1..n {
                    let low = mask.trailing_zeros() as usize;
                    let rest = mask & (mask - 1);
                    let v = &out[rest] + &atoms[low];
                    out.push(v);
                }
                out
            }
            let pair_table: Vec<Vec<Rat>> =
                pair_atoms.iter().map(|row| subset_mass_table(row)).collect();
            let m2_table: Vec<Vec<Rat>> = p
                .space()
                .points()
                .map(|w| subset_mass_table(m2.row(w).masses()))
                .collect();

            // Both tables are indexed `[source point][subset mask]`, so the
            // mask loops index into every row at once.
            #[allow(clippy::needless_range_loop)]
            for s_mask in 0..n_pair_subsets as usize {
                let int_pair: Rat = p.support().map(|w| p.mass(w) * &pair_table[w][s_mask]).sum();
                for t_mask in 0..n_m2_subsets as usize {
                    let joint: Rat = p
                        .support()
                        .map(|w| p.mass(w) * &pair_table[w][s_mask] * &m2_table[w][t_mask])
                        .sum();
                    let int_m2: Rat =
                        p.support().map(|w| p.mass(w) * &m2_table[w][t_mask]).sum();
                    if joint != int_pair.clone() * int_m2 {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

/// Joint answer to the two questions about a quadruple `(p, m, m1, m2)`:
/// is `m2` independent of the pair `(m, m1)`, and does conditioning `m` on
/// both `m1` and `m2` give the same function as conditioning on `m1` alone?
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndependenceEqualityReport {
    pub independent: bool,
    pub equal: bool,
}

/// Computes [`IndependenceEqualityReport`]. Equality is compared only at
/// pair points charged by the image of `p` under the diagonal product of
/// `m1` and `m2`; at such a point the first coordinate automatically carries
/// positive image mass under `m1` alone, so both sides are defined.
pub fn independence_equality_report(
    p: &Distribution,
    m: &MarkovKernel,
    e: &Embedding,
    m1: &MarkovKernel,
    m2: &MarkovKernel,
) -> Result<IndependenceEqualityReport> {
    let pair_m_m1 = diagonal_product(m, m1)?;
    let independent = are_independent(p, &pair_m_m1, m2)?;

    let m1_m2 = diagonal_product(m1, m2)?;
    let ce_both = conditional_expectation(p, m, e, &m1_m2)?;
    let ce_first = conditional_expectation(p, m, e, m1)?;
    let image_both = image_distribution(p, &m1_m2)?;

    let right_len = m2.target().len();
    let mut equal = true;
    for t in image_both.support() {
        let (i, _) = unpair_index(right_len, t);
        let lhs = ce_both.value(t).expect("charged point is defined");
        let rhs = ce_first.value(i).expect("marginally charged point is defined");
        if lhs != rhs {
            equal = false;
            break;
        }
    }
    Ok(IndependenceEqualityReport { independent, equal })
}

/// The four possible outcomes of [`independence_equality_report`], as a
/// classification. `IndependenceWithoutEquality` is impossible for correct
/// arithmetic; it is kept as a variant precisely so that observing it can be
/// escalated as an internal-consistency failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Category {
    BothHold,
    BothFail,
    EqualityWithoutIndependence,
    IndependenceWithoutEquality,
}

impl Category {
    pub fn from_report(r: IndependenceEqualityReport) -> Self {
        match (r.independent, r.equal) {
            (true, true) => Category::BothHold,
            (false, false) => Category::BothFail,
            (false, true) => Category::EqualityWithoutIndependence,
            (true, false) => Category::IndependenceWithoutEquality,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Category::BothHold => "both_hold",
            Category::BothFail => "both_fail",
            Category::EqualityWithoutIndependence => "equality_without_independence",
            Category::IndependenceWithoutEquality => "independence_without_equality",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "both_hold" => Some(Category::BothHold),
            "both_fail" => Some(Category::BothFail),
            "equality_without_independence" => Some(Category::EqualityWithoutIndependence),
            "independence_without_equality" => Some(Category::IndependenceWithoutEquality),
            _ => None,
        }
    }

    pub fn all() -> [Category; 4] {
        [
            Category::BothHold,
            Category::BothFail,
            Category::EqualityWithoutIndependence,
            Category::IndependenceWithoutEquality,
        ]
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Both marginals of a distribution on a product space.
pub fn marginal_pair(
    d: &Distribution,
    left: &FiniteSpace,
    right: &FiniteSpace,
) -> Result<(Distribution, Distribution)> {
    check_same_space(
        "marginals need a distribution on the given product space",
        d.space(),
        &left.product(right),
    )?;
    let mut lm = vec![Rat::zero(); left.len()];
    let mut rm = vec![Rat::zero(); right.len()];
    for i in left.points() {
        for j in right.points() {
            let m = d.mass(pair_index(right.len(), i, j));
            lm[i] += m;
            rm[j] += m;
        }
    }
    Ok((
        Distribution::new(left.clone(), lm)?,
        Distribution::new(right.clone(), rm)?,
    ))
}
