//! Randomized self-checks: generates instances and confirms that every
//! route to the same quantity lands on exactly the same rational. A failure
//! here means the library disagrees with itself, so each one is reported
//! with a full reproduction bundle.

use num_traits::Zero;

use crate::calculus::{
    are_independent, conditional_expectation, diagonal_product, expectation,
    image_distribution, independence_via_functionals,
};
use crate::density::{
    conditional_expectation_via_densities, independence_via_densities, kernel_model, Given,
};
use crate::dist::Distribution;
use crate::embedding::Embedding;
use crate::error::Result;
use crate::gen::{GenConfig, Generator};
use crate::kernel::MarkovKernel;
use crate::partial::PartialVectorFunction;
use crate::rational::Rat;
use crate::space::unpair_index;
use crate::vecops;

#[derive(Clone, Copy, Debug)]
pub struct CrosscheckConfig {
    pub seed: u64,
    pub iterations: u64,
}

/// Deliberate defect injected for negative-control tests of the harness
/// itself. The CLI always runs with `None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    None,
    /// Shifts one conditional-expectation value before comparing.
    PerturbConditionalExpectation,
    /// Inverts the functional independence answer.
    FlipFunctionalCheck,
}

pub const ROUTE_EQUIVALENCE: &str = "route_equivalence";
pub const FUNCTIONAL_EQUIVALENCE: &str = "functional_equivalence";
pub const TOWER_IDENTITY: &str = "tower_identity";
pub const DEFINING_IDENTITY: &str = "defining_identity";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckCounts {
    pub name: &'static str,
    pub run: u64,
    pub failed: u64,
}

/// Everything needed to reproduce one failed comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub check: &'static str,
    pub seed: u64,
    pub index: u64,
    pub instance: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summary {
    pub seed: u64,
    pub iterations: u64,
    pub counts: Vec<CheckCounts>,
    pub failures: Vec<Failure>,
}

impl Summary {
    pub fn total_failures(&self) -> u64 {
        self.failures.len() as u64
    }
}

fn render_quintuple(
    p: &Distribution,
    m: &MarkovKernel,
    e: &Embedding,
    m1: &MarkovKernel,
    m2: &MarkovKernel,
) -> String {
    format!("p = {p}\nembedding = {e}\nm =\n{m}m1 =\n{m1}m2 =\n{m2}")
}

/// Weighted sum of the defined conditional-expectation values over a set of
/// conditioner target points; undefined points carry zero weight.
fn weighted_sum(
    ce: &PartialVectorFunction,
    weights: &Distribution,
    points: impl Iterator<Item = usize>,
    dim: usize,
) -> Vec<Rat> {
    let mut acc = vecops::zero_vec(dim);
    for t in points {
        if let Some(v) = ce.value(t) {
            vecops::add_scaled(&mut acc, v, weights.mass(t));
        } else {
            debug_assert!(weights.mass(t).is_zero());
        }
    }
    acc
}

/// Runs `iterations` rounds of the four check families and tallies the
/// outcomes. Deterministic in `(seed, iterations, mutation)`.
pub fn run(cfg: &CrosscheckConfig, mutation: Mutation) -> Result<Summary> {
    let mut generator = Generator::new(GenConfig::with_seed(cfg.seed));
    let mut counts = [
        CheckCounts { name: ROUTE_EQUIVALENCE, run: 0, failed: 0 },
        CheckCounts { name: FUNCTIONAL_EQUIVALENCE, run: 0, failed: 0 },
        CheckCounts { name: TOWER_IDENTITY, run: 0, failed: 0 },
        CheckCounts { name: DEFINING_IDENTITY, run: 0, failed: 0 },
    ];
    let mut failures = Vec::new();

    for index in 0..cfg.iterations {
        let (p, m, e, m1, m2) = generator.quintuple();
        let instance = || render_quintuple(&p, &m, &e, &m1, &m2);

        // Functional route vs distribution-level definition.
        counts[1].run += 1;
        let mut functional = independence_via_functionals(&p, &m, &m1, &m2, Default::default())?;
        if mutation == Mutation::FlipFunctionalCheck {
            functional = !functional;
        }
        let definitional = are_independent(&p, &diagonal_product(&m, &m1)?, &m2)?;
        if functional != definitional {
            counts[1].failed += 1;
            failures.push(Failure {
                check: FUNCTIONAL_EQUIVALENCE,
                seed: cfg.seed,
                index,
                instance: instance(),
            });
        }

        // Conditional expectation against m2: tower property and the
        // defining identity over every conditioner subset.
        let mut ce = conditional_expectation(&p, &m, &e, &m2)?;
        if mutation == Mutation::PerturbConditionalExpectation {
            ce = perturb(ce);
        }
        let img = image_distribution(&p, &m2)?;
        let expect = expectation(&p, &m, &e)?;

        counts[2].run += 1;
        let towered = weighted_sum(&ce, &img, m2.target().points(), e.dim());
        if towered != expect {
            counts[2].failed += 1;
            failures.push(Failure {
                check: TOWER_IDENTITY,
                seed: cfg.seed,
                index,
                instance: instance(),
            });
        }

        counts[3].run += 1;
        let mut defining_ok = true;
        let t2 = m2.target().len();
        for mask in 0..(1u32 << t2) {
            let points: Vec<usize> = (0..t2).filter(|t| mask >> t & 1 == 1).collect();
            let mut lhs = vecops::zero_vec(e.dim());
            for w in p.support() {
                let row_mass: Rat = points.iter().map(|&t| m2.prob(w, t).clone()).sum();
                if row_mass.is_zero() {
                    continue;
                }
                let mut mean = vecops::zero_vec(e.dim());
                for x in m.target().points() {
                    vecops::add_scaled(&mut mean, e.value(x), m.prob(w, x));
                }
                vecops::add_scaled(&mut lhs, &mean, &(row_mass * p.mass(w)));
            }
            let rhs = weighted_sum(&ce, &img, points.into_iter(), e.dim());
            if lhs != rhs {
                defining_ok = false;
                break;
            }
        }
        if !defining_ok {
            counts[3].failed += 1;
            failures.push(Failure {
                check: DEFINING_IDENTITY,
                seed: cfg.seed,
                index,
                instance: instance(),
            });
        }

        // Density route vs kernel route on a fresh joint law.
        counts[0].run += 1;
        let joint = generator.joint_pmf();
        if !density_routes_agree(&joint)? {
            counts[0].failed += 1;
            failures.push(Failure {
                check: ROUTE_EQUIVALENCE,
                seed: cfg.seed,
                index,
                instance: joint.to_string(),
            });
        }
    }

    Ok(Summary {
        seed: cfg.seed,
        iterations: cfg.iterations,
        counts: counts.to_vec(),
        failures,
    })
}

/// True iff the density route and the kernel route agree on independence
/// and on both conditional expectations for this joint law.
pub fn density_routes_agree(joint: &crate::density::JointPmf) -> Result<bool> {
    let model = kernel_model(joint)?;

    let by_density = independence_via_densities(joint)?;
    let by_kernels =
        are_independent(&model.q, &diagonal_product(&model.m, &model.m1)?, &model.m2)?;
    if by_density != by_kernels {
        return Ok(false);
    }

    // Conditioning on the first coordinate: identical masks, identical
    // values.
    let dens_first = conditional_expectation_via_densities(joint, Given::X1)?;
    let kern_first = conditional_expectation(&model.q, &model.m, &model.e, &model.m1)?;
    let img_first = image_distribution(&model.q, &model.m1)?;
    for w1 in joint.space1().points() {
        if dens_first.is_defined(w1) != kern_first.is_defined(w1)
            || kern_first.is_defined(w1) != img_first.is_charged(w1)
        {
            return Ok(false);
        }
        if dens_first.value(w1) != kern_first.value(w1) {
            return Ok(false);
        }
    }

    // Conditioning on the pair: the density mask (positive marginal
    // product) can strictly contain the kernel mask (positive induced pair
    // mass); values are compared where the kernel route is defined.
    let dens_pair = conditional_expectation_via_densities(joint, Given::X1AndX2)?;
    let m1_m2 = diagonal_product(&model.m1, &model.m2)?;
    let kern_pair = conditional_expectation(&model.q, &model.m, &model.e, &m1_m2)?;
    let img_pair = image_distribution(&model.q, &m1_m2)?;
    for t in img_pair.support() {
        let (w1, w2) = unpair_index(joint.space2().len(), t);
        let _ = (w1, w2);
        if dens_pair.value(t) != kern_pair.value(t) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn perturb(ce: PartialVectorFunction) -> PartialVectorFunction {
    let space = ce.space().clone();
    let dim = ce.dim();
    let one = Rat::from_integer(1.into());
    let mut bumped = false;
    let slots = space
        .points()
        .map(|t| {
            ce.value(t).map(|v| {
                let mut v = v.to_vec();
                if !bumped {
                    v[0] += &one;
                    bumped = true;
                }
                v
            })
        })
        .collect();
    PartialVectorFunction::new(space, dim, slots).expect("same shape")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run_has_no_failures() {
        let summary = run(&CrosscheckConfig { seed: 4, iterations: 25 }, Mutation::None).unwrap();
        assert_eq!(summary.total_failures(), 0);
        for c in &summary.counts {
            assert_eq!(c.run, 25, "{}", c.name);
            assert_eq!(c.failed, 0, "{}", c.name);
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let cfg = CrosscheckConfig { seed: 99, iterations: 10 };
        assert_eq!(run(&cfg, Mutation::None).unwrap(), run(&cfg, Mutation::None).unwrap());
    }

    #[test]
    fn injected_defects_are_caught_with_bundles() {
        let cfg = CrosscheckConfig { seed: 4, iterations: 10 };
        for mutation in [Mutation::PerturbConditionalExpectation, Mutation::FlipFunctionalCheck] {
            let summary = run(&cfg, mutation).unwrap();
            assert!(summary.total_failures() > 0, "{mutation:?}");
            let f = &summary.failures[0];
            assert_eq!(f.seed, 4);
            assert!(!f.instance.is_empty());
        }
    }
}
