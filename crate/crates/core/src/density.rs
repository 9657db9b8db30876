//! A second computation route through joint densities.
//!
//! A [`JointPmf`] carries the joint law of four finite random variables
//! (an embedded value variable plus three coordinates), with every reference
//! measure taken to be counting measure, so each density is a pointwise mass
//! table and every integral is a finite sum. Independence and conditional
//! expectations computed here never touch the kernel types; agreement with
//! the kernel route is asserted by the invariant suites.

use std::fmt;

use num_traits::Zero;

use crate::diagnosis::ScenarioTable;
use crate::dist::Distribution;
use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::kernel::MarkovKernel;
use crate::partial::PartialVectorFunction;
use crate::rational::{rat_u, Rat};
use crate::space::{pair_index, FiniteSpace};
use crate::vecops;

/// Joint probability mass over (value, first, second, third) coordinates.
/// The value coordinate carries an embedding so its conditional laws have
/// means.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointPmf {
    x_embedding: Embedding,
    s1: FiniteSpace,
    s2: FiniteSpace,
    s3: FiniteSpace,
    /// Row-major over (x, w1, w2, w3).
    mass: Vec<Rat>,
}

/// Axis selector for marginal tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    X1,
    X2,
    X3,
}

/// Dense marginal mass table over a subset of axes, row-major in the order
/// the axes were requested.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginalTable {
    axes: Vec<Axis>,
    dims: Vec<usize>,
    values: Vec<Rat>,
}

impl MarginalTable {
    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn value(&self, idx: &[usize]) -> &Rat {
        assert_eq!(idx.len(), self.dims.len());
        let mut flat = 0;
        for (i, d) in idx.iter().zip(&self.dims) {
            debug_assert!(i < d);
            flat = flat * d + i;
        }
        &self.values[flat]
    }
}

/// Which variable a conditional density is taken for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiVariable {
    X,
    X1,
    X2,
}

/// Conditioner choice for [`conditional_expectation_via_densities`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Given {
    /// Condition on the first coordinate alone.
    X1,
    /// Condition on the (first, second) pair.
    X1AndX2,
}

/// The kernel-route model induced by a joint law: the law of the third
/// coordinate, and the three conditional kernels given it.
#[derive(Clone, Debug)]
pub struct InducedKernels {
    pub q: Distribution,
    pub m: MarkovKernel,
    pub m1: MarkovKernel,
    pub m2: MarkovKernel,
    pub e: Embedding,
}

impl JointPmf {
    pub fn new(
        x_embedding: Embedding,
        s1: FiniteSpace,
        s2: FiniteSpace,
        s3: FiniteSpace,
        mass: Vec<Rat>,
    ) -> Result<Self> {
        let expected = x_embedding.space().len() * s1.len() * s2.len() * s3.len();
        if mass.len() != expected {
            return Err(Error::InvalidDistribution(format!(
                "{} masses for {expected} joint points",
                mass.len()
            )));
        }
        let mut total = Rat::zero();
        for m in &mass {
            if m < &Rat::zero() {
                return Err(Error::InvalidDistribution("negative joint mass".into()));
            }
            total += m;
        }
        if total != Rat::from_integer(1.into()) {
            return Err(Error::InvalidDistribution(format!(
                "joint masses sum to {}, not 1",
                crate::rational::exact_str(&total)
            )));
        }
        Ok(Self { x_embedding, s1, s2, s3, mass })
    }

    /// Accumulates a sparse list of `(x, w1, w2, w3, mass)` records;
    /// unmentioned points get zero mass, repeated points add up.
    pub fn from_sparse(
        x_embedding: Embedding,
        s1: FiniteSpace,
        s2: FiniteSpace,
        s3: FiniteSpace,
        records: &[(usize, usize, usize, usize, Rat)],
    ) -> Result<Self> {
        let dims = [x_embedding.space().len(), s1.len(), s2.len(), s3.len()];
        let mut mass = vec![Rat::zero(); dims.iter().product()];
        for &(x, w1, w2, w3, ref r) in records {
            if x >= dims[0] || w1 >= dims[1] || w2 >= dims[2] || w3 >= dims[3] {
                return Err(Error::InvalidDistribution(format!(
                    "sparse record ({x},{w1},{w2},{w3}) out of range"
                )));
            }
            mass[((x * dims[1] + w1) * dims[2] + w2) * dims[3] + w3] += r;
        }
        Self::new(x_embedding, s1, s2, s3, mass)
    }

    /// Empirical joint law of a scenario table: each cell count over the
    /// population size, with all four coordinates binary and the value
    /// coordinate embedded as 0 and 1.
    pub fn from_scenario_table(t: &ScenarioTable) -> Self {
        let b = FiniteSpace::binary;
        let n = t.n();
        let mut mass = Vec::with_capacity(16);
        for x in 0..2 {
            for w1 in 0..2 {
                for w2 in 0..2 {
                    for w3 in 0..2 {
                        mass.push(rat_u(t.count(w1, w2, w3, x), n));
                    }
                }
            }
        }
        Self::new(Embedding::point_index(b()), b(), b(), b(), mass)
            .expect("table cells sum to n")
    }

    pub fn x_space(&self) -> &FiniteSpace {
        self.x_embedding.space()
    }

    pub fn x_embedding(&self) -> &Embedding {
        &self.x_embedding
    }

    pub fn space1(&self) -> &FiniteSpace {
        &self.s1
    }

    pub fn space2(&self) -> &FiniteSpace {
        &self.s2
    }

    pub fn space3(&self) -> &FiniteSpace {
        &self.s3
    }

    pub fn dim(&self) -> usize {
        self.x_embedding.dim()
    }

    fn dims(&self) -> [usize; 4] {
        [self.x_space().len(), self.s1.len(), self.s2.len(), self.s3.len()]
    }

    pub fn mass(&self, x: usize, w1: usize, w2: usize, w3: usize) -> &Rat {
        let [_, d1, d2, d3] = self.dims();
        &self.mass[((x * d1 + w1) * d2 + w2) * d3 + w3]
    }

    fn axis_len(&self, a: Axis) -> usize {
        match a {
            Axis::X => self.x_space().len(),
            Axis::X1 => self.s1.len(),
            Axis::X2 => self.s2.len(),
            Axis::X3 => self.s3.len(),
        }
    }

    /// Exact marginal mass table over a non-empty subset of axes. With
    /// counting reference measures a marginal density is exactly a marginal
    /// mass table.
    pub fn marginal(&self, axes: &[Axis]) -> Result<MarginalTable> {
        if axes.is_empty() {
            return Err(Error::InvalidDistribution(
                "marginal needs at least one axis".into(),
            ));
        }
        for (i, a) in axes.iter().enumerate() {
            if axes[..i].contains(a) {
                return Err(Error::InvalidDistribution(format!(
                    "axis {a:?} listed twice in marginal request"
                )));
            }
        }
        let dims: Vec<usize> = axes.iter().map(|&a| self.axis_len(a)).collect();
        let mut values = vec![Rat::zero(); dims.iter().product()];
        let [dx, d1, d2, d3] = self.dims();
        for x in 0..dx {
            for w1 in 0..d1 {
                for w2 in 0..d2 {
                    for w3 in 0..d3 {
                        let m = self.mass(x, w1, w2, w3);
                        if m.is_zero() {
                            continue;
                        }
                        let mut flat = 0;
                        for (a, d) in axes.iter().zip(&dims) {
                            let coord = match a {
                                Axis::X => x,
                                Axis::X1 => w1,
                                Axis::X2 => w2,
                                Axis::X3 => w3,
                            };
                            flat = flat * d + coord;
                        }
                        values[flat] += m;
                    }
                }
            }
        }
        Ok(MarginalTable { axes: axes.to_vec(), dims, values })
    }
}

impl fmt::Display for JointPmf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "joint over x={} s1={} s2={} s3={}, embedding {}",
            self.x_space(),
            self.s1,
            self.s2,
            self.s3,
            self.x_embedding
        )?;
        let [dx, d1, d2, d3] = self.dims();
        for x in 0..dx {
            for w1 in 0..d1 {
                for w2 in 0..d2 {
                    for w3 in 0..d3 {
                        let m = self.mass(x, w1, w2, w3);
                        if !m.is_zero() {
                            writeln!(
                                f,
                                "  ({},{},{},{}): {}",
                                self.x_space().label(x),
                                self.s1.label(w1),
                                self.s2.label(w2),
                                self.s3.label(w3),
                                crate::rational::exact_str(m)
                            )?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The per-instance density tables every operation below works from:
/// single-axis marginals, the pairwise-with-third marginals, and the
/// (value, third) marginal.
struct Tables {
    f1: Vec<Rat>,
    f2: Vec<Rat>,
    f3: Vec<Rat>,
    /// indexed (w1, w3)
    f13: Vec<Vec<Rat>>,
    /// indexed (w2, w3)
    f23: Vec<Vec<Rat>>,
    /// indexed (x, w3)
    g3: Vec<Vec<Rat>>,
}

impl Tables {
    fn build(j: &JointPmf) -> Self {
        let grab = |t: MarginalTable| t.values().to_vec();
        let grid = |t: MarginalTable, rows: usize, cols: usize| -> Vec<Vec<Rat>> {
            let v = t.values();
            (0..rows)
                .map(|r| (0..cols).map(|c| v[r * cols + c].clone()).collect())
                .collect()
        };
        let [dx, d1, d2, d3] = j.dims();
        let _ = dx;
        Self {
            f1: grab(j.marginal(&[Axis::X1]).expect("valid axes")),
            f2: grab(j.marginal(&[Axis::X2]).expect("valid axes")),
            f3: grab(j.marginal(&[Axis::X3]).expect("valid axes")),
            f13: grid(j.marginal(&[Axis::X1, Axis::X3]).expect("valid axes"), d1, d3),
            f23: grid(j.marginal(&[Axis::X2, Axis::X3]).expect("valid axes"), d2, d3),
            g3: grid(j.marginal(&[Axis::X, Axis::X3]).expect("valid axes"), j.x_space().len(), d3),
        }
    }

    /// Mean vector of the value coordinate given the third coordinate, at a
    /// charged third point.
    fn mean_given_third(&self, j: &JointPmf, w3: usize) -> Vec<Rat> {
        debug_assert!(!self.f3[w3].is_zero());
        let mut acc = vecops::zero_vec(j.dim());
        for x in j.x_space().points() {
            vecops::add_scaled(&mut acc, j.x_embedding.value(x), &self.g3[x][w3]);
        }
        vecops::div_by(&acc, &self.f3[w3])
    }
}

/// Conditional density of one variable given the third coordinate, at a
/// charged third point: the pairwise mass over the third-coordinate mass.
pub fn conditional_density(j: &JointPmf, var: PhiVariable, w3: usize, point: usize) -> Result<Rat> {
    let t = Tables::build(j);
    if t.f3[w3].is_zero() {
        return Err(Error::MaskedPoint(j.s3.label(w3).to_string()));
    }
    let num = match var {
        PhiVariable::X => &t.g3[point][w3],
        PhiVariable::X1 => &t.f13[point][w3],
        PhiVariable::X2 => &t.f23[point][w3],
    };
    Ok(num / &t.f3[w3])
}

/// Density of the conditional law of the (value, first) pair given the third
/// coordinate: the product of the two conditional densities.
pub fn product_conditional_density(j: &JointPmf, w3: usize, x: usize, w1: usize) -> Result<Rat> {
    let t = Tables::build(j);
    if t.f3[w3].is_zero() {
        return Err(Error::MaskedPoint(j.s3.label(w3).to_string()));
    }
    Ok(&t.g3[x][w3] * &t.f13[w1][w3] / (&t.f3[w3] * &t.f3[w3]))
}

/// Independence of the second coordinate from the (value, first) pair, in
/// pure density form: at every triple of target points, the mixture of the
/// product of the three conditional densities over the third coordinate must
/// factor into the second coordinate's marginal times the mixture of the
/// remaining two. Third points with zero mass contribute nothing to either
/// side. Agrees with the kernel-route independence test by construction of
/// the induced model; the two code paths share nothing.
pub fn independence_via_densities(j: &JointPmf) -> Result<bool> {
    let t = Tables::build(j);
    let charged: Vec<usize> = j.s3.points().filter(|&k| !t.f3[k].is_zero()).collect();
    if charged.is_empty() {
        // Unreachable through the public constructors: unit total mass
        // forces a charged third point.
        return Err(Error::DegenerateJoint("third coordinate has no mass".into()));
    }
    for w2 in j.s2.points() {
        for x in j.x_space().points() {
            for w1 in j.s1.points() {
                let lhs: Rat = charged
                    .iter()
                    .map(|&k| {
                        &t.f23[w2][k] * &t.g3[x][k] * &t.f13[w1][k] / (&t.f3[k] * &t.f3[k])
                    })
                    .sum();
                let mix: Rat = charged
                    .iter()
                    .map(|&k| &t.g3[x][k] * &t.f13[w1][k] / &t.f3[k])
                    .sum();
                if lhs != &t.f2[w2] * mix {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Conditional expectation of the value coordinate's conditional kernel
/// given the first coordinate (or the pair), computed entirely from density
/// tables.
///
/// The mask is the support of the displayed denominator: the first
/// coordinate's marginal for [`Given::X1`], the product of the two marginals
/// for [`Given::X1AndX2`]. For the pair, a masked-in point can still carry
/// zero mass under the induced joint of the two conditioners; there the
/// displayed integrand vanishes identically and the value is the zero
/// vector. At every point charged by that induced joint the result is the
/// exact ratio of mixture sums and agrees with the kernel route.
pub fn conditional_expectation_via_densities(
    j: &JointPmf,
    given: Given,
) -> Result<PartialVectorFunction> {
    let t = Tables::build(j);
    let charged: Vec<usize> = j.s3.points().filter(|&k| !t.f3[k].is_zero()).collect();
    let dim = j.dim();

    match given {
        Given::X1 => {
            let slots = j
                .s1
                .points()
                .map(|w1| {
                    if t.f1[w1].is_zero() {
                        return None;
                    }
                    let mut acc = vecops::zero_vec(dim);
                    for x in j.x_space().points() {
                        let c: Rat = charged
                            .iter()
                            .map(|&k| &t.g3[x][k] * &t.f13[w1][k] / (&t.f3[k] * &t.f1[w1]))
                            .sum();
                        vecops::add_scaled(&mut acc, j.x_embedding.value(x), &c);
                    }
                    Some(acc)
                })
                .collect();
            PartialVectorFunction::new(j.s1.clone(), dim, slots)
        }
        Given::X1AndX2 => {
            let out_space = j.s1.product(&j.s2);
            let mut slots = vec![None; out_space.len()];
            for w1 in j.s1.points() {
                for w2 in j.s2.points() {
                    if (&t.f1[w1] * &t.f2[w2]).is_zero() {
                        continue;
                    }
                    let den: Rat = charged
                        .iter()
                        .map(|&k| &t.f13[w1][k] * &t.f23[w2][k] / &t.f3[k])
                        .sum();
                    let value = if den.is_zero() {
                        // Every summand of the displayed integrand carries
                        // the factor f13*f23, which vanishes at all charged
                        // third points here.
                        vecops::zero_vec(dim)
                    } else {
                        let mut num = vecops::zero_vec(dim);
                        for &k in &charged {
                            let w = &t.f13[w1][k] * &t.f23[w2][k] / &t.f3[k];
                            if w.is_zero() {
                                continue;
                            }
                            vecops::add_scaled(&mut num, &t.mean_given_third(j, k), &w);
                        }
                        vecops::div_by(&num, &den)
                    };
                    slots[pair_index(j.s2.len(), w1, w2)] = Some(value);
                }
            }
            PartialVectorFunction::new(out_space, dim, slots)
        }
    }
}

/// Builds the kernel-route model for cross-validation: the third
/// coordinate's law and the three conditional kernels given it. Rows at
/// uncharged third points are filled uniformly; they carry no mass and
/// influence nothing.
pub fn kernel_model(j: &JointPmf) -> Result<InducedKernels> {
    let t = Tables::build(j);
    let q = Distribution::new(j.s3.clone(), t.f3.clone())?;

    let build = |table: &dyn Fn(usize, usize) -> Rat, target: &FiniteSpace| -> Result<MarkovKernel> {
        let rows = j
            .s3
            .points()
            .map(|k| {
                if t.f3[k].is_zero() {
                    Distribution::uniform(target.clone())
                } else {
                    let mass = target.points().map(|p| table(p, k) / &t.f3[k]).collect();
                    Distribution::new(target.clone(), mass).expect("columns sum to f3")
                }
            })
            .collect();
        MarkovKernel::from_distributions(j.s3.clone(), rows)
    };

    let m = build(&|x, k| t.g3[x][k].clone(), j.x_space())?;
    let m1 = build(&|p, k| t.f13[p][k].clone(), &j.s1)?;
    let m2 = build(&|p, k| t.f23[p][k].clone(), &j.s2)?;
    Ok(InducedKernels { q, m, m1, m2, e: j.x_embedding.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    /// Joint law of four independent fair coins.
    fn uniform_joint() -> JointPmf {
        let b = FiniteSpace::binary;
        JointPmf::new(
            Embedding::point_index(b()),
            b(),
            b(),
            b(),
            vec![rat(1, 16); 16],
        )
        .unwrap()
    }

    #[test]
    fn full_axis_marginal_is_the_pmf_itself() {
        let j = uniform_joint();
        let m = j
            .marginal(&[Axis::X, Axis::X1, Axis::X2, Axis::X3])
            .unwrap();
        assert_eq!(m.values(), &vec![rat(1, 16); 16][..]);
        assert_eq!(m.value(&[1, 0, 1, 0]), j.mass(1, 0, 1, 0));
    }

    #[test]
    fn uniform_joint_has_uniform_single_marginals() {
        let j = uniform_joint();
        for axis in [Axis::X, Axis::X1, Axis::X2, Axis::X3] {
            let m = j.marginal(&[axis]).unwrap();
            assert_eq!(m.values(), &[rat(1, 2), rat(1, 2)][..]);
        }
    }

    #[test]
    fn marginal_rejects_empty_and_repeated_axes() {
        let j = uniform_joint();
        assert!(j.marginal(&[]).is_err());
        assert!(j.marginal(&[Axis::X1, Axis::X1]).is_err());
    }

    /// X1 = X3 deterministically, X and X2 fair and independent.
    fn copied_first_coordinate() -> JointPmf {
        let b = FiniteSpace::binary;
        let mut records = Vec::new();
        for x in 0..2 {
            for w2 in 0..2 {
                for w3 in 0..2 {
                    records.push((x, w3, w2, w3, rat(1, 8)));
                }
            }
        }
        JointPmf::from_sparse(Embedding::point_index(b()), b(), b(), b(), &records).unwrap()
    }

    #[test]
    fn conditional_density_of_a_copied_variable_is_deterministic() {
        let j = copied_first_coordinate();
        for k in 0..2 {
            for i in 0..2 {
                let phi = conditional_density(&j, PhiVariable::X1, k, i).unwrap();
                assert_eq!(phi, if i == k { rat(1, 1) } else { rat(0, 1) });
            }
        }
    }

    #[test]
    fn conditional_density_collapses_under_independence() {
        let j = uniform_joint();
        let f1 = j.marginal(&[Axis::X1]).unwrap();
        for k in 0..2 {
            for i in 0..2 {
                assert_eq!(
                    conditional_density(&j, PhiVariable::X1, k, i).unwrap(),
                    f1.values()[i]
                );
            }
        }
    }

    #[test]
    fn conditional_density_normalizes_on_charged_points() {
        let j = copied_first_coordinate();
        for k in 0..2 {
            for var in [PhiVariable::X, PhiVariable::X1, PhiVariable::X2] {
                let total: Rat = (0..2)
                    .map(|p| conditional_density(&j, var, k, p).unwrap())
                    .sum();
                assert_eq!(total, rat(1, 1));
            }
        }
    }

    #[test]
    fn masked_third_point_is_an_error() {
        // All mass on w3 = 0.
        let b = FiniteSpace::binary;
        let j = JointPmf::from_sparse(
            Embedding::point_index(b()),
            b(),
            b(),
            b(),
            &[(0, 0, 0, 0, rat(1, 2)), (1, 1, 1, 0, rat(1, 2))],
        )
        .unwrap();
        assert!(matches!(
            conditional_density(&j, PhiVariable::X, 1, 0),
            Err(Error::MaskedPoint(_))
        ));
        assert!(matches!(
            product_conditional_density(&j, 1, 0, 0),
            Err(Error::MaskedPoint(_))
        ));
    }

    #[test]
    fn product_density_factorizes_when_third_is_irrelevant() {
        let j = uniform_joint();
        for k in 0..2 {
            for x in 0..2 {
                for w1 in 0..2 {
                    assert_eq!(
                        product_conditional_density(&j, k, x, w1).unwrap(),
                        rat(1, 4)
                    );
                }
            }
        }
    }

    #[test]
    fn constant_second_coordinate_is_independent() {
        let b = FiniteSpace::binary;
        let mut records = Vec::new();
        for x in 0..2 {
            for w1 in 0..2 {
                for w3 in 0..2 {
                    // w2 pinned to 0; some dependence between x, w1, w3
                    let m = if x == w3 { rat(3, 16) } else { rat(1, 16) };
                    records.push((x, w1, 0, w3, m));
                }
            }
        }
        let j = JointPmf::from_sparse(Embedding::point_index(b()), b(), b(), b(), &records)
            .unwrap();
        assert!(independence_via_densities(&j).unwrap());
    }

    #[test]
    fn conditional_expectation_collapses_when_value_ignores_third() {
        // X independent of X3; E(M|M1) must be E(X) at every charged point.
        let j = uniform_joint();
        let ce = conditional_expectation_via_densities(&j, Given::X1).unwrap();
        for w1 in 0..2 {
            assert_eq!(ce.value(w1).unwrap(), &[rat(1, 2)]);
        }
    }

    #[test]
    fn pair_mask_uses_the_marginal_product() {
        // X1 = X2 = X3: pair points off the diagonal have positive marginal
        // product but zero induced pair mass; they stay masked-in with value
        // zero, and diagonal points carry the real conditional mean.
        let b = FiniteSpace::binary;
        let mut records = Vec::new();
        for x in 0..2 {
            for k in 0..2 {
                let m = if x == k { rat(3, 8) } else { rat(1, 8) };
                records.push((x, k, k, k, m));
            }
        }
        let j = JointPmf::from_sparse(Embedding::point_index(b()), b(), b(), b(), &records)
            .unwrap();
        let ce = conditional_expectation_via_densities(&j, Given::X1AndX2).unwrap();
        // diagonal (0,0): mean of X given X3=0 is 1/4; (1,1): 3/4
        assert_eq!(ce.value(pair_index(2, 0, 0)).unwrap(), &[rat(1, 4)]);
        assert_eq!(ce.value(pair_index(2, 1, 1)).unwrap(), &[rat(3, 4)]);
        // off-diagonal: defined (marginals positive), value zero
        assert_eq!(ce.value(pair_index(2, 0, 1)).unwrap(), &[rat(0, 1)]);
        assert_eq!(ce.value(pair_index(2, 1, 0)).unwrap(), &[rat(0, 1)]);
    }
}
