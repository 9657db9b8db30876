//! Seeded random generation of distributions, kernels, embeddings, joint
//! laws and scenario tables, plus the category search built on them.
//!
//! The stream is ChaCha8 (`rand_chacha`), a portable, documented, seedable
//! generator pinned by the lockfile: the same seed and configuration produce
//! the same byte sequence on every platform, which keeps golden files and
//! search transcripts stable. Generated values go through the same
//! validating constructors as parsed input.

use num_traits::Zero;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::calculus::Category;
use crate::density::JointPmf;
use crate::diagnosis::{classify, ScenarioTable};
use crate::dist::Distribution;
use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::kernel::MarkovKernel;
use crate::rational::{Rat, rat_u};
use crate::space::FiniteSpace;

/// Bounds for one generation stream. Identical configs with identical seeds
/// generate identical sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    /// Upper bound on every denominator of a generated probability, after
    /// reduction.
    pub max_denominator: u64,
    /// Upper bound on each table cell count.
    pub max_count: u64,
    /// Inclusive range of generated space sizes.
    pub space_size_range: (usize, usize),
    /// Inclusive range of generated embedding dimensions.
    pub dim_range: (usize, usize),
}

impl GenConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            max_denominator: 16,
            max_count: 6,
            space_size_range: (2, 4),
            dim_range: (1, 2),
        }
    }
}

impl Default for GenConfig {
    fn default() -> Self {
        Self::with_seed(0)
    }
}

/// A single generation stream.
#[derive(Clone, Debug)]
pub struct Generator {
    cfg: GenConfig,
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(cfg: GenConfig) -> Self {
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Self { cfg, rng }
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    /// Space size drawn from the configured range.
    pub fn space_size(&mut self) -> usize {
        let (lo, hi) = self.cfg.space_size_range;
        self.rng.gen_range(lo..=hi)
    }

    /// A fresh space with `n` numbered points.
    pub fn space(&mut self, n: usize) -> FiniteSpace {
        FiniteSpace::numbered(n).expect("positive size")
    }

    /// Exact random distribution: a common denominator `d` is drawn up to
    /// the configured bound, then split into one non-negative numerator per
    /// point by sorting uniform cut points. Masses sum to one by
    /// construction and every reduced denominator divides `d`.
    pub fn distribution(&mut self, space: &FiniteSpace) -> Distribution {
        let n = space.len();
        let d = self.rng.gen_range(1..=self.cfg.max_denominator);
        let mut cuts: Vec<u64> = (0..n - 1).map(|_| self.rng.gen_range(0..=d)).collect();
        cuts.sort_unstable();
        cuts.push(d);
        let mut prev = 0;
        let mut mass = Vec::with_capacity(n);
        for c in cuts {
            mass.push(rat_u(c - prev, d));
            prev = c;
        }
        Distribution::new(space.clone(), mass).expect("cuts of d sum to d")
    }

    /// Random kernel: one generated distribution per source point.
    pub fn kernel(&mut self, source: &FiniteSpace, target: &FiniteSpace) -> MarkovKernel {
        let rows = source.points().map(|_| self.distribution(target)).collect();
        MarkovKernel::from_distributions(source.clone(), rows).expect("rows share the target")
    }

    /// Random embedding with dimension from the configured range and signed
    /// rational coordinates.
    pub fn embedding(&mut self, space: &FiniteSpace) -> Embedding {
        let (lo, hi) = self.cfg.dim_range;
        let dim = self.rng.gen_range(lo..=hi);
        let bound = self.cfg.max_denominator as i64;
        let values = space
            .points()
            .map(|_| {
                (0..dim)
                    .map(|_| {
                        let num = self.rng.gen_range(-bound..=bound);
                        let den = self.rng.gen_range(1..=bound);
                        Rat::new(num.into(), den.into())
                    })
                    .collect()
            })
            .collect();
        Embedding::new(space.clone(), dim, values).expect("matching dims")
    }

    /// Random scenario table with cells up to `max_count`. Draws with an
    /// empty reference-disease margin are rejected and redrawn, up to a
    /// fixed retry cap.
    pub fn table(&mut self) -> Result<ScenarioTable> {
        const RETRY_CAP: u64 = 10_000;
        for _ in 0..RETRY_CAP {
            let mut grid = [[0u64; 8]; 2];
            for row in &mut grid {
                for cell in row.iter_mut() {
                    *cell = self.rng.gen_range(0..=self.cfg.max_count);
                }
            }
            if let Ok(t) = ScenarioTable::new(grid) {
                return Ok(t);
            }
        }
        Err(Error::GeneratorExhausted {
            attempts: RETRY_CAP,
            reason: "every draw had an empty reference-disease margin".into(),
        })
    }

    /// Random joint law over four generated spaces, with an embedding on the
    /// value coordinate. Sparse corners (zero masses) are common on purpose.
    pub fn joint_pmf(&mut self) -> JointPmf {
        let x_space = {
            let n = self.space_size();
            self.space(n)
        };
        let e = self.embedding(&x_space);
        let s1 = {
            let n = self.space_size();
            self.space(n)
        };
        let s2 = {
            let n = self.space_size();
            self.space(n)
        };
        let s3 = {
            let n = self.space_size();
            self.space(n)
        };
        let total = x_space.len() * s1.len() * s2.len() * s3.len();
        let flat = self.distribution(&FiniteSpace::numbered(total).expect("positive"));
        JointPmf::new(e, s1, s2, s3, flat.masses().to_vec()).expect("unit total")
    }

    /// A random `(p, m, e, m1, m2)` quintuple on a common source.
    pub fn quintuple(&mut self) -> (Distribution, MarkovKernel, Embedding, MarkovKernel, MarkovKernel) {
        let src = {
            let n = self.space_size();
            self.space(n)
        };
        let tm = {
            let n = self.space_size();
            self.space(n)
        };
        let t1 = {
            let n = self.space_size();
            self.space(n)
        };
        let t2 = {
            let n = self.space_size();
            self.space(n)
        };
        let p = self.distribution(&src);
        let m = self.kernel(&src, &tm);
        let e = self.embedding(&tm);
        let m1 = self.kernel(&src, &t1);
        let m2 = self.kernel(&src, &t2);
        (p, m, e, m1, m2)
    }
}

/// Outcome of a category search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { table: ScenarioTable, attempts: u64 },
    Exhausted { attempts: u64 },
}

/// Draws random tables until one classifies as `target` or the budget runs
/// out. Deterministic in `(config, target, budget)`, including the attempt
/// count. If any draw ever lands in `independence_without_equality` — the
/// category ruled out by exact arithmetic — the search aborts with
/// [`Error::FalsifiedImplication`] regardless of the requested target; for
/// that target, exhaustion is the expected outcome.
pub fn search_category(cfg: &GenConfig, target: Category, budget: u64) -> Result<SearchOutcome> {
    let mut generator = Generator::new(*cfg);
    for attempt in 1..=budget {
        let table = generator.table()?;
        let category = classify(&table);
        if category == Category::IndependenceWithoutEquality {
            return Err(Error::FalsifiedImplication {
                attempt,
                table: table.to_string(),
            });
        }
        if category == target {
            return Ok(SearchOutcome::Found { table, attempts: attempt });
        }
    }
    Ok(SearchOutcome::Exhausted { attempts: budget })
}

/// Degenerate-denominator edge: with `max_denominator = 1` every generated
/// distribution is a point mass.
pub fn is_point_mass(d: &Distribution) -> bool {
    d.masses().iter().filter(|m| !m.is_zero()).count() == 1
}
