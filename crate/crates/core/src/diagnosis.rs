//! The clinical-diagnosis application: 2x8 contingency tables of population
//! counts over four binary variables (two diagnostic tests, a reference
//! disease, and a second disease of interest), the kernels they induce,
//! standard diagnostic-test metrics, closed-form conditional expectations,
//! and the classification of tables by (independence, equality).

use std::fmt;

use crate::calculus::{independence_equality_report, Category};
use crate::dist::Distribution;
use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::kernel::MarkovKernel;
use crate::rational::{rat_u, Rat};
use crate::space::FiniteSpace;

/// Population counts `n[ijkl]` for the four binary variables, stored as the
/// printed table layout: two rows (top `l = 0`, bottom `l = 1`) of eight
/// columns ordered by `(i, j, k)` = 000, 001, 010, 011, 100, 101, 110, 111.
///
/// `i` indexes the first test, `j` the second test, `k` the reference
/// disease, `l` the disease of interest. Both `k`-margins must be positive,
/// otherwise the induced kernels have an undefined row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioTable {
    counts: [[u64; 8]; 2],
}

impl ScenarioTable {
    pub fn new(counts: [[u64; 8]; 2]) -> Result<Self> {
        let t = Self { counts };
        for k in 0..2u8 {
            let pattern = MarginPattern::new([Slot::Any, Slot::Any, Slot::Fixed(k), Slot::Any]);
            if t.margin_of(&pattern) == 0 {
                return Err(Error::InvalidTable(format!(
                    "margin n_{pattern} is zero; every reference-disease level needs individuals"
                )));
            }
        }
        Ok(t)
    }

    /// Cell count; each index is 0 or 1.
    pub fn count(&self, i: usize, j: usize, k: usize, l: usize) -> u64 {
        debug_assert!(i < 2 && j < 2 && k < 2 && l < 2);
        self.counts[l][i * 4 + j * 2 + k]
    }

    /// Total population size.
    pub fn n(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn grid(&self) -> [[u64; 8]; 2] {
        self.counts
    }

    /// Sum of counts matched by a pattern such as `+0+1`.
    pub fn margin_of(&self, pattern: &MarginPattern) -> u64 {
        let mut total = 0;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        if pattern.matches([i, j, k, l]) {
                            total += self.count(i, j, k, l);
                        }
                    }
                }
            }
        }
        total
    }

    /// Margin by pattern string, e.g. `t.margin("++0+")`.
    pub fn margin(&self, pattern: &str) -> Result<u64> {
        Ok(self.margin_of(&pattern.parse()?))
    }
}

/// Two lines of eight counts: the text interchange format.
impl fmt::Display for ScenarioTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, row) in self.counts.iter().enumerate() {
            if idx > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// One slot of a margin pattern: a fixed binary digit or `+` for "any".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Fixed(u8),
    Any,
}

/// Four-slot selector over `(i, j, k, l)`, written like `+0+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MarginPattern {
    slots: [Slot; 4],
}

impl MarginPattern {
    pub fn new(slots: [Slot; 4]) -> Self {
        Self { slots }
    }

    pub fn matches(&self, idx: [usize; 4]) -> bool {
        self.slots
            .iter()
            .zip(idx)
            .all(|(s, v)| match s {
                Slot::Any => true,
                Slot::Fixed(d) => *d as usize == v,
            })
    }
}

impl std::str::FromStr for MarginPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 4 {
            return Err(Error::InvalidTable(format!(
                "margin pattern `{s}` must have exactly four slots"
            )));
        }
        let mut slots = [Slot::Any; 4];
        for (i, c) in chars.into_iter().enumerate() {
            slots[i] = match c {
                '+' => Slot::Any,
                '0' => Slot::Fixed(0),
                '1' => Slot::Fixed(1),
                other => {
                    return Err(Error::InvalidTable(format!(
                        "margin pattern slot `{other}` is not 0, 1 or +"
                    )))
                }
            };
        }
        Ok(Self { slots })
    }
}

impl fmt::Display for MarginPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.slots {
            match s {
                Slot::Any => write!(f, "+")?,
                Slot::Fixed(d) => write!(f, "{d}")?,
            }
        }
        Ok(())
    }
}

/// The kernel-route model a table induces: the reference disease's law and
/// the three conditional kernels given it, plus the 0/1 embedding of the
/// disease of interest.
#[derive(Clone, Debug)]
pub struct InducedModel {
    pub q: Distribution,
    pub m: MarkovKernel,
    pub m1: MarkovKernel,
    pub m2: MarkovKernel,
    pub e: Embedding,
}

/// Conditional kernels from the reference disease. The first test's kernel
/// row at level `k` is the conditional frequency `n[i+k+]/n[++k+]`; likewise
/// for the second test (`j` margin) and the disease of interest (`l`
/// margin).
pub fn induced_model(t: &ScenarioTable) -> InducedModel {
    let b = FiniteSpace::binary();
    let n = t.n();
    let nk = |k: usize| t.margin_of(&MarginPattern::new([Slot::Any, Slot::Any, Slot::Fixed(k as u8), Slot::Any]));

    let q = Distribution::new(b.clone(), vec![rat_u(nk(0), n), rat_u(nk(1), n)])
        .expect("margins sum to n");

    let kernel = |cell: &dyn Fn(usize, usize) -> u64| -> MarkovKernel {
        let rows = (0..2)
            .map(|k| (0..2).map(|v| rat_u(cell(k, v), nk(k))).collect())
            .collect();
        MarkovKernel::from_rows(b.clone(), b.clone(), rows).expect("conditional frequencies")
    };

    let m1 = kernel(&|k, i| {
        t.margin_of(&MarginPattern::new([Slot::Fixed(i as u8), Slot::Any, Slot::Fixed(k as u8), Slot::Any]))
    });
    let m2 = kernel(&|k, j| {
        t.margin_of(&MarginPattern::new([Slot::Any, Slot::Fixed(j as u8), Slot::Fixed(k as u8), Slot::Any]))
    });
    let m = kernel(&|k, l| {
        t.margin_of(&MarginPattern::new([Slot::Any, Slot::Any, Slot::Fixed(k as u8), Slot::Fixed(l as u8)]))
    });

    InducedModel { q, m, m1, m2, e: Embedding::point_index(b) }
}

/// Standard diagnostic-test quantities of a table, all exact. Predictive
/// values are masked when their denominator margin is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagnosticMetrics {
    /// Prevalence of the reference disease.
    pub prevalence: Rat,
    /// P(test1 = 1 | disease = 1).
    pub sensitivity_1: Rat,
    /// P(test2 = 1 | disease = 1).
    pub sensitivity_2: Rat,
    /// P(test1 = 0 | disease = 0).
    pub specificity_1: Rat,
    /// P(test2 = 0 | disease = 0).
    pub specificity_2: Rat,
    /// Prevalence of the disease of interest.
    pub prevalence_of_interest: Rat,
    /// P(disease = 1 | test1 = 1); masked when nobody tests positive.
    pub ppv_1: Option<Rat>,
    /// P(disease = 0 | test1 = 0); masked when nobody tests negative.
    pub npv_1: Option<Rat>,
    /// P(interest = 1 | disease = 1).
    pub p_interest_given_disease: Rat,
    /// P(interest = 1 | disease = 0).
    pub p_interest_given_no_disease: Rat,
}

pub fn metrics(t: &ScenarioTable) -> DiagnosticMetrics {
    let mg = |p: &str| t.margin(p).expect("fixed pattern");
    let n = t.n();
    let frac = |num: u64, den: u64| rat_u(num, den);

    let n_k0 = mg("++0+");
    let n_k1 = mg("++1+");
    let n_i1 = mg("1+++");
    let n_i0 = mg("0+++");

    DiagnosticMetrics {
        prevalence: frac(n_k1, n),
        sensitivity_1: frac(mg("1+1+"), n_k1),
        sensitivity_2: frac(mg("+11+"), n_k1),
        specificity_1: frac(mg("0+0+"), n_k0),
        specificity_2: frac(mg("+00+"), n_k0),
        prevalence_of_interest: frac(mg("+++1"), n),
        ppv_1: (n_i1 > 0).then(|| frac(mg("1+1+"), n_i1)),
        npv_1: (n_i0 > 0).then(|| frac(mg("0+0+"), n_i0)),
        p_interest_given_disease: frac(mg("++11"), n_k1),
        p_interest_given_no_disease: frac(mg("++01"), n_k0),
    }
}

/// The count-level independence criterion: for every `(i, j, l)`,
///
/// `sum_k n[+jk+] n[++kl] n[i+k+] / n[++k+]^2
///     = (n[+j++]/n[++++]) * sum_k n[++kl] n[i+k+] / n[++k+]`,
///
/// exactly. A third route to the same independence answer, straight from the
/// counts.
pub fn independence_by_counts(t: &ScenarioTable) -> bool {
    let nk = |k: usize| t.margin_of(&MarginPattern::new([Slot::Any, Slot::Any, Slot::Fixed(k as u8), Slot::Any]));
    let nik = |i: usize, k: usize| {
        t.margin_of(&MarginPattern::new([Slot::Fixed(i as u8), Slot::Any, Slot::Fixed(k as u8), Slot::Any]))
    };
    let njk = |j: usize, k: usize| {
        t.margin_of(&MarginPattern::new([Slot::Any, Slot::Fixed(j as u8), Slot::Fixed(k as u8), Slot::Any]))
    };
    let nkl = |k: usize, l: usize| {
        t.margin_of(&MarginPattern::new([Slot::Any, Slot::Any, Slot::Fixed(k as u8), Slot::Fixed(l as u8)]))
    };
    let nj = |j: usize| t.margin_of(&MarginPattern::new([Slot::Any, Slot::Fixed(j as u8), Slot::Any, Slot::Any]));
    let n = t.n();

    for i in 0..2 {
        for j in 0..2 {
            for l in 0..2 {
                let lhs: Rat = (0..2)
                    .map(|k| {
                        rat_u(njk(j, k) * nkl(k, l) * nik(i, k), nk(k) * nk(k))
                    })
                    .sum();
                let mix: Rat = (0..2).map(|k| rat_u(nkl(k, l) * nik(i, k), nk(k))).sum();
                if lhs != rat_u(nj(j), n) * mix {
                    return false;
                }
            }
        }
    }
    true
}

/// Closed-form conditional expectations straight from the count margins.
/// Entries are masked exactly where the corresponding image law has no mass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormConditionals {
    /// E(interest | test1 = i), masked when `n[i+++] = 0`.
    pub given_first: [Option<Rat>; 2],
    /// E(interest | test1 = i, test2 = j), masked when the closed form's
    /// denominator vanishes.
    pub given_pair: [[Option<Rat>; 2]; 2],
}

/// The count formulas:
///
/// `E(interest | test1 = i) = (n[++01]/n[++0+]) (n[i+0+]/n[i+++])
///                          + (n[++11]/n[++1+]) (n[i+1+]/n[i+++])`
///
/// and
///
/// `E(interest | test1 = i, test2 = j) =
///    [n[i+0+] n[+j0+] n[++1+] (n[++01]/n[++0+])
///     + n[i+1+] n[+j1+] n[++0+] (n[++11]/n[++1+])]
///  / [n[i+0+] n[+j0+] n[++1+] + n[i+1+] n[+j1+] n[++0+]]`.
pub fn conditional_expectation_closed_forms(t: &ScenarioTable) -> ClosedFormConditionals {
    let nk = |k: usize| t.margin_of(&MarginPattern::new([Slot::Any, Slot::Any, Slot::Fixed(k as u8), Slot::Any]));
    let nik = |i: usize, k: usize| {
        t.margin_of(&MarginPattern::new([Slot::Fixed(i as u8), Slot::Any, Slot::Fixed(k as u8), Slot::Any]))
    };
    let njk = |j: usize, k: usize| {
        t.margin_of(&MarginPattern::new([Slot::Any, Slot::Fixed(j as u8), Slot::Fixed(k as u8), Slot::Any]))
    };
    let nk1 = |k: usize| {
        t.margin_of(&MarginPattern::new([Slot::Any, Slot::Any, Slot::Fixed(k as u8), Slot::Fixed(1)]))
    };
    let ni = |i: usize| t.margin_of(&MarginPattern::new([Slot::Fixed(i as u8), Slot::Any, Slot::Any, Slot::Any]));

    let given_first = [0, 1].map(|i| {
        (ni(i) > 0).then(|| {
            rat_u(nk1(0), nk(0)) * rat_u(nik(i, 0), ni(i))
                + rat_u(nk1(1), nk(1)) * rat_u(nik(i, 1), ni(i))
        })
    });

    let given_pair = [0, 1].map(|i| {
        [0, 1].map(|j| {
            let w0 = nik(i, 0) * njk(j, 0) * nk(1);
            let w1 = nik(i, 1) * njk(j, 1) * nk(0);
            (w0 + w1 > 0).then(|| {
                let num = rat_u(w0, 1) * rat_u(nk1(0), nk(0)) + rat_u(w1, 1) * rat_u(nk1(1), nk(1));
                num / rat_u(w0 + w1, 1)
            })
        })
    });

    ClosedFormConditionals { given_first, given_pair }
}

/// The predictive-value decomposition
/// `E(interest | test1 = 1) = PPV1 * P(D|D3) + (1 - PPV1) * P(D|D3^c)`,
/// checked exactly; `None` when nobody tests positive on the first test.
pub fn ppv_decomposition_check(t: &ScenarioTable) -> Option<bool> {
    let m = metrics(t);
    let ppv1 = m.ppv_1?;
    let lhs = conditional_expectation_closed_forms(t).given_first[1]
        .clone()
        .expect("positive first-test margin");
    let one = Rat::from_integer(1.into());
    let rhs = &ppv1 * &m.p_interest_given_disease
        + (one - ppv1) * &m.p_interest_given_no_disease;
    Some(lhs == rhs)
}

/// Classification of a table by the kernel-route report. The category
/// `independence_without_equality` cannot occur for correct arithmetic;
/// callers treat observing it as an internal-consistency failure.
pub fn classify(t: &ScenarioTable) -> Category {
    let model = induced_model(t);
    let report = independence_equality_report(&model.q, &model.m, &model.e, &model.m1, &model.m2)
        .expect("induced model spaces line up");
    Category::from_report(report)
}

/// The three built-in example tables, named by the classification each one
/// exhibits. Together they show that both properties can hold, both can
/// fail, and equality can hold without independence — and that the fourth
/// combination never shows up.
pub mod builtin {
    use super::{Category, ScenarioTable};

    pub const BOTH_HOLD_GRID: [[u64; 8]; 2] =
        [[1, 1, 2, 2, 3, 3, 4, 4], [3, 4, 4, 3, 1, 2, 2, 1]];
    pub const BOTH_FAIL_GRID: [[u64; 8]; 2] =
        [[1, 1, 2, 2, 3, 3, 4, 4], [1, 2, 1, 2, 3, 3, 4, 4]];
    pub const EQUALITY_WITHOUT_INDEPENDENCE_GRID: [[u64; 8]; 2] =
        [[1, 1, 2, 2, 3, 3, 4, 4], [3, 4, 4, 1, 1, 2, 2, 3]];

    /// `(name, table, expected category)` for all three examples.
    pub fn examples() -> [(&'static str, ScenarioTable, Category); 3] {
        let t = |g| ScenarioTable::new(g).expect("built-in grids are valid");
        [
            ("example-1", t(BOTH_HOLD_GRID), Category::BothHold),
            ("example-2", t(BOTH_FAIL_GRID), Category::BothFail),
            (
                "example-3",
                t(EQUALITY_WITHOUT_INDEPENDENCE_GRID),
                Category::EqualityWithoutIndependence,
            ),
        ]
    }
}
