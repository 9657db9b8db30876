//! Structured and human-readable reports. Every rational appears twice:
//! losslessly as `numerator/denominator` and as a 12-significant-digit
//! decimal marked approximate. Field order is fixed by the struct
//! declarations, so serialized output is byte-deterministic.

use serde::Serialize;

use mkcalc_core::calculus::{
    conditional_expectation, diagonal_product, independence_equality_report,
    independence_via_functionals, Category,
};
use mkcalc_core::crosscheck::density_routes_agree;
use mkcalc_core::density::JointPmf;
use mkcalc_core::diagnosis::{
    conditional_expectation_closed_forms, independence_by_counts, induced_model, metrics,
    ppv_decomposition_check, DiagnosticMetrics, ScenarioTable,
};
use mkcalc_core::error::Result;
use mkcalc_core::rational::{approx_str, exact_str, Rat};
use mkcalc_core::space::pair_index;
use mkcalc_core::{Distribution, MarkovKernel};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RatRepr {
    pub exact: String,
    pub approx: String,
}

impl RatRepr {
    pub fn of(r: &Rat) -> Self {
        Self { exact: exact_str(r), approx: approx_str(r) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DistRepr {
    pub space: Vec<String>,
    pub mass: Vec<RatRepr>,
}

impl DistRepr {
    fn of(d: &Distribution) -> Self {
        Self {
            space: d.space().labels().to_vec(),
            mass: d.masses().iter().map(RatRepr::of).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelRepr {
    pub source: Vec<String>,
    pub target: Vec<String>,
    pub rows: Vec<Vec<RatRepr>>,
}

impl KernelRepr {
    fn of(k: &MarkovKernel) -> Self {
        Self {
            source: k.source().labels().to_vec(),
            target: k.target().labels().to_vec(),
            rows: k
                .source()
                .points()
                .map(|w| k.row(w).masses().iter().map(RatRepr::of).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricsRepr {
    pub prevalence: RatRepr,
    pub sensitivity_1: RatRepr,
    pub sensitivity_2: RatRepr,
    pub specificity_1: RatRepr,
    pub specificity_2: RatRepr,
    pub prevalence_of_interest: RatRepr,
    pub ppv_1: Option<RatRepr>,
    pub npv_1: Option<RatRepr>,
    pub p_interest_given_disease: RatRepr,
    pub p_interest_given_no_disease: RatRepr,
}

impl MetricsRepr {
    fn of(m: &DiagnosticMetrics) -> Self {
        Self {
            prevalence: RatRepr::of(&m.prevalence),
            sensitivity_1: RatRepr::of(&m.sensitivity_1),
            sensitivity_2: RatRepr::of(&m.sensitivity_2),
            specificity_1: RatRepr::of(&m.specificity_1),
            specificity_2: RatRepr::of(&m.specificity_2),
            prevalence_of_interest: RatRepr::of(&m.prevalence_of_interest),
            ppv_1: m.ppv_1.as_ref().map(RatRepr::of),
            npv_1: m.npv_1.as_ref().map(RatRepr::of),
            p_interest_given_disease: RatRepr::of(&m.p_interest_given_disease),
            p_interest_given_no_disease: RatRepr::of(&m.p_interest_given_no_disease),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelsRepr {
    pub q: DistRepr,
    pub m: KernelRepr,
    pub m1: KernelRepr,
    pub m2: KernelRepr,
}

/// One conditional-expectation value; `value: null` means the point is
/// masked (no mass under the conditioning image).
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PointValue {
    pub point: String,
    pub value: Option<RatRepr>,
}

/// Cross-route confirmations: each boolean says that an independent
/// computation path landed on exactly the same answer.
#[derive(Clone, Debug, Serialize)]
pub struct RouteChecks {
    pub counts_vs_kernel: bool,
    pub density_vs_kernel: bool,
    pub functionals_vs_definition: bool,
    pub ppv_decomposition: Option<bool>,
}

impl RouteChecks {
    pub fn all_pass(&self) -> bool {
        self.counts_vs_kernel
            && self.density_vs_kernel
            && self.functionals_vs_definition
            && self.ppv_decomposition.unwrap_or(true)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub table: [[u64; 8]; 2],
    pub table_text: String,
    pub n: u64,
    pub metrics: MetricsRepr,
    pub kernels: KernelsRepr,
    pub independent: bool,
    pub equal: bool,
    pub category: String,
    pub e_m_given_m1: Vec<PointValue>,
    pub e_m_given_m1m2: Vec<PointValue>,
    pub route_checks: RouteChecks,
}

pub fn build_analysis_report(t: &ScenarioTable) -> Result<AnalysisReport> {
    let model = induced_model(t);
    let report = independence_equality_report(&model.q, &model.m, &model.e, &model.m1, &model.m2)?;
    let category = Category::from_report(report);

    let ce_first = conditional_expectation(&model.q, &model.m, &model.e, &model.m1)?;
    let m1m2 = diagonal_product(&model.m1, &model.m2)?;
    let ce_pair = conditional_expectation(&model.q, &model.m, &model.e, &m1m2)?;

    let point_values = |ce: &mkcalc_core::PartialVectorFunction| -> Vec<PointValue> {
        ce.space()
            .points()
            .map(|i| PointValue {
                point: ce.space().label(i).to_string(),
                value: ce.value(i).map(|v| RatRepr::of(&v[0])),
            })
            .collect()
    };

    let cf = conditional_expectation_closed_forms(t);
    let counts_vs_kernel = {
        let independence_agrees = independence_by_counts(t) == report.independent;
        let mut conditionals_agree = true;
        for i in 0..2 {
            let kernel_value = ce_first.value(i).map(|v| v[0].clone());
            if cf.given_first[i] != kernel_value {
                conditionals_agree = false;
            }
            for j in 0..2 {
                let kernel_value = ce_pair.value(pair_index(2, i, j)).map(|v| v[0].clone());
                if cf.given_pair[i][j] != kernel_value {
                    conditionals_agree = false;
                }
            }
        }
        independence_agrees && conditionals_agree
    };

    let density_vs_kernel = density_routes_agree(&JointPmf::from_scenario_table(t))?;
    let functionals_vs_definition = independence_via_functionals(
        &model.q,
        &model.m,
        &model.m1,
        &model.m2,
        Default::default(),
    )? == report.independent;

    Ok(AnalysisReport {
        table: t.grid(),
        table_text: t.to_string(),
        n: t.n(),
        metrics: MetricsRepr::of(&metrics(t)),
        kernels: KernelsRepr {
            q: DistRepr::of(&model.q),
            m: KernelRepr::of(&model.m),
            m1: KernelRepr::of(&model.m1),
            m2: KernelRepr::of(&model.m2),
        },
        independent: report.independent,
        equal: report.equal,
        category: category.name().to_string(),
        e_m_given_m1: point_values(&ce_first),
        e_m_given_m1m2: point_values(&ce_pair),
        route_checks: RouteChecks {
            counts_vs_kernel,
            density_vs_kernel,
            functionals_vs_definition,
            ppv_decomposition: ppv_decomposition_check(t),
        },
    })
}

/// The classification an analysis report implies; used for exit codes.
pub fn report_category(r: &AnalysisReport) -> Category {
    Category::parse(&r.category).expect("report carries a valid category name")
}

fn fmt_rat(r: &RatRepr) -> String {
    format!("{} (~{})", r.exact, r.approx)
}

fn fmt_opt(r: &Option<RatRepr>) -> String {
    match r {
        Some(r) => fmt_rat(r),
        None => "masked".to_string(),
    }
}

pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let push = |out: &mut String, s: String| {
        out.push_str(&s);
        out.push('\n');
    };

    push(&mut out, format!("table (n = {}):", r.n));
    for line in r.table_text.lines() {
        push(&mut out, format!("  {line}"));
    }
    push(
        &mut out,
        format!(
            "category: {} (independent: {}, equal: {})",
            r.category, r.independent, r.equal
        ),
    );
    push(&mut out, "metrics:".to_string());
    let m = &r.metrics;
    push(&mut out, format!("  prevalence             = {}", fmt_rat(&m.prevalence)));
    push(&mut out, format!("  sensitivity_1          = {}", fmt_rat(&m.sensitivity_1)));
    push(&mut out, format!("  sensitivity_2          = {}", fmt_rat(&m.sensitivity_2)));
    push(&mut out, format!("  specificity_1          = {}", fmt_rat(&m.specificity_1)));
    push(&mut out, format!("  specificity_2          = {}", fmt_rat(&m.specificity_2)));
    push(&mut out, format!("  prevalence_of_interest = {}", fmt_rat(&m.prevalence_of_interest)));
    push(&mut out, format!("  ppv_1                  = {}", fmt_opt(&m.ppv_1)));
    push(&mut out, format!("  npv_1                  = {}", fmt_opt(&m.npv_1)));
    push(&mut out, format!("  p(interest | disease)  = {}", fmt_rat(&m.p_interest_given_disease)));
    push(&mut out, format!("  p(interest | healthy)  = {}", fmt_rat(&m.p_interest_given_no_disease)));

    push(&mut out, "kernels:".to_string());
    let dist_line = |d: &DistRepr| -> String {
        d.space
            .iter()
            .zip(&d.mass)
            .map(|(l, v)| format!("{l}: {}", v.exact))
            .collect::<Vec<_>>()
            .join(", ")
    };
    push(&mut out, format!("  q  = [{}]", dist_line(&r.kernels.q)));
    for (name, k) in [("m ", &r.kernels.m), ("m1", &r.kernels.m1), ("m2", &r.kernels.m2)] {
        let rows: Vec<String> = k
            .rows
            .iter()
            .map(|row| {
                let cells: Vec<String> = row.iter().map(|v| v.exact.clone()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        push(&mut out, format!("  {name} = {}", rows.join(" ")));
    }

    push(&mut out, "conditional expectations:".to_string());
    for pv in &r.e_m_given_m1 {
        push(&mut out, format!("  E(m | m1 = {}) = {}", pv.point, fmt_opt(&pv.value)));
    }
    for pv in &r.e_m_given_m1m2 {
        push(&mut out, format!("  E(m | (m1,m2) = {}) = {}", pv.point, fmt_opt(&pv.value)));
    }

    let c = &r.route_checks;
    push(&mut out, "route checks:".to_string());
    push(&mut out, format!("  counts formula vs kernel route   : {}", check_word(c.counts_vs_kernel)));
    push(&mut out, format!("  density route vs kernel route    : {}", check_word(c.density_vs_kernel)));
    push(&mut out, format!("  functional test vs definition    : {}", check_word(c.functionals_vs_definition)));
    let ppv = match c.ppv_decomposition {
        Some(ok) => check_word(ok).to_string(),
        None => "masked".to_string(),
    };
    push(&mut out, format!("  predictive-value decomposition   : {ppv}"));
    out
}

fn check_word(ok: bool) -> &'static str {
    if ok {
        "agree"
    } else {
        "DISAGREE"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mkcalc_core::diagnosis::builtin;

    #[test]
    fn first_example_report_is_consistent() {
        let (_, table, _) = &builtin::examples()[0];
        let r = build_analysis_report(table).unwrap();
        assert!(r.independent && r.equal);
        assert_eq!(r.category, "both_hold");
        assert!(r.route_checks.all_pass());
        assert_eq!(r.e_m_given_m1.len(), 2);
        assert_eq!(r.e_m_given_m1m2.len(), 4);
        let text = render_text(&r);
        assert!(text.contains("category: both_hold"));
    }

    #[test]
    fn all_examples_pass_route_checks() {
        for (name, table, expected) in builtin::examples() {
            let r = build_analysis_report(&table).unwrap();
            assert_eq!(r.category, expected.name(), "{name}");
            assert!(r.route_checks.all_pass(), "{name}");
        }
    }
}
