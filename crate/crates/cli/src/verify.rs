//! Re-checks the built-in example tables against their expected
//! classifications, with the exact conditional expectations printed for
//! audit. The check logic is parameterized over the entry list so the
//! negative-control tests can feed it corrupted tables.

use serde::Serialize;

use mkcalc_core::calculus::Category;
use mkcalc_core::diagnosis::{builtin, ScenarioTable};
use mkcalc_core::error::Result;

use crate::report::{build_analysis_report, PointValue};

#[derive(Clone, Debug, Serialize)]
pub struct VerifyEntry {
    pub name: String,
    pub table_text: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
    pub e_m_given_m1: Vec<PointValue>,
    pub e_m_given_m1m2: Vec<PointValue>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub entries: Vec<VerifyEntry>,
    pub pass: bool,
}

pub fn verify_entries(entries: &[(&str, ScenarioTable, Category)]) -> Result<VerifyReport> {
    let mut out = Vec::with_capacity(entries.len());
    for (name, table, expected) in entries {
        let report = build_analysis_report(table)?;
        let observed = report.category.clone();
        out.push(VerifyEntry {
            name: name.to_string(),
            table_text: report.table_text,
            expected: expected.name().to_string(),
            observed: observed.clone(),
            pass: observed == expected.name(),
            e_m_given_m1: report.e_m_given_m1,
            e_m_given_m1m2: report.e_m_given_m1m2,
        });
    }
    let pass = out.iter().all(|e| e.pass);
    Ok(VerifyReport { entries: out, pass })
}

pub fn verify_builtin() -> Result<VerifyReport> {
    let examples = builtin::examples();
    verify_entries(&examples.iter().map(|(n, t, c)| (*n, t.clone(), *c)).collect::<Vec<_>>())
}

pub fn render_text(r: &VerifyReport) -> String {
    let mut out = String::new();
    for e in &r.entries {
        let verdict = if e.pass { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "{}: expected {}, observed {} .. {verdict}\n",
            e.name, e.expected, e.observed
        ));
        let fmt_value = |pv: &PointValue| match &pv.value {
            Some(v) => format!("{} (~{})", v.exact, v.approx),
            None => "masked".to_string(),
        };
        for pv in &e.e_m_given_m1 {
            out.push_str(&format!("  E(m | m1 = {}) = {}\n", pv.point, fmt_value(pv)));
        }
        for pv in &e.e_m_given_m1m2 {
            out.push_str(&format!("  E(m | (m1,m2) = {}) = {}\n", pv.point, fmt_value(pv)));
        }
    }
    out.push_str(if r.pass {
        "verification passed: all built-in tables classify as expected\n"
    } else {
        "verification FAILED\n"
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_tables_verify() {
        let r = verify_builtin().unwrap();
        assert!(r.pass);
        assert_eq!(r.entries.len(), 3);
    }

    #[test]
    fn corrupted_second_example_fails_by_name() {
        // Mutate one cell of the second example; its classification moves.
        let mut grid = builtin::BOTH_FAIL_GRID;
        grid[1] = builtin::BOTH_HOLD_GRID[1];
        let corrupted = ScenarioTable::new(grid).unwrap();
        let entries = vec![
            ("example-1", ScenarioTable::new(builtin::BOTH_HOLD_GRID).unwrap(), Category::BothHold),
            ("example-2", corrupted, Category::BothFail),
        ];
        let r = verify_entries(&entries).unwrap();
        assert!(!r.pass);
        let failed: Vec<_> = r.entries.iter().filter(|e| !e.pass).collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].name, "example-2");
        let text = render_text(&r);
        assert!(text.contains("example-2: expected both_fail, observed both_hold .. FAIL"));
    }
}
