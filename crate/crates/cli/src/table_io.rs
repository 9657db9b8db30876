//! Text interchange format for scenario tables: sixteen whitespace-separated
//! non-negative integers, canonically two lines of eight (top line is the
//! "interest = 0" row), but any whitespace layout with exactly sixteen
//! values parses, including a single flat line.

use std::fmt;

use mkcalc_core::diagnosis::ScenarioTable;
use mkcalc_core::error::Error as CoreError;

#[derive(Debug)]
pub enum TableError {
    /// Token-level problem, with 1-based line and column.
    Parse { line: usize, col: usize, message: String },
    /// Wrong number of values.
    Count { got: usize },
    /// Structural rejection from the table validator.
    Validation(CoreError),
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::Parse { line, col, message } => {
                write!(f, "parse error at line {line}, column {col}: {message}")
            }
            TableError::Count { got } => {
                write!(f, "parse error: expected 16 cell counts, found {got}")
            }
            TableError::Validation(e) => write!(f, "{e}"),
        }
    }
}

impl TableError {
    pub fn is_parse(&self) -> bool {
        matches!(self, TableError::Parse { .. } | TableError::Count { .. })
    }
}

pub fn parse_table_text(input: &str) -> Result<ScenarioTable, TableError> {
    let mut cells = Vec::with_capacity(16);
    for (line_idx, line) in input.lines().enumerate() {
        let mut col = 0;
        for token in line.split_whitespace() {
            // Column of this occurrence, robust to repeated tokens.
            col = line[col..]
                .find(token)
                .map(|off| col + off)
                .unwrap_or(col);
            let position = (line_idx + 1, col + 1);
            col += token.len();

            let value: u64 = token.parse().map_err(|_| {
                let message = if token.starts_with('-') && token[1..].parse::<u64>().is_ok() {
                    format!("negative count `{token}` not allowed")
                } else {
                    format!("`{token}` is not a non-negative integer")
                };
                TableError::Parse { line: position.0, col: position.1, message }
            })?;
            if cells.len() == 16 {
                return Err(TableError::Parse {
                    line: position.0,
                    col: position.1,
                    message: "more than 16 cell counts".into(),
                });
            }
            cells.push(value);
        }
    }
    if cells.len() != 16 {
        return Err(TableError::Count { got: cells.len() });
    }
    let mut grid = [[0u64; 8]; 2];
    for (i, c) in cells.into_iter().enumerate() {
        grid[i / 8][i % 8] = c;
    }
    ScenarioTable::new(grid).map_err(TableError::Validation)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_two_lines_parse() {
        let t = parse_table_text("1 1 2 2 3 3 4 4\n3 4 4 3 1 2 2 1\n").unwrap();
        assert_eq!(t.count(0, 0, 0, 0), 1);
        assert_eq!(t.count(0, 0, 0, 1), 3);
        assert_eq!(t.n(), 40);
    }

    #[test]
    fn flat_sixteen_values_parse() {
        let flat = "1 1 2 2 3 3 4 4 3 4 4 3 1 2 2 1";
        let two_lines = "1 1 2 2 3 3 4 4\n3 4 4 3 1 2 2 1";
        assert_eq!(
            parse_table_text(flat).unwrap(),
            parse_table_text(two_lines).unwrap()
        );
    }

    #[test]
    fn fifteen_values_is_a_count_error() {
        let err = parse_table_text("1 1 2 2 3 3 4 4\n3 4 4 3 1 2 2").unwrap_err();
        assert!(err.is_parse());
        assert!(err.to_string().contains("found 15"));
    }

    #[test]
    fn bad_token_reports_line_and_column() {
        let err = parse_table_text("1 1 2 2 3 3 4 4\n3 4 x 3 1 2 2 1").unwrap_err();
        match err {
            TableError::Parse { line, col, .. } => {
                assert_eq!((line, col), (2, 5));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn negative_count_is_a_parse_error() {
        let err = parse_table_text("1 1 2 2 3 3 4 4\n-3 4 4 3 1 2 2 1").unwrap_err();
        assert!(err.is_parse());
        assert!(err.to_string().contains("negative"));
    }

    #[test]
    fn zero_margin_is_a_validation_error() {
        // All k = 1 columns zeroed.
        let err = parse_table_text("1 0 2 0 3 0 4 0\n3 0 4 0 1 0 2 0").unwrap_err();
        assert!(!err.is_parse());
        assert!(err.to_string().contains("++1+"));
    }

    #[test]
    fn display_round_trips() {
        let text = "1 1 2 2 3 3 4 4\n3 4 4 3 1 2 2 1";
        let t = parse_table_text(text).unwrap();
        assert_eq!(parse_table_text(&t.to_string()).unwrap(), t);
    }
}
