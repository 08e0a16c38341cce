//! Multi-rule, multi-dataset comparison tables.
//!
//! Rates are exact rationals throughout. Percentages are rounded half-up to
//! two decimals only when rendered, and a rule's AVERAGE is the unweighted
//! mean of its per-dataset rates.

use std::fmt::{self, Write as _};
use std::path::PathBuf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::dataset::{pair_dataset, MaskMode};
use crate::error::{Error, Result};
use crate::eval::{count_pairs, EvalResult};
use crate::rules::RuleKind;

/// An exact rate in `[0, 1]` (or any rational, for averaging arithmetic).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rate(BigRational);

impl Rate {
    pub fn from_counts(hits: u64, total: u64) -> Self {
        Rate(BigRational::new(BigInt::from(hits), BigInt::from(total)))
    }

    /// Parses a decimal percentage such as `90.46` into the rate `0.9046`.
    pub fn from_percent_str(s: &str) -> Option<Self> {
        let s = s.trim();
        let (neg, digits) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
        if int.is_empty() && frac.is_empty() {
            return None;
        }
        if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
            return None;
        }
        let mut numer: BigInt = format!("{int}{frac}").parse().ok()?;
        if neg {
            numer = -numer;
        }
        let denom = BigInt::from(100) * BigInt::from(10).pow(frac.len() as u32);
        Some(Rate(BigRational::new(numer, denom)))
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    /// Unweighted arithmetic mean; `None` for an empty slice.
    pub fn mean(rates: &[Rate]) -> Option<Rate> {
        if rates.is_empty() {
            return None;
        }
        let sum = rates.iter().fold(BigRational::zero(), |acc, r| acc + &r.0);
        Some(Rate(sum / BigInt::from(rates.len())))
    }

    /// Percentage rounded half-up (away from zero) to two decimals.
    pub fn percent_2dp(&self) -> String {
        // hundredths of a percent
        let scaled = &self.0 * BigInt::from(10_000);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let hundredths = (scaled.abs() + half).floor().to_integer();
        let sign = if scaled.is_negative() && !hundredths.is_zero() { "-" } else { "" };
        let (whole, cents) = hundredths.div_rem(&BigInt::from(100));
        format!("{sign}{whole}.{cents:0>2}")
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.percent_2dp())
    }
}

impl From<&EvalResult> for (Rate, Rate) {
    fn from(e: &EvalResult) -> Self {
        (
            Rate::from_counts(e.counts.i_pos, e.counts.n_pos),
            Rate::from_counts(e.counts.i_neg, e.counts.n_neg),
        )
    }
}

/// Outcome of one (rule, dataset) evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Ok(EvalResult),
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleAverage {
    pub tp: Rate,
    pub fp: Rate,
    /// Number of datasets that contributed.
    pub datasets: usize,
}

#[derive(Debug, Clone)]
pub struct ReportTable {
    pub rules: Vec<RuleKind>,
    pub datasets: Vec<String>,
    /// `cells[rule][dataset]`
    pub cells: Vec<Vec<Cell>>,
    /// `None` when every cell of the rule failed.
    pub averages: Vec<Option<RuleAverage>>,
    pub warnings: Vec<String>,
}

/// Averages the successful cells of one rule's row.
pub fn average_row(row: &[Cell]) -> Option<RuleAverage> {
    let (tps, fps): (Vec<Rate>, Vec<Rate>) = row
        .iter()
        .filter_map(|c| match c {
            Cell::Ok(e) => Some(<(Rate, Rate)>::from(e)),
            Cell::Failed(_) => None,
        })
        .unzip();
    Some(RuleAverage {
        datasets: tps.len(),
        tp: Rate::mean(&tps)?,
        fp: Rate::mean(&fps)?,
    })
}

impl ReportTable {
    /// Assembles a table from finished cells, computing averages and a
    /// warning for each failed cell.
    pub fn from_cells(rules: Vec<RuleKind>, datasets: Vec<String>, cells: Vec<Vec<Cell>>) -> Self {
        assert_eq!(rules.len(), cells.len());
        let mut warnings = Vec::new();
        for (rule, row) in rules.iter().zip(&cells) {
            assert_eq!(row.len(), datasets.len());
            for (name, cell) in datasets.iter().zip(row) {
                if let Cell::Failed(msg) = cell {
                    warnings.push(format!("{rule} on {name}: {msg}; excluded from AVERAGE"));
                }
            }
        }
        let averages = cells.iter().map(|row| average_row(row)).collect();
        ReportTable {
            rules,
            datasets,
            cells,
            averages,
            warnings,
        }
    }

    /// Fixed-width text table: per-dataset TP/FP pairs, then AVERAGE.
    pub fn render_text(&self) -> String {
        const RULE_W: usize = 16;
        const COL_W: usize = 9;
        let mut out = String::new();
        let _ = write!(out, "{:<RULE_W$}", "Rule");
        for name in self.datasets.iter().map(String::as_str).chain(["AVERAGE"]) {
            let _ = write!(out, "{:<w$}", name, w = 2 * COL_W);
        }
        out.push('\n');
        let _ = write!(out, "{:<RULE_W$}", "");
        for _ in 0..=self.datasets.len() {
            let _ = write!(out, "{:<COL_W$}{:<COL_W$}", "TP", "FP");
        }
        out.push('\n');
        for ((rule, row), avg) in self.rules.iter().zip(&self.cells).zip(&self.averages) {
            let _ = write!(out, "{:<RULE_W$}", rule.name());
            for cell in row {
                match cell {
                    Cell::Ok(e) => {
                        let (tp, fp) = <(Rate, Rate)>::from(e);
                        let _ = write!(out, "{:<COL_W$}{:<COL_W$}", tp.to_string(), fp.to_string());
                    }
                    Cell::Failed(_) => {
                        let _ = write!(out, "{:<COL_W$}{:<COL_W$}", "ERR", "ERR");
                    }
                }
            }
            match avg {
                Some(a) => {
                    let _ = write!(out, "{:<COL_W$}{}", a.tp.to_string(), a.fp);
                }
                None => out.push_str("ERR      ERR"),
            }
            let trimmed = out.trim_end_matches(' ').len();
            out.truncate(trimmed);
            out.push('\n');
        }
        out
    }

    /// CSV with one row per successful cell plus one `AVERAGE` row per rule.
    /// AVERAGE rows leave the count columns empty.
    pub fn render_csv(&self) -> String {
        let mut out = String::from("rule,dataset,tp_pct,fp_pct,n_pos,n_neg,i_pos,i_neg\n");
        for ((rule, row), avg) in self.rules.iter().zip(&self.cells).zip(&self.averages) {
            for (name, cell) in self.datasets.iter().zip(row) {
                if let Cell::Ok(e) = cell {
                    let (tp, fp) = <(Rate, Rate)>::from(e);
                    let c = e.counts;
                    let _ = writeln!(out, "{rule},{name},{tp},{fp},{},{},{},{}", c.n_pos, c.n_neg, c.i_pos, c.i_neg);
                }
            }
            if let Some(a) = avg {
                let _ = writeln!(out, "{rule},AVERAGE,{},{},,,,", a.tp, a.fp);
            }
        }
        out
    }
}

/// Evaluates every rule on every named dataset.
///
/// Dataset-level failures (bad layout, unreadable file, degenerate class)
/// become failed cells rather than aborting the whole report.
pub fn compare(rules: &[RuleKind], datasets: &[(String, PathBuf)], mode: MaskMode) -> Result<ReportTable> {
    if rules.is_empty() {
        return Err(Error::Parameter("at least one rule is required".into()));
    }
    if datasets.is_empty() {
        return Err(Error::Parameter("at least one dataset is required".into()));
    }
    let mut pair_warnings = Vec::new();
    let paired: Vec<_> = datasets
        .iter()
        .map(|(name, root)| match pair_dataset(root) {
            Ok(d) => {
                pair_warnings.extend(d.warnings.into_iter().map(|w| format!("{name}: {w}")));
                Ok(d.pairs)
            }
            Err(e) => Err(e.to_string()),
        })
        .collect();
    let cells = rules
        .iter()
        .map(|&rule| {
            paired
                .iter()
                .map(|pairs| {
                    let pairs = match pairs {
                        Ok(pairs) => pairs,
                        Err(msg) => return Cell::Failed(msg.clone()),
                    };
                    match count_pairs(rule, pairs, mode).and_then(|t| EvalResult::from_counts(t.confusion)) {
                        Ok(e) => Cell::Ok(e),
                        Err(e) => Cell::Failed(e.to_string()),
                    }
                })
                .collect()
        })
        .collect();
    let names = datasets.iter().map(|(n, _)| n.clone()).collect();
    let mut table = ReportTable::from_cells(rules.to_vec(), names, cells);
    pair_warnings.append(&mut table.warnings);
    table.warnings = pair_warnings;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::ConfusionCounts;

    fn pct(s: &str) -> Rate {
        Rate::from_percent_str(s).unwrap()
    }

    #[test]
    fn percent_parsing() {
        assert_eq!(pct("90.46"), Rate::from_counts(9046, 10000));
        assert_eq!(pct("100"), Rate::from_counts(1, 1));
        assert_eq!(pct("0.5").percent_2dp(), "0.50");
        assert!(Rate::from_percent_str("abc").is_none());
        assert!(Rate::from_percent_str(".").is_none());
        assert!(Rate::from_percent_str("1.2.3").is_none());
    }

    #[test]
    fn rounding_is_half_up() {
        assert_eq!(Rate::from_counts(1, 3).percent_2dp(), "33.33");
        assert_eq!(Rate::from_counts(2, 3).percent_2dp(), "66.67");
        // exactly 12.345 %
        assert_eq!(Rate::from_counts(12345, 100_000).percent_2dp(), "12.35");
        assert_eq!(Rate::from_counts(12344, 100_000).percent_2dp(), "12.34");
        assert_eq!(Rate::from_counts(1, 1).percent_2dp(), "100.00");
        assert_eq!(Rate::from_counts(0, 7).percent_2dp(), "0.00");
        assert_eq!(pct("-12.345").percent_2dp(), "-12.35");
    }

    #[test]
    fn mean_is_unweighted() {
        let m = Rate::mean(&[pct("90.46"), pct("81.46"), pct("93.25")]).unwrap();
        assert_eq!(m.percent_2dp(), "88.39");
        assert!(Rate::mean(&[]).is_none());
    }

    fn cell(i_pos: u64, n_pos: u64, i_neg: u64, n_neg: u64) -> Cell {
        Cell::Ok(EvalResult::from_counts(ConfusionCounts { n_pos, n_neg, i_pos, i_neg }).unwrap())
    }

    #[test]
    fn failed_cells_are_excluded_from_average() {
        let table = ReportTable::from_cells(
            vec![RuleKind::Kovac],
            vec!["a".into(), "b".into()],
            vec![vec![cell(1, 2, 1, 4), Cell::Failed("boom".into())]],
        );
        let avg = table.averages[0].as_ref().unwrap();
        assert_eq!(avg.datasets, 1);
        assert_eq!(avg.tp.percent_2dp(), "50.00");
        assert_eq!(avg.fp.percent_2dp(), "25.00");
        assert_eq!(table.warnings.len(), 1);
        assert!(table.render_text().contains("ERR"));
        assert_eq!(
            table.render_csv(),
            "rule,dataset,tp_pct,fp_pct,n_pos,n_neg,i_pos,i_neg\nkovac,a,50.00,25.00,2,4,1,1\nkovac,AVERAGE,50.00,25.00,,,,\n"
        );
    }

    #[test]
    fn text_layout() {
        let table = ReportTable::from_cells(
            vec![RuleKind::Kovac, RuleKind::RgbRatio],
            vec!["SIdb".into()],
            vec![vec![cell(3, 4, 1, 4)], vec![cell(1, 1, 0, 1)]],
        );
        let text = table.render_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[2], "kovac           75.00    25.00    75.00    25.00");
        assert_eq!(lines[3], "rgb-ratio       100.00   0.00     100.00   0.00");
        assert!(lines[0].starts_with("Rule            SIdb"));
        assert!(lines[0].contains("AVERAGE"));
    }

    #[test]
    fn compare_requires_inputs() {
        assert!(compare(&[], &[("a".into(), "x".into())], MaskMode::Strict).is_err());
        assert!(compare(&[RuleKind::Kovac], &[], MaskMode::Strict).is_err());
    }

    #[test]
    fn compare_reports_missing_dataset_as_failed_cell() {
        let table = compare(&[RuleKind::Kovac], &[("gone".into(), "/nonexistent/skinrule".into())], MaskMode::Strict).unwrap();
        assert!(matches!(table.cells[0][0], Cell::Failed(_)));
        assert!(table.averages[0].is_none());
    }
}
