//! Checks the asymptotic branch tables against solved quartics.

use serde::Serialize;

use crate::exact::{half, int, ratio, Rational};
use crate::region::{ParameterPoint, RegionLabel};
use crate::report::fmt_real;
use crate::spectrum::table::{asymptotic_error_in, BranchTable, ErrorSample};

pub const TABLE_MUS: [f64; 3] = [1e4, 1e6, 1e8];
pub const TABLE_TOLERANCE: f64 = 0.05;

/// Representative point of a table region: the centroid of its defining
/// inequalities, rounded to multiples of 1/8 (nudged inside where rounding
/// would land on a boundary).
pub fn representative(region: RegionLabel) -> Option<ParameterPoint> {
    use RegionLabel::*;
    let e = |n: i64| ratio(n, 8);
    let (a, b, g): (Rational, Rational, Option<Rational>) = match region {
        T1 => (e(5), e(5), Some(e(3))),
        T2 => (e(2), e(3), Some(e(3))),
        T3 => (e(3), e(5), Some(e(5))),
        T4 => (e(7), e(3), Some(half())),
        F12 => (half(), e(3), Some(e(3))),
        F13 => (e(5), e(5), Some(e(5))),
        F14 => (e(6), half(), Some(half())),
        F2 => (e(2), int(0), Some(half())),
        F23 => (e(2), half(), Some(half())),
        L123 => (half(), half(), Some(half())),
        L124 => (half(), int(0), Some(half())),
        L2 => (e(2), int(0), Some(int(1))),
        L34 => (e(6), half(), Some(int(1))),
        P234 => (half(), int(0), Some(int(1))),
        T1s => (e(5), e(5), None),
        T2s => (e(2), half(), None),
        T4s => (e(7), e(3), None),
        F12s => (half(), half(), None),
        F14s => (e(6), half(), None),
        F2s => (e(2), int(0), None),
        L124s => (half(), int(0), None),
        L23s => (e(2), int(1), None),
        P123s => (half(), int(1), None),
        Unclassified => return None,
    };
    let point = match g {
        Some(g) => ParameterPoint::inertial(a, b, g, 1.0),
        None => ParameterPoint::noninertial(a, b),
    };
    point.ok()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowReport {
    pub region: RegionLabel,
    pub point: ParameterPoint,
    pub samples: Vec<ErrorSample>,
    /// Largest relative branch error at the largest `mu`.
    pub final_error: Option<f64>,
    pub monotone: bool,
    pub passed: bool,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableReport {
    pub tool_version: &'static str,
    pub inertial: bool,
    pub mu_values: Vec<f64>,
    pub tolerance: f64,
    pub rows: Vec<RowReport>,
    pub passed_rows: usize,
    pub total_rows: usize,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.passed_rows == self.total_rows
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("region,mu,root_index,branch,re,im,pred_re,pred_im,err_re,err_im,row_passed\n");
        let opt = |x: Option<f64>| x.map(fmt_real).unwrap_or_default();
        for row in &self.rows {
            for s in &row.samples {
                for e in &s.entries {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{},{},{}\n",
                        row.region,
                        fmt_real(s.mu),
                        e.root_index,
                        e.branch,
                        fmt_real(e.computed.re),
                        fmt_real(e.computed.im),
                        fmt_real(e.predicted.re),
                        fmt_real(e.predicted.im),
                        opt(e.err_re),
                        opt(e.err_im),
                        row.passed
                    ));
                }
            }
        }
        out
    }

    /// One line per row.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let err = r.final_error.map(|e| format!("{:.3}%", 100.0 * e)).unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "{:<6} {:<4} max error at mu=1e8: {:>9}  monotone: {:<5} {}\n",
                r.region.name(),
                if r.passed { "PASS" } else { "FAIL" },
                err,
                r.monotone,
                r.failure.as_deref().unwrap_or("")
            ));
        }
        out.push_str(&format!("{}/{} rows passed\n", self.passed_rows, self.total_rows));
        out
    }
}

/// Verifies every row of the published table for `m = 1` or `m = 0`.
pub fn verify_tables(inertial: bool) -> TableReport {
    verify_table(&BranchTable::standard(inertial))
}

/// Verifies every row of `table` (which may be modified, e.g. to inject
/// faults).
pub fn verify_table(table: &BranchTable) -> TableReport {
    let rows: Vec<RowReport> = table.rows.iter().map(|row| verify_row(table, row.region)).collect();
    let passed_rows = rows.iter().filter(|r| r.passed).count();
    TableReport {
        tool_version: env!("CARGO_PKG_VERSION"),
        inertial: table.inertial,
        mu_values: TABLE_MUS.to_vec(),
        tolerance: TABLE_TOLERANCE,
        total_rows: rows.len(),
        passed_rows,
        rows,
    }
}

fn verify_row(table: &BranchTable, region: RegionLabel) -> RowReport {
    let point = representative(region).expect("table rows are classified regions");
    match asymptotic_error_in(table, region, &point, &TABLE_MUS) {
        Ok(samples) => {
            let errs: Vec<f64> = samples.iter().map(|s| s.max_error).collect();
            let monotone = errs.windows(2).all(|w| w[1] <= w[0]);
            let final_error = errs.last().copied();
            let within = final_error.is_some_and(|e| e <= TABLE_TOLERANCE);
            let failure = match (within, monotone) {
                (true, true) => None,
                (false, _) => Some(format!("error above {}%", 100.0 * TABLE_TOLERANCE)),
                (true, false) => Some("error not non-increasing in mu".to_string()),
            };
            RowReport {
                region,
                point,
                samples,
                final_error,
                monotone,
                passed: within && monotone,
                failure,
            }
        }
        Err(e) => RowReport {
            region,
            point,
            samples: Vec::new(),
            final_error: None,
            monotone: false,
            passed: false,
            failure: Some(e.to_string()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::classify;
    use crate::exact::Tolerance;

    #[test]
    fn representatives_lie_in_their_regions() {
        for inertial in [true, false] {
            for row in BranchTable::standard(inertial).rows {
                let p = representative(row.region).unwrap();
                assert_eq!(classify(&p, &Tolerance::exact()).unwrap(), row.region);
            }
        }
    }

    #[test]
    fn corrupted_constant_fails_its_row() {
        let mut table = BranchTable::standard(true);
        if let crate::spectrum::Branch::Pair { b, .. } = &mut table.row_mut(RegionLabel::L124).unwrap().branches[0] {
            *b *= 1.5;
        }
        let report = verify_table(&table);
        let row = report.rows.iter().find(|r| r.region == RegionLabel::L124).unwrap();
        assert!(!row.passed);
        assert!(report.rows.iter().filter(|r| r.region != RegionLabel::L124).all(|r| r.passed));
    }
}
