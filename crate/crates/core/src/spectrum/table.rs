//! Leading-order eigenvalue branches at `sigma = 2`, `tau = 1`, for `m = 1`
//! (unstarred regions) and `m = 0` (starred regions).
//!
//! Each branch is `-a mu^p +- i b mu^q`, or a real branch `-a mu^p`, with the
//! exponents affine in `(alpha, beta, gamma)`. Rows are transcribed as
//! published; a known misprint in row F2s is kept (see the README).

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use super::{characteristic_coeffs, permutations4, solve_cubic, solve_quartic};
use crate::error::{Error, Result};
use crate::region::{classify, ParameterPoint, RegionLabel};
use crate::exact::Tolerance;

/// `c + a alpha + b beta + g gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exponent {
    pub c: f64,
    pub a: f64,
    pub b: f64,
    pub g: f64,
}

const fn ex(c: f64, a: f64, b: f64, g: f64) -> Exponent {
    Exponent { c, a, b, g }
}

const ZERO: Exponent = ex(0.0, 0.0, 0.0, 0.0);

impl Exponent {
    pub fn eval(&self, alpha: f64, beta: f64, gamma: f64) -> f64 {
        self.c + self.a * alpha + self.b * beta + self.g * gamma
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Branch {
    /// `-a mu^p +- i b mu^q`: two conjugate roots.
    Pair { a: f64, p: Exponent, b: f64, q: Exponent },
    /// `-a mu^p`: one real root.
    Real { a: f64, p: Exponent },
}

impl Branch {
    fn multiplicity(&self) -> usize {
        match self {
            Branch::Pair { .. } => 2,
            Branch::Real { .. } => 1,
        }
    }
}

fn pair(a: f64, p: Exponent, b: f64, q: Exponent) -> Branch {
    Branch::Pair { a, p, b, q }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub region: RegionLabel,
    pub branches: Vec<Branch>,
}

/// Roots `j1 < j2 < j3` of `j^3 + 29 j^2 + 115 j - 81`.
pub fn p234_constants() -> [f64; 3] {
    static J: OnceLock<[f64; 3]> = OnceLock::new();
    *J.get_or_init(|| {
        let r = solve_cubic(1.0, 29.0, 115.0, -81.0);
        let mut j = [r[0].re, r[1].re, r[2].re];
        j.sort_by(f64::total_cmp);
        j
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchTable {
    pub inertial: bool,
    pub rows: Vec<TableRow>,
}

impl BranchTable {
    /// The published table for `m = 1` (`inertial`) or `m = 0`.
    pub fn standard(inertial: bool) -> BranchTable {
        use RegionLabel::*;
        let s2 = 2f64.sqrt();
        let s3 = 3f64.sqrt();
        let h = 0.5;
        // frequently used exponents
        let beta_half = ex(0.0, 0.0, h, 0.0);
        let wave = ex(h, 0.0, 0.0, -h); // 1/2 - gamma/2
        let row = |region, branches: Vec<Branch>| TableRow { region, branches };
        let rows = if inertial {
            let [j1, j2, j3] = p234_constants();
            vec![
                row(T1, vec![
                    pair(h, ex(0.0, -2.0, 1.0, 1.0), 1.0, ex(0.0, 1.0, 0.0, -h)),
                    pair(h, ZERO, s2, ex(h, -1.0, h, 0.0)),
                ]),
                row(T2, vec![
                    pair(1.0 / 8.0, ex(-2.0, 2.0, 1.0, 1.0), s2, wave),
                    pair(h, ZERO, 1.0, beta_half),
                ]),
                row(T3, vec![
                    pair(h, ZERO, 1.0, beta_half),
                    pair(h, ex(0.0, 2.0, -1.0, -1.0), s2, wave),
                ]),
                row(T4, vec![
                    pair(h, ex(0.0, -2.0, 1.0, 1.0), 1.0, ex(0.0, 1.0, 0.0, -h)),
                    Branch::Real { a: 2.0, p: ex(1.0, -2.0, 1.0, 0.0) },
                    Branch::Real { a: 1.0, p: ZERO },
                ]),
                row(F12, vec![
                    pair(1.0 / 18.0, ex(-1.0, 0.0, 1.0, 1.0), s3, wave),
                    pair(h, ZERO, 6f64.sqrt() / 3.0, beta_half),
                ]),
                row(F13, vec![
                    pair(0.25, ZERO, s2, beta_half),
                    pair(0.25, ZERO, 1.0, wave),
                ]),
                row(F14, vec![
                    pair(h, ex(-1.0, 0.0, 0.0, 1.0), 1.0, ex(h, 0.0, h, -h)),
                    pair(h, ZERO, 7f64.sqrt() / 2.0, ZERO),
                ]),
                row(F2, vec![
                    pair(1.0 / 8.0, ex(-2.0, 2.0, 0.0, 1.0), s2, wave),
                    pair(h, ZERO, s3 / 2.0, ZERO),
                ]),
                row(F23, vec![
                    pair(h, ex(-1.0, 2.0, 0.0, 0.0), s2, wave),
                    pair(h, ZERO, 1.0, wave),
                ]),
                row(L123, vec![
                    pair(0.25 - s2 / 8.0, ZERO, (2.0 + s2).sqrt(), wave),
                    pair(0.25 + s2 / 8.0, ZERO, (2.0 - s2).sqrt(), wave),
                ]),
                row(L124, vec![
                    pair(1.0 / 18.0, ex(-1.0, 0.0, 0.0, 1.0), s3, wave),
                    pair(h, ZERO, 15f64.sqrt() / 6.0, ZERO),
                ]),
                row(L2, vec![
                    pair(1.0 / 6.0, ex(-1.0, 2.0, 0.0, 0.0), s2, ZERO),
                    pair(h, ZERO, s3 / 2.0, ZERO),
                ]),
                row(L34, vec![
                    pair(0.25, ZERO, s2, beta_half),
                    pair(0.25, ZERO, 15f64.sqrt() / 4.0, ZERO),
                ]),
                row(P234, vec![
                    pair((1.0 - j3.sqrt()) / 4.0, ZERO, ((-j1).sqrt() + (-j2).sqrt()) / 4.0, ZERO),
                    pair((1.0 + j3.sqrt()) / 4.0, ZERO, ((-j1).sqrt() - (-j2).sqrt()) / 4.0, ZERO),
                ]),
            ]
        } else {
            let half_exp = ex(h, 0.0, 0.0, 0.0);
            vec![
                row(T1s, vec![
                    pair(h, ex(0.0, -2.0, 1.0, 0.0), 1.0, ex(0.0, 1.0, 0.0, 0.0)),
                    pair(h, ZERO, s2, ex(h, -1.0, h, 0.0)),
                ]),
                row(T2s, vec![
                    pair(1.0 / 8.0, ex(-2.0, 2.0, 1.0, 0.0), s2, half_exp),
                    pair(h, ZERO, 1.0, beta_half),
                ]),
                row(T4s, vec![
                    pair(h, ex(0.0, -2.0, 1.0, 0.0), 1.0, ex(0.0, 1.0, 0.0, 0.0)),
                    Branch::Real { a: 2.0, p: ex(1.0, -2.0, 1.0, 0.0) },
                    Branch::Real { a: 1.0, p: ZERO },
                ]),
                row(F12s, vec![
                    pair(1.0 / 18.0, ex(-1.0, 0.0, 1.0, 0.0), s3, half_exp),
                    pair(h, ZERO, 6f64.sqrt() / 3.0, beta_half),
                ]),
                row(F14s, vec![
                    pair(h, ex(-1.0, 0.0, 0.0, 0.0), 1.0, ex(h, 0.0, h, 0.0)),
                    pair(h, ZERO, 7f64.sqrt() / 2.0, ZERO),
                ]),
                row(F2s, vec![
                    // imaginary coefficient as printed (the balance gives sqrt 2)
                    pair(1.0 / 8.0, ex(-2.0, 2.0, 0.0, 0.0), 1.0, half_exp),
                    pair(h, ZERO, s3 / 2.0, ZERO),
                ]),
                row(L124s, vec![
                    pair(1.0 / 18.0, ex(-1.0, 0.0, 0.0, 0.0), s3, half_exp),
                    pair(h, ZERO, 15f64.sqrt() / 6.0, ZERO),
                ]),
                row(L23s, vec![
                    pair(h, ex(-1.0, 2.0, 0.0, 0.0), s2, half_exp),
                    pair(h, ZERO, 1.0, half_exp),
                ]),
                row(P123s, vec![
                    pair(0.25 - 1.0 / (4.0 * s2), ZERO, (2.0 + s2).sqrt(), half_exp),
                    pair(0.25 + 1.0 / (4.0 * s2), ZERO, (2.0 - s2).sqrt(), half_exp),
                ]),
            ]
        };
        BranchTable { inertial, rows }
    }

    pub fn row(&self, region: RegionLabel) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.region == region)
    }

    pub fn row_mut(&mut self, region: RegionLabel) -> Option<&mut TableRow> {
        self.rows.iter_mut().find(|r| r.region == region)
    }

    /// Table matching the inertia of `point`, after checking that `point`
    /// uses the coefficients the table was derived for.
    pub fn for_point(point: &ParameterPoint) -> Result<BranchTable> {
        check_table_parameters(point)?;
        Ok(BranchTable::standard(point.has_inertia()))
    }
}

fn check_table_parameters(point: &ParameterPoint) -> Result<()> {
    if point.sigma != 2.0 || point.tau != 1.0 || !(point.m == 0.0 || point.m == 1.0) {
        return Err(Error::UnsupportedParameters {
            sigma: point.sigma,
            tau: point.tau,
            m: point.m,
        });
    }
    Ok(())
}

/// Leading-order roots of one table row evaluated at `mu`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticPrediction {
    pub region: RegionLabel,
    pub mu: f64,
    /// Four values; conjugate pairs are adjacent, upper half first.
    pub roots: [Complex64; 4],
    /// Index of the table branch each root came from.
    pub branch_of: [usize; 4],
}

pub fn predicted_roots(region: RegionLabel, point: &ParameterPoint, mu: f64) -> Result<AsymptoticPrediction> {
    predicted_roots_in(&BranchTable::for_point(point)?, region, point, mu)
}

pub fn predicted_roots_in(
    table: &BranchTable,
    region: RegionLabel,
    point: &ParameterPoint,
    mu: f64,
) -> Result<AsymptoticPrediction> {
    check_table_parameters(point)?;
    if table.inertial != point.has_inertia() {
        return Err(Error::UnsupportedRegion(region));
    }
    let row = table.row(region).ok_or(Error::UnsupportedRegion(region))?;
    if row.branches.iter().map(Branch::multiplicity).sum::<usize>() != 4 {
        return Err(Error::UnsupportedRegion(region));
    }
    let (a, b, g) = (point.alpha_f64(), point.beta_f64(), point.gamma_f64());
    let mut roots = [Complex64::new(0.0, 0.0); 4];
    let mut branch_of = [0; 4];
    let mut k = 0;
    for (i, br) in row.branches.iter().enumerate() {
        match *br {
            Branch::Pair { a: ca, p, b: cb, q } => {
                let z = Complex64::new(-ca * mu.powf(p.eval(a, b, g)), cb * mu.powf(q.eval(a, b, g)));
                roots[k] = z;
                roots[k + 1] = z.conj();
                branch_of[k] = i;
                branch_of[k + 1] = i;
                k += 2;
            }
            Branch::Real { a: ca, p } => {
                roots[k] = Complex64::new(-ca * mu.powf(p.eval(a, b, g)), 0.0);
                branch_of[k] = i;
                k += 1;
            }
        }
    }
    Ok(AsymptoticPrediction {
        region,
        mu,
        roots,
        branch_of,
    })
}

/// One computed root paired with its predicted branch value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchError {
    pub root_index: usize,
    pub branch: usize,
    pub computed: Complex64,
    pub predicted: Complex64,
    /// `None` where the prediction is identically zero.
    pub err_re: Option<f64>,
    pub err_im: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorSample {
    pub mu: f64,
    pub entries: Vec<BranchError>,
    pub max_error: f64,
}

fn log_coords(z: Complex64) -> (f64, f64) {
    // shifted so magnitudes are positive and the sign separates half planes
    let l = |x: f64| x.abs().max(1e-300).ln() - 1e-300f64.ln();
    let sgn = |x: f64| if x == 0.0 { 0.0 } else { x.signum() };
    (sgn(z.im) * l(z.im), sgn(z.re) * l(z.re))
}

fn errors_for(computed: &[Complex64; 4], pred: &AsymptoticPrediction, perm: &[usize; 4]) -> Vec<BranchError> {
    (0..4)
        .map(|i| {
            let c = computed[perm[i]];
            let p = pred.roots[i];
            BranchError {
                root_index: i,
                branch: pred.branch_of[i],
                computed: c,
                predicted: p,
                err_re: crate::report::rel_err(c.re, p.re),
                err_im: crate::report::rel_err(c.im, p.im),
            }
        })
        .collect()
}

/// Compares computed roots against a table row over `mu_list`.
///
/// Roots are paired with predictions by the permutation minimising the
/// total distance in `(sign(Im) log|Im|, sign(Re) log|Re|)`. Two permutations with
/// equal cost but different error reports are an ambiguity error.
pub fn asymptotic_error_in(
    table: &BranchTable,
    region: RegionLabel,
    point: &ParameterPoint,
    mu_list: &[f64],
) -> Result<Vec<ErrorSample>> {
    let perms = permutations4();
    let mut out = Vec::with_capacity(mu_list.len());
    for &mu in mu_list {
        let pred = predicted_roots_in(table, region, point, mu)?;
        let computed = solve_quartic(&characteristic_coeffs(point, mu)?)?.roots;
        let pl = pred.roots.map(log_coords);
        let cl = computed.map(log_coords);
        let cost = |perm: &[usize; 4]| -> f64 {
            (0..4)
                .map(|i| ((pl[i].0 - cl[perm[i]].0).powi(2) + (pl[i].1 - cl[perm[i]].1).powi(2)).sqrt())
                .sum()
        };
        let costs: Vec<f64> = perms.iter().map(cost).collect();
        let (best, &best_cost) = costs
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("24 permutations");
        let entries = errors_for(&computed, &pred, &perms[best]);
        // repeated roots tie but report the same errors; a tie that changes
        // the errors is ambiguous
        let tie = 1e-12 * (1.0 + best_cost);
        let signature = |es: &[BranchError]| {
            let mut v: Vec<(u64, u64)> = es
                .iter()
                .map(|e| (e.err_re.unwrap_or(-1.0).to_bits(), e.err_im.unwrap_or(-1.0).to_bits()))
                .collect();
            v.sort_unstable();
            v
        };
        let best_sig = signature(&entries);
        for (j, &c) in costs.iter().enumerate() {
            if j != best && c - best_cost <= tie && signature(&errors_for(&computed, &pred, &perms[j])) != best_sig {
                return Err(Error::MatchingAmbiguity { mu });
            }
        }
        let max_error = entries
            .iter()
            .flat_map(|e| [e.err_re, e.err_im])
            .flatten()
            .fold(0.0, f64::max);
        out.push(ErrorSample { mu, entries, max_error });
    }
    Ok(out)
}

/// Like [`asymptotic_error_in`] with the published table and the region of
/// `point`.
pub fn asymptotic_error(point: &ParameterPoint, mu_list: &[f64]) -> Result<Vec<ErrorSample>> {
    let table = BranchTable::for_point(point)?;
    let region = classify(point, &Tolerance::exact())?;
    asymptotic_error_in(&table, region, point, mu_list)
}
