//! Modal dynamics: the 4x4 block for one eigenvalue `mu` of `A`, its quartic
//! characteristic polynomial, and the asymptotic branch tables.

mod quartic;
pub mod table;

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::Serialize;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::fit::{self, LinearFit};
use crate::linalg;
use crate::region::ParameterPoint;

pub use quartic::{solve_cubic, solve_quartic, QuarticCoeffs, RootSet};
pub use table::{asymptotic_error, predicted_roots, AsymptoticPrediction, Branch, BranchTable};

/// Dynamics of one mode on the state `(u, v, theta, q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalBlock {
    pub mu: f64,
    pub matrix: Matrix4<f64>,
    /// Energy weights `(sigma mu, 1 + m mu^gamma, 1, tau)`.
    pub weights: [f64; 4],
}

impl ModalBlock {
    /// `W^{1/2} A W^{-1/2}`: the block in coordinates where the energy norm
    /// is the Euclidean norm. Skew-symmetric apart from the `-1/tau` damping
    /// entry.
    pub fn normalized(&self) -> Matrix4<f64> {
        let s = self.weights.map(f64::sqrt);
        Matrix4::from_fn(|i, j| s[i] * self.matrix[(i, j)] / s[j])
    }

    pub fn weight_sqrt(&self) -> [f64; 4] {
        self.weights.map(f64::sqrt)
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if mu.is_finite() && mu > 0.0 {
        Ok(())
    } else {
        Err(Error::domain("mu", mu, "must be finite and > 0"))
    }
}

pub fn modal_block(point: &ParameterPoint, mu: f64) -> Result<ModalBlock> {
    check_mu(mu)?;
    let d = point.inertia(mu);
    let ma = mu.powf(point.alpha_f64());
    let mb = mu.powf(point.beta_f64() / 2.0);
    let (sigma, tau) = (point.sigma, point.tau);
    #[rustfmt::skip]
    let matrix = Matrix4::new(
        0.0,              1.0,  0.0,       0.0,
        -sigma * mu / d,  0.0,  ma / d,    0.0,
        0.0,              -ma,  0.0,       mb,
        0.0,              0.0,  -mb / tau, -1.0 / tau,
    );
    Ok(ModalBlock {
        mu,
        matrix,
        weights: [sigma * mu, d, 1.0, tau],
    })
}

/// `tau (1 + m mu^gamma) det(lambda - A_mu)`, expanded.
///
/// The powers of `mu` are evaluated once and the coefficients assembled from
/// them in double-double, so the rounded polynomial still belongs to a
/// concrete parameter set. Rounding each coefficient separately breaks the
/// relations between them, which is enough to push real parts of order
/// `1e-17 |lambda|` across the imaginary axis.
pub fn characteristic_coeffs(point: &ParameterPoint, mu: f64) -> Result<QuarticCoeffs> {
    check_mu(mu)?;
    let (sigma, tau) = (point.sigma, point.tau);
    let (a, b) = (point.alpha_f64(), point.beta_f64());
    let p = mu.powf(2.0 * a);
    let q = mu.powf(b);
    // m mu^gamma
    let mg = if point.has_inertia() { Dd::prod(point.m, mu.powf(point.gamma_f64())) } else { Dd::from_f64(0.0) };
    let c3 = mg.add_f64(1.0);
    let c4 = c3.mul_f64(tau);
    let c2 = Dd::prod(tau, p)
        .add(mg.mul_f64(q))
        .add(Dd::prod(sigma, tau).mul_f64(mu))
        .add_f64(q);
    let c1 = Dd::prod(sigma, mu).add_f64(p);
    let c0 = Dd::prod(sigma, mu).mul_f64(q);
    Ok(QuarticCoeffs::from_dd([c4, c3, c2, c1, c0]))
}

/// Smallest achievable worst-case distance between two 4-point multisets.
pub fn multiset_distance(a: &[Complex64; 4], b: &[Complex64; 4]) -> f64 {
    let mut best = f64::INFINITY;
    for p in permutations4() {
        let d = (0..4).map(|i| (a[i] - b[p[i]]).norm()).fold(0.0, f64::max);
        best = best.min(d);
    }
    best
}

pub(crate) fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

/// Relative tolerance of the root/eigenvalue cross-check, measured against
/// the spectral radius.
pub const CROSS_CHECK_TOL: f64 = 1e-6;

/// Quartic roots at `mu`, cross-checked against the eigenvalues of the
/// energy-normalized block.
pub fn modal_eigenvalues(point: &ParameterPoint, mu: f64) -> Result<RootSet> {
    let roots = solve_quartic(&characteristic_coeffs(point, mu)?)?;
    let block = modal_block(point, mu)?;
    let eig = linalg::eigenvalues4(&block.normalized());
    let radius = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let deviation = multiset_distance(&roots.roots, &eig);
    let tolerance = CROSS_CHECK_TOL * radius;
    if deviation.is_nan() || deviation > tolerance {
        return Err(Error::CrossCheck {
            mu,
            deviation,
            tolerance,
        });
    }
    Ok(roots)
}

/// Root in the upper half plane whose real part is smallest in magnitude:
/// the branch that approaches the imaginary axis.
pub fn critical_root(point: &ParameterPoint, mu: f64) -> Result<Complex64> {
    solve_quartic(&characteristic_coeffs(point, mu)?)?
        .critical()
        .ok_or(Error::NoCriticalBranch { mu })
}

/// Slope of `log(-Re lambda)` against `log |Im lambda|` along the critical
/// branch. For a polynomial order `k` the slope approaches `-1/k`.
pub fn optimality_exponent(point: &ParameterPoint, mu_list: &[f64]) -> Result<LinearFit> {
    let mut xs = Vec::with_capacity(mu_list.len());
    let mut ys = Vec::with_capacity(mu_list.len());
    for &mu in mu_list {
        let z = critical_root(point, mu)?;
        if z.re < 0.0 && z.im > 0.0 {
            xs.push(z.im);
            ys.push(-z.re);
        }
    }
    fit::log_log(&xs, &ys)
}

#[derive(Debug, Clone, Serialize)]
pub struct RootSample {
    pub mu: f64,
    pub roots: RootSet,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{half, int, ratio};

    #[test]
    fn block_entries() {
        let p = ParameterPoint::noninertial(int(0), int(0)).unwrap();
        let b = modal_block(&p, 1.0).unwrap();
        assert_eq!(b.matrix.row(1).iter().copied().collect::<Vec<_>>(), vec![-2.0, 0.0, 1.0, 0.0]);
        assert_eq!(b.matrix.row(2).iter().copied().collect::<Vec<_>>(), vec![0.0, -1.0, 0.0, 1.0]);
        assert_eq!(b.matrix.row(3).iter().copied().collect::<Vec<_>>(), vec![0.0, 0.0, -1.0, -1.0]);
        assert_eq!(b.weights, [2.0, 1.0, 1.0, 1.0]);

        let p = ParameterPoint::inertial(ratio(1, 4), int(0), half(), 1.0).unwrap();
        let b = modal_block(&p, 4.0).unwrap();
        assert!((b.matrix[(1, 0)] + 8.0 / 3.0).abs() < 1e-15);
        assert!((b.matrix[(1, 2)] - 4f64.sqrt().sqrt() / 3.0).abs() < 1e-15);
        assert_eq!(b.weights[1], 3.0);
        assert!(modal_block(&p, 0.0).is_err());
    }

    #[test]
    fn coefficients_at_reference_points() {
        let p = ParameterPoint::inertial(ratio(1, 3), ratio(2, 3), ratio(1, 5), 1.0).unwrap();
        assert_eq!(characteristic_coeffs(&p, 1.0).unwrap().to_array(), [2.0, 2.0, 5.0, 3.0, 2.0]);
        let p = ParameterPoint::noninertial(ratio(1, 3), ratio(2, 3)).unwrap();
        assert_eq!(characteristic_coeffs(&p, 1.0).unwrap().to_array(), [1.0, 1.0, 4.0, 3.0, 2.0]);
        let p = ParameterPoint::inertial(half(), int(0), half(), 1.0).unwrap();
        assert_eq!(characteristic_coeffs(&p, 16.0).unwrap().to_array(), [5.0, 5.0, 53.0, 48.0, 32.0]);
    }

    #[test]
    fn normalized_block_is_skew_plus_damping() {
        let p = ParameterPoint::from_f64(0.3, 0.7, Some(0.4), 1.3, 2.5, 0.6).unwrap();
        let b = modal_block(&p, 37.0).unwrap().normalized();
        let sym = (b + b.transpose()) / 2.0;
        for i in 0..4 {
            for j in 0..4 {
                let want = if (i, j) == (3, 3) { -1.0 / 0.6 } else { 0.0 };
                assert!((sym[(i, j)] - want).abs() < 1e-12, "{i}{j} {}", sym[(i, j)]);
            }
        }
    }

    #[test]
    fn eigenvalue_paths_agree() {
        let p = ParameterPoint::noninertial(int(0), int(0)).unwrap();
        let r = modal_eigenvalues(&p, 1.0).unwrap();
        let e = linalg::eigenvalues4(&modal_block(&p, 1.0).unwrap().matrix);
        assert!(multiset_distance(&r.roots, &e) < 1e-10);
        for mu in [1e-3, 1.0, 1e3, 1e6, 1e10] {
            let p = ParameterPoint::inertial(ratio(3, 5), ratio(4, 5), ratio(2, 5), 1.0).unwrap();
            let r = modal_eigenvalues(&p, mu).unwrap();
            assert!(r.max_real_part() < 0.0, "{mu}: {r:?}");
        }
    }

    #[test]
    fn roots_at_large_mu_keep_tiny_real_parts() {
        // T3 example: the slow branch has real part ~ -mu^{-3/2}/2
        let p = ParameterPoint::inertial(int(0), int(1), half(), 1.0).unwrap();
        let z = critical_root(&p, 1e10).unwrap();
        assert!(z.re < 0.0);
        assert!((z.re / (-0.5e-15) - 1.0).abs() < 0.05, "{z}");
    }

    #[test]
    fn optimality_slope_example() {
        let p = ParameterPoint::inertial(half(), int(0), half(), 1.0).unwrap();
        let mus: Vec<f64> = (8..=20).map(|i| 10f64.powf(i as f64 / 2.0)).collect();
        let f = optimality_exponent(&p, &mus).unwrap();
        assert!((f.slope + 2.0).abs() < 0.06, "{}", f.slope);
    }
}
