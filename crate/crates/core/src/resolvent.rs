//! Weighted resolvent norms `||(i lambda - A_mu)^{-1}||` along the imaginary
//! axis and their growth in `lambda`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::{self, LinearFit};
use crate::linalg::{self, CMatrix4};
use crate::region::ParameterPoint;
use crate::spectrum::{critical_root, modal_block};

/// `i lambda - B` with `B` the energy-normalized block.
fn shifted_block(point: &ParameterPoint, mu: f64, lambda: f64) -> Result<CMatrix4> {
    let b = modal_block(point, mu)?.normalized();
    Ok(CMatrix4::identity() * Complex64::new(0.0, lambda) - linalg::to_complex(&b))
}

fn resolvent(point: &ParameterPoint, mu: f64, lambda: f64) -> Result<CMatrix4> {
    let m = shifted_block(point, mu, lambda)?;
    let near = |rcond| Error::NearSingular { lambda, mu, rcond };
    let (x, _) = linalg::inverse4(&m).ok_or_else(|| near(0.0))?;
    let rcond = 1.0 / (linalg::norm1(&m) * linalg::norm1(&x));
    if rcond.is_nan() || rcond < 8.0 * f64::EPSILON {
        return Err(near(rcond));
    }
    Ok(x)
}

/// Norm of the resolvent of one mode in the energy norm, via the dominant
/// eigenvalue of `R^H R`.
pub fn modal_resolvent_norm(point: &ParameterPoint, mu: f64, lambda: f64) -> Result<f64> {
    Ok(linalg::spectral_norm(&resolvent(point, mu, lambda)?))
}

/// Same quantity from a direct SVD of the inverse.
pub fn modal_resolvent_norm_svd(point: &ParameterPoint, mu: f64, lambda: f64) -> Result<f64> {
    Ok(linalg::spectral_norm_svd(&resolvent(point, mu, lambda)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Envelope {
    /// Supremum over the supplied modes only.
    Discrete,
    /// Additionally maximises over continuous `mu` between the modes that
    /// bracket the discrete maximum.
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolventSample {
    pub lambda: f64,
    pub norm: f64,
    pub argmax_mu: f64,
}

const GOLDEN_ITERS: usize = 80;

fn golden_max(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..GOLDEN_ITERS {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1)?;
        }
        if b - a <= 1e-15 * a.abs().max(1.0) {
            break;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// Supremum of the modal resolvent norms at `i lambda` over `modes`.
pub fn resolvent_sup(point: &ParameterPoint, lambda: f64, modes: &[f64], envelope: Envelope) -> Result<ResolventSample> {
    if modes.is_empty() {
        return Err(Error::domain("modes", "[]", "need at least one mode"));
    }
    let mut best = ResolventSample {
        lambda,
        norm: f64::NEG_INFINITY,
        argmax_mu: modes[0],
    };
    let mut best_index = 0;
    for (i, &mu) in modes.iter().enumerate() {
        let n = modal_resolvent_norm(point, mu, lambda)?;
        if n > best.norm {
            best.norm = n;
            best.argmax_mu = mu;
            best_index = i;
        }
    }
    if envelope == Envelope::Continuous && modes.len() > 1 {
        let lo = modes[best_index.saturating_sub(1)];
        let hi = modes[(best_index + 1).min(modes.len() - 1)];
        let (x, n) = golden_max(|x| modal_resolvent_norm(point, x.exp(), lambda), lo.ln(), hi.ln())?;
        if n > best.norm {
            best.norm = n;
            best.argmax_mu = x.exp();
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthFit {
    pub fit: LinearFit,
    pub samples: Vec<ResolventSample>,
}

/// Frequencies at which the discrete supremum is sampled: the imaginary
/// parts of the critical root of each mode, one per requested `lambda`
/// (nearest in log scale), without duplicates.
pub fn critical_frequencies(point: &ParameterPoint, lambdas: &[f64], modes: &[f64]) -> Result<Vec<f64>> {
    let crit: Vec<f64> = modes
        .iter()
        .map(|&mu| critical_root(point, mu).map(|z| z.im))
        .collect::<Result<_>>()?;
    let mut out: Vec<f64> = lambdas
        .iter()
        .filter_map(|&l| {
            crit.iter()
                .copied()
                .filter(|w| *w > 0.0)
                .min_by(|a, b| (a.ln() - l.ln()).abs().total_cmp(&(b.ln() - l.ln()).abs()))
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

/// Log-log slope of the resolvent supremum against `lambda`; approaches
/// `1/k` for polynomial order `k` and `0` for exponential stability.
///
/// With the continuous envelope every `lambda` lies on the critical branch
/// of some continuous `mu`, so the grid is used as given; the discrete
/// envelope snaps the grid to the critical frequencies of the modes.
pub fn growth_exponent(point: &ParameterPoint, lambdas: &[f64], modes: &[f64], envelope: Envelope) -> Result<GrowthFit> {
    let lambdas = match envelope {
        Envelope::Continuous => lambdas.to_vec(),
        Envelope::Discrete => critical_frequencies(point, lambdas, modes)?,
    };
    let samples: Vec<ResolventSample> = lambdas
        .par_iter()
        .map(|&l| resolvent_sup(point, l, modes, envelope))
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = samples.iter().map(|s| s.lambda).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.norm).collect();
    Ok(GrowthFit {
        fit: fit::log_log(&xs, &ys)?,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{half, int};
    use crate::grid::logspace;
    use crate::spectrum::modal_eigenvalues;

    fn dist(point: &ParameterPoint, mu: f64, lambda: f64) -> f64 {
        let r = modal_eigenvalues(point, mu).unwrap();
        r.iter().map(|z| (z - Complex64::new(0.0, lambda)).norm()).fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn lower_bound_and_sanity_band() {
        let p = ParameterPoint::inertial(half(), int(0), half(), 1.0).unwrap();
        for &mu in &[1.0, 30.0, 1e4] {
            for &l in &[0.3, 5.0, 77.0, 1e3] {
                let n = modal_resolvent_norm(&p, mu, l).unwrap();
                let d = dist(&p, mu, l);
                assert!(n * d >= 1.0 - 1e-12, "{mu} {l}");
                assert!(n * d <= 10.0, "{mu} {l}: {}", n * d);
            }
        }
    }

    #[test]
    fn norm_at_critical_frequency() {
        let p = ParameterPoint::inertial(int(0), int(1), half(), 1.0).unwrap();
        let z = critical_root(&p, 1e4).unwrap();
        let n = modal_resolvent_norm(&p, 1e4, z.im).unwrap();
        assert!(n >= 1.0 / z.re.abs() * (1.0 - 1e-9));
    }

    #[test]
    fn norm_paths_agree() {
        let p = ParameterPoint::from_f64(0.3, 0.6, Some(0.2), 0.7, 1.5, 0.8).unwrap();
        for &mu in &[0.5, 10.0, 1e3] {
            for &l in &[0.1, 3.0, 40.0] {
                let a = modal_resolvent_norm(&p, mu, l).unwrap();
                let b = modal_resolvent_norm_svd(&p, mu, l).unwrap();
                assert!((a - b).abs() <= 1e-8 * b);
            }
        }
    }

    #[test]
    fn sup_over_modes() {
        let p = ParameterPoint::inertial(half(), int(0), half(), 1.0).unwrap();
        let single = resolvent_sup(&p, 7.0, &[16.0], Envelope::Discrete).unwrap();
        assert_eq!(single.norm, modal_resolvent_norm(&p, 16.0, 7.0).unwrap());
        let l = critical_root(&p, 16.0).unwrap().im;
        let two = resolvent_sup(&p, l, &[16.0, 81.0], Envelope::Discrete).unwrap();
        assert_eq!(two.argmax_mu, 16.0);
        let modes: Vec<f64> = (1..=30).map(|n| (n as f64).powi(4)).collect();
        let d = resolvent_sup(&p, 12.3, &modes, Envelope::Discrete).unwrap();
        let c = resolvent_sup(&p, 12.3, &modes, Envelope::Continuous).unwrap();
        assert!(c.norm >= d.norm);
    }

    #[test]
    fn growth_is_unbounded_for_polynomial_points() {
        let p = ParameterPoint::inertial(half(), int(0), half(), 1.0).unwrap();
        let modes = logspace(1e-1, 1e13, 701);
        let g = growth_exponent(&p, &logspace(10.0, 1e3, 12), &modes, Envelope::Continuous).unwrap();
        assert!((g.fit.slope - 2.0).abs() < 0.2, "{}", g.fit.slope);
        let first = g.samples.iter().filter(|s| s.lambda <= 100.0).map(|s| s.norm).fold(0.0, f64::max);
        let last = g.samples.iter().filter(|s| s.lambda >= 100.0).map(|s| s.norm).fold(0.0, f64::max);
        assert!(last > first);
    }

    #[test]
    fn discrete_envelope_samples_on_critical_frequencies() {
        let p = ParameterPoint::inertial(half(), int(0), half(), 1.0).unwrap();
        let modes: Vec<f64> = (1..=200).map(|n| (n as f64).powi(4)).collect();
        let g = growth_exponent(&p, &logspace(3.0, 30.0, 10), &modes, Envelope::Discrete).unwrap();
        for s in &g.samples {
            let hit = modes.iter().any(|&mu| (critical_root(&p, mu).unwrap().im - s.lambda).abs() < 1e-12 * s.lambda);
            assert!(hit);
        }
    }
}
