//! Modal time evolution, energy, and the decay of `||e^{tA} A^{-1}||`.
//!
//! Each mode is handled in energy-normalized coordinates `x = W^{1/2} U`, in
//! which the energy is `|x|^2 / 2` and operator norms are spectral norms.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::{self, LinearFit};
use crate::linalg::{self, CMatrix4};
use crate::region::{wellposed, ParameterPoint};
use crate::spectrum::{characteristic_coeffs, modal_block, solve_quartic, ModalBlock};

type CVector4 = Vector4<Complex64>;

/// Amplitudes `(u, v, theta, q)` of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModalState {
    pub u: Complex64,
    pub v: Complex64,
    pub theta: Complex64,
    pub q: Complex64,
}

impl ModalState {
    pub fn new(u: Complex64, v: Complex64, theta: Complex64, q: Complex64) -> Self {
        ModalState { u, v, theta, q }
    }

    pub fn real(u: f64, v: f64, theta: f64, q: f64) -> Self {
        let c = |x| Complex64::new(x, 0.0);
        Self::new(c(u), c(v), c(theta), c(q))
    }

    pub fn zero() -> Self {
        Self::real(0.0, 0.0, 0.0, 0.0)
    }

    fn to_vector(self) -> CVector4 {
        CVector4::new(self.u, self.v, self.theta, self.q)
    }

    fn from_vector(x: &CVector4) -> Self {
        Self::new(x[0], x[1], x[2], x[3])
    }

    pub fn norm(&self) -> f64 {
        self.to_vector().norm()
    }
}

/// Eigenvector-condition threshold above which the matrix exponential is
/// used instead of the eigendecomposition.
pub const EIGEN_COND_LIMIT: f64 = 1e8;

// one per mode, built once; the size difference does not matter
#[allow(clippy::large_enum_variant)]
enum Propagator {
    /// `B = V diag(lambda) V^{-1}` in normalized coordinates.
    Eigen { values: [Complex64; 4], v: CMatrix4, v_inv: CMatrix4 },
    Pade { b: Matrix4<f64> },
}

/// Precomputed exponential of one modal block.
pub struct ModeFlow {
    pub block: ModalBlock,
    prop: Propagator,
    b_inv: CMatrix4,
}

impl ModeFlow {
    pub fn new(point: &ParameterPoint, mu: f64) -> Result<Self> {
        let block = modal_block(point, mu)?;
        let b = block.normalized();
        let b_inv = linalg::inverse4(&linalg::to_complex(&b)).ok_or(Error::SingularBlock)?.0;
        let prop = eigen_propagator(point, &block).unwrap_or(Propagator::Pade { b });
        Ok(ModeFlow { block, prop, b_inv })
    }

    pub fn uses_eigenbasis(&self) -> bool {
        matches!(self.prop, Propagator::Eigen { .. })
    }

    /// `e^{tB}` in normalized coordinates.
    pub fn exp(&self, t: f64) -> CMatrix4 {
        match &self.prop {
            Propagator::Eigen { values, v, v_inv } => {
                let d = CMatrix4::from_diagonal(&CVector4::from_fn(|i, _| (values[i] * t).exp()));
                v * d * v_inv
            }
            Propagator::Pade { b } => linalg::to_complex(&linalg::expm(b, t)),
        }
    }

    /// `e^{tB} B^{-1}`.
    pub fn exp_times_inverse(&self, t: f64) -> CMatrix4 {
        match &self.prop {
            Propagator::Eigen { values, v, v_inv } => {
                let d = CMatrix4::from_diagonal(&CVector4::from_fn(|i, _| (values[i] * t).exp() / values[i]));
                v * d * v_inv
            }
            Propagator::Pade { .. } => self.exp(t) * self.b_inv,
        }
    }

    fn to_normalized(&self, s: &ModalState) -> CVector4 {
        let w = self.block.weight_sqrt();
        CVector4::from_fn(|i, _| s.to_vector()[i] * w[i])
    }

    fn to_state(&self, x: &CVector4) -> ModalState {
        let w = self.block.weight_sqrt();
        ModalState::from_vector(&CVector4::from_fn(|i, _| x[i] / w[i]))
    }

    pub fn evolve(&self, state: &ModalState, t: f64) -> ModalState {
        self.to_state(&(self.exp(t) * self.to_normalized(state)))
    }
}

/// Eigenvectors of `A` in closed form, `(1, l, theta, q)` with
/// `theta = (d l^2 + sigma mu) / mu^alpha` and
/// `q = -mu^{beta/2} theta / (tau l + 1)`, mapped to normalized coordinates.
fn eigen_propagator(point: &ParameterPoint, block: &ModalBlock) -> Option<Propagator> {
    let mu = block.mu;
    let roots = solve_quartic(&characteristic_coeffs(point, mu).ok()?).ok()?;
    let d = point.inertia(mu);
    let ma = mu.powf(point.alpha_f64());
    let mb = mu.powf(point.beta_f64() / 2.0);
    let w = block.weight_sqrt();
    let mut v = CMatrix4::zeros();
    for (j, &l) in roots.roots.iter().enumerate() {
        let theta = (l * l * d + point.sigma * mu) / ma;
        let q = -theta * mb / (l * point.tau + 1.0);
        let col = CVector4::new(Complex64::new(w[0], 0.0), l * w[1], theta * w[2], q * w[3]);
        let n = col.norm();
        if !(n.is_finite() && n > 0.0) {
            return None;
        }
        v.set_column(j, &(col / Complex64::new(n, 0.0)));
    }
    let sv = v.singular_values();
    let cond = sv.max() / sv.min();
    if cond.is_nan() || cond > EIGEN_COND_LIMIT {
        return None;
    }
    let (v_inv, _) = linalg::inverse4(&v)?;
    Some(Propagator::Eigen { values: roots.roots, v, v_inv })
}

/// `e^{t A_mu}` applied to `state`.
pub fn evolve_mode(point: &ParameterPoint, mu: f64, state: &ModalState, t: f64) -> Result<ModalState> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain("t", t, "must be finite and >= 0"));
    }
    Ok(ModeFlow::new(point, mu)?.evolve(state, t))
}

/// `sum_n (sigma mu |u|^2 + (1 + m mu^gamma) |v|^2 + |theta|^2 + tau |q|^2) / 2`.
pub fn energy(point: &ParameterPoint, modes: &[(f64, ModalState)]) -> f64 {
    modes
        .iter()
        .map(|(mu, s)| {
            0.5 * (point.sigma * mu * s.u.norm_sqr()
                + point.inertia(*mu) * s.v.norm_sqr()
                + s.theta.norm_sqr()
                + point.tau * s.q.norm_sqr())
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DissipationCheck {
    /// `|dE/dt + sum |q|^2|` with a central difference for `dE/dt`.
    pub residual: f64,
    /// Set when `h` exceeds `0.1 / max |lambda|`.
    pub step_warning: bool,
}

/// Checks the energy identity `dE/dt = -sum |q|^2` at time `t`.
pub fn dissipation_residual(point: &ParameterPoint, modes: &[(f64, ModalState)], t: f64, h: f64) -> Result<DissipationCheck> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::domain("h", h, "must be > 0"));
    }
    let flows: Vec<ModeFlow> = modes.iter().map(|(mu, _)| ModeFlow::new(point, *mu)).collect::<Result<_>>()?;
    let at = |s: f64| -> Vec<(f64, ModalState)> {
        modes.iter().zip(&flows).map(|((mu, x), f)| (*mu, f.evolve(x, s))).collect()
    };
    let now = at(t);
    let de = (energy(point, &at(t + h)) - energy(point, &at(t - h))) / (2.0 * h);
    let flux: f64 = now.iter().map(|(_, s)| s.q.norm_sqr()).sum();
    let fastest = modes
        .iter()
        .map(|(mu, _)| solve_quartic(&characteristic_coeffs(point, *mu)?).map(|r| r.iter().map(|z| z.norm()).fold(0.0, f64::max)))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(DissipationCheck {
        residual: (de + flux).abs(),
        step_warning: h * fastest > 0.1,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyTrace {
    pub times: Vec<f64>,
    pub energies: Vec<f64>,
    pub q_norms: Vec<f64>,
}

impl EnergyTrace {
    /// Largest increase between consecutive samples (0 for a monotone trace).
    pub fn max_increase(&self) -> f64 {
        self.energies.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }
}

/// Energy and `|q|` of a multi-mode solution at the given times.
pub fn energy_trace(point: &ParameterPoint, modes: &[(f64, ModalState)], times: &[f64]) -> Result<EnergyTrace> {
    let flows: Vec<ModeFlow> = modes.iter().map(|(mu, _)| ModeFlow::new(point, *mu)).collect::<Result<_>>()?;
    let mut energies = Vec::with_capacity(times.len());
    let mut q_norms = Vec::with_capacity(times.len());
    for &t in times {
        let states: Vec<(f64, ModalState)> = modes.iter().zip(&flows).map(|((mu, x), f)| (*mu, f.evolve(x, t))).collect();
        energies.push(energy(point, &states));
        q_norms.push(states.iter().map(|(_, s)| s.q.norm_sqr()).sum::<f64>().sqrt());
    }
    Ok(EnergyTrace {
        times: times.to_vec(),
        energies,
        q_norms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormSample {
    pub t: f64,
    pub norm: f64,
    /// 1-based index of the mode attaining the supremum.
    pub argmax_mode: usize,
}

/// Exponentials of a fixed set of modes, reused across times.
pub struct SemigroupModes {
    flows: Vec<ModeFlow>,
}

impl SemigroupModes {
    pub fn new(point: &ParameterPoint, modes: &[f64]) -> Result<Self> {
        if !wellposed(point) {
            return Err(Error::SingularBlock);
        }
        if modes.is_empty() {
            return Err(Error::domain("modes", "[]", "need at least one mode"));
        }
        let flows = modes.par_iter().map(|&mu| ModeFlow::new(point, mu)).collect::<Result<_>>()?;
        Ok(SemigroupModes { flows })
    }

    pub fn len(&self) -> usize {
        self.flows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flows.is_empty()
    }

    /// `sup_n ||e^{t B_n} B_n^{-1}||`.
    pub fn norm_at(&self, t: f64) -> NormSample {
        let mut best = NormSample { t, norm: f64::NEG_INFINITY, argmax_mode: 1 };
        for (i, f) in self.flows.iter().enumerate() {
            let n = linalg::spectral_norm(&f.exp_times_inverse(t));
            if n > best.norm {
                best.norm = n;
                best.argmax_mode = i + 1;
            }
        }
        best
    }

    pub fn norm_series(&self, times: &[f64]) -> Vec<NormSample> {
        times.par_iter().map(|&t| self.norm_at(t)).collect()
    }
}

/// `sup_n ||e^{t A_n} A_n^{-1}||` in the energy norm over the given modes.
pub fn semigroup_norm(point: &ParameterPoint, t: f64, modes: &[f64]) -> Result<NormSample> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain("t", t, "must be finite and >= 0"));
    }
    Ok(SemigroupModes::new(point, modes)?.norm_at(t))
}

/// Longest run of samples whose maximising mode lies strictly inside the
/// truncation, `2 <= n <= N - 1`; returns its time span.
pub fn certified_window(samples: &[NormSample], mode_count: usize) -> Option<(f64, f64)> {
    let ok = |s: &NormSample| s.argmax_mode >= 2 && s.argmax_mode < mode_count;
    let mut best: Option<(usize, usize)> = None;
    let mut start = None;
    for i in 0..=samples.len() {
        match (i < samples.len() && ok(&samples[i]), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if best.is_none_or(|(a, b)| i - s > b - a + 1) {
                    best = Some((s, i - 1));
                }
                start = None;
            }
            _ => {}
        }
    }
    best.map(|(a, b)| (samples[a].t, samples[b].t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    /// `log value` against `log t`; the slope is `-k` for order `k`.
    pub power: LinearFit,
    /// `log value` against `t`.
    pub exponential: LinearFit,
    /// Set when the exponential model has the smaller residual.
    pub exponential_preferred: bool,
}

pub const MIN_WINDOW_SAMPLES: usize = 5;

/// Fits a decay law to `(t, value)` pairs inside `[lo, hi]`.
pub fn decay_fit(ts: &[f64], values: &[f64], window: (f64, f64)) -> Result<DecayFit> {
    let (lo, hi) = window;
    let (wt, wv): (Vec<f64>, Vec<f64>) = ts
        .iter()
        .zip(values)
        .filter(|(t, v)| **t >= lo && **t <= hi && **v > 0.0)
        .map(|(t, v)| (*t, *v))
        .unzip();
    if wt.len() < MIN_WINDOW_SAMPLES {
        return Err(Error::WindowTooNarrow { lo, hi, got: wt.len(), needed: MIN_WINDOW_SAMPLES });
    }
    let power = fit::log_log(&wt, &wv)?;
    let logs: Vec<f64> = wv.iter().map(|v| v.ln()).collect();
    let exponential = fit::linear(&wt, &logs)?;
    Ok(DecayFit {
        power,
        exponential,
        exponential_preferred: exponential.rms < power.rms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{half, int};
    use crate::grid::logspace;

    fn rk4(a: &Matrix4<f64>, x0: CVector4, t: f64, h: f64) -> CVector4 {
        let a = linalg::to_complex(a);
        let steps = (t / h).round() as usize;
        let mut x = x0;
        for _ in 0..steps {
            let k1 = a * x;
            let k2 = a * (x + k1 * Complex64::new(h / 2.0, 0.0));
            let k3 = a * (x + k2 * Complex64::new(h / 2.0, 0.0));
            let k4 = a * (x + k3 * Complex64::new(h, 0.0));
            x += (k1 + k2 * Complex64::new(2.0, 0.0) + k3 * Complex64::new(2.0, 0.0) + k4) * Complex64::new(h / 6.0, 0.0);
        }
        x
    }

    #[test]
    fn identity_at_zero() {
        let p = ParameterPoint::inertial(half(), int(0), half(), 1.0).unwrap();
        let s = ModalState::real(0.3, -1.0, 2.0, 0.5);
        let e = evolve_mode(&p, 81.0, &s, 0.0).unwrap();
        assert!((e.to_vector() - s.to_vector()).norm() < 1e-12);
    }

    #[test]
    fn matches_rk4() {
        let p = ParameterPoint::from_f64(0.3, 0.6, Some(0.4), 0.8, 1.7, 0.9).unwrap();
        let s = ModalState::real(0.4, -0.2, 1.1, 0.7);
        let mu = 2.7;
        let e = evolve_mode(&p, mu, &s, 1.0).unwrap();
        let a = modal_block(&p, mu).unwrap().matrix;
        let r = rk4(&a, s.to_vector(), 1.0, 1e-4);
        assert!((e.to_vector() - r).norm() < 1e-8 * r.norm());
    }

    #[test]
    fn pade_and_eigen_paths_agree() {
        let p = ParameterPoint::inertial(int(0), int(1), half(), 1.0).unwrap();
        let f = ModeFlow::new(&p, 16.0).unwrap();
        assert!(f.uses_eigenbasis());
        let b = f.block.normalized();
        for t in [0.1, 1.0, 10.0] {
            let e = f.exp(t);
            let pade = linalg::to_complex(&linalg::expm(&b, t));
            assert!((e - pade).norm() < 1e-10);
        }
    }

    #[test]
    fn energy_values() {
        let p = ParameterPoint::inertial(half(), int(0), half(), 1.0).unwrap();
        assert_eq!(energy(&p, &[(4.0, ModalState::zero())]), 0.0);
        assert_eq!(energy(&p, &[(4.0, ModalState::real(0.0, 0.0, 0.0, 1.0))]), 0.5);
        assert_eq!(energy(&p, &[(4.0, ModalState::real(0.0, 1.0, 0.0, 0.0))]), 1.5);
    }

    #[test]
    fn decays_to_zero() {
        let p = ParameterPoint::inertial(half(), int(0), half(), 1.0).unwrap();
        let s = ModalState::real(1.0, 1.0, 1.0, 1.0);
        let e = evolve_mode(&p, 16.0, &s, 2000.0).unwrap();
        assert!(e.norm() < 1e-6 * s.norm());
    }

    #[test]
    fn dissipation_is_second_order() {
        let p = ParameterPoint::from_f64(0.4, 0.5, Some(0.5), 1.0, 2.0, 1.0).unwrap();
        let modes = [(3000.0, ModalState::real(0.01, 0.3, -0.5, 0.8))];
        let a = dissipation_residual(&p, &modes, 0.37, 1e-4).unwrap();
        let b = dissipation_residual(&p, &modes, 0.37, 1e-5).unwrap();
        let ratio = a.residual / b.residual;
        assert!((ratio / 100.0 - 1.0).abs() < 0.2, "{ratio}");
        assert!(!b.step_warning);
        assert!(dissipation_residual(&p, &modes, 0.37, 1.0).unwrap().step_warning);
    }

    #[test]
    fn no_flux_instant() {
        // q = 0 and theta = 0 at t = 0: the flux term and dE/dt both vanish
        let p = ParameterPoint::inertial(half(), int(0), half(), 1.0).unwrap();
        let modes = [(10.0, ModalState::real(1.0, 0.0, 0.0, 0.0))];
        let r = dissipation_residual(&p, &modes, 0.0, 1e-4).unwrap();
        assert!(r.residual < 1e-6, "{}", r.residual);
    }

    #[test]
    fn single_mode_norm_matches_direct_computation() {
        let p = ParameterPoint::inertial(half(), int(0), half(), 1.0).unwrap();
        let s = semigroup_norm(&p, 3.0, &[81.0]).unwrap();
        let b = modal_block(&p, 81.0).unwrap().normalized();
        let direct = linalg::to_complex(&linalg::expm(&b, 3.0)) * linalg::inverse4(&linalg::to_complex(&b)).unwrap().0;
        assert!((s.norm - linalg::spectral_norm_svd(&direct)).abs() < 1e-9 * s.norm);
        assert_eq!(s.argmax_mode, 1);
    }

    #[test]
    fn small_time_limit_is_inverse_norm() {
        let p = ParameterPoint::inertial(half(), int(0), half(), 1.0).unwrap();
        let modes: Vec<f64> = (1..=5).map(|n| (n as f64).powi(4)).collect();
        let at0 = semigroup_norm(&p, 1e-12, &modes).unwrap().norm;
        let inv = modes
            .iter()
            .map(|&mu| {
                let b = modal_block(&p, mu).unwrap().normalized();
                linalg::spectral_norm(&linalg::inverse4(&linalg::to_complex(&b)).unwrap().0)
            })
            .fold(0.0, f64::max);
        assert!((at0 - inv).abs() < 1e-8 * inv);
    }

    #[test]
    fn ill_posed_point_is_rejected() {
        let p = ParameterPoint::noninertial(int(1), half()).unwrap();
        assert_eq!(semigroup_norm(&p, 1.0, &[1.0]).unwrap_err(), Error::SingularBlock);
    }

    #[test]
    fn synthetic_power_law_fit() {
        let t = logspace(1.0, 100.0, 20);
        let v: Vec<f64> = t.iter().map(|t| t.powi(-2)).collect();
        let f = decay_fit(&t, &v, (1.0, 100.0)).unwrap();
        assert!((f.power.slope + 2.0).abs() < 1e-12);
        assert!(!f.exponential_preferred);
        assert!(matches!(decay_fit(&t, &v, (1.0, 1.5)), Err(Error::WindowTooNarrow { .. })));
    }

    #[test]
    fn window_certificate() {
        let mk = |m: &[usize]| -> Vec<NormSample> {
            m.iter().enumerate().map(|(i, &a)| NormSample { t: i as f64, norm: 1.0, argmax_mode: a }).collect()
        };
        assert_eq!(certified_window(&mk(&[1, 3, 4, 5, 1, 2, 10]), 10), Some((1.0, 3.0)));
        assert_eq!(certified_window(&mk(&[1, 1]), 10), None);
    }
}
