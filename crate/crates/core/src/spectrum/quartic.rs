//! Closed-form cubic and quartic roots with double-double polishing.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::dd::{abs_scale, horner_dd, horner_with_derivative, Dd};
use crate::error::{Error, Result};

/// Coefficients of `c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0`.
///
/// Coefficients assembled from several terms may carry the rounding error
/// of that assembly in `tail` (so that `c_i + tail_i` is the value to about
/// 32 digits); root polishing uses the full value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuarticCoeffs {
    pub c4: f64,
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
    #[serde(skip)]
    tail: [f64; 5],
}

impl QuarticCoeffs {
    pub fn new(c4: f64, c3: f64, c2: f64, c1: f64, c0: f64) -> Self {
        QuarticCoeffs { c4, c3, c2, c1, c0, tail: [0.0; 5] }
    }

    /// From double-double values, highest degree first.
    pub(crate) fn from_dd(c: [Dd; 5]) -> Self {
        let hi = c.map(|x| x.to_f64());
        let tail = [0, 1, 2, 3, 4].map(|i| (c[i].hi - hi[i]) + c[i].lo);
        QuarticCoeffs { c4: hi[0], c3: hi[1], c2: hi[2], c1: hi[3], c0: hi[4], tail }
    }

    fn to_dd(self) -> [Dd; 5] {
        let hi = self.to_array();
        [0, 1, 2, 3, 4].map(|i| Dd::from_f64(hi[i]).add_f64(self.tail[i]))
    }

    /// Highest degree first.
    pub fn to_array(&self) -> [f64; 5] {
        [self.c4, self.c3, self.c2, self.c1, self.c0]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner_dd(&self.to_dd(), z)
    }

    /// `|f(z)| / sum |c_i| |z|^i`.
    pub fn backward_error(&self, z: Complex64) -> f64 {
        let scale = abs_scale(&self.to_array(), z);
        if scale == 0.0 {
            return 0.0;
        }
        self.eval(z).norm() / scale
    }
}

/// Four roots, with multiplicity, sorted by decreasing imaginary part and
/// then decreasing real part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootSet {
    pub roots: [Complex64; 4],
}

impl RootSet {
    fn sorted(mut roots: [Complex64; 4]) -> Self {
        roots.sort_by(|a, b| b.im.total_cmp(&a.im).then(b.re.total_cmp(&a.re)));
        RootSet { roots }
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.roots.iter()
    }

    pub fn max_real_part(&self) -> f64 {
        self.roots.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Root in the closed upper half plane nearest to the imaginary axis.
    pub fn critical(&self) -> Option<Complex64> {
        self.roots
            .iter()
            .filter(|z| z.im > 0.0)
            .copied()
            .min_by(|a, b| a.re.abs().total_cmp(&b.re.abs()))
    }
}

/// Roots of a real cubic `a x^3 + b x^2 + c x + d` (`a != 0`), real roots
/// first in ascending order, each real root refined by Newton steps.
pub fn solve_cubic(a: f64, b: f64, c: f64, d: f64) -> [Complex64; 3] {
    let (ca, cb, cc) = (b / a, c / a, d / a);
    let q = (ca * ca - 3.0 * cb) / 9.0;
    let r = (2.0 * ca * ca * ca - 9.0 * ca * cb + 27.0 * cc) / 54.0;
    let shift = ca / 3.0;
    let poly = [1.0, ca, cb, cc];
    let refine = |mut x: f64| {
        for _ in 0..4 {
            let (p, dp) = horner_with_derivative(&poly, Complex64::new(x, 0.0));
            if dp.re == 0.0 {
                break;
            }
            let step = p.re / dp.re;
            if !step.is_finite() {
                break;
            }
            x -= step;
        }
        x
    };
    let q3 = q * q * q;
    if r * r < q3 {
        let theta = (r / q3.sqrt()).clamp(-1.0, 1.0).acos();
        let sq = -2.0 * q.sqrt();
        let mut xs = [
            refine(sq * (theta / 3.0).cos() - shift),
            refine(sq * ((theta + 2.0 * PI) / 3.0).cos() - shift),
            refine(sq * ((theta - 2.0 * PI) / 3.0).cos() - shift),
        ];
        xs.sort_by(f64::total_cmp);
        xs.map(|x| Complex64::new(x, 0.0))
    } else {
        let s = -r.signum() * (r.abs() + (r * r - q3).sqrt()).cbrt();
        let t = if s == 0.0 { 0.0 } else { q / s };
        let x1 = refine(s + t - shift);
        let re = -(s + t) / 2.0 - shift;
        let im = 3f64.sqrt() / 2.0 * (s - t);
        [
            Complex64::new(x1, 0.0),
            Complex64::new(re, im.abs()),
            Complex64::new(re, -im.abs()),
        ]
    }
}

fn quadratic_roots(b: Complex64, c: Complex64) -> [Complex64; 2] {
    // y^2 + b y + c = 0, cancellation-free branch choice
    let disc = (b * b - 4.0 * c).sqrt();
    let t = if (b.conj() * disc).re >= 0.0 { -(b + disc) / 2.0 } else { -(b - disc) / 2.0 };
    if t.norm() == 0.0 {
        [t, t]
    } else {
        [t, c / t]
    }
}

/// Ferrari's method on the monic quartic `x^4 + a3 x^3 + a2 x^2 + a1 x + a0`.
fn ferrari_monic(a3: f64, a2: f64, a1: f64, a0: f64) -> [Complex64; 4] {
    let s = a3 / 4.0;
    let a3s = a3 * a3;
    let p = a2 - 3.0 * a3s / 8.0;
    let q = a1 - a3 * a2 / 2.0 + a3s * a3 / 8.0;
    let r = a0 - a3 * a1 / 4.0 + a3s * a2 / 16.0 - 3.0 * a3s * a3s / 256.0;

    let ys: [Complex64; 4] = if q.abs() <= f64::EPSILON * (p.abs() + r.abs().sqrt() + 1.0) * 1e-3 {
        // biquadratic
        let [z1, z2] = quadratic_roots(Complex64::new(p, 0.0), Complex64::new(r, 0.0));
        [z1.sqrt(), -z1.sqrt(), z2.sqrt(), -z2.sqrt()]
    } else {
        // resolvent cubic 8m^3 - 4p m^2 - 8r m + (4pr - q^2) = 0; any root
        // with 2m - p != 0 factors the quartic, the one with the largest
        // |2m - p| is the best conditioned
        let ms = solve_cubic(8.0, -4.0 * p, -8.0 * r, 4.0 * p * r - q * q);
        let m = ms
            .into_iter()
            .max_by(|x, y| (2.0 * x - p).norm().total_cmp(&(2.0 * y - p).norm()))
            .expect("three candidates");
        let w = (2.0 * m - p).sqrt();
        let half_q_over_w = Complex64::new(q, 0.0) / (2.0 * w);
        let [y1, y2] = quadratic_roots(-w, m + half_q_over_w);
        let [y3, y4] = quadratic_roots(w, m - half_q_over_w);
        [y1, y2, y3, y4]
    };
    ys.map(|y| y - s)
}

/// Initial guesses on circles whose radii follow the upper convex hull of
/// `(i, log|c_i|)`; used when the closed form returns non-finite values.
fn newton_polygon_guesses(c: &[f64; 5]) -> [Complex64; 4] {
    // c is highest degree first; work with degree index k = 4 - idx
    let pts: Vec<(f64, f64)> = (0..5)
        .filter(|&k| c[4 - k] != 0.0)
        .map(|k| (k as f64, c[4 - k].abs().ln()))
        .collect();
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(4);
    let mut offset = 0.0;
    for w in hull.windows(2) {
        let (k0, l0) = w[0];
        let (k1, l1) = w[1];
        let count = (k1 - k0) as usize;
        let radius = ((l0 - l1) / (k1 - k0)).exp();
        for j in 0..count {
            let angle = 2.0 * PI * j as f64 / count as f64 + PI / 2.0 / 4.0 + offset;
            out.push(Complex64::from_polar(radius, angle));
        }
        offset += 0.4;
    }
    while out.len() < 4 {
        out.push(Complex64::from_polar(1.0, 0.7 * out.len() as f64 + 0.3));
    }
    [out[0], out[1], out[2], out[3]]
}

const POLISH_MAX_ITERS: usize = 80;

/// Simultaneous Aberth-Ehrlich refinement with double-double residuals.
/// Returns whether every root met the per-component step criterion.
fn polish(exact: &[Dd; 5], coeffs: &[f64; 5], roots: &mut [Complex64; 4]) -> bool {
    let eps = f64::EPSILON;
    let mut done = [false; 4];
    for _ in 0..POLISH_MAX_ITERS {
        for i in 0..4 {
            if done[i] {
                continue;
            }
            let z = roots[i];
            let f = horner_dd(exact, z);
            if f == Complex64::new(0.0, 0.0) {
                done[i] = true;
                continue;
            }
            let (_, df) = horner_with_derivative(coeffs, z);
            let newton = f / df;
            let repulsion: Complex64 = (0..4)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z - roots[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                done[i] = true;
                continue;
            }
            roots[i] = z - step;
            let floor = eps * eps * z.norm();
            let re_ok = step.re.abs() <= 1e-15 * z.re.abs() + floor;
            let im_ok = step.im.abs() <= 1e-15 * z.im.abs() + floor;
            done[i] = re_ok && im_ok;
        }
        if done.iter().all(|&d| d) {
            return true;
        }
    }
    false
}

/// Enforces exact conjugate symmetry for real coefficients: near-conjugate
/// pairs are averaged, unpaired roots are real.
fn symmetrize(roots: &mut [Complex64; 4]) {
    let mut paired = [false; 4];
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| roots[b].im.total_cmp(&roots[a].im));
    for &i in &order {
        if paired[i] || roots[i].im <= 0.0 {
            continue;
        }
        let zi = roots[i];
        let partner = (0..4)
            .filter(|&j| j != i && !paired[j] && roots[j].im <= 0.0)
            .min_by(|&a, &b| (zi - roots[a].conj()).norm().total_cmp(&(zi - roots[b].conj()).norm()));
        if let Some(j) = partner {
            let gap = (zi - roots[j].conj()).norm();
            if gap <= 1e-6 * zi.norm().max(roots[j].norm()) {
                let avg = Complex64::new((zi.re + roots[j].re) / 2.0, (zi.im - roots[j].im) / 2.0);
                roots[i] = avg;
                roots[j] = avg.conj();
                paired[i] = true;
                paired[j] = true;
            }
        }
    }
    for i in 0..4 {
        if !paired[i] {
            roots[i].im = 0.0;
        }
    }
}

/// Roots of a real quartic.
///
/// The quartic is rescaled to unit root-magnitude product, solved by
/// Ferrari's method, and then polished on the original coefficients with
/// Aberth steps whose residuals are accumulated in double-double. That last
/// step is what resolves real parts many orders of magnitude below the root
/// modulus.
pub fn solve_quartic(coeffs: &QuarticCoeffs) -> Result<RootSet> {
    let c = coeffs.to_array();
    let cd = coeffs.to_dd();
    if c.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("coefficients", format!("{c:?}"), "must be finite"));
    }
    let scale = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let threshold = f64::EPSILON.powi(4) * scale;
    if coeffs.c4 == 0.0 || coeffs.c4.abs() < threshold {
        return Err(Error::DegenerateLeading { c4: coeffs.c4, scale });
    }

    // strip exact zero roots
    let zeros = c.iter().rev().take_while(|&&x| x == 0.0).count().min(4);
    let mut roots = [Complex64::new(0.0, 0.0); 4];
    match zeros {
        0 => {
            let s = (coeffs.c0 / coeffs.c4).abs().powf(0.25);
            let a3 = coeffs.c3 / (coeffs.c4 * s);
            let a2 = coeffs.c2 / (coeffs.c4 * s * s);
            let a1 = coeffs.c1 / (coeffs.c4 * s * s * s);
            let a0 = coeffs.c0 / (coeffs.c4 * s * s * s * s);
            let guess = ferrari_monic(a3, a2, a1, a0).map(|z| z * s);
            roots = if guess.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                guess
            } else {
                newton_polygon_guesses(&c)
            };
            if !polish(&cd, &c, &mut roots) {
                let mut retry = newton_polygon_guesses(&c);
                polish(&cd, &c, &mut retry);
                let worst = |r: &[Complex64; 4]| r.iter().map(|z| coeffs.backward_error(*z)).fold(0.0, f64::max);
                if worst(&retry) < worst(&roots) {
                    roots = retry;
                }
            }
        }
        1 => {
            let cubic = solve_cubic(coeffs.c4, coeffs.c3, coeffs.c2, coeffs.c1);
            roots[..3].copy_from_slice(&cubic);
            let mut all = roots;
            polish(&cd, &c, &mut all);
            roots = all;
            roots[3] = Complex64::new(0.0, 0.0);
        }
        2 => {
            let [r1, r2] = quadratic_roots(
                Complex64::new(coeffs.c3 / coeffs.c4, 0.0),
                Complex64::new(coeffs.c2 / coeffs.c4, 0.0),
            );
            roots[0] = r1;
            roots[1] = r2;
        }
        3 => roots[0] = Complex64::new(-coeffs.c3 / coeffs.c4, 0.0),
        _ => {}
    }
    symmetrize(&mut roots);
    Ok(RootSet::sorted(roots))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    fn contains(set: &RootSet, z: Complex64, tol: f64) -> bool {
        set.iter().any(|r| close(*r, z, tol))
    }

    #[test]
    fn fourth_roots_of_unity() {
        let r = solve_quartic(&QuarticCoeffs::new(1.0, 0.0, 0.0, 0.0, -1.0)).unwrap();
        for z in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            assert!(contains(&r, Complex64::new(z.0, z.1), 1e-12), "{r:?}");
        }
    }

    #[test]
    fn quadruple_root() {
        let c = QuarticCoeffs::new(1.0, 4.0, 6.0, 4.0, 1.0);
        let r = solve_quartic(&c).unwrap();
        for z in r.iter() {
            assert!((z + 1.0).norm() < 1e-3, "{r:?}");
            assert!(c.backward_error(*z) <= 1e-10);
        }
    }

    #[test]
    fn cubic_reference_values() {
        let js = solve_cubic(1.0, 29.0, 115.0, -81.0);
        assert!((js[0].re + 24.0858).abs() < 1e-4);
        assert!((js[1].re + 5.52312).abs() < 1e-4);
        assert!((js[2].re - 0.608892).abs() < 1e-4);
        let r = solve_cubic(1.0, 0.0, 0.0, -8.0);
        assert!((r[0] - Complex64::new(2.0, 0.0)).norm() < 1e-14);
        assert!((r[1] - Complex64::new(-1.0, 3f64.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn zero_roots_are_stripped() {
        let r = solve_quartic(&QuarticCoeffs::new(1.0, -3.0, 2.0, 0.0, 0.0)).unwrap();
        for z in [0.0, 0.0, 1.0, 2.0] {
            assert!(contains(&r, Complex64::new(z, 0.0), 1e-12), "{r:?}");
        }
    }

    #[test]
    fn degenerate_leading_coefficient() {
        assert!(matches!(
            solve_quartic(&QuarticCoeffs::new(0.0, 1.0, 1.0, 1.0, 1.0)),
            Err(Error::DegenerateLeading { .. })
        ));
        assert!(solve_quartic(&QuarticCoeffs::new(1e-70, 1.0, 1.0, 1.0, 1.0)).is_err());
        assert!(solve_quartic(&QuarticCoeffs::new(1.0, f64::NAN, 1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn conjugate_closed_output() {
        let r = solve_quartic(&QuarticCoeffs::new(1.0, 1.0, 4.0, 3.0, 2.0)).unwrap();
        for z in r.iter() {
            assert!(r.iter().any(|w| *w == z.conj()));
        }
    }

    #[test]
    fn widely_separated_roots() {
        // (x^2 + 1e-10 x + 1e20)(x^2 + x + 1)
        let (p1, q1, p2, q2) = (1e-10, 1e20, 1.0, 1.0);
        let c = QuarticCoeffs::new(1.0, p1 + p2, q1 + q2 + p1 * p2, p1 * q2 + p2 * q1, q1 * q2);
        let r = solve_quartic(&c).unwrap();
        let crit = r.critical().unwrap();
        assert!((crit.re + 0.5e-10).abs() < 1e-16, "{crit}");
        assert!((crit.im - 1e10).abs() < 1e-4);
        assert!(contains(&r, Complex64::new(-0.5, 3f64.sqrt() / 2.0), 1e-12));
    }
}
