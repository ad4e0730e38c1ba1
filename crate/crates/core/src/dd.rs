//! Double-double accumulation for polynomial residuals.
//!
//! Modal quartics at large `mu` have roots whose real part is twenty or more
//! orders of magnitude below their modulus. Plain Horner evaluation loses that
//! real part entirely; a double-double Horner pass keeps the residual accurate
//! enough for Newton-type polishing to resolve it.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    pub fn add_f64(self, b: f64) -> Dd {
        let (s, e) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    /// Exact product of two doubles.
    pub fn prod(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }
}

/// Complex value with double-double parts.
#[derive(Debug, Clone, Copy, Default)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// `self * z` with `z` given in plain doubles.
    pub fn mul_c64(self, z: Complex64) -> CDd {
        let re = self.re.mul_f64(z.re).add(self.im.mul_f64(z.im).neg());
        let im = self.re.mul_f64(z.im).add(self.im.mul_f64(z.re));
        CDd { re, im }
    }

    pub fn add_dd(self, x: Dd) -> CDd {
        CDd {
            re: self.re.add(x),
            im: self.im,
        }
    }
}

/// Evaluates a real polynomial with double-double coefficients (highest
/// degree first) at a complex point, accumulating in double-double.
pub fn horner_dd(coeffs: &[Dd], z: Complex64) -> Complex64 {
    let mut acc = CDd::default();
    for &c in coeffs {
        acc = acc.mul_c64(z).add_dd(c);
    }
    acc.to_c64()
}

#[cfg(test)]
fn to_dd(coeffs: &[f64]) -> Vec<Dd> {
    coeffs.iter().map(|&c| Dd::from_f64(c)).collect()
}

/// Plain Horner for the value and first derivative.
pub fn horner_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `sum |c_i| |z|^i`, the natural scale for relative residuals.
pub fn abs_scale(coeffs: &[f64], z: Complex64) -> f64 {
    let r = z.norm();
    coeffs.iter().fold(0.0, |acc, c| acc * r + c.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_recovers_cancelled_terms() {
        // (1e16 + 1) - 1e16 loses the 1 in plain doubles
        let s = Dd::from_f64(1e16).add_f64(1.0).add_f64(-1e16);
        assert_eq!(s.to_f64(), 1.0);
        let p = Dd::from_f64(1.0 + f64::EPSILON).mul_f64(1.0 - f64::EPSILON).add_f64(-1.0);
        assert_eq!(p.to_f64(), -f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn horner_matches_direct_evaluation() {
        let c = [2.0, -3.0, 0.5, 1.0, -4.0];
        let z = Complex64::new(0.3, -1.7);
        let direct: Complex64 = c
            .iter()
            .rev()
            .enumerate()
            .map(|(i, &ci)| ci * z.powi(i as i32))
            .sum();
        assert!((horner_dd(&to_dd(&c), z) - direct).norm() < 1e-12);
        let (p, dp) = horner_with_derivative(&c, z);
        assert!((p - direct).norm() < 1e-12);
        let h = 1e-6;
        let fd = (horner_dd(&to_dd(&c), z + h) - horner_dd(&to_dd(&c), z - h)) / (2.0 * h);
        assert!((dp - fd).norm() < 1e-6);
    }

    #[test]
    fn tiny_real_part_survives() {
        // (x^2 + 2e-20 x + 1e20): roots -1e-20 +- i 1e10
        let c = [1.0, 2e-20, 1e20];
        let z = Complex64::new(-1e-20, 1e10);
        let r = horner_dd(&to_dd(&c), z);
        // exact value: -(1e-20)^2 ... negligible compared with a plain-double residual of ~1e4
        assert!(r.norm() < 1e-6, "{r}");
    }
}
