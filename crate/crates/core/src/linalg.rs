//! Small dense kernels: 4x4 complex inverse, weighted operator norms,
//! companion-matrix roots and the matrix exponential.

use nalgebra::{DMatrix, Matrix4, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix4 = Matrix4<Complex64>;

fn det2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    a * d - b * c
}

/// Inverse by cofactors, followed by one step of iterative refinement
/// `X <- X + X (I - M X)`. Returns `None` when the determinant is zero or
/// not finite.
pub fn inverse4(m: &CMatrix4) -> Option<(CMatrix4, Complex64)> {
    let a = |i: usize, j: usize| m[(i, j)];
    // 2x2 minors of the top two rows (s) and the bottom two rows (c)
    let s0 = det2(a(0, 0), a(0, 1), a(1, 0), a(1, 1));
    let s1 = det2(a(0, 0), a(0, 2), a(1, 0), a(1, 2));
    let s2 = det2(a(0, 0), a(0, 3), a(1, 0), a(1, 3));
    let s3 = det2(a(0, 1), a(0, 2), a(1, 1), a(1, 2));
    let s4 = det2(a(0, 1), a(0, 3), a(1, 1), a(1, 3));
    let s5 = det2(a(0, 2), a(0, 3), a(1, 2), a(1, 3));
    let c5 = det2(a(2, 2), a(2, 3), a(3, 2), a(3, 3));
    let c4 = det2(a(2, 1), a(2, 3), a(3, 1), a(3, 3));
    let c3 = det2(a(2, 1), a(2, 2), a(3, 1), a(3, 2));
    let c2 = det2(a(2, 0), a(2, 3), a(3, 0), a(3, 3));
    let c1 = det2(a(2, 0), a(2, 2), a(3, 0), a(3, 2));
    let c0 = det2(a(2, 0), a(2, 1), a(3, 0), a(3, 1));
    let det = s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
    if det.norm() == 0.0 || !det.re.is_finite() || !det.im.is_finite() {
        return None;
    }
    let inv = det.inv();
    let mut x = CMatrix4::zeros();
    x[(0, 0)] = (a(1, 1) * c5 - a(1, 2) * c4 + a(1, 3) * c3) * inv;
    x[(0, 1)] = (-a(0, 1) * c5 + a(0, 2) * c4 - a(0, 3) * c3) * inv;
    x[(0, 2)] = (a(3, 1) * s5 - a(3, 2) * s4 + a(3, 3) * s3) * inv;
    x[(0, 3)] = (-a(2, 1) * s5 + a(2, 2) * s4 - a(2, 3) * s3) * inv;
    x[(1, 0)] = (-a(1, 0) * c5 + a(1, 2) * c2 - a(1, 3) * c1) * inv;
    x[(1, 1)] = (a(0, 0) * c5 - a(0, 2) * c2 + a(0, 3) * c1) * inv;
    x[(1, 2)] = (-a(3, 0) * s5 + a(3, 2) * s2 - a(3, 3) * s1) * inv;
    x[(1, 3)] = (a(2, 0) * s5 - a(2, 2) * s2 + a(2, 3) * s1) * inv;
    x[(2, 0)] = (a(1, 0) * c4 - a(1, 1) * c2 + a(1, 3) * c0) * inv;
    x[(2, 1)] = (-a(0, 0) * c4 + a(0, 1) * c2 - a(0, 3) * c0) * inv;
    x[(2, 2)] = (a(3, 0) * s4 - a(3, 1) * s2 + a(3, 3) * s0) * inv;
    x[(2, 3)] = (-a(2, 0) * s4 + a(2, 1) * s2 - a(2, 3) * s0) * inv;
    x[(3, 0)] = (-a(1, 0) * c3 + a(1, 1) * c1 - a(1, 2) * c0) * inv;
    x[(3, 1)] = (a(0, 0) * c3 - a(0, 1) * c1 + a(0, 2) * c0) * inv;
    x[(3, 2)] = (-a(3, 0) * s3 + a(3, 1) * s1 - a(3, 2) * s0) * inv;
    x[(3, 3)] = (a(2, 0) * s3 - a(2, 1) * s1 + a(2, 2) * s0) * inv;

    let residual = CMatrix4::identity() - m * x;
    let x = x + x * residual;
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return None;
    }
    Some((x, det))
}

/// Maximum absolute column sum.
pub fn norm1(m: &CMatrix4) -> f64 {
    (0..4)
        .map(|j| (0..4).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest singular value as the square root of the dominant eigenvalue of
/// the Hermitian product `M^H M`.
pub fn spectral_norm(m: &CMatrix4) -> f64 {
    // scaling keeps the squared entries away from overflow and underflow
    let scale = m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    if scale == 0.0 {
        return 0.0;
    }
    let ms = m.map(|z| z / scale);
    let h = ms.adjoint() * ms;
    let eig = SymmetricEigen::new(h);
    let top = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b));
    scale * top.max(0.0).sqrt()
}

/// Largest singular value via a direct SVD; second path for cross-checks.
pub fn spectral_norm_svd(m: &CMatrix4) -> f64 {
    m.singular_values().iter().fold(0.0f64, |a, &b| a.max(b))
}

pub fn to_complex(m: &Matrix4<f64>) -> CMatrix4 {
    m.map(|x| Complex64::new(x, 0.0))
}

/// `e^{tA}` by scaling and squaring with a Pade approximant.
pub fn expm(a: &Matrix4<f64>, t: f64) -> Matrix4<f64> {
    (a * t).exp()
}

/// Parlett-Reinsch balancing by powers of two, in place.
fn balance(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    let radix = 2.0f64;
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let c: f64 = (0..n).filter(|&j| j != i).map(|j| m[(j, i)].abs()).sum();
            let r: f64 = (0..n).filter(|&j| j != i).map(|j| m[(i, j)].abs()).sum();
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut cc = c;
            let g = r / radix;
            while cc < g {
                f *= radix;
                cc *= radix * radix;
            }
            let g = r * radix;
            while cc > g {
                f /= radix;
                cc /= radix * radix;
            }
            if (cc + r / f) / f < 0.95 * s {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// Roots of a real polynomial (highest degree first) as eigenvalues of its
/// balanced companion matrix. Independent of the closed-form solver.
pub fn companion_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let lead = coeffs[0];
    let n = coeffs.len() - 1;
    let mut c = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        c[(0, j)] = -coeffs[j + 1] / lead;
    }
    for i in 1..n {
        c[(i, i - 1)] = 1.0;
    }
    balance(&mut c);
    c.complex_eigenvalues().iter().copied().collect()
}

/// Eigenvalues of a real 4x4 matrix.
pub fn eigenvalues4(m: &Matrix4<f64>) -> [Complex64; 4] {
    let e = m.complex_eigenvalues();
    [e[0], e[1], e[2], e[3]]
}
