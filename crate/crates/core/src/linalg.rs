//! 2x2 matrix algebra with real spectrum and a tridiagonal solver.

use crate::error::{Error, Result};

/// Row-major 2x2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub const fn diag(x: f64, y: f64) -> Self {
        Mat2::new(x, 0.0, 0.0, y)
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn apply(&self, x: [f64; 2]) -> [f64; 2] {
        [self.a * x[0] + self.b * x[1], self.c * x[0] + self.d * x[1]]
    }

    pub fn to_array(&self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    /// Eigenvalues `(larger, smaller)` when `bc >= 0` (real spectrum).
    ///
    /// The root with the larger magnitude is formed first and the other one
    /// recovered from the determinant, which avoids cancellation.
    pub fn real_eigenvalues(&self) -> (f64, f64) {
        let t = self.trace();
        let s = self.discriminant_sqrt();
        if t < 0.0 {
            let small = 0.5 * (t - s);
            (self.det() / small, small)
        } else if t > 0.0 {
            let large = 0.5 * (t + s);
            (large, self.det() / large)
        } else {
            (0.5 * s, -0.5 * s)
        }
    }

    /// `sqrt((a - d)^2 + 4 bc)`, the eigenvalue gap.
    pub fn discriminant_sqrt(&self) -> f64 {
        let diff = self.a - self.d;
        (diff * diff + 4.0 * self.b * self.c).sqrt()
    }

    /// `exp(M t) = exp(mu1 t) * scaled_exp(t)` for matrices with distinct real
    /// eigenvalues; returns `(mu1, scaled_exp(t))`.
    ///
    /// The scaled factor `P1 + exp(-(mu1 - mu2) t) P2` is built from the spectral
    /// projectors and stays O(1) however large `|mu1| t` gets.
    pub fn scaled_exp(&self, t: f64) -> (f64, Mat2) {
        let (mu1, mu2) = self.real_eigenvalues();
        let gap = self.discriminant_sqrt();
        if gap == 0.0 {
            // M = mu I + N with N nilpotent; exp(Mt) = e^{mu t} (I + N t)
            let n = Mat2::new(self.a - mu1, self.b, self.c, self.d - mu1);
            return (
                mu1,
                Mat2::new(1.0 + n.a * t, n.b * t, n.c * t, 1.0 + n.d * t),
            );
        }
        // P1 = (M - mu2 I) / gap, P2 = (mu1 I - M) / gap; the blend
        // P1 + e P2 = I*(..) written entrywise with w = 1 - e = -expm1(-gap t).
        let w = -(-gap * t).exp_m1();
        let e = 1.0 - w;
        let scaled = Mat2::new(
            ((self.a - mu2) + e * (mu1 - self.a)) / gap,
            self.b * w / gap,
            self.c * w / gap,
            ((self.d - mu2) + e * (mu1 - self.d)) / gap,
        );
        (mu1, scaled)
    }

    /// Full matrix exponential `exp(M t)`.
    pub fn exp(&self, t: f64) -> Mat2 {
        let (mu1, s) = self.scaled_exp(t);
        let k = (mu1 * t).exp();
        Mat2::new(k * s.a, k * s.b, k * s.c, k * s.d)
    }

    /// Perron root and unit-sum positive eigenvector of an entrywise
    /// non-negative matrix with positive off-diagonal entries.
    pub fn perron(&self) -> (f64, [f64; 2]) {
        let half = 0.5 * (self.a - self.d);
        let root = (half * half + self.b * self.c).sqrt();
        let r = 0.5 * (self.a + self.d) + root;
        // (M - rI) x = 0  =>  x = (b, r - a); r - a = root - half >= 0
        let gap = if half > 0.0 {
            self.b * self.c / (root + half)
        } else {
            root - half
        };
        let (x0, x1) = (self.b, gap);
        let s = x0 + x1;
        (r, [x0 / s, x1 / s])
    }
}

/// Solves a tridiagonal system in place with the Thomas algorithm.
///
/// `lower[i]` multiplies `x[i-1]` in row `i` (`lower[0]` unused), `upper[i]`
/// multiplies `x[i+1]` (`upper[n-1]` unused). `rhs` is overwritten with the
/// solution; `scratch` must have the same length.
pub fn solve_tridiagonal(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &mut [f64],
    scratch: &mut [f64],
) -> Result<()> {
    let n = diag.len();
    debug_assert!(lower.len() == n && upper.len() == n && rhs.len() == n && scratch.len() == n);
    if n == 0 {
        return Ok(());
    }
    let mut beta = diag[0];
    if beta == 0.0 || !beta.is_finite() {
        return Err(Error::Internal(
            "singular tridiagonal pivot at row 0".into(),
        ));
    }
    rhs[0] /= beta;
    for i in 1..n {
        scratch[i] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * scratch[i];
        if beta == 0.0 || !beta.is_finite() {
            return Err(Error::Internal(format!(
                "singular tridiagonal pivot at row {i}"
            )));
        }
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= scratch[i + 1] * rhs[i + 1];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series_exp(m: &Mat2, t: f64) -> Mat2 {
        // scaling and squaring with a long Taylor series
        let s = 20;
        let h = t / f64::from(1u32 << s);
        let mut term = Mat2::diag(1.0, 1.0);
        let mut acc = Mat2::diag(1.0, 1.0);
        let mh = Mat2::new(m.a * h, m.b * h, m.c * h, m.d * h);
        for k in 1..20 {
            term = term.mul(&mh);
            let inv = 1.0 / k as f64;
            term = Mat2::new(term.a * inv, term.b * inv, term.c * inv, term.d * inv);
            acc = Mat2::new(
                acc.a + term.a,
                acc.b + term.b,
                acc.c + term.c,
                acc.d + term.d,
            );
        }
        for _ in 0..s {
            acc = acc.mul(&acc);
        }
        acc
    }

    #[test]
    fn eigenvalues_of_homogeneous_matrix() {
        let b0 = Mat2::new(-0.3, 0.5, 0.1, -0.1);
        let (l1, l2) = b0.real_eigenvalues();
        let expected = (-0.4 + 0.24f64.sqrt()) / 2.0;
        assert!((l1 - expected).abs() < 1e-15);
        assert!((l2 - (-0.4 - 0.24f64.sqrt()) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn exp_matches_series() {
        let m = Mat2::new(-0.36, 0.5, 0.1, -0.35);
        let a = m.exp(5.0);
        let b = series_exp(&m, 5.0);
        for (x, y) in a
            .to_array()
            .iter()
            .flatten()
            .zip(b.to_array().iter().flatten())
        {
            assert!((x - y).abs() < 1e-10 * y.abs().max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn exp_of_zero_gap() {
        let m = Mat2::new(-1.0, 0.0, 0.0, -1.0);
        let e = m.exp(2.0);
        assert!((e.a - (-2.0f64).exp()).abs() < 1e-16);
        assert_eq!(e.b, 0.0);
    }

    #[test]
    fn perron_vector_is_eigenvector() {
        let m = Mat2::new(0.4, 0.3, 0.02, 0.9);
        let (r, x) = m.perron();
        let y = m.apply(x);
        assert!(x[0] > 0.0 && x[1] > 0.0);
        assert!((y[0] - r * x[0]).abs() < 1e-15);
        assert!((y[1] - r * x[1]).abs() < 1e-15);
    }

    #[test]
    fn thomas_solves_poisson() {
        let n = 50;
        let lower = vec![-1.0; n];
        let diag = vec![2.0; n];
        let upper = vec![-1.0; n];
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).sin()).collect();
        let mut rhs: Vec<f64> = (0..n)
            .map(|i| {
                let l = if i > 0 { x_true[i - 1] } else { 0.0 };
                let u = if i + 1 < n { x_true[i + 1] } else { 0.0 };
                2.0 * x_true[i] - l - u
            })
            .collect();
        let mut scratch = vec![0.0; n];
        solve_tridiagonal(&lower, &diag, &upper, &mut rhs, &mut scratch).unwrap();
        for (a, b) in rhs.iter().zip(&x_true) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_pivot_is_reported() {
        let mut rhs = vec![1.0, 1.0];
        let mut s = vec![0.0; 2];
        let r = solve_tridiagonal(&[0.0, 1.0], &[0.0, 1.0], &[1.0, 0.0], &mut rhs, &mut s);
        assert!(matches!(r, Err(Error::Internal(_))));
    }
}
