//! Small dense kernels for Hermitian systems. Matrices are row-major `Vec`s.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

/// Lower Cholesky factor of a Hermitian positive definite `n x n` matrix.
/// Returns `None` if the matrix is not numerically positive definite.
pub(crate) fn cholesky_hermitian(a: &[Complex64], n: usize) -> Option<Vec<Complex64>> {
    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let mut diag = a[j * n + j].re;
        for k in 0..j {
            diag -= l[j * n + k].norm_sqr();
        }
        if !(diag > 0.0) || !diag.is_finite() {
            return None;
        }
        let djj = libm::sqrt(diag);
        l[j * n + j] = Complex64::new(djj, 0.0);
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / djj;
        }
    }
    Some(l)
}

/// Solves `L y = b` in place for lower-triangular `L`.
pub(crate) fn forward_solve(l: &[Complex64], n: usize, b: &mut [Complex64]) {
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

/// Solves `L^H x = y` in place for lower-triangular `L`.
pub(crate) fn backward_solve_adjoint(l: &[Complex64], n: usize, y: &mut [Complex64]) {
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l[k * n + i].conj() * y[k];
        }
        y[i] = s / l[i * n + i].conj();
    }
}

/// Solves the real symmetric positive definite system `a x = b`.
pub(crate) fn solve_spd(a: &[f64], n: usize, b: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut diag = a[j * n + j];
        for k in 0..j {
            diag -= l[j * n + k] * l[j * n + k];
        }
        if !(diag > 0.0) || !diag.is_finite() {
            return None;
        }
        let djj = libm::sqrt(diag);
        l[j * n + j] = djj;
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / djj;
        }
    }
    let mut x = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            x[i] -= l[i * n + k] * x[k];
        }
        x[i] /= l[i * n + i];
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            x[i] -= l[k * n + i] * x[k];
        }
        x[i] /= l[i * n + i];
    }
    Some(x)
}

/// `a^H b`.
#[inline]
pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter()
        .zip(b)
        .fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y)
}

#[inline]
pub(crate) fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cholesky_solves_hermitian_system() {
        // A = [[4, 1+i], [1-i, 3]]
        let a = [c(4.0, 0.0), c(1.0, 1.0), c(1.0, -1.0), c(3.0, 0.0)];
        let l = cholesky_hermitian(&a, 2).unwrap();
        let x_true = [c(0.5, -1.0), c(2.0, 0.25)];
        let mut b = [
            a[0] * x_true[0] + a[1] * x_true[1],
            a[2] * x_true[0] + a[3] * x_true[1],
        ];
        forward_solve(&l, 2, &mut b);
        backward_solve_adjoint(&l, 2, &mut b);
        for (x, t) in b.iter().zip(&x_true) {
            assert!((x - t).norm() < 1e-12);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = [c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)];
        assert!(cholesky_hermitian(&a, 2).is_none());
        assert!(solve_spd(&[1.0, 2.0, 2.0, 1.0], 2, &[1.0, 1.0]).is_none());
    }

    #[test]
    fn spd_solve() {
        let x = solve_spd(&[2.0, 1.0, 1.0, 3.0], 2, &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-12 && (x[1] - 1.4).abs() < 1e-12);
    }
}
