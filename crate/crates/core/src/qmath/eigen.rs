//! Eigenvalues of small Hermitian matrices.
//!
//! 2x2 uses the closed form. Larger matrices are embedded as the real
//! symmetric matrix `[[Re, -Im], [Im, Re]]` of twice the size, whose spectrum
//! is the Hermitian spectrum with every eigenvalue doubled, and diagonalized
//! with cyclic Jacobi rotations.

use num_complex::Complex64 as C64;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a Hermitian `dim x dim` matrix stored row-major, ascending.
pub(crate) fn hermitian_eigenvalues(dim: usize, m: &[C64]) -> Vec<f64> {
    debug_assert_eq!(m.len(), dim * dim);
    match dim {
        0 => Vec::new(),
        1 => vec![m[0].re],
        2 => {
            let a = m[0].re;
            let d = m[3].re;
            let b = m[1];
            let mean = 0.5 * (a + d);
            let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![mean - r, mean + r]
        }
        _ => {
            let n = 2 * dim;
            let mut s = vec![0.0; n * n];
            for r in 0..dim {
                for c in 0..dim {
                    let z = m[r * dim + c];
                    s[r * n + c] = z.re;
                    s[(r + dim) * n + (c + dim)] = z.re;
                    s[(r + dim) * n + c] = z.im;
                    s[r * n + (c + dim)] = -z.im;
                }
            }
            let mut all = jacobi_symmetric(n, s);
            all.sort_by(|a, b| a.total_cmp(b));
            // pairs are degenerate; average each pair
            all.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
        }
    }
}

fn jacobi_symmetric(n: usize, mut a: Vec<f64>) -> Vec<f64> {
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q] * a[p * n + q])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}
