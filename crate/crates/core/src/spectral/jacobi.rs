//! Cyclic Jacobi eigensolver for dense complex Hermitian matrices.

use num_complex::Complex;
use num_traits::Float;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of the `n × n` Hermitian matrix `a` (row-major).
///
/// Returns eigenvalues in ascending order and the matching eigenvectors as
/// the columns of a row-major unitary matrix.
pub fn hermitian_eigen<F: Float>(a: &[Complex<F>], n: usize) -> (Vec<F>, Vec<Complex<F>>) {
    assert_eq!(a.len(), n * n);
    let mut a = a.to_vec();
    let mut v = identity::<F>(n);
    let two = F::one() + F::one();
    let scale = frobenius(&a).max(F::min_positive_value());
    let threshold = F::epsilon() * scale;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal(&a, n) <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let beta = apq.norm();
                if beta <= F::min_positive_value() {
                    continue;
                }
                let phase = apq / beta; // e^{iφ}
                let alpha = a[p * n + p].re;
                let gamma = a[q * n + q].re;
                let tau = (gamma - alpha) / (two * beta);
                let t = if tau >= F::zero() {
                    F::one() / (tau + (F::one() + tau * tau).sqrt())
                } else {
                    -F::one() / (-tau + (F::one() + tau * tau).sqrt())
                };
                let c = F::one() / (F::one() + t * t).sqrt();
                let s = t * c;
                let conj_phase = phase.conj();
                // G = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on coordinates (p, q)
                let g_pp = Complex::new(c, F::zero());
                let g_pq = Complex::new(s, F::zero());
                let g_qp = conj_phase * (-s);
                let g_qq = conj_phase * c;

                for r in 0..n {
                    let (x, y) = (a[r * n + p], a[r * n + q]);
                    a[r * n + p] = x * g_pp + y * g_qp;
                    a[r * n + q] = x * g_pq + y * g_qq;
                    let (x, y) = (v[r * n + p], v[r * n + q]);
                    v[r * n + p] = x * g_pp + y * g_qp;
                    v[r * n + q] = x * g_pq + y * g_qq;
                }
                for col in 0..n {
                    let (x, y) = (a[p * n + col], a[q * n + col]);
                    a[p * n + col] = g_pp.conj() * x + g_qp.conj() * y;
                    a[q * n + col] = g_pq.conj() * x + g_qq.conj() * y;
                }
                a[p * n + q] = Complex::new(F::zero(), F::zero());
                a[q * n + p] = Complex::new(F::zero(), F::zero());
                a[p * n + p].im = F::zero();
                a[q * n + q].im = F::zero();
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i]
            .re
            .partial_cmp(&a[j * n + j].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut vectors = vec![Complex::new(F::zero(), F::zero()); n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vectors[r * n + new_col] = v[r * n + old_col];
        }
    }
    (values, vectors)
}

pub(crate) fn identity<F: Float>(n: usize) -> Vec<Complex<F>> {
    let mut m = vec![Complex::new(F::zero(), F::zero()); n * n];
    for i in 0..n {
        m[i * n + i] = Complex::new(F::one(), F::zero());
    }
    m
}

pub(crate) fn frobenius<F: Float>(a: &[Complex<F>]) -> F {
    a.iter().fold(F::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

fn off_diagonal<F: Float>(a: &[Complex<F>], n: usize) -> F {
    let mut acc = F::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = acc + a[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn matmul(a: &[C], b: &[C], n: usize) -> Vec<C> {
        let mut out = vec![C::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    out[i * n + j] += a[i * n + k] * b[k * n + j];
                }
            }
        }
        out
    }

    #[test]
    fn diagonalizes_small_hermitian() {
        let n = 3;
        let a = vec![
            C::new(2.0, 0.0),
            C::new(1.0, -1.0),
            C::new(0.0, 0.5),
            C::new(1.0, 1.0),
            C::new(-1.0, 0.0),
            C::new(0.25, 0.0),
            C::new(0.0, -0.5),
            C::new(0.25, 0.0),
            C::new(3.0, 0.0),
        ];
        let (vals, vecs) = hermitian_eigen(&a, n);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let av = matmul(&a, &vecs, n);
        for j in 0..n {
            for i in 0..n {
                let r = av[i * n + j] - vecs[i * n + j] * vals[j];
                assert!(r.norm() < 1e-12, "residual {r}");
            }
        }
        let trace: f64 = vals.iter().sum();
        assert!((trace - 4.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_input_is_untouched() {
        let a = vec![C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(-2.0, 0.0)];
        let (vals, vecs) = hermitian_eigen(&a, 2);
        assert_eq!(vals, vec![-2.0, 1.0]);
        assert_eq!(vecs[1], C::new(1.0, 0.0));
        assert_eq!(vecs[2], C::new(1.0, 0.0));
    }

    #[test]
    fn works_in_single_precision() {
        let a = vec![
            Complex::new(1.0f32, 0.0),
            Complex::new(0.0, 1.0),
            Complex::new(0.0, -1.0),
            Complex::new(1.0, 0.0),
        ];
        let (vals, _) = hermitian_eigen(&a, 2);
        assert!((vals[0] - 0.0).abs() < 1e-6 && (vals[1] - 2.0).abs() < 1e-6);
    }
}
