// SPDX-License-Identifier: Apache-2.0

//! Cyclic Jacobi diagonalization for small dense symmetric matrices.

/// Result of [`symmetric_eigen`]: eigenvalues in ascending order and the
/// matching eigenvectors stored as rows (`vectors[k]` belongs to
/// `values[k]`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricEigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: [[f64; N]; N],
}

const MAX_SWEEPS: usize = 64;

fn off_diagonal_norm<const N: usize>(a: &[[f64; N]; N]) -> f64 {
    let mut s = 0.0;
    for p in 0..N {
        for q in (p + 1)..N {
            s += a[p][q] * a[p][q];
        }
    }
    (2.0 * s).sqrt()
}

fn frobenius<const N: usize>(a: &[[f64; N]; N]) -> f64 {
    a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

/// Diagonalizes a real symmetric matrix by cyclic sweeps of plane rotations.
///
/// Only the upper triangle is read. The rotation angle follows the
/// symmetric Schur decomposition, choosing the smaller root of
/// `t² + 2τt − 1 = 0` so every rotation is at most π/4.
pub fn symmetric_eigen<const N: usize>(matrix: &[[f64; N]; N]) -> SymmetricEigen<N> {
    let mut a = *matrix;
    for p in 0..N {
        for q in 0..p {
            a[p][q] = a[q][p];
        }
    }
    let mut v = [[0.0; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    let scale = frobenius(&a);
    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) <= f64::EPSILON * scale * 1e-2 {
                break;
            }
            for p in 0..N {
                for q in (p + 1)..N {
                    let apq = a[p][q];
                    if apq == 0.0 {
                        continue;
                    }
                    let tau = (a[q][q] - a[p][p]) / (2.0 * apq);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;

                    // A <- J^T A J on rows/columns p and q.
                    for k in 0..N {
                        let akp = a[k][p];
                        let akq = a[k][q];
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..N {
                        let apk = a[p][k];
                        let aqk = a[q][k];
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                    a[p][q] = 0.0;
                    a[q][p] = 0.0;

                    for row in v.iter_mut() {
                        let vp = row[p];
                        let vq = row[q];
                        row[p] = c * vp - s * vq;
                        row[q] = s * vp + c * vq;
                    }
                }
            }
        }
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = std::array::from_fn(|k| a[order[k]][order[k]]);
    // Columns of v are eigenvectors; emit them as rows.
    let vectors = std::array::from_fn(|k| std::array::from_fn(|i| v[i][order[k]]));
    SymmetricEigen { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual<const N: usize>(m: &[[f64; N]; N], e: &SymmetricEigen<N>) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..N {
            for i in 0..N {
                let mv: f64 = (0..N).map(|j| m[i][j] * e.vectors[k][j]).sum();
                worst = worst.max((mv - e.values[k] * e.vectors[k][i]).abs());
            }
        }
        worst
    }

    #[test]
    fn diagonal_input_is_returned_sorted() {
        let m = [
            [3.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 4.0, 0.0],
            [0.0, 0.0, 0.0, 2.0],
        ];
        let e = symmetric_eigen(&m);
        assert_eq!(e.values, [1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.vectors[0], [0.0, 1.0, 0.0, 0.0]);
        assert_eq!(e.vectors[3], [0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn scaled_identity() {
        let c = 2.5;
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = c;
        }
        let e = symmetric_eigen(&m);
        assert!(e.values.iter().all(|&x| x == c));
    }

    #[test]
    fn zero_matrix() {
        let e = symmetric_eigen(&[[0.0; 4]; 4]);
        assert_eq!(e.values, [0.0; 4]);
    }

    #[test]
    fn dense_matrix_matches_nalgebra() {
        let m = [
            [4.0, -2.0, 0.5, 1.0],
            [-2.0, 3.0, 0.25, -1.5],
            [0.5, 0.25, 1.0, 0.75],
            [1.0, -1.5, 0.75, -2.0],
        ];
        let e = symmetric_eigen(&m);
        assert!(residual(&m, &e) < 1e-13);
        let reference = nalgebra::Matrix4::from_fn(|i, j| m[i][j]).symmetric_eigenvalues();
        let mut r: Vec<f64> = reference.iter().copied().collect();
        r.sort_by(f64::total_cmp);
        for (a, b) in e.values.iter().zip(&r) {
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
        for i in 0..4 {
            for j in 0..4 {
                let dot: f64 = (0..4).map(|k| e.vectors[i][k] * e.vectors[j][k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn tiny_scale_entries() {
        // Joule-scale Hamiltonians sit near 1e-24.
        let s = 6.6e-25;
        let m = [[2.0 * s, -0.2 * s], [-0.2 * s, 7.0 * s]];
        let e = symmetric_eigen(&m);
        let tr = 9.0 * s;
        assert!(((e.values[0] + e.values[1]) - tr).abs() < 1e-15 * tr);
        assert!(residual(&m, &e) < 1e-14 * s);
    }
}
