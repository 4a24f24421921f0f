//! Symmetric eigensolver: Householder reduction to tridiagonal form followed by
//! implicit-shift QL iteration.
//!
//! Follows the EISPACK `tred2`/`tql2` procedures (Bowdler, Martin, Reinsch and
//! Wilkinson). Eigenvectors are kept as rows of a row-major buffer so each QL
//! plane rotation updates two contiguous slices.

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// QL sweeps allowed per eigenvalue before giving up.
const MAX_SWEEPS: usize = 64;

/// Sorted eigenvalues and the matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    dim: usize,
    values: Vec<f64>,
    // row i is the eigenvector paired with values[i]
    vectors: Vec<f64>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Ascending eigenvalues.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[f64]> {
        self.vectors.chunks_exact(self.dim.max(1)).take(self.dim)
    }

    /// Component `k` of every eigenvector, i.e. `<k|v_i>` for all i.
    pub fn component(&self, k: usize) -> Vec<f64> {
        (0..self.dim).map(|i| self.vectors[i * self.dim + k]).collect()
    }

    /// Largest `||H v_i - E_i v_i||_2` over all pairs.
    pub fn max_residual(&self, h: &SymMatrix) -> f64 {
        (0..self.dim)
            .map(|i| {
                let v = self.vector(i);
                h.mul_vec(v)
                    .iter()
                    .zip(v)
                    .map(|(hv, x)| (hv - self.values[i] * x).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// Largest `|<v_i|v_j> - δ_ij|`.
    pub fn max_orthogonality_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..=i {
                let d = crate::linalg::dot(self.vector(i), self.vector(j));
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((d - target).abs());
            }
        }
        worst
    }
}

/// Full decomposition of a dense symmetric matrix.
pub fn eigh(a: &SymMatrix) -> Result<EigenDecomposition> {
    let n = a.dim();
    if n == 0 {
        return Ok(EigenDecomposition {
            dim: 0,
            values: vec![],
            vectors: vec![],
        });
    }
    // tred2 hands back Q transposed, which is the row-per-vector layout tql2 rotates.
    let (d, e, qt) = tred2(a, true);
    finish(d, e, Some(qt))
}

/// Full decomposition of a symmetric tridiagonal matrix, skipping the reduction.
pub fn eigh_tridiagonal(diag: &[f64], off: &[f64]) -> Result<EigenDecomposition> {
    let n = diag.len();
    assert_eq!(off.len(), n.saturating_sub(1), "off-diagonal length mismatch");
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    finish(diag.to_vec(), shifted_off(off, n), Some(z))
}

/// Eigenvalues only (O(n^2) after reduction).
pub fn eigvalsh(a: &SymMatrix) -> Result<Vec<f64>> {
    if a.dim() == 0 {
        return Ok(vec![]);
    }
    let (d, e, _) = tred2(a, false);
    Ok(finish(d, e, None)?.values)
}

pub fn eigvalsh_tridiagonal(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    assert_eq!(off.len(), n.saturating_sub(1), "off-diagonal length mismatch");
    Ok(finish(diag.to_vec(), shifted_off(off, n), None)?.values)
}

// tql2 expects the subdiagonal in e[1..n] with e[0] unused.
fn shifted_off(off: &[f64], n: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[1..].copy_from_slice(off);
    e
}

fn finish(mut d: Vec<f64>, mut e: Vec<f64>, mut z: Option<Vec<f64>>) -> Result<EigenDecomposition> {
    let n = d.len();
    tql2(&mut d, &mut e, z.as_deref_mut())?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors = match z {
        Some(z) => {
            let mut sorted = Vec::with_capacity(n * n);
            for &i in &order {
                sorted.extend_from_slice(&z[i * n..(i + 1) * n]);
            }
            sorted
        }
        None => Vec::new(),
    };
    Ok(EigenDecomposition {
        dim: n,
        values,
        vectors,
    })
}

/// Householder tridiagonalization. Returns (diagonal, subdiagonal in e[1..], Qᵀ)
/// with `Q^T A Q` tridiagonal, Qᵀ row-major.
///
/// The work array holds the transpose (A is symmetric, so only the output
/// changes) which keeps every inner loop on contiguous memory.
fn tred2(a: &SymMatrix, accumulate: bool) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let n = a.dim();
    let mut v = a.as_slice().to_vec();
    let idx = |r: usize, c: usize| c * n + r;
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];

    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = 0.0;
                v[idx(j, i)] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }

            for j in 0..i {
                f = d[j];
                v[idx(j, i)] = f;
                g = e[j] + v[idx(j, j)] * f;
                for k in j + 1..i {
                    g += v[idx(k, j)] * d[k];
                    e[k] += v[idx(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[idx(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    if !accumulate {
        for j in 0..n {
            d[j] = v[idx(j, j)];
        }
        e[0] = 0.0;
        return (d, e, Vec::new());
    }

    // Accumulate transformations.
    for i in 0..n - 1 {
        v[idx(n - 1, i)] = v[idx(i, i)];
        v[idx(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[idx(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[idx(k, i + 1)] * v[idx(k, j)];
                }
                for k in 0..=i {
                    v[idx(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[idx(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
        v[idx(n - 1, j)] = 0.0;
    }
    v[idx(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
    (d, e, v)
}

/// Implicit QL on (d, e[1..]); rotations are applied to the rows of `z` when given.
fn tql2(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }

        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS {
                    return Err(Error::NoConvergence {
                        index: l,
                        iterations: MAX_SWEEPS,
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        let (lo, hi) = z.split_at_mut((i + 1) * n);
                        let zi = &mut lo[i * n..];
                        let zi1 = &mut hi[..n];
                        for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                            let t = *b;
                            *b = s * *a + c * t;
                            *a = c * *a - s * t;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let m = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let dec = eigh(&m).unwrap();
        assert!((dec.values()[0] + 1.0).abs() < 1e-15);
        assert!((dec.values()[1] - 1.0).abs() < 1e-15);
        assert!(dec.max_residual(&m) < 1e-14);
    }

    #[test]
    fn dense_and_tridiagonal_paths_agree() {
        let diag = [0.3, -1.0, 2.0, 0.0, 0.5];
        let off = [1.0, 0.25, -0.7, 1.1];
        let m = SymMatrix::tridiagonal(&diag, &off);
        let a = eigh(&m).unwrap();
        let b = eigh_tridiagonal(&diag, &off).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-13);
        }
        assert!(b.max_residual(&m) < 1e-13);
        assert!(b.max_orthogonality_error() < 1e-13);
        let vals = eigvalsh_tridiagonal(&diag, &off).unwrap();
        for (x, y) in vals.iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn dense_with_corner_and_diagonal() {
        let mut m = SymMatrix::zeros(6);
        for i in 0..6 {
            m.set(i, (i + 1) % 6, 1.0);
            m.set(i, i, 0.1 * i as f64);
        }
        m.set(0, 3, -0.4);
        let dec = eigh(&m).unwrap();
        assert!(dec.max_residual(&m) < 1e-13);
        assert!(dec.max_orthogonality_error() < 1e-13);
        let sum: f64 = dec.values().iter().sum();
        assert!((sum - m.trace()).abs() < 1e-13);
        assert!(dec.values().windows(2).all(|w| w[0] <= w[1]));
        for (a, b) in eigvalsh(&m).unwrap().iter().zip(dec.values()) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_and_one_dimensional() {
        assert_eq!(eigh(&SymMatrix::zeros(0)).unwrap().dim(), 0);
        let one = eigh(&SymMatrix::tridiagonal(&[2.5], &[])).unwrap();
        assert_eq!(one.values(), &[2.5]);
        assert_eq!(one.vector(0), &[1.0]);
    }
}
