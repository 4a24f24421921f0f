//! Independent reference implementations used only by tests.
#![allow(dead_code)]

/// Cyclic Jacobi rotations on a dense symmetric matrix.
/// Returns ascending eigenvalues and the matching eigenvectors (as rows).
pub fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u8 as f64).collect()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].total_cmp(&m[j][j]));
    let values = order.iter().map(|&i| m[i][i]).collect();
    let vectors = order.iter().map(|&i| v.iter().map(|row| row[i]).collect()).collect();
    (values, vectors)
}

/// Number of eigenvalues of the tridiagonal matrix below `x` (Sturm count).
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { b2 / q };
        if q == 0.0 {
            q = -1e-300;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues of a symmetric tridiagonal matrix by bisection.
pub fn sturm_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let bound = (0..n)
        .map(|i| {
            let l = if i > 0 { off[i - 1].abs() } else { 0.0 };
            let r = if i + 1 < n { off[i].abs() } else { 0.0 };
            diag[i].abs() + l + r
        })
        .fold(0.0, f64::max)
        + 1.0;
    (0..n)
        .map(|k| {
            let (mut lo, mut hi) = (-bound, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                if sturm_count(diag, off, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Substitution by literal string rewriting.
pub fn rewrite_word(p: usize, q: usize, k: usize) -> String {
    let a_img = format!("{}B", "A".repeat(p));
    let b_img = "A".repeat(q);
    let mut w = String::from("A");
    for _ in 0..k {
        w = w
            .chars()
            .map(|c| if c == 'A' { a_img.as_str() } else { b_img.as_str() })
            .collect();
    }
    w
}

/// Dense rows of a symmetric matrix given as a flat row-major slice.
pub fn rows(flat: &[f64], n: usize) -> Vec<Vec<f64>> {
    flat.chunks(n).map(|r| r.to_vec()).collect()
}

/// Projection weight of `v` onto the span of orthonormal `basis`.
pub fn projected_weight(v: &[f64], basis: &[Vec<f64>]) -> f64 {
    let nv: f64 = v.iter().map(|x| x * x).sum();
    basis
        .iter()
        .map(|b| b.iter().zip(v).map(|(x, y)| x * y).sum::<f64>().powi(2))
        .sum::<f64>()
        / nv
}

/// Closed-form exp(-iHt) populations of the three-site chain [[0,c,0],[c,0,c],[0,c,0]] from site 0.
pub fn three_chain_populations(c: f64, t: f64) -> [f64; 3] {
    let w = 2f64.sqrt() * c * t;
    let a0 = 0.5 * (1.0 + w.cos());
    let a2 = 0.5 * (w.cos() - 1.0);
    let a1 = w.sin() / 2f64.sqrt();
    [a0 * a0, a1 * a1, a2 * a2]
}
