//! Dense real symmetric matrices.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Row-major dense symmetric matrix. Setters write both triangles so the
/// storage is always exactly symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    /// Build from rows; fails unless the rows form an exactly symmetric square matrix.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut m = SymMatrix::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidSpec(format!("row {i} has length {}, expected {dim}", row.len())));
            }
            m.data[i * dim..(i + 1) * dim].copy_from_slice(row);
        }
        if !m.is_symmetric() {
            return Err(Error::InvalidSpec("matrix is not symmetric".into()));
        }
        Ok(m)
    }

    /// Symmetric tridiagonal matrix from its diagonal and off-diagonal.
    pub fn tridiagonal(diag: &[f64], off: &[f64]) -> Self {
        let mut m = SymMatrix::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        for (i, &e) in off.iter().enumerate() {
            m.set(i, i + 1, e);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    /// Adds `v` to the (i,j) and (j,i) entries (once on the diagonal).
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] += v;
        if i != j {
            self.data[j * self.dim + i] += v;
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Structural check: every entry with |i-j| > 1 is zero.
    pub fn is_tridiagonal(&self) -> bool {
        (0..self.dim).all(|i| (i + 2..self.dim).all(|j| self.get(i, j) == 0.0))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn off_diagonal(&self) -> Vec<f64> {
        (0..self.dim.saturating_sub(1)).map(|i| self.get(i, i + 1)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Principal submatrix on the given (ascending or not) index list.
    pub fn submatrix(&self, keep: &[usize]) -> SymMatrix {
        let mut m = SymMatrix::zeros(keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                m.data[a * keep.len() + b] = self.get(i, j);
            }
        }
        m
    }

    pub fn scaled(&self, s: f64) -> SymMatrix {
        SymMatrix {
            dim: self.dim,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Dense CSV, one row per line, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.dim {
            let row: Vec<String> = self.row(i).iter().map(|&x| crate::fmt_f64(x)).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
