//! Spectra of single-excitation Hamiltonians and the observables built on them:
//! density of states, integrated DOS, central gap and inverse participation ratio.

use rayon::prelude::*;

use crate::eigen;
pub use crate::eigen::EigenDecomposition;
use crate::error::{Error, Result};
use crate::fit::{linear_fit, LinearFit};
use crate::lattice::{build_waveguide, SingleExcitationHamiltonian, WaveguideSpec};
use crate::words::SubstitutionRule;

/// Default number of DOS histogram bins.
pub const DEFAULT_BINS: usize = 200;
/// Eigenvalues closer than this to zero close the central gap.
pub const GAP_FLOOR: f64 = 1e-8;

/// Full decomposition, taking the tridiagonal shortcut when the Hamiltonian has it.
pub fn eigensolve(h: &SingleExcitationHamiltonian) -> Result<EigenDecomposition> {
    let m = h.matrix();
    if h.is_tridiagonal() {
        eigen::eigh_tridiagonal(&m.diagonal(), &m.off_diagonal())
    } else {
        eigen::eigh(m)
    }
}

/// Ascending eigenvalues without eigenvectors.
pub fn eigenvalues(h: &SingleExcitationHamiltonian) -> Result<Vec<f64>> {
    let m = h.matrix();
    if h.is_tridiagonal() {
        eigen::eigvalsh_tridiagonal(&m.diagonal(), &m.off_diagonal())
    } else {
        eigen::eigvalsh(m)
    }
}

/// Histogram density of states plus the exact integrated-DOS staircase.
#[derive(Clone, Debug, PartialEq)]
pub struct DosCurve {
    /// `bins + 1` uniform edges spanning `[E_min, E_max]`.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    /// `counts / (D · bin width)`, integrating to one.
    pub density: Vec<f64>,
    /// Sorted eigenvalues.
    pub energies: Vec<f64>,
    /// Fraction of eigenvalues strictly below each entry of `energies`.
    pub integrated: Vec<f64>,
}

impl DosCurve {
    /// `𝒩(E)`: fraction of eigenvalues strictly below `e`.
    pub fn integrated_at(&self, e: f64) -> f64 {
        let below = self.energies.partition_point(|&x| x < e);
        below as f64 / self.energies.len() as f64
    }
}

/// Needs at least two bins and one eigenvalue.
pub fn dos(eigenvalues: &[f64], bins: usize) -> Result<DosCurve> {
    if bins < 2 {
        return Err(Error::InvalidSpec(format!("DOS needs >= 2 bins, got {bins}")));
    }
    if eigenvalues.is_empty() {
        return Err(Error::Degenerate("DOS of an empty spectrum".into()));
    }
    let mut energies = eigenvalues.to_vec();
    energies.sort_by(f64::total_cmp);
    let d = energies.len();
    let (mut lo, mut hi) = (energies[0], energies[d - 1]);
    if hi == lo {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
    let mut counts = vec![0usize; bins];
    for &e in &energies {
        let k = (((e - lo) / width).floor() as usize).min(bins - 1);
        counts[k] += 1;
    }
    let density = counts.iter().map(|&c| c as f64 / (d as f64 * width)).collect();
    let integrated = energies
        .iter()
        .map(|&e| energies.partition_point(|&x| x < e) as f64 / d as f64)
        .collect();
    Ok(DosCurve {
        edges,
        counts,
        density,
        energies,
        integrated,
    })
}

/// `E⁺ − E⁻` for the levels straddling zero; 0 when a level sits at zero.
pub fn central_gap(eigenvalues: &[f64]) -> f64 {
    if eigenvalues.iter().any(|e| e.abs() < GAP_FLOOR) {
        return 0.0;
    }
    let above = eigenvalues.iter().copied().filter(|&e| e > 0.0).fold(f64::INFINITY, f64::min);
    let below = eigenvalues.iter().copied().filter(|&e| e < 0.0).fold(f64::NEG_INFINITY, f64::max);
    if above.is_finite() && below.is_finite() {
        above - below
    } else {
        0.0
    }
}

/// Median spacing among the `count` eigenvalues closest to zero.
pub fn median_spacing_near_zero(eigenvalues: &[f64], count: usize) -> f64 {
    let mut near: Vec<f64> = eigenvalues.to_vec();
    near.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    near.truncate(count.max(2));
    near.sort_by(f64::total_cmp);
    let mut gaps: Vec<f64> = near.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.sort_by(f64::total_cmp);
    let m = gaps.len();
    if m % 2 == 1 {
        gaps[m / 2]
    } else {
        0.5 * (gaps[m / 2 - 1] + gaps[m / 2])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapCell {
    pub p: u32,
    pub q: u32,
    pub n_sites: usize,
    pub gap: f64,
    pub threshold: f64,
    pub gapped: bool,
}

/// Central gap of `(p,q)` waveguides on an even-`N` open chain with `t_0 = t_A`.
///
/// A cell counts as gapped when its gap exceeds ten times the median level
/// spacing near zero of the uniform chain with the same `N`.
pub fn gap_map(
    p_range: std::ops::RangeInclusive<u32>,
    q_range: std::ops::RangeInclusive<u32>,
    t_b: f64,
    n_sites: usize,
) -> Result<Vec<GapCell>> {
    let n_sites = n_sites + n_sites % 2;
    let uniform = eigenvalues(&build_waveguide(&WaveguideSpec::uniform(n_sites))?)?;
    let threshold = 10.0 * median_spacing_near_zero(&uniform, 20);
    let cells: Vec<(u32, u32)> = p_range
        .flat_map(|p| q_range.clone().map(move |q| (p, q)))
        .collect();
    cells
        .into_par_iter()
        .map(|(p, q)| {
            let spec = WaveguideSpec::fibonacci(SubstitutionRule::new(p, q)?, n_sites, t_b);
            let gap = central_gap(&eigenvalues(&build_waveguide(&spec)?)?);
            Ok(GapCell {
                p,
                q,
                n_sites,
                gap,
                threshold,
                gapped: gap > threshold,
            })
        })
        .collect()
}

/// `Σ_n |ψ_n|^4` of a normalized state.
pub fn ipr(state: &[f64]) -> Result<f64> {
    let norm_sq: f64 = state.iter().map(|x| x * x).sum();
    if (norm_sq - 1.0).abs() > 1e-10 {
        return Err(Error::Unnormalized { norm_sq });
    }
    Ok(state.iter().map(|x| x.powi(4)).sum())
}

/// Unweighted mean IPR over all eigenvectors.
pub fn mean_ipr(decomp: &EigenDecomposition) -> f64 {
    let total: f64 = decomp.vectors().map(|v| v.iter().map(|x| x.powi(4)).sum::<f64>()).sum();
    total / decomp.dim() as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct IprScaling {
    pub sizes: Vec<usize>,
    pub mean_ipr: Vec<f64>,
    /// Least-squares fit of `ln IPR` against `ln N`.
    pub fit: LinearFit,
}

impl IprScaling {
    pub fn slope(&self) -> f64 {
        self.fit.slope
    }
}

/// Mean IPR at each size (the template's `N` is replaced) and its log-log slope.
pub fn ipr_scaling(template: &WaveguideSpec, sizes: &[usize]) -> Result<IprScaling> {
    if sizes.len() < 4 || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSpec(
            "IPR scaling needs >= 4 strictly ascending sizes".into(),
        ));
    }
    let mean_ipr: Vec<f64> = sizes
        .par_iter()
        .map(|&n| {
            let h = build_waveguide(&template.with_sites(n))?;
            Ok(mean_ipr(&eigensolve(&h)?))
        })
        .collect::<Result<_>>()?;
    let x: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let y: Vec<f64> = mean_ipr.iter().map(|v| v.ln()).collect();
    Ok(IprScaling {
        sizes: sizes.to_vec(),
        fit: linear_fit(&x, &y)?,
        mean_ipr,
    })
}
