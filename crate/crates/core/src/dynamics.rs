//! Single-excitation time evolution by full spectral decomposition.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::eigen::{eigh, EigenDecomposition};
use crate::error::{Error, Result};
use crate::lattice::{BasisLabel, SingleExcitationHamiltonian};
use crate::linalg::SymMatrix;
use crate::spectral::eigensolve;

/// Largest dimension `evolve_exact` will diagonalize densely.
pub const DENSE_CAP: usize = 8192;

#[derive(Clone, Debug, PartialEq)]
pub enum Initial {
    Label(BasisLabel),
    /// Real amplitudes in the Hamiltonian's basis (normalized on use).
    Amplitudes(Vec<f64>),
}

impl Initial {
    pub fn emitter(j: usize) -> Self {
        Initial::Label(BasisLabel::Emitter(j))
    }

    fn resolve(&self, dim: usize, index_of: impl Fn(BasisLabel) -> Option<usize>) -> Result<Vec<f64>> {
        match self {
            Initial::Label(l) => {
                let i = index_of(*l).ok_or_else(|| Error::UnknownLabel(l.to_string()))?;
                let mut v = vec![0.0; dim];
                v[i] = 1.0;
                Ok(v)
            }
            Initial::Amplitudes(a) => {
                if a.len() != dim {
                    return Err(Error::InvalidSpec(format!(
                        "initial state has {} amplitudes, basis has {dim}",
                        a.len()
                    )));
                }
                let n = crate::linalg::norm(a);
                if n == 0.0 {
                    return Err(Error::Degenerate("initial state is zero".into()));
                }
                Ok(a.iter().map(|x| x / n).collect())
            }
        }
    }
}

/// `exp(-iHt)` from one shared eigendecomposition.
#[derive(Clone, Debug)]
pub struct Propagator {
    decomp: EigenDecomposition,
}

impl Propagator {
    pub fn new(h: &SymMatrix) -> Result<Self> {
        Ok(Propagator { decomp: eigh(h)? })
    }

    pub fn from_decomposition(decomp: EigenDecomposition) -> Self {
        Propagator { decomp }
    }

    pub fn dim(&self) -> usize {
        self.decomp.dim()
    }

    pub fn decomposition(&self) -> &EigenDecomposition {
        &self.decomp
    }

    /// `⟨v_i|ψ⟩` for each eigenvector.
    pub fn coefficients(&self, psi: &[Complex64]) -> Vec<Complex64> {
        self.decomp
            .vectors()
            .map(|v| v.iter().zip(psi).map(|(a, b)| b * a).sum())
            .collect()
    }

    /// `exp(-iHt) ψ`.
    pub fn apply(&self, psi: &[Complex64], t: f64) -> Vec<Complex64> {
        let c = self.coefficients(psi);
        self.expand(&c, t)
    }

    fn phased(&self, c: &[Complex64], t: f64) -> Vec<Complex64> {
        self.decomp
            .values()
            .iter()
            .zip(c)
            .map(|(&e, &ci)| ci * Complex64::from_polar(1.0, -e * t))
            .collect()
    }

    fn expand(&self, c: &[Complex64], t: f64) -> Vec<Complex64> {
        let w = self.phased(c, t);
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (v, wi) in self.decomp.vectors().zip(&w) {
            for (o, &vk) in out.iter_mut().zip(v) {
                *o += wi * vk;
            }
        }
        out
    }

    /// `exp(-iHt) ψ` restricted to the components in `rows`.
    pub fn components(&self, c: &[Complex64], t: f64, rows: &[usize]) -> Vec<Complex64> {
        let w = self.phased(c, t);
        rows.iter()
            .map(|&r| self.decomp.vectors().zip(&w).map(|(v, wi)| wi * v[r]).sum())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PopulationTrace {
    pub times: Vec<f64>,
    /// `populations[j][k]`: emitter `j` at `times[k]`.
    pub populations: Vec<Vec<f64>>,
    /// Total resonator population (zero for effective traces).
    pub photonic: Vec<f64>,
    /// `1 − Σ_j p_j − photonic`.
    pub leakage: Vec<f64>,
    /// `‖ψ(t)‖₂`.
    pub norm: Vec<f64>,
}

impl PopulationTrace {
    pub fn n_emitters(&self) -> usize {
        self.populations.len()
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.norm.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max)
    }

    fn assemble(times: &[f64], samples: Vec<(Vec<f64>, f64, f64)>, n_emitters: usize) -> Self {
        let mut populations = vec![Vec::with_capacity(times.len()); n_emitters];
        let mut photonic = Vec::with_capacity(times.len());
        let mut leakage = Vec::with_capacity(times.len());
        let mut norm = Vec::with_capacity(times.len());
        for (p, ph, nsq) in samples {
            let total: f64 = p.iter().sum();
            for (j, pj) in p.into_iter().enumerate() {
                populations[j].push(pj);
            }
            leakage.push(1.0 - total - ph);
            photonic.push(ph);
            norm.push(nsq.sqrt());
        }
        PopulationTrace {
            times: times.to_vec(),
            populations,
            photonic,
            leakage,
            norm,
        }
    }
}

pub fn evolve_exact(h: &SingleExcitationHamiltonian, initial: &Initial, times: &[f64]) -> Result<PopulationTrace> {
    evolve_exact_with_cap(h, initial, times, DENSE_CAP)
}

/// Exact evolution under the full coupled Hamiltonian.
pub fn evolve_exact_with_cap(
    h: &SingleExcitationHamiltonian,
    initial: &Initial,
    times: &[f64],
    cap: usize,
) -> Result<PopulationTrace> {
    if h.dim() > cap {
        return Err(Error::DimensionTooLarge { dim: h.dim(), cap });
    }
    let psi0 = initial.resolve(h.dim(), |l| h.index_of(l))?;
    let prop = Propagator::from_decomposition(eigensolve(h)?);
    let emitter_rows: Vec<usize> = h
        .labels()
        .iter()
        .enumerate()
        .filter(|(_, l)| matches!(l, BasisLabel::Emitter(_)))
        .map(|(i, _)| i)
        .collect();
    let c = prop.coefficients(&to_complex(&psi0));
    let samples = times
        .par_iter()
        .map(|&t| {
            let psi = prop.expand(&c, t);
            let nsq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            let p: Vec<f64> = emitter_rows.iter().map(|&r| psi[r].norm_sqr()).collect();
            let ph = nsq - p.iter().sum::<f64>();
            (p, ph, nsq)
        })
        .collect();
    Ok(PopulationTrace::assemble(times, samples, emitter_rows.len()))
}

/// Evolution under an emitter-only Hamiltonian (e.g. `𝒦`); every basis state is an emitter.
pub fn evolve_effective(k: &SymMatrix, initial: &Initial, times: &[f64]) -> Result<PopulationTrace> {
    let n = k.dim();
    let psi0 = initial.resolve(n, |l| match l {
        BasisLabel::Emitter(j) if j < n => Some(j),
        _ => None,
    })?;
    let prop = Propagator::new(k)?;
    let c = prop.coefficients(&to_complex(&psi0));
    let samples = times
        .par_iter()
        .map(|&t| {
            let psi = prop.expand(&c, t);
            let p: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
            let nsq = p.iter().sum();
            (p, 0.0, nsq)
        })
        .collect();
    Ok(PopulationTrace::assemble(times, samples, n))
}

/// Population inside the basis states `rows` over time.
pub fn subspace_population(
    h: &SingleExcitationHamiltonian,
    initial: &Initial,
    times: &[f64],
    rows: &[usize],
) -> Result<Vec<f64>> {
    let psi0 = initial.resolve(h.dim(), |l| h.index_of(l))?;
    let prop = Propagator::from_decomposition(eigensolve(h)?);
    let c = prop.coefficients(&to_complex(&psi0));
    Ok(times
        .par_iter()
        .map(|&t| prop.components(&c, t, rows).iter().map(|z| z.norm_sqr()).sum())
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeviationReport {
    pub per_emitter_max: Vec<f64>,
    pub max: f64,
    pub time_of_max: f64,
}

/// Max `|p_exact − p_eff|` per emitter and overall.
pub fn compare(exact: &PopulationTrace, effective: &PopulationTrace) -> Result<DeviationReport> {
    if exact.times != effective.times {
        return Err(Error::GridMismatch("time grids differ".into()));
    }
    if exact.n_emitters() != effective.n_emitters() {
        return Err(Error::GridMismatch(format!(
            "emitter counts differ ({} vs {})",
            exact.n_emitters(),
            effective.n_emitters()
        )));
    }
    let mut per_emitter_max = Vec::with_capacity(exact.n_emitters());
    let (mut max, mut time_of_max) = (0.0, exact.times.first().copied().unwrap_or(0.0));
    for (a, b) in exact.populations.iter().zip(&effective.populations) {
        let mut m = 0.0f64;
        for (k, (x, y)) in a.iter().zip(b).enumerate() {
            let d = (x - y).abs();
            m = m.max(d);
            if d > max {
                max = d;
                time_of_max = exact.times[k];
            }
        }
        per_emitter_max.push(m);
    }
    Ok(DeviationReport {
        per_emitter_max,
        max,
        time_of_max,
    })
}

/// `samples` equally spaced times over `[0, t_max]`.
pub fn uniform_grid(t_max: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..samples).map(|k| t_max * k as f64 / (samples - 1) as f64).collect(),
    }
}

/// 2000 samples over `[0, 20π/(√2 t_a)]`, with `t_a = g²/t_A`.
pub fn effective_grid(t_a: f64) -> Vec<f64> {
    uniform_grid(20.0 * std::f64::consts::PI / (2f64.sqrt() * t_a), 2000)
}

fn to_complex(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}
