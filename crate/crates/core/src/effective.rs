//! Photon-mediated emitter Hamiltonian `𝒦` built from dressed-state overlaps.

use rayon::prelude::*;

use crate::bound_states::{allowed_positions, dressed_state, DressedState};
use crate::eigen::{eigh, EigenDecomposition};
use crate::error::{Error, Result};
use crate::lattice::{EmitterKind, EmitterSpec, WaveguideSpec};
use crate::linalg::SymMatrix;
use crate::spectral::{dos, ipr, DosCurve};
use crate::words::{Symbol, SymbolWord};

pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct EffectiveHamiltonian {
    matrix: SymMatrix,
    emitters: Vec<EmitterSpec>,
    states: Vec<DressedState>,
    host: WaveguideSpec,
}

impl EffectiveHamiltonian {
    /// `𝒦_ij = g_i Σ_{s ∈ footprint_i} ψ_j(s)` with unit atomic amplitude.
    pub fn matrix(&self) -> &SymMatrix {
        &self.matrix
    }

    /// Same overlaps with both dressed states normalized: `𝒦_ij / (𝒩_i 𝒩_j)`.
    pub fn normalized(&self) -> SymMatrix {
        let n: Vec<f64> = self.states.iter().map(|s| s.norm()).collect();
        let mut m = self.matrix.clone();
        for i in 0..m.dim() {
            for j in i..m.dim() {
                m.set(i, j, self.matrix.get(i, j) / (n[i] * n[j]));
            }
        }
        m
    }

    /// Emitters in coupling-position order (the row order of `𝒦`).
    pub fn emitters(&self) -> &[EmitterSpec] {
        &self.emitters
    }

    /// The dressed state behind each column.
    pub fn states(&self) -> &[DressedState] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.emitters.len()
    }

    pub fn host(&self) -> &WaveguideSpec {
        &self.host
    }
}

/// Builds `𝒦` for resonant emitters on the open chain `spec`, ordered by position.
pub fn build_effective(emitters: &[EmitterSpec], spec: &WaveguideSpec) -> Result<EffectiveHamiltonian> {
    if emitters.is_empty() {
        return Err(Error::InvalidSpec("effective Hamiltonian needs at least one emitter".into()));
    }
    let mut emitters = emitters.to_vec();
    emitters.sort_by_key(|e| e.position);
    let states = emitters
        .par_iter()
        .map(|e| dressed_state(spec, e))
        .collect::<Result<Vec<_>>>()?;

    let ne = emitters.len();
    let mut raw = vec![0.0; ne * ne];
    for (i, e) in emitters.iter().enumerate() {
        let foot = e.footprint();
        for (j, st) in states.iter().enumerate() {
            raw[i * ne + j] = e.g * foot.iter().map(|&s| st.amplitude_at(s)).sum::<f64>();
        }
    }
    let mut matrix = SymMatrix::zeros(ne);
    for i in 0..ne {
        for j in i..ne {
            let (a, b) = (raw[i * ne + j], raw[j * ne + i]);
            if (a - b).abs() > SYMMETRY_TOL {
                return Err(Error::SymmetryViolation {
                    i,
                    j,
                    diff: (a - b).abs(),
                });
            }
            matrix.set(i, j, 0.5 * (a + b));
        }
    }
    Ok(EffectiveHamiltonian {
        matrix,
        emitters,
        states,
        host: *spec,
    })
}

/// Giant atoms of leg `d` at every allowed position along `spec`.
pub fn allowed_giant_roster(spec: &WaveguideSpec, d: usize, g: f64) -> Result<Vec<EmitterSpec>> {
    let seq = spec
        .hopping_sequence()?
        .ok_or_else(|| Error::InvalidSpec("roster needs a two-letter hopping host".into()))?;
    Ok(allowed_positions(&seq, d, spec.n_sites)
        .into_iter()
        .map(|n0| EmitterSpec::giant(n0, d, g))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    /// 4×4 block with couplings `t_a, t_b, t_c`.
    A,
    /// 1×1 zero block.
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub kind: BlockKind,
    /// First emitter index (row of `𝒦`).
    pub start: usize,
    pub len: usize,
    pub first_position: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockReport {
    pub blocks: Vec<Block>,
    pub word: SymbolWord,
    /// `+1` when `𝒦` reproduces the `𝒜` block literally, `-1` when it equals `-𝒜`.
    pub orientation: i8,
    pub t_a: f64,
    pub t_b: f64,
    pub t_c: f64,
}

impl BlockReport {
    /// Block word without the leading boundary block at the chain start.
    pub fn bulk_word(&self) -> SymbolWord {
        let skip = usize::from(self.blocks.first().is_some_and(|b| b.first_position == 0));
        SymbolWord::from_symbols(self.word.symbols()[skip..].to_vec())
    }
}

/// The reference 4×4 block `𝒜` for couplings `(t_a, t_b, t_c)`.
pub fn block_a(t_a: f64, t_b: f64, t_c: f64) -> [[f64; 4]; 4] {
    [
        [0.0, t_a, 0.0, t_c],
        [t_a, 0.0, t_b, 0.0],
        [0.0, t_b, 0.0, t_a],
        [t_c, 0.0, t_a, 0.0],
    ]
}

/// Splits `𝒦` of a giant-atom roster into runs of consecutive `n0` and
/// checks each run is `𝒜` or `ℬ`, with neighbouring runs linked by one `t_a`.
pub fn fibonacci_block_structure(k: &EffectiveHamiltonian) -> Result<BlockReport> {
    let em = k.emitters();
    let g = em[0].g;
    if em.iter().any(|e| !matches!(e.kind, EmitterKind::Giant { .. }) || e.g != g) {
        return Err(Error::InvalidSpec("block analysis needs giant atoms with one common g".into()));
    }
    let (host_a, host_b) = (k.host.t_a, k.host.t_b);
    let t_a = g * g / host_a;
    let t_b = g * g / host_b;
    let t_c = -(host_b / host_a) * t_a;
    let tol = 1e-10 * t_a.abs().max(t_b.abs());
    let m = k.matrix();

    let mut runs: Vec<(usize, usize)> = Vec::new();
    for i in 0..em.len() {
        match runs.last_mut() {
            Some((s, len)) if em[*s + *len - 1].position + 1 == em[i].position => *len += 1,
            _ => runs.push((i, 1)),
        }
    }

    let reference = block_a(t_a, t_b, t_c);
    let mut orientation: Option<i8> = None;
    let mut blocks = Vec::with_capacity(runs.len());
    for &(start, len) in &runs {
        let bad = |reason: String| Error::UnrecognizedBlock {
            start,
            end: start + len - 1,
            reason,
        };
        let kind = match len {
            1 => {
                if m.get(start, start).abs() > tol {
                    return Err(bad(format!("nonzero diagonal {}", m.get(start, start))));
                }
                BlockKind::B
            }
            4 => {
                let matches = |sgn: f64| {
                    (0..4).all(|a| (0..4).all(|b| (m.get(start + a, start + b) - sgn * reference[a][b]).abs() <= tol))
                };
                let o = match (matches(1.0), matches(-1.0)) {
                    (true, _) => 1,
                    (_, true) => -1,
                    _ => return Err(bad("4x4 block differs from the reference block".into())),
                };
                if *orientation.get_or_insert(o) != o {
                    return Err(bad("block orientation differs from earlier blocks".into()));
                }
                BlockKind::A
            }
            n => return Err(bad(format!("run of {n} consecutive positions"))),
        };
        blocks.push(Block {
            kind,
            start,
            len,
            first_position: em[start].position,
        });
    }

    // Links between runs: only last(r) -- first(r+1), equal to ±t_a.
    for (r, &(s_r, l_r)) in runs.iter().enumerate() {
        for (q, &(s_q, l_q)) in runs.iter().enumerate().skip(r + 1) {
            for i in s_r..s_r + l_r {
                for j in s_q..s_q + l_q {
                    let v = m.get(i, j);
                    let is_link = q == r + 1 && i == s_r + l_r - 1 && j == s_q;
                    if is_link {
                        let o = if v > 0.0 { 1 } else { -1 };
                        let o = *orientation.get_or_insert(o);
                        if (v - o as f64 * t_a).abs() > tol {
                            return Err(Error::UnrecognizedBlock {
                                start: s_r,
                                end: s_q + l_q - 1,
                                reason: format!("link between neighbouring blocks is {v}, expected ±t_a"),
                            });
                        }
                    } else if v.abs() > tol {
                        return Err(Error::UnrecognizedBlock {
                            start: s_r,
                            end: s_q + l_q - 1,
                            reason: format!("unexpected coupling {v} between emitters {i} and {j}"),
                        });
                    }
                }
            }
        }
    }

    let word = SymbolWord::from_symbols(blocks.iter().map(|b| symbol_for(b.kind)).collect());
    Ok(BlockReport {
        blocks,
        word,
        orientation: orientation.unwrap_or(1),
        t_a,
        t_b,
        t_c,
    })
}

/// Spectrum, DOS and eigenstate IPRs of an effective Hamiltonian.
#[derive(Clone, Debug)]
pub struct EffectiveSpectrum {
    pub decomposition: EigenDecomposition,
    pub dos: DosCurve,
    pub ipr: Vec<f64>,
}

pub fn effective_dos(k: &SymMatrix, bins: usize) -> Result<EffectiveSpectrum> {
    let decomposition = eigh(k)?;
    let dos = dos(decomposition.values(), bins)?;
    let ipr = decomposition.vectors().map(ipr).collect::<Result<Vec<_>>>()?;
    Ok(EffectiveSpectrum {
        decomposition,
        dos,
        ipr,
    })
}

fn symbol_for(kind: BlockKind) -> Symbol {
    match kind {
        BlockKind::A => Symbol::A,
        BlockKind::B => Symbol::B,
    }
}
