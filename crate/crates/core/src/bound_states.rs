//! Closed-form vacancy-like dressed states at `Δ = 0`.
//!
//! Photonic amplitudes are kept symbolically as `sign · prefactor · ρ^k` with
//! an integer exponent `k`, so existence decisions never compare floats.
//! States are stored in the `ε = 1` gauge (atomic amplitude one); [`DressedState::norm`]
//! gives the factor that normalizes them.

use crate::error::{Error, Result};
use crate::lattice::{BasisLabel, Boundary, EmitterKind, EmitterSpec, SingleExcitationHamiltonian, WaveguideSpec};
use crate::linalg::norm;
use crate::words::{HoppingSequence, Symbol};

/// Default distance a local emitter must keep from either chain end.
pub const DEFAULT_BULK_MARGIN: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AmplitudeTerm {
    pub site: usize,
    /// `+1` or `-1`.
    pub sign: i8,
    pub rho_exponent: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DressedState {
    emitter: EmitterSpec,
    n_sites: usize,
    /// `g / t` multiplying every term.
    prefactor: f64,
    rho: f64,
    terms: Vec<AmplitudeTerm>,
}

impl DressedState {
    pub fn emitter(&self) -> &EmitterSpec {
        &self.emitter
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }

    pub fn terms(&self) -> &[AmplitudeTerm] {
        &self.terms
    }

    pub fn term_value(&self, term: &AmplitudeTerm) -> f64 {
        term.sign as f64 * self.prefactor * self.rho.powi(term.rho_exponent as i32)
    }

    /// `(site, amplitude)` in the `ε = 1` gauge, ordered by site.
    pub fn photonic(&self) -> Vec<(usize, f64)> {
        let mut v: Vec<(usize, f64)> = self.terms.iter().map(|t| (t.site, self.term_value(t))).collect();
        v.sort_by_key(|p| p.0);
        v
    }

    /// Unnormalized amplitude at `site` (zero off the support).
    pub fn amplitude_at(&self, site: usize) -> f64 {
        self.terms
            .iter()
            .find(|t| t.site == site)
            .map_or(0.0, |t| self.term_value(t))
    }

    /// `𝒩 = sqrt(1 + Σ ψ²)`.
    pub fn norm(&self) -> f64 {
        let s: f64 = self.terms.iter().map(|t| self.term_value(t).powi(2)).sum();
        (1.0 + s).sqrt()
    }

    /// Normalized atomic amplitude `1/𝒩`.
    pub fn epsilon(&self) -> f64 {
        1.0 / self.norm()
    }

    /// Normalized photonic amplitudes over all `N` sites.
    pub fn photonic_vector(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.n_sites];
        let nrm = self.norm();
        for t in &self.terms {
            v[t.site] = self.term_value(t) / nrm;
        }
        v
    }

    /// Normalized state in the basis of `h`, with the atomic part on `emitter(index)`.
    pub fn vector_in(&self, h: &SingleExcitationHamiltonian, emitter_index: usize) -> Result<Vec<f64>> {
        let mut v = vec![0.0; h.dim()];
        let e = h
            .index_of(BasisLabel::Emitter(emitter_index))
            .ok_or_else(|| Error::UnknownLabel(BasisLabel::Emitter(emitter_index).to_string()))?;
        let nrm = self.norm();
        v[e] = 1.0 / nrm;
        for t in &self.terms {
            let i = h
                .index_of(BasisLabel::Site(t.site))
                .ok_or_else(|| Error::UnknownLabel(BasisLabel::Site(t.site).to_string()))?;
            v[i] = self.term_value(t) / nrm;
        }
        Ok(v)
    }
}

/// Outcome of the giant-atom existence test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GiantVdsCondition {
    pub n0: usize,
    pub d: usize,
    pub satisfied: bool,
    /// `k_n` for `n = 0..d/2` (empty when `d` is odd).
    pub exponents: Vec<i64>,
    pub reason: Option<String>,
}

fn is_b(seq: &HoppingSequence, j: usize) -> i64 {
    (seq.symbol(j) == Symbol::B) as i64
}

/// Decides whether a giant atom at `n0`, `n0 + d` carries a dressed state at `Δ = 0`.
pub fn giant_vds_condition(seq: &HoppingSequence, n0: usize, d: usize) -> Result<GiantVdsCondition> {
    let n_sites = seq.n_sites();
    if d == 0 || n0 + d >= n_sites {
        return Err(Error::IndexOutOfRange {
            index: n0 + d,
            limit: n_sites,
        });
    }
    let fail = |exponents, reason: &str| GiantVdsCondition {
        n0,
        d,
        satisfied: false,
        exponents,
        reason: Some(reason.to_string()),
    };
    if d % 2 == 1 {
        return Ok(fail(Vec::new(), "odd interior site count required"));
    }
    let m = d / 2;
    let mut exponents = Vec::with_capacity(m);
    let mut k = 0i64;
    exponents.push(k);
    for n in 1..m {
        k += is_b(seq, n0 + 2 * n - 1) - is_b(seq, n0 + 2 * n);
        exponents.push(k);
    }
    // ψ_0 t_{n0} = (-1)^(m-1) ψ_{m-1} t_{n0+d-1}, all ψ positive
    if m.is_multiple_of(2) {
        return Ok(fail(exponents, "sign mismatch at the far leg (d/2 even)"));
    }
    if is_b(seq, n0) != exponents[m - 1] + is_b(seq, n0 + d - 1) {
        return Ok(fail(exponents, "rho exponents differ at the far leg"));
    }
    Ok(GiantVdsCondition {
        n0,
        d,
        satisfied: true,
        exponents,
        reason: None,
    })
}

/// Dressed state of a giant atom at `n0`, `n0 + d` with coupling `g`.
pub fn giant_vds(seq: &HoppingSequence, n0: usize, d: usize, g: f64) -> Result<DressedState> {
    let cond = giant_vds_condition(seq, n0, d)?;
    if !cond.satisfied {
        return Err(Error::VdsConditionUnsatisfied {
            n0,
            d,
            reason: cond.reason.unwrap_or_default(),
        });
    }
    let terms = cond
        .exponents
        .iter()
        .enumerate()
        .map(|(n, &k)| AmplitudeTerm {
            site: n0 + 2 * n + 1,
            sign: if n % 2 == 0 { -1 } else { 1 },
            rho_exponent: k,
        })
        .collect();
    Ok(DressedState {
        emitter: EmitterSpec::giant(n0, d, g),
        n_sites: seq.n_sites(),
        prefactor: g / seq.hopping_at(n0),
        rho: seq.rho(),
        terms,
    })
}

/// Every `n0` with `n0 + d <= n_sites - 1` that admits a giant dressed state.
pub fn allowed_positions(seq: &HoppingSequence, d: usize, n_sites: usize) -> Vec<usize> {
    let n_sites = n_sites.min(seq.n_sites());
    if d == 0 || d >= n_sites {
        return Vec::new();
    }
    (0..n_sites - d)
        .filter(|&n0| giant_vds_condition(seq, n0, d).is_ok_and(|c| c.satisfied))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalVdsOptions {
    /// Build the formal state on a host without an E = 0 gap.
    pub allow_gapless: bool,
    pub bulk_margin: usize,
}

impl Default for LocalVdsOptions {
    fn default() -> Self {
        LocalVdsOptions {
            allow_gapless: false,
            bulk_margin: DEFAULT_BULK_MARGIN,
        }
    }
}

/// Reason the host cannot protect a local dressed state, if any.
pub fn local_gap_violation(seq: &HoppingSequence) -> Option<String> {
    if seq.n_sites() % 2 == 1 {
        return Some(format!("odd chain length N={}", seq.n_sites()));
    }
    if seq.t_a() <= seq.t_b() {
        return Some(format!("need t_A > t_B (t_A={}, t_B={})", seq.t_a(), seq.t_b()));
    }
    (0..seq.len())
        .step_by(2)
        .find(|&j| seq.symbol(j) == Symbol::B)
        .map(|j| format!("even-index hopping {j} is t_B"))
}

pub fn local_vds(seq: &HoppingSequence, n_j: usize, g: f64) -> Result<DressedState> {
    local_vds_with(seq, n_j, g, LocalVdsOptions::default())
}

/// Dressed state of a local emitter at `n_j`.
///
/// Odd `n_j`: cloud on the even sites to its left. Even `n_j`: cloud on the
/// odd sites to its right, up to the chain end.
pub fn local_vds_with(seq: &HoppingSequence, n_j: usize, g: f64, opts: LocalVdsOptions) -> Result<DressedState> {
    let n_sites = seq.n_sites();
    if n_j >= n_sites {
        return Err(Error::IndexOutOfRange {
            index: n_j,
            limit: n_sites,
        });
    }
    if n_j < opts.bulk_margin || n_j + opts.bulk_margin >= n_sites {
        return Err(Error::InvalidSpec(format!(
            "emitter at {n_j} is within {} sites of a chain end",
            opts.bulk_margin
        )));
    }
    if let Some(reason) = local_gap_violation(seq) {
        if !opts.allow_gapless {
            return Err(Error::Gapless(reason));
        }
    }
    let sign = |n: usize| if n.is_multiple_of(2) { -1 } else { 1 };
    let terms: Vec<AmplitudeTerm> = if n_j % 2 == 1 {
        (0..=(n_j - 1) / 2)
            .map(|n| {
                let site = n_j - 1 - 2 * n;
                AmplitudeTerm {
                    site,
                    sign: sign(n),
                    rho_exponent: seq.beta_count(site, n_j - 1).unwrap() as i64,
                }
            })
            .collect()
    } else {
        (0..)
            .map(|n| n_j + 1 + 2 * n)
            .take_while(|&site| site < n_sites)
            .enumerate()
            .map(|(n, site)| AmplitudeTerm {
                site,
                sign: sign(n),
                rho_exponent: seq.beta_count(n_j + 1, site).unwrap() as i64,
            })
            .collect()
    };
    Ok(DressedState {
        emitter: EmitterSpec::local(n_j, g),
        n_sites,
        prefactor: g / seq.t_a(),
        rho: seq.rho(),
        terms,
    })
}

/// Dressed state seeded by `emitter` on the open chain `spec`.
pub fn dressed_state(spec: &WaveguideSpec, emitter: &EmitterSpec) -> Result<DressedState> {
    if emitter.detuning != 0.0 {
        return Err(Error::InvalidSpec("closed forms need a resonant emitter (detuning 0)".into()));
    }
    if spec.boundary != Boundary::Open {
        return Err(Error::InvalidSpec("closed forms need open boundaries".into()));
    }
    let seq = spec
        .hopping_sequence()?
        .ok_or_else(|| Error::InvalidSpec("closed forms need a two-letter hopping host".into()))?;
    match emitter.kind {
        EmitterKind::Local => local_vds(&seq, emitter.position, emitter.g),
        EmitterKind::Giant { leg } => giant_vds(&seq, emitter.position, leg, emitter.g),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VdsReport {
    /// `‖(H − Δ)Ψ‖₂` for the normalized state.
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// `‖H_vac ψ‖₂` of the photonic part on the host with the coupled mode removed.
    pub vacancy_residual: f64,
    pub vacancy_pass: bool,
}

/// Checks the state against a Hamiltonian whose `emitter(0)` is the seeding emitter.
pub fn vds_verify(state: &DressedState, h: &SingleExcitationHamiltonian) -> Result<VdsReport> {
    vds_verify_at(state, h, 0)
}

pub fn vds_verify_at(state: &DressedState, h: &SingleExcitationHamiltonian, emitter_index: usize) -> Result<VdsReport> {
    let psi = state.vector_in(h, emitter_index)?;
    let mut r = h.matrix().mul_vec(&psi);
    let delta = state.emitter.detuning;
    for (ri, pi) in r.iter_mut().zip(&psi) {
        *ri -= delta * pi;
    }
    let tolerance = 1e-10 * h.matrix().frobenius_norm();
    let residual = norm(&r);

    // Remove every emitter, rotate the giant legs into (χ, χ⊥) and drop χ.
    let emitters: Vec<BasisLabel> = h
        .labels()
        .iter()
        .copied()
        .filter(|l| matches!(l, BasisLabel::Emitter(_)))
        .collect();
    let host = h.vacancy(&emitters)?;
    let vac = match state.emitter.kind {
        EmitterKind::Local => host.vacancy(&[BasisLabel::Site(state.emitter.position)])?,
        EmitterKind::Giant { leg } => {
            let (a, b) = (state.emitter.position, state.emitter.position + leg);
            host.rotate_pair(a, b)?.vacancy(&[BasisLabel::Chi(a, b)])?
        }
    };
    let photonic = state.photonic_vector();
    let sub: Vec<f64> = vac
        .labels()
        .iter()
        .map(|l| match *l {
            BasisLabel::Site(n) => photonic[n],
            BasisLabel::ChiPerp(a, b) => (photonic[a] - photonic[b]) * std::f64::consts::FRAC_1_SQRT_2,
            _ => 0.0,
        })
        .collect();
    let vacancy_residual = norm(&vac.matrix().mul_vec(&sub));
    Ok(VdsReport {
        residual,
        tolerance,
        pass: residual <= tolerance,
        vacancy_residual,
        vacancy_pass: vacancy_residual <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_coupled;
    use crate::words::SubstitutionRule;

    fn fib_seq(n: usize, t_b: f64) -> HoppingSequence {
        WaveguideSpec::fibonacci(SubstitutionRule::FIBONACCI, n, t_b)
            .hopping_sequence()
            .unwrap()
            .unwrap()
    }

    #[test]
    fn known_giant_positions() {
        let seq = fib_seq(60, 0.2);
        assert!(giant_vds_condition(&seq, 5, 6).unwrap().satisfied);
        assert!(giant_vds_condition(&seq, 7, 6).unwrap().satisfied);
        assert!(!giant_vds_condition(&seq, 9, 4).unwrap().satisfied);
        assert!(!giant_vds_condition(&seq, 5, 5).unwrap().satisfied);
        assert!(giant_vds_condition(&seq, 55, 6).is_err());
    }

    #[test]
    fn psi_a_and_psi_b() {
        let (g, t_b) = (0.05, 0.2);
        let seq = fib_seq(60, t_b);
        let rho = t_b;
        let a = giant_vds(&seq, 5, 6, g).unwrap();
        let expect_a = [(6, -g), (8, g * rho), (10, -g)];
        for ((s, v), (es, ev)) in a.photonic().into_iter().zip(expect_a) {
            assert_eq!(s, es);
            assert!((v - ev).abs() < 1e-15);
        }
        let b = giant_vds(&seq, 7, 6, g).unwrap();
        let expect_b = [(8, -g / t_b * rho), (10, g / t_b), (12, -g / t_b)];
        for ((s, v), (es, ev)) in b.photonic().into_iter().zip(expect_b) {
            assert_eq!(s, es);
            assert!((v - ev).abs() < 1e-14);
        }
    }

    #[test]
    fn d2_is_aa() {
        let seq = fib_seq(200, 0.3);
        let pos = allowed_positions(&seq, 2, 200);
        for n0 in 0..198 {
            let aa = seq.symbol(n0) == Symbol::A && seq.symbol(n0 + 1) == Symbol::A;
            assert_eq!(pos.contains(&n0), aa);
        }
        assert!(pos.windows(2).all(|w| w[1] - w[0] > 1));
        let s = giant_vds(&seq, pos[0], 2, 0.1).unwrap();
        assert_eq!(s.photonic(), vec![(pos[0] + 1, -0.1)]);
    }

    #[test]
    fn residuals_pass_and_perturbation_fails() {
        let spec = WaveguideSpec::fibonacci(SubstitutionRule::FIBONACCI, 60, 0.2);
        let e = EmitterSpec::giant(5, 6, 0.05);
        let st = dressed_state(&spec, &e).unwrap();
        let h = build_coupled(&spec, &[e]).unwrap();
        let rep = vds_verify(&st, &h).unwrap();
        assert!(rep.pass && rep.vacancy_pass, "{rep:?}");

        let mut bad = st.clone();
        bad.prefactor *= 1.0 + 1e-3;
        assert!(!vds_verify(&bad, &h).unwrap().pass);
    }

    #[test]
    fn local_states() {
        let spec = WaveguideSpec::fibonacci(SubstitutionRule::new(1, 2).unwrap(), 144, 0.2);
        for n in [10, 13, 15, 20, 21, 141] {
            let e = EmitterSpec::local(n, 0.05);
            let st = dressed_state(&spec, &e).unwrap();
            assert!(st.terms().iter().all(|t| t.site % 2 != n % 2));
            assert_eq!(st.amplitude_at(n), 0.0);
            let h = build_coupled(&spec, &[e]).unwrap();
            let rep = vds_verify(&st, &h).unwrap();
            assert!(rep.pass && rep.vacancy_pass, "n={n} {rep:?}");
        }
        assert!(matches!(
            dressed_state(&spec, &EmitterSpec::local(1, 0.05)),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn ssh_and_uniform_limits() {
        let ssh = WaveguideSpec::ssh(40, 0.5).hopping_sequence().unwrap().unwrap();
        let st = local_vds(&ssh, 21, 0.1).unwrap();
        for (n, t) in st.terms().iter().enumerate() {
            assert_eq!(t.rho_exponent, n as i64);
        }
        let uni = WaveguideSpec::uniform(40).hopping_sequence().unwrap().unwrap();
        assert!(matches!(local_vds(&uni, 21, 0.1), Err(Error::Gapless(_))));
        let opts = LocalVdsOptions {
            allow_gapless: true,
            ..Default::default()
        };
        let st = local_vds_with(&uni, 20, 0.1, opts).unwrap();
        assert!(st.photonic().iter().all(|(_, v)| (v.abs() - 0.1).abs() < 1e-15));
    }

    #[test]
    fn gapless_fibonacci_refused() {
        let seq = fib_seq(100, 0.2);
        assert!(matches!(local_vds(&seq, 20, 0.05), Err(Error::Gapless(_))));
    }

    #[test]
    fn normalization_is_close_to_one() {
        let seq = fib_seq(60, 0.2);
        let st = giant_vds(&seq, 5, 6, 0.01).unwrap();
        assert!((st.norm() - 1.0).abs() < 1e-3);
        assert!((norm(&st.photonic_vector()).powi(2) + st.epsilon().powi(2) - 1.0).abs() < 1e-12);
    }
}
