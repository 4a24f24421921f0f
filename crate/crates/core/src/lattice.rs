//! Single-excitation Hamiltonians for coupled-resonator waveguides and the
//! emitters attached to them.
//!
//! Everything is written in the frame rotating at the bare resonator
//! frequency: resonator diagonals are zero (except for the AAH on-site
//! modulation) and emitter diagonals carry the detuning. Energies are in
//! units of `t_A`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::words::{HoppingSequence, SubstitutionRule, Symbol, SymbolWord};

/// Inverse golden mean `(√5 - 1)/2`, the default AAH modulation frequency.
pub const INVERSE_GOLDEN_MEAN: f64 = 0.618_033_988_749_894_9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    Open,
    Periodic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Model {
    Uniform,
    /// `t_{2n} = t_A`, `t_{2n+1} = t_B`.
    Ssh,
    Fibonacci(SubstitutionRule),
    /// On-site `2V cos(2π β n + φ)`, uniform hopping `t_A`.
    Aah { v: f64, beta: f64, phi: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveguideSpec {
    pub model: Model,
    pub n_sites: usize,
    pub t_a: f64,
    pub t_b: f64,
    pub boundary: Boundary,
}

impl WaveguideSpec {
    pub fn uniform(n_sites: usize) -> Self {
        WaveguideSpec {
            model: Model::Uniform,
            n_sites,
            t_a: 1.0,
            t_b: 1.0,
            boundary: Boundary::Open,
        }
    }

    pub fn ssh(n_sites: usize, t_b: f64) -> Self {
        WaveguideSpec {
            model: Model::Ssh,
            t_b,
            ..WaveguideSpec::uniform(n_sites)
        }
    }

    pub fn fibonacci(rule: SubstitutionRule, n_sites: usize, t_b: f64) -> Self {
        WaveguideSpec {
            model: Model::Fibonacci(rule),
            t_b,
            ..WaveguideSpec::uniform(n_sites)
        }
    }

    /// AAH chain with the inverse golden mean frequency and zero phase.
    pub fn aah(n_sites: usize, v: f64) -> Self {
        WaveguideSpec {
            model: Model::Aah {
                v,
                beta: INVERSE_GOLDEN_MEAN,
                phi: 0.0,
            },
            ..WaveguideSpec::uniform(n_sites)
        }
    }

    pub fn periodic(self) -> Self {
        WaveguideSpec {
            boundary: Boundary::Periodic,
            ..self
        }
    }

    pub fn with_sites(self, n_sites: usize) -> Self {
        WaveguideSpec { n_sites, ..self }
    }

    pub fn with_t_a(self, t_a: f64) -> Self {
        WaveguideSpec { t_a, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 {
            return Err(Error::InvalidSpec(format!("need N >= 2 sites, got {}", self.n_sites)));
        }
        if self.boundary == Boundary::Periodic && self.n_sites < 3 {
            return Err(Error::InvalidSpec("periodic boundary needs N >= 3".into()));
        }
        if !(self.t_a > 0.0 && self.t_a.is_finite()) {
            return Err(Error::InvalidSpec(format!("t_A must be positive, got {}", self.t_a)));
        }
        match self.model {
            Model::Ssh | Model::Fibonacci(_) if !(self.t_b > 0.0 && self.t_b.is_finite()) => {
                return Err(Error::InvalidSpec(format!("t_B must be positive, got {}", self.t_b)));
            }
            Model::Fibonacci(_) if self.boundary == Boundary::Periodic => {
                return Err(Error::InvalidSpec(
                    "Fibonacci waveguides have open boundaries only".into(),
                ));
            }
            Model::Aah { v, beta, phi } if !(v.is_finite() && beta.is_finite() && phi.is_finite()) => {
                return Err(Error::InvalidSpec("AAH parameters must be finite".into()));
            }
            _ => {}
        }
        Ok(())
    }

    /// The hopping word of the model over `n_bonds` bonds; `None` for AAH.
    ///
    /// Uniform chains read as `AAA…` with `t_B = t_A`, SSH chains as `ABAB…`.
    pub fn hopping_sequence(&self) -> Result<Option<HoppingSequence>> {
        self.validate()?;
        let n_bonds = self.n_bonds();
        let seq = match self.model {
            Model::Uniform => HoppingSequence::new(
                SymbolWord::from_symbols(vec![Symbol::A; n_bonds]),
                self.t_a,
                self.t_a,
            )?,
            Model::Ssh => HoppingSequence::new(
                SymbolWord::from_symbols(
                    (0..n_bonds)
                        .map(|j| if j % 2 == 0 { Symbol::A } else { Symbol::B })
                        .collect(),
                ),
                self.t_a,
                self.t_b,
            )?,
            Model::Fibonacci(rule) => {
                HoppingSequence::new(rule.generate_at_least(n_bonds)?.prefix(n_bonds), self.t_a, self.t_b)?
            }
            Model::Aah { .. } => return Ok(None),
        };
        Ok(Some(seq))
    }

    fn n_bonds(&self) -> usize {
        match self.boundary {
            Boundary::Open => self.n_sites - 1,
            Boundary::Periodic => self.n_sites,
        }
    }

    /// Bond hoppings `t_0 … t_{N-2}` (plus the wrap bond `t_{N-1}` when periodic).
    pub fn hoppings(&self) -> Result<Vec<f64>> {
        Ok(match self.hopping_sequence()? {
            Some(seq) => seq.hoppings(),
            None => vec![self.t_a; self.n_bonds()],
        })
    }

    pub fn onsite(&self) -> Vec<f64> {
        match self.model {
            Model::Aah { v, beta, phi } => (0..self.n_sites)
                .map(|n| 2.0 * v * (std::f64::consts::TAU * beta * n as f64 + phi).cos())
                .collect(),
            _ => vec![0.0; self.n_sites],
        }
    }
}

/// Rational approximant `F_{k-1}/F_k` of the inverse golden mean when `n` is a
/// Fibonacci number `F_k` (with `F_1 = 1, F_2 = 2, …`), for commensurate AAH
/// chains under periodic boundaries.
pub fn fibonacci_approximant(n: usize) -> Option<f64> {
    let (mut prev, mut cur) = (1usize, 2usize);
    while cur < n {
        (prev, cur) = (cur, prev + cur);
    }
    (cur == n).then(|| prev as f64 / cur as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitterKind {
    Local,
    /// Two-legged giant atom coupled at `n` and `n + leg`.
    Giant { leg: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmitterSpec {
    pub kind: EmitterKind,
    /// Coupling site (first coupling site for giant atoms).
    pub position: usize,
    pub g: f64,
    pub detuning: f64,
}

impl EmitterSpec {
    pub fn local(position: usize, g: f64) -> Self {
        EmitterSpec {
            kind: EmitterKind::Local,
            position,
            g,
            detuning: 0.0,
        }
    }

    pub fn giant(position: usize, leg: usize, g: f64) -> Self {
        EmitterSpec {
            kind: EmitterKind::Giant { leg },
            position,
            g,
            detuning: 0.0,
        }
    }

    pub fn with_detuning(self, detuning: f64) -> Self {
        EmitterSpec { detuning, ..self }
    }

    /// Resonator sites this emitter couples to.
    pub fn footprint(&self) -> Vec<usize> {
        match self.kind {
            EmitterKind::Local => vec![self.position],
            EmitterKind::Giant { leg } => vec![self.position, self.position + leg],
        }
    }

    fn validate(&self, n_sites: usize) -> Result<()> {
        if let EmitterKind::Giant { leg: 0 } = self.kind {
            return Err(Error::InvalidSpec("giant atom leg distance must be >= 1".into()));
        }
        let last = *self.footprint().last().unwrap();
        if last >= n_sites {
            return Err(Error::IndexOutOfRange {
                index: last,
                limit: n_sites,
            });
        }
        if !(self.g.is_finite() && self.detuning.is_finite()) {
            return Err(Error::InvalidSpec("emitter parameters must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisLabel {
    Site(usize),
    Emitter(usize),
    /// `(|a> + |b>)/√2`
    Chi(usize, usize),
    /// `(|a> - |b>)/√2`
    ChiPerp(usize, usize),
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Site(n) => write!(f, "site({n})"),
            BasisLabel::Emitter(j) => write!(f, "emitter({j})"),
            BasisLabel::Chi(a, b) => write!(f, "chi({a},{b})"),
            BasisLabel::ChiPerp(a, b) => write!(f, "chi_perp({a},{b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildWarning {
    /// Two emitters share a coupling site.
    CoLocated { first: usize, second: usize, site: usize },
}

#[derive(Clone, Debug)]
pub struct SingleExcitationHamiltonian {
    matrix: SymMatrix,
    labels: Vec<BasisLabel>,
    is_tridiagonal: bool,
    warnings: Vec<BuildWarning>,
}

impl SingleExcitationHamiltonian {
    pub fn matrix(&self) -> &SymMatrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn is_tridiagonal(&self) -> bool {
        self.is_tridiagonal
    }

    pub fn warnings(&self) -> &[BuildWarning] {
        &self.warnings
    }

    pub fn index_of(&self, label: BasisLabel) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn n_emitters(&self) -> usize {
        self.labels
            .iter()
            .filter(|l| matches!(l, BasisLabel::Emitter(_)))
            .count()
    }

    /// Deletes the rows and columns of the given labels.
    pub fn vacancy(&self, removed: &[BasisLabel]) -> Result<Self> {
        for r in removed {
            if self.index_of(*r).is_none() {
                return Err(Error::UnknownLabel(r.to_string()));
            }
        }
        let keep: Vec<usize> = (0..self.dim())
            .filter(|&i| !removed.contains(&self.labels[i]))
            .collect();
        let matrix = self.matrix.submatrix(&keep);
        Ok(SingleExcitationHamiltonian {
            is_tridiagonal: matrix.is_tridiagonal(),
            labels: keep.iter().map(|&i| self.labels[i]).collect(),
            matrix,
            warnings: self.warnings.clone(),
        })
    }

    /// Rotates sites `a`, `b` into `χ = (|a>+|b>)/√2` and `χ⊥ = (|a>-|b>)/√2`.
    /// `χ` takes the slot of `a` and `χ⊥` the slot of `b`.
    pub fn rotate_pair(&self, a: usize, b: usize) -> Result<Self> {
        let ia = self
            .index_of(BasisLabel::Site(a))
            .ok_or_else(|| Error::UnknownLabel(BasisLabel::Site(a).to_string()))?;
        let ib = self
            .index_of(BasisLabel::Site(b))
            .ok_or_else(|| Error::UnknownLabel(BasisLabel::Site(b).to_string()))?;
        if ia == ib {
            return Err(Error::InvalidSpec("rotation needs two distinct sites".into()));
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let old = &self.matrix;
        let mut m = old.clone();
        for k in 0..self.dim() {
            if k == ia || k == ib {
                continue;
            }
            let (x, y) = (old.get(k, ia), old.get(k, ib));
            m.set(k, ia, s * (x + y));
            m.set(k, ib, s * (x - y));
        }
        let (haa, hbb, hab) = (old.get(ia, ia), old.get(ib, ib), old.get(ia, ib));
        m.set(ia, ia, 0.5 * (haa + hbb) + hab);
        m.set(ib, ib, 0.5 * (haa + hbb) - hab);
        m.set(ia, ib, 0.5 * (haa - hbb));
        let mut labels = self.labels.clone();
        labels[ia] = BasisLabel::Chi(a, b);
        labels[ib] = BasisLabel::ChiPerp(a, b);
        Ok(SingleExcitationHamiltonian {
            is_tridiagonal: m.is_tridiagonal(),
            matrix: m,
            labels,
            warnings: self.warnings.clone(),
        })
    }
}

/// Resonator-only Hamiltonian.
pub fn build_waveguide(spec: &WaveguideSpec) -> Result<SingleExcitationHamiltonian> {
    build_coupled(spec, &[])
}

/// Resonators plus emitters: basis `site(0..N)` followed by `emitter(0..N_e)`.
pub fn build_coupled(spec: &WaveguideSpec, emitters: &[EmitterSpec]) -> Result<SingleExcitationHamiltonian> {
    spec.validate()?;
    let n = spec.n_sites;
    for e in emitters {
        e.validate(n)?;
    }
    let dim = n + emitters.len();
    let mut m = SymMatrix::zeros(dim);
    for (i, v) in spec.onsite().into_iter().enumerate() {
        m.set(i, i, v);
    }
    let hoppings = spec.hoppings()?;
    for (j, &t) in hoppings.iter().enumerate().take(n - 1) {
        m.set(j, j + 1, t);
    }
    if spec.boundary == Boundary::Periodic {
        m.add(n - 1, 0, hoppings[n - 1]);
    }

    let mut warnings = Vec::new();
    for (j, e) in emitters.iter().enumerate() {
        let row = n + j;
        m.set(row, row, e.detuning);
        for site in e.footprint() {
            m.add(row, site, e.g);
        }
        for (k, other) in emitters.iter().enumerate().take(j) {
            for site in e.footprint() {
                if other.footprint().contains(&site) {
                    warnings.push(BuildWarning::CoLocated {
                        first: k,
                        second: j,
                        site,
                    });
                }
            }
        }
    }

    let labels = (0..n)
        .map(BasisLabel::Site)
        .chain((0..emitters.len()).map(BasisLabel::Emitter))
        .collect();
    Ok(SingleExcitationHamiltonian {
        matrix: m,
        labels,
        is_tridiagonal: emitters.is_empty() && spec.boundary == Boundary::Open,
        warnings,
    })
}
