//! Host and emitter settings from flags and an optional JSON config file.
//!
//! Flags win over the file; the file wins over per-command defaults.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::lattice::{Boundary, EmitterSpec, Model, WaveguideSpec, INVERSE_GOLDEN_MEAN};
use crate::words::SubstitutionRule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Uniform,
    Ssh,
    Fibonacci,
    Aah,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    Open,
    Periodic,
}

#[derive(Args, Clone, Debug, Default)]
pub struct ModelArgs {
    /// Host lattice.
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// Substitution parameter p (A -> A^p B).
    #[arg(long)]
    pub p: Option<u32>,
    /// Substitution parameter q (B -> A^q).
    #[arg(long)]
    pub q: Option<u32>,
    /// Number of resonators.
    #[arg(long = "N", short = 'N', visible_alias = "n")]
    pub n: Option<usize>,
    #[arg(long = "tA")]
    pub t_a: Option<f64>,
    #[arg(long = "tB")]
    pub t_b: Option<f64>,
    #[arg(long, value_enum)]
    pub boundary: Option<BoundaryKind>,
    /// AAH modulation strength.
    #[arg(long = "V")]
    pub v: Option<f64>,
    /// AAH modulation frequency.
    #[arg(long)]
    pub beta: Option<f64>,
    /// AAH phase.
    #[arg(long)]
    pub phi: Option<f64>,
    /// JSON file with keys model, p, q, N, tA, tB, boundary, V, beta, phi, emitters.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub model: Option<ModelKind>,
    pub p: Option<u32>,
    pub q: Option<u32>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    #[serde(rename = "tA")]
    pub t_a: Option<f64>,
    #[serde(rename = "tB")]
    pub t_b: Option<f64>,
    pub boundary: Option<BoundaryKind>,
    #[serde(rename = "V")]
    pub v: Option<f64>,
    pub beta: Option<f64>,
    pub phi: Option<f64>,
    pub emitters: Option<Vec<EmitterEntry>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmitterEntry {
    pub kind: EmitterKindName,
    pub n: usize,
    pub d: Option<usize>,
    pub g: f64,
    pub delta: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmitterKindName {
    Local,
    Giant,
}

impl EmitterEntry {
    fn to_spec(&self) -> Result<EmitterSpec> {
        let e = match (self.kind, self.d) {
            (EmitterKindName::Local, None) => EmitterSpec::local(self.n, self.g),
            (EmitterKindName::Giant, Some(d)) => EmitterSpec::giant(self.n, d, self.g),
            (EmitterKindName::Local, Some(_)) => {
                return Err(Error::InvalidSpec("local emitters take no leg distance d".into()))
            }
            (EmitterKindName::Giant, None) => {
                return Err(Error::InvalidSpec("giant emitters need a leg distance d".into()))
            }
        };
        Ok(e.with_detuning(self.delta.unwrap_or(0.0)))
    }
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidSpec(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidSpec(format!("malformed config {}: {e}", path.display())))
    }
}

/// Per-command fallbacks.
#[derive(Clone, Copy, Debug)]
pub struct ModelDefaults {
    pub model: ModelKind,
    pub p: u32,
    pub q: u32,
    pub n: usize,
    pub t_b: f64,
}

impl Default for ModelDefaults {
    fn default() -> Self {
        ModelDefaults {
            model: ModelKind::Fibonacci,
            p: 1,
            q: 1,
            n: 144,
            t_b: 0.2,
        }
    }
}

/// Resolved host plus any emitters listed in the config file.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub spec: WaveguideSpec,
    pub emitters: Vec<EmitterSpec>,
}

impl ModelArgs {
    pub fn resolve(&self, defaults: ModelDefaults) -> Result<Resolved> {
        let file = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let model = self.model.or(file.model).unwrap_or(defaults.model);
        let p = self.p.or(file.p).unwrap_or(defaults.p);
        let q = self.q.or(file.q).unwrap_or(defaults.q);
        let n_sites = self.n.or(file.n).unwrap_or(defaults.n);
        let t_a = self.t_a.or(file.t_a).unwrap_or(1.0);
        let t_b = self.t_b.or(file.t_b).unwrap_or(defaults.t_b);
        let boundary = match self.boundary.or(file.boundary).unwrap_or(BoundaryKind::Open) {
            BoundaryKind::Open => Boundary::Open,
            BoundaryKind::Periodic => Boundary::Periodic,
        };
        let model = match model {
            ModelKind::Uniform => Model::Uniform,
            ModelKind::Ssh => Model::Ssh,
            ModelKind::Fibonacci => Model::Fibonacci(SubstitutionRule::new(p, q)?),
            ModelKind::Aah => Model::Aah {
                v: self.v.or(file.v).unwrap_or(1.0),
                beta: self.beta.or(file.beta).unwrap_or(INVERSE_GOLDEN_MEAN),
                phi: self.phi.or(file.phi).unwrap_or(0.0),
            },
        };
        let t_b = if model == Model::Uniform { t_a } else { t_b };
        let spec = WaveguideSpec {
            model,
            n_sites,
            t_a,
            t_b,
            boundary,
        };
        spec.validate()?;
        let emitters = file
            .emitters
            .unwrap_or_default()
            .iter()
            .map(EmitterEntry::to_spec)
            .collect::<Result<Vec<_>>>()?;
        Ok(Resolved { spec, emitters })
    }
}

/// `local:N` or `giant:N:D` on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitterArg {
    Local(usize),
    Giant(usize, usize),
}

impl EmitterArg {
    pub fn to_spec(self, g: f64, delta: f64) -> EmitterSpec {
        match self {
            EmitterArg::Local(n) => EmitterSpec::local(n, g),
            EmitterArg::Giant(n, d) => EmitterSpec::giant(n, d, g),
        }
        .with_detuning(delta)
    }
}

impl FromStr for EmitterArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |x: &str| x.parse::<usize>().map_err(|e| format!("bad number {x:?}: {e}"));
        match parts.as_slice() {
            ["local", n] => Ok(EmitterArg::Local(num(n)?)),
            ["giant", n, d] => Ok(EmitterArg::Giant(num(n)?, num(d)?)),
            _ => Err(format!("expected local:N or giant:N:D, got {s:?}")),
        }
    }
}
