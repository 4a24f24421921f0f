//! The `fibwqed` command line.
//!
//! Every subcommand renders its whole output in memory and writes it only on
//! success, so a failing run never leaves a partial file. Exit status is 2
//! for bad input and 1 for a failed computation.

pub mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bound_states::{allowed_positions, dressed_state, local_vds_with, vds_verify, LocalVdsOptions};
use crate::dynamics::{compare, evolve_effective, evolve_exact, uniform_grid, Initial};
use crate::effective::{allowed_giant_roster, build_effective, fibonacci_block_structure, BlockKind};
use crate::error::{Error, Result};
use crate::fmt_f64;
use crate::lattice::{build_coupled, build_waveguide, EmitterKind, EmitterSpec, Model};
use crate::multifractal::{BoxCounting, ProbabilityMeasure};
use crate::spectral::{central_gap, dos, eigensolve, gap_map, ipr_scaling, DEFAULT_BINS};
use crate::words::SubstitutionRule;

use config::{EmitterArg, ModelArgs, ModelDefaults};

const SCHEMA_PREFIX: &str = "fibwqed";

#[derive(Parser, Debug)]
#[command(name = "fibwqed", version, about = "Waveguide QED on Fibonacci-Lucas resonator arrays")]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Substitution word or its factor census.
    Sequence(SequenceArgs),
    /// Eigenvalues or density of states of a waveguide.
    Spectrum(SpectrumArgs),
    /// Central gap over a (p, q) grid.
    Gapmap(GapmapArgs),
    /// Mean inverse participation ratio against system size.
    Ipr(IprArgs),
    /// Box-counting singularity spectrum of one eigenstate.
    Multifractal(MultifractalArgs),
    /// Closed-form dressed state of one emitter.
    Vds(VdsArgs),
    /// Allowed giant-atom positions for each leg distance.
    VdsMap(VdsMapArgs),
    /// Photon-mediated emitter Hamiltonian.
    Effective(EffectiveArgs),
    /// Exact versus effective emitter populations.
    Dynamics(DynamicsArgs),
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("size").required(true).args(["k", "length", "census"]))]
pub struct SequenceArgs {
    #[arg(long, default_value_t = 1)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub q: u32,
    /// Generation index.
    #[arg(long)]
    pub k: Option<usize>,
    /// Shortest generation at least this long.
    #[arg(long)]
    pub length: Option<usize>,
    /// List the factors of this length instead of the word.
    #[arg(long)]
    pub census: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Emit the binned DOS instead of the eigenvalue list.
    #[arg(long)]
    pub dos: bool,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,
}

#[derive(Args, Debug)]
pub struct GapmapArgs {
    #[arg(long, default_value_t = 1)]
    pub pmin: u32,
    #[arg(long, default_value_t = 6)]
    pub pmax: u32,
    #[arg(long, default_value_t = 1)]
    pub qmin: u32,
    #[arg(long, default_value_t = 6)]
    pub qmax: u32,
    #[arg(long = "tB", default_value_t = 0.2)]
    pub t_b: f64,
    #[arg(long = "N", short = 'N', visible_alias = "n", default_value_t = 600)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct IprArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Ascending chain lengths, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
}

#[derive(Args, Debug)]
pub struct MultifractalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Eigenstate index in ascending energy order (default: middle of the spectrum).
    #[arg(long)]
    pub state_index: Option<usize>,
    #[arg(long, default_value_t = -8.0, allow_negative_numbers = true)]
    pub qmin: f64,
    #[arg(long, default_value_t = 8.0, allow_negative_numbers = true)]
    pub qmax: f64,
    #[arg(long, default_value_t = 0.25)]
    pub qstep: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VdsKind {
    Giant,
    Local,
}

#[derive(Args, Debug)]
pub struct VdsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum)]
    pub kind: VdsKind,
    /// Coupling site (first leg for giant atoms).
    #[arg(long)]
    pub n0: usize,
    /// Leg distance of a giant atom.
    #[arg(long, default_value_t = 6)]
    pub d: usize,
    #[arg(long, default_value_t = 0.05)]
    pub g: f64,
    /// Build a local state on a host without a gap at E = 0.
    #[arg(long)]
    pub allow_gapless: bool,
}

#[derive(Args, Debug)]
pub struct VdsMapArgs {
    #[arg(long, default_value_t = 1)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub q: u32,
    #[arg(long, default_value_t = 14)]
    pub dmax: usize,
    #[arg(long = "N", short = 'N', visible_alias = "n", default_value_t = 100)]
    pub n: usize,
}

#[derive(Args, Debug, Clone)]
pub struct RosterArgs {
    /// `local:N` or `giant:N:D`; repeatable. Adds to emitters from --config.
    #[arg(long = "emitter")]
    pub emitters: Vec<EmitterArg>,
    /// Place giant atoms with this leg distance at every allowed position.
    #[arg(long)]
    pub roster_d: Option<usize>,
    /// Coupling for emitters given on the command line.
    #[arg(long, default_value_t = 0.05)]
    pub g: f64,
}

#[derive(Args, Debug)]
pub struct EffectiveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub roster: RosterArgs,
    /// Use normalized dressed states (divide by the two norms).
    #[arg(long)]
    pub normalized: bool,
    /// Also write the JSON block report here (CSV mode).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Gauge {
    Unit,
    Normalized,
}

#[derive(Args, Debug)]
pub struct DynamicsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub roster: RosterArgs,
    /// Initially excited emitter (position order).
    #[arg(long, default_value_t = 0)]
    pub initial: usize,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// End time (default 20π/(√2 t_a) with t_a = g²/t_A).
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Dressed-state normalization used for the effective matrix.
    #[arg(long, value_enum, default_value_t = Gauge::Normalized)]
    pub gauge: Gauge,
}

/// Rendered output plus the stderr summary line.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub summary: String,
    /// Extra files (path, contents) written alongside the main output.
    pub extra: Vec<(PathBuf, String)>,
}

/// Parses `args` (including the program name), runs, and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(summary) => {
            eprintln!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}

/// Runs the command and writes its outputs; returns the summary line.
pub fn execute(cli: &Cli) -> Result<String> {
    if let Some(n) = cli.output.threads {
        if n == 0 {
            return Err(Error::InvalidSpec("--threads must be >= 1".into()));
        }
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let outcome = run(&cli.command, cli.output.format)?;
    match &cli.output.output {
        Some(path) => write_atomic(path, &outcome.body)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(outcome.body.as_bytes())
                .map_err(|e| Error::InvalidSpec(format!("cannot write stdout: {e}")))?;
        }
    }
    for (path, body) in &outcome.extra {
        write_atomic(path, body)?;
    }
    Ok(outcome.summary)
}

fn write_atomic(path: &Path, body: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::InvalidSpec(format!("cannot write {}: {e}", path.display()));
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidSpec(format!("not a file path: {}", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    std::fs::write(&tmp, body).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

/// Computes a command's output without touching the filesystem (except reading `--config`).
pub fn run(command: &Command, format: Format) -> Result<Outcome> {
    match command {
        Command::Sequence(a) => sequence(a, format),
        Command::Spectrum(a) => spectrum(a, format),
        Command::Gapmap(a) => gapmap(a, format),
        Command::Ipr(a) => ipr(a, format),
        Command::Multifractal(a) => multifractal(a, format),
        Command::Vds(a) => vds(a, format),
        Command::VdsMap(a) => vds_map(a, format),
        Command::Effective(a) => effective(a, format),
        Command::Dynamics(a) => dynamics(a, format),
    }
}

fn schema(name: &str) -> String {
    format!("{SCHEMA_PREFIX}.{name}/1")
}

fn json_body(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn outcome(body: String, summary: String) -> Outcome {
    Outcome {
        body,
        summary,
        extra: Vec::new(),
    }
}

fn model_json(spec: &crate::lattice::WaveguideSpec) -> Value {
    let (name, extra) = match spec.model {
        Model::Uniform => ("uniform", json!({})),
        Model::Ssh => ("ssh", json!({})),
        Model::Fibonacci(r) => ("fibonacci", json!({"p": r.p(), "q": r.q()})),
        Model::Aah { v, beta, phi } => ("aah", json!({"V": v, "beta": beta, "phi": phi})),
    };
    let mut m = json!({
        "model": name,
        "N": spec.n_sites,
        "tA": spec.t_a,
        "tB": spec.t_b,
        "boundary": match spec.boundary {
            crate::lattice::Boundary::Open => "open",
            crate::lattice::Boundary::Periodic => "periodic",
        },
    });
    if let (Value::Object(m), Value::Object(e)) = (&mut m, extra) {
        m.extend(e);
    }
    m
}

fn sequence(a: &SequenceArgs, format: Format) -> Result<Outcome> {
    let rule = SubstitutionRule::new(a.p, a.q)?;
    if let Some(len) = a.census {
        let c = rule.census(len)?;
        let factors: Vec<String> = c.factors.iter().map(|f| f.to_string()).collect();
        let summary = format!(
            "({},{}) census: {} factors of length {} (generation {}, stable: {})",
            a.p,
            a.q,
            factors.len(),
            len,
            c.generation,
            c.stable
        );
        let body = match format {
            Format::Csv => factors.iter().map(|f| format!("{f}\n")).collect(),
            Format::Json => json_body(&json!({
                "schema": schema("census"),
                "p": a.p, "q": a.q, "length": len,
                "generation": c.generation, "stable": c.stable,
                "factors": factors,
            })),
        };
        return Ok(outcome(body, summary));
    }
    let word = match (a.k, a.length) {
        (Some(k), _) => rule.generate(k)?,
        (None, Some(n)) => rule.generate_at_least(n)?,
        (None, None) => unreachable!("clap requires one of --k, --length, --census"),
    };
    let generation = word.generation().unwrap_or_default();
    let summary = format!("({},{}) generation {}: length {}", a.p, a.q, generation, word.len());
    let body = match format {
        Format::Csv => format!("{word}\n"),
        Format::Json => json_body(&json!({
            "schema": schema("sequence"),
            "p": a.p, "q": a.q, "generation": generation,
            "length": word.len(), "word": word.to_string(),
        })),
    };
    Ok(outcome(body, summary))
}

fn spectrum(a: &SpectrumArgs, format: Format) -> Result<Outcome> {
    let r = a.model.resolve(ModelDefaults::default())?;
    let d = eigensolve(&build_waveguide(&r.spec)?)?;
    let e = d.values();
    let gap = central_gap(e);
    let curve = dos(e, a.bins)?;
    let summary = format!("spectrum: {} levels in [{:.6}, {:.6}], central gap {:.6}", e.len(), e[0], e[e.len() - 1], gap);
    let body = match (format, a.dos) {
        (Format::Csv, false) => {
            let mut s = String::from("index,energy,integrated\n");
            for (i, (x, n)) in curve.energies.iter().zip(&curve.integrated).enumerate() {
                let _ = writeln!(s, "{i},{},{}", fmt_f64(*x), fmt_f64(*n));
            }
            s
        }
        (Format::Csv, true) => {
            let mut s = String::from("energy_low,energy_high,count,density\n");
            for (k, c) in curve.counts.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{},{},{c},{}",
                    fmt_f64(curve.edges[k]),
                    fmt_f64(curve.edges[k + 1]),
                    fmt_f64(curve.density[k])
                );
            }
            s
        }
        (Format::Json, _) => json_body(&json!({
            "schema": schema("spectrum"),
            "host": model_json(&r.spec),
            "eigenvalues": e,
            "central_gap": gap,
            "dos": {"edges": curve.edges, "counts": curve.counts, "density": curve.density},
            "integrated": curve.integrated,
        })),
    };
    Ok(outcome(body, summary))
}

fn gapmap(a: &GapmapArgs, format: Format) -> Result<Outcome> {
    if a.pmin == 0 || a.qmin == 0 || a.pmin > a.pmax || a.qmin > a.qmax {
        return Err(Error::InvalidSpec("need 1 <= pmin <= pmax and 1 <= qmin <= qmax".into()));
    }
    let cells = gap_map(a.pmin..=a.pmax, a.qmin..=a.qmax, a.t_b, a.n)?;
    let gapped = cells.iter().filter(|c| c.gapped).count();
    let summary = format!(
        "gapmap: {} of {} cells gapped at N={}, threshold {:.6}",
        gapped,
        cells.len(),
        cells[0].n_sites,
        cells[0].threshold
    );
    let body = match format {
        Format::Csv => {
            let mut s = String::from("p,q,gap,threshold,gapped\n");
            for c in &cells {
                let _ = writeln!(s, "{},{},{},{},{}", c.p, c.q, fmt_f64(c.gap), fmt_f64(c.threshold), c.gapped as u8);
            }
            s
        }
        Format::Json => json_body(&json!({
            "schema": schema("gapmap"),
            "tB": a.t_b, "N": cells[0].n_sites, "threshold": cells[0].threshold,
            "cells": cells.iter().map(|c| json!({"p": c.p, "q": c.q, "gap": c.gap, "gapped": c.gapped})).collect::<Vec<_>>(),
        })),
    };
    Ok(outcome(body, summary))
}

fn ipr(a: &IprArgs, format: Format) -> Result<Outcome> {
    let r = a.model.resolve(ModelDefaults::default())?;
    let s = ipr_scaling(&r.spec, &a.sizes)?;
    let summary = format!("ipr: slope {:.6} ± {:.6} over {} sizes", s.slope(), s.fit.slope_stderr, s.sizes.len());
    let body = match format {
        Format::Csv => {
            let mut out = String::from("N,mean_ipr\n");
            for (n, v) in s.sizes.iter().zip(&s.mean_ipr) {
                let _ = writeln!(out, "{n},{}", fmt_f64(*v));
            }
            out
        }
        Format::Json => json_body(&json!({
            "schema": schema("ipr"),
            "host": model_json(&r.spec),
            "sizes": s.sizes, "mean_ipr": s.mean_ipr,
            "slope": s.fit.slope, "slope_stderr": s.fit.slope_stderr, "intercept": s.fit.intercept,
        })),
    };
    Ok(outcome(body, summary))
}

fn q_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && min < max && min.is_finite() && max.is_finite()) {
        return Err(Error::InvalidSpec("q grid needs qmin < qmax and qstep > 0".into()));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| min + step * i as f64).collect())
}

fn multifractal(a: &MultifractalArgs, format: Format) -> Result<Outcome> {
    let r = a.model.resolve(ModelDefaults {
        n: 1597,
        ..Default::default()
    })?;
    let d = eigensolve(&build_waveguide(&r.spec)?)?;
    let idx = a.state_index.unwrap_or(d.dim() / 2);
    if idx >= d.dim() {
        return Err(Error::IndexOutOfRange {
            index: idx,
            limit: d.dim(),
        });
    }
    let mu = ProbabilityMeasure::from_state(d.vector(idx))?;
    let bc = BoxCounting::for_size(r.spec.n_sites);
    let bc = BoxCounting::new(bc.scales, q_grid(a.qmin, a.qmax, a.qstep)?);
    let sp = bc.spectrum(&mu)?;
    let summary = format!(
        "multifractal: state {idx} (E = {:.6}), alpha support width {:.6}",
        d.values()[idx],
        sp.support_width()
    );
    let body = match format {
        Format::Csv => {
            let mut s = String::from("q,tau,tau_stderr,alpha,f\n");
            for i in 0..sp.q.len() {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    fmt_f64(sp.q[i]),
                    fmt_f64(sp.tau[i]),
                    fmt_f64(sp.tau_stderr[i]),
                    fmt_f64(sp.alpha[i]),
                    fmt_f64(sp.f[i])
                );
            }
            s
        }
        Format::Json => json_body(&json!({
            "schema": schema("multifractal"),
            "host": model_json(&r.spec),
            "state_index": idx, "energy": d.values()[idx], "scales": bc.scales,
            "q": sp.q, "tau": sp.tau, "tau_stderr": sp.tau_stderr, "alpha": sp.alpha, "f": sp.f,
            "support_width": sp.support_width(),
        })),
    };
    Ok(outcome(body, summary))
}

fn vds(a: &VdsArgs, format: Format) -> Result<Outcome> {
    let defaults = match a.kind {
        VdsKind::Giant => ModelDefaults::default(),
        VdsKind::Local => ModelDefaults {
            q: 2,
            ..Default::default()
        },
    };
    let r = a.model.resolve(defaults)?;
    let emitter = match a.kind {
        VdsKind::Giant => EmitterSpec::giant(a.n0, a.d, a.g),
        VdsKind::Local => EmitterSpec::local(a.n0, a.g),
    };
    let state = if a.kind == VdsKind::Local && a.allow_gapless {
        let seq = r
            .spec
            .hopping_sequence()?
            .ok_or_else(|| Error::InvalidSpec("closed forms need a two-letter hopping host".into()))?;
        let opts = LocalVdsOptions {
            allow_gapless: true,
            ..Default::default()
        };
        local_vds_with(&seq, a.n0, a.g, opts)?
    } else {
        dressed_state(&r.spec, &emitter)?
    };
    let h = build_coupled(&r.spec, &[emitter])?;
    let rep = vds_verify(&state, &h)?;
    let nrm = state.norm();
    let amps: Vec<(usize, f64)> = state.photonic().into_iter().map(|(s, v)| (s, v / nrm)).collect();
    let summary = format!(
        "vds: {} sites, norm {:.12}, residual {:.3e} ({})",
        amps.len(),
        nrm,
        rep.residual,
        if rep.pass && rep.vacancy_pass { "pass" } else { "FAIL" }
    );
    let body = match format {
        Format::Csv => {
            let mut s = String::from("label,value\n");
            let _ = writeln!(s, "emitter,{}", fmt_f64(state.epsilon()));
            for (site, v) in &amps {
                let _ = writeln!(s, "{site},{}", fmt_f64(*v));
            }
            s
        }
        Format::Json => json_body(&json!({
            "schema": schema("vds"),
            "host": model_json(&r.spec),
            "kind": match a.kind { VdsKind::Giant => "giant", VdsKind::Local => "local" },
            "n0": a.n0,
            "d": if a.kind == VdsKind::Giant { Some(a.d) } else { None },
            "g": a.g,
            "epsilon": state.epsilon(),
            "norm": nrm,
            "amplitudes": amps.iter().map(|(s, v)| json!({"site": s, "value": v})).collect::<Vec<_>>(),
            "rho_exponents": state.terms().iter().map(|t| json!({"site": t.site, "sign": t.sign, "k": t.rho_exponent})).collect::<Vec<_>>(),
            "residual": rep.residual,
            "tolerance": rep.tolerance,
            "vacancy_residual": rep.vacancy_residual,
            "pass": rep.pass && rep.vacancy_pass,
        })),
    };
    Ok(outcome(body, summary))
}

fn vds_map(a: &VdsMapArgs, format: Format) -> Result<Outcome> {
    let rule = SubstitutionRule::new(a.p, a.q)?;
    let spec = crate::lattice::WaveguideSpec::fibonacci(rule, a.n, 0.5);
    let seq = spec.hopping_sequence()?.expect("Fibonacci hosts have a word");
    let rows: Vec<(usize, Vec<usize>)> = (1..=a.dmax.min(a.n - 1))
        .map(|d| (d, allowed_positions(&seq, d, a.n)))
        .collect();
    let total: usize = rows.iter().map(|r| r.1.len()).sum();
    let summary = format!("vds-map: {total} allowed (d, n0) pairs for d <= {} on N={}", a.dmax, a.n);
    let body = match format {
        Format::Csv => {
            let mut s = String::from("d,n0,allowed\n");
            for (d, allowed) in &rows {
                for n0 in 0..a.n - d {
                    let _ = writeln!(s, "{d},{n0},{}", allowed.binary_search(&n0).is_ok() as u8);
                }
            }
            s
        }
        Format::Json => json_body(&json!({
            "schema": schema("vds-map"),
            "p": a.p, "q": a.q, "N": a.n,
            "allowed": rows.iter().map(|(d, v)| json!({"d": d, "n0": v})).collect::<Vec<_>>(),
        })),
    };
    Ok(outcome(body, summary))
}

fn roster(args: &RosterArgs, spec: &crate::lattice::WaveguideSpec, from_config: &[EmitterSpec]) -> Result<Vec<EmitterSpec>> {
    let mut out = from_config.to_vec();
    out.extend(args.emitters.iter().map(|e| e.to_spec(args.g, 0.0)));
    if let Some(d) = args.roster_d {
        out.extend(allowed_giant_roster(spec, d, args.g)?);
    }
    if out.is_empty() {
        return Err(Error::InvalidSpec("no emitters: use --emitter, --roster-d or a config file".into()));
    }
    out.sort_by_key(|e| e.position);
    Ok(out)
}

fn emitter_json(e: &EmitterSpec) -> Value {
    match e.kind {
        EmitterKind::Local => json!({"kind": "local", "n": e.position, "g": e.g, "delta": e.detuning}),
        EmitterKind::Giant { leg } => {
            json!({"kind": "giant", "n": e.position, "d": leg, "g": e.g, "delta": e.detuning})
        }
    }
}

fn effective(a: &EffectiveArgs, format: Format) -> Result<Outcome> {
    let r = a.model.resolve(ModelDefaults::default())?;
    let ems = roster(&a.roster, &r.spec, &r.emitters)?;
    let k = build_effective(&ems, &r.spec)?;
    let m = if a.normalized { k.normalized() } else { k.matrix().clone() };
    let all_giant = k.emitters().iter().all(|e| matches!(e.kind, EmitterKind::Giant { .. }));
    let (blocks, block_error) = if all_giant {
        match fibonacci_block_structure(&k) {
            Ok(rep) => (Some(rep), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    let report = json!({
        "schema": schema("effective"),
        "host": model_json(&r.spec),
        "gauge": if a.normalized { "normalized" } else { "unit" },
        "emitters": k.emitters().iter().map(emitter_json).collect::<Vec<_>>(),
        "matrix": (0..m.dim()).map(|i| m.row(i).to_vec()).collect::<Vec<_>>(),
        "blocks": blocks.as_ref().map(|rep| rep.blocks.iter().map(|b| json!({
            "kind": match b.kind { BlockKind::A => "A", BlockKind::B => "B" },
            "start": b.start, "len": b.len, "n0": b.first_position,
        })).collect::<Vec<_>>()),
        "word": blocks.as_ref().map(|rep| rep.word.to_string()),
        "orientation": blocks.as_ref().map(|rep| rep.orientation),
        "block_error": block_error,
    });
    let summary = format!(
        "effective: {} emitters, max |K| {:.6e}{}",
        m.dim(),
        m.max_abs(),
        blocks
            .as_ref()
            .map(|b| format!(", block word {}", b.word))
            .unwrap_or_default()
    );
    let mut out = match format {
        Format::Csv => outcome(m.to_csv(), summary),
        Format::Json => outcome(json_body(&report), summary),
    };
    if let (Format::Csv, Some(path)) = (format, &a.report) {
        out.extra.push((path.clone(), json_body(&report)));
    }
    Ok(out)
}

fn dynamics(a: &DynamicsArgs, format: Format) -> Result<Outcome> {
    let r = a.model.resolve(ModelDefaults::default())?;
    let ems = roster(&a.roster, &r.spec, &r.emitters)?;
    if a.initial >= ems.len() {
        return Err(Error::IndexOutOfRange {
            index: a.initial,
            limit: ems.len(),
        });
    }
    let k = build_effective(&ems, &r.spec)?;
    let km = match a.gauge {
        Gauge::Unit => k.matrix().clone(),
        Gauge::Normalized => k.normalized(),
    };
    let g = ems[0].g;
    let t_a = g * g / r.spec.t_a;
    let t_max = a
        .t_max
        .unwrap_or(20.0 * std::f64::consts::PI / (2f64.sqrt() * t_a));
    if !(t_max > 0.0 && t_max.is_finite()) || a.samples < 2 {
        return Err(Error::InvalidSpec("need t_max > 0 and at least 2 samples".into()));
    }
    let times = uniform_grid(t_max, a.samples);
    let h = build_coupled(&r.spec, k.emitters())?;
    let init = Initial::emitter(a.initial);
    let exact = evolve_exact(&h, &init, &times)?;
    let eff = evolve_effective(&km, &init, &times)?;
    let rep = compare(&exact, &eff)?;
    let ne = ems.len();
    let summary = format!(
        "dynamics: {ne} emitters, {} samples, max deviation {:.6} at t = {:.6}",
        times.len(),
        rep.max,
        rep.time_of_max
    );
    let body = match format {
        Format::Csv => {
            let mut s = String::from("time");
            for prefix in ["exact", "effective", "deviation"] {
                for j in 1..=ne {
                    let _ = write!(s, ",{prefix}_{j}");
                }
            }
            s.push('\n');
            for (i, t) in times.iter().enumerate() {
                s.push_str(&fmt_f64(*t));
                for j in 0..ne {
                    let _ = write!(s, ",{}", fmt_f64(exact.populations[j][i]));
                }
                for j in 0..ne {
                    let _ = write!(s, ",{}", fmt_f64(eff.populations[j][i]));
                }
                for j in 0..ne {
                    let _ = write!(s, ",{}", fmt_f64((exact.populations[j][i] - eff.populations[j][i]).abs()));
                }
                s.push('\n');
            }
            s
        }
        Format::Json => json_body(&json!({
            "schema": schema("dynamics"),
            "host": model_json(&r.spec),
            "emitters": k.emitters().iter().map(emitter_json).collect::<Vec<_>>(),
            "gauge": match a.gauge { Gauge::Unit => "unit", Gauge::Normalized => "normalized" },
            "times": times,
            "exact": exact.populations,
            "effective": eff.populations,
            "per_emitter_max": rep.per_emitter_max,
            "max_deviation": rep.max,
            "time_of_max": rep.time_of_max,
        })),
    };
    Ok(outcome(body, summary))
}
