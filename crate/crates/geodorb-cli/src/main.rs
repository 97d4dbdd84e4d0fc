//! `geodorb` - command-line front end for the geodorb toolkit.
//!
//! Every subcommand reads a model (either a JSON file via `--model` or the
//! built-in `su(3)/su(2)` family via `--alpha`/`--beta`), runs one analysis,
//! and emits a machine-readable JSON report that embeds the full run
//! configuration. All randomness flows from `--seed` through a ChaCha8
//! stream, so identical invocations produce byte-identical reports.
//!
//! Exit codes: `0` success, `1` invalid input, `2` verdict-negative
//! (`not_go`, `not_naturally_reductive`, unsolvable momentum), `3` numerical
//! failure (no convergence, divergence, internal inconsistency).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use nalgebra::DVector;
use serde::Serialize;

use geodorb::equilibria::{
    default_tol, orbit_extremum_search, solve_equilibria_at,
};
use geodorb::goanalysis::{
    co_condition_residual, go_test, graph_from_invariant, min_norm_graph,
    natural_reductivity_analysis, GoVerdict, NatRedVerdict,
};
use geodorb::homspace::{
    su3_su2, EnergyForm, HomogeneousModel, InvariantPolynomial,
};
use geodorb::jsonio::{algebra_from_json, looks_like_model, model_from_json, model_to_json};
use geodorb::liealg::StructureTensor;
use geodorb::liepoisson::{casimir_drift, energy_drift, lp_integrate, trajectory_csv};
use geodorb::poly::Polynomial;
use geodorb::sampling::{SampleStream, GENERATOR_NAME};
use geodorb::types::{AlgebraVector, CovectorAtOrigin, MomentumState};
use geodorb::Error;

#[derive(Parser)]
#[command(
    name = "geodorb",
    version,
    about = "Geodesic-orbit analysis of homogeneous spaces from structure constants",
    propagate_version = true
)]
struct Cli {
    /// Model JSON file (algebra plus k/m split and energy form).
    #[arg(long, global = true, value_name = "FILE", conflicts_with_all = ["alpha", "beta"])]
    model: Option<PathBuf>,

    /// Built-in su(3)/su(2) metric parameter alpha (with --beta).
    #[arg(long, global = true, value_name = "REAL")]
    alpha: Option<f64>,

    /// Built-in su(3)/su(2) metric parameter beta (with --alpha).
    #[arg(long, global = true, value_name = "REAL")]
    beta: Option<f64>,

    /// Tolerance override; each command documents its default.
    #[arg(long, global = true, value_name = "REAL")]
    tol: Option<f64>,

    /// Number of random samples for sampled analyses.
    #[arg(long, global = true, default_value_t = 200, value_name = "N")]
    samples: usize,

    /// Seed for the ChaCha8 sample stream.
    #[arg(long, global = true, default_value_t = 0, value_name = "SEED")]
    seed: u64,

    /// Write the report to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report antisymmetry/Jacobi residuals and the reductive split.
    Validate,
    /// Solve the relative-equilibrium system at a momentum in m*.
    Equilibria {
        /// Momentum coordinates, comma-separated in the m*-basis order.
        #[arg(long, value_name = "C1,C2,...")]
        p: String,
    },
    /// Sampled geodesic-orbit test over momenta in m*.
    GoTest {
        /// Extra momentum to pin into the sample list (repeatable).
        #[arg(long, value_name = "C1,C2,...")]
        pin: Vec<String>,
    },
    /// Canonical minimum-norm geodesic graph at a momentum.
    Graph {
        /// Momentum coordinates, comma-separated in the m*-basis order.
        #[arg(long, value_name = "C1,C2,...")]
        p: String,
        /// Derive the graph from a named invariant function instead
        /// (y1 or y2; y2 needs the 8-dimensional built-in basis).
        #[arg(long, value_name = "NAME")]
        from_invariant: Option<String>,
    },
    /// Diagnose natural reductivity via a linear geodesic graph fit.
    Natred {
        /// Fresh samples for the verification stage.
        #[arg(long, default_value_t = 50, value_name = "N")]
        verify_samples: usize,
    },
    /// Residual of the orthogonality condition on sampled momenta.
    CoCheck,
    /// Derived series dimensions and solvability of the algebra.
    DerivedSeries,
    /// Gradient search for a relative equilibrium vector on an adjoint orbit.
    OrbitSearch {
        /// Start point coordinates in the full algebra basis.
        #[arg(long, value_name = "C1,C2,...")]
        a0: String,
        /// Iteration budget.
        #[arg(long, default_value_t = 10_000, value_name = "N")]
        max_iter: usize,
        /// Initial step size for the line search.
        #[arg(long, default_value_t = 0.05, value_name = "REAL")]
        step: f64,
    },
    /// Integrate the reduced Lie-Poisson equation with fixed-step RK4.
    LpIntegrate {
        /// Hamiltonian name: y1, y2, or half-z2 (half the squared last
        /// coordinate).
        #[arg(long = "h", value_name = "NAME")]
        hamiltonian: String,
        /// Initial momentum coordinates in the full dual basis.
        #[arg(long, value_name = "C1,C2,...")]
        mu0: String,
        /// Time step.
        #[arg(long, value_name = "REAL")]
        dt: f64,
        /// Final time.
        #[arg(long, value_name = "REAL")]
        t_end: f64,
        /// Also write the full trajectory as CSV to this file.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
    /// Emit the built-in su(3)/su(2) model file for --alpha/--beta.
    Su3,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Equilibria { .. } => "equilibria",
            Command::GoTest { .. } => "go-test",
            Command::Graph { .. } => "graph",
            Command::Natred { .. } => "natred",
            Command::CoCheck => "co-check",
            Command::DerivedSeries => "derived-series",
            Command::OrbitSearch { .. } => "orbit-search",
            Command::LpIntegrate { .. } => "lp-integrate",
            Command::Su3 => "su3",
        }
    }
}

/// Full run configuration, embedded verbatim in every report.
#[derive(Serialize)]
struct RunConfig {
    model_path: Option<String>,
    command: &'static str,
    samples: usize,
    seed: u64,
    /// Absent means each analysis used its documented default.
    tol: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    output: Option<String>,
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    command: &'static str,
    config: &'a RunConfig,
    generator: &'static str,
    result: T,
}

/// What `--model`/`--alpha`/`--beta` resolved to.
enum Input {
    AlgebraOnly(StructureTensor),
    FullModel(HomogeneousModel, EnergyForm),
}

impl Input {
    fn algebra(&self) -> &StructureTensor {
        match self {
            Input::AlgebraOnly(st) => st,
            Input::FullModel(model, _) => model.algebra(),
        }
    }

    fn into_model(self) -> Result<(HomogeneousModel, EnergyForm)> {
        match self {
            Input::FullModel(model, form) => Ok((model, form)),
            Input::AlgebraOnly(_) => bail!(
                "this command needs a full model (k/m split and energy form); \
                 the file holds a bare algebra"
            ),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

/// Map failures onto the documented exit-code contract.
fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::NoEquilibrium { .. }) => 2,
        Some(Error::NoConvergence { .. })
        | Some(Error::Diverged { .. })
        | Some(Error::InternalConsistency(_)) => 3,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<u8> {
    if cli.samples == 0 {
        bail!("--samples must be at least 1");
    }
    if let Some(t) = cli.tol {
        if !t.is_finite() || t <= 0.0 {
            bail!("--tol must be positive and finite");
        }
    }

    let config = RunConfig {
        model_path: cli.model.as_ref().map(|p| p.display().to_string()),
        command: cli.command.name(),
        samples: cli.samples,
        seed: cli.seed,
        tol: cli.tol,
        alpha: cli.alpha,
        beta: cli.beta,
        output: cli.output.as_ref().map(|p| p.display().to_string()),
    };

    let input = load_input(&cli)?;

    match &cli.command {
        Command::Validate => cmd_validate(&cli, &config, input),
        Command::Equilibria { p } => cmd_equilibria(&cli, &config, input, p),
        Command::GoTest { pin } => cmd_go_test(&cli, &config, input, pin),
        Command::Graph { p, from_invariant } => {
            cmd_graph(&cli, &config, input, p, from_invariant.as_deref())
        }
        Command::Natred { verify_samples } => {
            cmd_natred(&cli, &config, input, *verify_samples)
        }
        Command::CoCheck => cmd_co_check(&cli, &config, input),
        Command::DerivedSeries => cmd_derived_series(&cli, &config, input),
        Command::OrbitSearch { a0, max_iter, step } => {
            cmd_orbit_search(&cli, &config, input, a0, *max_iter, *step)
        }
        Command::LpIntegrate {
            hamiltonian,
            mu0,
            dt,
            t_end,
            csv,
        } => cmd_lp_integrate(&cli, &config, input, hamiltonian, mu0, *dt, *t_end, csv.as_deref()),
        Command::Su3 => cmd_su3(&cli, input),
    }
}

/// Resolve the model flags. `--model` is exclusive with `--alpha`/`--beta`
/// (clap already enforces this); the built-in family needs both parameters.
fn load_input(cli: &Cli) -> Result<Input> {
    match (&cli.model, cli.alpha, cli.beta) {
        (Some(path), None, None) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read model file {}", path.display()))?;
            if looks_like_model(&text) {
                let (model, form) = model_from_json(&text)?;
                Ok(Input::FullModel(model, form))
            } else {
                Ok(Input::AlgebraOnly(algebra_from_json(&text)?))
            }
        }
        (None, Some(alpha), Some(beta)) => {
            let (model, form) = su3_su2(alpha, beta)?;
            Ok(Input::FullModel(model, form))
        }
        (None, None, None) => {
            bail!("no model given: pass --model FILE or --alpha A --beta B")
        }
        (None, _, _) => bail!("--alpha and --beta must be given together"),
        (Some(_), _, _) => unreachable!("clap rejects --model with --alpha/--beta"),
    }
}

/// Parse comma-separated coordinates and check the dimension.
fn parse_coords(text: &str, dim: usize, what: &str) -> Result<DVector<f64>> {
    let vals = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .with_context(|| format!("bad coordinate {t:?} in {what}"))
        })
        .collect::<Result<Vec<f64>>>()?;
    if vals.len() != dim {
        bail!("{what} needs {dim} comma-separated coordinates, got {}", vals.len());
    }
    if vals.iter().any(|v| !v.is_finite()) {
        bail!("{what} has a non-finite coordinate");
    }
    Ok(DVector::from_vec(vals))
}

/// Serialize the report and write it to `--output` or standard output.
fn emit<T: Serialize>(cli: &Cli, config: &RunConfig, result: T) -> Result<()> {
    let report = Report {
        command: config.command,
        config,
        generator: GENERATOR_NAME,
        result,
    };
    let mut text = serde_json::to_string_pretty(&report).context("serializing report")?;
    text.push('\n');
    write_text(cli, &text)
}

fn write_text(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ValidateResult {
    dim: usize,
    antisymmetry_residual: f64,
    jacobi_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reductive_verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    form_positive_definite: Option<bool>,
}

fn cmd_validate(cli: &Cli, config: &RunConfig, input: Input) -> Result<u8> {
    let st = input.algebra();
    let mut result = ValidateResult {
        dim: st.dim(),
        antisymmetry_residual: st.antisymmetry_residual(),
        jacobi_residual: st.jacobi_residual(),
        k: None,
        m: None,
        reductive_verified: None,
        form_positive_definite: None,
    };
    if let Input::FullModel(model, form) = &input {
        result.k = Some(model.k_indices().to_vec());
        result.m = Some(model.m_indices().to_vec());
        result.reductive_verified = Some(model.reductive_verified());
        result.form_positive_definite = form.positive_definite();
    }
    emit(cli, config, result)?;
    Ok(0)
}

#[derive(Serialize)]
struct EquilibriaResult {
    tol_used: f64,
    set: geodorb::equilibria::AffineSolutionSet,
}

fn cmd_equilibria(cli: &Cli, config: &RunConfig, input: Input, p: &str) -> Result<u8> {
    let (model, form) = input.into_model()?;
    let p = CovectorAtOrigin(parse_coords(p, model.dim_m(), "--p")?);
    let tol = cli.tol.unwrap_or_else(|| default_tol(&form, &p));
    let set = solve_equilibria_at(&model, &form, &p, tol)?;
    let solvable = set.solvable;
    emit(cli, config, EquilibriaResult { tol_used: tol, set })?;
    Ok(if solvable { 0 } else { 2 })
}

fn cmd_go_test(cli: &Cli, config: &RunConfig, input: Input, pin: &[String]) -> Result<u8> {
    let (model, form) = input.into_model()?;
    let pinned = pin
        .iter()
        .map(|text| Ok(CovectorAtOrigin(parse_coords(text, model.dim_m(), "--pin")?)))
        .collect::<Result<Vec<_>>>()?;
    let report = go_test(&model, &form, cli.samples, cli.seed, cli.tol, &pinned)?;
    let code = match report.verdict {
        GoVerdict::NotGo => 2,
        GoVerdict::Go | GoVerdict::Inconclusive => 0,
    };
    emit(cli, config, report)?;
    Ok(code)
}

fn cmd_graph(
    cli: &Cli,
    config: &RunConfig,
    input: Input,
    p: &str,
    from_invariant: Option<&str>,
) -> Result<u8> {
    let (model, form) = input.into_model()?;
    let p = CovectorAtOrigin(parse_coords(p, model.dim_m(), "--p")?);
    let sample = match from_invariant {
        None => min_norm_graph(&model, &form, &p, None, cli.tol)?,
        Some(name) => {
            let h = named_invariant(name, model.dim_g())?;
            graph_from_invariant(&model, &h, &p, cli.tol)?
        }
    };
    emit(cli, config, sample)?;
    Ok(0)
}

fn cmd_natred(cli: &Cli, config: &RunConfig, input: Input, verify: usize) -> Result<u8> {
    let (model, form) = input.into_model()?;
    let report =
        natural_reductivity_analysis(&model, &form, cli.samples, verify, cli.seed, cli.tol)?;
    let code = match report.verdict {
        NatRedVerdict::NotNaturallyReductive => 2,
        NatRedVerdict::NaturallyReductiveEvidence | NatRedVerdict::Inconclusive => 0,
    };
    emit(cli, config, report)?;
    Ok(code)
}

#[derive(Serialize)]
struct CoCheckResult {
    samples_tested: usize,
    max_residual: f64,
    worst_p: Vec<f64>,
}

/// Same deterministic momentum schedule as the go test: coordinate axes,
/// pairwise axis sums, then seeded unit directions.
fn cmd_co_check(cli: &Cli, config: &RunConfig, input: Input) -> Result<u8> {
    let (model, form) = input.into_model()?;
    let d = model.dim_m();
    let mut momenta: Vec<DVector<f64>> = Vec::new();
    for i in 0..d {
        momenta.push(DVector::from_fn(d, |r, _| if r == i { 1.0 } else { 0.0 }));
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let mut v = DVector::zeros(d);
            v[i] = 1.0;
            v[j] = 1.0;
            momenta.push(v);
        }
    }
    let mut stream = SampleStream::new(cli.seed);
    for _ in 0..cli.samples {
        momenta.push(stream.unit_direction(d));
    }
    let mut worst = 0.0_f64;
    let mut worst_p = DVector::zeros(d);
    for p in &momenta {
        let r = co_condition_residual(&model, &form, &CovectorAtOrigin(p.clone()))?;
        if r > worst {
            worst = r;
            worst_p = p.clone();
        }
    }
    emit(
        cli,
        config,
        CoCheckResult {
            samples_tested: momenta.len(),
            max_residual: worst,
            worst_p: worst_p.iter().copied().collect(),
        },
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct DerivedSeriesResult {
    dims: Vec<usize>,
    solvable: bool,
}

fn cmd_derived_series(cli: &Cli, config: &RunConfig, input: Input) -> Result<u8> {
    let st = input.algebra();
    let dims = st.derived_series().iter().map(|s| s.rank()).collect();
    emit(
        cli,
        config,
        DerivedSeriesResult {
            dims,
            solvable: st.is_solvable(),
        },
    )?;
    Ok(0)
}

fn cmd_orbit_search(
    cli: &Cli,
    config: &RunConfig,
    input: Input,
    a0: &str,
    max_iter: usize,
    step: f64,
) -> Result<u8> {
    let (model, form) = input.into_model()?;
    let a0 = AlgebraVector(parse_coords(a0, model.dim_g(), "--a0")?);
    let tol = cli.tol.unwrap_or(1e-6);
    let found = orbit_extremum_search(&model, &form, &a0, max_iter, step, tol)?;
    emit(cli, config, found)?;
    Ok(0)
}

#[derive(Serialize)]
struct LpResult {
    hamiltonian: String,
    dt: f64,
    t_end: f64,
    states: usize,
    energy_drift: f64,
    casimir_drift_y1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    casimir_drift_y2: Option<f64>,
    final_state: MomentumState,
    #[serde(skip_serializing_if = "Option::is_none")]
    csv_path: Option<String>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_lp_integrate(
    cli: &Cli,
    config: &RunConfig,
    input: Input,
    hamiltonian: &str,
    mu0: &str,
    dt: f64,
    t_end: f64,
    csv: Option<&std::path::Path>,
) -> Result<u8> {
    let st = input.algebra();
    let n = st.dim();
    let mu0 = AlgebraVector(parse_coords(mu0, n, "--mu0")?);
    let h = named_hamiltonian(hamiltonian, n)?;
    let trajectory = lp_integrate(st, &h, &mu0, dt, t_end)?;
    if let Some(path) = csv {
        fs::write(path, trajectory_csv(&trajectory))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    let mut casimirs = vec![InvariantPolynomial::sum_of_squares(n)];
    if n == 8 {
        casimirs.push(InvariantPolynomial::su3_y2());
    }
    let drifts = casimir_drift(&trajectory, &casimirs);
    let result = LpResult {
        hamiltonian: hamiltonian.to_string(),
        dt,
        t_end,
        states: trajectory.len(),
        energy_drift: energy_drift(&trajectory, &h),
        casimir_drift_y1: drifts[0],
        casimir_drift_y2: drifts.get(1).copied(),
        final_state: trajectory.last().expect("trajectory is nonempty").clone(),
        csv_path: csv.map(|p| p.display().to_string()),
    };
    emit(cli, config, result)?;
    Ok(0)
}

fn cmd_su3(cli: &Cli, input: Input) -> Result<u8> {
    let (model, form) = input.into_model()?;
    if cli.model.is_some() {
        bail!("su3 emits the built-in model; pass --alpha/--beta, not --model");
    }
    let mut text = model_to_json(&model, &form);
    text.push('\n');
    write_text(cli, &text)?;
    Ok(0)
}

/// Invariant functions addressable by name on the command line.
fn named_invariant(name: &str, dim: usize) -> Result<InvariantPolynomial> {
    match name {
        "y1" => Ok(InvariantPolynomial::sum_of_squares(dim)),
        "y2" => {
            if dim != 8 {
                bail!("invariant y2 is the cubic su(3) invariant and needs an 8-dimensional algebra");
            }
            Ok(InvariantPolynomial::su3_y2())
        }
        other => bail!("unknown invariant {other:?}: expected y1 or y2"),
    }
}

/// Hamiltonians addressable by name for `lp-integrate`.
fn named_hamiltonian(name: &str, dim: usize) -> Result<Polynomial> {
    match name {
        "y1" | "y2" => Ok(named_invariant(name, dim)?.poly().clone()),
        "half-z2" => Ok(Polynomial::monomial(dim, dim - 1, 2, 0.5)),
        other => bail!("unknown Hamiltonian {other:?}: expected y1, y2, or half-z2"),
    }
}
