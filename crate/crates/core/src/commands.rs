//! Figure datasets, sweeps and the verification report.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::fs;
use std::path::{Path as FsPath, PathBuf};

use num_complex::Complex64;

use crate::analysis::{
    concurrence_trace, detect_death_intervals, estimate_period, linspace, max_abs_difference,
    ConcurrenceTrace, DeathInterval, Path,
};
use crate::analytic::{assemble_state, phi_coefficients, psi_coefficients};
use crate::config::{Labeled, PathChoice, RunConfig};
use crate::entanglement::{reduce_to_atoms, wootters_concurrence, xstate_concurrence};
use crate::hamiltonian::{build_hamiltonian, check_conservation};
use crate::model::{Family, InitialStateSpec, Level, ModelParams};
use crate::output::{fmt_number, CsvTable, LineChart, Series};
use crate::propagator::Propagator;
use crate::{Error, Execution, Result};

/// One `(α, ε)` job of a figure command.
struct Curve {
    alpha: Labeled,
    epsilon: Labeled,
    path: Path,
    trace: ConcurrenceTrace,
}

fn paths(choice: PathChoice) -> Vec<Path> {
    match choice {
        PathChoice::Analytic => vec![Path::Analytic],
        PathChoice::Oracle => vec![Path::Oracle],
        PathChoice::Both => vec![Path::Analytic, Path::Oracle],
    }
}

fn file_label(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .collect()
}

fn curve_stem(prefix: &str, c: &Curve, choice: PathChoice) -> String {
    let mut stem = format!(
        "{prefix}_alpha-{}_eps-{}",
        file_label(&c.alpha.label),
        file_label(&c.epsilon.label)
    );
    if choice == PathChoice::Both && c.path == Path::Oracle {
        stem.push_str("_oracle");
    }
    stem
}

fn compute_curves(config: &RunConfig, family: Family, exec: Execution) -> Result<Vec<Curve>> {
    let alphas = config.figure_alphas();
    let epsilons = config.figure_epsilons();
    let grid = config.t_grid();
    let mut jobs = Vec::new();
    for a in &alphas {
        for e in &epsilons {
            for p in paths(config.path) {
                jobs.push((a.clone(), e.clone(), p));
            }
        }
    }
    exec.try_map(&jobs, |(a, e, p)| {
        let spec = InitialStateSpec::new(family, a.value)?;
        let params = config.params(e.value)?;
        let trace = concurrence_trace(&spec, &params, &grid, *p, Execution::Sequential)?;
        Ok(Curve {
            alpha: a.clone(),
            epsilon: e.clone(),
            path: *p,
            trace,
        })
    })
}

fn resolve_family(config: &RunConfig, required: Family) -> Result<()> {
    match config.family {
        Some(f) if f != required => Err(Error::Config {
            line: 0,
            key: "family".into(),
            message: format!("this command needs family {required}, config says {f}"),
        }),
        _ => Ok(()),
    }
}

fn prepare_dir(dir: &FsPath) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_metadata(config: &RunConfig, family: Family, dir: &FsPath, files: &[PathBuf]) -> Result<PathBuf> {
    let mut text = String::new();
    text.push_str(&format!("family = {family}\n"));
    let alphas: Vec<String> = config.figure_alphas().into_iter().map(|a| a.label).collect();
    let source = if config.alphas.is_some() { "configured" } else { "default figure set (chosen, not given by the model)" };
    text.push_str(&format!("alpha = {}   # {source}\n", alphas.join(", ")));
    let eps: Vec<String> = config.figure_epsilons().into_iter().map(|e| e.label).collect();
    text.push_str(&format!("epsilon = {}\n", eps.join(", ")));
    text.push_str(&format!("T_max = {}\n", fmt_number(config.t_max)));
    text.push_str(&format!("n_points = {}\n", config.n_points));
    text.push_str(&format!("lambda = {}\n", fmt_number(config.lambda)));
    text.push_str(&format!("n_max = {}\n", config.n_max));
    text.push_str(&format!("ladder = {:?}\n", config.ladder).to_lowercase());
    for f in files {
        if let Some(name) = f.file_name() {
            text.push_str(&format!("file = {}\n", name.to_string_lossy()));
        }
    }
    let path = dir.join(format!("{}_metadata.txt", family.name().to_lowercase()));
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

fn write_svgs(prefix: &str, curves: &[Curve], dir: &FsPath, files: &mut Vec<PathBuf>) -> Result<()> {
    let mut eps_labels: Vec<&Labeled> = Vec::new();
    for c in curves {
        if !eps_labels.iter().any(|e| e.label == c.epsilon.label) {
            eps_labels.push(&c.epsilon);
        }
    }
    for e in eps_labels {
        let series = curves
            .iter()
            .filter(|c| c.epsilon.label == e.label)
            .map(|c| Series {
                label: match c.path {
                    Path::Analytic => format!("alpha = {}", c.alpha.label),
                    Path::Oracle => format!("alpha = {} (oracle)", c.alpha.label),
                },
                points: c.trace.t_grid.iter().copied().zip(c.trace.c.iter().copied()).collect(),
            })
            .collect();
        let chart = LineChart {
            title: format!("{} concurrence, epsilon = {}", prefix, e.label),
            x_label: "T = g t".into(),
            y_label: "C".into(),
            series,
        };
        let path = dir.join(format!("{prefix}_eps-{}.svg", file_label(&e.label)));
        chart.write(&path)?;
        files.push(path);
    }
    Ok(())
}

/// `Psi`-family datasets: one CSV per `(α, ε)` with columns
/// `T,C,signed_C,x1_abs,x2_abs,x3_abs`, plus one SVG per `ε` when enabled.
/// Returns the written files.
pub fn cmd_fig1(config: &RunConfig, exec: Execution) -> Result<Vec<PathBuf>> {
    resolve_family(config, Family::Psi)?;
    let dir = &config.output_dir;
    prepare_dir(dir)?;
    let curves = compute_curves(config, Family::Psi, exec)?;
    let mut files = Vec::new();
    for c in &curves {
        let mut table = CsvTable::new(["T", "C", "signed_C", "x1_abs", "x2_abs", "x3_abs"]);
        let signed = c.trace.signed_c.as_ref().expect("Psi traces carry signed_C");
        let rows = c.trace.t_grid.iter().zip(&c.trace.c).zip(signed).zip(&c.trace.amplitude_abs);
        for (((&t, &cc), &s), x) in rows {
            table.push_numbers(&[t, cc, s, x[0], x[1], x[2]]);
        }
        let path = dir.join(format!("{}.csv", curve_stem("fig1", c, config.path)));
        table.write(&path)?;
        files.push(path);
    }
    if config.emit_svg {
        write_svgs("fig1", &curves, dir, &mut files)?;
    }
    files.push(write_metadata(config, Family::Psi, dir, &files)?);
    Ok(files)
}

/// `Phi`-family datasets: one CSV per `(α, ε)` with columns
/// `T,C,x1_abs,x2_abs,x3_abs,x5_abs,in_death_window`, an `intervals.csv`
/// listing every detected death window, and optional SVGs.
pub fn cmd_fig2(config: &RunConfig, exec: Execution) -> Result<Vec<PathBuf>> {
    resolve_family(config, Family::Phi)?;
    let dir = &config.output_dir;
    prepare_dir(dir)?;
    let curves = compute_curves(config, Family::Phi, exec)?;
    let mut files = Vec::new();
    let mut intervals = CsvTable::new(["alpha", "epsilon", "path", "T_start", "T_end", "length", "refined"]);

    for c in &curves {
        let windows = detect_death_intervals(&c.trace, config.zero_threshold)?;
        let inside = |t: f64| windows.iter().any(|w| t >= w.t_start && t <= w.t_end);
        let mut table =
            CsvTable::new(["T", "C", "x1_abs", "x2_abs", "x3_abs", "x5_abs", "in_death_window"]);
        for k in 0..c.trace.len() {
            let t = c.trace.t_grid[k];
            let x = &c.trace.amplitude_abs[k];
            let flag = if inside(t) { 1.0 } else { 0.0 };
            table.push_numbers(&[t, c.trace.c[k], x[0], x[1], x[2], x[4], flag]);
        }
        let path = dir.join(format!("{}.csv", curve_stem("fig2", c, config.path)));
        table.write(&path)?;
        files.push(path);

        for w in &windows {
            intervals.push_row(vec![
                c.alpha.label.clone(),
                c.epsilon.label.clone(),
                match c.path {
                    Path::Analytic => "ANALYTIC".into(),
                    Path::Oracle => "ORACLE".into(),
                },
                fmt_number(w.t_start),
                fmt_number(w.t_end),
                fmt_number(w.length()),
                if w.refined { "1".into() } else { "0".into() },
            ]);
        }
    }
    let path = dir.join("intervals.csv");
    intervals.write(&path)?;
    files.push(path);
    if config.emit_svg {
        write_svgs("fig2", &curves, dir, &mut files)?;
    }
    files.push(write_metadata(config, Family::Phi, dir, &files)?);
    Ok(files)
}

/// Runs the figure command matching `config.family()`.
pub fn cmd_sweep(config: &RunConfig, exec: Execution) -> Result<Vec<PathBuf>> {
    match config.family() {
        Family::Psi => cmd_fig1(config, exec),
        Family::Phi => cmd_fig2(config, exec),
    }
}

/// Outcome of one verification suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub max_residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl SuiteResult {
    fn at_most(name: &'static str, max_residual: f64, threshold: f64) -> Self {
        SuiteResult {
            name,
            max_residual,
            threshold,
            pass: max_residual <= threshold,
        }
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{:e},{:e},{}",
            self.name,
            self.max_residual,
            self.threshold,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.suites.iter().all(|s| s.pass)
    }

    pub fn render(&self) -> String {
        self.suites.iter().map(|s| format!("{s}\n")).collect()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Corrupt one off-sector Hamiltonian entry before the conservation
    /// suite (self-test of the report).
    pub inject_fault: bool,
}

/// Nine α values spanning `[0, π/2]`.
pub fn standard_alphas() -> Vec<f64> {
    linspace(0.0, FRAC_PI_2, 9)
}

pub const STANDARD_EPSILONS: [f64; 5] = [0.0, 0.1, 1.0, 2.0, 5.0];

/// 400 points on `[0, 20]`.
pub fn standard_times() -> Vec<f64> {
    linspace(0.0, 20.0, 400)
}

#[derive(Default)]
struct Residuals {
    fidelity: f64,
    trace_gap: f64,
    initial: f64,
    norm: f64,
    route: f64,
    density: f64,
    prose: f64,
}

impl Residuals {
    fn merge(mut self, o: Residuals) -> Residuals {
        self.fidelity = self.fidelity.max(o.fidelity);
        self.trace_gap = self.trace_gap.max(o.trace_gap);
        self.initial = self.initial.max(o.initial);
        self.norm = self.norm.max(o.norm);
        self.route = self.route.max(o.route);
        self.density = self.density.max(o.density);
        self.prose = self.prose.max(o.prose);
        self
    }
}

fn density_residual(rho: &crate::entanglement::AtomDensityMatrix) -> Result<f64> {
    let herm = rho.matrix().hermitian_defect();
    let trace = (rho.matrix().trace() - Complex64::new(1.0, 0.0)).norm();
    // Only negative eigenvalues count against positivity.
    let neg = (-rho.eigenvalues()?[0]).max(0.0);
    Ok(herm.max(trace).max(neg))
}

fn grid_residuals(
    family: Family,
    alpha: f64,
    params: &ModelParams,
    times: &[f64],
) -> Result<Residuals> {
    let spec = InitialStateSpec::new(family, alpha)?;
    let prop = Propagator::new(params)?;
    let basis = prop.basis();
    let states = prop.states_on(&spec, times, Execution::Sequential)?;
    let (eps, lambda) = (params.epsilon(), params.lambda());
    let s2a = (2.0 * alpha).sin();
    let mut r = Residuals::default();
    for (&t, oracle) in times.iter().zip(&states) {
        let coefs = match family {
            Family::Psi => psi_coefficients(alpha, eps, t)?,
            Family::Phi => phi_coefficients(alpha, eps, lambda, t)?,
        };
        let analytic = assemble_state(&coefs, basis)?;
        r.fidelity = r.fidelity.max(1.0 - analytic.fidelity(oracle));
        r.norm = r.norm.max((oracle.norm() - 1.0).abs());

        let rho_a = reduce_to_atoms(&analytic, basis)?;
        let rho_o = reduce_to_atoms(oracle, basis)?;
        let c_a = xstate_concurrence(&rho_a)?;
        let c_o = wootters_concurrence(&rho_o)?;
        r.trace_gap = r.trace_gap.max((c_a - c_o).abs());
        r.route = r
            .route
            .max((wootters_concurrence(&rho_a)? - c_a).abs())
            .max((xstate_concurrence(&rho_o)? - c_o).abs());
        r.density = r.density.max(density_residual(&rho_a)?).max(density_residual(&rho_o)?);
        if t == 0.0 {
            r.initial = r.initial.max((c_a - s2a).abs()).max((c_o - s2a).abs());
        }
        if family == Family::Psi && eps == 0.0 {
            let signed = 2.0 * coefs.x(1) * coefs.x(2).conj();
            let prose = 0.25 * (-1.0 + 3.0 * s2a + (8f64.sqrt() * t).cos() * (1.0 + s2a));
            r.prose = r.prose.max((signed - Complex64::new(prose, 0.0)).norm());
        }
    }
    Ok(r)
}

/// Runs the oracle-equivalence and invariant suites over the standard grid.
/// `config` supplies `λ`, truncation and ladder scaling.
pub fn cmd_verify(config: &RunConfig, options: VerifyOptions, exec: Execution) -> Result<VerifyReport> {
    let times = standard_times();
    let mut jobs = Vec::new();
    for family in [Family::Psi, Family::Phi] {
        for &alpha in &standard_alphas() {
            for &eps in &STANDARD_EPSILONS {
                jobs.push((family, alpha, config.params(eps)?));
            }
        }
    }
    let residuals = exec
        .try_map(&jobs, |(family, alpha, params)| grid_residuals(*family, *alpha, params, &times))?
        .into_iter()
        .fold(Residuals::default(), Residuals::merge);

    let mut hermiticity = 0.0f64;
    let mut conservation_ok = true;
    for &eps in &STANDARD_EPSILONS {
        let params = config.params(eps)?;
        let basis = params.basis();
        let mut h = build_hamiltonian(&params, &basis)?;
        if options.inject_fault {
            // couples N = 4 to N = 0
            let i = basis.index(Level::Excited, Level::Excited, 0, 0);
            let j = basis.index(Level::Ground, Level::Ground, 0, 0);
            h = h.with_entry(i, j, Complex64::new(1e-6, 0.0));
        }
        hermiticity = hermiticity.max(h.matrix().hermitian_defect());
        conservation_ok &= check_conservation(&h, &basis);
    }

    let windows = death_window_residual(config)?;
    let period = period_residual(config)?;

    let suites = vec![
        SuiteResult::at_most("fidelity", residuals.fidelity, 1e-9),
        SuiteResult::at_most("trace_agreement", residuals.trace_gap, 1e-9),
        SuiteResult::at_most("initial_concurrence", residuals.initial, 1e-9),
        SuiteResult::at_most("zero_dipole_formula", residuals.prose, 1e-10),
        SuiteResult::at_most("unitarity", residuals.norm, 1e-12),
        SuiteResult::at_most("hermiticity", hermiticity, 0.0),
        SuiteResult {
            name: "conservation",
            max_residual: if conservation_ok { 0.0 } else { 1.0 },
            threshold: 0.0,
            pass: conservation_ok,
        },
        SuiteResult::at_most("density_matrix", residuals.density, 1e-10),
        SuiteResult::at_most("route_agreement", residuals.route, 1e-10),
        SuiteResult::at_most("death_windows", windows, 1e-6),
        SuiteResult::at_most("period", period, 1e-3),
    ];
    Ok(VerifyReport { suites })
}

/// Worst endpoint error of the `Phi`, `ε = 0` windows against
/// `[asin √tan α, π − asin √tan α]`.
fn death_window_residual(config: &RunConfig) -> Result<f64> {
    let grid = linspace(0.0, 20.0, 2000);
    let params = config.params(0.0)?;
    let mut worst = 0.0f64;
    for alpha in [PI / 16.0, PI / 12.0, PI / 8.0, PI / 6.0] {
        let spec = InitialStateSpec::new(Family::Phi, alpha)?;
        let trace = concurrence_trace(&spec, &params, &grid, Path::Analytic, Execution::Sequential)?;
        let windows: Vec<DeathInterval> = detect_death_intervals(&trace, config.zero_threshold)?;
        let start = alpha.tan().sqrt().asin();
        let Some(first) = windows.first() else {
            return Ok(f64::INFINITY);
        };
        worst = worst
            .max((first.t_start - start).abs())
            .max((first.t_end - (PI - start)).abs());
    }
    Ok(worst)
}

/// Worst relative period error of the `Psi` concurrence at `ε ∈ {0, 2}`.
fn period_residual(config: &RunConfig) -> Result<f64> {
    let grid = linspace(0.0, 20.0, 2000);
    let mut worst = 0.0f64;
    for eps in [0.0, 2.0] {
        let spec = InitialStateSpec::new(Family::Psi, PI / 8.0)?;
        let trace =
            concurrence_trace(&spec, &config.params(eps)?, &grid, Path::Analytic, Execution::Sequential)?;
        let want = 2.0 * PI / (8.0 + eps * eps).sqrt();
        worst = worst.max((estimate_period(&trace)? / want - 1.0).abs());
    }
    Ok(worst)
}

/// Max pointwise gap between analytic and oracle traces for one curve.
pub fn path_gap(spec: &InitialStateSpec, params: &ModelParams, grid: &[f64]) -> Result<f64> {
    let a = concurrence_trace(spec, params, grid, Path::Analytic, Execution::Sequential)?;
    let o = concurrence_trace(spec, params, grid, Path::Oracle, Execution::Sequential)?;
    Ok(max_abs_difference(&a.c, &o.c))
}
