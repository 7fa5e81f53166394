//! Concurrence traces, sudden-death windows, maxima and periods.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::analytic::{assemble_state, phi_coefficients, psi_coefficients, CoefficientSet};
use crate::entanglement::{reduce_to_atoms, wootters_concurrence, xstate_margin};
use crate::model::{Family, InitialStateSpec, ModelParams, StateVector};
use crate::propagator::{check_grid, Propagator};
use crate::{Error, Execution, Result};

pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-9;
pub const DEFAULT_T_MAX: f64 = 20.0;
pub const DEFAULT_POINTS: usize = 2000;
/// Shortest run of sub-threshold samples reported as a death window.
pub const MIN_RUN: usize = 3;
/// Bisection stops once the bracket is narrower than this (in `T`).
pub const ENDPOINT_TOLERANCE: f64 = 1e-10;

/// Which computation produces the state at each time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Path {
    /// Closed-form amplitudes; concurrence by the X-state formula.
    Analytic,
    /// Exact propagation of the truncated Hamiltonian; general Wootters
    /// concurrence.
    Oracle,
}

/// `n` evenly spaced points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    end
                } else {
                    start + (end - start) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Concurrence sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceTrace {
    pub family: Family,
    pub alpha: f64,
    pub epsilon: f64,
    pub lambda: f64,
    pub path: Path,
    pub t_grid: Vec<f64>,
    pub c: Vec<f64>,
    /// `2·Re(x₁x₂*)` for the `Psi` family; `None` for `Phi`.
    pub signed_c: Option<Vec<f64>>,
    /// `|x_i|` per grid point (3 values for `Psi`, 5 for `Phi`).
    pub amplitude_abs: Vec<Vec<f64>>,
}

impl ConcurrenceTrace {
    pub fn len(&self) -> usize {
        self.t_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_grid.is_empty()
    }

    /// Closed-form coefficients at an arbitrary time for this trace's
    /// parameters.
    pub fn coefficients_at(&self, t: f64) -> Result<CoefficientSet> {
        coefficients(self.family, self.alpha, self.epsilon, self.lambda, t)
    }

    /// Signed X-state value on the analytic path (positive part is `C`).
    pub fn analytic_margin(&self, t: f64) -> Result<f64> {
        let coefs = self.coefficients_at(t)?;
        let basis = crate::model::Basis::new(2);
        xstate_margin(&reduce_to_atoms(&assemble_state(&coefs, &basis)?, &basis)?)
    }

    pub fn analytic_concurrence(&self, t: f64) -> Result<f64> {
        Ok(self.analytic_margin(t)?.max(0.0))
    }
}

fn coefficients(family: Family, alpha: f64, eps: f64, lambda: f64, t: f64) -> Result<CoefficientSet> {
    match family {
        Family::Psi => psi_coefficients(alpha, eps, t),
        Family::Phi => phi_coefficients(alpha, eps, lambda, t),
    }
}

struct Sample {
    c: f64,
    signed: f64,
    abs: Vec<f64>,
}

/// Concurrence of `spec` under `params` at every point of `t_grid`.
pub fn concurrence_trace(
    spec: &InitialStateSpec,
    params: &ModelParams,
    t_grid: &[f64],
    path: Path,
    exec: Execution,
) -> Result<ConcurrenceTrace> {
    check_grid(t_grid)?;
    let basis = params.basis();
    let (family, alpha) = (spec.family(), spec.alpha());
    let (eps, lambda) = (params.epsilon(), params.lambda());

    let samples: Vec<Sample> = match path {
        Path::Analytic => exec.try_map(t_grid, |&t| {
            let coefs = coefficients(family, alpha, eps, lambda, t)?;
            let rho = reduce_to_atoms(&assemble_state(&coefs, &basis)?, &basis)?;
            Ok::<_, Error>(Sample {
                c: xstate_margin(&rho)?.max(0.0),
                signed: 2.0 * (coefs.x(1) * coefs.x(2).conj()).re,
                abs: coefs.amplitudes().iter().map(|z| z.norm()).collect(),
            })
        })?,
        Path::Oracle => {
            let prop = Propagator::new(params)?;
            let states = prop.states_on(spec, t_grid, exec)?;
            let support = coefficients(family, alpha, eps, lambda, 0.0)?.support();
            let pick = |psi: &StateVector| -> Vec<Complex64> {
                support
                    .iter()
                    .map(|&(a, b, na, nb)| psi.amplitudes()[basis.index(a, b, na, nb)])
                    .collect()
            };
            exec.try_map(&states, |psi| {
                let rho = reduce_to_atoms(psi, &basis)?;
                let x = pick(psi);
                Ok::<_, Error>(Sample {
                    c: wootters_concurrence(&rho)?,
                    signed: 2.0 * (x[0] * x[1].conj()).re,
                    abs: x.iter().map(|z| z.norm()).collect(),
                })
            })?
        }
    };

    let c = samples.iter().map(|s| s.c).collect();
    let signed_c = (family == Family::Psi).then(|| samples.iter().map(|s| s.signed).collect());
    let amplitude_abs = samples.into_iter().map(|s| s.abs).collect();
    Ok(ConcurrenceTrace {
        family,
        alpha,
        epsilon: eps,
        lambda,
        path,
        t_grid: t_grid.to_vec(),
        c,
        signed_c,
        amplitude_abs,
    })
}

/// One trace per `(alpha, epsilon)` pair, pairs computed concurrently and
/// returned alpha-major. `template` supplies `λ`, truncation and ladder
/// scaling; its dipole coupling is replaced by each `epsilon`.
pub fn sweep(
    family: Family,
    alphas: &[f64],
    epsilons: &[f64],
    template: &ModelParams,
    t_grid: &[f64],
    path: Path,
    exec: Execution,
) -> Result<Vec<ConcurrenceTrace>> {
    let mut jobs = Vec::with_capacity(alphas.len() * epsilons.len());
    for &alpha in alphas {
        for &eps in epsilons {
            let spec = InitialStateSpec::new(family, alpha)?;
            let params = with_epsilon(template, eps)?;
            jobs.push((spec, params));
        }
    }
    exec.try_map(&jobs, |(spec, params)| {
        concurrence_trace(spec, params, t_grid, path, Execution::Sequential)
    })
}

/// Copy of `template` with dipole coupling `epsilon·g`.
pub fn with_epsilon(template: &ModelParams, epsilon: f64) -> Result<ModelParams> {
    Ok(ModelParams::new(
        template.omega_a(),
        template.omega_b(),
        template.omega_0(),
        template.g(),
        epsilon * template.g(),
        template.n_max(),
    )?
    .with_ladder(template.ladder()))
}

/// Largest pointwise `|a_i − b_i|`.
pub fn max_abs_difference(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// A window of zero concurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeathInterval {
    pub t_start: f64,
    pub t_end: f64,
    /// Both endpoints were located by bisection on the closed form (false
    /// when the window touches an end of the grid).
    pub refined: bool,
}

impl DeathInterval {
    pub fn length(&self) -> f64 {
        self.t_end - self.t_start
    }
}

/// Maximal runs of `C < zero_threshold` spanning at least [`MIN_RUN`] grid
/// points. Endpoints are refined by bisection on the analytic X-state
/// margin. Isolated touches of zero are not reported.
pub fn detect_death_intervals(
    trace: &ConcurrenceTrace,
    zero_threshold: f64,
) -> Result<Vec<DeathInterval>> {
    let t = &trace.t_grid;
    let n = t.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        if trace.c[i] >= zero_threshold {
            i += 1;
            continue;
        }
        let start = i;
        while i < n && trace.c[i] < zero_threshold {
            i += 1;
        }
        let end = i - 1;
        if end + 1 - start < MIN_RUN {
            continue;
        }
        let (t_start, start_refined) = if start > 0 {
            refine_edge(trace, t[start - 1], t[start])?
        } else {
            (t[start], false)
        };
        let (t_end, end_refined) = if end + 1 < n {
            refine_edge(trace, t[end + 1], t[end])?
        } else {
            (t[end], false)
        };
        out.push(DeathInterval {
            t_start,
            t_end,
            refined: start_refined && end_refined,
        });
    }
    Ok(out)
}

/// Bisects the margin between an entangled time and a separable one. Falls
/// back to the separable grid point when the closed form does not bracket a
/// sign change there.
fn refine_edge(trace: &ConcurrenceTrace, alive: f64, dead: f64) -> Result<(f64, bool)> {
    let f_alive = trace.analytic_margin(alive)?;
    let f_dead = trace.analytic_margin(dead)?;
    if !(f_alive > 0.0 && f_dead <= 0.0) {
        return Ok((dead, false));
    }
    let (mut a, mut d) = (alive, dead);
    for _ in 0..200 {
        if (a - d).abs() <= ENDPOINT_TOLERANCE {
            break;
        }
        let mid = 0.5 * (a + d);
        if trace.analytic_margin(mid)? > 0.0 {
            a = mid;
        } else {
            d = mid;
        }
    }
    Ok((0.5 * (a + d), true))
}

/// Largest concurrence and where it occurs: grid argmax, then golden-section
/// refinement on the closed form within the neighbouring grid cells.
pub fn max_concurrence(trace: &ConcurrenceTrace) -> Result<(f64, f64)> {
    if trace.is_empty() {
        return Err(Error::Grid("empty trace"));
    }
    let (k, &c_grid) = trace
        .c
        .iter()
        .enumerate()
        .fold((0, &f64::MIN), |best, (i, c)| if *c > *best.1 { (i, c) } else { best });
    let t = &trace.t_grid;
    let lo = t[k.saturating_sub(1)];
    let hi = t[(k + 1).min(t.len() - 1)];
    if hi <= lo {
        return Ok((c_grid, t[k]));
    }
    let f = |x: f64| trace.analytic_concurrence(x);
    let (t_best, c_best) = golden_max(f, lo, hi, 1e-12)?;
    Ok(if c_best > c_grid { (c_best, t_best) } else { (c_grid, t[k]) })
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn golden_max<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..200 {
        if b - a <= tol * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)?))
}

/// Dominant oscillation period of the concurrence signal.
///
/// The mean-removed, Hann-windowed trace is transformed (the power spectrum
/// is the Fourier transform of its autocorrelation). The strongest
/// component with at least three cycles inside the trace is located on a
/// zero-padded FFT and polished by golden-section search on the direct
/// transform. Requires a uniform grid spanning at least three periods of
/// `2π/κ`.
pub fn estimate_period(trace: &ConcurrenceTrace) -> Result<f64> {
    let t = &trace.t_grid;
    let n = t.len();
    if n < 16 {
        return Err(Error::Grid("need at least 16 samples"));
    }
    let span = t[n - 1] - t[0];
    let dt = span / (n - 1) as f64;
    if t.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-6 * dt) {
        return Err(Error::Grid("period estimation needs a uniform grid"));
    }
    let kappa = (8.0 + trace.epsilon * trace.epsilon).sqrt();
    let required = 3.0 * 2.0 * PI / kappa;
    if span < required {
        return Err(Error::TraceTooShort { span, required });
    }

    let mean = trace.c.iter().sum::<f64>() / n as f64;
    let windowed: Vec<f64> = trace
        .c
        .iter()
        .enumerate()
        .map(|(i, c)| (c - mean) * (0.5 - 0.5 * (2.0 * PI * i as f64 / (n - 1) as f64).cos()))
        .collect();

    let len = (8 * n).next_power_of_two();
    let mut buf: Vec<Complex64> = windowed.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    buf.resize(len, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);

    let omega_of = |k: usize| 2.0 * PI * k as f64 / (len as f64 * dt);
    let omega_min = 3.0 * 2.0 * PI / span;
    let k_best = (1..len / 2)
        .filter(|&k| omega_of(k) >= omega_min)
        .max_by(|&a, &b| buf[a].norm_sqr().total_cmp(&buf[b].norm_sqr()))
        .ok_or(Error::Grid("no admissible frequencies"))?;

    let power = |omega: f64| -> Result<f64> {
        let z: Complex64 = windowed
            .iter()
            .enumerate()
            .map(|(i, &x)| x * Complex64::from_polar(1.0, -omega * dt * i as f64))
            .sum();
        Ok(z.norm_sqr())
    };
    let (omega, _) = golden_max(power, omega_of(k_best - 1), omega_of(k_best + 1), 1e-13)?;
    Ok(2.0 * PI / omega)
}
