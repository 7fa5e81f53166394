//! Physical parameters, the truncated product basis and initial states.
//!
//! Basis kets are `|A B n_a n_b⟩` with atom A varying slowest, then atom B,
//! then the photon number of mode a, then mode b. Within each atom the
//! excited level comes first, so for `n_max = 0` the order is
//! `ee00, eg00, ge00, gg00`. This ordering is part of the CSV/debug file
//! formats and must not change.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

/// Relative tolerance on `omega_0 = omega_a + omega_b`.
const RESONANCE_TOLERANCE: f64 = 1e-12;

/// Amplitude assigned to a pair-creation/annihilation transition
/// `|n_a, n_b⟩ → |n_a + 1, n_b + 1⟩`.
///
/// The closed-form amplitudes in [`crate::analytic`] are the exact solution
/// with `Unit` amplitudes, where every such transition carries the bare
/// coupling `g`. `Bosonic` uses the standard ladder matrix elements
/// `√(n_a + 1)·√(n_b + 1)`. The two agree on the single-excitation sector
/// reached from the `Psi` family and differ on the `N = 4` sector reached
/// from `Phi` (`⟨gg22|H|eg11⟩` is `g` versus `2g`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LadderScaling {
    #[default]
    Unit,
    Bosonic,
}

impl LadderScaling {
    /// Matrix element of `a_a† a_b†` from `(n_a, n_b)`, in units of `g`.
    pub fn pair_raise(self, n_a: usize, n_b: usize) -> f64 {
        match self {
            LadderScaling::Unit => 1.0,
            LadderScaling::Bosonic => ((n_a + 1) as f64).sqrt() * ((n_b + 1) as f64).sqrt(),
        }
    }
}

/// Physical constants of the model. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    omega_a: f64,
    omega_b: f64,
    omega_0: f64,
    g: f64,
    dipole: f64,
    n_max: usize,
    ladder: LadderScaling,
}

impl ModelParams {
    /// Validates and builds parameters. `dipole` is the dipole-dipole
    /// coupling `Ω`. Resonance `omega_0 = omega_a + omega_b` is required.
    pub fn new(
        omega_a: f64,
        omega_b: f64,
        omega_0: f64,
        g: f64,
        dipole: f64,
        n_max: usize,
    ) -> Result<Self> {
        if !g.is_finite() || g <= 0.0 {
            return Err(Error::domain("g", g, "must be positive and finite"));
        }
        if !dipole.is_finite() || dipole < 0.0 {
            return Err(Error::domain("Omega", dipole, "must be non-negative and finite"));
        }
        for (name, w) in [("omega_a", omega_a), ("omega_b", omega_b), ("omega_0", omega_0)] {
            if !w.is_finite() {
                return Err(Error::domain(name, w, "must be finite"));
            }
        }
        if n_max < 2 {
            return Err(Error::domain("n_max", n_max as f64, "must be at least 2"));
        }
        let sum = omega_a + omega_b;
        if (omega_0 - sum).abs() > RESONANCE_TOLERANCE * omega_0.abs().max(1.0) {
            return Err(Error::NotResonant { omega_0, sum });
        }
        Ok(ModelParams {
            omega_a,
            omega_b,
            omega_0,
            g,
            dipole,
            n_max,
            ladder: LadderScaling::default(),
        })
    }

    /// Resonant parameters with `omega_0` set to `omega_a + omega_b`.
    pub fn resonant(omega_a: f64, omega_b: f64, g: f64, dipole: f64, n_max: usize) -> Result<Self> {
        Self::new(omega_a, omega_b, omega_a + omega_b, g, dipole, n_max)
    }

    /// Parameters in units of `g`: `g = 1`, `Ω = epsilon`, `omega_0 = lambda`
    /// split evenly between the two modes.
    pub fn dimensionless(epsilon: f64, lambda: f64, n_max: usize) -> Result<Self> {
        Self::resonant(0.5 * lambda, 0.5 * lambda, 1.0, epsilon, n_max)
    }

    pub fn with_ladder(mut self, ladder: LadderScaling) -> Self {
        self.ladder = ladder;
        self
    }

    pub fn omega_a(&self) -> f64 {
        self.omega_a
    }
    pub fn omega_b(&self) -> f64 {
        self.omega_b
    }
    pub fn omega_0(&self) -> f64 {
        self.omega_0
    }
    pub fn g(&self) -> f64 {
        self.g
    }
    /// Dipole-dipole coupling `Ω`.
    pub fn dipole(&self) -> f64 {
        self.dipole
    }
    pub fn n_max(&self) -> usize {
        self.n_max
    }
    pub fn ladder(&self) -> LadderScaling {
        self.ladder
    }

    /// `ε = Ω/g`.
    pub fn epsilon(&self) -> f64 {
        self.dipole / self.g
    }

    /// `λ = ω₀/g`.
    pub fn lambda(&self) -> f64 {
        self.omega_0 / self.g
    }

    pub fn basis(&self) -> Basis {
        Basis::new(self.n_max)
    }
}

/// Dimensionless constants shared by the closed-form solutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// `√(8 + ε²)`
    pub kappa: f64,
    /// `√(16 + ε²)`
    pub eta: f64,
    /// `ε/κ + 1`
    pub l_plus: f64,
    /// `ε/κ − 1`
    pub l_minus: f64,
    /// `cos α + sin α`
    pub theta_plus: f64,
    /// `cos α − sin α`
    pub theta_minus: f64,
}

impl DerivedConstants {
    pub fn new(epsilon: f64, alpha: f64) -> Self {
        let kappa = (8.0 + epsilon * epsilon).sqrt();
        let eta = (16.0 + epsilon * epsilon).sqrt();
        let (s, c) = alpha.sin_cos();
        DerivedConstants {
            kappa,
            eta,
            l_plus: epsilon / kappa + 1.0,
            l_minus: epsilon / kappa - 1.0,
            theta_plus: c + s,
            theta_minus: c - s,
        }
    }
}

/// Which Bell-pair combination the atoms start in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `cos α|eg⟩ + sin α|ge⟩`
    Psi,
    /// `cos α|ee⟩ + sin α|gg⟩`
    Phi,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Psi => "PSI",
            Family::Phi => "PHI",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_uppercase().as_str() {
            "PSI" => Ok(Family::Psi),
            "PHI" => Ok(Family::Phi),
            other => Err(format!("unknown family `{other}` (expected PSI or PHI)")),
        }
    }
}

/// Initial atomic state; the field always starts in `|00⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialStateSpec {
    family: Family,
    alpha: f64,
}

impl InitialStateSpec {
    pub fn new(family: Family, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(InitialStateSpec { family, alpha })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    // A few ulps of slack so that `pi/2` written in a config is accepted.
    if (0.0..=FRAC_PI_2 + 1e-15).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::domain("alpha", alpha, "must lie in [0, pi/2]"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Excited,
    Ground,
}

impl Level {
    fn index(self) -> usize {
        match self {
            Level::Excited => 0,
            Level::Ground => 1,
        }
    }

    fn from_index(i: usize) -> Self {
        if i == 0 {
            Level::Excited
        } else {
            Level::Ground
        }
    }

    fn symbol(self) -> char {
        match self {
            Level::Excited => 'e',
            Level::Ground => 'g',
        }
    }
}

/// Product ket `|atom_a atom_b n_a n_b⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub atom_a: Level,
    pub atom_b: Level,
    pub n_a: usize,
    pub n_b: usize,
}

impl BasisState {
    pub const fn new(atom_a: Level, atom_b: Level, n_a: usize, n_b: usize) -> Self {
        BasisState {
            atom_a,
            atom_b,
            n_a,
            n_b,
        }
    }

    /// Conserved charge `n_a + n_b + 2·(number of excited atoms)`.
    pub fn excitation_number(&self) -> usize {
        let excited = [self.atom_a, self.atom_b]
            .iter()
            .filter(|&&l| l == Level::Excited)
            .count();
        self.n_a + self.n_b + 2 * excited
    }

    /// Index of the atomic part in `{ee, eg, ge, gg}`.
    pub fn atom_index(&self) -> usize {
        2 * self.atom_a.index() + self.atom_b.index()
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "|{}{}{}{}>",
            self.atom_a.symbol(),
            self.atom_b.symbol(),
            self.n_a,
            self.n_b
        )
    }
}

/// Conserved charge of a basis state; see [`BasisState::excitation_number`].
pub fn excitation_number(s: &BasisState) -> usize {
    s.excitation_number()
}

/// The truncated product basis, `4·(n_max+1)²` states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    n_max: usize,
    states: Vec<BasisState>,
}

impl Basis {
    pub fn new(n_max: usize) -> Self {
        let m = n_max + 1;
        let states = (0..4 * m * m)
            .map(|idx| {
                let n_b = idx % m;
                let n_a = (idx / m) % m;
                let atoms = idx / (m * m);
                BasisState::new(
                    Level::from_index(atoms / 2),
                    Level::from_index(atoms % 2),
                    n_a,
                    n_b,
                )
            })
            .collect();
        Basis { n_max, states }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn state(&self, index: usize) -> Option<BasisState> {
        self.states.get(index).copied()
    }

    pub fn index_of(&self, s: &BasisState) -> Option<usize> {
        if s.n_a > self.n_max || s.n_b > self.n_max {
            return None;
        }
        let m = self.n_max + 1;
        Some((s.atom_index() * m + s.n_a) * m + s.n_b)
    }

    /// Index of a state that is known to be inside the truncation.
    pub(crate) fn index(&self, atom_a: Level, atom_b: Level, n_a: usize, n_b: usize) -> usize {
        self.index_of(&BasisState::new(atom_a, atom_b, n_a, n_b))
            .expect("basis state outside truncation")
    }
}

/// Ordered basis of the given truncation. See the module docs for the order.
pub fn enumerate_basis(n_max: usize) -> Basis {
    Basis::new(n_max)
}

/// Complex amplitudes over a [`Basis`], in basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        StateVector { amplitudes }
    }

    pub fn zeros(len: usize) -> Self {
        StateVector {
            amplitudes: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm()
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn amplitude(&self, basis: &Basis, s: &BasisState) -> Option<Complex64> {
        basis.index_of(s).map(|i| self.amplitudes[i])
    }
}

/// Builds the initial state of `spec` with both modes in vacuum.
pub fn initial_state(spec: &InitialStateSpec, basis: &Basis) -> StateVector {
    use Level::{Excited as E, Ground as G};
    let (s, c) = spec.alpha.sin_cos();
    let mut psi = StateVector::zeros(basis.len());
    let (first, second) = match spec.family {
        Family::Psi => (basis.index(E, G, 0, 0), basis.index(G, E, 0, 0)),
        Family::Phi => (basis.index(E, E, 0, 0), basis.index(G, G, 0, 0)),
    };
    psi.amplitudes[first] = Complex64::new(c, 0.0);
    psi.amplitudes[second] = Complex64::new(s, 0.0);
    psi
}
