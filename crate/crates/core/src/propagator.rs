//! Exact time evolution by spectral decomposition.
//!
//! With `T = g·t` the propagator is `exp(−i (H/g) T)`. Each requested time is
//! computed directly from the eigendecomposition, so long grids accumulate no
//! step-to-step error.

use num_complex::Complex64;

use crate::hamiltonian::{build_hamiltonian, HermitianMatrix};
use crate::linalg::{eigh, ComplexMatrix};
use crate::model::{initial_state, Basis, InitialStateSpec, ModelParams, StateVector};
use crate::{Error, Execution, Result};

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
    energy_unit: f64,
}

impl SpectralDecomposition {
    /// Ascending eigenvalues of `H`, in the units `H` was built in.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Columns are eigenvectors, matching [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    /// Sets the energy that one unit of dimensionless time refers to (the
    /// coupling `g`). Defaults to 1.
    pub fn with_energy_unit(mut self, g: f64) -> Self {
        self.energy_unit = g;
        self
    }

    pub fn energy_unit(&self) -> f64 {
        self.energy_unit
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `max |(H − V diag(λ) V†)_ij|`.
    pub fn reconstruction_error(&self, h: &HermitianMatrix) -> f64 {
        let v = &self.eigenvectors;
        let rebuilt = v
            .matmul(&ComplexMatrix::from_diagonal(&self.eigenvalues))
            .and_then(|m| m.matmul(&v.adjoint()));
        match rebuilt.and_then(|m| m.sub(h.matrix())) {
            Ok(d) => d.max_abs(),
            Err(_) => f64::INFINITY,
        }
    }

    /// `max |(V†V − I)_ij|`.
    pub fn unitarity_error(&self) -> f64 {
        let v = &self.eigenvectors;
        v.adjoint()
            .matmul(v)
            .and_then(|m| m.sub(&ComplexMatrix::identity(self.dim())))
            .map(|d| d.max_abs())
            .unwrap_or(f64::INFINITY)
    }

    /// Components of `psi` in the eigenbasis, `V†ψ`.
    fn project(&self, psi: &StateVector) -> Result<Vec<Complex64>> {
        if psi.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.len(),
            });
        }
        let n = self.dim();
        let v = &self.eigenvectors;
        Ok((0..n)
            .map(|k| (0..n).map(|i| v[(i, k)].conj() * psi.amplitudes()[i]).sum())
            .collect())
    }

    fn rebuild(&self, coeffs: &[Complex64], t: f64) -> StateVector {
        let n = self.dim();
        let scaled: Vec<Complex64> = coeffs
            .iter()
            .zip(&self.eigenvalues)
            .map(|(c, &e)| c * Complex64::from_polar(1.0, -e / self.energy_unit * t))
            .collect();
        let v = &self.eigenvectors;
        StateVector::new(
            (0..n)
                .map(|i| v.row(i).iter().zip(&scaled).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }
}

/// Diagonalises `h` (cyclic Jacobi). Eigenvalues come back ascending.
pub fn spectral_decompose(h: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let e = eigh(h.matrix())?;
    Ok(SpectralDecomposition {
        eigenvalues: e.values,
        eigenvectors: e.vectors,
        energy_unit: 1.0,
    })
}

/// `ψ(T) = V diag(exp(−i λ_k T / g)) V† ψ(0)`.
pub fn evolve(psi0: &StateVector, decomp: &SpectralDecomposition, t: f64) -> Result<StateVector> {
    let coeffs = decomp.project(psi0)?;
    Ok(decomp.rebuild(&coeffs, t))
}

/// [`evolve`] at every point of an ascending grid.
pub fn evolve_grid(
    psi0: &StateVector,
    decomp: &SpectralDecomposition,
    t_grid: &[f64],
    exec: Execution,
) -> Result<Vec<StateVector>> {
    check_grid(t_grid)?;
    let coeffs = decomp.project(psi0)?;
    Ok(exec.map(t_grid, |&t| decomp.rebuild(&coeffs, t)))
}

pub(crate) fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::Grid("non-finite time"));
    }
    if t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Grid("times must be ascending"));
    }
    Ok(())
}

/// Hamiltonian, basis and decomposition bundled for repeated propagation.
#[derive(Debug, Clone)]
pub struct Propagator {
    params: ModelParams,
    basis: Basis,
    hamiltonian: HermitianMatrix,
    decomposition: SpectralDecomposition,
}

impl Propagator {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let basis = params.basis();
        let hamiltonian = build_hamiltonian(params, &basis)?;
        let decomposition = spectral_decompose(&hamiltonian)?.with_energy_unit(params.g());
        Ok(Propagator {
            params: params.clone(),
            basis,
            hamiltonian,
            decomposition,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn hamiltonian(&self) -> &HermitianMatrix {
        &self.hamiltonian
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    pub fn state_at(&self, spec: &InitialStateSpec, t: f64) -> Result<StateVector> {
        evolve(&initial_state(spec, &self.basis), &self.decomposition, t)
    }

    pub fn states_on(
        &self,
        spec: &InitialStateSpec,
        t_grid: &[f64],
        exec: Execution,
    ) -> Result<Vec<StateVector>> {
        evolve_grid(&initial_state(spec, &self.basis), &self.decomposition, t_grid, exec)
    }

    /// `⟨ψ|H|ψ⟩` (real part; the imaginary part vanishes for Hermitian `H`).
    pub fn energy(&self, psi: &StateVector) -> Result<f64> {
        Ok(self.hamiltonian.matrix().expectation(psi.amplitudes())?.re)
    }
}
