//! Reduced two-atom state and its concurrence.
//!
//! The atomic basis is fixed to `{|ee⟩, |eg⟩, |ge⟩, |gg⟩}`. Complex
//! conjugation in the spin flip is taken in this basis.

use num_complex::Complex64;

use crate::linalg::{eigh, ComplexMatrix};
use crate::model::{Basis, StateVector};
use crate::{Error, Result};

/// Most negative eigenvalue accepted as numerical noise.
pub const PSD_TOLERANCE: f64 = 1e-10;
/// Largest entry outside the X pattern accepted by [`xstate_concurrence`].
pub const X_SHAPE_TOLERANCE: f64 = 1e-12;
/// Eigenvalues of `ρ` below this fraction of the largest are exact zeros
/// when forming `√ρ`.
const RANK_FLOOR: f64 = 1e-14;

/// 4×4 reduced density matrix of the two atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomDensityMatrix(ComplexMatrix);

impl AtomDensityMatrix {
    /// Wraps a 4×4 matrix without checking the density-matrix invariants;
    /// see [`AtomDensityMatrix::validate`].
    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        if m.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: m.dim(),
            });
        }
        Ok(AtomDensityMatrix(m))
    }

    /// Pure state `|v⟩⟨v|` from four amplitudes in atomic-basis order.
    pub fn pure(v: [Complex64; 4]) -> Self {
        AtomDensityMatrix(ComplexMatrix::from_fn(4, |i, j| v[i] * v[j].conj()))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    /// Entry with 0-based indices in `{ee, eg, ge, gg}` order.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.0.matmul(&self.0).map(|m| m.trace().re).unwrap_or(f64::NAN)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eigh(&self.0)?.values)
    }

    /// Checks Hermiticity and unit trace to 1e-12 and eigenvalues ≥ −1e-10.
    pub fn validate(&self) -> Result<()> {
        let asymmetry = self.0.hermitian_defect();
        if asymmetry > 1e-12 {
            return Err(Error::NotHermitian { asymmetry });
        }
        let tr = self.0.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(Error::domain("trace", tr.re, "must equal 1"));
        }
        let min = self.eigenvalues()?[0];
        if min < -PSD_TOLERANCE {
            return Err(Error::NotPositive { eigenvalue: min });
        }
        Ok(())
    }

    /// `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†` for 2×2 unitaries in `{e, g}` order.
    pub fn local_transform(&self, u_a: &ComplexMatrix, u_b: &ComplexMatrix) -> Result<Self> {
        for u in [u_a, u_b] {
            if u.dim() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    found: u.dim(),
                });
            }
        }
        let u = ComplexMatrix::from_fn(4, |i, j| u_a[(i / 2, j / 2)] * u_b[(i % 2, j % 2)]);
        Ok(AtomDensityMatrix(u.matmul(&self.0)?.matmul(&u.adjoint())?))
    }
}

/// Traces out both field modes.
pub fn reduce_to_atoms(psi: &StateVector, basis: &Basis) -> Result<AtomDensityMatrix> {
    if psi.len() != basis.len() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            found: psi.len(),
        });
    }
    let photons = basis.len() / 4;
    let amps = psi.amplitudes();
    let rho = ComplexMatrix::from_fn(4, |a, b| {
        let ra = &amps[a * photons..(a + 1) * photons];
        let rb = &amps[b * photons..(b + 1) * photons];
        ra.iter().zip(rb).map(|(x, y)| x * y.conj()).sum()
    });
    Ok(AtomDensityMatrix(rho))
}

/// `σ_y ⊗ σ_y` in `{ee, eg, ge, gg}` order.
fn spin_flip() -> ComplexMatrix {
    let mut y = ComplexMatrix::zeros(4);
    y[(0, 3)] = Complex64::new(-1.0, 0.0);
    y[(1, 2)] = Complex64::new(1.0, 0.0);
    y[(2, 1)] = Complex64::new(1.0, 0.0);
    y[(3, 0)] = Complex64::new(-1.0, 0.0);
    y
}

/// Square roots `√μ₁ ≥ … ≥ √μ₄` of the eigenvalues of `ρ(σ_y⊗σ_y)ρ*(σ_y⊗σ_y)`.
///
/// They are the singular values of `√ρ (σ_y⊗σ_y) √ρ*`, obtained from the
/// Hermitian dilation `[[0, X], [X†, 0]]` so that no square root of a tiny
/// eigenvalue is ever taken.
pub fn wootters_roots(rho: &AtomDensityMatrix) -> Result<[f64; 4]> {
    let e = eigh(rho.matrix())?;
    let min = e.values[0];
    if min < -PSD_TOLERANCE {
        return Err(Error::NotPositive { eigenvalue: min });
    }
    let largest = e.values[3].max(0.0);
    let roots: Vec<f64> = e
        .values
        .iter()
        .map(|&p| if p <= RANK_FLOOR * largest { 0.0 } else { p.sqrt() })
        .collect();
    let v = &e.vectors;
    let sqrt_rho = v
        .matmul(&ComplexMatrix::from_diagonal(&roots))?
        .matmul(&v.adjoint())?;
    let x = sqrt_rho.matmul(&spin_flip())?.matmul(&sqrt_rho.conj())?;

    let dilation = ComplexMatrix::from_fn(8, |i, j| match (i < 4, j < 4) {
        (true, false) => x[(i, j - 4)],
        (false, true) => x[(j, i - 4)].conj(),
        _ => Complex64::new(0.0, 0.0),
    });
    let s = eigh(&dilation)?.values;
    Ok([s[7].max(0.0), s[6].max(0.0), s[5].max(0.0), s[4].max(0.0)])
}

/// Wootters concurrence `max{0, √μ₁ − √μ₂ − √μ₃ − √μ₄}`, valid for any
/// two-qubit state.
pub fn wootters_concurrence(rho: &AtomDensityMatrix) -> Result<f64> {
    let r = wootters_roots(rho)?;
    Ok((r[0] - r[1] - r[2] - r[3]).max(0.0))
}

const NON_X: [(usize, usize); 8] = [
    (0, 1),
    (0, 2),
    (1, 0),
    (1, 3),
    (2, 0),
    (2, 3),
    (3, 1),
    (3, 2),
];

/// Signed X-state value `2·max{|ρ_eg,ge| − √(ρ_ee ρ_gg), |ρ_ee,gg| − √(ρ_eg ρ_ge)}`
/// (diagonal entries abbreviated). Concurrence is its positive part;
/// non-positive values mean the state is separable.
pub fn xstate_margin(rho: &AtomDensityMatrix) -> Result<f64> {
    let magnitude = NON_X
        .iter()
        .map(|&(i, j)| rho.get(i, j).norm())
        .fold(0.0, f64::max);
    if magnitude > X_SHAPE_TOLERANCE {
        return Err(Error::NotXState { magnitude });
    }
    let d = |i: usize| rho.get(i, i).re.max(0.0);
    let coherent_flip = rho.get(1, 2).norm() - (d(0) * d(3)).sqrt();
    let coherent_pair = rho.get(0, 3).norm() - (d(1) * d(2)).sqrt();
    Ok(2.0 * coherent_flip.max(coherent_pair))
}

/// Closed-form concurrence of an X-shaped state. Non-X input is rejected;
/// use [`wootters_concurrence`] for those.
pub fn xstate_concurrence(rho: &AtomDensityMatrix) -> Result<f64> {
    Ok(xstate_margin(rho)?.max(0.0))
}
