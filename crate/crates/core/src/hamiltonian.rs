//! Dense Hamiltonian of the two-atom, two-mode, two-photon cavity:
//!
//! ```text
//! H = ω_a a†a + ω_b b†b + ½ω₀(σ_A^z + σ_B^z)
//!   + g Σ_l (a† b† σ_l⁻ + a b σ_l⁺) + Ω(σ_A⁺σ_B⁻ + σ_B⁺σ_A⁻)
//! ```
//!
//! Pair creation that would leave the truncation is dropped. For excitation
//! sectors that fit entirely inside the truncation this is exact.

use std::io::Write;

use num_complex::Complex64;

use crate::linalg::ComplexMatrix;
use crate::model::{Basis, Level, ModelParams};
use crate::output::fmt_complex;
use crate::{Error, Result};

/// A Hermitian matrix; entries satisfy `m_ij == conj(m_ji)` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Wraps `m` if it is exactly Hermitian.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let asymmetry = m.hermitian_defect();
        if asymmetry > 0.0 {
            return Err(Error::NotHermitian { asymmetry });
        }
        Ok(HermitianMatrix(m))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    /// Sets `m_ij = z` and `m_ji = conj(z)`. Diagonal entries keep only the
    /// real part.
    pub fn with_entry(mut self, i: usize, j: usize, z: Complex64) -> Self {
        if i == j {
            self.0[(i, i)] = Complex64::new(z.re, 0.0);
        } else {
            self.0[(i, j)] = z;
            self.0[(j, i)] = z.conj();
        }
        self
    }

    /// Writes one CSV row per matrix row, entries formatted as `re+imi`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for i in 0..self.dim() {
            let row: Vec<String> = self.0.row(i).iter().map(|&z| fmt_complex(z)).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Builds `H` on `basis`. The basis must have the same truncation as
/// `params`.
pub fn build_hamiltonian(params: &ModelParams, basis: &Basis) -> Result<HermitianMatrix> {
    if basis.n_max() != params.n_max() {
        return Err(Error::DimensionMismatch {
            expected: params.basis().len(),
            found: basis.len(),
        });
    }
    let n_max = basis.n_max();
    let mut h = ComplexMatrix::zeros(basis.len());

    for (i, s) in basis.states().iter().enumerate() {
        let sz = |l: Level| if l == Level::Excited { 1.0 } else { -1.0 };
        let diag = params.omega_a() * s.n_a as f64
            + params.omega_b() * s.n_b as f64
            + 0.5 * params.omega_0() * (sz(s.atom_a) + sz(s.atom_b));
        h[(i, i)] = Complex64::new(diag, 0.0);

        // a† b† σ_l⁻ and, through the conjugate entry, a b σ_l⁺.
        if s.n_a < n_max && s.n_b < n_max {
            let amp = params.g() * params.ladder().pair_raise(s.n_a, s.n_b);
            let mut lower = |atom_a: Level, atom_b: Level| {
                let j = basis.index(atom_a, atom_b, s.n_a + 1, s.n_b + 1);
                h[(j, i)] = Complex64::new(amp, 0.0);
                h[(i, j)] = Complex64::new(amp, 0.0);
            };
            if s.atom_a == Level::Excited {
                lower(Level::Ground, s.atom_b);
            }
            if s.atom_b == Level::Excited {
                lower(s.atom_a, Level::Ground);
            }
        }

        // Flip-flop between |eg⟩ and |ge⟩ at fixed photon numbers.
        if s.atom_a == Level::Excited && s.atom_b == Level::Ground {
            let j = basis.index(Level::Ground, Level::Excited, s.n_a, s.n_b);
            h[(i, j)] = Complex64::new(params.dipole(), 0.0);
            h[(j, i)] = Complex64::new(params.dipole(), 0.0);
        }
    }
    HermitianMatrix::new(h)
}

/// True iff `h` has no nonzero element between states of different
/// excitation number.
pub fn check_conservation(h: &HermitianMatrix, basis: &Basis) -> bool {
    if h.dim() != basis.len() {
        return false;
    }
    let states = basis.states();
    (0..h.dim()).all(|i| {
        (0..h.dim()).all(|j| {
            h.get(i, j) == Complex64::new(0.0, 0.0)
                || states[i].excitation_number() == states[j].excitation_number()
        })
    })
}

/// Submatrix of `h` on the states with excitation number `n`, together with
/// the global index of each retained row. An empty sector yields a 0×0
/// matrix.
pub fn restrict_to_sector(
    h: &HermitianMatrix,
    basis: &Basis,
    n: usize,
) -> Result<(HermitianMatrix, Vec<usize>)> {
    if h.dim() != basis.len() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            found: h.dim(),
        });
    }
    let indices: Vec<usize> = basis
        .states()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.excitation_number() == n)
        .map(|(i, _)| i)
        .collect();
    let sub = ComplexMatrix::from_fn(indices.len(), |r, c| h.get(indices[r], indices[c]));
    Ok((HermitianMatrix::new(sub)?, indices))
}
