//! Closed-form amplitudes for the two initial-state families.
//!
//! `Psi` family, `|Ψ(T)⟩ = x₁|eg00⟩ + x₂|ge00⟩ + x₃|gg11⟩`:
//!
//! ```text
//! x₁ = (Λ/4)[θ₊(L₊ − L₋e^{iκT}) + 2Ξθ₋]
//! x₂ = (Λ/4)[θ₊(L₊ − L₋e^{iκT}) − 2Ξθ₋]
//! x₃ = (Λθ₊/κ)(1 − e^{iκT})
//! Λ = e^{−iκL₊T/2},  Ξ = e^{i(3L₊−2)κT/2}
//! ```
//!
//! `Phi` family, `|Φ(T)⟩ = x₁|ee00⟩ + x₂|gg00⟩ + x₃|ge11⟩ + x₄|eg11⟩ + x₅|gg22⟩`:
//!
//! ```text
//! x₁ = (Γ/4)(M₊ − (ε/η)M₋ + 2e^{i(ε+η)T/2})
//! x₂ = e^{iλT} sin α
//! x₃ = x₄ = ΓM₋/η
//! x₅ = (Γ/4)(M₊ − (ε/η)M₋ − 2e^{i(ε+η)T/2})
//! Γ = cos α · e^{−i(2λ+ε+η)T/2},  M± = 1 ± e^{iηT}
//! ```
//!
//! The dipole terms (`L₊ − L₋e^{iκT}` and `−(ε/η)M₋`) are the forms that
//! solve the Schrödinger equation with `exp(−iHT)`; writing them with the
//! opposite ε-orientation (`L₊e^{iκT} − L₋`, `+(ε/η)M₋`) only agrees at
//! `ε = 0`. The `Phi` amplitudes solve the model with unit pair amplitudes,
//! see [`crate::model::LadderScaling`].

use num_complex::Complex64;

use crate::model::{check_alpha, Basis, DerivedConstants, Family, Level, StateVector};
use crate::{Error, Result};

/// Closed-form amplitudes of one family at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    family: Family,
    amplitudes: Vec<Complex64>,
    pub alpha: f64,
    pub epsilon: f64,
    pub lambda: f64,
    pub t: f64,
}

impl CoefficientSet {
    pub fn family(&self) -> Family {
        self.family
    }

    /// `x₁, x₂, x₃` for `Psi`; `x₁ … x₅` for `Phi`.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// 1-based access matching the usual `x_i` naming.
    pub fn x(&self, i: usize) -> Complex64 {
        self.amplitudes[i - 1]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Basis states the amplitudes sit on, in order.
    pub fn support(&self) -> Vec<(Level, Level, usize, usize)> {
        use Level::{Excited as E, Ground as G};
        match self.family {
            Family::Psi => vec![(E, G, 0, 0), (G, E, 0, 0), (G, G, 1, 1)],
            Family::Phi => vec![
                (E, E, 0, 0),
                (G, G, 0, 0),
                (G, E, 1, 1),
                (E, G, 1, 1),
                (G, G, 2, 2),
            ],
        }
    }
}

fn check_inputs(alpha: f64, epsilon: f64, t: f64) -> Result<()> {
    check_alpha(alpha)?;
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::domain("epsilon", epsilon, "must be non-negative and finite"));
    }
    if !t.is_finite() {
        return Err(Error::domain("T", t, "must be finite"));
    }
    Ok(())
}

fn cis(phase: f64) -> Complex64 {
    Complex64::from_polar(1.0, phase)
}

/// Amplitudes of `cos α|eg00⟩ + sin α|ge00⟩` evolved to time `t`.
pub fn psi_coefficients(alpha: f64, epsilon: f64, t: f64) -> Result<CoefficientSet> {
    check_inputs(alpha, epsilon, t)?;
    let d = DerivedConstants::new(epsilon, alpha);
    let big_lambda = cis(-d.kappa * d.l_plus * t / 2.0);
    let xi = cis((3.0 * d.l_plus - 2.0) * d.kappa * t / 2.0);
    let rotating = cis(d.kappa * t);

    let symmetric = d.theta_plus * (d.l_plus - d.l_minus * rotating);
    let antisymmetric = 2.0 * xi * d.theta_minus;
    let x1 = big_lambda / 4.0 * (symmetric + antisymmetric);
    let x2 = big_lambda / 4.0 * (symmetric - antisymmetric);
    let x3 = big_lambda * d.theta_plus / d.kappa * (1.0 - rotating);

    Ok(CoefficientSet {
        family: Family::Psi,
        amplitudes: vec![x1, x2, x3],
        alpha,
        epsilon,
        lambda: f64::NAN,
        t,
    })
}

/// Amplitudes of `cos α|ee00⟩ + sin α|gg00⟩` evolved to time `t`.
/// `lambda = ω₀/g` only enters phases.
pub fn phi_coefficients(alpha: f64, epsilon: f64, lambda: f64, t: f64) -> Result<CoefficientSet> {
    check_inputs(alpha, epsilon, t)?;
    if !lambda.is_finite() {
        return Err(Error::domain("lambda", lambda, "must be finite"));
    }
    let d = DerivedConstants::new(epsilon, alpha);
    let eta = d.eta;
    let gamma = alpha.cos() * cis(-(2.0 * lambda + epsilon + eta) * t / 2.0);
    let m_plus = 1.0 + cis(eta * t);
    let m_minus = 1.0 - cis(eta * t);
    let dark = 2.0 * cis((epsilon + eta) * t / 2.0);
    let bright = m_plus - epsilon / eta * m_minus;

    let x1 = gamma / 4.0 * (bright + dark);
    let x2 = cis(lambda * t) * alpha.sin();
    let x3 = gamma * m_minus / eta;
    let x5 = gamma / 4.0 * (bright - dark);

    Ok(CoefficientSet {
        family: Family::Phi,
        amplitudes: vec![x1, x2, x3, x3, x5],
        alpha,
        epsilon,
        lambda,
        t,
    })
}

/// Places the amplitudes on their basis states; zeros elsewhere.
pub fn assemble_state(coefs: &CoefficientSet, basis: &Basis) -> Result<StateVector> {
    let required = match coefs.family {
        Family::Psi => 1,
        Family::Phi => 2,
    };
    if basis.n_max() < required {
        return Err(Error::BasisTooSmall {
            n_max: basis.n_max(),
            required,
        });
    }
    let mut psi = StateVector::zeros(basis.len());
    for ((a, b, na, nb), &x) in coefs.support().into_iter().zip(&coefs.amplitudes) {
        psi.amplitudes_mut()[basis.index(a, b, na, nb)] = x;
    }
    Ok(psi)
}
