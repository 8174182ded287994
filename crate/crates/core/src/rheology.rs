//! Temperature-dependent viscosity, complex rigidity of Maxwell, Burgers and
//! Andrade bodies, and the degree-2 Love number of a homogeneous sphere.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::model::BodyPhysical;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RheologyModel {
    Maxwell,
    Burgers,
    Andrade,
}

impl RheologyModel {
    pub const ALL: [RheologyModel; 3] = [Self::Maxwell, Self::Burgers, Self::Andrade];

    pub fn name(self) -> &'static str {
        match self {
            Self::Maxwell => "maxwell",
            Self::Burgers => "burgers",
            Self::Andrade => "andrade",
        }
    }
}

/// Material parameters of the ice-rock mixture.
///
/// For Burgers the steady-state (Maxwell) element carries `mu_elastic` and
/// the temperature-dependent viscosity; the transient (Kelvin-Voigt) element
/// has μ₁ = μ₂ / `burgers_mu_ratio` and η₁ = η₂ / `burgers_eta_ratio`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RheologyParams {
    pub model: RheologyModel,
    /// Pa
    pub mu_elastic: f64,
    /// Viscosity at the melting temperature, Pa·s.
    pub eta_ref: f64,
    /// K
    pub t_melt: f64,
    /// J/mol
    pub e_activation: f64,
    /// J/mol/K
    pub gas_const: f64,
    /// μ₂/μ₁
    pub burgers_mu_ratio: f64,
    /// η₂/η₁ (steady over transient)
    pub burgers_eta_ratio: f64,
    pub andrade_alpha: f64,
    /// Pa⁻¹ s⁻ᵅ. `None` derives β = μ^(α−1) / η^α from the current viscosity.
    pub andrade_beta: Option<f64>,
}

impl Default for RheologyParams {
    fn default() -> Self {
        Self {
            model: RheologyModel::Maxwell,
            mu_elastic: 27.0e9,
            eta_ref: 1.0e15,
            t_melt: 273.0,
            e_activation: 50.0e3,
            gas_const: 8.31,
            burgers_mu_ratio: 1.0,
            burgers_eta_ratio: 17.0,
            andrade_alpha: 0.33,
            andrade_beta: None,
        }
    }
}

impl RheologyParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("mu_elastic", self.mu_elastic),
            ("eta_ref", self.eta_ref),
            ("t_melt", self.t_melt),
            ("burgers_mu_ratio", self.burgers_mu_ratio),
            ("burgers_eta_ratio", self.burgers_eta_ratio),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain("rheology", format!("{name} must be positive, got {v}")));
            }
        }
        match self.model {
            RheologyModel::Andrade if !(0.3..=0.38).contains(&self.andrade_alpha) => {
                return Err(Error::domain(
                    "rheology",
                    format!("andrade_alpha must be in [0.3, 0.38], got {}", self.andrade_alpha),
                ));
            }
            RheologyModel::Burgers if !(17.0..=2500.0).contains(&self.burgers_eta_ratio) => {
                return Err(Error::domain(
                    "rheology",
                    format!(
                        "burgers_eta_ratio must be in [17, 2500], got {}",
                        self.burgers_eta_ratio
                    ),
                ));
            }
            _ => {}
        }
        if let Some(b) = self.andrade_beta {
            if !(b > 0.0) {
                return Err(Error::domain("rheology", format!("andrade_beta must be > 0, got {b}")));
            }
        }
        Ok(())
    }

    /// Maxwell relaxation time η/μ at temperature `t`, s.
    pub fn maxwell_time(&self, t: f64) -> Result<f64> {
        Ok(viscosity(t, self)? / self.mu_elastic)
    }
}

/// Arrhenius-type Newtonian viscosity
/// η = η₀ exp[(E_a / (R_g T_m)) (T_m / T − 1)].
pub fn viscosity(t: f64, params: &RheologyParams) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain("viscosity", format!("temperature must be > 0 K, got {t}")));
    }
    let expo = params.e_activation / (params.gas_const * params.t_melt) * (params.t_melt / t - 1.0);
    Ok(params.eta_ref * expo.exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vrh {
    pub voigt: f64,
    pub reuss: f64,
    pub hill: f64,
}

/// Voigt, Reuss and Hill rigidities of a two-phase mixture with silicate
/// mass fraction `x_s`.
pub fn vrh_rigidity(x_s: f64, mu_s: f64, mu_i: f64) -> Result<Vrh> {
    if !(0.0..=1.0).contains(&x_s) {
        return Err(Error::domain("vrh_rigidity", format!("x_s must be in [0, 1], got {x_s}")));
    }
    if !(mu_s > 0.0 && mu_i > 0.0) {
        return Err(Error::domain("vrh_rigidity", "rigidities must be positive"));
    }
    let voigt = x_s * mu_s + (1.0 - x_s) * mu_i;
    let reuss = 1.0 / (x_s / mu_s + (1.0 - x_s) / mu_i);
    Ok(Vrh {
        voigt,
        reuss,
        hill: 0.5 * (voigt + reuss),
    })
}

/// Maxwell complex rigidity
/// μ̃ = μ η²ω² / (μ² + η²ω²) + i μ² η ω / (μ² + η²ω²).
///
/// Written in terms of x = ηω/μ so that very stiff ice does not overflow.
pub fn rigidity_maxwell(omega: f64, mu: f64, eta: f64) -> Complex64 {
    let x = eta * omega / mu;
    if x > 1.0 {
        let ix = 1.0 / x;
        Complex64::new(mu / (1.0 + ix * ix), mu / (x + ix))
    } else {
        let d = 1.0 + x * x;
        Complex64::new(mu * x * x / d, mu * x / d)
    }
}

/// Burgers complex rigidity with transient element (μ₁, η₁) and steady-state
/// element (μ₂, η₂):
///
/// C₁ = 1/μ₁ + η₁/(μ₁η₂) + 1/μ₂,  C₂ = 1/η₂ − η₁ω²/(μ₁μ₂),
/// μ̃ = [ω²(C₁ − η₁C₂/μ₁) + iω(C₂ + η₁ω²C₁/μ₁)] / (C₂² + ω²C₁²).
pub fn rigidity_burgers(omega: f64, mu1: f64, mu2: f64, eta1: f64, eta2: f64) -> Complex64 {
    let c1 = 1.0 / mu1 + eta1 / (mu1 * eta2) + 1.0 / mu2;
    let c2 = 1.0 / eta2 - eta1 / (mu1 * mu2) * omega * omega;
    // scale numerator and denominator by s² to keep the squares finite
    let s = c2.abs().max(omega * c1);
    let (c1s, c2s) = (omega * c1 / s, c2 / s);
    let den = c2s * c2s + c1s * c1s;
    let tau1 = eta1 * omega / mu1;
    let re = omega * (c1s - tau1 * c2s) / (s * den);
    let im = omega * (c2s + tau1 * c1s) / (s * den);
    Complex64::new(re, im)
}

/// Andrade complex rigidity. The compliance
///
/// J̃ = 1/μ + β ω^(−α) cos(απ/2) Γ(α+1) − i [1/(ηω) + β ω^(−α) sin(απ/2) Γ(α+1)]
///
/// is inverted to give μ̃ = 1/J̃.
pub fn rigidity_andrade(omega: f64, mu: f64, eta: f64, alpha: f64, beta: f64) -> Complex64 {
    let transient = beta * omega.powf(-alpha) * libm::tgamma(alpha + 1.0);
    let half = 0.5 * alpha * std::f64::consts::PI;
    let compliance = Complex64::new(
        1.0 / mu + transient * half.cos(),
        -(1.0 / (eta * omega) + transient * half.sin()),
    );
    compliance.inv()
}

/// β = μ^(α−1) / η^α.
pub fn andrade_beta_from_viscosity(mu: f64, eta: f64, alpha: f64) -> f64 {
    ((alpha - 1.0) * mu.ln() - alpha * eta.ln()).exp()
}

/// Complex degree-2 Love number of a homogeneous incompressible sphere,
/// k̃₂ = (3/2) / (1 + 19μ̃ / (2ρgR)).
pub fn love_number_k2(mu_tilde: Complex64, rho: f64, g: f64, radius: f64) -> Result<Complex64> {
    if !(rho > 0.0 && g > 0.0 && radius > 0.0) {
        return Err(Error::domain("love_number_k2", "rho, g and R must be positive"));
    }
    let c = 19.0 / (2.0 * rho * g * radius);
    Ok(Complex64::new(1.5, 0.0) / (Complex64::new(1.0, 0.0) + mu_tilde * c))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TidalResponse {
    /// Pa·s
    pub viscosity: f64,
    pub mu_complex: (f64, f64),
    pub k2_complex: (f64, f64),
    pub k2: f64,
    pub q_factor: f64,
    pub k2_over_q: f64,
}

/// Complex rigidity of the selected model at viscosity `eta`.
pub fn complex_rigidity(omega: f64, eta: f64, params: &RheologyParams) -> Complex64 {
    let mu = params.mu_elastic;
    match params.model {
        RheologyModel::Maxwell => rigidity_maxwell(omega, mu, eta),
        RheologyModel::Burgers => rigidity_burgers(
            omega,
            mu / params.burgers_mu_ratio,
            mu,
            eta / params.burgers_eta_ratio,
            eta,
        ),
        RheologyModel::Andrade => {
            let beta = params
                .andrade_beta
                .unwrap_or_else(|| andrade_beta_from_viscosity(mu, eta, params.andrade_alpha));
            rigidity_andrade(omega, mu, eta, params.andrade_alpha, beta)
        }
    }
}

/// Mean temperature → viscosity → complex rigidity → k̃₂ → (Q, k₂/Q), with
/// Q = |k̃₂| / |Im k̃₂| and k₂/Q = |Im k̃₂|.
pub fn tidal_response(
    t_mean: f64,
    omega: f64,
    body: &BodyPhysical,
    params: &RheologyParams,
) -> Result<TidalResponse> {
    if !(omega > 0.0) {
        return Err(Error::domain("tidal_response", format!("omega must be > 0, got {omega}")));
    }
    let eta = viscosity(t_mean, params)?;
    let mu_t = complex_rigidity(omega, eta, params);
    let k2c = love_number_k2(mu_t, body.density, body.surface_gravity(), body.radius_m())?;
    let k2 = k2c.norm();
    let k2q = k2c.im.abs();
    Ok(TidalResponse {
        viscosity: eta,
        mu_complex: (mu_t.re, mu_t.im),
        k2_complex: (k2c.re, k2c.im),
        k2,
        q_factor: k2 / k2q,
        k2_over_q: k2q,
    })
}

/// (T_m, Q) samples at fixed temperature and forcing frequency.
pub fn q_curve(
    t_mean: f64,
    omega: f64,
    body: &BodyPhysical,
    params: &RheologyParams,
    t_melt: impl IntoIterator<Item = f64>,
) -> Result<Vec<(f64, f64)>> {
    t_melt
        .into_iter()
        .map(|tm| {
            let p = RheologyParams { t_melt: tm, ..*params };
            tidal_response(t_mean, omega, body, &p).map(|r| (tm, r.q_factor))
        })
        .collect()
}

/// (T, η) samples.
pub fn viscosity_curve(
    params: &RheologyParams,
    temps: impl IntoIterator<Item = f64>,
) -> Result<Vec<(f64, f64)>> {
    temps.into_iter().map(|t| viscosity(t, params).map(|e| (t, e))).collect()
}
