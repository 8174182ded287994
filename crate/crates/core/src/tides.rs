//! Tidal dissipation, Cassini obliquity and Kaula migration rates.

use serde::{Deserialize, Serialize};

use crate::constants::{gm_per_year, G_SI, MYR_S};
use crate::model::{mean_motion, BodyPhysical, PlanetModel};
use crate::{Error, Result};

/// Secular tidal rates of one satellite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TidalRates {
    /// km/yr
    pub da_dt: f64,
    /// 1/yr
    pub de_dt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InertiaMoments {
    /// kg·m²
    pub i_a: f64,
    /// kg·m²
    pub i_c: f64,
}

/// Principal moments of a homogeneous triaxial ellipsoid with semi-axes in
/// metres.
pub fn moments_of_inertia(rho: f64, r_a: f64, r_b: f64, r_c: f64) -> Result<InertiaMoments> {
    if !(rho > 0.0 && r_a > 0.0 && r_b > 0.0 && r_c > 0.0) {
        return Err(Error::domain("moments_of_inertia", "density and radii must be positive"));
    }
    let f = 4.0 / 15.0 * rho * std::f64::consts::PI * r_a * r_b * r_c;
    Ok(InertiaMoments {
        i_a: f * (r_b * r_b + r_c * r_c),
        i_c: f * (r_a * r_a + r_b * r_b),
    })
}

impl InertiaMoments {
    pub fn of_body(body: &BodyPhysical) -> Result<Self> {
        let [a, b, c] = body.triaxial_radii;
        moments_of_inertia(body.density, a * 1e3, b * 1e3, c * 1e3)
    }
}

/// Secular J₂ node regression −(3/2) n J₂ (R_p/a)² cos I, rad/s.
pub fn node_rate(a: f64, inc: f64, planet: &PlanetModel) -> Result<f64> {
    let n = mean_motion(a, planet)?;
    let ratio = planet.radius_ref / a;
    Ok(-1.5 * n * planet.j2 * ratio * ratio * inc.cos())
}

/// Secular J₂ pericentre advance (3/4) n J₂ (R_p/a)² (5cos²I − 2cos I − 1),
/// rad/s.
pub fn apsidal_rate(a: f64, inc: f64, planet: &PlanetModel) -> Result<f64> {
    let n = mean_motion(a, planet)?;
    let ratio = planet.radius_ref / a;
    let c = inc.cos();
    Ok(0.75 * n * planet.j2 * ratio * ratio * (5.0 * c * c - 2.0 * c - 1.0))
}

/// Cassini-state-1 obliquity ε ≈ sin I / (α_c/Ω̇ + cos I) with
/// α_c = (3/2)(C − A)n/C.
pub fn equilibrium_obliquity(inc: f64, n: f64, node_rate: f64, moments: &InertiaMoments) -> Result<f64> {
    if inc == 0.0 {
        return Ok(0.0);
    }
    let alpha_c = 1.5 * (moments.i_c - moments.i_a) * n / moments.i_c;
    let den = if alpha_c == 0.0 {
        inc.cos()
    } else {
        if node_rate == 0.0 {
            return Ok(0.0);
        }
        alpha_c / node_rate + inc.cos()
    };
    if den.abs() < 1e-12 {
        return Err(Error::SingularCassini(den));
    }
    Ok(inc.sin() / den)
}

/// Tidal dissipation rate in a synchronous satellite, W.
///
/// `planet_gm` in km³/s², `n` in rad/s, `r_s` and `a` in km.
pub fn dissipation_rate(k2_over_q: f64, planet_gm: f64, n: f64, r_s: f64, a: f64, e: f64, eps: f64) -> f64 {
    let gm = planet_gm * 1e9;
    let (r, a) = (r_s * 1e3, a * 1e3);
    let s = eps.sin();
    k2_over_q * gm * gm / G_SI * n * r.powi(5) / a.powi(6) * (10.5 * e * e + 1.5 * s * s)
}

/// Kaula rates split by their dependence on e:
/// da/dt = da0 + da_e2·e², de/dt = kappa·e.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KaulaCoeffs {
    /// km/yr
    pub da0: f64,
    /// km/yr
    pub da_e2: f64,
    /// 1/yr
    pub kappa: f64,
}

impl KaulaCoeffs {
    pub fn new(a: f64, sat: &BodyPhysical, planet: &PlanetModel, k2q_p: f64, k2q_s: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::domain("kaula_rates", format!("need a > 0, got a={a}")));
        }
        let n = (gm_per_year(planet.gm) / (a * a * a)).sqrt();
        let mass_ratio = sat.gm / planet.gm;
        let planet_side = k2q_p * n * mass_ratio * (planet.radius_ref / a).powi(5);
        let sat_side = k2q_s * n / mass_ratio * (sat.mean_radius / a).powi(5);
        Ok(Self {
            da0: 3.0 * planet_side * a,
            da_e2: 3.0 * 12.75 * planet_side * a - 21.0 * sat_side * a,
            kappa: 57.0 / 8.0 * planet_side - 10.5 * sat_side,
        })
    }

    pub fn rates(&self, e: f64) -> TidalRates {
        TidalRates {
            da_dt: self.da0 + self.da_e2 * e * e,
            de_dt: self.kappa * e,
        }
    }
}

/// Kaula secular rates for a satellite at semi-major axis `a` (km) with
/// eccentricity `e`.
pub fn kaula_rates(
    a: f64,
    e: f64,
    sat: &BodyPhysical,
    planet: &PlanetModel,
    k2q_p: f64,
    k2q_s: f64,
) -> Result<TidalRates> {
    if !(a > 0.0) || !(0.0..1.0).contains(&e) {
        return Err(Error::domain("kaula_rates", format!("need a > 0 and 0 <= e < 1, got a={a}, e={e}")));
    }
    Ok(KaulaCoeffs::new(a, sat, planet, k2q_p, k2q_s)?.rates(e))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatingEstimate {
    /// W
    pub power: f64,
    /// Temperature rise over one Myr without losses, K.
    pub dt_per_myr: f64,
}

/// Quick e²/Q heating estimate for a satellite on an orbit of semi-major
/// axis `a` (km) with specific heat `cp`.
pub fn heating_estimate(
    e: f64,
    q_factor: f64,
    k2: f64,
    sat: &BodyPhysical,
    planet: &PlanetModel,
    a: f64,
    cp: f64,
) -> Result<HeatingEstimate> {
    if !(q_factor > 0.0) {
        return Err(Error::domain("heating_estimate", format!("Q must be > 0, got {q_factor}")));
    }
    let n = mean_motion(a, planet)?;
    let gm = planet.gm * 1e9;
    let (r, am) = (sat.radius_m(), a * 1e3);
    let c_est = 10.5 * k2 * gm * gm / G_SI * n * r.powi(5) / am.powi(6);
    let power = c_est * e * e / q_factor;
    Ok(HeatingEstimate {
        power,
        dt_per_myr: power / sat.mass() * MYR_S / cp,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub e: f64,
    pub q_factor: f64,
    pub power: f64,
    pub dt_per_myr: f64,
    /// log10 of ΔT, or −∞ when ΔT = 0.
    pub log10_dt: f64,
}

/// Heating estimates over every (e, Q) pair, e varying slowest.
#[allow(clippy::too_many_arguments)]
pub fn estimate_grid(
    es: &[f64],
    qs: &[f64],
    k2: f64,
    sat: &BodyPhysical,
    planet: &PlanetModel,
    a: f64,
    cp: f64,
) -> Result<Vec<EstimateRow>> {
    let mut rows = Vec::with_capacity(es.len() * qs.len());
    for &e in es {
        for &q in qs {
            let h = heating_estimate(e, q, k2, sat, planet, a, cp)?;
            rows.push(EstimateRow {
                e,
                q_factor: q,
                power: h.power,
                dt_per_myr: h.dt_per_myr,
                log10_dt: h.dt_per_myr.log10(),
            });
        }
    }
    Ok(rows)
}
