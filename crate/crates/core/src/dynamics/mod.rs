//! Averaged resonant dynamics of the satellite pair, its integrator and a
//! direct three-body reference model.
//!
//! The averaged state vector is
//! (a, k, h, q, p) of the inner satellite, the same for the outer one, and
//! Ψ = 3λ₂ − λ₅, with a in km and time in years.

pub mod abm;
pub mod direct;
pub mod laplace;
pub mod perturbation;

pub use abm::{abm10_integrate, abm10_integrate_every, Abm10, Trajectory};
pub use direct::{direct_threebody_rhs, DirectModel, DirectState};
pub use laplace::{laplace_quadrature, laplace_series, LaplaceTable, LaplaceVals};
pub use perturbation::{
    indirect_terms, oblateness_term, perturbation_and_partials, resonant_coeffs, secular_coeffs, PairConstants,
    Partials, SatPartials,
};

use crate::constants::gm_per_year;
use crate::model::{BodyPhysical, PlanetModel, SystemState};
use crate::tides::KaulaCoeffs;
use crate::{Error, Result};

pub type DynState = [f64; 11];

/// Default averaged-model step, yr.
pub const DEFAULT_STEP_YR: f64 = 17.0 / 300.0;

/// Relative change of α that triggers a Laplace table rebuild.
pub const TABLE_TOLERANCE: f64 = 1e-6;

/// Tidal dissipation factors feeding the Kaula terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TidalTerms {
    pub k2q_planet: f64,
    /// inner, outer
    pub k2q_sat: [f64; 2],
}

/// Right-hand side of the averaged equations with its Laplace cache.
#[derive(Debug, Clone)]
pub struct AveragedModel {
    pub consts: PairConstants,
    pub bodies: [BodyPhysical; 2],
    tides: Option<[KaulaCoeffsAt; 2]>,
    table: Option<LaplaceTable>,
}

/// Kaula coefficients frozen at the semi-major axis they were built for.
#[derive(Debug, Clone, Copy)]
struct KaulaCoeffsAt {
    coeffs: KaulaCoeffs,
    terms: TidalTerms,
}

impl AveragedModel {
    pub fn new(planet: &PlanetModel, inner: &BodyPhysical, outer: &BodyPhysical) -> Self {
        Self {
            consts: PairConstants {
                planet: *planet,
                gm_planet: gm_per_year(planet.gm),
                gm_inner: gm_per_year(inner.gm),
                gm_outer: gm_per_year(outer.gm),
            },
            bodies: [*inner, *outer],
            tides: None,
            table: None,
        }
    }

    /// Enable Kaula terms, evaluated at the semi-major axes in `y`.
    /// Coupling refreshes them every macro-step; a drifts by ≪ 1 km over one.
    pub fn set_tides(&mut self, terms: Option<TidalTerms>, y: &DynState) -> Result<()> {
        self.tides = match terms {
            None => None,
            Some(terms) => {
                let mk = |i: usize| -> Result<KaulaCoeffsAt> {
                    let coeffs =
                        KaulaCoeffs::new(y[5 * i], &self.bodies[i], &self.consts.planet, terms.k2q_planet, terms.k2q_sat[i])?;
                    Ok(KaulaCoeffsAt { coeffs, terms })
                };
                Some([mk(0)?, mk(1)?])
            }
        };
        Ok(())
    }

    pub fn tides(&self) -> Option<TidalTerms> {
        self.tides.map(|t| t[0].terms)
    }

    /// Drop the Laplace cache so the next evaluation rebuilds it at the
    /// current α. Used at run boundaries to make results independent of
    /// history.
    pub fn reset_cache(&mut self) {
        self.table = None;
    }

    fn table_for(&mut self, alpha: f64) -> Result<&LaplaceTable> {
        match &mut self.table {
            Some(t) => t.refresh(alpha)?,
            slot @ None => *slot = Some(LaplaceTable::new(alpha, TABLE_TOLERANCE)?),
        }
        Ok(self.table.as_ref().unwrap())
    }

    /// Gravitational parameter of planet plus satellite `i`, km³/yr².
    pub fn mu(&self, i: usize) -> f64 {
        self.consts.gm_planet + [self.consts.gm_inner, self.consts.gm_outer][i]
    }

    /// Keplerian mean motion of satellite `i`, rad/yr.
    pub fn mean_motion(&self, i: usize, a: f64) -> f64 {
        (self.mu(i) / (a * a * a)).sqrt()
    }

    /// Disturbing functions and partials at `y`.
    pub fn partials(&mut self, y: &DynState) -> Result<Partials> {
        check_state(y)?;
        let consts = self.consts;
        let table = *self.table_for(y[0] / y[5])?;
        perturbation_and_partials(y, &consts, &table)
    }

    /// Time derivatives of the 11 averaged variables, plus the two mean
    /// longitude rates (rad/yr).
    pub fn rates(&mut self, y: &DynState) -> Result<(DynState, [f64; 2])> {
        let p = self.partials(y)?;
        let mut out = [0.0; 11];
        let mut lam = [0.0; 2];
        for (i, sp) in [p.inner, p.outer].iter().enumerate() {
            let o = 5 * i;
            let (a, k, h, q, pp) = (y[o], y[o + 1], y[o + 2], y[o + 3], y[o + 4]);
            let n = self.mean_motion(i, a);
            let na = n * a;
            let na2 = na * a;
            let e2 = k * k + h * h;
            let phi = (1.0 - e2).sqrt();
            let sz = k * sp.r_k + h * sp.r_h;
            let szeta = q * sp.r_q + pp * sp.r_p;
            let dz_comm = h * sp.r_k - k * sp.r_h;

            // dz/dt = (iφ/na²)[(R_k + iR_h) + (i/(1+φ)) z R_λ + z Sζ/(2φ²)]
            let c1 = sp.r_lambda / (1.0 + phi);
            let c2 = szeta / (2.0 * phi * phi);
            let br_re = sp.r_k - c1 * h + c2 * k;
            let br_im = sp.r_h + c1 * k + c2 * h;
            let f = phi / na2;
            let mut dk = -f * br_im;
            let mut dh = f * br_re;

            // dζ/dt = (i/(2na²φ))[(R_q + iR_p)/2 + iζR_λ − ζ·i(hR_k − kR_h)]
            let w = sp.r_lambda - dz_comm;
            let bq_re = 0.5 * sp.r_q - pp * w;
            let bq_im = 0.5 * sp.r_p + q * w;
            let g = 1.0 / (2.0 * na2 * phi);
            let dq = -g * bq_im;
            let dp = g * bq_re;

            let mut da = 2.0 * sp.r_lambda / na;
            lam[i] = n - 2.0 * sp.r_a / na + phi / (na2 * (1.0 + phi)) * sz + szeta / (2.0 * na2 * phi);

            if let Some(t) = &self.tides {
                let c = &t[i].coeffs;
                da += c.da0 + c.da_e2 * e2;
                dk += c.kappa * k;
                dh += c.kappa * h;
            }
            out[o..o + 5].copy_from_slice(&[da, dk, dh, dq, dp]);
        }
        out[10] = 3.0 * lam[1] - lam[0];
        Ok((out, lam))
    }

    /// The 11-component derivative vector.
    pub fn equations_of_motion(&mut self, y: &DynState) -> Result<DynState> {
        self.rates(y).map(|r| r.0)
    }

    /// 3m₅√(μ₅a₅) + m₂√(μ₂a₂), with masses as GM (km³/yr²).
    pub fn conserved_momentum(&self, y: &DynState) -> f64 {
        3.0 * self.consts.gm_inner * (self.mu(0) * y[0]).sqrt() + self.consts.gm_outer * (self.mu(1) * y[5]).sqrt()
    }

    /// Integrate without recording, returning the final state.
    pub fn propagate(&mut self, y0: DynState, span: f64, dt: f64) -> Result<DynState> {
        let n = abm::step_count(span, dt)?;
        if n < abm::STEPS {
            let tr = abm10_integrate(|_t, y: &DynState| self.equations_of_motion(y), y0, (0.0, span), dt)?;
            return Ok(*tr.last().unwrap().1);
        }
        let h = span / n as f64;
        let mut stepper = Abm10::new(|_t, y: &DynState| self.equations_of_motion(y), 0.0, y0, h)?;
        for _ in abm::STEPS..=n {
            stepper.step()?;
        }
        Ok(*stepper.state())
    }

    /// Integrate, recording every `every`-th step.
    pub fn trajectory(&mut self, y0: DynState, span: f64, dt: f64, every: usize) -> Result<Trajectory<11>> {
        abm10_integrate_every(|_t, y: &DynState| self.equations_of_motion(y), y0, (0.0, span), dt, every)
    }
}

/// Secular angular rates, rad/yr.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecularRates {
    pub psi: f64,
    /// inner, outer
    pub peri: [f64; 2],
    pub node: [f64; 2],
}

impl SecularRates {
    /// Rate of 2θ_k = −Ψ + (node/pericentre combination of θ_k), k = 1..6.
    pub fn theta_rate(&self, k: usize) -> f64 {
        let [w5, w2] = self.peri;
        let [o5, o2] = self.node;
        let combo = match k {
            1 => 2.0 * o5,
            2 => o5 + o2,
            3 => 2.0 * o2,
            4 => 2.0 * w2,
            5 => w5 + w2,
            _ => 2.0 * w5,
        };
        combo - self.psi
    }
}

impl AveragedModel {
    /// Ψ̇, ϖ̇ and Ω̇ with the resonant terms averaged out over Ψ. Zero
    /// eccentricities or inclinations are replaced by 1e-6 so the angles
    /// are defined.
    pub fn secular_rates(&mut self, y: &DynState) -> Result<SecularRates> {
        const SAMPLES: usize = 64;
        let mut z = *y;
        for o in [0, 5] {
            for (c, s) in [(o + 1, o + 2), (o + 3, o + 4)] {
                if z[c].hypot(z[s]) < 1e-6 {
                    z[c] = 1e-6;
                    z[s] = 0.0;
                }
            }
        }
        let mut acc = SecularRates { psi: 0.0, peri: [0.0; 2], node: [0.0; 2] };
        for j in 0..SAMPLES {
            z[10] = y[10] + j as f64 / SAMPLES as f64 * crate::constants::TWO_PI;
            let d = self.equations_of_motion(&z)?;
            acc.psi += d[10];
            for (i, o) in [0usize, 5].into_iter().enumerate() {
                let angle_rate = |c: usize, s: usize| (z[c] * d[s] - z[s] * d[c]) / (z[c] * z[c] + z[s] * z[s]);
                acc.peri[i] += angle_rate(o + 1, o + 2);
                acc.node[i] += angle_rate(o + 3, o + 4);
            }
        }
        let n = SAMPLES as f64;
        Ok(SecularRates {
            psi: acc.psi / n,
            peri: acc.peri.map(|x| x / n),
            node: acc.node.map(|x| x / n),
        })
    }

    /// α of the current Laplace table, if one is cached.
    pub fn table_alpha(&self) -> Option<f64> {
        self.table.map(|t| t.alpha)
    }

    /// Rebuild the cache exactly as it was at `alpha`.
    pub fn restore_table(&mut self, alpha: Option<f64>) -> Result<()> {
        self.table = match alpha {
            Some(a) => Some(LaplaceTable::new(a, TABLE_TOLERANCE)?),
            None => None,
        };
        Ok(())
    }
}

fn check_state(y: &DynState) -> Result<()> {
    let (a5, a2) = (y[0], y[5]);
    if !(a5 > 0.0 && a2 > a5) {
        return Err(Error::domain("equations_of_motion", format!("need 0 < a_inner < a_outer, got {a5}, {a2}")));
    }
    for o in [0, 5] {
        if y[o + 1].powi(2) + y[o + 2].powi(2) >= 1.0 || y[o + 3].powi(2) + y[o + 4].powi(2) >= 1.0 {
            return Err(Error::domain("equations_of_motion", "eccentricity or sin(I/2) reached 1"));
        }
    }
    Ok(())
}

/// Convenience: derivative vector for a [`SystemState`].
pub fn equations_of_motion(model: &mut AveragedModel, sys: &SystemState) -> Result<DynState> {
    model.equations_of_motion(&sys.to_vector())
}
