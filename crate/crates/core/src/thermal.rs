//! Spherically symmetric conduction with radiogenic and tidal heating.
//!
//! The grid is node-centred: node i sits at r = iΔr and owns the shell
//! [r − Δr/2, r + Δr/2] clipped to [0, R]. Fluxes cross the shell faces, so
//! the scheme conserves energy exactly and is exact for a uniform-source
//! steady state. The outermost node is held at the surface temperature.

use serde::{Deserialize, Serialize};

use crate::constants::{MYR_S, YEAR_S};
use crate::model::BodyPhysical;
use crate::{Error, Result};

/// End-member properties of ice and silicate rock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaterialConstants {
    pub rho_ice: f64,
    pub rho_sil: f64,
    pub cp_ice: f64,
    pub cp_sil: f64,
    pub k_ice: f64,
    pub k_sil: f64,
    pub mu_ice: f64,
    pub mu_sil: f64,
}

impl Default for MaterialConstants {
    fn default() -> Self {
        Self {
            rho_ice: 917.0,
            rho_sil: 2500.0,
            cp_ice: 888.7,
            cp_sil: 920.0,
            k_ice: 5.4,
            k_sil: 4.2,
            mu_ice: 4.5e9,
            mu_sil: 65e9,
        }
    }
}

impl MaterialConstants {
    /// Silicate mass fraction of a two-phase body of bulk density `rho`.
    pub fn silicate_mass_fraction(&self, rho: f64) -> Result<f64> {
        if !(rho >= self.rho_ice && rho <= self.rho_sil) {
            return Err(Error::domain(
                "silicate_mass_fraction",
                format!("density {rho} outside [{}, {}]", self.rho_ice, self.rho_sil),
            ));
        }
        Ok((1.0 / self.rho_ice - 1.0 / rho) / (1.0 / self.rho_ice - 1.0 / self.rho_sil))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureProps {
    pub x_s: f64,
    pub f_s: f64,
    /// kg/m³
    pub rho: f64,
    /// J/kg/K
    pub cp: f64,
    /// W/m/K
    pub k_cond: f64,
    /// m²/s
    pub alpha_diff: f64,
}

/// C_p from mass fractions and k from volume fractions; `k_override`
/// replaces the mixing-rule conductivity.
pub fn mixture_properties(
    x_s: f64,
    f_s: f64,
    rho: f64,
    consts: &MaterialConstants,
    k_override: Option<f64>,
) -> Result<MixtureProps> {
    if !(0.0..=1.0).contains(&x_s) || !(0.0..=1.0).contains(&f_s) {
        return Err(Error::domain("mixture_properties", format!("fractions out of [0, 1]: x_s={x_s}, f_s={f_s}")));
    }
    if !(rho > 0.0) {
        return Err(Error::domain("mixture_properties", format!("rho must be > 0, got {rho}")));
    }
    let cp = x_s * consts.cp_sil + (1.0 - x_s) * consts.cp_ice;
    let k_cond = match k_override {
        Some(k) if k > 0.0 => k,
        Some(k) => return Err(Error::domain("mixture_properties", format!("conductivity must be > 0, got {k}"))),
        None => f_s * consts.k_sil + (1.0 - f_s) * consts.k_ice,
    };
    Ok(MixtureProps {
        x_s,
        f_s,
        rho,
        cp,
        k_cond,
        alpha_diff: k_cond / (rho * cp),
    })
}

impl MixtureProps {
    /// Miranda's homogeneous mixture with the tabulated conductivity.
    pub fn miranda() -> Self {
        mixture_properties(0.37, 0.45, 1200.0, &MaterialConstants::default(), Some(5.2))
            .expect("valid constants")
    }

    /// Two-phase mixture whose fractions follow from the bulk density.
    pub fn from_density(rho: f64, consts: &MaterialConstants) -> Result<Self> {
        let x_s = consts.silicate_mass_fraction(rho)?;
        mixture_properties(x_s, x_s * rho / consts.rho_sil, rho, consts, None)
    }

    /// R²/α, s.
    pub fn conduction_time(&self, radius_m: f64) -> f64 {
        radius_m * radius_m / self.alpha_diff
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Isotope {
    pub name: String,
    /// W per kg of parent isotope.
    pub heat_rate: f64,
    /// 1/s
    pub decay_lambda: f64,
    /// Isotopic abundance: present-day for long-lived, initial for short-lived.
    pub abundance: f64,
    /// kg of element per kg of silicate.
    pub element_conc: f64,
    pub is_short_lived: bool,
}

impl Isotope {
    fn new(name: &str, heat_rate: f64, half_life_yr: f64, abundance: f64, conc: f64, short: bool) -> Self {
        Self {
            name: name.to_string(),
            heat_rate,
            decay_lambda: std::f64::consts::LN_2 / (half_life_yr * YEAR_S),
            abundance,
            element_conc: conc,
            is_short_lived: short,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiogenicInventory {
    pub isotopes: Vec<Isotope>,
    /// Age of the system today, yr.
    pub t_now: f64,
}

impl Default for RadiogenicInventory {
    fn default() -> Self {
        Self::calibrated(7e-12, 2e-7)
    }
}

impl RadiogenicInventory {
    /// Decay data with mantle-like long-lived and chondritic short-lived
    /// element concentrations, before calibration.
    pub fn uncalibrated() -> Self {
        Self {
            isotopes: vec![
                Isotope::new("U238", 9.46e-5, 4.47e9, 0.99275, 20.3e-9, false),
                Isotope::new("U235", 5.69e-4, 7.04e8, 0.00720, 20.3e-9, false),
                Isotope::new("Th232", 2.64e-5, 1.41e10, 1.0, 79.5e-9, false),
                Isotope::new("K40", 2.92e-5, 1.28e9, 1.17e-4, 240e-6, false),
                Isotope::new("Al26", 4.55e-1, 7.17e5, 5.8e-5, 0.865e-2, true),
                Isotope::new("Fe60", 7.19e-2, 1.50e6, 7e-7, 18.2e-2, true),
                Isotope::new("Mn53", 6.38e-3, 3.74e6, 9e-6, 0.19e-2, true),
            ],
            t_now: 4.56e9,
        }
    }

    /// Rescale concentrations so that present-day long-lived heating is
    /// `long_today` and initial short-lived heating is `short_initial`, both
    /// in W/kg of silicate. Element ratios within each group are kept.
    pub fn calibrated(long_today: f64, short_initial: f64) -> Self {
        let mut inv = Self::uncalibrated();
        let long = inv.long_lived_power(inv.t_now);
        let short = inv.short_lived_power(0.0);
        for iso in &mut inv.isotopes {
            iso.element_conc *= if iso.is_short_lived { short_initial / short } else { long_today / long };
        }
        inv
    }

    fn isotope_power(&self, iso: &Isotope, t_yr: f64) -> f64 {
        let t_ref = if iso.is_short_lived { 0.0 } else { self.t_now };
        iso.heat_rate * iso.element_conc * iso.abundance * (-iso.decay_lambda * (t_yr - t_ref) * YEAR_S).exp()
    }

    pub fn long_lived_power(&self, t_yr: f64) -> f64 {
        self.isotopes.iter().filter(|i| !i.is_short_lived).map(|i| self.isotope_power(i, t_yr)).sum()
    }

    pub fn short_lived_power(&self, t_yr: f64) -> f64 {
        self.isotopes.iter().filter(|i| i.is_short_lived).map(|i| self.isotope_power(i, t_yr)).sum()
    }

    /// Heating per kg of silicate at `t_yr` after formation.
    pub fn radiogenic_power(&self, t_yr: f64, include_short_lived: bool) -> Result<f64> {
        if !(t_yr >= 0.0) {
            return Err(Error::domain("radiogenic_power", format!("t must be >= 0, got {t_yr}")));
        }
        let mut p = self.long_lived_power(t_yr);
        if include_short_lived {
            p += self.short_lived_power(t_yr);
        }
        Ok(p)
    }
}

/// Energy bookkeeping of one conduction step, J.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepBalance {
    pub stored: f64,
    pub generated: f64,
    pub surface_loss: f64,
}

impl StepBalance {
    pub fn residual(&self) -> f64 {
        self.stored - (self.generated - self.surface_loss)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalGrid {
    pub n_points: usize,
    /// m, node positions from 0 to R.
    pub radii: Vec<f64>,
    /// K
    pub temps: Vec<f64>,
    pub props: MixtureProps,
    /// K
    pub t_surf: f64,
}

impl ThermalGrid {
    /// Isothermal grid at the surface temperature.
    pub fn uniform(radius_m: f64, n_points: usize, props: MixtureProps, t_surf: f64) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::domain("ThermalGrid", format!("need at least 3 points, got {n_points}")));
        }
        if !(radius_m > 0.0 && t_surf > 0.0) {
            return Err(Error::domain("ThermalGrid", "radius and surface temperature must be positive"));
        }
        let dr = radius_m / (n_points - 1) as f64;
        let mut radii: Vec<f64> = (0..n_points).map(|i| i as f64 * dr).collect();
        radii[n_points - 1] = radius_m;
        Ok(Self {
            n_points,
            radii,
            temps: vec![t_surf; n_points],
            props,
            t_surf,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radii[self.n_points - 1]
    }

    fn dr(&self) -> f64 {
        self.radius() / (self.n_points - 1) as f64
    }

    /// Shell volumes owned by each node, m³.
    pub fn volumes(&self) -> Vec<f64> {
        let dr = self.dr();
        let r_max = self.radius();
        self.radii
            .iter()
            .map(|&r| {
                let lo = (r - 0.5 * dr).max(0.0);
                let hi = (r + 0.5 * dr).min(r_max);
                4.0 / 3.0 * std::f64::consts::PI * (hi.powi(3) - lo.powi(3))
            })
            .collect()
    }

    /// Conductance k·A/Δr of the face between node i and i + 1, W/K.
    fn conductance(&self, i: usize) -> f64 {
        let dr = self.dr();
        let rf = self.radii[i] + 0.5 * dr;
        self.props.k_cond * 4.0 * std::f64::consts::PI * rf * rf / dr
    }

    /// Advance one backward-Euler step of length `dt` (s) with volumetric
    /// sources `source` (W/m³, one per node).
    pub fn step(&mut self, dt: f64, source: &[f64]) -> Result<StepBalance> {
        let n = self.n_points;
        if !(dt > 0.0) {
            return Err(Error::domain("step_conduction", format!("dt must be > 0, got {dt}")));
        }
        if source.len() != n || source.iter().any(|s| !s.is_finite()) {
            return Err(Error::domain("step_conduction", "source must be finite with one value per node"));
        }
        let vol = self.volumes();
        let rc = self.props.rho * self.props.cp;
        let g: Vec<f64> = (0..n - 1).map(|i| self.conductance(i)).collect();

        // unknowns are nodes 0..n-2; node n-1 is fixed
        let m = n - 1;
        let mut lower = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut upper = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        for i in 0..m {
            let cap = rc * vol[i] / dt;
            let gl = if i > 0 { g[i - 1] } else { 0.0 };
            let gr = g[i];
            diag[i] = cap + gl + gr;
            if i > 0 {
                lower[i] = -gl;
            }
            rhs[i] = cap * self.temps[i] + source[i] * vol[i];
            if i + 1 < m {
                upper[i] = -gr;
            } else {
                rhs[i] += gr * self.t_surf;
            }
        }
        let new = solve_tridiagonal(&lower, &diag, &upper, &rhs)?;

        let stored: f64 = (0..m).map(|i| rc * vol[i] * (new[i] - self.temps[i])).sum();
        let generated: f64 = (0..m).map(|i| source[i] * vol[i] * dt).sum();
        let surface_loss = g[m - 1] * (new[m - 1] - self.t_surf) * dt;

        self.temps[..m].copy_from_slice(&new);
        self.temps[m] = self.t_surf;
        Ok(StepBalance {
            stored,
            generated,
            surface_loss,
        })
    }

    /// [`ThermalGrid::step`] with the same source everywhere.
    pub fn step_uniform(&mut self, dt: f64, h_vol: f64) -> Result<StepBalance> {
        let src = vec![h_vol; self.n_points];
        self.step(dt, &src)
    }

    /// Volume-weighted mean temperature, K.
    pub fn mean_temperature(&self) -> f64 {
        let vol = self.volumes();
        let total: f64 = vol.iter().sum();
        self.temps.iter().zip(&vol).map(|(t, v)| t * v).sum::<f64>() / total
    }

    pub fn center_temperature(&self) -> f64 {
        self.temps[0]
    }

    /// Heat content above the surface temperature, J.
    pub fn excess_heat(&self) -> f64 {
        let rc = self.props.rho * self.props.cp;
        self.volumes().iter().zip(&self.temps).map(|(v, t)| rc * v * (t - self.t_surf)).sum()
    }

    /// (r in km, T in K) rows for export.
    pub fn profile_rows(&self) -> Vec<(f64, f64)> {
        self.radii.iter().zip(&self.temps).map(|(r, t)| (r * 1e-3, *t)).collect()
    }
}

/// Advance a copy of `grid` by one step.
pub fn step_conduction(grid: &ThermalGrid, dt: f64, source: &[f64]) -> Result<ThermalGrid> {
    let mut g = grid.clone();
    g.step(dt, source)?;
    Ok(g)
}

/// Thomas algorithm. `lower[0]` and `upper[n-1]` are ignored.
fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut beta = diag[0];
    if beta == 0.0 {
        return Err(Error::Solver("zero pivot in tridiagonal solve".into()));
    }
    c[0] = upper[0] / beta;
    d[0] = rhs[0] / beta;
    for i in 1..n {
        beta = diag[i] - lower[i] * c[i - 1];
        if beta == 0.0 {
            return Err(Error::Solver("zero pivot in tridiagonal solve".into()));
        }
        c[i] = upper[i] / beta;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}

/// Settings for building the initial temperature profiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProfileSpec {
    /// yr
    pub duration: f64,
    pub n_points: usize,
    /// Step used while short-lived isotopes matter, yr.
    pub dt_early: f64,
    /// Length of the early phase, yr.
    pub early_span: f64,
    /// yr
    pub dt_late: f64,
}

impl Default for ProfileSpec {
    fn default() -> Self {
        Self {
            duration: 4.6e9,
            n_points: 200,
            dt_early: 1e4,
            early_span: 5e7,
            dt_late: 1e6,
        }
    }
}

/// Radiogenic-only conduction from an isothermal start. Returns the profile
/// after `spec.duration` years.
pub fn radiogenic_profile(
    body: &BodyPhysical,
    props: &MixtureProps,
    inventory: &RadiogenicInventory,
    t_surf: f64,
    spec: &ProfileSpec,
    include_short_lived: bool,
) -> Result<ThermalGrid> {
    let mut grid = ThermalGrid::uniform(body.radius_m(), spec.n_points, *props, t_surf)?;
    let mut t = 0.0;
    while t < spec.duration {
        let dt_yr = if t < spec.early_span { spec.dt_early } else { spec.dt_late }.min(spec.duration - t);
        let p = inventory.radiogenic_power(t + 0.5 * dt_yr, include_short_lived)?;
        grid.step_uniform(dt_yr * YEAR_S, props.rho * props.x_s * p)?;
        t += dt_yr;
    }
    Ok(grid)
}

/// Warm (with short-lived isotopes) and cold (without) profiles.
pub fn initial_profiles(
    body: &BodyPhysical,
    props: &MixtureProps,
    inventory: &RadiogenicInventory,
    t_surf: f64,
    spec: &ProfileSpec,
) -> Result<(ThermalGrid, ThermalGrid)> {
    let warm = radiogenic_profile(body, props, inventory, t_surf, spec, true)?;
    let cold = radiogenic_profile(body, props, inventory, t_surf, spec, false)?;
    Ok((warm, cold))
}

/// Equilibrium temperature of a body at the same heliocentric distance as a
/// reference body, scaled by Bond albedo.
pub fn equilibrium_temperature(t_ref: f64, albedo_ref: f64, albedo: f64) -> f64 {
    t_ref * ((1.0 - albedo) / (1.0 - albedo_ref)).powf(0.25)
}

/// Mean temperature rise over one Myr from a volumetric heating rate with no
/// losses, K.
pub fn adiabatic_rise_per_myr(h_vol: f64, props: &MixtureProps) -> f64 {
    h_vol * MYR_S / (props.rho * props.cp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mixture_values() {
        let c = MaterialConstants::default();
        let m = mixture_properties(0.37, 0.45, 1200.0, &c, None).unwrap();
        assert!((m.cp - 900.0).abs() < 1.0, "{}", m.cp);
        assert!((m.cp - 900.281).abs() < 1e-9);
        assert!((m.k_cond - 4.86).abs() < 1e-12);
        assert!((m.alpha_diff - m.k_cond / (m.rho * m.cp)).abs() < 1e-12 * m.alpha_diff);
        let ice = mixture_properties(0.0, 0.0, 917.0, &c, None).unwrap();
        assert_eq!((ice.cp, ice.k_cond), (888.7, 5.4));
        assert!(mixture_properties(1.2, 0.4, 1200.0, &c, None).is_err());
        assert_eq!(MixtureProps::miranda().k_cond, 5.2);
    }

    #[test]
    fn silicate_fraction_from_density() {
        let c = MaterialConstants::default();
        let x = c.silicate_mass_fraction(1200.0).unwrap();
        // mass balance: 1/ρ = x/ρ_s + (1−x)/ρ_i
        assert!((1.0 / (x / 2500.0 + (1.0 - x) / 917.0) - 1200.0).abs() < 1e-9);
        assert!((x - 0.37).abs() < 0.01);
        assert_eq!(c.silicate_mass_fraction(917.0).unwrap(), 0.0);
        assert!(c.silicate_mass_fraction(3000.0).is_err());
    }

    #[test]
    fn conduction_time_miranda() {
        let m = MixtureProps::miranda();
        let myr = m.conduction_time(235.8e3) / MYR_S;
        assert!((myr - 365.9).abs() < 0.5, "{myr}");
    }

    #[test]
    fn decay_constants_from_half_lives() {
        let inv = RadiogenicInventory::uncalibrated();
        let tabulated = [("U235", 3.12e-17), ("Th232", 1.56e-18), ("K40", 1.72e-17), ("Al26", 3.06e-14), ("Fe60", 1.46e-14), ("Mn53", 5.87e-15)];
        for (name, lam) in tabulated {
            let iso = inv.isotopes.iter().find(|i| i.name == name).unwrap();
            assert!((iso.decay_lambda / lam - 1.0).abs() < 0.01, "{name}: {}", iso.decay_lambda);
        }
        let u238 = inv.isotopes.iter().find(|i| i.name == "U238").unwrap();
        assert!((u238.decay_lambda - 4.916e-18).abs() < 0.01e-18);
    }

    #[test]
    fn calibration_anchors() {
        let inv = RadiogenicInventory::default();
        let today = inv.radiogenic_power(inv.t_now, false).unwrap();
        assert!((today / 7e-12 - 1.0).abs() < 1e-12);
        let start = inv.short_lived_power(0.0);
        assert!((start / 2e-7 - 1.0).abs() < 1e-12);
        assert!(inv.radiogenic_power(1e12, true).unwrap() < 1e-20);
        assert!(inv.radiogenic_power(-1.0, true).is_err());
        // uranium and thorium dominate today
        let u_th: f64 = inv
            .isotopes
            .iter()
            .filter(|i| i.name != "K40" && !i.is_short_lived)
            .map(|i| inv.isotope_power(i, inv.t_now))
            .sum();
        assert!(u_th / today > 0.5);
    }

    #[test]
    fn miranda_total_radiogenic_power() {
        let inv = RadiogenicInventory::default();
        let b = BodyPhysical::miranda();
        let sil = 0.37 * b.mass();
        let today = sil * inv.radiogenic_power(inv.t_now, false).unwrap();
        assert!(today > 1e8 && today < 2e8, "{today}");
        let early = sil * inv.short_lived_power(0.0);
        assert!((early / 5e12 - 1.0).abs() < 0.1, "{early}");
    }

    #[test]
    fn isothermal_grid_is_steady() {
        let mut g = ThermalGrid::uniform(235.8e3, 50, MixtureProps::miranda(), 84.0).unwrap();
        g.step_uniform(1e13, 0.0).unwrap();
        assert!(g.temps.iter().all(|&t| (t - 84.0).abs() < 1e-12));
    }

    #[test]
    fn uniform_source_steady_state() {
        let props = MixtureProps::miranda();
        let r = 235.8e3;
        let h = 1e-8;
        let mut g = ThermalGrid::uniform(r, 200, props, 84.0).unwrap();
        // implicit steps far longer than R²/α land on the steady state
        for _ in 0..20 {
            g.step_uniform(1e20, h).unwrap();
        }
        let mut max_err: f64 = 0.0;
        for (&ri, &t) in g.radii.iter().zip(&g.temps) {
            let exact = 84.0 + h * (r * r - ri * ri) / (6.0 * props.k_cond);
            max_err = max_err.max((t - exact).abs());
        }
        assert!(max_err < 0.1, "{max_err}");
        assert!((g.center_temperature() - 84.0 - 17.82).abs() < 0.01);
    }

    #[test]
    fn energy_balance_per_step() {
        let props = MixtureProps::miranda();
        let mut g = ThermalGrid::uniform(235.8e3, 200, props, 84.0).unwrap();
        let src: Vec<f64> = (0..200).map(|i| 1e-8 * (1.0 + (i as f64 * 0.1).sin())).collect();
        for dt_myr in [0.01, 1.0, 10.0, 100.0] {
            let b = g.step(dt_myr * MYR_S, &src).unwrap();
            assert!(b.residual().abs() < 1e-6 * b.generated, "{b:?}");
        }
    }

    #[test]
    fn refinement_changes_centre_little() {
        let props = MixtureProps::miranda();
        let run = |n| {
            let mut g = ThermalGrid::uniform(235.8e3, n, props, 84.0).unwrap();
            for _ in 0..200 {
                g.step_uniform(0.5 * MYR_S, 1e-8).unwrap();
            }
            g.center_temperature()
        };
        let (a, b) = (run(200), run(399));
        assert!((a - b).abs() / a < 0.005, "{a} {b}");
    }

    #[test]
    fn mean_temperature_of_linear_profile() {
        let props = MixtureProps::miranda();
        let r = 100e3;
        let n = 2001;
        let mut g = ThermalGrid::uniform(r, n, props, 50.0).unwrap();
        for i in 0..n {
            g.temps[i] = 100.0 - 50.0 * g.radii[i] / r;
        }
        // ∫(100 − 50 r/R) r² dr / ∫ r² dr = 100 − 50·3/4
        assert!((g.mean_temperature() - 62.5).abs() < 1e-3);
        g.temps.iter_mut().for_each(|t| *t = 77.0);
        assert!((g.mean_temperature() - 77.0).abs() < 1e-12);
    }

    #[test]
    fn warm_profile_above_cold() {
        let b = BodyPhysical::miranda();
        let props = MixtureProps::miranda();
        let inv = RadiogenicInventory::default();
        let spec = ProfileSpec { n_points: 100, ..Default::default() };
        let (warm, cold) = initial_profiles(&b, &props, &inv, 84.0, &spec).unwrap();
        for (w, c) in warm.temps.iter().zip(&cold.temps) {
            assert!(*c >= 84.0 - 1e-9);
            assert!(*w >= *c - 1e-9);
        }
        // the short-lived pulse has long since conducted away
        assert!((warm.center_temperature() - cold.center_temperature()).abs() < 1e-6);
        let young = ProfileSpec { duration: 2e8, ..spec };
        let (warm, cold) = initial_profiles(&b, &props, &inv, 84.0, &young).unwrap();
        assert!(warm.center_temperature() > cold.center_temperature() + 1.0);
    }

    #[test]
    fn equilibrium_temperature_scaling() {
        assert_eq!(equilibrium_temperature(84.0, 0.2, 0.2), 84.0);
        let t = equilibrium_temperature(84.0, 0.20, 0.10);
        assert!((t - 86.5).abs() < 0.1, "{t}");
    }

    #[test]
    fn step_rejects_bad_input() {
        let mut g = ThermalGrid::uniform(1e5, 10, MixtureProps::miranda(), 84.0).unwrap();
        assert!(g.step(0.0, &[0.0; 10]).is_err());
        assert!(g.step(1.0, &[0.0; 9]).is_err());
        assert!(g.step(1.0, &[f64::NAN; 10]).is_err());
        assert!(ThermalGrid::uniform(1e5, 2, MixtureProps::miranda(), 84.0).is_err());
    }

    proptest! {
        #[test]
        fn maximum_principle(
            t0 in proptest::collection::vec(60.0f64..200.0, 30),
            h in 0.0f64..1e-7,
            dt_myr in 0.001f64..50.0,
        ) {
            let mut g = ThermalGrid::uniform(235.8e3, 30, MixtureProps::miranda(), 84.0).unwrap();
            g.temps[..29].copy_from_slice(&t0[..29]);
            let floor = t0.iter().cloned().fold(84.0, f64::min);
            g.step_uniform(dt_myr * MYR_S, h).unwrap();
            prop_assert!(g.temps.iter().all(|&t| t >= floor - 1e-9));
            prop_assert_eq!(g.temps[29], 84.0);
        }
    }
}
