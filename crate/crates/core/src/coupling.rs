//! The orbital-thermal feedback loop.
//!
//! Each macro-step integrates the averaged dynamics with Kaula terms, feeds
//! the macro-step-mean tidal power of each satellite to its conduction grid
//! together with radiogenic heat, and recomputes (k₂/Q) of each satellite
//! from its new mean temperature.

use serde::{Deserialize, Serialize};

use crate::constants::{wrap_two_pi, DEG, TWO_PI, YEAR_S};
use crate::dynamics::abm::{AbmState, STEPS};
use crate::dynamics::{AveragedModel, DynState, TidalTerms, DEFAULT_STEP_YR};
use crate::model::{mean_motion, state_to_elements, BodyPhysical, OrbitalElements, PlanetModel, SystemState};
use crate::rheology::{tidal_response, RheologyModel, RheologyParams};
use crate::thermal::{
    equilibrium_temperature, radiogenic_profile, MaterialConstants, MixtureProps, ProfileSpec, RadiogenicInventory,
    ThermalGrid,
};
use crate::tides::{dissipation_rate, equilibrium_obliquity, node_rate, InertiaMoments};
use crate::{Error, Result};

/// Surface temperature of Miranda, K.
pub const MIRANDA_T_SURF: f64 = 84.0;
pub const MIRANDA_ALBEDO: f64 = 0.20;
pub const UMBRIEL_ALBEDO: f64 = 0.10;

/// Which resonant argument the run is placed at and monitored through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Resonance {
    /// θ_k, k = 1..6 (θ₆ is the e₅² resonance).
    Theta(u8),
    /// Exact commensurability Ψ̇ = 0.
    Commensurability,
}

impl Resonance {
    fn index(self) -> usize {
        match self {
            Resonance::Theta(k) => k as usize,
            Resonance::Commensurability => 6,
        }
    }
}

/// How the initial semi-major axes are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Placement {
    /// Use `a` from the initial elements as given.
    Elements,
    /// Put a₅ `offset_km` below the resonance centre, a₂ unchanged.
    Resonance { offset_km: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThermalStart {
    /// Isothermal at the surface temperature.
    Uniform,
    Warm,
    Cold,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub planet: PlanetModel,
    pub inner: BodyPhysical,
    pub outer: BodyPhysical,
    pub inner_elements: OrbitalElements,
    pub outer_elements: OrbitalElements,
    /// Overrides for the initial eccentricities and Miranda's inclination
    /// (degrees); `None` keeps the element values.
    pub e_inner: Option<f64>,
    pub e_outer: Option<f64>,
    pub inc_inner_deg: Option<f64>,
    pub rheology_inner: RheologyParams,
    pub rheology_outer: RheologyParams,
    pub placement: Placement,
    pub resonance: Resonance,
    pub thermal_start: ThermalStart,
    pub profile: ProfileSpec,
    pub k2q_planet: f64,
    /// Feed satellite (k₂/Q) back into the orbits and heat the interiors.
    pub satellite_tides: bool,
    pub radiogenic: bool,
    /// yr
    pub duration: f64,
    /// yr
    pub dyn_step: f64,
    /// yr
    pub macro_step: f64,
    /// Record every this many macro-steps.
    pub output_every: usize,
    /// Trailing window for the libration test, yr.
    pub libration_window: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self::nominal()
    }
}

impl ScenarioConfig {
    /// Miranda placed just inside the e₅² resonance with small
    /// eccentricities, warm interiors and Maxwell rheology.
    pub fn nominal() -> Self {
        Self {
            planet: PlanetModel::uranus(),
            inner: BodyPhysical::miranda(),
            outer: BodyPhysical::umbriel(),
            inner_elements: OrbitalElements::miranda_j2000(),
            outer_elements: OrbitalElements::umbriel_j2000(),
            e_inner: Some(5e-4),
            e_outer: Some(5e-4),
            inc_inner_deg: Some(4.5),
            rheology_inner: RheologyParams::default(),
            rheology_outer: RheologyParams::default(),
            placement: Placement::Resonance { offset_km: 1.0 },
            resonance: Resonance::Theta(6),
            thermal_start: ThermalStart::Warm,
            profile: ProfileSpec::default(),
            k2q_planet: 5.2e-5,
            satellite_tides: true,
            radiogenic: true,
            duration: 6.0e6,
            dyn_step: DEFAULT_STEP_YR,
            macro_step: 100.0,
            output_every: 10,
            libration_window: 5_000.0,
        }
    }

    /// e₅ = 0.5 and T_m = 200 K with the given low-Q rheology.
    pub fn extremal(model: RheologyModel) -> Self {
        let rheology = RheologyParams {
            model,
            t_melt: 200.0,
            burgers_eta_ratio: 50.0,
            andrade_alpha: 0.33,
            ..RheologyParams::default()
        };
        Self {
            e_inner: Some(0.5),
            rheology_inner: rheology,
            rheology_outer: rheology,
            duration: 1.0e6,
            ..Self::nominal()
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "nominal" => Ok(Self::nominal()),
            "extremal-burgers" => Ok(Self::extremal(RheologyModel::Burgers)),
            "extremal-andrade" => Ok(Self::extremal(RheologyModel::Andrade)),
            other => Err(Error::Config(format!(
                "unknown preset `{other}` (expected nominal, extremal-burgers or extremal-andrade)"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.planet.validate()?;
        self.inner.validate()?;
        self.outer.validate()?;
        self.inner_elements.validate()?;
        self.outer_elements.validate()?;
        self.rheology_inner.validate()?;
        self.rheology_outer.validate()?;
        let bad = |what: &str| Err(Error::Config(what.to_string()));
        if !(self.duration >= 0.0 && self.duration.is_finite()) {
            return bad("duration must be >= 0");
        }
        if !(self.dyn_step > 0.0) {
            return bad("dyn_step must be > 0");
        }
        if !(self.macro_step >= self.dyn_step) {
            return bad("macro_step must be >= dyn_step");
        }
        if self.output_every == 0 {
            return bad("output_every must be >= 1");
        }
        if !(self.k2q_planet >= 0.0) {
            return bad("k2q_planet must be >= 0");
        }
        for e in [self.e_inner, self.e_outer].into_iter().flatten() {
            if !(0.0..1.0).contains(&e) {
                return bad("eccentricities must be in [0, 1)");
            }
        }
        if let Resonance::Theta(k) = self.resonance {
            if !(1..=6).contains(&k) {
                return bad("resonance theta index must be 1..6");
            }
        }
        if self.profile.n_points < 3 {
            return bad("profile.n_points must be >= 3");
        }
        Ok(())
    }

    /// Surface temperatures (inner, outer), K.
    pub fn surface_temperatures(&self) -> [f64; 2] {
        [MIRANDA_T_SURF, equilibrium_temperature(MIRANDA_T_SURF, MIRANDA_ALBEDO, UMBRIEL_ALBEDO)]
    }

    /// Mixture properties (inner, outer).
    pub fn mixtures(&self) -> Result<[MixtureProps; 2]> {
        Ok([MixtureProps::miranda(), MixtureProps::from_density(self.outer.density, &MaterialConstants::default())?])
    }

    fn initial_elements(&self) -> (OrbitalElements, OrbitalElements) {
        let mut i = self.inner_elements;
        let mut o = self.outer_elements;
        if let Some(e) = self.e_inner {
            i.e = e;
        }
        if let Some(e) = self.e_outer {
            o.e = e;
        }
        if let Some(inc) = self.inc_inner_deg {
            i.inc = inc * DEG;
        }
        (i, o)
    }
}

/// a₅ at which the chosen resonant argument is stationary (after averaging
/// over Ψ), holding everything else in `y` fixed.
pub fn resonance_center(model: &mut AveragedModel, y: &DynState, resonance: Resonance) -> Result<f64> {
    let rate = |m: &mut AveragedModel, a5: f64| -> Result<f64> {
        let mut z = *y;
        z[0] = a5;
        m.reset_cache();
        let r = m.secular_rates(&z)?;
        Ok(match resonance {
            Resonance::Commensurability => -r.psi,
            Resonance::Theta(_) => r.theta_rate(resonance.index()),
        })
    };
    // Keplerian 3:1 as the first guess
    let mut a0 = y[5] * (model.mu(0) / model.mu(1) / 9.0).powf(1.0 / 3.0);
    let mut f0 = rate(model, a0)?;
    let mut a1 = a0 + 1.0;
    let mut f1 = rate(model, a1)?;
    for _ in 0..50 {
        if f1 == f0 {
            break;
        }
        let a2 = a1 - f1 * (a1 - a0) / (f1 - f0);
        (a0, f0) = (a1, f1);
        a1 = a2;
        f1 = rate(model, a1)?;
        if (a1 - a0).abs() < 1e-9 {
            model.reset_cache();
            return Ok(a1);
        }
    }
    Err(Error::Solver("resonance centre search did not converge".into()))
}

/// Initial averaged state: elements with the configured overrides and, for
/// [`Placement::Resonance`], a₅ moved to `offset_km` below the centre.
pub fn place_at_resonance(cfg: &ScenarioConfig) -> Result<SystemState> {
    let (i, o) = cfg.initial_elements();
    let mut sys = SystemState::from_elements(&i, &o, 0.0);
    if let Placement::Resonance { offset_km } = cfg.placement {
        let mut model = AveragedModel::new(&cfg.planet, &cfg.inner, &cfg.outer);
        let y = sys.to_vector();
        let centre = resonance_center(&mut model, &y, cfg.resonance)?;
        sys.sat_inner.a = centre - offset_km;
    }
    Ok(sys)
}

/// Per-satellite columns of a record row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SatelliteRow {
    /// km
    pub a: f64,
    pub e: f64,
    /// deg
    pub inc: f64,
    /// K
    pub t_mean: f64,
    pub q: f64,
    pub k2q: f64,
    /// Macro-step-mean tidal power, W.
    pub power: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecordRow {
    /// yr
    pub t: f64,
    /// Monitored resonant argument θ, rad in [0, 2π).
    pub theta: f64,
    pub librating: bool,
    pub sats: [SatelliteRow; 2],
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SimulationRecord {
    pub rows: Vec<RecordRow>,
}

/// Headline numbers of a finished run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub final_e_inner: f64,
    pub max_e_inner: f64,
    pub delta_t_mean_inner: f64,
    pub min_q_inner: f64,
    /// First and last recorded times with the argument librating.
    pub libration_start: Option<f64>,
    pub libration_end: Option<f64>,
}

impl SimulationRecord {
    pub fn summary(&self) -> Option<RunSummary> {
        let first = self.rows.first()?;
        let last = self.rows.last()?;
        let lib: Vec<f64> = self.rows.iter().filter(|r| r.librating).map(|r| r.t).collect();
        Some(RunSummary {
            final_e_inner: last.sats[0].e,
            max_e_inner: self.rows.iter().map(|r| r.sats[0].e).fold(0.0, f64::max),
            delta_t_mean_inner: last.sats[0].t_mean - first.sats[0].t_mean,
            min_q_inner: self.rows.iter().map(|r| r.sats[0].q).fold(f64::INFINITY, f64::min),
            libration_start: lib.first().copied(),
            libration_end: lib.last().copied(),
        })
    }
}

/// Unwrapped resonant argument with the extent it covered in recent
/// macro-steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LibrationTracker {
    /// Unwrapped 2θ, rad.
    pub phi: f64,
    /// (min, max) of `phi` per macro-step, oldest first.
    pub window: Vec<(f64, f64)>,
    pub capacity: usize,
}

impl LibrationTracker {
    fn new(phi: f64, capacity: usize) -> Self {
        Self { phi, window: Vec::new(), capacity: capacity.max(1) }
    }

    fn advance(&mut self, doubled: f64, span: &mut (f64, f64)) {
        let step = crate::constants::wrap_pi(doubled - self.phi);
        self.phi += step;
        span.0 = span.0.min(self.phi);
        span.1 = span.1.max(self.phi);
    }

    fn push(&mut self, span: (f64, f64)) {
        if self.window.len() == self.capacity {
            self.window.remove(0);
        }
        self.window.push(span);
    }

    /// Librating if the window is full and 2θ stayed within one turn.
    pub fn librating(&self) -> bool {
        if self.window.len() < self.capacity {
            return false;
        }
        let lo = self.window.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
        let hi = self.window.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
        hi - lo < TWO_PI
    }
}

/// 2θ_k from the averaged state.
fn doubled_angle(y: &DynState, k: usize) -> f64 {
    let peri = |o: usize| y[o + 2].atan2(y[o + 1]);
    let node = |o: usize| y[o + 4].atan2(y[o + 3]);
    let combo = match k {
        1 => 2.0 * node(0),
        2 => node(0) + node(5),
        3 => 2.0 * node(5),
        4 => 2.0 * peri(5),
        5 => peri(0) + peri(5),
        _ => 2.0 * peri(0),
    };
    combo - y[10]
}

/// Thermal and rheological state of one satellite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SatelliteThermal {
    pub grid: ThermalGrid,
    pub q: f64,
    pub k2q: f64,
    pub power: f64,
}

/// Saved state of a coupled run. Floats round-trip exactly through JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: String,
    pub config_digest: String,
    pub t: f64,
    pub dt: f64,
    pub y: Vec<f64>,
    pub hist: Vec<Vec<f64>>,
    pub table_alpha: Option<f64>,
    pub sats: Vec<SatelliteThermal>,
    pub tracker: LibrationTracker,
    pub macro_steps: u64,
    pub record: SimulationRecord,
}

pub const CHECKPOINT_VERSION: &str = "orbitherm-checkpoint-1";

/// A coupled run that can be advanced macro-step by macro-step.
#[derive(Debug, Clone)]
pub struct CoupledRun {
    cfg: ScenarioConfig,
    model: AveragedModel,
    abm: AbmState<11>,
    sats: [SatelliteThermal; 2],
    tracker: LibrationTracker,
    inventory: RadiogenicInventory,
    macro_steps: u64,
    record: SimulationRecord,
    /// Formation-relative age at t = 0, yr.
    age0: f64,
}

impl CoupledRun {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let sys = place_at_resonance(cfg)?;
        let y0 = sys.to_vector();
        let inventory = RadiogenicInventory::default();
        let mixtures = cfg.mixtures()?;
        let t_surf = cfg.surface_temperatures();
        let bodies = [cfg.inner, cfg.outer];
        let mut grids = Vec::with_capacity(2);
        for i in 0..2 {
            let grid = match cfg.thermal_start {
                ThermalStart::Uniform => {
                    ThermalGrid::uniform(bodies[i].radius_m(), cfg.profile.n_points, mixtures[i], t_surf[i])?
                }
                ThermalStart::Warm | ThermalStart::Cold => radiogenic_profile(
                    &bodies[i],
                    &mixtures[i],
                    &inventory,
                    t_surf[i],
                    &cfg.profile,
                    cfg.thermal_start == ThermalStart::Warm,
                )?,
            };
            grids.push(grid);
        }
        let mut sats: Vec<SatelliteThermal> = grids
            .into_iter()
            .map(|grid| SatelliteThermal { grid, q: f64::INFINITY, k2q: 0.0, power: 0.0 })
            .collect();
        for (i, s) in sats.iter_mut().enumerate() {
            let (q, k2q) = satellite_dissipation(cfg, i, s.grid.mean_temperature(), y0[5 * i])?;
            s.q = q;
            s.k2q = k2q;
        }
        let sats: [SatelliteThermal; 2] = sats.try_into().unwrap();
        let mut model = AveragedModel::new(&cfg.planet, &cfg.inner, &cfg.outer);
        model.set_tides(Some(tidal_terms(cfg, &sats)), &y0)?;
        let n = crate::dynamics::abm::step_count(cfg.macro_step, cfg.dyn_step)?;
        let dt = cfg.macro_step / n as f64;
        // history is filled by the startup inside the first macro-step
        let abm = AbmState { t: 0.0, dt, y: y0, hist: [[0.0; 11]; STEPS] };
        let capacity = (cfg.libration_window / cfg.macro_step).round().max(1.0) as usize;
        let k = cfg.resonance.index();
        let mut run = Self {
            cfg: cfg.clone(),
            model,
            abm,
            sats,
            tracker: LibrationTracker::new(doubled_angle(&y0, k), capacity),
            inventory,
            macro_steps: 0,
            record: SimulationRecord::default(),
            age0: cfg.profile.duration,
        };
        if cfg.duration > 0.0 {
            run.push_row();
        }
        Ok(run)
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    pub fn time(&self) -> f64 {
        self.macro_steps as f64 * self.cfg.macro_step
    }

    pub fn state(&self) -> &DynState {
        &self.abm.y
    }

    pub fn satellites(&self) -> &[SatelliteThermal; 2] {
        &self.sats
    }

    pub fn record(&self) -> &SimulationRecord {
        &self.record
    }

    pub fn into_record(self) -> SimulationRecord {
        self.record
    }

    pub fn finished(&self) -> bool {
        self.time() >= self.cfg.duration - 1e-9 * self.cfg.macro_step
    }

    fn push_row(&mut self) {
        let y = &self.abm.y;
        let sys = SystemState::from_elements(&OrbitalElements::miranda_j2000(), &OrbitalElements::umbriel_j2000(), 0.0)
            .with_vector(y, self.time());
        let els = [state_to_elements(&sys.sat_inner), state_to_elements(&sys.sat_outer)];
        let k = self.cfg.resonance.index();
        let row = RecordRow {
            t: self.time(),
            theta: wrap_two_pi(0.5 * wrap_two_pi(doubled_angle(y, k))),
            librating: self.tracker.librating(),
            sats: std::array::from_fn(|i| SatelliteRow {
                a: els[i].a,
                e: els[i].e,
                inc: els[i].inc / DEG,
                t_mean: self.sats[i].grid.mean_temperature(),
                q: self.sats[i].q,
                k2q: self.sats[i].k2q,
                power: self.sats[i].power,
            }),
        };
        self.record.rows.push(row);
    }

    /// Advance one macro-step. On error the run is left unchanged.
    pub fn step_macro(&mut self) -> Result<()> {
        let mut next = self.clone();
        next.step_macro_inner()?;
        *self = next;
        Ok(())
    }

    fn step_macro_inner(&mut self) -> Result<()> {
        let cfg = &self.cfg;
        let k = cfg.resonance.index();
        let n = crate::dynamics::abm::step_count(cfg.macro_step, cfg.dyn_step)?;
        let y_start = self.abm.y;
        self.model.set_tides(Some(tidal_terms(cfg, &self.sats)), &y_start)?;

        // mean e², a and sin²I over the macro-step, start excluded
        let mut sums = [[0.0f64; 3]; 2];
        let mut span = (self.tracker.phi, self.tracker.phi);
        let mut accumulate = |y: &DynState, tracker: &mut LibrationTracker, span: &mut (f64, f64)| {
            for (i, o) in [0usize, 5].into_iter().enumerate() {
                sums[i][0] += y[o + 1] * y[o + 1] + y[o + 2] * y[o + 2];
                sums[i][1] += y[o];
                let g2 = y[o + 3] * y[o + 3] + y[o + 4] * y[o + 4];
                sums[i][2] += 4.0 * g2 * (1.0 - g2);
            }
            tracker.advance(doubled_angle(y, k), span);
        };

        let model = &mut self.model;
        let mut rhs = |_t: f64, y: &DynState| model.equations_of_motion(y);
        let t0 = self.abm.t;
        let mut taken = 0usize;
        if self.macro_steps == 0 {
            let (st, states) = AbmState::start(&mut rhs, t0, y_start, self.abm.dt)?;
            for y in states.iter().take(n) {
                accumulate(y, &mut self.tracker, &mut span);
            }
            taken = (STEPS - 1).min(n);
            self.abm = st;
            if n < STEPS - 1 {
                return Err(Error::Config("macro_step must span at least 9 dynamics steps".into()));
            }
        }
        for _ in taken..n {
            self.abm.step(&mut rhs)?;
            accumulate(&self.abm.y, &mut self.tracker, &mut span);
        }
        self.tracker.push(span);
        self.macro_steps += 1;

        // thermal update with macro-step means
        let cfg = &self.cfg;
        let dt_s = cfg.macro_step * YEAR_S;
        let t_mid = self.age0 + self.time() - 0.5 * cfg.macro_step;
        let bodies = [cfg.inner, cfg.outer];
        for i in 0..2 {
            let e2 = sums[i][0] / n as f64;
            let a = sums[i][1] / n as f64;
            let sin2 = (sums[i][2] / n as f64).clamp(0.0, 1.0);
            let power = if cfg.satellite_tides {
                let nm = mean_motion(a, &cfg.planet)?;
                let inc = sin2.sqrt().asin();
                let eps = equilibrium_obliquity(
                    inc,
                    nm,
                    node_rate(a, inc, &cfg.planet)?,
                    &InertiaMoments::of_body(&bodies[i])?,
                )
                .unwrap_or(inc);
                dissipation_rate(self.sats[i].k2q, cfg.planet.gm, nm, bodies[i].mean_radius, a, e2.sqrt(), eps)
            } else {
                0.0
            };
            let sat = &mut self.sats[i];
            let props = sat.grid.props;
            let radiogenic = if cfg.radiogenic {
                props.rho * props.x_s * self.inventory.radiogenic_power(t_mid, true)?
            } else {
                0.0
            };
            let volume: f64 = sat.grid.volumes().iter().sum();
            let h = radiogenic + power / volume;
            sat.grid.step_uniform(dt_s, h)?;
            sat.power = power;
        }
        for i in 0..2 {
            let a = self.abm.y[5 * i];
            let (q, k2q) = satellite_dissipation(&self.cfg, i, self.sats[i].grid.mean_temperature(), a)?;
            self.sats[i].q = q;
            self.sats[i].k2q = k2q;
        }
        if self.macro_steps.is_multiple_of(self.cfg.output_every as u64) || self.finished() {
            self.push_row();
        }
        Ok(())
    }

    /// Run to the configured duration.
    pub fn run(&mut self) -> Result<()> {
        while !self.finished() {
            self.step_macro()?;
        }
        Ok(())
    }

    pub fn checkpoint(&self, config_digest: &str) -> Checkpoint {
        Checkpoint {
            version: CHECKPOINT_VERSION.to_string(),
            config_digest: config_digest.to_string(),
            t: self.abm.t,
            dt: self.abm.dt,
            y: self.abm.y.to_vec(),
            hist: self.abm.hist.iter().map(|h| h.to_vec()).collect(),
            table_alpha: self.model.table_alpha(),
            sats: self.sats.to_vec(),
            tracker: self.tracker.clone(),
            macro_steps: self.macro_steps,
            record: self.record.clone(),
        }
    }

    pub fn from_checkpoint(cfg: &ScenarioConfig, ck: &Checkpoint, config_digest: &str) -> Result<Self> {
        if ck.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!(
                "version `{}` does not match `{CHECKPOINT_VERSION}`",
                ck.version
            )));
        }
        if ck.config_digest != config_digest {
            return Err(Error::Checkpoint("checkpoint was written for a different configuration".into()));
        }
        cfg.validate()?;
        let y: DynState = ck
            .y
            .as_slice()
            .try_into()
            .map_err(|_| Error::Checkpoint(format!("state has {} components, expected 11", ck.y.len())))?;
        if ck.hist.len() != STEPS || ck.hist.iter().any(|h| h.len() != 11) || ck.sats.len() != 2 {
            return Err(Error::Checkpoint("derivative history or satellite list has the wrong shape".into()));
        }
        let hist: [[f64; 11]; STEPS] = std::array::from_fn(|j| ck.hist[j].as_slice().try_into().unwrap());
        let mut model = AveragedModel::new(&cfg.planet, &cfg.inner, &cfg.outer);
        model.restore_table(ck.table_alpha)?;
        let sats: [SatelliteThermal; 2] = [ck.sats[0].clone(), ck.sats[1].clone()];
        model.set_tides(Some(tidal_terms(cfg, &sats)), &y)?;
        Ok(Self {
            cfg: cfg.clone(),
            model,
            abm: AbmState { t: ck.t, dt: ck.dt, y, hist },
            sats,
            tracker: ck.tracker.clone(),
            inventory: RadiogenicInventory::default(),
            macro_steps: ck.macro_steps,
            record: ck.record.clone(),
            age0: cfg.profile.duration,
        })
    }
}

fn tidal_terms(cfg: &ScenarioConfig, sats: &[SatelliteThermal; 2]) -> TidalTerms {
    TidalTerms {
        k2q_planet: cfg.k2q_planet,
        k2q_sat: if cfg.satellite_tides { [sats[0].k2q, sats[1].k2q] } else { [0.0; 2] },
    }
}

/// (Q, k₂/Q) of satellite `i` at mean temperature `t_mean`, forced at its
/// synchronous frequency.
fn satellite_dissipation(cfg: &ScenarioConfig, i: usize, t_mean: f64, a: f64) -> Result<(f64, f64)> {
    let (body, params) = if i == 0 { (&cfg.inner, &cfg.rheology_inner) } else { (&cfg.outer, &cfg.rheology_outer) };
    let omega = mean_motion(a, &cfg.planet)?;
    let r = tidal_response(t_mean, omega, body, params)?;
    Ok((r.q_factor, r.k2_over_q))
}

/// Run a scenario to completion.
pub fn run_coupled(cfg: &ScenarioConfig) -> Result<SimulationRecord> {
    let mut run = CoupledRun::new(cfg)?;
    run.run()?;
    Ok(run.into_record())
}
