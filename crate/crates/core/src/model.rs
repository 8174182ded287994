//! Body records, orbital elements and the nonsingular (Lagrangian) variables.

use serde::{Deserialize, Serialize};

use crate::constants::{gm_per_year, wrap_two_pi, DEG, G_SI, KM, YEAR_S};
use crate::{Error, Result};

/// Below this eccentricity (or sin(I/2)) the pericentre (node) is undefined.
pub const ANGLE_UNDEFINED_BELOW: f64 = 1.0e-14;

/// Gravity field and tidal parameters of the primary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanetModel {
    /// km³/s²
    pub gm: f64,
    pub j2: f64,
    pub j4: f64,
    /// Reference radius of the zonal harmonics, km.
    pub radius_ref: f64,
    pub k2_over_q: f64,
}

impl PlanetModel {
    /// Uranus, with J₂ and J₄ normalised to a 26 200 km reference radius.
    pub fn uranus() -> Self {
        Self {
            gm: 5_793_964.0,
            j2: 3_341.29e-6,
            j4: -30.44e-6,
            radius_ref: 26_200.0,
            k2_over_q: 5.2e-5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gm > 0.0) {
            return Err(Error::domain("planet", format!("gm must be > 0, got {}", self.gm)));
        }
        if !(self.radius_ref > 0.0) {
            return Err(Error::domain(
                "planet",
                format!("radius_ref must be > 0, got {}", self.radius_ref),
            ));
        }
        if !(self.k2_over_q >= 0.0) {
            return Err(Error::domain(
                "planet",
                format!("k2_over_q must be >= 0, got {}", self.k2_over_q),
            ));
        }
        Ok(())
    }

    /// GM in km³/yr².
    pub fn gm_yr(&self) -> f64 {
        gm_per_year(self.gm)
    }

    /// Mass in kg.
    pub fn mass(&self) -> f64 {
        self.gm * KM.powi(3) / G_SI
    }
}

/// Physical record of a satellite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyPhysical {
    /// km³/s²
    pub gm: f64,
    /// km
    pub mean_radius: f64,
    /// Triaxial radii (a ≥ b ≥ c), km.
    pub triaxial_radii: [f64; 3],
    /// kg/m³
    pub density: f64,
}

impl BodyPhysical {
    /// Miranda, bulk density 1200 kg/m³.
    pub fn miranda() -> Self {
        Self {
            gm: 4.4,
            mean_radius: 235.8,
            triaxial_radii: [240.4, 234.2, 232.9],
            density: 1200.0,
        }
    }

    /// Umbriel. No triaxial shape is available, so the body is a sphere; the
    /// density follows from GM and the mean radius.
    pub fn umbriel() -> Self {
        let gm = 81.5;
        let r = 584.7;
        let mass = gm * KM.powi(3) / G_SI;
        let volume = 4.0 / 3.0 * std::f64::consts::PI * (r * KM).powi(3);
        Self {
            gm,
            mean_radius: r,
            triaxial_radii: [r, r, r],
            density: mass / volume,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let [a, b, c] = self.triaxial_radii;
        if !(a >= b && b >= c && c > 0.0) {
            return Err(Error::domain(
                "body",
                format!("triaxial radii must satisfy a >= b >= c > 0, got {a}, {b}, {c}"),
            ));
        }
        if !(self.gm > 0.0 && self.mean_radius > 0.0 && self.density > 0.0) {
            return Err(Error::domain("body", "gm, mean_radius and density must be positive"));
        }
        Ok(())
    }

    /// Mass in kg, derived from GM.
    pub fn mass(&self) -> f64 {
        self.gm * KM.powi(3) / G_SI
    }

    /// Mean radius in m.
    pub fn radius_m(&self) -> f64 {
        self.mean_radius * KM
    }

    /// Surface gravity of the homogeneous sphere, m/s².
    pub fn surface_gravity(&self) -> f64 {
        self.gm * KM.powi(3) / self.radius_m().powi(2)
    }

    /// Volume of the mean sphere, m³.
    pub fn volume(&self) -> f64 {
        4.0 / 3.0 * std::f64::consts::PI * self.radius_m().powi(3)
    }

    pub fn gm_yr(&self) -> f64 {
        gm_per_year(self.gm)
    }
}

/// Classical elements in the planet's equatorial frame. Angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitalElements {
    /// km
    pub a: f64,
    pub e: f64,
    pub inc: f64,
    /// Longitude of pericentre ϖ.
    pub peri: f64,
    /// Longitude of ascending node Ω.
    pub node: f64,
    /// Mean longitude λ.
    pub mean_longitude: f64,
}

impl OrbitalElements {
    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0) {
            return Err(Error::domain("elements", format!("a must be > 0, got {}", self.a)));
        }
        if !(0.0..1.0).contains(&self.e) {
            return Err(Error::domain("elements", format!("e must be in [0, 1), got {}", self.e)));
        }
        if !(0.0..std::f64::consts::PI).contains(&self.inc) {
            return Err(Error::domain(
                "elements",
                format!("inc must be in [0, pi), got {}", self.inc),
            ));
        }
        Ok(())
    }

    /// Build from the degree-valued (a, e, ϖ, M, I, Ω) layout of a mean
    /// element table.
    pub fn from_table_deg(a: f64, e: f64, peri: f64, mean_anomaly: f64, inc: f64, node: f64) -> Self {
        Self {
            a,
            e,
            inc: inc * DEG,
            peri: wrap_two_pi(peri * DEG),
            node: wrap_two_pi(node * DEG),
            mean_longitude: wrap_two_pi((mean_anomaly + peri) * DEG),
        }
    }

    /// Miranda mean elements at J2000.
    pub fn miranda_j2000() -> Self {
        Self::from_table_deg(129_900.0, 0.0013, 68.312, 311.330, 4.338, 326.438)
    }

    /// Umbriel mean elements at J2000.
    pub fn umbriel_j2000() -> Self {
        Self::from_table_deg(266_000.0, 0.0039, 84.709, 12.469, 0.128, 33.485)
    }

    pub fn mean_anomaly(&self) -> f64 {
        wrap_two_pi(self.mean_longitude - self.peri)
    }
}

/// Nonsingular state of one satellite: k + ih = e·exp(iϖ), q + ip = γ·exp(iΩ)
/// with γ = sin(I/2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SatelliteDynState {
    pub a: f64,
    pub k: f64,
    pub h: f64,
    pub q: f64,
    pub p: f64,
    pub mean_longitude: f64,
}

impl SatelliteDynState {
    pub fn ecc(&self) -> f64 {
        self.k.hypot(self.h)
    }

    pub fn gamma(&self) -> f64 {
        self.q.hypot(self.p)
    }

    /// φ = √(1 − k² − h²).
    pub fn phi(&self) -> f64 {
        (1.0 - self.k * self.k - self.h * self.h).sqrt()
    }

    pub fn inc(&self) -> f64 {
        2.0 * self.gamma().min(1.0).asin()
    }

    pub fn peri_defined(&self) -> bool {
        self.ecc() >= ANGLE_UNDEFINED_BELOW
    }

    pub fn node_defined(&self) -> bool {
        self.gamma() >= ANGLE_UNDEFINED_BELOW
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0) {
            return Err(Error::domain("state", format!("a must be > 0, got {}", self.a)));
        }
        if !(self.k * self.k + self.h * self.h < 1.0) {
            return Err(Error::domain("state", "k² + h² must be < 1"));
        }
        if !(self.q * self.q + self.p * self.p < 1.0) {
            return Err(Error::domain("state", "q² + p² must be < 1"));
        }
        Ok(())
    }
}

/// Convert classical elements to nonsingular variables.
pub fn elements_to_state(el: &OrbitalElements) -> SatelliteDynState {
    let gamma = (0.5 * el.inc).sin();
    SatelliteDynState {
        a: el.a,
        k: el.e * el.peri.cos(),
        h: el.e * el.peri.sin(),
        q: gamma * el.node.cos(),
        p: gamma * el.node.sin(),
        mean_longitude: el.mean_longitude,
    }
}

/// Convert nonsingular variables back to classical elements. An undefined
/// pericentre or node is returned as 0; see [`SatelliteDynState::peri_defined`].
pub fn state_to_elements(st: &SatelliteDynState) -> OrbitalElements {
    let e = st.ecc();
    let gamma = st.gamma();
    let peri = if e >= ANGLE_UNDEFINED_BELOW {
        wrap_two_pi(st.h.atan2(st.k))
    } else {
        0.0
    };
    let node = if gamma >= ANGLE_UNDEFINED_BELOW {
        wrap_two_pi(st.p.atan2(st.q))
    } else {
        0.0
    };
    OrbitalElements {
        a: st.a,
        e,
        inc: 2.0 * gamma.min(1.0).asin(),
        peri,
        node,
        mean_longitude: wrap_two_pi(st.mean_longitude),
    }
}

/// Keplerian mean motion √(GM/a³) in rad/s, with `a` in km.
pub fn mean_motion(a: f64, planet: &PlanetModel) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain("mean_motion", format!("a must be > 0, got {a}")));
    }
    Ok((planet.gm / (a * a * a)).sqrt())
}

/// Keplerian mean motion in rad/yr for `gm` in km³/yr².
#[inline]
pub fn mean_motion_yr(a: f64, gm_yr: f64) -> f64 {
    (gm_yr / (a * a * a)).sqrt()
}

/// The six second-order resonant arguments θ₁..θ₆ of the 3:1 commensurability,
/// each defined by 2θ = λ₅ − 3λ₂ + (two of ϖ, Ω), in [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonantAngles(pub [f64; 6]);

impl ResonantAngles {
    pub fn theta(&self, k: usize) -> f64 {
        self.0[k - 1]
    }
}

/// Resonant arguments for inner (Miranda, "5") and outer (Umbriel, "2").
pub fn resonant_angles(inner: &OrbitalElements, outer: &OrbitalElements) -> ResonantAngles {
    resonant_angles_from_parts(
        inner.mean_longitude - 3.0 * outer.mean_longitude,
        [inner.peri, inner.node],
        [outer.peri, outer.node],
    )
}

/// Same as [`resonant_angles`] with the longitude combination λ₅ − 3λ₂ given
/// directly (it equals −Ψ).
pub fn resonant_angles_from_parts(
    lambda_comb: f64,
    [peri5, node5]: [f64; 2],
    [peri2, node2]: [f64; 2],
) -> ResonantAngles {
    let doubled = [
        lambda_comb + 2.0 * node5,
        lambda_comb + node5 + node2,
        lambda_comb + 2.0 * node2,
        lambda_comb + 2.0 * peri2,
        lambda_comb + peri5 + peri2,
        lambda_comb + 2.0 * peri5,
    ];
    ResonantAngles(doubled.map(|x| wrap_two_pi(0.5 * x)))
}

/// Full state of the averaged two-satellite problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemState {
    /// Miranda.
    pub sat_inner: SatelliteDynState,
    /// Umbriel.
    pub sat_outer: SatelliteDynState,
    /// Exact resonant angle Ψ = 3λ₂ − λ₅, rad (not wrapped).
    pub psi: f64,
    /// yr
    pub epoch: f64,
}

impl SystemState {
    pub fn from_elements(inner: &OrbitalElements, outer: &OrbitalElements, epoch: f64) -> Self {
        Self {
            sat_inner: elements_to_state(inner),
            sat_outer: elements_to_state(outer),
            psi: 3.0 * outer.mean_longitude - inner.mean_longitude,
            epoch,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.sat_inner.a / self.sat_outer.a
    }

    /// Resonant arguments with λ₅ − 3λ₂ taken from Ψ.
    pub fn resonant_angles(&self) -> ResonantAngles {
        let i = state_to_elements(&self.sat_inner);
        let o = state_to_elements(&self.sat_outer);
        resonant_angles_from_parts(-self.psi, [i.peri, i.node], [o.peri, o.node])
    }

    /// Pack into the 11-component integration vector
    /// (a, k, h, q, p)₅, (a, k, h, q, p)₂, Ψ.
    pub fn to_vector(&self) -> [f64; 11] {
        let s = &self.sat_inner;
        let o = &self.sat_outer;
        [s.a, s.k, s.h, s.q, s.p, o.a, o.k, o.h, o.q, o.p, self.psi]
    }

    /// Inverse of [`SystemState::to_vector`]; mean longitudes are carried
    /// over from `self`, as the averaged system only tracks Ψ.
    pub fn with_vector(&self, y: &[f64; 11], epoch: f64) -> Self {
        Self {
            sat_inner: SatelliteDynState {
                a: y[0],
                k: y[1],
                h: y[2],
                q: y[3],
                p: y[4],
                mean_longitude: self.sat_inner.mean_longitude,
            },
            sat_outer: SatelliteDynState {
                a: y[5],
                k: y[6],
                h: y[7],
                q: y[8],
                p: y[9],
                mean_longitude: self.sat_outer.mean_longitude,
            },
            psi: y[10],
            epoch,
        }
    }
}

/// Planetocentric Cartesian state, km and km/yr.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cartesian {
    pub pos: [f64; 3],
    pub vel: [f64; 3],
}

fn solve_kepler(mean_anomaly: f64, e: f64) -> f64 {
    let m = crate::constants::wrap_pi(mean_anomaly);
    let mut ecc_anom = if e < 0.8 { m } else { std::f64::consts::PI.copysign(m) };
    for _ in 0..50 {
        let f = ecc_anom - e * ecc_anom.sin() - m;
        let d = f / (1.0 - e * ecc_anom.cos());
        ecc_anom -= d;
        if d.abs() < 1e-15 {
            break;
        }
    }
    ecc_anom
}

/// Osculating elements to Cartesian state for gravitational parameter `mu`
/// (km³/yr²).
pub fn elements_to_cartesian(el: &OrbitalElements, mu: f64) -> Cartesian {
    let omega = el.peri - el.node;
    let ecc_anom = solve_kepler(el.mean_longitude - el.peri, el.e);
    let (se, ce) = ecc_anom.sin_cos();
    let b = (1.0 - el.e * el.e).sqrt();
    let x_orb = el.a * (ce - el.e);
    let y_orb = el.a * b * se;
    let n = (mu / el.a.powi(3)).sqrt();
    let r = el.a * (1.0 - el.e * ce);
    let vx_orb = -el.a * n * se * el.a / r;
    let vy_orb = el.a * n * b * ce * el.a / r;

    let (so, co) = omega.sin_cos();
    let (sn, cn) = el.node.sin_cos();
    let (si, ci) = el.inc.sin_cos();
    let rot = |x: f64, y: f64| -> [f64; 3] {
        let xp = co * x - so * y;
        let yp = so * x + co * y;
        [cn * xp - sn * ci * yp, sn * xp + cn * ci * yp, si * yp]
    };
    Cartesian {
        pos: rot(x_orb, y_orb),
        vel: rot(vx_orb, vy_orb),
    }
}

/// Cartesian state to osculating elements for gravitational parameter `mu`.
pub fn cartesian_to_elements(c: &Cartesian, mu: f64) -> OrbitalElements {
    let [x, y, z] = c.pos;
    let [vx, vy, vz] = c.vel;
    let r = (x * x + y * y + z * z).sqrt();
    let v2 = vx * vx + vy * vy + vz * vz;
    let hx = y * vz - z * vy;
    let hy = z * vx - x * vz;
    let hz = x * vy - y * vx;
    let h = (hx * hx + hy * hy + hz * hz).sqrt();
    let a = 1.0 / (2.0 / r - v2 / mu);
    let inc = (hz / h).clamp(-1.0, 1.0).acos();
    let node = if hx.hypot(hy) > 0.0 { hx.atan2(-hy) } else { 0.0 };
    // eccentricity vector
    let rv = x * vx + y * vy + z * vz;
    let ex = (v2 / mu - 1.0 / r) * x - rv / mu * vx;
    let ey = (v2 / mu - 1.0 / r) * y - rv / mu * vy;
    let ez = (v2 / mu - 1.0 / r) * z - rv / mu * vz;
    let e = (ex * ex + ey * ey + ez * ez).sqrt();

    // In-plane basis: the node line and ĥ × node, regular at I = 0.
    let (sn, cn) = node.sin_cos();
    let (ux, uy, uz) = (hx / h, hy / h, hz / h);
    let (mx, my, mz) = (-uz * sn, uz * cn, ux * sn - uy * cn);
    let in_plane_angle = |px: f64, py: f64, pz: f64| -> f64 {
        (px * mx + py * my + pz * mz).atan2(px * cn + py * sn)
    };
    // argument of latitude of the position, and of the pericentre
    let u_pos = in_plane_angle(x, y, z);
    let arg_peri = if e > ANGLE_UNDEFINED_BELOW { in_plane_angle(ex, ey, ez) } else { 0.0 };
    let true_anom = u_pos - arg_peri;
    let (sf, cf) = true_anom.sin_cos();
    let ecc_anom = ((1.0 - e * e).sqrt() * sf).atan2(e + cf);
    let mean_anom = ecc_anom - e * ecc_anom.sin();
    let peri = node + arg_peri;
    OrbitalElements {
        a,
        e,
        inc,
        peri: wrap_two_pi(peri),
        node: wrap_two_pi(node),
        mean_longitude: wrap_two_pi(peri + mean_anom),
    }
}

/// Mean motion in deg/day for `a` in km, for reporting.
pub fn mean_motion_deg_day(a: f64, planet: &PlanetModel) -> Result<f64> {
    mean_motion(a, planet).map(crate::constants::rad_s_to_deg_day)
}

/// Convert rad/yr to rad/s.
pub fn per_year_to_per_second(x: f64) -> f64 {
    x / YEAR_S
}
