//! Non-averaged planetocentric three-body model: an oblate planet (J₂, J₄)
//! and two point-mass satellites.
//!
//! State layout: (x, y, z, vx, vy, vz) of the inner satellite then the
//! outer one, km and km/yr.

use crate::constants::gm_per_year;
use crate::model::{cartesian_to_elements, elements_to_cartesian, BodyPhysical, Cartesian, OrbitalElements, PlanetModel};
use crate::{Error, Result};

pub type DirectState = [f64; 12];

/// Constant data of the direct model, GM in km³/yr².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectModel {
    pub gm_planet: f64,
    pub gm_sat: [f64; 2],
    pub j2: f64,
    pub j4: f64,
    pub radius_ref: f64,
}

impl DirectModel {
    pub fn new(planet: &PlanetModel, inner: &BodyPhysical, outer: &BodyPhysical) -> Self {
        Self {
            gm_planet: gm_per_year(planet.gm),
            gm_sat: [gm_per_year(inner.gm), gm_per_year(outer.gm)],
            j2: planet.j2,
            j4: planet.j4,
            radius_ref: planet.radius_ref,
        }
    }

    /// Gravitational parameter of the planet–satellite `i` two-body problem.
    pub fn mu(&self, i: usize) -> f64 {
        self.gm_planet + self.gm_sat[i]
    }

    /// Zonal part of the planet's potential (positive convention, so the
    /// full potential is GM/r + U), km²/yr².
    pub fn zonal_potential(&self, r: &[f64; 3]) -> f64 {
        let rn = norm(r);
        let u = r[2] / rn;
        let x = self.radius_ref / rn;
        let (p2, _) = legendre2(u);
        let (p4, _) = legendre4(u);
        -self.gm_planet / rn * (self.j2 * x * x * p2 + self.j4 * x.powi(4) * p4)
    }

    /// Gradient of [`DirectModel::zonal_potential`].
    pub fn zonal_accel(&self, r: &[f64; 3]) -> [f64; 3] {
        let rn = norm(r);
        let u = r[2] / rn;
        let mut du_dr = 0.0;
        let mut du_du = 0.0;
        for (n, jn, (pn, dpn)) in [(2, self.j2, legendre2(u)), (4, self.j4, legendre4(u))] {
            let c = self.gm_planet * jn * self.radius_ref.powi(n) / rn.powi(n + 1);
            du_dr += (n + 1) as f64 * c / rn * pn;
            du_du -= c * dpn;
        }
        let radial = du_dr - u / rn * du_du;
        let axial = du_du / rn;
        [radial * r[0] / rn, radial * r[1] / rn, radial * r[2] / rn + axial]
    }
}

fn legendre2(u: f64) -> (f64, f64) {
    (0.5 * (3.0 * u * u - 1.0), 3.0 * u)
}

fn legendre4(u: f64) -> (f64, f64) {
    let u2 = u * u;
    ((35.0 * u2 * u2 - 30.0 * u2 + 3.0) / 8.0, (35.0 * u2 * u - 15.0 * u) / 2.0)
}

fn norm(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn part(y: &DirectState, i: usize) -> ([f64; 3], [f64; 3]) {
    let o = 6 * i;
    ([y[o], y[o + 1], y[o + 2]], [y[o + 3], y[o + 4], y[o + 5]])
}

/// Planetocentric accelerations of both satellites, as a state derivative.
pub fn direct_threebody_rhs(y: &DirectState, m: &DirectModel) -> Result<DirectState> {
    let r = [part(y, 0), part(y, 1)];
    let mut out = [0.0; 12];
    let g = [m.zonal_accel(&r[0].0), m.zonal_accel(&r[1].0)];
    for i in 0..2 {
        let j = 1 - i;
        let (ri, vi) = r[i];
        let rj = r[j].0;
        let d = [rj[0] - ri[0], rj[1] - ri[1], rj[2] - ri[2]];
        let (nri, nrj, nd) = (norm(&ri), norm(&rj), norm(&d));
        if nri == 0.0 || nd == 0.0 {
            return Err(Error::domain("direct_threebody_rhs", "zero separation"));
        }
        let ci = -m.mu(i) / nri.powi(3);
        let (cd, cj) = (m.gm_sat[j] / nd.powi(3), m.gm_sat[j] / nrj.powi(3));
        let own = 1.0 + m.gm_sat[i] / m.gm_planet;
        let other = m.gm_sat[j] / m.gm_planet;
        for k in 0..3 {
            out[6 * i + k] = vi[k];
            out[6 * i + 3 + k] = ci * ri[k] + own * g[i][k] + other * g[j][k] + cd * d[k] - cj * rj[k];
        }
    }
    Ok(out)
}

type Barycentric = ([f64; 3], [[f64; 3]; 2], [[f64; 3]; 2], [f64; 3]);

/// Barycentric velocities of planet and satellites (GM-weighted).
fn barycentric(y: &DirectState, m: &DirectModel) -> Barycentric {
    let total = m.gm_planet + m.gm_sat[0] + m.gm_sat[1];
    let (r0, v0) = part(y, 0);
    let (r1, v1) = part(y, 1);
    let shift = |a: [f64; 3], b: [f64; 3]| -> [f64; 3] {
        std::array::from_fn(|k| -(m.gm_sat[0] * a[k] + m.gm_sat[1] * b[k]) / total)
    };
    let rp = shift(r0, r1);
    let vp = shift(v0, v1);
    let rs = [std::array::from_fn(|k| r0[k] + rp[k]), std::array::from_fn(|k| r1[k] + rp[k])];
    let vs = [std::array::from_fn(|k| v0[k] + vp[k]), std::array::from_fn(|k| v1[k] + vp[k])];
    (rp, rs, vs, vp)
}

/// Total energy divided by G, km⁵/yr² (GM used as mass).
pub fn energy(y: &DirectState, m: &DirectModel) -> f64 {
    let (_, _, vs, vp) = barycentric(y, m);
    let sq = |v: &[f64; 3]| v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    let mut e = 0.5 * m.gm_planet * sq(&vp);
    for (i, v) in vs.iter().enumerate() {
        let (ri, _) = part(y, i);
        e += 0.5 * m.gm_sat[i] * sq(v);
        e -= m.gm_sat[i] * (m.gm_planet / norm(&ri) + m.zonal_potential(&ri));
    }
    let (r0, _) = part(y, 0);
    let (r1, _) = part(y, 1);
    let d = [r1[0] - r0[0], r1[1] - r0[1], r1[2] - r0[2]];
    e - m.gm_sat[0] * m.gm_sat[1] / norm(&d)
}

/// Total angular momentum divided by G. Only the polar component is
/// conserved with zonal harmonics.
pub fn angular_momentum(y: &DirectState, m: &DirectModel) -> [f64; 3] {
    let (rp, rs, vs, vp) = barycentric(y, m);
    let cross = |a: &[f64; 3], b: &[f64; 3]| [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let mut l = cross(&rp, &vp).map(|c| c * m.gm_planet);
    for i in 0..2 {
        let c = cross(&rs[i], &vs[i]);
        for k in 0..3 {
            l[k] += m.gm_sat[i] * c[k];
        }
    }
    l
}

/// Build a direct state from osculating planetocentric elements.
pub fn state_from_elements(inner: &OrbitalElements, outer: &OrbitalElements, m: &DirectModel) -> DirectState {
    let a = elements_to_cartesian(inner, m.mu(0));
    let b = elements_to_cartesian(outer, m.mu(1));
    let mut y = [0.0; 12];
    y[0..3].copy_from_slice(&a.pos);
    y[3..6].copy_from_slice(&a.vel);
    y[6..9].copy_from_slice(&b.pos);
    y[9..12].copy_from_slice(&b.vel);
    y
}

/// Osculating planetocentric elements of satellite `i`.
pub fn elements_of(y: &DirectState, i: usize, m: &DirectModel) -> OrbitalElements {
    let (pos, vel) = part(y, i);
    cartesian_to_elements(&Cartesian { pos, vel }, m.mu(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::abm::Abm10;
    use crate::tides::node_rate;
    use crate::constants::{wrap_pi, TWO_PI, YEAR_S};

    fn lone(planet: &PlanetModel) -> DirectModel {
        // inner satellite massless and alone: outer one is massless and far
        DirectModel {
            gm_planet: gm_per_year(planet.gm),
            gm_sat: [0.0, 0.0],
            j2: planet.j2,
            j4: planet.j4,
            radius_ref: planet.radius_ref,
        }
    }

    fn el(a: f64, e: f64, inc: f64, lambda: f64) -> OrbitalElements {
        OrbitalElements { a, e, inc, peri: 0.7, node: 0.3, mean_longitude: lambda }
    }

    #[test]
    fn zonal_accel_is_gradient() {
        let m = DirectModel::new(&PlanetModel::uranus(), &BodyPhysical::miranda(), &BodyPhysical::umbriel());
        let r = [90_000.0, -60_000.0, 25_000.0];
        let g = m.zonal_accel(&r);
        for k in 0..3 {
            let mut rp = r;
            let mut rm = r;
            rp[k] += 1.0;
            rm[k] -= 1.0;
            let fd = (m.zonal_potential(&rp) - m.zonal_potential(&rm)) / 2.0;
            assert!((g[k] - fd).abs() < 1e-7 * g.iter().map(|x| x.abs()).fold(0.0, f64::max), "{k}");
        }
    }

    #[test]
    fn zero_separation_is_an_error() {
        let m = DirectModel::new(&PlanetModel::uranus(), &BodyPhysical::miranda(), &BodyPhysical::umbriel());
        let mut y = [0.0; 12];
        y[0] = 1e5;
        y[6] = 1e5;
        assert!(direct_threebody_rhs(&y, &m).is_err());
    }

    #[test]
    fn kepler_orbit_closes() {
        let planet = PlanetModel { j2: 0.0, j4: 0.0, ..PlanetModel::uranus() };
        let m = lone(&planet);
        let e0 = el(129_900.0, 0.1, 0.2, 1.0);
        let far = el(1.0e7, 0.0, 0.0, 0.0);
        let y0 = state_from_elements(&e0, &far, &m);
        let period = TWO_PI / (m.mu(0) / e0.a.powi(3)).sqrt();
        let orbits = 20.0;
        let mut abm = Abm10::new(|_t, y: &DirectState| direct_threebody_rhs(y, &m), 0.0, y0, period / 200.0).unwrap();
        while abm.t() < orbits * period - 1e-9 * period {
            abm.step().unwrap();
        }
        let e1 = elements_of(abm.state(), 0, &m);
        let per_orbit = |x: f64, y: f64| (x - y).abs() / orbits;
        assert!(per_orbit(e1.a, e0.a) / e0.a < 1e-10);
        assert!(per_orbit(e1.e, e0.e) < 1e-10);
        assert!(per_orbit(e1.inc, e0.inc) < 1e-10);
        assert!(per_orbit(wrap_pi(e1.peri - e0.peri), 0.0) < 1e-10);
    }

    #[test]
    fn j2_node_regression() {
        let planet = PlanetModel { j2: 2e-3, j4: 0.0, ..PlanetModel::uranus() };
        let m = lone(&planet);
        let a = 2.0 * planet.radius_ref;
        let inc = 0.1;
        let e0 = el(a, 0.0, inc, 0.0);
        let far = el(1.0e7, 0.0, 0.0, 0.0);
        let y0 = state_from_elements(&e0, &far, &m);
        let n = (m.mu(0) / a.powi(3)).sqrt();
        let rate = node_rate(a, inc, &planet).unwrap() * YEAR_S;
        let span = 100.0 * TWO_PI / rate.abs();
        let dt = TWO_PI / n / 64.0;
        let mut abm = Abm10::new(|_t, y: &DirectState| direct_threebody_rhs(y, &m), 0.0, y0, dt).unwrap();
        let mut unwrapped = e0.node;
        let mut last = e0.node;
        let mut a_sum = 0.0;
        let mut count = 0.0;
        while abm.t() < span {
            abm.step().unwrap();
            let e = elements_of(abm.state(), 0, &m);
            unwrapped += wrap_pi(e.node - last);
            last = e.node;
            a_sum += e.a;
            count += 1.0;
        }
        // osculating a exceeds the mean one by an O(J₂) constant; compare
        // against the rate at the time-averaged value
        let rate_avg = node_rate(a_sum / count, inc, &planet).unwrap() * YEAR_S;
        let measured = (unwrapped - e0.node) / abm.t();
        assert!((measured / rate_avg - 1.0).abs() < 0.01, "{measured} vs {rate_avg}");
    }

    #[test]
    fn conserves_energy_and_polar_momentum() {
        let planet = PlanetModel::uranus();
        let m = DirectModel::new(&planet, &BodyPhysical::miranda(), &BodyPhysical::umbriel());
        let y0 = state_from_elements(&OrbitalElements::miranda_j2000(), &OrbitalElements::umbriel_j2000(), &m);
        let (e0, l0) = (energy(&y0, &m), angular_momentum(&y0, &m)[2]);
        let dt = 1.0 / 80.0 / 365.25;
        let mut abm = Abm10::new(|_t, y: &DirectState| direct_threebody_rhs(y, &m), 0.0, y0, dt).unwrap();
        for _ in 0..(365.25 * 80.0) as usize {
            abm.step().unwrap();
        }
        let y = abm.state();
        assert!((energy(y, &m) / e0 - 1.0).abs() < 1e-11, "{}", energy(y, &m) / e0 - 1.0);
        assert!((angular_momentum(y, &m)[2] / l0 - 1.0).abs() < 1e-11);
    }
}
