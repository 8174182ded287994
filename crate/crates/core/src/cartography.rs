//! Phase-space maps: a grid of independent short runs over (M₅, a₅), each
//! reduced to the excursion Δa₅ = max a₅ − min a₅.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{wrap_two_pi, DAY_S, DEG, YEAR_S};
use crate::dynamics::abm::{step_count, Abm10};
use crate::dynamics::direct::{direct_threebody_rhs, elements_of, state_from_elements, DirectModel};
use crate::dynamics::{AveragedModel, DEFAULT_STEP_YR};
use crate::model::{BodyPhysical, OrbitalElements, PlanetModel, SystemState};
use crate::output::{csv_table, parse_csv, ppm, Stamp};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapModel {
    Averaged,
    /// Planetocentric three-body integration with J₂ and J₄.
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColorScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MapSpec {
    pub model: MapModel,
    /// km, inclusive
    pub a_min: f64,
    pub a_max: f64,
    /// deg; the M axis covers [m_min, m_max) in equal steps
    pub m_min: f64,
    pub m_max: f64,
    pub n_a: usize,
    pub n_m: usize,
    /// yr
    pub span: f64,
    /// yr
    pub step: f64,
    pub color: ColorScale,
}

impl Default for MapSpec {
    fn default() -> Self {
        Self::averaged()
    }
}

impl MapSpec {
    pub fn averaged() -> Self {
        Self {
            model: MapModel::Averaged,
            a_min: 127_820.0,
            a_max: 127_870.0,
            m_min: 0.0,
            m_max: 360.0,
            n_a: 100,
            n_m: 100,
            span: 1500.0,
            step: DEFAULT_STEP_YR,
            color: ColorScale::Linear,
        }
    }

    pub fn direct() -> Self {
        Self { model: MapModel::Direct, a_min: 127_850.0, a_max: 127_900.0, step: DAY_S / 80.0 / YEAR_S, ..Self::averaged() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(what.to_string()));
        if self.n_a < 2 || self.n_m < 2 {
            return bad("map grid counts must be >= 2");
        }
        if !(self.span > 0.0 && self.span.is_finite()) {
            return bad("map span must be > 0");
        }
        if !(self.step > 0.0 && self.step <= self.span) {
            return bad("map step must be in (0, span]");
        }
        if !(self.a_min > 0.0 && self.a_max > self.a_min) {
            return bad("map a range must satisfy 0 < a_min < a_max");
        }
        if !(self.m_max > self.m_min) {
            return bad("map m range must satisfy m_min < m_max");
        }
        Ok(())
    }

    pub fn a_axis(&self) -> Vec<f64> {
        let d = (self.a_max - self.a_min) / (self.n_a - 1) as f64;
        (0..self.n_a).map(|i| self.a_min + i as f64 * d).collect()
    }

    /// deg
    pub fn m_axis(&self) -> Vec<f64> {
        let d = (self.m_max - self.m_min) / self.n_m as f64;
        (0..self.n_m).map(|j| self.m_min + j as f64 * d).collect()
    }
}

/// Bodies and the elements every cell starts from, apart from a₅ and M₅.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MapBase {
    pub planet: PlanetModel,
    pub inner: BodyPhysical,
    pub outer: BodyPhysical,
    pub inner_elements: OrbitalElements,
    pub outer_elements: OrbitalElements,
}

impl Default for MapBase {
    fn default() -> Self {
        Self {
            planet: PlanetModel::uranus(),
            inner: BodyPhysical::miranda(),
            outer: BodyPhysical::umbriel(),
            inner_elements: OrbitalElements::miranda_j2000(),
            outer_elements: OrbitalElements::umbriel_j2000(),
        }
    }
}

impl MapBase {
    fn cell_elements(&self, a5: f64, m5_deg: f64) -> (OrbitalElements, OrbitalElements) {
        let mut inner = self.inner_elements;
        inner.a = a5;
        inner.mean_longitude = wrap_two_pi(inner.peri + m5_deg * DEG);
        (inner, self.outer_elements)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapResult {
    pub spec: MapSpec,
    pub a_axis: Vec<f64>,
    /// deg
    pub m_axis: Vec<f64>,
    /// Δa₅ in km, row-major with a varying slowest; NaN marks a failed cell.
    pub delta: Vec<f64>,
}

impl MapResult {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.delta[i * self.m_axis.len() + j]
    }

    pub fn failed_cells(&self) -> usize {
        self.delta.iter().filter(|d| d.is_nan()).count()
    }
}

/// Δa₅ of one cell.
pub fn cell_delta(spec: &MapSpec, base: &MapBase, a5: f64, m5_deg: f64) -> Result<f64> {
    let (inner, outer) = base.cell_elements(a5, m5_deg);
    let n = step_count(spec.span, spec.step)?;
    let dt = spec.span / n as f64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut track = |a: f64| {
        lo = lo.min(a);
        hi = hi.max(a);
    };
    match spec.model {
        MapModel::Averaged => {
            let mut model = AveragedModel::new(&base.planet, &base.inner, &base.outer);
            let y0 = SystemState::from_elements(&inner, &outer, 0.0).to_vector();
            track(y0[0]);
            let rhs = move |_t: f64, y: &[f64; 11]| model.equations_of_motion(y);
            let (mut abm, startup) = Abm10::with_startup(rhs, 0.0, y0, dt)?;
            startup.iter().take(n).for_each(|y| track(y[0]));
            for _ in startup.len()..n {
                abm.step()?;
                track(abm.state()[0]);
            }
        }
        MapModel::Direct => {
            let m = DirectModel::new(&base.planet, &base.inner, &base.outer);
            let y0 = state_from_elements(&inner, &outer, &m);
            track(elements_of(&y0, 0, &m).a);
            let rhs = |_t: f64, y: &[f64; 12]| direct_threebody_rhs(y, &m);
            let (mut abm, startup) = Abm10::with_startup(rhs, 0.0, y0, dt)?;
            startup.iter().take(n).for_each(|y| track(elements_of(y, 0, &m).a));
            for _ in startup.len()..n {
                abm.step()?;
                track(elements_of(abm.state(), 0, &m).a);
            }
        }
    }
    Ok(hi - lo)
}

/// Run every cell, in parallel on `workers` threads (0 = rayon default).
/// A failing cell is stored as NaN and the rest of the map continues.
pub fn run_map(spec: &MapSpec, base: &MapBase, workers: usize) -> Result<MapResult> {
    spec.validate()?;
    let a_axis = spec.a_axis();
    let m_axis = spec.m_axis();
    let cells: Vec<(f64, f64)> = a_axis.iter().flat_map(|&a| m_axis.iter().map(move |&m| (a, m))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let delta = pool.install(|| {
        cells
            .par_iter()
            .with_max_len(1)
            .map(|&(a, m)| cell_delta(spec, base, a, m).unwrap_or(f64::NAN))
            .collect()
    });
    Ok(MapResult { spec: *spec, a_axis, m_axis, delta })
}

/// Rows (a₅, M₅ in deg, Δa₅).
pub fn map_table(result: &MapResult, stamp: &Stamp) -> String {
    let rows = result
        .a_axis
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| result.m_axis.iter().enumerate().map(move |(j, &m)| vec![a, m, result.get(i, j)]));
    csv_table(stamp, &["a5_km", "m5_deg", "delta_a_km"], rows)
}

/// Inverse of [`map_table`]: axes and Δa matrix.
pub fn parse_map_table(text: &str) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let t = parse_csv(text)?;
    if t.columns != ["a5_km", "m5_deg", "delta_a_km"] {
        return Err(Error::Config(format!("unexpected map columns {:?}", t.columns)));
    }
    let mut a_axis: Vec<f64> = Vec::new();
    let mut m_axis: Vec<f64> = Vec::new();
    for r in &t.rows {
        if a_axis.last() != Some(&r[0]) {
            a_axis.push(r[0]);
        }
        if a_axis.len() == 1 {
            m_axis.push(r[1]);
        }
    }
    if a_axis.len() * m_axis.len() != t.rows.len() {
        return Err(Error::Config("map table is not a full grid".into()));
    }
    Ok((a_axis, m_axis, t.rows.iter().map(|r| r[2]).collect()))
}

/// Grey level per cell: light for small Δa, dark for large. Failed cells
/// are red.
pub fn colorize(delta: &[f64], scale: ColorScale) -> Vec<[u8; 3]> {
    let tr = |d: f64| match scale {
        ColorScale::Linear => d,
        ColorScale::Log => d.max(1e-12).log10(),
    };
    let finite: Vec<f64> = delta.iter().copied().filter(|d| d.is_finite()).map(tr).collect();
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    delta
        .iter()
        .map(|&d| {
            if !d.is_finite() {
                return [255, 0, 0];
            }
            let s = if hi > lo { (tr(d) - lo) / (hi - lo) } else { 0.0 };
            let g = (255.0 * (1.0 - s)).round() as u8;
            [g, g, g]
        })
        .collect()
}

/// Image with M₅ along x and a₅ increasing upward.
pub fn map_image(result: &MapResult, stamp: &Stamp, scale: ColorScale) -> Result<Vec<u8>> {
    let (h, w) = (result.a_axis.len(), result.m_axis.len());
    let colors = colorize(&result.delta, scale);
    let pixels: Vec<[u8; 3]> = (0..h).rev().flat_map(|i| colors[i * w..(i + 1) * w].iter().copied()).collect();
    ppm(stamp, w, h, &pixels)
}

/// a₅ of the resonance centre: the Δa-weighted mean a₅ over rows whose
/// M-averaged excursion stands above the map's background level (the
/// median row) by more than half its peak.
pub fn resonance_center(result: &MapResult) -> Option<f64> {
    let w = result.m_axis.len();
    let rows: Vec<f64> = (0..result.a_axis.len())
        .map(|i| {
            let v: Vec<f64> = result.delta[i * w..(i + 1) * w].iter().copied().filter(|d| d.is_finite()).collect();
            if v.is_empty() {
                f64::NAN
            } else {
                v.iter().sum::<f64>() / v.len() as f64
            }
        })
        .collect();
    let mut sorted: Vec<f64> = rows.iter().copied().filter(|r| r.is_finite()).collect();
    if sorted.is_empty() {
        return None;
    }
    sorted.sort_by(f64::total_cmp);
    let background = sorted[sorted.len() / 2];
    let peak = *sorted.last()?;
    if !(peak > background) {
        return None;
    }
    let cut = background + 0.5 * (peak - background);
    let (mut sw, mut swa) = (0.0, 0.0);
    for (&r, &a) in rows.iter().zip(&result.a_axis) {
        if r > cut {
            sw += r - background;
            swa += (r - background) * a;
        }
    }
    Some(swa / sw)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(model: MapModel) -> MapSpec {
        let base = if model == MapModel::Averaged { MapSpec::averaged() } else { MapSpec::direct() };
        MapSpec { n_a: 4, n_m: 4, span: 15.0, ..base }
    }

    #[test]
    fn axes() {
        let s = MapSpec { n_a: 3, n_m: 4, ..MapSpec::averaged() };
        assert_eq!(s.a_axis(), [127_820.0, 127_845.0, 127_870.0]);
        assert_eq!(s.m_axis(), [0.0, 90.0, 180.0, 270.0]);
        assert!(MapSpec { n_a: 1, ..s }.validate().is_err());
        assert!(MapSpec { span: 0.0, ..s }.validate().is_err());
    }

    #[test]
    fn smoke_grid_is_finite() {
        let r = run_map(&small(MapModel::Averaged), &MapBase::default(), 1).unwrap();
        assert_eq!(r.delta.len(), 16);
        assert!(r.delta.iter().all(|d| d.is_finite() && *d >= 0.0));
        let d = run_map(&MapSpec { span: 0.05, ..small(MapModel::Direct) }, &MapBase::default(), 1).unwrap();
        assert!(d.delta.iter().all(|d| d.is_finite() && *d > 0.0));
    }

    #[test]
    fn worker_count_and_isolation_invariance() {
        let spec = small(MapModel::Averaged);
        let base = MapBase::default();
        let one = run_map(&spec, &base, 1).unwrap();
        let three = run_map(&spec, &base, 3).unwrap();
        assert_eq!(one, three);
        let alone = cell_delta(&spec, &base, spec.a_axis()[2], spec.m_axis()[1]).unwrap();
        assert_eq!(alone, one.get(2, 1));
    }

    #[test]
    fn failing_cell_is_a_sentinel() {
        // a₅ beyond a₂ fails the crossed-orbit check for the top row only
        let spec = MapSpec { a_min: 200_000.0, a_max: 300_000.0, n_a: 2, n_m: 2, span: 1.0, ..MapSpec::averaged() };
        let r = run_map(&spec, &MapBase::default(), 1).unwrap();
        assert_eq!(r.failed_cells(), 2);
        assert!(r.get(0, 0).is_finite());
    }

    #[test]
    fn colors_are_monotone_and_constant_maps_uniform() {
        let d = [0.0, 3.0, 1.0, 10.0, 2.5];
        for scale in [ColorScale::Linear, ColorScale::Log] {
            let c = colorize(&d, scale);
            for i in 0..d.len() {
                for j in 0..d.len() {
                    if d[i] < d[j] {
                        assert!(c[i][0] >= c[j][0]);
                    }
                }
            }
        }
        let c = colorize(&[4.0; 6], ColorScale::Linear);
        assert!(c.iter().all(|p| *p == c[0]));
        assert_eq!(colorize(&[f64::NAN, 1.0], ColorScale::Linear)[0], [255, 0, 0]);
    }

    #[test]
    fn text_round_trip_and_image_layout() {
        let spec = MapSpec { n_a: 3, n_m: 2, ..MapSpec::averaged() };
        let r = MapResult {
            spec,
            a_axis: spec.a_axis(),
            m_axis: spec.m_axis(),
            delta: vec![0.1, 0.2, 1.0 / 3.0, f64::NAN, 5.0, 6.0],
        };
        let stamp = Stamp::new("x");
        let (a, m, d) = parse_map_table(&map_table(&r, &stamp)).unwrap();
        assert_eq!((a, m), (r.a_axis.clone(), r.m_axis.clone()));
        for (x, y) in d.iter().zip(&r.delta) {
            assert!(x == y || (x.is_nan() && y.is_nan()) || ((x - y) / y).abs() < 1e-8);
        }
        let (w, h, px) = crate::output::parse_ppm(&map_image(&r, &stamp, ColorScale::Linear).unwrap()).unwrap();
        assert_eq!((w, h), (2, 3));
        // top-left pixel is the largest a₅ row, darkest cell
        assert_eq!(px[1], [0, 0, 0]);
        assert_eq!(px[4], [255, 255, 255]);
    }

    #[test]
    fn centre_of_a_synthetic_band() {
        let spec = MapSpec { n_a: 11, n_m: 4, a_min: 0.0 + 100.0, a_max: 110.0, ..MapSpec::averaged() };
        let a_axis = spec.a_axis();
        let delta = a_axis
            .iter()
            .flat_map(|&a| {
                let v = if (a - 106.0).abs() <= 1.0 { 10.0 } else { 1.0 };
                [v; 4]
            })
            .collect();
        let r = MapResult { spec, a_axis, m_axis: spec.m_axis(), delta };
        assert!((resonance_center(&r).unwrap() - 106.0).abs() < 1e-12);
        let flat = MapResult { delta: vec![2.0; 44], ..r };
        assert_eq!(resonance_center(&flat), None);
    }
}
