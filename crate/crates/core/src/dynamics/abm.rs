//! Fixed-step 10th-order Adams–Bashforth–Moulton predictor-corrector (PECE)
//! with a Gragg–Bulirsch–Stoer startup.

use std::sync::OnceLock;

use num_rational::Ratio;

use crate::{Error, Result};

/// Number of back values the 10-step pair keeps.
pub const STEPS: usize = 10;

type Q = Ratio<i128>;

/// ∫₀¹ of the Lagrange basis polynomials on integer nodes `xs`.
fn adams_weights(xs: &[i128]) -> Vec<f64> {
    let one = Q::from_integer(1);
    xs.iter()
        .enumerate()
        .map(|(j, &xj)| {
            // polynomial coefficients in ascending powers
            let mut poly = vec![one];
            for (m, &xm) in xs.iter().enumerate() {
                if m == j {
                    continue;
                }
                let den = Q::from_integer(xj - xm);
                let mut next = vec![Q::from_integer(0); poly.len() + 1];
                for (k, &c) in poly.iter().enumerate() {
                    next[k + 1] += c / den;
                    next[k] -= c * Q::from_integer(xm) / den;
                }
                poly = next;
            }
            let w: Q = poly.iter().enumerate().map(|(k, &c)| c / Q::from_integer(k as i128 + 1)).sum();
            *w.numer() as f64 / *w.denom() as f64
        })
        .collect()
}

/// Predictor weights for f at t_n, t_{n−1}, …, t_{n−9}.
pub fn bashforth() -> &'static [f64; STEPS] {
    static W: OnceLock<[f64; STEPS]> = OnceLock::new();
    W.get_or_init(|| {
        let xs: Vec<i128> = (0..STEPS as i128).map(|k| -k).collect();
        adams_weights(&xs).try_into().unwrap()
    })
}

/// Corrector weights for f at t_{n+1}, t_n, …, t_{n−8}.
pub fn moulton() -> &'static [f64; STEPS] {
    static W: OnceLock<[f64; STEPS]> = OnceLock::new();
    W.get_or_init(|| {
        let xs: Vec<i128> = (0..STEPS as i128).map(|k| 1 - k).collect();
        adams_weights(&xs).try_into().unwrap()
    })
}

fn check_finite<const N: usize>(t: f64, f: &[f64; N]) -> Result<()> {
    match f.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { t, index }),
        None => Ok(()),
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, f: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * f[i])
}

/// One modified-midpoint pass of `m` substeps over `h`.
fn midpoint<F, const N: usize>(rhs: &mut F, t: f64, y: &[f64; N], f0: &[f64; N], h: f64, m: usize) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let hs = h / m as f64;
    let mut prev = *y;
    let mut cur = axpy(y, hs, f0);
    for k in 1..m {
        let tk = t + k as f64 * hs;
        let f = rhs(tk, &cur)?;
        check_finite(tk, &f)?;
        let next = axpy(&prev, 2.0 * hs, &f);
        prev = cur;
        cur = next;
    }
    let f = rhs(t + h, &cur)?;
    check_finite(t + h, &f)?;
    Ok(std::array::from_fn(|i| 0.5 * (prev[i] + cur[i] + hs * f[i])))
}

/// One order-8 extrapolated midpoint step (substep sequence 2, 4, 6, 8).
pub fn gbs_step<F, const N: usize>(rhs: &mut F, t: f64, y: &[f64; N], h: f64) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    const SEQ: [usize; 4] = [2, 4, 6, 8];
    let f0 = rhs(t, y)?;
    check_finite(t, &f0)?;
    let mut row: Vec<[f64; N]> = Vec::with_capacity(SEQ.len());
    for (i, &m) in SEQ.iter().enumerate() {
        // Neville extrapolation in h² towards zero
        let mut next = Vec::with_capacity(i + 1);
        next.push(midpoint(rhs, t, y, &f0, h, m)?);
        for k in 1..=i {
            let r = (m as f64 / SEQ[i - k] as f64).powi(2) - 1.0;
            let (cur, prev) = (next[k - 1], row[k - 1]);
            next.push(std::array::from_fn(|c| cur[c] + (cur[c] - prev[c]) / r));
        }
        row = next;
    }
    Ok(row[SEQ.len() - 1])
}

/// Integrator state of the ABM-10 pair: time, solution and the derivative
/// history, newest first. Plain data, so it can be checkpointed.
#[derive(Debug, Clone, PartialEq)]
pub struct AbmState<const N: usize> {
    pub t: f64,
    pub dt: f64,
    pub y: [f64; N],
    /// f at t, t − dt, …
    pub hist: [[f64; N]; STEPS],
}

impl<const N: usize> AbmState<N> {
    /// Take the first nine steps with the one-step method at dt/10 and
    /// return the state with those intermediate solutions.
    pub fn start<F>(rhs: &mut F, t0: f64, y0: [f64; N], dt: f64) -> Result<(Self, Vec<[f64; N]>)>
    where
        F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::domain("abm10", format!("step must be positive, got {dt}")));
        }
        let mut hist = [[0.0; N]; STEPS];
        let mut y = y0;
        let mut t = t0;
        let f = rhs(t, &y)?;
        check_finite(t, &f)?;
        hist[STEPS - 1] = f;
        let mut states = Vec::with_capacity(STEPS - 1);
        let sub = dt / 10.0;
        for k in 1..STEPS {
            for i in 0..10 {
                y = gbs_step(rhs, t + i as f64 * sub, &y, sub)?;
            }
            t = t0 + k as f64 * dt;
            let f = rhs(t, &y)?;
            check_finite(t, &f)?;
            hist[STEPS - 1 - k] = f;
            states.push(y);
        }
        Ok((Self { t, dt, y, hist }, states))
    }

    /// Advance one PECE step.
    pub fn step<F>(&mut self, rhs: &mut F) -> Result<()>
    where
        F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    {
        let (b, m) = (bashforth(), moulton());
        let h = self.dt;
        let t1 = self.t + h;
        let mut pred = self.y;
        for (w, f) in b.iter().zip(self.hist.iter()) {
            for i in 0..N {
                pred[i] += h * w * f[i];
            }
        }
        let fp = rhs(t1, &pred)?;
        check_finite(t1, &fp)?;
        let mut corr = self.y;
        for i in 0..N {
            corr[i] += h * m[0] * fp[i];
        }
        for (w, f) in m[1..].iter().zip(self.hist.iter()) {
            for i in 0..N {
                corr[i] += h * w * f[i];
            }
        }
        let fc = rhs(t1, &corr)?;
        check_finite(t1, &fc)?;
        self.hist.rotate_right(1);
        self.hist[0] = fc;
        self.y = corr;
        self.t = t1;
        Ok(())
    }
}

/// Fixed-step ABM-10 stepper bundling the state with its right-hand side.
pub struct Abm10<F, const N: usize> {
    rhs: F,
    state: AbmState<N>,
}

impl<F, const N: usize> Abm10<F, N>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    /// Start at (t0, y0); the startup steps are taken here. Use
    /// [`Abm10::with_startup`] to see them.
    pub fn new(rhs: F, t0: f64, y0: [f64; N], dt: f64) -> Result<Self> {
        Self::with_startup(rhs, t0, y0, dt).map(|(s, _)| s)
    }

    /// As [`Abm10::new`], also returning the states at t0 + k·dt, k = 1..9.
    pub fn with_startup(mut rhs: F, t0: f64, y0: [f64; N], dt: f64) -> Result<(Self, Vec<[f64; N]>)> {
        let (state, states) = AbmState::start(&mut rhs, t0, y0, dt)?;
        Ok((Self { rhs, state }, states))
    }

    /// Resume from a saved state.
    pub fn from_state(rhs: F, state: AbmState<N>) -> Self {
        Self { rhs, state }
    }

    pub fn t(&self) -> f64 {
        self.state.t
    }

    pub fn state(&self) -> &[f64; N] {
        &self.state.y
    }

    pub fn dt(&self) -> f64 {
        self.state.dt
    }

    /// Derivative at the current state.
    pub fn derivative(&self) -> &[f64; N] {
        &self.state.hist[0]
    }

    pub fn step(&mut self) -> Result<()> {
        self.state.step(&mut self.rhs)
    }

    pub fn into_parts(self) -> (F, AbmState<N>) {
        (self.rhs, self.state)
    }
}

/// Sampled solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; N]>,
}

impl<const N: usize> Trajectory<N> {
    pub fn last(&self) -> Option<(f64, &[f64; N])> {
        self.t.last().copied().zip(self.y.last())
    }
}

/// Number of fixed steps covering `span` with nominal step `dt`; the
/// actual step is `span / n`.
pub fn step_count(span: f64, dt: f64) -> Result<usize> {
    if !(span >= 0.0 && dt > 0.0 && span.is_finite()) {
        return Err(Error::domain("abm10", format!("need span >= 0 and dt > 0, got {span}, {dt}")));
    }
    Ok(((span / dt).round() as usize).max(if span > 0.0 { 1 } else { 0 }))
}

/// Integrate from `t_span.0` to `t_span.1`, recording every `every`-th step
/// (the start and end are always recorded).
pub fn abm10_integrate_every<F, const N: usize>(
    rhs: F,
    y0: [f64; N],
    t_span: (f64, f64),
    dt: f64,
    every: usize,
) -> Result<Trajectory<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let span = t_span.1 - t_span.0;
    let n = step_count(span, dt)?;
    let every = every.max(1);
    let mut out = Trajectory { t: vec![t_span.0], y: vec![y0] };
    if n == 0 {
        return Ok(out);
    }
    let h = span / n as f64;
    if n < STEPS {
        // too short for the multistep pair: one-step method only
        let mut rhs = rhs;
        let mut y = y0;
        for k in 1..=n {
            let t = t_span.0 + (k - 1) as f64 * h;
            for i in 0..10 {
                y = gbs_step(&mut rhs, t + i as f64 * h / 10.0, &y, h / 10.0)?;
            }
            if k % every == 0 || k == n {
                out.t.push(t_span.0 + k as f64 * h);
                out.y.push(y);
            }
        }
        return Ok(out);
    }
    let (mut abm, start) = Abm10::with_startup(rhs, t_span.0, y0, h)?;
    for (k, y) in start.into_iter().enumerate() {
        let k = k + 1;
        if k % every == 0 {
            out.t.push(t_span.0 + k as f64 * h);
            out.y.push(y);
        }
    }
    for k in STEPS..=n {
        abm.step()?;
        if k % every == 0 || k == n {
            out.t.push(t_span.0 + k as f64 * h);
            out.y.push(*abm.state());
        }
    }
    Ok(out)
}

/// Integrate and record every step.
pub fn abm10_integrate<F, const N: usize>(rhs: F, y0: [f64; N], t_span: (f64, f64), dt: f64) -> Result<Trajectory<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    abm10_integrate_every(rhs, y0, t_span, dt, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator(_t: f64, y: &[f64; 2]) -> Result<[f64; 2]> {
        Ok([y[1], -y[0]])
    }

    fn decay(_t: f64, y: &[f64; 1]) -> Result<[f64; 1]> {
        Ok([-y[0]])
    }

    #[test]
    fn weights_sum_to_one() {
        let sb: f64 = bashforth().iter().sum();
        let sm: f64 = moulton().iter().sum();
        assert!((sb - 1.0).abs() < 1e-14);
        assert!((sm - 1.0).abs() < 1e-14);
        // leading corrector weight of the 10-step Adams-Moulton formula
        assert!((moulton()[0] - 2_082_753.0 / 7_257_600.0).abs() < 1e-15);
        assert!((bashforth()[0] - 30_277_247.0 / 7_257_600.0).abs() < 1e-14);
    }

    #[test]
    fn gbs_is_eighth_order() {
        let err = |h: f64| {
            let mut f = decay;
            let y = gbs_step(&mut f, 0.0, &[1.0], h).unwrap()[0];
            (y - (-h).exp()).abs()
        };
        let (e1, e2) = (err(0.8), err(0.4));
        // local error ∝ h⁹
        assert!(e1 / e2 > 300.0, "{e1} {e2}");
    }

    #[test]
    fn oscillator_energy_drift() {
        let mut abm = Abm10::new(oscillator, 0.0, [1.0, 0.0], 0.01).unwrap();
        for _ in 0..100_000 {
            abm.step().unwrap();
        }
        let y = abm.state();
        let energy = 0.5 * (y[0] * y[0] + y[1] * y[1]);
        assert!((energy - 0.5).abs() / 0.5 < 1e-10, "{energy}");
        assert!((y[0] - abm.t().cos()).abs() < 1e-9);
    }

    #[test]
    fn exponential_decay() {
        let tr = abm10_integrate(decay, [1.0], (0.0, 5.0), 0.01).unwrap();
        let (t, y) = tr.last().unwrap();
        assert_eq!(t, 5.0);
        assert!((y[0] / (-5.0f64).exp() - 1.0).abs() < 1e-12, "{}", y[0]);
        assert_eq!(tr.t.len(), 501);
    }

    #[test]
    fn tenth_order_convergence() {
        let err = |dt: f64| {
            let tr = abm10_integrate(decay, [1.0], (0.0, 10.0), dt).unwrap();
            (tr.last().unwrap().1[0] - (-10.0f64).exp()).abs()
        };
        let ratio = err(0.2) / err(0.1);
        let order = ratio.log2();
        assert!((8.5..11.5).contains(&order), "ratio {ratio}");
    }

    #[test]
    fn deterministic() {
        let a = abm10_integrate(oscillator, [1.0, 0.5], (0.0, 3.0), 0.01).unwrap();
        let b = abm10_integrate(oscillator, [1.0, 0.5], (0.0, 3.0), 0.01).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn non_finite_aborts() {
        let bad = |t: f64, y: &[f64; 1]| -> Result<[f64; 1]> { Ok([if t > 0.5 { f64::NAN } else { y[0] }]) };
        let err = abm10_integrate(bad, [1.0], (0.0, 1.0), 0.01).unwrap_err();
        assert!(matches!(err, Error::NonFinite { index: 0, .. }));
    }

    #[test]
    fn short_spans_and_sampling() {
        let tr = abm10_integrate(decay, [1.0], (0.0, 0.05), 0.01).unwrap();
        assert_eq!(tr.t.len(), 6);
        assert!((tr.last().unwrap().1[0] - (-0.05f64).exp()).abs() < 1e-14);
        let tr = abm10_integrate_every(decay, [1.0], (0.0, 1.0), 0.01, 30).unwrap();
        let want = [0.0, 0.3, 0.6, 0.9, 1.0];
        assert!(tr.t.iter().zip(want).all(|(t, w)| (t - w).abs() < 1e-12), "{:?}", tr.t);
        assert_eq!(tr.t.len(), 5);
        assert!(abm10_integrate(decay, [1.0], (0.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn resume_from_parts_is_bitwise_identical() {
        let mut whole = Abm10::new(oscillator, 0.0, [1.0, 0.5], 0.01).unwrap();
        let mut first = Abm10::new(oscillator, 0.0, [1.0, 0.5], 0.01).unwrap();
        for _ in 0..50 {
            whole.step().unwrap();
            first.step().unwrap();
        }
        let (rhs, state) = first.into_parts();
        let mut resumed = Abm10::from_state(rhs, state.clone());
        for _ in 0..50 {
            whole.step().unwrap();
            resumed.step().unwrap();
        }
        assert_eq!(whole.state(), resumed.state());
        assert_eq!(whole.t(), resumed.t());
    }
}
