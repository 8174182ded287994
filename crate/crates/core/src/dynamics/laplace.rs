//! Laplace coefficients b_s^(j)(α) and their α-derivatives.
//!
//! The primary evaluation is the hypergeometric series
//! b = 2 (s)_j / j! · α^j · F(s, s+j; j+1; α²), differentiated term by term.
//! Trapezoid quadrature of the defining integral is kept as an independent
//! check.

use crate::{Error, Result};

/// Coefficient value and its first three derivatives in α.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LaplaceVals {
    pub b: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl LaplaceVals {
    /// α·D b
    pub fn alpha_d(&self, alpha: f64) -> f64 {
        alpha * self.d1
    }

    /// α²·D² b
    pub fn alpha2_d2(&self, alpha: f64) -> f64 {
        alpha * alpha * self.d2
    }

    /// Second-order Taylor shift of every entry by `da`.
    pub fn shifted(&self, da: f64) -> Self {
        let h = 0.5 * da * da;
        Self {
            b: self.b + self.d1 * da + self.d2 * h,
            d1: self.d1 + self.d2 * da + self.d3 * h,
            d2: self.d2 + self.d3 * da,
            d3: self.d3,
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::domain("laplace_coefficient", format!("alpha must be in [0, 1), got {alpha}")));
    }
    Ok(())
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0) {
        return Err(Error::domain("laplace_coefficient", format!("s must be > 0, got {s}")));
    }
    Ok(())
}

/// b_s^(j)(α) and derivatives by the hypergeometric series.
pub fn laplace_series(s: f64, j: u32, alpha: f64) -> Result<LaplaceVals> {
    check_s(s)?;
    check_alpha(alpha)?;
    // leading coefficient 2 (s)_j / j!
    let mut c = 2.0;
    for k in 0..j {
        c *= (s + k as f64) / (k as f64 + 1.0);
    }
    let mut out = LaplaceVals::default();
    let jf = j as f64;
    for n in 0..100_000u32 {
        let nf = n as f64;
        let p = jf + 2.0 * nf;
        // d^m/dα^m α^p
        let t0 = c * pow_or_one(alpha, p);
        let t1 = if p >= 1.0 { c * p * pow_or_one(alpha, p - 1.0) } else { 0.0 };
        let t2 = if p >= 2.0 { c * p * (p - 1.0) * pow_or_one(alpha, p - 2.0) } else { 0.0 };
        let t3 = if p >= 3.0 { c * p * (p - 1.0) * (p - 2.0) * pow_or_one(alpha, p - 3.0) } else { 0.0 };
        out.b += t0;
        out.d1 += t1;
        out.d2 += t2;
        out.d3 += t3;
        let small = |t: f64, sum: f64| t.abs() <= 1e-17 * sum.abs().max(1e-300);
        if n > 2 && small(t0, out.b) && small(t1, out.d1) && small(t2, out.d2) && small(t3, out.d3) {
            return Ok(out);
        }
        if alpha == 0.0 && n > 2 {
            return Ok(out);
        }
        c *= (s + nf) * (s + jf + nf) / ((nf + 1.0) * (jf + 1.0 + nf));
    }
    Err(Error::Solver(format!("Laplace series did not converge at alpha={alpha}")))
}

fn pow_or_one(x: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else {
        x.powi(p as i32)
    }
}

/// Which α-derivative of the integrand to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Value,
    First,
    Second,
    Third,
}

/// b_s^(j)(α) or one of its derivatives by the trapezoid rule on [0, π],
/// doubling the node count until two successive estimates agree.
pub fn laplace_quadrature(s: f64, j: u32, alpha: f64, order: Order) -> Result<f64> {
    check_s(s)?;
    check_alpha(alpha)?;
    let integrand = |psi: f64| {
        let c = psi.cos();
        let u = 1.0 - 2.0 * alpha * c + alpha * alpha;
        let du = 2.0 * (alpha - c);
        let f = match order {
            Order::Value => u.powf(-s),
            Order::First => -s * u.powf(-s - 1.0) * du,
            Order::Second => s * (s + 1.0) * u.powf(-s - 2.0) * du * du - 2.0 * s * u.powf(-s - 1.0),
            Order::Third => {
                -s * (s + 1.0) * (s + 2.0) * u.powf(-s - 3.0) * du.powi(3)
                    + 6.0 * s * (s + 1.0) * u.powf(-s - 2.0) * du
            }
        };
        f * (j as f64 * psi).cos()
    };
    // (2/π) ∫₀^π, with the trapezoid rule exact-ish for periodic integrands
    let mut n = 16usize;
    let mut prev = f64::NAN;
    while n <= 1 << 22 {
        let h = std::f64::consts::PI / n as f64;
        let mut sum = 0.5 * (integrand(0.0) + integrand(std::f64::consts::PI));
        for k in 1..n {
            sum += integrand(k as f64 * h);
        }
        let est = 2.0 / std::f64::consts::PI * h * sum;
        if (est - prev).abs() <= 1e-14 * est.abs().max(1.0) {
            return Ok(est);
        }
        prev = est;
        n *= 2;
    }
    Err(Error::Solver(format!("Laplace quadrature did not converge at alpha={alpha}")))
}

/// The (s, j) pairs the averaged model needs.
pub const REQUIRED: [(f64, u32); 6] = [(1.5, 2), (0.5, 1), (0.5, 2), (0.5, 3), (0.5, 0), (1.5, 1)];

/// Cached coefficients for the pairs in [`REQUIRED`] at one α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceTable {
    pub alpha: f64,
    pub vals: [LaplaceVals; 6],
    /// Relative change in α beyond which the table is rebuilt.
    pub tolerance: f64,
}

impl LaplaceTable {
    pub fn new(alpha: f64, tolerance: f64) -> Result<Self> {
        let mut vals = [LaplaceVals::default(); 6];
        for (v, &(s, j)) in vals.iter_mut().zip(REQUIRED.iter()) {
            *v = laplace_series(s, j, alpha)?;
        }
        Ok(Self { alpha, vals, tolerance })
    }

    pub fn is_fresh(&self, alpha: f64) -> bool {
        ((alpha - self.alpha) / self.alpha).abs() <= self.tolerance
    }

    /// Errors if `alpha` has drifted beyond tolerance.
    pub fn check(&self, alpha: f64) -> Result<()> {
        if self.is_fresh(alpha) {
            Ok(())
        } else {
            Err(Error::StaleTable { built: self.alpha, requested: alpha })
        }
    }

    /// Rebuild if `alpha` has drifted beyond tolerance.
    pub fn refresh(&mut self, alpha: f64) -> Result<()> {
        if !self.is_fresh(alpha) {
            *self = Self::new(alpha, self.tolerance)?;
        }
        Ok(())
    }

    /// Entries Taylor-shifted from the table's α to `alpha`.
    pub fn at(&self, alpha: f64) -> [LaplaceVals; 6] {
        let da = alpha - self.alpha;
        self.vals.map(|v| v.shifted(da))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn trivial_values_at_origin() {
        let v = laplace_series(0.5, 0, 0.0).unwrap();
        assert_eq!(v.b, 2.0);
        assert_eq!(v.d1, 0.0);
        for j in 1..5 {
            assert_eq!(laplace_series(0.5, j, 0.0).unwrap().b, 0.0);
            assert_eq!(laplace_series(1.5, j, 0.0).unwrap().b, 0.0);
        }
        assert!((laplace_quadrature(0.5, 0, 0.0, Order::Value).unwrap() - 2.0).abs() < 1e-15);
        assert!(laplace_quadrature(0.5, 0, 0.0, Order::First).unwrap().abs() < 1e-15);
    }

    #[test]
    fn low_order_closed_forms() {
        // b_{1/2}^{(1)} ≈ α + 3α³/8 + …, b_{1/2}^{(0)} ≈ 2 + α²/2 + …
        let a = 1e-3;
        assert!((laplace_series(0.5, 1, a).unwrap().b - (a + 0.375 * a.powi(3))).abs() < 1e-15);
        assert!((laplace_series(0.5, 0, a).unwrap().b - (2.0 + 0.5 * a * a)).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_alpha() {
        assert!(laplace_series(0.5, 1, 1.0).is_err());
        assert!(laplace_series(0.5, 1, -0.1).is_err());
        assert!(laplace_quadrature(0.5, 1, 1.2, Order::Value).is_err());
    }

    #[test]
    fn series_matches_quadrature_at_miranda_umbriel() {
        let alpha = 0.48835;
        for (s, j) in REQUIRED {
            let v = laplace_series(s, j, alpha).unwrap();
            let q = [Order::Value, Order::First, Order::Second, Order::Third]
                .map(|o| laplace_quadrature(s, j, alpha, o).unwrap());
            for (got, want) in [v.b, v.d1, v.d2, v.d3].iter().zip(q) {
                assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0), "s={s} j={j}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn dual_method_sweep() {
        for ai in 1..=8 {
            let alpha = 0.1 * ai as f64;
            for s in [0.5, 1.5] {
                for j in 0..=4 {
                    let v = laplace_series(s, j, alpha).unwrap().b;
                    let q = laplace_quadrature(s, j, alpha, Order::Value).unwrap();
                    assert!((v - q).abs() <= 1e-9 * q.abs().max(1e-3), "{alpha} {s} {j}: {v} {q}");
                }
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for alpha in [0.2, 0.4883, 0.7] {
            for (s, j) in REQUIRED {
                let v = laplace_series(s, j, alpha).unwrap();
                let lo = laplace_series(s, j, alpha - h).unwrap();
                let hi = laplace_series(s, j, alpha + h).unwrap();
                let fd1 = (hi.b - lo.b) / (2.0 * h);
                let fd2 = (hi.b - 2.0 * v.b + lo.b) / (h * h);
                let fd3 = (hi.d2 - lo.d2) / (2.0 * h);
                assert!((v.d1 - fd1).abs() <= 1e-7 * v.d1.abs().max(1.0));
                assert!((v.d2 - fd2).abs() <= 1e-4 * v.d2.abs().max(1.0));
                assert!((v.d3 - fd3).abs() <= 1e-7 * v.d3.abs().max(1.0));
            }
        }
    }

    #[test]
    fn table_refresh_and_shift() {
        let mut t = LaplaceTable::new(0.48, 1e-6).unwrap();
        assert!(t.check(0.48 * (1.0 + 5e-7)).is_ok());
        assert!(matches!(t.check(0.49), Err(Error::StaleTable { .. })));
        let shifted = t.at(0.48 * (1.0 + 1e-6));
        let exact = laplace_series(1.5, 2, 0.48 * (1.0 + 1e-6)).unwrap();
        assert!((shifted[0].b - exact.b).abs() < 1e-15 * exact.b.max(1.0) * 10.0);
        t.refresh(0.49).unwrap();
        assert_eq!(t.alpha, 0.49);
    }

    proptest! {
        #[test]
        fn positive_inside_unit_interval(alpha in 0.01f64..0.95, ix in 0usize..6) {
            let (s, j) = REQUIRED[ix];
            prop_assert!(laplace_series(s, j, alpha).unwrap().b > 0.0);
        }
    }
}
