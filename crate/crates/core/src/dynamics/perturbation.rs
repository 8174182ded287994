//! Long-period disturbing functions of the 3:1 pair and their analytic
//! partial derivatives in nonsingular variables.
//!
//! Both satellites share the bracket
//!
//! S = Σ A_k Re(P_k w) + C₀ + C₁(|z₅|²+|z₂|²) + C₂(|ζ₅|²+|ζ₂|²)
//!     + C₃ Re(z₅ z̄₂) + C₄ Re(ζ₅ ζ̄₂) + I Re(z₂² w),
//!
//! with w = exp(−iΨ), P = (ζ₅², ζ₅ζ₂, ζ₂², z₂², z₅z₂, z₅²) and I the indirect
//! coefficient. Then R₅ = (Gm₂/a₂) S + R₅^A and R₂ = (Gm₅/a₂) S + R₂^A.

use num_complex::Complex64;

use super::laplace::{laplace_series, LaplaceTable, LaplaceVals, REQUIRED};
use crate::model::PlanetModel;
use crate::Result;

/// Nominal 3:1 ratio α₀ = 3^(−2/3) at which the indirect terms are evaluated.
pub fn alpha_nominal() -> f64 {
    3f64.powf(-2.0 / 3.0)
}

/// Indirect coefficient of Re(z₂² w) in the inner satellite's bracket,
/// α₀ · (−27/8).
pub fn indirect_inner() -> f64 {
    -27.0 / 8.0 * alpha_nominal()
}

/// Indirect coefficient in the outer satellite's bracket, (−3/8) / α₀².
/// Equal to [`indirect_inner`] because α₀³ = 1/9.
pub fn indirect_outer() -> f64 {
    -3.0 / 8.0 / (alpha_nominal() * alpha_nominal())
}

/// Indirect resonant term: R_E = −(27/8) e₂² cos(λ₅ − 3λ₂ + 2ϖ₂) for an
/// outer perturber, R_I = −(3/8) e₂² cos(…) for an inner one.
pub fn indirect_terms(e2: f64, lambda5: f64, lambda2: f64, peri2: f64, outer: bool) -> f64 {
    let c = if outer { -27.0 / 8.0 } else { -3.0 / 8.0 };
    c * e2 * e2 * (lambda5 - 3.0 * lambda2 + 2.0 * peri2).cos()
}

/// (value, d/dα) of c·α^m·b for m ∈ {0, 1}.
fn alpha_pow_b(c: f64, m: u32, alpha: f64, v: &LaplaceVals) -> (f64, f64) {
    match m {
        0 => (c * v.b, c * v.d1),
        _ => (c * alpha * v.b, c * (v.b + alpha * v.d1)),
    }
}

/// (value, d/dα) of c·(c0 + c1 αD + c2 α²D²) b.
fn operator_b(c: f64, [c0, c1, c2]: [f64; 3], alpha: f64, v: &LaplaceVals) -> (f64, f64) {
    let val = c0 * v.b + c1 * alpha * v.d1 + c2 * alpha * alpha * v.d2;
    let der = c0 * v.d1 + c1 * (v.d1 + alpha * v.d2) + c2 * (2.0 * alpha * v.d2 + alpha * alpha * v.d3);
    (c * val, c * der)
}

/// Resonant kernels A₁..A₆ (the f_k with their e, γ factors removed) and
/// their α-derivatives, from table entries ordered as [`REQUIRED`].
pub fn resonant_kernels_from(alpha: f64, v: &[LaplaceVals; 6]) -> ([f64; 6], [f64; 6]) {
    let b32_2 = &v[0];
    let pieces = [
        alpha_pow_b(0.5, 1, alpha, b32_2),
        alpha_pow_b(-1.0, 1, alpha, b32_2),
        alpha_pow_b(0.5, 1, alpha, b32_2),
        operator_b(1.0 / 8.0, [17.0, 10.0, 1.0], alpha, &v[1]),
        operator_b(-1.0 / 4.0, [20.0, 10.0, 1.0], alpha, &v[2]),
        operator_b(1.0 / 8.0, [21.0, 10.0, 1.0], alpha, &v[3]),
    ];
    (pieces.map(|p| p.0), pieces.map(|p| p.1))
}

/// Secular kernels C₀..C₄ and their α-derivatives.
pub fn secular_coeffs_from(alpha: f64, v: &[LaplaceVals; 6]) -> ([f64; 5], [f64; 5]) {
    let pieces = [
        alpha_pow_b(0.5, 0, alpha, &v[4]),
        operator_b(1.0 / 8.0, [0.0, 2.0, 1.0], alpha, &v[4]),
        alpha_pow_b(-0.5, 1, alpha, &v[5]),
        operator_b(1.0 / 4.0, [2.0, -2.0, -1.0], alpha, &v[1]),
        alpha_pow_b(1.0, 1, alpha, &v[5]),
    ];
    (pieces.map(|p| p.0), pieces.map(|p| p.1))
}

fn required_vals(alpha: f64) -> Result<[LaplaceVals; 6]> {
    let mut vals = [LaplaceVals::default(); 6];
    for (v, &(s, j)) in vals.iter_mut().zip(REQUIRED.iter()) {
        *v = laplace_series(s, j, alpha)?;
    }
    Ok(vals)
}

/// Resonant kernels A₁..A₆ at `alpha`.
pub fn resonant_kernels(alpha: f64) -> Result<[f64; 6]> {
    Ok(resonant_kernels_from(alpha, &required_vals(alpha)?).0)
}

/// The six f_k with eccentricity and inclination factors applied.
pub fn resonant_coeffs(alpha: f64, e5: f64, e2: f64, g5: f64, g2: f64) -> Result<[f64; 6]> {
    let a = resonant_kernels(alpha)?;
    Ok([a[0] * g5 * g5, a[1] * g5 * g2, a[2] * g2 * g2, a[3] * e2 * e2, a[4] * e5 * e2, a[5] * e5 * e5])
}

/// C₀..C₄ at `alpha`.
pub fn secular_coeffs(alpha: f64) -> Result<[f64; 5]> {
    Ok(secular_coeffs_from(alpha, &required_vals(alpha)?).0)
}

/// Coefficients of the averaged oblateness function
/// R^A = (GM/2a)·B_e·e² − (GM/2a)·B_I·sin²I.
fn oblateness_brackets(a: f64, planet: &PlanetModel) -> (f64, f64) {
    let x2 = (planet.radius_ref / a).powi(2);
    let x4 = x2 * x2;
    let j2 = planet.j2;
    let be = 1.5 * j2 * x2 - 9.0 / 8.0 * j2 * j2 * x4 - 15.0 / 4.0 * planet.j4 * x4;
    let bi = 1.5 * j2 * x2 - 27.0 / 8.0 * j2 * j2 * x4 - 15.0 / 4.0 * planet.j4 * x4;
    (be, bi)
}

/// Averaged oblateness function in the units of `gm` (km³/s² gives km²/s²).
pub fn oblateness_term_gm(a: f64, e: f64, inc: f64, gm: f64, planet: &PlanetModel) -> f64 {
    let (be, bi) = oblateness_brackets(a, planet);
    let s = inc.sin();
    gm / (2.0 * a) * (be * e * e - bi * s * s)
}

/// Averaged oblateness function with the planet's own GM, km²/s².
pub fn oblateness_term(a: f64, e: f64, inc: f64, planet: &PlanetModel) -> f64 {
    oblateness_term_gm(a, e, inc, planet.gm, planet)
}

/// Value and partials of one satellite's disturbing function.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SatPartials {
    pub r: f64,
    pub r_a: f64,
    pub r_k: f64,
    pub r_h: f64,
    pub r_q: f64,
    pub r_p: f64,
    pub r_lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Partials {
    pub inner: SatPartials,
    pub outer: SatPartials,
}

/// Constant inputs of the disturbing functions. `gm_*` in km³/yr².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairConstants {
    pub planet: PlanetModel,
    pub gm_planet: f64,
    pub gm_inner: f64,
    pub gm_outer: f64,
}

/// Shared bracket S with its gradient.
struct Bracket {
    s: f64,
    /// ∂S/∂(k₅, h₅, q₅, p₅, k₂, h₂, q₂, p₂)
    grad: [f64; 8],
    d_psi: f64,
    d_alpha: f64,
}

fn bracket(y: &[f64; 11], alpha: f64, vals: &[LaplaceVals; 6]) -> Bracket {
    let (a_res, da_res) = resonant_kernels_from(alpha, vals);
    let (c_sec, dc_sec) = secular_coeffs_from(alpha, vals);
    let z5 = Complex64::new(y[1], y[2]);
    let s5 = Complex64::new(y[3], y[4]);
    let z2 = Complex64::new(y[6], y[7]);
    let s2 = Complex64::new(y[8], y[9]);
    let (sp, cp) = y[10].sin_cos();
    let w = Complex64::new(cp, -sp);

    let polys = [s5 * s5, s5 * s2, s2 * s2, z2 * z2, z5 * z2, z5 * z5];
    let mut coef = a_res;
    coef[3] += indirect_inner();

    let mut s = 0.0;
    let mut d_psi = 0.0;
    let mut d_alpha = 0.0;
    for k in 0..6 {
        let pw = polys[k] * w;
        s += coef[k] * pw.re;
        d_psi += coef[k] * pw.im;
        d_alpha += da_res[k] * pw.re;
    }
    // holomorphic derivatives Σ c_k ∂P_k/∂v for v = z₅, ζ₅, z₂, ζ₂
    let g_z5 = z2 * coef[4] + z5 * (2.0 * coef[5]);
    let g_s5 = s5 * (2.0 * coef[0]) + s2 * coef[1];
    let g_z2 = z2 * (2.0 * coef[3]) + z5 * coef[4];
    let g_s2 = s5 * coef[1] + s2 * (2.0 * coef[2]);
    let re_im = |g: Complex64| {
        let gw = g * w;
        (gw.re, -gw.im)
    };
    let (k5, h5) = re_im(g_z5);
    let (q5, p5) = re_im(g_s5);
    let (k2, h2) = re_im(g_z2);
    let (q2, p2) = re_im(g_s2);
    let mut grad = [k5, h5, q5, p5, k2, h2, q2, p2];

    let e_sq = z5.norm_sqr() + z2.norm_sqr();
    let g_sq = s5.norm_sqr() + s2.norm_sqr();
    let e_cross = y[1] * y[6] + y[2] * y[7];
    let g_cross = y[3] * y[8] + y[4] * y[9];
    s += c_sec[0] + c_sec[1] * e_sq + c_sec[2] * g_sq + c_sec[3] * e_cross + c_sec[4] * g_cross;
    d_alpha += dc_sec[0] + dc_sec[1] * e_sq + dc_sec[2] * g_sq + dc_sec[3] * e_cross + dc_sec[4] * g_cross;
    let (c1, c2, c3, c4) = (c_sec[1], c_sec[2], c_sec[3], c_sec[4]);
    grad[0] += 2.0 * c1 * y[1] + c3 * y[6];
    grad[1] += 2.0 * c1 * y[2] + c3 * y[7];
    grad[2] += 2.0 * c2 * y[3] + c4 * y[8];
    grad[3] += 2.0 * c2 * y[4] + c4 * y[9];
    grad[4] += 2.0 * c1 * y[6] + c3 * y[1];
    grad[5] += 2.0 * c1 * y[7] + c3 * y[2];
    grad[6] += 2.0 * c2 * y[8] + c4 * y[3];
    grad[7] += 2.0 * c2 * y[9] + c4 * y[4];

    Bracket { s, grad, d_psi, d_alpha }
}

/// Oblateness value and partials (r, r_a, r_k, r_h, r_q, r_p) for one
/// satellite with elements (a, k, h, q, p).
fn oblateness_partials(x: &[f64], gm: f64, planet: &PlanetModel) -> [f64; 6] {
    let (a, k, h, q, p) = (x[0], x[1], x[2], x[3], x[4]);
    let r2 = planet.radius_ref * planet.radius_ref;
    let r4 = r2 * r2;
    let j2 = planet.j2;
    // (GM/2a)·B = (GM/2)(c2 a⁻³ + c4 a⁻⁵)
    let ce = (1.5 * j2 * r2, (-9.0 / 8.0 * j2 * j2 - 15.0 / 4.0 * planet.j4) * r4);
    let ci = (1.5 * j2 * r2, (-27.0 / 8.0 * j2 * j2 - 15.0 / 4.0 * planet.j4) * r4);
    let (a3, a5) = (a.powi(-3), a.powi(-5));
    let pe = 0.5 * gm * (ce.0 * a3 + ce.1 * a5);
    let pi = 0.5 * gm * (ci.0 * a3 + ci.1 * a5);
    let dpe = 0.5 * gm * (-3.0 * ce.0 * a3 / a - 5.0 * ce.1 * a5 / a);
    let dpi = 0.5 * gm * (-3.0 * ci.0 * a3 / a - 5.0 * ci.1 * a5 / a);
    let e2 = k * k + h * h;
    let g2 = q * q + p * p;
    // sin²I = 4γ²(1 − γ²)
    let sin2 = 4.0 * g2 * (1.0 - g2);
    let dsin2_dg2 = 4.0 * (1.0 - 2.0 * g2);
    [
        pe * e2 - pi * sin2,
        dpe * e2 - dpi * sin2,
        2.0 * pe * k,
        2.0 * pe * h,
        -pi * dsin2_dg2 * 2.0 * q,
        -pi * dsin2_dg2 * 2.0 * p,
    ]
}

/// R^L = R^R + R^S + R^A for both satellites and all partials, with the
/// Laplace coefficients taken from `table` (Taylor-shifted to the current α).
pub fn perturbation_and_partials(y: &[f64; 11], k: &PairConstants, table: &LaplaceTable) -> Result<Partials> {
    let (a5, a2) = (y[0], y[5]);
    let alpha = a5 / a2;
    table.check(alpha)?;
    let vals = table.at(alpha);
    let b = bracket(y, alpha, &vals);

    let k5 = k.gm_outer / a2;
    let k2 = k.gm_inner / a2;
    let o5 = oblateness_partials(&y[0..5], k.gm_planet, &k.planet);
    let o2 = oblateness_partials(&y[5..10], k.gm_planet, &k.planet);

    let inner = SatPartials {
        r: k5 * b.s + o5[0],
        r_a: k5 * b.d_alpha / a2 + o5[1],
        r_k: k5 * b.grad[0] + o5[2],
        r_h: k5 * b.grad[1] + o5[3],
        r_q: k5 * b.grad[2] + o5[4],
        r_p: k5 * b.grad[3] + o5[5],
        r_lambda: -k5 * b.d_psi,
    };
    let outer = SatPartials {
        r: k2 * b.s + o2[0],
        r_a: -k2 * b.s / a2 - k2 * b.d_alpha * alpha / a2 + o2[1],
        r_k: k2 * b.grad[4] + o2[2],
        r_h: k2 * b.grad[5] + o2[3],
        r_q: k2 * b.grad[6] + o2[4],
        r_p: k2 * b.grad[7] + o2[5],
        r_lambda: 3.0 * k2 * b.d_psi,
    };
    Ok(Partials { inner, outer })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::gm_per_year;
    use crate::dynamics::laplace::laplace_quadrature;
    use crate::dynamics::laplace::Order;
    use crate::model::BodyPhysical;
    use proptest::prelude::*;

    fn constants() -> PairConstants {
        let u = PlanetModel::uranus();
        PairConstants {
            planet: u,
            gm_planet: gm_per_year(u.gm),
            gm_inner: gm_per_year(BodyPhysical::miranda().gm),
            gm_outer: gm_per_year(BodyPhysical::umbriel().gm),
        }
    }

    #[test]
    fn indirect_coefficients_agree_at_commensurability() {
        assert!((indirect_inner() - indirect_outer()).abs() < 1e-15);
        assert_eq!(indirect_terms(0.0, 1.0, 2.0, 3.0, true), 0.0);
        // argument = π/2
        assert!(indirect_terms(0.1, std::f64::consts::FRAC_PI_2, 0.0, 0.0, true).abs() < 1e-17);
        let ratio = indirect_terms(0.1, 0.3, 0.1, 0.2, true) / indirect_terms(0.1, 0.3, 0.1, 0.2, false);
        assert!((ratio - 9.0).abs() < 1e-12);
    }

    #[test]
    fn kernels_vanish_with_factors() {
        let f = resonant_coeffs(0.4883, 0.01, 0.02, 0.0, 0.03).unwrap();
        assert_eq!((f[0], f[1]), (0.0, 0.0));
        let f = resonant_coeffs(0.4883, 0.0, 0.02, 0.01, 0.03).unwrap();
        assert_eq!((f[4], f[5]), (0.0, 0.0));
    }

    #[test]
    fn kernels_against_quadrature() {
        let alpha: f64 = 0.4883;
        let q = |s, j, o| laplace_quadrature(s, j, alpha, o).unwrap();
        let b32_2 = q(1.5, 2, Order::Value);
        let op = |c0: f64, s, j| {
            c0 * q(s, j, Order::Value) + 10.0 * alpha * q(s, j, Order::First) + alpha * alpha * q(s, j, Order::Second)
        };
        let want = [
            0.5 * alpha * b32_2,
            -alpha * b32_2,
            0.5 * alpha * b32_2,
            op(17.0, 0.5, 1) / 8.0,
            -op(20.0, 0.5, 2) / 4.0,
            op(21.0, 0.5, 3) / 8.0,
        ];
        let got = resonant_kernels(alpha).unwrap();
        for k in 0..6 {
            assert!((got[k] - want[k]).abs() < 1e-9 * want[k].abs(), "A{}: {} vs {}", k + 1, got[k], want[k]);
        }
        let c = secular_coeffs(alpha).unwrap();
        let b12_0 = q(0.5, 0, Order::Value);
        let c1 = (2.0 * alpha * q(0.5, 0, Order::First) + alpha * alpha * q(0.5, 0, Order::Second)) / 8.0;
        let c3 = (2.0 * q(0.5, 1, Order::Value)
            - 2.0 * alpha * q(0.5, 1, Order::First)
            - alpha * alpha * q(0.5, 1, Order::Second))
            / 4.0;
        let b32_1 = q(1.5, 1, Order::Value);
        let want = [0.5 * b12_0, c1, -0.5 * alpha * b32_1, c3, alpha * b32_1];
        for k in 0..5 {
            assert!((c[k] - want[k]).abs() < 1e-9 * want[k].abs(), "C{k}");
        }
    }

    #[test]
    fn secular_identities() {
        let c = secular_coeffs(1e-9).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-12);
        for alpha in [0.2, 0.4883, 0.7] {
            let c = secular_coeffs(alpha).unwrap();
            assert!((c[4] + 2.0 * c[2]).abs() < 1e-15 * c[4].abs());
        }
    }

    #[test]
    fn kernel_alpha_derivatives_match_fd() {
        let h = 1e-6;
        for alpha in [0.3, 0.4883, 0.6] {
            let (_, da) = resonant_kernels_from(alpha, &required_vals(alpha).unwrap());
            let (_, dc) = secular_coeffs_from(alpha, &required_vals(alpha).unwrap());
            let ap = resonant_kernels(alpha + h).unwrap();
            let am = resonant_kernels(alpha - h).unwrap();
            let cp = secular_coeffs(alpha + h).unwrap();
            let cm = secular_coeffs(alpha - h).unwrap();
            for k in 0..6 {
                let fd = (ap[k] - am[k]) / (2.0 * h);
                assert!((da[k] - fd).abs() < 1e-7 * fd.abs().max(1.0));
            }
            for k in 0..5 {
                let fd = (cp[k] - cm[k]) / (2.0 * h);
                assert!((dc[k] - fd).abs() < 1e-7 * fd.abs().max(1.0));
            }
        }
    }

    #[test]
    fn oblateness_cases() {
        let u = PlanetModel::uranus();
        assert_eq!(oblateness_term(129_900.0, 0.0, 0.0, &u), 0.0);
        let flat = PlanetModel { j2: 0.0, j4: 0.0, ..u };
        assert_eq!(oblateness_term(129_900.0, 0.1, 0.1, &flat), 0.0);
        // Miranda J2000 by direct evaluation
        let (a, e, inc) = (129_900.0_f64, 0.0013_f64, 4.338_f64.to_radians());
        let x = 26_200.0 / a;
        let j2 = 3341.29e-6;
        let j4 = -30.44e-6;
        let want = u.gm / (2.0 * a)
            * ((1.5 * j2 * x * x - 9.0 / 8.0 * j2 * j2 * x.powi(4) - 3.75 * j4 * x.powi(4)) * e * e
                - (1.5 * j2 * x * x - 27.0 / 8.0 * j2 * j2 * x.powi(4) - 3.75 * j4 * x.powi(4)) * inc.sin().powi(2));
        assert!((oblateness_term(a, e, inc, &u) / want - 1.0).abs() < 1e-13);
        assert!(want < 0.0);
    }

    fn state(e: [f64; 2], g: [f64; 2], angles: [f64; 5]) -> [f64; 11] {
        [
            127_850.0,
            e[0] * angles[0].cos(),
            e[0] * angles[0].sin(),
            g[0] * angles[1].cos(),
            g[0] * angles[1].sin(),
            266_000.0,
            e[1] * angles[2].cos(),
            e[1] * angles[2].sin(),
            g[1] * angles[3].cos(),
            g[1] * angles[3].sin(),
            angles[4],
        ]
    }

    #[test]
    fn circular_planar_has_no_linear_partials() {
        let k = constants();
        let y = state([0.0; 2], [0.0; 2], [0.3, 1.0, 2.0, 3.0, 0.7]);
        let t = LaplaceTable::new(y[0] / y[5], 1e-6).unwrap();
        let p = perturbation_and_partials(&y, &k, &t).unwrap();
        for s in [p.inner, p.outer] {
            assert_eq!((s.r_k, s.r_h, s.r_q, s.r_p, s.r_lambda), (0.0, 0.0, 0.0, 0.0, 0.0));
        }
        let c0 = secular_coeffs(y[0] / y[5]).unwrap()[0];
        assert!((p.inner.r / (k.gm_outer / y[5] * c0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn stale_table_is_refused() {
        let k = constants();
        let y = state([0.01; 2], [0.02; 2], [0.3, 1.0, 2.0, 3.0, 0.7]);
        let t = LaplaceTable::new(0.45, 1e-6).unwrap();
        assert!(perturbation_and_partials(&y, &k, &t).is_err());
    }

    /// Each satellite's disturbing function as a plain function of the
    /// 11-vector and its own longitude shift.
    fn r_of(y: &[f64; 11], k: &PairConstants, inner: bool, dlambda: f64) -> f64 {
        let mut z = *y;
        // λ₅ enters as −Ψ, λ₂ as +3Ψ
        z[10] += if inner { -dlambda } else { 3.0 * dlambda };
        let t = LaplaceTable::new(z[0] / z[5], 1e-6).unwrap();
        let p = perturbation_and_partials(&z, k, &t).unwrap();
        if inner {
            p.inner.r
        } else {
            p.outer.r
        }
    }

    /// Five-point central difference.
    fn fd5(f: impl Fn(f64) -> f64, h: f64) -> f64 {
        (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h)
    }

    fn check_fd(y: [f64; 11]) -> std::result::Result<(), String> {
        let k = constants();
        let t = LaplaceTable::new(y[0] / y[5], 1e-6).unwrap();
        let p = perturbation_and_partials(&y, &k, &t).unwrap();
        for (inner, sp, base) in [(true, p.inner, 0usize), (false, p.outer, 5usize)] {
            let an = [sp.r_a, sp.r_k, sp.r_h, sp.r_q, sp.r_p];
            for (i, &a) in an.iter().enumerate() {
                let h = if i == 0 { 10.0 } else { 1e-4 };
                let fd = fd5(
                    |d| {
                        let mut z = y;
                        z[base + i] += d;
                        r_of(&z, &k, inner, 0.0)
                    },
                    h,
                );
                // rounding floor of the difference quotient
                let floor = 1e-10 * sp.r.abs() / if i == 0 { y[base] } else { 1.0 };
                if (a - fd).abs() > 1e-8 * a.abs().max(fd.abs()) + floor {
                    return Err(format!("inner={inner} var={i}: {a} vs {fd}"));
                }
            }
            let fd = fd5(|d| r_of(&y, &k, inner, d), 2e-3);
            if (sp.r_lambda - fd).abs() > 1e-8 * sp.r_lambda.abs().max(fd.abs()) + 1e-10 * sp.r.abs() {
                return Err(format!("inner={inner} lambda: {} vs {fd}", sp.r_lambda));
            }
        }
        Ok(())
    }

    #[test]
    fn partials_match_fd_at_nominal_state() {
        let y = state([0.02, 0.01], [0.04, 0.002], [0.3, 1.0, 2.0, 3.0, 0.7]);
        check_fd(y).unwrap();
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn partials_match_fd(
            e5 in 0.0f64..0.2, e2 in 0.0f64..0.2, g5 in 0.0f64..0.2, g2 in 0.0f64..0.2,
            a0 in 0.0f64..6.3, a1 in 0.0f64..6.3, a2 in 0.0f64..6.3, a3 in 0.0f64..6.3, psi in 0.0f64..6.3,
        ) {
            let y = state([e5, e2], [g5, g2], [a0, a1, a2, a3, psi]);
            prop_assert!(check_fd(y).is_ok(), "{:?}", check_fd(y));
        }
    }
}
