//! The two improper integrals whose difference is `P_m(z(θ))`, their
//! Watson-type rewrite, and the bounds and asymptotics built on them.
//!
//! For `α ∈ (0, 1)`, `θ ∈ (2π/3, π)` and the roots `x`, `y = r e^{iθ}` of
//! `1 + t + z t³`:
//!
//! ```text
//! A_m(t) = 1 / (t^α (t² + 3xt + |x-y|²)^α (x+t)^(m+1))
//! B_m(t) = 1 / ((x-y-it)^α (t² + 2r sinθ t)^α (y+it)^(m+1))
//! P_m(z) = sin(απ) / (π (-z)^α) · (∫A - 2 Im ∫B)
//! ∫B     = (-i)^(1-α) / ((x-y)^α (2r sinθ)^α y^(m+α)) · ∫ g(u) u^(-α) e^(-mu) du
//! ```
//!
//! Both integrals scale like `x^(-m)` and `r^(-m)` and leave the `f64`
//! range well before `m = 200` near `θ = 2π/3`, so every integral is
//! computed as a [`ScaledIntegral`]: a complex log-prefactor times an
//! order-one quadrature. The plain `integrate_*` functions multiply the two
//! and can overflow; comparisons in this module are all done in logs.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cubic::{roots_from_theta, theta_from_z, CubicRoots, THETA_MAX};
use crate::error::{check_alpha_unit, Error, Result};
use crate::gamma::gamma_fn;
use crate::quad::{exp_sinh, IntegralResult, QuadratureSpec};
use crate::series::ScaledValue;

/// Largest `m` accepted by the direct `∫B` path; beyond it the factor
/// `(y+it)^(-m-1)` oscillates too fast for the quadrature.
pub const DIRECT_B_MAX_M: usize = 30;

/// `exp(log_prefactor) · inner`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledIntegral {
    pub log_prefactor: Complex64,
    pub inner: IntegralResult,
}

impl ScaledIntegral {
    /// May overflow for large `m`.
    pub fn value(&self) -> Complex64 {
        self.log_prefactor.exp() * self.inner.value
    }

    pub fn err_estimate(&self) -> f64 {
        self.log_prefactor.re.exp() * self.inner.err_estimate
    }

    /// `log_prefactor + Log(inner)`. The imaginary part is a continuous
    /// argument whenever the prefactor phase is.
    pub fn log_value(&self) -> Complex64 {
        self.log_prefactor + self.inner.value.ln()
    }

    pub fn converged(&self) -> bool {
        self.inner.converged
    }

    fn into_result(self) -> IntegralResult {
        IntegralResult {
            value: self.value(),
            err_estimate: self.err_estimate(),
            ..self.inner
        }
    }
}

fn setup(theta: f64, alpha: f64) -> Result<CubicRoots> {
    check_alpha_unit(alpha)?;
    roots_from_theta(theta)
}

fn check_t(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("integration variable must be positive, got {t}")))
    }
}

fn order_scale(m: usize) -> f64 {
    m.max(1) as f64
}

pub fn integrand_a(t: f64, theta: f64, alpha: f64, m: usize) -> Result<f64> {
    check_t(t)?;
    let g = setup(theta, alpha)?;
    let q = t * t + 3.0 * g.x * t + g.dist_sq();
    let log = -alpha * t.ln() - alpha * q.ln() - (m as f64 + 1.0) * (g.x + t).ln();
    Ok(log.exp())
}

/// All fractional powers on the principal branch.
pub fn integrand_b(t: f64, theta: f64, alpha: f64, m: usize) -> Result<Complex64> {
    check_t(t)?;
    let g = setup(theta, alpha)?;
    let y = g.y();
    let i = Complex64::i();
    let log = -alpha * (g.x - y - i * t).ln()
        - alpha * (t * t + 2.0 * g.r * theta.sin() * t).ln()
        - (m as f64 + 1.0) * (y + i * t).ln();
    Ok(log.exp())
}

/// `ln(e^u - 1)` without overflow.
fn ln_expm1(u: f64) -> f64 {
    if u > 30.0 {
        u + (-(-u).exp()).ln_1p()
    } else {
        u.exp_m1().ln()
    }
}

/// Principal `Log(1 + c E)` for `E = e^u - 1 > 0`, stable for huge `E`.
fn log_one_plus(c: Complex64, u: f64) -> Complex64 {
    if u > 20.0 {
        // E > 0 does not change the argument, so the branch is preserved.
        let ln_e = ln_expm1(u);
        ln_e + (c + (-ln_e).exp()).ln()
    } else {
        (1.0 + c * u.exp_m1()).ln()
    }
}

/// `c₂ = e^{iθ} / (2cosθ + e^{iθ})` and `c₃ = -i e^{iθ} / (2 sinθ)`.
fn g_constants(theta: f64) -> (Complex64, Complex64) {
    let e = Complex64::from_polar(1.0, theta);
    let c2 = e / (2.0 * theta.cos() + e);
    let c3 = -Complex64::i() * e / (2.0 * theta.sin());
    (c2, c3)
}

fn log_g(u: f64, alpha: f64, c2: Complex64, c3: Complex64) -> Complex64 {
    let l1 = ln_expm1(u) - u.ln();
    let l1 = if u < 1e-8 { 0.5 * u } else { l1 };
    -alpha * (l1 + log_one_plus(c2, u) + log_one_plus(c3, u))
}

/// `g(u, θ) = ((e^u - 1)/u)^(-α) (1 + c₂(e^u - 1))^(-α) (1 + c₃(e^u - 1))^(-α)`.
pub fn integrand_g(u: f64, theta: f64, alpha: f64) -> Result<Complex64> {
    check_t(u)?;
    setup(theta, alpha)?;
    let (c2, c3) = g_constants(theta);
    Ok(log_g(u, alpha, c2, c3).exp())
}

/// `∫₀^∞ A_m` with `t = x σ / M`, `M = max(m, 1)`:
/// `x^(-m-α) M^(α-1) ∫ σ^(-α) Q(xσ/M)^(-α) (1 + σ/M)^(-m-1) dσ`.
pub fn integrate_a_scaled(theta: f64, alpha: f64, m: usize, spec: &QuadratureSpec) -> Result<ScaledIntegral> {
    let g = setup(theta, alpha)?;
    let big_m = order_scale(m);
    let (x, d2) = (g.x, g.dist_sq());
    let mf = m as f64;
    let f = |s: f64| {
        let t = x * s / big_m;
        let log = -alpha * s.ln() - alpha * (t * t + 3.0 * x * t + d2).ln() - (mf + 1.0) * (s / big_m).ln_1p();
        Complex64::new(log.exp(), 0.0)
    };
    let inner = exp_sinh(f, 1.0, spec)?;
    let log_prefactor = -(mf + alpha) * x.ln() + (alpha - 1.0) * big_m.ln();
    Ok(ScaledIntegral { log_prefactor: Complex64::new(log_prefactor, 0.0), inner })
}

pub fn integrate_a(theta: f64, alpha: f64, m: usize, spec: &QuadratureSpec) -> Result<IntegralResult> {
    integrate_a_scaled(theta, alpha, m, spec).map(ScaledIntegral::into_result)
}

/// `∫₀^∞ B_m` with `t = r s`:
/// `r^(-m-3α) ∫ (x/r - e^{iθ} - is)^(-α) (s² + 2 sinθ s)^(-α) (e^{iθ} + is)^(-m-1) ds`.
pub fn integrate_b_direct_scaled(
    theta: f64,
    alpha: f64,
    m: usize,
    spec: &QuadratureSpec,
) -> Result<ScaledIntegral> {
    let g = setup(theta, alpha)?;
    if m > DIRECT_B_MAX_M {
        return Err(Error::InvalidArgument(format!(
            "direct evaluation of the B integral is limited to m <= {DIRECT_B_MAX_M}, got {m}"
        )));
    }
    let e = Complex64::from_polar(1.0, theta);
    let shift = g.x / g.r - e;
    let sin = theta.sin();
    let mf = m as f64;
    let i = Complex64::i();
    let f = |s: f64| {
        let log = -alpha * (shift - i * s).ln() - alpha * (s * (s + 2.0 * sin)).ln() - (mf + 1.0) * (e + i * s).ln();
        log.exp()
    };
    let scale = 1.0 / ((mf + 1.0) * sin).max(1.0);
    let inner = exp_sinh(f, scale, spec)?;
    let log_prefactor = -(mf + 3.0 * alpha) * g.r.ln();
    Ok(ScaledIntegral { log_prefactor: Complex64::new(log_prefactor, 0.0), inner })
}

pub fn integrate_b_direct(theta: f64, alpha: f64, m: usize, spec: &QuadratureSpec) -> Result<IntegralResult> {
    integrate_b_direct_scaled(theta, alpha, m, spec).map(ScaledIntegral::into_result)
}

/// `∫₀^∞ g(w/M) w^(-α) e^(-(m/M) w) dw` with `M = max(m, 1)`, which is
/// `M^(1-α) ∫ g(u) u^(-α) e^(-mu) du`.
fn watson_inner_scaled(g: &CubicRoots, alpha: f64, m: usize, spec: &QuadratureSpec) -> Result<IntegralResult> {
    let big_m = order_scale(m);
    let (c2, c3) = g_constants(g.theta);
    let rate = m as f64 / big_m;
    let f = |w: f64| (log_g(w / big_m, alpha, c2, c3) - alpha * w.ln() - rate * w).exp();
    // g turns over near u ~ 2 sinθ, which is narrow as θ → π
    let scale = (big_m * g.theta.sin()).min(1.0);
    exp_sinh(f, scale, spec)
}

/// Log of `(-i)^(1-α) / ((x-y)^α (2r sinθ)^α y^(m+α))` with `y^(m+α)` taken
/// as `exp((m+α)(ln r + iθ))`, so the phase is continuous in `θ`.
fn watson_log_prefactor(g: &CubicRoots, alpha: f64, m: usize) -> Complex64 {
    let mf = m as f64;
    let two_r_sin = 2.0 * g.r * g.theta.sin();
    Complex64::new(0.0, -FRAC_PI_2 * (1.0 - alpha))
        - alpha * (g.x - g.y()).ln()
        - alpha * two_r_sin.ln()
        - (mf + alpha) * Complex64::new(g.r.ln(), g.theta)
}

pub fn integrate_b_watson_scaled(
    theta: f64,
    alpha: f64,
    m: usize,
    spec: &QuadratureSpec,
) -> Result<ScaledIntegral> {
    let g = setup(theta, alpha)?;
    let inner = watson_inner_scaled(&g, alpha, m, spec)?;
    let log_prefactor = watson_log_prefactor(&g, alpha, m) + (alpha - 1.0) * order_scale(m).ln();
    Ok(ScaledIntegral { log_prefactor, inner })
}

pub fn integrate_b_watson(theta: f64, alpha: f64, m: usize, spec: &QuadratureSpec) -> Result<IntegralResult> {
    integrate_b_watson_scaled(theta, alpha, m, spec).map(ScaledIntegral::into_result)
}

/// `P_m(z)` rebuilt from the two integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub z: f64,
    pub theta: f64,
    /// `±inf` when out of `f64` range; `scaled` always holds the value.
    pub value: f64,
    pub scaled: ScaledValue,
    /// Absolute error estimate propagated from both quadratures, relative
    /// to `exp(scaled.log_magnitude)`.
    pub rel_err_estimate: f64,
    pub converged: bool,
}

/// `P_m^(α)(z) = sin(απ)/(π(-z)^α) · (∫A - 2 Im ∫B)` for `α ∈ (0, 1)` and
/// `z < -4/27`, with `∫B` from the Watson form.
///
/// Values of larger `α` are reachable through the derivative identity; this
/// function refuses them instead of extrapolating.
pub fn reconstruct_pm(z: f64, alpha: f64, m: usize, spec: &QuadratureSpec) -> Result<Reconstruction> {
    check_alpha_unit(alpha)?;
    let theta = theta_from_z(z)?;
    let a = integrate_a_scaled(theta, alpha, m, spec)?;
    let b = integrate_b_watson_scaled(theta, alpha, m, spec)?;
    let shift = a.log_prefactor.re.max(b.log_prefactor.re);
    let fa = (a.log_prefactor.re - shift).exp();
    let fb = (b.log_prefactor - shift).exp();
    let core = fa * a.inner.value.re - 2.0 * (fb * b.inner.value).im;
    let err = fa * a.inner.err_estimate + 2.0 * fb.norm() * b.inner.err_estimate;
    let log_front = (alpha * PI).sin().ln() - PI.ln() - alpha * (-z).ln() + shift;
    let scaled = match ScaledValue::from_f64(core) {
        ScaledValue { sign: 0, .. } => ScaledValue::ZERO,
        v => ScaledValue { sign: v.sign, log_magnitude: v.log_magnitude + log_front },
    };
    Ok(Reconstruction {
        z,
        theta,
        value: scaled.value(),
        scaled,
        rel_err_estimate: err / core.abs(),
        converged: a.converged() && b.converged(),
    })
}

fn check_order(m: usize) -> Result<()> {
    if m >= 1 {
        Ok(())
    } else {
        Err(Error::OrderTooSmall { min: 1, got: m })
    }
}

/// `ln Γ(1-α) - 2α ln|x-y| - (m+α) ln x - (1-α) ln m`.
pub fn log_upper_bound_a(theta: f64, alpha: f64, m: usize) -> Result<f64> {
    let g = setup(theta, alpha)?;
    check_order(m)?;
    let mf = m as f64;
    Ok(gamma_fn(1.0 - alpha)?.ln() - alpha * g.dist_sq().ln() - (mf + alpha) * g.x.ln() - (1.0 - alpha) * mf.ln())
}

/// `Γ(1-α) / (|x-y|^(2α) x^(m+α) m^(1-α))`; strictly above `∫A` for `m >= 1`.
pub fn upper_bound_a(theta: f64, alpha: f64, m: usize) -> Result<f64> {
    log_upper_bound_a(theta, alpha, m).map(f64::exp)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticRatio {
    pub ratio: f64,
    pub err_estimate: f64,
    pub converged: bool,
}

/// Region where the large-`m` asymptotics hold uniformly: `θ <= π - 0.1`.
pub const ASYMPTOTIC_THETA_MAX: f64 = THETA_MAX - 0.1;

/// `|∫ g(u,θ) u^(-α) e^(-mu) du| · m^(1-α) / Γ(1-α)`, which tends to 1.
pub fn asymptotic_ratio(theta: f64, alpha: f64, m: usize, spec: &QuadratureSpec) -> Result<AsymptoticRatio> {
    let g = setup(theta, alpha)?;
    check_order(m)?;
    if theta > ASYMPTOTIC_THETA_MAX {
        return Err(Error::InvalidArgument(format!(
            "theta = {theta} is beyond the uniformity region theta <= pi - 0.1"
        )));
    }
    let inner = watson_inner_scaled(&g, alpha, m, spec)?;
    let gamma = gamma_fn(1.0 - alpha)?;
    Ok(AsymptoticRatio {
        ratio: inner.value.norm() / gamma,
        err_estimate: inner.err_estimate / gamma,
        converged: inner.converged,
    })
}

/// Comparison of `∫A` with `|∫B|` at one `(θ, α, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dominance {
    pub theta: f64,
    /// `∫A < |∫B|`, decided in logs.
    pub holds: bool,
    /// `|∫B| - ∫A`; infinite when the integrals leave the `f64` range.
    pub margin: f64,
    pub log_a: f64,
    pub log_abs_b: f64,
    pub converged: bool,
}

pub fn dominance_check(theta: f64, alpha: f64, m: usize, spec: &QuadratureSpec) -> Result<Dominance> {
    let a = integrate_a_scaled(theta, alpha, m, spec)?;
    let b = integrate_b_watson_scaled(theta, alpha, m, spec)?;
    let log_a = a.log_value().re;
    let log_abs_b = b.log_value().re;
    Ok(Dominance {
        theta,
        holds: log_a < log_abs_b,
        margin: log_abs_b.exp() * -(log_a - log_abs_b).exp_m1(),
        log_a,
        log_abs_b,
        converged: a.converged() && b.converged(),
    })
}

/// Smallest `m0 <= m_max` such that dominance holds at `θ` for every
/// `m ∈ [m0, m_max]`, or `None` if it fails at `m_max` itself.
pub fn empirical_dominance_threshold(
    theta: f64,
    alpha: f64,
    m_max: usize,
    spec: &QuadratureSpec,
) -> Result<Option<usize>> {
    let mut threshold = None;
    for m in (0..=m_max).rev() {
        if !dominance_check(theta, alpha, m, spec)?.holds {
            break;
        }
        threshold = Some(m);
    }
    Ok(threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{eval_recurrence, pm_coeffs};

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn integrand_a_example() {
        let v = integrand_a(1.0, 0.75 * PI, 0.5, 0).unwrap();
        assert!((v - 1.0 / (2.0 * 6.5f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn integrand_a_endpoint_behaviour() {
        let (theta, alpha, m) = (0.8 * PI, 0.3, 4);
        let g = roots_from_theta(theta).unwrap();
        let t: f64 = 1e-12;
        let lead = f64::powf(t, -alpha) * g.dist_sq().powf(-alpha) * g.x.powi(-(m as i32) - 1);
        assert!((integrand_a(t, theta, alpha, m).unwrap() / lead - 1.0).abs() < 1e-9);
    }

    #[test]
    fn integrand_b_endpoint_modulus() {
        let (theta, alpha, m) = (0.8 * PI, 0.6, 3);
        let g = roots_from_theta(theta).unwrap();
        let t: f64 = 1e-12;
        let lead = f64::powf(t, -alpha)
            * (2.0 * g.r * theta.sin()).powf(-alpha)
            * g.dist().powf(-alpha)
            * g.r.powi(-(m as i32) - 1);
        assert!((integrand_b(t, theta, alpha, m).unwrap().norm() / lead - 1.0).abs() < 1e-9);
    }

    #[test]
    fn factor_arguments_stay_off_the_cut() {
        for k in 1..40 {
            let theta = 2.0 * PI / 3.0 + (PI / 3.0) * k as f64 / 40.0;
            let g = roots_from_theta(theta).unwrap();
            let (c2, c3) = g_constants(theta);
            let mut prev: Option<[f64; 3]> = None;
            for j in -400..400 {
                let t = 10f64.powf(j as f64 / 40.0);
                let args = [
                    (g.x - g.y() - Complex64::i() * t).arg(),
                    log_one_plus(c2, t).im,
                    log_one_plus(c3, t).im,
                ];
                for a in args {
                    assert!(a.abs() < PI - 0.1, "theta={theta} t={t}");
                }
                if let Some(p) = prev {
                    for (a, b) in args.iter().zip(p) {
                        assert!((a - b).abs() < 0.5);
                    }
                }
                prev = Some(args);
            }
        }
    }

    #[test]
    fn g_limits() {
        for &theta in &[0.7 * PI, 0.75 * PI, 0.9 * PI] {
            let v = integrand_g(1e-14, theta, 0.5).unwrap();
            assert!((v - 1.0).norm() < 1e-12);
        }
        for k in 1..=100 {
            let u = k as f64 / 100.0;
            assert!(integrand_g(u, PI - 0.1, 0.7).unwrap().norm() <= 1.0);
        }
    }

    #[test]
    fn g_matches_direct_formula() {
        let (u, theta, alpha) = (0.1f64, 5.0 * PI / 6.0, 0.5);
        let e = Complex64::from_polar(1.0, theta);
        let em1 = u.exp_m1();
        let f1 = Complex64::new(em1 / u, 0.0).powf(alpha);
        let f2 = (1.0 + e * em1 / (2.0 * theta.cos() + e)).powf(alpha);
        let f3 = (1.0 - Complex64::i() * e * em1 / (2.0 * theta.sin())).powf(alpha);
        let direct = 1.0 / (f1 * f2 * f3);
        assert!((integrand_g(u, theta, alpha).unwrap() - direct).norm() < 1e-14);
        // far tail stays finite and tiny
        let far = integrand_g(800.0, theta, alpha).unwrap();
        assert!(far.norm() < 1e-300 || far.norm().is_finite());
    }

    #[test]
    fn integrate_a_converges_tightly() {
        let r = integrate_a(0.75 * PI, 0.5, 5, &spec()).unwrap();
        assert!(r.converged);
        assert_eq!(r.value.im, 0.0);
        assert!(r.value.re > 0.0);
        assert!(r.err_estimate <= 1e-10 * r.value.re);
    }

    #[test]
    fn integrate_a_matches_unscaled_quadrature() {
        let (theta, alpha, m) = (0.8 * PI, 0.4, 7);
        let plain = exp_sinh(|t| Complex64::new(integrand_a(t, theta, alpha, m).unwrap(), 0.0), 1.0, &spec()).unwrap();
        let scaled = integrate_a(theta, alpha, m, &spec()).unwrap();
        assert!(rel(scaled.value, plain.value) < 1e-10);
    }

    #[test]
    fn integrate_a_beta_scaling_stays_bounded() {
        let theta = 0.75 * PI;
        for m in [10, 50, 200, 800] {
            let a = integrate_a_scaled(theta, 0.5, m, &spec()).unwrap();
            let g = roots_from_theta(theta).unwrap();
            let normalised = a.log_value().re + (m as f64 + 0.5) * g.x.ln();
            assert!(normalised < 0.0, "m={m}");
        }
    }

    #[test]
    fn direct_b_matches_unscaled_quadrature() {
        let (theta, alpha, m) = (0.75 * PI, 0.5, 0);
        let plain = exp_sinh(|t| integrand_b(t, theta, alpha, m).unwrap(), 1.0, &spec()).unwrap();
        let scaled = integrate_b_direct(theta, alpha, m, &spec()).unwrap();
        assert!(scaled.converged);
        assert!(scaled.value.norm() > 0.0);
        assert!(rel(scaled.value, plain.value) < 1e-9);
    }

    #[test]
    fn watson_equals_direct() {
        for &theta in &[13.0 * PI / 18.0, 0.75 * PI, 5.0 * PI / 6.0] {
            for &alpha in &[0.25, 0.5, 0.75] {
                for m in [0, 1, 4, 9, 15] {
                    let d = integrate_b_direct(theta, alpha, m, &spec()).unwrap();
                    let w = integrate_b_watson(theta, alpha, m, &spec()).unwrap();
                    assert!(rel(w.value, d.value) < 1e-8, "theta={theta} alpha={alpha} m={m}");
                }
            }
        }
    }

    #[test]
    fn direct_b_refuses_large_m() {
        assert!(integrate_b_direct(0.75 * PI, 0.5, 31, &spec()).is_err());
    }

    #[test]
    fn conjugate_symmetry_of_b() {
        // conj(B_m(t, θ)) is the same expression built from conj(y)
        let (theta, alpha, m) = (0.8 * PI, 0.35, 6);
        let g = roots_from_theta(theta).unwrap();
        let yc = g.y().conj();
        let i = Complex64::i();
        for k in 1..20 {
            let t = k as f64 * 0.37;
            let mirrored = 1.0
                / ((g.x - yc + i * t).powf(alpha)
                    * Complex64::new(t * t + 2.0 * g.r * theta.sin() * t, 0.0).powf(alpha)
                    * (yc - i * t).powi(m as i32 + 1));
            assert!(rel(integrand_b(t, theta, alpha, m).unwrap().conj(), mirrored) < 1e-12);
        }
    }

    #[test]
    fn reconstruction_examples() {
        for &(alpha, z, m) in &[(0.5, -2.0, 5), (0.25, -10.0, 12), (0.9, -0.5, 25)] {
            let r = reconstruct_pm(z, alpha, m, &spec()).unwrap();
            let exact = pm_coeffs(alpha, m).unwrap().eval(z);
            assert!(r.converged);
            assert!(((r.value - exact) / exact).abs() < 1e-8, "alpha={alpha} z={z} m={m}");
        }
    }

    #[test]
    fn reconstruction_at_large_order_in_logs() {
        let (alpha, z, m) = (0.5, -3.0, 400);
        let r = reconstruct_pm(z, alpha, m, &spec()).unwrap();
        let v = eval_recurrence(alpha, m, z);
        assert_eq!(r.scaled.sign, v.sign);
        assert!((r.scaled.log_magnitude - v.log_magnitude).abs() < 1e-7);
    }

    #[test]
    fn reconstruction_refuses_alpha_outside_unit_interval() {
        for alpha in [1.0, 2.5, 0.0] {
            assert!(matches!(
                reconstruct_pm(-2.0, alpha, 5, &spec()),
                Err(Error::AlphaOutsideUnitInterval(_))
            ));
        }
        assert!(reconstruct_pm(-0.1, 0.5, 5, &spec()).is_err());
    }

    #[test]
    fn upper_bound_example_and_strictness() {
        let b = upper_bound_a(0.75 * PI, 0.5, 10).unwrap();
        assert!((b - PI.sqrt() / (2.5f64.sqrt() * 10f64.sqrt())).abs() < 1e-14);
        assert!((b - 0.354_49).abs() < 1e-5);
        assert!(upper_bound_a(0.75 * PI, 0.5, 0).is_err());
        for &theta in &[0.7 * PI, 0.8 * PI, 0.95 * PI] {
            for m in [1, 3, 20, 150] {
                let a = integrate_a_scaled(theta, 0.6, m, &spec()).unwrap();
                assert!(a.log_value().re < log_upper_bound_a(theta, 0.6, m).unwrap());
            }
        }
    }

    #[test]
    fn asymptotic_ratio_tends_to_one() {
        let mut last = f64::INFINITY;
        for m in [50, 100, 200, 400] {
            let r = asymptotic_ratio(5.0 * PI / 6.0, 0.5, m, &spec()).unwrap();
            assert!(r.converged);
            let gap = (r.ratio - 1.0).abs();
            assert!(gap < last);
            last = gap;
        }
        assert!(last < 0.05);
        assert!(asymptotic_ratio(PI - 0.05, 0.5, 100, &spec()).is_err());
    }

    #[test]
    fn dominance_at_large_order() {
        for k in 0..10 {
            let theta = 2.0 * PI / 3.0 + 0.01 + (PI / 3.0 - 0.02) * k as f64 / 9.0;
            let d = dominance_check(theta, 0.5, 200, &spec()).unwrap();
            assert!(d.holds && d.converged, "theta={theta}");
            assert!(d.margin > 0.0);
        }
    }

    #[test]
    fn dominance_margin_grows_with_order() {
        let theta = 0.8 * PI;
        let gaps: Vec<f64> = [10, 40, 160]
            .iter()
            .map(|&m| {
                let d = dominance_check(theta, 0.5, m, &spec()).unwrap();
                d.log_abs_b - d.log_a
            })
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn threshold_is_reported() {
        let t = empirical_dominance_threshold(0.8 * PI, 0.5, 30, &spec()).unwrap();
        assert!(matches!(t, Some(m0) if m0 <= 30));
    }
}
