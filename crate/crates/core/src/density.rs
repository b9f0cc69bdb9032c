//! Limiting distribution of the zeros of `P_m^(α)` as `m → ∞`.
//!
//! With `x` the real root of `1 + t + z t³`, the density on `(-∞, -4/27)`
//! is `-3x√(x+1) / (2πz(3+2x)√(3-x))` and the distribution function is
//! `F(z) = (3/π)(W(z) - 2π/3)`, where `W` inverts `z(θ)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cubic::{real_root_x, theta_from_z, z_of_theta, THETA_MIN, Z_CRITICAL};
use crate::error::{Error, Result};
use crate::quad::{exp_sinh, IntegralResult, QuadratureSpec};
use crate::roots::pm_real_roots;

fn density_from_x(x: f64, z: f64, three_minus_x: f64) -> f64 {
    -3.0 * x * (x + 1.0).sqrt() / (2.0 * PI * z * (3.0 + 2.0 * x) * three_minus_x.sqrt())
}

pub fn limiting_density(z: f64) -> Result<f64> {
    let x = real_root_x(z)?;
    Ok(density_from_x(x, z, 3.0 - x))
}

/// The density at `z = -4/27 - s` for `s > 0`, accurate as `s → 0` where
/// `z` itself no longer resolves the distance to `-4/27`.
///
/// Near the endpoint `x = 3 - e` with `e` the root in `(0, 3)` of
/// `3e - (4/3)e² + (4/27)e³ - s(3-e)³`, which is solved directly.
pub fn limiting_density_offset(s: f64) -> Result<f64> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::InvalidArgument(format!("offset must be positive, got {s}")));
    }
    let z = Z_CRITICAL - s;
    if s >= 1.0 {
        return limiting_density(z);
    }
    let f = |e: f64| e * (3.0 - e * (4.0 / 3.0 - e * 4.0 / 27.0)) - s * (3.0 - e).powi(3);
    let df = |e: f64| 3.0 - e * (8.0 / 3.0 - e * 4.0 / 9.0) + 3.0 * s * (3.0 - e).powi(2);
    // f(0) < 0 < f(3); Newton from 9s stays in the bracket or falls back to bisection
    let (mut lo, mut hi) = (0.0, 3.0);
    let mut e = (9.0 * s).min(1.5);
    for _ in 0..200 {
        let fe = f(e);
        if fe == 0.0 {
            break;
        }
        if fe < 0.0 {
            lo = e;
        } else {
            hi = e;
        }
        let next = e - fe / df(e);
        let next = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        if (next - e).abs() <= 1e-16 * e {
            e = next;
            break;
        }
        e = next;
    }
    Ok(density_from_x(3.0 - e, z, e))
}

/// `F(z) = (3/π)(W(z) - 2π/3)`.
pub fn limiting_cdf(z: f64) -> Result<f64> {
    Ok(3.0 / PI * (theta_from_z(z)? - THETA_MIN))
}

/// `∫_{-∞}^{-4/27}` of the density, by exp-sinh in the offset `s`.
pub fn density_normalization(spec: &QuadratureSpec) -> Result<IntegralResult> {
    let f = |s: f64| num_complex::Complex64::new(limiting_density_offset(s).unwrap_or(f64::NAN), 0.0);
    exp_sinh(f, 1.0, spec)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub alpha: f64,
    pub m: usize,
    /// Number of located zeros, which normalises the empirical distribution.
    pub root_count: usize,
    pub roots: Vec<f64>,
    pub z_grid: Vec<f64>,
    pub density: Vec<f64>,
    pub empirical_cdf: Vec<f64>,
    pub model_cdf: Vec<f64>,
    /// `sup |F_m - F|` over the jump points of the empirical distribution.
    pub ks_distance: f64,
    /// The root finder reported every zero real and below `-4/27`.
    pub roots_complete: bool,
}

/// Compares the located zeros of `P_m^(α)` with the limiting law.
///
/// `z_grid` holds `grid_size` points equally spaced in `θ`, so the curve is
/// sampled evenly in probability.
pub fn density_report(alpha: f64, m: usize, grid_size: usize) -> Result<DensityReport> {
    if grid_size < 2 {
        return Err(Error::InvalidArgument(format!("grid_size must be at least 2, got {grid_size}")));
    }
    let found = pm_real_roots(alpha, m)?;
    let roots = found.roots.clone();
    let n = roots.len();
    let mut ks_distance: f64 = 0.0;
    for (i, &z) in roots.iter().enumerate() {
        let f = limiting_cdf(z)?;
        let below = i as f64 / n as f64;
        let above = (i + 1) as f64 / n as f64;
        ks_distance = ks_distance.max((f - below).abs()).max((f - above).abs());
    }
    let z_grid: Vec<f64> = (0..grid_size)
        .map(|j| z_of_theta(THETA_MIN + (PI / 3.0) * (j as f64 + 0.5) / grid_size as f64))
        .collect();
    let density = z_grid.iter().map(|&z| limiting_density(z)).collect::<Result<Vec<_>>>()?;
    let model_cdf = z_grid.iter().map(|&z| limiting_cdf(z)).collect::<Result<Vec<_>>>()?;
    let empirical_cdf = z_grid
        .iter()
        .map(|&z| if n == 0 { 0.0 } else { roots.partition_point(|&r| r <= z) as f64 / n as f64 })
        .collect();
    Ok(DensityReport {
        alpha,
        m,
        root_count: n,
        roots,
        z_grid,
        density,
        empirical_cdf,
        model_cdf,
        ks_distance: if n == 0 { 1.0 } else { ks_distance },
        roots_complete: found.complete(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_at_minus_two() {
        let d = limiting_density(-2.0).unwrap();
        let exact = 3.0 / (20.0 * PI);
        assert!(((d - exact) / exact).abs() < 1e-10);
        assert!((d - 0.047_746).abs() < 1e-6);
    }

    #[test]
    fn density_limits_and_domain() {
        assert!(limiting_density(-1e12).unwrap() < 1e-12);
        assert!(limiting_density(Z_CRITICAL - 1e-10).unwrap() > 1e3);
        assert!(limiting_density(-0.1).is_err());
        assert!(limiting_density(Z_CRITICAL).is_err());
    }

    #[test]
    fn offset_form_agrees_with_direct_form() {
        for &s in &[1e-6, 1e-3, 0.1, 0.5, 0.99, 3.0] {
            let a = limiting_density_offset(s).unwrap();
            let b = limiting_density(Z_CRITICAL - s).unwrap();
            // the direct form loses digits to cancellation in 3 - x as s → 0
            assert!(((a - b) / b).abs() < 1e-9 * (1.0 + 1e-6 / s), "s={s}");
        }
        // the density diverges like s^(-1/2)
        let ratio = limiting_density_offset(1e-20).unwrap() / limiting_density_offset(1e-22).unwrap();
        assert!((ratio - 0.1).abs() < 1e-6);
    }

    #[test]
    fn density_is_three_over_pi_times_dw() {
        for k in 1..50 {
            let theta = THETA_MIN + (PI / 3.0) * k as f64 / 50.0;
            let z = z_of_theta(theta);
            let exact = 3.0 / (PI * crate::cubic::dz_dtheta(theta));
            assert!(((limiting_density(z).unwrap() - exact) / exact).abs() < 1e-9);
        }
    }

    #[test]
    fn integrates_to_one() {
        let r = density_normalization(&QuadratureSpec::default()).unwrap();
        assert!(r.converged);
        assert!((r.value.re - 1.0).abs() < 1e-8, "{}", r.value.re);
    }

    #[test]
    fn cdf_examples() {
        assert!((limiting_cdf(-2.0).unwrap() - 0.25).abs() < 1e-14);
        assert!(limiting_cdf(-1e9).unwrap() < 1e-2);
        assert!(limiting_cdf(-1e30).unwrap() < 1e-9);
        let near = limiting_cdf(Z_CRITICAL - 2e-12).unwrap();
        assert!(near > 1.0 - 1e-5 && near < 1.0);
        assert!(limiting_cdf(0.0).is_err());
    }

    #[test]
    fn cdf_derivative_is_density() {
        for k in 1..40 {
            let z = -0.16 - 0.2 * k as f64;
            let h = 1e-5 * z.abs();
            let fd = (limiting_cdf(z + h).unwrap() - limiting_cdf(z - h).unwrap()) / (2.0 * h);
            let d = limiting_density(z).unwrap();
            assert!(((fd - d) / d).abs() < 1e-6, "z={z}");
        }
    }

    #[test]
    fn cdf_is_monotone() {
        let zs: Vec<f64> = (0..200).map(|k| -1e4 * 0.95f64.powi(k) - 0.15).collect();
        let fs: Vec<f64> = zs.iter().map(|&z| limiting_cdf(z).unwrap()).collect();
        assert!(fs.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn report_at_three_hundred() {
        let r = density_report(0.5, 300, 64).unwrap();
        assert_eq!(r.root_count, 100);
        assert!(r.roots_complete);
        assert!(r.ks_distance <= 0.03, "{}", r.ks_distance);
        assert!(r.density.iter().all(|&d| d > 0.0));
        assert!(r.model_cdf.windows(2).all(|w| w[0] <= w[1]));
        assert!(r.model_cdf[0] > 0.0 && *r.model_cdf.last().unwrap() < 1.0);
    }

    #[test]
    fn ks_distance_shrinks_with_order() {
        let coarse = density_report(0.5, 60, 16).unwrap().ks_distance;
        let fine = density_report(0.5, 300, 16).unwrap().ks_distance;
        assert!(fine < coarse, "{fine} vs {coarse}");
    }
}
