//! How `h_m(θ) = ∫₀^∞ B_m(t, θ) dt` winds around the origin on `(2π/3, π)`.
//!
//! Where `∫A < |∫B|`, `P_m(z(θ))` is negative when `h_m(θ) ∈ iR⁺` and
//! positive when `h_m(θ) ∈ iR⁻`, so consecutive crossings of opposite
//! imaginary half-axes bracket a zero of `P_m`.
//!
//! The argument is assembled from the Watson form: the prefactor phase
//! `-π(1-α)/2 - α Arg(x-y) - (m+α)θ` is continuous by construction and only
//! the argument of the remaining order-one integral is unwrapped
//! numerically. The grid is bisected until no step changes the total
//! argument by `π/2` or more.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cubic::{THETA_MAX, THETA_MIN};
use crate::error::{check_alpha_unit, Error, Result};
use crate::integral::integrate_b_watson_scaled;
use crate::quad::QuadratureSpec;

/// Distance of the outermost grid points from `2π/3` and `π`.
pub const EDGE: f64 = 1e-9;
/// Largest number of grid points refinement may reach.
pub const MAX_POINTS: usize = 1 << 16;
const CROSSING_BISECTIONS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisCrossing {
    pub theta: f64,
    /// `+1` where `h_m ∈ iR⁺`, `-1` where `h_m ∈ iR⁻`.
    pub axis: i8,
    /// Sign of `P_m(z(θ))` implied by the axis, `-axis`.
    pub pm_sign: i8,
}

/// A `θ` interval whose ends carry opposite signs of `P_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignBracket {
    pub lo: f64,
    pub hi: f64,
    pub sign_lo: i8,
    pub sign_hi: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArgSweep {
    pub alpha: f64,
    pub m: usize,
    pub thetas: Vec<f64>,
    /// `Log h_m(θ)` with a continuous imaginary part; `h_m` itself leaves
    /// the `f64` range near `2π/3` for large `m`.
    pub log_hm: Vec<Complex64>,
    pub unwrapped_arg: Vec<f64>,
    pub axis_crossings: Vec<AxisCrossing>,
    /// Largest argument change between adjacent grid points.
    pub max_jump: f64,
    /// Set when some step still changes the argument by `π/2` or more.
    pub refinement_failed: bool,
    /// Every quadrature converged.
    pub converged: bool,
}

struct Sample {
    log_h: Complex64,
    prefactor_phase: f64,
    inner_arg: f64,
    converged: bool,
}

fn sample(theta: f64, alpha: f64, m: usize, spec: &QuadratureSpec) -> Result<Sample> {
    let b = integrate_b_watson_scaled(theta, alpha, m, spec)?;
    Ok(Sample {
        log_h: b.log_value(),
        prefactor_phase: b.log_prefactor.im,
        inner_arg: b.inner.value.arg(),
        converged: b.converged(),
    })
}

/// `arg` shifted by a multiple of `2π` to lie within `π` of `near`.
fn align(arg: f64, near: f64) -> f64 {
    arg + 2.0 * PI * ((near - arg) / (2.0 * PI)).round()
}

impl ArgSweep {
    pub fn delta_arg(&self) -> f64 {
        self.unwrapped_arg.last().copied().unwrap_or(0.0) - self.unwrapped_arg.first().copied().unwrap_or(0.0)
    }

    /// Argument of the order-one Watson integral at the right end of the
    /// grid, standing in for its limit as `θ → π`.
    pub fn limiting_g_phase(&self) -> f64 {
        match (self.log_hm.last(), self.thetas.last()) {
            (Some(log_h), Some(&theta)) => {
                let pre = -FRAC_PI_2 * (1.0 - self.alpha) - (self.m as f64 + self.alpha) * theta;
                log_h.im - pre
            }
            _ => 0.0,
        }
    }

    /// `-mπ/3 - απ/2 + φ_g`.
    pub fn expected_delta_arg(&self) -> f64 {
        -(self.m as f64) * PI / 3.0 - self.alpha * FRAC_PI_2 + self.limiting_g_phase()
    }

    /// Measured total change within `π/2` of the expected one.
    pub fn delta_arg_consistent(&self) -> bool {
        (self.delta_arg() - self.expected_delta_arg()).abs() < FRAC_PI_2
    }

    /// Number of zeros forced between `2π/3` and the last crossing:
    /// `⌊|Δarg_{(2π/3, θ_K)}| / π⌋`, with the left end taken as the limit.
    pub fn forced_zero_count(&self) -> usize {
        match (self.axis_crossings.last(), self.unwrapped_arg.first()) {
            (Some(last), Some(_)) => {
                let left = -FRAC_PI_2 - 2.0 * self.m as f64 * PI / 3.0;
                let at_last = self.arg_at_crossing(last);
                ((at_last - left).abs() / PI + 1e-9).floor() as usize
            }
            _ => 0,
        }
    }

    fn arg_at_crossing(&self, c: &AxisCrossing) -> f64 {
        let i = self.thetas.partition_point(|&t| t < c.theta).min(self.thetas.len() - 1);
        let near = self.unwrapped_arg[i];
        // crossings sit on π/2 + kπ; pick the k nearest the grid value
        FRAC_PI_2 + PI * ((near - FRAC_PI_2) / PI).round()
    }

    /// `θ` intervals with a sign change of `P_m`: between consecutive
    /// crossings of opposite axes, plus `(2π/3, θ₁)` when the sign of `P_m`
    /// as `z → -∞`, `(-1)^(m - ⌊m/3⌋)`, differs from the first crossing.
    pub fn brackets(&self) -> Vec<SignBracket> {
        let mut out = Vec::new();
        let end_sign: i8 = if (self.m - self.m / 3).is_multiple_of(2) { 1 } else { -1 };
        if let Some(first) = self.axis_crossings.first() {
            if first.pm_sign != end_sign {
                out.push(SignBracket { lo: THETA_MIN, hi: first.theta, sign_lo: end_sign, sign_hi: first.pm_sign });
            }
        }
        for w in self.axis_crossings.windows(2) {
            if w[0].pm_sign != w[1].pm_sign {
                out.push(SignBracket { lo: w[0].theta, hi: w[1].theta, sign_lo: w[0].pm_sign, sign_hi: w[1].pm_sign });
            }
        }
        out
    }

    /// `h_m(θ)` on the grid; entries overflow to infinity where `|h_m|`
    /// exceeds the `f64` range.
    pub fn hm_values(&self) -> Vec<Complex64> {
        self.log_hm.iter().map(|l| l.exp()).collect()
    }
}

/// Sweeps `h_m^(α)` over `grid_size` points spanning `(2π/3, π)`, refines
/// until adjacent arguments differ by less than `π/2` and locates every
/// crossing of the imaginary axis by bisection.
pub fn hm_arg_sweep(alpha: f64, m: usize, grid_size: usize, spec: &QuadratureSpec) -> Result<ArgSweep> {
    check_alpha_unit(alpha)?;
    if m < 1 {
        return Err(Error::OrderTooSmall { min: 1, got: m });
    }
    if grid_size < 2 {
        return Err(Error::InvalidArgument(format!("grid_size must be at least 2, got {grid_size}")));
    }
    let (lo, hi) = (THETA_MIN + EDGE, THETA_MAX - EDGE);
    let mut thetas: Vec<f64> = (0..grid_size)
        .map(|j| lo + (hi - lo) * j as f64 / (grid_size - 1) as f64)
        .collect();
    let mut samples = thetas
        .iter()
        .map(|&t| sample(t, alpha, m, spec))
        .collect::<Result<Vec<_>>>()?;

    let phases = |samples: &[Sample]| -> Vec<f64> {
        let mut out = Vec::with_capacity(samples.len());
        let mut prev_inner = 0.0;
        for s in samples {
            let inner = align(s.inner_arg, prev_inner);
            prev_inner = inner;
            out.push(s.prefactor_phase + inner);
        }
        out
    };

    let mut refinement_failed = false;
    loop {
        let unwrapped = phases(&samples);
        let bad: Vec<usize> = (0..thetas.len() - 1)
            .filter(|&i| (unwrapped[i + 1] - unwrapped[i]).abs() >= FRAC_PI_2)
            .collect();
        if bad.is_empty() {
            break;
        }
        if thetas.len() + bad.len() > MAX_POINTS {
            refinement_failed = true;
            break;
        }
        let mut new_thetas = Vec::with_capacity(thetas.len() + bad.len());
        let mut new_samples = Vec::with_capacity(thetas.len() + bad.len());
        let mut bad_iter = bad.iter().peekable();
        for (i, (t, s)) in thetas.iter().zip(samples).enumerate() {
            new_thetas.push(*t);
            new_samples.push(s);
            if bad_iter.peek() == Some(&&i) {
                bad_iter.next();
                let mid = 0.5 * (t + thetas[i + 1]);
                new_thetas.push(mid);
                new_samples.push(sample(mid, alpha, m, spec)?);
            }
        }
        thetas = new_thetas;
        samples = new_samples;
    }

    let unwrapped = phases(&samples);
    let max_jump = unwrapped.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    let mut converged = samples.iter().all(|s| s.converged);

    let level = |phase: f64| ((phase - FRAC_PI_2) / PI).floor();
    let mut axis_crossings = Vec::new();
    for i in 0..thetas.len() - 1 {
        let (la, lb) = (level(unwrapped[i]), level(unwrapped[i + 1]));
        if la == lb {
            continue;
        }
        // at most one line is crossed per step because every step is < π/2
        let k = la.max(lb);
        let target = FRAC_PI_2 + k * PI;
        let (mut a, mut b) = (thetas[i], thetas[i + 1]);
        let (mut fa, mut inner_ref) = (unwrapped[i] - target, unwrapped[i] - samples[i].prefactor_phase);
        for _ in 0..CROSSING_BISECTIONS {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let s = sample(mid, alpha, m, spec)?;
            converged &= s.converged;
            let inner = align(s.inner_arg, inner_ref);
            let fm = s.prefactor_phase + inner - target;
            if (fm < 0.0) == (fa < 0.0) {
                a = mid;
                fa = fm;
                inner_ref = inner;
            } else {
                b = mid;
            }
        }
        let axis: i8 = if (k as i64).rem_euclid(2) == 0 { 1 } else { -1 };
        axis_crossings.push(AxisCrossing { theta: 0.5 * (a + b), axis, pm_sign: -axis });
    }

    Ok(ArgSweep {
        alpha,
        m,
        thetas,
        log_hm: samples.iter().zip(&unwrapped).map(|(s, &u)| Complex64::new(s.log_h.re, u)).collect(),
        unwrapped_arg: unwrapped,
        axis_crossings,
        max_jump,
        refinement_failed,
        converged,
    })
}
