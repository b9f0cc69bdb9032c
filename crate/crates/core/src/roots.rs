//! Zeros of `P_m^(α)` and of general polynomials.
//!
//! [`aberth_roots`] is a general simultaneous iteration for any complex
//! polynomial. [`pm_real_roots`] is specialised to `P_m^(α)`: it works in
//! the reciprocal variable `w = 1/z`, where every zero sits in the bounded
//! interval `(-27/4, 0)`, and brackets sign changes on a grid that is
//! uniform in `θ` (the zeros are asymptotically equally spaced there).
//! Signs come from the three-term recurrence in `m`, which stays accurate
//! where the power basis loses every digit to cancellation.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cubic::{theta_from_z, z_of_theta, THETA_MIN, Z_CRITICAL};
use crate::error::{check_alpha, Error, Result};
use crate::poly::PolynomialZ;
use crate::series::{eval_recurrence, pm_coeffs, UnivariateCoeffs};

/// Residual bound for an accepted root.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Margin by which a root must lie below `-4/27`.
pub const CRITICAL_MARGIN: f64 = 1e-9;
const ABERTH_MAX_ITER: usize = 2000;
const ABERTH_START_ANGLE: f64 = 0.4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// `|p(z)| / Σ|c_k||z|^k` for each root.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// `p(z) / p'(z)` and the scaled residual, evaluated through the reversed
/// polynomial when `|z| > 1` so that nothing overflows.
fn newton_ratio(c: &[Complex64], z: Complex64) -> (Complex64, f64) {
    let d = c.len() - 1;
    let zero = Complex64::new(0.0, 0.0);
    if z.norm() <= 1.0 {
        let (mut p, mut dp, mut abs) = (zero, zero, 0.0);
        let r = z.norm();
        for &ck in c.iter().rev() {
            dp = dp * z + p;
            p = p * z + ck;
            abs = abs * r + ck.norm();
        }
        (p / dp, p.norm() / abs)
    } else {
        let w = z.inv();
        let r = w.norm();
        let (mut q, mut dq, mut abs) = (zero, zero, 0.0);
        for &ck in c {
            dq = dq * w + q;
            q = q * w + ck;
            abs = abs * r + ck.norm();
        }
        (q / (w * (d as f64 * q - w * dq)), q.norm() / abs)
    }
}

/// All roots of `p` by the Aberth–Ehrlich iteration.
///
/// Exact zero roots are split off first. The rest start on the circle of
/// radius `|c_0/c_d|^(1/d)` at angles `2πk/d + 0.4`, so the result is
/// deterministic. A root stops moving once its step is at the ulp level or
/// its scaled residual is at rounding level; `converged` requires every
/// scaled residual `<= 1e-9`.
pub fn aberth_roots(p: &PolynomialZ) -> Result<RootSet> {
    let d_full = match p.degree() {
        Some(d) if d >= 1 => d,
        other => return Err(Error::DegreeTooSmall { min: 1, got: other.unwrap_or(0) }),
    };
    let zeros_at_origin = p.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
    let c = &p.coeffs()[zeros_at_origin..];
    let d = d_full - zeros_at_origin;

    let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    let mut iterations = 0;
    let mut settled = true;
    if d > 0 {
        let radius = (c[0].norm() / c[d].norm()).powf(1.0 / d as f64);
        let mut z: Vec<Complex64> = (0..d)
            .map(|k| Complex64::from_polar(radius, TAU * k as f64 / d as f64 + ABERTH_START_ANGLE))
            .collect();
        let mut done = vec![false; d];
        // rounding level of a scaled residual; no step can improve on it
        let noise = 4.0 * (d + 1) as f64 * f64::EPSILON;
        settled = false;
        while iterations < ABERTH_MAX_ITER {
            iterations += 1;
            for i in 0..d {
                if done[i] {
                    continue;
                }
                let (ratio, residual) = newton_ratio(c, z[i]);
                if residual <= noise {
                    done[i] = true;
                    continue;
                }
                let sum: Complex64 = (0..d).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
                let step = ratio / (1.0 - ratio * sum);
                if !(step.re.is_finite() && step.im.is_finite()) {
                    done[i] = true;
                    continue;
                }
                z[i] -= step;
                if step.norm() <= 4.0 * f64::EPSILON * z[i].norm() {
                    done[i] = true;
                }
            }
            if done.iter().all(|&b| b) {
                settled = true;
                break;
            }
        }
        roots.extend(z);
    }
    let residuals: Vec<f64> = roots
        .iter()
        .map(|&z| if z.norm() == 0.0 && zeros_at_origin > 0 { 0.0 } else { newton_ratio(p.coeffs(), z).1 })
        .collect();
    let converged = settled && residuals.iter().all(|&r| r <= RESIDUAL_TOL);
    Ok(RootSet { roots, residuals, iterations, converged })
}

/// Real zeros of `P_m^(α)`, sorted increasingly, with their checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmRoots {
    pub alpha: f64,
    pub m: usize,
    pub degree: usize,
    pub roots: Vec<f64>,
    /// `W(z)` for each root.
    pub thetas: Vec<f64>,
    /// Scaled residual of the reversed polynomial at `w = 1/z`.
    pub residuals: Vec<f64>,
    /// Signs of `P_m` differ just left and right of every root.
    pub brackets_verified: bool,
    /// Every root is `< -4/27 - 1e-9`.
    pub all_below_critical: bool,
    /// Indices of roots failing the residual, location or bracket check.
    pub flagged: Vec<usize>,
}

impl PmRoots {
    /// As many real roots as the degree, none flagged.
    pub fn complete(&self) -> bool {
        self.roots.len() == self.degree && self.flagged.is_empty()
    }
}

fn sign_at(alpha: f64, m: usize, z: f64) -> i8 {
    eval_recurrence(alpha, m, z).sign
}

/// `|Q(w)| / Σ|c_k||w|^(d-k)` for the reversed polynomial `Q(w) = w^d P(1/w)`.
fn reversed_residual(p: &UnivariateCoeffs, w: f64) -> f64 {
    let (mut q, mut abs) = (0.0, 0.0);
    for &c in &p.coeffs {
        q = q * w + c;
        abs = abs * w.abs() + c.abs();
    }
    q.abs() / abs
}

/// Bisection in `w` on `[a, b]` with `sign(P(1/a)) = sa`. `b` may be `0`,
/// standing for `z = -∞`; it is never evaluated.
fn bisect_w(alpha: f64, m: usize, mut a: f64, mut b: f64, sa: i8) -> f64 {
    for _ in 0..2000 {
        let mid = 0.5 * (a + b);
        if mid == a || mid == b {
            break;
        }
        let s = sign_at(alpha, m, 1.0 / mid);
        if s == 0 {
            return mid;
        }
        if s == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

const GRID_PER_ORDER: usize = 8;
const MAX_GRID: usize = 1 << 18;

/// The `⌊m/3⌋` real zeros of `P_m^(α)`, all in `(-∞, -4/27)` once `m` is
/// large.
///
/// Fewer roots, or roots failing a check, are reported through
/// [`PmRoots::flagged`] and [`PmRoots::complete`] rather than as errors,
/// since the location law only holds for `m` large enough.
pub fn pm_real_roots(alpha: f64, m: usize) -> Result<PmRoots> {
    check_alpha(alpha)?;
    if m < 3 {
        return Err(Error::OrderTooSmall { min: 3, got: m });
    }
    let p = pm_coeffs(alpha, m)?;
    let degree = p.degree();
    let end_sign = p.end_sign();

    let mut n = (GRID_PER_ORDER * m).max(64);
    let mut brackets;
    loop {
        // (w, sign) from w → 0⁻ (z → -∞) down to w = -27/4 (z = -4/27)
        let mut points = vec![(0.0, end_sign)];
        points.extend((1..n).map(|j| {
            let z = z_of_theta(THETA_MIN + (PI / 3.0) * j as f64 / n as f64);
            (1.0 / z, sign_at(alpha, m, z))
        }));
        points.push((1.0 / Z_CRITICAL, sign_at(alpha, m, Z_CRITICAL)));
        brackets = Vec::new();
        let mut last = points[0];
        for &pt in &points[1..] {
            if pt.1 == 0 {
                brackets.push((pt.0, pt.0, 0));
                continue;
            }
            if pt.1 != last.1 {
                brackets.push((pt.0, last.0, pt.1));
            }
            last = pt;
        }
        if brackets.len() >= degree || n >= MAX_GRID {
            break;
        }
        n *= 4;
    }

    let mut roots: Vec<f64> = brackets
        .iter()
        .map(|&(a, b, sa)| {
            let w = if sa == 0 { a } else { bisect_w(alpha, m, a, b, sa) };
            1.0 / w
        })
        .collect();
    roots.sort_by(f64::total_cmp);

    let residuals: Vec<f64> = roots.iter().map(|&z| reversed_residual(&p, 1.0 / z)).collect();
    let mut flagged = Vec::new();
    let mut brackets_verified = true;
    let mut all_below_critical = true;
    for (i, &z) in roots.iter().enumerate() {
        let h = 1e-10 * z.abs();
        let bracket_ok = sign_at(alpha, m, z - h) * sign_at(alpha, m, z + h) < 0;
        let below = z < Z_CRITICAL - CRITICAL_MARGIN;
        brackets_verified &= bracket_ok;
        all_below_critical &= below;
        if !(bracket_ok && below && residuals[i] <= RESIDUAL_TOL) {
            flagged.push(i);
        }
    }
    let thetas = roots.iter().map(|&z| theta_from_z(z).unwrap_or(f64::NAN)).collect();
    Ok(PmRoots { alpha, m, degree, roots, thetas, residuals, brackets_verified, all_below_critical, flagged })
}

/// Zeros of `P_m^(α)` by Aberth on the reversed polynomial in `w = 1/z`,
/// mapped back to `z`. Intended as an independent check for moderate `m`.
pub fn pm_roots_aberth(alpha: f64, m: usize) -> Result<RootSet> {
    let p = pm_coeffs(alpha, m)?;
    let reversed: Vec<f64> = p.coeffs.iter().rev().copied().collect();
    let mut set = aberth_roots(&PolynomialZ::from_real(&reversed))?;
    set.roots = set.roots.iter().map(|w| w.inv()).collect();
    Ok(set)
}

/// Smallest `m0 >= 3` such that [`pm_real_roots`] is complete for every
/// `m ∈ [m0, m_max]`, or `None` if it fails at `m_max`.
pub fn empirical_count_threshold(alpha: f64, m_max: usize) -> Result<Option<usize>> {
    let mut threshold = None;
    for m in (3..=m_max).rev() {
        if !pm_real_roots(alpha, m)?.complete() {
            break;
        }
        threshold = Some(m);
    }
    Ok(threshold)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn aberth_small_cases() {
        let r = aberth_roots(&PolynomialZ::from_real(&[1.0, 0.0, 1.0])).unwrap();
        assert!(r.converged);
        let mut found = r.roots.clone();
        found.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((found[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((found[1] - c(0.0, 1.0)).norm() < 1e-14);

        let r = aberth_roots(&PolynomialZ::from_real(&[-1.0, -1.0])).unwrap();
        assert!((r.roots[0] - c(-1.0, 0.0)).norm() < 1e-15);

        // z²(z - 2)
        let r = aberth_roots(&PolynomialZ::from_real(&[0.0, 0.0, -2.0, 1.0])).unwrap();
        assert!(r.converged);
        assert_eq!(r.roots.iter().filter(|z| z.norm() == 0.0).count(), 2);
        assert!(r.roots.iter().any(|z| (z - 2.0).norm() < 1e-14));
    }

    #[test]
    fn aberth_rejects_constants() {
        assert!(aberth_roots(&PolynomialZ::one()).is_err());
        assert!(aberth_roots(&PolynomialZ::zero()).is_err());
    }

    #[test]
    fn aberth_is_deterministic_and_handles_complex_coefficients() {
        let p = PolynomialZ::new(vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 1.0), c(2.0, -1.0), c(1.0, 0.0)]);
        let a = aberth_roots(&p).unwrap();
        let b = aberth_roots(&p).unwrap();
        assert_eq!(a, b);
        assert!(a.converged);
        for z in &a.roots {
            assert!(p.eval(*z).norm() < 1e-12 * p.abs_eval(*z));
        }
    }

    #[test]
    fn aberth_on_wilkinson_like_spread() {
        // roots 1, 2, ..., 12
        let p = (1..=12).fold(PolynomialZ::one(), |acc, k| &acc * &PolynomialZ::from_real(&[-(k as f64), 1.0]));
        let r = aberth_roots(&p).unwrap();
        assert!(r.converged);
        let mut re: Vec<f64> = r.roots.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        for (k, x) in re.iter().enumerate() {
            assert!((x - (k + 1) as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn first_nontrivial_case() {
        let r = pm_real_roots(1.0, 3).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert!((r.roots[0] + 1.0).abs() < 1e-15);
        assert!(r.complete());
        assert!(pm_real_roots(1.0, 2).is_err());
    }

    #[test]
    fn figure_one_parameters() {
        for m in 3..=50 {
            let r = pm_real_roots(7.5, m).unwrap();
            assert!(r.complete(), "m={m} {:?}", r);
            assert_eq!(r.roots.len(), m / 3);
            assert!(r.roots.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn top_order_against_high_precision() {
        // 60-digit polynomial roots of P_50^(7.5)
        let oracle = [
            -138.746_066_197_325_32,
            -23.013_643_388_299_682,
            -7.819_153_503_579_254_3,
            -3.642_504_879_427_474_3,
            -2.030_077_510_745_077_6,
            -1.271_354_410_350_353,
            -0.864_780_767_457_178_73,
            -0.625_979_336_462_312_63,
            -0.475_881_088_185_639_85,
            -0.376_548_022_399_818_37,
            -0.308_149_975_793_482_96,
            -0.259_599_321_502_026_78,
            -0.224_350_706_552_909_35,
            -0.198_361_707_638_557_44,
            -0.179_026_316_431_818_86,
            -0.164_522_867_849_089_59,
        ];
        let r = pm_real_roots(7.5, 50).unwrap();
        for (a, b) in r.roots.iter().zip(oracle) {
            assert!(((a - b) / b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn aberth_agrees_with_scan() {
        for &(alpha, m) in &[(7.5, 50), (0.5, 40), (2.5, 33)] {
            let scan = pm_real_roots(alpha, m).unwrap();
            let set = pm_roots_aberth(alpha, m).unwrap();
            assert!(set.converged);
            let mut re: Vec<f64> = set.roots.iter().map(|z| z.re).collect();
            re.sort_by(f64::total_cmp);
            // Aberth works in the power basis and inherits its conditioning
            for (a, b) in re.iter().zip(&scan.roots) {
                assert!(((a - b) / b).abs() < 1e-6, "alpha={alpha} m={m}: {a} vs {b}");
            }
            assert!(set.roots.iter().all(|z| z.im.abs() < 1e-8 * z.norm()));
        }
    }

    #[test]
    fn large_order_count_and_extent() {
        let r = pm_real_roots(0.5, 300).unwrap();
        assert!(r.complete());
        assert_eq!(r.roots.len(), 100);
        // leftmost zero scales like (m/π)³ up to a constant
        let scale = (300.0 / PI).powi(3);
        let ratio = -r.roots[0] / scale;
        assert!(ratio > 0.05 && ratio < 20.0, "{ratio}");
    }

    #[test]
    fn derivative_zeros_lie_in_the_hull() {
        for &alpha in &[0.3, 1.0, 2.5] {
            for m in [9, 20, 31] {
                let outer = pm_real_roots(alpha, m + 3).unwrap();
                let inner = pm_real_roots(alpha + 1.0, m).unwrap();
                assert!(outer.complete() && inner.complete());
                let (lo, hi) = (outer.roots[0], *outer.roots.last().unwrap());
                assert!(inner.roots.iter().all(|&z| z > lo && z < hi));
            }
        }
    }

    #[test]
    fn count_threshold_is_reported() {
        assert_eq!(empirical_count_threshold(0.5, 30).unwrap(), Some(3));
    }
}
