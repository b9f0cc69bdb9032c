//! Where the zeros of `H_m^(α)` sit relative to the curve
//! `Im(B³/A) = 0`, `0 < -Re(B³/A) < 27/4`.
//!
//! Away from the zeros of `B`, `H_m(z) = B(z)^m P_m(A(z)/B(z)³)`, so the
//! zeros of `H_m` there are the preimages of the zeros of `P_m` under
//! `z ↦ A/B³`. At a zero of `B` with `3 ∤ m` every term of `H_m` vanishes
//! and `H_m` has a zero that the curve does not describe; those roots are
//! listed separately, like the roots where `A` vanishes and `B³/A` is
//! undefined.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::PolynomialZ;
use crate::roots::aberth_roots;
use crate::series::hm_coeffs;

/// Roots with `|A(z)|` below this are not mapped to `B³/A`.
pub const A_VANISHING: f64 = 1e-8;
/// Roots with `|B(z)|` below this are reported as zeros of `B`.
pub const B_VANISHING: f64 = 1e-8;
/// Allowed `|Im w| / (1 + |w|)`.
pub const IM_TOL: f64 = 1e-6;
/// `Re w` must lie in `(-27/4 - RE_SLACK, -RE_GAP)`.
pub const RE_SLACK: f64 = 1e-6;
pub const RE_GAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub z: Complex64,
    /// `B(z)³ / A(z)`.
    pub w: Complex64,
    pub on_curve: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub alpha: f64,
    pub m: usize,
    pub degree: usize,
    pub points: Vec<CurvePoint>,
    /// Largest `|Im w|` over the mapped roots.
    pub max_im: f64,
    /// Largest `|Im w| / (1 + |w|)`.
    pub max_im_scaled: f64,
    /// Every mapped root has `Re w ∈ (-27/4 - 1e-6, -1e-12)`.
    pub re_range_ok: bool,
    /// Roots where `|A(z)| < 1e-8`.
    pub excluded_roots: Vec<Complex64>,
    /// Roots where `|B(z)| < 1e-8`.
    pub b_zero_roots: Vec<Complex64>,
    pub root_residuals: Vec<f64>,
    pub roots_converged: bool,
}

impl CurveReport {
    /// Every mapped root lies on the curve within tolerance.
    pub fn satisfied(&self) -> bool {
        self.points.iter().all(|p| p.on_curve)
    }
}

fn on_curve(w: Complex64) -> bool {
    w.im.abs() <= IM_TOL * (1.0 + w.norm()) && w.re > -27.0 / 4.0 - RE_SLACK && w.re < -RE_GAP
}

/// Locates the zeros of `H_m^(α)` for `(1 + B t + A t³)^(-α)` and maps
/// each through `B³/A`.
pub fn curve_check_hm(alpha: f64, a: &PolynomialZ, b: &PolynomialZ, m: usize) -> Result<CurveReport> {
    let series = hm_coeffs(alpha, a, b, m)?;
    let h = series.term(m);
    let degree = match h.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::ConstantPolynomial),
    };
    let found = aberth_roots(h)?;
    let mut points = Vec::new();
    let mut excluded_roots = Vec::new();
    let mut b_zero_roots = Vec::new();
    for &z in &found.roots {
        let (az, bz) = (a.eval(z), b.eval(z));
        if az.norm() < A_VANISHING {
            excluded_roots.push(z);
        } else if bz.norm() < B_VANISHING {
            b_zero_roots.push(z);
        } else {
            let w = bz * bz * bz / az;
            points.push(CurvePoint { z, w, on_curve: on_curve(w) });
        }
    }
    let max_im = points.iter().map(|p| p.w.im.abs()).fold(0.0, f64::max);
    let max_im_scaled = points.iter().map(|p| p.w.im.abs() / (1.0 + p.w.norm())).fold(0.0, f64::max);
    let re_range_ok = points.iter().all(|p| p.w.re > -27.0 / 4.0 - RE_SLACK && p.w.re < -RE_GAP);
    Ok(CurveReport {
        alpha,
        m,
        degree,
        points,
        max_im,
        max_im_scaled,
        re_range_ok,
        excluded_roots,
        b_zero_roots,
        root_residuals: found.residuals,
        roots_converged: found.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::pm_real_roots;
    use std::f64::consts::PI;

    #[test]
    fn cubic_rays() {
        let r = curve_check_hm(2.0, &PolynomialZ::one(), &PolynomialZ::z(), 40).unwrap();
        assert!(r.roots_converged);
        assert!(r.satisfied());
        assert!(r.max_im_scaled <= IM_TOL && r.re_range_ok);
        // 40 = 3·13 + 1: one zero at the origin, where B vanishes
        assert_eq!(r.b_zero_roots.len(), 1);
        assert!(r.b_zero_roots[0].norm() < 1e-12);
        assert_eq!(r.points.len(), 39);
        for p in &r.points {
            let arg = p.z.arg().rem_euclid(2.0 * PI);
            let on_ray = [PI / 3.0, PI, 5.0 * PI / 3.0].iter().any(|&a| (arg - a).abs() < 1e-6);
            assert!(on_ray, "{}", p.z);
            assert!(p.z.norm().powi(3) < 27.0 / 4.0);
        }
    }

    #[test]
    fn divisible_order_has_no_origin_zero() {
        let r = curve_check_hm(2.0, &PolynomialZ::one(), &PolynomialZ::z(), 39).unwrap();
        assert!(r.b_zero_roots.is_empty());
        assert!(r.satisfied());
    }

    #[test]
    fn reduces_to_the_p_case() {
        for &(alpha, m) in &[(2.0, 40), (0.5, 30), (7.5, 24)] {
            let r = curve_check_hm(alpha, &PolynomialZ::z(), &PolynomialZ::one(), m).unwrap();
            let p = pm_real_roots(alpha, m).unwrap();
            assert!(r.satisfied());
            let mut re: Vec<f64> = r.points.iter().map(|q| q.z.re).collect();
            re.sort_by(f64::total_cmp);
            assert_eq!(re.len(), p.roots.len());
            for (a, b) in re.iter().zip(&p.roots) {
                assert!(((a - b) / b).abs() < 1e-6);
            }
            for q in &r.points {
                assert!(((q.w - q.z.inv()).norm()) < 1e-12 * q.w.norm());
            }
        }
    }

    #[test]
    fn first_order_is_the_small_m_regime() {
        // H_1 = -α B; its zero is a zero of B
        let b = PolynomialZ::from_real(&[1.0, 2.0]);
        let r = curve_check_hm(0.7, &PolynomialZ::one(), &b, 1).unwrap();
        assert_eq!(r.b_zero_roots.len(), 1);
        assert!((r.b_zero_roots[0] + 0.5).norm() < 1e-14);
        assert!(r.points.is_empty());
    }

    #[test]
    fn vanishing_a_is_excluded() {
        // A = B = z: H_9 = Σ c_k z^(9-2k) has a triple zero at the origin, where
        // both A and B vanish; the rest satisfy z² ∈ (-27/4, 0)
        let r = curve_check_hm(1.5, &PolynomialZ::z(), &PolynomialZ::z(), 9).unwrap();
        assert_eq!(r.excluded_roots.len(), 3);
        assert!(r.b_zero_roots.is_empty());
        assert_eq!(r.points.len(), 6);
        assert!(r.satisfied());
        for p in &r.points {
            assert!(p.z.re.abs() < 1e-9 * p.z.norm());
        }
    }

    #[test]
    fn constant_is_rejected() {
        assert!(matches!(
            curve_check_hm(1.0, &PolynomialZ::one(), &PolynomialZ::one(), 4),
            Err(Error::ConstantPolynomial)
        ));
        assert!(curve_check_hm(1.0, &PolynomialZ::zero(), &PolynomialZ::zero(), 4).is_err());
    }
}
