//! Roots of `1 + t + z t^3` in `t`.
//!
//! For `z < -4/27` the cubic has one positive real root `x` and a conjugate
//! pair `r e^{±iθ}` with `θ ∈ (2π/3, π)`; everything is parameterised by `θ`:
//!
//! ```text
//! r = (1 - 4cos²θ) / (2cosθ),   x = 4cos²θ - 1,   z = 4cos²θ / (1 - 4cos²θ)³
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const THETA_MIN: f64 = 2.0 * PI / 3.0;
pub const THETA_MAX: f64 = PI;
/// Right end of the zero interval, `-4/27`.
pub const Z_CRITICAL: f64 = -4.0 / 27.0;
/// Inputs this close to a degenerate endpoint are rejected.
pub const ENDPOINT_GUARD: f64 = 1e-12;

/// Root structure of `1 + t + z t^3` for one `θ ∈ (2π/3, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicRoots {
    pub theta: f64,
    pub r: f64,
    pub x: f64,
    pub z: f64,
}

impl CubicRoots {
    /// The non-real root in the upper half-plane, `y = r e^{iθ}`.
    pub fn y(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }

    /// `|x - y|² = 2x² + r²`.
    pub fn dist_sq(&self) -> f64 {
        2.0 * self.x * self.x + self.r * self.r
    }

    /// `|x - y|`, computed directly from the roots.
    pub fn dist(&self) -> f64 {
        (self.x - self.y()).norm()
    }

    /// Absolute residuals of the three Vieta relations
    /// `x + 2r cosθ = 0`, `2xr cosθ + r² = 1/z`, `x r² = -1/z`.
    pub fn vieta_residuals(&self) -> [f64; 3] {
        let c = self.theta.cos();
        let inv_z = 1.0 / self.z;
        [
            (self.x + 2.0 * self.r * c).abs(),
            (self.x * 2.0 * self.r * c + self.r * self.r - inv_z).abs(),
            (self.x * self.r * self.r + inv_z).abs(),
        ]
    }

    /// `| |x - y|² - (2x² + r²) |` with `|x - y|` taken from the complex roots.
    pub fn law_of_cosines_residual(&self) -> f64 {
        (self.dist().powi(2) - self.dist_sq()).abs()
    }
}

/// `-27 z² - 4 z`.
pub fn discriminant(z: f64) -> f64 {
    -27.0 * z * z - 4.0 * z
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > THETA_MIN + ENDPOINT_GUARD && theta < THETA_MAX - ENDPOINT_GUARD {
        Ok(())
    } else {
        Err(Error::ThetaOutOfRange(theta))
    }
}

fn check_z(z: f64) -> Result<()> {
    if z < Z_CRITICAL - ENDPOINT_GUARD {
        Ok(())
    } else {
        Err(Error::ZOutOfRange(z))
    }
}

/// Forward map `z(θ)`; unchecked.
pub fn z_of_theta(theta: f64) -> f64 {
    let c2 = 4.0 * theta.cos().powi(2);
    c2 / (1.0 - c2).powi(3)
}

/// `z'(θ) = -8 sinθ cosθ (8cos²θ + 1) / (1 - 4cos²θ)⁴`, positive on the interval.
pub fn dz_dtheta(theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    -8.0 * s * c * (8.0 * c * c + 1.0) / (1.0 - 4.0 * c * c).powi(4)
}

pub fn roots_from_theta(theta: f64) -> Result<CubicRoots> {
    check_theta(theta)?;
    let c = theta.cos();
    let c2 = 4.0 * c * c;
    Ok(CubicRoots {
        theta,
        r: (1.0 - c2) / (2.0 * c),
        x: c2 - 1.0,
        z: c2 / (1.0 - c2).powi(3),
    })
}

/// The real root `x ∈ (0, 3)` of `1 + t + z t³` for `z < -4/27`.
///
/// Starts from the hyperbolic Cardano form and polishes with Newton steps
/// kept inside the bracket `[0, 3]`, on which the cubic changes sign.
pub fn real_root_x(z: f64) -> Result<f64> {
    check_z(z)?;
    let f = |t: f64| 1.0 + t + z * t * t * t;
    let df = |t: f64| 1.0 + 3.0 * z * t * t;

    // depressed form t³ + p t + q with p = q = 1/z < 0
    let p = 1.0 / z;
    let scale = (-p / 3.0).sqrt();
    let arg = 1.5 * (-3.0 / p).sqrt();
    let mut t = 2.0 * scale * (arg.acosh() / 3.0).cosh();

    let (mut lo, mut hi) = (0.0f64, 3.0f64);
    if !(t > lo && t < hi) {
        t = 0.5 * (lo + hi);
    }
    for _ in 0..100 {
        let ft = f(t);
        if ft == 0.0 {
            return Ok(t);
        }
        if ft > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let step = ft / df(t);
        let mut next = t - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let done = (next - t).abs() <= 4.0 * f64::EPSILON * t.abs();
        t = next;
        if done || hi - lo <= 2.0 * f64::EPSILON * hi {
            break;
        }
    }
    Ok(t)
}

/// The closed radical expression for the real root, evaluated with real
/// cube roots. For `z < -4/27` the square root is of a positive number, and
/// the real branch of the cube root reproduces [`real_root_x`]. Loses
/// digits to cancellation as `|z|` grows; kept as a cross-check only.
pub fn real_root_x_radical(z: f64) -> Result<f64> {
    check_z(z)?;
    let inner = 3f64.sqrt() * (27.0 * z.powi(4) + 4.0 * z.powi(3)).sqrt() - 9.0 * z * z;
    let cr = inner.cbrt();
    Ok(cr / (2f64.cbrt() * 3f64.powf(2.0 / 3.0) * z) - (2.0f64 / 3.0).cbrt() / cr)
}

/// The inverse map `W(z)`: the unique `θ ∈ (2π/3, π)` with `z(θ) = z`.
///
/// `z(θ)` matches `z` to relative `1e-12`, or to within the change caused
/// by one ulp of `θ` where `z` is so large that the ulp dominates.
///
/// Bisection on the monotone bracket down to `1e-13`, then Newton polish
/// with `z'(θ)`, accepted only while it lowers the mismatch.
pub fn theta_from_z(z: f64) -> Result<f64> {
    check_z(z)?;
    let (mut lo, mut hi) = (THETA_MIN, THETA_MAX);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if z_of_theta(mid) < z {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut theta = 0.5 * (lo + hi);
    let mut miss = (z_of_theta(theta) - z).abs();
    for _ in 0..3 {
        let d = dz_dtheta(theta);
        if !(d.is_finite() && d > 0.0) {
            break;
        }
        let cand = theta - (z_of_theta(theta) - z) / d;
        if !(cand > THETA_MIN && cand < THETA_MAX) {
            break;
        }
        let cand_miss = (z_of_theta(cand) - z).abs();
        if cand_miss >= miss {
            break;
        }
        theta = cand;
        miss = cand_miss;
    }
    Ok(theta)
}

/// All three roots of `1 + t + z t³` for a real nonzero `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralRootTriple {
    pub roots: [Complex64; 3],
    pub z: f64,
}

impl GeneralRootTriple {
    /// `|1 + t + z t³| / (1 + |z| |t|³)` for each root.
    pub fn scaled_residuals(&self) -> [f64; 3] {
        self.roots.map(|t| (1.0 + t + self.z * t * t * t).norm() / (1.0 + self.z.abs() * t.norm().powi(3)))
    }

    pub fn real_roots(&self, tol: f64) -> Vec<f64> {
        self.roots.iter().filter(|t| t.im.abs() <= tol).map(|t| t.re).collect()
    }
}

pub fn all_roots(z: f64) -> Result<GeneralRootTriple> {
    if z == 0.0 || !z.is_finite() {
        return Err(Error::DegenerateCubic);
    }
    if z < Z_CRITICAL - ENDPOINT_GUARD {
        let g = roots_from_theta(theta_from_z(z)?)?;
        let x = real_root_x(z)?;
        let y = g.y();
        return Ok(GeneralRootTriple { roots: [Complex64::new(x, 0.0), y, y.conj()], z });
    }

    // depressed form t³ + p t + q, p = q = 1/z
    let p = 1.0 / z;
    let q = p;
    let roots = if p < 0.0 {
        // three real roots (a double one at z = -4/27)
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = ((3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        [0.0, 1.0, 2.0].map(|k| Complex64::new(m * (phi - 2.0 * PI * k / 3.0).cos(), 0.0))
    } else {
        // z > 0: one real root and a conjugate pair
        let m = 2.0 * (p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p)) * (3.0 / p).sqrt();
        let t0 = -m * (arg.asinh() / 3.0).sinh();
        // remaining pair solves s² + t0 s + (t0² + p) = 0
        let disc = Complex64::new(t0 * t0 - 4.0 * (t0 * t0 + p), 0.0).sqrt();
        [
            Complex64::new(t0, 0.0),
            (Complex64::new(-t0, 0.0) + disc) * 0.5,
            (Complex64::new(-t0, 0.0) - disc) * 0.5,
        ]
    };
    let roots = roots.map(|t| newton_polish(t, z));
    Ok(GeneralRootTriple { roots, z })
}

fn newton_polish(mut t: Complex64, z: f64) -> Complex64 {
    let f = |t: Complex64| 1.0 + t + z * t * t * t;
    for _ in 0..4 {
        let d = 1.0 + 3.0 * z * t * t;
        if d.norm() < 1e-8 * (1.0 + z.abs() * t.norm_sqr()) {
            break;
        }
        let cand = t - f(t) / d;
        if f(cand).norm() >= f(t).norm() {
            break;
        }
        t = cand;
    }
    t
}
