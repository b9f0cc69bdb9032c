//! Coefficient sequences of `(1 + t + z t^3)^(-alpha)` and of the general
//! `(1 + B(z) t + A(z) t^3)^(-alpha)`.
//!
//! Three routes produce `P_m(z)`: the closed binomial sum ([`pm_coeffs`]),
//! the first-order recurrence in `m` ([`pm_coeffs_recurrence`], the bulk
//! path) and, in tests, a brute-force truncated series product. Both
//! production routes run in plain `f64`; binomials always come from
//! multiplicative recurrences, never from gamma ratios.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_alpha, Error, Result};
use crate::poly::PolynomialZ;

/// Exponent `alpha` and the highest retained power `m_max` of `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesParams {
    alpha: f64,
    m_max: usize,
}

impl SeriesParams {
    pub fn new(alpha: f64, m_max: usize) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { alpha, m_max })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }
}

/// Coefficients `c_0..c_d` of one `P_m^(alpha)(z)`, ascending in `z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnivariateCoeffs {
    pub alpha: f64,
    pub m: usize,
    pub coeffs: Vec<f64>,
}

impl UnivariateCoeffs {
    /// Always `floor(m / 3)`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[self.degree()]
    }

    /// Sign of the top coefficient. Every coefficient has sign `(-1)^m`.
    pub fn leading_coeff_sign(&self) -> i8 {
        sign_of(self.leading())
    }

    /// `lim_{z -> -inf} sign P_m(z) = sign(c_d) (-1)^d`, which equals
    /// `(-1)^(m - floor(m/3))`.
    pub fn end_sign(&self) -> i8 {
        let s = self.leading_coeff_sign();
        if self.degree() % 2 == 1 {
            -s
        } else {
            s
        }
    }

    /// Plain Horner evaluation. Overflows for large `m` and `|z|`; see
    /// [`eval_scaled`] and [`eval_recurrence`].
    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
    }

    /// `sum |c_k| |z|^k`.
    pub fn abs_eval(&self, z: f64) -> f64 {
        let a = z.abs();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * a + c.abs())
    }

    pub fn to_polynomial(&self) -> PolynomialZ {
        PolynomialZ::from_real(&self.coeffs)
    }
}

/// Terms `H_0..H_{m_max}` of the general series, one polynomial per power of `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BivariateSeries {
    pub alpha: f64,
    pub a: PolynomialZ,
    pub b: PolynomialZ,
    pub terms: Vec<PolynomialZ>,
}

impl BivariateSeries {
    pub fn m_max(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, m: usize) -> &PolynomialZ {
        &self.terms[m]
    }

    /// Largest possible z-degree of `H_m`: `max_k (m - 3k) deg B + k deg A`.
    pub fn degree_bound(&self, m: usize) -> usize {
        let da = self.a.degree().unwrap_or(0);
        let db = self.b.degree().unwrap_or(0);
        (0..=m / 3).map(|k| (m - 3 * k) * db + k * da).max().unwrap_or(0)
    }
}

/// Sign and natural log of the magnitude of a real number.
///
/// Zero is `sign == 0` with `log_magnitude == -inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledValue {
    pub sign: i8,
    pub log_magnitude: f64,
}

impl ScaledValue {
    pub const ZERO: Self = Self { sign: 0, log_magnitude: f64::NEG_INFINITY };

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            Self { sign: sign_of(v), log_magnitude: v.abs().ln() }
        }
    }

    /// May overflow to `±inf` or underflow to zero.
    pub fn value(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_magnitude.exp(),
        }
    }
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// `binom(-alpha, n) = (-alpha)(-alpha-1)...(-alpha-n+1)/n!`.
pub fn binom_neg_alpha(alpha: f64, n: usize) -> f64 {
    let mut b = 1.0;
    for k in 0..n {
        b *= (-alpha - k as f64) / (k + 1) as f64;
    }
    b
}

/// `binom(-alpha, n)` for every `n <= n_max`.
fn binom_neg_alpha_table(alpha: f64, n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut b = 1.0;
    out.push(b);
    for k in 0..n_max {
        b *= (-alpha - k as f64) / (k + 1) as f64;
        out.push(b);
    }
    out
}

/// Ordinary binomial coefficient in floating point, multiplicatively.
pub(crate) fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut b = 1.0;
    for j in 0..k {
        b = b * (n - j) as f64 / (j + 1) as f64;
    }
    b
}

/// Closed form `c_k = binom(-alpha, m-2k) binom(m-2k, k)`, `0 <= k <= floor(m/3)`.
pub fn pm_coeffs(alpha: f64, m: usize) -> Result<UnivariateCoeffs> {
    check_alpha(alpha)?;
    let neg = binom_neg_alpha_table(alpha, m);
    let coeffs = (0..=m / 3).map(|k| neg[m - 2 * k] * binom(m - 2 * k, k)).collect();
    Ok(UnivariateCoeffs { alpha, m, coeffs })
}

/// All of `P_0..P_{m_max}` from the recurrence
///
/// `(n+1) P_{n+1} = -(n+alpha) P_n - (n-2+3alpha) z P_{n-2}`,
///
/// which is the coefficient form of `u f' = -alpha u' f` with
/// `u = 1 + t + z t^3`. Both right-hand terms share the sign `(-1)^(n+1)`
/// coefficientwise, so there is no cancellation.
pub fn pm_coeffs_recurrence(params: SeriesParams) -> Vec<UnivariateCoeffs> {
    let alpha = params.alpha;
    let mut polys: Vec<Vec<f64>> = Vec::with_capacity(params.m_max + 1);
    polys.push(vec![1.0]);
    for n in 0..params.m_max {
        let nf = n as f64;
        let mut next = vec![0.0; (n + 1) / 3 + 1];
        for (k, c) in polys[n].iter().enumerate() {
            next[k] -= (nf + alpha) * c;
        }
        if n >= 2 {
            let w = nf - 2.0 + 3.0 * alpha;
            for (k, c) in polys[n - 2].iter().enumerate() {
                next[k + 1] -= w * c;
            }
        }
        let inv = 1.0 / (nf + 1.0);
        next.iter_mut().for_each(|c| *c *= inv);
        polys.push(next);
    }
    polys
        .into_iter()
        .enumerate()
        .map(|(m, coeffs)| UnivariateCoeffs { alpha, m, coeffs })
        .collect()
}

/// `H_0..H_{m_max}` for `(1 + B t + A t^3)^(-alpha)` by the polynomial
/// recurrence `(n+1) H_{n+1} = -(n+alpha) B H_n - (n-2+3alpha) A H_{n-2}`.
pub fn hm_coeffs(
    alpha: f64,
    a: &PolynomialZ,
    b: &PolynomialZ,
    m_max: usize,
) -> Result<BivariateSeries> {
    check_alpha(alpha)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroGenerator);
    }
    let mut terms = Vec::with_capacity(m_max + 1);
    terms.push(PolynomialZ::one());
    for n in 0..m_max {
        let nf = n as f64;
        let mut next = (b * &terms[n]).scale(Complex64::new(-(nf + alpha), 0.0));
        if n >= 2 {
            let w = -(nf - 2.0 + 3.0 * alpha);
            next = &next + &(a * &terms[n - 2]).scale(Complex64::new(w, 0.0));
        }
        terms.push(next.scale(Complex64::new(1.0 / (nf + 1.0), 0.0)));
    }
    Ok(BivariateSeries { alpha, a: a.clone(), b: b.clone(), terms })
}

/// Closed form `H_m = sum_k binom(-alpha, m-2k) binom(m-2k, k) B^(m-3k) A^k`.
///
/// Independent of [`hm_coeffs`]; slower, intended for cross-checks.
pub fn hm_closed_form(alpha: f64, a: &PolynomialZ, b: &PolynomialZ, m: usize) -> Result<PolynomialZ> {
    check_alpha(alpha)?;
    let neg = binom_neg_alpha_table(alpha, m);
    let mut out = PolynomialZ::zero();
    for k in 0..=m / 3 {
        let c = neg[m - 2 * k] * binom(m - 2 * k, k);
        let term = &b.pow((m - 3 * k) as u32) * &a.pow(k as u32);
        out = &out + &term.scale(Complex64::new(c, 0.0));
    }
    Ok(out)
}

/// Coefficientwise mismatch in `-alpha P_m^(alpha+1) = d/dz P_{m+3}^(alpha)`,
/// each term normalised by `1 + |alpha c_k|`.
pub fn derivative_identity_residual(alpha: f64, m: usize) -> Result<f64> {
    let lhs = pm_coeffs(alpha + 1.0, m)?;
    let rhs = pm_coeffs(alpha, m + 3)?;
    let d = rhs.degree();
    let mut worst: f64 = 0.0;
    for k in 0..d {
        let l = -alpha * lhs.coeffs.get(k).copied().unwrap_or(0.0);
        let r = (k + 1) as f64 * rhs.coeffs[k + 1];
        worst = worst.max((l - r).abs() / (1.0 + l.abs()));
    }
    Ok(worst)
}

/// Sign and log-magnitude of `P_m(z)` from its coefficients.
///
/// For `|z| <= 1` this is plain Horner. Otherwise the polynomial is
/// evaluated as `z^d Q(1/z)` with `Q` the reversed polynomial, so nothing
/// larger than the coefficients themselves is ever formed.
///
/// This is exact in the backward sense but inherits the conditioning of the
/// power basis: for negative `z` the terms alternate and the value can lose
/// many digits when `m` is large. [`eval_recurrence`] is the stable route.
pub fn eval_scaled(coeffs: &UnivariateCoeffs, z: f64) -> ScaledValue {
    if z.abs() <= 1.0 {
        return ScaledValue::from_f64(coeffs.eval(z));
    }
    let w = 1.0 / z;
    let q = coeffs.coeffs.iter().fold(0.0, |acc, &c| acc * w + c);
    if q == 0.0 {
        return ScaledValue::ZERO;
    }
    let d = coeffs.degree();
    let z_sign = if z < 0.0 && d % 2 == 1 { -1 } else { 1 };
    ScaledValue {
        sign: sign_of(q) * z_sign,
        log_magnitude: q.abs().ln() + d as f64 * z.abs().ln(),
    }
}

const RESCALE_HI: f64 = 1e150;
const RESCALE_LO: f64 = 1e-150;

/// Sign and log-magnitude of `P_m^(alpha)(z)` by running the three-term
/// recurrence in `m` at the fixed point `z`, renormalising as it goes.
///
/// For `z < -4/27` the wanted solution carries the dominant modes `y^(-m)`
/// and `conj(y)^(-m)` of the recurrence, so the error stays at a few ulps of
/// the envelope `|y|^(-m)` regardless of how the power-basis terms cancel.
pub fn eval_recurrence(alpha: f64, m: usize, z: f64) -> ScaledValue {
    // window[0] = P_{n-2}, window[1] = P_{n-1}, window[2] = P_n, all times exp(-log_scale)
    let mut window = [0.0, 0.0, 1.0];
    let mut log_scale = 0.0;
    for n in 0..m {
        let nf = n as f64;
        let next = (-(nf + alpha) * window[2] - (nf - 2.0 + 3.0 * alpha) * z * window[0]) / (nf + 1.0);
        window = [window[1], window[2], next];
        let big = window.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if big > RESCALE_HI || (big < RESCALE_LO && big > 0.0) {
            window.iter_mut().for_each(|v| *v /= big);
            log_scale += big.ln();
        }
    }
    let p = window[2];
    if p == 0.0 {
        ScaledValue::ZERO
    } else {
        ScaledValue { sign: sign_of(p), log_magnitude: p.abs().ln() + log_scale }
    }
}
