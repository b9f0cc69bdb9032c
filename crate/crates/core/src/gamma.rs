use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler's gamma function for real `s` away from the poles `0, -1, -2, ...`.
pub fn gamma_fn(s: f64) -> Result<f64> {
    if !s.is_finite() || (s <= 0.0 && s == s.floor()) {
        return Err(Error::GammaPole(s));
    }
    Ok(gamma_unchecked(s))
}

fn gamma_unchecked(s: f64) -> f64 {
    if s == s.floor() && (1.0..=171.0).contains(&s) {
        // exact for small integers
        return (1..s as u64).fold(1.0, |acc, k| acc * k as f64);
    }
    if s < 0.5 {
        return PI / ((PI * s).sin() * gamma_unchecked(1.0 - s));
    }
    let x = s - 1.0;
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let w = x + LANCZOS_G + 0.5;
    // w^(x+1/2) split in two halves so moderate s cannot overflow early
    let half = w.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-w).exp()) * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn classical_values() {
        assert_eq!(gamma_fn(1.0).unwrap(), 1.0);
        assert_eq!(gamma_fn(5.0).unwrap(), 24.0);
        assert!(rel(gamma_fn(0.5).unwrap(), PI.sqrt()) < 1e-14);
        assert!(rel(gamma_fn(1.5).unwrap(), 0.5 * PI.sqrt()) < 1e-14);
        assert!(rel(gamma_fn(1.0 / 3.0).unwrap(), 2.678_938_534_707_747_6) < 1e-14);
        assert!(rel(gamma_fn(0.25).unwrap(), 3.625_609_908_221_908_3) < 1e-14);
        assert!(rel(gamma_fn(-0.5).unwrap(), -2.0 * PI.sqrt()) < 1e-14);
    }

    #[test]
    fn poles_rejected() {
        for s in [0.0, -1.0, -2.0, -17.0, f64::NAN, f64::INFINITY] {
            assert!(gamma_fn(s).is_err(), "{s}");
        }
    }

    #[test]
    fn factorials_and_recurrence_on_range() {
        let mut fact = 1.0f64;
        for n in 1..50u32 {
            assert!(rel(gamma_fn(f64::from(n) + 1.0).unwrap(), fact * f64::from(n)) < 1e-15);
            fact *= f64::from(n);
        }
        // Γ(s+1) = sΓ(s) off the integers, across (0, 50)
        let mut s = 0.013;
        while s < 49.0 {
            let lhs = gamma_fn(s + 1.0).unwrap();
            let rhs = s * gamma_fn(s).unwrap();
            assert!(rel(lhs, rhs) < 1e-13, "s={s}");
            s += 0.377;
        }
    }

    #[test]
    fn half_integers_against_double_factorial() {
        // Γ(n + 1/2) = (2n-1)!! √π / 2^n
        let mut df = 1.0f64;
        for n in 1..45 {
            df *= (2 * n - 1) as f64;
            let expected = df * PI.sqrt() / 2f64.powi(n);
            assert!(rel(gamma_fn(n as f64 + 0.5).unwrap(), expected) < 1e-13, "n={n}");
        }
    }
}
