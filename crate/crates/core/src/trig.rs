//! Trigonometric identities behind the open-chain Green's function, evaluated
//! directly in double precision as an independent check on the exact forms.

use std::f64::consts::PI;

use crate::error::{Error, Result, SingularCase};
use crate::summation::compensated_sum;

/// |sin(θ/2)| below this is treated as a singular angle.
pub const ANGLE_TOLERANCE: f64 = 1e-12;

/// Tolerance for the asserted sine-ratio identity.
pub const SINE_RATIO_TOLERANCE: f64 = 1e-9;

/// sin(πm/(N+1)) for m in 0..2(N+1) and cos(kω) for k in 1..=N, for an even N.
#[derive(Debug, Clone)]
pub struct GreenSumTable {
    n: usize,
    sines: Vec<f64>,
    cosines: Vec<f64>,
}

impl GreenSumTable {
    pub fn new(n: usize) -> Result<Self> {
        if n % 2 == 1 {
            return Err(Error::singular(n, SingularCase::OpenOddN));
        }
        if n == 0 {
            return Err(Error::InvalidSpec("N must be positive".into()));
        }
        let period = 2 * (n + 1);
        let sines = (0..period).map(|m| (PI * m as f64 / (n + 1) as f64).sin()).collect();
        let cosines = (1..=n).map(|k| (PI * k as f64 / (n + 1) as f64).cos()).collect();
        Ok(GreenSumTable { n, sines, cosines })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// −1/(N+1) Σ_{k=1}^N sin(rkω) sin(skω) / cos(kω), ω = π/(N+1).
    pub fn sum(&self, r: usize, s: usize) -> Result<f64> {
        for idx in [r, s] {
            if idx == 0 || idx > self.n {
                return Err(Error::IndexOutOfRange { index: idx, n: self.n });
            }
        }
        let period = self.sines.len();
        let total = compensated_sum((1..=self.n).map(|k| {
            self.sines[(r * k) % period] * self.sines[(s * k) % period] / self.cosines[k - 1]
        }));
        Ok(-total / (self.n + 1) as f64)
    }
}

/// The spectral sum for G(r, s) on the uniform open chain.
pub fn direct_green_sum(n: usize, r: usize, s: usize) -> Result<f64> {
    GreenSumTable::new(n)?.sum(r, s)
}

fn half_angle_sine(theta: f64) -> Result<f64> {
    let h = (theta / 2.0).sin();
    if h.abs() <= ANGLE_TOLERANCE {
        return Err(Error::NearSingularAngle { theta });
    }
    Ok(h)
}

/// Σ_{n=0}^{N′} cos(nθ) = cos(N′θ/2) sin((N′+1)θ/2) / sin(θ/2).
pub fn sum_cos(nprime: usize, theta: f64) -> Result<f64> {
    let h = half_angle_sine(theta)?;
    let np = nprime as f64;
    Ok((np * theta / 2.0).cos() * ((np + 1.0) * theta / 2.0).sin() / h)
}

/// Σ_{n=0}^{N′} sin(nθ) = sin(N′θ/2) sin((N′+1)θ/2) / sin(θ/2).
pub fn sum_sin(nprime: usize, theta: f64) -> Result<f64> {
    let h = half_angle_sine(theta)?;
    let np = nprime as f64;
    Ok((np * theta / 2.0).sin() * ((np + 1.0) * theta / 2.0).sin() / h)
}

/// A finite sum Σ_{n=0}^{N′} f(nθ) with f = cos or sin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigSumQuery {
    pub terms: usize,
    pub theta: f64,
}

impl TrigSumQuery {
    pub fn sum_cos(&self) -> Result<f64> {
        sum_cos(self.terms, self.theta)
    }

    pub fn sum_sin(&self) -> Result<f64> {
        sum_sin(self.terms, self.theta)
    }

    /// Term-by-term compensated sums of cos(nθ) and sin(nθ).
    pub fn direct(&self) -> (f64, f64) {
        let angles = || (0..=self.terms).map(|n| n as f64 * self.theta);
        (compensated_sum(angles().map(f64::cos)), compensated_sum(angles().map(f64::sin)))
    }
}

/// sin(πNk/(N+1)) / sin(πk/(N+1)) = −(−1)^k for even N; returns the sign
/// after checking the ratio numerically.
pub fn sine_ratio_sign(n: usize, k: usize) -> Result<i32> {
    if n % 2 == 1 || n == 0 {
        return Err(Error::InvalidSpec(format!("N must be even and positive, got {n}")));
    }
    let modulus = n + 1;
    if k == 0 || k % modulus == 0 {
        return Err(Error::DegenerateAngle { k, modulus });
    }
    let sign = if k % 2 == 0 { -1 } else { 1 };
    let period = 2 * modulus;
    let num = (PI * ((n * k) % period) as f64 / modulus as f64).sin();
    let den = (PI * (k % period) as f64 / modulus as f64).sin();
    let ratio = num / den;
    if (ratio - sign as f64).abs() > SINE_RATIO_TOLERANCE {
        return Err(Error::IdentityMismatch {
            expected: sign as f64,
            observed: ratio,
        });
    }
    Ok(sign)
}

/// Residual of Σ_{k=1}^N cos(2qkω)/cos(kω), summed pairwise as
/// k with N+1−k: the numerators agree and the denominators differ in sign, so
/// every pair, and the total, vanishes.
pub fn parity_zero_sum(n: usize, q: usize) -> Result<f64> {
    if n % 2 == 1 || n == 0 {
        return Err(Error::InvalidSpec(format!("N must be even and positive, got {n}")));
    }
    if q == 0 || 2 * q > n {
        return Err(Error::InvalidSpec(format!("need 1 <= 2q <= N, got q={q}")));
    }
    let den = n + 1;
    let period = 2 * den;
    let term = |k: usize| {
        let num = (PI * ((2 * q * k) % period) as f64 / den as f64).cos();
        num / (PI * k as f64 / den as f64).cos()
    };
    Ok(compensated_sum((1..=n / 2).map(|k| term(k) + term(den - k))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn direct_cos(np: usize, theta: f64) -> f64 {
        (0..=np).map(|n| (n as f64 * theta).cos()).sum()
    }

    fn direct_sin(np: usize, theta: f64) -> f64 {
        (0..=np).map(|n| (n as f64 * theta).sin()).sum()
    }

    #[test]
    fn green_sums() {
        assert_abs_diff_eq!(direct_green_sum(2, 1, 2).unwrap(), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(direct_green_sum(6, 2, 4).unwrap(), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(direct_green_sum(6, 4, 1).unwrap(), 1.0, epsilon = 1e-10);
        assert!(direct_green_sum(7, 1, 2).unwrap_err().is_singular());
    }

    #[test]
    fn closed_trig_sums() {
        assert_abs_diff_eq!(sum_cos(1, PI / 2.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sum_cos(0, 0.37).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sum_cos(5, 0.7).unwrap(), direct_cos(5, 0.7), epsilon = 1e-11);
        assert_abs_diff_eq!(sum_sin(0, 0.37).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sum_sin(1, PI / 2.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sum_sin(7, 1.1).unwrap(), direct_sin(7, 1.1), epsilon = 1e-11);
        assert!(matches!(sum_cos(3, 0.0), Err(Error::NearSingularAngle { .. })));
        assert!(matches!(sum_sin(3, 2.0 * PI), Err(Error::NearSingularAngle { .. })));
        let q = TrigSumQuery { terms: 9, theta: 2.3 };
        let (c, s) = q.direct();
        assert_abs_diff_eq!(q.sum_cos().unwrap(), c, epsilon = 1e-11);
        assert_abs_diff_eq!(q.sum_sin().unwrap(), s, epsilon = 1e-11);
    }

    #[test]
    fn sine_ratio() {
        assert_eq!(sine_ratio_sign(6, 1).unwrap(), 1);
        assert_eq!(sine_ratio_sign(6, 2).unwrap(), -1);
        assert_eq!(sine_ratio_sign(10, 3).unwrap(), 1);
        assert_eq!(sine_ratio_sign(6, 14), Err(Error::DegenerateAngle { k: 14, modulus: 7 }));
    }

    #[test]
    fn parity_pairs_cancel() {
        assert_abs_diff_eq!(parity_zero_sum(6, 1).unwrap(), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(parity_zero_sum(10, 3).unwrap(), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(parity_zero_sum(2, 1).unwrap(), 0.0, epsilon = 1e-12);
        assert!(parity_zero_sum(6, 4).is_err());
    }
}
