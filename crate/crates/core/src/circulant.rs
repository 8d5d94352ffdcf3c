//! Circulant matrices and the uniform Hückel cycle H = S + S⁻¹.
//!
//! A circulant is stored by its first column x: entry (r, s) is x[(r − s) mod N]
//! (0-based), so the matrix equals Σ_k x_k S^k with S the cyclic down-shift.
//! The inverse of the Hückel cycle is computed two independent ways: by the
//! row recurrence x_{m−1} + x_{m+1} = δ_{m0}, and by expanding
//! S (I + iS)⁻¹ (I − iS)⁻¹ as geometric series over the Gaussian integers.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result, SingularCase};
use crate::exact::{int, rat, ExactMatrix, Rational};

/// Symbol values below this magnitude trigger an exact singularity check.
pub const SYMBOL_SCREEN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CirculantSpec {
    pub first_column: Vec<Rational>,
}

impl CirculantSpec {
    pub fn new(first_column: Vec<Rational>) -> Result<Self> {
        if first_column.is_empty() {
            return Err(Error::InvalidSpec("empty circulant".into()));
        }
        Ok(CirculantSpec { first_column })
    }

    pub fn n(&self) -> usize {
        self.first_column.len()
    }

    /// x_k = x_{N−k} for 0 < k < N.
    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        (1..n).all(|k| self.first_column[k] == self.first_column[n - k])
    }

    pub fn to_matrix(&self) -> ExactMatrix {
        let n = self.n();
        ExactMatrix::from_fn(n, n, |r, s| self.first_column[(r + n - s) % n].clone())
    }

    /// Symbol values Σ_k x_k e^{2πijk/N}, j = 0..N−1, in double precision.
    pub fn symbol(&self) -> Vec<Complex<f64>> {
        let n = self.n();
        let xs: Vec<f64> = self.first_column.iter().map(crate::exact::to_f64).collect();
        (0..n)
            .map(|j| {
                xs.iter().enumerate().fold(Complex::new(0.0, 0.0), |acc, (k, &x)| {
                    let angle = 2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
                    acc + Complex::from_polar(x, angle)
                })
            })
            .collect()
    }
}

fn require_cycle(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::CycleTooSmall { n });
    }
    Ok(())
}

/// The Hückel cycle as a circulant: x_1 = x_{N−1} = 1.
pub fn hueckel_cycle(n: usize) -> Result<CirculantSpec> {
    require_cycle(n)?;
    let mut col = vec![Rational::zero(); n];
    col[1] = Rational::one();
    col[n - 1] = Rational::one();
    CirculantSpec::new(col)
}

/// First column of (H₁ᶜ)⁻¹ from the row equations of H·x = e₀.
///
/// Symmetry gives x_1 = ½. Rows 1..N−2 propagate x_{m+1} = −x_{m−1} along both
/// parity chains, and the last row closes the cycle with x_0 = −x_{N−2}. For
/// N ≡ 0 (mod 4) that closing equation is vacuous and x_0 is undetermined.
pub fn cyclic_inverse_first_column(n: usize) -> Result<CirculantSpec> {
    require_cycle(n)?;
    let mut x: Vec<Option<Rational>> = vec![None; n];
    x[1] = Some(rat(1, 2));
    let mut m = 3;
    while m < n {
        x[m] = Some(-x[m - 2].clone().expect("odd chain"));
        m += 2;
    }
    x[0] = Some(if n % 2 == 1 {
        -x[n - 2].clone().expect("odd chain reaches N-2")
    } else if n % 4 == 2 {
        // x_{N−2} = x_0 along the even chain, so x_0 = −x_0.
        Rational::zero()
    } else {
        return Err(Error::singular(n, SingularCase::CycleMultipleOfFour));
    });
    let mut m = 2;
    while m < n {
        x[m] = Some(-x[m - 2].clone().expect("even chain"));
        m += 2;
    }
    let col: Vec<Rational> = x.into_iter().map(|v| v.expect("all entries determined")).collect();
    for m in 0..n {
        let lhs = &col[(m + n - 1) % n] + &col[(m + 1) % n];
        let rhs = if m == 0 { Rational::one() } else { Rational::zero() };
        assert_eq!(lhs, rhs, "row {m} of the cycle recurrence");
    }
    CirculantSpec::new(col)
}

fn i_pow(k: usize) -> Complex<i64> {
    match k % 4 {
        0 => Complex::new(1, 0),
        1 => Complex::new(0, 1),
        2 => Complex::new(-1, 0),
        _ => Complex::new(0, -1),
    }
}

/// The same inverse from S(I + iS)⁻¹(I − iS)⁻¹: the cyclic convolution of
/// (1, i, i², …) with (1, −i, (−i)², …), shifted once and divided by
/// (1 − i^N)(1 − (−i)^N).
pub fn symbol_factorization_inverse(n: usize) -> Result<CirculantSpec> {
    require_cycle(n)?;
    let plus: Vec<Complex<i64>> = (0..n).map(i_pow).collect();
    let minus: Vec<Complex<i64>> = (0..n).map(|k| i_pow(k).conj()).collect();
    let one = Complex::new(1, 0);
    let denom = (one - i_pow(n)) * (one - i_pow(n).conj());
    if denom.is_zero() {
        return Err(Error::singular(n, SingularCase::CycleMultipleOfFour));
    }
    debug_assert_eq!(denom.im, 0);
    let mut col = vec![Rational::zero(); n];
    for k in 0..n {
        let c = (0..n).fold(Complex::new(0, 0), |acc, j| acc + plus[j] * minus[(k + n - j) % n]);
        assert_eq!(c.im, 0, "convolution coefficient must be real");
        col[(k + 1) % n] = rat(c.re, denom.re);
    }
    CirculantSpec::new(col)
}

/// Lemma-style determinant of the uniform cycle; N = 2 is the single edge.
pub fn det_cyclic(n: usize) -> Result<i64> {
    match n {
        0 | 1 => Err(Error::CycleTooSmall { n }),
        2 => Ok(-1),
        _ if n % 2 == 1 => Ok(2),
        _ if n % 4 == 0 => Ok(0),
        _ => Ok(-4),
    }
}

/// Kernel basis of H₁ᶜ for N = 4k: k-fold repeats of (0,−1,0,1) and (1,0,−1,0).
pub fn cyclic_kernel_basis(n: usize) -> Result<(Vec<i64>, Vec<i64>)> {
    if n == 0 || n % 4 != 0 {
        return Err(Error::NotSingular { n });
    }
    let v1 = [0, -1, 0, 1].iter().copied().cycle().take(n).collect();
    let v2 = [1, 0, -1, 0].iter().copied().cycle().take(n).collect();
    Ok((v1, v2))
}

/// Exact inverse of a general circulant, returned as its first column.
///
/// The float symbol only screens: a near-zero value is confirmed by an exact
/// determinant before anything is reported, and the answer itself comes from
/// an exact solve of C·y = e₀.
pub fn circulant_inverse_dft(spec: &CirculantSpec) -> Result<CirculantSpec> {
    let n = spec.n();
    let matrix = spec.to_matrix();
    let suspect = spec
        .symbol()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() <= SYMBOL_SCREEN)
        .map(|(j, _)| j)
        .next();
    if let Some(j) = suspect {
        if matrix.det_fraction_free()?.is_zero() {
            return Err(Error::singular(n, SingularCase::VanishingSymbol { j: Some(j) }));
        }
    }
    let mut rhs = vec![Rational::zero(); n];
    rhs[0] = Rational::one();
    let col = solve_exact(&matrix, rhs)
        .map_err(|_| Error::singular(n, SingularCase::VanishingSymbol { j: suspect }))?;
    CirculantSpec::new(col)
}

/// Exact solve of A·y = rhs by Gaussian elimination with pivot search.
#[allow(clippy::needless_range_loop)]
pub fn solve_exact(a: &ExactMatrix, mut rhs: Vec<Rational>) -> Result<Vec<Rational>> {
    let n = a.rows();
    if !a.is_square() || rhs.len() != n {
        return Err(Error::DimensionMismatch("solve".into()));
    }
    let mut m: Vec<Vec<Rational>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    for k in 0..n {
        let p = (k..n)
            .find(|&i| !m[i][k].is_zero())
            .ok_or(Error::singular(n, SingularCase::ZeroDeterminant))?;
        m.swap(k, p);
        rhs.swap(k, p);
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &m[k][k];
            for j in k..n {
                if !m[k][j].is_zero() {
                    let t = &f * &m[k][j];
                    m[i][j] -= t;
                }
            }
            let t = &f * &rhs[k];
            rhs[i] -= t;
        }
    }
    for k in (0..n).rev() {
        let mut s = rhs[k].clone();
        for j in k + 1..n {
            if !m[k][j].is_zero() {
                s -= &m[k][j] * &rhs[j];
            }
        }
        rhs[k] = s / &m[k][k];
    }
    Ok(rhs)
}

/// Kernel vectors as exact columns, for multiplying against built matrices.
pub fn to_rational(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}
