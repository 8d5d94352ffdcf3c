//! Dense matrices over exact rationals.
//!
//! Storage is row-major and indexing through [`ExactMatrix::get`] is 0-based.
//! Domain-level functions elsewhere in the crate take 1-based site indices and
//! translate before touching a matrix.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result, SingularCase};
use crate::numeric::FloatMatrix;

pub type Rational = BigRational;

/// `num / den` in lowest terms. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Renders `p/q`, or just `p` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p` or `p/q`. Decimal points and exponents are rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidSpec(format!("not an exact rational: {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Default ceiling on the number of cells in one dense matrix.
pub const DEFAULT_MAX_CELLS: u128 = 1 << 22;

/// The dense-cell ceiling, overridable through `HUECKEL_MAX_CELLS`.
pub fn max_dense_cells() -> u128 {
    std::env::var("HUECKEL_MAX_CELLS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_CELLS)
}

/// Refuses a `rows × cols` dense allocation above [`max_dense_cells`].
pub fn check_dense_cells(rows: usize, cols: usize) -> Result<()> {
    let cells = rows as u128 * cols as u128;
    let limit = max_dense_cells();
    if cells > limit {
        return Err(Error::TooLarge { cells, limit });
    }
    Ok(())
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(ExactMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect();
        Self::from_rows(rows).expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&Rational> {
        (i < self.rows && j < self.cols).then(|| &self.entries[i * self.cols + j])
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn neg(&self) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|v| -v).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = &self[(i, j)];
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    /// Product that skips zero entries of `self`; cheap when `self` is sparse
    /// (Hamiltonians carry at most a handful of nonzeros per row).
    pub fn mul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = ExactMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out.entries[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn to_float(&self) -> FloatMatrix {
        FloatMatrix::from_fn(self.rows, self.cols, |i, j| to_f64(&self[(i, j)]))
    }

    /// Determinant by Bareiss fraction-free elimination over the integers.
    ///
    /// Each row is first cleared of denominators, so all intermediate values
    /// are integers and every Bareiss division is exact.
    pub fn det_fraction_free(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let l = self.row(i).iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
                scale *= &l;
                self.row(i).iter().map(|q| q.numer() * (&l / q.denom())).collect()
            })
            .collect();

        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return Ok(Rational::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(Rational::new(sign * &a[n - 1][n - 1], scale))
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse_exact(&self) -> Result<ExactMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut inv: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        for k in 0..n {
            let p = (k..n)
                .find(|&i| !a[i][k].is_zero())
                .ok_or(Error::singular(n, SingularCase::ZeroDeterminant))?;
            a.swap(k, p);
            inv.swap(k, p);
            let piv = a[k][k].recip();
            for j in 0..n {
                if !a[k][j].is_zero() {
                    a[k][j] *= &piv;
                }
                if !inv[k][j].is_zero() {
                    inv[k][j] *= &piv;
                }
            }
            for i in 0..n {
                if i == k || a[i][k].is_zero() {
                    continue;
                }
                let f = a[i][k].clone();
                for j in 0..n {
                    if !a[k][j].is_zero() {
                        let t = &f * &a[k][j];
                        a[i][j] -= t;
                    }
                    if !inv[k][j].is_zero() {
                        let t = &f * &inv[k][j];
                        inv[i][j] -= t;
                    }
                }
            }
        }
        Ok(ExactMatrix {
            rows: n,
            cols: n,
            entries: inv.into_iter().flatten().collect(),
        })
    }

    /// Largest absolute entry, as a float.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|q| to_f64(&q.abs())).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(format_rational(&rat(6, -4)), "-3/2");
        assert_eq!(format_rational(&int(-1)), "-1");
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = ExactMatrix::from_i64_rows(&[&[1, 1, 0], &[1, 1, 1], &[0, 1, 1]]);
        assert_eq!(m.det_fraction_free().unwrap(), int(-1));
        let m = ExactMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.det_fraction_free().unwrap(), int(-1));
        let m = ExactMatrix::from_fn(2, 2, |i, j| rat((i + 2 * j + 1) as i64, 3));
        // [[1/3, 1], [2/3, 4/3]] -> 4/9 - 2/3
        assert_eq!(m.det_fraction_free().unwrap(), rat(-2, 9));
    }

    #[test]
    fn gauss_jordan_inverse() {
        let m = ExactMatrix::from_i64_rows(&[&[1, 1, 0], &[1, 1, 1], &[0, 1, 1]]);
        let inv = m.inverse_exact().unwrap();
        assert_eq!(inv, ExactMatrix::from_i64_rows(&[&[0, 1, -1], &[1, -1, 1], &[-1, 1, 0]]));
        assert!(m.mul(&inv).unwrap().is_identity());
        let sing = ExactMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert!(sing.inverse_exact().unwrap_err().is_singular());
    }
}
