//! Reference dense linear algebra in double precision.
//!
//! This is the independent check on every closed form: LU with partial
//! pivoting for inverses and determinants, and a symmetric eigensolver for
//! spectra. Hückel matrices have a zero diagonal, so unpivoted elimination
//! breaks down at the first step.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Inverses whose 1-norm condition number exceeds this are reported singular.
pub const CONDITION_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct FloatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl FloatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FloatMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        FloatMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data: Vec<f64> = rows.iter().flatten().copied().collect();
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpec("non-finite matrix entry".into()));
        }
        Ok(FloatMatrix {
            rows: rows.len(),
            cols: c,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn neg(&self) -> Self {
        FloatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }

    pub fn mul(&self, rhs: &FloatMatrix) -> Result<FloatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch("matrix product".into()));
        }
        let mut out = FloatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Max-abs entrywise distance.
    pub fn max_abs_diff(&self, other: &FloatMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Induced infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// ‖self · other + I‖∞; zero when `other` is the Green's function of `self`.
    pub fn green_residual(&self, green: &FloatMatrix) -> Result<f64> {
        let mut p = self.mul(green)?;
        for i in 0..p.rows.min(p.cols) {
            p[(i, i)] += 1.0;
        }
        Ok(p.norm_inf())
    }
}

impl Index<(usize, usize)> for FloatMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for FloatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

struct Lu {
    lu: FloatMatrix,
    perm: Vec<usize>,
    sign: f64,
    /// First pivot that fell below tolerance, if any.
    zero_pivot: Option<usize>,
}

fn lu_decompose(m: &FloatMatrix) -> Result<Lu> {
    if m.rows != m.cols {
        return Err(Error::DimensionMismatch("LU of non-square matrix".into()));
    }
    let n = m.rows;
    let mut lu = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let tol = m.norm_inf().max(f64::MIN_POSITIVE) * f64::EPSILON * n as f64;
    let mut zero_pivot = None;
    for k in 0..n {
        let (p, best) = (k..n)
            .map(|i| (i, lu[(i, k)].abs()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= tol {
            zero_pivot.get_or_insert(k);
            continue;
        }
        if p != k {
            for j in 0..n {
                lu.data.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let piv = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / piv;
            if f == 0.0 {
                continue;
            }
            lu[(i, k)] = f;
            for j in k + 1..n {
                let v = lu[(k, j)];
                lu[(i, j)] -= f * v;
            }
        }
    }
    Ok(Lu {
        lu,
        perm,
        sign,
        zero_pivot,
    })
}

/// Inverse via LU with partial pivoting.
///
/// Fails with [`Error::NumericallySingular`] when a pivot vanishes or the
/// 1-norm condition number exceeds [`CONDITION_LIMIT`].
pub fn lu_inverse(m: &FloatMatrix) -> Result<FloatMatrix> {
    let Lu {
        lu, perm, zero_pivot, ..
    } = lu_decompose(m)?;
    if let Some(pivot) = zero_pivot {
        return Err(Error::NumericallySingular { pivot });
    }
    let n = m.rows;
    let mut inv = FloatMatrix::zeros(n, n);
    let mut col = vec![0.0; n];
    for j in 0..n {
        for (i, c) in col.iter_mut().enumerate() {
            *c = if perm[i] == j { 1.0 } else { 0.0 };
        }
        for i in 0..n {
            let mut s = col[i];
            for k in 0..i {
                s -= lu[(i, k)] * col[k];
            }
            col[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = col[i];
            for k in i + 1..n {
                s -= lu[(i, k)] * col[k];
            }
            col[i] = s / lu[(i, i)];
        }
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    if m.norm_one() * inv.norm_one() > CONDITION_LIMIT {
        let pivot = (0..n)
            .min_by(|&a, &b| lu[(a, a)].abs().total_cmp(&lu[(b, b)].abs()))
            .unwrap_or(0);
        return Err(Error::NumericallySingular { pivot });
    }
    Ok(inv)
}

/// Determinant from the LU pivots; 0.0 when a pivot falls below tolerance.
pub fn det_float(m: &FloatMatrix) -> Result<f64> {
    let Lu {
        lu, sign, zero_pivot, ..
    } = lu_decompose(m)?;
    if zero_pivot.is_some() {
        return Ok(0.0);
    }
    Ok((0..m.rows).fold(sign, |acc, i| acc * lu[(i, i)]))
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &FloatMatrix) -> Result<Vec<f64>> {
    if m.rows != m.cols {
        return Err(Error::DimensionMismatch("eigenvalues of non-square matrix".into()));
    }
    let asymmetry = m.max_asymmetry();
    if asymmetry > 1e-12 {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let dm = nalgebra::DMatrix::from_row_slice(m.rows, m.cols, &m.data);
    let mut values: Vec<f64> = dm.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn open_chain(n: usize) -> FloatMatrix {
        FloatMatrix::from_fn(n, n, |i, j| if i.abs_diff(j) == 1 { 1.0 } else { 0.0 })
    }

    fn cycle(n: usize) -> FloatMatrix {
        FloatMatrix::from_fn(n, n, |i, j| {
            let d = i.abs_diff(j);
            if d == 1 || d == n - 1 {
                1.0
            } else {
                0.0
            }
        })
    }

    #[test]
    fn swap_is_self_inverse() {
        let m = open_chain(2);
        assert_eq!(lu_inverse(&m).unwrap(), m);
    }

    #[test]
    fn open_chain_six_inverse() {
        let inv = lu_inverse(&open_chain(6)).unwrap();
        // Negated first column of the Green's function pattern.
        let col = [0.0, 1.0, 0.0, -1.0, 0.0, 1.0];
        for (i, v) in col.iter().enumerate() {
            assert_abs_diff_eq!(inv[(i, 0)], *v, epsilon = 1e-12);
        }
    }

    #[test]
    fn odd_chain_is_singular() {
        assert!(matches!(
            lu_inverse(&open_chain(5)),
            Err(Error::NumericallySingular { .. })
        ));
    }

    #[test]
    fn determinants() {
        assert_abs_diff_eq!(det_float(&open_chain(4)).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(det_float(&cycle(6)).unwrap(), -4.0, epsilon = 1e-10);
        assert_eq!(det_float(&FloatMatrix::identity(5)).unwrap(), 1.0);
        assert_eq!(det_float(&open_chain(5)).unwrap(), 0.0);
    }

    #[test]
    fn eigenvalues() {
        let ev = symmetric_eigenvalues(&open_chain(2)).unwrap();
        assert_abs_diff_eq!(ev[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[1], 1.0, epsilon = 1e-12);
        let ev = symmetric_eigenvalues(&cycle(6)).unwrap();
        assert_abs_diff_eq!(ev[0], -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[5], 2.0, epsilon = 1e-12);
        let mut bad = FloatMatrix::identity(2);
        bad[(0, 1)] = 1.0;
        assert!(matches!(symmetric_eigenvalues(&bad), Err(Error::NotSymmetric { .. })));
    }
}
