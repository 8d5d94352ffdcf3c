//! Exact inverse of a general tridiagonal matrix via Usmani's θ/φ recursions.
//!
//! For A with diagonal b, superdiagonal c (c_k = A[k, k+1]) and subdiagonal a
//! (a_k = A[k+1, k]), all 1-based:
//!
//! ```text
//! θ_r = b_r θ_{r-1} − a_{r-1} c_{r-1} θ_{r-2},   θ_{-1} = 0, θ_0 = 1
//! φ_s = b_s φ_{s+1} − c_s a_s φ_{s+2},           φ_{N+1} = 1, φ_{N+2} = 0
//!
//! A⁻¹(r, s) = (−1)^{r+s} c_r…c_{s−1} θ_{r−1} φ_{s+1} / θ_N    r < s
//!           = θ_{r−1} φ_{r+1} / θ_N                          r = s
//!           = (−1)^{r+s} a_s…a_{r−1} θ_{s−1} φ_{r+1} / θ_N    r > s
//! ```
//!
//! θ_N is the determinant. Everything is exact rational arithmetic.

use num_traits::{One, Zero};

use crate::error::{Error, Result, SingularCase};
use crate::exact::{ExactMatrix, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSpec {
    /// a_1..a_{N−1}, a_k = A[k+1, k].
    pub sub: Vec<Rational>,
    /// b_1..b_N.
    pub diag: Vec<Rational>,
    /// c_1..c_{N−1}, c_k = A[k, k+1].
    pub sup: Vec<Rational>,
}

impl TridiagonalSpec {
    pub fn new(sub: Vec<Rational>, diag: Vec<Rational>, sup: Vec<Rational>) -> Result<Self> {
        let spec = TridiagonalSpec { sub, diag, sup };
        spec.validate()?;
        Ok(spec)
    }

    /// Extracts the three diagonals of a square matrix, which must be tridiagonal.
    pub fn from_matrix(m: &ExactMatrix) -> Result<Self> {
        if !m.is_square() || m.rows() == 0 {
            return Err(Error::DimensionMismatch("tridiagonal needs a nonempty square matrix".into()));
        }
        let n = m.rows();
        for i in 0..n {
            for j in 0..n {
                if i.abs_diff(j) > 1 && !m[(i, j)].is_zero() {
                    return Err(Error::InvalidSpec(format!("entry ({},{}) off the band", i + 1, j + 1)));
                }
            }
        }
        Ok(TridiagonalSpec {
            sub: (0..n - 1).map(|k| m[(k + 1, k)].clone()).collect(),
            diag: (0..n).map(|k| m[(k, k)].clone()).collect(),
            sup: (0..n - 1).map(|k| m[(k, k + 1)].clone()).collect(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.diag.len();
        if n == 0 || self.sub.len() + 1 != n || self.sup.len() + 1 != n {
            return Err(Error::DimensionMismatch(format!(
                "diagonal lengths {}/{}/{}",
                self.sub.len(),
                n,
                self.sup.len()
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn to_matrix(&self) -> ExactMatrix {
        let n = self.n();
        let mut m = ExactMatrix::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = self.diag[k].clone();
        }
        for k in 0..n - 1 {
            m[(k + 1, k)] = self.sub[k].clone();
            m[(k, k + 1)] = self.sup[k].clone();
        }
        m
    }

    // 1-based accessors matching the recursions.
    fn a(&self, k: usize) -> &Rational {
        &self.sub[k - 1]
    }
    fn b(&self, k: usize) -> &Rational {
        &self.diag[k - 1]
    }
    fn c(&self, k: usize) -> &Rational {
        &self.sup[k - 1]
    }
}

/// θ_{−1}..θ_N and φ_1..φ_{N+2}.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaPhiTables {
    theta: Vec<Rational>,
    phi: Vec<Rational>,
}

impl ThetaPhiTables {
    pub fn n(&self) -> usize {
        self.theta.len() - 2
    }

    /// θ_r for r in −1..=N.
    pub fn theta(&self, r: isize) -> &Rational {
        &self.theta[(r + 1) as usize]
    }

    /// φ_s for s in 1..=N+2.
    pub fn phi(&self, s: usize) -> &Rational {
        &self.phi[s - 1]
    }

    pub fn determinant(&self) -> &Rational {
        self.theta(self.n() as isize)
    }

    /// Full θ table starting at θ_{−1}.
    pub fn theta_table(&self) -> &[Rational] {
        &self.theta
    }

    pub fn phi_table(&self) -> &[Rational] {
        &self.phi
    }
}

pub fn theta_phi(spec: &TridiagonalSpec) -> Result<ThetaPhiTables> {
    spec.validate()?;
    let n = spec.n();
    let mut theta = Vec::with_capacity(n + 2);
    theta.push(Rational::zero());
    theta.push(Rational::one());
    for r in 1..=n {
        // theta[i] holds θ_{i−1}
        let mut t = spec.b(r) * &theta[r];
        if r >= 2 {
            t -= spec.a(r - 1) * spec.c(r - 1) * &theta[r - 1];
        }
        theta.push(t);
    }
    // phi[i] holds φ_{i+1}
    let mut phi = vec![Rational::zero(); n + 2];
    phi[n] = Rational::one();
    for s in (1..=n).rev() {
        let mut p = spec.b(s) * &phi[s];
        if s < n {
            p -= spec.c(s) * spec.a(s) * &phi[s + 1];
        }
        phi[s - 1] = p;
    }
    Ok(ThetaPhiTables { theta, phi })
}

fn sign(r: usize, s: usize) -> Rational {
    if (r + s) % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn check_invertible(spec: &TridiagonalSpec, tables: &ThetaPhiTables) -> Result<()> {
    if tables.determinant().is_zero() {
        return Err(Error::singular(
            spec.n(),
            SingularCase::ZeroTheta {
                theta: tables.theta.clone(),
            },
        ));
    }
    Ok(())
}

/// Single entry A⁻¹(r, s), 1-based, in O(N) given the tables.
pub fn usmani_entry(spec: &TridiagonalSpec, tables: &ThetaPhiTables, r: usize, s: usize) -> Result<Rational> {
    let n = spec.n();
    for idx in [r, s] {
        if idx == 0 || idx > n {
            return Err(Error::IndexOutOfRange { index: idx, n });
        }
    }
    check_invertible(spec, tables)?;
    let det = tables.determinant();
    let v = if r == s {
        tables.theta(r as isize - 1) * tables.phi(r + 1)
    } else if r < s {
        let prod = (r..s).fold(Rational::one(), |acc, k| acc * spec.c(k));
        sign(r, s) * prod * tables.theta(r as isize - 1) * tables.phi(s + 1)
    } else {
        let prod = (s..r).fold(Rational::one(), |acc, k| acc * spec.a(k));
        sign(r, s) * prod * tables.theta(s as isize - 1) * tables.phi(r + 1)
    };
    Ok(v / det)
}

/// Full exact inverse in O(N²) entry operations: the c- and a-products are
/// extended one factor at a time along each row.
pub fn usmani_inverse(spec: &TridiagonalSpec) -> Result<ExactMatrix> {
    let tables = theta_phi(spec)?;
    check_invertible(spec, &tables)?;
    let n = spec.n();
    let inv_det = tables.determinant().recip();
    let mut out = ExactMatrix::zeros(n, n);
    for r in 1..=n {
        let th = tables.theta(r as isize - 1);
        out[(r - 1, r - 1)] = th * tables.phi(r + 1) * &inv_det;
        // r < s: walk right along row r.
        let mut prod = Rational::one();
        for s in r + 1..=n {
            prod *= spec.c(s - 1);
            if prod.is_zero() {
                break;
            }
            out[(r - 1, s - 1)] = sign(r, s) * &prod * th * tables.phi(s + 1) * &inv_det;
        }
        // r > s: walk left along row r; product a_s…a_{r−1}.
        let ph = tables.phi(r + 1);
        let mut prod = Rational::one();
        for s in (1..r).rev() {
            prod *= spec.a(s);
            if prod.is_zero() {
                break;
            }
            out[(r - 1, s - 1)] = sign(r, s) * &prod * tables.theta(s as isize - 1) * ph * &inv_det;
        }
    }
    Ok(out)
}
