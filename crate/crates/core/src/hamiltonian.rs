//! One-dimensional Hückel Hamiltonians: open chains, cycles and their
//! bond-alternating variants, with analytic eigensystems.
//!
//! On-site energies are fixed at zero (the Fermi level). Couplings are exact
//! rationals: bonds 1–2, 3–4, … carry `coupling_odd` (β) and bonds 2–3, 4–5,
//! … carry `coupling_even` (α). In a cycle the closing bond N–1 is bond N, so
//! for even N it carries α. Site indices in this API are 1-based.

use std::f64::consts::PI;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{to_f64, ExactMatrix, Rational};
use crate::numeric::FloatMatrix;
use crate::summation::compensated_sum;

/// Distance below which an energy counts as sitting on an eigenvalue.
pub const POLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    Open,
    Cyclic,
}

impl std::fmt::Display for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Topology::Open => "open",
            Topology::Cyclic => "cyclic",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    pub topology: Topology,
    pub n_sites: usize,
    /// β: bonds 1–2, 3–4, …
    pub coupling_odd: Rational,
    /// α: bonds 2–3, 4–5, …
    pub coupling_even: Rational,
}

impl ChainSpec {
    /// Uniform chain with unit couplings.
    pub fn new(topology: Topology, n_sites: usize) -> Self {
        ChainSpec {
            topology,
            n_sites,
            coupling_odd: Rational::one(),
            coupling_even: Rational::one(),
        }
    }

    pub fn open(n_sites: usize) -> Self {
        Self::new(Topology::Open, n_sites)
    }

    pub fn cyclic(n_sites: usize) -> Self {
        Self::new(Topology::Cyclic, n_sites)
    }

    /// Sets β (odd bonds) and α (even bonds).
    pub fn with_couplings(mut self, odd: Rational, even: Rational) -> Self {
        self.coupling_odd = odd;
        self.coupling_even = even;
        self
    }

    pub fn is_uniform(&self) -> bool {
        self.coupling_odd.is_one() && self.coupling_even.is_one()
    }

    pub fn has_equal_couplings(&self) -> bool {
        self.coupling_odd == self.coupling_even
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_sites;
        if n == 0 {
            return Err(Error::InvalidSpec("n_sites must be at least 1".into()));
        }
        if self.topology == Topology::Cyclic {
            // N = 2 is the degenerate one-edge "cycle", kept for determinants.
            if n < 2 || (n == 2 && !self.has_equal_couplings()) {
                return Err(Error::CycleTooSmall { n });
            }
        }
        if !self.has_equal_couplings() && n % 2 == 1 {
            return Err(Error::AlternatingOddN { n });
        }
        Ok(())
    }

    /// Coupling on bond `b` (1-based), which joins sites b and b+1 (mod N).
    pub fn bond_coupling(&self, b: usize) -> &Rational {
        if b % 2 == 1 {
            &self.coupling_odd
        } else {
            &self.coupling_even
        }
    }

    /// Converts a 1-based site index to 0-based storage.
    pub fn site(&self, r: usize) -> Result<usize> {
        if r == 0 || r > self.n_sites {
            return Err(Error::IndexOutOfRange {
                index: r,
                n: self.n_sites,
            });
        }
        Ok(r - 1)
    }

    fn common_coupling(&self) -> Result<f64> {
        if !self.has_equal_couplings() {
            return Err(Error::UnsupportedCouplings);
        }
        Ok(to_f64(&self.coupling_odd))
    }
}

/// Real eigenpairs; column `r` of `eigenvectors` belongs to `eigenvalues[r]`.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: FloatMatrix,
    pub omega: f64,
}

pub fn build_hamiltonian(spec: &ChainSpec) -> Result<ExactMatrix> {
    spec.validate()?;
    let n = spec.n_sites;
    let mut h = ExactMatrix::zeros(n, n);
    for b in 1..n {
        let c = spec.bond_coupling(b).clone();
        h[(b - 1, b)] = c.clone();
        h[(b, b - 1)] = c;
    }
    if spec.topology == Topology::Cyclic && n > 2 {
        let c = spec.bond_coupling(n).clone();
        h[(n - 1, 0)] = c.clone();
        h[(0, n - 1)] = c;
    }
    Ok(h)
}

/// sin(π·m/den), with the integer argument reduced first so large products
/// like r·k keep full precision.
pub(crate) fn sin_pi_frac(m: usize, den: usize) -> f64 {
    let m = m % (2 * den);
    (PI * m as f64 / den as f64).sin()
}

pub(crate) fn cos_pi_frac(m: usize, den: usize) -> f64 {
    let m = m % (2 * den);
    (PI * m as f64 / den as f64).cos()
}

/// Closed-form eigensystem for equal couplings c: λ_r = 2c·cos(rπ/(N+1)) with
/// sine eigenvectors on the open chain; λ_j = 2c·cos(2πj/N) on the cycle.
///
/// Cycle eigenvectors are real: the degenerate pair (j, N−j) gets the cosine
/// vector at j and the sine vector at N−j.
pub fn analytic_eigensystem(spec: &ChainSpec) -> Result<EigenSystem> {
    spec.validate()?;
    let c = spec.common_coupling()?;
    let n = spec.n_sites;
    match spec.topology {
        Topology::Open => {
            let norm = (2.0 / (n as f64 + 1.0)).sqrt();
            let eigenvalues = (1..=n).map(|r| 2.0 * c * cos_pi_frac(r, n + 1)).collect();
            let eigenvectors = FloatMatrix::from_fn(n, n, |j, r| norm * sin_pi_frac((j + 1) * (r + 1), n + 1));
            Ok(EigenSystem {
                eigenvalues,
                eigenvectors,
                omega: PI / (n as f64 + 1.0),
            })
        }
        Topology::Cyclic => {
            if n < 3 {
                return Err(Error::CycleTooSmall { n });
            }
            let eigenvalues = (0..n).map(|j| 2.0 * c * cos_pi_frac(2 * j, n)).collect();
            let flat = 1.0 / (n as f64).sqrt();
            let paired = (2.0 / n as f64).sqrt();
            let eigenvectors = FloatMatrix::from_fn(n, n, |m, j| {
                if j == 0 {
                    flat
                } else if 2 * j == n {
                    if m % 2 == 0 {
                        flat
                    } else {
                        -flat
                    }
                } else if 2 * j < n {
                    paired * cos_pi_frac(2 * j * m, n)
                } else {
                    paired * sin_pi_frac(2 * (n - j) * m, n)
                }
            });
            Ok(EigenSystem {
                eigenvalues,
                eigenvectors,
                omega: 2.0 * PI / n as f64,
            })
        }
    }
}

/// Entry (r, s) of (H − E)⁻¹ from the spectral sum Σ_k q_rk q_sk / (λ_k − E).
///
/// At E = 0 this is H⁻¹(r, s), i.e. the negated Green's function −G(r, s).
pub fn spectral_resolvent_entry(spec: &ChainSpec, r: usize, s: usize, energy: f64) -> Result<f64> {
    let eig = analytic_eigensystem(spec)?;
    let (ri, si) = (spec.site(r)?, spec.site(s)?);
    if let Some(&eigenvalue) = eig
        .eigenvalues
        .iter()
        .find(|&&l| (l - energy).abs() < POLE_TOLERANCE)
    {
        return Err(Error::EnergyAtPole { energy, eigenvalue });
    }
    let q = &eig.eigenvectors;
    Ok(compensated_sum(
        eig.eigenvalues
            .iter()
            .enumerate()
            .map(|(k, l)| q[(ri, k)] * q[(si, k)] / (l - energy)),
    ))
}

/// |G(r, s)|², the quantity transmission between sites r and s scales with.
pub fn transmission_proxy(g: &ExactMatrix, r: usize, s: usize) -> Result<Rational> {
    let v = entry_1based(g, r, s)?;
    Ok(v * v)
}

pub fn transmission_proxy_float(g: &FloatMatrix, r: usize, s: usize) -> Result<f64> {
    let n = g.rows();
    for idx in [r, s] {
        if idx == 0 || idx > n || idx > g.cols() {
            return Err(Error::IndexOutOfRange { index: idx, n });
        }
    }
    let v = g[(r - 1, s - 1)];
    Ok(v * v)
}

pub(crate) fn entry_1based(g: &ExactMatrix, r: usize, s: usize) -> Result<&Rational> {
    let n = g.rows();
    for idx in [r, s] {
        if idx == 0 || idx > n || idx > g.cols() {
            return Err(Error::IndexOutOfRange { index: idx, n });
        }
    }
    Ok(&g[(r - 1, s - 1)])
}

/// ‖H q_r − λ_r q_r‖∞ over all columns.
pub fn eigen_residual(h: &FloatMatrix, eig: &EigenSystem) -> f64 {
    let n = h.rows();
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for i in 0..n {
            let hq: f64 = (0..n).map(|k| h[(i, k)] * eig.eigenvectors[(k, r)]).sum();
            worst = worst.max((hq - eig.eigenvalues[r] * eig.eigenvectors[(i, r)]).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use approx::assert_abs_diff_eq;
    use num_traits::Zero;

    #[test]
    fn open_three() {
        let h = build_hamiltonian(&ChainSpec::open(3)).unwrap();
        assert_eq!(h, ExactMatrix::from_i64_rows(&[&[0, 1, 0], &[1, 0, 1], &[0, 1, 0]]));
    }

    #[test]
    fn six_ring_has_corners() {
        let h = build_hamiltonian(&ChainSpec::cyclic(6)).unwrap();
        assert_eq!(h[(0, 5)], int(1));
        assert_eq!(h[(5, 0)], int(1));
        assert!(h.is_symmetric());
        let nnz = h.entries().iter().filter(|v| !v.is_zero()).count();
        assert_eq!(nnz, 12);
    }

    #[test]
    fn alternating_open_four() {
        let spec = ChainSpec::open(4).with_couplings(int(2), int(3));
        let h = build_hamiltonian(&spec).unwrap();
        assert_eq!(
            h,
            ExactMatrix::from_i64_rows(&[&[0, 2, 0, 0], &[2, 0, 3, 0], &[0, 3, 0, 2], &[0, 0, 2, 0]])
        );
    }

    #[test]
    fn alternating_odd_rejected() {
        let spec = ChainSpec::open(5).with_couplings(int(1), int(2));
        assert_eq!(build_hamiltonian(&spec), Err(Error::AlternatingOddN { n: 5 }));
        // Equal non-unit couplings are not alternation.
        let spec = ChainSpec::open(5).with_couplings(rat(1, 2), rat(1, 2));
        assert!(build_hamiltonian(&spec).is_ok());
    }

    #[test]
    fn tiny_cycles() {
        assert_eq!(build_hamiltonian(&ChainSpec::cyclic(1)), Err(Error::CycleTooSmall { n: 1 }));
        let h = build_hamiltonian(&ChainSpec::cyclic(2)).unwrap();
        assert_eq!(h, ExactMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]));
        let alt = ChainSpec::cyclic(2).with_couplings(int(1), int(2));
        assert_eq!(build_hamiltonian(&alt), Err(Error::CycleTooSmall { n: 2 }));
        assert!(matches!(
            analytic_eigensystem(&ChainSpec::cyclic(2)),
            Err(Error::CycleTooSmall { .. })
        ));
    }

    #[test]
    fn eigenvalues_small_chains() {
        let e = analytic_eigensystem(&ChainSpec::open(2)).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.eigenvalues[1], -1.0, epsilon = 1e-15);
        let e = analytic_eigensystem(&ChainSpec::open(1)).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], 0.0, epsilon = 1e-15);
        let e = analytic_eigensystem(&ChainSpec::cyclic(6)).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.eigenvalues[3], -2.0, epsilon = 1e-15);
    }

    #[test]
    fn unequal_couplings_unsupported() {
        let spec = ChainSpec::open(4).with_couplings(int(1), int(2));
        assert!(matches!(analytic_eigensystem(&spec), Err(Error::UnsupportedCouplings)));
    }

    #[test]
    fn eigenpairs_satisfy_hamiltonian() {
        for n in [1, 2, 3, 7, 10, 31, 64] {
            for spec in [ChainSpec::open(n), ChainSpec::cyclic(n.max(3))] {
                let h = build_hamiltonian(&spec).unwrap().to_float();
                let e = analytic_eigensystem(&spec).unwrap();
                assert!(eigen_residual(&h, &e) <= 1e-10, "{spec:?}");
                for r in 0..spec.n_sites {
                    let norm: f64 = (0..spec.n_sites).map(|i| e.eigenvectors[(i, r)].powi(2)).sum();
                    assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn scaled_couplings_scale_spectrum() {
        let spec = ChainSpec::open(5).with_couplings(int(3), int(3));
        let h = build_hamiltonian(&spec).unwrap().to_float();
        let e = analytic_eigensystem(&spec).unwrap();
        assert!(eigen_residual(&h, &e) <= 1e-10);
    }

    #[test]
    fn resolvent_examples() {
        let spec = ChainSpec::open(2);
        assert_abs_diff_eq!(spectral_resolvent_entry(&spec, 1, 2, 0.0).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(spectral_resolvent_entry(&spec, 1, 1, 0.0).unwrap(), 0.0, epsilon = 1e-12);
        for (r, s) in [(1, 1), (1, 2), (3, 2)] {
            assert!(matches!(
                spectral_resolvent_entry(&ChainSpec::open(3), r, s, 0.0),
                Err(Error::EnergyAtPole { .. })
            ));
        }
        assert!(matches!(
            spectral_resolvent_entry(&spec, 3, 1, 0.0),
            Err(Error::IndexOutOfRange { index: 3, n: 2 })
        ));
    }

    #[test]
    fn resolvent_off_zero_matches_dense_solve() {
        let spec = ChainSpec::open(5);
        let e = 0.3;
        let mut shifted = build_hamiltonian(&spec).unwrap().to_float();
        for i in 0..5 {
            shifted[(i, i)] -= e;
        }
        let inv = crate::numeric::lu_inverse(&shifted).unwrap();
        for r in 1..=5 {
            for s in 1..=5 {
                let v = spectral_resolvent_entry(&spec, r, s, e).unwrap();
                assert_abs_diff_eq!(v, inv[(r - 1, s - 1)], epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn transmission() {
        let g = ExactMatrix::from_i64_rows(&[&[0, -1, 0], &[-1, 0, 0], &[0, 0, 0]]);
        assert_eq!(transmission_proxy(&g, 1, 2).unwrap(), int(1));
        assert_eq!(transmission_proxy(&g, 1, 3).unwrap(), int(0));
        assert!(matches!(
            transmission_proxy(&g, 4, 1),
            Err(Error::IndexOutOfRange { .. })
        ));
        let alt = ExactMatrix::from_i64_rows(&[&[0, 2], &[2, 0]]).inverse_exact().unwrap().neg();
        assert_eq!(transmission_proxy(&alt, 2, 1).unwrap(), rat(1, 4));
    }
}
