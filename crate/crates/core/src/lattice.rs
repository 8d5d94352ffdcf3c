//! Hypercubic lattices built as Kronecker sums of the open chain,
//! H_d = Σ_i I ⊗ … ⊗ H₁ ⊗ … ⊗ I, and their spectral Green's function.
//!
//! Sites are addressed by 1-based multi-indices flattened row-major with the
//! first axis slowest. Since H₁ = Q Λ Q with the symmetric sine matrix Q, the
//! lattice Green's function is G_d = −Q^{⊗d} Λ_d⁻¹ Q^{⊗d}; it exists exactly
//! when no cosine sum 2 Σ cos(k_i ω) vanishes, which is decided by
//! [`crate::vanishing`] rather than by a float threshold.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{check_dense_cells, ExactMatrix, Rational};
use crate::hamiltonian::{cos_pi_frac, sin_pi_frac};
use crate::numeric::FloatMatrix;
use crate::summation::compensated_sum;
use crate::vanishing::{find_vanishing_witness, is_invertible, InvertibilityQuery};

use num_traits::One;

/// Lattices with more sites than this are refused outright.
pub const MAX_SITES: u128 = 1 << 20;

/// Largest lattice for which the dense Green's function is assembled.
pub const MAX_GREEN_SITES: usize = 4096;

/// Node budget for the witness attached to a singular-lattice error.
const WITNESS_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeSpec {
    pub dim: usize,
    pub linear_size: usize,
}

impl LatticeSpec {
    pub fn new(dim: usize, linear_size: usize) -> Result<Self> {
        let spec = LatticeSpec { dim, linear_size };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.linear_size == 0 {
            return Err(Error::InvalidSpec("lattice needs d >= 1 and N >= 1".into()));
        }
        let sites = (self.linear_size as u128).checked_pow(self.dim as u32);
        match sites {
            Some(s) if s <= MAX_SITES => Ok(()),
            _ => Err(Error::TooLarge {
                cells: sites.unwrap_or(u128::MAX),
                limit: MAX_SITES,
            }),
        }
    }

    pub fn sites(&self) -> usize {
        self.linear_size.pow(self.dim as u32)
    }

    fn query(&self) -> InvertibilityQuery {
        InvertibilityQuery {
            dim: self.dim,
            n: self.linear_size + 1,
        }
    }

    /// SingularLattice (with a witness when one is found) unless the
    /// predicate says the Green's function exists.
    pub fn require_invertible(&self) -> Result<()> {
        self.validate()?;
        let q = self.query();
        if is_invertible(q) {
            return Ok(());
        }
        let witness = find_vanishing_witness(q, WITNESS_BUDGET).ok().flatten().map(|w| w.ks);
        Err(Error::SingularLattice {
            dim: self.dim,
            n: self.linear_size,
            witness,
        })
    }
}

/// Site or wave-vector coordinates (k_1, …, k_d), each in 1..=N.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    pub coords: Vec<usize>,
}

impl MultiIndex {
    pub fn new(coords: Vec<usize>) -> Self {
        MultiIndex { coords }
    }

    pub fn check(&self, spec: &LatticeSpec) -> Result<()> {
        if self.coords.len() != spec.dim {
            return Err(Error::DimensionMismatch(format!(
                "multi-index has {} coordinates, lattice has d={}",
                self.coords.len(),
                spec.dim
            )));
        }
        for &k in &self.coords {
            if k == 0 || k > spec.linear_size {
                return Err(Error::IndexOutOfRange {
                    index: k,
                    n: spec.linear_size,
                });
            }
        }
        Ok(())
    }

    /// 0-based row-major position: Σ (k_i − 1) N^{d−i}.
    pub fn flat(&self, spec: &LatticeSpec) -> usize {
        self.coords
            .iter()
            .fold(0, |acc, &k| acc * spec.linear_size + (k - 1))
    }

    pub fn from_flat(spec: &LatticeSpec, mut flat: usize) -> Self {
        let n = spec.linear_size;
        let mut coords = vec![0; spec.dim];
        for c in coords.iter_mut().rev() {
            *c = flat % n + 1;
            flat /= n;
        }
        MultiIndex { coords }
    }
}

/// Calls `f(site, neighbour)` for each ordered nearest-neighbour pair
/// (0-based flat indices).
fn for_each_bond(spec: &LatticeSpec, mut f: impl FnMut(usize, usize)) {
    let n = spec.linear_size;
    let sites = spec.sites();
    let mut stride = 1;
    for _ in 0..spec.dim {
        for site in 0..sites {
            let coord = (site / stride) % n;
            if coord > 0 {
                f(site, site - stride);
            }
            if coord + 1 < n {
                f(site, site + stride);
            }
        }
        stride *= n;
    }
}

pub fn build_lattice_hamiltonian(spec: &LatticeSpec) -> Result<ExactMatrix> {
    spec.validate()?;
    let sites = spec.sites();
    check_dense_cells(sites, sites)?;
    let mut h = ExactMatrix::zeros(sites, sites);
    for_each_bond(spec, |a, b| h[(a, b)] = Rational::one());
    Ok(h)
}

pub fn build_lattice_hamiltonian_float(spec: &LatticeSpec) -> Result<FloatMatrix> {
    spec.validate()?;
    let sites = spec.sites();
    check_dense_cells(sites, sites)?;
    let mut h = FloatMatrix::zeros(sites, sites);
    for_each_bond(spec, |a, b| h[(a, b)] = 1.0);
    Ok(h)
}

/// ‖H_d G + I‖∞ using the sparse neighbour structure of H_d.
pub fn lattice_green_residual(spec: &LatticeSpec, g: &FloatMatrix) -> Result<f64> {
    spec.validate()?;
    let sites = spec.sites();
    if g.rows() != sites || g.cols() != sites {
        return Err(Error::DimensionMismatch("Green's function size".into()));
    }
    let mut product = FloatMatrix::zeros(sites, sites);
    for_each_bond(spec, |a, b| {
        for j in 0..sites {
            product[(a, j)] += g[(b, j)];
        }
    });
    for i in 0..sites {
        product[(i, i)] += 1.0;
    }
    Ok(product.norm_inf())
}

/// 2 Σ_i cos(k_i π/(N+1)).
pub fn lattice_eigenvalue(spec: &LatticeSpec, k: &MultiIndex) -> Result<f64> {
    k.check(spec)?;
    let den = spec.linear_size + 1;
    Ok(2.0 * compensated_sum(k.coords.iter().map(|&ki| cos_pi_frac(ki, den))))
}

/// All N^d eigenvalues in flat wave-vector order.
pub fn lattice_spectrum(spec: &LatticeSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    (0..spec.sites())
        .map(|f| lattice_eigenvalue(spec, &MultiIndex::from_flat(spec, f)))
        .collect()
}

/// Q[r][k] = √(2/(N+1)) sin(rkπ/(N+1)), 0-based storage of 1-based indices.
fn sine_basis(n: usize) -> Vec<Vec<f64>> {
    let scale = (2.0 / (n + 1) as f64).sqrt();
    (1..=n)
        .map(|r| (1..=n).map(|k| scale * sin_pi_frac(r * k, n + 1)).collect())
        .collect()
}

fn axis_cosines(n: usize) -> Vec<f64> {
    (1..=n).map(|k| 2.0 * cos_pi_frac(k, n + 1)).collect()
}

/// G(r, s) = −Σ_k Π_i Q[r_i][k_i] Q[s_i][k_i] / λ(k).
///
/// The sum is split by the first wave-vector coordinate; the slices run in
/// parallel and are recombined in a fixed order, so the result does not
/// depend on scheduling.
pub fn lattice_green_entry(spec: &LatticeSpec, r: &MultiIndex, s: &MultiIndex) -> Result<f64> {
    r.check(spec)?;
    s.check(spec)?;
    spec.require_invertible()?;
    let n = spec.linear_size;
    let q = sine_basis(n);
    let cos = axis_cosines(n);
    // weights[i][k] = Q[r_i][k] Q[s_i][k]
    let weights: Vec<Vec<f64>> = r
        .coords
        .iter()
        .zip(&s.coords)
        .map(|(&ri, &si)| (0..n).map(|k| q[ri - 1][k] * q[si - 1][k]).collect())
        .collect();
    let inner = n.pow(spec.dim as u32 - 1);
    let slice = |k1: usize| {
        compensated_sum((0..inner).map(|rest| {
            let mut w = weights[0][k1];
            let mut lambda = cos[k1];
            let mut rem = rest;
            for axis in (1..spec.dim).rev() {
                let k = rem % n;
                rem /= n;
                w *= weights[axis][k];
                lambda += cos[k];
            }
            w / lambda
        }))
    };
    let partials: Vec<f64> = (0..n).into_par_iter().map(slice).collect();
    Ok(-compensated_sum(partials))
}

/// Applies Q along `axis` of a d-way tensor of side n stored row-major.
fn mode_product(q: &[Vec<f64>], data: &mut [f64], scratch: &mut [f64], n: usize, dim: usize, axis: usize) {
    let inner = n.pow((dim - axis - 1) as u32);
    let outer = n.pow(axis as u32);
    scratch.iter_mut().for_each(|v| *v = 0.0);
    for o in 0..outer {
        let base = o * n * inner;
        for (a, q_row) in q.iter().enumerate() {
            let dst = base + a * inner;
            for (b, &qab) in q_row.iter().enumerate() {
                let src = base + b * inner;
                for t in 0..inner {
                    scratch[dst + t] += qab * data[src + t];
                }
            }
        }
    }
    data.copy_from_slice(scratch);
}

/// Dense G_d = −Q^{⊗d} Λ_d⁻¹ Q^{⊗d}, built column by column with one mode
/// product per axis instead of forming Q^{⊗d}.
pub fn lattice_green_matrix(spec: &LatticeSpec) -> Result<FloatMatrix> {
    spec.validate()?;
    let sites = spec.sites();
    if sites > MAX_GREEN_SITES {
        return Err(Error::TooLarge {
            cells: sites as u128,
            limit: MAX_GREEN_SITES as u128,
        });
    }
    spec.require_invertible()?;
    let n = spec.linear_size;
    let dim = spec.dim;
    let q = sine_basis(n);
    let lambda = lattice_spectrum(spec)?;
    let columns: Vec<Vec<f64>> = (0..sites)
        .into_par_iter()
        .map(|col| {
            let s = MultiIndex::from_flat(spec, col);
            let mut y: Vec<f64> = (0..sites)
                .map(|f| {
                    let k = MultiIndex::from_flat(spec, f);
                    let w: f64 = s.coords.iter().zip(&k.coords).map(|(&si, &ki)| q[si - 1][ki - 1]).product();
                    -w / lambda[f]
                })
                .collect();
            let mut scratch = vec![0.0; sites];
            for axis in 0..dim {
                mode_product(&q, &mut y, &mut scratch, n, dim, axis);
            }
            y
        })
        .collect();
    Ok(FloatMatrix::from_fn(sites, sites, |i, j| columns[j][i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{green_open, GreenEntryQuery};
    use crate::exact::to_f64;
    use crate::hamiltonian::{build_hamiltonian, ChainSpec};
    use crate::numeric::{lu_inverse, symmetric_eigenvalues};
    use approx::assert_abs_diff_eq;

    fn spec(d: usize, n: usize) -> LatticeSpec {
        LatticeSpec::new(d, n).unwrap()
    }

    fn mi(c: &[usize]) -> MultiIndex {
        MultiIndex::new(c.to_vec())
    }

    #[test]
    fn flattening_round_trip() {
        let sp = spec(3, 4);
        assert_eq!(mi(&[1, 1, 1]).flat(&sp), 0);
        assert_eq!(mi(&[1, 1, 2]).flat(&sp), 1);
        assert_eq!(mi(&[2, 1, 1]).flat(&sp), 16);
        for f in 0..sp.sites() {
            assert_eq!(MultiIndex::from_flat(&sp, f).flat(&sp), f);
        }
    }

    #[test]
    fn builders() {
        let sq = build_lattice_hamiltonian(&spec(2, 2)).unwrap();
        assert_eq!(sq, ExactMatrix::from_i64_rows(&[&[0, 1, 1, 0], &[1, 0, 0, 1], &[1, 0, 0, 1], &[0, 1, 1, 0]]));
        let line = build_lattice_hamiltonian(&spec(1, 5)).unwrap();
        assert_eq!(line, build_hamiltonian(&ChainSpec::open(5)).unwrap());
        let cube = build_lattice_hamiltonian(&spec(3, 2)).unwrap().to_float();
        assert!(cube.max_asymmetry() == 0.0);
        for i in 0..8 {
            assert_eq!(cube.row(i).iter().sum::<f64>(), 3.0);
        }
        assert!(matches!(LatticeSpec::new(3, 102), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn eigenvalue_examples() {
        let v = lattice_eigenvalue(&spec(3, 4), &mi(&[1, 1, 1])).unwrap();
        assert_abs_diff_eq!(v, 6.0 * (std::f64::consts::PI / 5.0).cos(), epsilon = 1e-12);
        assert_abs_diff_eq!(lattice_eigenvalue(&spec(2, 3), &mi(&[1, 3])).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(lattice_eigenvalue(&spec(1, 2), &mi(&[1])).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn spectrum_matches_dense() {
        for (d, n) in [(2, 3), (3, 3), (2, 5)] {
            let sp = spec(d, n);
            let mut a = lattice_spectrum(&sp).unwrap();
            a.sort_by(f64::total_cmp);
            let b = symmetric_eigenvalues(&build_lattice_hamiltonian_float(&sp).unwrap()).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn entry_reduces_to_chain() {
        assert_abs_diff_eq!(lattice_green_entry(&spec(1, 6), &mi(&[2]), &mi(&[1])).unwrap(), -1.0, epsilon = 1e-10);
        for n in [2, 4, 8] {
            for r in 1..=n {
                for s in 1..=n {
                    let exact = green_open(&GreenEntryQuery::new(ChainSpec::open(n), r, s).unwrap()).unwrap();
                    let v = lattice_green_entry(&spec(1, n), &mi(&[r]), &mi(&[s])).unwrap();
                    assert_abs_diff_eq!(v, to_f64(&exact), epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn singular_lattices() {
        match lattice_green_entry(&spec(2, 4), &mi(&[1, 1]), &mi(&[1, 1])) {
            Err(Error::SingularLattice { witness: Some(w), .. }) => assert_eq!(w.len(), 2),
            other => panic!("{other:?}"),
        }
        match lattice_green_matrix(&spec(3, 8)) {
            Err(Error::SingularLattice { witness: Some(w), .. }) => assert_eq!(w, vec![2, 4, 8]),
            other => panic!("{other:?}"),
        }
        assert!(matches!(lattice_green_matrix(&spec(3, 20)), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn matrix_inverts_hamiltonian() {
        let g1 = lattice_green_matrix(&spec(1, 4)).unwrap();
        let h1 = build_lattice_hamiltonian_float(&spec(1, 4)).unwrap();
        assert!(g1.max_abs_diff(&lu_inverse(&h1).unwrap().neg()) < 1e-10);

        let sp = spec(3, 4);
        let g = lattice_green_matrix(&sp).unwrap();
        let h = build_lattice_hamiltonian_float(&sp).unwrap();
        assert!(h.green_residual(&g).unwrap() <= 1e-8);
        assert!(lattice_green_residual(&sp, &g).unwrap() <= 1e-8);
        assert!(g.max_asymmetry() <= 1e-10);
        let e = lattice_green_entry(&sp, &mi(&[1, 1, 1]), &mi(&[1, 1, 1])).unwrap();
        assert_abs_diff_eq!(e, g[(0, 0)], epsilon = 1e-10);
    }
}
