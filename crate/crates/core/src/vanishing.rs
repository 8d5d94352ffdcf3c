//! When does Σ_{i=1}^d cos(k_i π / n) vanish for some 1 ≤ k_i ≤ n−1?
//!
//! That question decides whether the d-dimensional lattice Hamiltonian with
//! N = n − 1 sites per axis is invertible. Three pieces live here:
//!
//! * [`is_invertible`], the closed-form predicate;
//! * [`cosine_sum_is_zero_exact`], an exact test in the cyclotomic integers:
//!   2 Σ cos(k_i π/n) = Σ ζ^{k_i} + ζ^{−k_i} with ζ a primitive 2n-th root of
//!   unity, which vanishes iff the integer polynomial Σ x^{k_i} + x^{2n−k_i}
//!   is divisible by Φ_{2n};
//! * [`find_vanishing_witness`], an exhaustive branch-and-bound search whose
//!   candidates are confirmed by the exact test. Floats only prune.
//!
//! The predicate: n odd, d odd, and either d is below the smallest prime
//! divisor p of n, or n itself is prime. A vanishing sum of 2n-th roots of
//! unity avoiding ±1 decomposes into antipodal pairs and rotated p-gons; for
//! odd d at least one p-gon is needed, and when n = p every p-gon in the
//! 2p-th roots contains +1 or −1.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};

/// Candidate sums within this of zero go to the exact test.
const CANDIDATE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvertibilityQuery {
    pub dim: usize,
    /// n = N + 1.
    pub n: usize,
}

impl InvertibilityQuery {
    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpec("dimension must be at least 1".into()));
        }
        if n < 2 {
            return Err(Error::InvalidSpec(format!("n = N+1 must be at least 2, got {n}")));
        }
        Ok(InvertibilityQuery { dim, n })
    }
}

/// k_1 ≤ … ≤ k_d with Σ cos(k_i π/n) = 0, confirmed exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosineWitness {
    pub ks: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    EvenModulus { n: usize },
    EvenDimension,
    BelowSmallestPrime { dim: usize, prime: usize },
    PrimeModulus { n: usize },
    AtOrAboveSmallestPrime { dim: usize, prime: usize },
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::EvenModulus { n } => write!(f, "N+1={n} even"),
            Reason::EvenDimension => write!(f, "even dimension"),
            Reason::BelowSmallestPrime { dim, prime } => write!(f, "{dim} < {prime}"),
            Reason::PrimeModulus { n } => write!(f, "N+1={n} prime"),
            Reason::AtOrAboveSmallestPrime { dim, prime } => write!(f, "{dim} >= {prime}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub invertible: bool,
    pub reason: Reason,
}

pub fn smallest_prime_divisor(n: usize) -> usize {
    assert!(n >= 2, "smallest_prime_divisor needs n >= 2");
    if n % 2 == 0 {
        return 2;
    }
    let mut p = 3;
    while p * p <= n {
        if n % p == 0 {
            return p;
        }
        p += 2;
    }
    n
}

pub fn decide(q: InvertibilityQuery) -> Decision {
    let InvertibilityQuery { dim, n } = q;
    let (invertible, reason) = if n % 2 == 0 {
        (false, Reason::EvenModulus { n })
    } else if dim % 2 == 0 {
        (false, Reason::EvenDimension)
    } else {
        let prime = smallest_prime_divisor(n);
        if dim < prime {
            (true, Reason::BelowSmallestPrime { dim, prime })
        } else if prime == n {
            (true, Reason::PrimeModulus { n })
        } else {
            (false, Reason::AtOrAboveSmallestPrime { dim, prime })
        }
    };
    Decision { invertible, reason }
}

pub fn is_invertible(q: InvertibilityQuery) -> bool {
    decide(q).invertible
}

fn phi_cache() -> &'static RwLock<HashMap<usize, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Exact quotient of `num` by the monic `den`; coefficients low to high.
fn div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let (q, r) = div_rem(num, den);
    debug_assert!(r.iter().all(|&c| c == 0), "inexact division");
    q
}

fn div_rem(num: &[i64], den: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1, "divisor must be monic");
    let mut rem: Vec<i128> = num.iter().map(|&c| c as i128).collect();
    if rem.len() <= dd {
        return (vec![0], num.to_vec());
    }
    let mut quot = vec![0i128; rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        quot[i - dd] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i - dd + j] -= c * d as i128;
        }
    }
    let cast = |v: &[i128]| v.iter().map(|&c| i64::try_from(c).expect("coefficient overflow")).collect();
    (cast(&quot), cast(&rem[..dd]))
}

/// Φ_m, coefficients low to high, computed as (x^m − 1) / Π_{d | m, d < m} Φ_d
/// and cached for the life of the process.
pub fn cyclotomic_polynomial(m: usize) -> Arc<Vec<i64>> {
    assert!(m >= 1);
    if let Some(p) = phi_cache().read().expect("phi cache").get(&m) {
        return Arc::clone(p);
    }
    let mut poly = vec![0i64; m + 1];
    poly[0] = -1;
    poly[m] = 1;
    for d in (1..m).filter(|d| m % d == 0) {
        poly = div_exact(&poly, &cyclotomic_polynomial(d));
    }
    let poly = Arc::new(poly);
    phi_cache()
        .write()
        .expect("phi cache")
        .entry(m)
        .or_insert_with(|| Arc::clone(&poly))
        .clone()
}

/// An element of ℤ[x]/(x^modulus − 1), read as a cyclotomic integer by
/// substituting a primitive modulus-th root of unity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicElement {
    pub modulus: usize,
    pub coeffs: Vec<i64>,
}

impl CyclotomicElement {
    pub fn zero(modulus: usize) -> Self {
        CyclotomicElement {
            modulus,
            coeffs: vec![0; modulus],
        }
    }

    /// Adds `c` to the coefficient of ζ^e (exponent taken mod the modulus).
    pub fn add_root(&mut self, e: usize, c: i64) {
        let m = self.modulus;
        self.coeffs[e % m] += c;
    }

    /// Σ_i ζ_{2n}^{k_i} + ζ_{2n}^{−k_i}, i.e. twice the cosine sum.
    pub fn from_cosines(n: usize, ks: &[usize]) -> Self {
        let mut el = Self::zero(2 * n);
        for &k in ks {
            el.add_root(k, 1);
            el.add_root(2 * n - k, 1);
        }
        el
    }

    /// Remainder modulo Φ_modulus.
    pub fn reduce(&self) -> Vec<i64> {
        let phi = cyclotomic_polynomial(self.modulus);
        div_rem(&self.coeffs, &phi).1
    }

    pub fn is_zero(&self) -> bool {
        self.reduce().iter().all(|&c| c == 0)
    }
}

pub fn cosine_sum_is_zero_exact(n: usize, ks: &[usize]) -> Result<bool> {
    if n < 2 {
        return Err(Error::InvalidSpec(format!("n must be at least 2, got {n}")));
    }
    if let Some(&k) = ks.iter().find(|&&k| k == 0 || k >= n) {
        return Err(Error::InvalidSpec(format!("k={k} outside 1..={}", n - 1)));
    }
    Ok(CyclotomicElement::from_cosines(n, ks).is_zero())
}

struct Search {
    n: usize,
    dim: usize,
    cos: Vec<f64>,
    budget: u64,
    nodes: u64,
    stack: Vec<usize>,
}

impl Search {
    /// Extends the descending prefix in `stack`; `partial` is its cosine sum.
    fn descend(&mut self, max_k: usize, partial: f64) -> Result<Option<Vec<usize>>> {
        let remaining = self.dim - self.stack.len();
        if remaining == 0 {
            if partial.abs() < CANDIDATE_TOLERANCE && cosine_sum_is_zero_exact(self.n, &self.stack)? {
                let mut ks = self.stack.clone();
                ks.sort_unstable();
                return Ok(Some(ks));
            }
            return Ok(None);
        }
        let top = self.cos[1];
        for k in (1..=max_k).rev() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExhausted { nodes: self.nodes - 1 });
            }
            let c = self.cos[k];
            let rest = (remaining - 1) as f64;
            // Every later term lies in [cos(kπ/n), cos(π/n)].
            if partial + c + rest * c > CANDIDATE_TOLERANCE {
                break;
            }
            if partial + c + rest * top < -CANDIDATE_TOLERANCE {
                continue;
            }
            self.stack.push(k);
            let found = self.descend(k, partial + c)?;
            self.stack.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// Exhaustive search over multisets k_1 ≥ … ≥ k_d, largest k first.
///
/// `Ok(None)` means the whole space was covered without a vanishing sum;
/// running out of `budget` nodes is an error, never a "no".
pub fn find_vanishing_witness(q: InvertibilityQuery, budget: u64) -> Result<Option<CosineWitness>> {
    let InvertibilityQuery { dim, n } = q;
    let cos = (0..n)
        .map(|k| (std::f64::consts::PI * k as f64 / n as f64).cos())
        .collect();
    let mut search = Search {
        n,
        dim,
        cos,
        budget,
        nodes: 0,
        stack: Vec::with_capacity(dim),
    };
    Ok(search.descend(n - 1, 0.0)?.map(|ks| CosineWitness { ks }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(d: usize, n: usize) -> InvertibilityQuery {
        InvertibilityQuery::new(d, n).unwrap()
    }

    #[test]
    fn spd() {
        assert_eq!(smallest_prime_divisor(25), 5);
        assert_eq!(smallest_prime_divisor(105), 3);
        assert_eq!(smallest_prime_divisor(2), 2);
        assert_eq!(smallest_prime_divisor(49), 7);
        assert_eq!(smallest_prime_divisor(97), 97);
    }

    #[test]
    fn predicate_examples() {
        assert!(is_invertible(q(3, 25)));
        assert!(!is_invertible(q(3, 9)));
        assert!(!is_invertible(q(2, 7)));
        assert!(!is_invertible(q(1, 4)));
        assert!(is_invertible(q(3, 3)));
        assert_eq!(decide(q(3, 25)).reason.to_string(), "3 < 5");
        assert_eq!(decide(q(2, 11)).reason.to_string(), "even dimension");
        assert_eq!(decide(q(3, 9)).reason.to_string(), "3 >= 3");
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(18), vec![1, 0, 0, -1, 0, 0, 1]);
        // Φ_105 is the first with a coefficient of magnitude 2.
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn exact_zero_examples() {
        assert!(cosine_sum_is_zero_exact(9, &[2, 4, 8]).unwrap());
        assert!(!cosine_sum_is_zero_exact(5, &[1, 2, 3]).unwrap());
        assert!(cosine_sum_is_zero_exact(4, &[2]).unwrap());
        assert!(cosine_sum_is_zero_exact(5, &[1, 4]).unwrap());
        assert!(cosine_sum_is_zero_exact(5, &[0]).is_err());
        assert!(cosine_sum_is_zero_exact(5, &[5]).is_err());
    }

    #[test]
    fn prime_roots_sum_to_zero() {
        for p in [2usize, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            let mut el = CyclotomicElement::zero(p);
            for e in 0..p {
                el.add_root(e, 1);
            }
            assert!(el.is_zero(), "p={p}");
            let mut partial = CyclotomicElement::zero(p);
            partial.add_root(0, 1);
            assert!(!partial.is_zero());
        }
    }

    #[test]
    fn witness_examples() {
        let w = find_vanishing_witness(q(3, 9), 1_000_000).unwrap().unwrap();
        assert_eq!(w.ks, vec![2, 4, 8]);
        assert_eq!(find_vanishing_witness(q(3, 5), 1_000_000).unwrap(), None);
        let w = find_vanishing_witness(q(2, 5), 1_000_000).unwrap().unwrap();
        assert_eq!(w.ks, vec![1, 4]);
        let w = find_vanishing_witness(q(3, 2), 1_000).unwrap().unwrap();
        assert_eq!(w.ks, vec![1, 1, 1]);
    }

    #[test]
    fn budget_is_not_a_verdict() {
        assert!(matches!(
            find_vanishing_witness(q(5, 45), 10),
            Err(Error::BudgetExhausted { .. })
        ));
    }
}
