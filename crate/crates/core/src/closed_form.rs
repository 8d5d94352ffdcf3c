//! Closed-form Green's functions G = −H⁻¹ at E = 0, one entry at a time.
//!
//! Every function here returns G, never H⁻¹. Entries are exact rationals and
//! site indices are 1-based. Uniform formulas accept any common nonzero
//! coupling c and scale by 1/c.

use num_traits::{One, Signed, Zero};

use crate::circulant::cyclic_inverse_first_column;
use crate::error::{Error, Result, SingularCase};
use crate::exact::{int, ExactMatrix, Rational};
use crate::hamiltonian::{ChainSpec, Topology};
use crate::trig::GreenSumTable;

#[derive(Debug, Clone, PartialEq)]
pub struct GreenEntryQuery {
    pub spec: ChainSpec,
    pub r: usize,
    pub s: usize,
}

impl GreenEntryQuery {
    pub fn new(spec: ChainSpec, r: usize, s: usize) -> Result<Self> {
        spec.site(r)?;
        spec.site(s)?;
        Ok(GreenEntryQuery { spec, r, s })
    }

    /// (max, min) of the two indices; every formula is symmetric.
    fn ordered(&self) -> (usize, usize) {
        (self.r.max(self.s), self.r.min(self.s))
    }
}

fn sign_pow(e: usize) -> Rational {
    if e % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn pow(base: &Rational, e: usize) -> Rational {
    num_traits::pow(base.clone(), e)
}

fn check_topology(spec: &ChainSpec, want: Topology) -> Result<()> {
    if spec.topology != want {
        return Err(Error::InvalidSpec(format!("expected a {want} chain, got {}", spec.topology)));
    }
    Ok(())
}

fn common_coupling(spec: &ChainSpec) -> Result<&Rational> {
    if !spec.has_equal_couplings() {
        return Err(Error::UnsupportedCouplings);
    }
    if spec.coupling_odd.is_zero() {
        return Err(Error::ZeroCoupling);
    }
    Ok(&spec.coupling_odd)
}

/// det H₁: (−1)^{N/2} for even N, 0 for odd N.
pub fn det_open(n: usize) -> i64 {
    if n % 2 == 1 {
        0
    } else if (n / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Uniform open chain. For r > s the entry is (−1)^{(r+s−1)/2} when r is even
/// and s odd, zero otherwise; same-parity pairs vanish by alternancy.
pub fn green_open(q: &GreenEntryQuery) -> Result<Rational> {
    check_topology(&q.spec, Topology::Open)?;
    let c = common_coupling(&q.spec)?;
    if q.spec.n_sites % 2 == 1 {
        return Err(Error::singular(q.spec.n_sites, SingularCase::OpenOddN));
    }
    let (r, s) = q.ordered();
    if r % 2 == 0 && s % 2 == 1 {
        Ok(sign_pow((r + s - 1) / 2) / c)
    } else {
        Ok(Rational::zero())
    }
}

/// Open chain with β on bonds 1–2, 3–4, … and α on 2–3, 4–5, …. For r ≥ s
/// the only nonzero entries (r even, s odd) are
/// (−1)^{(r+s−1)/2} (α/β)^{(r−s−1)/2} / β.
pub fn green_bond_alternating(q: &GreenEntryQuery) -> Result<Rational> {
    check_topology(&q.spec, Topology::Open)?;
    let n = q.spec.n_sites;
    if n % 2 == 1 {
        return Err(Error::singular(n, SingularCase::OpenOddN));
    }
    let (beta, alpha) = (&q.spec.coupling_odd, &q.spec.coupling_even);
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::ZeroCoupling);
    }
    let (r, s) = q.ordered();
    if r % 2 == 0 && s % 2 == 1 {
        let ratio = alpha / beta;
        Ok(sign_pow((r + s - 1) / 2) * pow(&ratio, (r - s - 1) / 2) / beta)
    } else {
        Ok(Rational::zero())
    }
}

/// Uniform cycle: G(r, s) = −x_{(r−s) mod N} with x the first column of the
/// inverse; entries are 0 or ±½ in one of three mod-4 patterns.
pub fn green_cyclic(q: &GreenEntryQuery) -> Result<Rational> {
    check_topology(&q.spec, Topology::Cyclic)?;
    let c = common_coupling(&q.spec)?;
    let n = q.spec.n_sites;
    let col = cyclic_inverse_first_column(n)?;
    Ok(-&col.first_column[(q.r + n - q.s) % n] / c)
}

/// Cycle with alternating bonds (closing bond N–1 carries α). With
/// D_α = 1 − (−α/β)^{N/2} and D_β = 1 − (−β/α)^{N/2}, and e = (r−s−1)/2 for
/// r > s or (N+r−s−1)/2 for r ≤ s:
///
/// ```text
/// r even, s odd:  G = −(−α/β)^e / (β D_α)
/// r odd, s even:  G = −(−β/α)^e / (α D_β)
/// ```
///
/// and zero for same parity. Both denominators vanish together, which for
/// α = β is exactly the N = 4k singularity.
pub fn green_cyclic_bond_alternating(q: &GreenEntryQuery) -> Result<Rational> {
    check_topology(&q.spec, Topology::Cyclic)?;
    let n = q.spec.n_sites;
    if n % 2 == 1 {
        return Err(Error::AlternatingOddN { n });
    }
    if n < 4 {
        return Err(Error::CycleTooSmall { n });
    }
    let (beta, alpha) = (&q.spec.coupling_odd, &q.spec.coupling_even);
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::ZeroCoupling);
    }
    let a_over_b = -(alpha / beta);
    let b_over_a = -(beta / alpha);
    let d_alpha = Rational::one() - pow(&a_over_b, n / 2);
    let d_beta = Rational::one() - pow(&b_over_a, n / 2);
    if d_alpha.is_zero() || d_beta.is_zero() {
        let case = if alpha == beta {
            SingularCase::CycleMultipleOfFour
        } else {
            SingularCase::VanishingDenominator
        };
        return Err(Error::singular(n, case));
    }
    let (r, s) = (q.r, q.s);
    let e = if r > s { (r - s - 1) / 2 } else { (n + r - s - 1) / 2 };
    let v = match (r % 2, s % 2) {
        (0, 1) => -pow(&a_over_b, e) / (beta * d_alpha),
        (1, 0) => -pow(&b_over_a, e) / (alpha * d_beta),
        _ => Rational::zero(),
    };
    Ok(v)
}

/// Picks the closed form that applies to `spec`: uniform (equal-coupling)
/// formulas first, alternating ones otherwise.
pub fn green_entry(q: &GreenEntryQuery) -> Result<Rational> {
    match (q.spec.topology, q.spec.has_equal_couplings()) {
        (Topology::Open, true) => green_open(q),
        (Topology::Open, false) => green_bond_alternating(q),
        (Topology::Cyclic, true) => green_cyclic(q),
        (Topology::Cyclic, false) => green_cyclic_bond_alternating(q),
    }
}

/// Dense G from any entry formula.
pub fn assemble(spec: &ChainSpec, entry: fn(&GreenEntryQuery) -> Result<Rational>) -> Result<ExactMatrix> {
    let n = spec.n_sites;
    let mut rows = Vec::with_capacity(n);
    for r in 1..=n {
        let mut row = Vec::with_capacity(n);
        for s in 1..=n {
            row.push(entry(&GreenEntryQuery::new(spec.clone(), r, s)?)?);
        }
        rows.push(row);
    }
    ExactMatrix::from_rows(rows)
}

pub fn green_matrix(spec: &ChainSpec) -> Result<ExactMatrix> {
    spec.validate()?;
    assemble(spec, green_entry)
}

/// Both sides of the harmonic-sum identity
/// −1/(N+1) Σ_k sin(rkω) sin(skω) / cos(kω) = G(r, s): the float sum and the
/// exact closed form.
pub fn harmonic_sum_identity_check(n: usize, r: usize, s: usize) -> Result<(f64, Rational)> {
    if n % 2 == 1 {
        return Err(Error::singular(n, SingularCase::OpenOddN));
    }
    let exact = green_open(&GreenEntryQuery::new(ChainSpec::open(n), r, s)?)?;
    let float = GreenSumTable::new(n)?.sum(r, s)?;
    Ok((float, exact))
}

/// Whether every entry of `g` is −1, 0 or +1.
pub fn is_unit_pattern(g: &ExactMatrix) -> bool {
    g.entries().iter().all(|v| v.is_zero() || (v.is_integer() && v.abs() == int(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::hamiltonian::build_hamiltonian;

    fn q(spec: ChainSpec, r: usize, s: usize) -> GreenEntryQuery {
        GreenEntryQuery::new(spec, r, s).unwrap()
    }

    #[test]
    fn open_determinants() {
        assert_eq!(det_open(2), -1);
        assert_eq!(det_open(4), 1);
        assert_eq!(det_open(5), 0);
    }

    #[test]
    fn open_entries() {
        let six = ChainSpec::open(6);
        assert_eq!(green_open(&q(six.clone(), 2, 1)).unwrap(), int(-1));
        assert_eq!(green_open(&q(six.clone(), 4, 1)).unwrap(), int(1));
        assert_eq!(green_open(&q(six.clone(), 3, 5)).unwrap(), int(0));
        assert_eq!(green_open(&q(six, 1, 4)).unwrap(), int(1));
        assert!(green_open(&q(ChainSpec::open(5), 1, 2)).unwrap_err().is_singular());
        assert!(GreenEntryQuery::new(ChainSpec::open(4), 5, 1).is_err());
    }

    #[test]
    fn open_matrix_inverts_hamiltonian() {
        for n in [2, 4, 6, 10] {
            let spec = ChainSpec::open(n);
            let g = assemble(&spec, green_open).unwrap();
            let h = build_hamiltonian(&spec).unwrap();
            assert!(h.mul(&g.neg()).unwrap().is_identity());
            assert!(is_unit_pattern(&g));
        }
    }

    #[test]
    fn alternating_entries() {
        let two = ChainSpec::open(2).with_couplings(int(2), int(7));
        assert_eq!(green_bond_alternating(&q(two, 2, 1)).unwrap(), rat(-1, 2));
        let four = ChainSpec::open(4);
        for r in 1..=4 {
            for s in 1..=4 {
                assert_eq!(
                    green_bond_alternating(&q(four.clone(), r, s)).unwrap(),
                    green_open(&q(four.clone(), r, s)).unwrap()
                );
            }
        }
        assert_eq!(green_bond_alternating(&q(four, 3, 3)).unwrap(), int(0));
        let zero = ChainSpec::open(4).with_couplings(int(1), int(0));
        assert_eq!(green_bond_alternating(&q(zero, 2, 1)), Err(Error::ZeroCoupling));
    }

    #[test]
    fn alternating_matches_gauss_jordan() {
        let spec = ChainSpec::open(6).with_couplings(rat(3, 2), int(-5));
        let g = assemble(&spec, green_bond_alternating).unwrap();
        let inv = build_hamiltonian(&spec).unwrap().inverse_exact().unwrap();
        assert_eq!(g, inv.neg());
    }

    #[test]
    fn cyclic_entries() {
        assert_eq!(green_cyclic(&q(ChainSpec::cyclic(5), 1, 1)).unwrap(), rat(-1, 2));
        assert_eq!(green_cyclic(&q(ChainSpec::cyclic(6), 2, 1)).unwrap(), rat(-1, 2));
        assert_eq!(green_cyclic(&q(ChainSpec::cyclic(6), 1, 1)).unwrap(), int(0));
        assert!(green_cyclic(&q(ChainSpec::cyclic(8), 1, 1)).unwrap_err().is_singular());
    }

    #[test]
    fn cyclic_alternating_entries() {
        assert_eq!(
            green_cyclic_bond_alternating(&q(ChainSpec::cyclic(6), 2, 1)).unwrap(),
            rat(-1, 2)
        );
        assert!(matches!(
            green_cyclic_bond_alternating(&q(ChainSpec::cyclic(4), 2, 1)),
            Err(Error::Singular {
                case: SingularCase::CycleMultipleOfFour,
                ..
            })
        ));
        let spec = ChainSpec::cyclic(4).with_couplings(int(1), int(2));
        assert_eq!(green_cyclic_bond_alternating(&q(spec.clone(), 2, 1)).unwrap(), rat(1, 3));
        let g = assemble(&spec, green_cyclic_bond_alternating).unwrap();
        assert_eq!(g, build_hamiltonian(&spec).unwrap().inverse_exact().unwrap().neg());
        // α = −β makes both denominators vanish without N = 4k.
        let spec = ChainSpec::cyclic(6).with_couplings(int(1), int(-1));
        assert!(matches!(
            green_cyclic_bond_alternating(&q(spec.clone(), 2, 1)),
            Err(Error::Singular {
                case: SingularCase::VanishingDenominator,
                ..
            })
        ));
        assert!(build_hamiltonian(&spec).unwrap().det_fraction_free().unwrap().is_zero());
    }

    #[test]
    fn harmonic_identity() {
        let (f, e) = harmonic_sum_identity_check(2, 1, 2).unwrap();
        assert!((f + 1.0).abs() < 1e-12);
        assert_eq!(e, int(-1));
        let (f, e) = harmonic_sum_identity_check(6, 2, 4).unwrap();
        assert!(f.abs() < 1e-10);
        assert_eq!(e, int(0));
        let (f, e) = harmonic_sum_identity_check(6, 4, 1).unwrap();
        assert!((f - 1.0).abs() < 1e-10);
        assert_eq!(e, int(1));
        assert!(harmonic_sum_identity_check(5, 1, 2).unwrap_err().is_singular());
    }
}
