//! Cross-method verification suites behind `hueckel verify`.
//!
//! Each check compares two independent routes to the same quantity over a
//! range of sizes and records how many cases it ran, how many failed and the
//! worst residual it saw. Checks are numbered in the order they run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use num_traits::Zero;

use crate::circulant::{
    circulant_inverse_dft, cyclic_inverse_first_column, cyclic_kernel_basis, det_cyclic, hueckel_cycle,
    symbol_factorization_inverse, to_rational,
};
use crate::closed_form::{det_open, green_matrix, harmonic_sum_identity_check, is_unit_pattern};
use crate::error::{Error, Result};
use crate::exact::{int, rat, to_f64, Rational};
use crate::hamiltonian::{analytic_eigensystem, build_hamiltonian, eigen_residual, spectral_resolvent_entry, ChainSpec};
use crate::lattice::{
    build_lattice_hamiltonian_float, lattice_green_entry, lattice_green_matrix, lattice_green_residual,
    lattice_spectrum, LatticeSpec, MultiIndex,
};
use crate::numeric::{det_float, lu_inverse, symmetric_eigenvalues};
use crate::tridiagonal::{theta_phi, usmani_inverse, TridiagonalSpec};
use crate::trig::{parity_zero_sum, sine_ratio_sign, sum_cos, sum_sin};
use crate::vanishing::{
    cosine_sum_is_zero_exact, find_vanishing_witness, is_invertible, CyclotomicElement, InvertibilityQuery,
};

/// Node budget per witness search.
const SEARCH_BUDGET: u64 = 50_000_000;

/// Random coupling pairs drawn by the alternating suite.
const ALTERNATING_PAIRS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Open,
    Cyclic,
    Alternating,
    Lattice,
    Numbertheory,
    Trig,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: usize,
    pub suite: &'static str,
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub worst_residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub kind: &'static str,
    pub suite: Suite,
    pub max_n: usize,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

struct Recorder {
    suite: &'static str,
    checks: Vec<Check>,
}

/// One check in progress. Exact checks use tolerance 0 and residual 0 or 1.
struct Tally {
    cases: u64,
    failures: u64,
    worst: f64,
    tolerance: f64,
}

impl Tally {
    fn new(tolerance: f64) -> Self {
        Tally {
            cases: 0,
            failures: 0,
            worst: 0.0,
            tolerance,
        }
    }

    fn exact() -> Self {
        Self::new(0.0)
    }

    fn ok(&mut self, pass: bool) {
        self.cases += 1;
        if !pass {
            self.failures += 1;
            self.worst = self.worst.max(1.0);
        }
    }

    fn residual(&mut self, r: f64) {
        self.cases += 1;
        if r.is_nan() || r > self.tolerance {
            self.failures += 1;
        }
        if r.is_nan() {
            self.worst = f64::INFINITY;
        } else {
            self.worst = self.worst.max(r);
        }
    }

    /// Counts an unexpected error as a failed case.
    fn fallible(&mut self, f: impl FnOnce(&mut Self) -> Result<()>) {
        if f(self).is_err() {
            self.cases += 1;
            self.failures += 1;
            self.worst = f64::INFINITY;
        }
    }
}

impl Recorder {
    fn push(&mut self, name: &'static str, t: Tally) {
        self.checks.push(Check {
            id: 0,
            suite: self.suite,
            name,
            cases: t.cases,
            failures: t.failures,
            worst_residual: t.worst,
            tolerance: t.tolerance,
        });
    }
}

fn even_sizes(max_n: usize) -> impl Iterator<Item = usize> {
    (2..=max_n).step_by(2)
}

fn suite_open(rec: &mut Recorder, max_n: usize) {
    let mut usmani = Tally::exact();
    let mut identity = Tally::exact();
    let mut pattern = Tally::exact();
    let mut lu = Tally::new(1e-10);
    let mut spectral = Tally::new(1e-9);
    for n in even_sizes(max_n) {
        let spec = ChainSpec::open(n);
        let run = |u: &mut Tally, i: &mut Tally, p: &mut Tally, l: &mut Tally| -> Result<()> {
            let h = build_hamiltonian(&spec)?;
            let g = green_matrix(&spec)?;
            let via_usmani = usmani_inverse(&TridiagonalSpec::from_matrix(&h)?)?.neg();
            u.ok(via_usmani == g);
            i.ok(h.mul(&g.neg())?.is_identity());
            p.ok(is_unit_pattern(&g));
            l.residual(g.to_float().max_abs_diff(&lu_inverse(&h.to_float())?.neg()));
            Ok(())
        };
        if run(&mut usmani, &mut identity, &mut pattern, &mut lu).is_err() {
            usmani.ok(false);
        }
        spectral.fallible(|t| {
            let g = green_matrix(&spec)?;
            for r in 1..=n {
                for s in 1..=n {
                    let v = -spectral_resolvent_entry(&spec, r, s, 0.0)?;
                    t.residual((v - to_f64(&g[(r - 1, s - 1)])).abs());
                }
            }
            Ok(())
        });
    }
    rec.push("closed form equals negated Usmani inverse", usmani);
    rec.push("H times -G is the identity", identity);
    rec.push("entries lie in {-1, 0, 1}", pattern);
    rec.push("closed form matches LU inverse", lu);
    rec.push("spectral resolvent at E=0 matches closed form", spectral);

    let mut det = Tally::exact();
    let mut det_lu = Tally::new(1e-8);
    let mut odd = Tally::exact();
    let mut eigen = Tally::new(1e-10);
    for n in 1..=max_n {
        let spec = ChainSpec::open(n);
        det.fallible(|t| {
            let h = build_hamiltonian(&spec)?;
            t.ok(h.det_fraction_free()? == int(det_open(n)));
            t.ok(theta_phi(&TridiagonalSpec::from_matrix(&h)?)?.determinant() == &int(det_open(n)));
            det_lu.residual((det_float(&h.to_float())? - det_open(n) as f64).abs());
            Ok(())
        });
        if n % 2 == 1 {
            let singular = matches!(green_matrix(&spec), Err(e) if e.is_singular());
            let lu_singular = build_hamiltonian(&spec)
                .map(|h| matches!(lu_inverse(&h.to_float()), Err(Error::NumericallySingular { .. })))
                .unwrap_or(false);
            odd.ok(singular && lu_singular);
        }
        eigen.fallible(|t| {
            let h = build_hamiltonian(&spec)?.to_float();
            t.residual(eigen_residual(&h, &analytic_eigensystem(&spec)?));
            Ok(())
        });
    }
    rec.push("det_open equals Bareiss and theta_N", det);
    rec.push("det_open matches LU determinant", det_lu);
    rec.push("odd N is singular by both routes", odd);
    rec.push("analytic eigenpairs satisfy H q = lambda q", eigen);
}

fn suite_cyclic(rec: &mut Recorder, max_n: usize) {
    let mut det = Tally::exact();
    let mut routes = Tally::exact();
    let mut entries = Tally::exact();
    let mut inverse = Tally::exact();
    let mut kernel = Tally::exact();
    let mut dft = Tally::exact();
    let mut lu = Tally::new(1e-10);
    let mut eigen = Tally::new(1e-10);
    for n in 2..=max_n {
        det.fallible(|t| {
            let h = build_hamiltonian(&ChainSpec::cyclic(n))?;
            t.ok(h.det_fraction_free()? == int(det_cyclic(n)?));
            Ok(())
        });
        if n < 3 {
            continue;
        }
        let spec = ChainSpec::cyclic(n);
        if n % 4 == 0 {
            inverse.fallible(|t| {
                let h = build_hamiltonian(&spec)?;
                t.ok(matches!(green_matrix(&spec), Err(e) if e.is_singular()) && h.inverse_exact().is_err());
                Ok(())
            });
            kernel.fallible(|t| {
                let h = build_hamiltonian(&spec)?;
                let (v1, v2) = cyclic_kernel_basis(n)?;
                for v in [v1, v2] {
                    t.ok(h.mul_vec(&to_rational(&v))?.iter().all(Zero::is_zero));
                }
                Ok(())
            });
        } else {
            routes.fallible(|t| {
                let a = cyclic_inverse_first_column(n)?;
                t.ok(a == symbol_factorization_inverse(n)?);
                let half = rat(1, 2);
                t.ok(a.first_column.iter().all(|x| x.is_zero() || *x == half || *x == -half.clone()));
                dft.ok(circulant_inverse_dft(&hueckel_cycle(n)?)? == a);
                Ok(())
            });
            entries.fallible(|t| {
                let col = cyclic_inverse_first_column(n)?.first_column;
                t.ok(cyclic_pattern_holds(n, &col));
                Ok(())
            });
            inverse.fallible(|t| {
                let h = build_hamiltonian(&spec)?;
                let g = green_matrix(&spec)?;
                t.ok(g == h.inverse_exact()?.neg());
                lu.residual(g.to_float().max_abs_diff(&lu_inverse(&h.to_float())?.neg()));
                Ok(())
            });
        }
        eigen.fallible(|t| {
            let h = build_hamiltonian(&spec)?.to_float();
            t.residual(eigen_residual(&h, &analytic_eigensystem(&spec)?));
            Ok(())
        });
    }
    rec.push("det_cyclic equals Bareiss", det);
    rec.push("recurrence and symbol factorization agree", routes);
    rec.push("first column follows the mod-4 pattern", entries);
    rec.push("closed form equals exact inverse, or both singular", inverse);
    rec.push("N=4k kernel vectors are annihilated", kernel);
    rec.push("general circulant solver agrees", dft);
    rec.push("closed form matches LU inverse", lu);
    rec.push("analytic eigenpairs satisfy H q = lambda q", eigen);
}

/// x_m = ±½ alternating along odd m from x_1 = ½; x_0 = ½ for N ≡ 1, −½ for
/// N ≡ 3 and 0 for N ≡ 2 (mod 4), alternating along even m.
fn cyclic_pattern_holds(n: usize, col: &[Rational]) -> bool {
    let quarter_sign = |m: usize| if m % 4 <= 1 { 1 } else { -1 };
    let x0 = match n % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    };
    (0..n).all(|m| {
        let sign = if m % 2 == 1 { quarter_sign(m) } else { x0 * quarter_sign(m) };
        col[m] == rat(sign, 2)
    })
}

fn random_coupling(rng: &mut ChaCha8Rng) -> Rational {
    let num: i64 = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
    rat(num, rng.gen_range(1..=9))
}

fn suite_alternating(rec: &mut Recorder, max_n: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut open = Tally::exact();
    let mut cyclic = Tally::exact();
    let mut usmani = Tally::exact();
    for _ in 0..ALTERNATING_PAIRS {
        let beta = random_coupling(&mut rng);
        let alpha = random_coupling(&mut rng);
        for n in even_sizes(max_n) {
            let spec = ChainSpec::open(n).with_couplings(beta.clone(), alpha.clone());
            open.fallible(|t| {
                let h = build_hamiltonian(&spec)?;
                let g = green_matrix(&spec)?;
                t.ok(g == h.inverse_exact()?.neg());
                usmani.ok(usmani_inverse(&TridiagonalSpec::from_matrix(&h)?)?.neg() == g);
                Ok(())
            });
            if n < 4 {
                continue;
            }
            let spec = ChainSpec::cyclic(n).with_couplings(beta.clone(), alpha.clone());
            cyclic.fallible(|t| {
                let h = build_hamiltonian(&spec)?;
                match green_matrix(&spec) {
                    Ok(g) => t.ok(g == h.inverse_exact()?.neg()),
                    Err(e) if e.is_singular() => t.ok(h.det_fraction_free()?.is_zero()),
                    Err(e) => return Err(e),
                }
                Ok(())
            });
        }
    }
    rec.push("open alternating closed form equals exact inverse", open);
    rec.push("open alternating closed form equals Usmani inverse", usmani);
    rec.push("cyclic alternating closed form equals exact inverse", cyclic);
}

fn suite_lattice(rec: &mut Recorder, max_n: usize) {
    let mut spectrum = Tally::new(1e-8);
    for d in 1..=3 {
        for n in 1..=max_n.min(6) {
            spectrum.fallible(|t| {
                let spec = LatticeSpec::new(d, n)?;
                let mut analytic = lattice_spectrum(&spec)?;
                analytic.sort_by(f64::total_cmp);
                let numeric = symmetric_eigenvalues(&build_lattice_hamiltonian_float(&spec)?)?;
                let worst = analytic.iter().zip(&numeric).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                t.residual(worst);
                Ok(())
            });
        }
    }
    rec.push("Kronecker-sum spectrum matches dense eigenvalues", spectrum);

    let mut zeros = Tally::exact();
    for n in 1..=max_n.min(30) {
        zeros.fallible(|t| {
            let spec = LatticeSpec::new(2, n)?;
            t.ok(lattice_spectrum(&spec)?.iter().filter(|v| v.abs() < 1e-9).count() == n);
            Ok(())
        });
    }
    rec.push("2-d spectrum has exactly N zeros", zeros);

    let mut residual = Tally::new(1e-8);
    let mut symmetric = Tally::new(1e-10);
    let mut singular = Tally::exact();
    let mut chain = Tally::new(1e-10);
    for d in 1..=3usize {
        for n in 1..=max_n {
            let Ok(spec) = LatticeSpec::new(d, n) else { continue };
            if spec.sites() > 512 {
                continue;
            }
            let q = InvertibilityQuery { dim: d, n: n + 1 };
            match lattice_green_matrix(&spec) {
                Ok(g) => {
                    singular.ok(is_invertible(q));
                    residual.fallible(|t| {
                        t.residual(lattice_green_residual(&spec, &g)?);
                        Ok(())
                    });
                    symmetric.residual(g.max_asymmetry());
                }
                Err(Error::SingularLattice { .. }) => singular.ok(!is_invertible(q)),
                Err(_) => singular.ok(false),
            }
        }
    }
    for n in even_sizes(max_n) {
        chain.fallible(|t| {
            let spec = LatticeSpec::new(1, n)?;
            let g = green_matrix(&ChainSpec::open(n))?;
            for r in 1..=n {
                for s in 1..=n {
                    let v = lattice_green_entry(&spec, &MultiIndex::new(vec![r]), &MultiIndex::new(vec![s]))?;
                    t.residual((v - to_f64(&g[(r - 1, s - 1)])).abs());
                }
            }
            Ok(())
        });
    }
    rec.push("spectral G satisfies H G = -I", residual);
    rec.push("spectral G is symmetric", symmetric);
    rec.push("singular lattices are exactly the predicate failures", singular);
    rec.push("1-d lattice entries equal the chain closed form", chain);
}

fn suite_numbertheory(rec: &mut Recorder, max_n: usize) {
    let mut agree = Tally::exact();
    let mut sound = Tally::new(1e-12);
    let mut paired = Tally::exact();
    let mut record_witness = |t: &mut Tally, n: usize, ks: &[usize]| -> Result<()> {
        let float: f64 = ks.iter().map(|&k| (std::f64::consts::PI * k as f64 / n as f64).cos()).sum();
        sound.residual(float.abs());
        t.ok(cosine_sum_is_zero_exact(n, ks)?);
        Ok(())
    };
    for n in (3..=max_n).step_by(2) {
        let dims: &[usize] = if n <= 21 { &[1, 3, 5, 7] } else { &[1, 3, 5] };
        for &d in dims {
            agree.fallible(|t| {
                let q = InvertibilityQuery::new(d, n)?;
                let found = find_vanishing_witness(q, SEARCH_BUDGET)?;
                t.ok(is_invertible(q) == found.is_none());
                if let Some(w) = found {
                    record_witness(t, n, &w.ks)?;
                }
                Ok(())
            });
        }
    }
    for n in 2..=max_n {
        let dims: &[usize] = if n % 2 == 0 { &[1, 2, 3, 4, 5] } else { &[2] };
        for &d in dims {
            paired.fallible(|t| {
                let q = InvertibilityQuery::new(d, n)?;
                match find_vanishing_witness(q, SEARCH_BUDGET)? {
                    Some(w) => record_witness(t, n, &w.ks)?,
                    None => t.ok(false),
                }
                t.ok(!is_invertible(q));
                Ok(())
            });
        }
    }
    rec.push("predicate agrees with exhaustive witness search", agree);
    rec.push("even dimensions and even n always have a witness", paired);
    rec.push("witness cosine sums vanish in floating point", sound);

    let mut rank = Tally::exact();
    for d in 1..=3 {
        for n in 1..=4 {
            rank.fallible(|t| {
                let spec = LatticeSpec::new(d, n)?;
                let eig = symmetric_eigenvalues(&build_lattice_hamiltonian_float(&spec)?)?;
                let singular = eig.iter().any(|v| v.abs() < 1e-9);
                t.ok(is_invertible(InvertibilityQuery::new(d, n + 1)?) != singular);
                Ok(())
            });
        }
    }
    rec.push("predicate agrees with numerical rank", rank);

    let mut primes = Tally::exact();
    for p in (2..=50usize).filter(|&p| (2..p).all(|q| p % q != 0)) {
        let mut el = CyclotomicElement::zero(p);
        (0..p).for_each(|e| el.add_root(e, 1));
        primes.ok(el.is_zero());
    }
    rec.push("full sums of prime roots of unity vanish", primes);
}

fn suite_trig(rec: &mut Recorder, max_n: usize) {
    let mut harmonic = Tally::new(1e-9);
    let mut parity = Tally::new(1e-10);
    let mut ratio = Tally::exact();
    for n in even_sizes(max_n) {
        harmonic.fallible(|t| {
            for r in 1..=n {
                for s in 1..=n {
                    let (float, exact) = harmonic_sum_identity_check(n, r, s)?;
                    t.residual((float - to_f64(&exact)).abs());
                }
            }
            Ok(())
        });
        parity.fallible(|t| {
            for q in 1..=n / 2 {
                t.residual(parity_zero_sum(n, q)?.abs());
            }
            Ok(())
        });
        for k in 1..=3 * n {
            match sine_ratio_sign(n, k) {
                Ok(sign) => ratio.ok(sign == if k % 2 == 0 { -1 } else { 1 }),
                Err(Error::DegenerateAngle { .. }) => ratio.ok(k % (n + 1) == 0),
                Err(_) => ratio.ok(false),
            }
        }
    }
    rec.push("direct spectral sum equals closed form", harmonic);
    rec.push("same-parity pairs cancel", parity);
    rec.push("sine ratio identity", ratio);

    let mut closed = Tally::new(1e-11);
    for i in 0..40usize {
        for j in 0..25usize {
            let np = (i * 50) / 39;
            let theta = 0.01 + (std::f64::consts::PI - 0.02) * j as f64 / 24.0;
            closed.fallible(|t| {
                let direct_c: f64 = (0..=np).map(|m| (m as f64 * theta).cos()).sum();
                let direct_s: f64 = (0..=np).map(|m| (m as f64 * theta).sin()).sum();
                t.residual((sum_cos(np, theta)? - direct_c).abs());
                t.residual((sum_sin(np, theta)? - direct_s).abs());
                Ok(())
            });
        }
    }
    rec.push("finite cosine and sine sums match closed forms", closed);
}

pub fn run(suite: Suite, max_n: usize, seed: u64) -> Report {
    let selected: Vec<Suite> = match suite {
        Suite::All => vec![
            Suite::Open,
            Suite::Cyclic,
            Suite::Alternating,
            Suite::Lattice,
            Suite::Numbertheory,
            Suite::Trig,
        ],
        s => vec![s],
    };
    let mut checks = Vec::new();
    for s in selected {
        let name = match s {
            Suite::Open => "open",
            Suite::Cyclic => "cyclic",
            Suite::Alternating => "alternating",
            Suite::Lattice => "lattice",
            Suite::Numbertheory => "numbertheory",
            Suite::Trig => "trig",
            Suite::All => unreachable!(),
        };
        let mut rec = Recorder {
            suite: name,
            checks: Vec::new(),
        };
        match s {
            Suite::Open => suite_open(&mut rec, max_n),
            Suite::Cyclic => suite_cyclic(&mut rec, max_n),
            Suite::Alternating => suite_alternating(&mut rec, max_n, seed),
            Suite::Lattice => suite_lattice(&mut rec, max_n),
            Suite::Numbertheory => suite_numbertheory(&mut rec, max_n),
            Suite::Trig => suite_trig(&mut rec, max_n),
            Suite::All => unreachable!(),
        }
        checks.extend(rec.checks);
    }
    for (i, c) in checks.iter_mut().enumerate() {
        c.id = i + 1;
    }
    Report {
        kind: "report",
        suite,
        max_n,
        seed,
        passed: checks.iter().all(Check::passed),
        checks,
    }
}
