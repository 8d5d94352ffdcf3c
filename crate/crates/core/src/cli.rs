//! The `hueckel` command line.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 bad usage,
//! 3 domain error, 4 singular matrix, 5 search budget exhausted. Errors are
//! reported as one line on stderr.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::closed_form::{det_open, green_entry, green_matrix, GreenEntryQuery};
use crate::circulant::det_cyclic;
use crate::error::{Error, Result};
use crate::exact::{check_dense_cells, parse_rational, ExactMatrix, Rational};
use crate::hamiltonian::{build_hamiltonian, spectral_resolvent_entry, ChainSpec, Topology};
use crate::lattice::{
    build_lattice_hamiltonian, build_lattice_hamiltonian_float, lattice_green_entry, lattice_green_matrix,
    LatticeSpec, MultiIndex,
};
use crate::numeric::{lu_inverse, FloatMatrix};
use crate::output::{Entries, Format, MatrixDocument, Scalar};
use crate::tridiagonal::{usmani_inverse, TridiagonalSpec};
use crate::vanishing::{decide, find_vanishing_witness, InvertibilityQuery};
use crate::verify::{self, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_SINGULAR: i32 = 4;
pub const EXIT_BUDGET: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "hueckel", version, about = "Hückel Hamiltonians, determinants and Green's functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Hamiltonian matrix.
    Build(BuildArgs),
    /// Print the Green's function G = -H^-1, or one entry of it.
    Green(GreenArgs),
    /// Print the exact determinant.
    Det(DetArgs),
    /// Decide whether the d-dimensional lattice Green's function exists.
    Invertible(InvertibleArgs),
    /// Run the cross-method verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TopologyArg {
    Open,
    Cyclic,
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    #[arg(long, value_enum, default_value = "open")]
    pub topology: TopologyArg,
    /// Sites per chain (per axis for lattices).
    #[arg(long)]
    pub n: usize,
    /// Coupling on even bonds 2-3, 4-5, ... (integer or p/q).
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub alpha: String,
    /// Coupling on odd bonds 1-2, 3-4, ... (integer or p/q).
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub beta: String,
    /// Build the d-dimensional open lattice with N sites per axis.
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Usmani,
    Numeric,
    Spectral,
}

#[derive(Debug, Clone, Args)]
pub struct GreenArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// closed (default for chains), usmani, numeric or spectral (default for lattices).
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Row site; lattices take comma-separated coordinates.
    #[arg(long, requires = "s")]
    pub r: Option<String>,
    #[arg(long, requires = "r")]
    pub s: Option<String>,
    /// Print |G(r,s)|^2 instead of G(r,s).
    #[arg(long)]
    pub transmission: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct DetArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct InvertibleArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long = "n-plus-one")]
    pub n_plus_one: usize,
    /// Also search for a vanishing cosine sum.
    #[arg(long)]
    pub witness: bool,
    /// Node budget for the witness search.
    #[arg(long, default_value_t = 100_000_000)]
    pub budget: u64,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[arg(long, default_value_t = 20)]
    pub max_n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        _ if e.is_singular() => EXIT_SINGULAR,
        Error::BudgetExhausted { .. } => EXIT_BUDGET,
        _ => EXIT_DOMAIN,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() { (String::new(), text) } else { (text, String::new()) };
            return Outcome { code, stdout, stderr };
        }
    };
    let mut out = Vec::new();
    let result = dispatch(&cli.command, &mut out);
    let stdout = String::from_utf8(out).expect("utf-8 output");
    match result {
        Ok(code) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("{e}\n"),
        },
    }
}

fn dispatch(command: &Command, out: &mut Vec<u8>) -> Result<i32> {
    match command {
        Command::Build(a) => cmd_build(a, out),
        Command::Green(a) => cmd_green(a, out),
        Command::Det(a) => cmd_det(a, out),
        Command::Invertible(a) => cmd_invertible(a, out),
        Command::Verify(a) => cmd_verify(a, out),
    }
}

enum System {
    Chain(ChainSpec),
    Lattice(LatticeSpec),
}

impl SystemArgs {
    fn resolve(&self) -> Result<System> {
        let alpha = parse_rational(&self.alpha)?;
        let beta = parse_rational(&self.beta)?;
        match self.dim {
            Some(dim) => {
                if self.topology != TopologyArg::Open {
                    return Err(Error::InvalidSpec("lattices use open boundaries only".into()));
                }
                if !(alpha == beta && alpha == Rational::from_integer(1.into())) {
                    return Err(Error::UnsupportedCouplings);
                }
                Ok(System::Lattice(LatticeSpec::new(dim, self.n)?))
            }
            None => {
                let topology = match self.topology {
                    TopologyArg::Open => Topology::Open,
                    TopologyArg::Cyclic => Topology::Cyclic,
                };
                let spec = ChainSpec::new(topology, self.n).with_couplings(beta, alpha);
                spec.validate()?;
                Ok(System::Chain(spec))
            }
        }
    }
}

fn chain_header(spec: &ChainSpec) -> Vec<(String, Value)> {
    vec![
        ("topology".into(), json!(spec.topology.to_string())),
        ("n".into(), json!(spec.n_sites)),
        ("alpha".into(), json!(crate::exact::format_rational(&spec.coupling_even))),
        ("beta".into(), json!(crate::exact::format_rational(&spec.coupling_odd))),
    ]
}

fn lattice_header(spec: &LatticeSpec) -> Vec<(String, Value)> {
    vec![
        ("lattice".into(), json!({"dim": spec.dim, "n": spec.linear_size})),
        ("n".into(), json!(spec.sites())),
    ]
}

fn emit_matrix(doc: &MatrixDocument, format: Format, out: &mut Vec<u8>) -> Result<i32> {
    match format {
        Format::Csv => doc.write_csv(out)?,
        Format::Json => doc.write_json(out)?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_build(a: &BuildArgs, out: &mut Vec<u8>) -> Result<i32> {
    let doc = match a.system.resolve()? {
        System::Chain(spec) => {
            check_dense_cells(spec.n_sites, spec.n_sites)?;
            let mut header = chain_header(&spec);
            header.insert(0, ("object".into(), json!("hamiltonian")));
            MatrixDocument {
                header,
                entries: Entries::Exact(build_hamiltonian(&spec)?),
            }
        }
        System::Lattice(spec) => {
            let mut header = lattice_header(&spec);
            header.insert(0, ("object".into(), json!("hamiltonian")));
            MatrixDocument {
                header,
                entries: Entries::Exact(build_lattice_hamiltonian(&spec)?),
            }
        }
    };
    emit_matrix(&doc, a.format, out)
}

fn site_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::InvalidSpec(format!("bad site index {t:?}")))
        })
        .collect()
}

fn single_site(text: &str) -> Result<usize> {
    match site_list(text)?.as_slice() {
        [r] => Ok(*r),
        _ => Err(Error::InvalidSpec(format!("chains take one site index, got {text:?}"))),
    }
}

fn chain_green_float(spec: &ChainSpec, method: Method) -> Result<FloatMatrix> {
    let h = build_hamiltonian(spec)?.to_float();
    match method {
        Method::Numeric => Ok(lu_inverse(&h)?.neg()),
        Method::Spectral => {
            let n = spec.n_sites;
            let mut g = FloatMatrix::zeros(n, n);
            for r in 1..=n {
                for s in 1..=n {
                    g[(r - 1, s - 1)] = -spectral_at_zero(spec, r, s)?;
                }
            }
            Ok(g)
        }
        Method::Closed | Method::Usmani => unreachable!("exact methods"),
    }
}

/// The resolvent at E = 0, with a pole there reported as singularity.
fn spectral_at_zero(spec: &ChainSpec, r: usize, s: usize) -> Result<f64> {
    spectral_resolvent_entry(spec, r, s, 0.0).map_err(|e| match e {
        Error::EnergyAtPole { .. } => Error::NumericallySingular { pivot: 0 },
        other => other,
    })
}

fn usmani_green(spec: &ChainSpec) -> Result<ExactMatrix> {
    if spec.topology != Topology::Open {
        return Err(Error::InvalidSpec("the Usmani method needs an open chain".into()));
    }
    let h = build_hamiltonian(spec)?;
    Ok(usmani_inverse(&TridiagonalSpec::from_matrix(&h)?)?.neg())
}

fn square_exact(m: &ExactMatrix) -> ExactMatrix {
    ExactMatrix::from_fn(m.rows(), m.cols(), |i, j| &m[(i, j)] * &m[(i, j)])
}

fn square_float(m: &FloatMatrix) -> FloatMatrix {
    FloatMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)] * m[(i, j)])
}

pub fn cmd_green(a: &GreenArgs, out: &mut Vec<u8>) -> Result<i32> {
    let system = a.system.resolve()?;
    let pair = a.r.as_deref().zip(a.s.as_deref());
    let object = if a.transmission { "transmission" } else { "green" };
    match system {
        System::Chain(spec) => {
            let method = a.method.unwrap_or(Method::Closed);
            let mut header = chain_header(&spec);
            header.insert(0, ("object".into(), json!(object)));
            header.push(("method".into(), json!(method_name(method))));
            if let Some((r, s)) = pair {
                let (r, s) = (single_site(r)?, single_site(s)?);
                spec.site(r)?;
                spec.site(s)?;
                let value = match method {
                    Method::Closed => Scalar::Exact(green_entry(&GreenEntryQuery::new(spec.clone(), r, s)?)?),
                    Method::Usmani => Scalar::Exact(usmani_green(&spec)?[(r - 1, s - 1)].clone()),
                    Method::Numeric => Scalar::Float(chain_green_float(&spec, method)?[(r - 1, s - 1)]),
                    Method::Spectral => Scalar::Float(-spectral_at_zero(&spec, r, s)?),
                };
                let value = match (value, a.transmission) {
                    (Scalar::Exact(q), true) => Scalar::Exact(&q * &q),
                    (Scalar::Float(v), true) => Scalar::Float(v * v),
                    (v, false) => v,
                };
                header.push(("r".into(), json!(r)));
                header.push(("s".into(), json!(s)));
                value.write(&header, a.format, out)?;
                return Ok(EXIT_OK);
            }
            check_dense_cells(spec.n_sites, spec.n_sites)?;
            let entries = match method {
                Method::Closed => Entries::Exact(green_matrix(&spec)?),
                Method::Usmani => Entries::Exact(usmani_green(&spec)?),
                m => Entries::Float(chain_green_float(&spec, m)?),
            };
            let entries = match (entries, a.transmission) {
                (Entries::Exact(m), true) => Entries::Exact(square_exact(&m)),
                (Entries::Float(m), true) => Entries::Float(square_float(&m)),
                (e, false) => e,
            };
            emit_matrix(&MatrixDocument { header, entries }, a.format, out)
        }
        System::Lattice(spec) => {
            let method = a.method.unwrap_or(Method::Spectral);
            let mut header = lattice_header(&spec);
            header.insert(0, ("object".into(), json!(object)));
            header.push(("method".into(), json!(method_name(method))));
            if matches!(method, Method::Closed | Method::Usmani) {
                return Err(Error::InvalidSpec(format!(
                    "method {} is not available for lattices",
                    method_name(method)
                )));
            }
            if let Some((r, s)) = pair {
                let (r, s) = (MultiIndex::new(site_list(r)?), MultiIndex::new(site_list(s)?));
                r.check(&spec)?;
                s.check(&spec)?;
                let v = match method {
                    Method::Spectral => lattice_green_entry(&spec, &r, &s)?,
                    _ => {
                        check_dense_cells(spec.sites(), spec.sites())?;
                        let g = lu_inverse(&build_lattice_hamiltonian_float(&spec)?)?;
                        -g[(r.flat(&spec), s.flat(&spec))]
                    }
                };
                header.push(("r".into(), json!(r.coords)));
                header.push(("s".into(), json!(s.coords)));
                let v = if a.transmission { v * v } else { v };
                Scalar::Float(v).write(&header, a.format, out)?;
                return Ok(EXIT_OK);
            }
            let g = match method {
                Method::Spectral => lattice_green_matrix(&spec)?,
                _ => lu_inverse(&build_lattice_hamiltonian_float(&spec)?)?.neg(),
            };
            let g = if a.transmission { square_float(&g) } else { g };
            emit_matrix(
                &MatrixDocument {
                    header,
                    entries: Entries::Float(g),
                },
                a.format,
                out,
            )
        }
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Closed => "closed",
        Method::Usmani => "usmani",
        Method::Numeric => "numeric",
        Method::Spectral => "spectral",
    }
}

pub fn cmd_det(a: &DetArgs, out: &mut Vec<u8>) -> Result<i32> {
    let (header, det) = match a.system.resolve()? {
        System::Chain(spec) => {
            let det = match (spec.topology, spec.is_uniform()) {
                (Topology::Open, true) => Rational::from_integer(det_open(spec.n_sites).into()),
                (Topology::Cyclic, true) => Rational::from_integer(det_cyclic(spec.n_sites)?.into()),
                _ => {
                    check_dense_cells(spec.n_sites, spec.n_sites)?;
                    build_hamiltonian(&spec)?.det_fraction_free()?
                }
            };
            (chain_header(&spec), det)
        }
        System::Lattice(spec) => (lattice_header(&spec), build_lattice_hamiltonian(&spec)?.det_fraction_free()?),
    };
    let mut header = header;
    header.insert(0, ("object".into(), json!("determinant")));
    Scalar::Exact(det).write(&header, a.format, out)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct DecisionDocument {
    kind: &'static str,
    d: usize,
    n_plus_one: usize,
    invertible: bool,
    reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Option<Vec<usize>>>,
}

pub fn cmd_invertible(a: &InvertibleArgs, out: &mut Vec<u8>) -> Result<i32> {
    let q = InvertibilityQuery::new(a.d, a.n_plus_one)?;
    let decision = decide(q);
    let witness = if a.witness {
        Some(find_vanishing_witness(q, a.budget)?.map(|w| w.ks))
    } else {
        None
    };
    let doc = DecisionDocument {
        kind: "decision",
        d: a.d,
        n_plus_one: a.n_plus_one,
        invertible: decision.invertible,
        reason: decision.reason.to_string(),
        witness,
    };
    crate::output::write_json_line(&doc, out)?;
    Ok(EXIT_OK)
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut Vec<u8>) -> Result<i32> {
    let report = verify::run(a.suite, a.max_n, a.seed);
    crate::output::write_json_line(&report, out)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

/// Runs the process: parse `std::env::args`, print, return the exit code.
pub fn main() -> i32 {
    let outcome = run(std::env::args_os());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    outcome.code
}
