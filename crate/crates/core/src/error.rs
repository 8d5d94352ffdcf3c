use std::fmt;

use crate::exact::Rational;

/// Why a matrix has no inverse.
#[derive(Debug, Clone, PartialEq)]
pub enum SingularCase {
    /// Open chain with an odd number of sites.
    OpenOddN,
    /// Uniform cycle whose length is a multiple of four.
    CycleMultipleOfFour,
    /// A closed-form denominator vanished exactly.
    VanishingDenominator,
    /// Tridiagonal determinant θ_N is zero; carries θ_{-1}..θ_N.
    ZeroTheta { theta: Vec<Rational> },
    /// Circulant symbol value at Fourier index `j` vanishes.
    VanishingSymbol { j: Option<usize> },
    /// Generic exact elimination found no pivot.
    ZeroDeterminant,
}

impl fmt::Display for SingularCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularCase::OpenOddN => write!(f, "N odd"),
            SingularCase::CycleMultipleOfFour => write!(f, "N=4k"),
            SingularCase::VanishingDenominator => write!(f, "vanishing denominator"),
            SingularCase::ZeroTheta { .. } => write!(f, "theta_N=0"),
            SingularCase::VanishingSymbol { j: Some(j) } => write!(f, "symbol vanishes at j={j}"),
            SingularCase::VanishingSymbol { j: None } => write!(f, "symbol vanishes"),
            SingularCase::ZeroDeterminant => write!(f, "zero determinant"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("AlternatingOddN: bond alternation needs an even site count, got N={n}")]
    AlternatingOddN { n: usize },
    #[error("CycleTooSmall: cycle with N={n} sites")]
    CycleTooSmall { n: usize },
    #[error("InvalidSpec: {0}")]
    InvalidSpec(String),
    #[error("UnsupportedCouplings: operation needs equal couplings")]
    UnsupportedCouplings,
    #[error("ZeroCoupling: couplings must be nonzero")]
    ZeroCoupling,
    #[error("EnergyAtPole: E={energy} lies on eigenvalue {eigenvalue}")]
    EnergyAtPole { energy: f64, eigenvalue: f64 },
    #[error("IndexOutOfRange: site {index} outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("singular: {case}")]
    Singular { n: usize, case: SingularCase },
    #[error("NotSingular: N={n} is not a multiple of 4")]
    NotSingular { n: usize },
    #[error("singular: lattice d={dim} N={n}")]
    SingularLattice {
        dim: usize,
        n: usize,
        witness: Option<Vec<usize>>,
    },
    #[error("TooLarge: {cells} cells exceeds limit {limit}")]
    TooLarge { cells: u128, limit: u128 },
    #[error("BudgetExhausted: search stopped after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },
    #[error("NearSingularAngle: sin(theta/2) vanishes at theta={theta}")]
    NearSingularAngle { theta: f64 },
    #[error("DegenerateAngle: k={k} is a multiple of N+1={modulus}")]
    DegenerateAngle { k: usize, modulus: usize },
    #[error("IdentityMismatch: expected {expected}, observed {observed}")]
    IdentityMismatch { expected: f64, observed: f64 },
    #[error("NumericallySingular: pivot {pivot}")]
    NumericallySingular { pivot: usize },
    #[error("NotSymmetric: asymmetry {asymmetry}")]
    NotSymmetric { asymmetry: f64 },
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
}

impl Error {
    pub(crate) fn singular(n: usize, case: SingularCase) -> Self {
        Error::Singular { n, case }
    }

    /// True for every flavour of "this matrix has no inverse".
    pub fn is_singular(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. } | Error::SingularLattice { .. } | Error::NumericallySingular { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
