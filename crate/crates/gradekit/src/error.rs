use thiserror::Error;

/// Every failure the engine can report. Variant names are stable and surface
/// verbatim in CLI reports together with the owning module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // ffield
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    ReduciblePolynomial(u32),
    #[error("field order {0} exceeds 2^16")]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element does not belong to this field")]
    FieldMismatch,
    #[error("unit group of GF(2) is trivial")]
    TrivialUnitGroup,
    #[error("logarithm of zero")]
    LogOfZero,

    // grp
    #[error("table is not associative at ({0},{1},{2})")]
    NotAssociative(usize, usize, usize),
    #[error("table has no identity element")]
    NoIdentity,
    #[error("table is not a Latin square (row or column {0})")]
    NotLatinSquare(usize),
    #[error("group order {0} exceeds the cap of 64")]
    OrderTooLarge(usize),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("homomorphisms have different targets")]
    TargetMismatch,
    #[error("homomorphism is not surjective")]
    NotSurjective,
    #[error("isomorphism search is limited to order 16, got {0}")]
    OrderTooLargeForIsoSearch(usize),
    #[error("map is not a group homomorphism")]
    NotAHomomorphism,
    #[error("element index {0} out of range")]
    BadElement(usize),

    // coh
    #[error("cocycle table has a zero entry at ({0},{1})")]
    ZeroEntry(usize, usize),
    #[error("cochain has a zero value at {0}")]
    ZeroValue(usize),
    #[error("group or field mismatch")]
    GroupOrFieldMismatch,
    #[error("not a 2-cocycle: identity fails at ({0},{1},{2})")]
    NotACocycle(usize, usize, usize),
    #[error("pullback data does not match the cocycles")]
    IncompatiblePullback,
    #[error("cocycle is not normalized")]
    NotNormalized,

    // gralg
    #[error("invalid graded algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("search caps exceeded; answer undetermined")]
    Undetermined,
    #[error("algebra is not strongly graded")]
    NotStronglyGraded,
    #[error("dimension {0} exceeds the cap of 256")]
    DimensionTooLarge(usize),

    // grend
    #[error("modules are over different algebras")]
    AlgebraMismatch,
    #[error("module is zero")]
    ZeroModule,
    #[error("module is not graded simple")]
    NotGradedSimple,
    #[error("endomorphism component of degree {0} has dimension {1}, expected 1")]
    ComponentNotLine(usize, usize),
    #[error("homogeneous endomorphism of degree {0} is not invertible")]
    NotInvertible(usize),
    #[error("support is not a subgroup")]
    SupportNotSubgroup,
    #[error("no invertible element in component {0}")]
    NoUnitInComponent(usize),
    #[error("search caps exceeded; answer undetermined")]
    CapExceededUndetermined,
    #[error("algebra is not semisimple")]
    NotSemisimple,
    #[error("module splitting exhausted its seed budget")]
    SplitBudgetExceeded,

    // mackey
    #[error("module is not a module over the base algebra")]
    NotBaseModule,
    #[error("module is not absolutely simple (endomorphism dimension {0})")]
    NotAbsolutelySimple(usize),
    #[error("splitting check failed: End of the simple base module has dimension {0}; try a larger field")]
    SplittingFails(usize),
    #[error("caps exceeded")]
    CapExceeded,

    // cli
    #[error("parse error at {at}: {msg}")]
    ParseError { at: String, msg: String },
}

impl Error {
    /// Name of the module that raises this error.
    pub fn module(&self) -> &'static str {
        use Error::*;
        match self {
            NonPrime(_) | ReduciblePolynomial(_) | FieldTooLarge(_) | DivisionByZero
            | FieldMismatch | TrivialUnitGroup | LogOfZero => "ffield",
            NotAssociative(..) | NoIdentity | NotLatinSquare(_) | OrderTooLarge(_)
            | NotNormal | TargetMismatch | NotSurjective | OrderTooLargeForIsoSearch(_)
            | NotAHomomorphism | BadElement(_) => "grp",
            ZeroEntry(..) | ZeroValue(_) | GroupOrFieldMismatch | NotACocycle(..)
            | IncompatiblePullback | NotNormalized => "coh",
            InvalidAlgebra(_) | InvalidModule(_) | Undetermined | NotStronglyGraded
            | DimensionTooLarge(_) => "gralg",
            AlgebraMismatch | ZeroModule | NotGradedSimple | ComponentNotLine(..)
            | NotInvertible(_) | SupportNotSubgroup | NoUnitInComponent(_)
            | CapExceededUndetermined | NotSemisimple | SplitBudgetExceeded => "grend",
            NotBaseModule | NotAbsolutelySimple(_) | SplittingFails(_) | CapExceeded => "mackey",
            ParseError { .. } => "cli",
        }
    }

    /// Variant name without payload, for machine-readable reports.
    pub fn kind(&self) -> String {
        let dbg = format!("{self:?}");
        dbg.split(|c: char| c == '(' || c == ' ' || c == '{')
            .next()
            .unwrap_or_default()
            .to_string()
    }

    pub fn parse(at: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::ParseError { at: at.into(), msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
