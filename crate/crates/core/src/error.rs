use alloc::string::String;
use core::fmt;

/// Failures reported by constructors and operators of this crate.
///
/// Most variants signal a caller error (mismatched rings, wrong exponent);
/// `TriangleIdentity` and `IntegralityViolated` indicate a broken construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    Dimension(String),
    NotAssociative { i: usize, j: usize, k: usize },
    UnitLaw { i: usize },
    IllDefinedStructure { i: usize, j: usize },
    UnknownCatalog(String),
    InvalidParameter(String),
    RingMismatch(String),
    ShapeMismatch(String),
    NotBimoduleMap(String),
    InvalidBimodule(String),
    InvalidPresentation(String),
    TriangleIdentity(String),
    NotDualizable,
    ExponentMismatch { expected: usize, found: usize },
    GammaInverseUnavailable,
    NotEquivariant,
    NotCommutative,
    IntegralityViolated { index: usize },
    NotProjective(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::NotAssociative { i, j, k } => {
                write!(f, "not associative on basis triple ({i}, {j}, {k})")
            }
            Error::UnitLaw { i } => write!(f, "unit law fails on basis element {i}"),
            Error::IllDefinedStructure { i, j } => {
                write!(f, "ill-defined structure constants on basis pair ({i}, {j})")
            }
            Error::UnknownCatalog(name) => write!(f, "unknown catalog algebra '{name}'"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::RingMismatch(msg) => write!(f, "ring mismatch: {msg}"),
            Error::ShapeMismatch(msg) => write!(f, "shape mismatch: {msg}"),
            Error::NotBimoduleMap(msg) => write!(f, "not a bimodule map: {msg}"),
            Error::InvalidBimodule(msg) => write!(f, "invalid bimodule: {msg}"),
            Error::InvalidPresentation(msg) => write!(f, "invalid projective presentation: {msg}"),
            Error::TriangleIdentity(msg) => write!(f, "triangle identity fails: {msg}"),
            Error::NotDualizable => write!(f, "not dualizable here"),
            Error::ExponentMismatch { expected, found } => {
                write!(f, "exponent mismatch: expected {expected}, found {found}")
            }
            Error::GammaInverseUnavailable => write!(
                f,
                "Γ-inverse unavailable: neither twist is trivial, supply a twisted tuple instead"
            ),
            Error::NotEquivariant => write!(f, "not equivariant"),
            Error::NotCommutative => write!(f, "base ring is not commutative"),
            Error::IntegralityViolated { index } => {
                write!(f, "integrality violated at ghost index {index}")
            }
            Error::NotProjective(msg) => write!(f, "not projective: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
