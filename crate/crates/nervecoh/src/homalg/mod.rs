//! Exact homological algebra over `Z`, `Q`, and prime fields.
//!
//! The submodules provide, in dependency order:
//!
//! * [`ring`]: the coefficient ring tag and its selector syntax;
//! * [`matrix`]: canonical sparse integer matrices, pullback matrices of
//!   index maps, and alternating-sum simplicial differentials;
//! * [`elim`]: a sparse elimination engine with three scalar backends
//!   (machine integers with overflow detection, big integers, and a prime
//!   field) used for exact rank computation;
//! * [`snf`]: Smith normal form with recorded unimodular transforms, and the
//!   invariant-factor routine used for integral torsion;
//! * [`complex`]: validated cochain complexes, Betti numbers, and torsion;
//! * [`double`]: validated double and triple complexes, totalization, and a
//!   column-wise quasi-isomorphism test through mapping cones.

pub mod complex;
pub mod double;
pub mod elim;
pub mod matrix;
pub mod ring;
pub mod snf;

pub use complex::{BettiEntry, BettiTable, GradedComplex};
pub use double::{
    check_column_quasi_iso_total, totalize_double, totalize_triple, ColumnCheck,
    DoubleComplexMap, DoubleComplexSpec, QuasiIsoReport, TripleComplexSpec,
};
pub use elim::rank;
pub use matrix::{pullback_matrix, simplicial_differential, SparseMatrix};
pub use ring::RingSpec;
pub use snf::{invariant_factors, smith_normal_form, SmithNormalForm};

use std::fmt;
use thiserror::Error;

/// A position in a multi-graded object, used in diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiDegree(pub Vec<usize>);

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, d) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

impl From<(usize, usize)> for MultiDegree {
    fn from((p, q): (usize, usize)) -> Self {
        MultiDegree(vec![p, q])
    }
}

impl From<(usize, usize, usize)> for MultiDegree {
    fn from((p, q, r): (usize, usize, usize)) -> Self {
        MultiDegree(vec![p, q, r])
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomalgError {
    #[error("coefficient ring selector {0:?} is not recognized; expected \"z\", \"q\", or \"fp:<prime>\"")]
    BadRingSelector(String),
    #[error("{0} is not a prime number")]
    NotPrime(u64),
    #[error("matrix dimensions {rows} x {cols} exceed the supported size")]
    MatrixTooLarge { rows: usize, cols: usize },
    #[error("matrix entry at ({row}, {col}) is outside a {rows} x {cols} matrix")]
    EntryOutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("face image {image} of point {point} is outside a codomain of size {codomain}")]
    FaceImageOutOfRange {
        point: usize,
        image: usize,
        codomain: usize,
    },
    #[error("coefficient rings differ: {left} vs {right}")]
    RingMismatch { left: RingSpec, right: RingSpec },
    #[error("cannot {op} a {left_rows} x {left_cols} and a {right_rows} x {right_cols} matrix")]
    ShapeMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("matrix dump line {line}: {message}")]
    DumpParse { line: usize, message: String },
    #[error(
        "differential at degree {degree} is {rows} x {cols}, expected {expected_rows} x {expected_cols}"
    )]
    DifferentialShape {
        degree: usize,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("d o d != 0 at degree {degree}")]
    NotAComplex { degree: usize },
    #[error(
        "cohomology at degree {degree} needs differentials up to degree {needed}, but the complex is truncated below that"
    )]
    InsufficientTruncation { degree: usize, needed: usize },
    #[error("Smith normal form requires integer coefficients, got {0}")]
    SnfRequiresIntegers(RingSpec),
    #[error("{0} x {1} matrix is too large for the dense Smith normal form stage")]
    SnfTooLarge(usize, usize),
    #[error("missing dimension entry at {at}")]
    MissingDimension { at: MultiDegree },
    #[error("missing {direction} differential at {at}")]
    MissingDifferential {
        direction: &'static str,
        at: MultiDegree,
    },
    #[error(
        "{direction} differential at {at} is {rows} x {cols}, expected {expected_rows} x {expected_cols}"
    )]
    BlockShape {
        direction: &'static str,
        at: MultiDegree,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("{direction} differential does not square to zero starting at {at}")]
    SquareNotZero {
        direction: &'static str,
        at: MultiDegree,
    },
    #[error("{first} and {second} differentials fail to anticommute starting at {at}")]
    AnticommuteFailure {
        first: &'static str,
        second: &'static str,
        at: MultiDegree,
    },
    #[error("truncations differ: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("map fails to commute with the {direction} differentials starting at {at}")]
    NotChainMap {
        direction: &'static str,
        at: MultiDegree,
    },
    #[error("missing map block at {at}")]
    MissingMapBlock { at: MultiDegree },
    #[error("rank exceeded dimension bookkeeping at degree {degree}; this is a bug")]
    RankInconsistency { degree: usize },
}
