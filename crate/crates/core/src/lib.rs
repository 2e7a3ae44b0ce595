pub mod bounds;
pub mod complex;
pub mod css;
pub mod discrepancy;
pub mod enumerator;
pub mod f2;
pub mod harness;
pub mod io;
pub mod kravchuk;
pub mod walks;

use num_rational::BigRational;
use thiserror::Error;

pub use complex::{ChainComplex2, DegreeProfile};
pub use css::{CodeParams, CssCode, DistanceResult};
pub use discrepancy::{DiscrepancyReport, Hypergraph, Reference};
pub use enumerator::WeightEnumerator;
pub use f2::{BitVector, EchelonBasis, F2Matrix};
pub use harness::{ExperimentConfig, ExperimentReport, Ledger, Level, Source, Status};
pub use kravchuk::KravchukTable;
pub use walks::{FiniteChain, LineChain};

/// Any error the library can return.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    F2(#[from] f2::F2Error),
    #[error(transparent)]
    Complex(#[from] complex::ComplexError),
    #[error(transparent)]
    Css(#[from] css::CssError),
    #[error(transparent)]
    Kravchuk(#[from] kravchuk::KravchukError),
    #[error(transparent)]
    Enumerator(#[from] enumerator::EnumeratorError),
    #[error(transparent)]
    Discrepancy(#[from] discrepancy::DiscrepancyError),
    #[error(transparent)]
    Walk(#[from] walks::WalkError),
    #[error(transparent)]
    Bounds(#[from] bounds::BoundsError),
    #[error(transparent)]
    Io(#[from] io::IoError),
    #[error(transparent)]
    Harness(#[from] harness::HarnessError),
}

/// Renders a rational as `p/q`, always with an explicit denominator.
pub fn ratio_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
