//! Exact Stanley depth of monomial ideals and their quotients.
//!
//! The Stanley depth of `S/I` (or of `I`) equals the best value of
//! `min ρ(G_i)` over partitions of the characteristic poset into intervals
//! `[F_i, G_i]`, where `ρ(G)` counts the coordinates in which `G` reaches the
//! bound vector `g`. This crate builds those posets and searches for optimal
//! partitions exactly, returning a checkable [`PartitionCertificate`].
//!
//! ```
//! use sdepth_core::{sdepth_quotient, MonomialIdeal};
//!
//! let path = MonomialIdeal::path(6).unwrap();
//! let (value, _certificate) = sdepth_quotient(&path, None).unwrap();
//! assert_eq!(value, 2);
//! ```

mod bitset;
mod cover;
pub mod error;
pub mod formulas;
pub mod ideal;
pub mod monomial;
pub mod oracle;
pub mod poset;
pub mod solver;

pub use error::{Error, Result};
pub use ideal::MonomialIdeal;
pub use monomial::ExponentVector;
pub use poset::{rho, BoundVector, CharPoset, Interval, Mode};
pub use solver::{
    partition_exists, sdepth_ideal, sdepth_of_poset, sdepth_quotient, validate_certificate, CandidateMode,
    PartitionCertificate, Solution, Solver, SolverConfig, Strategy, Validation,
};
