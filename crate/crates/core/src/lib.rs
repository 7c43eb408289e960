//! Monic matrix polynomials with linearly structured coefficients from
//! partial eigendata.
//!
//! Given `m` eigenpairs of an `n x n` polynomial of degree `k`
//! (`1 <= m <= kn`), [`solver::solve`] finds every
//! `lambda^k I + sum_{i<k} lambda^i A_i` whose coefficients lie in a chosen
//! linear structure ([`structures`]) and which has those eigenpairs, reports
//! whether such a polynomial exists and whether it is unique, and returns the
//! minimal-norm member of the solution family.
//!
//! ```
//! use lppiep::{encode, solve, EigenpairInput, SolveOptions, StructureBasis, StructureKind};
//!
//! // lambda + a0 with a root at 2
//! let ep = encode(&[EigenpairInput::real(2.0, &[1.0])], 1).unwrap();
//! let basis = StructureBasis::build(StructureKind::Full, 1).unwrap();
//! let out = solve(&ep, &basis, 1, &SolveOptions::default()).unwrap();
//! assert_eq!(out.polynomial.unwrap().coefficient(0)[(0, 0)], -2.0);
//! ```

pub mod eigendata;
pub mod error;
pub mod fixtures;
pub mod generate;
pub mod io;
pub mod linalg;
pub mod solver;
pub mod structures;
pub mod verify;

pub use eigendata::{decode, encode, EigenpairInput, RealEigenpairs};
pub use error::{Error, Result};
pub use solver::{
    analyze, assemble, assemble_with, extract_coefficient, monicize, solve, AssembledSystem, BoundPolicy, MonicPolynomial,
    Monicized, SolutionFamily, SolveOptions, SolveOutcome, ToleranceConfig,
};
pub use structures::{unvec, vec, StructureBasis, StructureKind, StructuredMatrix};
pub use verify::{companion_eigs, generate_example3, residual, ResidualReport};
