//! Toric code on finite lattices.
//!
//! Spins live on the links of a rectangular lattice; the Hamiltonian is a
//! sum of commuting four-spin stabilizers (vertex stars and cell
//! plaquettes), optionally perturbed by a uniform transverse field. The
//! crate computes, by independent routes that cross-check each other:
//!
//! * ground-space degeneracy, from GF(2) stabilizer rank and from explicit
//!   low-lying spectra ([`groundspace`], [`spectrum`]);
//! * entanglement entropy of ground states, from stabilizer rank counting
//!   and from dense reduced density matrices ([`entropy`]);
//! * the dispersion of boundary excitations of the open-boundary lattice
//!   under a weak transverse field, from closed forms, from direct coupling
//!   sums, and from resolvent perturbation chains ([`dispersion`]).

pub mod bits;
pub mod dense;
pub mod dispersion;
pub mod entropy;
pub mod error;
pub mod groundspace;
pub mod lattice;
mod lapack;
pub mod pauli;
pub mod spectrum;

pub use dense::DenseState;
pub use dispersion::{BoundaryCouplings, DispersionCurve};
pub use entropy::{Bipartition, CutKind, EntropyReport};
pub use error::{Error, Result};
pub use groundspace::{BoundaryConfig, CoefficientFamily};
pub use lattice::{Boundary, Lattice};
pub use pauli::{PauliOp, StabilizerGroup};
pub use spectrum::{Eigenpair, HamiltonianParams, SparseOperator, Spectrum};
