//! Dual-number spectral analysis of nonnegative tensors, applied as a
//! tie-breaking centrality for uniform hypergraphs.
//!
//! A dual tensor `A_s + A_d ε` (with `ε² = 0`) whose standard part is a
//! weakly irreducible nonnegative tensor has a positive dual eigenvalue with a
//! positive dual eigenvector. The standard part of that eigenvector is the
//! ordinary Perron vector; the dual part solves a singular linear system whose
//! matrix is an irreducible singular M-matrix, and is recovered here through a
//! bordered group-inverse solve. Perturbing chosen (hyper)edges through the
//! dual part separates vertices that the Perron vector leaves tied.
//!
//! Module map:
//! - [`dual`]: dual-number scalars.
//! - [`hypergraph`]: uniform hypergraphs, perturbations, file parsing.
//! - [`tensor`]: sparse symmetric tensors, tensor application in real and dual
//!   arithmetic, weak irreducibility.
//! - [`spectral`]: Perron pair by shifted power iteration.
//! - [`msolve`]: singular M-matrix solves — left null vector, group inverse,
//!   principal-submatrix `{1}`-inverses.
//! - [`dualeig`]: assembly and verification of dual eigenpairs.
//! - [`centrality`]: the end-to-end pipeline, rankings, built-in instances.

pub mod centrality;
pub mod dual;
pub mod dualeig;
pub mod error;
pub mod hypergraph;
pub mod msolve;
pub mod spectral;
pub mod tensor;

pub use centrality::{
    builtin_instance, dual_centrality, rank_vertices, BuiltinInstance, CentralityConfig,
    DualCentralityResult, RankTable,
};
pub use dual::DualNumber;
pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, Perturbation};
pub use spectral::{perron_pair, PerronPair, SpectralConfig};
pub use tensor::{dual_tensor_apply, SparseSymTensor};
