//! Exact ground-state solver for the Kitaev honeycomb model on an L×L torus.
//!
//! The model is a spin-1/2 lattice with bond-direction-dependent Ising
//! couplings (Jx, Jy, Jz). In the vortex-free flux sector it reduces to free
//! Majorana fermions with single-particle spectrum E(q) = |f(q)|,
//! f(q) = ε(q) + iΔ(q), over an L×L momentum grid. Everything downstream of
//! that closed form is assembled here:
//!
//! - [`spectrum`]: momentum grids, ε/Δ/E, energy gap, ground energy, and the
//!   gapless-B vs gapped-A phase classification.
//! - [`correlators`]: ground-state ⟨σᶻσᶻ⟩ and two-bond ⟨σᶻσᶻσᶻσᶻ⟩ as momentum
//!   sums, with an O(L²) factorized path and an O(L⁴) reference path.
//! - [`information`]: reduced density matrices of one z-bond and of two
//!   z-bonds, their entropies and mutual information, including a
//!   cancellation-safe route for the tiny connected part.
//! - [`scan`]: sweeps along the symmetric line Jx = Jy = (1−Jz)/2, numerical
//!   derivatives, peak location, finite-size scaling fits, and a simplex
//!   raster of the phase diagram.
//! - [`ed`]: dense exact diagonalization of the smallest periodic cluster
//!   (8 sites) as an independent cross-check of correlator structure.
//!
//! All grid sums use a fixed-tree pairwise reduction so results are
//! bit-identical regardless of how many worker threads execute a sweep.

pub mod correlators;
pub mod ed;
pub mod information;
pub mod scan;
pub mod spectrum;
pub mod sum;

use thiserror::Error;

/// Errors for domain violations across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("couplings must be finite with at least one nonzero component (got {jx}, {jy}, {jz})")]
    InvalidCouplings { jx: f64, jy: f64, jz: f64 },

    #[error("couplings sum must be positive to normalize (got sum {0})")]
    NonPositiveSum(f64),

    #[error("lattice size must be at least 2 (got {0})")]
    LatticeTooSmall(usize),

    #[error("jz must lie in [0, 1] on the symmetric line (got {0})")]
    JzOutOfRange(f64),

    #[error("O(L^4) reference sum refused for L = {0} > {1}; use the factorized path or pass the override flag")]
    NaiveSumTooLarge(usize, usize),

    #[error("entropy argument must lie in [0, 1] (got {0})")]
    EntropyDomain(f64),

    #[error("|c2| must not exceed 1 (got {0})")]
    CorrelatorOutOfRange(f64),

    #[error("unphysical correlator pair: c2 = {c2}, c4 = {c4} gives a negative eigenvalue {eigenvalue}")]
    UnphysicalPair { c2: f64, c4: f64, eigenvalue: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidRdm(String),

    #[error("invalid scan config: {0}")]
    InvalidScanConfig(String),

    #[error("series too short: need at least {need} points, got {got}")]
    SeriesTooShort { need: usize, got: usize },

    #[error("scaling fit needs strictly monotone peaks (violated at index {0})")]
    NonMonotonePeaks(usize),

    #[error("scaling fit needs at least 3 sizes (got {0})")]
    TooFewSizes(usize),

    #[error("raster resolution must be at least 2 (got {0})")]
    ResolutionTooSmall(usize),

    #[error("link table is not a 3-regular coloring: {0}")]
    BadLinkTable(String),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
