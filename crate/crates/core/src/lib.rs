//! Squeezing and entanglement generated by spontaneous degenerate parametric
//! down-conversion in two linearly coupled waveguides.
//!
//! Everything is computed at the Gaussian-state level: the quadrature
//! vector `(x_A, p_A, x_B, p_B)` evolves under a constant 4×4 drift matrix,
//! the covariance matrix follows the induced symplectic map, and
//! nonclassicality / entanglement are read off the covariance matrix.
//!
//! Module map:
//!
//! * [`matkernel`] – fixed-size dense linear algebra (expm, Jacobi, quartic roots).
//! * [`coupler`] – device parameters, drift matrix, operating regime.
//! * [`dynamics`] – propagator, covariance evolution, generalized squeeze variance.
//! * [`entanglement`] – partial-transpose symplectic spectrum, logarithmic negativity.
//! * [`optimizer`] – phase tuning for maximal logarithmic negativity.
//! * [`sweep`] – z-grid sweeps, figure presets, config files and CSV output.

pub mod coupler;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod matkernel;
pub mod optimizer;
pub mod sweep;

pub use coupler::{
    build_drift, classify_regime, classify_regime_spectral, effective_phase, CouplerParams,
    CouplingMagnitudes, DriftMatrix, Regime, RegimeKind, SpectralRegime,
};
pub use dynamics::{
    evolve, propagator, squeeze_variance, vacuum_covariance, CovarianceMatrix, Propagator,
};
pub use entanglement::{
    block_decompose, log_negativity, pt_spectrum_oracle, pt_symplectic_spectrum,
    BlockDecomposition, EntanglementReport,
};
pub use error::{Error, Result};
pub use matkernel::{Extended, Mat2, Mat4, Real};
pub use optimizer::{en_of_phase, optimize_over_z, optimize_phase, PhaseOptimum};
pub use sweep::{
    run_figure, run_sweep, FigureOptions, ParamSpec, Preset, Quantity, SweepConfig, SweepSpec,
};
