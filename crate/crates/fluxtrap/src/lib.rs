//! Spectral toolkit for a planar electron with anomalous magnetic moment.
//!
//! The operator under study is the two-dimensional Pauli Hamiltonian
//! `(-i∇ - A)² ± (g/2) B` in natural units (2m = ħ = c = e = 1), for two
//! families of field configurations:
//!
//! * compactly supported magnetic fields with positive total flux, where the
//!   anomaly g > 2 turns every Aharonov-Casher zero mode into a genuine bound
//!   state (plus one more coming from the zero-energy resonance), and
//! * zero-flux fields of an azimuthal current vortex, where bound states
//!   appear either at weak coupling (s-wave, from a second-order smallness
//!   condition) or at strong coupling (harmonic-oscillator limit after the
//!   rescaling u = r√λ).
//!
//! Everything here is desk scale: hand-rolled tridiagonal and banded linear
//! algebra, adaptive Gauss-Kronrod quadrature, and grids small enough that
//! every claim in the test suite reruns in minutes.
//!
//! # Where to start
//!
//! The `examples/` directory is the primary interface; each file is a
//! self-contained study that prints what it is doing:
//!
//! ```text
//! cargo run --release --example elliptic_integrals   special functions used by the vortex kernel
//! cargo run --release --example flux_and_zero_modes  flux decomposition, log potential, zero-mode decay
//! cargo run --release --example bound_state_count    guaranteed count + variational certificates, g > 2
//! cargo run --release --example sign_changing_field  annulus tuned so the resonance needs the bump term
//! cargo run --release --example vortex_potential     current vortex: elliptic kernel vs Biot-Savart
//! cargo run --release --example weak_coupling        smallness condition and the shallow-state energy law
//! cargo run --release --example strong_coupling      rescaled spectra approaching the oscillator limit
//! cargo run --release --example critical_strength    threshold current strength per angular channel
//! cargo run --release --example planar_crosscheck    full 2D solver vs partial-wave solver
//! ```
//!
//! The thin CLI wraps the same scenarios behind JSON configs; see
//! `presets/` for one config per acceptance property and the README for the
//! file formats.
//!
//! # Module map
//!
//! * [`specfun`]: complete elliptic integrals (AGM) and adaptive quadrature
//!   with declared integrable singularities.
//! * [`fields`]: field and current profiles, flux, logarithmic potential,
//!   gauges, the vortex vector potential, current moments, grid file I/O.
//! * [`zeromodes`]: zero modes, binding integrals, the guaranteed count, and
//!   the constructive variational certifier.
//! * [`radial_solver`]: partial-wave discretization on the half line, Sturm
//!   counts, negative spectra, critical strengths, weak/strong coupling.
//! * [`planar_solver`]: link-phase discretization of the full 2D operator,
//!   banded shift-invert Lanczos, zero-mode residuals.
//! * [`scenario`]: JSON scenario configs, reports, CSV tables, presets.

pub mod fields;
pub mod planar_solver;
pub mod radial_solver;
pub mod scenario;
pub mod specfun;
pub mod zeromodes;

use thiserror::Error;

/// Unified error type. The CLI maps the variants onto exit statuses
/// (validation 2, convergence 3, I/O 4).
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside an operation's domain (bad parameter, malformed config).
    #[error("validation: {0}")]
    Validation(String),
    /// An iterative or adaptive method exhausted its budget.
    #[error("convergence: {0}")]
    Convergence(String),
    /// File system or serialization failure.
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
