//! Two-level atom in a travelling plane wave, with the atom prepared in
//! arbitrary momentum-space wave packets on both internal levels.
//!
//! Each momentum family (ground at p̃, excited at p̃ + 1, in photon-momentum
//! units) evolves under a closed-form 2×2 dressed-state propagator. The
//! per-family Doppler shift makes the flopping frequency depend on momentum,
//! which damps the level populations and lets the per-level normalized
//! momenta drift by more than one photon momentum when both levels start
//! populated.

pub mod error;
pub mod grid;
pub mod observables;
pub mod oracle;
pub mod output;
pub mod presets;
pub mod propagator;
pub mod scenario;
pub mod state;
pub mod units;

pub use error::{Error, Result};
pub use grid::MomentumGrid;
pub use num_complex::Complex64;
pub use observables::ObservableRecord;
pub use propagator::{evolve, family_matrix, DressedSpectrum};
pub use state::{Level, TwoLevelState};
pub use units::{PhysicalParams, RecoilScales, SimParams};
