//! Geometric numerical integration for contact Hamiltonian systems.
//!
//! Contact Hamiltonian systems extend classical mechanics with an action
//! coordinate `s`, which lets a single Hamiltonian describe dissipative
//! dynamics. This crate provides:
//!
//! * phase-space types on the extended space `(q, p, s, t)` and evaluation
//!   of the contact Hamiltonian vector field ([`dynamics`]),
//! * separable model Hamiltonians `H = |p|²/2 + V(q,t) + f(s,t)` with exact
//!   sub-flows ([`models`]),
//! * structure-preserving one-step maps — splitting integrators of any even
//!   order and an explicit contact variational integrator — next to RK4 and
//!   explicit midpoint baselines ([`integrators`]),
//! * diagnostics: contact-form defect, convergence-order estimation, orbital
//!   elements, invariant-surface distance, fixed-point analysis, stability
//!   scans, and cost accounting ([`diagnostics`]).
//!
//! The one-step maps are pure functions; trajectory drivers own their
//! evaluation counters, so independent runs may execute concurrently.
//!
//! ```
//! use contact_dynamics::integrators::{integrate, StepMethod};
//! use contact_dynamics::models::QuadraticActionOscillator;
//! use contact_dynamics::state::ContactState;
//!
//! // oscillator with an invariant sphere of radius 6; start on the sphere
//! let model = QuadraticActionOscillator::new(1.0, 18.0);
//! let start = ContactState::scalar(0.0, 6.0, 0.0, 0.0);
//! let run = integrate(&model, StepMethod::chi2(), &start, 0.1, 500.0, 1);
//!
//! assert!(run.status.is_completed());
//! // the trajectory converges to the stable pole near (0, 0, 6)
//! assert!((run.last().s - 6.0).abs() < 0.1);
//! ```

pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod integrators;
pub mod models;
pub mod state;

pub use dynamics::{
    contact_form_defect, contact_vector_field, hamiltonian, hamiltonian_drift, PhaseVelocity,
};
pub use error::{ModelError, StateError, StepError};
pub use integrators::{integrate, MethodKind, RunStatus, StepMethod, Stepper, Trajectory};
pub use models::SeparableContactModel;
pub use state::{eta_at, ContactCovector, ContactState};

/// Default step for central finite differences (Jacobians, fallback
/// time derivatives). Balances O(h²) truncation against roundoff at
/// double precision.
pub const FD_STEP_DEFAULT: f64 = 1e-6;
