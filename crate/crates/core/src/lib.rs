//! Berry phase of a two-level atom crossing shaped standing light waves.
//!
//! The crate computes the dynamical phase β and the geometric phase γ an atom
//! picks up in one interaction zone, by several independent routes:
//!
//! - [`phases`]: adaptive quadrature, Eckart closed forms, weak-field limit;
//! - [`circuit`]: parameter-space circuit, dressed states, winding-by-winding
//!   flux sums and a surface-flux integral;
//! - [`dynamics`]: direct integration of the two-level Schrödinger equation,
//!   WKB and second-order perturbation theory, two-zone sequences;
//! - [`wavepacket`]: the transverse phase imprint and the resulting focusing
//!   of a Gaussian wave packet.
//!
//! All times are in units of the envelope time τ and all frequencies enter
//! as products with τ. [`model`] converts from SI.

pub mod circuit;
pub mod dynamics;
pub mod envelope;
pub mod error;
pub mod model;
pub mod ode;
pub mod par;
pub mod phases;
pub mod quadrature;
pub mod wavepacket;

pub use envelope::{Envelope, EnvelopeKind};
pub use error::{Error, Result};
pub use model::{PhysicalSetup, ValidityReport, ZoneParameters};
pub use par::Execution;
pub use phases::{Method, PhaseResult};
