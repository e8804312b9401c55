//! Tabular MDP toolkit centred on the maximum expected hitting cost (MEHC).
//!
//! * [`mdp`]: data model, validation, induced chains, simulation.
//! * [`solve`]: exact gains, optimal gain and bias span, hitting times and
//!   costs, diameter, MEHC, and a policy-enumeration oracle.
//! * [`shaping`]: potential-based reward shaping and its invariants.
//! * [`ucrl2`]: confidence sets, extended value iteration, the learner and
//!   its regret bound.
//! * [`harness`]: generators, the factor-of-two sweep and learning
//!   experiments.
//! * [`io`]: JSON file formats.
//!
//! Every numerical routine is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the scalar for everyday use.

pub mod harness;
pub mod io;
mod linalg;
pub mod mdp;
pub mod scalar;
pub mod shaping;
pub mod solve;
pub mod ucrl2;

pub use mdp::{InducedChain, Mdp, MdpError, Policy, RewardModel, Violation};
pub use scalar::Scalar;
pub use shaping::{Potential, ShapingError};
pub use solve::{SolveError, StructuralReport};
pub use ucrl2::{RegretTrace, UcrlError};

pub type Mdp64 = Mdp<f64>;
pub type Mdp32 = Mdp<f32>;
pub type Potential64 = Potential<f64>;
pub type Potential32 = Potential<f32>;
pub type StructuralReport64 = StructuralReport<f64>;
pub type StructuralReport32 = StructuralReport<f32>;
pub type RegretTrace64 = RegretTrace<f64>;
pub type RegretTrace32 = RegretTrace<f32>;
