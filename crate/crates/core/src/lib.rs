//! Free symmetric rigid body: exact Lie-series algebra, a numeric Taylor-jet
//! propagator, the elementary-function solutions of the Euler–Poisson
//! equations, and an RK4 reference integrator.

pub mod body;
pub mod closed_form;
pub mod flow;
pub mod poly;
pub mod rk4;
pub mod trajectory;
pub mod verify;

pub use body::{
    invariants_of, rigid_initial_state, BodyState, DiagInertia, Mat3, MotionInvariants,
    PrincipalMoments, StateError, Vec3,
};
