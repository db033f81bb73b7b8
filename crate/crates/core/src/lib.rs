//! The exact 14-moment closure for dense gases.
//!
//! Everything algebraic is generic over [`Scalar`], so the same formulas run
//! in floating point, exact rationals, forward-mode duals (for moments,
//! fluxes and Hessians) and Laurent series in the light speed `c`.

pub mod closure;
pub mod cseries;
pub mod dual;
pub mod error;
pub mod galilean;
pub mod identities;
pub mod material;
pub mod moments;
pub mod report;
pub mod sample;
pub mod scalar;
pub mod state;
pub mod suites;
pub mod tensor;

pub use closure::{compute_v, compute_x, eval_potentials, Potentials, VSet, XSet};
pub use error::{Error, Result, SchemaError};
pub use material::{builtin_material, Material, PolynomialMaterial};
pub use moments::{compatibility_residual, entropy_pair, fluxes_g, hessian_h, moments_f, FluxSet, MomentSet};
pub use scalar::{Rational, Scalar};
pub use state::{scalar_invariants, MultiplierState, Scalar14};
pub use tensor::{Mat3, Sym3, Vec3};

/// Floating-point multiplier state.
pub type State = MultiplierState<f64>;
/// Single-precision multiplier state.
pub type StateF32 = MultiplierState<f32>;
/// Exact rational multiplier state.
pub type RationalState = MultiplierState<Rational>;
pub type Moments = MomentSet<f64>;
pub type Fluxes = FluxSet<f64>;
pub type RationalMoments = MomentSet<Rational>;
