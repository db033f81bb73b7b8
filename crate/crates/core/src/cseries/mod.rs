//! Exact series in the light speed `c`: relativistic embeddings of the
//! multipliers, invariants, and the combinations whose classical limits
//! are the closure scalars and vectors.

pub mod cpoly;
pub mod embedding;
pub mod equivalence;
pub mod intermediate;
pub mod limits;
pub mod repack;

pub use cpoly::CPoly;
pub use embedding::{embed, p_scalars, q_scalars, RelEmbedding, Scheme};
pub use equivalence::{scheme_equivalence, EquivalenceReport};
pub use intermediate::IntermediateMultipliers;
pub use limits::{limit_v, limit_x, LimitCoefficients, LimitV, LimitX};
pub use repack::{repack_forward, repack_inverse, RepackedMoments};
