//! Multi-play combinatorial semi-bandits.
//!
//! A learner repeatedly picks a nonnegative integer action `a ∈ A ⊂ Z^d`,
//! playing base arm `i` up to `n_i` times, and observes one loss per play. This
//! crate provides
//!
//! * [`gencts`]: combinatorial Thompson sampling with Beta posteriors over
//!   Bernoulli-binarized feedback, choosing actions through an exact oracle;
//! * [`genlbinfv`]: optimistic FTRL over `conv(A)` with a hybrid
//!   log-barrier/entropy regularizer, adaptive learning rates and
//!   Carathéodory sampling, effective in both stochastic and adversarial regimes;
//! * [`oracle`]: transport and knapsack minimizers plus brute-force enumeration;
//! * [`baselines`]: single-play baselines on a duplicated (binary) instance;
//! * [`harness`]: seeded multi-trial experiments with regret curves.

pub mod baselines;
pub mod environment;
pub mod error;
pub mod gencts;
pub mod genlbinfv;
pub mod harness;
pub mod learner;
pub mod model;
pub mod oracle;

pub use error::{Error, Result};
pub use learner::{Learner, RoundDetail, RoundRecord};
pub use model::{
    linear_loss, support, validate_action, ActionVector, ArmSpec, InstanceKind, InstanceSpec,
    LossTable, Observation, Sample,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// RNG stream used for loss generation.
pub const STREAM_ENVIRONMENT: u64 = 0;
/// RNG stream used for a learner's internal randomness.
pub const STREAM_LEARNER: u64 = 1;
/// RNG stream used to draw random instance parameters (e.g. edge costs).
pub const STREAM_INSTANCE: u64 = 2;

/// Independent ChaCha stream `stream` of the generator seeded with `seed`.
///
/// Losses and learner randomness come from different streams so that two
/// learners run with the same seed face identical loss tables.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
