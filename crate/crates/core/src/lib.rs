//! Wallace-style normal pseudo-random generation.
//!
//! The main type is [`WallaceState`]: a pool of 2N normal variates that is
//! regenerated by random strided 2×2 rotations instead of transforming
//! uniforms one by one. Around it sit the lagged-Fibonacci uniform generator
//! that seeds it ([`uniform`]), Box-Muller and Polar baselines
//! ([`reference`]), a statistical suite ([`stats`]), a throughput harness
//! ([`bench`]), and the `wallace` command-line front end ([`cli`]).
//!
//! ```
//! use wallace_rng::{WallaceConfig, WallaceState};
//!
//! let mut gen = WallaceState::new(WallaceConfig::with_seed(42, 0)).unwrap();
//! let draws = gen.fill(1000, 10.0, 2.0).unwrap();
//! assert_eq!(draws.len(), 1000);
//! ```

// `!(a < b)` comparisons are used on purpose so NaN lands on the error path.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod cli;
pub mod error;
pub mod reference;
pub mod stats;
pub mod uniform;
pub mod wallace;

pub use bench::Method;
pub use error::{Error, MalformedState, Result};
pub use reference::{BoxMuller, NormalPair, Polar};
pub use uniform::UniformState;
pub use wallace::{load_state, save_state, FixedPass, PassParams, Pool, Rotation2, ScaleMode, WallaceConfig, WallaceState};

/// Anything that can fill a buffer with N(0, 1) variates.
pub trait NormalSource {
    fn fill_standard(&mut self, out: &mut [f64]) -> Result<()>;
}

impl<T: NormalSource + ?Sized> NormalSource for Box<T> {
    fn fill_standard(&mut self, out: &mut [f64]) -> Result<()> {
        (**self).fill_standard(out)
    }
}
