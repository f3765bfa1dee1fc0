//! Min-sum decoding with past influence for two-block CSS codes.
//!
//! The crate covers the full pipeline:
//!
//! - [`gf2`]: bit-packed GF(2) linear algebra (rank, RREF, rowspace
//!   membership, syndrome products);
//! - [`code`] / [`alist`] / [`code_spec`]: circulant and bivariate-bicycle
//!   two-block CSS construction, named presets, alist interchange and TOML
//!   code descriptions;
//! - [`tanner`]: Tanner graphs with block coloring and the
//!   isolated-stabilizer gadget;
//! - [`decoder`]: flooding-schedule MS / normalized MS / damped MS / MS-PI
//!   syndrome decoders;
//! - [`recursion`]: computation-tree recursions of the decoders on symmetric
//!   stabilizers, their spectrum, and trajectory classification;
//! - [`monte_carlo`]: reproducible parallel logical-error-rate sweeps over a
//!   binary symmetric channel.

pub mod alist;
pub mod code;
pub mod code_spec;
pub mod decoder;
pub mod gf2;
pub mod monte_carlo;
pub mod recursion;
pub mod tanner;

pub use code::TwoBlockCssCode;
pub use decoder::{DecodeOutcome, Decoder, DecoderConfig, DecoderVariant, PiAssignment};
pub use gf2::{BitMatrix, BitVector};
pub use monte_carlo::{run_sweep, BscChannel, Side, SweepResult, TrialOutcome};
pub use recursion::{Classification, PiSide, StabilizerParams, TrajectoryRecord};
pub use tanner::{Color, TannerGraph};
