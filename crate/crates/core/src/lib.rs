//! Gales, supergales and finite-horizon estimators of effective fractal
//! dimension on binary sequences.
//!
//! Capitals are tracked in the `log2` domain. Betting strategies whose
//! exponent is an integer or a half-integer also expose exact capitals in
//! `Q(sqrt 2)` (see [`exact::Surd`]), which is what the validators use to
//! check the gale condition with zero tolerance.

pub mod bias;
pub mod bits;
pub mod compressor;
pub mod constructions;
pub mod dilation;
pub mod error;
pub mod exact;
pub mod fsg;
pub mod gale;
mod logspace;
pub mod predictor;
pub mod rational;
pub mod seqio;

pub use error::{Error, Result};

/// The tail window `[ceil(n/2), n]` used for every finite-horizon
/// liminf/limsup proxy.
pub fn tail_window(n: usize) -> (usize, usize) {
    (n.div_ceil(2), n)
}
