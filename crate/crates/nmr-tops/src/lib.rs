//! Classical models of bulk-ensemble NMR quantum computation, with an exact
//! density-operator engine as the ground truth.
//!
//! A high-temperature NMR sample in a pseudopure state
//! `rho = (1 - epsilon) M + epsilon rho_1` stays close to the maximally mixed
//! state `M = I/2^N`, and for `epsilon <= eta = 1/(1 + 2^(2N-1))` every state
//! reached by a circuit is separable: it can be read as a probability
//! distribution over orientations of N classical tops. This crate propagates
//! circuits through that classical picture and quantifies exactly where it
//! stops matching quantum mechanics:
//!
//! * [`quantum`] — dense density-operator simulation (the oracle): pseudopure
//!   states, product/entangling/mixture gates, Pauli expectations, gate
//!   compilation.
//! * [`tops`] — the tops representation: `P1`/`Q1` operator pairs, their
//!   `theta`-mixed families, expansion densities `w_rho` and their
//!   counter-indexed variants, separability thresholds and the `eta_k`
//!   schedule, and reconstruction of a state from its density.
//! * [`kernels`] — classical descriptions of gates: the signed transition
//!   function `t_U`, the nonnegative kernels `w_U`, a closed form for the
//!   controlled-phase kernel, SU(2)-to-SO(3) rotation extraction for product
//!   unitaries, and dephasing as a mixture of rotations.
//! * [`model`] — the gate-by-gate classical models: particle ensembles over
//!   observable and hidden tops, the entangling-gate counter, naive mode
//!   (loses a factor eta per entangling gate from the start) and hidden mode
//!   (lossless through K gates, then contracts), plus exact density-backed
//!   twins of both for tolerance-level checks.
//! * [`sampler`] — seeded, partition-independent random streams, uniform
//!   sphere sampling, rejection sampling against analytic bounds, Monte Carlo
//!   estimators.
//! * [`circuit`] — a line-oriented circuit DSL with gate merging and
//!   compile blocks.
//! * [`experiment`] — drivers: run a circuit in quantum / naive / hidden /
//!   overall mode, signal-decay curves over gate chains, CSV output, and the
//!   self-verification suite behind `nmr-tops verify`.
//!
//! The `examples/` directory holds one runnable program per capability; the
//! `nmr-tops` binary exposes `simulate`, `decay`, and `verify` subcommands.

pub mod circuit;
pub mod error;
pub mod experiment;
pub mod kernels;
pub mod model;
pub mod quantum;
pub mod sampler;
pub mod tops;

pub use error::{Error, Result};
