//! Simplex embeddings and noncontextual models for generalized
//! probabilistic theories (GPTs).
//!
//! A GPT is a quadruple `(V, <.,.>, Omega, E)`: a convex body of states,
//! a convex body of effects inside the dual of the state body, and a unit
//! effect, with probabilities given by inner products. This crate
//! represents prepare-measure GPTs as polytopes, quotients raw operational
//! statistics into GPTs, and decides whether a GPT embeds into a simplex
//! and its dual hypercube — equivalently, whether the operational theory it
//! came from admits a noncontextual ontological model. Verdicts are exact:
//! embeddable instances come with an explicit witness and ontological
//! model, non-embeddable ones with a rational Farkas certificate.
//!
//! Modules:
//! - [`geometry`]: convex bodies, cones, dual bodies, double description,
//!   shape recognition.
//! - [`gpt`]: the GPT data model, validity checks, canonical simplicial
//!   theories, the example catalog.
//! - [`quotient`]: operational theories, equivalence classes, the
//!   quotienting map, and lifting models back to operational theories.
//! - [`embed`]: the simplex-embeddability decision core.
//! - [`quasiprob`]: quasiprobability representations and negativity.
//! - [`app`]: ingestion, noise-robust verdicts, robustness radii.
//! - [`io`]: JSON and CSV formats shared with the command-line tool.
//!
//! The `examples/` directory walks through each capability; `cargo run
//! --example rebit_embedding` is a good starting point.

pub mod app;
pub mod embed;
pub mod error;
pub mod geometry;
pub mod gpt;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod quasiprob;
pub mod quotient;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Rat, Scalar};
