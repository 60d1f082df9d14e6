//! Generalised `(t,s)` harmonic systems over ℤₙ.
//!
//! A system fixes two intervals `t` and `s` (with generator `q = t + s`) and
//! yields `n` Major triads `(r, r+t, r+q)` and `n` Minor triads `(r, r+s, r+q)`.
//! The chords form a cubic bipartite Levi graph (the Tonnetz). This crate:
//!
//! - decomposes ℤₙ with the Chinese Remainder Theorem and finds the primitive
//!   tones and the canonical anchor system ([`zmod`]);
//! - builds chords and their Parallel/Leading-tone/Relative neighbours ([`harmony`]);
//! - builds the structured Levi graph, decides abstract isomorphism and computes
//!   canonical certificates ([`levigraph`]);
//! - finds affine note-induced isomorphisms and partitions all systems of a
//!   modulus into orbits ([`isoclass`]);
//! - validates and transports chord progressions ([`pathkit`]);
//! - reads, writes and re-tunes Standard MIDI Files and renders 10-TET scores
//!   ([`midi`]).
//!
//! With the default `parallel` feature the censuses fan out over rayon;
//! without it everything runs on the calling thread with identical output.

pub mod checks;
pub mod error;
pub mod harmony;
pub mod isoclass;
pub mod levigraph;
pub mod midi;
pub mod par;
pub mod pathkit;
pub mod zmod;

pub use error::{Error, Result};
pub use harmony::{Chord, HarmonicSystem, Quality};
pub use isoclass::{Domain, IsoWitness, Mode, Orientation, OrbitPartition, RootMap};
pub use levigraph::{EdgeColor, StructuredLeviGraph, Vertex};
pub use pathkit::{ProgressionPath, Step};
pub use zmod::{AffineMap, CrtBasis, PitchClass};
