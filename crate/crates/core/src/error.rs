use thiserror::Error;

use crate::midi::smf::MidiError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("modulus must be at least {min}, got {n}")]
    ModulusTooSmall { n: u32, min: u32 },

    #[error("residue {value} out of range for modulus {n}")]
    ResidueOutOfRange { value: u32, n: u32 },

    #[error("multiplier {a} is not a unit modulo {n}")]
    NotAUnit { a: u32, n: u32 },

    #[error("interval {name}={value} outside [1, {max}]")]
    IntervalOutOfRange {
        name: &'static str,
        value: u32,
        max: u32,
    },

    #[error("CRT factors {factors:?}: {reason}")]
    InvalidFactors { factors: Vec<u32>, reason: String },

    #[error("canonical system needs exactly two CRT factors, got {0}")]
    NotTwoFactors(usize),

    #[error("chord {chord} does not belong to system {system}")]
    ChordSystemMismatch { chord: String, system: String },

    #[error("progression is empty")]
    EmptyPath,

    #[error("witness maps {witness_src} -> {witness_dst}, but was applied to {src} -> {dst}")]
    WitnessMismatch {
        witness_src: String,
        witness_dst: String,
        src: String,
        dst: String,
    },

    #[error("progression breaks at transition {index}")]
    InvalidPath { index: usize },

    #[error("{name} must be {expected}, got {value}")]
    InvalidParameter {
        name: &'static str,
        expected: &'static str,
        value: String,
    },

    #[error(transparent)]
    Midi(#[from] MidiError),
}
