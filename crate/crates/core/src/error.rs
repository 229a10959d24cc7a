use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid topology: {0}")]
    InvalidSpec(String),

    #[error("address has {got} coordinates but the lattice has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coordinate l_{axis} = {value} is outside [0, {max}]")]
    CoordinateOutOfRange { axis: usize, value: u32, max: u64 },

    #[error("label {kappa} is outside [0, {max}]")]
    LabelOutOfRange { kappa: u64, max: u64 },

    #[error("node {0} is not a symplectic lattice node (odd label)")]
    Inadmissible(u64),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("graph is disconnected: {reached} of {total} nodes reachable from label {source_label}")]
    Disconnected {
        source_label: u64,
        reached: u64,
        total: u64,
    },

    #[error("{0}")]
    Domain(String),

    #[error("cannot parse topology '{input}': {reason}")]
    Parse { input: String, reason: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}
