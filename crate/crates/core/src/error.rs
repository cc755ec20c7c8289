use thiserror::Error;

use crate::young::Partition;

#[derive(Debug, Error)]
pub enum PbtError {
    #[error("invalid partition {parts:?}: {reason}")]
    InvalidPartition { parts: Vec<u32>, reason: &'static str },

    #[error("partition {partition} has {rows} rows, more than d = {d}")]
    TooManyRows {
        partition: Partition,
        rows: usize,
        d: u32,
    },

    #[error("size mismatch: partition of {left} vs cycle type of {right}")]
    SizeMismatch { left: u32, right: u32 },

    #[error("{mu} is not {alpha} plus a single box")]
    NotBoxRelated { alpha: Partition, mu: Partition },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid port coefficients: {reason} (constraint residual {residual:e})")]
    InvalidCoefficients { reason: String, residual: f64 },

    #[error("oracle dimension {dim} exceeds the cap {cap}")]
    SizeCap { dim: usize, cap: usize },

    #[error("Young projectors are limited to N <= {max}, got N = {n}")]
    ProjectorOrder { n: u32, max: u32 },

    #[error("invalid POVM: {reason} (defect {defect:e})")]
    InvalidPovm { reason: String, defect: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, PbtError>;
