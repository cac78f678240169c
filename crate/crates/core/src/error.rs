// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid chirality (0, 0): at least one index must be non-zero")]
    InvalidChirality,
    #[error("no threshold: metallic CNT {0:?}")]
    MetallicTube((u32, u32)),
    #[error("empty input vector")]
    EmptyVector,
    #[error("input count must be at least 1")]
    ZeroInputs,
    #[error("even fan-in unsupported by gate topology (n = {0})")]
    EvenFanIn(u32),
    #[error("input width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("refusing to enumerate 2^{inputs} vectors (limit is 2^{limit})")]
    EnumerationLimit { inputs: usize, limit: usize },
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("model inapplicable: {0}")]
    ModelInapplicable(String),
    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),
}
