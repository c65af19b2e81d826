use alloc::boxed::Box;

use crate::complex::Section;
use crate::index::IndexProfile;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid index profile {sym} subscripts / {alt} superscripts")]
    InvalidProfile { sym: usize, alt: usize },
    #[error("profile mismatch: expected {expected}, found {found}")]
    ProfileMismatch { expected: IndexProfile, found: IndexProfile },
    #[error("level {level} out of range for this operation (spin {k})")]
    LevelOutOfRange { level: usize, k: usize },
    #[error("spin k = {k} is below the supported minimum {min}")]
    SpinTooSmall { k: usize, min: usize },
    #[error("k = {k} is outside the hypothesis k >= 6; use exploratory mode")]
    OutsideHypothesis { k: usize },
    #[error("the covector v must be nonzero")]
    DegenerateCovector,
    #[error("input is not contraction-free")]
    NotContractionFree,
    #[error("input is not in the kernel of the next symbol map")]
    NotInKernel,
    #[error("right-hand side is incompatible: the next operator leaves a nonzero residual")]
    Incompatible { residual: Box<Section> },
    #[error("no polynomial solution found for a compatible right-hand side")]
    Unsolvable,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}
