//! Error type shared by all pipeline modules.

use std::path::PathBuf;

use crate::trajectory::FrameTag;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("point depth must be positive, got {0}")]
    NonPositiveDepth(f64),
    #[error("invalid depth value {0}")]
    InvalidDepth(f64),
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(u32, u32, u32, u32),
    #[error("invalid intrinsics: {0}")]
    InvalidIntrinsics(String),
    #[error("invalid pose: {0}")]
    InvalidPose(String),
    #[error("invalid splat: {0}")]
    InvalidSplat(String),
    #[error("no bounding-box candidates collected")]
    NoCandidates,
    #[error("camera track is empty")]
    EmptyTrack,
    #[error("mask reprojection produced no pixels")]
    EmptyReprojection,
    #[error("no views provided")]
    NoViews,
    #[error("missing object pose for frame {0}")]
    MissingPose(usize),
    #[error("track tagged {found:?}, expected {expected:?}")]
    WrongFrameTag { expected: FrameTag, found: FrameTag },
    #[error("track frame indices do not match at position {0}")]
    FrameMismatch(usize),
    #[error("invalid manifest: {0}")]
    ManifestInvalid(String),
    #[error("unknown stage `{0}`")]
    UnknownStage(String),
    #[error("missing input {0}")]
    MissingInput(PathBuf),
    #[error("missing ground truth {0}")]
    MissingGroundTruth(PathBuf),
    #[error("malformed file {path}: {detail}")]
    MalformedFile { path: PathBuf, detail: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn malformed(path: impl Into<PathBuf>, detail: impl Into<String>) -> Self {
        Error::MalformedFile {
            path: path.into(),
            detail: detail.into(),
        }
    }
}
