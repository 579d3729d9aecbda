//! Geometric core of a video-demonstration analysis pipeline.
//!
//! Extracts object contact points and 6-DoF object trajectories from RGB-D
//! demonstration recordings. Learned-model stages (optical flow, segmentation,
//! camera registration, pose tracking, splat training) are upstream producers
//! of the files this crate consumes; everything downstream of those files is
//! implemented here:
//!
//! 1. **geometry** – pinhole camera model and SE(3) algebra.
//! 2. **imaging** – depth maps, binary masks, flow fields, morphology,
//!    connected components.
//! 3. **motion_bbox** – most-probable object bounding-box prompt from
//!    per-frame flow and human/hand masks.
//! 4. **mask_transfer** – demonstration-view object mask transferred into
//!    scene-camera views.
//! 5. **splat_seg** – multi-view mask voting over Gaussian splats.
//! 6. **trajectory** – camera-space pose tracks moved into scene space,
//!    start-position correction, error metrics, marker export.
//! 7. **contact** – contact points from sensor/rendered depth differencing,
//!    accumulated in an object-frame voxel grid.
//! 8. **synth** – analytic scene generator producing ground-truth fixtures
//!    for every stage.
//! 9. **pipeline** – manifest-driven orchestration and metrics reporting.

pub mod contact;
pub mod error;
pub mod geometry;
pub mod imaging;
pub mod io;
pub mod mask_transfer;
pub mod metrics;
pub mod motion_bbox;
pub mod pipeline;
pub mod splat_seg;
pub mod synth;
pub mod trajectory;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
