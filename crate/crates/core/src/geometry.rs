//! Pinhole camera model and SE(3) rigid-transform algebra.
//!
//! Conventions used throughout the crate:
//! - Pixel coordinates: `u` rightward, `v` downward, origin at the top-left;
//!   the sample point of raster cell `(x, y)` is the integer coordinate
//!   `(u, v) = (x, y)`.
//! - A [`PoseSE3`] maps points FROM the frame it describes TO its parent
//!   frame (object-to-camera, camera-to-scene).
//! - Depth is the camera-frame z coordinate in meters, not ray length.

use nalgebra::{Matrix3, Matrix4, Vector3};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A 3D point in meters. Which frame it lives in is contextual.
pub type Point3 = Vector3<f64>;

/// Sub-pixel image coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pixel {
    pub u: f64,
    pub v: f64,
}

impl Pixel {
    pub fn new(u: f64, v: f64) -> Self {
        Pixel { u, v }
    }
}

/// Pinhole intrinsics. No distortion model; inputs are treated as rectified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Intrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: u32,
    pub height: u32,
}

impl Intrinsics {
    pub fn new(fx: f64, fy: f64, cx: f64, cy: f64, width: u32, height: u32) -> Result<Self> {
        let intr = Intrinsics {
            fx,
            fy,
            cx,
            cy,
            width,
            height,
        };
        intr.validate()?;
        Ok(intr)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fx > 0.0 && self.fy > 0.0) {
            return Err(Error::InvalidIntrinsics(format!(
                "focal lengths must be positive, got fx={} fy={}",
                self.fx, self.fy
            )));
        }
        if !(self.cx >= 0.0 && self.cx < self.width as f64) {
            return Err(Error::InvalidIntrinsics(format!(
                "cx={} outside [0, {})",
                self.cx, self.width
            )));
        }
        if !(self.cy >= 0.0 && self.cy < self.height as f64) {
            return Err(Error::InvalidIntrinsics(format!(
                "cy={} outside [0, {})",
                self.cy, self.height
            )));
        }
        Ok(())
    }
}

/// Rigid transform: rotation then translation, `p' = R p + t`.
///
/// Stored as an explicit orthonormal matrix so that operations which must not
/// perturb rotations (start alignment, serialization round-trips) can copy it
/// bit-for-bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseSE3 {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

/// Orthonormality tolerance for pose validation.
const POSE_TOL: f64 = 1e-9;

impl PoseSE3 {
    /// Builds a pose, checking `RᵀR = I` and `det R = +1` within 1e-9.
    pub fn new(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Result<Self> {
        let residual = (rotation.transpose() * rotation - Matrix3::identity()).norm();
        if residual > POSE_TOL {
            return Err(Error::InvalidPose(format!(
                "rotation not orthonormal, |RᵀR - I| = {residual:.3e}"
            )));
        }
        let det = rotation.determinant();
        if (det - 1.0).abs() > POSE_TOL {
            return Err(Error::InvalidPose(format!(
                "rotation determinant {det} != +1"
            )));
        }
        Ok(PoseSE3 {
            rotation,
            translation,
        })
    }

    pub fn identity() -> Self {
        PoseSE3 {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn from_translation(t: Vector3<f64>) -> Self {
        PoseSE3 {
            rotation: Matrix3::identity(),
            translation: t,
        }
    }

    /// Rotation about an axis by `angle` radians, then translation.
    pub fn from_axis_angle(axis: Vector3<f64>, angle: f64, t: Vector3<f64>) -> Self {
        let rot = nalgebra::Rotation3::from_axis_angle(
            &nalgebra::Unit::new_normalize(axis),
            angle,
        );
        PoseSE3 {
            rotation: *rot.matrix(),
            translation: t,
        }
    }

    /// Row-major 4x4 homogeneous matrix, the wire format for poses.
    pub fn to_matrix_row_major(&self) -> [f64; 16] {
        let r = &self.rotation;
        let t = &self.translation;
        [
            r[(0, 0)],
            r[(0, 1)],
            r[(0, 2)],
            t.x,
            r[(1, 0)],
            r[(1, 1)],
            r[(1, 2)],
            t.y,
            r[(2, 0)],
            r[(2, 1)],
            r[(2, 2)],
            t.z,
            0.0,
            0.0,
            0.0,
            1.0,
        ]
    }

    /// Parses the row-major 4x4 wire format, validating the rotation block
    /// and the homogeneous bottom row.
    pub fn from_matrix_row_major(m: &[f64; 16]) -> Result<Self> {
        let bottom = [m[12], m[13], m[14], m[15]];
        if bottom != [0.0, 0.0, 0.0, 1.0] {
            return Err(Error::InvalidPose(format!(
                "bottom row {bottom:?} is not [0, 0, 0, 1]"
            )));
        }
        let rotation = Matrix3::new(m[0], m[1], m[2], m[4], m[5], m[6], m[8], m[9], m[10]);
        let translation = Vector3::new(m[3], m[7], m[11]);
        PoseSE3::new(rotation, translation)
    }

    pub fn to_homogeneous(&self) -> Matrix4<f64> {
        let mut h = Matrix4::identity();
        h.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.rotation);
        h.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.translation);
        h
    }
}

/// Projects a camera-frame point through the pinhole model.
///
/// Returns the sub-pixel coordinate and the depth (camera z).
pub fn project(intr: &Intrinsics, p: &Point3) -> Result<(Pixel, f64)> {
    if p.z <= 0.0 || !p.z.is_finite() {
        return Err(Error::NonPositiveDepth(p.z));
    }
    let u = intr.fx * p.x / p.z + intr.cx;
    let v = intr.fy * p.y / p.z + intr.cy;
    Ok((Pixel::new(u, v), p.z))
}

/// Lifts a pixel with known depth back to a camera-frame point.
pub fn backproject(intr: &Intrinsics, px: Pixel, depth: f64) -> Result<Point3> {
    if !(depth > 0.0) || !depth.is_finite() {
        return Err(Error::InvalidDepth(depth));
    }
    Ok(Vector3::new(
        (px.u - intr.cx) * depth / intr.fx,
        (px.v - intr.cy) * depth / intr.fy,
        depth,
    ))
}

/// `a` then `b` seen from `a`'s parent: applies `b` first, then `a`.
pub fn compose(a: &PoseSE3, b: &PoseSE3) -> PoseSE3 {
    PoseSE3 {
        rotation: a.rotation * b.rotation,
        translation: a.rotation * b.translation + a.translation,
    }
}

pub fn inverse(p: &PoseSE3) -> PoseSE3 {
    let rt = p.rotation.transpose();
    PoseSE3 {
        rotation: rt,
        translation: -(rt * p.translation),
    }
}

pub fn transform_point(p: &PoseSE3, x: &Point3) -> Point3 {
    p.rotation * x + p.translation
}

/// Geodesic angle between two rotations, in `[0, π]`.
pub fn geodesic_angle(a: &Matrix3<f64>, b: &Matrix3<f64>) -> f64 {
    let trace = (a.transpose() * b).trace();
    ((trace - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
}

/// Combined translation + weighted rotation distance between camera poses.
///
/// `lambda` converts radians of geodesic angle into meters-equivalent.
pub fn camera_distance(a: &PoseSE3, b: &PoseSE3, lambda: f64) -> f64 {
    (a.translation - b.translation).norm() + lambda * geodesic_angle(&a.rotation, &b.rotation)
}
