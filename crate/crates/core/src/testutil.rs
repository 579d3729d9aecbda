//! Shared helpers for unit tests.

use nalgebra::{Matrix3, Vector3};
use rand::Rng;

use crate::geometry::PoseSE3;

pub fn random_rotation(rng: &mut impl Rng) -> Matrix3<f64> {
    let axis = Vector3::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0f64),
    );
    let axis = if axis.norm() < 1e-6 { Vector3::x() } else { axis };
    let angle = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    *nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(axis), angle).matrix()
}

pub fn random_pose(rng: &mut impl Rng) -> PoseSE3 {
    PoseSE3 {
        rotation: random_rotation(rng),
        translation: Vector3::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        ),
    }
}
