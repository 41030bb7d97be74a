//! Coordinates, planar array descriptions and LoS link angles.
//!
//! The frame has its origin at the source node, `x` east, `y` north and `z`
//! up. Both ground nodes sit at zero altitude and every array is parallel to
//! the `x`-`y` plane.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in the scenario frame, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ORIGIN: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn sub(self, other: Vec3) -> Vec3 {
        Vec3::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(self, other: Vec3) -> f64 {
        self.sub(other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Uniform planar array with `rows x cols` elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpaSpec {
    pub rows: usize,
    pub cols: usize,
    /// Element spacing in wavelengths.
    pub spacing_over_lambda: f64,
}

impl UpaSpec {
    pub fn new(rows: usize, cols: usize, spacing_over_lambda: f64) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(format!("array must have at least one element, got {rows}x{cols}")));
        }
        if !(spacing_over_lambda > 0.0 && spacing_over_lambda.is_finite()) {
            return Err(Error::InvalidInput(format!("element spacing must be positive, got {spacing_over_lambda}")));
        }
        Ok(Self { rows, cols, spacing_over_lambda })
    }

    /// Half-wavelength spaced square array.
    pub fn square(side: usize) -> Self {
        Self { rows: side, cols: side, spacing_over_lambda: 0.5 }
    }

    pub fn total(&self) -> usize {
        self.rows * self.cols
    }
}

/// Elevation in `[-pi/2, pi/2]` and azimuth in `[0, 2pi)`, radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleSet {
    pub elevation: f64,
    pub azimuth: f64,
}

impl AngleSet {
    pub fn new(elevation: f64, azimuth: f64) -> Self {
        Self { elevation, azimuth }
    }
}

/// Array response of `upa` toward `angles`.
///
/// Element `(m, n)` (0-based) sits at index `m * cols + n` and carries
/// `exp(j 2pi (d/lambda) cos(theta) (m cos(phi) + n sin(phi)))`.
pub fn steering_vector(upa: &UpaSpec, angles: AngleSet) -> Vec<Complex64> {
    let k = TAU * upa.spacing_over_lambda * angles.elevation.cos();
    let (sin_phi, cos_phi) = angles.azimuth.sin_cos();
    let mut out = Vec::with_capacity(upa.total());
    for m in 0..upa.rows {
        for n in 0..upa.cols {
            let phase = k * (m as f64 * cos_phi + n as f64 * sin_phi);
            out.push(Complex64::from_polar(1.0, phase));
        }
    }
    out
}

/// Distance and angles of the straight line from `src` to `dst`.
///
/// The azimuth is the four-quadrant angle of the horizontal offset, wrapped
/// to `[0, 2pi)`. A purely vertical offset has azimuth 0.
pub fn link_geometry(src: Vec3, dst: Vec3) -> Result<(f64, AngleSet)> {
    let d = dst.sub(src);
    let distance = d.norm();
    if !(distance > 0.0) || !distance.is_finite() {
        return Err(Error::DegenerateGeometry);
    }
    let horizontal = d.x.hypot(d.y);
    let elevation = d.z.atan2(horizontal);
    let azimuth = if horizontal == 0.0 { 0.0 } else { wrap_azimuth(d.y.atan2(d.x)) };
    Ok((distance, AngleSet::new(elevation, azimuth)))
}

pub(crate) fn wrap_azimuth(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2pi for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Elevation of the ground-to-air line used by the LoS probability model,
/// clamped to `[0, pi/2]`.
pub(crate) fn ground_elevation(ground: Vec3, air: Vec3) -> Result<f64> {
    let (_, a) = link_geometry(ground, air)?;
    Ok(a.elevation.clamp(0.0, PI / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn broadside_is_all_ones() {
        let upa = UpaSpec::square(2);
        for phi in [0.0, 1.0, 4.0] {
            let a = steering_vector(&upa, AngleSet::new(PI / 2.0, phi));
            for z in a {
                assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn endfire_alternates_rows() {
        let a = steering_vector(&UpaSpec::square(2), AngleSet::new(0.0, 0.0));
        let want = [1.0, 1.0, -1.0, -1.0];
        for (z, w) in a.iter().zip(want) {
            assert!((z - Complex64::new(w, 0.0)).norm() < 1e-12, "{z} vs {w}");
        }
    }

    #[test]
    fn norm_is_element_count() {
        let upa = UpaSpec::new(3, 5, 0.5).unwrap();
        let a = steering_vector(&upa, AngleSet::new(0.3, 2.2));
        let n2: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        assert!(close(n2, 15.0, 1e-12));
    }

    #[test]
    fn three_four_five_link() {
        let (d, a) = link_geometry(Vec3::ORIGIN, Vec3::new(300.0, 400.0, 100.0)).unwrap();
        assert!(close(d, 260000f64.sqrt(), 1e-9));
        assert!(close(a.elevation, 0.2f64.atan(), 1e-12));
        assert!(close(a.azimuth, (4.0f64 / 3.0).atan(), 1e-12));
    }

    #[test]
    fn vertical_link() {
        let (d, a) = link_geometry(Vec3::ORIGIN, Vec3::new(0.0, 0.0, 100.0)).unwrap();
        assert!(close(d, 100.0, 1e-12));
        assert!(close(a.elevation, PI / 2.0, 1e-15));
        assert_eq!(a.azimuth, 0.0);
    }

    #[test]
    fn azimuth_covers_all_quadrants() {
        let (_, a) = link_geometry(Vec3::ORIGIN, Vec3::new(-1.0, -1.0, 0.0)).unwrap();
        assert!(close(a.azimuth, 1.25 * PI, 1e-12));
        let (_, a) = link_geometry(Vec3::ORIGIN, Vec3::new(1.0, -1.0, 0.0)).unwrap();
        assert!(close(a.azimuth, 1.75 * PI, 1e-12));
    }

    #[test]
    fn coincident_points_rejected() {
        let p = Vec3::new(1.0, 2.0, 3.0);
        assert_eq!(link_geometry(p, p), Err(Error::DegenerateGeometry));
    }

    #[test]
    fn bad_upa_rejected() {
        assert!(UpaSpec::new(0, 4, 0.5).is_err());
        assert!(UpaSpec::new(4, 4, 0.0).is_err());
    }
}
