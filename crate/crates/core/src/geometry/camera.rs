//! Pinhole camera with rigid grid-to-camera extrinsics.

use super::{Box3D, Frame};
use crate::{Error, Result};

/// Pinhole intrinsics plus a rigid transform from the grid frame into the
/// camera frame (`p_cam = R * p_grid + t`). Camera axes: +x right, +y down,
/// +z forward; `u = fx * x / z + cx`, `v = fy * y / z + cy`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CameraModel {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    /// Rotation part of the grid-to-camera transform, row-major.
    pub rotation: [[f64; 3]; 3],
    /// Translation part of the grid-to-camera transform.
    pub translation: [f64; 3],
    /// Image size in pixels (width, height).
    pub image_size: (usize, usize),
}

impl CameraModel {
    pub fn new(
        fx: f64,
        fy: f64,
        cx: f64,
        cy: f64,
        rotation: [[f64; 3]; 3],
        translation: [f64; 3],
        image_size: (usize, usize),
    ) -> Result<Self> {
        if fx <= 0.0 || fy <= 0.0 {
            return Err(Error::InvalidArgument("focal lengths must be positive".into()));
        }
        let cam = CameraModel { fx, fy, cx, cy, rotation, translation, image_size };
        if !cam.rotation_is_orthonormal(1e-9) {
            return Err(Error::InvalidArgument(
                "extrinsics rotation must be orthonormal with determinant 1".into(),
            ));
        }
        Ok(cam)
    }

    /// Identity extrinsics looking down the grid +z axis.
    pub fn identity(fx: f64, fy: f64, cx: f64, cy: f64, image_size: (usize, usize)) -> Self {
        CameraModel {
            fx,
            fy,
            cx,
            cy,
            rotation: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            translation: [0.0; 3],
            image_size,
        }
    }

    fn rotation_is_orthonormal(&self, tol: f64) -> bool {
        let r = &self.rotation;
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| r[i][k] * r[j][k]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                if (dot - expect).abs() > tol {
                    return false;
                }
            }
        }
        let det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
        (det - 1.0).abs() < tol.max(1e-9)
    }

    #[inline]
    pub fn grid_to_camera(&self, p: [f64; 3]) -> [f64; 3] {
        let r = &self.rotation;
        let t = &self.translation;
        [
            r[0][0] * p[0] + r[0][1] * p[1] + r[0][2] * p[2] + t[0],
            r[1][0] * p[0] + r[1][1] * p[1] + r[1][2] * p[2] + t[1],
            r[2][0] * p[0] + r[2][1] * p[1] + r[2][2] * p[2] + t[2],
        ]
    }

    /// Inverse rigid transform (camera frame back into the grid frame).
    #[inline]
    pub fn camera_to_grid_point(&self, p: [f64; 3]) -> [f64; 3] {
        let r = &self.rotation;
        let d = [
            p[0] - self.translation[0],
            p[1] - self.translation[1],
            p[2] - self.translation[2],
        ];
        // R is orthonormal, so the inverse is the transpose.
        [
            r[0][0] * d[0] + r[1][0] * d[1] + r[2][0] * d[2],
            r[0][1] * d[0] + r[1][1] * d[1] + r[2][1] * d[2],
            r[0][2] * d[0] + r[1][2] * d[1] + r[2][2] * d[2],
        ]
    }

    /// Camera origin expressed in the grid frame.
    pub fn origin_in_grid(&self) -> [f64; 3] {
        self.camera_to_grid_point([0.0; 3])
    }

    #[inline]
    pub fn in_image(&self, u: f64, v: f64) -> bool {
        u >= 0.0 && v >= 0.0 && u < self.image_size.0 as f64 && v < self.image_size.1 as f64
    }
}

/// Result of projecting one grid-frame point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedPoint {
    pub u: f64,
    pub v: f64,
    /// Camera-frame forward distance.
    pub depth: f64,
    /// False when the point is at or behind the camera plane (depth <= 0).
    pub in_front: bool,
}

/// Project a single grid-frame point through the camera.
pub fn project_point(camera: &CameraModel, p: [f64; 3]) -> ProjectedPoint {
    let c = camera.grid_to_camera(p);
    let depth = c[2];
    let in_front = depth > 0.0;
    // Out-of-view points still get coordinates; callers check the flag.
    let z = if depth.abs() < 1e-12 { 1e-12_f64.copysign(if depth < 0.0 { -1.0 } else { 1.0 }) } else { depth };
    ProjectedPoint {
        u: camera.fx * c[0] / z + camera.cx,
        v: camera.fy * c[1] / z + camera.cy,
        depth,
        in_front,
    }
}

/// Project a batch of grid-frame points. Points behind the camera are
/// flagged out-of-view rather than erroring.
pub fn project_points(camera: &CameraModel, points: &[[f64; 3]]) -> Vec<ProjectedPoint> {
    points.iter().map(|&p| project_point(camera, p)).collect()
}

/// Convert a camera-frame axis-aligned box into the grid frame by
/// transforming its 8 corners and taking the axis-aligned hull.
pub fn camera_to_grid(b: &Box3D, camera: &CameraModel) -> Result<Box3D> {
    if b.frame != Frame::Camera {
        return Err(Error::FrameMismatch { expected: "camera", got: b.frame.name() });
    }
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for corner in b.corners() {
        let g = camera.camera_to_grid_point(corner);
        for d in 0..3 {
            lo[d] = lo[d].min(g[d]);
            hi[d] = hi[d].max(g[d]);
        }
    }
    Ok(Box3D::from_corners(lo, hi, Frame::Grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cam() -> CameraModel {
        CameraModel::identity(100.0, 100.0, 64.0, 48.0, (128, 96))
    }

    #[test]
    fn optical_axis_projects_to_principal_point() {
        let p = project_point(&cam(), [0.0, 0.0, 5.0]);
        assert_relative_eq!(p.u, 64.0);
        assert_relative_eq!(p.v, 48.0);
        assert_relative_eq!(p.depth, 5.0);
        assert!(p.in_front);
    }

    #[test]
    fn point_behind_camera_is_flagged() {
        let p = project_point(&cam(), [0.0, 0.0, -1.0]);
        assert!(!p.in_front);
    }

    #[test]
    fn pinhole_formula_by_hand() {
        // (1, 0, 5), fx = 100, cx = 64 -> u = 64 + 100 * (1/5) = 84.
        let p = project_point(&cam(), [1.0, 0.0, 5.0]);
        assert_relative_eq!(p.u, 84.0, max_relative = 1e-12);
    }

    #[test]
    fn unproject_recovers_input() {
        let camera = CameraModel::new(
            80.0,
            90.0,
            32.0,
            30.0,
            yaw_rotation(0.3),
            [0.2, -0.4, 1.5],
            (64, 64),
        )
        .unwrap();
        let p = [1.3, -0.7, 4.0];
        let proj = project_point(&camera, p);
        // Unproject with the known depth.
        let x = (proj.u - camera.cx) / camera.fx * proj.depth;
        let y = (proj.v - camera.cy) / camera.fy * proj.depth;
        let rec = camera.camera_to_grid_point([x, y, proj.depth]);
        for d in 0..3 {
            assert_relative_eq!(rec[d], p[d], max_relative = 1e-9);
        }
    }

    fn yaw_rotation(angle: f64) -> [[f64; 3]; 3] {
        let (s, c) = angle.sin_cos();
        [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
    }

    #[test]
    fn camera_to_grid_identity_extrinsics_is_identity() {
        let b = Box3D::new([1.0, 2.0, 3.0], [0.5, 1.0, 2.0], Frame::Camera);
        let g = camera_to_grid(&b, &cam()).unwrap();
        assert_eq!(g.center, b.center);
        assert_eq!(g.size, b.size);
        assert_eq!(g.frame, Frame::Grid);
    }

    #[test]
    fn camera_to_grid_pure_translation_shifts_center() {
        let mut camera = cam();
        camera.translation = [1.0, -2.0, 0.5];
        let b = Box3D::new([0.0, 0.0, 5.0], [1.0, 2.0, 3.0], Frame::Camera);
        let g = camera_to_grid(&b, &camera).unwrap();
        assert_relative_eq!(g.center[0], -1.0);
        assert_relative_eq!(g.center[1], 2.0);
        assert_relative_eq!(g.center[2], 4.5);
        assert_eq!(g.size, b.size);
    }

    #[test]
    fn camera_to_grid_quarter_yaw_permutes_extents() {
        // Extrinsics rotate grid +x onto camera -y (90 degree yaw about z):
        // the hull of the rotated corners permutes the x/y extents.
        let rot = [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
        let camera =
            CameraModel::new(100.0, 100.0, 32.0, 32.0, rot, [0.0; 3], (64, 64)).unwrap();
        let b = Box3D::new([0.0, 0.0, 0.0], [1.0, 2.0, 3.0], Frame::Camera);
        let g = camera_to_grid(&b, &camera).unwrap();
        let mut size = g.size;
        for s in size.iter_mut() {
            *s = (*s * 1e9).round() / 1e9;
        }
        assert_eq!(size, [2.0, 1.0, 3.0]);
    }

    #[test]
    fn non_orthonormal_rotation_rejected() {
        let r = [[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(CameraModel::new(10.0, 10.0, 0.0, 0.0, r, [0.0; 3], (8, 8)).is_err());
    }
}
