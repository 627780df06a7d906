//! Axis-aligned boxes in center-size form, subdivision and generalized IoU.

use crate::{Error, Result};

/// Coordinate frame a 3D box lives in. Frames are explicit, never inferred.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Frame {
    /// Camera coordinates: +x right, +y down, +z forward (meters).
    Camera,
    /// Occupancy grid coordinates (meters, same axes as the voxel grid).
    Grid,
}

impl Frame {
    pub fn name(self) -> &'static str {
        match self {
            Frame::Camera => "camera",
            Frame::Grid => "grid",
        }
    }
}

/// Axis-aligned 2D box in pixel units, center-size form.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Box2D {
    pub cx: f64,
    pub cy: f64,
    pub w: f64,
    pub h: f64,
}

impl Box2D {
    pub fn new(cx: f64, cy: f64, w: f64, h: f64) -> Self {
        debug_assert!(w > 0.0 && h > 0.0, "Box2D extents must be positive");
        Self { cx, cy, w, h }
    }

    /// From min/max corners.
    pub fn from_corners(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self::new((x0 + x1) / 2.0, (y0 + y1) / 2.0, x1 - x0, y1 - y0)
    }

    pub fn lo(&self) -> [f64; 2] {
        [self.cx - self.w / 2.0, self.cy - self.h / 2.0]
    }

    pub fn hi(&self) -> [f64; 2] {
        [self.cx + self.w / 2.0, self.cy + self.h / 2.0]
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    /// Plain intersection-over-union.
    pub fn iou(&self, other: &Box2D) -> f64 {
        iou_aabb(&self.lo(), &self.hi(), &other.lo(), &other.hi())
    }
}

/// Axis-aligned 3D box in center-size form with an explicit frame.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Box3D {
    pub center: [f64; 3],
    pub size: [f64; 3],
    pub frame: Frame,
}

impl Box3D {
    pub fn new(center: [f64; 3], size: [f64; 3], frame: Frame) -> Self {
        debug_assert!(size.iter().all(|&s| s > 0.0), "Box3D extents must be positive");
        Self { center, size, frame }
    }

    pub fn from_corners(lo: [f64; 3], hi: [f64; 3], frame: Frame) -> Self {
        let center = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0, (lo[2] + hi[2]) / 2.0];
        let size = [hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]];
        Self::new(center, size, frame)
    }

    pub fn lo(&self) -> [f64; 3] {
        [
            self.center[0] - self.size[0] / 2.0,
            self.center[1] - self.size[1] / 2.0,
            self.center[2] - self.size[2] / 2.0,
        ]
    }

    pub fn hi(&self) -> [f64; 3] {
        [
            self.center[0] + self.size[0] / 2.0,
            self.center[1] + self.size[1] / 2.0,
            self.center[2] + self.size[2] / 2.0,
        ]
    }

    pub fn volume(&self) -> f64 {
        self.size[0] * self.size[1] * self.size[2]
    }

    /// All eight corners, ordered z-major (z slowest, x fastest).
    pub fn corners(&self) -> [[f64; 3]; 8] {
        let lo = self.lo();
        let hi = self.hi();
        let mut out = [[0.0; 3]; 8];
        for iz in 0..2 {
            for iy in 0..2 {
                for ix in 0..2 {
                    out[iz * 4 + iy * 2 + ix] = [
                        if ix == 0 { lo[0] } else { hi[0] },
                        if iy == 0 { lo[1] } else { hi[1] },
                        if iz == 0 { lo[2] } else { hi[2] },
                    ];
                }
            }
        }
        out
    }

    /// Grow every extent by `(1 + factor)`, keeping the center fixed.
    /// `factor = 0.5` is the 50% enlargement used on detected boxes.
    pub fn enlarge(&self, factor: f64) -> Box3D {
        debug_assert!(factor > -1.0);
        Box3D {
            center: self.center,
            size: [
                self.size[0] * (1.0 + factor),
                self.size[1] * (1.0 + factor),
                self.size[2] * (1.0 + factor),
            ],
            frame: self.frame,
        }
    }

    /// Split into 8 children arranged (2, 2, 2) that exactly tile this box.
    ///
    /// Child order is deterministic: index = 4*iz + 2*iy + ix (z varies
    /// slowest, x fastest), so query indices are reproducible across runs.
    pub fn subdivide(&self) -> [Box3D; 8] {
        let lo = self.lo();
        let half = [self.size[0] / 2.0, self.size[1] / 2.0, self.size[2] / 2.0];
        let mut out = [*self; 8];
        for iz in 0..2 {
            for iy in 0..2 {
                for ix in 0..2 {
                    let i = [ix as f64, iy as f64, iz as f64];
                    out[iz * 4 + iy * 2 + ix] = Box3D {
                        center: [
                            lo[0] + (i[0] + 0.5) * half[0],
                            lo[1] + (i[1] + 0.5) * half[1],
                            lo[2] + (i[2] + 0.5) * half[2],
                        ],
                        size: half,
                        frame: self.frame,
                    };
                }
            }
        }
        out
    }

    /// Intersect with another axis-aligned box. `None` if the intersection
    /// is degenerate (zero or negative extent on any axis).
    pub fn intersect(&self, other: &Box3D) -> Option<Box3D> {
        debug_assert_eq!(self.frame, other.frame);
        let lo_a = self.lo();
        let hi_a = self.hi();
        let lo_b = other.lo();
        let hi_b = other.hi();
        let mut lo = [0.0; 3];
        let mut hi = [0.0; 3];
        for d in 0..3 {
            lo[d] = lo_a[d].max(lo_b[d]);
            hi[d] = hi_a[d].min(hi_b[d]);
            if hi[d] <= lo[d] {
                return None;
            }
        }
        Some(Box3D::from_corners(lo, hi, self.frame))
    }

    pub fn contains_point(&self, p: [f64; 3]) -> bool {
        let lo = self.lo();
        let hi = self.hi();
        (0..3).all(|d| p[d] >= lo[d] && p[d] <= hi[d])
    }
}

fn intersection_volume<const N: usize>(
    lo_a: &[f64; N],
    hi_a: &[f64; N],
    lo_b: &[f64; N],
    hi_b: &[f64; N],
) -> f64 {
    let mut v = 1.0;
    for d in 0..N {
        let len = hi_a[d].min(hi_b[d]) - lo_a[d].max(lo_b[d]);
        if len <= 0.0 {
            return 0.0;
        }
        v *= len;
    }
    v
}

fn volume<const N: usize>(lo: &[f64; N], hi: &[f64; N]) -> f64 {
    (0..N).map(|d| hi[d] - lo[d]).product()
}

fn iou_aabb<const N: usize>(
    lo_a: &[f64; N],
    hi_a: &[f64; N],
    lo_b: &[f64; N],
    hi_b: &[f64; N],
) -> f64 {
    let inter = intersection_volume(lo_a, hi_a, lo_b, hi_b);
    let union = volume(lo_a, hi_a) + volume(lo_b, hi_b) - inter;
    inter / union
}

/// Generalized IoU for axis-aligned boxes of any dimension:
/// `IoU - (enclosing - union) / enclosing`, in (-1, 1].
pub fn giou_aabb<const N: usize>(
    lo_a: &[f64; N],
    hi_a: &[f64; N],
    lo_b: &[f64; N],
    hi_b: &[f64; N],
) -> f64 {
    let inter = intersection_volume(lo_a, hi_a, lo_b, hi_b);
    let union = volume(lo_a, hi_a) + volume(lo_b, hi_b) - inter;
    let mut enclose = 1.0;
    for d in 0..N {
        enclose *= hi_a[d].max(hi_b[d]) - lo_a[d].min(lo_b[d]);
    }
    inter / union - (enclose - union) / enclose
}

/// Generalized IoU of two 2D boxes.
pub fn giou2d(a: &Box2D, b: &Box2D) -> f64 {
    giou_aabb(&a.lo(), &a.hi(), &b.lo(), &b.hi())
}

/// Generalized IoU of two 3D boxes. Errors if the frames differ.
pub fn giou3d(a: &Box3D, b: &Box3D) -> Result<f64> {
    if a.frame != b.frame {
        return Err(Error::FrameMismatch {
            expected: a.frame.name(),
            got: b.frame.name(),
        });
    }
    Ok(giou_aabb(&a.lo(), &a.hi(), &b.lo(), &b.hi()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn giou_identity() {
        let b = Box2D::from_corners(0.0, 0.0, 2.0, 2.0);
        assert_relative_eq!(giou2d(&b, &b), 1.0, max_relative = 1e-12);
        let b3 = Box3D::new([1.0, 2.0, 3.0], [2.0, 1.0, 0.5], Frame::Grid);
        assert_relative_eq!(giou3d(&b3, &b3).unwrap(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn giou_overlapping_squares_closed_form() {
        // (0,0)-(2,2) vs (1,1)-(3,3): IoU = 1/7, enclosure 9, union 7.
        let a = Box2D::from_corners(0.0, 0.0, 2.0, 2.0);
        let b = Box2D::from_corners(1.0, 1.0, 3.0, 3.0);
        let expected = 1.0 / 7.0 - 2.0 / 9.0;
        assert_relative_eq!(giou2d(&a, &b), expected, max_relative = 1e-12);
    }

    #[test]
    fn giou_far_separation_approaches_minus_one() {
        let a = Box2D::new(0.0, 0.0, 1.0, 1.0);
        let b = Box2D::new(100.0, 0.0, 1.0, 1.0);
        assert!(giou2d(&a, &b) < -0.9);
    }

    #[test]
    fn giou_frame_mismatch_is_error() {
        let a = Box3D::new([0.0; 3], [1.0; 3], Frame::Camera);
        let b = Box3D::new([0.0; 3], [1.0; 3], Frame::Grid);
        assert!(giou3d(&a, &b).is_err());
    }

    #[test]
    fn giou_equals_iou_when_enclosure_is_covered() {
        // a inside b: enclosing box == b, so the penalty term vanishes.
        let a = Box2D::from_corners(1.0, 1.0, 2.0, 2.0);
        let b = Box2D::from_corners(0.0, 0.0, 4.0, 4.0);
        assert_relative_eq!(giou2d(&a, &b), a.iou(&b), max_relative = 1e-12);
    }

    #[test]
    fn enlarge_by_half() {
        let b = Box3D::new([1.0, 1.0, 1.0], [2.0, 2.0, 2.0], Frame::Grid);
        let e = b.enlarge(0.5);
        assert_eq!(e.size, [3.0, 3.0, 3.0]);
        assert_eq!(e.center, b.center);

        let b = Box3D::new([0.5, -1.0, 2.0], [1.0, 2.0, 4.0], Frame::Grid);
        let e = b.enlarge(0.5);
        assert_eq!(e.size, [1.5, 3.0, 6.0]);
        assert_eq!(e.center, b.center);

        assert_eq!(b.enlarge(0.0), b);
    }

    #[test]
    fn subdivide_unit_cube() {
        let b = Box3D::from_corners([0.0; 3], [1.0; 3], Frame::Grid);
        let kids = b.subdivide();
        for k in &kids {
            assert_eq!(k.size, [0.5, 0.5, 0.5]);
        }
        let vol: f64 = kids.iter().map(|k| k.volume()).sum();
        assert_relative_eq!(vol, b.volume(), max_relative = 1e-12);
        // First child is the low corner; order is z-major.
        assert_eq!(kids[0].center, [0.25, 0.25, 0.25]);
        assert_eq!(kids[1].center, [0.75, 0.25, 0.25]);
        assert_eq!(kids[2].center, [0.25, 0.75, 0.25]);
        assert_eq!(kids[4].center, [0.25, 0.25, 0.75]);
    }

    #[test]
    fn subdivide_anisotropic_extents() {
        let b = Box3D::from_corners([0.0; 3], [2.0, 4.0, 8.0], Frame::Grid);
        for k in b.subdivide() {
            assert_eq!(k.size, [1.0, 2.0, 4.0]);
        }
    }
}
