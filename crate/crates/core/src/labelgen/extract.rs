//! Per-object detection labels from a ground-truth grid.

use super::{cluster_objects, visibility_mask};
use crate::geometry::{project_point, Box2D, Box3D, CameraModel, Frame, VoxelGrid};
use crate::{Error, Result};

/// Foreground/background split of the semantic classes. Foreground classes
/// are clustered into detectable objects; background classes are only
/// supervised through occupancy and the semantic head.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CategorySplit {
    pub foreground: Vec<u16>,
    pub background: Vec<u16>,
}

impl CategorySplit {
    pub fn new(foreground: Vec<u16>, background: Vec<u16>) -> Result<Self> {
        for c in &foreground {
            if background.contains(c) {
                return Err(Error::InvalidArgument(format!(
                    "class {c} is listed as both foreground and background"
                )));
            }
        }
        if foreground.contains(&0) || background.contains(&0) {
            return Err(Error::InvalidArgument("class 0 is reserved for free space".into()));
        }
        Ok(CategorySplit { foreground, background })
    }

    pub fn is_foreground(&self, class_id: u16) -> bool {
        self.foreground.contains(&class_id)
    }

    pub fn num_classes(&self) -> usize {
        self.foreground.len() + self.background.len()
    }

    /// Index of a foreground class in the detector's class list.
    pub fn fg_index(&self, class_id: u16) -> Option<usize> {
        self.foreground.iter().position(|&c| c == class_id)
    }

    /// Index of a background class in the semantic head's query list.
    pub fn bg_index(&self, class_id: u16) -> Option<usize> {
        self.background.iter().position(|&c| c == class_id)
    }
}

/// One extracted object: a same-class voxel cluster with its boxes and the
/// fraction of its voxels visible from the camera.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectLabel {
    pub class_id: u16,
    pub voxels: Vec<(usize, usize, usize)>,
    /// Tight metric hull of the voxels, grid frame.
    pub box3d: Box3D,
    /// Tight pixel hull of the projected voxel corners, clipped to the image.
    pub box2d: Box2D,
    /// Fraction of the object's voxels visible from the camera, in [0, 1].
    pub visibility: f64,
}

/// Extract detection labels for every foreground class.
///
/// Objects come from single-linkage clustering at `threshold` (voxel
/// units). Visibility is the fraction of an object's voxels that are
/// unoccluded; objects at or below `min_visibility` are dropped, so the
/// default of 0 keeps anything with at least one visible voxel. The 2D box
/// covers all of the object's voxels, including occluded ones, so labels
/// carry amodal extent.
pub fn extract_labels(
    scene: &VoxelGrid,
    camera: &CameraModel,
    split: &CategorySplit,
    threshold: f64,
    min_visibility: f64,
) -> Vec<ObjectLabel> {
    let vis = visibility_mask(camera, scene);
    let mut out = Vec::new();
    for &class_id in &split.foreground {
        for voxels in cluster_objects(scene, class_id, threshold) {
            let visible = voxels.iter().filter(|&&(d, w, h)| vis.get(d, w, h)).count();
            let visibility = visible as f64 / voxels.len() as f64;
            if visibility <= min_visibility {
                continue;
            }
            let box3d = voxel_hull(scene, &voxels);
            let box2d = match projected_hull(scene, camera, &voxels) {
                Some(b) => b,
                None => continue,
            };
            out.push(ObjectLabel { class_id, voxels, box3d, box2d, visibility });
        }
    }
    out
}

/// Tight metric bounding box of a set of voxels.
fn voxel_hull(grid: &VoxelGrid, voxels: &[(usize, usize, usize)]) -> Box3D {
    let vs = grid.voxel_size;
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for &(d, w, h) in voxels {
        let c = [d as f64, w as f64, h as f64];
        for a in 0..3 {
            lo[a] = lo[a].min(grid.origin[a] + c[a] * vs);
            hi[a] = hi[a].max(grid.origin[a] + (c[a] + 1.0) * vs);
        }
    }
    Box3D::from_corners(lo, hi, Frame::Grid)
}

/// Pixel hull of all projected voxel corners, clipped to the image.
/// `None` when no corner lands in front of the camera or the clipped box
/// is degenerate.
fn projected_hull(
    grid: &VoxelGrid,
    camera: &CameraModel,
    voxels: &[(usize, usize, usize)],
) -> Option<Box2D> {
    let vs = grid.voxel_size;
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    let mut any = false;
    for &(d, w, h) in voxels {
        for corner in 0..8 {
            let p = [
                grid.origin[0] + (d + (corner & 1)) as f64 * vs,
                grid.origin[1] + (w + ((corner >> 1) & 1)) as f64 * vs,
                grid.origin[2] + (h + ((corner >> 2) & 1)) as f64 * vs,
            ];
            let proj = project_point(camera, p);
            if !proj.in_front {
                continue;
            }
            any = true;
            lo[0] = lo[0].min(proj.u);
            lo[1] = lo[1].min(proj.v);
            hi[0] = hi[0].max(proj.u);
            hi[1] = hi[1].max(proj.v);
        }
    }
    if !any {
        return None;
    }
    let (iw, ih) = (camera.image_size.0 as f64, camera.image_size.1 as f64);
    let x0 = lo[0].clamp(0.0, iw);
    let y0 = lo[1].clamp(0.0, ih);
    let x1 = hi[0].clamp(0.0, iw);
    let y1 = hi[1].clamp(0.0, ih);
    if x1 - x0 <= 0.0 || y1 - y0 <= 0.0 {
        return None;
    }
    Some(Box2D::from_corners(x0, y0, x1, y1))
}
