//! Dense semantic voxel grid.

use super::{Box3D, Frame};
use crate::{Error, Result};

/// Dense 3D array of semantic class labels over a metric grid.
///
/// `labels` is row-major in (D, W, H) order: index `(d * W + w) * H + h`.
/// Label 0 means free space. The grid frame is metric: voxel `(i, j, k)`
/// spans `origin + [i, j, k] * voxel_size` to `origin + [i+1, j+1, k+1] *
/// voxel_size`.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelGrid {
    shape: (usize, usize, usize),
    pub voxel_size: f64,
    pub origin: [f64; 3],
    labels: Vec<u16>,
}

impl VoxelGrid {
    pub fn new(shape: (usize, usize, usize), voxel_size: f64, origin: [f64; 3]) -> Self {
        assert!(shape.0 > 0 && shape.1 > 0 && shape.2 > 0);
        assert!(voxel_size > 0.0);
        VoxelGrid {
            shape,
            voxel_size,
            origin,
            labels: vec![0; shape.0 * shape.1 * shape.2],
        }
    }

    pub fn from_labels(
        shape: (usize, usize, usize),
        voxel_size: f64,
        origin: [f64; 3],
        labels: Vec<u16>,
    ) -> Result<Self> {
        if labels.len() != shape.0 * shape.1 * shape.2 {
            return Err(Error::Shape(format!(
                "label buffer has {} entries, shape {:?} needs {}",
                labels.len(),
                shape,
                shape.0 * shape.1 * shape.2
            )));
        }
        Ok(VoxelGrid { shape, voxel_size, origin, labels })
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[u16] {
        &self.labels
    }

    pub fn labels_mut(&mut self) -> &mut [u16] {
        &mut self.labels
    }

    #[inline]
    pub fn index(&self, d: usize, w: usize, h: usize) -> usize {
        debug_assert!(d < self.shape.0 && w < self.shape.1 && h < self.shape.2);
        (d * self.shape.1 + w) * self.shape.2 + h
    }

    /// Inverse of [`VoxelGrid::index`].
    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize, usize) {
        let h = idx % self.shape.2;
        let rest = idx / self.shape.2;
        (rest / self.shape.1, rest % self.shape.1, h)
    }

    #[inline]
    pub fn get(&self, d: usize, w: usize, h: usize) -> u16 {
        self.labels[self.index(d, w, h)]
    }

    #[inline]
    pub fn set(&mut self, d: usize, w: usize, h: usize, label: u16) {
        let i = self.index(d, w, h);
        self.labels[i] = label;
    }

    #[inline]
    pub fn in_bounds(&self, c: [i64; 3]) -> bool {
        c[0] >= 0
            && c[1] >= 0
            && c[2] >= 0
            && (c[0] as usize) < self.shape.0
            && (c[1] as usize) < self.shape.1
            && (c[2] as usize) < self.shape.2
    }

    /// Metric center of voxel `(d, w, h)` in the grid frame.
    #[inline]
    pub fn voxel_center(&self, d: usize, w: usize, h: usize) -> [f64; 3] {
        [
            self.origin[0] + (d as f64 + 0.5) * self.voxel_size,
            self.origin[1] + (w as f64 + 0.5) * self.voxel_size,
            self.origin[2] + (h as f64 + 0.5) * self.voxel_size,
        ]
    }

    /// Voxel containing a metric point, or `None` if outside the grid.
    #[inline]
    pub fn voxel_at(&self, p: [f64; 3]) -> Option<(usize, usize, usize)> {
        let c = [
            ((p[0] - self.origin[0]) / self.voxel_size).floor() as i64,
            ((p[1] - self.origin[1]) / self.voxel_size).floor() as i64,
            ((p[2] - self.origin[2]) / self.voxel_size).floor() as i64,
        ];
        if self.in_bounds(c) {
            Some((c[0] as usize, c[1] as usize, c[2] as usize))
        } else {
            None
        }
    }

    /// The metric bounding box of the whole grid.
    pub fn bounds(&self) -> Box3D {
        let hi = [
            self.origin[0] + self.shape.0 as f64 * self.voxel_size,
            self.origin[1] + self.shape.1 as f64 * self.voxel_size,
            self.origin[2] + self.shape.2 as f64 * self.voxel_size,
        ];
        Box3D::from_corners(self.origin, hi, Frame::Grid)
    }

    /// Copy of this grid with labels outside `keep` zeroed.
    pub fn mask_classes(&self, keep: &[u16]) -> VoxelGrid {
        let mut out = self.clone();
        for v in out.labels.iter_mut() {
            if !keep.contains(v) {
                *v = 0;
            }
        }
        out
    }

    /// Fraction of voxels with a non-zero label.
    pub fn occupancy_fraction(&self) -> f64 {
        let occ = self.labels.iter().filter(|&&v| v != 0).count();
        occ as f64 / self.labels.len() as f64
    }

    /// Indices of all voxels with the given label.
    pub fn voxels_of_class(&self, class_id: u16) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for d in 0..self.shape.0 {
            for w in 0..self.shape.1 {
                for h in 0..self.shape.2 {
                    if self.get(d, w, h) == class_id {
                        out.push((d, w, h));
                    }
                }
            }
        }
        out
    }
}
