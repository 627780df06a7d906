//! Occlusion-aware per-voxel visibility via exact voxel ray traversal.

use crate::exec::map_indexed;
use crate::geometry::{project_point, CameraModel, VoxelGrid};

/// Dense binary visibility mask over a voxel grid, row-major (D, W, H).
#[derive(Debug, Clone, PartialEq)]
pub struct VisibilityMask {
    shape: (usize, usize, usize),
    visible: Vec<bool>,
}

impl VisibilityMask {
    #[inline]
    pub fn get(&self, d: usize, w: usize, h: usize) -> bool {
        self.visible[(d * self.shape.1 + w) * self.shape.2 + h]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.visible
    }

    pub fn count_visible(&self) -> usize {
        self.visible.iter().filter(|&&b| b).count()
    }
}

/// Compute which voxels are visible from the camera.
///
/// A voxel is visible iff its center projects inside the image with positive
/// depth and the open segment from its center to the camera origin passes
/// through no occupied voxel other than itself. Traversal is exact
/// (Amanatides & Woo), so occupancy anywhere along the segment occludes, no
/// matter how short the crossing.
pub fn visibility_mask(camera: &CameraModel, grid: &VoxelGrid) -> VisibilityMask {
    let (sd, sw, sh) = grid.shape();
    let origin = camera.origin_in_grid();
    let visible = map_indexed(sd * sw * sh, |idx| {
        let (d, w, h) = grid.coords(idx);
        voxel_visible(camera, grid, origin, (d, w, h))
    });
    VisibilityMask { shape: (sd, sw, sh), visible }
}

fn voxel_visible(
    camera: &CameraModel,
    grid: &VoxelGrid,
    origin: [f64; 3],
    voxel: (usize, usize, usize),
) -> bool {
    let center = grid.voxel_center(voxel.0, voxel.1, voxel.2);
    let proj = project_point(camera, center);
    if !proj.in_front || !camera.in_image(proj.u, proj.v) {
        return false;
    }
    !segment_blocked(grid, center, origin, voxel)
}

/// True when any occupied cell other than `skip` intersects the open
/// segment from `start` to `end` (both in grid metric coordinates).
pub(crate) fn segment_blocked(
    grid: &VoxelGrid,
    start: [f64; 3],
    end: [f64; 3],
    skip: (usize, usize, usize),
) -> bool {
    let (sd, sw, sh) = grid.shape();
    let dims = [sd as i64, sw as i64, sh as i64];
    let vs = grid.voxel_size;

    // Work in continuous voxel coordinates (cell (i,j,k) spans [i,i+1)).
    let p0 = [
        (start[0] - grid.origin[0]) / vs,
        (start[1] - grid.origin[1]) / vs,
        (start[2] - grid.origin[2]) / vs,
    ];
    let p1 = [
        (end[0] - grid.origin[0]) / vs,
        (end[1] - grid.origin[1]) / vs,
        (end[2] - grid.origin[2]) / vs,
    ];
    let dir = [p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]];

    let mut cell = [
        p0[0].floor() as i64,
        p0[1].floor() as i64,
        p0[2].floor() as i64,
    ];
    let mut t_max = [f64::INFINITY; 3];
    let mut t_delta = [f64::INFINITY; 3];
    let mut step = [0i64; 3];
    for a in 0..3 {
        if dir[a] > 0.0 {
            step[a] = 1;
            t_max[a] = (cell[a] as f64 + 1.0 - p0[a]) / dir[a];
            t_delta[a] = 1.0 / dir[a];
        } else if dir[a] < 0.0 {
            step[a] = -1;
            t_max[a] = (cell[a] as f64 - p0[a]) / dir[a];
            t_delta[a] = -1.0 / dir[a];
        }
    }

    let skip = [skip.0 as i64, skip.1 as i64, skip.2 as i64];
    loop {
        let in_bounds = (0..3).all(|a| cell[a] >= 0 && cell[a] < dims[a]);
        if in_bounds && cell != skip {
            let occ = grid.get(cell[0] as usize, cell[1] as usize, cell[2] as usize) != 0;
            if occ {
                return true;
            }
        }
        // Advance to the next cell boundary.
        let axis = if t_max[0] <= t_max[1] && t_max[0] <= t_max[2] {
            0
        } else if t_max[1] <= t_max[2] {
            1
        } else {
            2
        };
        if t_max[axis] >= 1.0 {
            return false; // reached the segment end
        }
        cell[axis] += step[axis];
        t_max[axis] += t_delta[axis];
        // Once outside the grid and stepping outward on that axis, the
        // segment cannot re-enter.
        if (0..3).any(|a| (cell[a] < 0 && step[a] < 0) || (cell[a] >= dims[a] && step[a] > 0)) {
            return false;
        }
    }
}
