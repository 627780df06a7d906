//! Trilinear resampling of class-indicator fields into local grids.

use super::{Box3D, Frame, VoxelGrid};

/// Binary local occupancy grid of side `res`, index `(ix * res + iy) * res + iz`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalGrid {
    pub res: usize,
    pub cells: Vec<bool>,
    /// Set when the query box did not intersect the voxel grid at all.
    pub outside_grid: bool,
}

impl LocalGrid {
    #[inline]
    pub fn get(&self, ix: usize, iy: usize, iz: usize) -> bool {
        self.cells[(ix * self.res + iy) * self.res + iz]
    }

    pub fn occupied_count(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }
}

/// Resample the binary indicator of `target_classes` within box `b` onto a
/// `res^3` local grid via trilinear interpolation, thresholded at 0.5.
///
/// The interpolation lattice is the voxel footprint of the box (every voxel
/// it overlaps, clipped to the grid); sample points are output cell centers
/// in metric space, clamped to the footprint's center range, so a box that
/// exactly covers a single occupied voxel yields an all-occupied result. A
/// box entirely outside the grid yields all zeros with `outside_grid` set.
pub fn resample_local_grid(
    grid: &VoxelGrid,
    b: &Box3D,
    res: usize,
    target_classes: &[u16],
) -> LocalGrid {
    debug_assert_eq!(b.frame, Frame::Grid);
    assert!(res > 0);
    let mut cells = vec![false; res * res * res];

    let footprint = match box_footprint(grid, b) {
        Some(f) => f,
        None => return LocalGrid { res, cells, outside_grid: true },
    };

    let lo = b.lo();
    for ix in 0..res {
        for iy in 0..res {
            for iz in 0..res {
                let p = [
                    lo[0] + (ix as f64 + 0.5) / res as f64 * b.size[0],
                    lo[1] + (iy as f64 + 0.5) / res as f64 * b.size[1],
                    lo[2] + (iz as f64 + 0.5) / res as f64 * b.size[2],
                ];
                let v = sample_indicator_clamped(grid, target_classes, p, &footprint);
                cells[(ix * res + iy) * res + iz] = v >= 0.5;
            }
        }
    }
    LocalGrid { res, cells, outside_grid: false }
}

/// Inclusive voxel index ranges overlapped by the box, clipped to the grid.
fn box_footprint(grid: &VoxelGrid, b: &Box3D) -> Option<[(i64, i64); 3]> {
    let (sd, sw, sh) = grid.shape();
    let dims = [sd as i64, sw as i64, sh as i64];
    let lo = b.lo();
    let hi = b.hi();
    let mut out = [(0i64, 0i64); 3];
    for d in 0..3 {
        let a = ((lo[d] - grid.origin[d]) / grid.voxel_size).floor() as i64;
        let z = ((hi[d] - grid.origin[d]) / grid.voxel_size).ceil() as i64 - 1;
        let a = a.max(0);
        let z = z.min(dims[d] - 1);
        if z < a {
            return None;
        }
        out[d] = (a, z);
    }
    Some(out)
}

/// Trilinear sample of the class indicator at metric point `p`, with the
/// continuous coordinate clamped to the footprint's voxel-center range.
fn sample_indicator_clamped(
    grid: &VoxelGrid,
    target_classes: &[u16],
    p: [f64; 3],
    footprint: &[(i64, i64); 3],
) -> f64 {
    let mut q = [0.0f64; 3];
    for d in 0..3 {
        let raw = (p[d] - grid.origin[d]) / grid.voxel_size - 0.5;
        q[d] = raw.clamp(footprint[d].0 as f64, footprint[d].1 as f64);
    }
    let base = [q[0].floor() as i64, q[1].floor() as i64, q[2].floor() as i64];
    let frac = [q[0] - base[0] as f64, q[1] - base[1] as f64, q[2] - base[2] as f64];

    let mut acc = 0.0;
    for dx in 0..2i64 {
        for dy in 0..2i64 {
            for dz in 0..2i64 {
                let c = [base[0] + dx, base[1] + dy, base[2] + dz];
                // After clamping, neighbors can exceed the footprint by one
                // cell with weight zero; skip them.
                if (0..3).any(|d| c[d] < footprint[d].0 || c[d] > footprint[d].1) {
                    continue;
                }
                let label = grid.get(c[0] as usize, c[1] as usize, c[2] as usize);
                if !target_classes.contains(&label) {
                    continue;
                }
                let wx = if dx == 0 { 1.0 - frac[0] } else { frac[0] };
                let wy = if dy == 0 { 1.0 - frac[1] } else { frac[1] };
                let wz = if dz == 0 { 1.0 - frac[2] } else { frac[2] };
                acc += wx * wy * wz;
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_covering_one_occupied_voxel_is_full() {
        let mut g = VoxelGrid::new((4, 4, 4), 1.0, [0.0; 3]);
        g.set(1, 1, 1, 2);
        let b = Box3D::from_corners([1.0, 1.0, 1.0], [2.0, 2.0, 2.0], Frame::Grid);
        let lg = resample_local_grid(&g, &b, 2, &[2]);
        assert!(!lg.outside_grid);
        assert_eq!(lg.occupied_count(), 8);
    }

    #[test]
    fn empty_grid_gives_all_zeros() {
        let g = VoxelGrid::new((4, 4, 4), 1.0, [0.0; 3]);
        let b = Box3D::new([2.0, 2.0, 2.0], [2.0, 2.0, 2.0], Frame::Grid);
        let lg = resample_local_grid(&g, &b, 4, &[1]);
        assert_eq!(lg.occupied_count(), 0);
        assert!(!lg.outside_grid);
    }

    #[test]
    fn box_outside_grid_flags_warning() {
        let g = VoxelGrid::new((4, 4, 4), 1.0, [0.0; 3]);
        let b = Box3D::new([10.0, 10.0, 10.0], [1.0, 1.0, 1.0], Frame::Grid);
        let lg = resample_local_grid(&g, &b, 2, &[1]);
        assert!(lg.outside_grid);
        assert_eq!(lg.occupied_count(), 0);
    }

    #[test]
    fn matches_direct_trilinear_oracle() {
        // 2x2x2 occupied corner inside a grid-aligned 4-unit box, res 4:
        // no clamping is active, so the oracle is a plain trilinear
        // evaluation over voxel centers at the 64 sample points.
        let mut g = VoxelGrid::new((4, 4, 4), 1.0, [0.0; 3]);
        for d in 0..2 {
            for w in 0..2 {
                for h in 0..2 {
                    g.set(d, w, h, 1);
                }
            }
        }
        let b = Box3D::from_corners([0.0; 3], [4.0; 3], Frame::Grid);
        let lg = resample_local_grid(&g, &b, 4, &[1]);

        for ix in 0..4 {
            for iy in 0..4 {
                for iz in 0..4 {
                    let p = [ix as f64 + 0.5, iy as f64 + 0.5, iz as f64 + 0.5];
                    let mut val = 0.0;
                    for d in 0..4usize {
                        for w in 0..4usize {
                            for h in 0..4usize {
                                if g.get(d, w, h) == 0 {
                                    continue;
                                }
                                let c = g.voxel_center(d, w, h);
                                let wx = 1.0 - (p[0] - c[0]).abs();
                                let wy = 1.0 - (p[1] - c[1]).abs();
                                let wz = 1.0 - (p[2] - c[2]).abs();
                                if wx > 0.0 && wy > 0.0 && wz > 0.0 {
                                    val += wx * wy * wz;
                                }
                            }
                        }
                    }
                    assert_eq!(lg.get(ix, iy, iz), val >= 0.5, "cell {ix},{iy},{iz}");
                }
            }
        }
    }
}
