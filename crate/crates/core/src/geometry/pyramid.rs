//! Multi-resolution binary occupancy pyramids.

use super::VoxelGrid;
use crate::{Error, Result};

/// Binary occupancy grids at power-of-two resolutions. Level 0 is the full
/// grid; a cell at level l+1 is occupied iff any of its 8 level-l children
/// is occupied (logical OR downsampling).
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyPyramid {
    shapes: Vec<(usize, usize, usize)>,
    levels: Vec<Vec<bool>>,
}

impl OccupancyPyramid {
    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn shape(&self, level: usize) -> (usize, usize, usize) {
        self.shapes[level]
    }

    pub fn level(&self, level: usize) -> &[bool] {
        &self.levels[level]
    }

    #[inline]
    pub fn get(&self, level: usize, d: usize, w: usize, h: usize) -> bool {
        let (_, sw, sh) = self.shapes[level];
        self.levels[level][(d * sw + w) * sh + h]
    }

    /// Number of occupied cells at a level.
    pub fn occupied_count(&self, level: usize) -> usize {
        self.levels[level].iter().filter(|&&b| b).count()
    }
}

/// Build an occupancy pyramid with `levels + 1` levels (level 0 through
/// `levels`). Level 0 is the binary occupancy of `grid` (any non-zero
/// label); each next level is the OR over 2x2x2 blocks.
pub fn build_occupancy_pyramid(grid: &VoxelGrid, levels: usize) -> Result<OccupancyPyramid> {
    let (d, w, h) = grid.shape();
    let div = 1usize << levels;
    if d % div != 0 || w % div != 0 || h % div != 0 {
        return Err(Error::NotDivisible { d, w, h, levels });
    }

    let base: Vec<bool> = grid.labels().iter().map(|&v| v != 0).collect();
    let mut shapes = vec![(d, w, h)];
    let mut lvls = vec![base];

    for _ in 0..levels {
        let (pd, pw, ph) = *shapes.last().unwrap();
        let (cd, cw, ch) = (pd / 2, pw / 2, ph / 2);
        let prev = lvls.last().unwrap();
        let mut cur = vec![false; cd * cw * ch];
        for id in 0..cd {
            for iw in 0..cw {
                for ih in 0..ch {
                    let mut occ = false;
                    'block: for dd in 0..2 {
                        for dw in 0..2 {
                            for dh in 0..2 {
                                let idx =
                                    ((id * 2 + dd) * pw + (iw * 2 + dw)) * ph + (ih * 2 + dh);
                                if prev[idx] {
                                    occ = true;
                                    break 'block;
                                }
                            }
                        }
                    }
                    cur[(id * cw + iw) * ch + ih] = occ;
                }
            }
        }
        shapes.push((cd, cw, ch));
        lvls.push(cur);
    }

    Ok(OccupancyPyramid { shapes, levels: lvls })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn single_voxel_propagates_to_every_level() {
        let mut g = VoxelGrid::new((8, 8, 8), 1.0, [0.0; 3]);
        g.set(5, 2, 7, 3);
        let p = build_occupancy_pyramid(&g, 3).unwrap();
        for l in 0..=3 {
            assert_eq!(p.occupied_count(l), 1, "level {l}");
        }
        assert!(p.get(3, 0, 0, 0));
        assert!(p.get(1, 2, 1, 3));
    }

    #[test]
    fn full_grid_is_full_everywhere() {
        let mut g = VoxelGrid::new((4, 4, 4), 1.0, [0.0; 3]);
        g.labels_mut().fill(1);
        let p = build_occupancy_pyramid(&g, 2).unwrap();
        for l in 0..=2 {
            let (d, w, h) = p.shape(l);
            assert_eq!(p.occupied_count(l), d * w * h);
        }
    }

    #[test]
    fn random_grid_matches_block_or_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut g = VoxelGrid::new((8, 8, 8), 1.0, [0.0; 3]);
        for v in g.labels_mut() {
            *v = if rng.random_bool(0.3) { 1 } else { 0 };
        }
        let p = build_occupancy_pyramid(&g, 1).unwrap();
        for d in 0..4 {
            for w in 0..4 {
                for h in 0..4 {
                    let mut expect = false;
                    for dd in 0..2 {
                        for dw in 0..2 {
                            for dh in 0..2 {
                                expect |= g.get(d * 2 + dd, w * 2 + dw, h * 2 + dh) != 0;
                            }
                        }
                    }
                    assert_eq!(p.get(1, d, w, h), expect);
                }
            }
        }
    }

    #[test]
    fn divisibility_violation_is_error() {
        let g = VoxelGrid::new((6, 8, 8), 1.0, [0.0; 3]);
        assert!(build_occupancy_pyramid(&g, 2).is_err());
    }
}
