//! Single-linkage clustering of same-class voxels.

use crate::geometry::VoxelGrid;

/// Cluster the voxels of `class_id` by single linkage: two voxels share a
/// cluster iff they are connected by a chain of same-class voxels with
/// consecutive Euclidean distance (in voxel units) at most `threshold`.
///
/// Clusters partition the class voxels and are returned in row-major
/// discovery order; voxels within a cluster are row-major sorted.
pub fn cluster_objects(
    grid: &VoxelGrid,
    class_id: u16,
    threshold: f64,
) -> Vec<Vec<(usize, usize, usize)>> {
    debug_assert!(threshold >= 1.0);
    let voxels = grid.voxels_of_class(class_id);
    if voxels.is_empty() {
        return Vec::new();
    }

    // Neighbor offsets within the threshold ball.
    let r = threshold.floor() as i64;
    let t2 = threshold * threshold;
    let mut offsets = Vec::new();
    for dd in -r..=r {
        for dw in -r..=r {
            for dh in -r..=r {
                if (dd, dw, dh) == (0, 0, 0) {
                    continue;
                }
                let d2 = (dd * dd + dw * dw + dh * dh) as f64;
                if d2 <= t2 {
                    offsets.push((dd, dw, dh));
                }
            }
        }
    }

    let (sd, sw, sh) = grid.shape();
    let mut member = vec![false; sd * sw * sh];
    for &(d, w, h) in &voxels {
        member[grid.index(d, w, h)] = true;
    }

    let mut visited = vec![false; sd * sw * sh];
    let mut clusters = Vec::new();
    for &(d, w, h) in &voxels {
        let start = grid.index(d, w, h);
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut queue = vec![(d, w, h)];
        let mut cluster = Vec::new();
        while let Some((cd, cw, ch)) = queue.pop() {
            cluster.push((cd, cw, ch));
            for &(dd, dw, dh) in &offsets {
                let n = [cd as i64 + dd, cw as i64 + dw, ch as i64 + dh];
                if !grid.in_bounds(n) {
                    continue;
                }
                let idx = grid.index(n[0] as usize, n[1] as usize, n[2] as usize);
                if member[idx] && !visited[idx] {
                    visited[idx] = true;
                    queue.push((n[0] as usize, n[1] as usize, n[2] as usize));
                }
            }
        }
        cluster.sort_unstable();
        clusters.push(cluster);
    }
    clusters
}
