//! Flat-shaded painter's-algorithm voxel rasterizer.

use super::SceneImage;
use crate::geometry::{project_point, CameraModel, VoxelGrid};

const SKY: [f64; 3] = [0.7, 0.8, 0.92];

/// Render occupied voxels far-to-near: each voxel's eight corners are
/// projected and its pixel-space bounding box is filled with the class
/// color, so nearer voxels overwrite farther ones.
pub fn render_scene(
    grid: &VoxelGrid,
    camera: &CameraModel,
    palette: &[(u16, [f64; 3])],
    image_size: (usize, usize),
) -> SceneImage {
    let (iw, ih) = image_size;
    let mut img = SceneImage::filled(iw, ih, SKY);

    // Collect occupied voxels with their camera depth.
    let mut voxels: Vec<(f64, usize)> = Vec::new();
    for idx in 0..grid.len() {
        let label = grid.labels()[idx];
        if label == 0 {
            continue;
        }
        let (d, w, h) = grid.coords(idx);
        let cam = camera.grid_to_camera(grid.voxel_center(d, w, h));
        if cam[2] <= 0.0 {
            continue;
        }
        voxels.push((cam[2], idx));
    }
    // Far to near; ties broken by cell index for determinism.
    voxels.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));

    let vs = grid.voxel_size;
    for (_, idx) in voxels {
        let label = grid.labels()[idx];
        let color = match palette.iter().find(|(id, _)| *id == label) {
            Some((_, c)) => *c,
            None => continue,
        };
        let (d, w, h) = grid.coords(idx);
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        let mut behind = false;
        for corner in 0..8usize {
            let p = [
                grid.origin[0] + (d + (corner & 1)) as f64 * vs,
                grid.origin[1] + (w + ((corner >> 1) & 1)) as f64 * vs,
                grid.origin[2] + (h + ((corner >> 2) & 1)) as f64 * vs,
            ];
            let proj = project_point(camera, p);
            if !proj.in_front {
                behind = true;
                break;
            }
            lo[0] = lo[0].min(proj.u);
            lo[1] = lo[1].min(proj.v);
            hi[0] = hi[0].max(proj.u);
            hi[1] = hi[1].max(proj.v);
        }
        if behind {
            continue;
        }
        let x0 = lo[0].floor().max(0.0) as usize;
        let y0 = lo[1].floor().max(0.0) as usize;
        let x1 = (hi[0].ceil() as i64).min(iw as i64) as usize;
        let y1 = (hi[1].ceil() as i64).min(ih as i64) as usize;
        for y in y0..y1 {
            for x in x0..x1 {
                img.set(x, y, color);
            }
        }
    }
    img
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::SceneConfig;

    #[test]
    fn object_center_pixel_carries_its_class_color() {
        let cfg = SceneConfig::default();
        let mut grid = VoxelGrid::new(cfg.grid_shape, cfg.voxel_size, cfg.grid_origin);
        // Single car-class voxel, nothing else in the scene.
        grid.set(12, 16, 2, 1);
        let camera = cfg.build_camera();
        let img = render_scene(&grid, &camera, &cfg.palette(), cfg.image_size);

        let center = grid.voxel_center(12, 16, 2);
        let proj = project_point(&camera, center);
        assert!(proj.in_front && camera.in_image(proj.u, proj.v));
        let px = img.get(proj.u as usize, proj.v as usize);
        let want = cfg.class(1).unwrap().color;
        assert_eq!(px, want);
    }

    #[test]
    fn empty_scene_renders_sky_only() {
        let cfg = SceneConfig::default();
        let grid = VoxelGrid::new(cfg.grid_shape, cfg.voxel_size, cfg.grid_origin);
        let img = render_scene(&grid, &cfg.build_camera(), &cfg.palette(), cfg.image_size);
        assert!(img.data().chunks(3).all(|c| c == SKY));
    }
}
