//! Synthetic desk-scale scenes: a ground slab with a road strip, optional
//! walls and vegetation, and foreground objects placed on the ground,
//! rendered to a small color image with painter's-algorithm rasterization.

mod generate;
mod render;

pub use generate::generate_scene;
pub use render::render_scene;

use crate::geometry::{CameraModel, VoxelGrid};
use crate::labelgen::{CategorySplit, ObjectLabel};
use crate::{Error, Result};

/// Flat RGB image with channel values in [0, 1], row-major (y, x, c).
#[derive(Debug, Clone, PartialEq)]
pub struct SceneImage {
    pub width: usize,
    pub height: usize,
    data: Vec<f64>,
}

impl SceneImage {
    pub fn filled(width: usize, height: usize, color: [f64; 3]) -> Self {
        let mut data = Vec::with_capacity(width * height * 3);
        for _ in 0..width * height {
            data.extend_from_slice(&color);
        }
        SceneImage { width, height, data }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> [f64; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, color: [f64; 3]) {
        let i = (y * self.width + x) * 3;
        self.data[i..i + 3].copy_from_slice(&color);
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// How a semantic class participates in scene generation.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum ClassKind {
    /// Discrete localizable object: solid boxes sampled from the size range
    /// (voxel units, per axis) with a per-scene count range.
    Foreground { size_range: [[usize; 2]; 3], count_range: [usize; 2] },
    /// Spatially extended structure laid out by the background generator.
    Background,
}

/// One semantic class: id, display name, render color and generation role.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ClassSpec {
    pub id: u16,
    pub name: String,
    pub color: [f64; 3],
    pub kind: ClassKind,
}

/// Camera placement relative to the grid. The camera sits behind the grid's
/// low-x face, looking along +x with a downward pitch. Small fractional
/// offsets keep rays away from exact voxel boundaries.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CameraPose {
    /// Distance behind the grid's low-x face, meters.
    pub distance: f64,
    /// Height above the grid's low-z face, meters.
    pub height: f64,
    /// Downward pitch, radians.
    pub pitch: f64,
    /// Focal length in pixels (fx = fy).
    pub focal: f64,
}

impl Default for CameraPose {
    fn default() -> Self {
        CameraPose { distance: 1.55, height: 1.2071, pitch: 0.2, focal: 38.0 }
    }
}

/// Configuration for the synthetic scene generator.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SceneConfig {
    pub grid_shape: (usize, usize, usize),
    pub voxel_size: f64,
    pub grid_origin: [f64; 3],
    pub image_size: (usize, usize),
    /// Decoder depth the grid must stay divisible by (2^levels).
    pub levels: usize,
    pub classes: Vec<ClassSpec>,
    /// Ground slab thickness in voxels.
    pub ground_height: usize,
    /// Road strip width range in voxels.
    pub road_width: [usize; 2],
    pub wall_probability: f64,
    /// Vegetation blocks are added until this occupancy fraction is reached.
    pub target_occupancy: f64,
    pub cluster_threshold_voxels: f64,
    pub min_visibility: f64,
    pub camera: CameraPose,
}

impl Default for SceneConfig {
    fn default() -> Self {
        SceneConfig {
            grid_shape: (32, 32, 8),
            voxel_size: 0.25,
            grid_origin: [0.0, -4.0, 0.0],
            image_size: (64, 64),
            levels: 2,
            classes: default_classes(),
            ground_height: 1,
            road_width: [6, 10],
            wall_probability: 0.6,
            target_occupancy: 0.15,
            cluster_threshold_voxels: 1.7320508075688772,
            min_visibility: 0.0,
            camera: CameraPose::default(),
        }
    }
}

impl SceneConfig {
    pub fn validate(&self) -> Result<()> {
        let (d, w, h) = self.grid_shape;
        let div = 1usize << self.levels;
        if d % div != 0 || w % div != 0 || h % div != 0 {
            return Err(Error::NotDivisible { d, w, h, levels: self.levels });
        }
        if self.ground_height >= h {
            return Err(Error::InvalidArgument("ground higher than the grid".into()));
        }
        self.split()?;
        Ok(())
    }

    /// Category split derived from the class table.
    pub fn split(&self) -> Result<CategorySplit> {
        let mut fg = Vec::new();
        let mut bg = Vec::new();
        for c in &self.classes {
            match c.kind {
                ClassKind::Foreground { .. } => fg.push(c.id),
                ClassKind::Background => bg.push(c.id),
            }
        }
        CategorySplit::new(fg, bg)
    }

    pub fn class(&self, id: u16) -> Option<&ClassSpec> {
        self.classes.iter().find(|c| c.id == id)
    }

    pub fn palette(&self) -> Vec<(u16, [f64; 3])> {
        self.classes.iter().map(|c| (c.id, c.color)).collect()
    }

    /// The fixed scene camera.
    pub fn build_camera(&self) -> CameraModel {
        let (_, sw, sh) = self.grid_shape;
        let pitch = self.camera.pitch;
        // Base orientation: camera +x = grid -y, +y = grid -z, +z = grid +x.
        let r0 = [[0.0, -1.0, 0.0], [0.0, 0.0, -1.0], [1.0, 0.0, 0.0]];
        // Pitch down about the camera x axis.
        let (s, c) = pitch.sin_cos();
        let rx = [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]];
        let mut rot = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                rot[i][j] = (0..3).map(|k| rx[i][k] * r0[k][j]).sum();
            }
        }
        let pos = [
            self.grid_origin[0] - self.camera.distance,
            self.grid_origin[1] + sw as f64 * self.voxel_size / 2.0 + 0.0137,
            self.grid_origin[2] + self.camera.height,
        ];
        let _ = sh;
        let t = [
            -(rot[0][0] * pos[0] + rot[0][1] * pos[1] + rot[0][2] * pos[2]),
            -(rot[1][0] * pos[0] + rot[1][1] * pos[1] + rot[1][2] * pos[2]),
            -(rot[2][0] * pos[0] + rot[2][1] * pos[1] + rot[2][2] * pos[2]),
        ];
        let (iw, ih) = self.image_size;
        CameraModel::new(
            self.camera.focal,
            self.camera.focal,
            iw as f64 / 2.0 + 0.17,
            ih as f64 / 2.0 + 0.23,
            rot,
            t,
            self.image_size,
        )
        .expect("camera pose produces a valid rotation")
    }
}

/// The default class table: three foreground object types over four kinds
/// of background structure.
pub fn default_classes() -> Vec<ClassSpec> {
    vec![
        ClassSpec {
            id: 1,
            name: "car".into(),
            color: [0.85, 0.12, 0.12],
            kind: ClassKind::Foreground {
                size_range: [[4, 6], [2, 3], [2, 3]],
                count_range: [0, 2],
            },
        },
        ClassSpec {
            id: 2,
            name: "person".into(),
            color: [0.95, 0.6, 0.1],
            kind: ClassKind::Foreground {
                size_range: [[1, 2], [1, 2], [3, 4]],
                count_range: [0, 2],
            },
        },
        ClassSpec {
            id: 3,
            name: "sign".into(),
            color: [0.15, 0.3, 0.9],
            kind: ClassKind::Foreground {
                size_range: [[1, 1], [2, 3], [4, 5]],
                count_range: [0, 2],
            },
        },
        ClassSpec {
            id: 4,
            name: "terrain".into(),
            color: [0.45, 0.5, 0.35],
            kind: ClassKind::Background,
        },
        ClassSpec {
            id: 5,
            name: "road".into(),
            color: [0.25, 0.25, 0.28],
            kind: ClassKind::Background,
        },
        ClassSpec {
            id: 6,
            name: "building".into(),
            color: [0.6, 0.5, 0.4],
            kind: ClassKind::Background,
        },
        ClassSpec {
            id: 7,
            name: "vegetation".into(),
            color: [0.15, 0.55, 0.2],
            kind: ClassKind::Background,
        },
    ]
}

/// One training example: rendered image, camera, ground truth grid and the
/// extracted object labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenePair {
    pub image: SceneImage,
    pub camera: CameraModel,
    pub gt: VoxelGrid,
    pub labels: Vec<ObjectLabel>,
    /// Set when object placement gave up before reaching the sampled count.
    pub placement_shortfall: bool,
}
