//! Scene files on disk: one directory per split, per scene a binary voxel
//! label volume, a plain-text camera file, a PNG image and a structured
//! text labels file, plus one `dataset.toml` describing the split.

use crate::geometry::{Box2D, Box3D, CameraModel, Frame, VoxelGrid};
use crate::labelgen::{CategorySplit, ObjectLabel};
use crate::synth::{ClassSpec, SceneConfig, SceneImage, ScenePair};
use crate::{Error, Result};
use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use std::fs;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

/// Split-level metadata stored as `dataset.toml`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DatasetMeta {
    pub grid_shape: (usize, usize, usize),
    pub voxel_size: f64,
    pub grid_origin: [f64; 3],
    pub image_size: (usize, usize),
    pub classes: Vec<ClassSpec>,
    pub num_scenes: usize,
}

impl DatasetMeta {
    pub fn from_config(cfg: &SceneConfig, num_scenes: usize) -> Self {
        DatasetMeta {
            grid_shape: cfg.grid_shape,
            voxel_size: cfg.voxel_size,
            grid_origin: cfg.grid_origin,
            image_size: cfg.image_size,
            classes: cfg.classes.clone(),
            num_scenes,
        }
    }

    pub fn split(&self) -> Result<CategorySplit> {
        let mut fg = Vec::new();
        let mut bg = Vec::new();
        for c in &self.classes {
            match c.kind {
                crate::synth::ClassKind::Foreground { .. } => fg.push(c.id),
                crate::synth::ClassKind::Background => bg.push(c.id),
            }
        }
        CategorySplit::new(fg, bg)
    }

    pub fn palette(&self) -> Vec<(u16, [f64; 3])> {
        self.classes.iter().map(|c| (c.id, c.color)).collect()
    }
}

/// Paths of one scene's files within a split directory.
#[derive(Debug, Clone)]
pub struct SceneFiles {
    pub voxels: PathBuf,
    pub camera: PathBuf,
    pub image: PathBuf,
    pub labels: PathBuf,
}

impl SceneFiles {
    pub fn new(dir: &Path, index: usize) -> Self {
        SceneFiles {
            voxels: dir.join(format!("{index:05}.voxels")),
            camera: dir.join(format!("{index:05}.camera.txt")),
            image: dir.join(format!("{index:05}.png")),
            labels: dir.join(format!("{index:05}.labels.txt")),
        }
    }
}

pub fn write_meta(dir: &Path, meta: &DatasetMeta) -> Result<()> {
    fs::create_dir_all(dir)?;
    let text = toml::to_string_pretty(meta)
        .map_err(|e| Error::Dataset(format!("meta serialization: {e}")))?;
    fs::write(dir.join("dataset.toml"), text)?;
    Ok(())
}

pub fn read_meta(dir: &Path) -> Result<DatasetMeta> {
    let text = fs::read_to_string(dir.join("dataset.toml"))
        .map_err(|e| Error::Dataset(format!("missing dataset.toml in {dir:?}: {e}")))?;
    toml::from_str(&text).map_err(|e| Error::Dataset(format!("bad dataset.toml: {e}")))
}

/// Write a voxel label volume as 16-bit unsigned little-endian integers in
/// row-major (D, W, H) order.
pub fn write_voxel_volume(path: &Path, grid: &VoxelGrid) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    for &v in grid.labels() {
        w.write_u16::<LittleEndian>(v)?;
    }
    Ok(())
}

/// Read a voxel label volume written by [`write_voxel_volume`].
pub fn read_voxel_volume(
    path: &Path,
    shape: (usize, usize, usize),
    voxel_size: f64,
    origin: [f64; 3],
) -> Result<VoxelGrid> {
    let n = shape.0 * shape.1 * shape.2;
    let mut r = BufReader::new(fs::File::open(path)?);
    let mut labels = vec![0u16; n];
    r.read_u16_into::<LittleEndian>(&mut labels)
        .map_err(|e| Error::Dataset(format!("short voxel file {path:?}: {e}")))?;
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(Error::Dataset(format!("voxel file {path:?} longer than expected")));
    }
    VoxelGrid::from_labels(shape, voxel_size, origin, labels)
}

fn write_camera(path: &Path, cam: &CameraModel) -> Result<()> {
    let mut out = String::new();
    for row in &cam.rotation {
        for v in row {
            out.push_str(&format!("{v:.17e} "));
        }
    }
    for v in &cam.translation {
        out.push_str(&format!("{v:.17e} "));
    }
    out.push('\n');
    out.push_str(&format!("{:.17e} {:.17e} {:.17e} {:.17e}\n", cam.fx, cam.fy, cam.cx, cam.cy));
    fs::write(path, out)?;
    Ok(())
}

fn read_camera(path: &Path, image_size: (usize, usize)) -> Result<CameraModel> {
    let text = fs::read_to_string(path)?;
    let vals: Vec<f64> = text
        .split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|e| Error::Dataset(format!("camera file: {e}"))))
        .collect::<Result<_>>()?;
    if vals.len() != 16 {
        return Err(Error::Dataset(format!(
            "camera file {path:?} has {} values, expected 16",
            vals.len()
        )));
    }
    let rotation = [
        [vals[0], vals[1], vals[2]],
        [vals[3], vals[4], vals[5]],
        [vals[6], vals[7], vals[8]],
    ];
    let translation = [vals[9], vals[10], vals[11]];
    CameraModel::new(vals[12], vals[13], vals[14], vals[15], rotation, translation, image_size)
}

fn write_image(path: &Path, img: &SceneImage) -> Result<()> {
    let mut buf = image::RgbImage::new(img.width as u32, img.height as u32);
    for y in 0..img.height {
        for x in 0..img.width {
            let c = img.get(x, y);
            buf.put_pixel(
                x as u32,
                y as u32,
                image::Rgb([
                    (c[0].clamp(0.0, 1.0) * 255.0).round() as u8,
                    (c[1].clamp(0.0, 1.0) * 255.0).round() as u8,
                    (c[2].clamp(0.0, 1.0) * 255.0).round() as u8,
                ]),
            );
        }
    }
    buf.save(path)?;
    Ok(())
}

pub(crate) fn read_image(path: &Path) -> Result<SceneImage> {
    let img = image::open(path)?.into_rgb8();
    let (w, h) = (img.width() as usize, img.height() as usize);
    let mut out = SceneImage::filled(w, h, [0.0; 3]);
    for y in 0..h {
        for x in 0..w {
            let p = img.get_pixel(x as u32, y as u32);
            out.set(x, y, [p[0] as f64 / 255.0, p[1] as f64 / 255.0, p[2] as f64 / 255.0]);
        }
    }
    Ok(out)
}

fn write_labels(path: &Path, labels: &[ObjectLabel]) -> Result<()> {
    let mut out = String::new();
    for l in labels {
        out.push_str(&format!(
            "class {} box2d {:.17e} {:.17e} {:.17e} {:.17e} box3d {:.17e} {:.17e} {:.17e} {:.17e} {:.17e} {:.17e} visibility {:.17e}\n",
            l.class_id,
            l.box2d.cx, l.box2d.cy, l.box2d.w, l.box2d.h,
            l.box3d.center[0], l.box3d.center[1], l.box3d.center[2],
            l.box3d.size[0], l.box3d.size[1], l.box3d.size[2],
            l.visibility,
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

fn read_labels(path: &Path, grid: &VoxelGrid) -> Result<Vec<ObjectLabel>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let bad = || Error::Dataset(format!("labels file {path:?} line {}", ln + 1));
        if toks.len() != 16
            || toks[0] != "class"
            || toks[2] != "box2d"
            || toks[7] != "box3d"
            || toks[14] != "visibility"
        {
            return Err(bad());
        }
        let f = |s: &str| s.parse::<f64>().map_err(|_| bad());
        let class_id: u16 = toks[1].parse().map_err(|_| bad())?;
        let box2d = Box2D::new(f(toks[3])?, f(toks[4])?, f(toks[5])?, f(toks[6])?);
        let box3d = Box3D::new(
            [f(toks[8])?, f(toks[9])?, f(toks[10])?],
            [f(toks[11])?, f(toks[12])?, f(toks[13])?],
            Frame::Grid,
        );
        let visibility = f(toks[15])?;
        // Recover the member voxels: same-class voxels inside the 3D hull.
        let voxels = voxels_in_box(grid, class_id, &box3d);
        out.push(ObjectLabel { class_id, voxels, box3d, box2d, visibility });
    }
    Ok(out)
}

fn voxels_in_box(grid: &VoxelGrid, class_id: u16, b: &Box3D) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    let (sd, sw, sh) = grid.shape();
    for d in 0..sd {
        for w in 0..sw {
            for h in 0..sh {
                if grid.get(d, w, h) == class_id
                    && b.contains_point(grid.voxel_center(d, w, h))
                {
                    out.push((d, w, h));
                }
            }
        }
    }
    out
}

/// Write one scene into a split directory.
pub fn write_scene(dir: &Path, index: usize, scene: &ScenePair) -> Result<()> {
    fs::create_dir_all(dir)?;
    let files = SceneFiles::new(dir, index);
    write_voxel_volume(&files.voxels, &scene.gt)?;
    write_camera(&files.camera, &scene.camera)?;
    write_image(&files.image, &scene.image)?;
    write_labels(&files.labels, &scene.labels)?;
    Ok(())
}

/// Read one scene from a split directory.
pub fn read_scene(dir: &Path, index: usize, meta: &DatasetMeta) -> Result<ScenePair> {
    let files = SceneFiles::new(dir, index);
    let gt = read_voxel_volume(&files.voxels, meta.grid_shape, meta.voxel_size, meta.grid_origin)?;
    let camera = read_camera(&files.camera, meta.image_size)?;
    let image = read_image(&files.image)?;
    let labels = read_labels(&files.labels, &gt)?;
    Ok(ScenePair { image, camera, gt, labels, placement_shortfall: false })
}
