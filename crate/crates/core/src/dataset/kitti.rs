//! SemanticKITTI-format ingestion: 256x256x32 voxel label volumes, the left
//! color image and the odometry-style calibration file.

use super::layout::read_image;
use crate::geometry::{CameraModel, VoxelGrid};
use crate::synth::ScenePair;
use crate::{Error, Result};
use byteorder::{LittleEndian, ReadBytesExt};
use std::fs;
use std::io::BufReader;
use std::path::Path;

pub const KITTI_GRID_SHAPE: (usize, usize, usize) = (256, 256, 32);
pub const KITTI_VOXEL_SIZE: f64 = 0.2;
/// Grid origin in the sensor frame: x forward, y left, z up.
pub const KITTI_GRID_ORIGIN: [f64; 3] = [0.0, -25.6, -2.0];

/// Raw-to-internal class id remapping. Raw ids in `ignore_raw` (and any raw
/// id explicitly mapped to `ignore_id`) become `ignore_id`, which is
/// excluded from losses and metrics. Raw 0 always maps to free.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KittiRemap {
    pub map: Vec<(u16, u16)>,
    pub ignore_raw: Vec<u16>,
    pub ignore_id: u16,
}

impl KittiRemap {
    pub fn remap(&self, raw: u16) -> Result<u16> {
        if raw == 0 {
            return Ok(0);
        }
        if self.ignore_raw.contains(&raw) {
            return Ok(self.ignore_id);
        }
        self.map
            .iter()
            .find(|(from, _)| *from == raw)
            .map(|(_, to)| *to)
            .ok_or(Error::UnknownClassId(raw))
    }
}

/// The 19-class remap: ids 1-10 are the detectable foreground categories
/// (car, bicycle, motorcycle, truck, other-vehicle, person, bicyclist,
/// motorcyclist, pole, traffic-sign), ids 11-19 the background categories
/// (road, parking, sidewalk, other-ground, building, fence, vegetation,
/// trunk, terrain).
pub fn default_kitti_remap() -> KittiRemap {
    KittiRemap {
        map: vec![
            (10, 1),  // car
            (11, 2),  // bicycle
            (15, 3),  // motorcycle
            (18, 4),  // truck
            (20, 5),  // other-vehicle
            (30, 6),  // person
            (31, 7),  // bicyclist
            (32, 8),  // motorcyclist
            (80, 9),  // pole
            (81, 10), // traffic-sign
            (40, 11), // road
            (44, 12), // parking
            (48, 13), // sidewalk
            (49, 14), // other-ground
            (50, 15), // building
            (51, 16), // fence
            (70, 17), // vegetation
            (71, 18), // trunk
            (72, 19), // terrain
        ],
        ignore_raw: vec![1, 255],
        ignore_id: 20,
    }
}

/// Default foreground/background split matching [`default_kitti_remap`].
pub fn default_kitti_split() -> crate::labelgen::CategorySplit {
    crate::labelgen::CategorySplit::new((1..=10).collect(), (11..=19).collect())
        .expect("static split is valid")
}

/// Load one frame from a SemanticKITTI-layout directory
/// (`<dir>/sequences/<seq>/{voxels,image_2}/<frame>.{label,png}` plus
/// `calib.txt`). Labels are remapped to internal ids; unknown-labeled
/// voxels become the remap's ignore id.
pub fn load_semantickitti(
    dir: &Path,
    sequence: &str,
    frame_id: usize,
    remap: &KittiRemap,
) -> Result<ScenePair> {
    let seq = dir.join("sequences").join(sequence);
    let label_path = seq.join("voxels").join(format!("{frame_id:06}.label"));
    let image_path = seq.join("image_2").join(format!("{frame_id:06}.png"));
    let calib_path = seq.join("calib.txt");

    let (sd, sw, sh) = KITTI_GRID_SHAPE;
    let n = sd * sw * sh;
    let mut raw = vec![0u16; n];
    let mut r = BufReader::new(
        fs::File::open(&label_path)
            .map_err(|e| Error::Dataset(format!("missing {label_path:?}: {e}")))?,
    );
    r.read_u16_into::<LittleEndian>(&mut raw)
        .map_err(|e| Error::Dataset(format!("short label volume {label_path:?}: {e}")))?;

    let mut labels = vec![0u16; n];
    for (dst, &src) in labels.iter_mut().zip(raw.iter()) {
        *dst = remap.remap(src)?;
    }
    let gt = VoxelGrid::from_labels(KITTI_GRID_SHAPE, KITTI_VOXEL_SIZE, KITTI_GRID_ORIGIN, labels)?;

    let image = read_image(&image_path)?;
    let camera = read_kitti_calib(&calib_path, (image.width, image.height))?;

    Ok(ScenePair { image, camera, gt, labels: Vec::new(), placement_shortfall: false })
}

/// Parse an odometry-style `calib.txt`: `P2` gives the left color camera
/// projection, `Tr` the rigid sensor-to-rectified-camera transform. The
/// camera baseline offset folded into P2's fourth column is absorbed into
/// the extrinsics translation.
fn read_kitti_calib(path: &Path, image_size: (usize, usize)) -> Result<CameraModel> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Dataset(format!("missing calib {path:?}: {e}")))?;
    let mut p2: Option<Vec<f64>> = None;
    let mut tr: Option<Vec<f64>> = None;
    for line in text.lines() {
        let mut parts = line.split_whitespace();
        let key = match parts.next() {
            Some(k) => k.trim_end_matches(':'),
            None => continue,
        };
        let vals: Vec<f64> = parts.filter_map(|t| t.parse().ok()).collect();
        match key {
            "P2" => p2 = Some(vals),
            "Tr" => tr = Some(vals),
            _ => {}
        }
    }
    let p2 = p2.filter(|v| v.len() == 12).ok_or_else(|| {
        Error::Dataset(format!("calib {path:?} lacks a 12-value P2 entry"))
    })?;
    let tr = tr.filter(|v| v.len() == 12).ok_or_else(|| {
        Error::Dataset(format!("calib {path:?} lacks a 12-value Tr entry"))
    })?;

    let (fx, cx, fy, cy) = (p2[0], p2[2], p2[5], p2[6]);
    // P2 = K [I | t_cam]; recover t_cam from the fourth column.
    let tz = p2[11];
    let tx = (p2[3] - cx * tz) / fx;
    let ty = (p2[7] - cy * tz) / fy;

    let rotation = [
        [tr[0], tr[1], tr[2]],
        [tr[4], tr[5], tr[6]],
        [tr[8], tr[9], tr[10]],
    ];
    let translation = [tr[3] + tx, tr[7] + ty, tr[11] + tz];
    CameraModel::new(fx, fy, cx, cy, rotation, translation, image_size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use byteorder::WriteBytesExt;
    use std::io::Write;

    fn write_fake_frame(
        root: &Path,
        seq: &str,
        frame: usize,
        labels: &[u16],
    ) -> std::io::Result<()> {
        let seq_dir = root.join("sequences").join(seq);
        fs::create_dir_all(seq_dir.join("voxels"))?;
        fs::create_dir_all(seq_dir.join("image_2"))?;
        let mut f = fs::File::create(seq_dir.join("voxels").join(format!("{frame:06}.label")))?;
        for &v in labels {
            f.write_u16::<LittleEndian>(v)?;
        }
        let img = image::RgbImage::new(16, 8);
        img.save(seq_dir.join("image_2").join(format!("{frame:06}.png"))).unwrap();
        let mut c = fs::File::create(seq_dir.join("calib.txt"))?;
        writeln!(c, "P2: 700.0 0.0 600.0 45.0 0.0 700.0 180.0 -0.1 0.0 0.0 1.0 0.003")?;
        writeln!(c, "Tr: 0.0 -1.0 0.0 -0.01 0.0 0.0 -1.0 -0.07 1.0 0.0 0.0 -0.27")?;
        Ok(())
    }

    #[test]
    fn all_free_frame_loads_as_zero_grid() {
        let dir = tempfile::tempdir().unwrap();
        let n = 256 * 256 * 32;
        write_fake_frame(dir.path(), "00", 0, &vec![0u16; n]).unwrap();
        let scene =
            load_semantickitti(dir.path(), "00", 0, &default_kitti_remap()).unwrap();
        assert!(scene.gt.labels().iter().all(|&v| v == 0));
        assert_eq!(scene.gt.shape(), KITTI_GRID_SHAPE);
    }

    #[test]
    fn remap_covers_paper_categories_and_flags_unknown() {
        let remap = default_kitti_remap();
        assert_eq!(remap.remap(10).unwrap(), 1); // car
        assert_eq!(remap.remap(81).unwrap(), 10); // traffic-sign
        assert_eq!(remap.remap(72).unwrap(), 19); // terrain
        assert_eq!(remap.remap(255).unwrap(), remap.ignore_id);
        assert!(matches!(remap.remap(999), Err(Error::UnknownClassId(999))));

        let split = default_kitti_split();
        assert_eq!(split.foreground.len(), 10);
        assert_eq!(split.background.len(), 9);
    }

    #[test]
    fn labels_and_calibration_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let n = 256 * 256 * 32;
        let mut raw = vec![0u16; n];
        raw[0] = 10; // car
        raw[5] = 40; // road
        raw[9] = 255; // unknown
        write_fake_frame(dir.path(), "03", 7, &raw).unwrap();
        let remap = default_kitti_remap();
        let scene = load_semantickitti(dir.path(), "03", 7, &remap).unwrap();
        assert_eq!(scene.gt.labels()[0], 1);
        assert_eq!(scene.gt.labels()[5], 11);
        assert_eq!(scene.gt.labels()[9], remap.ignore_id);

        let cam = &scene.camera;
        assert_eq!(cam.fx, 700.0);
        assert_eq!(cam.cy, 180.0);
        // Baseline offset from P2 column 4 absorbed into translation.
        assert!((cam.translation[0] - (-0.01 + (45.0 - 600.0 * 0.003) / 700.0)).abs() < 1e-12);
        assert!((cam.translation[2] - (-0.27 + 0.003)).abs() < 1e-12);
    }

    #[test]
    fn missing_and_short_files_error() {
        let dir = tempfile::tempdir().unwrap();
        let remap = default_kitti_remap();
        assert!(load_semantickitti(dir.path(), "00", 0, &remap).is_err());
        // Short volume.
        let seq = dir.path().join("sequences/00");
        fs::create_dir_all(seq.join("voxels")).unwrap();
        fs::write(seq.join("voxels/000000.label"), [0u8; 64]).unwrap();
        assert!(load_semantickitti(dir.path(), "00", 0, &remap).is_err());
    }
}
