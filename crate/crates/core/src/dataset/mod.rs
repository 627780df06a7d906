//! On-disk dataset layout and external-format ingestion.

mod kitti;
mod layout;

pub use kitti::{default_kitti_remap, load_semantickitti, KittiRemap};
pub use layout::{
    read_meta, read_scene, read_voxel_volume, write_meta, write_scene, write_voxel_volume,
    DatasetMeta, SceneFiles,
};
