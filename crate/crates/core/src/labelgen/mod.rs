//! Ground-truth label extraction: distance-based clustering of semantic
//! voxels, occlusion-aware visibility, and per-object 2D/3D boxes.

mod cluster;
mod extract;
mod visibility;

pub use cluster::cluster_objects;
pub use extract::{extract_labels, CategorySplit, ObjectLabel};
pub use visibility::{visibility_mask, VisibilityMask};
