//! Boxes, grids, camera projection, GIoU, subdivision and occupancy
//! pyramids. Everything here is a pure function over immutable inputs.

mod boxes;
mod camera;
mod grid;
mod pyramid;
mod resample;

pub use boxes::{giou2d, giou3d, giou_aabb, Box2D, Box3D, Frame};
pub use camera::{camera_to_grid, project_point, project_points, CameraModel, ProjectedPoint};
pub use grid::VoxelGrid;
pub use pyramid::{build_occupancy_pyramid, OccupancyPyramid};
pub use resample::{resample_local_grid, LocalGrid};
