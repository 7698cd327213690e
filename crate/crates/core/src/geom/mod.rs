//! Poisson sampling and planar Delaunay/Voronoi geometry.

mod delaunay;
mod graph;
mod point_set;
pub mod predicates;
pub mod voronoi;

pub use delaunay::{
    build_delaunay, mean_degree, sample_delaunay, Circumdisk, Triangulation, NO_TRIANGLE,
};
pub use graph::{delaunay_graph_small, DelaunayGraph};
pub use point_set::{sample_poisson, IntensityModel, Point, PointSet, Rect, Window};
