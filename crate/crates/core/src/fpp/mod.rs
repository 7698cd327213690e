//! First-passage percolation and Bernoulli bond percolation on the Delaunay graph.

mod geodesic;
mod percolation;
mod segment;
mod surgery;
mod times;
mod variance;

pub use geodesic::{passage_time, shortest_path, Geodesic};
pub use percolation::{
    cluster_tail, good_box_y, open_cluster, path_density_probe, sparse_path_exists, BondField,
    ClusterTail, ClusterTailConfig, DensityRow, GoodBox, PathDensityConfig, TailRow,
};
pub use segment::{segment_walk, z_n, ZnResult};
pub use surgery::{surgery_insert, surgery_remove, SurgeryOutcome};
pub use times::{assign_times, EdgeTimeDist, TimedGraph};
pub(crate) use variance::{
    cell as variance_cell, decompose as variance_decompose, log_slope as variance_log_slope,
};
pub use variance::{variance_experiment, VarianceConfig, VarianceRow, VarianceTable};
