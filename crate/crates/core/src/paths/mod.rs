//! Self-avoiding paths, edge perturbation regions and the ball walk.

mod gamma;
mod sa;
mod walk;

pub use gamma::{
    edge_region, gamma_edge_membership, gamma_edge_oracle, gamma_path_area, gamma_path_membership,
    lens_area, EdgeRegion, GammaArea,
};
pub use sa::{
    count_sa_paths, covering_extremes, degree_product_bound_check, for_each_sa_path,
    for_each_sa_prefix, kappa, CoveringExtremes, DegreeBound, SaPath,
};
pub use walk::ball_walk;
