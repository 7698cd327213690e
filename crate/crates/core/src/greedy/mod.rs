//! Vertex weights, the nice-function calculus and greedy polyominoes.

mod calculus;
mod polyomino;
mod weight;

pub use calculus::{
    log_grid, nice_exponent_probe, pseudo_inverse, pseudo_inverse_auto, ExponentRow, NiceCalc,
    PseudoInverse, PSEUDO_INVERSE_TOL,
};
pub use polyomino::{
    enum_polyominoes, f_n_beam, f_n_beam_all, f_n_exact, for_each_polyomino, Polyomino,
};
pub use weight::WeightFn;
