//! Graph models: heterogeneous random graphs with reciprocal edge weights,
//! the weighted star and volume weights with the bipartite counterexample.

pub mod gnpij;
pub mod star;
pub mod volume;

pub use gnpij::{
    chernoff_k, concentration_test, gen_gnpij, rescale_to_remark, ConcentrationReport, ProbKind,
    ProbMatrixSpec,
};
pub use star::make_star;
pub use volume::{
    check_volume_regular, make_counterexample, volume_deviation, volume_weights, Counterexample,
    VolumeDeviation, VolumeVerdict,
};
