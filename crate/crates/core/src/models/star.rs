use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Star on `n` vertices centred at vertex 0 with `μ(0) = 1/2`,
/// `μ(leaf) = 1/(2(n−1))` and `ρ ≡ n/2`.
pub fn make_star(n: usize) -> Result<WeightedGraph> {
    if n < 2 {
        return Err(Error::Parameter(format!("a star needs n >= 2 vertices, got {n}")));
    }
    let mut mu = vec![1.0 / (2.0 * (n as f64 - 1.0)); n];
    mu[0] = 0.5;
    let rho = n as f64 / 2.0;
    WeightedGraph::new(mu, (1..n).map(|v| (0, v, rho)))
}
