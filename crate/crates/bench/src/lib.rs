//! Fixed inputs shared by the benchmarks.

use naecut::formula::CnfFormula;
use naecut::graphs::Graph;
use naecut::reduction::build_graph;
use naecut::solvers::{generate_graph, generate_instance};
use naecut::transform::split_repeated_variables;

pub const SEED: u64 = 2024;

/// Random monotone 3-CNF with `n` variables and `m` clauses.
pub fn formula(n: u32, m: usize) -> CnfFormula {
    generate_instance(SEED, n, m, false).expect("benchmark instance")
}

/// Reduced graph of [`formula`]`(n, m)`.
pub fn reduced_graph(n: u32, m: usize) -> Graph {
    let (tf, _) = split_repeated_variables(&formula(n, m)).expect("monotone input");
    build_graph(&tf).expect("transform output").0
}

pub fn random_graph(n: usize, percent: u64) -> Graph {
    generate_graph(SEED, n, percent)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_stable() {
        assert_eq!(formula(10, 12), formula(10, 12));
        let g = reduced_graph(10, 12);
        assert!(g.max_degree() <= 8);
        assert_eq!(random_graph(20, 30).num_vertices(), 20);
    }
}
