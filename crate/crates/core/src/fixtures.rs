//! Named graphs and complexes used throughout the tests and the CLI.

use crate::complex::{GraphSpec, SimplicialComplex};
use crate::error::Result;

pub fn complete_graph(k: usize) -> GraphSpec {
    let edges = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j)));
    GraphSpec::new(k, edges).expect("complete graph is valid")
}

pub fn cycle_graph(k: usize) -> GraphSpec {
    GraphSpec::new(k, (0..k).map(|i| (i, (i + 1) % k))).expect("cycle graph is valid")
}

/// K_{2,2,2}: all pairs except the antipodal ones (0,1), (2,3), (4,5).
pub fn octahedron_graph() -> GraphSpec {
    let edges = (0..6)
        .flat_map(|i| (i + 1..6).map(move |j| (i, j)))
        .filter(|&(i, j)| !(i % 2 == 0 && j == i + 1));
    GraphSpec::new(6, edges).expect("octahedron is valid")
}

/// Apex 0, upper pentagon 1..=5, lower pentagon 6..=10, apex 11.
pub fn icosahedron_graph() -> GraphSpec {
    let up = |i: usize| 1 + i % 5;
    let lo = |i: usize| 6 + i % 5;
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((0, up(i)));
        edges.push((up(i), up(i + 1)));
        edges.push((up(i), lo(i)));
        edges.push((up(i), lo(i + 1)));
        edges.push((lo(i), lo(i + 1)));
        edges.push((lo(i), 11));
    }
    GraphSpec::new(12, edges).expect("icosahedron is valid")
}

pub fn complete_complex(k: usize) -> SimplicialComplex {
    SimplicialComplex::whitney(&complete_graph(k)).expect("small complete complex")
}

pub fn cycle_complex(k: usize) -> SimplicialComplex {
    SimplicialComplex::whitney(&cycle_graph(k)).expect("cycle complex")
}

pub fn octahedron() -> SimplicialComplex {
    SimplicialComplex::whitney(&octahedron_graph()).expect("octahedron complex")
}

pub fn icosahedron() -> SimplicialComplex {
    SimplicialComplex::whitney(&icosahedron_graph()).expect("icosahedron complex")
}

/// Graph fixture by name: `k<n>`, `c<n>`, `octahedron`, `icosahedron`.
pub fn named_graph(name: &str) -> Option<GraphSpec> {
    match name {
        "octahedron" => Some(octahedron_graph()),
        "icosahedron" => Some(icosahedron_graph()),
        _ => {
            let (kind, rest) = name.split_at(1);
            let k: usize = rest.parse().ok()?;
            match kind {
                "k" | "K" => Some(complete_graph(k)),
                "c" | "C" if k >= 3 => Some(cycle_graph(k)),
                _ => None,
            }
        }
    }
}

/// The fixture corpus: K1, K2, K3, C4, octahedron, icosahedron.
pub fn corpus() -> Result<Vec<(String, SimplicialComplex)>> {
    ["k1", "k2", "k3", "c4", "octahedron", "icosahedron"]
        .iter()
        .map(|n| Ok((n.to_string(), SimplicialComplex::whitney(&named_graph(n).unwrap())?)))
        .collect()
}
