//! Graphs derived from a complex: the containment graph G₁, the connection graph G′,
//! and unit spheres in G₁.

use serde::Serialize;

use crate::cliques::{self, Adjacency};
use crate::complex::{whitney_of_adjacency, GraphSpec, SimplicialComplex, DEFAULT_FACE_CAP};
use crate::error::{Error, Result};
use crate::linalg::{int, ExactMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Refinement,
    Connection,
}

/// A simple graph on the face indices of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedGraph {
    kind: GraphKind,
    adjacency: Adjacency,
}

impl DerivedGraph {
    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.len()).map(|i| self.adjacency.degree(i)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.edge_count()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency.has_edge(a, b)
    }

    /// 0/1 adjacency matrix with zero diagonal.
    pub fn adjacency_matrix(&self) -> ExactMatrix {
        let n = self.len();
        let mut m = ExactMatrix::zeros(n, n);
        for i in 0..n {
            for &j in self.adjacency.neighbors(i) {
                m.set(i, j, int(1));
            }
        }
        m
    }

    pub fn to_graph_spec(&self) -> GraphSpec {
        let edges = (0..self.len())
            .flat_map(|i| self.adjacency.neighbors(i).iter().filter(move |&&j| j > i).map(move |&j| (i, j)));
        GraphSpec::new(self.len(), edges).expect("derived graphs are simple")
    }

    /// χ of the Whitney complex of this graph, counted without building it.
    pub fn clique_euler_characteristic(&self) -> i64 {
        cliques::clique_euler_characteristic(&self.adjacency)
    }
}

/// Faces joined when one strictly contains the other.
pub fn refinement_graph(c: &SimplicialComplex) -> DerivedGraph {
    DerivedGraph { kind: GraphKind::Refinement, adjacency: c.containment_adjacency() }
}

/// Distinct faces joined when they share a vertex.
pub fn connection_graph(c: &SimplicialComplex) -> DerivedGraph {
    let n = c.len();
    let faces = c.faces();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if faces[i].intersects(&faces[j]) {
                edges.push((i, j));
            }
        }
    }
    DerivedGraph { kind: GraphKind::Connection, adjacency: Adjacency::from_edges(n, edges) }
}

/// Unit sphere of a face in G₁, split into proper subsets and proper supersets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereDecomposition {
    pub center: usize,
    pub full: Vec<usize>,
    pub sub: Vec<usize>,
    pub sup: Vec<usize>,
}

fn check_index(c: &SimplicialComplex, x: usize) -> Result<()> {
    if x >= c.len() {
        return Err(Error::IndexOutOfRange { index: x, len: c.len() });
    }
    Ok(())
}

pub fn unit_sphere(c: &SimplicialComplex, x: usize) -> Result<SphereDecomposition> {
    check_index(c, x)?;
    let fx = c.face(x);
    let sub: Vec<usize> = (0..c.len()).filter(|&y| c.face(y).is_proper_subset_of(fx)).collect();
    let sup: Vec<usize> = (0..c.len()).filter(|&y| fx.is_proper_subset_of(c.face(y))).collect();
    let mut full: Vec<usize> = sub.iter().chain(&sup).copied().collect();
    full.sort_unstable();
    Ok(SphereDecomposition { center: x, full, sub, sup })
}

/// Precomputed χ of the full, sub and super spheres of every face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereTable {
    pub full: Vec<i64>,
    pub sub: Vec<i64>,
    pub sup: Vec<i64>,
}

impl SphereTable {
    pub fn new(c: &SimplicialComplex) -> Self {
        let g1 = c.containment_adjacency();
        let mut table = SphereTable { full: Vec::new(), sub: Vec::new(), sup: Vec::new() };
        for x in 0..c.len() {
            let s = unit_sphere(c, x).expect("index in range");
            table.full.push(induced_euler(&g1, &s.full));
            table.sub.push(induced_euler(&g1, &s.sub));
            table.sup.push(induced_euler(&g1, &s.sup));
        }
        table
    }
}

/// χ of the Whitney complex of the subgraph induced on `vertices` (sorted).
pub fn induced_euler(adj: &Adjacency, vertices: &[usize]) -> i64 {
    cliques::clique_euler_characteristic(&adj.induced(vertices))
}

/// χ of the unit sphere of face `x` as a subcomplex of G₁.
pub fn sphere_euler(c: &SimplicialComplex, x: usize) -> Result<i64> {
    let s = unit_sphere(c, x)?;
    Ok(induced_euler(&c.containment_adjacency(), &s.full))
}

/// The unit sphere as a materialized complex; its vertices are face indices of `c`.
pub fn sphere_complex(c: &SimplicialComplex, x: usize) -> Result<SimplicialComplex> {
    let s = unit_sphere(c, x)?;
    let induced = c.containment_adjacency().induced(&s.full);
    let local = whitney_of_adjacency(&induced, DEFAULT_FACE_CAP)?;
    let maximal: Vec<Vec<usize>> = local
        .facets()
        .into_iter()
        .map(|i| local.face(i).vertices().iter().map(|&v| s.full[v]).collect())
        .collect();
    SimplicialComplex::from_maximal_faces(&maximal)
}

/// `x` together with its neighbors in G′, ascending.
pub fn connection_ball(c: &SimplicialComplex, x: usize) -> Result<Vec<usize>> {
    check_index(c, x)?;
    let fx = c.face(x);
    Ok((0..c.len()).filter(|&y| y == x || c.face(y).intersects(fx)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn k2_graphs() {
        let k2 = fixtures::complete_complex(2);
        let r = refinement_graph(&k2);
        assert_eq!((r.len(), r.edge_count()), (3, 2));
        let c = connection_graph(&k2);
        assert_eq!(c.edge_count(), 2);
        assert_eq!(c.degrees(), vec![1, 1, 2]);
    }

    #[test]
    fn k3_refinement_and_single_vertex() {
        let k3 = fixtures::complete_complex(3);
        assert_eq!(refinement_graph(&k3).edge_count(), 12);
        let k1 = fixtures::complete_complex(1);
        assert_eq!(refinement_graph(&k1).edge_count(), 0);
    }

    #[test]
    fn octahedron_connection_graph_has_zero_euler_characteristic() {
        let g = connection_graph(&fixtures::octahedron());
        assert_eq!(g.clique_euler_characteristic(), 0);
    }

    #[test]
    fn spheres_of_k3() {
        let k3 = fixtures::complete_complex(3);
        let top = unit_sphere(&k3, 6).unwrap();
        assert_eq!(top.full.len(), 6);
        assert!(top.sup.is_empty());
        assert_eq!(sphere_euler(&k3, 6).unwrap(), 0);
        assert_eq!(sphere_euler(&k3, 0).unwrap(), 1);
        let k2 = fixtures::complete_complex(2);
        let s = unit_sphere(&k2, 0).unwrap();
        assert_eq!(s.full, vec![2]);
        assert_eq!(sphere_euler(&k2, 0).unwrap(), 1);
    }

    #[test]
    fn materialized_sphere_agrees_with_streaming_count() {
        for (_, c) in fixtures::corpus().unwrap() {
            let table = SphereTable::new(&c);
            for x in 0..c.len() {
                let s = sphere_complex(&c, x).unwrap();
                assert_eq!(s.euler_characteristic(), table.full[x]);
            }
        }
    }

    #[test]
    fn sphere_identities_on_corpus() {
        for (_, c) in fixtures::corpus().unwrap() {
            let t = SphereTable::new(&c);
            let g1 = refinement_graph(&c);
            let gp = connection_graph(&c);
            for x in 0..c.len() {
                let sign = c.face(x).sign();
                assert_eq!(1 - t.sub[x], sign);
                assert_eq!(1 - t.full[x], (1 - t.sub[x]) * (1 - t.sup[x]));
                assert_eq!(connection_ball(&c, x).unwrap().len(), gp.degrees()[x] + 1);
                for &y in g1.adjacency().neighbors(x) {
                    assert!(gp.has_edge(x, y));
                }
            }
        }
    }

    #[test]
    fn facet_spheres_are_boundary_spheres() {
        let c = fixtures::icosahedron();
        for x in c.facets() {
            assert_eq!(sphere_euler(&c, x).unwrap(), 1 - c.face(x).sign());
        }
    }

    #[test]
    fn balls() {
        let k3 = fixtures::complete_complex(3);
        assert_eq!(connection_ball(&k3, 6).unwrap().len(), 7);
        let pts = SimplicialComplex::from_maximal_faces(&[vec![0], vec![1]]).unwrap();
        assert_eq!(connection_ball(&pts, 1).unwrap(), vec![1]);
        assert!(connection_ball(&pts, 2).is_err());
    }
}
