//! Finite abstract simplicial complexes and their combinatorial invariants.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cliques::{self, Adjacency};
use crate::error::{Error, Result};

/// Largest complex the constructors will materialize unless told otherwise.
pub const DEFAULT_FACE_CAP: usize = 5000;

/// A nonempty finite set of vertex identifiers, stored strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Face(Vec<usize>);

impl Face {
    /// Sorts and deduplicates `vertices`; rejects the empty set.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidFace("empty vertex set".into()));
        }
        vertices.sort_unstable();
        vertices.dedup();
        Ok(Face(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// (-1)^dim.
    pub fn sign(&self) -> i64 {
        if self.dim().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &Face) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().all(|v| other.contains_vertex(*v))
    }

    pub fn is_proper_subset_of(&self, other: &Face) -> bool {
        self.0.len() < other.0.len() && self.is_subset_of(other)
    }

    pub fn intersects(&self, other: &Face) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return true,
            }
        }
        false
    }

    /// Codimension-one faces, the `i`-th obtained by dropping the `i`-th vertex.
    pub fn boundary(&self) -> Vec<Face> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|i| {
                let mut v = self.0.clone();
                v.remove(i);
                Face(v)
            })
            .collect()
    }
}

impl TryFrom<Vec<usize>> for Face {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Face::new(v)
    }
}

impl From<Face> for Vec<usize> {
    fn from(f: Face) -> Self {
        f.0
    }
}

impl Ord for Face {
    /// Canonical order: by dimension, then lexicographically by vertex list.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A simple undirected graph used as input for Whitney complexes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphSpec {
    #[serde(rename = "n")]
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl GraphSpec {
    /// Validates and normalizes the edge list (each pair stored as `(min, max)`).
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) out of range for {vertex_count} vertices"
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(GraphSpec { vertex_count, edges: set })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::from_edges(self.vertex_count, self.edges())
    }
}

/// A finite abstract simplicial complex with faces held in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    faces: Vec<Face>,
    index: HashMap<Face, usize>,
    fvector: Vec<usize>,
}

impl SimplicialComplex {
    /// The complex with no faces.
    pub fn empty() -> Self {
        Self::from_sorted_unique(Vec::new())
    }

    fn from_sorted_unique(faces: Vec<Face>) -> Self {
        let index = faces.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        let mut fvector = Vec::new();
        for f in &faces {
            if fvector.len() <= f.dim() {
                fvector.resize(f.dim() + 1, 0);
            }
            fvector[f.dim()] += 1;
        }
        SimplicialComplex { faces, index, fvector }
    }

    /// Builds a complex from a complete face list; fails if it is not closed under subsets.
    pub fn from_faces(faces: Vec<Face>) -> Result<Self> {
        let set: BTreeSet<Face> = faces.into_iter().collect();
        for f in &set {
            for b in f.boundary() {
                if !set.contains(&b) {
                    return Err(Error::InvalidFace(format!(
                        "face {:?} is missing its subset {:?}",
                        f.vertices(),
                        b.vertices()
                    )));
                }
            }
        }
        Ok(Self::from_sorted_unique(set.into_iter().collect()))
    }

    /// Downward closure of the given vertex sets.
    pub fn from_maximal_faces(maximal: &[Vec<usize>]) -> Result<Self> {
        Self::from_maximal_faces_capped(maximal, DEFAULT_FACE_CAP)
    }

    pub fn from_maximal_faces_capped(maximal: &[Vec<usize>], cap: usize) -> Result<Self> {
        let mut set: HashSet<Face> = HashSet::new();
        for m in maximal {
            let top = Face::new(m.clone())?;
            let k = top.len();
            if k >= usize::BITS as usize || (1usize << k) - 1 > cap {
                return Err(Error::SizeCapExceeded { cap });
            }
            for mask in 1usize..(1 << k) {
                let v = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| top.0[i]).collect();
                set.insert(Face(v));
            }
            if set.len() > cap {
                return Err(Error::SizeCapExceeded { cap });
            }
        }
        let mut faces: Vec<Face> = set.into_iter().collect();
        faces.sort();
        Ok(Self::from_sorted_unique(faces))
    }

    /// Whitney (clique) complex of a graph.
    pub fn whitney(graph: &GraphSpec) -> Result<Self> {
        Self::whitney_capped(graph, DEFAULT_FACE_CAP)
    }

    pub fn whitney_capped(graph: &GraphSpec, cap: usize) -> Result<Self> {
        whitney_of_adjacency(&graph.adjacency(), cap)
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> &Face {
        &self.faces[i]
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn fvector(&self) -> &[usize] {
        &self.fvector
    }

    pub fn dim(&self) -> Option<usize> {
        self.fvector.len().checked_sub(1)
    }

    pub fn index_of(&self, face: &Face) -> Option<usize> {
        self.index.get(face).copied()
    }

    /// Dimensions aligned with the canonical face order.
    pub fn dims(&self) -> Vec<usize> {
        self.faces.iter().map(Face::dim).collect()
    }

    /// Sorted list of vertex identifiers appearing in the complex.
    pub fn vertex_ids(&self) -> Vec<usize> {
        self.faces.iter().filter(|f| f.len() == 1).map(|f| f.0[0]).collect()
    }

    /// Faces that are maximal under inclusion.
    pub fn facets(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| !self.faces.iter().any(|g| self.faces[i].is_proper_subset_of(g)))
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.faces.iter().map(Face::sign).sum()
    }

    /// Whitney complex of the containment graph: vertices are face indices, faces are chains.
    pub fn barycentric_refinement(&self) -> Result<Self> {
        whitney_of_adjacency(&self.containment_adjacency(), DEFAULT_FACE_CAP)
    }

    /// Strict-containment graph on face indices.
    pub fn containment_adjacency(&self) -> Adjacency {
        let n = self.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.faces[i].is_proper_subset_of(&self.faces[j]) {
                    edges.push((i, j));
                }
            }
        }
        Adjacency::from_edges(n, edges)
    }

    /// Zykov join; the vertices of `other` are shifted above the largest vertex of `self`.
    pub fn join(&self, other: &Self) -> Result<Self> {
        let total = self.len() + other.len() + self.len() * other.len();
        if total > DEFAULT_FACE_CAP {
            return Err(Error::SizeCapExceeded { cap: DEFAULT_FACE_CAP });
        }
        let offset = self.vertex_ids().last().map_or(0, |m| m + 1);
        let shifted: Vec<Face> = other
            .faces
            .iter()
            .map(|f| Face(f.0.iter().map(|v| v + offset).collect()))
            .collect();
        let mut faces: Vec<Face> = self.faces.clone();
        faces.extend(shifted.iter().cloned());
        for x in &self.faces {
            for y in &shifted {
                let mut v = x.0.clone();
                v.extend_from_slice(&y.0);
                faces.push(Face(v));
            }
        }
        faces.sort();
        Ok(Self::from_sorted_unique(faces))
    }

    /// Order complex of the product poset of faces; the pair `(i, j)` of face indices
    /// becomes vertex `i * other.len() + j`.
    pub fn cartesian_product(&self, other: &Self) -> Result<Self> {
        let (n, m) = (self.len(), other.len());
        let id = |i: usize, j: usize| i * m + j;
        let mut edges = Vec::new();
        for i in 0..n {
            for k in 0..n {
                if !(i == k || self.faces[i].is_proper_subset_of(&self.faces[k])) {
                    continue;
                }
                for j in 0..m {
                    for l in 0..m {
                        if (i, j) == (k, l) {
                            continue;
                        }
                        if j == l || other.faces[j].is_proper_subset_of(&other.faces[l]) {
                            edges.push((id(i, j), id(k, l)));
                        }
                    }
                }
            }
        }
        whitney_of_adjacency(&Adjacency::from_edges(n * m, edges), DEFAULT_FACE_CAP)
    }

    /// Whitney complex of a G(n, p) random graph; deterministic in `(n, p, seed)`.
    pub fn erdos_renyi_whitney(n: usize, p: f64, seed: u64) -> Result<Self> {
        Self::whitney(&erdos_renyi_graph(n, p, seed)?)
    }
}

/// G(n, p) random graph drawn with a seeded ChaCha8 stream, pairs visited in lexicographic order.
pub fn erdos_renyi_graph(n: usize, p: f64, seed: u64) -> Result<GraphSpec> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    GraphSpec::new(n, edges)
}

/// Maximal cliques via Bron–Kerbosch followed by subset closure.
pub(crate) fn whitney_of_adjacency(adj: &Adjacency, cap: usize) -> Result<SimplicialComplex> {
    let maximal = cliques::maximal_cliques(adj);
    SimplicialComplex::from_maximal_faces_capped(&maximal, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closure(m: &[&[usize]]) -> SimplicialComplex {
        let v: Vec<Vec<usize>> = m.iter().map(|s| s.to_vec()).collect();
        SimplicialComplex::from_maximal_faces(&v).unwrap()
    }

    #[test]
    fn triangle_closure_has_seven_faces() {
        let c = closure(&[&[0, 1, 2]]);
        let faces: Vec<Vec<usize>> = c.faces().iter().map(|f| f.vertices().to_vec()).collect();
        assert_eq!(
            faces,
            vec![vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]]
        );
        assert_eq!(c.fvector(), &[3, 3, 1]);
    }

    #[test]
    fn two_points_and_path() {
        assert_eq!(closure(&[&[0], &[1]]).len(), 2);
        let path = closure(&[&[0, 1], &[1, 2]]);
        assert_eq!(path.len(), 5);
        assert_eq!(path.fvector(), &[3, 2]);
    }

    #[test]
    fn empty_set_is_rejected() {
        let err = SimplicialComplex::from_maximal_faces(&[vec![0, 1], vec![]]).unwrap_err();
        assert!(matches!(err, Error::InvalidFace(_)));
    }

    #[test]
    fn closure_is_idempotent() {
        let c = closure(&[&[0, 1, 2], &[2, 3]]);
        let again: Vec<Vec<usize>> = c.faces().iter().map(|f| f.vertices().to_vec()).collect();
        assert_eq!(SimplicialComplex::from_maximal_faces(&again).unwrap(), c);
    }

    #[test]
    fn from_faces_requires_closure() {
        let faces = vec![Face::new(vec![0, 1]).unwrap(), Face::new(vec![0]).unwrap()];
        assert!(SimplicialComplex::from_faces(faces).is_err());
    }

    #[test]
    fn whitney_of_isolated_vertices() {
        let g = GraphSpec::new(3, []).unwrap();
        let c = SimplicialComplex::whitney(&g).unwrap();
        assert_eq!(c.fvector(), &[3]);
        assert_eq!(c.euler_characteristic(), 3);
    }

    #[test]
    fn graph_validation() {
        assert!(GraphSpec::new(2, [(0, 0)]).is_err());
        assert!(GraphSpec::new(2, [(0, 2)]).is_err());
    }

    #[test]
    fn empty_complex_has_zero_euler_characteristic() {
        let c = SimplicialComplex::empty();
        assert_eq!(c.euler_characteristic(), 0);
        assert!(c.dim().is_none());
    }

    #[test]
    fn k2_refinement_is_a_path() {
        let c = closure(&[&[0, 1]]).barycentric_refinement().unwrap();
        assert_eq!(c.fvector(), &[3, 2]);
        assert_eq!(c.euler_characteristic(), 1);
    }

    #[test]
    fn refinement_of_triangle() {
        // chains in the face poset of a triangle: 7 faces, 12 containments, 6 full flags
        let c = closure(&[&[0, 1, 2]]).barycentric_refinement().unwrap();
        assert_eq!(c.fvector(), &[7, 12, 6]);
    }

    #[test]
    fn join_of_two_zero_spheres_is_a_circle() {
        let s0 = closure(&[&[0], &[1]]);
        let c = s0.join(&s0).unwrap();
        assert_eq!(c.fvector(), &[4, 4]);
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn cone_is_contractible() {
        let k1 = closure(&[&[0]]);
        let g = closure(&[&[0, 1], &[1, 2], &[2, 0], &[5]]);
        assert_eq!(k1.join(&g).unwrap().euler_characteristic(), 1);
    }

    #[test]
    fn products() {
        let k1 = closure(&[&[0]]);
        assert_eq!(k1.cartesian_product(&k1).unwrap().len(), 1);
        let k2 = closure(&[&[0, 1]]);
        assert_eq!(k2.cartesian_product(&k2).unwrap().euler_characteristic(), 1);
    }

    #[test]
    fn erdos_renyi_extremes_and_determinism() {
        assert_eq!(SimplicialComplex::erdos_renyi_whitney(5, 0.0, 9).unwrap().len(), 5);
        assert_eq!(SimplicialComplex::erdos_renyi_whitney(4, 1.0, 3).unwrap().len(), 15);
        let a = SimplicialComplex::erdos_renyi_whitney(8, 0.5, 42).unwrap();
        let b = SimplicialComplex::erdos_renyi_whitney(8, 0.5, 42).unwrap();
        assert_eq!(a, b);
        assert!(SimplicialComplex::erdos_renyi_whitney(3, 1.5, 0).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let err = SimplicialComplex::from_maximal_faces_capped(&[(0..6).collect()], 20).unwrap_err();
        assert!(matches!(err, Error::SizeCapExceeded { cap: 20 }));
    }
}
