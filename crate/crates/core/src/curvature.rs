//! Curvatures, Gauss–Bonnet, Poincaré–Hopf indices and the ball lemma.

use num::rational::BigRational;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{GraphSpec, SimplicialComplex};
use crate::derived::{connection_graph, induced_euler, unit_sphere, SphereTable};
use crate::error::{Error, Result};
use crate::linalg::{int, ratio};
use crate::cliques;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurvatureKind {
    Stable,
    Unstable,
}

/// Per-face curvature values in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurvatureVector {
    pub kind: CurvatureKind,
    pub values: Vec<i64>,
}

impl CurvatureVector {
    pub fn total(&self) -> i64 {
        self.values.iter().sum()
    }
}

/// `K⁻(x) = (-1)^dim(x)`.
pub fn stable_curvature(c: &SimplicialComplex) -> CurvatureVector {
    CurvatureVector { kind: CurvatureKind::Stable, values: c.faces().iter().map(|f| f.sign()).collect() }
}

/// `K⁺(x) = (-1)^dim(x) (1 - χ(S(x)))` with `S(x)` the unit sphere in G₁.
pub fn unstable_curvature(c: &SimplicialComplex) -> CurvatureVector {
    unstable_from_table(c, &SphereTable::new(c))
}

pub fn unstable_from_table(c: &SimplicialComplex, t: &SphereTable) -> CurvatureVector {
    let values = c.faces().iter().zip(&t.full).map(|(f, chi)| f.sign() * (1 - chi)).collect();
    CurvatureVector { kind: CurvatureKind::Unstable, values }
}

/// Per-vertex curvature of a graph, indexed by vertex id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexCurvature {
    pub values: Vec<BigRational>,
}

impl VertexCurvature {
    pub fn total(&self) -> BigRational {
        self.values.iter().sum()
    }
}

/// `K(v) = 1 - V₀/2 + V₁/3 - ...` where `V_k` counts `k`-simplices in the unit sphere of `v`.
pub fn euler_vertex_curvature(g: &GraphSpec) -> VertexCurvature {
    let adj = g.adjacency();
    let values = (0..g.vertex_count())
        .map(|v| {
            let link = adj.induced(adj.neighbors(v));
            let counts = cliques::clique_counts(&link);
            let mut k = int(1);
            for (i, &vk) in counts.iter().enumerate() {
                let term = ratio(vk as i64, i as i64 + 2);
                if i % 2 == 0 {
                    k -= term;
                } else {
                    k += term;
                }
            }
            k
        })
        .collect();
    VertexCurvature { values }
}

/// `K̃(v) = Σ_{x ∋ v} K⁺(x) / |x|` over the Whitney complex of `g`.
pub fn unstable_euler_curvature(g: &GraphSpec) -> Result<VertexCurvature> {
    let c = SimplicialComplex::whitney(g)?;
    let kplus = unstable_curvature(&c);
    let mut values = vec![int(0); g.vertex_count()];
    for (f, k) in c.faces().iter().zip(&kplus.values) {
        let share = ratio(*k, f.len() as i64);
        for &v in f.vertices() {
            values[v] += &share;
        }
    }
    Ok(VertexCurvature { values })
}

/// Real-valued function on faces, injective on every closed unit ball of G₁.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldFunction {
    values: Vec<f64>,
}

impl FieldFunction {
    pub fn new(c: &SimplicialComplex, values: Vec<f64>) -> Result<Self> {
        if values.len() != c.len() {
            return Err(Error::Shape(format!("{} values for {} faces", values.len(), c.len())));
        }
        for x in 0..c.len() {
            let s = unit_sphere(c, x)?;
            for (i, &y) in s.full.iter().enumerate() {
                let clash = values[y] == values[x] || s.full[i + 1..].iter().any(|&z| values[z] == values[y]);
                if clash {
                    return Err(Error::LocalInjectivityViolation { face: x });
                }
            }
        }
        Ok(FieldFunction { values })
    }

    /// `f(x) = dim(x)`.
    pub fn dimension(c: &SimplicialComplex) -> Self {
        FieldFunction { values: c.faces().iter().map(|f| f.dim() as f64).collect() }
    }

    /// A uniformly random ordering of the faces.
    pub fn random_permutation(c: &SimplicialComplex, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (1..=c.len()).collect();
        perm.shuffle(&mut rng);
        FieldFunction { values: perm.into_iter().map(|v| v as f64).collect() }
    }

    pub fn negated(&self) -> Self {
        FieldFunction { values: self.values.iter().map(|v| -v).collect() }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `i_f(x) = 1 - χ({y ∈ S(x) : f(y) < f(x)})`.
pub fn poincare_hopf_index(c: &SimplicialComplex, f: &FieldFunction, x: usize) -> Result<i64> {
    let s = unit_sphere(c, x)?;
    let lower: Vec<usize> = s.full.into_iter().filter(|&y| f.values[y] < f.values[x]).collect();
    Ok(1 - induced_euler(&c.containment_adjacency(), &lower))
}

/// Indices of every face, sharing one containment graph.
pub fn poincare_hopf_indices(c: &SimplicialComplex, f: &FieldFunction) -> Vec<i64> {
    let g1 = c.containment_adjacency();
    (0..c.len())
        .map(|x| {
            let lower: Vec<usize> =
                g1.neighbors(x).iter().copied().filter(|&y| f.values[y] < f.values[x]).collect();
            1 - induced_euler(&g1, &lower)
        })
        .collect()
}

/// `j_f(x) = (i_f(x) + i_{-f}(x)) / 2`.
pub fn symmetric_index(c: &SimplicialComplex, f: &FieldFunction, x: usize) -> Result<BigRational> {
    let a = poincare_hopf_index(c, f, x)?;
    let b = poincare_hopf_index(c, &f.negated(), x)?;
    Ok(ratio(a + b, 2))
}

/// Largest `|d_{G′}(x) - Σ_{y ∈ B(x)} χ(super(y))|` over all faces.
pub fn ball_lemma_check(c: &SimplicialComplex) -> i64 {
    let t = SphereTable::new(c);
    let gp = connection_graph(c);
    (0..c.len())
        .map(|x| {
            let ball: i64 = t.sup[x] + gp.adjacency().neighbors(x).iter().map(|&y| t.sup[y]).sum::<i64>();
            (gp.degrees()[x] as i64 - ball).abs()
        })
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::erdos_renyi_graph;
    use crate::fixtures;

    #[test]
    fn stable_curvature_of_k3() {
        let k3 = fixtures::complete_complex(3);
        assert_eq!(stable_curvature(&k3).values, vec![1, 1, 1, -1, -1, -1, 1]);
        assert_eq!(stable_curvature(&fixtures::icosahedron()).total(), 2);
    }

    #[test]
    fn gauss_bonnet_on_corpus() {
        for (_, c) in fixtures::corpus().unwrap() {
            assert_eq!(unstable_curvature(&c).total(), c.euler_characteristic());
            for x in c.facets() {
                assert_eq!(unstable_curvature(&c).values[x], 1);
            }
        }
        let ico = fixtures::icosahedron();
        assert_eq!(unstable_curvature(&ico).values, stable_curvature(&ico).values);
    }

    #[test]
    fn vertex_curvatures() {
        let ico = fixtures::icosahedron_graph();
        let k = euler_vertex_curvature(&ico);
        assert!(k.values.iter().all(|v| *v == ratio(1, 6)));
        assert_eq!(unstable_euler_curvature(&ico).unwrap(), k);
        assert!(euler_vertex_curvature(&fixtures::cycle_graph(4)).values.iter().all(|v| *v == int(0)));
        let single = GraphSpec::new(1, []).unwrap();
        assert_eq!(euler_vertex_curvature(&single).values, vec![int(1)]);
        assert_eq!(unstable_euler_curvature(&single).unwrap().values, vec![int(1)]);
        for seed in 0..5 {
            let g = erdos_renyi_graph(7, 0.5, seed).unwrap();
            let chi = SimplicialComplex::whitney(&g).unwrap().euler_characteristic();
            let k = euler_vertex_curvature(&g);
            assert_eq!(k.total(), int(chi));
            assert_eq!(unstable_euler_curvature(&g).unwrap(), k);
        }
    }

    #[test]
    fn dimension_function_indices() {
        for (_, c) in fixtures::corpus().unwrap() {
            let f = FieldFunction::dimension(&c);
            let t = SphereTable::new(&c);
            let up = poincare_hopf_indices(&c, &f);
            let down = poincare_hopf_indices(&c, &f.negated());
            for x in 0..c.len() {
                assert_eq!(up[x], c.face(x).sign());
                assert_eq!(down[x], 1 - t.sup[x]);
                let j = symmetric_index(&c, &f, x).unwrap();
                let expected = if c.face(x).dim() % 2 == 0 {
                    int(1) - ratio(t.full[x], 2)
                } else {
                    ratio(t.full[x], 2) - int(1)
                };
                assert_eq!(j, expected);
            }
            assert_eq!(down.iter().sum::<i64>(), c.euler_characteristic());
        }
    }

    #[test]
    fn random_functions_and_injectivity() {
        let k3 = fixtures::complete_complex(3);
        for seed in 0..20 {
            let f = FieldFunction::random_permutation(&k3, seed);
            assert_eq!(poincare_hopf_indices(&k3, &f).iter().sum::<i64>(), 1);
            assert!(FieldFunction::new(&k3, f.values().to_vec()).is_ok());
        }
        let bad = FieldFunction::new(&k3, vec![0.0, 1.0, 2.0, 0.0, 4.0, 5.0, 6.0]);
        assert!(matches!(bad, Err(Error::LocalInjectivityViolation { .. })));
        let k1 = fixtures::complete_complex(1);
        assert_eq!(symmetric_index(&k1, &FieldFunction::dimension(&k1), 0).unwrap(), int(1));
    }

    #[test]
    fn ball_lemma_on_corpus() {
        for (_, c) in fixtures::corpus().unwrap() {
            assert_eq!(ball_lemma_check(&c), 0);
        }
    }
}
