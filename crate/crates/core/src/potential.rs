//! Green function of the connection Laplacian, potentials, energies and the zeta function.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::derived::connection_graph;
use crate::error::{Error, Result};
use crate::linalg::{eval_poly, ExactMatrix};

/// `L′ = 1 + A′` on the canonical face order.
pub fn connection_laplacian(c: &SimplicialComplex) -> ExactMatrix {
    let a = connection_graph(c).adjacency_matrix();
    a.add(&ExactMatrix::identity(c.len())).expect("square")
}

/// The inverse `g` of the connection Laplacian.
#[derive(Clone, Debug)]
pub struct GreenFunction {
    g: ExactMatrix,
    laplacian: ExactMatrix,
    det_l: BigRational,
}

impl GreenFunction {
    pub fn new(c: &SimplicialComplex) -> Result<Self> {
        Self::from_laplacian(&connection_laplacian(c))
    }

    pub fn from_laplacian(l: &ExactMatrix) -> Result<Self> {
        let det_l = l.det()?;
        if det_l.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(GreenFunction { g: l.inverse()?, laplacian: l.clone(), det_l })
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.g
    }

    pub fn laplacian(&self) -> &ExactMatrix {
        &self.laplacian
    }

    /// Adjacency of G′ read off the off-diagonal support of `L′`.
    pub fn connection_adjacency(&self) -> crate::cliques::Adjacency {
        let n = self.len();
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        crate::cliques::Adjacency::from_edges(n, edges.filter(|&(i, j)| !self.laplacian.get(i, j).is_zero()))
    }

    pub fn det_laplacian(&self) -> &BigRational {
        &self.det_l
    }

    pub fn len(&self) -> usize {
        self.g.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.g.rows() == 0
    }

    pub fn entry(&self, x: usize, y: usize) -> i64 {
        self.g.get(x, y).to_integer().to_i64().expect("integer entry")
    }

    pub fn is_integer(&self) -> bool {
        self.g.is_integer()
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        self.g.to_f64()
    }
}

pub fn green_function(c: &SimplicialComplex) -> Result<GreenFunction> {
    GreenFunction::new(c)
}

/// `V_x(p) = Σ_y p(y) g(x, y)` for an arbitrary weight vector.
pub fn potential(gf: &GreenFunction, x: usize, weights: &[BigRational]) -> Result<BigRational> {
    if x >= gf.len() {
        return Err(Error::IndexOutOfRange { index: x, len: gf.len() });
    }
    if weights.len() != gf.len() {
        return Err(Error::Shape(format!("{} weights for {} faces", weights.len(), gf.len())));
    }
    Ok(gf.g.row(x).iter().zip(weights).map(|(a, b)| a * b).sum())
}

/// `Σ_{x,y} g(x, y)`.
pub fn total_energy(gf: &GreenFunction) -> BigRational {
    gf.g.sum_entries()
}

/// `Σ_{x,y} g(x, y) p(x) p(y)`.
pub fn energy_quadratic(gf: &GreenFunction, p: &[BigRational]) -> Result<BigRational> {
    let gp = gf.g.mul_vec(p)?;
    Ok(gp.iter().zip(p).map(|(a, b)| a * b).sum())
}

/// `ζ(z) = 1 / det(1 + z A′)` held through its integer polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaFunction {
    pub coefficients: Vec<BigInt>,
}

impl ZetaFunction {
    pub fn polynomial_at(&self, z: &BigRational) -> BigRational {
        eval_poly(&self.coefficients, z)
    }

    /// `None` at a zero of the polynomial.
    pub fn eval(&self, z: &BigRational) -> Option<BigRational> {
        let p = self.polynomial_at(z);
        (!p.is_zero()).then(|| p.recip())
    }
}

pub fn zeta(c: &SimplicialComplex) -> Result<ZetaFunction> {
    let a = connection_graph(c).adjacency_matrix();
    Ok(ZetaFunction { coefficients: a.fredholm_polynomial()? })
}

/// Comparison of the nonzero pattern of `g` with the intersection pattern of faces.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SupportReport {
    /// Disjoint pairs `x < y` with `g(x, y) != 0`.
    pub disjoint_nonzero: Vec<(usize, usize, i64)>,
    /// Intersecting pairs `x <= y` with `g(x, y) = 0`.
    pub intersecting_zero: Vec<(usize, usize)>,
}

pub fn offdiag_support_report(gf: &GreenFunction, c: &SimplicialComplex) -> SupportReport {
    let mut r = SupportReport::default();
    for x in 0..c.len() {
        for y in x..c.len() {
            let v = gf.entry(x, y);
            let meet = c.face(x).intersects(c.face(y));
            if !meet && v != 0 {
                r.disjoint_nonzero.push((x, y, v));
            } else if meet && v == 0 {
                r.intersecting_zero.push((x, y));
            }
        }
    }
    r
}

/// True when `|det L′| = 1`.
pub fn is_unimodular(gf: &GreenFunction) -> bool {
    gf.det_l.abs() == BigRational::from_integer(1.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::{int, ratio};

    #[test]
    fn k1_green_function() {
        let gf = green_function(&fixtures::complete_complex(1)).unwrap();
        assert_eq!(gf.matrix(), &ExactMatrix::identity(1));
        assert_eq!(total_energy(&gf), int(1));
        assert!(offdiag_support_report(&gf, &fixtures::complete_complex(1)).disjoint_nonzero.is_empty());
    }

    #[test]
    fn potentials_on_k3() {
        let c = fixtures::complete_complex(3);
        let gf = green_function(&c).unwrap();
        let n = c.len();
        for x in 0..n {
            let mut e = vec![int(0); n];
            e[x] = int(1);
            assert_eq!(potential(&gf, x, &e).unwrap(), gf.matrix().get(x, x).clone());
            assert_eq!(energy_quadratic(&gf, &e).unwrap(), gf.matrix().get(x, x).clone());
            let uniform = vec![ratio(1, 7); n];
            assert_eq!(potential(&gf, x, &uniform).unwrap(), gf.matrix().row_sums()[x].clone() / int(7));
        }
        assert_eq!(energy_quadratic(&gf, &vec![int(1); n]).unwrap(), int(1));
        assert!(potential(&gf, 9, &vec![int(1); n]).is_err());
        assert!(energy_quadratic(&gf, &[int(1)]).is_err());
    }

    #[test]
    fn zeta_basics() {
        let pts = SimplicialComplex::from_maximal_faces(&[vec![0], vec![1]]).unwrap();
        let z = zeta(&pts).unwrap();
        assert_eq!(z.coefficients, vec![BigInt::from(1), 0.into(), 0.into()]);
        assert_eq!(z.eval(&ratio(1, 2)), Some(int(1)));
        let k2 = zeta(&fixtures::complete_complex(2)).unwrap();
        assert_eq!(k2.polynomial_at(&int(1)), int(-1));
        assert_eq!(k2.polynomial_at(&int(0)), int(1));
    }

    #[test]
    fn unimodular_corpus() {
        for (name, c) in fixtures::corpus().unwrap() {
            let gf = green_function(&c).unwrap();
            assert!(is_unimodular(&gf), "{name}");
            assert!(gf.is_integer());
            assert_eq!(gf.matrix().mul(&connection_laplacian(&c)).unwrap(), ExactMatrix::identity(c.len()));
            assert_eq!(zeta(&c).unwrap().polynomial_at(&int(1)), gf.det_laplacian().clone());
        }
    }
}
