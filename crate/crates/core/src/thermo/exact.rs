//! Exact energy minimizers at zero temperature and the San Diego Laplacian.

use nalgebra::DMatrix;
use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::{int, sym_eigen};
use crate::potential::{energy_quadratic, GreenFunction};

/// Faces up to this count have every support enumerated.
pub const EXHAUSTIVE_SUPPORT_LIMIT: usize = 12;

/// The energy minimizer `p = (1 + deg_{G′}) / Z` in the open simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteriorMinimizer {
    pub p: Vec<BigRational>,
    pub z: i64,
    pub energy: BigRational,
    pub lambda: BigRational,
}

pub fn interior_energy_minimizer(gf: &GreenFunction) -> Result<InteriorMinimizer> {
    if gf.is_empty() {
        return Err(Error::InvalidArgument("empty complex".into()));
    }
    let adj = gf.connection_adjacency();
    let degrees: Vec<usize> = (0..adj.len()).map(|i| adj.degree(i)).collect();
    let z: i64 = degrees.iter().map(|&d| 1 + d as i64).sum();
    let p: Vec<BigRational> = degrees.iter().map(|&d| BigRational::new((1 + d as i64).into(), z.into())).collect();
    let lambda = BigRational::new(2.into(), z.into());
    let two_gp: Vec<BigRational> = gf.matrix().mul_vec(&p)?.into_iter().map(|x| x * int(2)).collect();
    if two_gp.iter().any(|x| *x != lambda) {
        return Err(Error::InvalidArgument("2gp is not constant at the degree measure".into()));
    }
    let energy = energy_quadratic(gf, &p)?;
    Ok(InteriorMinimizer { p, z, energy, lambda })
}

/// Solution of `2 g_W p = λ 1_W`, `Σp = 1` on a support `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportMinimizer {
    pub support: Vec<usize>,
    pub p: Vec<BigRational>,
    pub energy: BigRational,
    pub lambda: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportOutcome {
    Admissible(SupportMinimizer),
    Inadmissible { support: Vec<usize>, reason: String },
}

impl SupportOutcome {
    pub fn admissible(self) -> Option<SupportMinimizer> {
        match self {
            SupportOutcome::Admissible(m) => Some(m),
            SupportOutcome::Inadmissible { .. } => None,
        }
    }
}

/// Solves `g_W q = 1` exactly; admissible when `Σq != 0` and `q / Σq` is strictly positive.
/// A single face always gives its point mass.
pub fn support_restricted_minimizer(gf: &GreenFunction, support: &[usize]) -> Result<SupportOutcome> {
    let n = gf.len();
    if support.is_empty() {
        return Err(Error::InvalidArgument("empty support".into()));
    }
    let mut w = support.to_vec();
    w.sort_unstable();
    w.dedup();
    if let Some(&bad) = w.iter().find(|&&x| x >= n) {
        return Err(Error::IndexOutOfRange { index: bad, len: n });
    }
    if let [x] = w[..] {
        let mut p = vec![BigRational::zero(); n];
        p[x] = int(1);
        let energy = gf.matrix().get(x, x).clone();
        let lambda = &energy * int(2);
        return Ok(SupportOutcome::Admissible(SupportMinimizer { support: w, p, energy, lambda }));
    }
    let sub = gf.matrix().principal_submatrix(&w);
    let inv = match sub.inverse() {
        Ok(m) => m,
        Err(Error::SingularMatrix) => {
            return Ok(SupportOutcome::Inadmissible { support: w, reason: "singular submatrix".into() })
        }
        Err(e) => return Err(e),
    };
    let q = inv.row_sums();
    let total: BigRational = q.iter().sum();
    if total.is_zero() {
        return Ok(SupportOutcome::Inadmissible { support: w, reason: "weights sum to zero".into() });
    }
    let pw: Vec<BigRational> = q.iter().map(|x| x / &total).collect();
    if pw.iter().any(|x| !x.is_positive()) {
        return Ok(SupportOutcome::Inadmissible { support: w, reason: "nonpositive weight".into() });
    }
    let mut p = vec![BigRational::zero(); n];
    for (&i, v) in w.iter().zip(pw) {
        p[i] = v;
    }
    let energy = total.recip();
    let lambda = &energy * int(2);
    Ok(SupportOutcome::Admissible(SupportMinimizer { support: w, p, energy, lambda }))
}

/// Admissible support-restricted solutions: all supports for small complexes, otherwise
/// [`greedy_support_candidates`].
pub fn support_candidates(gf: &GreenFunction) -> Result<Vec<SupportMinimizer>> {
    if gf.len() <= EXHAUSTIVE_SUPPORT_LIMIT {
        exhaustive_support_candidates(gf)
    } else {
        greedy_support_candidates(gf)
    }
}

/// Every admissible support, by enumeration of all `2^n - 1` subsets.
pub fn exhaustive_support_candidates(gf: &GreenFunction) -> Result<Vec<SupportMinimizer>> {
    let n = gf.len();
    if n >= 31 {
        return Err(Error::InvalidArgument(format!("{n} faces is too many to enumerate supports")));
    }
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << n) {
        let w: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if let Some(m) = support_restricted_minimizer(gf, &w)?.admissible() {
            out.push(m);
        }
    }
    Ok(sorted(out))
}

/// Singletons together with the chain obtained by repeatedly dropping the most negative weight.
pub fn greedy_support_candidates(gf: &GreenFunction) -> Result<Vec<SupportMinimizer>> {
    let n = gf.len();
    let mut out = Vec::new();
    for x in 0..n {
        if let Some(m) = support_restricted_minimizer(gf, &[x])?.admissible() {
            out.push(m);
        }
    }
    let mut w: Vec<usize> = (0..n).collect();
    while w.len() > 1 {
        let Ok(inv) = gf.matrix().principal_submatrix(&w).inverse() else { break };
        let q = inv.row_sums();
        let total: BigRational = q.iter().sum();
        if total.is_zero() {
            w.pop();
            continue;
        }
        let pw: Vec<BigRational> = q.iter().map(|x| x / &total).collect();
        if pw.iter().all(|x| x.is_positive()) {
            if let Some(m) = support_restricted_minimizer(gf, &w)?.admissible() {
                out.push(m);
            }
            break;
        }
        let (drop, _) = pw.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)).expect("nonempty");
        w.remove(drop);
    }
    Ok(sorted(out))
}

fn sorted(mut out: Vec<SupportMinimizer>) -> Vec<SupportMinimizer> {
    out.sort_by(|a, b| a.energy.cmp(&b.energy).then_with(|| a.support.cmp(&b.support)));
    out.dedup_by(|a, b| a.support == b.support);
    out
}

/// Checks on `L̃ = P L′ P` with `P = diag(1/√p)` at the interior minimizer.
#[derive(Clone, Debug, Serialize)]
pub struct SanDiegoReport {
    pub z: i64,
    /// `L′ 1 = Z p` holds exactly, equivalently `L̃ √p = Z √p`.
    pub eigenvector_exact: bool,
    pub top_eigenvalue: f64,
    pub eigenvalue_residual: f64,
    pub conjugated_sum: f64,
    pub chi_residual: f64,
}

impl SanDiegoReport {
    pub fn passes(&self, eig_tol: f64, chi_tol: f64) -> bool {
        self.eigenvector_exact && self.eigenvalue_residual < eig_tol && self.chi_residual < chi_tol
    }
}

pub fn san_diego_check(c: &SimplicialComplex, gf: &GreenFunction, tol_eig: f64) -> Result<SanDiegoReport> {
    let m = interior_energy_minimizer(gf)?;
    let n = c.len();
    let ones = vec![int(1); n];
    let lhs = gf.laplacian().mul_vec(&ones)?;
    let eigenvector_exact = lhs.iter().zip(&m.p).all(|(a, p)| *a == p * int(m.z));
    let psi: Vec<f64> = m.p.iter().map(|x| x.to_f64().unwrap_or(f64::NAN).sqrt()).collect();
    let l = gf.laplacian().to_f64();
    let lt = DMatrix::from_fn(n, n, |i, j| l[(i, j)] / (psi[i] * psi[j]));
    let eig = sym_eigen(&lt, tol_eig)?;
    let top = eig.values.last().copied().unwrap_or(0.0);
    let gt = lt.try_inverse().ok_or(Error::SingularMatrix)?;
    let sum: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| gt[(i, j)] / (psi[i] * psi[j])).sum();
    let chi = c.euler_characteristic() as f64;
    Ok(SanDiegoReport {
        z: m.z,
        eigenvector_exact,
        top_eigenvalue: top,
        eigenvalue_residual: (top - m.z as f64).abs(),
        conjugated_sum: sum,
        chi_residual: (sum - chi).abs(),
    })
}

/// Lowest energy among the interior minimizer and the admissible support candidates.
pub fn zero_temperature_minimum(gf: &GreenFunction) -> Result<(BigRational, Vec<usize>)> {
    let interior = interior_energy_minimizer(gf)?;
    let mut best = (interior.energy, (0..gf.len()).collect::<Vec<_>>());
    for m in support_candidates(gf)? {
        if m.energy < best.0 {
            best = (m.energy.clone(), m.support.clone());
        }
    }
    Ok(best)
}

pub fn abs_f64(x: &BigRational) -> f64 {
    x.abs().to_f64().unwrap_or(f64::NAN)
}
