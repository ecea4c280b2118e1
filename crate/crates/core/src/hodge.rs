//! Exterior derivative, Dirac and Hodge operators, Betti numbers and McKean–Singer checks.

use num::rational::BigRational;
use num::{ToPrimitive, Zero};
use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::Result;
use crate::linalg::{int, spectral_apply, sym_eigen, ExactMatrix};

/// Default heat-kernel times.
pub const DEFAULT_TIMES: [f64; 4] = [0.1, 0.5, 1.0, 2.0];

/// Signed incidence matrices `d_k: C_k -> C_{k+1}` for `k = 0..=dim`.
#[derive(Clone, Debug)]
pub struct IncidenceSet {
    d: Vec<ExactMatrix>,
    fvector: Vec<usize>,
}

impl IncidenceSet {
    pub fn d(&self, k: usize) -> &ExactMatrix {
        &self.d[k]
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn fvector(&self) -> &[usize] {
        &self.fvector
    }

    /// True when every composite `d_{k+1} d_k` vanishes exactly.
    pub fn is_chain_complex(&self) -> bool {
        self.d.windows(2).all(|w| {
            w[1].mul(&w[0]).map(|m| m.entries().iter().all(Zero::is_zero)).unwrap_or(false)
        })
    }
}

fn offsets(fvector: &[usize]) -> Vec<usize> {
    let mut off = vec![0];
    for f in fvector {
        off.push(off.last().unwrap() + f);
    }
    off
}

pub fn incidence(c: &SimplicialComplex) -> IncidenceSet {
    let fv = c.fvector().to_vec();
    let off = offsets(&fv);
    let mut d = Vec::new();
    for k in 0..fv.len() {
        let rows = fv.get(k + 1).copied().unwrap_or(0);
        let mut m = ExactMatrix::zeros(rows, fv[k]);
        for r in 0..rows {
            let y = c.face(off[k + 1] + r);
            for (i, b) in y.boundary().iter().enumerate() {
                let col = c.index_of(b).expect("complex is closed") - off[k];
                m.set(r, col, int(if i % 2 == 0 { 1 } else { -1 }));
            }
        }
        d.push(m);
    }
    IncidenceSet { d, fvector: fv }
}

/// Dirac operator `D = d + dᵀ`, Hodge Laplacian `L = D²` and its blocks `L_k`.
#[derive(Clone, Debug)]
pub struct HodgeOperator {
    pub dirac: ExactMatrix,
    pub laplacian: ExactMatrix,
    pub blocks: Vec<ExactMatrix>,
}

pub fn hodge_blocks(c: &SimplicialComplex) -> Result<HodgeOperator> {
    let inc = incidence(c);
    let fv = inc.fvector().to_vec();
    let off = offsets(&fv);
    let n = c.len();
    let mut dirac = ExactMatrix::zeros(n, n);
    for (k, dk) in inc.d.iter().enumerate() {
        for r in 0..dk.rows() {
            for col in 0..dk.cols() {
                let v = dk.get(r, col);
                if !v.is_zero() {
                    dirac.set(off[k + 1] + r, off[k] + col, v.clone());
                    dirac.set(off[k] + col, off[k + 1] + r, v.clone());
                }
            }
        }
    }
    let mut blocks = Vec::new();
    for k in 0..fv.len() {
        let up = inc.d[k].transpose().mul(&inc.d[k])?;
        let block = if k == 0 { up } else { up.add(&inc.d[k - 1].mul(&inc.d[k - 1].transpose())?)? };
        blocks.push(block);
    }
    let mut laplacian = ExactMatrix::zeros(n, n);
    for (k, b) in blocks.iter().enumerate() {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                laplacian.set(off[k] + i, off[k] + j, b.get(i, j).clone());
            }
        }
    }
    Ok(HodgeOperator { dirac, laplacian, blocks })
}

/// Betti numbers from exact ranks: `b_k = f_k - rank d_k - rank d_{k-1}`.
pub fn betti(c: &SimplicialComplex) -> Vec<usize> {
    let inc = incidence(c);
    let ranks: Vec<usize> = inc.d.iter().map(ExactMatrix::rank).collect();
    (0..inc.fvector.len())
        .map(|k| inc.fvector[k] - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 })
        .collect()
}

/// Eigenvalues of each block, ascending.
pub fn block_spectra(h: &HodgeOperator, tol: f64) -> Result<Vec<Vec<f64>>> {
    h.blocks.iter().map(|b| Ok(sym_eigen(&b.to_f64(), tol)?.values)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct HeatTrace {
    pub t: f64,
    pub super_trace: f64,
    pub residual: f64,
}

/// `|str(exp(-tL)) - χ|` for each `t`.
pub fn mckean_singer_check(c: &SimplicialComplex, times: &[f64], tol: f64) -> Result<Vec<HeatTrace>> {
    let spectra = block_spectra(&hodge_blocks(c)?, tol)?;
    let chi = c.euler_characteristic() as f64;
    Ok(times
        .iter()
        .map(|&t| {
            let s: f64 = spectra
                .iter()
                .enumerate()
                .map(|(k, sp)| {
                    let tr: f64 = sp.iter().map(|l| (-t * l).exp()).sum();
                    if k % 2 == 0 { tr } else { -tr }
                })
                .sum();
            HeatTrace { t, super_trace: s, residual: (s - chi).abs() }
        })
        .collect())
}

/// Exact `str(L^m)` for `m = 1..=max_power`.
pub fn laplacian_power_super_traces(c: &SimplicialComplex, max_power: usize) -> Result<Vec<BigRational>> {
    let h = hodge_blocks(c)?;
    let mut out = Vec::new();
    let mut powers: Vec<ExactMatrix> = h.blocks.clone();
    for m in 1..=max_power {
        if m > 1 {
            powers = powers.iter().zip(&h.blocks).map(|(p, b)| p.mul(b)).collect::<Result<_>>()?;
        }
        let s = powers
            .iter()
            .enumerate()
            .map(|(k, p)| if k % 2 == 0 { p.trace() } else { -p.trace() })
            .sum();
        out.push(s);
    }
    Ok(out)
}

/// Largest mismatch between the sorted nonzero spectra of the even and odd blocks;
/// `None` if the multiplicities differ.
pub fn supersymmetry_defect(spectra: &[Vec<f64>], zero_tol: f64) -> Option<f64> {
    let collect = |parity: usize| {
        let mut v: Vec<f64> = spectra
            .iter()
            .enumerate()
            .filter(|(k, _)| k % 2 == parity)
            .flat_map(|(_, s)| s.iter().copied().filter(|x| x.abs() > zero_tol))
            .collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let (even, odd) = (collect(0), collect(1));
    if even.len() != odd.len() {
        return None;
    }
    Some(even.iter().zip(&odd).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Diagonal of the Moore–Penrose inverse of `L`, block by block, from the spectral decomposition.
pub fn hodge_pseudoinverse_diag(c: &SimplicialComplex, tol: f64) -> Result<Vec<f64>> {
    let h = hodge_blocks(c)?;
    let mut out = Vec::with_capacity(c.len());
    for b in &h.blocks {
        let e = sym_eigen(&b.to_f64(), tol)?;
        let top = e.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let cut = 1e-9 * top;
        let pinv = spectral_apply(&e, |x| if x.abs() > cut { 1.0 / x } else { 0.0 });
        out.extend((0..b.rows()).map(|i| pinv[(i, i)]));
    }
    Ok(out)
}

/// Exact Moore–Penrose inverse of a symmetric rational matrix: `(M + P)^{-1} - P`
/// with `P` the orthogonal projection onto the kernel.
pub fn exact_pseudoinverse(m: &ExactMatrix) -> Result<ExactMatrix> {
    let n = m.rows();
    let kernel = m.kernel_basis();
    if kernel.is_empty() {
        return m.inverse();
    }
    let k = ExactMatrix::new(n, kernel.len(), (0..n).flat_map(|i| kernel.iter().map(move |v| v[i].clone())).collect())?;
    let kt = k.transpose();
    let proj = k.mul(&kt.mul(&k)?.inverse()?)?.mul(&kt)?;
    m.add(&proj)?.inverse()?.sub(&proj)
}

/// Exact diagonal of `L⁺`, block by block.
pub fn hodge_pseudoinverse_diag_exact(c: &SimplicialComplex) -> Result<Vec<BigRational>> {
    let h = hodge_blocks(c)?;
    let mut out = Vec::with_capacity(c.len());
    for b in &h.blocks {
        let p = exact_pseudoinverse(b)?;
        out.extend((0..b.rows()).map(|i| p.get(i, i).clone()));
    }
    Ok(out)
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
