//! The identity suite run by `verify`.

use num::rational::BigRational;
use num::{Signed, Zero};
use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::curvature::{ball_lemma_check, stable_curvature, unstable_from_table};
use crate::derived::SphereTable;
use crate::error::Result;
use crate::hodge::{block_spectra, hodge_blocks, mckean_singer_check, supersymmetry_defect, to_f64, DEFAULT_TIMES};
use crate::linalg::int;
use crate::potential::{is_unimodular, total_energy, GreenFunction};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub eig: f64,
    pub heat: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { eig: 1e-8, heat: 1e-8 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResult {
    pub name: &'static str,
    pub exact: bool,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub faces: usize,
    pub fvector: Vec<usize>,
    pub euler_characteristic: i64,
    pub total_energy: String,
    pub identities: Vec<IdentityResult>,
    pub passed: bool,
}

fn exact(name: &'static str, residual: BigRational) -> IdentityResult {
    IdentityResult { name, exact: true, passed: residual.is_zero(), residual: to_f64(&residual) }
}

fn float(name: &'static str, residual: f64, tol: f64) -> IdentityResult {
    IdentityResult { name, exact: false, passed: residual.is_finite() && residual < tol, residual }
}

fn max_abs(it: impl Iterator<Item = BigRational>) -> BigRational {
    it.map(|x| x.abs()).max().unwrap_or_else(BigRational::zero)
}

/// Runs unimodularity, diagonal law, Gauss–Bonnet, `str(g)`, ball lemma, row-sum law,
/// energy theorem, McKean–Singer and super-symmetry on `c`.
pub fn verify_complex(c: &SimplicialComplex, tol: &Tolerances) -> Result<VerifyReport> {
    let gf = GreenFunction::new(c)?;
    let g = gf.matrix();
    let chi = int(c.euler_characteristic());
    let table = SphereTable::new(c);
    let dims = c.dims();
    let k_plus = unstable_from_table(c, &table);
    let k_minus = stable_curvature(c);
    let row_sums = g.row_sums();
    let energy = total_energy(&gf);

    let det = gf.det_laplacian().abs() - int(1);
    let diagonal = max_abs((0..c.len()).map(|x| g.get(x, x) - int(1 - table.full[x])));
    let gauss_bonnet = (int(k_plus.total()) - &chi).abs().max((int(k_minus.total()) - &chi).abs());
    let str_g = (g.super_trace(&dims)? - &chi).abs().max((gf.laplacian().super_trace(&dims)? - &chi).abs());
    let ball = int(ball_lemma_check(c));
    let row_sum = max_abs(row_sums.iter().zip(&k_plus.values).map(|(r, k)| r - int(*k)));
    let energy_residual = (&energy - &chi).abs();

    let mut identities = vec![
        IdentityResult { passed: is_unimodular(&gf), ..exact("unimodularity", det) },
        exact("diagonal_law", diagonal),
        exact("gauss_bonnet", gauss_bonnet),
        exact("super_trace", str_g),
        exact("ball_lemma", ball),
        exact("row_sum_law", row_sum),
        exact("energy_theorem", energy_residual),
    ];
    let heat = mckean_singer_check(c, &DEFAULT_TIMES, tol.eig)?;
    identities.push(float("mckean_singer", heat.iter().map(|h| h.residual).fold(0.0, f64::max), tol.heat));
    let spectra = block_spectra(&hodge_blocks(c)?, tol.eig)?;
    let susy = supersymmetry_defect(&spectra, tol.eig).unwrap_or(f64::INFINITY);
    identities.push(float("super_symmetry", susy, tol.eig));

    let passed = identities.iter().all(|i| i.passed);
    Ok(VerifyReport {
        faces: c.len(),
        fvector: c.fvector().to_vec(),
        euler_characteristic: c.euler_characteristic(),
        total_energy: energy.to_string(),
        identities,
        passed,
    })
}
