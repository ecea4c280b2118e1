//! Dense symmetric eigensolver.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Eigenvalues sorted ascending with matching eigenvector columns.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

fn inf_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Eigendecomposition of a symmetric matrix. Input asymmetric beyond `tol` is rejected.
pub fn sym_eigen(m: &DMatrix<f64>, tol: f64) -> Result<SymEigen> {
    if m.nrows() != m.ncols() {
        return Err(Error::Shape(format!("eigenproblem for a {}x{} matrix", m.nrows(), m.ncols())));
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(SymEigen { values: Vec::new(), vectors: DMatrix::zeros(0, 0) });
    }
    let scale = inf_norm(m).max(1.0);
    let asym = (0..n)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .map(|(i, j)| (m[(i, j)] - m[(j, i)]).abs())
        .fold(0.0, f64::max);
    if asym > tol * scale {
        return Err(Error::Asymmetric { tol });
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    let lambda = DMatrix::from_diagonal(&DVector::from_vec(values.clone()));
    let residual = inf_norm(&(&sym * &vectors - &vectors * lambda));
    let bound = 1e-8 * inf_norm(&sym).max(f64::MIN_POSITIVE);
    if residual >= bound && residual > 1e-12 {
        return Err(Error::EigenResidual { residual, bound });
    }
    Ok(SymEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn sym_eigenvalues(m: &DMatrix<f64>, tol: f64) -> Result<Vec<f64>> {
    sym_eigen(m, tol).map(|e| e.values)
}

/// `V f(Λ) Vᵀ` for a precomputed decomposition.
pub fn spectral_apply(e: &SymEigen, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let d = DVector::from_iterator(e.values.len(), e.values.iter().map(|&x| f(x)));
    &e.vectors * DMatrix::from_diagonal(&d) * e.vectors.transpose()
}
