//! Free energy evaluation, Newton solves for critical points, classification and continuation.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::sym_eigen;
use crate::potential::GreenFunction;

/// Largest componentwise move allowed between linked points.
pub const MAX_LINK_JUMP: f64 = 0.05;
/// Critical points closer than this in the sup norm are identified.
pub const DEDUP_TOL: f64 = 1e-6;

/// `S(p) = -Σ p log p`, zero entries skipped.
pub fn entropy(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>()
}

/// A probability vector on the faces.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbabilityVector {
    p: Vec<f64>,
    support: Vec<usize>,
}

impl ProbabilityVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.iter().any(|&x| x.is_nan() || x < 0.0 || !x.is_finite()) {
            return Err(Error::InvalidArgument("probabilities must be finite and nonnegative".into()));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("probabilities sum to {total}")));
        }
        let support = (0..p.len()).filter(|&i| p[i] > 0.0).collect();
        Ok(ProbabilityVector { p, support })
    }

    pub fn uniform(n: usize) -> Self {
        ProbabilityVector { p: vec![1.0 / n as f64; n], support: (0..n).collect() }
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn entropy(&self) -> f64 {
        entropy(&self.p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Energies {
    pub u: f64,
    pub s: f64,
    pub f: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Minimum,
    Saddle,
    Maximum,
    Degenerate,
}

impl PointKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PointKind::Minimum => "minimum",
            PointKind::Saddle => "saddle",
            PointKind::Maximum => "maximum",
            PointKind::Degenerate => "degenerate",
        }
    }
}

/// Inertia `(negative, zero, positive)` of the Hessian restricted to the simplex tangent space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub beta: f64,
    pub p: Vec<f64>,
    pub log_p: Vec<f64>,
    pub lambda: f64,
    pub u: f64,
    pub s: f64,
    pub f: f64,
    pub signature: Signature,
    pub min_hessian_eig: f64,
    pub kind: PointKind,
    pub residual: f64,
}

impl CriticalPoint {
    pub fn distance(&self, other: &CriticalPoint) -> f64 {
        sup_distance(&self.p, &other.p)
    }

    pub fn probability(&self) -> Result<ProbabilityVector> {
        ProbabilityVector::new(self.p.clone())
    }

    pub fn morse_index(&self) -> usize {
        self.signature.negative
    }
}

pub fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub tol_eig: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { tol: 1e-12, max_iter: 200, tol_eig: 1e-8 }
    }
}

/// `F(p, β) = β pᵀ g p - (1 - β) S(p)` for a fixed Green function.
#[derive(Clone, Debug)]
pub struct FreeEnergy {
    g: DMatrix<f64>,
}

impl FreeEnergy {
    pub fn new(gf: &GreenFunction) -> Self {
        FreeEnergy { g: gf.to_f64() }
    }

    pub fn from_matrix(g: DMatrix<f64>) -> Self {
        FreeEnergy { g }
    }

    pub fn len(&self) -> usize {
        self.g.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.g.nrows() == 0
    }

    pub fn green(&self) -> &DMatrix<f64> {
        &self.g
    }

    fn gp(&self, p: &[f64]) -> DVector<f64> {
        &self.g * DVector::from_column_slice(p)
    }

    pub fn energy(&self, p: &[f64]) -> f64 {
        self.gp(p).iter().zip(p).map(|(a, b)| a * b).sum()
    }

    pub fn evaluate(&self, p: &[f64], beta: f64) -> Energies {
        let u = self.energy(p);
        let s = entropy(p);
        Energies { u, s, f: beta * u - (1.0 - beta) * s }
    }

    /// Gradient of `F` on the open positive orthant.
    pub fn gradient(&self, p: &[f64], beta: f64) -> Vec<f64> {
        self.gp(p).iter().zip(p).map(|(gp, &x)| 2.0 * beta * gp + (1.0 - beta) * (x.ln() + 1.0)).collect()
    }

    /// `2βg + (1 - β) diag(1/p)`.
    pub fn hessian(&self, p: &[f64], beta: f64) -> DMatrix<f64> {
        let mut h = &self.g * (2.0 * beta);
        for (i, &x) in p.iter().enumerate() {
            h[(i, i)] += (1.0 - beta) / x;
        }
        h
    }

    /// Hessian restricted to `{v : Σv = 0}` in an orthonormal basis of that space.
    pub fn tangent_hessian(&self, p: &[f64], beta: f64) -> DMatrix<f64> {
        let q = tangent_basis(&vec![1.0 / (p.len() as f64).sqrt(); p.len()]);
        q.transpose() * self.hessian(p, beta) * q
    }

    /// Lagrange residual `max(|2β(gp) + (1-β)(log p + 1) - λ|, |Σp - 1|)`.
    pub fn stationarity_residual(&self, p: &[f64], log_p: &[f64], lambda: f64, beta: f64) -> f64 {
        let gp = self.gp(p);
        let r = (0..p.len())
            .map(|x| (2.0 * beta * gp[x] + (1.0 - beta) * (log_p[x] + 1.0) - lambda).abs())
            .fold(0.0, f64::max);
        r.max((p.iter().sum::<f64>() - 1.0).abs())
    }

    /// Eigenvalues of `2βΨgΨ + (1-β)I` on the complement of `ψ = √p`, congruent to the
    /// tangent Hessian but bounded near the boundary of the simplex.
    pub fn scaled_hessian_eigenvalues(&self, log_p: &[f64], beta: f64, tol: f64) -> Result<Vec<f64>> {
        let n = log_p.len();
        let psi: Vec<f64> = log_p.iter().map(|q| (0.5 * q).exp()).collect();
        let norm = psi.iter().map(|x| x * x).sum::<f64>().sqrt();
        let unit: Vec<f64> = psi.iter().map(|x| x / norm).collect();
        let k = DMatrix::from_fn(n, n, |i, j| {
            2.0 * beta * psi[i] * self.g[(i, j)] * psi[j] + if i == j { 1.0 - beta } else { 0.0 }
        });
        let q = tangent_basis(&unit);
        let restricted = q.transpose() * k * q;
        Ok(sym_eigen(&restricted, tol.max(1e-10))?.values)
    }

    fn residual_vector(&self, q: &[f64], lambda: f64, beta: f64) -> DVector<f64> {
        let n = q.len();
        let p: Vec<f64> = q.iter().map(|x| x.exp()).collect();
        let gp = self.gp(&p);
        let mut r = DVector::zeros(n + 1);
        for x in 0..n {
            r[x] = 2.0 * beta * gp[x] + (1.0 - beta) * (q[x] + 1.0) - lambda;
        }
        r[n] = p.iter().sum::<f64>() - 1.0;
        r
    }

    /// Damped Newton on `(log p, λ)`. Returns the converged pair or `None`.
    pub fn newton(&self, beta: f64, q0: &[f64], lambda0: Option<f64>, opts: &NewtonOptions) -> Option<(Vec<f64>, f64)> {
        let n = q0.len();
        let mut q = q0.to_vec();
        let mut lambda = lambda0.unwrap_or_else(|| {
            let p: Vec<f64> = q.iter().map(|x| x.exp()).collect();
            let gp = self.gp(&p);
            (0..n).map(|x| 2.0 * beta * gp[x] + (1.0 - beta) * (q[x] + 1.0)).sum::<f64>() / n as f64
        });
        let mut r = self.residual_vector(&q, lambda, beta);
        let mut rn = r.amax();
        if !rn.is_finite() {
            return None;
        }
        for _ in 0..opts.max_iter {
            if rn <= opts.tol * 1e-2 {
                break;
            }
            let p: Vec<f64> = q.iter().map(|x| x.exp()).collect();
            let mut jac = DMatrix::zeros(n + 1, n + 1);
            for x in 0..n {
                for y in 0..n {
                    jac[(x, y)] = 2.0 * beta * self.g[(x, y)] * p[y];
                }
                jac[(x, x)] += 1.0 - beta;
                jac[(x, n)] = -1.0;
                jac[(n, x)] = p[x];
            }
            let step = jac.lu().solve(&(-&r))?;
            let big = step.rows(0, n).amax();
            let mut t = if big > 2.0 { 2.0 / big } else { 1.0 };
            let mut accepted = false;
            for _ in 0..40 {
                let qn: Vec<f64> = (0..n).map(|x| q[x] + t * step[x]).collect();
                let ln = lambda + t * step[n];
                let rnew = self.residual_vector(&qn, ln, beta);
                let nn = rnew.amax();
                if nn.is_finite() && nn < rn * (1.0 - 1e-4 * t) {
                    q = qn;
                    lambda = ln;
                    r = rnew;
                    rn = nn;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        (rn < opts.tol).then_some((q, lambda))
    }

    /// Packages a converged solution, re-checking the residual from the stored values.
    pub fn critical_point(&self, beta: f64, log_p: Vec<f64>, lambda: f64, opts: &NewtonOptions) -> Result<CriticalPoint> {
        let p: Vec<f64> = log_p.iter().map(|x| x.exp()).collect();
        let residual = self.stationarity_residual(&p, &log_p, lambda, beta);
        let u = self.energy(&p);
        let s = -p.iter().zip(&log_p).filter(|(x, _)| **x > 0.0).map(|(x, l)| x * l).sum::<f64>();
        let eig = self.scaled_hessian_eigenvalues(&log_p, beta, opts.tol_eig)?;
        let scale = eig.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let zero_cut = opts.tol_eig * scale;
        let signature = Signature {
            negative: eig.iter().filter(|&&x| x < -zero_cut).count(),
            zero: eig.iter().filter(|&&x| x.abs() <= zero_cut).count(),
            positive: eig.iter().filter(|&&x| x > zero_cut).count(),
        };
        let kind = match signature {
            Signature { zero: z, .. } if z > 0 => PointKind::Degenerate,
            Signature { negative: 0, .. } => PointKind::Minimum,
            Signature { positive: 0, .. } => PointKind::Maximum,
            _ => PointKind::Saddle,
        };
        Ok(CriticalPoint {
            beta,
            p,
            log_p,
            lambda,
            u,
            s,
            f: beta * u - (1.0 - beta) * s,
            signature,
            min_hessian_eig: eig.first().copied().unwrap_or(f64::INFINITY),
            kind,
            residual,
        })
    }

    /// Newton from `q0` followed by packaging.
    pub fn solve(&self, beta: f64, q0: &[f64], lambda0: Option<f64>, opts: &NewtonOptions) -> Option<CriticalPoint> {
        let (q, l) = self.newton(beta, q0, lambda0, opts)?;
        self.critical_point(beta, q, l, opts).ok().filter(|c| c.residual < opts.tol)
    }

    /// The uniform distribution, the unique critical point at `β = 0`.
    pub fn uniform_point(&self, opts: &NewtonOptions) -> Result<CriticalPoint> {
        let n = self.len();
        let q = vec![-(n as f64).ln(); n];
        let lambda = 1.0 - (n as f64).ln();
        self.critical_point(0.0, q, lambda, opts)
    }

    /// Follows a critical point from its `β` to `beta_to` with adaptive secant steps.
    /// `slope` is `(dq/dβ, dλ/dβ)` when known.
    pub fn continue_point(
        &self,
        from: &CriticalPoint,
        slope: Option<(Vec<f64>, f64)>,
        beta_to: f64,
        opts: &NewtonOptions,
    ) -> Option<CriticalPoint> {
        let mut cur = from.clone();
        let mut slope = slope;
        let total = beta_to - cur.beta;
        let mut h = total;
        let min_h = 1e-7 * total.abs().clamp(1e-3, 1.0);
        while (beta_to - cur.beta).abs() > 1e-15 {
            let remaining = beta_to - cur.beta;
            if h.abs() > remaining.abs() {
                h = remaining;
            }
            let b = if h == remaining { beta_to } else { cur.beta + h };
            let db = b - cur.beta;
            let (q0, l0) = match &slope {
                Some((dq, dl)) => {
                    (cur.log_p.iter().zip(dq).map(|(q, d)| q + db * d).collect::<Vec<_>>(), cur.lambda + db * dl)
                }
                None => (cur.log_p.clone(), cur.lambda),
            };
            let quick = NewtonOptions { max_iter: 30, ..*opts };
            let next = self
                .solve(b, &q0, Some(l0), &quick)
                .filter(|c| c.distance(&cur) < 0.25 * MAX_LINK_JUMP);
            match next {
                Some(c) => {
                    let dq = c.log_p.iter().zip(&cur.log_p).map(|(a, b)| (a - b) / db).collect();
                    slope = Some((dq, (c.lambda - cur.lambda) / db));
                    cur = c;
                    h *= 2.0;
                }
                None => {
                    h *= 0.5;
                    if h.abs() < min_h {
                        return None;
                    }
                }
            }
        }
        (cur.distance(from) < MAX_LINK_JUMP).then_some(cur)
    }

    /// Secant slope between two points of one branch.
    pub fn secant(a: &CriticalPoint, b: &CriticalPoint) -> Option<(Vec<f64>, f64)> {
        let db = b.beta - a.beta;
        if db == 0.0 {
            return None;
        }
        Some((b.log_p.iter().zip(&a.log_p).map(|(x, y)| (x - y) / db).collect(), (b.lambda - a.lambda) / db))
    }
}

/// Orthonormal basis (as columns) of the complement of the unit vector `u`, via one
/// Householder reflection.
pub fn tangent_basis(u: &[f64]) -> DMatrix<f64> {
    let n = u.len();
    let mut w: Vec<f64> = u.to_vec();
    let s = if u[0] >= 0.0 { 1.0 } else { -1.0 };
    w[0] += s;
    let ww: f64 = w.iter().map(|x| x * x).sum();
    let h = DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 } - 2.0 * w[i] * w[j] / ww);
    h.columns(1, n - 1).into_owned()
}

/// A Dirichlet(1) sample in log coordinates.
pub fn dirichlet_log_start(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1).max(f64::MIN_POSITIVE)).collect();
    let total: f64 = e.iter().sum();
    e.iter().map(|x| (x / total).ln()).collect()
}

/// Orders points by `(F, p)` lexicographically.
pub fn sort_points(points: &mut [CriticalPoint]) {
    points.sort_by(|a, b| {
        a.f.total_cmp(&b.f).then_with(|| {
            a.p.iter().zip(&b.p).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        })
    });
}

/// Distinct critical points of `F(·, β)` reached by Newton from seeded Dirichlet(1) starts.
pub fn critical_points(fe: &FreeEnergy, beta: f64, n_starts: usize, seed: u64, opts: &NewtonOptions) -> Result<Vec<CriticalPoint>> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidArgument(format!("beta {beta} outside (0, 1)")));
    }
    if n_starts == 0 {
        return Err(Error::InvalidArgument("at least one start is needed".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<CriticalPoint> = Vec::new();
    for _ in 0..n_starts {
        let q0 = dirichlet_log_start(&mut rng, fe.len());
        if let Some(c) = fe.solve(beta, &q0, None, opts) {
            if !found.iter().any(|f| f.distance(&c) < DEDUP_TOL) {
                found.push(c);
            }
        }
    }
    sort_points(&mut found);
    Ok(found)
}

/// Largest relative mismatch between the analytic gradient and central differences
/// with step `h`, over `count` seeded interior points.
pub fn gradient_fd_check(fe: &FreeEnergy, beta: f64, count: usize, h: f64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = fe.len();
    let mut worst = 0.0f64;
    for _ in 0..count {
        let p: Vec<f64> = dirichlet_log_start(&mut rng, n).iter().map(|q| q.exp().max(1e-3)).collect();
        let grad = fe.gradient(&p, beta);
        let scale = grad.iter().fold(1e-12f64, |m, g| m.max(g.abs()));
        for i in 0..n {
            let mut a = p.clone();
            let mut b = p.clone();
            a[i] += h;
            b[i] -= h;
            let fd = (fe.evaluate(&a, beta).f - fe.evaluate(&b, beta).f) / (2.0 * h);
            worst = worst.max((fd - grad[i]).abs() / scale);
        }
    }
    worst
}

/// Largest relative mismatch between the analytic tangent Hessian and one built from
/// central differences of the gradient.
pub fn hessian_fd_check(fe: &FreeEnergy, beta: f64, count: usize, h: f64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = fe.len();
    let q = tangent_basis(&vec![1.0 / (n as f64).sqrt(); n]);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let p: Vec<f64> = dirichlet_log_start(&mut rng, n).iter().map(|q| q.exp().max(1e-3)).collect();
        let mut fd = DMatrix::zeros(n, n);
        for j in 0..n {
            let mut a = p.clone();
            let mut b = p.clone();
            a[j] += h;
            b[j] -= h;
            let (ga, gb) = (fe.gradient(&a, beta), fe.gradient(&b, beta));
            for i in 0..n {
                fd[(i, j)] = (ga[i] - gb[i]) / (2.0 * h);
            }
        }
        let fd_t = q.transpose() * &fd * &q;
        let an = fe.tangent_hessian(&p, beta);
        let scale = an.amax().max(1e-12);
        worst = worst.max((fd_t - an).amax() / scale);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::potential::green_function;

    fn k(n: usize) -> FreeEnergy {
        FreeEnergy::new(&green_function(&fixtures::complete_complex(n)).unwrap())
    }

    #[test]
    fn entropy_values() {
        assert!((entropy(&[1.0 / 7.0; 7]) - 7f64.ln()).abs() < 1e-12);
        assert!((entropy(&[1.0 / 3.0; 3]) - 3f64.ln()).abs() < 1e-12);
        assert_eq!(entropy(&[1.0, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn probability_vector_validation() {
        assert!(ProbabilityVector::new(vec![0.5, 0.5]).is_ok());
        assert!(ProbabilityVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbabilityVector::new(vec![1.5, -0.5]).is_err());
        assert_eq!(ProbabilityVector::new(vec![1.0, 0.0]).unwrap().support(), &[0]);
    }

    #[test]
    fn k1_free_energy_is_linear_in_beta() {
        let fe = k(1);
        for b in [0.0, 0.3, 1.0] {
            assert!((fe.evaluate(&[1.0], b).f - b).abs() < 1e-15);
        }
    }

    #[test]
    fn small_beta_gives_uniform() {
        let fe = k(3);
        let pts = critical_points(&fe, 1e-3, 20, 1, &NewtonOptions::default()).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].p.iter().all(|x| (x - 1.0 / 7.0).abs() < 1e-3));
        assert_eq!(pts[0].kind, PointKind::Minimum);
    }

    #[test]
    fn tangent_basis_is_orthonormal() {
        let u = vec![0.5; 4];
        let q = tangent_basis(&u);
        let gram = q.transpose() * &q;
        assert!((gram - DMatrix::identity(3, 3)).amax() < 1e-14);
        let uv = DVector::from_vec(u);
        assert!((q.transpose() * uv).amax() < 1e-14);
    }

    #[test]
    fn finite_difference_checks() {
        let fe = k(3);
        assert!(gradient_fd_check(&fe, 0.7, 50, 1e-6, 3) < 1e-5);
        assert!(hessian_fd_check(&fe, 0.7, 10, 1e-5, 3) < 1e-4);
    }

    #[test]
    fn scaled_hessian_has_tangent_inertia() {
        let fe = k(3);
        let opts = NewtonOptions::default();
        for c in critical_points(&fe, 0.9, 200, 5, &opts).unwrap() {
            let ev = sym_eigen(&fe.tangent_hessian(&c.p, 0.9), 1e-8).unwrap().values;
            let neg = ev.iter().filter(|&&x| x < 0.0).count();
            assert_eq!(neg, c.signature.negative);
        }
    }

    #[test]
    fn continuation_follows_the_uniform_branch() {
        let fe = k(2);
        let opts = NewtonOptions::default();
        let mut c = fe.uniform_point(&opts).unwrap();
        for i in 1..=30 {
            c = fe.continue_point(&c, None, i as f64 * 0.01, &opts).unwrap();
        }
        assert!(c.residual < 1e-12);
        assert_eq!(c.kind, PointKind::Minimum);
        let again = critical_points(&fe, 0.3, 50, 2, &opts).unwrap();
        assert!(again.iter().any(|p| p.distance(&c) < 1e-8));
    }
}
