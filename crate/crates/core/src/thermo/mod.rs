//! Shannon entropy, the Helmholtz free energy `F = βU - (1-β)S` and its critical points.

mod exact;
mod solver;
mod sweep;
mod symmetry;

pub use exact::*;
pub use solver::*;
pub use sweep::*;
pub use symmetry::*;

use serde::Serialize;

use crate::potential::GreenFunction;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub entropy: f64,
    pub slope: f64,
    pub max_slope_magnitude: f64,
    /// `S(p) = 0`: `F(p, T) = U(p)` is constant.
    pub boundary: bool,
    pub strictly_decreasing: bool,
}

/// Checks that `T ↦ U(p) - T S(p)` is strictly decreasing on `temperatures`, with slope `-S(p)`
/// of magnitude at most `log n`.
pub fn monotonicity_check(gf: &GreenFunction, p: &[f64], temperatures: &[f64]) -> MonotonicityReport {
    let fe = FreeEnergy::new(gf);
    let u = fe.energy(p);
    let s = entropy(p);
    let max = (p.len().max(1) as f64).ln();
    let mut sorted = temperatures.to_vec();
    sorted.sort_by(f64::total_cmp);
    let values: Vec<f64> = sorted.iter().map(|t| u - t * s).collect();
    let decreasing = values.windows(2).zip(sorted.windows(2)).all(|(f, t)| t[0] == t[1] || f[1] < f[0]);
    MonotonicityReport {
        entropy: s,
        slope: -s,
        max_slope_magnitude: max,
        boundary: s == 0.0,
        strictly_decreasing: s > 0.0 && decreasing && s <= max + 1e-12,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub points: usize,
    /// Points with `∂F/∂β = U + S > 0`.
    pub derivative_violations: usize,
    /// Points with `F ≤ 0`.
    pub sign_violations: usize,
    pub max_derivative: Option<f64>,
    pub min_f: Option<f64>,
    /// Same counts for `βU + (1-β)S`, whose derivative is `U - S`.
    pub magnitude_derivative_violations: usize,
    pub magnitude_sign_violations: usize,
}

/// Counts critical points of a sweep violating `U + S ≤ 0` or `F > 0`, and the analogous
/// conditions for the positive-entropy form `βU + (1-β)S`; nothing is asserted.
pub fn conjecture_probe(report: &SweepReport) -> ConjectureReport {
    report.critical_points().fold(ConjectureReport::default(), |mut r, c| {
        let d = c.u + c.s;
        r.points += 1;
        r.derivative_violations += usize::from(d > 0.0);
        r.sign_violations += usize::from(c.f <= 0.0);
        r.max_derivative = Some(r.max_derivative.map_or(d, |m: f64| m.max(d)));
        r.min_f = Some(r.min_f.map_or(c.f, |m: f64| m.min(c.f)));
        r.magnitude_derivative_violations += usize::from(c.u - c.s > 0.0);
        r.magnitude_sign_violations += usize::from(c.beta * c.u + (1.0 - c.beta) * c.s <= 0.0);
        r
    })
}
