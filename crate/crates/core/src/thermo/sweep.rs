//! Continuation of critical points across `β`, with bifurcation and catastrophe detection.

use num::ToPrimitive;
use serde::Serialize;

use super::exact::{interior_energy_minimizer, zero_temperature_minimum};
use super::solver::{critical_points, CriticalPoint, FreeEnergy, NewtonOptions, DEDUP_TOL, MAX_LINK_JUMP};
use super::symmetry::{has_nontrivial_symmetry, related};
use crate::cliques::Adjacency;
use crate::error::{Error, Result};
use crate::potential::GreenFunction;

/// Width to which event brackets are bisected.
pub const LOCALIZE_WIDTH: f64 = 1e-6;
/// Events closer than this in `β` are treated as one.
pub const CLUSTER_TOL: f64 = 1e-5;
/// Upper bound on the smallest `|eigenvalue|` at a localized fold.
pub const FOLD_EIG_TOL: f64 = 0.05;
const SYMMETRY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub beta_from: f64,
    pub beta_to: f64,
    pub steps: usize,
    pub n_starts: usize,
    pub seed: u64,
    pub newton: NewtonOptions,
}

impl SweepConfig {
    pub fn new(beta_from: f64, beta_to: f64, steps: usize, n_starts: usize, seed: u64) -> Self {
        SweepConfig { beta_from, beta_to, steps, n_starts, seed, newton: NewtonOptions::default() }
    }

    pub fn grid(&self) -> Vec<f64> {
        let h = (self.beta_to - self.beta_from) / self.steps as f64;
        (0..=self.steps)
            .map(|i| if i == self.steps { self.beta_to } else { self.beta_from + i as f64 * h })
            .collect()
    }
}

/// A curve of critical points over consecutive grid columns.
#[derive(Clone, Debug, Serialize)]
pub struct Branch {
    pub id: usize,
    pub start: usize,
    pub points: Vec<CriticalPoint>,
}

impl Branch {
    pub fn end(&self) -> usize {
        self.start + self.points.len() - 1
    }

    pub fn at(&self, column: usize) -> Option<&CriticalPoint> {
        column.checked_sub(self.start).and_then(|k| self.points.get(k))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    SaddleNode,
    Pitchfork,
    Unclassified,
    Catastrophe,
}

#[derive(Clone, Debug, Serialize)]
pub struct Event {
    pub kind: EventKind,
    pub beta_lo: f64,
    pub beta_hi: f64,
    pub branches: Vec<usize>,
    pub involves_minimum: bool,
    pub min_abs_eig: Option<f64>,
    pub delta_f: Option<f64>,
    pub detail: String,
}

impl Event {
    pub fn beta(&self) -> f64 {
        0.5 * (self.beta_lo + self.beta_hi)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MinCurvePoint {
    pub beta: f64,
    pub global_min_f: Option<f64>,
    pub global_branch: Option<usize>,
    pub followed_f: Option<f64>,
    pub followed_branch: Option<usize>,
    pub discontinuity: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroTemperature {
    pub interior_energy: f64,
    pub min_energy: f64,
    pub min_support: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub beta_grid: Vec<f64>,
    pub branches: Vec<Branch>,
    /// Every detected event along any branch.
    pub events: Vec<Event>,
    /// Events that create, destroy or destabilize a local minimum.
    pub bifurcations: Vec<Event>,
    pub catastrophes: Vec<Event>,
    pub min_curve: Vec<MinCurvePoint>,
    pub zero_temperature: Option<ZeroTemperature>,
    pub notes: Vec<String>,
}

impl SweepReport {
    pub fn critical_points(&self) -> impl Iterator<Item = &CriticalPoint> {
        self.branches.iter().flat_map(|b| b.points.iter())
    }

    pub fn has_discontinuity(&self) -> bool {
        self.min_curve.iter().any(|m| m.discontinuity)
    }

    /// One row per point: `beta, branch_id, kind, F, U, S, lambda, min_hessian_eig, p_0..`.
    pub fn branches_csv(&self) -> String {
        let n = self.branches.first().and_then(|b| b.points.first()).map_or(0, |p| p.p.len());
        let mut header = vec!["beta", "branch_id", "kind", "F", "U", "S", "lambda", "min_hessian_eig"]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>();
        header.extend((0..n).map(|i| format!("p_{i}")));
        let mut out = header.join(",") + "\n";
        for col in 0..self.beta_grid.len() {
            for b in &self.branches {
                if let Some(c) = b.at(col) {
                    let mut row = vec![
                        c.beta.to_string(),
                        b.id.to_string(),
                        c.kind.as_str().to_string(),
                        c.f.to_string(),
                        c.u.to_string(),
                        c.s.to_string(),
                        c.lambda.to_string(),
                        c.min_hessian_eig.to_string(),
                    ];
                    row.extend(c.p.iter().map(f64::to_string));
                    out += &row.join(",");
                    out.push('\n');
                }
            }
        }
        out
    }
}

struct Tracker<'a> {
    fe: &'a FreeEnergy,
    opts: NewtonOptions,
    grid: Vec<f64>,
    branches: Vec<Branch>,
}

impl Tracker<'_> {
    fn points_at(&self, col: usize) -> impl Iterator<Item = (usize, &CriticalPoint)> {
        self.branches.iter().enumerate().filter_map(move |(i, b)| b.at(col).map(|c| (i, c)))
    }

    fn forward_slope(b: &Branch) -> Option<(Vec<f64>, f64)> {
        let k = b.points.len();
        (k >= 2).then(|| FreeEnergy::secant(&b.points[k - 2], &b.points[k - 1])).flatten()
    }

    fn backward_slope(b: &Branch) -> Option<(Vec<f64>, f64)> {
        (b.points.len() >= 2).then(|| FreeEnergy::secant(&b.points[0], &b.points[1])).flatten()
    }

    fn advance(&mut self, col: usize) {
        let beta = self.grid[col];
        for i in 0..self.branches.len() {
            let b = &self.branches[i];
            if b.end() + 1 != col {
                continue;
            }
            let last = b.points.last().expect("nonempty");
            if let Some(c) = self.fe.continue_point(last, Self::forward_slope(b), beta, &self.opts) {
                self.branches[i].points.push(c);
            }
        }
        let here: Vec<usize> = (0..self.branches.len()).filter(|&i| self.branches[i].at(col).is_some()).collect();
        for (a, &i) in here.iter().enumerate() {
            for &j in &here[a + 1..] {
                let (Some(x), Some(y)) = (self.branches[i].at(col), self.branches[j].at(col)) else { continue };
                if x.distance(y) < DEDUP_TOL && self.branches[j].points.len() > 1 {
                    self.branches[j].points.pop();
                }
            }
        }
    }

    fn discover(&mut self, col: usize, first_interior: usize, n_starts: usize, seed: u64) -> Result<()> {
        let beta = self.grid[col];
        let column_seed = seed ^ (col as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        for c in critical_points(self.fe, beta, n_starts, column_seed, &self.opts)? {
            if self.points_at(col).any(|(_, p)| p.distance(&c) < DEDUP_TOL) {
                continue;
            }
            self.branches.push(Branch { id: 0, start: col, points: vec![c] });
            self.backfill(self.branches.len() - 1, first_interior);
        }
        Ok(())
    }

    fn backfill(&mut self, idx: usize, first_interior: usize) {
        loop {
            let b = &self.branches[idx];
            if b.start <= first_interior {
                return;
            }
            let target = b.start - 1;
            let Some(c) = self.fe.continue_point(&b.points[0], Self::backward_slope(b), self.grid[target], &self.opts)
            else {
                return;
            };
            let hit = self.points_at(target).find(|(j, p)| *j != idx && p.distance(&c) < DEDUP_TOL).map(|(j, _)| j);
            match hit {
                Some(j) if self.branches[j].end() == target && j < idx => {
                    let tail = self.branches.remove(idx);
                    self.branches[j].points.extend(tail.points);
                    return;
                }
                Some(_) => return,
                None => {
                    let b = &mut self.branches[idx];
                    b.points.insert(0, c);
                    b.start -= 1;
                }
            }
        }
    }

    fn min_abs_eig(&self, c: &CriticalPoint) -> f64 {
        self.fe
            .scaled_hessian_eigenvalues(&c.log_p, c.beta, self.opts.tol_eig)
            .map(|e| e.iter().fold(f64::INFINITY, |m, x| m.min(x.abs())))
            .unwrap_or(f64::NAN)
    }

    /// Shrinks `[lo, hi]` around the end of existence of a point known at `anchor`.
    fn localize_existence(&self, anchor: &CriticalPoint, slope: Option<(Vec<f64>, f64)>, missing: f64) -> (f64, f64, CriticalPoint) {
        let mut pt = anchor.clone();
        let mut slope = slope;
        let mut gap = missing;
        while (gap - pt.beta).abs() > LOCALIZE_WIDTH {
            let mid = 0.5 * (gap + pt.beta);
            match self.fe.continue_point(&pt, slope.clone(), mid, &self.opts) {
                Some(c) => {
                    slope = FreeEnergy::secant(&pt, &c).or(slope);
                    pt = c;
                }
                None => gap = mid,
            }
        }
        let (lo, hi) = if gap < pt.beta { (gap, pt.beta) } else { (pt.beta, gap) };
        (lo, hi, pt)
    }

    /// Shrinks `[lo, hi]` around a change of Morse index along one branch.
    fn localize_index_change(&self, lo_pt: &CriticalPoint, hi_beta: f64) -> Option<(f64, f64, CriticalPoint)> {
        let index = lo_pt.morse_index();
        let mut lo = lo_pt.clone();
        let mut hi = hi_beta;
        let mut near = None;
        while hi - lo.beta > LOCALIZE_WIDTH {
            let mid = 0.5 * (lo.beta + hi);
            let c = self.fe.continue_point(&lo, None, mid, &self.opts)?;
            if c.morse_index() == index && c.signature.zero == 0 {
                lo = c;
            } else {
                hi = mid;
                near = Some(c);
            }
        }
        Some((lo.beta, hi, near.unwrap_or(lo)))
    }
}

struct Fold {
    branch: usize,
    birth: bool,
    lo: f64,
    hi: f64,
    point: CriticalPoint,
    min_abs: f64,
}

struct Primitive {
    kind: EventKind,
    lo: f64,
    hi: f64,
    branches: Vec<usize>,
    involves_minimum: bool,
    min_abs: Option<f64>,
    detail: String,
}

/// Traces critical points of `F(·, β)` across a uniform grid.
pub fn sweep(gf: &GreenFunction, config: &SweepConfig) -> Result<SweepReport> {
    let SweepConfig { beta_from, beta_to, steps, n_starts, seed, newton } = *config;
    if !(0.0..1.0).contains(&beta_from) || !(beta_to > beta_from && beta_to <= 1.0) {
        return Err(Error::InvalidArgument(format!("need 0 <= beta_from < beta_to <= 1, got {beta_from}, {beta_to}")));
    }
    if steps == 0 || n_starts == 0 {
        return Err(Error::InvalidArgument("steps and starts must be positive".into()));
    }
    if gf.is_empty() {
        return Err(Error::InvalidArgument("empty complex".into()));
    }
    let fe = FreeEnergy::new(gf);
    let adj = gf.connection_adjacency();
    let grid = config.grid();
    let interior: Vec<usize> = (0..grid.len()).filter(|&i| grid[i] > 0.0 && grid[i] < 1.0).collect();
    let mut t = Tracker { fe: &fe, opts: newton, grid: grid.clone(), branches: Vec::new() };
    let mut notes = Vec::new();
    if grid[0] == 0.0 {
        t.branches.push(Branch { id: 0, start: 0, points: vec![fe.uniform_point(&newton)?] });
        notes.push("beta = 0 column holds the uniform distribution; F = -S there and S = log n".into());
    }
    if let Some(&first) = interior.first() {
        for &col in &interior {
            t.advance(col);
            t.discover(col, first, n_starts, seed)?;
        }
    }
    for (i, b) in t.branches.iter_mut().enumerate() {
        b.id = i;
    }

    let mut primitives = Vec::new();
    if let (Some(&c0), Some(&cl)) = (interior.first(), interior.last()) {
        let mut folds = Vec::new();
        let mut changes = Vec::new();
        for (bi, b) in t.branches.iter().enumerate() {
            if b.start > c0 {
                let (lo, hi, point) = t.localize_existence(&b.points[0], Tracker::backward_slope(b), grid[b.start - 1]);
                let min_abs = t.min_abs_eig(&point);
                folds.push(Fold { branch: bi, birth: true, lo, hi, point, min_abs });
            }
            if b.end() < cl {
                let (lo, hi, point) = t.localize_existence(b.points.last().unwrap(), Tracker::forward_slope(b), grid[b.end() + 1]);
                let min_abs = t.min_abs_eig(&point);
                folds.push(Fold { branch: bi, birth: false, lo, hi, point, min_abs });
            }
            for col in b.start.max(c0)..b.end() {
                let (x, y) = (b.at(col).unwrap(), b.at(col + 1).unwrap());
                if x.morse_index() != y.morse_index() {
                    changes.push((bi, col, x.morse_index(), y.morse_index()));
                }
            }
        }
        primitives.extend(pair_folds(folds));
        for (bi, col, from, to) in changes {
            let b = &t.branches[bi];
            let located = t.localize_index_change(b.at(col).unwrap(), grid[col + 1]);
            let (lo, hi, point) = located.unwrap_or_else(|| (grid[col], grid[col + 1], b.at(col).unwrap().clone()));
            let participants = pitchfork_participants(&t, &adj, bi, col);
            let symmetric = has_nontrivial_symmetry(&adj, &b.at(col).unwrap().p, SYMMETRY_TOL);
            let kind = if symmetric && participants.len() >= 2 { EventKind::Pitchfork } else { EventKind::Unclassified };
            let mut branches = vec![bi];
            branches.extend(participants);
            primitives.push(Primitive {
                kind,
                lo,
                hi,
                branches,
                involves_minimum: from == 0 || to == 0,
                min_abs: Some(t.min_abs_eig(&point)),
                detail: format!("morse index {from} -> {to} on branch {bi}"),
            });
        }
    }
    let events = cluster(primitives);
    let bifurcations: Vec<Event> = events.iter().filter(|e| e.involves_minimum).cloned().collect();

    let zero_temperature = if grid.last() == Some(&1.0) {
        let interior_min = interior_energy_minimizer(gf)?;
        let (best, support) = zero_temperature_minimum(gf)?;
        notes.push("beta = 1 column uses the exact interior minimizer and support-restricted candidates".into());
        Some(ZeroTemperature {
            interior_energy: interior_min.energy.to_f64().unwrap_or(f64::NAN),
            min_energy: best.to_f64().unwrap_or(f64::NAN),
            min_support: support,
        })
    } else {
        None
    };
    let (min_curve, catastrophes) = min_curve(&t, &events, zero_temperature.as_ref());
    Ok(SweepReport {
        config: *config,
        beta_grid: grid,
        branches: t.branches,
        events,
        bifurcations,
        catastrophes,
        min_curve,
        zero_temperature,
        notes,
    })
}

fn pair_folds(mut folds: Vec<Fold>) -> Vec<Primitive> {
    folds.sort_by(|a, b| {
        a.birth.cmp(&b.birth).then(a.hi.total_cmp(&b.hi)).then(a.branch.cmp(&b.branch))
    });
    let mut used = vec![false; folds.len()];
    let mut out = Vec::new();
    for i in 0..folds.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let f = &folds[i];
        let partner = (0..folds.len())
            .filter(|&j| !used[j])
            .filter(|&j| {
                let g = &folds[j];
                g.birth == f.birth
                    && (g.lo - f.lo).abs() < CLUSTER_TOL
                    && g.point.morse_index().abs_diff(f.point.morse_index()) == 1
                    && g.point.distance(&f.point) < MAX_LINK_JUMP
            })
            .min_by(|&a, &b| folds[a].point.distance(&f.point).total_cmp(&folds[b].point.distance(&f.point)));
        let verb = if f.birth { "birth" } else { "death" };
        match partner {
            Some(j) => {
                used[j] = true;
                let g = &folds[j];
                let min_abs = f.min_abs.min(g.min_abs);
                let kind = if min_abs < FOLD_EIG_TOL { EventKind::SaddleNode } else { EventKind::Unclassified };
                out.push(Primitive {
                    kind,
                    lo: f.lo.min(g.lo),
                    hi: f.hi.max(g.hi),
                    branches: vec![f.branch.min(g.branch), f.branch.max(g.branch)],
                    involves_minimum: f.point.morse_index() == 0 || g.point.morse_index() == 0,
                    min_abs: Some(min_abs),
                    detail: format!("paired {verb} of branches {} and {}", f.branch, g.branch),
                });
            }
            None => out.push(Primitive {
                kind: EventKind::Unclassified,
                lo: f.lo,
                hi: f.hi,
                branches: vec![f.branch],
                involves_minimum: f.point.morse_index() == 0,
                min_abs: Some(f.min_abs),
                detail: format!("unpaired {verb} of branch {}", f.branch),
            }),
        }
    }
    out
}

/// Other branches near `bi` at the grid cell `(col, col + 1)`, all related to each other by
/// automorphisms of G′; empty if no such family exists.
fn pitchfork_participants(t: &Tracker, adj: &Adjacency, bi: usize, col: usize) -> Vec<usize> {
    let mut best: Vec<usize> = Vec::new();
    for c in [col, col + 1] {
        let Some(center) = t.branches[bi].at(c) else { continue };
        let near: Vec<(usize, &CriticalPoint)> =
            t.points_at(c).filter(|(j, p)| *j != bi && p.distance(center) < MAX_LINK_JUMP).collect();
        if near.len() < 2 {
            continue;
        }
        let orbit: Vec<usize> = near
            .iter()
            .filter(|(_, p)| related(adj, &near[0].1.p, &p.p, SYMMETRY_TOL))
            .map(|(j, _)| *j)
            .collect();
        if orbit.len() == near.len() && orbit.len() > best.len() {
            best = orbit;
        }
    }
    best
}

fn cluster(mut prims: Vec<Primitive>) -> Vec<Event> {
    prims.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.branches.cmp(&b.branches)));
    let mut groups: Vec<Vec<Primitive>> = Vec::new();
    for p in prims {
        match groups.last_mut() {
            Some(g) if (p.lo - g[0].lo).abs() < CLUSTER_TOL => g.push(p),
            _ => groups.push(vec![p]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let kind = if g.iter().any(|p| p.kind == EventKind::Pitchfork) {
                EventKind::Pitchfork
            } else if g.iter().any(|p| p.kind == EventKind::SaddleNode) {
                EventKind::SaddleNode
            } else {
                EventKind::Unclassified
            };
            let mut branches: Vec<usize> = g.iter().flat_map(|p| p.branches.iter().copied()).collect();
            branches.sort_unstable();
            branches.dedup();
            Event {
                kind,
                beta_lo: g.iter().map(|p| p.lo).fold(f64::INFINITY, f64::min),
                beta_hi: g.iter().map(|p| p.hi).fold(f64::NEG_INFINITY, f64::max),
                branches,
                involves_minimum: g.iter().any(|p| p.involves_minimum),
                min_abs_eig: g.iter().filter_map(|p| p.min_abs).reduce(f64::min),
                delta_f: None,
                detail: g.iter().map(|p| p.detail.as_str()).collect::<Vec<_>>().join("; "),
            }
        })
        .collect()
}

fn is_stable(c: &CriticalPoint) -> bool {
    c.signature.negative == 0
}

/// Global minimum of `F` over stable points per column, and the curve obtained by following
/// the initial minimum until it disappears or destabilizes.
fn min_curve(t: &Tracker, events: &[Event], zero: Option<&ZeroTemperature>) -> (Vec<MinCurvePoint>, Vec<Event>) {
    let mut curve = Vec::new();
    let mut catastrophes = Vec::new();
    let mut followed: Option<usize> = None;
    for (col, &beta) in t.grid.iter().enumerate() {
        if beta >= 1.0 {
            curve.push(MinCurvePoint {
                beta,
                global_min_f: zero.map(|z| z.min_energy),
                global_branch: None,
                followed_f: None,
                followed_branch: None,
                discontinuity: false,
            });
            continue;
        }
        let stable: Vec<(usize, &CriticalPoint)> = t.points_at(col).filter(|(_, c)| is_stable(c)).collect();
        let global = stable.iter().min_by(|a, b| a.1.f.total_cmp(&b.1.f).then(a.0.cmp(&b.0))).copied();
        let mut discontinuity = false;
        match followed {
            None => followed = global.map(|g| g.0),
            Some(b) => {
                let still = t.branches[b].at(col).filter(|c| is_stable(c));
                if still.is_none() {
                    if let Some((nb, np)) = global {
                        let old_f = t.branches[b].at(col).or(t.branches[b].points.last()).map(|c| c.f).unwrap();
                        let delta = np.f - old_f;
                        let (lo, hi) = events
                            .iter()
                            .filter(|e| e.branches.contains(&b) && e.beta_lo <= beta && e.beta_hi >= t.grid[col - 1])
                            .map(|e| (e.beta_lo, e.beta_hi))
                            .next()
                            .unwrap_or((t.grid[col - 1], beta));
                        discontinuity = delta.abs() > 1e-9;
                        if discontinuity {
                            catastrophes.push(Event {
                                kind: EventKind::Catastrophe,
                                beta_lo: lo,
                                beta_hi: hi,
                                branches: vec![b, nb],
                                involves_minimum: true,
                                min_abs_eig: None,
                                delta_f: Some(delta),
                                detail: format!("followed minimum jumps from branch {b} to branch {nb}"),
                            });
                        }
                        followed = Some(nb);
                    } else {
                        followed = None;
                    }
                }
            }
        }
        let followed_pt = followed.and_then(|b| t.branches[b].at(col));
        curve.push(MinCurvePoint {
            beta,
            global_min_f: global.map(|g| g.1.f),
            global_branch: global.map(|g| t.branches[g.0].id),
            followed_f: followed_pt.map(|c| c.f),
            followed_branch: followed,
            discontinuity,
        });
    }
    (curve, catastrophes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::potential::green_function;

    #[test]
    fn k1_sweep_is_trivial() {
        let gf = green_function(&fixtures::complete_complex(1)).unwrap();
        let r = sweep(&gf, &SweepConfig::new(0.0, 1.0, 10, 4, 1)).unwrap();
        assert_eq!(r.branches.len(), 1);
        assert!(r.events.is_empty());
        assert!(!r.has_discontinuity());
    }

    #[test]
    fn rejects_bad_ranges() {
        let gf = green_function(&fixtures::complete_complex(2)).unwrap();
        assert!(sweep(&gf, &SweepConfig::new(0.5, 0.5, 10, 4, 1)).is_err());
        assert!(sweep(&gf, &SweepConfig::new(0.0, 1.5, 10, 4, 1)).is_err());
        assert!(sweep(&gf, &SweepConfig::new(0.0, 1.0, 0, 4, 1)).is_err());
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let g = SweepConfig::new(0.0, 1.0, 7, 1, 0).grid();
        assert_eq!((g[0], g[7], g.len()), (0.0, 1.0, 8));
    }

    #[test]
    fn csv_has_fixed_columns() {
        let gf = green_function(&fixtures::complete_complex(2)).unwrap();
        let r = sweep(&gf, &SweepConfig::new(0.0, 0.2, 4, 4, 3)).unwrap();
        let csv = r.branches_csv();
        assert!(csv.starts_with("beta,branch_id,kind,F,U,S,lambda,min_hessian_eig,p_0,p_1,p_2\n"));
        assert_eq!(csv.lines().count(), 6);
    }
}
