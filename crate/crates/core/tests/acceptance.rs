//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;

use nalgebra::DMatrix;
use num::rational::BigRational;
use simplicial_green::curvature::{
    ball_lemma_check, euler_vertex_curvature, poincare_hopf_indices, unstable_curvature, unstable_euler_curvature,
    FieldFunction,
};
use simplicial_green::derived::sphere_euler;
use simplicial_green::hodge::{
    block_spectra, hodge_blocks, hodge_pseudoinverse_diag, incidence, mckean_singer_check, supersymmetry_defect,
    DEFAULT_TIMES,
};
use simplicial_green::linalg::{int, ratio};
use simplicial_green::potential::{is_unimodular, total_energy};
use simplicial_green::thermo::{
    interior_energy_minimizer, san_diego_check, sweep, EventKind, FreeEnergy, SweepConfig, SweepReport,
};
use simplicial_green::verify::{verify_complex, Tolerances};
use simplicial_green::{erdos_renyi_graph, fixtures, green_function, ExactMatrix, GraphSpec, SimplicialComplex};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn random_complexes() -> Vec<(String, SimplicialComplex)> {
    let ps = [0.3, 0.5, 0.7];
    (0..50u64)
        .map(|seed| {
            let n = 4 + (seed as usize % 7);
            let p = ps[seed as usize % 3];
            (format!("er(n={n},p={p},seed={seed})"), SimplicialComplex::erdos_renyi_whitney(n, p, seed).unwrap())
        })
        .collect()
}

fn corpus() -> Vec<(String, SimplicialComplex)> {
    let mut all = fixtures::corpus().unwrap();
    all.extend(random_complexes());
    all
}

/// Face indices listed top dimension first, then vertices, then edges: the layout of the
/// displayed K₂ and K₃ matrices.
fn displayed_order(c: &SimplicialComplex) -> Vec<usize> {
    let dims = c.dims();
    let top = dims.iter().copied().max().unwrap_or(0);
    let mut order: Vec<usize> = (0..c.len()).filter(|&i| dims[i] == top).collect();
    for d in 0..top {
        order.extend((0..c.len()).filter(|&i| dims[i] == d));
    }
    order
}

fn criterion_1() -> Check {
    let k2_l = vec![vec![1, 1, 1], vec![1, 1, 0], vec![1, 0, 1]];
    let k2_g = vec![vec![-1, 1, 1], vec![1, 0, -1], vec![1, -1, 0]];
    let k3_l = vec![
        vec![1, 1, 1, 1, 1, 1, 1],
        vec![1, 1, 0, 0, 1, 1, 0],
        vec![1, 0, 1, 0, 1, 0, 1],
        vec![1, 0, 0, 1, 0, 1, 1],
        vec![1, 1, 1, 0, 1, 1, 1],
        vec![1, 1, 0, 1, 1, 1, 1],
        vec![1, 0, 1, 1, 1, 1, 1],
    ];
    let k3_g = vec![
        vec![1, 1, 1, 1, -1, -1, -1],
        vec![1, 0, 0, 0, 0, 0, -1],
        vec![1, 0, 0, 0, 0, -1, 0],
        vec![1, 0, 0, 0, -1, 0, 0],
        vec![-1, 0, 0, -1, 0, 1, 1],
        vec![-1, 0, -1, 0, 1, 0, 1],
        vec![-1, -1, 0, 0, 1, 1, 0],
    ];
    for (k, l, g) in [(2, k2_l, k2_g), (3, k3_l, k3_g)] {
        let c = fixtures::complete_complex(k);
        let gf = green_function(&c).map_err(|e| e.to_string())?;
        let order = displayed_order(&c);
        let l_ours = gf.laplacian().principal_submatrix(&order);
        let g_ours = gf.matrix().principal_submatrix(&order);
        ensure(l_ours == ExactMatrix::from_rows(&l).unwrap(), format!("K{k} connection Laplacian differs"))?;
        ensure(g_ours == ExactMatrix::from_rows(&g).unwrap(), format!("K{k} Green function differs"))?;
    }
    Ok("K2 and K3 L' and g match entry for entry".into())
}

fn criterion_2() -> Check {
    let mut named = fixtures::corpus().unwrap();
    named.extend(random_complexes());
    for (name, c) in &named {
        let gf = green_function(c).map_err(|e| e.to_string())?;
        ensure(is_unimodular(&gf), format!("{name}: det L' = {}", gf.det_laplacian()))?;
        ensure(gf.is_integer(), format!("{name}: g not integral"))?;
    }
    Ok(format!("|det L'| = 1 on {} complexes", named.len()))
}

fn criterion_3() -> Check {
    let mut faces = 0;
    for (name, c) in corpus() {
        let gf = green_function(&c).map_err(|e| e.to_string())?;
        let g = gf.matrix();
        let rows = g.row_sums();
        for (x, dim) in c.dims().into_iter().enumerate() {
            let chi = sphere_euler(&c, x).map_err(|e| e.to_string())?;
            ensure(*g.get(x, x) == int(1 - chi), format!("{name}: diagonal law at face {x}"))?;
            let sign = if dim % 2 == 0 { 1 } else { -1 };
            ensure(rows[x] == g.get(x, x) * int(sign), format!("{name}: row-sum law at face {x}"))?;
            faces += 1;
        }
    }
    Ok(format!("diagonal and row-sum laws exact on {faces} faces"))
}

fn criterion_4() -> Check {
    for (name, c) in corpus() {
        let gf = green_function(&c).map_err(|e| e.to_string())?;
        let chi = c.euler_characteristic();
        ensure(unstable_curvature(&c).total() == chi, format!("{name}: sum of K+ != chi"))?;
        ensure(total_energy(&gf) == int(chi), format!("{name}: sum of g != chi"))?;
    }
    let ico = green_function(&fixtures::icosahedron()).map_err(|e| e.to_string())?;
    ensure(total_energy(&ico) == int(2), "icosahedron total energy != 2")?;
    Ok("sum K+ = sum g = chi on corpus; icosahedron energy 2".into())
}

fn criterion_5() -> Check {
    for (name, c) in corpus() {
        let gf = green_function(&c).map_err(|e| e.to_string())?;
        let chi = int(c.euler_characteristic());
        let dims = c.dims();
        ensure(gf.matrix().super_trace(&dims).unwrap() == chi, format!("{name}: str(g) != chi"))?;
        ensure(gf.laplacian().super_trace(&dims).unwrap() == chi, format!("{name}: str(L') != chi"))?;
    }
    Ok("str(g) = str(L') = chi on corpus".into())
}

fn criterion_6() -> Check {
    for (name, c) in corpus() {
        let r = ball_lemma_check(&c);
        ensure(r == 0, format!("{name}: ball lemma residual {r}"))?;
    }
    Ok("ball lemma residual 0 on corpus".into())
}

fn multiset_distance(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn repeat(v: f64, k: usize) -> impl Iterator<Item = f64> {
    std::iter::repeat_n(v, k)
}

fn criterion_7() -> Check {
    let tol = 1e-8;
    for (name, c) in corpus() {
        ensure(incidence(&c).is_chain_complex(), format!("{name}: d∘d != 0"))?;
        let heat = mckean_singer_check(&c, &DEFAULT_TIMES, tol).map_err(|e| e.to_string())?;
        let worst = heat.iter().map(|h| h.residual).fold(0.0, f64::max);
        ensure(worst < tol, format!("{name}: McKean-Singer residual {worst:e}"))?;
        let spectra = block_spectra(&hodge_blocks(&c).unwrap(), tol).map_err(|e| e.to_string())?;
        let d = supersymmetry_defect(&spectra, tol);
        ensure(d.is_some_and(|d| d < tol), format!("{name}: super-symmetry defect {d:?}"))?;
    }
    let ico = fixtures::icosahedron();
    let spectra = block_spectra(&hodge_blocks(&ico).unwrap(), tol).map_err(|e| e.to_string())?;
    let s5 = 5f64.sqrt();
    let nonzero = |v: &[f64]| v.iter().copied().filter(|x| x.abs() > tol).collect::<Vec<_>>();
    let l0: Vec<f64> = repeat(5.0 + s5, 3).chain(repeat(5.0 - s5, 3)).chain(repeat(6.0, 5)).collect();
    let l2: Vec<f64> = repeat(3.0 + s5, 3)
        .chain(repeat(3.0 - s5, 3))
        .chain(repeat(5.0, 4))
        .chain(repeat(3.0, 4))
        .chain(repeat(2.0, 5))
        .collect();
    let e0 = multiset_distance(nonzero(&spectra[0]), l0);
    let e2 = multiset_distance(nonzero(&spectra[2]), l2);
    ensure(e0 < tol && e2 < tol, format!("icosahedron spectra off by {e0:e}, {e2:e}"))?;
    ensure(spectra[0].len() - nonzero(&spectra[0]).len() == 1, "L0 kernel dimension != 1")?;
    let diag = hodge_pseudoinverse_diag(&ico, tol).map_err(|e| e.to_string())?;
    let dims = ico.dims();
    let worst = |dim: usize, v: f64| {
        diag.iter().zip(&dims).filter(|(_, &d)| d == dim).map(|(x, _)| (x - v).abs()).fold(0.0, f64::max)
    };
    let (w0, w1) = (worst(0, 7.0 / 36.0), worst(1, 86.0 / 225.0));
    ensure(w0 < 1e-9 && w1 < 1e-9, format!("pseudo-inverse diagonals off by {w0:e}, {w1:e}"))?;
    Ok("d∘d = 0, heat traces, super-symmetry, icosahedron spectra, pseudo-inverse diagonals 7/36 and 86/225".into())
}

fn criterion_8() -> Check {
    let cases = [(2, vec![3, 2, 2], 7), (3, vec![7, 4, 4, 4, 6, 6, 6], 37)];
    for (k, weights, z) in cases {
        let c = fixtures::complete_complex(k);
        let gf = green_function(&c).map_err(|e| e.to_string())?;
        let m = interior_energy_minimizer(&gf).map_err(|e| e.to_string())?;
        let order = displayed_order(&c);
        let p: Vec<BigRational> = order.iter().map(|&i| m.p[i].clone()).collect();
        let expected: Vec<BigRational> = weights.iter().map(|&w| ratio(w, z)).collect();
        ensure(p == expected, format!("K{k}: p = {p:?}"))?;
        ensure(m.energy == ratio(1, z), format!("K{k}: U = {}", m.energy))?;
    }
    Ok("K2 (3,2,2)/7 with U=1/7; K3 (7,4,4,4,6,6,6)/37 with U=1/37".into())
}

fn criterion_9() -> Check {
    let mut graphs: Vec<(String, GraphSpec)> = ["k1", "k2", "k3", "c4", "octahedron", "icosahedron"]
        .iter()
        .map(|n| (n.to_string(), fixtures::named_graph(n).unwrap()))
        .collect();
    graphs.extend((0..20u64).map(|s| (format!("er{s}"), erdos_renyi_graph(4 + s as usize % 6, 0.5, 100 + s).unwrap())));
    for (name, g) in &graphs {
        let c = SimplicialComplex::whitney(g).map_err(|e| e.to_string())?;
        let k = euler_vertex_curvature(g);
        ensure(k.total() == int(c.euler_characteristic()), format!("{name}: sum K(v) != chi"))?;
        let pushed = unstable_euler_curvature(g).map_err(|e| e.to_string())?;
        ensure(pushed == k, format!("{name}: pushed curvature differs"))?;
    }
    Ok(format!("Gauss-Bonnet and pointwise pushed curvature on {} graphs", graphs.len()))
}

fn criterion_10() -> Check {
    let mut count = 0;
    for (name, c) in fixtures::corpus().unwrap() {
        let chi = c.euler_characteristic();
        for seed in 0..200u64 {
            let f = FieldFunction::random_permutation(&c, seed);
            let total: i64 = poincare_hopf_indices(&c, &f).iter().sum();
            ensure(total == chi, format!("{name} seed {seed}: index sum {total} != {chi}"))?;
            count += 1;
        }
    }
    Ok(format!("index sums equal chi for {count} functions"))
}

/// Independent recomputation of `max_x |2β(gp)_x + (1-β)(q_x + 1) - λ|` and `|Σp - 1|` with
/// `p = exp(q)`; entries of `p` may underflow to zero while `q` stays finite.
fn stationarity(g: &DMatrix<f64>, beta: f64, log_p: &[f64], lambda: f64) -> f64 {
    let n = log_p.len();
    let p: Vec<f64> = log_p.iter().map(|q| q.exp()).collect();
    let mut worst = (p.iter().sum::<f64>() - 1.0).abs();
    for x in 0..n {
        let gp: f64 = (0..n).map(|y| g[(x, y)] * p[y]).sum();
        worst = worst.max((2.0 * beta * gp + (1.0 - beta) * (log_p[x] + 1.0) - lambda).abs());
    }
    worst
}

fn fd_gradient_error(fe: &FreeEnergy, beta: f64, samples: usize, seed: u64) -> f64 {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = fe.len();
    let h = 1e-6;
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..1.0)).collect();
        let s: f64 = w.iter().sum();
        let p: Vec<f64> = w.iter().map(|x| x / s).collect();
        let grad = fe.gradient(&p, beta);
        for i in 0..n {
            let (mut a, mut b) = (p.clone(), p.clone());
            a[i] += h;
            b[i] -= h;
            let fd = (fe.evaluate(&a, beta).f - fe.evaluate(&b, beta).f) / (2.0 * h);
            worst = worst.max((fd - grad[i]).abs() / grad[i].abs().max(1.0));
        }
    }
    worst
}

fn sweep_of(k: usize) -> SweepReport {
    let gf = green_function(&fixtures::complete_complex(k)).unwrap();
    sweep(&gf, &SweepConfig::new(0.0, 1.0, 1000, 32, 7)).unwrap()
}

fn criterion_11() -> Check {
    const K2_BETA: f64 = 0.443_056_9;
    const K3_SADDLE_NODE: f64 = 0.660_368_0;
    const K3_PITCHFORK: f64 = 0.683_697_5;
    const BETA_TOL: f64 = 1e-4;

    for k in [1, 2, 3] {
        let fe = FreeEnergy::new(&green_function(&fixtures::complete_complex(k)).unwrap());
        for (i, beta) in [0.2, 0.5, 0.8].into_iter().enumerate() {
            let e = fd_gradient_error(&fe, beta, 50, 11 * k as u64 + i as u64);
            ensure(e < 1e-5, format!("K{k} beta {beta}: gradient vs finite differences {e:e}"))?;
        }
    }
    let mut points = 0;
    let mut summary = Vec::new();
    for (k, expected) in [(2, vec![(EventKind::SaddleNode, K2_BETA)]), (3, vec![
        (EventKind::SaddleNode, K3_SADDLE_NODE),
        (EventKind::Pitchfork, K3_PITCHFORK),
    ])] {
        let r = sweep_of(k);
        let g = green_function(&fixtures::complete_complex(k)).unwrap().to_f64();
        for c in r.critical_points().filter(|c| c.beta > 0.0 && c.beta < 1.0) {
            ensure(c.p.iter().zip(&c.log_p).all(|(p, q)| *p == q.exp()), format!("K{k}: p != exp(log p)"))?;
            let res = stationarity(&g, c.beta, &c.log_p, c.lambda);
            ensure(res < 1e-12, format!("K{k} beta {}: stationarity residual {res:e}", c.beta))?;
            points += 1;
        }
        let found: Vec<(EventKind, f64)> = r.bifurcations.iter().map(|e| (e.kind, e.beta())).collect();
        ensure(found.len() == expected.len(), format!("K{k}: bifurcations {found:?}"))?;
        for ((kind, beta), (want_kind, want_beta)) in found.iter().zip(&expected) {
            ensure(kind == want_kind, format!("K{k}: got {kind:?}, expected {want_kind:?}"))?;
            ensure((beta - want_beta).abs() < BETA_TOL, format!("K{k}: {kind:?} at {beta}, expected {want_beta}"))?;
        }
        if k == 3 {
            ensure(r.has_discontinuity() && !r.catastrophes.is_empty(), "K3: no catastrophe on the min-F curve")?;
        }
        summary.push(format!("K{k} {found:.6?}"));
    }
    Ok(format!("{points} points stationary; {}; K3 catastrophe", summary.join("; ")))
}

fn criterion_12() -> Check {
    for (k, z) in [(2, 7), (3, 37)] {
        let c = fixtures::complete_complex(k);
        let gf = green_function(&c).unwrap();
        let r = san_diego_check(&c, &gf, 1e-8).map_err(|e| e.to_string())?;
        ensure(r.z == z && r.eigenvector_exact, format!("K{k}: Z = {}, exact = {}", r.z, r.eigenvector_exact))?;
        ensure(r.eigenvalue_residual < 1e-8, format!("K{k}: top eigenvalue {}", r.top_eigenvalue))?;
        ensure(r.chi_residual < 1e-10, format!("K{k}: conjugated sum residual {:e}", r.chi_residual))?;
    }
    Ok("Z = 7 and 37 exact; conjugated chi identity within 1e-10".into())
}

fn criterion_13() -> Check {
    let render_verify = || {
        corpus()
            .iter()
            .map(|(_, c)| serde_json::to_string(&verify_complex(c, &Tolerances::default()).unwrap()).unwrap())
            .collect::<Vec<_>>()
    };
    ensure(render_verify() == render_verify(), "verify output differs between runs")?;
    let gf = green_function(&fixtures::complete_complex(3)).unwrap();
    let config = SweepConfig::new(0.0, 1.0, 200, 8, 99);
    let render_sweep = || {
        let r = sweep(&gf, &config).unwrap();
        (serde_json::to_string(&r).unwrap(), r.branches_csv())
    };
    ensure(render_sweep() == render_sweep(), "sweep output differs between runs")?;
    Ok("verify and sweep byte-identical across runs".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("exact K2/K3 fixtures", criterion_1),
        ("unimodularity", criterion_2),
        ("diagonal and row-sum laws", criterion_3),
        ("Gauss-Bonnet and energy theorem", criterion_4),
        ("super traces", criterion_5),
        ("ball lemma", criterion_6),
        ("Hodge", criterion_7),
        ("energy minimizers", criterion_8),
        ("curvature pushing", criterion_9),
        ("Poincare-Hopf", criterion_10),
        ("free-energy solver and sweeps", criterion_11),
        ("San Diego identities", criterion_12),
        ("determinism", criterion_13),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = std::time::Instant::now();
        match run() {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} ({:.1?})", i + 1, t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
