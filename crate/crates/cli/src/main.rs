use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use simplicial_green::curvature::{euler_vertex_curvature, stable_curvature, unstable_curvature, unstable_euler_curvature};
use simplicial_green::derived::{connection_graph, refinement_graph};
use simplicial_green::hodge::{betti, block_spectra, hodge_blocks, mckean_singer_check, supersymmetry_defect, DEFAULT_TIMES};
use simplicial_green::io::{complex_to_json, matrix_to_csv, matrix_to_json, parse_input, Input};
use simplicial_green::potential::{is_unimodular, total_energy, zeta};
use simplicial_green::thermo::{
    conjecture_probe, critical_points, interior_energy_minimizer, san_diego_check, support_candidates, sweep,
    zero_temperature_minimum, FreeEnergy, NewtonOptions, SweepConfig,
};
use simplicial_green::verify::{verify_complex, Tolerances};
use simplicial_green::{fixtures, green_function, Error, GraphSpec, SimplicialComplex};

#[derive(Parser)]
#[command(name = "sgreen", version, about = "Green functions, curvature identities and free-energy sweeps on simplicial complexes")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_newton: f64,
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_eig: f64,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write tabular output (CSV) here.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct Source {
    /// Complex (`faces` or `maximal`) or graph (`n`, `edges`) JSON file.
    #[arg(long, conflicts_with = "fixture")]
    input: Option<PathBuf>,
    /// Built-in graph: k<n>, c<n>, octahedron, icosahedron.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKindArg {
    Refinement,
    Connection,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity suite; exit 1 if any identity fails.
    Verify(Source),
    /// Whitney complex of a seeded Erdős–Rényi graph.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Barycentric refinement applied `times` times.
    Refine {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    /// Adjacency and degrees of a derived graph.
    Graph {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum)]
        kind: GraphKindArg,
    },
    /// The Green function `g = (1 + A′)^{-1}`.
    Green(Source),
    /// Per-face and per-vertex curvatures as CSV.
    Curvature(Source),
    /// Hodge spectra, Betti numbers and heat-trace residuals.
    Hodge(Source),
    /// Energy minimizers at β = 1, or critical points of F at a given β.
    Minimize {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 64)]
        starts: usize,
    },
    /// Trace critical points of F across β.
    Sweep {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 0.0)]
        beta_from: f64,
        #[arg(long, default_value_t = 1.0)]
        beta_to: f64,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
        #[arg(long, default_value_t = 64)]
        starts: usize,
    },
    /// Coefficients of det(1 + zA′) and optionally ζ(z).
    Zeta {
        #[command(flatten)]
        source: Source,
        /// Rational point such as `1/3`.
        #[arg(long)]
        at: Option<String>,
    },
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SingularMatrix | Error::EigenResidual { .. } | Error::Asymmetric { .. } => Failure::Check(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<bool, Failure>;

fn load(source: &Source) -> Result<Input, Failure> {
    match (&source.input, &source.fixture) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            Ok(parse_input(&text)?)
        }
        (None, Some(name)) => fixtures::named_graph(name)
            .map(Input::Graph)
            .ok_or_else(|| Failure::Input(format!("unknown fixture {name}"))),
        (None, None) => Err(Failure::Input("one of --input or --fixture is required".into())),
    }
}

fn load_complex(source: &Source) -> Result<SimplicialComplex, Failure> {
    Ok(load(source)?.into_complex()?)
}

fn emit(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(g: &Global, v: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(v).expect("json value");
    text.push('\n');
    emit(&g.out, &text)
}

fn faces_json(c: &SimplicialComplex) -> Value {
    json!(c.faces().iter().map(|f| f.vertices()).collect::<Vec<_>>())
}

fn newton(g: &Global) -> NewtonOptions {
    NewtonOptions { tol: g.tol_newton, tol_eig: g.tol_eig, ..NewtonOptions::default() }
}

fn parse_rational(s: &str) -> Result<num::rational::BigRational, Failure> {
    s.trim().parse().map_err(|_| Failure::Input(format!("not a rational number: {s}")))
}

fn run(cli: Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Verify(src) => {
            let c = load_complex(src)?;
            let r = verify_complex(&c, &Tolerances { eig: g.tol_eig, heat: g.tol_eig })?;
            emit_json(g, &serde_json::to_value(&r).expect("report"))?;
            Ok(r.passed)
        }
        Command::Random { n, p } => {
            let c = SimplicialComplex::erdos_renyi_whitney(*n, *p, g.seed)?;
            emit(&g.out, &(complex_to_json(&c) + "\n"))?;
            Ok(true)
        }
        Command::Refine { source, times } => {
            let mut c = load_complex(source)?;
            for _ in 0..*times {
                c = c.barycentric_refinement()?;
            }
            emit(&g.out, &(complex_to_json(&c) + "\n"))?;
            if let Some(path) = &g.csv {
                let fv: Vec<String> = c.fvector().iter().map(usize::to_string).collect();
                emit(&Some(path.clone()), &format!("{}\n", fv.join(",")))?;
            }
            Ok(true)
        }
        Command::Graph { source, kind } => {
            let c = load_complex(source)?;
            let (name, d) = match kind {
                GraphKindArg::Refinement => ("refinement", refinement_graph(&c)),
                GraphKindArg::Connection => ("connection", connection_graph(&c)),
            };
            let a = d.adjacency_matrix();
            if let Some(path) = &g.csv {
                emit(&Some(path.clone()), &matrix_to_csv(&a))?;
            }
            emit_json(
                g,
                &json!({
                    "kind": name,
                    "faces": faces_json(&c),
                    "edges": d.edge_count(),
                    "degrees": d.degrees(),
                    "adjacency": matrix_to_json(&a),
                }),
            )?;
            Ok(true)
        }
        Command::Green(src) => {
            let c = load_complex(src)?;
            let gf = green_function(&c)?;
            if let Some(path) = &g.csv {
                emit(&Some(path.clone()), &matrix_to_csv(gf.matrix()))?;
            }
            emit_json(
                g,
                &json!({
                    "faces": faces_json(&c),
                    "det_laplacian": gf.det_laplacian().to_string(),
                    "unimodular": is_unimodular(&gf),
                    "total_energy": total_energy(&gf).to_string(),
                    "laplacian": matrix_to_json(gf.laplacian()),
                    "green": matrix_to_json(gf.matrix()),
                }),
            )?;
            Ok(true)
        }
        Command::Curvature(src) => {
            let input = load(src)?;
            let graph: Option<GraphSpec> = input.graph().cloned();
            let c = input.into_complex()?;
            let (minus, plus) = (stable_curvature(&c), unstable_curvature(&c));
            let mut csv = String::from("kind,face,dim,value\n");
            for (kind, k) in [("stable", &minus), ("unstable", &plus)] {
                for (f, v) in c.faces().iter().zip(&k.values) {
                    let face: Vec<String> = f.vertices().iter().map(usize::to_string).collect();
                    csv += &format!("{kind},{},{},{v}\n", face.join(" "), f.dim());
                }
            }
            let mut summary = json!({
                "euler_characteristic": c.euler_characteristic(),
                "stable_total": minus.total(),
                "unstable_total": plus.total(),
            });
            if let Some(graph) = graph {
                let k = euler_vertex_curvature(&graph);
                let kt = unstable_euler_curvature(&graph)?;
                for (name, vc) in [("vertex", &k), ("vertex_pushed", &kt)] {
                    for (v, x) in vc.values.iter().enumerate() {
                        csv += &format!("{name},{v},0,{x}\n");
                    }
                }
                summary["vertex_total"] = json!(k.total().to_string());
                summary["pushed_equals_vertex"] = json!(k == kt);
            }
            match &g.csv {
                Some(path) => {
                    emit(&Some(path.clone()), &csv)?;
                    emit_json(g, &summary)?;
                }
                None => emit(&g.out, &csv)?,
            }
            Ok(true)
        }
        Command::Hodge(src) => {
            let c = load_complex(src)?;
            let h = hodge_blocks(&c)?;
            let spectra = block_spectra(&h, g.tol_eig)?;
            let heat = mckean_singer_check(&c, &DEFAULT_TIMES, g.tol_eig)?;
            let defect = supersymmetry_defect(&spectra, g.tol_eig);
            emit_json(
                g,
                &json!({
                    "fvector": c.fvector(),
                    "betti": betti(&c),
                    "euler_characteristic": c.euler_characteristic(),
                    "spectra": spectra,
                    "mckean_singer": heat,
                    "supersymmetry_defect": defect,
                }),
            )?;
            Ok(heat.iter().all(|t| t.residual < g.tol_eig) && defect.is_some_and(|d| d < g.tol_eig))
        }
        Command::Minimize { source, beta, starts } => {
            let c = load_complex(source)?;
            let gf = green_function(&c)?;
            match beta {
                Some(b) => {
                    let fe = FreeEnergy::new(&gf);
                    let pts = critical_points(&fe, *b, *starts, g.seed, &newton(g))?;
                    emit_json(g, &json!({ "beta": b, "critical_points": pts }))?;
                    Ok(true)
                }
                None => {
                    let m = interior_energy_minimizer(&gf)?;
                    let sd = san_diego_check(&c, &gf, g.tol_eig)?;
                    let (best, support) = zero_temperature_minimum(&gf)?;
                    let strings = |v: &[num::rational::BigRational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
                    let cands: Vec<Value> = support_candidates(&gf)?
                        .iter()
                        .map(|s| json!({ "support": s.support, "p": strings(&s.p), "energy": s.energy.to_string() }))
                        .collect();
                    emit_json(
                        g,
                        &json!({
                            "interior": {
                                "p": strings(&m.p),
                                "z": m.z,
                                "energy": m.energy.to_string(),
                                "lambda": m.lambda.to_string(),
                            },
                            "san_diego": sd,
                            "support_candidates": cands,
                            "minimum": { "energy": best.to_string(), "support": support },
                        }),
                    )?;
                    Ok(sd.passes(g.tol_eig, 1e-10))
                }
            }
        }
        Command::Sweep { source, beta_from, beta_to, steps, starts } => {
            let c = load_complex(source)?;
            let gf = green_function(&c)?;
            let config = SweepConfig { newton: newton(g), ..SweepConfig::new(*beta_from, *beta_to, *steps, *starts, g.seed) };
            let r = sweep(&gf, &config)?;
            if let Some(path) = &g.csv {
                emit(&Some(path.clone()), &r.branches_csv())?;
            }
            let mut events: Vec<_> = r.events.iter().chain(&r.catastrophes).collect();
            events.sort_by(|a, b| a.beta_lo.total_cmp(&b.beta_lo));
            emit_json(
                g,
                &json!({
                    "config": r.config,
                    "faces": faces_json(&c),
                    "branches": r.branches.len(),
                    "bifurcation_count": r.bifurcations.len(),
                    "bifurcations": r.bifurcations,
                    "events": events,
                    "discontinuity": r.has_discontinuity(),
                    "zero_temperature": r.zero_temperature,
                    "min_curve": r.min_curve,
                    "conjecture_probe": conjecture_probe(&r),
                    "notes": r.notes,
                }),
            )?;
            Ok(true)
        }
        Command::Zeta { source, at } => {
            let c = load_complex(source)?;
            let z = zeta(&c)?;
            let mut out = json!({ "det_coefficients": z.coefficients.iter().map(|x| x.to_string()).collect::<Vec<_>>() });
            if let Some(s) = at {
                let x = parse_rational(s)?;
                out["z"] = json!(x.to_string());
                out["det"] = json!(z.polynomial_at(&x).to_string());
                out["zeta"] = json!(z.eval(&x).map(|v| v.to_string()));
            }
            emit_json(g, &out)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
