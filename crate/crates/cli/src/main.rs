use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tropical_schubert::algebra::{chow_ring, mobius_algebra, subalgebra_hilbert_and_structure, theorem2_verdict_with};
use tropical_schubert::bergman::{build_augmented, build_bergman};
use tropical_schubert::catalog::{load, CATALOG_NAMES};
use tropical_schubert::cohomology::cohomology_table;
use tropical_schubert::matroid::Matroid;
use tropical_schubert::pipeline::{run_pipeline, PipelineOptions, Status, CHECK_NAMES, EXTRA_CHECKS, SIZE_LIMIT};
use tropical_schubert::schubert::{build_face_complex, export_stratification_dot, stratification};
use tropical_schubert::spectral::{acyclicity_check, e1_page, xi1_page};

/// Exact checks on tropical matroid Schubert varieties.
#[derive(Parser)]
#[command(name = "tsv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// A matroid document path or `catalog:NAME`.
    #[arg(long, global = true)]
    matroid: Option<String>,
    /// Highest p to examine (defaults to the rank).
    #[arg(long, global = true)]
    max_p: Option<usize>,
    /// Also write the result as JSON to this path (`-` for stdout).
    #[arg(long, global = true)]
    json: Option<String>,
    /// Run cell-complex computations above the size limit.
    #[arg(long, global = true)]
    force_large: bool,
    /// Accepted for compatibility; every computation is deterministic.
    #[arg(long, global = true)]
    seedless: bool,
    /// Suppress the text summary.
    #[arg(long, global = true)]
    quiet: bool,
    /// Record stage timings in reports.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Basic invariants: rank, flats, f-vector, N_p.
    Info,
    /// The augmented Bergman fan and the Bergman fan.
    Fan,
    /// The cell structure of Y_M and its strata.
    Faces,
    /// Dimensions of H^{p,q}(Y_M).
    Cohomology,
    /// E_1 / E_2 pages of the rank spectral sequence and the Koszul blocks.
    Spectral,
    /// Möbius algebra, Chow ring and the generated subalgebra.
    Algebra,
    /// Runs one named check, or `all`.
    Verify { check: String },
    /// The stratification poset as a DOT digraph.
    ExportDot,
    /// Lists catalog names and checks.
    Catalog,
}

enum Failure {
    Input(String),
    Check,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn emit(g: &Global, text: &str, value: &Value) -> Result<(), Failure> {
    if !g.quiet {
        print!("{text}");
    }
    if let Some(path) = &g.json {
        let body = serde_json::to_string_pretty(value).expect("serialisable") + "\n";
        if path == "-" {
            print!("{body}");
        } else {
            std::fs::write(path, body).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
        }
    }
    Ok(())
}

fn guard(g: &Global, m: &Matroid) -> Result<(), Failure> {
    if m.len() > SIZE_LIMIT && !g.force_large {
        return Err(Failure::Input(format!(
            "|E| = {} exceeds {SIZE_LIMIT}; pass --force-large to build the cell complex",
            m.len()
        )));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let g = &cli.global;
    if let Command::Catalog = cli.command {
        let text = format!(
            "catalog: {}\nchecks: {}\n",
            CATALOG_NAMES.join(", "),
            CHECK_NAMES.iter().chain(EXTRA_CHECKS.iter()).copied().collect::<Vec<_>>().join(", ")
        );
        return emit(
            g,
            &text,
            &json!({ "catalog": CATALOG_NAMES, "checks": CHECK_NAMES, "extra_checks": EXTRA_CHECKS }),
        );
    }
    let source =
        g.matroid.as_deref().ok_or_else(|| Failure::Input("--matroid <file|catalog:NAME> is required".into()))?;
    let (name, m) = load(source).map_err(input)?;
    let d = m.rank();
    let top = g.max_p.map_or(d, |p| p.min(d));
    match &cli.command {
        Command::Catalog => unreachable!("handled above"),
        Command::Info => {
            let w = m.whitney_numbers();
            let f = m.f_vector();
            let n: Vec<i64> = (0..=d).map(|p| m.big_n(p)).collect();
            let chi = m.characteristic_polynomial();
            let flats: Vec<Vec<String>> = (0..=d)
                .map(|k| {
                    let lattice = m.flat_lattice();
                    (0..lattice.len())
                        .filter(|&i| lattice.rank(i) == k)
                        .map(|i| m.format_set(lattice.flats()[i]))
                        .collect()
                })
                .collect();
            let text = format!(
                "{name}: |E| = {}, rank {d}, {} bases\nloops {}, coloops {}\nflats by rank {:?}\nWhitney {w:?}\nf-vector {f:?}\nN_p {n:?}\ncharacteristic polynomial {chi}\nadmissible pairs {}\n",
                m.len(),
                m.bases().len(),
                m.format_set(m.loops()),
                m.format_set(m.coloops()),
                flats,
                m.admissible_pairs().len(),
            );
            let value = json!({
                "matroid": name, "ground_set": m.labels(), "rank": d, "bases": m.bases().len(),
                "flats": flats, "whitney_numbers": w, "f_vector": f, "n_p": n,
                "characteristic_polynomial": chi.to_string(), "admissible_pairs": m.admissible_pairs().len(),
            });
            emit(g, &text, &value)
        }
        Command::Fan => {
            let abf = build_augmented(&m);
            let fan = abf.fan();
            let bergman = build_bergman(&m).map_err(input)?;
            let rays: Vec<String> = fan.rays().iter().map(|r| format!("{r:?}")).collect();
            let text = format!(
                "augmented Bergman fan: {} rays, f-vector {:?}, pure {}\nrays {}\nBergman fan: f-vector {:?}\n",
                fan.rays().len(),
                fan.f_vector(),
                fan.is_pure(),
                rays.join(" "),
                bergman.f_vector()
            );
            let cones: Vec<Vec<usize>> = fan.cones().iter().map(|c| c.rays().to_vec()).collect();
            let value = json!({
                "matroid": name, "rays": fan.rays(), "cones": cones, "f_vector": fan.f_vector(),
                "bergman_f_vector": bergman.f_vector(),
            });
            emit(g, &text, &value)
        }
        Command::Faces => {
            guard(g, &m)?;
            let y = build_face_complex(&m).map_err(input)?;
            let mut text = format!(
                "{} cells, by dimension {:?}, {} strata\n",
                y.cells().len(),
                y.dims_histogram(),
                y.strata().len()
            );
            let mut strata = Vec::new();
            for (pair, cells) in stratification(&y) {
                text += &format!("  {} rank {}: {} cells\n", pair.label(&m), pair.rank, cells.len());
                strata.push(json!({ "label": pair.label(&m), "rank": pair.rank, "cells": cells.len() }));
            }
            let value = json!({ "matroid": name, "cells": y.cells().len(), "by_dimension": y.dims_histogram(), "strata": strata });
            emit(g, &text, &value)
        }
        Command::Cohomology => {
            guard(g, &m)?;
            let y = build_face_complex(&m).map_err(input)?;
            let t = cohomology_table(&y).map_err(input)?;
            let mut text = format!("dim H^{{p,q}}(Y_M) for {name} (rows p, columns q)\n");
            for p in 0..=top {
                text += &format!("  p={p}: {:?}\n", t.dims[p]);
            }
            text += &format!("diagonal {:?}, Whitney {:?}\n", t.diagonal(), m.whitney_numbers());
            emit(g, &text, &json!({ "matroid": name, "cohomology": t.dims[..=top] }))
        }
        Command::Spectral => {
            let mut text = String::new();
            let mut pages = Vec::new();
            for p in 0..=top {
                let page = e1_page(&m, p).map_err(input)?;
                let k = acyclicity_check(&m, p).map_err(input)?;
                let xi: Vec<Value> =
                    xi1_page(&m, p).map_err(input)?.into_iter().map(|((a, b), v)| json!([a, b, v])).collect();
                text += &format!(
                    "p={p}: E1 {:?}, E2 {:?}, Koszul blocks {} (exact for J nonempty: {}), Xi1 {:?}\n",
                    page.dims(),
                    page.homology_dims(),
                    k.blocks,
                    k.acyclic_nonempty,
                    xi
                );
                pages.push(json!({ "p": p, "e1": page.dims(), "e2": page.homology_dims(), "koszul": k, "xi1": xi }));
            }
            emit(g, &text, &json!({ "matroid": name, "pages": pages }))
        }
        Command::Algebra => {
            let b = mobius_algebra(&m);
            let chow = chow_ring(build_augmented(&m).fan(), d).map_err(input)?;
            let sub = subalgebra_hilbert_and_structure(&m).map_err(input)?;
            let mut value = json!({
                "matroid": name, "mobius_dims": b.dims(), "chow_dims": chow.dims(), "subalgebra": sub,
            });
            let mut text = format!(
                "B(M) dims {:?}\nA(augmented fan) dims {:?}\nsubalgebra generated by y_i: Hilbert {:?}, structure matches B(M): {}\n",
                b.dims(),
                chow.dims(),
                sub.hilbert,
                sub.structure_ok()
            );
            if m.len() <= SIZE_LIMIT || g.force_large {
                let diag = cohomology_table(&build_face_complex(&m).map_err(input)?).map_err(input)?.diagonal();
                let verdict = theorem2_verdict_with(&m, diag).map_err(input)?;
                text += &format!("cohomology ring isomorphic to B(M): {}\n", verdict.passed);
                value["theorem2"] = json!(verdict.passed);
            }
            emit(g, &text, &value)
        }
        Command::Verify { check } => {
            let checks = (check != "all").then(|| vec![check.clone()]);
            let options = PipelineOptions { max_p: g.max_p, force_large: g.force_large, timing: g.timing, checks };
            let report = run_pipeline(&name, &m, &options).map_err(input)?;
            let mut text = String::new();
            for c in &report.checks {
                let tag = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Skipped => "SKIP",
                };
                text += &format!("{tag} {}: {}\n", c.name, c.details);
            }
            emit(g, &text, &serde_json::to_value(&report).expect("serialisable"))?;
            if report.all_passed() {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::ExportDot => {
            let dot = export_stratification_dot(&m);
            emit(g, &dot, &json!({ "matroid": name, "dot": dot }))
        }
    }
}
