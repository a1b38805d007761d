//! Subcommand implementations. Each returns the process exit code.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};
use twinopt_core::certify::certify_run;
use twinopt_core::constraints::{Constraint, IntersectionSystem, PartitionMatroid};
use twinopt_core::generators::{
    assign_groups, assign_weights_uniform, derive_seed, gen_ba, gen_er, gen_rr_sets,
    set_indegree_probabilities,
};
use twinopt_core::objectives::CutObjective;
use twinopt_core::solvers::{exact_max, EXACT_LIMIT};
use twinopt_core::{
    solve, Algorithm, IndependenceOracle, IndependenceSystem, RunReport, SetFunction, SolverParams,
    ValueOracle,
};

use crate::chart::sweep_svg;
use crate::cli::{
    CertifyArgs, CertifyFamily, GenGraphArgs, GenRrsetsArgs, GraphModel, ObjectiveArgs, RunArgs,
    SweepArgs, SweepAxis,
};
use crate::error::{CliError, CliResult, EXIT_CERTIFICATION, EXIT_OK};
use crate::formats::{
    parse_graph, write_file, write_graph, write_partition, write_rrsets, InputFiles,
};
use crate::instance::{load_objective, parse_constraint, Objective, ObjectiveSource};
use crate::report::{csv_string, pretty, run_json, CsvRow, Manifest};

fn emit(stdout: &mut dyn Write, text: &str) -> CliResult<()> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

fn write_manifest(
    manifest: &Manifest,
    path: Option<&Path>,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    let text = manifest.to_json();
    if let Some(path) = path {
        write_file(path, &text)?;
    }
    emit(stdout, &text)
}

/// Solves and records wall-clock time.
pub fn timed_solve<F: SetFunction, C: IndependenceSystem>(
    algo: Algorithm,
    f: &F,
    constraint: &C,
    params: &SolverParams,
) -> CliResult<RunReport> {
    let f = ValueOracle::new(f);
    let ind = IndependenceOracle::new(constraint);
    let start = Instant::now();
    let mut report = solve(algo, &f, &ind, params)?;
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

pub fn gen_graph(args: &GenGraphArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let g = match args.model {
        GraphModel::Er => {
            let p = args
                .p
                .ok_or_else(|| CliError::usage("--model er needs --p"))?;
            gen_er(args.n, p, args.seed)?
        }
        GraphModel::Ba => {
            let (m0, m) = args
                .m0
                .zip(args.m)
                .ok_or_else(|| CliError::usage("--model ba needs --m0 and --m"))?;
            gen_ba(args.n, m0, m, args.seed)?
        }
    };
    let g = match args.weights {
        Some((lo, hi)) => assign_weights_uniform(&g, lo, hi, derive_seed(args.seed, 1))?,
        None => g,
    };
    let g = if args.directed { g.to_directed() } else { g };
    let mut manifest = Manifest::new("gen-graph")
        .param("model", format!("{:?}", args.model).to_lowercase())
        .param("n", args.n)
        .param("p", args.p)
        .param("m0", args.m0)
        .param("m", args.m)
        .param("weights", args.weights)
        .param("groups", args.groups)
        .param("directed", args.directed)
        .param("edges", g.edge_count());
    manifest.seed = Some(args.seed);
    manifest.output(&args.out, write_file(&args.out, &write_graph(&g))?);
    if let Some(h) = args.groups {
        let groups = assign_groups(args.n, h, derive_seed(args.seed, 2))?;
        let path = args
            .parts_out
            .clone()
            .unwrap_or_else(|| with_suffix(&args.out, ".parts"));
        manifest.output(&path, write_file(&path, &write_partition(&groups, h))?);
    }
    write_manifest(&manifest, args.manifest.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn gen_rrsets(args: &GenRrsetsArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let mut inputs = InputFiles::default();
    let g = parse_graph(&inputs.read(&args.graph)?, &args.graph)?;
    let g = if args.indegree_probs {
        set_indegree_probabilities(&g.to_directed())?
    } else {
        g
    };
    let z = gen_rr_sets(&g, args.count, args.seed)?;
    let mut manifest = Manifest::new("gen-rrsets")
        .param("graph", args.graph.display().to_string())
        .param("count", args.count)
        .param("indegree_probs", args.indegree_probs);
    manifest.seed = Some(args.seed);
    manifest.inputs = inputs.hashes().clone();
    manifest.output(&args.out, write_file(&args.out, &write_rrsets(&z))?);
    write_manifest(&manifest, args.manifest.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

fn objective_source(args: &ObjectiveArgs) -> ObjectiveSource {
    ObjectiveSource {
        kind: args.objective.clone(),
        graph: args.graph.clone(),
        rrsets: args.rrsets.clone(),
        costs: args.costs.clone(),
        budget: args.budget,
        modular_weights: args.modular_weights.clone(),
    }
}

fn load_instance(args: &ObjectiveArgs) -> CliResult<(Objective, Constraint, InputFiles)> {
    let mut inputs = InputFiles::default();
    let objective = load_objective(&objective_source(args), &mut inputs)?;
    let constraint = parse_constraint(&args.constraint, &objective, &mut inputs)?;
    Ok((objective, constraint, inputs))
}

fn instance_context(args: &ObjectiveArgs, constraint: &Constraint, inputs: &InputFiles) -> Value {
    json!({
        "objective": args.objective,
        "graph": args.graph.as_ref().map(|p| p.display().to_string()),
        "rrsets": args.rrsets.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "costs": args.costs.as_ref().map(|p| p.display().to_string()),
        "budget": args.budget,
        "modular_weights": args.modular_weights,
        "constraint": args.constraint,
        "p": constraint.p(),
        "rank_bound": constraint.rank_bound(),
        "inputs": inputs.hashes(),
    })
}

fn check_exact_size(algo: Algorithm, n: usize) -> CliResult<()> {
    if algo == Algorithm::Exact && n > EXACT_LIMIT {
        return Err(CliError::usage(format!(
            "exact search supports at most {EXACT_LIMIT} elements, instance has {n}"
        )));
    }
    Ok(())
}

pub fn run(args: &RunArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let (objective, constraint, inputs) = load_instance(&args.instance)?;
    check_exact_size(args.algo, objective.ground_size())?;
    let params = SolverParams {
        epsilon: args.epsilon,
        sample_prob: args.q,
        seed: args.seed,
    };
    params.validate()?;
    let report = timed_solve(args.algo, &objective, &constraint, &params)?;
    let mut context = instance_context(&args.instance, &constraint, &inputs);
    let map = context.as_object_mut().expect("object");
    map.insert("command".into(), json!("run"));
    map.insert("epsilon".into(), json!(args.epsilon));
    map.insert("q".into(), json!(args.q));
    map.insert("seed".into(), json!(args.seed));
    let timing = !args.omit_timing;
    let text = pretty(&run_json(&report, context, timing));
    if let Some(path) = &args.out {
        write_file(path, &text)?;
    }
    if let Some(path) = &args.csv {
        let row = CsvRow::from_report(&report, String::new(), 0, timing);
        write_file(path, &csv_string(&[row])?)?;
    }
    emit(stdout, &text)?;
    Ok(EXIT_OK)
}

/// One sweep cell: an algorithm at an axis position and repetition.
struct Cell {
    algo_index: usize,
    axis_index: usize,
    rep: usize,
}

fn build_pool(jobs: Option<usize>) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::usage(format!("--jobs: {e}")))
}

pub fn sweep(args: &SweepArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let (objective, constraint, inputs) = load_instance(&args.instance)?;
    for &algo in &args.algos {
        check_exact_size(algo, objective.ground_size())?;
    }
    enum Point {
        Cap(usize),
        Epsilon(f64),
    }
    let points = args
        .values
        .iter()
        .map(|v| match args.axis {
            SweepAxis::Cap => v
                .trim()
                .parse()
                .map(Point::Cap)
                .map_err(|_| CliError::usage(format!("invalid cap {v:?}"))),
            SweepAxis::Epsilon => v
                .trim()
                .parse()
                .map(Point::Epsilon)
                .map_err(|_| CliError::usage(format!("invalid epsilon {v:?}"))),
        })
        .collect::<CliResult<Vec<Point>>>()?;
    let mut cells = Vec::new();
    for (algo_index, algo) in args.algos.iter().enumerate() {
        let reps = if algo.is_randomized() {
            args.reps.max(1)
        } else {
            1
        };
        for axis_index in 0..points.len() {
            for rep in 0..reps {
                cells.push(Cell {
                    algo_index,
                    axis_index,
                    rep,
                });
            }
        }
    }
    let timing = !args.omit_timing;
    let pool = build_pool(args.jobs)?;
    let rows: Vec<CsvRow> = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| {
                let algo = args.algos[cell.algo_index];
                let mut params = SolverParams {
                    epsilon: args.epsilon,
                    sample_prob: args.q,
                    seed: derive_seed(args.seed, cell.rep as u64),
                };
                let report = match points[cell.axis_index] {
                    Point::Cap(cap) => {
                        params.validate()?;
                        timed_solve(algo, &objective, &constraint.with_cap(cap), &params)?
                    }
                    Point::Epsilon(eps) => {
                        params.epsilon = eps;
                        params.validate()?;
                        timed_solve(algo, &objective, &constraint, &params)?
                    }
                };
                Ok(CsvRow::from_report(
                    &report,
                    args.values[cell.axis_index].trim().to_string(),
                    cell.rep,
                    timing,
                ))
            })
            .collect::<CliResult<Vec<CsvRow>>>()
    })?;
    // `cells` is already in (algorithm, axis, rep) order and the parallel
    // collect preserves it.
    let axis_name = match args.axis {
        SweepAxis::Cap => "cap",
        SweepAxis::Epsilon => "epsilon",
    };
    let mut manifest = Manifest::new("sweep")
        .param("axis", axis_name)
        .param("values", &args.values)
        .param(
            "algos",
            args.algos.iter().map(|a| a.name()).collect::<Vec<_>>(),
        )
        .param("epsilon", args.epsilon)
        .param("q", args.q)
        .param("reps", args.reps)
        .param("omit_timing", args.omit_timing)
        .param(
            "instance",
            instance_context(&args.instance, &constraint, &inputs),
        )
        .param(
            "rep_seeds",
            (0..args.reps.max(1) as u64)
                .map(|r| derive_seed(args.seed, r))
                .collect::<Vec<_>>(),
        );
    manifest.seed = Some(args.seed);
    manifest.inputs = inputs.hashes().clone();
    manifest.output(&args.out, write_file(&args.out, &csv_string(&rows)?)?);
    if let Some(svg) = &args.svg {
        manifest.output(svg, write_file(svg, &sweep_svg(&rows, axis_name))?);
    }
    write_manifest(&manifest, args.manifest.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

/// Random instance `index` of a certification suite: a weighted cut on
/// ER(n, 0.5) with U[0,1] weights and `n` in `2..=n_max`.
pub fn certify_instance(
    master: u64,
    index: usize,
    n_max: usize,
    family: CertifyFamily,
    p: usize,
) -> CliResult<(u64, CutObjective, Constraint)> {
    let seed = derive_seed(master, index as u64);
    let n = 2 + (seed % (n_max as u64 - 1)) as usize;
    let g = assign_weights_uniform(&gen_er(n, 0.5, seed)?, 0.0, 1.0, derive_seed(seed, 1))?;
    let partition = |j: u64| -> CliResult<Constraint> {
        let groups = assign_groups(n, 2, derive_seed(seed, 2 + j))?;
        Ok(Constraint::Partition(PartitionMatroid::new(groups, 2, 2)?))
    };
    let constraint = match family {
        CertifyFamily::Matroid => partition(0)?,
        CertifyFamily::Psystem => Constraint::Intersection(IntersectionSystem::new(
            (0..p as u64)
                .map(partition)
                .collect::<CliResult<Vec<_>>>()?,
        )?),
    };
    Ok((seed, CutObjective::new(&g), constraint))
}

/// One certified solver run.
struct CertifiedRun {
    algo: Algorithm,
    record: Value,
    histogram: BTreeMap<usize, usize>,
    holds: bool,
}

/// Per-algorithm aggregate of a certification suite.
struct AlgoSummary {
    runs: usize,
    violations: usize,
    min_ratio: f64,
    min_gain_slack: BTreeMap<String, f64>,
}

fn certify_one(args: &CertifyArgs, index: usize, p: usize) -> CliResult<Vec<CertifiedRun>> {
    let (seed, f, constraint) = certify_instance(args.seed, index, args.n_max, args.constraint, p)?;
    let fv = ValueOracle::new(&f);
    let iv = IndependenceOracle::new(&constraint);
    let opt = exact_max(&fv, &iv)?;
    let mut out = Vec::new();
    for &algo in &args.algos {
        let params = SolverParams {
            epsilon: args.epsilon,
            ..SolverParams::default()
        };
        let report = solve(algo, &fv, &iv, &params)?;
        let mut record = json!({
            "instance": index,
            "seed": seed,
            "n": f.ground_size(),
            "algorithm": algo.name(),
            "f_star": report.f_star,
            "optimum_value": opt.value,
            "optimum": opt.set,
        });
        let map = record.as_object_mut().expect("object");
        match certify_run(&report, &fv, &iv, &opt.set, opt.value, p) {
            Ok(cert) => {
                let holds = cert.holds();
                let slacks: BTreeMap<&str, f64> =
                    cert.gain_bounds.iter().map(|i| (i.name, i.slack)).collect();
                map.insert("holds".into(), json!(holds));
                map.insert("violations".into(), json!(cert.violations()));
                map.insert("ratio".into(), json!(cert.global.ratio));
                map.insert("ratio_bound".into(), json!(cert.global.ratio_bound));
                map.insert("gain_slacks".into(), json!(slacks));
                map.insert("global_slack".into(), json!(cert.global.sum_bound.slack));
                map.insert("residuals".into(), json!(cert.residuals));
                map.insert(
                    "max_preimage".into(),
                    json!(cert.pi_properties.max_preimage),
                );
                map.insert("value_queries".into(), json!(cert.value_queries));
                map.insert("query_budget".into(), json!(cert.query_budget));
                out.push(CertifiedRun {
                    algo,
                    record,
                    histogram: cert.pi.preimage_histogram(),
                    holds,
                });
            }
            Err(e) => {
                map.insert("holds".into(), json!(false));
                map.insert("violations".into(), json!([e.to_string()]));
                out.push(CertifiedRun {
                    algo,
                    record,
                    histogram: BTreeMap::new(),
                    holds: false,
                });
            }
        }
    }
    Ok(out)
}

pub fn certify(args: &CertifyArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    if !(2..=EXACT_LIMIT).contains(&args.n_max) {
        return Err(CliError::usage(format!(
            "--n-max must be in 2..={EXACT_LIMIT}"
        )));
    }
    for &algo in &args.algos {
        if !matches!(algo, Algorithm::TwinGreedy | Algorithm::TwinGreedyFast) {
            return Err(CliError::usage(format!(
                "certification is defined for twin and twinfast, not {algo}"
            )));
        }
    }
    let p = match args.constraint {
        CertifyFamily::Matroid => 1,
        CertifyFamily::Psystem if args.p >= 1 => args.p,
        CertifyFamily::Psystem => return Err(CliError::usage("--p must be at least 1")),
    };
    let pool = build_pool(args.jobs)?;
    let results = pool.install(|| {
        (0..args.instances)
            .into_par_iter()
            .map(|i| certify_one(args, i, p))
            .collect::<CliResult<Vec<_>>>()
    })?;
    let mut runs = Vec::new();
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    let mut by_algo: BTreeMap<&str, AlgoSummary> = BTreeMap::new();
    let mut violations = 0;
    for run in results.into_iter().flatten() {
        for (size, count) in run.histogram {
            *histogram.entry(size).or_insert(0) += count;
        }
        let entry = by_algo.entry(run.algo.name()).or_insert(AlgoSummary {
            runs: 0,
            violations: 0,
            min_ratio: f64::INFINITY,
            min_gain_slack: BTreeMap::new(),
        });
        entry.runs += 1;
        if !run.holds {
            entry.violations += 1;
            violations += 1;
        }
        if let Some(r) = run.record["ratio"].as_f64() {
            entry.min_ratio = entry.min_ratio.min(r);
        }
        if let Some(slacks) = run.record["gain_slacks"].as_object() {
            for (name, s) in slacks {
                let s = s.as_f64().unwrap_or(f64::NAN);
                let slot = entry
                    .min_gain_slack
                    .entry(name.clone())
                    .or_insert(f64::INFINITY);
                *slot = slot.min(s);
            }
        }
        runs.push(run.record);
    }
    let summary: BTreeMap<&str, Value> = by_algo
        .into_iter()
        .map(|(algo, agg)| {
            (
                algo,
                json!({
                    "runs": agg.runs,
                    "violations": agg.violations,
                    "min_ratio": agg.min_ratio.is_finite().then_some(agg.min_ratio),
                    "min_gain_slack": agg.min_gain_slack,
                }),
            )
        })
        .collect();
    let family = match args.constraint {
        CertifyFamily::Matroid => "matroid",
        CertifyFamily::Psystem => "psystem",
    };
    let head = json!({
        "command": "certify",
        "parameters": {
            "instances": args.instances,
            "n_max": args.n_max,
            "constraint": family,
            "p": p,
            "epsilon": args.epsilon,
            "algos": args.algos.iter().map(|a| a.name()).collect::<Vec<_>>(),
            "seed": args.seed,
            "rng": twinopt_core::generators::RNG_ALGORITHM,
        },
        "total_runs": runs.len(),
        "violations": violations,
        "by_algorithm": summary,
        "preimage_histogram": histogram,
    });
    if let Some(path) = &args.out {
        let mut full = head.clone();
        full.as_object_mut()
            .expect("object")
            .insert("runs".into(), Value::Array(runs));
        write_file(path, &pretty(&full))?;
    }
    emit(stdout, &pretty(&head))?;
    Ok(if violations == 0 {
        EXIT_OK
    } else {
        EXIT_CERTIFICATION
    })
}
