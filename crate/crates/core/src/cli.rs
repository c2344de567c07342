//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::combinatorics::{count_series_oracle, count_triangulations, BoltzmannTables, LambdaParams};
use crate::continuum::{save_transform_table, simulate_backward_levy, simulate_pv, PvConfig, PvStart};
use crate::error::{Error, Result};
use crate::exec::{try_map_replicas, with_threads, Execution};
use crate::harness::{
    bridge_run, run_suite, save_reports, suite_passed, SuiteConfig, TestReport, DEFAULT_S_GRID, GROWTH_RATE,
};
use crate::mapbuild::{build_pshit_ball, check_geodesic_containment, hull_matches_trace, EdgeList};
use crate::peeling::{peel_replicas, RunMetadata};
use crate::rng::stream;

#[derive(Debug, Parser)]
#[command(name = "hyperplane", version, about = "Planar stochastic hyperbolic triangulations: enumeration, peeling, continuum limits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for replica parallelism (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact counts of triangulations with given inner vertices and perimeter.
    Enumerate {
        #[arg(long, default_value_t = 10)]
        n_max: u64,
        #[arg(long, default_value_t = 10)]
        p_max: u64,
        /// CSV file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// High-precision partition functions and Markov constants as JSON.
    Tables {
        #[command(flatten)]
        weight: Weight,
        #[arg(long, default_value_t = 64)]
        p_max: usize,
        /// Decimal digits.
        #[arg(long, default_value_t = 60)]
        precision: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Layered peeling; one hull-trace CSV per replica.
    Peel {
        #[command(flatten)]
        weight: Weight,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        rmax: u32,
    },
    /// Explicit maps with BFS hull and containment checks.
    BuildMap {
        #[command(flatten)]
        weight: Weight,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        rmax: u32,
    },
    /// Continuum paths, hull samples or transform tables.
    Continuum {
        #[arg(long, value_enum)]
        kind: ContinuumKind,
        /// Horizon (Lévy time or radius); a comma list for `transform`.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        r: Vec<f64>,
        #[arg(long, default_value_t = 1e-3)]
        eps_cut: f64,
        /// Number of path files written for `pv`.
        #[arg(long, default_value_t = 0)]
        paths: usize,
        /// Radius where the perimeter starts from its exact law.
        #[arg(long, default_value_t = 0.25)]
        r0: f64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Invariant suite; writes a JSON report array.
    Validate {
        /// Deterministic checks only.
        #[arg(long)]
        quick: bool,
        #[arg(long, env = "HYPERPLANE_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Near-critical hulls against the continuum transforms.
    Bridge {
        #[arg(long, value_delimiter = ',', default_value = "8,15,25")]
        n: Vec<u32>,
        #[arg(long, default_value_t = 0.5)]
        r: f64,
        #[arg(long, default_value_t = 2000)]
        replicas: u64,
        #[arg(long, env = "HYPERPLANE_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ContinuumKind {
    Levy,
    Pv,
    Transform,
}

/// Exactly one of a ratio to the critical weight or a near-critical scale.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Weight {
    #[arg(long)]
    pub lambda_ratio: Option<f64>,
    /// Near-critical scale `n`.
    #[arg(long)]
    pub n: Option<u32>,
}

impl Weight {
    fn params(&self) -> Result<LambdaParams> {
        match (self.lambda_ratio, self.n) {
            (Some(r), None) => LambdaParams::from_ratio(r),
            (None, Some(n)) => LambdaParams::near_critical(n),
            _ => Err(Error::Invalid("give exactly one of --lambda-ratio and --n".into())),
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 1)]
    pub replicas: u64,
    #[arg(long, env = "HYPERPLANE_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

/// Parses `argv` and runs the command; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let threads = cli.threads;
    match with_threads(threads, || execute(cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn exec() -> Execution {
    if cfg!(feature = "parallel") {
        Execution::Parallel
    } else {
        Execution::Sequential
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn execute(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Enumerate { n_max, p_max, out } => enumerate(n_max, p_max, out.as_deref()),
        Command::Tables {
            weight,
            p_max,
            precision,
            out,
        } => {
            let t = BoltzmannTables::new(weight.params()?, p_max, precision)?;
            if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
                ensure_dir(dir)?;
            }
            t.save(&out)?;
            Ok(0)
        }
        Command::Peel { weight, run, rmax } => peel(&weight, &run, rmax),
        Command::BuildMap { weight, run, rmax } => build_map(&weight, &run, rmax),
        Command::Continuum {
            kind,
            r,
            eps_cut,
            paths,
            r0,
            run,
        } => continuum(kind, &r, eps_cut, paths, r0, &run),
        Command::Validate { quick, seed, out } => {
            ensure_dir(&out)?;
            let cfg = SuiteConfig {
                quick,
                seed,
                exec: exec(),
            };
            let reports = run_suite(&cfg, |r| println!("{}", r.summary()));
            save_reports(&out.join("reports.json"), &reports)?;
            Ok(if suite_passed(&reports) { 0 } else { 1 })
        }
        Command::Bridge {
            n,
            r,
            replicas,
            seed,
            out,
        } => bridge(&n, r, replicas, seed, &out),
    }
}

fn enumerate(n_max: u64, p_max: u64, out: Option<&Path>) -> Result<i32> {
    let mut text = String::from("n,p,count\n");
    for p in 1..=p_max {
        for n in 0..=n_max {
            let c = match count_triangulations(n, p) {
                Ok(c) => c,
                Err(Error::ConventionHole { .. }) => count_series_oracle(n as usize, p as usize)?[p as usize - 1][n as usize].clone(),
                Err(e) => return Err(e),
            };
            text.push_str(&format!("{n},{p},{c}\n"));
        }
    }
    match out {
        Some(path) => write_file(path, &text)?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e))?,
    }
    Ok(0)
}

fn peel(weight: &Weight, run: &RunArgs, rmax: u32) -> Result<i32> {
    let params = weight.params()?;
    ensure_dir(&run.out)?;
    let traces = peel_replicas(params, rmax, run.replicas, run.seed, exec())?;
    for t in &traces {
        t.save_csv(&run.out.join(format!("trace_{:05}.csv", t.replica)))?;
    }
    let meta = RunMetadata::new(&params, weight.n, run.seed, run.replicas);
    write_file(&run.out.join("run.json"), &serde_json::to_string_pretty(&meta)?)?;
    Ok(0)
}

fn build_map(weight: &Weight, run: &RunArgs, rmax: u32) -> Result<i32> {
    let params = weight.params()?;
    ensure_dir(&run.out)?;
    let reports = try_map_replicas(run.replicas as usize, exec(), |k| -> Result<TestReport> {
        let (map, trace) = build_pshit_ball(params, rmax, run.seed, k as u64)?;
        let mut problems = Vec::new();
        if let Err(e) = map.validate() {
            problems.push(e.to_string());
        }
        if let Some(m) = hull_matches_trace(&map, &trace)? {
            problems.push(m);
        }
        for r in 1..=rmax / 2 {
            if !check_geodesic_containment(&map, r)? {
                problems.push(format!("containment fails at r = {r}"));
            }
        }
        write_file(&run.out.join(format!("map_{k:05}.txt")), &EdgeList::from_map(&map).to_text())?;
        trace.save_csv(&run.out.join(format!("trace_{k:05}.csv")))?;
        let mut report = TestReport::upper_bound(
            format!("map_oracle_{k:05}"),
            problems.len() as f64,
            0.0,
            serde_json::json!({"replica": k, "radius": rmax, "vertices": map.n_vertices}),
        );
        if let Some(p) = problems.first() {
            report = report.with_note(p.clone());
        }
        Ok(report)
    })?;
    save_reports(&run.out.join("oracle.json"), &reports)?;
    let meta = RunMetadata::new(&params, weight.n, run.seed, run.replicas);
    write_file(&run.out.join("run.json"), &serde_json::to_string_pretty(&meta)?)?;
    Ok(if suite_passed(&reports) { 0 } else { 1 })
}

fn continuum(kind: ContinuumKind, r: &[f64], eps_cut: f64, paths: usize, r0: f64, run: &RunArgs) -> Result<i32> {
    ensure_dir(&run.out)?;
    let horizon = *r.first().ok_or_else(|| Error::Invalid("--r needs a value".into()))?;
    match kind {
        ContinuumKind::Levy => {
            for k in 0..run.replicas {
                let mut rng = stream(run.seed, k);
                let path = simulate_backward_levy(horizon, eps_cut, &mut rng)?;
                path.save_csv(&run.out.join(format!("levy_{k:05}.csv")))?;
            }
        }
        ContinuumKind::Pv => {
            let cfg = PvConfig {
                start: PvStart::Marginal { r0 },
                eps_cut,
                ..PvConfig::default()
            };
            let samples = try_map_replicas(run.replicas as usize, exec(), |k| {
                let mut rng = stream(run.seed, k as u64);
                let record = PvConfig {
                    record: k < paths,
                    ..cfg
                };
                simulate_pv(horizon, &record, &mut rng)
            })?;
            let scale = (-GROWTH_RATE * horizon).exp();
            let mut text = String::from("replica,perimeter,volume,rescaled_perimeter\n");
            for (k, s) in samples.iter().enumerate() {
                text.push_str(&format!("{k},{:e},{:e},{:e}\n", s.perimeter, s.volume, s.perimeter * scale));
                if k < paths {
                    s.p_path.save_csv(&run.out.join(format!("perimeter_path_{k:05}.csv")))?;
                    s.v_path.save_csv(&run.out.join(format!("volume_path_{k:05}.csv")))?;
                }
            }
            write_file(&run.out.join("pv_samples.csv"), &text)?;
        }
        ContinuumKind::Transform => {
            let lambdas = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 12.0];
            let mus = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 24.0, 48.0];
            save_transform_table(&run.out.join("transform_table.csv"), r, &lambdas, &mus)?;
        }
    }
    Ok(0)
}

fn bridge(n: &[u32], r: f64, replicas: u64, seed: u64, out: &Path) -> Result<i32> {
    ensure_dir(out)?;
    let outcome = bridge_run(n, r, &DEFAULT_S_GRID, replicas, seed, exec())?;
    let mut text = String::from(
        "n,radius,s,perimeter_estimate,perimeter_stderr,perimeter_target,volume_estimate,volume_stderr,volume_target\n",
    );
    for row in &outcome.rows {
        for (i, &s) in outcome.s_grid.iter().enumerate() {
            text.push_str(&format!(
                "{},{},{s},{:e},{:e},{:e},{:e},{:e},{:e}\n",
                row.n,
                row.radius,
                row.perimeter.estimates[i],
                row.perimeter.stderr[i],
                crate::continuum::joint_transform(s, 0.0, r)?,
                row.volume.estimates[i],
                row.volume.stderr[i],
                crate::continuum::joint_transform(0.0, s, r)?,
            ));
        }
    }
    write_file(&out.join("bridge.csv"), &text)?;
    let report = outcome.report();
    println!("{}", report.summary());
    save_reports(&out.join("reports.json"), std::slice::from_ref(&report))?;
    Ok(if report.pass { 0 } else { 1 })
}
