use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use hyrrt_core::io::{run_benchmark, run_plan, validate_output, ModeSummary, RunConfig, RunOutput};
use hyrrt_core::planner::PlannerMode;

const DEFAULT_PLAN_OUTPUT: &str = "run_output.json";
const DEFAULT_BENCH_OUTPUT: &str = "benchmark.csv";

#[derive(Parser)]
#[command(
    name = "hyrrt",
    version,
    about = "Motion planning for hybrid systems with bidirectional RRTs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one seeded planning attempt and write the run output.
    Plan {
        #[command(flatten)]
        common: Common,
        /// Planner variant: hyrrt, bi_hyrrt or hyrrt_connect.
        #[arg(long)]
        mode: Option<PlannerMode>,
        /// Include both search trees in the output.
        #[arg(long)]
        dump_trees: bool,
    },
    /// Run several seeds per planner variant and write a CSV summary.
    Benchmark {
        #[command(flatten)]
        common: Common,
        /// Planner variants to compare; repeat or comma-separate. Defaults to all three.
        #[arg(long, value_delimiter = ',')]
        mode: Vec<PlannerMode>,
        #[arg(long, default_value_t = 20)]
        runs: usize,
    },
    /// Check a stored plan against the configured system.
    Validate {
        /// Run output file holding the plan.
        plan: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// JSON run configuration. Defaults apply to anything it leaves out.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Matching tolerance delta for connecting the trees.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(s) = self.seed {
            config.planner.seed = s;
        }
        if let Some(k) = self.max_iterations {
            config.planner.max_iterations = k;
        }
        if let Some(d) = self.tolerance {
            config.planner.delta = d;
        }
        if let Some(o) = &self.output {
            config.output.path = Some(o.clone());
        }
        Ok(config)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn cmd_plan(common: &Common, mode: Option<PlannerMode>, dump_trees: bool) -> Result<ExitCode> {
    let mut config = common.load()?;
    if let Some(m) = mode {
        config.planner.mode = m;
    }
    config.output.dump_trees |= dump_trees;
    let (result, output) = run_plan(&config)?;
    let path = config.output.path.clone().unwrap_or_else(|| DEFAULT_PLAN_OUTPUT.into());
    write_file(&path, &output.to_json())?;
    let endpoint = output
        .provenance
        .as_ref()
        .map_or("-".to_string(), |p| format!("{:.3e}", p.endpoint_error));
    println!(
        "status={} mode={} seed={} vertices={} time={:.3}s endpoint_error={} output={}",
        if result.is_found() { "found" } else { "failure" },
        output.mode,
        output.seed,
        output.stats.vertices(),
        output.timing.wall_time_s,
        endpoint,
        path.display()
    );
    Ok(if result.is_found() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn summary_table(summaries: &[ModeSummary]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["metric".to_string()];
    header.extend(summaries.iter().map(|s| s.mode.to_string()));
    w.write_record(&header)?;
    let mut rows: Vec<(&str, Vec<f64>)> = vec![
        ("runs", summaries.iter().map(|s| s.runs as f64).collect()),
        ("success_rate", summaries.iter().map(|s| s.success_rate).collect()),
        ("time_mean_s", summaries.iter().map(|s| s.time_mean_s).collect()),
        ("time_median_s", summaries.iter().map(|s| s.time_median_s).collect()),
        ("vertices_mean", summaries.iter().map(|s| s.vertices_mean).collect()),
        ("vertices_median", summaries.iter().map(|s| s.vertices_median).collect()),
    ];
    if summaries.iter().all(|s| s.runs > 1) {
        rows.push(("time_std_s", summaries.iter().filter_map(|s| s.time_std_s).collect()));
        rows.push((
            "vertices_std",
            summaries.iter().filter_map(|s| s.vertices_std).collect(),
        ));
    }
    for (name, values) in rows {
        let mut rec = vec![name.to_string()];
        rec.extend(values.iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn cmd_benchmark(common: &Common, modes: &[PlannerMode], runs: usize) -> Result<ExitCode> {
    let config = common.load()?;
    let modes = if modes.is_empty() { &PlannerMode::ALL[..] } else { modes };
    let summaries = run_benchmark(&config, runs, modes)?;
    let table = summary_table(&summaries)?;
    let path = config
        .output
        .path
        .clone()
        .unwrap_or_else(|| DEFAULT_BENCH_OUTPUT.into());
    write_file(&path, &table)?;
    print!("{table}");
    std::io::stdout().flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(plan: &Path, common: &Common) -> Result<ExitCode> {
    let config = common.load()?;
    let output = RunOutput::load(plan)?;
    let report = validate_output(&output, &config)?;
    println!(
        "valid={} flow_residual={:.3e} set_violation={:.3e} jump_residual={:.3e} seam_gap={:.3e}",
        report.valid,
        report.worst_flow_residual,
        report.worst_set_violation,
        report.worst_jump_residual(),
        report.max_seam_gap()
    );
    for f in report.failures.iter().take(5) {
        println!("  {f}");
    }
    Ok(if report.valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn main() -> ExitCode {
    // Usage errors are configuration errors (exit 1); exit 2 is reserved for
    // planning failures and invalid plans.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match &cli.command {
        Command::Plan {
            common,
            mode,
            dump_trees,
        } => cmd_plan(common, *mode, *dump_trees),
        Command::Benchmark { common, mode, runs } => cmd_benchmark(common, mode, *runs),
        Command::Validate { plan, common } => cmd_validate(plan, common),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(1)
    })
}
