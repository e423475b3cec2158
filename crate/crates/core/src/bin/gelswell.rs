use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use gelswell::assembly::Assembler;
use gelswell::bench::experiment::{parse_grid, run_experiment, write_csv, ExperimentConfig};
use gelswell::bench::{make_problem, ProblemKind};
use gelswell::elements::{apply_dirichlet, ElementPair};
use gelswell::linalg::matrix_market::write_matrix;
use gelswell::schwarz::{CoarseMode, NullspaceMode};

/// Monolithic Newton-Krylov-Schwarz solver for hydrogel swelling benchmarks.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    /// linear-elasticity, free-swelling-flux, free-swelling-mu or punch.
    #[arg(long, default_value = "free-swelling-flux")]
    problem: ProblemKind,
    /// q1q1 or q1rt0.
    #[arg(long, default_value = "q1rt0")]
    elements: ElementPair,
    /// Elements per axis.
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Subdomain grid mx,my,mz.
    #[arg(long, default_value = "2,2,2", value_parser = parse_grid)]
    subdomains: [usize; 3],
    /// Overlap in element layers.
    #[arg(long, default_value_t = 2)]
    overlap: usize,
    /// none, gdsw or rgdsw.
    #[arg(long, default_value = "gdsw")]
    coarse: CoarseMode,
    /// algebraic, translations3 or translations6.
    #[arg(long, default_value = "algebraic")]
    nullspace: NullspaceMode,
    /// Time step (s).
    #[arg(long, default_value_t = 0.05)]
    dt: f64,
    /// Number of time steps.
    #[arg(long, default_value_t = 2)]
    steps: usize,
    /// Relative GMRES tolerance.
    #[arg(long, default_value_t = 1e-8)]
    gmres_tol: f64,
    /// Summary CSV (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-Newton-iteration CSV.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Writes the first constrained tangent in Matrix Market format.
    #[arg(long)]
    export_matrix: Option<PathBuf>,
    /// key=value file overriding the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Cli {
    fn experiment(&self) -> gelswell::Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig {
            problems: vec![self.problem],
            pairs: vec![self.elements],
            n: self.n,
            subdomains: vec![self.subdomains],
            overlap: self.overlap,
            coarse: vec![self.coarse],
            nullspace: vec![self.nullspace],
            dt: self.dt,
            steps: self.steps,
            gmres_tol: self.gmres_tol,
            ..ExperimentConfig::default()
        };
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        Ok(cfg)
    }
}

fn export_matrix(cfg: &ExperimentConfig, path: &PathBuf) -> gelswell::Result<()> {
    let spec = cfg
        .runs()
        .into_iter()
        .next()
        .ok_or_else(|| gelswell::Error::InvalidParameter("empty sweep".into()))?;
    let n = cfg.mesh_size(spec.grid)?;
    let problem = make_problem(spec.problem, n, spec.pair.unwrap_or(ElementPair::Q1RT0))?;
    let model = &problem.model;
    let states = model.initial_states()?;
    let d = model.initial_solution();
    let sys = Assembler::new(model).assemble(model, &states, &d, cfg.dt, cfg.dt)?;
    let mut k = sys.k;
    let mut rhs: Vec<f64> = sys.r.iter().map(|v| -v).collect();
    apply_dirichlet(&model.constraints, &mut k, &mut rhs, &d, cfg.dt)?;
    write_matrix(&k, BufWriter::new(File::create(path)?))
}

fn run(cli: &Cli) -> gelswell::Result<()> {
    let cfg = cli.experiment()?;
    if let Some(path) = &cli.export_matrix {
        export_matrix(&cfg, path)?;
    }
    let rows = run_experiment(&cfg);
    match &cli.out {
        Some(path) => write_csv(&rows, BufWriter::new(File::create(path)?))?,
        None => write_csv(&rows, io::stdout().lock())?,
    }
    if let Some(path) = &cli.report {
        let mut out = BufWriter::new(File::create(path)?);
        for (i, row) in rows.iter().enumerate() {
            if i > 0 {
                writeln!(out)?;
            }
            row.report.write_csv(&mut out)?;
        }
    }
    for row in rows.iter().filter(|r| !r.is_ok()) {
        eprintln!("{}: {}", row.problem.name(), row.status);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
