//! Sweep harness: runs a matrix of solver configurations and emits one CSV
//! row per run.
//!
//! Configuration files hold `key=value` lines with `#` comments. List-valued
//! keys accept `|`-separated alternatives, e.g. `subdomains=2,2,2|3,3,3`.

use std::io::Write;
use std::path::Path;

use super::problems::{make_problem, ProblemKind};
use crate::driver::{time_march, NewtonConfig, SolveReport};
use crate::elements::{dof_count, Discretization, ElementPair};
use crate::error::{Error, Result};
use crate::linalg::GmresConfig;
use crate::mesh::Decomposition;
use crate::schwarz::{CoarseMode, NullspaceMode, SchwarzConfig};

/// Relative symmetry defect above which a coupled run is flagged.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

pub const CSV_HEADER: &str = "problem,pair,subdomains,overlap,coarse,nullspace,dofs,coarse_dim,\
avg_krylov,max_krylov,newton_total,assemble_s,setup_s,krylov_s,solver_s,max_Ki_size,status";

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problems: Vec<ProblemKind>,
    pub pairs: Vec<ElementPair>,
    /// Elements per axis (strong scaling).
    pub n: usize,
    /// Elements per subdomain and axis; overrides `n` when set (weak scaling).
    pub weak_elements_per_axis: Option<usize>,
    pub subdomains: Vec<[usize; 3]>,
    pub overlap: usize,
    pub coarse: Vec<CoarseMode>,
    pub nullspace: Vec<NullspaceMode>,
    pub restricted: bool,
    pub dt: f64,
    pub steps: usize,
    pub gmres_tol: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            problems: vec![ProblemKind::FreeSwellingFlux],
            pairs: vec![ElementPair::Q1RT0],
            n: 8,
            weak_elements_per_axis: None,
            subdomains: vec![[2, 2, 2]],
            overlap: 2,
            coarse: vec![CoarseMode::Gdsw],
            nullspace: vec![NullspaceMode::Algebraic],
            restricted: true,
            dt: 0.05,
            steps: 2,
            gmres_tol: 1e-8,
        }
    }
}

fn parse_list<T>(value: &str, parse: impl Fn(&str) -> std::result::Result<T, String>) -> std::result::Result<Vec<T>, String> {
    value
        .split('|')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse)
        .collect()
}

fn parse_scalar<T: std::str::FromStr>(value: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.trim().parse::<T>().map_err(|e| format!("'{value}': {e}"))
}

/// Parses `mx,my,mz` (or a single `m` for a cubic grid).
pub fn parse_grid(s: &str) -> std::result::Result<[usize; 3], String> {
    let parts: Vec<usize> = s
        .split(|c| c == ',' || c == 'x')
        .map(parse_scalar)
        .collect::<std::result::Result<_, _>>()?;
    match parts.as_slice() {
        [m] => Ok([*m; 3]),
        [a, b, c] => Ok([*a, *b, *c]),
        _ => Err(format!("grid '{s}' needs 1 or 3 entries")),
    }
}

pub fn format_grid(g: [usize; 3]) -> String {
    format!("{}x{}x{}", g[0], g[1], g[2])
}

impl ExperimentConfig {
    /// Applies one `key=value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let key = key.trim().to_ascii_lowercase().replace('-', "_");
        match key.as_str() {
            "problem" | "problems" => self.problems = parse_list(value, |s| s.parse())?,
            "elements" | "pair" | "pairs" => self.pairs = parse_list(value, |s| s.parse())?,
            "n" => self.n = parse_scalar(value)?,
            "weak_elements_per_axis" => {
                self.weak_elements_per_axis = match value.trim() {
                    "" | "none" => None,
                    v => Some(parse_scalar(v)?),
                }
            }
            "subdomains" => self.subdomains = parse_list(value, parse_grid)?,
            "overlap" => self.overlap = parse_scalar(value)?,
            "coarse" => self.coarse = parse_list(value, |s| s.parse())?,
            "nullspace" => self.nullspace = parse_list(value, |s| s.parse())?,
            "restricted" => self.restricted = parse_scalar(value)?,
            "dt" => self.dt = parse_scalar(value)?,
            "steps" => self.steps = parse_scalar(value)?,
            "gmres_tol" => self.gmres_tol = parse_scalar(value)?,
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    /// Applies every assignment of a configuration text.
    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: i + 1, message };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected key=value, got '{line}'")))?;
            self.set(key, value).map_err(parse_err)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        self.apply_str(&std::fs::read_to_string(path)?)
    }

    pub fn from_str_with_defaults(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_str(text)?;
        Ok(cfg)
    }

    /// Mesh size for a subdomain grid.
    pub fn mesh_size(&self, grid: [usize; 3]) -> Result<usize> {
        match self.weak_elements_per_axis {
            None => Ok(self.n),
            Some(e) if grid[0] == grid[1] && grid[1] == grid[2] => Ok(e * grid[0]),
            Some(_) => Err(Error::InvalidParameter(
                "weak scaling needs cubic subdomain grids".into(),
            )),
        }
    }

    /// Every run of the sweep, in row order.
    pub fn runs(&self) -> Vec<RunSpec> {
        let mut runs = Vec::new();
        for &problem in &self.problems {
            let pairs: Vec<Option<ElementPair>> = if problem.is_coupled() {
                self.pairs.iter().copied().map(Some).collect()
            } else if self.pairs.is_empty() {
                Vec::new()
            } else {
                vec![None]
            };
            for &pair in &pairs {
                for &grid in &self.subdomains {
                    for &coarse in &self.coarse {
                        for &nullspace in &self.nullspace {
                            runs.push(RunSpec {
                                problem,
                                pair,
                                grid,
                                coarse,
                                nullspace,
                            });
                        }
                    }
                }
            }
        }
        runs
    }

    pub fn newton_config(&self, problem: ProblemKind) -> NewtonConfig {
        let steps = if problem.is_coupled() { self.steps } else { 1 };
        NewtonConfig {
            dt: self.dt,
            end_time: self.dt * steps as f64,
            gmres: GmresConfig {
                rel_tol: self.gmres_tol,
                ..GmresConfig::default()
            },
            check_symmetry: problem.is_coupled(),
            ..NewtonConfig::default()
        }
    }
}

/// One point of the sweep. `pair` is `None` for elasticity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSpec {
    pub problem: ProblemKind,
    pub pair: Option<ElementPair>,
    pub grid: [usize; 3],
    pub coarse: CoarseMode,
    pub nullspace: NullspaceMode,
}

impl RunSpec {
    pub fn discretization(&self) -> Discretization {
        self.pair.map_or(Discretization::Elasticity, Discretization::Coupled)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub problem: ProblemKind,
    pub pair: Option<ElementPair>,
    pub subdomains: [usize; 3],
    pub overlap: usize,
    pub coarse: CoarseMode,
    pub nullspace: NullspaceMode,
    pub dofs: usize,
    pub coarse_dim: usize,
    pub avg_krylov: f64,
    pub max_krylov: usize,
    pub newton_total: usize,
    pub assemble_s: f64,
    pub setup_s: f64,
    pub krylov_s: f64,
    pub solver_s: f64,
    pub max_ki_size: usize,
    /// `ok` or a failure description.
    pub status: String,
    pub report: SolveReport,
}

impl ExperimentRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{:.2},{},{},{:.4},{:.4},{:.4},{:.4},{},{}",
            self.problem.name(),
            self.pair.map_or("q1", |p| p.name()),
            format_grid(self.subdomains),
            self.overlap,
            self.coarse.name(),
            self.nullspace.name(),
            self.dofs,
            self.coarse_dim,
            self.avg_krylov,
            self.max_krylov,
            self.newton_total,
            self.assemble_s,
            self.setup_s,
            self.krylov_s,
            self.solver_s,
            self.max_ki_size,
            self.status.replace([',', '\n'], ";"),
        )
    }
}

/// Runs one configuration; failures are recorded in `status`.
pub fn run_single(config: &ExperimentConfig, spec: &RunSpec) -> ExperimentRow {
    let n = config.mesh_size(spec.grid).unwrap_or(config.n);
    let mut row = ExperimentRow {
        problem: spec.problem,
        pair: spec.pair,
        subdomains: spec.grid,
        overlap: config.overlap,
        coarse: spec.coarse,
        nullspace: spec.nullspace,
        dofs: dof_count(n, spec.discretization()),
        coarse_dim: 0,
        avg_krylov: 0.0,
        max_krylov: 0,
        newton_total: 0,
        assemble_s: 0.0,
        setup_s: 0.0,
        krylov_s: 0.0,
        solver_s: 0.0,
        max_ki_size: 0,
        status: "ok".into(),
        report: SolveReport::default(),
    };
    let result = (|| -> Result<SolveReport> {
        let n = config.mesh_size(spec.grid)?;
        let problem = make_problem(spec.problem, n, spec.pair.unwrap_or(ElementPair::Q1RT0))?;
        let decomp = Decomposition::new(&problem.model.mesh, spec.grid, config.overlap)?;
        let schwarz = SchwarzConfig {
            coarse: spec.coarse,
            nullspace: spec.nullspace,
            restricted: config.restricted,
        };
        let (report, _, _) = time_march(&problem.model, &decomp, schwarz, config.newton_config(spec.problem))?;
        Ok(report)
    })();
    match result {
        Ok(report) => {
            row.coarse_dim = report.coarse_dim();
            row.avg_krylov = report.avg_krylov();
            row.max_krylov = report.max_krylov();
            row.newton_total = report.newton_total();
            row.assemble_s = report.assemble_s();
            row.setup_s = report.setup_s();
            row.krylov_s = report.krylov_s();
            row.solver_s = row.setup_s + row.krylov_s;
            row.max_ki_size = report.max_local_size();
            if let Some(first) = report.iterations.first().and_then(|r| r.symmetry_defect) {
                if first > SYMMETRY_TOLERANCE {
                    row.status = format!("asymmetric tangent ({first:.3e})");
                }
            }
            row.report = report;
        }
        Err(e) => row.status = e.to_string(),
    }
    row
}

/// Runs the whole sweep sequentially.
pub fn run_experiment(config: &ExperimentConfig) -> Vec<ExperimentRow> {
    config.runs().iter().map(|s| run_single(config, s)).collect()
}

pub fn write_csv<W: Write>(rows: &[ExperimentRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.csv_line())?;
    }
    Ok(())
}

/// Parses a configuration file, runs the sweep and writes the CSV.
pub fn run_experiment_file<W: Write>(path: &Path, out: W) -> Result<Vec<ExperimentRow>> {
    let mut config = ExperimentConfig::default();
    config.apply_file(path)?;
    let rows = run_experiment(&config);
    write_csv(&rows, out)?;
    Ok(rows)
}
