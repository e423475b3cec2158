//! Newton-Raphson with time stepping.
//!
//! Each Newton iteration assembles `R` and `K`, eliminates the Dirichlet
//! constraints, rebuilds the Schwarz preconditioner and solves the
//! linearized system with GMRES. A step converges when, for the deformation
//! block and the flux block separately, the Euclidean residual norm over
//! unconstrained DOFs satisfies `‖r‖ ≤ abs_tol` or `‖r‖/‖r₀‖ ≤ rel_tol`.
//! `r₀` is the first residual of the step at which all Dirichlet values
//! are already attained.

use std::io::Write;
use std::time::Instant;

use crate::assembly::{commit_states, Assembler, Model, StateField};
use crate::elements::apply_dirichlet;
use crate::error::{Error, Result};
use crate::linalg::{gmres, GmresConfig, GmresStatus};
use crate::mesh::Decomposition;
use crate::schwarz::{SchwarzConfig, SchwarzPreconditioner};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    pub abs_tol_deformation: f64,
    pub rel_tol_deformation: f64,
    pub abs_tol_flux: f64,
    pub rel_tol_flux: f64,
    pub max_iterations: usize,
    pub dt: f64,
    pub end_time: f64,
    pub cut_factor: f64,
    pub max_cuts: usize,
    pub gmres: GmresConfig,
    /// Record `‖K − Kᵀ‖_max / ‖K‖_max` at every iterate.
    pub check_symmetry: bool,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            abs_tol_deformation: 1e-9,
            rel_tol_deformation: 1e-6,
            abs_tol_flux: 5e-12,
            rel_tol_flux: 1e-9,
            max_iterations: 20,
            dt: 0.05,
            end_time: 0.1,
            cut_factor: 0.5,
            max_cuts: 4,
            gmres: GmresConfig::default(),
            check_symmetry: false,
        }
    }
}

impl NewtonConfig {
    pub fn validate(&self) -> Result<()> {
        let tols = [
            self.abs_tol_deformation,
            self.rel_tol_deformation,
            self.abs_tol_flux,
            self.rel_tol_flux,
        ];
        if tols.iter().any(|&t| !(t > 0.0)) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        if !(self.dt > 0.0) || !(self.end_time >= 0.0) {
            return Err(Error::InvalidParameter("need dt > 0 and end_time >= 0".into()));
        }
        if !(self.cut_factor > 0.0 && self.cut_factor < 1.0) {
            return Err(Error::InvalidParameter("cut factor must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// One Newton iteration (one linear solve).
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub t: f64,
    pub newton_index: usize,
    pub krylov_iters: usize,
    pub gmres_status: GmresStatus,
    pub residual_deformation: f64,
    pub residual_flux: f64,
    pub assemble_s: f64,
    pub setup_s: f64,
    pub krylov_s: f64,
    pub coarse_dim: usize,
    pub max_local_size: usize,
    pub avg_local_size: f64,
    pub symmetry_defect: Option<f64>,
}

/// One accepted time step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub t: f64,
    pub dt: f64,
    pub newton_iterations: usize,
    /// Final block residual norms.
    pub residual_deformation: f64,
    pub residual_flux: f64,
    /// Residual norms at the reference iterate.
    pub r0_deformation: f64,
    pub r0_flux: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveReport {
    pub iterations: Vec<IterationRecord>,
    pub steps: Vec<StepRecord>,
    pub cuts: usize,
}

impl SolveReport {
    pub fn krylov_counts(&self) -> Vec<usize> {
        self.iterations.iter().map(|r| r.krylov_iters).collect()
    }

    pub fn avg_krylov(&self) -> f64 {
        if self.iterations.is_empty() {
            0.0
        } else {
            self.krylov_counts().iter().sum::<usize>() as f64 / self.iterations.len() as f64
        }
    }

    pub fn max_krylov(&self) -> usize {
        self.krylov_counts().into_iter().max().unwrap_or(0)
    }

    pub fn newton_total(&self) -> usize {
        self.iterations.len()
    }

    pub fn assemble_s(&self) -> f64 {
        self.iterations.iter().map(|r| r.assemble_s).sum()
    }

    pub fn setup_s(&self) -> f64 {
        self.iterations.iter().map(|r| r.setup_s).sum()
    }

    pub fn krylov_s(&self) -> f64 {
        self.iterations.iter().map(|r| r.krylov_s).sum()
    }

    pub fn coarse_dim(&self) -> usize {
        self.iterations.last().map_or(0, |r| r.coarse_dim)
    }

    pub fn max_local_size(&self) -> usize {
        self.iterations.iter().map(|r| r.max_local_size).max().unwrap_or(0)
    }

    /// Largest recorded relative symmetry defect.
    pub fn max_symmetry_defect(&self) -> Option<f64> {
        self.iterations
            .iter()
            .filter_map(|r| r.symmetry_defect)
            .reduce(f64::max)
    }

    pub fn extend(&mut self, other: SolveReport) {
        self.iterations.extend(other.iterations);
        self.steps.extend(other.steps);
        self.cuts += other.cuts;
    }

    /// One row per Newton iteration.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,newton_index,krylov_iters,assemble_s,setup_s,krylov_s,coarse_dim")?;
        for r in &self.iterations {
            writeln!(
                out,
                "{},{},{},{:.6},{:.6},{:.6},{}",
                r.t, r.newton_index, r.krylov_iters, r.assemble_s, r.setup_s, r.krylov_s, r.coarse_dim
            )?;
        }
        Ok(())
    }
}

/// Euclidean norms of the deformation and flux blocks over free DOFs.
pub fn block_norms(model: &Model, r: &[f64]) -> (f64, f64) {
    let mut a = 0.0;
    let mut b = 0.0;
    for (i, ri) in r.iter().enumerate() {
        if model.constraints.is_constrained(i) {
            continue;
        }
        if model.dofmap.kind(i).is_deformation() {
            a += ri * ri;
        } else {
            b += ri * ri;
        }
    }
    (a.sqrt(), b.sqrt())
}

fn block_converged(norm: f64, r0: f64, abs_tol: f64, rel_tol: f64) -> bool {
    norm <= abs_tol || (r0 > 0.0 && norm / r0 <= rel_tol)
}

/// Time-dependent solution state plus the solver machinery.
pub struct Solver<'a> {
    model: &'a Model,
    decomp: &'a Decomposition,
    schwarz: SchwarzConfig,
    config: NewtonConfig,
    assembler: Assembler,
    constrained: Vec<bool>,
    pub t: f64,
    pub d: Vec<f64>,
    pub states: StateField,
}

impl<'a> Solver<'a> {
    pub fn new(
        model: &'a Model,
        decomp: &'a Decomposition,
        schwarz: SchwarzConfig,
        config: NewtonConfig,
    ) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            model,
            decomp,
            schwarz,
            config,
            assembler: Assembler::new(model),
            constrained: model.constraints.mask(),
            t: 0.0,
            d: model.initial_solution(),
            states: model.initial_states()?,
        })
    }

    pub fn model(&self) -> &Model {
        self.model
    }

    pub fn config(&self) -> &NewtonConfig {
        &self.config
    }

    /// Newton iterations for the step `t → t + dt`. Returns the converged
    /// solution and the records; does not modify `self`.
    pub fn newton_solve(&self, dt: f64) -> Result<(Vec<f64>, Vec<IterationRecord>, StepRecord)> {
        let model = self.model;
        let cfg = &self.config;
        let t_new = self.t + dt;
        let mut d = self.d.clone();
        let mut records = Vec::new();
        let mut r0: Option<(f64, f64)> = None;

        for it in 0..=cfg.max_iterations {
            let start = Instant::now();
            let sys = self.assembler.assemble(model, &self.states, &d, dt, t_new)?;
            let assemble_s = start.elapsed().as_secs_f64();
            let (na, nb) = block_norms(model, &sys.r);
            if !(na.is_finite() && nb.is_finite()) {
                return Err(Error::NewtonDiverged { iterations: it });
            }
            if model.constraints.satisfied_by(&d, t_new)? {
                let (ra, rb) = *r0.get_or_insert((na, nb));
                if block_converged(na, ra, cfg.abs_tol_deformation, cfg.rel_tol_deformation)
                    && block_converged(nb, rb, cfg.abs_tol_flux, cfg.rel_tol_flux)
                {
                    let step = StepRecord {
                        t: t_new,
                        dt,
                        newton_iterations: it,
                        residual_deformation: na,
                        residual_flux: nb,
                        r0_deformation: ra,
                        r0_flux: rb,
                    };
                    return Ok((d, records, step));
                }
            }
            if it == cfg.max_iterations {
                break;
            }
            let symmetry_defect = cfg.check_symmetry.then(|| {
                let m = sys.k.max_abs();
                if m > 0.0 {
                    sys.k.symmetry_defect() / m
                } else {
                    0.0
                }
            });

            let mut k = sys.k;
            let mut rhs: Vec<f64> = sys.r.iter().map(|v| -v).collect();
            apply_dirichlet(&model.constraints, &mut k, &mut rhs, &d, t_new)?;

            let start = Instant::now();
            let precond = SchwarzPreconditioner::build(
                &k,
                &model.mesh,
                self.decomp,
                &model.dofmap,
                &self.constrained,
                &self.schwarz,
            )?;
            let setup_s = start.elapsed().as_secs_f64();

            let start = Instant::now();
            let res = gmres(&k, &precond, &rhs, &cfg.gmres);
            let krylov_s = start.elapsed().as_secs_f64();
            if res.x.iter().any(|v| !v.is_finite()) {
                return Err(Error::NewtonDiverged { iterations: it + 1 });
            }
            d.iter_mut().zip(&res.x).for_each(|(di, xi)| *di += xi);
            model.constraints.impose(&mut d, t_new)?;

            let stats = precond.stats();
            records.push(IterationRecord {
                t: t_new,
                newton_index: it,
                krylov_iters: res.iterations,
                gmres_status: res.status,
                residual_deformation: na,
                residual_flux: nb,
                assemble_s,
                setup_s,
                krylov_s,
                coarse_dim: stats.coarse_dim,
                max_local_size: stats.max_local_size(),
                avg_local_size: stats.avg_local_size(),
                symmetry_defect,
            });
        }
        Err(Error::NewtonDiverged {
            iterations: cfg.max_iterations,
        })
    }

    /// Advances by `dt`, halving on failure up to the remaining cut budget.
    fn advance(&mut self, dt: f64, cuts_left: usize, report: &mut SolveReport) -> Result<()> {
        match self.newton_solve(dt) {
            Ok((d, records, step)) => {
                self.states = commit_states(self.model, &self.states, &d, dt)?;
                self.d = d;
                self.t = step.t;
                report.iterations.extend(records);
                report.steps.push(step);
                Ok(())
            }
            Err(e) if e.is_step_cut() && cuts_left > 0 => {
                report.cuts += 1;
                let h = dt * self.config.cut_factor;
                let target = self.t + dt;
                while self.t < target - 1e-12 * target.max(1.0) {
                    let h = h.min(target - self.t);
                    self.advance(h, cuts_left - 1, report)?;
                }
                Ok(())
            }
            Err(e) if e.is_step_cut() => Err(Error::StepAborted {
                last_good_time: self.t,
                cuts: report.cuts,
            }),
            Err(e) => Err(e),
        }
    }

    /// One step of size `dt` (with cutting).
    pub fn step(&mut self, dt: f64) -> Result<SolveReport> {
        let mut report = SolveReport::default();
        self.advance(dt, self.config.max_cuts, &mut report)?;
        Ok(report)
    }

    /// Marches from the current time to `config.end_time`.
    pub fn time_march(&mut self) -> Result<SolveReport> {
        let mut report = SolveReport::default();
        let end = self.config.end_time;
        let tol = 1e-12 * end.max(1.0);
        while self.t < end - tol {
            let dt = self.config.dt.min(end - self.t);
            self.advance(dt, self.config.max_cuts, &mut report)?;
        }
        Ok(report)
    }
}

/// Builds a solver and marches to `config.end_time`.
pub fn time_march(
    model: &Model,
    decomp: &Decomposition,
    schwarz: SchwarzConfig,
    config: NewtonConfig,
) -> Result<(SolveReport, Vec<f64>, StateField)> {
    let mut solver = Solver::new(model, decomp, schwarz, config)?;
    let report = solver.time_march()?;
    Ok((report, solver.d, solver.states))
}
