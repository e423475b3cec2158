mod common;

use gelswell::assembly::{assemble, total_solute_volume};
use gelswell::bench::experiment::{run_experiment_file, CSV_HEADER};
use gelswell::bench::load::LoadProgram;
use gelswell::bench::{make_free_swelling, make_punch, ExperimentConfig, FreeSwellingBc};
use gelswell::driver::{block_norms, NewtonConfig, Solver};
use gelswell::elements::ElementPair;
use gelswell::mesh::decompose;
use gelswell::schwarz::SchwarzConfig;

#[test]
fn default_programs_hit_their_breakpoints() {
    let flux = LoadProgram::free_swelling_flux();
    let pts = [(0.0, 0.0), (0.125, -0.01), (0.25, -0.02), (0.75, -0.02), (0.875, -0.01), (1.0, 0.0), (4.0, 0.0)];
    for (t, want) in pts {
        assert!((flux.value(t).unwrap() - want).abs() < 1e-15, "flux at {t}");
    }
    let mu = LoadProgram::free_swelling_mu();
    assert!((mu.value(0.0).unwrap() + 80.31).abs() < 1e-12);
    assert!((mu.value(0.125).unwrap() + 60.31).abs() < 1e-12);
    assert!((mu.value(3.0).unwrap() + 40.31).abs() < 1e-12);
    let punch = LoadProgram::punch_default();
    assert!((punch.value(0.5).unwrap() - 0.2).abs() < 1e-15);
    assert!((punch.value(6.0).unwrap() - 0.4).abs() < 1e-15);
    assert!(punch.value(6.5).is_err());
    assert!(LoadProgram::flux(-0.02, 0.5, 0.25, 1.0, 4.0).is_err());
}

#[test]
fn csv_reports_formula_dof_counts() {
    let rows = common::sweep(
        "problems = linear-elasticity|free-swelling-flux\npairs = q1q1|q1rt0\nn = 4\nsubdomains = 2,2,2\nsteps = 1\n",
    );
    assert_eq!(rows.len(), 3);
    let n: usize = 4;
    let nodes = (n + 1).pow(3);
    let mut dofs: Vec<usize> = rows.iter().map(|r| r.dofs).collect();
    dofs.sort();
    let mut want = vec![3 * nodes, 6 * nodes, 3 * nodes + 3 * n * n * (n + 1)];
    want.sort();
    assert_eq!(dofs, want);
}

#[test]
fn flux_controlled_swelling_balances_solute() {
    for pair in [ElementPair::Q1Q1, ElementPair::Q1RT0] {
        let problem = make_free_swelling(4, pair, FreeSwellingBc::Flux).unwrap();
        let program = problem.program.unwrap();
        let model = &problem.model;
        let decomp = decompose(&model.mesh, [2, 2, 2], 1).unwrap();
        let cfg = NewtonConfig {
            end_time: 0.1,
            ..NewtonConfig::default()
        };
        let mut solver = Solver::new(model, &decomp, SchwarzConfig::default(), cfg).unwrap();
        for _ in 0..2 {
            let before = total_solute_volume(model, &solver.states);
            solver.step(0.05).unwrap();
            let after = total_solute_volume(model, &solver.states);
            let want = -0.05 * 3.0 * program.value(solver.t).unwrap();
            assert!(((after - before) - want).abs() <= 1e-10 * want.abs(), "{pair:?}: {} vs {want}", after - before);
        }
    }
}

#[test]
fn sealed_punch_conserves_solute() {
    let model = {
        let mut p = make_punch(3, ElementPair::Q1RT0).unwrap();
        let sealed = make_free_swelling(3, ElementPair::Q1RT0, FreeSwellingBc::Sealed).unwrap();
        for dof in sealed.model.constraints.constrained_dofs() {
            if !sealed.model.dofmap.kind(dof).is_deformation() && !p.model.constraints.is_constrained(dof) {
                p.model.constraints.add(dof, gelswell::elements::Prescribed::Fixed(0.0)).unwrap();
            }
        }
        p.model
    };
    let decomp = decompose(&model.mesh, [1, 1, 1], 0).unwrap();
    let mut solver = Solver::new(&model, &decomp, SchwarzConfig::default(), NewtonConfig::default()).unwrap();
    let start = total_solute_volume(&model, &solver.states);
    solver.step(0.05).unwrap();
    let end = total_solute_volume(&model, &solver.states);
    assert!((end - start).abs() <= 1e-10 * start.abs());
}

#[test]
fn unloaded_punch_starts_in_equilibrium() {
    for pair in [ElementPair::Q1Q1, ElementPair::Q1RT0] {
        let model = make_punch(3, pair).unwrap().model;
        let states = model.initial_states().unwrap();
        let d = model.initial_solution();
        let sys = assemble(&model, &states, &d, 0.05, 0.0).unwrap();
        let (a, b) = block_norms(&model, &sys.r);
        assert!(a < 1e-10 && b < 1e-12, "{pair:?}: {a} {b}");
    }
}

#[test]
fn failing_runs_are_reported_in_their_row() {
    let cfg = ExperimentConfig::from_str_with_defaults(
        "problems = free-swelling-flux\npairs = q1rt0|q1q1\nn = 4\nnullspace = translations6\nsteps = 1\n",
    )
    .unwrap();
    let rows = gelswell::bench::run_experiment(&cfg);
    assert_eq!(rows.len(), 2);
    let (bad, good): (Vec<_>, Vec<_>) = rows.iter().partition(|r| r.pair == Some(ElementPair::Q1RT0));
    assert!(!bad[0].is_ok());
    assert!(good[0].is_ok(), "{}", good[0].status);
    assert!(bad[0].csv_line().ends_with(&bad[0].status));
}

#[test]
fn experiment_files_produce_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    let out = dir.path().join("out.csv");
    std::fs::write(
        &cfg,
        "# small sweep\nproblems = punch\npairs = q1rt0\nn = 6\nsubdomains = 2,2,2|1x1x1\ncoarse = gdsw|rgdsw\nsteps = 1\n",
    )
    .unwrap();
    run_experiment_file(&cfg, std::fs::File::create(&out).unwrap()).unwrap();
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.starts_with("punch,q1rt0,") && l.ends_with(",ok")));
    assert!(run_experiment_file(&dir.path().join("missing.cfg"), Vec::new()).is_err());
}
