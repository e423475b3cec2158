#![allow(dead_code)]

use gelswell::assembly::{assemble, Model};
use gelswell::bench::experiment::{run_experiment, ExperimentConfig, ExperimentRow};
use gelswell::elements::apply_dirichlet;
use gelswell::linalg::CsrMatrix;

/// Constrained tangent and right-hand side of the first Newton iterate of
/// the step `0 → dt`.
pub fn first_system(model: &Model, dt: f64) -> (CsrMatrix, Vec<f64>) {
    let states = model.initial_states().unwrap();
    let d = model.initial_solution();
    let sys = assemble(model, &states, &d, dt, dt).unwrap();
    let mut k = sys.k;
    let mut rhs: Vec<f64> = sys.r.iter().map(|v| -v).collect();
    apply_dirichlet(&model.constraints, &mut k, &mut rhs, &d, dt).unwrap();
    (k, rhs)
}

pub fn sweep(text: &str) -> Vec<ExperimentRow> {
    let cfg = ExperimentConfig::from_str_with_defaults(text).unwrap();
    let rows = run_experiment(&cfg);
    for r in &rows {
        assert!(r.is_ok(), "{}: {}", r.csv_line(), r.status);
    }
    rows
}

/// `(max - min) / min`.
pub fn variation(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    let min = values.iter().copied().fold(f64::MAX, f64::min);
    (max - min) / min
}

pub fn report(criterion: usize, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion:>2} {name}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
}

pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    num / den.max(f64::MIN_POSITIVE)
}
