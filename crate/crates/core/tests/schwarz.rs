mod common;

use common::first_system;
use gelswell::bench::{make_linear_elasticity, make_problem, ProblemKind};
use gelswell::elements::ElementPair;
use gelswell::linalg::{CsrMatrix, LinearOperator};
use gelswell::mesh::decompose;
use gelswell::schwarz::{CoarseMode, NullspaceMode, SchwarzConfig, SchwarzPreconditioner};
use rand::{Rng, SeedableRng};

fn build(
    kind: ProblemKind,
    pair: ElementPair,
    n: usize,
    dims: [usize; 3],
    overlap: usize,
    config: SchwarzConfig,
) -> (CsrMatrix, Vec<f64>, SchwarzPreconditioner) {
    let problem = make_problem(kind, n, pair).unwrap();
    let model = &problem.model;
    let (k, rhs) = first_system(model, 0.05);
    let decomp = decompose(&model.mesh, dims, overlap).unwrap();
    let p = SchwarzPreconditioner::build(&k, &model.mesh, &decomp, &model.dofmap, &model.constraints.mask(), &config)
        .unwrap();
    (k, rhs, p)
}

fn apply(p: &SchwarzPreconditioner, r: &[f64]) -> Vec<f64> {
    let mut z = vec![0.0; r.len()];
    p.apply(r, &mut z);
    z
}

fn random_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

const GDSW: SchwarzConfig = SchwarzConfig {
    coarse: CoarseMode::Gdsw,
    nullspace: NullspaceMode::Algebraic,
    restricted: true,
};

#[test]
fn preconditioner_is_linear() {
    let (k, _, p) = build(ProblemKind::FreeSwellingFlux, ElementPair::Q1RT0, 4, [2, 2, 2], 1, GDSW);
    let n = k.nrows();
    let (x, y) = (random_vector(n, 1), random_vector(n, 2));
    let combo: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 2.0 * a - 3.0 * b).collect();
    let (zx, zy, zc) = (apply(&p, &x), apply(&p, &y), apply(&p, &combo));
    let diff: Vec<f64> = zc.iter().zip(zx.iter().zip(&zy)).map(|(c, (a, b))| c - (2.0 * a - 3.0 * b)).collect();
    assert!(norm(&diff) <= 1e-12 * norm(&zc));
}

#[test]
fn application_is_independent_of_thread_count() {
    let (k, _, p) = build(ProblemKind::Punch, ElementPair::Q1Q1, 6, [2, 2, 2], 1, GDSW);
    let r = random_vector(k.nrows(), 7);
    let runs: Vec<Vec<f64>> = [1, 2, 4]
        .iter()
        .map(|&t| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap();
            pool.install(|| apply(&p, &r))
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
}

#[test]
fn coarse_correction_is_galerkin_orthogonal() {
    let (k, _, p) = build(ProblemKind::FreeSwellingFlux, ElementPair::Q1Q1, 4, [2, 2, 2], 1, GDSW);
    let coarse = p.coarse().unwrap();
    let r = random_vector(k.nrows(), 3);
    let mut z = vec![0.0; r.len()];
    coarse.apply_add(&r, &mut z);
    let kz = k.spmv(&z).unwrap();
    let residual: Vec<f64> = r.iter().zip(&kz).map(|(a, b)| a - b).collect();
    let defect = coarse.phi().transpose().spmv(&residual).unwrap();
    let scale = coarse.phi().transpose().spmv(&r).unwrap();
    assert!(norm(&defect) <= 1e-10 * norm(&scale), "{}", norm(&defect));
}

#[test]
fn local_problems_grow_with_overlap() {
    let sizes: Vec<usize> = (0..3)
        .map(|ov| {
            build(ProblemKind::FreeSwellingFlux, ElementPair::Q1RT0, 6, [2, 2, 2], ov, GDSW)
                .2
                .stats()
                .max_local_size()
        })
        .collect();
    assert!(sizes[0] < sizes[1] && sizes[1] < sizes[2], "{sizes:?}");
}

#[test]
fn single_subdomain_is_an_exact_solve() {
    for coarse in [CoarseMode::None, CoarseMode::Gdsw, CoarseMode::Rgdsw] {
        let config = SchwarzConfig { coarse, ..GDSW };
        let (k, rhs, p) = build(ProblemKind::Punch, ElementPair::Q1RT0, 3, [1, 1, 1], 0, config);
        assert_eq!(p.stats().coarse_dim, 0);
        let z = apply(&p, &rhs);
        let kz = k.spmv(&z).unwrap();
        let res: Vec<f64> = kz.iter().zip(&rhs).map(|(a, b)| a - b).collect();
        assert!(norm(&res) <= 1e-10 * norm(&rhs));
    }
}

#[test]
fn additive_variant_is_symmetric_for_elasticity() {
    let model = make_linear_elasticity(6).unwrap().model;
    let (k, _) = first_system(&model, 1.0);
    let decomp = decompose(&model.mesh, [2, 2, 2], 1).unwrap();
    let config = SchwarzConfig {
        coarse: CoarseMode::Gdsw,
        nullspace: NullspaceMode::Translations3,
        restricted: false,
    };
    let p = SchwarzPreconditioner::build(&k, &model.mesh, &decomp, &model.dofmap, &model.constraints.mask(), &config)
        .unwrap();
    let mask = model.constraints.mask();
    let free = |mut v: Vec<f64>| {
        v.iter_mut().zip(&mask).filter(|(_, &c)| c).for_each(|(x, _)| *x = 0.0);
        v
    };
    let (x, y) = (free(random_vector(k.nrows(), 11)), free(random_vector(k.nrows(), 12)));
    let (a, b) = (dot(&y, &apply(&p, &x)), dot(&x, &apply(&p, &y)));
    assert!((a - b).abs() <= 1e-10 * a.abs().max(b.abs()), "{a} vs {b}");
}

#[test]
fn rgdsw_is_smaller_than_gdsw() {
    let dims = |coarse| {
        build(
            ProblemKind::FreeSwellingFlux,
            ElementPair::Q1RT0,
            6,
            [3, 3, 3],
            1,
            SchwarzConfig { coarse, ..GDSW },
        )
        .2
        .stats()
        .coarse_dim
    };
    let (g, r) = (dims(CoarseMode::Gdsw), dims(CoarseMode::Rgdsw));
    assert!(0 < r && r < g, "rgdsw {r}, gdsw {g}");
}

#[test]
fn six_mode_nullspace_is_rejected_for_face_fluxes() {
    let problem = make_problem(ProblemKind::FreeSwellingFlux, 4, ElementPair::Q1RT0).unwrap();
    let model = &problem.model;
    let (k, _) = first_system(model, 0.05);
    let decomp = decompose(&model.mesh, [2, 2, 2], 1).unwrap();
    let config = SchwarzConfig {
        nullspace: NullspaceMode::Translations6,
        ..GDSW
    };
    let res = SchwarzPreconditioner::build(&k, &model.mesh, &decomp, &model.dofmap, &model.constraints.mask(), &config);
    assert!(res.is_err());
}
