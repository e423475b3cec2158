//! Global residual, tangent and incremental potential.
//!
//! Unknowns are the displacement `u = φ − X` and the solvent flux `J_v`.
//! With `v = vₙ − Δt div J_v` at each quadrature point, the incremental
//! potential is
//!
//! ```text
//! Π = Σ_e ∫ [ψ(F, v) + Δt φ(J_v)] dV + Δt ∫_{∂B^μ} μ̄ J_v·n dA
//! ```
//!
//! and the residual `R = ∂Π/∂d` and tangent `K = ∂²Π/∂d²` are assembled
//! element by element. The elasticity discretization instead assembles the
//! linear system `K u − f`.

use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;

use crate::bench::load::LoadProgram;
use crate::elements::{
    element_face_signs, q1, rt0, ConstraintTable, Discretization, DofMap, ElementPair,
    FaceQuadrature, QuadratureRule,
};
use crate::error::Result;
use crate::linalg::CsrMatrix;
use crate::material::{self, MaterialParams, PointState};
use crate::mesh::{BoundaryPlane, StructuredMesh};

/// Elements processed per parallel batch.
const CHUNK: usize = 512;

/// Isotropic small-strain elasticity constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticParams {
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
}

impl Default for ElasticParams {
    fn default() -> Self {
        Self {
            youngs_modulus: 1.0,
            poisson_ratio: 0.3,
        }
    }
}

impl ElasticParams {
    pub fn lame(&self) -> (f64, f64) {
        let (e, nu) = (self.youngs_modulus, self.poisson_ratio);
        (e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), e / (2.0 * (1.0 + nu)))
    }
}

/// Prescribed chemical potential on a set of boundary planes.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialBoundary {
    pub planes: Vec<BoundaryPlane>,
    pub program: LoadProgram,
}

/// Everything needed to assemble one discrete problem.
#[derive(Debug, Clone)]
pub struct Model {
    pub mesh: StructuredMesh,
    pub dofmap: DofMap,
    pub params: MaterialParams,
    pub elastic: ElasticParams,
    pub quadrature: QuadratureRule,
    pub face_quadrature: FaceQuadrature,
    pub constraints: ConstraintTable,
    pub potential_boundary: Option<PotentialBoundary>,
    /// External load vector (elasticity only).
    pub load: Option<Vec<f64>>,
}

impl Model {
    pub fn new(mesh: StructuredMesh, disc: Discretization, params: MaterialParams) -> Self {
        let dofmap = DofMap::new(&mesh, disc);
        let constraints = ConstraintTable::new(dofmap.ndofs());
        Self {
            mesh,
            dofmap,
            params,
            elastic: ElasticParams::default(),
            quadrature: QuadratureRule::default(),
            face_quadrature: FaceQuadrature::default(),
            constraints,
            potential_boundary: None,
            load: None,
        }
    }

    pub fn discretization(&self) -> Discretization {
        self.dofmap.discretization()
    }

    pub fn ndofs(&self) -> usize {
        self.dofmap.ndofs()
    }

    pub fn is_coupled(&self) -> bool {
        matches!(self.discretization(), Discretization::Coupled(_))
    }

    fn jacobian_det(&self) -> f64 {
        (0.5 * self.mesh.element_size()).powi(3)
    }

    /// Initial solution: zero displacement and flux.
    pub fn initial_solution(&self) -> Vec<f64> {
        vec![0.0; self.ndofs()]
    }

    /// Point states at the stress-free pre-swollen state.
    pub fn initial_states(&self) -> Result<StateField> {
        let npts = self.quadrature.len();
        let v0 = if self.is_coupled() {
            material::initial_swelling(&self.params)?
        } else {
            0.0
        };
        Ok(StateField {
            npts,
            states: vec![PointState::initial(v0); self.mesh.num_elements() * npts],
        })
    }
}

/// One [`PointState`] per (element, quadrature point).
#[derive(Debug, Clone, PartialEq)]
pub struct StateField {
    npts: usize,
    states: Vec<PointState>,
}

impl StateField {
    pub fn points_per_element(&self) -> usize {
        self.npts
    }

    pub fn element(&self, e: usize) -> &[PointState] {
        &self.states[e * self.npts..(e + 1) * self.npts]
    }

    pub fn get(&self, e: usize, q: usize) -> &PointState {
        &self.states[e * self.npts + q]
    }

    pub fn get_mut(&mut self, e: usize, q: usize) -> &mut PointState {
        &mut self.states[e * self.npts + q]
    }

    pub fn all(&self) -> &[PointState] {
        &self.states
    }
}

/// Assembled tangent and residual.
#[derive(Debug, Clone)]
pub struct GlobalSystem {
    pub k: CsrMatrix,
    pub r: Vec<f64>,
}

/// Sparsity pattern from element connectivity, diagonal always included.
pub fn sparsity_pattern(model: &Model) -> CsrMatrix {
    let n = model.ndofs();
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in 0..model.mesh.num_elements() {
        let dofs = model.dofmap.element_dofs(&model.mesh, e);
        for &i in &dofs {
            rows[i].extend_from_slice(&dofs);
        }
    }
    for (i, row) in rows.iter_mut().enumerate() {
        row.push(i);
        row.sort_unstable();
        row.dedup();
    }
    CsrMatrix::from_pattern(n, n, rows)
}

/// Flux basis of an element at one point: vector values and divergences,
/// already multiplied by the face orientation signs for RT0.
struct FluxBasis {
    values: Vec<[f64; 3]>,
    divs: Vec<f64>,
}

fn flux_basis(pair: ElementPair, xi: [f64; 3], h: f64, signs: &[f64; 6]) -> FluxBasis {
    match pair {
        ElementPair::Q1Q1 => {
            let (n, g) = q1::shape_q1_physical(xi, h);
            let mut values = Vec::with_capacity(24);
            let mut divs = Vec::with_capacity(24);
            for a in 0..8 {
                for c in 0..3 {
                    let mut v = [0.0; 3];
                    v[c] = n[a];
                    values.push(v);
                    divs.push(g[a][c]);
                }
            }
            FluxBasis { values, divs }
        }
        ElementPair::Q1RT0 => {
            let (n, d) = rt0::shape_rt0_physical(xi, h);
            FluxBasis {
                values: (0..6)
                    .map(|j| [signs[j] * n[j][0], signs[j] * n[j][1], signs[j] * n[j][2]])
                    .collect(),
                divs: (0..6).map(|j| signs[j] * d[j]).collect(),
            }
        }
    }
}

/// Deformation gradient, flux and flux divergence at one point.
struct Kinematics {
    f: Matrix3<f64>,
    jv: Vector3<f64>,
    div: f64,
}

fn kinematics(grads: &[[f64; 3]; 8], basis: Option<&FluxBasis>, de: &[f64]) -> Kinematics {
    let mut f = Matrix3::identity();
    for (a, g) in grads.iter().enumerate() {
        for c in 0..3 {
            let u = de[3 * a + c];
            for jj in 0..3 {
                f[(c, jj)] += u * g[jj];
            }
        }
    }
    let mut jv = Vector3::zeros();
    let mut div = 0.0;
    if let Some(b) = basis {
        for (k, (val, dv)) in b.values.iter().zip(&b.divs).enumerate() {
            let q = de[24 + k];
            jv += Vector3::new(val[0], val[1], val[2]) * q;
            div += q * dv;
        }
    }
    Kinematics { f, jv, div }
}

/// Local faces of `e` carrying the prescribed chemical potential.
fn potential_faces(model: &Model, e: usize) -> Vec<usize> {
    let Some(pb) = &model.potential_boundary else {
        return Vec::new();
    };
    model
        .mesh
        .element_faces(e)
        .iter()
        .enumerate()
        .filter(|(_, &f)| {
            model
                .mesh
                .face(f)
                .boundary
                .is_some_and(|p| pb.planes.contains(&p))
        })
        .map(|(j, _)| j)
        .collect()
}

/// `∫_face N_k · n dA` for every flux basis function over local face `j`.
fn face_flux_integrals(model: &Model, pair: ElementPair, j: usize, signs: &[f64; 6]) -> Vec<f64> {
    let h = model.mesh.element_size();
    let area_det = (0.5 * h).powi(2);
    let normal = rt0::face_normal(j);
    let mut out = vec![0.0; pair.flux_dofs_per_element()];
    for (&st, &w) in model
        .face_quadrature
        .points()
        .iter()
        .zip(model.face_quadrature.weights())
    {
        let basis = flux_basis(pair, rt0::face_point(j, st), h, signs);
        for (o, v) in out.iter_mut().zip(&basis.values) {
            *o += w * area_det * (v[0] * normal[0] + v[1] * normal[1] + v[2] * normal[2]);
        }
    }
    out
}

/// Element residual and (optionally) dense row-major tangent.
pub struct ElementContribution {
    pub dofs: Vec<usize>,
    pub r: Vec<f64>,
    pub k: Vec<f64>,
}

fn elasticity_element(model: &Model, e: usize, d: &[f64], with_tangent: bool) -> ElementContribution {
    let dofs = model.dofmap.element_dofs(&model.mesh, e);
    let h = model.mesh.element_size();
    let det = model.jacobian_det();
    let (lam, mu) = model.elastic.lame();
    let mut k = vec![0.0; 24 * 24];
    for (&xi, &w) in model.quadrature.points().iter().zip(model.quadrature.weights()) {
        let (_, g) = q1::shape_q1_physical(xi, h);
        let wd = w * det;
        for a in 0..8 {
            for c in 0..3 {
                let row = 3 * a + c;
                for b in 0..8 {
                    let gab: f64 = (0..3).map(|i| g[a][i] * g[b][i]).sum();
                    for dd in 0..3 {
                        let mut v = lam * g[a][c] * g[b][dd] + mu * g[a][dd] * g[b][c];
                        if c == dd {
                            v += mu * gab;
                        }
                        k[row * 24 + 3 * b + dd] += wd * v;
                    }
                }
            }
        }
    }
    let de: Vec<f64> = dofs.iter().map(|&i| d[i]).collect();
    let r = (0..24)
        .map(|i| (0..24).map(|j| k[i * 24 + j] * de[j]).sum())
        .collect();
    ElementContribution {
        dofs,
        r,
        k: if with_tangent { k } else { Vec::new() },
    }
}

fn coupled_element(
    model: &Model,
    pair: ElementPair,
    states: &StateField,
    e: usize,
    d: &[f64],
    dt: f64,
    mu_bar: Option<f64>,
    with_tangent: bool,
) -> Result<ElementContribution> {
    let dofs = model.dofmap.element_dofs(&model.mesh, e);
    let m = dofs.len();
    let nf = m - 24;
    let de: Vec<f64> = dofs.iter().map(|&i| d[i]).collect();
    let h = model.mesh.element_size();
    let det = model.jacobian_det();
    let signs = element_face_signs(&model.mesh, e);
    let p = &model.params;
    let mut r = vec![0.0; m];
    let mut k = if with_tangent { vec![0.0; m * m] } else { Vec::new() };

    for (q, (&xi, &w)) in model
        .quadrature
        .points()
        .iter()
        .zip(model.quadrature.weights())
        .enumerate()
    {
        let wd = w * det;
        let (_, g) = q1::shape_q1_physical(xi, h);
        let basis = flux_basis(pair, xi, h, &signs);
        let kin = kinematics(&g, Some(&basis), &de);
        let state = states.get(e, q);
        let v = material::update_state(state.v_n, kin.div, dt).map_err(|err| err.at(e, q))?;
        let ev = material::evaluate(&kin.f, v, p).map_err(|err| err.at(e, q))?;
        let dis = material::dissipation(&kin.jv, state, p);

        for a in 0..8 {
            for c in 0..3 {
                r[3 * a + c] += wd * (0..3).map(|jj| ev.p[(c, jj)] * g[a][jj]).sum::<f64>();
            }
        }
        for kk in 0..nf {
            let nv = &basis.values[kk];
            let grad_dot = dis.grad[0] * nv[0] + dis.grad[1] * nv[1] + dis.grad[2] * nv[2];
            r[24 + kk] += wd * dt * (grad_dot - ev.mu * basis.divs[kk]);
        }

        if !with_tangent {
            continue;
        }
        // Deformation block.
        for b in 0..8 {
            for dd in 0..3 {
                let col = 3 * b + dd;
                let mut t = [0.0; 9];
                for (row9, tv) in t.iter_mut().enumerate() {
                    *tv = (0..3).map(|l| ev.a[(row9, 3 * dd + l)] * g[b][l]).sum();
                }
                for a in 0..8 {
                    for c in 0..3 {
                        let s: f64 = (0..3).map(|jj| t[3 * c + jj] * g[a][jj]).sum();
                        k[(3 * a + c) * m + col] += wd * s;
                    }
                }
            }
        }
        // Coupling blocks.
        for a in 0..8 {
            for c in 0..3 {
                let row = 3 * a + c;
                let bfv: f64 = (0..3).map(|jj| ev.d_fv[(c, jj)] * g[a][jj]).sum();
                for kk in 0..nf {
                    let val = -wd * dt * bfv * basis.divs[kk];
                    k[row * m + 24 + kk] += val;
                    k[(24 + kk) * m + row] += val;
                }
            }
        }
        // Flux block.
        for kk in 0..nf {
            let nk = Vector3::from(basis.values[kk]);
            let hn = dis.hess * nk;
            for ll in 0..nf {
                let nl = &basis.values[ll];
                let val = hn[0] * nl[0] + hn[1] * nl[1] + hn[2] * nl[2]
                    + dt * basis.divs[kk] * ev.d_vv * basis.divs[ll];
                k[(24 + kk) * m + 24 + ll] += wd * dt * val;
            }
        }
    }

    if let Some(mu_bar) = mu_bar {
        for j in potential_faces(model, e) {
            let integrals = face_flux_integrals(model, pair, j, &signs);
            for (kk, s) in integrals.iter().enumerate() {
                r[24 + kk] += dt * mu_bar * s;
            }
        }
    }
    Ok(ElementContribution { dofs, r, k })
}

fn potential_value(model: &Model, t: f64) -> Result<Option<f64>> {
    match &model.potential_boundary {
        Some(pb) => Ok(Some(pb.program.value(t)?)),
        None => Ok(None),
    }
}

/// Contribution of element `e`. `t` is the time at the end of the step.
pub fn element_contribution(
    model: &Model,
    states: &StateField,
    e: usize,
    d: &[f64],
    dt: f64,
    t: f64,
    with_tangent: bool,
) -> Result<ElementContribution> {
    match model.discretization() {
        Discretization::Elasticity => Ok(elasticity_element(model, e, d, with_tangent)),
        Discretization::Coupled(pair) => {
            let mu_bar = potential_value(model, t)?;
            coupled_element(model, pair, states, e, d, dt, mu_bar, with_tangent)
        }
    }
}

/// Reusable assembler holding the sparsity pattern.
#[derive(Debug, Clone)]
pub struct Assembler {
    pattern: CsrMatrix,
}

impl Assembler {
    pub fn new(model: &Model) -> Self {
        Self {
            pattern: sparsity_pattern(model),
        }
    }

    pub fn pattern(&self) -> &CsrMatrix {
        &self.pattern
    }

    /// Residual and tangent at solution `d`, end-of-step time `t`.
    pub fn assemble(
        &self,
        model: &Model,
        states: &StateField,
        d: &[f64],
        dt: f64,
        t: f64,
    ) -> Result<GlobalSystem> {
        let mut k = self.pattern.clone();
        let r = assemble_impl(model, states, d, dt, t, Some(&mut k))?;
        Ok(GlobalSystem { k, r })
    }
}

fn assemble_impl(
    model: &Model,
    states: &StateField,
    d: &[f64],
    dt: f64,
    t: f64,
    mut k: Option<&mut CsrMatrix>,
) -> Result<Vec<f64>> {
    let ne = model.mesh.num_elements();
    let with_tangent = k.is_some();
    let mut r = vec![0.0; model.ndofs()];
    let elements: Vec<usize> = (0..ne).collect();
    for chunk in elements.chunks(CHUNK) {
        let contribs: Vec<ElementContribution> = chunk
            .par_iter()
            .map(|&e| element_contribution(model, states, e, d, dt, t, with_tangent))
            .collect::<Result<_>>()?;
        for c in contribs {
            let m = c.dofs.len();
            for (i, &gi) in c.dofs.iter().enumerate() {
                r[gi] += c.r[i];
                if let Some(k) = k.as_deref_mut() {
                    for (j, &gj) in c.dofs.iter().enumerate() {
                        k.add_to(gi, gj, c.k[i * m + j]);
                    }
                }
            }
        }
    }
    if let Some(f) = &model.load {
        r.iter_mut().zip(f).for_each(|(ri, fi)| *ri -= fi);
    }
    Ok(r)
}

/// Residual and tangent with a freshly built pattern.
pub fn assemble(
    model: &Model,
    states: &StateField,
    d: &[f64],
    dt: f64,
    t: f64,
) -> Result<GlobalSystem> {
    Assembler::new(model).assemble(model, states, d, dt, t)
}

/// Residual only.
pub fn assemble_residual(
    model: &Model,
    states: &StateField,
    d: &[f64],
    dt: f64,
    t: f64,
) -> Result<Vec<f64>> {
    assemble_impl(model, states, d, dt, t, None)
}

/// Potential contribution of element `e` (including its share of the
/// chemical-potential boundary term).
pub fn element_potential(
    model: &Model,
    states: &StateField,
    e: usize,
    d: &[f64],
    dt: f64,
    t: f64,
) -> Result<f64> {
    let pair = match model.discretization() {
        Discretization::Elasticity => {
            let c = elasticity_element(model, e, d, false);
            let de: Vec<f64> = c.dofs.iter().map(|&i| d[i]).collect();
            return Ok(0.5 * c.r.iter().zip(&de).map(|(a, b)| a * b).sum::<f64>());
        }
        Discretization::Coupled(pair) => pair,
    };
    let dofs = model.dofmap.element_dofs(&model.mesh, e);
    let de: Vec<f64> = dofs.iter().map(|&i| d[i]).collect();
    let h = model.mesh.element_size();
    let det = model.jacobian_det();
    let signs = element_face_signs(&model.mesh, e);
    let mut total = 0.0;
    for (q, (&xi, &w)) in model
        .quadrature
        .points()
        .iter()
        .zip(model.quadrature.weights())
        .enumerate()
    {
        let (_, g) = q1::shape_q1_physical(xi, h);
        let basis = flux_basis(pair, xi, h, &signs);
        let kin = kinematics(&g, Some(&basis), &de);
        let state = states.get(e, q);
        let v = material::update_state(state.v_n, kin.div, dt).map_err(|err| err.at(e, q))?;
        let psi = material::energy(&kin.f, v, &model.params).map_err(|err| err.at(e, q))?;
        let phi = material::dissipation(&kin.jv, state, &model.params).phi;
        total += w * det * (psi + dt * phi);
    }
    if let Some(mu_bar) = potential_value(model, t)? {
        for j in potential_faces(model, e) {
            let integrals = face_flux_integrals(model, pair, j, &signs);
            let flux: f64 = integrals.iter().zip(&de[24..]).map(|(s, q)| s * q).sum();
            total += dt * mu_bar * flux;
        }
    }
    Ok(total)
}

/// Discrete incremental potential; its gradient is the assembled residual.
pub fn incremental_potential(
    model: &Model,
    states: &StateField,
    d: &[f64],
    dt: f64,
    t: f64,
) -> Result<f64> {
    let parts: Vec<f64> = (0..model.mesh.num_elements())
        .into_par_iter()
        .map(|e| element_potential(model, states, e, d, dt, t))
        .collect::<Result<_>>()?;
    let mut total: f64 = parts.iter().sum();
    if let Some(f) = &model.load {
        total -= f.iter().zip(d).map(|(a, b)| a * b).sum::<f64>();
    }
    Ok(total)
}

/// Advances the point states after a converged step:
/// `vₙ ← vₙ − Δt div J_v`, `Cₙ ← FᵀF`.
pub fn commit_states(model: &Model, states: &StateField, d: &[f64], dt: f64) -> Result<StateField> {
    let pair = match model.discretization() {
        Discretization::Elasticity => return Ok(states.clone()),
        Discretization::Coupled(pair) => pair,
    };
    let h = model.mesh.element_size();
    let npts = states.npts;
    let per_element: Vec<Vec<PointState>> = (0..model.mesh.num_elements())
        .into_par_iter()
        .map(|e| {
            let dofs = model.dofmap.element_dofs(&model.mesh, e);
            let de: Vec<f64> = dofs.iter().map(|&i| d[i]).collect();
            let signs = element_face_signs(&model.mesh, e);
            model
                .quadrature
                .points()
                .iter()
                .enumerate()
                .map(|(q, &xi)| {
                    let (_, g) = q1::shape_q1_physical(xi, h);
                    let basis = flux_basis(pair, xi, h, &signs);
                    let kin = kinematics(&g, Some(&basis), &de);
                    let old = states.get(e, q);
                    let v = material::update_state(old.v_n, kin.div, dt).map_err(|err| err.at(e, q))?;
                    Ok(PointState {
                        v_n: v,
                        c_n: kin.f.transpose() * kin.f,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(StateField {
        npts,
        states: per_element.into_iter().flatten().collect(),
    })
}

/// Quadrature-weighted integral of `vₙ` (mm³).
pub fn total_solute_volume(model: &Model, states: &StateField) -> f64 {
    let det = model.jacobian_det();
    let w = model.quadrature.weights();
    (0..model.mesh.num_elements())
        .map(|e| {
            states
                .element(e)
                .iter()
                .zip(w)
                .map(|(s, wq)| wq * det * s.v_n)
                .sum::<f64>()
        })
        .sum()
}

/// Element averages of `vₙ`.
pub fn element_average_swelling(model: &Model, states: &StateField) -> Vec<f64> {
    let w = model.quadrature.weights();
    let wsum: f64 = w.iter().sum();
    (0..model.mesh.num_elements())
        .map(|e| {
            states
                .element(e)
                .iter()
                .zip(w)
                .map(|(s, wq)| wq * s.v_n)
                .sum::<f64>()
                / wsum
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_mesh;

    fn model(pair: ElementPair, n: usize) -> Model {
        Model::new(
            build_mesh(n, 1.0).unwrap(),
            Discretization::Coupled(pair),
            MaterialParams::reference(1.01),
        )
    }

    #[test]
    fn pattern_has_expected_row_lengths() {
        let m = model(ElementPair::Q1Q1, 2);
        let p = sparsity_pattern(&m);
        // The centre node couples to all 27 nodes, 6 DOFs each.
        let centre = 13;
        assert_eq!(p.row(6 * centre).0.len(), 27 * 6);
    }

    #[test]
    fn reference_state_has_zero_mechanical_residual() {
        for pair in [ElementPair::Q1Q1, ElementPair::Q1RT0] {
            let m = model(pair, 2);
            let s = m.initial_states().unwrap();
            let d = m.initial_solution();
            let r = assemble_residual(&m, &s, &d, 0.05, 0.05).unwrap();
            for (i, ri) in r.iter().enumerate() {
                if m.dofmap.kind(i).is_deformation() {
                    assert!(ri.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn tangent_is_symmetric() {
        for pair in [ElementPair::Q1Q1, ElementPair::Q1RT0] {
            let m = model(pair, 2);
            let s = m.initial_states().unwrap();
            let d: Vec<f64> = (0..m.ndofs()).map(|i| 1e-3 * ((i * 7919 % 13) as f64 - 6.0)).collect();
            let sys = assemble(&m, &s, &d, 0.05, 0.05).unwrap();
            assert!(sys.k.symmetry_defect() <= 1e-12 * sys.k.max_abs());
        }
    }

    #[test]
    fn solute_volume_of_uniform_state() {
        let m = model(ElementPair::Q1RT0, 3);
        let s = m.initial_states().unwrap();
        let v0 = material::initial_swelling(&m.params).unwrap();
        assert!((total_solute_volume(&m, &s) - v0).abs() < 1e-15);
    }

    #[test]
    fn zero_flux_commit_refreshes_only_c() {
        let m = model(ElementPair::Q1RT0, 2);
        let s = m.initial_states().unwrap();
        let mut d = m.initial_solution();
        d[0] = 0.01;
        let next = commit_states(&m, &s, &d, 0.1).unwrap();
        for (a, b) in s.all().iter().zip(next.all()) {
            assert_eq!(a.v_n, b.v_n);
        }
        assert!(next.all().iter().any(|p| p.c_n != Matrix3::identity()));
    }

    #[test]
    fn uniform_divergence_lowers_v() {
        // RT0 field with unit outward flux on every +x face, zero elsewhere,
        // on a single element: div = 1/h.
        let m = model(ElementPair::Q1RT0, 1);
        let s = m.initial_states().unwrap();
        let mut d = m.initial_solution();
        let plus_x = m.mesh.element_faces(0)[1];
        d[m.dofmap.face_dof(plus_x).unwrap()] = 0.05;
        let next = commit_states(&m, &s, &d, 0.1).unwrap();
        for (a, b) in s.all().iter().zip(next.all()) {
            assert!((a.v_n - 0.1 * 0.05 - b.v_n).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_rt0_field_is_divergence_free() {
        let m = model(ElementPair::Q1RT0, 3);
        // Global DOF = flux along global normal; constant field (1, 0, 0).
        let mut d = m.initial_solution();
        for (f, face) in m.mesh.faces().iter().enumerate() {
            if face.axis == 0 {
                d[m.dofmap.face_dof(f).unwrap()] = face.normal_sign();
            }
        }
        let s = m.initial_states().unwrap();
        let next = commit_states(&m, &s, &d, 1.0).unwrap();
        for (a, b) in s.all().iter().zip(next.all()) {
            assert!((a.v_n - b.v_n).abs() < 1e-12);
        }
    }

    #[test]
    fn elasticity_element_rigid_translation_is_stress_free() {
        let m = Model::new(
            build_mesh(2, 1.0).unwrap(),
            Discretization::Elasticity,
            MaterialParams::reference(1.01),
        );
        let s = m.initial_states().unwrap();
        let d: Vec<f64> = (0..m.ndofs()).map(|i| [0.1, -0.2, 0.3][i % 3]).collect();
        let r = assemble_residual(&m, &s, &d, 1.0, 0.0).unwrap();
        assert!(r.iter().all(|x| x.abs() < 1e-13));
    }

    #[test]
    fn deformation_block_positive_on_stretch() {
        let m = model(ElementPair::Q1Q1, 1);
        let s = m.initial_states().unwrap();
        let sys = assemble(&m, &s, &m.initial_solution(), 0.05, 0.05).unwrap();
        let mut x = vec![0.0; m.ndofs()];
        for p in 0..8 {
            x[m.dofmap.deformation_dof(p, 0)] = m.mesh.coords()[p][0];
        }
        let kx = sys.k.spmv(&x).unwrap();
        let e: f64 = kx.iter().zip(&x).map(|(a, b)| a * b).sum();
        assert!(e > 0.0);
    }
}
