//! Chemo-mechanical constitutive model.
//!
//! Free energy per unit pre-swollen reference volume:
//!
//! ```text
//! ψ(F, v) = γ/(2J₀) [J₀^{2/3} tr C − 3 − 2 ln(J J₀)]
//!         + λ/(2J₀) [J J₀ − 1 − v]²
//!         + α/J₀ [v ln(v/(1+v)) + χ v/(1+v)]
//! ```
//!
//! Dissipation potential with explicitly treated state:
//! `φ(J_v) = Cₙ : (J_v ⊗ J_v) / (2 M vₙ)`.
//!
//! Second derivatives with respect to `F` are stored as 9×9 matrices with
//! `F_iJ ↦ 3i + J`.

use nalgebra::{Matrix3, SMatrix, Vector3};

use crate::error::{Error, Result};

pub type Matrix9 = SMatrix<f64, 9, 9>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    /// Shear modulus γ (N/mm²).
    pub gamma: f64,
    /// Mixing modulus α (N/mm²).
    pub alpha: f64,
    /// Mixing control χ.
    pub chi: f64,
    /// Volumetric diffusivity M (mm⁴/(N·s)).
    pub mobility: f64,
    /// Volumetric penalty λ (N/mm²).
    pub lambda: f64,
    /// Pre-swollen Jacobian J₀.
    pub j0: f64,
}

impl MaterialParams {
    /// Reference parameters (γ = 0.1, α = 24.2, χ = 0.2, M = 1e-2,
    /// λ = 0.2) with the given `J₀`.
    pub fn reference(j0: f64) -> Self {
        Self {
            gamma: 0.1,
            alpha: 24.2,
            chi: 0.2,
            mobility: 1e-2,
            lambda: 0.2,
            j0,
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("gamma", self.gamma),
            ("alpha", self.alpha),
            ("chi", self.chi),
            ("mobility", self.mobility),
            ("lambda", self.lambda),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.j0 >= 1.0) || !self.j0.is_finite() {
            return Err(Error::InvalidParameter(format!("J0 must be >= 1, got {}", self.j0)));
        }
        Ok(())
    }
}

/// Reason a point state left the admissible set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Inadmissible {
    Jacobian(f64),
    Swelling(f64),
}

impl std::fmt::Display for Inadmissible {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Inadmissible::Jacobian(j) => write!(f, "det F = {j:e} <= 0"),
            Inadmissible::Swelling(v) => write!(f, "v = {v:e} <= 0"),
        }
    }
}

impl Inadmissible {
    pub fn at(self, element: usize, point: usize) -> Error {
        Error::Inadmissible {
            element,
            point,
            reason: self.to_string(),
        }
    }
}

/// History carried by a quadrature point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointState {
    pub v_n: f64,
    pub c_n: Matrix3<f64>,
}

impl PointState {
    pub fn initial(v0: f64) -> Self {
        Self {
            v_n: v0,
            c_n: Matrix3::identity(),
        }
    }
}

/// Free energy and its derivatives at one point.
#[derive(Debug, Clone)]
pub struct PointEval {
    pub psi: f64,
    /// First Piola-Kirchhoff stress ∂ψ/∂F.
    pub p: Matrix3<f64>,
    /// Chemical potential ∂ψ/∂v.
    pub mu: f64,
    /// ∂²ψ/∂F∂F.
    pub a: Matrix9,
    /// ∂²ψ/∂F∂v.
    pub d_fv: Matrix3<f64>,
    /// ∂²ψ/∂v².
    pub d_vv: f64,
}

fn check(f: &Matrix3<f64>, v: f64) -> std::result::Result<f64, Inadmissible> {
    let j = f.determinant();
    if !(j > 0.0) {
        return Err(Inadmissible::Jacobian(j));
    }
    if !(v > 0.0) {
        return Err(Inadmissible::Swelling(v));
    }
    Ok(j)
}

fn mixing(v: f64, p: &MaterialParams) -> f64 {
    p.alpha / p.j0 * (v * (v / (1.0 + v)).ln() + p.chi * v / (1.0 + v))
}

pub fn energy(f: &Matrix3<f64>, v: f64, p: &MaterialParams) -> std::result::Result<f64, Inadmissible> {
    let j = check(f, v)?;
    let a = p.j0.powf(2.0 / 3.0);
    let c_trace = f.norm_squared();
    let g = j * p.j0 - 1.0 - v;
    Ok(p.gamma / (2.0 * p.j0) * (a * c_trace - 3.0 - 2.0 * (j * p.j0).ln())
        + p.lambda / (2.0 * p.j0) * g * g
        + mixing(v, p))
}

pub fn chemical_potential(
    f: &Matrix3<f64>,
    v: f64,
    p: &MaterialParams,
) -> std::result::Result<f64, Inadmissible> {
    let j = check(f, v)?;
    Ok(mu_from(j, v, p))
}

fn mu_from(j: f64, v: f64, p: &MaterialParams) -> f64 {
    let g = j * p.j0 - 1.0 - v;
    let w = 1.0 + v;
    -p.lambda / p.j0 * g + p.alpha / p.j0 * ((v / w).ln() + 1.0 / w + p.chi / (w * w))
}

/// Energy, stress, chemical potential and all second derivatives.
pub fn evaluate(
    f: &Matrix3<f64>,
    v: f64,
    p: &MaterialParams,
) -> std::result::Result<PointEval, Inadmissible> {
    let j = check(f, v)?;
    let finv = f.try_inverse().ok_or(Inadmissible::Jacobian(j))?;
    let finv_t = finv.transpose();
    let a = p.j0.powf(2.0 / 3.0);
    let g = j * p.j0 - 1.0 - v;
    let gj = p.gamma / p.j0;

    let psi = p.gamma / (2.0 * p.j0) * (a * f.norm_squared() - 3.0 - 2.0 * (j * p.j0).ln())
        + p.lambda / (2.0 * p.j0) * g * g
        + mixing(v, p);
    let stress = gj * (a * f - finv_t) + p.lambda * g * j * finv_t;
    let mu = mu_from(j, v, p);

    let mut tangent = Matrix9::zeros();
    for i in 0..3 {
        for jj in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let mut val = gj * finv[(l, i)] * finv[(jj, k)]
                        + p.lambda * p.j0 * j * j * finv[(l, k)] * finv[(jj, i)]
                        + p.lambda * g * j * (finv[(l, k)] * finv[(jj, i)] - finv[(jj, k)] * finv[(l, i)]);
                    if i == k && jj == l {
                        val += gj * a;
                    }
                    tangent[(3 * i + jj, 3 * k + l)] = val;
                }
            }
        }
    }
    let d_fv = -p.lambda * j * finv_t;
    let w = 1.0 + v;
    let d_vv = p.lambda / p.j0
        + p.alpha / p.j0 * (1.0 / v - 1.0 / w - 1.0 / (w * w) - 2.0 * p.chi / (w * w * w));

    Ok(PointEval {
        psi,
        p: stress,
        mu,
        a: tangent,
        d_fv,
        d_vv,
    })
}

/// Dissipation potential, gradient and Hessian with respect to the flux.
#[derive(Debug, Clone, Copy)]
pub struct Dissipation {
    pub phi: f64,
    pub grad: Vector3<f64>,
    pub hess: Matrix3<f64>,
}

pub fn dissipation(jv: &Vector3<f64>, state: &PointState, p: &MaterialParams) -> Dissipation {
    let hess = state.c_n / (p.mobility * state.v_n);
    let grad = hess * jv;
    Dissipation {
        phi: 0.5 * jv.dot(&grad),
        grad,
        hess,
    }
}

/// Swelling volume fraction of the stress-free pre-swollen state.
pub fn initial_swelling(p: &MaterialParams) -> Result<f64> {
    let v0 = p.gamma / p.lambda * (p.j0.powf(-1.0 / 3.0) - 1.0 / p.j0) + p.j0 - 1.0;
    if !(v0 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "initial swelling v0 = {v0} is not positive (J0 = {})",
            p.j0
        )));
    }
    Ok(v0)
}

/// Backward-Euler update `v = vₙ − Δt div J_v`.
pub fn update_state(v_n: f64, div_jv: f64, dt: f64) -> std::result::Result<f64, Inadmissible> {
    let v = v_n - dt * div_jv;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Inadmissible::Swelling(v))
    }
}
