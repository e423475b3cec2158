//! Piecewise-linear load programs.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadKind {
    /// Prescribed normal flux `H̄_v` (mm/s): ramp up on `[0, t₁]`, hold
    /// until `t₂`, ramp down to zero by `t₃`, zero until `t₄`.
    Flux,
    /// Prescribed chemical potential (N/mm²): ramp from `μ₀` to `μ̄` on
    /// `[0, t₁]`, hold until `t₄`.
    ChemicalPotential,
    /// Punch displacement `û` (mm): ramp from 0 on `[0, t₁]`, hold until
    /// `t₄`.
    Punch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadProgram {
    pub kind: LoadKind,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
    /// `H̄_v`, `μ̄` or `û`.
    pub target: f64,
    /// Initial level (`μ₀` for the chemical potential, otherwise 0).
    pub initial: f64,
}

/// Relative slack on the end time, absorbing round-off from summed steps.
const END_SLACK: f64 = 1e-9;

impl LoadProgram {
    pub fn flux(target: f64, t1: f64, t2: f64, t3: f64, t4: f64) -> Result<Self> {
        Self::checked(LoadProgram {
            kind: LoadKind::Flux,
            t1,
            t2,
            t3,
            t4,
            target,
            initial: 0.0,
        })
    }

    pub fn chemical_potential(initial: f64, target: f64, t1: f64, t4: f64) -> Result<Self> {
        Self::checked(LoadProgram {
            kind: LoadKind::ChemicalPotential,
            t1,
            t2: t4,
            t3: t4,
            t4,
            target,
            initial,
        })
    }

    pub fn punch(target: f64, t1: f64, t4: f64) -> Result<Self> {
        Self::checked(LoadProgram {
            kind: LoadKind::Punch,
            t1,
            t2: t4,
            t3: t4,
            t4,
            target,
            initial: 0.0,
        })
    }

    /// Free swelling, flux control: `H̄_v = -0.02` mm/s, `t = 0.25, 0.75, 1, 4` s.
    pub fn free_swelling_flux() -> Self {
        Self::flux(-0.02, 0.25, 0.75, 1.0, 4.0).expect("valid defaults")
    }

    /// Free swelling, chemical potential: `μ₀ = -80.31`, `μ̄ = -40.31` N/mm².
    pub fn free_swelling_mu() -> Self {
        Self::chemical_potential(-80.31, -40.31, 0.25, 4.0).expect("valid defaults")
    }

    /// Flat punch: `û = 0.4` mm at `t₁ = 1` s, held until `t₄ = 6` s.
    pub fn punch_default() -> Self {
        Self::punch(0.4, 1.0, 6.0).expect("valid defaults")
    }

    fn checked(p: Self) -> Result<Self> {
        let ordered = 0.0 < p.t1 && p.t1 <= p.t2 && p.t2 <= p.t3 && p.t3 <= p.t4;
        if !ordered || !p.target.is_finite() || !p.initial.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "load program needs 0 < t1 <= t2 <= t3 <= t4, got {:?}",
                (p.t1, p.t2, p.t3, p.t4)
            )));
        }
        Ok(p)
    }

    pub fn end_time(&self) -> f64 {
        self.t4
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0 && t <= self.t4 * (1.0 + END_SLACK)) {
            return Err(Error::TimeOutOfRange { t, end: self.t4 });
        }
        let ramp = |a: f64, b: f64, s: f64| a + (b - a) * s;
        let v = match self.kind {
            LoadKind::Flux => {
                if t <= self.t1 {
                    ramp(0.0, self.target, t / self.t1)
                } else if t <= self.t2 {
                    self.target
                } else if t <= self.t3 && self.t3 > self.t2 {
                    ramp(self.target, 0.0, (t - self.t2) / (self.t3 - self.t2))
                } else {
                    0.0
                }
            }
            LoadKind::ChemicalPotential | LoadKind::Punch => {
                if t <= self.t1 {
                    ramp(self.initial, self.target, t / self.t1)
                } else {
                    self.target
                }
            }
        };
        Ok(v)
    }
}

pub fn load_value(program: &LoadProgram, t: f64) -> Result<f64> {
    program.value(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flux_program_shape() {
        let p = LoadProgram::free_swelling_flux();
        assert_eq!(p.value(0.0).unwrap(), 0.0);
        assert!((p.value(0.125).unwrap() + 0.01).abs() < 1e-15);
        assert_eq!(p.value(0.5).unwrap(), -0.02);
        assert!((p.value(0.875).unwrap() + 0.01).abs() < 1e-15);
        assert_eq!(p.value(1.0).unwrap(), 0.0);
        assert_eq!(p.value(2.5).unwrap(), 0.0);
        assert_eq!(p.value(4.0).unwrap(), 0.0);
    }

    #[test]
    fn chemical_potential_program() {
        let p = LoadProgram::free_swelling_mu();
        assert_eq!(p.value(0.0).unwrap(), -80.31);
        assert!((p.value(0.125).unwrap() + 60.31).abs() < 1e-12);
        assert_eq!(p.value(0.25).unwrap(), -40.31);
        assert_eq!(p.value(3.0).unwrap(), -40.31);
    }

    #[test]
    fn punch_program() {
        let p = LoadProgram::punch_default();
        assert_eq!(p.value(0.0).unwrap(), 0.0);
        assert!((p.value(0.5).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(p.value(6.0).unwrap(), 0.4);
    }

    #[test]
    fn out_of_range_rejected() {
        let p = LoadProgram::punch_default();
        assert!(matches!(p.value(-0.1), Err(Error::TimeOutOfRange { .. })));
        assert!(p.value(6.5).is_err());
        assert!(p.value(f64::NAN).is_err());
    }

    #[test]
    fn invalid_times_rejected() {
        assert!(LoadProgram::flux(-0.02, 0.5, 0.25, 1.0, 4.0).is_err());
        assert!(LoadProgram::punch(0.4, 0.0, 6.0).is_err());
    }
}
