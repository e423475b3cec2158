//! Checkerboard diagnostic for the swelling field.

use super::problems::make_punch_with;
use crate::assembly::{element_average_swelling, Model, StateField};
use crate::driver::{time_march, NewtonConfig};
use crate::elements::ElementPair;
use crate::error::Result;
use crate::material::MaterialParams;
use crate::mesh::Decomposition;
use crate::schwarz::SchwarzConfig;

/// Max over interior elements of `|v̄_e − mean of its 6 face neighbours|`,
/// where `v̄_e` is the element-averaged swelling.
pub fn checkerboard_indicator(model: &Model, states: &StateField) -> f64 {
    let v = element_average_swelling(model, states);
    let mesh = &model.mesh;
    let n = mesh.n_per_axis();
    let mut worst: f64 = 0.0;
    for (e, &ve) in v.iter().enumerate() {
        let ijk = mesh.element_ijk(e);
        if ijk.iter().any(|&i| i == 0 || i + 1 == n) {
            continue;
        }
        let mut sum = 0.0;
        for axis in 0..3 {
            for delta in [-1isize, 1] {
                let mut nb = ijk;
                nb[axis] = (nb[axis] as isize + delta) as usize;
                sum += v[mesh.element_index(nb)];
            }
        }
        worst = worst.max((ve - sum / 6.0).abs());
    }
    worst
}

/// Runs the punch problem with the given stiffness `lambda` up to
/// `end_time` and returns the final checkerboard indicator.
pub fn punch_checkerboard(
    n: usize,
    pair: ElementPair,
    lambda: f64,
    dims: [usize; 3],
    dt: f64,
    end_time: f64,
) -> Result<f64> {
    let problem = make_punch_with(n, pair, MaterialParams::reference(super::problems::PUNCH_J0).with_lambda(lambda))?;
    let model = &problem.model;
    let decomp = Decomposition::new(&model.mesh, dims, 2)?;
    let config = NewtonConfig {
        dt,
        end_time,
        ..NewtonConfig::default()
    };
    let (_, _, states) = time_march(model, &decomp, SchwarzConfig::default(), config)?;
    Ok(checkerboard_indicator(model, &states))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::problems::{make_free_swelling, FreeSwellingBc};

    #[test]
    fn uniform_field_has_zero_indicator() {
        let p = make_free_swelling(4, ElementPair::Q1RT0, FreeSwellingBc::Sealed).unwrap();
        let states = p.model.initial_states().unwrap();
        assert_eq!(checkerboard_indicator(&p.model, &states), 0.0);
    }

    #[test]
    fn alternating_field_is_detected() {
        let p = make_free_swelling(4, ElementPair::Q1RT0, FreeSwellingBc::Sealed).unwrap();
        let mut states = p.model.initial_states().unwrap();
        let npts = states.points_per_element();
        let mesh = &p.model.mesh;
        for e in 0..mesh.num_elements() {
            let [i, j, k] = mesh.element_ijk(e);
            let sign = if (i + j + k) % 2 == 0 { 1.0 } else { -1.0 };
            for q in 0..npts {
                states.get_mut(e, q).v_n += 0.1 * sign;
            }
        }
        let ind = checkerboard_indicator(&p.model, &states);
        assert!((ind - 0.2).abs() < 1e-12, "{ind}");
    }
}
