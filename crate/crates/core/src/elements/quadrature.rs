//! Tensor-product Gauss-Legendre rules on the reference brick `[-1, 1]³`
//! and the reference square `[-1, 1]²`.

use crate::error::{Error, Result};

/// 1D Gauss-Legendre points and weights on `[-1, 1]`.
pub fn gauss_1d(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let (p, w): (Vec<f64>, Vec<f64>) = match order {
        1 => (vec![0.0], vec![2.0]),
        2 => {
            let a = 1.0 / 3f64.sqrt();
            (vec![-a, a], vec![1.0, 1.0])
        }
        3 => {
            let a = (3.0f64 / 5.0).sqrt();
            (vec![-a, 0.0, a], vec![5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])
        }
        4 => {
            let s = (6.0f64 / 5.0).sqrt();
            let a = ((3.0 - 2.0 * s) / 7.0).sqrt();
            let b = ((3.0 + 2.0 * s) / 7.0).sqrt();
            let wa = (18.0 + 30f64.sqrt()) / 36.0;
            let wb = (18.0 - 30f64.sqrt()) / 36.0;
            (vec![-b, -a, a, b], vec![wb, wa, wa, wb])
        }
        _ => {
            return Err(Error::InvalidParameter(format!(
                "Gauss order {order} not supported (1..=4)"
            )))
        }
    };
    Ok((p, w))
}

/// Volume rule; points are ordered with the first coordinate fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    points: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn gauss(order: usize) -> Result<Self> {
        let (p, w) = gauss_1d(order)?;
        let mut points = Vec::with_capacity(order.pow(3));
        let mut weights = Vec::with_capacity(order.pow(3));
        for k in 0..order {
            for j in 0..order {
                for i in 0..order {
                    points.push([p[i], p[j], p[k]]);
                    weights.push(w[i] * w[j] * w[k]);
                }
            }
        }
        Ok(Self { points, weights })
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::gauss(2).expect("order 2 is supported")
    }
}

/// Rule on the reference square, for boundary faces.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceQuadrature {
    points: Vec<[f64; 2]>,
    weights: Vec<f64>,
}

impl FaceQuadrature {
    pub fn gauss(order: usize) -> Result<Self> {
        let (p, w) = gauss_1d(order)?;
        let mut points = Vec::with_capacity(order * order);
        let mut weights = Vec::with_capacity(order * order);
        for j in 0..order {
            for i in 0..order {
                points.push([p[i], p[j]]);
                weights.push(w[i] * w[j]);
            }
        }
        Ok(Self { points, weights })
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl Default for FaceQuadrature {
    fn default() -> Self {
        Self::gauss(2).expect("order 2 is supported")
    }
}
