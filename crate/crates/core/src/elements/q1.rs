//! Trilinear Lagrange shape functions on the reference brick.

use crate::mesh::HEX_VERTEX_OFFSETS;

/// Reference coordinates of the 8 vertices, in mesh-local vertex order.
pub fn vertex_coords(a: usize) -> [f64; 3] {
    let o = HEX_VERTEX_OFFSETS[a];
    [
        2.0 * o[0] as f64 - 1.0,
        2.0 * o[1] as f64 - 1.0,
        2.0 * o[2] as f64 - 1.0,
    ]
}

/// Values and reference gradients of the 8 trilinear functions at `xi`.
pub fn shape_q1(xi: [f64; 3]) -> ([f64; 8], [[f64; 3]; 8]) {
    let mut n = [0.0; 8];
    let mut g = [[0.0; 3]; 8];
    for a in 0..8 {
        let s = vertex_coords(a);
        let f = [
            0.5 * (1.0 + s[0] * xi[0]),
            0.5 * (1.0 + s[1] * xi[1]),
            0.5 * (1.0 + s[2] * xi[2]),
        ];
        n[a] = f[0] * f[1] * f[2];
        g[a] = [
            0.5 * s[0] * f[1] * f[2],
            0.5 * s[1] * f[0] * f[2],
            0.5 * s[2] * f[0] * f[1],
        ];
    }
    (n, g)
}

/// Values and physical gradients on a cube of edge `h`.
pub fn shape_q1_physical(xi: [f64; 3], h: f64) -> ([f64; 8], [[f64; 3]; 8]) {
    let (n, mut g) = shape_q1(xi);
    let s = 2.0 / h;
    for ga in &mut g {
        ga.iter_mut().for_each(|v| *v *= s);
    }
    (n, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_values() {
        let (n, _) = shape_q1([0.0; 3]);
        for v in n {
            assert!((v - 0.125).abs() < 1e-15);
        }
    }

    #[test]
    fn kronecker_at_vertices() {
        for b in 0..8 {
            let (n, _) = shape_q1(vertex_coords(b));
            for (a, v) in n.iter().enumerate() {
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((v - expect).abs() < 1e-15);
            }
        }
        let (n, _) = shape_q1([-1.0, -1.0, -1.0]);
        assert_eq!(n[0], 1.0);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let xi = [0.3, -0.7, 0.1];
        let (_, g) = shape_q1(xi);
        let h = 1e-6;
        for d in 0..3 {
            let mut p = xi;
            let mut m = xi;
            p[d] += h;
            m[d] -= h;
            let (np, _) = shape_q1(p);
            let (nm, _) = shape_q1(m);
            for a in 0..8 {
                assert!(((np[a] - nm[a]) / (2.0 * h) - g[a][d]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn physical_gradient_scaling() {
        let (_, g) = shape_q1_physical([0.0; 3], 0.5);
        // ∂N₀/∂x at the centre: -1/8 · 2 / h
        assert!((g[0][0] + 0.125 * 4.0).abs() < 1e-15);
    }
}
