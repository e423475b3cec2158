//! Lowest-order Raviart-Thomas functions on bricks.
//!
//! Local faces are ordered `-x, +x, -y, +y, -z, +z`. Basis function `j` has
//! unit outward normal trace on face `j` and zero trace on the other faces.
//! On axis-aligned bricks the physical basis is taken as the reference basis
//! composed with the affine map, so traces remain unit-valued and the
//! divergence scales by `2/h`.

/// Axis and side (`true` for the `+` face) of local face `j`.
pub fn face_axis(j: usize) -> (usize, bool) {
    (j / 2, j % 2 == 1)
}

/// Values and reference divergences of the 6 basis functions at `xi`.
pub fn shape_rt0(xi: [f64; 3]) -> ([[f64; 3]; 6], [f64; 6]) {
    let mut n = [[0.0; 3]; 6];
    for (j, nj) in n.iter_mut().enumerate() {
        let (axis, plus) = face_axis(j);
        nj[axis] = if plus {
            0.5 * (1.0 + xi[axis])
        } else {
            -0.5 * (1.0 - xi[axis])
        };
    }
    (n, [0.5; 6])
}

/// Values and physical divergences on a cube of edge `h`.
pub fn shape_rt0_physical(xi: [f64; 3], h: f64) -> ([[f64; 3]; 6], [f64; 6]) {
    let (n, _) = shape_rt0(xi);
    (n, [1.0 / h; 6])
}

/// Reference point on local face `j` from face coordinates `(s, t)`.
pub fn face_point(j: usize, st: [f64; 2]) -> [f64; 3] {
    let (axis, plus) = face_axis(j);
    let mut p = [0.0; 3];
    p[axis] = if plus { 1.0 } else { -1.0 };
    let others: Vec<usize> = (0..3).filter(|&d| d != axis).collect();
    p[others[0]] = st[0];
    p[others[1]] = st[1];
    p
}

/// Outward unit normal of local face `j`.
pub fn face_normal(j: usize) -> [f64; 3] {
    let (axis, plus) = face_axis(j);
    let mut n = [0.0; 3];
    n[axis] = if plus { 1.0 } else { -1.0 };
    n
}
