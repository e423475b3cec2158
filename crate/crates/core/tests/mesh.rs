use proptest::prelude::*;

use gelswell::mesh::{build_mesh, decompose, dilate, node_membership, BoundaryPlane};

/// Brute-force dilation by Chebyshev distance on element indices.
fn chebyshev_dilation(n: usize, seed: &[[usize; 3]], layers: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let c = [i, j, k];
                let near = seed.iter().any(|s| {
                    (0..3).all(|a| (s[a] as isize - c[a] as isize).unsigned_abs() <= layers)
                });
                if near {
                    out.push(c);
                }
            }
        }
    }
    out
}

proptest! {
    #[test]
    fn dilation_composes(n in 2usize..6, e in 0usize..125, a in 0usize..3, b in 0usize..3) {
        let mesh = build_mesh(n, 1.0).unwrap();
        let e = e % mesh.num_elements();
        let once = dilate(&mesh, &dilate(&mesh, &[e], a), b);
        prop_assert_eq!(once, dilate(&mesh, &[e], a + b));
    }

    #[test]
    fn dilation_matches_chebyshev_ball(n in 2usize..6, e in 0usize..125, layers in 0usize..3) {
        let mesh = build_mesh(n, 1.0).unwrap();
        let e = e % mesh.num_elements();
        let got: Vec<[usize; 3]> = dilate(&mesh, &[e], layers).into_iter().map(|x| mesh.element_ijk(x)).collect();
        let mut want = chebyshev_dilation(n, &[mesh.element_ijk(e)], layers);
        let mut got_sorted = got.clone();
        got_sorted.sort();
        want.sort();
        prop_assert_eq!(got_sorted, want);
    }

    #[test]
    fn owned_elements_partition_the_mesh(k in 1usize..4, mx in 1usize..3, my in 1usize..3, mz in 1usize..3, overlap in 0usize..3) {
        let n = 2 * k;
        let mesh = build_mesh(n, 1.0).unwrap();
        let d = decompose(&mesh, [mx, my, mz], overlap).unwrap();
        let mut seen = vec![0; mesh.num_elements()];
        for s in 0..d.num_subdomains() {
            for &e in d.owned_elements(s) {
                seen[e] += 1;
                prop_assert_eq!(d.owner(e), s);
            }
            let ov = d.overlapping_elements(s);
            prop_assert!(d.owned_elements(s).iter().all(|e| ov.contains(e)));
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
    }
}

#[test]
fn counts_and_boundary_sizes() {
    let mesh = build_mesh(3, 2.0).unwrap();
    assert_eq!(mesh.num_nodes(), 64);
    assert_eq!(mesh.num_elements(), 27);
    assert_eq!(mesh.num_faces(), 3 * 9 * 4);
    assert_eq!(mesh.num_boundary_faces(), 6 * 9);
    for plane in BoundaryPlane::ALL {
        assert_eq!(mesh.boundary_faces(plane).count(), 9);
        assert_eq!(mesh.boundary_nodes(plane).len(), 16);
    }
    assert!((mesh.element_size() - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(build_mesh(0, 1.0).is_err());
    assert!(build_mesh(2, -1.0).is_err());
    let mesh = build_mesh(2, 1.0).unwrap();
    assert!(decompose(&mesh, [3, 1, 1], 0).is_err());
    assert!(decompose(&mesh, [0, 1, 1], 0).is_err());
}

#[test]
fn node_membership_cardinalities() {
    let mesh = build_mesh(4, 1.0).unwrap();
    let d = decompose(&mesh, [2, 2, 2], 0).unwrap();
    let m = node_membership(&mesh, &d);
    let center = mesh.coords().iter().position(|x| x.iter().all(|&c| (c - 0.5).abs() < 1e-12)).unwrap();
    assert_eq!(m[center], (0..8).collect::<Vec<_>>());
    let hist = m.iter().fold([0usize; 9], |mut h, s| {
        h[s.len()] += 1;
        h
    });
    assert_eq!(hist[8], 1);
    assert_eq!(hist[4], 3 * 4);
    assert_eq!(hist[2], 3 * 16);
    assert_eq!(hist[1], 64);
}

#[test]
fn export_writers_produce_one_line_per_entity() {
    let mesh = build_mesh(2, 1.0).unwrap();
    let d = decompose(&mesh, [2, 1, 1], 1).unwrap();
    let mut nodes = Vec::new();
    mesh.write_nodes(&mut nodes).unwrap();
    let mut elems = Vec::new();
    mesh.write_elements(&mut elems).unwrap();
    let mut owners = Vec::new();
    d.write_owner_map(&mut owners).unwrap();
    assert_eq!(String::from_utf8(nodes).unwrap().lines().count(), 27);
    assert_eq!(String::from_utf8(elems).unwrap().lines().count(), 8);
    assert_eq!(String::from_utf8(owners).unwrap().lines().count(), 8);
}
