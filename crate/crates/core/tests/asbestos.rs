use taxicab_core::ca::ca;
use taxicab_core::cluster::{maximize, Method};
use taxicab_core::residual::{correspondence_residual, CorrespondenceMatrix};
use taxicab_core::taxicab::{tca, TcaOptions};
use taxicab_core::Matrix;

fn asbestos() -> CorrespondenceMatrix {
    let counts = Matrix::from_rows(&[
        [310.0, 36.0, 0.0, 0.0],
        [212.0, 158.0, 9.0, 0.0],
        [21.0, 35.0, 17.0, 4.0],
        [25.0, 102.0, 49.0, 18.0],
        [7.0, 35.0, 51.0, 28.0],
    ])
    .unwrap();
    CorrespondenceMatrix::from_counts(&counts).unwrap()
}

/// Equal to `want` within `tol` after flipping `got` by `sign`.
fn close(got: &[f64], want: &[f64], sign: f64, tol: f64) -> bool {
    got.iter().zip(want).all(|(g, w)| (sign * g - w).abs() <= tol)
}

fn sign_to_match(got: &[f64], want: &[f64]) -> f64 {
    let dot: f64 = got.iter().zip(want).map(|(g, w)| g * w).sum();
    if dot < 0.0 {
        -1.0
    } else {
        1.0
    }
}

#[test]
fn margins_and_residual() {
    let p = asbestos();
    let want_r = [0.3098, 0.3393, 0.0689, 0.1737, 0.1083];
    let want_c = [0.5148, 0.3277, 0.1128, 0.0448];
    assert!(close(p.row_masses(), &want_r, 1.0, 5e-5));
    assert!(close(p.col_masses(), &want_c, 1.0, 5e-5));
    let x = correspondence_residual(&p);
    let want = [
        [0.1181, -0.0693, -0.0349, -0.0139],
        [0.0151, 0.0303, -0.0302, -0.0152],
        [-0.0167, 0.0087, 0.0074, 0.0005],
        [-0.0670, 0.0344, 0.0243, 0.0083],
        [-0.0495, -0.0042, 0.0334, 0.0202],
    ];
    for (i, row) in want.iter().enumerate() {
        assert!(close(x.matrix().row(i), row, 1.0, 5e-5), "row {i}");
    }
}

#[test]
fn first_axis() {
    let dec = tca(&asbestos(), &TcaOptions::default()).unwrap();
    let ax = &dec.axes[0];
    assert!((ax.axis.delta - 4.0 * 0.1332).abs() < 5e-4);
    assert!(ax.axis.exact);

    let a = [-0.2362, -0.0303, 0.0334, 0.1340, 0.0990];
    let f = [-0.7624, -0.0892, 0.4841, 0.7718, 0.9138];
    let b = [-0.2664, 0.0780, 0.1302, 0.0582];
    let g = [-0.5175, 0.2380, 1.1553, 1.2981];
    let s = sign_to_match(&ax.axis.a, &a);
    assert!(close(&ax.axis.a, &a, s, 5e-4));
    assert!(close(&ax.f, &f, s, 5e-4));
    assert!(close(&ax.axis.b, &b, s, 5e-4));
    assert!(close(&ax.g, &g, s, 5e-4));

    let v: Vec<f64> = ax.axis.v.to_f64();
    let u: Vec<f64> = ax.axis.u.to_f64();
    assert!(close(&v, &[-1.0, -1.0, 1.0, 1.0, 1.0], s, 0.0));
    assert!(close(&u, &[-1.0, 1.0, 1.0, 1.0], s, 0.0));
}

#[test]
fn second_axis_and_g0_heavyweight() {
    let dec = tca(&asbestos(), &TcaOptions::default()).unwrap();
    let rc = dec.rc_axis(0).unwrap();
    assert!((rc.rc_cols[0] - 0.5).abs() <= 1e-10);
    assert_eq!(rc.heavyweight_cols, [0]);

    let p2 = dec.axes[1].residual.matrix();
    assert!(p2.column(0).all(|x| x.abs() <= 1e-12));

    let ax = &dec.axes[1];
    assert!((ax.axis.delta - 4.0 * 0.0533).abs() < 5e-4);
    let b = [0.0, -0.1066, 0.0640, 0.0426];
    let g = [0.0, -0.3257, 0.5681, 0.9521];
    let s = sign_to_match(&ax.g, &g);
    assert!(close(&ax.axis.b, &b, s, 1e-3));
    assert!(close(&ax.g, &g, s, 1e-3));
    // G0 sits at zero on this axis, so its sign is not determined
    assert_eq!(ax.axis.indeterminate_cols, [0]);
}

#[test]
fn seriation_blocks() {
    let dec = tca(&asbestos(), &TcaOptions::default()).unwrap();
    for (k, magnitude) in [(0, 0.1332), (1, 0.0533)] {
        let ser = dec.seriate(k).unwrap();
        let c = ser.delta / 4.0;
        let signs = [1.0, -1.0, -1.0, 1.0];
        for (sum, sign) in ser.block_sums.iter().zip(signs) {
            assert!((sum - sign * c).abs() <= 1e-10 * c, "axis {k}: {:?}", ser.block_sums);
        }
        assert!((c - magnitude).abs() < 2e-4);
    }
    let first = dec.seriate(0).unwrap();
    assert_eq!(first.s_opt, [0, 1]);
    assert_eq!(first.t_opt, [0]);
}

#[test]
fn reconstruction() {
    let p = asbestos();
    let dec = tca(&p, &TcaOptions::default()).unwrap();
    for rebuilt in [dec.reconstruct(), dec.reconstruct_from_scores()] {
        for (x, y) in rebuilt.as_slice().iter().zip(p.p().as_slice()) {
            assert!((x - y).abs() <= 1e-8);
        }
    }
    let classic = ca(&p, None).unwrap();
    for (x, y) in classic.reconstruct().as_slice().iter().zip(p.p().as_slice()) {
        assert!((x - y).abs() <= 1e-8);
    }
    let inertia: f64 = classic.principal_inertias.iter().sum();
    assert!((inertia - classic.total_inertia).abs() <= 1e-8);
}

#[test]
fn two_by_two_clustering_is_the_first_axis() {
    let x = correspondence_residual(&asbestos());
    let res = maximize(&x, 2, 2, 1.0, Method::Auto).unwrap();
    assert!((res.objective - 0.5328).abs() < 5e-4);
    let mut blocks = res.partition.row_blocks();
    blocks.sort();
    assert_eq!(blocks, [vec![0, 1], vec![2, 3, 4]]);
}
