use nalgebra::Matrix4;
use skewcurv::connection::{
    bianchi_first_residual, christoffel, g45_algebra, koszul_nabla, lie_metric_compatibility_residual, lie_torsion_residual,
    metric_compatibility_residual, riemann_chart, riemann_lie, ChartManifold, LieGroupManifold,
};
use skewcurv::expr::Point4;
use skewcurv::linalg4::{Mat4, Tensor4};
use skewcurv::manifold::SkewStructure;
use skewcurv::suite::{constant_curvature_pattern, g45_connection_table};
use skewcurv::Error;

const P: Point4 = Point4([0.1, 0.2, 0.3, 0.4]);

fn wavy() -> ChartManifold {
    ChartManifold::parse("2+0.1*sin(x1+x4)", "0.3").unwrap()
}

// Reference values from an independent symbolic computation (exact
// rational point, 20 digits).
#[test]
fn chart_curvature_matches_symbolic_reference() {
    let r = riemann_chart(&wavy(), &P).unwrap();
    let expected = [
        ((0, 1, 0, 1), -0.024953587794409542217),
        ((0, 3, 0, 3), -0.051871797317217868842),
        ((0, 1, 2, 3), -0.00014389722929694188736),
        ((1, 2, 1, 3), 0.00014389722929694188736),
        ((0, 2, 0, 2), -0.024953587794409542217),
    ];
    for ((i, j, k, h), v) in expected {
        assert!((r.get(i, j, k, h) - v).abs() < 1e-14, "R{i}{j}{k}{h} = {}", r.get(i, j, k, h));
    }
    let gamma = christoffel(&wavy(), &P).unwrap();
    assert!((gamma.get(0, 0, 3) - -0.019107344911148875644).abs() < 1e-15);
    assert!((gamma.get(0, 3, 0) - 0.025666145668856614836).abs() < 1e-15);
}

/// Christoffel symbols from central differences of the metric values.
fn fd_christoffel(m: &ChartManifold, p: &Point4) -> [[[f64; 4]; 4]; 4] {
    let h = 1e-5;
    let g_at = |q: &Point4| m.metric_at(q).unwrap().g;
    let dg: Vec<Mat4> = (0..4)
        .map(|a| {
            let (mut lo, mut hi) = (*p, *p);
            lo.0[a] -= h;
            hi.0[a] += h;
            (g_at(&hi) - g_at(&lo)).scale(0.5 / h)
        })
        .collect();
    let g = g_at(p);
    let gi = Matrix4::from_fn(|i, j| g.0[i][j]).try_inverse().unwrap();
    let mut out = [[[0.0; 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                out[i][j][k] = (0..4)
                    .map(|l| 0.5 * gi[(k, l)] * (dg[i].0[j][l] + dg[j].0[i][l] - dg[l].0[i][j]))
                    .sum();
            }
        }
    }
    out
}

#[test]
fn christoffel_matches_finite_differences() {
    let m = ChartManifold::parse("3 + 0.2*x1*x2 - 0.1*cos(x3)", "0.5 + 0.1*sin(x4 - x2)").unwrap();
    let p = Point4([0.3, -0.7, 1.1, 0.4]);
    let gamma = christoffel(&m, &p).unwrap();
    let oracle = fd_christoffel(&m, &p);
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                assert!((gamma.get(i, j, k) - oracle[i][j][k]).abs() < 1e-8);
            }
        }
    }
    assert!(gamma.torsion_residual() < 1e-15);
    assert!(metric_compatibility_residual(&m, &gamma, &p).unwrap() < 1e-14);
    let r = riemann_chart(&m, &p).unwrap();
    assert!(r.curvature_symmetry_residual() < 1e-13);
    assert!(bianchi_first_residual(&r) < 1e-13);
}

#[test]
fn constant_chart_is_flat() {
    let m = ChartManifold::parse("2", "0.5").unwrap();
    assert_eq!(riemann_chart(&m, &P).unwrap(), Tensor4::zero());
    assert_eq!(christoffel(&m, &P).unwrap().max_abs(), 0.0);
}

#[test]
fn chart_errors() {
    let bad = ChartManifold::parse("1", "1").unwrap();
    assert!(matches!(bad.metric_at(&P), Err(Error::NotPositiveDefinite { .. })));
    let ln = ChartManifold::parse("ln(x1)", "0").unwrap();
    assert!(matches!(riemann_chart(&ln, &Point4::ORIGIN), Err(Error::Domain(_))));
    assert!(ChartManifold::parse("2 +", "0").is_err());
}

#[test]
fn g45_connection_and_curvature() {
    for (a, b) in [(1.0, 1.0), (0.5, -0.25), (1.0, 0.3)] {
        let m = g45_algebra(a, b).unwrap();
        let nabla = koszul_nabla(&m);
        let mut expected = [[[0.0; 4]; 4]; 4];
        for (i, j, k, v) in g45_connection_table(a, b) {
            expected[i][j][k] = v;
        }
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    assert!((nabla.get(i, j, k) - expected[i][j][k]).abs() < 1e-15, "({a},{b}) {i}{j}{k}");
                }
            }
        }
        assert!(lie_metric_compatibility_residual(&nabla) < 1e-15);
        assert!(lie_torsion_residual(&m, &nabla) < 1e-15);
        // the frame is not a coordinate frame, so the symmetric-Gamma test fails
        assert!(nabla.torsion_residual() > 0.1);
        let r = riemann_lie(&m, &nabla);
        assert!(bianchi_first_residual(&r) < 1e-15);
        // sectional curvature of the e_i, e_j plane is the product of the
        // eigenvalues of ad(e_4) on the two directions
        let ev = [1.0, a, b];
        for i in 0..3 {
            for j in i + 1..3 {
                assert!((r.get(i, j, i, j) - ev[i] * ev[j]).abs() < 1e-15);
            }
            assert!((r.get(i, 3, i, 3) - ev[i] * ev[i]).abs() < 1e-15);
        }
    }
    let m = g45_algebra(1.0, 1.0).unwrap();
    let r = riemann_lie(&m, &koszul_nabla(&m));
    assert_eq!(r, constant_curvature_pattern());
    assert!(skewcurv::analysis::check_r1_invariance(&r, &m.s) > 0.5);
}

#[test]
fn abelian_group_is_flat() {
    let m = LieGroupManifold::abelian(SkewStructure::lie_example());
    assert_eq!(riemann_lie(&m, &koszul_nabla(&m)), Tensor4::zero());
}
