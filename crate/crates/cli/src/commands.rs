//! Subcommand implementations. Each returns a report, or an error for
//! unusable input.

use std::f64::consts::SQRT_2;

use anyhow::Context;
use serde_json::{json, Value};
use skewcurv::analysis::{
    check_l2_components, check_r1_invariance, check_r_invariance, einstein_check, extract_l2_params,
    max_residual, ricci_data, sectional_report, verify_basic_plane_relations, verify_orthonormal_sum_theorem,
    verify_r1_interpolation, verify_r1_plane_relations, verify_three_angle_theorem, RicciData,
};
use skewcurv::connection::{
    bianchi_first_residual, christoffel, koszul_nabla, lie_metric_compatibility_residual, lie_torsion_residual,
    metric_compatibility_residual, riemann_chart, riemann_lie, ConnectionCoefficients,
};
use skewcurv::expr::Point4;
use skewcurv::linalg4::{Mat4, Tensor4, Vec4};
use skewcurv::manifold::{associated_layout, associated_metric, check_compatibility, MetricAtPoint, SkewStructure};
use skewcurv::sampling;
use skewcurv::suite::{self, Bound, Check};
use skewcurv::{Error, Result as CoreResult};

use crate::input::Manifold;
use crate::report::{mat, nonzero_components, vec4, Report};

pub const HYPOTHESIS_TOL: f64 = 1e-6;
pub const CONCLUSION_TOL: f64 = 1e-9;
pub const STRUCTURE_TOL: f64 = 1e-12;
/// Curvature components below this are listed as zero.
pub const ZERO_COMPONENT: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Options {
    pub point: [f64; 4],
    pub tol: Option<f64>,
    pub x: Option<[f64; 4]>,
    pub samples: usize,
    pub seed: u64,
    pub strict: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { point: [0.0; 4], tol: None, x: None, samples: 100, seed: suite::DEFAULT_SEED, strict: false }
    }
}

impl Options {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

struct Geometry {
    metric: MetricAtPoint,
    s: SkewStructure,
    nabla: ConnectionCoefficients,
    r: Tensor4,
}

fn positivity_checks(rep: &mut Report, a: f64, b: f64) {
    rep.check(Check::above("A - sqrt(2) B > 0", a - SQRT_2 * b, 0.0));
    rep.check(Check { name: "B >= 0".into(), residual: b, tolerance: 0.0, bound: Bound::Above, pass: b >= 0.0 });
}

/// Metric values at the point; a positivity failure is recorded in the
/// report and yields `None`.
fn metric_or_fail(m: &Manifold, p: &Point4, rep: &mut Report) -> anyhow::Result<Option<MetricAtPoint>> {
    match m {
        Manifold::Lie { group, .. } => Ok(Some(group.metric())),
        Manifold::Chart(c) => {
            let a = c.a.evaluate(p).context("evaluating A")?;
            let b = c.b.evaluate(p).context("evaluating B")?;
            match MetricAtPoint::new(a, b) {
                Ok(metric) => Ok(Some(metric)),
                Err(Error::NotPositiveDefinite { a, b }) => {
                    positivity_checks(rep, a, b);
                    rep.put("A", a);
                    rep.put("B", b);
                    Ok(None)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn geometry(m: &Manifold, p: &Point4, rep: &mut Report) -> anyhow::Result<Option<Geometry>> {
    let Some(metric) = metric_or_fail(m, p, rep)? else {
        return Ok(None);
    };
    let g = match m {
        Manifold::Chart(c) => {
            let nabla = christoffel(c, p)?;
            rep.check(Check::below(
                "connection is metric",
                metric_compatibility_residual(c, &nabla, p)?,
                STRUCTURE_TOL,
            ));
            rep.check(Check::below("connection is torsion free", nabla.torsion_residual(), STRUCTURE_TOL));
            Geometry { metric, s: c.s, nabla, r: riemann_chart(c, p)? }
        }
        Manifold::Lie { group, .. } => {
            let nabla = koszul_nabla(group);
            rep.check(Check::below("connection is metric", lie_metric_compatibility_residual(&nabla), STRUCTURE_TOL));
            rep.check(Check::below("connection is torsion free", lie_torsion_residual(group, &nabla), STRUCTURE_TOL));
            let r = riemann_lie(group, &nabla);
            Geometry { metric, s: group.s, nabla, r }
        }
    };
    Ok(Some(g))
}

fn new_report(command: &'static str, m: Option<&Manifold>, opts: &Options) -> Report {
    let mut rep = Report::new(command, opts.point);
    rep.metadata.manifold = m.map(Manifold::label);
    rep
}

fn fail_report(mut rep: Report) -> Report {
    rep.pass = false;
    rep
}

fn s_deviation(s: &SkewStructure) -> f64 {
    let m = s.matrix();
    (m * m * m * m).max_abs_diff(&Mat4::identity().scale(-1.0))
}

pub fn validate(m: &Manifold, opts: &Options) -> anyhow::Result<Report> {
    let mut rep = new_report("validate", Some(m), opts);
    let p = Point4(opts.point);
    let s = m.structure();
    rep.check(Check::below("S^4 = -id", s_deviation(&s), STRUCTURE_TOL));
    let Some(metric) = metric_or_fail(m, &p, &mut rep)? else {
        return Ok(fail_report(rep));
    };
    positivity_checks(&mut rep, metric.a, metric.b);
    rep.check(Check::below("g(Sx, Sy) = g(x, y)", check_compatibility(&s, &metric.g), opts.tol(STRUCTURE_TOL)));
    let g_tilde = associated_metric(&s, &metric.g);
    match m {
        Manifold::Chart(_) => {
            rep.check(Check::below(
                "g~ = g(., S.) + g(S., .) matches layout",
                g_tilde.max_abs_diff(&associated_layout(metric.a, metric.b)),
                opts.tol(STRUCTURE_TOL),
            ));
        }
        Manifold::Lie { group, .. } => {
            rep.check(Check::below("Jacobi identity", group.jacobi_residual(), STRUCTURE_TOL));
        }
    }
    rep.put("A", metric.a);
    rep.put("B", metric.b);
    rep.put("g", mat(&metric.g));
    rep.put("g_tilde", mat(&g_tilde));
    rep.put("S_images", s.rows());
    Ok(rep)
}

fn put_ricci(rep: &mut Report, d: &RicciData) {
    rep.put("rho", mat(&d.rho));
    rep.put("tau", d.tau);
    rep.put("tau_star", d.tau_star);
    rep.put("alpha", d.alpha);
    rep.put("beta", d.beta);
}

fn tensor_checks(rep: &mut Report, r: &Tensor4, tol: f64) {
    rep.check(Check::below("curvature symmetries", r.curvature_symmetry_residual(), tol));
    rep.check(Check::below("first Bianchi identity", bianchi_first_residual(r), tol));
}

fn connection_table(nabla: &ConnectionCoefficients) -> serde_json::Map<String, Value> {
    let mut out = serde_json::Map::new();
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                let v = nabla.get(i, j, k);
                if v.abs() > ZERO_COMPONENT {
                    out.insert(format!("nabla_e{}_e{}.e{}", i + 1, j + 1, k + 1), Value::from(v));
                }
            }
        }
    }
    out
}

pub fn curvature(m: &Manifold, opts: &Options) -> anyhow::Result<Report> {
    let mut rep = new_report("curvature", Some(m), opts);
    let Some(geo) = geometry(m, &Point4(opts.point), &mut rep)? else {
        return Ok(fail_report(rep));
    };
    tensor_checks(&mut rep, &geo.r, opts.tol(CONCLUSION_TOL));
    rep.put("connection", connection_table(&geo.nabla));
    rep.put("R_nonzero", nonzero_components(&geo.r, ZERO_COMPONENT));
    put_ricci(&mut rep, &ricci_data(&geo.r, &geo.metric));
    Ok(rep)
}

pub fn classify(m: &Manifold, opts: &Options) -> anyhow::Result<Report> {
    let mut rep = new_report("classify", Some(m), opts);
    let Some(geo) = geometry(m, &Point4(opts.point), &mut rep)? else {
        return Ok(fail_report(rep));
    };
    let tol = opts.tol(CONCLUSION_TOL);
    tensor_checks(&mut rep, &geo.r, tol);
    let d = ricci_data(&geo.r, &geo.metric);
    let r_res = check_r_invariance(&geo.r, &geo.s);
    let r1_res = check_r1_invariance(&geo.r, &geo.s);
    let l2_res = check_l2_components(&geo.r);
    rep.put(
        "classes",
        json!({
            "tolerance": tol,
            "satisfies_R": r_res < tol,
            "R_residual": r_res,
            "satisfies_R1": r1_res < tol,
            "R1_residual": r1_res,
            "component_relations": l2_res < tol,
            "component_relations_residual": l2_res,
            "is_einstein": einstein_check(&d, tol),
            "is_almost_einstein": d.decomposition_residual < tol,
            "almost_einstein_residual": d.decomposition_residual,
        }),
    );
    if l2_res < tol {
        rep.put("R_params", extract_l2_params(&geo.r).0);
    }
    put_ricci(&mut rep, &d);
    Ok(rep)
}

/// Largest residual over `u`s, or the first failure.
fn over_samples(us: &[Vec4], f: impl Fn(&Vec4) -> CoreResult<f64>) -> CoreResult<f64> {
    us.iter().try_fold(0.0f64, |m, u| Ok(m.max(f(u)?)))
}

pub fn sectional(m: &Manifold, opts: &Options) -> anyhow::Result<Report> {
    let mut rep = new_report("sectional", Some(m), opts);
    rep.metadata.seed = Some(opts.seed);
    let Some(geo) = geometry(m, &Point4(opts.point), &mut rep)? else {
        return Ok(fail_report(rep));
    };
    let tol = opts.tol(CONCLUSION_TOL);
    let (g, s, r) = (geo.metric.g, geo.s, geo.r);
    let x = Vec4(opts.x.unwrap_or([1.0, 0.0, 0.0, 0.0]));
    let basic = sectional_report(&r, &g, &s, &x).context("invalid --x")?;
    rep.put("x", vec4(&x));
    rep.put("phi", basic.phi);
    rep.put("k_x_Sx", basic.k_x_sx);
    rep.put("k_x_S2x", basic.k_x_s2x);
    let planes: serde_json::Map<String, Value> = basic
        .planes
        .iter()
        .map(|(a, b, k)| (format!("k(S{a}x,S{b}x)"), Value::from(*k)))
        .collect();
    rep.put("planes", planes);

    let mut rng = sampling::rng(opts.seed);
    let us: Vec<Vec4> = (0..opts.samples).map(|_| sampling::random_unit(&mut rng, &g)).collect();
    rep.put("samples", us.len());

    let results: Vec<(&str, CoreResult<f64>)> = vec![
        ("basic plane relations", verify_basic_plane_relations(&r, &g, &s, &x).map(|v| max_residual(&v))),
        ("orthonormal sum identity", over_samples(&us, |u| verify_orthonormal_sum_theorem(&r, &g, &s, &x, u))),
        ("three-angle identity", over_samples(&us, |u| verify_three_angle_theorem(&r, &g, &s, &x, u))),
        ("(R1) plane relations", verify_r1_plane_relations(&r, &g, &s, &x).map(|v| max_residual(&v))),
        (
            "(R1) interpolation identity",
            over_samples(&us, |u| verify_r1_interpolation(&r, &g, &s, &x, u).map(|v| max_residual(&v))),
        ),
    ];
    for (name, res) in results {
        match res {
            Ok(v) => rep.check(Check::below(name, v, tol)),
            Err(e) => {
                log::info!("{name} skipped: {e}");
                rep.skip(name, e);
            }
        }
    }
    if opts.strict && !rep.skipped.is_empty() {
        rep.pass = false;
    }
    rep.put("hypothesis_tolerance", HYPOTHESIS_TOL);
    Ok(rep)
}

pub fn paper_suite(opts: &Options) -> Report {
    let mut rep = new_report("paper-suite", None, opts);
    rep.metadata.seed = Some(opts.seed);
    let mut criteria = Vec::new();
    let mut numbers = serde_json::Map::new();
    for c in suite::paper_suite(opts.seed) {
        eprintln!("{}", suite::summary_line(&c));
        for check in &c.checks {
            let mut check = check.clone();
            check.name = format!("criterion {}: {}", c.id, check.name);
            rep.check(check);
        }
        for q in &c.quantities {
            numbers.insert(q.name.clone(), json!({ "expected": q.expected, "computed": q.computed }));
        }
        criteria.push(json!({
            "id": c.id,
            "title": c.title,
            "pass": c.pass(),
            "seconds": c.elapsed.as_secs_f64(),
        }));
    }
    rep.put("criteria", criteria);
    rep.put("example_values", numbers);
    rep
}
