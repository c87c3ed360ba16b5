//! The full verification suite: the worked Lie-group example, the class
//! equivalences, Ricci identities, sectional-curvature identities, the
//! chart engine and property checks on the building blocks.

use std::time::{Duration, Instant};

use rand::Rng;

use crate::analysis::{
    check_l2_components, check_r1_invariance, check_r_invariance, einstein_check, max_residual,
    ricci_closed_forms, ricci_data, s_symmetrize, scalars_closed_forms, synth_l2,
    system_rho_residual, verify_basic_plane_relations, verify_orthonormal_sum_theorem,
    verify_r1_interpolation, verify_r1_plane_relations, verify_ricci_directions,
    verify_three_angle_theorem,
};
use crate::connection::{
    bianchi_first_residual, christoffel, g45_algebra, koszul_nabla, metric_compatibility_residual,
    riemann_chart, riemann_lie, ChartManifold, LieGroupManifold,
};
use crate::error::{Error, Result};
use crate::expr::{Point4, ScalarField};
use crate::linalg4::{invert4, Mat4, Tensor4, Vec4};
use crate::manifold::{associated_layout, associated_metric, s_basis, MetricAtPoint, SkewStructure};
use crate::sampling;

pub const DEFAULT_SEED: u64 = 20240607;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    /// pass iff `residual < tolerance`
    Below,
    /// pass iff `residual > tolerance`
    Above,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub pass: bool,
}

impl Check {
    pub fn below(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        let pass = residual < tolerance;
        Check { name: name.into(), residual, tolerance, bound: Bound::Below, pass }
    }

    pub fn above(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        let pass = residual > tolerance;
        Check { name: name.into(), residual, tolerance, bound: Bound::Above, pass }
    }

    /// A check that could not be evaluated.
    pub fn error(name: impl Into<String>, err: &Error) -> Self {
        Check::below(format!("{} ({err})", name.into()), f64::NAN, 0.0)
    }
}

/// A number from the worked example with its computed value.
#[derive(Clone, Debug, PartialEq)]
pub struct Quantity {
    pub name: String,
    pub expected: f64,
    pub computed: f64,
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub quantities: Vec<Quantity>,
    pub elapsed: Duration,
}

impl CriterionReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn timed(id: u8, title: &'static str, limit: Option<f64>, body: impl FnOnce(&mut Self)) -> Self {
        let start = Instant::now();
        let mut rep = CriterionReport { id, title, checks: Vec::new(), quantities: Vec::new(), elapsed: Duration::ZERO };
        body(&mut rep);
        rep.elapsed = start.elapsed();
        if let Some(limit) = limit {
            rep.checks.push(Check::below("runtime seconds", rep.elapsed.as_secs_f64(), limit));
        }
        rep
    }

    fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    fn quantity(&mut self, name: &str, expected: f64, computed: f64, tol: f64) {
        self.quantities.push(Quantity { name: name.into(), expected, computed });
        self.push(Check::below(name, (computed - expected).abs(), tol));
    }
}

/// Running maximum of residuals; the first error, if any, fails the check.
struct MaxOf {
    value: f64,
    error: Option<Error>,
}

impl MaxOf {
    fn new() -> Self {
        MaxOf { value: 0.0, error: None }
    }

    fn add(&mut self, r: Result<f64>) {
        match r {
            Ok(v) if v.is_nan() => self.value = f64::NAN,
            Ok(v) => self.value = self.value.max(v),
            Err(e) => {
                if self.error.is_none() {
                    self.error = Some(e);
                }
            }
        }
    }

    fn check(self, name: &str, tol: f64) -> Check {
        match self.error {
            Some(e) => Check::error(name, &e),
            None => Check::below(name, self.value, tol),
        }
    }
}

/// The Lie group `G_{4,5}(1,1)` with its curvature.
pub fn g45_example() -> Result<(LieGroupManifold, Tensor4)> {
    let m = g45_algebra(1.0, 1.0)?;
    let r = riemann_lie(&m, &koszul_nabla(&m));
    Ok((m, r))
}

/// The curvature with `R_ijij = 1` for all six coordinate planes.
pub fn constant_curvature_pattern() -> Tensor4 {
    let mut t = Tensor4::zero();
    for (i, j) in [(0, 1), (0, 3), (1, 2), (2, 3), (0, 2), (1, 3)] {
        t.set_curvature(i, j, i, j, 1.0);
    }
    t
}

/// Expected connection of `g_{4,5}(a, b)`: `(i, j, k, value)` with
/// `nabla_{e_i} e_j = value e_k`, zero-based.
pub fn g45_connection_table(a: f64, b: f64) -> [(usize, usize, usize, f64); 6] {
    [
        (0, 0, 3, -1.0),
        (0, 3, 0, 1.0),
        (1, 1, 3, -a),
        (1, 3, 1, a),
        (2, 3, 2, b),
        (2, 2, 3, -b),
    ]
}

pub fn criterion_1() -> CriterionReport {
    CriterionReport::timed(1, "Lie group g45(1,1) example", Some(1.0), |rep| {
        let (m, r) = match g45_example() {
            Ok(v) => v,
            Err(e) => return rep.push(Check::error("build g45(1,1)", &e)),
        };
        let nabla = koszul_nabla(&m);
        let mut expected = [[[0.0; 4]; 4]; 4];
        for (i, j, k, v) in g45_connection_table(1.0, 1.0) {
            expected[i][j][k] = v;
        }
        let mut err: f64 = 0.0;
        for (i, ei) in expected.iter().enumerate() {
            for (j, eij) in ei.iter().enumerate() {
                for (k, v) in eij.iter().enumerate() {
                    err = err.max((nabla.get(i, j, k) - v).abs());
                }
            }
        }
        rep.push(Check::below("connection table", err, 1e-13));
        rep.push(Check::below("curvature components", r.max_abs_diff(&constant_curvature_pattern()), 1e-12));
        rep.push(Check::below("first Bianchi identity", bianchi_first_residual(&r), 1e-12));

        let d = ricci_data(&r, &m.metric());
        rep.push(Check::below("rho = -3 id", d.rho.max_abs_diff(&Mat4::diag([-3.0; 4])), 1e-12));
        rep.quantity("tau", -12.0, d.tau, 1e-12);
        rep.quantity("tau*", 0.0, d.tau_star, 1e-12);
        rep.quantity("alpha = tau/4", -3.0, d.alpha, 1e-12);
        rep.push(Check::below(
            "Einstein: max(|tau*|, decomposition residual)",
            d.tau_star.abs().max(d.decomposition_residual),
            1e-9,
        ));
        debug_assert_eq!(einstein_check(&d, 1e-9), rep.checks.last().is_some_and(|c| c.pass));
        rep.push(Check::below("property (R)", check_r_invariance(&r, &m.s), 1e-12));
        rep.push(Check::above("property (R1) violation", check_r1_invariance(&r, &m.s), 0.1));
    })
}

pub fn criterion_2(seed: u64) -> CriterionReport {
    CriterionReport::timed(2, "Component form of property (R)", Some(10.0), |rep| {
        let mut rng = sampling::rng(seed ^ 0x02);
        let s = SkewStructure::chart();
        let mut fwd: f64 = 0.0;
        for _ in 0..500 {
            fwd = fwd.max(check_r_invariance(&synth_l2(&sampling::random_l2_params(&mut rng)), &s));
        }
        rep.push(Check::below("synthetic tensors have (R), 500 samples", fwd, 1e-12));
        let mut rev: f64 = 0.0;
        for _ in 0..500 {
            let t = s_symmetrize(&sampling::random_curvature(&mut rng), &s);
            rev = rev.max(check_l2_components(&t));
        }
        rep.push(Check::below("symmetrized tensors satisfy component relations, 500 samples", rev, 1e-12));
    })
}

/// Residuals are divided by the size of the compared terms: near
/// `A^2 = 2B^2` the Ricci data grows like `1/(A^2 - 2B^2)`.
pub fn criterion_3(seed: u64) -> CriterionReport {
    CriterionReport::timed(3, "Ricci tensor structure and almost Einstein decomposition", None, |rep| {
        let mut rng = sampling::rng(seed ^ 0x03);
        let mut closed = MaxOf::new();
        let mut system: f64 = 0.0;
        let mut decomp: f64 = 0.0;
        let mut scalars = MaxOf::new();
        for _ in 0..200 {
            let p = sampling::random_l2_params(&mut rng);
            let (a, b) = sampling::random_admissible(&mut rng);
            let metric = match MetricAtPoint::new(a, b) {
                Ok(m) => m,
                Err(e) => {
                    closed.add(Err(e));
                    continue;
                }
            };
            let d = ricci_data(&synth_l2(&p), &metric);
            let rho_scale = d.rho.max_abs().max(1.0);
            let terms = (d.alpha.abs() * metric.g.max_abs() + d.beta.abs() * metric.g_tilde.max_abs()).max(1.0);
            let scalar_scale = d.tau.abs().max(d.tau_star.abs()).max(1.0);
            closed.add(ricci_closed_forms(&p, a, b).map(|rho| rho.max_abs_diff(&d.rho) / rho_scale));
            system = system.max(system_rho_residual(&d.rho) / rho_scale);
            decomp = decomp.max(d.decomposition_residual / terms);
            scalars.add(
                scalars_closed_forms(&d.rho, a, b)
                    .map(|(t, ts)| (t - d.tau).abs().max((ts - d.tau_star).abs()) / scalar_scale),
            );
        }
        rep.push(closed.check("contracted Ricci equals closed forms (relative)", 1e-10));
        rep.push(Check::below("Ricci component relations (relative)", system, 1e-10));
        rep.push(Check::below("decomposition rho = tau/4 g + tau*/4 g~ (relative to terms)", decomp, 1e-10));
        rep.push(scalars.check("tau, tau* closed forms equal contraction (relative)", 1e-10));
    })
}

/// Random `x` whose S-basis is non-degenerate.
fn random_basis_vector(rng: &mut impl Rng, s: &SkewStructure, g: &Mat4) -> Vec4 {
    loop {
        let x = sampling::random_direction(rng);
        if s_basis(&x, s, g).is_ok() {
            return x;
        }
    }
}

pub fn criterion_4(seed: u64) -> CriterionReport {
    CriterionReport::timed(4, "Ricci curvature along S-basis directions", None, |rep| {
        let mut rng = sampling::rng(seed ^ 0x04);
        match g45_example() {
            Ok((m, r)) => {
                let metric = m.metric();
                let d = ricci_data(&r, &metric);
                let mut res = MaxOf::new();
                let mut common = MaxOf::new();
                for _ in 0..20 {
                    let x = random_basis_vector(&mut rng, &m.s, &metric.g);
                    match verify_ricci_directions(&d, &metric.g, &m.s, &x) {
                        Ok((vals, r)) => {
                            res.add(Ok(r));
                            common.add(Ok(vals.iter().fold(0.0, |a, v| a.max((v + 3.0).abs()))));
                        }
                        Err(e) => res.add(Err(e)),
                    }
                }
                rep.push(res.check("g45: r(S^m x) = tau/4 + tau*/2 cos phi", 1e-9));
                rep.push(common.check("g45: r(S^m x) = -3", 1e-9));
            }
            Err(e) => rep.push(Check::error("build g45(1,1)", &e)),
        }

        let s = SkewStructure::chart();
        let mut res = MaxOf::new();
        for _ in 0..100 {
            let p = sampling::random_l2_params(&mut rng);
            let (a, b) = sampling::random_admissible(&mut rng);
            res.add(MetricAtPoint::new(a, b).and_then(|metric| {
                let d = ricci_data(&synth_l2(&p), &metric);
                let x = random_basis_vector(&mut rng, &s, &metric.g);
                let scale = (d.tau.abs() / 4.0 + d.tau_star.abs() / 2.0).max(1.0);
                verify_ricci_directions(&d, &metric.g, &s, &x).map(|(_, r)| r / scale)
            }));
        }
        rep.push(res.check("synthetic, 100 instances: r(S^m x) = tau/4 + tau*/2 cos phi (relative)", 1e-9));
    })
}

#[derive(Default)]
struct TheoremMax {
    basic: Option<MaxOf>,
    sum: Option<MaxOf>,
    three: Option<MaxOf>,
}

impl TheoremMax {
    fn run(&mut self, r: &Tensor4, g: &Mat4, s: &SkewStructure, x: &Vec4, us: &[Vec4]) {
        let basic = self.basic.get_or_insert_with(MaxOf::new);
        basic.add(verify_basic_plane_relations(r, g, s, x).map(|v| max_residual(&v)));
        let sum = self.sum.get_or_insert_with(MaxOf::new);
        for u in us {
            sum.add(verify_orthonormal_sum_theorem(r, g, s, x, u));
        }
        let three = self.three.get_or_insert_with(MaxOf::new);
        for u in us {
            three.add(verify_three_angle_theorem(r, g, s, x, u));
        }
    }

    fn report(self, rep: &mut CriterionReport, label: &str) {
        let take = |m: Option<MaxOf>| m.unwrap_or_else(MaxOf::new);
        rep.push(take(self.basic).check(&format!("{label}: basic plane relations"), 1e-9));
        rep.push(take(self.sum).check(&format!("{label}: orthonormal sum identity"), 1e-9));
        rep.push(take(self.three).check(&format!("{label}: three-angle identity"), 1e-9));
    }
}

fn random_units(rng: &mut impl Rng, g: &Mat4, n: usize) -> Vec<Vec4> {
    (0..n).map(|_| sampling::random_unit(rng, g)).collect()
}

pub fn criterion_5(seed: u64) -> CriterionReport {
    CriterionReport::timed(5, "Sectional curvature identities", Some(30.0), |rep| {
        let mut rng = sampling::rng(seed ^ 0x05);
        let x = Vec4::basis(0);
        let id = Mat4::identity();

        let mut g45 = TheoremMax::default();
        match g45_example() {
            Ok((m, r)) => {
                let us = random_units(&mut rng, &id, 100);
                g45.run(&r, &id, &m.s, &x, &us);
                g45.report(rep, "g45");
            }
            Err(e) => rep.push(Check::error("build g45(1,1)", &e)),
        }

        let s = SkewStructure::chart();
        let mut synth = TheoremMax::default();
        for _ in 0..200 {
            let r = synth_l2(&sampling::random_l2_params(&mut rng));
            let us = random_units(&mut rng, &id, 100);
            synth.run(&r, &id, &s, &x, &us);
        }
        synth.report(rep, "200 synthetic (R) instances");

        let mut planes = MaxOf::new();
        let mut interp = MaxOf::new();
        for _ in 0..200 {
            let r = synth_l2(&sampling::random_r1_params(&mut rng));
            planes.add(verify_r1_plane_relations(&r, &id, &s, &x).map(|v| max_residual(&v)));
            let (a, b) = sampling::random_admissible(&mut rng);
            let g = crate::manifold::metric_layout(a, b);
            let xr = random_basis_vector(&mut rng, &s, &g);
            planes.add(verify_r1_plane_relations(&r, &g, &s, &xr).map(|v| max_residual(&v)));
            for u in random_units(&mut rng, &id, 100) {
                interp.add(verify_r1_interpolation(&r, &id, &s, &x, &u).map(|v| max_residual(&v)));
            }
        }
        rep.push(planes.check("200 synthetic (R1) instances: plane relations", 1e-9));
        rep.push(interp.check("200 synthetic (R1) instances: interpolation identity", 1e-9));
    })
}

pub fn criterion_6(seed: u64) -> CriterionReport {
    CriterionReport::timed(6, "Chart curvature engine", None, |rep| {
        let mut rng = sampling::rng(seed ^ 0x06);
        let s = SkewStructure::chart();
        let points: Vec<Point4> = std::iter::once(Point4::ORIGIN)
            .chain((0..4).map(|_| Point4(sampling::random_point(&mut rng, 2.0))))
            .collect();

        let mut flat = MaxOf::new();
        match ChartManifold::parse("2", "0.5") {
            Ok(m) => points.iter().for_each(|p| flat.add(riemann_chart(&m, p).map(|r| r.max_abs()))),
            Err(e) => flat.add(Err(e)),
        }
        rep.push(flat.check("constant A=2, B=0.5: curvature vanishes", 1e-13));

        let mut sym = MaxOf::new();
        let mut bianchi = MaxOf::new();
        let mut assoc = MaxOf::new();
        let mut compat = MaxOf::new();
        let mut nonzero: f64 = 0.0;
        match ChartManifold::parse("2+0.1*sin(x1+x4)", "0.3") {
            Ok(m) => {
                for p in &points {
                    match riemann_chart(&m, p) {
                        Ok(r) => {
                            sym.add(Ok(r.curvature_symmetry_residual()));
                            bianchi.add(Ok(bianchi_first_residual(&r)));
                            nonzero = nonzero.max(r.max_abs());
                        }
                        Err(e) => sym.add(Err(e)),
                    }
                    assoc.add(m.metric_at(p).map(|mp| associated_metric(&s, &mp.g).max_abs_diff(&associated_layout(mp.a, mp.b))));
                    compat.add(christoffel(&m, p).and_then(|gam| metric_compatibility_residual(&m, &gam, p)));
                }
            }
            Err(e) => sym.add(Err(e)),
        }
        rep.push(sym.check("A=2+0.1 sin(x1+x4), B=0.3: curvature symmetries", 1e-9));
        rep.push(bianchi.check("A=2+0.1 sin(x1+x4), B=0.3: first Bianchi identity", 1e-9));
        rep.push(Check::above("A=2+0.1 sin(x1+x4), B=0.3: curvature is nonzero", nonzero, 1e-6));
        rep.push(assoc.check("g~(x,y) = g(x,Sy) + g(Sx,y) matches layout", 1e-12));
        rep.push(compat.check("connection is metric", 1e-12));
    })
}

pub fn criterion_7(seed: u64) -> CriterionReport {
    CriterionReport::timed(7, "Property suites", None, |rep| {
        let mut rng = sampling::rng(seed ^ 0x07);

        let mut inv = MaxOf::new();
        for _ in 0..200 {
            let (a, b) = sampling::random_admissible(&mut rng);
            inv.add(MetricAtPoint::new(a, b).and_then(|m| {
                let gi = invert4(&m.g)?;
                let gti = invert4(&m.g_tilde)?;
                let scale = m.g_inv.max_abs().max(m.g_tilde_inv.max_abs());
                let r = [
                    gi.max_abs_diff(&m.g_inv),
                    gti.max_abs_diff(&m.g_tilde_inv),
                    (m.g * m.g_inv).max_abs_diff(&Mat4::identity()),
                    (m.g_tilde * m.g_tilde_inv).max_abs_diff(&Mat4::identity()),
                ];
                Ok(r.into_iter().fold(0.0, f64::max) / scale.max(1.0))
            }));
        }
        rep.push(inv.check("closed-form inverses of g and g~, 200 samples", 1e-12));

        let mut s4 = 0.0;
        for s in [SkewStructure::chart(), SkewStructure::lie_example()] {
            let m = s.matrix();
            let exact = s.fourth_power_is_minus_identity() && m * m * m * m == Mat4::identity().scale(-1.0);
            if !exact {
                s4 += 1.0;
            }
        }
        rep.push(Check::below("S^4 = -id exactly (failing structures)", s4, 0.5));

        let s = SkewStructure::chart();
        let mut degenerate = 0.0;
        let mut angles = MaxOf::new();
        let mut range_fail = 0.0;
        for _ in 0..1000 {
            let (a, b) = sampling::random_admissible(&mut rng);
            let g = crate::manifold::metric_layout(a, b);
            let x = sampling::random_direction(&mut rng);
            match s_basis(&x, &s, &g) {
                Ok(basis) => {
                    angles.add(basis.angle_relation_residual(&g));
                    if !basis.phi_in_open_range() {
                        range_fail += 1.0;
                    }
                }
                Err(_) => degenerate += 1.0,
            }
        }
        rep.push(Check::below("S-basis independent, 1000 samples (degenerate count)", degenerate, 0.5));
        rep.push(angles.check("S-basis angle relations", 1e-10));
        rep.push(Check::below("pi/4 < phi < 3pi/4 (violations)", range_fail, 0.5));

        let mut mixed = MaxOf::new();
        let mut round = MaxOf::new();
        for _ in 0..100 {
            let src = sampling::random_expression(&mut rng, 4);
            let p = Point4(sampling::random_point(&mut rng, 1.5));
            let (i, j) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            mixed.add(mixed_partial_residual(&src, i, j, &p));
            round.add(round_trip_residual(&src, &p));
        }
        rep.push(mixed.check("mixed partial derivatives commute, 100 expressions", 1e-9));
        rep.push(round.check("parse/print round trip, 100 expressions", 1e-12));
    })
}

/// Relative difference of `d_i d_j f` and `d_j d_i f` at `p`.
pub fn mixed_partial_residual(src: &str, i: usize, j: usize, p: &Point4) -> Result<f64> {
    let f = ScalarField::parse(src)?;
    let a = f.derivative(i)?.derivative(j)?.evaluate(p)?;
    let b = f.derivative(j)?.derivative(i)?.evaluate(p)?;
    Ok((a - b).abs() / a.abs().max(1.0))
}

/// Printing then re-parsing gives the same text and the same values.
pub fn round_trip_residual(src: &str, p: &Point4) -> Result<f64> {
    let f = ScalarField::parse(src)?;
    let printed = f.to_string();
    let g = ScalarField::parse(&printed)?;
    if g.to_string() != printed {
        return Ok(f64::INFINITY);
    }
    let (a, b) = (f.evaluate(p)?, g.evaluate(p)?);
    Ok((a - b).abs() / a.abs().max(1.0))
}

/// All seven criteria in order.
pub fn paper_suite(seed: u64) -> Vec<CriterionReport> {
    vec![
        criterion_1(),
        criterion_2(seed),
        criterion_3(seed),
        criterion_4(seed),
        criterion_5(seed),
        criterion_6(seed),
        criterion_7(seed),
    ]
}

/// One line per criterion.
pub fn summary_line(rep: &CriterionReport) -> String {
    let worst = rep
        .checks
        .iter()
        .find(|c| !c.pass)
        .map(|c| format!("  first failure: {} = {:e} (tol {:e})", c.name, c.residual, c.tolerance))
        .unwrap_or_default();
    format!(
        "criterion {} [{}] {} ({} checks, {:.2}s){}",
        rep.id,
        if rep.pass() { "PASS" } else { "FAIL" },
        rep.title,
        rep.checks.len(),
        rep.elapsed.as_secs_f64(),
        worst
    )
}
