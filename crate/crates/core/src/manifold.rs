//! The structure `(g, S)`: skew-circulant `S` with `S^4 = -id`, the metric
//! built from the functions `A`, `B`, its associated metric, angles and
//! S-bases.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use log::warn;

use crate::error::{Error, Result};
use crate::linalg4::{skew_circulant_from_row, Mat4, Vec4, DIM};

/// A type-(1,1) tensor with integer components.
///
/// `rows[i]` is the image of the basis vector `e_{i+1}`, so that
/// `(Sx)^j = sum_i rows[i][j] x^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SkewStructure {
    rows: [[i8; DIM]; DIM],
}

type IntMat = [[i32; DIM]; DIM];

fn int_mul(a: &IntMat, b: &IntMat) -> IntMat {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..DIM).map(|k| a[i][k] * b[k][j]).sum()))
}

impl SkewStructure {
    /// Builds a structure from explicit basis images, validating
    /// `S^4 = -id` and orthogonality for the identity metric.
    pub fn from_images(rows: [[i8; DIM]; DIM]) -> Result<Self> {
        if rows.iter().flatten().any(|v| v.abs() > 1) {
            return Err(Error::ParameterOutOfRange("S entries must lie in {-1, 0, 1}".into()));
        }
        let s = SkewStructure { rows };
        if !s.fourth_power_is_minus_identity() {
            return Err(Error::ParameterOutOfRange("S^4 != -id".into()));
        }
        let m = s.int_matrix();
        let mut mt = m;
        for (i, row) in mt.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = m[j][i];
            }
        }
        let id: IntMat = std::array::from_fn(|i| std::array::from_fn(|j| i32::from(i == j)));
        if int_mul(&mt, &m) != id {
            return Err(Error::ParameterOutOfRange("S is not orthogonal".into()));
        }
        Ok(s)
    }

    /// Chart structure with components `S_i^j`: `Se1 = e2, Se2 = e3,
    /// Se3 = e4, Se4 = -e1`.
    pub fn chart() -> Self {
        SkewStructure {
            rows: [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0]],
        }
    }

    /// Structure used on the Lie algebra example: `Se1 = -e4, Se2 = e1,
    /// Se3 = e2, Se4 = e3`.
    pub fn lie_example() -> Self {
        SkewStructure {
            rows: [[0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]],
        }
    }

    pub fn rows(&self) -> [[i8; DIM]; DIM] {
        self.rows
    }

    fn int_matrix(&self) -> IntMat {
        self.rows.map(|r| r.map(i32::from))
    }

    /// Components as a real matrix, row `i` = image of `e_{i+1}`.
    pub fn matrix(&self) -> Mat4 {
        Mat4::from_fn(|i, j| f64::from(self.rows[i][j]))
    }

    /// Exact integer test of `S^4 = -id`.
    pub fn fourth_power_is_minus_identity(&self) -> bool {
        let m = self.int_matrix();
        let m2 = int_mul(&m, &m);
        let m4 = int_mul(&m2, &m2);
        let minus_id: IntMat = std::array::from_fn(|i| std::array::from_fn(|j| -i32::from(i == j)));
        m4 == minus_id
    }

    pub fn apply(&self, x: &Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|j| {
            (0..DIM).map(|i| f64::from(self.rows[i][j]) * x.0[i]).sum()
        }))
    }

    /// `S^n x`.
    pub fn apply_n(&self, x: &Vec4, n: usize) -> Vec4 {
        (0..n).fold(*x, |v, _| self.apply(&v))
    }
}

/// The structure of the coordinate setting.
pub fn build_structure() -> SkewStructure {
    SkewStructure::chart()
}

/// Metric data at one point, from the values of `A` and `B` there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricAtPoint {
    pub a: f64,
    pub b: f64,
    pub g: Mat4,
    pub g_tilde: Mat4,
    pub g_inv: Mat4,
    pub g_tilde_inv: Mat4,
}

impl MetricAtPoint {
    /// Requires `A > sqrt(2) B > 0`; `B = 0` (so `g = A id`) is accepted
    /// with a warning.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::NonFinite("metric functions A, B"));
        }
        if b < 0.0 || a <= SQRT_2 * b || a <= 0.0 {
            return Err(Error::NotPositiveDefinite { a, b });
        }
        if b == 0.0 {
            warn!("B = 0 at this point: g = A*id, outside the strict condition B > 0");
        }
        Ok(Self::build(a, b))
    }

    /// Orthonormal case `g = id` (A = 1, B = 0), no warning.
    pub fn identity() -> Self {
        Self::build(1.0, 0.0)
    }

    fn build(a: f64, b: f64) -> Self {
        let d = a * a - 2.0 * b * b;
        MetricAtPoint {
            a,
            b,
            g: metric_layout(a, b),
            g_tilde: associated_layout(a, b),
            g_inv: skew_circulant_from_row([a, -b, 0.0, b]).scale(1.0 / d),
            g_tilde_inv: skew_circulant_from_row([-2.0 * b, a, 0.0, -a]).scale(1.0 / (2.0 * d)),
        }
    }

    /// `A^2 - 2B^2`.
    pub fn discriminant(&self) -> f64 {
        self.a * self.a - 2.0 * self.b * self.b
    }
}

/// `(g_ij)` for the given `A`, `B`.
pub fn metric_layout(a: f64, b: f64) -> Mat4 {
    skew_circulant_from_row([a, b, 0.0, -b])
}

/// `(g~_ij)` for the given `A`, `B`.
pub fn associated_layout(a: f64, b: f64) -> Mat4 {
    skew_circulant_from_row([2.0 * b, a, 0.0, -a])
}

pub fn metric_at(a: f64, b: f64) -> Result<MetricAtPoint> {
    MetricAtPoint::new(a, b)
}

/// `g~(x, y) = g(x, Sy) + g(Sx, y)` on basis pairs.
pub fn associated_metric(s: &SkewStructure, g: &Mat4) -> Mat4 {
    let e = Vec4::basis;
    Mat4::from_fn(|i, j| g.bilinear(&e(i), &s.apply(&e(j))) + g.bilinear(&s.apply(&e(i)), &e(j)))
}

/// Largest `|g(Se_i, Se_j) - g(e_i, e_j)|`.
pub fn check_compatibility(s: &SkewStructure, g: &Mat4) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..DIM {
        for j in 0..DIM {
            let si = s.apply(&Vec4::basis(i));
            let sj = s.apply(&Vec4::basis(j));
            r = r.max((g.bilinear(&si, &sj) - g.0[i][j]).abs());
        }
    }
    r
}

/// Angle between `x` and `y` measured with `g`. Returns 0 for parallel
/// vectors.
pub fn angle(x: &Vec4, y: &Vec4, g: &Mat4) -> Result<f64> {
    let xx = g.bilinear(x, x);
    let yy = g.bilinear(y, y);
    if !(xx > 0.0 && yy > 0.0) {
        return Err(Error::ZeroVector);
    }
    let c = (g.bilinear(x, y) / (xx * yy).sqrt()).clamp(-1.0, 1.0);
    Ok(c.acos())
}

/// The quadruple `(S^3 x, S^2 x, Sx, x)` with its Gram matrix and
/// `phi = angle(x, Sx)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SBasis {
    pub vectors: [Vec4; 4],
    pub gram: Mat4,
    pub phi: f64,
}

impl SBasis {
    pub fn x(&self) -> Vec4 {
        self.vectors[3]
    }

    /// `S^n x` for `n` in `0..4`.
    pub fn s_pow(&self, n: usize) -> Vec4 {
        self.vectors[3 - n]
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        self.gram.max_abs_diff(&Mat4::identity())
    }

    /// Largest deviation among the six angle relations between
    /// `x, Sx, S^2x, S^3x`.
    pub fn angle_relation_residual(&self, g: &Mat4) -> Result<f64> {
        let v = |n: usize| self.s_pow(n);
        let phi = self.phi;
        let checks = [
            (angle(&v(1), &v(2), g)?, phi),
            (angle(&v(2), &v(3), g)?, phi),
            (angle(&v(0), &v(3), g)?, PI - phi),
            (angle(&v(0), &v(2), g)?, FRAC_PI_2),
            (angle(&v(1), &v(3), g)?, FRAC_PI_2),
        ];
        Ok(checks.iter().fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// `pi/4 < phi < 3 pi/4`.
    pub fn phi_in_open_range(&self) -> bool {
        self.phi > FRAC_PI_4 && self.phi < 3.0 * FRAC_PI_4
    }
}

pub fn s_basis(x: &Vec4, s: &SkewStructure, g: &Mat4) -> Result<SBasis> {
    if x.max_abs() == 0.0 || !(g.bilinear(x, x) > 0.0) {
        return Err(Error::ZeroVector);
    }
    let vectors = [s.apply_n(x, 3), s.apply_n(x, 2), s.apply(x), *x];
    let gram = Mat4::from_fn(|i, j| g.bilinear(&vectors[i], &vectors[j]));
    let scale = (0..DIM).fold(0.0f64, |m, i| m.max(gram.0[i][i]));
    let det = gram.det();
    if det <= 1e-12 * scale.powi(4) {
        return Err(Error::DegenerateBasis(det));
    }
    let phi = angle(x, &vectors[2], g)?;
    Ok(SBasis { vectors, gram, phi })
}

/// Unit vector `u` with `angle(u, Su) = phi`, built in the plane of `x` and
/// `Sx` of an orthonormal S-basis.
///
/// For `|cos phi| <= 1/2` this is `u = cos t x + sin t Sx` with
/// `sin 2t = 2 cos phi`. Beyond that (up to the bound `sqrt(2)/2`) a
/// bisection along a path towards the invariant plane of `S` is used.
pub fn unit_vector_with_angle(
    basis: &SBasis,
    s: &SkewStructure,
    g: &Mat4,
    phi: f64,
) -> Result<Vec4> {
    let defect = basis.orthonormality_defect();
    if defect > 1e-10 {
        return Err(Error::NotOrthonormalBasis(defect));
    }
    let c = phi.cos();
    if !c.is_finite() || c.abs() >= SQRT_2 / 2.0 {
        return Err(Error::AngleOutOfRange(c));
    }
    let x = basis.x();
    let sx = basis.s_pow(1);
    let in_plane = |t: f64| t.cos() * x + t.sin() * sx;
    if c.abs() <= 0.5 {
        // asin is ill-conditioned at 1; snap the edge of the family to t = +-pi/4
        let rem = 1.0 - 4.0 * c * c;
        let t = if rem < 64.0 * f64::EPSILON {
            c.signum() * FRAC_PI_4
        } else {
            0.5 * (2.0 * c).asin()
        };
        return Ok(in_plane(t));
    }

    // cos(angle(w, Sw)) = +-sqrt(2)/2 on w = x +- (Sx - S^3x)/sqrt(2).
    let sign = c.signum();
    let s3x = basis.s_pow(3);
    let start = in_plane(sign * FRAC_PI_4);
    let end = x + (sign / SQRT_2) * (sx - s3x);
    let cos_of = |v: &Vec4| g.bilinear(v, &s.apply(v)) / g.bilinear(v, v);
    let point = |t: f64| (1.0 - t) * start + t * end;
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (cos_of(&point(mid)) - c) * sign < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-17 {
            break;
        }
    }
    let u = point(0.5 * (lo + hi));
    Ok((1.0 / g.bilinear(&u, &u).sqrt()) * u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn chart_structure_action() {
        let s = build_structure();
        assert_eq!(s.apply(&Vec4::basis(0)), Vec4::basis(1));
        assert_eq!(s.apply(&Vec4::new(1.0, 1.0, 1.0, 1.0)), Vec4::new(-1.0, 1.0, 1.0, 1.0));
        for i in 0..4 {
            assert_eq!(s.apply_n(&Vec4::basis(i), 4), -Vec4::basis(i));
        }
        assert!(s.fourth_power_is_minus_identity());
    }

    #[test]
    fn lie_structure_action() {
        let s = SkewStructure::lie_example();
        assert_eq!(s.apply(&Vec4::basis(0)), -Vec4::basis(3));
        assert_eq!(s.apply(&Vec4::basis(1)), Vec4::basis(0));
        assert!(s.fourth_power_is_minus_identity());
        // the two conventions are mutually transposed
        assert_eq!(s.matrix(), build_structure().matrix().transpose());
    }

    #[test]
    fn from_images_validates() {
        assert!(SkewStructure::from_images(SkewStructure::chart().rows()).is_ok());
        let id = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
        assert!(SkewStructure::from_images(id).is_err());
        let bad = [[0, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0]];
        assert!(SkewStructure::from_images(bad).is_err());
    }

    #[test]
    fn metric_closed_forms() {
        let m = metric_at(2.0, 1.0).unwrap();
        assert_eq!(m.g_tilde_inv.0[0][0], -0.5);
        assert_eq!(m.g_tilde_inv.0[0][1], 0.5);
        assert!((m.g * m.g_inv).max_abs_diff(&Mat4::identity()) < 1e-12);
        assert!((m.g_tilde * m.g_tilde_inv).max_abs_diff(&Mat4::identity()) < 1e-12);

        let flat = metric_at(1.0, 0.0).unwrap();
        assert_eq!(flat.g, Mat4::identity());
        assert_eq!(flat.g_tilde, skew_circulant_from_row([0.0, 1.0, 0.0, -1.0]));
    }

    #[test]
    fn positivity_condition() {
        assert!(matches!(metric_at(1.0, 1.0), Err(Error::NotPositiveDefinite { .. })));
        assert!(matches!(metric_at(SQRT_2, 1.0), Err(Error::NotPositiveDefinite { .. })));
        assert!(matches!(metric_at(2.0, -0.1), Err(Error::NotPositiveDefinite { .. })));
        assert!(matches!(metric_at(0.0, 0.0), Err(Error::NotPositiveDefinite { .. })));
        assert!(metric_at(1.5, 1.0).is_ok());
    }

    #[test]
    fn associated_metric_from_definition() {
        let m = metric_at(2.3, 0.7).unwrap();
        let gt = associated_metric(&build_structure(), &m.g);
        assert!(gt.max_abs_diff(&m.g_tilde) < 1e-13);
    }

    #[test]
    fn compatibility_residuals() {
        let s = build_structure();
        assert!(check_compatibility(&s, &metric_at(2.0, 1.0).unwrap().g) < 1e-12);
        assert_eq!(check_compatibility(&s, &Mat4::identity()), 0.0);
        let r = check_compatibility(&s, &Mat4::diag([1.0, 2.0, 3.0, 4.0]));
        assert!(r >= 1.0);
    }

    #[test]
    fn angles() {
        let s = build_structure();
        let g = metric_at(2.0, 1.0).unwrap().g;
        let e1 = Vec4::basis(0);
        let phi = angle(&e1, &s.apply(&e1), &g).unwrap();
        assert!((phi - FRAC_PI_3).abs() < 1e-12);
        let x = Vec4::new(0.3, -1.2, 0.5, 2.0);
        let right = angle(&x, &s.apply_n(&x, 2), &g).unwrap();
        assert!((right - FRAC_PI_2).abs() < 1e-12);
        assert_eq!(angle(&x, &x, &g).unwrap(), 0.0);
        assert!(matches!(angle(&Vec4::ZERO, &x, &g), Err(Error::ZeroVector)));
    }

    #[test]
    fn s_basis_examples() {
        let s = build_structure();
        let b = s_basis(&Vec4::basis(0), &s, &Mat4::identity()).unwrap();
        assert!((b.phi - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(b.gram, Mat4::identity());

        let g = metric_at(2.0, 1.0).unwrap().g;
        let b = s_basis(&Vec4::basis(0), &s, &g).unwrap();
        assert!((b.phi - FRAC_PI_3).abs() < 1e-12);
        for i in 0..4 {
            assert_eq!(b.gram.0[i][i], 2.0);
        }
        assert!(b.angle_relation_residual(&g).unwrap() < 1e-10);
        assert!(b.phi_in_open_range());

        assert!(matches!(s_basis(&Vec4::ZERO, &s, &g), Err(Error::ZeroVector)));
    }

    #[test]
    fn unit_vectors_with_prescribed_angle() {
        let s = build_structure();
        let g = Mat4::identity();
        let b = s_basis(&Vec4::basis(0), &s, &g).unwrap();
        let x = b.x();

        let u = unit_vector_with_angle(&b, &s, &g, FRAC_PI_2).unwrap();
        assert!(u.max_abs_diff_to(&x) < 1e-15);

        let v = unit_vector_with_angle(&b, &s, &g, FRAC_PI_3).unwrap();
        let expected = (1.0 / SQRT_2) * (x + b.s_pow(1));
        assert!(v.max_abs_diff_to(&expected) < 1e-12);
        assert!((g.bilinear(&v, &s.apply(&v)) - 0.5).abs() < 1e-12);

        let w = unit_vector_with_angle(&b, &s, &g, 2.0 * FRAC_PI_3).unwrap();
        assert!((g.bilinear(&w, &s.apply(&w)) + 0.5).abs() < 1e-12);

        for phi in [0.8, 0.9, 2.3, 2.35] {
            let u = unit_vector_with_angle(&b, &s, &g, phi).unwrap();
            assert!((g.bilinear(&u, &u) - 1.0).abs() < 1e-12);
            assert!((angle(&u, &s.apply(&u), &g).unwrap() - phi).abs() < 1e-10, "phi {phi}");
        }

        assert!(matches!(
            unit_vector_with_angle(&b, &s, &g, FRAC_PI_4),
            Err(Error::AngleOutOfRange(_))
        ));
        let g2 = metric_at(2.0, 1.0).unwrap().g;
        let b2 = s_basis(&Vec4::basis(0), &s, &g2).unwrap();
        assert!(matches!(
            unit_vector_with_angle(&b2, &s, &g2, FRAC_PI_3),
            Err(Error::NotOrthonormalBasis(_))
        ));
    }

    trait Diff {
        fn max_abs_diff_to(&self, o: &Vec4) -> f64;
    }
    impl Diff for Vec4 {
        fn max_abs_diff_to(&self, o: &Vec4) -> f64 {
            (*self - *o).max_abs()
        }
    }
}
