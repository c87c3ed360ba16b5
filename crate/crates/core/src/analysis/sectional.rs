//! Sectional curvatures of the basic 2-planes of an S-basis and the
//! identities relating them.
//!
//! Verifiers check their hypotheses first (tolerance [`HYPOTHESIS_TOL`])
//! and return residuals of the conclusions; callers compare those against
//! [`CONCLUSION_TOL`].

use std::f64::consts::FRAC_PI_3;

use crate::analysis::classes::{check_r1_invariance, check_r_invariance};
use crate::error::{Error, Result};
use crate::linalg4::{Mat4, Tensor4, Vec4};
use crate::manifold::{s_basis, unit_vector_with_angle, SBasis, SkewStructure};

pub const HYPOTHESIS_TOL: f64 = 1e-6;
pub const CONCLUSION_TOL: f64 = 1e-9;
const ORTHONORMAL_TOL: f64 = 1e-10;

/// A named scalar residual.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    pub name: &'static str,
    pub value: f64,
}

impl Residual {
    fn new(name: &'static str, value: f64) -> Self {
        Residual { name, value }
    }
}

pub fn max_residual(rs: &[Residual]) -> f64 {
    rs.iter().fold(0.0, |m, r| m.max(r.value))
}

/// `k(x, y) = R(x, y, x, y) / (g(x,x) g(y,y) - g(x,y)^2)`.
pub fn sectional(r: &Tensor4, g: &Mat4, x: &Vec4, y: &Vec4) -> Result<f64> {
    let gxx = g.bilinear(x, x);
    let gyy = g.bilinear(y, y);
    let gxy = g.bilinear(x, y);
    let den = gxx * gyy - gxy * gxy;
    let scale = gxx.abs() * gyy.abs();
    if !(den > 1e-12 * scale) || scale == 0.0 {
        return Err(Error::DegeneratePlane(den));
    }
    Ok(r.eval(x, y, x, y) / den)
}

/// Curvatures of the six planes spanned by pairs from `{x, Sx, S^2x, S^3x}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionalReport {
    pub k_x_sx: f64,
    pub k_x_s2x: f64,
    pub phi: f64,
    /// `(m, n, k(S^m x, S^n x))` for `m < n`.
    pub planes: Vec<(usize, usize, f64)>,
    pub residuals: Vec<Residual>,
}

pub fn sectional_report(r: &Tensor4, g: &Mat4, s: &SkewStructure, x: &Vec4) -> Result<SectionalReport> {
    let basis = s_basis(x, s, g)?;
    let mut planes = Vec::with_capacity(6);
    for m in 0..4 {
        for n in m + 1..4 {
            planes.push((m, n, sectional(r, g, &basis.s_pow(m), &basis.s_pow(n))?));
        }
    }
    Ok(SectionalReport {
        k_x_sx: planes[0].2,
        k_x_s2x: planes[1].2,
        phi: basis.phi,
        planes,
        residuals: Vec::new(),
    })
}

fn require(property: &'static str, residual: f64, r: &Tensor4) -> Result<()> {
    if residual > HYPOTHESIS_TOL * r.max_abs().max(1.0) || !residual.is_finite() {
        return Err(Error::PropertyNotSatisfied { property, residual });
    }
    Ok(())
}

fn orthonormal_basis(s: &SkewStructure, g: &Mat4, x: &Vec4) -> Result<SBasis> {
    let basis = s_basis(x, s, g)?;
    let defect = basis.orthonormality_defect();
    if defect > ORTHONORMAL_TOL {
        return Err(Error::NotOrthonormalBasis(defect));
    }
    Ok(basis)
}

fn require_unit(g: &Mat4, u: &Vec4) -> Result<()> {
    let dev = (g.bilinear(u, u) - 1.0).abs();
    if !(dev <= ORTHONORMAL_TOL) {
        return Err(Error::NotUnitVector(dev));
    }
    Ok(())
}

fn basic_relations(r: &Tensor4, g: &Mat4, b: &SBasis) -> Result<Vec<Residual>> {
    let k = |m: usize, n: usize| sectional(r, g, &b.s_pow(m), &b.s_pow(n));
    let k01 = k(0, 1)?;
    let k02 = k(0, 2)?;
    Ok(vec![
        Residual::new("k(x,Sx)=k(Sx,S2x)", (k01 - k(1, 2)?).abs()),
        Residual::new("k(x,Sx)=k(S2x,S3x)", (k01 - k(2, 3)?).abs()),
        Residual::new("k(x,Sx)=k(S3x,x)", (k01 - k(3, 0)?).abs()),
        Residual::new("k(x,S2x)=k(Sx,S3x)", (k02 - k(1, 3)?).abs()),
    ])
}

/// `k(x,Sx) = k(Sx,S^2x) = k(S^2x,S^3x) = k(S^3x,x)` and
/// `k(x,S^2x) = k(Sx,S^3x)` for curvature with property (R).
pub fn verify_basic_plane_relations(
    r: &Tensor4,
    g: &Mat4,
    s: &SkewStructure,
    x: &Vec4,
) -> Result<Vec<Residual>> {
    require("R", check_r_invariance(r, s), r)?;
    basic_relations(r, g, &s_basis(x, s, g)?)
}

/// `2(1-c^2)k(u,Su) + k(u,S^2u)` for a unit `u` with `c = g(u, Su)`.
fn combo(r: &Tensor4, g: &Mat4, s: &SkewStructure, u: &Vec4) -> Result<(f64, f64)> {
    let su = s.apply(u);
    let c = g.bilinear(u, &su);
    let val = 2.0 * (1.0 - c * c) * sectional(r, g, u, &su)? + sectional(r, g, u, &s.apply(&su))?;
    Ok((c, val))
}

/// For an orthonormal S-basis generated by `x` and any unit `u` with
/// `cos phi = g(u, Su)`:
///
/// `2(1-cos^2 phi) k(u,Su) + k(u,S^2u) = k(x,S^2x) + 2(1-cos^2 phi) k(x,Sx)
///  + cos^2 phi (4R(x,Sx,Sx,S^2x) + 6R(x,Sx,S^2x,S^3x))
///  + 4 cos phi (R(x,Sx,x,S^2x) + R(x,Sx,Sx,S^3x))`.
pub fn verify_orthonormal_sum_theorem(
    r: &Tensor4,
    g: &Mat4,
    s: &SkewStructure,
    x: &Vec4,
    u: &Vec4,
) -> Result<f64> {
    let b = orthonormal_basis(s, g, x)?;
    require_unit(g, u)?;
    require("R", check_r_invariance(r, s), r)?;
    let (c, lhs) = combo(r, g, s, u)?;
    let [x, sx, s2x, s3x] = [0, 1, 2, 3].map(|n| b.s_pow(n));
    let rhs = sectional(r, g, &x, &s2x)?
        + 2.0 * (1.0 - c * c) * sectional(r, g, &x, &sx)?
        + c * c * (4.0 * r.eval(&x, &sx, &sx, &s2x) + 6.0 * r.eval(&x, &sx, &s2x, &s3x))
        + 4.0 * c * (r.eval(&x, &sx, &x, &s2x) + r.eval(&x, &sx, &sx, &s3x));
    Ok((lhs - rhs).abs())
}

/// With `v`, `w` unit vectors at angles `pi/3` and `2pi/3` to their images:
///
/// `2(1-c^2)k(u,Su) + k(u,S^2u) = (1-4c^2)(2k(x,Sx) + k(x,S^2x))
///  + (2c^2+c)(3/2 k(v,Sv) + k(v,S^2v)) + (2c^2-c)(3/2 k(w,Sw) + k(w,S^2w))`.
pub fn verify_three_angle_theorem(
    r: &Tensor4,
    g: &Mat4,
    s: &SkewStructure,
    x: &Vec4,
    u: &Vec4,
) -> Result<f64> {
    let b = orthonormal_basis(s, g, x)?;
    require_unit(g, u)?;
    require("R", check_r_invariance(r, s), r)?;
    let v = unit_vector_with_angle(&b, s, g, FRAC_PI_3)?;
    let w = unit_vector_with_angle(&b, s, g, 2.0 * FRAC_PI_3)?;
    let (c, lhs) = combo(r, g, s, u)?;
    let x = b.x();
    let plane_pair = |y: &Vec4, weight: f64| -> Result<f64> {
        let sy = s.apply(y);
        Ok(weight * sectional(r, g, y, &sy)? + sectional(r, g, y, &s.apply(&sy))?)
    };
    let rhs = (1.0 - 4.0 * c * c) * plane_pair(&x, 2.0)?
        + (2.0 * c * c + c) * plane_pair(&v, 1.5)?
        + (2.0 * c * c - c) * plane_pair(&w, 1.5)?;
    Ok((lhs - rhs).abs())
}

/// For curvature with property (R1) the basic relations hold together with
/// `k(x,S^2x) = 2(1-cos^2 phi) k(x,Sx)`, `phi = angle(x, Sx)`, for any `x`.
pub fn verify_r1_plane_relations(
    r: &Tensor4,
    g: &Mat4,
    s: &SkewStructure,
    x: &Vec4,
) -> Result<Vec<Residual>> {
    require("R1", check_r1_invariance(r, s), r)?;
    let b = s_basis(x, s, g)?;
    let mut out = basic_relations(r, g, &b)?;
    let c = b.phi.cos();
    let k01 = sectional(r, g, &b.s_pow(0), &b.s_pow(1))?;
    let k02 = sectional(r, g, &b.s_pow(0), &b.s_pow(2))?;
    out.push(Residual::new("k(x,S2x)=2(1-cos^2 phi)k(x,Sx)", (k02 - 2.0 * (1.0 - c * c) * k01).abs()));
    Ok(out)
}

/// For curvature with property (R1), an orthonormal S-basis of `x` and
/// unit `u` with `c = cos angle(u, Su)`:
///
/// `R(u,Su,u,Su) = (1+2c^2) R(x,Sx,x,Sx) + 2c R(x,Sx,x,S^2x)` and
/// `k(u,Su) = (1+2c^2-3c)/(1-c^2) k(x,Sx) + 3c/(2(1-c^2)) k(v,Sv)`
/// where `angle(v, Sv) = pi/3`.
pub fn verify_r1_interpolation(
    r: &Tensor4,
    g: &Mat4,
    s: &SkewStructure,
    x: &Vec4,
    u: &Vec4,
) -> Result<Vec<Residual>> {
    let b = orthonormal_basis(s, g, x)?;
    require_unit(g, u)?;
    require("R1", check_r1_invariance(r, s), r)?;
    let v = unit_vector_with_angle(&b, s, g, FRAC_PI_3)?;
    let (x, sx, s2x) = (b.s_pow(0), b.s_pow(1), b.s_pow(2));
    let su = s.apply(u);
    let c = g.bilinear(u, &su);
    let one_minus = 1.0 - c * c;

    let expanded = (1.0 + 2.0 * c * c) * r.eval(&x, &sx, &x, &sx) + 2.0 * c * r.eval(&x, &sx, &x, &s2x);
    let lhs = sectional(r, g, u, &su)?;
    let rhs = (1.0 + 2.0 * c * c - 3.0 * c) / one_minus * sectional(r, g, &x, &sx)?
        + 3.0 * c / (2.0 * one_minus) * sectional(r, g, &v, &s.apply(&v))?;
    Ok(vec![
        Residual::new("R(u,Su,u,Su) expansion", (r.eval(u, &su, u, &su) - expanded).abs()),
        Residual::new("k(u,Su) interpolation", (lhs - rhs).abs()),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::classes::{synth_l2, L2Params};
    use crate::connection::{g45_algebra, koszul_nabla, riemann_lie};

    fn g45() -> (Tensor4, SkewStructure) {
        let m = g45_algebra(1.0, 1.0).unwrap();
        (riemann_lie(&m, &koszul_nabla(&m)), m.s)
    }

    fn unit(v: [f64; 4]) -> Vec4 {
        let v = Vec4(v);
        (1.0 / v.norm()) * v
    }

    #[test]
    fn sectional_basics() {
        let (r, _) = g45();
        let g = Mat4::identity();
        assert!((sectional(&r, &g, &Vec4::basis(0), &Vec4::basis(1)).unwrap() - 1.0).abs() < 1e-12);
        let (x, y) = (Vec4::new(1.0, 2.0, 0.5, -1.0), Vec4::new(0.0, 1.0, 3.0, 1.0));
        assert_eq!(sectional(&Tensor4::zero(), &g, &x, &y).unwrap(), 0.0);
        let t = synth_l2(&L2Params::new(0.3, -1.1, 0.7, 2.5, -0.4, 1.9));
        let k1 = sectional(&t, &g, &x, &y).unwrap();
        let k2 = sectional(&t, &g, &(x + y), &y).unwrap();
        assert!((k1 - k2).abs() < 1e-10);
        assert!(matches!(sectional(&t, &g, &x, &(2.0 * x)), Err(Error::DegeneratePlane(_))));
    }

    #[test]
    fn g45_basic_planes() {
        let (r, s) = g45();
        let g = Mat4::identity();
        let rep = sectional_report(&r, &g, &s, &Vec4::basis(0)).unwrap();
        assert!((rep.k_x_sx - 1.0).abs() < 1e-12 && (rep.k_x_s2x - 1.0).abs() < 1e-12);
        assert_eq!(rep.planes.len(), 6);
        let res = verify_basic_plane_relations(&r, &g, &s, &Vec4::basis(0)).unwrap();
        assert_eq!(res.len(), 4);
        assert!(max_residual(&res) < 1e-12);
        assert!(matches!(
            verify_r1_plane_relations(&r, &g, &s, &Vec4::basis(0)),
            Err(Error::PropertyNotSatisfied { property: "R1", .. })
        ));
    }

    #[test]
    fn sum_theorems_at_u_equal_x() {
        let s = SkewStructure::chart();
        let g = Mat4::identity();
        let x = Vec4::basis(0);
        let t = synth_l2(&L2Params::new(0.3, -1.1, 0.7, 2.5, -0.4, 1.9));
        assert!(verify_orthonormal_sum_theorem(&t, &g, &s, &x, &x).unwrap() < 1e-12);
        assert!(verify_three_angle_theorem(&t, &g, &s, &x, &x).unwrap() < 1e-12);
        let u = unit([0.3, -0.2, 0.9, 0.1]);
        assert!(verify_orthonormal_sum_theorem(&t, &g, &s, &x, &u).unwrap() < 1e-9);
        assert!(verify_three_angle_theorem(&t, &g, &s, &x, &u).unwrap() < 1e-9);
    }

    #[test]
    fn r1_identities() {
        let s = SkewStructure::chart();
        let t = synth_l2(&L2Params::r1_class(0.8, -0.3));
        let g = Mat4::identity();
        let x = Vec4::basis(0);
        assert!(max_residual(&verify_r1_plane_relations(&t, &g, &s, &x).unwrap()) < 1e-12);
        let g21 = crate::manifold::metric_layout(2.0, 1.0);
        let xr = Vec4::new(0.4, -1.2, 0.3, 0.8);
        assert!(max_residual(&verify_r1_plane_relations(&t, &g21, &s, &xr).unwrap()) < 1e-9);
        for u in [x, unit([0.3, -0.2, 0.9, 0.1]), unit([-1.0, 0.5, 0.2, 0.7])] {
            assert!(max_residual(&verify_r1_interpolation(&t, &g, &s, &x, &u).unwrap()) < 1e-9);
        }
        let b = s_basis(&x, &s, &g).unwrap();
        let v = unit_vector_with_angle(&b, &s, &g, FRAC_PI_3).unwrap();
        assert!(max_residual(&verify_r1_interpolation(&t, &g, &s, &x, &v).unwrap()) < 1e-12);
    }

    #[test]
    fn hypotheses_fail_fast() {
        let s = SkewStructure::chart();
        let g = Mat4::identity();
        let mut t = Tensor4::zero();
        t.set_curvature(0, 1, 0, 1, 1.0);
        let x = Vec4::basis(0);
        assert!(matches!(
            verify_basic_plane_relations(&t, &g, &s, &x),
            Err(Error::PropertyNotSatisfied { property: "R", .. })
        ));
        let ok = synth_l2(&L2Params::new(1.0, 1.0, 0.0, 0.0, 0.0, 0.0));
        assert!(matches!(
            verify_orthonormal_sum_theorem(&ok, &g, &s, &(2.0 * x), &x),
            Err(Error::NotOrthonormalBasis(_))
        ));
        assert!(matches!(
            verify_three_angle_theorem(&ok, &g, &s, &x, &(2.0 * x)),
            Err(Error::NotUnitVector(_))
        ));
        assert!(max_residual(&verify_basic_plane_relations(&Tensor4::zero(), &g, &s, &x).unwrap()) == 0.0);
    }
}
