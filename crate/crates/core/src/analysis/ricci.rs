//! Ricci tensor, scalar curvatures and the almost-Einstein decomposition
//! `rho = (tau/4) g + (tau*/4) g~`.

use crate::analysis::classes::L2Params;
use crate::error::{Error, Result};
use crate::linalg4::{contract_ricci, full_contract, skew_circulant_from_row, Mat4, Tensor4, Vec4};
use crate::manifold::{s_basis, MetricAtPoint, SkewStructure};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RicciData {
    pub rho: Mat4,
    pub tau: f64,
    pub tau_star: f64,
    /// `tau / 4`
    pub alpha: f64,
    /// `tau* / 4`
    pub beta: f64,
    /// `max |rho - (tau/4) g - (tau*/4) g~|`
    pub decomposition_residual: f64,
}

fn discriminant(a: f64, b: f64) -> Result<f64> {
    let d = a * a - 2.0 * b * b;
    if !(d > 1e-14 * a * a) || !d.is_finite() {
        return Err(Error::DegenerateMetric(d));
    }
    Ok(d)
}

/// Ricci matrix of an (R)-invariant tensor from its parameters, via
/// `rho_11 = (2B(R5+R6) - A(2R2+R1)) / (A^2-2B^2)` and
/// `rho_12 = (B(2R3-R2+3R4) - A(R5+R6)) / (A^2-2B^2)`.
pub fn ricci_closed_forms(p: &L2Params, a: f64, b: f64) -> Result<Mat4> {
    let d = discriminant(a, b)?;
    let r = |n| p.r(n);
    let diag = (2.0 * b * (r(5) + r(6)) - a * (2.0 * r(2) + r(1))) / d;
    let off = (b * (2.0 * r(3) - r(2) + 3.0 * r(4)) - a * (r(5) + r(6))) / d;
    Ok(skew_circulant_from_row([diag, off, 0.0, -off]))
}

/// Largest deviation from `rho_11 = rho_22 = rho_33 = rho_44`,
/// `rho_12 = rho_23 = rho_34 = -rho_14`, `rho_13 = rho_24 = 0`.
pub fn system_rho_residual(rho: &Mat4) -> f64 {
    let r = &rho.0;
    let diag = [r[1][1], r[2][2], r[3][3]].map(|v| (v - r[0][0]).abs());
    let off = [r[1][2], r[2][3], -r[0][3]].map(|v| (v - r[0][1]).abs());
    let zero = [r[0][2], r[1][3]].map(f64::abs);
    let sym = rho.symmetry_residual();
    diag.into_iter().chain(off).chain(zero).fold(sym, f64::max)
}

/// `tau = 4(A rho_11 - 2B rho_12)/(A^2-2B^2)`,
/// `tau* = 4(A rho_12 - B rho_11)/(A^2-2B^2)`.
pub fn scalars_closed_forms(rho: &Mat4, a: f64, b: f64) -> Result<(f64, f64)> {
    let d = discriminant(a, b)?;
    let (r11, r12) = (rho.0[0][0], rho.0[0][1]);
    Ok((4.0 * (a * r11 - 2.0 * b * r12) / d, 4.0 * (a * r12 - b * r11) / d))
}

pub fn almost_einstein_decompose(
    rho: &Mat4,
    g: &Mat4,
    g_tilde: &Mat4,
    tau: f64,
    tau_star: f64,
) -> RicciData {
    let alpha = tau / 4.0;
    let beta = tau_star / 4.0;
    let model = g.scale(alpha) + g_tilde.scale(beta);
    RicciData {
        rho: *rho,
        tau,
        tau_star,
        alpha,
        beta,
        decomposition_residual: rho.max_abs_diff(&model),
    }
}

/// Ricci tensor, `tau`, `tau*` by contraction, and the decomposition.
pub fn ricci_data(r: &Tensor4, metric: &MetricAtPoint) -> RicciData {
    let rho = contract_ricci(r, &metric.g_inv);
    let tau = full_contract(&rho, &metric.g_inv);
    let tau_star = full_contract(&rho, &metric.g_tilde_inv);
    almost_einstein_decompose(&rho, &metric.g, &metric.g_tilde, tau, tau_star)
}

/// Einstein test: `|tau*| < tol` and decomposition residual `< tol`.
pub fn einstein_check(d: &RicciData, tol: f64) -> bool {
    d.tau_star.abs() < tol && d.decomposition_residual < tol
}

/// Ricci curvature `r(x) = rho(x,x) / g(x,x)`.
pub fn ricci_direction(rho: &Mat4, g: &Mat4, x: &Vec4) -> Result<f64> {
    let gxx = g.bilinear(x, x);
    if !(gxx > 0.0) {
        return Err(Error::ZeroVector);
    }
    Ok(rho.bilinear(x, x) / gxx)
}

/// Ricci curvatures along `x, Sx, S^2x, S^3x` all equal
/// `tau/4 + (tau*/2) cos phi` with `phi = angle(x, Sx)`.
/// Returns the four curvatures and the largest deviation.
pub fn verify_ricci_directions(
    d: &RicciData,
    g: &Mat4,
    s: &SkewStructure,
    x: &Vec4,
) -> Result<([f64; 4], f64)> {
    let basis = s_basis(x, s, g)?;
    let expected = d.tau / 4.0 + d.tau_star / 2.0 * basis.phi.cos();
    let mut values = [0.0; 4];
    let mut res: f64 = 0.0;
    for (n, v) in values.iter_mut().enumerate() {
        *v = ricci_direction(&d.rho, g, &basis.s_pow(n))?;
        res = res.max((*v - expected).abs());
    }
    Ok((values, res))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::classes::synth_l2;

    #[test]
    fn ricci_directions_along_s_basis() {
        let s = SkewStructure::chart();
        let m = MetricAtPoint::new(2.0, 0.7).unwrap();
        let d = ricci_data(&synth_l2(&L2Params::new(0.3, -1.1, 0.7, 2.5, -0.4, 1.9)), &m);
        let (vals, res) = verify_ricci_directions(&d, &m.g, &s, &Vec4::new(0.2, 1.0, -0.5, 0.3)).unwrap();
        assert!(res < 1e-10, "{vals:?}");
    }

    #[test]
    fn constant_curvature_values() {
        let p = L2Params::new(1.0, 1.0, 0.0, 0.0, 0.0, 0.0);
        let rho = ricci_closed_forms(&p, 1.0, 0.0).unwrap();
        assert_eq!(rho, Mat4::diag([-3.0; 4]));
        assert_eq!(scalars_closed_forms(&rho, 1.0, 0.0).unwrap(), (-12.0, 0.0));
        let d = ricci_data(&synth_l2(&p), &MetricAtPoint::identity());
        assert_eq!(d.alpha, -3.0);
        assert_eq!(d.beta, 0.0);
        assert!(d.decomposition_residual < 1e-12);
        assert!(einstein_check(&d, 1e-9));
        assert_eq!(ricci_direction(&d.rho, &Mat4::identity(), &Vec4::new(1.0, 2.0, -1.0, 0.5)).unwrap(), -3.0);
    }

    #[test]
    fn zero_inputs() {
        let p = L2Params::default();
        assert_eq!(ricci_closed_forms(&p, 2.0, 1.0).unwrap(), Mat4::ZERO);
        assert_eq!(scalars_closed_forms(&Mat4::ZERO, 2.0, 1.0).unwrap(), (0.0, 0.0));
        let d = almost_einstein_decompose(&Mat4::ZERO, &Mat4::identity(), &Mat4::ZERO, 0.0, 0.0);
        assert_eq!((d.alpha, d.beta, d.decomposition_residual), (0.0, 0.0, 0.0));
        assert!(einstein_check(&d, 1e-12));
        assert_eq!(ricci_direction(&Mat4::ZERO, &Mat4::identity(), &Vec4::basis(2)).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_metric_rejected() {
        let p = L2Params::default();
        assert!(matches!(ricci_closed_forms(&p, 1.0, 1.0 / 2f64.sqrt()), Err(Error::DegenerateMetric(_))));
        assert!(matches!(scalars_closed_forms(&Mat4::ZERO, 0.0, 0.0), Err(Error::DegenerateMetric(_))));
        assert!(matches!(ricci_direction(&Mat4::ZERO, &Mat4::identity(), &Vec4::ZERO), Err(Error::ZeroVector)));
    }

    #[test]
    fn non_einstein_when_off_diagonal_ricci() {
        // R5 + R6 != 0 makes rho_12 != 0 at (A, B) = (1, 0)
        let p = L2Params::new(0.0, 0.0, 0.0, 0.0, 1.0, 0.5);
        let d = ricci_data(&synth_l2(&p), &MetricAtPoint::identity());
        assert!((d.rho.0[0][1] + 1.5).abs() < 1e-15);
        assert!(!einstein_check(&d, 1e-9));
    }

    #[test]
    fn system_rho_holds_for_closed_forms() {
        let rho = ricci_closed_forms(&L2Params::new(0.1, 0.2, 0.3, 0.4, 0.5, 0.6), 2.0, 0.5).unwrap();
        assert!(system_rho_residual(&rho) < 1e-15);
        assert!(system_rho_residual(&Mat4::diag([1.0, 2.0, 1.0, 1.0])) >= 1.0);
    }
}
