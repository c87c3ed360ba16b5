//! Levi-Civita connection and Riemann curvature tensor.
//!
//! Two sources are supported: a coordinate chart whose metric is built from
//! the scalar fields `A`, `B` (Christoffel symbols from exact derivatives),
//! and a Lie group with a left-invariant orthonormal metric (Koszul formula
//! from the structure constants).
//!
//! Conventions: `R(x,y)z = nabla_x nabla_y z - nabla_y nabla_x z -
//! nabla_[x,y] z` and `R_{ijkh} = g(R(e_i, e_j) e_k, e_h)`.

use crate::error::{Error, Result};
use crate::expr::{Point4, ScalarField};
use crate::linalg4::{indices, skew_circulant_from_row, Mat4, Tensor4, Vec4, DIM};
use crate::manifold::{MetricAtPoint, SkewStructure};

type Arr3 = [[[f64; DIM]; DIM]; DIM];

fn zero3() -> Arr3 {
    [[[0.0; DIM]; DIM]; DIM]
}

/// Connection coefficients: `get(i, j, k)` is the `e_k` component of
/// `nabla_{e_i} e_j` (for a chart, `Gamma^k_{ij}`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConnectionCoefficients {
    c: Arr3,
}

impl ConnectionCoefficients {
    pub fn zero() -> Self {
        ConnectionCoefficients { c: zero3() }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[i][j][k]
    }

    /// `nabla_{e_i} e_j` as a vector.
    pub fn nabla(&self, i: usize, j: usize) -> Vec4 {
        Vec4(self.c[i][j])
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().flatten().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |Gamma^k_ij - Gamma^k_ji|`, the torsion in a coordinate frame.
    pub fn torsion_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    r = r.max((self.c[i][j][k] - self.c[j][i][k]).abs());
                }
            }
        }
        r
    }
}

/// Chart manifold: metric of skew-circulant form built from `A`, `B`.
#[derive(Clone, Debug)]
pub struct ChartManifold {
    pub a: ScalarField,
    pub b: ScalarField,
    pub s: SkewStructure,
    pub domain_note: String,
    da: [ScalarField; DIM],
    db: [ScalarField; DIM],
    dda: [[ScalarField; DIM]; DIM],
    ddb: [[ScalarField; DIM]; DIM],
}

/// Metric, its first and second partial derivatives at a point.
struct MetricJet {
    metric: MetricAtPoint,
    dg: [Mat4; DIM],
    ddg: [[Mat4; DIM]; DIM],
}

fn first_derivatives(f: &ScalarField) -> Result<[ScalarField; DIM]> {
    Ok([f.derivative(1)?, f.derivative(2)?, f.derivative(3)?, f.derivative(4)?])
}

impl ChartManifold {
    pub fn new(a: ScalarField, b: ScalarField) -> Result<Self> {
        let da = first_derivatives(&a)?;
        let db = first_derivatives(&b)?;
        let second = |d: &[ScalarField; DIM]| -> Result<[[ScalarField; DIM]; DIM]> {
            Ok([
                first_derivatives(&d[0])?,
                first_derivatives(&d[1])?,
                first_derivatives(&d[2])?,
                first_derivatives(&d[3])?,
            ])
        };
        let dda = second(&da)?;
        let ddb = second(&db)?;
        Ok(ChartManifold {
            a,
            b,
            s: SkewStructure::chart(),
            domain_note: String::new(),
            da,
            db,
            dda,
            ddb,
        })
    }

    pub fn parse(a: &str, b: &str) -> Result<Self> {
        Self::new(ScalarField::parse(a)?, ScalarField::parse(b)?)
    }

    pub fn with_domain_note(mut self, note: impl Into<String>) -> Self {
        self.domain_note = note.into();
        self
    }

    /// Metric data at `p`; fails if the positivity condition does not hold.
    pub fn metric_at(&self, p: &Point4) -> Result<MetricAtPoint> {
        MetricAtPoint::new(self.a.evaluate(p)?, self.b.evaluate(p)?)
    }

    fn jet(&self, p: &Point4) -> Result<MetricJet> {
        let metric = self.metric_at(p)?;
        // g = A id + B P with P the skew-circulant pattern of B
        let pattern = skew_circulant_from_row([0.0, 1.0, 0.0, -1.0]);
        let id = Mat4::identity();
        let combine = |da: f64, db: f64| id.scale(da) + pattern.scale(db);
        let mut dg = [Mat4::ZERO; DIM];
        let mut ddg = [[Mat4::ZERO; DIM]; DIM];
        for i in 0..DIM {
            dg[i] = combine(self.da[i].evaluate(p)?, self.db[i].evaluate(p)?);
            for j in 0..DIM {
                ddg[i][j] = combine(self.dda[i][j].evaluate(p)?, self.ddb[i][j].evaluate(p)?);
            }
        }
        Ok(MetricJet { metric, dg, ddg })
    }

    /// Partial derivatives `d_i g` at `p`.
    pub fn metric_derivatives(&self, p: &Point4) -> Result<[Mat4; DIM]> {
        Ok(self.jet(p)?.dg)
    }
}

/// Christoffel symbols of the first kind `[jk, m] = 1/2 (d_j g_km + d_k g_jm - d_m g_jk)`.
fn first_kind(dg: &[Mat4; DIM]) -> Arr3 {
    let mut out = zero3();
    for m in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                out[m][j][k] = 0.5 * (dg[j].0[k][m] + dg[k].0[j][m] - dg[m].0[j][k]);
            }
        }
    }
    out
}

fn raise(ginv: &Mat4, low: &Arr3) -> Arr3 {
    let mut out = zero3();
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                out[i][j][k] = (0..DIM).map(|m| ginv.0[k][m] * low[m][i][j]).sum();
            }
        }
    }
    out
}

pub fn christoffel(m: &ChartManifold, p: &Point4) -> Result<ConnectionCoefficients> {
    let jet = m.jet(p)?;
    Ok(ConnectionCoefficients { c: raise(&jet.metric.g_inv, &first_kind(&jet.dg)) })
}

/// `max |d_i g_jk - Gamma^l_ij g_lk - Gamma^l_ik g_jl|` at `p`.
pub fn metric_compatibility_residual(
    m: &ChartManifold,
    gamma: &ConnectionCoefficients,
    p: &Point4,
) -> Result<f64> {
    let jet = m.jet(p)?;
    let g = &jet.metric.g;
    let mut r: f64 = 0.0;
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                let mut v = jet.dg[i].0[j][k];
                for l in 0..DIM {
                    v -= gamma.get(i, j, l) * g.0[l][k] + gamma.get(i, k, l) * g.0[j][l];
                }
                r = r.max(v.abs());
            }
        }
    }
    Ok(r)
}

/// Curvature tensor of a chart manifold at `p`:
/// `R_{ijkh} = g_{lh} (d_i G^l_jk - d_j G^l_ik + G^m_jk G^l_im - G^m_ik G^l_jm)`.
pub fn riemann_chart(m: &ChartManifold, p: &Point4) -> Result<Tensor4> {
    let jet = m.jet(p)?;
    let g = &jet.metric.g;
    let ginv = &jet.metric.g_inv;
    let low = first_kind(&jet.dg);
    let gamma = raise(ginv, &low);

    // d_i g^{lm} = -g^{la} d_i g_ab g^{bm}
    let dginv: [Mat4; DIM] = std::array::from_fn(|i| (*ginv * jet.dg[i] * *ginv).scale(-1.0));

    // dgamma[i][j][k][l] = d_i Gamma^l_jk
    let mut dgamma = [zero3(); DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                for l in 0..DIM {
                    let mut v = 0.0;
                    for mm in 0..DIM {
                        let d_low = 0.5
                            * (jet.ddg[i][j].0[k][mm] + jet.ddg[i][k].0[j][mm]
                                - jet.ddg[i][mm].0[j][k]);
                        v += dginv[i].0[l][mm] * low[mm][j][k] + ginv.0[l][mm] * d_low;
                    }
                    dgamma[i][j][k][l] = v;
                }
            }
        }
    }

    let mut r = Tensor4::zero();
    for (i, j, k, h) in indices() {
        let mut v = 0.0;
        for l in 0..DIM {
            let mut up = dgamma[i][j][k][l] - dgamma[j][i][k][l];
            for mm in 0..DIM {
                up += gamma[j][k][mm] * gamma[i][mm][l] - gamma[i][k][mm] * gamma[j][mm][l];
            }
            v += g.0[l][h] * up;
        }
        r.set(i, j, k, h, v);
    }
    Ok(r)
}

/// Lie algebra with a left-invariant orthonormal metric `g(e_i, e_j) = delta_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieGroupManifold {
    /// `[e_i, e_j] = sum_k brackets[i][j][k] e_k`.
    pub brackets: Arr3,
    pub s: SkewStructure,
}

impl LieGroupManifold {
    /// Validates antisymmetry and the Jacobi identity (to 1e-12).
    pub fn new(brackets: Arr3, s: SkewStructure) -> Result<Self> {
        if brackets.iter().flatten().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("structure constants"));
        }
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    if (brackets[i][j][k] + brackets[j][i][k]).abs() > 1e-12 {
                        return Err(Error::InvalidAlgebra(format!(
                            "bracket not antisymmetric at ({}, {})",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        let m = LieGroupManifold { brackets, s };
        let jac = m.jacobi_residual();
        if jac > 1e-12 {
            return Err(Error::InvalidAlgebra(format!("Jacobi identity fails ({jac:e})")));
        }
        Ok(m)
    }

    pub fn abelian(s: SkewStructure) -> Self {
        LieGroupManifold { brackets: zero3(), s }
    }

    pub fn bracket(&self, i: usize, j: usize) -> Vec4 {
        Vec4(self.brackets[i][j])
    }

    /// `max |[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]|`.
    pub fn jacobi_residual(&self) -> f64 {
        let c = &self.brackets;
        let mut r: f64 = 0.0;
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    for n in 0..DIM {
                        let v: f64 = (0..DIM)
                            .map(|m| {
                                c[i][j][m] * c[m][k][n]
                                    + c[j][k][m] * c[m][i][n]
                                    + c[k][i][m] * c[m][j][n]
                            })
                            .sum();
                        r = r.max(v.abs());
                    }
                }
            }
        }
        r
    }

    pub fn metric(&self) -> MetricAtPoint {
        MetricAtPoint::identity()
    }
}

/// The algebra `g_{4,5}`: `[e1,e4] = e1, [e2,e4] = a e2, [e3,e4] = b e3`
/// with `-1 <= b <= a <= 1`, `ab != 0`.
pub fn g45_algebra(a: f64, b: f64) -> Result<LieGroupManifold> {
    if !(a.is_finite() && b.is_finite()) || !(-1.0 <= b && b <= a && a <= 1.0) || a * b == 0.0 {
        return Err(Error::ParameterOutOfRange(format!(
            "g45 needs -1 <= b <= a <= 1 and ab != 0 (a = {a}, b = {b})"
        )));
    }
    let mut c = zero3();
    for (i, coef) in [(0usize, 1.0), (1, a), (2, b)] {
        c[i][3][i] = coef;
        c[3][i][i] = -coef;
    }
    LieGroupManifold::new(c, SkewStructure::lie_example())
}

/// Levi-Civita connection of the orthonormal left-invariant metric:
/// `2 g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y)`.
pub fn koszul_nabla(m: &LieGroupManifold) -> ConnectionCoefficients {
    let c = &m.brackets;
    let mut out = zero3();
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                out[i][j][k] = 0.5 * (c[i][j][k] - c[j][k][i] + c[k][i][j]);
            }
        }
    }
    ConnectionCoefficients { c: out }
}

/// `max |<nabla_i e_j, e_k> + <e_j, nabla_i e_k>|` for the orthonormal metric.
pub fn lie_metric_compatibility_residual(nabla: &ConnectionCoefficients) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                r = r.max((nabla.get(i, j, k) + nabla.get(i, k, j)).abs());
            }
        }
    }
    r
}

/// Torsion in the left-invariant frame:
/// `max |nabla_{e_i} e_j - nabla_{e_j} e_i - [e_i, e_j]|`.
pub fn lie_torsion_residual(m: &LieGroupManifold, nabla: &ConnectionCoefficients) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                r = r.max((nabla.get(i, j, k) - nabla.get(j, i, k) - m.brackets[i][j][k]).abs());
            }
        }
    }
    r
}

/// Curvature of a left-invariant connection in the orthonormal frame.
pub fn riemann_lie(m: &LieGroupManifold, nabla: &ConnectionCoefficients) -> Tensor4 {
    let c = &m.brackets;
    let mut r = Tensor4::zero();
    for (i, j, k, h) in indices() {
        let mut v = 0.0;
        for mm in 0..DIM {
            v += nabla.get(j, k, mm) * nabla.get(i, mm, h)
                - nabla.get(i, k, mm) * nabla.get(j, mm, h)
                - c[i][j][mm] * nabla.get(mm, k, h);
        }
        r.set(i, j, k, h, v);
    }
    r
}

/// `max |R_{ijkh} + R_{jkih} + R_{kijh}|`.
pub fn bianchi_first_residual(r: &Tensor4) -> f64 {
    indices().fold(0.0, |acc, (i, j, k, h)| {
        acc.max((r.get(i, j, k, h) + r.get(j, k, i, h) + r.get(k, i, j, h)).abs())
    })
}
