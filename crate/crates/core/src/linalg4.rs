//! Fixed-dimension (n = 4) dense linear and tensor algebra.
//!
//! Everything here works on stack arrays: [`Vec4`] for tangent vectors,
//! [`Mat4`] for bilinear forms and endomorphisms, [`Tensor4`] for rank-4
//! covariant tensors such as the curvature tensor `R_{ijkh}`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub const DIM: usize = 4;

/// Relative scale of the singularity test in [`invert4`].
const SINGULAR_RTOL: f64 = 1e-14;

/// A tangent vector, contravariant components.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec4(pub [f64; DIM]);

impl Vec4 {
    pub const ZERO: Vec4 = Vec4([0.0; DIM]);

    pub fn new(c0: f64, c1: f64, c2: f64, c3: f64) -> Self {
        Vec4([c0, c1, c2, c3])
    }

    /// Coordinate basis vector `e_{i+1}` (zero-based `i`).
    pub fn basis(i: usize) -> Self {
        let mut v = [0.0; DIM];
        v[i] = 1.0;
        Vec4(v)
    }

    pub fn dot(&self, other: &Vec4) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl Index<usize> for Vec4 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vec4 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, rhs: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, rhs: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    fn neg(self) -> Vec4 {
        Vec4(self.0.map(|v| -v))
    }
}

impl Mul<Vec4> for f64 {
    type Output = Vec4;
    fn mul(self, rhs: Vec4) -> Vec4 {
        Vec4(rhs.0.map(|v| self * v))
    }
}

impl fmt::Display for Vec4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

/// Dense 4x4 matrix, `m[i][j]` is row `i`, column `j`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Mat4(pub [[f64; DIM]; DIM]);

impl Mat4 {
    pub const ZERO: Mat4 = Mat4([[0.0; DIM]; DIM]);

    pub fn identity() -> Self {
        Mat4::from_fn(|i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> f64) -> Self {
        Mat4(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn diag(d: [f64; DIM]) -> Self {
        Mat4::from_fn(|i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn transpose(&self) -> Mat4 {
        Mat4::from_fn(|i, j| self.0[j][i])
    }

    /// Ordinary matrix-vector product `M v`.
    pub fn mul_vec(&self, v: &Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| (0..DIM).map(|j| self.0[i][j] * v.0[j]).sum()))
    }

    /// Bilinear form `x^T M y`.
    pub fn bilinear(&self, x: &Vec4, y: &Vec4) -> f64 {
        let mut s = 0.0;
        for i in 0..DIM {
            for j in 0..DIM {
                s += self.0[i][j] * x.0[i] * y.0[j];
            }
        }
        s
    }

    pub fn scale(&self, s: f64) -> Mat4 {
        Mat4::from_fn(|i, j| s * self.0[i][j])
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest entrywise difference `max |self - other|`.
    pub fn max_abs_diff(&self, other: &Mat4) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn symmetry_residual(&self) -> f64 {
        self.max_abs_diff(&self.transpose())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> f64 {
        let m = &self.0;
        let minor = |c: usize| {
            let cols: Vec<usize> = (0..DIM).filter(|&j| j != c).collect();
            let a = |r: usize, k: usize| m[r][cols[k]];
            a(1, 0) * (a(2, 1) * a(3, 2) - a(2, 2) * a(3, 1))
                - a(1, 1) * (a(2, 0) * a(3, 2) - a(2, 2) * a(3, 0))
                + a(1, 2) * (a(2, 0) * a(3, 1) - a(2, 1) * a(3, 0))
        };
        (0..DIM)
            .map(|c| {
                let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[0][c] * minor(c)
            })
            .sum()
    }
}

impl Index<usize> for Mat4 {
    type Output = [f64; DIM];
    fn index(&self, i: usize) -> &[f64; DIM] {
        &self.0[i]
    }
}

impl IndexMut<usize> for Mat4 {
    fn index_mut(&mut self, i: usize) -> &mut [f64; DIM] {
        &mut self.0[i]
    }
}

impl Add for Mat4 {
    type Output = Mat4;
    fn add(self, rhs: Mat4) -> Mat4 {
        Mat4::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl Sub for Mat4 {
    type Output = Mat4;
    fn sub(self, rhs: Mat4) -> Mat4 {
        Mat4::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl Mul for Mat4 {
    type Output = Mat4;
    fn mul(self, rhs: Mat4) -> Mat4 {
        Mat4::from_fn(|i, j| (0..DIM).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
    }
}

/// Rank-4 covariant tensor stored flat in row-major `(i, j, k, h)` order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tensor4 {
    data: [f64; 256],
}

impl Default for Tensor4 {
    fn default() -> Self {
        Self::zero()
    }
}

#[inline]
fn flat(i: usize, j: usize, k: usize, h: usize) -> usize {
    ((i * DIM + j) * DIM + k) * DIM + h
}

impl Tensor4 {
    pub fn zero() -> Self {
        Tensor4 { data: [0.0; 256] }
    }

    pub fn from_fn(f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut t = Tensor4::zero();
        for (i, j, k, h) in indices() {
            t.data[flat(i, j, k, h)] = f(i, j, k, h);
        }
        t
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, h: usize) -> f64 {
        self.data[flat(i, j, k, h)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, h: usize, v: f64) {
        self.data[flat(i, j, k, h)] = v;
    }

    /// Sets `R_{ijkh} = v` together with every entry forced by the
    /// curvature symmetries (antisymmetry in each pair, pair exchange).
    pub fn set_curvature(&mut self, i: usize, j: usize, k: usize, h: usize, v: f64) {
        for (a, b, c, d, s) in [
            (i, j, k, h, 1.0),
            (j, i, k, h, -1.0),
            (i, j, h, k, -1.0),
            (j, i, h, k, 1.0),
        ] {
            self.set(a, b, c, d, s * v);
            self.set(c, d, a, b, s * v);
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Tensor4) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn scale(&self, s: f64) -> Tensor4 {
        Tensor4 { data: self.data.map(|v| s * v) }
    }

    /// Full contraction `R(x, y, z, u)`.
    pub fn eval(&self, x: &Vec4, y: &Vec4, z: &Vec4, u: &Vec4) -> f64 {
        let mut s = 0.0;
        for i in 0..DIM {
            if x.0[i] == 0.0 {
                continue;
            }
            for j in 0..DIM {
                if y.0[j] == 0.0 {
                    continue;
                }
                let xy = x.0[i] * y.0[j];
                for k in 0..DIM {
                    let base = flat(i, j, k, 0);
                    let inner: f64 = (0..DIM).map(|h| self.data[base + h] * u.0[h]).sum();
                    s += xy * z.0[k] * inner;
                }
            }
        }
        s
    }

    /// Substitutes `sum_a m[i][a] e_a` for `e_i` in one slot:
    /// `out[.. i ..] = sum_a m[i][a] * self[.. a ..]`.
    pub fn transform_slot(&self, slot: usize, m: &Mat4) -> Tensor4 {
        let mut out = Tensor4::zero();
        for idx in indices() {
            let mut src = [idx.0, idx.1, idx.2, idx.3];
            let target = src[slot];
            let mut acc = 0.0;
            for a in 0..DIM {
                let c = m.0[target][a];
                if c != 0.0 {
                    src[slot] = a;
                    acc += c * self.get(src[0], src[1], src[2], src[3]);
                }
            }
            out.set(idx.0, idx.1, idx.2, idx.3, acc);
        }
        out
    }

    /// Largest violation of the curvature symmetries: antisymmetry in
    /// `(i,j)` and in `(k,h)`, and pair exchange `(i,j) <-> (k,h)`.
    pub fn curvature_symmetry_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for (i, j, k, h) in indices() {
            let v = self.get(i, j, k, h);
            r = r
                .max((v + self.get(j, i, k, h)).abs())
                .max((v + self.get(i, j, h, k)).abs())
                .max((v - self.get(k, h, i, j)).abs());
        }
        r
    }
}

impl Add for Tensor4 {
    type Output = Tensor4;
    fn add(mut self, rhs: Tensor4) -> Tensor4 {
        self += rhs;
        self
    }
}

impl AddAssign for Tensor4 {
    fn add_assign(&mut self, rhs: Tensor4) {
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a += b;
        }
    }
}

impl Sub for Tensor4 {
    type Output = Tensor4;
    fn sub(mut self, rhs: Tensor4) -> Tensor4 {
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a -= b;
        }
        self
    }
}

/// All 256 index tuples in storage order.
pub fn indices() -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..256).map(|n| (n >> 6, (n >> 4) & 3, (n >> 2) & 3, n & 3))
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
///
/// Rejects matrices with `|det| < 1e-14 * (max |entry|)^4`.
pub fn invert4(m: &Mat4) -> Result<Mat4> {
    if !m.is_finite() {
        return Err(Error::NonFinite("matrix to invert"));
    }
    let scale = m.max_abs();
    let mut a = m.0;
    let mut inv = Mat4::identity().0;
    let mut det = 1.0;
    for col in 0..DIM {
        let pivot = (col..DIM)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .unwrap_or(col);
        if a[pivot][col] == 0.0 {
            return Err(Error::SingularMatrix { det: 0.0 });
        }
        if pivot != col {
            a.swap(pivot, col);
            inv.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for j in 0..DIM {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..DIM {
            if r != col {
                let f = a[r][col];
                if f != 0.0 {
                    for j in 0..DIM {
                        a[r][j] -= f * a[col][j];
                        inv[r][j] -= f * inv[col][j];
                    }
                }
            }
        }
    }
    if scale == 0.0 || det.abs() < SINGULAR_RTOL * scale.powi(4) {
        return Err(Error::SingularMatrix { det });
    }
    Ok(Mat4(inv))
}

/// Ricci contraction `rho_{jk} = g^{ih} R_{ijkh}`.
pub fn contract_ricci(r: &Tensor4, ginv: &Mat4) -> Mat4 {
    let mut rho = Mat4::ZERO;
    for (i, j, k, h) in indices() {
        let w = ginv.0[i][h];
        if w != 0.0 {
            rho.0[j][k] += w * r.get(i, j, k, h);
        }
    }
    rho
}

/// Full trace `sum_{ij} inv^{ij} rho_{ij}`.
pub fn full_contract(rho: &Mat4, inv: &Mat4) -> f64 {
    let mut s = 0.0;
    for i in 0..DIM {
        for j in 0..DIM {
            s += inv.0[i][j] * rho.0[i][j];
        }
    }
    s
}

/// Right skew-circulant matrix generated by its first row: each row is the
/// previous one shifted right by one place, the wrapped entry negated.
pub fn skew_circulant_from_row(row: [f64; DIM]) -> Mat4 {
    let mut m = Mat4::ZERO;
    m.0[0] = row;
    for i in 1..DIM {
        let prev = m.0[i - 1];
        m.0[i][0] = -prev[DIM - 1];
        for j in 1..DIM {
            m.0[i][j] = prev[j - 1];
        }
    }
    m
}
