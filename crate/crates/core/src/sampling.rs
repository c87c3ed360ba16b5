//! Seeded generators for random test instances.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::L2Params;
use crate::linalg4::{Mat4, Tensor4, Vec4};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_l2_params(rng: &mut impl Rng) -> L2Params {
    L2Params(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
}

/// Parameters obeying `R1 = 2R2 = 2R3 = 2R4`, `R5 = R6`.
pub fn random_r1_params(rng: &mut impl Rng) -> L2Params {
    L2Params::r1_class(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// `(A, B)` with `A` in `[1, 3]` and `B` in `[0, A/sqrt 2)`.
pub fn random_admissible(rng: &mut impl Rng) -> (f64, f64) {
    let a = rng.gen_range(1.0..=3.0);
    let b = rng.gen_range(0.0..a / std::f64::consts::SQRT_2);
    (a, b)
}

fn random_symmetric(rng: &mut impl Rng) -> Mat4 {
    let mut m = Mat4::ZERO;
    for row in m.0.iter_mut() {
        row.iter_mut().for_each(|v| *v = rng.gen_range(-1.0..1.0));
    }
    m + m.transpose()
}

/// Kulkarni-Nomizu product `(h o k)_{ijkl} = h_ik k_jl + h_jl k_ik - h_il k_jk - h_jk k_il`.
pub fn kulkarni_nomizu(h: &Mat4, k: &Mat4) -> Tensor4 {
    Tensor4::from_fn(|i, j, a, b| {
        h[i][a] * k[j][b] + h[j][b] * k[i][a] - h[i][b] * k[j][a] - h[j][a] * k[i][b]
    })
}

/// Sum of three Kulkarni-Nomizu products of random symmetric matrices:
/// a generic tensor with all algebraic curvature symmetries.
pub fn random_curvature(rng: &mut impl Rng) -> Tensor4 {
    let mut t = Tensor4::zero();
    for _ in 0..3 {
        let h = random_symmetric(rng);
        let k = random_symmetric(rng);
        t += kulkarni_nomizu(&h, &k);
    }
    t
}

/// Direction uniform on the Euclidean sphere (rejection from the cube).
pub fn random_direction(rng: &mut impl Rng) -> Vec4 {
    loop {
        let v = Vec4(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return (1.0 / n) * v;
        }
    }
}

/// Random vector of unit length for the metric `g`.
pub fn random_unit(rng: &mut impl Rng, g: &Mat4) -> Vec4 {
    let v = random_direction(rng);
    (1.0 / g.bilinear(&v, &v).sqrt()) * v
}

pub fn random_point(rng: &mut impl Rng, radius: f64) -> [f64; 4] {
    std::array::from_fn(|_| rng.gen_range(-radius..radius))
}

/// Random expression in `x1..x4` that is defined and smooth everywhere:
/// no division except by positive denominators, `ln`/`sqrt` only of
/// positive arguments.
pub fn random_expression(rng: &mut impl Rng, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.6) {
            format!("x{}", rng.gen_range(1..=4))
        } else {
            let c: f64 = rng.gen_range(-3.0..3.0);
            format!("{:.3}", c)
        };
    }
    let sub = |rng: &mut _| random_expression(rng, depth - 1);
    match rng.gen_range(0..9) {
        0 => format!("{} + {}", sub(rng), sub(rng)),
        1 => format!("{} - ({})", sub(rng), sub(rng)),
        2 => format!("({})*({})", sub(rng), sub(rng)),
        3 => format!("({})^{}", sub(rng), rng.gen_range(0..4)),
        4 => format!("sin({})", sub(rng)),
        5 => format!("cos({})", sub(rng)),
        6 => format!("({})/(2 + ({})^2)", sub(rng), sub(rng)),
        7 => format!("ln(1 + ({})^2)", sub(rng)),
        _ => format!("sqrt(1 + ({})^2)", sub(rng)),
    }
}
