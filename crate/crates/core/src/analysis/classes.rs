//! Curvature classes defined by invariance under `S`.
//!
//! Property (R): `R(Sx, Sy, Sz, Su) = R(x, y, z, u)`.
//! Property (R1): `R(x, y, Sz, Su) = R(x, y, z, u)`, a subclass of (R).
//!
//! Tensors with (R) for the chart structure are parametrised by six
//! numbers `R1..R6` (see [`L2Params`]).

use crate::linalg4::Tensor4;
use crate::manifold::SkewStructure;

/// The six independent components of an (R)-invariant curvature tensor:
/// `R1 = R_1313, R2 = R_1212, R3 = R_1223, R4 = R_1234, R5 = R_1213,
/// R6 = R_1224` (1-based indices).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct L2Params(pub [f64; 6]);

impl L2Params {
    pub fn new(r1: f64, r2: f64, r3: f64, r4: f64, r5: f64, r6: f64) -> Self {
        L2Params([r1, r2, r3, r4, r5, r6])
    }

    /// Parameters of the (R1) subclass: `R1 = 2R2 = 2R3 = 2R4`, `R5 = R6`.
    pub fn r1_class(r2: f64, r5: f64) -> Self {
        L2Params([2.0 * r2, r2, r2, r2, r5, r5])
    }

    pub fn r(&self, n: usize) -> f64 {
        self.0[n - 1]
    }
}

/// Orbits of component classes under `S`, 1-based `ijkh` as in the usual
/// notation. Each group holds components equal to the group's parameter.
const ORBITS: [(usize, &[[usize; 4]]); 6] = [
    (1, &[[1, 3, 1, 3], [2, 4, 2, 4]]),
    (2, &[[1, 2, 1, 2], [1, 4, 1, 4], [2, 3, 2, 3], [3, 4, 3, 4]]),
    (3, &[[1, 2, 2, 3], [1, 2, 1, 4], [1, 4, 3, 4], [2, 3, 3, 4]]),
    (4, &[[1, 2, 3, 4], [1, 4, 2, 3]]),
    (5, &[[1, 2, 1, 3], [2, 4, 1, 4], [2, 4, 2, 3], [1, 3, 3, 4]]),
    (6, &[[1, 2, 2, 4], [1, 4, 1, 3], [2, 4, 3, 4], [2, 3, 1, 3]]),
];

fn comp(r: &Tensor4, idx: [usize; 4]) -> f64 {
    r.get(idx[0] - 1, idx[1] - 1, idx[2] - 1, idx[3] - 1)
}

/// Builds the curvature tensor with the (L2) component pattern:
/// `R_1313 = R_2424 = R1`; `R_1212 = R_1414 = R_2323 = R_3434 = R2`;
/// `R_1223 = R_1214 = R_1434 = R_2334 = R3`; `R_1234 = R_1423 = R4`,
/// `R_1324 = 2 R4`; `R_1213 = R_2414 = R_2423 = R_1334 = R5`;
/// `R_1224 = R_1413 = R_2434 = R_2313 = R6`; the rest follows by symmetry.
pub fn synth_l2(p: &L2Params) -> Tensor4 {
    let mut t = Tensor4::zero();
    for (param, members) in ORBITS {
        for idx in members {
            t.set_curvature(idx[0] - 1, idx[1] - 1, idx[2] - 1, idx[3] - 1, p.r(param));
        }
    }
    t.set_curvature(0, 2, 1, 3, 2.0 * p.r(4));
    t
}

/// Reads `R1..R6` off a tensor (no check that the rest of the pattern holds).
pub fn extract_l2_params(r: &Tensor4) -> L2Params {
    L2Params(std::array::from_fn(|n| comp(r, ORBITS[n].1[0])))
}

/// `R(Se_i, Se_j, Se_k, Se_h)` for all index tuples.
pub fn s_transform(r: &Tensor4, s: &SkewStructure) -> Tensor4 {
    let m = s.matrix();
    (0..4).fold(*r, |t, slot| t.transform_slot(slot, &m))
}

/// Largest violation of property (R) over all 256 components.
pub fn check_r_invariance(r: &Tensor4, s: &SkewStructure) -> f64 {
    s_transform(r, s).max_abs_diff(r)
}

/// Largest violation of property (R1), `R(x, y, Sz, Su) = R(x, y, z, u)`.
pub fn check_r1_invariance(r: &Tensor4, s: &SkewStructure) -> f64 {
    let m = s.matrix();
    r.transform_slot(2, &m).transform_slot(3, &m).max_abs_diff(r)
}

/// Largest violation of the (L2) equalities, including the requirement
/// that the tensor is fully determined by `R1..R6`.
pub fn check_l2_components(r: &Tensor4) -> f64 {
    let mut res: f64 = 0.0;
    for (_, members) in ORBITS {
        let first = comp(r, members[0]);
        for idx in &members[1..] {
            res = res.max((comp(r, *idx) - first).abs());
        }
    }
    res = res.max((comp(r, [1, 3, 2, 4]) - 2.0 * comp(r, [1, 2, 3, 4])).abs());
    res.max(synth_l2(&extract_l2_params(r)).max_abs_diff(r))
}

/// Average of `R` over the four powers of `S` acting in all slots; the
/// result has property (R).
pub fn s_symmetrize(r: &Tensor4, s: &SkewStructure) -> Tensor4 {
    let mut acc = *r;
    let mut cur = *r;
    for _ in 1..4 {
        cur = s_transform(&cur, s);
        acc += cur;
    }
    acc.scale(0.25)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::bianchi_first_residual;

    fn rlamda() -> Tensor4 {
        let mut t = Tensor4::zero();
        for (i, j) in [(0, 1), (0, 3), (1, 2), (2, 3), (0, 2), (1, 3)] {
            t.set_curvature(i, j, i, j, 1.0);
        }
        t
    }

    #[test]
    fn constant_curvature_pattern() {
        let s = SkewStructure::chart();
        assert_eq!(synth_l2(&L2Params::new(1.0, 1.0, 0.0, 0.0, 0.0, 0.0)), rlamda());
        assert_ne!(synth_l2(&L2Params::new(0.0, 1.0, 0.0, 0.0, 0.0, 0.0)), rlamda());
        assert_eq!(synth_l2(&L2Params::default()), Tensor4::zero());
        assert!(check_r_invariance(&rlamda(), &s) < 1e-15);
    }

    #[test]
    fn synthetic_tensor_structure() {
        let p = L2Params::new(0.3, -1.1, 0.7, 2.5, -0.4, 1.9);
        let t = synth_l2(&p);
        assert_eq!(t.curvature_symmetry_residual(), 0.0);
        assert!(bianchi_first_residual(&t) < 1e-15);
        // R_1342 = -2 R4
        assert_eq!(t.get(0, 2, 3, 1), -2.0 * 2.5);
        assert_eq!(extract_l2_params(&t), p);
        assert!(check_l2_components(&t) < 1e-15);
        assert!(check_r_invariance(&t, &SkewStructure::chart()) < 1e-14);
        assert!(check_r_invariance(&t, &SkewStructure::lie_example()) < 1e-14);
    }

    #[test]
    fn r1_subclass() {
        let s = SkewStructure::chart();
        let t = synth_l2(&L2Params::r1_class(0.8, -0.3));
        assert!(check_r1_invariance(&t, &s) < 1e-15);
        let generic = synth_l2(&L2Params::new(0.3, -1.1, 0.7, 2.5, -0.4, 1.9));
        assert!(check_r1_invariance(&generic, &s) > 0.1);
        assert_eq!(check_r1_invariance(&Tensor4::zero(), &s), 0.0);
        assert!(check_r1_invariance(&rlamda(), &SkewStructure::lie_example()) > 0.5);
    }

    #[test]
    fn symmetrization_is_a_projection() {
        let s = SkewStructure::chart();
        let t = synth_l2(&L2Params::new(1.0, 2.0, 3.0, 4.0, 5.0, 6.0));
        assert!(s_symmetrize(&t, &s).max_abs_diff(&t) < 1e-13);
        assert_eq!(s_symmetrize(&Tensor4::zero(), &s), Tensor4::zero());

        let mut generic = Tensor4::zero();
        generic.set_curvature(0, 1, 0, 1, 1.0);
        generic.set_curvature(0, 2, 0, 3, 0.5);
        assert!(check_r_invariance(&generic, &s) > 0.1);
        assert!(check_l2_components(&generic) > 0.1);
        let sym = s_symmetrize(&generic, &s);
        assert!(check_r_invariance(&sym, &s) < 1e-13);
        assert!(check_l2_components(&sym) < 1e-13);
        assert!(s_symmetrize(&sym, &s).max_abs_diff(&sym) < 1e-13);
    }
}
