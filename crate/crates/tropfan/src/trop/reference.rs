//! Reference fans: the arrangement fan on the torus part and the join with
//! a barycentric ray used to extend a boundary subdivision over a cone.

use alloc::format;
use alloc::vec::Vec;

use crate::arrangement::chambers;
use crate::cone::Cone;
use crate::error::{check_len, Error, Result};
use crate::fan::{StackyCone, StackyFan};
use crate::linalg::{self, IntVector};

use super::PolarizedBase;

/// The complete fan on the torus part `R^r` cut out by the hyperplanes
/// `x·s = 0`, with saturated lattices.
pub fn reference_subdivision(base: &PolarizedBase, vectors: &[IntVector]) -> Result<StackyFan> {
    let r = base.torus_rank();
    for v in vectors {
        check_len(r, v.len())?;
    }
    if linalg::rank(vectors) < r {
        return Err(Error::ArrangementDegenerate);
    }
    if r == 0 {
        return Ok(StackyFan::trivial(0));
    }
    let mut basis: Vec<IntVector> = Vec::new();
    let mut rest: Vec<IntVector> = Vec::new();
    for v in vectors {
        let mut trial = basis.clone();
        trial.push(v.clone());
        if linalg::rank(&trial) == trial.len() {
            basis = trial;
        } else {
            rest.push(v.clone());
        }
    }
    let mut cells = Vec::new();
    for mask in 0u64..(1u64 << r) {
        let ineqs: Vec<IntVector> = basis
            .iter()
            .enumerate()
            .map(|(i, b)| if mask >> i & 1 == 1 { linalg::neg(b) } else { b.clone() })
            .collect();
        let sector = Cone::from_constraints(&ineqs, &[], r)?;
        cells.extend(chambers(&sector, &rest).into_iter().map(StackyCone::saturated));
    }
    StackyFan::new(r, cells)
}

/// Cones `τ + R_{>=0} b` for the boundary cones `τ`, where `b` is the sum of
/// the rays of `σ`, together with the `τ` themselves. Lattices are induced
/// from `σ`.
pub fn barycentric_join(sigma: &StackyCone, boundary: &[Cone]) -> Result<StackyFan> {
    let n = sigma.cone.ambient_rank();
    let bary = sigma.cone.interior_point();
    let mut cells = alloc::vec![sigma.restrict(&Cone::from_rays(core::slice::from_ref(&bary), n)?)];
    for t in boundary {
        check_len(n, t.ambient_rank())?;
        if !sigma.cone.contains_cone(t) || sigma.cone.smallest_face_containing(t) == sigma.cone {
            return Err(Error::Invalid(format!("{} is not in the boundary of {}", t, sigma.cone)));
        }
        let mut rays = t.rays().to_vec();
        rays.push(bary.clone());
        cells.push(sigma.restrict(&Cone::from_rays(&rays, n)?));
        cells.push(sigma.restrict(t));
    }
    StackyFan::new(n, cells)
}
