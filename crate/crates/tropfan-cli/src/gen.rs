//! Seeded random inputs: unimodular simplicial fans built by stellar
//! subdivision of the projective-space fan, and lattices on them.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tropfan::linalg;
use tropfan::{Cone, IntVector, StackyCone, StackyFan, Sublattice};

/// Maximal cones (as ray lists) of the fan of projective `n`-space.
pub fn simplex_fan(n: usize) -> Vec<Vec<IntVector>> {
    let mut rays: Vec<IntVector> = (0..n).map(|i| linalg::unit_vec(n, i)).collect();
    rays.push(vec![BigInt::from(-1); n]);
    (0..=n).map(|skip| rays.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, r)| r.clone()).collect()).collect()
}

/// Star subdivision at the primitive sum of the rays in `tau`.
pub fn stellar(cones: &[Vec<IntVector>], tau: &[IntVector]) -> Vec<Vec<IntVector>> {
    let n = tau[0].len();
    let v = linalg::primitive(&tau.iter().fold(linalg::zero_vec(n), |acc, r| linalg::add(&acc, r)));
    let mut out = Vec::new();
    for s in cones {
        if tau.iter().all(|r| s.contains(r)) {
            for rho in tau {
                let mut c: Vec<IntVector> = s.iter().filter(|r| *r != rho).cloned().collect();
                c.push(v.clone());
                out.push(c);
            }
        } else {
            out.push(s.clone());
        }
    }
    out
}

/// Star subdivision at a random face (of dimension at least 2) of a random
/// maximal cone.
pub fn random_stellar(rng: &mut ChaCha8Rng, cones: &[Vec<IntVector>]) -> Vec<Vec<IntVector>> {
    let s = cones.choose(rng).expect("nonempty fan");
    if s.len() < 2 {
        return cones.to_vec();
    }
    let k = rng.gen_range(2..=s.len());
    let mut tau = s.clone();
    tau.shuffle(rng);
    tau.truncate(k);
    stellar(cones, &tau)
}

pub fn random_complete(rng: &mut ChaCha8Rng, n: usize, steps: usize) -> Vec<Vec<IntVector>> {
    let mut cones = simplex_fan(n);
    for _ in 0..steps {
        cones = random_stellar(rng, &cones);
    }
    cones
}

/// Lattices on a unimodular simplicial fan.
#[derive(Clone, Debug)]
pub enum Lattices {
    Saturated,
    /// Multiply one ray by `b` in every cone containing it.
    Multiplicity(IntVector, i64),
    /// Intersect everything with `{x : f·x ≡ 0 mod p}`.
    Global(IntVector, i64),
}

pub fn random_lattices(rng: &mut ChaCha8Rng, cones: &[Vec<IntVector>]) -> Lattices {
    let n = cones[0][0].len();
    match rng.gen_range(0..3) {
        0 => Lattices::Saturated,
        1 => {
            let s = cones.choose(rng).expect("nonempty fan");
            Lattices::Multiplicity(s.choose(rng).expect("nonzero cone").clone(), rng.gen_range(2..=4))
        }
        _ => {
            let p = rng.gen_range(2..=3);
            let f: IntVector = (0..n).map(|_| BigInt::from(rng.gen_range(0..p))).collect();
            Lattices::Global(f, p)
        }
    }
}

/// The rays of a unimodular cone generate its lattice, so a multiplicity
/// `b` gives index `b`.
pub fn lattice_for(rays: &[IntVector], n: usize, l: &Lattices) -> Sublattice {
    match l {
        Lattices::Saturated => Sublattice::canonicalize(rays, n).expect("ranks match"),
        Lattices::Multiplicity(ray, b) => {
            let gens: Vec<IntVector> =
                rays.iter().map(|r| if r == ray { linalg::scale(&BigInt::from(*b), r) } else { r.clone() }).collect();
            Sublattice::canonicalize(&gens, n).expect("ranks match")
        }
        Lattices::Global(f, p) => {
            let span = Sublattice::canonicalize(rays, n).expect("ranks match");
            kernel_mod(f, *p, n).intersect(&span).expect("ranks match")
        }
    }
}

/// `{x : f·x ≡ 0 mod p}` for a prime `p`.
pub fn kernel_mod(f: &[BigInt], p: i64, n: usize) -> Sublattice {
    let mut gens: Vec<IntVector> = (0..n).map(|i| linalg::scale(&BigInt::from(p), &linalg::unit_vec(n, i))).collect();
    for i in 0..n {
        for j in i + 1..n {
            let mut v = linalg::zero_vec(n);
            v[i] += &f[j];
            v[j] -= &f[i];
            gens.push(v);
        }
    }
    Sublattice::canonicalize(&gens, n).expect("ranks match")
}

pub fn stacky(cones: &[Vec<IntVector>], l: &Lattices) -> StackyFan {
    let n = cones[0][0].len();
    let sc: Vec<StackyCone> = cones
        .iter()
        .map(|c| {
            let cone = Cone::from_rays(c, n).expect("simplicial cones are pointed");
            StackyCone::new(cone, lattice_for(c, n, l)).expect("lattice fits its cone")
        })
        .collect();
    StackyFan::new(n, sc).expect("ranks match")
}

/// Restrict the lattices of `f` to the cones `shapes`, each of which must
/// sit inside a maximal cone of `f`.
pub fn refine_to(f: &StackyFan, shapes: &[Vec<IntVector>]) -> StackyFan {
    let n = f.ambient_rank();
    let cells: Vec<StackyCone> = shapes
        .iter()
        .map(|rays| {
            let c = Cone::from_rays(rays, n).expect("simplicial cones are pointed");
            let parent = f.maximal_cones().into_iter().find(|m| m.cone.contains_cone(&c)).expect("a refinement");
            parent.restrict(&c)
        })
        .collect();
    StackyFan::new(n, cells).expect("ranks match")
}

/// Intersect every lattice of `f` with `{x : g·x ≡ 0 mod p}`.
pub fn root(f: &StackyFan, g: &[BigInt], p: i64) -> StackyFan {
    let n = f.ambient_rank();
    let k = kernel_mod(g, p, n);
    let cells = f
        .cones()
        .iter()
        .map(|c| StackyCone::new(c.cone.clone(), c.lattice.intersect(&k).expect("ranks match")).expect("same span"))
        .collect();
    StackyFan::from_all_cones(n, cells).expect("ranks match")
}

/// A random nonzero functional with entries in `0..p` (so the root is
/// proper on every full-dimensional cone).
pub fn random_root_functional(rng: &mut ChaCha8Rng, n: usize, p: i64) -> IntVector {
    loop {
        let f: IntVector = (0..n).map(|_| BigInt::from(rng.gen_range(0..p))).collect();
        if !linalg::is_zero_vec(&f) {
            return f;
        }
    }
}
