//! Shared builders for the integration tests: small literal cones, and
//! seeded random simplicial fans.
#![allow(dead_code)]

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tropfan::linalg;
use tropfan::{ivec, Cone, IntVector, StackyCone, StackyFan, Sublattice};

pub fn cone(rays: &[&[i64]]) -> Cone {
    let n = rays[0].len();
    let v: Vec<IntVector> = rays.iter().map(|r| ivec(r)).collect();
    Cone::from_rays(&v, n).unwrap()
}

pub fn sc(rays: &[&[i64]]) -> StackyCone {
    StackyCone::saturated(cone(rays))
}

pub fn lat(basis: &[&[i64]]) -> Sublattice {
    let v: Vec<IntVector> = basis.iter().map(|r| ivec(r)).collect();
    Sublattice::canonicalize(&v, basis[0].len()).unwrap()
}

/// Maximal cones of the fan of projective space of dimension `n`.
pub fn simplex_fan(n: usize) -> Vec<Vec<IntVector>> {
    let mut rays: Vec<IntVector> = (0..n).map(|i| linalg::unit_vec(n, i)).collect();
    rays.push(vec![BigInt::from(-1); n]);
    (0..=n).map(|skip| rays.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, r)| r.clone()).collect()).collect()
}

/// Star subdivision at the sum of the rays in `tau`.
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

pub fn random_stellar(rng: &mut ChaCha8Rng, cones: &[Vec<IntVector>]) -> Vec<Vec<IntVector>> {
    let s = cones.choose(rng).unwrap();
    let k = rng.gen_range(2..=s.len().max(2));
    let mut tau: Vec<IntVector> = s.clone();
    tau.shuffle(rng);
    tau.truncate(k.min(s.len()));
    if tau.len() < 2 {
        return cones.to_vec();
    }
    stellar(cones, &tau)
}

pub fn random_complete(rng: &mut ChaCha8Rng, n: usize, steps: usize) -> Vec<Vec<IntVector>> {
    let mut cones = simplex_fan(n);
    for _ in 0..steps {
        cones = random_stellar(rng, &cones);
    }
    cones
}

/// Lattices on a simplicial fan: saturated, a multiplicity on one ray, or a
/// global index-`p` sublattice.
#[derive(Clone, Debug)]
pub enum Lattices {
    Saturated,
    Multiplicity(IntVector, i64),
    Global(IntVector, i64),
}

pub fn random_lattices(rng: &mut ChaCha8Rng, cones: &[Vec<IntVector>]) -> Lattices {
    let n = cones[0][0].len();
    match rng.gen_range(0..3) {
        0 => Lattices::Saturated,
        1 => {
            let s = cones.choose(rng).unwrap();
            Lattices::Multiplicity(s.choose(rng).unwrap().clone(), rng.gen_range(2..=4))
        }
        _ => {
            let p = rng.gen_range(2..=3);
            let f: IntVector = (0..n).map(|_| BigInt::from(rng.gen_range(0..p))).collect();
            Lattices::Global(f, p)
        }
    }
}

/// All fans built here are unimodular, so the rays generate the lattice of
/// each span and multiplicities give index `b`.
pub fn lattice_for(rays: &[IntVector], n: usize, l: &Lattices) -> Sublattice {
    match l {
        Lattices::Saturated => Sublattice::canonicalize(rays, n).unwrap(),
        Lattices::Multiplicity(ray, b) => {
            let gens: Vec<IntVector> = rays
                .iter()
                .map(|r| if r == ray { linalg::scale(&BigInt::from(*b), r) } else { r.clone() })
                .collect();
            Sublattice::canonicalize(&gens, n).unwrap()
        }
        Lattices::Global(f, p) => {
            let span = Sublattice::canonicalize(rays, n).unwrap();
            kernel_mod(f, *p, n).intersect(&span).unwrap()
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
    Sublattice::canonicalize(&gens, n).unwrap()
}

pub fn stacky(cones: &[Vec<IntVector>], l: &Lattices) -> StackyFan {
    let n = cones[0][0].len();
    let sc: Vec<StackyCone> = cones
        .iter()
        .map(|c| StackyCone::new(Cone::from_rays(c, n).unwrap(), lattice_for(c, n, l)).unwrap())
        .collect();
    StackyFan::new(n, sc).unwrap()
}
