//! Pointed rational polyhedral cones with both descriptions kept up to date.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{check_len, Error, Result};
use crate::lattice::Sublattice;
use crate::linalg::{self, IntVector};

/// Where a point sits relative to a cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointPosition {
    Outside,
    Boundary,
    RelativeInterior,
}

/// A rational point `num / den` with `den > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoint {
    pub num: IntVector,
    pub den: BigInt,
}

impl RatPoint {
    pub fn new(num: IntVector, den: BigInt) -> Result<RatPoint> {
        if !den.is_positive() {
            return Err(Error::Invalid("rational point denominator must be positive".into()));
        }
        Ok(RatPoint { num, den })
    }
}

/// A pointed cone in `R^n`.
///
/// `rays` are primitive, extreme and sorted lexicographically. `facets` are
/// primitive functionals lying in the span of the cone (so they are unique),
/// and `equations` is the canonical integer basis of the orthogonal
/// complement of the span. Equality and ordering only look at the rays.
#[derive(Clone, Debug)]
pub struct Cone {
    n: usize,
    rays: Vec<IntVector>,
    facets: Vec<IntVector>,
    equations: Vec<IntVector>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rays == other.rays
    }
}
impl Eq for Cone {}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cone {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.rays.len(), &self.rays).cmp(&(other.n, other.rays.len(), &other.rays))
    }
}
impl Hash for Cone {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.rays.hash(state);
    }
}

/// Growable bitset for tight-constraint bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Bits {
        Bits(vec![0; len.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
}

/// Double description of `{x : a·x >= 0 for a in ineqs}`.
///
/// Returns `(lineality, rays)`: the cone is `span(lineality) + cone(rays)`,
/// the rays being extreme modulo the lineality space. Starts from all of
/// `R^n` as lineality and eats one constraint at a time.
pub(crate) fn double_description(ineqs: &[IntVector], n: usize) -> (Vec<IntVector>, Vec<IntVector>) {
    let m = ineqs.len();
    let mut lin: Vec<IntVector> = (0..n).map(|i| linalg::unit_vec(n, i)).collect();
    let mut rays: Vec<(IntVector, Bits)> = Vec::new();

    for (idx, a) in ineqs.iter().enumerate() {
        if let Some(pos) = lin.iter().position(|l| !linalg::dot(a, l).is_zero()) {
            let mut l0 = lin.swap_remove(pos);
            let mut al0 = linalg::dot(a, &l0);
            if al0.is_negative() {
                l0 = linalg::neg(&l0);
                al0 = -al0;
            }
            // project everything else into ker(a) along l0
            for l in lin.iter_mut() {
                let al = linalg::dot(a, l);
                if !al.is_zero() {
                    *l = linalg::primitive(&linalg::combine(&al0, l, &(-al), &l0));
                }
            }
            for (r, t) in rays.iter_mut() {
                let ar = linalg::dot(a, r);
                if !ar.is_zero() {
                    *r = linalg::primitive(&linalg::combine(&al0, r, &(-ar), &l0));
                }
                t.set(idx);
            }
            let mut t0 = Bits::new(m);
            for j in 0..idx {
                t0.set(j);
            }
            rays.push((linalg::primitive(&l0), t0));
            continue;
        }

        let vals: Vec<BigInt> = rays.iter().map(|(r, _)| linalg::dot(a, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, (_, t)) in rays.iter_mut().enumerate() {
                if vals[i].is_zero() {
                    t.set(idx);
                }
            }
            continue;
        }
        let mut next: Vec<(IntVector, Bits)> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].1.and(&rays[q].1);
                let adjacent = (0..rays.len())
                    .all(|r| r == p || r == q || !common.subset_of(&rays[r].1));
                if !adjacent {
                    continue;
                }
                let v = linalg::combine(&vals[p], &rays[q].0, &(-&vals[q]), &rays[p].0);
                let mut t = common;
                t.set(idx);
                next.push((linalg::primitive(&v), t));
            }
        }
        let mut kept: Vec<(IntVector, Bits)> = Vec::new();
        for (i, (r, t)) in rays.into_iter().enumerate() {
            if vals[i].is_positive() {
                kept.push((r, t));
            } else if vals[i].is_zero() {
                let mut t = t;
                t.set(idx);
                kept.push((r, t));
            }
        }
        kept.extend(next);
        rays = kept;
    }
    (lin, rays.into_iter().map(|(r, _)| r).collect())
}

/// Orthogonal projection of `h` onto the complement of span(`eqs`),
/// scaled to a primitive integer vector.
pub(crate) fn project_off(h: &[BigInt], eqs: &[IntVector]) -> IntVector {
    if eqs.is_empty() {
        return linalg::primitive(h);
    }
    // h - E^T (E E^T)^{-1} E h, times det(E E^T)
    let gram: Vec<IntVector> =
        eqs.iter().map(|a| eqs.iter().map(|b| linalg::dot(a, b)).collect()).collect();
    let d = linalg::det(&gram);
    let adj = linalg::adjugate(&gram);
    let eh = linalg::mat_vec(eqs, h);
    let y = linalg::mat_vec(&adj, &eh);
    let corr = linalg::vec_mat(&y, eqs, h.len());
    linalg::primitive(&linalg::sub(&linalg::scale(&d, h), &corr))
}

impl Cone {
    pub fn zero(n: usize) -> Cone {
        Cone {
            n,
            rays: Vec::new(),
            facets: Vec::new(),
            equations: (0..n).map(|i| linalg::unit_vec(n, i)).collect(),
        }
    }

    /// Cone generated by `rays`. Redundant and zero generators are dropped.
    pub fn from_rays(rays: &[IntVector], n: usize) -> Result<Cone> {
        for r in rays {
            check_len(n, r.len())?;
        }
        let gens: BTreeSet<IntVector> =
            rays.iter().filter(|r| !linalg::is_zero_vec(r)).map(|r| linalg::primitive(r)).collect();
        if gens.is_empty() {
            return Ok(Cone::zero(n));
        }
        let gens: Vec<IntVector> = gens.into_iter().collect();
        let (lin, dual_rays) = double_description(&gens, n);
        let mut all = lin.clone();
        all.extend(dual_rays.iter().cloned());
        if linalg::rank(&all) < n {
            return Err(Error::NotPointed);
        }
        let equations = Sublattice::canonicalize(&gens, n)?.span_equations();
        let facets: BTreeSet<IntVector> =
            dual_rays.iter().map(|h| project_off(h, &equations)).collect();
        let facets: Vec<IntVector> = facets.into_iter().collect();
        let extreme: Vec<IntVector> = gens
            .into_iter()
            .filter(|r| {
                let mut rows: Vec<IntVector> =
                    facets.iter().filter(|h| linalg::dot(h, r).is_zero()).cloned().collect();
                rows.extend(equations.iter().cloned());
                linalg::rank(&rows) == n - 1
            })
            .collect();
        Ok(Cone { n, rays: extreme, facets, equations })
    }

    /// `{x : a·x >= 0 for a in ineqs, e·x = 0 for e in eqs}`.
    pub fn from_constraints(ineqs: &[IntVector], eqs: &[IntVector], n: usize) -> Result<Cone> {
        let mut all: Vec<IntVector> = Vec::with_capacity(ineqs.len() + 2 * eqs.len());
        for e in eqs {
            check_len(n, e.len())?;
            all.push(e.clone());
            all.push(linalg::neg(e));
        }
        for a in ineqs {
            check_len(n, a.len())?;
            all.push(a.clone());
        }
        let (lin, rays) = double_description(&all, n);
        if !lin.is_empty() {
            return Err(Error::NotPointed);
        }
        Cone::from_rays(&rays, n)
    }

    pub fn ambient_rank(&self) -> usize {
        self.n
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn facets(&self) -> &[IntVector] {
        &self.facets
    }

    pub fn equations(&self) -> &[IntVector] {
        &self.equations
    }

    pub fn dim(&self) -> usize {
        self.n - self.equations.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    /// `Z^n ∩ span(self)`.
    pub fn span_lattice(&self) -> Sublattice {
        Sublattice::canonicalize(&self.rays, self.n).expect("rays have ambient length").saturate()
    }

    /// Sum of the rays: a lattice point in the relative interior.
    pub fn interior_point(&self) -> IntVector {
        self.rays.iter().fold(linalg::zero_vec(self.n), |acc, r| linalg::add(&acc, r))
    }

    pub fn position(&self, v: &[BigInt]) -> Result<PointPosition> {
        check_len(self.n, v.len())?;
        if self.equations.iter().any(|e| !linalg::dot(e, v).is_zero()) {
            return Ok(PointPosition::Outside);
        }
        let mut boundary = false;
        for h in &self.facets {
            let s = linalg::dot(h, v);
            if s.is_negative() {
                return Ok(PointPosition::Outside);
            }
            if s.is_zero() {
                boundary = true;
            }
        }
        Ok(if boundary { PointPosition::Boundary } else { PointPosition::RelativeInterior })
    }

    pub fn position_rational(&self, p: &RatPoint) -> Result<PointPosition> {
        // den > 0 so signs are those of the numerator
        self.position(&p.num)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.position(v).map(|p| p != PointPosition::Outside).unwrap_or(false)
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rays.iter().all(|r| self.contains(r))
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        check_len(self.n, other.n)?;
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        Cone::from_constraints(&ineqs, &eqs, self.n)
    }

    /// `self ∩ {h >= 0}`.
    pub fn cut(&self, h: &[BigInt]) -> Result<Cone> {
        let mut ineqs = self.facets.clone();
        ineqs.push(h.to_vec());
        Cone::from_constraints(&ineqs, &self.equations, self.n)
    }

    /// The face spanned by a subset of the rays.
    fn face_by_rays(&self, keep: &[usize]) -> Cone {
        let rays: Vec<IntVector> = keep.iter().map(|&i| self.rays[i].clone()).collect();
        Cone::from_rays(&rays, self.n).expect("faces of pointed cones are pointed")
    }

    /// All faces, from `{0}` up to the cone itself, in canonical order.
    pub fn faces(&self) -> Vec<Cone> {
        let full: Vec<usize> = (0..self.rays.len()).collect();
        let tight: Vec<BTreeSet<usize>> = self
            .facets
            .iter()
            .map(|h| full.iter().copied().filter(|&i| linalg::dot(h, &self.rays[i]).is_zero()).collect())
            .collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut stack = vec![full.clone()];
        seen.insert(full);
        while let Some(cur) = stack.pop() {
            for t in &tight {
                let next: Vec<usize> = cur.iter().copied().filter(|i| t.contains(i)).collect();
                if seen.insert(next.clone()) {
                    stack.push(next);
                }
            }
        }
        let mut faces: Vec<Cone> = seen.into_iter().map(|s| self.face_by_rays(&s)).collect();
        faces.sort();
        faces.dedup();
        faces
    }

    /// Faces of codimension one in the cone.
    pub fn facet_faces(&self) -> Vec<Cone> {
        self.facets
            .iter()
            .map(|h| {
                let keep: Vec<usize> =
                    (0..self.rays.len()).filter(|&i| linalg::dot(h, &self.rays[i]).is_zero()).collect();
                self.face_by_rays(&keep)
            })
            .collect()
    }

    /// Smallest face of `self` containing `other` (which must lie in `self`).
    pub fn smallest_face_containing(&self, other: &Cone) -> Cone {
        let keep: Vec<usize> = (0..self.rays.len())
            .filter(|&i| {
                self.facets.iter().all(|h| {
                    other.rays.iter().any(|r| !linalg::dot(h, r).is_zero())
                        || linalg::dot(h, &self.rays[i]).is_zero()
                })
            })
            .collect();
        self.face_by_rays(&keep)
    }

    pub fn is_face_of(&self, c: &Cone) -> Result<bool> {
        check_len(c.n, self.n)?;
        if !c.contains_cone(self) {
            return Ok(false);
        }
        Ok(&c.smallest_face_containing(self) == self)
    }

    pub fn common_face(&self, other: &Cone) -> Result<bool> {
        let i = self.intersect(other)?;
        Ok(i.is_face_of(self)? && i.is_face_of(other)?)
    }

    /// `{h : h·x >= 0 for x in self}`; only for full-dimensional cones.
    pub fn dual(&self) -> Result<Cone> {
        if !self.is_full_dimensional() {
            return Err(Error::DualNotPointed);
        }
        Cone::from_rays(&self.facets, self.n)
    }
}
