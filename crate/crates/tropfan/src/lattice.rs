//! Sublattices of `Z^n`, kept in row Hermite normal form.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{check_len, Error, Result};
use crate::linalg::{self, IntVector};

/// A subgroup of `Z^ambient_rank`.
///
/// The basis is the nonzero part of the row HNF of any generating set, so two
/// values are equal exactly when they describe the same subgroup.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Sublattice {
    ambient_rank: usize,
    basis: Vec<IntVector>,
}

/// Result of [`Sublattice::index_in`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Finite(BigInt),
    Infinite,
}

impl Index {
    pub fn is_finite(&self) -> bool {
        matches!(self, Index::Finite(_))
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => f.write_str("infinite"),
        }
    }
}

impl Sublattice {
    pub fn canonicalize(vectors: &[IntVector], ambient_rank: usize) -> Result<Sublattice> {
        for v in vectors {
            check_len(ambient_rank, v.len())?;
        }
        let (h, _) = linalg::hnf_with_transform(vectors, ambient_rank);
        let basis = h.into_iter().filter(|r| !linalg::is_zero_vec(r)).collect();
        Ok(Sublattice { ambient_rank, basis })
    }

    /// Subgroup generated by a list of points. Same as [`canonicalize`]: a
    /// subgroup containing the points contains their differences.
    ///
    /// [`canonicalize`]: Sublattice::canonicalize
    pub fn group_closure(points: &[IntVector], ambient_rank: usize) -> Result<Sublattice> {
        Sublattice::canonicalize(points, ambient_rank)
    }

    pub fn full(n: usize) -> Sublattice {
        Sublattice { ambient_rank: n, basis: (0..n).map(|i| linalg::unit_vec(n, i)).collect() }
    }

    pub fn zero(n: usize) -> Sublattice {
        Sublattice { ambient_rank: n, basis: Vec::new() }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    fn pivot(row: &[BigInt]) -> usize {
        row.iter().position(|x| !x.is_zero()).unwrap()
    }

    /// Coordinates of `v` in the canonical basis, if `v` is a member.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Option<IntVector>> {
        check_len(self.ambient_rank, v.len())?;
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let p = Self::pivot(row);
            let (q, r) = rest[p].div_rem(&row[p]);
            if !r.is_zero() {
                return Ok(None);
            }
            if !q.is_zero() {
                for (x, y) in rest.iter_mut().zip(row) {
                    *x -= &q * y;
                }
            }
            coords.push(q);
        }
        Ok(if linalg::is_zero_vec(&rest) { Some(coords) } else { None })
    }

    pub fn member(&self, v: &[BigInt]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    /// `self ⊆ other`.
    pub fn is_subgroup_of(&self, other: &Sublattice) -> Result<bool> {
        check_len(other.ambient_rank, self.ambient_rank)?;
        for b in &self.basis {
            if !other.member(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `[sup : self]`.
    pub fn index_in(&self, sup: &Sublattice) -> Result<Index> {
        if !self.is_subgroup_of(sup)? {
            return Err(Error::NotContained);
        }
        if self.rank() < sup.rank() {
            return Ok(Index::Infinite);
        }
        let coords: Vec<IntVector> =
            self.basis.iter().map(|b| sup.coordinates(b).map(|c| c.unwrap())).collect::<Result<_>>()?;
        Ok(Index::Finite(linalg::det(&coords).abs()))
    }

    pub fn intersect(&self, other: &Sublattice) -> Result<Sublattice> {
        check_len(self.ambient_rank, other.ambient_rank)?;
        let n = self.ambient_rank;
        if self.basis.is_empty() || other.basis.is_empty() {
            return Ok(Sublattice::zero(n));
        }
        // x = a·B1 = c·B2  <=>  (a, -c) is in the left kernel of [B1; B2].
        let mut stacked = self.basis.clone();
        stacked.extend(other.basis.iter().cloned());
        let (h, u) = linalg::hnf_with_transform(&stacked, n);
        let k = self.basis.len();
        let gens: Vec<IntVector> = h
            .iter()
            .zip(&u)
            .filter(|(hr, _)| linalg::is_zero_vec(hr))
            .map(|(_, ur)| linalg::vec_mat(&ur[..k], &self.basis, n))
            .collect();
        Sublattice::canonicalize(&gens, n)
    }

    /// `span_Q(self) ∩ Z^n`.
    pub fn saturate(&self) -> Sublattice {
        let n = self.ambient_rank;
        let perp = linalg::right_kernel(&self.basis, n);
        let back = linalg::right_kernel(&perp, n);
        Sublattice::canonicalize(&back, n).expect("kernel rows have ambient length")
    }

    pub fn is_saturated(&self) -> bool {
        &self.saturate() == self
    }

    /// Integer functionals cutting out the rational span (a basis of the
    /// orthogonal complement lattice).
    pub fn span_equations(&self) -> Vec<IntVector> {
        let perp = linalg::right_kernel(&self.basis, self.ambient_rank);
        Sublattice::canonicalize(&perp, self.ambient_rank).expect("same length").basis
    }

    /// `self ∩ span_Q(vectors)`.
    pub fn restrict_to_span(&self, vectors: &[IntVector]) -> Result<Sublattice> {
        let span = Sublattice::canonicalize(vectors, self.ambient_rank)?.saturate();
        self.intersect(&span)
    }

    /// Does `self` span the same rational subspace as `vectors`.
    pub fn spans_same_as(&self, vectors: &[IntVector]) -> Result<bool> {
        let span = Sublattice::canonicalize(vectors, self.ambient_rank)?.saturate();
        Ok(self.saturate() == span)
    }

    /// Apply an integer linear map given by `image(e_i)` for each basis vector.
    pub fn map_basis<F: Fn(&[BigInt]) -> IntVector>(&self, f: F, target_rank: usize) -> Sublattice {
        let imgs: Vec<IntVector> = self.basis.iter().map(|b| f(b)).collect();
        Sublattice::canonicalize(&imgs, target_rank).expect("map has the declared target rank")
    }

    /// The index of `self` in the saturation of its span.
    pub fn saturation_index(&self) -> BigInt {
        match self.index_in(&self.saturate()).expect("a lattice lies in its saturation") {
            Index::Finite(k) => k,
            Index::Infinite => unreachable!("saturation has the same rank"),
        }
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient_rank && self.basis.iter().enumerate().all(|(i, r)| r[i].is_one())
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }
}
