//! Split tropical semiabelian varieties over a base cone `σ0`, and stacky
//! fans compactifying them.
//!
//! Points of the total space are `(n, n', n'')` in `Z^k × Z^g × Z^r`, with
//! `n` in the base, `n'` in the abelian part (`M` and `N` identified by the
//! principal polarization) and `n''` in the torus part. The form `Q` is
//! stored as the `g × g` array of functionals `q[i][j]` on `Z^k`, and
//! `G(n)` is the symmetric matrix `G(n)[i][j] = <q[i][j], n>`.

mod avfan;
mod jacobian;
mod reference;

pub use avfan::{
    av_bir_equivalent, av_complete, av_minimal, candidate_translations, quotient_complex, validate_av_fan,
    AVStackyFan, AvReport, AvViolation, FaceMap, QuotientComplex,
};
pub use jacobian::{jacobian_form, Graph};
pub use reference::{barycentric_join, reference_subdivision};

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cone::Cone;
use crate::display::V;
use crate::error::{check_len, Error, Result};
use crate::fan::StackyCone;
use crate::lattice::Sublattice;
use crate::linalg::{self, IntVector};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolarizedBase {
    base: StackyCone,
    q: Vec<Vec<IntVector>>,
    torus_rank: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FormViolation {
    NotSymmetric { i: usize, j: usize },
    /// `m ↦ n(Q(m, m))` takes negative values for this ray generator `n`.
    NotPositiveSemidefinite { ray: IntVector },
    /// `Q(m, m)` vanishes on all of `σ0`.
    Degenerate { m: IntVector },
}

impl fmt::Display for FormViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormViolation::NotSymmetric { i, j } => write!(f, "q[{i}][{j}] differs from q[{j}][{i}]"),
            FormViolation::NotPositiveSemidefinite { ray } => {
                write!(f, "form is not positive semidefinite at ray {}", V(ray))
            }
            FormViolation::Degenerate { m } => write!(f, "Q(m,m) = 0 on the base for m = {}", V(m)),
        }
    }
}

/// Where a point `(n, n')` sits with respect to the admissible region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Admissibility {
    Admissible,
    /// `n ∈ σ0` but `n'` is not in the span of `G(n)`.
    NotAdmissible,
    /// `n ∉ σ0`.
    BaseOutside,
}

/// A cone `τ` in `Z^t` mapping to the base by `structure` (the images of the
/// unit vectors of `Z^t` in `Z^k`).
#[derive(Clone, Debug)]
pub struct TestCone {
    pub cone: Cone,
    pub structure: Vec<IntVector>,
}

impl TestCone {
    pub fn image(&self, x: &[BigInt]) -> IntVector {
        let k = self.structure.first().map_or(0, |s| s.len());
        linalg::vec_mat(x, &self.structure, k)
    }
}

impl PolarizedBase {
    pub fn new(base: StackyCone, q: Vec<Vec<IntVector>>, torus_rank: usize) -> Result<PolarizedBase> {
        let k = base.cone.ambient_rank();
        let g = q.len();
        for row in &q {
            check_len(g, row.len())?;
            for e in row {
                check_len(k, e.len())?;
            }
        }
        Ok(PolarizedBase { base, q, torus_rank })
    }

    pub fn base(&self) -> &StackyCone {
        &self.base
    }

    pub fn q(&self) -> &[Vec<IntVector>] {
        &self.q
    }

    /// `k`, the rank of the base lattice.
    pub fn base_rank(&self) -> usize {
        self.base.cone.ambient_rank()
    }

    /// `g`.
    pub fn m_rank(&self) -> usize {
        self.q.len()
    }

    /// `r`.
    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    /// `k + g + r`.
    pub fn total_rank(&self) -> usize {
        self.base_rank() + self.m_rank() + self.torus_rank
    }

    /// `G(n)`, so that `n(Q(m, m')) = m^T G(n) m'`.
    pub fn gram(&self, n: &[BigInt]) -> Vec<IntVector> {
        self.q.iter().map(|row| row.iter().map(|e| linalg::dot(e, n)).collect()).collect()
    }

    pub fn validate_form(&self) -> Vec<FormViolation> {
        let g = self.m_rank();
        let mut out = Vec::new();
        for i in 0..g {
            for j in i + 1..g {
                if self.q[i][j] != self.q[j][i] {
                    out.push(FormViolation::NotSymmetric { i, j });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for ray in self.base.cone.rays() {
            if !is_psd(&self.gram(ray)) {
                out.push(FormViolation::NotPositiveSemidefinite { ray: ray.clone() });
            }
        }
        if out.is_empty() && g > 0 {
            let stacked: Vec<IntVector> = self.base.cone.rays().iter().flat_map(|r| self.gram(r)).collect();
            if let Some(m) = linalg::right_kernel(&stacked, g).first() {
                out.push(FormViolation::Degenerate { m: linalg::primitive_normalized(m) });
            }
        }
        out
    }

    pub fn is_definite(&self) -> bool {
        self.validate_form().is_empty()
    }

    pub fn admissible_point(&self, n: &[BigInt], nprime: &[BigInt]) -> Result<Admissibility> {
        check_len(self.base_rank(), n.len())?;
        check_len(self.m_rank(), nprime.len())?;
        if !self.base.cone.contains(n) {
            return Ok(Admissibility::BaseOutside);
        }
        let gm = self.gram(n);
        let mut aug = gm.clone();
        aug.push(nprime.to_vec());
        // G(n) is symmetric, so its row span is the span of Q_hom,N(M)(n).
        Ok(if linalg::rank(&aug) == linalg::rank(&gm) {
            Admissibility::Admissible
        } else {
            Admissibility::NotAdmissible
        })
    }

    /// Is a total-space point `(n, n', n'')` in the closed admissible region.
    pub fn admissible_total(&self, x: &[BigInt]) -> Result<bool> {
        check_len(self.total_rank(), x.len())?;
        let (k, g) = (self.base_rank(), self.m_rank());
        Ok(self.admissible_point(&x[..k], &x[k..k + g])? == Admissibility::Admissible)
    }

    /// Does `φ` (given by the functionals `phi[i] = φ(e_i)` on `Z^t`) satisfy
    /// `Q_τ(m1, m) <= φ(m) <= Q_τ(m2, m)` for some `m1, m2`, for every `m`.
    ///
    /// For a fixed `m` this is a linear feasibility problem in `m2` (one row
    /// per ray of `τ`), solved exactly. It is enough to run it for `m` in
    /// bases of the kernels of `G(f(ρ))`: away from those kernels `m2 = λm`
    /// works for large `λ`.
    pub fn admissible_hom(&self, tau: &TestCone, phi: &[IntVector]) -> Result<bool> {
        let g = self.m_rank();
        check_len(g, phi.len())?;
        for p in phi {
            check_len(tau.cone.ambient_rank(), p.len())?;
        }
        let grams: Vec<Vec<IntVector>> = tau.cone.rays().iter().map(|x| self.gram(&tau.image(x))).collect();
        let mut tests: Vec<IntVector> = (0..g).map(|i| linalg::unit_vec(g, i)).collect();
        for gm in &grams {
            tests.extend(linalg::right_kernel(gm, g));
        }
        for m in &tests {
            let phi_m: IntVector = linalg::vec_mat(m, phi, tau.cone.ambient_rank());
            let a: Vec<IntVector> = grams.iter().map(|gm| linalg::mat_vec(gm, m)).collect();
            let b: IntVector = tau.cone.rays().iter().map(|x| linalg::dot(&phi_m, x)).collect();
            let upper = linalg::inequalities_feasible(&a, &b, g);
            let na: Vec<IntVector> = a.iter().map(|r| linalg::neg(r)).collect();
            let nb = linalg::neg(&b);
            let lower = linalg::inequalities_feasible(&na, &nb, g);
            if !(upper && lower) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `T_m(n, n', n'') = (n, n' + G(n) m, n'')`.
    pub fn translate_point(&self, x: &[BigInt], m: &[BigInt]) -> IntVector {
        let (k, g) = (self.base_rank(), self.m_rank());
        let shift = linalg::mat_vec(&self.gram(&x[..k]), m);
        let mut y = x.to_vec();
        for (yi, s) in y[k..k + g].iter_mut().zip(shift) {
            *yi += s;
        }
        y
    }

    pub fn translate(&self, c: &StackyCone, m: &[BigInt]) -> Result<StackyCone> {
        check_len(self.total_rank(), c.cone.ambient_rank())?;
        check_len(self.m_rank(), m.len())?;
        if linalg::is_zero_vec(m) {
            return Ok(c.clone());
        }
        let cone = self.translate_cone(&c.cone, m);
        let lattice = c.lattice.map_basis(|b| self.translate_point(b, m), self.total_rank());
        Ok(StackyCone { cone, lattice })
    }

    /// `T_m` applied to a cone of the total space.
    pub fn translate_cone(&self, c: &Cone, m: &[BigInt]) -> Cone {
        if linalg::is_zero_vec(m) {
            return c.clone();
        }
        let rays: Vec<IntVector> = c.rays().iter().map(|r| self.translate_point(r, m)).collect();
        Cone::from_rays(&rays, self.total_rank()).expect("T_m is invertible")
    }

    /// `σ0 × {0} × {0}` with the lattice `N_σ0 × 0 × 0`.
    pub fn base_cone(&self) -> StackyCone {
        let d = self.total_rank();
        let pad = |v: &IntVector| {
            let mut w = v.clone();
            w.resize(d, BigInt::zero());
            w
        };
        let rays: Vec<IntVector> = self.base.cone.rays().iter().map(pad).collect();
        let basis: Vec<IntVector> = self.base.lattice.basis().iter().map(pad).collect();
        StackyCone {
            cone: Cone::from_rays(&rays, d).expect("padding keeps the cone pointed"),
            lattice: Sublattice::canonicalize(&basis, d).expect("padded to the total rank"),
        }
    }

    /// `N_σ0 × Z^g × Z^r`.
    pub fn total_lattice(&self) -> Sublattice {
        let d = self.total_rank();
        let k = self.base_rank();
        let mut gens: Vec<IntVector> = self
            .base
            .lattice
            .basis()
            .iter()
            .map(|b| {
                let mut w = b.clone();
                w.resize(d, BigInt::zero());
                w
            })
            .collect();
        gens.extend((k..d).map(|i| linalg::unit_vec(d, i)));
        Sublattice::canonicalize(&gens, d).expect("total rank")
    }

    /// Slope coordinates, available when `σ0` is a ray and `G` is definite
    /// on it.
    pub(crate) fn slope_frame(&self) -> Result<SlopeFrame> {
        if self.base.cone.dim() != 1 {
            return Err(Error::Unsupported(format!(
                "translation-equivariant fans need a ray as base cone when g > 0 (base has dimension {})",
                self.base.cone.dim()
            )));
        }
        let n0 = self.base.cone.rays()[0].clone();
        let g0 = self.gram(&n0);
        if !is_psd(&g0) || linalg::det(&g0).is_zero() {
            return Err(Error::DefinitenessRequired);
        }
        let det = linalg::det(&g0);
        let adj = linalg::adjugate(&g0);
        let nn = linalg::dot(&n0, &n0);
        Ok(SlopeFrame { k: self.base_rank(), g: self.m_rank(), d: self.total_rank(), n0, g0, adj, det, nn })
    }
}

/// Coordinates on the total space over a ray `σ0 = R_{>=0} n0` with
/// `G0 = G(n0)` positive definite: a point `(t n0, n', n'')` with `t > 0`
/// has slope `μ = G0^{-1} n' / t`, and `T_m` adds `m` to the slope.
#[derive(Clone, Debug)]
pub(crate) struct SlopeFrame {
    pub k: usize,
    pub g: usize,
    pub d: usize,
    pub n0: IntVector,
    pub g0: Vec<IntVector>,
    pub adj: Vec<IntVector>,
    pub det: BigInt,
    pub nn: BigInt,
}

impl SlopeFrame {
    /// `n0 · n`, a positive multiple of `t`.
    pub fn height(&self, x: &[BigInt]) -> BigInt {
        linalg::dot(&self.n0, &x[..self.k])
    }

    pub fn slope(&self, x: &[BigInt]) -> Option<Vec<BigRational>> {
        let h = self.height(x);
        if h.is_zero() {
            return None;
        }
        let num = linalg::mat_vec(&self.adj, &x[self.k..self.k + self.g]);
        let den = &self.det * &h;
        Some(num.into_iter().map(|v| BigRational::new(v * &self.nn, den.clone())).collect())
    }

    /// A primitive integer functional equal to a positive multiple of
    /// `t (a + b·μ)` on the total space (ignoring the torus part).
    pub fn affine(&self, a: &BigInt, b: &[BigInt]) -> IntVector {
        let mut h = linalg::zero_vec(self.d);
        for (hj, n) in h[..self.k].iter_mut().zip(&self.n0) {
            *hj = a * &self.det * n;
        }
        let adj_b = linalg::vec_mat(b, &self.adj, self.g);
        for (hj, v) in h[self.k..self.k + self.g].iter_mut().zip(adj_b) {
            *hj = v * &self.nn;
        }
        linalg::primitive(&h)
    }

    /// `(a, b)` with `h(t n0, t G0 μ, 0) = t (a + b·μ)`. Inverse of
    /// [`affine`](Self::affine) up to a positive factor.
    pub fn to_affine(&self, h: &[BigInt]) -> (BigInt, IntVector) {
        let a = linalg::dot(&h[..self.k], &self.n0);
        let b = linalg::mat_vec(&self.g0, &h[self.k..self.k + self.g]);
        (a, b)
    }
}

/// Positive semidefiniteness of a symmetric integer matrix, by symmetric
/// pivoting over the rationals.
pub(crate) fn is_psd(m: &[IntVector]) -> bool {
    let mut a: Vec<Vec<BigRational>> =
        m.iter().map(|r| r.iter().map(|x| BigRational::from(x.clone())).collect()).collect();
    let mut active: Vec<usize> = (0..a.len()).collect();
    loop {
        let Some(pos) = active.iter().position(|&i| !a[i][i].is_zero()) else {
            return active.iter().all(|&i| active.iter().all(|&j| a[i][j].is_zero()));
        };
        let p = active.remove(pos);
        if a[p][p].is_negative() {
            return false;
        }
        let piv = a[p][p].clone();
        for &i in &active {
            for &j in &active {
                let delta = &a[i][p] * &a[p][j] / &piv;
                a[i][j] -= delta;
            }
        }
    }
}
