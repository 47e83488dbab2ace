//! Stacky fans in the total space that are invariant under the translations
//! `T_m`, stored as one representative cone per translation orbit.
//!
//! Over a ray `σ0` with `G0` definite, representatives are normalized so
//! that the slope of their interior point lies in `[0, 1)^g`; cones inside
//! `{t = 0}` are fixed by every `T_m` and kept as they are. Everything
//! beyond `g = 0` assumes such a ray base.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{FormViolation, PolarizedBase, SlopeFrame};
use crate::arrangement;
use crate::cone::Cone;
use crate::display::V;
use crate::error::{check_len, Error, Result};
use crate::fan::{induced, StackyCone, StackyFan};
use crate::lattice::Sublattice;
use crate::linalg::{self, IntVector};
use crate::minimal::{birationally_equivalent, Arrangement, Label};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AVStackyFan {
    base: PolarizedBase,
    cones: Vec<StackyCone>,
}

impl AVStackyFan {
    /// Normalize the given cones to orbit representatives and add the
    /// representatives of all their faces (with induced lattices). Given
    /// cones win over induced faces; conflicting induced copies are all
    /// kept for [`validate_av_fan`] to report.
    pub fn new(base: PolarizedBase, cones: Vec<StackyCone>) -> Result<AVStackyFan> {
        let (k, g, d) = (base.base_rank(), base.m_rank(), base.total_rank());
        for c in &cones {
            check_len(d, c.cone.ambient_rank())?;
            check_len(d, c.lattice.ambient_rank())?;
            for r in c.cone.rays() {
                if linalg::is_zero_vec(&r[..k]) && !linalg::is_zero_vec(&r[k..k + g]) {
                    return Err(Error::Invalid(format!(
                        "ray {} has zero base part but nonzero abelian part",
                        V(r)
                    )));
                }
            }
        }
        let frame = if g == 0 { None } else { base.slope_frame().ok() };
        let normal = |c: &StackyCone| canonical(&base, frame.as_ref(), c).0;
        let given: BTreeSet<StackyCone> = cones.iter().map(normal).collect();
        let shapes: BTreeSet<&Cone> = given.iter().map(|c| &c.cone).collect();
        let mut all = BTreeSet::new();
        for c in &given {
            for face in c.cone.faces() {
                if face == c.cone {
                    continue;
                }
                let f = normal(&c.restrict(&face));
                if !shapes.contains(&f.cone) {
                    all.insert(f);
                }
            }
        }
        all.extend(given.iter().cloned());
        Ok(AVStackyFan { base, cones: all.into_iter().collect() })
    }

    pub fn base(&self) -> &PolarizedBase {
        &self.base
    }

    /// Orbit representatives, sorted.
    pub fn cones(&self) -> &[StackyCone] {
        &self.cones
    }

    /// Representatives that are not a proper face of a translate of another
    /// representative.
    pub fn maximal_cones(&self) -> Vec<&StackyCone> {
        let frame = self.frame_opt();
        let mut faces: BTreeSet<Cone> = BTreeSet::new();
        for c in &self.cones {
            for f in c.cone.faces() {
                if f != c.cone {
                    faces.insert(canonical(&self.base, frame.as_ref(), &c.restrict(&f)).0.cone);
                }
            }
        }
        self.cones.iter().filter(|c| !faces.contains(&c.cone)).collect()
    }

    /// The representative of the orbit of `c`, and the `m` with
    /// `T_m c = representative`.
    pub fn representative(&self, c: &StackyCone) -> Result<(StackyCone, IntVector)> {
        check_len(self.base.total_rank(), c.cone.ambient_rank())?;
        Ok(canonical(&self.base, self.frame()?.as_ref(), c))
    }

    fn frame_opt(&self) -> Option<SlopeFrame> {
        self.frame().ok().flatten()
    }

    fn frame(&self) -> Result<Option<SlopeFrame>> {
        frame(&self.base)
    }
}

impl fmt::Display for AVStackyFan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "translation-invariant fan over Z^{} x Z^{} x Z^{} with {} orbits of cones",
            self.base.base_rank(),
            self.base.m_rank(),
            self.base.torus_rank(),
            self.cones.len()
        )
    }
}

fn frame(base: &PolarizedBase) -> Result<Option<SlopeFrame>> {
    if base.m_rank() == 0 {
        Ok(None)
    } else {
        base.slope_frame().map(Some)
    }
}

fn canonical(base: &PolarizedBase, frame: Option<&SlopeFrame>, c: &StackyCone) -> (StackyCone, IntVector) {
    let g = base.m_rank();
    let Some(f) = frame else { return (c.clone(), linalg::zero_vec(g)) };
    let Some(mu) = f.slope(&c.cone.interior_point()) else { return (c.clone(), linalg::zero_vec(g)) };
    let m: IntVector = mu.iter().map(|x| -x.floor().to_integer()).collect();
    (base.translate(c, &m).expect("dimensions checked"), m)
}

/// Lower and upper corner of a box of slopes.
type SlopeBox = (Vec<BigRational>, Vec<BigRational>);

/// Coordinatewise bounds of the slopes of the rays of `c` with positive
/// height, if there are any.
fn slope_bounds(f: &SlopeFrame, c: &Cone) -> Option<SlopeBox> {
    let mut out: Option<SlopeBox> = None;
    for r in c.rays() {
        if !f.height(r).is_positive() {
            continue;
        }
        let mu = f.slope(r).expect("positive height");
        match &mut out {
            None => out = Some((mu.clone(), mu)),
            Some((lo, hi)) => {
                for i in 0..mu.len() {
                    if mu[i] < lo[i] {
                        lo[i] = mu[i].clone();
                    }
                    if mu[i] > hi[i] {
                        hi[i] = mu[i].clone();
                    }
                }
            }
        }
    }
    out
}

/// All integer vectors in the box `[lo, hi]`, in lexicographic order.
fn integer_box(lo: &[BigInt], hi: &[BigInt]) -> Vec<IntVector> {
    let mut out = vec![Vec::new()];
    for (l, h) in lo.iter().zip(hi) {
        let mut next = Vec::new();
        for p in &out {
            let mut x = l.clone();
            while &x <= h {
                let mut q: IntVector = p.clone();
                q.push(x.clone());
                next.push(q);
                x += 1;
            }
        }
        out = next;
    }
    out
}

/// Integer `m` whose translate `T_m` moves slopes in `[lo2, hi2]` onto
/// slopes in `[lo1, hi1]` somewhere.
fn shift_box(b1: &SlopeBox, b2: &SlopeBox) -> Vec<IntVector> {
    let lo: IntVector = b1.0.iter().zip(&b2.1).map(|(a, b)| (a - b).ceil().to_integer()).collect();
    let hi: IntVector = b1.1.iter().zip(&b2.0).map(|(a, b)| (a - b).floor().to_integer()).collect();
    integer_box(&lo, &hi)
}

fn unit_cube(g: usize) -> SlopeBox {
    (vec![BigRational::zero(); g], vec![BigRational::one(); g])
}

/// The `m` for which `c1 ∩ T_m c2` has points off `{t = 0}`, together with
/// `0` when `c1 ∩ c2 ≠ {0}`. Sorted.
///
/// On `{t = 0}` every `T_m` is the identity, so `c1 ∩ T_m c2` for any other
/// `m` is `c1 ∩ c2 ∩ {t = 0}`, already seen at `m = 0`.
pub fn candidate_translations(base: &PolarizedBase, c1: &StackyCone, c2: &StackyCone) -> Result<Vec<IntVector>> {
    let d = base.total_rank();
    check_len(d, c1.cone.ambient_rank())?;
    check_len(d, c2.cone.ambient_rank())?;
    let g = base.m_rank();
    let mut out = BTreeSet::new();
    if !c1.cone.intersect(&c2.cone)?.is_zero() {
        out.insert(linalg::zero_vec(g));
    }
    if let Some(f) = frame(base)? {
        if let (Some(b1), Some(b2)) = (slope_bounds(&f, &c1.cone), slope_bounds(&f, &c2.cone)) {
            for m in shift_box(&b1, &b2) {
                let meet = c1.cone.intersect(&base.translate_cone(&c2.cone, &m))?;
                if meet.rays().iter().any(|r| f.height(r).is_positive()) {
                    out.insert(m);
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AvViolation {
    Form(FormViolation),
    NotAdmissible { cone: Cone, ray: IntVector },
    LatticeRank { cone: StackyCone },
    /// The lattice is not of finite index in the lattice points of the span,
    /// or not inside `N_σ0 × N × N'`.
    LatticeSpan { cone: StackyCone },
    MissingFace { cone: Cone, face: Cone },
    NotCommonFace { a: Cone, b: Cone, m: IntVector },
    LatticeMismatch { a: Cone, b: Cone, m: IntVector, on: Cone, first: Sublattice, second: Sublattice },
    /// `a ∩ T_m a` is not pointwise fixed by `T_m`.
    NotFixed { cone: Cone, m: IntVector, ray: IntVector },
    MissingBaseCone,
}

impl fmt::Display for AvViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AvViolation::Form(v) => write!(f, "{v}"),
            AvViolation::NotAdmissible { cone, ray } => write!(f, "ray {} of {} is not admissible", V(ray), cone),
            AvViolation::LatticeRank { cone } => write!(f, "lattice rank differs from cone dimension on {cone}"),
            AvViolation::LatticeSpan { cone } => write!(f, "lattice does not fit the span of {cone}"),
            AvViolation::MissingFace { cone, face } => {
                write!(f, "face {face} of {cone} has no representative")
            }
            AvViolation::NotCommonFace { a, b, m } => {
                write!(f, "{a} and T_{} {b} do not meet in a common face", V(m))
            }
            AvViolation::LatticeMismatch { a, b, m, on, first, second } => write!(
                f,
                "lattice mismatch on {on} between {a} ({first}) and T_{} {b} ({second})",
                V(m)
            ),
            AvViolation::NotFixed { cone, m, ray } => write!(
                f,
                "{cone} meets T_{} of itself in ray {} which T_{} moves",
                V(m),
                V(ray),
                V(m)
            ),
            AvViolation::MissingBaseCone => f.write_str("base cone is missing"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AvReport {
    pub violations: Vec<AvViolation>,
}

impl AvReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for AvReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Check the form, admissibility, lattices, face closure, the common-face
/// and fixed-point conditions for all pairs of translates, and presence of
/// the base cone.
pub fn validate_av_fan(fan: &AVStackyFan) -> Result<AvReport> {
    let base = &fan.base;
    let form = base.validate_form();
    if !form.is_empty() {
        return Ok(AvReport { violations: form.into_iter().map(AvViolation::Form).collect() });
    }
    let frame = fan.frame()?;
    let mut out = Vec::new();
    let base_cone = base.base_cone();
    if !fan.cones.contains(&base_cone) {
        out.push(AvViolation::MissingBaseCone);
    }
    let total = base.total_lattice();
    for c in &fan.cones {
        for r in c.cone.rays() {
            if !base.admissible_total(r)? {
                out.push(AvViolation::NotAdmissible { cone: c.cone.clone(), ray: r.clone() });
            }
        }
        if c.lattice.rank() != c.cone.dim() {
            out.push(AvViolation::LatticeRank { cone: c.clone() });
        } else if c.lattice.saturate() != c.cone.span_lattice() || !c.lattice.is_subgroup_of(&total)? {
            out.push(AvViolation::LatticeSpan { cone: c.clone() });
        }
    }
    let shapes: BTreeSet<&Cone> = fan.cones.iter().map(|c| &c.cone).collect();
    for c in &fan.cones {
        for face in c.cone.faces() {
            let rep = canonical(base, frame.as_ref(), &c.restrict(&face)).0;
            if !shapes.contains(&rep.cone) {
                out.push(AvViolation::MissingFace { cone: c.cone.clone(), face });
            }
        }
    }
    for (i, a) in fan.cones.iter().enumerate() {
        for b in &fan.cones[i..] {
            for m in candidate_translations(base, a, b)? {
                let tb = base.translate(b, &m)?;
                let meet = a.cone.intersect(&tb.cone)?;
                if !meet.is_face_of(&a.cone)? || !meet.is_face_of(&tb.cone)? {
                    out.push(AvViolation::NotCommonFace { a: a.cone.clone(), b: b.cone.clone(), m });
                    continue;
                }
                let (first, second) = (induced(&a.lattice, &meet), induced(&tb.lattice, &meet));
                if first != second {
                    out.push(AvViolation::LatticeMismatch {
                        a: a.cone.clone(),
                        b: b.cone.clone(),
                        m: m.clone(),
                        on: meet.clone(),
                        first,
                        second,
                    });
                }
                if a == b && !linalg::is_zero_vec(&m) {
                    let k = base.base_rank();
                    for r in meet.rays() {
                        if !linalg::is_zero_vec(&linalg::mat_vec(&base.gram(&r[..k]), &m)) {
                            out.push(AvViolation::NotFixed { cone: a.cone.clone(), m: m.clone(), ray: r.clone() });
                        }
                    }
                }
            }
        }
    }
    Ok(AvReport { violations: out })
}

/// `T_m cells[source]` is a proper face of `cells[target]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FaceMap {
    pub source: usize,
    pub target: usize,
    pub m: IntVector,
}

/// The finite cone complex of translation orbits.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuotientComplex {
    pub cells: Vec<StackyCone>,
    pub face_maps: Vec<FaceMap>,
}

impl QuotientComplex {
    /// Number of cells of each dimension, starting at 0.
    pub fn cell_counts(&self) -> Vec<usize> {
        let top = self.cells.iter().map(|c| c.cone.dim()).max().unwrap_or(0);
        let mut out = vec![0; top + 1];
        for c in &self.cells {
            out[c.cone.dim()] += 1;
        }
        out
    }

    /// Cells that are not a proper face of any cell.
    pub fn maximal_cells(&self) -> Vec<usize> {
        let sources: BTreeSet<usize> = self.face_maps.iter().map(|f| f.source).collect();
        (0..self.cells.len()).filter(|i| !sources.contains(i)).collect()
    }
}

pub fn quotient_complex(fan: &AVStackyFan) -> Result<QuotientComplex> {
    let frame = fan.frame()?;
    let mut index: BTreeMap<&Cone, usize> = BTreeMap::new();
    for (i, c) in fan.cones.iter().enumerate() {
        if index.insert(&c.cone, i).is_some() {
            return Err(Error::Normalization(format!("two representatives for the orbit of {}", c.cone)));
        }
    }
    let mut maps: BTreeMap<(usize, usize), IntVector> = BTreeMap::new();
    for (t, c) in fan.cones.iter().enumerate() {
        for face in c.cone.faces() {
            if face == c.cone {
                continue;
            }
            let (rep, shift) = canonical(&fan.base, frame.as_ref(), &c.restrict(&face));
            let Some(&s) = index.get(&rep.cone) else {
                return Err(Error::Normalization(format!("face {} of {} has no representative", face, c.cone)));
            };
            if maps.insert((s, t), linalg::neg(&shift)).is_some() {
                return Err(Error::Normalization(format!(
                    "more than one face map from {} to {}",
                    rep.cone, c.cone
                )));
            }
        }
    }
    Ok(QuotientComplex {
        cells: fan.cones.clone(),
        face_maps: maps.into_iter().map(|((source, target), m)| FaceMap { source, target, m }).collect(),
    })
}

/// Cones `σ0 × O` for the orthants `O` of the torus part, with the abelian
/// part spanned by the cube `[lo, hi]^g` of slopes (when `g > 0`).
fn slabs(base: &PolarizedBase, frame: Option<&SlopeFrame>, scale: i64, corners: &[i64]) -> Vec<Cone> {
    let (k, g, d) = (base.base_rank(), base.m_rank(), base.total_rank());
    let r = base.torus_rank();
    let mut fibre: Vec<IntVector> = Vec::new();
    match frame {
        None => {
            for ray in base.base().cone.rays() {
                let mut x = ray.clone();
                x.resize(d, BigInt::zero());
                fibre.push(x);
            }
        }
        Some(f) => {
            // (scale n0, G0 w) has slope w / scale
            let lo = vec![BigInt::from(corners[0]); g];
            let hi = vec![BigInt::from(corners[1]); g];
            for w in integer_box(&lo, &hi) {
                if w.iter().any(|x| *x != lo[0] && *x != hi[0]) {
                    continue;
                }
                let mut x = linalg::scale(&BigInt::from(scale), &f.n0);
                x.extend(linalg::mat_vec(&f.g0, &w));
                x.resize(d, BigInt::zero());
                fibre.push(x);
            }
        }
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << r) {
        let mut rays = fibre.clone();
        for j in 0..r {
            let e = linalg::unit_vec(d, k + g + j);
            rays.push(if mask >> j & 1 == 1 { linalg::neg(&e) } else { e });
        }
        out.push(Cone::from_rays(&rays, d).expect("slab cones are pointed"));
    }
    out
}

/// Does the union of the translates of the representatives cover the
/// admissible region.
///
/// For `g = 0` this is a direct covering test of `σ0 × R^r`. Otherwise every
/// maximal orbit has to be full-dimensional and every facet orbit has to
/// bound exactly two maximal cells, counted with translation.
pub fn av_complete(fan: &AVStackyFan) -> Result<bool> {
    let base = &fan.base;
    let Some(f) = fan.frame()? else {
        let cover: Vec<&Cone> = fan.cones.iter().map(|c| &c.cone).collect();
        return Ok(slabs(base, None, 1, &[0, 1]).iter().all(|s| arrangement::covers(s, &cover)));
    };
    let full = 1 + base.m_rank() + base.torus_rank();
    let max = fan.maximal_cones();
    if max.iter().any(|c| c.cone.dim() != full) {
        return Ok(false);
    }
    let mut count: BTreeMap<Cone, usize> = BTreeMap::new();
    for c in &max {
        for facet in c.cone.facet_faces() {
            let rep = canonical(base, Some(&f), &c.restrict(&facet)).0;
            *count.entry(rep.cone).or_default() += 1;
        }
    }
    Ok(!max.is_empty() && count.values().all(|&n| n == 2))
}

/// The part of the fan inside the slab of slopes in `[0, 1]^g`, as an
/// ordinary stacky fan. Its point set determines that of the whole fan.
fn slab_fan(fan: &AVStackyFan, f: &SlopeFrame) -> Result<StackyFan> {
    let base = &fan.base;
    let d = base.total_rank();
    let slab = slabs(base, Some(f), 1, &[0, 1]);
    let cube = unit_cube(base.m_rank());
    let mut cells = vec![StackyCone::saturated(Cone::zero(d))];
    for c in &fan.cones {
        let shifts = match slope_bounds(f, &c.cone) {
            Some(b) => shift_box(&cube, &b),
            None => vec![linalg::zero_vec(base.m_rank())],
        };
        for m in shifts {
            let t = base.translate(c, &m)?;
            for s in &slab {
                let cell = t.cone.intersect(s)?;
                if !cell.is_zero() {
                    cells.push(t.restrict(&cell));
                }
            }
        }
    }
    StackyFan::new(d, cells)
}

/// Equality of the point sets `S` of two fans over the same base.
pub fn av_bir_equivalent(f1: &AVStackyFan, f2: &AVStackyFan) -> Result<bool> {
    if f1.base != f2.base {
        return Err(Error::IncompatibleBase);
    }
    let d = f1.base.total_rank();
    match f1.frame()? {
        None => birationally_equivalent(
            &StackyFan::new(d, f1.cones.clone())?,
            &StackyFan::new(d, f2.cones.clone())?,
        ),
        Some(f) => birationally_equivalent(&slab_fan(f1, &f)?, &slab_fan(f2, &f)?),
    }
}

/// Slope-space hyperplane `a + b·μ = 0`, scaled to be primitive with the
/// first nonzero entry of `b` positive.
type Wall = (BigInt, IntVector);

fn normalize_wall(a: &BigInt, b: &[BigInt]) -> Wall {
    let mut v = vec![a.clone()];
    v.extend(b.iter().cloned());
    let mut v = linalg::primitive(&v);
    if b.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        v = linalg::neg(&v);
    }
    let a = v.remove(0);
    (a, v)
}

/// The orbit of a wall under translation, as `(a mod gcd(b), b)`.
fn orbit_key(w: &Wall) -> Wall {
    (w.0.mod_floor(&linalg::content(&w.1)), w.1.clone())
}

/// Members of the orbit of `w` meeting the open cube `(lo, hi)^g`, where
/// the cube is given as `lo = c0 / 2`, `hi = c1 / 2`.
fn orbit_members(w: &Wall, c0: i64, c1: i64) -> Vec<Wall> {
    let gcd = linalg::content(&w.1);
    let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
    for b in &w.1 {
        let (x, y) = (b * c0, b * c1);
        if x < y {
            lo += x;
            hi += y;
        } else {
            lo += y;
            hi += x;
        }
    }
    // 2a' must lie strictly between -hi and -lo
    let key = orbit_key(w).0;
    let mut out = Vec::new();
    let mut a = Integer::div_floor(&-&hi, &BigInt::from(2));
    while BigInt::from(2) * &a < -&lo {
        if BigInt::from(2) * &a > -&hi && a.mod_floor(&gcd) == key {
            out.push((a.clone(), w.1.clone()));
        }
        a += 1;
    }
    out
}

/// The canonical coarsening of a fan over a ray base with `g > 0` and no
/// torus part.
///
/// The slab of slopes in `[0, 1]^g` is cut by the half-integer grid and by
/// every translate of a wall across which the lattice label changes. The
/// resulting chambers are then merged greedily, possibly with translates
/// of each other, as long as labels agree, unions stay convex and the
/// resulting fan is still valid.
pub fn av_minimal(fan: &AVStackyFan) -> Result<AVStackyFan> {
    let base = &fan.base;
    let g = base.m_rank();
    if g == 0 || base.torus_rank() != 0 {
        return Err(Error::Unsupported(
            "canonical coarsening needs g > 0 and no torus part; use the ordinary minimal fan for g = 0".into(),
        ));
    }
    let f = base.slope_frame()?;
    let full = 1 + g;
    let base_cone = base.base_cone();
    for c in fan.maximal_cones() {
        if c.cone.dim() != full && c.cone != base_cone.cone {
            return Err(Error::Unsupported(format!("maximal cone {} is not full-dimensional", c.cone)));
        }
    }
    let cells: Vec<(&StackyCone, SlopeBox)> = fan
        .cones
        .iter()
        .filter(|c| c.cone.dim() == full)
        .map(|c| (c, slope_bounds(&f, &c.cone).expect("full cells have positive height")))
        .collect();
    if cells.is_empty() {
        return Ok(fan.clone());
    }

    let label = |p: &[BigInt]| -> Result<Label> {
        let mu = f.slope(p).expect("chambers lie over the interior of the base");
        let at = (mu.clone(), mu);
        let mut found: Label = None;
        for (c, bounds) in &cells {
            for m in shift_box(&at, bounds) {
                if c.cone.contains(&base.translate_point(p, &linalg::neg(&m))) {
                    let l = base.translate(c, &m)?.lattice;
                    match &found {
                        Some(prev) if *prev != l => {
                            return Err(Error::ColoringInvalid(format!("lattices {} and {} overlap at {}", prev, l, V(&p.to_vec()))))
                        }
                        _ => found = Some(l),
                    }
                }
            }
        }
        Ok(found)
    };
    let grid: Vec<Wall> = (0..g)
        .flat_map(|i| [0i64, 1, 2].map(|c| normalize_wall(&BigInt::from(-c), &linalg::scale(&BigInt::from(2), &linalg::unit_vec(g, i)))))
        .collect();
    let ambient = |ws: &BTreeSet<Wall>| -> Vec<IntVector> { ws.iter().map(|(a, b)| f.affine(a, b)).collect() };

    // walls through the slab widened to (-1/2, 3/2)^g, so that changes
    // across the slab boundary are seen from both sides
    let mut fine: BTreeSet<Wall> = grid.iter().cloned().collect();
    for (c, _) in &cells {
        for h in c.cone.facets() {
            let (a, b) = f.to_affine(h);
            if !linalg::is_zero_vec(&b) {
                fine.extend(orbit_members(&normalize_wall(&a, &b), -1, 3));
            }
        }
    }
    let fine_list: Vec<Wall> = fine.iter().cloned().collect();
    let wide = slabs(base, Some(&f), 2, &[-1, 3]);
    let arr = Arrangement::with_labels(&wide, &ambient(&fine), label)?;
    let essential: BTreeSet<Wall> = arr.essential().into_iter().map(|j| orbit_key(&fine_list[j])).collect();

    let mut coarse: BTreeSet<Wall> = grid.iter().cloned().collect();
    for w in &essential {
        coarse.extend(orbit_members(w, 0, 2));
    }
    let coarse_list: Vec<Wall> = coarse.iter().cloned().collect();
    let is_essential: Vec<bool> = coarse_list.iter().map(|w| essential.contains(&orbit_key(w))).collect();
    let slab = slabs(base, Some(&f), 1, &[0, 1]);
    let arr = Arrangement::with_labels(&slab, &ambient(&coarse), label)?;

    let mut groups: Vec<Vec<(usize, IntVector)>> =
        (0..arr.chambers.len()).map(|i| vec![(i, linalg::zero_vec(g))]).collect();
    let assemble = |groups: &[Vec<(usize, IntVector)>]| -> Result<AVStackyFan> {
        let mut out = vec![base_cone.clone()];
        for grp in groups {
            if let Some(lattice) = group_label(base, &arr, grp)? {
                out.push(StackyCone { cone: group_hull(base, &arr, grp)?, lattice });
            }
        }
        AVStackyFan::new(base.clone(), out)
    };
    let shifts = integer_box(&vec![-BigInt::one(); g], &vec![BigInt::one(); g]);
    for stage in 0..2 {
        loop {
            let mut merged = None;
            'scan: for i in 0..groups.len() {
                let Some(li) = group_label(base, &arr, &groups[i])? else { continue };
                for j in i + 1..groups.len() {
                    for m in &shifts {
                        if stage == 0 && !linalg::is_zero_vec(m) {
                            continue;
                        }
                        let moved: Vec<(usize, IntVector)> =
                            groups[j].iter().map(|(c, s)| (*c, linalg::add(s, m))).collect();
                        if group_label(base, &arr, &moved)? != Some(li.clone()) {
                            continue;
                        }
                        if stage == 0 {
                            let a: Vec<usize> = groups[i].iter().map(|x| x.0).collect();
                            let b: Vec<usize> = moved.iter().map(|x| x.0).collect();
                            if groups[i].iter().chain(&moved).any(|x| !linalg::is_zero_vec(&x.1))
                                || !arr.separating(&a, &b).iter().all(|&k| is_essential[k])
                            {
                                continue;
                            }
                        }
                        let mut u = groups[i].clone();
                        u.extend(moved);
                        if !group_convex(base, &arr, &u)? {
                            continue;
                        }
                        let mut trial = groups.clone();
                        trial[i] = u.clone();
                        trial.remove(j);
                        if validate_av_fan(&assemble(&trial)?)?.is_ok() {
                            merged = Some(trial);
                            break 'scan;
                        }
                    }
                }
            }
            match merged {
                Some(t) => groups = t,
                None => break,
            }
        }
    }
    assemble(&groups)
}

fn group_cones(base: &PolarizedBase, arr: &Arrangement, grp: &[(usize, IntVector)]) -> Vec<Cone> {
    grp.iter().map(|(i, m)| base.translate_cone(&arr.chambers[*i], m)).collect()
}

fn group_hull(base: &PolarizedBase, arr: &Arrangement, grp: &[(usize, IntVector)]) -> Result<Cone> {
    let rays: Vec<IntVector> = group_cones(base, arr, grp).iter().flat_map(|c| c.rays().to_vec()).collect();
    Cone::from_rays(&rays, base.total_rank())
}

fn group_convex(base: &PolarizedBase, arr: &Arrangement, grp: &[(usize, IntVector)]) -> Result<bool> {
    let Ok(hull) = group_hull(base, arr, grp) else { return Ok(false) };
    let parts = group_cones(base, arr, grp);
    let refs: Vec<&Cone> = parts.iter().collect();
    Ok(arrangement::covers(&hull, &refs))
}

/// Label of a group, translated to where the group sits.
fn group_label(base: &PolarizedBase, arr: &Arrangement, grp: &[(usize, IntVector)]) -> Result<Label> {
    let (i, m) = &grp[0];
    let Some(l) = &arr.labels[*i] else { return Ok(None) };
    Ok(Some(l.map_basis(|v| base.translate_point(v, m), base.total_rank())))
}
