//! Stacky fans: cones of a fan in `R^n`, each carrying a finite-index
//! sublattice of the lattice points of its span.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::arrangement;
use crate::cone::Cone;
use crate::error::{check_len, Error, Result};
use crate::lattice::{Index, Sublattice};
use crate::linalg::IntVector;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StackyCone {
    pub cone: Cone,
    pub lattice: Sublattice,
}

impl StackyCone {
    pub fn new(cone: Cone, lattice: Sublattice) -> Result<StackyCone> {
        check_len(cone.ambient_rank(), lattice.ambient_rank())?;
        Ok(StackyCone { cone, lattice })
    }

    /// The cone with all lattice points of its span.
    pub fn saturated(cone: Cone) -> StackyCone {
        let lattice = cone.span_lattice();
        StackyCone { cone, lattice }
    }

    /// `face` with the lattice `self.lattice ∩ span(face)`.
    pub fn restrict(&self, face: &Cone) -> StackyCone {
        StackyCone { cone: face.clone(), lattice: induced(&self.lattice, face) }
    }
}

pub(crate) fn induced(lattice: &Sublattice, c: &Cone) -> Sublattice {
    lattice.intersect(&c.span_lattice()).expect("same ambient rank")
}

impl fmt::Display for StackyCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {}", self.cone, self.lattice)
    }
}

/// A stacky fan with every face stored explicitly, sorted.
///
/// Faces that were not given are filled in with the lattice induced from
/// each cone containing them. If two cones induce different lattices on a
/// face, both copies are kept so that [`StackyFan::validate`] can report
/// the conflict.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StackyFan {
    n: usize,
    cones: Vec<StackyCone>,
    /// Indices of the maximal cones.
    max: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    MissingZeroCone,
    /// `rank(lattice) != dim(cone)`.
    LatticeRank { cone: StackyCone },
    /// The lattice leaves the span of the cone or has infinite index there.
    LatticeSpan { cone: StackyCone },
    MissingFace { cone: Cone, face: Cone },
    /// `N_cone ∩ span(face)` differs from the lattice stored on `face`.
    LatticeMismatch { face: Cone, cone: Cone, induced: Sublattice, stored: Sublattice },
    NotCommonFace { a: Cone, b: Cone },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingZeroCone => f.write_str("the zero cone is missing"),
            Violation::LatticeRank { cone } => {
                write!(f, "lattice rank {} differs from dimension {} on {}", cone.lattice.rank(), cone.cone.dim(), cone)
            }
            Violation::LatticeSpan { cone } => write!(f, "lattice is not of finite index in the span of {cone}"),
            Violation::MissingFace { cone, face } => write!(f, "face {face} of {cone} is missing"),
            Violation::LatticeMismatch { face, cone, induced, stored } => write!(
                f,
                "lattice mismatch on face {face} of {cone}: induced {induced}, stored {stored}"
            ),
            Violation::NotCommonFace { a, b } => write!(f, "{a} and {b} do not meet in a common face"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for Report {
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

impl StackyFan {
    /// Build a fan from any generating cones, adding all faces.
    pub fn new(n: usize, cones: Vec<StackyCone>) -> Result<StackyFan> {
        for c in &cones {
            check_len(n, c.cone.ambient_rank())?;
        }
        let given: BTreeSet<StackyCone> = cones.into_iter().collect();
        let shapes: BTreeSet<&Cone> = given.iter().map(|c| &c.cone).collect();
        let mut all: BTreeSet<StackyCone> = BTreeSet::new();
        for c in &given {
            for face in c.cone.faces() {
                if face != c.cone && !shapes.contains(&face) {
                    all.insert(c.restrict(&face));
                }
            }
        }
        all.extend(given.iter().cloned());
        Ok(StackyFan::assemble(n, all.into_iter().collect()))
    }

    /// Build a fan from exactly the listed cones, without adding faces.
    pub fn from_all_cones(n: usize, cones: Vec<StackyCone>) -> Result<StackyFan> {
        for c in &cones {
            check_len(n, c.cone.ambient_rank())?;
        }
        let mut cones = cones;
        cones.sort();
        cones.dedup();
        Ok(StackyFan::assemble(n, cones))
    }

    fn assemble(n: usize, cones: Vec<StackyCone>) -> StackyFan {
        let max = (0..cones.len())
            .filter(|&i| {
                let c = &cones[i].cone;
                !cones.iter().any(|d| d.cone != *c && d.cone.dim() >= c.dim() && d.cone.contains_cone(c))
            })
            .collect();
        StackyFan { n, cones, max }
    }

    /// The fan with only the zero cone.
    pub fn trivial(n: usize) -> StackyFan {
        StackyFan::assemble(n, alloc::vec![StackyCone::saturated(Cone::zero(n))])
    }

    pub fn ambient_rank(&self) -> usize {
        self.n
    }

    pub fn cones(&self) -> &[StackyCone] {
        &self.cones
    }

    /// Cones that are not strictly contained in another cone of the fan.
    pub fn maximal_cones(&self) -> Vec<&StackyCone> {
        self.max.iter().map(|&i| &self.cones[i]).collect()
    }

    /// Distinct underlying cones of the maximal stacky cones.
    fn maximal_shapes(&self) -> Vec<&Cone> {
        let mut v: Vec<&Cone> = self.maximal_cones().into_iter().map(|c| &c.cone).collect();
        v.dedup();
        v
    }

    /// Lattice stored on `c`, if `c` is a cone of the fan (the first one if
    /// there are conflicting copies).
    pub fn lattice_of(&self, c: &Cone) -> Option<&Sublattice> {
        self.cones.iter().find(|s| &s.cone == c).map(|s| &s.lattice)
    }

    pub fn validate(&self) -> Report {
        let mut out = Vec::new();
        if !self.cones.iter().any(|c| c.cone.is_zero()) {
            out.push(Violation::MissingZeroCone);
        }
        let mut by_shape: BTreeMap<&Cone, Vec<&StackyCone>> = BTreeMap::new();
        for c in &self.cones {
            by_shape.entry(&c.cone).or_default().push(c);
        }
        for c in &self.cones {
            if c.lattice.rank() != c.cone.dim() {
                out.push(Violation::LatticeRank { cone: c.clone() });
            } else if c.lattice.saturate() != c.cone.span_lattice() {
                out.push(Violation::LatticeSpan { cone: c.clone() });
            }
        }
        for c in &self.cones {
            for face in c.cone.faces() {
                let Some(stored) = by_shape.get(&face) else {
                    out.push(Violation::MissingFace { cone: c.cone.clone(), face });
                    continue;
                };
                let induced = induced(&c.lattice, &face);
                for s in stored {
                    if s.lattice != induced {
                        out.push(Violation::LatticeMismatch {
                            face: face.clone(),
                            cone: c.cone.clone(),
                            induced: induced.clone(),
                            stored: s.lattice.clone(),
                        });
                    }
                }
            }
        }
        // Faces of maximal cones meet well once the maximal cones do.
        let max = self.maximal_shapes();
        for (i, a) in max.iter().enumerate() {
            for b in &max[i + 1..] {
                if !a.common_face(b).expect("same ambient rank") {
                    out.push(Violation::NotCommonFace { a: (*a).clone(), b: (*b).clone() });
                }
            }
        }
        Report { violations: out }
    }

    pub fn support_member(&self, v: &[BigInt]) -> Result<bool> {
        check_len(self.n, v.len())?;
        Ok(self.cones.iter().any(|c| c.cone.contains(v)))
    }

    /// `v ∈ σ ∩ N_σ` for some cone `σ`.
    pub fn s_member(&self, v: &[BigInt]) -> Result<bool> {
        check_len(self.n, v.len())?;
        for c in &self.cones {
            if c.cone.contains(v) && c.lattice.member(v)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// A lattice point of `c` outside the support, if any.
    pub fn uncovered_point(&self, c: &Cone) -> Result<Option<IntVector>> {
        check_len(self.n, c.ambient_rank())?;
        Ok(arrangement::uncovered_point(c, &self.maximal_shapes()))
    }

    pub fn support_contains_cone(&self, c: &Cone) -> Result<bool> {
        Ok(self.uncovered_point(c)?.is_none())
    }

    /// A lattice point in exactly one of the two supports, if any.
    pub fn support_difference(&self, other: &StackyFan) -> Result<Option<IntVector>> {
        check_len(self.n, other.n)?;
        for (a, b) in [(self, other), (other, self)] {
            for c in a.maximal_shapes() {
                if let Some(p) = b.uncovered_point(c)? {
                    return Ok(Some(p));
                }
            }
        }
        Ok(None)
    }

    pub fn same_support(&self, other: &StackyFan) -> Result<bool> {
        Ok(self.support_difference(other)?.is_none())
    }

    /// Ridge-pairing test: all maximal cones are full-dimensional and each of
    /// their facets lies in exactly two of them.
    pub fn is_complete(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let max = self.maximal_shapes();
        if max.iter().any(|c| c.dim() != self.n) {
            return false;
        }
        let mut count: BTreeMap<Cone, usize> = BTreeMap::new();
        for c in &max {
            for f in c.facet_faces() {
                *count.entry(f).or_default() += 1;
            }
        }
        !max.is_empty() && count.values().all(|&k| k == 2)
    }

    /// A maximal cone containing `c`.
    fn container(&self, c: &Cone) -> Option<&StackyCone> {
        self.maximal_cones().into_iter().find(|s| s.cone.contains_cone(c))
    }

    /// Same support, every cone inside a coarse cone, lattices induced.
    pub fn is_subdivision_of(&self, coarse: &StackyFan) -> Result<bool> {
        check_len(coarse.n, self.n)?;
        for c in &self.cones {
            match coarse.container(&c.cone) {
                Some(s) if induced(&s.lattice, &c.cone) == c.lattice => {}
                _ => return Ok(false),
            }
        }
        coarse.same_support(self)
    }

    /// Same cones, each fine lattice of finite index in the coarse one.
    pub fn is_root_construction_of(&self, coarse: &StackyFan) -> Result<bool> {
        check_len(coarse.n, self.n)?;
        let shapes = |f: &StackyFan| f.cones.iter().map(|c| c.cone.clone()).collect::<BTreeSet<_>>();
        if shapes(self) != shapes(coarse) {
            return Ok(false);
        }
        for c in &self.cones {
            for d in coarse.cones.iter().filter(|d| d.cone == c.cone) {
                match c.lattice.index_in(&d.lattice) {
                    Ok(Index::Finite(_)) => {}
                    _ => return Ok(false),
                }
            }
        }
        Ok(true)
    }

    /// Overlay of two fans with equal supports. Each cell carries
    /// `N_1 ∩ N_2 ∩ span(cell)`.
    pub fn common_refinement(&self, other: &StackyFan) -> Result<StackyFan> {
        if !self.same_support(other)? {
            return Err(Error::SupportMismatch);
        }
        let mut cells = Vec::new();
        for a in self.maximal_cones() {
            for b in other.maximal_cones() {
                let c = a.cone.intersect(&b.cone)?;
                if c.is_zero() && !cells.is_empty() {
                    continue;
                }
                let l = a.lattice.intersect(&b.lattice)?;
                cells.push(StackyCone { lattice: induced(&l, &c), cone: c });
            }
        }
        StackyFan::new(self.n, cells)
    }
}

/// An inclusion of stacky fans over the identity of `Z^n`.
#[derive(Clone, Debug)]
pub struct FanMorphismData {
    pub source: StackyFan,
    pub target: StackyFan,
}

impl FanMorphismData {
    pub fn new(source: StackyFan, target: StackyFan) -> Result<FanMorphismData> {
        check_len(target.n, source.n)?;
        Ok(FanMorphismData { source, target })
    }

    /// Every source cone sits in a target cone and its lattice maps into the
    /// target lattice.
    pub fn is_valid(&self) -> bool {
        self.source.cones.iter().all(|c| match self.target.container(&c.cone) {
            Some(s) => c.lattice.is_subgroup_of(&s.lattice).unwrap_or(false),
            None => false,
        })
    }

    /// Lattices are the full restrictions of the target lattices.
    pub fn is_representable(&self) -> bool {
        self.source.cones.iter().all(|c| match self.target.container(&c.cone) {
            Some(s) => induced(&s.lattice, &c.cone) == c.lattice,
            None => false,
        })
    }

    /// Each target cone is covered by the source cones inside it.
    pub fn is_proper(&self) -> bool {
        self.target.maximal_shapes().into_iter().all(|s| {
            let inside: Vec<&Cone> =
                self.source.cones.iter().map(|c| &c.cone).filter(|c| s.contains_cone(c)).collect();
            arrangement::covers(s, &inside)
        })
    }
}

impl fmt::Display for StackyFan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fan in Z^{} with {} cones", self.n, self.cones.len())
    }
}
