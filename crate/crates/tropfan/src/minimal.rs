//! Minimal fans: the canonical representative of the birational class of a
//! stacky fan, which is the same thing as its point set
//! `S = ∪ σ ∩ N_σ`.
//!
//! For every linear span `W` of a maximal cone, `W` is cut into chambers by
//! the coordinate hyperplanes and by the walls across which the lattice
//! label changes (labels being the stored lattice, or "outside the
//! support"). Both are determined by `S`. Same-label chambers are then
//! merged greedily in a fixed order while the union stays a pointed convex
//! cone.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arrangement::{self, chambers, normalize_hyperplanes, sign_on};
use crate::cone::{project_off, Cone};
use crate::display::V;
use crate::error::{check_len, Error, Result};
use crate::fan::{induced, StackyCone, StackyFan};
use crate::lattice::Sublattice;
use crate::linalg::{self, IntVector};

/// Canonical pieces of a birational class. Two values are equal exactly when
/// their point sets are.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MinimalFan {
    n: usize,
    pieces: Vec<StackyCone>,
}

/// Full-rank sublattices, each colouring a union of full-dimensional cones.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SublatticeColoring {
    n: usize,
    colors: BTreeMap<Sublattice, Vec<Cone>>,
}

impl SublatticeColoring {
    pub fn new(n: usize, colors: BTreeMap<Sublattice, Vec<Cone>>) -> Result<SublatticeColoring> {
        for (l, region) in &colors {
            check_len(n, l.ambient_rank())?;
            for c in region {
                check_len(n, c.ambient_rank())?;
            }
        }
        let colors = colors
            .into_iter()
            .map(|(l, mut r)| {
                r.sort();
                r.dedup();
                (l, r)
            })
            .collect();
        Ok(SublatticeColoring { n, colors })
    }

    pub fn ambient_rank(&self) -> usize {
        self.n
    }

    pub fn colors(&self) -> &BTreeMap<Sublattice, Vec<Cone>> {
        &self.colors
    }
}

pub(crate) type Label = Option<Sublattice>;

fn orthants_in(n: usize, eqs: &[IntVector]) -> Vec<Cone> {
    let dim = n - eqs.len();
    let mut out = BTreeSet::new();
    for mask in 0u64..(1u64 << n) {
        let ineqs: Vec<IntVector> = (0..n)
            .map(|i| {
                let e = linalg::unit_vec(n, i);
                if mask >> i & 1 == 1 {
                    linalg::neg(&e)
                } else {
                    e
                }
            })
            .collect();
        let c = Cone::from_constraints(&ineqs, eqs, n).expect("orthants are pointed");
        if c.dim() == dim {
            out.insert(c);
        }
    }
    out.into_iter().collect()
}

fn label_at(p: &[BigInt], cells: &[&StackyCone]) -> Result<Label> {
    let mut found: Option<&Sublattice> = None;
    for c in cells.iter().filter(|c| c.cone.contains(p)) {
        match found {
            Some(l) if *l != c.lattice => {
                return Err(Error::ColoringInvalid(format!(
                    "lattices {} and {} overlap at {}",
                    l,
                    c.lattice,
                    V(&p.to_vec())
                )))
            }
            _ => found = Some(&c.lattice),
        }
    }
    Ok(found.cloned())
}

pub(crate) struct Arrangement {
    pub chambers: Vec<Cone>,
    pub signs: Vec<Vec<i8>>,
    pub labels: Vec<Label>,
}

impl Arrangement {
    fn new(domain: &[Cone], hs: &[IntVector], cells: &[&StackyCone]) -> Result<Arrangement> {
        Arrangement::with_labels(domain, hs, |p| label_at(p, cells))
    }

    pub fn with_labels<F>(domain: &[Cone], hs: &[IntVector], label: F) -> Result<Arrangement>
    where
        F: Fn(&[BigInt]) -> Result<Label>,
    {
        let mut chs: Vec<Cone> = domain.iter().flat_map(|d| chambers(d, hs)).collect();
        chs.sort();
        let signs = chs.iter().map(|c| hs.iter().map(|h| sign_on(c, h)).collect()).collect();
        let labels = chs.iter().map(|c| label(&c.interior_point())).collect::<Result<_>>()?;
        Ok(Arrangement { chambers: chs, signs, labels })
    }

    /// Indices of hyperplanes across which the label changes somewhere.
    pub fn essential(&self) -> BTreeSet<usize> {
        let index: BTreeMap<&Vec<i8>, usize> = self.signs.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut out = BTreeSet::new();
        for (i, s) in self.signs.iter().enumerate() {
            for j in 0..s.len() {
                if out.contains(&j) {
                    continue;
                }
                let mut t = s.clone();
                t[j] = -t[j];
                if let Some(&k) = index.get(&t) {
                    if self.labels[i] != self.labels[k] {
                        out.insert(j);
                    }
                }
            }
        }
        out
    }

    /// Is the union of these chambers convex: it must equal the set of all
    /// chambers on the same side of every hyperplane it does not cross.
    pub fn convex(&self, members: &[usize]) -> bool {
        let m = self.signs[members[0]].len();
        let common: Vec<Option<i8>> = (0..m)
            .map(|j| {
                let s = self.signs[members[0]][j];
                members.iter().all(|&k| self.signs[k][j] == s).then_some(s)
            })
            .collect();
        let hull = self
            .signs
            .iter()
            .filter(|s| s.iter().zip(&common).all(|(x, c)| c.is_none_or(|c| *x == c)))
            .count();
        hull == members.len()
    }

    pub fn separating(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        let m = self.signs[a[0]].len();
        (0..m)
            .filter(|&j| {
                let s = self.signs[a[0]][j];
                a.iter().all(|&k| self.signs[k][j] == s) && b.iter().all(|&k| self.signs[k][j] == -s)
            })
            .collect()
    }

    pub fn hull(&self, members: &[usize]) -> Result<Cone> {
        let rays: Vec<IntVector> = members.iter().flat_map(|&k| self.chambers[k].rays().iter().cloned()).collect();
        Cone::from_rays(&rays, self.chambers[members[0]].ambient_rank())
    }
}

/// Pieces of one span `W`, given by its equations.
fn pieces_in_span(n: usize, eqs: &[IntVector], cells: &[&StackyCone]) -> Result<Vec<StackyCone>> {
    let domain = orthants_in(n, eqs);
    let coords = normalize_hyperplanes(
        (0..n).map(|i| project_off(&linalg::unit_vec(n, i), eqs)).collect::<Vec<_>>().iter(),
    );
    let mut all = coords.clone();
    all.extend(cells.iter().flat_map(|c| c.cone.facets().iter().cloned()));
    let all = normalize_hyperplanes(all.iter());
    let fine = Arrangement::new(&domain, &all, cells)?;
    let essential: BTreeSet<IntVector> = fine.essential().into_iter().map(|j| all[j].clone()).collect();

    let mut hs = coords;
    hs.extend(essential.iter().cloned());
    let hs = normalize_hyperplanes(hs.iter());
    let is_essential: Vec<bool> = hs.iter().map(|h| essential.contains(h)).collect();
    let coarse = Arrangement::new(&domain, &hs, cells)?;

    let mut groups: Vec<Vec<usize>> = (0..coarse.chambers.len()).map(|i| alloc::vec![i]).collect();
    for stage in 0..2 {
        loop {
            let mut merged = None;
            'scan: for i in 0..groups.len() {
                let li = &coarse.labels[groups[i][0]];
                if li.is_none() {
                    continue;
                }
                for j in i + 1..groups.len() {
                    if coarse.labels[groups[j][0]] != *li {
                        continue;
                    }
                    let sep = coarse.separating(&groups[i], &groups[j]);
                    if stage == 0 && !sep.iter().all(|&k| is_essential[k]) {
                        continue;
                    }
                    let mut u = groups[i].clone();
                    u.extend(groups[j].iter().copied());
                    if coarse.convex(&u) && coarse.hull(&u).is_ok() {
                        merged = Some((i, j, u));
                        break 'scan;
                    }
                }
            }
            match merged {
                Some((i, j, u)) => {
                    groups[i] = u;
                    groups.remove(j);
                }
                None => break,
            }
        }
    }
    groups
        .iter()
        .filter_map(|g| coarse.labels[g[0]].clone().map(|l| (g, l)))
        .map(|(g, l)| Ok(StackyCone { cone: coarse.hull(g)?, lattice: l }))
        .collect()
}

/// Canonical pieces for `cells`, one group of pieces per listed span.
fn canonical(n: usize, cells: &[StackyCone], spans: BTreeSet<Vec<IntVector>>) -> Result<MinimalFan> {
    let mut pieces = Vec::new();
    for eqs in &spans {
        let in_span: Vec<&StackyCone> = cells.iter().filter(|c| c.cone.equations() == &eqs[..]).collect();
        pieces.extend(pieces_in_span(n, eqs, &in_span)?);
    }
    pieces.sort();
    pieces.dedup();
    Ok(MinimalFan { n, pieces })
}

impl MinimalFan {
    /// Re-canonicalize an arbitrary list of pieces with pairwise compatible
    /// lattices. Feeding back the pieces of a minimal fan returns it.
    pub fn from_pieces(n: usize, pieces: Vec<StackyCone>) -> Result<MinimalFan> {
        for p in &pieces {
            check_len(n, p.cone.ambient_rank())?;
            check_len(n, p.lattice.ambient_rank())?;
            if p.lattice.saturate() != p.cone.span_lattice() {
                return Err(Error::ColoringInvalid(format!("lattice {} does not fit {}", p.lattice, p.cone)));
            }
        }
        let spans = pieces.iter().map(|p| p.cone.equations().to_vec()).collect();
        canonical(n, &pieces, spans)
    }

    pub fn ambient_rank(&self) -> usize {
        self.n
    }

    pub fn pieces(&self) -> &[StackyCone] {
        &self.pieces
    }

    /// Pieces grouped by lattice.
    pub fn colors(&self) -> BTreeMap<Sublattice, Vec<Cone>> {
        let mut out: BTreeMap<Sublattice, Vec<Cone>> = BTreeMap::new();
        for p in &self.pieces {
            out.entry(p.lattice.clone()).or_default().push(p.cone.clone());
        }
        out
    }

    pub fn member(&self, v: &[BigInt]) -> Result<bool> {
        check_len(self.n, v.len())?;
        for p in &self.pieces {
            if p.cone.contains(v) && p.lattice.member(v)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Do the full-dimensional pieces cover `R^n`.
    pub fn is_complete(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let full: Vec<&Cone> = self.pieces.iter().map(|p| &p.cone).filter(|c| c.is_full_dimensional()).collect();
        orthants_in(self.n, &[]).iter().all(|o| arrangement::covers(o, &full))
    }

    pub fn to_coloring(&self) -> Result<SublatticeColoring> {
        if !self.is_complete() {
            return Err(Error::CompletenessRequired);
        }
        let colors = self.colors().into_iter().filter(|(l, _)| l.rank() == self.n).collect();
        SublatticeColoring::new(self.n, colors)
    }
}

pub fn minimal_fan(fan: &StackyFan) -> Result<MinimalFan> {
    let spans = fan.maximal_cones().iter().map(|c| c.cone.equations().to_vec()).collect();
    canonical(fan.ambient_rank(), fan.cones(), spans)
}

pub fn to_coloring(fan: &StackyFan) -> Result<SublatticeColoring> {
    if !fan.is_complete() {
        return Err(Error::CompletenessRequired);
    }
    let mut colors: BTreeMap<Sublattice, Vec<Cone>> = BTreeMap::new();
    for c in fan.maximal_cones() {
        colors.entry(c.lattice.clone()).or_default().push(c.cone.clone());
    }
    SublatticeColoring::new(fan.ambient_rank(), colors)
}

pub fn from_coloring(c: &SublatticeColoring) -> Result<MinimalFan> {
    let n = c.n;
    let mut cells = Vec::new();
    for (l, region) in &c.colors {
        if l.rank() != n {
            return Err(Error::ColoringInvalid(format!("lattice {l} is not of full rank")));
        }
        for cone in region {
            if !cone.is_full_dimensional() {
                return Err(Error::ColoringInvalid(format!("region cone {cone} is not full-dimensional")));
            }
            cells.push(StackyCone { cone: cone.clone(), lattice: l.clone() });
        }
    }
    let spans = [Vec::new()].into_iter().collect();
    canonical(n, &cells, spans)
}

pub fn minimal_set_member(v: &[BigInt], m: &MinimalFan) -> Result<bool> {
    m.member(v)
}

pub fn coloring_is_complete(m: &MinimalFan) -> bool {
    m.is_complete()
}

/// Do the two fans have the same point set.
pub fn birationally_equivalent(f1: &StackyFan, f2: &StackyFan) -> Result<bool> {
    Ok(overlay_difference(f1, f2)?.is_none())
}

enum Difference {
    /// A lattice point of the first support missing from the second.
    Support(IntVector),
    /// The two lattices restricted to `cell` differ.
    Lattice { cell: Cone, first: Sublattice, second: Sublattice },
}

fn overlay_difference(f1: &StackyFan, f2: &StackyFan) -> Result<Option<Difference>> {
    check_len(f1.ambient_rank(), f2.ambient_rank())?;
    for (a, b) in [(f1, f2), (f2, f1)] {
        for c in a.maximal_cones() {
            if let Some(p) = b.uncovered_point(&c.cone)? {
                let k = c.lattice.saturation_index();
                return Ok(Some(Difference::Support(linalg::scale(&k, &p))));
            }
        }
    }
    for a in f1.maximal_cones() {
        for b in f2.maximal_cones() {
            let cell = a.cone.intersect(&b.cone)?;
            let first = induced(&a.lattice, &cell);
            let second = induced(&b.lattice, &cell);
            if first != second {
                return Ok(Some(Difference::Lattice { cell, first, second }));
            }
        }
    }
    Ok(None)
}

/// A lattice point in exactly one of the two point sets, or `None` when the
/// fans are birationally equivalent.
///
/// Small points are tried first (by sup-norm shells up to radius 4, each
/// in lexicographic order); otherwise a point is built from the first
/// difference found by the overlay.
pub fn equivalence_witness(f1: &StackyFan, f2: &StackyFan) -> Result<Option<IntVector>> {
    let Some(diff) = overlay_difference(f1, f2)? else {
        return Ok(None);
    };
    let n = f1.ambient_rank();
    for r in 1..=4i64 {
        for p in shell(n, r) {
            if f1.s_member(&p)? != f2.s_member(&p)? {
                return Ok(Some(p));
            }
        }
    }
    Ok(Some(match diff {
        Difference::Support(p) => p,
        Difference::Lattice { cell, first, second } => {
            let outside = |l: &Sublattice, m: &Sublattice| l.basis().iter().find(|b| !m.member(b).unwrap()).cloned();
            let b = outside(&first, &second).or_else(|| outside(&second, &first)).expect("lattices differ");
            let common = first.intersect(&second)?;
            let p = linalg::scale(&common.saturation_index(), &cell.interior_point());
            let k = cell
                .facets()
                .iter()
                .map(|h| linalg::dot(h, &b).abs())
                .max()
                .unwrap_or_else(BigInt::zero)
                + BigInt::one();
            linalg::add(&linalg::scale(&k, &p), &b)
        }
    }))
}

/// Integer points of sup-norm exactly `r`, in lexicographic order.
fn shell(n: usize, r: i64) -> Vec<IntVector> {
    let mut out = Vec::new();
    let mut cur = alloc::vec![-r; n];
    if n == 0 {
        return out;
    }
    loop {
        if cur.iter().any(|x| x.abs() == r) {
            out.push(cur.iter().map(|&x| BigInt::from(x)).collect());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < r {
                cur[i] += 1;
                break;
            }
            cur[i] = -r;
        }
    }
}
