//! Chambers of central hyperplane arrangements inside a cone, and the
//! covering test built on them.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::cone::Cone;
use crate::linalg::{self, IntVector};

/// Sign of a functional on the relative interior of a cone, assuming the
/// functional does not change sign on the cone.
pub fn sign_on(c: &Cone, h: &[num_bigint::BigInt]) -> i8 {
    let v = linalg::dot(h, &c.interior_point());
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

fn splits(c: &Cone, h: &[num_bigint::BigInt]) -> bool {
    let mut pos = false;
    let mut neg = false;
    for r in c.rays() {
        let v = linalg::dot(h, r);
        pos |= v.is_positive();
        neg |= v.is_negative();
    }
    pos && neg
}

/// Split `c` by every hyperplane `h = 0` that meets its relative interior.
/// The chambers have the dimension of `c` and come back sorted.
pub fn chambers(c: &Cone, hyperplanes: &[IntVector]) -> Vec<Cone> {
    let mut cur = vec![c.clone()];
    for h in hyperplanes {
        let mut next = Vec::with_capacity(cur.len() + 4);
        for ch in cur {
            if splits(&ch, h) {
                next.push(ch.cut(h).expect("subcone of a pointed cone"));
                next.push(ch.cut(&linalg::neg(h)).expect("subcone of a pointed cone"));
            } else {
                next.push(ch);
            }
        }
        cur = next;
    }
    cur.sort();
    cur
}

/// Deduplicated primitive hyperplane normals, sign-normalized.
pub fn normalize_hyperplanes<'a, I: IntoIterator<Item = &'a IntVector>>(hs: I) -> Vec<IntVector> {
    let set: BTreeSet<IntVector> = hs
        .into_iter()
        .filter(|h| !linalg::is_zero_vec(h))
        .map(|h| linalg::primitive_normalized(h))
        .collect();
    set.into_iter().collect()
}

/// A lattice point of `c` that no cone of `cover` contains, if any.
///
/// Splits `c` along every facet and span equation of the covering cones;
/// each resulting chamber is then either inside a covering cone or has an
/// interior point outside all of them.
pub fn uncovered_point(c: &Cone, cover: &[&Cone]) -> Option<IntVector> {
    if cover.is_empty() {
        return Some(c.interior_point());
    }
    let relevant: Vec<&&Cone> = cover.iter().filter(|s| touches(c, s)).collect();
    let hs = normalize_hyperplanes(
        relevant.iter().flat_map(|s| s.facets().iter().chain(s.equations().iter())),
    );
    for ch in chambers(c, &hs) {
        let p = ch.interior_point();
        if !relevant.iter().any(|s| s.contains(&p)) {
            return Some(p);
        }
    }
    None
}

/// Cheap necessary condition for `c ∩ s` to be more than the origin.
fn touches(c: &Cone, s: &Cone) -> bool {
    if c.is_zero() {
        return true;
    }
    if s.is_zero() {
        return false;
    }
    !(separated(s, c) || separated(c, s))
}

/// Some facet or span equation of `a` is strictly one-signed on `b`'s rays
/// in a way that keeps `b \ {0}` out of `a`.
fn separated(a: &Cone, b: &Cone) -> bool {
    let all = |h: &IntVector, want_neg: bool| {
        b.rays().iter().all(|r| {
            let v = linalg::dot(h, r);
            if want_neg {
                v.is_negative()
            } else {
                v.is_positive()
            }
        })
    };
    a.facets().iter().any(|h| all(h, true))
        || a.equations().iter().any(|e| all(e, true) || all(e, false))
}

pub fn covers(c: &Cone, cover: &[&Cone]) -> bool {
    uncovered_point(c, cover).is_none()
}
