//! The polarized base of the tropical Jacobian of a metric graph with edge
//! lengths in the dual of the base cone.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::display::V;
use crate::error::{check_len, Error, Result};
use crate::fan::StackyCone;
use crate::linalg::{self, IntVector};

use super::PolarizedBase;

/// A finite multigraph on `0..vertices`. Each edge is `(u, v, length)` with
/// the length a functional on the base lattice; loops are allowed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    pub base: StackyCone,
    pub vertices: usize,
    pub edges: Vec<(usize, usize, IntVector)>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// `Q(c, c') = Σ_e ℓ(e) c_e c'_e` on the fundamental cycles of the spanning
/// tree picked greedily in edge order. Each cycle runs along its non-tree
/// edge `u → v` and back through the tree.
pub fn jacobian_form(graph: &Graph) -> Result<PolarizedBase> {
    let k = graph.base.cone.ambient_rank();
    let nv = graph.vertices;
    if nv == 0 {
        return Err(Error::Invalid("graph has no vertices".into()));
    }
    for (u, v, l) in &graph.edges {
        check_len(k, l.len())?;
        if *u >= nv || *v >= nv {
            return Err(Error::Invalid(format!("edge {u}-{v} has an endpoint out of range")));
        }
        if graph.base.cone.rays().iter().any(|r| linalg::dot(l, r).is_negative()) {
            return Err(Error::Invalid(format!("edge length {} is negative on the base", V(l))));
        }
    }
    let mut parent: Vec<usize> = (0..nv).collect();
    let mut tree: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    let mut extra = Vec::new();
    for (e, (u, v, _)) in graph.edges.iter().enumerate() {
        let (a, b) = (find(&mut parent, *u), find(&mut parent, *v));
        if a == b {
            extra.push(e);
        } else {
            parent[a] = b;
            tree[*u].push((*v, e));
            tree[*v].push((*u, e));
        }
    }
    let root = find(&mut parent, 0);
    if (0..nv).any(|x| find(&mut parent, x) != root) {
        return Err(Error::Disconnected);
    }
    let ne = graph.edges.len();
    let cycles: Vec<Vec<i64>> = extra
        .iter()
        .map(|&e| {
            let (u, v, _) = &graph.edges[e];
            let mut c = vec![0i64; ne];
            c[e] = 1;
            // walk the tree from v back to u
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; nv];
            let mut seen = vec![false; nv];
            let mut queue = VecDeque::from([*u]);
            seen[*u] = true;
            while let Some(x) = queue.pop_front() {
                for &(y, te) in &tree[x] {
                    if !seen[y] {
                        seen[y] = true;
                        prev[y] = Some((x, te));
                        queue.push_back(y);
                    }
                }
            }
            let mut x = *v;
            while let Some((p, te)) = prev[x] {
                c[te] += if graph.edges[te].0 == x { 1 } else { -1 };
                x = p;
            }
            c
        })
        .collect();
    let g = cycles.len();
    let q: Vec<Vec<IntVector>> = (0..g)
        .map(|i| {
            (0..g)
                .map(|j| {
                    let mut acc = vec![BigInt::zero(); k];
                    for (e, (_, _, l)) in graph.edges.iter().enumerate() {
                        let w = cycles[i][e] * cycles[j][e];
                        if w != 0 {
                            acc = linalg::add(&acc, &linalg::scale(&BigInt::from(w), l));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    PolarizedBase::new(graph.base.clone(), q, 0)
}
