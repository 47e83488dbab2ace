//! Brute-force oracles. These enumerate instead of reasoning, and are only
//! used to cross-check the exact algorithms.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropfan::linalg;
use tropfan::trop::{Admissibility, Graph};
use tropfan::{AVStackyFan, IntVector, PolarizedBase, StackyCone, Sublattice};

/// All integer points of `[-r, r]^n`, in lexicographic order.
pub fn box_points(n: usize, r: i64) -> Vec<IntVector> {
    box_around(&vec![BigInt::zero(); n], r)
}

/// All integer points within sup-distance `r` of `center`, lexicographically.
pub fn box_around(center: &[BigInt], r: i64) -> Vec<IntVector> {
    let mut out: Vec<IntVector> = vec![Vec::new()];
    for c in center {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-r..=r).map(move |x| {
                    let mut q = p.clone();
                    q.push(c + x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Points of `[-r, r]^n` lying in some cone together with its lattice.
pub fn s_enumerate(n: usize, cones: &[StackyCone], r: i64) -> Vec<IntVector> {
    box_points(n, r)
        .into_iter()
        .filter(|p| cones.iter().any(|c| c.cone.contains(p) && c.lattice.member(p).expect("ranks match")))
        .collect()
}

/// Does `c1 ∩ T_m c2` reach positive height over the base, or is `m = 0`
/// and the intersection nonzero.
pub fn translation_meets(base: &PolarizedBase, c1: &StackyCone, c2: &StackyCone, m: &[BigInt]) -> bool {
    let k = base.base_rank();
    let t = base.translate(c2, m).expect("ranks match");
    let meet = c1.cone.intersect(&t.cone).expect("ranks match");
    let off_zero = meet.rays().iter().any(|r| !linalg::is_zero_vec(&r[..k]));
    off_zero || (linalg::is_zero_vec(m) && !meet.is_zero())
}

/// Every `m` with `|m|_∞ <= bound` for which `c1` meets `T_m c2`.
pub fn translations_bruteforce(base: &PolarizedBase, c1: &StackyCone, c2: &StackyCone, bound: i64) -> Vec<IntVector> {
    box_points(base.m_rank(), bound).into_iter().filter(|m| translation_meets(base, c1, c2, m)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverReport {
    pub sampled: usize,
    pub uncovered: Vec<IntVector>,
}

/// Sample admissible points and look for a translate of a maximal cone
/// containing each. The search for `m` is centred on a solution `y` of
/// `G(n) y = n'`, which is where the slope lands in `[0, 1)^g`.
pub fn cover_sample(fan: &AVStackyFan, count: usize, seed: u64, bound: i64) -> CoverReport {
    let base = fan.base();
    let (k, g, r) = (base.base_rank(), base.m_rank(), base.torus_rank());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rays = base.base().cone.rays().to_vec();
    let cells = fan.maximal_cones();
    let mut uncovered = Vec::new();
    let mut sampled = 0;
    while sampled < count {
        let mut n = linalg::zero_vec(k);
        for ray in &rays {
            n = linalg::add(&n, &linalg::scale(&BigInt::from(rng.gen_range(0..5)), ray));
        }
        let nprime: IntVector = (0..g).map(|_| BigInt::from(rng.gen_range(-20..=20))).collect();
        if base.admissible_point(&n, &nprime).expect("ranks match") != Admissibility::Admissible {
            continue;
        }
        sampled += 1;
        let mut p = n.clone();
        p.extend(nprime.iter().cloned());
        p.extend((0..r).map(|_| BigInt::from(rng.gen_range(-20..=20))));
        let center: IntVector = match linalg::solve_rational(&base.gram(&n), &nprime) {
            Some(y) if g > 0 => y.iter().map(|v| v.floor().to_integer()).collect(),
            _ => linalg::zero_vec(g),
        };
        let hit = box_around(&center, bound).iter().any(|m| {
            let q = base.translate_point(&p, &linalg::neg(m));
            cells.iter().any(|c| c.cone.contains(&q))
        });
        if !hit {
            uncovered.push(p);
        }
    }
    CoverReport { sampled, uncovered }
}

/// Every cycle of the graph with coefficients in `{-1, 0, 1}`, in
/// lexicographic order of the coefficient vector.
pub fn small_cycles(graph: &Graph) -> Vec<Vec<i64>> {
    let ne = graph.edges.len();
    let mut out = Vec::new();
    let mut z = vec![-1i64; ne];
    loop {
        let mut boundary = vec![0i64; graph.vertices];
        for (e, (u, v, _)) in graph.edges.iter().enumerate() {
            boundary[*v] += z[e];
            boundary[*u] -= z[e];
        }
        if boundary.iter().all(|&b| b == 0) && z.iter().any(|&x| x != 0) {
            out.push(z.clone());
        }
        // odometer over {-1, 0, 1}^E
        let mut i = ne;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if z[i] < 1 {
                z[i] += 1;
                break;
            }
            z[i] = -1;
        }
    }
}

/// `Σ_e ℓ(e) a_e b_e`.
pub fn cycle_pairing(graph: &Graph, a: &[i64], b: &[i64]) -> IntVector {
    let k = graph.base.cone.ambient_rank();
    graph.edges.iter().enumerate().fold(linalg::zero_vec(k), |acc, (e, (_, _, l))| {
        linalg::add(&acc, &linalg::scale(&BigInt::from(a[e] * b[e]), l))
    })
}

/// The first `g` small cycles (in enumeration order of subsets) forming a
/// basis of the cycle lattice, with their Gram matrix.
pub fn cycle_space_gram(graph: &Graph) -> (Vec<Vec<i64>>, Vec<Vec<IntVector>>) {
    let zs = small_cycles(graph);
    let ne = graph.edges.len();
    let big: Vec<IntVector> = zs.iter().map(|z| z.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let lattice = Sublattice::canonicalize(&big, ne).expect("ranks match");
    let g = lattice.rank();
    let basis = first_basis(&big, g, &lattice, ne).expect("small cycles contain a basis");
    let cycles: Vec<Vec<i64>> = basis.iter().map(|&i| zs[i].clone()).collect();
    let gram = cycles.iter().map(|a| cycles.iter().map(|b| cycle_pairing(graph, a, b)).collect()).collect();
    (cycles, gram)
}

fn first_basis(vs: &[IntVector], g: usize, lattice: &Sublattice, n: usize) -> Option<Vec<usize>> {
    fn go(vs: &[IntVector], g: usize, lattice: &Sublattice, n: usize, from: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == g {
            let sel: Vec<IntVector> = chosen.iter().map(|&i| vs[i].clone()).collect();
            return Sublattice::canonicalize(&sel, n).ok().as_ref() == Some(lattice);
        }
        for i in from..vs.len() {
            chosen.push(i);
            let sel: Vec<IntVector> = chosen.iter().map(|&j| vs[j].clone()).collect();
            if linalg::rank(&sel) == chosen.len() && go(vs, g, lattice, n, i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    go(vs, g, lattice, n, 0, &mut chosen).then_some(chosen)
}

/// A matrix `U` with entries in `[-bound, bound]` and determinant ±1 such
/// that `U^T q U = target`, found by exhaustive search.
pub fn unimodular_congruence(q: &[Vec<IntVector>], target: &[Vec<IntVector>], bound: i64) -> Option<Vec<IntVector>> {
    let g = q.len();
    if target.len() != g {
        return None;
    }
    let k = q.first().and_then(|r| r.first()).map_or(0, |v| v.len());
    for entries in box_points(g * g, bound) {
        let u: Vec<IntVector> = entries.chunks(g.max(1)).take(g).map(|r| r.to_vec()).collect();
        let d = linalg::det(&u);
        if d != BigInt::one() && d != -BigInt::one() {
            continue;
        }
        let ok = (0..g).all(|i| {
            (0..g).all(|j| {
                let mut acc = linalg::zero_vec(k);
                for (a, row) in q.iter().enumerate() {
                    for (b, e) in row.iter().enumerate() {
                        acc = linalg::add(&acc, &linalg::scale(&(&u[a][i] * &u[b][j]), e));
                    }
                }
                acc == target[i][j]
            })
        });
        if ok {
            return Some(u);
        }
    }
    None
}
