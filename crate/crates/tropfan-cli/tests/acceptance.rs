//! Acceptance suite. Prints one `[PASS]`/`[FAIL]` line per criterion and
//! exits nonzero if any fails. Time limits are wall-clock per criterion.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropfan::linalg;
use tropfan::minimal::{birationally_equivalent, minimal_fan, minimal_set_member, MinimalFan};
use tropfan::trop::{
    av_complete, candidate_translations, jacobian_form, quotient_complex, reference_subdivision, validate_av_fan,
    Admissibility, AvViolation, Graph, TestCone,
};
use tropfan::{ivec, Cone, FanMorphismData, IntVector, PolarizedBase, StackyCone, StackyFan, Sublattice};
use tropfan_cli::document::{parse, Document};
use tropfan_cli::gen;
use tropfan_cli::oracle;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn load(name: &str) -> Document {
    parse(&std::fs::read_to_string(fixture(name)).expect("fixture exists")).expect("fixture parses")
}

fn load_fan(name: &str) -> StackyFan {
    match load(name) {
        Document::StackyFan(f) => f,
        d => panic!("{name} is a {}", d.kind()),
    }
}

fn load_av(name: &str) -> tropfan::AVStackyFan {
    match load(name) {
        Document::AvFan(f) => f,
        d => panic!("{name} is a {}", d.kind()),
    }
}

fn load_graph(name: &str) -> Graph {
    match load(name) {
        Document::Graph(g) => g,
        d => panic!("{name} is a {}", d.kind()),
    }
}

fn tropfan(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tropfan")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn path(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

fn cone(rays: &[&[i64]]) -> Cone {
    let v: Vec<IntVector> = rays.iter().map(|r| ivec(r)).collect();
    Cone::from_rays(&v, rays[0].len()).unwrap()
}

fn lat(basis: &[&[i64]]) -> Sublattice {
    let v: Vec<IntVector> = basis.iter().map(|r| ivec(r)).collect();
    Sublattice::canonicalize(&v, basis[0].len()).unwrap()
}

fn intro_figure() -> Outcome {
    let delta = load_fan("delta_fig.json");
    let m = minimal_fan(&delta).map_err(|e| e.to_string())?;
    let colors = m.colors();
    let keys: BTreeSet<&Sublattice> = colors.keys().collect();
    let red = lat(&[&[2, 0], &[0, 1]]);
    let full = Sublattice::full(2);
    ensure!(keys == BTreeSet::from([&full, &red]), "colors {keys:?}");
    ensure!(colors[&red] == vec![cone(&[&[0, 1], &[-2, -1]])], "red region {:?}", colors[&red]);

    let (code, out) = tropfan(&["equiv", &path("delta_fig.json"), &path("trivial.json")]);
    ensure!(code == 1 && out.starts_with("inequivalent\n"), "equiv exited {code}: {out}");
    let w = out.lines().nth(1).and_then(|l| l.strip_prefix("witness ")).ok_or("no witness")?;
    let w: IntVector = w
        .trim_matches(|c| c == '(' || c == ')')
        .split(", ")
        .map(|x| x.parse::<BigInt>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let Document::Coloring(trivial) = load("trivial.json") else { return Err("trivial is not a coloring".into()) };
    let (a, b) = (minimal_set_member(&w, &m).unwrap(), minimal_set_member(&w, &trivial).unwrap());
    ensure!(a != b, "witness {w:?} is in both or neither S-set");

    let dir = std::env::temp_dir().join(format!("tropfan-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let svg = dir.join("delta_fig.svg");
    let (code, _) = tropfan(&["render", &path("delta_fig.json"), "--out", svg.to_str().unwrap()]);
    ensure!(code == 0, "render exited {code}");
    let got = std::fs::read_to_string(&svg).map_err(|e| e.to_string())?;
    let _ = std::fs::remove_dir_all(&dir);
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/delta_fig.svg");
    ensure!(got == std::fs::read_to_string(golden).map_err(|e| e.to_string())?, "SVG differs from golden");
    Ok(format!("colors {{Z^2, 2Z x Z}}, red = cone(e2, -2e1-e2), witness {w:?}, golden SVG"))
}

fn quadrant_fan() -> StackyFan {
    let quads: Vec<StackyCone> = [[1, 1], [-1, 1], [-1, -1], [1, -1]]
        .iter()
        .map(|[a, b]| StackyCone::saturated(cone(&[&[*a, 0], &[0, *b]])))
        .collect();
    StackyFan::new(2, quads).unwrap()
}

fn representable_classes() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let random = gen::stacky(&gen::random_complete(&mut rng, 2, 5), &gen::Lattices::Saturated);
    let fans = [load_fan("p2.json"), load_fan("hirzebruch1.json"), load_fan("hirzebruch2.json"), random];
    for (i, a) in fans.iter().enumerate() {
        for b in &fans[i + 1..] {
            ensure!(birationally_equivalent(a, b).unwrap(), "fans {i} and a later one differ");
        }
    }
    let Document::Coloring(trivial) = load("trivial.json") else { return Err("trivial is not a coloring".into()) };
    let q = quadrant_fan();
    ensure!(minimal_fan(&q).unwrap() == trivial, "quadrant fan does not give the trivial coloring");
    for (i, f) in fans.iter().enumerate() {
        let r = f.common_refinement(&q).map_err(|e| e.to_string())?;
        ensure!(r.is_subdivision_of(f).unwrap() && r.is_subdivision_of(&q).unwrap(), "fan {i}: no common subdivision");
        ensure!(minimal_fan(f).unwrap() == trivial, "fan {i} is not trivial");
    }
    Ok(format!("{} fans pairwise equivalent, each with a common subdivision with the quadrant fan", fans.len()))
}

struct Sample {
    rng: ChaCha8Rng,
    shapes: Vec<Vec<IntVector>>,
    fan: StackyFan,
}

fn sample(seed: u64) -> Sample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=3);
    let steps = rng.gen_range(0..=3);
    let shapes = gen::random_complete(&mut rng, n, steps);
    let l = gen::random_lattices(&mut rng, &shapes);
    let fan = gen::stacky(&shapes, &l);
    Sample { rng, shapes, fan }
}

/// A root construction that is proper on at least one maximal cone.
fn proper_root(rng: &mut ChaCha8Rng, f: &StackyFan) -> StackyFan {
    let n = f.ambient_rank();
    loop {
        let p = rng.gen_range(2..=3);
        let g = gen::random_root_functional(rng, n, p);
        let r = gen::root(f, &g, p);
        if r != *f {
            return r;
        }
    }
}

fn minimality_laws() -> Outcome {
    for seed in 0..200u64 {
        let Sample { mut rng, shapes, fan } = sample(seed);
        let n = fan.ambient_rank();
        let m = minimal_fan(&fan).unwrap();
        ensure!(MinimalFan::from_pieces(n, m.pieces().to_vec()).unwrap() == m, "seed {seed}: not idempotent");
        let mut fine = shapes.clone();
        for _ in 0..3 {
            fine = gen::random_stellar(&mut rng, &fine);
        }
        let sub = gen::refine_to(&fan, &fine);
        ensure!(minimal_fan(&sub).unwrap() == m, "seed {seed}: changed by subdivision");
        let rooted = proper_root(&mut rng, &fan);
        ensure!(minimal_fan(&rooted).unwrap() != m, "seed {seed}: unchanged by a proper root");
    }
    Ok("200 fans: idempotent, stable under 3 stellar subdivisions, moved by proper roots".into())
}

fn oracle_equivalence() -> Outcome {
    let mut agree = [0usize; 2];
    for seed in 0..100u64 {
        let Sample { mut rng, shapes, fan } = sample(1000 + seed);
        let other = match seed % 4 {
            0 => {
                let mut fine = shapes.clone();
                for _ in 0..2 {
                    fine = gen::random_stellar(&mut rng, &fine);
                }
                gen::refine_to(&fan, &fine)
            }
            1 => proper_root(&mut rng, &fan),
            2 => {
                let l = gen::random_lattices(&mut rng, &shapes);
                gen::stacky(&shapes, &l)
            }
            _ => {
                let steps = rng.gen_range(0..=3);
                let shapes = gen::random_complete(&mut rng, fan.ambient_rank(), steps);
                let l = gen::random_lattices(&mut rng, &shapes);
                gen::stacky(&shapes, &l)
            }
        };
        let n = fan.ambient_rank();
        let exact = birationally_equivalent(&fan, &other).unwrap();
        let brute = oracle::s_enumerate(n, fan.cones(), 8) == oracle::s_enumerate(n, other.cones(), 8);
        ensure!(exact == brute, "seed {seed}: exact {exact}, radius-8 oracle {brute}");
        agree[usize::from(exact)] += 1;
    }
    Ok(format!("100 pairs agree with the radius-8 oracle ({} equivalent, {} not)", agree[1], agree[0]))
}

fn dictionary() -> Outcome {
    let mut counts = [0usize; 2];
    for seed in 0..100u64 {
        let Sample { mut rng, shapes, fan } = sample(5000 + seed);
        let n = fan.ambient_rank();
        // coarse fans are sometimes partial
        let (coarse, shapes) = if seed % 3 == 0 && shapes.len() > 1 {
            let cells = fan.maximal_cones().into_iter().skip(1).cloned().collect();
            let partial = StackyFan::new(n, cells).unwrap();
            let kept: Vec<Vec<IntVector>> = shapes
                .iter()
                .filter(|s| {
                    let c = Cone::from_rays(s, n).unwrap();
                    partial.maximal_cones().iter().any(|m| m.cone == c)
                })
                .cloned()
                .collect();
            (partial, kept)
        } else {
            (fan, shapes)
        };
        let mut fine_shapes = shapes.clone();
        for _ in 0..rng.gen_range(0..=2) {
            fine_shapes = gen::random_stellar(&mut rng, &fine_shapes);
        }
        let mut fine = gen::refine_to(&coarse, &fine_shapes);
        if rng.gen_bool(0.3) && fine.maximal_cones().len() > 1 {
            let cells = fine.maximal_cones().into_iter().skip(1).cloned().collect();
            fine = StackyFan::new(n, cells).unwrap();
        }
        if rng.gen_bool(0.3) {
            fine = proper_root(&mut rng, &fine);
        }
        let m = FanMorphismData::new(fine.clone(), coarse.clone()).unwrap();
        ensure!(m.is_valid(), "seed {seed}: not a morphism");
        let sub = fine.is_subdivision_of(&coarse).unwrap();
        ensure!(sub == (m.is_representable() && m.is_proper()), "seed {seed}: subdivision {sub}");
        counts[usize::from(sub)] += 1;

        let refined = gen::refine_to(&coarse, &fine_shapes);
        let rooted = proper_root(&mut rng, &coarse);
        let c = coarse.is_complete();
        ensure!(refined.is_complete() == c && rooted.is_complete() == c, "seed {seed}: completeness moved");
    }
    Ok(format!("100 morphisms ({} subdivisions, {} not); completeness invariant", counts[1], counts[0]))
}

fn base_from(sigma: StackyCone, q: Vec<Vec<IntVector>>) -> PolarizedBase {
    PolarizedBase::new(sigma, q, 0).unwrap()
}

fn pairing_lemmas() -> Outcome {
    let mut definite = 0;
    let mut seed = 0u64;
    while definite < 100 {
        seed += 1;
        ensure!(seed < 10_000, "too few definite bases");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..=3);
        let g = rng.gen_range(1..=3);
        let rays: Vec<IntVector> = (0..k).map(|i| linalg::unit_vec(k, i)).collect();
        let sigma = StackyCone::saturated(Cone::from_rays(&rays, k).unwrap());
        let terms: Vec<(IntVector, IntVector)> = (0..g + rng.gen_range(0..3))
            .map(|_| {
                let l: IntVector = (0..k).map(|_| BigInt::from(rng.gen_range(0..3))).collect();
                let a: IntVector = (0..g).map(|_| BigInt::from(rng.gen_range(-2..=2))).collect();
                (l, a)
            })
            .collect();
        let q: Vec<Vec<IntVector>> = (0..g)
            .map(|i| {
                (0..g)
                    .map(|j| {
                        terms.iter().fold(linalg::zero_vec(k), |acc, (l, a)| {
                            linalg::add(&acc, &linalg::scale(&(&a[i] * &a[j]), l))
                        })
                    })
                    .collect()
            })
            .collect();
        let base = base_from(sigma, q);
        if !base.is_definite() {
            continue;
        }
        definite += 1;
        for n in oracle::box_points(k, 2).into_iter().filter(|n| base.base().cone.contains(n)) {
            let gm = base.gram(&n);
            let mut ms = oracle::box_points(g, 2);
            ms.extend(linalg::right_kernel(&gm, g));
            for m in ms {
                let gm_m = linalg::mat_vec(&gm, &m);
                if linalg::dot(&m, &gm_m) == BigInt::from(0) {
                    ensure!(linalg::is_zero_vec(&gm_m), "seed {seed}: Q(m,m)(n) = 0 but Q(m,.)(n) != 0");
                }
            }
        }
    }

    let quad = StackyCone::saturated(cone(&[&[1, 0], &[0, 1]]));
    let ray = StackyCone::saturated(cone(&[&[1]]));
    let v = |x: &[i64]| ivec(x);
    let bases = [
        base_from(ray.clone(), vec![vec![v(&[1])]]),
        base_from(ray, vec![vec![v(&[2]), v(&[1])], vec![v(&[1]), v(&[1])]]),
        base_from(quad.clone(), vec![vec![v(&[1, 0])]]),
        base_from(quad.clone(), vec![vec![v(&[1, 1])]]),
        base_from(quad.clone(), vec![vec![v(&[1, 1]), v(&[0, 1])], vec![v(&[0, 1]), v(&[0, 1])]]),
        base_from(quad, vec![vec![v(&[1, 0]), v(&[0, 0])], vec![v(&[0, 0]), v(&[0, 1])]]),
    ];
    let taus = [cone(&[&[1]]), cone(&[&[1, 0], &[0, 1]]), cone(&[&[1, 0], &[1, 1]]), cone(&[&[1, 2], &[1, 0]])];
    let mut checked = 0usize;
    for base in &bases {
        let g = base.m_rank();
        let mut images: Vec<IntVector> = base.base().cone.rays().to_vec();
        if base.base_rank() == 2 {
            images.push(v(&[1, 1]));
        }
        for tau in &taus {
            let t = tau.ambient_rank();
            for structure in maps(&images, t) {
                let test = TestCone { cone: tau.clone(), structure };
                for entries in oracle::box_points(g * t, 2) {
                    let phi: Vec<IntVector> = entries.chunks(t).map(|c| c.to_vec()).collect();
                    let ray_wise = tau.rays().iter().all(|x| {
                        let val: IntVector = phi.iter().map(|p| linalg::dot(p, x)).collect();
                        base.admissible_point(&test.image(x), &val).unwrap() == Admissibility::Admissible
                    });
                    ensure!(base.admissible_hom(&test, &phi).unwrap() == ray_wise, "phi {phi:?} disagrees");
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("vanishing on {definite} definite bases; admissible_hom = ray-wise test on {checked} maps"))
}

/// Every assignment of the unit vectors of `Z^t` to `images`.
fn maps(images: &[IntVector], t: usize) -> Vec<Vec<IntVector>> {
    let mut out: Vec<Vec<IntVector>> = vec![Vec::new()];
    for _ in 0..t {
        out = out
            .into_iter()
            .flat_map(|p| {
                images.iter().map(move |c| {
                    let mut q = p.clone();
                    q.push(c.clone());
                    q
                })
            })
            .collect();
    }
    out
}

fn tate_curve() -> Outcome {
    let one = load_av("one_arc.json");
    let r = validate_av_fan(&one).unwrap();
    let witness = AvViolation::NotFixed { cone: cone(&[&[1, 0], &[1, 1]]), m: ivec(&[1]), ray: ivec(&[1, 1]) };
    ensure!(r.violations.contains(&witness), "one-arc report: {r}");

    let two = load_av("two_arc.json");
    ensure!(validate_av_fan(&two).unwrap().is_ok(), "two-arc does not validate");
    ensure!(av_complete(&two).unwrap(), "two-arc is not complete");
    let qc = quotient_complex(&two).unwrap();
    ensure!(qc.cell_counts() == vec![1, 2, 2], "cell counts {:?}", qc.cell_counts());
    let pairs: BTreeSet<(usize, usize)> = qc.face_maps.iter().map(|m| (m.source, m.target)).collect();
    ensure!(pairs.len() == qc.face_maps.len(), "two face maps between the same cells");

    let tau0 = StackyCone::saturated(cone(&[&[1, 0], &[2, 1]]));
    let tau1 = StackyCone::saturated(cone(&[&[2, 1], &[1, 1]]));
    let exact = candidate_translations(two.base(), &tau0, &tau1).unwrap();
    ensure!(exact == vec![ivec(&[-1]), ivec(&[0])], "candidates {exact:?}");
    let (code, out) = tropfan(&["oracle", "translations-bruteforce", &path("two_arc.json"), "--bound", "10"]);
    ensure!(code == 0, "oracle exited {code}");
    let cells: Vec<&str> = out.lines().filter_map(|l| l.strip_prefix("cell ")).collect();
    let i0 = cells.iter().position(|c| c.ends_with(&tau0.cone.to_string())).ok_or("tau0 missing")?;
    let i1 = cells.iter().position(|c| c.ends_with(&tau1.cone.to_string())).ok_or("tau1 missing")?;
    let line = out.lines().find_map(|l| l.strip_prefix(&format!("{i0} {i1}: "))).ok_or("pair missing")?;
    ensure!(line == "(-1) (0)", "bruteforce {line}");
    Ok("one-arc NotFixed at ray (1,1) for m = 1; two-arc valid, complete, cells (1,2,2); translations {-1, 0}".into())
}

fn jacobians() -> Outcome {
    let theta = load_graph("theta.json");
    let b = jacobian_form(&theta).unwrap();
    let (_, gram) = oracle::cycle_space_gram(&theta);
    let u = oracle::unimodular_congruence(b.q(), &gram, 1).ok_or("theta form not congruent to the cycle pairing")?;
    let tree = jacobian_form(&load_graph("tree.json")).unwrap();
    ensure!(tree.m_rank() == 0, "tree has g = {}", tree.m_rank());

    let mut accepted = 0;
    for name in ["theta.json", "loop.json"] {
        ensure!(jacobian_form(&load_graph(name)).unwrap().is_definite(), "{name} rejected");
        accepted += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let k = rng.gen_range(1..=3);
        let nv: usize = rng.gen_range(1..=3);
        let rays: Vec<IntVector> = (0..k).map(|i| linalg::unit_vec(k, i)).collect();
        // a path through all vertices, then extra edges
        let mut edges: Vec<(usize, usize, IntVector)> = Vec::new();
        for v in 1..nv {
            edges.push((v - 1, v, rays[rng.gen_range(0..k)].clone()));
        }
        for _ in 0..rng.gen_range(1..=3) {
            edges.push((rng.gen_range(0..nv), rng.gen_range(0..nv), rays[rng.gen_range(0..k)].clone()));
        }
        let g = Graph { base: StackyCone::saturated(Cone::from_rays(&rays, k).unwrap()), vertices: nv, edges };
        let jb = jacobian_form(&g).unwrap();
        ensure!(jb.validate_form().is_empty(), "positively weighted graph rejected: {:?}", jb.validate_form());
        accepted += 1;
    }
    let degenerate = jacobian_form(&load_graph("theta_degenerate.json")).unwrap();
    ensure!(!degenerate.validate_form().is_empty(), "zero-length degeneration accepted");
    Ok(format!("theta congruent to the cycle pairing via U = {u:?}; tree g = 0; {accepted} weighted graphs accepted"))
}

fn reference_fans() -> Outcome {
    let b = PolarizedBase::new(StackyCone::saturated(cone(&[&[1]])), vec![], 2).unwrap();
    let e = |x: &[i64]| ivec(x);
    let quad = reference_subdivision(&b, &[e(&[1, 0]), e(&[0, 1])]).map_err(|x| x.to_string())?;
    ensure!(quad.maximal_cones().len() == 4, "{} maximal cones", quad.maximal_cones().len());
    ensure!(quad.is_complete() && quad.validate().is_ok(), "standard arrangement fan invalid");
    let oct = reference_subdivision(&b, &[e(&[1, 0]), e(&[0, 1]), e(&[1, 1]), e(&[1, -1])]).map_err(|x| x.to_string())?;
    ensure!(oct.maximal_cones().len() == 8, "{} maximal cones", oct.maximal_cones().len());
    ensure!(oct.is_complete() && oct.validate().is_ok(), "extended arrangement fan invalid");
    Ok("4 quadrants, 8 cones with e1 +- e2; both complete and valid".into())
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "intro figure", limit: Duration::from_secs(1), run: intro_figure },
        Criterion { id: 2, name: "representable classes are trivial", limit: Duration::from_secs(1), run: representable_classes },
        Criterion { id: 3, name: "minimality laws", limit: Duration::from_secs(60), run: minimality_laws },
        Criterion { id: 4, name: "equivalence vs S-set oracle", limit: Duration::from_secs(120), run: oracle_equivalence },
        Criterion { id: 5, name: "subdivision dictionary", limit: Duration::from_secs(30), run: dictionary },
        Criterion { id: 6, name: "pairing lemmas", limit: Duration::from_secs(60), run: pairing_lemmas },
        Criterion { id: 7, name: "Tate curve", limit: Duration::from_secs(5), run: tate_curve },
        Criterion { id: 8, name: "Jacobian ingestion", limit: Duration::from_secs(5), run: jacobians },
        Criterion { id: 9, name: "reference subdivision", limit: Duration::from_secs(5), run: reference_fans },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(c.run).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if t <= c.limit => (true, d),
            Ok(d) => (false, format!("{d}; over the time limit")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "[{}] {} {}: {} ({:.2} s, limit {} s)",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            detail,
            t.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
