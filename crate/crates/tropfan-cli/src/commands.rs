//! The subcommands, as functions from inputs to an exit code and output
//! text. Decisions are made by the library; this layer only converts.

use std::fmt::Write;
use std::path::Path;

use num_bigint::BigInt;
use tropfan::minimal::{equivalence_witness, minimal_fan, MinimalFan};
use tropfan::trop::{
    av_bir_equivalent, av_complete, av_minimal, jacobian_form, quotient_complex, validate_av_fan,
};
use tropfan::{Error, FanMorphismData, IntVector, StackyFan};

use crate::document::{parse, to_json, Document};
use crate::oracle;
use crate::render::{render, Picture};

pub const OK: i32 = 0;
pub const FALSE: i32 = 1;
pub const PARSE: i32 = 2;
pub const INCOMPATIBLE: i32 = 3;
pub const UNSUPPORTED: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: impl Into<String>) -> Outcome {
        Outcome { code: OK, stdout: stdout.into(), stderr: String::new() }
    }

    fn decision(yes: bool, stdout: impl Into<String>) -> Outcome {
        Outcome { code: if yes { OK } else { FALSE }, stdout: stdout.into(), stderr: String::new() }
    }

    fn fail(code: i32, stderr: impl Into<String>) -> Outcome {
        Outcome { code, stdout: String::new(), stderr: stderr.into() }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Dimension { .. } | Error::IncompatibleBase | Error::SupportMismatch => INCOMPATIBLE,
        Error::Unsupported(_) => UNSUPPORTED,
        _ => FALSE,
    }
}

fn model(e: Error) -> Outcome {
    Outcome::fail(exit_code(&e), format!("error: {e}\n"))
}

pub fn load(path: &Path) -> Result<Document, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::fail(PARSE, format!("error: cannot read {}: {e}\n", path.display())))?;
    parse(&text).map_err(|e| Outcome::fail(PARSE, format!("error: {}: {e}\n", path.display())))
}

fn fan(path: &Path) -> Result<StackyFan, Outcome> {
    match load(path)? {
        Document::StackyFan(f) => Ok(f),
        d => Err(Outcome::fail(INCOMPATIBLE, format!("error: expected a stacky_fan, found {}\n", d.kind()))),
    }
}

/// Write `doc` to `out`, or return it as stdout.
fn emit(doc: &Document, out: Option<&Path>) -> Outcome {
    let text = to_json(doc);
    match out {
        Some(p) => match std::fs::write(p, text) {
            Ok(()) => Outcome::ok(""),
            Err(e) => Outcome::fail(FALSE, format!("error: cannot write {}: {e}\n", p.display())),
        },
        None => Outcome::ok(text),
    }
}

pub fn point(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn lines<T: std::fmt::Display>(items: &[T]) -> String {
    let mut s = String::new();
    for i in items {
        let _ = writeln!(s, "{i}");
    }
    s
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(o) => return o,
        }
    };
}

pub fn validate(path: &Path) -> Outcome {
    match tri!(load(path)) {
        Document::StackyFan(f) => {
            let r = f.validate();
            Outcome::decision(r.is_ok(), format!("{r}\n"))
        }
        // Parsing a coloring already canonicalizes and checks it.
        Document::Coloring(_) => Outcome::ok("ok\n"),
        Document::PolarizedBase(b) => {
            let v = b.validate_form();
            Outcome::decision(v.is_empty(), if v.is_empty() { "ok\n".into() } else { lines(&v) })
        }
        Document::AvFan(f) => match validate_av_fan(&f) {
            Ok(r) => Outcome::decision(r.is_ok(), format!("{r}\n")),
            Err(e) => model(e),
        },
        Document::Graph(g) => match jacobian_form(&g) {
            Ok(b) => {
                let v = b.validate_form();
                Outcome::decision(v.is_empty(), if v.is_empty() { "ok\n".into() } else { lines(&v) })
            }
            Err(e) => model(e),
        },
        Document::QuotientComplex(..) => Outcome::fail(UNSUPPORTED, "error: nothing to validate\n"),
    }
}

pub fn minimal(path: &Path, out: Option<&Path>) -> Outcome {
    match tri!(load(path)) {
        Document::StackyFan(f) => {
            let r = f.validate();
            if !r.is_ok() {
                return Outcome { code: FALSE, stdout: format!("{r}\n"), stderr: "error: invalid fan\n".into() };
            }
            match minimal_fan(&f) {
                Ok(m) => emit(&Document::Coloring(m), out),
                Err(e) => model(e),
            }
        }
        d @ Document::Coloring(_) => emit(&d, out),
        Document::AvFan(f) => {
            let r = tri!(validate_av_fan(&f).map_err(model));
            if !r.is_ok() {
                return Outcome { code: FALSE, stdout: format!("{r}\n"), stderr: "error: invalid fan\n".into() };
            }
            match av_minimal(&f) {
                Ok(m) => emit(&Document::AvFan(m), out),
                Err(e) => model(e),
            }
        }
        d => Outcome::fail(UNSUPPORTED, format!("error: no minimal model for {}\n", d.kind())),
    }
}

/// Largest sup-norm searched for a witness when one side is a coloring.
const WITNESS_RADIUS: i64 = 12;

fn as_minimal(doc: &Document) -> Option<Result<MinimalFan, Error>> {
    match doc {
        Document::StackyFan(f) => Some(minimal_fan(f)),
        Document::Coloring(m) => Some(Ok(m.clone())),
        _ => None,
    }
}

pub fn equiv(a: &Path, b: &Path) -> Outcome {
    let (da, db) = (tri!(load(a)), tri!(load(b)));
    match (&da, &db) {
        (Document::StackyFan(f1), Document::StackyFan(f2)) => match equivalence_witness(f1, f2) {
            Ok(None) => Outcome::ok("equivalent\n"),
            Ok(Some(p)) => Outcome::decision(false, format!("inequivalent\nwitness {}\n", point(&p))),
            Err(e) => model(e),
        },
        (Document::AvFan(f1), Document::AvFan(f2)) => match av_bir_equivalent(f1, f2) {
            Ok(yes) => Outcome::decision(yes, if yes { "equivalent\n" } else { "inequivalent\n" }),
            Err(e) => model(e),
        },
        _ => {
            let (Some(m1), Some(m2)) = (as_minimal(&da), as_minimal(&db)) else {
                return Outcome::fail(
                    INCOMPATIBLE,
                    format!("error: cannot compare {} with {}\n", da.kind(), db.kind()),
                );
            };
            let (m1, m2) = (tri!(m1.map_err(model)), tri!(m2.map_err(model)));
            if m1.ambient_rank() != m2.ambient_rank() {
                return Outcome::fail(INCOMPATIBLE, "error: ambient ranks differ\n");
            }
            if m1 == m2 {
                return Outcome::ok("equivalent\n");
            }
            let mut s = String::from("inequivalent\n");
            for r in 1..=WITNESS_RADIUS {
                let shell = oracle::box_points(m1.ambient_rank(), r)
                    .into_iter()
                    .filter(|p| p.iter().any(|x| x.magnitude() == BigInt::from(r).magnitude()));
                if let Some(p) = shell.into_iter().find(|p| m1.member(p).unwrap() != m2.member(p).unwrap()) {
                    let _ = writeln!(s, "witness {}", point(&p));
                    break;
                }
            }
            Outcome::decision(false, s)
        }
    }
}

pub enum Relation {
    Subdivision,
    Proper,
    Representable,
}

pub fn relation(rel: Relation, fine: &Path, coarse: &Path) -> Outcome {
    let (f, c) = (tri!(fan(fine)), tri!(fan(coarse)));
    let yes = match rel {
        Relation::Subdivision => tri!(f.is_subdivision_of(&c).map_err(model)),
        Relation::Proper | Relation::Representable => {
            let m = tri!(FanMorphismData::new(f, c).map_err(model));
            if !m.is_valid() {
                return Outcome::decision(false, "false\nthe fine fan does not map into the coarse one\n");
            }
            match rel {
                Relation::Proper => m.is_proper(),
                _ => m.is_representable(),
            }
        }
    };
    Outcome::decision(yes, if yes { "true\n" } else { "false\n" })
}

pub fn complete(path: &Path) -> Outcome {
    let yes = match tri!(load(path)) {
        Document::StackyFan(f) => f.is_complete(),
        Document::Coloring(m) => m.is_complete(),
        Document::AvFan(f) => tri!(av_complete(&f).map_err(model)),
        d => return Outcome::fail(UNSUPPORTED, format!("error: completeness is not defined for {}\n", d.kind())),
    };
    Outcome::decision(yes, if yes { "true\n" } else { "false\n" })
}

pub fn quotient(path: &Path, out: Option<&Path>) -> Outcome {
    match tri!(load(path)) {
        Document::AvFan(f) => match quotient_complex(&f) {
            Ok(qc) => emit(&Document::QuotientComplex(f.base().clone(), qc), out),
            Err(e) => model(e),
        },
        d => Outcome::fail(INCOMPATIBLE, format!("error: expected an av_fan, found {}\n", d.kind())),
    }
}

pub fn jacobian(path: &Path, out: Option<&Path>) -> Outcome {
    match tri!(load(path)) {
        Document::Graph(g) => match jacobian_form(&g) {
            Ok(b) => emit(&Document::PolarizedBase(b), out),
            Err(e) => model(e),
        },
        d => Outcome::fail(INCOMPATIBLE, format!("error: expected a graph, found {}\n", d.kind())),
    }
}

pub fn refine(a: &Path, b: &Path, out: Option<&Path>) -> Outcome {
    let (f, g) = (tri!(fan(a)), tri!(fan(b)));
    match f.common_refinement(&g) {
        Ok(r) => emit(&Document::StackyFan(r), out),
        Err(e) => model(e),
    }
}

pub fn render_file(path: &Path, out: &Path, radius: i64) -> Outcome {
    let doc = tri!(load(path));
    let svg = match &doc {
        Document::StackyFan(f) if f.ambient_rank() == 2 => render(&Picture {
            cells: f.cones(),
            rays: f.cones().iter().map(|c| c.cone.clone()).filter(|c| c.dim() == 1).collect(),
            radius,
        }),
        Document::Coloring(m) if m.ambient_rank() == 2 => {
            let mut rays: Vec<tropfan::Cone> =
                m.pieces().iter().flat_map(|p| p.cone.faces()).filter(|c| c.dim() == 1).collect();
            rays.sort();
            rays.dedup();
            render(&Picture { cells: m.pieces(), rays, radius })
        }
        Document::StackyFan(_) | Document::Coloring(_) => {
            return Outcome::fail(UNSUPPORTED, "error: only rank-2 inputs can be rendered\n")
        }
        d => return Outcome::fail(UNSUPPORTED, format!("error: cannot render {}\n", d.kind())),
    };
    match std::fs::write(out, svg) {
        Ok(()) => Outcome::ok(""),
        Err(e) => Outcome::fail(FALSE, format!("error: cannot write {}: {e}\n", out.display())),
    }
}

/// Lattice points of the `S`-set in `[-radius, radius]^n`, one per line,
/// followed by the count.
pub fn s_enumerate(path: &Path, radius: i64) -> Outcome {
    let pts = match tri!(load(path)) {
        Document::StackyFan(f) => oracle::s_enumerate(f.ambient_rank(), f.cones(), radius),
        Document::Coloring(m) => oracle::s_enumerate(m.ambient_rank(), m.pieces(), radius),
        d => return Outcome::fail(UNSUPPORTED, format!("error: no S-set for {}\n", d.kind())),
    };
    let mut s = String::new();
    for p in &pts {
        let _ = writeln!(s, "{}", point(p));
    }
    let _ = writeln!(s, "count {}", pts.len());
    Outcome::ok(s)
}

pub fn cover_sample(path: &Path, count: usize, seed: u64, bound: i64) -> Outcome {
    match tri!(load(path)) {
        Document::AvFan(f) => {
            let r = oracle::cover_sample(&f, count, seed, bound);
            let mut s = format!("covered {}/{}\n", r.sampled - r.uncovered.len(), r.sampled);
            for p in &r.uncovered {
                let _ = writeln!(s, "uncovered {}", point(p));
            }
            Outcome::decision(r.uncovered.is_empty(), s)
        }
        d => Outcome::fail(INCOMPATIBLE, format!("error: expected an av_fan, found {}\n", d.kind())),
    }
}

/// For every ordered pair of maximal representatives `(i, j)`, the `m` with
/// `|m| <= bound` such that cone `i` meets `T_m` of cone `j`.
pub fn translations_bruteforce(path: &Path, bound: i64) -> Outcome {
    match tri!(load(path)) {
        Document::AvFan(f) => {
            let cells = f.maximal_cones();
            let mut s = String::new();
            for (i, a) in cells.iter().enumerate() {
                let _ = writeln!(s, "cell {i} {}", a.cone);
            }
            for (i, a) in cells.iter().enumerate() {
                for (j, b) in cells.iter().enumerate() {
                    let ms: Vec<IntVector> = oracle::translations_bruteforce(f.base(), a, b, bound);
                    let ms: Vec<String> = ms.iter().map(|m| point(m)).collect();
                    let _ = writeln!(s, "{i} {j}: {}", ms.join(" "));
                }
            }
            Outcome::ok(s)
        }
        d => Outcome::fail(INCOMPATIBLE, format!("error: expected an av_fan, found {}\n", d.kind())),
    }
}
