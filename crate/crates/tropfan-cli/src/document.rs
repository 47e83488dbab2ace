//! JSON fan documents.
//!
//! Every document is an envelope `{"schema_version": "1", "kind": ..., "payload": ...}`.
//! Integers that carry arithmetic meaning (ray coordinates, lattice bases,
//! form entries, edge lengths, translations) are decimal strings; sizes and
//! indices are plain JSON numbers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use tropfan::minimal::MinimalFan;
use tropfan::trop::{Graph, QuotientComplex};
use tropfan::{AVStackyFan, Cone, IntVector, PolarizedBase, StackyCone, StackyFan, Sublattice};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    StackyFan(StackyFan),
    /// A minimal fan, stored as its pieces grouped by lattice.
    Coloring(MinimalFan),
    PolarizedBase(PolarizedBase),
    AvFan(AVStackyFan),
    Graph(Graph),
    /// Output only.
    QuotientComplex(PolarizedBase, QuotientComplex),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::StackyFan(_) => "stacky_fan",
            Document::Coloring(_) => "coloring",
            Document::PolarizedBase(_) => "polarized_base",
            Document::AvFan(_) => "av_fan",
            Document::Graph(_) => "graph",
            Document::QuotientComplex(..) => "quotient_complex",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

type Res<T> = Result<T, ParseError>;

fn err<T>(msg: impl Into<String>) -> Res<T> {
    Err(ParseError(msg.into()))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    schema_version: String,
    kind: String,
    payload: serde_json::Value,
}

type Vector = Vec<String>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeDoc {
    rays: Vec<Vector>,
    /// Defaults to the saturated lattice of the span.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lattice: Option<Vec<Vector>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FanDoc {
    ambient_rank: usize,
    cones: Vec<ConeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColorDoc {
    lattice: Vec<Vector>,
    cones: Vec<ConeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColoringDoc {
    ambient_rank: usize,
    colors: Vec<ColorDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BaseDoc {
    base: ConeDoc,
    q: Vec<Vec<Vector>>,
    #[serde(default)]
    torus_rank: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AvFanDoc {
    base: BaseDoc,
    cones: Vec<ConeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    ends: [usize; 2],
    length: Vector,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    base: ConeDoc,
    vertices: usize,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FaceMapDoc {
    source: usize,
    target: usize,
    m: Vector,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuotientDoc {
    base: BaseDoc,
    cells: Vec<ConeDoc>,
    face_maps: Vec<FaceMapDoc>,
}

pub fn parse(text: &str) -> Res<Document> {
    let env: Envelope =
        serde_json::from_str(text).map_err(|e| ParseError(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    if env.schema_version != SCHEMA_VERSION {
        return err(format!("unsupported schema_version {:?}", env.schema_version));
    }
    let payload = env.payload;
    fn load<T: serde::de::DeserializeOwned>(v: serde_json::Value, kind: &str) -> Res<T> {
        serde_json::from_value(v).map_err(|e| ParseError(format!("{kind} payload: {e}")))
    }
    match env.kind.as_str() {
        "stacky_fan" => Ok(Document::StackyFan(read_fan(load(payload, "stacky_fan")?)?)),
        "coloring" => Ok(Document::Coloring(read_coloring(load(payload, "coloring")?)?)),
        "polarized_base" => Ok(Document::PolarizedBase(read_base(load(payload, "polarized_base")?)?)),
        "av_fan" => {
            let d: AvFanDoc = load(payload, "av_fan")?;
            let base = read_base(d.base)?;
            let n = base.total_rank();
            let cones = d.cones.into_iter().map(|c| read_stacky(c, n)).collect::<Res<Vec<_>>>()?;
            Ok(Document::AvFan(AVStackyFan::new(base, cones).map_err(model)?))
        }
        "graph" => {
            let d: GraphDoc = load(payload, "graph")?;
            let base = read_stacky_any(d.base)?;
            let k = base.cone.ambient_rank();
            let edges = d
                .edges
                .into_iter()
                .map(|e| Ok((e.ends[0], e.ends[1], read_vector(&e.length, k)?)))
                .collect::<Res<Vec<_>>>()?;
            Ok(Document::Graph(Graph { base, vertices: d.vertices, edges }))
        }
        "quotient_complex" => err("quotient_complex documents are output only"),
        other => err(format!("unknown kind {other:?}")),
    }
}

fn model(e: tropfan::Error) -> ParseError {
    ParseError(format!("invalid document: {e}"))
}

fn read_int(s: &str) -> Res<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| ParseError(format!("not an integer: {s:?}")))
}

fn read_vector(v: &[String], n: usize) -> Res<IntVector> {
    if v.len() != n {
        return err(format!("vector {v:?} has length {}, expected {n}", v.len()));
    }
    v.iter().map(|s| read_int(s)).collect()
}

fn read_vectors(vs: &[Vector], n: usize) -> Res<Vec<IntVector>> {
    vs.iter().map(|v| read_vector(v, n)).collect()
}

fn read_stacky(c: ConeDoc, n: usize) -> Res<StackyCone> {
    let rays = read_vectors(&c.rays, n)?;
    let cone = Cone::from_rays(&rays, n).map_err(model)?;
    match c.lattice {
        None => Ok(StackyCone::saturated(cone)),
        Some(basis) => {
            let basis = read_vectors(&basis, n)?;
            let lattice = Sublattice::canonicalize(&basis, n).map_err(model)?;
            StackyCone::new(cone, lattice).map_err(model)
        }
    }
}

/// A cone whose ambient rank is read off its first ray or lattice vector.
fn read_stacky_any(c: ConeDoc) -> Res<StackyCone> {
    let n = c.rays.first().or(c.lattice.as_ref().and_then(|l| l.first())).map(|v| v.len());
    match n {
        Some(n) => read_stacky(c, n),
        None => err("cannot infer the rank of an empty cone"),
    }
}

fn read_fan(d: FanDoc) -> Res<StackyFan> {
    let n = d.ambient_rank;
    let cones = d.cones.into_iter().map(|c| read_stacky(c, n)).collect::<Res<Vec<_>>>()?;
    StackyFan::new(n, cones).map_err(model)
}

fn read_coloring(d: ColoringDoc) -> Res<MinimalFan> {
    let n = d.ambient_rank;
    let mut pieces = Vec::new();
    for color in d.colors {
        let basis = read_vectors(&color.lattice, n)?;
        let lattice = Sublattice::canonicalize(&basis, n).map_err(model)?;
        for c in color.cones {
            if c.lattice.is_some() {
                return err("cones inside a color take the color's lattice");
            }
            let rays = read_vectors(&c.rays, n)?;
            let cone = Cone::from_rays(&rays, n).map_err(model)?;
            pieces.push(StackyCone { cone, lattice: lattice.clone() });
        }
    }
    MinimalFan::from_pieces(n, pieces).map_err(model)
}

fn read_base(d: BaseDoc) -> Res<PolarizedBase> {
    let base = read_stacky_any(d.base)?;
    let k = base.cone.ambient_rank();
    let g = d.q.len();
    let mut q = Vec::with_capacity(g);
    for row in &d.q {
        if row.len() != g {
            return err(format!("q must be {g} x {g}"));
        }
        q.push(read_vectors(row, k)?);
    }
    PolarizedBase::new(base, q, d.torus_rank).map_err(model)
}

fn write_vector(v: &[BigInt]) -> Vector {
    v.iter().map(|x| x.to_string()).collect()
}

fn write_vectors(vs: &[IntVector]) -> Vec<Vector> {
    vs.iter().map(|v| write_vector(v)).collect()
}

fn write_stacky(c: &StackyCone) -> ConeDoc {
    ConeDoc { rays: write_vectors(c.cone.rays()), lattice: Some(write_vectors(c.lattice.basis())) }
}

fn write_base(b: &PolarizedBase) -> BaseDoc {
    BaseDoc {
        base: write_stacky(b.base()),
        q: b.q().iter().map(|row| write_vectors(row)).collect(),
        torus_rank: b.torus_rank(),
    }
}

fn payload(doc: &Document) -> serde_json::Value {
    let v = match doc {
        Document::StackyFan(f) => serde_json::to_value(FanDoc {
            ambient_rank: f.ambient_rank(),
            cones: f.cones().iter().map(write_stacky).collect(),
        }),
        Document::Coloring(m) => {
            let colors: BTreeMap<Sublattice, Vec<Cone>> = m.colors();
            serde_json::to_value(ColoringDoc {
                ambient_rank: m.ambient_rank(),
                colors: colors
                    .iter()
                    .map(|(l, cones)| ColorDoc {
                        lattice: write_vectors(l.basis()),
                        cones: cones.iter().map(|c| ConeDoc { rays: write_vectors(c.rays()), lattice: None }).collect(),
                    })
                    .collect(),
            })
        }
        Document::PolarizedBase(b) => serde_json::to_value(write_base(b)),
        Document::AvFan(f) => serde_json::to_value(AvFanDoc {
            base: write_base(f.base()),
            cones: f.cones().iter().map(write_stacky).collect(),
        }),
        Document::Graph(g) => serde_json::to_value(GraphDoc {
            base: write_stacky(&g.base),
            vertices: g.vertices,
            edges: g.edges.iter().map(|(u, v, l)| EdgeDoc { ends: [*u, *v], length: write_vector(l) }).collect(),
        }),
        Document::QuotientComplex(b, qc) => serde_json::to_value(QuotientDoc {
            base: write_base(b),
            cells: qc.cells.iter().map(write_stacky).collect(),
            face_maps: qc
                .face_maps
                .iter()
                .map(|m| FaceMapDoc { source: m.source, target: m.target, m: write_vector(&m.m) })
                .collect(),
        }),
    };
    v.expect("documents serialize")
}

/// Canonical JSON: two-space indentation, arrays of scalars on one line,
/// and a trailing newline.
pub fn to_json(doc: &Document) -> String {
    let env = Envelope { schema_version: SCHEMA_VERSION.into(), kind: doc.kind().into(), payload: payload(doc) };
    let v = serde_json::to_value(&env).expect("documents serialize");
    let mut s = String::new();
    write_value(&mut s, &v, 0);
    s.push('\n');
    s
}

fn write_value(s: &mut String, v: &serde_json::Value, indent: usize) {
    use serde_json::Value;
    let pad = |s: &mut String, n: usize| s.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            s.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    s.push_str(", ");
                }
                s.push_str(&x.to_string());
            }
            s.push(']');
        }
        Value::Array(items) => {
            s.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                pad(s, indent + 2);
                write_value(s, x, indent + 2);
                s.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(s, indent);
            s.push(']');
        }
        Value::Object(map) if map.is_empty() => s.push_str("{}"),
        Value::Object(map) => {
            s.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                pad(s, indent + 2);
                s.push_str(&Value::String(k.clone()).to_string());
                s.push_str(": ");
                write_value(s, x, indent + 2);
                s.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(s, indent);
            s.push('}');
        }
        scalar => s.push_str(&scalar.to_string()),
    }
}
