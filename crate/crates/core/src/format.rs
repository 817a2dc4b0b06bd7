//! The `z3g` text format.
//!
//! ```text
//! z3g 1
//! vertex 0 p=1 mark=d
//! vertex 1 p=-1
//! edge 0 0 1
//! rot 0 0 1 2
//! orient 0 0
//! face FG 0 0
//! ```
//!
//! One directive per line, `#` starts a comment. Rotations list edge ids
//! counterclockwise, a loop twice. A face is named by a dart, given as an
//! edge and the vertex it leaves; a trailing `2` selects the second dart of
//! a loop. Orientation files hold `orient` lines only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Dart, EdgeId, VertexId};
use crate::instance::{Instance, InstanceSpec, Mark, Orientation};
use crate::z3::Z3;

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn number<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| err(line, format!("bad {what} `{tok}`")))
}

/// Non-empty, comment-stripped lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

pub fn parse_spec(text: &str) -> Result<InstanceSpec> {
    let mut spec = InstanceSpec::default();
    let mut header = false;
    let mut edge_lines = Vec::new();
    let mut rot_lines = Vec::new();
    for (n, toks) in lines(text) {
        let mut it = toks.iter().copied();
        let kind = it.next().unwrap();
        if !header {
            if kind != "z3g" || it.next() != Some("1") || it.next().is_some() {
                return Err(err(n, "expected header `z3g 1`"));
            }
            header = true;
            continue;
        }
        match kind {
            "vertex" => {
                let id: VertexId = number(n, it.next(), "vertex id")?;
                let mut p = None;
                let mut mark = None;
                for tok in it.by_ref() {
                    if let Some(v) = tok.strip_prefix("p=") {
                        let v: i64 = v.parse().map_err(|_| err(n, format!("bad prescription `{v}`")))?;
                        if !(-1..=1).contains(&v) {
                            return Err(err(n, format!("prescription {v} is not one of -1, 0, 1")));
                        }
                        p = Some(Z3::new(v));
                    } else if let Some(m) = tok.strip_prefix("mark=") {
                        mark = Some(Mark::from_letter(m).ok_or_else(|| err(n, format!("unknown mark `{m}`")))?);
                    } else {
                        return Err(err(n, format!("unexpected `{tok}`")));
                    }
                }
                let p = p.ok_or_else(|| err(n, "missing p="))?;
                spec.vertices.push((id, p, mark));
            }
            "edge" => {
                let id: EdgeId = number(n, it.next(), "edge id")?;
                let u: VertexId = number(n, it.next(), "endpoint")?;
                let v: VertexId = number(n, it.next(), "endpoint")?;
                if let Some(t) = it.next() {
                    return Err(err(n, format!("unexpected `{t}`")));
                }
                spec.edges.push((id, u, v));
                edge_lines.push(n);
            }
            "rot" => {
                let v: VertexId = number(n, it.next(), "vertex id")?;
                let es = it.map(|t| number::<EdgeId>(n, Some(t), "edge id")).collect::<Result<Vec<_>>>()?;
                if spec.rotations.iter().any(|(w, _)| *w == v) {
                    return Err(err(n, format!("second rotation for vertex {v}")));
                }
                spec.rotations.push((v, es));
                rot_lines.push(n);
            }
            "orient" => {
                let e: EdgeId = number(n, it.next(), "edge id")?;
                let t: VertexId = number(n, it.next(), "tail vertex")?;
                if let Some(x) = it.next() {
                    return Err(err(n, format!("unexpected `{x}`")));
                }
                spec.orient.push((e, t));
            }
            "face" => {
                let which = it.next().ok_or_else(|| err(n, "missing FG or FGS"))?;
                let e: EdgeId = number(n, it.next(), "edge id")?;
                let v: VertexId = number(n, it.next(), "vertex id")?;
                let occ = match it.next() {
                    None => 0,
                    Some("2") => 1,
                    Some(t) => return Err(err(n, format!("unexpected `{t}`"))),
                };
                let slot = match which {
                    "FG" => &mut spec.fg,
                    "FGS" => &mut spec.fgs,
                    _ => return Err(err(n, format!("unknown face `{which}`"))),
                };
                if slot.is_some() {
                    return Err(err(n, format!("face {which} given twice")));
                }
                *slot = Some((e, v, occ));
            }
            "z3g" => return Err(err(n, "repeated header")),
            other => return Err(err(n, format!("unknown directive `{other}`"))),
        }
    }
    if !header {
        return Err(err(1, "empty file"));
    }
    check_lines(&spec, &edge_lines, &rot_lines)?;
    Ok(spec)
}

/// Cross-line checks that can still blame a single line: edge endpoints
/// exist and each rotation lists exactly the darts at its vertex.
fn check_lines(spec: &InstanceSpec, edge_lines: &[usize], rot_lines: &[usize]) -> Result<()> {
    let vertices: BTreeSet<VertexId> = spec.vertices.iter().map(|v| v.0).collect();
    let mut ends = BTreeMap::new();
    for (&(e, u, v), &n) in spec.edges.iter().zip(edge_lines) {
        for x in [u, v] {
            if !vertices.contains(&x) {
                return Err(err(n, format!("edge {e} uses undeclared vertex {x}")));
            }
        }
        if ends.insert(e, (u, v)).is_some() {
            return Err(err(n, format!("edge {e} declared twice")));
        }
    }
    for ((v, es), &n) in spec.rotations.iter().zip(rot_lines) {
        let mut counts: BTreeMap<EdgeId, usize> = BTreeMap::new();
        for &e in es {
            *counts.entry(e).or_insert(0) += 1;
        }
        for (&e, &c) in &counts {
            let Some(&(a, b)) = ends.get(&e) else {
                return Err(err(n, format!("rotation of vertex {v} names unknown edge {e}")));
            };
            let want = usize::from(a == *v) + usize::from(b == *v);
            if want == 0 {
                return Err(err(n, format!("edge {e} is not incident with vertex {v}")));
            }
            if c != want {
                return Err(err(n, format!("edge {e} appears {c} times in the rotation of vertex {v}, expected {want}")));
            }
        }
    }
    Ok(())
}

/// Reads an instance. Structural problems found after parsing (planarity,
/// prescription sum and so on) come back as their own error kinds.
pub fn parse(text: &str) -> Result<Instance> {
    parse_spec(text)?.build()
}

fn dart_ref(inst: &Instance, d: Dart) -> String {
    let g = inst.graph();
    let v = g.dart_vertex(d);
    if g.is_loop(d.edge()) && d.side() == 1 {
        format!("{} {v} 2", d.edge())
    } else {
        format!("{} {v}", d.edge())
    }
}

/// Canonical text: header, vertices, edges, rotations, orientation, faces,
/// each sorted by id.
pub fn write(inst: &Instance) -> String {
    let inst = inst.canonical();
    let g = inst.graph();
    let marks = inst.marks();
    let mut s = String::from("z3g 1\n");
    for v in g.vertices() {
        let _ = write!(s, "vertex {v} p={}", inst.p(v).balanced());
        if let Some(m) = marks.mark_of(v) {
            let _ = write!(s, " mark={m}");
        }
        s.push('\n');
    }
    for (e, [a, b]) in g.edges() {
        let _ = writeln!(s, "edge {e} {a} {b}");
    }
    for v in g.vertices() {
        let _ = write!(s, "rot {v}");
        for d in g.rotation(v) {
            let _ = write!(s, " {}", d.edge());
        }
        s.push('\n');
    }
    s.push_str(&write_orientation(&inst, inst.orientation()));
    let sf = inst.specified_faces();
    for (name, h) in [("FG", sf.fg), ("FGS", sf.fgs)] {
        if let Some(h) = h {
            let _ = writeln!(s, "face {name} {}", dart_ref(&inst, h));
        }
    }
    s
}

pub fn write_orientation(inst: &Instance, o: &Orientation) -> String {
    let mut s = String::new();
    for (e, d) in o.iter() {
        let _ = writeln!(s, "orient {e} {}", inst.tail_vertex(d));
    }
    s
}

/// Reads `orient` lines against an instance.
pub fn parse_orientation(inst: &Instance, text: &str) -> Result<Orientation> {
    let mut o = Orientation::new();
    for (n, toks) in lines(text) {
        if toks[0] != "orient" || toks.len() != 3 {
            return Err(err(n, "expected `orient <edge> <tail>`"));
        }
        let e: EdgeId = number(n, Some(toks[1]), "edge id")?;
        let t: VertexId = number(n, Some(toks[2]), "tail vertex")?;
        let d = inst.dart(e, t).map_err(|x| err(n, x.to_string()))?;
        if o.contains(e) {
            return Err(err(n, format!("edge {e} oriented twice")));
        }
        o.set(d);
    }
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{gen, Family, FamilySpec};

    #[test]
    fn families_round_trip() {
        for f in Family::ALL {
            let (inst, _) = gen(&FamilySpec::new(f)).unwrap();
            let text = write(&inst);
            let back = parse(&text).unwrap();
            assert_eq!(back, inst.canonical());
            assert_eq!(write(&back), text);
        }
    }

    #[test]
    fn loop_faces_round_trip() {
        let text = "z3g 1\nvertex 0 p=0\nvertex 1 p=0\nedge 0 0 0\nedge 1 0 1\nedge 2 0 1\nedge 3 0 1\n\
                    rot 0 0 0 1 2 3\nrot 1 3 2 1\nface FG 0 0 2\n";
        let inst = parse(text).unwrap();
        let again = parse(&write(&inst)).unwrap();
        assert_eq!(again, inst);
    }

    #[test]
    fn errors_name_the_line() {
        let bad = "z3g 1\nvertex 0 p=0\n# comment\nrot 0 1 1 1\n";
        match parse(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("vertex 0 p=0\n"), Err(Error::Parse { line: 1, .. })));
        let dup = "z3g 1\nvertex 0 p=0\nvertex 1 p=0\nedge 0 0 1\nrot 0 0 0\nrot 1 0\n";
        assert!(matches!(parse(dup), Err(Error::Parse { line: 5, .. })));
        assert!(matches!(parse("z3g 1\nvertex 0 p=2\n"), Err(Error::Parse { line: 2, .. })));
    }
}
