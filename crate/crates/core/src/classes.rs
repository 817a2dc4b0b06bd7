//! Membership tests for the graph classes DTS, 3DTS, RST, 3RST and FT, with
//! one violation per failed clause instance.

use std::collections::BTreeSet;
use std::fmt;

use crate::cuts::{boundary_connectivity, edge_connectivity, enumerate_cuts, Cut};
use crate::graph::{EdgeId, VertexId};
use crate::instance::{Instance, Mark, Marks};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassKind {
    Dts,
    Dts3,
    Rst,
    Rst3,
    Ft,
}

impl ClassKind {
    pub const ALL: [ClassKind; 5] = [ClassKind::Dts, ClassKind::Dts3, ClassKind::Rst, ClassKind::Rst3, ClassKind::Ft];

    pub fn name(self) -> &'static str {
        match self {
            ClassKind::Dts => "DTS",
            ClassKind::Dts3 => "3DTS",
            ClassKind::Rst => "RST",
            ClassKind::Rst3 => "3RST",
            ClassKind::Ft => "FT",
        }
    }

    pub fn parse(s: &str) -> Option<ClassKind> {
        ClassKind::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Cut(Cut),
    Vertex(VertexId),
    Edge(EdgeId),
    Degree { vertex: VertexId, degree: usize },
    Connectivity(usize),
    BoundaryPaths { vertex: VertexId, paths: usize },
    Missing(&'static str),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Cut(c) => {
                let side: Vec<String> = c.side.iter().map(|v| v.to_string()).collect();
                let edges: Vec<String> = c.edges.iter().map(|e| e.to_string()).collect();
                write!(f, "cut side={{{}}} edges={{{}}}", side.join(","), edges.join(","))
            }
            Witness::Vertex(v) => write!(f, "vertex {v}"),
            Witness::Edge(e) => write!(f, "edge {e}"),
            Witness::Degree { vertex, degree } => write!(f, "vertex {vertex} has degree {degree}"),
            Witness::Connectivity(k) => write!(f, "edge connectivity {k}"),
            Witness::BoundaryPaths { vertex, paths } => {
                write!(f, "vertex {vertex} has {paths} edge-disjoint paths to the boundary")
            }
            Witness::Missing(what) => write!(f, "missing {what}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub clause: &'static str,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassReport {
    pub klass: ClassKind,
    pub pass: bool,
    pub violations: Vec<Violation>,
}

/// Facts shared by all class tests.
struct Analysis {
    connectivity: usize,
    three_cuts: Vec<Cut>,
    boundary: BTreeSet<VertexId>,
}

impl Analysis {
    fn new(inst: &Instance) -> Analysis {
        let g = inst.graph();
        let connectivity = edge_connectivity(g);
        let three_cuts =
            if connectivity >= 3 { enumerate_cuts(g, 3, 1).into_iter().filter(|c| c.size() == 3).collect() } else { Vec::new() };
        Analysis { connectivity, three_cuts, boundary: inst.boundary_vertices() }
    }
}

struct Checker<'a> {
    inst: &'a Instance,
    an: Analysis,
    out: Vec<Violation>,
}

impl<'a> Checker<'a> {
    fn fail(&mut self, clause: &'static str, witness: Witness) {
        self.out.push(Violation { clause, witness });
    }

    fn degree(&self, v: VertexId) -> usize {
        self.inst.graph().degree(v)
    }

    fn connected3(&mut self) {
        if self.an.connectivity < 3 {
            self.fail("1", Witness::Connectivity(self.an.connectivity));
        }
    }

    /// Oriented edges anywhere but at `d`.
    fn stray_orientation(&mut self, d: Option<VertexId>) {
        let g = self.inst.graph();
        let stray: Vec<EdgeId> = self
            .inst
            .orientation()
            .edges()
            .filter(|&e| d.is_none_or(|d| g.other_end(e, d).is_none()))
            .collect();
        for e in stray {
            self.fail("orientation", Witness::Edge(e));
        }
    }

    fn forbid(&mut self, clause: &'static str, marks: Marks, which: &[Mark]) {
        for &m in which {
            if let Some(v) = marks.get(m) {
                self.fail(clause, Witness::Vertex(v));
            }
        }
    }

    fn on(&mut self, clause: &'static str, v: VertexId, boundary: &BTreeSet<VertexId>) {
        if !boundary.contains(&v) {
            self.fail(clause, Witness::Vertex(v));
        }
    }

    fn degree_in(&mut self, clause: &'static str, v: VertexId, lo: usize, hi: usize) {
        let k = self.degree(v);
        if k < lo || k > hi {
            self.fail(clause, Witness::Degree { vertex: v, degree: k });
        }
    }

    /// Every 3-cut must be the star of one of `allowed`.
    fn only_star_cuts(&mut self, clause: &'static str, allowed: &[VertexId], max: usize) {
        let g = self.inst.graph();
        let cuts = self.an.three_cuts.clone();
        for c in &cuts {
            if !allowed.iter().any(|&v| c.is_vertex_star(g, v)) {
                self.fail(clause, Witness::Cut(c.clone()));
            }
        }
        if cuts.len() > max {
            if let Some(c) = cuts.last() {
                self.fail(clause, Witness::Cut(c.clone()));
            }
        }
    }

    /// Degree at least 4 off the marked vertices; with all three marked,
    /// every 3-cut must split them one against two.
    fn separating_cuts(&mut self, clause: &'static str, specials: [Option<VertexId>; 3]) {
        let g = self.inst.graph();
        let marked: Vec<VertexId> = specials.iter().flatten().copied().collect();
        for v in g.vertices().collect::<Vec<_>>() {
            if !marked.contains(&v) && self.degree(v) < 4 {
                self.fail(clause, Witness::Degree { vertex: v, degree: self.degree(v) });
            }
        }
        if marked.len() == 3 {
            for c in self.an.three_cuts.clone() {
                let inside = marked.iter().filter(|v| c.side.contains(v)).count();
                if inside == 0 || inside == 3 {
                    self.fail(clause, Witness::Cut(c));
                }
            }
        }
    }

    fn boundary_paths(&mut self, clause: &'static str) {
        let vs: Vec<VertexId> = self.inst.graph().vertices().filter(|v| !self.an.boundary.contains(v)).collect();
        for v in vs {
            if let Ok(Some(paths)) = boundary_connectivity(self.inst, v) {
                if paths < 5 {
                    self.fail(clause, Witness::BoundaryPaths { vertex: v, paths });
                }
            }
        }
    }
}

/// Unoriented degree-3 vertices: degree 3 and not every edge fixed.
pub fn unoriented_degree3(inst: &Instance) -> Vec<VertexId> {
    let g = inst.graph();
    g.vertices()
        .filter(|&v| g.degree(v) == 3 && g.incident_edges(v).iter().any(|&e| !inst.orientation().contains(e)))
        .collect()
}

pub fn check(inst: &Instance, klass: ClassKind) -> ClassReport {
    let mut c = Checker { inst, an: Analysis::new(inst), out: Vec::new() };
    let g = inst.graph();
    let small = g.vertex_count() <= 2;
    if small {
        c.connected3();
    } else {
        match klass {
            ClassKind::Dts | ClassKind::Dts3 => dts(&mut c, klass == ClassKind::Dts3),
            ClassKind::Rst | ClassKind::Rst3 => rst(&mut c, klass == ClassKind::Rst3),
            ClassKind::Ft => ft(&mut c),
        }
    }
    let violations = c.out;
    ClassReport { klass, pass: violations.is_empty(), violations }
}

pub fn check_dts(inst: &Instance) -> ClassReport {
    check(inst, ClassKind::Dts)
}

pub fn check_3dts(inst: &Instance) -> ClassReport {
    check(inst, ClassKind::Dts3)
}

pub fn check_rst(inst: &Instance) -> ClassReport {
    check(inst, ClassKind::Rst)
}

pub fn check_3rst(inst: &Instance) -> ClassReport {
    check(inst, ClassKind::Rst3)
}

pub fn check_ft(inst: &Instance) -> ClassReport {
    check(inst, ClassKind::Ft)
}

fn dts(c: &mut Checker, three: bool) {
    let inst = c.inst;
    let marks = inst.marks();
    let faces = inst.specified_faces();
    c.connected3();
    if faces.fg.is_none() {
        c.fail("2", Witness::Missing("specified face"));
    }
    if faces.fgs.is_some() {
        c.fail("2", Witness::Missing("a single specified face"));
    }
    c.forbid("2", marks, &[Mark::R]);
    let boundary = c.an.boundary.clone();
    c.stray_orientation(marks.d);
    if let Some(d) = marks.d {
        c.degree_in("3", d, 3, 5);
        c.on("3", d, &boundary);
    }
    for v in [marks.t, marks.s].into_iter().flatten() {
        c.degree_in("4", v, 3, 3);
        c.on("4", v, &boundary);
    }
    if let Some(d) = marks.d {
        let a = unoriented_degree3(inst).len();
        let k = c.degree(d);
        if k + a > 5 {
            c.fail("5", Witness::Degree { vertex: d, degree: k });
        }
    }
    if three {
        c.separating_cuts("6'", [marks.d, marks.t, marks.s]);
    } else {
        let allowed: Vec<VertexId> = [marks.d, marks.t, marks.s].into_iter().flatten().collect();
        c.only_star_cuts("6", &allowed, 3);
    }
    c.boundary_paths("7");
}

fn rst(c: &mut Checker, three: bool) {
    let inst = c.inst;
    let marks = inst.marks();
    let faces = inst.specified_faces();
    c.connected3();
    if faces.fg.is_none() {
        c.fail("2", Witness::Missing("specified face"));
    }
    if faces.fgs.is_some() {
        c.fail("2", Witness::Missing("a single specified face"));
    }
    c.forbid("2", marks, &[Mark::D]);
    c.stray_orientation(None);
    let boundary = c.an.boundary.clone();
    for v in [marks.r, marks.s, marks.t].into_iter().flatten() {
        c.degree_in("3", v, 3, 3);
        c.on("3", v, &boundary);
    }
    if three {
        c.separating_cuts("4'", [marks.r, marks.s, marks.t]);
    } else {
        let allowed: Vec<VertexId> = [marks.r, marks.s, marks.t].into_iter().flatten().collect();
        c.only_star_cuts("4", &allowed, 3);
    }
    c.boundary_paths("5");
}

fn ft(c: &mut Checker) {
    let inst = c.inst;
    let marks = inst.marks();
    let faces = inst.specified_faces();
    c.connected3();
    c.forbid("2", marks, &[Mark::S, Mark::R]);
    if let (Some(_), Some(t)) = (marks.d, marks.t) {
        c.fail("2", Witness::Vertex(t));
    }
    let (Some(fg), Some(fgs)) = (faces.fg, faces.fgs) else {
        c.fail("2", Witness::Missing("two specified faces"));
        return;
    };
    let b1 = inst.face_vertices(fg);
    let b2 = inst.face_vertices(fgs);
    if fg == fgs || b1.is_disjoint(&b2) {
        c.fail("3", Witness::Missing("a vertex common to both specified faces"));
    }
    c.stray_orientation(marks.d);
    if let Some(d) = marks.d {
        c.degree_in("4", d, 3, 5);
        c.on("4", d, &b1);
        c.on("4", d, &b2);
    }
    if let Some(t) = marks.t {
        c.degree_in("5", t, 3, 3);
        let both: BTreeSet<VertexId> = b1.union(&b2).copied().collect();
        c.on("5", t, &both);
    }
    let allowed: Vec<VertexId> = [marks.d, marks.t].into_iter().flatten().collect();
    c.only_star_cuts("6", &allowed, 1);
    c.boundary_paths("7");
}

/// Classes the instance belongs to.
pub fn classify(inst: &Instance) -> Vec<ClassKind> {
    ClassKind::ALL.into_iter().filter(|&k| check(inst, k).pass).collect()
}
