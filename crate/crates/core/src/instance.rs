//! Instances: an embedded graph with a prescription, a partial orientation,
//! up to two specified faces and the special vertices `d`, `t`, `s`, `r`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Dart, EdgeId, Faces, Graph, VertexId};
use crate::z3::Z3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mark {
    D,
    T,
    S,
    R,
}

impl Mark {
    pub const ALL: [Mark; 4] = [Mark::D, Mark::T, Mark::S, Mark::R];

    pub fn letter(self) -> char {
        match self {
            Mark::D => 'd',
            Mark::T => 't',
            Mark::S => 's',
            Mark::R => 'r',
        }
    }

    pub fn from_letter(c: &str) -> Option<Mark> {
        match c {
            "d" => Some(Mark::D),
            "t" => Some(Mark::T),
            "s" => Some(Mark::S),
            "r" => Some(Mark::R),
            _ => None,
        }
    }
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Special vertices. At most one vertex per mark, at most one mark per vertex.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Marks {
    pub d: Option<VertexId>,
    pub t: Option<VertexId>,
    pub s: Option<VertexId>,
    pub r: Option<VertexId>,
}

impl Marks {
    pub fn get(&self, m: Mark) -> Option<VertexId> {
        match m {
            Mark::D => self.d,
            Mark::T => self.t,
            Mark::S => self.s,
            Mark::R => self.r,
        }
    }

    pub fn set(&mut self, m: Mark, v: Option<VertexId>) {
        match m {
            Mark::D => self.d = v,
            Mark::T => self.t = v,
            Mark::S => self.s = v,
            Mark::R => self.r = v,
        }
    }

    pub fn mark_of(&self, v: VertexId) -> Option<Mark> {
        Mark::ALL.into_iter().find(|&m| self.get(m) == Some(v))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Mark, VertexId)> + '_ {
        Mark::ALL.into_iter().filter_map(|m| self.get(m).map(|v| (m, v)))
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.iter().map(|(_, v)| v).collect()
    }

    pub fn count(&self) -> usize {
        self.iter().count()
    }

    /// Drops every mark sitting on `v`.
    pub fn clear_vertex(&mut self, v: VertexId) {
        for m in Mark::ALL {
            if self.get(m) == Some(v) {
                self.set(m, None);
            }
        }
    }
}

/// Specified faces, each named by the smallest dart of its orbit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SpecifiedFaces {
    pub fg: Option<Dart>,
    pub fgs: Option<Dart>,
}

impl SpecifiedFaces {
    pub fn handles(&self) -> impl Iterator<Item = Dart> {
        self.fg.into_iter().chain(self.fgs)
    }

    pub fn count(&self) -> usize {
        self.handles().count()
    }
}

/// Directions of some edges, each stored as the dart leaving the tail.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Orientation {
    tails: BTreeMap<EdgeId, Dart>,
}

impl Orientation {
    pub fn new() -> Orientation {
        Orientation::default()
    }

    pub fn tail(&self, e: EdgeId) -> Option<Dart> {
        self.tails.get(&e).copied()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.tails.contains_key(&e)
    }

    /// Directs the edge of `tail` away from the vertex `tail` leaves.
    pub fn set(&mut self, tail: Dart) {
        self.tails.insert(tail.edge(), tail);
    }

    pub fn remove(&mut self, e: EdgeId) -> Option<Dart> {
        self.tails.remove(&e)
    }

    pub fn len(&self) -> usize {
        self.tails.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tails.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, Dart)> + '_ {
        self.tails.iter().map(|(&e, &d)| (e, d))
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.tails.keys().copied()
    }

    /// Every edge turned around.
    pub fn reversed(&self) -> Orientation {
        Orientation { tails: self.tails.iter().map(|(&e, &d)| (e, d.twin())).collect() }
    }

    pub fn retain(&mut self, mut keep: impl FnMut(EdgeId) -> bool) {
        self.tails.retain(|&e, _| keep(e));
    }
}

impl FromIterator<Dart> for Orientation {
    fn from_iter<I: IntoIterator<Item = Dart>>(iter: I) -> Self {
        let mut o = Orientation::new();
        for d in iter {
            o.set(d);
        }
        o
    }
}

/// Textual description of an instance, as read from a file or produced by
/// the generators. Rotations list edge ids counterclockwise; a loop appears
/// twice and its first appearance is the dart leaving endpoint 0.
#[derive(Clone, Debug, Default)]
pub struct InstanceSpec {
    pub vertices: Vec<(VertexId, Z3, Option<Mark>)>,
    pub edges: Vec<(EdgeId, VertexId, VertexId)>,
    pub rotations: Vec<(VertexId, Vec<EdgeId>)>,
    /// `(edge, tail vertex)`.
    pub orient: Vec<(EdgeId, VertexId)>,
    /// `(edge, vertex, occurrence)`; the occurrence picks a loop's second dart.
    pub fg: Option<(EdgeId, VertexId, usize)>,
    pub fgs: Option<(EdgeId, VertexId, usize)>,
}

impl InstanceSpec {
    pub fn vertex(&mut self, id: VertexId, p: i64, mark: Option<Mark>) -> &mut Self {
        self.vertices.push((id, Z3::new(p), mark));
        self
    }

    pub fn edge(&mut self, id: EdgeId, u: VertexId, v: VertexId) -> &mut Self {
        self.edges.push((id, u, v));
        self
    }

    pub fn rot(&mut self, v: VertexId, edges: &[EdgeId]) -> &mut Self {
        self.rotations.push((v, edges.to_vec()));
        self
    }

    pub fn orient(&mut self, e: EdgeId, tail: VertexId) -> &mut Self {
        self.orient.push((e, tail));
        self
    }

    pub fn build(&self) -> Result<Instance> {
        Instance::build(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub(crate) graph: Graph,
    pub(crate) p: BTreeMap<VertexId, Z3>,
    pub(crate) orientation: Orientation,
    pub(crate) faces: SpecifiedFaces,
    pub(crate) marks: Marks,
}

/// Outcome of checking a total orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    /// `(vertex, residual, prescription)` for each vertex that fails.
    pub offenders: Vec<(VertexId, Z3, Z3)>,
}

impl VerifyReport {
    pub fn is_valid(&self) -> bool {
        self.offenders.is_empty()
    }
}

fn spec_dart(g: &Graph, e: EdgeId, v: VertexId, occurrence: usize) -> Result<Dart> {
    let [a, b] = g.ends(e).ok_or(Error::UnknownEdge(e))?;
    if a == b {
        if a != v {
            return Err(Error::NotIncident { vertex: v, edge: e });
        }
        return Ok(Dart::new(e, occurrence.min(1)));
    }
    g.dart_at(e, v).ok_or(Error::NotIncident { vertex: v, edge: e })
}

impl Instance {
    pub fn build(spec: &InstanceSpec) -> Result<Instance> {
        let mut p = BTreeMap::new();
        let mut marks = Marks::default();
        for &(v, value, mark) in &spec.vertices {
            if p.insert(v, value).is_some() {
                return Err(Error::DuplicateVertex(v));
            }
            if let Some(m) = mark {
                if marks.get(m).is_some() {
                    return Err(Error::DuplicateMark(v));
                }
                marks.set(m, Some(v));
            }
        }
        let mut ends = BTreeMap::new();
        for &(e, u, v) in &spec.edges {
            for x in [u, v] {
                if !p.contains_key(&x) {
                    return Err(Error::UnknownVertex(x));
                }
            }
            if ends.insert(e, [u, v]).is_some() {
                return Err(Error::DuplicateEdge(e));
            }
        }
        let mut rotation: BTreeMap<VertexId, Vec<Dart>> = p.keys().map(|&v| (v, Vec::new())).collect();
        let mut listed = BTreeSet::new();
        for (v, list) in &spec.rotations {
            let slot = rotation.get_mut(v).ok_or(Error::UnknownVertex(*v))?;
            if !listed.insert(*v) {
                return Err(Error::MalformedRotation { vertex: *v, reason: "rotation given twice".into() });
            }
            let mut count: BTreeMap<EdgeId, usize> = BTreeMap::new();
            for &e in list {
                let [a, b] = *ends.get(&e).ok_or(Error::UnknownEdge(e))?;
                let seen = count.entry(e).or_default();
                let dart = if a == b && a == *v {
                    if *seen >= 2 {
                        return Err(Error::MalformedRotation {
                            vertex: *v,
                            reason: format!("loop {e} listed more than twice"),
                        });
                    }
                    Dart::new(e, *seen)
                } else if a == *v || b == *v {
                    if *seen >= 1 {
                        return Err(Error::MalformedRotation {
                            vertex: *v,
                            reason: format!("edge {e} listed twice"),
                        });
                    }
                    Dart::new(e, if a == *v { 0 } else { 1 })
                } else {
                    return Err(Error::NotIncident { vertex: *v, edge: e });
                };
                *seen += 1;
                slot.push(dart);
            }
        }
        let graph = Graph::from_parts(ends, rotation)?;
        let mut orientation = Orientation::new();
        for &(e, tail) in &spec.orient {
            let d = spec_dart(&graph, e, tail, 0)?;
            if orientation.contains(e) {
                return Err(Error::AlreadyOriented(e));
            }
            orientation.set(d);
        }
        let fg = spec.fg.map(|(e, v, k)| spec_dart(&graph, e, v, k)).transpose()?;
        let fgs = spec.fgs.map(|(e, v, k)| spec_dart(&graph, e, v, k)).transpose()?;
        let inst = Instance { graph, p, orientation, faces: SpecifiedFaces { fg, fgs }, marks };
        let inst = inst.canonical();
        inst.validate()?;
        Ok(inst)
    }

    /// Assembles an instance without any of the load-time checks. Only
    /// meant for exercising code paths that valid instances cannot reach.
    #[doc(hidden)]
    pub fn new_unchecked(
        graph: Graph,
        p: BTreeMap<VertexId, Z3>,
        orientation: Orientation,
        faces: SpecifiedFaces,
        marks: Marks,
    ) -> Instance {
        Instance { graph, p, orientation, faces, marks }
    }

    /// Checks every instance invariant.
    pub fn validate(&self) -> Result<()> {
        let g = &self.graph;
        for v in g.vertices() {
            if !self.p.contains_key(&v) {
                return Err(Error::UnknownVertex(v));
            }
        }
        if self.p.len() != g.vertex_count() {
            let extra = self.p.keys().find(|v| !g.contains_vertex(**v)).copied().unwrap_or(0);
            return Err(Error::UnknownVertex(extra));
        }
        g.check_planar()?;
        let sum: Z3 = self.p.values().sum();
        if !sum.is_zero() {
            return Err(Error::InvalidPrescription(sum));
        }
        for (e, d) in self.orientation.iter() {
            if !g.contains_edge(e) || d.edge() != e {
                return Err(Error::UnknownEdge(e));
            }
        }
        let mut seen = BTreeSet::new();
        for (_, v) in self.marks.iter() {
            if !g.contains_vertex(v) {
                return Err(Error::UnknownVertex(v));
            }
            if !seen.insert(v) {
                return Err(Error::DuplicateMark(v));
            }
        }
        let faces = g.faces();
        for h in self.faces.handles() {
            match faces.face_of(h) {
                Some(i) if faces.handle(i) == h => {}
                _ => return Err(Error::BadFaceHandle(h)),
            }
        }
        if let Some(d) = self.marks.d {
            for e in g.incident_edges(d) {
                if !self.orientation.contains(e) {
                    return Err(Error::UnorientedAtDirected { vertex: d, edge: e });
                }
            }
            let residual = self.residual(d, &self.orientation)?;
            if residual != self.p[&d] {
                return Err(Error::DirectedResidual { vertex: d, residual, prescription: self.p[&d] });
            }
        }
        Ok(())
    }

    /// Canonical labelling: rotations start at their smallest dart, loops are
    /// labelled so their first dart comes first, face handles are orbit minima.
    pub fn canonical(&self) -> Instance {
        let mut out = self.clone();
        let swapped = out.graph.canonicalize();
        let swap = |d: Dart| if swapped.contains(&d.edge()) { d.twin() } else { d };
        let mut orientation = Orientation::new();
        for (_, d) in self.orientation.iter() {
            // A loop's direction carries no information; keep its first dart.
            let d = if out.graph.is_loop(d.edge()) { Dart::new(d.edge(), 0) } else { d };
            orientation.set(d);
        }
        out.orientation = orientation;
        let faces = out.graph.faces();
        let normal = |h: Option<Dart>| h.map(swap).and_then(|d| faces.handle_of(d));
        out.faces = SpecifiedFaces { fg: normal(self.faces.fg), fgs: normal(self.faces.fgs) };
        out
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn p(&self, v: VertexId) -> Z3 {
        self.p.get(&v).copied().unwrap_or_default()
    }

    pub fn prescription(&self) -> &BTreeMap<VertexId, Z3> {
        &self.p
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn specified_faces(&self) -> SpecifiedFaces {
        self.faces
    }

    pub fn marks(&self) -> Marks {
        self.marks
    }

    pub fn directed_vertex(&self) -> Option<VertexId> {
        self.marks.d
    }

    /// `(indegree - outdegree)` at `v` over the edges `o` orients; loops add 0.
    pub fn residual(&self, v: VertexId, o: &Orientation) -> Result<Z3> {
        if !self.graph.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
        let mut r = Z3::ZERO;
        for &d in self.graph.rotation(v) {
            if self.graph.is_loop(d.edge()) {
                continue;
            }
            match o.tail(d.edge()) {
                Some(t) if t == d => r -= Z3::ONE,
                Some(_) => r += Z3::ONE,
                None => {}
            }
        }
        Ok(r)
    }

    /// Residual over the instance's own fixed edges.
    pub fn fixed_residual(&self, v: VertexId) -> Z3 {
        self.residual(v, &self.orientation).unwrap_or_default()
    }

    /// Checks a total orientation that must extend the fixed one.
    pub fn verify(&self, o: &Orientation) -> Result<VerifyReport> {
        for (e, d) in o.iter() {
            if !self.graph.contains_edge(e) || d.edge() != e {
                return Err(Error::UnknownEdge(e));
            }
        }
        for (e, d) in self.orientation.iter() {
            match o.tail(e) {
                None => return Err(Error::Unoriented(e)),
                Some(t) if t != d && !self.graph.is_loop(e) => {
                    return Err(Error::OrientationConflict { edge: e })
                }
                _ => {}
            }
        }
        if let Some(e) = self.graph.edge_ids().find(|&e| !o.contains(e)) {
            return Err(Error::Unoriented(e));
        }
        let mut offenders = Vec::new();
        for v in self.graph.vertices() {
            let r = self.residual(v, o)?;
            if r != self.p(v) {
                offenders.push((v, r, self.p(v)));
            }
        }
        Ok(VerifyReport { offenders })
    }

    /// Convenience: `verify` that reports any error as invalid.
    pub fn is_valid_orientation(&self, o: &Orientation) -> bool {
        self.verify(o).is_ok_and(|r| r.is_valid())
    }

    pub fn unoriented_edges(&self) -> Vec<EdgeId> {
        self.graph.edge_ids().filter(|&e| !self.orientation.contains(e)).collect()
    }

    pub fn unoriented_count(&self) -> usize {
        self.graph.edge_count() - self.orientation.len()
    }

    /// Progress measure `(|E|, number of unoriented edges)`.
    pub fn measure(&self) -> (usize, usize) {
        (self.graph.edge_count(), self.unoriented_count())
    }

    /// Dart leaving `tail` along `e`, for building orientations by vertex.
    pub fn dart(&self, e: EdgeId, tail: VertexId) -> Result<Dart> {
        spec_dart(&self.graph, e, tail, 0)
    }

    pub fn tail_vertex(&self, d: Dart) -> VertexId {
        self.graph.dart_vertex(d)
    }

    pub fn faces(&self) -> Faces {
        self.graph.faces()
    }

    /// Vertices on the boundary of the face with handle `h`.
    pub fn face_vertices(&self, h: Dart) -> BTreeSet<VertexId> {
        let faces = self.graph.faces();
        faces.face_of(h).map(|i| faces.vertices(&self.graph, i)).unwrap_or_default()
    }

    pub fn face_edges(&self, h: Dart) -> BTreeSet<EdgeId> {
        let faces = self.graph.faces();
        faces.face_of(h).map(|i| faces.edges(i)).unwrap_or_default()
    }

    /// Union of the boundary vertices of the specified faces.
    pub fn boundary_vertices(&self) -> BTreeSet<VertexId> {
        let faces = self.graph.faces();
        let mut out = BTreeSet::new();
        for h in self.faces.handles() {
            if let Some(i) = faces.face_of(h) {
                out.extend(faces.vertices(&self.graph, i));
            }
        }
        out
    }

    pub fn boundary_edges(&self) -> BTreeSet<EdgeId> {
        let faces = self.graph.faces();
        let mut out = BTreeSet::new();
        for h in self.faces.handles() {
            if let Some(i) = faces.face_of(h) {
                out.extend(faces.edges(i));
            }
        }
        out
    }

    /// Negated prescription and every fixed edge reversed.
    pub fn reversed(&self) -> Instance {
        let mut out = self.clone();
        for value in out.p.values_mut() {
            *value = -*value;
        }
        out.orientation = self.orientation.reversed();
        out
    }

    pub fn with_prescription(&self, v: VertexId, value: Z3) -> Instance {
        let mut out = self.clone();
        out.p.insert(v, value);
        out
    }

    pub fn with_marks(&self, marks: Marks) -> Result<Instance> {
        let mut out = self.clone();
        out.marks = marks;
        out.validate()?;
        Ok(out)
    }

    pub fn with_faces(&self, fg: Option<Dart>, fgs: Option<Dart>) -> Result<Instance> {
        let faces = self.graph.faces();
        let norm = |h: Option<Dart>| -> Result<Option<Dart>> {
            h.map(|d| faces.handle_of(d).ok_or(Error::BadFaceHandle(d))).transpose()
        };
        let mut out = self.clone();
        out.faces = SpecifiedFaces { fg: norm(fg)?, fgs: norm(fgs)? };
        Ok(out)
    }

    /// Same instance with the given edges additionally fixed.
    pub fn with_orientation(&self, o: &Orientation) -> Result<Instance> {
        let mut out = self.clone();
        for (e, d) in o.iter() {
            if !self.graph.contains_edge(e) {
                return Err(Error::UnknownEdge(e));
            }
            match self.orientation.tail(e) {
                Some(t) if t != d => return Err(Error::OrientationConflict { edge: e }),
                _ => out.orientation.set(d),
            }
        }
        Ok(out)
    }
}
