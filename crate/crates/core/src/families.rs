//! Generators: the named families without valid orientations, and a seeded
//! random corpus of instances that pass a chosen class test.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classes::{check, ClassKind};
use crate::cuts::edge_connectivity;
use crate::error::{Error, Result};
use crate::graph::{Dart, EdgeId, Graph, VertexId};
use crate::instance::{Instance, Mark, Marks, Orientation, SpecifiedFaces};
use crate::z3::Z3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    D5a,
    D5b,
    Ts33a,
    Ts33b,
    Star,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::D5a, Family::D5b, Family::Ts33a, Family::Ts33b, Family::Star];

    pub fn name(self) -> &'static str {
        match self {
            Family::D5a => "d5a",
            Family::D5b => "d5b",
            Family::Ts33a => "ts33a",
            Family::Ts33b => "ts33b",
            Family::Star => "star",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which family to build. `k` is used by the star family only; `blob` by
/// D5a and TS33a: 1 collapses the blob to one vertex, `m >= 2` replaces it
/// by a ring of `m` vertices joined by doubled edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub k: u32,
    pub blob: u32,
}

impl FamilySpec {
    pub fn new(family: Family) -> FamilySpec {
        FamilySpec { family, k: 1, blob: 1 }
    }

    pub fn star(k: u32) -> FamilySpec {
        FamilySpec { family: Family::Star, k, blob: 1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expected {
    Unsat,
}

/// Edge ends and an optional control point the edge bends through.
type PlanarEdge = (VertexId, VertexId, Option<(f64, f64)>);

/// Plane drawing from which rotations are read off: darts at a vertex are
/// sorted counterclockwise by the direction of their first segment.
#[derive(Clone, Debug, Default)]
pub struct PlaneBuilder {
    pos: BTreeMap<VertexId, (f64, f64)>,
    p: BTreeMap<VertexId, Z3>,
    marks: Marks,
    edges: Vec<PlanarEdge>,
    orient: Vec<(EdgeId, VertexId)>,
}

impl PlaneBuilder {
    pub fn vertex(&mut self, v: VertexId, x: f64, y: f64, p: i64) -> &mut Self {
        self.pos.insert(v, (x, y));
        self.p.insert(v, Z3::new(p));
        self
    }

    pub fn mark(&mut self, v: VertexId, m: Mark) -> &mut Self {
        self.marks.set(m, Some(v));
        self
    }

    pub fn edge(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        self.edges.push((u, v, None));
        (self.edges.len() - 1) as EdgeId
    }

    /// Edge drawn as two segments through the control point.
    pub fn bent(&mut self, u: VertexId, v: VertexId, ctrl: (f64, f64)) -> EdgeId {
        self.edges.push((u, v, Some(ctrl)));
        (self.edges.len() - 1) as EdgeId
    }

    pub fn orient(&mut self, e: EdgeId, tail: VertexId) -> &mut Self {
        self.orient.push((e, tail));
        self
    }

    /// First point after the tail along the drawing of dart `d`.
    fn towards(&self, d: Dart) -> (f64, f64) {
        let (u, v, c) = self.edges[d.edge() as usize];
        c.unwrap_or(self.pos[if d.side() == 0 { &v } else { &u }])
    }

    pub fn graph(&self) -> Result<Graph> {
        let mut ends = BTreeMap::new();
        let mut rotation: BTreeMap<VertexId, Vec<Dart>> = self.pos.keys().map(|&v| (v, Vec::new())).collect();
        for (i, &(u, v, _)) in self.edges.iter().enumerate() {
            let e = i as EdgeId;
            ends.insert(e, [u, v]);
            rotation.get_mut(&u).ok_or(Error::UnknownVertex(u))?.push(Dart::new(e, 0));
            rotation.get_mut(&v).ok_or(Error::UnknownVertex(v))?.push(Dart::new(e, 1));
        }
        for (v, darts) in rotation.iter_mut() {
            let (x, y) = self.pos[v];
            let angle = |d: &Dart| {
                let (tx, ty) = self.towards(*d);
                (ty - y).atan2(tx - x)
            };
            darts.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
        }
        Graph::from_parts(ends, rotation)
    }

    /// Signed area enclosed by the drawn boundary of a face orbit.
    fn area(&self, g: &Graph, orbit: &[Dart]) -> f64 {
        let mut pts = Vec::new();
        for &d in orbit {
            pts.push(self.pos[&g.dart_vertex(d)]);
            if let Some(c) = self.edges[d.edge() as usize].2 {
                pts.push(c);
            }
        }
        let n = pts.len();
        (0..n).map(|i| pts[i].0 * pts[(i + 1) % n].1 - pts[(i + 1) % n].0 * pts[i].1).sum::<f64>() / 2.0
    }

    /// Handle of the unbounded face: the only orbit traced counterclockwise.
    pub fn outer_face(&self, g: &Graph) -> Option<Dart> {
        let faces = g.faces();
        (0..faces.len()).find(|&i| self.area(g, faces.orbit(i)) > 0.0).map(|i| faces.handle(i))
    }

    /// Handle of the face whose boundary has exactly these vertices.
    pub fn face_with_vertices(g: &Graph, vs: &BTreeSet<VertexId>) -> Option<Dart> {
        let faces = g.faces();
        (0..faces.len()).find(|&i| &faces.vertices(g, i) == vs).map(|i| faces.handle(i))
    }

    pub fn build(&self, fg: Option<Dart>, fgs: Option<Dart>) -> Result<Instance> {
        let graph = self.graph()?;
        self.build_from(graph, fg, fgs)
    }

    fn build_from(&self, graph: Graph, fg: Option<Dart>, fgs: Option<Dart>) -> Result<Instance> {
        let mut orientation = Orientation::new();
        for &(e, tail) in &self.orient {
            orientation.set(graph.dart_at(e, tail).ok_or(Error::NotIncident { vertex: tail, edge: e })?);
        }
        let inst = Instance::new_unchecked(graph, self.p.clone(), orientation, SpecifiedFaces { fg, fgs }, self.marks);
        let inst = inst.canonical();
        inst.validate()?;
        Ok(inst)
    }
}

/// Replaces vertex `b` by a ring of `m` vertices joined by doubled edges; the
/// darts at `b` are shared out over the ring in contiguous blocks, and the
/// prescription of `b` stays on the first ring vertex (which keeps id `b`).
fn ring_blob(g: &Graph, p: &mut BTreeMap<VertexId, Z3>, b: VertexId, m: u32) -> Result<Graph> {
    if m == 0 {
        return Err(Error::BadFamily("blob size must be positive".into()));
    }
    if m == 1 {
        return Ok(g.clone());
    }
    let attach: Vec<Dart> = g.rotation(b).to_vec();
    let k = attach.len();
    let first_new = g.vertices().max().unwrap_or(0) + 1;
    let ring: Vec<VertexId> = (0..m).map(|i| if i == 0 { b } else { first_new + i - 1 }).collect();
    let mut ends: BTreeMap<EdgeId, [VertexId; 2]> = g.edges().collect();
    let mut rotation: BTreeMap<VertexId, Vec<Dart>> = g.vertices().map(|v| (v, g.rotation(v).to_vec())).collect();
    let mut next_edge = g.next_edge_id();
    let mut blocks: Vec<Vec<Dart>> = vec![Vec::new(); m as usize];
    for (j, &d) in attach.iter().enumerate() {
        let i = j * m as usize / k.max(1);
        blocks[i].push(d);
        ends.get_mut(&d.edge()).unwrap()[d.side()] = ring[i];
    }
    // (outer, inner) pair from ring[i] to ring[i + 1].
    let mut pairs = Vec::new();
    for i in 0..m as usize {
        let (a, c) = (ring[i], ring[(i + 1) % m as usize]);
        let outer = next_edge;
        let inner = next_edge + 1;
        next_edge += 2;
        ends.insert(outer, [a, c]);
        ends.insert(inner, [a, c]);
        pairs.push((outer, inner));
    }
    for i in 0..m as usize {
        let (o_next, i_next) = pairs[i];
        let (o_prev, i_prev) = pairs[(i + m as usize - 1) % m as usize];
        let mut rot = blocks[i].clone();
        rot.extend([Dart::new(o_next, 0), Dart::new(i_next, 0), Dart::new(i_prev, 1), Dart::new(o_prev, 1)]);
        rotation.insert(ring[i], rot);
        if i > 0 {
            p.insert(ring[i], Z3::ZERO);
        }
    }
    let out = Graph::from_parts(ends, rotation)?;
    out.check_planar()?;
    if edge_connectivity(&out) < 3 {
        return Err(Error::BadFamily("blob completion is not 3-edge-connected".into()));
    }
    Ok(out)
}

fn with_blob(pb: &PlaneBuilder, b: VertexId, m: u32) -> Result<Instance> {
    let g = pb.graph()?;
    let fg = pb.outer_face(&g);
    let mut pb = pb.clone();
    let g = ring_blob(&g, &mut pb.p, b, m)?;
    // Ring expansion keeps every old dart, so the outer face survives by dart.
    let fg = fg.and_then(|d| g.faces().handle_of(d));
    pb.build_from(g, fg, None)
}

/// Degree-5 directed vertex joined by two parallel edges to a degree-3
/// vertex `t`, both edges entering `t`, with `p(t) = -1`.
fn d5a(blob: u32) -> Result<Instance> {
    let (d, t, b) = (0, 1, 2);
    let mut pb = PlaneBuilder::default();
    pb.vertex(d, -0.5, -0.5, 1).vertex(t, 0.5, -0.5, -1).vertex(b, 0.0, 1.5, 0);
    pb.mark(d, Mark::D).mark(t, Mark::T);
    let e0 = pb.bent(d, t, (0.0, -0.3));
    let e1 = pb.bent(d, t, (0.0, -0.7));
    let e2 = pb.bent(d, b, (-0.9, 0.6));
    let e3 = pb.bent(d, b, (-0.5, 0.6));
    let e4 = pb.bent(d, b, (-0.1, 0.6));
    pb.edge(t, b);
    for e in [e0, e1, e2, e3, e4] {
        pb.orient(e, d);
    }
    with_blob(&pb, b, blob)
}

/// Three vertices: `d` with two edges into `t` and two edges from `s`.
fn d5b() -> Result<Instance> {
    let (d, t, s) = (0, 1, 2);
    let mut pb = PlaneBuilder::default();
    pb.vertex(d, -0.5, -0.5, 0).vertex(t, 0.5, -0.5, -1).vertex(s, -0.5, 0.5, 1);
    pb.mark(d, Mark::D).mark(t, Mark::T).mark(s, Mark::S);
    let e0 = pb.bent(d, t, (0.0, -0.3));
    let e1 = pb.bent(d, t, (0.0, -0.7));
    let e2 = pb.bent(d, s, (-0.3, 0.0));
    let e3 = pb.bent(d, s, (-0.7, 0.0));
    pb.edge(s, t);
    pb.orient(e0, d).orient(e1, d).orient(e2, s).orient(e3, s);
    let g = pb.graph()?;
    let fg = pb.outer_face(&g);
    pb.build_from(g, fg, None)
}

/// Square `d r s t` around a blob; every edge at `d` points away from it.
fn ts33a(blob: u32) -> Result<Instance> {
    let (d, r, s, t, b) = (0, 1, 2, 3, 4);
    let mut pb = PlaneBuilder::default();
    pb.vertex(d, 0.0, 1.0, -1).vertex(r, 1.0, 0.0, 0).vertex(s, 0.0, -1.0, 0).vertex(t, -1.0, 0.0, -1);
    pb.vertex(b, 0.0, 0.0, -1);
    pb.mark(d, Mark::D).mark(r, Mark::R).mark(s, Mark::S).mark(t, Mark::T);
    let dr = pb.edge(d, r);
    pb.edge(r, s);
    pb.edge(s, t);
    let dt = pb.edge(d, t);
    pb.edge(s, b);
    pb.edge(r, b);
    pb.edge(t, b);
    let db1 = pb.bent(d, b, (0.1, 0.3));
    let db2 = pb.bent(d, b, (-0.1, 0.3));
    for e in [dr, dt, db1, db2] {
        pb.orient(e, d);
    }
    with_blob(&pb, b, blob)
}

/// Pentagon `d r s t u` with a central hub, all prescriptions zero.
fn ts33b() -> Result<Instance> {
    let mut pb = PlaneBuilder::default();
    let names = [(0, 90.0), (1, 18.0), (2, -54.0), (3, -126.0), (4, 162.0)];
    for &(v, deg) in &names {
        let a = f64::to_radians(deg);
        pb.vertex(v, a.cos(), a.sin(), 0);
    }
    pb.vertex(5, 0.0, 0.0, 0);
    pb.mark(1, Mark::R).mark(2, Mark::S).mark(3, Mark::T);
    for v in 0..5 {
        pb.edge(v, (v + 1) % 5);
    }
    for v in 0..5 {
        pb.edge(v, 5);
    }
    let g = pb.graph()?;
    let fg = pb.outer_face(&g);
    pb.build_from(g, fg, None)
}

/// Vertex ids in the star family: `t = 0`, `w = 1`, `v_i = i + 2`.
pub fn star_vertex(i: u32) -> VertexId {
    i + 2
}

pub const STAR_T: VertexId = 0;
pub const STAR_W: VertexId = 1;

/// The star family on `n = 6k`: the square of the cycle `w v_0 ... v_n`
/// with the edge `v_0 v_n` subdivided by `t`, drawn as an antiprism.
fn star(k: u32) -> Result<Instance> {
    if k == 0 {
        return Err(Error::BadFamily("the star family needs k >= 1".into()));
    }
    let n = 6 * k;
    let m = n + 2;
    let half = n / 2;
    let mut pb = PlaneBuilder::default();
    // Cycle position j: w is 0, v_i is i + 1. Even positions on the outer circle.
    let place = |j: u32| {
        let a = 2.0 * PI * j as f64 / m as f64;
        let r = if j.is_multiple_of(2) { 2.0 } else { 1.0 };
        (r * a.cos(), r * a.sin())
    };
    pb.vertex(STAR_T, 1.0, 0.0, 0);
    let (x, y) = place(0);
    pb.vertex(STAR_W, x, y, 0);
    for i in 0..=n {
        let (x, y) = place(i + 1);
        let p = if i == half {
            -1
        } else if i <= half + 2 {
            1
        } else {
            -1
        };
        pb.vertex(star_vertex(i), x, y, p);
    }
    let d = star_vertex(half);
    pb.mark(d, Mark::D).mark(STAR_T, Mark::T);
    // Extended sequence t, w, v_0..v_n, w, t with edges at distance 1 and 2.
    let mut seq = vec![STAR_T, STAR_W];
    seq.extend((0..=n).map(star_vertex));
    seq.extend([STAR_W, STAR_T]);
    let mut seen = BTreeSet::new();
    for i in 0..seq.len() {
        for step in [1, 2] {
            if let Some(&b) = seq.get(i + step) {
                let a = seq[i];
                if a != b && seen.insert((a.min(b), a.max(b))) {
                    let e = pb.edge(a, b);
                    if a == d || b == d {
                        pb.orient(e, d);
                    }
                }
            }
        }
    }
    let g = pb.graph()?;
    let outer: BTreeSet<VertexId> =
        std::iter::once(STAR_W).chain((1..n).step_by(2).map(star_vertex)).collect();
    let inner: BTreeSet<VertexId> =
        std::iter::once(STAR_T).chain((0..=n).step_by(2).map(star_vertex)).collect();
    let fg = PlaneBuilder::face_with_vertices(&g, &outer);
    let fgs = PlaneBuilder::face_with_vertices(&g, &inner);
    pb.build_from(g, fg, fgs)
}

pub fn gen(spec: &FamilySpec) -> Result<(Instance, Expected)> {
    let inst = match spec.family {
        Family::D5a => d5a(spec.blob)?,
        Family::D5b => d5b()?,
        Family::Ts33a => ts33a(spec.blob)?,
        Family::Ts33b => ts33b()?,
        Family::Star => star(spec.k)?,
    };
    Ok((inst, Expected::Unsat))
}

// ---- random corpus ----

/// A plane graph under construction, with one dart kept on the specified
/// face so it can be found again after edits.
struct Sketch {
    g: Graph,
    fg: Option<Dart>,
    next_vertex: VertexId,
}

impl Sketch {
    fn cycle(m: u32) -> Sketch {
        let mut ends = BTreeMap::new();
        let mut rotation = BTreeMap::new();
        for i in 0..m {
            ends.insert(i, [i, (i + 1) % m]);
        }
        for i in 0..m {
            rotation.insert(i, vec![Dart::new(i, 0), Dart::new((i + m - 1) % m, 1)]);
        }
        let g = Graph::from_parts(ends, rotation).expect("cycle");
        Sketch { g, fg: Some(Dart::new(0, 0)), next_vertex: m }
    }

    fn multi_edge(k: u32) -> Sketch {
        let mut ends = BTreeMap::new();
        let mut r0 = Vec::new();
        let mut r1 = Vec::new();
        for e in 0..k {
            ends.insert(e, [0, 1]);
            r0.push(Dart::new(e, 0));
            r1.insert(0, Dart::new(e, 1));
        }
        let g = Graph::from_parts(ends, BTreeMap::from([(0, r0), (1, r1)])).expect("multi-edge");
        Sketch { g, fg: Some(Dart::new(0, 0)), next_vertex: 2 }
    }

    fn single() -> Sketch {
        let g = Graph::from_parts(BTreeMap::new(), BTreeMap::from([(0, Vec::new())])).expect("vertex");
        Sketch { g, fg: None, next_vertex: 1 }
    }

    fn fg_orbit(&self) -> Vec<Dart> {
        let faces = self.g.faces();
        self.fg.and_then(|d| faces.face_of(d)).map(|i| faces.orbit(i).to_vec()).unwrap_or_default()
    }

    fn boundary(&self) -> BTreeSet<VertexId> {
        self.fg_orbit().iter().map(|&d| self.g.dart_vertex(d)).collect()
    }

    /// Faces other than the specified one, as orbits.
    fn inner_faces(&self) -> Vec<Vec<Dart>> {
        let faces = self.g.faces();
        let skip = self.fg.and_then(|d| faces.face_of(d));
        (0..faces.len()).filter(|&i| Some(i) != skip).map(|i| faces.orbit(i).to_vec()).collect()
    }

    /// New vertex inside the face with the given orbit, joined to the
    /// corners selected by `keep`.
    fn hub(&mut self, orbit: &[Dart], keep: &[bool]) -> VertexId {
        let h = self.next_vertex;
        self.next_vertex += 1;
        self.g.add_vertex(h);
        for (i, &d) in orbit.iter().enumerate() {
            if keep[i] {
                let x = self.g.dart_vertex(d);
                self.g.add_edge_at(x, h, Some(d), None);
            }
        }
        let mut rot = self.g.take_rotation(h);
        rot.reverse();
        self.g.set_rotation(h, rot);
        h
    }

    /// Chord of a face between the corners in front of darts `a` and `b`.
    fn chord(&mut self, a: Dart, b: Dart) -> EdgeId {
        let (x, y) = (self.g.dart_vertex(a), self.g.dart_vertex(b));
        self.g.add_edge_at(x, y, Some(a), Some(b))
    }

    /// Parallel copy of `e`, placed away from the specified face.
    fn double(&mut self, e: EdgeId) -> EdgeId {
        let on_fg = self.fg_orbit();
        let da = if on_fg.contains(&Dart::new(e, 0)) { Dart::new(e, 0) } else { Dart::new(e, 1) };
        let db = da.twin();
        let (a, b) = (self.g.dart_vertex(da), self.g.dart_vertex(db));
        let rot_a = self.g.rotation(a);
        let after = rot_a[(rot_a.iter().position(|&d| d == da).unwrap() + 1) % rot_a.len()];
        let new = self.g.add_edge_at(a, b, Some(after), Some(db));
        if after == da {
            // A single dart at a: insertion position is immaterial.
            debug_assert_eq!(self.g.degree(a), 2);
        }
        new
    }
}

fn polygon_with_hubs(rng: &mut ChaCha8Rng, n_max: u32) -> Sketch {
    let hubs = if n_max >= 6 { rng.gen_range(1..=2) } else { 1 };
    let lo = if hubs == 2 { 4 } else { 3 };
    let m = rng.gen_range(lo..=(n_max - hubs).max(lo));
    let mut sk = Sketch::cycle(m);
    if hubs == 1 {
        let face = sk.inner_faces().remove(0);
        let mut keep: Vec<bool> = face.iter().map(|_| rng.gen_bool(0.85)).collect();
        while keep.iter().filter(|&&k| k).count() < 3.min(keep.len()) {
            let i = rng.gen_range(0..keep.len());
            keep[i] = true;
        }
        sk.hub(&face, &keep);
    } else {
        let face = sk.inner_faces().remove(0);
        let j = rng.gen_range(2..face.len() - 1);
        let chord = sk.chord(face[0], face[j]);
        for face in sk.inner_faces() {
            let keep = vec![true; face.len()];
            sk.hub(&face, &keep);
        }
        if rng.gen_bool(0.6) {
            sk.g.remove_edge(chord);
            let (h1, h2) = (sk.next_vertex - 2, sk.next_vertex - 1);
            let joint = sk.inner_faces().into_iter().find(|f| {
                let vs: Vec<VertexId> = f.iter().map(|&d| sk.g.dart_vertex(d)).collect();
                vs.contains(&h1) && vs.contains(&h2)
            });
            if let Some(f) = joint {
                let a = *f.iter().find(|&&d| sk.g.dart_vertex(d) == h1).unwrap();
                let b = *f.iter().find(|&&d| sk.g.dart_vertex(d) == h2).unwrap();
                let e = sk.chord(a, b);
                if rng.gen_bool(0.5) {
                    sk.double(e);
                }
            }
        }
    }
    sk
}

fn stacked(rng: &mut ChaCha8Rng, n_max: u32) -> Sketch {
    let mut sk = Sketch::cycle(3);
    let target = rng.gen_range(4..=n_max.max(4));
    while sk.g.vertex_count() < target as usize {
        let faces = sk.inner_faces();
        let face = faces.choose(rng).unwrap().clone();
        let keep = vec![true; face.len()];
        sk.hub(&face, &keep);
    }
    sk
}

/// Doubles edges at low-degree vertices: interior vertices up to degree 5,
/// boundary vertices up to a random target of 3 or 4.
fn thicken(rng: &mut ChaCha8Rng, sk: &mut Sketch) {
    let boundary = sk.boundary();
    let mut vs: Vec<VertexId> = sk.g.vertices().collect();
    vs.shuffle(rng);
    for v in vs {
        let want = if boundary.contains(&v) { rng.gen_range(3..=4) } else { 5 };
        let mut guard = 0;
        while sk.g.degree(v) < want && guard < 8 {
            guard += 1;
            let es = sk.g.incident_edges(v);
            let Some(&e) = es.choose(rng) else { break };
            let [a, b] = sk.g.ends(e).unwrap();
            if sk.g.multiplicity(a, b) < 3 {
                sk.double(e);
            }
        }
    }
    for _ in 0..rng.gen_range(0..3) {
        let es: Vec<EdgeId> = sk.g.edge_ids().collect();
        if let Some(&e) = es.choose(rng) {
            sk.double(e);
        }
    }
}

fn sample_sketch(rng: &mut ChaCha8Rng, n_max: u32) -> Sketch {
    let roll = rng.gen_range(0..100);
    if n_max <= 1 || roll < 2 {
        Sketch::single()
    } else if n_max <= 3 || roll < 12 {
        Sketch::multi_edge(rng.gen_range(3..=6))
    } else if roll < 60 || n_max < 5 {
        let mut sk = polygon_with_hubs(rng, n_max);
        thicken(rng, &mut sk);
        sk
    } else {
        let mut sk = stacked(rng, n_max);
        thicken(rng, &mut sk);
        sk
    }
}

/// Random prescription with `d` matching its fixed residual, then one vertex
/// adjusted so the sum vanishes.
fn sample_prescription(
    rng: &mut ChaCha8Rng,
    g: &Graph,
    d: Option<(VertexId, Z3)>,
) -> BTreeMap<VertexId, Z3> {
    let mut p: BTreeMap<VertexId, Z3> = g.vertices().map(|v| (v, Z3::ALL[rng.gen_range(0..3)])).collect();
    if let Some((d, r)) = d {
        p.insert(d, r);
    }
    let free: Vec<VertexId> = g.vertices().filter(|&v| d.is_none_or(|(d, _)| d != v)).collect();
    if let Some(&fix) = free.choose(rng) {
        let sum: Z3 = p.values().sum();
        *p.get_mut(&fix).unwrap() -= sum;
    }
    p
}

/// Orients every edge at `d` at random and returns the orientation and the
/// residual it produces at `d`.
fn orient_at(rng: &mut ChaCha8Rng, g: &Graph, d: VertexId) -> (Orientation, Z3) {
    let mut o = Orientation::new();
    let mut r = Z3::ZERO;
    for e in g.incident_edges(d) {
        let out = g.dart_at(e, d).unwrap();
        if g.is_loop(e) {
            o.set(out);
        } else if rng.gen_bool(0.5) {
            o.set(out);
            r -= Z3::ONE;
        } else {
            o.set(out.twin());
            r += Z3::ONE;
        }
    }
    (o, r)
}

fn decorate(rng: &mut ChaCha8Rng, sk: &Sketch, klass: ClassKind) -> Option<Instance> {
    let g = &sk.g;
    let faces = g.faces();
    let fg = sk.fg.and_then(|d| faces.handle_of(d));
    let b1 = sk.boundary();
    let mut fgs = None;
    let mut both = b1.clone();
    if klass == ClassKind::Ft {
        let options: Vec<Dart> = (0..faces.len())
            .map(|i| faces.handle(i))
            .filter(|&h| Some(h) != fg && !faces.vertices(g, faces.face_of(h).unwrap()).is_disjoint(&b1))
            .collect();
        fgs = options.choose(rng).copied();
        if let Some(h) = fgs {
            let b2 = faces.vertices(g, faces.face_of(h).unwrap());
            both = b1.intersection(&b2).copied().collect();
        }
    }
    let wants_d = matches!(klass, ClassKind::Dts | ClassKind::Dts3 | ClassKind::Ft) && rng.gen_bool(0.7);
    let d_options: Vec<VertexId> = both.iter().copied().filter(|&v| (3..=5).contains(&g.degree(v))).collect();
    let d = if wants_d { d_options.choose(rng).copied() } else { None };
    let (orientation, residual) = match d {
        Some(d) => orient_at(rng, g, d),
        None => (Orientation::new(), Z3::ZERO),
    };
    let p = sample_prescription(rng, g, d.map(|d| (d, residual)));
    let mut marks = Marks { d, ..Marks::default() };
    let cubic: Vec<VertexId> = g.vertices().filter(|&v| g.degree(v) == 3 && Some(v) != d).collect();
    let slots: &[Mark] = match klass {
        ClassKind::Dts | ClassKind::Dts3 => &[Mark::T, Mark::S],
        ClassKind::Rst | ClassKind::Rst3 => &[Mark::R, Mark::S, Mark::T],
        ClassKind::Ft => {
            if d.is_some() {
                &[]
            } else {
                &[Mark::T]
            }
        }
    };
    if cubic.len() > slots.len() && g.vertex_count() > 2 {
        return None;
    }
    for (&v, &m) in cubic.iter().zip(slots) {
        marks.set(m, Some(v));
    }
    let inst = Instance::new_unchecked(g.clone(), p, orientation, SpecifiedFaces { fg, fgs }, marks).canonical();
    inst.validate().ok()?;
    Some(inst)
}

/// Deterministic list of up to `size` random instances on at most `n_max`
/// vertices, each passing the test for `klass`.
pub fn gen_corpus(seed: u64, n_max: usize, klass: ClassKind, size: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_max = n_max as u32;
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < size && attempts < size * 400 + 100 {
        attempts += 1;
        let sk = sample_sketch(&mut rng, n_max);
        if sk.g.vertex_count() > n_max as usize || sk.g.check_planar().is_err() {
            continue;
        }
        if let Some(inst) = decorate(&mut rng, &sk, klass) {
            if check(&inst, klass).pass {
                out.push(inst);
            }
        }
    }
    out
}

/// Random instances with no class requirement: 3-edge-connected plane
/// graphs with random marks removed, random fixed edges at one vertex and a
/// random valid prescription.
pub fn random_instances(seed: u64, n_max: usize, count: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < count * 50 + 100 {
        attempts += 1;
        let sk = sample_sketch(&mut rng, n_max as u32);
        if sk.g.vertex_count() > n_max || sk.g.check_planar().is_err() {
            continue;
        }
        let g = &sk.g;
        let d = if rng.gen_bool(0.5) { g.vertices().collect::<Vec<_>>().choose(&mut rng).copied() } else { None };
        let (orientation, residual) = match d {
            Some(d) => orient_at(&mut rng, g, d),
            None => (Orientation::new(), Z3::ZERO),
        };
        let p = sample_prescription(&mut rng, g, d.map(|d| (d, residual)));
        let marks = Marks { d, ..Marks::default() };
        let faces = g.faces();
        let fg = sk.fg.and_then(|x| faces.handle_of(x));
        let inst =
            Instance::new_unchecked(g.clone(), p, orientation, SpecifiedFaces { fg, fgs: None }, marks).canonical();
        if inst.validate().is_ok() {
            out.push(inst);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    #[test]
    fn d5b_shape() {
        let (inst, _) = gen(&FamilySpec::new(Family::D5b)).unwrap();
        assert_eq!(inst.graph().vertex_count(), 3);
        assert_eq!(inst.graph().edge_count(), 5);
        assert_eq!(inst.faces().len(), 4);
        assert!(!oracle::solve(&inst).is_sat());
    }

    #[test]
    fn d5a_shape_and_blob_rings() {
        for blob in 1..=4 {
            let (inst, _) = gen(&FamilySpec { family: Family::D5a, k: 1, blob }).unwrap();
            assert_eq!(inst.graph().degree(0), 5);
            assert_eq!(inst.graph().degree(1), 3);
            assert!(!oracle::solve(&inst).is_sat(), "blob {blob}");
        }
    }

    #[test]
    fn ts33_shapes() {
        let (a, _) = gen(&FamilySpec::new(Family::Ts33a)).unwrap();
        assert_eq!((a.graph().vertex_count(), a.graph().edge_count()), (5, 9));
        let (b, _) = gen(&FamilySpec::new(Family::Ts33b)).unwrap();
        assert_eq!((b.graph().vertex_count(), b.graph().edge_count()), (6, 10));
        let fg = b.specified_faces().fg.unwrap();
        assert_eq!(b.face_vertices(fg).len(), 5);
    }

    #[test]
    fn star_degree_profile() {
        for k in 1..=2 {
            let (inst, _) = gen(&FamilySpec::star(k)).unwrap();
            let g = inst.graph();
            let n = 6 * k;
            assert_eq!(g.vertex_count() as u32, n + 3);
            assert_eq!(g.edge_count() as u32, 2 * n + 6);
            assert_eq!(g.degree(STAR_T), 3);
            assert_eq!(g.degree(STAR_W), 5);
            for i in 0..=n {
                assert_eq!(g.degree(star_vertex(i)), 4);
            }
            let sf = inst.specified_faces();
            let outer = inst.face_vertices(sf.fg.unwrap());
            let inner = inst.face_vertices(sf.fgs.unwrap());
            assert!(outer.contains(&STAR_W) && inner.contains(&STAR_T));
            assert!(outer.is_disjoint(&inner));
        }
    }

    #[test]
    fn corpus_members_pass_their_class() {
        for klass in [ClassKind::Dts, ClassKind::Ft, ClassKind::Rst] {
            let corpus = gen_corpus(7, 10, klass, 15);
            assert!(corpus.len() >= 10, "{klass}: {}", corpus.len());
            for inst in &corpus {
                assert!(check(inst, klass).pass);
            }
        }
    }

    #[test]
    fn tiny_corpus_has_multi_edges() {
        let corpus = gen_corpus(1, 2, ClassKind::Dts, 10);
        assert!(corpus.iter().any(|i| i.graph().vertex_count() == 2 && i.graph().edge_count() >= 3));
    }
}
