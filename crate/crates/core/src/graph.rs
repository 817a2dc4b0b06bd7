//! Rotation-system representation of plane multigraphs.
//!
//! Every edge `e` owns the two darts `2e` and `2e + 1`; dart `2e + s` emanates
//! from endpoint `s` of the edge. Each vertex stores its darts in
//! counterclockwise order. Faces are the orbits of `rotation ∘ twin`: from a
//! dart `d` the walk continues with the dart following `twin(d)` in the
//! rotation at the far endpoint.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};

pub type VertexId = u32;
pub type EdgeId = u32;

/// A half-edge, identified by its edge and the endpoint it leaves from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart(pub u32);

impl Dart {
    pub fn new(edge: EdgeId, side: usize) -> Dart {
        debug_assert!(side < 2);
        Dart(edge * 2 + side as u32)
    }

    pub fn edge(self) -> EdgeId {
        self.0 >> 1
    }

    pub fn side(self) -> usize {
        (self.0 & 1) as usize
    }

    pub fn twin(self) -> Dart {
        Dart(self.0 ^ 1)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Graph {
    rotation: BTreeMap<VertexId, Vec<Dart>>,
    ends: BTreeMap<EdgeId, [VertexId; 2]>,
    next_edge: EdgeId,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.rotation == other.rotation && self.ends == other.ends
    }
}

impl Eq for Graph {}

impl Graph {
    /// Assembles a graph from edge endpoints and per-vertex dart rotations,
    /// checking that every dart sits exactly once at its own endpoint.
    pub fn from_parts(
        ends: BTreeMap<EdgeId, [VertexId; 2]>,
        rotation: BTreeMap<VertexId, Vec<Dart>>,
    ) -> Result<Graph> {
        let mut seen = BTreeSet::new();
        for (&v, darts) in &rotation {
            for &d in darts {
                let e = ends.get(&d.edge()).ok_or(Error::UnknownEdge(d.edge()))?;
                if e[d.side()] != v {
                    return Err(Error::NotIncident { vertex: v, edge: d.edge() });
                }
                if !seen.insert(d) {
                    return Err(Error::MalformedRotation {
                        vertex: v,
                        reason: format!("edge {} listed more often than it is incident", d.edge()),
                    });
                }
            }
        }
        for (&e, &[a, b]) in &ends {
            for v in [a, b] {
                if !rotation.contains_key(&v) {
                    return Err(Error::UnknownVertex(v));
                }
            }
            for side in 0..2 {
                if !seen.contains(&Dart::new(e, side)) {
                    let v = [a, b][side];
                    return Err(Error::MalformedRotation {
                        vertex: v,
                        reason: format!("edge {e} missing from the rotation"),
                    });
                }
            }
        }
        let next_edge = ends.keys().next_back().map_or(0, |&e| e + 1);
        Ok(Graph { rotation, ends, next_edge })
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.rotation.keys().copied()
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.vertices().collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, [VertexId; 2])> + '_ {
        self.ends.iter().map(|(&e, &ends)| (e, ends))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.ends.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.rotation.contains_key(&v)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.ends.contains_key(&e)
    }

    pub fn ends(&self, e: EdgeId) -> Option<[VertexId; 2]> {
        self.ends.get(&e).copied()
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        self.ends(e).is_some_and(|[a, b]| a == b)
    }

    /// Endpoint of `e` opposite to `v` (or `v` itself for a loop).
    pub fn other_end(&self, e: EdgeId, v: VertexId) -> Option<VertexId> {
        let [a, b] = self.ends(e)?;
        if a == v {
            Some(b)
        } else if b == v {
            Some(a)
        } else {
            None
        }
    }

    /// Vertex the dart emanates from. Panics on darts of unknown edges.
    pub fn dart_vertex(&self, d: Dart) -> VertexId {
        self.ends[&d.edge()][d.side()]
    }

    pub fn has_dart(&self, d: Dart) -> bool {
        self.ends.contains_key(&d.edge())
    }

    /// Dart of `e` leaving `v`; for a loop this is the first side.
    pub fn dart_at(&self, e: EdgeId, v: VertexId) -> Option<Dart> {
        let [a, b] = self.ends(e)?;
        if a == v {
            Some(Dart::new(e, 0))
        } else if b == v {
            Some(Dart::new(e, 1))
        } else {
            None
        }
    }

    /// Counterclockwise dart order at `v`.
    pub fn rotation(&self, v: VertexId) -> &[Dart] {
        self.rotation.get(&v).map_or(&[], |r| r.as_slice())
    }

    /// Number of darts at `v`; a loop counts twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation(v).len()
    }

    /// Distinct edges incident with `v`, in rotation order.
    pub fn incident_edges(&self, v: VertexId) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = Vec::new();
        for d in self.rotation(v) {
            if !out.contains(&d.edge()) {
                out.push(d.edge());
            }
        }
        out
    }

    pub fn neighbours(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.rotation(v)
            .iter()
            .map(|&d| self.dart_vertex(d.twin()))
            .filter(|&u| u != v)
            .collect()
    }

    /// Number of edges joining `u` and `v` (loops when `u == v`).
    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        self.ends
            .values()
            .filter(|&&[a, b]| (a == u && b == v) || (a == v && b == u))
            .count()
    }

    pub fn next_edge_id(&self) -> EdgeId {
        self.next_edge
    }

    /// Rotation successor of every dart.
    pub fn successors(&self) -> HashMap<Dart, Dart> {
        let mut succ = HashMap::with_capacity(self.ends.len() * 2);
        for darts in self.rotation.values() {
            for (i, &d) in darts.iter().enumerate() {
                succ.insert(d, darts[(i + 1) % darts.len()]);
            }
        }
        succ
    }

    pub fn faces(&self) -> Faces {
        let succ = self.successors();
        let mut darts: Vec<Dart> = succ.keys().copied().collect();
        darts.sort_unstable();
        let mut index = HashMap::with_capacity(darts.len());
        let mut orbits = Vec::new();
        for &start in &darts {
            if index.contains_key(&start) {
                continue;
            }
            let id = orbits.len();
            let mut orbit = Vec::new();
            let mut cur = start;
            loop {
                index.insert(cur, id);
                orbit.push(cur);
                cur = succ[&cur.twin()];
                if cur == start {
                    break;
                }
            }
            orbits.push(orbit);
        }
        Faces { orbits, index }
    }

    /// Connected components, each as a sorted vertex set.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen.contains(&v) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![v];
            seen.insert(v);
            while let Some(x) = stack.pop() {
                comp.insert(x);
                for &d in self.rotation(x) {
                    let y = self.dart_vertex(d.twin());
                    if seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Number of faces of the plane drawing: one per dart orbit plus one per
    /// isolated vertex, with the outer faces of all components identified.
    pub fn face_count(&self) -> usize {
        let orbits = self.faces().len();
        let isolated = self.rotation.values().filter(|r| r.is_empty()).count();
        let c = self.components().len();
        (orbits + isolated + 1).saturating_sub(c.max(1))
    }

    /// `V - E + F` and `1 + C`; the embedding is planar exactly when they agree.
    pub fn euler(&self) -> (i64, i64) {
        let v = self.vertex_count() as i64;
        let e = self.edge_count() as i64;
        let f = self.face_count() as i64;
        let c = self.components().len() as i64;
        (v - e + f, 1 + c)
    }

    pub fn check_planar(&self) -> Result<()> {
        // Each component must have genus zero on its own.
        let faces = self.faces();
        let mut orbits_per_comp: HashMap<VertexId, i64> = HashMap::new();
        let comps = self.components();
        let mut comp_of = HashMap::new();
        for comp in &comps {
            let rep = *comp.iter().next().unwrap();
            for &v in comp {
                comp_of.insert(v, rep);
            }
        }
        for orbit in &faces.orbits {
            let rep = comp_of[&self.dart_vertex(orbit[0])];
            *orbits_per_comp.entry(rep).or_default() += 1;
        }
        for comp in &comps {
            let rep = *comp.iter().next().unwrap();
            let v = comp.len() as i64;
            let e = self
                .ends
                .values()
                .filter(|ends| comp.contains(&ends[0]))
                .count() as i64;
            let f = orbits_per_comp.get(&rep).copied().unwrap_or(1);
            if v - e + f != 2 {
                let (euler, expected) = self.euler();
                return Err(Error::NonPlanar { euler, expected });
            }
        }
        Ok(())
    }

    /// Rotates every vertex's list to start at its smallest dart and swaps
    /// the labels of any loop whose second dart would be listed first.
    /// Returns the swapped loops.
    pub fn canonicalize(&mut self) -> Vec<EdgeId> {
        let mut swapped = Vec::new();
        for darts in self.rotation.values_mut() {
            if let Some(pos) = darts.iter().enumerate().min_by_key(|(_, d)| **d).map(|(i, _)| i) {
                darts.rotate_left(pos);
            }
            let mut first_seen = BTreeSet::new();
            for d in darts.iter() {
                let e = d.edge();
                if self.ends[&e][0] == self.ends[&e][1] && first_seen.insert(e) && d.side() == 1 {
                    swapped.push(e);
                }
            }
        }
        for &e in &swapped {
            for darts in self.rotation.values_mut() {
                for d in darts.iter_mut() {
                    if d.edge() == e {
                        *d = d.twin();
                    }
                }
            }
        }
        if !swapped.is_empty() {
            // Swapping may change which dart is smallest at a vertex.
            for darts in self.rotation.values_mut() {
                if let Some(pos) = darts.iter().enumerate().min_by_key(|(_, d)| **d).map(|(i, _)| i) {
                    darts.rotate_left(pos);
                }
            }
        }
        swapped
    }

    // ---- low-level editing, used by the instance mutations ----

    pub(crate) fn add_vertex(&mut self, v: VertexId) {
        self.rotation.entry(v).or_default();
    }

    /// Adds an edge `u -> w` whose darts are inserted at the given rotation
    /// positions (`None` appends). Positions index the list before insertion.
    pub(crate) fn add_edge_at(
        &mut self,
        u: VertexId,
        w: VertexId,
        before_at_u: Option<Dart>,
        before_at_w: Option<Dart>,
    ) -> EdgeId {
        let e = self.next_edge;
        self.next_edge += 1;
        self.ends.insert(e, [u, w]);
        self.insert_dart(u, Dart::new(e, 0), before_at_u);
        self.insert_dart(w, Dart::new(e, 1), before_at_w);
        e
    }

    /// Inserts `d` immediately before `before` in the rotation at `v`.
    pub(crate) fn insert_dart(&mut self, v: VertexId, d: Dart, before: Option<Dart>) {
        let rot = self.rotation.entry(v).or_default();
        match before.and_then(|b| rot.iter().position(|&x| x == b)) {
            Some(pos) => rot.insert(pos, d),
            None => rot.push(d),
        }
    }

    pub(crate) fn remove_edge(&mut self, e: EdgeId) {
        if let Some([a, b]) = self.ends.remove(&e) {
            for v in [a, b] {
                if let Some(rot) = self.rotation.get_mut(&v) {
                    rot.retain(|d| d.edge() != e);
                }
            }
        }
    }

    pub(crate) fn remove_isolated_vertex(&mut self, v: VertexId) {
        debug_assert!(self.rotation(v).is_empty());
        self.rotation.remove(&v);
    }

    /// Replaces the dart `old` by `new` in place, keeping its rotation slot.
    pub(crate) fn replace_dart(&mut self, v: VertexId, old: Dart, new: Dart) {
        if let Some(rot) = self.rotation.get_mut(&v) {
            for d in rot.iter_mut() {
                if *d == old {
                    *d = new;
                }
            }
        }
    }

    pub(crate) fn set_ends(&mut self, e: EdgeId, ends: [VertexId; 2]) {
        self.ends.insert(e, ends);
    }

    pub(crate) fn take_rotation(&mut self, v: VertexId) -> Vec<Dart> {
        self.rotation.remove(&v).unwrap_or_default()
    }

    pub(crate) fn set_rotation(&mut self, v: VertexId, darts: Vec<Dart>) {
        self.rotation.insert(v, darts);
    }

    /// Contracts the non-loop edge `e`, keeping endpoint `keep`. The rotation
    /// at the merged vertex is the rotation of `keep` opened at `e`, followed
    /// by the rotation of the other endpoint opened at `e`.
    pub(crate) fn contract_edge(&mut self, e: EdgeId, keep: VertexId) {
        let [a, b] = self.ends[&e];
        debug_assert!(a != b);
        let gone = if a == keep { b } else { a };
        let dk = self.dart_at(e, keep).unwrap();
        let dg = dk.twin();
        let rk = self.take_rotation(keep);
        let rg = self.take_rotation(gone);
        let pk = rk.iter().position(|&d| d == dk).unwrap();
        let pg = rg.iter().position(|&d| d == dg).unwrap();
        let mut merged = Vec::with_capacity(rk.len() + rg.len() - 2);
        merged.extend(rk[pk + 1..].iter().chain(&rk[..pk]));
        merged.extend(rg[pg + 1..].iter().chain(&rg[..pg]));
        for &d in &rg {
            if d != dg {
                let mut ends = self.ends[&d.edge()];
                ends[d.side()] = keep;
                self.ends.insert(d.edge(), ends);
            }
        }
        self.ends.remove(&e);
        self.rotation.insert(keep, merged);
    }
}

/// Face orbits of an embedding, ordered by their smallest dart.
#[derive(Clone, Debug)]
pub struct Faces {
    orbits: Vec<Vec<Dart>>,
    index: HashMap<Dart, usize>,
}

impl Faces {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Darts of face `i` in walk order, starting at the smallest.
    pub fn orbit(&self, i: usize) -> &[Dart] {
        &self.orbits[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Dart]> {
        self.orbits.iter().map(|o| o.as_slice())
    }

    pub fn face_of(&self, d: Dart) -> Option<usize> {
        self.index.get(&d).copied()
    }

    /// Canonical handle: the smallest dart of the orbit.
    pub fn handle(&self, i: usize) -> Dart {
        self.orbits[i][0]
    }

    pub fn handle_of(&self, d: Dart) -> Option<Dart> {
        self.face_of(d).map(|i| self.handle(i))
    }

    pub fn vertices(&self, g: &Graph, i: usize) -> BTreeSet<VertexId> {
        self.orbits[i].iter().map(|&d| g.dart_vertex(d)).collect()
    }

    pub fn edges(&self, i: usize) -> BTreeSet<EdgeId> {
        self.orbits[i].iter().map(|d| d.edge()).collect()
    }
}
