//! Mutations of instances. Each returns the child instance together with a
//! [`Transfer`] that maps orientations of the child back to the parent.
//!
//! Edge and dart ids survive every mutation, so an orientation of the child
//! is read directly on the parent's surviving edges. Specified faces are
//! followed through their darts: the new handle is the face of the first
//! surviving dart of the old orbit.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Dart, EdgeId, Graph, VertexId};
use crate::instance::{Instance, Orientation, SpecifiedFaces};
use crate::z3::Z3;

#[derive(Clone, Debug)]
struct Link {
    parent_fixed: Orientation,
    parent_edges: BTreeSet<EdgeId>,
    /// `(new edge, dart of e1 at u, dart of e2 at v)` for each lift.
    lifts: Vec<(EdgeId, Dart, Dart)>,
}

impl Link {
    fn pull(&self, child: &Orientation) -> Orientation {
        let mut out = self.parent_fixed.clone();
        for (e, d) in child.iter() {
            if let Some(&(_, e1u, e2v)) = self.lifts.iter().find(|l| l.0 == e) {
                let (a, b) = if d.side() == 0 { (e1u, e2v) } else { (e1u.twin(), e2v.twin()) };
                for t in [a, b] {
                    if !out.contains(t.edge()) {
                        out.set(t);
                    }
                }
            } else if self.parent_edges.contains(&e) && !out.contains(e) {
                out.set(d);
            }
        }
        out
    }
}

/// Chain of pull-backs from a descendant instance to an ancestor.
#[derive(Clone, Debug, Default)]
pub struct Transfer {
    links: Vec<Link>,
}

impl Transfer {
    pub fn identity() -> Transfer {
        Transfer::default()
    }

    fn single(parent: &Instance, lifts: Vec<(EdgeId, Dart, Dart)>) -> Transfer {
        Transfer {
            links: vec![Link {
                parent_fixed: parent.orientation.clone(),
                parent_edges: parent.graph.edge_ids().collect(),
                lifts,
            }],
        }
    }

    /// `self` maps B to A and `next` maps C to B; the result maps C to A.
    pub fn then(mut self, next: Transfer) -> Transfer {
        self.links.extend(next.links);
        self
    }

    /// Parent orientation induced by an orientation of the child: the
    /// parent's fixed edges, the child's directions on surviving edges and
    /// lifted edges expanded into their two halves. Edges the mutation
    /// removed without fixing stay unoriented.
    pub fn pull_back(&self, child: &Orientation) -> Orientation {
        let mut o = child.clone();
        for link in self.links.iter().rev() {
            o = link.pull(&o);
        }
        o
    }
}

/// Which fallback applies when every dart of a specified face disappears.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Lost {
    /// Pick faces at the mutation site for both handles.
    Choose,
    /// Pick a face for `F_G` only; a vanished second face is dropped.
    Merge,
}

fn track_faces(parent: &Instance, child: &Graph, site: &[VertexId], lost: Lost) -> SpecifiedFaces {
    let pf = parent.graph.faces();
    let cf = child.faces();
    let follow = |h: Option<Dart>| -> Option<Option<Dart>> {
        let h = h?;
        let orbit = pf.orbit(pf.face_of(h)?);
        Some(orbit.iter().find(|&&d| child.has_dart(d)).and_then(|&d| cf.handle_of(d)))
    };
    let mut candidates: Vec<Dart> = site
        .iter()
        .filter(|&&v| child.contains_vertex(v))
        .flat_map(|&v| child.rotation(v).iter().filter_map(|&d| cf.handle_of(d)))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    candidates.sort();
    let (fg, fgs) = (follow(parent.faces.fg), follow(parent.faces.fgs));
    // A collapsed face is replaced by a site face other than the survivor.
    let pick = |other: Option<Dart>| candidates.iter().copied().find(|&c| Some(c) != other);
    let fg = match fg {
        None => None,
        Some(Some(h)) => Some(h),
        Some(None) if lost == Lost::Choose => pick(fgs.flatten()).or(candidates.first().copied()),
        Some(None) => candidates.first().copied(),
    };
    let fgs = match fgs {
        None => None,
        Some(Some(h)) => Some(h),
        Some(None) if lost == Lost::Choose => pick(fg),
        Some(None) => None,
    };
    let fgs = if fgs.is_some() && fgs == fg { None } else { fgs };
    SpecifiedFaces { fg, fgs }
}

/// Specified faces after a deletion, which merges every face touching
/// `region` (parent darts) into one. A face is followed through its first
/// surviving dart; one whose darts all vanished becomes the merged face.
fn deletion_faces(parent: &Instance, child: &Graph, region: &[Dart]) -> SpecifiedFaces {
    let pf = parent.graph.faces();
    let cf = child.faces();
    let merged: BTreeSet<usize> = region.iter().filter_map(|&d| pf.face_of(d)).collect();
    let survivor = |i: usize| pf.orbit(i).iter().copied().find(|&d| child.has_dart(d));
    let target = merged.iter().find_map(|&i| survivor(i)).and_then(|d| cf.handle_of(d));
    let resolve = |h: Option<Dart>| {
        let i = pf.face_of(h?)?;
        match survivor(i) {
            Some(d) => cf.handle_of(d),
            None if merged.contains(&i) => target,
            None => None,
        }
    };
    let fg = resolve(parent.faces.fg);
    let fgs = resolve(parent.faces.fgs);
    SpecifiedFaces { fg, fgs: if fgs.is_some() && fgs == fg { None } else { fgs } }
}

fn finish(child: Instance) -> Result<Instance> {
    child.validate()?;
    Ok(child)
}

/// Adds the contribution of an oriented edge at its endpoints to their
/// prescriptions, so the edge can be removed without changing satisfiability.
fn fold_edge(inst: &mut Instance, tail: Dart) {
    let g = &inst.graph;
    let (t, h) = (g.dart_vertex(tail), g.dart_vertex(tail.twin()));
    if t == h {
        return;
    }
    *inst.p.get_mut(&h).unwrap() -= Z3::ONE;
    *inst.p.get_mut(&t).unwrap() += Z3::ONE;
}

/// Deletes `e`. An oriented edge is folded into the prescription of its
/// endpoints; an unoriented one is left open in the pull-back.
pub fn delete_edge(inst: &Instance, e: EdgeId) -> Result<(Instance, Transfer)> {
    inst.graph.ends(e).ok_or(Error::UnknownEdge(e))?;
    let mut child = inst.clone();
    if let Some(t) = inst.orientation.tail(e) {
        fold_edge(&mut child, t);
    }
    child.graph.remove_edge(e);
    child.orientation.remove(e);
    child.faces = deletion_faces(inst, &child.graph, &[Dart::new(e, 0), Dart::new(e, 1)]);
    Ok((finish(child)?, Transfer::single(inst, Vec::new())))
}

fn remove_vertex(inst: &Instance, v: VertexId) -> Instance {
    let mut child = inst.clone();
    for e in inst.graph.incident_edges(v) {
        if let Some(t) = inst.orientation.tail(e) {
            fold_edge(&mut child, t);
        }
        child.graph.remove_edge(e);
        child.orientation.remove(e);
    }
    child.graph.remove_isolated_vertex(v);
    child.p.remove(&v);
    child.marks.clear_vertex(v);
    child.faces = deletion_faces(inst, &child.graph, inst.graph.rotation(v));
    child
}

fn leftover(inst: &Instance, v: VertexId) -> Result<Z3> {
    if !inst.graph.contains_vertex(v) {
        return Err(Error::UnknownVertex(v));
    }
    Ok(inst.p(v) - inst.fixed_residual(v))
}

/// Deletes `v` and its edges. Oriented edges are folded into the far
/// endpoints; the prescription left at `v` must be zero.
pub fn delete_vertex(inst: &Instance, v: VertexId) -> Result<(Instance, Transfer)> {
    let rest = leftover(inst, v)?;
    if !rest.is_zero() {
        return Err(Error::UnbalancedDeletion { vertex: v, leftover: rest });
    }
    Ok((finish(remove_vertex(inst, v))?, Transfer::single(inst, Vec::new())))
}

/// Like [`delete_vertex`], moving whatever prescription `v` leaves behind
/// onto `into`.
pub fn delete_vertex_rebalance(inst: &Instance, v: VertexId, into: VertexId) -> Result<(Instance, Transfer)> {
    let rest = leftover(inst, v)?;
    if into == v || !inst.graph.contains_vertex(into) {
        return Err(Error::UnknownVertex(into));
    }
    let mut child = remove_vertex(inst, v);
    *child.p.get_mut(&into).unwrap() += rest;
    Ok((finish(child)?, Transfer::single(inst, Vec::new())))
}

/// Cyclic boundary walk of the face with handle `h`, as the vertex sequence.
fn walk_vertices(g: &Graph, h: Dart) -> Vec<VertexId> {
    let faces = g.faces();
    faces.face_of(h).map(|i| faces.orbit(i).iter().map(|&d| g.dart_vertex(d)).collect()).unwrap_or_default()
}

/// True when the positions of the walk lying in `s` form one cyclic block.
fn contiguous(walk: &[VertexId], s: &BTreeSet<VertexId>) -> bool {
    let n = walk.len();
    let inside: Vec<bool> = walk.iter().map(|v| s.contains(v)).collect();
    let count = inside.iter().filter(|&&b| b).count();
    if count == 0 || count == n {
        return true;
    }
    let starts = (0..n).filter(|&i| inside[i] && !inside[(i + n - 1) % n]).count();
    starts == 1
}

fn contract_impl(inst: &Instance, s: &BTreeSet<VertexId>, check_faces: bool) -> Result<(Instance, Transfer)> {
    let g = &inst.graph;
    let Some(&root) = s.iter().next() else {
        return Err(Error::BadContraction("empty vertex set".into()));
    };
    for &v in s {
        if !g.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
    }
    // Spanning tree of G[S] by breadth-first search from the root.
    let mut tree = Vec::new();
    let mut seen = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &d in g.rotation(x) {
            let y = g.dart_vertex(d.twin());
            if s.contains(&y) && seen.insert(y) {
                tree.push(d.edge());
                queue.push_back(y);
            }
        }
    }
    if seen.len() != s.len() {
        return Err(Error::BadContraction("vertex set does not induce a connected subgraph".into()));
    }
    if check_faces {
        for h in inst.faces.handles() {
            if !contiguous(&walk_vertices(g, h), s) {
                return Err(Error::BadContraction(format!(
                    "vertex set meets the boundary of face {h:?} in more than one path"
                )));
            }
        }
    }
    let mut child = inst.clone();
    for &e in &tree {
        let [a, b] = child.graph.ends(e).unwrap();
        let keep = if a == root { a } else { b };
        child.graph.contract_edge(e, keep);
    }
    let internal: Vec<EdgeId> =
        g.edges().filter(|(e, [a, b])| s.contains(a) && s.contains(b) && !tree.contains(e)).map(|(e, _)| e).collect();
    for &e in &internal {
        child.graph.remove_edge(e);
    }
    for &e in tree.iter().chain(&internal) {
        child.orientation.remove(e);
    }
    let total: Z3 = s.iter().map(|&v| inst.p(v)).sum();
    for &v in s {
        child.p.remove(&v);
        child.marks.clear_vertex(v);
    }
    child.p.insert(root, total);
    child.faces = track_faces(inst, &child.graph, &[root], Lost::Choose);
    Ok((finish(child)?, Transfer::single(inst, Vec::new())))
}

/// Contracts the connected vertex set `s` into its smallest vertex, whose
/// prescription becomes the sum over `s`. Edges inside `s` disappear; the
/// unoriented ones stay open in the pull-back. `s` must meet every specified
/// face boundary in nothing, everything or a single path.
pub fn contract(inst: &Instance, s: &BTreeSet<VertexId>) -> Result<(Instance, Transfer)> {
    contract_impl(inst, s, true)
}

/// [`contract`] without the boundary-path requirement.
pub fn contract_relaxed(inst: &Instance, s: &BTreeSet<VertexId>) -> Result<(Instance, Transfer)> {
    contract_impl(inst, s, false)
}

/// Lifts `e1 = uv` and `e2 = vw` at `v` into one unoriented edge `uw`.
/// The two edges must be unoriented, distinct, loopless and consecutive in
/// the rotation at `v`. Returns the child and the id of the new edge.
pub fn lift(inst: &Instance, v: VertexId, e1: EdgeId, e2: EdgeId) -> Result<(Instance, Transfer, EdgeId)> {
    let g = &inst.graph;
    let bad = |why: &str| Error::BadLift(e1, e2, why.to_string());
    if e1 == e2 {
        return Err(bad("the edges coincide"));
    }
    for e in [e1, e2] {
        if !g.contains_edge(e) {
            return Err(Error::UnknownEdge(e));
        }
        if g.is_loop(e) {
            return Err(bad("loops cannot be lifted"));
        }
        if inst.orientation.contains(e) {
            return Err(bad("oriented edges cannot be lifted"));
        }
    }
    let (Some(d1v), Some(d2v)) = (g.dart_at(e1, v), g.dart_at(e2, v)) else {
        return Err(bad("the edges do not share the given vertex"));
    };
    let rot = g.rotation(v);
    let n = rot.len();
    let i1 = rot.iter().position(|&d| d == d1v).unwrap();
    let i2 = rot.iter().position(|&d| d == d2v).unwrap();
    if (i1 + 1) % n != i2 && (i2 + 1) % n != i1 {
        return Err(bad("the edges are not consecutive at the shared vertex"));
    }
    let (e1u, e2w) = (d1v.twin(), d2v.twin());
    let u = g.dart_vertex(e1u);
    let w = g.dart_vertex(e2w);
    let mut child = inst.clone();
    let cg = &mut child.graph;
    let new = cg.next_edge_id();
    let (n0, n1) = (Dart::new(new, 0), Dart::new(new, 1));
    // Reserve the id, then move the new darts into the old slots.
    let reserved = cg.add_edge_at(u, w, None, None);
    debug_assert_eq!(reserved, new);
    cg.remove_edge(new);
    cg.set_ends(new, [u, w]);
    cg.replace_dart(u, e1u, n0);
    cg.replace_dart(w, e2w, n1);
    cg.remove_edge(e1);
    cg.remove_edge(e2);
    // The corner between the lifted darts now lies beside n0 and the merged
    // far side beside n1; other faces follow their first surviving dart.
    let pf = inst.graph.faces();
    let cf = child.graph.faces();
    let (corner, far) = if (i1 + 1) % n == i2 { (d2v, [d1v, e2w]) } else { (d1v, [d2v, e1u]) };
    let corner = pf.face_of(corner);
    let far: Vec<Option<usize>> = far.iter().map(|&d| pf.face_of(d)).collect();
    let resolve = |h: Option<Dart>| {
        let i = pf.face_of(h?)?;
        if Some(i) == corner {
            return cf.handle_of(n0);
        }
        match pf.orbit(i).iter().find(|&&d| child.graph.has_dart(d)) {
            Some(&d) => cf.handle_of(d),
            None if far.contains(&Some(i)) => cf.handle_of(n1),
            None => None,
        }
    };
    let fg = resolve(inst.faces.fg);
    let fgs = resolve(inst.faces.fgs);
    child.faces = SpecifiedFaces { fg, fgs: if fgs.is_some() && fgs == fg { None } else { fgs } };
    let transfer = Transfer::single(inst, vec![(new, e1u, d2v)]);
    Ok((finish(child)?, transfer, new))
}

/// Fixes the direction of one edge.
pub fn orient_edge(inst: &Instance, tail: Dart) -> Result<(Instance, Transfer)> {
    if !inst.graph.contains_edge(tail.edge()) {
        return Err(Error::UnknownEdge(tail.edge()));
    }
    if inst.orientation.contains(tail.edge()) {
        return Err(Error::AlreadyOriented(tail.edge()));
    }
    let mut child = inst.clone();
    child.orientation.set(tail);
    Ok((finish(child)?, Transfer::single(inst, Vec::new())))
}

/// Unoriented non-loop edges at `v`, ascending by id, with their darts at `v`.
fn free_darts(inst: &Instance, v: VertexId) -> Vec<Dart> {
    let mut free: Vec<Dart> = inst
        .graph
        .rotation(v)
        .iter()
        .copied()
        .filter(|d| !inst.graph.is_loop(d.edge()) && !inst.orientation.contains(d.edge()))
        .collect();
    free.sort();
    free
}

/// Every way of directing the free edges at `v` that meets `p(v)`, as the
/// new directions only (loops at `v` included, leaving their first dart).
pub fn vertex_orientations(inst: &Instance, v: VertexId) -> Result<Vec<Orientation>> {
    if !inst.graph.contains_vertex(v) {
        return Err(Error::UnknownVertex(v));
    }
    let free = free_darts(inst, v);
    let need = inst.p(v) - inst.fixed_residual(v);
    let f = free.len();
    let loops: Vec<Dart> = inst
        .graph
        .incident_edges(v)
        .into_iter()
        .filter(|&e| inst.graph.is_loop(e) && !inst.orientation.contains(e))
        .map(|e| Dart::new(e, 0))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << f) {
        let inward = mask.count_ones() as i64;
        if Z3::new(2 * inward - f as i64) != need {
            continue;
        }
        let mut o: Orientation = loops.iter().copied().collect();
        for (i, &d) in free.iter().enumerate() {
            o.set(if mask >> i & 1 == 1 { d.twin() } else { d });
        }
        out.push(o);
    }
    Ok(out)
}

/// Directs every free edge at `v` so that `v` meets its prescription: the
/// smallest `i` with `2i - f = p(v) - r` is chosen and the `i` lowest-id
/// free edges point into `v`.
pub fn orient_vertex(inst: &Instance, v: VertexId) -> Result<(Instance, Transfer)> {
    if !inst.graph.contains_vertex(v) {
        return Err(Error::UnknownVertex(v));
    }
    let free = free_darts(inst, v);
    let need = inst.p(v) - inst.fixed_residual(v);
    let f = free.len();
    let i = (0..=f).find(|&i| Z3::new(2 * i as i64 - f as i64) == need).ok_or(Error::NoVertexOrientation(v))?;
    let mut child = inst.clone();
    for (k, &d) in free.iter().enumerate() {
        child.orientation.set(if k < i { d.twin() } else { d });
    }
    for e in inst.graph.incident_edges(v) {
        if inst.graph.is_loop(e) && !child.orientation.contains(e) {
            child.orientation.set(Dart::new(e, 0));
        }
    }
    Ok((finish(child)?, Transfer::single(inst, Vec::new())))
}

/// Applies an orientation of some edges at once.
pub fn orient_edges(inst: &Instance, o: &Orientation) -> Result<(Instance, Transfer)> {
    let child = inst.with_orientation(o)?;
    Ok((finish(child)?, Transfer::single(inst, Vec::new())))
}

/// Adds a new edge directed `tail -> head`, its darts inserted before the
/// given darts in the rotations (appended when `None`). The prescriptions
/// absorb the edge: `p(head) + 1`, `p(tail) - 1`. The pull-back drops it.
pub fn add_directed_edge(
    inst: &Instance,
    tail: VertexId,
    head: VertexId,
    before_tail: Option<Dart>,
    before_head: Option<Dart>,
) -> Result<(Instance, Transfer, EdgeId)> {
    for x in [tail, head] {
        if !inst.graph.contains_vertex(x) {
            return Err(Error::UnknownVertex(x));
        }
    }
    let mut child = inst.clone();
    let e = child.graph.add_edge_at(tail, head, before_tail, before_head);
    child.orientation.set(Dart::new(e, 0));
    if tail != head {
        *child.p.get_mut(&head).unwrap() += Z3::ONE;
        *child.p.get_mut(&tail).unwrap() -= Z3::ONE;
    }
    child.faces = track_faces(inst, &child.graph, &[tail, head], Lost::Merge);
    Ok((finish(child)?, Transfer::single(inst, Vec::new()), e))
}

/// Moves prescription between vertices; the total is unchanged.
pub fn shift_prescription(inst: &Instance, from: VertexId, to: VertexId, amount: Z3) -> Result<Instance> {
    let mut child = inst.clone();
    for x in [from, to] {
        if !child.p.contains_key(&x) {
            return Err(Error::UnknownVertex(x));
        }
    }
    *child.p.get_mut(&from).unwrap() -= amount;
    *child.p.get_mut(&to).unwrap() += amount;
    finish(child)
}

/// Prescriptions as a plain map, for callers assembling instances.
pub fn prescription_sum(p: &BTreeMap<VertexId, Z3>) -> Z3 {
    p.values().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::InstanceSpec;

    fn triple() -> Instance {
        let mut s = InstanceSpec::default();
        s.vertex(0, 1, None).vertex(1, -1, None);
        s.edge(0, 0, 1).edge(1, 0, 1).edge(2, 0, 1);
        s.rot(0, &[0, 1, 2]).rot(1, &[2, 1, 0]);
        s.build().unwrap()
    }

    /// Wheel with hub 0 and rim 1..=n, spokes 0..n, rim edges n..2n.
    pub(crate) fn wheel(n: u32) -> Instance {
        let mut s = InstanceSpec::default();
        s.vertex(0, 0, None);
        for i in 1..=n {
            s.vertex(i, 0, None);
            s.edge(i - 1, 0, i);
            s.edge(n + i - 1, i, i % n + 1);
        }
        s.rot(0, &(0..n).collect::<Vec<_>>());
        for i in 1..=n {
            let prev = n + (i + n - 2) % n;
            s.rot(i, &[n + i - 1, i - 1, prev]);
        }
        s.fg = Some((n, 1, 0));
        s.build().unwrap()
    }

    #[test]
    fn wheel_is_planar_with_rim_face() {
        let w = wheel(5);
        assert_eq!(w.faces().len(), 6);
        let fg = w.specified_faces().fg.unwrap();
        assert_eq!(w.face_vertices(fg), (1..=5).collect());
    }

    #[test]
    fn delete_parallel_edge_drops_a_face() {
        let (child, _) = delete_edge(&triple(), 1).unwrap();
        assert_eq!(child.faces().len(), 2);
    }

    #[test]
    fn delete_oriented_edge_folds_prescription() {
        let inst = triple();
        let (child, t) = delete_edge(&inst.with_orientation(&[Dart::new(0, 1)].into_iter().collect()).unwrap(), 0).unwrap();
        assert_eq!(child.p(0), Z3::ZERO);
        assert_eq!(child.p(1), Z3::ZERO);
        let o: Orientation = [Dart::new(1, 0), Dart::new(2, 1)].into_iter().collect();
        assert!(child.is_valid_orientation(&o));
        let back = t.pull_back(&o);
        assert!(inst.is_valid_orientation(&back));
    }

    #[test]
    fn contract_single_edge_adds_prescriptions() {
        let mut s = InstanceSpec::default();
        s.vertex(0, 1, None).vertex(1, -1, None).edge(0, 0, 1).rot(0, &[0]).rot(1, &[0]);
        let inst = s.build().unwrap();
        let (child, _) = contract(&inst, &BTreeSet::from([0, 1])).unwrap();
        assert_eq!(child.graph().vertex_count(), 1);
        assert_eq!(child.p(0), Z3::ZERO);
    }

    #[test]
    fn contract_whole_boundary_picks_face_at_new_vertex() {
        let w = wheel(5);
        let (child, _) = contract(&w, &(1..=5).collect()).unwrap();
        assert_eq!(child.graph().vertex_count(), 2);
        let fg = child.specified_faces().fg.unwrap();
        assert!(child.face_vertices(fg).contains(&1));
    }

    #[test]
    fn contract_rejects_disconnected_set() {
        let w = wheel(6);
        assert!(matches!(contract(&w, &BTreeSet::from([1, 3])), Err(Error::BadContraction(_))));
    }

    #[test]
    fn lift_parallel_pair_makes_loop() {
        let inst = triple();
        let (child, _, new) = lift(&inst, 1, 0, 1).unwrap();
        assert!(child.graph().is_loop(new));
        assert_eq!(child.graph().degree(1), 1);
        assert_eq!(child.graph().degree(0), 3);
    }

    #[test]
    fn lift_requires_consecutive_edges() {
        let w = wheel(6);
        // Spokes 0 and 2 are not consecutive at the hub.
        assert!(lift(&w, 0, 0, 2).is_err());
        let (child, _, _) = lift(&w, 0, 0, 1).unwrap();
        assert_eq!(child.graph().degree(0), 4);
        let (l, r) = child.graph().euler();
        assert_eq!(l, r);
    }

    #[test]
    fn lift_pull_back_expands_direction() {
        let w = wheel(5);
        let (_child, t, new) = lift(&w, 0, 0, 1).unwrap();
        let mut o = Orientation::new();
        o.set(Dart::new(new, 0));
        let back = t.pull_back(&o);
        // Spoke 0 runs 0 -> 1, so the lifted path 1 -> 0 -> 2 leaves 1 first.
        assert_eq!(back.tail(0), Some(Dart::new(0, 1)));
        assert_eq!(back.tail(1), Some(Dart::new(1, 0)));
    }

    #[test]
    fn orient_vertex_meets_prescription() {
        let w = wheel(5).with_prescription(0, Z3::ONE).with_prescription(1, Z3::MINUS_ONE);
        let (child, _) = orient_vertex(&w, 0).unwrap();
        assert_eq!(child.fixed_residual(0), Z3::ONE);
        assert_eq!(child.unoriented_count(), 5);
        assert_eq!(vertex_orientations(&w, 0).unwrap().len(), 10 + 1);
    }

    #[test]
    fn add_directed_edge_adjusts_prescription() {
        let w = wheel(5);
        // Both darts go into the rim face corner, just before the rim edge leaving each end.
        let (child, t, e) = add_directed_edge(&w, 1, 3, Some(Dart::new(5, 0)), Some(Dart::new(7, 0))).unwrap();
        assert_eq!(child.p(3), Z3::ONE);
        assert_eq!(child.p(1), Z3::MINUS_ONE);
        assert!(child.orientation().contains(e));
        assert!(!t.pull_back(child.orientation()).contains(e));
    }

    #[test]
    fn chain_of_transfers() {
        let w = wheel(5);
        let (c1, t1) = orient_vertex(&w, 1).unwrap();
        let (c2, t2) = delete_vertex(&c1, 1).unwrap();
        let t = t1.then(t2);
        let o = crate::instance::Orientation::new();
        let back = t.pull_back(&o);
        for e in w.graph().incident_edges(1) {
            assert!(back.contains(e));
        }
        assert_eq!(c2.graph().vertex_count(), 5);
    }
}
