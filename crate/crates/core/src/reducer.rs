//! Reduction engine: shrinks an instance with the reduction steps, solves the
//! children and glues their orientations back, checking each glued result.
//! Whenever no step applies, a child fails, or a glue does not verify, the
//! node is solved by the exact oracle instead, so verdicts always agree
//! with the oracle.

use std::collections::BTreeSet;
use std::fmt;

use crate::classes::{check, classify, unoriented_degree3, ClassKind};
use crate::cuts::{delta, enumerate_cuts};
use crate::graph::{Dart, EdgeId, VertexId};
use crate::instance::{Instance, Mark, Marks, Orientation};
use crate::mutate::{contract_relaxed, delete_edge, lift, orient_edge, orient_edges, orient_vertex, vertex_orientations, Transfer};
use crate::oracle::{self, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StepKind {
    Base,
    ContractParallelAtD,
    CutSplit,
    ChordSplit,
    OrientVertex,
    DeleteBoundaryEdge,
    LiftAndDelete,
}

impl StepKind {
    pub fn name(self) -> &'static str {
        match self {
            StepKind::Base => "Base",
            StepKind::ContractParallelAtD => "ContractParallelAtD",
            StepKind::CutSplit => "CutSplit",
            StepKind::ChordSplit => "ChordSplit",
            StepKind::OrientVertex => "OrientVertex",
            StepKind::DeleteBoundaryEdge => "DeleteBoundaryEdge",
            StepKind::LiftAndDelete => "LiftAndDelete",
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A reduction step with the vertices and edges it acts on. For the split
/// steps `vertices` is the side that is contracted last (the side holding
/// the directed vertex).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub kind: StepKind,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    /// Tail darts fixed by the step before its structural change.
    pub orient: Vec<Dart>,
}

impl Step {
    fn new(kind: StepKind) -> Step {
        Step { kind, vertices: Vec::new(), edges: Vec::new(), orient: Vec::new() }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Config {
    /// Instances with at most this many vertices go straight to the oracle.
    pub oracle_vertex_budget: usize,
    /// Cap on candidate lifts examined per node.
    pub max_lift_candidates: usize,
}

impl Default for Config {
    fn default() -> Config {
        Config { oracle_vertex_budget: 12, max_lift_candidates: 12 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Step(StepKind),
    Oracle,
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKind::Step(k) => k.fmt(f),
            NodeKind::Oracle => f.write_str("Oracle"),
        }
    }
}

/// Recursion tree of one solve.
#[derive(Clone, Debug)]
pub struct Trace {
    pub kind: NodeKind,
    pub measure: (usize, usize),
    pub children: Vec<Trace>,
    /// The step was abandoned and the node solved by the oracle.
    pub fallback: bool,
    /// Glued orientations that failed verification (always expected zero).
    pub glue_failures: usize,
}

impl Trace {
    fn leaf(inst: &Instance) -> Trace {
        Trace { kind: NodeKind::Oracle, measure: inst.measure(), children: Vec::new(), fallback: false, glue_failures: 0 }
    }

    /// Every parent-to-child edge strictly decreases the measure.
    pub fn is_decreasing(&self) -> bool {
        self.children.iter().all(|c| c.measure < self.measure && c.is_decreasing())
    }

    pub fn total_glue_failures(&self) -> usize {
        self.glue_failures + self.children.iter().map(Trace::total_glue_failures).sum::<usize>()
    }

    pub fn nodes(&self) -> usize {
        1 + self.children.iter().map(Trace::nodes).sum::<usize>()
    }

    pub fn steps(&self) -> Vec<NodeKind> {
        let mut out = vec![self.kind];
        for c in &self.children {
            out.extend(c.steps());
        }
        out
    }

    pub fn dump(&self) -> String {
        let mut s = String::new();
        self.dump_into(&mut s, 0);
        s
    }

    fn dump_into(&self, s: &mut String, depth: usize) {
        let (e, u) = self.measure;
        s.push_str(&format!("{}step {} measure=({e},{u})", "  ".repeat(depth), self.kind));
        if self.fallback {
            s.push_str(" fallback");
        }
        s.push('\n');
        for c in &self.children {
            c.dump_into(s, depth + 1);
        }
    }
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Sat(Orientation, Trace),
    Unsat(Trace),
}

impl Outcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, Outcome::Sat(..))
    }

    pub fn trace(&self) -> &Trace {
        match self {
            Outcome::Sat(_, t) | Outcome::Unsat(t) => t,
        }
    }
}

/// Result of applying a step.
pub enum Application {
    /// Nothing left to decide.
    Base,
    /// One child; its orientations pull back through the transfer.
    Single { child: Instance, transfer: Transfer },
    /// Two-phase split along a cut: solve `first` (the other side collapsed),
    /// then build the second child with [`second_child`].
    Split { first: Instance, transfer: Transfer, keep: BTreeSet<VertexId> },
}

/// The single directed vertex of an instance: the one vertex incident with
/// every oriented edge, itself fully oriented.
fn directed_vertex(inst: &Instance) -> Option<Option<VertexId>> {
    let o = inst.orientation();
    if o.is_empty() {
        return Some(None);
    }
    let g = inst.graph();
    let e0 = o.edges().next()?;
    let [a, b] = g.ends(e0)?;
    [a, b]
        .into_iter()
        .find(|&x| {
            o.edges().all(|e| g.other_end(e, x).is_some())
                && g.incident_edges(x).iter().all(|&e| o.contains(e))
        })
        .map(Some)
}

/// The relaxed cut clause of the 3-variants only says something when all
/// three special vertices exist; with fewer, instances without a valid
/// orientation pass, so those variants are trusted only when fully marked.
fn trusted(inst: &Instance, klass: ClassKind) -> bool {
    let m = inst.marks();
    match klass {
        ClassKind::Dts3 => m.d.is_some() && m.t.is_some() && m.s.is_some(),
        ClassKind::Rst3 => m.r.is_some() && m.s.is_some() && m.t.is_some(),
        _ => true,
    }
}

/// Re-marks a child and returns it with the first class it passes. The
/// marks it came with are tried first, then fresh marks on the unoriented
/// degree-3 vertices.
pub fn remark(inst: &Instance) -> Option<(Instance, ClassKind)> {
    let d = directed_vertex(inst)?;
    let kept = inst.marks();
    if kept.d == d {
        if let Some(k) = classify(inst).into_iter().find(|&k| trusted(inst, k)) {
            return Some((inst.clone(), k));
        }
    }
    let cubic: Vec<VertexId> = unoriented_degree3(inst).into_iter().filter(|&v| Some(v) != d).collect();
    for klass in ClassKind::ALL {
        let slots: &[Mark] = match klass {
            ClassKind::Dts | ClassKind::Dts3 => &[Mark::T, Mark::S],
            ClassKind::Rst | ClassKind::Rst3 => &[Mark::R, Mark::S, Mark::T],
            ClassKind::Ft => &[Mark::T],
        };
        if cubic.len() > slots.len() && inst.graph().vertex_count() > 2 {
            continue;
        }
        let mut marks = Marks { d, ..Marks::default() };
        for (&v, &m) in cubic.iter().zip(slots) {
            marks.set(m, Some(v));
        }
        if let Ok(child) = inst.with_marks(marks) {
            if trusted(&child, klass) && check(&child, klass).pass {
                return Some((child, klass));
            }
        }
    }
    None
}

fn guarded(parent: &Instance, child: Instance) -> Option<Instance> {
    if child.measure() >= parent.measure() {
        return None;
    }
    remark(&child).map(|(c, _)| c)
}

/// Vertices that may be acted on at the boundary: the `F_G` boundary, or the
/// common boundary when a second face is specified.
fn working_boundary(inst: &Instance) -> BTreeSet<VertexId> {
    let sf = inst.specified_faces();
    let Some(fg) = sf.fg else { return BTreeSet::new() };
    let b1 = inst.face_vertices(fg);
    match sf.fgs {
        Some(h) => b1.intersection(&inst.face_vertices(h)).copied().collect(),
        None => b1,
    }
}

fn base(inst: &Instance) -> Option<(Step, Application)> {
    (inst.unoriented_count() == 0).then(|| (Step::new(StepKind::Base), Application::Base))
}

/// Orients the free edges at `v` with `choice` and merges `v` into `d`.
fn orient_and_merge(inst: &Instance, d: VertexId, v: VertexId, choice: &Orientation) -> Option<(Instance, Transfer)> {
    let (oriented, t1) = orient_edges(inst, choice).ok()?;
    let (child, t2) = contract_relaxed(&oriented, &BTreeSet::from([d, v])).ok()?;
    Some((child, t1.then(t2)))
}

fn contract_parallel_at_d(inst: &Instance) -> Option<(Step, Application)> {
    let d = inst.marks().d?;
    let g = inst.graph();
    for u in g.neighbours(d) {
        if u == d || g.multiplicity(d, u) < 2 || g.degree(u) > 4 {
            continue;
        }
        for choice in vertex_orientations(inst, u).ok()? {
            if let Some((child, transfer)) = orient_and_merge(inst, d, u, &choice) {
                if let Some(child) = guarded(inst, child) {
                    let step = Step {
                        kind: StepKind::ContractParallelAtD,
                        vertices: vec![d, u],
                        edges: Vec::new(),
                        orient: choice.iter().map(|(_, t)| t).collect(),
                    };
                    return Some((step, Application::Single { child, transfer }));
                }
            }
        }
    }
    None
}

/// Collapses everything outside `keep` to one vertex, after checking that
/// both sides lose edges so both phases shrink.
fn split_first(inst: &Instance, keep: &BTreeSet<VertexId>) -> Option<(Instance, Transfer)> {
    let g = inst.graph();
    let other: BTreeSet<VertexId> = g.vertices().filter(|v| !keep.contains(v)).collect();
    let inside = |s: &BTreeSet<VertexId>| g.edges().filter(|(_, [a, b])| s.contains(a) && s.contains(b)).count();
    if other.is_empty() || inside(keep) == 0 || inside(&other) == 0 {
        return None;
    }
    let (first, transfer) = contract_relaxed(inst, &other).ok()?;
    let first = guarded(inst, first)?;
    Some((first, transfer))
}

/// Second phase of a split: fix the cut as the first child's solution
/// directs it and collapse `keep` into a directed vertex.
pub fn second_child(inst: &Instance, keep: &BTreeSet<VertexId>, first: &Orientation) -> Option<(Instance, Transfer)> {
    let g = inst.graph();
    let mut cut = Orientation::new();
    for e in delta(g, keep) {
        if !inst.orientation().contains(e) {
            cut.set(first.tail(e)?);
        }
    }
    let (oriented, t1) = orient_edges(inst, &cut).ok()?;
    let (child, t2) = contract_relaxed(&oriented, keep).ok()?;
    let child = remark(&child).map(|(c, _)| c).unwrap_or(child);
    Some((child, t1.then(t2)))
}

fn side_with_d(inst: &Instance, side: &BTreeSet<VertexId>) -> BTreeSet<VertexId> {
    let g = inst.graph();
    let anchor = inst.marks().d.or_else(|| g.vertices().next());
    match anchor {
        Some(a) if !side.contains(&a) => g.vertices().filter(|v| !side.contains(v)).collect(),
        _ => side.clone(),
    }
}

fn cut_split(inst: &Instance) -> Option<(Step, Application)> {
    let g = inst.graph();
    if g.vertex_count() < 4 {
        return None;
    }
    for cut in enumerate_cuts(g, 4, 2) {
        let keep = side_with_d(inst, &cut.side);
        if let Some((first, transfer)) = split_first(inst, &keep) {
            let step = Step {
                kind: StepKind::CutSplit,
                vertices: keep.iter().copied().collect(),
                edges: cut.edges.iter().copied().collect(),
                orient: Vec::new(),
            };
            return Some((step, Application::Split { first, transfer, keep }));
        }
    }
    None
}

/// Vertex sets of the components of the graph with `removed` deleted.
fn components_without(inst: &Instance, removed: &[VertexId]) -> Vec<BTreeSet<VertexId>> {
    let g = inst.graph();
    let mut seen: BTreeSet<VertexId> = removed.iter().copied().collect();
    let mut out = Vec::new();
    for s in g.vertices() {
        if seen.contains(&s) {
            continue;
        }
        let mut comp = BTreeSet::from([s]);
        seen.insert(s);
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for y in g.neighbours(x) {
                if seen.insert(y) {
                    comp.insert(y);
                    stack.push(y);
                }
            }
        }
        out.push(comp);
    }
    out
}

fn chord_split(inst: &Instance) -> Option<(Step, Application)> {
    let sf = inst.specified_faces();
    let fg = sf.fg?;
    let boundary = inst.face_vertices(fg);
    let on_face: BTreeSet<EdgeId> = sf.handles().flat_map(|h| inst.face_edges(h)).collect();
    let g = inst.graph();
    for (e, [u, v]) in g.edges() {
        if u == v || on_face.contains(&e) || !boundary.contains(&u) || !boundary.contains(&v) {
            continue;
        }
        let comps = components_without(inst, &[u, v]);
        if comps.len() < 2 {
            continue;
        }
        let d = inst.marks().d;
        let Some(far) = comps.iter().find(|c| d.is_none_or(|d| !c.contains(&d))) else { continue };
        let keep: BTreeSet<VertexId> = g.vertices().filter(|x| !far.contains(x)).collect();
        if let Some((first, transfer)) = split_first(inst, &keep) {
            let step = Step {
                kind: StepKind::ChordSplit,
                vertices: keep.iter().copied().collect(),
                edges: vec![e],
                orient: Vec::new(),
            };
            return Some((step, Application::Split { first, transfer, keep }));
        }
    }
    None
}

fn orient_vertex_step(inst: &Instance) -> Option<(Step, Application)> {
    let g = inst.graph();
    let d = inst.marks().d;
    for v in working_boundary(inst) {
        if Some(v) == d || g.degree(v) > 5 || g.degree(v) == 0 {
            continue;
        }
        let touches_fixed = g.incident_edges(v).iter().any(|&e| inst.orientation().contains(e));
        let attempt = match d {
            None if !touches_fixed => orient_vertex(inst, v).ok(),
            Some(d) if g.multiplicity(d, v) > 0 => {
                let (oriented, t1) = orient_vertex(inst, v).ok()?;
                contract_relaxed(&oriented, &BTreeSet::from([d, v])).ok().map(|(c, t2)| (c, t1.then(t2)))
            }
            _ => None,
        };
        let Some((child, transfer)) = attempt else { continue };
        if let Some(child) = guarded(inst, child) {
            let step = Step { kind: StepKind::OrientVertex, vertices: vec![v], edges: Vec::new(), orient: Vec::new() };
            return Some((step, Application::Single { child, transfer }));
        }
    }
    None
}

fn delete_boundary_edge(inst: &Instance) -> Option<(Step, Application)> {
    let g = inst.graph();
    let d = inst.marks().d;
    let fg = inst.specified_faces().fg?;
    let edges = inst.face_edges(fg);
    for v in working_boundary(inst) {
        if Some(v) == d || g.degree(v) < 6 {
            continue;
        }
        for e in g.incident_edges(v) {
            if !edges.contains(&e) || g.is_loop(e) || inst.orientation().contains(e) {
                continue;
            }
            let out = g.dart_at(e, v)?;
            for tail in [out, out.twin()] {
                let Ok((oriented, t1)) = orient_edge(inst, tail) else { continue };
                let Ok((child, t2)) = delete_edge(&oriented, e) else { continue };
                if let Some(child) = guarded(inst, child) {
                    let step = Step {
                        kind: StepKind::DeleteBoundaryEdge,
                        vertices: vec![v],
                        edges: vec![e],
                        orient: vec![tail],
                    };
                    return Some((step, Application::Single { child, transfer: t1.then(t2) }));
                }
            }
        }
    }
    None
}

fn lift_and_delete(inst: &Instance, cfg: &Config) -> Option<(Step, Application)> {
    let g = inst.graph();
    let d = inst.marks().d;
    let mut tried = 0;
    for v in g.vertices() {
        if Some(v) == d || g.degree(v) < 4 {
            continue;
        }
        let rot = g.rotation(v);
        for i in 0..rot.len() {
            let (d1, d2) = (rot[i], rot[(i + 1) % rot.len()]);
            if d1.edge() == d2.edge() || g.is_loop(d1.edge()) || g.is_loop(d2.edge()) {
                continue;
            }
            if tried >= cfg.max_lift_candidates {
                return None;
            }
            tried += 1;
            let Ok((child, transfer, new)) = lift(inst, v, d1.edge(), d2.edge()) else { continue };
            if let Some(child) = guarded(inst, child) {
                let step = Step {
                    kind: StepKind::LiftAndDelete,
                    vertices: vec![v],
                    edges: vec![d1.edge(), d2.edge(), new],
                    orient: Vec::new(),
                };
                return Some((step, Application::Single { child, transfer }));
            }
        }
    }
    None
}

fn plan(inst: &Instance, cfg: &Config) -> Option<(Step, Application)> {
    if let Some(b) = base(inst) {
        return Some(b);
    }
    if !classify(inst).into_iter().any(|k| trusted(inst, k)) {
        return None;
    }
    contract_parallel_at_d(inst)
        .or_else(|| cut_split(inst))
        .or_else(|| chord_split(inst))
        .or_else(|| orient_vertex_step(inst))
        .or_else(|| delete_boundary_edge(inst))
        .or_else(|| lift_and_delete(inst, cfg))
}

/// First applicable step in precedence order, if the instance passes a class.
pub fn find_step(inst: &Instance) -> Option<Step> {
    plan(inst, &Config::default()).map(|(s, _)| s)
}

/// Applies a step found by [`find_step`]; `None` when its guard fails.
pub fn apply(inst: &Instance, step: &Step) -> Option<Application> {
    let (found, app) = plan(inst, &Config::default())?;
    (found == *step).then_some(app)
}

fn oracle_leaf(inst: &Instance) -> (Option<Orientation>, Trace) {
    let trace = Trace::leaf(inst);
    match oracle::solve(inst) {
        Verdict::Sat(o) => (Some(o), trace),
        Verdict::Unsat => (None, trace),
    }
}

fn fall_back(inst: &Instance, kind: StepKind, children: Vec<Trace>, glue_failures: usize) -> (Option<Orientation>, Trace) {
    let (o, _) = oracle_leaf(inst);
    let trace = Trace { kind: NodeKind::Step(kind), measure: inst.measure(), children, fallback: true, glue_failures };
    (o, trace)
}

fn solve_node(inst: &Instance, cfg: &Config) -> (Option<Orientation>, Trace) {
    if inst.graph().vertex_count() <= cfg.oracle_vertex_budget {
        return oracle_leaf(inst);
    }
    let Some((step, app)) = plan(inst, cfg) else {
        return oracle_leaf(inst);
    };
    let kind = step.kind;
    let node = |children, glue_failures| Trace {
        kind: NodeKind::Step(kind),
        measure: inst.measure(),
        children,
        fallback: false,
        glue_failures,
    };
    match app {
        Application::Base => {
            let o = inst.orientation().clone();
            if inst.is_valid_orientation(&o) {
                (Some(o), node(Vec::new(), 0))
            } else {
                (None, node(Vec::new(), 0))
            }
        }
        Application::Single { child, transfer } => {
            let (o, t) = solve_node(&child, cfg);
            let Some(o) = o else { return fall_back(inst, kind, vec![t], 0) };
            let glued = transfer.pull_back(&o);
            if inst.is_valid_orientation(&glued) {
                (Some(glued), node(vec![t], 0))
            } else {
                fall_back(inst, kind, vec![t], 1)
            }
        }
        Application::Split { first, transfer, keep } => {
            let (o1, t1) = solve_node(&first, cfg);
            let Some(o1) = o1 else { return fall_back(inst, kind, vec![t1], 0) };
            let part = transfer.pull_back(&o1);
            let Some((second, transfer2)) = second_child(inst, &keep, &part) else {
                return fall_back(inst, kind, vec![t1], 0);
            };
            let (o2, t2) = solve_node(&second, cfg);
            let Some(o2) = o2 else { return fall_back(inst, kind, vec![t1, t2], 0) };
            let mut glued = transfer2.pull_back(&o2);
            for (e, d) in part.iter() {
                if !glued.contains(e) {
                    glued.set(d);
                }
            }
            if inst.is_valid_orientation(&glued) {
                (Some(glued), node(vec![t1, t2], 0))
            } else {
                fall_back(inst, kind, vec![t1, t2], 1)
            }
        }
    }
}

/// Solves by reduction, with the oracle at the leaves and as fallback.
pub fn reduce_solve(inst: &Instance, cfg: &Config) -> Outcome {
    match solve_node(inst, cfg) {
        (Some(o), t) => Outcome::Sat(o, t),
        (None, t) => Outcome::Unsat(t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::ClassKind;
    use crate::families::gen_corpus;

    #[test]
    fn fully_oriented_instance_is_base() {
        let corpus = gen_corpus(3, 6, ClassKind::Dts, 5);
        let inst = &corpus[0];
        let o = oracle::solve(inst);
        let Verdict::Sat(o) = o else { panic!("corpus member without solution") };
        let full = inst.with_orientation(&o).unwrap();
        assert_eq!(find_step(&full).map(|s| s.kind), Some(StepKind::Base));
    }

    #[test]
    fn reducer_agrees_with_oracle_on_small_corpus() {
        let cfg = Config { oracle_vertex_budget: 2, ..Config::default() };
        for klass in [ClassKind::Dts, ClassKind::Ft] {
            for inst in gen_corpus(11, 9, klass, 12) {
                let out = reduce_solve(&inst, &cfg);
                assert_eq!(out.is_sat(), oracle::solve(&inst).is_sat());
                assert!(out.trace().is_decreasing());
                assert_eq!(out.trace().total_glue_failures(), 0);
                if let Outcome::Sat(o, _) = &out {
                    assert!(inst.is_valid_orientation(o));
                }
            }
        }
    }
}
