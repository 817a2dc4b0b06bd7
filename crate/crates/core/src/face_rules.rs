//! Predicts the specified faces after a mutation from the parent's face
//! boundaries alone, by set algebra on boundary edge sets. Used to cross-check
//! the dart tracking done by the mutations.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Dart, EdgeId, VertexId};
use crate::instance::Instance;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mutation {
    DeleteEdge(EdgeId),
    DeleteVertex(VertexId),
    Contract(BTreeSet<VertexId>),
    /// Lift `e1`, `e2` at their common vertex `v`.
    Lift { v: VertexId, e1: EdgeId, e2: EdgeId },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FacePrediction {
    Absent,
    /// The face bounded by exactly these edges.
    Edges(BTreeSet<EdgeId>),
    /// Any face incident with this vertex (a free choice). When only one
    /// face is left there the first specified face takes it and the second
    /// is absent.
    IncidentWith(VertexId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub fg: FacePrediction,
    pub fgs: FacePrediction,
}

impl Prediction {
    /// Whether the child's specified faces agree with the prediction.
    pub fn matches(&self, child: &Instance) -> bool {
        let faces = child.specified_faces();
        let check = |pred: &FacePrediction, h: Option<Dart>| match (pred, h) {
            (FacePrediction::Absent, None) => true,
            (FacePrediction::Edges(es), Some(h)) => &child.face_edges(h) == es,
            (FacePrediction::IncidentWith(v), Some(h)) => child.face_vertices(h).contains(v),
            _ => false,
        };
        let only_fg = |v: VertexId| {
            let cf = child.faces();
            let at: BTreeSet<Dart> = child.graph().rotation(v).iter().filter_map(|&d| cf.handle_of(d)).collect();
            at.iter().all(|&h| Some(h) == faces.fg)
        };
        let fgs_ok = match (&self.fg, &self.fgs, faces.fgs) {
            (_, FacePrediction::IncidentWith(v), None) => only_fg(*v),
            // A collapsed first face may have to take the second's place.
            (FacePrediction::IncidentWith(v), FacePrediction::Edges(es), None) => {
                only_fg(*v) && faces.fg.is_some_and(|h| &child.face_edges(h) == es)
            }
            (_, p, h) => check(p, h),
        };
        check(&self.fg, faces.fg) && fgs_ok
    }
}

/// Boundary edge set of the face containing dart `d`.
fn edges_of(inst: &Instance, d: Dart) -> BTreeSet<EdgeId> {
    inst.face_edges(d)
}

fn handle(inst: &Instance, d: Dart) -> Dart {
    inst.faces().handle_of(d).expect("dart of the embedding")
}

/// Predicted specified faces after `m`. Assumes `m` does not split a
/// component with edges: the merged face would then have one boundary walk
/// per piece and the child names only one of them.
pub fn predict(inst: &Instance, m: &Mutation) -> Result<Prediction> {
    // A face left without boundary edges has no dart to name it.
    let named = |f: FacePrediction| match f {
        FacePrediction::Edges(es) if es.is_empty() => FacePrediction::Absent,
        f => f,
    };
    let raw = predict_raw(inst, m)?;
    Ok(Prediction { fg: named(raw.fg), fgs: named(raw.fgs) })
}

fn predict_raw(inst: &Instance, m: &Mutation) -> Result<Prediction> {
    let g = inst.graph();
    let sf = inst.specified_faces();
    let keep = |h: Option<Dart>| h.map_or(FacePrediction::Absent, |h| FacePrediction::Edges(edges_of(inst, h)));
    let (fg, fgs) = (sf.fg, sf.fgs);
    match m {
        Mutation::DeleteEdge(e) => {
            g.ends(*e).ok_or(Error::UnknownEdge(*e))?;
            let sides = [handle(inst, Dart::new(*e, 0)), handle(inst, Dart::new(*e, 1))];
            let merged = || -> BTreeSet<EdgeId> {
                let mut s = edges_of(inst, sides[0]);
                s.extend(edges_of(inst, sides[1]));
                s.remove(e);
                s
            };
            let on = |h: Option<Dart>| h.is_some_and(|h| sides.contains(&h));
            let pf = if on(fg) { FacePrediction::Edges(merged()) } else { keep(fg) };
            let ps = if on(fgs) {
                if on(fg) {
                    FacePrediction::Absent
                } else {
                    FacePrediction::Edges(merged())
                }
            } else {
                keep(fgs)
            };
            Ok(Prediction { fg: pf, fgs: ps })
        }
        Mutation::DeleteVertex(v) => {
            if !g.contains_vertex(*v) {
                return Err(Error::UnknownVertex(*v));
            }
            let around: BTreeSet<Dart> = g.rotation(*v).iter().map(|&d| handle(inst, d)).collect();
            let star: BTreeSet<EdgeId> = g.incident_edges(*v).into_iter().collect();
            let merged = || -> BTreeSet<EdgeId> {
                let mut s = BTreeSet::new();
                for &h in &around {
                    s.extend(edges_of(inst, h));
                }
                s.retain(|e| !star.contains(e));
                s
            };
            let on = |h: Option<Dart>| h.is_some_and(|h| around.contains(&h));
            let pf = if on(fg) { FacePrediction::Edges(merged()) } else { keep(fg) };
            let ps = if on(fgs) {
                if on(fg) {
                    FacePrediction::Absent
                } else {
                    FacePrediction::Edges(merged())
                }
            } else {
                keep(fgs)
            };
            Ok(Prediction { fg: pf, fgs: ps })
        }
        Mutation::Contract(s) => {
            let root = *s.iter().next().ok_or_else(|| Error::BadContraction("empty vertex set".into()))?;
            let inside: BTreeSet<EdgeId> =
                g.edges().filter(|(_, [a, b])| s.contains(a) && s.contains(b)).map(|(e, _)| e).collect();
            let isolated = g.edges().all(|(_, [a, b])| s.contains(&a) == s.contains(&b));
            // A spanning tree of G[S] contracts without touching faces; every
            // other internal edge ends up a loop whose removal joins the faces
            // on its two sides. When G[S] has a cycle around other vertices
            // the embedding depends on the tree, so use the contraction's own:
            // breadth-first from the smallest vertex, in rotation order.
            let faces = inst.faces();
            let mut class: Vec<usize> = (0..faces.len()).collect();
            fn find(c: &mut Vec<usize>, i: usize) -> usize {
                if c[i] != i {
                    let r = find(c, c[i]);
                    c[i] = r;
                }
                c[i]
            }
            let mut joined = BTreeSet::from([root]);
            let mut queue = std::collections::VecDeque::from([root]);
            let mut tree = BTreeSet::new();
            while let Some(x) = queue.pop_front() {
                for &d in g.rotation(x) {
                    let y = g.dart_vertex(d.twin());
                    if s.contains(&y) && joined.insert(y) {
                        tree.insert(d.edge());
                        queue.push_back(y);
                    }
                }
            }
            for &e in &inside {
                if !tree.contains(&e) {
                    let a = find(&mut class, faces.face_of(Dart::new(e, 0)).unwrap());
                    let b = find(&mut class, faces.face_of(Dart::new(e, 1)).unwrap());
                    class[a] = b;
                }
            }
            let merged = |h: Dart, class: &mut Vec<usize>| -> (usize, BTreeSet<EdgeId>) {
                let root_class = find(class, faces.face_of(h).unwrap());
                let mut es = BTreeSet::new();
                for i in 0..faces.len() {
                    if find(class, i) == root_class {
                        es.extend(faces.edges(i));
                    }
                }
                es.retain(|e| !inside.contains(e));
                (root_class, es)
            };
            let mut one = |h: Option<Dart>| match h {
                None => (None, FacePrediction::Absent),
                Some(h) => {
                    let (c, es) = merged(h, &mut class);
                    // A face bounded inside S collapses into the new vertex;
                    // its replacement is a free choice at that vertex.
                    let pred = if inst.face_vertices(h).is_subset(s) {
                        if isolated {
                            FacePrediction::Absent
                        } else {
                            FacePrediction::IncidentWith(root)
                        }
                    } else {
                        FacePrediction::Edges(es)
                    };
                    (Some(c), pred)
                }
            };
            let (cg, pg) = one(fg);
            let (cs, ps) = one(fgs);
            let collapsed = |p: &FacePrediction| matches!(p, FacePrediction::IncidentWith(_));
            let ps = if cs.is_some() && cs == cg && !collapsed(&pg) && !collapsed(&ps) {
                FacePrediction::Absent
            } else {
                ps
            };
            Ok(Prediction { fg: pg, fgs: ps })
        }
        Mutation::Lift { v, e1, e2 } => {
            let (d1, d2) = match (g.dart_at(*e1, *v), g.dart_at(*e2, *v)) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::BadLift(*e1, *e2, "the edges do not share the given vertex".into())),
            };
            let rot = g.rotation(*v);
            let n = rot.len();
            let i1 = rot.iter().position(|&d| d == d1).unwrap();
            // The corner between the two darts at v lies in the face of the
            // dart that follows it; the far sides are the faces of the others.
            let (corner, far1, far2) = if rot[(i1 + 1) % n] == d2 {
                (handle(inst, d2), handle(inst, d1), handle(inst, d2.twin()))
            } else {
                (handle(inst, d1), handle(inst, d1.twin()), handle(inst, d2))
            };
            let new = g.next_edge_id();
            let lifted = |mut s: BTreeSet<EdgeId>| {
                s.remove(e1);
                s.remove(e2);
                s.insert(new);
                s
            };
            let merged = || {
                let mut s = edges_of(inst, far1);
                s.extend(edges_of(inst, far2));
                lifted(s)
            };
            let far = |h: Option<Dart>| h.is_some_and(|h| h == far1 || h == far2);
            let one = |h: Option<Dart>| match h {
                None => FacePrediction::Absent,
                Some(h) if far(Some(h)) => FacePrediction::Edges(merged()),
                Some(h) if h == corner => FacePrediction::Edges(lifted(edges_of(inst, h))),
                Some(h) => FacePrediction::Edges(edges_of(inst, h)),
            };
            let pf = one(fg);
            let ps = if far(fg) && far(fgs) { FacePrediction::Absent } else { one(fgs) };
            Ok(Prediction { fg: pf, fgs: ps })
        }
    }
}
