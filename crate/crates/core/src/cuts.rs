//! Edge cuts: connectivity, enumeration of small cuts, and the cut notions
//! that depend on specified faces.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::flow::edge_disjoint_paths;
use crate::graph::{EdgeId, Graph, VertexId};
use crate::instance::Instance;

/// An edge cut, stored by its canonical side: the side that does not contain
/// the smallest vertex id.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cut {
    pub side: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

impl Cut {
    /// Cut with the given vertex set on one side, whichever side it is.
    pub fn from_side(g: &Graph, side: &BTreeSet<VertexId>) -> Cut {
        let side = match g.vertices().next() {
            Some(min) if side.contains(&min) => g.vertices().filter(|v| !side.contains(v)).collect(),
            _ => side.clone(),
        };
        let edges = delta(g, &side);
        Cut { side, edges }
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn complement(&self, g: &Graph) -> BTreeSet<VertexId> {
        g.vertices().filter(|v| !self.side.contains(v)).collect()
    }

    /// The side containing `v`.
    pub fn side_of(&self, g: &Graph, v: VertexId) -> BTreeSet<VertexId> {
        if self.side.contains(&v) {
            self.side.clone()
        } else {
            self.complement(g)
        }
    }

    /// Whether this is `δ(v)` for a single vertex `v` (on either side).
    pub fn is_vertex_star(&self, g: &Graph, v: VertexId) -> bool {
        (self.side.len() == 1 && self.side.contains(&v))
            || (self.side.len() + 1 == g.vertex_count() && !self.side.contains(&v))
    }

    /// `|A| >= 2` and `|G - A| >= k` where `A` is the side containing `d`.
    pub fn is_robust(&self, g: &Graph, d: VertexId, k: usize) -> bool {
        let a = self.side_of(g, d).len();
        a >= 2 && g.vertex_count() - a >= k
    }

    /// Whether the cut separates `x` from `y`.
    pub fn separates(&self, x: VertexId, y: VertexId) -> bool {
        self.side.contains(&x) != self.side.contains(&y)
    }
}

/// Edges with exactly one endpoint in `side`.
pub fn delta(g: &Graph, side: &BTreeSet<VertexId>) -> BTreeSet<EdgeId> {
    g.edges().filter(|(_, [a, b])| side.contains(a) != side.contains(b)).map(|(e, _)| e).collect()
}

/// Size of a minimum edge cut; `usize::MAX` for graphs on at most one vertex.
pub fn edge_connectivity(g: &Graph) -> usize {
    let vs: Vec<VertexId> = g.vertices().collect();
    if vs.len() <= 1 {
        return usize::MAX;
    }
    if !g.is_connected() {
        return 0;
    }
    let src = BTreeSet::from([vs[0]]);
    let mut best = g.degree(vs[0]);
    for &v in &vs[1..] {
        best = best.min(edge_disjoint_paths(g, &src, &BTreeSet::from([v]), best));
    }
    best
}

/// All cuts with at most `kmax` edges whose two sides both have at least
/// `min_side` vertices, sorted by size and then by canonical side.
pub fn enumerate_cuts(g: &Graph, kmax: usize, min_side: usize) -> Vec<Cut> {
    let mut out = if g.vertex_count() <= 16 { brute_force(g, kmax, min_side) } else { branch_and_bound(g, kmax, min_side) };
    out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.side.cmp(&b.side)));
    out
}

/// Non-loop neighbour lists by dense vertex index, one entry per edge end.
fn dense_adjacency(g: &Graph) -> (Vec<VertexId>, Vec<Vec<usize>>) {
    let vs: Vec<VertexId> = g.vertices().collect();
    let index: HashMap<VertexId, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj = vec![Vec::new(); vs.len()];
    for (_, [a, b]) in g.edges() {
        if a != b {
            adj[index[&a]].push(index[&b]);
            adj[index[&b]].push(index[&a]);
        }
    }
    (vs, adj)
}

/// Gray-code walk over every canonical side, updating the cut size as one
/// vertex changes side at a time.
pub(crate) fn brute_force(g: &Graph, kmax: usize, min_side: usize) -> Vec<Cut> {
    let (vs, adj) = dense_adjacency(g);
    let n = vs.len();
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut inside = vec![false; n];
    let mut size: usize = 0;
    let mut count = 0usize;
    for step in 1u64..(1u64 << (n - 1)) {
        // Vertex 0 stays outside; bit i of the Gray code is vertex i + 1.
        let x = step.trailing_zeros() as usize + 1;
        for &y in &adj[x] {
            if inside[y] == inside[x] {
                size += 1;
            } else {
                size -= 1;
            }
        }
        inside[x] = !inside[x];
        count = if inside[x] { count + 1 } else { count - 1 };
        if size <= kmax && count >= min_side && n - count >= min_side {
            let side: BTreeSet<VertexId> = (0..n).filter(|&i| inside[i]).map(|i| vs[i]).collect();
            let edges = delta(g, &side);
            out.push(Cut { side, edges });
        }
    }
    out
}

/// Depth-first assignment of vertices to the two sides in breadth-first
/// order, pruning as soon as the edges already decided exceed `kmax`.
pub(crate) fn branch_and_bound(g: &Graph, kmax: usize, min_side: usize) -> Vec<Cut> {
    let (vs, adj) = dense_adjacency(g);
    let n = vs.len();
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        order.push(start);
        let mut k = order.len() - 1;
        while k < order.len() {
            let x = order[k];
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    order.push(y);
                }
            }
            k += 1;
        }
    }
    // Vertex 0 comes first and is fixed outside.
    let mut state: Vec<Option<bool>> = vec![None; n];
    state[order[0]] = Some(false);
    struct Search<'a> {
        adj: &'a [Vec<usize>],
        order: &'a [usize],
        kmax: usize,
        min_side: usize,
        n: usize,
    }
    fn go(
        s: &Search,
        pos: usize,
        state: &mut Vec<Option<bool>>,
        size: usize,
        count: usize,
        found: &mut Vec<Vec<bool>>,
    ) {
        if pos == s.order.len() {
            if count >= s.min_side && s.n - count >= s.min_side {
                found.push(state.iter().map(|x| x.unwrap_or(false)).collect());
            }
            return;
        }
        let x = s.order[pos];
        for choice in [false, true] {
            let added = s.adj[x].iter().filter(|&&y| state[y].is_some_and(|c| c != choice)).count();
            if size + added > s.kmax {
                continue;
            }
            state[x] = Some(choice);
            go(s, pos + 1, state, size + added, count + usize::from(choice), found);
            state[x] = None;
        }
    }
    let search = Search { adj: &adj, order: &order, kmax, min_side, n };
    let mut found = Vec::new();
    go(&search, 1, &mut state, 0, 0, &mut found);
    for inside in found {
        if !inside.iter().any(|&b| b) {
            continue;
        }
        let side: BTreeSet<VertexId> = (0..n).filter(|&i| inside[i]).map(|i| vs[i]).collect();
        let edges = delta(g, &side);
        out.push(Cut { side, edges });
    }
    out
}

/// Whether the two cuts cross: all four corners are nonempty.
pub fn crossing(g: &Graph, c1: &Cut, c2: &Cut) -> bool {
    let (a, b) = (&c1.side, &c2.side);
    let mut corners = [false; 4];
    for v in g.vertices() {
        let k = usize::from(a.contains(&v)) * 2 + usize::from(b.contains(&v));
        corners[k] = true;
    }
    corners.iter().all(|&c| c)
}

fn require_face(inst: &Instance) -> Result<()> {
    if inst.specified_faces().count() == 0 {
        return Err(Error::MissingFace("the instance has no specified face".into()));
    }
    Ok(())
}

/// True when one side avoids every vertex of the specified face boundaries.
pub fn is_internal(inst: &Instance, c: &Cut) -> Result<bool> {
    require_face(inst)?;
    let boundary = inst.boundary_vertices();
    let comp = c.complement(inst.graph());
    Ok(c.side.is_disjoint(&boundary) || comp.is_disjoint(&boundary))
}

/// 1, 2 or 3 when the cut's edges meet the boundary of neither, exactly one
/// or both specified faces.
pub fn cut_type(inst: &Instance, c: &Cut) -> Result<u8> {
    let sf = inst.specified_faces();
    let (Some(fg), Some(fgs)) = (sf.fg, sf.fgs) else {
        return Err(Error::MissingFace("cut types need two specified faces".into()));
    };
    let hits = [fg, fgs].iter().filter(|&&h| !inst.face_edges(h).is_disjoint(&c.edges)).count();
    Ok(1 + hits as u8)
}

/// Number of edge-disjoint paths from `v` to the union of the specified
/// boundaries; `None` when `v` lies on one of them.
pub fn boundary_connectivity(inst: &Instance, v: VertexId) -> Result<Option<usize>> {
    require_face(inst)?;
    if !inst.graph().contains_vertex(v) {
        return Err(Error::UnknownVertex(v));
    }
    let boundary = inst.boundary_vertices();
    if boundary.contains(&v) {
        return Ok(None);
    }
    Ok(Some(edge_disjoint_paths(inst.graph(), &BTreeSet::from([v]), &boundary, usize::MAX)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::InstanceSpec;

    fn cycle(n: u32) -> Graph {
        let mut s = InstanceSpec::default();
        for i in 0..n {
            s.vertex(i, 0, None);
            s.edge(i, i, (i + 1) % n);
        }
        for i in 0..n {
            s.rot(i, &[i, (i + n - 1) % n]);
        }
        s.build().unwrap().graph().clone()
    }

    #[test]
    fn cycle_connectivity_and_cuts() {
        let c4 = cycle(4);
        assert_eq!(edge_connectivity(&c4), 2);
        assert_eq!(enumerate_cuts(&c4, 2, 2).len(), 2);
        assert_eq!(enumerate_cuts(&c4, 2, 1).len(), 6);
    }

    #[test]
    fn branch_and_bound_matches_brute_force_on_cycles() {
        for n in 3..10 {
            let g = cycle(n);
            for k in 1..4 {
                let mut a = brute_force(&g, k, 1);
                let mut b = branch_and_bound(&g, k, 1);
                a.sort();
                b.sort();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn crossing_diagonals_of_c6() {
        let g = cycle(6);
        let top = Cut::from_side(&g, &BTreeSet::from([0, 1, 2]));
        let left = Cut::from_side(&g, &BTreeSet::from([1, 2, 3]));
        assert!(crossing(&g, &top, &left));
        let nested = Cut::from_side(&g, &BTreeSet::from([1, 2]));
        assert!(!crossing(&g, &top, &nested));
        let comp = Cut::from_side(&g, &BTreeSet::from([3, 4, 5]));
        assert!(!crossing(&g, &top, &comp));
    }
}
