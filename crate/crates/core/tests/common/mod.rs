//! Reference implementations used to cross-check the library in tests.
//! They share nothing with the library beyond read-only accessors.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use z3flow::face_rules::Mutation;
use z3flow::graph::{Dart, EdgeId, Graph, VertexId};
use z3flow::{mutate, Instance};

/// Orientation counts by plain enumeration over the free non-loop edges;
/// free loops each double the count. `None` above `max_free` free edges.
pub fn brute_count(inst: &Instance, max_free: usize) -> Option<u64> {
    let g = inst.graph();
    let fixed = inst.orientation();
    let mut base: BTreeMap<VertexId, i64> = g.vertices().map(|v| (v, 0)).collect();
    let mut free = Vec::new();
    let mut loops = 0u32;
    for (e, [a, b]) in g.edges() {
        if a == b {
            if fixed.tail(e).is_none() {
                loops += 1;
            }
            continue;
        }
        match fixed.tail(e) {
            Some(t) => {
                let tail = g.dart_vertex(t);
                let head = if tail == a { b } else { a };
                *base.get_mut(&tail).unwrap() -= 1;
                *base.get_mut(&head).unwrap() += 1;
            }
            None => free.push((a, b)),
        }
    }
    if free.len() > max_free {
        return None;
    }
    let target: BTreeMap<VertexId, i64> = g.vertices().map(|v| (v, inst.p(v).balanced() as i64)).collect();
    let mut count = 0u64;
    for mask in 0u64..(1u64 << free.len()) {
        let mut r = base.clone();
        for (i, &(a, b)) in free.iter().enumerate() {
            let (t, h) = if mask >> i & 1 == 0 { (a, b) } else { (b, a) };
            *r.get_mut(&t).unwrap() -= 1;
            *r.get_mut(&h).unwrap() += 1;
        }
        if r.iter().all(|(v, x)| (x - target[v]).rem_euclid(3) == 0) {
            count += 1;
        }
    }
    Some(count << loops)
}

/// Face orbits traced directly from the rotations: the successor of a dart
/// is the dart after its twin in the rotation at the twin's vertex.
pub fn trace_orbits(g: &Graph) -> Vec<Vec<Dart>> {
    let mut next_at: BTreeMap<Dart, Dart> = BTreeMap::new();
    for v in g.vertices() {
        let rot = g.rotation(v);
        for (i, &d) in rot.iter().enumerate() {
            next_at.insert(d, rot[(i + 1) % rot.len()]);
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &start in next_at.keys() {
        if seen.contains(&start) {
            continue;
        }
        let mut orbit = Vec::new();
        let mut d = start;
        while seen.insert(d) {
            orbit.push(d);
            d = next_at[&d.twin()];
        }
        out.push(orbit);
    }
    out
}

/// Euler's formula per connected component, with faces traced independently.
pub fn euler_holds(g: &Graph) -> bool {
    let orbits = trace_orbits(g);
    let mut comp_of = BTreeMap::new();
    for (i, c) in components(g).iter().enumerate() {
        for &v in c {
            comp_of.insert(v, i);
        }
    }
    let k = components(g).len();
    let mut chi = vec![0i64; k];
    for v in g.vertices() {
        chi[comp_of[&v]] += 1;
        if g.rotation(v).is_empty() {
            chi[comp_of[&v]] += 1;
        }
    }
    for (_, [a, _]) in g.edges() {
        chi[comp_of[&a]] -= 1;
    }
    for o in &orbits {
        chi[comp_of[&g.dart_vertex(o[0])]] += 1;
    }
    chi.iter().all(|&x| x == 2)
}

pub fn components(g: &Graph) -> Vec<BTreeSet<VertexId>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for s in g.vertices() {
        if !seen.insert(s) {
            continue;
        }
        let mut comp = BTreeSet::from([s]);
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for (_, [a, b]) in g.edges() {
                let y = if a == x { b } else if b == x { a } else { continue };
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

/// Edges with exactly one end in `side`.
pub fn cut_edges(g: &Graph, side: &BTreeSet<VertexId>) -> BTreeSet<EdgeId> {
    g.edges().filter(|(_, [a, b])| side.contains(a) != side.contains(b)).map(|(e, _)| e).collect()
}

/// Every cut of exactly `k` edges, as the side avoiding the smallest vertex.
pub fn cuts_of_size(g: &Graph, k: usize) -> Vec<BTreeSet<VertexId>> {
    let vs: Vec<VertexId> = g.vertices().collect();
    let n = vs.len();
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for mask in 1u64..(1u64 << (n - 1)) {
        let side: BTreeSet<VertexId> = (0..n - 1).filter(|i| mask >> i & 1 == 1).map(|i| vs[i + 1]).collect();
        if cut_edges(g, &side).len() == k {
            out.push(side);
        }
    }
    out
}

pub fn cross(all: &BTreeSet<VertexId>, a: &BTreeSet<VertexId>, b: &BTreeSet<VertexId>) -> bool {
    let both = a.intersection(b).next().is_some();
    let a_only = a.difference(b).next().is_some();
    let b_only = b.difference(a).next().is_some();
    let neither = all.iter().any(|v| !a.contains(v) && !b.contains(v));
    both && a_only && b_only && neither
}

/// Number of edge-disjoint paths from `v` to `targets`, by repeated
/// augmenting search on unit capacities in both directions.
pub fn disjoint_paths(g: &Graph, v: VertexId, targets: &BTreeSet<VertexId>) -> usize {
    // Residual capacity per (edge, direction): direction 0 is ends[0] -> ends[1].
    let edges: Vec<(EdgeId, [VertexId; 2])> = g.edges().filter(|(_, [a, b])| a != b).collect();
    let mut flow: Vec<i32> = vec![0; edges.len()];
    let mut total = 0;
    loop {
        let mut prev: BTreeMap<VertexId, (usize, i32)> = BTreeMap::new();
        let mut seen = BTreeSet::from([v]);
        let mut queue = std::collections::VecDeque::from([v]);
        let mut end = None;
        while let Some(x) = queue.pop_front() {
            if targets.contains(&x) {
                end = Some(x);
                break;
            }
            for (i, &(_, [a, b])) in edges.iter().enumerate() {
                // Moving a -> b needs flow[i] < 1; b -> a needs flow[i] > -1.
                let step = if a == x && flow[i] < 1 {
                    Some((b, 1))
                } else if b == x && flow[i] > -1 {
                    Some((a, -1))
                } else {
                    None
                };
                if let Some((y, dir)) = step {
                    if seen.insert(y) {
                        prev.insert(y, (i, dir));
                        queue.push_back(y);
                    }
                }
            }
        }
        let Some(mut x) = end else { return total };
        if x == v {
            return usize::MAX;
        }
        while x != v {
            let (i, dir) = prev[&x];
            flow[i] += dir;
            let [a, b] = edges[i].1;
            x = if dir == 1 { a } else { b };
        }
        total += 1;
    }
}

/// A random face-rule mutation of `inst` that applies cleanly.
pub fn random_mutation(inst: &Instance, rng: &mut ChaCha8Rng) -> Option<(Mutation, Instance)> {
    let g = inst.graph();
    let vs: Vec<VertexId> = g.vertices().collect();
    let es: Vec<EdgeId> = g.edge_ids().collect();
    match rng.gen_range(0..4) {
        0 => {
            let &e = es.choose(rng)?;
            let child = mutate::delete_edge(inst, e).ok()?.0;
            Some((Mutation::DeleteEdge(e), child))
        }
        1 => {
            let &v = vs.choose(rng)?;
            let &into = vs.iter().filter(|&&y| y != v).collect::<Vec<_>>().choose(rng)?;
            let child = mutate::delete_vertex_rebalance(inst, v, *into).ok()?.0;
            Some((Mutation::DeleteVertex(v), child))
        }
        2 => {
            let &e = es.choose(rng)?;
            let [a, b] = g.ends(e)?;
            let mut s = BTreeSet::from([a, b]);
            if rng.gen_bool(0.3) {
                if let Some(&c) = g.neighbours(b).iter().collect::<Vec<_>>().choose(rng) {
                    s.insert(*c);
                }
            }
            let child = mutate::contract(inst, &s).ok()?.0;
            Some((Mutation::Contract(s), child))
        }
        _ => {
            let &v = vs.choose(rng)?;
            let rot = g.rotation(v);
            if rot.len() < 2 {
                return None;
            }
            let i = rng.gen_range(0..rot.len());
            let (e1, e2) = (rot[i].edge(), rot[(i + 1) % rot.len()].edge());
            let child = mutate::lift(inst, v, e1, e2).ok()?.0;
            Some((Mutation::Lift { v, e1, e2 }, child))
        }
    }
}

/// Number of connected components that have at least one edge.
pub fn edged_components(g: &Graph) -> usize {
    components(g).iter().filter(|c| c.iter().any(|&v| g.degree(v) > 0)).count()
}
