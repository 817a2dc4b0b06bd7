//! Exact search for valid orientations.
//!
//! Edges are branched in ascending id order, trying the lower endpoint as
//! tail first. A vertex with exactly one free edge left forces that edge's
//! direction; a vertex with none left must already meet its target.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Dart, EdgeId, VertexId};
use crate::instance::{Instance, Orientation};
use crate::z3::Z3;

/// Most unoriented edges [`count`] will enumerate.
pub const COUNT_BUDGET: usize = 26;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub propagations: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat(Orientation),
    Unsat,
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }
}

/// Search problem derived from an instance. Targets may be dropped to leave
/// a vertex unconstrained, and edges may be forced before searching.
#[derive(Clone, Debug)]
pub struct Problem {
    vertex_ids: Vec<VertexId>,
    target: Vec<Option<Z3>>,
    base: Vec<Z3>,
    /// Free non-loop edges as `(id, end0, end1)`, ascending by id.
    edges: Vec<(EdgeId, usize, usize)>,
    fixed: Orientation,
    free_loops: Vec<EdgeId>,
}

impl Problem {
    pub fn new(inst: &Instance) -> Problem {
        let g = inst.graph();
        let vertex_ids: Vec<VertexId> = g.vertices().collect();
        let index: BTreeMap<VertexId, usize> = vertex_ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let target = vertex_ids.iter().map(|&v| Some(inst.p(v))).collect();
        let base = vertex_ids.iter().map(|&v| inst.fixed_residual(v)).collect();
        let mut edges = Vec::new();
        let mut free_loops = Vec::new();
        for (e, [a, b]) in g.edges() {
            if inst.orientation().contains(e) {
                continue;
            }
            if a == b {
                free_loops.push(e);
            } else {
                edges.push((e, index[&a], index[&b]));
            }
        }
        Problem { vertex_ids, target, base, edges, fixed: inst.orientation().clone(), free_loops }
    }

    fn index(&self, v: VertexId) -> Result<usize> {
        self.vertex_ids.binary_search(&v).map_err(|_| Error::UnknownVertex(v))
    }

    /// Drops the constraint at `v`.
    pub fn unconstrain(&mut self, v: VertexId) -> Result<()> {
        let i = self.index(v)?;
        self.target[i] = None;
        Ok(())
    }

    /// Keeps constraints only at the listed vertices.
    pub fn constrain_only(&mut self, keep: &[VertexId]) {
        for (i, v) in self.vertex_ids.iter().enumerate() {
            if !keep.contains(v) {
                self.target[i] = None;
            }
        }
    }

    /// Fixes a free edge in the direction of `tail` (which must be given by
    /// its end index: side 0 leaves endpoint 0).
    pub fn force(&mut self, tail: Dart) -> Result<()> {
        let e = tail.edge();
        let pos = self.edges.iter().position(|x| x.0 == e).ok_or(Error::AlreadyOriented(e))?;
        let (_, a, b) = self.edges.remove(pos);
        let (t, h) = if tail.side() == 0 { (a, b) } else { (b, a) };
        self.base[t] -= Z3::ONE;
        self.base[h] += Z3::ONE;
        self.fixed.set(tail);
        Ok(())
    }

    pub fn free_edges(&self) -> usize {
        self.edges.len() + self.free_loops.len()
    }

    pub fn solve(&self) -> (Verdict, SearchStats) {
        let mut s = Search::new(self);
        let found = s.run(false);
        let verdict = if found > 0 { Verdict::Sat(s.orientation()) } else { Verdict::Unsat };
        (verdict, s.stats)
    }

    /// Number of valid completions; a free loop doubles the count.
    pub fn count(&self) -> (u64, SearchStats) {
        let mut s = Search::new(self);
        let n = s.run(true);
        (n << self.free_loops.len(), s.stats)
    }
}

struct Search<'a> {
    p: &'a Problem,
    residual: Vec<Z3>,
    free: Vec<u32>,
    incident: Vec<Vec<usize>>,
    /// 0 unassigned, 1 tail at end 0, 2 tail at end 1.
    dir: Vec<u8>,
    trail: Vec<usize>,
    solution: Option<Vec<u8>>,
    stats: SearchStats,
}

impl<'a> Search<'a> {
    fn new(p: &'a Problem) -> Search<'a> {
        let n = p.vertex_ids.len();
        let mut free = vec![0; n];
        let mut incident = vec![Vec::new(); n];
        for (k, &(_, a, b)) in p.edges.iter().enumerate() {
            free[a] += 1;
            free[b] += 1;
            incident[a].push(k);
            incident[b].push(k);
        }
        Search {
            p,
            residual: p.base.clone(),
            free,
            incident,
            dir: vec![0; p.edges.len()],
            trail: Vec::new(),
            solution: None,
            stats: SearchStats::default(),
        }
    }

    fn assign(&mut self, k: usize, d: u8) {
        let (_, a, b) = self.p.edges[k];
        let (t, h) = if d == 1 { (a, b) } else { (b, a) };
        self.residual[t] -= Z3::ONE;
        self.residual[h] += Z3::ONE;
        self.free[a] -= 1;
        self.free[b] -= 1;
        self.dir[k] = d;
        self.trail.push(k);
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let k = self.trail.pop().unwrap();
            let (_, a, b) = self.p.edges[k];
            let (t, h) = if self.dir[k] == 1 { (a, b) } else { (b, a) };
            self.residual[t] += Z3::ONE;
            self.residual[h] -= Z3::ONE;
            self.free[a] += 1;
            self.free[b] += 1;
            self.dir[k] = 0;
        }
    }

    /// Forces directions until nothing changes; false on a conflict.
    fn propagate(&mut self, mut queue: Vec<usize>) -> bool {
        while let Some(v) = queue.pop() {
            let Some(target) = self.p.target[v] else { continue };
            match self.free[v] {
                0 => {
                    if self.residual[v] != target {
                        return false;
                    }
                }
                1 => {
                    let need = target - self.residual[v];
                    if need.is_zero() {
                        return false;
                    }
                    let k = *self.incident[v].iter().find(|&&k| self.dir[k] == 0).unwrap();
                    let (_, a, b) = self.p.edges[k];
                    // need = +1: the edge enters v; need = -1: it leaves v.
                    let into_v = need == Z3::ONE;
                    let tail_is_a = (a == v) != into_v;
                    self.assign(k, if tail_is_a { 1 } else { 2 });
                    self.stats.propagations += 1;
                    queue.push(a);
                    queue.push(b);
                }
                _ => {}
            }
        }
        true
    }

    fn run(&mut self, count_all: bool) -> u64 {
        let all: Vec<usize> = (0..self.p.vertex_ids.len()).collect();
        if !self.propagate(all) {
            return 0;
        }
        self.dfs(0, count_all)
    }

    fn dfs(&mut self, from: usize, count_all: bool) -> u64 {
        self.stats.nodes += 1;
        let Some(k) = (from..self.p.edges.len()).find(|&k| self.dir[k] == 0) else {
            if self.solution.is_none() {
                self.solution = Some(self.dir.clone());
            }
            return 1;
        };
        let (_, a, b) = self.p.edges[k];
        let low_first = if self.p.vertex_ids[a] <= self.p.vertex_ids[b] { [1, 2] } else { [2, 1] };
        let mut total = 0;
        for d in low_first {
            let mark = self.trail.len();
            self.assign(k, d);
            if self.propagate(vec![a, b]) {
                total += self.dfs(k + 1, count_all);
            }
            self.undo_to(mark);
            if total > 0 && !count_all {
                break;
            }
        }
        total
    }

    fn orientation(&self) -> Orientation {
        let mut o = self.p.fixed.clone();
        if let Some(dir) = &self.solution {
            for (k, &(e, _, _)) in self.p.edges.iter().enumerate() {
                o.set(Dart::new(e, if dir[k] == 1 { 0 } else { 1 }));
            }
        }
        for &e in &self.p.free_loops {
            o.set(Dart::new(e, 0));
        }
        o
    }
}

pub fn solve(inst: &Instance) -> Verdict {
    solve_with_stats(inst).0
}

pub fn solve_with_stats(inst: &Instance) -> (Verdict, SearchStats) {
    Problem::new(inst).solve()
}

/// Number of valid orientations extending the fixed edges.
pub fn count(inst: &Instance) -> Result<u64> {
    count_with_budget(inst, COUNT_BUDGET)
}

pub fn count_with_budget(inst: &Instance, budget: usize) -> Result<u64> {
    let p = Problem::new(inst);
    if p.free_edges() > budget {
        return Err(Error::BudgetExceeded { free: p.free_edges(), budget });
    }
    Ok(p.count().0)
}
