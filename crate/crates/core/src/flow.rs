//! Unit-capacity maximum flow on the underlying undirected multigraph.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::graph::{Graph, VertexId};

struct Network {
    head: Vec<usize>,
    cap: Vec<i32>,
    adj: Vec<Vec<usize>>,
}

impl Network {
    fn new(n: usize) -> Network {
        Network { head: Vec::new(), cap: Vec::new(), adj: vec![Vec::new(); n] }
    }

    /// Arc pair `a -> b` / `b -> a` with the given capacities.
    fn add(&mut self, a: usize, b: usize, forward: i32, backward: i32) {
        self.adj[a].push(self.head.len());
        self.head.push(b);
        self.cap.push(forward);
        self.adj[b].push(self.head.len());
        self.head.push(a);
        self.cap.push(backward);
    }

    fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let mut flow = 0;
        while flow < limit {
            let mut prev = vec![usize::MAX; self.adj.len()];
            let mut seen = vec![false; self.adj.len()];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                if x == t {
                    break;
                }
                for &a in &self.adj[x] {
                    let y = self.head[a];
                    if self.cap[a] > 0 && !seen[y] {
                        seen[y] = true;
                        prev[y] = a;
                        queue.push_back(y);
                    }
                }
            }
            if !seen[t] {
                break;
            }
            let mut y = t;
            while y != s {
                let a = prev[y];
                self.cap[a] -= 1;
                self.cap[a ^ 1] += 1;
                y = self.head[a ^ 1];
            }
            flow += 1;
        }
        flow
    }
}

const INF: i32 = i32::MAX / 4;

/// Maximum number of edge-disjoint paths from `sources` to `sinks`, stopping
/// early once `limit` paths are found. The two sets must be disjoint.
pub fn edge_disjoint_paths(
    g: &Graph,
    sources: &BTreeSet<VertexId>,
    sinks: &BTreeSet<VertexId>,
    limit: usize,
) -> usize {
    let index: HashMap<VertexId, usize> = g.vertices().enumerate().map(|(i, v)| (v, i)).collect();
    let n = index.len();
    let (s, t) = (n, n + 1);
    let mut net = Network::new(n + 2);
    for (_, [a, b]) in g.edges() {
        if a != b {
            net.add(index[&a], index[&b], 1, 1);
        }
    }
    for v in sources {
        net.add(s, index[v], INF, 0);
    }
    for v in sinks {
        net.add(index[v], t, INF, 0);
    }
    net.max_flow(s, t, limit)
}
