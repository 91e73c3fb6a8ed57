//! Primal network simplex on the bipartite transportation graph.
//!
//! Nodes `0..m` are sources, `m..m+n` sinks, `m+n` an artificial root.
//! Real arc `e = i*n + j` goes from source `i` to sink `j`. Each source has
//! an artificial arc to the root and each sink one from the root; the
//! initial tree uses those arcs only and is strongly feasible. Flows are
//! integers so degeneracy is detected exactly.

pub(crate) struct Solution {
    /// `(source, sink, flow)` for every real arc with positive flow,
    /// sorted by source then sink.
    pub flows: Vec<(usize, usize, i64)>,
}

pub(crate) fn solve(supply: &[i64], demand: &[i64], cost: Vec<f64>) -> Solution {
    let mut s = Simplex::new(supply, demand, cost);
    s.run();
    let n = s.n;
    let flows = (0..s.m * n)
        .filter(|&e| s.flow[e] > 0)
        .map(|e| (e / n, e % n, s.flow[e]))
        .collect();
    Solution { flows }
}

struct Simplex {
    m: usize,
    n: usize,
    root: usize,
    cost: Vec<f64>,
    art_cost: f64,
    tol: f64,
    flow: Vec<i64>,
    adj: Vec<Vec<usize>>,
    parent: Vec<usize>,
    pred: Vec<usize>,
    depth: Vec<usize>,
    pot: Vec<f64>,
    stack: Vec<usize>,
    next_arc: usize,
    block: usize,
}

const NONE: usize = usize::MAX;

impl Simplex {
    fn new(supply: &[i64], demand: &[i64], cost: Vec<f64>) -> Self {
        let (m, n) = (supply.len(), demand.len());
        debug_assert_eq!(cost.len(), m * n);
        let nodes = m + n + 1;
        let root = m + n;
        let max_cost = cost.iter().copied().fold(0.0, f64::max);
        let art_cost = (max_cost + 1.0) * nodes as f64;
        let arcs = m * n + m + n;
        let mut flow = vec![0; arcs];
        let mut adj = vec![Vec::new(); nodes];
        for (i, &a) in supply.iter().enumerate() {
            let e = m * n + i;
            flow[e] = a;
            adj[i].push(e);
            adj[root].push(e);
        }
        for (j, &b) in demand.iter().enumerate() {
            let e = m * n + m + j;
            flow[e] = b;
            adj[m + j].push(e);
            adj[root].push(e);
        }
        let mut s = Simplex {
            m,
            n,
            root,
            cost,
            art_cost,
            // reduced costs carry roundoff proportional to the potentials,
            // which start at the artificial cost
            tol: 1e-14 * art_cost + 1e-13 * max_cost,
            flow,
            adj,
            parent: vec![NONE; nodes],
            pred: vec![NONE; nodes],
            depth: vec![0; nodes],
            pot: vec![0.0; nodes],
            stack: Vec::with_capacity(nodes),
            next_arc: 0,
            block: ((m * n) as f64).sqrt().ceil().max(10.0) as usize,
        };
        s.rebuild();
        s
    }

    #[inline]
    fn ends(&self, e: usize) -> (usize, usize) {
        let real = self.m * self.n;
        if e < real {
            (e / self.n, self.m + e % self.n)
        } else if e < real + self.m {
            (e - real, self.root)
        } else {
            (self.root, self.m + (e - real - self.m))
        }
    }

    #[inline]
    fn arc_cost(&self, e: usize) -> f64 {
        if e < self.m * self.n {
            self.cost[e]
        } else {
            self.art_cost
        }
    }

    #[inline]
    fn reduced(&self, e: usize) -> f64 {
        let (u, v) = self.ends(e);
        self.arc_cost(e) + self.pot[u] - self.pot[v]
    }

    /// Recomputes parent, depth and potentials from the tree arc lists.
    fn rebuild(&mut self) {
        let root = self.root;
        self.parent[root] = NONE;
        self.pred[root] = NONE;
        self.depth[root] = 0;
        self.pot[root] = 0.0;
        self.stack.clear();
        self.stack.push(root);
        while let Some(u) = self.stack.pop() {
            for k in 0..self.adj[u].len() {
                let e = self.adj[u][k];
                if e == self.pred[u] {
                    continue;
                }
                let (a, b) = self.ends(e);
                let (w, p) = if a == u {
                    (b, self.pot[u] + self.arc_cost(e))
                } else {
                    (a, self.pot[u] - self.arc_cost(e))
                };
                self.parent[w] = u;
                self.pred[w] = e;
                self.depth[w] = self.depth[u] + 1;
                self.pot[w] = p;
                self.stack.push(w);
            }
        }
    }

    /// Block search over real arcs; returns the most negative arc of the
    /// first block containing any.
    fn entering(&mut self) -> Option<usize> {
        let total = self.m * self.n;
        let mut best = NONE;
        let mut best_rc = -self.tol;
        let mut left = self.block;
        for k in 0..total {
            let e = (self.next_arc + k) % total;
            let rc = self.reduced(e);
            if rc < best_rc {
                best_rc = rc;
                best = e;
            }
            left -= 1;
            if left == 0 {
                if best != NONE {
                    self.next_arc = (e + 1) % total;
                    return Some(best);
                }
                left = self.block;
            }
        }
        (best != NONE).then(|| {
            self.next_arc = (best + 1) % total;
            best
        })
    }

    fn pivot(&mut self, e_in: usize) {
        let (u, v) = self.ends(e_in);
        let (mut a, mut b) = (u, v);
        while a != b {
            if self.depth[a] >= self.depth[b] {
                a = self.parent[a];
            } else {
                b = self.parent[b];
            }
        }
        let join = a;

        // Leaving arc: last blocking arc met when walking the cycle from the
        // join in the direction of the entering arc.
        let mut delta = i64::MAX;
        let mut leave = NONE;
        let mut x = u;
        while x != join {
            let e = self.pred[x];
            if self.ends(e).0 == x && self.flow[e] < delta {
                delta = self.flow[e];
                leave = e;
            }
            x = self.parent[x];
        }
        x = v;
        while x != join {
            let e = self.pred[x];
            if self.ends(e).1 == x && self.flow[e] <= delta {
                delta = self.flow[e];
                leave = e;
            }
            x = self.parent[x];
        }
        debug_assert!(leave != NONE, "transport problems have no unbounded cycles");

        if delta > 0 {
            x = u;
            while x != join {
                let e = self.pred[x];
                if self.ends(e).0 == x {
                    self.flow[e] -= delta;
                } else {
                    self.flow[e] += delta;
                }
                x = self.parent[x];
            }
            x = v;
            while x != join {
                let e = self.pred[x];
                if self.ends(e).1 == x {
                    self.flow[e] -= delta;
                } else {
                    self.flow[e] += delta;
                }
                x = self.parent[x];
            }
            self.flow[e_in] += delta;
        }

        let (p, q) = self.ends(leave);
        self.adj[p].retain(|&e| e != leave);
        self.adj[q].retain(|&e| e != leave);
        self.adj[u].push(e_in);
        self.adj[v].push(e_in);
        self.rebuild();
    }

    fn run(&mut self) {
        while let Some(e) = self.entering() {
            self.pivot(e);
        }
    }
}
