//! Small max-flow solver (Dinic) used for transportation feasibility and
//! integral matching feasibility. Capacities are f64; integral inputs stay
//! integral because augmentation only subtracts exact minima.

/// Residual capacities below this are treated as zero.
const RES_EPS: f64 = 1e-13;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    cap: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Dinic {
    // edges[i] and edges[i^1] are a forward/backward pair.
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    pub fn new(nodes: usize) -> Self {
        Dinic {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
            level: vec![-1; nodes],
            iter: vec![0; nodes],
        }
    }

    /// Adds a directed edge and returns its id (for `flow_on`).
    pub fn add_edge(&mut self, from: usize, to: usize, cap: f64) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap });
        self.edges.push(Edge { to: from, cap: 0.0 });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    /// Flow currently routed through edge `id` (its reverse capacity).
    pub fn flow_on(&self, id: usize) -> f64 {
        self.edges[id ^ 1].cap
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut queue = std::collections::VecDeque::from([s]);
        self.level[s] = 0;
        while let Some(u) = queue.pop_front() {
            for &eid in &self.adj[u] {
                let e = &self.edges[eid];
                if e.cap > RES_EPS && self.level[e.to] < 0 {
                    self.level[e.to] = self.level[u] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, limit: f64) -> f64 {
        if u == t {
            return limit;
        }
        while self.iter[u] < self.adj[u].len() {
            let eid = self.adj[u][self.iter[u]];
            let Edge { to, cap } = self.edges[eid];
            if cap > RES_EPS && self.level[to] == self.level[u] + 1 {
                let pushed = self.dfs(to, t, limit.min(cap));
                if pushed > 0.0 {
                    self.edges[eid].cap -= pushed;
                    self.edges[eid ^ 1].cap += pushed;
                    return pushed;
                }
            }
            self.iter[u] += 1;
        }
        0.0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let mut total = 0.0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let pushed = self.dfs(s, t, f64::INFINITY);
                if pushed <= 0.0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }

    /// Nodes reachable from `s` in the residual graph; valid after
    /// `max_flow`, used to extract min-cut / violated-marginal certificates.
    pub fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &eid in &self.adj[u] {
                let e = &self.edges[eid];
                if e.cap > RES_EPS && !seen[e.to] {
                    seen[e.to] = true;
                    stack.push(e.to);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_bipartite_matching() {
        // 2x2 bipartite with one shared column: max matching 2 via flow.
        let mut d = Dinic::new(6);
        let (s, t) = (0, 5);
        d.add_edge(s, 1, 1.0);
        d.add_edge(s, 2, 1.0);
        d.add_edge(1, 3, 1.0);
        d.add_edge(2, 3, 1.0);
        d.add_edge(2, 4, 1.0);
        d.add_edge(3, t, 1.0);
        d.add_edge(4, t, 1.0);
        assert_eq!(d.max_flow(s, t), 2.0);
    }

    #[test]
    fn fractional_transport_feasibility() {
        // supply (0.3, 0.7), demand (0.5, 0.5), support missing cell (1,0):
        // row 1 must push 0.7 into column 1 of capacity 0.5 -> infeasible.
        let mut d = Dinic::new(6);
        let (s, t) = (0, 5);
        d.add_edge(s, 1, 0.3);
        d.add_edge(s, 2, 0.7);
        d.add_edge(1, 3, f64::INFINITY);
        d.add_edge(1, 4, f64::INFINITY);
        d.add_edge(2, 4, f64::INFINITY);
        d.add_edge(3, t, 0.5);
        d.add_edge(4, t, 0.5);
        let f = d.max_flow(s, t);
        assert!((f - 0.8).abs() < 1e-12);
        let reach = d.residual_reachable(s);
        // Residual reachability exposes the violated row set {row 1}.
        assert!(reach[2] && !reach[1]);
    }

    #[test]
    fn integral_flows_stay_integral() {
        let mut d = Dinic::new(5);
        let (s, t) = (0, 4);
        d.add_edge(s, 1, 3.0);
        d.add_edge(s, 2, 2.0);
        d.add_edge(1, 3, 4.0);
        d.add_edge(2, 3, 1.0);
        d.add_edge(3, t, 5.0);
        let f = d.max_flow(s, t);
        assert_eq!(f, 4.0);
    }
}
