//! Edmonds-Karp maximum flow over arbitrary-precision integer capacities.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug)]
struct Edge {
    to: usize,
    rev: usize,
    cap: BigInt,
}

#[derive(Clone, Debug)]
pub(crate) struct MaxFlow {
    graph: Vec<Vec<Edge>>,
}

/// Handle to a forward edge, used to read back its flow.
#[derive(Clone, Copy, Debug)]
pub(crate) struct EdgeId {
    from: usize,
    idx: usize,
}

impl MaxFlow {
    pub fn new(nodes: usize) -> Self {
        Self {
            graph: vec![Vec::new(); nodes],
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: BigInt) -> EdgeId {
        debug_assert!(!cap.is_negative());
        let (fl, tl) = (self.graph[from].len(), self.graph[to].len());
        let back = if from == to { fl + 1 } else { tl };
        self.graph[from].push(Edge { to, rev: back, cap });
        self.graph[to].push(Edge {
            to: from,
            rev: fl,
            cap: BigInt::zero(),
        });
        EdgeId { from, idx: fl }
    }

    /// Flow currently carried by a forward edge (residual capacity of its
    /// reverse edge).
    pub fn flow_on(&self, id: EdgeId) -> BigInt {
        let e = &self.graph[id.from][id.idx];
        self.graph[e.to][e.rev].cap.clone()
    }

    pub fn run(&mut self, source: usize, sink: usize) -> BigInt {
        let mut total = BigInt::zero();
        loop {
            // BFS for a shortest augmenting path.
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.graph.len()];
            let mut queue = VecDeque::from([source]);
            let mut reached = false;
            while let Some(u) = queue.pop_front() {
                for (i, e) in self.graph[u].iter().enumerate() {
                    if e.cap.is_zero() || e.to == source || prev[e.to].is_some() {
                        continue;
                    }
                    prev[e.to] = Some((u, i));
                    if e.to == sink {
                        reached = true;
                        break;
                    }
                    queue.push_back(e.to);
                }
                if reached {
                    break;
                }
            }
            if !reached {
                return total;
            }
            let mut bottleneck: Option<BigInt> = None;
            let mut v = sink;
            while let Some((u, i)) = prev[v] {
                let cap = &self.graph[u][i].cap;
                if bottleneck.as_ref().is_none_or(|b| cap < b) {
                    bottleneck = Some(cap.clone());
                }
                v = u;
            }
            let push = bottleneck.expect("path has at least one edge");
            let mut v = sink;
            while let Some((u, i)) = prev[v] {
                let rev = self.graph[u][i].rev;
                self.graph[u][i].cap -= &push;
                self.graph[v][rev].cap += &push;
                v = u;
            }
            total += push;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_network() {
        // CLRS figure 26.1, max flow 23.
        let mut g = MaxFlow::new(6);
        for (u, v, c) in [
            (0, 1, 16),
            (0, 2, 13),
            (2, 1, 4),
            (1, 3, 12),
            (3, 2, 9),
            (2, 4, 14),
            (4, 3, 7),
            (3, 5, 20),
            (4, 5, 4),
        ] {
            g.add_edge(u, v, BigInt::from(c));
        }
        assert_eq!(g.run(0, 5), BigInt::from(23));
    }

    #[test]
    fn flow_readback_respects_capacity() {
        let mut g = MaxFlow::new(3);
        let a = g.add_edge(0, 1, BigInt::from(5));
        let b = g.add_edge(1, 2, BigInt::from(3));
        assert_eq!(g.run(0, 2), BigInt::from(3));
        assert_eq!(g.flow_on(a), BigInt::from(3));
        assert_eq!(g.flow_on(b), BigInt::from(3));
    }

    #[test]
    fn disconnected_is_zero() {
        let mut g = MaxFlow::new(3);
        g.add_edge(0, 1, BigInt::from(5));
        assert_eq!(g.run(0, 2), BigInt::zero());
    }
}
