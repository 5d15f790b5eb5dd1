//! Simple undirected graphs with dense per-vertex adjacency bitmaps,
//! induced-subgraph extraction, and induced-copy verification.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bitset::BitSet;
use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n`.
///
/// Immutable after construction; adjacency is symmetric with no self-loops
/// and the edge count is cached.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<BitSet>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate pairs (in either
    /// orientation) collapse silently; out-of-range endpoints and
    /// self-loops are rejected with the offending pair.
    pub fn build(n: usize, edges: &[(u32, u32)]) -> Result<Graph> {
        let mut adj = vec![BitSet::new(n); n];
        for &(u, v) in edges {
            if u as usize >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v as usize >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u as usize].insert(v as usize);
            adj[v as usize].insert(u as usize);
        }
        Ok(Graph::from_adj(adj))
    }

    /// Internal constructor; assumes `adj` is symmetric with no self-loops.
    pub(crate) fn from_adj(adj: Vec<BitSet>) -> Graph {
        let n = adj.len();
        let deg_sum: usize = adj.iter().map(|r| r.count()).sum();
        debug_assert!(deg_sum % 2 == 0);
        debug_assert!((0..n).all(|v| !adj[v].contains(v)));
        Graph {
            n,
            adj,
            edge_count: deg_sum / 2,
        }
    }

    pub fn empty(n: usize) -> Graph {
        Graph::from_adj(vec![BitSet::new(n); n])
    }

    pub fn complete(n: usize) -> Graph {
        let mut adj = vec![BitSet::full(n); n];
        for (v, row) in adj.iter_mut().enumerate() {
            row.remove(v);
        }
        Graph::from_adj(adj)
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (1..n).map(|v| (v as u32 - 1, v as u32)).collect();
        Graph::build(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let mut edges: Vec<(u32, u32)> = (1..n).map(|v| (v as u32 - 1, v as u32)).collect();
        edges.push((n as u32 - 1, 0));
        Graph::build(n, &edges).unwrap()
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (1..=leaves).map(|v| (0, v as u32)).collect();
        Graph::build(leaves + 1, &edges).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut edges = Vec::with_capacity(a * b);
        for u in 0..a {
            for v in 0..b {
                edges.push((u as u32, (a + v) as u32));
            }
        }
        Graph::build(a + b, &edges).unwrap()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].contains(v as usize)
    }

    #[inline]
    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.adj[v].count()).max().unwrap_or(0)
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &BitSet {
        &self.adj[v as usize]
    }

    pub fn rows(&self) -> &[BitSet] {
        &self.adj
    }

    /// Edges as sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if v > u {
                    out.push((u as u32, v as u32));
                }
            }
        }
        out
    }

    /// Subgraph induced by `s`, relabeled to `0..s.len()`; the returned
    /// mapping lists the original label of each new vertex (sorted order).
    pub fn induced_subgraph(&self, s: &[u32]) -> Result<(Graph, Vec<u32>)> {
        let mut labels: Vec<u32> = s.to_vec();
        labels.sort_unstable();
        labels.dedup();
        for &v in &labels {
            if v as usize >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        let m = labels.len();
        let mut adj = vec![BitSet::new(m); m];
        for i in 0..m {
            for j in (i + 1)..m {
                if self.has_edge(labels[i], labels[j]) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        Ok((Graph::from_adj(adj), labels))
    }

    /// Bipartition `(side0, side1)` if the graph is bipartite (BFS
    /// two-coloring; isolated vertices land on side0).
    pub fn bipartition(&self) -> Option<(Vec<u32>, Vec<u32>)> {
        let mut color = vec![u8::MAX; self.n];
        for start in 0..self.n {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for v in self.adj[u].iter() {
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return None;
                    }
                }
            }
        }
        let side0 = (0..self.n as u32).filter(|&v| color[v as usize] == 0).collect();
        let side1 = (0..self.n as u32).filter(|&v| color[v as usize] == 1).collect();
        Some((side0, side1))
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(u32, u32)>,
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson {
            n: self.n,
            edges: self.edges(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        Graph::build(j.n, &j.edges).map_err(serde::de::Error::custom)
    }
}

/// Is `map` an induced (edge- and non-edge-preserving) injective copy of
/// `pattern` in `host`? With a coloring and color, every image edge must
/// also carry that color.
pub fn is_induced_copy(
    host: &Graph,
    pattern: &Graph,
    map: &[u32],
    coloring: Option<&EdgeColoring>,
    color: Option<u32>,
) -> bool {
    if map.len() != pattern.n() {
        return false;
    }
    if map.iter().any(|&x| x as usize >= host.n()) {
        return false;
    }
    // injectivity
    let mut seen = BitSet::new(host.n());
    for &x in map {
        if seen.contains(x as usize) {
            return false;
        }
        seen.insert(x as usize);
    }
    for u in 0..pattern.n() as u32 {
        for v in (u + 1)..pattern.n() as u32 {
            let image_edge = host.has_edge(map[u as usize], map[v as usize]);
            if pattern.has_edge(u, v) {
                if !image_edge {
                    return false;
                }
                if let (Some(col), Some(c)) = (coloring, color) {
                    if col.color(map[u as usize], map[v as usize]) != Some(c) {
                        return false;
                    }
                }
            } else if image_edge {
                return false;
            }
        }
    }
    true
}

/// An injective vertex mapping from a pattern into a host, with an optional
/// claimed color; independently verifiable via [`is_induced_copy`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Embedding {
    /// `map[v]` is the host vertex carrying pattern vertex `v`.
    pub map: Vec<u32>,
    pub claimed_color: Option<u32>,
}

impl Embedding {
    pub fn verify(&self, host: &Graph, pattern: &Graph, coloring: Option<&EdgeColoring>) -> bool {
        is_induced_copy(host, pattern, &self.map, coloring, self.claimed_color)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_p3() {
        let g = Graph::build(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2));
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = Graph::build(4, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn out_of_range_rejected() {
        match Graph::build(5, &[(0, 5)]) {
            Err(Error::VertexOutOfRange { vertex: 5, n: 5 }) => {}
            other => panic!("expected out-of-range, got {other:?}"),
        }
        assert!(matches!(Graph::build(5, &[(2, 2)]), Err(Error::SelfLoop(2))));
    }

    #[test]
    fn induced_subgraph_cases() {
        let k4 = Graph::complete(4);
        let (g, labels) = k4.induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(g, Graph::complete(3));
        assert_eq!(labels, vec![0, 1, 2]);

        let p4 = Graph::path(4);
        let (g, _) = p4.induced_subgraph(&[0, 2]).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.n(), 2);

        let (g, _) = p4.induced_subgraph(&[]).unwrap();
        assert_eq!(g.n(), 0);

        assert!(p4.induced_subgraph(&[9]).is_err());
    }

    #[test]
    fn induced_copy_examples() {
        let c4 = Graph::cycle(4);
        let p3 = Graph::path(3);
        assert!(is_induced_copy(&c4, &p3, &[0, 1, 2], None, None));

        let k3 = Graph::complete(3);
        // every injection P3 -> K3 misses the non-edge
        assert!(!is_induced_copy(&k3, &p3, &[0, 1, 2], None, None));

        let coloring = EdgeColoring::from_fn(&c4, 2, |u, v| ((u + v) % 2) as u32);
        assert!(!is_induced_copy(&c4, &p3, &[0, 1, 2], Some(&coloring), Some(0)));
    }

    #[test]
    fn injectivity_required() {
        let p3 = Graph::path(3);
        let k2 = Graph::build(2, &[(0, 1)]).unwrap();
        assert!(!is_induced_copy(&p3, &k2, &[1, 1], None, None));
    }

    #[test]
    fn degree_sum_is_twice_edges() {
        let g = Graph::cycle(7);
        let deg_sum: usize = (0..7).map(|v| g.degree(v as u32)).sum();
        assert_eq!(deg_sum, 2 * g.edge_count());
    }

    #[test]
    fn json_roundtrip_is_byte_stable() {
        let g = Graph::build(5, &[(3, 1), (0, 4), (1, 0)]).unwrap();
        let s1 = serde_json::to_string(&g).unwrap();
        let g2: Graph = serde_json::from_str(&s1).unwrap();
        let s2 = serde_json::to_string(&g2).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(g, g2);
        assert!(s1.starts_with("{\"n\":5,\"edges\":[[0,1],[0,4],[1,3]]}"));
    }

    #[test]
    fn bipartition_detects() {
        assert!(Graph::complete(3).bipartition().is_none());
        let (a, b) = Graph::complete_bipartite(2, 3).bipartition().unwrap();
        assert_eq!(a.len() + b.len(), 5);
        assert_eq!(a, vec![0, 1]);
    }
}
