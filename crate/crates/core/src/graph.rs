//! Causal DAG topology.
//!
//! Node indices are assigned in topological order at construction: every edge
//! points from a lower to a higher index, which makes strict
//! upper-triangularity of weight matrices structural rather than checked at
//! every use. The highest-indexed node is the reward node and must have no
//! outgoing edges.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Directed acyclic graph over nodes `0..n`, edges pointing low → high.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalGraph {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    parents: Vec<Vec<usize>>,
    max_in_degree: usize,
    longest_path: usize,
    causal_depth: Vec<usize>,
}

impl CausalGraph {
    /// Builds a graph from edges `(i, j)` meaning `i → j`. Requires
    /// `i < j < node_count` (topological indexing) and a descendant-free
    /// highest node.
    pub fn new(node_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidGraph("graph needs at least one node".into()));
        }
        let mut parents = vec![Vec::new(); node_count];
        let mut seen = std::collections::BTreeSet::new();
        for &(i, j) in edges {
            if j >= node_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({i}, {j}) exceeds node count {node_count}"
                )));
            }
            if i >= j {
                return Err(Error::InvalidGraph(format!(
                    "edge ({i}, {j}) violates topological indexing (need i < j)"
                )));
            }
            if !seen.insert((i, j)) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({i}, {j})")));
            }
            if i == node_count - 1 {
                return Err(Error::InvalidGraph(
                    "reward node (highest index) must have no outgoing edges".into(),
                ));
            }
            parents[j].push(i);
        }
        for pa in &mut parents {
            pa.sort_unstable();
        }
        let max_in_degree = parents.iter().map(Vec::len).max().unwrap_or(0);
        // longest directed path ending at each node, in edge count
        let mut causal_depth = vec![0usize; node_count];
        for j in 0..node_count {
            causal_depth[j] = parents[j]
                .iter()
                .map(|&p| causal_depth[p] + 1)
                .max()
                .unwrap_or(0);
        }
        let longest_path = causal_depth.iter().copied().max().unwrap_or(0);
        let mut edges = edges.to_vec();
        edges.sort_unstable();
        Ok(CausalGraph {
            node_count,
            edges,
            parents,
            max_in_degree,
            longest_path,
            causal_depth,
        })
    }

    /// The §-style hierarchical benchmark graph: `leaves` parentless nodes
    /// feeding `mids` middle nodes (each mid takes a disjoint block of
    /// leaves), all mids feeding a single reward node.
    pub fn hierarchical(leaves: usize, mids: usize) -> Result<Self> {
        if mids == 0 || leaves % mids != 0 {
            return Err(Error::InvalidGraph(
                "hierarchical graph needs leaves divisible by mids".into(),
            ));
        }
        let per_mid = leaves / mids;
        let n = leaves + mids + 1;
        let mut edges = Vec::new();
        for m in 0..mids {
            let mid = leaves + m;
            for k in 0..per_mid {
                edges.push((m * per_mid + k, mid));
            }
        }
        for m in 0..mids {
            edges.push((leaves + m, n - 1));
        }
        CausalGraph::new(n, &edges)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn reward_node(&self) -> usize {
        self.node_count - 1
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn parents(&self, node: usize) -> &[usize] {
        &self.parents[node]
    }

    /// d — the maximum in-degree.
    pub fn max_in_degree(&self) -> usize {
        self.max_in_degree
    }

    /// L — the number of edges on the longest directed path.
    pub fn longest_path(&self) -> usize {
        self.longest_path
    }

    /// L_i — length of the longest directed path ending at `node`.
    pub fn causal_depth(&self, node: usize) -> usize {
        self.causal_depth[node]
    }

    /// Nodes with at least one parent, i.e. those carrying weight columns.
    pub fn estimated_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.node_count).filter(|&i| !self.parents[i].is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_parameters() {
        let g = CausalGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.max_in_degree(), 1);
        assert_eq!(g.longest_path(), 2);
        assert_eq!(g.causal_depth(0), 0);
        assert_eq!(g.causal_depth(1), 1);
        assert_eq!(g.causal_depth(2), 2);
        assert_eq!(g.parents(2), &[1]);
    }

    #[test]
    fn hierarchical_9_3_has_d3_l2() {
        let g = CausalGraph::hierarchical(9, 3).unwrap();
        assert_eq!(g.node_count(), 13);
        assert_eq!(g.max_in_degree(), 3);
        assert_eq!(g.longest_path(), 2);
        assert_eq!(g.reward_node(), 12);
        assert_eq!(g.parents(9), &[0, 1, 2]);
        assert_eq!(g.parents(12), &[9, 10, 11]);
        for leaf in 0..9 {
            assert!(g.parents(leaf).is_empty());
            assert_eq!(g.causal_depth(leaf), 0);
        }
        for mid in 9..12 {
            assert_eq!(g.causal_depth(mid), 1);
        }
        assert_eq!(g.causal_depth(12), 2);
        // depth never exceeds L
        for i in 0..13 {
            assert!(g.causal_depth(i) <= g.longest_path());
        }
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(CausalGraph::new(3, &[(1, 1)]).is_err());
        assert!(CausalGraph::new(3, &[(2, 1)]).is_err());
        assert!(CausalGraph::new(3, &[(0, 3)]).is_err());
        assert!(CausalGraph::new(3, &[(2, 2)]).is_err());
        // reward node with outgoing edge is impossible under i < j anyway,
        // but the explicit check catches i == n-1 with j >= n first
        assert!(CausalGraph::new(3, &[(0, 1), (0, 1)]).is_err());
    }
}
