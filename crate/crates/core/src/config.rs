//! SEM specification files and named presets.
//!
//! A graph/SEM is described by a JSON document:
//!
//! ```json
//! {
//!   "nodes": 13,
//!   "edges": [[0, 9], [1, 9]],
//!   "obs_weights": { "rule": { "scale": 0.5 } },
//!   "int_weights": { "values": [[0, 9, 0.57]] },
//!   "noise": { "kind": "uniform", "params": [0.0, 2.0] }
//! }
//! ```
//!
//! Weights are either explicit per-edge `[from, to, weight]` triples or the
//! in-degree rule `scale / sqrt(|pa(to)|)` applied to every edge. Node
//! indices are 0-based and must already be topologically ordered (every edge
//! points from a lower to a higher index); the highest index is the reward
//! node.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::CausalGraph;
use crate::linalg::Matrix;
use crate::sem::{NoiseModel, SemInstance, WeightMatrices};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSpec {
    Rule { scale: f64 },
    Values(Vec<(usize, usize, f64)>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: String,
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SemSpecFile {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub obs_weights: WeightSpec,
    pub int_weights: WeightSpec,
    pub noise: NoiseSpec,
}

impl SemSpecFile {
    pub fn build(&self) -> Result<SemInstance> {
        let graph = CausalGraph::new(self.nodes, &self.edges)?;
        let obs = self.materialize(&graph, &self.obs_weights)?;
        let int = self.materialize(&graph, &self.int_weights)?;
        let weights = WeightMatrices::new(&graph, obs, int)?;
        let noise = match self.noise.kind.as_str() {
            "uniform" => {
                if self.noise.params.len() != 2 {
                    return Err(Error::InvalidSpec(
                        "uniform noise takes params [low, high]".into(),
                    ));
                }
                NoiseModel::uniform(self.nodes, self.noise.params[0], self.noise.params[1])
            }
            other => {
                return Err(Error::InvalidSpec(format!("unknown noise kind '{other}'")));
            }
        };
        if let Some(mean) = &self.noise.mean {
            if mean.len() != self.nodes {
                return Err(Error::DimensionMismatch { expected: self.nodes, got: mean.len() });
            }
            for (declared, derived) in mean.iter().zip(noise.mean()) {
                if (declared - derived).abs() > 1e-9 {
                    return Err(Error::InvalidSpec(format!(
                        "declared noise mean {declared} contradicts sampler mean {derived}"
                    )));
                }
            }
        }
        SemInstance::new(graph, weights, noise)
    }

    fn materialize(&self, graph: &CausalGraph, spec: &WeightSpec) -> Result<Matrix> {
        let n = graph.node_count();
        let mut m = Matrix::zeros(n, n);
        match spec {
            WeightSpec::Rule { scale } => {
                for j in 0..n {
                    let pa = graph.parents(j);
                    if pa.is_empty() {
                        continue;
                    }
                    let denom = (pa.len() as f64).sqrt();
                    for &i in pa {
                        m[(i, j)] = scale / denom;
                    }
                }
            }
            WeightSpec::Values(values) => {
                for &(i, j, w) in values {
                    if i >= n || j >= n {
                        return Err(Error::InvalidSpec(format!(
                            "weight entry ({i}, {j}) exceeds node count {n}"
                        )));
                    }
                    m[(i, j)] = w;
                }
            }
        }
        Ok(m)
    }
}

pub fn load_sem_from_str(text: &str) -> Result<SemInstance> {
    let spec: SemSpecFile =
        serde_json::from_str(text).map_err(|e| Error::json("<inline sem spec>", e))?;
    spec.build()
}

pub fn load_sem(path: &Path) -> Result<SemInstance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let spec: SemSpecFile = serde_json::from_str(&text).map_err(|e| Error::json(path, e))?;
    spec.build()
}

/// The hierarchical benchmark preset: 9 leaf nodes → 3 mid nodes → 1 reward
/// node (d = 3, L = 2), observational weights 0.5/√|pa|, interventional
/// weights 1/√|pa|, noise uniform on [0, 2].
pub fn hierarchical_preset() -> Result<SemInstance> {
    let graph = CausalGraph::hierarchical(9, 3)?;
    let weights = WeightMatrices::from_indegree_rule(&graph, 0.5, 1.0)?;
    let noise = NoiseModel::uniform(graph.node_count(), 0.0, 2.0);
    SemInstance::new(graph, weights, noise)
}

/// Two-node chain preset (0 → 1) with observational weight 0.5 and
/// interventional weight 1.0, noise uniform on [0, 2].
pub fn chain2_preset() -> Result<SemInstance> {
    let graph = CausalGraph::new(2, &[(0, 1)])?;
    let weights = WeightMatrices::from_indegree_rule(&graph, 0.5, 1.0)?;
    let noise = NoiseModel::uniform(2, 0.0, 2.0);
    SemInstance::new(graph, weights, noise)
}

pub fn preset(name: &str) -> Result<SemInstance> {
    match name {
        "hierarchical" => hierarchical_preset(),
        "chain2" => chain2_preset(),
        other => Err(Error::InvalidSpec(format!(
            "unknown preset '{other}' (available: hierarchical, chain2)"
        ))),
    }
}
