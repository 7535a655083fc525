//! Linear SEM over a causal DAG, soft interventions, sampling, and exact
//! expected rewards.
//!
//! Data is generated by X = MᵀX + ε where M is a strictly upper-triangular
//! weight matrix. A soft intervention on a subset `a` of nodes swaps the
//! incoming-weight column of every node in `a` from the observational matrix
//! B to the interventional matrix B*. The reward is the value of the last
//! node; its expectation under M is ⟨f(M), ν⟩ with
//! f(M) = Σ_{ℓ=0}^{L} (column N of M^ℓ), exact on DAGs since M^{L+1} = 0.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::CausalGraph;
use crate::linalg::{dot, norm, Matrix};

const COLUMN_NORM_TOL: f64 = 1e-9;

/// A subset of nodes to intervene on, as a bitmask (node i ↔ bit i).
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
pub struct InterventionAction(pub u64);

impl InterventionAction {
    pub const EMPTY: InterventionAction = InterventionAction(0);

    pub fn from_nodes(nodes: &[usize]) -> Self {
        let mut mask = 0u64;
        for &n in nodes {
            mask |= 1 << n;
        }
        InterventionAction(mask)
    }

    pub fn all(node_count: usize) -> Self {
        InterventionAction((1u64 << node_count) - 1)
    }

    pub fn contains(&self, node: usize) -> bool {
        self.0 >> node & 1 == 1
    }

    pub fn nodes(&self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }
}

impl std::fmt::Display for InterventionAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for n in self.nodes() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

/// The set of candidate interventions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ActionSpace {
    /// Every subset of the `node_count` nodes (2^N arms).
    PowerSet { node_count: usize },
    /// An explicit arm list.
    Explicit(Vec<InterventionAction>),
}

impl ActionSpace {
    pub fn power_set(node_count: usize) -> Result<Self> {
        if node_count > 20 {
            return Err(Error::InvalidSpec(format!(
                "power-set action space infeasible for {node_count} nodes"
            )));
        }
        Ok(ActionSpace::PowerSet { node_count })
    }

    pub fn len(&self) -> usize {
        match self {
            ActionSpace::PowerSet { node_count } => 1usize << node_count,
            ActionSpace::Explicit(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Arms in ascending bitmask order (explicit lists keep their order).
    pub fn iter(&self) -> Box<dyn Iterator<Item = InterventionAction> + '_> {
        match self {
            ActionSpace::PowerSet { node_count } => {
                Box::new((0..1u64 << node_count).map(InterventionAction))
            }
            ActionSpace::Explicit(v) => Box::new(v.iter().copied()),
        }
    }

    pub fn arm_index(&self, a: InterventionAction) -> Option<usize> {
        match self {
            ActionSpace::PowerSet { node_count } => {
                (a.0 < 1u64 << node_count).then_some(a.0 as usize)
            }
            ActionSpace::Explicit(v) => v.iter().position(|&x| x == a),
        }
    }
}

/// Observational and interventional edge-weight matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrices {
    obs: Matrix,
    int: Matrix,
}

impl WeightMatrices {
    /// Validates strict upper-triangularity, support inside the edge set,
    /// and per-column Euclidean norms ≤ 1 (the m_B = 1 normalization).
    pub fn new(graph: &CausalGraph, obs: Matrix, int: Matrix) -> Result<Self> {
        for (name, m) in [("observational", &obs), ("interventional", &int)] {
            let n = graph.node_count();
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch { expected: n, got: m.rows() });
            }
            if !m.is_strictly_upper_triangular() {
                return Err(Error::InvalidWeights(format!(
                    "{name} matrix is not strictly upper triangular"
                )));
            }
            for j in 0..n {
                let pa = graph.parents(j);
                for i in 0..n {
                    if m[(i, j)] != 0.0 && !pa.contains(&i) {
                        return Err(Error::InvalidWeights(format!(
                            "{name} matrix has weight at non-edge ({i}, {j})"
                        )));
                    }
                }
                let col_norm = norm(&m.column(j));
                if col_norm > 1.0 + COLUMN_NORM_TOL {
                    return Err(Error::InvalidWeights(format!(
                        "{name} column {j} has norm {col_norm} > 1"
                    )));
                }
            }
        }
        Ok(WeightMatrices { obs, int })
    }

    /// Per-edge weights `scale / sqrt(|pa(j)|)` for the target node `j`.
    pub fn from_indegree_rule(graph: &CausalGraph, obs_scale: f64, int_scale: f64) -> Result<Self> {
        let n = graph.node_count();
        let mut obs = Matrix::zeros(n, n);
        let mut int = Matrix::zeros(n, n);
        for j in 0..n {
            let pa = graph.parents(j);
            if pa.is_empty() {
                continue;
            }
            let denom = (pa.len() as f64).sqrt();
            for &i in pa {
                obs[(i, j)] = obs_scale / denom;
                int[(i, j)] = int_scale / denom;
            }
        }
        WeightMatrices::new(graph, obs, int)
    }

    pub fn observational(&self) -> &Matrix {
        &self.obs
    }

    pub fn interventional(&self) -> &Matrix {
        &self.int
    }
}

/// Bounded per-node noise distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum NoiseKind {
    /// Independent uniform draws on `[low, high]` for every node.
    Uniform { low: f64, high: f64 },
}

/// Exogenous noise: a known mean vector plus a bounded sampler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    kind: NoiseKind,
    mean: Vec<f64>,
    norm_bound: f64,
}

impl NoiseModel {
    pub fn uniform(node_count: usize, low: f64, high: f64) -> Self {
        let mean = vec![(low + high) / 2.0; node_count];
        let per_node = low.abs().max(high.abs());
        NoiseModel {
            kind: NoiseKind::Uniform { low, high },
            mean,
            norm_bound: per_node * (node_count as f64).sqrt(),
        }
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// m_ε — deterministic bound on ‖ε‖.
    pub fn norm_bound(&self) -> f64 {
        self.norm_bound
    }

    pub fn kind(&self) -> &NoiseKind {
        &self.kind
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match self.kind {
            NoiseKind::Uniform { low, high } => (0..self.mean.len())
                .map(|_| rng.gen::<f64>() * (high - low) + low)
                .collect(),
        }
    }
}

/// A fully specified SEM environment.
#[derive(Debug, Clone)]
pub struct SemInstance {
    graph: CausalGraph,
    weights: WeightMatrices,
    noise: NoiseModel,
    value_bound: f64,
}

impl SemInstance {
    pub fn new(graph: CausalGraph, weights: WeightMatrices, noise: NoiseModel) -> Result<Self> {
        if noise.mean().len() != graph.node_count() {
            return Err(Error::DimensionMismatch {
                expected: graph.node_count(),
                got: noise.mean().len(),
            });
        }
        // Static bound on ‖X‖: column norms ≤ 1 give ‖M^ℓ‖ ≤ d^{ℓ/2}, so
        // ‖X‖ ≤ m_ε · Σ_{ℓ=0}^{L} d^{ℓ/2}.
        let d = graph.max_in_degree() as f64;
        let value_bound = noise.norm_bound()
            * (0..=graph.longest_path())
                .map(|l| d.powf(l as f64 / 2.0))
                .sum::<f64>();
        Ok(SemInstance { graph, weights, noise, value_bound })
    }

    pub fn graph(&self) -> &CausalGraph {
        &self.graph
    }

    pub fn weights(&self) -> &WeightMatrices {
        &self.weights
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    /// m — bound on ‖X‖ valid for every action and admissible deviation.
    pub fn value_bound(&self) -> f64 {
        self.value_bound
    }
}

/// Column-wise composition of the post-intervention matrix: node i keeps the
/// observational column when i ∉ a and takes the interventional column when
/// i ∈ a.
pub fn compose_intervened_matrix(weights: &WeightMatrices, a: InterventionAction) -> Matrix {
    let mut m = weights.obs.clone();
    if a == InterventionAction::EMPTY {
        return m;
    }
    let n = m.cols();
    for j in 0..n {
        if a.contains(j) {
            m.set_column(j, &weights.int.column(j));
        }
    }
    m
}

/// Draws X = MᵀX + ε by forward substitution in topological order.
/// Rejects matrices that are not strictly upper triangular.
pub fn sample<R: Rng + ?Sized>(
    instance: &SemInstance,
    effective_matrix: &Matrix,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let n = instance.graph.node_count();
    if effective_matrix.rows() != n || effective_matrix.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: effective_matrix.rows() });
    }
    for i in 0..n {
        for j in 0..=i {
            if effective_matrix[(i, j)] != 0.0 {
                return Err(Error::NotUpperTriangular { row: i, col: j });
            }
        }
    }
    let eps = instance.noise.draw(rng);
    let mut x = eps;
    for j in 0..n {
        let mut acc = 0.0;
        for i in 0..j {
            acc += effective_matrix[(i, j)] * x[i];
        }
        x[j] += acc;
    }
    Ok(x)
}

/// f(Θ) = Σ_{ℓ=0}^{L} (column N of Θ^ℓ); `⟨f(Θ), ν⟩` is the expected reward.
pub fn reward_map(theta: &Matrix, longest_path: usize) -> Vec<f64> {
    let n = theta.rows();
    let mut power_col = vec![0.0; n];
    power_col[n - 1] = 1.0;
    let mut f = power_col.clone();
    for _ in 1..=longest_path {
        power_col = theta.mul_vec(&power_col);
        for (acc, v) in f.iter_mut().zip(&power_col) {
            *acc += v;
        }
    }
    f
}

/// Expected reward ⟨f(M), ν⟩ of the reward node under `effective_matrix`.
pub fn expected_reward(instance: &SemInstance, effective_matrix: &Matrix) -> f64 {
    expected_reward_with(
        effective_matrix,
        instance.noise.mean(),
        instance.graph.longest_path(),
    )
}

/// Same as [`expected_reward`] for callers that carry ν and L themselves.
pub fn expected_reward_with(effective_matrix: &Matrix, nu: &[f64], longest_path: usize) -> f64 {
    dot(&reward_map(effective_matrix, longest_path), nu)
}

/// Exhaustive argmax of the nominal expected reward over an action set,
/// ties broken toward the smallest bitmask.
pub fn find_optimal_action(
    instance: &SemInstance,
    actions: &ActionSpace,
) -> Result<(InterventionAction, f64)> {
    if actions.is_empty() {
        return Err(Error::EmptyActionSet);
    }
    let mut best: Option<(InterventionAction, f64)> = None;
    for a in actions.iter() {
        let m = compose_intervened_matrix(&instance.weights, a);
        let value = expected_reward(instance, &m);
        best = match best {
            None => Some((a, value)),
            Some((ba, bv)) => {
                if value > bv || (value == bv && a.0 < ba.0) {
                    Some((a, value))
                } else {
                    Some((ba, bv))
                }
            }
        };
    }
    Ok(best.unwrap())
}
