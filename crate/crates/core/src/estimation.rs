//! Per-node weighted least-squares estimation with confidence ellipsoids.
//!
//! Each node with parents carries two estimator sides: observational
//! (updated on rounds where the node is not intervened) and interventional
//! (updated otherwise). A side maintains
//!
//! * V  = Σ w   · x_pa x_paᵀ + I   (weighted Gram),
//! * Ṽ  = Σ w²  · x_pa x_paᵀ + I   (squared-weight Gram),
//! * s  = Σ w   · x_pa (x_i − ν_i),
//! * estimate = V⁻¹ s,
//!
//! with inverses kept current by Sherman–Morrison rank-one updates and a
//! full Cholesky re-solve every [`RESOLVE_INTERVAL`] updates to bound drift.
//! Vectors and matrices are stored at the effective dimension |pa(i)| and
//! zero-padded at the interface.
//!
//! The confidence ellipsoid around an estimate uses the metric V Ṽ⁻¹ V and
//! the radius β(t, δ) = √(2 log(1/δ) + d log(1 + m²t/(dC²))) + 1 + m, which
//! is valid under an aggregate deviation budget C when the update weights
//! are capped by the rule w = min{1/C, 1/(C‖x_pa‖_{Ṽ⁻¹})}.

use crate::linalg::{dot, norm, quadratic_form, sherman_morrison, Matrix};
use crate::sem::InterventionAction;

const RESOLVE_INTERVAL: u32 = 1000;

/// Which estimator side a sample lands on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Observational,
    Interventional,
}

impl Side {
    pub fn for_action(node: usize, a: InterventionAction) -> Side {
        if a.contains(node) {
            Side::Interventional
        } else {
            Side::Observational
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Side::Observational => "obs",
            Side::Interventional => "int",
        }
    }
}

#[derive(Debug, Clone)]
struct GramSide {
    gram: Matrix,
    gram_inv: Matrix,
    sq_gram: Matrix,
    sq_gram_inv: Matrix,
    response: Vec<f64>,
    estimate: Vec<f64>,
    count: u64,
    updates_since_solve: u32,
}

impl GramSide {
    fn new(k: usize) -> Self {
        GramSide {
            gram: Matrix::identity(k),
            gram_inv: Matrix::identity(k),
            sq_gram: Matrix::identity(k),
            sq_gram_inv: Matrix::identity(k),
            response: vec![0.0; k],
            estimate: vec![0.0; k],
            count: 0,
            updates_since_solve: 0,
        }
    }

    fn update(&mut self, x: &[f64], weight: f64, residual: f64) {
        self.gram.add_outer(x, weight);
        self.sq_gram.add_outer(x, weight * weight);
        let ok_v = sherman_morrison(&mut self.gram_inv, x, weight);
        let ok_vt = sherman_morrison(&mut self.sq_gram_inv, x, weight * weight);
        for (r, &xi) in self.response.iter_mut().zip(x) {
            *r += weight * residual * xi;
        }
        self.count += 1;
        self.updates_since_solve += 1;
        if !ok_v || !ok_vt || self.updates_since_solve >= RESOLVE_INTERVAL {
            self.resolve();
        } else {
            self.estimate = self.gram_inv.mul_vec(&self.response);
        }
    }

    fn resolve(&mut self) {
        self.gram_inv = self.gram.inverse_spd().expect("Gram is positive definite");
        self.sq_gram_inv = self.sq_gram.inverse_spd().expect("Gram is positive definite");
        self.estimate = self.gram_inv.mul_vec(&self.response);
        self.updates_since_solve = 0;
    }
}

/// Estimator state for one node: both sides plus the parent support.
#[derive(Debug, Clone)]
pub struct NodeEstimatorState {
    node: usize,
    node_count: usize,
    parents: Vec<usize>,
    obs: GramSide,
    int: GramSide,
}

impl NodeEstimatorState {
    pub fn new(node: usize, node_count: usize, parents: &[usize]) -> Self {
        assert!(!parents.is_empty(), "estimators exist only for nodes with parents");
        NodeEstimatorState {
            node,
            node_count,
            parents: parents.to_vec(),
            obs: GramSide::new(parents.len()),
            int: GramSide::new(parents.len()),
        }
    }

    pub fn node(&self) -> usize {
        self.node
    }

    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    fn side(&self, which: Side) -> &GramSide {
        match which {
            Side::Observational => &self.obs,
            Side::Interventional => &self.int,
        }
    }

    /// Restriction of a full-length vector to the parent coordinates.
    pub fn gather(&self, x_full: &[f64]) -> Vec<f64> {
        self.parents.iter().map(|&p| x_full[p]).collect()
    }

    fn pad(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.node_count];
        for (&p, &val) in self.parents.iter().zip(v) {
            out[p] = val;
        }
        out
    }

    pub fn count(&self, which: Side) -> u64 {
        self.side(which).count
    }

    /// Zero-padded estimate column for a side.
    pub fn estimate_padded(&self, which: Side) -> Vec<f64> {
        self.pad(&self.side(which).estimate)
    }

    /// Effective (|pa|×|pa|) weighted Gram of a side.
    pub fn gram(&self, which: Side) -> &Matrix {
        &self.side(which).gram
    }

    pub fn sq_gram(&self, which: Side) -> &Matrix {
        &self.side(which).sq_gram
    }

    /// Weighted exploration bonus ‖x_pa‖ in the inverse squared-weight Gram
    /// of the action-relevant side.
    pub fn exploration_bonus(&self, a: InterventionAction, x_pa: &[f64]) -> f64 {
        let x = self.gather(x_pa);
        let side = self.side(Side::for_action(self.node, a));
        quadratic_form(&side.sq_gram_inv, &x).max(0.0).sqrt()
    }

    /// w = min{1/C, 1/(C·bonus)}; a zero parent vector yields 1/C.
    pub fn compute_weight(&self, a: InterventionAction, x_pa: &[f64], c: f64) -> f64 {
        debug_assert!(c > 0.0);
        let bonus = self.exploration_bonus(a, x_pa);
        if bonus <= 0.0 {
            1.0 / c
        } else {
            (1.0 / c).min(1.0 / (c * bonus))
        }
    }

    /// Incorporates one sample on the side selected by the action: Gram
    /// += w·x xᵀ, squared Gram += w²·x xᵀ, response += w·x·(x_i − ν_i).
    pub fn update(&mut self, a: InterventionAction, x: &[f64], weight: f64, nu_i: f64) {
        let x_pa = self.gather(x);
        let residual = x[self.node] - nu_i;
        let side = match Side::for_action(self.node, a) {
            Side::Observational => &mut self.obs,
            Side::Interventional => &mut self.int,
        };
        side.update(&x_pa, weight, residual);
    }

    /// Overwrites a side's estimate column (tests only; `values` full-length).
    #[cfg(test)]
    pub(crate) fn force_estimate(&mut self, which: Side, values: &[f64]) {
        let gathered = self.gather(values);
        match which {
            Side::Observational => self.obs.estimate = gathered,
            Side::Interventional => self.int.estimate = gathered,
        }
    }

    /// Action-relevant confidence ellipsoid around the current estimate.
    pub fn ellipsoid_for(&self, a: InterventionAction, radius: f64) -> Ellipsoid {
        let side = self.side(Side::for_action(self.node, a));
        Ellipsoid {
            node_count: self.node_count,
            parents: self.parents.clone(),
            center: side.estimate.clone(),
            gram: side.gram.clone(),
            gram_inv: side.gram_inv.clone(),
            sq_gram: side.sq_gram.clone(),
            radius,
        }
    }

    /// ‖estimate − reference‖ in the V Ṽ⁻¹ V metric of a side; `reference`
    /// is full-length.
    pub fn estimate_error_norm(&self, which: Side, reference: &[f64]) -> f64 {
        let side = self.side(which);
        let diff: Vec<f64> = self
            .parents
            .iter()
            .zip(&side.estimate)
            .map(|(&p, &e)| e - reference[p])
            .collect();
        // ‖v‖²_{VṼ⁻¹V} = (Vv)ᵀ Ṽ⁻¹ (Vv)
        let gv = side.gram.mul_vec(&diff);
        quadratic_form(&side.sq_gram_inv, &gv).max(0.0).sqrt()
    }
}

/// Confidence-radius parameters. The stored budget is max(C, 1): the weight
/// rule with C < 1 would emit weights above 1 and the C = 1 setting is the
/// time-invariant specialization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceConfig {
    pub delta: f64,
    pub budget_c: f64,
    pub d: usize,
    pub m: f64,
    pub m_eps: f64,
}

impl ConfidenceConfig {
    pub fn new(delta: f64, budget_c: f64, d: usize, m: f64, m_eps: f64) -> Self {
        assert!(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
        assert!(d >= 1, "confidence radius needs max in-degree ≥ 1");
        ConfidenceConfig { delta, budget_c: budget_c.max(1.0), d, m, m_eps }
    }

    /// β(t, δ) = √(2 log(1/δ) + d log(1 + m²t/(dC²))) + 1 + m.
    pub fn confidence_radius(&self, t: u64) -> f64 {
        let d = self.d as f64;
        let c2 = self.budget_c * self.budget_c;
        let log_term = 2.0 * (1.0 / self.delta).ln()
            + d * (1.0 + self.m * self.m * t as f64 / (d * c2)).ln();
        log_term.sqrt() + 1.0 + self.m
    }
}

/// Confidence set {θ ∈ B₁ : ‖θ − center‖_{V Ṽ⁻¹ V} ≤ radius}, stored at the
/// effective parent dimension.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    node_count: usize,
    parents: Vec<usize>,
    center: Vec<f64>,
    gram: Matrix,
    gram_inv: Matrix,
    sq_gram: Matrix,
    radius: f64,
}

impl Ellipsoid {
    /// Fresh unit ellipsoid (identity metric, zero center) — the state before
    /// any update.
    pub fn fresh(node_count: usize, parents: &[usize], radius: f64) -> Self {
        let k = parents.len();
        Ellipsoid {
            node_count,
            parents: parents.to_vec(),
            center: vec![0.0; k],
            gram: Matrix::identity(k),
            gram_inv: Matrix::identity(k),
            sq_gram: Matrix::identity(k),
            radius,
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn center_padded(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.node_count];
        for (&p, &v) in self.parents.iter().zip(&self.center) {
            out[p] = v;
        }
        out
    }

    /// Full N×N metric V Ṽ⁻¹ V: the effective block on the parent support,
    /// identity elsewhere.
    pub fn metric_padded(&self) -> Matrix {
        let k = self.parents.len();
        let vt_inv = self.sq_gram.inverse_spd().expect("Ṽ is positive definite");
        let block = self.gram.mul(&vt_inv).mul(&self.gram);
        let mut out = Matrix::identity(self.node_count);
        for i in 0..k {
            for j in 0..k {
                out[(self.parents[i], self.parents[j])] = block[(i, j)];
            }
        }
        out
    }

    /// Membership test for a full-length θ (coordinates off the parent
    /// support are measured under the identity metric against center 0).
    pub fn contains(&self, theta_full: &[f64], tol: f64) -> bool {
        let mut off_support_sq = 0.0;
        for (i, &v) in theta_full.iter().enumerate() {
            if !self.parents.contains(&i) {
                off_support_sq += v * v;
            }
        }
        let diff: Vec<f64> = self
            .parents
            .iter()
            .zip(&self.center)
            .map(|(&p, &c)| theta_full[p] - c)
            .collect();
        let gv = self.gram.mul_vec(&diff);
        let vt_inv_gv = self
            .sq_gram
            .solve_spd(&gv)
            .expect("Ṽ is positive definite");
        let norm_sq = dot(&gv, &vt_inv_gv) + off_support_sq;
        norm_sq.max(0.0).sqrt() <= self.radius + tol && norm(theta_full) <= 1.0 + tol
    }
}

/// Closed-form support maximization max ⟨θ, x⟩ over the ellipsoid, with the
/// attaining point radially scaled onto the unit ball when it lands outside
/// (approximate ellipsoid ∩ ball intersection). Returns the value and a
/// zero-padded attaining point. A zero direction returns (0, center).
pub fn max_linear_over_ellipsoid(ell: &Ellipsoid, direction: &[f64]) -> (f64, Vec<f64>) {
    let x: Vec<f64> = ell.parents.iter().map(|&p| direction[p]).collect();
    if x.iter().all(|&v| v == 0.0) {
        return (0.0, ell.center_padded());
    }
    // ‖x‖²_{M⁻¹} with M = V Ṽ⁻¹ V: q = V⁻¹x, then qᵀ Ṽ q
    let q = ell.gram_inv.mul_vec(&x);
    let m_inv_norm = quadratic_form(&ell.sq_gram, &q).max(0.0).sqrt();
    if m_inv_norm <= 0.0 {
        let theta = ell.center_padded();
        return (dot(&theta, direction), theta);
    }
    let m_inv_x = ell.gram_inv.mul_vec(&ell.sq_gram.mul_vec(&q));
    let mut theta: Vec<f64> = ell
        .center
        .iter()
        .zip(&m_inv_x)
        .map(|(&c, &mv)| c + ell.radius * mv / m_inv_norm)
        .collect();
    let theta_norm = norm(&theta);
    if theta_norm > 1.0 {
        for v in &mut theta {
            *v /= theta_norm;
        }
    }
    let value = dot(&theta, &x);
    let mut padded = vec![0.0; ell.node_count];
    for (&p, &v) in ell.parents.iter().zip(&theta) {
        padded[p] = v;
    }
    (value, padded)
}

/// One row of an estimator dump.
#[derive(Debug, Clone)]
pub struct SnapshotRecord {
    pub run_id: u64,
    pub t: u64,
    pub node: usize,
    pub side: &'static str,
    pub estimate: Vec<f64>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub count: u64,
}

pub fn snapshot_records(
    states: &[NodeEstimatorState],
    run_id: u64,
    t: u64,
) -> Vec<SnapshotRecord> {
    let mut out = Vec::new();
    for state in states {
        for which in [Side::Observational, Side::Interventional] {
            let eig = state.gram(which).sym_eigenvalues();
            out.push(SnapshotRecord {
                run_id,
                t,
                node: state.node(),
                side: which.label(),
                estimate: state.estimate_padded(which),
                lambda_min: *eig.first().unwrap(),
                lambda_max: *eig.last().unwrap(),
                count: state.count(which),
            });
        }
    }
    out
}
