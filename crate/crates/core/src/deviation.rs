//! Time-varying model deviations under an aggregate budget.
//!
//! A schedule assigns each round a set of per-node column deviations Δ; the
//! environment samples from D_a = B_a + Δ. The audited budget is the
//! per-node worst case accumulated over time:
//! C = max_i Σ_t max_a ‖[Δ_a(t)]_i‖.
//!
//! The shipped adversary is front-loaded: it spends the whole budget in the
//! earliest rounds, deviating every parent-ful column along the negated
//! interventional direction with the largest magnitude that keeps all
//! deviated column norms ≤ 1, which flips the identity of the optimal
//! action in deviated rounds.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, Matrix};
use crate::sem::{
    compose_intervened_matrix, expected_reward, find_optimal_action, ActionSpace,
    InterventionAction, SemInstance,
};

const BUDGET_TOL: f64 = 1e-9;

/// Which actions a deviation entry applies to. The front-loaded adversary
/// only emits `Any`; action-dependent schedules gate entries on whether the
/// node is intervened under the played action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionFilter {
    Any,
    Intervened,
    NotIntervened,
}

impl ActionFilter {
    fn applies(&self, node: usize, a: InterventionAction) -> bool {
        match self {
            ActionFilter::Any => true,
            ActionFilter::Intervened => a.contains(node),
            ActionFilter::NotIntervened => !a.contains(node),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationEntry {
    pub node: usize,
    /// Dense length-N column deviation, supported on pa(node).
    pub delta: Vec<f64>,
    pub applies: ActionFilter,
}

/// A full deviation schedule over a horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationSchedule {
    horizon: usize,
    node_count: usize,
    budget_c: f64,
    rounds: BTreeMap<usize, Vec<DeviationEntry>>,
    flip_achieved: bool,
}

impl DeviationSchedule {
    /// The all-zero schedule (nominal environment).
    pub fn zero(horizon: usize, node_count: usize) -> Self {
        DeviationSchedule {
            horizon,
            node_count,
            budget_c: 0.0,
            rounds: BTreeMap::new(),
            flip_achieved: false,
        }
    }

    fn from_rounds(
        horizon: usize,
        node_count: usize,
        rounds: BTreeMap<usize, Vec<DeviationEntry>>,
        flip_achieved: bool,
    ) -> Self {
        let mut schedule = DeviationSchedule {
            horizon,
            node_count,
            budget_c: 0.0,
            rounds,
            flip_achieved,
        };
        schedule.budget_c = audit_budget(&schedule);
        schedule
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn budget_c(&self) -> f64 {
        self.budget_c
    }

    pub fn flip_achieved(&self) -> bool {
        self.flip_achieved
    }

    pub fn deviated_round_count(&self) -> usize {
        self.rounds.len()
    }

    pub fn entries_at(&self, t: usize) -> &[DeviationEntry] {
        self.rounds.get(&t).map_or(&[], Vec::as_slice)
    }

    pub fn is_deviated(&self, t: usize) -> bool {
        self.rounds.contains_key(&t)
    }
}

/// Recomputes Eq.-style aggregate budget from the entries:
/// max over nodes of Σ_t (worst matching deviation norm over actions).
pub fn audit_budget(schedule: &DeviationSchedule) -> f64 {
    let mut per_node = vec![0.0f64; schedule.node_count];
    for entries in schedule.rounds.values() {
        // per round and node, the inner max over actions: some action
        // matches each filter, so take the max entry norm per node
        let mut round_max: BTreeMap<usize, f64> = BTreeMap::new();
        for e in entries {
            let n = norm(&e.delta);
            let slot = round_max.entry(e.node).or_insert(0.0);
            if n > *slot {
                *slot = n;
            }
        }
        for (node, n) in round_max {
            per_node[node] += n;
        }
    }
    per_node.into_iter().fold(0.0, f64::max)
}

/// D_a(t) = B_a + Δ_a(t). Errors when `t` is outside `1..=horizon`.
pub fn effective_matrix(
    schedule: &DeviationSchedule,
    instance: &SemInstance,
    t: usize,
    a: InterventionAction,
) -> Result<Matrix> {
    if t == 0 || t > schedule.horizon {
        return Err(Error::RoundOutOfRange { t, horizon: schedule.horizon });
    }
    let mut m = compose_intervened_matrix(instance.weights(), a);
    for e in schedule.entries_at(t) {
        if e.applies.applies(e.node, a) {
            for (i, &dv) in e.delta.iter().enumerate() {
                if dv != 0.0 {
                    m[(i, e.node)] += dv;
                }
            }
        }
    }
    Ok(m)
}

/// Largest s ≥ 0 with ‖col − s·u‖ ≤ 1 for a unit direction u.
fn max_negative_step(col: &[f64], u: &[f64]) -> f64 {
    let proj = dot(col, u);
    let disc = proj * proj - dot(col, col) + 1.0;
    if disc <= 0.0 {
        return 0.0;
    }
    (proj + disc.sqrt()).max(0.0)
}

fn deviated_optimum(
    instance: &SemInstance,
    actions: &ActionSpace,
    deltas: &[(usize, Vec<f64>)],
) -> (InterventionAction, f64) {
    let mut best: Option<(InterventionAction, f64)> = None;
    for a in actions.iter() {
        let mut m = compose_intervened_matrix(instance.weights(), a);
        for (node, delta) in deltas {
            for (i, &dv) in delta.iter().enumerate() {
                if dv != 0.0 {
                    m[(i, *node)] += dv;
                }
            }
        }
        let v = expected_reward(instance, &m);
        best = match best {
            None => Some((a, v)),
            Some((ba, bv)) => {
                if v > bv || (v == bv && a.0 < ba.0) {
                    Some((a, v))
                } else {
                    Some((ba, bv))
                }
            }
        };
    }
    best.expect("nonempty action space")
}

/// Builds the front-loaded optimal-action-flipping adversary for a budget C.
///
/// All deviation mass sits in the earliest rounds. Per round, every
/// parent-ful node's column is shifted by −s_i·û_i (û_i the unit
/// interventional direction), with s_i the largest value keeping both
/// deviated branches inside the unit ball; a trailing partial round makes
/// the audited budget equal C exactly. When even the maximal magnitude does
/// not flip the optimum, a descending magnitude grid is tried; if no
/// magnitude flips, the schedule is returned with `flip_achieved() == false`.
pub fn make_front_loaded_adversary(
    instance: &SemInstance,
    budget_c: f64,
    horizon: usize,
) -> Result<DeviationSchedule> {
    if horizon == 0 {
        return Err(Error::InvalidSpec("horizon must be at least 1".into()));
    }
    if budget_c < 0.0 {
        return Err(Error::InvalidSpec("deviation budget must be nonnegative".into()));
    }
    let n = instance.graph().node_count();
    if budget_c == 0.0 {
        return Ok(DeviationSchedule::zero(horizon, n));
    }

    let actions = ActionSpace::power_set(n)?;
    let (nominal_opt, _) = find_optimal_action(instance, &actions)?;

    // unit direction per parent-ful node: along the interventional column,
    // falling back to the observational column, then to the first parent axis
    let mut directions: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut max_steps: Vec<f64> = Vec::new();
    for i in instance.graph().estimated_nodes() {
        let int_col = instance.weights().interventional().column(i);
        let obs_col = instance.weights().observational().column(i);
        let mut u = if norm(&int_col) > 0.0 {
            int_col.clone()
        } else if norm(&obs_col) > 0.0 {
            obs_col.clone()
        } else {
            let mut e = vec![0.0; n];
            e[instance.graph().parents(i)[0]] = 1.0;
            e
        };
        let u_norm = norm(&u);
        for v in &mut u {
            *v /= u_norm;
        }
        let s = max_negative_step(&obs_col, &u).min(max_negative_step(&int_col, &u));
        if s > 0.0 {
            directions.push((i, u));
            max_steps.push(s);
        }
    }
    if directions.is_empty() {
        let mut schedule = DeviationSchedule::zero(horizon, n);
        schedule.flip_achieved = false;
        return Ok(schedule);
    }

    // largest magnitude that still flips; fall back down a deterministic grid
    let factors: Vec<f64> = (0..20).map(|k| 1.0 - k as f64 * 0.05).collect();
    let mut chosen_factor = 1.0;
    let mut flip_achieved = false;
    for &factor in &factors {
        let deltas: Vec<(usize, Vec<f64>)> = directions
            .iter()
            .zip(&max_steps)
            .map(|((node, u), s)| {
                (*node, u.iter().map(|v| -v * factor * s).collect::<Vec<f64>>())
            })
            .collect();
        let (dev_opt, dev_val) = deviated_optimum(instance, &actions, &deltas);
        if dev_opt != nominal_opt {
            let mut nominal_under_dev = compose_intervened_matrix(instance.weights(), nominal_opt);
            for (node, delta) in &deltas {
                for (i, &dv) in delta.iter().enumerate() {
                    nominal_under_dev[(i, *node)] += dv;
                }
            }
            if dev_val > expected_reward(instance, &nominal_under_dev) {
                chosen_factor = factor;
                flip_achieved = true;
                break;
            }
        }
    }

    let per_node_step: Vec<f64> = max_steps.iter().map(|s| s * chosen_factor).collect();
    let delta_max = per_node_step.iter().copied().fold(0.0, f64::max);
    if delta_max <= 0.0 {
        let mut schedule = DeviationSchedule::zero(horizon, n);
        schedule.flip_achieved = false;
        return Ok(schedule);
    }
    if budget_c > delta_max * horizon as f64 + BUDGET_TOL {
        return Err(Error::InvalidSpec(format!(
            "budget C = {budget_c} cannot be spent within horizon {horizon} \
             at per-round magnitude {delta_max} under the unit-norm cap"
        )));
    }

    let full_rounds = (budget_c / delta_max).floor() as usize;
    let remainder = budget_c - full_rounds as f64 * delta_max;
    let mut rounds = BTreeMap::new();
    let full_entries: Vec<DeviationEntry> = directions
        .iter()
        .zip(&per_node_step)
        .map(|((node, u), s)| DeviationEntry {
            node: *node,
            delta: u.iter().map(|v| -v * s).collect(),
            applies: ActionFilter::Any,
        })
        .collect();
    for t in 1..=full_rounds.min(horizon) {
        rounds.insert(t, full_entries.clone());
    }
    if remainder > BUDGET_TOL && full_rounds < horizon {
        let scale = remainder / delta_max;
        let partial: Vec<DeviationEntry> = full_entries
            .iter()
            .map(|e| DeviationEntry {
                node: e.node,
                delta: e.delta.iter().map(|v| v * scale).collect(),
                applies: ActionFilter::Any,
            })
            .collect();
        rounds.insert(full_rounds + 1, partial);
    }

    Ok(DeviationSchedule::from_rounds(horizon, n, rounds, flip_achieved))
}

// ── serialization ─────────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ScheduleRecord {
    t: usize,
    node: usize,
    delta: Vec<f64>,
    applies: ActionFilter,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ScheduleFile {
    horizon: usize,
    node_count: usize,
    budget_c: f64,
    flip_achieved: bool,
    entries: Vec<ScheduleRecord>,
}

impl DeviationSchedule {
    pub fn to_json(&self) -> String {
        let entries: Vec<ScheduleRecord> = self
            .rounds
            .iter()
            .flat_map(|(&t, es)| {
                es.iter().map(move |e| ScheduleRecord {
                    t,
                    node: e.node,
                    delta: e.delta.clone(),
                    applies: e.applies,
                })
            })
            .collect();
        let file = ScheduleFile {
            horizon: self.horizon,
            node_count: self.node_count,
            budget_c: self.budget_c,
            flip_achieved: self.flip_achieved,
            entries,
        };
        serde_json::to_string_pretty(&file).expect("schedule serializes")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    /// Loads and validates a schedule against an instance: deviations must
    /// sit on existing parent entries and the declared budget must match the
    /// audited one.
    pub fn load(path: &Path, instance: &SemInstance) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text, instance)
    }

    pub fn from_json(text: &str, instance: &SemInstance) -> Result<Self> {
        let file: ScheduleFile =
            serde_json::from_str(text).map_err(|e| Error::json("<schedule>", e))?;
        let n = instance.graph().node_count();
        if file.node_count != n {
            return Err(Error::DimensionMismatch { expected: n, got: file.node_count });
        }
        let mut rounds: BTreeMap<usize, Vec<DeviationEntry>> = BTreeMap::new();
        for rec in file.entries {
            if rec.t == 0 || rec.t > file.horizon {
                return Err(Error::RoundOutOfRange { t: rec.t, horizon: file.horizon });
            }
            if rec.node >= n || rec.delta.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: rec.delta.len() });
            }
            let pa = instance.graph().parents(rec.node);
            for (i, &v) in rec.delta.iter().enumerate() {
                if v != 0.0 && !pa.contains(&i) {
                    return Err(Error::InvalidSpec(format!(
                        "deviation for node {} touches non-parent entry {}",
                        rec.node, i
                    )));
                }
            }
            rounds.entry(rec.t).or_default().push(DeviationEntry {
                node: rec.node,
                delta: rec.delta,
                applies: rec.applies,
            });
        }
        let schedule =
            DeviationSchedule::from_rounds(file.horizon, n, rounds, file.flip_achieved);
        if (schedule.budget_c - file.budget_c).abs() > BUDGET_TOL {
            return Err(Error::InvalidSpec(format!(
                "declared budget {} disagrees with audited budget {}",
                file.budget_c, schedule.budget_c
            )));
        }
        Ok(schedule)
    }
}
