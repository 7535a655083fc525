//! Closed-form regret-bound shape curves.
//!
//! The headline bounds are asymptotic with unspecified constants, so these
//! evaluators are shape-only overlays: logarithmic factors are folded into a
//! caller-supplied multiplicative scale.

/// Parameters of the bound expressions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub d: usize,
    pub l: usize,
    pub horizon: usize,
    pub budget_c: f64,
    pub constant_scale: f64,
}

impl BoundParams {
    pub fn new(d: usize, l: usize, horizon: usize, budget_c: f64, constant_scale: f64) -> Self {
        assert!(d >= 1 && l >= 1 && horizon >= 1 && budget_c >= 0.0);
        BoundParams { d, l, horizon, budget_c, constant_scale }
    }
}

/// Upper-bound shape: scale · d^{L−1/2} (√t + C) per grid point.
pub fn upper_bound_curve(params: &BoundParams, t_grid: &[usize]) -> Vec<f64> {
    let lead = (params.d as f64).powf(params.l as f64 - 0.5);
    t_grid
        .iter()
        .map(|&t| params.constant_scale * lead * ((t as f64).sqrt() + params.budget_c))
        .collect()
}

/// Lower-bound shape: scale · d^{L/2−2} · max(√t, d²C) per grid point.
pub fn lower_bound_curve(params: &BoundParams, t_grid: &[usize]) -> Vec<f64> {
    let d = params.d as f64;
    let lead = d.powf(params.l as f64 / 2.0 - 2.0);
    let corruption_branch = d * d * params.budget_c;
    t_grid
        .iter()
        .map(|&t| params.constant_scale * lead * (t as f64).sqrt().max(corruption_branch))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upper_reduces_to_sqrt_t_without_corruption() {
        let p = BoundParams::new(1, 1, 100, 0.0, 1.0);
        let curve = upper_bound_curve(&p, &[1, 4, 100]);
        assert_eq!(curve, vec![1.0, 2.0, 10.0]);
        // doubling T multiplies the C = 0 bound by √2
        let doubled = upper_bound_curve(&p, &[200]);
        assert!((doubled[0] / curve[2] - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn upper_bound_spec_point() {
        let p = BoundParams::new(3, 2, 40_000, 200.0, 1.0);
        let v = upper_bound_curve(&p, &[40_000])[0];
        assert!((v - 2078.4609690826528).abs() < 1e-9);
    }

    #[test]
    fn lower_bound_branches_switch_at_sqrt_t_equals_d2c() {
        let p = BoundParams::new(2, 2, 1_000_000, 10.0, 1.0);
        // switch point: √t = d²C = 40 → t = 1600
        let below = lower_bound_curve(&p, &[400])[0];
        let at = lower_bound_curve(&p, &[1600])[0];
        let above = lower_bound_curve(&p, &[6400])[0];
        let lead = 2f64.powf(-1.0);
        assert_eq!(below, lead * 40.0); // corruption branch dominates
        assert_eq!(at, lead * 40.0);
        assert_eq!(above, lead * 80.0); // √t branch
        // C = 0 reduces to the √t branch
        let clean = BoundParams::new(2, 2, 100, 0.0, 1.0);
        assert_eq!(lower_bound_curve(&clean, &[100])[0], lead * 10.0);
    }

    #[test]
    fn upper_dominates_lower_on_desk_grids() {
        for d in 2..=4usize {
            for l in 1..=3usize {
                for c in [0.0, 10.0, 500.0] {
                    let p = BoundParams::new(d, l, 100_000, c, 1.0);
                    let grid: Vec<usize> = (1..=100).map(|k| k * 1000).collect();
                    let up = upper_bound_curve(&p, &grid);
                    let lo = lower_bound_curve(&p, &grid);
                    for (u, l) in up.iter().zip(&lo) {
                        assert!(u >= l);
                    }
                }
            }
        }
    }
}
