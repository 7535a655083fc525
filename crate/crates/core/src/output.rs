//! File emission: regret CSVs, self-contained SVG line plots, estimator
//! snapshot dumps, and the resolved-spec manifest.
//!
//! All numeric formatting is deterministic, so reruns with the same spec and
//! seed produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimation::SnapshotRecord;
use crate::harness::{ExperimentResult, ExperimentSpec, SweepResult};

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    package: &'static str,
    version: &'static str,
    spec: &'a ExperimentSpec,
    rep_seeds: &'a [u64],
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes `regret_curves.csv`, `regret_curves.svg`, `manifest.json`, and —
/// when snapshots were collected — `estimator_snapshots.csv`. Returns the
/// written paths. Refuses to write anything for an empty result.
pub fn emit_run_outputs(
    result: &ExperimentResult,
    spec: &ExperimentSpec,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    if result.curves.is_empty() {
        return Err(Error::InvalidSpec("no policy curves to emit".into()));
    }
    ensure_dir(out_dir)?;
    let mut written = Vec::new();

    let mut csv = String::from("policy,t,mean_cum_regret,stderr\n");
    for curve in &result.curves {
        for ((&t, m), s) in result
            .checkpoint_rounds
            .iter()
            .zip(&curve.mean)
            .zip(&curve.stderr)
        {
            writeln!(csv, "{},{},{},{}", curve.policy, t, m, s).unwrap();
        }
    }
    let csv_path = out_dir.join("regret_curves.csv");
    write_file(&csv_path, &csv)?;
    written.push(csv_path);

    let series: Vec<(String, Vec<(f64, f64)>)> = result
        .curves
        .iter()
        .map(|c| {
            (
                c.policy.clone(),
                result
                    .checkpoint_rounds
                    .iter()
                    .zip(&c.mean)
                    .map(|(&t, &m)| (t as f64, m))
                    .collect(),
            )
        })
        .collect();
    let svg = svg_line_plot("Cumulative regret", "round t", "mean cumulative regret", &series);
    let svg_path = out_dir.join("regret_curves.svg");
    write_file(&svg_path, &svg)?;
    written.push(svg_path);

    if !result.snapshots.is_empty() {
        let snap_path = out_dir.join("estimator_snapshots.csv");
        write_file(&snap_path, &snapshot_csv(&result.snapshots))?;
        written.push(snap_path);
    }

    let manifest_path = out_dir.join("manifest.json");
    write_file(&manifest_path, &manifest_json(spec, &result.rep_seeds))?;
    written.push(manifest_path);
    Ok(written)
}

/// Writes `regret_vs_C.csv`, `regret_vs_C.svg`, and `manifest.json` for a
/// budget sweep.
pub fn emit_sweep_outputs(
    sweep: &SweepResult,
    spec: &ExperimentSpec,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    if sweep.rows.is_empty() {
        return Err(Error::InvalidSpec("no sweep rows to emit".into()));
    }
    ensure_dir(out_dir)?;
    let mut written = Vec::new();

    let mut csv = String::from("policy,C,final_regret,stderr\n");
    for row in &sweep.rows {
        writeln!(csv, "{},{},{},{}", row.policy, row.budget_c, row.final_mean, row.final_stderr)
            .unwrap();
    }
    let csv_path = out_dir.join("regret_vs_C.csv");
    write_file(&csv_path, &csv)?;
    written.push(csv_path);

    let mut by_policy: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for row in &sweep.rows {
        match by_policy.iter_mut().find(|(p, _)| *p == row.policy) {
            Some((_, pts)) => pts.push((row.budget_c, row.final_mean)),
            None => by_policy.push((row.policy.clone(), vec![(row.budget_c, row.final_mean)])),
        }
    }
    let svg = svg_line_plot(
        "Final cumulative regret vs deviation budget",
        "budget C",
        "final cumulative regret",
        &by_policy,
    );
    let svg_path = out_dir.join("regret_vs_C.svg");
    write_file(&svg_path, &svg)?;
    written.push(svg_path);

    let manifest_path = out_dir.join("manifest.json");
    write_file(&manifest_path, &manifest_json(spec, &[]))?;
    written.push(manifest_path);
    Ok(written)
}

fn manifest_json(spec: &ExperimentSpec, rep_seeds: &[u64]) -> String {
    let manifest = Manifest {
        package: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        spec,
        rep_seeds,
    };
    serde_json::to_string_pretty(&manifest).expect("manifest serializes")
}

fn snapshot_csv(snapshots: &[SnapshotRecord]) -> String {
    let mut csv = String::from("run_id,t,node,side,estimate,lambda_min,lambda_max,count\n");
    for s in snapshots {
        let estimate = s
            .estimate
            .iter()
            .map(f64::to_string)
            .collect::<Vec<_>>()
            .join(";");
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            s.run_id, s.t, s.node, s.side, estimate, s.lambda_min, s.lambda_max, s.count
        )
        .unwrap();
    }
    csv
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 160.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;

/// Minimal self-contained SVG line plot with linear axes and a legend.
pub fn svg_line_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(String, Vec<(f64, f64)>)],
) -> String {
    let pts: Vec<(f64, f64)> = series.iter().flat_map(|(_, p)| p.iter().copied()).collect();
    let (x_min, x_max) = bounds(pts.iter().map(|p| p.0));
    let (y_min, y_max) = bounds(pts.iter().map(|p| p.1));
    let y_min = y_min.min(0.0);
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = move |x: f64| MARGIN_L + (x - x_min) / (x_max - x_min).max(1e-12) * plot_w;
    let sy = move |y: f64| MARGIN_T + plot_h - (y - y_min) / (y_max - y_min).max(1e-12) * plot_h;

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        MARGIN_L + plot_w / 2.0,
        title
    )
    .unwrap();
    // axes
    writeln!(
        svg,
        r#"<line x1="{MARGIN_L:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"/>"#,
        MARGIN_T + plot_h,
        MARGIN_L + plot_w,
        MARGIN_T + plot_h
    )
    .unwrap();
    writeln!(
        svg,
        r#"<line x1="{MARGIN_L:.1}" y1="{MARGIN_T:.1}" x2="{MARGIN_L:.1}" y2="{:.1}" stroke="black"/>"#,
        MARGIN_T + plot_h
    )
    .unwrap();
    for k in 0..=5 {
        let fx = x_min + (x_max - x_min) * k as f64 / 5.0;
        let fy = y_min + (y_max - y_min) * k as f64 / 5.0;
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            sx(fx),
            MARGIN_T + plot_h + 18.0,
            format_tick(fx)
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            MARGIN_L - 6.0,
            sy(fy) + 4.0,
            format_tick(fy)
        )
        .unwrap();
        writeln!(
            svg,
            r##"<line x1="{MARGIN_L:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#dddddd"/>"##,
            sy(fy),
            MARGIN_L + plot_w,
            sy(fy)
        )
        .unwrap();
    }
    writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 10.0,
        x_label
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="16" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0,
        y_label
    )
    .unwrap();

    for (idx, (label, points)) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let path: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.8" points="{}"/>"#,
            color,
            path.join(" ")
        )
        .unwrap();
        for &(x, y) in points.iter() {
            if points.len() <= 16 {
                writeln!(
                    svg,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#,
                    sx(x),
                    sy(y),
                    color
                )
                .unwrap();
            }
        }
        let ly = MARGIN_T + 14.0 + idx as f64 * 18.0;
        writeln!(
            svg,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{}" stroke-width="2"/>"#,
            MARGIN_L + plot_w + 10.0,
            MARGIN_L + plot_w + 34.0,
            color
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12">{}</text>"#,
            MARGIN_L + plot_w + 40.0,
            ly + 4.0,
            label
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for v in values {
        min = min.min(v);
        max = max.max(v);
    }
    if !min.is_finite() || !max.is_finite() {
        (0.0, 1.0)
    } else if min == max {
        (min - 0.5, max + 0.5)
    } else {
        (min, max)
    }
}

fn format_tick(v: f64) -> String {
    if v.abs() >= 1000.0 {
        format!("{:.0}", v)
    } else if v.abs() >= 10.0 {
        format!("{:.1}", v)
    } else {
        format!("{:.2}", v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{
        AdversarySpec, PolicyCurve, RegretBenchmark, RewardAccounting, SemSource,
    };
    use crate::policy::PolicyKind;

    fn tiny_spec() -> ExperimentSpec {
        ExperimentSpec {
            sem: SemSource::Preset("chain2".into()),
            adversary: AdversarySpec::None,
            policies: vec![PolicyKind::Ucb1],
            horizon: 3,
            repetitions: 1,
            seed: 9,
            explicit_actions: None,
            checkpoint_every: None,
            delta_override: None,
            overlay_scale: None,
            regret_benchmark: RegretBenchmark::default(),
            reward_accounting: RewardAccounting::default(),
            dump_estimators: false,
        }
    }

    fn tiny_result(rows: usize) -> ExperimentResult {
        ExperimentResult {
            horizon: rows,
            checkpoint_rounds: (1..=rows).collect(),
            curves: vec![PolicyCurve {
                policy: "ucb1".into(),
                mean: (1..=rows).map(|t| t as f64).collect(),
                stderr: vec![0.0; rows],
                final_mean: rows as f64,
                final_stderr: 0.0,
                per_rep_final: vec![rows as f64],
            }],
            rep_seeds: vec![123],
            snapshots: Vec::new(),
        }
    }

    #[test]
    fn run_outputs_have_one_row_per_checkpoint() {
        let dir = tempfile::tempdir().unwrap();
        let result = tiny_result(3);
        let paths = emit_run_outputs(&result, &tiny_spec(), dir.path()).unwrap();
        assert_eq!(paths.len(), 3); // csv, svg, manifest
        let csv = std::fs::read_to_string(dir.path().join("regret_curves.csv")).unwrap();
        let data_rows = csv.lines().count() - 1;
        assert_eq!(data_rows, 3);
        assert!(csv.starts_with("policy,t,mean_cum_regret,stderr\n"));
    }

    #[test]
    fn empty_result_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let mut result = tiny_result(3);
        result.curves.clear();
        let out = dir.path().join("sub");
        assert!(emit_run_outputs(&result, &tiny_spec(), &out).is_err());
        assert!(!out.exists());
    }

    #[test]
    fn svg_is_self_contained() {
        let svg = svg_line_plot(
            "t",
            "x",
            "y",
            &[("a".into(), vec![(0.0, 0.0), (1.0, 2.0), (2.0, 1.0)])],
        );
        assert!(svg.starts_with("<svg xmlns="));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("polyline"));
    }
}
