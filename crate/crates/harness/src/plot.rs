//! Static SVG scatter plots with bound-curve overlays.
//!
//! Each function gets two plots: objective value against χ with the
//! relevance bounds, and objective value against its coverage metric with
//! the coverage bounds. Curves are drawn as a staircase envelope: the value
//! axis is split into cells, and within each cell the lower curve takes the
//! minimum of every precondition-satisfying sample's lower bound evaluated
//! at both cell ends (the upper curve the maximum). Because each sample's
//! bound is monotone in the objective value, the staircase brackets every
//! per-sample bound across the whole cell, so every `sample-ok` point lies
//! between the drawn curves by construction. Curves are clipped to the
//! metric's natural range, matching the plot frame.
//!
//! COM coverage intervals are a heuristic envelope, so that plot draws the
//! scatter without curves.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use smi_core::{
    relevance_bounds, ComRelevanceCurve, SmiFunction, SmiValue, SubsetBoundParams,
};

use crate::error::{io_err, Result};
use crate::experiment::{ExperimentOutput, FunctionRun, MetricKind};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 62.0;
const RIGHT: f64 = 18.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 52.0;
const CELLS: usize = 160;

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn plot_width() -> f64 {
        WIDTH - LEFT - RIGHT
    }

    fn plot_height() -> f64 {
        HEIGHT - TOP - BOTTOM
    }

    fn x_px(&self, x: f64) -> f64 {
        LEFT + (x - self.x_min) / (self.x_max - self.x_min) * Self::plot_width()
    }

    fn y_px(&self, y: f64) -> f64 {
        TOP + (self.y_max - y) / (self.y_max - self.y_min) * Self::plot_height()
    }
}

struct PlotPoint {
    x: f64,
    y: f64,
    ok: bool,
}

/// Polyline vertices in data coordinates.
type Curve = Vec<(f64, f64)>;

/// One precondition-satisfying sample's bound parameters, reusable at any
/// objective value on the grid.
struct Bundle<'a> {
    chi: usize,
    params: &'a SubsetBoundParams,
}

fn bundle_interval(
    run: &FunctionRun,
    output: &ExperimentOutput,
    metric: MetricKind,
    bundle: &Bundle<'_>,
    value: f64,
) -> (f64, f64) {
    let cfg = &run.cfg;
    match metric {
        MetricKind::Relevance => {
            if cfg.function == SmiFunction::Com {
                // Saturating staircase inverses of the envelopes. These
                // agree with the feasible interval wherever it is non-empty
                // and stay monotone at off-sample grid values, so the
                // drawn curve never excludes a feasible sample.
                let curve = ComRelevanceCurve::from_params(
                    cfg,
                    output.budget,
                    output.sizes.query,
                    &output.dataset_params,
                    bundle.params,
                )
                .expect("bundle was precondition-checked");
                let tol = 1e-9 * value.abs().max(1.0);
                let lower = (0..=output.budget)
                    .find(|&chi| curve.f_upper(chi) >= value - tol)
                    .unwrap_or(output.budget);
                let upper = (0..=output.budget)
                    .rev()
                    .find(|&chi| curve.f_lower(chi) <= value + tol)
                    .unwrap_or(0);
                (lower as f64, upper as f64)
            } else {
                let interval = relevance_bounds(
                    cfg,
                    SmiValue(value),
                    bundle.chi,
                    output.budget,
                    output.sizes,
                    &output.dataset_params,
                    bundle.params,
                );
                (interval.lower, interval.upper)
            }
        }
        MetricKind::Coverage => {
            let interval = smi_core::coverage_bounds(
                cfg,
                SmiValue(value),
                bundle.chi,
                output.budget,
                output.sizes,
                &output.dataset_params,
                bundle.params,
            );
            (interval.lower, interval.upper)
        }
    }
}

/// Staircase vertices for the lower and upper envelope curves.
fn envelope_curves(
    run: &FunctionRun,
    output: &ExperimentOutput,
    metric: MetricKind,
    frame: &Frame,
) -> Option<(Curve, Curve)> {
    let intervals = match metric {
        MetricKind::Relevance => &run.relevance,
        MetricKind::Coverage => &run.coverage,
    };
    let bundles: Vec<Bundle<'_>> = run
        .records
        .iter()
        .zip(intervals)
        .zip(&run.subset_params)
        .filter(|((_, interval), _)| interval.preconditions_met && !interval.heuristic)
        .map(|((record, _), params)| Bundle {
            chi: record.chi,
            params,
        })
        .collect();
    if bundles.is_empty() {
        return None;
    }

    // Pointwise envelope over the value grid.
    let mut grid_lo = vec![f64::INFINITY; CELLS + 1];
    let mut grid_hi = vec![f64::NEG_INFINITY; CELLS + 1];
    for k in 0..=CELLS {
        let value = frame.x_min + (frame.x_max - frame.x_min) * k as f64 / CELLS as f64;
        for bundle in &bundles {
            let (lo, hi) = bundle_interval(run, output, metric, bundle, value);
            grid_lo[k] = grid_lo[k].min(lo);
            grid_hi[k] = grid_hi[k].max(hi);
        }
    }

    // Per-cell staircase, clipped to the frame's value range.
    let mut lower = Vec::with_capacity(2 * CELLS);
    let mut upper = Vec::with_capacity(2 * CELLS);
    for i in 0..CELLS {
        let x0 = frame.x_min + (frame.x_max - frame.x_min) * i as f64 / CELLS as f64;
        let x1 = frame.x_min + (frame.x_max - frame.x_min) * (i + 1) as f64 / CELLS as f64;
        let lo = grid_lo[i].min(grid_lo[i + 1]).clamp(frame.y_min, frame.y_max);
        let hi = grid_hi[i].max(grid_hi[i + 1]).clamp(frame.y_min, frame.y_max);
        lower.push((x0, lo));
        lower.push((x1, lo));
        upper.push((x0, hi));
        upper.push((x1, hi));
    }
    Some((lower, upper))
}

fn polyline(points: &[(f64, f64)], frame: &Frame, class: &str, color: &str) -> String {
    let coords: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", frame.x_px(x), frame.y_px(y)))
        .collect();
    format!(
        "<polyline class=\"{class}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
        coords.join(" ")
    )
}

fn nice_ticks(min: f64, max: f64, count: usize) -> Vec<f64> {
    (0..=count)
        .map(|i| min + (max - min) * i as f64 / count as f64)
        .collect()
}

fn axes(frame: &Frame, x_label: &str, y_label: &str, integer_y: bool) -> String {
    let mut s = String::new();
    let bottom = TOP + Frame::plot_height();
    for x in nice_ticks(frame.x_min, frame.x_max, 5) {
        let px = frame.x_px(x);
        s.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{bottom:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#444\"/>\n",
            bottom + 5.0
        ));
        s.push_str(&format!(
            "<text x=\"{px:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{x:.3}</text>\n",
            bottom + 18.0
        ));
    }
    let y_ticks = if integer_y && frame.y_max <= 12.0 {
        (frame.y_min as i64..=frame.y_max as i64)
            .map(|v| v as f64)
            .collect()
    } else {
        nice_ticks(frame.y_min, frame.y_max, 5)
    };
    for y in y_ticks {
        let py = frame.y_px(y);
        s.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{LEFT:.2}\" y2=\"{py:.2}\" stroke=\"#444\"/>\n",
            LEFT - 5.0
        ));
        s.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{y}</text>\n",
            LEFT - 8.0,
            py + 4.0
        ));
    }
    s.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">{x_label}</text>\n",
        LEFT + Frame::plot_width() / 2.0,
        HEIGHT - 12.0
    ));
    s.push_str(&format!(
        "<text x=\"16\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">{y_label}</text>\n",
        TOP + Frame::plot_height() / 2.0,
        TOP + Frame::plot_height() / 2.0
    ));
    s
}

fn plot_one(
    output: &ExperimentOutput,
    run: &FunctionRun,
    metric: MetricKind,
    dir: &Path,
) -> Result<PathBuf> {
    let intervals = match metric {
        MetricKind::Relevance => &run.relevance,
        MetricKind::Coverage => &run.coverage,
    };
    // COM's coverage envelope is heuristic: scatter only, no curves.
    let draw_curves =
        !(metric == MetricKind::Coverage && run.cfg.function == SmiFunction::Com);

    let mut points = Vec::new();
    for (record, interval) in run.records.iter().zip(intervals) {
        let y = match metric {
            MetricKind::Relevance => Some(record.chi as f64),
            MetricKind::Coverage => run.coverage_metric(record),
        };
        if let Some(y) = y {
            let ok = if draw_curves {
                interval.preconditions_met && !interval.heuristic
            } else {
                true
            };
            points.push(PlotPoint {
                x: record.smi_value,
                y,
                ok,
            });
        }
    }

    let (x_min, x_max) = match points.iter().map(|p| p.x).fold(None, |acc, x| match acc {
        None => Some((x, x)),
        Some((lo, hi)) => Some((lo.min(x), hi.max(x))),
    }) {
        Some((lo, hi)) if hi > lo => {
            let pad = (hi - lo) * 0.04;
            (lo - pad, hi + pad)
        }
        Some((lo, _)) => (lo - 0.5, lo + 0.5),
        None => (0.0, 1.0),
    };
    let y_max = match metric {
        MetricKind::Relevance => output.budget as f64,
        MetricKind::Coverage => 1.0,
    };
    let frame = Frame {
        x_min,
        x_max,
        y_min: 0.0,
        y_max,
    };

    let (metric_name, y_label) = match metric {
        MetricKind::Relevance => ("relevance", "χ = |A ∩ T|".to_owned()),
        MetricKind::Coverage => (
            "coverage",
            match run.cfg.function {
                SmiFunction::Flvmi => "δ_avg over T∖A".to_owned(),
                _ => "δ_avg over Q".to_owned(),
            },
        ),
    };

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str(&format!(
        "<desc>dataset={} function={} eta={} metric={metric_name} samples={} \
         curves=staircase-envelope-over-sample-bound-parameters clip=[0,{y_max}]</desc>\n",
        output.dataset_name,
        run.cfg.function,
        run.cfg.eta,
        run.records.len()
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<rect class=\"plot-area\" x=\"{LEFT}\" y=\"{TOP}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#888\"/>\n",
        Frame::plot_width(),
        Frame::plot_height()
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">{} ({}, η={})</text>\n",
        LEFT + Frame::plot_width() / 2.0,
        metric_name,
        run.cfg.function,
        run.cfg.eta
    ));
    svg.push_str(&axes(
        &frame,
        "I_F(A;Q)",
        &y_label,
        metric == MetricKind::Relevance,
    ));

    if draw_curves {
        if let Some((lower, upper)) = envelope_curves(run, output, metric, &frame) {
            svg.push_str(&polyline(&lower, &frame, "bound-lower", "#d62728"));
            svg.push_str(&polyline(&upper, &frame, "bound-upper", "#2ca02c"));
        }
    }
    for point in &points {
        let class = if point.ok { "sample-ok" } else { "sample-flagged" };
        let color = if point.ok { "#1f77b4" } else { "#aaaaaa" };
        svg.push_str(&format!(
            "<circle class=\"{class}\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\" fill-opacity=\"0.55\"/>\n",
            frame.x_px(point.x),
            frame.y_px(point.y)
        ));
    }
    svg.push_str("</svg>\n");

    let file = dir.join(format!(
        "{}_{}.svg",
        metric_name,
        run.cfg.function.name().to_lowercase()
    ));
    let mut handle = fs::File::create(&file).map_err(io_err(&file))?;
    handle.write_all(svg.as_bytes()).map_err(io_err(&file))?;
    Ok(file)
}

/// Emit a relevance and a coverage plot per configured function.
pub fn emit_plots(output: &ExperimentOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut paths = Vec::with_capacity(output.runs.len() * 2);
    for run in &output.runs {
        paths.push(plot_one(output, run, MetricKind::Relevance, dir)?);
        paths.push(plot_one(output, run, MetricKind::Coverage, dir)?);
    }
    Ok(paths)
}
