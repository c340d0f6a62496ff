//! Self-contained SVG emission: chart heat maps and trajectory foot-path
//! plots. No external renderer or stylesheet is referenced, every
//! coordinate is formatted with [`fmt_sig`], and all iteration orders
//! are fixed, so output is byte-identical for identical inputs.
//!
//! Heat maps use a fixed 256-step linear ramp between two stops,
//! dark #1a1a40 at value 0 and warm #ffd24d at value 1; values are
//! clamped to [0, 1] before quantization.

use super::csv::fmt_sig;
use crate::gait::Trajectory;
use crate::robot::RobotConfig;
use crate::synthesis::ChartGrid;
use std::fmt::Write as _;

const RAMP_LO: (u32, u32, u32) = (0x1a, 0x1a, 0x40);
const RAMP_HI: (u32, u32, u32) = (0xff, 0xd2, 0x4d);

/// Quantize a [0, 1] value to the 256-step two-stop ramp.
pub fn ramp_color(v: f64) -> String {
    let step = (v.clamp(0.0, 1.0) * 255.0).round() as u32;
    let ch = |lo: u32, hi: u32| lo + (hi - lo) * step / 255;
    format!(
        "#{:02x}{:02x}{:02x}",
        ch(RAMP_LO.0, RAMP_HI.0),
        ch(RAMP_LO.1, RAMP_HI.1),
        ch(RAMP_LO.2, RAMP_HI.2)
    )
}

fn svg_open(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\">",
        fmt_sig(w),
        fmt_sig(h)
    );
}

/// Render a chart as a heat map. Masked-off samples are left as
/// background; each sample paints one grid cell colored by its value.
pub fn chart_svg(chart: &ChartGrid, title: &str) -> String {
    let spec = chart.spec;
    let pad = 10.0;
    let dx = if spec.nx > 1 { (spec.x_range.1 - spec.x_range.0) / (spec.nx - 1) as f64 } else { 1.0 };
    let dy = if spec.ny > 1 { (spec.y_range.1 - spec.y_range.0) / (spec.ny - 1) as f64 } else { 1.0 };
    let w = (spec.x_range.1 - spec.x_range.0) + 2.0 * pad;
    let h = (spec.y_range.1 - spec.y_range.0) + 2.0 * pad;
    let mapx = |x: f64| x - spec.x_range.0 + pad;
    let mapy = |y: f64| spec.y_range.1 - y + pad;
    let mut out = String::new();
    svg_open(&mut out, w, h);
    let _ = writeln!(out, "<title>{title}</title>");
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>",
        fmt_sig(w),
        fmt_sig(h)
    );
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            let (v, m) = chart.at(i, j);
            if !m {
                continue;
            }
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
                fmt_sig(mapx(spec.x_at(i)) - dx / 2.0),
                fmt_sig(mapy(spec.y_at(j)) - dy / 2.0),
                fmt_sig(dx),
                fmt_sig(dy),
                ramp_color(v)
            );
        }
    }
    let _ = writeln!(
        out,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"0.5\"/>",
        fmt_sig(pad - dx / 2.0),
        fmt_sig(pad - dy / 2.0),
        fmt_sig(spec.x_range.1 - spec.x_range.0 + dx),
        fmt_sig(spec.y_range.1 - spec.y_range.0 + dy)
    );
    out.push_str("</svg>\n");
    out
}

const LEG_COLORS: [&str; 4] = ["#c0392b", "#2980b9", "#27ae60", "#8e44ad"];
const HEAD_COLOR: &str = "#e67e22";
const TAIL_COLOR: &str = "#16a085";

/// Render the foot-tip paths of a trajectory, plus the head and tail
/// output paths and the chassis actuator rectangle, in chassis-frame mm.
pub fn foot_paths_svg(traj: &Trajectory, config: &RobotConfig) -> String {
    let mut min = crate::Point2::new(f64::INFINITY, f64::INFINITY);
    let mut max = crate::Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut grow = |p: crate::Point2| {
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    };
    for s in &traj.samples {
        for &f in &s.state.foot_tips {
            grow(f);
        }
        grow(s.state.head_point);
        grow(s.state.tail_point);
    }
    if traj.samples.is_empty() {
        grow(crate::Point2::new(0.0, 0.0));
    }
    let pad = 15.0;
    let w = max.x - min.x + 2.0 * pad;
    let h = max.y - min.y + 2.0 * pad;
    let mapx = |x: f64| x - min.x + pad;
    let mapy = |y: f64| max.y - y + pad;

    let mut out = String::new();
    svg_open(&mut out, w, h);
    out.push_str("<title>foot paths</title>\n");
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>",
        fmt_sig(w),
        fmt_sig(h)
    );
    // Chassis outline through the four actuator mounts.
    let l = &config.links.l;
    let (cx0, cx1) = (-l[0] / 2.0, l[0] / 2.0);
    let (cy0, cy1) = (-l[10] / 2.0, l[10] / 2.0);
    let _ = writeln!(
        out,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"/>",
        fmt_sig(mapx(cx0)),
        fmt_sig(mapy(cy1)),
        fmt_sig(cx1 - cx0),
        fmt_sig(cy1 - cy0)
    );
    let mut polyline = |points: Vec<crate::Point2>, color: &str| {
        let coords: Vec<String> = points
            .iter()
            .map(|p| format!("{},{}", fmt_sig(mapx(p.x)), fmt_sig(mapy(p.y))))
            .collect();
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\"/>",
            coords.join(" "),
            color
        );
    };
    for (k, color) in LEG_COLORS.iter().enumerate() {
        polyline(traj.samples.iter().map(|s| s.state.foot_tips[k]).collect(), color);
    }
    polyline(traj.samples.iter().map(|s| s.state.head_point).collect(), HEAD_COLOR);
    polyline(traj.samples.iter().map(|s| s.state.tail_point).collect(), TAIL_COLOR);
    out.push_str("</svg>\n");
    out
}
