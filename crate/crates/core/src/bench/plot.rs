//! IGD-versus-time scatter plot as standalone SVG.
//!
//! Per data set (front, m, n) the mean IGD and mean selector time of every
//! selector are divided by the largest value among the selectors on that
//! data set; the normalized values are then averaged over data sets. Each
//! selector becomes one marker.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::bench::ResultRow;
use crate::error::{Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Normalized average (time, IGD) of one selector.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotPoint {
    pub selector: String,
    pub time: f64,
    pub igd: f64,
}

/// Normalizes per data set by the largest selector mean, then averages.
pub fn normalized_points(rows: &[ResultRow]) -> Result<Vec<PlotPoint>> {
    if rows.is_empty() {
        return Err(Error::Empty("result rows"));
    }
    let mut selectors: Vec<String> = Vec::new();
    let mut datasets: Vec<(String, usize, usize)> = Vec::new();
    for r in rows {
        let s = r.selector();
        if !selectors.contains(&s) {
            selectors.push(s);
        }
        let d = (r.front.clone(), r.m, r.n);
        if !datasets.contains(&d) {
            datasets.push(d);
        }
    }
    let mut sums = vec![(0.0, 0.0, 0usize); selectors.len()];
    for (front, m, n) in &datasets {
        // (time sum, igd sum, count) per selector on this data set.
        let mut cells = vec![(0.0, 0.0, 0usize); selectors.len()];
        for r in rows.iter().filter(|r| &r.front == front && r.m == *m && r.n == *n) {
            let i = selectors.iter().position(|s| *s == r.selector()).expect("collected");
            cells[i].0 += r.time_ms;
            cells[i].1 += r.igd;
            cells[i].2 += 1;
        }
        let means: Vec<Option<(f64, f64)>> = cells
            .iter()
            .map(|&(t, g, c)| (c > 0).then(|| (t / c as f64, g / c as f64)))
            .collect();
        let max_t = means.iter().flatten().map(|p| p.0).fold(0.0, f64::max);
        let max_g = means.iter().flatten().map(|p| p.1).fold(0.0, f64::max);
        for (acc, mean) in sums.iter_mut().zip(&means) {
            if let Some((t, g)) = mean {
                acc.0 += if max_t > 0.0 { t / max_t } else { 1.0 };
                acc.1 += if max_g > 0.0 { g / max_g } else { 1.0 };
                acc.2 += 1;
            }
        }
    }
    Ok(selectors
        .into_iter()
        .zip(sums)
        .map(|(selector, (t, g, c))| PlotPoint {
            selector,
            time: t / c as f64,
            igd: g / c as f64,
        })
        .collect())
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
        .replace('\'', "&apos;")
}

/// Renders the scatter plot. With `log_time` the time axis is log10-scaled
/// from the decade below the smallest normalized time up to 1.
pub fn scatter_svg(rows: &[ResultRow], log_time: bool) -> Result<String> {
    let points = normalized_points(rows)?;
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let min_time = points.iter().map(|p| p.time).filter(|&t| t > 0.0).fold(1.0, f64::min);
    let lo_decade = min_time.log10().floor().min(-1.0);
    let x_of = |t: f64| {
        let frac = if log_time {
            (t.max(10f64.powf(lo_decade)).log10() - lo_decade) / -lo_decade
        } else {
            t
        };
        LEFT + frac.clamp(0.0, 1.0) * plot_w
    };
    let y_of = |g: f64| TOP + (1.0 - g.clamp(0.0, 1.0)) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">
<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>
<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );

    // Ticks.
    let x_ticks: Vec<(f64, String)> = if log_time {
        (lo_decade as i32..=0)
            .map(|e| (10f64.powi(e), format!("1e{e}")))
            .collect()
    } else {
        (0..=5)
            .map(|i| (i as f64 / 5.0, format!("{:.1}", i as f64 / 5.0)))
            .collect()
    };
    for (t, label) in x_ticks {
        let x = x_of(t);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}" stroke="black"/><text x="{x:.2}" y="{ty:.2}" text-anchor="middle">{}</text>"#,
            escape(&label),
            y0 = TOP + plot_h,
            y1 = TOP + plot_h + 5.0,
            ty = TOP + plot_h + 18.0,
        );
    }
    for i in 0..=5 {
        let g = i as f64 / 5.0;
        let y = y_of(g);
        let _ = writeln!(
            s,
            r#"<line x1="{x0:.2}" y1="{y:.2}" x2="{LEFT:.2}" y2="{y:.2}" stroke="black"/><text x="{tx:.2}" y="{ty:.2}" text-anchor="end">{g:.1}</text>"#,
            x0 = LEFT - 5.0,
            tx = LEFT - 8.0,
            ty = y + 4.0,
        );
    }
    let x_label = if log_time {
        "normalized time (log scale)"
    } else {
        "normalized time"
    };
    let _ = writeln!(
        s,
        r#"<text x="{cx:.2}" y="{ly:.2}" text-anchor="middle">{x_label}</text>
<text x="18" y="{cy:.2}" text-anchor="middle" transform="rotate(-90 18 {cy:.2})">normalized IGD</text>"#,
        cx = LEFT + plot_w / 2.0,
        ly = HEIGHT - 15.0,
        cy = TOP + plot_h / 2.0,
    );

    // Markers and legend.
    let legend_x = WIDTH - RIGHT + 20.0;
    for (i, p) in points.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let name = escape(&p.selector);
        let _ = writeln!(
            s,
            r#"<circle class="marker" data-selector="{name}" cx="{cx:.3}" cy="{cy:.3}" r="6" fill="{color}" stroke="black"><title>{name}: time {t:.4}, IGD {g:.4}</title></circle>"#,
            cx = x_of(p.time),
            cy = y_of(p.igd),
            t = p.time,
            g = p.igd,
        );
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<circle cx="{legend_x:.2}" cy="{ly:.2}" r="6" fill="{color}" stroke="black"/><text x="{tx:.2}" y="{ty:.2}">{name}</text>"#,
            tx = legend_x + 12.0,
            ty = ly + 4.0,
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn emit_scatter_plot(rows: &[ResultRow], path: impl AsRef<Path>, log_time: bool) -> Result<()> {
    fs::write(path, scatter_svg(rows, log_time)?)?;
    Ok(())
}
