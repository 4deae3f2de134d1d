//! CSV tables and SVG charts for the analysis results.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::metrics::Metric;

use super::{AnalysisError, HeatmapCell, Rq1Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Svg,
}

impl FromStr for Format {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            other => Err(AnalysisError::Invalid(format!("unknown output format `{other}`"))),
        }
    }
}

fn pct(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

pub fn rq1_csv(rows: &[Rq1Row]) -> String {
    let mut s = String::from("metric,lag,pct_files,n_files,n_eligible\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{},{}", r.metric, r.lag, pct(r.pct_files), r.n_files, r.n_eligible);
    }
    s
}

pub fn rq2_csv(cells: &[HeatmapCell]) -> String {
    let mut s = String::from("group_metric,test_metric,pct_developers,n_significant,n_developers\n");
    for c in cells {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            c.group_metric,
            c.test_metric,
            pct(c.pct_developers),
            c.n_significant,
            c.n_developers
        );
    }
    s
}

const PALETTE: [&str; 11] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
    "#17becf", "#393b79",
];

/// Line chart of the percentage of files per lag, one line per metric.
pub fn rq1_svg(rows: &[Rq1Row]) -> String {
    let (w, h) = (960.0, 540.0);
    let (left, right, top, bottom) = (60.0, 130.0, 30.0, 50.0);
    let (pw, ph) = (w - left - right, h - top - bottom);
    let max_lag = rows.iter().map(|r| r.lag).max().unwrap_or(1).max(2);
    let x = |lag: usize| left + pw * (lag - 1) as f64 / (max_lag - 1) as f64;
    let y = |v: f64| top + ph * (1.0 - v / 100.0);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<path d="M{left},{top} V{} H{}" fill="none" stroke="black"/>"#, top + ph, left + pw);
    for tick in (0..=100).step_by(20) {
        let ty = y(tick as f64);
        let _ = writeln!(s, r##"<path d="M{},{ty} H{}" stroke="#ddd"/>"##, left, left + pw);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{tick}</text>"#, left - 6.0, ty + 4.0);
    }
    for lag in (0..=max_lag).step_by(10).filter(|&l| l >= 1).chain([1]) {
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{lag}</text>"#, x(lag), top + ph + 18.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">lag</text>"#, left + pw / 2.0, h - 10.0);
    let _ = writeln!(
        s,
        r#"<text transform="translate(16,{}) rotate(-90)" text-anchor="middle">% of files with significant autocorrelation above threshold</text>"#,
        top + ph / 2.0
    );

    for (mi, metric) in Metric::ALL.iter().enumerate() {
        let series: Vec<&Rq1Row> = rows.iter().filter(|r| r.metric == *metric).collect();
        if series.is_empty() {
            continue;
        }
        let color = PALETTE[mi];
        let data: Vec<String> = series.iter().map(|r| pct(r.pct_files)).collect();
        let _ = writeln!(s, r#"<g class="metric" data-metric="{metric}" data-values="{}" stroke="{color}" fill="none">"#, data.join(","));
        let _ = writeln!(s, "<title>{metric}</title>");
        let mut segment: Vec<String> = Vec::new();
        let flush = |seg: &mut Vec<String>, s: &mut String| {
            if seg.len() > 1 {
                let _ = writeln!(s, r#"<polyline points="{}"/>"#, seg.join(" "));
            } else if seg.len() == 1 {
                let (px, py) = seg[0].split_once(',').unwrap();
                let _ = writeln!(s, r#"<circle cx="{px}" cy="{py}" r="2" fill="{color}"/>"#);
            }
            seg.clear();
        };
        for r in &series {
            match r.pct_files {
                Some(v) => segment.push(format!("{:.2},{:.2}", x(r.lag), y(v))),
                None => flush(&mut segment, &mut s),
            }
        }
        flush(&mut segment, &mut s);
        let _ = writeln!(s, "</g>");
        let ly = top + 16.0 * mi as f64;
        let lx = left + pw + 20.0;
        let _ = writeln!(s, r#"<path d="M{lx},{ly} h24" stroke="{color}" stroke-width="2"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{metric}</text>"#, lx + 30.0, ly + 4.0);
    }
    s.push_str("</svg>\n");
    s
}

fn shade(v: f64) -> String {
    let t = (v / 100.0).clamp(0.0, 1.0);
    let mix = |lo: f64, hi: f64| (lo + (hi - lo) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(255.0, 8.0), mix(255.0, 48.0), mix(255.0, 107.0))
}

/// Heatmap of the 11 x 11 grid: rows are grouping metrics, columns tested
/// metrics. Cells without tested developers are hatched.
pub fn rq2_svg(cells: &[HeatmapCell]) -> String {
    let cell = 48.0;
    let (left, top) = (60.0, 40.0);
    let n = Metric::COUNT as f64;
    let (w, h) = (left + n * cell + 20.0, top + n * cell + 40.0);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r##"<defs><pattern id="empty" width="8" height="8" patternUnits="userSpaceOnUse"><path d="M0,8 L8,0" stroke="#999" stroke-width="1"/></pattern></defs>"##
    );
    for m in Metric::ALL {
        let i = m.index() as f64;
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{m}</text>"#, left + (i + 0.5) * cell, top - 8.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{m}</text>"#, left - 8.0, top + (i + 0.5) * cell + 4.0);
    }
    for c in cells {
        let (gx, gy) = (left + c.test_metric.index() as f64 * cell, top + c.group_metric.index() as f64 * cell);
        let (fill, label, class) = match c.pct_developers {
            Some(v) => (shade(v), format!("{v:.0}"), "cell"),
            None => ("url(#empty)".to_owned(), "n/a".to_owned(), "cell empty"),
        };
        let _ = writeln!(
            s,
            r##"<rect class="{class}" x="{gx}" y="{gy}" width="{cell}" height="{cell}" fill="{fill}" stroke="#fff" data-group="{}" data-test="{}" data-value="{}" data-developers="{}"><title>{} grouping, {} tested: {} of {} developers</title></rect>"##,
            c.group_metric,
            c.test_metric,
            pct(c.pct_developers),
            c.n_developers,
            c.group_metric,
            c.test_metric,
            c.n_significant,
            c.n_developers
        );
        let ink = if c.pct_developers.unwrap_or(0.0) > 55.0 { "#fff" } else { "#000" };
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" fill="{ink}">{label}</text>"#,
            gx + cell / 2.0,
            gy + cell / 2.0 + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">tested metric (columns) by grouping metric (rows), % of developers</text>"#,
        left + n * cell / 2.0,
        h - 12.0
    );
    s.push_str("</svg>\n");
    s
}

/// Writes `rq1_acf.*` and/or `rq2_heatmap.*` into `out_dir`.
pub fn write_figures(
    out_dir: &Path,
    rq1: Option<&[Rq1Row]>,
    rq2: Option<&[HeatmapCell]>,
    formats: &[Format],
) -> Result<Vec<PathBuf>, AnalysisError> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    let mut put = |name: &str, body: String| -> Result<(), AnalysisError> {
        let path = out_dir.join(name);
        std::fs::write(&path, body)?;
        written.push(path);
        Ok(())
    };
    for f in formats {
        match f {
            Format::Csv => {
                if let Some(r) = rq1 {
                    put("rq1_acf.csv", rq1_csv(r))?;
                }
                if let Some(c) = rq2 {
                    put("rq2_heatmap.csv", rq2_csv(c))?;
                }
            }
            Format::Svg => {
                if let Some(r) = rq1 {
                    put("rq1_acf.svg", rq1_svg(r))?;
                }
                if let Some(c) = rq2 {
                    put("rq2_heatmap.svg", rq2_svg(c))?;
                }
            }
        }
    }
    Ok(written)
}
