//! Deterministic serialisation: CSV tables, JSON documents and SVG plots.
//!
//! Floats are printed with 17 significant digits so that every value
//! round-trips exactly. Files are written to a temporary sibling and renamed
//! into place.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::periodic::PeriodicOrbit;
use crate::solver::{Snapshot, TimeSeries};

/// Formats a float with 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Minimal CSV builder with a fixed header.
#[derive(Debug, Clone)]
pub struct CsvTable {
    buf: String,
    columns: usize,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = header.join(",");
        buf.push('\n');
        CsvTable {
            buf,
            columns: header.len(),
        }
    }

    pub fn push_row<S: AsRef<str>>(&mut self, cells: &[S]) {
        debug_assert_eq!(cells.len(), self.columns);
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            self.buf.push_str(c.as_ref());
        }
        self.buf.push('\n');
    }

    pub fn push_floats(&mut self, cells: &[f64]) {
        debug_assert_eq!(cells.len(), self.columns);
        for (i, &c) in cells.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            let _ = write!(self.buf, "{c:.16e}");
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

pub fn timeseries_csv(series: &TimeSeries) -> String {
    let mut t = CsvTable::new(&["t", "g", "h", "sup_u", "sup_v"]);
    for i in 0..series.len() {
        t.push_floats(&[
            series.t[i],
            series.g[i],
            series.h[i],
            series.sup_u[i],
            series.sup_v[i],
        ]);
    }
    t.finish()
}

pub fn snapshots_csv(snapshots: &[Snapshot]) -> String {
    let mut t = CsvTable::new(&["t", "x", "u", "v"]);
    for s in snapshots {
        for i in 0..s.u.len() {
            t.push_floats(&[s.t, s.x(i), s.u[i], s.v[i]]);
        }
    }
    t.finish()
}

pub fn orbit_csv(orbit: &PeriodicOrbit) -> String {
    if orbit.is_homogeneous() {
        let mut t = CsvTable::new(&["t", "U", "V"]);
        for (j, &tj) in orbit.t.iter().enumerate() {
            t.push_floats(&[tj, orbit.u[j][0], orbit.v[j][0]]);
        }
        t.finish()
    } else {
        let mut t = CsvTable::new(&["t", "x", "U", "V"]);
        for (j, &tj) in orbit.t.iter().enumerate() {
            for (i, &x) in orbit.x.iter().enumerate() {
                t.push_floats(&[tj, x, orbit.u[j][i], orbit.v[j][i]]);
            }
        }
        t.finish()
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })?;
    Ok(())
}

/// Anchor colours of the heat map, evenly spaced from low to high.
const ANCHORS: [(u8, u8, u8); 9] = [
    (68, 1, 84),
    (71, 44, 122),
    (59, 81, 139),
    (44, 113, 142),
    (33, 144, 141),
    (39, 173, 129),
    (92, 200, 99),
    (170, 220, 50),
    (253, 231, 37),
];

/// The fixed 256-entry colour table.
pub fn colormap() -> [(u8, u8, u8); 256] {
    let mut out = [(0, 0, 0); 256];
    let segments = (ANCHORS.len() - 1) as f64;
    for (k, slot) in out.iter_mut().enumerate() {
        let s = k as f64 / 255.0 * segments;
        let i = (s.floor() as usize).min(ANCHORS.len() - 2);
        let w = s - i as f64;
        let mix = |a: u8, b: u8| (a as f64 * (1.0 - w) + b as f64 * w).round() as u8;
        let (a, b) = (ANCHORS[i], ANCHORS[i + 1]);
        *slot = (mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2));
    }
    out
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

fn svg_open(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = WIDTH,
        h = HEIGHT
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn axes(s: &mut String, x_label: &str, y_label: &str, x_range: (f64, f64), y_range: (f64, f64)) {
    let (x0, y0, x1, y1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
    let _ = writeln!(
        s,
        r#"<polyline points="{x0},{y1} {x0},{y0} {x1},{y0}" fill="none" stroke="black"/>"#
    );
    let label = |v: f64| format!("{v:.3}");
    let _ = writeln!(
        s,
        r#"<text x="{x0}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
        y0 + 15.0,
        label(x_range.0)
    );
    let _ = writeln!(
        s,
        r#"<text x="{x1}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
        y0 + 15.0,
        label(x_range.1)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        y0 + 35.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{y0}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
        x0 - 4.0,
        label(y_range.0)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
        x0 - 4.0,
        y1 + 10.0,
        label(y_range.1)
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 15 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
}

/// Raster heat map of `u` over `(t, x)` built from snapshots.
pub fn svg_heatmap(snapshots: &[Snapshot], title: &str) -> String {
    const ROWS: usize = 100;
    let mut s = svg_open(title);
    if snapshots.is_empty() {
        s.push_str("</svg>\n");
        return s;
    }
    let x_max = snapshots
        .iter()
        .fold(0.0f64, |a, sn| a.max(sn.h.abs()).max(sn.g.abs()));
    let u_max = snapshots
        .iter()
        .flat_map(|sn| sn.u.iter())
        .fold(0.0f64, |a, &b| a.max(b));
    let t0 = snapshots[0].t;
    let t1 = snapshots[snapshots.len() - 1].t;
    let cmap = colormap();
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let cell_w = plot_w / snapshots.len() as f64;
    let cell_h = plot_h / ROWS as f64;
    s.push_str("<g shape-rendering=\"crispEdges\">\n");
    for (j, sn) in snapshots.iter().enumerate() {
        for r in 0..ROWS {
            let x = x_max - (r as f64 + 0.5) / ROWS as f64 * 2.0 * x_max;
            let val = sn.u_at(x);
            let k = if u_max > 0.0 {
                ((val / u_max) * 255.0).round().clamp(0.0, 255.0) as usize
            } else {
                0
            };
            let (cr, cg, cb) = cmap[k];
            let _ = writeln!(
                s,
                r##"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="#{cr:02x}{cg:02x}{cb:02x}"/>"##,
                MARGIN + j as f64 * cell_w,
                MARGIN + r as f64 * cell_h,
                cell_w + 0.05,
                cell_h + 0.05
            );
        }
    }
    s.push_str("</g>\n");
    axes(&mut s, "t", "x", (t0, t1), (-x_max, x_max));
    s.push_str("</svg>\n");
    s
}

/// Polyline plot of the fronts `g(t)` and `h(t)`.
pub fn svg_fronts(series: &TimeSeries, title: &str) -> String {
    const MAX_POINTS: usize = 2000;
    let mut s = svg_open(title);
    if series.is_empty() {
        s.push_str("</svg>\n");
        return s;
    }
    let n = series.len();
    let stride = n.div_ceil(MAX_POINTS).max(1);
    let mut idx: Vec<usize> = (0..n).step_by(stride).collect();
    if *idx.last().unwrap() != n - 1 {
        idx.push(n - 1);
    }
    let t0 = series.t[0];
    let t1 = series.t[n - 1].max(t0 + f64::MIN_POSITIVE);
    let y_max = idx
        .iter()
        .fold(0.0f64, |a, &i| {
            a.max(series.h[i].abs()).max(series.g[i].abs())
        })
        .max(f64::MIN_POSITIVE);
    let px = |t: f64| MARGIN + (t - t0) / (t1 - t0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT / 2.0 - y / y_max * (HEIGHT / 2.0 - MARGIN);
    for (data, colour) in [(&series.h, "#c0392b"), (&series.g, "#2c3e50")] {
        let mut pts = String::new();
        for &i in &idx {
            let _ = write!(pts, "{:.3},{:.3} ", px(series.t[i]), py(data[i]));
        }
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
            pts.trim_end()
        );
    }
    axes(&mut s, "t", "g(t), h(t)", (t0, t1), (-y_max, y_max));
    s.push_str("</svg>\n");
    s
}
