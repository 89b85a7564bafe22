//! Minimal SVG renderings: line charts and heatmaps, no dependencies.
//! Cosmetic output only; CSV files carry the quantitative results.

use std::fmt::Write as _;

const WIDTH: f64 = 840.0;
const HEIGHT: f64 = 560.0;
const MARGIN_L: f64 = 72.0;
const MARGIN_R: f64 = 160.0;
const MARGIN_T: f64 = 48.0;
const MARGIN_B: f64 = 56.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
];

/// One named polyline.
pub struct Series<'a> {
    pub name: String,
    pub points: &'a [(f64, f64)],
}

fn bounds(series: &[Series]) -> (f64, f64, f64, f64) {
    let mut x0 = f64::INFINITY;
    let mut x1 = f64::NEG_INFINITY;
    let mut y0 = f64::INFINITY;
    let mut y1 = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in s.points {
            if x.is_finite() && y.is_finite() {
                x0 = x0.min(x);
                x1 = x1.max(x);
                y0 = y0.min(y);
                y1 = y1.max(y);
            }
        }
    }
    if !x0.is_finite() || x1 <= x0 {
        (x0, x0 + 1.0, y0, y0 + 1.0)
    } else if y1 <= y0 {
        (x0, x1, y0 - 0.5, y0 + 0.5)
    } else {
        (x0, x1, y0, y1)
    }
}

fn svg_open(title: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        out,
        r##"<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>
<text x="{x}" y="28" font-family="sans-serif" font-size="16" text-anchor="middle">{title}</text>"##,
        x = WIDTH / 2.0,
        title = xml_escape(title),
    );
    out
}

fn axes(out: &mut String, xlabel: &str, ylabel: &str, x0: f64, x1: f64, y0: f64, y1: f64) {
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let _ = writeln!(
        out,
        r##"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#333"/>"##
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = x0 + f * (x1 - x0);
        let yv = y0 + f * (y1 - y0);
        let px = MARGIN_L + f * plot_w;
        let py = HEIGHT - MARGIN_B - f * plot_h;
        let _ = writeln!(
            out,
            r##"<line x1="{px}" y1="{}" x2="{px}" y2="{}" stroke="#ccc"/>
<text x="{px}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"##,
            MARGIN_T,
            HEIGHT - MARGIN_B,
            HEIGHT - MARGIN_B + 16.0,
            tick_label(xv),
        );
        let _ = writeln!(
            out,
            r##"<line x1="{MARGIN_L}" y1="{py}" x2="{}" y2="{py}" stroke="#ccc"/>
<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"##,
            WIDTH - MARGIN_R,
            MARGIN_L - 6.0,
            py + 4.0,
            tick_label(yv),
        );
    }
    let _ = writeln!(
        out,
        r##"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>
<text x="18" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"##,
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 12.0,
        xml_escape(xlabel),
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0,
        xml_escape(ylabel),
    );
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 0.01 && v.abs() < 10000.0 {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Multi-series line chart.
pub fn line_chart(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let (x0, x1, y0, y1) = bounds(series);
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let mut out = svg_open(title);
    axes(&mut out, xlabel, ylabel, x0, x1, y0, y1);
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| {
                let px = MARGIN_L + (x - x0) / (x1 - x0) * plot_w;
                let py = HEIGHT - MARGIN_B - (y - y0) / (y1 - y0) * plot_h;
                format!("{px:.2},{py:.2}")
            })
            .collect();
        if !path.is_empty() {
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.6"/>"#,
                path.join(" ")
            );
        }
        let ly = MARGIN_T + 16.0 + 18.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="3"/>
<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
            WIDTH - MARGIN_R + 10.0,
            WIDTH - MARGIN_R + 34.0,
            WIDTH - MARGIN_R + 40.0,
            ly + 4.0,
            xml_escape(&s.name),
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Five-stop dark-blue-to-yellow colormap.
fn colormap(f: f64) -> String {
    const STOPS: [(f64, f64, f64); 5] = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    let f = f.clamp(0.0, 1.0) * (STOPS.len() - 1) as f64;
    let i = (f.floor() as usize).min(STOPS.len() - 2);
    let t = f - i as f64;
    let lerp = |a: f64, b: f64| (a + t * (b - a)).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        lerp(STOPS[i].0, STOPS[i + 1].0),
        lerp(STOPS[i].1, STOPS[i + 1].1),
        lerp(STOPS[i].2, STOPS[i + 1].2)
    )
}

/// Heatmap of `values[ix * ny + iy]` over the two grids; `None` cells (failed
/// runs) are drawn grey, never interpolated.
pub fn heatmap(
    title: &str,
    xlabel: &str,
    ylabel: &str,
    xs: &[f64],
    ys: &[f64],
    values: &[Option<f64>],
) -> String {
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values.iter().flatten() {
        lo = lo.min(*v);
        hi = hi.max(*v);
    }
    if !lo.is_finite() || hi <= lo {
        hi = lo + 1.0;
    }

    let mut out = svg_open(title);
    let cell_w = plot_w / xs.len() as f64;
    let cell_h = plot_h / ys.len() as f64;
    for (ix, _) in xs.iter().enumerate() {
        for (iy, _) in ys.iter().enumerate() {
            let v = values[ix * ys.len() + iy];
            let color = match v {
                Some(v) => colormap((v - lo) / (hi - lo)),
                None => "#999999".into(),
            };
            let px = MARGIN_L + ix as f64 * cell_w;
            let py = HEIGHT - MARGIN_B - (iy + 1) as f64 * cell_h;
            let _ = writeln!(
                out,
                r#"<rect x="{px:.2}" y="{py:.2}" width="{:.2}" height="{:.2}" fill="{color}"/>"#,
                cell_w + 0.5,
                cell_h + 0.5,
            );
        }
    }
    axes(
        &mut out,
        xlabel,
        ylabel,
        xs[0],
        *xs.last().unwrap(),
        ys[0],
        *ys.last().unwrap(),
    );
    // Colorbar.
    let bar_x = WIDTH - MARGIN_R + 24.0;
    for i in 0..64 {
        let f = i as f64 / 63.0;
        let y = HEIGHT - MARGIN_B - (f * plot_h);
        let _ = writeln!(
            out,
            r#"<rect x="{bar_x}" y="{:.2}" width="18" height="{:.2}" fill="{}"/>"#,
            y - plot_h / 63.0,
            plot_h / 63.0 + 0.5,
            colormap(f),
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{x}" y="{}" font-family="sans-serif" font-size="11">{}</text>
<text x="{x}" y="{}" font-family="sans-serif" font-size="11">{}</text>"#,
        MARGIN_T + 12.0,
        tick_label(hi),
        HEIGHT - MARGIN_B + 4.0,
        tick_label(lo),
        x = bar_x + 24.0,
    );
    out.push_str("</svg>\n");
    out
}
