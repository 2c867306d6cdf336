//! Minimal static SVG line charts rendered from the CSV data. The certificates
//! live in the CSV; plots are a convenience view.

use std::fmt::Write;

pub struct Series<'a> {
    pub name: &'a str,
    pub points: Vec<(f64, f64)>,
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 56.0;
const COLORS: [&str; 6] = ["#1f6feb", "#d73a49", "#2da44e", "#bf8700", "#8250df", "#57606a"];

/// Renders one or more series as polylines with axes and a small legend.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for s in series {
        for &(x, y) in &s.points {
            if x.is_finite() && y.is_finite() {
                xs.push(x);
                ys.push(y);
            }
        }
    }
    let (x0, x1) = bounds(&xs);
    let (y0, y1) = bounds(&ys);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0).max(1e-300) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y - y0) / (y1 - y0).max(1e-300) * (H - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n\
         <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">{}</text>\n",
        W / 2.0,
        escape(title)
    );
    // axes
    let _ = write!(
        svg,
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"#333\"/>\n\
         <line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"#333\"/>\n\
         <text x=\"{cx}\" y=\"{ly}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{xl}</text>\n\
         <text x=\"16\" y=\"{cy}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 {cy})\">{yl}</text>\n",
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN,
        t = MARGIN,
        cx = W / 2.0,
        ly = H - 14.0,
        cy = H / 2.0,
        xl = escape(x_label),
        yl = escape(y_label)
    );
    // tick labels at the corners
    let _ = write!(
        svg,
        "<text x=\"{m}\" y=\"{by}\" font-family=\"sans-serif\" font-size=\"10\">{x0:.4}</text>\n\
         <text x=\"{r}\" y=\"{by}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">{x1:.4}</text>\n\
         <text x=\"{lx}\" y=\"{b}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">{y0:.4}</text>\n\
         <text x=\"{lx}\" y=\"{t}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">{y1:.4}</text>\n",
        m = MARGIN,
        by = H - MARGIN + 14.0,
        r = W - MARGIN,
        lx = MARGIN - 6.0,
        b = H - MARGIN,
        t = MARGIN + 4.0,
    );
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut path = String::new();
        for &(x, y) in &s.points {
            if !x.is_finite() || !y.is_finite() {
                continue;
            }
            let _ = write!(path, "{:.2},{:.2} ", sx(x), sy(y));
        }
        let _ = write!(
            svg,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\" points=\"{}\"/>\n",
            path.trim_end()
        );
        for &(x, y) in &s.points {
            if x.is_finite() && y.is_finite() {
                let _ = write!(
                    svg,
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.6\" fill=\"{color}\"/>\n",
                    sx(x),
                    sy(y)
                );
            }
        }
        let _ = write!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" fill=\"{color}\">{}</text>\n",
            W - MARGIN + 4.0 - 120.0,
            MARGIN + 16.0 * i as f64 + 4.0,
            escape(s.name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn bounds(vals: &[f64]) -> (f64, f64) {
    if vals.is_empty() {
        return (0.0, 1.0);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in vals {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo == hi {
        lo -= 0.5;
        hi += 0.5;
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
