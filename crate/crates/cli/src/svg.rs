//! Standalone SVG plots: shaded similarity matrices, trend scatters, and
//! stacked feature trails.

use trackline_core::corpus::{SimilarityMatrix, TrendFit};

/// SVG pixels per feature unit in stacked-trail plots; an offset of 0.5
/// separates trails by 0.5 of this.
pub const PX_PER_UNIT: f64 = 100.0;

const CELL: f64 = 64.0;
const MARGIN: f64 = 70.0;

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(width: f64, height: f64) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">\n"
    )
}

/// One shaded, labeled square per matrix cell; smaller distances are
/// brighter, the zero diagonal is white.
pub fn heatmap(matrix: &SimilarityMatrix, title: &str) -> String {
    let n = matrix.len();
    let side = MARGIN + n as f64 * CELL + 20.0;
    let mut out = header(side, side);
    out.push_str(&format!(
        "<text x=\"{:.0}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n",
        MARGIN,
        escape(title)
    ));
    let max = matrix
        .d
        .iter()
        .flatten()
        .fold(0.0f64, |m, &v| m.max(v));
    for (i, label) in matrix.labels.iter().enumerate() {
        let y = MARGIN + i as f64 * CELL + CELL / 2.0;
        out.push_str(&format!(
            "<text x=\"{:.0}\" y=\"{y:.0}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n",
            MARGIN - 6.0,
            escape(label)
        ));
        let x = MARGIN + i as f64 * CELL + CELL / 2.0;
        out.push_str(&format!(
            "<text x=\"{x:.0}\" y=\"{:.0}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n",
            MARGIN - 6.0,
            escape(label)
        ));
    }
    for i in 0..n {
        for j in 0..n {
            let d = matrix.d[i][j];
            let shade = if max > 0.0 { d / max } else { 0.0 };
            let level = (255.0 - shade * 215.0).round() as u8;
            let x = MARGIN + j as f64 * CELL;
            let y = MARGIN + i as f64 * CELL;
            out.push_str(&format!(
                "<rect x=\"{x:.0}\" y=\"{y:.0}\" width=\"{CELL:.0}\" height=\"{CELL:.0}\" fill=\"rgb({level},{level},{level})\" stroke=\"black\" stroke-width=\"0.5\"/>\n"
            ));
            let text_fill = if level < 110 { "white" } else { "black" };
            out.push_str(&format!(
                "<text x=\"{:.0}\" y=\"{:.0}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\" fill=\"{text_fill}\">{d:.4}</text>\n",
                x + CELL / 2.0,
                y + CELL / 2.0 + 3.0
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Year-vs-value scatter with the fitted line; one circle per song.
pub fn scatter(points: &[(f64, f64)], fit: &TrendFit, title: &str) -> String {
    let (width, height) = (640.0, 440.0);
    let (left, right, top, bottom) = (60.0, 20.0, 40.0, 40.0);
    let (x_lo, x_hi) = bounds(points.iter().map(|p| p.0));
    let (y_lo, y_hi) = bounds(points.iter().map(|p| p.1));
    let to_x = |x: f64| left + (x - x_lo) / (x_hi - x_lo).max(1e-12) * (width - left - right);
    let to_y = |y: f64| height - bottom - (y - y_lo) / (y_hi - y_lo).max(1e-12) * (height - top - bottom);
    let mut out = header(width, height);
    out.push_str(&format!(
        "<text x=\"{left:.0}\" y=\"22\" font-family=\"sans-serif\" font-size=\"13\">{} (slope {:.4e}, r {:.3}, p {:.3e}, r2 {:.3})</text>\n",
        escape(title),
        fit.slope,
        fit.r,
        fit.p,
        fit.r2
    ));
    out.push_str(&format!(
        "<line x1=\"{left:.0}\" y1=\"{:.0}\" x2=\"{:.0}\" y2=\"{:.0}\" stroke=\"black\"/>\n",
        height - bottom,
        width - right,
        height - bottom
    ));
    out.push_str(&format!(
        "<line x1=\"{left:.0}\" y1=\"{top:.0}\" x2=\"{left:.0}\" y2=\"{:.0}\" stroke=\"black\"/>\n",
        height - bottom
    ));
    for &(x, y) in points {
        out.push_str(&format!(
            "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3\" fill=\"dimgray\"/>\n",
            to_x(x),
            to_y(y)
        ));
    }
    let fit_y = |x: f64| fit.intercept + fit.slope * x;
    out.push_str(&format!(
        "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"crimson\" stroke-width=\"1.5\"/>\n",
        to_x(x_lo),
        to_y(fit_y(x_lo).clamp(y_lo, y_hi)),
        to_x(x_hi),
        to_y(fit_y(x_hi).clamp(y_lo, y_hi))
    ));
    out.push_str("</svg>\n");
    out
}

/// Several per-year series sharing one plot, each lifted by `index * offset`
/// feature units; one circle per point.
pub fn stacked_trails(series: &[(String, Vec<(f64, f64)>)], offset: f64) -> String {
    let (width, left, right, top, bottom) = (640.0, 60.0, 20.0, 40.0, 40.0);
    let max_lift = offset * series.len().saturating_sub(1) as f64;
    let height = top + bottom + (1.0 + max_lift) * PX_PER_UNIT;
    let (x_lo, x_hi) = bounds(series.iter().flat_map(|(_, pts)| pts.iter().map(|p| p.0)));
    let to_x = |x: f64| left + (x - x_lo) / (x_hi - x_lo).max(1e-12) * (width - left - right);
    let to_y = |v: f64| height - bottom - v * PX_PER_UNIT;
    let mut out = header(width, height);
    for (idx, (name, points)) in series.iter().enumerate() {
        let lift = idx as f64 * offset;
        out.push_str(&format!(
            "<text x=\"{:.0}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
            4.0,
            to_y(lift + 0.5),
            escape(name)
        ));
        let mut path = String::new();
        for (k, &(x, v)) in points.iter().enumerate() {
            let (px, py) = (to_x(x), to_y(v + lift));
            path.push_str(&format!("{}{px:.1},{py:.1}", if k == 0 { "M" } else { " L" }));
            out.push_str(&format!(
                "<circle cx=\"{px:.1}\" cy=\"{py:.1}\" r=\"2.5\" fill=\"dimgray\" data-trail=\"{idx}\"/>\n"
            ));
        }
        out.push_str(&format!(
            "<path d=\"{path}\" fill=\"none\" stroke=\"dimgray\" stroke-width=\"0.8\"/>\n"
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}
