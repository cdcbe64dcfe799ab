//! Minimal deterministic SVG charts.
//!
//! These are plain string builders: no system fonts are measured, no
//! timestamps or random ids are embedded, so the same inputs always
//! produce byte-identical files.

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

fn fmt(v: f64) -> String {
    // Fixed notation keeps the output stable and diffable.
    format!("{v:.2}")
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Canvas {
    body: String,
}

impl Canvas {
    fn new(title: &str) -> Self {
        let mut body = String::new();
        body.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n"
        ));
        body.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        body.push_str(&format!(
            "<text x=\"{}\" y=\"28\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
            fmt(WIDTH / 2.0),
            escape(title)
        ));
        Canvas { body }
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, width: f64) {
        self.body.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>\n",
            fmt(x1), fmt(y1), fmt(x2), fmt(y2)
        ));
    }

    fn polyline(&mut self, points: &[(f64, f64)], stroke: &str) {
        let pts: Vec<String> = points
            .iter()
            .map(|(x, y)| format!("{},{}", fmt(*x), fmt(*y)))
            .collect();
        self.body.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"2\"/>\n",
            pts.join(" ")
        ));
    }

    fn circle(&mut self, x: f64, y: f64, r: f64, fill: &str) {
        self.body.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{r}\" fill=\"{fill}\"/>\n",
            fmt(x),
            fmt(y)
        ));
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        self.body.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\"/>\n",
            fmt(x),
            fmt(y),
            fmt(w),
            fmt(h)
        ));
    }

    fn text(&mut self, x: f64, y: f64, size: f64, anchor: &str, content: &str) {
        self.body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"{size}\" text-anchor=\"{anchor}\">{}</text>\n",
            fmt(x),
            fmt(y),
            escape(content)
        ));
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn plot_area() -> (f64, f64, f64, f64) {
    (
        MARGIN_LEFT,
        MARGIN_TOP,
        WIDTH - MARGIN_RIGHT,
        HEIGHT - MARGIN_BOTTOM,
    )
}

fn nice_range(lo: f64, hi: f64) -> (f64, f64) {
    if (hi - lo).abs() < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = (hi - lo) * 0.05;
        (lo - pad, hi + pad)
    }
}

fn axes(canvas: &mut Canvas, x_label: &str, y_label: &str, x_range: (f64, f64), y_range: (f64, f64)) {
    let (left, top, right, bottom) = plot_area();
    canvas.line(left, bottom, right, bottom, "#333333", 1.0);
    canvas.line(left, top, left, bottom, "#333333", 1.0);
    canvas.text(
        (left + right) / 2.0,
        bottom + 40.0,
        12.0,
        "middle",
        x_label,
    );
    canvas.text(left - 52.0, (top + bottom) / 2.0, 12.0, "middle", y_label);
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let xv = x_range.0 + t * (x_range.1 - x_range.0);
        let yv = y_range.0 + t * (y_range.1 - y_range.0);
        let x = left + t * (right - left);
        let y = bottom - t * (bottom - top);
        canvas.line(x, bottom, x, bottom + 4.0, "#333333", 1.0);
        canvas.text(x, bottom + 18.0, 10.0, "middle", &format!("{xv:.3}"));
        canvas.line(left - 4.0, y, left, y, "#333333", 1.0);
        canvas.text(left - 8.0, y + 3.0, 10.0, "end", &format!("{yv:.3}"));
    }
}

/// Multi-series line chart: one polyline with point markers per series,
/// legend on the right.
pub fn line_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(String, Vec<(f64, f64)>)],
) -> String {
    let mut canvas = Canvas::new(title);
    let points: Vec<(f64, f64)> = series.iter().flat_map(|(_, p)| p.iter().copied()).collect();
    if points.is_empty() {
        return canvas.finish();
    }
    let x_range = nice_range(
        points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min),
        points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max),
    );
    let y_lo = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let y_hi = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let y_range = nice_range(y_lo.min(0.0), y_hi);
    axes(&mut canvas, x_label, y_label, x_range, y_range);

    let (left, top, right, bottom) = plot_area();
    let to_px = |(x, y): (f64, f64)| {
        (
            left + (x - x_range.0) / (x_range.1 - x_range.0) * (right - left),
            bottom - (y - y_range.0) / (y_range.1 - y_range.0) * (bottom - top),
        )
    };
    for (i, (name, pts)) in series.iter().enumerate() {
        let px: Vec<(f64, f64)> = pts.iter().map(|&p| to_px(p)).collect();
        canvas.polyline(&px, color(i));
        for &(x, y) in &px {
            canvas.circle(x, y, 2.5, color(i));
        }
        let ly = top + 14.0 * i as f64;
        canvas.rect(right + 10.0, ly - 7.0, 10.0, 10.0, color(i));
        canvas.text(right + 24.0, ly + 2.0, 10.0, "start", name);
    }
    canvas.finish()
}

/// Horizontal bar chart with value labels.
pub fn bar_chart(title: &str, x_label: &str, labels: &[String], values: &[f64]) -> String {
    let mut canvas = Canvas::new(title);
    if labels.is_empty() || labels.len() != values.len() {
        return canvas.finish();
    }
    let (left, top, right, bottom) = plot_area();
    let max = values.iter().copied().fold(0.0_f64, f64::max).max(1e-12);
    let slot = (bottom - top) / labels.len() as f64;
    for (i, (label, &value)) in labels.iter().zip(values).enumerate() {
        let y = top + slot * i as f64 + slot * 0.15;
        let h = slot * 0.7;
        let w = (value / max) * (right - left);
        canvas.rect(left, y, w.max(0.0), h, color(i));
        canvas.text(left - 8.0, y + h / 2.0 + 3.0, 10.0, "end", label);
        canvas.text(
            left + w.max(0.0) + 4.0,
            y + h / 2.0 + 3.0,
            10.0,
            "start",
            &format!("{value:.4}"),
        );
    }
    canvas.line(left, top, left, bottom, "#333333", 1.0);
    canvas.text((left + right) / 2.0, bottom + 40.0, 12.0, "middle", x_label);
    canvas.finish()
}

/// Before/after slope chart: one line per metric from the left column to
/// the right column.
pub fn slope_chart(
    title: &str,
    left_label: &str,
    right_label: &str,
    metrics: &[(String, f64, f64)],
) -> String {
    let mut canvas = Canvas::new(title);
    if metrics.is_empty() {
        return canvas.finish();
    }
    let (left, top, right, bottom) = plot_area();
    let values: Vec<f64> = metrics.iter().flat_map(|m| [m.1, m.2]).collect();
    let range = nice_range(
        values.iter().copied().fold(f64::INFINITY, f64::min),
        values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    let x0 = left + (right - left) * 0.25;
    let x1 = left + (right - left) * 0.75;
    let to_y = |v: f64| bottom - (v - range.0) / (range.1 - range.0) * (bottom - top);
    canvas.text(x0, bottom + 18.0, 11.0, "middle", left_label);
    canvas.text(x1, bottom + 18.0, 11.0, "middle", right_label);
    for (i, (name, before, after)) in metrics.iter().enumerate() {
        let (ya, yb) = (to_y(*before), to_y(*after));
        canvas.line(x0, ya, x1, yb, color(i), 2.0);
        canvas.circle(x0, ya, 3.0, color(i));
        canvas.circle(x1, yb, 3.0, color(i));
        canvas.text(x1 + 12.0, yb + 3.0, 10.0, "start", &format!("{name} ({after:.3})"));
        canvas.text(x0 - 12.0, ya + 3.0, 10.0, "end", &format!("{before:.3}"));
    }
    canvas.finish()
}
