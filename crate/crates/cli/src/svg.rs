//! Static SVG rendering for CV- and mean-excess plots.
//!
//! Layout follows the usual diagnostic style: a solid polyline for the
//! statistic, a dashed horizontal reference line, and dotted polylines for
//! the pointwise confidence band.

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 72.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 42.0;
const MARGIN_B: f64 = 56.0;

pub struct PlotSpec<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    /// Solid series, in x order.
    pub series: Vec<(f64, f64)>,
    /// Dotted band edges, same x positions as `series`.
    pub band_low: Option<Vec<(f64, f64)>>,
    pub band_high: Option<Vec<(f64, f64)>>,
    /// Dashed horizontal reference.
    pub reference: Option<f64>,
}

pub fn render(spec: &PlotSpec) -> String {
    let mut xs: Vec<f64> = spec.series.iter().map(|p| p.0).collect();
    let mut ys: Vec<f64> = spec.series.iter().map(|p| p.1).collect();
    for band in [&spec.band_low, &spec.band_high].into_iter().flatten() {
        xs.extend(band.iter().map(|p| p.0));
        ys.extend(band.iter().map(|p| p.1));
    }
    if let Some(r) = spec.reference {
        ys.push(r);
    }
    let (x0, x1) = padded_range(&xs);
    let (y0, y1) = padded_range(&ys);

    let to_px = |x: f64, y: f64| -> (f64, f64) {
        let px = MARGIN_L + (x - x0) / (x1 - x0) * (WIDTH - MARGIN_L - MARGIN_R);
        let py = HEIGHT - MARGIN_B - (y - y0) / (y1 - y0) * (HEIGHT - MARGIN_T - MARGIN_B);
        (px, py)
    };

    let mut svg = String::with_capacity(16 * 1024);
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" \
         text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        escape(spec.title)
    ));

    // Axes.
    let (ax0, ay0) = (MARGIN_L, HEIGHT - MARGIN_B);
    svg.push_str(&format!(
        "<line x1=\"{ax0:.1}\" y1=\"{ay0:.1}\" x2=\"{:.1}\" y2=\"{ay0:.1}\" stroke=\"black\"/>\n",
        WIDTH - MARGIN_R
    ));
    svg.push_str(&format!(
        "<line x1=\"{ax0:.1}\" y1=\"{ay0:.1}\" x2=\"{ax0:.1}\" y2=\"{MARGIN_T:.1}\" stroke=\"black\"/>\n"
    ));

    // Ticks and labels.
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = x0 + f * (x1 - x0);
        let (px, _) = to_px(xv, y0);
        svg.push_str(&format!(
            "<line x1=\"{px:.1}\" y1=\"{ay0:.1}\" x2=\"{px:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
            ay0 + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{px:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"middle\">{}</text>\n",
            ay0 + 18.0,
            tick_label(xv)
        ));
        let yv = y0 + f * (y1 - y0);
        let (_, py) = to_px(x0, yv);
        svg.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{py:.1}\" x2=\"{ax0:.1}\" y2=\"{py:.1}\" stroke=\"black\"/>\n",
            ax0 - 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"end\">{}</text>\n",
            ax0 - 8.0,
            py + 4.0,
            tick_label(yv)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\">{}</text>\n",
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        HEIGHT - 14.0,
        escape(spec.x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\" transform=\"rotate(-90 18 {:.1})\">{}</text>\n",
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        escape(spec.y_label)
    ));

    // Reference line (dashed).
    if let Some(r) = spec.reference {
        let (_, py) = to_px(x0, r);
        svg.push_str(&format!(
            "<line x1=\"{ax0:.1}\" y1=\"{py:.2}\" x2=\"{:.1}\" y2=\"{py:.2}\" \
             stroke=\"black\" stroke-dasharray=\"8 5\"/>\n",
            WIDTH - MARGIN_R
        ));
    }

    // Band polylines (dotted).
    for band in [&spec.band_low, &spec.band_high].into_iter().flatten() {
        svg.push_str(&polyline(band, &to_px, "stroke-dasharray=\"2 4\""));
    }

    // Main series (solid).
    svg.push_str(&polyline(&spec.series, &to_px, ""));

    svg.push_str("</svg>\n");
    svg
}

fn polyline(points: &[(f64, f64)], to_px: &impl Fn(f64, f64) -> (f64, f64), extra: &str) -> String {
    let coords: Vec<String> = points
        .iter()
        .map(|&(x, y)| {
            let (px, py) = to_px(x, y);
            format!("{px:.2},{py:.2}")
        })
        .collect();
    format!(
        "<polyline fill=\"none\" stroke=\"black\" {extra} points=\"{}\"/>\n",
        coords.join(" ")
    )
}

fn padded_range(values: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-300 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.04 * (hi - lo);
    (lo - pad, hi + pad)
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if (0.001..10_000.0).contains(&a) {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{v:.3e}")
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
