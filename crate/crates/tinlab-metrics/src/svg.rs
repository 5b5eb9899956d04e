//! Tiny static SVG line chart of cumulative return paths.

use std::collections::BTreeMap;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Render one polyline per strategy. Returns a complete standalone SVG
/// document; callers just write it to disk.
pub fn cumulative_return_svg(curves: &BTreeMap<String, Vec<f64>>) -> String {
    let mut points = 0usize;
    let mut lo = 0.0f64;
    let mut hi = 0.0f64;
    for curve in curves.values() {
        points = points.max(curve.len());
        for &v in curve {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if hi - lo < 1e-9 {
        hi = lo + 1e-9;
    }
    let x_of = |i: usize| {
        MARGIN + (WIDTH - 2.0 * MARGIN) * i as f64 / (points.max(2) - 1) as f64
    };
    let y_of = |v: f64| HEIGHT - MARGIN - (HEIGHT - 2.0 * MARGIN) * (v - lo) / (hi - lo);

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" font-family=\"monospace\" font-size=\"14\">cumulative sum of daily returns</text>\n",
        MARGIN
    );
    // axes
    svg.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"#999\"/>\n\
         <line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"#999\"/>\n",
        m = MARGIN,
        r = WIDTH - MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN
    ));
    if lo < 0.0 && hi > 0.0 {
        let y0 = y_of(0.0);
        svg.push_str(&format!(
            "<line x1=\"{m}\" y1=\"{y0}\" x2=\"{r}\" y2=\"{y0}\" stroke=\"#ccc\" stroke-dasharray=\"4 4\"/>\n",
            m = MARGIN,
            r = WIDTH - MARGIN
        ));
    }
    for (idx, (name, curve)) in curves.iter().enumerate() {
        if curve.is_empty() {
            continue;
        }
        let color = COLORS[idx % COLORS.len()];
        let path: Vec<String> = curve
            .iter()
            .enumerate()
            .map(|(i, &v)| format!("{:.2},{:.2}", x_of(i), y_of(v)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            path.join(" ")
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" fill=\"{color}\">{name}</text>\n",
            WIDTH - MARGIN + 4.0 - 120.0,
            MARGIN + 16.0 * (idx as f64 + 1.0)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_contains_one_polyline_per_strategy() {
        let mut curves = BTreeMap::new();
        curves.insert("a".to_string(), vec![0.0, 0.01, 0.03]);
        curves.insert("b".to_string(), vec![0.0, -0.02, 0.01]);
        let svg = cumulative_return_svg(&curves);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
