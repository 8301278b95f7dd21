//! Hand-rolled SVG emission for complex-plane curves.
//!
//! One polyline for the curve, one crosshair marking the origin — the
//! winding picture. No external plotting machinery; the output is
//! deterministic byte-for-byte.

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

/// Plot a closed-or-open curve of complex samples `(re, im)`.
pub fn curve_svg(points: &[(f64, f64)], title: &str) -> String {
    // bounds always include the origin so the crosshair is in frame
    let mut lo_x = 0.0f64;
    let mut hi_x = 0.0f64;
    let mut lo_y = 0.0f64;
    let mut hi_y = 0.0f64;
    for &(x, y) in points {
        lo_x = lo_x.min(x);
        hi_x = hi_x.max(x);
        lo_y = lo_y.min(y);
        hi_y = hi_y.max(y);
    }
    let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-9);
    let pad = 0.08 * span;
    lo_x -= pad;
    hi_x += pad;
    lo_y -= pad;
    hi_y += pad;
    let scale = (SIZE - 2.0 * MARGIN) / (hi_x - lo_x).max(hi_y - lo_y);
    let map = |x: f64, y: f64| {
        (
            MARGIN + (x - lo_x) * scale,
            // image y grows downward
            SIZE - MARGIN - (y - lo_y) * scale,
        )
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    out.push_str(&format!(
        "<title>{}</title>\n<rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>\n",
        xml_escape(title)
    ));

    // origin crosshair
    let (ox, oy) = map(0.0, 0.0);
    out.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#999\" stroke-width=\"1\"/>\n",
        ox - 12.0, oy, ox + 12.0, oy
    ));
    out.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#999\" stroke-width=\"1\"/>\n",
        ox, oy - 12.0, ox, oy + 12.0
    ));
    out.push_str(&format!(
        "<circle cx=\"{ox:.2}\" cy=\"{oy:.2}\" r=\"3\" fill=\"none\" stroke=\"#999\"/>\n"
    ));

    let coords: Vec<String> = points
        .iter()
        .map(|&(x, y)| {
            let (px, py) = map(x, y);
            format!("{px:.2},{py:.2}")
        })
        .collect();
    out.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\"/>\n",
        coords.join(" ")
    ));
    // mark the starting sample
    if let Some(&(x, y)) = points.first() {
        let (px, py) = map(x, y);
        out.push_str(&format!(
            "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"3\" fill=\"#1f4e9c\"/>\n"
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emits_polyline_and_crosshair() {
        let pts: Vec<(f64, f64)> = (0..32)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / 32.0;
                (2.0 + t.cos(), t.sin())
            })
            .collect();
        let svg = curve_svg(&pts, "unit circle about 2");
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<polyline"));
        assert_eq!(svg.matches("<line").count(), 2);
        // deterministic
        assert_eq!(svg, curve_svg(&pts, "unit circle about 2"));
    }

    #[test]
    fn degenerate_curve_does_not_blow_up() {
        let svg = curve_svg(&[(0.0, 0.0), (0.0, 0.0)], "point");
        assert!(svg.contains("<polyline"));
    }
}
