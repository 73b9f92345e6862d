//! Static SVG renderings of heatmaps and CCDF curves.

use std::fmt::Write as _;

use crate::joint::{CcdfCurves, ConditionalHeatmap, Curve, JointHistogram};

const CELL: f64 = 20.0;
const MARGIN: f64 = 50.0;

fn header(w: f64, h: f64, title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(s, r#"<title>{}</title>"#, escape(title));
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn rgb(r: f64, g: f64, b: f64) -> String {
    let c = |x: f64| (x.clamp(0.0, 1.0) * 255.0).round() as u8;
    format!("#{:02x}{:02x}{:02x}", c(r), c(g), c(b))
}

/// White to dark violet on `t ∈ [0, 1]`.
fn sequential(t: f64) -> String {
    rgb(1.0 - 0.7 * t, 1.0 - 0.95 * t, 1.0 - 0.45 * t)
}

/// Blue for -1, white for 0, red for +1.
fn diverging(v: f64) -> String {
    if v >= 0.0 {
        rgb(1.0, 1.0 - v, 1.0 - v)
    } else {
        rgb(1.0 + v, 1.0 + v, 1.0)
    }
}

/// Cells are drawn with row bucket `i` on the x axis and column bucket `j`
/// increasing upwards; `None` cells are hatched grey.
fn grid(cells: &[Vec<Option<String>>], title: &str, labels: &[f64]) -> String {
    let nb = cells.len();
    let side = nb as f64 * CELL;
    let mut s = header(side + 2.0 * MARGIN, side + 2.0 * MARGIN, title);
    for (i, row) in cells.iter().enumerate() {
        for (j, fill) in row.iter().enumerate() {
            let x = MARGIN + i as f64 * CELL;
            let y = MARGIN + (nb - 1 - j) as f64 * CELL;
            let fill = fill.as_deref().unwrap_or("#dddddd");
            let _ = writeln!(
                s,
                r#"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill}"/>"#
            );
        }
    }
    for (i, b) in labels.iter().enumerate().step_by(4) {
        let x = MARGIN + (i as f64 + 0.5) * CELL;
        let y = MARGIN + side + 14.0;
        let _ = writeln!(s, r#"<text x="{x}" y="{y}" text-anchor="middle">{b:.0}</text>"#);
        let y = MARGIN + side - (i as f64 + 0.5) * CELL + 3.0;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{y}" text-anchor="end">{b:.0}</text>"#,
            MARGIN - 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">deg(u)</text>"#,
        MARGIN + side / 2.0,
        MARGIN + side + 32.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="30" text-anchor="middle">{}</text>"#,
        MARGIN + side / 2.0,
        escape(title)
    );
    s.push_str("</svg>\n");
    s
}

/// Joint probabilities on a logarithmic colour scale.
pub fn joint_heatmap_svg(joint: &JointHistogram) -> String {
    let probs = joint.probs();
    let positive = probs.iter().flatten().copied().filter(|&p| p > 0.0);
    let lo = positive.clone().fold(f64::INFINITY, f64::min).ln();
    let hi = positive.fold(0.0, f64::max).ln();
    let cells: Vec<Vec<Option<String>>> = probs
        .iter()
        .map(|row| {
            row.iter()
                .map(|&p| {
                    Some(if p > 0.0 {
                        let t = if hi > lo { (p.ln() - lo) / (hi - lo) } else { 1.0 };
                        sequential(0.1 + 0.9 * t)
                    } else {
                        "#ffffff".to_string()
                    })
                })
                .collect()
        })
        .collect();
    grid(
        &cells,
        "joint degree distribution (log scale)",
        &joint.scheme.lower_bounds(),
    )
}

/// Change values on a diverging scale.
pub fn conditional_heatmap_svg(heat: &ConditionalHeatmap) -> String {
    let cells: Vec<Vec<Option<String>>> = heat
        .change
        .iter()
        .map(|row| row.iter().map(|c| c.map(diverging)).collect())
        .collect();
    grid(&cells, "conditional change", &heat.scheme.lower_bounds())
}

/// Log-log plot of the node, edge and conditional CCDFs.
pub fn ccdf_svg(curves: &CcdfCurves) -> String {
    let (w, h) = (480.0, 360.0);
    let mut s = header(w, h, "degree ccdf");
    let mut named: Vec<(String, &Curve, &str)> = vec![
        ("node".into(), &curves.node, "#000000"),
        ("edge".into(), &curves.edge, "#555555"),
    ];
    let palette = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e"];
    for (c, color) in curves.conditional.iter().zip(palette) {
        if let Some(curve) = &c.curve {
            named.push((format!("B{}", c.bucket), curve, color));
        }
    }
    let pts = || {
        named
            .iter()
            .flat_map(|(_, c, _)| c.iter())
            .filter(|p| p.0 > 0 && p.1 > 0.0)
    };
    let xmax = pts().map(|p| p.0 as f64).fold(1.0, f64::max).log10().max(1.0);
    let ymin = pts().map(|p| p.1).fold(1.0, f64::min).log10().min(-1.0);
    let px = |x: f64| MARGIN + x.log10() / xmax * (w - 2.0 * MARGIN);
    let py = |y: f64| MARGIN + y.log10() / ymin * (h - 2.0 * MARGIN);
    let _ = writeln!(
        s,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="#999999"/>"##,
        w - 2.0 * MARGIN,
        h - 2.0 * MARGIN
    );
    for (k, (name, curve, color)) in named.iter().enumerate() {
        let path: Vec<String> = curve
            .iter()
            .filter(|p| p.0 > 0 && p.1 > 0.0)
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x as f64), py(y)))
            .collect();
        if !path.is_empty() {
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                path.join(" ")
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{name}</text>"#,
            w - MARGIN + 4.0,
            MARGIN + 12.0 * k as f64 + 10.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">degree x (log)</text>"#,
        w / 2.0,
        h - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="12" y="{}" transform="rotate(-90 12 {})" text-anchor="middle">P[X &gt;= x] (log)</text>"#,
        h / 2.0,
        h / 2.0
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::joint::{conditional_change_heatmap, degree_ccdf_curves, joint_degree_histogram, BucketScheme};

    #[test]
    fn renders_wellformed_documents() {
        let g = build_graph([(0, 1), (1, 2), (2, 0), (2, 3)]).graph;
        let s = BucketScheme::for_graph(&g, 21).unwrap();
        let j = joint_degree_histogram(&g, &s).unwrap();
        for doc in [
            joint_heatmap_svg(&j),
            conditional_heatmap_svg(&conditional_change_heatmap(&j)),
            ccdf_svg(&degree_ccdf_curves(&g, &s).unwrap()),
        ] {
            assert!(doc.starts_with("<svg"));
            assert!(doc.trim_end().ends_with("</svg>"));
            assert_eq!(doc.matches("<svg").count(), 1);
        }
    }

    #[test]
    fn diverging_endpoints() {
        assert_eq!(diverging(1.0), "#ff0000");
        assert_eq!(diverging(-1.0), "#0000ff");
        assert_eq!(diverging(0.0), "#ffffff");
    }
}
