//! Minimal line plot of a sweep result, one polyline per series.

use std::fmt::Write;

use dirac_visc::sweep::{SweepResult, SweepRow};

const W: f64 = 640.0;
const H: f64 = 400.0;
const M: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// x is Ω for dynamic quantities and E otherwise; everything else keys the series.
fn split(r: &SweepResult) -> (&'static str, Vec<(String, Vec<(f64, f64)>)>) {
    let dynamic = r.header.config.quantity.is_dynamic();
    let key = |row: &SweepRow| {
        if dynamic {
            format!("A={} B={} E={}", row.disorder_a, row.b_field, row.energy)
        } else {
            format!("A={} B={}", row.disorder_a, row.b_field)
        }
    };
    let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for row in &r.rows {
        let k = key(row);
        let x = if dynamic { row.omega } else { row.energy };
        match series.iter_mut().find(|(name, _)| *name == k) {
            Some((_, pts)) => pts.push((x, row.value)),
            None => series.push((k, vec![(x, row.value)])),
        }
    }
    (if dynamic { "omega (eV)" } else { "energy (eV)" }, series)
}

pub fn render(r: &SweepResult) -> String {
    let (xlabel, series) = split(r);
    let finite = series.iter().flat_map(|(_, p)| p.iter()).filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in finite {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x0.is_finite() && y0.is_finite()) {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    let px = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let py = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(s, r#"<rect x="{M}" y="{M}" width="{}" height="{}" fill="none" stroke="black"/>"#, W - 2.0 * M, H - 2.0 * M);
    let _ = writeln!(s, r#"<text x="{M}" y="{}">{x0:.4}</text>"#, H - M + 15.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{x1:.4}</text>"#, W - M, H - M + 15.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{xlabel}</text>"#, W / 2.0, H - 10.0);
    let _ = writeln!(s, r#"<text x="5" y="{}">{y0:.4e}</text>"#, H - M);
    let _ = writeln!(s, r#"<text x="5" y="{}">{y1:.4e}</text>"#, M - 5.0);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, W / 2.0, r.header.config.quantity.value_label());
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        // NaN points break the line.
        let mut seg = Vec::new();
        let flush = |seg: &mut Vec<String>, s: &mut String| {
            if seg.len() > 1 {
                let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" points="{}"/>"#, seg.join(" "));
            }
            seg.clear();
        };
        for &(x, y) in pts {
            if x.is_finite() && y.is_finite() {
                seg.push(format!("{:.2},{:.2}", px(x), py(y)));
            } else {
                flush(&mut seg, &mut s);
            }
        }
        flush(&mut seg, &mut s);
        let _ = writeln!(s, r#"<text x="{}" y="{}" fill="{color}">{name}</text>"#, W - M - 150.0, M + 15.0 + 14.0 * i as f64);
    }
    s.push_str("</svg>\n");
    s
}
