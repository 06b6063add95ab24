use std::fmt::Write;

use super::report::Report;

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;

/// Identification probability against rank for the fused system and the
/// three single matchers.
pub fn render_cmc_svg(report: &Report) -> String {
    let n = report.n_subjects.max(1);
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let y_lo = [&report.fused, &report.euclidean, &report.mahalanobis, &report.empirical]
        .iter()
        .map(|s| s.rank1_rate)
        .fold(1.0f64, f64::min);
    let y_lo = ((y_lo * 10.0).floor() / 10.0).clamp(0.0, 0.9);
    let sx = |r: usize| {
        if n == 1 {
            LEFT
        } else {
            LEFT + pw * (r - 1) as f64 / (n - 1) as f64
        }
    };
    let sy = |p: f64| TOP + ph * (1.0 - (p - y_lo) / (1.0 - y_lo));

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{LEFT},{TOP} V{} H{}" stroke="black" fill="none"/>"#,
        TOP + ph,
        LEFT + pw
    );
    for i in 0..=5 {
        let p = y_lo + (1.0 - y_lo) * i as f64 / 5.0;
        let y = sy(p);
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{y:.1}" x2="{LEFT}" y2="{y:.1}" stroke="black"/><text x="{}" y="{:.1}" text-anchor="end">{p:.2}</text>"#,
            LEFT - 4.0,
            LEFT - 6.0,
            y + 4.0
        );
    }
    let ticks = [1, n.div_ceil(4), n.div_ceil(2), (3 * n).div_ceil(4), n];
    let mut last = 0;
    for r in ticks {
        if r == last {
            continue;
        }
        last = r;
        let x = sx(r);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.1}" y1="{}" x2="{x:.1}" y2="{}" stroke="black"/><text x="{x:.1}" y="{}" text-anchor="middle">{r}</text>"#,
            TOP + ph,
            TOP + ph + 4.0,
            TOP + ph + 18.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">Rank</text>"#,
        LEFT + pw / 2.0,
        H - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(16,{}) rotate(-90)" text-anchor="middle">Identification probability</text>"#,
        TOP + ph / 2.0
    );

    let curves = [
        ("Fused (SVM)", &report.fused, "#d62728"),
        ("Euclidean", &report.euclidean, "#1f77b4"),
        ("Mahalanobis", &report.mahalanobis, "#2ca02c"),
        ("Empirical rule", &report.empirical, "#9467bd"),
    ];
    for (i, (name, summary, color)) in curves.iter().enumerate() {
        let pts: Vec<String> = summary
            .cmc
            .probabilities
            .iter()
            .enumerate()
            .map(|(k, &p)| format!("{:.1},{:.1}", sx(k + 1), sy(p)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" stroke="{color}" stroke-width="2" fill="none"/>"#,
            pts.join(" ")
        );
        let ly = TOP + 20.0 + 20.0 * i as f64;
        let lx = LEFT + pw + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{name}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}
