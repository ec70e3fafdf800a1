//! Static SVG line plots.

use std::fmt::Write;

use hetero_sis::Trajectory;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 60.0;

pub struct Series<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub values: &'a [f64],
}

/// Plots every series against `t` on shared linear axes.
pub fn line_plot(title: &str, t: &[f64], series: &[Series]) -> Result<String, String> {
    if t.len() < 2 {
        return Err("need at least two points to plot".into());
    }
    let finite = |v: &&f64| v.is_finite();
    let (t_lo, t_hi) = bounds(t.iter().filter(finite).copied()).ok_or("no finite times")?;
    let (y_lo, y_hi) =
        bounds(series.iter().flat_map(|s| s.values.iter().filter(finite).copied())).ok_or("no finite values")?;
    let y_lo = y_lo.min(0.0);
    let span_t = if t_hi > t_lo { t_hi - t_lo } else { 1.0 };
    let span_y = if y_hi > y_lo { y_hi - y_lo } else { 1.0 };
    let x = |v: f64| MARGIN + (v - t_lo) / span_t * (WIDTH - 2.0 * MARGIN);
    let y = |v: f64| HEIGHT - MARGIN - (v - y_lo) / span_y * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let w = &mut svg;
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(w, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));
    let _ = writeln!(
        w,
        r#"<path d="M{m} {top} V{b} H{r}" fill="none" stroke="black"/>"#,
        m = MARGIN,
        top = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    for k in 0..=4 {
        let tv = t_lo + span_t * k as f64 / 4.0;
        let yv = y_lo + span_y * k as f64 / 4.0;
        let _ = writeln!(
            w,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            x(tv),
            HEIGHT - MARGIN + 18.0,
            tick(tv)
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            MARGIN - 6.0,
            y(yv) + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(w, r#"<text x="{}" y="{}" text-anchor="middle">t</text>"#, WIDTH / 2.0, HEIGHT - 16.0);

    for (n, s) in series.iter().enumerate() {
        let points: Vec<String> = t
            .iter()
            .zip(s.values)
            .filter(|(a, b)| a.is_finite() && b.is_finite())
            .map(|(&a, &b)| format!("{:.2},{:.2}", x(a), y(b)))
            .collect();
        let _ = writeln!(
            w,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            points.join(" "),
            s.color
        );
        let ly = MARGIN + 16.0 * n as f64;
        let lx = WIDTH - MARGIN - 80.0;
        let _ = writeln!(
            w,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 20.0,
            s.color,
            lx + 26.0,
            ly + 4.0,
            escape(s.label)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn trajectory_plot(title: &str, traj: &Trajectory) -> Result<String, String> {
    line_plot(
        title,
        &traj.times,
        &[
            Series {
                label: "S",
                color: "#1f77b4",
                values: &traj.s,
            },
            Series {
                label: "I",
                color: "#d62728",
                values: &traj.i,
            },
        ],
    )
}

fn bounds(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values.fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.1e}")
    } else {
        format!("{}", (v * 100.0).round() / 100.0)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_one_polyline_per_series() {
        let mut traj = Trajectory::default();
        for k in 0..5 {
            let t = k as f64;
            traj.push(t, 10.0 - t, t, 0.0, 0.0, 1.0, 1.0);
        }
        let svg = trajectory_plot("S & I", &traj).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("S &amp; I"));
    }

    #[test]
    fn too_short_is_an_error() {
        assert!(line_plot("x", &[0.0], &[]).is_err());
    }
}
