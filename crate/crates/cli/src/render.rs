//! Text emitters: PGM heightmaps, SVG contour plots and CSV tables.

use std::fmt::Write as _;

use lgl_core::analysis::ExperimentReport;
use lgl_core::geodesy::Polyline;
use lgl_core::stacker::{GridField, LevelCurve};

/// Plain decimal with `digits` significant digits (no exponent).
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let mut exp = v.abs().log10().floor() as i32;
    // rounding can carry into the next decade
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), v).parse().unwrap_or(v);
    if rounded != 0.0 {
        exp = rounded.abs().log10().floor() as i32;
    }
    let decimals = (digits as i32 - 1 - exp).clamp(0, 340) as usize;
    format!("{:.*}", decimals, v)
}

/// ASCII PGM (`P2`, maxval 65535), top row first, `u ∈ [0, 2]` mapped linearly.
pub fn pgm(field: &GridField) -> String {
    let (w, h) = (field.width(), field.height());
    let mut s = String::with_capacity(w * h * 6 + 32);
    let _ = write!(s, "P2\n{w} {h}\n65535\n");
    for j in (0..h).rev() {
        for i in 0..w {
            let u = field.value(i, j).clamp(0.0, 2.0);
            let v = (u / 2.0 * 65535.0).round() as u32;
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{v}");
        }
        s.push('\n');
    }
    s
}

fn coord(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// SVG 1.1 with one path per level curve, gray by level, y pointing up.
pub fn svg(curves: &[LevelCurve]) -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"800\" \
         viewBox=\"-1.05 -1.05 2.1 2.1\">\n",
    );
    s.push_str("<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"0.003\">\n");
    s.push_str("<circle cx=\"0\" cy=\"0\" r=\"1\" stroke=\"#000000\"/>\n");
    for c in curves {
        let g = (c.level() / 2.0 * 255.0).round().clamp(0.0, 255.0) as u8;
        let mut d = String::new();
        for (k, p) in c.points().iter().enumerate() {
            let _ = write!(d, "{}{},{}", if k == 0 { "M" } else { " L" }, coord(p.x), coord(p.y));
        }
        let _ = writeln!(
            s,
            "<path data-level=\"{}\" stroke=\"#{g:02x}{g:02x}{g:02x}\" d=\"{d}\"/>",
            fmt_sig(c.level(), 9)
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// `level,x,y` rows for every vertex of every curve.
pub fn curves_csv(curves: &[LevelCurve]) -> String {
    let mut s = String::from("level,x,y\n");
    for c in curves {
        let level = fmt_sig(c.level(), 9);
        for p in c.points() {
            let _ = writeln!(s, "{level},{},{}", fmt_sig(p.x, 9), fmt_sig(p.y, 9));
        }
    }
    s
}

/// `x,y` rows for a single path.
pub fn path_csv(path: &Polyline) -> String {
    let mut s = String::from("x,y\n");
    for p in path.vertices() {
        let _ = writeln!(s, "{},{}", fmt_sig(p.x, 9), fmt_sig(p.y, 9));
    }
    s
}

pub fn report_csv(report: &ExperimentReport) -> String {
    let mut s = String::from("label,value,expected,tolerance,pass\n");
    for q in &report.quantities {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            q.label,
            fmt_sig(q.value, 9),
            fmt_sig(q.expected, 9),
            fmt_sig(q.tolerance, 9),
            q.pass
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(2.0f64.sqrt(), 9), "1.41421356");
        assert_eq!(fmt_sig(5f64.sqrt(), 17), "2.2360679774997898");
        assert_eq!(fmt_sig(0.000123456789123, 9), "0.000123456789");
        assert_eq!(fmt_sig(123456.0, 9), "123456.000");
        assert_eq!(fmt_sig(9.9999999999, 9), "10.0000000");
        assert_eq!(fmt_sig(-0.5, 9), "-0.500000000");
        assert_eq!(fmt_sig(0.0, 9), "0");
    }

    #[test]
    fn pgm_layout() {
        let mut f = GridField::new(8);
        for j in 0..8 {
            for i in 0..8 {
                f.set(i, j, if j == 7 { 2.0 } else { 0.0 });
            }
        }
        let text = pgm(&f);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "P2");
        assert_eq!(lines[1], "8 8");
        assert_eq!(lines[2], "65535");
        assert_eq!(lines.len(), 11);
        assert!(lines[3].split(' ').all(|v| v == "65535"));
        assert!(lines[4].split(' ').all(|v| v == "0"));
        assert!(!text.contains('\r'));
    }
}
