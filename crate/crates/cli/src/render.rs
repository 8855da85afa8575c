use std::fmt::Write;
use std::ops::RangeInclusive;

use qlat::equivalence::{SubstitutionRule, TileWord};
use qlat::geometry::{bigrid_times, GeometricSpec, QuasilatticePoints, Tile};
use qlat::{Error, QuadraticNumber as Q};

const WIDTH: f64 = 1000.0;
const MARGIN: f64 = 40.0;
const COLOR_S: &str = "#1f77b4";
const COLOR_L: &str = "#d62728";

fn c(x: f64) -> String {
    format!("{x:.6}")
}

fn color(t: Tile) -> &'static str {
    match t {
        Tile::S => COLOR_S,
        Tile::L => COLOR_L,
    }
}

/// Affine map of `[lo, hi]` onto the drawable width.
struct Scale {
    lo: f64,
    k: f64,
}

impl Scale {
    fn new(lo: f64, hi: f64) -> Self {
        let span = if hi > lo { hi - lo } else { 1.0 };
        Scale { lo, k: (WIDTH - 2.0 * MARGIN) / span }
    }

    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.lo) * self.k
    }
}

fn open(height: f64, title: &str) -> String {
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        c(WIDTH),
        c(height),
        c(WIDTH),
        c(height)
    )
    .unwrap();
    writeln!(s, "<title>{title}</title>").unwrap();
    s
}

fn close(mut s: String) -> String {
    s.push_str("</svg>\n");
    s
}

fn line(s: &mut String, class: &str, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, width: f64) {
    writeln!(
        s,
        r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="{}"/>"#,
        c(x1),
        c(y1),
        c(x2),
        c(y2),
        c(width)
    )
    .unwrap();
}

fn text(s: &mut String, class: &str, x: f64, y: f64, fill: &str, body: &str) {
    writeln!(
        s,
        r#"<text class="{class}" x="{}" y="{}" fill="{fill}" font-size="12" text-anchor="middle">{body}</text>"#,
        c(x),
        c(y)
    )
    .unwrap();
}

/// One tick per point and one colored, labelled gap per tile.
pub fn ticks(pts: &QuasilatticePoints) -> qlat::Result<String> {
    if pts.points.is_empty() {
        return Err(Error::EmptyPayload);
    }
    let xs: Vec<f64> = pts.points.iter().map(|p| p.x.to_f64()).collect();
    let sc = Scale::new(xs[0], xs[xs.len() - 1]);
    let y = 40.0;
    let mut s = open(80.0, "quasilattice");
    for (i, t) in pts.word.iter().enumerate() {
        line(&mut s, "gap", sc.x(xs[i]), y, sc.x(xs[i + 1]), y, color(*t), 3.0);
    }
    for x in &xs {
        line(&mut s, "tick", sc.x(*x), y - 10.0, sc.x(*x), y + 10.0, "#000000", 1.0);
    }
    for (i, t) in pts.word.iter().enumerate() {
        let mid = (sc.x(xs[i]) + sc.x(xs[i + 1])) / 2.0;
        text(&mut s, "gap-label", mid, y - 14.0, color(*t), &t.as_char().to_string());
    }
    Ok(close(s))
}

/// The two periodic trains of grid crossing times on the line.
pub fn bigrid(spec: &GeometricSpec, window: RangeInclusive<i64>) -> qlat::Result<String> {
    let times = bigrid_times(spec, window)?;
    if times.is_empty() {
        return Err(Error::EmptyPayload);
    }
    let ts: Vec<f64> = times.iter().map(|g| g.t.to_f64()).collect();
    let sc = Scale::new(ts[0], ts[ts.len() - 1]);
    let rows = [(1u8, 30.0, COLOR_S), (2u8, 70.0, COLOR_L)];
    let mut s = open(100.0, "bi-grid");
    for (family, y, col) in rows {
        line(&mut s, "axis", MARGIN, y, WIDTH - MARGIN, y, "#999999", 0.5);
        for (g, t) in times.iter().zip(&ts) {
            if g.family == family {
                line(&mut s, &format!("grid{family}"), sc.x(*t), y - 8.0, sc.x(*t), y + 8.0, col, 1.0);
            }
        }
    }
    Ok(close(s))
}

fn len(t: Tile, short: &Q, long: &Q) -> f64 {
    match t {
        Tile::S => short.to_f64(),
        Tile::L => long.to_f64(),
    }
}

fn word_len(w: &TileWord, short: &Q, long: &Q) -> f64 {
    let (s, l) = w.doubled_counts();
    (s as f64 * short.to_f64() + l as f64 * long.to_f64()) / 2.0
}

/// Each primed prototile above its decoration; half tiles end without a
/// circle, full-tile ends carry open circles.
pub fn rule(case: &str, rule: &SubstitutionRule, short: &Q, long: &Q) -> qlat::Result<String> {
    let rows = [(Tile::S, &rule.word_s), (Tile::L, &rule.word_l)];
    let longest = rows.iter().map(|(_, w)| word_len(w, short, long)).fold(0.0, f64::max);
    if longest <= 0.0 {
        return Err(Error::EmptyPayload);
    }
    let sc = Scale::new(0.0, longest);
    let mut s = open(200.0, &format!("substitution rule {case}"));
    for (i, (primed, word)) in rows.iter().enumerate() {
        let top = 40.0 + 90.0 * i as f64;
        let bottom = top + 40.0;
        let total = word_len(word, short, long);
        text(&mut s, "prototile-label", MARGIN / 2.0, top + 4.0, color(*primed), &format!("{}'", primed.as_char()));
        line(&mut s, "prototile", sc.x(0.0), top, sc.x(total), top, color(*primed), 6.0);
        let mut pieces: Vec<(Tile, f64, bool)> = Vec::new();
        if let Some(h) = word.left_half {
            pieces.push((h, len(h, short, long) / 2.0, true));
        }
        for &t in &word.letters {
            pieces.push((t, len(t, short, long), false));
        }
        if let Some(h) = word.right_half {
            pieces.push((h, len(h, short, long) / 2.0, true));
        }
        let mut x = 0.0;
        let mut circles = Vec::new();
        for (k, (t, l, half)) in pieces.iter().enumerate() {
            line(&mut s, if *half { "half-tile" } else { "tile" }, sc.x(x), bottom, sc.x(x + l), bottom, color(*t), 4.0);
            let label = if *half { format!("{}/2", t.as_char()) } else { t.as_char().to_string() };
            text(&mut s, "tile-label", sc.x(x + l / 2.0), bottom - 8.0, color(*t), &label);
            let at_start = k == 0 && word.left_half.is_none();
            if at_start {
                circles.push(x);
            }
            x += l;
            let at_end = k + 1 == pieces.len() && word.right_half.is_some();
            if !at_end {
                circles.push(x);
            }
        }
        for cx in circles {
            writeln!(
                s,
                r##"<circle class="point" cx="{}" cy="{}" r="{}" fill="#ffffff" stroke="#000000" stroke-width="1.000000"/>"##,
                c(sc.x(cx)),
                c(bottom),
                c(4.0)
            )
            .unwrap();
        }
    }
    Ok(close(s))
}
