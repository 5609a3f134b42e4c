// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

use std::collections::HashSet;
use std::fmt::Write;
use std::path::Path;

use metaglyph::geometry::{bbox, Contour, Point, Rect};

use crate::build::GlyphSet;
use crate::ufo::user_name_to_file_name;
use crate::write::write_atomic;
use crate::Result;

/// Colours of the debug overlay.
pub const DEFAULT_STYLE: &str = ".outline{fill:#000}\
.stroke{fill:none;stroke:#1e6fd9;stroke-width:1}\
.handle{stroke:#2e9e44;stroke-width:1}\
.control{fill:#2e9e44}\
.knot{fill:#d7263d}";

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Frame {
    /// The viewBox is the bounding box of the drawing.
    BBox,
    /// The viewBox spans the advance and the em from descender to
    /// ascender; the baseline sits `ascent` below the top.
    Metrics { advance: f64, ascent: f64, descent: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SvgOptions {
    pub frame: Frame,
    /// Adds knots, control handles and stroke centre lines.
    pub debug: bool,
    /// Replaces [`DEFAULT_STYLE`] in debug output.
    pub style: Option<String>,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            frame: Frame::BBox,
            debug: false,
            style: None,
        }
    }
}

/// Formats with at most three decimals, no trailing zeros and no `-0`.
fn num(v: f64) -> String {
    let mut s = format!("{v:.3}");
    if s.contains('.') {
        s.truncate(s.trim_end_matches('0').trim_end_matches('.').len());
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn pt(out: &mut String, p: Point) {
    let _ = write!(out, "{} {}", num(p.x), num(p.y));
}

/// Absolute `M`/`L`/`C`/`Z` path data for `outline`, with every point
/// passed through `map`. A closing line back to the start is written as a
/// bare `Z`.
pub fn path_data(outline: &[Contour], map: impl Fn(Point) -> Point) -> String {
    let mut out = String::new();
    for c in outline {
        let segs = c.segments();
        let Some(first) = segs.first() else { continue };
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str("M ");
        pt(&mut out, map(first.p0));
        for (i, s) in segs.iter().enumerate() {
            let last = i + 1 == segs.len();
            if s.is_line() {
                if last && c.is_closed() {
                    break;
                }
                out.push_str(" L ");
                pt(&mut out, map(s.p1));
            } else {
                out.push_str(" C ");
                pt(&mut out, map(s.c0));
                out.push(' ');
                pt(&mut out, map(s.c1));
                out.push(' ');
                pt(&mut out, map(s.p1));
            }
        }
        if c.is_closed() {
            out.push_str(" Z");
        }
    }
    out
}

/// A standalone SVG document for one glyph.
pub fn glyph_svg(outline: &[Contour], strokes: &[Contour], options: &SvgOptions) -> String {
    let (width, height, map): (f64, f64, Box<dyn Fn(Point) -> Point>) = match options.frame {
        Frame::BBox => {
            let r = bbox(outline)
                .or_else(|_| bbox(strokes))
                .unwrap_or(Rect {
                    x_min: 0.0,
                    y_min: 0.0,
                    x_max: 0.0,
                    y_max: 0.0,
                });
            (
                r.width(),
                r.height(),
                Box::new(move |p: Point| Point::new(p.x - r.x_min, r.y_max - p.y)),
            )
        }
        Frame::Metrics {
            advance,
            ascent,
            descent,
        } => (
            advance,
            ascent + descent,
            Box::new(move |p: Point| Point::new(p.x, ascent - p.y)),
        ),
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" width="{w}" height="{h}">"#,
        w = num(width),
        h = num(height)
    );
    if options.debug {
        let style = options.style.as_deref().unwrap_or(DEFAULT_STYLE);
        let _ = writeln!(out, "<style>{}</style>", escape(style));
    }
    let _ = writeln!(out, r#"<path class="outline" d="{}"/>"#, path_data(outline, &map));
    if options.debug {
        debug_overlay(&mut out, outline, strokes, width.max(height), &map);
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn debug_overlay(out: &mut String, outline: &[Contour], strokes: &[Contour], size: f64, map: &dyn Fn(Point) -> Point) {
    let r = num((size / 150.0).max(0.5));
    out.push_str("<g class=\"debug\">\n");
    for s in strokes {
        let _ = writeln!(out, r#"<path class="stroke" d="{}"/>"#, path_data(std::slice::from_ref(s), map));
    }
    for c in outline.iter().chain(strokes) {
        for s in c.segments() {
            if s.is_line() {
                continue;
            }
            for (a, b) in [(s.p0, s.c0), (s.p1, s.c1)] {
                let (a, b) = (map(a), map(b));
                let _ = writeln!(
                    out,
                    r#"<line class="handle" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                    num(a.x),
                    num(a.y),
                    num(b.x),
                    num(b.y)
                );
            }
            for p in [s.c0, s.c1] {
                let p = map(p);
                let _ = writeln!(out, r#"<circle class="control" cx="{}" cy="{}" r="{r}"/>"#, num(p.x), num(p.y));
            }
        }
        for p in c.nodes() {
            let p = map(p);
            let _ = writeln!(out, r#"<circle class="knot" cx="{}" cy="{}" r="{r}"/>"#, num(p.x), num(p.y));
        }
    }
    out.push_str("</g>\n");
}

/// Writes `<glyph>.svg` for every glyph of `set` into `dir`, in the metrics
/// frame of the set's configuration. `style` replaces [`DEFAULT_STYLE`].
pub fn write_svg(set: &GlyphSet, dir: &Path, debug: bool, style: Option<&str>) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| crate::Error::io(dir, e))?;
    let mut taken = HashSet::new();
    for g in &set.glyphs {
        let options = SvgOptions {
            frame: Frame::Metrics {
                advance: g.advance,
                ascent: set.config.ascent,
                descent: set.config.descent,
            },
            debug,
            style: style.map(str::to_string),
        };
        let file = user_name_to_file_name(&g.name, &taken, "", ".svg");
        taken.insert(file.to_lowercase());
        write_atomic(&dir.join(&file), glyph_svg(&g.outline, &g.strokes, &options).as_bytes())?;
    }
    Ok(())
}
