// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

//! UFO3 output and a small reader for what it writes.

use std::collections::HashSet;
use std::fmt::Write;
use std::path::Path;

use metaglyph::geometry::{normalize_angle_deg, round_half_away, Contour, CubicSegment, Point};

use crate::build::{BuiltGlyph, GlyphSet};
use crate::write::{write_atomic, write_dir_atomic};
use crate::{Error, Result};

/// Naming for one UFO.
#[derive(Clone, Debug, PartialEq)]
pub struct UfoMetadata {
    pub family: String,
    pub style: String,
    /// `major.minor`, e.g. `1.000`.
    pub version: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Plist {
    String(String),
    Integer(i64),
    Real(f64),
    Bool(bool),
    Array(Vec<Plist>),
    Dict(Vec<(String, Plist)>),
}

impl Plist {
    /// Integer when `v` is integral, real otherwise.
    pub fn number(v: f64) -> Plist {
        if v.fract() == 0.0 && v.abs() < 1e15 {
            Plist::Integer(v as i64)
        } else {
            Plist::Real(v)
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Plist::Integer(i) => Some(*i as f64),
            Plist::Real(r) => Some(*r),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Plist::String(s) => Some(s),
            _ => None,
        }
    }

    pub fn get(&self, key: &str) -> Option<&Plist> {
        match self {
            Plist::Dict(items) => items.iter().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }

    fn write(&self, out: &mut String, indent: usize) {
        let pad = "  ".repeat(indent);
        match self {
            Plist::String(s) => {
                let _ = writeln!(out, "{pad}<string>{}</string>", escape(s));
            }
            Plist::Integer(i) => {
                let _ = writeln!(out, "{pad}<integer>{i}</integer>");
            }
            Plist::Real(r) => {
                let _ = writeln!(out, "{pad}<real>{r}</real>");
            }
            Plist::Bool(b) => {
                let _ = writeln!(out, "{pad}<{}/>", if *b { "true" } else { "false" });
            }
            Plist::Array(items) => {
                let _ = writeln!(out, "{pad}<array>");
                for v in items {
                    v.write(out, indent + 1);
                }
                let _ = writeln!(out, "{pad}</array>");
            }
            Plist::Dict(items) => {
                let _ = writeln!(out, "{pad}<dict>");
                for (k, v) in items {
                    let _ = writeln!(out, "{pad}  <key>{}</key>", escape(k));
                    v.write(out, indent + 1);
                }
                let _ = writeln!(out, "{pad}</dict>");
            }
        }
    }

    pub fn to_xml(&self) -> String {
        let mut out = String::from(concat!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
            "<!DOCTYPE plist PUBLIC \"-//Apple//DTD PLIST 1.0//EN\" ",
            "\"http://www.apple.com/DTDs/PropertyList-1.0.dtd\">\n",
            "<plist version=\"1.0\">\n"
        ));
        self.write(&mut out, 0);
        out.push_str("</plist>\n");
        out
    }

    pub fn parse(text: &str) -> Result<Plist, String> {
        let opts = roxmltree::ParsingOptions {
            allow_dtd: true,
            ..Default::default()
        };
        let doc = roxmltree::Document::parse_with_options(text, opts).map_err(|e| e.to_string())?;
        let root = doc.root_element();
        if root.tag_name().name() != "plist" {
            return Err("not a plist".into());
        }
        let value = root
            .children()
            .find(|n| n.is_element())
            .ok_or("empty plist")?;
        parse_value(value)
    }
}

fn parse_value(n: roxmltree::Node) -> Result<Plist, String> {
    let text = || n.text().unwrap_or("").to_string();
    Ok(match n.tag_name().name() {
        "string" => Plist::String(text()),
        "integer" => Plist::Integer(text().trim().parse().map_err(|_| format!("bad integer `{}`", text()))?),
        "real" => Plist::Real(text().trim().parse().map_err(|_| format!("bad real `{}`", text()))?),
        "true" => Plist::Bool(true),
        "false" => Plist::Bool(false),
        "array" => Plist::Array(
            n.children()
                .filter(|c| c.is_element())
                .map(parse_value)
                .collect::<Result<_, _>>()?,
        ),
        "dict" => {
            let mut items = Vec::new();
            let mut children = n.children().filter(|c| c.is_element());
            while let Some(k) = children.next() {
                if k.tag_name().name() != "key" {
                    return Err(format!("expected <key>, found <{}>", k.tag_name().name()));
                }
                let v = children.next().ok_or("key without value")?;
                items.push((k.text().unwrap_or("").to_string(), parse_value(v)?));
            }
            Plist::Dict(items)
        }
        other => return Err(format!("unknown plist element <{other}>")),
    })
}

pub(crate) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

const RESERVED: [&str; 13] = [
    "con", "prn", "aux", "clock$", "nul", "com1", "com2", "com3", "com4", "lpt1", "lpt2", "lpt3", "a:-z:",
];
const MAX_FILE_NAME: usize = 255;

/// File name for a glyph named `name` under the UFO naming rules: illegal
/// characters become `_`, capitals get a trailing `_`, reserved device
/// names get a leading `_`, and a case-insensitive clash with `existing`
/// (lowercased names) gets a numeric suffix.
pub fn user_name_to_file_name(name: &str, existing: &HashSet<String>, prefix: &str, suffix: &str) -> String {
    let mut filtered = String::new();
    for (i, c) in name.chars().enumerate() {
        if (i == 0 && c == '.' && prefix.is_empty()) || c.is_control() || "\"*+/:<>?[\\]|".contains(c) {
            filtered.push('_');
        } else if c.to_lowercase().ne(std::iter::once(c)) {
            filtered.push(c);
            filtered.push('_');
        } else {
            filtered.push(c);
        }
    }
    let room = MAX_FILE_NAME - prefix.len() - suffix.len();
    let filtered: String = filtered.chars().take(room).collect();
    let base = filtered
        .split('.')
        .map(|part| {
            if RESERVED.contains(&part.to_lowercase().as_str()) {
                format!("_{part}")
            } else {
                part.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(".");
    let full = format!("{prefix}{base}{suffix}");
    if !existing.contains(&full.to_lowercase()) {
        return full;
    }
    let room = room.saturating_sub(15);
    let short: String = base.chars().take(room).collect();
    (1u64..)
        .map(|n| format!("{prefix}{short}{n:015}{suffix}"))
        .find(|f| !existing.contains(&f.to_lowercase()))
        .expect("a free name")
}

/// Coordinate as written to a glif: rounded half away from zero.
fn coord(v: f64) -> i64 {
    round_half_away(v) as i64
}

fn is_smooth(incoming: &CubicSegment, outgoing: &CubicSegment) -> bool {
    let a = incoming.end_tangent();
    let b = outgoing.start_tangent();
    if a.length() == 0.0 || b.length() == 0.0 {
        return false;
    }
    normalize_angle_deg(b.angle_deg() - a.angle_deg()).abs() < 1e-3
}

fn point_xml(out: &mut String, p: Point, kind: Option<&str>, smooth: bool) {
    let _ = write!(out, "      <point x=\"{}\" y=\"{}\"", coord(p.x), coord(p.y));
    if let Some(k) = kind {
        let _ = write!(out, " type=\"{k}\"");
    }
    if smooth {
        out.push_str(" smooth=\"yes\"");
    }
    out.push_str("/>\n");
}

fn seg_type(s: &CubicSegment) -> &'static str {
    if s.is_line() {
        "line"
    } else {
        "curve"
    }
}

fn contour_xml(out: &mut String, c: &Contour) {
    let segs = c.segments();
    let Some(first) = segs.first() else { return };
    out.push_str("    <contour>\n");
    let n = segs.len();
    if c.is_closed() {
        let last = &segs[n - 1];
        point_xml(out, first.p0, Some(seg_type(last)), is_smooth(last, first));
    } else {
        point_xml(out, first.p0, Some("move"), false);
    }
    for (i, s) in segs.iter().enumerate() {
        if !s.is_line() {
            point_xml(out, s.c0, None, false);
            point_xml(out, s.c1, None, false);
        }
        let closing = c.is_closed() && i + 1 == n;
        if !closing {
            let smooth = segs.get(i + 1).is_some_and(|next| is_smooth(s, next));
            point_xml(out, s.p1, Some(seg_type(s)), smooth);
        }
    }
    out.push_str("    </contour>\n");
}

/// Glif format 2 text for one glyph.
pub fn glif_xml(g: &BuiltGlyph) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(out, "<glyph name=\"{}\" format=\"2\">", escape(&g.name));
    let _ = writeln!(out, "  <advance width=\"{}\"/>", coord(g.advance));
    if let Some(u) = g.unicode {
        let _ = writeln!(out, "  <unicode hex=\"{u:04X}\"/>");
    }
    out.push_str("  <outline>\n");
    for c in &g.outline {
        contour_xml(&mut out, c);
    }
    out.push_str("  </outline>\n</glyph>\n");
    out
}

fn version_parts(v: &str) -> Result<(i64, i64)> {
    let bad = || Error::Package(format!("version `{v}` is not `major.minor`"));
    let (major, minor) = v.split_once('.').unwrap_or((v, "0"));
    Ok((major.parse().map_err(|_| bad())?, minor.parse().map_err(|_| bad())?))
}

fn fontinfo(set: &GlyphSet, meta: &UfoMetadata) -> Result<Plist> {
    let c = &set.config;
    let (major, minor) = version_parts(&meta.version)?;
    let italic = if c.slant == 0.0 { 0.0 } else { -c.slant };
    Ok(Plist::Dict(vec![
        ("ascender".into(), Plist::number(c.ascent)),
        ("capHeight".into(), Plist::number(c.cap_height)),
        ("descender".into(), Plist::number(-c.descent)),
        ("familyName".into(), Plist::String(meta.family.clone())),
        ("italicAngle".into(), Plist::number(italic)),
        ("styleName".into(), Plist::String(meta.style.clone())),
        ("unitsPerEm".into(), Plist::number(c.em)),
        ("versionMajor".into(), Plist::Integer(major)),
        ("versionMinor".into(), Plist::Integer(minor)),
        ("xHeight".into(), Plist::number(c.xheight)),
    ]))
}

/// Writes `set` as a UFO3 package at `dir`, replacing any previous one.
pub fn write_ufo(set: &GlyphSet, meta: &UfoMetadata, dir: &Path) -> Result<()> {
    let mut seen = HashSet::new();
    for g in &set.glyphs {
        if !seen.insert(g.name.as_str()) {
            return Err(Error::Package(format!("duplicate glyph name `{}`", g.name)));
        }
        if let Some(u) = g.unicode {
            if char::from_u32(u).is_none() {
                return Err(Error::Package(format!("glyph `{}`: invalid code point {u:#X}", g.name)));
            }
        }
    }
    let info = fontinfo(set, meta)?;
    write_dir_atomic(dir, |tmp| {
        let put = |rel: &str, text: String| write_atomic(&tmp.join(rel), text.as_bytes());
        put(
            "metainfo.plist",
            Plist::Dict(vec![
                ("creator".into(), Plist::String("org.metaglyph".into())),
                ("formatVersion".into(), Plist::Integer(3)),
            ])
            .to_xml(),
        )?;
        put("fontinfo.plist", info.to_xml())?;
        put(
            "layercontents.plist",
            Plist::Array(vec![Plist::Array(vec![
                Plist::String("public.default".into()),
                Plist::String("glyphs".into()),
            ])])
            .to_xml(),
        )?;
        put(
            "lib.plist",
            Plist::Dict(vec![(
                "public.glyphOrder".into(),
                Plist::Array(set.glyphs.iter().map(|g| Plist::String(g.name.clone())).collect()),
            )])
            .to_xml(),
        )?;
        let mut taken = HashSet::new();
        let mut contents = Vec::new();
        for g in &set.glyphs {
            let file = user_name_to_file_name(&g.name, &taken, "", ".glif");
            taken.insert(file.to_lowercase());
            put(&format!("glyphs/{file}"), glif_xml(g))?;
            contents.push((g.name.clone(), Plist::String(file)));
        }
        put("glyphs/contents.plist", Plist::Dict(contents).to_xml())
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    Move,
    Line,
    OffCurve,
    Curve,
    QCurve,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GlifPoint {
    pub x: f64,
    pub y: f64,
    pub kind: PointKind,
    pub smooth: bool,
}

impl GlifPoint {
    fn pos(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// A parsed glif file.
#[derive(Clone, Debug, PartialEq)]
pub struct Glif {
    pub name: String,
    pub advance: f64,
    pub unicodes: Vec<u32>,
    pub contours: Vec<Vec<GlifPoint>>,
}

fn attr_f64(n: roxmltree::Node, name: &str) -> Result<Option<f64>, String> {
    n.attribute(name)
        .map(|v| v.parse::<f64>().map_err(|_| format!("bad {name} `{v}`")))
        .transpose()
}

/// Parses glif text (format 1 or 2, outlines only).
pub fn read_glif(text: &str) -> Result<Glif, String> {
    let doc = roxmltree::Document::parse(text).map_err(|e| e.to_string())?;
    let root = doc.root_element();
    if root.tag_name().name() != "glyph" {
        return Err("not a glif".into());
    }
    let mut glif = Glif {
        name: root.attribute("name").ok_or("glyph without a name")?.to_string(),
        advance: 0.0,
        unicodes: Vec::new(),
        contours: Vec::new(),
    };
    for n in root.children().filter(|n| n.is_element()) {
        match n.tag_name().name() {
            "advance" => glif.advance = attr_f64(n, "width")?.unwrap_or(0.0),
            "unicode" => {
                let hex = n.attribute("hex").ok_or("unicode without hex")?;
                glif.unicodes
                    .push(u32::from_str_radix(hex, 16).map_err(|_| format!("bad unicode `{hex}`"))?);
            }
            "outline" => {
                for c in n.children().filter(|c| c.has_tag_name("contour")) {
                    let mut points = Vec::new();
                    for p in c.children().filter(|p| p.has_tag_name("point")) {
                        let kind = match p.attribute("type") {
                            None | Some("offcurve") => PointKind::OffCurve,
                            Some("move") => PointKind::Move,
                            Some("line") => PointKind::Line,
                            Some("curve") => PointKind::Curve,
                            Some("qcurve") => PointKind::QCurve,
                            Some(t) => return Err(format!("unknown point type `{t}`")),
                        };
                        points.push(GlifPoint {
                            x: attr_f64(p, "x")?.ok_or("point without x")?,
                            y: attr_f64(p, "y")?.ok_or("point without y")?,
                            kind,
                            smooth: p.attribute("smooth") == Some("yes"),
                        });
                    }
                    glif.contours.push(points);
                }
            }
            _ => {}
        }
    }
    Ok(glif)
}

impl Glif {
    /// Rebuilds cubic contours. Quadratic segments are not supported.
    pub fn to_contours(&self) -> Result<Vec<Contour>, String> {
        self.contours.iter().map(|pts| points_to_contour(pts)).collect()
    }
}

fn points_to_contour(points: &[GlifPoint]) -> Result<Contour, String> {
    if points.is_empty() {
        return Ok(Contour::empty());
    }
    let closed = points[0].kind != PointKind::Move;
    let mut pts: Vec<GlifPoint> = points.to_vec();
    if closed {
        let first_on = pts
            .iter()
            .position(|p| p.kind != PointKind::OffCurve)
            .ok_or("contour without on-curve points")?;
        pts.rotate_left(first_on);
        pts.push(pts[0]);
    }
    let mut segments = Vec::new();
    let mut prev = pts[0].pos();
    let mut offs: Vec<Point> = Vec::new();
    for p in &pts[1..] {
        match p.kind {
            PointKind::OffCurve => offs.push(p.pos()),
            PointKind::Line if offs.is_empty() => {
                segments.push(CubicSegment::line(prev, p.pos()));
                prev = p.pos();
            }
            PointKind::Curve if offs.len() == 2 => {
                segments.push(CubicSegment::new(prev, offs[0], offs[1], p.pos()));
                offs.clear();
                prev = p.pos();
            }
            PointKind::QCurve => return Err("quadratic segments are not supported".into()),
            _ => return Err(format!("unexpected {:?} point after {} off-curve points", p.kind, offs.len())),
        }
    }
    if !offs.is_empty() {
        return Err("trailing off-curve points in an open contour".into());
    }
    Contour::new(segments, closed).map_err(|e| e.to_string())
}

/// Parsed contents of a UFO package: its font info and the glyphs of the
/// default layer, in glyph order.
#[derive(Clone, Debug, PartialEq)]
pub struct UfoFont {
    pub info: Plist,
    pub glyphs: Vec<Glif>,
}

pub fn read_ufo(dir: &Path) -> Result<UfoFont> {
    let read = |rel: &str| {
        let p = dir.join(rel);
        std::fs::read_to_string(&p).map_err(|e| Error::io(&p, e))
    };
    let bad = |rel: &str, e: String| Error::Package(format!("{}: {e}", dir.join(rel).display()));
    let info = Plist::parse(&read("fontinfo.plist")?).map_err(|e| bad("fontinfo.plist", e))?;
    let contents = Plist::parse(&read("glyphs/contents.plist")?).map_err(|e| bad("glyphs/contents.plist", e))?;
    let Plist::Dict(entries) = contents else {
        return Err(bad("glyphs/contents.plist", "expected a dict".into()));
    };
    let mut glyphs = Vec::new();
    for (name, file) in &entries {
        let file = file
            .as_str()
            .ok_or_else(|| bad("glyphs/contents.plist", format!("`{name}` maps to a non-string")))?;
        let rel = format!("glyphs/{file}");
        glyphs.push(read_glif(&read(&rel)?).map_err(|e| bad(&rel, e))?);
    }
    if let Ok(lib) = read("lib.plist") {
        if let Ok(Some(Plist::Array(order))) = Plist::parse(&lib).map(|l| l.get("public.glyphOrder").cloned()) {
            let rank = |n: &str| order.iter().position(|o| o.as_str() == Some(n)).unwrap_or(usize::MAX);
            glyphs.sort_by_key(|g| rank(&g.name));
        }
    }
    Ok(UfoFont { info, glyphs })
}
