// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

mod common;

use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;

use common::{config, sample};
use metaglyph::dsl::{compile, EvalOptions, PreludeOnly};
use metaglyph::geometry::{round_half_away, Contour, CubicSegment, Point};
use metaglyph_pipeline::*;
use proptest::prelude::*;

fn square(side: f64) -> Vec<Contour> {
    let src = format!("side := {side};\ndraw (0,0) -- (side,0) -- (side,side) -- (0,side) -- (0,0);\n");
    compile(&src, "square.mpg", &PreludeOnly, &EvalOptions::default()).outline
}

fn parse_xml(text: &str) -> roxmltree::Document<'_> {
    roxmltree::Document::parse(text).unwrap_or_else(|e| panic!("{e}\n{text}"))
}

#[test]
fn square_path_data() {
    let svg = glyph_svg(&square(10.0), &[], &SvgOptions::default());
    let doc = parse_xml(&svg);
    let root = doc.root_element();
    assert_eq!(root.attribute("viewBox"), Some("0 0 10 10"));
    let path = root.children().find(|n| n.has_tag_name("path")).unwrap();
    assert_eq!(path.attribute("d"), Some("M 0 10 L 10 10 L 10 0 L 0 0 Z"));
}

#[test]
fn empty_glyph_gives_empty_path() {
    let svg = glyph_svg(&[], &[], &SvgOptions::default());
    let doc = parse_xml(&svg);
    let path = doc.descendants().find(|n| n.has_tag_name("path")).unwrap();
    assert_eq!(path.attribute("d"), Some(""));
}

#[test]
fn numbers_are_trimmed() {
    let seg = CubicSegment::new(
        Point::new(0.0, 0.0),
        Point::new(1.23456, -0.0001),
        Point::new(2.5, 1.0),
        Point::new(3.0, 0.0),
    );
    let c = Contour::new(vec![seg, CubicSegment::line(Point::new(3.0, 0.0), Point::new(0.0, 0.0))], true).unwrap();
    assert_eq!(path_data(&[c], |p| p), "M 0 0 C 1.235 0 2.5 1 3 0 Z");
}

#[test]
fn debug_overlay_marks_knots_and_handles() {
    let ra = sample().master("Regular").unwrap().glyph("ra").unwrap();
    let options = SvgOptions {
        debug: true,
        ..Default::default()
    };
    let svg = glyph_svg(&ra.outline, &ra.strokes, &options);
    let doc = parse_xml(&svg);
    let count = |class: &str| doc.descendants().filter(|n| n.attribute("class") == Some(class)).count();
    assert_eq!(count("knot"), 12 + 5);
    assert!(count("handle") > 0);
    assert_eq!(count("stroke"), 1);
    assert!(svg.contains(DEFAULT_STYLE));
    let custom = SvgOptions {
        debug: true,
        style: Some(".knot{fill:blue}".into()),
        ..Default::default()
    };
    assert!(glyph_svg(&ra.outline, &ra.strokes, &custom).contains(".knot{fill:blue}"));
}

#[test]
fn write_svg_is_deterministic() {
    let reg = sample().master("Regular").unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    write_svg(reg, a.path(), false, None).unwrap();
    write_svg(reg, b.path(), false, None).unwrap();
    for g in ["ra", "l", "o", "c", "hyphen"] {
        let name = format!("{g}.svg");
        let x = std::fs::read(a.path().join(&name)).unwrap();
        assert_eq!(x, std::fs::read(b.path().join(&name)).unwrap());
        let text = String::from_utf8(x).unwrap();
        let doc = parse_xml(&text);
        let vb = doc.root_element().attribute("viewBox").unwrap();
        assert!(vb.ends_with(" 1000"), "{vb}");
    }
}

fn rounded(outline: &[Contour]) -> Vec<Contour> {
    let r = |p: Point| Point::new(round_half_away(p.x), round_half_away(p.y));
    outline
        .iter()
        .map(|c| {
            let segs = c
                .segments()
                .iter()
                .map(|s| {
                    if s.is_line() {
                        CubicSegment::line(r(s.p0), r(s.p1))
                    } else {
                        CubicSegment::new(r(s.p0), r(s.c0), r(s.c1), r(s.p1))
                    }
                })
                .collect();
            Contour::new(segs, c.is_closed()).unwrap()
        })
        .collect()
}

fn meta() -> UfoMetadata {
    UfoMetadata {
        family: "Metaglyph Sample".into(),
        style: "Regular".into(),
        version: "1.000".into(),
    }
}

#[test]
fn ufo_round_trip() {
    let reg = sample().master("Regular").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let ufo = dir.path().join("Sample-Regular.ufo");
    write_ufo(reg, &meta(), &ufo).unwrap();
    let font = read_ufo(&ufo).unwrap();
    let num = |k: &str| font.info.get(k).and_then(Plist::as_f64);
    assert_eq!(num("unitsPerEm"), Some(1000.0));
    assert_eq!(num("ascender"), Some(800.0));
    assert_eq!(num("descender"), Some(-200.0));
    assert_eq!(num("italicAngle"), Some(0.0));
    assert_eq!(font.info.get("styleName").and_then(Plist::as_str), Some("Regular"));
    assert_eq!(font.glyphs.len(), reg.glyphs.len());
    for (glif, g) in font.glyphs.iter().zip(&reg.glyphs) {
        assert_eq!(glif.name, g.name);
        assert_eq!(glif.advance, round_half_away(g.advance));
        assert_eq!(glif.unicodes, g.unicode.into_iter().collect::<Vec<_>>());
        let back = glif.to_contours().unwrap();
        assert_eq!(back, rounded(&g.outline), "{}", g.name);
        for (p, q) in common::points(&back).iter().zip(common::points(&g.outline)) {
            assert!((p.x - q.x).abs() <= 0.5 && (p.y - q.y).abs() <= 0.5);
        }
    }
    for f in ["metainfo.plist", "fontinfo.plist", "layercontents.plist", "lib.plist", "glyphs/contents.plist"] {
        let text = std::fs::read_to_string(ufo.join(f)).unwrap();
        Plist::parse(&text).unwrap_or_else(|e| panic!("{f}: {e}"));
    }
}

#[test]
fn oblique_italic_angle() {
    let obl = sample().master("Oblique").unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_ufo(obl, &meta(), dir.path()).unwrap();
    let font = read_ufo(dir.path()).unwrap();
    assert_eq!(font.info.get("italicAngle").and_then(Plist::as_f64), Some(-15.0));
}

#[test]
fn square_glif_has_four_line_points() {
    let g = BuiltGlyph {
        name: "square".into(),
        unicode: Some(0x25A1),
        advance: 10.0,
        outline: square(10.0),
        strokes: vec![],
    };
    let glif = read_glif(&glif_xml(&g)).unwrap();
    assert_eq!(glif.contours.len(), 1);
    let kinds: Vec<_> = glif.contours[0].iter().map(|p| p.kind).collect();
    assert_eq!(kinds, vec![PointKind::Line; 4]);
    assert_eq!(glif.to_contours().unwrap()[0].is_closed(), true);
    assert!(glif_xml(&g).contains("<unicode hex=\"25A1\"/>"));
}

#[test]
fn ra_glif_unicode_and_smooth_points() {
    let reg = sample().master("Regular").unwrap();
    let ra = reg.glyph("ra").unwrap();
    assert!(glif_xml(ra).contains("<unicode hex=\"0D31\"/>"));
    let o = read_glif(&glif_xml(reg.glyph("o").unwrap())).unwrap();
    for c in &o.contours {
        let on: Vec<_> = c.iter().filter(|p| p.kind != PointKind::OffCurve).collect();
        assert_eq!(on.len(), 4);
        assert!(on.iter().all(|p| p.smooth && p.kind == PointKind::Curve));
    }
    let l = read_glif(&glif_xml(reg.glyph("l").unwrap())).unwrap();
    let corners = l.contours[0].iter().filter(|p| p.kind == PointKind::Line).count();
    assert_eq!(corners, 2);
}

#[test]
fn duplicate_glyph_names_are_rejected() {
    let mut set = sample().master("Regular").unwrap().clone();
    let dup = set.glyphs[0].clone();
    set.glyphs.push(dup);
    let dir = tempfile::tempdir().unwrap();
    let err = write_ufo(&set, &meta(), &dir.path().join("x.ufo")).unwrap_err();
    assert_eq!(err.to_string(), "duplicate glyph name `ra`");
}

#[test]
fn file_names_follow_ufo_rules() {
    let none = HashSet::new();
    let f = |n: &str| user_name_to_file_name(n, &none, "", ".glif");
    assert_eq!(f("a"), "a.glif");
    assert_eq!(f("A"), "A_.glif");
    assert_eq!(f("AE"), "A_E_.glif");
    assert_eq!(f("ae"), "ae.glif");
    assert_eq!(f(".notdef"), "_notdef.glif");
    assert_eq!(f("con"), "_con.glif");
    assert_eq!(f("con.alt"), "_con.alt.glif");
    assert_eq!(f("alt.con"), "alt._con.glif");
    assert_eq!(f("a/b"), "a_b.glif");
    let taken: HashSet<String> = ["a.glif".to_string()].into();
    assert_eq!(user_name_to_file_name("a", &taken, "", ".glif"), "a000000000000001.glif");
}

fn table_one(set: &MasterSet, dir: &std::path::Path) -> String {
    let ds = emit_package(set, dir).unwrap();
    std::fs::read_to_string(ds).unwrap()
}

#[test]
fn designspace_axes_and_sources() {
    let dir = tempfile::tempdir().unwrap();
    let text = table_one(sample(), dir.path());
    let doc = parse_xml(&text);
    let axes: Vec<_> = doc
        .descendants()
        .filter(|n| n.has_tag_name("axis"))
        .map(|a| {
            ["tag", "minimum", "default", "maximum"]
                .map(|k| a.attribute(k).unwrap().to_string())
                .join(" ")
        })
        .collect();
    assert_eq!(axes, ["wght 100 400 900", "slnt -15 0 0", "wdth 75 100 125", "SOFT 0 50 100"]);
    let sources: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("source")).collect();
    assert_eq!(sources.len(), 8);
    for s in &sources {
        let ufo = dir.path().join(s.attribute("filename").unwrap());
        assert!(ufo.join("fontinfo.plist").is_file(), "{}", ufo.display());
    }
    let copies: Vec<_> = sources
        .iter()
        .filter(|s| s.children().any(|c| c.has_tag_name("info")))
        .map(|s| s.attribute("stylename").unwrap())
        .collect();
    assert_eq!(copies, ["Regular"]);
    let instances: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("instance")).collect();
    assert_eq!(instances.len(), 32);
    let ct = instances
        .iter()
        .find(|i| i.attribute("stylename") == Some("Condensed Thin"))
        .unwrap();
    let dims: BTreeMap<&str, &str> = ct
        .descendants()
        .filter(|n| n.has_tag_name("dimension"))
        .map(|d| (d.attribute("name").unwrap(), d.attribute("xvalue").unwrap()))
        .collect();
    assert_eq!(dims["Width"], "75");
    assert_eq!(dims["Weight"], "100");
}

#[test]
fn designspace_needs_master_ufos() {
    let dir = tempfile::tempdir().unwrap();
    let files: BTreeMap<String, PathBuf> = sample()
        .masters
        .iter()
        .map(|m| (m.name.clone(), PathBuf::from(format!("{}.ufo", m.name))))
        .collect();
    let err = write_designspace(sample(), &files, &dir.path().join("x.designspace")).unwrap_err();
    assert!(err.to_string().contains("does not exist"), "{err}");
}

#[test]
fn emit_replaces_previous_output() {
    let dir = tempfile::tempdir().unwrap();
    let first = table_one(sample(), dir.path());
    let stale = dir.path().join("masters/MetaglyphSample-Regular.ufo/glyphs/stale.glif");
    std::fs::write(&stale, "x").unwrap();
    let second = table_one(sample(), dir.path());
    assert_eq!(first, second);
    assert!(!stale.exists());
    let leftovers: Vec<_> = std::fs::read_dir(dir.path().join("masters"))
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().starts_with(".metaglyph-"))
        .collect();
    assert!(leftovers.is_empty());
}

fn arb_contour() -> impl Strategy<Value = Contour> {
    prop::collection::vec(((-2000.0..2000.0f64, -2000.0..2000.0f64), any::<bool>(), (-50.0..50.0f64, -50.0..50.0f64)), 2..8)
        .prop_map(|nodes| {
            let pts: Vec<Point> = nodes.iter().map(|((x, y), _, _)| Point::new(*x, *y)).collect();
            let segs = (0..pts.len())
                .map(|i| {
                    let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
                    let (_, line, (dx, dy)) = nodes[i];
                    if line {
                        CubicSegment::line(a, b)
                    } else {
                        CubicSegment::new(a, Point::new(a.x + dx, a.y + dy), Point::new(b.x - dy, b.y + dx), b)
                    }
                })
                .collect();
            Contour::new(segs, true).unwrap()
        })
}

proptest! {
    #[test]
    fn glif_round_trip_is_exact_after_rounding(outline in prop::collection::vec(arb_contour(), 0..4), adv in 0.0..2000.0f64) {
        let g = BuiltGlyph { name: "g".into(), unicode: None, advance: adv, outline: outline.clone(), strokes: vec![] };
        let glif = read_glif(&glif_xml(&g)).unwrap();
        prop_assert_eq!(glif.advance, round_half_away(adv));
        let back = glif.to_contours().unwrap();
        prop_assert_eq!(back.len(), outline.len());
        let want = rounded(&outline);
        for (b, w) in back.iter().zip(&want) {
            prop_assert_eq!(b.len(), w.len());
            for (sb, sw) in b.segments().iter().zip(w.segments()) {
                // rounding can turn a curve into one that is indistinguishable from a line
                prop_assert_eq!(sb.p0, sw.p0);
                prop_assert_eq!(sb.p1, sw.p1);
                if !sw.is_line() {
                    prop_assert_eq!((sb.c0, sb.c1), (sw.c0, sw.c1));
                }
            }
        }
    }

    #[test]
    fn svg_output_parses(outline in prop::collection::vec(arb_contour(), 0..4), debug in any::<bool>()) {
        let svg = glyph_svg(&outline, &outline, &SvgOptions { debug, ..Default::default() });
        prop_assert!(roxmltree::Document::parse(&svg).is_ok());
        let cfg = config(90.0);
        let metrics = SvgOptions {
            frame: Frame::Metrics { advance: 500.0, ascent: cfg.ascent, descent: cfg.descent },
            debug,
            style: None,
        };
        prop_assert!(roxmltree::Document::parse(&glyph_svg(&outline, &[], &metrics)).is_ok());
    }
}
