// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

use std::fmt;

use metaglyph::geometry::Contour;

use crate::build::{BuiltGlyph, GlyphSet, MasterSet};

#[derive(Clone, Debug, PartialEq)]
pub enum MismatchKind {
    MissingGlyph,
    ExtraGlyph,
    ContourCount { expected: usize, found: usize },
    StrokeCount { expected: usize, found: usize },
    SegmentCount { expected: usize, found: usize },
    Closed { expected: bool },
    /// Segment `segment` is a line in one master and a curve in the other.
    SegmentKind { segment: usize, expected_line: bool },
    /// Contour runs the other way round.
    Winding,
}

/// One difference between a master and the reference master.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub glyph: String,
    pub master: String,
    pub reference: String,
    /// Contour (or stroke, when `stroke` is set) the mismatch is in.
    pub contour: Option<usize>,
    pub stroke: bool,
    pub kind: MismatchKind,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "glyph `{}`, master `{}`", self.glyph, self.master)?;
        if let Some(i) = self.contour {
            write!(f, ", {} {i}", if self.stroke { "stroke" } else { "contour" })?;
        }
        let r = &self.reference;
        match &self.kind {
            MismatchKind::MissingGlyph => write!(f, ": glyph is missing"),
            MismatchKind::ExtraGlyph => write!(f, ": glyph is not in `{r}`"),
            MismatchKind::ContourCount { expected, found } => {
                write!(f, ": {found} contours, `{r}` has {expected}")
            }
            MismatchKind::StrokeCount { expected, found } => {
                write!(f, ": {found} strokes, `{r}` has {expected}")
            }
            MismatchKind::SegmentCount { expected, found } => {
                write!(f, ": {found} segments, `{r}` has {expected}")
            }
            MismatchKind::Closed { expected } => {
                let how = |c: bool| if c { "closed" } else { "open" };
                write!(f, ": {}, `{r}` has it {}", how(!expected), how(*expected))
            }
            MismatchKind::SegmentKind { segment, expected_line } => {
                let how = |l: bool| if l { "a line" } else { "a curve" };
                write!(
                    f,
                    ": segment {segment} is {}, `{r}` has {}",
                    how(!expected_line),
                    how(*expected_line)
                )
            }
            MismatchKind::Winding => write!(f, ": winding differs from `{r}`"),
        }
    }
}

/// Every mismatch found; empty means the masters are compatible.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CompatReport {
    pub mismatches: Vec<Mismatch>,
}

impl CompatReport {
    pub fn is_compatible(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for CompatReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_compatible() {
            return f.write_str("compatible");
        }
        for (i, m) in self.mismatches.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Compares every master with the default master, glyph by glyph: contour
/// and stroke counts, then per contour the segment count, closedness, the
/// line/curve sequence and the winding direction.
pub fn check_compatibility(set: &MasterSet) -> CompatReport {
    let reference = set.default_master();
    let mut report = CompatReport::default();
    for master in &set.masters {
        if std::ptr::eq(master, reference) {
            continue;
        }
        compare_sets(reference, master, &mut report);
    }
    report
}

fn compare_sets(reference: &GlyphSet, master: &GlyphSet, report: &mut CompatReport) {
    let push = |report: &mut CompatReport, glyph: &str, contour, stroke, kind| {
        report.mismatches.push(Mismatch {
            glyph: glyph.to_string(),
            master: master.name.clone(),
            reference: reference.name.clone(),
            contour,
            stroke,
            kind,
        })
    };
    for g in &reference.glyphs {
        match master.glyph(&g.name) {
            None => push(report, &g.name, None, false, MismatchKind::MissingGlyph),
            Some(other) => compare_glyphs(g, other, &mut |c, s, k| push(report, &g.name, c, s, k)),
        }
    }
    for g in &master.glyphs {
        if reference.glyph(&g.name).is_none() {
            push(report, &g.name, None, false, MismatchKind::ExtraGlyph);
        }
    }
}

fn compare_glyphs(a: &BuiltGlyph, b: &BuiltGlyph, push: &mut dyn FnMut(Option<usize>, bool, MismatchKind)) {
    if a.outline.len() != b.outline.len() {
        push(
            None,
            false,
            MismatchKind::ContourCount {
                expected: a.outline.len(),
                found: b.outline.len(),
            },
        );
    }
    if a.strokes.len() != b.strokes.len() {
        push(
            None,
            true,
            MismatchKind::StrokeCount {
                expected: a.strokes.len(),
                found: b.strokes.len(),
            },
        );
    }
    for (i, (ca, cb)) in a.outline.iter().zip(&b.outline).enumerate() {
        compare_contours(ca, cb, true, &mut |k| push(Some(i), false, k));
    }
    for (i, (ca, cb)) in a.strokes.iter().zip(&b.strokes).enumerate() {
        compare_contours(ca, cb, false, &mut |k| push(Some(i), true, k));
    }
}

fn compare_contours(a: &Contour, b: &Contour, winding: bool, push: &mut dyn FnMut(MismatchKind)) {
    if a.len() != b.len() {
        push(MismatchKind::SegmentCount {
            expected: a.len(),
            found: b.len(),
        });
        return;
    }
    if a.is_closed() != b.is_closed() {
        push(MismatchKind::Closed {
            expected: a.is_closed(),
        });
    }
    for (i, (sa, sb)) in a.segments().iter().zip(b.segments()).enumerate() {
        if sa.is_line() != sb.is_line() {
            push(MismatchKind::SegmentKind {
                segment: i,
                expected_line: sa.is_line(),
            });
        }
    }
    if winding && a.is_closed() && b.is_closed() && a.signed_area().signum() != b.signed_area().signum() {
        push(MismatchKind::Winding);
    }
}
