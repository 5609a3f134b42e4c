// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

use metaglyph::geometry::{Affine, Contour, CubicSegment, Point};
use metaglyph::pen::{place_arrows, place_dots};

use crate::build::{BuiltGlyph, GlyphSet};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EducationMode {
    /// A round dot every `spacing` units along each stroke.
    Dots,
    /// An arrowhead pointing along the stroke every `spacing` units.
    Arrows,
}

const KAPPA: f64 = 0.552_284_749_830_793_4;

/// Counter-clockwise circle of four cubic arcs.
pub(crate) fn circle(center: Point, r: f64) -> Contour {
    let k = KAPPA * r;
    let at = |x: f64, y: f64| Point::new(center.x + x, center.y + y);
    let segments = vec![
        CubicSegment::new(at(r, 0.0), at(r, k), at(k, r), at(0.0, r)),
        CubicSegment::new(at(0.0, r), at(-k, r), at(-r, k), at(-r, 0.0)),
        CubicSegment::new(at(-r, 0.0), at(-r, -k), at(-k, -r), at(0.0, -r)),
        CubicSegment::new(at(0.0, -r), at(k, -r), at(r, -k), at(r, 0.0)),
    ];
    Contour::new(segments, true).expect("arcs share endpoints")
}

/// Unit arrowhead pointing along +x, centred on the origin.
const ARROW: [(f64, f64); 3] = [(0.5, 0.0), (-0.5, 0.4), (-0.5, -0.4)];

fn arrow(at: Point, angle: f64, size: f64) -> Contour {
    let m = Affine::translate(at.to_vec2()) * Affine::rotate_deg(angle) * Affine::scale(size);
    let p: Vec<Point> = ARROW.iter().map(|&(x, y)| m.apply(Point::new(x, y))).collect();
    Contour::new_snapped(
        vec![
            CubicSegment::line(p[0], p[1]),
            CubicSegment::line(p[1], p[2]),
            CubicSegment::line(p[2], p[0]),
        ],
        true,
    )
    .expect("closed triangle")
}

/// Replaces every glyph's outline with marks along its stroke centre
/// lines: dots of diameter `thick`, or arrowheads `thick` long.
pub fn derive_education_variant(set: &GlyphSet, mode: EducationMode, spacing: f64) -> Result<GlyphSet> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::Education(format!("spacing must be positive, got {spacing}")));
    }
    let size = set.config.thick;
    let glyphs = set
        .glyphs
        .iter()
        .map(|g| {
            if g.strokes.is_empty() && !g.outline.is_empty() {
                return Err(Error::Education(format!(
                    "glyph `{}` has an outline but no stroke centre lines",
                    g.name
                )));
            }
            let mut outline = Vec::new();
            for s in &g.strokes {
                let fail = |e| Error::Education(format!("glyph `{}`: {e}", g.name));
                match mode {
                    EducationMode::Dots => {
                        for p in place_dots(s, spacing).map_err(fail)? {
                            outline.push(circle(p, size / 2.0));
                        }
                    }
                    EducationMode::Arrows => {
                        for (p, angle) in place_arrows(s, spacing).map_err(fail)? {
                            outline.push(arrow(p, angle, size));
                        }
                    }
                }
            }
            Ok(BuiltGlyph {
                outline,
                ..g.clone()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let suffix = match mode {
        EducationMode::Dots => "Dots",
        EducationMode::Arrows => "Arrows",
    };
    Ok(GlyphSet {
        name: format!("{} {suffix}", set.name),
        glyphs,
        ..set.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_is_counter_clockwise_and_round() {
        let c = circle(Point::new(3.0, 4.0), 5.0);
        assert!(c.signed_area() > 0.0);
        for k in 0..40 {
            let t = k as f64 / 10.0;
            let p = c.point_at_time(t).unwrap();
            assert!((p.distance(Point::new(3.0, 4.0)) - 5.0).abs() < 5.0 * 3e-4);
        }
    }

    #[test]
    fn arrow_points_along_angle() {
        let a = arrow(Point::new(10.0, 0.0), 90.0, 10.0);
        assert!(a.node(0).unwrap().approx_eq(Point::new(10.0, 5.0), 1e-12));
        assert!(a.signed_area() > 0.0);
    }
}
