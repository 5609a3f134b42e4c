// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Dense-sampling reference for lengths, positions and containment.

#![allow(dead_code)]

pub type P = (f64, f64);

/// Cubic in power form, evaluated by Horner's rule.
fn cubic(p: [P; 4], t: f64) -> P {
    let coef = |a: f64, b: f64, c: f64, d: f64| {
        let c3 = -a + 3.0 * b - 3.0 * c + d;
        let c2 = 3.0 * a - 6.0 * b + 3.0 * c;
        let c1 = 3.0 * (b - a);
        ((c3 * t + c2) * t + c1) * t + a
    };
    (
        coef(p[0].0, p[1].0, p[2].0, p[3].0),
        coef(p[0].1, p[1].1, p[2].1, p[3].1),
    )
}

/// A polyline through `per_segment` samples of each cubic.
pub struct Polyline {
    pub points: Vec<P>,
    pub cumulative: Vec<f64>,
}

impl Polyline {
    pub fn new(segments: &[[P; 4]], per_segment: usize, closed: bool) -> Self {
        let mut points = Vec::new();
        for s in segments {
            for i in 0..per_segment {
                points.push(cubic(*s, i as f64 / per_segment as f64));
            }
        }
        if closed {
            points.push(points[0]);
        } else {
            points.push(segments.last().unwrap()[3]);
        }
        let mut cumulative = vec![0.0];
        for w in points.windows(2) {
            let d = ((w[1].0 - w[0].0).powi(2) + (w[1].1 - w[0].1).powi(2)).sqrt();
            cumulative.push(cumulative.last().unwrap() + d);
        }
        Polyline { points, cumulative }
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Arc length of the sample nearest to `q`.
    pub fn arc_position(&self, q: P) -> f64 {
        let mut best = (f64::INFINITY, 0.0);
        for w in 0..self.points.len() - 1 {
            let (a, b) = (self.points[w], self.points[w + 1]);
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let len2 = dx * dx + dy * dy;
            let t = if len2 == 0.0 {
                0.0
            } else {
                (((q.0 - a.0) * dx + (q.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
            };
            let (px, py) = (a.0 + t * dx, a.1 + t * dy);
            let dist = ((q.0 - px).powi(2) + (q.1 - py).powi(2)).sqrt();
            if dist < best.0 {
                best = (dist, self.cumulative[w] + t * len2.sqrt());
            }
        }
        best.1
    }

    /// Point at arc length `s`.
    pub fn at(&self, s: f64) -> P {
        let i = self.cumulative.partition_point(|&c| c < s).clamp(1, self.points.len() - 1);
        let (c0, c1) = (self.cumulative[i - 1], self.cumulative[i]);
        let t = if c1 > c0 { (s - c0) / (c1 - c0) } else { 0.0 };
        let (a, b) = (self.points[i - 1], self.points[i]);
        (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
    }

    /// Direction (degrees) of the chord around arc length `s`.
    pub fn heading(&self, s: f64, h: f64) -> f64 {
        let a = self.at((s - h).max(0.0));
        let b = self.at((s + h).min(self.length()));
        (b.1 - a.1).atan2(b.0 - a.0).to_degrees()
    }

    /// Distance from `q` to the polyline.
    pub fn distance(&self, q: P) -> f64 {
        let mut best = f64::INFINITY;
        for w in self.points.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let len2 = dx * dx + dy * dy;
            let t = if len2 == 0.0 {
                0.0
            } else {
                (((q.0 - a.0) * dx + (q.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
            };
            best = best.min(((q.0 - a.0 - t * dx).powi(2) + (q.1 - a.1 - t * dy).powi(2)).sqrt());
        }
        best
    }

    /// Winding number of the closed polyline around `q`.
    pub fn winding(&self, q: P) -> i32 {
        let mut w = 0;
        for s in self.points.windows(2) {
            let (a, b) = (s[0], s[1]);
            let side = (b.0 - a.0) * (q.1 - a.1) - (q.0 - a.0) * (b.1 - a.1);
            if a.1 <= q.1 {
                if b.1 > q.1 && side > 0.0 {
                    w += 1;
                }
            } else if b.1 <= q.1 && side < 0.0 {
                w -= 1;
            }
        }
        w
    }
}
