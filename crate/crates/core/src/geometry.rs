// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Vector primitives shared by every stage: points, affine maps, cubic
//! segments and contours.
//!
//! All geometry is uniformly cubic. A straight line is stored as a cubic whose
//! control points sit at the 1/3 and 2/3 points of its chord, so that outlines
//! built from the same program always have the same node structure.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use thiserror::Error;

/// Default tolerance, in font units, for geometric equality checks.
pub const EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("curve parameter {0} is outside [0, 1]")]
    ParameterOutOfRange(f64),
    #[error("non-finite coordinate in segment {0}")]
    NonFinite(usize),
    #[error("segment {0} does not start where the previous segment ends")]
    Disconnected(usize),
    #[error("closed contour does not end at its start point")]
    NotClosed,
    #[error("bounding box of an empty outline")]
    EmptyOutline,
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
}

/// A position in font units (y grows upward, em = 1000).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// A displacement between two points.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn to_vec2(self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn distance(self, other: Point) -> f64 {
        (other - self).length()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn approx_eq(self, other: Point, tol: f64) -> bool {
        (self.x - other.x).abs() <= tol && (self.y - other.y).abs() <= tol
    }
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector at `degrees` counter-clockwise from the positive x axis.
    pub fn from_angle_deg(degrees: f64) -> Self {
        let (s, c) = degrees.to_radians().sin_cos();
        Vec2::new(c, s)
    }

    pub fn length(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Angle in radians, in (-pi, pi].
    pub fn atan2(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn angle_deg(self) -> f64 {
        normalize_angle_deg(self.atan2().to_degrees())
    }

    pub fn normalize(self) -> Vec2 {
        let len = self.length();
        if len == 0.0 {
            Vec2::ZERO
        } else {
            self * (1.0 / len)
        }
    }

    /// Rotated by +90 degrees (the left-hand normal for y-up coordinates).
    pub fn turn_left(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn rotate(self, radians: f64) -> Vec2 {
        let (s, c) = radians.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn to_point(self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// Maps an angle in degrees into (-180, 180].
pub fn normalize_angle_deg(degrees: f64) -> f64 {
    let mut a = degrees % 360.0;
    if a <= -180.0 {
        a += 360.0;
    } else if a > 180.0 {
        a -= 360.0;
    }
    a
}

/// Maps an angle in radians into (-pi, pi].
pub fn normalize_angle_rad(radians: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut a = radians % TAU;
    if a <= -PI {
        a += TAU;
    } else if a > PI {
        a -= TAU;
    }
    a
}

impl Add<Vec2> for Point {
    type Output = Point;
    fn add(self, v: Vec2) -> Point {
        Point::new(self.x + v.x, self.y + v.y)
    }
}

impl AddAssign<Vec2> for Point {
    fn add_assign(&mut self, v: Vec2) {
        self.x += v.x;
        self.y += v.y;
    }
}

impl Sub<Vec2> for Point {
    type Output = Point;
    fn sub(self, v: Vec2) -> Point {
        Point::new(self.x - v.x, self.y - v.y)
    }
}

impl Sub for Point {
    type Output = Vec2;
    fn sub(self, other: Point) -> Vec2 {
        Vec2::new(self.x - other.x, self.y - other.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, v: Vec2) -> Vec2 {
        Vec2::new(self.x + v.x, self.y + v.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, v: Vec2) -> Vec2 {
        Vec2::new(self.x - v.x, self.y - v.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// An affine map `(x, y) -> (a*x + c*y + tx, b*x + d*y + ty)`.
///
/// `m2 * m1` is the map that applies `m1` first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub tx: f64,
    pub ty: f64,
}

impl Default for Affine {
    fn default() -> Self {
        Affine::IDENTITY
    }
}

impl Affine {
    pub const IDENTITY: Affine = Affine::new(1.0, 0.0, 0.0, 1.0, 0.0, 0.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64, tx: f64, ty: f64) -> Self {
        Affine { a, b, c, d, tx, ty }
    }

    pub fn translate(v: Vec2) -> Self {
        Affine::new(1.0, 0.0, 0.0, 1.0, v.x, v.y)
    }

    pub fn scale(s: f64) -> Self {
        Affine::new(s, 0.0, 0.0, s, 0.0, 0.0)
    }

    pub fn scale_xy(sx: f64, sy: f64) -> Self {
        Affine::new(sx, 0.0, 0.0, sy, 0.0, 0.0)
    }

    /// Counter-clockwise rotation about the origin.
    pub fn rotate_deg(degrees: f64) -> Self {
        let (s, c) = degrees.to_radians().sin_cos();
        Affine::new(c, s, -s, c, 0.0, 0.0)
    }

    /// Horizontal shear `x' = x + k*y`.
    pub fn shear_x(k: f64) -> Self {
        Affine::new(1.0, 0.0, k, 1.0, 0.0, 0.0)
    }

    /// Italic slant by `degrees`: `x' = x + y*tan(degrees)`.
    pub fn slant_deg(degrees: f64) -> Self {
        Affine::shear_x(degrees.to_radians().tan())
    }

    pub fn apply(&self, p: Point) -> Point {
        Point::new(
            self.a * p.x + self.c * p.y + self.tx,
            self.b * p.x + self.d * p.y + self.ty,
        )
    }

    pub fn apply_vec(&self, v: Vec2) -> Vec2 {
        Vec2::new(self.a * v.x + self.c * v.y, self.b * v.x + self.d * v.y)
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// The same map without its translation part.
    pub fn linear(&self) -> Affine {
        Affine::new(self.a, self.b, self.c, self.d, 0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        [self.a, self.b, self.c, self.d, self.tx, self.ty]
            .iter()
            .all(|v| v.is_finite())
    }
}

impl Mul for Affine {
    type Output = Affine;
    fn mul(self, o: Affine) -> Affine {
        Affine::new(
            self.a * o.a + self.c * o.b,
            self.b * o.a + self.d * o.b,
            self.a * o.c + self.c * o.d,
            self.b * o.c + self.d * o.d,
            self.a * o.tx + self.c * o.ty + self.tx,
            self.b * o.tx + self.d * o.ty + self.ty,
        )
    }
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn from_point(p: Point) -> Self {
        Rect {
            x_min: p.x,
            y_min: p.y,
            x_max: p.x,
            y_max: p.y,
        }
    }

    pub fn include(&mut self, p: Point) {
        self.x_min = self.x_min.min(p.x);
        self.y_min = self.y_min.min(p.y);
        self.x_max = self.x_max.max(p.x);
        self.y_max = self.y_max.max(p.y);
    }

    pub fn union(self, other: Rect) -> Rect {
        Rect {
            x_min: self.x_min.min(other.x_min),
            y_min: self.y_min.min(other.y_min),
            x_max: self.x_max.max(other.x_max),
            y_max: self.y_max.max(other.y_max),
        }
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }
}

/// One cubic Bézier segment: start knot, its post control, the end knot's
/// pre control, end knot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicSegment {
    pub p0: Point,
    pub c0: Point,
    pub c1: Point,
    pub p1: Point,
}

impl CubicSegment {
    pub const fn new(p0: Point, c0: Point, c1: Point, p1: Point) -> Self {
        CubicSegment { p0, c0, c1, p1 }
    }

    /// A straight segment, degree-elevated to a cubic.
    pub fn line(p0: Point, p1: Point) -> Self {
        let d = p1 - p0;
        CubicSegment::new(p0, p0 + d * (1.0 / 3.0), p0 + d * (2.0 / 3.0), p1)
    }

    /// All four points at `p`.
    pub fn degenerate(p: Point) -> Self {
        CubicSegment::new(p, p, p, p)
    }

    pub fn points(&self) -> [Point; 4] {
        [self.p0, self.c0, self.c1, self.p1]
    }

    pub fn is_finite(&self) -> bool {
        self.points().iter().all(|p| p.is_finite())
    }

    /// Evaluates the Bernstein form at `t`, rejecting `t` outside `[0, 1]`.
    pub fn eval(&self, t: f64) -> Result<Point, GeometryError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(GeometryError::ParameterOutOfRange(t));
        }
        Ok(self.eval_unchecked(t))
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> Point {
        let mt = 1.0 - t;
        let w0 = mt * mt * mt;
        let w1 = 3.0 * mt * mt * t;
        let w2 = 3.0 * mt * t * t;
        let w3 = t * t * t;
        Point::new(
            w0 * self.p0.x + w1 * self.c0.x + w2 * self.c1.x + w3 * self.p1.x,
            w0 * self.p0.y + w1 * self.c0.y + w2 * self.c1.y + w3 * self.p1.y,
        )
    }

    /// First derivative with respect to `t`.
    pub fn deriv(&self, t: f64) -> Vec2 {
        let mt = 1.0 - t;
        let d0 = self.c0 - self.p0;
        let d1 = self.c1 - self.c0;
        let d2 = self.p1 - self.c1;
        d0 * (3.0 * mt * mt) + d1 * (6.0 * mt * t) + d2 * (3.0 * t * t)
    }

    /// Tangent direction at `t`. Falls back to the next non-degenerate
    /// handle or the chord where the derivative vanishes at an end.
    pub fn tangent(&self, t: f64) -> Vec2 {
        let d = self.deriv(t);
        if d.length() > EPSILON {
            return d;
        }
        if t <= 0.5 {
            for q in [self.c1, self.p1] {
                let v = q - self.p0;
                if v.length() > EPSILON {
                    return v;
                }
            }
        } else {
            for q in [self.c0, self.p0] {
                let v = self.p1 - q;
                if v.length() > EPSILON {
                    return v;
                }
            }
        }
        self.p1 - self.p0
    }

    /// Direction leaving `p0`.
    pub fn start_tangent(&self) -> Vec2 {
        self.tangent(0.0)
    }

    /// Direction arriving at `p1`.
    pub fn end_tangent(&self) -> Vec2 {
        self.tangent(1.0)
    }

    /// De Casteljau split at `t`.
    pub fn split(&self, t: f64) -> (CubicSegment, CubicSegment) {
        let a = self.p0.lerp(self.c0, t);
        let b = self.c0.lerp(self.c1, t);
        let c = self.c1.lerp(self.p1, t);
        let ab = a.lerp(b, t);
        let bc = b.lerp(c, t);
        let mid = ab.lerp(bc, t);
        (
            CubicSegment::new(self.p0, a, ab, mid),
            CubicSegment::new(mid, bc, c, self.p1),
        )
    }

    pub fn reversed(&self) -> CubicSegment {
        CubicSegment::new(self.p1, self.c1, self.c0, self.p0)
    }

    pub fn transform(&self, m: &Affine) -> CubicSegment {
        CubicSegment::new(
            m.apply(self.p0),
            m.apply(self.c0),
            m.apply(self.c1),
            m.apply(self.p1),
        )
    }

    /// True when the controls sit on the chord at its 1/3 and 2/3 points,
    /// i.e. the segment is a degree-elevated line.
    pub fn is_line(&self) -> bool {
        let d = self.p1 - self.p0;
        let tol = EPSILON * (1.0 + d.length()) * 1e3;
        self.c0.approx_eq(self.p0 + d * (1.0 / 3.0), tol)
            && self.c1.approx_eq(self.p0 + d * (2.0 / 3.0), tol)
    }

    pub fn is_degenerate(&self) -> bool {
        let p = self.p0;
        self.points().iter().all(|q| q.approx_eq(p, EPSILON))
    }

    fn polygon_length(&self) -> f64 {
        self.p0.distance(self.c0) + self.c0.distance(self.c1) + self.c1.distance(self.p1)
    }

    /// Arc length by adaptive subdivision: a piece is accepted once its
    /// control polygon exceeds its chord by less than `tol * chord`, and then
    /// measured as the mean of chord and polygon.
    pub fn arc_length(&self, tol: f64) -> f64 {
        fn rec(seg: &CubicSegment, tol: f64, depth: u32) -> f64 {
            let chord = seg.p0.distance(seg.p1);
            let poly = seg.polygon_length();
            if poly - chord <= tol * chord || poly <= f64::MIN_POSITIVE || depth >= 40 {
                return 0.5 * (chord + poly);
            }
            let (a, b) = seg.split(0.5);
            rec(&a, tol, depth + 1) + rec(&b, tol, depth + 1)
        }
        rec(self, tol, 0)
    }

    /// Parameters in (0, 1) where one coordinate has a local extremum.
    pub fn extrema(&self) -> Vec<f64> {
        let mut ts = Vec::new();
        let pts = self.points();
        for axis in 0..2 {
            let v: Vec<f64> = pts
                .iter()
                .map(|p| if axis == 0 { p.x } else { p.y })
                .collect();
            // derivative / 3 = a t^2 + b t + c
            let a = -v[0] + 3.0 * v[1] - 3.0 * v[2] + v[3];
            let b = 2.0 * (v[0] - 2.0 * v[1] + v[2]);
            let c = v[1] - v[0];
            for t in solve_quadratic(a, b, c) {
                if t > 0.0 && t < 1.0 {
                    ts.push(t);
                }
            }
        }
        ts.sort_by(|a, b| a.total_cmp(b));
        ts
    }

    /// Tight bounding box of the curve itself.
    pub fn bbox(&self) -> Rect {
        let mut r = Rect::from_point(self.p0);
        r.include(self.p1);
        for t in self.extrema() {
            r.include(self.eval_unchecked(t));
        }
        r
    }
}

/// Real roots of `a t^2 + b t + c`, degrading to the linear case.
fn solve_quadratic(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    let (a, b, c) = (a / scale, b / scale, c / scale);
    if a.abs() < 1e-12 {
        if b.abs() < 1e-12 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    // numerically stable pair
    let q = -0.5 * (b + b.signum() * sq);
    let mut roots = Vec::with_capacity(2);
    if q != 0.0 {
        roots.push(q / a);
        roots.push(c / q);
    } else {
        roots.push(0.0);
    }
    roots
}

/// An ordered run of cubic segments, open or closed.
#[derive(Clone, Debug, PartialEq)]
pub struct Contour {
    segments: Vec<CubicSegment>,
    closed: bool,
}

impl Contour {
    /// Builds a contour, checking that consecutive segments share endpoints
    /// exactly and that a closed contour returns to its start.
    pub fn new(segments: Vec<CubicSegment>, closed: bool) -> Result<Self, GeometryError> {
        for (i, seg) in segments.iter().enumerate() {
            if !seg.is_finite() {
                return Err(GeometryError::NonFinite(i));
            }
            if i > 0 && segments[i - 1].p1 != seg.p0 {
                return Err(GeometryError::Disconnected(i));
            }
        }
        if closed {
            if let (Some(first), Some(last)) = (segments.first(), segments.last()) {
                if last.p1 != first.p0 {
                    return Err(GeometryError::NotClosed);
                }
            }
        }
        Ok(Contour { segments, closed })
    }

    /// Builds a contour from segments whose joints may differ by rounding;
    /// each segment start is snapped to the previous segment's end.
    pub fn new_snapped(mut segments: Vec<CubicSegment>, closed: bool) -> Result<Self, GeometryError> {
        for i in 1..segments.len() {
            segments[i].p0 = segments[i - 1].p1;
        }
        if closed && !segments.is_empty() {
            let start = segments[0].p0;
            segments.last_mut().unwrap().p1 = start;
        }
        Contour::new(segments, closed)
    }

    pub fn empty() -> Self {
        Contour {
            segments: Vec::new(),
            closed: false,
        }
    }

    pub fn segments(&self) -> &[CubicSegment] {
        &self.segments
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    /// Number of on-curve nodes: one per segment for closed contours, one
    /// more for open ones.
    pub fn node_count(&self) -> usize {
        if self.segments.is_empty() {
            0
        } else if self.closed {
            self.segments.len()
        } else {
            self.segments.len() + 1
        }
    }

    pub fn node(&self, index: usize) -> Option<Point> {
        if index >= self.node_count() {
            return None;
        }
        if index < self.segments.len() {
            Some(self.segments[index].p0)
        } else {
            self.segments.last().map(|s| s.p1)
        }
    }

    pub fn nodes(&self) -> Vec<Point> {
        (0..self.node_count()).filter_map(|i| self.node(i)).collect()
    }

    /// Marks an open contour whose end meets its start as closed.
    pub fn close_if_meets(mut self, tol: f64) -> Self {
        if !self.closed && !self.segments.is_empty() {
            let start = self.segments[0].p0;
            let last = self.segments.last_mut().unwrap();
            if last.p1.approx_eq(start, tol) {
                last.p1 = start;
                self.closed = true;
            }
        }
        self
    }

    pub fn reversed(&self) -> Contour {
        Contour {
            segments: self.segments.iter().rev().map(|s| s.reversed()).collect(),
            closed: self.closed,
        }
    }

    pub fn transform(&self, m: &Affine) -> Contour {
        Contour {
            segments: self.segments.iter().map(|s| s.transform(m)).collect(),
            closed: self.closed,
        }
    }

    pub fn arc_length(&self, tol: f64) -> Result<f64, GeometryError> {
        if !(tol > 0.0) {
            return Err(GeometryError::InvalidTolerance(tol));
        }
        Ok(self.segments.iter().map(|s| s.arc_length(tol)).sum())
    }

    /// Point at path time `t`: the integer part selects the segment.
    pub fn point_at_time(&self, t: f64) -> Option<Point> {
        let (seg, local) = self.locate(t)?;
        Some(self.segments[seg].eval_unchecked(local))
    }

    /// Tangent direction at path time `t`.
    pub fn direction_at_time(&self, t: f64) -> Option<Vec2> {
        let (seg, local) = self.locate(t)?;
        Some(self.segments[seg].tangent(local))
    }

    fn locate(&self, t: f64) -> Option<(usize, f64)> {
        let n = self.segments.len();
        if n == 0 || !t.is_finite() {
            return None;
        }
        let t = if self.closed {
            t.rem_euclid(n as f64)
        } else {
            t.clamp(0.0, n as f64)
        };
        let seg = (t.floor() as usize).min(n - 1);
        Some((seg, t - seg as f64))
    }

    /// Signed area of the closed polygon through all control points' curve
    /// (exact for cubics); positive for counter-clockwise contours.
    pub fn signed_area(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| {
                let [p0, p1, p2, p3] = s.points();
                // Green's theorem on the Bernstein form.
                (1.0 / 20.0)
                    * (p0.x * (6.0 * p1.y + 3.0 * p2.y + p3.y)
                        + 3.0 * p1.x * (-2.0 * p0.y + p2.y + p3.y)
                        + 3.0 * p2.x * (-p0.y - p1.y + 2.0 * p3.y)
                        + p3.x * (-p0.y - 3.0 * p1.y - 6.0 * p2.y))
            })
            .sum()
    }

    /// Polyline through `per_segment` samples of every segment (plus the
    /// final end point for open contours).
    pub fn flatten(&self, per_segment: usize) -> Vec<Point> {
        let per_segment = per_segment.max(1);
        let mut pts = Vec::with_capacity(self.segments.len() * per_segment + 1);
        for seg in &self.segments {
            for i in 0..per_segment {
                pts.push(seg.eval_unchecked(i as f64 / per_segment as f64));
            }
        }
        if !self.closed {
            if let Some(last) = self.segments.last() {
                pts.push(last.p1);
            }
        }
        pts
    }
}

/// Tight bounding box of every contour in `outline`.
pub fn bbox(outline: &[Contour]) -> Result<Rect, GeometryError> {
    outline
        .iter()
        .flat_map(|c| c.segments().iter())
        .map(|s| s.bbox())
        .reduce(Rect::union)
        .ok_or(GeometryError::EmptyOutline)
}

/// Arc length of a contour to relative accuracy `tol`.
pub fn arc_length(contour: &Contour, tol: f64) -> Result<f64, GeometryError> {
    contour.arc_length(tol)
}

/// Evaluates a segment at `t` in `[0, 1]`.
pub fn bezier_eval(seg: &CubicSegment, t: f64) -> Result<Point, GeometryError> {
    seg.eval(t)
}

pub fn transform(contour: &Contour, m: &Affine) -> Contour {
    contour.transform(m)
}

/// Rounds half away from zero, the export rounding policy.
pub fn round_half_away(v: f64) -> f64 {
    v.round()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn explicit_controls_segment() -> CubicSegment {
        CubicSegment::new(
            Point::new(0.0, 0.0),
            Point::new(26.8, -1.8),
            Point::new(51.4, 14.6),
            Point::new(60.0, 40.0),
        )
    }

    #[test]
    fn eval_endpoints() {
        let seg = explicit_controls_segment();
        assert_eq!(seg.eval(0.0).unwrap(), seg.p0);
        assert_eq!(seg.eval(1.0).unwrap(), seg.p1);
    }

    #[test]
    fn eval_rejects_out_of_range() {
        let seg = explicit_controls_segment();
        assert!(matches!(
            seg.eval(1.5),
            Err(GeometryError::ParameterOutOfRange(_))
        ));
        assert!(seg.eval(-1e-12).is_err());
        assert!(seg.eval(f64::NAN).is_err());
    }

    #[test]
    fn eval_midpoint_of_explicit_controls() {
        let p = explicit_controls_segment().eval(0.5).unwrap();
        assert!((p.x - 36.825).abs() < 1e-12, "{p}");
        assert!((p.y - 9.8).abs() < 1e-12, "{p}");
    }

    #[test]
    fn straight_arc_length() {
        let c = Contour::new(
            vec![CubicSegment::line(Point::new(0.0, 0.0), Point::new(20.0, 0.0))],
            false,
        )
        .unwrap();
        assert_eq!(c.arc_length(1e-6).unwrap(), 20.0);
    }

    #[test]
    fn degenerate_arc_length() {
        let c = Contour::new(vec![CubicSegment::degenerate(Point::new(3.0, 4.0))], false).unwrap();
        assert_eq!(c.arc_length(1e-6).unwrap(), 0.0);
    }

    #[test]
    fn arc_length_rejects_bad_tolerance() {
        let c = Contour::empty();
        assert!(c.arc_length(0.0).is_err());
        assert!(c.arc_length(-1.0).is_err());
    }

    #[test]
    fn slant_and_condense() {
        let p = Affine::slant_deg(15.0).apply(Point::new(0.0, 100.0));
        assert!((p.x - 26.794919243112).abs() < 1e-9);
        assert_eq!(p.y, 100.0);
        let q = Affine::scale_xy(0.8, 1.0).apply(Point::new(100.0, 50.0));
        assert_eq!(q, Point::new(80.0, 50.0));
    }

    #[test]
    fn identity_transform() {
        let c = Contour::new(vec![explicit_controls_segment()], false).unwrap();
        assert_eq!(c.transform(&Affine::IDENTITY), c);
    }

    #[test]
    fn bbox_of_line_and_arch() {
        let line = Contour::new(
            vec![CubicSegment::line(Point::new(0.0, 0.0), Point::new(10.0, 10.0))],
            false,
        )
        .unwrap();
        assert_eq!(
            bbox(&[line]).unwrap(),
            Rect {
                x_min: 0.0,
                y_min: 0.0,
                x_max: 10.0,
                y_max: 10.0
            }
        );
        let arch = Contour::new(
            vec![CubicSegment::new(
                Point::new(0.0, 0.0),
                Point::new(0.0, 20.0),
                Point::new(20.0, 20.0),
                Point::new(20.0, 0.0),
            )],
            false,
        )
        .unwrap();
        let r = bbox(&[arch]).unwrap();
        assert!((r.y_max - 15.0).abs() < 1e-12);
        assert_eq!(r.x_max, 20.0);
    }

    #[test]
    fn empty_bbox_is_an_error() {
        assert_eq!(bbox(&[]), Err(GeometryError::EmptyOutline));
        assert_eq!(bbox(&[Contour::empty()]), Err(GeometryError::EmptyOutline));
    }

    #[test]
    fn contour_rejects_gaps() {
        let a = CubicSegment::line(Point::new(0.0, 0.0), Point::new(1.0, 0.0));
        let b = CubicSegment::line(Point::new(1.0, 1e-3), Point::new(2.0, 0.0));
        assert_eq!(
            Contour::new(vec![a, b], false),
            Err(GeometryError::Disconnected(1))
        );
        assert_eq!(Contour::new(vec![a], true), Err(GeometryError::NotClosed));
    }

    #[test]
    fn angles_normalize_into_half_open_range() {
        assert_eq!(normalize_angle_deg(180.0), 180.0);
        assert_eq!(normalize_angle_deg(-180.0), 180.0);
        assert_eq!(normalize_angle_deg(540.0), 180.0);
        assert_eq!(normalize_angle_deg(-90.0), -90.0);
        assert_eq!(normalize_angle_deg(270.0), -90.0);
    }

    #[test]
    fn line_detection() {
        assert!(CubicSegment::line(Point::new(1.0, 2.0), Point::new(7.0, -3.0)).is_line());
        assert!(!explicit_controls_segment().is_line());
    }

    #[test]
    fn square_area_sign() {
        let pts = [(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)];
        let segs = (0..4)
            .map(|i| {
                let (a, b) = (pts[i], pts[(i + 1) % 4]);
                CubicSegment::line(Point::new(a.0, a.1), Point::new(b.0, b.1))
            })
            .collect();
        let c = Contour::new(segs, true).unwrap();
        assert!((c.signed_area() - 100.0).abs() < 1e-9);
        assert!((c.reversed().signed_area() + 100.0).abs() < 1e-9);
    }
}
