// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Pen envelopes: expanding a path stroked with per-node nibs into a closed
//! outline.
//!
//! Offsets are taken only at the path's nodes. Each edge then gets one node
//! per path node, joined by curves that leave and arrive in the source path's
//! directions, which keeps outlines small and interpolation compatible.

use thiserror::Error;

use crate::geometry::{
    normalize_angle_deg, Affine, Contour, CubicSegment, GeometryError, Point, Vec2, EPSILON,
};
use crate::hobby::segment_with_directions;

/// Control-handle ratio for a quarter circle.
const KAPPA: f64 = 0.552_284_749_830_793_4;

/// An elliptical nib, or a razor when `height` is zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Nib {
    /// Full extent along the nib's own x axis.
    pub width: f64,
    /// Full extent along the nib's own y axis.
    pub height: f64,
    /// Rotation of the nib's x axis, degrees.
    pub angle: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NibKind {
    Razor,
    Ellipse,
}

impl Nib {
    pub fn new(width: f64, height: f64, angle: f64) -> Result<Nib, PenError> {
        let nib = Nib {
            width,
            height,
            angle,
        };
        if !(width >= 0.0 && height >= 0.0) || !angle.is_finite() || !width.is_finite() || !height.is_finite() {
            return Err(PenError::InvalidNib(nib));
        }
        Ok(nib)
    }

    pub fn razor(width: f64, angle: f64) -> Nib {
        Nib {
            width,
            height: 0.0,
            angle,
        }
    }

    /// A circle of the given diameter.
    pub fn circle(diameter: f64) -> Nib {
        Nib {
            width: diameter,
            height: diameter,
            angle: 0.0,
        }
    }

    pub fn kind(&self) -> NibKind {
        if self.height == 0.0 {
            NibKind::Razor
        } else {
            NibKind::Ellipse
        }
    }

    /// Linear map taking the unit circle onto the nib outline.
    pub fn matrix(&self) -> Affine {
        Affine::rotate_deg(self.angle) * Affine::scale_xy(0.5 * self.width, 0.5 * self.height)
    }

    /// Radius of the smallest circle around the nib.
    pub fn circumradius(&self) -> f64 {
        0.5 * self.width.max(self.height)
    }

    /// The nib under the linear part of `m`. Similarities act on the fields
    /// directly; anything else is refactored into principal axes, keeping
    /// the orientation nearest to where `m` sends the old x axis.
    pub fn transform(&self, m: &Affine) -> Nib {
        let (a, b, c, d) = (m.a, m.b, m.c, m.d);
        let scale = (a * a + b * b).sqrt();
        let tol = 1e-12 * (1.0 + scale);
        if (a - d).abs() <= tol && (b + c).abs() <= tol {
            return Nib {
                width: self.width * scale,
                height: self.height * scale,
                angle: normalize_angle_deg(self.angle + b.atan2(a).to_degrees()),
            };
        }
        let axis = m.apply_vec(Vec2::from_angle_deg(self.angle));
        let reference = axis.angle_deg();
        if self.kind() == NibKind::Razor {
            return Nib {
                width: self.width * axis.length(),
                height: 0.0,
                angle: reference,
            };
        }
        let k = m.linear() * self.matrix();
        let (s1, s2, phi) = singular_values(&k);
        let height = if s2 <= 1e-12 * s1 { 0.0 } else { 2.0 * s2 };
        let mut angle = phi.to_degrees();
        if (s1 - s2).abs() <= 1e-12 * s1 {
            angle = reference;
        } else {
            // the ellipse is symmetric under half turns
            let turns = ((reference - angle) / 180.0).round();
            angle += 180.0 * turns;
        }
        Nib {
            width: 2.0 * s1,
            height,
            angle: normalize_angle_deg(angle),
        }
    }

    /// Boundary point (relative to the centre) extremal in direction `n`.
    fn support(&self, n: Vec2) -> Vec2 {
        let m = self.matrix();
        // M^T n
        let mt = Vec2::new(m.a * n.x + m.b * n.y, m.c * n.x + m.d * n.y);
        let len = mt.length();
        if len <= 1e-12 * (1.0 + self.circumradius()) {
            return m.apply_vec(Vec2::new(1.0, 0.0));
        }
        m.apply_vec(mt * (1.0 / len))
    }
}

/// Singular values and the angle (radians) of the major output axis of the
/// linear part of `m`.
fn singular_values(m: &Affine) -> (f64, f64, f64) {
    // m = [[a, c], [b, d]] acting on column vectors
    let (a, b, c, d) = (m.a, m.b, m.c, m.d);
    let e = 0.5 * (a + d);
    let f = 0.5 * (a - d);
    let g = 0.5 * (b + c);
    let h = 0.5 * (b - c);
    let q = (e * e + h * h).sqrt();
    let r = (f * f + g * g).sqrt();
    let a1 = g.atan2(f);
    let a2 = h.atan2(e);
    (q + r, (q - r).abs(), 0.5 * (a2 + a1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutMode {
    Absolute,
    /// Added to the path direction at the terminal.
    Relative,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NodeOverride {
    Nib(Nib),
    Cut { nib: Nib, angle: f64, mode: CutMode },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeStyle {
    pub node: usize,
    pub style: NodeOverride,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Envelope {
    /// Complete closed outline; only for open paths.
    pub result: Option<Contour>,
    pub left: Contour,
    pub right: Contour,
    pub begin_cap: Option<Contour>,
    pub end_cap: Option<Contour>,
    pub warnings: Vec<String>,
}

impl Envelope {
    /// Contours to fill: the result for open paths, otherwise the right edge
    /// and the reversed left edge.
    pub fn outline(&self) -> Vec<Contour> {
        match &self.result {
            Some(c) => vec![c.clone()],
            None => vec![self.right.clone(), self.left.reversed()],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum PenError {
    #[error("a stroked path needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("node {index} is out of range for a path with {count} nodes")]
    NodeOutOfRange { index: usize, count: usize },
    #[error("node {0} has more than one nib or cut")]
    DuplicateStyle(usize),
    #[error("cut at node {0}: cuts apply only to the end nodes of an open path")]
    CutNotTerminal(usize),
    #[error("cut at node {0} is parallel to the path")]
    CutParallel(usize),
    #[error("all nodes of the stroked path coincide")]
    DegeneratePath,
    #[error("invalid nib {0:?}")]
    InvalidNib(Nib),
    #[error("spacing must be positive, got {0}")]
    InvalidSpacing(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Incoming and outgoing unit tangents at every node. Degenerate segments
/// borrow the direction of the nearest proper neighbour.
fn node_tangents(path: &Contour) -> Result<Vec<(Vec2, Vec2)>, PenError> {
    let segs = path.segments();
    let n = segs.len();
    let own: Vec<Option<(Vec2, Vec2)>> = segs
        .iter()
        .map(|s| {
            (!s.is_degenerate()).then(|| (s.start_tangent().normalize(), s.end_tangent().normalize()))
        })
        .collect();
    if own.iter().all(Option::is_none) {
        return Err(PenError::DegeneratePath);
    }
    let closed = path.is_closed();
    let find = |start: usize, forward: bool| -> (Vec2, Vec2) {
        let mut i = start as isize;
        loop {
            let idx = if closed {
                i.rem_euclid(n as isize) as usize
            } else {
                i.clamp(0, n as isize - 1) as usize
            };
            if let Some(t) = own[idx] {
                return t;
            }
            i += if forward { 1 } else { -1 };
            if !closed && (i < 0 || i >= n as isize) {
                // ran off one end; search the other way
                return own.iter().flatten().copied().next().unwrap();
            }
        }
    };
    let seg_dirs: Vec<(Vec2, Vec2)> = (0..n)
        .map(|i| match own[i] {
            Some(t) => t,
            None => {
                let ahead = find(i, true);
                let behind = find(i, false);
                (ahead.0, behind.1)
            }
        })
        .collect();
    let count = path.node_count();
    Ok((0..count)
        .map(|k| {
            let out = if k < n { seg_dirs[k].0 } else { seg_dirs[n - 1].1 };
            let inc = if k > 0 {
                seg_dirs[k - 1].1
            } else if closed {
                seg_dirs[n - 1].1
            } else {
                seg_dirs[0].0
            };
            (inc, out)
        })
        .collect())
}

/// Direction used to place offsets: the tangent at smooth nodes, the
/// bisector at corners.
fn offset_direction(inc: Vec2, out: Vec2) -> Vec2 {
    if inc.cross(out).abs() < 1e-12 && inc.dot(out) > 0.0 {
        return out;
    }
    let mid = inc + out;
    if mid.length() < 1e-9 {
        out
    } else {
        mid.normalize()
    }
}

fn edge_segment(source: &CubicSegment, a: Point, a_dir: Vec2, b: Point, b_dir: Vec2) -> CubicSegment {
    if source.is_line() {
        CubicSegment::line(a, b)
    } else {
        segment_with_directions(a, a_dir.angle_deg(), b, b_dir.angle_deg())
    }
}

/// Half of the nib outline from `from` to `to` around the side facing
/// `outward`, as two quarter arcs.
fn nib_arc(nib: &Nib, centre: Point, from: Point, to: Point, outward: Vec2) -> Vec<CubicSegment> {
    let m = nib.matrix();
    let det = m.determinant();
    if nib.kind() == NibKind::Razor || det.abs() <= EPSILON {
        return vec![CubicSegment::line(from, to)];
    }
    let inv = |v: Vec2| Vec2::new((m.d * v.x - m.c * v.y) / det, (-m.b * v.x + m.a * v.y) / det);
    let u0 = inv(from - centre);
    let u1 = inv(to - centre);
    let mut mid = u0.turn_left();
    if m.apply_vec(mid).dot(outward) < 0.0 {
        mid = -mid;
    }
    let quarter = |a: Vec2, b: Vec2| {
        let map = |v: Vec2| centre + m.apply_vec(v);
        CubicSegment::new(map(a), map(a + b * KAPPA), map(b + a * KAPPA), map(b))
    };
    let mut first = quarter(u0, mid);
    let mut second = quarter(mid, u1);
    first.p0 = from;
    second.p1 = to;
    second.p0 = first.p1;
    vec![first, second]
}

fn proper_crossing(a0: Point, a1: Point, b0: Point, b1: Point) -> bool {
    let d1 = (a1 - a0).cross(b0 - a0);
    let d2 = (a1 - a0).cross(b1 - a0);
    let d3 = (b1 - b0).cross(a0 - b0);
    let d4 = (b1 - b0).cross(a1 - b0);
    let eps = 1e-9 * (1.0 + (a1 - a0).length() * (b1 - b0).length());
    ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps))
}

fn edges_cross(left: &Contour, right: &Contour) -> bool {
    let mut a = left.flatten(16);
    let mut b = right.flatten(16);
    if left.is_closed() {
        a.push(a[0]);
    }
    if right.is_closed() {
        b.push(b[0]);
    }
    a.windows(2)
        .any(|p| b.windows(2).any(|q| proper_crossing(p[0], p[1], q[0], q[1])))
}

/// Expands `path` stroked with `default_nib`, overridden per node by
/// `styles`.
pub fn pen_stroke(path: &Contour, default_nib: &Nib, styles: &[NodeStyle]) -> Result<Envelope, PenError> {
    let count = path.node_count();
    if count < 2 {
        return Err(PenError::TooFewNodes(count));
    }
    let closed = path.is_closed();
    let last = count - 1;
    let mut overrides: Vec<Option<NodeOverride>> = vec![None; count];
    for s in styles {
        if s.node >= count {
            return Err(PenError::NodeOutOfRange { index: s.node, count });
        }
        if overrides[s.node].is_some() {
            return Err(PenError::DuplicateStyle(s.node));
        }
        if let NodeOverride::Cut { .. } = s.style {
            if closed || (s.node != 0 && s.node != last) {
                return Err(PenError::CutNotTerminal(s.node));
            }
        }
        overrides[s.node] = Some(s.style);
    }
    Nib::new(default_nib.width, default_nib.height, default_nib.angle)?;

    let tangents = node_tangents(path)?;
    let nodes = path.nodes();
    let mut left = Vec::with_capacity(count);
    let mut right = Vec::with_capacity(count);
    for k in 0..count {
        let nib = match overrides[k] {
            Some(NodeOverride::Nib(n)) | Some(NodeOverride::Cut { nib: n, .. }) => n,
            None => *default_nib,
        };
        Nib::new(nib.width, nib.height, nib.angle)?;
        let (inc, out) = tangents[k];
        let d = if !closed && k == 0 {
            out
        } else if !closed && k == last {
            inc
        } else {
            offset_direction(inc, out)
        };
        let p = nib.support(d.turn_left());
        let (mut l, mut r) = (nodes[k] + p, nodes[k] - p);
        if let Some(NodeOverride::Cut { angle, mode, .. }) = overrides[k] {
            let cut_angle = match mode {
                CutMode::Absolute => angle,
                CutMode::Relative => d.angle_deg() + angle,
            };
            let c = Vec2::from_angle_deg(cut_angle);
            let denom = d.cross(c);
            if denom.abs() < 1e-9 {
                return Err(PenError::CutParallel(k));
            }
            let limit = nib.circumradius();
            let slide = |q: Point| {
                let t = ((nodes[k] - q).cross(c) / denom).clamp(-limit, limit);
                q + d * t
            };
            l = slide(l);
            r = slide(r);
        }
        left.push(l);
        right.push(r);
    }

    let src = path.segments();
    let edge = |pts: &[Point]| -> Result<Contour, PenError> {
        let segs: Vec<CubicSegment> = (0..src.len())
            .map(|i| {
                let j = (i + 1) % count;
                edge_segment(&src[i], pts[i], tangents[i].1, pts[j], tangents[j].0)
            })
            .collect();
        Ok(Contour::new_snapped(segs, closed)?)
    };
    let left_edge = edge(&left)?;
    let right_edge = edge(&right)?;

    let mut warnings = Vec::new();
    if edges_cross(&left_edge, &right_edge) {
        warnings.push("envelope edges cross; the outline self-intersects".to_string());
    }

    if closed {
        return Ok(Envelope {
            result: None,
            left: left_edge,
            right: right_edge,
            begin_cap: None,
            end_cap: None,
            warnings,
        });
    }

    let cap = |k: usize, from: Point, to: Point, outward: Vec2| -> Vec<CubicSegment> {
        match overrides[k] {
            Some(NodeOverride::Nib(nib)) => nib_arc(&nib, nodes[k], from, to, outward),
            _ => vec![CubicSegment::line(from, to)],
        }
    };
    let end_segs = cap(last, right[last], left[last], tangents[last].0);
    let begin_segs = cap(0, left[0], right[0], -tangents[0].1);

    let mut all: Vec<CubicSegment> = right_edge.segments().to_vec();
    all.extend_from_slice(&end_segs);
    all.extend_from_slice(left_edge.reversed().segments());
    all.extend_from_slice(&begin_segs);
    let result = Contour::new_snapped(all, true)?;

    Ok(Envelope {
        result: Some(result),
        left: left_edge,
        right: right_edge,
        begin_cap: Some(Contour::new_snapped(begin_segs, false)?),
        end_cap: Some(Contour::new_snapped(end_segs, false)?),
        warnings,
    })
}

/// Eight-point Gauss-Legendre nodes and weights on [-1, 1].
const GAUSS: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
];

/// Pieces per segment in the arc-length table.
const PIECES: usize = 64;

fn length_between(seg: &CubicSegment, t0: f64, t1: f64) -> f64 {
    let half = 0.5 * (t1 - t0);
    let mid = 0.5 * (t0 + t1);
    GAUSS
        .iter()
        .map(|&(x, w)| w * seg.deriv(mid + half * x).length())
        .sum::<f64>()
        * half
}

/// Cumulative arc lengths at uniform parameter steps of every segment.
struct ArcTable<'a> {
    path: &'a Contour,
    /// `PIECES + 1` entries per segment, offset by the length before it.
    cumulative: Vec<Vec<f64>>,
}

impl<'a> ArcTable<'a> {
    fn new(path: &'a Contour) -> Self {
        let mut acc = 0.0;
        let cumulative = path
            .segments()
            .iter()
            .map(|seg| {
                let mut row = Vec::with_capacity(PIECES + 1);
                row.push(acc);
                for j in 0..PIECES {
                    let t0 = j as f64 / PIECES as f64;
                    let t1 = (j + 1) as f64 / PIECES as f64;
                    acc += length_between(seg, t0, t1);
                    row.push(acc);
                }
                row
            })
            .collect();
        ArcTable { path, cumulative }
    }

    fn total(&self) -> f64 {
        self.cumulative.last().map_or(0.0, |row| row[PIECES])
    }

    /// Segment index and local parameter at arc length `s`.
    fn locate(&self, s: f64) -> (usize, f64) {
        let n = self.path.len();
        let i = self.cumulative.partition_point(|row| row[PIECES] < s).min(n - 1);
        let row = &self.cumulative[i];
        if s <= row[0] {
            return (i, 0.0);
        }
        if s >= row[PIECES] {
            return (i, 1.0);
        }
        let j = (row.partition_point(|&c| c < s).max(1) - 1).min(PIECES - 1);
        let seg = &self.path.segments()[i];
        let t0 = j as f64 / PIECES as f64;
        let target = s - row[j];
        let (mut lo, mut hi) = (t0, (j + 1) as f64 / PIECES as f64);
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            if length_between(seg, t0, mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (i, 0.5 * (lo + hi))
    }
}

fn stations(path: &Contour, spacing: f64) -> Result<(ArcTable<'_>, Vec<f64>), PenError> {
    if !(spacing > 0.0) || !spacing.is_finite() {
        return Err(PenError::InvalidSpacing(spacing));
    }
    if path.is_empty() {
        return Err(GeometryError::EmptyOutline.into());
    }
    let table = ArcTable::new(path);
    let total = table.total();
    if !total.is_finite() {
        return Err(GeometryError::NonFinite(0).into());
    }
    let mut at = Vec::new();
    if path.is_closed() {
        let count = (total / spacing + 1e-9).floor() as usize;
        at.extend((0..count.max(1)).map(|k| k as f64 * spacing));
    } else {
        let full = (total / spacing + 1e-9).floor() as usize;
        at.extend((0..=full).map(|k| (k as f64 * spacing).min(total)));
        if total - full as f64 * spacing > 1e-6 * total.max(1.0) {
            at.push(total);
        }
    }
    Ok((table, at))
}

/// Points at arc lengths 0, s, 2s, ... along `path`. Open paths also get
/// their end point; closed paths stop before the seam.
pub fn place_dots(path: &Contour, spacing: f64) -> Result<Vec<Point>, PenError> {
    let (table, at) = stations(path, spacing)?;
    Ok(at
        .iter()
        .map(|&s| {
            let (i, t) = table.locate(s);
            path.segments()[i].eval(t.clamp(0.0, 1.0)).expect("clamped")
        })
        .collect())
}

/// Dot positions paired with the path direction there, in degrees.
pub fn place_arrows(path: &Contour, spacing: f64) -> Result<Vec<(Point, f64)>, PenError> {
    let (table, at) = stations(path, spacing)?;
    Ok(at
        .iter()
        .map(|&s| {
            let (i, t) = table.locate(s);
            let t = t.clamp(0.0, 1.0);
            let seg = &path.segments()[i];
            (seg.eval(t).expect("clamped"), seg.tangent(t).angle_deg())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_path(a: Point, b: Point) -> Contour {
        Contour::new(vec![CubicSegment::line(a, b)], false).unwrap()
    }

    #[test]
    fn razor_on_a_line_gives_a_rectangle() {
        let path = line_path(Point::new(0.0, 0.0), Point::new(100.0, 0.0));
        let env = pen_stroke(&path, &Nib::razor(20.0, 90.0), &[]).unwrap();
        let result = env.result.unwrap();
        let corners: Vec<Point> = result.nodes();
        let want = [(0.0, -10.0), (100.0, -10.0), (100.0, 10.0), (0.0, 10.0)];
        assert_eq!(corners.len(), 4);
        for (p, (x, y)) in corners.iter().zip(want) {
            assert!(p.approx_eq(Point::new(x, y), 1e-12), "{p}");
        }
        assert!(result.segments().iter().all(|s| s.is_line()));
        assert!(result.signed_area() > 0.0);
    }

    #[test]
    fn similarity_acts_on_fields() {
        let nib = Nib::new(10.0, 4.0, 30.0).unwrap();
        let t = nib.transform(&(Affine::rotate_deg(20.0) * Affine::scale(2.0)));
        assert!((t.width - 20.0).abs() < 1e-12);
        assert!((t.height - 8.0).abs() < 1e-12);
        assert!((t.angle - 50.0).abs() < 1e-9);
    }

    #[test]
    fn general_transform_keeps_the_outline() {
        let nib = Nib::new(10.0, 4.0, 30.0).unwrap();
        let m = Affine::scale_xy(1.1, 0.5) * Affine::rotate_deg(-15.0);
        let t = nib.transform(&m);
        // both describe the same ellipse: compare support points
        for k in 0..12 {
            let n = Vec2::from_angle_deg(k as f64 * 30.0 + 1.0);
            let want = m.apply_vec(nib.support(Vec2::new(
                m.a * n.x + m.b * n.y,
                m.c * n.x + m.d * n.y,
            )));
            let got = t.support(n);
            assert!((got - want).length() < 1e-9, "{k}");
        }
    }

    #[test]
    fn razor_stays_a_razor() {
        let nib = Nib::razor(10.0, 0.0);
        let t = nib.transform(&Affine::scale_xy(2.0, 3.0));
        assert_eq!(t.kind(), NibKind::Razor);
        assert!((t.width - 20.0).abs() < 1e-12);
    }

    #[test]
    fn cut_must_be_terminal() {
        let path = Contour::new(
            vec![
                CubicSegment::line(Point::new(0.0, 0.0), Point::new(10.0, 0.0)),
                CubicSegment::line(Point::new(10.0, 0.0), Point::new(20.0, 5.0)),
            ],
            false,
        )
        .unwrap();
        let style = NodeStyle {
            node: 1,
            style: NodeOverride::Cut {
                nib: Nib::razor(4.0, 90.0),
                angle: 45.0,
                mode: CutMode::Absolute,
            },
        };
        assert_eq!(
            pen_stroke(&path, &Nib::razor(4.0, 90.0), &[style]),
            Err(PenError::CutNotTerminal(1))
        );
    }

    #[test]
    fn parallel_cut_is_rejected() {
        let path = line_path(Point::new(0.0, 0.0), Point::new(10.0, 0.0));
        let style = NodeStyle {
            node: 0,
            style: NodeOverride::Cut {
                nib: Nib::razor(4.0, 90.0),
                angle: 180.0,
                mode: CutMode::Absolute,
            },
        };
        assert_eq!(
            pen_stroke(&path, &Nib::razor(4.0, 90.0), &[style]),
            Err(PenError::CutParallel(0))
        );
    }

    #[test]
    fn cut_slides_offsets_onto_the_cut_line() {
        let path = line_path(Point::new(0.0, 0.0), Point::new(100.0, 0.0));
        let style = NodeStyle {
            node: 0,
            style: NodeOverride::Cut {
                nib: Nib::razor(20.0, 90.0),
                angle: 45.0,
                mode: CutMode::Absolute,
            },
        };
        let env = pen_stroke(&path, &Nib::razor(20.0, 90.0), &[style]).unwrap();
        assert!(env.left.node(0).unwrap().approx_eq(Point::new(10.0, 10.0), 1e-12));
        assert!(env.right.node(0).unwrap().approx_eq(Point::new(-10.0, -10.0), 1e-12));
    }

    #[test]
    fn nib_terminal_is_a_half_ellipse() {
        let path = line_path(Point::new(0.0, 0.0), Point::new(100.0, 0.0));
        let round = Nib::circle(20.0);
        let styles = [
            NodeStyle { node: 0, style: NodeOverride::Nib(round) },
            NodeStyle { node: 1, style: NodeOverride::Nib(round) },
        ];
        let env = pen_stroke(&path, &round, &styles).unwrap();
        let end = env.end_cap.unwrap();
        assert_eq!(end.len(), 2);
        assert!(end.node(1).unwrap().approx_eq(Point::new(110.0, 0.0), 1e-9));
        let begin = env.begin_cap.unwrap();
        assert!(begin.node(1).unwrap().approx_eq(Point::new(-10.0, 0.0), 1e-9));
        assert!(env.result.unwrap().signed_area() > 0.0);
    }

    #[test]
    fn degenerate_path_is_rejected() {
        let p = Point::new(3.0, 3.0);
        let path = Contour::new(vec![CubicSegment::degenerate(p)], false).unwrap();
        assert_eq!(
            pen_stroke(&path, &Nib::circle(2.0), &[]),
            Err(PenError::DegeneratePath)
        );
    }

    #[test]
    fn dots_on_a_line() {
        let path = line_path(Point::new(0.0, 0.0), Point::new(100.0, 0.0));
        let dots = place_dots(&path, 20.0).unwrap();
        let xs: Vec<f64> = dots.iter().map(|p| p.x).collect();
        assert_eq!(xs.len(), 6);
        for (x, want) in xs.iter().zip([0.0, 20.0, 40.0, 60.0, 80.0, 100.0]) {
            assert!((x - want).abs() < 1e-6);
        }
        assert_eq!(place_dots(&path, 0.0), Err(PenError::InvalidSpacing(0.0)));
        assert_eq!(place_dots(&path, 30.0).unwrap().len(), 5);
    }

    #[test]
    fn arrows_follow_the_line() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(100.0, 0.0);
        for (_, angle) in place_arrows(&line_path(a, b), 50.0).unwrap() {
            assert!(angle.abs() < 1e-9);
        }
        for (_, angle) in place_arrows(&line_path(b, a), 50.0).unwrap() {
            assert!((angle.abs() - 180.0).abs() < 1e-9);
        }
    }
}
