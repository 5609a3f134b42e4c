// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Hobby's smoothing algorithm: turns knots, joint kinds and optional
//! direction constraints into explicit cubic control points.
//!
//! Tension and end curl are both fixed at 1. A curve run is a maximal chain
//! of `..` joints; runs are further split at every knot that carries a
//! direction, so each run is an independent tridiagonal system in the
//! departure angles. A closed path with no breakpoints at all gives a cyclic
//! tridiagonal system instead.

use std::f64::consts::SQRT_2;

use thiserror::Error;

use crate::geometry::{
    normalize_angle_deg, normalize_angle_rad, Contour, CubicSegment, Point, Vec2, EPSILON,
};

const TENSION: f64 = 1.0;
const CURL: f64 = 1.0;

/// How consecutive knots are joined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JointKind {
    /// `..`: a smooth curve.
    Curve,
    /// `--`: a straight line; neighbouring curves see a free (curl) end.
    Line,
    /// `---`: a straight line whose direction is imposed on neighbouring curves.
    SmoothLine,
}

/// An on-curve point plus the constraints written next to it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Knot {
    pub point: Point,
    /// Direction (degrees) the path arrives with.
    pub dir_in: Option<f64>,
    /// Direction (degrees) the path leaves with.
    pub dir_out: Option<f64>,
    /// Explicit controls for the joint that leaves this knot.
    pub explicit_controls_after: Option<(Point, Point)>,
}

impl Knot {
    pub fn new(point: Point) -> Self {
        Knot {
            point,
            dir_in: None,
            dir_out: None,
            explicit_controls_after: None,
        }
    }

    pub fn with_dir_in(mut self, degrees: f64) -> Self {
        self.dir_in = Some(normalize_angle_deg(degrees));
        self
    }

    pub fn with_dir_out(mut self, degrees: f64) -> Self {
        self.dir_out = Some(normalize_angle_deg(degrees));
        self
    }

    /// Same direction on both sides.
    pub fn with_dir(self, degrees: f64) -> Self {
        self.with_dir_in(degrees).with_dir_out(degrees)
    }

    pub fn with_controls(mut self, c0: Point, c1: Point) -> Self {
        self.explicit_controls_after = Some((c0, c1));
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathSpec {
    pub knots: Vec<Knot>,
    pub joints: Vec<JointKind>,
    pub cyclic: bool,
}

impl PathSpec {
    pub fn new(knots: Vec<Knot>, joints: Vec<JointKind>, cyclic: bool) -> Self {
        PathSpec {
            knots,
            joints,
            cyclic,
        }
    }

    /// All joints of the same kind.
    pub fn uniform(points: &[Point], joint: JointKind, cyclic: bool) -> Self {
        let joints = if cyclic {
            points.len()
        } else {
            points.len().saturating_sub(1)
        };
        PathSpec::new(
            points.iter().copied().map(Knot::new).collect(),
            vec![joint; joints],
            cyclic,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum HobbyError {
    #[error("a path needs at least 2 knots, got {0}")]
    TooFewKnots(usize),
    #[error("expected {expected} joints for {knots} knots, found {found}")]
    JointCount {
        knots: usize,
        expected: usize,
        found: usize,
    },
    #[error("knot {knot} has both explicit controls and a direction on its {side} side")]
    ConflictingConstraint { knot: usize, side: &'static str },
    #[error("knot {0} has a non-finite coordinate or direction")]
    NonFinite(usize),
    #[error("knot index {index} out of range for a path with {count} knots")]
    KnotOutOfRange { index: usize, count: usize },
}

/// Non-fatal condition found while solving.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveWarning {
    pub joint: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolvedPath {
    pub contour: Contour,
    pub warnings: Vec<SolveWarning>,
}

/// Hobby's velocity function for tension 1, capped at 4 like METAFONT's.
pub fn velocity(theta: f64, phi: f64) -> f64 {
    let (st, ct) = theta.sin_cos();
    let (sf, cf) = phi.sin_cos();
    let num = 2.0 + SQRT_2 * (st - sf / 16.0) * (sf - st / 16.0) * (ct - cf);
    let denom = 1.0 + 0.5 * (5f64.sqrt() - 1.0) * ct + 0.5 * (3.0 - 5f64.sqrt()) * cf;
    if denom <= 0.0 || num >= 4.0 * denom {
        4.0
    } else {
        num / denom
    }
}

/// Controls for one segment given its departure angle `theta` and arrival
/// angle `phi`, both measured in radians relative to the chord.
pub fn segment_controls(p0: Point, p1: Point, theta: f64, phi: f64) -> CubicSegment {
    let chord = p1 - p0;
    let a = velocity(theta, phi) / (3.0 * TENSION);
    let b = velocity(phi, theta) / (3.0 * TENSION);
    CubicSegment::new(
        p0,
        p0 + chord.rotate(theta) * a,
        p1 - chord.rotate(-phi) * b,
        p1,
    )
}

/// A segment leaving `p0` at `dir0` degrees and arriving at `p1` heading
/// `dir1` degrees.
pub fn segment_with_directions(p0: Point, dir0: f64, p1: Point, dir1: f64) -> CubicSegment {
    let chord = p1 - p0;
    if chord.length() <= EPSILON {
        return CubicSegment::degenerate(p0);
    }
    let chord_angle = chord.atan2();
    let theta = normalize_angle_rad(dir0.to_radians() - chord_angle);
    let phi = normalize_angle_rad(chord_angle - dir1.to_radians());
    segment_controls(p0, p1, theta, phi)
}

/// Direction (degrees) of the tangent at a knot: outgoing where the knot
/// starts a segment, incoming at the end of an open path.
pub fn direction_at(contour: &Contour, knot_index: usize) -> Result<f64, HobbyError> {
    let count = contour.node_count();
    if knot_index >= count {
        return Err(HobbyError::KnotOutOfRange {
            index: knot_index,
            count,
        });
    }
    let segs = contour.segments();
    let v = if knot_index < segs.len() {
        segs[knot_index].start_tangent()
    } else {
        segs[knot_index - 1].end_tangent()
    };
    Ok(v.angle_deg())
}

/// One end of a run: either a fixed absolute direction or a free end.
#[derive(Clone, Copy, Debug)]
enum End {
    Given(f64),
    Curl,
}

pub fn solve(spec: &PathSpec) -> Result<SolvedPath, HobbyError> {
    validate(spec)?;
    let n = spec.knots.len();
    let joint_count = spec.joints.len();
    let next = |k: usize| (k + 1) % n;
    let mut warnings = Vec::new();

    // Joints whose segment is determined without solving.
    let mut fixed: Vec<Option<CubicSegment>> = vec![None; joint_count];
    for (j, kind) in spec.joints.iter().enumerate() {
        let a = spec.knots[j].point;
        let b = spec.knots[next(j)].point;
        if let Some((c0, c1)) = spec.knots[j].explicit_controls_after {
            fixed[j] = Some(CubicSegment::new(a, c0, c1, b));
        } else if *kind != JointKind::Curve {
            fixed[j] = Some(CubicSegment::line(a, b));
        } else if a.distance(b) <= EPSILON {
            warnings.push(SolveWarning {
                joint: j,
                message: format!("knots {j} and {} coincide; emitting a degenerate segment", next(j)),
            });
            fixed[j] = Some(CubicSegment::degenerate(a));
        }
    }
    let free = |j: usize| fixed[j].is_none();

    // Direction a curve leaving knot k must start with, if any.
    let start_end = |k: usize| -> End {
        let knot = &spec.knots[k];
        if let Some(d) = knot.dir_out.or(knot.dir_in) {
            return End::Given(d.to_radians());
        }
        let incoming = if spec.cyclic || k > 0 {
            Some((k + n - 1) % n)
        } else {
            None
        };
        incoming
            .and_then(|j| inherited_direction(spec, &fixed, j, true))
            .map_or(End::Curl, End::Given)
    };
    // Direction a curve arriving at knot k must end with, if any.
    let finish_end = |k: usize| -> End {
        let knot = &spec.knots[k];
        if let Some(d) = knot.dir_in.or(knot.dir_out) {
            return End::Given(d.to_radians());
        }
        let outgoing = if spec.cyclic || k + 1 < n { Some(k) } else { None };
        outgoing
            .and_then(|j| inherited_direction(spec, &fixed, j, false))
            .map_or(End::Curl, End::Given)
    };

    let is_break = |k: usize| -> bool {
        let knot = &spec.knots[k];
        if knot.dir_in.is_some() || knot.dir_out.is_some() {
            return true;
        }
        if !spec.cyclic && (k == 0 || k == n - 1) {
            return true;
        }
        let incoming = (k + n - 1) % n;
        !(free(incoming) && free(k))
    };

    let mut segments: Vec<Option<CubicSegment>> = fixed.clone();

    let breaks: Vec<usize> = (0..n).filter(|&k| is_break(k)).collect();
    if spec.cyclic && breaks.is_empty() {
        let pts: Vec<Point> = spec.knots.iter().map(|k| k.point).collect();
        for (j, seg) in solve_cyclic(&pts).into_iter().enumerate() {
            segments[j] = Some(seg);
        }
    } else {
        // Walk joints starting at a breakpoint, collecting runs of free joints.
        let start = if spec.cyclic { breaks[0] } else { 0 };
        let mut run: Vec<usize> = Vec::new();
        let mut k = start;
        for _ in 0..joint_count {
            if free(k) {
                if run.is_empty() {
                    run.push(k);
                }
                run.push(next(k));
                if is_break(next(k)) {
                    solve_run(spec, &run, start_end(run[0]), finish_end(*run.last().unwrap()), &mut segments);
                    run.clear();
                }
            }
            k = next(k);
        }
        debug_assert!(run.is_empty());
    }

    let segments: Vec<CubicSegment> = segments
        .into_iter()
        .map(|s| s.expect("every joint resolved"))
        .collect();
    let contour = Contour::new(segments, spec.cyclic).expect("solved segments share knots");
    Ok(SolvedPath { contour, warnings })
}

fn validate(spec: &PathSpec) -> Result<(), HobbyError> {
    let n = spec.knots.len();
    if n < 2 {
        return Err(HobbyError::TooFewKnots(n));
    }
    let expected = if spec.cyclic { n } else { n - 1 };
    if spec.joints.len() != expected {
        return Err(HobbyError::JointCount {
            knots: n,
            expected,
            found: spec.joints.len(),
        });
    }
    for (i, k) in spec.knots.iter().enumerate() {
        let dirs_ok = k.dir_in.map_or(true, f64::is_finite) && k.dir_out.map_or(true, f64::is_finite);
        let ctrl_ok = k
            .explicit_controls_after
            .map_or(true, |(a, b)| a.is_finite() && b.is_finite());
        if !k.point.is_finite() || !dirs_ok || !ctrl_ok {
            return Err(HobbyError::NonFinite(i));
        }
        if k.explicit_controls_after.is_some() {
            if i >= expected {
                // controls after the final knot of an open path have no joint
                return Err(HobbyError::ConflictingConstraint {
                    knot: i,
                    side: "outgoing",
                });
            }
            if k.dir_out.is_some() {
                return Err(HobbyError::ConflictingConstraint {
                    knot: i,
                    side: "outgoing",
                });
            }
            let j = (i + 1) % n;
            if spec.knots[j].dir_in.is_some() {
                return Err(HobbyError::ConflictingConstraint {
                    knot: j,
                    side: "incoming",
                });
            }
        }
    }
    Ok(())
}

/// Direction (radians) a fixed joint imposes on the curve next to it.
/// `at_end` selects the joint's end (for a curve that follows it) rather
/// than its start (for a curve that precedes it).
fn inherited_direction(
    spec: &PathSpec,
    fixed: &[Option<CubicSegment>],
    joint: usize,
    at_end: bool,
) -> Option<f64> {
    let seg = fixed[joint]?;
    if spec.knots[joint].explicit_controls_after.is_some() {
        let v: Vec2 = if at_end {
            seg.p1 - seg.c1
        } else {
            seg.c0 - seg.p0
        };
        return (v.length() > EPSILON).then(|| v.atan2());
    }
    match spec.joints[joint] {
        JointKind::SmoothLine => {
            let v = seg.p1 - seg.p0;
            (v.length() > EPSILON).then(|| v.atan2())
        }
        _ => None,
    }
}

/// Solves one open run of free curve joints through `knots` (indices into
/// `spec.knots`, in path order) and writes its segments.
fn solve_run(
    spec: &PathSpec,
    knots: &[usize],
    start: End,
    finish: End,
    out: &mut [Option<CubicSegment>],
) {
    let pts: Vec<Point> = knots.iter().map(|&k| spec.knots[k].point).collect();
    let segs = solve_open(&pts, start, finish);
    for (i, seg) in segs.into_iter().enumerate() {
        out[knots[i]] = Some(seg);
    }
}

/// Open run z_0..z_r (r >= 1 chords). Unknowns are the departure angles
/// theta_0..theta_{r-1} and the final arrival angle phi_r.
fn solve_open(z: &[Point], start: End, finish: End) -> Vec<CubicSegment> {
    let r = z.len() - 1;
    let chords: Vec<Vec2> = (0..r).map(|k| z[k + 1] - z[k]).collect();
    let d: Vec<f64> = chords.iter().map(|c| c.length()).collect();
    let ang: Vec<f64> = chords.iter().map(|c| c.atan2()).collect();
    // turning angle at interior knot k (1..r-1)
    let psi = |k: usize| normalize_angle_rad(ang[k] - ang[k - 1]);
    let gamma = CURL;

    let size = r + 1;
    let mut lower = vec![0.0; size];
    let mut diag = vec![0.0; size];
    let mut upper = vec![0.0; size];
    let mut rhs = vec![0.0; size];

    match start {
        End::Given(dir) => {
            diag[0] = 1.0;
            rhs[0] = normalize_angle_rad(dir - ang[0]);
        }
        End::Curl => {
            diag[0] = gamma + 2.0;
            if r >= 2 {
                upper[0] = 2.0 * gamma + 1.0;
                rhs[0] = -(2.0 * gamma + 1.0) * psi(1);
            } else {
                upper[0] = -(2.0 * gamma + 1.0);
            }
        }
    }
    for k in 1..r {
        lower[k] = 1.0 / d[k - 1];
        diag[k] = 2.0 / d[k - 1] + 2.0 / d[k];
        rhs[k] = -2.0 * psi(k) / d[k - 1];
        if k + 1 < r {
            upper[k] = 1.0 / d[k];
            rhs[k] -= psi(k + 1) / d[k];
        } else {
            upper[k] = -1.0 / d[k];
        }
    }
    match finish {
        End::Given(dir) => {
            diag[r] = 1.0;
            rhs[r] = normalize_angle_rad(ang[r - 1] - dir);
        }
        End::Curl => {
            lower[r] = -(2.0 * gamma + 1.0);
            diag[r] = gamma + 2.0;
        }
    }

    let x = if r == 1 && matches!((start, finish), (End::Curl, End::Curl)) {
        // both ends free with a single chord: the straight line
        vec![0.0, 0.0]
    } else {
        solve_tridiagonal(&lower, &diag, &upper, &rhs)
    };

    (0..r)
        .map(|k| {
            let theta = x[k];
            let phi = if k + 1 < r { -psi(k + 1) - x[k + 1] } else { x[r] };
            segment_controls(z[k], z[k + 1], theta, phi)
        })
        .collect()
}

/// Closed run with no breakpoints: knots z_0..z_{n-1}, chord k runs from
/// z_k to z_{k+1 mod n}.
fn solve_cyclic(z: &[Point]) -> Vec<CubicSegment> {
    let n = z.len();
    let chords: Vec<Vec2> = (0..n).map(|k| z[(k + 1) % n] - z[k]).collect();
    let d: Vec<f64> = chords.iter().map(|c| c.length()).collect();
    let ang: Vec<f64> = chords.iter().map(|c| c.atan2()).collect();
    let psi: Vec<f64> = (0..n)
        .map(|k| normalize_angle_rad(ang[k] - ang[(k + n - 1) % n]))
        .collect();

    let mut lower = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for k in 0..n {
        let prev = (k + n - 1) % n;
        lower[k] = 1.0 / d[prev];
        diag[k] = 2.0 / d[prev] + 2.0 / d[k];
        upper[k] = 1.0 / d[k];
        rhs[k] = -2.0 * psi[k] / d[prev] - psi[(k + 1) % n] / d[k];
    }
    let theta = if n < 3 {
        // the corner terms land on the same unknowns; solve densely
        let mut m = vec![vec![0.0; n]; n];
        for k in 0..n {
            m[k][k] += diag[k];
            m[k][(k + n - 1) % n] += lower[k];
            m[k][(k + 1) % n] += upper[k];
        }
        solve_dense(m, rhs)
    } else {
        solve_cyclic_tridiagonal(&lower, &diag, &upper, &rhs)
    };
    (0..n)
        .map(|k| {
            let k1 = (k + 1) % n;
            let phi = -psi[k1] - theta[k1];
            segment_controls(z[k], z[k1], theta[k], phi)
        })
        .collect()
}

/// Thomas algorithm. `lower[0]` and `upper[n-1]` are ignored.
fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut x = vec![0.0; n];
    let mut denom = diag[0];
    c[0] = upper[0] / denom;
    x[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - lower[i] * c[i - 1];
        c[i] = if i + 1 < n { upper[i] / denom } else { 0.0 };
        x[i] = (rhs[i] - lower[i] * x[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    x
}

/// Cyclic tridiagonal system via Sherman–Morrison: `lower[0]` is the
/// coefficient of x_{n-1} in row 0 and `upper[n-1]` that of x_0 in row n-1.
fn solve_cyclic_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let beta = lower[0];
    let alpha = upper[n - 1];
    let gamma = -diag[0];
    let mut bb = diag.to_vec();
    bb[0] = diag[0] - gamma;
    bb[n - 1] = diag[n - 1] - alpha * beta / gamma;
    let x = solve_tridiagonal(lower, &bb, upper, rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = solve_tridiagonal(lower, &bb, upper, &u);
    let fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect()
}

fn solve_dense(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Vec<f64> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = m[col][col];
        if p.abs() < 1e-15 {
            continue;
        }
        for row in 0..n {
            if row != col {
                let f = m[row][col] / p;
                for k in col..n {
                    m[row][k] -= f * m[col][k];
                }
                rhs[row] -= f * rhs[col];
            }
        }
    }
    (0..n)
        .map(|i| if m[i][i].abs() < 1e-15 { 0.0 } else { rhs[i] / m[i][i] })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn collinear_knots_give_a_straight_line() {
        let spec = PathSpec::uniform(&[pt(0.0, 0.0), pt(10.0, 0.0), pt(20.0, 0.0)], JointKind::Curve, false);
        let c = solve(&spec).unwrap().contour;
        for seg in c.segments() {
            for p in seg.points() {
                assert!(p.y.abs() < 1e-9, "{p}");
            }
            for i in 0..=20 {
                let q = seg.eval(i as f64 / 20.0).unwrap();
                assert!(q.y.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn square_with_lines() {
        let side = 10.0;
        let pts = [pt(0.0, 0.0), pt(side, 0.0), pt(side, side), pt(0.0, side), pt(0.0, 0.0)];
        let c = solve(&PathSpec::uniform(&pts, JointKind::Line, false)).unwrap().contour;
        assert_eq!(c.len(), 4);
        assert!(c.segments().iter().all(|s| s.is_line()));
        assert_eq!(c.nodes(), pts.to_vec());
    }

    #[test]
    fn explicit_controls_are_kept() {
        let spec = PathSpec::new(
            vec![
                Knot::new(pt(0.0, 0.0)).with_controls(pt(26.8, -1.8), pt(51.4, 14.6)),
                Knot::new(pt(60.0, 40.0)),
            ],
            vec![JointKind::Curve],
            false,
        );
        let seg = solve(&spec).unwrap().contour.segments()[0];
        assert_eq!(seg.c0, pt(26.8, -1.8));
        assert_eq!(seg.c1, pt(51.4, 14.6));
    }

    #[test]
    fn direction_at_lines() {
        let h = solve(&PathSpec::uniform(&[pt(0.0, 0.0), pt(10.0, 0.0)], JointKind::Line, false))
            .unwrap()
            .contour;
        assert_eq!(direction_at(&h, 0).unwrap(), 0.0);
        let v = solve(&PathSpec::uniform(&[pt(0.0, 0.0), pt(0.0, 10.0)], JointKind::Line, false))
            .unwrap()
            .contour;
        assert!((direction_at(&v, 0).unwrap() - 90.0).abs() < 1e-12);
        assert!(matches!(
            direction_at(&v, 2),
            Err(HobbyError::KnotOutOfRange { index: 2, count: 2 })
        ));
    }

    #[test]
    fn rejects_too_few_knots_and_bad_joint_counts() {
        let one = PathSpec::new(vec![Knot::new(pt(0.0, 0.0))], vec![], false);
        assert_eq!(solve(&one), Err(HobbyError::TooFewKnots(1)));
        let bad = PathSpec::new(
            vec![Knot::new(pt(0.0, 0.0)), Knot::new(pt(1.0, 0.0))],
            vec![JointKind::Curve, JointKind::Curve],
            false,
        );
        assert!(matches!(solve(&bad), Err(HobbyError::JointCount { .. })));
    }

    #[test]
    fn rejects_controls_with_direction() {
        let spec = PathSpec::new(
            vec![
                Knot::new(pt(0.0, 0.0)).with_dir_out(30.0).with_controls(pt(1.0, 1.0), pt(2.0, 1.0)),
                Knot::new(pt(3.0, 0.0)),
            ],
            vec![JointKind::Curve],
            false,
        );
        assert!(matches!(
            solve(&spec),
            Err(HobbyError::ConflictingConstraint { knot: 0, .. })
        ));
        let spec = PathSpec::new(
            vec![
                Knot::new(pt(0.0, 0.0)).with_controls(pt(1.0, 1.0), pt(2.0, 1.0)),
                Knot::new(pt(3.0, 0.0)).with_dir_in(10.0),
            ],
            vec![JointKind::Curve],
            false,
        );
        assert!(matches!(
            solve(&spec),
            Err(HobbyError::ConflictingConstraint { knot: 1, side: "incoming" })
        ));
    }

    #[test]
    fn coincident_knots_warn_instead_of_failing() {
        let spec = PathSpec::uniform(&[pt(0.0, 0.0), pt(5.0, 5.0), pt(5.0, 5.0), pt(10.0, 0.0)], JointKind::Curve, false);
        let solved = solve(&spec).unwrap();
        assert_eq!(solved.warnings.len(), 1);
        assert_eq!(solved.warnings[0].joint, 1);
        assert!(solved.contour.segments()[1].is_degenerate());
        assert_eq!(solved.contour.len(), 3);
    }

    #[test]
    fn smooth_line_imposes_its_direction() {
        // (0,0)---(10,0)..(20,10): the curve must leave (10,0) heading along +x
        let spec = PathSpec::new(
            vec![Knot::new(pt(0.0, 0.0)), Knot::new(pt(10.0, 0.0)), Knot::new(pt(20.0, 10.0))],
            vec![JointKind::SmoothLine, JointKind::Curve],
            false,
        );
        let c = solve(&spec).unwrap().contour;
        assert!(direction_at(&c, 1).unwrap().abs() < 1e-9);
        // with a plain line the curve is free to turn at the joint
        let spec = PathSpec::new(spec.knots.clone(), vec![JointKind::Line, JointKind::Curve], false);
        let c = solve(&spec).unwrap().contour;
        assert!(direction_at(&c, 1).unwrap() > 1.0);
    }

    #[test]
    fn given_directions_are_honoured() {
        let spec = PathSpec::new(
            vec![
                Knot::new(pt(0.0, 0.0)).with_dir_out(30.0),
                Knot::new(pt(10.0, 10.0)).with_dir_in(45.0),
                Knot::new(pt(20.0, 0.0)).with_dir_in(0.0),
                Knot::new(pt(30.0, 10.0)).with_dir_in(30.0),
            ],
            vec![JointKind::Curve; 3],
            false,
        );
        let c = solve(&spec).unwrap().contour;
        for (k, want) in [(0, 30.0), (1, 45.0), (2, 0.0)] {
            assert!((direction_at(&c, k).unwrap() - want).abs() < 1e-6);
        }
        let end = c.segments()[2].end_tangent().angle_deg();
        assert!((end - 30.0).abs() < 1e-6);
    }

    #[test]
    fn velocity_of_straight_segment_is_one() {
        assert!((velocity(0.0, 0.0) - 1.0).abs() < 1e-15);
        assert_eq!(velocity(std::f64::consts::PI, std::f64::consts::PI), 4.0);
    }

    #[test]
    fn cyclic_two_knots() {
        let spec = PathSpec::uniform(&[pt(0.0, 0.0), pt(10.0, 0.0)], JointKind::Curve, true);
        let c = solve(&spec).unwrap().contour;
        assert!(c.is_closed());
        assert_eq!(c.len(), 2);
        assert!(c.segments().iter().all(|s| s.is_finite()));
    }
}
