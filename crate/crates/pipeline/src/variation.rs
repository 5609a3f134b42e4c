// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Multi-axis interpolation with the model variable fonts use: every master
//! contributes through a tent-shaped support region in normalized space,
//! and regions are split where masters overlap.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use metaglyph::geometry::{Contour, CubicSegment, Point};

use crate::build::{BuiltGlyph, GlyphSet, MasterSet};
use crate::compat::check_compatibility;
use crate::config::TypographicConfig;
use crate::manifest::{AxisDef, Location};
use crate::{Error, Result};

/// Axis tag to (lower, peak, upper) in normalized coordinates.
pub type Support = BTreeMap<String, (f64, f64, f64)>;

/// Maps a user-space value to [-1, 1]: -1 at the minimum, 0 at the
/// default, 1 at the maximum, linear in between. Values are clamped to the
/// axis range.
pub fn normalize_value(v: f64, axis: &AxisDef) -> f64 {
    let v = v.clamp(axis.min, axis.max);
    if v == axis.default {
        0.0
    } else if v < axis.default {
        (v - axis.default) / (axis.default - axis.min)
    } else {
        (v - axis.default) / (axis.max - axis.default)
    }
}

/// Normalized location without zero coordinates; absent axes sit at their
/// default.
pub fn normalize_location(loc: &Location, axes: &[AxisDef]) -> Location {
    axes.iter()
        .filter_map(|a| {
            let v = normalize_value(loc.get(&a.tag).copied().unwrap_or(a.default), a);
            (v != 0.0).then(|| (a.tag.clone(), v))
        })
        .collect()
}

/// Contribution of a master with `support` at `loc`.
pub fn support_scalar(loc: &Location, support: &Support) -> f64 {
    let mut scalar = 1.0;
    for (axis, &(lower, peak, upper)) in support {
        if peak == 0.0 || lower > peak || peak > upper || (lower < 0.0 && upper > 0.0) {
            continue;
        }
        let v = loc.get(axis).copied().unwrap_or(0.0);
        if v == peak {
            continue;
        }
        if v <= lower || upper <= v {
            return 0.0;
        }
        if v < peak {
            scalar *= (v - lower) / (peak - lower);
        } else {
            scalar *= (v - upper) / (peak - upper);
        }
    }
    scalar
}

#[derive(Clone, Debug)]
pub struct VariationModel {
    /// Sorted normalized master locations.
    locations: Vec<Location>,
    /// `reverse[i]` is the input index of sorted master `i`.
    reverse: Vec<usize>,
    supports: Vec<Support>,
    delta_weights: Vec<BTreeMap<usize, f64>>,
}

fn sign(v: f64) -> i8 {
    if v < 0.0 {
        -1
    } else if v > 0.0 {
        1
    } else {
        0
    }
}

impl VariationModel {
    /// Builds the model for normalized master locations (zero coordinates
    /// omitted). One location must be the origin.
    pub fn new(locations: &[Location], axis_order: &[String]) -> Result<Self, String> {
        if !locations.iter().any(Location::is_empty) {
            return Err("no master at the default location".into());
        }
        let mut axis_points: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
        for loc in locations {
            if loc.len() == 1 {
                let (axis, v) = loc.iter().next().unwrap();
                let pts = axis_points.entry(axis).or_insert_with(|| vec![0.0]);
                if pts.contains(v) {
                    return Err(format!("two masters at {axis}={v}"));
                }
                pts.push(*v);
            }
        }
        let order_of = |a: &str| axis_order.iter().position(|t| t == a).unwrap_or(0x10000);
        let ordered_axes = |loc: &Location| -> Vec<String> {
            let mut axes: Vec<String> = axis_order.iter().filter(|a| loc.contains_key(*a)).cloned().collect();
            axes.extend(loc.keys().filter(|a| !axis_order.contains(a)).cloned());
            axes
        };
        let on_point = |loc: &Location| {
            loc.iter()
                .filter(|(a, v)| axis_points.get(a.as_str()).is_some_and(|p| p.contains(v)))
                .count()
        };
        let compare = |a: &Location, b: &Location| -> Ordering {
            let (xa, xb) = (ordered_axes(a), ordered_axes(b));
            a.len()
                .cmp(&b.len())
                .then_with(|| on_point(b).cmp(&on_point(a)))
                .then_with(|| {
                    let ia: Vec<usize> = xa.iter().map(|x| order_of(x)).collect();
                    let ib: Vec<usize> = xb.iter().map(|x| order_of(x)).collect();
                    ia.cmp(&ib)
                })
                .then_with(|| xa.cmp(&xb))
                .then_with(|| {
                    let sa: Vec<i8> = xa.iter().map(|x| sign(a[x])).collect();
                    let sb: Vec<i8> = xb.iter().map(|x| sign(b[x])).collect();
                    sa.cmp(&sb)
                })
                .then_with(|| {
                    for (x, y) in xa.iter().zip(&xb) {
                        match a[x].abs().partial_cmp(&b[y].abs()) {
                            Some(Ordering::Equal) | None => {}
                            Some(o) => return o,
                        }
                    }
                    xa.len().cmp(&xb.len())
                })
        };
        let mut reverse: Vec<usize> = (0..locations.len()).collect();
        reverse.sort_by(|&i, &j| compare(&locations[i], &locations[j]));
        let sorted: Vec<Location> = reverse.iter().map(|&i| locations[i].clone()).collect();
        let supports = master_supports(&sorted);
        let delta_weights = sorted
            .iter()
            .enumerate()
            .map(|(i, loc)| {
                supports[..i]
                    .iter()
                    .enumerate()
                    .filter_map(|(j, s)| {
                        let w = support_scalar(loc, s);
                        (w != 0.0).then_some((j, w))
                    })
                    .collect()
            })
            .collect();
        Ok(VariationModel {
            locations: sorted,
            reverse,
            supports,
            delta_weights,
        })
    }

    /// Supports in sorted order, paired with the input index of each master.
    pub fn supports(&self) -> impl Iterator<Item = (usize, &Support)> {
        self.reverse.iter().copied().zip(&self.supports)
    }

    pub fn sorted_locations(&self) -> &[Location] {
        &self.locations
    }

    /// For each sorted master, the weights of earlier masters' deltas at its
    /// location.
    pub fn delta_weights(&self) -> &[BTreeMap<usize, f64>] {
        &self.delta_weights
    }

    /// Weight of each master (in input order) at `loc`; the blend at `loc`
    /// is the weighted sum of master values.
    pub fn master_scalars(&self, loc: &Location) -> Vec<f64> {
        let mut out: Vec<f64> = self.supports.iter().map(|s| support_scalar(loc, s)).collect();
        for i in (0..out.len()).rev() {
            for (&j, &w) in &self.delta_weights[i] {
                out[j] -= out[i] * w;
            }
        }
        let mut by_input = vec![0.0; out.len()];
        for (sorted, &input) in self.reverse.iter().enumerate() {
            by_input[input] = out[sorted];
        }
        by_input
    }
}

fn master_supports(locations: &[Location]) -> Vec<Support> {
    let mut min_v: BTreeMap<&str, f64> = BTreeMap::new();
    let mut max_v: BTreeMap<&str, f64> = BTreeMap::new();
    for l in locations {
        for (k, &v) in l {
            let lo = min_v.entry(k).or_insert(v);
            *lo = lo.min(v);
            let hi = max_v.entry(k).or_insert(v);
            *hi = hi.max(v);
        }
    }
    let regions: Vec<Support> = locations
        .iter()
        .map(|loc| {
            loc.iter()
                .map(|(axis, &v)| {
                    let t = if v > 0.0 {
                        (0.0, v, max_v[axis.as_str()])
                    } else {
                        (min_v[axis.as_str()], v, 0.0)
                    };
                    (axis.clone(), t)
                })
                .collect()
        })
        .collect();
    let mut supports = Vec::with_capacity(regions.len());
    for (i, region) in regions.iter().enumerate() {
        let mut region = region.clone();
        let axes: BTreeSet<String> = region.keys().cloned().collect();
        for prev in &regions[..i] {
            if prev.keys().cloned().collect::<BTreeSet<_>>() != axes {
                continue;
            }
            let relevant = region.iter().all(|(axis, &(lower, peak, upper))| {
                let p = prev[axis].1;
                p == peak || (lower < p && p < upper)
            });
            if !relevant {
                continue;
            }
            let mut best: BTreeMap<String, (f64, f64, f64)> = BTreeMap::new();
            let mut best_ratio = -1.0;
            for (axis, &(_, val, _)) in prev {
                let (lower, loc_v, upper) = region[axis];
                let (mut new_lower, mut new_upper) = (lower, upper);
                let ratio = if val < loc_v {
                    new_lower = val;
                    (val - loc_v) / (lower - loc_v)
                } else if loc_v < val {
                    new_upper = val;
                    (val - loc_v) / (upper - loc_v)
                } else {
                    continue;
                };
                if ratio > best_ratio {
                    best.clear();
                    best_ratio = ratio;
                }
                if ratio == best_ratio {
                    best.insert(axis.clone(), (new_lower, loc_v, new_upper));
                }
            }
            region.extend(best);
        }
        supports.push(region);
    }
    supports
}

/// `Σ w_i · v_i` over masters with nonzero weight, in master order.
fn blend(weights: &[f64], values: impl Fn(usize) -> f64) -> f64 {
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        if w != 0.0 {
            acc += w * values(i);
        }
    }
    acc
}

fn blend_point(weights: &[f64], p: impl Fn(usize) -> Point) -> Point {
    Point::new(blend(weights, |i| p(i).x), blend(weights, |i| p(i).y))
}

fn blend_contours(weights: &[f64], masters: &[&[Contour]]) -> Vec<Contour> {
    (0..masters[0].len())
        .map(|c| {
            let reference = &masters[0][c];
            let segments = (0..reference.len())
                .map(|s| {
                    let seg = |i: usize| masters[i][c].segments()[s];
                    CubicSegment::new(
                        blend_point(weights, |i| seg(i).p0),
                        blend_point(weights, |i| seg(i).c0),
                        blend_point(weights, |i| seg(i).c1),
                        blend_point(weights, |i| seg(i).p1),
                    )
                })
                .collect();
            Contour::new_snapped(segments, reference.is_closed()).expect("blend of compatible contours")
        })
        .collect()
}

/// Name for an instance at `loc`, like `wght=550,wdth=80`.
fn location_name(loc: &Location) -> String {
    loc.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// The glyph set at a user-space location. At a master's location the
/// result is that master, unchanged.
pub fn interpolate(set: &MasterSet, location: &Location) -> Result<GlyphSet> {
    let manifest = &set.manifest;
    manifest.check_location(location).map_err(Error::Location)?;
    let full = manifest.full_location(location);
    if let Some(m) = set.masters.iter().find(|m| m.location == full) {
        return Ok(m.clone());
    }
    let report = check_compatibility(set);
    if !report.is_compatible() {
        return Err(Error::Incompatible(report));
    }
    let axis_order: Vec<String> = manifest.axes.iter().map(|a| a.tag.clone()).collect();
    let locations: Vec<Location> = set
        .masters
        .iter()
        .map(|m| normalize_location(&m.location, &manifest.axes))
        .collect();
    let model = VariationModel::new(&locations, &axis_order).map_err(Error::Location)?;
    let weights = model.master_scalars(&normalize_location(&full, &manifest.axes));
    log::debug!("weights at {}: {weights:?}", location_name(&full));

    let reference = set.default_master();
    let configs: Vec<[f64; 16]> = set.masters.iter().map(|m| m.config.values()).collect();
    let config = TypographicConfig::from_values(std::array::from_fn(|k| blend(&weights, |i| configs[i][k])));
    let glyphs = reference
        .glyphs
        .iter()
        .map(|g| {
            let per: Vec<&BuiltGlyph> = set
                .masters
                .iter()
                .map(|m| m.glyph(&g.name).expect("compatible masters share glyphs"))
                .collect();
            let outlines: Vec<&[Contour]> = per.iter().map(|p| p.outline.as_slice()).collect();
            let strokes: Vec<&[Contour]> = per.iter().map(|p| p.strokes.as_slice()).collect();
            BuiltGlyph {
                name: g.name.clone(),
                unicode: g.unicode,
                advance: blend(&weights, |i| per[i].advance),
                outline: blend_contours(&weights, &outlines),
                strokes: blend_contours(&weights, &strokes),
            }
        })
        .collect();
    Ok(GlyphSet {
        name: location_name(&full),
        location: full,
        config,
        glyphs,
    })
}
