// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::{Error, Result};

/// Axis tag to user-space value.
pub type Location = BTreeMap<String, f64>;

/// A project file. Paths inside it are relative to the file.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub font: FontInfo,
    #[serde(default)]
    pub glyphs: Vec<GlyphEntry>,
    #[serde(default)]
    pub axes: Vec<AxisDef>,
    #[serde(default)]
    pub masters: Vec<MasterSpec>,
    #[serde(default)]
    pub instances: Vec<Instance>,
    /// Directory holding the manifest; set by [`Manifest::load`].
    #[serde(skip)]
    pub root: PathBuf,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FontInfo {
    pub family: String,
    #[serde(default = "default_version")]
    pub version: String,
}

fn default_version() -> String {
    "1.000".into()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlyphEntry {
    pub name: String,
    pub source: PathBuf,
    /// Hexadecimal code point, e.g. `"0D31"`.
    #[serde(default)]
    pub unicode: Option<String>,
    /// Advance width expression, evaluated in the glyph's scope.
    #[serde(default)]
    pub advance: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisDef {
    pub tag: String,
    pub name: String,
    pub min: f64,
    pub default: f64,
    pub max: f64,
    /// Configuration parameter this axis drives.
    #[serde(default)]
    pub parameter: Option<String>,
    /// (axis value, parameter value) pairs for `parameter`.
    #[serde(default)]
    pub map: Vec<(f64, f64)>,
}

impl AxisDef {
    pub fn binding(&self) -> Option<Binding> {
        Some(Binding {
            parameter: self.parameter.clone()?,
            map: self.map.clone(),
        })
    }
}

/// The configuration parameter an axis drives, as (axis value, parameter
/// value) pairs with increasing axis values. Between pairs the mapping is
/// linear.
#[derive(Clone, Debug, PartialEq)]
pub struct Binding {
    pub parameter: String,
    pub map: Vec<(f64, f64)>,
}

impl Binding {
    pub fn value_at(&self, x: f64) -> Option<f64> {
        let m = &self.map;
        if m.is_empty() {
            return None;
        }
        if m.len() == 1 {
            return (x == m[0].0).then_some(m[0].1);
        }
        let i = m.windows(2).position(|w| x >= w[0].0 && x <= w[1].0)?;
        let ((x0, y0), (x1, y1)) = (m[i], m[i + 1]);
        if x == x0 {
            return Some(y0);
        }
        if x == x1 {
            return Some(y1);
        }
        Some(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MasterSpec {
    pub name: String,
    pub config: PathBuf,
    #[serde(default)]
    pub overrides: BTreeMap<String, f64>,
    #[serde(default)]
    pub location: Location,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub name: String,
    #[serde(default)]
    pub location: Location,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let root = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Manifest::parse(&text, root).map_err(|message| Error::Manifest {
            path: path.to_path_buf(),
            message,
        })
    }

    /// Parses and validates manifest text whose relative paths start at
    /// `root`.
    pub fn parse(text: &str, root: PathBuf) -> Result<Self, String> {
        let mut m: Manifest = toml::from_str(text).map_err(|e| e.to_string())?;
        m.root = root;
        m.validate()?;
        Ok(m)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        self.root.join(p)
    }

    pub fn axis(&self, tag: &str) -> Option<&AxisDef> {
        self.axes.iter().find(|a| a.tag == tag)
    }

    pub fn master(&self, name: &str) -> Option<&MasterSpec> {
        self.masters.iter().find(|m| m.name == name)
    }

    /// `loc` with every axis it leaves out set to the axis default.
    pub fn full_location(&self, loc: &Location) -> Location {
        self.axes
            .iter()
            .map(|a| (a.tag.clone(), loc.get(&a.tag).copied().unwrap_or(a.default)))
            .collect()
    }

    pub fn default_location(&self) -> Location {
        self.full_location(&Location::new())
    }

    /// Index of the master at the default location.
    pub fn default_master(&self) -> Option<usize> {
        let def = self.default_location();
        self.masters.iter().position(|m| self.full_location(&m.location) == def)
    }

    /// Rejects unknown axes and values outside an axis range.
    pub fn check_location(&self, loc: &Location) -> Result<(), String> {
        for (tag, v) in loc {
            let a = self.axis(tag).ok_or_else(|| format!("unknown axis `{tag}`"))?;
            if !v.is_finite() || *v < a.min || *v > a.max {
                return Err(format!(
                    "{tag}={v} is outside the axis range {} to {}",
                    a.min, a.max
                ));
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), String> {
        let mut seen = HashSet::new();
        for g in &self.glyphs {
            if g.name.is_empty() {
                return Err("glyph with an empty name".into());
            }
            if !seen.insert(g.name.as_str()) {
                return Err(format!("duplicate glyph `{}`", g.name));
            }
            if let Some(u) = &g.unicode {
                parse_unicode(u).map_err(|e| format!("glyph `{}`: {e}", g.name))?;
            }
        }
        let mut tags = HashSet::new();
        for a in &self.axes {
            if a.tag.len() != 4 || !a.tag.is_ascii() {
                return Err(format!("axis tag `{}` is not four ASCII characters", a.tag));
            }
            if !tags.insert(a.tag.as_str()) {
                return Err(format!("duplicate axis `{}`", a.tag));
            }
            if !(a.min <= a.default && a.default <= a.max) {
                return Err(format!("axis `{}`: need min <= default <= max", a.tag));
            }
            if let Some(b) = a.binding() {
                if b.map.is_empty() {
                    return Err(format!("axis `{}`: `parameter` needs a `map`", a.tag));
                }
                if b.map.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return Err(format!("axis `{}`: map must have increasing axis values", a.tag));
                }
            }
        }
        let mut names = HashSet::new();
        for m in &self.masters {
            if !names.insert(m.name.as_str()) {
                return Err(format!("duplicate master `{}`", m.name));
            }
            self.check_location(&m.location)
                .map_err(|e| format!("master `{}`: {e}", m.name))?;
        }
        if !self.masters.is_empty() && self.default_master().is_none() {
            return Err("no master sits at the default location".into());
        }
        let mut locs = HashSet::new();
        for m in &self.masters {
            let key = format!("{:?}", self.full_location(&m.location));
            if !locs.insert(key) {
                return Err(format!("master `{}` shares its location with another master", m.name));
            }
        }
        for i in &self.instances {
            self.check_location(&i.location)
                .map_err(|e| format!("instance `{}`: {e}", i.name))?;
        }
        Ok(())
    }
}

/// Parses a code point written as hex, with an optional `U+` prefix.
pub(crate) fn parse_unicode(s: &str) -> Result<u32, String> {
    let hex = s.strip_prefix("U+").unwrap_or(s);
    let v = u32::from_str_radix(hex, 16).map_err(|_| format!("`{s}` is not a hexadecimal code point"))?;
    if char::from_u32(v).is_none() {
        return Err(format!("`{s}` is not a Unicode scalar value"));
    }
    Ok(v)
}
