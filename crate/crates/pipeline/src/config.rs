// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

use std::collections::BTreeMap;

/// Parameter names read from a configuration, in field order.
pub const CONFIG_FIELDS: [&str; 16] = [
    "em",
    "u",
    "ascent",
    "descent",
    "xheight",
    "mheight",
    "Xheight",
    "thick",
    "thin",
    "subthick",
    "xthick",
    "slant",
    "condense",
    "terminalround",
    "lbearing",
    "rbearing",
];

/// Resolved typographic parameters of one master.
#[derive(Clone, Debug, PartialEq)]
pub struct TypographicConfig {
    pub em: f64,
    pub u: f64,
    pub ascent: f64,
    pub descent: f64,
    pub xheight: f64,
    pub mheight: f64,
    pub cap_height: f64,
    pub thick: f64,
    /// Ratio of `thick`.
    pub thin: f64,
    pub subthick: f64,
    pub xthick: f64,
    /// Degrees.
    pub slant: f64,
    pub condense: f64,
    pub terminalround: f64,
    pub lbearing: f64,
    pub rbearing: f64,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("configuration does not set `{0}`")]
    Missing(&'static str),
    #[error("`{0}` must be finite")]
    NotFinite(&'static str),
    #[error("{0}")]
    Invalid(String),
}

impl TypographicConfig {
    /// Reads the parameters from evaluated variables. `em`, `u`, the
    /// vertical metrics and the bearings fall back to their conventional
    /// values; the stroke parameters must be set.
    pub fn from_variables(vars: &BTreeMap<String, f64>) -> Result<Self, ConfigError> {
        let get = |k: &str| vars.get(k).copied();
        let need = |k: &'static str| get(k).ok_or(ConfigError::Missing(k));
        let em = get("em").unwrap_or(1000.0);
        let u = get("u").unwrap_or(em / 10.0);
        let ascent = get("ascent").unwrap_or(8.0 * u);
        let config = TypographicConfig {
            em,
            u,
            ascent,
            descent: get("descent").unwrap_or(2.0 * u),
            xheight: get("xheight").unwrap_or(2.0 / 3.0 * ascent),
            mheight: get("mheight").unwrap_or(3.0 / 4.0 * ascent),
            cap_height: get("Xheight").unwrap_or(8.0 * u),
            thick: need("thick")?,
            thin: need("thin")?,
            subthick: get("subthick").unwrap_or(0.666 * u),
            xthick: need("xthick")?,
            slant: get("slant").unwrap_or(0.0),
            condense: get("condense").unwrap_or(1.0),
            terminalround: need("terminalround")?,
            lbearing: get("lbearing").unwrap_or(0.4 * u),
            rbearing: get("rbearing").unwrap_or(0.4 * u),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, v) in CONFIG_FIELDS.iter().zip(self.values()) {
            if !v.is_finite() {
                return Err(ConfigError::NotFinite(name));
            }
        }
        if self.em <= 0.0 {
            return Err(ConfigError::Invalid(format!("em must be positive, got {}", self.em)));
        }
        if (self.u - self.em / 10.0).abs() > 1e-9 * self.em {
            return Err(ConfigError::Invalid(format!(
                "u must be em/10 = {}, got {}",
                self.em / 10.0,
                self.u
            )));
        }
        if self.condense <= 0.0 {
            return Err(ConfigError::Invalid(format!(
                "condense must be positive, got {}",
                self.condense
            )));
        }
        if !(self.thin > 0.0 && self.thin <= 1.0) {
            return Err(ConfigError::Invalid(format!("thin must be in (0, 1], got {}", self.thin)));
        }
        Ok(())
    }

    pub fn values(&self) -> [f64; 16] {
        [
            self.em,
            self.u,
            self.ascent,
            self.descent,
            self.xheight,
            self.mheight,
            self.cap_height,
            self.thick,
            self.thin,
            self.subthick,
            self.xthick,
            self.slant,
            self.condense,
            self.terminalround,
            self.lbearing,
            self.rbearing,
        ]
    }

    pub fn from_values(v: [f64; 16]) -> Self {
        TypographicConfig {
            em: v[0],
            u: v[1],
            ascent: v[2],
            descent: v[3],
            xheight: v[4],
            mheight: v[5],
            cap_height: v[6],
            thick: v[7],
            thin: v[8],
            subthick: v[9],
            xthick: v[10],
            slant: v[11],
            condense: v[12],
            terminalround: v[13],
            lbearing: v[14],
            rbearing: v[15],
        }
    }

    /// Looks a parameter up by its configuration name.
    pub fn get(&self, name: &str) -> Option<f64> {
        let i = CONFIG_FIELDS.iter().position(|f| *f == name)?;
        Some(self.values()[i])
    }
}
