// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

//! From glyph programs to a variable-font source package.
//!
//! A project is a [`Manifest`] naming glyph programs, configuration files,
//! design axes, masters and named instances. [`build_master`] evaluates every
//! glyph against one master's configuration; [`build_all`] does this for
//! every master and returns a [`MasterSet`]. The set can be checked with
//! [`check_compatibility`], interpolated with [`interpolate`], and written
//! out as SVG ([`write_svg`]), UFO3 ([`write_ufo`]) and designspace
//! ([`write_designspace`]) files.

mod build;
mod compat;
mod config;
mod designspace;
mod education;
mod manifest;
mod svg;
mod ufo;
mod variation;
mod write;

use std::path::PathBuf;

pub use build::{build_all, build_master, load_config, BuiltGlyph, GlyphFailure, GlyphSet, MasterSet, ProjectLoader};
pub use compat::{check_compatibility, CompatReport, Mismatch, MismatchKind};
pub use config::{ConfigError, TypographicConfig, CONFIG_FIELDS};
pub use designspace::{emit_package, write_designspace};
pub use education::{derive_education_variant, EducationMode};
pub use manifest::{AxisDef, Binding, FontInfo, GlyphEntry, Instance, Location, Manifest, MasterSpec};
pub use svg::{glyph_svg, path_data, write_svg, Frame, SvgOptions, DEFAULT_STYLE};
pub use ufo::{
    glif_xml, read_glif, read_ufo, user_name_to_file_name, write_ufo, Glif, GlifPoint, Plist, PointKind, UfoFont, UfoMetadata,
};
pub use variation::{interpolate, normalize_location, normalize_value, support_scalar, Support, VariationModel};
pub use write::{write_atomic, write_dir_atomic};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Manifest { path: PathBuf, message: String },
    #[error("master `{master}`: {message}")]
    Config { master: String, message: String },
    #[error("master `{master}`: {} glyph(s) failed", failures.len())]
    Build {
        master: String,
        failures: Vec<GlyphFailure>,
    },
    #[error("masters are not compatible:\n{0}")]
    Incompatible(CompatReport),
    #[error("{0}")]
    Location(String),
    #[error("{0}")]
    Package(String),
    #[error("{0}")]
    Education(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
