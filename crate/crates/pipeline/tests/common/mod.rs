// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use metaglyph::geometry::{Contour, Point};
use metaglyph_pipeline::{build_all, Manifest, MasterSet, TypographicConfig};

pub fn sample_manifest_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../sample/manifest.toml")
}

pub fn sample() -> &'static MasterSet {
    static SET: OnceLock<MasterSet> = OnceLock::new();
    SET.get_or_init(|| {
        let m = Manifest::load(&sample_manifest_path()).expect("sample manifest");
        build_all(&m).expect("sample builds")
    })
}

/// Every point of every segment, in order.
pub fn points(outline: &[Contour]) -> Vec<Point> {
    outline
        .iter()
        .flat_map(|c| c.segments().iter().flat_map(|s| s.points()))
        .collect()
}

pub fn config(thick: f64) -> TypographicConfig {
    TypographicConfig {
        em: 1000.0,
        u: 100.0,
        ascent: 800.0,
        descent: 200.0,
        xheight: 1600.0 / 3.0,
        mheight: 600.0,
        cap_height: 800.0,
        thick,
        thin: 0.7,
        subthick: 66.6,
        xthick: 1.0,
        slant: 0.0,
        condense: 1.0,
        terminalround: 0.5,
        lbearing: 40.0,
        rbearing: 40.0,
    }
}

/// Writes a small project into a temporary directory.
pub fn project(files: &[(&str, &str)]) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in files {
        let p = dir.path().join(name);
        std::fs::create_dir_all(p.parent().unwrap()).unwrap();
        std::fs::write(p, text).unwrap();
    }
    dir
}
