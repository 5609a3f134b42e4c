// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

use std::fmt;
use std::path::PathBuf;

use metaglyph::dsl::{
    evaluate, parse, parse_stmts, resolve_includes, Diagnostic, EvalOptions, FileLoader, GlyphResult, Program,
    SourceLoader, Span, Stmt, StmtKind,
};
use metaglyph::geometry::{bbox, Affine, Contour, Vec2};
use rayon::prelude::*;

use crate::config::TypographicConfig;
use crate::manifest::{parse_unicode, GlyphEntry, Location, Manifest, MasterSpec};
use crate::{Error, Result};

/// Resolves `input` relative to the including file, then relative to the
/// project root, so `input ./config/Regular;` works from any directory.
#[derive(Clone, Debug)]
pub struct ProjectLoader {
    pub root: PathBuf,
}

impl SourceLoader for ProjectLoader {
    fn load(&self, from: &str, target: &str) -> Result<(String, String), String> {
        FileLoader.load(from, target).or_else(|err| {
            let anchor = self.root.join("-");
            FileLoader
                .load(&anchor.to_string_lossy(), target)
                .map_err(|_| err)
        })
    }
}

/// One glyph of a master, after the master's transforms.
#[derive(Clone, Debug, PartialEq)]
pub struct BuiltGlyph {
    pub name: String,
    pub unicode: Option<u32>,
    pub advance: f64,
    pub outline: Vec<Contour>,
    /// Centre lines of the strokes, transformed like the outline.
    pub strokes: Vec<Contour>,
}

/// The glyphs of one master or instance, in manifest order.
#[derive(Clone, Debug, PartialEq)]
pub struct GlyphSet {
    pub name: String,
    pub location: Location,
    pub config: TypographicConfig,
    pub glyphs: Vec<BuiltGlyph>,
}

impl GlyphSet {
    pub fn glyph(&self, name: &str) -> Option<&BuiltGlyph> {
        self.glyphs.iter().find(|g| g.name == name)
    }
}

/// Every master of a project, in manifest order.
#[derive(Clone, Debug)]
pub struct MasterSet {
    pub manifest: Manifest,
    pub masters: Vec<GlyphSet>,
}

impl MasterSet {
    pub fn default_master(&self) -> &GlyphSet {
        let i = self.manifest.default_master().unwrap_or(0);
        &self.masters[i]
    }

    pub fn master(&self, name: &str) -> Option<&GlyphSet> {
        self.masters.iter().find(|m| m.name == name)
    }

    /// Checks every master's configuration against the axis bindings.
    pub fn check_bindings(&self) -> Result<()> {
        for m in &self.masters {
            check_bindings(&self.manifest, m)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GlyphFailure {
    pub glyph: String,
    /// Rendered as `file:line:col: severity: message`.
    pub diagnostics: Vec<String>,
}

impl fmt::Display for GlyphFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "glyph `{}`:", self.glyph)?;
        for d in &self.diagnostics {
            write!(f, "\n  {d}")?;
        }
        Ok(())
    }
}

fn synthetic(kind: StmtKind) -> Stmt {
    Stmt {
        kind,
        span: Span::default(),
    }
}

fn config_includes(manifest: &Manifest, spec: &MasterSpec) -> Vec<Stmt> {
    let config = std::path::absolute(manifest.resolve(&spec.config)).unwrap_or_else(|_| manifest.resolve(&spec.config));
    vec![
        synthetic(StmtKind::Include("plain_ex".into())),
        synthetic(StmtKind::Include(config.to_string_lossy().into_owned())),
    ]
}

fn render(ds: &[Diagnostic], main: &str) -> Vec<String> {
    ds.iter().map(|d| d.render(main)).collect()
}

fn options(spec: &MasterSpec) -> EvalOptions {
    EvalOptions::with_overrides(spec.overrides.clone())
}

/// Evaluates a master's configuration on its own and reads back the
/// typographic parameters.
pub fn load_config(manifest: &Manifest, spec: &MasterSpec) -> Result<TypographicConfig> {
    let fail = |message: String| Error::Config {
        master: spec.name.clone(),
        message,
    };
    let main = manifest.root.join("manifest").to_string_lossy().into_owned();
    let program = Program {
        stmts: config_includes(manifest, spec),
        files: vec![main.clone()],
    };
    let loader = ProjectLoader {
        root: manifest.root.clone(),
    };
    let program = resolve_includes(program, &loader).map_err(|ds| fail(render(&ds, &main).join("\n")))?;
    let result = evaluate(&program, &options(spec));
    if result.has_errors() {
        return Err(fail(render(&result.diagnostics, &main).join("\n")));
    }
    TypographicConfig::from_variables(&result.variables).map_err(|e| fail(e.to_string()))
}

fn evaluate_glyph(manifest: &Manifest, spec: &MasterSpec, entry: &GlyphEntry) -> Result<GlyphResult, GlyphFailure> {
    let path = manifest.resolve(&entry.source);
    let main = path.to_string_lossy().into_owned();
    let fail = |diagnostics| GlyphFailure {
        glyph: entry.name.clone(),
        diagnostics,
    };
    let text = std::fs::read_to_string(&path).map_err(|e| fail(vec![format!("{main}: {e}")]))?;
    let mut program = parse(&text).map_err(|ds| fail(render(&ds, &main)))?;
    program.files[0] = main.clone();
    let mut stmts = config_includes(manifest, spec);
    stmts.append(&mut program.stmts);
    if let Some(expr) = &entry.advance {
        let id = program.files.len() as u16;
        program.files.push(format!("{} (advance of `{}`)", manifest.root.join("manifest").display(), entry.name));
        let header = format!("glyph \"{}\" advance {expr};", entry.name.replace('"', ""));
        let extra = parse_stmts(&header, id).map_err(|ds| {
            fail(ds.iter().map(|d| format!("advance of `{}`: {}", entry.name, d.message)).collect())
        })?;
        stmts.extend(extra);
    }
    program.stmts = stmts;
    let loader = ProjectLoader {
        root: manifest.root.clone(),
    };
    let program = resolve_includes(program, &loader).map_err(|ds| fail(render(&ds, &main)))?;
    let result = evaluate(&program, &options(spec));
    if result.has_errors() {
        return Err(fail(render(&result.diagnostics, &main)));
    }
    for d in &result.diagnostics {
        log::warn!("{}", d.render(&main));
    }
    Ok(result)
}

/// Places and transforms one evaluated glyph: without an explicit advance
/// the outline is shifted so its left edge sits at `lbearing`; then x is
/// scaled by `condense` and the result slanted by `slant` degrees.
fn place(config: &TypographicConfig, name: &str, unicode: Option<u32>, result: GlyphResult) -> BuiltGlyph {
    let drawn = bbox(&result.outline).ok();
    let (shift, width) = match (result.advance, drawn) {
        (None, Some(r)) => (config.lbearing - r.x_min, r.width() + config.lbearing + config.rbearing),
        (None, None) => (0.0, config.lbearing + config.rbearing),
        (Some(a), _) => (0.0, a),
    };
    let m = Affine::slant_deg(config.slant)
        * Affine::scale_xy(config.condense, 1.0)
        * Affine::translate(Vec2::new(shift, 0.0));
    BuiltGlyph {
        name: name.to_string(),
        unicode,
        advance: config.condense * width,
        outline: result.outline.iter().map(|c| c.transform(&m)).collect(),
        strokes: result.strokes.iter().map(|c| c.transform(&m)).collect(),
    }
}

/// Builds every glyph of the manifest with one master's configuration.
pub fn build_master(manifest: &Manifest, spec: &MasterSpec) -> Result<GlyphSet> {
    let config = load_config(manifest, spec)?;
    let results: Vec<Result<BuiltGlyph, GlyphFailure>> = manifest
        .glyphs
        .par_iter()
        .map(|entry| {
            let result = evaluate_glyph(manifest, spec, entry)?;
            let unicode = match &entry.unicode {
                Some(u) => Some(parse_unicode(u).map_err(|e| GlyphFailure {
                    glyph: entry.name.clone(),
                    diagnostics: vec![e],
                })?),
                None => result.unicode,
            };
            Ok(place(&config, &entry.name, unicode, result))
        })
        .collect();
    let mut glyphs = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(g) => glyphs.push(g),
            Err(f) => failures.push(f),
        }
    }
    if !failures.is_empty() {
        return Err(Error::Build {
            master: spec.name.clone(),
            failures,
        });
    }
    Ok(GlyphSet {
        name: spec.name.clone(),
        location: manifest.full_location(&spec.location),
        config,
        glyphs,
    })
}

fn check_bindings(manifest: &Manifest, set: &GlyphSet) -> Result<()> {
    for axis in &manifest.axes {
        let Some(b) = axis.binding() else { continue };
        let at = set.location.get(&axis.tag).copied().unwrap_or(axis.default);
        let fail = |message: String| Error::Config {
            master: set.name.clone(),
            message,
        };
        let want = b
            .value_at(at)
            .ok_or_else(|| fail(format!("axis `{}` has no mapping for {at}", axis.tag)))?;
        let got = set
            .config
            .get(&b.parameter)
            .ok_or_else(|| fail(format!("axis `{}` drives unknown parameter `{}`", axis.tag, b.parameter)))?;
        if (got - want).abs() > 1e-9 * want.abs().max(1.0) {
            return Err(fail(format!(
                "{} is {got}, but {}={at} maps to {want}",
                b.parameter, axis.tag
            )));
        }
    }
    Ok(())
}

/// Builds every master, in parallel, and checks them against the axis
/// bindings.
pub fn build_all(manifest: &Manifest) -> Result<MasterSet> {
    let masters = manifest
        .masters
        .par_iter()
        .map(|spec| build_master(manifest, spec))
        .collect::<Result<Vec<_>>>()?;
    let set = MasterSet {
        manifest: manifest.clone(),
        masters,
    };
    set.check_bindings()?;
    Ok(set)
}

