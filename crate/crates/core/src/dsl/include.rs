// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

use std::path::{Component, Path, PathBuf};

use super::ast::{Program, Stmt, StmtKind};
use super::diagnostic::Diagnostic;
use super::parser::parse_stmts;

/// Source of the standard library file `plain_ex`.
pub const PLAIN_EX: &str = include_str!("../../prelude/plain_ex.mpg");

/// Name under which the built-in `plain_ex` appears in diagnostics.
pub const PLAIN_EX_NAME: &str = "<plain_ex>";

/// Includes nested deeper than this are rejected.
const MAX_INCLUDE_DEPTH: usize = 32;

/// Finds the text of an `input` target.
pub trait SourceLoader {
    /// Resolves `target` as written in file `from`, returning a canonical
    /// name (used for cycle detection and messages) and the file contents.
    fn load(&self, from: &str, target: &str) -> Result<(String, String), String>;
}

impl<F> SourceLoader for F
where
    F: Fn(&str, &str) -> Result<(String, String), String>,
{
    fn load(&self, from: &str, target: &str) -> Result<(String, String), String> {
        self(from, target)
    }
}

/// Serves only the built-in `plain_ex`.
#[derive(Clone, Copy, Debug, Default)]
pub struct PreludeOnly;

impl SourceLoader for PreludeOnly {
    fn load(&self, _from: &str, target: &str) -> Result<(String, String), String> {
        if is_plain_ex(target) {
            Ok((PLAIN_EX_NAME.into(), PLAIN_EX.into()))
        } else {
            Err(format!("cannot read `{target}`: file inclusion is not available here"))
        }
    }
}

fn is_plain_ex(target: &str) -> bool {
    target == "plain_ex" || target == "plain_ex.mpg"
}

/// Reads files relative to the including file. `name` and `name.mpg` are
/// tried in turn; `plain_ex` falls back to the built-in copy.
#[derive(Clone, Copy, Debug, Default)]
pub struct FileLoader;

impl SourceLoader for FileLoader {
    fn load(&self, from: &str, target: &str) -> Result<(String, String), String> {
        let base = Path::new(from).parent().unwrap_or(Path::new(""));
        let joined = normalize(&base.join(target));
        let mut candidates = vec![joined.clone()];
        if joined.extension().is_none() {
            candidates.push(joined.with_extension("mpg"));
        }
        for c in &candidates {
            if c.is_file() {
                return std::fs::read_to_string(c)
                    .map(|text| (c.display().to_string(), text))
                    .map_err(|e| format!("cannot read `{}`: {e}", c.display()));
            }
        }
        if is_plain_ex(target) {
            return Ok((PLAIN_EX_NAME.into(), PLAIN_EX.into()));
        }
        Err(format!("cannot find `{target}` (looked for {})", candidates[0].display()))
    }
}

/// Removes `.` and resolvable `..` components without touching the disk.
pub fn normalize(path: &Path) -> PathBuf {
    let mut out = PathBuf::new();
    for c in path.components() {
        match c {
            Component::CurDir => {}
            Component::ParentDir => {
                if matches!(out.components().next_back(), Some(Component::Normal(_))) {
                    out.pop();
                } else {
                    out.push("..");
                }
            }
            other => out.push(other),
        }
    }
    out
}

/// Replaces every `input` statement by the statements of the named file,
/// recursively. Spans of included statements point into
/// [`Program::files`].
pub fn resolve_includes(program: Program, loader: &dyn SourceLoader) -> Result<Program, Vec<Diagnostic>> {
    let mut files = program.files;
    if files.is_empty() {
        files.push(String::new());
    }
    let mut stack = vec![files[0].clone()];
    let stmts = expand(program.stmts, loader, &mut files, &mut stack)?;
    Ok(Program { stmts, files })
}

fn expand(
    stmts: Vec<Stmt>,
    loader: &dyn SourceLoader,
    files: &mut Vec<String>,
    stack: &mut Vec<String>,
) -> Result<Vec<Stmt>, Vec<Diagnostic>> {
    let mut out = Vec::with_capacity(stmts.len());
    for stmt in stmts {
        let StmtKind::Include(target) = &stmt.kind else {
            out.push(stmt);
            continue;
        };
        let at = |msg: String| {
            let mut d = Diagnostic::error(msg, stmt.span);
            d.file = (stmt.span.file != 0).then(|| files[stmt.span.file as usize].clone());
            vec![d]
        };
        let from = files[stmt.span.file as usize].clone();
        let (name, text) = loader.load(&from, target).map_err(at)?;
        if stack.contains(&name) {
            let mut chain = stack.clone();
            chain.push(name);
            return Err(at(format!("include cycle: {}", chain.join(" -> "))));
        }
        if stack.len() > MAX_INCLUDE_DEPTH {
            return Err(at(format!("includes nested more than {MAX_INCLUDE_DEPTH} deep")));
        }
        let id = files.len();
        if id > u16::MAX as usize {
            return Err(at("too many included files".into()));
        }
        files.push(name.clone());
        let inner = parse_stmts(&text, id as u16).map_err(|ds| {
            ds.into_iter()
                .map(|mut d| {
                    d.file = Some(name.clone());
                    d
                })
                .collect::<Vec<_>>()
        })?;
        stack.push(name);
        let inner = expand(inner, loader, files, stack)?;
        stack.pop();
        out.extend(inner);
    }
    Ok(out)
}
