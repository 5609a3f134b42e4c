// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

//! The glyph description language.
//!
//! A program is a sequence of `;`-terminated statements in a METAPOST
//! dialect: numeric parameters (`thick := 0.9u`), linear point equations
//! (`z1 = (0, y0 + h/2)`), Hobby paths (`z0{dir 135}..z1--z2`), pens
//! (`fix_nib(w, h, angle)`, `pencircle scaled 10`), `pen_stroke` with per-node
//! nibs and cuts, and `draw`/`fill` statements that add contours to the
//! glyph.
//!
//! Processing is three steps: [`parse`] builds a [`Program`] with spans,
//! [`resolve_includes`] splices `input` files, and [`evaluate`] runs the
//! statements against a set of parameter overrides. [`compile`] does all
//! three.
//!
//! ```
//! use metaglyph::dsl::{compile, EvalOptions, PreludeOnly};
//!
//! let src = "side := 10; draw (0,0)--(side,0)--(side,side)--(0,side)--(0,0);";
//! let glyph = compile(src, "square.mpg", &PreludeOnly, &EvalOptions::default());
//! assert!(glyph.diagnostics.is_empty());
//! assert_eq!(glyph.outline.len(), 1);
//! ```

mod ast;
mod diagnostic;
mod eval;
mod include;
mod lexer;
mod parser;
mod pretty;

pub use ast::*;
pub use diagnostic::{Diagnostic, Severity};
pub use eval::{evaluate, EvalOptions, GlyphResult, DEFAULT_MAX_DEPTH};
pub use include::{normalize, resolve_includes, FileLoader, PreludeOnly, SourceLoader, PLAIN_EX, PLAIN_EX_NAME};
pub use parser::{is_keyword, parse, parse_stmts, KEYWORDS};
pub use pretty::{pretty, pretty_expr};

/// Parses `source` (named `name` in diagnostics), resolves its includes
/// and evaluates it.
pub fn compile(source: &str, name: &str, loader: &dyn SourceLoader, options: &EvalOptions) -> GlyphResult {
    let failed = |diagnostics| GlyphResult {
        diagnostics,
        ..Default::default()
    };
    let mut program = match parse(source) {
        Ok(p) => p,
        Err(d) => return failed(d),
    };
    program.files[0] = name.to_string();
    match resolve_includes(program, loader) {
        Ok(p) => evaluate(&p, options),
        Err(d) => failed(d),
    }
}
