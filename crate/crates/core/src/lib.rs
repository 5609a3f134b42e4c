// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Parametric glyph compiler.
//!
//! Glyph programs written in a small METAPOST-flavoured language are parsed
//! ([`dsl`]), their point equations solved ([`constraint`]), their paths
//! smoothed ([`hobby`]) and stroked with per-node nibs ([`pen`]) into closed
//! cubic outlines ([`geometry`]).

pub mod constraint;
pub mod dsl;
pub mod geometry;
pub mod hobby;
pub mod pen;
