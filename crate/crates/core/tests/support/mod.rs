// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

#![allow(dead_code)]

pub mod dense_linear;
pub mod hobby_oracle;
pub mod polyline;
