// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Square dense linear solver used as a test reference.

#![allow(dead_code)]

/// Solves `a x = b` by Gauss-Jordan elimination with row pivoting.
/// Returns `None` when the matrix is singular.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for i in 0..n {
        let best = (i..n).max_by(|&r, &s| a[r][i].abs().total_cmp(&a[s][i].abs()))?;
        if a[best][i].abs() < 1e-12 {
            return None;
        }
        a.swap(i, best);
        b.swap(i, best);
        for r in 0..n {
            if r != i {
                let f = a[r][i] / a[i][i];
                for c in i..n {
                    a[r][c] -= f * a[i][c];
                }
                b[r] -= f * b[i];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}
