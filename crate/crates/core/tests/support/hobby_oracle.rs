// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Reference Hobby solver used only by tests.
//!
//! Written directly from the textbook statement: both the departure angles
//! theta_k and the arrival angles phi_k are unknowns (2n of them), the
//! mock-curvature and angle-sum equations are assembled into one dense
//! matrix and solved by Gaussian elimination with full row pivoting.
//! Points are handled as complex numbers. Tension 1 and curl 1 throughout.

#![allow(dead_code)]

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C(pub f64, pub f64);

impl C {
    fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
    fn sub(self, o: C) -> C {
        C(self.0 - o.0, self.1 - o.1)
    }
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn scale(self, s: f64) -> C {
        C(self.0 * s, self.1 * s)
    }
    fn abs(self) -> f64 {
        (self.0 * self.0 + self.1 * self.1).sqrt()
    }
    fn arg(self) -> f64 {
        self.1.atan2(self.0)
    }
    fn cis(a: f64) -> C {
        C(a.cos(), a.sin())
    }
}

fn wrap(a: f64) -> f64 {
    let mut a = a;
    while a > std::f64::consts::PI {
        a -= 2.0 * std::f64::consts::PI;
    }
    while a <= -std::f64::consts::PI {
        a += 2.0 * std::f64::consts::PI;
    }
    a
}

/// `f(theta, phi)` with the 1/3 folded in.
fn hobby_f(theta: f64, phi: f64) -> f64 {
    let a = 2f64.sqrt();
    let b = 1.0 / 16.0;
    let c = (3.0 - 5f64.sqrt()) / 2.0;
    let num = 2.0 + a * (theta.sin() - b * phi.sin()) * (phi.sin() - b * theta.sin()) * (theta.cos() - phi.cos());
    let den = 3.0 * (1.0 + (1.0 - c) * theta.cos() + c * phi.cos());
    (num / den).min(4.0 / 3.0)
}

fn gauss(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for i in 0..n {
        let mut best = i;
        for r in i + 1..n {
            if a[r][i].abs() > a[best][i].abs() {
                best = r;
            }
        }
        a.swap(i, best);
        b.swap(i, best);
        for r in 0..n {
            if r == i {
                continue;
            }
            let f = a[r][i] / a[i][i];
            if f != 0.0 {
                for c in i..n {
                    a[r][c] -= f * a[i][c];
                }
                b[r] -= f * b[i];
            }
        }
    }
    (0..n).map(|i| b[i] / a[i][i]).collect()
}

/// Control point pairs for an open path through `pts`, all joints `..`,
/// optional absolute start/end directions in degrees.
pub fn open(pts: &[(f64, f64)], start_dir: Option<f64>, end_dir: Option<f64>) -> Vec<((f64, f64), (f64, f64))> {
    let z: Vec<C> = pts.iter().map(|&(x, y)| C(x, y)).collect();
    let n = z.len() - 1; // chords
    let delta: Vec<C> = (0..n).map(|k| z[k + 1].sub(z[k])).collect();
    let d: Vec<f64> = delta.iter().map(|c| c.abs()).collect();
    let psi: Vec<f64> = (0..=n)
        .map(|k| if k == 0 || k == n { 0.0 } else { wrap(delta[k].arg() - delta[k - 1].arg()) })
        .collect();
    // variable layout: theta_k at k (0..n-1), phi_k at n + k - 1 (k = 1..n)
    let th = |k: usize| k;
    let ph = |k: usize| n + k - 1;
    let m = 2 * n;
    let mut a = vec![vec![0.0; m]; m];
    let mut b = vec![0.0; m];
    let mut row = 0;
    for k in 1..n {
        // theta_k + phi_k = -psi_k
        a[row][th(k)] = 1.0;
        a[row][ph(k)] = 1.0;
        b[row] = -psi[k];
        row += 1;
        // (theta_{k-1} - 2 phi_k) / d_{k-1} = (phi_{k+1} - 2 theta_k) / d_k
        a[row][th(k - 1)] += 1.0 / d[k - 1];
        a[row][ph(k)] += -2.0 / d[k - 1];
        a[row][ph(k + 1)] += -1.0 / d[k];
        a[row][th(k)] += 2.0 / d[k];
        row += 1;
    }
    match start_dir {
        Some(dir) => {
            a[row][th(0)] = 1.0;
            b[row] = wrap(dir.to_radians() - delta[0].arg());
        }
        None => {
            // phi_1 - 2 theta_0 = gamma (theta_0 - 2 phi_1), gamma = 1
            a[row][ph(1)] = 1.0 + 2.0;
            a[row][th(0)] = -2.0 - 1.0;
        }
    }
    row += 1;
    match end_dir {
        Some(dir) => {
            a[row][ph(n)] = 1.0;
            b[row] = wrap(delta[n - 1].arg() - dir.to_radians());
        }
        None => {
            // theta_{n-1} - 2 phi_n = gamma (phi_n - 2 theta_{n-1})
            a[row][th(n - 1)] = 1.0 + 2.0;
            a[row][ph(n)] = -2.0 - 1.0;
        }
    }
    row += 1;
    assert_eq!(row, m);
    let x = gauss(a, b);
    (0..n)
        .map(|k| {
            let theta = x[th(k)];
            let phi = x[ph(k + 1)];
            let c0 = z[k].add(delta[k].mul(C::cis(theta)).scale(hobby_f(theta, phi)));
            let c1 = z[k + 1].sub(delta[k].mul(C::cis(-phi)).scale(hobby_f(phi, theta)));
            ((c0.0, c0.1), (c1.0, c1.1))
        })
        .collect()
}

/// Control point pairs for a closed `..cycle` through `pts`.
pub fn cyclic(pts: &[(f64, f64)]) -> Vec<((f64, f64), (f64, f64))> {
    let z: Vec<C> = pts.iter().map(|&(x, y)| C(x, y)).collect();
    let n = z.len();
    let delta: Vec<C> = (0..n).map(|k| z[(k + 1) % n].sub(z[k])).collect();
    let d: Vec<f64> = delta.iter().map(|c| c.abs()).collect();
    let psi: Vec<f64> = (0..n).map(|k| wrap(delta[k].arg() - delta[(k + n - 1) % n].arg())).collect();
    let th = |k: usize| k % n;
    let ph = |k: usize| n + (k % n);
    let m = 2 * n;
    let mut a = vec![vec![0.0; m]; m];
    let mut b = vec![0.0; m];
    for k in 0..n {
        let prev = (k + n - 1) % n;
        a[2 * k][th(k)] = 1.0;
        a[2 * k][ph(k)] = 1.0;
        b[2 * k] = -psi[k];
        let r = 2 * k + 1;
        a[r][th(prev)] += 1.0 / d[prev];
        a[r][ph(k)] += -2.0 / d[prev];
        a[r][ph(k + 1)] += -1.0 / d[k];
        a[r][th(k)] += 2.0 / d[k];
    }
    let x = gauss(a, b);
    (0..n)
        .map(|k| {
            let theta = x[th(k)];
            let phi = x[ph(k + 1)];
            let c0 = z[k].add(delta[k].mul(C::cis(theta)).scale(hobby_f(theta, phi)));
            let c1 = z[(k + 1) % n].sub(delta[k].mul(C::cis(-phi)).scale(hobby_f(phi, theta)));
            ((c0.0, c0.1), (c1.0, c1.1))
        })
        .collect()
}
