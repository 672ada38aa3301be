//! Finite-size scaling fit `y = A + B x + C x^2`, `x = (eta - eta_th) L^(1/nu)`.
//!
//! For fixed `(eta_th, nu)` the coefficients follow from weighted linear least
//! squares, so only the two nonlinear parameters are searched: a grid over
//! the window, then a Nelder-Mead polish.

use std::f64::consts::PI;

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-width of the fit window around the crossing estimate.
pub const WINDOW: f64 = 0.03 * PI;
pub const BOOTSTRAP: usize = 200;
const NU_RANGE: (f64, f64) = (0.3, 5.0);
/// Floor on standard errors so exact zeros keep a finite weight.
const SE_FLOOR: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitPoint {
    pub eta: f64,
    pub distance: usize,
    pub y: f64,
    pub se: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub eta_th: f64,
    pub eta_th_se: f64,
    pub nu: f64,
    pub nu_se: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Bootstrap covariance of `(eta_th, nu, A, B, C)`.
    pub covariance: [[f64; 5]; 5],
    pub window: (f64, f64),
    pub chi2: f64,
    pub points_used: usize,
}

struct Problem<'a> {
    pts: &'a [FitPoint],
    ys: Vec<f64>,
}

impl Problem<'_> {
    /// Weighted linear least squares for `(A, B, C)`; returns them with chi^2.
    fn solve(&self, eta_th: f64, nu: f64) -> ([f64; 3], f64) {
        let mut m = [[0.0; 3]; 3];
        let mut v = [0.0; 3];
        let basis = |p: &FitPoint| {
            let x = (p.eta - eta_th) * (p.distance as f64).powf(1.0 / nu);
            [1.0, x, x * x]
        };
        for (p, &y) in self.pts.iter().zip(&self.ys) {
            let w = 1.0 / p.se.max(SE_FLOOR).powi(2);
            let f = basis(p);
            for i in 0..3 {
                v[i] += w * f[i] * y;
                for j in 0..3 {
                    m[i][j] += w * f[i] * f[j];
                }
            }
        }
        let coef = solve3(m, v).unwrap_or([f64::NAN; 3]);
        let chi2 = self
            .pts
            .iter()
            .zip(&self.ys)
            .map(|(p, &y)| {
                let f = basis(p);
                let r = y - (coef[0] + coef[1] * f[1] + coef[2] * f[2]);
                r * r / p.se.max(SE_FLOOR).powi(2)
            })
            .sum();
        (coef, chi2)
    }
}

impl CostFunction for Problem<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        if !(NU_RANGE.0..=NU_RANGE.1).contains(&p[1]) {
            return Ok(f64::INFINITY);
        }
        let chi2 = self.solve(p[0], p[1]).1;
        Ok(if chi2.is_finite() { chi2 } else { f64::INFINITY })
    }
}

/// Gaussian elimination with partial pivoting on a 3x3 system.
fn solve3(mut m: [[f64; 3]; 3], mut v: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        v.swap(col, piv);
        for r in col + 1..3 {
            let f = m[r][col] / m[col][col];
            for k in col..3 {
                m[r][k] -= f * m[col][k];
            }
            v[r] -= f * v[col];
        }
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        x[r] = (v[r] - (r + 1..3).map(|k| m[r][k] * x[k]).sum::<f64>()) / m[r][r];
    }
    Some(x)
}

fn fit_once(pts: &[FitPoint], ys: Vec<f64>, window: (f64, f64)) -> Result<(f64, f64, [f64; 3], f64)> {
    let prob = Problem { pts, ys };
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..=40 {
        let e = window.0 + (window.1 - window.0) * i as f64 / 40.0;
        for j in 0..=30 {
            let nu = NU_RANGE.0 * (NU_RANGE.1 / NU_RANGE.0).powf(j as f64 / 30.0);
            let c = prob.solve(e, nu).1;
            if c < best.0 {
                best = (c, e, nu);
            }
        }
    }
    if !best.0.is_finite() {
        return Err(Error::Fit("no finite chi^2 on the search grid".into()));
    }
    let (e0, n0) = (best.1, best.2);
    let de = (window.1 - window.0) / 40.0;
    let simplex = vec![vec![e0, n0], vec![e0 + de, n0], vec![e0, n0 * 1.1]];
    let solver = NelderMead::new(simplex).with_sd_tolerance(1e-12).map_err(|e| Error::Fit(e.to_string()))?;
    let res = Executor::new(Problem { pts, ys: prob.ys.clone() }, solver)
        .configure(|s| s.max_iters(2000))
        .run()
        .map_err(|e| Error::Fit(e.to_string()))?;
    let p = res.state.best_param.ok_or_else(|| Error::Fit("optimizer returned no parameters".into()))?;
    let (coef, chi2) = prob.solve(p[0], p[1]);
    if !chi2.is_finite() {
        return Err(Error::Fit("fit did not converge".into()));
    }
    Ok((p[0], p[1], coef, chi2))
}

/// Where the curves of the smallest and the largest distance cross.
pub fn crossing_estimate(points: &[FitPoint]) -> Result<f64> {
    let mut ls: Vec<usize> = points.iter().map(|p| p.distance).collect();
    ls.sort_unstable();
    ls.dedup();
    let curve = |l: usize| {
        let mut c: Vec<(f64, f64)> = points.iter().filter(|p| p.distance == l).map(|p| (p.eta, p.y)).collect();
        c.sort_by(|a, b| a.0.total_cmp(&b.0));
        c
    };
    let (small, large) = (curve(ls[0]), curve(*ls.last().unwrap()));
    let interp = |c: &[(f64, f64)], e: f64| -> Option<f64> {
        c.windows(2).find(|w| w[0].0 <= e && e <= w[1].0).map(|w| {
            let t = if w[1].0 > w[0].0 { (e - w[0].0) / (w[1].0 - w[0].0) } else { 0.0 };
            w[0].1 + t * (w[1].1 - w[0].1)
        })
    };
    let diffs: Vec<(f64, f64)> = large.iter().filter_map(|&(e, y)| interp(&small, e).map(|ys| (e, y - ys))).collect();
    if diffs.is_empty() {
        return Err(Error::Fit("curves share no eta range".into()));
    }
    for w in diffs.windows(2) {
        if w[0].1 <= 0.0 && w[1].1 > 0.0 {
            return Ok(w[0].0 - w[0].1 * (w[1].0 - w[0].0) / (w[1].1 - w[0].1));
        }
    }
    Ok(diffs.iter().min_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).unwrap().0)
}

pub fn fit_threshold(points: &[FitPoint], seed: u64) -> Result<FitResult> {
    let mut ls: Vec<usize> = points.iter().map(|p| p.distance).collect();
    ls.sort_unstable();
    ls.dedup();
    if ls.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 distances, got {}", ls.len())));
    }
    for &l in &ls {
        let k = points.iter().filter(|p| p.distance == l).count();
        if k < 5 {
            return Err(Error::Fit(format!("distance {l} has {k} eta points, need 5")));
        }
    }
    let center = crossing_estimate(points)?;
    let window = (center - WINDOW, center + WINDOW);
    let used: Vec<FitPoint> = points.iter().filter(|p| p.eta >= window.0 && p.eta <= window.1).cloned().collect();
    if used.len() < 6 {
        return Err(Error::Fit(format!("only {} points inside the fit window", used.len())));
    }
    let ys: Vec<f64> = used.iter().map(|p| p.y).collect();
    let (eta_th, nu, coef, chi2) = fit_once(&used, ys, window)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws: Vec<[f64; 5]> = Vec::with_capacity(BOOTSTRAP);
    for _ in 0..BOOTSTRAP {
        let ys: Vec<f64> = used
            .iter()
            .map(|p| {
                let z: f64 = StandardNormal.sample(&mut rng);
                p.y + z * p.se
            })
            .collect();
        if let Ok((e, n, c, _)) = fit_once(&used, ys, window) {
            draws.push([e, n, c[0], c[1], c[2]]);
        }
    }
    if draws.len() < BOOTSTRAP / 2 {
        return Err(Error::Fit(format!("only {} of {BOOTSTRAP} bootstrap fits converged", draws.len())));
    }
    let k = draws.len() as f64;
    let mean: Vec<f64> = (0..5).map(|i| draws.iter().map(|d| d[i]).sum::<f64>() / k).collect();
    let mut covariance = [[0.0; 5]; 5];
    for (i, row) in covariance.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            *c = draws.iter().map(|d| (d[i] - mean[i]) * (d[j] - mean[j])).sum::<f64>() / (k - 1.0);
        }
    }
    Ok(FitResult {
        eta_th,
        eta_th_se: covariance[0][0].sqrt(),
        nu,
        nu_se: covariance[1][1].sqrt(),
        a: coef[0],
        b: coef[1],
        c: coef[2],
        covariance,
        window,
        chi2,
        points_used: used.len(),
    })
}
