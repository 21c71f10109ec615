//! Translation numbers of disk-model matrices acting on the boundary circle.
//!
//! A matrix preserving the unit disk acts on the boundary circle; lifting
//! that circle map to the real line (one unit per full turn) gives a map
//! whose averaged displacement is the translation number. The lift is fixed
//! by `lift_hint`: the integer part is chosen so the displacement at angle 0
//! falls within half a unit of the hint.

use crate::error::{Error, Result};
use crate::mat2::Mat2C;
use num_complex::Complex64;
use std::f64::consts::TAU;

const SU11_TOL: f64 = 1e-8;
/// Base resolution of the displacement table (refined where it jumps).
const GRID_SIZE: usize = 8192;
/// Largest displacement increment tolerated between adjacent table nodes.
const MAX_INCREMENT: f64 = 0.4;
/// The displacement branch must close up around the circle this well.
const CLOSURE_TOL: f64 = 1e-6;
/// Convergence requirement between the half- and full-length estimates.
const CONVERGENCE_TOL: f64 = 1e-2;

/// Principal boundary displacement at angle `x` (both in turns), in (-1/2, 1/2].
fn principal_displacement(g: &Mat2C, x: f64) -> f64 {
    let z = Complex64::cis(TAU * x);
    let w = g.apply_mobius(z);
    (w / z).arg() / TAU
}

/// Estimate the translation number of the boundary action of `g`.
///
/// `n_iter` orbit steps are taken (at least 100); the estimate must agree
/// with the half-length estimate within 1e-2 or the computation reports
/// divergence.
pub fn translation_number_oracle(g: &Mat2C, lift_hint: f64, n_iter: usize) -> Result<f64> {
    if n_iter < 100 {
        return Err(Error::OracleBudget(n_iter));
    }
    if !g.is_su11(SU11_TOL) {
        return Err(Error::NotDiskModel);
    }

    // Build a continuous branch of the displacement on [0, 1].
    let mut xs = Vec::with_capacity(GRID_SIZE + 1);
    let mut ds = Vec::with_capacity(GRID_SIZE + 1);
    xs.push(0.0);
    ds.push(principal_displacement(g, 0.0));
    let mut i = 1usize;
    let mut pending: Vec<f64> = Vec::new();
    while i <= GRID_SIZE || !pending.is_empty() {
        let x = match pending.pop() {
            Some(x) => x,
            None => {
                let x = i as f64 / GRID_SIZE as f64;
                i += 1;
                x
            }
        };
        let prev_x = *xs.last().unwrap();
        let prev_d = *ds.last().unwrap();
        let p = principal_displacement(g, x);
        let step = p - principal_displacement(g, prev_x);
        let wrapped = step - step.round();
        if wrapped.abs() > MAX_INCREMENT && x - prev_x > 1e-12 {
            pending.push(x);
            pending.push(0.5 * (prev_x + x));
            continue;
        }
        xs.push(x);
        ds.push(prev_d + wrapped);
    }
    let closure = (ds[ds.len() - 1] - ds[0]).abs();
    if closure > CLOSURE_TOL {
        return Err(Error::OracleDiverged(closure));
    }

    // Branch value at an arbitrary angle: principal value snapped to the
    // integer shift suggested by the interpolated table.
    let branch = |x: f64| -> f64 {
        let pos = xs.partition_point(|&node| node < x);
        let (x0, x1, d0, d1) = if pos == 0 {
            (xs[0], xs[1], ds[0], ds[1])
        } else if pos >= xs.len() {
            let n = xs.len();
            (xs[n - 2], xs[n - 1], ds[n - 2], ds[n - 1])
        } else {
            (xs[pos - 1], xs[pos], ds[pos - 1], ds[pos])
        };
        let frac = if x1 > x0 { (x - x0) / (x1 - x0) } else { 0.0 };
        let interp = d0 + (d1 - d0) * frac;
        let p = principal_displacement(g, x);
        p + (interp - p).round()
    };

    let shift = (lift_hint - ds[0]).round();

    let mut x = 0.0f64;
    let mut half_estimate = 0.0;
    for step in 1..=n_iter {
        let frac = x - x.floor();
        x += branch(frac) + shift;
        if step == n_iter / 2 {
            half_estimate = x / step as f64;
        }
    }
    let estimate = x / n_iter as f64;
    let drift = (estimate - half_estimate).abs();
    if drift > CONVERGENCE_TOL {
        return Err(Error::OracleDiverged(drift));
    }
    Ok(estimate)
}
