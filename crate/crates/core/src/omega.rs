//! The trace recurrence w_j and matrix powers computed through it.
//!
//! w_0 = 0, w_1 = 1, w_{j+1}(x) = x w_j(x) - w_{j-1}(x), extended to
//! negative indices by w_{-j} = -w_j. For x = 2 cos u this is
//! sin(j u) / sin(u).

use crate::error::{Error, Result};
use crate::mat2::Mat2C;
use num_complex::Complex64;

/// Determinant tolerance for arguments of matrix_power.
const DET_TOL: f64 = 1e-9;
/// Required agreement between the recurrence route and plain multiplication.
const ROUTE_TOL: f64 = 1e-9;

pub fn omega(j: i64, x: f64) -> f64 {
    if j < 0 {
        return -omega(-j, x);
    }
    if j == 0 {
        return 0.0;
    }
    let mut w0 = 0.0;
    let mut w1 = 1.0;
    for _ in 0..(j - 1) {
        let next = x * w1 - w0;
        w0 = w1;
        w1 = next;
    }
    w1
}

pub fn omega_c(j: i64, x: Complex64) -> Complex64 {
    if j < 0 {
        return -omega_c(-j, x);
    }
    if j == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut w0 = Complex64::new(0.0, 0.0);
    let mut w1 = Complex64::new(1.0, 0.0);
    for _ in 0..(j - 1) {
        let next = x * w1 - w0;
        w0 = w1;
        w1 = next;
    }
    w1
}

/// X^j for unimodular X, via X^j = w_j(tr X) X - w_{j-1}(tr X) I.
///
/// The same power is recomputed by repeated multiplication and the two
/// routes must agree within 1e-9; a mismatch reports numerical breakdown
/// rather than returning a silently wrong matrix.
pub fn matrix_power(x: &Mat2C, j: i64) -> Result<Mat2C> {
    let det_err = (x.det() - Complex64::new(1.0, 0.0)).norm();
    if det_err > DET_TOL {
        return Err(Error::NotUnimodular(det_err));
    }
    let tr = x.trace();
    let wj = omega_c(j, tr);
    let wjm1 = omega_c(j - 1, tr);
    let id = Mat2C::identity();
    let by_recurrence = Mat2C::new(
        wj * x.a - wjm1 * id.a,
        wj * x.b - wjm1 * id.b,
        wj * x.c - wjm1 * id.c,
        wj * x.d - wjm1 * id.d,
    );

    let base = if j >= 0 { *x } else { x.inverse_unimodular() };
    let mut by_product = Mat2C::identity();
    for _ in 0..j.unsigned_abs() {
        by_product = by_product.mul(&base);
    }

    let diff = by_recurrence.sub(&by_product).max_abs();
    let scale = 1.0 + by_product.max_abs();
    if diff > ROUTE_TOL * scale {
        return Err(Error::PowerMismatch(diff));
    }
    Ok(by_recurrence)
}
