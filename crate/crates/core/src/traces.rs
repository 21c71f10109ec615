//! Trace coordinates (t, s, r) = (tr A, tr B, tr AB): the reducible locus,
//! the constraint curves carrying irreducible characters, and closed forms
//! for the peripheral traces on those curves.

use crate::alexander::{alexander_polynomial, LaurentPoly};
use crate::error::{Error, Result};
use crate::knot::TwistedTorusKnot;
use crate::omega::omega;

/// Residual allowed when a triple is checked against its constraint curve.
pub const CONSTRAINT_TOL: f64 = 1e-8;
/// Residual the k = 1 defining system must meet at curve points.
const SYSTEM_TOL: f64 = 1e-10;
/// Agreement required between independent forms of the same trace.
const FORM_TOL: f64 = 1e-10;
/// Margin keeping parameters away from poles of the curve equations.
const DEGENERATE_MARGIN: f64 = 1e-9;
/// Cutoff under which the recurrence denominator counts as a pole.
const OMEGA_DENOM_TOL: f64 = 1e-10;
/// Scan resolution for circle roots and width target for their refinement.
const ROOT_GRID: usize = 10_000;
const ROOT_WIDTH: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceTriple {
    pub t: f64,
    pub s: f64,
    pub r: f64,
}

/// Traces of the reducible character at boundary parameter theta:
/// (2cos((3k+2) theta / 2), 2cos(3 theta / 2), 2cos((3k+5) theta / 2)).
pub fn reducible_traces(knot: &TwistedTorusKnot, theta: f64) -> TraceTriple {
    let k = knot.k() as f64;
    TraceTriple {
        t: 2.0 * ((3.0 * k + 2.0) * theta / 2.0).cos(),
        s: 2.0 * (3.0 * theta / 2.0).cos(),
        r: 2.0 * ((3.0 * k + 5.0) * theta / 2.0).cos(),
    }
}

fn guard_k1_param(t: f64) -> Result<()> {
    if t.abs() < DEGENERATE_MARGIN {
        return Err(Error::SingularParameter(format!("t = {t} is too close to 0")));
    }
    if (t.abs() - 1.0).abs() < DEGENERATE_MARGIN {
        return Err(Error::SingularParameter(format!(
            "t = {t} is too close to a pole at |t| = 1"
        )));
    }
    Ok(())
}

/// The k = 1 constraint curve through trace space, parametrized by t:
/// s = t/(t^2 - 1), r = 1 - 1/t^2.
///
/// The full defining system
///   (t^2 s - t r - s) t = 1,   (r s - t) s = -1,   r s = t^2 s - t r - s
/// is evaluated and must hold to 1e-10.
pub fn constraints_k1(t: f64) -> Result<TraceTriple> {
    guard_k1_param(t)?;
    let s = t / (t * t - 1.0);
    let r = 1.0 - 1.0 / (t * t);
    let triple = TraceTriple { t, s, r };

    let e1 = ((t * t * s - t * r - s) * t - 1.0).abs();
    let e2 = ((r * s - t) * s + 1.0).abs();
    let e3 = (r * s - (t * t * s - t * r - s)).abs();
    let worst = e1.max(e2).max(e3);
    if worst > SYSTEM_TOL {
        return Err(Error::ConstraintViolation(worst));
    }
    Ok(triple)
}

/// Numerator of tan(beta) on the k = 1 curve: t/2 - r/s, rewritten as
/// -(t/2 - 2/t + 1/t^3) so it stays finite through the pole of s at
/// |t| = 1 where the direct quotient loses every significant digit.
pub fn beta_numerator_k1(t: f64) -> Result<f64> {
    if t.abs() < DEGENERATE_MARGIN {
        return Err(Error::SingularParameter(format!("t = {t} is too close to 0")));
    }
    Ok(-(t / 2.0 - 2.0 / t + 1.0 / t.powi(3)))
}

/// The curve relation t - 1/t = c(s) written through the recurrence family.
pub fn curve_offset(k: i64, s: f64) -> Result<f64> {
    let denom = omega(k + 1, s);
    if denom.abs() < OMEGA_DENOM_TOL {
        return Err(Error::SingularParameter(format!(
            "w_(k+1)({s}) vanishes; curve parametrization breaks down"
        )));
    }
    Ok(-omega(k - 1, s) + omega(k, s) * omega(k, s) / denom)
}

/// r on the constraint curve, given s and the chosen t branch.
pub fn curve_r(k: i64, s: f64, t: f64) -> Result<f64> {
    let wk = omega(k, s);
    let wk1 = omega(k + 1, s);
    if wk1.abs() < OMEGA_DENOM_TOL {
        return Err(Error::SingularParameter(format!(
            "w_(k+1)({s}) vanishes; curve parametrization breaks down"
        )));
    }
    Ok(t * wk / wk1 - wk / (wk1 * wk1))
}

/// Both t branches over a point s of the constraint curve; the branches
/// solve t - 1/t = c(s), so they multiply to -1 and never meet.
pub fn constraint_branches(k: i64, s: f64) -> Result<[TraceTriple; 2]> {
    let c = curve_offset(k, s)?;
    let disc = (c * c + 4.0).sqrt();
    let t_plus = (c + disc) / 2.0;
    let t_minus = (c - disc) / 2.0;
    Ok([
        TraceTriple {
            t: t_plus,
            s,
            r: curve_r(k, s, t_plus)?,
        },
        TraceTriple {
            t: t_minus,
            s,
            r: curve_r(k, s, t_minus)?,
        },
    ])
}

/// The branch with the requested sign of t.
pub fn constraint_branch(k: i64, s: f64, sign: f64) -> Result<TraceTriple> {
    let [plus, minus] = constraint_branches(k, s)?;
    Ok(if sign >= 0.0 { plus } else { minus })
}

/// How far a triple sits from its constraint curve (absolute residual of
/// the two curve equations).
pub fn constraint_residual(k: i64, triple: &TraceTriple) -> Result<f64> {
    let TraceTriple { t, s, r } = *triple;
    if t.abs() < DEGENERATE_MARGIN {
        return Err(Error::SingularParameter(format!("t = {t} is too close to 0")));
    }
    let c = curve_offset(k, s)?;
    let e1 = (t - 1.0 / t - c).abs();
    let e2 = (r - curve_r(k, s, t)?).abs();
    Ok(e1.max(e2))
}

fn require_on_curve(k: i64, triple: &TraceTriple) -> Result<()> {
    let res = constraint_residual(k, triple)?;
    if res > CONSTRAINT_TOL {
        return Err(Error::ConstraintViolation(res));
    }
    Ok(())
}

/// Meridian trace on the k = 1 curve as a function of t alone.
pub fn meridian_trace_curve_k1(t: f64) -> f64 {
    t.powi(3) / (t * t - 1.0).powi(2) - 1.0 / t - t
}

/// Boundary-word trace on the k = 1 curve as a function of t alone.
pub fn sigma_trace_curve_k1(t: f64) -> f64 {
    2.0 / t - t / (t * t - 1.0) - 1.0 / t.powi(3) - t
}

/// Trace of the meridian image at a curve point.
///
/// Computed as t (s w_(k+1) - 2 w_k) + w_k / w_(k+1); for k = 1 the raw
/// word form t s^2 - s r - t and the closed t-form must agree with it.
pub fn meridian_trace(knot: &TwistedTorusKnot, triple: &TraceTriple) -> Result<f64> {
    let k = knot.k();
    require_on_curve(k, triple)?;
    let TraceTriple { t, s, r } = *triple;
    let wk = omega(k, s);
    let wk1 = omega(k + 1, s);
    let general = t * (s * wk1 - 2.0 * wk) + wk / wk1;
    if k == 1 {
        let raw = t * s * s - s * r - t;
        let closed = meridian_trace_curve_k1(t);
        let spread = (general - raw).abs().max((general - closed).abs());
        if spread > FORM_TOL {
            return Err(Error::ConstraintViolation(spread));
        }
    }
    Ok(general)
}

/// Trace of the boundary word sigma at a curve point.
///
/// Uses ((w_(k+1) t - w_k r)(t^2 - 2) - (w_k r - w_(k-1) t)) / t - t and
/// checks the internal identity tr(A^2 B^-k) = 1/t on the curve.
pub fn sigma_trace(knot: &TwistedTorusKnot, triple: &TraceTriple) -> Result<f64> {
    let k = knot.k();
    require_on_curve(k, triple)?;
    let TraceTriple { t, s, r } = *triple;
    let wkm1 = omega(k - 1, s);
    let wk = omega(k, s);
    let wk1 = omega(k + 1, s);
    let value = ((wk1 * t - wk * r) * (t * t - 2.0) - (wk * r - wkm1 * t)) / t - t;

    let half_turn = t * (wk1 * t - wk * r) - (wk * s - 2.0 * wkm1);
    let identity_err = (half_turn - 1.0 / t).abs();
    if identity_err > CONSTRAINT_TOL {
        return Err(Error::ConstraintViolation(identity_err));
    }
    if k == 1 {
        let closed = sigma_trace_curve_k1(t);
        if (value - closed).abs() > 1e-9 {
            return Err(Error::ConstraintViolation((value - closed).abs()));
        }
    }
    Ok(value)
}

/// All roots of the polynomial on the upper unit half-circle, as angles in
/// (0, pi). Found by scanning the real circle values on a 10^4 grid and
/// bisecting each sign change; conjugate roots in (pi, 2pi) are the mirror
/// images theta -> 2pi - theta and are generated from these.
pub fn unit_circle_roots(poly: &LaurentPoly) -> Vec<f64> {
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=ROOT_GRID {
        let mut theta = std::f64::consts::PI * (i as f64) / (ROOT_GRID as f64);
        if i == 0 {
            theta = 1e-9;
        } else if i == ROOT_GRID {
            theta = std::f64::consts::PI - 1e-9;
        }
        let value = poly.eval_unit_circle(theta);
        if let Some((prev_theta, prev_value)) = prev {
            if prev_value * value < 0.0 {
                let mut lo = prev_theta;
                let mut hi = theta;
                let mut lo_value = prev_value;
                while hi - lo > ROOT_WIDTH {
                    let mid = 0.5 * (lo + hi);
                    let mid_value = poly.eval_unit_circle(mid);
                    if mid_value == 0.0 {
                        lo = mid;
                        hi = mid;
                        break;
                    }
                    if lo_value * mid_value < 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        lo_value = mid_value;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
        }
        prev = Some((theta, value));
    }
    roots
}

/// Roots of the knot polynomial on the upper half-circle.
pub fn knot_circle_roots(knot: &TwistedTorusKnot) -> Result<Vec<f64>> {
    Ok(unit_circle_roots(&alexander_polynomial(knot)?))
}

/// The parameter in (t0, 1) where the meridian trace on the k = 1 curve
/// first reaches 2, located by bisection.
pub fn meridian_parabolic_param_k1(t0: f64) -> Result<f64> {
    if !(0.0 < t0 && t0 < 1.0) || meridian_trace_curve_k1(t0) >= 2.0 {
        return Err(Error::SingularParameter(format!(
            "t0 = {t0} does not start below the parabolic level"
        )));
    }
    let mut lo = t0;
    let mut hi = 1.0 - 1e-9;
    if meridian_trace_curve_k1(hi) < 2.0 {
        return Err(Error::EndpointBracket(hi));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if meridian_trace_curve_k1(mid) < 2.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
