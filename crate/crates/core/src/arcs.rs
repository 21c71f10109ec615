//! Tracing translation extension arcs: each arc starts at a reducible
//! character on the unit-circle root locus and is continued through the
//! disk-model side of the character variety until a peripheral trace
//! reaches the parabolic value, the arc returns to the reducible wall, or
//! the step budget runs out.
//!
//! Coordinates: phi and psi are continuously unwrapped rotation angles of
//! the meridian and boundary images, x = phi/pi, and y = (-c phi + psi)/pi
//! where c is the meridian power appearing in the longitude.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::knot::TwistedTorusKnot;
use crate::mat2::{classify_trace, ElementClass, PARABOLIC_BAND};
use crate::realize::{
    branch_state, continue_angle, realize, seed_for_root, BranchHint, DeformationSeed,
};
use crate::traces::{
    constraint_branch, constraints_k1, meridian_trace, sigma_trace, TraceTriple,
};

/// Largest allowed |dx| per accepted step before the arc-length cap.
const DX_HARD_CAP: f64 = 0.009;
/// Largest allowed |dy| per accepted step.
const DY_CAP: f64 = 0.18;
/// Largest allowed raw angle change per step, kept under a quarter turn so
/// the nearest-branch unwrap is unambiguous.
const ANGLE_CAP: f64 = PI / 2.0 - 0.1;
/// Step growth and the dx/dy bands under which it applies.
const GROW_FACTOR: f64 = 1.5;
const GROW_DX: f64 = 0.002;
const GROW_DY: f64 = 0.04;
/// Fraction of the dx cap under which the step is considered small.
const GROW_DX_FRACTION: f64 = 0.25;
/// First trial step in the curve parameter.
const INITIAL_STEP: f64 = 1e-6;
/// Iteration cap for the endpoint bracket extension.
const BRACKET_TRIES: usize = 200;

/// How an arc trace ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Terminal {
    /// A peripheral trace reached magnitude 2.
    Parabolic,
    /// The trace fell back to the reducible wall (R^2 <= 0).
    Wall,
    /// The step budget ran out first.
    MaxSteps,
}

impl std::fmt::Display for Terminal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Terminal::Parabolic => "parabolic",
            Terminal::Wall => "wall",
            Terminal::MaxSteps => "maxsteps",
        };
        write!(f, "{name}")
    }
}

/// One accepted point along an arc.
#[derive(Clone, Copy, Debug)]
pub struct ArcSample {
    /// Curve parameter: t for k = 1, s for larger k.
    pub param: f64,
    pub triple: TraceTriple,
    pub phi: f64,
    pub psi: f64,
    pub x: f64,
    pub y: f64,
    /// Conjugacy class of the peripheral images: elliptic everywhere except
    /// the snapped sample at a parabolic terminal.
    pub side: ElementClass,
}

/// A fully traced arc.
#[derive(Clone, Debug)]
pub struct LocusArc {
    pub k: i64,
    pub m: i64,
    pub root_theta: f64,
    pub samples: Vec<ArcSample>,
    pub terminal: Terminal,
}

impl LocusArc {
    pub fn start(&self) -> &ArcSample {
        &self.samples[0]
    }

    pub fn end(&self) -> &ArcSample {
        self.samples.last().expect("arcs always carry a seed sample")
    }

    /// Signed x extent covered by the arc.
    pub fn x_extent(&self) -> f64 {
        (self.start().x - self.end().x).abs()
    }
}

/// Knobs for the arc tracer. The defaults resolve every arc of the default
/// k range within the tolerances the acceptance suite asserts.
#[derive(Clone, Copy, Debug)]
pub struct TraceOptions {
    /// Lower bound on samples per arc, enforced through the step cap.
    pub min_samples: usize,
    /// Distance from |trace| = 2 at which the endpoint search starts.
    pub parabolic_band: f64,
    /// Relator residual allowed at realized points.
    pub relator_tol: f64,
    /// March iteration budget.
    pub max_steps: usize,
    /// Smallest parameter step before the unwrap is declared ambiguous.
    pub step_floor: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            min_samples: 160,
            parabolic_band: 1e-8,
            relator_tol: 1e-8,
            max_steps: 1_000_000,
            step_floor: 1e-14,
        }
    }
}

/// The one-parameter chart of the constraint curve an arc moves along.
struct CurveChart {
    k: i64,
    branch_sign: f64,
}

impl CurveChart {
    fn for_seed(knot: &TwistedTorusKnot, seed: &DeformationSeed) -> CurveChart {
        CurveChart {
            k: knot.k(),
            branch_sign: seed.traces.t.signum(),
        }
    }

    fn triple(&self, p: f64) -> Result<TraceTriple> {
        if self.k == 1 {
            constraints_k1(p)
        } else {
            constraint_branch(self.k, p, self.branch_sign)
        }
    }
}

fn peripheral_traces(
    knot: &TwistedTorusKnot,
    chart: &CurveChart,
    p: f64,
) -> Result<(f64, f64)> {
    let triple = chart.triple(p)?;
    Ok((
        meridian_trace(knot, &triple)?,
        sigma_trace(knot, &triple)?,
    ))
}

/// Class of the peripheral subgroup at a sample, read off the trace that
/// sits closest to the parabolic value.
fn peripheral_class(m_tr: f64, l_tr: f64) -> ElementClass {
    let extreme = if m_tr.abs() >= l_tr.abs() { m_tr } else { l_tr };
    classify_trace(extreme, PARABOLIC_BAND)
}

/// Trace the arc rooted at the reducible character of angle `theta`.
pub fn trace_arc(
    knot: &TwistedTorusKnot,
    theta: f64,
    options: &TraceOptions,
) -> Result<LocusArc> {
    let seed = seed_for_root(knot, theta)?;
    trace_arc_from(knot, &seed, options)
}

/// Trace from explicit seed data; `trace_arc` is the usual entry point.
pub fn trace_arc_from(
    knot: &TwistedTorusKnot,
    seed: &DeformationSeed,
    options: &TraceOptions,
) -> Result<LocusArc> {
    let chart = CurveChart::for_seed(knot, seed);
    let c = knot.sigma_meridian_power() as f64;
    let phi0 = seed.theta / 2.0;
    let psi0 = c * phi0;
    let x0 = phi0 / PI;
    let dx_cap = DX_HARD_CAP.min(x0.min(1.0 - x0) / options.min_samples as f64);
    let grow_dx = GROW_DX.min(GROW_DX_FRACTION * dx_cap);

    let m0 = meridian_trace(knot, &seed.traces)?;
    let l0 = sigma_trace(knot, &seed.traces)?;
    let mut samples = vec![ArcSample {
        param: seed.param0,
        triple: seed.traces,
        phi: phi0,
        psi: psi0,
        x: x0,
        y: (-c * phi0 + psi0) / PI,
        side: peripheral_class(m0, l0),
    }];

    let mut p = seed.param0;
    let mut phi = phi0;
    let mut psi = psi0;
    let mut hint = BranchHint {
        alpha: seed.alpha0,
        beta: seed.beta0,
    };
    let mut h = INITIAL_STEP * seed.direction;
    let terminal;
    let mut steps = 0usize;

    loop {
        steps += 1;
        if steps > options.max_steps {
            terminal = Terminal::MaxSteps;
            break;
        }
        let p_new = p + h;
        let (m_tr, l_tr) = peripheral_traces(knot, &chart, p_new)?;
        if m_tr.abs() >= 2.0 - options.parabolic_band
            || l_tr.abs() >= 2.0 - options.parabolic_band
        {
            let endpoint =
                snap_parabolic_endpoint(knot, &chart, p, p_new, phi, psi, seed.direction, c)?;
            samples.push(endpoint);
            terminal = Terminal::Parabolic;
            break;
        }
        let triple = chart.triple(p_new)?;
        let (alpha, beta, r_sq) = branch_state(&triple, &hint);
        if r_sq <= 0.0 {
            terminal = Terminal::Wall;
            break;
        }
        let phi_new = continue_angle(m_tr / 2.0, phi);
        let psi_new = continue_angle(l_tr / 2.0, psi);
        let dx = (phi_new - phi).abs() / PI;
        let dy = ((psi_new - psi) - c * (phi_new - phi)).abs() / PI;
        if dx > dx_cap
            || dy > DY_CAP
            || (phi_new - phi).abs() > ANGLE_CAP
            || (psi_new - psi).abs() > ANGLE_CAP
        {
            h *= 0.5;
            if h.abs() < options.step_floor {
                return Err(Error::UnwrapAmbiguity(p));
            }
            continue;
        }
        p = p_new;
        phi = phi_new;
        psi = psi_new;
        hint = BranchHint { alpha, beta };
        samples.push(ArcSample {
            param: p,
            triple,
            phi,
            psi,
            x: phi / PI,
            y: (-c * phi + psi) / PI,
            side: peripheral_class(m_tr, l_tr),
        });
        // One full matrix realization just off the seed pins down the branch
        // and the relator residual; the march itself only needs the cheap
        // branch state, whose wall coordinate stays meaningful even where
        // the first generator leaves the elliptic range.
        if samples.len() == 2 {
            realize(&triple, knot, &hint, options.relator_tol)?;
        }
        if dx < grow_dx && dy < GROW_DY {
            h *= GROW_FACTOR;
        }
    }

    Ok(LocusArc {
        k: knot.k(),
        m: knot.m(),
        root_theta: seed.theta,
        samples,
        terminal,
    })
}

/// Locate the parabolic limit: extend the bracket until a trace magnitude
/// actually reaches 2, bisect it down to one ulp, then extrapolate the
/// endpoint angles from two interior evaluations. The square-root approach
/// of each angle to its limit makes the 4:1 extrapolation
/// 2 f(lo - d/4) - f(lo - d) first-order accurate in d.
#[allow(clippy::too_many_arguments)]
fn snap_parabolic_endpoint(
    knot: &TwistedTorusKnot,
    chart: &CurveChart,
    inside: f64,
    trigger: f64,
    phi: f64,
    psi: f64,
    direction: f64,
    c: f64,
) -> Result<ArcSample> {
    let reached = |p: f64| -> Result<bool> {
        let (m_tr, l_tr) = peripheral_traces(knot, chart, p)?;
        Ok(m_tr.abs() >= 2.0 || l_tr.abs() >= 2.0)
    };

    let mut lo = inside;
    let mut hi = trigger;
    let mut extension = (trigger - inside).abs() * direction;
    let mut tries = 0;
    while !reached(hi).map_err(|_| Error::EndpointBracket(hi))? {
        tries += 1;
        if tries > BRACKET_TRIES {
            return Err(Error::EndpointBracket(hi));
        }
        lo = hi;
        hi += extension;
        extension *= 2.0;
    }

    loop {
        let mid = 0.5 * (lo + hi);
        if !(lo.min(hi) < mid && mid < lo.max(hi)) {
            break;
        }
        if reached(mid).map_err(|_| Error::EndpointBracket(mid))? {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let delta = (lo.abs() * 1e-7).max(1e-9) * direction;
    let p1 = lo - delta;
    let p2 = lo - delta / 4.0;
    let (m1, l1) = peripheral_traces(knot, chart, p1)?;
    let (m2, l2) = peripheral_traces(knot, chart, p2)?;
    let phi1 = continue_angle(m1 / 2.0, phi);
    let psi1 = continue_angle(l1 / 2.0, psi);
    let phi2 = continue_angle(m2 / 2.0, phi);
    let psi2 = continue_angle(l2 / 2.0, psi);
    let phi_end = 2.0 * phi2 - phi1;
    let psi_end = 2.0 * psi2 - psi1;

    let (m_lo, l_lo) = peripheral_traces(knot, chart, lo)?;
    Ok(ArcSample {
        param: lo,
        triple: chart.triple(lo)?,
        phi: phi_end,
        psi: psi_end,
        x: phi_end / PI,
        y: (-c * phi_end + psi_end) / PI,
        side: peripheral_class(m_lo, l_lo),
    })
}

/// Trace every arc of the knot, one per upper half-circle root, in root
/// order.
pub fn trace_all_arcs(knot: &TwistedTorusKnot, options: &TraceOptions) -> Result<Vec<LocusArc>> {
    let roots = crate::traces::knot_circle_roots(knot)?;
    roots
        .into_iter()
        .map(|theta| trace_arc(knot, theta, options))
        .collect()
}

/// Centered-difference slope dy/dx at each interior sample.
pub fn arc_slope_profile(arc: &LocusArc) -> Result<Vec<f64>> {
    let n = arc.samples.len();
    if n < 3 {
        return Err(Error::TooFewSamples(n, 3));
    }
    let mut slopes = Vec::with_capacity(n - 2);
    for i in 1..n - 1 {
        let dx = arc.samples[i + 1].x - arc.samples[i - 1].x;
        if dx.abs() < 1e-15 {
            return Err(Error::DegenerateSlope);
        }
        slopes.push((arc.samples[i + 1].y - arc.samples[i - 1].y) / dx);
    }
    Ok(slopes)
}

/// Worst disagreement of the angle unwrap between taking each recorded
/// parameter step directly and splitting it at the midpoint. A clean
/// branch assignment makes the two routes identical to rounding error.
pub fn half_step_consistency(knot: &TwistedTorusKnot, arc: &LocusArc) -> Result<f64> {
    let seed = seed_for_root(knot, arc.root_theta)?;
    let chart = CurveChart::for_seed(knot, &seed);
    let mut worst: f64 = 0.0;
    for pair in arc.samples.windows(2) {
        let (from, to) = (&pair[0], &pair[1]);
        let (m_to, l_to) = peripheral_traces(knot, &chart, to.param)?;
        let phi_direct = continue_angle(m_to / 2.0, from.phi);
        let psi_direct = continue_angle(l_to / 2.0, from.psi);

        let mid = 0.5 * (from.param + to.param);
        let (m_mid, l_mid) = peripheral_traces(knot, &chart, mid)?;
        let phi_mid = continue_angle(m_mid / 2.0, from.phi);
        let psi_mid = continue_angle(l_mid / 2.0, from.psi);
        let phi_split = continue_angle(m_to / 2.0, phi_mid);
        let psi_split = continue_angle(l_to / 2.0, psi_mid);

        worst = worst
            .max((phi_direct - phi_split).abs())
            .max((psi_direct - psi_split).abs());
    }
    Ok(worst)
}
