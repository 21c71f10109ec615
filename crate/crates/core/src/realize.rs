//! Realizing a trace triple on the constraint curve as an explicit pair of
//! 2x2 matrices, with the first generator rotating and the second living in
//! SU(1,1), SU(2), or their diagonal intersection depending on which side of
//! the reducible wall the character sits.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::knot::{peripheral_system, relator, GroupWord, TwistedTorusKnot};
use crate::mat2::Mat2C;
use crate::traces::{
    constraint_branch, constraint_residual, constraints_k1, reducible_traces, TraceTriple,
    CONSTRAINT_TOL,
};

/// |R^2| at or below this counts as the reducible wall itself.
pub const BOUNDARY_BAND: f64 = 1e-10;
/// Default ceiling for the relator residual of a realized pair.
pub const RELATOR_TOL: f64 = 1e-8;
/// Agreement required between requested and realized traces.
const TRACE_TOL: f64 = 1e-9;
/// Allowed defect from the unitary or disk-model form.
const FORM_TOL: f64 = 1e-8;
/// Offset used when probing which side of a seed enters the disk model.
const PROBE_OFFSET: f64 = 1e-4;

/// Which unitary form the second generator takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Su11,
    Su2,
    Boundary,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Side::Su11 => "su11",
            Side::Su2 => "su2",
            Side::Boundary => "boundary",
        };
        write!(f, "{name}")
    }
}

/// Previous branch angles, used to keep alpha and beta continuous along a
/// deformation path instead of snapping to principal values.
#[derive(Clone, Copy, Debug)]
pub struct BranchHint {
    pub alpha: f64,
    pub beta: f64,
}

/// A realized representation point: the generator images together with the
/// branch data needed to continue past it.
#[derive(Clone, Debug)]
pub struct RepPoint {
    pub a: Mat2C,
    pub b: Mat2C,
    pub traces: TraceTriple,
    pub alpha: f64,
    pub beta: f64,
    pub r_sq: f64,
    pub side: Side,
}

/// The angle with the given cosine nearest to `prev`, searching both signs
/// of the principal value across all full turns.
pub fn continue_angle(cos_value: f64, prev: f64) -> f64 {
    let base = cos_value.clamp(-1.0, 1.0).acos();
    let mut best = base;
    let mut best_dist = f64::INFINITY;
    for raw in [base, -base] {
        let turns = ((prev - raw) / TAU).round();
        let candidate = raw + TAU * turns;
        let dist = (candidate - prev).abs();
        if dist < best_dist {
            best_dist = dist;
            best = candidate;
        }
    }
    best
}

/// The angle with the given tangent nearest to `prev` (half-turn lattice).
fn continue_angle_tan(tan_value: f64, prev: f64) -> f64 {
    let raw = tan_value.atan();
    raw + PI * ((prev - raw) / PI).round()
}

/// Branch angles and wall coordinate at a triple, continued from the hint.
///
/// This is the cheap core of [`realize`]: it computes (alpha, beta, R^2)
/// without building matrices and without domain guards, so a path tracer can
/// watch the sign of R^2 right through trace values where the full matrix
/// realization has no elliptic A. Cosines are clamped; a vanishing sin(alpha)
/// pushes tan(beta) to infinity and beta to a quarter turn, which keeps every
/// output finite and R^2 large positive rather than failing.
pub fn branch_state(triple: &TraceTriple, hint: &BranchHint) -> (f64, f64, f64) {
    let TraceTriple { t, s, r } = *triple;
    let alpha = continue_angle(t / 2.0, hint.alpha);
    let beta = continue_angle_tan((t / 2.0 - r / s) / alpha.sin(), hint.beta);
    let rho = s / (2.0 * beta.cos());
    (alpha, beta, rho * rho - 1.0)
}

/// Build the matrix pair realizing a triple on the constraint curve.
///
/// A = diag(e^(i alpha), e^(-i alpha)) with 2cos(alpha) = t, and
/// B = [[rho e^(i beta), z], [z*, rho e^(-i beta)]] with 2 rho cos(beta) = s,
/// where z is real of square R^2 in the disk model and imaginary in the
/// unitary one. Branch angles are continued from the hint. The realized
/// traces, the form defect, and the group relation are all re-verified.
pub fn realize(
    triple: &TraceTriple,
    knot: &TwistedTorusKnot,
    hint: &BranchHint,
    relator_tol: f64,
) -> Result<RepPoint> {
    let TraceTriple { t, s, r } = *triple;
    if t.abs() >= 2.0 {
        return Err(Error::TraceOutOfRange(t));
    }
    if s.abs() < 1e-12 {
        return Err(Error::SingularParameter(
            "s = 0 leaves the second generator underdetermined".into(),
        ));
    }
    let residual = constraint_residual(knot.k(), triple)?;
    if residual > CONSTRAINT_TOL {
        return Err(Error::ConstraintViolation(residual));
    }

    let alpha = continue_angle(t / 2.0, hint.alpha);
    let sin_alpha = alpha.sin();
    if sin_alpha.abs() < 1e-12 {
        return Err(Error::TraceOutOfRange(t));
    }
    let beta = continue_angle_tan((t / 2.0 - r / s) / sin_alpha, hint.beta);
    let cos_beta = beta.cos();
    if cos_beta.abs() < 1e-12 {
        return Err(Error::SingularParameter(
            "beta reached a quarter turn; rho is unbounded".into(),
        ));
    }
    let rho = s / (2.0 * cos_beta);
    let r_sq = rho * rho - 1.0;

    let a = Mat2C::rotation(alpha);
    let w = Complex64::from_polar(rho.abs(), beta) * rho.signum();
    let (side, z) = if r_sq > BOUNDARY_BAND {
        (Side::Su11, Complex64::new(r_sq.sqrt(), 0.0))
    } else if r_sq < -BOUNDARY_BAND {
        (Side::Su2, Complex64::new(0.0, (-r_sq).sqrt()))
    } else {
        (Side::Boundary, Complex64::new(0.0, 0.0))
    };
    // z is real in the disk model and purely imaginary in the unitary one,
    // so the lower-left entry z covers both z-bar and minus z-bar.
    let b = Mat2C {
        a: w,
        b: z,
        c: z,
        d: w.conj(),
    };

    let trace_err = (a.trace() - Complex64::new(t, 0.0))
        .norm()
        .max((b.trace() - Complex64::new(s, 0.0)).norm())
        .max(((a * b).trace() - Complex64::new(r, 0.0)).norm());
    if trace_err > TRACE_TOL {
        return Err(Error::ConstraintViolation(trace_err));
    }
    let form_defect = match side {
        Side::Su11 => a.disk_model_defect().max(b.disk_model_defect()),
        Side::Su2 => a.unitary_defect().max(b.unitary_defect()),
        Side::Boundary => b.unitary_defect().max(b.disk_model_defect()),
    };
    if form_defect > FORM_TOL {
        return Err(Error::ConstraintViolation(form_defect));
    }
    let relation = verify_relation_pair(&a, &b, knot)?;
    if relation > relator_tol {
        return Err(Error::RelationResidual(relation));
    }

    Ok(RepPoint {
        a,
        b,
        traces: *triple,
        alpha,
        beta,
        r_sq,
        side,
    })
}

fn verify_relation_pair(a: &Mat2C, b: &Mat2C, knot: &TwistedTorusKnot) -> Result<f64> {
    let word = relator(knot);
    let image = word.evaluate(a, b)?;
    Ok(image.sub(&Mat2C::identity()).max_abs())
}

/// Residual of the group relation at a realized point.
pub fn verify_relation(point: &RepPoint, knot: &TwistedTorusKnot) -> Result<f64> {
    verify_relation_pair(&point.a, &point.b, knot)
}

/// The longitude word meridian^(-c) sigma in the generators.
pub fn longitude_word(knot: &TwistedTorusKnot) -> GroupWord {
    let system = peripheral_system(knot);
    let mu_inv = system.meridian.inverse();
    let mut word = GroupWord::identity();
    for _ in 0..system.meridian_power {
        word = word.concat(&mu_inv);
    }
    word.concat(&system.sigma)
}

/// Images of the meridian and longitude at a realized point. The two must
/// commute since they generate a peripheral subgroup.
pub fn peripheral_images(point: &RepPoint, knot: &TwistedTorusKnot) -> Result<(Mat2C, Mat2C)> {
    let system = peripheral_system(knot);
    let meridian = system.meridian.evaluate(&point.a, &point.b)?;
    let longitude = longitude_word(knot).evaluate(&point.a, &point.b)?;
    let commutator =
        meridian * longitude * meridian.inverse_unimodular() * longitude.inverse_unimodular();
    let defect = commutator.sub(&Mat2C::identity()).max_abs();
    if defect > FORM_TOL {
        return Err(Error::CommutatorResidual(defect));
    }
    Ok((meridian, longitude))
}

/// Starting data for tracing one deformation arc out of a reducible
/// character at a circle root of the knot polynomial.
#[derive(Clone, Copy, Debug)]
pub struct DeformationSeed {
    pub theta: f64,
    pub traces: TraceTriple,
    pub alpha0: f64,
    pub beta0: f64,
    /// t for k = 1, s for larger k.
    pub param0: f64,
    /// Which way the curve parameter moves into the disk-model side.
    pub direction: f64,
}

fn probe_triple(knot: &TwistedTorusKnot, seed_t: f64, param: f64) -> Result<TraceTriple> {
    if knot.k() == 1 {
        constraints_k1(param)
    } else {
        constraint_branch(knot.k(), param, seed_t.signum())
    }
}

fn probe_is_disk_side(
    knot: &TwistedTorusKnot,
    seed_t: f64,
    hint: &BranchHint,
    param: f64,
) -> (bool, f64) {
    let triple = match probe_triple(knot, seed_t, param) {
        Ok(tt) => tt,
        Err(_) => return (false, f64::NEG_INFINITY),
    };
    match realize(&triple, knot, hint, RELATOR_TOL) {
        Ok(point) => (matches!(point.side, Side::Su11), point.r_sq),
        Err(_) => (false, f64::NEG_INFINITY),
    }
}

/// Seed the arc rooted at the reducible character of angle `theta`.
pub fn seed_for_root(knot: &TwistedTorusKnot, theta: f64) -> Result<DeformationSeed> {
    if knot.m() != 1 {
        return Err(Error::InvalidKnot(
            "deformation arcs are only traced for m = 1".into(),
        ));
    }
    let traces = reducible_traces(knot, theta);
    let residual = constraint_residual(knot.k(), &traces)?;
    if residual > CONSTRAINT_TOL {
        return Err(Error::ConstraintViolation(residual));
    }
    let k = knot.k() as f64;
    let alpha0 = (3.0 * k + 2.0) * theta / 2.0;
    let beta0 = 3.0 * theta / 2.0;
    let param0 = if knot.k() == 1 { traces.t } else { traces.s };
    let hint = BranchHint {
        alpha: alpha0,
        beta: beta0,
    };
    let (plus_ok, _) = probe_is_disk_side(knot, traces.t, &hint, param0 + PROBE_OFFSET);
    let (minus_ok, _) = probe_is_disk_side(knot, traces.t, &hint, param0 - PROBE_OFFSET);
    let direction = match (plus_ok, minus_ok) {
        (true, false) => 1.0,
        (false, true) => -1.0,
        _ => return Err(Error::NoDiskSide(theta)),
    };
    Ok(DeformationSeed {
        theta,
        traces,
        alpha0,
        beta0,
        param0,
        direction,
    })
}

/// One seed per circle root of the knot polynomial, upper half-circle only.
pub fn deformation_seeds(knot: &TwistedTorusKnot) -> Result<Vec<DeformationSeed>> {
    let roots = crate::traces::knot_circle_roots(knot)?;
    roots
        .into_iter()
        .map(|theta| seed_for_root(knot, theta))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::pair_irreducible;
    use crate::traces::{meridian_trace, sigma_trace};

    const THETA0: f64 = 2.045264969719404;

    fn knot1() -> TwistedTorusKnot {
        TwistedTorusKnot::new(1, 1).unwrap()
    }

    fn hint_for(t: f64, beta: f64) -> BranchHint {
        BranchHint {
            alpha: (t / 2.0).acos(),
            beta,
        }
    }

    #[test]
    fn the_reducible_seed_sits_on_the_wall() {
        let traces = reducible_traces(&knot1(), THETA0);
        let hint = BranchHint {
            alpha: 5.0 * THETA0 / 2.0,
            beta: 3.0 * THETA0 / 2.0,
        };
        let point = realize(&traces, &knot1(), &hint, RELATOR_TOL).unwrap();
        assert_eq!(point.side, Side::Boundary);
        assert!(point.r_sq.abs() <= BOUNDARY_BAND);
        assert!(point.b.b.norm() == 0.0, "wall points are diagonal");
        assert!(!pair_irreducible(&point.a, &point.b));
    }

    #[test]
    fn curve_points_below_the_wall_realize_in_su11() {
        let triple = constraints_k1(0.9).unwrap();
        let point = realize(&triple, &knot1(), &hint_for(0.9, 0.0), RELATOR_TOL).unwrap();
        assert_eq!(point.side, Side::Su11);
        assert!(point.r_sq > 0.0);
        assert!(point.b.is_su11(1e-9));
        assert!(pair_irreducible(&point.a, &point.b));
        let residual = verify_relation(&point, &knot1()).unwrap();
        assert!(residual < 1e-10, "relator residual {residual:.3e}");
    }

    #[test]
    fn curve_points_on_the_compact_side_realize_in_su2() {
        let triple = constraints_k1(0.7).unwrap();
        let point = realize(&triple, &knot1(), &hint_for(0.7, 0.0), RELATOR_TOL).unwrap();
        assert_eq!(point.side, Side::Su2);
        assert!(point.r_sq < 0.0);
        assert!(point.b.is_su2(1e-9));
        let residual = verify_relation(&point, &knot1()).unwrap();
        assert!(residual < 1e-10, "relator residual {residual:.3e}");
    }

    #[test]
    fn off_curve_perturbations_are_rejected() {
        let mut triple = constraints_k1(0.9).unwrap();
        triple.r += 1e-5;
        let got = realize(&triple, &knot1(), &hint_for(0.9, 0.0), RELATOR_TOL);
        assert!(matches!(got, Err(Error::ConstraintViolation(_))));
    }

    #[test]
    fn degenerate_triples_are_rejected() {
        let knot = knot1();
        let hint = BranchHint {
            alpha: 0.0,
            beta: 0.0,
        };
        let wide = TraceTriple {
            t: 2.1,
            s: 1.0,
            r: 1.0,
        };
        assert!(matches!(
            realize(&wide, &knot, &hint, RELATOR_TOL),
            Err(Error::TraceOutOfRange(_))
        ));
        let flat = TraceTriple {
            t: 0.5,
            s: 0.0,
            r: 1.0,
        };
        assert!(matches!(
            realize(&flat, &knot, &hint, RELATOR_TOL),
            Err(Error::SingularParameter(_))
        ));
    }

    #[test]
    fn peripheral_words_commute_and_match_the_trace_formulas() {
        // Parameters inside the arc window, where both peripheral images
        // stay elliptic; outside it the meridian trace grows far past 2 and
        // its high powers lose all precision.
        let knot = knot1();
        for t in [0.785, 0.79, 0.8] {
            let triple = constraints_k1(t).unwrap();
            let point = realize(&triple, &knot, &hint_for(t, 0.0), RELATOR_TOL).unwrap();
            let (meridian, longitude) = peripheral_images(&point, &knot).unwrap();
            let m_word = meridian.trace();
            let m_formula = meridian_trace(&knot, &triple).unwrap();
            assert!(m_word.im.abs() < 1e-9, "meridian trace should be real");
            assert!(
                (m_word.re - m_formula).abs() < 1e-9,
                "t={t}: word {m_word} vs formula {m_formula}"
            );
            assert!(longitude.is_unimodular(1e-8));

            let system = peripheral_system(&knot);
            let sigma_word = system.sigma.evaluate(&point.a, &point.b).unwrap().trace();
            let sigma_formula = sigma_trace(&knot, &triple).unwrap();
            assert!(
                (sigma_word.re - sigma_formula).abs() < 1e-9,
                "t={t}: word {sigma_word} vs formula {sigma_formula}"
            );
        }
    }

    #[test]
    fn branch_continuation_tracks_the_hint_across_turns() {
        let triple = constraints_k1(0.9).unwrap();
        let base = realize(&triple, &knot1(), &hint_for(0.9, 0.0), RELATOR_TOL).unwrap();
        let shifted_hint = BranchHint {
            alpha: base.alpha + TAU,
            beta: base.beta + PI,
        };
        let shifted = realize(&triple, &knot1(), &shifted_hint, RELATOR_TOL).unwrap();
        assert!((shifted.alpha - base.alpha - TAU).abs() < 1e-12);
        assert!((shifted.beta - base.beta - PI).abs() < 1e-12);
        assert!((shifted.traces.t - base.traces.t).abs() < 1e-15);
        // a half-turn in beta flips rho, not the realized traces
        assert!((shifted.b.trace() - base.b.trace()).norm() < 1e-12);
    }

    #[test]
    fn k1_seeds_cover_all_four_roots() {
        let knot = knot1();
        let seeds = deformation_seeds(&knot).unwrap();
        assert_eq!(seeds.len(), 4);
        for seed in &seeds {
            assert!((seed.alpha0 - 5.0 * seed.theta / 2.0).abs() < 1e-12);
            assert!((seed.beta0 - 3.0 * seed.theta / 2.0).abs() < 1e-12);
            assert!((seed.param0 - seed.traces.t).abs() < 1e-15);
            assert!(seed.direction.abs() == 1.0);
            let probe = seed.param0 + seed.direction * 1e-4;
            let triple = constraints_k1(probe).unwrap();
            let hint = BranchHint {
                alpha: seed.alpha0,
                beta: seed.beta0,
            };
            let point = realize(&triple, &knot, &hint, RELATOR_TOL).unwrap();
            assert_eq!(point.side, Side::Su11, "theta = {}", seed.theta);
        }
        let last = seeds.last().unwrap();
        assert!((last.theta - THETA0).abs() < 1e-9);
        assert_eq!(last.direction, 1.0, "the main arc moves t upward");
    }

    #[test]
    fn larger_m_has_no_seed_path() {
        let knot = TwistedTorusKnot::new(1, 2).unwrap();
        assert!(matches!(
            seed_for_root(&knot, 1.0),
            Err(Error::InvalidKnot(_))
        ));
    }

    #[test]
    fn seeds_exist_for_larger_k() {
        for k in 2..=3i64 {
            let knot = TwistedTorusKnot::new(k, 1).unwrap();
            let seeds = deformation_seeds(&knot).unwrap();
            assert_eq!(seeds.len() as i64, 2 * k + 2);
            for seed in &seeds {
                assert!((seed.param0 - seed.traces.s).abs() < 1e-15, "k>=2 marches s");
            }
        }
    }
}
