//! Surgery-slope certificates read off a locus diagram.
//!
//! A filling slope r is certified orderable by an elliptic point of the
//! locus on the line y = -r x, away from the origin and from parabolic
//! endpoints. Witnesses are found on the traced polylines: a sign change of
//! y + r x across a segment pins a genuine crossing of the underlying
//! continuous arc between the two samples, and a sample sitting on the line
//! is a witness by itself.

use std::fmt;
use std::str::FromStr;

use crate::diagram::LocusDiagram;
use crate::error::{Error, Result};
use crate::knot::TwistedTorusKnot;
use crate::mat2::ElementClass;

/// Candidate intersections closer than this to the origin or to a
/// parabolic endpoint are dropped outright.
const INTERSECTION_EXCLUSION: f64 = 1e-8;
/// A verdict witness must clear the excluded points by this margin.
const WITNESS_CLEARANCE: f64 = 1e-6;
/// How close to an integer the reported range bound may sit.
const ENDPOINT_SNAP: f64 = 1e-6;

/// A reduced rational surgery slope p/q with q > 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slope {
    p: i64,
    q: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Slope {
    pub fn new(p: i64, q: i64) -> Result<Slope> {
        if q == 0 {
            return Err(Error::BadConfig("slope denominator is zero".into()));
        }
        let sign = if q < 0 { -1 } else { 1 };
        let g = gcd(p, q).max(1);
        Ok(Slope {
            p: sign * p / g,
            q: sign * q / g,
        })
    }

    pub fn numerator(&self) -> i64 {
        self.p
    }

    pub fn denominator(&self) -> i64 {
        self.q
    }

    pub fn to_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(text: &str) -> Result<Slope> {
        let bad = || Error::BadConfig(format!("bad slope {text:?}, expected p or p/q"));
        match text.split_once('/') {
            Some((p, q)) => Slope::new(p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
            None => Slope::new(text.trim().parse().map_err(|_| bad())?, 1),
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

/// An accepted intersection of the slope line with a traced arc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Witness {
    pub x: f64,
    pub y: f64,
    /// Index of the carrying arc within the diagram.
    pub arc_index: usize,
}

fn parabolic_endpoints(diagram: &LocusDiagram) -> Vec<(f64, f64)> {
    diagram
        .arcs
        .iter()
        .filter(|arc| arc.terminal == crate::arcs::Terminal::Parabolic)
        .map(|arc| {
            let end = arc.end();
            (end.x, end.y)
        })
        .collect()
}

fn distance_to_excluded(x: f64, y: f64, endpoints: &[(f64, f64)]) -> f64 {
    let mut d = x.hypot(y);
    for &(ex, ey) in endpoints {
        d = d.min((x - ex).hypot(y - ey));
    }
    d
}

/// All intersections of the line y = -r x with the diagram's polylines:
/// transversal segment crossings plus samples lying on the line, excluding
/// anything within [`INTERSECTION_EXCLUSION`] of the origin or of a
/// parabolic endpoint.
pub fn line_locus_intersection(diagram: &LocusDiagram, r: Slope) -> Vec<Witness> {
    let slope = r.to_f64();
    let endpoints = parabolic_endpoints(diagram);
    let mut found = Vec::new();
    let mut keep = |x: f64, y: f64, arc_index: usize| {
        if distance_to_excluded(x, y, &endpoints) > INTERSECTION_EXCLUSION {
            found.push(Witness { x, y, arc_index });
        }
    };
    for (arc_index, arc) in diagram.arcs.iter().enumerate() {
        let f = |i: usize| arc.samples[i].y + slope * arc.samples[i].x;
        for i in 0..arc.samples.len() {
            if f(i) == 0.0 {
                keep(arc.samples[i].x, arc.samples[i].y, arc_index);
            }
        }
        for i in 0..arc.samples.len().saturating_sub(1) {
            let (fa, fb) = (f(i), f(i + 1));
            if fa * fb < 0.0 {
                let tau = fa / (fa - fb);
                let (a, b) = (&arc.samples[i], &arc.samples[i + 1]);
                keep(a.x + tau * (b.x - a.x), a.y + tau * (b.y - a.y), arc_index);
            }
        }
    }
    found
}

/// The first intersection that qualifies as a certificate witness: clear of
/// the origin and of every parabolic endpoint by [`WITNESS_CLEARANCE`], and
/// carried by elliptic samples (a crossing may lean on the snapped terminal
/// sample, since the arc is elliptic everywhere short of that limit).
fn certificate_witness(diagram: &LocusDiagram, r: Slope) -> Option<Witness> {
    let endpoints = parabolic_endpoints(diagram);
    line_locus_intersection(diagram, r)
        .into_iter()
        .find(|w| {
            let arc = &diagram.arcs[w.arc_index];
            let elliptic_support = arc
                .samples
                .iter()
                .any(|s| s.side == ElementClass::Elliptic);
            elliptic_support
                && distance_to_excluded(w.x, w.y, &endpoints) >= WITNESS_CLEARANCE
        })
}

/// Upper bound of the certified slope interval (-inf, r_max): the height of
/// the parabolic endpoint sitting on the x = 0 edge, the largest if several
/// arcs end there.
pub fn orderable_range(diagram: &LocusDiagram) -> Result<f64> {
    let mut best: Option<f64> = None;
    for arc in &diagram.arcs {
        if arc.terminal != crate::arcs::Terminal::Parabolic {
            continue;
        }
        let end = arc.end();
        if end.x.abs() <= ENDPOINT_SNAP {
            best = Some(best.map_or(end.y, |b: f64| b.max(end.y)));
        }
    }
    best.ok_or(Error::NoParabolicEndpoint)
}

/// Pretty form of the certified interval, snapping the bound to an integer
/// when it is one to working precision.
pub fn range_display(r_max: f64) -> String {
    if (r_max - r_max.round()).abs() < ENDPOINT_SNAP {
        format!("(-inf, {})", r_max.round() as i64)
    } else {
        format!("(-inf, {r_max})")
    }
}

/// User-supplied set of exceptional slopes for one knot; shape-validated
/// JSON, values taken on faith.
#[derive(Clone, Debug)]
pub struct ExceptionalSlopes {
    pub k: i64,
    pub m: i64,
    pub slopes: Vec<Slope>,
}

impl ExceptionalSlopes {
    /// Parse `{"k": 1, "m": 1, "exceptional": ["16", "17/2", ...]}`.
    pub fn parse(text: &str) -> Result<ExceptionalSlopes> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::BadConfig(format!("exceptional slopes: {e}")))?;
        let object = value
            .as_object()
            .ok_or_else(|| Error::BadConfig("exceptional slopes: not a JSON object".into()))?;
        let int_field = |name: &str| -> Result<i64> {
            object
                .get(name)
                .and_then(|v| v.as_i64())
                .ok_or_else(|| Error::BadConfig(format!("exceptional slopes: missing integer {name:?}")))
        };
        let list = object
            .get("exceptional")
            .and_then(|v| v.as_array())
            .ok_or_else(|| {
                Error::BadConfig("exceptional slopes: missing \"exceptional\" array".into())
            })?;
        let mut slopes = Vec::with_capacity(list.len());
        for entry in list {
            let text = entry.as_str().ok_or_else(|| {
                Error::BadConfig("exceptional slopes: entries must be strings".into())
            })?;
            slopes.push(text.parse()?);
        }
        Ok(ExceptionalSlopes {
            k: int_field("k")?,
            m: int_field("m")?,
            slopes,
        })
    }

    pub fn matches(&self, knot: &TwistedTorusKnot) -> bool {
        self.k == knot.k() && self.m == knot.m()
    }

    pub fn contains(&self, r: Slope) -> bool {
        self.slopes.contains(&r)
    }
}

/// Outcome of the certificate check for one slope.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    /// An elliptic locus point on the slope line certifies orderability.
    Orderable(Witness),
    /// The slope line misses every traced arc.
    NoWitness,
    /// A witness exists but the slope is in the user's exceptional list,
    /// so the filling is not known to be irreducible.
    CaveatReducibleFilling,
}

/// The certificate verdict for one surgery slope.
#[derive(Clone, Debug)]
pub struct SurgeryVerdict {
    pub slope: Slope,
    pub outcome: Outcome,
    pub assumptions: Vec<String>,
}

impl fmt::Display for SurgeryVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Orderable(w) => write!(
                f,
                "slope {}: orderable, witness ({:.6}, {:.6}) on arc {}",
                self.slope, w.x, w.y, w.arc_index
            )?,
            Outcome::NoWitness => write!(f, "slope {}: no witness", self.slope)?,
            Outcome::CaveatReducibleFilling => write!(
                f,
                "slope {}: witness found, but the slope is listed as exceptional",
                self.slope
            )?,
        }
        for assumption in &self.assumptions {
            write!(f, " [{assumption}]")?;
        }
        Ok(())
    }
}

/// Certify one slope against the diagram. With an exceptional list the
/// verdict is unconditional for slopes outside it; without one, every
/// positive verdict carries the irreducibility assumption.
pub fn verdict(
    r: Slope,
    diagram: &LocusDiagram,
    exceptional: Option<&ExceptionalSlopes>,
) -> SurgeryVerdict {
    let witness = certificate_witness(diagram, r);
    let (outcome, assumptions) = match (witness, exceptional) {
        (None, _) => (Outcome::NoWitness, Vec::new()),
        (Some(_), Some(list)) if list.contains(r) => {
            (Outcome::CaveatReducibleFilling, Vec::new())
        }
        (Some(w), Some(_)) => (Outcome::Orderable(w), Vec::new()),
        (Some(w), None) => (
            Outcome::Orderable(w),
            vec!["filling assumed irreducible".to_string()],
        ),
    };
    SurgeryVerdict {
        slope: r,
        outcome,
        assumptions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::{trace_all_arcs, TraceOptions};
    use crate::diagram::dihedral_expand;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    const X0: f64 = 0.3255140298635388;

    fn k1_diagram() -> LocusDiagram {
        let knot = TwistedTorusKnot::new(1, 1).unwrap();
        let arcs = trace_all_arcs(&knot, &TraceOptions::default()).unwrap();
        dihedral_expand(arcs)
    }

    fn slope(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    #[test]
    fn slopes_parse_reduce_and_print() {
        assert_eq!("3".parse::<Slope>().unwrap(), slope(3, 1));
        assert_eq!("-14/4".parse::<Slope>().unwrap(), slope(-7, 2));
        assert_eq!("6/-4".parse::<Slope>().unwrap(), slope(-3, 2));
        assert_eq!(slope(10, 5), slope(2, 1));
        assert_eq!(slope(2, 1).to_string(), "2");
        assert_eq!(slope(-7, 2).to_string(), "-7/2");
        assert!((slope(-7, 2).to_f64() + 3.5).abs() < 1e-15);
        assert!("1/0".parse::<Slope>().is_err());
        assert!("one".parse::<Slope>().is_err());
    }

    #[test]
    fn the_horizontal_line_touches_each_arc_at_its_seed() {
        let diagram = k1_diagram();
        let witnesses = line_locus_intersection(&diagram, slope(0, 1));
        assert_eq!(witnesses.len(), 8, "one seed touch per expanded arc");
        let main = witnesses
            .iter()
            .find(|w| (w.x - X0).abs() < 1e-9)
            .expect("the main seed lies on the axis");
        assert_eq!(main.y, 0.0);

        let v = verdict(slope(0, 1), &diagram, None);
        assert!(matches!(v.outcome, Outcome::Orderable(_)));
        assert_eq!(v.assumptions, vec!["filling assumed irreducible"]);
    }

    #[test]
    fn slope_five_has_a_witness_and_slope_seven_has_none() {
        let diagram = k1_diagram();
        let five = line_locus_intersection(&diagram, slope(5, 1));
        assert!(!five.is_empty());
        for w in &five {
            assert!(
                (w.y + 5.0 * w.x).abs() < 1e-8,
                "witness off the line: ({}, {})",
                w.x,
                w.y
            );
        }
        let seven = line_locus_intersection(&diagram, slope(7, 1));
        assert!(seven.is_empty(), "got {seven:?}");
        assert!(matches!(
            verdict(slope(7, 1), &diagram, None).outcome,
            Outcome::NoWitness
        ));
    }

    #[test]
    fn the_k1_range_bound_is_six() {
        let diagram = k1_diagram();
        let r_max = orderable_range(&diagram).unwrap();
        assert!((r_max - 6.0).abs() < 1e-6, "r_max = {r_max}");
        assert_eq!(range_display(r_max), "(-inf, 6)");
    }

    #[test]
    fn a_diagram_without_corners_has_no_range() {
        let mut diagram = k1_diagram();
        for arc in &mut diagram.arcs {
            arc.terminal = crate::arcs::Terminal::MaxSteps;
        }
        assert!(matches!(
            orderable_range(&diagram),
            Err(Error::NoParabolicEndpoint)
        ));
    }

    #[test]
    fn random_slopes_split_cleanly_at_the_bound() {
        let diagram = k1_diagram();
        let r_max = orderable_range(&diagram).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut random_slope = |lo: f64, hi: f64| -> Slope {
            loop {
                let q = rng.random_range(1..=12i64);
                let p = (rng.random_range(lo..hi) * q as f64).round() as i64;
                let s = Slope::new(p, q).unwrap();
                if s.to_f64() > lo && s.to_f64() < hi {
                    return s;
                }
            }
        };
        for _ in 0..100 {
            let r = random_slope(-10.0, r_max - 1e-3);
            assert!(
                !line_locus_intersection(&diagram, r).is_empty(),
                "no witness for slope {r}"
            );
            assert!(matches!(
                verdict(r, &diagram, None).outcome,
                Outcome::Orderable(_)
            ));
        }
        for _ in 0..100 {
            let r = random_slope(r_max + 1e-3, r_max + 3.0);
            assert!(
                line_locus_intersection(&diagram, r).is_empty(),
                "unexpected witness for slope {r}"
            );
        }
    }

    #[test]
    fn witnesses_stay_clear_of_corners_and_origin() {
        let diagram = k1_diagram();
        let endpoints = parabolic_endpoints(&diagram);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let q = rng.random_range(1..=9i64);
            let p = (rng.random_range(-9.0..5.9) * q as f64).round() as i64;
            let r = Slope::new(p, q).unwrap();
            if let Outcome::Orderable(w) = verdict(r, &diagram, None).outcome {
                assert!((w.y + r.to_f64() * w.x).abs() < 1e-8);
                assert!(distance_to_excluded(w.x, w.y, &endpoints) >= 1e-6);
            }
        }
    }

    #[test]
    fn exceptional_lists_gate_the_unconditional_verdict() {
        let diagram = k1_diagram();
        let config = ExceptionalSlopes::parse(
            r#"{"k": 1, "m": 1, "exceptional": ["16", "17", "18", "19", "20", "-1/2"]}"#,
        )
        .unwrap();
        assert_eq!(config.k, 1);
        assert!(config.contains(slope(-1, 2)));
        assert!(config.matches(&TwistedTorusKnot::new(1, 1).unwrap()));
        assert!(!config.matches(&TwistedTorusKnot::new(2, 1).unwrap()));

        let clean = verdict(slope(-1, 1), &diagram, Some(&config));
        assert!(matches!(clean.outcome, Outcome::Orderable(_)));
        assert!(clean.assumptions.is_empty());

        let gated = verdict(slope(-1, 2), &diagram, Some(&config));
        assert_eq!(gated.outcome, Outcome::CaveatReducibleFilling);

        let no_witness = verdict(slope(16, 1), &diagram, Some(&config));
        assert!(matches!(no_witness.outcome, Outcome::NoWitness));
    }

    #[test]
    fn malformed_exceptional_configs_are_rejected() {
        for text in [
            "[]",
            "{\"k\": 1}",
            "{\"k\": 1, \"m\": 1, \"exceptional\": \"16\"}",
            "{\"k\": 1, \"m\": 1, \"exceptional\": [16]}",
            "{\"k\": 1, \"m\": 1, \"exceptional\": [\"x\"]}",
            "{\"k\": \"one\", \"m\": 1, \"exceptional\": []}",
            "not json",
        ] {
            assert!(
                matches!(ExceptionalSlopes::parse(text), Err(Error::BadConfig(_))),
                "accepted {text:?}"
            );
        }
    }
}
