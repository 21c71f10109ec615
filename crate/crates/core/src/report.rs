//! Cross-arc observations and the end-to-end pipeline that turns knot
//! parameters into a diagram, a slope certificate, and emitted artifacts.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::alexander::{alexander_polynomial, LaurentPoly};
use crate::arcs::{arc_slope_profile, trace_arc_from, LocusArc, TraceOptions};
use crate::diagram::{dihedral_expand, LocusDiagram};
use crate::error::{Error, Result};
use crate::knot::TwistedTorusKnot;
use crate::orderability::{orderable_range, range_display};
use crate::realize::deformation_seeds;
use crate::traces::knot_circle_roots;

/// Default guardrail on k: arc counts and polynomial degrees grow with k,
/// and runtimes past this point stop being interactive.
pub const MAX_DEFAULT_K: i64 = 8;

/// One arc's contribution to the slope observations.
#[derive(Clone, Copy, Debug)]
pub struct ArcSlopeLine {
    pub root_theta: f64,
    /// Mean of the centered-difference slopes along the arc.
    pub mean_slope: f64,
    pub x_extent: f64,
    pub endpoint: (f64, f64),
}

/// Empirical observations measured off a traced diagram.
#[derive(Clone, Debug)]
pub struct ObservationReport {
    pub k: i64,
    /// The predicted slope magnitude 3(3k+2) + 4.
    pub reference_slope_magnitude: f64,
    /// Per-arc slopes for the arcs rooted on the upper half circle.
    pub arc_lines: Vec<ArcSlopeLine>,
    /// Mean |slope| of the arc with the largest x extent.
    pub longest_arc_slope_magnitude: f64,
    /// Mean over arcs of |mean slope|.
    pub mean_slope_magnitude: f64,
    /// Every off-axis sample of an upper-root arc has y > 0.
    pub separation_ok: bool,
    /// Root argument of the arc with the largest x extent.
    pub longest_arc_root_theta: f64,
    /// The parabolic endpoint of greatest height.
    pub max_height_point: (f64, f64),
    /// Circle roots that produced no traced arc.
    pub missing_arcs: usize,
}

impl ObservationReport {
    /// The adopted slope gate: the longest arc and the across-arc mean both
    /// sit within one unit of the reference magnitude. Short arcs are
    /// allowed to deviate more; their individual values stay visible in
    /// `arc_lines`.
    pub fn slope_gate_ok(&self) -> bool {
        (self.longest_arc_slope_magnitude - self.reference_slope_magnitude).abs() <= 1.0
            && (self.mean_slope_magnitude - self.reference_slope_magnitude).abs() <= 1.0
    }
}

/// Measure the observations on a diagram traced for `knot`.
pub fn observations_report(
    knot: &TwistedTorusKnot,
    diagram: &LocusDiagram,
) -> Result<ObservationReport> {
    let uppers: Vec<&LocusArc> = diagram
        .arcs
        .iter()
        .filter(|arc| arc.root_theta < std::f64::consts::PI)
        .collect();
    if uppers.is_empty() {
        return Err(Error::TooFewSamples(0, 1));
    }

    let mut arc_lines = Vec::with_capacity(uppers.len());
    let mut separation_ok = true;
    for arc in &uppers {
        let slopes = arc_slope_profile(arc)?;
        let mean_slope = slopes.iter().sum::<f64>() / slopes.len() as f64;
        let end = arc.end();
        arc_lines.push(ArcSlopeLine {
            root_theta: arc.root_theta,
            mean_slope,
            x_extent: arc.x_extent(),
            endpoint: (end.x, end.y),
        });
        if arc.samples.iter().skip(1).any(|s| s.y <= 0.0) {
            separation_ok = false;
        }
    }

    let longest = arc_lines
        .iter()
        .max_by(|a, b| a.x_extent.total_cmp(&b.x_extent))
        .expect("nonempty by the check above");
    let mean_slope_magnitude =
        arc_lines.iter().map(|l| l.mean_slope.abs()).sum::<f64>() / arc_lines.len() as f64;
    let max_height_point = arc_lines
        .iter()
        .map(|l| l.endpoint)
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty by the check above");

    let roots = knot_circle_roots(knot)?;
    Ok(ObservationReport {
        k: knot.k(),
        reference_slope_magnitude: (3 * (3 * knot.k() + 2) + 4) as f64,
        longest_arc_slope_magnitude: longest.mean_slope.abs(),
        longest_arc_root_theta: longest.root_theta,
        mean_slope_magnitude,
        separation_ok,
        max_height_point,
        missing_arcs: roots.len().saturating_sub(uppers.len()),
        arc_lines,
    })
}

/// Knobs for the end-to-end pipeline.
#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    pub trace: TraceOptions,
    /// Worker threads for arc tracing; None falls back to the
    /// LOCUS_THREADS environment variable, then to the machine.
    pub threads: Option<usize>,
    /// Lift the k guardrail.
    pub allow_large: bool,
    /// Trace only the seed at this index instead of all of them; the
    /// orderability summary is skipped since the diagram is partial.
    pub seed_root: Option<usize>,
}

/// Everything the pipeline produces.
#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub polynomial: LaurentPoly,
    pub roots: Vec<f64>,
    pub diagram: LocusDiagram,
    pub report: Option<ObservationReport>,
    /// Certified slope bound; None when only part of the diagram was traced.
    pub r_max: Option<f64>,
    /// One `key: value` line per fact.
    pub summary: String,
}

fn worker_count(requested: Option<usize>) -> Result<usize> {
    if let Some(n) = requested {
        if n == 0 {
            return Err(Error::BadConfig("thread count must be positive".into()));
        }
        return Ok(n);
    }
    if let Ok(text) = std::env::var("LOCUS_THREADS") {
        let n: usize = text
            .parse()
            .map_err(|_| Error::BadConfig(format!("LOCUS_THREADS must be a number, got {text:?}")))?;
        if n == 0 {
            return Err(Error::BadConfig("LOCUS_THREADS must be positive".into()));
        }
        return Ok(n);
    }
    Ok(std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Trace the given seeds concurrently. Results are ordered by seed index no
/// matter how the workers are scheduled, and the first failing seed (again
/// by index) decides the error.
pub fn trace_arcs_parallel(
    knot: &TwistedTorusKnot,
    seeds: &[crate::realize::DeformationSeed],
    options: &TraceOptions,
    threads: usize,
) -> Result<Vec<LocusArc>> {
    let workers = threads.min(seeds.len()).max(1);
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<LocusArc>>>> =
        Mutex::new(seeds.iter().map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= seeds.len() {
                    break;
                }
                let traced = trace_arc_from(knot, &seeds[i], options);
                slots.lock().expect("tracer panicked holding the lock")[i] = Some(traced);
            });
        }
    });
    slots
        .into_inner()
        .expect("tracer panicked holding the lock")
        .into_iter()
        .map(|slot| slot.expect("work queue visits every index"))
        .collect()
}

/// Seeds, traces, and expands the diagram for one knot.
pub fn trace_diagram(knot: &TwistedTorusKnot, options: &PipelineOptions) -> Result<LocusDiagram> {
    if knot.k() > MAX_DEFAULT_K && !options.allow_large {
        return Err(Error::InvalidKnot(format!(
            "k = {} is past the default cap of {MAX_DEFAULT_K}; raise the guardrail explicitly",
            knot.k()
        )));
    }
    let threads = worker_count(options.threads)?;
    let mut seeds = deformation_seeds(knot).map_err(|e| e.at_stage("seeds"))?;
    if let Some(index) = options.seed_root {
        if index >= seeds.len() {
            return Err(Error::BadConfig(format!(
                "seed index {index} out of range, knot has {} seeds",
                seeds.len()
            )));
        }
        seeds = vec![seeds[index]];
    }
    let arcs =
        trace_arcs_parallel(knot, &seeds, &options.trace, threads).map_err(|e| e.at_stage("trace"))?;
    Ok(dihedral_expand(arcs))
}

/// Run every stage for one knot and collect the artifacts.
pub fn run_pipeline(knot: &TwistedTorusKnot, options: &PipelineOptions) -> Result<PipelineOutput> {
    if knot.m() != 1 {
        return Err(Error::InvalidKnot(format!(
            "the locus pipeline runs at m = 1, got m = {}",
            knot.m()
        )));
    }

    let polynomial = alexander_polynomial(knot).map_err(|e| e.at_stage("alexander"))?;
    let roots = knot_circle_roots(knot).map_err(|e| e.at_stage("roots"))?;
    let diagram = trace_diagram(knot, options)?;

    let (report, r_max) = if options.seed_root.is_none() {
        let report = observations_report(knot, &diagram).map_err(|e| e.at_stage("report"))?;
        let r_max = orderable_range(&diagram).map_err(|e| e.at_stage("range"))?;
        (Some(report), Some(r_max))
    } else {
        (None, None)
    };

    let mut summary = String::new();
    let _ = writeln!(summary, "knot: k={} m={}", knot.k(), knot.m());
    let _ = writeln!(summary, "polynomial: {polynomial}");
    let _ = writeln!(summary, "circle roots: {}", roots.len());
    let arcs_traced = diagram.arcs.len() / 2;
    let _ = writeln!(summary, "arcs traced: {arcs_traced}");
    let _ = writeln!(summary, "diagram arcs: {}", diagram.arcs.len());
    if let Some(report) = &report {
        let _ = writeln!(
            summary,
            "max height point: ({:.6}, {:.6})",
            report.max_height_point.0, report.max_height_point.1
        );
        let _ = writeln!(
            summary,
            "longest arc root: {:.6}",
            report.longest_arc_root_theta
        );
        let _ = writeln!(
            summary,
            "mean slope magnitude: {:.4}",
            report.mean_slope_magnitude
        );
    }
    if let Some(r_max) = r_max {
        let _ = writeln!(summary, "orderable slopes: {}", range_display(r_max));
    }

    Ok(PipelineOutput {
        polynomial,
        roots,
        diagram,
        report,
        r_max,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::emit_csv;

    fn knot(k: i64) -> TwistedTorusKnot {
        TwistedTorusKnot::new(k, 1).unwrap()
    }

    fn options_with_threads(threads: usize) -> PipelineOptions {
        PipelineOptions {
            threads: Some(threads),
            ..PipelineOptions::default()
        }
    }

    #[test]
    fn the_k1_pipeline_certifies_the_published_interval() {
        let output = run_pipeline(&knot(1), &options_with_threads(2)).unwrap();
        assert_eq!(output.roots.len(), 4);
        assert_eq!(output.diagram.arcs.len(), 8);
        assert!((output.r_max.unwrap() - 6.0).abs() < 1e-6);
        assert!(output.summary.contains("orderable slopes: (-inf, 6)"));
        assert!(output.summary.contains("circle roots: 4"));
        for line in output.summary.lines() {
            assert!(line.contains(": "), "summary line {line:?} is not key: value");
        }
    }

    #[test]
    fn thread_counts_do_not_change_the_csv_bytes() {
        let single = run_pipeline(&knot(1), &options_with_threads(1)).unwrap();
        let pooled = run_pipeline(&knot(1), &options_with_threads(4)).unwrap();
        assert_eq!(emit_csv(&single.diagram), emit_csv(&pooled.diagram));
        assert_eq!(single.summary, pooled.summary);
    }

    #[test]
    fn k2_observations_reproduce_the_reported_pattern() {
        let output = run_pipeline(&knot(2), &options_with_threads(4)).unwrap();
        let report = output.report.unwrap();
        assert_eq!(report.k, 2);
        assert_eq!(report.reference_slope_magnitude, 28.0);
        assert_eq!(report.missing_arcs, 0);
        assert!(report.separation_ok, "upper arcs must stay above the axis");
        assert!(report.slope_gate_ok(), "longest {} mean {}",
            report.longest_arc_slope_magnitude, report.mean_slope_magnitude);
        let (hx, hy) = report.max_height_point;
        assert!(hx.abs() < 1e-6, "max height at x = {hx}");
        assert!((hy - 9.0).abs() < 1e-6, "max height {hy}");
        let two_thirds = 2.0 * std::f64::consts::PI / 3.0;
        assert!(
            (report.longest_arc_root_theta - two_thirds).abs() < 0.2,
            "longest arc root {} is near 2pi/3",
            report.longest_arc_root_theta
        );
        assert!((output.r_max.unwrap() - 9.0).abs() < 1e-6);
    }

    #[test]
    fn single_seed_runs_produce_a_partial_diagram() {
        let options = PipelineOptions {
            seed_root: Some(3),
            ..options_with_threads(2)
        };
        let output = run_pipeline(&knot(1), &options).unwrap();
        assert_eq!(output.diagram.arcs.len(), 2);
        assert!(output.r_max.is_none());
        assert!(!output.summary.contains("orderable slopes"));

        let out_of_range = PipelineOptions {
            seed_root: Some(9),
            ..options_with_threads(2)
        };
        assert!(matches!(
            run_pipeline(&knot(1), &out_of_range),
            Err(Error::BadConfig(_))
        ));
    }

    #[test]
    fn guardrails_reject_large_k_and_twisted_m() {
        let large = run_pipeline(&knot(9), &options_with_threads(1));
        assert!(matches!(large, Err(Error::InvalidKnot(_))));
        assert!(large.unwrap_err().is_usage());

        let twisted = TwistedTorusKnot::new(1, 2).unwrap();
        assert!(matches!(
            run_pipeline(&twisted, &options_with_threads(1)),
            Err(Error::InvalidKnot(_))
        ));
    }

    #[test]
    fn zero_thread_requests_are_rejected() {
        assert!(matches!(
            run_pipeline(&knot(1), &options_with_threads(0)),
            Err(Error::BadConfig(_))
        ));
    }
}
