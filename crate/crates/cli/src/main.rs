//! Command line front end: knot polynomial, circle roots, deformation
//! seeds, locus tracing with CSV/SVG artifacts, slope certificates, the
//! cross-arc observation report, and a translation-number self check.
//!
//! Exit codes: 0 on success, 1 for usage problems (bad flags, bad
//! configuration, out-of-range knot parameters), 2 for computation
//! failures.

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use twistlocus_core::knot::peripheral_system;
use twistlocus_core::orderability::{
    line_locus_intersection, orderable_range, range_display, verdict, ExceptionalSlopes, Slope,
};
use twistlocus_core::realize::{realize, BranchHint, RELATOR_TOL};
use twistlocus_core::report::{run_pipeline, trace_diagram, PipelineOptions};
use twistlocus_core::{
    alexander_polynomial, deformation_seeds, emit_csv, emit_svg, knot_circle_roots,
    translation_number_oracle, Error, Result, TraceOptions, TwistedTorusKnot,
};

#[derive(Parser)]
#[command(
    name = "twistlocus",
    version,
    about = "Translation extension loci and orderable surgery slopes for a twisted torus knot family"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the knot polynomial
    Alexander(KnotArgs),
    /// Print the unit-circle root arguments of the knot polynomial
    Roots(KnotArgs),
    /// Print the deformation seed at each circle root
    Seeds(KnotArgs),
    /// Trace the locus diagram, write artifacts, print the run summary
    Locus(LocusArgs),
    /// Certify surgery slopes against the traced diagram
    Orderable(OrderableArgs),
    /// Print the cross-arc observation report
    Report(ReportArgs),
    /// Compare analytic meridian translations with the iterated circle action
    OracleCheck(OracleArgs),
}

#[derive(Args)]
struct KnotArgs {
    /// Twist-region parameter of the (3, 3k+2) braid
    #[arg(long)]
    k: i64,
    /// Number of full twists on two strands
    #[arg(long, default_value_t = 1)]
    m: i64,
}

impl KnotArgs {
    fn knot(&self) -> Result<TwistedTorusKnot> {
        TwistedTorusKnot::new(self.k, self.m)
    }
}

#[derive(Args)]
struct TraceArgs {
    /// Lower bound on samples per traced arc
    #[arg(long, default_value_t = 160)]
    samples: usize,
    /// Distance from |trace| = 2 that triggers the endpoint snap
    #[arg(long, default_value_t = 1e-8)]
    parabolic_band: f64,
    /// Relator residual allowed at realized points
    #[arg(long, default_value_t = 1e-8)]
    relator_tol: f64,
    /// March iteration budget per arc
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: usize,
    /// Lift the default k <= 8 guardrail
    #[arg(long)]
    allow_large: bool,
}

impl TraceArgs {
    fn pipeline_options(&self, seed_root: Option<usize>) -> PipelineOptions {
        PipelineOptions {
            trace: TraceOptions {
                min_samples: self.samples,
                parabolic_band: self.parabolic_band,
                relator_tol: self.relator_tol,
                max_steps: self.max_steps,
                ..TraceOptions::default()
            },
            threads: None,
            allow_large: self.allow_large,
            seed_root,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum EmitKind {
    Csv,
    Svg,
    Both,
}

#[derive(Args)]
struct LocusArgs {
    #[command(flatten)]
    knot: KnotArgs,
    #[command(flatten)]
    trace: TraceArgs,
    /// Directory for the CSV/SVG artifacts
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Which artifacts to write
    #[arg(long, value_enum, default_value_t = EmitKind::Csv)]
    emit: EmitKind,
    /// Trace only the seed with this index (0-based, in root order)
    #[arg(long)]
    seed_root: Option<usize>,
}

#[derive(Args)]
struct OrderableArgs {
    #[command(flatten)]
    knot: KnotArgs,
    #[command(flatten)]
    trace: TraceArgs,
    /// Slope p/q (or integer p) to certify; repeatable
    #[arg(long = "slope", short = 'r', allow_hyphen_values = true)]
    slopes: Vec<String>,
    /// JSON file listing the knot's exceptional slopes
    #[arg(long)]
    exceptional: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    knot: KnotArgs,
    #[command(flatten)]
    trace: TraceArgs,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    knot: KnotArgs,
    #[command(flatten)]
    trace: TraceArgs,
    /// How many arc samples to check
    #[arg(long, default_value_t = 20)]
    check_samples: usize,
    /// Orbit length for the iterated-action estimate
    #[arg(long, default_value_t = 4000)]
    n_iter: usize,
    /// Largest allowed |analytic - estimate|
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli.command) {
        eprintln!("error: {err}");
        let mut source = std::error::Error::source(&err);
        while let Some(inner) = source {
            eprintln!("  caused by: {inner}");
            source = inner.source();
        }
        std::process::exit(if err.is_usage() { 1 } else { 2 });
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Alexander(args) => cmd_alexander(args),
        Command::Roots(args) => cmd_roots(args),
        Command::Seeds(args) => cmd_seeds(args),
        Command::Locus(args) => cmd_locus(args),
        Command::Orderable(args) => cmd_orderable(args),
        Command::Report(args) => cmd_report(args),
        Command::OracleCheck(args) => cmd_oracle_check(args),
    }
}

fn cmd_alexander(args: KnotArgs) -> Result<()> {
    let knot = args.knot()?;
    println!("{}", alexander_polynomial(&knot)?);
    Ok(())
}

fn cmd_roots(args: KnotArgs) -> Result<()> {
    let knot = args.knot()?;
    for theta in knot_circle_roots(&knot)? {
        println!("{theta:.16e}");
    }
    Ok(())
}

fn cmd_seeds(args: KnotArgs) -> Result<()> {
    let knot = args.knot()?;
    for (i, seed) in deformation_seeds(&knot)?.iter().enumerate() {
        println!(
            "seed {i}: theta={:.16e} t={:.16e} s={:.16e} r={:.16e} param={:.16e} direction={:+}",
            seed.theta, seed.traces.t, seed.traces.s, seed.traces.r, seed.param0, seed.direction,
        );
    }
    Ok(())
}

fn cmd_locus(args: LocusArgs) -> Result<()> {
    let knot = args.knot.knot()?;
    let options = args.trace.pipeline_options(args.seed_root);
    let output = run_pipeline(&knot, &options)?;

    std::fs::create_dir_all(&args.out)?;
    let base = format!("locus_k{}_m{}", knot.k(), knot.m());
    if matches!(args.emit, EmitKind::Csv | EmitKind::Both) {
        let path = args.out.join(format!("{base}.csv"));
        std::fs::write(&path, emit_csv(&output.diagram))?;
        eprintln!("wrote {}", path.display());
    }
    if matches!(args.emit, EmitKind::Svg | EmitKind::Both) {
        let path = args.out.join(format!("{base}.svg"));
        std::fs::write(&path, emit_svg(&output.diagram))?;
        eprintln!("wrote {}", path.display());
    }
    print!("{}", output.summary);
    Ok(())
}

fn load_exceptional(path: &PathBuf, knot: &TwistedTorusKnot) -> Result<ExceptionalSlopes> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::BadConfig(format!("cannot read {}: {e}", path.display())))?;
    let config = ExceptionalSlopes::parse(&text)?;
    if !config.matches(knot) {
        return Err(Error::BadConfig(format!(
            "exceptional slope file is for k={} m={}, not k={} m={}",
            config.k,
            config.m,
            knot.k(),
            knot.m()
        )));
    }
    Ok(config)
}

fn cmd_orderable(args: OrderableArgs) -> Result<()> {
    let knot = args.knot.knot()?;
    let slopes: Vec<Slope> = args
        .slopes
        .iter()
        .map(|text| text.parse())
        .collect::<Result<_>>()?;
    let exceptional = args
        .exceptional
        .as_ref()
        .map(|path| load_exceptional(path, &knot))
        .transpose()?;

    let options = args.trace.pipeline_options(None);
    let diagram = trace_diagram(&knot, &options)?;
    let r_max = orderable_range(&diagram)?;
    println!("orderable slopes: {}", range_display(r_max));
    for slope in slopes {
        let result = verdict(slope, &diagram, exceptional.as_ref());
        println!("{result}");
        let crossings = line_locus_intersection(&diagram, slope).len();
        println!("slope {slope} intersections: {crossings}");
    }
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<()> {
    let knot = args.knot.knot()?;
    let options = args.trace.pipeline_options(None);
    let output = run_pipeline(&knot, &options)?;
    let report = output.report.expect("full runs always carry a report");

    println!("k: {}", report.k);
    println!(
        "reference slope magnitude: {}",
        report.reference_slope_magnitude
    );
    for line in &report.arc_lines {
        println!(
            "arc root {:.6}: mean slope {:.4}, x extent {:.6}, endpoint ({:.6}, {:.6})",
            line.root_theta, line.mean_slope, line.x_extent, line.endpoint.0, line.endpoint.1
        );
    }
    println!(
        "longest arc root: {:.6}",
        report.longest_arc_root_theta
    );
    println!(
        "longest arc slope magnitude: {:.4}",
        report.longest_arc_slope_magnitude
    );
    println!("mean slope magnitude: {:.4}", report.mean_slope_magnitude);
    println!("slope gate within one: {}", report.slope_gate_ok());
    println!("separation ok: {}", report.separation_ok);
    println!(
        "max height point: ({:.6}, {:.6})",
        report.max_height_point.0, report.max_height_point.1
    );
    println!("missing arcs: {}", report.missing_arcs);
    Ok(())
}

fn cmd_oracle_check(args: OracleArgs) -> Result<()> {
    let knot = args.knot.knot()?;
    let options = args.trace.pipeline_options(None);
    let diagram = trace_diagram(&knot, &options)?;
    let meridian = peripheral_system(&knot).meridian;

    // walk the original (upper) arcs, skipping seed rows and samples whose
    // first-generator trace has left the elliptic range of the realization
    let uppers = diagram.arcs.len() / 2;
    let candidates: Vec<(f64, twistlocus_core::TraceTriple)> = diagram.arcs[..uppers]
        .iter()
        .flat_map(|arc| arc.samples[1..].iter())
        .filter(|s| s.triple.t.abs() < 2.0 - 1e-6)
        .map(|s| (s.x, s.triple))
        .collect();
    if candidates.is_empty() {
        return Err(Error::TooFewSamples(0, args.check_samples));
    }
    let stride = (candidates.len() / args.check_samples.max(1)).max(1);

    let mut checked = 0usize;
    let mut worst: f64 = 0.0;
    for (x, triple) in candidates.iter().step_by(stride) {
        let hint = BranchHint {
            alpha: (triple.t / 2.0).acos(),
            beta: 0.0,
        };
        let point = realize(triple, &knot, &hint, RELATOR_TOL)?;
        let image = meridian.evaluate(&point.a, &point.b)?;
        let estimate = translation_number_oracle(&image, *x, args.n_iter)?;
        // the realization lands on one of the two mirror copies of each
        // arc, so the boundary action may translate by -x instead of +x;
        // compare against both residues mod 1
        let delta = (estimate - x)
            .abs()
            .min((estimate + x).abs())
            .min((estimate + x - 1.0).abs());
        println!("x={x:.12} estimate={estimate:.12} delta={delta:.3e}");
        worst = worst.max(delta);
        checked += 1;
    }
    println!("checked: {checked}");
    println!("max deviation: {worst:.3e}");
    if worst > args.tol {
        return Err(Error::OracleDiverged(worst));
    }
    Ok(())
}
