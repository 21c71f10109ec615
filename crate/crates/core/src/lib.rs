//! Numerical study of translation extension loci for the twisted torus
//! knot family with three strands twisted in front of a (3, 3k+2) torus
//! braid, together with the left-orderability certificates for Dehn
//! fillings that the loci support.
//!
//! The flow: compute the knot polynomial by Fox calculus, find its roots
//! on the unit circle, seed a deformation arc of irreducible SU(1,1)
//! characters at each root, trace every arc to its parabolic corner, close
//! the picture up under the dihedral symmetry, and read surgery-slope
//! certificates off the resulting diagram.

pub mod alexander;
pub mod arcs;
pub mod circle;
pub mod diagram;
pub mod error;
pub mod knot;
pub mod mat2;
pub mod omega;
pub mod orderability;
pub mod realize;
pub mod report;
pub mod traces;

pub use alexander::{alexander_polynomial, polynomial_genus, LaurentPoly};
pub use arcs::{
    arc_slope_profile, half_step_consistency, trace_all_arcs, trace_arc, ArcSample, LocusArc,
    Terminal, TraceOptions,
};
pub use circle::translation_number_oracle;
pub use diagram::{dihedral_expand, emit_csv, emit_svg, parse_csv, CsvRow, LocusDiagram};
pub use error::{Error, Result};
pub use knot::{peripheral_system, relator, GroupWord, TwistedTorusKnot};
pub use mat2::Mat2C;
pub use omega::{matrix_power, omega};
pub use orderability::{
    line_locus_intersection, orderable_range, range_display, verdict, ExceptionalSlopes, Outcome,
    Slope, SurgeryVerdict, Witness,
};
pub use realize::{deformation_seeds, realize, seed_for_root, BranchHint, RepPoint, Side};
pub use report::{
    observations_report, run_pipeline, trace_diagram, ObservationReport, PipelineOptions,
    PipelineOutput,
};
pub use traces::{
    beta_numerator_k1, constraint_branches, constraints_k1, knot_circle_roots, meridian_trace,
    reducible_traces, sigma_trace, unit_circle_roots, TraceTriple,
};
