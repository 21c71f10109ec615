//! Assembling traced arcs into a locus diagram covering the unit strip and
//! serializing it as CSV or SVG.
//!
//! The locus is invariant under the infinite dihedral group generated by
//! (x, y) -> (x+1, y) and (x, y) -> (-x, -y). Arcs are traced in the strip
//! 0 <= x <= 1 starting from upper half-circle roots; composing the two
//! generators supplies the arcs rooted at the conjugate roots and fills a
//! double fundamental domain.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use crate::arcs::{ArcSample, LocusArc, Terminal};
use crate::error::{Error, Result};
use crate::knot::TwistedTorusKnot;

/// A double fundamental domain of the translation extension locus: the
/// traced arcs plus their rotated images shifted back into the unit strip.
#[derive(Clone, Debug)]
pub struct LocusDiagram {
    pub k: i64,
    pub m: i64,
    pub arcs: Vec<LocusArc>,
}

/// Apply the rotation (x, y) -> (-x, -y) followed by the unit translation
/// (x, y) -> (x+1, y) to a whole arc. Trace parameters and triples are
/// carried over unchanged: the image arc is the one rooted at the conjugate
/// circle root, whose representations have the same character.
fn rotate_translate(arc: &LocusArc, c: f64) -> LocusArc {
    let samples = arc
        .samples
        .iter()
        .map(|s| ArcSample {
            param: s.param,
            triple: s.triple,
            phi: PI - s.phi,
            psi: c * PI - s.psi,
            x: 1.0 - s.x,
            y: -s.y,
            side: s.side,
        })
        .collect();
    LocusArc {
        k: arc.k,
        m: arc.m,
        root_theta: TAU - arc.root_theta,
        samples,
        terminal: arc.terminal,
    }
}

/// Expand traced arcs by the dihedral symmetry: the originals first, then
/// one image per original in the same order.
pub fn dihedral_expand(arcs: Vec<LocusArc>) -> LocusDiagram {
    let (k, m) = match arcs.first() {
        Some(arc) => (arc.k, arc.m),
        None => {
            return LocusDiagram {
                k: 0,
                m: 0,
                arcs: Vec::new(),
            }
        }
    };
    let knot = TwistedTorusKnot::new(k, m).expect("traced arcs carry valid knot parameters");
    let c = knot.sigma_meridian_power() as f64;
    let images: Vec<LocusArc> = arcs.iter().map(|arc| rotate_translate(arc, c)).collect();
    let mut all = arcs;
    all.extend(images);
    LocusDiagram { k, m, arcs: all }
}

/// Mandatory first line of the CSV form.
pub const CSV_HEADER: &str = "k,m,root_theta,param,phi,psi,x,y,side,terminal";

fn push_float(out: &mut String, v: f64) {
    // 17 significant digits: enough for the parse to reproduce bits.
    let _ = write!(out, "{v:.16e}");
}

/// Serialize a diagram as CSV, one row per sample, floats at full precision.
pub fn emit_csv(diagram: &LocusDiagram) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for arc in &diagram.arcs {
        for sample in &arc.samples {
            let _ = write!(out, "{},{},", arc.k, arc.m);
            push_float(&mut out, arc.root_theta);
            out.push(',');
            push_float(&mut out, sample.param);
            out.push(',');
            push_float(&mut out, sample.phi);
            out.push(',');
            push_float(&mut out, sample.psi);
            out.push(',');
            push_float(&mut out, sample.x);
            out.push(',');
            push_float(&mut out, sample.y);
            let _ = write!(out, ",{},{}", sample.side, arc.terminal);
            out.push('\n');
        }
    }
    out
}

/// One parsed CSV row; classification columns stay textual.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub k: i64,
    pub m: i64,
    pub root_theta: f64,
    pub param: f64,
    pub phi: f64,
    pub psi: f64,
    pub x: f64,
    pub y: f64,
    pub side: String,
    pub terminal: String,
}

fn parse_field<T: std::str::FromStr>(field: &str, line: usize, name: &str) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::BadConfig(format!("csv line {line}: bad {name} value {field:?}")))
}

/// Parse the CSV form back into rows. The header is required verbatim.
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == CSV_HEADER => {}
        other => {
            return Err(Error::BadConfig(format!(
                "csv header missing or wrong: {:?}",
                other.unwrap_or("")
            )))
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let n = i + 2;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(Error::BadConfig(format!(
                "csv line {n}: expected 10 fields, got {}",
                fields.len()
            )));
        }
        rows.push(CsvRow {
            k: parse_field(fields[0], n, "k")?,
            m: parse_field(fields[1], n, "m")?,
            root_theta: parse_field(fields[2], n, "root_theta")?,
            param: parse_field(fields[3], n, "param")?,
            phi: parse_field(fields[4], n, "phi")?,
            psi: parse_field(fields[5], n, "psi")?,
            x: parse_field(fields[6], n, "x")?,
            y: parse_field(fields[7], n, "y")?,
            side: fields[8].to_string(),
            terminal: fields[9].to_string(),
        });
    }
    Ok(rows)
}

const SVG_WIDTH: f64 = 800.0;
const SVG_HEIGHT: f64 = 600.0;

/// Serialize a diagram as a standalone SVG plot. The view covers x in
/// [0, 1] and y in [-(3k+5), 3k+5]; marker radii are in pixel units, so
/// data coordinates are mapped onto the 800 x 600 canvas up front.
pub fn emit_svg(diagram: &LocusDiagram) -> String {
    let y_span = (3 * diagram.k + 5) as f64;
    let px = |x: f64| SVG_WIDTH * x;
    let py = |y: f64| SVG_HEIGHT / 2.0 * (1.0 - y / y_span);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" \
         viewBox=\"0 0 800 600\">"
    );
    let _ = writeln!(
        out,
        "  <rect x=\"0.5\" y=\"0.5\" width=\"799\" height=\"599\" fill=\"white\" \
         stroke=\"#999\"/>"
    );
    // horizontal axis y = 0 (part of the locus itself) and the x = 0 edge
    let _ = writeln!(
        out,
        "  <line x1=\"0\" y1=\"{mid}\" x2=\"800\" y2=\"{mid}\" stroke=\"#555\" \
         stroke-width=\"1\"/>",
        mid = SVG_HEIGHT / 2.0
    );
    let _ = writeln!(
        out,
        "  <line x1=\"1\" y1=\"0\" x2=\"1\" y2=\"600\" stroke=\"#555\" stroke-width=\"1\"/>"
    );
    let _ = writeln!(
        out,
        "  <text x=\"6\" y=\"14\" font-size=\"12\" fill=\"#555\">y = {y_span}</text>"
    );
    let _ = writeln!(
        out,
        "  <text x=\"6\" y=\"596\" font-size=\"12\" fill=\"#555\">y = -{y_span}</text>"
    );
    let _ = writeln!(
        out,
        "  <text x=\"6\" y=\"{}\" font-size=\"12\" fill=\"#555\">0</text>",
        SVG_HEIGHT / 2.0 - 4.0
    );
    let _ = writeln!(
        out,
        "  <text x=\"786\" y=\"{}\" font-size=\"12\" fill=\"#555\">1</text>",
        SVG_HEIGHT / 2.0 - 4.0
    );

    for arc in &diagram.arcs {
        let mut points = String::new();
        for (i, sample) in arc.samples.iter().enumerate() {
            if i > 0 {
                points.push(' ');
            }
            let _ = write!(points, "{:.3},{:.3}", px(sample.x), py(sample.y));
        }
        let _ = writeln!(
            out,
            "  <polyline fill=\"none\" stroke=\"#1f6feb\" stroke-width=\"1.5\" \
             points=\"{points}\"/>"
        );
    }
    for arc in &diagram.arcs {
        if arc.terminal != Terminal::Parabolic {
            continue;
        }
        let end = arc.end();
        let _ = writeln!(
            out,
            "  <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\" fill=\"#d62728\"/>",
            px(end.x),
            py(end.y)
        );
    }
    out.push_str("</svg>\n");
    out
}
