//! Deterministic SVG pictures of branes in the unit-square fundamental domain.

use std::collections::BTreeMap;
use std::fmt::Write;

use syz_core::{intersect::determinant, intersect_lines, self_intersections, surger, PLMultiSection, Rational};

use crate::document::{Brane, BraneDocument};
use crate::CliError;

const SIZE: f64 = 512.0;
const MARGIN: f64 = 32.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn sx(x: Rational) -> f64 {
    MARGIN + (SIZE - 2.0 * MARGIN) * x.to_f64()
}

fn sy(y: Rational) -> f64 {
    MARGIN + (SIZE - 2.0 * MARGIN) * (1.0 - y.to_f64())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Cuts a segment of the lifted graph where it crosses the grid lines and
/// translates each piece into the unit square.
fn wrapped_pieces(p0: (Rational, Rational), p1: (Rational, Rational)) -> Vec<[(Rational, Rational); 2]> {
    let (dx, dy) = (p1.0 - p0.0, p1.1 - p0.1);
    let mut cuts = vec![Rational::ZERO, Rational::ONE];
    for (start, delta) in [(p0.0, dx), (p0.1, dy)] {
        if delta.is_zero() {
            continue;
        }
        let (lo, hi) = if delta.signum() > 0 { (start, start + delta) } else { (start + delta, start) };
        for n in (lo.floor() + 1)..=hi.floor() {
            let t = (Rational::integer(n) - start) / delta;
            if t.signum() > 0 && t < Rational::ONE {
                cuts.push(t);
            }
        }
    }
    cuts.sort();
    cuts.dedup();
    cuts.windows(2)
        .map(|w| {
            let at = |t: Rational| (p0.0 + dx * t, p0.1 + dy * t);
            let (a, b) = (at(w[0]), at(w[1]));
            let mid = ((a.0 + b.0) / Rational::integer(2), (a.1 + b.1) / Rational::integer(2));
            let shift = (Rational::integer(mid.0.floor()), Rational::integer(mid.1.floor()));
            [(a.0 - shift.0, a.1 - shift.1), (b.0 - shift.0, b.1 - shift.1)]
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum DotKind {
    Intersection,
    SelfIntersection,
    SurgeryPoint,
}

impl DotKind {
    fn class(self) -> &'static str {
        match self {
            DotKind::Intersection => "intersection",
            DotKind::SelfIntersection => "self-intersection",
            DotKind::SurgeryPoint => "surgery-point",
        }
    }
}

fn render(curves: &[(String, PLMultiSection)], dots: &BTreeMap<(Rational, Rational), DotKind>) -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"512\" height=\"512\" viewBox=\"0 0 512 512\">\n",
    );
    let side = SIZE - 2.0 * MARGIN;
    writeln!(
        s,
        "<rect class=\"domain\" x=\"{MARGIN:.6}\" y=\"{MARGIN:.6}\" width=\"{side:.6}\" height=\"{side:.6}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>"
    )
    .unwrap();
    for (i, (name, section)) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        writeln!(s, "<g class=\"brane\" id=\"{}\" stroke=\"{color}\" stroke-width=\"2\" fill=\"none\">", escape(name))
            .unwrap();
        for (p0, p1) in section.segments() {
            for [a, b] in wrapped_pieces(p0, p1) {
                writeln!(s, "<polyline points=\"{:.6},{:.6} {:.6},{:.6}\"/>", sx(a.0), sy(a.1), sx(b.0), sy(b.1))
                    .unwrap();
            }
        }
        s.push_str("</g>\n");
    }
    if !dots.is_empty() {
        s.push_str("<g class=\"points\" font-family=\"monospace\" font-size=\"10\">\n");
        for (&(x, y), &kind) in dots {
            let (cx, cy) = (sx(x), sy(y));
            let style = match kind {
                DotKind::SurgeryPoint => "r=\"6\" fill=\"none\" stroke=\"#e6194b\" stroke-width=\"2\"",
                _ => "r=\"3\" fill=\"black\"",
            };
            writeln!(s, "<circle class=\"{}\" cx=\"{cx:.6}\" cy=\"{cy:.6}\" {style}/>", kind.class()).unwrap();
            writeln!(s, "<text x=\"{:.6}\" y=\"{:.6}\">({x}, {y})</text>", cx + 6.0, cy - 6.0).unwrap();
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}

/// Every brane of the document, with the intersection points of each
/// transverse pair of lines. Points used by a surgery in the document are
/// highlighted.
pub fn draw_document(doc: &BraneDocument) -> Result<String, CliError> {
    let curves: Vec<_> = doc.branes.iter().map(|(n, b)| (n.clone(), b.section())).collect();
    let lines: Vec<_> = doc
        .branes
        .values()
        .filter_map(|b| match b {
            Brane::Line(l) => Some(*l),
            Brane::Pl(_) => None,
        })
        .collect();
    let mut dots = BTreeMap::new();
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            if determinant(a, b) == 0 {
                continue;
            }
            for p in intersect_lines(a, b)? {
                dots.insert((p.base.value(), p.fiber.value()), DotKind::Intersection);
            }
        }
    }
    for name in doc.surgeries.keys() {
        // Specs that fail their preconditions are simply not highlighted.
        if let Ok(spec) = doc.spec(name) {
            for p in spec.points() {
                dots.insert((p.base.value(), p.fiber.value()), DotKind::SurgeryPoint);
            }
        }
    }
    Ok(render(&curves, &dots))
}

/// The result of one surgery, its self-intersections, and the surgery points.
pub fn draw_surgery(doc: &BraneDocument, name: &str) -> Result<String, CliError> {
    let spec = doc.spec(name)?;
    let result = surger(&spec);
    let curves: Vec<_> =
        result.components().iter().enumerate().map(|(i, c)| (format!("{name}.{i}"), c.clone())).collect();
    let mut dots = BTreeMap::new();
    for (x, y) in self_intersections(&result) {
        dots.insert((x.value(), y.value()), DotKind::SelfIntersection);
    }
    for p in spec.points() {
        dots.insert((p.base.value(), p.fiber.value()), DotKind::SurgeryPoint);
    }
    Ok(render(&curves, &dots))
}
