//! Graded surgery of two line branes at a set of intersection points.
//!
//! Surgery uses the corner model: at each selected point the two crossing
//! strands are exchanged, so the strand arriving along one line leaves along
//! the other. The result is again a graph over the base, with a corner at
//! each surgery point.

use std::collections::{BTreeSet, HashSet};

use crate::brane::{line_to_pl, BraneCollection, LineBrane, PLMultiSection};
use crate::error::{Error, Result};
use crate::intersect::{check_orientation, intersect_lines, IntersectionPoint};
use crate::rational::{gcd, normalize, Mod1, Rational};

/// Surgery of `L₂ ♯_K L₁` with a local system of holonomy `b` on the result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgerySpec {
    l1: LineBrane,
    l2: LineBrane,
    points: Vec<IntersectionPoint>,
    b: Rational,
}

impl SurgerySpec {
    /// `points` must be a subset of `intersect_lines(l1, l2)`; order and
    /// the `index` field are ignored.
    pub fn new(l1: LineBrane, l2: LineBrane, points: Vec<IntersectionPoint>, b: Rational) -> Result<SurgerySpec> {
        check_orientation(&l1, &l2)?;
        let all = intersect_lines(&l1, &l2)?;
        let mut selected = BTreeSet::new();
        for p in &points {
            let found = all.iter().find(|q| q.base == p.base && q.fiber == p.fiber).ok_or_else(|| {
                Error::InvalidPointSelection(format!("({}, {}) is not an intersection point", p.base, p.fiber))
            })?;
            if !selected.insert(*found) {
                return Err(Error::InvalidPointSelection(format!("({}, {}) selected twice", p.base, p.fiber)));
            }
        }
        Ok(SurgerySpec { l1, l2, points: selected.into_iter().collect(), b })
    }

    /// Selects points by their position in `intersect_lines(l1, l2)`.
    pub fn from_indices(l1: LineBrane, l2: LineBrane, indices: &[usize], b: Rational) -> Result<SurgerySpec> {
        check_orientation(&l1, &l2)?;
        let all = intersect_lines(&l1, &l2)?;
        let points = indices
            .iter()
            .map(|&i| {
                all.get(i).copied().ok_or_else(|| {
                    Error::InvalidPointSelection(format!("index {i} out of range (there are {} points)", all.len()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SurgerySpec::new(l1, l2, points, b)
    }

    pub fn l1(&self) -> &LineBrane {
        &self.l1
    }

    pub fn l2(&self) -> &LineBrane {
        &self.l2
    }

    /// The selected points, sorted by `(base, fiber)`.
    pub fn points(&self) -> &[IntersectionPoint] {
        &self.points
    }

    pub fn b(&self) -> Rational {
        self.b
    }

    pub fn with_b(&self, b: Rational) -> SurgerySpec {
        SurgerySpec { b, ..self.clone() }
    }

    fn line(&self, which: usize) -> &LineBrane {
        if which == 0 {
            &self.l1
        } else {
            &self.l2
        }
    }

    /// The selected points as strand exchanges, in base order.
    fn events(&self) -> Vec<Event> {
        self.points
            .iter()
            .map(|p| {
                let (x, y) = (p.base.value(), p.fiber.value());
                Event {
                    x,
                    labels: [
                        self.l1.sheet_through(x, y).expect("point lies on L1"),
                        self.l2.sheet_through(x, y).expect("point lies on L2"),
                    ],
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
struct Event {
    x: Rational,
    labels: [i128; 2],
}

/// Monodromy of the strands of the union over one loop of the base.
///
/// Strands `0..r₁` are the sheets of `L₁`, strands `r₁..r₁+r₂` those of `L₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrandPermutation {
    map: Vec<usize>,
}

impl StrandPermutation {
    pub fn new(map: Vec<usize>) -> Result<StrandPermutation> {
        let mut seen = vec![false; map.len()];
        for &i in &map {
            if i >= map.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Precondition(format!("{map:?} is not a permutation")));
            }
        }
        Ok(StrandPermutation { map })
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// Disjoint cycles, each starting from its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.map.len()];
        let mut cycles = Vec::new();
        for start in 0..self.map.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![];
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.map[i];
            }
            cycles.push(cycle);
        }
        cycles
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }
}

/// Walks every strand once around the base: exchange strands at each
/// surgery point in base order, then apply each line's cyclic monodromy
/// `k ↦ k + d (mod r)`.
pub fn components(spec: &SurgerySpec) -> StrandPermutation {
    let r1 = spec.l1.r() as usize;
    let r2 = spec.l2.r() as usize;
    let strand = |line: usize, label: i128| if line == 0 { label as usize } else { r1 + label as usize };
    let events = spec.events();

    let map = (0..r1 + r2)
        .map(|start| {
            let mut pos = start;
            for e in &events {
                let (a, b) = (strand(0, e.labels[0]), strand(1, e.labels[1]));
                if pos == a {
                    pos = b;
                } else if pos == b {
                    pos = a;
                }
            }
            if pos < r1 {
                (pos as i64 + spec.l1.d()).rem_euclid(r1 as i64) as usize
            } else {
                r1 + ((pos - r1) as i64 + spec.l2.d()).rem_euclid(r2 as i64) as usize
            }
        })
        .collect();
    StrandPermutation { map }
}

/// Traces the surgered curve in the universal cover `R²`, one component at
/// a time. Each trace starts on the lowest unvisited strand over `x = 0`
/// (strand 0 is `L₁`'s lift through `(0, c₁/r₁)`) and runs until it
/// returns to its starting strand.
fn trace(spec: &SurgerySpec) -> Vec<PLMultiSection> {
    let events = spec.events();
    let mut visited: HashSet<(usize, i128)> = HashSet::new();
    let mut sections = Vec::new();
    let starts = (0..spec.l1.r()).map(|k| (0usize, k as i128)).chain((0..spec.l2.r()).map(|k| (1usize, k as i128)));

    for start in starts {
        if visited.contains(&start) {
            continue;
        }
        let (mut line, mut kappa) = start;
        let y0 = spec.line(line).sheet(Rational::ZERO, kappa);
        let mut breakpoints = vec![(Rational::ZERO, y0)];
        let mut n: i128 = 0;
        loop {
            let label = |line: usize, kappa: i128| {
                let l = spec.line(line);
                (kappa + l.d() as i128 * n).rem_euclid(i128::from(l.r()))
            };
            let here = (line, label(line, kappa));
            if n > 0 && here == start {
                break;
            }
            visited.insert(here);
            for e in &events {
                if label(line, kappa) != e.labels[line] {
                    continue;
                }
                let x = Rational::integer(n) + e.x;
                let y = spec.line(line).sheet(x, kappa);
                let other = 1 - line;
                let l = spec.line(other);
                let k = Rational::from(l.r()) * y - Rational::from(l.d()) * x - l.c();
                kappa = k.to_integer().expect("surgery point lies on both lifts");
                line = other;
                if n > 0 || !e.x.is_zero() {
                    breakpoints.push((x, y));
                }
            }
            n += 1;
        }
        let y_end = spec.line(line).sheet(Rational::integer(n), kappa);
        let degree = (y_end - y0).to_integer().expect("closed trace has integral degree shift");
        let rank = u32::try_from(n).expect("rank fits in u32");
        sections.push(PLMultiSection::new(rank, degree as i64, Rational::ZERO, breakpoints).expect("trace is a graph"));
    }
    sections
}

/// Performs the surgery. With `K = ∅` this returns the two input lines
/// unchanged. The local system `b` is attached when the result is
/// connected; disconnected results carry trivial local systems.
pub fn surger(spec: &SurgerySpec) -> BraneCollection {
    if spec.points.is_empty() {
        return BraneCollection::new(vec![line_to_pl(&spec.l1), line_to_pl(&spec.l2)]);
    }
    let mut sections = trace(spec);
    if sections.len() == 1 {
        let s = sections.pop().unwrap();
        sections.push(s.with_b(spec.b));
    } else {
        log::warn!("surgery result has {} components; local system b = {} not attached", sections.len(), spec.b);
    }
    BraneCollection::new(sections)
}

/// Exact `∫₀^r φ(x) dx` by the trapezoid rule on the linear pieces.
pub fn area_integral(section: &PLMultiSection) -> Rational {
    section.segments().map(|((x0, y0), (x1, y1))| (x1 - x0) * (y0 + y1) / Rational::integer(2)).sum()
}

/// The integer `N` with `∫φ = r₁d₁/2 + r₂d₂/2 + c₁ + c₂ + N` for a connected surgery.
pub fn surgery_residue(spec: &SurgerySpec) -> Result<i64> {
    let count = components(spec).cycle_count();
    if count != 1 {
        return Err(Error::DisconnectedResult(count));
    }
    let result = surger(spec);
    let area = area_integral(&result.components()[0]);
    let residue = area - line_area(&spec.l1) - line_area(&spec.l2);
    let n = residue.to_integer().unwrap_or_else(|| panic!("surgery area residue {residue} is not an integer"));
    Ok(n as i64)
}

/// `r d / 2 + c`, the area under a line brane over one period.
pub fn line_area(line: &LineBrane) -> Rational {
    Rational::from(i64::from(line.r()) * line.d()) / Rational::integer(2) + line.c()
}

/// Whether the surgery meets every hypothesis of the surgery/extension
/// criterion: coprime classes for both lines and their sum, and a connected result.
pub fn extension_hypotheses(spec: &SurgerySpec) -> Result<()> {
    let (l1, l2) = (spec.l1, spec.l2);
    let (r, d) = (i64::from(l1.r() + l2.r()), l1.d() + l2.d());
    if gcd(r, d) != 1 {
        return Err(Error::Precondition(format!("gcd(r1 + r2, d1 + d2) = gcd({r}, {d}) must be 1")));
    }
    let count = components(spec).cycle_count();
    if count != 1 {
        return Err(Error::Precondition(format!("surgery must have connected domain, found {count} components")));
    }
    Ok(())
}

/// Transverse double points of a collection over one fundamental domain of `T²`.
///
/// Two sheets meeting at a surgery corner touch without crossing and are not
/// counted.
pub fn self_intersections(collection: &BraneCollection) -> Vec<(Mod1, Mod1)> {
    let sheets: Vec<(&PLMultiSection, Rational)> =
        collection.components().iter().flat_map(|s| (0..s.r()).map(move |j| (s, Rational::from(j)))).collect();

    let mut found = BTreeSet::new();
    for i in 0..sheets.len() {
        for j in i + 1..sheets.len() {
            for p in sheet_crossings(sheets[i], sheets[j]) {
                found.insert(p);
            }
        }
    }
    found.into_iter().collect()
}

fn sheet_crossings(a: (&PLMultiSection, Rational), b: (&PLMultiSection, Rational)) -> Vec<(Mod1, Mod1)> {
    let f = |s: (&PLMultiSection, Rational), x: Rational| s.0.eval(x + s.1);
    let diff = |x: Rational| f(a, x) - f(b, x);

    let mut cuts: BTreeSet<Rational> = [Rational::ZERO, Rational::ONE].into();
    for s in [a.0, b.0] {
        cuts.extend(s.breakpoints().iter().map(|p| p.0.fract()));
    }
    let cuts: Vec<Rational> = cuts.into_iter().collect();

    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let (d0, d1) = (diff(x0), diff(x1));
        let lo = d0.min(d1).floor();
        let hi = d0.max(d1).floor() + 1;
        for n in lo..=hi {
            let n = Rational::integer(n);
            if d0 == d1 {
                assert!(d0 != n, "sheets overlap along a segment");
                continue;
            }
            let x = x0 + (n - d0) * (x1 - x0) / (d1 - d0);
            if x < x0 || x >= x1 {
                continue;
            }
            let (al, ar) = a.0.slopes_at(x + a.1);
            let (bl, br) = b.0.slopes_at(x + b.1);
            let (left, right) = (al - bl, ar - br);
            if left.signum() * right.signum() > 0 {
                out.push((normalize(x), normalize(f(a, x))));
            }
        }
    }
    out
}
