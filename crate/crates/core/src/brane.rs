//! Lagrangian multi-sections of the torus fibration `T² → S¹`.
//!
//! A connected multi-section of rank `r` and degree `d` is the graph of a
//! quasi-periodic function `φ: R → R` with `φ(x + r) = φ(x) + d`, taken
//! modulo `Z²`. Straight lines are [`LineBrane`]s; everything else is a
//! piecewise-linear [`PLMultiSection`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{gcd, Rational};

/// The straight line `φ(x) = (d x + c) / r` carrying the flat `U(1)`
/// connection `d + 2πi (b / r) dx`, whose holonomy around the domain is `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLine", into = "RawLine")]
pub struct LineBrane {
    r: u32,
    d: i64,
    c: Rational,
    b: Rational,
}

#[derive(Serialize, Deserialize)]
struct RawLine {
    r: u32,
    d: i64,
    c: Rational,
    b: Rational,
}

impl TryFrom<RawLine> for LineBrane {
    type Error = Error;
    fn try_from(raw: RawLine) -> Result<Self> {
        LineBrane::new(raw.r, raw.d, raw.c, raw.b)
    }
}

impl From<LineBrane> for RawLine {
    fn from(l: LineBrane) -> Self {
        RawLine { r: l.r, d: l.d, c: l.c, b: l.b }
    }
}

impl LineBrane {
    pub fn new(r: u32, d: i64, c: Rational, b: Rational) -> Result<LineBrane> {
        if r == 0 {
            return Err(Error::InvalidBrane("rank r must be at least 1".into()));
        }
        if gcd(i64::from(r), d) != 1 {
            return Err(Error::InvalidBrane(format!("gcd(r, d) = gcd({r}, {d}) must be 1")));
        }
        Ok(LineBrane { r, d, c, b })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn c(&self) -> Rational {
        self.c
    }

    pub fn b(&self) -> Rational {
        self.b
    }

    pub fn with_b(self, b: Rational) -> LineBrane {
        LineBrane { b, ..self }
    }

    /// `φ(x) = (d x + c) / r`.
    pub fn phi(&self, x: Rational) -> Rational {
        self.sheet(x, 0)
    }

    /// The lift `(d x + c + k) / r`. Every lift of the line to `R²` is a
    /// sheet for some integer `k`; `k` and `k + r` differ by a fiber period.
    pub fn sheet(&self, x: Rational, k: i128) -> Rational {
        (Rational::from(self.d) * x + self.c + Rational::integer(k)) / Rational::from(self.r)
    }

    /// Sheet label (mod `r`) of the lift through `(x, y)`, if the point lies on the line.
    pub fn sheet_through(&self, x: Rational, y: Rational) -> Option<i128> {
        let k = Rational::from(self.r) * y - Rational::from(self.d) * x - self.c;
        k.to_integer().map(|k| k.rem_euclid(i128::from(self.r)))
    }

    /// Slope of φ.
    pub fn slope(&self) -> Rational {
        Rational::from(self.d) / Rational::from(self.r)
    }
}

/// A breakpoint `(x, φ(x))` of a piecewise-linear section.
pub type Breakpoint = (Rational, Rational);

/// A connected piecewise-linear multi-section, stored over one period `[0, r)`.
///
/// The canonical form always has a breakpoint at `x = 0`, and no other
/// breakpoint where the incoming and outgoing slopes agree. The last
/// breakpoint is joined to `(r, φ(0) + d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PLMultiSection {
    r: u32,
    d: i64,
    b: Rational,
    breakpoints: Vec<Breakpoint>,
}

impl PLMultiSection {
    /// Validates and canonicalizes. Breakpoint abscissae must be strictly
    /// increasing and lie in `[0, r)`.
    pub fn new(r: u32, d: i64, b: Rational, breakpoints: Vec<Breakpoint>) -> Result<PLMultiSection> {
        if r == 0 {
            return Err(Error::InvalidBrane("rank r must be at least 1".into()));
        }
        if breakpoints.is_empty() {
            return Err(Error::InvalidBrane("a PL section needs at least one breakpoint".into()));
        }
        let period = Rational::from(r);
        for (i, &(x, _)) in breakpoints.iter().enumerate() {
            if x < Rational::ZERO || x >= period {
                return Err(Error::InvalidBrane(format!("breakpoint x = {x} outside [0, {r})")));
            }
            if i > 0 && breakpoints[i - 1].0 >= x {
                return Err(Error::InvalidBrane(format!(
                    "breakpoint x-coordinates must be strictly increasing ({} then {x})",
                    breakpoints[i - 1].0
                )));
            }
        }

        let mut pts = breakpoints;
        if !pts[0].0.is_zero() {
            let (x0, y0) = pts[0];
            let (xl, yl) = *pts.last().unwrap();
            let (xa, ya) = (xl - period, yl - Rational::from(d));
            let y_at_zero = ya + (y0 - ya) * (Rational::ZERO - xa) / (x0 - xa);
            pts.insert(0, (Rational::ZERO, y_at_zero));
        }

        let end = (period, pts[0].1 + Rational::from(d));
        let mut merged: Vec<Breakpoint> = vec![pts[0]];
        for i in 1..pts.len() {
            let prev = *merged.last().unwrap();
            let cur = pts[i];
            let next = pts.get(i + 1).copied().unwrap_or(end);
            if slope(prev, cur) != slope(cur, next) {
                merged.push(cur);
            }
        }
        Ok(PLMultiSection { r, d, b, breakpoints: merged })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// Holonomy of the local system around the whole domain.
    pub fn b(&self) -> Rational {
        self.b
    }

    pub fn with_b(self, b: Rational) -> PLMultiSection {
        PLMultiSection { b, ..self }
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    /// The linear pieces over one period, ending with the wrap piece to `x = r`.
    pub fn segments(&self) -> impl Iterator<Item = (Breakpoint, Breakpoint)> + '_ {
        let end = (Rational::from(self.r), self.breakpoints[0].1 + Rational::from(self.d));
        self.breakpoints.iter().enumerate().map(move |(i, &p)| (p, self.breakpoints.get(i + 1).copied().unwrap_or(end)))
    }

    fn reduce(&self, x: Rational) -> (Rational, i128) {
        let period = Rational::from(self.r);
        let q = (x / period).floor();
        (x - Rational::integer(q) * period, q)
    }

    fn segment_containing(&self, x: Rational, from_left: bool) -> (Breakpoint, Breakpoint) {
        self.segments()
            .find(|&((x0, _), (x1, _))| if from_left { x0 < x && x <= x1 } else { x0 <= x && x < x1 })
            .expect("reduced abscissa lies in one period")
    }

    /// Exact φ(x) for any rational `x`, using `φ(x + r) = φ(x) + d`.
    pub fn eval(&self, x: Rational) -> Rational {
        let (x_red, q) = self.reduce(x);
        let (p0, p1) = self.segment_containing(x_red, false);
        p0.1 + slope(p0, p1) * (x_red - p0.0) + Rational::integer(q) * Rational::from(self.d)
    }

    /// One-sided derivatives `(φ'(x−), φ'(x+))`.
    pub fn slopes_at(&self, x: Rational) -> (Rational, Rational) {
        let (x_red, _) = self.reduce(x);
        // x_red = 0 is approached from the left by the wrap piece.
        let left_x = if x_red.is_zero() { Rational::from(self.r) } else { x_red };
        let (l0, l1) = self.segment_containing(left_x, true);
        let (r0, r1) = self.segment_containing(x_red, false);
        (slope(l0, l1), slope(r0, r1))
    }

    /// Abscissae in `[0, r)` where the slope changes.
    pub fn corner_xs(&self) -> Vec<Rational> {
        self.breakpoints
            .iter()
            .map(|p| p.0)
            .filter(|&x| {
                let (l, r) = self.slopes_at(x);
                l != r
            })
            .collect()
    }
}

fn slope(p: Breakpoint, q: Breakpoint) -> Rational {
    (q.1 - p.1) / (q.0 - p.0)
}

/// Converts a line brane to its PL representation: the start point
/// `(0, c / r)` joined to the implicit endpoint `(r, c / r + d)`.
pub fn line_to_pl(line: &LineBrane) -> PLMultiSection {
    PLMultiSection::new(line.r, line.d, line.b, vec![(Rational::ZERO, line.phi(Rational::ZERO))])
        .expect("a line brane is a valid PL section")
}

pub fn eval_phi(section: &PLMultiSection, x: Rational) -> Rational {
    section.eval(x)
}

/// A possibly disconnected multi-section, one entry per component.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BraneCollection {
    components: Vec<PLMultiSection>,
}

impl BraneCollection {
    pub fn new(components: Vec<PLMultiSection>) -> BraneCollection {
        BraneCollection { components }
    }

    pub fn components(&self) -> &[PLMultiSection] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    /// Disjoint union.
    pub fn union(&self, other: &BraneCollection) -> BraneCollection {
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        BraneCollection { components }
    }

    pub fn total_rank(&self) -> u32 {
        self.components.iter().map(|c| c.r).sum()
    }

    pub fn total_degree(&self) -> i64 {
        self.components.iter().map(|c| c.d).sum()
    }
}

impl From<LineBrane> for BraneCollection {
    fn from(line: LineBrane) -> Self {
        BraneCollection::new(vec![line_to_pl(&line)])
    }
}

impl From<PLMultiSection> for BraneCollection {
    fn from(section: PLMultiSection) -> Self {
        BraneCollection::new(vec![section])
    }
}

/// `(Σ r_j, Σ d_j)`, the class of the collection in `H_1(T²; Z)`.
pub fn homology_class(collection: &BraneCollection) -> (i64, i64) {
    (i64::from(collection.total_rank()), collection.total_degree())
}
