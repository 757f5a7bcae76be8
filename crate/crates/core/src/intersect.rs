//! Intersection points of two line branes and their Floer generators.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::brane::LineBrane;
use crate::error::{Error, Result};
use crate::rational::{normalize, Mod1, Rational};

/// A transverse intersection point of two line branes.
///
/// `param1` and `param2` are positions on the two domain circles, scaled to
/// `[0, 1)`: a line of rank `r` is traced by `t ↦ (r t, φ(r t))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IntersectionPoint {
    pub base: Mod1,
    pub fiber: Mod1,
    pub param1: Rational,
    pub param2: Rational,
    /// Floer degree; set when the pair is in the graded orientation.
    pub index: Option<i32>,
}

impl IntersectionPoint {
    /// The same point seen from the swapped pair.
    pub fn swapped(&self) -> IntersectionPoint {
        IntersectionPoint { param1: self.param2, param2: self.param1, index: None, ..*self }
    }
}

/// A generator of the Floer complex: an intersection point with its degree
/// and the local-system phase `b₁·param1 − b₂·param2 (mod 1)` it carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FloerGenerator {
    pub point: IntersectionPoint,
    pub degree: i32,
    pub holonomy_weight: Mod1,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FloerGeneratorSet {
    pub generators: Vec<FloerGenerator>,
}

/// `r₁d₂ − r₂d₁`; its absolute value is the number of intersection points.
pub fn determinant(l1: &LineBrane, l2: &LineBrane) -> i64 {
    i64::from(l1.r()) * l2.d() - i64::from(l2.r()) * l1.d()
}

/// Point on `line` at scaled parameter `t`.
pub fn point_at(line: &LineBrane, t: Rational) -> (Mod1, Mod1) {
    let x = Rational::from(line.r()) * t;
    (normalize(x), normalize(line.phi(x)))
}

/// Parameter in `[0, 1)` of the point of `line` over base `x ∈ [0,1)` at height `y (mod 1)`.
fn parameter_of(line: &LineBrane, x: Rational, y: Mod1) -> Rational {
    let r = line.r();
    (0..r)
        .map(|m| x + Rational::from(m))
        .find(|&xm| normalize(line.phi(xm)) == y)
        .map(|xm| xm / Rational::from(r))
        .expect("intersection point lies on the line")
}

/// All points of `L₁ ∩ L₂` on `T²`, sorted by `(base, fiber)`.
///
/// Sheet `k` of `L₁` meets sheet `k'` of `L₂` over the base coordinate
/// `x = (r₂(c₁ + k) − r₁(c₂ + k')) / (r₁d₂ − r₂d₁)`. Pairs `(k, k')` giving
/// the same point differ by torus translations. Since `gcd(r₁, d₁) = 1` every
/// point has a representative with `k = 0`, and the translations fixing
/// `k = 0` shift `k'` by multiples of `D = r₁d₂ − r₂d₁`, so `0 ≤ k' < |D|`
/// reaches each point exactly once.
pub fn intersect_lines(l1: &LineBrane, l2: &LineBrane) -> Result<Vec<IntersectionPoint>> {
    let det = determinant(l1, l2);
    if det == 0 {
        return Err(Error::ParallelLines(i64::from(l1.r()) * l2.d()));
    }
    let n = det.unsigned_abs() as i128;
    let (r1, r2) = (Rational::from(l1.r()), Rational::from(l2.r()));
    let det_q = Rational::from(det);

    let mut found: BTreeSet<(Mod1, Mod1)> = BTreeSet::new();
    for kp in 0..n {
        let x = (r2 * l1.c() - r1 * (l2.c() + Rational::integer(kp))) / det_q;
        let y = l1.sheet(x, 0);
        debug_assert_eq!(y, l2.sheet(x, kp));
        found.insert((normalize(x), normalize(y)));
    }
    assert_eq!(found.len() as i128, n, "intersection count must equal |r1 d2 - r2 d1|");

    let index = (det > 0).then_some(1);
    Ok(found
        .into_iter()
        .map(|(base, fiber)| IntersectionPoint {
            base,
            fiber,
            param1: parameter_of(l1, base.value(), fiber),
            param2: parameter_of(l2, base.value(), fiber),
            index,
        })
        .collect())
}

/// Assigns Floer degrees. Every generator of `CF(L₁, L₂)` has index 1 when
/// `r₁d₂ > r₂d₁`; the opposite orientation is not graded here.
pub fn grade_points(points: &[IntersectionPoint], l1: &LineBrane, l2: &LineBrane) -> Result<Vec<IntersectionPoint>> {
    check_orientation(l1, l2)?;
    Ok(points.iter().map(|p| IntersectionPoint { index: Some(1), ..*p }).collect())
}

pub(crate) fn check_orientation(l1: &LineBrane, l2: &LineBrane) -> Result<()> {
    let lhs = i64::from(l1.r()) * l2.d();
    let rhs = i64::from(l2.r()) * l1.d();
    if lhs == rhs {
        return Err(Error::ParallelLines(lhs));
    }
    if lhs < rhs {
        return Err(Error::UnsupportedOrientation { lhs, rhs });
    }
    Ok(())
}

pub fn floer_generators(l1: &LineBrane, l2: &LineBrane) -> Result<FloerGeneratorSet> {
    let points = intersect_lines(l1, l2)?;
    let graded = grade_points(&points, l1, l2)?;
    let generators = graded
        .into_iter()
        .map(|point| FloerGenerator {
            point,
            degree: point.index.expect("graded"),
            holonomy_weight: normalize(l1.b() * point.param1 - l2.b() * point.param2),
        })
        .collect();
    Ok(FloerGeneratorSet { generators })
}
