//! Test-side oracles. None of these call into the library beyond the data
//! accessors of its input types.
#![allow(dead_code)]

use std::collections::BTreeSet;

use syz_core::{LineBrane, Rational, SurgerySpec};

pub fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

pub fn line(r: u32, d: i64, c: &str, b: &str) -> LineBrane {
    LineBrane::new(r, d, q(c), q(b)).unwrap()
}

fn frac(x: Rational) -> Rational {
    x - Rational::integer(x.floor())
}

fn rat(n: i64) -> Rational {
    Rational::integer(i128::from(n))
}

/// Brute-force search for the intersection points of two lines: every pair
/// of sheet labels with a window of translates, reduced to the unit square.
pub fn scan_intersections(l1: &LineBrane, l2: &LineBrane) -> BTreeSet<(Rational, Rational)> {
    let (r1, r2) = (rat(l1.r() as i64), rat(l2.r() as i64));
    let (d1, d2) = (rat(l1.d()), rat(l2.d()));
    let det = r1 * d2 - r2 * d1;
    let mut out = BTreeSet::new();
    let span = (l1.r() as i64 + l2.r() as i64) * (l1.d().abs() + l2.d().abs() + 1);
    for k1 in 0..l1.r() as i64 {
        for k2 in -span..=span {
            // (d1 x + c1 + k1)/r1 = (d2 x + c2 + k2)/r2
            let x = (r2 * (l1.c() + rat(k1)) - r1 * (l2.c() + rat(k2))) / det;
            let y = (d1 * x + l1.c() + rat(k1)) / r1;
            out.insert((frac(x), frac(y)));
        }
    }
    out
}

struct Walker<'a> {
    lines: [&'a LineBrane; 2],
    /// Selected points as (base, fiber) in [0, 1)².
    points: Vec<(Rational, Rational)>,
    bases: Vec<Rational>,
}

impl<'a> Walker<'a> {
    fn new(spec: &'a SurgerySpec) -> Walker<'a> {
        let points: Vec<_> = spec.points().iter().map(|p| (p.base.value(), p.fiber.value())).collect();
        let bases: BTreeSet<_> = points.iter().map(|p| p.0).collect();
        Walker { lines: [spec.l1(), spec.l2()], points, bases: bases.into_iter().collect() }
    }

    fn slope(&self, i: usize) -> Rational {
        rat(self.lines[i].d()) / rat(self.lines[i].r() as i64)
    }

    /// Walks from `(n, y)` on line `i` to `x = n + 1`, swapping lines at
    /// selected points (including one sitting at `x = n`). Returns the line
    /// and height on arrival, before any swap at `n + 1`, and the area under
    /// the path.
    fn unit_step(&self, mut i: usize, mut y: Rational, n: i64) -> (usize, Rational, Rational) {
        let mut x = rat(n);
        let mut area = Rational::ZERO;
        for &p in &self.bases {
            let xp = rat(n) + p;
            let yp = y + self.slope(i) * (xp - x);
            area += (y + yp) * (xp - x) / rat(2);
            x = xp;
            y = yp;
            if self.points.contains(&(p, frac(y))) {
                i = 1 - i;
            }
        }
        let end = rat(n + 1);
        let yend = y + self.slope(i) * (end - x);
        area += (y + yend) * (end - x) / rat(2);
        (i, yend, area)
    }

    fn label(&self, i: usize, y: Rational, n: i64) -> usize {
        let l = self.lines[i];
        let k = rat(l.r() as i64) * y - rat(l.d() * n) - l.c();
        assert!(k.is_integer(), "walk left the sheets");
        k.to_integer().unwrap().rem_euclid(i128::from(l.r())) as usize
    }
}

/// Number of connected components of the surgered curve, by walking the
/// sheets geometrically one base period at a time.
pub fn walk_component_count(spec: &SurgerySpec) -> usize {
    let w = Walker::new(spec);
    let (r1, r2) = (spec.l1().r() as usize, spec.l2().r() as usize);
    let index = |i: usize, k: usize| if i == 0 { k } else { r1 + k };
    let mut next = vec![usize::MAX; r1 + r2];
    for (i, r) in [(0, r1), (1, r2)] {
        for k in 0..r {
            let l = w.lines[i];
            let y = (l.c() + rat(k as i64)) / rat(r as i64);
            let (j, y1, _) = w.unit_step(i, y, 0);
            // (1, y) and (0, y) are the same point of the torus.
            next[index(i, k)] = index(j, w.label(j, y1, 0));
        }
    }
    let mut seen = vec![false; r1 + r2];
    let mut cycles = 0;
    for s in 0..r1 + r2 {
        if !seen[s] {
            cycles += 1;
            let mut t = s;
            while !seen[t] {
                seen[t] = true;
                t = next[t];
            }
        }
    }
    assert!(next.iter().collect::<BTreeSet<_>>().len() == r1 + r2, "unit step is not a bijection");
    cycles
}

/// `∫ φ` over one full period of a connected surgery, starting on sheet 0
/// of the first line at `x = 0`.
pub fn walk_area(spec: &SurgerySpec) -> Rational {
    let w = Walker::new(spec);
    let (l1, l2) = (spec.l1(), spec.l2());
    let rank = (l1.r() + l2.r()) as i64;
    let y0 = l1.c() / rat(l1.r() as i64);
    let (mut i, mut y, mut total) = (0, y0, Rational::ZERO);
    for n in 0..rank {
        let (j, y1, area) = w.unit_step(i, y, n);
        total += area;
        i = j;
        y = y1;
    }
    assert_eq!((i, y), (0, y0 + rat(l1.d() + l2.d())), "walk did not close up");
    total
}

/// Determinant class `(degree, a mod 1, b mod 1)` of a line brane's mirror,
/// from the closed form `a = rd/2 + c` and the companion sign `(r − 1)/2`.
pub fn line_det(l: &LineBrane) -> (i64, Rational, Rational) {
    let r = rat(l.r() as i64);
    (-l.d(), frac(r * rat(l.d()) / rat(2) + l.c()), frac(l.b() + (r - Rational::ONE) / rat(2)))
}

pub fn add_det(x: (i64, Rational, Rational), y: (i64, Rational, Rational)) -> (i64, Rational, Rational) {
    (x.0 + y.0, frac(x.1 + y.1), frac(x.2 + y.2))
}

/// Surgery mirror determinant through the geometric walk.
pub fn surgery_det(spec: &SurgerySpec) -> (i64, Rational, Rational) {
    let (l1, l2) = (spec.l1(), spec.l2());
    let rank = rat((l1.r() + l2.r()) as i64);
    (-(l1.d() + l2.d()), frac(walk_area(spec)), frac(spec.b() + (rank - Rational::ONE) / rat(2)))
}

/// Gauge equivalence of `e^{-2π(a+ib)}` factors by searching Laurent
/// monomial gauges `u^N` and integer phase windings in `[-20, 20]`.
pub fn laurent_search(a1: Rational, b1: Rational, a2: Rational, b2: Rational) -> bool {
    let window = -20..=20i64;
    let modulus = window.clone().any(|n| a1 == a2 + rat(n));
    let phase = window.into_iter().any(|m| b1 == b2 + rat(m));
    modulus && phase
}

/// Brute-force count of intersections of the chosen lifts in the fiber
/// product of the `m1`- and `m2`-fold covers.
pub fn fiber_product_count(l1: &LineBrane, l2: &LineBrane, m1: u32, m2: u32) -> usize {
    let gcd = |mut a: i64, mut b: i64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a.abs()
    };
    let (m1, m2) = (m1 as i64, m2 as i64);
    let g = gcd(m1, m2);
    let ell = m1 / g * m2;
    let (r1, r2, d1, d2) = (l1.r() as i64, l2.r() as i64, l1.d(), l2.d());
    let det = r1 * d2 - r2 * d1;
    let mut total = 0;
    for e in 0..g {
        let mut pts = BTreeSet::new();
        for k1 in (0..r1).step_by(m1 as usize) {
            for j in 0..=ell * det.abs() {
                let k2 = m2 * j;
                // (d1 u + c1 + k1)/r1 = (d2 (u + e) + c2 + k2)/r2
                let num = rat(r1) * (rat(d2 * e) + l2.c() + rat(k2)) - rat(r2) * (l1.c() + rat(k1));
                let u = num / rat(-det);
                let y = (rat(d1) * u + l1.c() + rat(k1)) / rat(r1);
                let u_mod = u - rat(ell) * Rational::integer((u / rat(ell)).floor());
                pts.insert((u_mod, frac(y)));
            }
        }
        total += pts.len();
    }
    total
}
