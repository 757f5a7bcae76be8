//! Cyclic covers of the base circle, brane lifts, and lifted-Hamiltonian
//! equivalence.
//!
//! The degree-`m` cover `T²_m → T²` unwraps the base: `(x̂ mod m, y) ↦ (x̂ mod 1, y)`.
//! Upstairs data is presented in unit-normalized coordinates `x̂ / m`, so a
//! lifted component is again a [`LineBrane`].

use serde::Serialize;

use crate::brane::{BraneCollection, LineBrane};
use crate::error::{Error, Result};
use crate::intersect::intersect_lines;
use crate::mirror::{is_isomorphic, syz_transform};
use crate::rational::{gcd, normalize, Mod1, Rational};

/// The connected cyclic cover of degree `m` of the base circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BaseCover {
    m: u32,
}

impl BaseCover {
    pub fn new(m: u32) -> Result<BaseCover> {
        if m == 0 {
            return Err(Error::Precondition("cover degree must be at least 1".into()));
        }
        Ok(BaseCover { m })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// The deck transformation `t ∈ Z/m` acting on the fiber `{0, …, m−1}` over a base point.
    pub fn deck_act(&self, t: u32, sheet: u32) -> u32 {
        (sheet + t) % self.m
    }

    /// Checks that the deck group acts on a fiber transitively and freely.
    pub fn deck_action_is_simply_transitive(&self) -> bool {
        let m = self.m;
        let transitive = (0..m).all(|s| (0..m).all(|target| (0..m).any(|t| self.deck_act(t, s) == target)));
        let free = (1..m).all(|t| (0..m).all(|s| self.deck_act(t, s) != s));
        transitive && free
    }
}

/// Full preimage of a line brane under a base cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftedBrane {
    pub cover: BaseCover,
    /// Upstairs components in normalized coordinates.
    pub lines: Vec<LineBrane>,
    /// Deck rotation (in normalized base units) carrying component 0 onto each component.
    pub base_offsets: Vec<Mod1>,
}

impl LiftedBrane {
    pub fn components(&self) -> BraneCollection {
        self.lines.iter().map(|l| BraneCollection::from(*l)).fold(BraneCollection::default(), |acc, c| acc.union(&c))
    }
}

/// Lifts `L_{r,d}[c]` through the degree-`m` cover.
///
/// Upstairs the lifts of `y = (d x̂ + c + κ)/r` fall into `g = gcd(m, r)`
/// classes `κ ≡ j (mod g)`. Component `j` is `L_{r/g, dm/g}[(c + j)/g]` in
/// normalized coordinates; it covers the original domain `m/g` times, so its
/// holonomy is `b·m/g`.
pub fn lift_brane(line: &LineBrane, cover: BaseCover) -> LiftedBrane {
    let m = cover.m;
    let g = gcd(i64::from(m), i64::from(line.r())) as u32;
    let rank = line.r() / g;
    let degree = line.d() * i64::from(m / g);
    let holonomy = normalize(line.b() * Rational::from(m / g)).value();
    let mut lines = Vec::with_capacity(g as usize);
    let mut base_offsets = Vec::with_capacity(g as usize);
    for j in 0..g {
        let c = (line.c() + Rational::from(j)) / Rational::from(g);
        lines.push(LineBrane::new(rank, degree, c, holonomy).expect("lifted class is coprime"));
        // Rotating component 0 by t sheets shifts κ by −d t.
        let t = (0..g)
            .find(|&t| (-line.d() * i64::from(t) - i64::from(j)).rem_euclid(i64::from(g)) == 0)
            .expect("d is invertible mod g");
        base_offsets.push(normalize(Rational::new(i128::from(t), i128::from(m))));
    }
    LiftedBrane { cover, lines, base_offsets }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BijectionCheck {
    pub holds: bool,
    pub upstairs: usize,
    pub downstairs: usize,
}

/// Counts `L̃₁ ∩ L̃₂` in the fiber product of the two covers and compares
/// with `|L₁ ∩ L₂|`.
///
/// `L̃₁` is the lift of `L₁` to the `m₁`-fold cover (it exists when `m₁ | r₁`)
/// pulled back to the fiber product, and symmetrically for `L̃₂`. The fiber
/// product has `gcd(m₁, m₂)` components, each a cyclic cover of degree
/// `lcm(m₁, m₂)`; on component `e` the second coordinate is the first shifted by `e`.
pub fn verify_intersection_bijection(
    l1: &LineBrane,
    l2: &LineBrane,
    cover1: BaseCover,
    cover2: BaseCover,
) -> Result<BijectionCheck> {
    for (l, cover) in [(l1, cover1), (l2, cover2)] {
        if l.r() % cover.m != 0 {
            return Err(Error::NoLift { m: cover.m, r: l.r() });
        }
    }
    let downstairs = intersect_lines(l1, l2)?.len();

    let (m1, m2) = (i64::from(cover1.m), i64::from(cover2.m));
    let g = gcd(m1, m2);
    let lcm = BaseCover::new((m1 / g * m2) as u32)?;

    // Components of the lcm-preimage lying in the chosen lift: κ ≡ 0 (mod m).
    let chosen = |line: &LineBrane, m: i64| -> Vec<LineBrane> {
        lift_brane(line, lcm)
            .lines
            .into_iter()
            .enumerate()
            .filter(|(j, _)| (*j as i64) % m == 0)
            .map(|(_, l)| l)
            .collect()
    };

    let mut upstairs = 0;
    let first = chosen(l1, m1);
    for e in 0..g {
        let shifted = LineBrane::new(l2.r(), l2.d(), l2.c() + Rational::from(l2.d() * e), l2.b())?;
        for a in &first {
            for b in &chosen(&shifted, m2) {
                upstairs += intersect_lines(a, b)?.len();
            }
        }
    }
    Ok(BijectionCheck { holds: upstairs == downstairs, upstairs, downstairs })
}

/// Lifted-Hamiltonian equivalence of two connected multi-sections with the
/// same domain cover, decided by isomorphism of their mirror bundles.
pub fn lifted_ham_equivalent(a: &BraneCollection, b: &BraneCollection) -> Result<bool> {
    for c in [a, b] {
        if !c.is_connected() {
            return Err(Error::Precondition(format!("expected a connected brane, found {} components", c.len())));
        }
    }
    let (sa, sb) = (&a.components()[0], &b.components()[0]);
    if (sa.r(), sa.d()) != (sb.r(), sb.d()) {
        return Err(Error::MismatchedClass(sa.r(), sa.d(), sb.r(), sb.d()));
    }
    // A connected cover of the circle is cyclic, so deck transformations act transitively.
    assert!(BaseCover::new(sa.r())?.deck_action_is_simply_transitive());
    is_isomorphic(&syz_transform(a), &syz_transform(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn line(r: u32, d: i64, c: &str, b: &str) -> LineBrane {
        LineBrane::new(r, d, q(c), q(b)).unwrap()
    }

    fn cover(m: u32) -> BaseCover {
        BaseCover::new(m).unwrap()
    }

    #[test]
    fn deck_group_is_simply_transitive() {
        for m in 1..=12 {
            assert!(cover(m).deck_action_is_simply_transitive());
        }
        assert!(BaseCover::new(0).is_err());
    }

    #[test]
    fn lift_examples() {
        let zero = lift_brane(&line(1, 0, "0", "0"), cover(2));
        assert_eq!(zero.lines, vec![line(1, 0, "0", "0")]);

        let half = lift_brane(&line(2, 1, "0", "0"), cover(2));
        assert_eq!(half.lines, vec![line(1, 1, "0", "0"), line(1, 1, "1/2", "0")]);
        assert_eq!(half.base_offsets, vec![Mod1::ZERO, normalize(q("1/2"))]);

        let steep = lift_brane(&line(1, 3, "0", "1/3"), cover(3));
        assert_eq!(steep.lines, vec![line(1, 9, "0", "0")]);
    }

    #[test]
    fn base_offsets_rotate_component_zero() {
        let l = line(6, 5, "1/7", "0");
        let lifted = lift_brane(&l, cover(4));
        let base = &lifted.lines[0];
        for (comp, offset) in lifted.lines.iter().zip(&lifted.base_offsets) {
            // Rotating by δ: y = φ₀(x̂ − δ) must be a lift of comp.
            let x = q("1/5");
            let y = base.phi(x - offset.value());
            assert!(comp.sheet_through(x, y).is_some());
        }
    }

    #[test]
    fn bijection_examples() {
        let l1 = line(2, 1, "0", "0");
        let l2 = line(1, 0, "1/4", "0");
        let check = verify_intersection_bijection(&l1, &l2, cover(2), cover(1)).unwrap();
        assert_eq!(check, BijectionCheck { holds: true, upstairs: 1, downstairs: 1 });

        let trivial = verify_intersection_bijection(&l1, &l2, cover(1), cover(1)).unwrap();
        assert!(trivial.holds);

        assert!(matches!(
            verify_intersection_bijection(&l1, &l2, cover(3), cover(1)),
            Err(Error::NoLift { m: 3, r: 2 })
        ));
    }

    #[test]
    fn lifted_ham_requires_matching_connected_branes() {
        let a: BraneCollection = line(2, 3, "0", "0").into();
        let b: BraneCollection = line(1, 3, "0", "0").into();
        assert!(lifted_ham_equivalent(&a, &a).unwrap());
        assert!(matches!(lifted_ham_equivalent(&a, &b), Err(Error::MismatchedClass(..))));
        let two = a.union(&b);
        assert!(matches!(lifted_ham_equivalent(&two, &a), Err(Error::Precondition(_))));
    }
}
