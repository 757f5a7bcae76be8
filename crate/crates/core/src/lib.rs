//! Exact computations for semi-flat SYZ mirror symmetry on the 2-torus.
//!
//! Lagrangian multi-sections of `T² → S¹` with `U(1)` local systems are
//! built as exact piecewise-linear graphs ([`brane`]), intersected
//! ([`intersect`]), surgered at intersection points ([`surgery`]), and sent
//! to factor-of-automorphy data for their mirror bundles on the elliptic
//! curve ([`mirror`]). [`covering`] handles cyclic base covers and
//! lifted-Hamiltonian equivalence. All arithmetic is over the rationals.

pub mod brane;
pub mod covering;
pub mod error;
pub mod intersect;
pub mod mirror;
pub mod rational;
pub mod surgery;
pub mod sweep;

pub use brane::{eval_phi, homology_class, line_to_pl, BraneCollection, LineBrane, PLMultiSection};
pub use covering::{lift_brane, lifted_ham_equivalent, verify_intersection_bijection, BaseCover, LiftedBrane};
pub use error::{Error, Result};
pub use intersect::{floer_generators, grade_points, intersect_lines, FloerGeneratorSet, IntersectionPoint};
pub use mirror::{
    det_class, gauge_equivalent_constant, is_isomorphic, self_extension_check, split_flat, syz_transform,
    verify_extension, ConstantFactor, DetClass, ExtensionReport, MirrorBundle, Summand,
};
pub use rational::{normalize, Mod1, Rational};
pub use surgery::{
    area_integral, components, self_intersections, surger, surgery_residue, StrandPermutation, SurgerySpec,
};
