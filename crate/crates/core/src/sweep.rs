//! Batch evaluation over many independent instances, and seeded samplers
//! for random valid instances.
//!
//! Every operation in the crate is a pure function, so batches parallelize
//! trivially. With the `parallel` feature (on by default) batches run on the
//! rayon pool; without it [`Execution::Parallel`] falls back to a plain loop.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::brane::LineBrane;
use crate::covering::BaseCover;
use crate::intersect::{determinant, intersect_lines};
use crate::mirror::{verify_extension, ExtensionReport};
use crate::rational::{gcd, Rational};
use crate::surgery::{components, SurgerySpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Applies `f` to every item, preserving order.
pub fn map_batch<T, R, F>(items: &[T], mode: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Tally of an extension-criterion sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExtensionSweep {
    pub total: usize,
    pub extensions: usize,
    pub disagreements: usize,
    pub errors: usize,
}

pub fn extension_sweep(specs: &[SurgerySpec], mode: Execution) -> ExtensionSweep {
    let reports: Vec<Option<ExtensionReport>> = map_batch(specs, mode, |s| verify_extension(s).ok());
    reports.iter().fold(ExtensionSweep { total: specs.len(), ..Default::default() }, |mut acc, r| {
        match r {
            Some(r) => {
                acc.extensions += usize::from(r.verdict);
                acc.disagreements += usize::from(!r.routes_agree());
            }
            None => acc.errors += 1,
        }
        acc
    })
}

/// Bounds for random instances.
#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub max_rank: u32,
    pub max_abs_degree: i64,
    pub max_denom: i128,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_rank: 4, max_abs_degree: 5, max_denom: 12 }
    }
}

/// Deterministic sampler of valid branes and surgery specs.
pub struct Sampler {
    rng: ChaCha8Rng,
    pub bounds: Bounds,
}

impl Sampler {
    pub fn new(seed: u64, bounds: Bounds) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), bounds }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A rational in `[-1, 1)` with denominator at most `max_denom`.
    pub fn rational(&mut self) -> Rational {
        let q = self.rng.gen_range(1..=self.bounds.max_denom);
        let p = self.rng.gen_range(-q..q);
        Rational::new(p, q)
    }

    pub fn line(&mut self) -> LineBrane {
        self.line_with_rank_multiple_of(1)
    }

    /// A coprime line whose rank is a multiple of `k`.
    pub fn line_with_rank_multiple_of(&mut self, k: u32) -> LineBrane {
        loop {
            let r = k * self.rng.gen_range(1..=self.bounds.max_rank.max(1));
            let d = self.rng.gen_range(-self.bounds.max_abs_degree..=self.bounds.max_abs_degree);
            if gcd(i64::from(r), d) == 1 {
                let (c, b) = (self.rational(), self.rational());
                return LineBrane::new(r, d, c, b).expect("coprime");
            }
        }
    }

    /// A pair with `r₁d₂ > r₂d₁`.
    pub fn graded_pair(&mut self) -> (LineBrane, LineBrane) {
        loop {
            let (a, b) = (self.line(), self.line());
            match determinant(&a, &b) {
                0 => continue,
                det if det > 0 => return (a, b),
                _ => return (b, a),
            }
        }
    }

    /// A random surgery spec with non-empty `K`.
    pub fn spec(&mut self) -> SurgerySpec {
        let (l1, l2) = self.graded_pair();
        let n = intersect_lines(&l1, &l2).expect("not parallel").len();
        let k = self.rng.gen_range(1..=n);
        let mut indices: Vec<usize> = (0..n).collect();
        indices.shuffle(&mut self.rng);
        indices.truncate(k);
        let b = self.rational();
        SurgerySpec::from_indices(l1, l2, &indices, b).expect("valid selection")
    }

    /// A spec whose surgery is connected, optionally also with
    /// `gcd(r₁ + r₂, d₁ + d₂) = 1`.
    pub fn connected_spec(&mut self, coprime_sum: bool) -> SurgerySpec {
        loop {
            let spec = self.spec();
            let (l1, l2) = (spec.l1(), spec.l2());
            if coprime_sum && gcd(i64::from(l1.r() + l2.r()), l1.d() + l2.d()) != 1 {
                continue;
            }
            if components(&spec).cycle_count() == 1 {
                return spec;
            }
        }
    }

    /// A non-parallel pair with ranks divisible by the two cover degrees.
    pub fn liftable_pair(&mut self, covers: &[u32]) -> (LineBrane, LineBrane, BaseCover, BaseCover) {
        loop {
            let m1 = *covers.choose(&mut self.rng).expect("non-empty");
            let m2 = *covers.choose(&mut self.rng).expect("non-empty");
            let a = self.line_with_rank_multiple_of(m1);
            let b = self.line_with_rank_multiple_of(m2);
            if determinant(&a, &b) != 0 {
                return (a, b, BaseCover::new(m1).unwrap(), BaseCover::new(m2).unwrap());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_and_parallel_agree() {
        let items: Vec<i64> = (0..500).collect();
        let seq = map_batch(&items, Execution::Sequential, |x| x * x);
        let par = map_batch(&items, Execution::Parallel, |x| x * x);
        assert_eq!(seq, par);
    }

    #[test]
    fn sampler_is_deterministic() {
        let mut a = Sampler::new(7, Bounds::default());
        let mut b = Sampler::new(7, Bounds::default());
        for _ in 0..10 {
            assert_eq!(a.spec(), b.spec());
        }
    }

    #[test]
    fn connected_specs_are_connected() {
        let mut s = Sampler::new(3, Bounds::default());
        for _ in 0..20 {
            let spec = s.connected_spec(true);
            assert_eq!(components(&spec).cycle_count(), 1);
        }
    }

    #[test]
    fn small_extension_sweep_has_no_disagreements() {
        let mut s = Sampler::new(11, Bounds::default());
        let specs: Vec<_> = (0..30).map(|_| s.connected_spec(true)).collect();
        let tally = extension_sweep(&specs, Execution::default());
        assert_eq!(tally.total, 30);
        assert_eq!(tally.errors, 0);
        assert_eq!(tally.disagreements, 0);
    }
}
