//! Synthetic low-tubal-rank tensors and random observation masks.
//!
//! All randomness comes from `ChaCha8Rng` (a counter-based stream cipher
//! generator) seeded with the caller's 64-bit seed, so outputs are identical
//! across platforms and runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::t_product;
use crate::error::{Error, Result};
use crate::tensor::{ObservationMask, RealTensor3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthSpec {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub r1: usize,
    pub seed: u64,
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 || self.p == 0 {
            return Err(Error::Range(format!(
                "dimensions must be positive, got {}x{}x{}",
                self.m, self.n, self.p
            )));
        }
        if self.r1 == 0 || self.r1 > self.m.min(self.n) {
            return Err(Error::Range(format!(
                "tubal rank {} outside 1..={}",
                self.r1,
                self.m.min(self.n)
            )));
        }
        Ok(())
    }
}

fn randn(n1: usize, n2: usize, n3: usize, rng: &mut ChaCha8Rng) -> RealTensor3 {
    let data = (0..n1 * n2 * n3)
        .map(|_| rng.sample(StandardNormal))
        .collect();
    RealTensor3::from_vec(n1, n2, n3, data).expect("finite normal samples")
}

/// `M1 * M2` with `M1` (`m x r1 x p`) and `M2` (`r1 x n x p`) standard normal,
/// drawn in that order in storage order.
pub fn synth_lowrank(spec: SynthSpec) -> Result<RealTensor3> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let m1 = randn(spec.m, spec.r1, spec.p, &mut rng);
    let m2 = randn(spec.r1, spec.n, spec.p, &mut rng);
    t_product(&m1, &m2)
}

/// Each entry is observed independently with probability `1 - miss_rate`:
/// a uniform draw `u` in `[0, 1)` per entry, in storage order, is observed
/// iff `u >= miss_rate`.
pub fn gen_mask(
    n1: usize,
    n2: usize,
    n3: usize,
    miss_rate: f64,
    seed: u64,
) -> Result<ObservationMask> {
    if !(0.0..1.0).contains(&miss_rate) {
        return Err(Error::Range(format!(
            "miss rate {miss_rate} outside [0, 1)"
        )));
    }
    if n1 == 0 || n2 == 0 || n3 == 0 {
        return Err(Error::Range(format!(
            "dimensions must be positive, got {n1}x{n2}x{n3}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let flags = (0..n1 * n2 * n3)
        .map(|_| rng.random::<f64>() >= miss_rate)
        .collect();
    ObservationMask::from_vec(n1, n2, n3, flags)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::tubal_rank;

    #[test]
    fn rank_of_construction() {
        let a = synth_lowrank(SynthSpec {
            m: 12,
            n: 12,
            p: 3,
            r1: 5,
            seed: 1,
        })
        .unwrap();
        assert_eq!(tubal_rank(&a, 1e-8).unwrap(), 5);
        let full = synth_lowrank(SynthSpec {
            m: 12,
            n: 12,
            p: 3,
            r1: 12,
            seed: 1,
        })
        .unwrap();
        assert_eq!(tubal_rank(&full, 1e-8).unwrap(), 12);
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let s = SynthSpec {
            m: 4,
            n: 5,
            p: 2,
            r1: 2,
            seed: 42,
        };
        assert_eq!(synth_lowrank(s).unwrap(), synth_lowrank(s).unwrap());
        assert_ne!(
            synth_lowrank(s).unwrap(),
            synth_lowrank(SynthSpec { seed: 43, ..s }).unwrap()
        );
    }

    #[test]
    fn large_shape() {
        let a = synth_lowrank(SynthSpec {
            m: 300,
            n: 300,
            p: 3,
            r1: 250,
            seed: 0,
        })
        .unwrap();
        assert_eq!(a.dims(), (300, 300, 3));
    }

    #[test]
    fn synth_range_errors() {
        let bad = SynthSpec {
            m: 4,
            n: 3,
            p: 2,
            r1: 4,
            seed: 0,
        };
        assert!(matches!(synth_lowrank(bad), Err(Error::Range(_))));
        assert!(matches!(
            synth_lowrank(SynthSpec { r1: 0, ..bad }),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn mask_rates() {
        assert_eq!(
            gen_mask(5, 4, 3, 0.0, 9).unwrap(),
            ObservationMask::full(5, 4, 3)
        );
        assert_eq!(
            gen_mask(5, 4, 3, 0.3, 9).unwrap(),
            gen_mask(5, 4, 3, 0.3, 9).unwrap()
        );
        for seed in 0..5 {
            let f = gen_mask(100, 100, 3, 0.5, seed)
                .unwrap()
                .observed_fraction();
            assert!((0.48..=0.52).contains(&f), "fraction {f}");
        }
        assert!(matches!(gen_mask(2, 2, 2, 1.0, 0), Err(Error::Range(_))));
        assert!(matches!(gen_mask(2, 2, 2, -0.1, 0), Err(Error::Range(_))));
        assert!(matches!(
            gen_mask(2, 2, 2, f64::NAN, 0),
            Err(Error::Range(_))
        ));
    }
}
