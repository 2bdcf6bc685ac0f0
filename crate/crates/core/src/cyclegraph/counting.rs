use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::perm::CyclicPerm;
use crate::error::{Error, Result};
use crate::lattice::{SetFamily, SubsetMask};
use crate::ramus::{binomial, ExactInt};

/// Largest `n` for which [`double_count`] enumerates all cyclic permutations.
pub const DOUBLE_COUNT_CAP: u32 = 8;

/// `φ_F`: `C(n,|F|)` for proper nonempty `F`, and `n` for `∅` and `[n]`.
pub fn phi_weight(set: SubsetMask, n: u32) -> ExactInt {
    let s = set.size();
    if s == 0 || s == n {
        ExactInt::from(n)
    } else {
        binomial(n, s as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleCount {
    pub n: u32,
    pub family_size: usize,
    /// Sum of `φ_F` over cyclic permutations and members that are intervals.
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub lhs: ExactInt,
    /// `|F| · n!`.
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub rhs: ExactInt,
}

impl DoubleCount {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn double_count(family: &SetFamily) -> Result<DoubleCount> {
    double_count_capped(family, DOUBLE_COUNT_CAP)
}

/// Evaluates both sides of the cyclic double count by enumerating every
/// cyclic permutation of `[n]`.
pub fn double_count_capped(family: &SetFamily, cap: u32) -> Result<DoubleCount> {
    let n = family.n();
    if n > cap {
        return Err(Error::CapExceeded(format!(
            "double count enumerates (n-1)! permutations; n={n} exceeds cap {cap}"
        )));
    }
    let phis: Vec<ExactInt> = family.iter().map(|f| phi_weight(f, n)).collect();
    let mut lhs = ExactInt::default();
    for sigma in CyclicPerm::all(n) {
        for (f, phi) in family.iter().zip(&phis) {
            if sigma.has_interval(f) {
                lhs += phi;
            }
        }
    }
    let factorial: ExactInt = (1..=n).fold(ExactInt::one(), |acc, i| acc * i);
    Ok(DoubleCount {
        n,
        family_size: family.len(),
        lhs,
        rhs: factorial * family.len(),
    })
}

/// Double counts of `samples` random families over `[n]` drawn from a
/// ChaCha8 stream seeded with `seed`.
pub fn seeded_double_counts(n: u32, samples: usize, seed: u64) -> Result<Vec<DoubleCount>> {
    if n > DOUBLE_COUNT_CAP {
        return Err(Error::CapExceeded(format!(
            "double count enumerates (n-1)! permutations; n={n} exceeds cap {DOUBLE_COUNT_CAP}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| double_count(&SetFamily::random(n, &mut rng)?))
        .collect()
}
