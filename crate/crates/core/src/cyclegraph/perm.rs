use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::SubsetMask;

/// A cyclic ordering `a_1, ..., a_n, a_1` of `[n]`, stored in the rotation
/// with `a_1 = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CyclicPerm {
    order: Vec<u32>,
}

impl CyclicPerm {
    /// Accepts any rotation of a permutation of `[n]`.
    pub fn new(order: Vec<u32>) -> Result<Self> {
        let n = order.len();
        if n == 0 || n > 64 {
            return Err(Error::InvalidParams(format!(
                "cyclic permutations need 1 <= n <= 64, got {n}"
            )));
        }
        let mut seen = vec![false; n + 1];
        for &a in &order {
            if a == 0 || a as usize > n || std::mem::replace(&mut seen[a as usize], true) {
                return Err(Error::InvalidParams(format!(
                    "{order:?} is not a permutation of [{n}]"
                )));
            }
        }
        let start = order.iter().position(|&a| a == 1).expect("1 present");
        let mut order = order;
        order.rotate_left(start);
        Ok(Self { order })
    }

    pub fn identity(n: u32) -> Self {
        Self {
            order: (1..=n).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Self {
        let mut rest: Vec<u32> = (2..=n).collect();
        rest.shuffle(rng);
        let mut order = vec![1];
        order.extend(rest);
        Self { order }
    }

    /// All `(n-1)!` cyclic permutations, in lexicographic order.
    pub fn all(n: u32) -> impl Iterator<Item = CyclicPerm> {
        let rest: Vec<u32> = (2..=n).collect();
        let len = rest.len();
        rest.into_iter().permutations(len).map(|tail| {
            let mut order = Vec::with_capacity(tail.len() + 1);
            order.push(1);
            order.extend(tail);
            CyclicPerm { order }
        })
    }

    pub fn n(&self) -> u32 {
        self.order.len() as u32
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    /// `a_j` for any integer `j`, indices taken modulo `n` onto `1..=n`.
    pub fn at(&self, j: i64) -> u32 {
        let n = self.order.len() as i64;
        self.order[(j - 1).rem_euclid(n) as usize]
    }

    /// `I_t^s = {a_{t+1}, ..., a_{t+s}}`.
    pub fn interval(&self, t: i64, s: u32) -> SubsetMask {
        SubsetMask::from_elements((1..=s as i64).map(|d| self.at(t + d)))
    }

    /// Whether `set` is an interval of this cyclic order (∅ and `[n]`
    /// included).
    pub fn has_interval(&self, set: SubsetMask) -> bool {
        let n = self.order.len();
        let size = set.size() as usize;
        if size == 0 || size == n {
            return true;
        }
        // A proper nonempty interval has exactly one entry point going around
        // the cycle.
        let entries = (0..n)
            .filter(|&j| !set.contains(self.order[j]) && set.contains(self.order[(j + 1) % n]))
            .count();
        entries == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_rotation() {
        let p = CyclicPerm::new(vec![3, 4, 1, 2]).unwrap();
        assert_eq!(p.order(), &[1, 2, 3, 4]);
        assert!(CyclicPerm::new(vec![1, 1, 2]).is_err());
        assert!(CyclicPerm::new(vec![1, 4, 2]).is_err());
    }

    #[test]
    fn counts_are_factorial() {
        assert_eq!(CyclicPerm::all(1).count(), 1);
        assert_eq!(CyclicPerm::all(5).count(), 24);
        assert_eq!(CyclicPerm::all(7).count(), 720);
    }

    #[test]
    fn intervals_wrap() {
        let p = CyclicPerm::identity(6);
        assert_eq!(p.interval(5, 3), SubsetMask::from_elements([6, 1, 2]));
        assert_eq!(p.interval(0, 2), SubsetMask::from_elements([1, 2]));
        assert_eq!(p.interval(-1, 2), SubsetMask::from_elements([6, 1]));
        assert!(p.has_interval(SubsetMask::from_elements([5, 6, 1])));
        assert!(!p.has_interval(SubsetMask::from_elements([1, 3])));
    }

    #[test]
    fn interval_membership_brute_force() {
        // Oracle: a set is an interval iff it equals some I_t^s.
        for p in CyclicPerm::all(5) {
            for m in 0..32u64 {
                let set = SubsetMask(m);
                let listed = set.size() == 0
                    || set.size() == 5
                    || (1..=5).any(|t| p.interval(t, set.size()) == set);
                assert_eq!(p.has_interval(set), listed);
            }
        }
    }
}
