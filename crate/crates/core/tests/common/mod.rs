//! Shared test oracles. Nothing here calls into the detectors under test.

#![allow(dead_code)]

use itertools::Itertools;
use lac_core::{SetFamily, SubsetMask};
use rand::seq::SliceRandom;
use rand::Rng;

fn subset(a: SubsetMask, b: SubsetMask) -> bool {
    a.0 & !b.0 == 0
}

/// Whether the `k+1` sets form `Y_k` on consecutive levels: a chain of
/// `k-1` sets with sizes `s, s+1, ..., s+k-2`, both remaining sets of size
/// `s+k-1` containing the top of the chain.
fn is_y(sets: &[SubsetMask], k: usize) -> bool {
    let mut v = sets.to_vec();
    v.sort_by_key(|m| (m.size(), m.0));
    let (chain, tops) = v.split_at(k - 1);
    let s = chain[0].size();
    chain
        .iter()
        .enumerate()
        .all(|(i, c)| c.size() == s + i as u32)
        && chain.windows(2).all(|w| subset(w[0], w[1]))
        && tops
            .iter()
            .all(|t| t.size() == s + k as u32 - 1 && subset(chain[k - 2], *t))
}

fn flip(sets: &[SubsetMask], n: u32) -> Vec<SubsetMask> {
    sets.iter()
        .map(|m| SubsetMask(!m.0 & ((1u64 << n) - 1)))
        .collect()
}

/// Brute force over every `(k+1)`-subset of the members.
pub fn brute_has_y(family: &SetFamily, k: u32) -> bool {
    family
        .members()
        .iter()
        .copied()
        .combinations(k as usize + 1)
        .any(|c| is_y(&c, k as usize))
}

/// `Y'_k` is `Y_k` in the complemented family.
pub fn brute_has_y_prime(family: &SetFamily, k: u32) -> bool {
    let n = family.n();
    family
        .members()
        .iter()
        .copied()
        .combinations(k as usize + 1)
        .any(|c| is_y(&flip(&c, n), k as usize))
}

/// A family with at most `max_members` members over `[n]`: either uniform
/// subsets, or subsets drawn from `k+1` consecutive levels so that copies
/// are common.
pub fn random_family<R: Rng>(rng: &mut R, n: u32, k: u32, max_members: usize) -> SetFamily {
    let all: Vec<SubsetMask> = (0..1u64 << n).map(SubsetMask).collect();
    let pool: Vec<SubsetMask> = if rng.gen_bool(0.5) {
        all
    } else {
        let lo = rng.gen_range(0..=n.saturating_sub(k));
        all.into_iter()
            .filter(|m| (lo..=lo + k).contains(&m.size()))
            .collect()
    };
    let size = rng.gen_range(0..=max_members.min(pool.len()));
    let members: Vec<SubsetMask> = pool.choose_multiple(rng, size).copied().collect();
    SetFamily::new(n, members).expect("valid subsets")
}
