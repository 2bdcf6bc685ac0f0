use serde::Serialize;

use super::{SetFamily, SubsetMask};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CopyKind {
    /// Chain of `k-1` sets with two distinct sets directly above its top.
    #[serde(rename = "Y_k")]
    Y,
    /// Chain of `k-1` sets with two distinct sets directly below its bottom.
    #[serde(rename = "Y'_k")]
    YPrime,
}

/// A witness copy on consecutive levels. `chain` is listed by increasing
/// size; `pair` is sorted by mask.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForbiddenCopy {
    pub kind: CopyKind,
    pub chain: Vec<SubsetMask>,
    pub pair: [SubsetMask; 2],
}

impl ForbiddenCopy {
    /// Checks the structural definition against `family`: all sets are
    /// members and distinct, sizes are consecutive, and each link is an
    /// inclusion.
    pub fn is_valid_in(&self, family: &SetFamily, k: u32) -> bool {
        if self.chain.len() + 1 != k as usize || self.pair[0] == self.pair[1] {
            return false;
        }
        let all_members = self
            .chain
            .iter()
            .chain(self.pair.iter())
            .all(|m| family.contains(*m));
        let chain_ok = self
            .chain
            .windows(2)
            .all(|w| w[0].is_subset_of(w[1]) && w[1].size() == w[0].size() + 1);
        let pair_ok = match self.kind {
            CopyKind::Y => {
                let top = *self.chain.last().expect("k >= 2");
                self.pair
                    .iter()
                    .all(|f| top.is_subset_of(*f) && f.size() == top.size() + 1)
            }
            CopyKind::YPrime => {
                let bottom = self.chain[0];
                self.pair
                    .iter()
                    .all(|f| f.is_subset_of(bottom) && f.size() + 1 == bottom.size())
            }
        };
        all_members && chain_ok && pair_ok
    }
}

/// Finds the least `Y_k` copy on consecutive levels, if any.
///
/// Witness order: smallest pair level first, then the chain compared
/// bottom-up by mask, then the pair.
pub fn find_yk_copy(family: &SetFamily, k: u32) -> Option<ForbiddenCopy> {
    assert!(k >= 2, "Y_k needs k >= 2");
    let n = family.n();
    let need = k - 1;
    if family.len() < k as usize + 1 {
        return None;
    }

    // Longest chain of members with consecutive sizes ending at each member,
    // capped at `need`.
    let members = family.members();
    let mut chain = vec![0u32; members.len()];
    for (idx, &m) in members.iter().enumerate() {
        let mut best = 0;
        let mut bits = m.0;
        while bits != 0 && best < need {
            let b = bits & bits.wrapping_neg();
            bits ^= b;
            if let Some(j) = family.index_of(SubsetMask(m.0 ^ b)) {
                best = best.max(chain[j]);
            }
        }
        chain[idx] = (best + 1).min(need);
    }

    let supersets = |m: SubsetMask| {
        (0..n)
            .map(move |b| 1u64 << b)
            .filter(move |b| m.0 & b == 0)
            .map(move |b| SubsetMask(m.0 | b))
            .filter(|s| family.contains(*s))
    };

    for top_level in need..=n {
        let below = top_level - 1;
        let offset = family.level_start[below as usize];
        let mut good: Vec<bool> = family
            .level(below)
            .iter()
            .enumerate()
            .map(|(i, &g)| chain[offset + i] >= need && supersets(g).nth(1).is_some())
            .collect();
        if !good.iter().any(|&g| g) {
            continue;
        }

        // Propagate "can climb to a valid chain top" down to the bottom level.
        let bottom = top_level - need;
        let mut layers = vec![good.clone()];
        for lvl in (bottom..below).rev() {
            let upper_level = lvl + 1;
            let upper_off = family.level_start[upper_level as usize];
            let upper_good = layers.last().expect("nonempty");
            good = family
                .level(lvl)
                .iter()
                .map(|&g| {
                    supersets(g).any(|s| {
                        let j = family.index_of(s).expect("member") - upper_off;
                        upper_good[j]
                    })
                })
                .collect();
            layers.push(good.clone());
        }
        layers.reverse();

        // Greedy least chain, bottom-up.
        let mut picked: Vec<SubsetMask> = Vec::with_capacity(need as usize);
        for (step, layer) in layers.iter().enumerate() {
            let lvl = bottom + step as u32;
            let off = family.level_start[lvl as usize];
            let next = family
                .level(lvl)
                .iter()
                .enumerate()
                .find(|(i, &g)| layer[*i] && picked.last().is_none_or(|p| p.is_subset_of(g)))
                .map(|(i, _)| members[off + i])
                .expect("reachability guarantees a successor");
            picked.push(next);
        }
        let top = *picked.last().expect("need >= 1");
        let mut above = supersets(top).collect::<Vec<_>>();
        above.sort();
        return Some(ForbiddenCopy {
            kind: CopyKind::Y,
            chain: picked,
            pair: [above[0], above[1]],
        });
    }
    None
}

/// Finds a `Y'_k` copy on consecutive levels, if any.
///
/// Computed as the least `Y_k` copy of the complemented family, mapped back.
pub fn find_yk_prime_copy(family: &SetFamily, k: u32) -> Option<ForbiddenCopy> {
    let n = family.n();
    let dual = find_yk_copy(&family.complement(), k)?;
    let chain: Vec<SubsetMask> = dual.chain.iter().rev().map(|m| m.complement(n)).collect();
    let mut pair = dual.pair.map(|m| m.complement(n));
    pair.sort();
    Some(ForbiddenCopy {
        kind: CopyKind::YPrime,
        chain,
        pair,
    })
}

/// True iff the family contains neither `Y_k` nor `Y'_k` on consecutive
/// levels.
pub fn is_admissible(family: &SetFamily, k: u32) -> bool {
    find_yk_copy(family, k).is_none() && find_yk_prime_copy(family, k).is_none()
}
