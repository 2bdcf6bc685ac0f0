//! Forbidden copies inside a fixed universe of at most 64 subsets, encoded as
//! bitmasks over universe indices. Shared by the interval-lattice verifiers
//! and the exact search.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::lattice::SubsetMask;

/// Every `Y_k` and `Y'_k` copy on consecutive levels among `universe`,
/// indexed by the highest universe index the copy uses.
#[derive(Debug, Clone)]
pub struct CopyTable {
    universe: Vec<SubsetMask>,
    by_last: Vec<Vec<u64>>,
    count: usize,
}

impl CopyTable {
    pub fn new(universe: &[SubsetMask], k: u32) -> Result<Self> {
        if universe.len() > 64 {
            return Err(Error::CapExceeded(format!(
                "copy tables hold at most 64 sets, got {}",
                universe.len()
            )));
        }
        if k < 2 {
            return Err(Error::InvalidParams(format!("k must be >= 2, got {k}")));
        }
        let index: HashMap<u64, usize> =
            universe.iter().enumerate().map(|(i, m)| (m.0, i)).collect();
        let mut copies = Vec::new();
        collect_y(universe, &index, k, false, &mut copies);
        collect_y(universe, &index, k, true, &mut copies);
        copies.sort_unstable();
        copies.dedup();

        let mut by_last = vec![Vec::new(); universe.len()];
        for &c in &copies {
            let last = 63 - c.leading_zeros() as usize;
            by_last[last].push(c);
        }
        Ok(Self {
            universe: universe.to_vec(),
            by_last,
            count: copies.len(),
        })
    }

    pub fn universe(&self) -> &[SubsetMask] {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    pub fn copy_count(&self) -> usize {
        self.count
    }

    /// Whether adding index `e` to `chosen` completes a copy whose other
    /// members all have index below `e`.
    #[inline]
    pub fn completes_copy(&self, chosen: u64, e: usize) -> bool {
        let with = chosen | 1u64 << e;
        self.by_last[e].iter().any(|&c| c & !with == 0)
    }

    pub fn is_admissible(&self, chosen: u64) -> bool {
        (0..self.universe.len())
            .filter(|&e| chosen >> e & 1 == 1)
            .all(|e| !self.completes_copy(chosen & ((1u64 << e) - 1), e))
    }

    /// All copies, in no particular order.
    pub fn copies(&self) -> impl Iterator<Item = u64> + '_ {
        self.by_last.iter().flatten().copied()
    }
}

fn collect_y(
    universe: &[SubsetMask],
    index: &HashMap<u64, usize>,
    k: u32,
    dual: bool,
    out: &mut Vec<u64>,
) {
    // Y_k: pair one level above `g`, chain going down. Y'_k: mirrored.
    let neighbours = |m: SubsetMask, up: bool| -> Vec<usize> {
        let mut v = Vec::new();
        for b in 0..64 {
            let bit = 1u64 << b;
            let next = if up {
                if m.0 & bit != 0 {
                    continue;
                }
                m.0 | bit
            } else {
                if m.0 & bit == 0 {
                    continue;
                }
                m.0 ^ bit
            };
            if let Some(&j) = index.get(&next) {
                v.push(j);
            }
        }
        v
    };
    for (g, &gm) in universe.iter().enumerate() {
        let pair_side = neighbours(gm, !dual);
        if pair_side.len() < 2 {
            continue;
        }
        let mut chains = Vec::new();
        extend_chain(
            universe,
            &neighbours,
            g,
            1u64 << g,
            k - 2,
            dual,
            &mut chains,
        );
        for chain in chains {
            for (a, &p) in pair_side.iter().enumerate() {
                for &q in &pair_side[a + 1..] {
                    out.push(chain | 1u64 << p | 1u64 << q);
                }
            }
        }
    }
}

fn extend_chain(
    universe: &[SubsetMask],
    neighbours: &dyn Fn(SubsetMask, bool) -> Vec<usize>,
    at: usize,
    acc: u64,
    remaining: u32,
    dual: bool,
    out: &mut Vec<u64>,
) {
    if remaining == 0 {
        out.push(acc);
        return;
    }
    for next in neighbours(universe[at], dual) {
        extend_chain(
            universe,
            neighbours,
            next,
            acc | 1u64 << next,
            remaining - 1,
            dual,
            out,
        );
    }
}

/// Wall-clock budget shared by parallel workers.
#[derive(Debug)]
pub struct Budget {
    deadline: Option<Instant>,
    limit: Option<Duration>,
    expired: AtomicBool,
    nodes: AtomicU64,
}

impl Budget {
    pub fn new(limit: Option<Duration>) -> Self {
        Self {
            deadline: limit.map(|d| Instant::now() + d),
            limit,
            expired: AtomicBool::new(false),
            nodes: AtomicU64::new(0),
        }
    }

    pub fn unlimited() -> Self {
        Self::new(None)
    }

    /// Records `n` visited nodes; returns false once the deadline passed.
    pub fn tick(&self, n: u64) -> bool {
        self.nodes.fetch_add(n, Ordering::Relaxed);
        if self.expired.load(Ordering::Relaxed) {
            return false;
        }
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                self.expired.store(true, Ordering::Relaxed);
                return false;
            }
        }
        true
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    pub fn check(&self) -> Result<()> {
        if self.expired.load(Ordering::Relaxed) {
            Err(Error::Timeout(self.limit.unwrap_or_default()))
        } else {
            Ok(())
        }
    }
}

/// Nodes between deadline checks.
pub(crate) const TICK: u64 = 1 << 14;

/// A partial assignment of the first `next` universe indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Prefix {
    pub chosen: u64,
    pub next: usize,
}

/// Feasible assignments of the first `depth` indices, in include-first DFS
/// order. `keep` may reject a partial assignment (and its subtree).
pub(crate) fn split_prefixes(
    table: &CopyTable,
    depth: usize,
    keep: &dyn Fn(Prefix) -> bool,
) -> (Vec<Prefix>, u64) {
    let mut out = Vec::new();
    let mut pruned = 0;
    fn rec(
        table: &CopyTable,
        p: Prefix,
        depth: usize,
        keep: &dyn Fn(Prefix) -> bool,
        out: &mut Vec<Prefix>,
        pruned: &mut u64,
    ) {
        if !keep(p) {
            return;
        }
        if p.next == depth {
            out.push(p);
            return;
        }
        let e = p.next;
        if table.completes_copy(p.chosen, e) {
            *pruned += 1;
        } else {
            let inc = Prefix {
                chosen: p.chosen | 1u64 << e,
                next: e + 1,
            };
            rec(table, inc, depth, keep, out, pruned);
        }
        let exc = Prefix {
            chosen: p.chosen,
            next: e + 1,
        };
        rec(table, exc, depth, keep, out, pruned);
    }
    rec(
        table,
        Prefix { chosen: 0, next: 0 },
        depth.min(table.len()),
        keep,
        &mut out,
        &mut pruned,
    );
    (out, pruned)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{is_admissible, SetFamily};

    fn power_set(n: u32) -> Vec<SubsetMask> {
        let mut v: Vec<SubsetMask> = (0..1u64 << n).map(SubsetMask).collect();
        v.sort_by_key(|m| (m.size(), m.0));
        v
    }

    #[test]
    fn y3_count_in_b3() {
        // Chain ∅ ⊂ {a} with both 2-sets above {a}: one per a. Dually 3 more.
        let t = CopyTable::new(&power_set(3), 3).unwrap();
        assert_eq!(t.copy_count(), 6);
    }

    #[test]
    fn table_agrees_with_detectors_on_b3_subfamilies() {
        let universe = power_set(3);
        for k in 2..=4 {
            let t = CopyTable::new(&universe, k).unwrap();
            for chosen in 0u64..1 << 8 {
                let fam = SetFamily::new(
                    3,
                    (0..8).filter(|i| chosen >> i & 1 == 1).map(|i| universe[i]),
                )
                .unwrap();
                assert_eq!(
                    t.is_admissible(chosen),
                    is_admissible(&fam, k),
                    "k={k} {fam:?}"
                );
            }
        }
    }

    #[test]
    fn prefixes_are_in_dfs_order() {
        let t = CopyTable::new(&power_set(3), 3).unwrap();
        let (p, _) = split_prefixes(&t, 3, &|_| true);
        let masks: Vec<u64> = p.iter().map(|p| p.chosen).collect();
        assert_eq!(
            masks,
            vec![0b111, 0b011, 0b101, 0b001, 0b110, 0b010, 0b100, 0]
        );
    }

    #[test]
    fn rejects_large_universe() {
        let u = power_set(7);
        assert!(CopyTable::new(&u, 3).is_err());
    }
}
