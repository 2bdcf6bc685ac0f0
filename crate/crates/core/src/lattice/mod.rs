//! Families of subsets of `[n]` and detection of `Y_k` / `Y'_k` on
//! consecutive levels.

mod detect;
mod format;

pub use detect::{find_yk_copy, find_yk_prime_copy, is_admissible, CopyKind, ForbiddenCopy};
pub use format::{parse_family, render_family};

use std::fmt;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ramus::RamusParams;

/// Largest ground set a [`SetFamily`] supports. Membership is a dense bitmap
/// over all `2^n` subsets.
pub const MAX_FAMILY_N: u32 = 24;

/// A subset of `[n]`; element `i` is bit `i - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetMask(pub u64);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn full(n: u32) -> Self {
        SubsetMask(low_bits(n))
    }

    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I) -> Self {
        SubsetMask(
            elements
                .into_iter()
                .fold(0u64, |acc, e| acc | 1u64 << (e - 1)),
        )
    }

    pub fn size(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, element: u32) -> bool {
        element >= 1 && self.0 >> (element - 1) & 1 == 1
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn complement(self, n: u32) -> Self {
        SubsetMask(!self.0 & low_bits(n))
    }

    /// Elements in increasing order, 1-based.
    pub fn elements(self) -> impl Iterator<Item = u32> {
        let bits = self.0;
        (0..64u32)
            .filter(move |b| bits >> b & 1 == 1)
            .map(|b| b + 1)
    }

    /// Line representation: `1,3,4`, or `-` for the empty set.
    pub fn to_line(self) -> String {
        if self.0 == 0 {
            return "-".to_string();
        }
        self.elements()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

impl Serialize for SubsetMask {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_line())
    }
}

pub(crate) fn low_bits(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A deduplicated family of subsets of `[n]`, indexed by level.
///
/// Members are stored sorted by `(size, mask)`; `level(s)` is a contiguous
/// slice of that order. Immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct SetFamily {
    n: u32,
    members: Vec<SubsetMask>,
    level_start: Vec<usize>,
    present: Vec<u64>,
}

impl SetFamily {
    pub fn new<I: IntoIterator<Item = SubsetMask>>(n: u32, members: I) -> Result<Self> {
        if n > MAX_FAMILY_N {
            return Err(Error::CapExceeded(format!(
                "set families support n <= {MAX_FAMILY_N}, got {n}"
            )));
        }
        let full = low_bits(n);
        let mut members: Vec<SubsetMask> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|m| m.0 & !full != 0) {
            return Err(Error::InvalidParams(format!(
                "subset {bad} is not contained in [{n}]"
            )));
        }
        members.sort_by_key(|m| (m.size(), m.0));
        members.dedup();

        let mut level_start = vec![0usize; n as usize + 2];
        for m in &members {
            level_start[m.size() as usize + 1] += 1;
        }
        for s in 1..level_start.len() {
            level_start[s] += level_start[s - 1];
        }
        let mut present = vec![0u64; (1usize << n).div_ceil(64)];
        for m in &members {
            present[(m.0 >> 6) as usize] |= 1u64 << (m.0 & 63);
        }
        Ok(Self {
            n,
            members,
            level_start,
            present,
        })
    }

    pub fn empty(n: u32) -> Result<Self> {
        Self::new(n, std::iter::empty())
    }

    /// Every subset of `[n]`.
    pub fn power_set(n: u32) -> Result<Self> {
        if n > MAX_FAMILY_N {
            return Err(Error::CapExceeded(format!("power set of [{n}]")));
        }
        Self::new(n, (0..1u64 << n).map(SubsetMask))
    }

    /// Each subset of `[n]` independently with probability 1/2.
    pub fn random<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Result<Self> {
        let members: Vec<SubsetMask> = (0..1u64 << n)
            .filter(|_| rng.gen_bool(0.5))
            .map(SubsetMask)
            .collect();
        Self::new(n, members)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = SubsetMask> + '_ {
        self.members.iter().copied()
    }

    /// Members of size `s`, in increasing mask order.
    pub fn level(&self, s: u32) -> &[SubsetMask] {
        if s > self.n {
            return &[];
        }
        let s = s as usize;
        &self.members[self.level_start[s]..self.level_start[s + 1]]
    }

    /// Position of `m` in [`Self::members`].
    pub fn index_of(&self, m: SubsetMask) -> Option<usize> {
        if !self.contains(m) {
            return None;
        }
        let s = m.size() as usize;
        let lvl = &self.members[self.level_start[s]..self.level_start[s + 1]];
        lvl.binary_search(&m).ok().map(|i| i + self.level_start[s])
    }

    pub fn contains(&self, m: SubsetMask) -> bool {
        if m.0 & !low_bits(self.n) != 0 {
            return false;
        }
        self.present[(m.0 >> 6) as usize] >> (m.0 & 63) & 1 == 1
    }

    /// `{[n] \ F : F in family}`.
    pub fn complement(&self) -> SetFamily {
        let n = self.n;
        SetFamily::new(n, self.iter().map(|m| m.complement(n))).expect("same ground set")
    }

    /// Number of members at each level `0..=n`.
    pub fn level_sizes(&self) -> Vec<usize> {
        (0..=self.n).map(|s| self.level(s).len()).collect()
    }

    /// Members rendered in the line format, in storage order.
    pub fn lines(&self) -> Vec<String> {
        self.iter().map(SubsetMask::to_line).collect()
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SetFamily")
            .field("n", &self.n)
            .field("members", &self.lines())
            .finish()
    }
}

impl Serialize for SetFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.lines().serialize(s)
    }
}

/// All subsets of `[n]` whose size is not congruent to `r` modulo `k`.
pub fn residue_avoiding_family(n: u32, k: u32, r: u32) -> Result<SetFamily> {
    if n > MAX_FAMILY_N {
        return Err(Error::CapExceeded(format!("power set of [{n}]")));
    }
    if k == 0 {
        return Err(Error::InvalidParams("k must be positive".into()));
    }
    let r = r % k;
    SetFamily::new(
        n,
        (0..1u64 << n).map(SubsetMask).filter(|m| m.size() % k != r),
    )
}

/// The residue-avoiding family for `r = m`, of size `2^n - S(n,k,m)`.
pub fn extremal_construction(n: u32, k: u32) -> Result<SetFamily> {
    if k < 3 {
        return Err(Error::InvalidParams(format!(
            "the construction is stated for k >= 3, got k={k}"
        )));
    }
    let params = RamusParams::new(n, k)?;
    residue_avoiding_family(n, k, params.m())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ramus::extremal_value;

    fn fam(n: u32, sets: &[&[u32]]) -> SetFamily {
        SetFamily::new(
            n,
            sets.iter()
                .map(|s| SubsetMask::from_elements(s.iter().copied())),
        )
        .unwrap()
    }

    #[test]
    fn family_indexing() {
        let f = fam(3, &[&[1, 2], &[], &[1], &[1, 3], &[1]]);
        assert_eq!(f.len(), 4);
        assert_eq!(f.level_sizes(), vec![1, 1, 2, 0]);
        assert_eq!(f.level(2), &[SubsetMask(0b011), SubsetMask(0b101)]);
        assert_eq!(f.index_of(SubsetMask(0b101)), Some(3));
        assert_eq!(f.index_of(SubsetMask(0b110)), None);
        assert!(f.contains(SubsetMask::EMPTY));
        assert!(!f.contains(SubsetMask(0b1000)));
    }

    #[test]
    fn rejects_out_of_range_members() {
        assert!(SetFamily::new(2, [SubsetMask(0b100)]).is_err());
        assert!(SetFamily::empty(MAX_FAMILY_N + 1).is_err());
    }

    #[test]
    fn mask_helpers() {
        let m = SubsetMask::from_elements([1, 3, 4]);
        assert_eq!(m.to_line(), "1,3,4");
        assert_eq!(SubsetMask::EMPTY.to_line(), "-");
        assert_eq!(m.complement(5).to_line(), "2,5");
        assert_eq!(m.size(), 3);
        assert!(m.contains(3) && !m.contains(2) && !m.contains(0));
    }

    #[test]
    fn construction_examples() {
        let f = extremal_construction(3, 3).unwrap();
        assert_eq!(f.len(), 6);
        assert_eq!(f.level_sizes(), vec![0, 3, 3, 0]);
        assert_eq!(extremal_construction(6, 3).unwrap().len(), 43);
        let f = extremal_construction(4, 4).unwrap();
        assert_eq!(f.len(), 14);
        assert!(!f.contains(SubsetMask::EMPTY) && !f.contains(SubsetMask::full(4)));
        assert!(extremal_construction(4, 2).is_err());
        assert!(extremal_construction(3, 4).is_err());
    }

    #[test]
    fn construction_is_admissible_and_sized() {
        for n in 3..=10 {
            for k in 3..=n {
                let f = extremal_construction(n, k).unwrap();
                let p = RamusParams::new(n, k).unwrap();
                assert_eq!(crate::ramus::ExactInt::from(f.len()), extremal_value(p));
                assert!(is_admissible(&f, k), "n={n} k={k}");
            }
        }
    }
}
