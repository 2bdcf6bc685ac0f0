use serde::Serialize;

use super::perm::CyclicPerm;
use crate::lattice::{SetFamily, SubsetMask};
use crate::ramus::{BinomialRow, ExactInt};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ElementLabel {
    Empty,
    Full,
    /// `I_t^s`, with `t` in `1..=n`.
    Interval {
        t: u32,
        s: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LatticeElement {
    pub mask: SubsetMask,
    pub level: u32,
    pub label: ElementLabel,
}

/// `upper` covers `lower`: `lower ⊂ upper` and the sizes differ by one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CoverEdge {
    pub upper: usize,
    pub lower: usize,
}

/// The intervals of a cyclic permutation together with `∅` and `[n]`,
/// ordered by inclusion.
///
/// Element ids are level-major: `0` is `∅`, then `I_1^1 ..= I_n^1`,
/// `I_1^2 ..`, and finally `[n]` at id `n(n-1)+1`.
#[derive(Debug, Clone)]
pub struct IntervalLattice {
    n: u32,
    sigma: CyclicPerm,
    elements: Vec<LatticeElement>,
    cover_edges: Vec<CoverEdge>,
}

impl IntervalLattice {
    pub fn new(sigma: CyclicPerm) -> Self {
        let n = sigma.n();
        let mut elements = Vec::with_capacity((n * (n - 1) + 2) as usize);
        elements.push(LatticeElement {
            mask: SubsetMask::EMPTY,
            level: 0,
            label: ElementLabel::Empty,
        });
        for s in 1..n {
            for t in 1..=n {
                elements.push(LatticeElement {
                    mask: sigma.interval(t as i64, s),
                    level: s,
                    label: ElementLabel::Interval { t, s },
                });
            }
        }
        elements.push(LatticeElement {
            mask: SubsetMask::full(n),
            level: n,
            label: ElementLabel::Full,
        });

        let mut lattice = Self {
            n,
            sigma,
            elements,
            cover_edges: Vec::new(),
        };
        let mut edges = Vec::new();
        for s in 1..n {
            for t in 1..=n as i64 {
                let upper = lattice.id(s, t);
                if s == 1 {
                    edges.push(CoverEdge { upper, lower: 0 });
                } else {
                    edges.push(CoverEdge {
                        upper,
                        lower: lattice.id(s - 1, t),
                    });
                    edges.push(CoverEdge {
                        upper,
                        lower: lattice.id(s - 1, t + 1),
                    });
                }
            }
        }
        let top = lattice.top();
        if n == 1 {
            edges.push(CoverEdge {
                upper: top,
                lower: 0,
            });
        } else {
            for t in 1..=n as i64 {
                edges.push(CoverEdge {
                    upper: top,
                    lower: lattice.id(n - 1, t),
                });
            }
        }
        lattice.cover_edges = edges;
        lattice
    }

    pub fn identity(n: u32) -> Self {
        Self::new(CyclicPerm::identity(n))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn sigma(&self) -> &CyclicPerm {
        &self.sigma
    }

    pub fn elements(&self) -> &[LatticeElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn cover_edges(&self) -> &[CoverEdge] {
        &self.cover_edges
    }

    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    /// Id of the level-`s` element starting after position `t`; `s = 0` and
    /// `s = n` give `∅` and `[n]`.
    pub fn id(&self, s: u32, t: i64) -> usize {
        let n = self.n;
        if s == 0 {
            return 0;
        }
        if s >= n {
            return self.top();
        }
        let t = (t - 1).rem_euclid(n as i64) as usize;
        1 + (s as usize - 1) * n as usize + t
    }

    pub fn level(&self, id: usize) -> u32 {
        self.elements[id].level
    }

    pub fn mask(&self, id: usize) -> SubsetMask {
        self.elements[id].mask
    }

    /// Ids of the elements at level `s`.
    pub fn level_ids(&self, s: u32) -> std::ops::Range<usize> {
        let n = self.n as usize;
        match s {
            0 => 0..1,
            s if s >= self.n => self.top()..self.top() + 1,
            s => {
                let start = 1 + (s as usize - 1) * n;
                start..start + n
            }
        }
    }

    pub fn covers(&self, upper: usize, lower: usize) -> bool {
        let (u, l) = (self.elements[upper], self.elements[lower]);
        u.level == l.level + 1 && l.mask.is_subset_of(u.mask)
    }

    /// Lattice elements that are members of `family`, as an id bitmask.
    /// Requires at most 64 elements.
    pub fn member_bits(&self, family: &SetFamily) -> u64 {
        assert!(self.len() <= 64, "member bitmasks need n(n-1)+2 <= 64");
        self.elements
            .iter()
            .enumerate()
            .filter(|(_, e)| family.contains(e.mask))
            .fold(0u64, |acc, (i, _)| acc | 1u64 << i)
    }

    pub fn level_profile(&self, family: &SetFamily) -> LevelProfile {
        let mut x = vec![0u32; self.n as usize + 1];
        for e in &self.elements {
            if family.contains(e.mask) {
                x[e.level as usize] += 1;
            }
        }
        LevelProfile { x }
    }

    /// Profile of the id bitmask `bits`.
    pub fn profile_of_bits(&self, bits: u64) -> LevelProfile {
        let x = (0..=self.n)
            .map(|s| {
                let r = self.level_ids(s);
                let mask = range_mask(r.start, r.end);
                (bits & mask).count_ones()
            })
            .collect();
        LevelProfile { x }
    }

    /// The family formed by the elements in the id bitmask `bits`.
    pub fn family_of_bits(&self, bits: u64) -> SetFamily {
        SetFamily::new(
            self.n,
            (0..self.len())
                .filter(|&i| bits >> i & 1 == 1)
                .map(|i| self.elements[i].mask),
        )
        .expect("lattice elements are subsets of [n]")
    }
}

pub(crate) fn range_mask(start: usize, end: usize) -> u64 {
    let hi = if end >= 64 {
        u64::MAX
    } else {
        (1u64 << end) - 1
    };
    let lo = (1u64 << start) - 1;
    hi & !lo
}

/// `x_0, ..., x_n`: members of a family per level of an interval lattice.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LevelProfile {
    pub x: Vec<u32>,
}

impl LevelProfile {
    pub fn new(x: Vec<u32>) -> Self {
        Self { x }
    }

    pub fn n(&self) -> u32 {
        self.x.len() as u32 - 1
    }

    pub fn total(&self) -> u64 {
        self.x.iter().map(|&v| v as u64).sum()
    }

    /// `x_i + ... + x_{i+len-1}`, ignoring indices past `n`.
    pub fn window_sum(&self, i: u32, len: u32) -> u64 {
        self.x
            .iter()
            .skip(i as usize)
            .take(len as usize)
            .map(|&v| v as u64)
            .sum()
    }

    /// `x_0, x_n <= 1` and `x_i <= n` elsewhere.
    pub fn within_box(&self) -> bool {
        let n = self.n();
        self.x.iter().enumerate().all(|(i, &v)| {
            if i == 0 || i == n as usize {
                v <= 1
            } else {
                v <= n
            }
        })
    }

    /// `|{∅,[n]} ∩ F|·n + sum_{i=1}^{n-1} C(n,i) x_i`.
    pub fn cyclic_objective(&self, binom: &BinomialRow) -> ExactInt {
        let n = self.n();
        let ends = ExactInt::from(self.x[0] + self.x[n as usize]) * n;
        (1..n).fold(ends, |acc, i| {
            acc + binom.get(i as i64) * self.x[i as usize]
        })
    }

    /// `sum_{i=0}^{n} C(n,i) x_i`.
    pub fn binomial_objective(&self, binom: &BinomialRow) -> ExactInt {
        self.x
            .iter()
            .enumerate()
            .map(|(i, &v)| binom.get(i as i64) * v)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::extremal_construction;

    #[test]
    fn element_count() {
        for n in 1..=8 {
            assert_eq!(IntervalLattice::identity(n).len() as u32, n * (n - 1) + 2);
        }
    }

    #[test]
    fn level_three_for_n6() {
        let l = IntervalLattice::identity(6);
        let lvl: Vec<String> = l.level_ids(3).map(|i| l.mask(i).to_line()).collect();
        assert_eq!(lvl, ["2,3,4", "3,4,5", "4,5,6", "1,5,6", "1,2,6", "1,2,3"]);
        // as sets these are {1,2,3}, {2,3,4}, ..., {6,1,2}
        let mut sets: Vec<SubsetMask> = l.level_ids(3).map(|i| l.mask(i)).collect();
        sets.sort();
        let mut expected: Vec<SubsetMask> = (0..6)
            .map(|t| SubsetMask::from_elements((0..3).map(|d| (t + d) % 6 + 1)))
            .collect();
        expected.sort();
        assert_eq!(sets, expected);
    }

    #[test]
    fn two_covers_each_way_on_interior_levels() {
        let l = IntervalLattice::new(CyclicPerm::new(vec![1, 4, 2, 6, 3, 5]).unwrap());
        let n = l.n();
        for s in 1..n {
            for id in l.level_ids(s) {
                let up = l
                    .cover_edges()
                    .iter()
                    .filter(|e| e.lower == id && l.level(e.upper) < n)
                    .count();
                let down = l
                    .cover_edges()
                    .iter()
                    .filter(|e| e.upper == id && l.level(e.lower) > 0)
                    .count();
                if s < n - 1 {
                    assert_eq!(up, 2);
                }
                if s > 1 {
                    assert_eq!(down, 2);
                }
            }
        }
    }

    #[test]
    fn cover_edges_are_exactly_the_inclusions() {
        for n in 2..=6 {
            let l = IntervalLattice::new(CyclicPerm::random(n, &mut rand::thread_rng()));
            let mut listed: Vec<CoverEdge> = l.cover_edges().to_vec();
            listed.sort();
            let mut brute = Vec::new();
            for u in 0..l.len() {
                for w in 0..l.len() {
                    if l.covers(u, w) {
                        brute.push(CoverEdge { upper: u, lower: w });
                    }
                }
            }
            brute.sort();
            assert_eq!(listed, brute, "n={n}");
        }
    }

    #[test]
    fn profile_examples() {
        let l = IntervalLattice::identity(4);
        let f = extremal_construction(4, 3).unwrap();
        assert_eq!(l.level_profile(&f).x, vec![1, 0, 4, 4, 0]);
        let e = SetFamily::empty(4).unwrap();
        assert_eq!(l.level_profile(&e).x, vec![0; 5]);
        let all = SetFamily::new(4, l.elements().iter().map(|e| e.mask)).unwrap();
        assert_eq!(l.level_profile(&all).x, vec![1, 4, 4, 4, 1]);
        assert_eq!(l.profile_of_bits(l.member_bits(&f)), l.level_profile(&f));
    }

    #[test]
    fn objectives() {
        let binom = BinomialRow::new(4);
        let p = LevelProfile::new(vec![1, 0, 4, 4, 0]);
        assert_eq!(p.cyclic_objective(&binom), ExactInt::from(44u32));
        assert_eq!(p.binomial_objective(&binom), ExactInt::from(41u32));
        assert!(p.within_box());
        assert!(!LevelProfile::new(vec![2, 0, 0, 0, 0]).within_box());
        assert_eq!(p.window_sum(1, 3), 8);
        assert_eq!(p.window_sum(3, 5), 4);
    }
}
