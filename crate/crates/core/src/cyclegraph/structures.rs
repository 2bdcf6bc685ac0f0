//! Edge weights and the small anchored structures used to bound `k`
//! consecutive levels of an interval lattice: the rooted `Y_k(j)` near the
//! bottom, and the ladder-shaped `X_k` with its cherry and fork in the
//! middle.

use std::collections::BTreeMap;

use serde::Serialize;

use super::interval::{CoverEdge, IntervalLattice};
use crate::error::{Error, Result};
use crate::lattice::SetFamily;

fn check_window(lattice: &IntervalLattice, i: u32, k: u32) -> Result<()> {
    if k < 3 {
        return Err(Error::InvalidParams(format!("need k >= 3, got {k}")));
    }
    if i + k >= lattice.n() {
        return Err(Error::InvalidParams(format!(
            "window levels {}..={} must lie inside 1..={}",
            i + 1,
            i + k,
            lattice.n() - 1
        )));
    }
    Ok(())
}

/// `ψ(e)` for an edge whose upper endpoint sits at `upper_level`, inside the
/// window of levels `i+1 ..= i+k`.
pub fn psi_value(upper_level: u32, upper_in: bool, lower_in: bool, i: u32, k: u32) -> Result<u8> {
    if k < 3 {
        return Err(Error::InvalidParams(format!("ψ needs k >= 3, got {k}")));
    }
    if upper_level < i + 2 || upper_level > i + k {
        return Err(Error::EdgeOutsideWindow {
            upper_level,
            lo: i + 1,
            hi: i + k,
        });
    }
    Ok(psi_unchecked(upper_level, upper_in, lower_in, i, k))
}

#[inline]
pub(crate) fn psi_unchecked(
    upper_level: u32,
    upper_in: bool,
    lower_in: bool,
    i: u32,
    k: u32,
) -> u8 {
    match (upper_in, lower_in) {
        (true, true) | (false, false) => 0,
        (true, false) if upper_level == i + k => 0,
        (false, true) if upper_level == i + k => 2,
        (false, true) if upper_level == i + 2 => 0,
        (true, false) if upper_level == i + 2 => 2,
        _ => 1,
    }
}

/// `ψ` of a lattice edge with respect to `family`.
pub fn psi_weight(
    lattice: &IntervalLattice,
    edge: CoverEdge,
    family: &SetFamily,
    i: u32,
    k: u32,
) -> Result<u8> {
    psi_value(
        lattice.level(edge.upper),
        family.contains(lattice.mask(edge.upper)),
        family.contains(lattice.mask(edge.lower)),
        i,
        k,
    )
}

/// Edges of the lattice with both endpoints in levels `i+1 ..= i+k`.
pub fn window_edges(lattice: &IntervalLattice, i: u32, k: u32) -> Vec<CoverEdge> {
    lattice
        .cover_edges()
        .iter()
        .copied()
        .filter(|e| {
            let l = lattice.level(e.upper);
            l >= i + 2 && l <= i + k
        })
        .collect()
}

/// `Y_k(j) = {∅, I_j^1, ..., I_j^{k-1}, I_{j-1}^{k-1}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct YkAnchor {
    pub j: u32,
    pub elements: Vec<usize>,
}

pub fn enumerate_yk_anchors(lattice: &IntervalLattice, k: u32) -> Result<Vec<YkAnchor>> {
    let n = lattice.n();
    if k < 3 || k > n {
        return Err(Error::InvalidParams(format!(
            "need 3 <= k <= n, got k={k}, n={n}"
        )));
    }
    Ok((1..=n)
        .map(|j| {
            let t = j as i64;
            let mut elements = vec![0];
            elements.extend((1..k).map(|s| lattice.id(s, t)));
            elements.push(lattice.id(k - 1, t - 1));
            YkAnchor { j, elements }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum XkVariant {
    /// `{I_{t+1}^{i+1}, I_t^{i+1}, I_t^{i+2}, ..., I_t^{i+k}, I_{t-1}^{i+k}}`
    Left,
    /// `{I_{t-1}^{i+1}, I_t^{i+1}, I_{t-1}^{i+2}, I_{t-2}^{i+3}, ..., I_{t-k+1}^{i+k}, I_{t-k+2}^{i+k}}`
    Right,
}

/// A middle element with its two neighbours on the adjacent level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Triple {
    pub middle: usize,
    pub neighbours: [usize; 2],
}

impl Triple {
    /// 1, 2 or 3 when the middle is in and both, one or no neighbours are;
    /// 4 when the middle is out.
    pub(crate) fn grade(&self, contains: &dyn Fn(usize) -> bool) -> u8 {
        if !contains(self.middle) {
            return 4;
        }
        match self.neighbours.iter().filter(|&&v| contains(v)).count() {
            2 => 1,
            1 => 2,
            _ => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XkStructure {
    pub variant: XkVariant,
    pub i: u32,
    pub t: u32,
    /// The `k+2` element ids, in the listed order.
    pub elements: Vec<usize>,
    /// Top triple: middle at level `i+k-1`, neighbours at level `i+k`.
    pub cherry: Triple,
    /// Bottom triple: middle at level `i+2`, neighbours at level `i+1`.
    pub fork: Triple,
    pub edges: Vec<CoverEdge>,
}

impl XkStructure {
    /// Cherry type in `1..=4`.
    pub fn cherry_type(&self, contains: &dyn Fn(usize) -> bool) -> u8 {
        self.cherry.grade(contains)
    }

    /// Fork type in `5..=8`.
    pub fn fork_type(&self, contains: &dyn Fn(usize) -> bool) -> u8 {
        self.fork.grade(contains) + 4
    }

    pub fn classify_cherry(&self, lattice: &IntervalLattice, family: &SetFamily) -> u8 {
        self.cherry_type(&|id| family.contains(lattice.mask(id)))
    }

    pub fn classify_fork(&self, lattice: &IntervalLattice, family: &SetFamily) -> u8 {
        self.fork_type(&|id| family.contains(lattice.mask(id)))
    }

    /// Elements at levels `i+2` and `i+k-1` (one element when `k = 3`).
    pub fn inner_ends(&self) -> Vec<usize> {
        let mut v = vec![self.fork.middle, self.cherry.middle];
        v.dedup();
        v
    }
}

/// All `2n` `X_k` structures for the window of levels `i+1 ..= i+k`.
pub fn enumerate_xk(lattice: &IntervalLattice, i: u32, k: u32) -> Result<Vec<XkStructure>> {
    check_window(lattice, i, k)?;
    let n = lattice.n();
    let mut out = Vec::with_capacity(2 * n as usize);
    for variant in [XkVariant::Left, XkVariant::Right] {
        for t in 1..=n {
            let ti = t as i64;
            let (elements, fork, cherry) = match variant {
                XkVariant::Left => {
                    let mut e = vec![lattice.id(i + 1, ti + 1), lattice.id(i + 1, ti)];
                    e.extend((2..=k).map(|j| lattice.id(i + j, ti)));
                    e.push(lattice.id(i + k, ti - 1));
                    let fork = Triple {
                        middle: lattice.id(i + 2, ti),
                        neighbours: [lattice.id(i + 1, ti + 1), lattice.id(i + 1, ti)],
                    };
                    let cherry = Triple {
                        middle: lattice.id(i + k - 1, ti),
                        neighbours: [lattice.id(i + k, ti), lattice.id(i + k, ti - 1)],
                    };
                    (e, fork, cherry)
                }
                XkVariant::Right => {
                    let kk = k as i64;
                    let mut e = vec![lattice.id(i + 1, ti - 1), lattice.id(i + 1, ti)];
                    e.extend((2..=k).map(|j| lattice.id(i + j, ti - j as i64 + 1)));
                    e.push(lattice.id(i + k, ti - kk + 2));
                    let fork = Triple {
                        middle: lattice.id(i + 2, ti - 1),
                        neighbours: [lattice.id(i + 1, ti - 1), lattice.id(i + 1, ti)],
                    };
                    let cherry = Triple {
                        middle: lattice.id(i + k - 1, ti - kk + 2),
                        neighbours: [
                            lattice.id(i + k, ti - kk + 1),
                            lattice.id(i + k, ti - kk + 2),
                        ],
                    };
                    (e, fork, cherry)
                }
            };
            let mut edges = Vec::new();
            for &u in &elements {
                for &l in &elements {
                    if lattice.covers(u, l) {
                        edges.push(CoverEdge { upper: u, lower: l });
                    }
                }
            }
            edges.sort();
            out.push(XkStructure {
                variant,
                i,
                t,
                elements,
                cherry,
                fork,
                edges,
            });
        }
    }
    Ok(out)
}

/// How many of `structures` use each edge.
pub fn edge_multiplicities(structures: &[XkStructure]) -> BTreeMap<CoverEdge, u32> {
    let mut m = BTreeMap::new();
    for x in structures {
        for &e in &x.edges {
            *m.entry(e).or_insert(0) += 1;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclegraph::perm::CyclicPerm;
    use crate::lattice::SubsetMask;

    fn m(e: &[u32]) -> SubsetMask {
        SubsetMask::from_elements(e.iter().copied())
    }

    #[test]
    fn psi_table() {
        // (upper_level, upper_in, lower_in) with i = 0, k = 4
        assert_eq!(psi_value(3, true, true, 0, 4).unwrap(), 0);
        assert_eq!(psi_value(3, false, false, 0, 4).unwrap(), 0);
        assert_eq!(psi_value(4, true, false, 0, 4).unwrap(), 0);
        assert_eq!(psi_value(4, false, true, 0, 4).unwrap(), 2);
        assert_eq!(psi_value(2, false, true, 0, 4).unwrap(), 0);
        assert_eq!(psi_value(2, true, false, 0, 4).unwrap(), 2);
        assert_eq!(psi_value(3, true, false, 0, 4).unwrap(), 1);
        assert_eq!(psi_value(3, false, true, 0, 4).unwrap(), 1);
        assert!(matches!(
            psi_value(5, true, false, 0, 4),
            Err(Error::EdgeOutsideWindow { .. })
        ));
        assert!(psi_value(1, true, false, 0, 4).is_err());
    }

    #[test]
    fn psi_on_lattice_edge() {
        let l = IntervalLattice::identity(6);
        let upper = l.id(3, 1); // {2,3,4}
        let lower = l.id(2, 1); // {2,3}
        let fam = SetFamily::new(6, [m(&[2, 3])]).unwrap();
        let e = CoverEdge { upper, lower };
        assert_eq!(psi_weight(&l, e, &fam, 0, 3).unwrap(), 2);
        assert_eq!(psi_weight(&l, e, &fam, 1, 3).unwrap(), 0);
    }

    #[test]
    fn window_edge_count() {
        let l = IntervalLattice::identity(7);
        // k-1 bilevels of 2n edges each
        assert_eq!(window_edges(&l, 1, 4).len(), 3 * 14);
    }

    #[test]
    fn yk1_matches_figure() {
        let l = IntervalLattice::identity(6);
        let a = enumerate_yk_anchors(&l, 3).unwrap();
        let masks: Vec<SubsetMask> = a[0].elements.iter().map(|&i| l.mask(i)).collect();
        assert_eq!(masks, vec![m(&[]), m(&[2]), m(&[2, 3]), m(&[1, 2])]);
        assert!(enumerate_yk_anchors(&l, 2).is_err());
    }

    #[test]
    fn anchors_cover_low_levels_once() {
        for n in 3..=7 {
            let l = IntervalLattice::new(CyclicPerm::random(n, &mut rand::thread_rng()));
            for k in 3..=n {
                let anchors = enumerate_yk_anchors(&l, k).unwrap();
                assert_eq!(anchors.len(), n as usize);
                let mut count = vec![0u32; l.len()];
                for a in &anchors {
                    for &e in &a.elements {
                        if (1..=k - 2).contains(&l.level(e)) {
                            count[e] += 1;
                        }
                    }
                }
                for s in 1..=k - 2 {
                    for id in l.level_ids(s) {
                        assert_eq!(count[id], 1);
                    }
                }
                // each anchor is itself a Y_k on consecutive levels
                for a in &anchors {
                    let fam = SetFamily::new(n, a.elements.iter().map(|&i| l.mask(i))).unwrap();
                    assert_eq!(fam.len(), k as usize + 1);
                    assert!(crate::lattice::find_yk_copy(&fam, k).is_some());
                }
            }
        }
    }

    #[test]
    fn xk_shape() {
        let l = IntervalLattice::identity(6);
        let xs = enumerate_xk(&l, 0, 4).unwrap();
        assert_eq!(xs.len(), 12);
        for x in &xs {
            assert_eq!(x.elements.len(), 6);
            assert_eq!(x.edges.len(), 5);
            assert_eq!(l.level(x.cherry.middle), 3);
            assert_eq!(l.level(x.fork.middle), 2);
            for &nb in &x.cherry.neighbours {
                assert!(l.covers(nb, x.cherry.middle));
            }
            for &nb in &x.fork.neighbours {
                assert!(l.covers(x.fork.middle, nb));
            }
        }
        assert!(enumerate_xk(&l, 2, 4).is_err());
        assert!(enumerate_xk(&l, 0, 2).is_err());
    }

    #[test]
    fn xk_edge_multiplicities() {
        for n in 5..=9u32 {
            let l = IntervalLattice::new(CyclicPerm::random(n, &mut rand::thread_rng()));
            for k in 3..n {
                for i in 0..n - k {
                    let xs = enumerate_xk(&l, i, k).unwrap();
                    for x in &xs {
                        assert_eq!(x.edges.len() as u32, k + 1);
                        assert_eq!(x.elements.len() as u32, k + 2);
                    }
                    if k < 4 {
                        continue;
                    }
                    let mult = edge_multiplicities(&xs);
                    let win = window_edges(&l, i, k);
                    assert_eq!(mult.len(), win.len(), "every window edge is used");
                    for e in win {
                        let lvl = l.level(e.upper);
                        let expected = if lvl == i + 2 || lvl == i + k { 2 } else { 1 };
                        assert_eq!(mult[&e], expected, "n={n} k={k} i={i} edge {e:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn cherry_and_fork_types() {
        let l = IntervalLattice::identity(6);
        let x = &enumerate_xk(&l, 0, 4).unwrap()[0];
        let c = x.cherry;
        let with = |ids: &[usize]| {
            let v = ids.to_vec();
            move |id: usize| v.contains(&id)
        };
        let all = with(&[c.middle, c.neighbours[0], c.neighbours[1]]);
        assert_eq!(x.cherry_type(&all), 1);
        assert_eq!(x.cherry_type(&with(&[c.middle, c.neighbours[1]])), 2);
        assert_eq!(x.cherry_type(&with(&[c.middle])), 3);
        assert_eq!(x.cherry_type(&with(&[c.neighbours[0], c.neighbours[1]])), 4);
        let f = x.fork;
        assert_eq!(
            x.fork_type(&with(&[f.middle, f.neighbours[0], f.neighbours[1]])),
            5
        );
        assert_eq!(x.fork_type(&with(&[f.middle, f.neighbours[0]])), 6);
        assert_eq!(x.fork_type(&with(&[f.middle])), 7);
        assert_eq!(x.fork_type(&with(&[])), 8);

        let fam = SetFamily::new(6, [l.mask(c.middle)]).unwrap();
        assert_eq!(x.classify_cherry(&l, &fam), 3);
        assert_eq!(x.classify_fork(&l, &fam), 8);
    }
}
