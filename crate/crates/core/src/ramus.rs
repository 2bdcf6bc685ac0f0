//! Exact binomial arithmetic: lacunary (Ramus) sums `S(n,k,r)`, their
//! truncations `S(n,k,r|z)`, and the dual weight vector `w_i` used by the
//! certificate.
//!
//! Everything is computed by direct summation over a memoized row of
//! binomial coefficients; no floating point is involved anywhere.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer.
pub type ExactInt = BigUint;

/// Validated `(n, k)` pair with `2 <= k <= n`. The distinguished residue
/// `m = ceil((n - k) / 2)` is always derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RamusParams {
    n: u32,
    k: u32,
}

impl RamusParams {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if k < 2 || k > n {
            return Err(Error::InvalidParams(format!(
                "need 2 <= k <= n, got n={n}, k={k}"
            )));
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        (self.n - self.k).div_ceil(2)
    }

    /// Index of the last weight, `n - k + 1`.
    pub fn last_weight(&self) -> u32 {
        self.n - self.k + 1
    }
}

/// Row `n` of Pascal's triangle, computed once.
#[derive(Debug, Clone)]
pub struct BinomialRow {
    n: u32,
    row: Vec<ExactInt>,
}

impl BinomialRow {
    pub fn new(n: u32) -> Self {
        let mut row = Vec::with_capacity(n as usize + 1);
        let mut c = ExactInt::one();
        row.push(c.clone());
        for i in 0..n {
            c = c * (n - i) / (i + 1);
            row.push(c.clone());
        }
        Self { n, row }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `C(n, i)`, zero outside `0..=n`.
    pub fn get(&self, i: i64) -> ExactInt {
        self.try_get(i).cloned().unwrap_or_default()
    }

    pub fn try_get(&self, i: i64) -> Option<&ExactInt> {
        usize::try_from(i).ok().and_then(|i| self.row.get(i))
    }

    pub fn as_slice(&self) -> &[ExactInt] {
        &self.row
    }
}

/// `C(n, i)`; zero when `i < 0` or `i > n`.
pub fn binomial(n: u32, i: i64) -> ExactInt {
    if i < 0 || i > n as i64 {
        return ExactInt::zero();
    }
    BinomialRow::new(n).get(i)
}

/// Lacunary sums for a fixed `(n, k)`, backed by one memoized binomial row.
///
/// Unlike [`RamusParams`], this does not require `k <= n`: the sums are well
/// defined for any modulus `k >= 2`.
#[derive(Debug, Clone)]
pub struct LacunaryTable {
    k: u32,
    binom: BinomialRow,
}

impl LacunaryTable {
    /// # Panics
    /// If `n == 0` or `k < 2`.
    pub fn new(n: u32, k: u32) -> Self {
        assert!(n >= 1 && k >= 2, "lacunary sums need n >= 1 and k >= 2");
        Self {
            k,
            binom: BinomialRow::new(n),
        }
    }

    pub fn for_params(p: RamusParams) -> Self {
        Self::new(p.n, p.k)
    }

    pub fn n(&self) -> u32 {
        self.binom.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn binomials(&self) -> &BinomialRow {
        &self.binom
    }

    pub fn binomial(&self, i: i64) -> ExactInt {
        self.binom.get(i)
    }

    fn sum_up_to(&self, r: i64, upper: i64) -> ExactInt {
        let k = self.k as i64;
        let upper = upper.min(self.n() as i64);
        let mut i = r.rem_euclid(k);
        let mut acc = ExactInt::zero();
        while i <= upper {
            acc += &self.binom.row[i as usize];
            i += k;
        }
        acc
    }

    /// `S(n,k,r)`: sum of `C(n,i)` over `i ≡ r (mod k)`.
    pub fn lacunary_sum(&self, r: i64) -> ExactInt {
        self.sum_up_to(r, self.n() as i64)
    }

    /// `S(n,k,z mod k | z)`: the lacunary sum restricted to `i <= z`.
    /// Zero for `z < 0`.
    pub fn truncated(&self, z: i64) -> ExactInt {
        if z < 0 {
            return ExactInt::zero();
        }
        self.sum_up_to(z, z)
    }

    /// Two-argument form `S(n,k,r|z)`. Only the congruent case `z ≡ r` is
    /// defined; anything else is rejected.
    pub fn truncated_checked(&self, r: i64, z: i64) -> Result<ExactInt> {
        let k = self.k as i64;
        if r.rem_euclid(k) != z.rem_euclid(k) {
            return Err(Error::ResidueMismatch { k: self.k, r, z });
        }
        Ok(self.truncated(z))
    }

    fn truncated_signed(&self, z: i64) -> BigInt {
        BigInt::from(self.truncated(z))
    }

    /// Signed evaluation of the two-branch weight formula at any index `i`.
    /// The branch split is at `m`; outside `0..=n-k+1` the formula itself
    /// yields zero.
    pub fn weight_signed(&self, i: i64) -> BigInt {
        let n = self.n() as i64;
        let k = self.k as i64;
        let m = ((n - k).max(0) + 1) / 2;
        if i <= m {
            self.truncated_signed(i) - self.truncated_signed(i - 1)
        } else {
            self.truncated_signed(n - i - k + 1) - self.truncated_signed(n - i - k)
        }
    }

    /// `w_i`, total over all integers (zero outside `0..=n-k+1`).
    pub fn weight(&self, i: i64) -> ExactInt {
        self.weight_signed(i)
            .to_biguint()
            .expect("weights are nonnegative for 2 <= k <= n")
    }

    /// `w_0 ..= w_{n-k+1}`.
    pub fn weights(&self) -> Vec<ExactInt> {
        let last = self.n() as i64 - self.k as i64 + 1;
        (0..=last).map(|i| self.weight(i)).collect()
    }

    /// `sum_{i = s-k+1}^{s} w_i`.
    pub fn window_sum(&self, s: i64) -> BigInt {
        let k = self.k as i64;
        (s - k + 1..=s).map(|i| self.weight_signed(i)).sum()
    }
}

/// `S(n,k,r)` with `r` reduced modulo `k`.
pub fn lacunary_sum(n: u32, k: u32, r: i64) -> ExactInt {
    LacunaryTable::new(n, k).lacunary_sum(r)
}

/// `S(n,k,z mod k | z)`; zero for negative `z`.
pub fn truncated_lacunary_sum(n: u32, k: u32, z: i64) -> ExactInt {
    LacunaryTable::new(n, k).truncated(z)
}

pub fn weight(params: RamusParams, i: i64) -> ExactInt {
    LacunaryTable::for_params(params).weight(i)
}

/// `2^n - S(n,k,m)`: the size of the residue-avoiding construction.
pub fn extremal_value(params: RamusParams) -> ExactInt {
    let table = LacunaryTable::for_params(params);
    (ExactInt::one() << params.n as usize) - table.lacunary_sum(params.m() as i64)
}

/// One checked identity and the indices at which it failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseCheck {
    pub clause: &'static str,
    pub checked: usize,
    pub violations: Vec<i64>,
}

impl ClauseCheck {
    fn new(clause: &'static str) -> Self {
        Self {
            clause,
            checked: 0,
            violations: Vec::new(),
        }
    }

    fn record(&mut self, index: i64, ok: bool) {
        self.checked += 1;
        if !ok {
            self.violations.push(index);
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub n: u32,
    pub k: u32,
    pub m: u32,
    pub clauses: Vec<ClauseCheck>,
    pub passed: bool,
}

/// Checks every truncated-sum and weight identity by exact evaluation of both
/// sides, over all relevant indices.
pub fn verify_sum_identities(n: u32, k: u32) -> Result<IdentityReport> {
    let params = RamusParams::new(n, k)?;
    let t = LacunaryTable::for_params(params);
    let (ni, ki, m) = (n as i64, k as i64, params.m() as i64);
    let c = |i: i64| t.binomial(i);
    let s = |r: i64| t.lacunary_sum(r);
    let tr = |z: i64| t.truncated(z);

    let mut base = ClauseCheck::new("truncated_base");
    for z in -ki..0 {
        base.record(z, tr(z).is_zero());
    }
    for z in 0..ki.min(ni + 1) {
        base.record(z, tr(z) == c(z));
    }

    let mut step = ClauseCheck::new("truncated_step");
    let mut complement = ClauseCheck::new("truncated_complement");
    let mut shifted = ClauseCheck::new("truncated_shifted_complement");
    for z in 0..=ni {
        step.record(z, tr(z) == tr(z - ki) + c(z));
        complement.record(z, tr(z) + tr(ni - ki - z) == s(z));
        shifted.record(z, tr(z - ki) + tr(ni - ki - z) + c(z) == s(z));
    }

    let mut support = ClauseCheck::new("weight_support");
    let last = ni - ki + 1;
    for i in -ki..=ni + ki {
        let w = t.weight_signed(i);
        let ok = if (0..=last).contains(&i) {
            w.is_positive()
        } else {
            w.is_zero()
        };
        support.record(i, ok);
    }

    let mut window = ClauseCheck::new("weight_window");
    let mut corrected = ClauseCheck::new("weight_window_corrected");
    let s_m = BigInt::from(s(m));
    for j in 0..=ni {
        let lhs = t.window_sum(j);
        if j <= m || j >= m + ki {
            window.record(j, lhs == BigInt::from(c(j)));
        } else {
            let rhs = &s_m - BigInt::from(s(j)) + BigInt::from(c(j));
            corrected.record(j, lhs == rhs);
        }
    }

    let mut total = ClauseCheck::new("weight_total");
    let sum: BigInt = (0..=last).map(|i| t.weight_signed(i)).sum();
    total.record(last, sum == s_m);

    let clauses = vec![
        base, step, complement, shifted, support, window, corrected, total,
    ];
    let passed = clauses.iter().all(ClauseCheck::passed);
    Ok(IdentityReport {
        n,
        k,
        m: params.m(),
        clauses,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinResidueReport {
    pub n: u32,
    pub k: u32,
    pub m: u32,
    #[serde(serialize_with = "crate::decimal::vec::serialize")]
    pub sums: Vec<ExactInt>,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub min: ExactInt,
    pub argmin: Vec<u32>,
    pub m_in_argmin: bool,
}

/// Evaluates `S(n,k,r)` for every residue and reports where the minimum is
/// attained. The argmin set is reported in full since it need not be unique.
pub fn verify_min_residue(n: u32, k: u32) -> Result<MinResidueReport> {
    let params = RamusParams::new(n, k)?;
    let t = LacunaryTable::for_params(params);
    let sums: Vec<ExactInt> = (0..k as i64).map(|r| t.lacunary_sum(r)).collect();
    let min = sums.iter().min().cloned().expect("k >= 2");
    let argmin: Vec<u32> = (0..k).filter(|&r| sums[r as usize] == min).collect();
    let m_in_argmin = argmin.contains(&(params.m() % k));
    Ok(MinResidueReport {
        n,
        k,
        m: params.m(),
        sums,
        min,
        argmin,
        m_in_argmin,
    })
}
