//! Exact check of the weighted window-constraint certificate.
//!
//! Each window constraint `x_i + ... + x_{i+k-1} <= (k-1)n` gets weight
//! `w_i`. Summed, the coefficient of `x_i` is `c_i = w_{i-k+1} + ... + w_i`,
//! which matches `C(n,i)` except on `m < i < m+k`, where it falls short by
//! `S(n,k,i) - S(n,k,m) >= 0`. Capping those `x_i` at `n` yields
//! `sum C(n,i) x_i <= n(2^n - S(n,k,m))`. Everything here is integer
//! arithmetic; no LP is solved.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cyclegraph::LevelProfile;
use crate::error::{Error, Result};
use crate::ramus::{ExactInt, LacunaryTable, RamusParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

/// One exact comparison `lhs (= or <=) rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertCheck {
    pub name: &'static str,
    pub status: CheckStatus,
    #[serde(serialize_with = "crate::decimal::signed::serialize")]
    pub lhs: BigInt,
    #[serde(serialize_with = "crate::decimal::signed::serialize")]
    pub rhs: BigInt,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CertCheck {
    fn eq(name: &'static str, lhs: BigInt, rhs: BigInt) -> Self {
        let status = if lhs == rhs {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        Self {
            name,
            status,
            lhs,
            rhs,
            note: None,
        }
    }

    fn le(name: &'static str, lhs: BigInt, rhs: BigInt) -> Self {
        let status = if lhs <= rhs {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        Self {
            name,
            status,
            lhs,
            rhs,
            note: None,
        }
    }

    fn skipped(name: &'static str, note: String) -> Self {
        Self {
            name,
            status: CheckStatus::NotApplicable,
            lhs: BigInt::zero(),
            rhs: BigInt::zero(),
            note: Some(note),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

fn all_pass(checks: &[CertCheck]) -> bool {
    !checks.iter().any(CertCheck::failed)
}

fn int(v: &ExactInt) -> BigInt {
    BigInt::from(v.clone())
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightCertificate {
    #[serde(skip)]
    pub params: RamusParams,
    pub n: u32,
    pub k: u32,
    pub m: u32,
    /// `w_0 ..= w_{n-k+1}`.
    #[serde(serialize_with = "crate::decimal::vec::serialize")]
    pub w: Vec<ExactInt>,
    /// `c_0 ..= c_n`.
    #[serde(serialize_with = "crate::decimal::vec::serialize")]
    pub coeff: Vec<ExactInt>,
    /// Build-time invariant checks.
    pub checks: Vec<CertCheck>,
    #[serde(skip)]
    table: LacunaryTable,
}

impl WeightCertificate {
    pub fn n(&self) -> u32 {
        self.params.n()
    }

    pub fn k(&self) -> u32 {
        self.params.k()
    }

    /// `w_i`, zero outside `0..=n-k+1`.
    pub fn w_at(&self, i: i64) -> BigInt {
        usize::try_from(i)
            .ok()
            .and_then(|i| self.w.get(i))
            .map_or_else(BigInt::zero, int)
    }

    fn s(&self, r: i64) -> BigInt {
        int(&self.table.lacunary_sum(r))
    }

    fn binom(&self, i: i64) -> BigInt {
        int(&self.table.binomial(i))
    }

    /// `S(n,k,m) - S(n,k,i)` for `m < i < m+k`, zero elsewhere.
    fn correction(&self, i: i64) -> BigInt {
        let m = self.m as i64;
        if m < i && i < m + self.k() as i64 {
            self.s(m) - self.s(i)
        } else {
            BigInt::zero()
        }
    }

    fn window_bound(&self) -> BigInt {
        BigInt::from((self.k() - 1) as u64 * self.n() as u64)
    }

    /// `n(2^n - S(n,k,m))`.
    fn final_bound(&self) -> BigInt {
        let n = self.n();
        BigInt::from(n) * ((BigInt::one() << n as usize) - self.s(self.m as i64))
    }
}

/// Builds the certificate for `3 <= k <= n` and checks positivity, the
/// coefficient identities and the weight total.
pub fn build_certificate(n: u32, k: u32) -> Result<WeightCertificate> {
    if k < 3 {
        return Err(Error::InvalidParams(format!(
            "the certificate needs k >= 3, got k={k}"
        )));
    }
    let params = RamusParams::new(n, k)?;
    let table = LacunaryTable::for_params(params);
    let w = table.weights();
    let coeff: Vec<ExactInt> = (0..=n as i64)
        .map(|i| {
            (i - k as i64 + 1..=i)
                .filter_map(|j| usize::try_from(j).ok().and_then(|j| w.get(j)))
                .sum()
        })
        .collect();
    let mut cert = WeightCertificate {
        params,
        n,
        k,
        m: params.m(),
        w,
        coeff,
        checks: Vec::new(),
        table,
    };
    let mut checks = Vec::new();
    let min_w = cert.w.iter().min().map(int).unwrap_or_default();
    checks.push(CertCheck::le("weights_positive", BigInt::one(), min_w));
    let mismatched = (0..=n as i64)
        .filter(|&i| int(&cert.coeff[i as usize]) != cert.binom(i) + cert.correction(i))
        .count();
    checks.push(
        CertCheck::eq("coefficients", BigInt::from(mismatched), BigInt::zero())
            .with_note("count of i with c_i != C(n,i) + S(n,k,m) - S(n,k,i) [m < i < m+k]"),
    );
    let surplus = (0..=n as i64)
        .filter(|&i| cert.correction(i) > BigInt::zero())
        .count();
    checks.push(
        CertCheck::eq(
            "coefficient_deficit_nonnegative",
            BigInt::from(surplus),
            BigInt::zero(),
        )
        .with_note("count of i with c_i > C(n,i)"),
    );
    let total: ExactInt = cert.w.iter().sum();
    checks.push(CertCheck::eq(
        "weight_total",
        int(&total),
        cert.s(cert.m as i64),
    ));
    cert.checks = checks;
    if !all_pass(&cert.checks) {
        let bad: Vec<_> = cert
            .checks
            .iter()
            .filter(|c| c.failed())
            .map(|c| c.name)
            .collect();
        return Err(Error::Certificate(format!("({n},{k}) failed {bad:?}")));
    }
    Ok(cert)
}

/// The chain `(k-1)n·S(m) + sum_{j=m+1}^{m+k-1} (S(j) - S(m))·n
/// = n·sum_{j=m+1}^{m+k-1} S(j) = n(2^n - S(m))`, checked link by link.
pub fn certify_bound_checks(cert: &WeightCertificate) -> Vec<CertCheck> {
    let n = BigInt::from(cert.n());
    let m = cert.m as i64;
    let k = cert.k() as i64;
    let sm = cert.s(m);
    let total_w: BigInt = cert.w.iter().map(int).sum();
    let weighted_rhs = cert.window_bound() * &total_w;
    let corrections: BigInt = (m + 1..m + k).map(|j| (cert.s(j) - &sm) * &n).sum();
    let combined = cert.window_bound() * &sm + &corrections;
    let spread: BigInt = &n * (m + 1..m + k).map(|j| cert.s(j)).sum::<BigInt>();
    vec![
        CertCheck::eq("weighted_rhs", weighted_rhs, cert.window_bound() * &sm),
        CertCheck::eq("combined_equals_spread", combined.clone(), spread.clone()),
        CertCheck::eq("spread_equals_bound", spread, cert.final_bound()),
        CertCheck::eq("combined_equals_bound", combined, cert.final_bound()),
    ]
}

/// Returns `n(2^n - S(n,k,m))` after checking the combination chain.
pub fn certify_bound(cert: &WeightCertificate) -> Result<ExactInt> {
    let checks = certify_bound_checks(cert);
    if !all_pass(&checks) {
        return Err(Error::Certificate(format!(
            "bound chain mismatch for ({},{})",
            cert.n(),
            cert.k()
        )));
    }
    Ok(cert.final_bound().to_biguint().expect("2^n > S(n,k,m)"))
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryReport {
    pub n: u32,
    pub k: u32,
    pub checks: Vec<CertCheck>,
    pub passed: bool,
}

/// The two cases where both `∅` and `[n]` are present. Subcase (a): one
/// boundary window has a deficit of 1, which lowers the bound by `w_1`.
/// Subcase (b): both boundary windows lose `⌊n/2⌋`, weighted by `w_0` and
/// `w_{n-k+1}`. Each must leave room for the extra `2(n-1)`.
pub fn certify_boundary_cases(cert: &WeightCertificate) -> BoundaryReport {
    let (n, k) = (cert.n(), cert.k());
    let nb = BigInt::from(n);
    let target = cert.final_bound() + (&nb - BigInt::one());
    let extra = BigInt::from(2) * (&nb - BigInt::one());
    let last = (n - k + 1) as i64;
    let half = BigInt::from(n / 2);
    let mut checks = Vec::new();

    if n > k {
        checks.push(CertCheck::eq(
            "w1_is_n_minus_1",
            cert.w_at(1),
            &nb - BigInt::one(),
        ));
        checks.push(CertCheck::le(
            "subcase_a",
            &extra + cert.final_bound() - cert.w_at(1),
            target.clone(),
        ));
    } else {
        let note = format!(
            "n = k: w_1 = {} rather than n-1, so the deficit argument does not close",
            cert.w_at(1)
        );
        checks.push(CertCheck::skipped("w1_is_n_minus_1", note.clone()));
        checks.push(CertCheck::skipped("subcase_a", note));
    }
    checks.push(CertCheck::eq("w0_is_1", cert.w_at(0), BigInt::one()));
    checks.push(CertCheck::eq("w_last_is_1", cert.w_at(last), BigInt::one()));
    let reduction = (cert.w_at(0) + cert.w_at(last)) * &half;
    checks.push(CertCheck::le(
        "halves_cover_n_minus_1",
        &nb - BigInt::one(),
        BigInt::from(2) * &half,
    ));
    checks.push(CertCheck::le(
        "subcase_b",
        &extra + cert.final_bound() - reduction,
        target,
    ));
    let passed = all_pass(&checks);
    BoundaryReport {
        n,
        k,
        checks,
        passed,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileReport {
    pub n: u32,
    pub k: u32,
    pub profile: Vec<u32>,
    #[serde(serialize_with = "crate::decimal::signed::serialize")]
    pub binomial_objective: BigInt,
    #[serde(serialize_with = "crate::decimal::signed::serialize")]
    pub cyclic_objective: BigInt,
    #[serde(serialize_with = "crate::decimal::signed::serialize")]
    pub bound: BigInt,
    pub checks: Vec<CertCheck>,
    pub passed: bool,
}

/// Weak-duality check of one concrete profile against the certificate.
///
/// The profile must satisfy the box constraints and every window
/// constraint; otherwise it is rejected with `ProfileRejected`.
pub fn certify_profile(cert: &WeightCertificate, profile: &LevelProfile) -> Result<ProfileReport> {
    let (n, k) = (cert.n(), cert.k());
    if profile.n() != n {
        return Err(Error::ProfileRejected(format!(
            "profile has {} levels, expected {}",
            profile.x.len(),
            n + 1
        )));
    }
    if !profile.within_box() {
        return Err(Error::ProfileRejected(format!(
            "{:?} is outside the box",
            profile.x
        )));
    }
    let cap = (k - 1) as u64 * n as u64;
    if let Some(i) = (0..=n - k + 1).find(|&i| profile.window_sum(i, k) > cap) {
        return Err(Error::ProfileRejected(format!(
            "window at {i} sums to {} > {cap}",
            profile.window_sum(i, k)
        )));
    }

    let x = |i: i64| BigInt::from(profile.x[i as usize]);
    let nb = BigInt::from(n);
    let m = cert.m as i64;
    let sm = cert.s(m);
    let range = 0..=n as i64;
    let binomial_objective: BigInt = range.clone().map(|i| cert.binom(i) * x(i)).sum();
    let weighted: BigInt = (0..=(n - k + 1) as i64)
        .map(|i| cert.w_at(i) * (i..i + k as i64).map(x).sum::<BigInt>())
        .sum();
    let coeff_form: BigInt = range
        .clone()
        .map(|i| int(&cert.coeff[i as usize]) * x(i))
        .sum();
    let corrected: BigInt =
        &binomial_objective + range.map(|i| cert.correction(i) * x(i)).sum::<BigInt>();
    let weighted_rhs = cert.window_bound() * &sm;
    let deficit_x: BigInt = (m + 1..m + k as i64)
        .map(|j| (cert.s(j) - &sm) * x(j))
        .sum();
    let deficit_cap: BigInt = (m + 1..m + k as i64).map(|j| (cert.s(j) - &sm) * &nb).sum();

    let mut checks = vec![
        CertCheck::le("weighted_windows", weighted.clone(), weighted_rhs.clone()),
        CertCheck::eq("expansion_by_coefficients", weighted, coeff_form.clone()),
        CertCheck::eq("expansion_closed_form", coeff_form, corrected.clone()),
        CertCheck::le("corrected_objective", corrected, weighted_rhs),
        CertCheck::le("deficit_cap", deficit_x, deficit_cap),
        CertCheck::le(
            "binomial_objective",
            binomial_objective.clone(),
            cert.final_bound(),
        ),
    ];

    let ends = profile.x[0] + profile.x[n as usize];
    // C(n,0) = C(n,n) = 1, while the cyclic objective weighs both ends by n
    let cyclic_objective = &binomial_objective + (&nb - BigInt::one()) * ends;
    let bound = cert.final_bound() + (&nb - BigInt::one());
    let full_window = |i: u32| profile.window_sum(i, k) == cap;
    // with both ends present the bound needs either a deficit in an inner
    // window or the reduced boundary windows
    let applicable = if ends < 2 || !full_window(1) || !full_window(n - k) {
        true
    } else {
        let reduced = cap - (n / 2) as u64;
        profile.window_sum(0, k) <= reduced && profile.window_sum(n - k + 1, k) <= reduced
    };
    checks.push(if applicable {
        CertCheck::le("cyclic_objective", cyclic_objective.clone(), bound.clone())
    } else {
        CertCheck::skipped(
            "cyclic_objective",
            "both ends present with full inner windows but the boundary windows exceed (k-1)n - floor(n/2)".into(),
        )
    });

    let passed = all_pass(&checks);
    Ok(ProfileReport {
        n,
        k,
        profile: profile.x.clone(),
        binomial_objective,
        cyclic_objective,
        bound,
        checks,
        passed,
    })
}

/// Certificate, bound chain and boundary cases in one record.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub n: u32,
    pub k: u32,
    pub m: u32,
    #[serde(serialize_with = "crate::decimal::vec::serialize")]
    pub w: Vec<ExactInt>,
    #[serde(serialize_with = "crate::decimal::vec::serialize")]
    pub coeff: Vec<ExactInt>,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub bound: ExactInt,
    pub checks: Vec<CertCheck>,
    pub passed: bool,
}

pub fn certificate_report(n: u32, k: u32) -> Result<CertificateReport> {
    let cert = build_certificate(n, k)?;
    let bound = certify_bound(&cert)?;
    let mut checks = cert.checks.clone();
    checks.extend(certify_bound_checks(&cert));
    checks.extend(certify_boundary_cases(&cert).checks);
    let passed = all_pass(&checks);
    Ok(CertificateReport {
        n,
        k,
        m: cert.m,
        w: cert.w,
        coeff: cert.coeff,
        bound,
        checks,
        passed,
    })
}
