//! Closed-form steady-state quantities of the journal-growth process.
//!
//! With entry rate `alpha`, the stationary productivity distribution is the
//! Yule distribution `f(n) = rho B(n, rho+1)` with `rho = 1/(1-alpha)`. For a
//! bibliography of `A` papers this fixes the zone boundary `y_m` (the
//! productivity where the expected journal count per level drops below one),
//! the core-zone totals, and the top-journal productivity.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{beta, gamma, ln_gamma};

/// Probability that a paper founds a new journal; strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct EntryRate(f64);

impl EntryRate {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::Domain(format!(
                "entry rate must lie strictly inside (0, 1), got {alpha}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for EntryRate {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<EntryRate> for f64 {
    fn from(alpha: EntryRate) -> f64 {
        alpha.0
    }
}

/// Size-distribution exponent; the stationary tail falls off as `n^-(rho+1)`.
///
/// Any positive value is representable (the distribution itself only needs
/// `rho > 0`); operations that additionally require `rho > 1` check at the
/// call site.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct RhoExponent(f64);

impl RhoExponent {
    pub fn new(rho: f64) -> Result<Self> {
        if rho.is_finite() && rho > 0.0 {
            Ok(Self(rho))
        } else {
            Err(Error::Domain(format!(
                "size exponent must be a positive finite number, got {rho}"
            )))
        }
    }

    /// `rho = 1/(1 - alpha)`, always > 1 for a valid entry rate.
    pub fn from_alpha(alpha: EntryRate) -> Self {
        Self(1.0 / (1.0 - alpha.get()))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    fn require_above_one(self, what: &str) -> Result<f64> {
        if self.0 > 1.0 {
            Ok(self.0)
        } else {
            Err(Error::Domain(format!(
                "{what} requires rho > 1, got {}",
                self.0
            )))
        }
    }
}

impl TryFrom<f64> for RhoExponent {
    type Error = Error;

    fn try_from(rho: f64) -> Result<Self> {
        Self::new(rho)
    }
}

impl From<RhoExponent> for f64 {
    fn from(rho: RhoExponent) -> f64 {
        rho.0
    }
}

/// Maps an entry rate to the stationary size exponent `rho = 1/(1-alpha)`.
pub fn rho_from_alpha(alpha: f64) -> Result<RhoExponent> {
    Ok(RhoExponent::from_alpha(EntryRate::new(alpha)?))
}

/// Evaluation form for the stationary productivity distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmfForm {
    /// Exact beta form `rho B(n, rho+1)`; the default everywhere.
    Exact,
    /// Large-`n` approximation `rho Γ(rho+1) n^-(rho+1)`.
    PowerLaw,
}

/// Stationary probability that a journal holds exactly `n` papers.
pub fn yule_pmf(n: u64, rho: RhoExponent) -> f64 {
    yule_pmf_form(n, rho, PmfForm::Exact)
}

/// [`yule_pmf`] with an explicit choice of evaluation form.
pub fn yule_pmf_form(n: u64, rho: RhoExponent, form: PmfForm) -> f64 {
    assert!(n >= 1, "productivity levels start at 1");
    let rho = rho.get();
    match form {
        PmfForm::Exact => rho * beta(n as f64, rho + 1.0),
        PmfForm::PowerLaw => rho * gamma(rho + 1.0) * (n as f64).powf(-(rho + 1.0)),
    }
}

/// Stationary probability mass at productivity `n` and above.
///
/// Closed form of the tail: Σ_{m≥n} rho B(m, rho+1) = rho B(n, rho),
/// obtained by summing the geometric series inside the beta integral.
pub fn yule_tail_mass(n: u64, rho: RhoExponent) -> f64 {
    assert!(n >= 1, "productivity levels start at 1");
    rho.get() * beta(n as f64, rho.get())
}

/// First-moment tail Σ_{m≥n} m·f(m) = rho [n B(n, rho) + B(n+1, rho-1)].
///
/// Requires `rho > 1`; the mean diverges otherwise. Evaluating the mean
/// through this identity sidesteps the series' `N^(1-rho)` convergence,
/// which is hopeless to sum directly for rho near 1.
pub fn yule_tail_first_moment(n: u64, rho: RhoExponent) -> Result<f64> {
    assert!(n >= 1, "productivity levels start at 1");
    let r = rho.require_above_one("the distribution mean")?;
    let n = n as f64;
    Ok(r * (n * beta(n, r) + beta(n + 1.0, r - 1.0)))
}

fn require_papers(papers: f64) -> Result<f64> {
    if papers.is_finite() && papers >= 1.0 {
        Ok(papers)
    } else {
        Err(Error::Domain(format!(
            "paper total must be a finite number ≥ 1, got {papers}"
        )))
    }
}

/// Zone-boundary productivity `y_m = [A (rho-1) Γ(rho+1)]^(1/(rho+1))`:
/// the level where the expected number of journals per productivity value
/// falls to one. Journals above it form the integer-constrained core zone.
/// Evaluated in log space so large exponents cannot overflow.
pub fn zone_boundary(papers: f64, rho: RhoExponent) -> Result<f64> {
    let a = require_papers(papers)?;
    let r = rho.require_above_one("the zone boundary")?;
    Ok(((a.ln() + (r - 1.0).ln() + ln_gamma(r + 1.0)) / (r + 1.0)).exp())
}

/// Core-zone totals implied by the zone boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoreZoneTotals {
    /// Expected number of core journals (real-valued), `y_m / rho`.
    pub journals: f64,
    /// Expected papers held by the core, `y_m^2 / (rho - 1)`.
    pub papers: f64,
}

/// Core journal and paper totals for a bibliography of `papers` papers.
pub fn core_zone_totals(papers: f64, rho: RhoExponent) -> Result<CoreZoneTotals> {
    let r = rho.require_above_one("core-zone totals")?;
    let y_m = zone_boundary(papers, rho)?;
    Ok(CoreZoneTotals {
        journals: y_m / r,
        papers: y_m * y_m / (r - 1.0),
    })
}

/// Expected productivity of the single most productive journal,
/// `X1 = [A Γ(rho+1)]^(1/rho)`; equivalently `(rho-1)^(-1/rho) y_m^((rho+1)/rho)`.
pub fn peak_productivity(papers: f64, rho: RhoExponent) -> Result<f64> {
    let a = require_papers(papers)?;
    let r = rho.require_above_one("peak productivity")?;
    Ok(((a.ln() + ln_gamma(r + 1.0)) / r).exp())
}

/// Extreme-value estimate of the rank-`r` productivity, `X1 r^(-1/rho)`.
///
/// Known to be inaccurate for r ≥ 2 (the core-zone ratio line replaces it);
/// provided for comparison plots only.
pub fn rank_productivity(peak: f64, rank: u64, rho: RhoExponent) -> f64 {
    assert!(rank >= 1, "ranks start at 1");
    peak * (rank as f64).powf(-1.0 / rho.get())
}

/// Zone boundary recovered from core-zone quantities:
/// `X1 / (k (T0_int - 1) + 1)`, the productivity of the last core journal
/// on the within-core ratio line.
pub fn zone_boundary_from_core(peak: f64, core_journals: u64, ratio_slope: f64) -> f64 {
    assert!(core_journals >= 1, "the core holds at least one journal");
    assert!(ratio_slope > 0.0, "ratio slope must be positive");
    peak / (ratio_slope * (core_journals - 1) as f64 + 1.0)
}

/// Zone parameters of a two-zone bibliography.
///
/// `core_journals` is kept real-valued for the curvature conditions; the
/// rounded `core_journals_int = max(1, round(core_journals))` indexes the
/// core summation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZoneParams {
    pub rho: RhoExponent,
    pub alpha: EntryRate,
    /// Zone-boundary productivity `y_m`.
    pub boundary: f64,
    /// Real-valued core journal count `T0`.
    pub core_journals: f64,
    /// `max(1, round(T0))`, the summation index bound.
    pub core_journals_int: u64,
    /// Papers held by the core, `A0`.
    pub core_papers: f64,
    /// Top-journal productivity `X1`.
    pub peak_productivity: f64,
    /// Within-core ratio-line slope `k` (`X1/X_r = k(r-1) + 1`).
    pub ratio_slope: f64,
}

impl ZoneParams {
    pub fn new(
        rho: RhoExponent,
        alpha: EntryRate,
        boundary: f64,
        core_journals: f64,
        core_papers: f64,
        peak_productivity: f64,
        ratio_slope: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("boundary", boundary),
            ("core_journals", core_journals),
            ("core_papers", core_papers),
            ("peak_productivity", peak_productivity),
            ("ratio_slope", ratio_slope),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Domain(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if boundary > peak_productivity {
            return Err(Error::Domain(format!(
                "zone boundary {boundary} exceeds peak productivity {peak_productivity}"
            )));
        }
        if peak_productivity > core_papers {
            return Err(Error::Domain(format!(
                "peak productivity {peak_productivity} exceeds core paper total {core_papers}"
            )));
        }
        Ok(Self {
            rho,
            alpha,
            boundary,
            core_journals,
            core_journals_int: core_journals.round().max(1.0) as u64,
            core_papers,
            peak_productivity,
            ratio_slope,
        })
    }
}

/// Histogram of journal productivity: `n` → number of journals holding
/// exactly `n` papers. Counts are real-valued so that ensemble means fit
/// the same shape as single realizations.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FrequencyTable {
    entries: BTreeMap<u64, f64>,
}

impl FrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `count` journals at productivity `n`, accumulating on collision.
    pub fn add(&mut self, n: u64, count: f64) {
        assert!(n >= 1, "productivity levels start at 1");
        assert!(count >= 0.0, "journal counts are nonnegative");
        *self.entries.entry(n).or_insert(0.0) += count;
    }

    pub fn get(&self, n: u64) -> f64 {
        self.entries.get(&n).copied().unwrap_or(0.0)
    }

    /// Productivity levels and counts in increasing `n` order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.entries.iter().map(|(&n, &c)| (n, c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total journal count Σ f(n).
    pub fn journals(&self) -> f64 {
        self.entries.values().sum()
    }

    /// Total paper count Σ n·f(n).
    pub fn papers(&self) -> f64 {
        self.entries.iter().map(|(&n, &c)| n as f64 * c).sum()
    }

    pub fn from_ranked(ranked: &RankedBibliography) -> Self {
        let mut table = Self::new();
        for &size in ranked.sizes() {
            table.add(size, 1.0);
        }
        table
    }
}

/// Journal sizes in nonincreasing order; the unit every snapshot and
/// simulation replication reduces to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RankedBibliography {
    sizes: Vec<u64>,
}

impl RankedBibliography {
    /// Sorts the sizes into nonincreasing order; rejects empty input and
    /// journals with zero papers.
    pub fn new(mut sizes: Vec<u64>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InsufficientData(
                "a bibliography needs at least one journal".into(),
            ));
        }
        if sizes.contains(&0) {
            return Err(Error::Domain(
                "every journal holds at least one paper".into(),
            ));
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { sizes })
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    /// Journal count `T`.
    pub fn journals(&self) -> u64 {
        self.sizes.len() as u64
    }

    /// Paper count `A`.
    pub fn papers(&self) -> u64 {
        self.sizes.iter().sum()
    }

    /// Productivity of the top journal.
    pub fn top(&self) -> u64 {
        self.sizes[0]
    }

    /// Running cumulative totals R(1), R(2), ...
    pub fn cumulative(&self) -> impl Iterator<Item = u64> + '_ {
        self.sizes.iter().scan(0u64, |acc, &s| {
            *acc += s;
            Some(*acc)
        })
    }
}
