//! Two-zone cumulative curve assembly and shape classification.
//!
//! The core zone follows the within-core ratio line: the rank-r journal
//! holds `X1/(k(r-1)+1)` papers, with `k` solved so the core sum lands on
//! `A0` exactly. The normal zone follows the shifted Egghe law
//! `R(r) = A0 + a ln(1 + b(r - T0))`. Curve shape is read off the two
//! curvature signs with respect to log rank: `sign(1-k)` for the core,
//! `sign(1 - b T0)` for the normal zone.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EntryRate, RhoExponent, ZoneParams};
use crate::special::EULER_MASCHERONI;

/// Sign of a zone's second derivative with respect to log rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurvatureSign {
    Negative,
    Zero,
    Positive,
}

impl CurvatureSign {
    pub fn of(value: f64) -> Self {
        assert!(value.is_finite(), "curvature argument must be finite");
        if value > 0.0 {
            Self::Positive
        } else if value < 0.0 {
            Self::Negative
        } else {
            Self::Zero
        }
    }

    /// Exact zeros resolve to the concave-up branch: the boundary cases
    /// k = 1 and bT0 = 1 have measure zero and a log-linear zone reads as
    /// the limit of concave-up ones.
    pub fn concave_up(self) -> bool {
        !matches!(self, Self::Negative)
    }
}

/// The four curve shapes, by zone curvature: core then normal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShapeLabel {
    /// Both zones concave up.
    J,
    /// Core up, normal down (Groos Droop in the tail).
    S,
    /// Core down, normal up.
    #[serde(rename = "REVERSED_S")]
    ReversedS,
    /// Both zones concave down.
    #[serde(rename = "CONCAVE_DOWN")]
    ConcaveDown,
}

impl fmt::Display for ShapeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::J => "J",
            Self::S => "S",
            Self::ReversedS => "REVERSED_S",
            Self::ConcaveDown => "CONCAVE_DOWN",
        };
        f.write_str(s)
    }
}

/// Shape label together with the curvature signs it was derived from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeClass {
    pub core_sign: CurvatureSign,
    pub normal_sign: CurvatureSign,
    pub label: ShapeLabel,
}

impl fmt::Display for ShapeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.label.fmt(f)
    }
}

/// Normal-zone law parameters: `R(r) = A0 + a ln(1 + b(r - T0))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EggheParams {
    /// Papers per unit log rank.
    pub a: f64,
    /// Inverse rank scale.
    pub b: f64,
    /// Papers in the normal zone, `A1`.
    pub normal_papers: f64,
    /// Journals in the normal zone, `T1`.
    pub normal_journals: f64,
    /// Zone-boundary productivity the parameters were derived from.
    pub boundary: f64,
}

/// Derives `a` and `b` from the normal-zone totals and the boundary:
/// `a = A1/ln(e^γ y_m)`, `b = (e^γ y_m - 1)/T1`, natural log throughout.
pub fn egghe_params(
    normal_papers: f64,
    normal_journals: f64,
    boundary: f64,
) -> Result<EggheParams> {
    if !(normal_papers > 0.0 && normal_papers.is_finite()) {
        return Err(Error::Infeasible(format!(
            "normal zone holds no papers (A1 = {normal_papers})"
        )));
    }
    if !(normal_journals > 0.0 && normal_journals.is_finite()) {
        return Err(Error::Infeasible(format!(
            "normal zone holds no journals (T1 = {normal_journals})"
        )));
    }
    let scaled = EULER_MASCHERONI.exp() * boundary;
    if scaled.is_nan() || scaled <= 1.0 {
        return Err(Error::Domain(format!(
            "zone boundary {boundary} is at or below e^-gamma; log-rank scale is undefined"
        )));
    }
    Ok(EggheParams {
        a: normal_papers / scaled.ln(),
        b: (scaled - 1.0) / normal_journals,
        normal_papers,
        normal_journals,
        boundary,
    })
}

/// Cumulative papers of the top `rank` journals on the core ratio line,
/// `Σ_{i=1..rank} X1/(k(i-1)+1)`.
pub fn core_cumulative(peak: f64, ratio_slope: f64, rank: u64) -> f64 {
    assert!(rank >= 1, "ranks start at 1");
    assert!(
        peak > 0.0 && ratio_slope > 0.0,
        "core parameters are positive"
    );
    (0..rank)
        .map(|i| peak / (ratio_slope * i as f64 + 1.0))
        .sum()
}

/// Solves the ratio-line slope `k` so the core sum at `core_journals`
/// ranks equals `core_papers`. The sum is strictly decreasing in `k`, so
/// bisection on a doubling bracket converges unconditionally.
pub fn solve_ratio_slope(peak: f64, core_journals: u64, core_papers: f64) -> Result<f64> {
    if core_journals < 2 {
        return Err(Error::DegenerateCore);
    }
    let bounds = (peak, core_journals as f64 * peak);
    if !(core_papers > bounds.0 && core_papers < bounds.1) {
        return Err(Error::Infeasible(format!(
            "core papers {core_papers} outside the attainable open interval \
             ({}, {}) for peak {peak} over {core_journals} journals",
            bounds.0, bounds.1
        )));
    }
    let residual = |k: f64| core_cumulative(peak, k, core_journals) - core_papers;
    let mut lo = 1e-9;
    if residual(lo) < 0.0 {
        return Err(Error::Infeasible(format!(
            "core papers {core_papers} too close to the flat-core bound {}",
            bounds.1
        )));
    }
    let mut hi = 1.0;
    let mut doublings = 0;
    while residual(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return Err(Error::Infeasible(format!(
                "no slope below 2^60 reaches core papers {core_papers}"
            )));
        }
    }
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Normal-zone cumulative total `A0 + a ln(1 + b(rank - T0))`.
///
/// `rank` must lie strictly past the real-valued core journal count.
pub fn normal_cumulative(
    egghe: &EggheParams,
    core_journals: f64,
    core_papers: f64,
    rank: f64,
) -> Result<f64> {
    if rank <= core_journals {
        return Err(Error::Domain(format!(
            "rank {rank} is not past the core boundary {core_journals}"
        )));
    }
    Ok(core_papers + egghe.a * (1.0 + egghe.b * (rank - core_journals)).ln())
}

/// Curvature signs of the two zones with respect to log rank: the core
/// second derivative carries the sign of `1 - k`, the normal zone the sign
/// of `1 - b T0` (real-valued `T0`).
pub fn curvature_signs(zone: &ZoneParams, egghe: &EggheParams) -> (CurvatureSign, CurvatureSign) {
    (
        CurvatureSign::of(1.0 - zone.ratio_slope),
        CurvatureSign::of(1.0 - egghe.b * zone.core_journals),
    )
}

/// Maps the two curvature signs to a shape label; exact zeros count as
/// concave up.
pub fn classify(core_sign: CurvatureSign, normal_sign: CurvatureSign) -> ShapeClass {
    let label = match (core_sign.concave_up(), normal_sign.concave_up()) {
        (true, true) => ShapeLabel::J,
        (false, true) => ShapeLabel::ReversedS,
        (true, false) => ShapeLabel::S,
        (false, false) => ShapeLabel::ConcaveDown,
    };
    ShapeClass {
        core_sign,
        normal_sign,
        label,
    }
}

/// Which zone a sampled point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Zone {
    Core,
    Normal,
}

impl fmt::Display for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Core => "core",
            Self::Normal => "normal",
        })
    }
}

/// One sampled point of the assembled curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub rank: f64,
    pub cumulative: f64,
    pub zone: Zone,
}

/// Assembled two-zone curve with its sampled points and shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveModel {
    pub zone: ZoneParams,
    pub egghe: EggheParams,
    /// Journal total `T`.
    pub journals: f64,
    /// Paper total `A`.
    pub papers: f64,
    pub shape: ShapeClass,
    pub samples: Vec<CurveSample>,
}

impl CurveModel {
    /// Cumulative papers at a (possibly fractional) rank. Integer core
    /// ranks evaluate the ratio-line sum exactly; fractional ranks below
    /// the first normal rank interpolate linearly; everything past
    /// `T0_int + 1` follows the normal law, including ranks beyond `T`
    /// (extrapolation along the fitted law).
    pub fn evaluate(&self, rank: f64) -> Result<f64> {
        if rank.is_nan() || rank < 1.0 {
            return Err(Error::Domain(format!("rank {rank} is below 1")));
        }
        let m = self.zone.core_journals_int;
        let mf = m as f64;
        let core_at =
            |r: u64| core_cumulative(self.zone.peak_productivity, self.zone.ratio_slope, r);
        if rank <= mf {
            let lo = rank.floor() as u64;
            let base = core_at(lo);
            let frac = rank - lo as f64;
            if frac == 0.0 {
                return Ok(base);
            }
            Ok(base + frac * (core_at(lo + 1) - base))
        } else if rank < mf + 1.0 {
            let base = core_at(m);
            let next = self.normal_at(mf + 1.0)?;
            Ok(base + (rank - mf) * (next - base))
        } else {
            self.normal_at(rank)
        }
    }

    fn normal_at(&self, rank: f64) -> Result<f64> {
        normal_cumulative(
            &self.egghe,
            self.zone.core_journals,
            self.zone.core_papers,
            rank,
        )
    }
}

/// Builds zone parameters from measured or analytic statistics, solving
/// the core ratio slope. A single-journal core cannot pin a slope: it is
/// accepted with the sentinel `k = 1` provided the peak agrees with the
/// core total within 5%, and the peak is rescaled to the core total so the
/// anchor stays exact.
pub fn zone_params_from_stats(
    rho: RhoExponent,
    alpha: EntryRate,
    boundary: f64,
    core_journals: f64,
    core_papers: f64,
    peak: f64,
) -> Result<ZoneParams> {
    let core_int = core_journals.round().max(1.0) as u64;
    let (slope, peak) = if core_int >= 2 {
        (solve_ratio_slope(peak, core_int, core_papers)?, peak)
    } else {
        if (peak - core_papers).abs() > 0.05 * core_papers {
            return Err(Error::Infeasible(format!(
                "single-journal core: peak {peak} disagrees with core papers \
                 {core_papers} by more than 5%"
            )));
        }
        (1.0, core_papers)
    };
    ZoneParams::new(
        rho,
        alpha,
        boundary,
        core_journals,
        core_papers,
        peak,
        slope,
    )
}

/// Zone parameters of the closed-form steady state at entry rate `alpha`
/// and bibliography size `papers`.
pub fn analytic_zone_params(alpha: EntryRate, papers: f64) -> Result<ZoneParams> {
    let rho = RhoExponent::from_alpha(alpha);
    let boundary = crate::model::zone_boundary(papers, rho)?;
    let core = crate::model::core_zone_totals(papers, rho)?;
    let peak = crate::model::peak_productivity(papers, rho)?;
    zone_params_from_stats(rho, alpha, boundary, core.journals, core.papers, peak)
}

/// Assembles the full curve: normal-zone totals from the real core counts,
/// the boundary re-derived from the core ratio line (`X1/(k(T0_int-1)+1)`,
/// keeping the two zones mutually consistent), Egghe parameters from the
/// closure, and samples over the rank grid.
pub fn assemble_curve(zone: &ZoneParams, journals: f64, papers: f64) -> Result<CurveModel> {
    if !(journals.is_finite() && papers.is_finite()) {
        return Err(Error::Domain(
            "journal and paper totals must be finite".into(),
        ));
    }
    if journals < zone.core_journals_int as f64 {
        return Err(Error::Infeasible(format!(
            "journal total {journals} is below the integer core count {}",
            zone.core_journals_int
        )));
    }
    let normal_journals = journals - zone.core_journals;
    let normal_papers = papers - zone.core_papers;
    let boundary = crate::model::zone_boundary_from_core(
        zone.peak_productivity,
        zone.core_journals_int,
        zone.ratio_slope,
    );
    let egghe = egghe_params(normal_papers, normal_journals, boundary)?;
    let (core_sign, normal_sign) = curvature_signs(zone, &egghe);
    let mut model = CurveModel {
        zone: *zone,
        egghe,
        journals,
        papers,
        shape: classify(core_sign, normal_sign),
        samples: Vec::new(),
    };
    model.samples = sample_curve(&model)?;
    Ok(model)
}

/// Steady-state curve at entry rate `alpha` for `papers` papers, with the
/// journal total `T = alpha A`.
pub fn analytic_curve(alpha: EntryRate, papers: f64) -> Result<CurveModel> {
    let zone = analytic_zone_params(alpha, papers)?;
    assemble_curve(&zone, alpha.get() * papers, papers)
}

/// Integer ranks up to 10^4 (always covering the core), geometric
/// subsampling of about 500 points beyond, and the exact final rank `T`.
fn sample_curve(model: &CurveModel) -> Result<Vec<CurveSample>> {
    const DENSE_LIMIT: u64 = 10_000;
    const SPARSE_POINTS: u32 = 500;

    let core_int = model.zone.core_journals_int;
    let floor_t = model.journals.floor() as u64;
    let dense_to = floor_t.min(DENSE_LIMIT.max(core_int));
    let mut ranks: Vec<f64> = (1..=dense_to).map(|r| r as f64).collect();
    if floor_t > dense_to {
        let ratio = (floor_t as f64 / dense_to as f64).powf(1.0 / SPARSE_POINTS as f64);
        let mut last = dense_to;
        for j in 1..=SPARSE_POINTS {
            let r = (dense_to as f64 * ratio.powi(j as i32)).round() as u64;
            if r > last && r <= floor_t {
                ranks.push(r as f64);
                last = r;
            }
        }
    }
    if ranks.last().copied() != Some(model.journals) && model.journals > *ranks.last().unwrap() {
        ranks.push(model.journals);
    }

    ranks
        .into_iter()
        .map(|rank| {
            let (cumulative, zone) = if rank <= core_int as f64 {
                (
                    core_cumulative(
                        model.zone.peak_productivity,
                        model.zone.ratio_slope,
                        rank as u64,
                    ),
                    Zone::Core,
                )
            } else {
                (
                    normal_cumulative(
                        &model.egghe,
                        model.zone.core_journals,
                        model.zone.core_papers,
                        rank,
                    )?,
                    Zone::Normal,
                )
            };
            Ok(CurveSample {
                rank,
                cumulative,
                zone,
            })
        })
        .collect()
}
