//! End-to-end pipeline: snapshot ingestion and analysis, history fitting,
//! and forecasting an assembled curve at a target time.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::curve::{assemble_curve, zone_params_from_stats, CurveModel};
use crate::error::{Error, Result};
use crate::fit::{
    fit_entry_linear, fit_entry_quadratic, fit_logistic, fit_power_law, EntryRateFit, LogisticFit,
    PowerLawFit,
};
use crate::model::{
    core_zone_totals, peak_productivity, zone_boundary, EntryRate, RankedBibliography, RhoExponent,
};
use crate::sim::empirical_zone_split;

/// How snapshots are split into zones, recorded in persisted model files.
pub const ZONE_SPLIT_RULE: &str =
    "core = journals with productivity strictly above max(1, y_m(A, rho_hat))";

/// Totals and zone statistics derived from one bibliography snapshot.
///
/// `core_journals` is real-valued: the empirical split yields an integer
/// count, closed-form evaluation the analytic `T0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedStats {
    /// Paper total `A`.
    pub papers: f64,
    /// Journal total `T`.
    pub journals: f64,
    /// Entry rate estimate `T/A`.
    pub alpha: f64,
    pub rho: f64,
    /// Zone-boundary productivity used for the split, `max(1, y_m)`.
    pub boundary: f64,
    /// Core journal count `T0`; 0 when the core is empty.
    pub core_journals: f64,
    /// Core paper total `A0`; 0 when the core is empty.
    pub core_papers: f64,
    /// Top-journal productivity `X1`.
    pub peak_productivity: f64,
    /// No journal exceeded the boundary.
    pub empty_core: bool,
}

impl DerivedStats {
    /// Analyzes a ranked bibliography: entry-rate estimate, analytic
    /// boundary, and the empirical zone split. An empty core is recorded,
    /// not an error; a bibliography of single-paper journals has `T = A`
    /// and is rejected (the entry rate must stay below 1).
    pub fn from_ranked(ranked: &RankedBibliography) -> Result<Self> {
        let papers = ranked.papers() as f64;
        let journals = ranked.journals() as f64;
        let alpha = EntryRate::new(journals / papers).map_err(|_| {
            Error::Infeasible(format!(
                "entry-rate estimate T/A = {}/{} leaves the open interval (0, 1); \
                 every journal holds a single paper",
                journals, papers
            ))
        })?;
        let rho = RhoExponent::from_alpha(alpha);
        let boundary = zone_boundary(papers, rho)?.max(1.0);
        let (core_journals, core_papers, empty_core) = match empirical_zone_split(ranked, boundary)
        {
            Ok(split) => (split.core_journals as f64, split.core_papers as f64, false),
            Err(Error::EmptyCore) => (0.0, 0.0, true),
            Err(e) => return Err(e),
        };
        Ok(Self {
            papers,
            journals,
            alpha: alpha.get(),
            rho: rho.get(),
            boundary,
            core_journals,
            core_papers,
            peak_productivity: ranked.top() as f64,
            empty_core,
        })
    }

    /// Closed-form statistics of the steady-state model at the given size.
    pub fn analytic(alpha: EntryRate, papers: f64) -> Result<Self> {
        let rho = RhoExponent::from_alpha(alpha);
        let boundary = zone_boundary(papers, rho)?.max(1.0);
        let core = core_zone_totals(papers, rho)?;
        let peak = peak_productivity(papers, rho)?;
        Ok(Self {
            papers,
            journals: alpha.get() * papers,
            alpha: alpha.get(),
            rho: rho.get(),
            boundary,
            core_journals: core.journals,
            core_papers: core.papers,
            peak_productivity: peak,
            empty_core: false,
        })
    }
}

/// One observation of a growing literature: raw ranked data, derived
/// statistics, or both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub time: f64,
    pub ranked: Option<RankedBibliography>,
    pub derived: Option<DerivedStats>,
}

impl Snapshot {
    pub fn from_ranked(time: f64, ranked: RankedBibliography) -> Self {
        assert!(time.is_finite(), "snapshot times must be finite");
        Self {
            time,
            ranked: Some(ranked),
            derived: None,
        }
    }

    pub fn synthetic(time: f64, derived: DerivedStats) -> Self {
        assert!(time.is_finite(), "snapshot times must be finite");
        Self {
            time,
            ranked: None,
            derived: Some(derived),
        }
    }

    pub fn derived(&self) -> Option<&DerivedStats> {
        self.derived.as_ref()
    }
}

/// Reads a bibliography file (either CSV schema) into a snapshot.
pub fn ingest_snapshot(path: &Path, time: f64) -> Result<Snapshot> {
    Ok(Snapshot::from_ranked(
        time,
        crate::io::read_bibliography(path)?,
    ))
}

/// Fills in derived statistics from the ranked data. Idempotent: a snapshot
/// that already carries derived statistics passes through unchanged.
pub fn analyze_snapshot(snapshot: Snapshot) -> Result<Snapshot> {
    if snapshot.derived.is_some() {
        return Ok(snapshot);
    }
    let ranked = snapshot.ranked.as_ref().ok_or_else(|| {
        Error::InsufficientData(
            "snapshot carries neither ranked data nor derived statistics".into(),
        )
    })?;
    let derived = DerivedStats::from_ranked(ranked)?;
    Ok(Snapshot {
        derived: Some(derived),
        ..snapshot
    })
}

/// A snapshot of the closed-form model, used for noiseless histories.
pub fn analytic_snapshot(time: f64, alpha: EntryRate, papers: f64) -> Result<Snapshot> {
    Ok(Snapshot::synthetic(
        time,
        DerivedStats::analytic(alpha, papers)?,
    ))
}

/// Entry-rate law chosen for a history: the declining quadratic, or the
/// constant-rate line when the quadratic term is negligible (its
/// contribution at the horizon below 1% of the linear term) or the
/// quadratic is infeasible for the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum EntryModel {
    Declining { fit: EntryRateFit },
    Constant { fit: EntryRateFit },
}

impl EntryModel {
    pub fn select(points: &[(f64, f64)], horizon: Option<f64>) -> Result<(Self, Option<String>)> {
        match fit_entry_quadratic(points, horizon) {
            Ok(quad) => {
                if quad.lin_slope * quad.final_papers < 0.02 * quad.alpha_start {
                    Ok((
                        Self::Constant {
                            fit: fit_entry_linear(points, horizon)?,
                        },
                        None,
                    ))
                } else {
                    Ok((Self::Declining { fit: quad }, None))
                }
            }
            Err(Error::Infeasible(reason)) => Ok((
                Self::Constant {
                    fit: fit_entry_linear(points, horizon)?,
                },
                Some(format!(
                    "declining entry law infeasible for these data ({reason}); \
                     fitted a constant rate instead"
                )),
            )),
            Err(e) => Err(e),
        }
    }

    /// Predicted journal total at a paper total.
    pub fn predict(&self, papers: f64) -> f64 {
        self.fit().predict(papers)
    }

    pub fn fit(&self) -> &EntryRateFit {
        match self {
            Self::Declining { fit } | Self::Constant { fit } => fit,
        }
    }

    pub fn is_declining(&self) -> bool {
        matches!(self, Self::Declining { .. })
    }
}

/// The five fitted laws a forecast is built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryFits {
    /// Logistic paper growth A(t).
    pub growth: LogisticFit,
    /// Journal total T as a function of A.
    pub entry: EntryModel,
    /// Power law for the core journal count T0(A).
    pub core_journals: PowerLawFit,
    /// Power law for the core paper total A0(A).
    pub core_papers: PowerLawFit,
    /// Power law for the peak productivity X1(A).
    pub peak_productivity: PowerLawFit,
}

/// Analyzed snapshots plus the laws fitted across them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistorySeries {
    pub snapshots: Vec<Snapshot>,
    pub fits: HistoryFits,
    pub notes: Vec<String>,
}

impl HistorySeries {
    pub fn time_range(&self) -> (f64, f64) {
        (
            self.snapshots.first().map(|s| s.time).unwrap_or(f64::NAN),
            self.snapshots.last().map(|s| s.time).unwrap_or(f64::NAN),
        )
    }

    pub fn max_observed_papers(&self) -> f64 {
        self.snapshots
            .iter()
            .filter_map(|s| s.derived().map(|d| d.papers))
            .fold(0.0, f64::max)
    }
}

fn with_fit_context(err: Error, fit: &str) -> Error {
    match err {
        Error::Domain(m) => Error::Domain(format!("{fit}: {m}")),
        Error::Infeasible(m) => Error::Infeasible(format!("{fit}: {m}")),
        Error::InsufficientData(m) => Error::InsufficientData(format!("{fit}: {m}")),
        other => other,
    }
}

/// Analyzes every snapshot and fits the growth, entry, and core scaling
/// laws. Needs at least three snapshots at strictly increasing times with
/// nondecreasing paper totals, and at least two snapshots with a nonempty
/// core for the log-log fits (empty-core snapshots are excluded from those).
pub fn build_history(snapshots: Vec<Snapshot>) -> Result<HistorySeries> {
    let mut analyzed = Vec::with_capacity(snapshots.len());
    for snapshot in snapshots {
        analyzed.push(analyze_snapshot(snapshot)?);
    }
    if analyzed.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "growth fit: need at least three snapshots, got {}",
            analyzed.len()
        )));
    }
    if analyzed.windows(2).any(|w| w[1].time <= w[0].time) {
        return Err(Error::Domain(
            "snapshot times must be strictly increasing".into(),
        ));
    }
    let derived: Vec<DerivedStats> = analyzed
        .iter()
        .map(|s| *s.derived().expect("just analyzed"))
        .collect();
    if derived.windows(2).any(|w| w[1].papers < w[0].papers) {
        return Err(Error::Domain(
            "paper totals must be nondecreasing in time".into(),
        ));
    }

    let growth_points: Vec<(f64, f64)> = analyzed
        .iter()
        .zip(&derived)
        .map(|(s, d)| (s.time, d.papers))
        .collect();
    let growth = fit_logistic(&growth_points).map_err(|e| with_fit_context(e, "growth fit"))?;

    let entry_points: Vec<(f64, f64)> = derived.iter().map(|d| (d.papers, d.journals)).collect();
    let (entry, entry_note) =
        EntryModel::select(&entry_points, None).map_err(|e| with_fit_context(e, "entry fit"))?;

    let core: Vec<&DerivedStats> = derived.iter().filter(|d| !d.empty_core).collect();
    if core.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "core scaling fits: need at least two snapshots with a nonempty core, got {}",
            core.len()
        )));
    }
    let fit_core = |name: &str, select: fn(&DerivedStats) -> f64| -> Result<PowerLawFit> {
        let points: Vec<(f64, f64)> = core.iter().map(|d| (d.papers, select(d))).collect();
        fit_power_law(&points).map_err(|e| with_fit_context(e, name))
    };
    let core_journals = fit_core("core-journal fit", |d| d.core_journals)?;
    let core_papers = fit_core("core-paper fit", |d| d.core_papers)?;
    let peak = fit_core("peak-productivity fit", |d| d.peak_productivity)?;

    Ok(HistorySeries {
        snapshots: analyzed,
        fits: HistoryFits {
            growth,
            entry,
            core_journals,
            core_papers,
            peak_productivity: peak,
        },
        notes: entry_note.into_iter().collect(),
    })
}

/// Scalar predictions at the target time, after ordering clamps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictedScalars {
    pub papers: f64,
    pub journals: f64,
    pub alpha: f64,
    pub core_journals: f64,
    pub core_papers: f64,
    pub peak_productivity: f64,
}

/// A forecast curve with its scalar anchors and any clamping applied to
/// keep the zone ordering consistent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forecast {
    pub target_time: f64,
    pub predicted: PredictedScalars,
    pub curve: CurveModel,
    pub warnings: Vec<String>,
    /// The target lies outside the observed time range, or the predicted
    /// paper total exceeds 1.5 times the largest observed one.
    pub extrapolated: bool,
}

/// Clamps fitted zone scalars to the ordering T0 <= T, A0 <= A, X1 <= A0,
/// each against the already-clamped bound, recording a warning per clamp.
fn clamp_zone_scalars(
    journals: f64,
    papers: f64,
    core_journals: f64,
    core_papers: f64,
    peak: f64,
    warnings: &mut Vec<String>,
) -> (f64, f64, f64) {
    let mut t0 = core_journals;
    if t0 > journals {
        warnings.push(format!(
            "core journal forecast {t0} exceeds the journal total {journals}; clamped"
        ));
        t0 = journals;
    }
    let mut a0 = core_papers;
    if a0 > papers {
        warnings.push(format!(
            "core paper forecast {a0} exceeds the paper total {papers}; clamped"
        ));
        a0 = papers;
    }
    let mut x1 = peak;
    if x1 > a0 {
        warnings.push(format!(
            "peak productivity forecast {x1} exceeds the core paper total {a0}; clamped"
        ));
        x1 = a0;
    }
    (t0, a0, x1)
}

/// Extends every fitted law to `target_time` and assembles the implied
/// two-zone curve. `target_time` may be `+inf`: the logistic saturates at
/// its capacity, so the forecast stays finite.
pub fn forecast(history: &HistorySeries, target_time: f64) -> Result<Forecast> {
    if target_time.is_nan() {
        return Err(Error::Domain("target time is NaN".into()));
    }
    let papers = history.fits.growth.predict(target_time);
    if !(papers > 0.0 && papers.is_finite()) {
        return Err(Error::Infeasible(format!(
            "growth law predicts paper total {papers} at time {target_time}"
        )));
    }
    let journals = history.fits.entry.predict(papers);
    if !(journals > 0.0 && journals.is_finite()) {
        return Err(Error::Infeasible(format!(
            "entry law predicts journal total {journals} at paper total {papers}"
        )));
    }
    let alpha = EntryRate::new(journals / papers).map_err(|_| {
        Error::Infeasible(format!(
            "predicted entry rate T/A = {journals}/{papers} leaves the open interval (0, 1)"
        ))
    })?;
    let rho = RhoExponent::from_alpha(alpha);

    let mut warnings = Vec::new();
    let (t0, a0, x1) = clamp_zone_scalars(
        journals,
        papers,
        history.fits.core_journals.predict(papers),
        history.fits.core_papers.predict(papers),
        history.fits.peak_productivity.predict(papers),
        &mut warnings,
    );
    let mut boundary = zone_boundary(papers, rho)?.max(1.0);
    if boundary > x1 {
        warnings.push(format!(
            "analytic boundary {boundary} exceeds the forecast peak productivity {x1}; \
             using the peak"
        ));
        boundary = x1;
    }

    let zone = zone_params_from_stats(rho, alpha, boundary, t0, a0, x1)?;
    let curve = assemble_curve(&zone, journals, papers)?;
    let (t_first, t_last) = history.time_range();
    let extrapolated = target_time < t_first
        || target_time > t_last
        || papers > 1.5 * history.max_observed_papers();

    Ok(Forecast {
        target_time,
        predicted: PredictedScalars {
            papers,
            journals,
            alpha: alpha.get(),
            core_journals: zone.core_journals,
            core_papers: zone.core_papers,
            peak_productivity: zone.peak_productivity,
        },
        curve,
        warnings,
        extrapolated,
    })
}

/// One row of a history manifest: a snapshot time and its bibliography file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryInput {
    pub time: f64,
    pub path: PathBuf,
}

/// Reads a `t,path` manifest; relative paths resolve against the manifest's
/// directory.
pub fn read_history_manifest(path: &Path) -> Result<Vec<HistoryInput>> {
    let ingest_err = |line: u64, message: String| Error::Ingest {
        path: path.display().to_string(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)?;
    let headers: Vec<String> = reader
        .headers()?
        .iter()
        .map(|h| h.trim().to_ascii_lowercase())
        .collect();
    if headers != ["t", "path"] {
        return Err(ingest_err(
            1,
            format!(
                "unrecognized header '{}'; expected 't,path'",
                headers.join(",")
            ),
        ));
    }
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    let mut inputs = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let time: f64 = record
            .get(0)
            .unwrap_or("")
            .trim()
            .parse()
            .map_err(|_| ingest_err(line, "snapshot time is not a number".into()))?;
        if !time.is_finite() {
            return Err(ingest_err(
                line,
                format!("snapshot time {time} is not finite"),
            ));
        }
        let raw = record
            .get(1)
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| ingest_err(line, "missing snapshot path".into()))?;
        let resolved = if Path::new(raw).is_absolute() {
            PathBuf::from(raw)
        } else {
            base.join(raw)
        };
        inputs.push(HistoryInput {
            time,
            path: resolved,
        });
    }
    if inputs.is_empty() {
        return Err(ingest_err(1, "no snapshots listed".into()));
    }
    Ok(inputs)
}

/// Checksum of one ingested bibliography file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputChecksum {
    pub path: String,
    pub time: f64,
    pub sha256: String,
}

/// Persistable record of a fitted history: every law's coefficients, the
/// zone-split rule they assume, and checksums of the ingested inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedModelsDoc {
    pub zone_split_rule: String,
    pub growth: LogisticFit,
    pub entry: EntryModel,
    pub core_journals: PowerLawFit,
    pub core_papers: PowerLawFit,
    pub peak_productivity: PowerLawFit,
    pub notes: Vec<String>,
    pub inputs: Vec<InputChecksum>,
}

impl FittedModelsDoc {
    pub fn new(history: &HistorySeries, inputs: Vec<InputChecksum>) -> Self {
        Self {
            zone_split_rule: ZONE_SPLIT_RULE.to_string(),
            growth: history.fits.growth,
            entry: history.fits.entry.clone(),
            core_journals: history.fits.core_journals,
            core_papers: history.fits.core_papers,
            peak_productivity: history.fits.peak_productivity,
            notes: history.notes.clone(),
            inputs,
        }
    }
}
