//! Least-squares estimators behind the forecasting pipeline: logistic
//! growth of the paper total, the quadratic entry-rate law relating
//! journals to papers, and log-log scaling of the zone statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordinary least-squares line `y = intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    pub residual_rms: f64,
}

impl LinearFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Power law `Y = exp(ln_scale)·A^exponent`, fitted in log-log space.
/// `residual_rms` is measured in log units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    /// Intercept of the log-log line (natural-log units).
    pub ln_scale: f64,
    pub exponent: f64,
    pub residual_rms: f64,
}

impl PowerLawFit {
    pub fn predict(&self, a: f64) -> f64 {
        (self.ln_scale + self.exponent * a.ln()).exp()
    }
}

/// Declining entry-rate law `T(A) = alpha_start·A − ½·lin_slope·A²`, so the
/// marginal entry rate is `alpha(A) = alpha_start − lin_slope·A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntryRateFit {
    pub alpha_start: f64,
    /// Entry rate at the fitting horizon `final_papers`.
    pub alpha_end: f64,
    pub final_papers: f64,
    /// Decline per paper, `(alpha_start − alpha_end)/final_papers`.
    pub lin_slope: f64,
    pub residual_rms: f64,
}

impl EntryRateFit {
    /// Average entry rate over the whole run, `(alpha_start + alpha_end)/2`.
    pub fn mean_rate(&self) -> f64 {
        0.5 * (self.alpha_start + self.alpha_end)
    }

    /// Journal total at `papers` papers.
    pub fn predict(&self, papers: f64) -> f64 {
        self.alpha_start * papers - 0.5 * self.lin_slope * papers * papers
    }
}

/// Logistic growth `A(t) = capacity/(1 + exp(−rate·(t − midpoint)))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticFit {
    pub capacity: f64,
    pub rate: f64,
    pub midpoint: f64,
    pub residual_rms: f64,
    pub iterations: usize,
}

impl LogisticFit {
    pub fn predict(&self, t: f64) -> f64 {
        self.capacity / (1.0 + (-self.rate * (t - self.midpoint)).exp())
    }
}

/// Mean-centered ordinary least squares.
pub fn fit_linear(points: &[(f64, f64)]) -> Result<LinearFit> {
    if points.len() < 2 {
        return Err(Error::InsufficientData(
            "a line needs at least two points".into(),
        ));
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("all x values are equal".into()));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Ok(LinearFit {
        intercept,
        slope,
        residual_rms: (sse / n).sqrt(),
    })
}

/// Least squares on `(ln A, ln Y)`; natural logarithms.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.iter().any(|&(a, y)| a <= 0.0 || y <= 0.0) {
        return Err(Error::Domain(
            "power-law fitting needs strictly positive coordinates".into(),
        ));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(a, y)| (a.ln(), y.ln())).collect();
    let line = fit_linear(&logs)?;
    Ok(PowerLawFit {
        ln_scale: line.intercept,
        exponent: line.slope,
        residual_rms: line.residual_rms,
    })
}

/// Least-squares fit of `T = c1·A + c2·A²` (no intercept: zero papers means
/// zero journals), reparameterized as the declining entry-rate law with
/// `alpha_start = c1` and `lin_slope = −2·c2`. The rate at the horizon
/// (`horizon`, or the largest observed `A`) must stay positive and must not
/// exceed the starting rate.
pub fn fit_entry_quadratic(points: &[(f64, f64)], horizon: Option<f64>) -> Result<EntryRateFit> {
    if points.len() < 2 {
        return Err(Error::InsufficientData(
            "the quadratic entry law needs at least two points".into(),
        ));
    }
    if points.iter().any(|&(a, _)| a <= 0.0) {
        return Err(Error::Domain("paper totals must be positive".into()));
    }
    let scale = points.iter().map(|p| p.0).fold(0.0, f64::max);
    let mut s22 = 0.0;
    let mut s23 = 0.0;
    let mut s44 = 0.0;
    let mut v1 = 0.0;
    let mut v2 = 0.0;
    for &(a, t) in points {
        let u = a / scale;
        s22 += u * u;
        s23 += u * u * u;
        s44 += u * u * u * u;
        v1 += u * t;
        v2 += u * u * t;
    }
    let det = s22 * s44 - s23 * s23;
    if det.abs() <= 1e-12 * s22 * s44 {
        return Err(Error::InsufficientData(
            "the quadratic entry law needs two distinct paper totals".into(),
        ));
    }
    let d1 = (v1 * s44 - v2 * s23) / det;
    let d2 = (v2 * s22 - v1 * s23) / det;
    let c1 = d1 / scale;
    let c2 = d2 / (scale * scale);

    let alpha_start = c1;
    let mut lin_slope = -2.0 * c2;
    let final_papers = horizon.unwrap_or(scale);
    // Exactly linear data leaves c2 at rounding-noise level; snap it to zero
    // so the constant-rate invariant alpha_end = alpha_start holds exactly.
    if lin_slope.abs() * final_papers <= 1e-12 * alpha_start.abs() {
        lin_slope = 0.0;
    }
    let alpha_end = alpha_start - lin_slope * final_papers;

    if !(alpha_start > 0.0 && alpha_start < 1.0) {
        return Err(Error::Infeasible(format!(
            "fitted starting entry rate {alpha_start} is outside (0, 1)"
        )));
    }
    if alpha_end <= 0.0 {
        return Err(Error::Infeasible(format!(
            "fitted entry rate hits zero before the horizon (alpha_end = {alpha_end})"
        )));
    }
    if alpha_end > alpha_start {
        return Err(Error::Infeasible(format!(
            "fitted entry rate rises with A (alpha_end = {alpha_end} > alpha_start = {alpha_start})"
        )));
    }

    let sse: f64 = points
        .iter()
        .map(|&(a, t)| (t - (c1 * a + c2 * a * a)).powi(2))
        .sum();
    Ok(EntryRateFit {
        alpha_start,
        alpha_end,
        final_papers,
        lin_slope,
        residual_rms: (sse / points.len() as f64).sqrt(),
    })
}

/// Constant-rate entry law `T = alpha·A` through the origin; accepts a
/// single point.
pub fn fit_entry_linear(points: &[(f64, f64)], horizon: Option<f64>) -> Result<EntryRateFit> {
    if points.is_empty() {
        return Err(Error::InsufficientData(
            "the linear entry law needs at least one point".into(),
        ));
    }
    if points.iter().any(|&(a, _)| a <= 0.0) {
        return Err(Error::Domain("paper totals must be positive".into()));
    }
    let saa: f64 = points.iter().map(|&(a, _)| a * a).sum();
    let sat: f64 = points.iter().map(|&(a, t)| a * t).sum();
    let alpha = sat / saa;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Infeasible(format!(
            "fitted entry rate {alpha} is outside (0, 1)"
        )));
    }
    let final_papers = horizon.unwrap_or_else(|| points.iter().map(|p| p.0).fold(0.0, f64::max));
    let sse: f64 = points.iter().map(|&(a, t)| (t - alpha * a).powi(2)).sum();
    Ok(EntryRateFit {
        alpha_start: alpha,
        alpha_end: alpha,
        final_papers,
        lin_slope: 0.0,
        residual_rms: (sse / points.len() as f64).sqrt(),
    })
}

fn solve3(mut m: [[f64; 3]; 3], mut rhs: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot =
            (col..3).max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (dst, src) in m[row].iter_mut().zip(pivot_row).skip(col) {
                *dst -= f * src;
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = [0.0; 3];
    for col in (0..3).rev() {
        let mut acc = rhs[col];
        for k in col + 1..3 {
            acc -= m[col][k] * x[k];
        }
        x[col] = acc / m[col][col];
    }
    Some(x)
}

/// Damped Gauss-Newton fit of the three-parameter logistic. Starts from
/// `capacity = 2·max(A)`, `midpoint = median t`, and a rate taken from the
/// endpoint slope of the logit transform; converged when the relative step
/// drops below 1e-8, with a 200-iteration cap.
pub fn fit_logistic(points: &[(f64, f64)]) -> Result<LogisticFit> {
    if points.len() < 3 {
        return Err(Error::InsufficientData(
            "logistic fitting needs at least three points".into(),
        ));
    }
    if points.iter().any(|&(_, a)| a <= 0.0) {
        return Err(Error::Domain("paper totals must be positive".into()));
    }
    for pair in points.windows(2) {
        if pair[1].0 <= pair[0].0 || pair[1].1 <= pair[0].1 {
            return Err(Error::Domain(
                "paper totals must be strictly increasing in time".into(),
            ));
        }
    }

    let n = points.len();
    let max_a = points[n - 1].1;
    let capacity0 = 2.0 * max_a;
    let logit = |a: f64| (a / (capacity0 - a)).ln();
    let rate0 = (logit(points[n - 1].1) - logit(points[0].1)) / (points[n - 1].0 - points[0].0);
    let midpoint0 = points[n / 2].0;
    let mut theta = [capacity0, rate0, midpoint0];

    let sse_of = |th: &[f64; 3]| -> f64 {
        points
            .iter()
            .map(|&(t, a)| {
                let s = 1.0 / (1.0 + (-th[1] * (t - th[2])).exp());
                (a - th[0] * s).powi(2)
            })
            .sum()
    };
    let mut sse = sse_of(&theta);
    let mut lambda = 1e-3;

    for iter in 1..=200usize {
        let mut jtj = [[0.0f64; 3]; 3];
        let mut jte = [0.0f64; 3];
        for &(t, a) in points {
            let s = 1.0 / (1.0 + (-theta[1] * (t - theta[2])).exp());
            let grad = [
                s,
                theta[0] * s * (1.0 - s) * (t - theta[2]),
                -theta[0] * s * (1.0 - s) * theta[1],
            ];
            let e = a - theta[0] * s;
            for i in 0..3 {
                for j in 0..3 {
                    jtj[i][j] += grad[i] * grad[j];
                }
                jte[i] += grad[i] * e;
            }
        }

        let mut stepped = false;
        for _ in 0..25 {
            let mut damped = jtj;
            for (i, row) in damped.iter_mut().enumerate() {
                row[i] += lambda;
            }
            if let Some(delta) = solve3(damped, jte) {
                let cand = [
                    theta[0] + delta[0],
                    theta[1] + delta[1],
                    theta[2] + delta[2],
                ];
                if cand[0] > 0.0 && cand[1] > 0.0 {
                    let cand_sse = sse_of(&cand);
                    if cand_sse <= sse * (1.0 + 1e-12) {
                        let rel_step = (0..3)
                            .map(|i| delta[i].abs() / theta[i].abs().max(1e-12))
                            .fold(0.0, f64::max);
                        let improvement = sse - cand_sse;
                        theta = cand;
                        sse = cand_sse;
                        lambda = (lambda / 3.0).max(1e-12);
                        stepped = true;
                        // Converged when the step no longer moves the
                        // parameters, or the objective sits at its floating
                        // point floor (exact fits never shrink the step
                        // below noise, they stop improving instead).
                        if rel_step < 1e-8 || improvement <= 1e-12 * sse {
                            return Ok(finished(theta, sse, n, iter));
                        }
                        break;
                    }
                }
            }
            lambda *= 10.0;
            if lambda > 1e12 {
                break;
            }
        }
        if !stepped {
            return Err(Error::NonConvergence {
                best: Box::new(finished(theta, sse, n, iter)),
                iterations: iter,
            });
        }
    }
    Err(Error::NonConvergence {
        best: Box::new(finished(theta, sse, n, 200)),
        iterations: 200,
    })
}

fn finished(theta: [f64; 3], sse: f64, n: usize, iterations: usize) -> LogisticFit {
    LogisticFit {
        capacity: theta[0],
        rate: theta[1],
        midpoint: theta[2],
        residual_rms: (sse.max(0.0) / n as f64).sqrt(),
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn linear_examples() {
        let fit = fit_linear(&[(0.0, 1.0), (1.0, 3.0)]).unwrap();
        assert_relative_eq!(fit.intercept, 1.0, epsilon = 1e-12);
        assert_relative_eq!(fit.slope, 2.0, epsilon = 1e-12);
        assert_relative_eq!(fit.residual_rms, 0.0, epsilon = 1e-12);

        let fit = fit_linear(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)]).unwrap();
        assert_relative_eq!(fit.intercept, 0.0, epsilon = 1e-12);
        assert_relative_eq!(fit.slope, 1.0, epsilon = 1e-12);

        let fit = fit_linear(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]).unwrap();
        assert_relative_eq!(fit.slope, 0.0, epsilon = 1e-12);
        assert_relative_eq!(fit.intercept, 1.0 / 3.0, epsilon = 1e-12);

        assert!(fit_linear(&[(1.0, 2.0)]).is_err());
        assert!(matches!(
            fit_linear(&[(1.0, 2.0), (1.0, 3.0)]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn power_law_examples() {
        let fit = fit_power_law(&[(100.0, 100.0), (10_000.0, 1_000.0)]).unwrap();
        assert_relative_eq!(fit.ln_scale, 10f64.ln(), epsilon = 1e-12);
        assert_relative_eq!(fit.exponent, 0.5, epsilon = 1e-12);
        assert_relative_eq!(fit.predict(400.0), 200.0, max_relative = 1e-12);

        let e = std::f64::consts::E;
        let fit = fit_power_law(&[(e, e), (e * e, e * e)]).unwrap();
        assert_relative_eq!(fit.ln_scale, 0.0, epsilon = 1e-12);
        assert_relative_eq!(fit.exponent, 1.0, epsilon = 1e-12);

        assert!(matches!(
            fit_power_law(&[(1.0, 1.0), (-2.0, 4.0)]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn core_journal_scaling_slope() {
        // Analytic core journal counts grow as A^(1/(rho+1)).
        let rho = crate::model::rho_from_alpha(0.1).unwrap();
        let points: Vec<(f64, f64)> = [1e3, 1e4, 1e5]
            .iter()
            .map(|&a| (a, crate::model::core_zone_totals(a, rho).unwrap().journals))
            .collect();
        let fit = fit_power_law(&points).unwrap();
        assert_relative_eq!(fit.exponent, 9.0 / 19.0, max_relative = 1e-9);
        assert!(fit.residual_rms < 1e-10);
    }

    #[test]
    fn entry_quadratic_round_trip() {
        let (alpha_s, alpha_f, a_f) = (0.3, 0.1, 1000.0);
        let k = (alpha_s - alpha_f) / a_f;
        let points: Vec<(f64, f64)> = (1..=10)
            .map(|i| {
                let a = 100.0 * i as f64;
                (a, alpha_s * a - 0.5 * k * a * a)
            })
            .collect();
        assert_relative_eq!(points[9].1, 200.0, epsilon = 1e-9);
        let fit = fit_entry_quadratic(&points, None).unwrap();
        assert_relative_eq!(fit.alpha_start, 0.3, epsilon = 1e-9);
        assert_relative_eq!(fit.alpha_end, 0.1, epsilon = 1e-9);
        assert_relative_eq!(fit.mean_rate(), 0.2, epsilon = 1e-9);
        assert_relative_eq!(fit.final_papers, 1000.0);
        assert_relative_eq!(fit.predict(1000.0), 200.0, max_relative = 1e-9);
    }

    #[test]
    fn entry_quadratic_constant_rate() {
        let points: Vec<(f64, f64)> = (1..=6).map(|i| (50.0 * i as f64, 5.0 * i as f64)).collect();
        let fit = fit_entry_quadratic(&points, None).unwrap();
        assert_relative_eq!(fit.alpha_start, 0.1, epsilon = 1e-10);
        assert_eq!(fit.lin_slope, 0.0);
        assert_eq!(fit.alpha_end, fit.alpha_start);
    }

    #[test]
    fn entry_quadratic_rejects_bad_rates() {
        // Rate rising with A violates the declining-entry law.
        let rising: Vec<(f64, f64)> = (1..=5)
            .map(|i| {
                let a = 100.0 * i as f64;
                (a, 0.1 * a + 2e-4 * a * a)
            })
            .collect();
        assert!(matches!(
            fit_entry_quadratic(&rising, None),
            Err(Error::Infeasible(_))
        ));
        // Rate crossing zero before the horizon.
        let crossing = [(100.0, 25.0), (200.0, 30.0), (400.0, -20.0)];
        assert!(fit_entry_quadratic(&crossing, None).is_err());
        assert!(fit_entry_quadratic(&[(100.0, 10.0)], None).is_err());
    }

    #[test]
    fn entry_linear_single_point() {
        let fit = fit_entry_linear(&[(2543.0, 416.0)], None).unwrap();
        assert_relative_eq!(
            fit.alpha_start,
            0.163_586_315_375_540_7,
            max_relative = 1e-12
        );
        assert_eq!(fit.alpha_end, fit.alpha_start);
        assert_eq!(fit.lin_slope, 0.0);
        assert!(fit_entry_linear(&[], None).is_err());
        assert!(fit_entry_linear(&[(100.0, 150.0)], None).is_err());
    }

    #[test]
    fn logistic_round_trip_wide_window() {
        let truth = LogisticFit {
            capacity: 1000.0,
            rate: 1.0,
            midpoint: 0.0,
            residual_rms: 0.0,
            iterations: 0,
        };
        let points: Vec<(f64, f64)> = (-2..=4)
            .map(|t| (t as f64, truth.predict(t as f64)))
            .collect();
        let fit = fit_logistic(&points).unwrap();
        assert_relative_eq!(fit.capacity, 1000.0, max_relative = 1e-6);
        assert_relative_eq!(fit.rate, 1.0, max_relative = 1e-6);
        assert!(fit.midpoint.abs() < 1e-6);
        // Midpoint identity.
        assert_relative_eq!(
            fit.predict(fit.midpoint),
            fit.capacity / 2.0,
            max_relative = 1e-12
        );
        assert!(fit.capacity >= points.last().unwrap().1);
    }

    #[test]
    fn logistic_round_trip_one_sided_window() {
        let truth = LogisticFit {
            capacity: 2500.0,
            rate: 0.5,
            midpoint: 5.0,
            residual_rms: 0.0,
            iterations: 0,
        };
        let points: Vec<(f64, f64)> = (1..=10)
            .map(|t| (t as f64, truth.predict(t as f64)))
            .collect();
        let fit = fit_logistic(&points).unwrap();
        assert_relative_eq!(fit.capacity, 2500.0, max_relative = 1e-4);
        assert_relative_eq!(fit.rate, 0.5, max_relative = 1e-4);
        assert_relative_eq!(fit.midpoint, 5.0, max_relative = 1e-4);
        assert!(fit.residual_rms < 1e-6);
    }

    #[test]
    fn logistic_input_validation() {
        assert!(matches!(
            fit_logistic(&[(0.0, 1.0), (1.0, 2.0)]),
            Err(Error::InsufficientData(_))
        ));
        assert!(matches!(
            fit_logistic(&[(0.0, 1.0), (1.0, -2.0), (2.0, 3.0)]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            fit_logistic(&[(0.0, 1.0), (1.0, 3.0), (2.0, 2.0)]),
            Err(Error::Domain(_))
        ));
    }

    /// Perturbing any fitted coefficient must not reduce the residual sum
    /// of squares: least squares sits at the optimum.
    #[test]
    fn ols_perturbation_optimality() {
        let points: Vec<(f64, f64)> = (0..20)
            .map(|i| {
                let x = i as f64;
                // Deterministic wiggle stands in for noise.
                (x, 2.0 + 0.7 * x + (x * 12.9898).sin() * 0.5)
            })
            .collect();
        let fit = fit_linear(&points).unwrap();
        let sse = |intercept: f64, slope: f64| -> f64 {
            points
                .iter()
                .map(|&(x, y)| (y - intercept - slope * x).powi(2))
                .sum()
        };
        let best = sse(fit.intercept, fit.slope);
        for d in [-1e-3, 1e-3] {
            assert!(sse(fit.intercept + d, fit.slope) >= best);
            assert!(sse(fit.intercept, fit.slope + d) >= best);
        }
    }

    proptest! {
        #[test]
        fn power_law_recovers_exact_data(
            c in 0.1..100.0f64,
            p in -2.0..2.0f64,
        ) {
            let points: Vec<(f64, f64)> = (1..=8)
                .map(|i| {
                    let a = 10f64.powi(i);
                    (a, c * a.powf(p))
                })
                .collect();
            let fit = fit_power_law(&points).unwrap();
            prop_assert!((fit.exponent - p).abs() < 1e-9);
            prop_assert!((fit.ln_scale - c.ln()).abs() < 1e-9);
            prop_assert!(fit.residual_rms < 1e-10);
        }

        #[test]
        fn entry_quadratic_recovers_exact_data(
            alpha_s in 0.15..0.9f64,
            ratio in 0.05..0.95f64,
            a_f in 100.0..1e6f64,
        ) {
            let alpha_f = alpha_s * ratio;
            let k = (alpha_s - alpha_f) / a_f;
            let points: Vec<(f64, f64)> = (1..=12)
                .map(|i| {
                    let a = a_f * i as f64 / 12.0;
                    (a, alpha_s * a - 0.5 * k * a * a)
                })
                .collect();
            let fit = fit_entry_quadratic(&points, None).unwrap();
            prop_assert!((fit.alpha_start - alpha_s).abs() < 1e-8 * alpha_s.max(1.0));
            prop_assert!((fit.alpha_end - alpha_f).abs() < 1e-8);
        }

        #[test]
        fn logistic_recovers_noiseless_curves(
            capacity in 500.0..5e5f64,
            rate in 0.2..2.0f64,
            midpoint in 0.0..8.0f64,
        ) {
            let truth = LogisticFit { capacity, rate, midpoint, residual_rms: 0.0, iterations: 0 };
            let points: Vec<(f64, f64)> = (0..=12)
                .map(|t| (t as f64, truth.predict(t as f64)))
                .collect();
            let fit = fit_logistic(&points).unwrap();
            prop_assert!((fit.capacity - capacity).abs() < 1e-4 * capacity);
            prop_assert!((fit.rate - rate).abs() < 1e-4 * rate);
        }
    }
}
