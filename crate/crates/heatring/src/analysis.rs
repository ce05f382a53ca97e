//! Post-processing: scaling-law fits, the three-point average time, the
//! two-axis effort/speed classification, and COCOMO effort estimates.

pub mod loc;

use thiserror::Error;

/// Least-squares parameters of `t(p) = serial_s + parallel_s / p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    /// Cost that does not shrink with more threads, in seconds.
    pub serial_s: f64,
    /// Perfectly divisible cost at one thread, in seconds.
    pub parallel_s: f64,
    /// Goodness of fit; 1 exactly when the model reproduces every sample.
    pub r_squared: f64,
}

impl FitResult {
    /// Model prediction at `threads`.
    pub fn predict(&self, threads: f64) -> f64 {
        self.serial_s + self.parallel_s / threads
    }

    /// Predicted speedup over one thread at `threads`; the fitted form makes
    /// this approach `(serial_s + parallel_s) / serial_s` as threads grow.
    pub fn speedup(&self, threads: f64) -> f64 {
        self.predict(1.0) / self.predict(threads)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FitError {
    #[error("scaling fit needs at least 2 samples")]
    TooFewSamples,
    #[error("scaling fit needs at least 2 distinct thread counts")]
    DegenerateThreads,
    #[error("samples must pair positive thread counts with finite times")]
    InvalidSample,
}

/// Fits `t(p) = serial_s + parallel_s / p` to `(threads, seconds)` samples by
/// ordinary least squares on the regressor `1/p`.
pub fn fit_scaling(samples: &[(f64, f64)]) -> Result<FitResult, FitError> {
    if samples.len() < 2 {
        return Err(FitError::TooFewSamples);
    }
    if samples
        .iter()
        .any(|&(p, t)| !(p > 0.0) || !p.is_finite() || !t.is_finite())
    {
        return Err(FitError::InvalidSample);
    }
    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|&(p, _)| 1.0 / p).collect();
    let ys: Vec<f64> = samples.iter().map(|&(_, t)| t).collect();
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    if sxx == 0.0 {
        return Err(FitError::DegenerateThreads);
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    let parallel_s = sxy / sxx;
    let serial_s = y_mean - parallel_s * x_mean;
    let predicted: Vec<f64> = xs.iter().map(|x| serial_s + parallel_s * x).collect();
    Ok(FitResult {
        serial_s,
        parallel_s,
        r_squared: r_squared(&ys, &predicted),
    })
}

/// The coefficient of determination `1 - SS_res / SS_tot`.
///
/// Two conventions close the formula's holes: with zero total variance the
/// result is 1 when the residuals are also zero (a constant series predicted
/// exactly) and 0 otherwise; predicting the plain mean of a varying series
/// scores 0.
pub fn r_squared(observed: &[f64], predicted: &[f64]) -> f64 {
    assert_eq!(
        observed.len(),
        predicted.len(),
        "observed and predicted must pair up"
    );
    if observed.is_empty() {
        return 1.0;
    }
    let mean = observed.iter().sum::<f64>() / observed.len() as f64;
    let ss_tot: f64 = observed.iter().map(|y| (y - mean).powi(2)).sum();
    let ss_res: f64 = observed
        .iter()
        .zip(predicted)
        .map(|(y, f)| (y - f).powi(2))
        .sum();
    if ss_tot == 0.0 {
        return if ss_res == 0.0 { 1.0 } else { 0.0 };
    }
    1.0 - ss_res / ss_tot
}

/// Mean of the wall times at 2, 20, and 40 threads: one number summarizing
/// low, moderate, and high parallelism.
pub fn t_average(t2: f64, t20: f64, t40: f64) -> f64 {
    (t2 + t20 + t40) / 3.0
}

/// One implementation's position on the effort/speed plane, both axes in
/// [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationPoint {
    pub label: String,
    /// Estimated implementation effort: -1 least effort in the set, +1 most.
    pub x: f64,
    /// Speed: -1 slowest in the set, +1 fastest.
    pub y: f64,
}

/// Maps entries of `(label, effort_months, t_average_seconds)` onto the
/// effort/speed plane. Each axis is min-max scaled to [-1, 1] within the
/// given set; speed is ranked by negated time so faster lands higher. An
/// axis with no spread collapses to 0 for everyone.
pub fn classify(entries: &[(&str, f64, f64)]) -> Vec<ClassificationPoint> {
    fn axis(scores: &[f64]) -> Vec<f64> {
        let min = scores.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        scores
            .iter()
            .map(|&s| {
                if max == min {
                    0.0
                } else {
                    -1.0 + 2.0 * (s - min) / (max - min)
                }
            })
            .collect()
    }
    let efforts: Vec<f64> = entries.iter().map(|&(_, e, _)| e).collect();
    let speeds: Vec<f64> = entries.iter().map(|&(_, _, t)| -t).collect();
    let xs = axis(&efforts);
    let ys = axis(&speeds);
    entries
        .iter()
        .zip(xs.into_iter().zip(ys))
        .map(|(&(label, _, _), (x, y))| ClassificationPoint {
            label: label.to_string(),
            x,
            y,
        })
        .collect()
}

/// Basic COCOMO, organic mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CocomoEstimate {
    pub loc: u64,
    pub kloc: f64,
    /// Developer effort in person-months.
    pub effort_pm: f64,
    /// Calendar time in months.
    pub schedule_months: f64,
}

/// `effort = 2.4 * kloc^1.05` person-months,
/// `schedule = 2.5 * effort^0.38` months. Zero lines cost zero of both.
pub fn cocomo(loc: u64) -> CocomoEstimate {
    let kloc = loc as f64 / 1000.0;
    let effort_pm = 2.4 * kloc.powf(1.05);
    let schedule_months = 2.5 * effort_pm.powf(0.38);
    CocomoEstimate {
        loc,
        kloc,
        effort_pm,
        schedule_months,
    }
}
