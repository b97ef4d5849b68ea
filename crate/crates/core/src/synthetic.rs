//! Built-in synthetic inputs.
//!
//! These stand in for the proprietary traffic and incident datasets. They
//! are calibrated to the published summary figures (daily mean of 53.1
//! events, evening-peaked start hours, 19 h maximum duration, evening
//! traffic peak) and are not ground truth.

use chrono::{Datelike, Duration, NaiveDate, NaiveTime};
use rand::Rng;

use crate::events::{CleanReport, EmpiricalDistribution, EventDistributions, EventLogEntry, HourHistogram};
use crate::rng::{substream, Purpose};
use crate::traffic::{HourVector, TrafficRecord, HOURS};

/// Mean hourly downlink volume per cell (Mbps), peaking at 22:00.
pub const RAW_TRAFFIC_MBPS: HourVector = [
    13.75, 11.25, 9.50, 8.25, 7.50, 7.50, 8.25, 10.00, 12.00, 13.75, 15.00, 15.75, //
    16.25, 16.50, 16.75, 17.00, 17.50, 18.25, 19.00, 21.75, 23.25, 24.50, 25.00, 20.00,
];

/// Relative frequency of incident start hours.
pub const HOUR_WEIGHTS: [f64; HOURS] = [
    4.2, 3.4, 2.9, 2.4, 2.0, 1.9, 2.1, 2.5, 2.7, 2.7, 2.8, 2.9, //
    3.1, 3.3, 3.7, 4.2, 4.9, 5.9, 7.0, 7.9, 8.1, 7.5, 6.4, 5.3,
];

pub const DAILY_MEAN: f64 = 53.1;
pub const MAX_DURATION_MIN: f64 = 1140.0;
const DAILY_DISPERSION: f64 = 40.0;
const DURATION_MEDIAN_MIN: f64 = 40.0;
const DURATION_LOG_SIGMA: f64 = 1.0;

pub fn hour_histogram() -> HourHistogram {
    HourHistogram::from_weights(&HOUR_WEIGHTS).expect("valid weights")
}

/// Negative binomial daily counts with mean 53.1, truncated to 10..=120.
pub fn daily_count_distribution() -> EmpiricalDistribution {
    let r = DAILY_DISPERSION;
    let q = DAILY_MEAN / (DAILY_MEAN + r);
    let mut pmf = Vec::new();
    let mut p = (1.0 - q).powf(r);
    for k in 0..=120u32 {
        pmf.push(p);
        p *= (f64::from(k) + r) / f64::from(k + 1) * q;
    }
    let support: Vec<f64> = (10..=120).map(f64::from).collect();
    EmpiricalDistribution::from_weights(support, &pmf[10..]).expect("valid weights")
}

/// Log-normal attending times on whole minutes 1..=1140.
pub fn duration_distribution() -> EmpiricalDistribution {
    let mu = DURATION_MEDIAN_MIN.ln();
    let max = MAX_DURATION_MIN as u32;
    let support: Vec<f64> = (1..=max).map(f64::from).collect();
    let weights: Vec<f64> = support
        .iter()
        .map(|m| (-(m.ln() - mu).powi(2) / (2.0 * DURATION_LOG_SIGMA * DURATION_LOG_SIGMA)).exp() / m)
        .collect();
    EmpiricalDistribution::from_weights(support, &weights).expect("valid weights")
}

pub fn default_distributions() -> EventDistributions {
    EventDistributions {
        daily_count: daily_count_distribution(),
        hour: hour_histogram(),
        duration: duration_distribution(),
    }
}

/// One week of hourly records for `n_cells` cells, minus the final hour
/// (57 cells give 9519 rows).
pub fn traffic_week(n_cells: usize, seed: u64) -> Vec<TrafficRecord> {
    let mut rng = substream(seed, Purpose::Synthetic, 1);
    let start = NaiveDate::from_ymd_opt(2018, 10, 22).unwrap().and_hms_opt(0, 0, 0).unwrap();
    let cell_scale: Vec<f64> = (0..n_cells).map(|_| rng.random_range(0.5..1.5)).collect();
    let mut out = Vec::with_capacity(n_cells * 167);
    for (c, scale) in cell_scale.iter().enumerate() {
        for step in 0..167i64 {
            let timestamp = start + Duration::hours(step);
            let h = (step % 24) as usize;
            out.push(TrafficRecord {
                cell_id: format!("cell_{c:03}"),
                timestamp,
                volume_mbps: RAW_TRAFFIC_MBPS[h] * scale * rng.random_range(0.8..1.2),
            });
        }
    }
    out
}

/// A synthetic incident log with injected rows that clean-up must drop,
/// together with the row accounting expected from clean-up.
pub struct SyntheticLog {
    pub entries: Vec<EventLogEntry>,
    pub expected: CleanReport,
}

const EXCLUDED: [(u32, u32); 3] = [(1, 1), (11, 5), (12, 31)];

/// Jan 2017 to Feb 2019, one row per incident.
pub fn event_log(seed: u64) -> SyntheticLog {
    let mut rng = substream(seed, Purpose::Synthetic, 2);
    let dists = default_distributions();
    let first = NaiveDate::from_ymd_opt(2017, 1, 1).unwrap();
    let last = NaiveDate::from_ymd_opt(2019, 2, 28).unwrap();
    let mut entries = Vec::new();
    let mut expected = CleanReport::default();
    let mut next_id = 0u64;

    let mut date = first;
    while date <= last {
        let excluded = EXCLUDED.contains(&(date.month(), date.day()));
        let mut n = dists.daily_count.sample(&mut rng) as usize;
        if excluded {
            n *= 2;
        }
        let n_minor = rng.random_range(0..20);
        for i in 0..n + n_minor {
            let minor = i >= n;
            let hour = dists.hour.sample_hour(&mut rng) as u32;
            let time = NaiveTime::from_hms_opt(hour, rng.random_range(0..60), rng.random_range(0..60)).unwrap();
            let mut duration_min = dists.duration.sample(&mut rng);
            let mut pump_count = rng.random_range(1..=4);
            let event_type = if minor {
                ["False Alarm", "Special Service"][rng.random_range(0..2)]
            } else if rng.random_bool(0.8) {
                "Fire"
            } else {
                "Flooding"
            };
            let zero_pumps = rng.random_bool(0.01);
            let zero_duration = rng.random_bool(0.005);
            if zero_pumps {
                pump_count = 0;
            }
            if zero_duration {
                duration_min = 0.0;
            }

            if minor {
                expected.removed_type += 1;
            } else if excluded {
                expected.removed_date += 1;
            } else if zero_pumps {
                expected.removed_pumps += 1;
            } else if zero_duration {
                expected.removed_duration += 1;
            } else {
                expected.retained += 1;
            }
            entries.push(EventLogEntry {
                event_id: format!("E{next_id:07}"),
                date,
                time,
                event_type: event_type.to_string(),
                duration_min,
                pump_count,
            });
            next_id += 1;
        }
        date = date.succ_opt().unwrap();
    }
    expected.input = entries.len();
    SyntheticLog { entries, expected }
}
