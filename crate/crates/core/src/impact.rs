//! Operator-internal shared access: severity classes and the cell and
//! system impact of serving an emergency link.
//!
//! While an event lasts, each affected cell reserves `emergency_fraction` of
//! its bandwidth for the drone link. Commercial demand above the remaining
//! `impact_threshold × capacity` cannot be served; the cell impact is that
//! excess integrated over the event window, in Mbps·h. The system impact
//! divides the energy of all affected cells by the area's total daily
//! capacity.

use crate::events::{EmergencyEvent, EmpiricalDistribution};
use crate::geometry::{AreaKind, CityLayout};
use crate::spatial::StationMap;
use crate::traffic::{HourlyProfile, HOURS};
use crate::{Error, Result};

pub const DEFAULT_EMERGENCY_FRACTION: f64 = 0.25;
pub const DEFAULT_IMPACT_THRESHOLD: f64 = 0.75;
pub const DEFAULT_SEVERITY_CLASSES: u32 = 4;
pub const DEFAULT_MAX_DURATION_MIN: f64 = 1140.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharedAccessPolicy {
    pub emergency_fraction: f64,
    pub impact_threshold: f64,
    pub severity_classes: u32,
    pub max_duration_min: f64,
}

impl Default for SharedAccessPolicy {
    fn default() -> Self {
        const { assert!(DEFAULT_EMERGENCY_FRACTION + DEFAULT_IMPACT_THRESHOLD == 1.0) };
        Self {
            emergency_fraction: DEFAULT_EMERGENCY_FRACTION,
            impact_threshold: DEFAULT_IMPACT_THRESHOLD,
            severity_classes: DEFAULT_SEVERITY_CLASSES,
            max_duration_min: DEFAULT_MAX_DURATION_MIN,
        }
    }
}

impl SharedAccessPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.emergency_fraction > 0.0 && self.emergency_fraction < 1.0) {
            return Err(Error::InvalidInput(format!(
                "emergency_fraction {} outside (0, 1)",
                self.emergency_fraction
            )));
        }
        if !(self.impact_threshold > 0.0 && self.impact_threshold <= 1.0) {
            return Err(Error::InvalidInput(format!("impact_threshold {} outside (0, 1]", self.impact_threshold)));
        }
        if self.severity_classes < 1 {
            return Err(Error::InvalidInput("severity_classes must be at least 1".into()));
        }
        if !(self.max_duration_min > 0.0 && self.max_duration_min.is_finite()) {
            return Err(Error::InvalidInput(format!("max_duration_min {} must be positive", self.max_duration_min)));
        }
        Ok(())
    }

    /// Bandwidth handed to the emergency link by one cell.
    pub fn emergency_bandwidth_mhz(&self, cell_bandwidth_mhz: f64) -> f64 {
        self.emergency_fraction * cell_bandwidth_mhz
    }

    /// Upper edge of each severity class, in minutes.
    pub fn class_boundaries(&self) -> Vec<f64> {
        let width = self.max_duration_min / f64::from(self.severity_classes);
        (1..=self.severity_classes).map(|k| width * f64::from(k)).collect()
    }
}

/// Class `ceil(duration / (max / K))`, clamped to `1..=K`. A class-k event
/// affects k cells.
pub fn severity_class(duration_min: f64, policy: &SharedAccessPolicy) -> u32 {
    let k = f64::from(policy.severity_classes);
    let width = policy.max_duration_min / k;
    let class = (duration_min / width).ceil();
    class.clamp(1.0, k) as u32
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeverityWeights {
    /// `probabilities[k - 1]` is the mass of class `k`.
    pub probabilities: Vec<f64>,
    pub expected_cells: f64,
}

/// Class probabilities of a duration distribution and the expected number
/// of affected cells.
///
/// Class masses are taken as differences of the cdf at the last support
/// point of each class, so masses that are exact in the cdf stay exact.
pub fn severity_weights(duration: &EmpiricalDistribution, policy: &SharedAccessPolicy) -> SeverityWeights {
    let k = policy.severity_classes as usize;
    let mut cdf_at_class_end = vec![None; k];
    for (&v, &c) in duration.support().iter().zip(duration.cdf()) {
        cdf_at_class_end[severity_class(v, policy) as usize - 1] = Some(c);
    }
    let mut probabilities = Vec::with_capacity(k);
    let mut prev = 0.0;
    for end in cdf_at_class_end {
        match end {
            Some(c) => {
                probabilities.push(c - prev);
                prev = c;
            }
            None => probabilities.push(0.0),
        }
    }
    let expected_cells = probabilities.iter().enumerate().map(|(i, p)| (i + 1) as f64 * p).sum();
    SeverityWeights { probabilities, expected_cells }
}

/// Excess traffic above the threshold, split by hour of day (Mbps·h).
///
/// The window `[start, start + duration)` may wrap past midnight and span
/// several days; each wall-clock hour contributes the fraction of the hour
/// inside the window times the excess demand in that hour.
pub fn cell_impact_by_hour(
    profile: &HourlyProfile,
    start_min: f64,
    duration_min: f64,
    policy: &SharedAccessPolicy,
    max_capacity_mbps: f64,
) -> [f64; HOURS] {
    let threshold = policy.impact_threshold * max_capacity_mbps;
    let mut out = [0.0; HOURS];
    let end = start_min + duration_min;
    let mut t = start_min;
    while t < end {
        let hour = (t / 60.0).floor();
        let seg_end = ((hour + 1.0) * 60.0).min(end);
        let excess = (profile.at_hour(hour as i64) - threshold).max(0.0);
        out[(hour as i64).rem_euclid(HOURS as i64) as usize] += (seg_end - t) / 60.0 * excess;
        t = seg_end;
    }
    out
}

/// Total excess traffic on one cell over the event window (Mbps·h).
pub fn cell_impact(
    profile: &HourlyProfile,
    start_min: f64,
    duration_min: f64,
    policy: &SharedAccessPolicy,
    max_capacity_mbps: f64,
) -> f64 {
    cell_impact_by_hour(profile, start_min, duration_min, policy, max_capacity_mbps).iter().sum()
}

/// Outcome of serving one event.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactRecord {
    pub year: u32,
    pub day: u32,
    pub event_id: u32,
    pub start_min: f64,
    pub duration_min: f64,
    pub class: u32,
    pub covered: bool,
    pub area_id: Option<u32>,
    pub area_kind: Option<AreaKind>,
    pub affected_cell_ids: Vec<u32>,
    /// Impact on each affected cell, aligned with `affected_cell_ids`.
    pub cell_impacts_mbps_h: Vec<f64>,
    /// Summed over affected cells, by hour of day.
    pub hourly_mbps_h: [f64; HOURS],
    pub system_impact_fraction: f64,
}

impl ImpactRecord {
    fn uncovered(event: &EmergencyEvent, year: u32, class: u32) -> Self {
        Self {
            year,
            day: event.day,
            event_id: event.id,
            start_min: event.start_min,
            duration_min: event.duration_min,
            class,
            covered: false,
            area_id: None,
            area_kind: None,
            affected_cell_ids: Vec::new(),
            cell_impacts_mbps_h: Vec::new(),
            hourly_mbps_h: [0.0; HOURS],
            system_impact_fraction: 0.0,
        }
    }

    /// Impact on the serving (nearest) cell; 0 when uncovered.
    pub fn serving_cell_impact(&self) -> f64 {
        self.cell_impacts_mbps_h.first().copied().unwrap_or(0.0)
    }

    pub fn total_impact_mbps_h(&self) -> f64 {
        self.cell_impacts_mbps_h.iter().sum()
    }
}

/// Daily capacity of a set of cells, in Mbps·h.
pub fn daily_capacity_mbps_h(stations: &StationMap, area_id: u32) -> f64 {
    stations.in_area(area_id).iter().map(|s| s.max_capacity_mbps).sum::<f64>() * HOURS as f64
}

/// Assess one event in `year`: locate it, pick the `class` nearest cells of
/// the covering area, and charge each the cell impact under that area's
/// profile.
pub fn assess_event(
    event: &EmergencyEvent,
    layout: &CityLayout,
    stations: &StationMap,
    profiles: &crate::traffic::TrafficProfiles,
    year: u32,
    policy: &SharedAccessPolicy,
) -> Result<ImpactRecord> {
    let class = severity_class(event.duration_min, policy);
    let Some(area) = layout.locate(event.location, year) else {
        return Ok(ImpactRecord::uncovered(event, year, class));
    };
    let cells = stations.nearest_in_area(area.id, event.location, class as usize)?;
    let profile = profiles.for_kind(area.kind);
    let mut hourly = [0.0; HOURS];
    let mut cell_impacts = Vec::with_capacity(cells.len());
    for cell in &cells {
        let by_hour = cell_impact_by_hour(profile, event.start_min, event.duration_min, policy, cell.max_capacity_mbps);
        for (acc, v) in hourly.iter_mut().zip(by_hour) {
            *acc += v;
        }
        cell_impacts.push(by_hour.iter().sum());
    }
    let total: f64 = cell_impacts.iter().sum();
    Ok(ImpactRecord {
        year,
        day: event.day,
        event_id: event.id,
        start_min: event.start_min,
        duration_min: event.duration_min,
        class,
        covered: true,
        area_id: Some(area.id),
        area_kind: Some(area.kind),
        affected_cell_ids: cells.iter().map(|c| c.id).collect(),
        cell_impacts_mbps_h: cell_impacts,
        hourly_mbps_h: hourly,
        system_impact_fraction: total / daily_capacity_mbps_h(stations, area.id),
    })
}

/// Energy of `records` as a fraction of the daily capacity of an area with
/// `stations_in_area` cells of `max_capacity_mbps` each.
pub fn system_impact(records: &[ImpactRecord], stations_in_area: usize, max_capacity_mbps: f64) -> Result<f64> {
    if stations_in_area == 0 {
        return Err(Error::InvalidInput("system impact of an area with no stations".into()));
    }
    let energy: f64 = records.iter().map(ImpactRecord::total_impact_mbps_h).sum();
    Ok(energy / (stations_in_area as f64 * max_capacity_mbps * HOURS as f64))
}
