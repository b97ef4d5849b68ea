//! Hourly commercial traffic profiles.
//!
//! Hourly downlink volumes are averaged per hour of day over all cells and
//! days, scaled so the busiest hour reaches a fixed fraction of a 5G cell's
//! capacity, and circularly shifted to move the peak into working hours for
//! the industrial area. Every cell of an area kind shares that kind's
//! profile.

use std::io::{Read, Write};
use std::path::Path;

use chrono::{NaiveDateTime, Timelike};
use serde::Deserialize;

use crate::geometry::AreaKind;
use crate::{Error, Result};

pub const HOURS: usize = 24;
pub const DEFAULT_PEAK_FRACTION: f64 = 0.95;
pub const DEFAULT_SHIFT_HOURS: i64 = 14;

pub type HourVector = [f64; HOURS];

#[derive(Debug, Clone, PartialEq)]
pub struct TrafficRecord {
    pub cell_id: String,
    pub timestamp: NaiveDateTime,
    pub volume_mbps: f64,
}

impl TrafficRecord {
    pub fn hour(&self) -> usize {
        self.timestamp.hour() as usize
    }
}

const TIMESTAMP_FORMATS: &[&str] = &[
    "%Y-%m-%dT%H:%M:%S",
    "%Y-%m-%dT%H:%M",
    "%Y-%m-%d %H:%M:%S",
    "%Y-%m-%d %H:%M",
    "%Y-%m-%dT%H",
    "%Y-%m-%d %H",
];

pub(crate) fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    let s = s.trim().trim_end_matches('Z');
    TIMESTAMP_FORMATS.iter().find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())
}

#[derive(Deserialize)]
struct TrafficRow {
    cell_id: String,
    timestamp: String,
    volume_mbps: String,
}

/// Parse a `cell_id,timestamp,volume_mbps` CSV. Errors carry the 1-based
/// line number of the offending row.
pub fn read_traffic_csv<R: Read>(reader: R, source: &str) -> Result<Vec<TrafficRecord>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize::<TrafficRow>() {
        let row = row.map_err(|e| csv_schema_error(source, e))?;
        // Header is line 1; records follow.
        let line = out.len() as u64 + 2;
        let schema = |message: String| Error::Schema { path: source.to_string(), line, message };
        let timestamp =
            parse_timestamp(&row.timestamp).ok_or_else(|| schema(format!("bad timestamp `{}`", row.timestamp)))?;
        let volume_mbps: f64 = row
            .volume_mbps
            .trim()
            .parse()
            .map_err(|_| schema(format!("bad volume `{}`", row.volume_mbps)))?;
        if !(volume_mbps >= 0.0 && volume_mbps.is_finite()) {
            return Err(schema(format!("volume must be non-negative, got {volume_mbps}")));
        }
        out.push(TrafficRecord { cell_id: row.cell_id, timestamp, volume_mbps });
    }
    Ok(out)
}

pub fn read_traffic_file(path: &Path) -> Result<Vec<TrafficRecord>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_traffic_csv(file, &path.display().to_string())
}

/// Write records in the same schema [`read_traffic_csv`] accepts.
pub fn write_traffic_csv<W: Write>(records: &[TrafficRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["cell_id", "timestamp", "volume_mbps"])?;
    for r in records {
        w.write_record([
            r.cell_id.clone(),
            r.timestamp.format("%Y-%m-%dT%H:%M:%S").to_string(),
            r.volume_mbps.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(Path::new("<traffic csv>"), e))
}

pub(crate) fn csv_schema_error(source: &str, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    Error::Schema { path: source.to_string(), line, message: e.to_string() }
}

/// Mean volume per hour of day over all records.
pub fn build_hourly_profile(records: &[TrafficRecord]) -> Result<HourVector> {
    if records.is_empty() {
        return Err(Error::InvalidInput("no traffic records".into()));
    }
    let mut sums = [0.0; HOURS];
    let mut counts = [0usize; HOURS];
    for r in records {
        sums[r.hour()] += r.volume_mbps;
        counts[r.hour()] += 1;
    }
    let missing: Vec<u32> = (0..HOURS as u32).filter(|&h| counts[h as usize] == 0).collect();
    if !missing.is_empty() {
        return Err(Error::MissingHours(missing));
    }
    let mut out = [0.0; HOURS];
    for h in 0..HOURS {
        out[h] = sums[h] / counts[h] as f64;
    }
    Ok(out)
}

pub fn peak(values: &HourVector) -> f64 {
    values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// First hour holding the maximum value.
pub fn peak_hour(values: &HourVector) -> usize {
    let max = peak(values);
    values.iter().position(|&v| v == max).unwrap_or(0)
}

/// Multiply `raw` so its maximum equals `peak_fraction * max_capacity_mbps`.
pub fn scale_to_peak(raw: &HourVector, max_capacity_mbps: f64, peak_fraction: f64) -> Result<HourVector> {
    if !(peak_fraction > 0.0 && peak_fraction <= 1.0) {
        return Err(Error::InvalidInput(format!("peak fraction {peak_fraction} outside (0, 1]")));
    }
    if !(max_capacity_mbps > 0.0) {
        return Err(Error::InvalidInput(format!("max capacity must be positive, got {max_capacity_mbps}")));
    }
    let max = peak(raw);
    if !(max > 0.0) {
        return Err(Error::ZeroProfile);
    }
    let target = peak_fraction * max_capacity_mbps;
    let factor = target / max;
    let mut out = raw.map(|v| v * factor);
    // Pin the peak exactly; the product can be off by one ulp.
    for (o, r) in out.iter_mut().zip(raw) {
        if *r == max {
            *o = target;
        }
    }
    Ok(out)
}

/// `out[h] = input[(h - shift_hours) mod 24]`.
pub fn circular_shift(profile: &HourVector, shift_hours: i64) -> HourVector {
    let mut out = [0.0; HOURS];
    for (h, o) in out.iter_mut().enumerate() {
        let src = (h as i64 - shift_hours).rem_euclid(HOURS as i64) as usize;
        *o = profile[src];
    }
    out
}

/// 24 hourly commercial traffic volumes (Mbps) for one area kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HourlyProfile {
    pub kind: AreaKind,
    pub values: HourVector,
}

impl HourlyProfile {
    pub fn at_hour(&self, hour: i64) -> f64 {
        self.values[hour.rem_euclid(HOURS as i64) as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrafficConfig {
    pub max_capacity_mbps: f64,
    pub peak_fraction: f64,
    pub shift_hours: i64,
}

impl Default for TrafficConfig {
    fn default() -> Self {
        Self {
            max_capacity_mbps: crate::spatial::DEFAULT_MAX_CAPACITY_MBPS,
            peak_fraction: DEFAULT_PEAK_FRACTION,
            shift_hours: DEFAULT_SHIFT_HOURS,
        }
    }
}

/// The profile pair used by a simulation: residential areas see the scaled
/// profile, the industrial area the same profile shifted by `shift_hours`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrafficProfiles {
    pub industrial: HourlyProfile,
    pub residential: HourlyProfile,
}

impl TrafficProfiles {
    pub fn for_kind(&self, kind: AreaKind) -> &HourlyProfile {
        match kind {
            AreaKind::Industrial => &self.industrial,
            AreaKind::Residential => &self.residential,
        }
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["kind", "hour", "mbps"])?;
        for p in [&self.industrial, &self.residential] {
            for (h, v) in p.values.iter().enumerate() {
                w.write_record([p.kind.as_str(), &h.to_string(), &v.to_string()])?;
            }
        }
        w.flush().map_err(|e| Error::io("profiles.csv", e))?;
        Ok(())
    }
}

pub fn profiles_for_layout(raw: &HourVector, config: &TrafficConfig) -> Result<TrafficProfiles> {
    let scaled = scale_to_peak(raw, config.max_capacity_mbps, config.peak_fraction)?;
    Ok(TrafficProfiles {
        industrial: HourlyProfile { kind: AreaKind::Industrial, values: circular_shift(&scaled, config.shift_hours) },
        residential: HourlyProfile { kind: AreaKind::Residential, values: scaled },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;
    use std::collections::BTreeMap;

    fn rec(day: u32, hour: u32, v: f64) -> TrafficRecord {
        TrafficRecord {
            cell_id: "c".into(),
            timestamp: NaiveDate::from_ymd_opt(2018, 10, day).unwrap().and_hms_opt(hour, 0, 0).unwrap(),
            volume_mbps: v,
        }
    }

    #[test]
    fn single_hot_hour() {
        let mut records: Vec<_> = (0..24).filter(|&h| h != 5).map(|h| rec(1, h, 0.0)).collect();
        records.push(rec(1, 5, 100.0));
        let p = build_hourly_profile(&records).unwrap();
        assert_eq!(p[5], 100.0);
        assert_eq!(p.iter().sum::<f64>(), 100.0);
    }

    #[test]
    fn mean_of_two() {
        let mut records: Vec<_> = (0..24).map(|h| rec(1, h, 7.0)).collect();
        records[9].volume_mbps = 100.0;
        records.push(rec(2, 9, 200.0));
        let p = build_hourly_profile(&records).unwrap();
        assert_eq!(p[9], 150.0);
        assert_eq!(p[10], 7.0);
    }

    #[test]
    fn matches_group_by_oracle_on_synthetic_week() {
        let records = crate::synthetic::traffic_week(57, 42);
        let mut groups: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
        for r in &records {
            groups.entry(r.timestamp.hour()).or_default().push(r.volume_mbps);
        }
        let p = build_hourly_profile(&records).unwrap();
        for (h, vals) in groups {
            let mean = vals.iter().fold(0.0, |a, b| a + b) / vals.len() as f64;
            assert_eq!(p[h as usize], mean);
        }
    }

    #[test]
    fn missing_hours_are_named() {
        let records: Vec<_> = (0..24).filter(|h| *h != 3 && *h != 17).map(|h| rec(1, h, 1.0)).collect();
        match build_hourly_profile(&records) {
            Err(Error::MissingHours(h)) => assert_eq!(h, vec![3, 17]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(build_hourly_profile(&[]).is_err());
    }

    #[test]
    fn scaling_cases() {
        let mut raw = [100.0; HOURS];
        raw[20] = 500.0;
        let scaled = scale_to_peak(&raw, 2660.0, 0.95).unwrap();
        assert!((peak(&scaled) - 2527.0).abs() < 1e-9);
        assert!((scaled[0] / raw[0] - 5.054).abs() < 1e-12);

        let fixed = scale_to_peak(&scaled, 2660.0, 0.95).unwrap();
        assert_eq!(fixed, scaled);

        assert!(matches!(scale_to_peak(&[0.0; HOURS], 2660.0, 0.95), Err(Error::ZeroProfile)));
        assert!(scale_to_peak(&raw, 2660.0, 0.0).is_err());
    }

    #[test]
    fn shift_cases() {
        let v: HourVector = std::array::from_fn(|h| h as f64);
        assert_eq!(circular_shift(&v, 24), v);
        assert_eq!(circular_shift(&v, 0), v);
        assert_eq!(circular_shift(&circular_shift(&v, 7), 7), circular_shift(&v, 14));
        assert_eq!(circular_shift(&v, -3), circular_shift(&v, 21));
        let shifted = circular_shift(&v, 14);
        assert_eq!(peak_hour(&v), 23);
        assert_eq!(peak_hour(&shifted), 13);
        assert_eq!(shifted.iter().sum::<f64>(), v.iter().sum::<f64>());
    }

    #[test]
    fn layout_profiles() {
        let raw = crate::synthetic::RAW_TRAFFIC_MBPS;
        let p = profiles_for_layout(&raw, &TrafficConfig::default()).unwrap();
        assert_eq!(p.industrial.values.iter().sum::<f64>(), p.residential.values.iter().sum::<f64>());
        assert_eq!(peak(&p.industrial.values), peak(&p.residential.values));
        let ia_peak = peak_hour(&p.industrial.values);
        let ra_peak = peak_hour(&p.residential.values);
        assert!((9..=16).contains(&ia_peak));
        assert!(ra_peak >= 17);
        assert_eq!(ia_peak, (ra_peak + 14) % 24);

        let flat = profiles_for_layout(&[3.0; HOURS], &TrafficConfig::default()).unwrap();
        assert!(flat.industrial.values.iter().all(|&v| v == 0.95 * 2660.0));
        assert!(flat.residential.values.iter().all(|&v| v == 0.95 * 2660.0));
    }

    #[test]
    fn csv_parsing_and_errors() {
        let text = "cell_id,timestamp,volume_mbps\nA,2018-10-23T05:00,12.5\nB,2018-10-23 06:00:00,3\n";
        let recs = read_traffic_csv(text.as_bytes(), "t.csv").unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[1].hour(), 6);

        let bad = "cell_id,timestamp,volume_mbps\nA,2018-10-23T05:00,1\nA,yesterday,2\n";
        match read_traffic_csv(bad.as_bytes(), "t.csv") {
            Err(Error::Schema { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let negative = "cell_id,timestamp,volume_mbps\nA,2018-10-23T05:00,-1\n";
        assert!(matches!(read_traffic_csv(negative.as_bytes(), "t.csv"), Err(Error::Schema { line: 2, .. })));
    }
}
