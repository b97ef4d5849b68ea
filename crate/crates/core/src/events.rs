//! Emergency event logs, their empirical distributions, and synthetic day
//! sampling.
//!
//! The ingest path is `read_event_csv` → `assemble_events` → `clean_event_log`
//! → `build_distributions`. The simulation path draws each day's events from
//! the three distributions with independent substreams for count, start
//! time, duration and location.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use chrono::{Datelike, NaiveDate, NaiveTime, Timelike};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::geometry::CityExtent;
use crate::rng::{day_index, substream, Purpose};
use crate::traffic::{csv_schema_error, HOURS};
use crate::{Error, Point, Result};

pub const MINUTES_PER_DAY: f64 = 1440.0;
const CDF_TOLERANCE: f64 = 1e-12;

/// One incident (or, in per-pump logs, one pump attendance) from the log.
#[derive(Debug, Clone, PartialEq)]
pub struct EventLogEntry {
    pub event_id: String,
    pub date: NaiveDate,
    pub time: NaiveTime,
    pub event_type: String,
    pub duration_min: f64,
    pub pump_count: u32,
}

/// Row layout of the raw event log.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogLayout {
    /// One row per incident; `attending_min` is the incident duration.
    PerEvent,
    /// One row per attending pump; rows sharing `event_id` form one
    /// incident whose duration is the mean attending time.
    PerPump,
}

#[derive(Deserialize)]
struct LogRow {
    event_id: String,
    date: String,
    time: String,
    event_type: String,
    attending_min: String,
    pump_count: String,
}

fn parse_date(s: &str) -> Option<NaiveDate> {
    let s = s.trim();
    ["%Y-%m-%d", "%d/%m/%Y", "%d-%b-%y"]
        .iter()
        .find_map(|f| NaiveDate::parse_from_str(s, f).ok())
}

fn parse_time(s: &str) -> Option<NaiveTime> {
    let s = s.trim();
    ["%H:%M:%S", "%H:%M"].iter().find_map(|f| NaiveTime::parse_from_str(s, f).ok())
}

/// Parse an `event_id,date,time,event_type,attending_min,pump_count` CSV,
/// one entry per row.
pub fn read_event_csv<R: Read>(reader: R, source: &str) -> Result<Vec<EventLogEntry>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize::<LogRow>() {
        let row = row.map_err(|e| csv_schema_error(source, e))?;
        let line = out.len() as u64 + 2;
        let schema = |message: String| Error::Schema { path: source.to_string(), line, message };
        let date = parse_date(&row.date).ok_or_else(|| schema(format!("bad date `{}`", row.date)))?;
        let time = parse_time(&row.time).ok_or_else(|| schema(format!("bad time `{}`", row.time)))?;
        let duration_min: f64 = row
            .attending_min
            .trim()
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| schema(format!("bad attending_min `{}`", row.attending_min)))?;
        let pump_count: u32 =
            row.pump_count.trim().parse().map_err(|_| schema(format!("bad pump_count `{}`", row.pump_count)))?;
        out.push(EventLogEntry {
            event_id: row.event_id,
            date,
            time,
            event_type: row.event_type.trim().to_string(),
            duration_min,
            pump_count,
        });
    }
    Ok(out)
}

pub fn read_event_file(path: &Path) -> Result<Vec<EventLogEntry>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_event_csv(file, &path.display().to_string())
}

pub fn write_event_csv<W: Write>(entries: &[EventLogEntry], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["event_id", "date", "time", "event_type", "attending_min", "pump_count"])?;
    for e in entries {
        w.write_record([
            e.event_id.as_str(),
            &e.date.format("%Y-%m-%d").to_string(),
            &e.time.format("%H:%M:%S").to_string(),
            e.event_type.as_str(),
            &e.duration_min.to_string(),
            &e.pump_count.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("events.csv", e))?;
    Ok(())
}

/// Mean attending time of the pumps that attended one incident.
pub fn event_duration(attending_min: &[f64]) -> Result<f64> {
    if attending_min.is_empty() {
        return Err(Error::InvalidInput("event with no attending pumps".into()));
    }
    Ok(attending_min.iter().sum::<f64>() / attending_min.len() as f64)
}

/// Collapse raw rows into one entry per incident.
///
/// In [`LogLayout::PerPump`] rows with `pump_count < 1` are not counted as
/// attendances; an incident left with no attendances keeps `pump_count = 0`
/// and is dropped later by [`clean_event_log`].
pub fn assemble_events(rows: Vec<EventLogEntry>, layout: LogLayout) -> Vec<EventLogEntry> {
    match layout {
        LogLayout::PerEvent => rows,
        LogLayout::PerPump => {
            let mut order: Vec<String> = Vec::new();
            let mut groups: BTreeMap<String, Vec<EventLogEntry>> = BTreeMap::new();
            for row in rows {
                if !groups.contains_key(&row.event_id) {
                    order.push(row.event_id.clone());
                }
                groups.entry(row.event_id.clone()).or_default().push(row);
            }
            order
                .into_iter()
                .map(|id| {
                    let group = groups.remove(&id).expect("grouped id");
                    let attending: Vec<f64> =
                        group.iter().filter(|r| r.pump_count >= 1).map(|r| r.duration_min).collect();
                    let first = &group[0];
                    EventLogEntry {
                        event_id: id,
                        date: first.date,
                        time: first.time,
                        event_type: first.event_type.clone(),
                        duration_min: event_duration(&attending).unwrap_or(0.0),
                        pump_count: group.iter().map(|r| r.pump_count).sum(),
                    }
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CleanConfig {
    /// Event types kept, compared case-insensitively.
    pub major_types: Vec<String>,
    /// `(month, day)` pairs dropped in every year.
    pub excluded_dates: Vec<(u32, u32)>,
}

impl Default for CleanConfig {
    fn default() -> Self {
        Self {
            major_types: vec!["Fire".into(), "Flooding".into()],
            excluded_dates: vec![(1, 1), (11, 5), (12, 31)],
        }
    }
}

/// Row accounting for one clean-up pass. Each removed entry is counted under
/// the first filter it fails, in the order type, date, pumps, duration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CleanReport {
    pub input: usize,
    pub removed_type: usize,
    pub removed_date: usize,
    pub removed_pumps: usize,
    pub removed_duration: usize,
    pub retained: usize,
}

pub fn clean_event_log(entries: Vec<EventLogEntry>, config: &CleanConfig) -> Result<(Vec<EventLogEntry>, CleanReport)> {
    let majors: Vec<String> = config.major_types.iter().map(|t| t.trim().to_lowercase()).collect();
    let mut report = CleanReport { input: entries.len(), ..Default::default() };
    let kept: Vec<EventLogEntry> = entries
        .into_iter()
        .filter(|e| {
            if !majors.contains(&e.event_type.trim().to_lowercase()) {
                report.removed_type += 1;
            } else if config.excluded_dates.contains(&(e.date.month(), e.date.day())) {
                report.removed_date += 1;
            } else if e.pump_count < 1 {
                report.removed_pumps += 1;
            } else if !(e.duration_min > 0.0) {
                report.removed_duration += 1;
            } else {
                return true;
            }
            false
        })
        .collect();
    report.retained = kept.len();
    if kept.is_empty() {
        return Err(Error::EmptyEventLog);
    }
    Ok((kept, report))
}

/// Sorted support values with cumulative probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    support: Vec<f64>,
    cdf: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(support: Vec<f64>, cdf: Vec<f64>) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidInput(format!("empirical distribution: {m}")));
        if support.is_empty() || support.len() != cdf.len() {
            return bad("support and cdf must be non-empty and of equal length");
        }
        if support.iter().any(|v| !v.is_finite()) || support.windows(2).any(|w| w[0] >= w[1]) {
            return bad("support must be finite and strictly increasing");
        }
        if cdf.iter().any(|p| !(0.0..=1.0 + CDF_TOLERANCE).contains(p)) || cdf.windows(2).any(|w| w[0] > w[1]) {
            return bad("cdf must be non-decreasing within [0, 1]");
        }
        if (cdf[cdf.len() - 1] - 1.0).abs() > CDF_TOLERANCE {
            return bad("cdf must end at 1");
        }
        Ok(Self { support, cdf })
    }

    /// ECDF of `samples`: each step is `count / n`.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("empirical distribution from no samples".into()));
        }
        let mut sorted = samples.to_vec();
        if sorted.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite sample".into()));
        }
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mut support = Vec::new();
        let mut cdf = Vec::new();
        for (i, &v) in sorted.iter().enumerate() {
            if support.last() == Some(&v) {
                *cdf.last_mut().unwrap() = (i + 1) as f64 / n;
            } else {
                support.push(v);
                cdf.push((i + 1) as f64 / n);
            }
        }
        Self::new(support, cdf)
    }

    /// Distribution with probability proportional to `weights` on `support`.
    pub fn from_weights(support: Vec<f64>, weights: &[f64]) -> Result<Self> {
        if weights.len() != support.len() || weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidInput("weights must be non-negative and match the support".into()));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidInput("weights sum to zero".into()));
        }
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w;
                acc / total
            })
            .collect();
        *cdf.last_mut().unwrap() = 1.0;
        Self::new(support, cdf)
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn cdf(&self) -> &[f64] {
        &self.cdf
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.support[self.support.len() - 1]
    }

    /// `(value, probability mass)` pairs.
    pub fn pmf(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.support
            .iter()
            .zip(&self.cdf)
            .scan(0.0, |prev, (&v, &c)| {
                let p = c - *prev;
                *prev = c;
                Some((v, p))
            })
    }

    pub fn mean(&self) -> f64 {
        self.pmf().map(|(v, p)| v * p).sum()
    }

    /// `support[min{i : cdf[i] >= u}]`; `u` above the last cdf value maps to
    /// the last support point.
    pub fn quantile(&self, u: f64) -> f64 {
        let i = self.cdf.partition_point(|&c| c < u);
        self.support[i.min(self.support.len() - 1)]
    }

    /// Inverse-transform draw with `u` uniform on (0, 1].
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = 1.0 - rng.random::<f64>();
        self.quantile(u)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["support", "cdf"])?;
        for (s, c) in self.support.iter().zip(&self.cdf) {
            w.write_record([s.to_string(), c.to_string()])?;
        }
        w.flush().map_err(|e| Error::io("distribution.csv", e))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut support = Vec::new();
        let mut cdf = Vec::new();
        for row in rdr.deserialize::<(f64, f64)>() {
            let (s, c) = row?;
            support.push(s);
            cdf.push(c);
        }
        Self::new(support, cdf)
    }
}

/// `sample_from` under its operational name.
pub fn sample_from<R: Rng + ?Sized>(dist: &EmpiricalDistribution, rng: &mut R) -> f64 {
    dist.sample(rng)
}

/// Probability of an event starting in each hour of the day.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HourHistogram {
    p: [f64; HOURS],
    cumulative: [f64; HOURS],
}

impl HourHistogram {
    pub fn new(p: [f64; HOURS]) -> Result<Self> {
        if p.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::InvalidInput("hour probabilities must be non-negative".into()));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > CDF_TOLERANCE {
            return Err(Error::InvalidInput(format!("hour probabilities sum to {sum}")));
        }
        let mut cumulative = [0.0; HOURS];
        let mut acc = 0.0;
        for (c, v) in cumulative.iter_mut().zip(&p) {
            acc += v;
            *c = acc;
        }
        cumulative[HOURS - 1] = 1.0;
        Ok(Self { p, cumulative })
    }

    pub fn from_weights(weights: &[f64; HOURS]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidInput("hour weights sum to zero".into()));
        }
        Self::new(weights.map(|w| w / total))
    }

    pub fn from_counts(counts: &[usize; HOURS]) -> Result<Self> {
        Self::from_weights(&counts.map(|c| c as f64))
    }

    pub fn probabilities(&self) -> &[f64; HOURS] {
        &self.p
    }

    pub fn sample_hour<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = 1.0 - rng.random::<f64>();
        self.cumulative.partition_point(|&c| c < u).min(HOURS - 1)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["hour", "p"])?;
        for (h, p) in self.p.iter().enumerate() {
            w.write_record([h.to_string(), p.to_string()])?;
        }
        w.flush().map_err(|e| Error::io("hour_histogram.csv", e))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut p = [0.0; HOURS];
        let mut seen = [false; HOURS];
        for row in rdr.deserialize::<(usize, f64)>() {
            let (h, v) = row?;
            if h >= HOURS || seen[h] {
                return Err(Error::InvalidInput(format!("hour histogram: bad or repeated hour {h}")));
            }
            seen[h] = true;
            p[h] = v;
        }
        Self::new(p)
    }
}

/// The three distributions driving event generation.
#[derive(Debug, Clone, PartialEq)]
pub struct EventDistributions {
    pub daily_count: EmpiricalDistribution,
    pub hour: HourHistogram,
    pub duration: EmpiricalDistribution,
}

pub fn build_distributions(cleaned: &[EventLogEntry]) -> Result<EventDistributions> {
    if cleaned.is_empty() {
        return Err(Error::EmptyEventLog);
    }
    let mut per_day: BTreeMap<NaiveDate, usize> = BTreeMap::new();
    let mut hours = [0usize; HOURS];
    for e in cleaned {
        *per_day.entry(e.date).or_default() += 1;
        hours[e.time.hour() as usize] += 1;
    }
    let counts: Vec<f64> = per_day.values().map(|&c| c as f64).collect();
    let durations: Vec<f64> = cleaned.iter().map(|e| e.duration_min).collect();
    Ok(EventDistributions {
        daily_count: EmpiricalDistribution::from_samples(&counts)?,
        hour: HourHistogram::from_counts(&hours)?,
        duration: EmpiricalDistribution::from_samples(&durations)?,
    })
}

/// A sampled emergency event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmergencyEvent {
    pub day: u32,
    pub id: u32,
    /// Minutes after midnight, in `[0, 1440)`.
    pub start_min: f64,
    pub duration_min: f64,
    pub location: Point,
}

/// Independent substreams used to generate one simulated day.
pub struct DayStreams {
    pub count: ChaCha8Rng,
    pub time: ChaCha8Rng,
    pub duration: ChaCha8Rng,
    pub location: ChaCha8Rng,
}

impl DayStreams {
    pub fn derive(master_seed: u64, year: u32, day: u32) -> Self {
        let idx = day_index(year, day);
        Self {
            count: substream(master_seed, Purpose::EventCount, idx),
            time: substream(master_seed, Purpose::EventTime, idx),
            duration: substream(master_seed, Purpose::EventDuration, idx),
            location: substream(master_seed, Purpose::EventLocation, idx),
        }
    }
}

/// Draw one day of events. `fixed_count` overrides the daily-count draw.
pub fn sample_day(
    dists: &EventDistributions,
    extent: &CityExtent,
    day: u32,
    fixed_count: Option<u32>,
    streams: &mut DayStreams,
) -> Vec<EmergencyEvent> {
    let n = match fixed_count {
        Some(n) => n,
        None => dists.daily_count.sample(&mut streams.count).round().max(0.0) as u32,
    };
    (0..n)
        .map(|id| {
            let hour = dists.hour.sample_hour(&mut streams.time) as f64;
            let start_min = (hour * 60.0 + streams.time.random::<f64>() * 60.0).min(MINUTES_PER_DAY - 1e-9);
            EmergencyEvent {
                day,
                id,
                start_min,
                duration_min: dists.duration.sample(&mut streams.duration),
                location: extent.sample_point(&mut streams.location),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn entry(date: (i32, u32, u32), hour: u32, kind: &str, dur: f64, pumps: u32) -> EventLogEntry {
        EventLogEntry {
            event_id: format!("{date:?}-{hour}-{kind}-{dur}"),
            date: NaiveDate::from_ymd_opt(date.0, date.1, date.2).unwrap(),
            time: NaiveTime::from_hms_opt(hour, 15, 0).unwrap(),
            event_type: kind.into(),
            duration_min: dur,
            pump_count: pumps,
        }
    }

    #[test]
    fn clean_filters() {
        let entries = vec![
            entry((2018, 11, 5), 20, "Fire", 30.0, 2),
            entry((2018, 3, 3), 20, "Fire", 30.0, 0),
            entry((2018, 3, 3), 20, "Fire", 30.0, 2),
            entry((2018, 3, 4), 20, "False Alarm", 30.0, 1),
            entry((2017, 1, 1), 20, "flooding", 30.0, 1),
            entry((2017, 12, 31), 2, "Fire", 30.0, 1),
            entry((2017, 6, 1), 2, "FLOODING", 0.0, 1),
            entry((2017, 6, 1), 2, "FLOODING", 12.0, 1),
        ];
        let (kept, report) = clean_event_log(entries, &CleanConfig::default()).unwrap();
        assert_eq!(kept.len(), 2);
        assert_eq!(kept[0].date, NaiveDate::from_ymd_opt(2018, 3, 3).unwrap());
        assert_eq!(
            report,
            CleanReport {
                input: 8,
                removed_type: 1,
                removed_date: 3,
                removed_pumps: 1,
                removed_duration: 1,
                retained: 2
            }
        );
        let (again, _) = clean_event_log(kept.clone(), &CleanConfig::default()).unwrap();
        assert_eq!(again, kept);

        let only_bad = vec![entry((2018, 11, 5), 20, "Fire", 30.0, 2)];
        assert!(matches!(clean_event_log(only_bad, &CleanConfig::default()), Err(Error::EmptyEventLog)));
    }

    #[test]
    fn durations_average_over_pumps() {
        assert_eq!(event_duration(&[60.0]).unwrap(), 60.0);
        assert_eq!(event_duration(&[60.0, 120.0]).unwrap(), 90.0);
        assert_eq!(event_duration(&[30.0; 4]).unwrap(), 30.0);
        assert!(event_duration(&[]).is_err());
    }

    #[test]
    fn per_pump_rows_are_grouped() {
        let mut a = entry((2018, 3, 3), 20, "Fire", 60.0, 1);
        let mut b = a.clone();
        b.duration_min = 120.0;
        let mut c = entry((2018, 3, 4), 9, "Fire", 45.0, 1);
        let mut idle = a.clone();
        idle.duration_min = 999.0;
        idle.pump_count = 0;
        a.event_id = "E1".into();
        b.event_id = "E1".into();
        idle.event_id = "E1".into();
        c.event_id = "E2".into();
        let events = assemble_events(vec![a.clone(), c.clone(), b, idle], LogLayout::PerPump);
        assert_eq!(events.len(), 2);
        assert_eq!(events[0].event_id, "E1");
        assert_eq!(events[0].duration_min, 90.0);
        assert_eq!(events[0].pump_count, 2);
        assert_eq!(events[1].duration_min, 45.0);

        let passthrough = assemble_events(vec![a.clone(), c.clone()], LogLayout::PerEvent);
        assert_eq!(passthrough, vec![a, c]);
    }

    #[test]
    fn distributions_from_small_log() {
        let log = vec![
            entry((2018, 3, 3), 19, "Fire", 10.0, 1),
            entry((2018, 3, 3), 19, "Fire", 20.0, 1),
            entry((2018, 3, 3), 19, "Fire", 20.0, 1),
            entry((2018, 3, 4), 19, "Fire", 40.0, 1),
        ];
        let d = build_distributions(&log).unwrap();
        assert_eq!(d.daily_count.support(), &[1.0, 3.0]);
        assert_eq!(d.daily_count.cdf(), &[0.5, 1.0]);
        assert_eq!(d.hour.probabilities()[19], 1.0);
        assert_eq!(d.duration.support(), &[10.0, 20.0, 40.0]);
        assert_eq!(d.duration.cdf(), &[0.25, 0.75, 1.0]);
        assert_eq!(d.duration.max(), 40.0);
        assert!((d.duration.mean() - 22.5).abs() < 1e-12);
    }

    #[test]
    fn distribution_validation() {
        assert!(EmpiricalDistribution::new(vec![], vec![]).is_err());
        assert!(EmpiricalDistribution::new(vec![1.0, 1.0], vec![0.5, 1.0]).is_err());
        assert!(EmpiricalDistribution::new(vec![1.0, 2.0], vec![0.6, 0.5]).is_err());
        assert!(EmpiricalDistribution::new(vec![1.0, 2.0], vec![0.5, 0.9]).is_err());
        assert!(EmpiricalDistribution::new(vec![1.0], vec![1.0]).is_ok());
        assert!(HourHistogram::new([0.5; HOURS]).is_err());
    }

    #[test]
    fn quantile_boundaries() {
        let single = EmpiricalDistribution::new(vec![7.0], vec![1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!((0..100).all(|_| single.sample(&mut rng) == 7.0));

        let d = EmpiricalDistribution::new(vec![1.0, 2.0], vec![0.25, 1.0]).unwrap();
        assert_eq!(d.quantile(1.0), 2.0);
        assert_eq!(d.quantile(0.25), 1.0);
        assert_eq!(d.quantile(0.2500001), 2.0);
        assert_eq!(d.quantile(f64::MIN_POSITIVE), 1.0);
    }

    #[test]
    fn bernoulli_frequency() {
        let d = EmpiricalDistribution::new(vec![1.0, 2.0], vec![0.25, 1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let n = 100_000;
        let ones = (0..n).filter(|_| d.sample(&mut rng) == 1.0).count();
        assert!((ones as f64 / n as f64 - 0.25).abs() < 0.005);
    }

    #[test]
    fn hour_sampling_matches_histogram() {
        let h = crate::synthetic::hour_histogram();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 1_000_000;
        let mut counts = [0usize; HOURS];
        for _ in 0..n {
            counts[h.sample_hour(&mut rng)] += 1;
        }
        for (c, p) in counts.iter().zip(h.probabilities()) {
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!((*c as f64 / n as f64 - p).abs() < 3.0 * se + 1e-12);
        }
    }

    #[test]
    fn sampled_days() {
        let dists = crate::synthetic::default_distributions();
        let extent = CityExtent::default();
        let mut streams = DayStreams::derive(1, 1, 0);
        assert!(sample_day(&dists, &extent, 0, Some(0), &mut streams).is_empty());

        let mut streams = DayStreams::derive(1, 1, 3);
        let day = sample_day(&dists, &extent, 3, None, &mut streams);
        assert!(!day.is_empty());
        for (i, e) in day.iter().enumerate() {
            assert_eq!(e.id, i as u32);
            assert_eq!(e.day, 3);
            assert!((0.0..MINUTES_PER_DAY).contains(&e.start_min));
            assert!(e.duration_min > 0.0);
            assert!(extent.contains(e.location));
        }
        let mut again = DayStreams::derive(1, 1, 3);
        assert_eq!(sample_day(&dists, &extent, 3, None, &mut again), day);
    }

    #[test]
    fn distribution_csv_round_trip() {
        let d = crate::synthetic::duration_distribution();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        assert_eq!(EmpiricalDistribution::read_csv(buf.as_slice()).unwrap(), d);
        let h = crate::synthetic::hour_histogram();
        let mut buf = Vec::new();
        h.write_csv(&mut buf).unwrap();
        assert_eq!(HourHistogram::read_csv(buf.as_slice()).unwrap(), h);
    }

    #[test]
    fn csv_errors_name_lines() {
        let text = "event_id,date,time,event_type,attending_min,pump_count\n1,2018-03-03,19:00,Fire,30,1\n2,2018-03-03,19:00,Fire,30,two\n";
        assert!(matches!(read_event_csv(text.as_bytes(), "e.csv"), Err(Error::Schema { line: 3, .. })));
        let short = "event_id,date,time,event_type,attending_min,pump_count\n1,2018-03-03,19:00,Fire\n";
        assert!(matches!(read_event_csv(short.as_bytes(), "e.csv"), Err(Error::Schema { line: 2, .. })));
    }
}
