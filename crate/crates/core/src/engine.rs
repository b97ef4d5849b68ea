//! Multi-year Monte Carlo runs over the rollout schedule.
//!
//! A run fixes one area layout and one station placement (per run, or per
//! year when configured), then simulates `n_days` independent days for each
//! requested year. Day `d` of year `y` draws all of its randomness from
//! substreams keyed by `(master_seed, y, d)`, so the result does not depend
//! on how days are spread over worker threads.

use std::collections::BTreeMap;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::events::{
    assemble_events, build_distributions, clean_event_log, read_event_file, sample_day, CleanConfig, CleanReport,
    DayStreams, EmpiricalDistribution, EventDistributions, LogLayout,
};
use crate::geometry::{place_areas, AreaKind, AreaPlacement, AreaSpec, CityExtent, CityLayout};
use crate::impact::{assess_event, daily_capacity_mbps_h, ImpactRecord, SharedAccessPolicy};
use crate::rng::{substream, Purpose};
use crate::spatial::{PppConfig, StationMap};
use crate::traffic::{
    build_hourly_profile, profiles_for_layout, read_traffic_file, HourVector, TrafficConfig, TrafficProfiles, HOURS,
};
use crate::{synthetic, Error, Result};

pub const MAX_YEAR: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputSource {
    Synthetic,
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StationPlacement {
    /// One placement shared by every simulated year.
    PerRun,
    /// A fresh placement for each year.
    PerYear,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub master_seed: u64,
    pub n_days: u32,
    pub years: Vec<u32>,
    /// Worker threads; 0 lets rayon decide. Never affects results.
    pub workers: usize,
    pub extent: CityExtent,
    pub placement: AreaPlacement,
    pub ppp: PppConfig,
    pub policy: SharedAccessPolicy,
    /// Take `policy.max_duration_min` from the longest observed duration.
    pub max_duration_from_data: bool,
    pub peak_fraction: f64,
    pub shift_hours: i64,
    pub traffic_source: InputSource,
    pub events_source: InputSource,
    pub log_layout: LogLayout,
    pub clean: CleanConfig,
    pub fixed_daily_count: Option<u32>,
    pub station_placement: StationPlacement,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            master_seed: 20_190_301,
            n_days: 365,
            years: (1..=MAX_YEAR).collect(),
            workers: 0,
            extent: CityExtent::default(),
            placement: AreaPlacement::default(),
            ppp: PppConfig::default(),
            policy: SharedAccessPolicy::default(),
            max_duration_from_data: false,
            peak_fraction: crate::traffic::DEFAULT_PEAK_FRACTION,
            shift_hours: crate::traffic::DEFAULT_SHIFT_HOURS,
            traffic_source: InputSource::Synthetic,
            events_source: InputSource::Synthetic,
            log_layout: LogLayout::PerEvent,
            clean: CleanConfig::default(),
            fixed_daily_count: None,
            station_placement: StationPlacement::PerRun,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(Error::Config(m));
        if self.n_days < 1 {
            return cfg("n_days must be at least 1".into());
        }
        if self.years.is_empty() {
            return cfg("years must not be empty".into());
        }
        for (i, y) in self.years.iter().enumerate() {
            if !(1..=MAX_YEAR).contains(y) || self.years[..i].contains(y) {
                return cfg(format!("years must be distinct values in 1..={MAX_YEAR}, got {:?}", self.years));
            }
        }
        if !(self.peak_fraction > 0.0 && self.peak_fraction <= 1.0) {
            return cfg(format!("peak_fraction {} outside (0, 1]", self.peak_fraction));
        }
        self.ppp.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.policy.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn traffic_config(&self) -> TrafficConfig {
        TrafficConfig {
            max_capacity_mbps: self.ppp.max_capacity_mbps,
            peak_fraction: self.peak_fraction,
            shift_hours: self.shift_hours,
        }
    }
}

/// Ingested (or synthetic) inputs of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Inputs {
    pub raw_traffic: HourVector,
    pub distributions: EventDistributions,
    pub traffic_rows: Option<usize>,
    pub clean_report: Option<CleanReport>,
}

impl Inputs {
    pub fn synthetic() -> Self {
        Self {
            raw_traffic: synthetic::RAW_TRAFFIC_MBPS,
            distributions: synthetic::default_distributions(),
            traffic_rows: None,
            clean_report: None,
        }
    }

    pub fn load(config: &SimulationConfig) -> Result<Self> {
        let mut inputs = Self::synthetic();
        if let InputSource::File(path) = &config.traffic_source {
            let records = read_traffic_file(path)?;
            inputs.traffic_rows = Some(records.len());
            inputs.raw_traffic = build_hourly_profile(&records)?;
        }
        if let InputSource::File(path) = &config.events_source {
            let rows = read_event_file(path)?;
            let events = assemble_events(rows, config.log_layout);
            let (cleaned, report) = clean_event_log(events, &config.clean)?;
            inputs.distributions = build_distributions(&cleaned)?;
            inputs.clean_report = Some(report);
        }
        Ok(inputs)
    }
}

/// Areas deployed by `year`, in deployment order.
pub fn deployed_areas(layout: &CityLayout, year: u32) -> Vec<&AreaSpec> {
    layout.deployed_areas(year)
}

/// Prepared, immutable state of a run.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub config: SimulationConfig,
    pub inputs: Inputs,
    pub policy: SharedAccessPolicy,
    pub layout: CityLayout,
    pub profiles: TrafficProfiles,
    stations: BTreeMap<u32, StationMap>,
}

impl Simulation {
    pub fn prepare(config: SimulationConfig, inputs: Inputs) -> Result<Self> {
        config.validate()?;
        let mut policy = config.policy;
        if config.max_duration_from_data {
            policy.max_duration_min = inputs.distributions.duration.max();
            policy.validate()?;
        }
        let profiles = profiles_for_layout(&inputs.raw_traffic, &config.traffic_config())?;
        let mut rng = substream(config.master_seed, Purpose::Layout, 0);
        let layout = place_areas(config.extent, &config.placement, &mut rng)?;
        let replicates: Vec<u32> = match config.station_placement {
            StationPlacement::PerRun => vec![0],
            StationPlacement::PerYear => config.years.clone(),
        };
        let stations = replicates
            .into_iter()
            .map(|r| Ok((r, StationMap::generate(&layout, &config.ppp, config.master_seed, r)?)))
            .collect::<Result<_>>()?;
        Ok(Self { config, inputs, policy, layout, profiles, stations })
    }

    pub fn stations(&self, year: u32) -> &StationMap {
        let key = match self.config.station_placement {
            StationPlacement::PerRun => 0,
            StationPlacement::PerYear => year,
        };
        self.stations.get(&key).or_else(|| self.stations.values().next()).expect("at least one placement")
    }

    /// Sample and assess every event of one day.
    pub fn simulate_day(&self, year: u32, day: u32) -> Result<Vec<ImpactRecord>> {
        let mut streams = DayStreams::derive(self.config.master_seed, year, day);
        let events = sample_day(
            &self.inputs.distributions,
            &self.layout.extent,
            day,
            self.config.fixed_daily_count,
            &mut streams,
        );
        let stations = self.stations(year);
        events
            .iter()
            .map(|e| assess_event(e, &self.layout, stations, &self.profiles, year, &self.policy))
            .collect::<Result<Vec<_>>>()
            .map_err(|source| Error::Day { year, day, source: Box::new(source) })
    }

    /// All days of one year, merged in day order.
    pub fn simulate_year(&self, year: u32, pool: &rayon::ThreadPool) -> Result<Vec<ImpactRecord>> {
        let days: Vec<Result<Vec<ImpactRecord>>> =
            pool.install(|| (0..self.config.n_days).into_par_iter().map(|d| self.simulate_day(year, d)).collect());
        let mut records = Vec::new();
        for day in days {
            records.extend(day?);
        }
        Ok(records)
    }

    pub fn run(&self) -> Result<RunOutput> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.config.workers)
            .build()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
        let mut years = Vec::with_capacity(self.config.years.len());
        for &year in &self.config.years {
            let records = self.simulate_year(year, &pool)?;
            let summary = summarize(year, self.config.n_days, &records, &self.layout, self.stations(year));
            years.push(YearOutput { summary, records });
        }
        Ok(RunOutput { years })
    }
}

/// Load inputs, prepare and run.
pub fn run(config: SimulationConfig) -> Result<(Simulation, RunOutput)> {
    config.validate()?;
    let inputs = Inputs::load(&config)?;
    let sim = Simulation::prepare(config, inputs)?;
    let out = sim.run()?;
    Ok((sim, out))
}

#[derive(Debug, Clone, PartialEq)]
pub struct YearOutput {
    pub summary: YearSummary,
    pub records: Vec<ImpactRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub years: Vec<YearOutput>,
}

impl RunOutput {
    pub fn summaries(&self) -> impl Iterator<Item = &YearSummary> {
        self.years.iter().map(|y| &y.summary)
    }

    pub fn records(&self) -> impl Iterator<Item = &ImpactRecord> {
        self.years.iter().flat_map(|y| &y.records)
    }
}

/// Per-area statistics for one simulated year.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaSummary {
    pub area_id: u32,
    pub kind: AreaKind,
    pub n_cells: usize,
    pub events: usize,
    /// Mean impact on the serving cell per event in the area (Mbps·h).
    pub mean_event_cell_impact_mbps_h: f64,
    /// Mean per-event fraction of the area's daily capacity.
    pub mean_event_system_impact: f64,
    pub daily_fraction_mean: f64,
    pub daily_fraction_p50: f64,
    pub daily_fraction_p95: f64,
    pub daily_fraction_max: f64,
    /// Expected daily loss per affected cell at each hour of day, as a
    /// fraction of one cell-hour of capacity.
    pub hourly_cell_impact: [f64; HOURS],
    /// Expected daily loss at each hour of day as a fraction of the area's
    /// capacity for that hour.
    pub hourly_system_impact: [f64; HOURS],
}

#[derive(Debug, Clone, PartialEq)]
pub struct YearSummary {
    pub year: u32,
    pub n_days: u32,
    pub total_cells: usize,
    pub total_events: usize,
    pub covered_events: usize,
    pub uncovered_events: usize,
    /// Per-day impact energy over all deployed areas divided by their total
    /// daily capacity, indexed by day.
    pub daily_total_fraction: Vec<f64>,
    pub daily_cdf: EmpiricalDistribution,
    pub areas: Vec<AreaSummary>,
}

impl YearSummary {
    pub fn mean_daily_fraction(&self) -> f64 {
        mean(&self.daily_total_fraction)
    }

    pub fn area(&self, area_id: u32) -> Option<&AreaSummary> {
        self.areas.iter().find(|a| a.area_id == area_id)
    }
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

/// Nearest-rank percentile of an ascending slice.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let rank = (q * sorted.len() as f64).ceil().max(1.0) as usize;
    sorted[rank.min(sorted.len()) - 1]
}

/// Aggregate one year's records. Days without records count as zero-impact
/// days.
pub fn summarize(
    year: u32,
    n_days: u32,
    records: &[ImpactRecord],
    layout: &CityLayout,
    stations: &StationMap,
) -> YearSummary {
    let n = n_days as usize;
    let deployed = layout.deployed_areas(year);
    let total_cells = deployed.iter().map(|a| stations.count(a.id)).sum();
    let total_capacity: f64 = deployed.iter().map(|a| daily_capacity_mbps_h(stations, a.id)).sum();

    let mut daily_energy = vec![0.0; n];
    for r in records.iter().filter(|r| r.covered) {
        daily_energy[r.day as usize] += r.total_impact_mbps_h();
    }
    let daily_total_fraction: Vec<f64> = daily_energy
        .iter()
        .map(|e| if total_capacity > 0.0 { e / total_capacity } else { 0.0 })
        .collect();

    let areas = deployed
        .iter()
        .map(|area| {
            let capacity = daily_capacity_mbps_h(stations, area.id);
            let n_cells = stations.count(area.id);
            let in_area: Vec<&ImpactRecord> = records.iter().filter(|r| r.area_id == Some(area.id)).collect();
            let mut energy = vec![0.0; n];
            let mut hourly_cell = [0.0; HOURS];
            let mut hourly_system = [0.0; HOURS];
            let cell_hour = if n_cells > 0 { capacity / (HOURS as f64 * n_cells as f64) } else { 0.0 };
            for r in &in_area {
                energy[r.day as usize] += r.total_impact_mbps_h();
                let k = r.affected_cell_ids.len().max(1) as f64;
                for h in 0..HOURS {
                    hourly_cell[h] += r.hourly_mbps_h[h] / k;
                    hourly_system[h] += r.hourly_mbps_h[h];
                }
            }
            for h in 0..HOURS {
                hourly_cell[h] = if cell_hour > 0.0 { hourly_cell[h] / (n_days as f64 * cell_hour) } else { 0.0 };
                hourly_system[h] =
                    if capacity > 0.0 { hourly_system[h] / (n_days as f64 * capacity / HOURS as f64) } else { 0.0 };
            }
            let mut daily: Vec<f64> =
                energy.iter().map(|e| if capacity > 0.0 { e / capacity } else { 0.0 }).collect();
            let daily_fraction_mean = mean(&daily);
            daily.sort_by(f64::total_cmp);
            let cell: Vec<f64> = in_area.iter().map(|r| r.serving_cell_impact()).collect();
            let system: Vec<f64> = in_area.iter().map(|r| r.system_impact_fraction).collect();
            AreaSummary {
                area_id: area.id,
                kind: area.kind,
                n_cells,
                events: in_area.len(),
                mean_event_cell_impact_mbps_h: mean(&cell),
                mean_event_system_impact: mean(&system),
                daily_fraction_mean,
                daily_fraction_p50: percentile(&daily, 0.5),
                daily_fraction_p95: percentile(&daily, 0.95),
                daily_fraction_max: daily.last().copied().unwrap_or(0.0),
                hourly_cell_impact: hourly_cell,
                hourly_system_impact: hourly_system,
            }
        })
        .collect();

    let covered_events = records.iter().filter(|r| r.covered).count();
    YearSummary {
        year,
        n_days,
        total_cells,
        total_events: records.len(),
        covered_events,
        uncovered_events: records.len() - covered_events,
        daily_cdf: EmpiricalDistribution::from_samples(&daily_total_fraction).expect("n_days >= 1"),
        daily_total_fraction,
        areas,
    }
}
