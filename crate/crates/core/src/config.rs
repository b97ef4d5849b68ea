//! Flat `key = value` run configuration.
//!
//! Every key listed in [`KEYS`] must be present exactly once; `#` starts a
//! comment. Relative input paths are resolved against the config file's
//! directory. Worker count is not part of the file since it never changes
//! results; it is set on the command line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::engine::{InputSource, SimulationConfig, StationPlacement};
use crate::events::LogLayout;
use crate::geometry::{AreaPlacement, CityExtent};
use crate::impact::SharedAccessPolicy;
use crate::spatial::{PppConfig, PppMode};
use crate::{Error, Result};

/// Recognised keys, in canonical order.
pub const KEYS: &[&str] = &[
    "master_seed",
    "n_days",
    "years",
    "city_side_km",
    "area_side_km",
    "n_residential",
    "max_overlap",
    "placement_attempts",
    "station_placement",
    "ppp_mode",
    "mean_count_ia",
    "mean_count_ra",
    "intensity_ia",
    "intensity_ra",
    "bandwidth_mhz",
    "max_capacity_mbps",
    "emergency_fraction",
    "impact_threshold",
    "severity_classes",
    "max_duration_min",
    "peak_fraction",
    "shift_hours",
    "traffic_source",
    "events_source",
    "event_layout",
    "major_types",
    "excluded_dates",
    "fixed_daily_count",
];

fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("`{key}`: cannot parse `{v}`")))
}

/// Parse a year list such as `1,2,3` or `1-5` (ranges and items may mix).
pub fn parse_years(s: &str) -> Result<Vec<u32>> {
    let mut years = Vec::new();
    for item in s.split(',').map(str::trim) {
        match item.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num::<u32>("years", a.trim())?, num::<u32>("years", b.trim())?);
                if a > b {
                    return Err(Error::Config(format!("`years`: empty range `{item}`")));
                }
                years.extend(a..=b);
            }
            None => years.push(num::<u32>("years", item)?),
        }
    }
    Ok(years)
}

/// Parse config text. `base_dir` anchors relative input paths.
pub fn parse(text: &str, base_dir: &Path) -> Result<SimulationConfig> {
    let mut map: BTreeMap<&str, &str> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(Error::Config(format!("line {}: unknown key `{key}`", i + 1)));
        }
        if map.insert(key, value.trim()).is_some() {
            return Err(Error::Config(format!("line {}: duplicate key `{key}`", i + 1)));
        }
    }
    let get = |key: &str| map.get(key).copied().ok_or_else(|| Error::MissingKey(key.to_string()));
    let number = |key: &str| -> Result<f64> { num(key, get(key)?) };
    let source = |key: &str| -> Result<InputSource> {
        Ok(match get(key)? {
            "synthetic" => InputSource::Synthetic,
            path => InputSource::File(base_dir.join(path)),
        })
    };

    let years = parse_years(get("years")?)?;
    let major_types: Vec<String> =
        get("major_types")?.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect();
    let excluded_dates = get("excluded_dates")?
        .split(',')
        .map(str::trim)
        .filter(|d| !d.is_empty())
        .map(|d| {
            let (m, day) = d.split_once('-').ok_or_else(|| Error::Config(format!("`excluded_dates`: `{d}` is not MM-DD")))?;
            Ok((num::<u32>("excluded_dates", m)?, num::<u32>("excluded_dates", day)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let (max_duration_min, max_duration_from_data) = match get("max_duration_min")? {
        "auto" => (crate::impact::DEFAULT_MAX_DURATION_MIN, true),
        v => (num("max_duration_min", v)?, false),
    };

    let config = SimulationConfig {
        master_seed: num("master_seed", get("master_seed")?)?,
        n_days: num("n_days", get("n_days")?)?,
        years,
        workers: 0,
        extent: CityExtent::new(number("city_side_km")?).map_err(|e| Error::Config(e.to_string()))?,
        placement: AreaPlacement {
            n_residential: num("n_residential", get("n_residential")?)?,
            area_side_km: number("area_side_km")?,
            max_overlap: number("max_overlap")?,
            max_attempts: num("placement_attempts", get("placement_attempts")?)?,
        },
        station_placement: match get("station_placement")? {
            "per_run" => StationPlacement::PerRun,
            "per_year" => StationPlacement::PerYear,
            v => return Err(Error::Config(format!("`station_placement`: expected per_run or per_year, got `{v}`"))),
        },
        ppp: PppConfig {
            mode: match get("ppp_mode")? {
                "mean_count" => PppMode::MeanCount,
                "intensity" => PppMode::Intensity,
                v => return Err(Error::Config(format!("`ppp_mode`: expected mean_count or intensity, got `{v}`"))),
            },
            mean_count_ia: number("mean_count_ia")?,
            mean_count_ra: number("mean_count_ra")?,
            intensity_ia: number("intensity_ia")?,
            intensity_ra: number("intensity_ra")?,
            bandwidth_mhz: number("bandwidth_mhz")?,
            max_capacity_mbps: number("max_capacity_mbps")?,
        },
        policy: SharedAccessPolicy {
            emergency_fraction: number("emergency_fraction")?,
            impact_threshold: number("impact_threshold")?,
            severity_classes: num("severity_classes", get("severity_classes")?)?,
            max_duration_min,
        },
        max_duration_from_data,
        peak_fraction: number("peak_fraction")?,
        shift_hours: num("shift_hours", get("shift_hours")?)?,
        traffic_source: source("traffic_source")?,
        events_source: source("events_source")?,
        log_layout: match get("event_layout")? {
            "per_event" => LogLayout::PerEvent,
            "per_pump" => LogLayout::PerPump,
            v => return Err(Error::Config(format!("`event_layout`: expected per_event or per_pump, got `{v}`"))),
        },
        clean: crate::events::CleanConfig { major_types, excluded_dates },
        fixed_daily_count: match get("fixed_daily_count")? {
            "none" => None,
            v => Some(num("fixed_daily_count", v)?),
        },
    };
    config.validate()?;
    Ok(config)
}

pub fn load(path: &Path) -> Result<SimulationConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text, path.parent().unwrap_or(Path::new(".")))
}

fn source_text(s: &InputSource) -> String {
    match s {
        InputSource::Synthetic => "synthetic".into(),
        InputSource::File(p) => p.display().to_string(),
    }
}

/// Canonical config text; parsing it yields the same configuration (input
/// paths become absolute if they were resolved against a base directory).
pub fn to_text(c: &SimulationConfig) -> String {
    let join = |v: Vec<String>| v.join(",");
    let values: Vec<(&str, String)> = vec![
        ("master_seed", c.master_seed.to_string()),
        ("n_days", c.n_days.to_string()),
        ("years", join(c.years.iter().map(u32::to_string).collect())),
        ("city_side_km", c.extent.side_km.to_string()),
        ("area_side_km", c.placement.area_side_km.to_string()),
        ("n_residential", c.placement.n_residential.to_string()),
        ("max_overlap", c.placement.max_overlap.to_string()),
        ("placement_attempts", c.placement.max_attempts.to_string()),
        (
            "station_placement",
            match c.station_placement {
                StationPlacement::PerRun => "per_run".into(),
                StationPlacement::PerYear => "per_year".into(),
            },
        ),
        (
            "ppp_mode",
            match c.ppp.mode {
                PppMode::MeanCount => "mean_count".into(),
                PppMode::Intensity => "intensity".into(),
            },
        ),
        ("mean_count_ia", c.ppp.mean_count_ia.to_string()),
        ("mean_count_ra", c.ppp.mean_count_ra.to_string()),
        ("intensity_ia", c.ppp.intensity_ia.to_string()),
        ("intensity_ra", c.ppp.intensity_ra.to_string()),
        ("bandwidth_mhz", c.ppp.bandwidth_mhz.to_string()),
        ("max_capacity_mbps", c.ppp.max_capacity_mbps.to_string()),
        ("emergency_fraction", c.policy.emergency_fraction.to_string()),
        ("impact_threshold", c.policy.impact_threshold.to_string()),
        ("severity_classes", c.policy.severity_classes.to_string()),
        (
            "max_duration_min",
            if c.max_duration_from_data { "auto".into() } else { c.policy.max_duration_min.to_string() },
        ),
        ("peak_fraction", c.peak_fraction.to_string()),
        ("shift_hours", c.shift_hours.to_string()),
        ("traffic_source", source_text(&c.traffic_source)),
        ("events_source", source_text(&c.events_source)),
        (
            "event_layout",
            match c.log_layout {
                LogLayout::PerEvent => "per_event".into(),
                LogLayout::PerPump => "per_pump".into(),
            },
        ),
        ("major_types", c.clean.major_types.join(",")),
        (
            "excluded_dates",
            join(c.clean.excluded_dates.iter().map(|(m, d)| format!("{m:02}-{d:02}")).collect()),
        ),
        ("fixed_daily_count", c.fixed_daily_count.map_or("none".into(), |n| n.to_string())),
    ];
    debug_assert_eq!(values.len(), KEYS.len());
    let mut out = String::new();
    for (k, v) in values {
        let _ = writeln!(out, "{k} = {v}");
    }
    out
}

/// Paths of file-backed inputs, labelled by key.
pub fn input_files(c: &SimulationConfig) -> Vec<(&'static str, PathBuf)> {
    let mut out = Vec::new();
    if let InputSource::File(p) = &c.traffic_source {
        out.push(("traffic_source", p.clone()));
    }
    if let InputSource::File(p) = &c.events_source {
        out.push(("events_source", p.clone()));
    }
    out
}
