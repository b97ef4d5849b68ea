//! Run directories, ingest artifacts and figure data files.
//!
//! Everything written here is a pure function of the configuration and the
//! inputs: floats use Rust's shortest round-trip formatting and rows follow
//! year, day and event order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use crate::engine::{Inputs, RunOutput, Simulation, SimulationConfig, StationPlacement};
use crate::events::{
    assemble_events, build_distributions, clean_event_log, read_event_file, CleanReport, EmpiricalDistribution,
    EventDistributions, HourHistogram,
};
use crate::manifest::RunManifest;
use crate::traffic::{build_hourly_profile, profiles_for_layout, read_traffic_file, TrafficProfiles, HOURS};
use crate::{config, Error, Result};

pub const CONFIG_FILE: &str = "config.txt";
pub const LAYOUT_FILE: &str = "layout.csv";
pub const STATIONS_FILE: &str = "stations.csv";
pub const PROFILES_FILE: &str = "profiles.csv";
pub const DAILY_COUNT_FILE: &str = "dist_daily_count.csv";
pub const HOUR_FILE: &str = "dist_hour.csv";
pub const DURATION_FILE: &str = "dist_duration.csv";
pub const DAYS_FILE: &str = "days.csv";
pub const EVENTS_FILE: &str = "events.csv";
pub const HOURLY_FILE: &str = "hourly.csv";
pub const INGEST_REPORT_FILE: &str = "ingest_report.txt";
pub const FIGURES_DIR: &str = "figures";

pub fn summary_file(year: u32) -> String {
    format!("summary_year{year}.csv")
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    fs::File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::MissingArtifact(path.to_path_buf())
        } else {
            Error::io(path, e)
        }
    })
}

fn write_distributions(dir: &Path, profiles: Option<&TrafficProfiles>, d: Option<&EventDistributions>) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    if let Some(p) = profiles {
        let path = dir.join(PROFILES_FILE);
        p.write_csv(create(&path)?)?;
        written.push(path);
    }
    if let Some(d) = d {
        let path = dir.join(DAILY_COUNT_FILE);
        d.daily_count.write_csv(create(&path)?)?;
        written.push(path);
        let path = dir.join(HOUR_FILE);
        d.hour.write_csv(create(&path)?)?;
        written.push(path);
        let path = dir.join(DURATION_FILE);
        d.duration.write_csv(create(&path)?)?;
        written.push(path);
    }
    Ok(written)
}

/// Write every run artifact plus the manifest into `dir`. Returns the data
/// files written (manifest excluded).
pub fn write_run(dir: &Path, sim: &Simulation, out: &RunOutput) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    let path = dir.join(CONFIG_FILE);
    write_text(&path, &config::to_text(&sim.config))?;
    written.push(path);

    let path = dir.join(LAYOUT_FILE);
    sim.layout.write_csv(create(&path)?)?;
    written.push(path);

    match sim.config.station_placement {
        StationPlacement::PerRun => {
            let path = dir.join(STATIONS_FILE);
            sim.stations(sim.config.years[0]).write_csv(create(&path)?)?;
            written.push(path);
        }
        StationPlacement::PerYear => {
            for &year in &sim.config.years {
                let path = dir.join(format!("stations_year{year}.csv"));
                sim.stations(year).write_csv(create(&path)?)?;
                written.push(path);
            }
        }
    }

    written.extend(write_distributions(dir, Some(&sim.profiles), Some(&sim.inputs.distributions))?);

    for y in &out.years {
        let path = dir.join(summary_file(y.summary.year));
        write_summary(&path, &y.summary)?;
        written.push(path);
    }

    let mut days = String::from("year,day,events,covered_events,impact_mbps_h,total_fraction\n");
    let mut events =
        String::from("day,event_id,year,area_id,covered,class,n_cells,cell_impact_mbps_h,system_impact_fraction\n");
    let mut hourly = String::from("year,area_id,kind,hour,cell_impact,system_impact\n");
    for y in &out.years {
        let s = &y.summary;
        let mut per_day = vec![(0usize, 0usize, 0.0f64); s.n_days as usize];
        for r in &y.records {
            let d = &mut per_day[r.day as usize];
            d.0 += 1;
            if r.covered {
                d.1 += 1;
                d.2 += r.total_impact_mbps_h();
            }
            let _ = writeln!(
                events,
                "{},{},{},{},{},{},{},{},{}",
                r.day,
                r.event_id,
                r.year,
                r.area_id.map_or(String::new(), |a| a.to_string()),
                r.covered,
                r.class,
                r.affected_cell_ids.len(),
                r.serving_cell_impact(),
                r.system_impact_fraction
            );
        }
        for (day, ((n, covered, energy), fraction)) in per_day.iter().zip(&s.daily_total_fraction).enumerate() {
            let _ = writeln!(days, "{},{day},{n},{covered},{energy},{fraction}", s.year);
        }
        for a in &s.areas {
            for h in 0..HOURS {
                let _ = writeln!(
                    hourly,
                    "{},{},{},{h},{},{}",
                    s.year, a.area_id, a.kind, a.hourly_cell_impact[h], a.hourly_system_impact[h]
                );
            }
        }
    }
    for (name, text) in [(DAYS_FILE, days), (EVENTS_FILE, events), (HOURLY_FILE, hourly)] {
        let path = dir.join(name);
        write_text(&path, &text)?;
        written.push(path);
    }

    RunManifest::build(&sim.config, dir, &written)?.write(dir)?;
    Ok(written)
}

fn write_summary(path: &Path, s: &crate::engine::YearSummary) -> Result<()> {
    let mut text = String::from(
        "year,scope,kind,n_cells,events,covered_events,uncovered_events,mean_event_cell_impact_mbps_h,\
         mean_event_system_impact,mean_daily_fraction,p50_daily_fraction,p95_daily_fraction,max_daily_fraction\n",
    );
    let _ = writeln!(
        text,
        "{},all,,{},{},{},{},,,{},{},{},{}",
        s.year,
        s.total_cells,
        s.total_events,
        s.covered_events,
        s.uncovered_events,
        s.mean_daily_fraction(),
        s.daily_cdf.quantile(0.5),
        s.daily_cdf.quantile(0.95),
        s.daily_cdf.max()
    );
    for a in &s.areas {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},0,{},{},{},{},{},{}",
            s.year,
            a.area_id,
            a.kind,
            a.n_cells,
            a.events,
            a.events,
            a.mean_event_cell_impact_mbps_h,
            a.mean_event_system_impact,
            a.daily_fraction_mean,
            a.daily_fraction_p50,
            a.daily_fraction_p95,
            a.daily_fraction_max
        );
    }
    write_text(path, &text)
}

/// Row accounting of one ingest pass.
#[derive(Debug, Clone, PartialEq)]
pub struct IngestReport {
    pub traffic_rows: Option<usize>,
    pub event_rows: Option<usize>,
    pub events_after_grouping: Option<usize>,
    pub clean: Option<CleanReport>,
    pub daily_mean: Option<f64>,
    pub max_duration_min: Option<f64>,
}

impl IngestReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                let _ = writeln!(s, "{k} = {v}");
            }
        };
        line("traffic_rows_parsed", self.traffic_rows.map(|n| n.to_string()));
        line("event_rows_parsed", self.event_rows.map(|n| n.to_string()));
        line("events_after_grouping", self.events_after_grouping.map(|n| n.to_string()));
        if let Some(c) = &self.clean {
            line("removed_type", Some(c.removed_type.to_string()));
            line("removed_date", Some(c.removed_date.to_string()));
            line("removed_pumps", Some(c.removed_pumps.to_string()));
            line("removed_duration", Some(c.removed_duration.to_string()));
            line("retained", Some(c.retained.to_string()));
        }
        line("daily_mean", self.daily_mean.map(|v| format!("{v:.3}")));
        line("max_duration_min", self.max_duration_min.map(|v| v.to_string()));
        s
    }
}

/// Parse and validate raw datasets, writing the derived profiles and
/// distributions plus `ingest_report.txt` into `out_dir`.
pub fn ingest(
    traffic: Option<&Path>,
    events: Option<&Path>,
    config: &SimulationConfig,
    out_dir: &Path,
) -> Result<IngestReport> {
    if traffic.is_none() && events.is_none() {
        return Err(Error::Config("ingest needs a traffic file, an event file, or both".into()));
    }
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut report = IngestReport {
        traffic_rows: None,
        event_rows: None,
        events_after_grouping: None,
        clean: None,
        daily_mean: None,
        max_duration_min: None,
    };
    let profiles = match traffic {
        Some(path) => {
            let records = read_traffic_file(path)?;
            report.traffic_rows = Some(records.len());
            Some(profiles_for_layout(&build_hourly_profile(&records)?, &config.traffic_config())?)
        }
        None => None,
    };
    let dists = match events {
        Some(path) => {
            let rows = read_event_file(path)?;
            report.event_rows = Some(rows.len());
            let grouped = assemble_events(rows, config.log_layout);
            report.events_after_grouping = Some(grouped.len());
            let (cleaned, clean) = clean_event_log(grouped, &config.clean)?;
            report.clean = Some(clean);
            let d = build_distributions(&cleaned)?;
            report.daily_mean = Some(d.daily_count.mean());
            report.max_duration_min = Some(d.duration.max());
            Some(d)
        }
        None => None,
    };
    write_distributions(out_dir, profiles.as_ref(), dists.as_ref())?;
    write_text(&out_dir.join(INGEST_REPORT_FILE), &report.to_text())?;
    Ok(report)
}

/// Load ingested artifacts back as run inputs (used by tooling that wants
/// to skip re-parsing raw logs).
pub fn read_distributions(dir: &Path) -> Result<EventDistributions> {
    let open = |name: &str| {
        let path = dir.join(name);
        fs::File::open(&path).map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                Error::MissingArtifact(path.clone())
            } else {
                Error::io(&path, e)
            }
        })
    };
    Ok(EventDistributions {
        daily_count: EmpiricalDistribution::read_csv(open(DAILY_COUNT_FILE)?)?,
        hour: HourHistogram::read_csv(open(HOUR_FILE)?)?,
        duration: EmpiricalDistribution::read_csv(open(DURATION_FILE)?)?,
    })
}

/// Rows of a CSV with a header, as string maps.
fn read_rows(path: &Path) -> Result<Vec<BTreeMap<String, String>>> {
    let text = read_text(path)?;
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    rdr.records()
        .map(|r| Ok(headers.iter().map(String::from).zip(r?.iter().map(String::from)).collect()))
        .collect()
}

fn field<'a>(row: &'a BTreeMap<String, String>, key: &str) -> &'a str {
    row.get(key).map(String::as_str).unwrap_or("")
}

fn field_f64(row: &BTreeMap<String, String>, key: &str, path: &Path) -> Result<f64> {
    field(row, key)
        .parse()
        .map_err(|_| Error::Schema { path: path.display().to_string(), line: 0, message: format!("bad `{key}`") })
}

/// Names of the figure data files, in figure order.
pub const FIGURE_FILES: [&str; 7] = [
    "fig3_traffic_profiles.dat",
    "fig4_daily_count_cdf.dat",
    "fig5_hour_probability.dat",
    "fig6_duration_cdf.dat",
    "fig7_ia_impact.dat",
    "fig8_ra_impact.dat",
    "fig9_total_impact_cdf.dat",
];

/// Write gnuplot-ready two-column data files derived from a run directory.
/// Multi-series figures use one block per series, separated by two blank
/// lines (`index` in gnuplot).
pub fn export_figures(run_dir: &Path) -> Result<Vec<PathBuf>> {
    let fig_dir = run_dir.join(FIGURES_DIR);

    // Read everything first so a missing artifact leaves no partial output.
    let profiles = read_rows(&run_dir.join(PROFILES_FILE))?;
    let daily = read_text(&run_dir.join(DAILY_COUNT_FILE))?;
    let hours = read_text(&run_dir.join(HOUR_FILE))?;
    let durations = read_text(&run_dir.join(DURATION_FILE))?;
    let hourly_path = run_dir.join(HOURLY_FILE);
    let hourly = read_rows(&hourly_path)?;
    let days_path = run_dir.join(DAYS_FILE);
    let days = read_rows(&days_path)?;

    let mut figs: Vec<String> = Vec::with_capacity(7);

    let mut f3 = String::from("# hour traffic_mbps\n");
    for (i, kind) in ["industrial", "residential"].iter().enumerate() {
        if i > 0 {
            f3.push_str("\n\n");
        }
        let _ = writeln!(f3, "# {kind}");
        for r in profiles.iter().filter(|r| field(r, "kind") == *kind) {
            let _ = writeln!(f3, "{} {}", field(r, "hour"), field(r, "mbps"));
        }
    }
    figs.push(f3);

    let two_col = |header: &str, csv_text: &str| -> Result<String> {
        let mut s = format!("# {header}\n");
        let mut rdr = csv::Reader::from_reader(csv_text.as_bytes());
        for r in rdr.records() {
            let r = r?;
            let _ = writeln!(s, "{} {}", &r[0], &r[1]);
        }
        Ok(s)
    };
    figs.push(two_col("events_per_day cdf", &daily)?);
    figs.push(two_col("hour probability", &hours)?);
    figs.push(two_col("duration_min cdf", &durations)?);

    let last_year = hourly.iter().map(|r| field(r, "year").to_string()).max_by_key(|y| y.parse::<u32>().unwrap_or(0));
    let impact_fig = |kind: &str| -> Result<String> {
        let rows: Vec<_> = hourly
            .iter()
            .filter(|r| Some(field(r, "year")) == last_year.as_deref() && field(r, "kind") == kind)
            .collect();
        let n_areas = rows.iter().map(|r| field(r, "area_id")).collect::<std::collections::BTreeSet<_>>().len().max(1);
        let mut s = format!(
            "# {kind} areas, year {}: hour impact (mean over {n_areas} area(s))\n",
            last_year.as_deref().unwrap_or("-")
        );
        for (i, col) in ["cell_impact", "system_impact"].iter().enumerate() {
            if i > 0 {
                s.push_str("\n\n");
            }
            let _ = writeln!(s, "# {col}");
            let mut acc = [0.0; HOURS];
            for r in &rows {
                let h: usize = field(r, "hour").parse().unwrap_or(0);
                acc[h.min(HOURS - 1)] += field_f64(r, col, &hourly_path)?;
            }
            for (h, v) in acc.iter().enumerate() {
                let _ = writeln!(s, "{h} {}", v / n_areas as f64);
            }
        }
        Ok(s)
    };
    figs.push(impact_fig("industrial")?);
    figs.push(impact_fig("residential")?);

    let mut by_year: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for r in &days {
        let year = field(r, "year").parse().unwrap_or(0);
        by_year.entry(year).or_default().push(field_f64(r, "total_fraction", &days_path)?);
    }
    let mut f9 = String::from("# daily total impact fraction, cdf\n");
    for (i, (year, values)) in by_year.iter().enumerate() {
        if i > 0 {
            f9.push_str("\n\n");
        }
        let _ = writeln!(f9, "# year {year}");
        let cdf = EmpiricalDistribution::from_samples(values)?;
        for (v, c) in cdf.support().iter().zip(cdf.cdf()) {
            let _ = writeln!(f9, "{v} {c}");
        }
    }
    figs.push(f9);

    fs::create_dir_all(&fig_dir).map_err(|e| Error::io(&fig_dir, e))?;
    let mut written = Vec::new();
    for (name, text) in FIGURE_FILES.iter().zip(figs) {
        let path = fig_dir.join(name);
        write_text(&path, &text)?;
        written.push(path);
    }
    Ok(written)
}

/// Check a config (and its input files) without running, or a run
/// directory against its manifest.
pub fn validate_config(config: &SimulationConfig) -> Result<Inputs> {
    config.validate()?;
    Inputs::load(config)
}

pub fn validate_run(run_dir: &Path) -> Result<RunManifest> {
    let m = RunManifest::read(run_dir)?;
    m.verify(run_dir)?;
    Ok(m)
}
