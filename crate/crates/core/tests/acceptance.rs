//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::fs;
use std::path::Path;
use std::time::Instant;

use lsa_sim::engine::{self, Inputs, Simulation, SimulationConfig};
use lsa_sim::events::{clean_event_log, read_event_csv, write_event_csv, CleanConfig, EmpiricalDistribution};
use lsa_sim::geometry::{overlap_fraction, place_areas, AreaKind, AreaPlacement, CityExtent};
use lsa_sim::impact::{cell_impact, severity_weights, SharedAccessPolicy};
use lsa_sim::rng::{substream, Purpose};
use lsa_sim::spatial::{place_stations, sample_bs_count, PppConfig};
use lsa_sim::traffic::{
    build_hourly_profile, circular_shift, peak, peak_hour, profiles_for_layout, HourlyProfile, TrafficConfig,
};
use lsa_sim::{output, synthetic};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_ppp_fidelity() -> Outcome {
    let started = Instant::now();
    let n = 100_000;
    let mut details = Vec::new();
    let mut ok = true;
    for (label, mean) in [("IA", 387.0), ("RA", 61.0)] {
        let mut rng = substream(1, Purpose::Stations, mean as u64);
        let xs: Vec<f64> = (0..n).map(|_| sample_bs_count(mean, &mut rng).map(|k| k as f64)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        let m = xs.iter().sum::<f64>() / n as f64;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
        let (em, ev) = ((m - mean).abs() / mean, (v - mean).abs() / mean);
        ok &= em < 0.02 && ev < 0.05;
        details.push(format!("{label} mean err {:.3}% var err {:.3}%", em * 100.0, ev * 100.0));
    }

    // 10 x 10 grid over an area, 10^5 points; chi-square critical value df = 99, alpha = 0.01.
    const CHI2_CRIT: f64 = 134.642;
    let layout = place_areas(CityExtent::default(), &AreaPlacement::default(), &mut substream(1, Purpose::Layout, 0))
        .map_err(|e| e.to_string())?;
    let area = layout.industrial();
    let (x0, y0, x1, y1) = area.bounds();
    let pts = place_stations(area, n, 0, &PppConfig::default(), &mut substream(1, Purpose::Stations, 99));
    let mut cells = [0usize; 100];
    for p in &pts {
        let gx = (((p.position.x_km - x0) / (x1 - x0) * 10.0) as usize).min(9);
        let gy = (((p.position.y_km - y0) / (y1 - y0) * 10.0) as usize).min(9);
        cells[gy * 10 + gx] += 1;
    }
    let expected = n as f64 / 100.0;
    let chi2: f64 = cells.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    ok &= chi2 < CHI2_CRIT;
    let elapsed = started.elapsed().as_secs_f64();
    ok &= elapsed < 10.0;
    details.push(format!("chi2 {chi2:.1} < {CHI2_CRIT}"));
    details.push(format!("{elapsed:.2}s"));
    check(ok, details.join(", "))
}

fn c2_geometry() -> Outcome {
    let extent = CityExtent::default();
    let ia_only = AreaPlacement { n_residential: 0, ..AreaPlacement::default() };
    let layout = place_areas(extent, &ia_only, &mut substream(2, Purpose::Layout, 0)).map_err(|e| e.to_string())?;
    let mut rng = substream(2, Purpose::Synthetic, 0);
    let n = 1_000_000;
    let hits = (0..n).filter(|_| layout.locate(extent.sample_point(&mut rng), 1).is_some()).count();
    let coverage = hits as f64 / n as f64;
    let mut ok = (coverage - 0.080).abs() <= 0.003;

    let seeds = 1000;
    let mut worst_ia = 0.0f64;
    let mut ra_overlaps = 0;
    for seed in 0..seeds {
        let l = place_areas(extent, &AreaPlacement::default(), &mut substream(seed, Purpose::Layout, 0))
            .map_err(|e| e.to_string())?;
        let ia = l.industrial();
        for (i, a) in l.areas.iter().enumerate().filter(|(_, a)| a.kind == AreaKind::Residential) {
            worst_ia = worst_ia.max(overlap_fraction(ia, a));
            ra_overlaps += l.areas[i + 1..].iter().filter(|b| overlap_fraction(a, b) > 0.0).count();
        }
    }
    ok &= ra_overlaps == 0 && worst_ia <= 0.1;
    check(
        ok,
        format!("year-1 coverage {coverage:.4}; {seeds} layouts: RA-RA overlaps {ra_overlaps}, max IA-RA overlap {worst_ia:.4}"),
    )
}

fn c3_traffic() -> Outcome {
    let config = TrafficConfig::default();
    let raw = build_hourly_profile(&synthetic::traffic_week(57, 3)).map_err(|e| e.to_string())?;
    let p = profiles_for_layout(&raw, &config).map_err(|e| e.to_string())?;
    let target = 0.95 * config.max_capacity_mbps;
    let rel = |v: f64| (v - target).abs() / target;
    let (r_err, i_err) = (rel(peak(&p.residential.values)), rel(peak(&p.industrial.values)));
    let shifted = circular_shift(&p.residential.values, 14) == p.industrial.values;
    let ia_peak = peak_hour(&p.industrial.values);
    check(
        r_err <= 1e-9 && i_err <= 1e-9 && shifted && (9..=16).contains(&ia_peak),
        format!("peak rel err {r_err:.1e}/{i_err:.1e}, IA == shift(RA, 14): {shifted}, IA peak hour {ia_peak}"),
    )
}

fn minute_oracle(values: &[f64; 24], start: u32, duration: u32, threshold: f64) -> f64 {
    (start..start + duration).map(|m| (values[(m / 60 % 24) as usize] - threshold).max(0.0) / 60.0).sum()
}

fn c4_impact_oracle() -> Outcome {
    let policy = SharedAccessPolicy::default();
    let cap = PppConfig::default().max_capacity_mbps;
    let threshold = policy.impact_threshold * cap;
    let mut rng = substream(4, Purpose::Synthetic, 0);
    let mut worst = 0.0f64;
    let mut compared = 0;
    for _ in 0..1000 {
        let values: [f64; 24] = std::array::from_fn(|_| rng.random_range(0.0..1.2 * cap));
        let profile = HourlyProfile { kind: AreaKind::Residential, values };
        let start = rng.random_range(0..1440u32);
        let duration = rng.random_range(1..3000u32);
        let got = cell_impact(&profile, start as f64, duration as f64, &policy, cap);
        let want = minute_oracle(&values, start, duration, threshold);
        let err = if want == 0.0 { got.abs() } else { (got - want).abs() / want };
        worst = worst.max(err);
        compared += 1;
    }
    let mut nonzero_below = 0;
    for _ in 0..1000 {
        let values: [f64; 24] = std::array::from_fn(|_| rng.random_range(0.0..=threshold));
        let profile = HourlyProfile { kind: AreaKind::Industrial, values };
        let got = cell_impact(&profile, rng.random_range(0.0..1440.0), rng.random_range(0.0..3000.0), &policy, cap);
        nonzero_below += usize::from(got != 0.0);
    }
    check(
        worst <= 1e-9 && nonzero_below == 0,
        format!("{compared} pairs, max rel err {worst:.1e}; sub-threshold profiles with nonzero impact: {nonzero_below}"),
    )
}

fn c5_severity() -> Outcome {
    let policy = SharedAccessPolicy::default();
    let samples: Vec<f64> = (1..=1140).map(f64::from).collect();
    let uniform = EmpiricalDistribution::from_samples(&samples).map_err(|e| e.to_string())?;
    let w = severity_weights(&uniform, &policy);
    let bounds = policy.class_boundaries();
    check(
        w.probabilities == [0.25; 4] && w.expected_cells == 2.5 && bounds == [285.0, 570.0, 855.0, 1140.0],
        format!("probabilities {:?}, expected cells {}, boundaries {:?}", w.probabilities, w.expected_cells, bounds),
    )
}

fn c6_qualitative() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for seed in [SimulationConfig::default().master_seed, 1, 2, 3, 4] {
        let started = Instant::now();
        let (_, out) = engine::run(SimulationConfig { master_seed: seed, ..SimulationConfig::default() })
            .map_err(|e| e.to_string())?;
        let elapsed = started.elapsed().as_secs_f64();
        let (mut ia, mut ra) = ((0.0, 0usize), (0.0, 0usize));
        for r in out.records().filter(|r| r.covered) {
            let acc = if r.area_kind == Some(AreaKind::Industrial) { &mut ia } else { &mut ra };
            acc.0 += r.system_impact_fraction;
            acc.1 += 1;
        }
        let ratio = (ra.0 / ra.1 as f64) / (ia.0 / ia.1 as f64);
        let means: Vec<f64> = out.summaries().map(|s| s.mean_daily_fraction()).collect();
        let rising = means[1..].iter().all(|m| *m > means[0]);
        ok &= ratio >= 10.0 && rising && elapsed < 120.0;
        lines.push(format!("seed {seed}: RA/IA {ratio:.1}x, years 2-5 above year 1: {rising}, {elapsed:.2}s"));
    }
    check(ok, lines.join("; "))
}

fn dir_files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> =
        fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    names
}

/// Manifest text minus the two lines that legitimately vary between runs.
fn manifest_core(dir: &Path) -> String {
    fs::read_to_string(dir.join("manifest.txt"))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with("created_utc") && !l.starts_with("workers"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn c7_determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut dirs = Vec::new();
    for workers in [1, 8] {
        let config = SimulationConfig { workers, ..SimulationConfig::default() };
        let sim = Simulation::prepare(config, Inputs::synthetic()).map_err(|e| e.to_string())?;
        let out = sim.run().map_err(|e| e.to_string())?;
        let dir = tmp.path().join(format!("w{workers}"));
        output::write_run(&dir, &sim, &out).map_err(|e| e.to_string())?;
        dirs.push(dir);
    }
    let names = dir_files(&dirs[0]);
    if names != dir_files(&dirs[1]) {
        return Err("different file sets".into());
    }
    let mut differing: Vec<&str> = names
        .iter()
        .filter(|n| *n != "manifest.txt")
        .filter(|n| fs::read(dirs[0].join(n)).unwrap() != fs::read(dirs[1].join(n)).unwrap())
        .map(String::as_str)
        .collect();
    if manifest_core(&dirs[0]) != manifest_core(&dirs[1]) {
        differing.push("manifest.txt (digests/config)");
    }
    check(
        differing.is_empty(),
        format!("{} files compared at 1 vs 8 workers, differing: {differing:?}", names.len()),
    )
}

fn c8_ingestion() -> Outcome {
    let cfg = CleanConfig::default();
    let mut lines = Vec::new();
    let mut ok = true;
    for seed in [1, 2] {
        let log = synthetic::event_log(seed);
        let mut buf = Vec::new();
        write_event_csv(&log.entries, &mut buf).map_err(|e| e.to_string())?;
        let rows = read_event_csv(buf.as_slice(), "synthetic").map_err(|e| e.to_string())?;
        let (kept, report) = clean_event_log(rows, &cfg).map_err(|e| e.to_string())?;
        let violations = kept
            .iter()
            .filter(|e| {
                use chrono::Datelike;
                e.pump_count < 1 || cfg.excluded_dates.contains(&(e.date.month(), e.date.day()))
            })
            .count();
        ok &= report == log.expected && violations == 0;
        lines.push(format!(
            "seed {seed}: retained {} (expected {}), removed date {} pumps {} type {} duration {}, violations left {violations}",
            report.retained,
            log.expected.retained,
            report.removed_date,
            report.removed_pumps,
            report.removed_type,
            report.removed_duration
        ));
    }
    check(ok, lines.join("; "))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("C1 PPP fidelity", c1_ppp_fidelity),
        ("C2 geometry", c2_geometry),
        ("C3 traffic pipeline", c3_traffic),
        ("C4 impact oracle", c4_impact_oracle),
        ("C5 severity", c5_severity),
        ("C6 qualitative reproduction", c6_qualitative),
        ("C7 determinism", c7_determinism),
        ("C8 ingestion contract", c8_ingestion),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
