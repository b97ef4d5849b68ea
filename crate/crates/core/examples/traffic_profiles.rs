//! Build the hourly traffic profiles from a week of synthetic per-cell
//! records and show the residential and industrial curves side by side.
//!
//!     cargo run --example traffic_profiles

use lsa_sim::synthetic;
use lsa_sim::traffic::{build_hourly_profile, peak_hour, profiles_for_layout, TrafficConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let records = synthetic::traffic_week(57, 1);
    let raw = build_hourly_profile(&records)?;
    let config = TrafficConfig::default();
    let p = profiles_for_layout(&raw, &config)?;
    let threshold = 0.75 * config.max_capacity_mbps;

    println!("{} records, threshold {threshold} Mbps", records.len());
    println!("hour  residential  industrial");
    for h in 0..24 {
        let mark = |v: f64| if v > threshold { '*' } else { ' ' };
        let (r, i) = (p.residential.values[h], p.industrial.values[h]);
        println!("{h:>4}  {r:>10.1}{}  {i:>9.1}{}", mark(r), mark(i));
    }
    println!(
        "peak hours: residential {}, industrial {}",
        peak_hour(&p.residential.values),
        peak_hour(&p.industrial.values)
    );
    Ok(())
}
