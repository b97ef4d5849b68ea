//! Write synthetic traffic and incident CSVs, run them through the ingest
//! pipeline, then simulate from the files and export figure data.
//!
//!     cargo run --release --example ingest_datasets [out_dir]

use std::fs::File;
use std::path::PathBuf;

use lsa_sim::engine::{run, InputSource, SimulationConfig};
use lsa_sim::events::write_event_csv;
use lsa_sim::traffic::write_traffic_csv;
use lsa_sim::{output, synthetic};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "target/ingest_demo".into()));
    std::fs::create_dir_all(&dir)?;
    let traffic = dir.join("traffic.csv");
    let events = dir.join("events.csv");
    write_traffic_csv(&synthetic::traffic_week(57, 11), File::create(&traffic)?)?;
    let log = synthetic::event_log(11);
    write_event_csv(&log.entries, File::create(&events)?)?;

    let config = SimulationConfig {
        traffic_source: InputSource::File(traffic.clone()),
        events_source: InputSource::File(events.clone()),
        ..SimulationConfig::default()
    };
    let report = output::ingest(Some(&traffic), Some(&events), &config, &dir.join("ingest"))?;
    print!("{}", report.to_text());
    println!("expected retained {}", log.expected.retained);

    let (sim, out) = run(config)?;
    let run_dir = dir.join("run");
    output::write_run(&run_dir, &sim, &out)?;
    for f in output::export_figures(&run_dir)? {
        println!("wrote {}", f.display());
    }
    Ok(())
}
