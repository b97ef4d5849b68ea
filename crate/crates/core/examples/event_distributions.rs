//! Clean a synthetic incident log, build the three empirical distributions
//! and sample a simulated day from them.
//!
//!     cargo run --example event_distributions

use lsa_sim::events::{build_distributions, clean_event_log, sample_day, CleanConfig, DayStreams};
use lsa_sim::geometry::CityExtent;
use lsa_sim::synthetic;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let log = synthetic::event_log(3);
    let (cleaned, report) = clean_event_log(log.entries, &CleanConfig::default())?;
    println!("{report:?}");

    let d = build_distributions(&cleaned)?;
    println!(
        "daily count: mean {:.2}, range {}..{}",
        d.daily_count.mean(),
        d.daily_count.support()[0],
        d.daily_count.max()
    );
    println!("duration: mean {:.1} min, max {} min", d.duration.mean(), d.duration.max());
    let busiest = (0..24).max_by(|&a, &b| d.hour.probabilities()[a].total_cmp(&d.hour.probabilities()[b])).unwrap();
    println!("busiest hour {busiest} (p = {:.3})", d.hour.probabilities()[busiest]);

    let events = sample_day(&d, &CityExtent::default(), 0, None, &mut DayStreams::derive(1, 1, 0));
    println!("\nsampled day: {} events", events.len());
    for e in events.iter().take(5) {
        println!(
            "  #{:<3} {:02}:{:02} for {:>6.1} min at ({:.2}, {:.2})",
            e.id,
            (e.start_min / 60.0) as u32,
            (e.start_min % 60.0) as u32,
            e.duration_min,
            e.location.x_km,
            e.location.y_km
        );
    }
    Ok(())
}
