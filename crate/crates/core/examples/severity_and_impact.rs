//! Severity classes, expected affected cells, and the excess-traffic
//! impact of one event window on each area kind.
//!
//!     cargo run --example severity_and_impact

use lsa_sim::impact::{cell_impact_by_hour, severity_class, severity_weights, SharedAccessPolicy};
use lsa_sim::synthetic;
use lsa_sim::traffic::{profiles_for_layout, TrafficConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let policy = SharedAccessPolicy::default();
    println!("class upper bounds (min): {:?}", policy.class_boundaries());
    for d in [10.0, 285.0, 286.0, 900.0, 5000.0] {
        println!("  {d:>6} min -> class {}", severity_class(d, &policy));
    }

    let w = severity_weights(&synthetic::duration_distribution(), &policy);
    println!("synthetic durations: class probabilities {:.4?}, expected cells {:.4}", w.probabilities, w.expected_cells);

    let cap = TrafficConfig::default().max_capacity_mbps;
    let p = profiles_for_layout(&synthetic::RAW_TRAFFIC_MBPS, &TrafficConfig::default())?;
    // A two-hour event starting at 20:30.
    let (start, duration) = (20.5 * 60.0, 120.0);
    for profile in [&p.residential, &p.industrial] {
        let by_hour = cell_impact_by_hour(profile, start, duration, &policy, cap);
        let parts: Vec<_> = by_hour.iter().enumerate().filter(|(_, v)| **v > 0.0).map(|(h, v)| format!("h{h}={v:.1}")).collect();
        println!(
            "{:<11} impact {:>7.2} Mbps·h  [{}]",
            profile.kind.to_string(),
            by_hour.iter().sum::<f64>(),
            parts.join(" ")
        );
    }
    Ok(())
}
