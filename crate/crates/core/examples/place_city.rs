//! Place the industrial and residential areas, drop base stations as a
//! Poisson point process and look up the cells nearest to a few points.
//!
//!     cargo run --example place_city [seed]

use lsa_sim::geometry::{place_areas, AreaPlacement, CityExtent};
use lsa_sim::rng::{substream, Purpose};
use lsa_sim::spatial::{PppConfig, StationMap};
use lsa_sim::Point;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args().nth(1).map_or(Ok(7), |s| s.parse())?;
    let extent = CityExtent::default();
    let layout = place_areas(extent, &AreaPlacement::default(), &mut substream(seed, Purpose::Layout, 0))?;
    let ppp = PppConfig::default();
    let stations = StationMap::generate(&layout, &ppp, seed, 0)?;

    for a in &layout.areas {
        let (x0, y0, x1, y1) = a.bounds();
        println!(
            "area {} {:<11} year {}  [{x0:.2}, {x1:.2}] x [{y0:.2}, {y1:.2}]  {} stations (mean {})",
            a.id,
            a.kind,
            a.deployment_year,
            stations.count(a.id),
            ppp.mean_count(a)
        );
    }

    let ia = layout.industrial();
    for p in [ia.center, Point::new(0.5, 0.5), Point::new(9.5, 9.5)] {
        match layout.locate(p, 5) {
            Some(area) => {
                let near = stations.nearest_in_area(area.id, p, 4)?;
                let ids: Vec<_> = near.iter().map(|s| format!("{}@{:.3}km", s.id, s.position.distance(&p))).collect();
                println!("({:.2}, {:.2}) -> area {}: {}", p.x_km, p.y_km, area.id, ids.join(" "));
            }
            None => println!("({:.2}, {:.2}) -> not covered", p.x_km, p.y_km),
        }
    }
    Ok(())
}
