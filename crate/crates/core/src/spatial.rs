//! Poisson point process placement of 5G small cells and nearest-cell
//! queries.

use std::collections::BTreeMap;
use std::io::Write;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::Serialize;

use crate::geometry::{AreaKind, AreaSpec, CityLayout};
use crate::rng::{substream, Purpose};
use crate::{Error, Point, Result};

pub const DEFAULT_BANDWIDTH_MHZ: f64 = 400.0;
/// Four times the 665 Mbps guaranteed on a quarter of the spectrum.
pub const DEFAULT_MAX_CAPACITY_MBPS: f64 = 2660.0;

#[derive(Debug, Clone, PartialEq)]
pub struct BaseStation {
    pub id: u32,
    pub position: Point,
    pub area_id: u32,
    pub bandwidth_mhz: f64,
    pub max_capacity_mbps: f64,
}

/// How the expected station count of an area is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PppMode {
    /// Use the configured mean counts directly (387 IA, 61 RA).
    MeanCount,
    /// Use intensity × area (53.4 and 8.347 per km²).
    Intensity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PppConfig {
    pub mode: PppMode,
    pub mean_count_ia: f64,
    pub mean_count_ra: f64,
    pub intensity_ia: f64,
    pub intensity_ra: f64,
    pub bandwidth_mhz: f64,
    pub max_capacity_mbps: f64,
}

impl Default for PppConfig {
    fn default() -> Self {
        Self {
            mode: PppMode::MeanCount,
            mean_count_ia: 387.0,
            mean_count_ra: 61.0,
            intensity_ia: 53.4,
            intensity_ra: 8.347,
            bandwidth_mhz: DEFAULT_BANDWIDTH_MHZ,
            max_capacity_mbps: DEFAULT_MAX_CAPACITY_MBPS,
        }
    }
}

impl PppConfig {
    pub fn validate(&self) -> Result<()> {
        let values = [
            ("mean_count_ia", self.mean_count_ia),
            ("mean_count_ra", self.mean_count_ra),
            ("intensity_ia", self.intensity_ia),
            ("intensity_ra", self.intensity_ra),
            ("bandwidth_mhz", self.bandwidth_mhz),
            ("max_capacity_mbps", self.max_capacity_mbps),
        ];
        for (name, v) in values {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Expected number of stations in `area`.
    pub fn mean_count(&self, area: &AreaSpec) -> f64 {
        match (self.mode, area.kind) {
            (PppMode::MeanCount, AreaKind::Industrial) => self.mean_count_ia,
            (PppMode::MeanCount, AreaKind::Residential) => self.mean_count_ra,
            (PppMode::Intensity, AreaKind::Industrial) => self.intensity_ia * area.area_km2(),
            (PppMode::Intensity, AreaKind::Residential) => self.intensity_ra * area.area_km2(),
        }
    }
}

/// Draw a Poisson(`mean`) station count.
///
/// Backed by `rand_distr`'s exact sampler (multiplication method for small
/// means, rejection under a Cauchy envelope above); no normal approximation.
pub fn sample_bs_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<u64> {
    if !(mean > 0.0 && mean.is_finite()) {
        return Err(Error::InvalidInput(format!("Poisson mean must be positive, got {mean}")));
    }
    let poisson = Poisson::new(mean).map_err(|e| Error::InvalidInput(format!("Poisson({mean}): {e}")))?;
    Ok(poisson.sample(rng) as u64)
}

/// `count` stations i.i.d. uniform over `area`, with ids starting at `first_id`.
pub fn place_stations<R: Rng + ?Sized>(
    area: &AreaSpec,
    count: usize,
    first_id: u32,
    ppp: &PppConfig,
    rng: &mut R,
) -> Vec<BaseStation> {
    (0..count)
        .map(|i| BaseStation {
            id: first_id + i as u32,
            position: area.sample_point(rng),
            area_id: area.id,
            bandwidth_mhz: ppp.bandwidth_mhz,
            max_capacity_mbps: ppp.max_capacity_mbps,
        })
        .collect()
}

/// Up to `k` stations closest to `point`, nearest first; equal distances
/// are ordered by ascending id.
pub fn nearest_stations(stations: &[BaseStation], point: Point, k: usize) -> Result<Vec<&BaseStation>> {
    if stations.is_empty() {
        return Err(Error::InvalidInput("nearest_stations: empty station set".into()));
    }
    if k == 0 {
        return Err(Error::InvalidInput("nearest_stations: k must be at least 1".into()));
    }
    let mut ranked: Vec<(f64, &BaseStation)> = stations.iter().map(|s| (s.position.distance_sq(&point), s)).collect();
    let key = |a: &(f64, &BaseStation), b: &(f64, &BaseStation)| a.0.total_cmp(&b.0).then(a.1.id.cmp(&b.1.id));
    let k = k.min(ranked.len());
    if k < ranked.len() {
        ranked.select_nth_unstable_by(k - 1, key);
        ranked.truncate(k);
    }
    ranked.sort_by(key);
    Ok(ranked.into_iter().map(|(_, s)| s).collect())
}

/// All placed stations of a layout, grouped by area.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StationMap {
    by_area: BTreeMap<u32, Vec<BaseStation>>,
}

impl StationMap {
    /// Place stations in every area of `layout`. Each area draws its count
    /// and positions from its own substream keyed by `(seed, area id,
    /// replicate)`, so adding an area never perturbs the others.
    pub fn generate(layout: &CityLayout, ppp: &PppConfig, seed: u64, replicate: u32) -> Result<Self> {
        ppp.validate()?;
        let mut by_area = BTreeMap::new();
        let mut next_id = 0u32;
        for area in &layout.areas {
            let mut rng = substream(seed, Purpose::Stations, (u64::from(replicate) << 32) | u64::from(area.id));
            let count = sample_bs_count(ppp.mean_count(area), &mut rng)? as usize;
            let stations = place_stations(area, count, next_id, ppp, &mut rng);
            next_id += count as u32;
            by_area.insert(area.id, stations);
        }
        Ok(Self { by_area })
    }

    pub fn from_stations(stations: impl IntoIterator<Item = BaseStation>) -> Self {
        let mut by_area: BTreeMap<u32, Vec<BaseStation>> = BTreeMap::new();
        for s in stations {
            by_area.entry(s.area_id).or_default().push(s);
        }
        Self { by_area }
    }

    pub fn in_area(&self, area_id: u32) -> &[BaseStation] {
        self.by_area.get(&area_id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, area_id: u32) -> usize {
        self.in_area(area_id).len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BaseStation> {
        self.by_area.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_area.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nearest cells of the covering area; no cells is an error.
    pub fn nearest_in_area(&self, area_id: u32, point: Point, k: usize) -> Result<Vec<&BaseStation>> {
        let stations = self.in_area(area_id);
        if stations.is_empty() {
            return Err(Error::NoStations { area_id });
        }
        nearest_stations(stations, point, k)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        #[derive(Serialize)]
        struct Row {
            bs_id: u32,
            area_id: u32,
            x_km: f64,
            y_km: f64,
            bandwidth_mhz: f64,
            max_capacity_mbps: f64,
        }
        let mut w = csv::Writer::from_writer(writer);
        for s in self.iter() {
            w.serialize(Row {
                bs_id: s.id,
                area_id: s.area_id,
                x_km: s.position.x_km,
                y_km: s.position.y_km,
                bandwidth_mhz: s.bandwidth_mhz,
                max_capacity_mbps: s.max_capacity_mbps,
            })?;
        }
        w.flush().map_err(|e| Error::io("stations.csv", e))?;
        Ok(())
    }
}
