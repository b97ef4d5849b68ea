//! City extent, deployment areas and coverage queries.
//!
//! Areas are axis-aligned squares. The industrial area (IA) is deployed in
//! year 1 and residential area `i` (RA, ids 1..=n) in year `i + 1`. RAs never
//! overlap each other; each may overlap the IA by at most a configured
//! fraction of the IA's area.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Point, Result};

/// Side of an 8 km² square area.
pub const DEFAULT_AREA_SIDE_KM: f64 = 2.828_427_124_746_190_3;
pub const DEFAULT_CITY_SIDE_KM: f64 = 10.0;
pub const DEFAULT_MAX_OVERLAP: f64 = 0.10;
pub const DEFAULT_MAX_ATTEMPTS: usize = 100_000;
/// The rollout schedule ends after year 5 (IA plus four RAs).
pub const MAX_RESIDENTIAL: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CityExtent {
    pub side_km: f64,
}

impl CityExtent {
    pub fn new(side_km: f64) -> Result<Self> {
        if !(side_km > 0.0 && side_km.is_finite()) {
            return Err(Error::InvalidInput(format!("city side must be positive, got {side_km}")));
        }
        Ok(Self { side_km })
    }

    pub fn area_km2(&self) -> f64 {
        self.side_km * self.side_km
    }

    pub fn contains(&self, p: Point) -> bool {
        (0.0..=self.side_km).contains(&p.x_km) && (0.0..=self.side_km).contains(&p.y_km)
    }

    /// Uniform point over the whole city square.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        Point::new(rng.random::<f64>() * self.side_km, rng.random::<f64>() * self.side_km)
    }
}

impl Default for CityExtent {
    fn default() -> Self {
        Self { side_km: DEFAULT_CITY_SIDE_KM }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AreaKind {
    Industrial,
    Residential,
}

impl AreaKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AreaKind::Industrial => "industrial",
            AreaKind::Residential => "residential",
        }
    }
}

impl fmt::Display for AreaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AreaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "industrial" | "ia" => Ok(AreaKind::Industrial),
            "residential" | "ra" => Ok(AreaKind::Residential),
            other => Err(Error::InvalidInput(format!("unknown area kind `{other}`"))),
        }
    }
}

/// A square deployment area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaSpec {
    pub id: u32,
    pub kind: AreaKind,
    pub center: Point,
    pub side_km: f64,
    pub deployment_year: u32,
}

impl AreaSpec {
    pub fn area_km2(&self) -> f64 {
        let (x0, y0, x1, y1) = self.bounds();
        (x1 - x0) * (y1 - y0)
    }

    /// `(min_x, min_y, max_x, max_y)`.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        let h = self.side_km / 2.0;
        (self.center.x_km - h, self.center.y_km - h, self.center.x_km + h, self.center.y_km + h)
    }

    /// Closed-rectangle membership.
    pub fn contains(&self, p: Point) -> bool {
        let (x0, y0, x1, y1) = self.bounds();
        p.x_km >= x0 && p.x_km <= x1 && p.y_km >= y0 && p.y_km <= y1
    }

    pub fn fits_in(&self, extent: &CityExtent) -> bool {
        let (x0, y0, x1, y1) = self.bounds();
        x0 >= 0.0 && y0 >= 0.0 && x1 <= extent.side_km && y1 <= extent.side_km
    }

    pub fn intersection_km2(&self, other: &AreaSpec) -> f64 {
        let (ax0, ay0, ax1, ay1) = self.bounds();
        let (bx0, by0, bx1, by1) = other.bounds();
        let w = (ax1.min(bx1) - ax0.max(bx0)).max(0.0);
        let h = (ay1.min(by1) - ay0.max(by0)).max(0.0);
        w * h
    }

    /// Uniform point inside the area.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let (x0, y0, _, _) = self.bounds();
        Point::new(
            x0 + rng.random::<f64>() * self.side_km,
            y0 + rng.random::<f64>() * self.side_km,
        )
    }
}

/// `area(a ∩ b) / area(a)`.
pub fn overlap_fraction(a: &AreaSpec, b: &AreaSpec) -> f64 {
    (a.intersection_km2(b) / a.area_km2()).clamp(0.0, 1.0)
}

/// Parameters for [`place_areas`].
#[derive(Debug, Clone, PartialEq)]
pub struct AreaPlacement {
    pub n_residential: usize,
    pub area_side_km: f64,
    pub max_overlap: f64,
    pub max_attempts: usize,
}

impl Default for AreaPlacement {
    fn default() -> Self {
        Self {
            n_residential: MAX_RESIDENTIAL,
            area_side_km: DEFAULT_AREA_SIDE_KM,
            max_overlap: DEFAULT_MAX_OVERLAP,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CityLayout {
    pub extent: CityExtent,
    pub areas: Vec<AreaSpec>,
}

/// Place the IA and `n_residential` RAs uniformly at random, rejecting
/// whole layouts that violate the overlap constraints.
///
/// Each attempt draws every centre afresh, so accepted layouts are uniform
/// over the feasible configurations. Exhausting `max_attempts` yields
/// [`Error::PlacementFailed`].
pub fn place_areas<R: Rng + ?Sized>(
    extent: CityExtent,
    params: &AreaPlacement,
    rng: &mut R,
) -> Result<CityLayout> {
    if params.n_residential > MAX_RESIDENTIAL {
        return Err(Error::InvalidInput(format!(
            "at most {MAX_RESIDENTIAL} residential areas fit the rollout schedule, got {}",
            params.n_residential
        )));
    }
    if !(0.0..=1.0).contains(&params.max_overlap) {
        return Err(Error::InvalidInput(format!("max_overlap {} outside [0, 1]", params.max_overlap)));
    }
    let side = params.area_side_km;
    if !(side > 0.0) || side > extent.side_km {
        return Err(Error::InvalidInput(format!(
            "area side {side} km does not fit a city of side {} km",
            extent.side_km
        )));
    }

    let half = side / 2.0;
    let span = extent.side_km - side;
    let mut areas = Vec::with_capacity(params.n_residential + 1);
    for _ in 0..params.max_attempts {
        areas.clear();
        for i in 0..=params.n_residential {
            let center = Point::new(half + rng.random::<f64>() * span, half + rng.random::<f64>() * span);
            let kind = if i == 0 { AreaKind::Industrial } else { AreaKind::Residential };
            areas.push(AreaSpec { id: i as u32, kind, center, side_km: side, deployment_year: i as u32 + 1 });
        }
        if (1..areas.len()).all(|i| admissible(&areas[..i], &areas[i], params.max_overlap)) {
            return Ok(CityLayout { extent, areas });
        }
    }
    Err(Error::PlacementFailed { attempts: params.max_attempts, requested: params.n_residential + 1 })
}

fn admissible(placed: &[AreaSpec], candidate: &AreaSpec, max_overlap: f64) -> bool {
    placed.iter().all(|a| match a.kind {
        AreaKind::Industrial => overlap_fraction(a, candidate) <= max_overlap,
        AreaKind::Residential => a.intersection_km2(candidate) == 0.0,
    })
}

impl CityLayout {
    /// Build a layout from explicit areas, checking every layout invariant.
    pub fn new(extent: CityExtent, areas: Vec<AreaSpec>, max_overlap: f64) -> Result<Self> {
        let layout = Self { extent, areas };
        layout.validate(max_overlap)?;
        Ok(layout)
    }

    pub fn validate(&self, max_overlap: f64) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        let industrial: Vec<_> = self.areas.iter().filter(|a| a.kind == AreaKind::Industrial).collect();
        if industrial.len() != 1 {
            return bad(format!("layout needs exactly one industrial area, found {}", industrial.len()));
        }
        if industrial[0].deployment_year != 1 {
            return bad("industrial area must deploy in year 1".into());
        }
        let mut years = Vec::new();
        for (i, a) in self.areas.iter().enumerate() {
            if !(a.side_km > 0.0) || !a.fits_in(&self.extent) {
                return bad(format!("area {} does not lie inside the city", a.id));
            }
            if self.areas[..i].iter().any(|b| b.id == a.id) {
                return bad(format!("duplicate area id {}", a.id));
            }
            if a.kind == AreaKind::Residential {
                if !(2..=5).contains(&a.deployment_year) || years.contains(&a.deployment_year) {
                    return bad(format!("residential area {} has invalid deployment year {}", a.id, a.deployment_year));
                }
                years.push(a.deployment_year);
                for b in &self.areas[..i] {
                    let ok = match b.kind {
                        AreaKind::Industrial => overlap_fraction(b, a) <= max_overlap,
                        AreaKind::Residential => a.intersection_km2(b) == 0.0,
                    };
                    if !ok {
                        return bad(format!("areas {} and {} overlap too much", b.id, a.id));
                    }
                }
            } else {
                for b in &self.areas[..i] {
                    if overlap_fraction(a, b) > max_overlap {
                        return bad(format!("areas {} and {} overlap too much", b.id, a.id));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn industrial(&self) -> &AreaSpec {
        self.areas
            .iter()
            .find(|a| a.kind == AreaKind::Industrial)
            .expect("layout invariant: one industrial area")
    }

    pub fn area(&self, id: u32) -> Option<&AreaSpec> {
        self.areas.iter().find(|a| a.id == id)
    }

    /// Areas with `deployment_year <= year`, in deployment order.
    pub fn deployed_areas(&self, year: u32) -> Vec<&AreaSpec> {
        let mut deployed: Vec<_> = self.areas.iter().filter(|a| a.deployment_year <= year).collect();
        deployed.sort_by_key(|a| (a.deployment_year, a.id));
        deployed
    }

    /// The deployed area covering `point` in `year`, or `None` when the
    /// point is outside 5G coverage. Points in an IA∩RA overlap belong to
    /// the IA.
    pub fn locate(&self, point: Point, year: u32) -> Option<&AreaSpec> {
        self.deployed_areas(year).into_iter().find(|a| a.contains(point))
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for a in &self.areas {
            w.serialize(AreaRow::from(a))?;
        }
        w.flush().map_err(|e| Error::io("layout.csv", e))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R, extent: CityExtent, max_overlap: f64) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut areas = Vec::new();
        for row in rdr.deserialize::<AreaRow>() {
            let row = row?;
            areas.push(AreaSpec {
                id: row.area_id,
                kind: row.kind,
                center: Point::new(row.center_x_km, row.center_y_km),
                side_km: row.side_km,
                deployment_year: row.deployment_year,
            });
        }
        Self::new(extent, areas, max_overlap)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct AreaRow {
    area_id: u32,
    kind: AreaKind,
    center_x_km: f64,
    center_y_km: f64,
    side_km: f64,
    deployment_year: u32,
}

impl From<&AreaSpec> for AreaRow {
    fn from(a: &AreaSpec) -> Self {
        Self {
            area_id: a.id,
            kind: a.kind,
            center_x_km: a.center.x_km,
            center_y_km: a.center.y_km,
            side_km: a.side_km,
            deployment_year: a.deployment_year,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn square(id: u32, kind: AreaKind, x: f64, y: f64, year: u32) -> AreaSpec {
        AreaSpec { id, kind, center: Point::new(x, y), side_km: DEFAULT_AREA_SIDE_KM, deployment_year: year }
    }

    #[test]
    fn ia_only_layout() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let params = AreaPlacement { n_residential: 0, ..Default::default() };
        let layout = place_areas(CityExtent::default(), &params, &mut rng).unwrap();
        assert_eq!(layout.areas.len(), 1);
        assert_eq!(layout.industrial().deployment_year, 1);
        layout.validate(0.0).unwrap();
    }

    #[test]
    fn four_residential_areas_respect_overlap_limits() {
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let layout = place_areas(CityExtent::default(), &AreaPlacement::default(), &mut rng).unwrap();
            assert_eq!(layout.areas.len(), 5);
            let ia = layout.industrial();
            for (i, a) in layout.areas.iter().enumerate() {
                assert!(a.fits_in(&layout.extent));
                if a.kind == AreaKind::Residential {
                    assert!(ia.intersection_km2(a) <= 0.8 + 1e-12);
                    for b in &layout.areas[i + 1..] {
                        assert_eq!(a.intersection_km2(b), 0.0);
                    }
                }
            }
            let years: Vec<u32> = layout.deployed_areas(9).iter().map(|a| a.deployment_year).collect();
            assert_eq!(years, vec![1, 2, 3, 4, 5]);
        }
    }

    #[test]
    fn infeasible_city_fails_placement() {
        // Oracle: on a 0.01 km grid, every admissible RA centre in a 2.9 km
        // city lies within [side/2, 2.9 - side/2]; any two such squares
        // intersect, so no two RAs can be disjoint.
        let side = DEFAULT_AREA_SIDE_KM;
        let lo = side / 2.0;
        let hi = 2.9 - side / 2.0;
        let grid: Vec<f64> = (0..=290).map(|i| i as f64 * 0.01).filter(|v| *v >= lo && *v <= hi).collect();
        assert!(!grid.is_empty());
        for &x1 in &grid {
            for &y1 in &grid {
                for &x2 in &grid {
                    for &y2 in &grid {
                        let a = square(1, AreaKind::Residential, x1, y1, 2);
                        let b = square(2, AreaKind::Residential, x2, y2, 3);
                        assert!(a.intersection_km2(&b) > 0.0);
                    }
                }
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let err = place_areas(CityExtent::new(2.9).unwrap(), &AreaPlacement::default(), &mut rng).unwrap_err();
        assert!(matches!(err, Error::PlacementFailed { attempts: DEFAULT_MAX_ATTEMPTS, requested: 5 }));
    }

    #[test]
    fn too_many_residential_areas_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let params = AreaPlacement { n_residential: 5, ..Default::default() };
        assert!(place_areas(CityExtent::default(), &params, &mut rng).is_err());
    }

    #[test]
    fn overlap_fraction_cases() {
        let a = square(0, AreaKind::Industrial, 5.0, 5.0, 1);
        assert_eq!(overlap_fraction(&a, &a), 1.0);
        let far = square(1, AreaKind::Residential, 1.5, 1.5, 2);
        assert_eq!(overlap_fraction(&a, &far), 0.0);

        let offset = 0.9 * DEFAULT_AREA_SIDE_KM;
        let b = square(1, AreaKind::Residential, 5.0 + offset, 5.0, 2);
        let closed_form = (DEFAULT_AREA_SIDE_KM - offset) * DEFAULT_AREA_SIDE_KM;
        assert!((a.intersection_km2(&b) - closed_form).abs() < 1e-12);
        assert!((overlap_fraction(&a, &b) - 0.1).abs() < 1e-12);
        assert!((a.intersection_km2(&b) - 0.8).abs() < 1e-12);

        // Hit sampling over `a`.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000;
        let hits = (0..n).filter(|_| b.contains(a.sample_point(&mut rng))).count();
        let p = hits as f64 / n as f64;
        let se = (0.1 * 0.9 / n as f64).sqrt();
        assert!((p - 0.1).abs() < 3.0 * se, "hit fraction {p}");
    }

    #[test]
    fn locate_respects_schedule_and_tie_break() {
        let ia = square(0, AreaKind::Industrial, 3.0, 3.0, 1);
        // RA overlapping the IA by 10% along x.
        let ra2 = square(1, AreaKind::Residential, 3.0 + 0.9 * DEFAULT_AREA_SIDE_KM, 3.0, 2);
        let ra3 = square(2, AreaKind::Residential, 7.0, 8.0, 3);
        let layout = CityLayout::new(CityExtent::default(), vec![ia, ra2, ra3], 0.1 + 1e-9).unwrap();

        assert_eq!(layout.locate(ia.center, 1).map(|a| a.id), Some(0));
        assert_eq!(layout.locate(ra3.center, 2), None);
        assert_eq!(layout.locate(ra3.center, 3).map(|a| a.id), Some(2));

        let overlap_point = Point::new(3.0 + DEFAULT_AREA_SIDE_KM / 2.0 - 0.1, 3.0);
        assert!(ia.contains(overlap_point) && ra2.contains(overlap_point));
        assert_eq!(layout.locate(overlap_point, 5).map(|a| a.id), Some(0));

        assert_eq!(layout.locate(Point::new(9.9, 0.1), 5), None);
        let ids: Vec<u32> = layout.deployed_areas(3).iter().map(|a| a.id).collect();
        assert_eq!(ids, vec![0, 1, 2]);
        assert_eq!(layout.deployed_areas(1).len(), 1);
    }

    #[test]
    fn validate_rejects_overlapping_residential_areas() {
        let ia = square(0, AreaKind::Industrial, 2.0, 2.0, 1);
        let a = square(1, AreaKind::Residential, 7.0, 7.0, 2);
        let b = square(2, AreaKind::Residential, 7.5, 7.0, 3);
        assert!(CityLayout::new(CityExtent::default(), vec![ia, a, b], 0.1).is_err());
        let dup_year = square(2, AreaKind::Residential, 7.0, 2.0, 2);
        assert!(CityLayout::new(CityExtent::default(), vec![ia, a, dup_year], 0.1).is_err());
    }

    #[test]
    fn layout_csv_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let layout = place_areas(CityExtent::default(), &AreaPlacement::default(), &mut rng).unwrap();
        let mut buf = Vec::new();
        layout.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("area_id,kind,center_x_km,center_y_km,side_km,deployment_year\n0,industrial,"));
        let back = CityLayout::read_csv(buf.as_slice(), layout.extent, DEFAULT_MAX_OVERLAP).unwrap();
        assert_eq!(back, layout);
    }
}
