//! Geodesic distance, linear map projection, path interpolation, and
//! junction-delay padding.
//!
//! All distances are great-circle (haversine) on a spherical Earth of
//! radius [`EARTH_RADIUS_KM`]. Projection maps geographic bounds onto a
//! rectangular canvas with the y axis inverted so north is up; it exists
//! only for optional coordinate exports, not for any internal computation.

use thiserror::Error;

/// Spherical Earth radius used by every distance computation, in kilometers.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// A geographic position in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Self {
        Self { lat, lon }
    }
}

/// Geographic bounding box: (min_lat, min_lon, max_lat, max_lon).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub min_lat: f64,
    pub min_lon: f64,
    pub max_lat: f64,
    pub max_lon: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum GeoError {
    #[error("degenerate bounds: max must exceed min on both axes")]
    DegenerateBounds,
}

/// Linear lat/lon -> (y, x) mapping derived from map bounds and a canvas size.
///
/// `translation` holds the geographic anchor (max_lat, min_lon) so that the
/// north-west bounds corner lands on canvas (0, 0); `scale` converts degrees
/// to projected units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionSpec {
    pub translation: (f64, f64),
    pub scale: (f64, f64),
    pub canvas: (f64, f64),
}

/// Great-circle distance between two points in kilometers (haversine).
pub fn geodesic_distance(a: GeoPoint, b: GeoPoint) -> f64 {
    let lat1 = a.lat.to_radians();
    let lat2 = b.lat.to_radians();
    let dlat = (b.lat - a.lat).to_radians() / 2.0;
    let dlon = (b.lon - a.lon).to_radians() / 2.0;

    let h = dlat.sin().powi(2) + lat1.cos() * lat2.cos() * dlon.sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

/// Builds the projection that lands the bounds corners exactly on the canvas
/// corners, north up.
pub fn make_projection(bounds: Bounds, canvas: (f64, f64)) -> Result<ProjectionSpec, GeoError> {
    if bounds.max_lat <= bounds.min_lat || bounds.max_lon <= bounds.min_lon {
        return Err(GeoError::DegenerateBounds);
    }
    let (height, width) = canvas;
    Ok(ProjectionSpec {
        translation: (bounds.max_lat, bounds.min_lon),
        scale: (
            height / (bounds.max_lat - bounds.min_lat),
            width / (bounds.max_lon - bounds.min_lon),
        ),
        canvas,
    })
}

/// Projects a geographic point to (y, x). Points outside the bounds
/// extrapolate linearly; nothing is clamped.
pub fn geo_to_projected(p: GeoPoint, spec: &ProjectionSpec) -> (f64, f64) {
    let (lat_anchor, lon_anchor) = spec.translation;
    let (lat_scale, lon_scale) = spec.scale;
    ((lat_anchor - p.lat) * lat_scale, (p.lon - lon_anchor) * lon_scale)
}

/// Inverse of [`geo_to_projected`].
pub fn projected_to_geo(yx: (f64, f64), spec: &ProjectionSpec) -> GeoPoint {
    let (lat_anchor, lon_anchor) = spec.translation;
    let (lat_scale, lon_scale) = spec.scale;
    GeoPoint::new(lat_anchor - yx.0 / lat_scale, lon_anchor + yx.1 / lon_scale)
}

/// Resamples a polyline at arc-length spacing `step_km`.
///
/// Every original waypoint is kept, each segment is subdivided into equal
/// pieces no longer than `step_km`, and the output starts and ends exactly on
/// the original endpoints.
pub fn interpolate_path(waypoints: &[GeoPoint], step_km: f64) -> Vec<GeoPoint> {
    assert!(step_km > 0.0, "step_km must be positive");
    assert!(waypoints.len() >= 2, "need at least two waypoints");

    let mut out = Vec::new();
    out.push(waypoints[0]);
    for pair in waypoints.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let len = geodesic_distance(a, b);
        // Epsilon-tolerant ceiling so a segment measuring a hair over an
        // exact multiple of step_km does not gain a spurious extra piece.
        let pieces = ((len / step_km) - 1e-9).ceil().max(1.0) as usize;
        for i in 1..pieces {
            let t = i as f64 / pieces as f64;
            out.push(GeoPoint::new(
                a.lat + (b.lat - a.lat) * t,
                a.lon + (b.lon - a.lon) * t,
            ));
        }
        // Close on the exact waypoint; a lerp at t = 1 can land one ulp off.
        out.push(b);
    }
    out
}

/// Number of terminal-point repetitions that realize `delay_s` of standstill
/// at `tick_s` per tick.
pub fn delay_padding(delay_s: f64, tick_s: f64) -> usize {
    assert!(tick_s > 0.0, "tick_s must be positive");
    if delay_s <= 0.0 {
        return 0;
    }
    (delay_s / tick_s).ceil() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn approx(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1.0)
    }

    #[test]
    fn distance_zero_for_coincident_points() {
        let p = GeoPoint::new(12.5, 77.0);
        assert_eq!(geodesic_distance(p, p), 0.0);
    }

    #[test]
    fn distance_half_circumference_for_antipodal_points() {
        let d = geodesic_distance(GeoPoint::new(0.0, 0.0), GeoPoint::new(0.0, 180.0));
        let expected = std::f64::consts::PI * EARTH_RADIUS_KM;
        assert!(approx(d, expected, 1e-9), "{d} vs {expected}");
    }

    #[test]
    fn distance_one_degree_on_equator() {
        let d = geodesic_distance(GeoPoint::new(0.0, 0.0), GeoPoint::new(0.0, 1.0));
        let expected = std::f64::consts::PI * EARTH_RADIUS_KM / 180.0;
        assert!(approx(d, expected, 1e-9), "{d} vs {expected}");
    }

    #[test]
    fn distance_is_a_metric_on_seeded_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let mut pt = || {
                GeoPoint::new(rng.gen_range(-80.0..80.0), rng.gen_range(-179.0..179.0))
            };
            let (a, b, c) = (pt(), pt(), pt());
            let ab = geodesic_distance(a, b);
            let ba = geodesic_distance(b, a);
            let ac = geodesic_distance(a, c);
            let cb = geodesic_distance(c, b);
            assert!((ab - ba).abs() < 1e-9);
            assert!(ab >= 0.0);
            assert!(ab <= ac + cb + 1e-9, "triangle inequality violated");
        }
    }

    #[test]
    fn projection_maps_bounds_corners_to_canvas_corners() {
        let bounds = Bounds { min_lat: 0.0, min_lon: 0.0, max_lat: 1.0, max_lon: 1.0 };
        let spec = make_projection(bounds, (100.0, 100.0)).unwrap();
        // North-west corner is canvas origin, south-east corner is (h, w).
        assert_eq!(geo_to_projected(GeoPoint::new(1.0, 0.0), &spec), (0.0, 0.0));
        assert_eq!(geo_to_projected(GeoPoint::new(0.0, 1.0), &spec), (100.0, 100.0));
        assert_eq!(geo_to_projected(GeoPoint::new(0.5, 0.5), &spec), (50.0, 50.0));
    }

    #[test]
    fn projection_rejects_degenerate_bounds() {
        let bounds = Bounds { min_lat: 1.0, min_lon: 0.0, max_lat: 1.0, max_lon: 2.0 };
        assert_eq!(make_projection(bounds, (10.0, 10.0)), Err(GeoError::DegenerateBounds));
    }

    #[test]
    fn projection_extrapolates_outside_bounds() {
        let bounds = Bounds { min_lat: 0.0, min_lon: 0.0, max_lat: 1.0, max_lon: 1.0 };
        let spec = make_projection(bounds, (100.0, 100.0)).unwrap();
        // One bounds-height above the top edge lands one canvas-height above it.
        assert_eq!(geo_to_projected(GeoPoint::new(2.0, 0.0), &spec), (-100.0, 0.0));
    }

    #[test]
    fn projection_round_trips_seeded_points() {
        let bounds = Bounds { min_lat: 12.9, min_lon: 77.5, max_lat: 13.1, max_lon: 77.7 };
        let spec = make_projection(bounds, (650.0, 640.0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let p = GeoPoint::new(rng.gen_range(12.9..13.1), rng.gen_range(77.5..77.7));
            let q = projected_to_geo(geo_to_projected(p, &spec), &spec);
            assert!(approx(q.lat, p.lat, 1e-9));
            assert!(approx(q.lon, p.lon, 1e-9));
        }
    }

    #[test]
    fn interpolation_splits_one_km_into_quarter_steps() {
        // Two equator points exactly 1 km apart.
        let deg_per_km = 180.0 / (std::f64::consts::PI * EARTH_RADIUS_KM);
        let a = GeoPoint::new(0.0, 0.0);
        let b = GeoPoint::new(0.0, deg_per_km);
        let pts = interpolate_path(&[a, b], 0.25);
        assert_eq!(pts.len(), 5);
        assert_eq!(pts[0], a);
        assert_eq!(*pts.last().unwrap(), b);
        for pair in pts.windows(2) {
            assert!(geodesic_distance(pair[0], pair[1]) <= 0.25 + 1e-12);
        }
    }

    #[test]
    fn interpolation_with_large_step_keeps_endpoints_only() {
        let a = GeoPoint::new(0.0, 0.0);
        let b = GeoPoint::new(0.0, 0.001);
        assert_eq!(interpolate_path(&[a, b], 10.0), vec![a, b]);
    }

    #[test]
    fn interpolation_keeps_bend_points() {
        let a = GeoPoint::new(0.0, 0.0);
        let bend = GeoPoint::new(0.01, 0.01);
        let b = GeoPoint::new(0.0, 0.02);
        let pts = interpolate_path(&[a, bend, b], 0.1);
        assert!(pts.contains(&bend), "bend waypoint missing");
    }

    #[test]
    fn interpolation_conserves_arc_length_within_one_step() {
        let pts = [
            GeoPoint::new(0.0, 0.0),
            GeoPoint::new(0.02, 0.01),
            GeoPoint::new(0.01, 0.03),
        ];
        let step = 0.05;
        let total: f64 = pts.windows(2).map(|w| geodesic_distance(w[0], w[1])).sum();
        let out = interpolate_path(&pts, step);
        let resampled: f64 = out.windows(2).map(|w| geodesic_distance(w[0], w[1])).sum();
        assert!((resampled - total).abs() < step);
    }

    #[test]
    fn delay_padding_counts() {
        assert_eq!(delay_padding(0.0, 4.0), 0);
        assert_eq!(delay_padding(10.0, 4.0), 3);
        assert_eq!(delay_padding(8.0, 4.0), 2);
    }
}
