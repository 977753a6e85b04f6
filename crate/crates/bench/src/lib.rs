//! Fixed inputs shared by the benchmarks.

use qpdiff_core::verify::{active_points, complicated_config, real_plane_points, simple_config};
use qpdiff_core::{ComplexPoint2, IncidenceConfig, ObservationPoint, WaveLabel};

pub struct Fixture {
    pub simple: IncidenceConfig,
    pub complicated: IncidenceConfig,
    pub spectral: Vec<ComplexPoint2>,
    pub far: Vec<ObservationPoint>,
    pub sd1: Vec<ObservationPoint>,
}

impl Fixture {
    pub fn new() -> Self {
        let simple = simple_config();
        let complicated = complicated_config();
        Fixture {
            spectral: real_plane_points(&simple, 256, 1e-3),
            far: (0..256)
                .map(|i| {
                    let t = i as f64 / 256.0;
                    ObservationPoint::spherical(100.0 + 50.0 * t, 0.1 + 1.3 * t, 6.2 * t).expect("valid point")
                })
                .collect(),
            sd1: active_points(WaveLabel::SD1, &complicated, 64),
            simple,
            complicated,
        }
    }
}

impl Default for Fixture {
    fn default() -> Self {
        Self::new()
    }
}
