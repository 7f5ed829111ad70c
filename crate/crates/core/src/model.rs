//! Point-source configurations, the Fourier measurement model on `{0..Ω}²`,
//! bounded noise and the translation modification.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Point, Result};

/// A single point source.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Source {
    pub location: Point,
    pub amplitude: Complex64,
}

impl Source {
    pub fn new(location: Point, amplitude: Complex64) -> Self {
        Self { location, amplitude }
    }
}

/// Axis-aligned box `[lower₀, upper₀] × [lower₁, upper₁]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Region {
    pub lower: Point,
    pub upper: Point,
}

impl Region {
    pub fn new(lower: Point, upper: Point) -> Self {
        Self { lower, upper }
    }

    pub fn contains(&self, p: Point) -> bool {
        (0..2).all(|k| p[k] >= self.lower[k] && p[k] <= self.upper[k])
    }

    pub fn shifted(&self, v: Point) -> Self {
        Self {
            lower: [self.lower[0] + v[0], self.lower[1] + v[1]],
            upper: [self.upper[0] + v[0], self.upper[1] + v[1]],
        }
    }

    pub fn width(&self, axis: usize) -> f64 {
        self.upper[axis] - self.lower[axis]
    }
}

impl Default for Region {
    /// `[0, π/2]²`.
    fn default() -> Self {
        Self::new([0.0, 0.0], [FRAC_PI_2, FRAC_PI_2])
    }
}

/// ℓ1 distance between two points.
pub fn l1_distance(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).abs() + (a[1] - b[1]).abs()
}

/// ℓ2 distance between two points.
pub fn l2_distance(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Validated collection of point sources inside a region.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceConfiguration {
    sources: Vec<Source>,
    region: Region,
}

impl SourceConfiguration {
    /// Rejects zero amplitudes, points outside `region` and coincident points.
    pub fn new(sources: Vec<Source>, region: Region) -> Result<Self> {
        for (j, s) in sources.iter().enumerate() {
            if !(s.amplitude.norm() > 0.0) {
                return Err(Error::InvalidConfig(format!("source {j} has zero amplitude")));
            }
            if !s.location.iter().all(|c| c.is_finite()) || !region.contains(s.location) {
                return Err(Error::InvalidConfig(format!(
                    "source {j} at {:?} lies outside the region",
                    s.location
                )));
            }
        }
        for p in 0..sources.len() {
            for q in p + 1..sources.len() {
                if sources[p].location == sources[q].location {
                    return Err(Error::InvalidConfig(format!("sources {p} and {q} coincide")));
                }
            }
        }
        Ok(Self { sources, region })
    }

    /// Configuration in the default region `[0, π/2]²`.
    pub fn in_default_region(sources: Vec<Source>) -> Result<Self> {
        Self::new(sources, Region::default())
    }

    pub fn sources(&self) -> &[Source] {
        &self.sources
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn len(&self) -> usize {
        self.sources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }

    pub fn locations(&self) -> Vec<Point> {
        self.sources.iter().map(|s| s.location).collect()
    }

    pub fn amplitudes(&self) -> Vec<Complex64> {
        self.sources.iter().map(|s| s.amplitude).collect()
    }

    /// Smallest amplitude modulus (`+∞` for an empty configuration).
    pub fn min_amplitude(&self) -> f64 {
        self.sources.iter().map(|s| s.amplitude.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Smallest pairwise ℓ1 distance (`+∞` with fewer than two sources).
    pub fn min_separation(&self) -> f64 {
        min_pairwise(&self.locations(), l1_distance)
    }

    /// Every location and the region moved by `v`.
    pub fn shifted(&self, v: Point) -> Self {
        Self {
            sources: self
                .sources
                .iter()
                .map(|s| Source::new([s.location[0] + v[0], s.location[1] + v[1]], s.amplitude))
                .collect(),
            region: self.region.shifted(v),
        }
    }

    /// Every amplitude multiplied by `c` (which must be nonzero).
    pub fn scaled(&self, c: Complex64) -> Result<Self> {
        Self::new(
            self.sources.iter().map(|s| Source::new(s.location, s.amplitude * c)).collect(),
            self.region,
        )
    }
}

/// Minimum of `dist` over distinct pairs.
pub fn min_pairwise(points: &[Point], dist: fn(Point, Point) -> f64) -> f64 {
    let mut best = f64::INFINITY;
    for p in 0..points.len() {
        for q in p + 1..points.len() {
            best = best.min(dist(points[p], points[q]));
        }
    }
    best
}

/// Complex samples on `{0..Ω}²`, row-major in `(ω₁, ω₂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierGrid {
    cutoff: usize,
    values: Vec<Complex64>,
    noise_level: f64,
}

impl FourierGrid {
    pub fn new(cutoff: usize, values: Vec<Complex64>, noise_level: f64) -> Result<Self> {
        let side = cutoff + 1;
        if values.len() != side * side {
            return Err(Error::InvalidArgument(format!(
                "grid with cutoff {cutoff} needs {} values, got {}",
                side * side,
                values.len()
            )));
        }
        if !(noise_level >= 0.0) {
            return Err(Error::InvalidArgument(format!("noise level {noise_level} is negative")));
        }
        Ok(Self { cutoff, values, noise_level })
    }

    pub fn zeros(cutoff: usize, noise_level: f64) -> Result<Self> {
        Self::new(cutoff, alloc::vec![Complex64::new(0.0, 0.0); (cutoff + 1) * (cutoff + 1)], noise_level)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn noise_level(&self) -> f64 {
        self.noise_level
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Sample at `(ω₁, ω₂)`; panics outside the lattice.
    #[inline]
    pub fn get(&self, w1: usize, w2: usize) -> Complex64 {
        assert!(w1 <= self.cutoff && w2 <= self.cutoff, "lattice index out of range");
        self.values[w1 * (self.cutoff + 1) + w2]
    }

    pub fn with_noise_level(mut self, noise_level: f64) -> Self {
        self.noise_level = noise_level;
        self
    }

    /// Largest pointwise modulus of `self − other` (grids must share a cutoff).
    pub fn sup_distance(&self, other: &FourierGrid) -> f64 {
        assert_eq!(self.cutoff, other.cutoff, "cutoff mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Seeded bounded-noise description.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    pub level: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(level: f64, seed: u64) -> Result<Self> {
        if !(level >= 0.0) || !level.is_finite() {
            return Err(Error::InvalidArgument(format!("noise level {level} must be finite and >= 0")));
        }
        Ok(Self { level, seed })
    }
}

/// Noiseless samples `Σⱼ aⱼ e^{i yⱼ·ω}` for `ω ∈ {0..Ω}²`.
pub fn forward_measure(config: &SourceConfiguration, cutoff: usize) -> FourierGrid {
    let side = cutoff + 1;
    let mut values = alloc::vec![Complex64::new(0.0, 0.0); side * side];
    for s in config.sources() {
        let row: Vec<Complex64> = (0..side)
            .map(|w| Complex64::from_polar(1.0, s.location[0] * w as f64))
            .collect();
        let col: Vec<Complex64> = (0..side)
            .map(|w| Complex64::from_polar(1.0, s.location[1] * w as f64))
            .collect();
        for (w1, r) in row.iter().enumerate() {
            let ar = s.amplitude * r;
            for (w2, c) in col.iter().enumerate() {
                values[w1 * side + w2] += ar * c;
            }
        }
    }
    FourierGrid { cutoff, values, noise_level: 0.0 }
}

/// Adds `σ·u·e^{iφ}` with `u ~ U[0,1)`, `φ ~ U[0,2π)` to every sample.
pub fn add_noise(grid: &FourierGrid, spec: &NoiseSpec) -> FourierGrid {
    if spec.level == 0.0 {
        return grid.clone().with_noise_level(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let values = grid
        .values
        .iter()
        .map(|&y| {
            let u: f64 = rng.gen();
            let phi: f64 = rng.gen::<f64>() * TAU;
            y + Complex64::from_polar(spec.level * u, phi)
        })
        .collect();
    FourierGrid { cutoff: grid.cutoff, values, noise_level: spec.level }
}

/// Multiplies each sample by `e^{i v·ω}`.
pub fn translate(grid: &FourierGrid, v: Point) -> FourierGrid {
    let side = grid.cutoff + 1;
    let values = grid
        .values
        .iter()
        .enumerate()
        .map(|(idx, y)| {
            let (w1, w2) = (idx / side, idx % side);
            y * Complex64::from_polar(1.0, v[0] * w1 as f64 + v[1] * w2 as f64)
        })
        .collect();
    FourierGrid { cutoff: grid.cutoff, values, noise_level: grid.noise_level }
}

/// `(sin φ cos θ, sin φ sin θ)` for azimuth `θ` and elevation `φ`.
pub fn angles_to_location(azimuth: f64, elevation: f64) -> Point {
    let r = elevation.sin();
    [r * azimuth.cos(), r * azimuth.sin()]
}
