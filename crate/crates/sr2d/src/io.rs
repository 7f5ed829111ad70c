//! JSON file formats. Complex numbers are written as `{"re": .., "im": ..}`
//! and grids are stored row-major in `(ω₁, ω₂)`.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sr2d_core::detect::{FixedOrderDetection, SweepDetection};
use sr2d_core::model::{add_noise, forward_measure, FourierGrid, NoiseSpec, Region, Source, SourceConfiguration};
use sr2d_core::recover::RecoveryResult;
use sr2d_core::{Complex64, Point};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexValue> for Complex64 {
    fn from(z: ComplexValue) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub lower: Point,
    pub upper: Point,
}

impl Default for RegionSpec {
    fn default() -> Self {
        let r = Region::default();
        Self { lower: r.lower, upper: r.upper }
    }
}

impl From<RegionSpec> for Region {
    fn from(r: RegionSpec) -> Self {
        Region::new(r.lower, r.upper)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SourceRecord {
    pub location: Point,
    pub amplitude: ComplexValue,
}

/// Input of `simulate`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    #[serde(default = "default_omega")]
    pub omega: usize,
    pub sources: Vec<SourceRecord>,
    #[serde(default)]
    pub region: RegionSpec,
    #[serde(default)]
    pub noise_level: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_omega() -> usize {
    10
}

impl SimulationConfig {
    pub fn configuration(&self) -> sr2d_core::Result<SourceConfiguration> {
        SourceConfiguration::new(
            self.sources.iter().map(|s| Source::new(s.location, s.amplitude.into())).collect(),
            self.region.into(),
        )
    }

    /// Noisy measurement grid described by this file.
    pub fn simulate(&self) -> sr2d_core::Result<FourierGrid> {
        let clean = forward_measure(&self.configuration()?, self.omega);
        if self.noise_level == 0.0 {
            return Ok(clean);
        }
        Ok(add_noise(&clean, &NoiseSpec::new(self.noise_level, self.seed)?))
    }
}

/// Serialized [`FourierGrid`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFile {
    pub cutoff: usize,
    pub noise_level: f64,
    pub values: Vec<ComplexValue>,
}

impl From<&FourierGrid> for GridFile {
    fn from(g: &FourierGrid) -> Self {
        Self {
            cutoff: g.cutoff(),
            noise_level: g.noise_level(),
            values: g.values().iter().map(|&z| z.into()).collect(),
        }
    }
}

impl TryFrom<GridFile> for FourierGrid {
    type Error = sr2d_core::Error;

    fn try_from(f: GridFile) -> sr2d_core::Result<Self> {
        FourierGrid::new(f.cutoff, f.values.into_iter().map(Into::into).collect(), f.noise_level)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedOrderRecord {
    pub s: usize,
    pub stride: usize,
    pub threshold: f64,
    pub singular_values: Vec<f64>,
    pub count: usize,
}

impl From<&FixedOrderDetection> for FixedOrderRecord {
    fn from(d: &FixedOrderDetection) -> Self {
        Self {
            s: d.s,
            stride: d.stride,
            threshold: d.threshold,
            singular_values: d.singular_values.clone(),
            count: d.count,
        }
    }
}

/// Output of `detect`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionFile {
    pub count: usize,
    pub best_s: usize,
    pub visited: Vec<FixedOrderRecord>,
}

impl From<&SweepDetection> for DetectionFile {
    fn from(d: &SweepDetection) -> Self {
        Self { count: d.count, best_s: d.best_s, visited: d.visited.iter().map(Into::into).collect() }
    }
}

impl From<&FixedOrderDetection> for DetectionFile {
    fn from(d: &FixedOrderDetection) -> Self {
        Self { count: d.count, best_s: d.s, visited: vec![d.into()] }
    }
}

/// Output of `recover`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryFile {
    pub locations: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<ComplexValue>>,
    pub d_roots: Vec<ComplexValue>,
    pub g_roots: Vec<ComplexValue>,
    pub matching_cost: f64,
}

impl From<&RecoveryResult> for RecoveryFile {
    fn from(r: &RecoveryResult) -> Self {
        Self {
            locations: r.locations.clone(),
            amplitudes: r.amplitudes.as_ref().map(|a| a.amplitudes.iter().map(|&z| z.into()).collect()),
            d_roots: r.paired.pairs.iter().map(|p| p.0.into()).collect(),
            g_roots: r.paired.pairs.iter().map(|p| p.1.into()).collect(),
            matching_cost: r.paired.matching_cost,
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

pub fn read_grid(path: &Path) -> Result<FourierGrid> {
    let file: GridFile = read_json(path)?;
    FourierGrid::try_from(file).with_context(|| format!("invalid grid in {}", path.display()))
}

pub fn write_grid(path: &Path, grid: &FourierGrid) -> Result<()> {
    write_json(path, &GridFile::from(grid))
}
