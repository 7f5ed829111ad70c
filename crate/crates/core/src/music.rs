//! MUSIC on a combined sequence: the imaging functional
//! `J(d) = ‖Φ(d)‖ / ‖U₂*Φ(d)‖` over a disk of test points, and peak picking.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::combine::CombinedSequence;
use crate::linalg::CMatrix;
use crate::spectral::{decompose, hankel, noise_subspace};
use crate::{Error, Result};

/// Value returned where the noise projection vanishes.
pub const SENTINEL: f64 = f64::MAX;

const DENOMINATOR_FLOOR: f64 = 1e-300;
const REFINE_ROUNDS: usize = 3;
const MAX_CLIMB_MOVES: usize = 100;

/// Square lattice of spacing `step` clipped to the closed disk `|d| ≤ radius`.
#[derive(Clone, Debug, PartialEq)]
pub struct TestGrid {
    radius: f64,
    step: f64,
    half: usize,
}

impl TestGrid {
    pub fn new(radius: f64, step: f64) -> Result<Self> {
        if !(radius > 0.0) || !(step > 0.0) || !radius.is_finite() || !(radius / step <= 1.0e5) {
            return Err(Error::InvalidArgument(alloc::format!(
                "test grid needs 0 < step and a moderate radius/step ratio (radius {radius}, step {step})"
            )));
        }
        Ok(Self { radius, step, half: (radius / step).floor() as usize })
    }

    /// Radius 2, step `0.005`.
    pub fn default_disk() -> Self {
        Self::new(2.0, 0.005).expect("valid default grid")
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    fn side(&self) -> usize {
        2 * self.half + 1
    }

    fn point(&self, row: usize, col: usize) -> Complex64 {
        Complex64::new(
            (col as f64 - self.half as f64) * self.step,
            (row as f64 - self.half as f64) * self.step,
        )
    }

    fn inside(&self, d: Complex64) -> bool {
        d.norm() <= self.radius
    }

    /// All lattice points in the disk, row by row.
    pub fn points(&self) -> Vec<Complex64> {
        let side = self.side();
        (0..side * side)
            .map(|k| self.point(k / side, k % side))
            .filter(|&d| self.inside(d))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.points().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Conjugated noise-space columns, ready for Horner evaluation.
#[derive(Clone, Debug)]
pub struct ImagingFunctional {
    columns: Vec<Vec<Complex64>>,
    s: usize,
}

impl ImagingFunctional {
    /// From a matrix whose orthonormal columns (length `s + 1`) span the noise space.
    pub fn new(noise_space: &CMatrix) -> Result<Self> {
        if noise_space.cols() == 0 || noise_space.rows() == 0 {
            return Err(Error::InvalidArgument("noise space must have at least one column".into()));
        }
        let columns = (0..noise_space.cols())
            .map(|k| noise_space.column(k).into_iter().map(|z| z.conj()).collect())
            .collect();
        Ok(Self { columns, s: noise_space.rows() - 1 })
    }

    /// `J(d)`, or [`SENTINEL`] when `‖U₂*Φ(d)‖ < 1e−300`.
    pub fn eval(&self, d: Complex64) -> f64 {
        let r2 = d.norm_sqr();
        let mut phi_sq = 0.0;
        let mut p = 1.0;
        for _ in 0..=self.s {
            phi_sq += p;
            p *= r2;
        }
        let mut proj_sq = 0.0;
        for col in &self.columns {
            let mut acc = col[self.s];
            for m in (0..self.s).rev() {
                acc = acc * d + col[m];
            }
            proj_sq += acc.norm_sqr();
        }
        let den = proj_sq.sqrt();
        if den < DENOMINATOR_FLOOR {
            SENTINEL
        } else {
            phi_sq.sqrt() / den
        }
    }
}

/// `‖Φ(d)‖₂ / ‖U₂*Φ(d)‖₂` with `Φ(d) = (1, d, …, d^s)`.
pub fn imaging_functional(noise_space: &CMatrix, d: Complex64) -> Result<f64> {
    Ok(ImagingFunctional::new(noise_space)?.eval(d))
}

/// `J` sampled on every point of a [`TestGrid`].
#[derive(Clone, Debug)]
pub struct MusicImage {
    grid: TestGrid,
    functional: ImagingFunctional,
    /// Dense `side × side` storage, NaN outside the disk.
    values: Vec<f64>,
}

impl MusicImage {
    pub fn grid(&self) -> &TestGrid {
        &self.grid
    }

    pub fn functional(&self) -> &ImagingFunctional {
        &self.functional
    }

    /// `(d, J(d))` for every grid point in the disk.
    pub fn samples(&self) -> Vec<(Complex64, f64)> {
        let side = self.grid.side();
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_nan())
            .map(|(k, &v)| (self.grid.point(k / side, k % side), v))
            .collect()
    }

    /// Grid point with the largest `J` (first in row order on ties).
    pub fn argmax(&self) -> Option<(Complex64, f64)> {
        self.samples()
            .into_iter()
            .fold(None, |best, cur| match best {
                Some((_, b)) if b >= cur.1 => best,
                _ => Some(cur),
            })
    }
}

/// Evaluates `J` over `grid` for the noise space of `seq`'s Hankel matrix at model order `n`.
pub fn music_image(seq: &CombinedSequence, n: usize, grid: &TestGrid) -> Result<MusicImage> {
    let dec = decompose(&hankel(seq))?;
    let functional = ImagingFunctional::new(&noise_subspace(&dec, n)?)?;
    Ok(image_from_functional(functional, grid))
}

/// Samples an already-built functional on `grid`.
pub fn image_from_functional(functional: ImagingFunctional, grid: &TestGrid) -> MusicImage {
    let side = grid.side();
    let mut values = vec![f64::NAN; side * side];
    for (k, v) in values.iter_mut().enumerate() {
        let d = grid.point(k / side, k % side);
        if grid.inside(d) {
            *v = functional.eval(d);
        }
    }
    MusicImage { grid: grid.clone(), functional, values }
}

/// A selected MUSIC peak.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Peak {
    pub location: Complex64,
    pub value: f64,
    /// Grid value before refinement.
    pub grid_value: f64,
}

fn local_maxima(image: &MusicImage) -> Vec<(usize, f64)> {
    let side = image.grid.side();
    let v = &image.values;
    let mut out = Vec::new();
    for row in 0..side {
        for col in 0..side {
            let here = v[row * side + col];
            if here.is_nan() {
                continue;
            }
            let mut strict = true;
            'nbrs: for dr in -1i64..=1 {
                for dc in -1i64..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let (r, c) = (row as i64 + dr, col as i64 + dc);
                    if r < 0 || c < 0 || r >= side as i64 || c >= side as i64 {
                        continue;
                    }
                    let other = v[r as usize * side + c as usize];
                    if !other.is_nan() && other >= here {
                        strict = false;
                        break 'nbrs;
                    }
                }
            }
            if strict {
                out.push((row * side + col, here));
            }
        }
    }
    out
}

fn refine(functional: &ImagingFunctional, grid: &TestGrid, start: Complex64, start_value: f64) -> (Complex64, f64) {
    let mut at = start;
    let mut best = start_value;
    let mut step = grid.step();
    for _ in 0..REFINE_ROUNDS {
        step /= 10.0;
        for _ in 0..MAX_CLIMB_MOVES {
            let mut next = None;
            for a in -2i32..=2 {
                for b in -2i32..=2 {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let d = at + Complex64::new(a as f64 * step, b as f64 * step);
                    if !grid.inside(d) {
                        continue;
                    }
                    let j = functional.eval(d);
                    if j > next.map_or(best, |(_, v)| v) {
                        next = Some((d, j));
                    }
                }
            }
            match next {
                Some((d, j)) => {
                    at = d;
                    best = j;
                }
                None => break,
            }
        }
    }
    (at, best)
}

/// Picks `n` strict local maxima greedily by descending `J`, at least
/// `min_separation` apart, then refines each with three shrinking 5×5
/// stencil hill climbs.
pub fn locate_peaks(image: &MusicImage, n: usize, min_separation: f64) -> Result<Vec<Peak>> {
    if n == 0 {
        return Err(Error::InvalidArgument("peak count must be positive".into()));
    }
    let side = image.grid.side();
    let mut maxima = local_maxima(image);
    maxima.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(core::cmp::Ordering::Equal));
    let mut chosen: Vec<(Complex64, f64)> = Vec::with_capacity(n);
    for (k, value) in maxima {
        let d = image.grid.point(k / side, k % side);
        if chosen.iter().all(|(c, _)| (c - d).norm() >= min_separation) {
            chosen.push((d, value));
            if chosen.len() == n {
                break;
            }
        }
    }
    if chosen.len() < n {
        return Err(Error::PeakShortfall { found: chosen.len(), wanted: n });
    }
    Ok(chosen
        .into_iter()
        .map(|(d, value)| {
            let (location, refined) = refine(&image.functional, &image.grid, d, value);
            Peak { location, value: refined, grid_value: value }
        })
        .collect())
}
