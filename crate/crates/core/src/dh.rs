//! Duistermaat–Heckman densities of linear actions, estimated by pushing
//! Lebesgue measure on a polydisc forward along `Φ_H`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::rep::SubtorusRep;

pub const SHARDS: u64 = 16;
pub const MIN_SAMPLES: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DhError {
    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),
    #[error("need at least {MIN_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error("truncation radius must be positive and finite, got {0}")]
    BadRadius(f64),
}

/// Regular box grid on 𝔥*.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub bins: Vec<usize>,
}

impl GridSpec {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, bins: Vec<usize>) -> Result<Self, DhError> {
        let g = GridSpec { lower, upper, bins };
        g.validate(g.lower.len())?;
        Ok(g)
    }

    /// Same extent and bin count along every axis.
    pub fn cube(dim: usize, lower: f64, upper: f64, bins: usize) -> Result<Self, DhError> {
        Self::new(vec![lower; dim], vec![upper; dim], vec![bins; dim])
    }

    fn validate(&self, dim: usize) -> Result<(), DhError> {
        if dim == 0 {
            return Err(DhError::DegenerateGrid("zero-dimensional grid".into()));
        }
        if self.lower.len() != dim || self.upper.len() != dim || self.bins.len() != dim {
            return Err(DhError::DegenerateGrid(format!(
                "grid needs {dim} coordinates per field"
            )));
        }
        for k in 0..dim {
            let (lo, hi) = (self.lower[k], self.upper[k]);
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(DhError::DegenerateGrid(format!("axis {k}: [{lo}, {hi}]")));
            }
            if self.bins[k] == 0 {
                return Err(DhError::DegenerateGrid(format!("axis {k} has no bins")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.bins.len()
    }

    pub fn widths(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|k| (self.upper[k] - self.lower[k]) / self.bins[k] as f64)
            .collect()
    }

    pub fn bin_volume(&self) -> f64 {
        self.widths().iter().product()
    }

    pub fn total_bins(&self) -> usize {
        self.bins.iter().product()
    }

    /// Flat (row-major, last axis fastest) index of the bin holding `p`.
    pub fn locate(&self, p: &[f64]) -> Option<usize> {
        let mut idx = 0;
        for k in 0..self.dim() {
            let w = (self.upper[k] - self.lower[k]) / self.bins[k] as f64;
            let f = (p[k] - self.lower[k]) / w;
            if !(f >= 0.0 && f < self.bins[k] as f64) {
                return None;
            }
            idx = idx * self.bins[k] + f as usize;
        }
        Some(idx)
    }

    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim()];
        for k in (0..self.dim()).rev() {
            out[k] = flat % self.bins[k];
            flat /= self.bins[k];
        }
        out
    }

    pub fn center(&self, flat: usize) -> Vec<f64> {
        let w = self.widths();
        self.unflatten(flat)
            .iter()
            .enumerate()
            .map(|(k, &i)| self.lower[k] + (i as f64 + 0.5) * w[k])
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DHEstimate {
    pub grid: GridSpec,
    pub radius: f64,
    pub samples: usize,
    pub seed: u64,
    pub counts: Vec<u64>,
    /// Per-bin density, flat row-major.
    pub density: Vec<f64>,
    pub out_of_range: u64,
    /// Lebesgue volume of the radius-`R` polydisc, `(πR²)ⁿ`.
    pub polydisc_volume: f64,
}

impl DHEstimate {
    pub fn density_at(&self, index: &[usize]) -> f64 {
        let mut flat = 0;
        for (k, &i) in index.iter().enumerate() {
            flat = flat * self.grid.bins[k] + i;
        }
        self.density[flat]
    }

    /// One-sigma Monte Carlo error of bin `flat`.
    pub fn std_error(&self, flat: usize) -> f64 {
        let n = self.samples as f64;
        let p = self.counts[flat] as f64 / n;
        self.polydisc_volume / self.grid.bin_volume() * (p * (1.0 - p) / n).sqrt()
    }

    /// Mass captured by the grid.
    pub fn total_mass(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.grid.bin_volume()
    }

    /// `c0,...,c{h-1},density` rows, one per bin.
    pub fn to_csv(&self) -> String {
        let dim = self.grid.dim();
        let mut out: Vec<String> = (0..dim).map(|k| format!("c{k}")).collect();
        out.push("density".into());
        let mut s = out.join(",");
        s.push('\n');
        for flat in 0..self.density.len() {
            let mut row: Vec<String> = self
                .grid
                .center(flat)
                .iter()
                .map(|c| crate::json::format_float(*c))
                .collect();
            row.push(crate::json::format_float(self.density[flat]));
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

/// Histogram of `Φ_H(z)` for `z` uniform in the radius-`R` polydisc, scaled so
/// that each bin holds polydisc volume per unit volume of 𝔥*.
pub fn dh_estimate(
    rep: &SubtorusRep,
    radius: f64,
    grid: &GridSpec,
    samples: usize,
    seed: u64,
) -> Result<DHEstimate, DhError> {
    if samples < MIN_SAMPLES {
        return Err(DhError::TooFewSamples(samples));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(DhError::BadRadius(radius));
    }
    grid.validate(rep.h())?;
    let w = rep.weights_f64();
    let n = rep.n();
    let r2 = radius * radius;
    let bins = grid.total_bins();

    let per_shard: Vec<(Vec<u64>, u64)> = (0..SHARDS)
        .into_par_iter()
        .map(|shard| {
            let count = samples / SHARDS as usize + usize::from((shard as usize) < samples % SHARDS as usize);
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(shard));
            let mut hist = vec![0u64; bins];
            let mut outside = 0u64;
            let mut x = vec![0.0; n];
            let mut phi = vec![0.0; w.len()];
            for _ in 0..count {
                // |z_j|² is uniform on [0, R²] for z_j uniform in the disc
                for xj in x.iter_mut() {
                    *xj = r2 * rng.gen::<f64>();
                }
                for (p, row) in phi.iter_mut().zip(&w) {
                    *p = 0.5 * row.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
                }
                match grid.locate(&phi) {
                    Some(b) => hist[b] += 1,
                    None => outside += 1,
                }
            }
            (hist, outside)
        })
        .collect();

    let mut counts = vec![0u64; bins];
    let mut out_of_range = 0;
    for (hist, outside) in per_shard {
        for (c, v) in counts.iter_mut().zip(hist) {
            *c += v;
        }
        out_of_range += outside;
    }
    let polydisc_volume = (PI * r2).powi(n as i32);
    let scale = polydisc_volume / samples as f64 / grid.bin_volume();
    let density = counts.iter().map(|&c| c as f64 * scale).collect();
    Ok(DHEstimate {
        grid: grid.clone(),
        radius,
        samples,
        seed,
        counts,
        density,
        out_of_range,
        polydisc_volume,
    })
}

/// Exact density of the weight-one circle action on ℂ truncated at radius `R`.
pub fn circle_density(t: f64, radius: f64) -> f64 {
    if t > 0.0 && t < radius * radius / 2.0 {
        2.0 * PI
    } else {
        0.0
    }
}

/// Exact density for weights `[1, -1]` on ℂ² truncated at radius `R`.
pub fn opposite_weights_density(t: f64, radius: f64) -> f64 {
    let half = radius * radius / 2.0;
    (2.0 * PI).powi(2) * (half - t.abs()).max(0.0)
}
