//! Monte Carlo verification of the trivializing map: H-invariance, fibers equal
//! to H-orbits, surjectivity onto `(image Φ_H) × ℂ`, and the submersion property
//! off the exceptional orbits.
//!
//! Trials are split into a fixed number of shards; shard `k` draws from a
//! ChaCha stream seeded with `seed + k`, so results do not depend on the
//! thread count.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::preimage::solve_preimage;
use super::{LocalModel, ModelError};
use crate::rep::DefiningPolynomial;

pub const SHARDS: u64 = 8;
const MIN_ABS: f64 = 1e-3;
const RANK_THRESHOLD: f64 = 1e-9;

fn shard_sizes(total: usize) -> Vec<(u64, usize)> {
    let k = SHARDS as usize;
    (0..k)
        .map(|s| (s as u64, total / k + usize::from(s < total % k)))
        .collect()
}

fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(shard))
}

/// Uniform point of the unit polydisc, resampling coordinates with `|z_j| < min_abs`.
pub fn sample_polydisc_point<R: Rng>(rng: &mut R, n: usize, min_abs: f64) -> Vec<Complex64> {
    (0..n)
        .map(|_| loop {
            let r = rng.gen::<f64>().sqrt();
            let th = rng.gen::<f64>() * 2.0 * PI;
            if r >= min_abs {
                break Complex64::from_polar(r, th);
            }
        })
        .collect()
}

fn phases(weights: &[Vec<f64>], n: usize, t: &[f64]) -> Vec<Complex64> {
    (0..n)
        .map(|j| {
            let a: f64 = weights.iter().zip(t).map(|(row, tk)| row[j] * tk).sum();
            Complex64::from_polar(1.0, 2.0 * PI * a)
        })
        .collect()
}

/// Random element of the identity component of H, as `λ_j = exp(2πi ⟨η_j, t⟩)`.
pub fn sample_group_element<R: Rng>(rng: &mut R, weights: &[Vec<f64>], n: usize) -> Vec<Complex64> {
    let t: Vec<f64> = (0..weights.len()).map(|_| rng.gen::<f64>()).collect();
    phases(weights, n, &t)
}

fn act(lambda: &[Complex64], z: &[Complex64]) -> Vec<Complex64> {
    lambda.iter().zip(z).map(|(l, x)| l * x).collect()
}

fn orbit_objective(weights: &[Vec<f64>], z: &[Complex64], target: &[Complex64], t: &[f64]) -> f64 {
    let lam = phases(weights, z.len(), t);
    lam.iter()
        .zip(z)
        .zip(target)
        .map(|((l, x), y)| (l * x - y).norm_sqr())
        .sum()
}

fn refine(weights: &[Vec<f64>], z: &[Complex64], target: &[Complex64], start: &[f64]) -> f64 {
    let h = weights.len();
    let n = z.len();
    let mut t = start.to_vec();
    let mut f = orbit_objective(weights, z, target, &t);
    let mut mu = 1e-3;
    for _ in 0..60 {
        if f < 1e-30 {
            break;
        }
        let lam = phases(weights, n, &t);
        let mut a = DMatrix::<f64>::zeros(h, h);
        let mut g = nalgebra::DVector::<f64>::zeros(h);
        for j in 0..n {
            let u = lam[j] * z[j];
            let r = u - target[j];
            // ∂r_j/∂t_k = 2πi W_kj u
            let dj: Vec<Complex64> = (0..h)
                .map(|k| Complex64::new(0.0, 2.0 * PI * weights[k][j]) * u)
                .collect();
            for k in 0..h {
                g[k] += (dj[k].conj() * r).re;
                for l in 0..h {
                    a[(k, l)] += (dj[k].conj() * dj[l]).re;
                }
            }
        }
        let mut improved = false;
        for _ in 0..8 {
            let mut damped = a.clone();
            for k in 0..h {
                damped[(k, k)] += mu * (1.0 + a[(k, k)]);
            }
            let Some(step) = damped.lu().solve(&(-&g)) else {
                mu *= 10.0;
                continue;
            };
            let cand: Vec<f64> = t.iter().zip(step.iter()).map(|(x, d)| x + d).collect();
            let fc = orbit_objective(weights, z, target, &cand);
            if fc < f {
                let small = step.amax() < 1e-16;
                t = cand;
                f = fc;
                mu = (mu / 3.0).max(1e-12);
                improved = !small;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    f
}

/// `min_{λ ∈ H} |λ·z − target|`, searched on a grid over the torus `𝔥/𝔥_ℤ`
/// followed by damped Gauss–Newton from the best grid points.
pub fn orbit_distance(weights: &[Vec<f64>], z: &[Complex64], target: &[Complex64]) -> f64 {
    let h = weights.len();
    if h == 0 {
        return z
            .iter()
            .zip(target)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
    }
    let per_dim: usize = match h {
        1 => 1000,
        2 => 40,
        _ => 12,
    };
    let total = per_dim.pow(h as u32);
    let mut scored: Vec<(f64, Vec<f64>)> = (0..total)
        .map(|mut idx| {
            let t: Vec<f64> = (0..h)
                .map(|_| {
                    let i = idx % per_dim;
                    idx /= per_dim;
                    i as f64 / per_dim as f64
                })
                .collect();
            (orbit_objective(weights, z, target, &t), t)
        })
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    scored
        .iter()
        .take(6)
        .map(|(_, t)| refine(weights, z, target, t))
        .fold(f64::INFINITY, f64::min)
        .max(0.0)
        .sqrt()
}

/// One fiber trial at a given point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberTrial {
    /// `|F(λz) − F(z)|` for a random `λ ∈ H`.
    pub invariance_error: f64,
    /// Orbit distance to `μz`, `μ` a random torus element with phases projected onto `ker P`.
    pub projected_distance: f64,
    /// Orbit distance to the preimage of `F(z)` built radially.
    pub constructed_distance: f64,
    pub passed: bool,
}

/// Runs the three fiber checks at `z`, drawing randomness from `rng`.
pub fn fiber_trial<R: Rng>(
    model: &LocalModel,
    poly: &DefiningPolynomial,
    z: &[Complex64],
    rng: &mut R,
    tol: f64,
) -> Result<FiberTrial, ModelError> {
    let rep = model.rep();
    let n = rep.n();
    let w = rep.weights_f64();

    let nu_coeffs: Vec<f64> = (0..model.h0_basis().rows())
        .map(|_| rng.gen_range(-2i32..=2) as f64)
        .collect();
    let nu: Vec<f64> = (0..model.d())
        .map(|c| {
            nu_coeffs
                .iter()
                .enumerate()
                .map(|(i, k)| k * model.h0_basis()[(i, c)].to_string().parse::<f64>().unwrap_or(0.0))
                .sum()
        })
        .collect();
    let f = |x: &[Complex64]| -> Result<super::QuotientPoint, ModelError> {
        Ok(super::QuotientPoint {
            moment: model.moment(x, &nu)?,
            p: poly.evaluate(x),
        })
    };
    let fz = f(z)?;

    let lambda = sample_group_element(rng, &w, n);
    let invariance_error = f(&act(&lambda, z))?.distance(&fz);

    let xi = poly.exponents_f64();
    let xi_sq: f64 = xi.iter().map(|e| e * e).sum();
    let theta: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 2.0 * PI).collect();
    let along: f64 = theta.iter().zip(&xi).map(|(a, b)| a * b).sum::<f64>() / xi_sq;
    let mu: Vec<Complex64> = theta
        .iter()
        .zip(&xi)
        .map(|(th, e)| Complex64::from_polar(1.0, th - along * e))
        .collect();
    let partner = act(&mu, z);
    let projected_distance = if f(&partner)?.distance(&fz) < tol {
        orbit_distance(&w, z, &partner)
    } else {
        f64::INFINITY
    };

    let target = rep.moment_eval(z)?;
    let constructed_distance = match solve_preimage(rep, poly, &target, fz.p) {
        Ok(pre) if f(&pre)?.distance(&fz) < tol => orbit_distance(&w, z, &pre),
        _ => f64::INFINITY,
    };

    let passed = invariance_error < tol && projected_distance < tol && constructed_distance < tol;
    Ok(FiberTrial {
        invariance_error,
        projected_distance,
        constructed_distance,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberCheckReport {
    pub trials: usize,
    pub passes: usize,
    pub invariance_passes: usize,
    pub projected_orbit_passes: usize,
    pub constructed_orbit_passes: usize,
    pub max_invariance_error: f64,
    pub max_projected_distance: f64,
    pub max_constructed_distance: f64,
    pub tol: f64,
    pub seed: u64,
}

impl FiberCheckReport {
    pub fn pass_rate(&self) -> f64 {
        if self.trials == 0 {
            1.0
        } else {
            self.passes as f64 / self.trials as f64
        }
    }
}

/// Samples `trials` points of the unit polydisc and checks that `F` is constant
/// on H-orbits and that points with equal `F` lie on one H-orbit.
pub fn fiber_orbit_check(
    model: &LocalModel,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<FiberCheckReport, ModelError> {
    let poly = model.defining_polynomial()?;
    let h = model.rep().h();
    if h > 3 {
        return Err(ModelError::TooLarge(h));
    }
    let n = model.rep().n();
    let shards: Vec<Result<Vec<FiberTrial>, ModelError>> = shard_sizes(trials)
        .into_par_iter()
        .map(|(shard, count)| {
            let mut rng = shard_rng(seed, shard);
            (0..count)
                .map(|_| {
                    let z = sample_polydisc_point(&mut rng, n, MIN_ABS);
                    fiber_trial(model, &poly, &z, &mut rng, tol)
                })
                .collect()
        })
        .collect();

    let mut report = FiberCheckReport {
        trials,
        passes: 0,
        invariance_passes: 0,
        projected_orbit_passes: 0,
        constructed_orbit_passes: 0,
        max_invariance_error: 0.0,
        max_projected_distance: 0.0,
        max_constructed_distance: 0.0,
        tol,
        seed,
    };
    for shard in shards {
        for t in shard? {
            report.passes += usize::from(t.passed);
            report.invariance_passes += usize::from(t.invariance_error < tol);
            report.projected_orbit_passes += usize::from(t.projected_distance < tol);
            report.constructed_orbit_passes += usize::from(t.constructed_distance < tol);
            report.max_invariance_error = report.max_invariance_error.max(t.invariance_error);
            report.max_projected_distance = report.max_projected_distance.max(t.projected_distance);
            report.max_constructed_distance = report.max_constructed_distance.max(t.constructed_distance);
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurjectivityReport {
    pub targets: usize,
    pub successes: usize,
    pub max_moment_error: f64,
    pub max_p_error: f64,
    pub tol: f64,
}

/// Draws targets `(½ W x, ζ)` with `x ∈ [0,1]ⁿ` and `ζ` in the unit disc and
/// solves for a preimage under `(Φ_H, P)`.
pub fn surjectivity_check(
    model: &LocalModel,
    targets: usize,
    seed: u64,
    tol: f64,
) -> Result<SurjectivityReport, ModelError> {
    let poly = model.defining_polynomial()?;
    let rep = model.rep();
    let w = rep.weights_f64();
    let n = rep.n();
    let shards: Vec<Vec<(f64, f64)>> = shard_sizes(targets)
        .into_par_iter()
        .map(|(shard, count)| {
            let mut rng = shard_rng(seed, shard);
            (0..count)
                .map(|_| {
                    let x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
                    let a: Vec<f64> = w
                        .iter()
                        .map(|row| 0.5 * row.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>())
                        .collect();
                    let zeta = Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen::<f64>() * 2.0 * PI);
                    match solve_preimage(rep, &poly, &a, zeta) {
                        Ok(z) => {
                            let m = rep.moment_eval(&z).expect("length n");
                            let me = m.iter().zip(&a).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
                            (me, (poly.evaluate(&z) - zeta).norm())
                        }
                        Err(_) => (f64::INFINITY, f64::INFINITY),
                    }
                })
                .collect()
        })
        .collect();
    let mut report = SurjectivityReport {
        targets,
        successes: 0,
        max_moment_error: 0.0,
        max_p_error: 0.0,
        tol,
    };
    for (me, pe) in shards.into_iter().flatten() {
        report.successes += usize::from(me < tol && pe < tol);
        report.max_moment_error = report.max_moment_error.max(me);
        report.max_p_error = report.max_p_error.max(pe);
    }
    Ok(report)
}

/// Which explicit tangent vector witnesses surjectivity of `(dΦ_H, dP)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "case")]
pub enum WitnessCase {
    /// all coordinates nonzero: `ζ_j = ξ_j / z̄_j`
    AllNonzero,
    /// `z_i = 0` with `ξ_i = 1`: `ζ = e_i`
    SingleZero { index: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubmersionReport {
    pub case: WitnessCase,
    #[serde(skip)]
    pub witness: Vec<Complex64>,
    /// `dΦ_H|_z(ζ)`
    pub dphi_witness: Vec<f64>,
    /// `dΦ_H|_z(iζ)`
    pub dphi_i_witness: Vec<f64>,
    #[serde(skip)]
    pub dp_witness: Complex64,
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub expected_rank: usize,
    pub full_rank: bool,
}

impl SubmersionReport {
    /// Largest entry of `dΦ_H(ζ)` and `dΦ_H(iζ)`; zero in exact arithmetic.
    pub fn witness_error(&self) -> f64 {
        self.dphi_witness
            .iter()
            .chain(&self.dphi_i_witness)
            .fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Builds the explicit witness at a non-exceptional point of a surjective
/// complexity-one rep and measures the real rank of `(dΦ_H, dP)`.
pub fn submersion_check(model: &LocalModel, z: &[Complex64]) -> Result<SubmersionReport, ModelError> {
    let poly = model.defining_polynomial()?;
    if !poly.is_positive() {
        return Err(crate::rep::RepError::NotSurjective.into());
    }
    let rep = model.rep();
    let n = rep.n();
    if z.len() != n {
        return Err(ModelError::DimensionMismatch {
            what: "z",
            expected: n,
            found: z.len(),
        });
    }
    let zero = Complex64::new(0.0, 0.0);
    let support: Vec<usize> = (0..n).filter(|&j| z[j] != zero).collect();
    if rep.is_exceptional_orbit(&support)? {
        return Err(ModelError::ExceptionalPoint { support });
    }

    let xi = poly.exponents_f64();
    let (case, witness) = match (0..n).find(|&j| z[j] == zero) {
        None => (
            WitnessCase::AllNonzero,
            z.iter()
                .zip(&xi)
                .map(|(zj, e)| *e / zj.conj())
                .collect::<Vec<_>>(),
        ),
        Some(i) => {
            debug_assert!(poly.exponents[i].is_one());
            let mut e = vec![zero; n];
            e[i] = Complex64::new(1.0, 0.0);
            (WitnessCase::SingleZero { index: i }, e)
        }
    };

    let w = rep.weights_f64();
    let h = w.len();
    let dphi = |v: &[Complex64]| -> Vec<f64> {
        w.iter()
            .map(|row| {
                row.iter()
                    .zip(z)
                    .zip(v)
                    .map(|((eta, zj), vj)| eta * (zj * vj.conj()).re)
                    .sum()
            })
            .collect()
    };
    let grad = poly.gradient(z);
    let i_witness: Vec<Complex64> = witness.iter().map(|v| v * Complex64::i()).collect();
    let dphi_witness = dphi(&witness);
    let dphi_i_witness = dphi(&i_witness);
    let dp_witness: Complex64 = grad.iter().zip(&witness).map(|(g, v)| g * v).sum();

    // real Jacobian of (Φ_H, Re P, Im P) in the coordinates (x_j, y_j)
    let mut jac = DMatrix::<f64>::zeros(h + 2, 2 * n);
    for (k, row) in w.iter().enumerate() {
        for j in 0..n {
            jac[(k, 2 * j)] = row[j] * z[j].re;
            jac[(k, 2 * j + 1)] = row[j] * z[j].im;
        }
    }
    for j in 0..n {
        jac[(h, 2 * j)] = grad[j].re;
        jac[(h, 2 * j + 1)] = -grad[j].im;
        jac[(h + 1, 2 * j)] = grad[j].im;
        jac[(h + 1, 2 * j + 1)] = grad[j].re;
    }
    for r in 0..h + 2 {
        let norm = jac.row(r).norm();
        if norm > 0.0 {
            jac.row_mut(r).scale_mut(1.0 / norm);
        }
    }
    let mut singular_values: Vec<f64> = jac.singular_values().iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let top = singular_values.first().copied().unwrap_or(0.0);
    let rank = singular_values
        .iter()
        .filter(|s| **s > RANK_THRESHOLD * top)
        .count();
    Ok(SubmersionReport {
        case,
        witness,
        dphi_witness,
        dphi_i_witness,
        dp_witness,
        singular_values,
        rank,
        expected_rank: h + 2,
        full_rank: rank == h + 2,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubmersionSampling {
    pub samples: usize,
    pub rank_failures: usize,
    pub witness_failures: usize,
    pub max_witness_error: f64,
    pub min_dp_modulus: f64,
}

/// Samples non-exceptional points (full support, or one zero at an index with
/// ξ_i = 1) and runs [`submersion_check`] at each.
pub fn submersion_sampling(
    model: &LocalModel,
    samples: usize,
    seed: u64,
    witness_tol: f64,
) -> Result<SubmersionSampling, ModelError> {
    let poly = model.defining_polynomial()?;
    if !poly.is_positive() {
        return Err(crate::rep::RepError::NotSurjective.into());
    }
    let n = model.rep().n();
    let mut patterns: Vec<Option<usize>> = vec![None];
    patterns.extend(
        (0..n)
            .filter(|&i| poly.exponents[i].is_one() && !poly.exponents[i].is_negative())
            .map(Some),
    );
    let shards: Vec<Result<Vec<SubmersionReport>, ModelError>> = shard_sizes(samples)
        .into_par_iter()
        .map(|(shard, count)| {
            let mut rng = shard_rng(seed, shard);
            (0..count)
                .map(|_| {
                    let mut z = sample_polydisc_point(&mut rng, n, MIN_ABS);
                    if let Some(i) = patterns[rng.gen_range(0..patterns.len())] {
                        z[i] = Complex64::new(0.0, 0.0);
                    }
                    submersion_check(model, &z)
                })
                .collect()
        })
        .collect();
    let mut out = SubmersionSampling {
        samples,
        rank_failures: 0,
        witness_failures: 0,
        max_witness_error: 0.0,
        min_dp_modulus: f64::INFINITY,
    };
    for shard in shards {
        for r in shard? {
            let err = r.witness_error();
            let dp = r.dp_witness.norm();
            out.rank_failures += usize::from(!r.full_rank);
            out.witness_failures += usize::from(err >= witness_tol || dp <= witness_tol);
            out.max_witness_error = out.max_witness_error.max(err);
            out.min_dp_modulus = out.min_dp_modulus.min(dp);
        }
    }
    Ok(out)
}
