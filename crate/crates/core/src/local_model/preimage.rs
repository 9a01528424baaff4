use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::ModelError;
use crate::rep::{DefiningPolynomial, SubtorusRep};

/// Finds z with `Φ_H(z) = target` and `P(z) = zeta` for a complexity-one rep.
///
/// Works on the orthant of squared radii: the solutions of `½ W x = target` form
/// a line `x₀ + tξ`; along it `Σ ξ_j ln x_j` increases from −∞ to ∞, so the
/// radial equation `Π x_j^{ξ_j} = |ζ|²` has one root past the orthant boundary.
/// Phases are then fixed by a torus element with `P(a) = ζ / |ζ|`.
pub fn solve_preimage(
    rep: &SubtorusRep,
    poly: &DefiningPolynomial,
    target: &[f64],
    zeta: Complex64,
) -> Result<Vec<Complex64>, ModelError> {
    let (n, h) = (rep.n(), rep.h());
    if target.len() != h {
        return Err(ModelError::DimensionMismatch {
            what: "moment target",
            expected: h,
            found: target.len(),
        });
    }
    let xi = poly.exponents_f64();
    let wf = rep.weights_f64();
    let w = DMatrix::from_fn(h, n, |i, j| wf[i][j]);

    // minimum-norm solution of W x = 2·target
    let x0: DVector<f64> = if h == 0 {
        DVector::zeros(n)
    } else {
        let gram = &w * w.transpose();
        let rhs = DVector::from_iterator(h, target.iter().map(|v| 2.0 * v));
        let y = gram.lu().solve(&rhs).ok_or(ModelError::OutsideImage)?;
        w.transpose() * y
    };

    let scale = 1.0 + x0.amax();
    let mut t_min = f64::NEG_INFINITY;
    for j in 0..n {
        if xi[j] > 0.0 {
            t_min = t_min.max(-x0[j] / xi[j]);
        } else if x0[j] < -1e-12 * scale {
            return Err(ModelError::OutsideImage);
        }
    }
    let radial = |t: f64| -> f64 {
        (0..n)
            .filter(|&j| xi[j] > 0.0)
            .map(|j| xi[j] * (x0[j] + t * xi[j]).max(0.0).ln())
            .sum()
    };

    let t = if zeta.norm() == 0.0 {
        t_min
    } else {
        let goal = 2.0 * zeta.norm().ln();
        let mut lo = t_min;
        let mut step = 1.0;
        let mut hi = t_min + step;
        while radial(hi) < goal {
            lo = hi;
            step *= 2.0;
            hi = t_min + step;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if radial(mid) < goal {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };

    let xi_sq: f64 = xi.iter().map(|e| e * e).sum();
    let phase = zeta.arg();
    Ok((0..n)
        .map(|j| {
            let r = (x0[j] + t * xi[j]).max(0.0).sqrt();
            Complex64::from_polar(r, phase * xi[j] / xi_sq)
        })
        .collect())
}
