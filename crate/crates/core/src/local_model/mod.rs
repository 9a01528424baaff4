//! The linear model `Y = T ×_H ℂⁿ × 𝔥⁰` with moment map `α + Φ_H(z) + ν`.
//!
//! `𝔥*` is placed inside `𝔱*` through the standard dot product on `ℤ^d`: the
//! Lie algebra `𝔥 ⊆ ℝ^d` is the annihilator of the `𝔥⁰` basis, its integer
//! lattice is given the Hermite basis, and weight coordinates refer to that basis.

mod checks;
mod preimage;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{
    cone_member, lattice_kernel_rows, primitive_from_rational, rational_to_f64, solve_rational,
    ConeMembership, IntMatrix, LatticeError, RationalVector,
};
use crate::rep::{DefiningPolynomial, RepError, SubtorusRep};

pub use checks::{
    fiber_orbit_check, fiber_trial, orbit_distance, sample_group_element, sample_polydisc_point,
    submersion_check, submersion_sampling, surjectivity_check, FiberCheckReport, FiberTrial,
    SubmersionReport, SubmersionSampling, SurjectivityReport, WitnessCase,
};
pub use preimage::solve_preimage;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("h0 basis must have d - h = {expected} independent rows, found rank {found}")]
    InvalidAnnihilatorBasis { expected: usize, found: usize },
    #[error("moment map is proper: the fiber is a single orbit")]
    ProperMomentMap,
    #[error("nu does not lie in the annihilator of h")]
    NotInAnnihilator,
    #[error("point lies on an exceptional orbit (support {support:?})")]
    ExceptionalPoint { support: Vec<usize> },
    #[error("dim H = {0} exceeds the supported maximum of 3 for orbit searches")]
    TooLarge(usize),
    #[error("target lies outside the moment image")]
    OutsideImage,
}

/// Fiber type over α.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiberType {
    SingleOrbit,
    InfinitelyManyOrbits,
}

/// Image of `[t, z, ν]` under the trivializing homeomorphism.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientPoint {
    pub moment: Vec<f64>,
    pub p: Complex64,
}

impl QuotientPoint {
    /// Sup-norm distance, treating the ℂ-factor by modulus.
    pub fn distance(&self, other: &QuotientPoint) -> f64 {
        let m = self
            .moment
            .iter()
            .zip(&other.moment)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        m.max((self.p - other.p).norm())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SheetMembership {
    pub point: Vec<Complex64>,
    pub on_sheet: bool,
}

/// `α + 𝔥⁰ + Σ ℝ₊ η_j` as generator data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelzantCone {
    pub apex: RationalVector,
    /// `d × (d−h)`, columns span `𝔥⁰`.
    pub linear: IntMatrix,
    /// `d × n`, column j is a positive multiple of the embedded η_j.
    pub rays: IntMatrix,
}

impl DelzantCone {
    /// All generators with the linear part adjoined with both signs.
    pub fn generators(&self) -> IntMatrix {
        let d = self.apex.len();
        let mut cols = self.rays.column_vecs();
        for c in self.linear.column_vecs() {
            cols.push(c.iter().map(|x| -x).collect());
            cols.push(c);
        }
        IntMatrix::from_columns(d, &cols)
    }

    pub fn contains(&self, point: &RationalVector) -> Result<ConeMembership, ModelError> {
        if point.len() != self.apex.len() {
            return Err(ModelError::DimensionMismatch {
                what: "point",
                expected: self.apex.len(),
                found: point.len(),
            });
        }
        Ok(cone_member(&point.sub(&self.apex), &self.generators())?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalModel {
    d: usize,
    rep: SubtorusRep,
    alpha: RationalVector,
    h0_basis: IntMatrix,
    lie_basis: IntMatrix,
    embedding: Vec<Vec<BigRational>>,
}

impl LocalModel {
    /// `h0_basis` holds one vector of `𝔥⁰ ⊂ ℚ^d` per row.
    pub fn new(
        d: usize,
        rep: SubtorusRep,
        alpha: RationalVector,
        h0_basis: IntMatrix,
    ) -> Result<Self, ModelError> {
        let h = rep.h();
        if alpha.len() != d {
            return Err(ModelError::DimensionMismatch {
                what: "alpha",
                expected: d,
                found: alpha.len(),
            });
        }
        if h > d {
            return Err(ModelError::DimensionMismatch {
                what: "dim H",
                expected: d,
                found: h,
            });
        }
        let h0_basis = if h0_basis.rows() == 0 {
            IntMatrix::zeros(0, d)
        } else {
            h0_basis
        };
        if h0_basis.cols() != d {
            return Err(ModelError::DimensionMismatch {
                what: "h0 basis",
                expected: d,
                found: h0_basis.cols(),
            });
        }
        let rank = h0_basis.rank();
        if rank != h0_basis.rows() || rank != d - h {
            return Err(ModelError::InvalidAnnihilatorBasis {
                expected: d - h,
                found: rank,
            });
        }
        let lie_basis = lattice_kernel_rows(&h0_basis);
        debug_assert_eq!(lie_basis.rows(), h);

        // E = Bᵀ (B Bᵀ)⁻¹ maps 𝔥*-coordinates to the orthogonal copy of 𝔥* in 𝔱*.
        let b: Vec<Vec<BigRational>> = lie_basis
            .row_vecs()
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        let gram: Vec<Vec<BigRational>> = (0..h)
            .map(|i| {
                (0..h)
                    .map(|j| b[i].iter().zip(&b[j]).map(|(x, y)| x * y).sum())
                    .collect()
            })
            .collect();
        let mut embedding = vec![vec![BigRational::zero(); h]; d];
        for k in 0..h {
            let mut e = vec![BigRational::zero(); h];
            e[k] = BigRational::one();
            let x = solve_rational(&gram, &e).expect("Gram matrix of a basis is invertible");
            for (r, row) in embedding.iter_mut().enumerate() {
                row[k] = (0..h).map(|i| &b[i][r] * &x[i]).sum();
            }
        }
        Ok(Self {
            d,
            rep,
            alpha,
            h0_basis,
            lie_basis,
            embedding,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rep(&self) -> &SubtorusRep {
        &self.rep
    }

    pub fn alpha(&self) -> &RationalVector {
        &self.alpha
    }

    pub fn h0_basis(&self) -> &IntMatrix {
        &self.h0_basis
    }

    /// Hermite basis of `𝔥 ∩ ℤ^d`, one vector per row.
    pub fn lie_basis(&self) -> &IntMatrix {
        &self.lie_basis
    }

    /// Image of an `𝔥*` coordinate vector in `𝔱*`.
    pub fn embed(&self, c: &[BigRational]) -> RationalVector {
        RationalVector(
            self.embedding
                .iter()
                .map(|row| row.iter().zip(c).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn embed_f64(&self, c: &[f64]) -> Vec<f64> {
        self.embedding
            .iter()
            .map(|row| row.iter().zip(c).map(|(a, b)| rational_to_f64(a) * b).sum())
            .collect()
    }

    pub fn embedded_weight(&self, j: usize) -> RationalVector {
        let w: Vec<BigRational> = self
            .rep
            .weight(j)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        self.embed(&w)
    }

    pub fn moment_image(&self) -> DelzantCone {
        let rays: Vec<Vec<BigInt>> = (0..self.rep.n())
            .map(|j| primitive_from_rational(&self.embedded_weight(j).0))
            .collect();
        DelzantCone {
            apex: self.alpha.clone(),
            linear: self.h0_basis.transpose(),
            rays: IntMatrix::from_columns(self.d, &rays),
        }
    }

    pub fn classify_fiber(&self) -> FiberType {
        if self.rep.is_proper() {
            FiberType::SingleOrbit
        } else {
            FiberType::InfinitelyManyOrbits
        }
    }

    /// The defining polynomial, checking that the model has infinitely many orbits per fiber.
    pub fn defining_polynomial(&self) -> Result<DefiningPolynomial, ModelError> {
        if self.classify_fiber() == FiberType::SingleOrbit {
            return Err(ModelError::ProperMomentMap);
        }
        Ok(self.rep.defining_polynomial()?)
    }

    pub fn check_annihilator(&self, nu: &RationalVector) -> Result<(), ModelError> {
        if nu.len() != self.d {
            return Err(ModelError::DimensionMismatch {
                what: "nu",
                expected: self.d,
                found: nu.len(),
            });
        }
        for i in 0..self.lie_basis.rows() {
            if !nu.dot_int(self.lie_basis.row(i)).is_zero() {
                return Err(ModelError::NotInAnnihilator);
            }
        }
        Ok(())
    }

    /// `α + Φ_H(z) + ν` in `𝔱*`.
    pub fn moment(&self, z: &[Complex64], nu: &[f64]) -> Result<Vec<f64>, ModelError> {
        let phi = self.rep.moment_eval(z)?;
        let e = self.embed_f64(&phi);
        Ok(self
            .alpha
            .to_f64()
            .iter()
            .zip(e)
            .zip(nu)
            .map(|((a, p), v)| a + p + v)
            .collect())
    }

    /// `F([t, z, ν]) = (α + Φ_H(z) + ν, P(z))`.
    pub fn trivializing_map(
        &self,
        z: &[Complex64],
        nu: &RationalVector,
    ) -> Result<QuotientPoint, ModelError> {
        let p = self.defining_polynomial()?;
        self.check_annihilator(nu)?;
        let moment = self.moment(z, &nu.to_f64())?;
        Ok(QuotientPoint {
            moment,
            p: p.evaluate(z),
        })
    }

    pub fn exceptional_sheet_member(&self, z: &[Complex64]) -> Result<SheetMembership, ModelError> {
        let p = self.defining_polynomial()?;
        if z.len() != p.len() {
            return Err(ModelError::DimensionMismatch {
                what: "z",
                expected: p.len(),
                found: z.len(),
            });
        }
        let on_sheet = z
            .iter()
            .zip(&p.exponents)
            .any(|(zj, e)| *zj == Complex64::new(0.0, 0.0) && !e.is_zero());
        Ok(SheetMembership {
            point: z.to_vec(),
            on_sheet,
        })
    }
}
