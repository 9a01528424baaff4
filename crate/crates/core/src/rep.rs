//! Compact abelian subgroups `H ⊆ (S¹)ⁿ` acting on `ℂⁿ`, and the lattice-level
//! facts that can be read off their weights: surjectivity and properness of the
//! moment map, the defining polynomial, the onto/toric splitting, stabilizers of
//! coordinate strata and the exceptional-orbit criterion.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::lattice::{
    exists_sign_relation, lattice_equal, lattice_kernel_rows, primitive, smith_normal_form, ConeFeasibility,
    IntMatrix, SignRegime,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("weight columns do not generate the weight lattice (action is not effective)")]
    Ineffective,
    #[error("kernel matrix does not have full row rank")]
    RankDeficient,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not complexity one: n = {n} but dim H = {h}")]
    NotComplexityOne { n: usize, h: usize },
    #[error("moment map is proper; no nonnegative relation among the weights")]
    NotNonProper,
    #[error("H is not the kernel of the primitive character with exponents {xi:?}")]
    ExactnessFailure { xi: Vec<BigInt> },
    #[error("moment map is not onto")]
    NotSurjective,
    #[error("coordinate index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("exceptional-orbit criterion disagrees with the stabilizer computation for support {support:?}")]
    CrossCheck { support: Vec<usize> },
}

/// How `H` is handed to us.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Presentation {
    /// `h × n` weight matrix; column j is η_j. `H` is the image of `(S¹)^h`.
    Image(IntMatrix),
    /// `(n−h) × n` matrix `Q`; `H = {λ : λ^{Q_i} = 1 for every row}`.
    Kernel(IntMatrix),
}

/// A subgroup `H ⊆ (S¹)ⁿ`.
///
/// Besides the input presentation we keep the weights η_j of the identity
/// component (rows of `weights` index a lattice basis of 𝔥) and the annihilator
/// lattice `{v ∈ ℤⁿ : λ^v = 1 on H}` in Hermite form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtorusRep {
    n: usize,
    presentation: Presentation,
    weights: IntMatrix,
    annihilator: IntMatrix,
}

impl SubtorusRep {
    /// Connected subtorus given by its weights. The columns must generate `ℤ^h`.
    pub fn from_weights(weights: IntMatrix) -> Result<Self, RepError> {
        let (h, n) = (weights.rows(), weights.cols());
        let snf = smith_normal_form(&weights);
        let f = snf.invariant_factors();
        if f.len() != h || f.iter().any(|d| !d.is_one()) {
            return Err(RepError::Ineffective);
        }
        let annihilator = lattice_kernel_rows(&weights);
        debug_assert_eq!(annihilator.rows(), n - h);
        Ok(Self {
            n,
            presentation: Presentation::Image(weights.clone()),
            weights,
            annihilator: annihilator.hermite(),
        })
    }

    /// Possibly disconnected subgroup cut out by characters. `Q` must have full row rank.
    pub fn from_kernel(n: usize, q: IntMatrix) -> Result<Self, RepError> {
        if q.cols() != n {
            return Err(RepError::DimensionMismatch {
                expected: n,
                found: q.cols(),
            });
        }
        if q.rank() != q.rows() {
            return Err(RepError::RankDeficient);
        }
        let weights = lattice_kernel_rows(&q);
        Ok(Self {
            n,
            annihilator: q.hermite(),
            presentation: Presentation::Kernel(q),
            weights,
        })
    }

    pub fn new(n: usize, presentation: Presentation) -> Result<Self, RepError> {
        match presentation {
            Presentation::Image(w) => {
                if w.cols() != n {
                    return Err(RepError::DimensionMismatch {
                        expected: n,
                        found: w.cols(),
                    });
                }
                Self::from_weights(w)
            }
            Presentation::Kernel(q) => Self::from_kernel(n, q),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> usize {
        self.weights.rows()
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// `h × n`; column j is η_j in the lattice basis of 𝔥.
    pub fn weights(&self) -> &IntMatrix {
        &self.weights
    }

    pub fn weight(&self, j: usize) -> Vec<BigInt> {
        self.weights.column(j)
    }

    /// Hermite basis of the characters of `(S¹)ⁿ` that are trivial on `H`.
    pub fn annihilator(&self) -> &IntMatrix {
        &self.annihilator
    }

    pub fn is_connected(&self) -> bool {
        smith_normal_form(&self.annihilator).torsion().is_empty()
    }

    pub fn weights_f64(&self) -> Vec<Vec<f64>> {
        (0..self.h())
            .map(|i| {
                self.weights
                    .row(i)
                    .iter()
                    .map(|x| x.to_f64().unwrap_or(f64::NAN))
                    .collect()
            })
            .collect()
    }

    /// `½ Σ |z_j|² η_j`.
    pub fn moment_eval(&self, z: &[Complex64]) -> Result<Vec<f64>, RepError> {
        if z.len() != self.n {
            return Err(RepError::DimensionMismatch {
                expected: self.n,
                found: z.len(),
            });
        }
        Ok(self
            .weights_f64()
            .iter()
            .map(|row| 0.5 * row.iter().zip(z).map(|(w, zj)| w * zj.norm_sqr()).sum::<f64>())
            .collect())
    }

    /// Certificate for (or against) a strictly positive relation among the weights.
    pub fn onto_certificate(&self) -> ConeFeasibility {
        exists_sign_relation(&self.weights, SignRegime::StrictPositive)
            .expect("representation has at least one coordinate")
    }

    /// Certificate for (or against) a nonzero nonnegative relation among the weights.
    pub fn nonproper_certificate(&self) -> ConeFeasibility {
        exists_sign_relation(&self.weights, SignRegime::NonnegNonzero)
            .expect("representation has at least one coordinate")
    }

    pub fn is_onto(&self) -> bool {
        self.n == 0 || self.onto_certificate().is_feasible()
    }

    pub fn is_proper(&self) -> bool {
        self.n == 0 || !self.nonproper_certificate().is_feasible()
    }

    pub fn defining_polynomial(&self) -> Result<DefiningPolynomial, RepError> {
        let (n, h) = (self.n, self.h());
        if n == 0 || h + 1 != n {
            return Err(RepError::NotComplexityOne { n, h });
        }
        let rel = lattice_kernel_rows(&self.weights);
        debug_assert_eq!(rel.rows(), 1);
        let g = primitive(rel.row(0));
        let xi = if g.iter().all(|x| !x.is_negative()) {
            g
        } else if g.iter().all(|x| !x.is_positive()) {
            g.iter().map(|x| -x).collect()
        } else {
            return Err(RepError::NotNonProper);
        };
        let character = IntMatrix::from_rows(n, vec![xi.clone()]).expect("row length n");
        if !lattice_equal(&self.annihilator, &character) {
            return Err(RepError::ExactnessFailure { xi });
        }
        Ok(DefiningPolynomial { exponents: xi })
    }

    /// Splits off the coordinates with ξ_j = 0 as a toric factor.
    pub fn split(&self) -> Result<Splitting, RepError> {
        let xi = self.defining_polynomial()?;
        let positive: Vec<usize> = (0..self.n).filter(|&j| xi.exponents[j].is_positive()).collect();
        let zero: Vec<usize> = (0..self.n).filter(|&j| xi.exponents[j].is_zero()).collect();
        let xi_prime: Vec<BigInt> = positive.iter().map(|&j| xi.exponents[j].clone()).collect();
        let surjective = SubtorusRep::from_kernel(
            positive.len(),
            IntMatrix::from_rows(positive.len(), vec![xi_prime]).expect("row length"),
        )?;
        let toric = SubtorusRep::from_weights(IntMatrix::identity(zero.len()))?;
        if !surjective.is_onto() {
            return Err(RepError::NotSurjective);
        }
        let mut permutation = positive;
        permutation.extend(zero);
        Ok(Splitting {
            permutation,
            surjective,
            toric,
            polynomial: xi,
        })
    }

    /// `{λ ∈ H : λ_j = 1 for every j in support}`.
    pub fn stabilizer(&self, support: &[usize]) -> Result<StabilizerInfo, RepError> {
        let mut rows = self.annihilator.row_vecs();
        for &j in support {
            if j >= self.n {
                return Err(RepError::IndexOutOfRange { index: j, n: self.n });
            }
            let mut e = vec![BigInt::zero(); self.n];
            e[j] = BigInt::one();
            rows.push(e);
        }
        let m = IntMatrix::from_rows(self.n, rows).expect("row length n");
        let snf = smith_normal_form(&m);
        let dimension = self.n - snf.rank();
        let component_group = snf.torsion();
        Ok(StabilizerInfo {
            is_trivial: dimension == 0 && component_group.is_empty(),
            dimension,
            component_group,
        })
    }

    /// Exceptional-orbit criterion for the orbit of any z whose nonzero
    /// coordinates are exactly `support`. Requires a surjective moment map in
    /// complexity one; apply to the surjective factor of [`SubtorusRep::split`] otherwise.
    pub fn is_exceptional_orbit(&self, support: &[usize]) -> Result<bool, RepError> {
        let xi = self.defining_polynomial()?;
        if !xi.is_positive() {
            return Err(RepError::NotSurjective);
        }
        let mut present = vec![false; self.n];
        for &j in support {
            if j >= self.n {
                return Err(RepError::IndexOutOfRange { index: j, n: self.n });
            }
            present[j] = true;
        }
        let missing: Vec<usize> = (0..self.n).filter(|&j| !present[j]).collect();
        let free = match missing.as_slice() {
            [] => true,
            [i] => xi.exponents[*i].is_one(),
            _ => false,
        };
        let stab = self.stabilizer(support)?;
        if stab.is_trivial != free {
            return Err(RepError::CrossCheck {
                support: support.to_vec(),
            });
        }
        Ok(!free)
    }
}

/// `P(z) = Π z_j^{ξ_j}` with ξ primitive and nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningPolynomial {
    pub exponents: Vec<BigInt>,
}

impl DefiningPolynomial {
    pub fn new(exponents: Vec<BigInt>) -> Self {
        Self { exponents }
    }

    pub fn from_i64(exponents: &[i64]) -> Self {
        Self::new(exponents.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// All exponents strictly positive (equivalently, the moment map is onto).
    pub fn is_positive(&self) -> bool {
        self.exponents.iter().all(Signed::is_positive)
    }

    pub fn exponents_f64(&self) -> Vec<f64> {
        self.exponents
            .iter()
            .map(|x| x.to_f64().unwrap_or(f64::INFINITY))
            .collect()
    }

    /// `P(z)`, accumulated as log-magnitude plus phase so large exponents do not overflow.
    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.len(), "dimension mismatch");
        let mut log_mag = 0.0;
        let mut phase = 0.0;
        for (zj, e) in z.iter().zip(self.exponents_f64()) {
            if e == 0.0 {
                continue;
            }
            let r = zj.norm();
            if r == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            log_mag += e * r.ln();
            phase += e * zj.arg();
        }
        Complex64::from_polar(log_mag.exp(), phase)
    }

    /// Holomorphic partial derivatives `∂P/∂z_j`.
    pub fn gradient(&self, z: &[Complex64]) -> Vec<Complex64> {
        let e = self.exponents_f64();
        (0..self.len())
            .map(|j| {
                if e[j] == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let mut reduced = self.exponents.clone();
                reduced[j] -= 1;
                let rest = DefiningPolynomial::new(reduced).evaluate(z);
                rest * e[j]
            })
            .collect()
    }
}

/// Result of a stabilizer computation: `H_S ≅ (S¹)^dimension × Π ℤ/d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerInfo {
    pub dimension: usize,
    pub component_group: Vec<BigInt>,
    pub is_trivial: bool,
}

/// `H = H′ × H″` after permuting coordinates: indices with ξ_j > 0 first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    /// Position k of the split coordinates holds original coordinate `permutation[k]`.
    pub permutation: Vec<usize>,
    /// `H′ = ker P′` on `ℂ^{h′+1}`, surjective moment map.
    pub surjective: SubtorusRep,
    /// `H″ = (S¹)^{h″}` acting by the identity.
    pub toric: SubtorusRep,
    pub polynomial: DefiningPolynomial,
}

impl Splitting {
    pub fn h_prime(&self) -> usize {
        self.surjective.h()
    }

    pub fn h_double_prime(&self) -> usize {
        self.toric.h()
    }

    /// Annihilator of `H′ × H″`, written back in the original coordinates.
    pub fn reassembled_annihilator(&self) -> IntMatrix {
        let n = self.permutation.len();
        let k = self.surjective.n();
        let mut rows = Vec::new();
        for r in self.surjective.annihilator().row_vecs() {
            let mut v = vec![BigInt::zero(); n];
            for (pos, x) in r.into_iter().enumerate() {
                v[self.permutation[pos]] = x;
            }
            rows.push(v);
        }
        for r in self.toric.annihilator().row_vecs() {
            let mut v = vec![BigInt::zero(); n];
            for (pos, x) in r.into_iter().enumerate() {
                v[self.permutation[k + pos]] = x;
            }
            rows.push(v);
        }
        IntMatrix::from_rows(n, rows).expect("row length n")
    }
}
