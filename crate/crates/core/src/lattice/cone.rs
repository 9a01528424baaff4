//! Sign-constrained relations among integer vectors and cone membership, each
//! answered with a certificate that checks by exact substitution.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{dot, primitive_from_rational, IntMatrix};
use super::rational::RationalVector;
use super::simplex::find_nonnegative_solution;
use super::LatticeError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignRegime {
    /// every ξ_j > 0
    StrictPositive,
    /// every ξ_j ≥ 0 and ξ ≠ 0
    NonnegNonzero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeasibilityStatus {
    Feasible,
    Infeasible,
}

/// Outcome of the relation search `Σ ξ_j η_j = 0` under a sign regime.
///
/// Feasible: `witness` is the relation ξ (length = number of columns).
/// Infeasible: `witness` is a functional y on the row space with
/// `⟨y, η_j⟩ ≥ 0` for all j and not all zero (strict-positive regime), or
/// `⟨y, η_j⟩ > 0` for all j (nonneg-nonzero regime).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFeasibility {
    pub status: FeasibilityStatus,
    pub regime: SignRegime,
    pub witness: RationalVector,
}

impl ConeFeasibility {
    pub fn is_feasible(&self) -> bool {
        self.status == FeasibilityStatus::Feasible
    }

    /// Re-checks the witness against `weights` with exact arithmetic.
    pub fn verify(&self, weights: &IntMatrix) -> bool {
        let w = &self.witness.0;
        match self.status {
            FeasibilityStatus::Feasible => {
                if w.len() != weights.cols() {
                    return false;
                }
                let signs_ok = match self.regime {
                    SignRegime::StrictPositive => w.iter().all(Signed::is_positive),
                    SignRegime::NonnegNonzero => {
                        w.iter().all(|x| !x.is_negative()) && w.iter().any(|x| !x.is_zero())
                    }
                };
                signs_ok && (0..weights.rows()).all(|i| self.witness.dot_int(weights.row(i)).is_zero())
            }
            FeasibilityStatus::Infeasible => {
                if w.len() != weights.rows() {
                    return false;
                }
                let pairings: Vec<BigRational> = (0..weights.cols())
                    .map(|j| self.witness.dot_int(&weights.column(j)))
                    .collect();
                match self.regime {
                    SignRegime::StrictPositive => {
                        pairings.iter().all(|p| !p.is_negative()) && pairings.iter().any(Signed::is_positive)
                    }
                    SignRegime::NonnegNonzero => pairings.iter().all(Signed::is_positive),
                }
            }
        }
    }
}

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

fn integral(v: Vec<BigInt>) -> RationalVector {
    RationalVector::from_bigints(&v)
}

/// Decides whether `Σ ξ_j η_j = 0` has a solution with the requested signs,
/// where η_j are the columns of `weights`.
pub fn exists_sign_relation(
    weights: &IntMatrix,
    regime: SignRegime,
) -> Result<ConeFeasibility, LatticeError> {
    let (h, n) = (weights.rows(), weights.cols());
    if n == 0 {
        return Err(LatticeError::Empty("weights must have at least one column"));
    }

    let primal = match regime {
        SignRegime::StrictPositive => {
            // ξ = 1 + s, s ≥ 0:  W s = -W·1
            let a: Vec<Vec<BigRational>> = (0..h).map(|i| weights.row(i).iter().map(rat).collect()).collect();
            let b: Vec<BigRational> = (0..h)
                .map(|i| -rat(&weights.row(i).iter().sum::<BigInt>()))
                .collect();
            find_nonnegative_solution(&a, &b, n)
                .map(|s| s.into_iter().map(|x| x + BigRational::one()).collect::<Vec<_>>())
        }
        SignRegime::NonnegNonzero => {
            // W ξ = 0, Σ ξ = 1, ξ ≥ 0
            let mut a: Vec<Vec<BigRational>> =
                (0..h).map(|i| weights.row(i).iter().map(rat).collect()).collect();
            a.push(vec![BigRational::one(); n]);
            let mut b = vec![BigRational::zero(); h];
            b.push(BigRational::one());
            find_nonnegative_solution(&a, &b, n)
        }
    };
    if let Some(xi) = primal {
        return Ok(ConeFeasibility {
            status: FeasibilityStatus::Feasible,
            regime,
            witness: integral(primitive_from_rational(&xi)),
        });
    }

    // Alternative system in y = y⁺ - y⁻ with slacks t ≥ 0, one row per weight:
    //   ⟨η_j, y⟩ - t_j = c_j
    // strict-positive: c = 0 and Σ_j ⟨η_j, y⟩ = 1;  nonneg-nonzero: c = 1.
    let nv = 2 * h + n;
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n + 1);
    for j in 0..n {
        let mut row = vec![BigRational::zero(); nv];
        for i in 0..h {
            row[i] = rat(&weights[(i, j)]);
            row[h + i] = -rat(&weights[(i, j)]);
        }
        row[2 * h + j] = -BigRational::one();
        a.push(row);
        b.push(match regime {
            SignRegime::StrictPositive => BigRational::zero(),
            SignRegime::NonnegNonzero => BigRational::one(),
        });
    }
    if regime == SignRegime::StrictPositive {
        let mut row = vec![BigRational::zero(); nv];
        for i in 0..h {
            let s: BigInt = weights.row(i).iter().sum();
            row[i] = rat(&s);
            row[h + i] = -rat(&s);
        }
        a.push(row);
        b.push(BigRational::one());
    }
    let sol = find_nonnegative_solution(&a, &b, nv).expect("one of the two alternative systems is solvable");
    let y: Vec<BigRational> = (0..h).map(|i| &sol[i] - &sol[h + i]).collect();
    Ok(ConeFeasibility {
        status: FeasibilityStatus::Infeasible,
        regime,
        witness: integral(primitive_from_rational(&y)),
    })
}

/// Answer to a cone membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeMembership {
    /// `point = Σ c_j g_j` with every `c_j ≥ 0`.
    Member { coefficients: RationalVector },
    /// A functional y with `⟨y, g_j⟩ ≥ 0` for every generator and `⟨y, point⟩ < 0`.
    Separated { functional: RationalVector },
}

impl ConeMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, ConeMembership::Member { .. })
    }

    pub fn verify(&self, point: &RationalVector, generators: &IntMatrix) -> bool {
        match self {
            ConeMembership::Member { coefficients } => {
                coefficients.len() == generators.cols()
                    && coefficients.0.iter().all(|c| !c.is_negative())
                    && (0..generators.rows()).all(|i| coefficients.dot_int(generators.row(i)) == point.0[i])
            }
            ConeMembership::Separated { functional } => {
                functional.len() == generators.rows()
                    && (0..generators.cols())
                        .all(|j| !functional.dot_int(&generators.column(j)).is_negative())
                    && functional.dot(&point.0).is_negative()
            }
        }
    }
}

/// Is `point` in the nonnegative span of the columns of `generators`?
pub fn cone_member(point: &RationalVector, generators: &IntMatrix) -> Result<ConeMembership, LatticeError> {
    let (d, m) = (generators.rows(), generators.cols());
    if point.len() != d {
        return Err(LatticeError::DimensionMismatch {
            expected: d,
            found: point.len(),
        });
    }
    let a: Vec<Vec<BigRational>> = (0..d)
        .map(|i| generators.row(i).iter().map(rat).collect())
        .collect();
    if let Some(c) = find_nonnegative_solution(&a, &point.0, m) {
        return Ok(ConeMembership::Member {
            coefficients: RationalVector(c),
        });
    }
    // Gᵀ y - t = 0, ⟨point, y⟩ = -1
    let nv = 2 * d + m;
    let mut rows = Vec::with_capacity(m + 1);
    let mut rhs = Vec::with_capacity(m + 1);
    for j in 0..m {
        let mut row = vec![BigRational::zero(); nv];
        for i in 0..d {
            row[i] = rat(&generators[(i, j)]);
            row[d + i] = -rat(&generators[(i, j)]);
        }
        row[2 * d + j] = -BigRational::one();
        rows.push(row);
        rhs.push(BigRational::zero());
    }
    let mut row = vec![BigRational::zero(); nv];
    for i in 0..d {
        row[i] = point.0[i].clone();
        row[d + i] = -point.0[i].clone();
    }
    rows.push(row);
    rhs.push(-BigRational::one());
    let sol = find_nonnegative_solution(&rows, &rhs, nv).expect("Farkas alternative must be solvable");
    let y: Vec<BigRational> = (0..d).map(|i| &sol[i] - &sol[d + i]).collect();
    Ok(ConeMembership::Separated {
        functional: integral(primitive_from_rational(&y)),
    })
}

/// Convenience used by callers holding integer weight rows: `Σ ξ_j η_j` for integer ξ.
pub fn combine_columns(weights: &IntMatrix, xi: &[BigInt]) -> Vec<BigInt> {
    (0..weights.rows()).map(|i| dot(weights.row(i), xi)).collect()
}
