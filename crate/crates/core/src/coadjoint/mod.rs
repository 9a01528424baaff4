//! Torus actions on coadjoint orbits of SO(2k+1) and SO(2k): root systems of
//! types B and D, Weyl orbits as fixed-point sets, isotropy weights, moment
//! polytopes, and half-space ball certificates.

mod hull;

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{primitive, IntMatrix};

pub use hull::{convex_hull, HalfSpace, Polytope};

/// Largest rank for which the full Weyl group is enumerated.
pub const MAX_ENUMERATED_RANK: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoadjointError {
    #[error("invalid rank {rank} for type {family:?}")]
    InvalidRank { family: Family, rank: usize },
    #[error("point has {found} coordinates, rank is {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point is not a fixed point of the orbit")]
    NotFixedPoint,
    #[error("complexity is {0}, not one")]
    ComplexityNotOne(i64),
    #[error("hyperplane normal is zero")]
    ZeroNormal,
    #[error("rank {0} is too large to enumerate the Weyl group")]
    TooLarge(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    B,
    D,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
    pub roots: Vec<Vec<i64>>,
}

pub fn build_root_system(family: Family, rank: usize) -> Result<RootSystem, CoadjointError> {
    let min = match family {
        Family::B => 1,
        Family::D => 2,
    };
    if rank < min {
        return Err(CoadjointError::InvalidRank { family, rank });
    }
    let mut roots = BTreeSet::new();
    for i in 0..rank {
        if family == Family::B {
            for s in [1, -1] {
                let mut r = vec![0; rank];
                r[i] = s;
                roots.insert(r);
            }
        }
        for j in i + 1..rank {
            for (s, t) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut r = vec![0; rank];
                r[i] = s;
                r[j] = t;
                roots.insert(r);
            }
        }
    }
    Ok(RootSystem {
        family,
        rank,
        roots: roots.into_iter().rev().collect(),
    })
}

impl RootSystem {
    pub fn weyl_group_order(&self) -> u128 {
        let fact: u128 = (1..=self.rank as u128).product();
        let flips = match self.family {
            Family::B => self.rank,
            Family::D => self.rank - 1,
        };
        fact << flips
    }

    /// Simple reflections: adjacent transpositions, plus `x_k ↦ −x_k` (B) or
    /// `(x_{k−1}, x_k) ↦ (−x_k, −x_{k−1})` (D).
    pub fn generators(&self) -> Vec<WeylElement> {
        let k = self.rank;
        let mut gens: Vec<WeylElement> = (0..k.saturating_sub(1))
            .map(|i| {
                let mut perm: Vec<usize> = (0..k).collect();
                perm.swap(i, i + 1);
                WeylElement {
                    perm,
                    signs: vec![1; k],
                }
            })
            .collect();
        let mut perm: Vec<usize> = (0..k).collect();
        let mut signs = vec![1; k];
        match self.family {
            Family::B => signs[k - 1] = -1,
            Family::D => {
                perm.swap(k - 2, k - 1);
                signs[k - 2] = -1;
                signs[k - 1] = -1;
            }
        }
        gens.push(WeylElement { perm, signs });
        gens
    }

    /// Every Weyl group element, as signed permutations.
    pub fn elements(&self) -> Result<Vec<WeylElement>, CoadjointError> {
        let k = self.rank;
        if k > MAX_ENUMERATED_RANK {
            return Err(CoadjointError::TooLarge(k));
        }
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..k).collect();
        permutations(&mut perm, 0, &mut |p| {
            for mask in 0u32..(1 << k) {
                if self.family == Family::D && mask.count_ones() % 2 == 1 {
                    continue;
                }
                let signs = (0..k).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
                out.push(WeylElement {
                    perm: p.to_vec(),
                    signs,
                });
            }
        });
        Ok(out)
    }
}

fn permutations(p: &mut Vec<usize>, start: usize, f: &mut dyn FnMut(&[usize])) {
    if start == p.len() {
        f(p);
        return;
    }
    for i in start..p.len() {
        p.swap(start, i);
        permutations(p, start + 1, f);
        p.swap(start, i);
    }
}

/// Signed permutation `(w x)_i = signs_i · x_{perm_i}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct WeylElement {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl WeylElement {
    pub fn apply<T>(&self, x: &[T]) -> Vec<T>
    where
        T: Clone + std::ops::Neg<Output = T>,
    {
        self.perm
            .iter()
            .zip(&self.signs)
            .map(|(&p, &s)| if s < 0 { -x[p].clone() } else { x[p].clone() })
            .collect()
    }

    /// Coordinates whose sign is flipped.
    pub fn flips(&self) -> Vec<usize> {
        (0..self.signs.len()).filter(|&i| self.signs[i] < 0).collect()
    }

    pub fn moved(&self) -> usize {
        (0..self.perm.len())
            .filter(|&i| self.perm[i] != i || self.signs[i] < 0)
            .count()
    }

    fn simplicity_key(&self) -> (usize, usize, Vec<usize>, Vec<usize>) {
        (self.moved(), self.flips().len(), self.flips(), self.perm.clone())
    }
}

pub type Point = Vec<BigRational>;

/// Weyl orbit of `x`, by closure under the simple reflections. Sorted.
pub fn weyl_orbit(system: &RootSystem, x: &[BigRational]) -> Result<Vec<Point>, CoadjointError> {
    if x.len() != system.rank {
        return Err(CoadjointError::DimensionMismatch {
            expected: system.rank,
            found: x.len(),
        });
    }
    let gens = system.generators();
    let mut seen: BTreeSet<Point> = BTreeSet::new();
    let mut queue = VecDeque::from([x.to_vec()]);
    seen.insert(x.to_vec());
    while let Some(p) = queue.pop_front() {
        for g in &gens {
            let q = g.apply(&p);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

fn pairing(root: &[i64], y: &[BigRational]) -> BigRational {
    root.iter().zip(y).fold(BigRational::zero(), |s, (a, b)| {
        s + b * BigRational::from_integer(BigInt::from(*a))
    })
}

/// Roots with `⟨α, y⟩ < 0`.
pub fn negative_roots(system: &RootSystem, y: &[BigRational]) -> Vec<Vec<i64>> {
    system
        .roots
        .iter()
        .filter(|r| pairing(r, y).is_negative())
        .cloned()
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootSystemOrbit {
    pub system: RootSystem,
    pub base_point: Point,
    pub fixed_points: Vec<Point>,
    /// Isotropy weights, parallel to `fixed_points`.
    pub weights: Vec<Vec<Vec<i64>>>,
}

impl RootSystemOrbit {
    pub fn new(system: RootSystem, base_point: Point) -> Result<Self, CoadjointError> {
        let fixed_points = weyl_orbit(&system, &base_point)?;
        let weights = fixed_points.iter().map(|y| negative_roots(&system, y)).collect();
        Ok(RootSystemOrbit {
            system,
            base_point,
            fixed_points,
            weights,
        })
    }

    pub fn rank(&self) -> usize {
        self.system.rank
    }

    pub fn index_of(&self, y: &[BigRational]) -> Option<usize> {
        self.fixed_points.binary_search_by(|p| p.as_slice().cmp(y)).ok()
    }

    pub fn isotropy_weights_at(&self, y: &[BigRational]) -> Result<&[Vec<i64>], CoadjointError> {
        if y.len() != self.rank() {
            return Err(CoadjointError::DimensionMismatch {
                expected: self.rank(),
                found: y.len(),
            });
        }
        self.index_of(y)
            .map(|i| self.weights[i].as_slice())
            .ok_or(CoadjointError::NotFixedPoint)
    }

    /// Number of isotropy weights at each fixed point (constant over the orbit).
    pub fn weight_count(&self) -> usize {
        self.weights[0].len()
    }

    pub fn complexity(&self) -> i64 {
        self.weight_count() as i64 - self.rank() as i64
    }

    pub fn moment_polytope(&self) -> Polytope {
        convex_hull(&self.fixed_points)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Side {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Side {
    fn sign(self) -> i32 {
        match self {
            Side::Plus => 1,
            Side::Minus => -1,
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallCertificate {
    pub point: Point,
    pub normal: Vec<BigInt>,
    pub side: Side,
    pub differences_span_codim_one: bool,
    pub unique_fixed_point_on_side: bool,
    pub valid: bool,
}

fn normal_pairing(normal: &[BigInt], q: &[BigRational]) -> BigRational {
    normal.iter().zip(q).fold(BigRational::zero(), |s, (a, b)| {
        s + b * BigRational::from_integer(a.clone())
    })
}

/// Checks the half-space `{side · ⟨normal, x⟩ > 0}` at the fixed point `p`:
/// (a) the differences of the isotropy weights at `p` span exactly `normal⊥`;
/// (b) `p` is the only fixed point in the open half-space.
pub fn ball_certificate(
    orbit: &RootSystemOrbit,
    p: &[BigRational],
    normal: &[BigInt],
    side: Side,
) -> Result<BallCertificate, CoadjointError> {
    let k = orbit.rank();
    if normal.len() != k {
        return Err(CoadjointError::DimensionMismatch {
            expected: k,
            found: normal.len(),
        });
    }
    if normal.iter().all(Zero::is_zero) {
        return Err(CoadjointError::ZeroNormal);
    }
    let weights = orbit.isotropy_weights_at(p)?;
    if orbit.complexity() != 1 {
        return Err(CoadjointError::ComplexityNotOne(orbit.complexity()));
    }
    let diffs: Vec<Vec<BigInt>> = weights
        .iter()
        .flat_map(|a| {
            weights
                .iter()
                .map(move |b| a.iter().zip(b).map(|(x, y)| BigInt::from(x - y)).collect())
        })
        .collect();
    let perpendicular = diffs
        .iter()
        .all(|d: &Vec<BigInt>| crate::lattice::dot(d, normal).is_zero());
    let rank = IntMatrix::from_rows(k, diffs).expect("length k").rank();
    let differences_span_codim_one = perpendicular && rank + 1 == k;

    let s = BigRational::from_integer(BigInt::from(side.sign()));
    let on_side: Vec<&Point> = orbit
        .fixed_points
        .iter()
        .filter(|q| (normal_pairing(normal, q) * &s).is_positive())
        .collect();
    let unique_fixed_point_on_side = on_side.len() == 1 && on_side[0].as_slice() == p;
    Ok(BallCertificate {
        point: p.to_vec(),
        normal: normal.to_vec(),
        side,
        differences_span_codim_one,
        unique_fixed_point_on_side,
        valid: differences_span_codim_one && unique_fixed_point_on_side,
    })
}

/// Two certificates on opposite sides of one hyperplane, exchanged by a Weyl element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packing {
    pub first: BallCertificate,
    pub second: BallCertificate,
    pub weyl_element: WeylElement,
    /// The part of the polytope covered by neither open half-space lies in the hyperplane.
    pub complement_in_hyperplane: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PackingReport {
    pub weight_count: usize,
    pub complexity: i64,
    pub polytope: Polytope,
    pub candidate_normals: Vec<Vec<BigInt>>,
    pub valid_certificates: Vec<BallCertificate>,
    pub packings: Vec<Packing>,
    /// Reason no packing was reported, when none was.
    pub note: Option<String>,
}

impl PackingReport {
    pub fn packing_found(&self) -> bool {
        !self.packings.is_empty()
    }

    /// The two certificates of the first packing.
    pub fn certificates(&self) -> Vec<BallCertificate> {
        self.packings
            .first()
            .map(|p| vec![p.first.clone(), p.second.clone()])
            .unwrap_or_default()
    }
}

fn canonical_normal(v: &[BigInt]) -> Vec<BigInt> {
    let v = primitive(v);
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.iter().map(|x| -x).collect(),
        _ => v,
    }
}

/// Candidate normals in order: coordinate axes, facet normals, and the
/// orthogonal complement of each fixed point's weight-difference span.
pub fn candidate_normals(orbit: &RootSystemOrbit, polytope: &Polytope) -> Vec<Vec<BigInt>> {
    let k = orbit.rank();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut push = |v: Vec<BigInt>| {
        if v.iter().any(|x| !x.is_zero()) {
            let c = canonical_normal(&v);
            if !out.contains(&c) {
                out.push(c);
            }
        }
    };
    for i in 0..k {
        let mut e = vec![BigInt::zero(); k];
        e[i] = BigInt::from(1);
        push(e);
    }
    for f in &polytope.facets {
        push(f.normal.clone());
    }
    for w in &orbit.weights {
        let diffs: Vec<Vec<BigInt>> = w
            .iter()
            .flat_map(|a| {
                w.iter()
                    .map(move |b| a.iter().zip(b).map(|(x, y)| BigInt::from(x - y)).collect())
            })
            .collect();
        let m = IntMatrix::from_rows(k, diffs).expect("length k");
        let ker = crate::lattice::lattice_kernel(&m);
        if ker.cols() == 1 {
            push(ker.column(0));
        }
    }
    out
}

/// Searches fixed points × candidate normals × sides for valid certificates and
/// pairs those on opposite sides of one hyperplane that a Weyl element exchanges.
pub fn full_packing_report(orbit: &RootSystemOrbit) -> Result<PackingReport, CoadjointError> {
    let polytope = orbit.moment_polytope();
    let mut report = PackingReport {
        weight_count: orbit.weight_count(),
        complexity: orbit.complexity(),
        candidate_normals: Vec::new(),
        valid_certificates: Vec::new(),
        packings: Vec::new(),
        note: None,
        polytope,
    };
    if orbit.complexity() != 1 {
        report.note = Some(format!("complexity is {}, not one", orbit.complexity()));
        return Ok(report);
    }
    report.candidate_normals = candidate_normals(orbit, &report.polytope);
    for n in &report.candidate_normals {
        for side in [Side::Plus, Side::Minus] {
            for p in &orbit.fixed_points {
                let c = ball_certificate(orbit, p, n, side)?;
                if c.valid {
                    report.valid_certificates.push(c);
                }
            }
        }
    }
    let elements = orbit.system.elements()?;
    for a in report.valid_certificates.iter().filter(|c| c.side == Side::Plus) {
        for b in report
            .valid_certificates
            .iter()
            .filter(|c| c.side == Side::Minus && c.normal == a.normal)
        {
            let neg_normal: Vec<BigInt> = a.normal.iter().map(|x| -x).collect();
            let w = elements
                .iter()
                .filter(|w| w.apply(&a.point) == b.point && w.apply(&a.normal) == neg_normal)
                .min_by_key(|w| w.simplicity_key());
            if let Some(w) = w {
                let both_sides_cover = report.polytope.dim == orbit.rank();
                report.packings.push(Packing {
                    first: a.clone(),
                    second: b.clone(),
                    weyl_element: w.clone(),
                    complement_in_hyperplane: both_sides_cover,
                });
            }
        }
    }
    if report.packings.is_empty() {
        report.note = Some(if report.valid_certificates.is_empty() {
            "no valid ball certificate".into()
        } else {
            "no Weyl-symmetric pair of certificates".into()
        });
    }
    Ok(report)
}
