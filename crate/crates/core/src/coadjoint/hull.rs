//! Exact convex hulls of small rational point sets by double description.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::{dot, lattice_kernel, primitive, solve_rational, IntMatrix};

/// `normal · x ≤ offset` (or `= offset` for equations).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HalfSpace {
    pub normal: Vec<BigInt>,
    pub offset: BigRational,
}

impl HalfSpace {
    pub fn value(&self, x: &[BigRational]) -> BigRational {
        self.normal
            .iter()
            .zip(x)
            .map(|(a, b)| b * BigRational::from_integer(a.clone()))
            .fold(BigRational::zero(), |s, v| s + v)
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.value(x) <= self.offset
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    pub ambient_dim: usize,
    /// Dimension of the affine hull.
    pub dim: usize,
    pub vertices: Vec<Vec<BigRational>>,
    pub facets: Vec<HalfSpace>,
    /// Equations cutting out the affine hull.
    pub equations: Vec<HalfSpace>,
}

impl Polytope {
    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.equations.iter().all(|e| e.value(x) == e.offset) && self.facets.iter().all(|f| f.contains(x))
    }
}

fn lcm_denominators(v: &[BigRational]) -> BigInt {
    v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

fn integer_row(v: &[BigRational]) -> Vec<BigInt> {
    let l = lcm_denominators(v);
    v.iter()
        .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
        .collect()
}

/// Row echelon pivots of the rows of `rows` (rational).
fn pivot_columns(rows: &[Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for j in c..cols {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

/// Convex hull of a nonempty point set.
pub fn convex_hull(points: &[Vec<BigRational>]) -> Polytope {
    assert!(!points.is_empty(), "hull of an empty set");
    let k = points[0].len();
    let base = &points[0];
    let diffs: Vec<Vec<BigRational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let pivots = pivot_columns(&diffs, k);
    let m = pivots.len();

    let equations: Vec<HalfSpace> = {
        let int_rows: Vec<Vec<BigInt>> = diffs.iter().map(|d| integer_row(d)).collect();
        let dm = if int_rows.is_empty() {
            IntMatrix::zeros(0, k)
        } else {
            IntMatrix::from_rows(k, int_rows).expect("rows have length k")
        };
        let mut eqs: Vec<HalfSpace> = lattice_kernel(&dm)
            .column_vecs()
            .into_iter()
            .map(|c| {
                let c = canonical_sign(primitive(&c));
                let h = HalfSpace {
                    normal: c,
                    offset: BigRational::zero(),
                };
                let off = h.value(base);
                HalfSpace { offset: off, ..h }
            })
            .collect();
        eqs.sort();
        eqs
    };

    let reduced: Vec<Vec<BigRational>> = points
        .iter()
        .map(|p| pivots.iter().map(|&c| p[c].clone()).collect())
        .collect();

    let (facets, vertex_idx) = if m == 0 {
        (Vec::new(), vec![0])
    } else {
        let rays = facet_rays(&reduced, m);
        // direction space of the affine hull, for canonical full-dimensional normals
        let basis: Vec<Vec<BigRational>> = independent_rows(&diffs, &pivots);
        let mut facets: Vec<HalfSpace> = rays
            .iter()
            .map(|ray| lift_facet(ray, &pivots, &basis, k, points))
            .collect();
        facets.sort();
        facets.dedup();
        let vidx: Vec<usize> = (0..points.len())
            .filter(|&i| {
                let tight: Vec<Vec<BigInt>> = rays
                    .iter()
                    .filter(|r| ray_value(r, &reduced[i]).is_zero())
                    .map(|r| r[..m].to_vec())
                    .collect();
                !tight.is_empty() && IntMatrix::from_rows(m, tight).expect("length m").rank() == m
            })
            .collect();
        (facets, vidx)
    };
    let mut vertices: Vec<Vec<BigRational>> = vertex_idx.into_iter().map(|i| points[i].clone()).collect();
    vertices.sort();
    vertices.dedup();
    Polytope {
        ambient_dim: k,
        dim: m,
        vertices,
        facets,
        equations,
    }
}

fn canonical_sign(v: Vec<BigInt>) -> Vec<BigInt> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.into_iter().map(|x| -x).collect(),
        _ => v,
    }
}

fn independent_rows(diffs: &[Vec<BigRational>], pivots: &[usize]) -> Vec<Vec<BigRational>> {
    let mut chosen: Vec<Vec<BigRational>> = Vec::new();
    for d in diffs {
        let mut trial = chosen.clone();
        trial.push(d.clone());
        if pivot_columns(&trial, d.len()).len() == trial.len() {
            chosen = trial;
            if chosen.len() == pivots.len() {
                break;
            }
        }
    }
    chosen
}

/// `b − a·p` for a ray `(a, b)`.
fn ray_value(ray: &[BigInt], p: &[BigRational]) -> BigRational {
    let m = p.len();
    let ap = ray[..m].iter().zip(p).fold(BigRational::zero(), |s, (a, x)| {
        s + x * BigRational::from_integer(a.clone())
    });
    BigRational::from_integer(ray[m].clone()) - ap
}

fn lift_facet(
    ray: &[BigInt],
    pivots: &[usize],
    basis: &[Vec<BigRational>],
    k: usize,
    points: &[Vec<BigRational>],
) -> HalfSpace {
    let m = pivots.len();
    let mut a = vec![BigRational::zero(); k];
    for (i, &c) in pivots.iter().enumerate() {
        a[c] = BigRational::from_integer(ray[i].clone());
    }
    // project onto the direction space so the normal does not depend on the
    // choice of pivot coordinates
    let normal: Vec<BigRational> = if m == k {
        a
    } else {
        let gram: Vec<Vec<BigRational>> = basis
            .iter()
            .map(|u| basis.iter().map(|v| rdot(u, v)).collect())
            .collect();
        let rhs: Vec<BigRational> = basis.iter().map(|u| rdot(u, &a)).collect();
        let coef = solve_rational(&gram, &rhs).expect("basis is independent");
        (0..k)
            .map(|j| {
                basis
                    .iter()
                    .zip(&coef)
                    .fold(BigRational::zero(), |s, (u, c)| s + &u[j] * c)
            })
            .collect()
    };
    let normal = primitive(&integer_row(&normal));
    let mut h = HalfSpace {
        normal,
        offset: BigRational::zero(),
    };
    h.offset = points.iter().map(|p| h.value(p)).max().expect("nonempty");
    h
}

fn rdot(u: &[BigRational], v: &[BigRational]) -> BigRational {
    u.iter().zip(v).fold(BigRational::zero(), |s, (a, b)| s + a * b)
}

/// Extreme rays `(a, b)` of `{(a, b) : a·p ≤ b for all points}`, i.e. facets.
fn facet_rays(points: &[Vec<BigRational>], m: usize) -> Vec<Vec<BigInt>> {
    let rows: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| {
            let mut r: Vec<BigRational> = p.iter().map(|x| -x).collect();
            r.push(BigRational::one());
            integer_row(&r)
        })
        .collect();
    let d = m + 1;

    // initial simplex: greedily pick d independent constraint rows
    let mut init: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let mut trial: Vec<Vec<BigInt>> = init.iter().map(|&j| rows[j].clone()).collect();
        trial.push(rows[i].clone());
        if IntMatrix::from_rows(d, trial).expect("length d").rank() == init.len() + 1 {
            init.push(i);
            if init.len() == d {
                break;
            }
        }
    }
    assert_eq!(init.len(), d, "points are affinely spanning");

    // rays of the simplicial cone: columns of the inverse, scaled to integers
    let a: Vec<Vec<BigRational>> = init
        .iter()
        .map(|&i| {
            rows[i]
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let mut rays: Vec<Vec<BigInt>> = (0..d)
        .map(|j| {
            let mut e = vec![BigRational::zero(); d];
            e[j] = BigRational::one();
            let col = solve_rational(&a, &e).expect("invertible");
            primitive(&integer_row(&col))
        })
        .collect();
    let mut processed: Vec<usize> = init.clone();

    for i in 0..rows.len() {
        if init.contains(&i) {
            continue;
        }
        let c = &rows[i];
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(c, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_negative()).collect();
        if neg.is_empty() {
            processed.push(i);
            continue;
        }
        let tight = |r: &Vec<BigInt>| -> Vec<usize> {
            processed
                .iter()
                .copied()
                .filter(|&q| dot(&rows[q], r).is_zero())
                .collect()
        };
        let tight_sets: Vec<Vec<usize>> = rays.iter().map(tight).collect();
        let mut next: Vec<Vec<BigInt>> = (0..rays.len())
            .filter(|&j| !vals[j].is_negative())
            .map(|j| rays[j].clone())
            .collect();
        for &p in &pos {
            for &q in &neg {
                let common: Vec<usize> = tight_sets[p]
                    .iter()
                    .copied()
                    .filter(|x| tight_sets[q].contains(x))
                    .collect();
                if common.len() + 2 < d {
                    continue;
                }
                let adjacent = d < 2
                    || IntMatrix::from_rows(d, common.iter().map(|&x| rows[x].clone()).collect())
                        .map(|mm| mm.rank() == d - 2)
                        .unwrap_or(d == 2);
                if !adjacent {
                    continue;
                }
                let r: Vec<BigInt> = rays[q]
                    .iter()
                    .zip(&rays[p])
                    .map(|(rq, rp)| &vals[p] * rq - &vals[q] * rp)
                    .collect();
                next.push(primitive(&r));
            }
        }
        next.sort();
        next.dedup();
        rays = next;
        processed.push(i);
    }
    rays.sort();
    rays
}
