//! Brute-force reference computations, kept independent of the library's own
//! algorithms (no Smith form, no simplex).

#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|x| BigInt::from(*x)).collect()
}

pub fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Determinant by rational Gaussian elimination.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigInt::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c].clone();
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let v = &a[c][j] * &f;
                a[i][j] -= v;
            }
        }
    }
    d.to_integer()
}

/// Invariant factors via determinantal divisors: `d_k = gcd of k×k minors`,
/// factor `k` is `d_k / d_{k-1}`. Stops at the first vanishing `d_k`.
pub fn invariant_factors_by_minors(m: &[Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    let rows = m.len();
    let mut prev = BigInt::one();
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let sub: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect())
                    .collect();
                g = g.gcd(&det(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

/// Rank over ℚ.
pub fn rank(m: &[Vec<BigInt>], cols: usize) -> usize {
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            let f = &a[i][c] / &a[r][c];
            for j in c..cols {
                let v = &a[r][j] * &f;
                a[i][j] -= v;
            }
        }
        r += 1;
    }
    r
}

/// Whether the rows generate all of `ℤ^cols`: rank `cols` and maximal minors coprime.
pub fn rows_generate_lattice(m: &[Vec<BigInt>], cols: usize) -> bool {
    if m.len() < cols {
        return cols == 0;
    }
    let mut g = BigInt::zero();
    for rs in combinations(m.len(), cols) {
        let sub: Vec<Vec<BigInt>> = rs.iter().map(|&r| m[r].clone()).collect();
        g = g.gcd(&det(&sub));
        if g.is_one() {
            return true;
        }
    }
    g.is_one()
}

pub fn mat_vec(w: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    w.iter()
        .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// All integer vectors in `[-bound, bound]^n` killed by `w`.
pub fn kernel_in_box(w: &[Vec<i64>], n: usize, bound: i64) -> Vec<Vec<i64>> {
    let side = (2 * bound + 1) as usize;
    let total = side.pow(n as u32);
    (0..total)
        .filter_map(|mut idx| {
            let v: Vec<i64> = (0..n)
                .map(|_| {
                    let d = (idx % side) as i64 - bound;
                    idx /= side;
                    d
                })
                .collect();
            mat_vec(w, &v).iter().all(|x| *x == 0).then_some(v)
        })
        .collect()
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, x| g.gcd(x))
}

/// Generator of a rank-one kernel: the nonzero kernel vector of least max-norm,
/// made primitive and sign-normalized so its first nonzero entry is positive.
pub fn primitive_kernel_generator(w: &[Vec<i64>], n: usize, bound: i64) -> Option<Vec<i64>> {
    let mut best: Option<Vec<i64>> = None;
    for v in kernel_in_box(w, n, bound) {
        if v.iter().all(|x| *x == 0) || gcd_all(&v) != 1 {
            continue;
        }
        let norm = v.iter().map(|x| x.abs()).max().unwrap();
        if best
            .as_ref()
            .is_none_or(|b| norm < b.iter().map(|x| x.abs()).max().unwrap())
        {
            best = Some(v);
        }
    }
    best.map(|v| {
        let s = v.iter().find(|x| **x != 0).map_or(1, |x| x.signum());
        v.iter().map(|x| x * s).collect()
    })
}

/// Solves a square rational system; `None` when singular.
fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(p, c);
        let piv = m[c][c].clone();
        for j in c..=n {
            m[c][j] = &m[c][j] / &piv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=n {
                    let v = &m[c][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Vertices of `{ξ ≥ 0 : Wξ = 0, Σξ = 1}`, by trying every support whose
/// columns determine ξ uniquely.
pub fn nonneg_relation_vertices(w: &[Vec<i64>], n: usize) -> Vec<Vec<BigRational>> {
    let mut out = Vec::new();
    for k in 1..=n {
        for support in combinations(n, k) {
            // equations restricted to the support: W_S ξ_S = 0, 1·ξ_S = 1
            let mut rows: Vec<Vec<BigRational>> = w
                .iter()
                .map(|r| support.iter().map(|&j| rat(r[j])).collect())
                .collect();
            rows.push(vec![rat(1); k]);
            let mut rhs = vec![rat(0); w.len()];
            rhs.push(rat(1));
            let int_rows: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|r| r.iter().map(|x| x.to_integer()).collect())
                .collect();
            if rank(&int_rows, k) != k {
                continue;
            }
            // pick k independent rows
            let mut chosen: Vec<usize> = Vec::new();
            for i in 0..rows.len() {
                let mut trial: Vec<Vec<BigInt>> = chosen.iter().map(|&c| int_rows[c].clone()).collect();
                trial.push(int_rows[i].clone());
                if rank(&trial, k) == trial.len() {
                    chosen.push(i);
                }
                if chosen.len() == k {
                    break;
                }
            }
            let a: Vec<Vec<BigRational>> = chosen.iter().map(|&i| rows[i].clone()).collect();
            let b: Vec<BigRational> = chosen.iter().map(|&i| rhs[i].clone()).collect();
            let Some(x) = solve(&a, &b) else { continue };
            // must satisfy all equations, not just the chosen ones
            let ok = rows
                .iter()
                .zip(&rhs)
                .all(|(r, v)| r.iter().zip(&x).fold(rat(0), |s, (p, q)| s + p * q) == *v);
            if ok && x.iter().all(|v| !v.is_negative()) {
                let mut full = vec![rat(0); n];
                for (&j, v) in support.iter().zip(x) {
                    full[j] = v;
                }
                out.push(full);
            }
        }
    }
    out
}

/// A nonnegative nonzero relation among the columns exists.
pub fn oracle_not_proper(w: &[Vec<i64>], n: usize) -> bool {
    !nonneg_relation_vertices(w, n).is_empty()
}

/// A strictly positive relation exists: every index is positive at some vertex.
pub fn oracle_onto(w: &[Vec<i64>], n: usize) -> bool {
    if n == 0 {
        return true;
    }
    let verts = nonneg_relation_vertices(w, n);
    (0..n).all(|j| verts.iter().any(|v| v[j].is_positive()))
}

/// Stabilizer in `H = ker(z ↦ z^ξ)` of a point with the given support, read off
/// from `λ_j = 1 (j ∈ S)` and `Π_{j∉S} λ_j^{ξ_j} = 1`.
pub fn stabilizer_is_trivial_direct(xi: &[i64], support: &[usize]) -> bool {
    let free: Vec<usize> = (0..xi.len()).filter(|j| !support.contains(j)).collect();
    match free.as_slice() {
        [] => true,
        [i] => xi[*i].abs() == 1,
        _ => false,
    }
}
