//! Exact phase-one simplex over the rationals.
//!
//! Decides `∃ x ≥ 0 : A x = b` and returns a basic feasible point. Bland's rule
//! keeps the pivoting finite; sizes here stay small (tens of variables).

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Returns a nonnegative solution of `a · x = b` or `None` when none exists.
///
/// `a` is given by rows, each of length `nvars`.
pub fn find_nonnegative_solution(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    nvars: usize,
) -> Option<Vec<BigRational>> {
    let m = a.len();
    assert_eq!(b.len(), m, "row count mismatch");
    if m == 0 {
        return Some(vec![BigRational::zero(); nvars]);
    }

    // Columns: original variables 0..nvars, artificials nvars..nvars+m, rhs last.
    let width = nvars + m + 1;
    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        assert_eq!(row.len(), nvars, "row length mismatch");
        let flip = rhs.is_negative();
        let mut r = vec![BigRational::zero(); width];
        for (j, x) in row.iter().enumerate() {
            r[j] = if flip { -x.clone() } else { x.clone() };
        }
        r[nvars + i] = BigRational::from_integer(1.into());
        r[width - 1] = if flip { -rhs.clone() } else { rhs.clone() };
        tab.push(r);
    }
    let mut basis: Vec<usize> = (nvars..nvars + m).collect();

    // Reduced costs of the phase-one objective (sum of artificials).
    let mut cost = vec![BigRational::zero(); width];
    for r in &tab {
        for j in 0..nvars {
            cost[j] -= &r[j];
        }
        cost[width - 1] -= &r[width - 1];
    }

    while let Some(enter) = (0..nvars + m).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, r) in tab.iter().enumerate() {
            if !r[enter].is_positive() {
                continue;
            }
            let ratio = &r[width - 1] / &r[enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // Phase one is bounded below by zero, so a leaving row always exists.
        let (pr, _) = leave.expect("unbounded phase-one objective");
        pivot(&mut tab, &mut cost, pr, enter);
        basis[pr] = enter;
    }

    if !cost[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); nvars];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < nvars {
            x[bv] = tab[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(tab: &mut [Vec<BigRational>], cost: &mut [BigRational], pr: usize, pc: usize) {
    let inv = tab[pr][pc].recip();
    for x in tab[pr].iter_mut() {
        *x *= &inv;
    }
    let prow = tab[pr].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i == pr || r[pc].is_zero() {
            continue;
        }
        let f = r[pc].clone();
        for (x, p) in r.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *x -= p * &f;
            }
        }
    }
    if !cost[pc].is_zero() {
        let f = cost[pc].clone();
        for (x, p) in cost.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *x -= p * &f;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn residual_ok(a: &[Vec<BigRational>], b: &[BigRational], x: &[BigRational]) -> bool {
        x.iter().all(|v| !v.is_negative())
            && a.iter()
                .zip(b)
                .all(|(row, rhs)| row.iter().zip(x).map(|(p, v)| p * v).sum::<BigRational>() == *rhs)
    }

    #[test]
    fn feasible_system() {
        let a = vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)]];
        let b = vec![q(2), q(3)];
        let x = find_nonnegative_solution(&a, &b, 3).unwrap();
        assert!(residual_ok(&a, &b, &x));
    }

    #[test]
    fn infeasible_system() {
        // x + y = -1 with x, y >= 0
        let a = vec![vec![q(1), q(1)]];
        assert!(find_nonnegative_solution(&a, &[q(-1)], 2).is_none());
        // x - y = 1 and y - x = 1
        let a = vec![vec![q(1), q(-1)], vec![q(-1), q(1)]];
        assert!(find_nonnegative_solution(&a, &[q(1), q(1)], 2).is_none());
    }

    #[test]
    fn degenerate_redundant_rows() {
        let a = vec![vec![q(1), q(2)], vec![q(2), q(4)], vec![q(0), q(0)]];
        let b = vec![q(4), q(8), q(0)];
        let x = find_nonnegative_solution(&a, &b, 2).unwrap();
        assert!(residual_ok(&a, &b, &x));
    }

    #[test]
    fn no_rows() {
        assert_eq!(find_nonnegative_solution(&[], &[], 2).unwrap(), vec![q(0), q(0)]);
    }
}
