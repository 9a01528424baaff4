use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{hermite_rows, IntMatrix};

/// Smith decomposition `U · M · V = D` with `U`, `V` unimodular and `D` diagonal,
/// its nonzero diagonal entries positive and forming a divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries `d₁ | d₂ | …`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k)
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Orders of the nontrivial cyclic summands of the cokernel torsion.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors()
            .into_iter()
            .filter(|x| !x.is_one())
            .collect()
    }
}

fn min_abs_nonzero(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if d[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some(_) = min_abs_nonzero(&d, t) else { break };
        loop {
            let (pi, pj) = min_abs_nonzero(&d, t).expect("nonzero submatrix");
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            // divisibility of the remaining block by the pivot
            let bad_row =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match bad_row {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

/// Basis (as columns) of the saturated lattice `{v ∈ ℤ^cols : m·v = 0}`,
/// canonicalized to Hermite form so the output does not depend on pivoting.
pub fn lattice_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let idx: Vec<usize> = (r..m.cols()).collect();
    let basis = snf.v.select_columns(&idx);
    let canon = hermite_rows(&basis.transpose());
    IntMatrix::from_columns(m.cols(), &canon.row_vecs())
}

/// Kernel basis as rows (each row a kernel vector).
pub fn lattice_kernel_rows(m: &IntMatrix) -> IntMatrix {
    lattice_kernel(m).transpose()
}
