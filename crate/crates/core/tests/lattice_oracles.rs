#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use cxone::lattice::{
    cone_member, exists_sign_relation, hermite_rows, lattice_contains, lattice_equal, lattice_kernel,
    smith_normal_form, IntMatrix, RationalVector, SignRegime,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn to_matrix(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
    IntMatrix::from_rows(cols, rows.iter().map(|r| big(r)).collect()).unwrap()
}

fn small_matrix(
    max_rows: usize,
    max_cols: usize,
    bound: i64,
) -> impl Strategy<Value = (Vec<Vec<i64>>, usize)> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        (
            prop::collection::vec(prop::collection::vec(-bound..=bound, c), r),
            Just(c),
        )
    })
}

#[test]
fn smith_examples_against_minors() {
    let m = vec![big(&[2, 4]), big(&[6, 8])];
    assert_eq!(invariant_factors_by_minors(&m, 2), big(&[2, 4]));
    let snf = smith_normal_form(&IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]));
    assert_eq!(snf.invariant_factors(), big(&[2, 4]));
}

#[test]
fn kernel_examples_against_enumeration() {
    // [1,-1]: kernel spanned by (1,1)
    let gen = primitive_kernel_generator(&[vec![1, -1]], 2, 3).unwrap();
    assert_eq!(gen, vec![1, 1]);
    let k = lattice_kernel(&IntMatrix::from_i64_rows(&[&[1, -1]]));
    assert_eq!(k.column_vecs(), vec![big(&gen)]);

    // [1,2,1]: rank-two kernel; every small kernel vector is in the computed lattice
    let k = lattice_kernel(&IntMatrix::from_i64_rows(&[&[1, 2, 1]]));
    assert_eq!(k.cols(), 2);
    let basis = k.transpose();
    for v in kernel_in_box(&[vec![1, 2, 1]], 3, 3) {
        assert!(lattice_contains(&basis, &big(&v)), "{v:?}");
    }
    for v in [[2, -1, 0], [1, 0, -1]] {
        assert!(lattice_contains(&basis, &big(&v)));
    }

    let inv = lattice_kernel(&IntMatrix::from_i64_rows(&[&[1, 2], &[3, 4]]));
    assert_eq!(inv.cols(), 0);
}

#[test]
fn relation_examples_against_vertex_oracle() {
    for (w, onto, nonproper) in [
        (vec![vec![1, -1]], true, true),
        (vec![vec![1, 1]], false, false),
        (vec![vec![1, 0, -1], vec![0, 1, -1]], true, true),
        (vec![vec![1, 0, 0], vec![0, 1, -1]], false, true),
    ] {
        let n = w[0].len();
        assert_eq!(oracle_onto(&w, n), onto);
        assert_eq!(oracle_not_proper(&w, n), nonproper);
        let m = to_matrix(&w, n);
        assert_eq!(
            exists_sign_relation(&m, SignRegime::StrictPositive)
                .unwrap()
                .is_feasible(),
            onto
        );
        assert_eq!(
            exists_sign_relation(&m, SignRegime::NonnegNonzero)
                .unwrap()
                .is_feasible(),
            nonproper
        );
    }
}

#[test]
fn separating_functional_example() {
    let gens = IntMatrix::from_i64_rows(&[&[1, 0], &[0, 1]]);
    let p = RationalVector::from_integers(&[-1, 0]);
    let m = cone_member(&p, &gens).unwrap();
    assert!(!m.is_member());
    assert!(m.verify(&p, &gens));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn smith_form_is_consistent((rows, cols) in small_matrix(4, 4, 6)) {
        let m = to_matrix(&rows, cols);
        let snf = smith_normal_form(&m);
        prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d.clone());
        prop_assert!(snf.u.determinant().abs().is_one());
        prop_assert!(snf.v.determinant().abs().is_one());
        let f = snf.invariant_factors();
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(f.iter().all(|x| x.is_positive()));
        let big_rows: Vec<Vec<BigInt>> = rows.iter().map(|r| big(r)).collect();
        prop_assert_eq!(f, invariant_factors_by_minors(&big_rows, cols));
    }

    #[test]
    fn kernel_is_saturated_and_complete((rows, cols) in small_matrix(3, 4, 3)) {
        let m = to_matrix(&rows, cols);
        let k = lattice_kernel(&m);
        for v in k.column_vecs() {
            prop_assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
        }
        prop_assert_eq!(k.cols() + m.rank(), cols);
        // every kernel vector in a small box lies in the lattice spanned by the basis
        let basis = k.transpose();
        for v in kernel_in_box(&rows, cols, 2) {
            prop_assert!(lattice_contains(&basis, &big(&v)));
        }
        // stacking the kernel basis with m gives the expected rank
        let stacked = m.vstack(&basis);
        prop_assert_eq!(stacked.rank(), cols.min(m.rank() + k.cols()));
    }

    #[test]
    fn hermite_form_is_canonical((rows, cols) in small_matrix(3, 4, 5), seed in 0u64..1000) {
        let m = to_matrix(&rows, cols);
        // an elementary row operation and a swap do not change the lattice
        let mut other = rows.clone();
        if other.len() > 1 {
            let k = (seed % 5) as i64 - 2;
            for j in 0..cols {
                other[0][j] += k * other[1][j];
            }
            other.swap(0, 1);
        }
        let m2 = to_matrix(&other, cols);
        prop_assert_eq!(hermite_rows(&m), hermite_rows(&m2));
        prop_assert!(lattice_equal(&m, &m2));
    }

    #[test]
    fn sign_relations_agree_with_vertex_oracle((rows, cols) in small_matrix(3, 5, 3)) {
        let m = to_matrix(&rows, cols);
        let strict = exists_sign_relation(&m, SignRegime::StrictPositive).unwrap();
        let nonneg = exists_sign_relation(&m, SignRegime::NonnegNonzero).unwrap();
        prop_assert!(strict.verify(&m));
        prop_assert!(nonneg.verify(&m));
        prop_assert_eq!(strict.is_feasible(), oracle_onto(&rows, cols));
        prop_assert_eq!(nonneg.is_feasible(), oracle_not_proper(&rows, cols));
        if strict.is_feasible() {
            prop_assert!(nonneg.is_feasible());
        }
    }

    #[test]
    fn cone_membership_certificates_verify(
        (rows, cols) in small_matrix(3, 4, 3),
        point in prop::collection::vec(-4i64..=4, 3),
    ) {
        let m = to_matrix(&rows, cols);
        let p = RationalVector::from_integers(&point[..rows.len()]);
        let ans = cone_member(&p, &m).unwrap();
        prop_assert!(ans.verify(&p, &m));
    }
}
